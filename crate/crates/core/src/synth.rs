//! Seeded synthetic data: a Maltese-shaped lexicon for exercising the full
//! pipeline, and small controlled classification tasks with known structure.

use crate::inventory;
use crate::lexicon::{
    Etymology, Gender, Instance, InstanceSet, LexemeId, LexicalEntry, Lexicon, Task,
};
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Seed of the bundled fixture `fixtures/maltese_synthetic.tsv`.
pub const FIXTURE_SEED: u64 = 20_231;
/// Rows in the bundled fixture.
pub const FIXTURE_ROWS: usize = 300;

const SEMITIC_CONSONANTS: &[&str] = &[
    "b", "d", "f", "ġ", "għ", "h", "ħ", "j", "k", "l", "m", "n", "q", "r", "s", "t", "w", "x", "ż",
];
const ROMANCE_CONSONANTS: &[&str] = &[
    "b", "d", "f", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "ċ", "ġ", "pr", "tr", "st",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u"];
const SEMITIC_VOWELS: &[&str] = &["a", "e", "i", "o", "u", "ie"];

#[derive(Clone, Copy)]
enum Shape {
    RomanceA,
    RomanceUo,
    RomanceI,
    RomanceConsonant,
    SemiticFeminine,
    SemiticCvcvc,
    SemiticCcvc,
    SemiticCiec,
    SemiticAgentive,
}

impl Shape {
    fn etymology(self) -> Etymology {
        match self {
            Shape::RomanceA | Shape::RomanceUo | Shape::RomanceI | Shape::RomanceConsonant => {
                Etymology::NonSemitic
            }
            _ => Etymology::Semitic,
        }
    }

    fn usual_gender(self) -> Gender {
        match self {
            Shape::RomanceA | Shape::SemiticFeminine => Gender::Feminine,
            _ => Gender::Masculine,
        }
    }

    /// (allomorph, weight) choices for the first plural.
    fn classes(self) -> &'static [(&'static str, u32)] {
        match self {
            Shape::RomanceA => &[("-i", 70), ("-iet", 20), ("(C)CVCVC", 10)],
            Shape::RomanceUo => &[("-i", 50), ("-ijiet", 50)],
            Shape::RomanceI => &[("-ijiet", 80), ("-jin", 20)],
            Shape::RomanceConsonant => &[("-s", 60), ("-ijiet", 20), ("-i", 20)],
            Shape::SemiticFeminine => &[("-iet", 45), ("CCVVC", 30), ("(C)CVCVC", 25)],
            Shape::SemiticCvcvc => &[("CVCCV", 40), ("-in", 30), ("CCVVC", 30)],
            Shape::SemiticCcvc => &[("CCVVC", 70), ("-at", 30)],
            Shape::SemiticCiec => &[("-at", 50), ("-ien", 30), ("-ajn", 20)],
            Shape::SemiticAgentive => &[("-a", 80), ("CVCCVVC(V)", 20)],
        }
    }
}

const SHAPES: &[(Shape, u32)] = &[
    (Shape::RomanceA, 22),
    (Shape::RomanceUo, 14),
    (Shape::RomanceI, 6),
    (Shape::RomanceConsonant, 16),
    (Shape::SemiticFeminine, 16),
    (Shape::SemiticCvcvc, 10),
    (Shape::SemiticCcvc, 7),
    (Shape::SemiticCiec, 5),
    (Shape::SemiticAgentive, 4),
];

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items.choose(rng).expect("non-empty")
}

fn romance_stem(rng: &mut ChaCha8Rng, syllables: usize) -> String {
    let mut s = String::new();
    for _ in 0..syllables {
        s.push_str(pick(rng, ROMANCE_CONSONANTS));
        s.push_str(pick(rng, VOWELS));
    }
    s
}

fn singular(rng: &mut ChaCha8Rng, shape: Shape) -> String {
    let c = |rng: &mut ChaCha8Rng| pick(rng, SEMITIC_CONSONANTS).to_string();
    let v = |rng: &mut ChaCha8Rng| pick(rng, SEMITIC_VOWELS).to_string();
    let syl = rng.gen_range(1..=2);
    match shape {
        Shape::RomanceA => {
            let mut s = romance_stem(rng, syl);
            s.pop();
            s.push_str(pick(rng, ROMANCE_CONSONANTS));
            s + "a"
        }
        Shape::RomanceUo => romance_stem(rng, syl + 1) + pick(rng, &["u", "o"]),
        Shape::RomanceI => romance_stem(rng, syl) + pick(rng, ROMANCE_CONSONANTS) + "i",
        Shape::RomanceConsonant => {
            romance_stem(rng, syl) + pick(rng, &["er", "in", "ment", "on", "ar", "ist"])
        }
        Shape::SemiticFeminine => {
            let (a, b, d) = (c(rng), c(rng), c(rng));
            format!("{a}{}{b}{d}a", pick(rng, &["a", "i", "o", "e"]))
        }
        Shape::SemiticCvcvc => {
            let (a, b, d) = (c(rng), c(rng), c(rng));
            format!("{a}{}{b}{}{d}", pick(rng, &["a", "e", "i"]), v(rng))
        }
        Shape::SemiticCcvc => {
            let (a, b, d) = (c(rng), c(rng), c(rng));
            format!("{a}{b}{}{d}", pick(rng, &["i", "a", "ie"]))
        }
        Shape::SemiticCiec => {
            let (a, b) = (c(rng), c(rng));
            format!("{a}{}{b}", pick(rng, &["ie", "i", "o"]))
        }
        Shape::SemiticAgentive => {
            let (a, b, d) = (c(rng), c(rng), c(rng));
            format!("{a}{}{b}{b}ie{d}", pick(rng, &["a", "i", "e"]))
        }
    }
}

/// Consonant units of a form, treating `għ` as one unit.
fn consonants(form: &str) -> Vec<String> {
    let chars: Vec<char> = form.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == 'g' && chars.get(i + 1) == Some(&'ħ') {
            out.push("għ".to_string());
            i += 2;
            continue;
        }
        if !"aeiou".contains(chars[i]) {
            out.push(chars[i].to_string());
        }
        i += 1;
    }
    out
}

fn strip_final_vowel(form: &str) -> &str {
    match form.char_indices().last() {
        Some((i, c)) if "aeiou".contains(c) => &form[..i],
        _ => form,
    }
}

fn plural(singular: &str, label: &str) -> String {
    let cs = consonants(singular);
    let c = |i: usize| {
        cs.get(i)
            .or(cs.last())
            .map_or("", |s| s.as_str())
            .to_string()
    };
    match label {
        "-i" | "-iet" | "-ejn" | "-jin" => {
            format!("{}{}", strip_final_vowel(singular), &label[1..])
        }
        l if l.starts_with('-') => format!("{singular}{}", &l[1..]),
        "CCVVC" => format!("{}{}ie{}", c(0), c(1), c(2)),
        "(C)CVCVC" => format!("{}i{}e{}", c(0), c(1), c(2)),
        "CVCCV" => format!("{}o{}{}a", c(0), c(1), c(2)),
        "CVCCVVC(V)" => format!("{}o{}{}ie{}", c(0), c(1), c(1), c(2)),
        "CCVVCVC" => format!("{}{}a{}a{}", c(0), c(1), c(2), c(3)),
        "CCVVCV" => format!("{}{}ie{}i", c(0), c(1), c(2)),
        _ => format!("{}a{}u{}", c(0), c(1), c(2)),
    }
}

/// A Maltese-shaped lexicon with exactly `rows` singular/plural pairs.
///
/// Form shape drives gender and the plural class, etymology follows the
/// shape family, and some Semitic feminines take a second plural of the
/// other concatenative type. A few rare classes fall below the usual
/// pruning threshold.
pub fn maltese_like_lexicon(rows: usize, seed: u64) -> Lexicon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape_dist = WeightedIndex::new(SHAPES.iter().map(|(_, w)| *w)).expect("weights");
    let mut used = HashSet::new();
    let mut entries: Vec<LexicalEntry> = Vec::with_capacity(rows);
    while entries.len() < rows {
        let shape = SHAPES[shape_dist.sample(&mut rng)].0;
        let form = singular(&mut rng, shape);
        if !used.insert(form.clone()) {
            continue;
        }
        let gender = if rng.gen_bool(0.1) {
            match shape.usual_gender() {
                Gender::Masculine => Gender::Feminine,
                Gender::Feminine => Gender::Masculine,
            }
        } else {
            shape.usual_gender()
        };
        let etymology = shape.etymology();
        let choices = shape.classes();
        let class_dist = WeightedIndex::new(choices.iter().map(|(_, w)| *w)).expect("weights");
        let first = choices[class_dist.sample(&mut rng)].0;
        let mut labels = vec![first];
        if matches!(shape, Shape::SemiticFeminine) && rng.gen_bool(0.25) {
            let first_type = inventory::lookup(first).expect("known").concat_type;
            let other = choices
                .iter()
                .map(|(l, _)| *l)
                .find(|l| inventory::lookup(l).expect("known").concat_type != first_type)
                .expect("both types offered");
            labels.push(other);
        }
        let lexeme_id = LexemeId::derive(&form, gender, etymology);
        for label in labels {
            if entries.len() == rows {
                break;
            }
            let info = inventory::lookup(label).expect("known label");
            entries.push(LexicalEntry {
                lexeme_id: lexeme_id.clone(),
                singular_form: form.clone(),
                plural_form: plural(&form, label),
                gender,
                etymology,
                allomorph_class: label.to_string(),
                concat_type: info.concat_type,
            });
        }
    }
    Lexicon::from_entries(entries).expect("generated pairs are unique")
}

fn instance(form: String, gender: Gender, label: String) -> Instance {
    Instance {
        lexeme: LexemeId(form.clone()),
        form_symbols: form.chars().collect(),
        gender,
        etymology: Etymology::NonSemitic,
        label,
    }
}

/// Class weights of [`last_symbol_task`], most frequent first.
pub const LAST_SYMBOL_CLASS_WEIGHTS: [f64; 8] = [0.30, 0.18, 0.14, 0.11, 0.09, 0.07, 0.06, 0.05];

/// Random forms over `a..=p` whose class is fixed by the final letter
/// (two letters per class, eight classes).
pub fn last_symbol_task(n: usize, seed: u64) -> InstanceSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<char> = ('a'..='p').collect();
    let class_dist = WeightedIndex::new(LAST_SYMBOL_CLASS_WEIGHTS).expect("weights");
    let instances = (0..n)
        .map(|_| {
            let class = class_dist.sample(&mut rng);
            let len = rng.gen_range(2..=6);
            let mut form: String = (0..len)
                .map(|_| *alphabet.choose(&mut rng).unwrap())
                .collect();
            form.push(alphabet[2 * class + rng.gen_range(0..2)]);
            let gender = if rng.gen_bool(0.5) {
                Gender::Masculine
            } else {
                Gender::Feminine
            };
            instance(form, gender, format!("class{class}"))
        })
        .collect();
    InstanceSet::new(Task::Allomorph, instances)
}

/// A closed vocabulary of `forms` distinct forms, each with a fixed gender
/// and a fixed distribution over four classes: even-numbered forms are
/// deterministic, odd-numbered forms split 50/50 between two classes.
/// Returns `n` instances drawn uniformly over forms.
pub fn closed_vocabulary_task(forms: usize, n: usize, seed: u64) -> InstanceSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<char> = "abdefiklmnorstu".chars().collect();
    let mut seen = HashSet::new();
    let mut vocab = Vec::with_capacity(forms);
    while vocab.len() < forms {
        let len = rng.gen_range(3..=6);
        let form: String = (0..len)
            .map(|_| *alphabet.choose(&mut rng).unwrap())
            .collect();
        if seen.insert(form.clone()) {
            let gender = if rng.gen_bool(0.5) {
                Gender::Masculine
            } else {
                Gender::Feminine
            };
            let primary = rng.gen_range(0..4usize);
            let secondary = (primary + rng.gen_range(1..4usize)) % 4;
            vocab.push((form, gender, primary, secondary));
        }
    }
    let instances = (0..n)
        .map(|_| {
            let w = rng.gen_range(0..forms);
            let (form, gender, primary, secondary) = &vocab[w];
            let class = if w % 2 == 1 && rng.gen_bool(0.5) {
                *secondary
            } else {
                *primary
            };
            instance(form.clone(), *gender, format!("class{class}"))
        })
        .collect();
    InstanceSet::new(Task::Allomorph, instances)
}

/// The same instances with labels randomly permuted across instances.
pub fn shuffle_labels(set: &InstanceSet, seed: u64) -> InstanceSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<String> = set.instances.iter().map(|i| i.label.clone()).collect();
    labels.shuffle(&mut rng);
    let mut out = set.clone();
    for (inst, label) in out.instances.iter_mut().zip(labels) {
        inst.label = label;
    }
    out
}
