//! Tagged lexicon ingestion and task-specific instance sets.
//!
//! The input is a UTF-8 TSV with the fixed header
//! `singular plural gender etymology allomorph type`, one row per
//! singular/plural pair. A noun with several plurals has several rows.

use crate::inventory::{self, ConcatType, Origin};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{Read, Write};
use thiserror::Error;

pub const HEADER: [&str; 6] = [
    "singular",
    "plural",
    "gender",
    "etymology",
    "allomorph",
    "type",
];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("missing header row")]
    MissingHeader,
    #[error("line {line}: header must be `{}`, found `{found}`", HEADER.join("\t"))]
    BadHeader { line: u64, found: String },
    #[error("line {line}: expected {expected} columns, found {found}")]
    MalformedRow {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unknown {field} value `{value}`")]
    UnknownLabel {
        line: u64,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: allomorph `{allomorph}` is {expected}, but the row says {found}")]
    TypeMismatch {
        line: u64,
        allomorph: String,
        expected: ConcatType,
        found: ConcatType,
    },
    #[error("line {line}: empty {field} form")]
    EmptyForm { line: u64, field: &'static str },
    #[error("line {line}: duplicate pair ({lexeme}, {plural})")]
    DuplicatePair {
        line: u64,
        lexeme: String,
        plural: String,
    },
    #[error("allomorph `{0}` has no origin annotation")]
    MissingOriginAnnotation(String),
    #[error("malformed input: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LexiconError {
    /// Source line of the offending row, when the error refers to one.
    pub fn line(&self) -> Option<u64> {
        match self {
            LexiconError::BadHeader { line, .. }
            | LexiconError::MalformedRow { line, .. }
            | LexiconError::UnknownLabel { line, .. }
            | LexiconError::TypeMismatch { line, .. }
            | LexiconError::EmptyForm { line, .. }
            | LexiconError::DuplicatePair { line, .. } => Some(*line),
            LexiconError::Csv(e) => e.position().map(|p| p.line()),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, LexiconError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Masculine,
    Feminine,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::Masculine, Gender::Feminine];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn code(self) -> &'static str {
        match self {
            Gender::Masculine => "m",
            Gender::Feminine => "f",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m" | "masc" | "masculine" => Some(Gender::Masculine),
            "f" | "fem" | "feminine" => Some(Gender::Feminine),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Etymology {
    NonSemitic,
    Semitic,
}

impl Etymology {
    pub const ALL: [Etymology; 2] = [Etymology::NonSemitic, Etymology::Semitic];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Etymology::NonSemitic => "non_semitic",
            Etymology::Semitic => "semitic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "semitic" | "s" => Some(Etymology::Semitic),
            "non_semitic" | "non-semitic" | "nonsemitic" | "ns" => Some(Etymology::NonSemitic),
            _ => None,
        }
    }
}

/// Identifies a lexeme. Rows sharing singular, gender and etymology belong
/// to the same lexeme.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LexemeId(pub String);

impl LexemeId {
    pub fn derive(singular: &str, gender: Gender, etymology: Etymology) -> Self {
        LexemeId(format!(
            "{singular}/{}/{}",
            gender.code(),
            etymology.as_str()
        ))
    }
}

impl fmt::Display for LexemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexicalEntry {
    pub lexeme_id: LexemeId,
    pub singular_form: String,
    pub plural_form: String,
    pub gender: Gender,
    pub etymology: Etymology,
    pub allomorph_class: String,
    pub concat_type: ConcatType,
}

impl LexicalEntry {
    pub fn origin(&self) -> Option<Origin> {
        inventory::lookup(&self.allomorph_class).map(|a| a.origin)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Lexicon {
    entries: Vec<LexicalEntry>,
    alphabet: BTreeSet<char>,
}

impl Lexicon {
    /// Builds a lexicon from already-validated entries, rejecting duplicate
    /// (lexeme, plural) pairs.
    pub fn from_entries(entries: Vec<LexicalEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, e) in entries.iter().enumerate() {
            if !seen.insert((e.lexeme_id.clone(), e.plural_form.clone())) {
                return Err(LexiconError::DuplicatePair {
                    line: i as u64 + 2,
                    lexeme: e.lexeme_id.to_string(),
                    plural: e.plural_form.clone(),
                });
            }
        }
        Ok(Self::from_unique(entries))
    }

    fn from_unique(entries: Vec<LexicalEntry>) -> Self {
        let alphabet = entries
            .iter()
            .flat_map(|e| e.singular_form.chars())
            .collect();
        Lexicon { entries, alphabet }
    }

    pub fn entries(&self) -> &[LexicalEntry] {
        &self.entries
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lexeme_count(&self) -> usize {
        self.entries
            .iter()
            .map(|e| &e.lexeme_id)
            .collect::<HashSet<_>>()
            .len()
    }

    /// Number of distinct lexemes per allomorph class.
    pub fn class_sizes(&self) -> BTreeMap<String, usize> {
        let mut members: BTreeMap<&str, HashSet<&LexemeId>> = BTreeMap::new();
        for e in &self.entries {
            members
                .entry(&e.allomorph_class)
                .or_default()
                .insert(&e.lexeme_id);
        }
        members
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.len()))
            .collect()
    }

    /// Writes the canonical TSV form (fixed header, canonical codes).
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", HEADER.join("\t"))?;
        for e in &self.entries {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                e.singular_form,
                e.plural_form,
                e.gender.code(),
                e.etymology.as_str(),
                e.allomorph_class,
                e.concat_type
            )?;
        }
        Ok(())
    }

    pub fn to_tsv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("forms are UTF-8")
    }

    /// SHA-256 of the canonical TSV, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_tsv_string().as_bytes()))
    }
}

pub fn parse_lexicon<R: Read>(source: R) -> Result<Lexicon> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .from_reader(source);

    let mut records = reader.records();
    let header = records.next().ok_or(LexiconError::MissingHeader)??;
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    if found != HEADER {
        return Err(LexiconError::BadHeader {
            line: header.position().map_or(1, |p| p.line()),
            found: found.join("\t"),
        });
    }

    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = record.iter().map(str::trim).collect();
        if fields.len() == 1 && fields[0].is_empty() {
            continue;
        }
        if fields.len() != HEADER.len() {
            return Err(LexiconError::MalformedRow {
                line,
                expected: HEADER.len(),
                found: fields.len(),
            });
        }
        let entry = parse_row(line, &fields)?;
        if !seen.insert((entry.lexeme_id.clone(), entry.plural_form.clone())) {
            return Err(LexiconError::DuplicatePair {
                line,
                lexeme: entry.lexeme_id.to_string(),
                plural: entry.plural_form,
            });
        }
        entries.push(entry);
    }
    Ok(Lexicon::from_unique(entries))
}

fn parse_row(line: u64, fields: &[&str]) -> Result<LexicalEntry> {
    let [singular, plural, gender, etymology, allomorph, concat] = fields else {
        unreachable!("column count checked by caller")
    };
    if singular.is_empty() {
        return Err(LexiconError::EmptyForm {
            line,
            field: "singular",
        });
    }
    if plural.is_empty() {
        return Err(LexiconError::EmptyForm {
            line,
            field: "plural",
        });
    }
    let unknown = |field, value: &str| LexiconError::UnknownLabel {
        line,
        field,
        value: value.to_string(),
    };
    let gender = Gender::parse(gender).ok_or_else(|| unknown("gender", gender))?;
    let etymology = Etymology::parse(etymology).ok_or_else(|| unknown("etymology", etymology))?;
    let info = inventory::lookup(allomorph).ok_or_else(|| unknown("allomorph", allomorph))?;
    let stated = ConcatType::parse(concat).ok_or_else(|| unknown("type", concat))?;
    if stated != info.concat_type {
        return Err(LexiconError::TypeMismatch {
            line,
            allomorph: allomorph.to_string(),
            expected: info.concat_type,
            found: stated,
        });
    }
    Ok(LexicalEntry {
        lexeme_id: LexemeId::derive(singular, gender, etymology),
        singular_form: singular.to_string(),
        plural_form: plural.to_string(),
        gender,
        etymology,
        allomorph_class: info.label.to_string(),
        concat_type: stated,
    })
}

/// Keeps only entries whose allomorph class is attested for at least
/// `min_count` distinct lexemes.
pub fn prune_classes(lexicon: &Lexicon, min_count: usize) -> Lexicon {
    assert!(min_count >= 1, "min_count must be positive");
    let sizes = lexicon.class_sizes();
    let kept = lexicon
        .entries
        .iter()
        .filter(|e| sizes[&e.allomorph_class] >= min_count)
        .cloned()
        .collect();
    Lexicon::from_unique(kept)
}

/// What an instance set asks the classifier to predict.
#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Plural allomorph, one instance per (lexeme, plural) pair.
    Allomorph,
    /// Affixal vs templatic, one instance per (lexeme, type) pair.
    Type,
    /// Etymology of the lexeme, one instance per lexeme.
    Etymology,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Allomorph => "allomorph",
            Task::Type => "type",
            Task::Etymology => "etymology",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub lexeme: LexemeId,
    pub form_symbols: Vec<char>,
    pub gender: Gender,
    pub etymology: Etymology,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSet {
    pub task: Task,
    pub instances: Vec<Instance>,
    /// Sorted lexicographically.
    pub label_space: Vec<String>,
}

impl InstanceSet {
    /// Builds an instance set, deriving the label space from the instances.
    pub fn new(task: Task, instances: Vec<Instance>) -> Self {
        let label_space = instances
            .iter()
            .map(|i| i.label.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        InstanceSet {
            task,
            instances,
            label_space,
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.label_space
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
    }

    /// Label index of every instance, in instance order.
    pub fn label_indices(&self) -> Vec<usize> {
        let lookup: HashMap<&str, usize> = self
            .label_space
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        self.instances
            .iter()
            .map(|i| lookup[i.label.as_str()])
            .collect()
    }

    pub fn label_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.label_space.len()];
        for l in self.label_indices() {
            counts[l] += 1;
        }
        counts
    }

    /// A new set containing the instances at `indices`, keeping the label space.
    pub fn subset(&self, indices: &[usize]) -> InstanceSet {
        InstanceSet {
            task: self.task,
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
            label_space: self.label_space.clone(),
        }
    }
}

pub fn build_instances(lexicon: &Lexicon, task: Task) -> InstanceSet {
    let instance = |e: &LexicalEntry, label: String| Instance {
        lexeme: e.lexeme_id.clone(),
        form_symbols: e.singular_form.chars().collect(),
        gender: e.gender,
        etymology: e.etymology,
        label,
    };
    let instances = match task {
        Task::Allomorph => lexicon
            .entries
            .iter()
            .map(|e| instance(e, e.allomorph_class.clone()))
            .collect(),
        Task::Type => {
            let mut seen = HashSet::new();
            lexicon
                .entries
                .iter()
                .filter(|e| seen.insert((&e.lexeme_id, e.concat_type)))
                .map(|e| instance(e, e.concat_type.to_string()))
                .collect()
        }
        Task::Etymology => {
            let mut seen = HashSet::new();
            lexicon
                .entries
                .iter()
                .filter(|e| seen.insert(&e.lexeme_id))
                .map(|e| instance(e, e.etymology.as_str().to_string()))
                .collect()
        }
    };
    InstanceSet::new(task, instances)
}

/// Counts of (lexeme, plural) pairs by exponent origin and lexeme etymology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    /// `counts[origin][etymology]`, origins in [`Origin::ALL`] order and
    /// etymologies in [`Etymology::ALL`] order.
    pub counts: [[u64; 2]; 3],
    pub total: u64,
    /// Share of each origin row in the grand total, in percent.
    pub row_percent: [f64; 3],
    /// Share of each etymology column in the grand total, in percent.
    pub column_percent: [f64; 2],
}

impl DistributionTable {
    pub fn count(&self, origin: Origin, etymology: Etymology) -> u64 {
        self.counts[origin.index()][etymology.index()]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("origin,non_semitic_lexeme,semitic_lexeme,total,percent\n");
        for origin in Origin::ALL {
            let row = self.counts[origin.index()];
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                origin.as_str(),
                row[0],
                row[1],
                row[0] + row[1],
                self.row_percent[origin.index()]
            ));
        }
        let col = |j: usize| self.counts.iter().map(|r| r[j]).sum::<u64>();
        out.push_str(&format!("total,{},{},{},100\n", col(0), col(1), self.total));
        out.push_str(&format!(
            "percent,{},{},100,\n",
            self.column_percent[0], self.column_percent[1]
        ));
        out
    }
}

pub fn distribution_table(lexicon: &Lexicon) -> Result<DistributionTable> {
    let mut counts = [[0u64; 2]; 3];
    for e in &lexicon.entries {
        let origin = e
            .origin()
            .ok_or_else(|| LexiconError::MissingOriginAnnotation(e.allomorph_class.clone()))?;
        counts[origin.index()][e.etymology.index()] += 1;
    }
    let total: u64 = counts.iter().flatten().sum();
    let pct = |n: u64| {
        if total == 0 {
            0.0
        } else {
            100.0 * n as f64 / total as f64
        }
    };
    let row_percent = counts.map(|r| pct(r[0] + r[1]));
    let column_percent = [0, 1].map(|j| pct(counts.iter().map(|r| r[j]).sum()));
    Ok(DistributionTable {
        counts,
        total,
        row_percent,
        column_percent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "singular\tplural\tgender\tetymology\tallomorph\ttype\n";

    fn parse(body: &str) -> Result<Lexicon> {
        parse_lexicon(format!("{HEAD}{body}").as_bytes())
    }

    fn libsa() -> Lexicon {
        parse(
            "libsa\tlibsiet\tf\tsemitic\t-iet\taffixal\n\
             libsa\tlbies\tf\tsemitic\tCCVVC\ttemplatic\n\
             libsa\tlbiesi\tf\tsemitic\tCCVVCV\ttemplatic\n\
             karta\tkarti\tf\tnon_semitic\t-i\taffixal\n",
        )
        .unwrap()
    }

    #[test]
    fn parses_single_row() {
        let lex = parse("libsa\tlibsiet\tf\tsemitic\t-iet\taffixal\n").unwrap();
        assert_eq!(lex.len(), 1);
        let e = &lex.entries()[0];
        assert_eq!(e.concat_type, ConcatType::Affixal);
        assert_eq!(e.gender, Gender::Feminine);
        assert_eq!(e.etymology, Etymology::Semitic);
        assert_eq!(lex.alphabet().iter().collect::<String>(), "abils");
    }

    #[test]
    fn empty_body_is_empty_lexicon() {
        let lex = parse("").unwrap();
        assert!(lex.is_empty());
        assert!(lex.alphabet().is_empty());
    }

    #[test]
    fn rejects_type_inconsistent_with_allomorph() {
        let err = parse("libsa\tlibsiet\tf\tsemitic\t-iet\ttemplatic\n").unwrap_err();
        assert!(
            matches!(err, LexiconError::TypeMismatch { line: 2, .. }),
            "{err}"
        );
    }

    #[test]
    fn rejects_bad_rows() {
        let err = parse("a\tb\tf\tsemitic\t-iet\n").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::MalformedRow {
                line: 2,
                found: 5,
                ..
            }
        ));
        let err = parse("a\tb\tx\tsemitic\t-iet\taffixal\n").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::UnknownLabel {
                field: "gender",
                ..
            }
        ));
        let err = parse("a\tb\tf\tsemitic\t-zz\taffixal\n").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::UnknownLabel {
                field: "allomorph",
                ..
            }
        ));
        let err = parse("\tb\tf\tsemitic\t-iet\taffixal\n").unwrap_err();
        assert!(matches!(
            err,
            LexiconError::EmptyForm {
                field: "singular",
                ..
            }
        ));
        let err = parse("a\tb\tf\tsemitic\t-iet\taffixal\na\tb\tf\tsemitic\t-iet\taffixal\n")
            .unwrap_err();
        assert!(matches!(err, LexiconError::DuplicatePair { line: 3, .. }));
        assert_eq!(err.line(), Some(3));
    }

    #[test]
    fn rejects_bad_header() {
        let err = parse_lexicon("sg\tpl\n".as_bytes()).unwrap_err();
        assert!(matches!(err, LexiconError::BadHeader { .. }));
        assert!(matches!(
            parse_lexicon("".as_bytes()).unwrap_err(),
            LexiconError::MissingHeader
        ));
    }

    #[test]
    fn same_form_different_gender_is_a_different_lexeme() {
        let lex = parse(
            "sid\tsidien\tm\tsemitic\t-ien\taffixal\n\
             sid\tsidien\tf\tsemitic\t-ien\taffixal\n",
        )
        .unwrap();
        assert_eq!(lex.lexeme_count(), 2);
    }

    #[test]
    fn instance_multiplicity_per_task() {
        let lex = libsa();
        assert_eq!(build_instances(&lex, Task::Allomorph).len(), 4);
        let types = build_instances(&lex, Task::Type);
        assert_eq!(types.len(), 3);
        assert_eq!(types.label_space, vec!["affixal", "templatic"]);
        assert_eq!(build_instances(&lex, Task::Etymology).len(), 2);
    }

    #[test]
    fn single_plural_gives_single_type_instance() {
        let lex = parse("karta\tkarti\tf\tnon_semitic\t-i\taffixal\n").unwrap();
        assert_eq!(build_instances(&lex, Task::Type).len(), 1);
    }

    fn synthetic_sizes(sizes: &[(&str, usize)]) -> Lexicon {
        let mut body = String::new();
        for (label, n) in sizes {
            let info = inventory::lookup(label).unwrap();
            for i in 0..*n {
                body.push_str(&format!(
                    "w{label}{i}\tp{i}\tm\tsemitic\t{label}\t{}\n",
                    info.concat_type
                ));
            }
        }
        parse(&body).unwrap()
    }

    #[test]
    fn prune_keeps_only_large_classes() {
        let lex = synthetic_sizes(&[("-iet", 25), ("-i", 19), ("CCVVC", 3)]);
        let pruned = prune_classes(&lex, 20);
        assert_eq!(pruned.len(), 25);
        assert!(pruned.entries().iter().all(|e| e.allomorph_class == "-iet"));
        assert_eq!(prune_classes(&lex, 1), lex);
        assert!(!pruned.alphabet().contains(&'C'));
    }

    #[test]
    fn prune_counts_lexemes_not_rows() {
        let lex = parse(
            "a\ta1\tm\tsemitic\t-iet\taffixal\n\
             a\ta2\tm\tsemitic\t-iet\taffixal\n",
        )
        .unwrap();
        assert!(prune_classes(&lex, 2).is_empty());
    }

    #[test]
    fn distribution_counts() {
        let table = distribution_table(&libsa()).unwrap();
        assert_eq!(table.total, 4);
        assert_eq!(
            table.count(Origin::NonSemiticAffix, Etymology::NonSemitic),
            1
        );
        assert_eq!(table.count(Origin::SemiticAffix, Etymology::Semitic), 1);
        assert_eq!(table.count(Origin::SemiticTemplate, Etymology::Semitic), 2);
        assert_eq!(table.row_percent, [25.0, 25.0, 50.0]);
        assert_eq!(table.column_percent, [25.0, 75.0]);
        let csv = table.to_csv();
        assert!(csv.contains("semitic_template,0,2,2,50\n"), "{csv}");
    }

    #[test]
    fn empty_distribution_is_zero() {
        let table = distribution_table(&Lexicon::default()).unwrap();
        assert_eq!(table.total, 0);
        assert_eq!(table.counts, [[0; 2]; 3]);
    }

    #[test]
    fn missing_origin_annotation() {
        let mut entries = libsa().entries().to_vec();
        entries[0].allomorph_class = "-zz".into();
        let lex = Lexicon::from_entries(entries).unwrap();
        assert!(matches!(
            distribution_table(&lex),
            Err(LexiconError::MissingOriginAnnotation(_))
        ));
    }
}
