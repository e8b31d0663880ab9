use crate::lexicon::{Etymology, Instance};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Symbol and label indexing for one trained model.
///
/// Symbol indices: `PAD`, `UNK`, the two etymology markers, then the
/// training alphabet in codepoint order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    alphabet: Vec<char>,
    labels: Vec<String>,
}

/// A form ready for the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub tokens: Vec<usize>,
    pub gender: usize,
}

impl Vocabulary {
    pub const PAD: usize = 0;
    pub const UNK: usize = 1;
    pub const ETYM_S: usize = 2;
    pub const ETYM_NS: usize = 3;
    const RESERVED: usize = 4;

    /// Vocabulary over the symbols of `instances` (normally a training fold).
    pub fn build<'a>(instances: impl IntoIterator<Item = &'a Instance>, labels: &[String]) -> Self {
        let alphabet: BTreeSet<char> = instances
            .into_iter()
            .flat_map(|i| i.form_symbols.iter().copied())
            .collect();
        Vocabulary {
            alphabet: alphabet.into_iter().collect(),
            labels: labels.to_vec(),
        }
    }

    pub fn symbol_count(&self) -> usize {
        Self::RESERVED + self.alphabet.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn symbol_index(&self, symbol: char) -> usize {
        self.alphabet
            .binary_search(&symbol)
            .map_or(Self::UNK, |i| i + Self::RESERVED)
    }

    pub fn encode(&self, instance: &Instance, include_etymology: bool) -> Encoded {
        let mut tokens: Vec<usize> = instance
            .form_symbols
            .iter()
            .map(|&c| self.symbol_index(c))
            .collect();
        if include_etymology {
            tokens.push(match instance.etymology {
                Etymology::Semitic => Self::ETYM_S,
                Etymology::NonSemitic => Self::ETYM_NS,
            });
        }
        Encoded {
            tokens,
            gender: instance.gender.index(),
        }
    }

    /// Same vocabulary with labels reordered: new label `j` is old label `order[j]`.
    pub fn permute_labels(&self, order: &[usize]) -> Self {
        Vocabulary {
            alphabet: self.alphabet.clone(),
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{Gender, LexemeId};

    fn inst(form: &str, etymology: Etymology) -> Instance {
        Instance {
            lexeme: LexemeId(form.into()),
            form_symbols: form.chars().collect(),
            gender: Gender::Feminine,
            etymology,
            label: "-i".into(),
        }
    }

    #[test]
    fn encodes_with_and_without_etymology() {
        let karta = inst("karta", Etymology::Semitic);
        let vocab = Vocabulary::build([&karta], &["-i".to_string()]);
        let plain = vocab.encode(&karta, false);
        assert_eq!(plain.tokens.len(), 5);
        assert_eq!(plain.gender, 1);
        let tagged = vocab.encode(&karta, true);
        assert_eq!(tagged.tokens.len(), 6);
        assert_eq!(*tagged.tokens.last().unwrap(), Vocabulary::ETYM_S);
        assert_eq!(tagged.tokens[..5], plain.tokens[..]);
        let ns = vocab.encode(&inst("karta", Etymology::NonSemitic), true);
        assert_eq!(*ns.tokens.last().unwrap(), Vocabulary::ETYM_NS);
    }

    #[test]
    fn unseen_symbols_map_to_unk() {
        let vocab = Vocabulary::build([&inst("karta", Etymology::Semitic)], &[]);
        let enc = vocab.encode(&inst("għar", Etymology::Semitic), false);
        assert_eq!(enc.tokens[0], Vocabulary::UNK);
        assert_eq!(enc.tokens[1], Vocabulary::UNK);
        assert_ne!(enc.tokens[2], Vocabulary::UNK);
        assert_eq!(vocab.symbol_count(), 4 + 4);
    }
}
