//! Static inventory of Maltese nominal plural allomorphs.
//!
//! Every allomorph label accepted in a lexicon file is listed here together
//! with its concatenative type and the origin of the exponent. Sound plurals
//! are written as the suffix with a leading hyphen (`-iet`), broken plurals as
//! their CV template (`CCVVC`).

use serde::{Deserialize, Serialize};
use std::fmt;

/// Whether a plural is formed by suffixation or by a root-and-pattern template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcatType {
    Affixal,
    Templatic,
}

impl ConcatType {
    pub fn as_str(self) -> &'static str {
        match self {
            ConcatType::Affixal => "affixal",
            ConcatType::Templatic => "templatic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "affixal" | "sound" => Some(ConcatType::Affixal),
            "templatic" | "broken" => Some(ConcatType::Templatic),
            _ => None,
        }
    }
}

impl fmt::Display for ConcatType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Historical source of a plural exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    NonSemiticAffix,
    SemiticAffix,
    SemiticTemplate,
}

impl Origin {
    pub const ALL: [Origin; 3] = [
        Origin::NonSemiticAffix,
        Origin::SemiticAffix,
        Origin::SemiticTemplate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Origin::NonSemiticAffix => "non_semitic_affix",
            Origin::SemiticAffix => "semitic_affix",
            Origin::SemiticTemplate => "semitic_template",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Allomorph {
    pub label: &'static str,
    pub concat_type: ConcatType,
    pub origin: Origin,
    /// Illustrative singular and plural.
    pub example: (&'static str, &'static str),
}

const fn sound(
    label: &'static str,
    origin: Origin,
    sg: &'static str,
    pl: &'static str,
) -> Allomorph {
    Allomorph {
        label,
        concat_type: ConcatType::Affixal,
        origin,
        example: (sg, pl),
    }
}

const fn broken(label: &'static str, sg: &'static str, pl: &'static str) -> Allomorph {
    Allomorph {
        label,
        concat_type: ConcatType::Templatic,
        origin: Origin::SemiticTemplate,
        example: (sg, pl),
    }
}

pub const ALLOMORPHS: &[Allomorph] = &[
    sound("-i", Origin::NonSemiticAffix, "karta", "karti"),
    sound("-ijiet", Origin::SemiticAffix, "omm", "ommijiet"),
    sound("-iet", Origin::SemiticAffix, "rixa", "rixiet"),
    sound("-a", Origin::SemiticAffix, "giddieb", "giddieba"),
    sound("-in", Origin::SemiticAffix, "meħlus", "meħlusin"),
    sound("-s", Origin::NonSemiticAffix, "kuxin", "kuxins"),
    sound("-at", Origin::SemiticAffix, "triq", "triqat"),
    sound("-ien", Origin::SemiticAffix, "sid", "sidien"),
    sound("-n", Origin::SemiticAffix, "baħri", "baħrin"),
    sound("-jin", Origin::SemiticAffix, "ħati", "ħatjin"),
    sound("-ejn", Origin::SemiticAffix, "spalla", "spallejn"),
    sound("-ajn", Origin::SemiticAffix, "sieq", "saqajn"),
    sound("-an", Origin::SemiticAffix, "qiegħ", "qiegħan"),
    broken("CCVVCVC", "fardal", "fradal"),
    broken("(C)CVCVC", "birra", "birer"),
    broken("CCVVC", "kbir", "kbar"),
    broken("CCVjjVC", "ftira", "ftajjar"),
    broken("CCVVCV", "bitħa", "btieħi"),
    broken("VCCCV", "sider", "isdra"),
    broken("CVCCV", "marid", "morda"),
    broken("(għ)VCVC", "għodda", "għodod"),
    broken("VCVC", "elf", "eluf"),
    broken("CVCCVVC(V)", "għaref", "għorrief"),
    broken("(għ)VCCV", "għama", "għomja"),
];

pub fn lookup(label: &str) -> Option<&'static Allomorph> {
    ALLOMORPHS.iter().find(|a| a.label == label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn labels_are_unique() {
        let set: BTreeSet<_> = ALLOMORPHS.iter().map(|a| a.label).collect();
        assert_eq!(set.len(), ALLOMORPHS.len());
    }

    #[test]
    fn sound_and_broken_counts() {
        let sound = ALLOMORPHS
            .iter()
            .filter(|a| a.concat_type == ConcatType::Affixal)
            .count();
        assert_eq!(sound, 13);
        assert_eq!(ALLOMORPHS.len() - sound, 11);
        assert!(ALLOMORPHS
            .iter()
            .all(|a| (a.concat_type == ConcatType::Templatic)
                == (a.origin == Origin::SemiticTemplate)));
    }

    #[test]
    fn lookup_known_and_unknown() {
        assert_eq!(lookup("-iet").unwrap().concat_type, ConcatType::Affixal);
        assert_eq!(lookup("CCVVC").unwrap().concat_type, ConcatType::Templatic);
        assert!(lookup("-xyz").is_none());
    }
}
