//! Allen interval algebra: relation sets, converse, composition, mapping
//! profiles between TLINK labels and relation sets, and the constraint
//! network the reasoner closes.

mod graph;
mod profile;
mod reasoner;
mod table;

use std::fmt;
use std::str::FromStr;

pub use graph::{PcOutcome, TemporalGraph, Triangle};
pub use profile::{fallback_chain, MappingProfile, ProfileError};
pub use reasoner::{
    check_document, deduce, graph_from_document, predict_deducible, timegraph_answer, Answer, ConsistencyReport,
    ReasonerError, RegressionCoefficients,
};
pub use table::base_composition;

/// One of the thirteen base relations between two intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum BaseRelation {
    Before = 0,
    After = 1,
    Meets = 2,
    MetBy = 3,
    Overlaps = 4,
    OverlappedBy = 5,
    Starts = 6,
    StartedBy = 7,
    During = 8,
    Contains = 9,
    Finishes = 10,
    FinishedBy = 11,
    Equals = 12,
}

impl BaseRelation {
    pub const ALL: [BaseRelation; 13] = [
        BaseRelation::Before,
        BaseRelation::After,
        BaseRelation::Meets,
        BaseRelation::MetBy,
        BaseRelation::Overlaps,
        BaseRelation::OverlappedBy,
        BaseRelation::Starts,
        BaseRelation::StartedBy,
        BaseRelation::During,
        BaseRelation::Contains,
        BaseRelation::Finishes,
        BaseRelation::FinishedBy,
        BaseRelation::Equals,
    ];

    pub fn symbol(self) -> &'static str {
        SYMBOLS[self as usize]
    }

    pub fn from_index(i: usize) -> BaseRelation {
        BaseRelation::ALL[i]
    }

    pub fn converse(self) -> BaseRelation {
        use BaseRelation::*;
        match self {
            Before => After,
            After => Before,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            Starts => StartedBy,
            StartedBy => Starts,
            During => Contains,
            Contains => During,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
            Equals => Equals,
        }
    }
}

const SYMBOLS: [&str; 13] = ["<", ">", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi", "="];

/// A disjunction of base relations, stored as a 13-bit mask.
///
/// The empty set only shows up transiently to signal an inconsistency; the
/// full set means "unknown".
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RelationSet(u16);

impl RelationSet {
    pub const EMPTY: RelationSet = RelationSet(0);
    pub const FULL: RelationSet = RelationSet(0x1fff);
    pub const EQUALS: RelationSet = RelationSet(1 << 12);

    pub fn from_bits(bits: u16) -> RelationSet {
        RelationSet(bits & 0x1fff)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn single(r: BaseRelation) -> RelationSet {
        RelationSet(1 << r as u16)
    }

    pub fn of(rels: &[BaseRelation]) -> RelationSet {
        rels.iter().fold(RelationSet::EMPTY, |acc, r| acc | RelationSet::single(*r))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_full(self) -> bool {
        self.0 == 0x1fff
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, r: BaseRelation) -> bool {
        self.0 & (1 << r as u16) != 0
    }

    pub fn is_subset(self, other: RelationSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = BaseRelation> {
        BaseRelation::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    /// Elementwise converse.
    pub fn converse(self) -> RelationSet {
        self.iter().fold(RelationSet::EMPTY, |acc, r| acc | RelationSet::single(r.converse()))
    }

    /// Union of the base compositions over every pair of members.
    pub fn compose(self, other: RelationSet) -> RelationSet {
        if self.is_empty() || other.is_empty() {
            return RelationSet::EMPTY;
        }
        let mut out = 0u16;
        for a in self.iter() {
            for b in other.iter() {
                out |= table::COMPOSITION[a as usize][b as usize];
                if out == 0x1fff {
                    return RelationSet::FULL;
                }
            }
        }
        RelationSet(out)
    }
}

/// Converse of a relation set.
pub fn converse(r: RelationSet) -> RelationSet {
    r.converse()
}

/// Composition of two relation sets.
pub fn compose(r1: RelationSet, r2: RelationSet) -> RelationSet {
    r1.compose(r2)
}

impl std::ops::BitOr for RelationSet {
    type Output = RelationSet;
    fn bitor(self, rhs: RelationSet) -> RelationSet {
        RelationSet(self.0 | rhs.0)
    }
}

impl std::ops::BitAnd for RelationSet {
    type Output = RelationSet;
    fn bitand(self, rhs: RelationSet) -> RelationSet {
        RelationSet(self.0 & rhs.0)
    }
}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(r.symbol())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown Allen relation symbol `{0}`")]
pub struct UnknownSymbol(pub String);

impl FromStr for RelationSet {
    type Err = UnknownSymbol;

    /// Parses whitespace- or comma-separated symbols, optionally wrapped in
    /// braces: `{< m}`, `< m`, `<,m`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut set = RelationSet::EMPTY;
        for tok in inner.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let idx = SYMBOLS.iter().position(|s| *s == tok).ok_or_else(|| UnknownSymbol(tok.to_string()))?;
            set = set | RelationSet::single(BaseRelation::from_index(idx));
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BaseRelation::*;

    #[test]
    fn converse_examples() {
        assert_eq!(RelationSet::single(Before).converse(), RelationSet::single(After));
        assert_eq!(RelationSet::of(&[Meets, Overlaps]).converse(), RelationSet::of(&[MetBy, OverlappedBy]));
        assert_eq!(RelationSet::FULL.converse(), RelationSet::FULL);
    }

    #[test]
    fn compose_examples() {
        let b = RelationSet::single(Before);
        assert_eq!(b.compose(b), b);
        assert_eq!(RelationSet::single(Meets).compose(RelationSet::single(Meets)), b);
        assert_eq!(RelationSet::single(During).compose(b), b);
        assert_eq!(b.compose(RelationSet::single(After)), RelationSet::FULL);
        assert_eq!(RelationSet::EQUALS.compose(b), b);
    }

    #[test]
    fn display_and_parse() {
        let s = RelationSet::of(&[Before, Meets]);
        assert_eq!(s.to_string(), "{< m}");
        assert_eq!("{< m}".parse::<RelationSet>().unwrap(), s);
        assert_eq!("<,m".parse::<RelationSet>().unwrap(), s);
        assert!("{< x}".parse::<RelationSet>().is_err());
    }
}
