//! TLINK relation types and causal directions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The fourteen TimeML TLINK relation types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TLinkLabel {
    Before,
    After,
    IBefore,
    IAfter,
    Includes,
    IsIncluded,
    Begins,
    BegunBy,
    Ends,
    EndedBy,
    Simultaneous,
    During,
    DuringInv,
    Identity,
}

impl TLinkLabel {
    /// All labels. The order doubles as the preference order when several
    /// labels share an Allen image (SIMULTANEOUS wins over IDENTITY, for
    /// instance).
    pub const ALL: [TLinkLabel; 14] = [
        TLinkLabel::Before,
        TLinkLabel::After,
        TLinkLabel::IBefore,
        TLinkLabel::IAfter,
        TLinkLabel::Includes,
        TLinkLabel::IsIncluded,
        TLinkLabel::Begins,
        TLinkLabel::BegunBy,
        TLinkLabel::Ends,
        TLinkLabel::EndedBy,
        TLinkLabel::Simultaneous,
        TLinkLabel::During,
        TLinkLabel::DuringInv,
        TLinkLabel::Identity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TLinkLabel::Before => "BEFORE",
            TLinkLabel::After => "AFTER",
            TLinkLabel::IBefore => "IBEFORE",
            TLinkLabel::IAfter => "IAFTER",
            TLinkLabel::Includes => "INCLUDES",
            TLinkLabel::IsIncluded => "IS_INCLUDED",
            TLinkLabel::Begins => "BEGINS",
            TLinkLabel::BegunBy => "BEGUN_BY",
            TLinkLabel::Ends => "ENDS",
            TLinkLabel::EndedBy => "ENDED_BY",
            TLinkLabel::Simultaneous => "SIMULTANEOUS",
            TLinkLabel::During => "DURING",
            TLinkLabel::DuringInv => "DURING_INV",
            TLinkLabel::Identity => "IDENTITY",
        }
    }

    /// The label holding for the swapped pair.
    pub fn inverse(self) -> TLinkLabel {
        use TLinkLabel::*;
        match self {
            Before => After,
            After => Before,
            IBefore => IAfter,
            IAfter => IBefore,
            Includes => IsIncluded,
            IsIncluded => Includes,
            Begins => BegunBy,
            BegunBy => Begins,
            Ends => EndedBy,
            EndedBy => Ends,
            Simultaneous => Simultaneous,
            During => DuringInv,
            DuringInv => During,
            Identity => Identity,
        }
    }

    /// Collapses rare labels into frequent ones before training:
    /// IBEFORE→BEFORE, IAFTER→AFTER, DURING and DURING_INV→SIMULTANEOUS.
    pub fn simplified(self) -> TLinkLabel {
        match self {
            TLinkLabel::IBefore => TLinkLabel::Before,
            TLinkLabel::IAfter => TLinkLabel::After,
            TLinkLabel::During | TLinkLabel::DuringInv => TLinkLabel::Simultaneous,
            other => other,
        }
    }
}

/// Free-function form of [`TLinkLabel::simplified`].
pub fn simplify_label(label: TLinkLabel) -> TLinkLabel {
    label.simplified()
}

impl fmt::Display for TLinkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown relation type `{0}`")]
pub struct UnknownLabel(pub String);

impl FromStr for TLinkLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TLinkLabel::ALL.iter().copied().find(|l| l.as_str() == s).ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

/// Outcome of causal classification for an ordered event pair.
///
/// `Clink` means e1 causes e2, `ClinkR` means e2 causes e1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalLabel {
    Clink,
    ClinkR,
    NoRel,
}

impl CausalLabel {
    pub const ALL: [CausalLabel; 3] = [CausalLabel::Clink, CausalLabel::ClinkR, CausalLabel::NoRel];

    pub fn as_str(self) -> &'static str {
        match self {
            CausalLabel::Clink => "CLINK",
            CausalLabel::ClinkR => "CLINK-R",
            CausalLabel::NoRel => "NO-REL",
        }
    }
}

impl fmt::Display for CausalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CausalLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CausalLabel::ALL.iter().copied().find(|l| l.as_str() == s).ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_is_involution() {
        for l in TLinkLabel::ALL {
            assert_eq!(l.inverse().inverse(), l);
        }
    }

    #[test]
    fn parse_roundtrip() {
        for l in TLinkLabel::ALL {
            assert_eq!(l.as_str().parse::<TLinkLabel>().unwrap(), l);
        }
        assert!("OVERLAP".parse::<TLinkLabel>().is_err());
    }

    #[test]
    fn simplification() {
        assert_eq!(simplify_label(TLinkLabel::IBefore), TLinkLabel::Before);
        assert_eq!(simplify_label(TLinkLabel::DuringInv), TLinkLabel::Simultaneous);
        assert_eq!(simplify_label(TLinkLabel::Begins), TLinkLabel::Begins);
        for l in TLinkLabel::ALL {
            assert_eq!(l.simplified().simplified(), l.simplified());
        }
    }
}
