//! Mappings between TLINK labels and Allen relation sets.

use std::path::Path;

use super::{BaseRelation, RelationSet};
use crate::labels::TLinkLabel;

/// A named TLINK→Allen mapping plus the names of profiles to try next when
/// a document is inconsistent under this one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingProfile {
    pub name: String,
    forward: [RelationSet; 14],
    pub fallback: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error("profile file {path}: line {line}: {message}")]
    Syntax { path: String, line: usize, message: String },
    #[error("profile `{profile}`: {label} maps to {found} but the converse of its inverse is {expected}")]
    NotConverseClosed { profile: String, label: TLinkLabel, found: RelationSet, expected: RelationSet },
    #[error("profile `{profile}`: {label} maps to the empty set")]
    EmptyImage { profile: String, label: TLinkLabel },
    #[error("unknown profile `{0}`")]
    Unknown(String),
    #[error("reading profile {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn idx(label: TLinkLabel) -> usize {
    TLinkLabel::ALL.iter().position(|l| *l == label).expect("label in ALL")
}

impl MappingProfile {
    /// The default mapping: one base relation per label, DURING treated as
    /// IS_INCLUDED and IDENTITY as SIMULTANEOUS.
    pub fn strict() -> MappingProfile {
        use BaseRelation::*;
        use TLinkLabel as L;
        let pairs = [
            (L::Before, Before),
            (L::After, After),
            (L::IBefore, Meets),
            (L::IAfter, MetBy),
            (L::Includes, Contains),
            (L::IsIncluded, During),
            (L::Begins, Starts),
            (L::BegunBy, StartedBy),
            (L::Ends, Finishes),
            (L::EndedBy, FinishedBy),
            (L::Simultaneous, Equals),
            (L::During, During),
            (L::DuringInv, Contains),
            (L::Identity, Equals),
        ];
        let mut forward = [RelationSet::EMPTY; 14];
        for (l, r) in pairs {
            forward[idx(l)] = RelationSet::single(r);
        }
        MappingProfile { name: "strict".into(), forward, fallback: vec!["relaxed".into()] }
    }

    /// Strict, except BEFORE/AFTER also admit meeting intervals.
    pub fn relaxed() -> MappingProfile {
        use BaseRelation::*;
        let mut p = MappingProfile::strict();
        p.name = "relaxed".into();
        p.fallback = Vec::new();
        p.forward[idx(TLinkLabel::Before)] = RelationSet::of(&[Before, Meets]);
        p.forward[idx(TLinkLabel::After)] = RelationSet::of(&[After, MetBy]);
        p
    }

    /// Strict, except DURING/DURING_INV read as overlap.
    pub fn overlap() -> MappingProfile {
        let mut p = MappingProfile::strict();
        p.name = "overlap".into();
        p.fallback = Vec::new();
        p.forward[idx(TLinkLabel::During)] = RelationSet::single(BaseRelation::Overlaps);
        p.forward[idx(TLinkLabel::DuringInv)] = RelationSet::single(BaseRelation::OverlappedBy);
        p
    }

    /// Looks up one of the built-in profiles by name.
    pub fn builtin(name: &str) -> Result<MappingProfile, ProfileError> {
        match name {
            "strict" => Ok(MappingProfile::strict()),
            "relaxed" => Ok(MappingProfile::relaxed()),
            "overlap" => Ok(MappingProfile::overlap()),
            other => Err(ProfileError::Unknown(other.to_string())),
        }
    }

    /// Builds a profile from an explicit table and checks it.
    pub fn new(
        name: impl Into<String>,
        entries: &[(TLinkLabel, RelationSet)],
        fallback: Vec<String>,
    ) -> Result<MappingProfile, ProfileError> {
        let mut p = MappingProfile::strict();
        p.name = name.into();
        p.fallback = fallback;
        for (l, r) in entries {
            p.forward[idx(*l)] = *r;
        }
        p.validate()?;
        Ok(p)
    }

    /// Forward image of a label.
    pub fn map(&self, label: TLinkLabel) -> RelationSet {
        self.forward[idx(label)]
    }

    /// The label whose image is exactly `r`, preferring earlier labels in
    /// [`TLinkLabel::ALL`] when several share it.
    pub fn unmap(&self, r: RelationSet) -> Option<TLinkLabel> {
        TLinkLabel::ALL.into_iter().find(|l| self.map(*l) == r)
    }

    /// The label with the smallest image containing `r`, so that the label
    /// holds whenever `r` does. Ties go to the earlier label in
    /// [`TLinkLabel::ALL`].
    pub fn entailed_label(&self, r: RelationSet) -> Option<TLinkLabel> {
        if r.is_empty() {
            return None;
        }
        TLinkLabel::ALL.into_iter().filter(|l| r.is_subset(self.map(*l))).min_by_key(|l| self.map(*l).len())
    }

    /// Checks that every image is non-empty and that inverse labels map to
    /// converse sets.
    pub fn validate(&self) -> Result<(), ProfileError> {
        for l in TLinkLabel::ALL {
            let found = self.map(l);
            if found.is_empty() {
                return Err(ProfileError::EmptyImage { profile: self.name.clone(), label: l });
            }
            let expected = self.map(l.inverse()).converse();
            if found != expected {
                return Err(ProfileError::NotConverseClosed { profile: self.name.clone(), label: l, found, expected });
            }
        }
        Ok(())
    }

    /// Parses the key-value profile format:
    ///
    /// ```text
    /// # comment
    /// name = relaxed
    /// base = strict
    /// fallback = overlap
    /// BEFORE = < m
    /// AFTER = > mi
    /// ```
    ///
    /// Labels not listed keep the value from `base` (strict by default).
    pub fn parse(text: &str, origin: &str) -> Result<MappingProfile, ProfileError> {
        let syntax = |line: usize, message: String| ProfileError::Syntax { path: origin.to_string(), line, message };
        let mut name = None;
        let mut base = MappingProfile::strict();
        let mut fallback = Vec::new();
        let mut entries: Vec<(TLinkLabel, RelationSet)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| syntax(i + 1, "expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "name" => name = Some(value.to_string()),
                "base" => base = MappingProfile::builtin(value).map_err(|e| syntax(i + 1, e.to_string()))?,
                "fallback" => {
                    fallback = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect()
                }
                label => {
                    let l: TLinkLabel = label.parse().map_err(|e| syntax(i + 1, format!("{e}")))?;
                    let r: RelationSet = value.parse().map_err(|e| syntax(i + 1, format!("{e}")))?;
                    entries.push((l, r));
                }
            }
        }
        let name = name.ok_or_else(|| syntax(0, "missing `name`".into()))?;
        let mut p = base;
        p.name = name;
        p.fallback = fallback;
        for (l, r) in entries {
            p.forward[idx(l)] = r;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: &Path) -> Result<MappingProfile, ProfileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ProfileError::Io { path: path.display().to_string(), source })?;
        MappingProfile::parse(&text, &path.display().to_string())
    }

    /// Renders the profile in the format accepted by [`MappingProfile::parse`].
    pub fn render(&self) -> String {
        let mut out = format!("name = {}\n", self.name);
        if !self.fallback.is_empty() {
            out.push_str(&format!("fallback = {}\n", self.fallback.join(", ")));
        }
        for l in TLinkLabel::ALL {
            let set = self.map(l).to_string();
            out.push_str(&format!("{} = {}\n", l, &set[1..set.len() - 1]));
        }
        out
    }
}

/// Expands a starting profile into the ordered sequence it falls back
/// through, resolving names against the built-ins and `extra`.
pub fn fallback_chain(start: &MappingProfile, extra: &[MappingProfile]) -> Result<Vec<MappingProfile>, ProfileError> {
    let mut chain = vec![start.clone()];
    let mut i = 0;
    while i < chain.len() {
        for name in chain[i].fallback.clone() {
            if chain.iter().any(|p| p.name == name) {
                continue;
            }
            let next = match extra.iter().find(|p| p.name == name) {
                Some(p) => p.clone(),
                None => MappingProfile::builtin(&name)?,
            };
            chain.push(next);
        }
        i += 1;
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use BaseRelation::*;

    #[test]
    fn builtins_validate() {
        for p in [MappingProfile::strict(), MappingProfile::relaxed(), MappingProfile::overlap()] {
            p.validate().unwrap();
        }
    }

    #[test]
    fn strict_and_relaxed_before() {
        assert_eq!(MappingProfile::strict().map(TLinkLabel::Before), RelationSet::single(Before));
        assert_eq!(MappingProfile::relaxed().map(TLinkLabel::Before), RelationSet::of(&[Before, Meets]));
        assert_eq!(MappingProfile::strict().map(TLinkLabel::Simultaneous), RelationSet::EQUALS);
    }

    #[test]
    fn unmap_prefers_common_labels() {
        let s = MappingProfile::strict();
        assert_eq!(s.unmap(RelationSet::EQUALS), Some(TLinkLabel::Simultaneous));
        assert_eq!(s.unmap(RelationSet::single(During)), Some(TLinkLabel::IsIncluded));
        assert_eq!(s.unmap(RelationSet::of(&[Before, Meets])), None);
        assert_eq!(MappingProfile::relaxed().unmap(RelationSet::of(&[Before, Meets])), Some(TLinkLabel::Before));
        assert_eq!(s.unmap(RelationSet::FULL), None);
    }

    #[test]
    fn parse_render_roundtrip() {
        let p = MappingProfile::relaxed();
        let q = MappingProfile::parse(&p.render(), "mem").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_rejects_asymmetric_profile() {
        let text = "name = bad\nBEFORE = < m\n";
        assert!(matches!(MappingProfile::parse(text, "mem"), Err(ProfileError::NotConverseClosed { .. })));
    }

    #[test]
    fn entailed_label_is_the_tightest_cover() {
        let relaxed = MappingProfile::relaxed();
        let b = RelationSet::single(BaseRelation::Before);
        assert_eq!(relaxed.unmap(b), None);
        assert_eq!(relaxed.entailed_label(b), Some(TLinkLabel::Before));
        assert_eq!(MappingProfile::strict().entailed_label(b), Some(TLinkLabel::Before));
        let loose = RelationSet::of(&[BaseRelation::Before, BaseRelation::During]);
        assert_eq!(MappingProfile::strict().entailed_label(loose), None);
    }

    #[test]
    fn chain_follows_fallbacks() {
        let chain = fallback_chain(&MappingProfile::strict(), &[]).unwrap();
        let names: Vec<_> = chain.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, ["strict", "relaxed"]);
    }
}
