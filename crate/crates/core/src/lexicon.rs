//! Bundled word lists and rule tables, loadable from a directory to
//! override the built-in copies.
//!
//! All files are line-oriented and tab-separated; blank lines and lines
//! starting with `#` are skipped.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use regex::Regex;

use crate::labels::TLinkLabel;
use crate::timeml::{Aspect, Tense};

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("{file}: line {line}: {message}")]
    Syntax { file: String, line: usize, message: String },
    #[error("{file}: {source}")]
    Io { file: String, source: std::io::Error },
}

const FILES: [(&str, &str); 9] = [
    ("temporal_signals_event.tsv", include_str!("../data/temporal_signals_event.tsv")),
    ("temporal_signals_timex.tsv", include_str!("../data/temporal_signals_timex.tsv")),
    ("causal_signals.tsv", include_str!("../data/causal_signals.tsv")),
    ("causal_verbs.tsv", include_str!("../data/causal_verbs.tsv")),
    ("temporal_prepositions.tsv", include_str!("../data/temporal_prepositions.tsv")),
    ("aspectual_verbs.tsv", include_str!("../data/aspectual_verbs.tsv")),
    ("tense_rules.tsv", include_str!("../data/tense_rules.tsv")),
    ("dependency_paths.tsv", include_str!("../data/dependency_paths.tsv")),
    ("signal_dependency_labels.tsv", include_str!("../data/signal_dependency_labels.tsv")),
];

fn rows<'a>(text: &'a str) -> impl Iterator<Item = (usize, Vec<&'a str>)> + 'a {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim_end_matches('\r');
        if l.trim().is_empty() || l.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, l.split('\t').map(str::trim).collect()))
        }
    })
}

fn syntax(file: &str, line: usize, message: impl Into<String>) -> LexiconError {
    LexiconError::Syntax { file: file.to_string(), line, message: message.into() }
}

fn cols(file: &str, line: usize, c: &[&str], n: usize) -> Result<(), LexiconError> {
    if c.len() < n {
        return Err(syntax(file, line, format!("expected {n} columns, found {}", c.len())));
    }
    Ok(())
}

/// A signal found in a token sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignalMatch {
    /// First token, absolute index in the layer.
    pub start: usize,
    /// One past the last token.
    pub end: usize,
    pub cluster: String,
}

#[derive(Clone, Debug)]
struct SignalEntry {
    regex: Regex,
    cluster: String,
}

/// Signal phrases and patterns grouped into clusters. Matching is
/// case-insensitive over tokens joined by single spaces and only accepts
/// matches that begin and end on token boundaries.
#[derive(Clone, Debug, Default)]
pub struct SignalLexicon {
    entries: Vec<SignalEntry>,
}

impl SignalLexicon {
    /// Two-column `text, cluster` lists of literal phrases.
    pub fn parse_literal(text: &str, file: &str) -> Result<SignalLexicon, LexiconError> {
        let mut lex = SignalLexicon::default();
        for (line, c) in rows(text) {
            cols(file, line, &c, 2)?;
            lex.push(&regex::escape(&c[0].to_lowercase()), c[1], file, line)?;
        }
        Ok(lex)
    }

    /// Three-column `kind, text, cluster` lists where kind is `pattern` or
    /// `literal`.
    pub fn parse_mixed(text: &str, file: &str) -> Result<SignalLexicon, LexiconError> {
        let mut lex = SignalLexicon::default();
        for (line, c) in rows(text) {
            cols(file, line, &c, 3)?;
            let pat = match c[0] {
                "pattern" => c[1].to_string(),
                "literal" => regex::escape(&c[1].to_lowercase()),
                other => return Err(syntax(file, line, format!("unknown kind `{other}`"))),
            };
            lex.push(&pat, c[2], file, line)?;
        }
        Ok(lex)
    }

    fn push(&mut self, pattern: &str, cluster: &str, file: &str, line: usize) -> Result<(), LexiconError> {
        let regex =
            Regex::new(&format!("(?i)^(?:{pattern})")).map_err(|e| syntax(file, line, format!("bad pattern: {e}")))?;
        self.entries.push(SignalEntry { regex, cluster: cluster.to_string() });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct cluster names in first-seen order.
    pub fn clusters(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.entries.iter().map(|e| e.cluster.as_str()).filter(|c| seen.insert(*c)).collect()
    }

    /// Cluster of a phrase matched in full, if any.
    pub fn cluster_of(&self, phrase: &str) -> Option<&str> {
        let p = phrase.to_lowercase();
        self.entries.iter().find(|e| e.regex.find(&p).is_some_and(|m| m.end() == p.len())).map(|e| e.cluster.as_str())
    }

    /// Leftmost-longest, non-overlapping matches over `forms`, whose first
    /// element has absolute token index `offset`.
    pub fn find(&self, forms: &[String], offset: usize) -> Vec<SignalMatch> {
        let mut joined = String::new();
        let mut starts = Vec::with_capacity(forms.len());
        let mut ends: HashMap<usize, usize> = HashMap::new();
        for (i, f) in forms.iter().enumerate() {
            if i > 0 {
                joined.push(' ');
            }
            starts.push(joined.len());
            joined.push_str(&f.to_lowercase());
            ends.insert(joined.len(), i + 1);
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < forms.len() {
            let hay = &joined[starts[i]..];
            let mut best: Option<(usize, &str)> = None;
            for e in &self.entries {
                if let Some(m) = e.regex.find(hay) {
                    if let Some(&end_tok) = ends.get(&(starts[i] + m.end())) {
                        if m.end() > 0 && best.is_none_or(|(b, _)| end_tok > b) {
                            best = Some((end_tok, e.cluster.as_str()));
                        }
                    }
                }
            }
            match best {
                Some((end_tok, cluster)) => {
                    out.push(SignalMatch { start: offset + i, end: offset + end_tok, cluster: cluster.to_string() });
                    i = end_tok;
                }
                None => i += 1,
            }
        }
        out
    }
}

/// Causal verb types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerbCategory {
    Affect,
    Link,
    Cause,
    CauseAmbiguous,
    Enable,
    EnableAmbiguous,
    Prevent,
    PreventAmbiguous,
}

impl VerbCategory {
    fn parse(s: &str) -> Option<VerbCategory> {
        Some(match s {
            "AFFECT" => VerbCategory::Affect,
            "LINK" => VerbCategory::Link,
            "CAUSE" => VerbCategory::Cause,
            "CAUSE-AMBIGUOUS" => VerbCategory::CauseAmbiguous,
            "ENABLE" => VerbCategory::Enable,
            "ENABLE-AMBIGUOUS" => VerbCategory::EnableAmbiguous,
            "PREVENT" => VerbCategory::Prevent,
            "PREVENT-AMBIGUOUS" => VerbCategory::PreventAmbiguous,
            _ => return None,
        })
    }

    pub fn is_ambiguous(self) -> bool {
        matches!(self, VerbCategory::CauseAmbiguous | VerbCategory::EnableAmbiguous | VerbCategory::PreventAmbiguous)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalVerb {
    pub lemma: String,
    /// Required following preposition for entries such as `lead-to`.
    pub preposition: Option<String>,
    pub category: VerbCategory,
    /// True when the event on the verb's subject side is the effect.
    pub reversed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct CausalVerbLexicon {
    entries: Vec<CausalVerb>,
}

impl CausalVerbLexicon {
    pub fn parse(text: &str, file: &str) -> Result<CausalVerbLexicon, LexiconError> {
        let mut lex = CausalVerbLexicon::default();
        for (line, c) in rows(text) {
            cols(file, line, &c, 3)?;
            let category =
                VerbCategory::parse(c[1]).ok_or_else(|| syntax(file, line, format!("unknown category `{}`", c[1])))?;
            let reversed = match c[2] {
                "CLINK" => false,
                "CLINK-R" => true,
                other => return Err(syntax(file, line, format!("unknown direction `{other}`"))),
            };
            if reversed && category != VerbCategory::Link {
                return Err(syntax(file, line, "only LINK verbs may carry CLINK-R"));
            }
            let (lemma, preposition) = match c[0].split_once('-') {
                Some((v, p)) => (v.to_string(), Some(p.to_string())),
                None => (c[0].to_string(), None),
            };
            lex.entries.push(CausalVerb { lemma, preposition, category, reversed });
        }
        Ok(lex)
    }

    pub fn entries(&self) -> &[CausalVerb] {
        &self.entries
    }

    /// First entry for a lemma whose preposition (if any) is satisfied by
    /// `next_form`.
    pub fn lookup(&self, lemma: &str, next_form: Option<&str>) -> Option<&CausalVerb> {
        let lemma = lemma.to_lowercase();
        self.entries.iter().find(|e| {
            e.lemma == lemma
                && match &e.preposition {
                    None => true,
                    Some(p) => next_form.is_some_and(|n| n.eq_ignore_ascii_case(p)),
                }
        })
    }
}

/// Meaning of a temporal preposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrepSense {
    TimePoint,
    TimePreceding,
    TimeFollowing,
    Duration,
    StartTime,
    EndTime,
}

impl PrepSense {
    pub fn label(self) -> TLinkLabel {
        match self {
            PrepSense::TimePoint => TLinkLabel::IsIncluded,
            PrepSense::TimePreceding => TLinkLabel::Before,
            PrepSense::TimeFollowing => TLinkLabel::After,
            PrepSense::Duration => TLinkLabel::During,
            PrepSense::StartTime => TLinkLabel::BegunBy,
            PrepSense::EndTime => TLinkLabel::EndedBy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AspectualClass {
    Initiation,
    Reinitiation,
    Culmination,
    Termination,
    Continuation,
}

/// Which tense rules a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TenseRuleSet {
    Reporting,
    Tense,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TenseRule {
    pub set: TenseRuleSet,
    pub gov_tense: Option<Tense>,
    pub gov_aspect: Option<Aspect>,
    pub dep_tense: Option<Tense>,
    pub dep_aspect: Option<Aspect>,
    pub label: TLinkLabel,
}

impl TenseRule {
    fn matches(&self, gt: Tense, ga: Aspect, dt: Tense, da: Aspect) -> bool {
        self.gov_tense.is_none_or(|x| x == gt)
            && self.gov_aspect.is_none_or(|x| x == ga)
            && self.dep_tense.is_none_or(|x| x == dt)
            && self.dep_aspect.is_none_or(|x| x == da)
    }
}

/// Ordered tense-profile rules; the first matching row wins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TenseRuleTable {
    pub rules: Vec<TenseRule>,
}

impl TenseRuleTable {
    pub fn parse(text: &str, file: &str) -> Result<TenseRuleTable, LexiconError> {
        let mut rules = Vec::new();
        for (line, c) in rows(text) {
            cols(file, line, &c, 6)?;
            let set = match c[0] {
                "reporting" => TenseRuleSet::Reporting,
                "tense" => TenseRuleSet::Tense,
                other => return Err(syntax(file, line, format!("unknown rule set `{other}`"))),
            };
            fn opt<T: std::str::FromStr>(s: &str, file: &str, line: usize) -> Result<Option<T>, LexiconError> {
                if s == "*" {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| syntax(file, line, format!("bad value `{s}`")))
                }
            }
            let label = c[5].parse().map_err(|_| syntax(file, line, format!("bad label `{}`", c[5])))?;
            rules.push(TenseRule {
                set,
                gov_tense: opt(c[1], file, line)?,
                gov_aspect: opt(c[2], file, line)?,
                dep_tense: opt(c[3], file, line)?,
                dep_aspect: opt(c[4], file, line)?,
                label,
            });
        }
        Ok(TenseRuleTable { rules })
    }

    pub fn lookup(&self, set: TenseRuleSet, gt: Tense, ga: Aspect, dt: Tense, da: Aspect) -> Option<TLinkLabel> {
        self.rules.iter().find(|r| r.set == set && r.matches(gt, ga, dt, da)).map(|r| r.label)
    }
}

/// Every word list and rule table the rule sieves, features and causal
/// stages use.
#[derive(Clone, Debug)]
pub struct Lexicons {
    pub event_signals: SignalLexicon,
    pub timex_signals: SignalLexicon,
    pub causal_signals: SignalLexicon,
    pub causal_verbs: CausalVerbLexicon,
    pub prepositions: HashMap<String, PrepSense>,
    pub aspectual: HashMap<String, AspectualClass>,
    pub tense_rules: TenseRuleTable,
    pub dependency_paths: HashSet<String>,
    pub signal_dep_labels: Vec<String>,
}

impl Lexicons {
    /// The copies compiled into the library.
    pub fn bundled() -> Lexicons {
        Lexicons::from_sources(|name| Ok(FILES.iter().find(|f| f.0 == name).expect("bundled file").1.to_string()))
            .expect("bundled lexicons parse")
    }

    /// Reads each file from `dir` when present, falling back to the bundled
    /// copy otherwise.
    pub fn load_dir(dir: &Path) -> Result<Lexicons, LexiconError> {
        Lexicons::from_sources(|name| {
            let path = dir.join(name);
            if path.exists() {
                std::fs::read_to_string(&path)
                    .map_err(|source| LexiconError::Io { file: path.display().to_string(), source })
            } else {
                Ok(FILES.iter().find(|f| f.0 == name).expect("bundled file").1.to_string())
            }
        })
    }

    /// Names of the files [`Lexicons::load_dir`] looks for.
    pub fn file_names() -> impl Iterator<Item = &'static str> {
        FILES.iter().map(|f| f.0)
    }

    /// Bundled text of one file.
    pub fn bundled_file(name: &str) -> Option<&'static str> {
        FILES.iter().find(|f| f.0 == name).map(|f| f.1)
    }

    fn from_sources(read: impl Fn(&str) -> Result<String, LexiconError>) -> Result<Lexicons, LexiconError> {
        let f = "temporal_prepositions.tsv";
        let mut prepositions = HashMap::new();
        for (line, c) in rows(&read(f)?) {
            cols(f, line, &c, 2)?;
            let sense = match c[1] {
                "TimePoint" => PrepSense::TimePoint,
                "TimePreceding" => PrepSense::TimePreceding,
                "TimeFollowing" => PrepSense::TimeFollowing,
                "Duration" => PrepSense::Duration,
                "StartTime" => PrepSense::StartTime,
                "EndTime" => PrepSense::EndTime,
                other => return Err(syntax(f, line, format!("unknown sense `{other}`"))),
            };
            prepositions.entry(c[0].to_lowercase()).or_insert(sense);
        }
        let f = "aspectual_verbs.tsv";
        let mut aspectual = HashMap::new();
        for (line, c) in rows(&read(f)?) {
            cols(f, line, &c, 2)?;
            let class = match c[1] {
                "initiation" => AspectualClass::Initiation,
                "reinitiation" => AspectualClass::Reinitiation,
                "culmination" => AspectualClass::Culmination,
                "termination" => AspectualClass::Termination,
                "continuation" => AspectualClass::Continuation,
                other => return Err(syntax(f, line, format!("unknown class `{other}`"))),
            };
            aspectual.entry(c[0].to_lowercase()).or_insert(class);
        }
        let dependency_paths = rows(&read("dependency_paths.tsv")?).map(|(_, c)| c[0].to_string()).collect();
        let signal_dep_labels = rows(&read("signal_dependency_labels.tsv")?).map(|(_, c)| c[0].to_string()).collect();
        Ok(Lexicons {
            event_signals: SignalLexicon::parse_literal(
                &read("temporal_signals_event.tsv")?,
                "temporal_signals_event.tsv",
            )?,
            timex_signals: SignalLexicon::parse_literal(
                &read("temporal_signals_timex.tsv")?,
                "temporal_signals_timex.tsv",
            )?,
            causal_signals: SignalLexicon::parse_mixed(&read("causal_signals.tsv")?, "causal_signals.tsv")?,
            causal_verbs: CausalVerbLexicon::parse(&read("causal_verbs.tsv")?, "causal_verbs.tsv")?,
            prepositions,
            aspectual,
            tense_rules: TenseRuleTable::parse(&read("tense_rules.tsv")?, "tense_rules.tsv")?,
            dependency_paths,
            signal_dep_labels,
        })
    }
}
