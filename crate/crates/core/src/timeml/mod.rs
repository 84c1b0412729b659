//! TimeML documents: entities, links, XML reading and writing.

mod parse;
mod write;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::labels::TLinkLabel;

pub use parse::parse_timeml;
pub use write::serialize_timeml;

/// Byte range `[start, end)` into [`Document::text`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn intersects(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn is_empty(&self) -> bool {
        self.start >= self.end
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TimeMlError {
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    #[error("unresolved reference `{id}` in {context}")]
    Reference { id: String, context: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("expected exactly one CREATION_TIME timex, found {0}")]
    Dct(usize),
    #[error("invalid value `{value}` for attribute {attribute} on {element}")]
    Attribute { element: String, attribute: String, value: String },
    #[error("missing attribute {attribute} on {element}")]
    MissingAttribute { element: String, attribute: String },
    #[error("CLINK {0} links an event to itself")]
    SelfLink(String),
}

macro_rules! attr_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s { $($text => Ok($name::$variant),)+ other => Err(other.to_string()) }
            }
        }
    };
}

attr_enum!(
    /// TimeML event class.
    EventClass {
        Reporting => "REPORTING",
        Perception => "PERCEPTION",
        Aspectual => "ASPECTUAL",
        IAction => "I_ACTION",
        IState => "I_STATE",
        State => "STATE",
        Occurrence => "OCCURRENCE",
    }
);

attr_enum!(Tense {
    Past => "PAST",
    Present => "PRESENT",
    Future => "FUTURE",
    Infinitive => "INFINITIVE",
    PresPart => "PRESPART",
    PastPart => "PASTPART",
    None => "NONE",
});

attr_enum!(Aspect {
    Progressive => "PROGRESSIVE",
    Perfective => "PERFECTIVE",
    PerfectiveProgressive => "PERFECTIVE_PROGRESSIVE",
    None => "NONE",
});

attr_enum!(TimexType {
    Date => "DATE",
    Time => "TIME",
    Duration => "DURATION",
    Set => "SET",
});

/// One event instance. Several instances may share an `eid` and span.
#[derive(Clone, Debug, PartialEq)]
pub struct EventInstance {
    pub eiid: String,
    pub eid: String,
    pub span: Span,
    pub class: EventClass,
    pub tense: Tense,
    pub aspect: Aspect,
    pub pos: String,
    pub polarity: String,
    pub modality: Option<String>,
    /// Other attributes found on the EVENT tag, in source order.
    pub event_attrs: Vec<(String, String)>,
    /// Other attributes found on the MAKEINSTANCE tag, in source order.
    pub instance_attrs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Timex {
    pub tid: String,
    /// `None` when the timex sits outside the text (the usual DCT case).
    pub span: Option<Span>,
    pub timex_type: TimexType,
    pub value: String,
    pub function_in_document: String,
    pub anchor_time_id: Option<String>,
    pub temporal_function: Option<String>,
    pub extra_attrs: Vec<(String, String)>,
}

impl Timex {
    pub fn is_creation_time(&self) -> bool {
        self.function_in_document == "CREATION_TIME"
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    pub sid: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausalSignal {
    pub id: String,
    pub span: Span,
}

/// Where a link came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    Annotated,
    Rule,
    Reasoner,
    Classifier,
    PostEdit,
    Propagated,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Annotated => "annotated",
            Provenance::Rule => "rule",
            Provenance::Reasoner => "reasoner",
            Provenance::Classifier => "classifier",
            Provenance::PostEdit => "post-edit",
            Provenance::Propagated => "propagated",
        }
    }
}

impl FromStr for Provenance {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "annotated" => Provenance::Annotated,
            "rule" => Provenance::Rule,
            "reasoner" => Provenance::Reasoner,
            "classifier" => Provenance::Classifier,
            "post-edit" => Provenance::PostEdit,
            "propagated" => Provenance::Propagated,
            other => return Err(other.to_string()),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TLink {
    pub lid: String,
    pub source: String,
    pub target: String,
    pub rel_type: TLinkLabel,
    pub signal_id: Option<String>,
    pub provenance: Provenance,
    /// Label a post-edit replaced, if any.
    pub overwritten: Option<TLinkLabel>,
}

impl TLink {
    pub fn new(
        lid: impl Into<String>,
        source: &str,
        target: &str,
        rel_type: TLinkLabel,
        provenance: Provenance,
    ) -> TLink {
        TLink {
            lid: lid.into(),
            source: source.to_string(),
            target: target.to_string(),
            rel_type,
            signal_id: None,
            provenance,
            overwritten: None,
        }
    }

    pub fn deduced(&self) -> bool {
        self.provenance == Provenance::Reasoner
    }

    /// The label as seen from `a` towards `b`, if this link joins them.
    pub fn label_between(&self, a: &str, b: &str) -> Option<TLinkLabel> {
        if self.source == a && self.target == b {
            Some(self.rel_type)
        } else if self.source == b && self.target == a {
            Some(self.rel_type.inverse())
        } else {
            None
        }
    }
}

/// Causal link; `source` is the cause.
#[derive(Clone, Debug, PartialEq)]
pub struct CLink {
    pub id: String,
    pub source: String,
    pub target: String,
    pub csignal_id: Option<String>,
    pub provenance: Provenance,
    pub confidence: Option<f64>,
}

impl CLink {
    pub fn new(id: impl Into<String>, source: &str, target: &str, provenance: Provenance) -> CLink {
        CLink {
            id: id.into(),
            source: source.to_string(),
            target: target.to_string(),
            csignal_id: None,
            provenance,
            confidence: None,
        }
    }

    pub fn joins(&self, a: &str, b: &str) -> bool {
        (self.source == a && self.target == b) || (self.source == b && self.target == a)
    }
}

/// An element kept verbatim (SLINK, ALINK, or anything unrecognized).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawElement {
    pub name: String,
    pub xml: String,
}

/// An unrecognized tag inside the text, kept with its position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InlineTag {
    pub name: String,
    /// Attribute source text, as written between the tag name and `>`.
    pub attrs: String,
    pub span: Span,
}

/// What an id refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntityKind {
    Event,
    Timex,
    Dct,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub doc_id: String,
    pub dct: Timex,
    /// Surface text of the DCT timex.
    pub dct_text: String,
    pub text: String,
    pub events: Vec<EventInstance>,
    pub timexes: Vec<Timex>,
    pub signals: Vec<Signal>,
    pub csignals: Vec<CausalSignal>,
    pub tlinks: Vec<TLink>,
    pub clinks: Vec<CLink>,
    /// SLINK, ALINK and unrecognized top-level elements.
    pub other_links: Vec<RawElement>,
    pub inline_other: Vec<InlineTag>,
}

impl Document {
    /// A document with only a DCT and empty text.
    pub fn empty(doc_id: &str, dct_value: &str) -> Document {
        Document {
            doc_id: doc_id.to_string(),
            dct: Timex {
                tid: "t0".into(),
                span: None,
                timex_type: TimexType::Date,
                value: dct_value.to_string(),
                function_in_document: "CREATION_TIME".into(),
                anchor_time_id: None,
                temporal_function: Some("false".into()),
                extra_attrs: Vec::new(),
            },
            dct_text: dct_value.to_string(),
            text: String::new(),
            events: Vec::new(),
            timexes: Vec::new(),
            signals: Vec::new(),
            csignals: Vec::new(),
            tlinks: Vec::new(),
            clinks: Vec::new(),
            other_links: Vec::new(),
            inline_other: Vec::new(),
        }
    }

    pub fn event(&self, eiid: &str) -> Option<&EventInstance> {
        self.events.iter().find(|e| e.eiid == eiid)
    }

    /// Timex by id, including the DCT.
    pub fn timex(&self, tid: &str) -> Option<&Timex> {
        if self.dct.tid == tid {
            return Some(&self.dct);
        }
        self.timexes.iter().find(|t| t.tid == tid)
    }

    pub fn entity_kind(&self, id: &str) -> Option<EntityKind> {
        if self.dct.tid == id {
            Some(EntityKind::Dct)
        } else if self.timexes.iter().any(|t| t.tid == id) {
            Some(EntityKind::Timex)
        } else if self.events.iter().any(|e| e.eiid == id) {
            Some(EntityKind::Event)
        } else {
            None
        }
    }

    /// Span of an event instance or timex.
    pub fn span_of(&self, id: &str) -> Option<Span> {
        if let Some(e) = self.event(id) {
            return Some(e.span);
        }
        self.timex(id).and_then(|t| t.span)
    }

    /// Surface text of an entity.
    pub fn surface(&self, id: &str) -> Option<&str> {
        if id == self.dct.tid && self.dct.span.is_none() {
            return Some(&self.dct_text);
        }
        self.span_of(id).map(|s| &self.text[s.start..s.end])
    }

    /// Node ids in document order: the DCT first, then timexes and events
    /// by span start.
    pub fn entity_ids(&self) -> Vec<String> {
        let mut rest: Vec<(usize, usize, String)> = Vec::new();
        for t in &self.timexes {
            rest.push((t.span.map_or(0, |s| s.start), 0, t.tid.clone()));
        }
        for e in &self.events {
            rest.push((e.span.start, 1, e.eiid.clone()));
        }
        rest.sort_by_key(|a| (a.0, a.1));
        let mut ids = vec![self.dct.tid.clone()];
        ids.extend(rest.into_iter().map(|x| x.2));
        ids
    }

    /// Events sorted by span start, ties by position in `events`.
    pub fn events_in_order(&self) -> Vec<&EventInstance> {
        let mut v: Vec<&EventInstance> = self.events.iter().collect();
        v.sort_by_key(|e| e.span.start);
        v
    }

    /// Index of the first TLINK joining `a` and `b` in either direction.
    pub fn tlink_between(&self, a: &str, b: &str) -> Option<usize> {
        self.tlinks.iter().position(|l| (l.source == a && l.target == b) || (l.source == b && l.target == a))
    }

    /// Every id already used in the document.
    pub fn used_ids(&self) -> HashSet<String> {
        let mut ids = HashSet::new();
        ids.insert(self.dct.tid.clone());
        for e in &self.events {
            ids.insert(e.eiid.clone());
            ids.insert(e.eid.clone());
        }
        ids.extend(self.timexes.iter().map(|t| t.tid.clone()));
        ids.extend(self.signals.iter().map(|s| s.sid.clone()));
        ids.extend(self.csignals.iter().map(|s| s.id.clone()));
        ids.extend(self.tlinks.iter().map(|l| l.lid.clone()));
        ids.extend(self.clinks.iter().map(|l| l.id.clone()));
        ids
    }

    /// Checks id uniqueness, reference resolution and the DCT rule.
    pub fn validate(&self) -> Result<(), TimeMlError> {
        if !self.dct.is_creation_time() {
            return Err(TimeMlError::Dct(0));
        }
        let extra_dct = self.timexes.iter().filter(|t| t.is_creation_time()).count();
        if extra_dct > 0 {
            return Err(TimeMlError::Dct(extra_dct + 1));
        }
        let mut seen = HashSet::new();
        let mut check = |id: &str| {
            if seen.insert(id.to_string()) {
                Ok(())
            } else {
                Err(TimeMlError::DuplicateId(id.to_string()))
            }
        };
        check(&self.dct.tid)?;
        let mut eids = HashSet::new();
        for e in &self.events {
            check(&e.eiid)?;
            eids.insert(e.eid.as_str());
        }
        for eid in eids {
            check(eid)?;
        }
        for t in &self.timexes {
            check(&t.tid)?;
        }
        for s in &self.signals {
            check(&s.sid)?;
        }
        for s in &self.csignals {
            check(&s.id)?;
        }
        for l in &self.tlinks {
            check(&l.lid)?;
        }
        for l in &self.clinks {
            check(&l.id)?;
        }
        for l in &self.tlinks {
            for id in [&l.source, &l.target] {
                if self.entity_kind(id).is_none() {
                    return Err(TimeMlError::Reference { id: id.clone(), context: format!("TLINK {}", l.lid) });
                }
            }
        }
        for l in &self.clinks {
            for id in [&l.source, &l.target] {
                if self.event(id).is_none() {
                    return Err(TimeMlError::Reference { id: id.clone(), context: format!("CLINK {}", l.id) });
                }
            }
            if l.source == l.target {
                return Err(TimeMlError::SelfLink(l.id.clone()));
            }
        }
        Ok(())
    }
}

/// Hands out ids of the form `{prefix}{n}` that do not collide with ids
/// already in a document.
#[derive(Clone, Debug)]
pub struct IdAllocator {
    used: HashSet<String>,
    prefix: String,
    next: usize,
}

impl IdAllocator {
    pub fn new(doc: &Document, prefix: &str) -> IdAllocator {
        IdAllocator { used: doc.used_ids(), prefix: prefix.to_string(), next: 1 }
    }

    pub fn next_id(&mut self) -> String {
        loop {
            let id = format!("{}{}", self.prefix, self.next);
            self.next += 1;
            if self.used.insert(id.clone()) {
                return id;
            }
        }
    }
}

/// Map from entity id to its span, used for cross-document alignment.
pub fn spans_by_id(doc: &Document) -> HashMap<String, Span> {
    let mut m = HashMap::new();
    for e in &doc.events {
        m.insert(e.eiid.clone(), e.span);
    }
    for t in &doc.timexes {
        if let Some(s) = t.span {
            m.insert(t.tid.clone(), s);
        }
    }
    m
}
