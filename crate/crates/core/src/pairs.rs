//! Candidate entity pairs for the temporal and causal tasks.

use std::collections::HashSet;
use std::fmt;

use crate::annotation::AnnotatedDocument;

/// Entity types of a pair: timex-timex, event-DCT, event-timex or
/// event-event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum PairKind {
    TT,
    ED,
    ET,
    EE,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::TT => "TT",
            PairKind::ED => "ED",
            PairKind::ET => "ET",
            PairKind::EE => "EE",
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which candidate set to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Temporal,
    Causal,
}

/// Ordered pair of entity ids. For ET pairs the timex is always `e2`; for
/// ED pairs the DCT is `e2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EntityPair {
    pub kind: PairKind,
    pub e1: String,
    pub e2: String,
    pub same_sentence: bool,
}

impl EntityPair {
    pub fn new(kind: PairKind, e1: &str, e2: &str, same_sentence: bool) -> EntityPair {
        EntityPair { kind, e1: e1.to_string(), e2: e2.to_string(), same_sentence }
    }
}

/// Candidate pairs in a fixed order: for the temporal task TT pairs (DCT
/// first, then document order), ED, ET, then EE; for the causal task EE
/// pairs only.
///
/// Temporal EE pairs are same-sentence pairs plus pairs of main events in
/// consecutive sentences. Causal pairs are every forward same-sentence pair
/// plus every event paired with each event of the next sentence.
pub fn candidate_pairs(ad: &AnnotatedDocument, task: Task) -> Vec<EntityPair> {
    let doc = &ad.doc;
    let events: Vec<&str> = doc.events_in_order().iter().map(|e| e.eiid.as_str()).collect();
    let mut out = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut push = |out: &mut Vec<EntityPair>, p: EntityPair| {
        if seen.insert((p.e1.clone(), p.e2.clone())) {
            out.push(p);
        }
    };
    if task == Task::Temporal {
        let mut timexes: Vec<&crate::timeml::Timex> = doc.timexes.iter().collect();
        timexes.sort_by_key(|t| t.span.map_or(0, |s| s.start));
        for t in &timexes {
            push(&mut out, EntityPair::new(PairKind::TT, &doc.dct.tid, &t.tid, false));
        }
        for (i, a) in timexes.iter().enumerate() {
            for b in &timexes[i + 1..] {
                let same = matches!((ad.sentence_of(&a.tid), ad.sentence_of(&b.tid)), (Some(x), Some(y)) if x == y);
                push(&mut out, EntityPair::new(PairKind::TT, &a.tid, &b.tid, same));
            }
        }
        for e in &events {
            push(&mut out, EntityPair::new(PairKind::ED, e, &doc.dct.tid, false));
        }
        for e in &events {
            let Some(se) = ad.sentence_of(e) else { continue };
            for t in &timexes {
                if ad.sentence_of(&t.tid) == Some(se) {
                    push(&mut out, EntityPair::new(PairKind::ET, e, &t.tid, true));
                }
            }
        }
    }
    for (i, a) in events.iter().enumerate() {
        let Some(sa) = ad.sentence_of(a) else { continue };
        for b in &events[i + 1..] {
            let Some(sb) = ad.sentence_of(b) else { continue };
            let keep = match task {
                Task::Temporal => sb == sa || (sb == sa + 1 && ad.is_main_verb(a) && ad.is_main_verb(b)),
                Task::Causal => sb == sa || sb == sa + 1,
            };
            if keep {
                push(&mut out, EntityPair::new(PairKind::EE, a, b, sa == sb));
            }
        }
    }
    out
}
