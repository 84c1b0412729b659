//! Document-level reasoning: consistency checks, deduction, query answering
//! and the deduction-count predictor.

use super::{MappingProfile, TemporalGraph, Triangle};
use crate::labels::TLinkLabel;
use crate::timeml::{Document, IdAllocator, Provenance, TLink};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReasonerError {
    #[error("document is temporally inconsistent{}", .culprit.as_ref().map(|t| format!(" at {t}")).unwrap_or_default())]
    ConsistencyRequired { culprit: Option<Triangle> },
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
}

/// Outcome of [`check_document`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// Name of the first profile under which the document closed.
    pub profile_used: Option<String>,
    /// Culprit triangle from the first profile tried, when it failed.
    pub culprit: Option<Triangle>,
}

/// Builds the constraint network of a document's TLINKs: every entity is a
/// node (DCT first, then document order) and every link intersects its
/// pair with the mapped relation set.
pub fn graph_from_document(doc: &Document, profile: &MappingProfile) -> TemporalGraph {
    let mut g = TemporalGraph::new();
    for id in doc.entity_ids() {
        g.add_node(&id);
    }
    for l in &doc.tlinks {
        g.constrain(&l.source, &l.target, profile.map(l.rel_type));
    }
    g
}

/// Tries each profile in order and reports the first under which the
/// document's TLINKs are consistent.
pub fn check_document(doc: &Document, profiles: &[MappingProfile]) -> ConsistencyReport {
    let mut culprit = None;
    for p in profiles {
        let out = graph_from_document(doc, p).path_consistency();
        if out.consistent {
            return ConsistencyReport { consistent: true, profile_used: Some(p.name.clone()), culprit };
        }
        if culprit.is_none() {
            culprit = out.culprit;
        }
    }
    ConsistencyReport { consistent: false, profile_used: None, culprit }
}

/// New TLINKs for entity pairs without an annotated link whose closure
/// entails some label: the label with the smallest image containing the
/// closure relation.
///
/// Each unordered pair is emitted at most once, oriented in node order
/// (DCT first, then document order). Converses are not emitted.
pub fn deduce(doc: &Document, profile: &MappingProfile) -> Result<Vec<TLink>, ReasonerError> {
    let g = graph_from_document(doc, profile);
    let out = g.path_consistency();
    if !out.consistent {
        return Err(ReasonerError::ConsistencyRequired { culprit: out.culprit });
    }
    let closure = out.closure;
    let mut ids = IdAllocator::new(doc, "ld");
    let mut deduced = Vec::new();
    let n = closure.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let r = closure.rel(i, j);
            if r.is_full() || g.is_asserted(i, j) {
                continue;
            }
            if let Some(label) = profile.entailed_label(r) {
                let (a, b) = (&closure.nodes()[i], &closure.nodes()[j]);
                deduced.push(TLink::new(ids.next_id(), a, b, label, Provenance::Reasoner));
            }
        }
    }
    Ok(deduced)
}

/// Three-valued answer to "does `e1 REL e2` hold?".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Unknown => "UNKNOWN",
        }
    }
}

/// Answers a relation query against a closed graph: YES when the closure is
/// contained in the relation's image, NO when they are disjoint.
pub fn timegraph_answer(
    closure: &TemporalGraph,
    e1: &str,
    relation: TLinkLabel,
    e2: &str,
    semantics: &MappingProfile,
) -> Result<Answer, ReasonerError> {
    let i = closure.node_index(e1).ok_or_else(|| ReasonerError::UnknownEntity(e1.to_string()))?;
    let j = closure.node_index(e2).ok_or_else(|| ReasonerError::UnknownEntity(e2.to_string()))?;
    let have = closure.rel(i, j);
    let want = semantics.map(relation);
    Ok(if have.is_subset(want) {
        Answer::Yes
    } else if (have & want).is_empty() {
        Answer::No
    } else {
        Answer::Unknown
    })
}

/// Linear model estimating how many TLINKs deduction would add.
///
/// Applied to 15 TLINKs, 10 events and a largest component of 10 the
/// defaults give 177. A figure of about 43 is sometimes quoted for the same
/// inputs; it does not follow from these coefficients, so they are
/// configurable rather than trusted.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RegressionCoefficients {
    pub intercept: f64,
    pub tlinks: f64,
    pub events: f64,
    pub smcc: f64,
}

impl Default for RegressionCoefficients {
    fn default() -> Self {
        RegressionCoefficients { intercept: -10.0, tlinks: 12.8, events: -17.6, smcc: 17.1 }
    }
}

impl RegressionCoefficients {
    /// Parses `tlinks,events,smcc,intercept`.
    pub fn parse_list(s: &str) -> Result<RegressionCoefficients, String> {
        let vals: Vec<f64> = s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("not a number: `{}`", v.trim())))
            .collect::<Result<_, _>>()?;
        match vals[..] {
            [tlinks, events, smcc, intercept] if vals.iter().all(|v| v.is_finite()) => {
                Ok(RegressionCoefficients { intercept, tlinks, events, smcc })
            }
            _ => Err(format!("expected four finite comma-separated numbers, got `{s}`")),
        }
    }
}

/// `intercept + tlinks·n_tlinks + events·n_events + smcc·smcc`.
pub fn predict_deducible(n_tlinks: usize, n_events: usize, smcc: usize, coeffs: &RegressionCoefficients) -> f64 {
    coeffs.intercept + coeffs.tlinks * n_tlinks as f64 + coeffs.events * n_events as f64 + coeffs.smcc * smcc as f64
}
