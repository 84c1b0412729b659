//! Causal relation extraction: causal-verb rules, candidate filtering, the
//! three-way CLINK classifier, post-editing of TLINKs from CLINKs,
//! propagation of CLINKs across coreferent events in related documents,
//! and one round of self-training.

use std::collections::HashSet;

use crate::annotation::AnnotatedDocument;
use crate::features::{pair_signals, raw_features, FeatureError, FeatureSet};
use crate::labels::{CausalLabel, TLinkLabel};
use crate::lexicon::{Lexicons, VerbCategory};
use crate::linear::Classifier;
use crate::pairs::{candidate_pairs, EntityPair, Task};
use crate::timeml::{CLink, Document, IdAllocator, Provenance, TLink};

/// Relations between the causal verb and the first event that the verb
/// rules accept, as label paths read from the event to the verb.
const DEP1: [&str; 7] = ["SBJ", "NMOD", "APPO", "ADV", "PRP-IM", "PRD-IM", "SBJ-PRD-IM"];

/// Direct relations between the two events that rule a pair out of
/// classification.
const BLOCKING: [&str; 7] = ["SBJ", "OBJ", "COORD-CONJ", "VC", "LOC-PMOD", "OPRD", "OPRD-IM"];

/// Maximum number of entities allowed between a classified pair, exclusive.
pub const MAX_ENTITY_DISTANCE: usize = 5;

fn token_bounds(ad: &AnnotatedDocument, id: &str) -> Option<(usize, usize)> {
    let t = ad.tokens_of(id);
    Some((*t.first()?, *t.last()?))
}

/// Label from a causal verb lying strictly between `e1` and `e2`, keyed on
/// the verb's category and direction and its dependency relations to both
/// events. The first verb that fires decides.
pub fn causal_verb_rule(pair: &EntityPair, ad: &AnnotatedDocument, lex: &Lexicons) -> Option<CausalLabel> {
    let (_, e1_end) = token_bounds(ad, &pair.e1)?;
    let (e2_start, _) = token_bounds(ad, &pair.e2)?;
    if e1_end >= e2_start || ad.sentence_of(&pair.e1)? != ad.sentence_of(&pair.e2)? {
        return None;
    }
    let h1 = ad.head(&pair.e1)?;
    let h2 = ad.head(&pair.e2)?;
    for v in e1_end + 1..e2_start {
        let tok = ad.token(v);
        let lemma = if tok.lemma.is_empty() { tok.form.to_lowercase() } else { tok.lemma.to_lowercase() };
        let next = (v + 1 < ad.n_tokens()).then(|| ad.token(v + 1).form.as_str());
        let Some(verb) = lex.causal_verbs.lookup(&lemma, next) else {
            continue;
        };
        let Some(p1) = ad.dep_path(h1, v) else { continue };
        if !DEP1.contains(&p1.label_string().as_str()) {
            continue;
        }
        let Some(p2) = ad.dep_path(v, h2) else { continue };
        if p2.is_empty() || !p2.is_downward() {
            continue;
        }
        let dep2 = p2.label_string();
        let dep2 = dep2.as_str();
        let label = match verb.category {
            VerbCategory::Affect => (dep2 == "OBJ").then_some(CausalLabel::Clink),
            VerbCategory::Link => matches!(dep2, "OBJ" | "ADV-PMOD" | "DIR-PMOD" | "AMOD-PMOD")
                .then_some(if verb.reversed { CausalLabel::ClinkR } else { CausalLabel::Clink }),
            VerbCategory::Cause | VerbCategory::Enable | VerbCategory::Prevent => match dep2 {
                "OBJ" | "OPRD" | "OPRD-IM" | "ADV-PMOD" => Some(CausalLabel::Clink),
                "LGS-PMOD" => Some(CausalLabel::ClinkR),
                _ => None,
            },
            VerbCategory::CauseAmbiguous | VerbCategory::EnableAmbiguous | VerbCategory::PreventAmbiguous => {
                matches!(dep2, "OPRD" | "OPRD-IM" | "ADV-PMOD").then_some(CausalLabel::Clink)
            }
        };
        if label.is_some() {
            return label;
        }
    }
    None
}

/// Whether a pair goes to the CLINK classifier: a causal signal in the
/// pair's sentences dominates or is dominated by one of the events (at
/// any depth), the events are not joined by a blocking relation, and fewer
/// than [`MAX_ENTITY_DISTANCE`] entities lie between them.
pub fn clink_candidate_filter(pair: &EntityPair, ad: &AnnotatedDocument, lex: &Lexicons) -> bool {
    let Some(distance) = ad.entity_distance(&pair.e1, &pair.e2) else {
        return false;
    };
    if distance >= MAX_ENTITY_DISTANCE {
        return false;
    }
    let (Some(h1), Some(h2)) = (ad.head(&pair.e1), ad.head(&pair.e2)) else {
        return false;
    };
    if let Some(p) = ad.dep_path(h1, h2) {
        if !p.is_empty() && (p.is_downward() || p.is_upward()) {
            let mut labels: Vec<&str> = p.steps.iter().map(|s| s.label.as_str()).collect();
            if p.is_upward() {
                labels.reverse();
            }
            if BLOCKING.contains(&labels.join("-").as_str()) {
                return false;
            }
        }
    }
    pair_signals(ad, pair, &lex.causal_signals)
        .iter()
        .any(|s| [h1, h2].iter().any(|&h| ad.dominates(s.head, h) || ad.dominates(h, s.head)))
}

/// Gold label of a forward pair from the document's CLINKs.
pub fn gold_clink_label(doc: &Document, pair: &EntityPair) -> CausalLabel {
    if doc.clinks.iter().any(|c| c.source == pair.e1 && c.target == pair.e2) {
        CausalLabel::Clink
    } else if doc.clinks.iter().any(|c| c.source == pair.e2 && c.target == pair.e1) {
        CausalLabel::ClinkR
    } else {
        CausalLabel::NoRel
    }
}

/// Temporal label of the pair seen from `e1`, taken from the document's
/// TLINKs.
pub fn tlink_label(doc: &Document, pair: &EntityPair) -> Option<TLinkLabel> {
    doc.tlinks.iter().find_map(|l| l.label_between(&pair.e1, &pair.e2))
}

/// A CLINK classifier together with whether it was trained with the
/// temporal-label feature.
#[derive(Clone, Debug, PartialEq)]
pub struct CausalClassifier {
    pub classifier: Classifier,
    pub with_tlink: bool,
}

impl CausalClassifier {
    pub fn features(
        &self,
        pair: &EntityPair,
        ad: &AnnotatedDocument,
        lex: &Lexicons,
        tlink: Option<TLinkLabel>,
    ) -> Result<Vec<String>, FeatureError> {
        raw_features(pair, ad, lex, FeatureSet::Causal { tlink, with_tlink: self.with_tlink })
    }
}

/// Three-way decision with its confidence margin.
pub fn classify_clink(
    model: &CausalClassifier,
    pair: &EntityPair,
    ad: &AnnotatedDocument,
    lex: &Lexicons,
    tlink: Option<TLinkLabel>,
) -> Result<(CausalLabel, f64), FeatureError> {
    let raw = model.features(pair, ad, lex, tlink)?;
    let p = model.classifier.predict_raw(&raw);
    let label = p.label.parse().unwrap_or(CausalLabel::NoRel);
    Ok((label, p.confidence))
}

/// A causal decision for a forward pair.
#[derive(Clone, Debug, PartialEq)]
pub struct CausalDecision {
    pub pair: EntityPair,
    pub label: CausalLabel,
    pub provenance: Provenance,
    pub confidence: Option<f64>,
}

/// Verb rules over every causal candidate, then the classifier (when given)
/// over the remaining candidates that pass the filter. Only CLINK and
/// CLINK-R decisions are returned.
pub fn extract_clinks(
    ad: &AnnotatedDocument,
    lex: &Lexicons,
    model: Option<&CausalClassifier>,
) -> Result<Vec<CausalDecision>, FeatureError> {
    let mut out = Vec::new();
    for pair in candidate_pairs(ad, Task::Causal) {
        if let Some(label) = causal_verb_rule(&pair, ad, lex) {
            out.push(CausalDecision { pair, label, provenance: Provenance::Rule, confidence: None });
            continue;
        }
        let Some(m) = model else { continue };
        if !clink_candidate_filter(&pair, ad, lex) {
            continue;
        }
        let (label, confidence) = classify_clink(m, &pair, ad, lex, tlink_label(&ad.doc, &pair))?;
        if label != CausalLabel::NoRel {
            out.push(CausalDecision { pair, label, provenance: Provenance::Classifier, confidence: Some(confidence) });
        }
    }
    Ok(out)
}

/// Adds decisions to the document as CLINKs with the cause as source.
pub fn add_clinks(doc: &mut Document, decisions: &[CausalDecision]) {
    let mut ids = IdAllocator::new(doc, "c");
    for d in decisions {
        let (source, target) = match d.label {
            CausalLabel::Clink => (&d.pair.e1, &d.pair.e2),
            CausalLabel::ClinkR => (&d.pair.e2, &d.pair.e1),
            CausalLabel::NoRel => continue,
        };
        if doc.clinks.iter().any(|c| c.joins(source, target)) {
            continue;
        }
        let mut c = CLink::new(ids.next_id(), source, target, d.provenance);
        c.confidence = d.confidence;
        doc.clinks.push(c);
    }
}

/// Makes every cause precede its effect. Existing TLINKs between a CLINK's
/// events are relabeled in place (keeping their orientation and recording
/// the replaced label); missing ones are added oriented in text order.
pub fn post_edit_tlinks(doc: &mut Document) {
    let mut ids = IdAllocator::new(doc, "lp");
    let clinks: Vec<(String, String)> = doc.clinks.iter().map(|c| (c.source.clone(), c.target.clone())).collect();
    for (cause, effect) in clinks {
        if cause == effect {
            continue;
        }
        let mut found = false;
        for l in doc.tlinks.iter_mut() {
            let want = if l.source == cause && l.target == effect {
                TLinkLabel::Before
            } else if l.source == effect && l.target == cause {
                TLinkLabel::After
            } else {
                continue;
            };
            found = true;
            if l.rel_type != want {
                l.overwritten = Some(l.rel_type);
                l.rel_type = want;
                l.provenance = Provenance::PostEdit;
            }
        }
        if !found {
            let cause_first = match (doc.span_of(&cause), doc.span_of(&effect)) {
                (Some(a), Some(b)) => a.start <= b.start,
                _ => true,
            };
            let l = if cause_first {
                TLink::new(ids.next_id(), &cause, &effect, TLinkLabel::Before, Provenance::PostEdit)
            } else {
                TLink::new(ids.next_id(), &effect, &cause, TLinkLabel::After, Provenance::PostEdit)
            };
            doc.tlinks.push(l);
        }
    }
}

/// Cross-document event coreference: each set lists `(doc_id, eiid)`
/// mentions of one event.
pub type CorefPartition = Vec<Vec<(String, String)>>;

/// Whether a CLINK may seed propagation: annotated and rule links always,
/// classifier links above the threshold, propagated links never.
fn eligible(c: &CLink, threshold: f64) -> bool {
    match c.provenance {
        Provenance::Annotated | Provenance::Rule => true,
        Provenance::Propagated => false,
        _ => c.confidence.is_some_and(|x| x > threshold),
    }
}

/// Copies eligible CLINKs onto coreferent event pairs in the other
/// documents of the cluster. Pairs already joined by a CLINK are left
/// alone. Returns the new links per document index; the documents are
/// updated in place.
pub fn propagate_clinks(cluster: &mut [Document], coref: &CorefPartition, threshold: f64) -> Vec<Vec<CLink>> {
    let mates = |doc: &str, eiid: &str| -> Vec<(String, String)> {
        coref
            .iter()
            .filter(|set| set.iter().any(|(d, e)| d == doc && e == eiid))
            .flat_map(|set| set.iter().filter(|(d, _)| d != doc).cloned())
            .collect()
    };
    let seeds: Vec<(String, String, String)> = cluster
        .iter()
        .flat_map(|d| {
            d.clinks
                .iter()
                .filter(|c| eligible(c, threshold))
                .map(|c| (d.doc_id.clone(), c.source.clone(), c.target.clone()))
        })
        .collect();
    let mut added: Vec<Vec<CLink>> = vec![Vec::new(); cluster.len()];
    let mut ids: Vec<IdAllocator> = cluster.iter().map(|d| IdAllocator::new(d, "cp")).collect();
    for (doc_id, src, tgt) in seeds {
        let m1 = mates(&doc_id, &src);
        let m2 = mates(&doc_id, &tgt);
        for (d1, ec1) in &m1 {
            for (d2, ec2) in &m2 {
                if d1 != d2 || ec1 == ec2 {
                    continue;
                }
                let Some(k) = cluster.iter().position(|d| &d.doc_id == d1) else { continue };
                let doc = &mut cluster[k];
                if doc.event(ec1).is_none() || doc.event(ec2).is_none() {
                    continue;
                }
                if doc.clinks.iter().any(|c| c.joins(ec1, ec2)) {
                    continue;
                }
                let c = CLink::new(ids[k].next_id(), ec1, ec2, Provenance::Propagated);
                doc.clinks.push(c.clone());
                added[k].push(c);
            }
        }
    }
    added
}

/// A positive instance found by self-training.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfTrainInstance {
    pub doc_id: String,
    pub pair: EntityPair,
    pub features: Vec<String>,
    pub label: CausalLabel,
    pub confidence: f64,
}

/// One round of self-training: classifies the filtered candidates of each
/// document and keeps CLINK and CLINK-R predictions whose confidence
/// exceeds `threshold` (all positives when `None`).
pub fn self_train(
    model: &CausalClassifier,
    unlabeled: &[AnnotatedDocument],
    lex: &Lexicons,
    threshold: Option<f64>,
) -> Result<Vec<SelfTrainInstance>, FeatureError> {
    let mut out = Vec::new();
    for ad in unlabeled {
        for pair in candidate_pairs(ad, Task::Causal) {
            if !clink_candidate_filter(&pair, ad, lex) {
                continue;
            }
            let tlink = tlink_label(&ad.doc, &pair);
            let features = model.features(&pair, ad, lex, tlink)?;
            let p = model.classifier.predict_raw(&features);
            let label: CausalLabel = p.label.parse().unwrap_or(CausalLabel::NoRel);
            if label == CausalLabel::NoRel || threshold.is_some_and(|t| p.confidence <= t) {
                continue;
            }
            out.push(SelfTrainInstance {
                doc_id: ad.doc.doc_id.clone(),
                pair,
                features,
                label,
                confidence: p.confidence,
            });
        }
    }
    Ok(out)
}

/// Training instances for the CLINK classifier from gold CLINKs: every
/// filtered causal candidate, labeled CLINK, CLINK-R or NO-REL.
pub fn clink_training_data(
    docs: &[AnnotatedDocument],
    lex: &Lexicons,
    with_tlink: bool,
) -> Result<Vec<(Vec<String>, String)>, FeatureError> {
    let mut out = Vec::new();
    for ad in docs {
        for pair in candidate_pairs(ad, Task::Causal) {
            if !clink_candidate_filter(&pair, ad, lex) {
                continue;
            }
            let tlink = tlink_label(&ad.doc, &pair);
            let f = raw_features(&pair, ad, lex, FeatureSet::Causal { tlink, with_tlink })?;
            out.push((f, gold_clink_label(&ad.doc, &pair).as_str().to_string()));
        }
    }
    Ok(out)
}

/// Ids of events joined by a CLINK, for quick membership checks.
pub fn clink_pairs(doc: &Document) -> HashSet<(String, String)> {
    doc.clinks.iter().map(|c| (c.source.clone(), c.target.clone())).collect()
}
