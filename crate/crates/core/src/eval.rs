//! Scorers: closure-based temporal awareness, CLINK precision/recall,
//! TimeBank-Dense style pair scoring, question answering over the temporal
//! closure, and stratified folds.
//!
//! Entities of the system document are matched to the reference by span,
//! so the two may use different ids. The DCTs always match each other.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::allen::{graph_from_document, timegraph_answer, Answer, MappingProfile, TemporalGraph};
use crate::labels::TLinkLabel;
use crate::timeml::{Document, Span};
use crate::timex::{parse_value, IsoValue};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("document `{doc}`: no reference entity at spans {spans:?}")]
    Alignment { doc: String, spans: Vec<(usize, usize)> },
    #[error("need 2 <= k <= {n} folds, got k = {k}")]
    Folds { k: usize, n: usize },
    #[error("question line {line}: {message}")]
    Question { line: usize, message: String },
}

/// Numerators and denominators behind a precision/recall pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub p_num: usize,
    pub p_den: usize,
    pub r_num: usize,
    pub r_den: usize,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.p_num += o.p_num;
        self.p_den += o.p_den;
        self.r_num += o.r_num;
        self.r_den += o.r_den;
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScoreReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: Counts,
    pub per_label: BTreeMap<String, Counts>,
}

impl ScoreReport {
    pub fn from_counts(counts: Counts) -> ScoreReport {
        let precision = ratio(counts.p_num, counts.p_den);
        let recall = ratio(counts.r_num, counts.r_den);
        ScoreReport { precision, recall, f1: f1(precision, recall), counts, per_label: BTreeMap::new() }
    }

    /// Micro-average: sums the counts of all reports.
    pub fn micro<'a>(reports: impl IntoIterator<Item = &'a ScoreReport>) -> ScoreReport {
        let mut c = Counts::default();
        let mut per_label: BTreeMap<String, Counts> = BTreeMap::new();
        for r in reports {
            c += r.counts;
            for (k, v) in &r.per_label {
                *per_label.entry(k.clone()).or_default() += *v;
            }
        }
        ScoreReport { per_label, ..ScoreReport::from_counts(c) }
    }

    /// `key=value` lines for scripts.
    pub fn to_key_values(&self) -> String {
        let c = &self.counts;
        let mut s = format!(
            "precision={:.4}\nrecall={:.4}\nf1={:.4}\np_num={}\np_den={}\nr_num={}\nr_den={}\n",
            self.precision, self.recall, self.f1, c.p_num, c.p_den, c.r_num, c.r_den
        );
        for (k, v) in &self.per_label {
            s.push_str(&format!("label.{k}={}/{}/{}/{}\n", v.p_num, v.p_den, v.r_num, v.r_den));
        }
        s
    }
}

impl fmt::Display for ScoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P={:.4} ({}/{})  R={:.4} ({}/{})  F1={:.4}",
            self.precision,
            self.counts.p_num,
            self.counts.p_den,
            self.recall,
            self.counts.r_num,
            self.counts.r_den,
            self.f1
        )
    }
}

/// Maps system ids to reference ids by span; the DCT maps to the DCT.
pub fn align_ids(sys: &Document, reference: &Document) -> HashMap<String, Option<String>> {
    let mut by_span: HashMap<Span, String> = HashMap::new();
    for e in &reference.events {
        by_span.entry(e.span).or_insert_with(|| e.eiid.clone());
    }
    for t in &reference.timexes {
        if let Some(s) = t.span {
            by_span.entry(s).or_insert_with(|| t.tid.clone());
        }
    }
    let mut out = HashMap::new();
    out.insert(sys.dct.tid.clone(), Some(reference.dct.tid.clone()));
    for e in &sys.events {
        out.insert(e.eiid.clone(), by_span.get(&e.span).cloned());
    }
    for t in &sys.timexes {
        let m = match t.span {
            Some(s) => by_span.get(&s).cloned(),
            None if t.is_creation_time() => Some(reference.dct.tid.clone()),
            None => None,
        };
        out.insert(t.tid.clone(), m);
    }
    out
}

/// The system document with ids rewritten to reference ids. Fails if a
/// linked entity has no reference counterpart.
pub fn normalize_ids(sys: &Document, reference: &Document) -> Result<Document, EvalError> {
    let map = align_ids(sys, reference);
    let mut missing = Vec::new();
    let mut rename = |id: &str| -> String {
        match map.get(id) {
            Some(Some(r)) => r.clone(),
            _ => {
                if let Some(s) = sys.span_of(id) {
                    missing.push((s.start, s.end));
                }
                id.to_string()
            }
        }
    };
    let mut out = reference.clone();
    out.tlinks = sys.tlinks.clone();
    out.clinks = sys.clinks.clone();
    for l in &mut out.tlinks {
        l.source = rename(&l.source);
        l.target = rename(&l.target);
    }
    for c in &mut out.clinks {
        c.source = rename(&c.source);
        c.target = rename(&c.target);
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(EvalError::Alignment { doc: sys.doc_id.clone(), spans: missing });
    }
    Ok(out)
}

/// Canonical reduction and closure of a document's graph. An inconsistent
/// graph falls back to its asserted edges and no propagation.
fn reduced_and_closed(doc: &Document, profile: &MappingProfile) -> (TemporalGraph, TemporalGraph) {
    let g = graph_from_document(doc, profile);
    let pc = g.path_consistency();
    if pc.consistent {
        let reduced = g.canonical_reduction().expect("consistent graph reduces");
        (reduced, pc.closure)
    } else {
        (g.clone(), g)
    }
}

/// Counts reduced edges of `a` whose relation contains the closure of `b`
/// at the same pair.
fn verified(reduced: &TemporalGraph, closure: &TemporalGraph) -> (usize, usize) {
    let mut hit = 0;
    let edges = reduced.asserted_edges();
    for &(i, j) in edges {
        let (a, b) = (&reduced.nodes()[i], &reduced.nodes()[j]);
        let want = reduced.rel(i, j);
        if let Some(have) = closure.relation(a, b) {
            if have.is_subset(want) {
                hit += 1;
            }
        }
    }
    (hit, edges.len())
}

/// Closure-based precision and recall over reduced graphs. Both graphs use
/// the same mapping profile. Reductions are computed from the closures, so
/// link sets with the same closure score the same.
pub fn temporal_awareness(
    sys: &Document,
    reference: &Document,
    profile: &MappingProfile,
) -> Result<ScoreReport, EvalError> {
    let sys = normalize_ids(sys, reference)?;
    let (sys_red, sys_clo) = reduced_and_closed(&sys, profile);
    let (ref_red, ref_clo) = reduced_and_closed(reference, profile);
    let (p_num, p_den) = verified(&sys_red, &ref_clo);
    let (r_num, r_den) = verified(&ref_red, &sys_clo);
    Ok(ScoreReport::from_counts(Counts { p_num, p_den, r_num, r_den }))
}

/// Exact match on directed cause-effect pairs.
pub fn clink_prf(sys: &Document, reference: &Document) -> Result<ScoreReport, EvalError> {
    let sys = normalize_ids(sys, reference)?;
    let key = |d: &Document| -> std::collections::BTreeSet<(String, String)> {
        d.clinks.iter().map(|c| (c.source.clone(), c.target.clone())).collect()
    };
    let s = key(&sys);
    let r = key(reference);
    let tp = s.intersection(&r).count();
    Ok(ScoreReport::from_counts(Counts { p_num: tp, p_den: s.len(), r_num: tp, r_den: r.len() }))
}

/// Label set used by TimeBank-Dense.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DenseLabel {
    Before,
    After,
    Includes,
    IsIncluded,
    Simultaneous,
    Vague,
}

impl DenseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            DenseLabel::Before => "BEFORE",
            DenseLabel::After => "AFTER",
            DenseLabel::Includes => "INCLUDES",
            DenseLabel::IsIncluded => "IS_INCLUDED",
            DenseLabel::Simultaneous => "SIMULTANEOUS",
            DenseLabel::Vague => "VAGUE",
        }
    }

    pub fn inverse(self) -> DenseLabel {
        match self {
            DenseLabel::Before => DenseLabel::After,
            DenseLabel::After => DenseLabel::Before,
            DenseLabel::Includes => DenseLabel::IsIncluded,
            DenseLabel::IsIncluded => DenseLabel::Includes,
            other => other,
        }
    }
}

/// Collapses the 14 TLINK labels onto the dense label set.
pub fn to_dense(label: TLinkLabel) -> DenseLabel {
    use TLinkLabel::*;
    match label {
        Before | IBefore | Begins | EndedBy => DenseLabel::Before,
        After | IAfter | BegunBy | Ends => DenseLabel::After,
        Includes => DenseLabel::Includes,
        IsIncluded => DenseLabel::IsIncluded,
        Simultaneous | Identity | During | DuringInv => DenseLabel::Simultaneous,
    }
}

/// Dense labels for a document's TLINKs, keyed by the pair in id order.
/// Event-DCT links on adjectival events and event-timex links to REF
/// values become VAGUE.
pub fn dense_labels(doc: &Document) -> BTreeMap<(String, String), DenseLabel> {
    let mut out = BTreeMap::new();
    for l in &doc.tlinks {
        let mut d = to_dense(l.rel_type);
        for (e, t) in [(&l.source, &l.target), (&l.target, &l.source)] {
            if let Some(ev) = doc.event(e) {
                if t == &doc.dct.tid && ev.pos == "ADJECTIVE" {
                    d = DenseLabel::Vague;
                }
                if let Some(tx) = doc.timex(t) {
                    if t != &doc.dct.tid && matches!(parse_value(&tx.value), Ok(IsoValue::Ref(_))) {
                        d = DenseLabel::Vague;
                    }
                }
            }
        }
        let key = if l.source <= l.target {
            ((l.source.clone(), l.target.clone()), d)
        } else {
            ((l.target.clone(), l.source.clone()), d.inverse())
        };
        out.entry(key.0).or_insert(key.1);
    }
    out
}

/// Pair-level precision and recall after mapping both sides to dense
/// labels.
pub fn dense_prf(sys: &Document, reference: &Document) -> Result<ScoreReport, EvalError> {
    let sys = normalize_ids(sys, reference)?;
    let s = dense_labels(&sys);
    let r = dense_labels(reference);
    let mut per_label: BTreeMap<String, Counts> = BTreeMap::new();
    let mut tp = 0;
    for (k, v) in &s {
        let hit = r.get(k) == Some(v);
        tp += usize::from(hit);
        let c = per_label.entry(v.as_str().to_string()).or_default();
        c.p_den += 1;
        c.p_num += usize::from(hit);
    }
    for (k, v) in &r {
        let c = per_label.entry(v.as_str().to_string()).or_default();
        c.r_den += 1;
        c.r_num += usize::from(s.get(k) == Some(v));
    }
    let mut rep = ScoreReport::from_counts(Counts { p_num: tp, p_den: s.len(), r_num: tp, r_den: r.len() });
    rep.per_label = per_label;
    Ok(rep)
}

/// A yes/no question about two entities identified by span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Question {
    pub doc_id: String,
    pub e1: Span,
    pub relation: TLinkLabel,
    pub e2: Span,
    pub gold: bool,
}

fn parse_span(s: &str) -> Option<Span> {
    let (a, b) = s.split_once('-')?;
    Some(Span::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Parses a question file: `doc_id, start-end, RELATION, start-end, YES|NO`
/// per tab-separated line; `#` starts a comment.
pub fn parse_questions(text: &str) -> Result<Vec<Question>, EvalError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: &str| EvalError::Question { line: i + 1, message: m.to_string() };
        let c: Vec<&str> = line.split('\t').collect();
        if c.len() != 5 {
            return Err(err("expected 5 tab-separated columns"));
        }
        let gold = match c[4].trim() {
            "YES" | "yes" => true,
            "NO" | "no" => false,
            _ => return Err(err("gold answer must be YES or NO")),
        };
        out.push(Question {
            doc_id: c[0].to_string(),
            e1: parse_span(c[1]).ok_or_else(|| err("bad span for e1"))?,
            relation: c[2].trim().parse().map_err(|_| err("unknown relation"))?,
            e2: parse_span(c[3]).ok_or_else(|| err("bad span for e2"))?,
            gold,
        });
    }
    Ok(out)
}

/// Question-answering scores. P = correct / answered, R = correct /
/// questions, coverage = answered / questions; P is 0 when nothing is
/// answered.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QaReport {
    pub questions: usize,
    pub answered: usize,
    pub correct: usize,
    pub coverage: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Questions whose document or entities could not be resolved.
    pub unresolved: Vec<usize>,
}

impl fmt::Display for QaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "questions={} answered={} correct={} coverage={:.4} P={:.4} R={:.4} F1={:.4}",
            self.questions, self.answered, self.correct, self.coverage, self.precision, self.recall, self.f1
        )
    }
}

fn id_at(doc: &Document, span: Span) -> Option<String> {
    doc.events
        .iter()
        .find(|e| e.span == span)
        .map(|e| e.eiid.clone())
        .or_else(|| doc.timexes.iter().find(|t| t.span == Some(span)).map(|t| t.tid.clone()))
}

/// Answers each question from the closure of its document's TLINKs.
pub fn qa_evaluate(docs: &[Document], questions: &[Question], semantics: &MappingProfile) -> QaReport {
    let mut closures: HashMap<&str, Option<TemporalGraph>> = HashMap::new();
    let mut rep = QaReport { questions: questions.len(), ..Default::default() };
    for (qi, q) in questions.iter().enumerate() {
        let Some(doc) = docs.iter().find(|d| d.doc_id == q.doc_id) else {
            rep.unresolved.push(qi);
            continue;
        };
        let closure = closures.entry(doc.doc_id.as_str()).or_insert_with(|| {
            let pc = graph_from_document(doc, semantics).path_consistency();
            pc.consistent.then_some(pc.closure)
        });
        let Some(closure) = closure.as_ref() else { continue };
        let (Some(a), Some(b)) = (id_at(doc, q.e1), id_at(doc, q.e2)) else {
            rep.unresolved.push(qi);
            continue;
        };
        match timegraph_answer(closure, &a, q.relation, &b, semantics) {
            Ok(Answer::Yes) => {
                rep.answered += 1;
                rep.correct += usize::from(q.gold);
            }
            Ok(Answer::No) => {
                rep.answered += 1;
                rep.correct += usize::from(!q.gold);
            }
            Ok(Answer::Unknown) => {}
            Err(_) => rep.unresolved.push(qi),
        }
    }
    rep.coverage = ratio(rep.answered, rep.questions);
    rep.precision = ratio(rep.correct, rep.answered);
    rep.recall = ratio(rep.correct, rep.questions);
    rep.f1 = f1(rep.precision, rep.recall);
    rep
}

/// Splits instance indices into `k` folds so that each label's instances
/// are spread as evenly as possible. Labels are visited in first-seen
/// order; within a label instances are shuffled by `seed` and dealt round
/// robin, continuing from where the previous label stopped.
pub fn stratified_folds<L: Eq + std::hash::Hash + Clone>(
    labels: &[L],
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>, EvalError> {
    if k < 2 || k > labels.len() {
        return Err(EvalError::Folds { k, n: labels.len() });
    }
    let mut order: Vec<L> = Vec::new();
    let mut groups: HashMap<L, Vec<usize>> = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if !groups.contains_key(l) {
            order.push(l.clone());
        }
        groups.entry(l.clone()).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for l in &order {
        let mut g = groups.remove(l).expect("group");
        g.shuffle(&mut rng);
        for i in g {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{tok, DocBuilder};
    use crate::timeml::{Aspect, EventClass, Tense, TimexType};
    use TLinkLabel::*;

    fn chain(links: &[(&str, &str, TLinkLabel)]) -> Document {
        let ev = |w: &str, h| tok(w, w, "VBD", h, "X").event(EventClass::Occurrence, Tense::Past, Aspect::None);
        let mut b = DocBuilder::new("d", "2020-01-01");
        b.sentence(vec![ev("a", 0), ev("b", 1), ev("c", 1), ev("d", 1)]);
        for (s, t, l) in links {
            b.tlink(s, t, *l);
        }
        b.parts().0
    }

    #[test]
    fn awareness_identity_is_perfect() {
        let d = chain(&[("ei1", "ei2", Before), ("ei2", "ei3", Before), ("t0", "ei1", Includes)]);
        let r = temporal_awareness(&d, &d, &MappingProfile::strict()).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn implied_links_are_not_penalised() {
        let sys = chain(&[("ei1", "ei2", Before), ("ei2", "ei3", Before), ("ei1", "ei3", Before)]);
        let gold = chain(&[("ei1", "ei2", Before), ("ei2", "ei3", Before)]);
        let r = temporal_awareness(&sys, &gold, &MappingProfile::strict()).unwrap();
        assert_eq!(r.counts, Counts { p_num: 2, p_den: 2, r_num: 2, r_den: 2 });
        let none = chain(&[]);
        let r = temporal_awareness(&none, &gold, &MappingProfile::strict()).unwrap();
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn wrong_and_vaguer_links() {
        let gold = chain(&[("ei1", "ei2", Before)]);
        let wrong = chain(&[("ei1", "ei2", After)]);
        let r = temporal_awareness(&wrong, &gold, &MappingProfile::strict()).unwrap();
        assert_eq!(r.counts, Counts { p_num: 0, p_den: 1, r_num: 0, r_den: 1 });
        // IBEFORE is strictly more specific than BEFORE under the relaxed profile.
        let ib = chain(&[("ei1", "ei2", IBefore)]);
        let r = temporal_awareness(&ib, &gold, &MappingProfile::relaxed()).unwrap();
        assert_eq!(r.counts, Counts { p_num: 0, p_den: 1, r_num: 1, r_den: 1 });
    }

    #[test]
    fn ids_are_matched_by_span() {
        let gold = chain(&[("ei1", "ei2", Before)]);
        let mut sys = gold.clone();
        for e in &mut sys.events {
            e.eiid = format!("x{}", e.eiid);
        }
        for l in &mut sys.tlinks {
            l.source = format!("x{}", l.source);
            l.target = format!("x{}", l.target);
        }
        let r = temporal_awareness(&sys, &gold, &MappingProfile::strict()).unwrap();
        assert_eq!(r.f1, 1.0);
        let mut stray = gold.clone();
        stray.events[0].span = Span::new(900, 901);
        assert!(matches!(normalize_ids(&stray, &gold), Err(EvalError::Alignment { .. })));
    }

    #[test]
    fn clink_direction_matters() {
        let mut gold = chain(&[]);
        gold.clinks.push(crate::timeml::CLink::new("c1", "ei1", "ei2", crate::timeml::Provenance::Annotated));
        let mut sys = gold.clone();
        assert_eq!(clink_prf(&sys, &gold).unwrap().f1, 1.0);
        sys.clinks[0].source = "ei2".into();
        sys.clinks[0].target = "ei1".into();
        assert_eq!(clink_prf(&sys, &gold).unwrap().f1, 0.0);
    }

    #[test]
    fn dense_mapping() {
        assert_eq!(to_dense(IBefore), DenseLabel::Before);
        assert_eq!(to_dense(EndedBy), DenseLabel::Before);
        assert_eq!(to_dense(Ends), DenseLabel::After);
        assert_eq!(to_dense(DuringInv), DenseLabel::Simultaneous);
        assert_eq!(to_dense(Identity), DenseLabel::Simultaneous);
        let mut b = DocBuilder::new("d", "2020-01-01");
        b.sentence(vec![
            tok("happy", "happy", "JJ", 0, "ROOT").event(EventClass::State, Tense::None, Aspect::None),
            tok("ran", "run", "VBD", 1, "X").event(EventClass::Occurrence, Tense::Past, Aspect::None),
            tok("recently", "recently", "RB", 2, "TMP").timex(TimexType::Date, "PAST_REF"),
        ]);
        b.tlink("ei1", "t0", IsIncluded).tlink("ei2", "t1", IsIncluded).tlink("ei2", "t0", Before);
        let d = dense_labels(&b.parts().0);
        assert_eq!(d[&("ei1".into(), "t0".into())], DenseLabel::Vague);
        assert_eq!(d[&("ei2".into(), "t1".into())], DenseLabel::Vague);
        assert_eq!(d[&("ei2".into(), "t0".into())], DenseLabel::Before);
    }

    #[test]
    fn qa_over_closure() {
        let d = chain(&[("ei1", "ei2", Before), ("ei2", "ei3", Before)]);
        let sp = |id: &str| d.span_of(id).unwrap();
        let q = |a, r, b, gold| Question { doc_id: "d".into(), e1: sp(a), relation: r, e2: sp(b), gold };
        let qs = vec![q("ei1", Before, "ei3", true), q("ei3", Before, "ei1", false), q("ei1", Before, "ei4", true)];
        let r = qa_evaluate(std::slice::from_ref(&d), &qs, &MappingProfile::strict());
        assert_eq!((r.questions, r.answered, r.correct), (3, 2, 2));
        assert_eq!(r.precision, 1.0);
        assert!((r.recall - 2.0 / 3.0).abs() < 1e-12);
        let r = qa_evaluate(std::slice::from_ref(&d), &qs[2..], &MappingProfile::strict());
        assert_eq!((r.precision, r.recall, r.coverage), (0.0, 0.0, 0.0));
    }

    #[test]
    fn question_file() {
        let qs = parse_questions("# c\nd\t0-1\tBEFORE\t4-5\tYES\n").unwrap();
        assert_eq!(qs[0].e2, Span::new(4, 5));
        assert!(qs[0].gold);
        assert!(parse_questions("d\t0-1\tBEFORE\t4-5\n").is_err());
        assert!(parse_questions("d\t0-1\tSOON\t4-5\tNO\n").is_err());
    }

    #[test]
    fn folds_are_balanced_and_deterministic() {
        let labels: Vec<u8> = (0..100).map(|i| (i % 10) as u8).collect();
        let f = stratified_folds(&labels, 10, 7).unwrap();
        for fold in &f {
            assert_eq!(fold.len(), 10);
            for l in 0..10u8 {
                assert_eq!(fold.iter().filter(|&&i| labels[i] == l).count(), 1);
            }
        }
        assert_eq!(f, stratified_folds(&labels, 10, 7).unwrap());
        let small = stratified_folds(&["x", "x", "x"], 2, 0).unwrap();
        let mut sizes: Vec<usize> = small.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        assert!(stratified_folds(&[1, 2], 3, 0).is_err());
        assert!(stratified_folds(&[1, 2], 1, 0).is_err());
    }
}
