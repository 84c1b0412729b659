//! Programmatic construction of annotated documents, used by tests, the
//! synthetic corpus generator and benchmarks.
//!
//! Tokens are joined with single spaces and sentences with newlines. Ids are
//! assigned in text order: events `e1`/`ei1`, timexes `t1`, signals `s1`,
//! causal signals `c1`; the DCT is `t0`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annotation::{attach_annotations, AnnotatedDocument, AnnotationLayer, SimilarityTable, Token};
use crate::labels::TLinkLabel;
use crate::timeml::{
    Aspect, CLink, CausalSignal, Document, EventClass, EventInstance, Provenance, Signal, Span, TLink, Tense, Timex,
    TimexType,
};

#[derive(Clone, Debug)]
enum Mark {
    Event { class: EventClass, tense: Tense, aspect: Aspect },
    Timex { ty: TimexType, value: String },
    Signal,
    CausalSignal,
}

/// One token of a sentence under construction.
#[derive(Clone, Debug)]
pub struct Tok {
    form: String,
    lemma: String,
    pos: String,
    head: usize,
    deprel: String,
    main: bool,
    mark: Option<Mark>,
    width: usize,
}

/// A token with its 1-based head inside the sentence (0 for the root).
pub fn tok(form: &str, lemma: &str, pos: &str, head: usize, deprel: &str) -> Tok {
    Tok {
        form: form.into(),
        lemma: lemma.into(),
        pos: pos.into(),
        head,
        deprel: deprel.into(),
        main: false,
        mark: None,
        width: 1,
    }
}

impl Tok {
    pub fn main(mut self) -> Tok {
        self.main = true;
        self
    }

    pub fn event(mut self, class: EventClass, tense: Tense, aspect: Aspect) -> Tok {
        self.mark = Some(Mark::Event { class, tense, aspect });
        self
    }

    pub fn timex(mut self, ty: TimexType, value: &str) -> Tok {
        self.mark = Some(Mark::Timex { ty, value: value.into() });
        self
    }

    pub fn signal(mut self) -> Tok {
        self.mark = Some(Mark::Signal);
        self
    }

    pub fn csignal(mut self) -> Tok {
        self.mark = Some(Mark::CausalSignal);
        self
    }

    /// Makes the entity on this token cover `n` tokens starting here.
    pub fn width(mut self, n: usize) -> Tok {
        self.width = n.max(1);
        self
    }
}

fn event_pos(tag: &str) -> &'static str {
    if tag.starts_with("VB") {
        "VERB"
    } else if tag.starts_with("NN") {
        "NOUN"
    } else if tag.starts_with("JJ") {
        "ADJECTIVE"
    } else if tag.starts_with("IN") {
        "PREPOSITION"
    } else {
        "OTHER"
    }
}

#[derive(Clone, Debug)]
pub struct DocBuilder {
    doc_id: String,
    dct: String,
    sentences: Vec<Vec<Tok>>,
    coref: Vec<Vec<String>>,
    tlinks: Vec<(String, String, TLinkLabel)>,
    clinks: Vec<(String, String)>,
    similarity: Option<SimilarityTable>,
}

impl DocBuilder {
    pub fn new(doc_id: &str, dct_value: &str) -> DocBuilder {
        DocBuilder {
            doc_id: doc_id.into(),
            dct: dct_value.into(),
            sentences: Vec::new(),
            coref: Vec::new(),
            tlinks: Vec::new(),
            clinks: Vec::new(),
            similarity: None,
        }
    }

    pub fn sentence(&mut self, toks: Vec<Tok>) -> &mut DocBuilder {
        self.sentences.push(toks);
        self
    }

    pub fn coref(&mut self, ids: &[&str]) -> &mut DocBuilder {
        self.coref.push(ids.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn tlink(&mut self, source: &str, target: &str, label: TLinkLabel) -> &mut DocBuilder {
        self.tlinks.push((source.into(), target.into(), label));
        self
    }

    /// Causal link from cause to effect.
    pub fn clink(&mut self, source: &str, target: &str) -> &mut DocBuilder {
        self.clinks.push((source.into(), target.into()));
        self
    }

    pub fn similar(&mut self, a: &str, b: &str, score: f64) -> &mut DocBuilder {
        self.similarity.get_or_insert_with(SimilarityTable::new).insert(a, b, score);
        self
    }

    /// The document and its annotation layer, not yet aligned.
    pub fn parts(&self) -> (Document, AnnotationLayer) {
        let mut doc = Document::empty(&self.doc_id, &self.dct);
        let mut layer = AnnotationLayer::default();
        let mut offsets: Vec<Span> = Vec::new();
        let mut marks: Vec<(usize, &Tok)> = Vec::new();
        for (si, sent) in self.sentences.iter().enumerate() {
            if si > 0 {
                doc.text.push('\n');
            }
            let base = layer.tokens.len();
            for (i, t) in sent.iter().enumerate() {
                if i > 0 {
                    doc.text.push(' ');
                }
                let start = doc.text.len();
                doc.text.push_str(&t.form);
                offsets.push(Span::new(start, doc.text.len()));
                layer.tokens.push(Token {
                    form: t.form.clone(),
                    lemma: t.lemma.clone(),
                    pos: t.pos.clone(),
                    chunk: String::new(),
                    head: if t.head == 0 { None } else { Some(base + t.head - 1) },
                    deprel: t.deprel.clone(),
                    main_verb: t.main,
                    supersense: None,
                    sentence: si,
                });
                if t.mark.is_some() {
                    marks.push((base + i, t));
                }
            }
            layer.sentences.push(base..layer.tokens.len());
        }
        let (mut ne, mut nt, mut ns, mut nc) = (0, 0, 0, 0);
        for (i, t) in marks {
            let last = (i + t.width - 1).min(offsets.len() - 1);
            let span = Span::new(offsets[i].start, offsets[last].end);
            match t.mark.as_ref().expect("marked") {
                Mark::Event { class, tense, aspect } => {
                    ne += 1;
                    doc.events.push(EventInstance {
                        eiid: format!("ei{ne}"),
                        eid: format!("e{ne}"),
                        span,
                        class: *class,
                        tense: *tense,
                        aspect: *aspect,
                        pos: event_pos(&t.pos).into(),
                        polarity: "POS".into(),
                        modality: None,
                        event_attrs: Vec::new(),
                        instance_attrs: Vec::new(),
                    });
                }
                Mark::Timex { ty, value } => {
                    nt += 1;
                    doc.timexes.push(Timex {
                        tid: format!("t{nt}"),
                        span: Some(span),
                        timex_type: *ty,
                        value: value.clone(),
                        function_in_document: "NONE".into(),
                        anchor_time_id: None,
                        temporal_function: None,
                        extra_attrs: Vec::new(),
                    });
                }
                Mark::Signal => {
                    ns += 1;
                    doc.signals.push(Signal { sid: format!("s{ns}"), span });
                }
                Mark::CausalSignal => {
                    nc += 1;
                    doc.csignals.push(CausalSignal { id: format!("c{nc}"), span });
                }
            }
        }
        for (k, (a, b, l)) in self.tlinks.iter().enumerate() {
            doc.tlinks.push(TLink::new(format!("l{}", k + 1), a, b, *l, Provenance::Annotated));
        }
        for (k, (a, b)) in self.clinks.iter().enumerate() {
            doc.clinks.push(CLink::new(format!("cl{}", k + 1), a, b, Provenance::Annotated));
        }
        layer.coref = self.coref.clone();
        layer.similarity = self.similarity.clone();
        (doc, layer)
    }

    /// Builds and aligns the document.
    ///
    /// # Panics
    /// If the builder produced an inconsistent document, which indicates a
    /// bug in the caller's head indices or link ids.
    pub fn build(&self) -> AnnotatedDocument {
        let (doc, layer) = self.parts();
        doc.validate().expect("builder document is valid");
        attach_annotations(doc, layer).expect("builder layer aligns")
    }
}

const SUBJECTS: &[&str] = &["Officials", "Workers", "Traders", "Residents", "Pilots", "Farmers"];
const PAST_VERBS: &[(&str, &str)] =
    &[("stopped", "stop"), ("left", "leave"), ("protested", "protest"), ("waited", "wait"), ("moved", "move")];
const CAUSES: &[&str] = &["storm", "strike", "flood", "crash", "shortage", "fire"];
const REPORTED: &[(&str, &str)] =
    &[("rose", "rise"), ("fell", "fall"), ("collapsed", "collapse"), ("recovered", "recover")];
const BASE_VERBS: &[(&str, &str)] = &[("visit", "visit"), ("vote", "vote"), ("return", "return"), ("sign", "sign")];
const ING_VERBS: &[(&str, &str)] = &[("talking", "talk"), ("working", "work"), ("negotiating", "negotiate")];
const DAYS: &[(&str, i64)] = &[("Monday", 5), ("Tuesday", 4), ("Wednesday", 3), ("Thursday", 2)];

/// Where a main event sits relative to the DCT. Dated events carry how many
/// days before the DCT their day is.
#[derive(Clone, Copy, PartialEq)]
enum Phase {
    Past,
    PastOn(i64),
    PastBefore,
    Present,
    Future,
}

impl Phase {
    fn is_past(self) -> bool {
        matches!(self, Phase::Past | Phase::PastOn(_) | Phase::PastBefore)
    }
}

/// Label linking consecutive main events, when one follows from their
/// phases. Dated and undated past events are left unlinked so that no chain
/// of links can contradict a date.
fn main_link(prev: Phase, cur: Phase) -> Option<TLinkLabel> {
    use Phase::*;
    match (prev, cur) {
        (Past, Past) | (Future, Future) | (Present, Future) => Some(TLinkLabel::Before),
        (PastOn(a), PastOn(b)) if a != b => Some(if a > b { TLinkLabel::Before } else { TLinkLabel::After }),
        (p, Present | Future) if p.is_past() => Some(TLinkLabel::Before),
        (Present | Future, c) if c.is_past() => Some(TLinkLabel::After),
        (Future, Present) => Some(TLinkLabel::After),
        _ => None,
    }
}

/// Generator state for one synthetic document: the builder plus the next
/// event and timex numbers.
struct Gen<'r> {
    b: DocBuilder,
    ev: usize,
    tx: usize,
    mains: Vec<(String, Phase)>,
    rng: &'r mut ChaCha8Rng,
    dct: chrono::NaiveDate,
}

impl Gen<'_> {
    fn event(&mut self) -> String {
        self.ev += 1;
        format!("ei{}", self.ev)
    }

    fn timex(&mut self) -> String {
        self.tx += 1;
        format!("t{}", self.tx)
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        *xs.choose(self.rng).expect("non-empty")
    }

    fn sentence(&mut self, toks: Vec<Tok>, main: String, phase: Phase) {
        if let Some((prev, prev_phase)) = self.mains.last().cloned() {
            if let Some(label) = main_link(prev_phase, phase) {
                self.b.tlink(&prev, &main, label);
            }
        }
        self.mains.push((main, phase));
        self.b.sentence(toks);
    }

    /// `Workers stopped because of the storm .` The cause usually carries a
    /// gold CLINK; some sentences leave it unannotated.
    fn because(&mut self) {
        let (occ, none) = (EventClass::Occurrence, Tense::None);
        let subj = self.pick(SUBJECTS);
        let (v, vl) = self.pick(PAST_VERBS);
        let cause = self.pick(CAUSES);
        let (e1, e2) = (self.event(), self.event());
        let toks = vec![
            tok(subj, &subj.to_lowercase(), "NNS", 2, "SBJ"),
            tok(v, vl, "VBD", 0, "ROOT").main().event(occ, Tense::Past, Aspect::None),
            tok("because", "because", "IN", 2, "PRP").csignal(),
            tok("of", "of", "IN", 3, "PMOD"),
            tok("the", "the", "DT", 6, "NMOD"),
            tok(cause, cause, "NN", 4, "PMOD").event(occ, none, Aspect::None),
            tok(".", ".", ".", 2, "P"),
        ];
        self.b.tlink(&e1, "t0", TLinkLabel::Before).tlink(&e1, &e2, TLinkLabel::After);
        if self.rng.gen_bool(0.8) {
            self.b.clink(&e2, &e1);
        }
        self.sentence(toks, e1, Phase::Past);
    }

    /// `The storm caused the flood .`
    fn caused(&mut self) {
        let occ = EventClass::Occurrence;
        let a = self.pick(CAUSES);
        let mut b = self.pick(CAUSES);
        if a == b {
            b = "delay";
        }
        let (e1, e2) = (self.event(), self.event());
        let toks = vec![
            tok("The", "the", "DT", 2, "NMOD"),
            tok(a, a, "NN", 3, "SBJ").event(occ, Tense::None, Aspect::None),
            tok("caused", "cause", "VBD", 0, "ROOT"),
            tok("the", "the", "DT", 5, "NMOD"),
            tok(b, b, "NN", 3, "OBJ").event(occ, Tense::None, Aspect::None),
            tok(".", ".", ".", 3, "P"),
        ];
        self.b.tlink(&e1, &e2, TLinkLabel::Before).clink(&e1, &e2);
        self.sentence(toks, e1, Phase::Past);
    }

    /// `Pilots left on Monday .` or `... before Monday .`
    fn dated(&mut self) {
        let subj = self.pick(SUBJECTS);
        let (v, vl) = self.pick(PAST_VERBS);
        let (day, back) = self.pick(DAYS);
        let date = (self.dct - chrono::Duration::days(back)).format("%Y-%m-%d").to_string();
        let before = self.rng.gen_bool(0.4);
        let prep = if before { "before" } else { "on" };
        let e = self.event();
        let t = self.timex();
        let toks = vec![
            tok(subj, &subj.to_lowercase(), "NNS", 2, "SBJ"),
            tok(v, vl, "VBD", 0, "ROOT").main().event(EventClass::Occurrence, Tense::Past, Aspect::None),
            tok(prep, prep, "IN", 2, "TMP").signal(),
            tok(day, &day.to_lowercase(), "NNP", 3, "PMOD").timex(TimexType::Date, &date),
            tok(".", ".", ".", 2, "P"),
        ];
        let label = if before { TLinkLabel::Before } else { TLinkLabel::IsIncluded };
        self.b.tlink(&e, "t0", TLinkLabel::Before).tlink(&e, &t, label).tlink(&t, "t0", TLinkLabel::Before);
        let phase = if before { Phase::PastBefore } else { Phase::PastOn(back) };
        self.sentence(toks, e, phase);
    }

    /// `Officials said prices rose .`
    fn reported(&mut self) {
        let subj = self.pick(SUBJECTS);
        let (v, vl) = self.pick(REPORTED);
        let (e1, e2) = (self.event(), self.event());
        let toks = vec![
            tok(subj, &subj.to_lowercase(), "NNS", 2, "SBJ"),
            tok("said", "say", "VBD", 0, "ROOT").main().event(EventClass::Reporting, Tense::Past, Aspect::None),
            tok("prices", "price", "NNS", 4, "SBJ"),
            tok(v, vl, "VBD", 2, "OBJ").event(EventClass::Occurrence, Tense::Past, Aspect::None),
            tok(".", ".", ".", 2, "P"),
        ];
        self.b.tlink(&e1, "t0", TLinkLabel::Before).tlink(&e2, "t0", TLinkLabel::Before).tlink(
            &e1,
            &e2,
            TLinkLabel::After,
        );
        self.sentence(toks, e1, Phase::Past);
    }

    /// `Farmers will vote tomorrow .`
    fn future(&mut self) {
        let subj = self.pick(SUBJECTS);
        let (v, vl) = self.pick(BASE_VERBS);
        let date = (self.dct + chrono::Duration::days(1)).format("%Y-%m-%d").to_string();
        let e = self.event();
        let t = self.timex();
        let toks = vec![
            tok(subj, &subj.to_lowercase(), "NNS", 2, "SBJ"),
            tok("will", "will", "MD", 0, "ROOT"),
            tok(v, vl, "VB", 2, "VC").main().event(EventClass::Occurrence, Tense::Future, Aspect::None),
            tok("tomorrow", "tomorrow", "NN", 3, "TMP").timex(TimexType::Date, &date),
            tok(".", ".", ".", 2, "P"),
        ];
        self.b.tlink(&e, "t0", TLinkLabel::After).tlink(&e, &t, TLinkLabel::IsIncluded).tlink(
            &t,
            "t0",
            TLinkLabel::After,
        );
        self.sentence(toks, e, Phase::Future);
    }

    /// `Traders are negotiating .`
    fn ongoing(&mut self) {
        let subj = self.pick(SUBJECTS);
        let (v, vl) = self.pick(ING_VERBS);
        let e = self.event();
        let toks = vec![
            tok(subj, &subj.to_lowercase(), "NNS", 2, "SBJ"),
            tok("are", "be", "VBP", 0, "ROOT"),
            tok(v, vl, "VBG", 2, "VC").main().event(EventClass::Occurrence, Tense::Present, Aspect::Progressive),
            tok(".", ".", ".", 2, "P"),
        ];
        self.b.tlink(&e, "t0", TLinkLabel::Includes);
        self.sentence(toks, e, Phase::Present);
    }
}

/// A deterministic corpus of small news-like documents with gold TLINKs
/// and CLINKs, for tests and benchmarks. Every document mixes causal,
/// dated, reported, future and ongoing sentences.
pub fn synthetic_corpus(n_docs: usize, seed: u64) -> Vec<AnnotatedDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = chrono::NaiveDate::from_ymd_opt(2015, 1, 5).expect("valid date");
    (0..n_docs)
        .map(|d| {
            let dct = start + chrono::Duration::days(7 * d as i64);
            let dct_s = dct.format("%Y-%m-%d").to_string();
            let mut g = Gen {
                b: DocBuilder::new(&format!("synth_{d:03}"), &dct_s),
                ev: 0,
                tx: 0,
                mains: Vec::new(),
                rng: &mut rng,
                dct,
            };
            g.because();
            let n = g.rng.gen_range(3..7);
            for _ in 0..n {
                match g.rng.gen_range(0..6) {
                    0 => g.because(),
                    1 => g.caused(),
                    2 => g.dated(),
                    3 => g.reported(),
                    4 => g.future(),
                    _ => g.ongoing(),
                }
            }
            g.dated();
            g.b.build()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_corpus_is_deterministic_and_valid() {
        let a = synthetic_corpus(5, 3);
        let b = synthetic_corpus(5, 3);
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.doc, y.doc);
            assert!(!x.doc.clinks.is_empty() || x.doc.events.len() > 2);
        }
        assert_ne!(synthetic_corpus(5, 4)[0].doc, a[0].doc);
    }

    #[test]
    fn gold_links_are_consistent() {
        let strict = [crate::allen::MappingProfile::strict()];
        for ad in synthetic_corpus(60, 9) {
            let report = crate::allen::check_document(&ad.doc, &strict);
            assert!(report.consistent, "{} {:?}", ad.doc.doc_id, report.culprit);
        }
    }
}
