//! Acceptance suite. Prints one line per criterion and exits non-zero when
//! any criterion fails. Run with `cargo test -p chronorel --test acceptance`.
//!
//! Criterion 7 needs the Causal-TimeBank corpus, which is not shipped. Point
//! `CHRONOREL_CAUSAL_TIMEBANK` at a directory of `.tml` files (with `.conll`
//! sidecars for the CLINK checks) to enable it.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use chronorel::allen::{check_document, deduce, fallback_chain, predict_deducible, RegressionCoefficients};
use chronorel::annotation::attach_annotations;
use chronorel::causal::{add_clinks, causal_verb_rule, clink_training_data, post_edit_tlinks, CausalDecision};
use chronorel::corpus::{load_corpus, load_file};
use chronorel::eval::{qa_evaluate, stratified_folds, temporal_awareness, Question};
use chronorel::features::FeatureVector;
use chronorel::linear::{train, Classifier, Hyperparameters};
use chronorel::pairs::{candidate_pairs, Task};
use chronorel::pipeline::train_pipeline;
use chronorel::rules::{apply_rule_sieve, ed_rule, ee_rule, et_rule};
use chronorel::synth::{synthetic_corpus, tok, DocBuilder};
use chronorel::timeml::{Aspect, EventClass, Tense, Timex, TimexType};
use chronorel::timex::tt_rule;
use chronorel::{
    annotate, parse_timeml, serialize_timeml, BaseRelation, CausalLabel, Document, EntityPair, Lexicons,
    MappingProfile, PairKind, PipelineConfig, Provenance, RelationSet, TLink, TLinkLabel,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

fn allen_algebra() -> Outcome {
    let oracle = common::oracle_composition();
    let mut cells = 0;
    for a in BaseRelation::ALL {
        for b in BaseRelation::ALL {
            let got = RelationSet::single(a).compose(RelationSet::single(b));
            check(got == oracle[a as usize][b as usize], format!("{} ∘ {}: {got} vs oracle", a.symbol(), b.symbol()))?;
            cells += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let r = RelationSet::from_bits(rng.gen_range(0..=0x1fff));
        let s = RelationSet::from_bits(rng.gen_range(0..=0x1fff));
        check(r.converse().converse() == r, format!("converse involution fails on {r}"))?;
        check(
            r.compose(s).converse() == s.converse().compose(r.converse()),
            format!("converse-composition identity fails on {r}, {s}"),
        )?;
    }
    Ok(format!("{cells} table cells, 1000 random sets"))
}

fn reasoning_examples() -> Outcome {
    let chain = fallback_chain(&MappingProfile::strict(), &[]).map_err(|e| e.to_string())?;
    let tri = load_file(&fixture("reason/albright_inconsistent.tml")).map_err(|e| e.to_string())?.doc;
    let report = check_document(&tri, &chain);
    check(!report.consistent, "triangle judged consistent")?;
    let culprit = report.culprit.ok_or("no culprit reported")?;
    let mut ids = [culprit.0.clone(), culprit.1.clone(), culprit.2.clone()];
    ids.sort();
    check(ids == ["ei116", "ei45", "ei46"], format!("culprit {ids:?}"))?;

    let doc = load_file(&fixture("reason/albright_chain.tml")).map_err(|e| e.to_string())?.doc;
    let deduced = deduce(&doc, &MappingProfile::strict()).map_err(|e| e.to_string())?;
    check(
        deduced.iter().any(|l| l.label_between("ei45", "ei47") == Some(TLinkLabel::Before) && l.deduced()),
        "BEFORE(ei45, ei47) not deduced",
    )?;
    Ok(format!("culprit {{{}}}, {} deduced link", ids.join(","), deduced.len()))
}

fn timex(ty: TimexType, value: &str) -> Timex {
    Timex {
        timex_type: ty,
        value: value.into(),
        function_in_document: "NONE".into(),
        ..Document::empty("d", value).dct
    }
}

fn occ(tense: Tense) -> (EventClass, Tense, Aspect) {
    (EventClass::Occurrence, tense, Aspect::None)
}

fn rule_fixtures() -> Outcome {
    use TLinkLabel::*;
    let lex = Lexicons::bundled();
    let mut results: Vec<(&str, bool)> = Vec::new();
    let et_pair = |e: &str, t: &str| EntityPair::new(PairKind::ET, e, t, true);
    let ee_pair = |a: &str, b: &str| EntityPair::new(PairKind::EE, a, b, true);

    results.push((
        "evening falls inside its day",
        tt_rule(&timex(TimexType::Time, "2015-12-12T19:00"), &timex(TimexType::Date, "2015-12-12")) == Some(IsIncluded),
    ));

    let single = |tense, aspect| {
        DocBuilder::new("d", "2015-12-12")
            .sentence(vec![tok("x", "x", "VBD", 0, "ROOT").event(EventClass::Occurrence, tense, aspect)])
            .build()
    };
    let past_perf = single(Tense::Past, Aspect::Perfective);
    results.push((
        "past perfective precedes the DCT",
        ed_rule(&past_perf.doc.events[0], &past_perf.doc.dct) == Some(Before),
    ));
    let fut = single(Tense::Future, Aspect::None);
    results.push(("future follows the DCT", ed_rule(&fut.doc.events[0], &fut.doc.dct) == Some(After)));

    let prep = |p: &str| {
        let (c, t, a) = occ(Tense::Past);
        DocBuilder::new("d", "2015-12-12")
            .sentence(vec![
                tok("John", "john", "NNP", 2, "SBJ"),
                tok("arrived", "arrive", "VBD", 0, "ROOT").main().event(c, t, a),
                tok(p, p, "IN", 2, "TMP"),
                tok("Tuesday", "tuesday", "NNP", 3, "PMOD").timex(TimexType::Date, "2015-12-08"),
            ])
            .build()
    };
    let on = prep("on");
    let sieve = apply_rule_sieve(&on, &candidate_pairs(&on, Task::Temporal), &lex);
    results.push(("arrived on Tuesday", sieve.iter().any(|r| r.pair.kind == PairKind::ET && r.label == IsIncluded)));
    results.push(("until closes the event", et_rule(&et_pair("ei1", "t1"), &prep("until"), &lex) == Some(EndedBy)));

    let (c, t, a) = occ(Tense::Past);
    let from_to = DocBuilder::new("d", "2015-12-12")
        .sentence(vec![
            tok("Prices", "price", "NNS", 2, "SBJ"),
            tok("rose", "rise", "VBD", 0, "ROOT").event(c, t, a),
            tok("from", "from", "IN", 2, "TMP"),
            tok("May", "may", "NNP", 3, "PMOD").timex(TimexType::Date, "2015-05"),
            tok("to", "to", "TO", 2, "TMP"),
            tok("June", "june", "NNP", 5, "PMOD").timex(TimexType::Date, "2015-06"),
        ])
        .build();
    results.push(("from opens the range", et_rule(&et_pair("ei1", "t1"), &from_to, &lex) == Some(BegunBy)));

    let touched = DocBuilder::new("d", "2015-12-12")
        .sentence(vec![
            tok("reaction", "reaction", "NN", 2, "SBJ"),
            tok("touched", "touch", "VBD", 0, "ROOT").event(c, t, a),
            tok("off", "off", "RP", 2, "PRT"),
            tok("by", "by", "IN", 2, "LGS"),
            tok("the", "the", "DT", 6, "NMOD"),
            tok("collapse", "collapse", "NN", 4, "PMOD").event(c, Tense::None, a),
        ])
        .build();
    results.push(("touched off by the collapse", ee_rule(&ee_pair("ei1", "ei2"), &touched, &lex) == Some(After)));

    let began = DocBuilder::new("d", "2015-12-12")
        .sentence(vec![
            tok("It", "it", "PRP", 2, "SBJ"),
            tok("began", "begin", "VBD", 0, "ROOT").event(EventClass::Aspectual, Tense::Past, Aspect::None),
            tok("to", "to", "TO", 2, "OPRD"),
            tok("relax", "relax", "VB", 3, "IM").event(EventClass::Occurrence, Tense::Infinitive, Aspect::None),
        ])
        .build();
    results.push(("began to relax", ee_rule(&ee_pair("ei1", "ei2"), &began, &lex) == Some(Begins)));

    let mut b = DocBuilder::new("d", "2015-12-12");
    b.sentence(vec![tok("attack", "attack", "NN", 0, "ROOT").main().event(c, t, a)])
        .sentence(vec![tok("strike", "strike", "NN", 0, "ROOT").main().event(c, t, a)])
        .coref(&["ei1", "ei2"]);
    let coref = b.build();
    results.push((
        "coreferent mentions coincide",
        ee_rule(&EntityPair::new(PairKind::EE, "ei1", "ei2", false), &coref, &lex) == Some(Simultaneous),
    ));

    let (c, t, a) = occ(Tense::None);
    let blast = DocBuilder::new("d", "2015-12-12")
        .sentence(vec![
            tok("The", "the", "DT", 2, "NMOD"),
            tok("blast", "blast", "NN", 3, "SBJ").event(c, t, a),
            tok("caused", "cause", "VBD", 0, "ROOT"),
            tok("the", "the", "DT", 5, "NMOD"),
            tok("boat", "boat", "NN", 3, "OBJ"),
            tok("to", "to", "TO", 3, "OPRD"),
            tok("heel", "heel", "VB", 6, "IM").event(c, Tense::Infinitive, a),
        ])
        .build();
    results.push((
        "blast caused the boat to heel",
        causal_verb_rule(&ee_pair("ei1", "ei2"), &blast, &lex) == Some(CausalLabel::Clink),
    ));

    let triggered = DocBuilder::new("d", "2015-12-12")
        .sentence(vec![
            tok("the", "the", "DT", 2, "NMOD"),
            tok("crisis", "crisis", "NN", 0, "ROOT").event(c, t, a),
            tok("triggered", "trigger", "VBN", 2, "APPO"),
            tok("by", "by", "IN", 3, "LGS"),
            tok("the", "the", "DT", 6, "NMOD"),
            tok("end", "end", "NN", 4, "PMOD").event(c, t, a),
        ])
        .build();
    results.push((
        "crisis triggered by the end",
        causal_verb_rule(&ee_pair("ei1", "ei2"), &triggered, &lex) == Some(CausalLabel::ClinkR),
    ));

    let made = DocBuilder::new("d", "2015-12-12")
        .sentence(vec![
            tok("The", "the", "DT", 2, "NMOD"),
            tok("storm", "storm", "NN", 3, "SBJ").event(c, t, a),
            tok("made", "make", "VBD", 0, "ROOT"),
            tok("a", "a", "DT", 5, "NMOD"),
            tok("mess", "mess", "NN", 3, "OBJ").event(c, t, a),
        ])
        .build();
    results.push((
        "make with a plain object is not causal",
        causal_verb_rule(&ee_pair("ei1", "ei2"), &made, &lex).is_none(),
    ));

    let two = |link: Option<TLinkLabel>| {
        let mut b = DocBuilder::new("d", "2015-12-12");
        b.sentence(vec![tok("x", "x", "NN", 0, "ROOT").event(c, t, a), tok("y", "y", "NN", 1, "DEP").event(c, t, a)]);
        if let Some(l) = link {
            b.tlink("ei1", "ei2", l);
        }
        b.build().doc
    };
    let mut after = two(Some(After));
    after.clinks.push(chronorel::CLink::new("c1", "ei1", "ei2", Provenance::Annotated));
    post_edit_tlinks(&mut after);
    results.push(("cause labeled AFTER its effect is flipped", after.tlinks[0].rel_type == Before));

    let mut rev = two(None);
    let decision = CausalDecision {
        pair: ee_pair("ei1", "ei2"),
        label: CausalLabel::ClinkR,
        provenance: Provenance::Rule,
        confidence: None,
    };
    add_clinks(&mut rev, &[decision]);
    post_edit_tlinks(&mut rev);
    results.push((
        "reverse causal link orders its pair AFTER",
        rev.tlinks.iter().any(|l| l.label_between("ei1", "ei2") == Some(After)),
    ));

    let failed: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    check(results.len() == 14, format!("{} fixtures, expected 14", results.len()))?;
    check(failed.is_empty(), format!("failed: {}", failed.join("; ")))?;
    Ok(format!("{}/{} fixtures", results.len(), results.len()))
}

fn closure_matrix(doc: &Document, profile: &MappingProfile) -> Vec<u16> {
    let g = chronorel::allen::graph_from_document(doc, profile);
    let c = g.path_consistency().closure;
    let n = c.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| c.rel(i, j).bits()).collect()
}

fn renumber(links: &mut [TLink]) {
    for (i, l) in links.iter_mut().enumerate() {
        l.lid = format!("l{}", i + 1);
    }
}

/// Same closure as `doc`, written differently: deduced links are added,
/// links are flipped at random, and links entailed by the rest are dropped.
fn closure_equivalent<R: Rng>(doc: &Document, rng: &mut R, profile: &MappingProfile) -> Document {
    let target = closure_matrix(doc, profile);
    let mut out = doc.clone();
    out.tlinks.extend(deduce(doc, profile).expect("consistent by construction"));
    for l in out.tlinks.iter_mut() {
        l.provenance = Provenance::Annotated;
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut l.source, &mut l.target);
            l.rel_type = l.rel_type.inverse();
        }
    }
    out.tlinks.shuffle(rng);
    let mut i = 0;
    while i < out.tlinks.len() {
        if rng.gen_bool(0.5) {
            let removed = out.tlinks.remove(i);
            if closure_matrix(&out, profile) != target {
                out.tlinks.insert(i, removed);
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    renumber(&mut out.tlinks);
    assert_eq!(closure_matrix(&out, profile), target);
    out
}

fn metric_properties() -> Outcome {
    let strict = MappingProfile::strict();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..50 {
        let n = rng.gen_range(3..10);
        let x = common::random_consistent_doc(&mut rng, n, n + 3);
        let s = temporal_awareness(&x, &x, &strict).map_err(|e| e.to_string())?;
        check(s.precision == 1.0 && s.recall == 1.0 && s.f1 == 1.0, format!("self-score {s} on graph {k}"))?;
    }
    let mut rewrites = 0;
    for k in 0..50 {
        let n = rng.gen_range(3..10);
        let x = common::random_consistent_doc(&mut rng, n, n + 3);
        let r = common::random_consistent_doc(&mut rng, n, n + 2);
        let y = closure_equivalent(&x, &mut rng, &strict);
        rewrites += usize::from(y.tlinks != x.tlinks);
        let sx = temporal_awareness(&x, &r, &strict).map_err(|e| e.to_string())?;
        let sy = temporal_awareness(&y, &r, &strict).map_err(|e| e.to_string())?;
        check(sx == sy, format!("case {k}: system rewrite changed {sx} to {sy}"))?;
        let rx = temporal_awareness(&r, &x, &strict).map_err(|e| e.to_string())?;
        let ry = temporal_awareness(&r, &y, &strict).map_err(|e| e.to_string())?;
        check(rx == ry, format!("case {k}: reference rewrite changed {rx} to {ry}"))?;
    }

    use TLinkLabel::*;
    let doc = common::event_doc(
        &["a", "b", "c", "d", "e"],
        &[("ei1", "ei2", Before), ("ei2", "ei3", Before), ("ei3", "ei4", Includes), ("ei1", "ei5", Before)],
    );
    let span = |id: &str| doc.event(id).unwrap().span;
    let q = |e1: &str, relation, e2: &str, gold| Question {
        doc_id: doc.doc_id.clone(),
        e1: span(e1),
        relation,
        e2: span(e2),
        gold,
    };
    let questions = vec![
        q("ei1", Before, "ei3", true),
        q("ei1", After, "ei3", false),
        q("ei3", After, "ei1", true),
        q("ei1", Before, "ei4", true),
        q("ei2", Before, "ei5", true),
    ];
    let rep = qa_evaluate(std::slice::from_ref(&doc), &questions, &strict);
    check(rep.answered == 4 && rep.correct == 4 && rep.unresolved.is_empty(), format!("chain QA: {rep}"))?;
    Ok(format!("50 self-scores, 50 rewrites ({rewrites} differ textually), chain QA {}/{}", rep.correct, rep.questions))
}

fn classifier_contract() -> Outcome {
    let lex = Lexicons::bundled();
    let corpus = synthetic_corpus(10, 5);
    let data =
        chronorel::pipeline::temporal_training_data(&corpus, &lex, PairKind::EE, true).map_err(|e| e.to_string())?;
    let hp = Hyperparameters { seed: 11, ..Default::default() };
    let (a, log_a) = Classifier::fit(&data, hp).map_err(|e| e.to_string())?;
    let (b, _) = Classifier::fit(&data, hp).map_err(|e| e.to_string())?;
    check(a.model.to_text() == b.model.to_text(), "two runs with one seed differ")?;
    check(log_a.is_monotone(), "dual objective decreased on the corpus model")?;

    // Four labels, each owning one indicator feature plus shared noise.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut toy = Vec::new();
    for i in 0..200 {
        let label = i % 4;
        let mut ix = vec![label as u32];
        for noise in 4..12u32 {
            if rng.gen_bool(0.3) {
                ix.push(noise);
            }
        }
        toy.push((FeatureVector::from_indices(ix), format!("L{label}")));
    }
    let (m, log) = train(&toy, 12, Hyperparameters::default()).map_err(|e| e.to_string())?;
    let correct = toy.iter().filter(|(x, y)| m.predict(x).map(|p| &p.label == y).unwrap_or(false)).count();
    check(correct == toy.len(), format!("separable toy: {correct}/{} correct", toy.len()))?;
    check(log.is_monotone(), "dual objective decreased on the toy set")?;
    Ok(format!("{} corpus instances, toy {correct}/{}", data.len(), toy.len()))
}

fn pipeline_invariant() -> Outcome {
    let lex = Lexicons::bundled();
    let cfg = PipelineConfig::default();
    let corpus = synthetic_corpus(20, 6);
    let (bundle, _) = train_pipeline(&corpus, &lex, &cfg, 0).map_err(|e| e.to_string())?;
    let profiles = cfg.resolve_profiles(None).map_err(|e| e.to_string())?;
    let mut clinks = 0;
    for ad in &corpus {
        let out = annotate(ad, &bundle, &lex, &cfg, &profiles).map_err(|e| e.to_string())?;
        for c in &out.doc.clinks {
            clinks += 1;
            let label = out.doc.tlinks.iter().find_map(|l| l.label_between(&c.source, &c.target));
            check(
                label == Some(TLinkLabel::Before),
                format!("{}: CLINK {}->{} has {label:?}", ad.doc.doc_id, c.source, c.target),
            )?;
        }
        let reparsed = parse_timeml(&serialize_timeml(&out.doc)).map_err(|e| e.to_string())?;
        let again_ad = attach_annotations(reparsed, ad.layer.clone()).map_err(|e| e.to_string())?;
        let again = annotate(&again_ad, &bundle, &lex, &cfg, &profiles).map_err(|e| e.to_string())?;
        check(again.doc.tlinks == out.doc.tlinks, format!("{}: TLINKs change on re-annotation", ad.doc.doc_id))?;
        check(again.doc.clinks == out.doc.clinks, format!("{}: CLINKs change on re-annotation", ad.doc.doc_id))?;
    }
    check(clinks > 0, "no CLINK emitted on the synthetic corpus")?;
    Ok(format!("20 documents, {clinks} CLINKs, all ordered and stable"))
}

fn is_event(doc: &Document, id: &str) -> bool {
    doc.event(id).is_some()
}

fn corpus_dir() -> Option<PathBuf> {
    let dir = std::env::var_os("CHRONOREL_CAUSAL_TIMEBANK").map(PathBuf::from)?;
    dir.is_dir().then_some(dir)
}

/// CLINK micro F1 over stratified folds of filtered candidate instances.
fn clink_cv(
    docs: &[chronorel::AnnotatedDocument],
    lex: &Lexicons,
    with_tlink: bool,
) -> Result<(f64, f64, f64), String> {
    let data = clink_training_data(docs, lex, with_tlink).map_err(|e| e.to_string())?;
    let labels: Vec<&str> = data.iter().map(|d| d.1.as_str()).collect();
    let folds = stratified_folds(&labels, 10, 0).map_err(|e| e.to_string())?;
    let (mut tp, mut pred, mut gold) = (0usize, 0usize, 0usize);
    for fold in &folds {
        let held: HashSet<usize> = fold.iter().copied().collect();
        let train_set: Vec<_> =
            data.iter().enumerate().filter(|(i, _)| !held.contains(i)).map(|(_, d)| d.clone()).collect();
        let (c, _) = Classifier::fit(&train_set, Hyperparameters::default()).map_err(|e| e.to_string())?;
        for &i in fold {
            let p = c.predict_raw(&data[i].0).label;
            let g = &data[i].1;
            pred += usize::from(p != "NO-REL");
            gold += usize::from(g != "NO-REL");
            tp += usize::from(p != "NO-REL" && &p == g);
        }
    }
    let p = if pred == 0 { 0.0 } else { tp as f64 / pred as f64 };
    let r = if gold == 0 { 0.0 } else { tp as f64 / gold as f64 };
    let f = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    Ok((p, r, f))
}

fn corpus_replication(dir: &Path) -> Outcome {
    let entries = load_corpus(dir).map_err(|e| e.to_string())?;
    let chain = fallback_chain(&MappingProfile::strict(), &[]).map_err(|e| e.to_string())?;
    let (mut before, mut after) = (0usize, 0usize);
    for e in &entries {
        let ee = |l: &TLink| is_event(&e.doc, &l.source) && is_event(&e.doc, &l.target);
        let base = e.doc.tlinks.iter().filter(|l| ee(l)).count();
        before += base;
        after += base;
        let report = check_document(&e.doc, &chain);
        if let Some(p) = report.profile_used.as_deref().and_then(|n| chain.iter().find(|p| p.name == n)) {
            after += deduce(&e.doc, p).map_err(|e| e.to_string())?.iter().filter(|l| ee(l)).count();
        }
    }
    let mut msgs = vec![format!("E-E TLINKs {before} -> {after}")];
    check((after as f64 - 10226.0).abs() <= 1022.6, format!("deduced E-E count {after} outside 10226 ± 10%"))?;

    let annotated: Vec<_> = entries
        .iter()
        .filter(|e| e.layer.is_some())
        .map(|e| e.annotated())
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if annotated.len() < entries.len() {
        msgs.push(format!(
            "CLINK checks skipped: {} of {} files lack parses",
            entries.len() - annotated.len(),
            entries.len()
        ));
        return Ok(msgs.join("; "));
    }
    let lex = Lexicons::bundled();
    let (_, r_with, f_with) = clink_cv(&annotated, &lex, true)?;
    let (_, r_without, _) = clink_cv(&annotated, &lex, false)?;
    msgs.push(format!("CLINK F1 {f_with:.4}, recall {r_with:.4} with TLINK vs {r_without:.4} without"));
    check((f_with - 0.4589).abs() <= 0.06, format!("CLINK F1 {f_with:.4} outside 0.4589 ± 0.06"))?;
    check(r_without < r_with, format!("recall without TLINK feature {r_without:.4} is not lower than {r_with:.4}"))?;
    Ok(msgs.join("; "))
}

fn regression_predictor() -> Outcome {
    let c = RegressionCoefficients::default();
    let a = predict_deducible(15, 10, 10, &c);
    let b = predict_deducible(0, 0, 0, &c);
    check(a == 177.0, format!("(15,10,10) -> {a}"))?;
    check(b == -10.0, format!("(0,0,0) -> {b}"))?;
    let readme = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    let text = std::fs::read_to_string(&readme).map_err(|e| format!("{}: {e}", readme.display()))?;
    check(text.contains("177") && text.contains("43"), "README lacks the 177 vs 43 note")?;
    Ok("177.0 and -10.0; discrepancy documented".into())
}

struct Criterion {
    id: u8,
    name: &'static str,
    tolerance: &'static str,
    budget: Duration,
    run: Box<dyn Fn() -> Option<Outcome>>,
}

fn main() {
    let criteria = vec![
        Criterion {
            id: 1,
            name: "Allen algebra matches endpoint oracle",
            tolerance: "exact",
            budget: Duration::from_secs(5),
            run: Box::new(|| Some(allen_algebra())),
        },
        Criterion {
            id: 2,
            name: "reasoning examples",
            tolerance: "exact",
            budget: Duration::from_secs(1),
            run: Box::new(|| Some(reasoning_examples())),
        },
        Criterion {
            id: 3,
            name: "rule fixtures",
            tolerance: "exact",
            budget: Duration::from_secs(1),
            run: Box::new(|| Some(rule_fixtures())),
        },
        Criterion {
            id: 4,
            name: "metric properties",
            tolerance: "exact",
            budget: Duration::from_secs(10),
            run: Box::new(|| Some(metric_properties())),
        },
        Criterion {
            id: 5,
            name: "classifier contract",
            tolerance: "bit-identical",
            budget: Duration::from_secs(30),
            run: Box::new(|| Some(classifier_contract())),
        },
        Criterion {
            id: 6,
            name: "pipeline post-edit and idempotence",
            tolerance: "exact",
            budget: Duration::from_secs(30),
            run: Box::new(|| Some(pipeline_invariant())),
        },
        Criterion {
            id: 7,
            name: "Causal-TimeBank replication",
            tolerance: "count ±10%, F1 ±0.06",
            budget: Duration::from_secs(3600),
            run: Box::new(|| corpus_dir().map(|d| corpus_replication(&d))),
        },
        Criterion {
            id: 8,
            name: "regression predictor",
            tolerance: "exact",
            budget: Duration::from_secs(1),
            run: Box::new(|| Some(regression_predictor())),
        },
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| (c.run)())).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Some(Err(format!("panicked: {msg}")))
        });
        let elapsed = start.elapsed();
        let timing = format!("{:.3}s / {}s", elapsed.as_secs_f64(), c.budget.as_secs());
        let (tag, detail) = match result {
            None => ("SKIP", "set CHRONOREL_CAUSAL_TIMEBANK to a corpus directory to enable".to_string()),
            Some(Ok(d)) if elapsed <= c.budget => ("PASS", d),
            Some(Ok(d)) => ("FAIL", format!("over time budget; {d}")),
            Some(Err(e)) => ("FAIL", e),
        };
        failures += usize::from(tag == "FAIL");
        println!("[{tag}] criterion {}: {} ({}; {timing}) {detail}", c.id, c.name, c.tolerance);
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}
