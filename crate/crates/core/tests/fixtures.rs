//! End-to-end checks over the files in `tests/fixtures`.

use std::path::{Path, PathBuf};

use chronorel::allen::{check_document, deduce, fallback_chain};
use chronorel::causal::post_edit_tlinks;
use chronorel::corpus::{load_corpus, load_file};
use chronorel::pairs::{candidate_pairs, Task};
use chronorel::timeml::EventClass;
use chronorel::timex::{parse_value, DurationUnit, IsoValue};
use chronorel::{parse_timeml, serialize_timeml, MappingProfile, TLinkLabel};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

#[test]
fn newswire_excerpt_parses_and_aligns() {
    let entries = load_corpus(&fixture("corpus")).unwrap();
    assert_eq!(entries.len(), 1);
    let doc = &entries[0].doc;
    assert_eq!(doc.doc_id, "wsj_0679");
    assert_eq!(doc.event("ei24").unwrap().class, EventClass::Occurrence);
    assert_eq!(doc.timex("t25").unwrap().value, "1988-08-10");
    let l21 = doc.tlinks.iter().find(|l| l.lid == "l21").unwrap();
    assert_eq!((l21.source.as_str(), l21.target.as_str(), l21.rel_type), ("t31", "t25", TLinkLabel::After));
    match parse_value(&doc.timex("t31").unwrap().value).unwrap() {
        IsoValue::Duration(parts) => {
            assert_eq!(parts.len(), 1);
            assert_eq!((parts[0].amount, parts[0].unit), (Some(18), DurationUnit::Month));
        }
        other => panic!("{other:?}"),
    }

    let ad = entries[0].annotated().unwrap();
    assert_eq!(ad.lemma("ei24"), Some("acquire"));
    assert!(ad.coreferent("ei26", "ei27"));
    assert_eq!(ad.similarity("ei26", "ei27"), Some(1.0));
    assert_eq!(ad.entity_path("ei26", "t25").unwrap().label_string(), "NMOD");
}

#[test]
fn causal_link_survives_serialization() {
    let doc = load_file(&fixture("corpus/wsj_0679.tml")).unwrap().doc;
    let xml = serialize_timeml(&doc);
    assert!(xml.contains(r#"<CLINK id="l24" source="ei26" target="ei24" csignalID="cs32""#), "{xml}");
    assert_eq!(parse_timeml(&xml).unwrap(), doc);
}

#[test]
fn post_editing_keeps_the_annotated_order() {
    let mut doc = load_file(&fixture("corpus/wsj_0679.tml")).unwrap().doc;
    let before = doc.clone();
    post_edit_tlinks(&mut doc);
    assert_eq!(doc, before);
    assert_eq!(doc.tlinks.iter().find_map(|l| l.label_between("ei26", "ei24")), Some(TLinkLabel::Before));
}

#[test]
fn causal_candidates_cover_sentence_pairs() {
    let ad = load_file(&fixture("corpus/wsj_0679.tml")).unwrap().annotated().unwrap();
    let pairs: Vec<(String, String)> = candidate_pairs(&ad, Task::Causal).into_iter().map(|p| (p.e1, p.e2)).collect();
    assert!(pairs.contains(&("ei24".into(), "ei26".into())));
    assert!(pairs.contains(&("ei27".into(), "ei29".into())));
    assert!(pairs.contains(&("ei26".into(), "ei28".into())));
}

#[test]
fn meeting_triangle_is_inconsistent() {
    let doc = load_file(&fixture("reason/albright_inconsistent.tml")).unwrap().doc;
    let chain = fallback_chain(&MappingProfile::strict(), &[]).unwrap();
    let report = check_document(&doc, &chain);
    assert!(!report.consistent);
    let t = report.culprit.unwrap();
    let mut ids = vec![t.0, t.1, t.2];
    ids.sort();
    assert_eq!(ids, vec!["ei116", "ei45", "ei46"]);
}

#[test]
fn pledge_chain_deduces_announced_before_ask() {
    let doc = load_file(&fixture("reason/albright_chain.tml")).unwrap().doc;
    let deduced = deduce(&doc, &MappingProfile::strict()).unwrap();
    assert_eq!(deduced.len(), 1);
    assert_eq!(deduced[0].label_between("ei45", "ei47"), Some(TLinkLabel::Before));
    assert!(deduced[0].deduced());
}
