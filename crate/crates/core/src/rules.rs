//! Deterministic rule sieves for timex-timex, event-DCT, event-timex and
//! event-event pairs. Each rule either proposes a label or abstains; the
//! first matching rule for a pair wins.

use crate::annotation::{AnnotatedDocument, DepPath};
use crate::labels::TLinkLabel;
use crate::lexicon::{AspectualClass, Lexicons, TenseRuleSet};
use crate::pairs::{EntityPair, PairKind};
use crate::timeml::{Aspect, EventClass, EventInstance, Tense, Timex};
use crate::timex::tt_rule;

/// A label proposed by a rule, with the name of the rule that fired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleLabel {
    pub pair: EntityPair,
    pub label: TLinkLabel,
    pub rule: &'static str,
}

/// Event-DCT label from the event's tense and aspect.
pub fn ed_rule(e: &EventInstance, _dct: &Timex) -> Option<TLinkLabel> {
    match (e.tense, e.aspect) {
        (Tense::Past, Aspect::Perfective) => Some(TLinkLabel::Before),
        (Tense::Present, Aspect::Progressive) => Some(TLinkLabel::Includes),
        (Tense::Present, Aspect::PerfectiveProgressive) => Some(TLinkLabel::Includes),
        (Tense::Future, _) => Some(TLinkLabel::After),
        _ => None,
    }
}

/// Position of a timex inside a duration pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DurationRole {
    Begin,
    End,
}

const OPENERS: [&str; 2] = ["between", "from"];
const DASHES: [&str; 3] = ["-", "–", "—"];

fn closes(opener: &str, word: &str) -> bool {
    match opener {
        "between" => word == "and",
        "from" => matches!(word, "to" | "until" | "till" | "through"),
        _ => false,
    }
}

/// Token range of every in-text timex, in text order.
fn timex_ranges(ad: &AnnotatedDocument) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = ad
        .doc
        .timexes
        .iter()
        .filter_map(|t| {
            let toks = ad.tokens_of(&t.tid);
            Some((*toks.first()?, *toks.last()?))
        })
        .collect();
    v.sort();
    v
}

/// Whether the timex starts or ends a "between T1 and T2", "from T1 to T2"
/// or "T1-T2" pattern.
pub fn duration_role(ad: &AnnotatedDocument, tid: &str) -> Option<DurationRole> {
    let toks = ad.tokens_of(tid);
    let (&first, &last) = (toks.first()?, toks.last()?);
    let sent = ad.sentence_tokens(ad.token(first).sentence);
    let form = |i: usize| ad.token(i).form.to_lowercase();
    let ranges = timex_ranges(ad);
    let next = ranges.iter().find(|r| r.0 > last);
    let prev = ranges.iter().rev().find(|r| r.1 < first);

    // As the first timex.
    if first > sent.start {
        let opener = form(first - 1);
        if OPENERS.contains(&opener.as_str()) {
            if let Some(&(s, _)) = next {
                if s == last + 2 && closes(&opener, &form(last + 1)) {
                    return Some(DurationRole::Begin);
                }
            }
        }
    }
    if let Some(&(s, _)) = next {
        if s == last + 2 && s < sent.end && DASHES.contains(&form(last + 1).as_str()) {
            return Some(DurationRole::Begin);
        }
    }
    // As the second timex.
    if let Some(&(ps, pe)) = prev {
        if pe + 2 == first {
            let mid = form(pe + 1);
            if DASHES.contains(&mid.as_str()) && ps >= sent.start {
                return Some(DurationRole::End);
            }
            if ps > sent.start && closes(&form(ps - 1), &mid) {
                return Some(DurationRole::End);
            }
        }
    }
    None
}

/// Event-timex label for a pair whose e2 is the timex, from temporal
/// prepositions, bare temporal modifiers and duration patterns.
pub fn et_rule(pair: &EntityPair, ad: &AnnotatedDocument, lex: &Lexicons) -> Option<TLinkLabel> {
    if pair.kind != PairKind::ET {
        return None;
    }
    let path = ad.entity_path(&pair.e1, &pair.e2)?;
    if path.is_empty() || !path.is_downward() {
        return None;
    }
    match duration_role(ad, &pair.e2) {
        Some(DurationRole::Begin) => return Some(TLinkLabel::BegunBy),
        Some(DurationRole::End) => return Some(TLinkLabel::EndedBy),
        None => {}
    }
    let labels: Vec<&str> = path.steps.iter().map(|s| s.label.as_str()).collect();
    match labels.as_slice() {
        ["TMP"] => Some(TLinkLabel::IsIncluded),
        ["TMP" | "ADV", "PMOD"] => {
            let prep = ad.token(path.nodes[1]).form.to_lowercase();
            lex.prepositions.get(&prep).map(|s| s.label())
        }
        _ => None,
    }
}

/// Rules keyed on a downward path from the governing event `gov` to `dep`,
/// giving the label of `gov` relative to `dep`.
fn governed_rules(
    path: &DepPath,
    gov: &EventInstance,
    dep: &EventInstance,
    gov_lemma: &str,
    lex: &Lexicons,
) -> Option<(TLinkLabel, &'static str)> {
    match path.label_string().as_str() {
        "LGS-PMOD" => return Some((TLinkLabel::After, "logical-subject")),
        "LOC-PMOD" => return Some((TLinkLabel::IsIncluded, "locative")),
        "OPRD" | "OPRD-IM" => {
            let label = match lex.aspectual.get(&gov_lemma.to_lowercase()) {
                Some(AspectualClass::Initiation | AspectualClass::Reinitiation) => TLinkLabel::Begins,
                Some(AspectualClass::Culmination | AspectualClass::Termination) => TLinkLabel::Ends,
                Some(AspectualClass::Continuation) => TLinkLabel::Includes,
                None if gov.aspect == Aspect::PerfectiveProgressive => TLinkLabel::Simultaneous,
                None => TLinkLabel::Before,
            };
            return Some((label, "predicative-complement"));
        }
        _ => {}
    }
    if path.len() > 3 {
        return None;
    }
    let (set, name) = if gov.class == EventClass::Reporting {
        (TenseRuleSet::Reporting, "reporting-governor")
    } else {
        (TenseRuleSet::Tense, "tense-profile")
    };
    lex.tense_rules.lookup(set, gov.tense, gov.aspect, dep.tense, dep.aspect).map(|l| (l, name))
}

fn ee_rule_named(pair: &EntityPair, ad: &AnnotatedDocument, lex: &Lexicons) -> Option<(TLinkLabel, &'static str)> {
    if pair.kind != PairKind::EE {
        return None;
    }
    if ad.coreferent(&pair.e1, &pair.e2) {
        return Some((TLinkLabel::Simultaneous, "coreference"));
    }
    if ad.sentence_of(&pair.e1)? != ad.sentence_of(&pair.e2)? {
        return None;
    }
    let e1 = ad.doc.event(&pair.e1)?;
    let e2 = ad.doc.event(&pair.e2)?;
    let path = ad.entity_path(&pair.e1, &pair.e2)?;
    if path.is_empty() {
        return None;
    }
    if path.is_downward() {
        governed_rules(&path, e1, e2, ad.lemma(&pair.e1)?, lex)
    } else if path.is_upward() {
        let back = ad.entity_path(&pair.e2, &pair.e1)?;
        governed_rules(&back, e2, e1, ad.lemma(&pair.e2)?, lex).map(|(l, n)| (l.inverse(), n))
    } else {
        None
    }
}

/// Event-event label from coreference, dependency patterns between the two
/// events, and the tense-profile table when one event governs the other.
pub fn ee_rule(pair: &EntityPair, ad: &AnnotatedDocument, lex: &Lexicons) -> Option<TLinkLabel> {
    ee_rule_named(pair, ad, lex).map(|x| x.0)
}

/// Runs the rule for each pair's kind and returns the labeled pairs in input
/// order.
pub fn apply_rule_sieve(ad: &AnnotatedDocument, pairs: &[EntityPair], lex: &Lexicons) -> Vec<RuleLabel> {
    let doc = &ad.doc;
    let mut out = Vec::new();
    for p in pairs {
        let hit = match p.kind {
            PairKind::TT => match (doc.timex(&p.e1), doc.timex(&p.e2)) {
                (Some(a), Some(b)) => tt_rule(a, b).map(|l| (l, "timex-value")),
                _ => None,
            },
            PairKind::ED => doc.event(&p.e1).and_then(|e| ed_rule(e, &doc.dct)).map(|l| (l, "tense-aspect")),
            PairKind::ET => et_rule(p, ad, lex).map(|l| (l, "temporal-modifier")),
            PairKind::EE => ee_rule_named(p, ad, lex),
        };
        if let Some((label, rule)) = hit {
            out.push(RuleLabel { pair: p.clone(), label, rule });
        }
    }
    out
}
