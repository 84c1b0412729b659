//! Pair features for the temporal and causal classifiers.
//!
//! Features are first produced as `name=value` strings (or bare names for
//! binary features that are on) and then indexed by a [`FeatureEncoder`]
//! fitted on training data. Token and lemma strings are never used.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::annotation::AnnotatedDocument;
use crate::labels::TLinkLabel;
use crate::lexicon::{Lexicons, SignalLexicon, SignalMatch};
use crate::pairs::{EntityPair, PairKind};
use crate::rules::ed_rule;
use crate::timex::tt_rule;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeatureError {
    #[error("entity `{0}` has no tokens in the annotation layer")]
    MissingAnnotation(String),
    #[error("entity `{0}` is not in the document")]
    UnknownEntity(String),
    #[error("cannot fit encoder on an empty corpus")]
    EmptyCorpus,
}

/// Which feature set to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureSet {
    /// Temporal pair features for the pair's kind.
    Temporal,
    /// Event-event features plus causal signals; `tlink` is the temporal
    /// label of the pair when `with_tlink` is set.
    Causal { tlink: Option<TLinkLabel>, with_tlink: bool },
}

/// Where a signal sits relative to the two entities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalPosition {
    Between,
    Begin,
    Before,
    After,
}

impl SignalPosition {
    pub fn as_str(self) -> &'static str {
        match self {
            SignalPosition::Between => "BETWEEN",
            SignalPosition::Begin => "BEGIN",
            SignalPosition::Before => "BEFORE",
            SignalPosition::After => "AFTER",
        }
    }
}

/// A signal chosen for a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSignal {
    pub found: SignalMatch,
    pub position: SignalPosition,
    /// The signal token closest to the root.
    pub head: usize,
}

fn token_depth(ad: &AnnotatedDocument, mut t: usize) -> usize {
    let mut d = 0;
    while let Some(h) = ad.token(t).head {
        t = h;
        d += 1;
    }
    d
}

fn bounds(ad: &AnnotatedDocument, id: &str) -> Option<(usize, usize)> {
    let t = ad.tokens_of(id);
    Some((*t.first()?, *t.last()? + 1))
}

/// Signals from `lexicon` in the sentences spanned by the pair, with the
/// one preferred for features first: between the entities, then at the
/// sentence start or before the first entity (nearest first), then after
/// the second entity (nearest first).
pub fn pair_signals(ad: &AnnotatedDocument, pair: &EntityPair, lexicon: &SignalLexicon) -> Vec<PairSignal> {
    let (Some(a), Some(b)) = (bounds(ad, &pair.e1), bounds(ad, &pair.e2)) else {
        return Vec::new();
    };
    let (first, second) = if a.0 <= b.0 { (a, b) } else { (b, a) };
    let s1 = ad.token(first.0).sentence;
    let s2 = ad.token(second.0).sentence;
    let sent_start = ad.sentence_tokens(s1).start;
    let mut out = Vec::new();
    for s in s1.min(s2)..=s1.max(s2) {
        let range = ad.sentence_tokens(s);
        let forms = ad.lower_forms(range.clone());
        for m in lexicon.find(&forms, range.start) {
            let position = if m.start >= first.1 && m.end <= second.0 {
                SignalPosition::Between
            } else if m.end <= first.0 {
                if m.start == sent_start {
                    SignalPosition::Begin
                } else {
                    SignalPosition::Before
                }
            } else if m.start >= second.1 {
                SignalPosition::After
            } else {
                continue;
            };
            let head = (m.start..m.end).min_by_key(|&t| token_depth(ad, t)).expect("non-empty match");
            out.push(PairSignal { found: m, position, head });
        }
    }
    let rank = |p: &PairSignal| -> (u8, i64) {
        match p.position {
            SignalPosition::Between => (0, p.found.start as i64),
            SignalPosition::Begin => (1, 0),
            SignalPosition::Before => (2, -(p.found.start as i64)),
            SignalPosition::After => (3, p.found.start as i64),
        }
    };
    out.sort_by_key(rank);
    out
}

/// Bucket name for a similarity score.
pub fn wn_sim_bucket(sim: f64) -> &'static str {
    if sim <= 0.0 {
        "sim<=0.0"
    } else if sim <= 0.5 {
        "0.0<sim<=0.5"
    } else if sim <= 1.0 {
        "0.5<sim<=1.0"
    } else {
        "sim>1.0"
    }
}

fn label_or_none(l: Option<TLinkLabel>) -> &'static str {
    l.map_or("NONE", |l| l.as_str())
}

fn signal_features(
    out: &mut Vec<String>,
    ad: &AnnotatedDocument,
    pair: &EntityPair,
    lexicon: &SignalLexicon,
    lex: &Lexicons,
    prefix: &str,
) {
    let Some(sig) = pair_signals(ad, pair, lexicon).into_iter().next() else {
        return;
    };
    out.push(format!("{prefix}Cluster={}", sig.found.cluster));
    out.push(format!("{prefix}Position={}", sig.position.as_str()));
    let mut bag = BTreeSet::new();
    for id in [&pair.e1, &pair.e2] {
        if let Some(h) = ad.head(id) {
            if let Some(path) = ad.dep_path(sig.head, h) {
                for step in path.steps {
                    for atom in step.label.split('-') {
                        if lex.signal_dep_labels.iter().any(|l| l == atom) {
                            bag.insert(atom.to_string());
                        }
                    }
                }
            }
        }
    }
    for atom in bag {
        out.push(format!("{prefix}Dep={atom}"));
    }
}

/// Raw feature strings for a pair. For event-DCT pairs `e2` is the DCT and
/// contributes only its timex type.
pub fn raw_features(
    pair: &EntityPair,
    ad: &AnnotatedDocument,
    lex: &Lexicons,
    set: FeatureSet,
) -> Result<Vec<String>, FeatureError> {
    let doc = &ad.doc;
    let kind = match set {
        FeatureSet::Temporal => pair.kind,
        FeatureSet::Causal { .. } => PairKind::EE,
    };
    let mut f = Vec::new();
    let check = |id: &str| -> Result<(), FeatureError> {
        if doc.entity_kind(id).is_none() {
            Err(FeatureError::UnknownEntity(id.to_string()))
        } else if ad.head(id).is_none() {
            Err(FeatureError::MissingAnnotation(id.to_string()))
        } else {
            Ok(())
        }
    };
    check(&pair.e1)?;
    if kind != PairKind::ED {
        check(&pair.e2)?;
    }
    let with_e2 = kind != PairKind::ED;

    let pos1 = ad.pos(&pair.e1).unwrap_or_default();
    f.push(format!("pos1={pos1}"));
    f.push(format!("chunk1={}", ad.chunk(&pair.e1).unwrap_or_default()));
    if with_e2 {
        let pos2 = ad.pos(&pair.e2).unwrap_or_default();
        f.push(format!("pos2={pos2}"));
        f.push(format!("chunk2={}", ad.chunk(&pair.e2).unwrap_or_default()));
        if pos1 == pos2 {
            f.push("samePoS".into());
        }
        if kind == PairKind::ET && ad.entity_rank(&pair.e1) < ad.entity_rank(&pair.e2) {
            f.push("entityOrder".into());
        }
        if ad.sentence_distance(&pair.e1, &pair.e2).unwrap_or(0) > 0 {
            f.push("sentenceDistance".into());
        }
        if ad.entity_distance(&pair.e1, &pair.e2).unwrap_or(0) > 0 {
            f.push("entityDistance".into());
        }
    }

    let e1 = doc.event(&pair.e1);
    let e2 = if kind == PairKind::EE { doc.event(&pair.e2) } else { None };
    for (n, e) in [(1, e1), (2, e2)] {
        if let Some(e) = e {
            f.push(format!("class{n}={}", e.class));
            f.push(format!("tense{n}={}", e.tense));
            f.push(format!("aspect{n}={}", e.aspect));
            f.push(format!("polarity{n}={}", e.polarity));
        }
    }
    if let (Some(a), Some(b)) = (e1, e2) {
        if a.class == b.class {
            f.push("sameClass".into());
        }
        if a.tense == b.tense && a.aspect == b.aspect {
            f.push("sameTenseAspect".into());
        }
        if a.polarity == b.polarity {
            f.push("samePolarity".into());
        }
    }
    if matches!(kind, PairKind::ED | PairKind::ET) {
        if let Some(t) = doc.timex(&pair.e2) {
            f.push(format!("timexType={}", t.timex_type));
        }
    }

    if kind == PairKind::EE {
        if let Some(p) = ad.entity_path(&pair.e1, &pair.e2) {
            let s = p.label_string();
            if lex.dependency_paths.contains(&s) {
                f.push(format!("depPath={s}"));
            }
        }
    }
    if ad.is_main_verb(&pair.e1) {
        f.push("mainVerb1".into());
    }
    if with_e2 && ad.is_main_verb(&pair.e2) {
        f.push("mainVerb2".into());
    }

    match kind {
        PairKind::ET => signal_features(&mut f, ad, pair, &lex.timex_signals, lex, "tsig"),
        PairKind::EE => signal_features(&mut f, ad, pair, &lex.event_signals, lex, "tsig"),
        _ => {}
    }
    if kind == PairKind::EE {
        if let Some(sim) = ad.similarity(&pair.e1, &pair.e2) {
            f.push(format!("wnSim={}", wn_sim_bucket(sim)));
        }
    }

    match (kind, set) {
        (PairKind::ET, FeatureSet::Temporal) => {
            let l = doc.timex(&pair.e2).and_then(|t| tt_rule(t, &doc.dct));
            f.push(format!("timexDct={}", label_or_none(l)));
        }
        (PairKind::EE, FeatureSet::Temporal) => {
            for (n, e) in [(1, e1), (2, e2)] {
                f.push(format!("eventDct{n}={}", label_or_none(e.and_then(|e| ed_rule(e, &doc.dct)))));
            }
        }
        (_, FeatureSet::Causal { tlink, with_tlink }) => {
            signal_features(&mut f, ad, pair, &lex.causal_signals, lex, "csig");
            if with_tlink {
                f.push(format!("tlink={}", label_or_none(tlink)));
            }
        }
        _ => {}
    }
    Ok(f)
}

/// Sparse binary feature vector: sorted, unique indices of the features
/// that are on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureVector {
    indices: Vec<u32>,
}

impl FeatureVector {
    pub fn from_indices(mut indices: Vec<u32>) -> FeatureVector {
        indices.sort_unstable();
        indices.dedup();
        FeatureVector { indices }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// `(index, value)` entries; every stored value is 1.
    pub fn entries(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().map(|&i| (i, 1.0))
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Feature vocabulary in first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct FeatureEncoder {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl From<Vec<String>> for FeatureEncoder {
    fn from(names: Vec<String>) -> FeatureEncoder {
        FeatureEncoder::from_names(names)
    }
}

impl From<FeatureEncoder> for Vec<String> {
    fn from(enc: FeatureEncoder) -> Vec<String> {
        enc.names
    }
}

impl FeatureEncoder {
    /// Fits a vocabulary over raw feature lists.
    pub fn fit<'a, I>(corpus: I) -> Result<FeatureEncoder, FeatureError>
    where
        I: IntoIterator<Item = &'a Vec<String>>,
    {
        let mut enc = FeatureEncoder::default();
        let mut any = false;
        for feats in corpus {
            any = true;
            for name in feats {
                if !enc.index.contains_key(name) {
                    enc.index.insert(name.clone(), enc.names.len() as u32);
                    enc.names.push(name.clone());
                }
            }
        }
        if !any {
            return Err(FeatureError::EmptyCorpus);
        }
        Ok(enc)
    }

    /// An encoder over a fixed vocabulary.
    pub fn from_names(names: Vec<String>) -> FeatureEncoder {
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i as u32)).collect();
        FeatureEncoder { names, index }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    /// Encodes raw features, dropping names outside the vocabulary.
    pub fn encode(&self, feats: &[String]) -> FeatureVector {
        FeatureVector::from_indices(feats.iter().filter_map(|n| self.index_of(n)).collect())
    }
}

/// Raw features followed by encoding.
pub fn featurize(
    pair: &EntityPair,
    ad: &AnnotatedDocument,
    lex: &Lexicons,
    enc: &FeatureEncoder,
    set: FeatureSet,
) -> Result<FeatureVector, FeatureError> {
    Ok(enc.encode(&raw_features(pair, ad, lex, set)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{tok, DocBuilder};
    use crate::timeml::{Aspect, EventClass, Tense, TimexType};

    fn doc() -> AnnotatedDocument {
        let (c, t, a) = (EventClass::Occurrence, Tense::Past, Aspect::None);
        let mut b = DocBuilder::new("d", "2015-12-12");
        b.sentence(vec![
            tok("He", "he", "PRP", 2, "SBJ"),
            tok("left", "leave", "VBD", 0, "ROOT").main().event(c, t, a),
            tok("in", "in", "IN", 2, "TMP"),
            tok("advance", "advance", "NN", 3, "PMOD"),
            tok("of", "of", "IN", 4, "NMOD"),
            tok("the", "the", "DT", 7, "NMOD"),
            tok("storm", "storm", "NN", 5, "PMOD").event(c, Tense::None, a),
            tok("on", "on", "IN", 2, "TMP"),
            tok("Friday", "friday", "NNP", 8, "PMOD").timex(TimexType::Date, "2015-12-11"),
        ])
        .similar("leave", "storm", 0.3);
        b.build()
    }

    #[test]
    fn event_event_features() {
        let ad = doc();
        let lex = Lexicons::bundled();
        let p = EntityPair::new(PairKind::EE, "ei1", "ei2", true);
        let f = raw_features(&p, &ad, &lex, FeatureSet::Temporal).unwrap();
        for want in [
            "wnSim=0.0<sim<=0.5",
            "tsigCluster=prior to",
            "tsigPosition=BETWEEN",
            "tsigDep=TMP",
            "tsigDep=PMOD",
            "eventDct1=NONE",
            "mainVerb1",
        ] {
            assert!(f.iter().any(|x| x == want), "missing {want} in {f:?}");
        }
        assert!(!f.iter().any(|x| x == "sentenceDistance" || x == "entityDistance"));
    }

    #[test]
    fn event_timex_features_keep_timex_second() {
        let ad = doc();
        let lex = Lexicons::bundled();
        let p = EntityPair::new(PairKind::ET, "ei1", "t1", true);
        let f = raw_features(&p, &ad, &lex, FeatureSet::Temporal).unwrap();
        assert!(f.contains(&"entityOrder".to_string()));
        assert!(f.contains(&"entityDistance".to_string()));
        assert!(f.contains(&"timexType=DATE".to_string()));
        assert!(f.contains(&"timexDct=IS_INCLUDED".to_string()) || f.contains(&"timexDct=BEFORE".to_string()));
    }

    #[test]
    fn encoder_is_first_seen_and_drops_unseen() {
        let corpus = vec![vec!["pos1=VERB".to_string(), "a".into()], vec!["pos1=NOUN".to_string(), "a".into()]];
        let enc = FeatureEncoder::fit(&corpus).unwrap();
        assert_eq!(enc.names(), ["pos1=VERB", "a", "pos1=NOUN"]);
        assert_eq!(FeatureEncoder::fit(&corpus).unwrap(), enc);
        assert!(enc.encode(&["pos1=ADJ".to_string()]).is_empty());
        assert_eq!(enc.encode(&["pos1=NOUN".into(), "a".into(), "a".into()]).indices(), [1, 2]);
        let empty: Vec<Vec<String>> = Vec::new();
        assert_eq!(FeatureEncoder::fit(&empty), Err(FeatureError::EmptyCorpus));
    }

    #[test]
    fn similarity_buckets() {
        assert_eq!(wn_sim_bucket(0.0), "sim<=0.0");
        assert_eq!(wn_sim_bucket(0.3), "0.0<sim<=0.5");
        assert_eq!(wn_sim_bucket(1.0), "0.5<sim<=1.0");
        assert_eq!(wn_sim_bucket(1.2), "sim>1.0");
    }
}
