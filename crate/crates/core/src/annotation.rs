//! Token-level annotation layer read from a sidecar file, and its
//! alignment with a TimeML document.
//!
//! Sidecar format: one token per line, sentences separated by blank lines,
//! nine tab-separated columns
//!
//! ```text
//! ID  FORM  LEMMA  POS  CHUNK  HEAD  DEPREL  MAIN  SUPERSENSE
//! ```
//!
//! `ID` is 1-based within the sentence, `HEAD` is 0 for the root, `MAIN` is
//! `Y` for main verbs, and `_` marks an empty field. Event coreference sets
//! are comment lines `# coref ei1 ei5 ...`; other `#` lines are ignored.
//!
//! The optional similarity table is a separate file with lines
//! `lemma1<TAB>lemma2<TAB>score`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use crate::timeml::{Document, EntityKind, Span};

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub form: String,
    pub lemma: String,
    pub pos: String,
    pub chunk: String,
    /// Index of the head token in the layer, `None` for sentence roots.
    pub head: Option<usize>,
    pub deprel: String,
    pub main_verb: bool,
    pub supersense: Option<String>,
    pub sentence: usize,
}

/// Symmetric lemma-pair similarity scores.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimilarityTable {
    scores: HashMap<(String, String), f64>,
}

impl SimilarityTable {
    pub fn new() -> SimilarityTable {
        SimilarityTable::default()
    }

    fn key(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_lowercase(), b.to_lowercase())
        } else {
            (b.to_lowercase(), a.to_lowercase())
        }
    }

    pub fn insert(&mut self, a: &str, b: &str, score: f64) {
        self.scores.insert(SimilarityTable::key(a, b), score);
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.scores.get(&SimilarityTable::key(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Lines `lemma1<TAB>lemma2<TAB>score`, sorted by lemma pair.
    pub fn render(&self) -> String {
        let mut rows: Vec<_> = self.scores.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        let mut out = String::new();
        for ((a, b), s) in rows {
            let _ = writeln!(out, "{a}\t{b}\t{s}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<SimilarityTable, AnnotationError> {
        let mut t = SimilarityTable::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(AnnotationError::Syntax { line: i + 1, message: "expected lemma1, lemma2, score".into() });
            }
            let score: f64 = cols[2]
                .trim()
                .parse()
                .map_err(|_| AnnotationError::Syntax { line: i + 1, message: format!("bad score `{}`", cols[2]) })?;
            t.insert(cols[0].trim(), cols[1].trim(), score);
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnnotationLayer {
    pub tokens: Vec<Token>,
    /// Token index range of each sentence.
    pub sentences: Vec<Range<usize>>,
    /// Event coreference partition, as sets of eiids.
    pub coref: Vec<Vec<String>>,
    pub similarity: Option<SimilarityTable>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnnotationError {
    #[error("sidecar line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("sentence {sentence}: {message}")]
    Tree { sentence: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlignmentError {
    #[error("token count mismatch: annotation layer has {layer} tokens, document text has {document}")]
    TokenCount { layer: usize, document: usize },
    #[error("token {index} `{form}` does not match document text `{found}` at byte {offset}")]
    Mismatch { index: usize, form: String, found: String, offset: usize },
}

impl AnnotationLayer {
    /// Parses the sidecar format described in the module docs.
    pub fn parse(text: &str) -> Result<AnnotationLayer, AnnotationError> {
        let mut layer = AnnotationLayer::default();
        let mut sent: Vec<(usize, Token, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim_end_matches('\r');
            if let Some(comment) = line.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                if words.next() == Some("coref") {
                    let set: Vec<String> = words.map(str::to_string).collect();
                    if set.len() >= 2 {
                        layer.coref.push(set);
                    }
                }
                continue;
            }
            if line.trim().is_empty() {
                layer.flush(&mut sent)?;
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 9 {
                return Err(AnnotationError::Syntax {
                    line: lineno,
                    message: format!("expected 9 tab-separated columns, found {}", cols.len()),
                });
            }
            let id: usize = cols[0].parse().map_err(|_| AnnotationError::Syntax {
                line: lineno,
                message: format!("bad token id `{}`", cols[0]),
            })?;
            if id != sent.len() + 1 {
                return Err(AnnotationError::Syntax {
                    line: lineno,
                    message: format!("token id {id} out of sequence"),
                });
            }
            let head: usize = cols[5]
                .parse()
                .map_err(|_| AnnotationError::Syntax { line: lineno, message: format!("bad head `{}`", cols[5]) })?;
            let field = |s: &str| if s == "_" { String::new() } else { s.to_string() };
            let tok = Token {
                form: cols[1].to_string(),
                lemma: field(cols[2]),
                pos: field(cols[3]),
                chunk: field(cols[4]),
                head: None,
                deprel: field(cols[6]),
                main_verb: cols[7] == "Y",
                supersense: if cols[8] == "_" { None } else { Some(cols[8].to_string()) },
                sentence: layer.sentences.len(),
            };
            sent.push((head, tok, lineno));
        }
        layer.flush(&mut sent)?;
        Ok(layer)
    }

    fn flush(&mut self, sent: &mut Vec<(usize, Token, usize)>) -> Result<(), AnnotationError> {
        if sent.is_empty() {
            return Ok(());
        }
        let base = self.tokens.len();
        let n = sent.len();
        let sidx = self.sentences.len();
        for (head, mut tok, line) in sent.drain(..) {
            if head > n {
                return Err(AnnotationError::Syntax {
                    line,
                    message: format!("head {head} outside sentence of {n} tokens"),
                });
            }
            tok.head = if head == 0 { None } else { Some(base + head - 1) };
            tok.sentence = sidx;
            self.tokens.push(tok);
        }
        // Every chain of heads must reach a root.
        for start in base..base + n {
            let mut cur = start;
            let mut steps = 0;
            while let Some(h) = self.tokens[cur].head {
                cur = h;
                steps += 1;
                if steps > n {
                    return Err(AnnotationError::Tree {
                        sentence: sidx,
                        message: format!("dependency cycle through token {}", start - base + 1),
                    });
                }
            }
        }
        self.sentences.push(base..base + n);
        Ok(())
    }

    /// Writes the layer back in sidecar format (without the similarity
    /// table).
    pub fn render(&self) -> String {
        let mut out = String::new();
        for set in &self.coref {
            let _ = writeln!(out, "# coref {}", set.join(" "));
        }
        for range in &self.sentences {
            for i in range.clone() {
                let t = &self.tokens[i];
                let head = t.head.map_or(0, |h| h - range.start + 1);
                let f = |s: &str| if s.is_empty() { "_".to_string() } else { s.to_string() };
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    i - range.start + 1,
                    t.form,
                    f(&t.lemma),
                    f(&t.pos),
                    f(&t.chunk),
                    head,
                    f(&t.deprel),
                    if t.main_verb { "Y" } else { "N" },
                    t.supersense.as_deref().unwrap_or("_")
                );
            }
            out.push('\n');
        }
        out
    }
}

/// One step along a dependency path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub label: String,
    /// True when moving from a dependent to its head.
    pub up: bool,
}

/// Dependency path between two tokens of the same tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepPath {
    pub steps: Vec<PathStep>,
    /// Tokens visited, both endpoints included.
    pub nodes: Vec<usize>,
}

impl DepPath {
    /// Labels joined by `-`, e.g. `LGS-PMOD`.
    pub fn label_string(&self) -> String {
        self.steps.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join("-")
    }

    /// Head-to-dependent path from the first token down to the second.
    pub fn is_downward(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| !s.up)
    }

    pub fn is_upward(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| s.up)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// A document with its annotation layer aligned to the text.
#[derive(Clone, Debug)]
pub struct AnnotatedDocument {
    pub doc: Document,
    pub layer: AnnotationLayer,
    offsets: Vec<Span>,
    entity_tokens: HashMap<String, Vec<usize>>,
    heads: HashMap<String, usize>,
    /// Events and non-DCT timexes by span start.
    ordered_entities: Vec<String>,
    entity_rank: HashMap<String, usize>,
}

/// Aligns the layer's tokens to the document text and indexes entities.
///
/// Tokens are matched against the text in order, skipping whitespace. An
/// entity covers every token its span intersects; its head is the covered
/// token closest to the root, the first such on ties.
pub fn attach_annotations(doc: Document, layer: AnnotationLayer) -> Result<AnnotatedDocument, AlignmentError> {
    let text = doc.text.as_str();
    let mut offsets = Vec::with_capacity(layer.tokens.len());
    let mut pos = 0usize;
    for (i, tok) in layer.tokens.iter().enumerate() {
        while pos < text.len() {
            let c = text[pos..].chars().next().expect("char");
            if !c.is_whitespace() {
                break;
            }
            pos += c.len_utf8();
        }
        if pos >= text.len() {
            return Err(AlignmentError::TokenCount { layer: layer.tokens.len(), document: i });
        }
        if !text[pos..].starts_with(tok.form.as_str()) {
            let found: String = text[pos..].chars().take(tok.form.chars().count().max(1)).collect();
            return Err(AlignmentError::Mismatch { index: i, form: tok.form.clone(), found, offset: pos });
        }
        offsets.push(Span::new(pos, pos + tok.form.len()));
        pos += tok.form.len();
    }
    let leftover = text[pos..].split_whitespace().count();
    if leftover > 0 {
        return Err(AlignmentError::TokenCount { layer: layer.tokens.len(), document: layer.tokens.len() + leftover });
    }

    let depth = |mut t: usize| {
        let mut d = 0;
        while let Some(h) = layer.tokens[t].head {
            t = h;
            d += 1;
        }
        d
    };
    let mut entity_tokens = HashMap::new();
    let mut heads = HashMap::new();
    let mut spans: Vec<(String, Span)> = Vec::new();
    for e in &doc.events {
        spans.push((e.eiid.clone(), e.span));
    }
    for t in &doc.timexes {
        if let Some(s) = t.span {
            spans.push((t.tid.clone(), s));
        }
    }
    if let Some(s) = doc.dct.span {
        spans.push((doc.dct.tid.clone(), s));
    }
    for s in &doc.signals {
        spans.push((s.sid.clone(), s.span));
    }
    for s in &doc.csignals {
        spans.push((s.id.clone(), s.span));
    }
    for (id, span) in &spans {
        let start = offsets.partition_point(|o| o.end <= span.start);
        let toks: Vec<usize> = (start..offsets.len()).take_while(|&i| offsets[i].start < span.end).collect();
        if let Some(&h) = toks.iter().min_by_key(|&&t| depth(t)) {
            heads.insert(id.clone(), h);
        }
        entity_tokens.insert(id.clone(), toks);
    }

    let mut ordered: Vec<(usize, String)> = doc.events.iter().map(|e| (e.span.start, e.eiid.clone())).collect();
    ordered.extend(doc.timexes.iter().filter_map(|t| t.span.map(|s| (s.start, t.tid.clone()))));
    ordered.sort_by_key(|x| x.0);
    let ordered_entities: Vec<String> = ordered.into_iter().map(|x| x.1).collect();
    let entity_rank = ordered_entities.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();

    Ok(AnnotatedDocument { doc, layer, offsets, entity_tokens, heads, ordered_entities, entity_rank })
}

impl AnnotatedDocument {
    pub fn token(&self, i: usize) -> &Token {
        &self.layer.tokens[i]
    }

    pub fn token_span(&self, i: usize) -> Span {
        self.offsets[i]
    }

    pub fn n_tokens(&self) -> usize {
        self.layer.tokens.len()
    }

    /// Head token of an entity or signal.
    pub fn head(&self, id: &str) -> Option<usize> {
        self.heads.get(id).copied()
    }

    /// Tokens an entity or signal covers.
    pub fn tokens_of(&self, id: &str) -> &[usize] {
        self.entity_tokens.get(id).map_or(&[], |v| v.as_slice())
    }

    pub fn sentence_of(&self, id: &str) -> Option<usize> {
        self.head(id).map(|t| self.layer.tokens[t].sentence)
    }

    pub fn kind(&self, id: &str) -> Option<EntityKind> {
        self.doc.entity_kind(id)
    }

    pub fn pos(&self, id: &str) -> Option<&str> {
        self.head(id).map(|t| self.layer.tokens[t].pos.as_str())
    }

    pub fn chunk(&self, id: &str) -> Option<&str> {
        self.head(id).map(|t| self.layer.tokens[t].chunk.as_str())
    }

    pub fn lemma(&self, id: &str) -> Option<&str> {
        self.head(id).map(|t| self.layer.tokens[t].lemma.as_str())
    }

    pub fn is_main_verb(&self, id: &str) -> bool {
        self.head(id).is_some_and(|t| self.layer.tokens[t].main_verb)
    }

    /// Similarity of the head lemmas, `None` when no table is attached or
    /// the pair is missing from it.
    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        let table = self.layer.similarity.as_ref()?;
        table.get(self.lemma(a)?, self.lemma(b)?)
    }

    pub fn coreferent(&self, a: &str, b: &str) -> bool {
        self.layer.coref.iter().any(|set| set.iter().any(|x| x == a) && set.iter().any(|x| x == b))
    }

    /// Entities (events and in-text timexes) in text order.
    pub fn ordered_entities(&self) -> &[String] {
        &self.ordered_entities
    }

    /// Position of an entity in [`Self::ordered_entities`].
    pub fn entity_rank(&self, id: &str) -> Option<usize> {
        self.entity_rank.get(id).copied()
    }

    /// Number of entities strictly between the two.
    pub fn entity_distance(&self, a: &str, b: &str) -> Option<usize> {
        let (x, y) = (self.entity_rank(a)?, self.entity_rank(b)?);
        Some(x.abs_diff(y).saturating_sub(1))
    }

    pub fn sentence_distance(&self, a: &str, b: &str) -> Option<usize> {
        Some(self.sentence_of(a)?.abs_diff(self.sentence_of(b)?))
    }

    pub fn sentence_tokens(&self, s: usize) -> Range<usize> {
        self.layer.sentences[s].clone()
    }

    pub fn n_sentences(&self) -> usize {
        self.layer.sentences.len()
    }

    /// Direct dependents of a token.
    pub fn children(&self, t: usize) -> Vec<usize> {
        let range = self.sentence_tokens(self.layer.tokens[t].sentence);
        range.filter(|&c| self.layer.tokens[c].head == Some(t)).collect()
    }

    /// True when `a` dominates `b` (or they are the same token).
    pub fn dominates(&self, a: usize, b: usize) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.layer.tokens[c].head;
        }
        false
    }

    fn ancestors(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut cur = t;
        while let Some(h) = self.layer.tokens[cur].head {
            out.push(h);
            cur = h;
        }
        out
    }

    /// Path between two tokens through their lowest common ancestor:
    /// dependency labels of the nodes left while climbing from `a`, then of
    /// the nodes entered while descending to `b`.
    pub fn dep_path(&self, a: usize, b: usize) -> Option<DepPath> {
        let up_a = self.ancestors(a);
        let up_b = self.ancestors(b);
        let (ia, ib) = up_a.iter().enumerate().find_map(|(i, x)| up_b.iter().position(|y| y == x).map(|j| (i, j)))?;
        let mut steps = Vec::new();
        let mut nodes = Vec::new();
        for &t in &up_a[..ia] {
            steps.push(PathStep { label: self.layer.tokens[t].deprel.clone(), up: true });
            nodes.push(t);
        }
        nodes.push(up_a[ia]);
        for &t in up_b[..ib].iter().rev() {
            steps.push(PathStep { label: self.layer.tokens[t].deprel.clone(), up: false });
            nodes.push(t);
        }
        Some(DepPath { steps, nodes })
    }

    /// Path between the head tokens of two entities.
    pub fn entity_path(&self, a: &str, b: &str) -> Option<DepPath> {
        self.dep_path(self.head(a)?, self.head(b)?)
    }

    /// Lowercased forms of a token range.
    pub fn lower_forms(&self, range: Range<usize>) -> Vec<String> {
        range.map(|i| self.layer.tokens[i].form.to_lowercase()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeml::parse_timeml;

    const DOC: &str = r#"<TimeML><DOCID>d</DOCID><DCT><TIMEX3 tid="t0" type="DATE" value="2015-12-12" functionInDocument="CREATION_TIME">2015-12-12</TIMEX3></DCT>
<TEXT>John <EVENT eid="e1" class="OCCURRENCE">arrived</EVENT> on <TIMEX3 tid="t1" type="DATE" value="2015-12-08">Tuesday</TIMEX3>.</TEXT>
<MAKEINSTANCE eventID="e1" eiid="ei1" tense="PAST" aspect="NONE" polarity="POS" pos="VERB"/>
</TimeML>"#;

    const SIDE: &str = "1\tJohn\tjohn\tNNP\tB-NP\t2\tSBJ\tN\t_\n2\tarrived\tarrive\tVBD\tB-VP\t0\tROOT\tY\t_\n3\ton\ton\tIN\tB-PP\t2\tTMP\tN\t_\n4\tTuesday\ttuesday\tNNP\tB-NP\t3\tPMOD\tN\t_\n5\t.\t.\t.\tO\t2\tP\tN\t_\n";

    #[test]
    fn aligned_layer_gives_paths() {
        let doc = parse_timeml(DOC).unwrap();
        let layer = AnnotationLayer::parse(SIDE).unwrap();
        let ad = attach_annotations(doc, layer).unwrap();
        let p = ad.entity_path("ei1", "t1").unwrap();
        assert_eq!(p.label_string(), "TMP-PMOD");
        assert!(p.is_downward());
        assert_eq!(ad.token(p.nodes[1]).form, "on");
        let back = ad.entity_path("t1", "ei1").unwrap();
        assert!(back.is_upward());
        assert!(ad.is_main_verb("ei1"));
        assert_eq!(ad.similarity("ei1", "t1"), None);
        assert_eq!(ad.pos("ei1"), Some("VBD"));
    }

    #[test]
    fn count_mismatch_reports_both_counts() {
        let doc = parse_timeml(DOC).unwrap();
        let short: String = SIDE.lines().take(4).map(|l| format!("{l}\n")).collect();
        let err = attach_annotations(doc.clone(), AnnotationLayer::parse(&short).unwrap()).unwrap_err();
        assert_eq!(err, AlignmentError::TokenCount { layer: 4, document: 5 });
        let long = format!("{SIDE}6\textra\textra\tNN\tO\t2\tP\tN\t_\n");
        let err = attach_annotations(doc, AnnotationLayer::parse(&long).unwrap()).unwrap_err();
        assert_eq!(err, AlignmentError::TokenCount { layer: 6, document: 5 });
    }

    #[test]
    fn render_roundtrip_and_cycle_rejection() {
        let layer = AnnotationLayer::parse(&format!("# coref ei1 ei2\n{SIDE}")).unwrap();
        assert_eq!(AnnotationLayer::parse(&layer.render()).unwrap(), layer);
        let cyc = "1\ta\ta\tX\tO\t2\tX\tN\t_\n2\tb\tb\tX\tO\t1\tX\tN\t_\n";
        assert!(matches!(AnnotationLayer::parse(cyc), Err(AnnotationError::Tree { .. })));
    }

    #[test]
    fn similarity_is_symmetric() {
        let t = SimilarityTable::parse("attack\tbomb\t0.3\n").unwrap();
        assert_eq!(t.get("bomb", "attack"), Some(0.3));
        assert_eq!(t.get("bomb", "war"), None);
    }
}
