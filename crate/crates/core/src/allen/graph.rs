//! Qualitative constraint network over interval nodes.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use super::RelationSet;

/// Three node ids whose constraints could not be satisfied together. The
/// first pair is the edge that emptied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle(pub String, pub String, pub String);

impl std::fmt::Display for Triangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.0, self.1, self.2)
    }
}

/// Nodes plus a dense relation matrix. Unconstrained pairs hold the full
/// set, the diagonal holds `{=}`, and `rel(j, i)` is always the converse of
/// `rel(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    rel: Vec<RelationSet>,
    asserted: Vec<(usize, usize)>,
}

/// Result of closing a graph under path consistency.
#[derive(Clone, Debug)]
pub struct PcOutcome {
    pub consistent: bool,
    /// The closed graph on success; on failure the partially propagated
    /// network at the point the empty edge appeared.
    pub closure: TemporalGraph,
    pub culprit: Option<Triangle>,
}

impl Default for TemporalGraph {
    fn default() -> Self {
        TemporalGraph::new()
    }
}

impl TemporalGraph {
    pub fn new() -> TemporalGraph {
        TemporalGraph { nodes: Vec::new(), index: HashMap::new(), rel: Vec::new(), asserted: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Adds a node if absent and returns its index.
    pub fn add_node(&mut self, id: &str) -> usize {
        if let Some(i) = self.index.get(id) {
            return *i;
        }
        let n = self.nodes.len();
        let mut rel = vec![RelationSet::FULL; (n + 1) * (n + 1)];
        for i in 0..n {
            for j in 0..n {
                rel[i * (n + 1) + j] = self.rel[i * n + j];
            }
        }
        rel[n * (n + 1) + n] = RelationSet::EQUALS;
        self.rel = rel;
        self.nodes.push(id.to_string());
        self.index.insert(id.to_string(), n);
        n
    }

    #[inline]
    pub fn rel(&self, i: usize, j: usize) -> RelationSet {
        self.rel[i * self.nodes.len() + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, r: RelationSet) {
        let n = self.nodes.len();
        self.rel[i * n + j] = r;
        self.rel[j * n + i] = r.converse();
    }

    /// Relation between two named nodes, `None` if either is missing.
    pub fn relation(&self, a: &str, b: &str) -> Option<RelationSet> {
        Some(self.rel(self.node_index(a)?, self.node_index(b)?))
    }

    /// Intersects the stored constraint on (a, b) with `r`, adding nodes as
    /// needed, and records the pair as asserted.
    pub fn constrain(&mut self, a: &str, b: &str, r: RelationSet) {
        let i = self.add_node(a);
        let j = self.add_node(b);
        self.constrain_idx(i, j, r);
    }

    pub fn constrain_idx(&mut self, i: usize, j: usize, r: RelationSet) {
        let cur = self.rel(i, j);
        self.set(i, j, cur & r);
        if i != j && !self.asserted.iter().any(|&(x, y)| (x, y) == (i, j) || (x, y) == (j, i)) {
            self.asserted.push((i, j));
        }
    }

    /// Asserted edges in insertion order.
    pub fn asserted_edges(&self) -> &[(usize, usize)] {
        &self.asserted
    }

    pub fn is_asserted(&self, i: usize, j: usize) -> bool {
        self.asserted.iter().any(|&(x, y)| (x, y) == (i, j) || (x, y) == (j, i))
    }

    /// True for pairs that carry information only because of propagation.
    pub fn is_deduced(&self, i: usize, j: usize) -> bool {
        i != j && !self.is_asserted(i, j) && !self.rel(i, j).is_full()
    }

    /// Copy of this graph keeping only the listed asserted edges, with their
    /// current relation sets.
    fn restricted_to(&self, edges: &[(usize, usize)]) -> TemporalGraph {
        let n = self.nodes.len();
        let mut g = TemporalGraph {
            nodes: self.nodes.clone(),
            index: self.index.clone(),
            rel: vec![RelationSet::FULL; n * n],
            asserted: Vec::new(),
        };
        for i in 0..n {
            g.rel[i * n + i] = RelationSet::EQUALS;
        }
        for &(i, j) in edges {
            g.constrain_idx(i, j, self.rel(i, j));
        }
        g
    }

    /// Closes the network under path consistency:
    /// `R(i,j) ← R(i,j) ∩ R(i,k)∘R(k,j)` until nothing changes.
    pub fn path_consistency(&self) -> PcOutcome {
        let mut g = self.clone();
        match propagate(&mut g, None) {
            Propagation::Empty(a, b, c) => failure(g, a, b, c),
            _ => PcOutcome { consistent: true, closure: g, culprit: None },
        }
    }

    /// Size of the largest connected component, counting an edge wherever
    /// the relation is not the full set.
    pub fn smcc(&self) -> usize {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if !self.rel(i, j).is_full() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut sizes = vec![0usize; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            sizes[r] += 1;
        }
        sizes.into_iter().max().unwrap_or(0)
    }

    /// Drops asserted edges, in insertion order, whenever the closure of
    /// the remaining edges already pins that pair to the same set as the
    /// closure of the whole graph. Returns `None` for inconsistent input.
    ///
    /// The result is one admissible reduction, not necessarily a minimum
    /// one.
    pub fn reduce(&self) -> Option<TemporalGraph> {
        let full = self.path_consistency();
        if !full.consistent {
            return None;
        }
        let target = &full.closure;
        let n = self.nodes.len();
        let mut kept = vec![false; n * n];
        for &(i, j) in &self.asserted {
            kept[i * n + j] = true;
            kept[j * n + i] = true;
        }
        let mut keep: Vec<(usize, usize)> = self.asserted.clone();
        let mut idx = 0;
        while idx < keep.len() {
            let (i, j) = keep[idx];
            let want = target.rel(i, j);
            kept[i * n + j] = false;
            kept[j * n + i] = false;
            // Two kept edges through a third node may already pin the pair.
            let mut via = RelationSet::FULL;
            for k in 0..n {
                if k != i && k != j && kept[i * n + k] && kept[k * n + j] {
                    via = via & self.rel(i, k).compose(self.rel(k, j));
                }
            }
            let redundant = via.is_subset(want) || {
                let mut rest = keep.clone();
                rest.remove(idx);
                let mut sub = self.restricted_to(&rest);
                match propagate(&mut sub, Some((i, j, want))) {
                    Propagation::Goal => true,
                    Propagation::Fixpoint => sub.rel(i, j) == want,
                    Propagation::Empty(..) => false,
                }
            };
            if redundant {
                keep.remove(idx);
            } else {
                kept[i * n + j] = true;
                kept[j * n + i] = true;
                idx += 1;
            }
        }
        Some(self.restricted_to(&keep))
    }

    /// Reduction of the closure rather than of the asserted edges: every
    /// informative pair `i < j` of the closure, in node order, goes through
    /// [`reduce`](Self::reduce). Graphs over the same nodes with the same
    /// closure therefore reduce to the same edges.
    pub fn canonical_reduction(&self) -> Option<TemporalGraph> {
        let pc = self.path_consistency();
        if !pc.consistent {
            return None;
        }
        let c = pc.closure;
        let n = c.len();
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !c.rel(i, j).is_full()).collect();
        c.restricted_to(&edges).reduce()
    }

    /// One line per informative ordered pair `i < j`: `a<TAB>b<TAB>{...}`,
    /// with deduced pairs marked by a trailing `*`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let n = self.nodes.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let r = self.rel(i, j);
                if r.is_full() {
                    continue;
                }
                let mark = if self.is_asserted(i, j) { "" } else { "\t*" };
                let _ = writeln!(out, "{}\t{}\t{}{}", self.nodes[i], self.nodes[j], r, mark);
            }
        }
        out
    }
}

fn failure(g: TemporalGraph, i: usize, j: usize, k: usize) -> PcOutcome {
    let culprit = Triangle(g.nodes[i].clone(), g.nodes[j].clone(), g.nodes[k].clone());
    PcOutcome { consistent: false, closure: g, culprit: Some(culprit) }
}

enum Propagation {
    Fixpoint,
    /// The goal pair reached its target set before the fixpoint.
    Goal,
    /// `(a, b)` emptied while composing through `c`.
    Empty(usize, usize, usize),
}

/// PC-2 over `g` in place. With a goal `(i, j, want)`, stops as soon as
/// `R(i,j) ⊆ want`.
fn propagate(g: &mut TemporalGraph, goal: Option<(usize, usize, RelationSet)>) -> Propagation {
    let n = g.nodes.len();
    for i in 0..n {
        for j in 0..n {
            if g.rel(i, j).is_empty() {
                return Propagation::Empty(i, j, if i == j { i } else { j });
            }
        }
    }
    let reached = |g: &TemporalGraph| goal.is_some_and(|(i, j, want)| g.rel(i, j).is_subset(want));
    if reached(g) {
        return Propagation::Goal;
    }
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut queued = vec![false; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            if !g.rel(i, j).is_full() {
                queue.push_back((i, j));
                queued[i * n + j] = true;
            }
        }
    }
    let push = |q: &mut VecDeque<(usize, usize)>, queued: &mut Vec<bool>, a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        if !queued[a * n + b] {
            queued[a * n + b] = true;
            q.push_back((a, b));
        }
    };
    while let Some((i, j)) = queue.pop_front() {
        queued[i * n + j] = false;
        let rij = g.rel(i, j);
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            // (i, k) through j
            let rjk = g.rel(j, k);
            if !rjk.is_full() {
                let old = g.rel(i, k);
                let new = old & rij.compose(rjk);
                if new != old {
                    g.set(i, k, new);
                    if new.is_empty() {
                        return Propagation::Empty(i, k, j);
                    }
                    if reached(g) {
                        return Propagation::Goal;
                    }
                    push(&mut queue, &mut queued, i, k);
                }
            }
            // (k, j) through i
            let rki = g.rel(k, i);
            if !rki.is_full() {
                let old = g.rel(k, j);
                let new = old & rki.compose(rij);
                if new != old {
                    g.set(k, j, new);
                    if new.is_empty() {
                        return Propagation::Empty(k, j, i);
                    }
                    if reached(g) {
                        return Propagation::Goal;
                    }
                    push(&mut queue, &mut queued, k, j);
                }
            }
        }
    }
    Propagation::Fixpoint
}

#[cfg(test)]
mod tests {
    use super::super::BaseRelation::*;
    use super::*;

    fn before() -> RelationSet {
        RelationSet::single(Before)
    }

    #[test]
    fn single_edge_closure() {
        let mut g = TemporalGraph::new();
        g.constrain("a", "b", before());
        let out = g.path_consistency();
        assert!(out.consistent);
        assert_eq!(out.closure.relation("b", "a"), Some(RelationSet::single(After)));
        assert_eq!(out.closure, g);
    }

    #[test]
    fn chain_deduces_transitive_edge() {
        let mut g = TemporalGraph::new();
        g.constrain("a", "b", before());
        g.constrain("b", "c", before());
        let c = g.path_consistency().closure;
        assert_eq!(c.relation("a", "c"), Some(before()));
        let ia = c.node_index("a").unwrap();
        let ic = c.node_index("c").unwrap();
        assert!(c.is_deduced(ia, ic));
    }

    #[test]
    fn two_cycle_is_inconsistent() {
        let mut g = TemporalGraph::new();
        g.constrain("a", "b", before());
        g.constrain("b", "a", before());
        let out = g.path_consistency();
        assert!(!out.consistent);
        assert!(out.culprit.is_some());
    }

    #[test]
    fn reduce_drops_transitive_edge() {
        let mut g = TemporalGraph::new();
        g.constrain("a", "b", before());
        g.constrain("b", "c", before());
        g.constrain("a", "c", before());
        let r = g.reduce().unwrap();
        assert_eq!(r.asserted_edges().len(), 2);
        let r2 = r.reduce().unwrap();
        assert_eq!(r2, r);
    }

    #[test]
    fn smcc_counts() {
        let mut g = TemporalGraph::new();
        assert_eq!(g.smcc(), 0);
        g.constrain("a", "b", before());
        g.constrain("c", "d", before());
        assert_eq!(g.smcc(), 2);
        g.constrain("b", "c", before());
        g.constrain("d", "e", before());
        assert_eq!(g.smcc(), 5);
    }

    #[test]
    fn edge_list_marks_deduced() {
        let mut g = TemporalGraph::new();
        g.constrain("a", "b", before());
        g.constrain("b", "c", before());
        let text = g.path_consistency().closure.to_edge_list();
        assert!(text.contains("a\tc\t{<}\t*"));
        assert!(text.contains("a\tb\t{<}\n"));
    }
}
