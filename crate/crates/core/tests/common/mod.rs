//! Shared generators and oracles for the integration tests.
#![allow(dead_code)]

use chronorel::allen::BaseRelation;
use chronorel::synth::{tok, DocBuilder};
use chronorel::timeml::{Aspect, EventClass, Tense};
use chronorel::{Document, MappingProfile, RelationSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Base relation of two intervals read off their endpoints.
pub fn allen_of(x: (i32, i32), y: (i32, i32)) -> BaseRelation {
    use std::cmp::Ordering::*;
    use BaseRelation::*;
    let (xs, xe, ys, ye) = (x.0, x.1, y.0, y.1);
    assert!(xs < xe && ys < ye);
    if xe < ys {
        return Before;
    }
    if ye < xs {
        return After;
    }
    if xe == ys {
        return Meets;
    }
    if ye == xs {
        return MetBy;
    }
    match (xs.cmp(&ys), xe.cmp(&ye)) {
        (Equal, Equal) => Equals,
        (Equal, Less) => Starts,
        (Equal, Greater) => StartedBy,
        (Greater, Equal) => Finishes,
        (Less, Equal) => FinishedBy,
        (Greater, Less) => During,
        (Less, Greater) => Contains,
        (Less, Less) => Overlaps,
        (Greater, Greater) => OverlappedBy,
    }
}

/// Every interval with integer endpoints in `0..=max`.
pub fn intervals(max: i32) -> Vec<(i32, i32)> {
    let mut out = Vec::new();
    for s in 0..=max {
        for e in s + 1..=max {
            out.push((s, e));
        }
    }
    out
}

/// Composition table re-derived from endpoint orderings.
pub fn oracle_composition() -> [[RelationSet; 13]; 13] {
    let mut t = [[RelationSet::EMPTY; 13]; 13];
    let iv = intervals(5);
    for &x in &iv {
        for &y in &iv {
            let rxy = allen_of(x, y);
            for &z in &iv {
                let ryz = allen_of(y, z);
                let cell = &mut t[rxy as usize][ryz as usize];
                *cell = *cell | RelationSet::single(allen_of(x, z));
            }
        }
    }
    t
}

/// A document of `n` events whose TLINKs are read off random intervals, so
/// it is consistent by construction. Pairs whose relation has no label
/// under the strict profile are skipped.
pub fn random_consistent_doc<R: Rng>(rng: &mut R, n: usize, links: usize) -> Document {
    let strict = MappingProfile::strict();
    let spans: Vec<(i32, i32)> = (0..n)
        .map(|_| {
            let s = rng.gen_range(0..12);
            (s, s + rng.gen_range(1..6))
        })
        .collect();
    let mut b = DocBuilder::new("rand", "2020-01-01");
    let toks = (0..n)
        .map(|i| {
            let w = format!("w{i}");
            tok(&w, &w, "VBD", if i == 0 { 0 } else { 1 }, "DEP").event(
                EventClass::Occurrence,
                Tense::Past,
                Aspect::None,
            )
        })
        .collect();
    b.sentence(toks);
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let mut used = std::collections::HashSet::new();
    let mut added = 0;
    for (i, j) in pairs {
        if added == links {
            break;
        }
        if !used.insert((i.min(j), i.max(j))) {
            continue;
        }
        let r = allen_of(spans[i], spans[j]);
        if let Some(label) = strict.unmap(RelationSet::single(r)) {
            b.tlink(&format!("ei{}", i + 1), &format!("ei{}", j + 1), label);
            added += 1;
        }
    }
    b.parts().0
}

/// A single-sentence document with one event per word and the given links.
pub fn event_doc(words: &[&str], links: &[(&str, &str, chronorel::TLinkLabel)]) -> Document {
    let mut b = DocBuilder::new("d", "2020-01-01");
    b.sentence(
        words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                tok(w, w, "VBD", if i == 0 { 0 } else { 1 }, "DEP").event(
                    EventClass::Occurrence,
                    Tense::Past,
                    Aspect::None,
                )
            })
            .collect(),
    );
    for (s, t, l) in links {
        b.tlink(s, t, *l);
    }
    b.parts().0
}
