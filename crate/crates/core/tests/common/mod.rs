#![allow(dead_code)]

use std::collections::BTreeMap;

use cliqdecomp_core::{AnnotatedGraph, Clique, Decomposition, Rational, Scalar};
use proptest::prelude::*;

pub fn r(v: i64) -> Rational {
    Rational::from_int(v)
}

/// Graph whose edge weights are the sums of the given cliques, with one edge
/// optionally nudged by `delta` (clamped at zero) to produce no-instances.
pub fn graph_from(n: usize, cliques: &[(u32, i64)], nudge: Option<(usize, usize, i64)>) -> AnnotatedGraph<Rational> {
    let mut w: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for &(mask, weight) in cliques {
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                *w.entry((u, v)).or_insert(0) += weight;
            }
        }
    }
    if let Some((u, v, d)) = nudge {
        let (u, v) = (u % n, v % n);
        if u != v {
            let e = w.entry((u.min(v), u.max(v))).or_insert(0);
            *e = (*e + d).max(0);
        }
    }
    let edges = w.into_iter().filter(|&(_, x)| x > 0).map(|((u, v), x)| (u, v, r(x))).collect();
    AnnotatedGraph::new(n, edges, BTreeMap::new()).unwrap()
}

pub fn decomposition(n: usize, cliques: &[(u32, i64)]) -> Decomposition<Rational> {
    Decomposition::new(
        cliques
            .iter()
            .map(|&(mask, w)| Clique::new((0..n).filter(|&v| mask >> v & 1 == 1).collect(), r(w)))
            .filter(|c| !c.vertices.is_empty())
            .collect(),
    )
}

#[derive(Debug, Clone)]
pub struct Small {
    pub n: usize,
    pub cliques: Vec<(u32, i64)>,
    pub nudge: Option<(usize, usize, i64)>,
    pub k: usize,
}

impl Small {
    pub fn graph(&self) -> AnnotatedGraph<Rational> {
        graph_from(self.n, &self.cliques, self.nudge)
    }
}

/// Planted graphs on up to `max_n` vertices from up to four cliques of weight
/// at most `max_w`, sometimes perturbed, with a budget in `1..=max_k`.
pub fn small(max_n: usize, max_k: usize, max_w: i64) -> impl Strategy<Value = Small> {
    (2..=max_n).prop_flat_map(move |n| {
        let clique = ((1u32..(1 << n)), 1..=max_w);
        (
            Just(n),
            prop::collection::vec(clique, 1..=4),
            prop::option::weighted(0.3, (0..n, 0..n, prop_oneof![Just(-1i64), Just(1i64)])),
            1..=max_k,
        )
            .prop_map(|(n, cliques, nudge, k)| Small { n, cliques, nudge, k })
    })
}

/// `(B, W)` with column `q` the indicator of clique `q`.
pub fn planted_bw(
    n: usize,
    d: &Decomposition<Rational>,
) -> (cliqdecomp_core::PartialAssignment, cliqdecomp_core::DiagonalWeights<Rational>) {
    let mut rows = vec![0u64; n];
    for (q, c) in d.cliques.iter().enumerate() {
        for &v in &c.vertices {
            rows[v] |= 1 << q;
        }
    }
    let w = d.cliques.iter().map(|c| c.weight).collect();
    (cliqdecomp_core::PartialAssignment::from_masks(d.len(), rows), cliqdecomp_core::DiagonalWeights::full(w))
}

impl Small {
    /// Like [`Small::graph`], but vertices in `mask` carry their planted
    /// diagonal (the summed weight of the cliques through them).
    pub fn annotated(&self, mask: u32) -> AnnotatedGraph<Rational> {
        let g = self.graph();
        let mut ann = BTreeMap::new();
        for v in 0..self.n {
            if mask >> v & 1 == 1 {
                let d: i64 = self.cliques.iter().filter(|(m, _)| m >> v & 1 == 1).map(|(_, w)| w).sum();
                ann.insert(v, r(d));
            }
        }
        AnnotatedGraph::new(self.n, g.edges().to_vec(), ann).unwrap()
    }
}
