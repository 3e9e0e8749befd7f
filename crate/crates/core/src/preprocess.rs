//! Removal of cliques that share no edge with the rest of the graph.
//!
//! A vertex `v` whose incident edges all carry one weight `w`, and whose closed
//! neighbourhood `C = N[v]` is a clique with every internal edge of weight `w`,
//! identifies a candidate clique. Dropping `C` and decrementing the budget is
//! only safe when no clique of a solution can cover an edge of `C` while also
//! reaching outside `C`, so a candidate is accepted when
//!
//! * no edge of `C` has a common neighbour outside `C`, or
//! * exactly one edge `ab` of `C` has outside common neighbours, and that is a
//!   single unannotated vertex `x` (the only clique that can leak is then
//!   `{a, b, x}`, and swapping it for `{a, x}`, `{b, x}` is paid for by the
//!   cliques through `v` that it forces).
//!
//! The weaker test "neighbourhood is a uniform clique" alone is not sound: a
//! weight-2 triangle `{v, a, b}` with two weight-1 triangles hanging off `ab`
//! needs 4 cliques, but removing the triangle leaves a 4-cycle needing 4 more.
//!
//! Annotated vertices are never part of a removed clique.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::model::{AnnotatedGraph, Clique, Decomposition};
use crate::scalar::Scalar;

/// Reduced graph plus what was taken out of it.
#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessResult<S> {
    /// The remaining graph, restricted to vertices that still carry a
    /// constraint.
    pub reduced: AnnotatedGraph<S>,
    /// `origin[i]` is the original index of reduced vertex `i`.
    pub origin: Vec<usize>,
    /// Removed cliques, in original vertex indices, in removal order.
    pub removed: Decomposition<S>,
    pub k_reduced: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Preprocessed<S> {
    Reduced(PreprocessResult<S>),
    /// More separable cliques than the budget allows.
    No,
}

impl<S> Preprocessed<S> {
    pub fn reduced(self) -> Option<PreprocessResult<S>> {
        match self {
            Preprocessed::Reduced(r) => Some(r),
            Preprocessed::No => None,
        }
    }
}

struct Work<'a, S> {
    g: &'a AnnotatedGraph<S>,
    adj: Vec<BTreeMap<usize, S>>,
    eps: f64,
}

impl<S: Scalar> Work<'_, S> {
    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains_key(&b)
    }

    fn candidate(&self, v: usize) -> Option<Vec<usize>> {
        let ann = self.g.annotated();
        if ann.contains_key(&v) {
            return None;
        }
        let nbrs = &self.adj[v];
        let (_, w) = nbrs.iter().next()?;
        if !nbrs.values().all(|x| x.close(w, self.eps)) {
            return None;
        }
        let members: Vec<usize> = nbrs.keys().copied().collect();
        if members.iter().any(|u| ann.contains_key(u)) {
            return None;
        }
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                match self.adj[a].get(&b) {
                    Some(x) if x.close(w, self.eps) => {}
                    _ => return None,
                }
            }
        }
        let mut clique: BTreeSet<usize> = members.iter().copied().collect();
        clique.insert(v);

        let mut leaking_edges = 0usize;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let outside: Vec<usize> = self.adj[a]
                    .keys()
                    .copied()
                    .filter(|x| !clique.contains(x) && self.has_edge(b, *x))
                    .collect();
                if outside.is_empty() {
                    continue;
                }
                leaking_edges += 1;
                if leaking_edges > 1 || outside.len() > 1 || ann.contains_key(&outside[0]) {
                    return None;
                }
            }
        }
        Some(clique.into_iter().collect())
    }

    fn remove(&mut self, clique: &[usize]) {
        for (i, &a) in clique.iter().enumerate() {
            for &b in &clique[i + 1..] {
                self.adj[a].remove(&b);
                self.adj[b].remove(&a);
            }
        }
    }
}

/// Strips separable cliques, scanning vertices in ascending order and
/// restarting after every removal. Returns [`Preprocessed::No`] as soon as the
/// removals exceed `k`.
pub fn preprocess<S: Scalar>(g: &AnnotatedGraph<S>, k: usize) -> Preprocessed<S> {
    let eps = g.eps();
    let adj = g
        .adjacency()
        .into_iter()
        .map(|list| list.into_iter().collect::<BTreeMap<_, _>>())
        .collect();
    let mut work = Work { g, adj, eps };
    let mut removed: Vec<Clique<S>> = Vec::new();
    let mut removed_edges: BTreeSet<(usize, usize)> = BTreeSet::new();

    'scan: loop {
        for v in 0..g.n() {
            if let Some(clique) = work.candidate(v) {
                let w = work.adj[v].values().next().cloned().unwrap_or_else(S::zero);
                work.remove(&clique);
                for (i, &a) in clique.iter().enumerate() {
                    for &b in &clique[i + 1..] {
                        removed_edges.insert((a, b));
                    }
                }
                removed.push(Clique::new(clique, w));
                if removed.len() > k {
                    return Preprocessed::No;
                }
                continue 'scan;
            }
        }
        break;
    }

    let keep: Vec<usize> = (0..g.n())
        .filter(|&v| !work.adj[v].is_empty() || g.annotated().contains_key(&v))
        .collect();
    let reduced = g.induced(&keep, &|a, b| removed_edges.contains(&(a.min(b), a.max(b))));
    Preprocessed::Reduced(PreprocessResult {
        reduced,
        origin: keep,
        k_reduced: k - removed.len(),
        removed: Decomposition::new(removed),
    })
}

/// Lifts a decomposition of the reduced graph back to original indices and
/// adds the removed cliques.
pub fn reassemble<S: Scalar>(result: &PreprocessResult<S>, sub: &Decomposition<S>) -> Decomposition<S> {
    let mut out = sub.map_vertices(&result.origin);
    out.cliques.extend(result.removed.cliques.iter().cloned());
    out
}
