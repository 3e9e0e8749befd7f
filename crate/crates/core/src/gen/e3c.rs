//! Exact 3-cover instances and their unit-weight clique decomposition
//! gadget.
//!
//! Each element `u` becomes an edge `u u'`. Each set `{u, v, w}` (sorted)
//! becomes a triangle `a b c` wired as `a-u, u-b, a-v, c-v, b-w, w-c` and
//! `a-u', c-v', b-w'`. With budget `6m + q` the graph decomposes iff the sets
//! contain an exact cover.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{prov, PlantedInstance};
use crate::error::{Error, Result};
use crate::model::{AnnotatedGraph, Clique, Decomposition};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E3CInstance {
    q: usize,
    sets: Vec<[usize; 3]>,
}

impl E3CInstance {
    /// Universe `0..3q`; every set needs three distinct elements of it.
    pub fn new(q: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        let mut norm = Vec::with_capacity(sets.len());
        for s in sets {
            let mut s = s;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::Generator(format!("set {s:?} has repeated elements")));
            }
            if s[2] >= 3 * q {
                return Err(Error::Generator(format!("set {s:?} leaves the universe 0..{}", 3 * q)));
            }
            norm.push(s);
        }
        Ok(E3CInstance { q, sets: norm })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    pub fn budget(&self) -> usize {
        6 * self.sets.len() + self.q
    }

    fn element(&self, u: usize) -> usize {
        u
    }

    fn prime(&self, u: usize) -> usize {
        3 * self.q + u
    }

    /// `(a, b, c)` of set `i`.
    fn gadget(&self, i: usize) -> (usize, usize, usize) {
        let base = 6 * self.q + 3 * i;
        (base, base + 1, base + 2)
    }

    fn labels(&self) -> Vec<String> {
        let mut l: Vec<String> = (0..3 * self.q).map(|u| format!("e{u}")).collect();
        l.extend((0..3 * self.q).map(|u| format!("e{u}'")));
        for i in 0..self.sets.len() {
            l.extend(["a", "b", "c"].iter().map(|x| format!("{x}{i}")));
        }
        l
    }
}

/// Random instance with `m` sets. With `plant` the first `q` sets (before
/// shuffling) form an exact cover.
pub fn random_e3c<R: Rng + ?Sized>(q: usize, m: usize, plant: bool, rng: &mut R) -> Result<E3CInstance> {
    if q == 0 || (plant && m < q) {
        return Err(Error::Generator("need q >= 1 and, when planting, m >= q".into()));
    }
    let mut sets = Vec::with_capacity(m);
    if plant {
        let mut u: Vec<usize> = (0..3 * q).collect();
        u.shuffle(rng);
        sets.extend(u.chunks(3).map(|c| [c[0], c[1], c[2]]));
    }
    while sets.len() < m {
        let s = rand::seq::index::sample(rng, 3 * q, 3).into_vec();
        sets.push([s[0], s[1], s[2]]);
    }
    sets.shuffle(rng);
    E3CInstance::new(q, sets)
}

/// Unit-weight gadget graph with budget `6m + q`.
pub fn gen_e3c(e: &E3CInstance) -> Result<(AnnotatedGraph<Rational>, usize)> {
    let one = Rational::from_integer(1);
    let mut edges = Vec::new();
    for u in 0..3 * e.q {
        edges.push((e.element(u), e.prime(u), one));
    }
    for (i, &[u, v, w]) in e.sets.iter().enumerate() {
        let (a, b, c) = e.gadget(i);
        for (x, y) in [
            (a, b),
            (b, c),
            (a, c),
            (a, u),
            (u, b),
            (a, v),
            (c, v),
            (b, w),
            (w, c),
            (a, e.prime(u)),
            (c, e.prime(v)),
            (b, e.prime(w)),
        ] {
            edges.push((x, y, one));
        }
    }
    edges.sort_unstable_by_key(|&(x, y, _)| (x.min(y), x.max(y)));
    let g = AnnotatedGraph::with_labels(e.labels(), edges, Default::default(), crate::DEFAULT_EPS)?;
    Ok((g, e.budget()))
}

/// Indices of `q` pairwise disjoint sets covering the universe, if any.
pub fn exact_cover(e: &E3CInstance) -> Option<Vec<usize>> {
    fn go(e: &E3CInstance, covered: u64, chosen: &mut Vec<usize>) -> bool {
        let full = (1u64 << (3 * e.q)) - 1;
        if covered == full {
            return true;
        }
        let first = (!covered).trailing_zeros() as usize;
        for (i, s) in e.sets.iter().enumerate() {
            let mask = s.iter().fold(0u64, |m, &x| m | 1 << x);
            if s.contains(&first) && mask & covered == 0 {
                chosen.push(i);
                if go(e, covered | mask, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    go(e, 0, &mut chosen).then_some(chosen)
}

/// The `6m + q` unit cliques built from a cover: seven for each covering set,
/// six for every other set.
pub fn e3c_witness(e: &E3CInstance, cover: &[usize]) -> Decomposition<Rational> {
    let one = Rational::from_integer(1);
    let mut cliques = Vec::new();
    for (i, &[u, v, w]) in e.sets.iter().enumerate() {
        let (a, b, c) = e.gadget(i);
        let sets: Vec<Vec<usize>> = if cover.contains(&i) {
            vec![
                vec![u, e.prime(u), a],
                vec![v, e.prime(v), c],
                vec![w, e.prime(w), b],
                vec![a, b, c],
                vec![u, b],
                vec![v, a],
                vec![w, c],
            ]
        } else {
            vec![vec![u, a, b], vec![v, a, c], vec![w, c, b], vec![e.prime(u), a], vec![e.prime(v), c], vec![e.prime(w), b]]
        };
        cliques.extend(sets.into_iter().map(|s| Clique::new(s, one)));
    }
    Decomposition::new(cliques)
}

impl E3CInstance {
    /// The gadget as a planted instance, when a cover exists.
    pub fn planted(&self) -> Result<Option<PlantedInstance>> {
        let Some(cover) = exact_cover(self) else { return Ok(None) };
        let w = e3c_witness(self, &cover);
        let p = PlantedInstance::from_cliques(
            self.labels(),
            w.cliques,
            prov(&[("model", "e3c".to_string()), ("q", self.q.to_string()), ("m", self.sets.len().to_string())]),
        )?;
        Ok(Some(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::rng;
    use crate::model::verify_decomposition;

    #[test]
    fn single_set() {
        let e = E3CInstance::new(1, vec![[2, 0, 1]]).unwrap();
        assert_eq!(e.sets(), &[[0, 1, 2]]);
        let (g, k) = gen_e3c(&e).unwrap();
        assert_eq!(k, 7);
        assert_eq!(g.n(), 9);
        assert_eq!(g.edges().len(), 15);
        let cover = exact_cover(&e).unwrap();
        let w = e3c_witness(&e, &cover);
        assert_eq!(w.len(), 7);
        assert!(verify_decomposition(&g, &w));
        assert_eq!(e.planted().unwrap().unwrap().graph, g);
    }

    #[test]
    fn validation() {
        assert!(E3CInstance::new(1, vec![[0, 1, 1]]).is_err());
        assert!(E3CInstance::new(1, vec![[0, 1, 3]]).is_err());
    }

    #[test]
    fn witnesses_verify_and_cover_search() {
        let mut r = rng(4);
        for _ in 0..30 {
            let e = random_e3c(2, 4, true, &mut r).unwrap();
            let cover = exact_cover(&e).expect("planted cover");
            let (g, k) = gen_e3c(&e).unwrap();
            let w = e3c_witness(&e, &cover);
            assert_eq!(w.len(), k);
            assert!(verify_decomposition(&g, &w));
        }
        let no = E3CInstance::new(2, vec![[0, 1, 2], [2, 3, 4], [1, 3, 5]]).unwrap();
        assert_eq!(exact_cover(&no), None);
    }
}
