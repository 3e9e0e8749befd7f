//! Brute-force decision procedure for tiny instances, written independently
//! of the search and the simplex so the solvers can be checked against it.
//!
//! Rows of `B` are enumerated one vertex at a time with columns kept sorted
//! (solutions are closed under column permutation). Only matrices whose
//! non-empty columns can all carry positive weight are visited: zero entries
//! of `A` force disjoint rows, positive ones force overlapping rows. After
//! each row the equality system on the rows so far must stay feasible, which
//! is checked by enumerating basic solutions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{DiagonalWeights, Entry, Instance, PartialAssignment};
use crate::scalar::Scalar;

pub const MAX_ORACLE_N: usize = 12;
pub const MAX_ORACLE_K: usize = 4;

/// Solves `{M x = b, x >= 0}` by trying every set of columns as the support
/// of a basic solution and solving the square part by Gaussian elimination.
pub fn exact_feasible<S: Scalar>(m: &[Vec<S>], b: &[S], nvars: usize, eps: f64) -> Option<Vec<S>> {
    assert!(nvars < 32, "support enumeration needs few variables");
    for support in 0u32..1 << nvars {
        let cols: Vec<usize> = (0..nvars).filter(|q| support >> q & 1 == 1).collect();
        let Some(sol) = solve_unique(m, b, &cols, eps) else { continue };
        if sol.iter().any(|x| x.is_negative_tol(eps)) {
            continue;
        }
        let mut x = vec![S::zero(); nvars];
        for (&q, v) in cols.iter().zip(sol) {
            x[q] = v;
        }
        return Some(x);
    }
    None
}

/// Unique solution of `M[:, cols] y = b`, or `None` when inconsistent or
/// the columns are dependent.
fn solve_unique<S: Scalar>(m: &[Vec<S>], b: &[S], cols: &[usize], eps: f64) -> Option<Vec<S>> {
    let t = cols.len();
    let mut rows: Vec<Vec<S>> = m
        .iter()
        .zip(b)
        .map(|(r, rhs)| {
            let mut line: Vec<S> = cols.iter().map(|&q| r[q].clone()).collect();
            line.push(rhs.clone());
            line
        })
        .collect();
    let mut rank = 0;
    for c in 0..t {
        let best = (rank..rows.len())
            .filter(|&r| !rows[r][c].is_zero_tol(eps))
            .max_by(|&x, &y| {
                let (ax, ay) = (rows[x][c].to_f64().abs(), rows[y][c].to_f64().abs());
                ax.partial_cmp(&ay).unwrap_or(core::cmp::Ordering::Equal)
            })?;
        rows.swap(rank, best);
        let piv = rows[rank][c].clone();
        for e in rows[rank].iter_mut() {
            *e = e.clone() / piv.clone();
        }
        let prow = rows[rank].clone();
        for (r, line) in rows.iter_mut().enumerate() {
            if r != rank && !line[c].is_zero_tol(eps) {
                let f = line[c].clone();
                for (e, p) in line.iter_mut().zip(&prow) {
                    *e = e.clone() - f.clone() * p.clone();
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|line| !line[t].is_zero_tol(eps)) {
        return None;
    }
    Some(rows[..t].iter().map(|line| line[t].clone()).collect())
}

/// Constraint rows for every pair of set rows with a non-wildcard entry.
fn pair_system<S: Scalar>(inst: &Instance<S>, rows: &[u64], k: usize) -> (Vec<Vec<S>>, Vec<S>) {
    let mut seen: Vec<(u64, S)> = Vec::new();
    for i in 0..rows.len() {
        for j in i..rows.len() {
            let Entry::Val(a) = inst.get(i, j) else { continue };
            let both = rows[i] & rows[j];
            if !seen.iter().any(|(mask, rhs)| *mask == both && rhs == a) {
                seen.push((both, a.clone()));
            }
        }
    }
    let m = seen
        .iter()
        .map(|(mask, _)| (0..k).map(|q| if mask >> q & 1 == 1 { S::one() } else { S::zero() }).collect())
        .collect();
    let b = seen.into_iter().map(|(_, rhs)| rhs).collect();
    (m, b)
}

struct Search<'a, S> {
    inst: &'a Instance<S>,
    k: usize,
    rows: Vec<u64>,
}

impl<S: Scalar> Search<'_, S> {
    fn admissible(&self, i: usize, v: u64) -> bool {
        let eps = self.inst.eps();
        if let Entry::Val(a) = self.inst.get(i, i) {
            if a.is_zero_tol(eps) != (v == 0) {
                return false;
            }
        }
        for (j, &bj) in self.rows.iter().enumerate() {
            if let Entry::Val(a) = self.inst.get(i, j) {
                if a.is_zero_tol(eps) != (v & bj == 0) {
                    return false;
                }
            }
        }
        // columns tied on all earlier rows must stay in descending order
        for q in 0..self.k.saturating_sub(1) {
            let tied = self.rows.iter().all(|&r| (r >> q & 1) == (r >> (q + 1) & 1));
            if tied && (v >> q & 1) < (v >> (q + 1) & 1) {
                return false;
            }
        }
        true
    }

    fn run(&mut self) -> Option<Vec<S>> {
        let i = self.rows.len();
        if i == self.inst.n() {
            let (m, b) = pair_system(self.inst, &self.rows, self.k);
            return exact_feasible(&m, &b, self.k, self.inst.eps());
        }
        for v in 0..1u64 << self.k {
            if !self.admissible(i, v) {
                continue;
            }
            self.rows.push(v);
            let (m, b) = pair_system(self.inst, &self.rows, self.k);
            if exact_feasible(&m, &b, self.k, self.inst.eps()).is_some() {
                if let Some(x) = self.run() {
                    return Some(x);
                }
            }
            self.rows.pop();
        }
        None
    }
}

/// Exhaustive decision. Returns a witness `(B, W)` or `None` for no.
pub fn oracle_decide<S: Scalar>(inst: &Instance<S>) -> Result<Option<(PartialAssignment, DiagonalWeights<S>)>> {
    if inst.n() > MAX_ORACLE_N || inst.k() > MAX_ORACLE_K {
        return Err(Error::TooLarge(format!(
            "oracle supports n <= {MAX_ORACLE_N} and k <= {MAX_ORACLE_K}, got n = {} and k = {}",
            inst.n(),
            inst.k()
        )));
    }
    let mut s = Search { inst, k: inst.k(), rows: Vec::new() };
    Ok(s.run().map(|x| (PartialAssignment::from_masks(inst.k(), s.rows.clone()), DiagonalWeights::full(x))))
}

pub const MAX_WEIGHTSET_K: usize = 3;
pub const MAX_WEIGHTSET_W: i64 = 6;

/// All integral weight vectors over the columns touched by some constraint of
/// `btilde`, entries in `[0, w_max]`, that satisfy every pair constraint.
/// Untouched columns are `None`.
pub fn oracle_weightsets<S: Scalar>(
    inst: &Instance<S>,
    btilde: &PartialAssignment,
    w_max: i64,
) -> Result<BTreeSet<Vec<Option<i64>>>> {
    if btilde.k() > MAX_WEIGHTSET_K || w_max > MAX_WEIGHTSET_W {
        return Err(Error::TooLarge(format!("weight sets need k <= {MAX_WEIGHTSET_K} and w_max <= {MAX_WEIGHTSET_W}")));
    }
    let eps = inst.eps();
    let set: Vec<(usize, u64)> = btilde.filled().collect();
    let mut constraints: Vec<(u64, i64)> = Vec::new();
    for (a, &(i, bi)) in set.iter().enumerate() {
        for &(j, bj) in &set[a..] {
            if let Entry::Val(v) = inst.get(i, j) {
                let v = v.to_integer(eps).ok_or(Error::NonIntegral { row: i, col: j })?;
                constraints.push((bi & bj, v));
            }
        }
    }
    let touched: Vec<usize> = (0..btilde.k()).filter(|&q| constraints.iter().any(|(m, _)| m >> q & 1 == 1)).collect();
    let base = (w_max + 1) as u64;
    let total = base.pow(touched.len() as u32);
    let mut out = BTreeSet::new();
    for code in 0..total {
        let mut w = vec![None; btilde.k()];
        let mut c = code;
        for &q in &touched {
            w[q] = Some((c % base) as i64);
            c /= base;
        }
        let ok = constraints.iter().all(|&(mask, rhs)| {
            (0..btilde.k()).filter(|q| mask >> q & 1 == 1).map(|q| w[q].unwrap_or(0)).sum::<i64>() == rhs
        });
        if ok {
            out.insert(w);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::verify;
    use crate::scalar::Rational;

    fn r(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn inst(m: &[&[Option<i64>]], k: usize) -> Instance<Rational> {
        let v: Vec<Vec<Option<Rational>>> = m.iter().map(|row| row.iter().map(|e| e.map(r)).collect()).collect();
        Instance::from_rows(&v, k).unwrap()
    }

    #[test]
    fn decide_examples() {
        let edge = inst(&[&[None, Some(3)], &[Some(3), None]], 1);
        let (b, w) = oracle_decide(&edge).unwrap().unwrap();
        assert!(verify(&edge, &b, &w).unwrap());

        let path = inst(&[&[None, Some(1), Some(0)], &[Some(1), None, Some(2)], &[Some(0), Some(2), None]], 1);
        assert_eq!(oracle_decide(&path).unwrap(), None);
        let (b, w) = oracle_decide(&path.with_budget(2).unwrap()).unwrap().unwrap();
        assert!(verify(&path.with_budget(2).unwrap(), &b, &w).unwrap());

        assert_eq!(oracle_decide(&edge.with_budget(0).unwrap()).unwrap(), None);
        let zero = inst(&[&[None, Some(0)], &[Some(0), None]], 0);
        assert!(oracle_decide(&zero).unwrap().is_some());
    }

    #[test]
    fn guard() {
        let mut rows = vec![vec![Some(r(0)); 13]; 13];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = None;
        }
        let big = Instance::from_rows(&rows, 1).unwrap();
        assert!(matches!(oracle_decide(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn basic_solution_enumeration() {
        let m = vec![vec![r(1), r(1)], vec![r(1), r(0)]];
        assert_eq!(exact_feasible(&m, &[r(5), r(3)], 2, 0.0), Some(vec![r(3), r(2)]));
        assert_eq!(exact_feasible(&m, &[r(2), r(3)], 2, 0.0), None);
        assert_eq!(exact_feasible::<Rational>(&[], &[], 3, 0.0), Some(vec![r(0); 3]));
    }

    #[test]
    fn weightset_examples() {
        let a = inst(&[&[None, Some(3)], &[Some(3), None]], 2);
        let b = PartialAssignment::from_masks(2, vec![0b11, 0b11]);
        let got = oracle_weightsets(&a, &b, 6).unwrap();
        let want: BTreeSet<_> = (0..=3).map(|x| vec![Some(x), Some(3 - x)]).collect();
        assert_eq!(got, want);

        let mut one = PartialAssignment::null(2, 2);
        one.set(0, Some(0b11));
        assert_eq!(oracle_weightsets(&a, &one, 6).unwrap(), [vec![None, None]].into_iter().collect());

        let c = inst(&[&[Some(2), Some(3)], &[Some(3), None]], 2);
        let b = PartialAssignment::from_masks(2, vec![0b01, 0b01]);
        assert!(oracle_weightsets(&c, &b, 6).unwrap().is_empty());
    }
}
