//! Weight inference by LP feasibility.
//!
//! Every pair of guessed rows `i, j` with `A[i][j] != *` gives the equation
//! `sum_q B[i][q] B[j][q] g_q = A[i][j]` over weights `g >= 0`. There is no
//! objective; any feasible point will do, and the simplex returns a basic one.

mod simplex;

pub use simplex::phase_one;

use alloc::vec::Vec;

use crate::error::Result;
use crate::model::{DiagonalWeights, Entry, Instance, PartialAssignment};
use crate::scalar::Scalar;
use crate::search::{drive_search, Interrupt, Outcome, SearchOptions, WeightEngine};

/// Equality constraints `sum_{q in mask} g_q = rhs` over `k` non-negative
/// variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSystem<S> {
    k: usize,
    constraints: Vec<(u64, S)>,
    contradictory: bool,
    eps: f64,
}

impl<S: Scalar> LpSystem<S> {
    pub fn new(k: usize, eps: f64) -> Self {
        LpSystem { k, constraints: Vec::new(), contradictory: false, eps }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn constraints(&self) -> &[(u64, S)] {
        &self.constraints
    }

    /// Adds a constraint, dropping exact duplicates. A second constraint on the
    /// same support with a different right-hand side marks the system
    /// infeasible without running the simplex.
    pub fn add(&mut self, mask: u64, rhs: S) {
        if let Some((_, old)) = self.constraints.iter().find(|(m, _)| *m == mask) {
            if !old.close(&rhs, self.eps) {
                self.contradictory = true;
            }
            return;
        }
        if mask == 0 && !rhs.is_zero_tol(self.eps) {
            self.contradictory = true;
        }
        self.constraints.push((mask, rhs));
    }

    /// `true` when `x` satisfies every constraint and is non-negative.
    pub fn satisfied_by(&self, x: &[S]) -> bool {
        x.len() == self.k
            && x.iter().all(|v| !v.is_negative_tol(self.eps))
            && self.constraints.iter().all(|(mask, rhs)| {
                let s = (0..self.k).filter(|q| mask >> q & 1 == 1).fold(S::zero(), |a, q| a + x[q].clone());
                s.close(rhs, self.eps)
            })
    }
}

/// Solves `{C g = b, g >= 0}`; the result is a basic feasible solution.
pub fn lp_feasible<S: Scalar>(sys: &LpSystem<S>) -> Option<Vec<S>> {
    if sys.contradictory {
        return None;
    }
    let rows: Vec<Vec<S>> = sys
        .constraints
        .iter()
        .map(|(mask, _)| (0..sys.k).map(|q| if mask >> q & 1 == 1 { S::one() } else { S::zero() }).collect())
        .collect();
    let rhs: Vec<S> = sys.constraints.iter().map(|(_, b)| b.clone()).collect();
    simplex::phase_one(&rows, &rhs, sys.k, sys.eps)
}

/// Adds the constraints contributed by the newly set `row` against every set
/// row of `btilde` (itself included when its diagonal is set).
fn add_row_constraints<S: Scalar>(sys: &mut LpSystem<S>, inst: &Instance<S>, btilde: &PartialAssignment, row: usize) {
    let Some(bi) = btilde.get(row) else { return };
    for (j, bj) in btilde.filled() {
        if let Entry::Val(a) = inst.get(row, j) {
            sys.add(bi & bj, a.clone());
        }
    }
}

/// The LP for all set rows of `btilde`.
pub fn lp_system<S: Scalar>(inst: &Instance<S>, btilde: &PartialAssignment) -> LpSystem<S> {
    let mut sys = LpSystem::new(inst.k(), inst.eps());
    for (i, _) in btilde.filled() {
        add_row_constraints(&mut sys, inst, btilde, i);
    }
    sys
}

/// Weights compatible with the pseudo-basis `btilde`, or `None` if the LP is
/// infeasible.
pub fn infer_cliq_wts_lp<S: Scalar>(inst: &Instance<S>, btilde: &PartialAssignment) -> Option<DiagonalWeights<S>> {
    lp_feasible(&lp_system(inst, btilde)).map(DiagonalWeights::full)
}

/// Search engine that keeps the constraint system incrementally.
#[derive(Debug, Clone, Copy, Default)]
pub struct LpEngine;

#[derive(Debug, Clone)]
pub struct LpState<S> {
    sys: LpSystem<S>,
    weights: DiagonalWeights<S>,
}

impl<S: Scalar> WeightEngine<S> for LpEngine {
    type State = LpState<S>;

    fn initial(&self, inst: &Instance<S>) -> LpState<S> {
        let sys = LpSystem::new(inst.k(), inst.eps());
        let weights = DiagonalWeights::full(alloc::vec![S::zero(); inst.k()]);
        LpState { sys, weights }
    }

    fn extend(
        &self,
        inst: &Instance<S>,
        btilde: &PartialAssignment,
        prev: &LpState<S>,
        row: usize,
    ) -> Result<Option<LpState<S>>> {
        let mut sys = prev.sys.clone();
        add_row_constraints(&mut sys, inst, btilde, row);
        Ok(lp_feasible(&sys).map(|x| LpState { sys, weights: DiagonalWeights::full(x) }))
    }

    fn weights(&self, state: &LpState<S>) -> DiagonalWeights<S> {
        state.weights.clone()
    }
}

/// Decides the instance with LP weight inference.
pub fn clique_decomp_lp<S: Scalar>(inst: &Instance<S>, opts: SearchOptions, stop: &dyn Interrupt) -> Result<Outcome<S>> {
    drive_search(inst, &LpEngine, opts, stop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::verify;
    use crate::scalar::{parse_rational, Rational};
    use crate::search::NeverInterrupt;
    use alloc::vec;

    fn r(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn sys(k: usize, cs: &[(u64, i64)]) -> LpSystem<Rational> {
        let mut s = LpSystem::new(k, 0.0);
        for &(m, b) in cs {
            s.add(m, r(b));
        }
        s
    }

    #[test]
    fn feasibility_examples() {
        assert_eq!(lp_feasible(&sys(1, &[(0b1, 3)])), Some(vec![r(3)]));
        assert_eq!(lp_feasible(&sys(2, &[(0b11, 2), (0b01, 3)])), None);
        assert_eq!(lp_feasible(&sys(2, &[(0b11, 5), (0b01, 3)])), Some(vec![r(3), r(2)]));
        assert_eq!(lp_feasible(&sys(2, &[])), Some(vec![r(0), r(0)]));
    }

    #[test]
    fn contradictory_duplicates_short_circuit() {
        let s = sys(1, &[(0b1, 2), (0b1, 3)]);
        assert!(s.contradictory);
        assert_eq!(lp_feasible(&s), None);
        let s = sys(1, &[(0b1, 2), (0b1, 2)]);
        assert_eq!(s.constraints().len(), 1);
        assert!(sys(1, &[(0, 1)]).contradictory);
    }

    #[test]
    fn inference_examples() {
        let inst = Instance::from_rows(&[vec![None, Some(r(3))], vec![Some(r(3)), None]], 1).unwrap();
        let b = PartialAssignment::from_masks(1, vec![1, 1]);
        assert_eq!(infer_cliq_wts_lp(&inst, &b), Some(DiagonalWeights::full(vec![r(3)])));

        let inst = Instance::from_rows(&[vec![Some(r(3)), Some(r(2))], vec![Some(r(2)), None]], 2).unwrap();
        let b = PartialAssignment::from_masks(2, vec![0b01, 0b01]);
        assert_eq!(infer_cliq_wts_lp(&inst, &b), None);

        // g_1 = 2 and g_2 free: the basic solution leaves g_2 at zero
        let inst = Instance::from_rows(&[vec![None, Some(r(2))], vec![Some(r(2)), None]], 2).unwrap();
        let b = PartialAssignment::from_masks(2, vec![0b11, 0b01]);
        let w = infer_cliq_wts_lp(&inst, &b).unwrap();
        assert_eq!(w, DiagonalWeights::full(vec![r(2), r(0)]));
        assert!(lp_system(&inst, &b).satisfied_by(&w.values().unwrap()));
    }

    #[test]
    fn solves_single_edge_and_fractional_weight() {
        let inst = Instance::from_rows(&[vec![None, Some(r(3))], vec![Some(r(3)), None]], 1).unwrap();
        let Outcome::Found(b, w) = clique_decomp_lp(&inst, SearchOptions::default(), &NeverInterrupt).unwrap() else {
            panic!("expected a solution")
        };
        assert_eq!(b, PartialAssignment::from_masks(1, vec![1, 1]));
        assert_eq!(w, DiagonalWeights::full(vec![r(3)]));

        let h = parse_rational("1.5").unwrap();
        let inst = Instance::from_rows(&[vec![None, Some(h)], vec![Some(h), None]], 1).unwrap();
        let Outcome::Found(b, w) = clique_decomp_lp(&inst, SearchOptions::default(), &NeverInterrupt).unwrap() else {
            panic!("expected a solution")
        };
        assert_eq!(w, DiagonalWeights::full(vec![h]));
        assert!(verify(&inst, &b, &w).unwrap());
    }

    #[test]
    fn float_backend() {
        let inst = Instance::from_rows(&[vec![None, Some(0.3)], vec![Some(0.3), None]], 1).unwrap();
        assert!(clique_decomp_lp(&inst, SearchOptions::default(), &NeverInterrupt).unwrap().is_yes());
    }
}
