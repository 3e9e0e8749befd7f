//! Unit-weight baseline parameterized by the total clique weight `K`.
//!
//! A clique of weight `w` is treated as `w` identical unweighted cliques, so
//! `W` is the identity over `K` columns and only the binary rows are searched.
//! It shares the search driver with the weighted solvers so that timing
//! differences reflect the parameter alone.

use crate::error::{Error, Result};
use crate::model::{DiagonalWeights, Entry, Instance, PartialAssignment};
use crate::scalar::Scalar;
use crate::search::{drive_search, Interrupt, Outcome, SearchOptions, WeightEngine};

/// Engine with `W` fixed to the identity over `columns` columns; extending
/// the pseudo-basis only checks the new row against the set ones.
#[derive(Debug, Clone, Copy)]
pub struct UnitEngine {
    pub columns: usize,
}

impl<S: Scalar> WeightEngine<S> for UnitEngine {
    type State = ();

    fn initial(&self, _: &Instance<S>) {}

    fn extend(&self, inst: &Instance<S>, btilde: &PartialAssignment, _: &(), row: usize) -> Result<Option<()>> {
        let bi = btilde.get(row).unwrap_or(0);
        let eps = inst.eps();
        for (j, bj) in btilde.filled() {
            if let Entry::Val(a) = inst.get(row, j) {
                if !S::from_int((bi & bj).count_ones() as i64).close(a, eps) {
                    return Ok(None);
                }
            }
        }
        Ok(Some(()))
    }

    fn weights(&self, _: &()) -> DiagonalWeights<S> {
        DiagonalWeights::ones(self.columns)
    }
}

/// Solves `inst` as unit-weight clique partition with multiplicity using `K`
/// columns. The budget of `inst` is ignored.
pub fn solve_wecp<S: Scalar>(
    inst: &Instance<S>,
    big_k: usize,
    opts: SearchOptions,
    stop: &dyn Interrupt,
) -> Result<Outcome<S>> {
    if let Some((row, col)) = inst.first_non_integral() {
        return Err(Error::NonIntegral { row, col });
    }
    let inst = inst.with_budget(big_k)?;
    drive_search(&inst, &UnitEngine { columns: big_k }, opts, stop)
}
