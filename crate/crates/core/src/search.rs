//! Pseudo-basis search shared by all weight engines.
//!
//! Rows of `B` are filled greedily with the first compatible bit vector under
//! the current weights, starting from an empty pseudo-basis. If filling gets
//! stuck at row `i`, that row becomes the next basis row and all `2^k` vectors
//! are tried for it; after each guess the engine re-infers weights from the
//! guessed rows. At most `2k` basis rows are ever guessed.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::model::{verify, DiagonalWeights, Entry, Instance, PartialAssignment};
use crate::scalar::{masked_sum, Scalar};

/// Cooperative cancellation, polled at every basis extension and every
/// filled row.
pub trait Interrupt {
    fn interrupted(&self) -> bool;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NeverInterrupt;

impl Interrupt for NeverInterrupt {
    fn interrupted(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Only try basis rows that are canonical under permutations of columns
    /// not yet told apart by earlier basis rows (the first row becomes
    /// `1^a 0^(k-a)`). Valid because solutions are closed under column
    /// permutation.
    pub symmetry_breaking: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome<S> {
    Found(PartialAssignment, DiagonalWeights<S>),
    No,
    Interrupted,
}

impl<S> Outcome<S> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Outcome::Found(..))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Outcome::No)
    }
}

/// Weight inference driven by the search.
pub trait WeightEngine<S: Scalar> {
    type State: Clone;

    /// State for an empty pseudo-basis.
    fn initial(&self, inst: &Instance<S>) -> Self::State;

    /// Called after `row` was added to `btilde`. `None` prunes the branch.
    fn extend(
        &self,
        inst: &Instance<S>,
        btilde: &PartialAssignment,
        prev: &Self::State,
        row: usize,
    ) -> Result<Option<Self::State>>;

    /// Weights handed to the fill step.
    fn weights(&self, state: &Self::State) -> DiagonalWeights<S>;

    /// Cap on the number of basis rows (default `2k`).
    fn basis_cap(&self, k: usize) -> usize {
        2 * k
    }
}

/// Precomputed `v^T W` sums for every mask; `None` when a set bit hits an unset
/// weight.
struct WeightTable<S> {
    table: Option<Vec<Option<S>>>,
    w: Vec<Option<S>>,
}

const TABLE_BITS: usize = 16;

/// Candidates tried between interrupt polls within one row.
const POLL_MASK: u64 = (1 << 12) - 1;

impl<S: Scalar> WeightTable<S> {
    fn new(w: &DiagonalWeights<S>) -> Self {
        let k = w.k();
        let table = (k <= TABLE_BITS).then(|| {
            let mut t: Vec<Option<S>> = vec![Some(S::zero()); 1 << k];
            for mask in 1usize..1 << k {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                t[mask] = match (&t[rest], &w.0[low]) {
                    (Some(a), Some(b)) => Some(a.clone() + b.clone()),
                    _ => None,
                };
            }
            t
        });
        WeightTable { table, w: w.0.clone() }
    }

    fn sum(&self, mask: u64) -> Option<S> {
        match &self.table {
            Some(t) => t[mask as usize].clone(),
            None => masked_sum(&self.w, mask),
        }
    }
}

/// `v` is `(i, W)`-compatible: it reproduces `A[i][j]` against every set row
/// `j` with a non-wildcard entry, and the diagonal when `A[i][i]` is set.
/// Unset weights that would be needed make `v` incompatible.
pub fn i_w_compatible<S: Scalar>(
    inst: &Instance<S>,
    b: &PartialAssignment,
    w: &DiagonalWeights<S>,
    i: usize,
    v: u64,
) -> bool {
    compatible(inst, b, &WeightTable::new(w), i, v)
}

fn compatible<S: Scalar>(inst: &Instance<S>, b: &PartialAssignment, ws: &WeightTable<S>, i: usize, v: u64) -> bool {
    let eps = inst.eps();
    let row = inst.row(i);
    for (j, bj) in b.filled() {
        if j == i {
            continue;
        }
        if let Entry::Val(a) = &row[j] {
            match ws.sum(v & bj) {
                Some(s) if s.close(a, eps) => {}
                _ => return false,
            }
        }
    }
    if let Entry::Val(a) = &row[i] {
        match ws.sum(v) {
            Some(s) if s.close(a, eps) => {}
            _ => return false,
        }
    }
    true
}

/// Fills null rows in order with the first compatible vector (ascending
/// binary value). Returns the completed matrix and `n`, or the partially
/// filled matrix and the first row with no compatible vector.
pub fn fill_non_basis<S: Scalar>(
    inst: &Instance<S>,
    btilde: &PartialAssignment,
    w: &DiagonalWeights<S>,
) -> (PartialAssignment, usize) {
    match fill_with(inst, btilde, &WeightTable::new(w), &NeverInterrupt) {
        Some(r) => r,
        None => unreachable!("never interrupted"),
    }
}

fn fill_with<S: Scalar>(
    inst: &Instance<S>,
    btilde: &PartialAssignment,
    ws: &WeightTable<S>,
    stop: &dyn Interrupt,
) -> Option<(PartialAssignment, usize)> {
    let mut b = btilde.clone();
    let limit = 1u64 << b.k();
    for i in 0..b.n() {
        if b.get(i).is_some() {
            continue;
        }
        if stop.interrupted() {
            return None;
        }
        let mut found = None;
        for v in 0..limit {
            if v & POLL_MASK == POLL_MASK && stop.interrupted() {
                return None;
            }
            if compatible(inst, &b, ws, i, v) {
                found = Some(v);
                break;
            }
        }
        match found {
            Some(v) => b.set(i, Some(v)),
            None => return Some((b, i)),
        }
    }
    let n = b.n();
    Some((b, n))
}

/// Trivial budget: yes iff every set entry is zero.
fn zero_budget<S: Scalar>(inst: &Instance<S>) -> Outcome<S> {
    let eps = inst.eps();
    let all_zero = (0..inst.n())
        .all(|i| inst.row(i).iter().all(|e| e.value().is_none_or(|v| v.is_zero_tol(eps))));
    if all_zero {
        Outcome::Found(PartialAssignment::from_masks(0, vec![0; inst.n()]), DiagonalWeights::null(0))
    } else {
        Outcome::No
    }
}

struct Driver<'a, S: Scalar, E: WeightEngine<S>> {
    inst: &'a Instance<S>,
    engine: &'a E,
    stop: &'a dyn Interrupt,
    cap: usize,
    opts: SearchOptions,
}

enum Step<S> {
    Done(PartialAssignment, DiagonalWeights<S>),
    Exhausted,
    Stopped,
}

impl<S: Scalar, E: WeightEngine<S>> Driver<'_, S, E> {
    fn candidates(&self, btilde: &PartialAssignment) -> Box<dyn Iterator<Item = u64>> {
        let k = self.inst.k();
        if self.opts.symmetry_breaking {
            Box::new(canonical_rows(&column_classes(btilde)))
        } else {
            Box::new(0..1u64 << k)
        }
    }

    /// Tries every vector for basis row `row`, then fills and recurses.
    fn branch(&self, btilde: &mut PartialAssignment, state: &E::State, row: usize, depth: usize) -> Result<Step<S>> {
        for v in self.candidates(btilde) {
            if self.stop.interrupted() {
                return Ok(Step::Stopped);
            }
            btilde.set(row, Some(v));
            let step = match self.engine.extend(self.inst, btilde, state, row)? {
                None => Step::Exhausted,
                Some(next) => self.after_extend(btilde, &next, depth + 1)?,
            };
            match step {
                Step::Exhausted => {}
                other => {
                    btilde.set(row, None);
                    return Ok(other);
                }
            }
        }
        btilde.set(row, None);
        Ok(Step::Exhausted)
    }

    fn after_extend(&self, btilde: &mut PartialAssignment, state: &E::State, depth: usize) -> Result<Step<S>> {
        let w = self.engine.weights(state);
        let ws = WeightTable::new(&w);
        let Some((b, i)) = fill_with(self.inst, btilde, &ws, self.stop) else {
            return Ok(Step::Stopped);
        };
        if i == self.inst.n() {
            let w = w.zero_filled();
            if verify(self.inst, &b, &w)? {
                return Ok(Step::Done(b, w));
            }
            return Ok(Step::Exhausted);
        }
        if depth >= self.cap {
            return Ok(Step::Exhausted);
        }
        self.branch(btilde, state, i, depth)
    }
}

/// Groups columns that agree on every set row of `btilde`; each class is a
/// bit mask, classes ordered by lowest column.
fn column_classes(btilde: &PartialAssignment) -> Vec<u64> {
    let mut classes: Vec<u64> = Vec::new();
    let mut sigs: Vec<Vec<bool>> = Vec::new();
    for q in 0..btilde.k() {
        let sig: Vec<bool> = btilde.filled().map(|(_, b)| b >> q & 1 == 1).collect();
        match sigs.iter().position(|s| *s == sig) {
            Some(c) => classes[c] |= 1 << q,
            None => {
                sigs.push(sig);
                classes.push(1 << q);
            }
        }
    }
    classes
}

/// Rows that set, within every class, some prefix of its columns. Columns of
/// one class are interchangeable given the rows chosen so far, so every row
/// is a column permutation of one of these.
fn canonical_rows(classes: &[u64]) -> impl Iterator<Item = u64> {
    let prefixes: Vec<Vec<u64>> = classes
        .iter()
        .map(|&c| {
            let mut out = vec![0u64];
            let mut acc = 0u64;
            let mut rest = c;
            while rest != 0 {
                acc |= rest & rest.wrapping_neg();
                rest &= rest - 1;
                out.push(acc);
            }
            out
        })
        .collect();
    let mut digits = vec![0usize; prefixes.len()];
    let mut done = false;
    core::iter::from_fn(move || {
        if done {
            return None;
        }
        let v = digits.iter().zip(&prefixes).fold(0u64, |acc, (&d, p)| acc | p[d]);
        done = true;
        for (d, p) in digits.iter_mut().zip(&prefixes) {
            if *d + 1 < p.len() {
                *d += 1;
                done = false;
                break;
            }
            *d = 0;
        }
        Some(v)
    })
}

/// Runs the pseudo-basis search with `engine`.
pub fn drive_search<S: Scalar, E: WeightEngine<S>>(
    inst: &Instance<S>,
    engine: &E,
    opts: SearchOptions,
    stop: &dyn Interrupt,
) -> Result<Outcome<S>> {
    if inst.k() == 0 {
        return Ok(zero_budget(inst));
    }
    if inst.n() == 0 {
        return Ok(Outcome::Found(PartialAssignment::null(0, inst.k()), DiagonalWeights::null(inst.k()).zero_filled()));
    }
    let driver = Driver { inst, engine, stop, cap: engine.basis_cap(inst.k()), opts };
    let mut btilde = PartialAssignment::null(inst.n(), inst.k());
    let state = engine.initial(inst);
    Ok(match driver.after_extend(&mut btilde, &state, 0)? {
        Step::Done(b, w) => Outcome::Found(b, w),
        Step::Exhausted => Outcome::No,
        Step::Stopped => Outcome::Interrupted,
    })
}
