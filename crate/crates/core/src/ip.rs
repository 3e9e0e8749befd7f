//! Weight inference by enumerating integer compositions.
//!
//! Instead of one feasible point, the engine keeps every integral weight
//! vector compatible with the pseudo-basis. Positions of `W` that no
//! constraint touches yet stay unset. Adding a basis row `i` walks the set rows
//! `j` with `A[i][j] != *`: the weights already fixed on the common support
//! `P` of rows `i` and `j` account for `t`, and the remaining `s = A[i][j] - t`
//! is split over the still-unset positions of `P` in every possible way.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{DiagonalWeights, Entry, Instance, PartialAssignment};
use crate::scalar::Scalar;
use crate::search::{drive_search, Interrupt, Outcome, SearchOptions, WeightEngine};

/// A partially filled integral weight vector.
pub type PartialWeights = Vec<Option<i64>>;

/// Every compatible weight vector for the current pseudo-basis, in the order
/// the expansion produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSet {
    members: Vec<PartialWeights>,
}

impl WeightSet {
    /// The set for an empty pseudo-basis: one vector with nothing filled.
    pub fn initial(k: usize) -> Self {
        WeightSet { members: vec![vec![None; k]] }
    }

    pub fn members(&self) -> &[PartialWeights] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The head vector, converted for the fill step.
    pub fn head<S: Scalar>(&self) -> Option<DiagonalWeights<S>> {
        self.members.first().map(|w| DiagonalWeights(w.iter().map(|x| x.map(S::from_int)).collect()))
    }
}

/// Columns `r` for which two set rows `i, j` (possibly `i = j`) with
/// `A[i][j] != *` both have bit `r`, as a bit mask.
pub fn relevant_indices<S: Scalar>(inst: &Instance<S>, btilde: &PartialAssignment) -> u64 {
    let mut mask = 0;
    for (i, bi) in btilde.filled() {
        for (j, bj) in btilde.filled() {
            if j >= i && !inst.get(i, j).is_star() {
                mask |= bi & bj;
            }
        }
    }
    mask
}

/// Copies of `w` with the positions in `idx` (all unset) filled by every
/// composition of `s` into `idx.len()` non-negative parts, lexicographically
/// ordered.
pub fn update_ws(w: &PartialWeights, idx: &[usize], s: i64) -> Vec<PartialWeights> {
    update_capped(w, idx, s, None)
}

fn update_capped(w: &PartialWeights, idx: &[usize], s: i64, cap: Option<i64>) -> Vec<PartialWeights> {
    let mut out = Vec::new();
    if s < 0 {
        return out;
    }
    let m = idx.len();
    if m == 0 {
        if s == 0 {
            out.push(w.clone());
        }
        return out;
    }
    let mut parts = vec![0i64; m];
    parts[m - 1] = s;
    loop {
        if cap.is_none_or(|c| parts.iter().all(|&x| x <= c)) {
            let mut v = w.clone();
            for (&r, &x) in idx.iter().zip(&parts) {
                v[r] = Some(x);
            }
            out.push(v);
        }
        // advance: bump the rightmost position that has mass to its right
        let Some(p) = (0..m - 1).rev().find(|&p| parts[p + 1..].iter().any(|&x| x > 0)) else {
            break;
        };
        let tail: i64 = parts[p + 1..].iter().sum();
        parts[p] += 1;
        for x in &mut parts[p + 1..] {
            *x = 0;
        }
        parts[m - 1] = tail - 1;
    }
    out
}

fn integral<S: Scalar>(e: &Entry<S>, eps: f64) -> Option<i64> {
    e.value().and_then(|v| v.to_integer(eps))
}

/// Extends `ws`, which must hold all vectors compatible with `btilde` minus
/// row `i`, to all vectors compatible with `btilde`.
pub fn infer_cliq_wts_ip<S: Scalar>(
    inst: &Instance<S>,
    btilde: &PartialAssignment,
    ws: &WeightSet,
    i: usize,
) -> Result<WeightSet> {
    infer_capped(inst, btilde, ws, i, None)
}

fn infer_capped<S: Scalar>(
    inst: &Instance<S>,
    btilde: &PartialAssignment,
    ws: &WeightSet,
    i: usize,
    cap: Option<i64>,
) -> Result<WeightSet> {
    let Some(bi) = btilde.get(i) else {
        return Err(Error::Internal("inferring weights for an unset row".into()));
    };
    let eps = inst.eps();
    let mut queue = ws.members.clone();
    for (j, bj) in btilde.filled() {
        let entry = inst.get(i, j);
        if entry.is_star() {
            continue;
        }
        let a = integral(entry, eps).ok_or(Error::NonIntegral { row: i, col: j })?;
        let p = bi & bj;
        let mut next = Vec::new();
        for w in &queue {
            let mut open = Vec::new();
            let mut t = 0i64;
            for (r, x) in w.iter().enumerate() {
                if p >> r & 1 == 0 {
                    continue;
                }
                match x {
                    Some(x) => t += x,
                    None => open.push(r),
                }
            }
            next.extend(update_capped(w, &open, a - t, cap));
        }
        queue = next;
        if queue.is_empty() {
            break;
        }
    }
    Ok(WeightSet { members: queue })
}

/// Search engine over weight sets. `cap` optionally bounds every weight by
/// the largest matrix entry.
#[derive(Debug, Clone, Copy, Default)]
pub struct IpEngine {
    pub cap: Option<i64>,
}

impl<S: Scalar> WeightEngine<S> for IpEngine {
    type State = WeightSet;

    fn initial(&self, inst: &Instance<S>) -> WeightSet {
        WeightSet::initial(inst.k())
    }

    fn extend(
        &self,
        inst: &Instance<S>,
        btilde: &PartialAssignment,
        prev: &WeightSet,
        row: usize,
    ) -> Result<Option<WeightSet>> {
        let ws = infer_capped(inst, btilde, prev, row, self.cap)?;
        Ok((!ws.is_empty()).then_some(ws))
    }

    fn weights(&self, state: &WeightSet) -> DiagonalWeights<S> {
        state.head().expect("pruned branches never reach the fill step")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IpOptions {
    /// Drop vectors with a weight above the largest entry of `A`.
    pub cap_weights: bool,
}

/// Decides an integral instance with composition-based weight inference.
pub fn clique_decomp_ip<S: Scalar>(
    inst: &Instance<S>,
    ip: IpOptions,
    opts: SearchOptions,
    stop: &dyn Interrupt,
) -> Result<Outcome<S>> {
    if let Some((row, col)) = inst.first_non_integral() {
        return Err(Error::NonIntegral { row, col });
    }
    let cap = if ip.cap_weights { inst.max_entry().to_integer(inst.eps()) } else { None };
    drive_search(inst, &IpEngine { cap }, opts, stop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::verify;
    use crate::scalar::{parse_rational, Rational};
    use crate::search::NeverInterrupt;

    fn r(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn inst(m: &[&[Option<i64>]], k: usize) -> Instance<Rational> {
        let v: Vec<Vec<Option<Rational>>> = m.iter().map(|row| row.iter().map(|e| e.map(r)).collect()).collect();
        Instance::from_rows(&v, k).unwrap()
    }

    #[test]
    fn compositions() {
        let w = vec![None, None];
        let got: Vec<Vec<i64>> = update_ws(&w, &[0, 1], 3).into_iter().map(|v| v.into_iter().flatten().collect()).collect();
        assert_eq!(got, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        assert!(update_ws(&w, &[0, 1], -1).is_empty());
        assert_eq!(update_ws(&w, &[], 0), vec![w.clone()]);
        assert!(update_ws(&w, &[], 2).is_empty());
        assert_eq!(update_ws(&vec![None; 3], &[0, 1, 2], 4).len(), 15);
    }

    #[test]
    fn relevant_index_examples() {
        let a = inst(&[&[None, Some(1)], &[Some(1), None]], 2);
        let b = PartialAssignment::from_masks(2, vec![0b01, 0b11]);
        assert_eq!(relevant_indices(&a, &b), 0b01);
        let mut single = PartialAssignment::null(2, 2);
        single.set(0, Some(0b11));
        assert_eq!(relevant_indices(&a, &single), 0);
        let b = PartialAssignment::from_masks(2, vec![0b11, 0b11]);
        assert_eq!(relevant_indices(&a, &b), 0b11);
    }

    #[test]
    fn inference_examples() {
        let a = inst(&[&[None, Some(3)], &[Some(3), None]], 1);
        let mut b = PartialAssignment::null(2, 1);
        b.set(0, Some(1));
        let ws = infer_cliq_wts_ip(&a, &b, &WeightSet::initial(1), 0).unwrap();
        assert_eq!(ws.members(), &[vec![None]]);
        b.set(1, Some(1));
        let ws = infer_cliq_wts_ip(&a, &b, &ws, 1).unwrap();
        assert_eq!(ws.members(), &[vec![Some(3)]]);

        let a = inst(
            &[&[None, Some(3), Some(1)], &[Some(3), None, Some(1)], &[Some(1), Some(1), None]],
            2,
        );
        let mut b = PartialAssignment::null(3, 2);
        b.set(0, Some(0b11));
        let ws = infer_cliq_wts_ip(&a, &b, &WeightSet::initial(2), 0).unwrap();
        b.set(1, Some(0b11));
        let ws = infer_cliq_wts_ip(&a, &b, &ws, 1).unwrap();
        let want: Vec<PartialWeights> =
            [(0, 3), (1, 2), (2, 1), (3, 0)].iter().map(|&(x, y)| vec![Some(x), Some(y)]).collect();
        assert_eq!(ws.members(), &want[..]);
        // row 2 = (1,0) as bits: column 0 only
        b.set(2, Some(0b01));
        let ws = infer_cliq_wts_ip(&a, &b, &ws, 2).unwrap();
        assert_eq!(ws.members(), &[vec![Some(1), Some(2)]]);
    }

    #[test]
    fn solves_and_rejects_fractions() {
        let a = inst(&[&[None, Some(3)], &[Some(3), None]], 1);
        let out = clique_decomp_ip(&a, IpOptions::default(), SearchOptions::default(), &NeverInterrupt).unwrap();
        let Outcome::Found(b, w) = out else { panic!("expected a solution") };
        assert_eq!(w, DiagonalWeights::full(vec![r(3)]));
        assert!(verify(&a, &b, &w).unwrap());

        let h = parse_rational("3/2").unwrap();
        let frac = Instance::from_rows(&[vec![None, Some(h)], vec![Some(h), None]], 1).unwrap();
        let err = clique_decomp_ip(&frac, IpOptions::default(), SearchOptions::default(), &NeverInterrupt);
        assert_eq!(err, Err(Error::NonIntegral { row: 0, col: 1 }));
    }

    #[test]
    fn overlapping_cliques() {
        // {0,1,2} weight 1 and {1,2,3} weight 2
        let a = inst(
            &[
                &[None, Some(1), Some(1), Some(0)],
                &[Some(1), None, Some(3), Some(2)],
                &[Some(1), Some(3), None, Some(2)],
                &[Some(0), Some(2), Some(2), None],
            ],
            2,
        );
        for cap in [false, true] {
            let out =
                clique_decomp_ip(&a, IpOptions { cap_weights: cap }, SearchOptions::default(), &NeverInterrupt).unwrap();
            let Outcome::Found(b, w) = out else { panic!("expected a solution") };
            assert!(verify(&a, &b, &w).unwrap());
        }
        let a1 = a.with_budget(1).unwrap();
        assert!(clique_decomp_ip(&a1, IpOptions::default(), SearchOptions::default(), &NeverInterrupt)
            .unwrap()
            .is_no());
    }
}
