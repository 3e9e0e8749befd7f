//! Kernelization to at most `4^k` rows.
//!
//! Rows of the wildcard matrix are grouped into blocks of `*=`-equal rows.
//! More than `2^k` blocks means no solution exists (each block needs its own
//! binary row). A block with more than `2^k` rows is collapsed onto its two
//! smallest members `i < j`: every other member is deleted and `A[i][i]`
//! becomes `A[i][j]`. A solution of the reduced matrix lifts back by copying
//! row `i` of `B` to every member of the block.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{star_eq, DiagonalWeights, Instance, PartialAssignment};
use crate::scalar::Scalar;

/// One block collapsed by the size rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapsedBlock {
    /// Surviving vertex (original index).
    pub rep: usize,
    /// Partner whose entry `A[rep][partner]` became the new diagonal.
    pub partner: usize,
    /// All block members, ascending, including `rep`.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelResult<S> {
    pub reduced: Instance<S>,
    /// Partition of the original rows into `*=`-blocks, ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
    /// `kept[r]` is the original index of reduced row `r` (ascending).
    pub kept: Vec<usize>,
    pub collapsed: Vec<CollapsedBlock>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kernelized<S> {
    Reduced(KernelResult<S>),
    /// More than `2^k` blocks.
    No { blocks: usize },
}

impl<S> Kernelized<S> {
    pub fn reduced(self) -> Option<KernelResult<S>> {
        match self {
            Kernelized::Reduced(r) => Some(r),
            Kernelized::No { .. } => None,
        }
    }
}

/// `A_i *= A_j` elementwise.
pub fn rows_star_eq<S: Scalar>(inst: &Instance<S>, i: usize, j: usize) -> bool {
    let eps = inst.eps();
    inst.row(i).iter().zip(inst.row(j)).all(|(a, b)| star_eq(a, b, eps))
}

/// Partition rows into `*=`-equivalence classes.
///
/// Each row is compared against one representative per existing block, which
/// is exact because `*=` restricted to rows with diagonal-only wildcards is an
/// equivalence relation.
pub fn compute_blocks<S: Scalar>(inst: &Instance<S>) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    'rows: for i in 0..inst.n() {
        for b in &mut blocks {
            if rows_star_eq(inst, b[0], i) {
                b.push(i);
                continue 'rows;
            }
        }
        blocks.push(vec![i]);
    }
    blocks
}

fn block_limit(k: usize) -> usize {
    if k >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1usize << k
    }
}

/// Applies both reduction rules using the instance budget `k`.
pub fn kernelize<S: Scalar>(inst: &Instance<S>) -> Kernelized<S> {
    let blocks = compute_blocks(inst);
    let limit = block_limit(inst.k());
    if blocks.len() > limit {
        return Kernelized::No { blocks: blocks.len() };
    }
    let mut deleted = vec![false; inst.n()];
    let mut collapsed = Vec::new();
    for b in &blocks {
        if b.len() > limit {
            let (rep, partner) = (b[0], b[1]);
            for &u in &b[1..] {
                deleted[u] = true;
            }
            collapsed.push(CollapsedBlock { rep, partner, members: b.clone() });
        }
    }
    let kept: Vec<usize> = (0..inst.n()).filter(|&u| !deleted[u]).collect();
    let mut reduced = inst.submatrix(&kept);
    for c in &collapsed {
        let r = kept.binary_search(&c.rep).expect("representative is kept");
        reduced.set_diagonal(r, inst.get(c.rep, c.partner).clone());
    }
    Kernelized::Reduced(KernelResult { reduced, blocks, kept, collapsed })
}

/// Lifts a solution of the kernel to the original instance.
pub fn lift<S: Scalar>(
    kr: &KernelResult<S>,
    b_reduced: &PartialAssignment,
    w_reduced: &DiagonalWeights<S>,
) -> Result<(PartialAssignment, DiagonalWeights<S>)> {
    if b_reduced.n() != kr.kept.len() {
        return Err(Error::Dimension("reduced B does not match kernel size".into()));
    }
    let n: usize = kr.blocks.iter().map(Vec::len).sum();
    let mut b = PartialAssignment::null(n, b_reduced.k());
    for (r, &u) in kr.kept.iter().enumerate() {
        b.set(u, b_reduced.get(r));
    }
    for c in &kr.collapsed {
        let r = kr.kept.binary_search(&c.rep).expect("representative is kept");
        for &u in &c.members {
            b.set(u, b_reduced.get(r));
        }
    }
    Ok((b, w_reduced.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{graph_to_instance, verify, AnnotatedGraph, Entry};
    use crate::scalar::Rational;
    use alloc::collections::BTreeMap;

    fn r(v: i64) -> Rational {
        Rational::from_int(v)
    }

    fn inst(n: usize, edges: &[(usize, usize, i64)], k: usize) -> Instance<Rational> {
        let g = AnnotatedGraph::new(n, edges.iter().map(|&(u, v, w)| (u, v, r(w))).collect(), BTreeMap::new())
            .unwrap();
        graph_to_instance(&g, k).unwrap()
    }

    fn k5(k: usize) -> Instance<Rational> {
        let mut e = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                e.push((u, v, 1));
            }
        }
        inst(5, &e, k)
    }

    #[test]
    fn blocks_examples() {
        assert_eq!(compute_blocks(&k5(1)), vec![vec![0, 1, 2, 3, 4]]);
        let path = inst(3, &[(0, 1, 1), (1, 2, 2)], 1);
        assert_eq!(compute_blocks(&path), vec![vec![0], vec![1], vec![2]]);
        let two = inst(4, &[(0, 1, 1), (2, 3, 1)], 2);
        assert_eq!(compute_blocks(&two), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn k5_collapses_to_one_row() {
        let kr = kernelize(&k5(1)).reduced().unwrap();
        assert_eq!(kr.reduced.n(), 1);
        assert_eq!(kr.reduced.get(0, 0), &Entry::Val(r(1)));
        assert_eq!(kr.kept, vec![0]);
        assert_eq!(kr.collapsed, vec![CollapsedBlock { rep: 0, partner: 1, members: vec![0, 1, 2, 3, 4] }]);

        let b = PartialAssignment::from_bits(&[vec![1]]);
        let w = DiagonalWeights::full(vec![r(1)]);
        assert!(verify(&kr.reduced, &b, &w).unwrap());
        let (bl, wl) = lift(&kr, &b, &w).unwrap();
        assert_eq!(bl, PartialAssignment::from_bits(&[vec![1], vec![1], vec![1], vec![1], vec![1]]));
        assert!(verify(&k5(1), &bl, &wl).unwrap());
    }

    #[test]
    fn too_many_blocks_is_no() {
        let path = inst(3, &[(0, 1, 1), (1, 2, 2)], 1);
        assert_eq!(kernelize(&path), Kernelized::No { blocks: 3 });
    }

    #[test]
    fn small_instances_are_unchanged() {
        let path = inst(3, &[(0, 1, 1), (1, 2, 2)], 2);
        let kr = kernelize(&path).reduced().unwrap();
        assert_eq!(kr.reduced, path);
        assert!(kr.collapsed.is_empty());
        let b = PartialAssignment::from_bits(&[vec![1, 0], vec![1, 1], vec![0, 1]]);
        let w = DiagonalWeights::full(vec![r(1), r(2)]);
        let (bl, _) = lift(&kr, &b, &w).unwrap();
        assert_eq!(bl, b);
    }

    #[test]
    fn k5_with_budget_two_keeps_one_block_of_five() {
        // 5 > 2^2 = 4 so it still collapses
        let kr = kernelize(&k5(2)).reduced().unwrap();
        assert_eq!(kr.reduced.n(), 1);
        // 5 <= 2^3
        let kr = kernelize(&k5(3)).reduced().unwrap();
        assert_eq!(kr.reduced.n(), 5);
    }
}
