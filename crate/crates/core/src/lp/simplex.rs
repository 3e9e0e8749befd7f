//! Phase-1 simplex over a tableau, Bland's rule for entering and leaving
//! variables so it terminates without cycling.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;

/// Finds `x >= 0` with `A x = b`, or `None`. Non-basic variables of the
/// returned basic solution are zero.
pub fn phase_one<S: Scalar>(a: &[Vec<S>], b: &[S], nvars: usize, eps: f64) -> Option<Vec<S>> {
    let m = a.len();
    let width = nvars + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<S>> = Vec::with_capacity(m + 1);
    for (r, row) in a.iter().enumerate() {
        let mut line = vec![S::zero(); width];
        line[..nvars].clone_from_slice(row);
        line[rhs] = b[r].clone();
        if b[r].is_negative_tol(eps) {
            for e in &mut line {
                *e = -e.clone();
            }
        }
        line[nvars + r] = S::one();
        t.push(line);
    }
    // reduced costs of the auxiliary objective (sum of artificials)
    let mut cost = vec![S::zero(); width];
    for line in &t {
        for q in 0..nvars {
            cost[q] = cost[q].clone() - line[q].clone();
        }
        cost[rhs] = cost[rhs].clone() - line[rhs].clone();
    }
    t.push(cost);
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();

    while let Some(enter) = (0..nvars + m).find(|&q| t[m][q].is_negative_tol(eps)) {
        let mut leave: Option<(usize, S)> = None;
        for r in 0..m {
            if !t[r][enter].is_positive_tol(eps) {
                continue;
            }
            let ratio = t[r][rhs].clone() / t[r][enter].clone();
            let better = match &leave {
                None => true,
                Some((l, best)) => ratio < *best || (ratio.close(best, eps) && basis[r] < basis[*l]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // the auxiliary objective is bounded below by zero
        let (p, _) = leave?;
        pivot(&mut t, p, enter);
        basis[p] = enter;
    }

    if !t[m][rhs].is_zero_tol(eps) {
        return None;
    }
    let mut x = vec![S::zero(); nvars];
    for (r, &v) in basis.iter().enumerate() {
        if v < nvars {
            x[v] = t[r][rhs].clone();
        }
    }
    Some(x)
}

fn pivot<S: Scalar>(t: &mut [Vec<S>], p: usize, q: usize) {
    let inv = S::one() / t[p][q].clone();
    for e in t[p].iter_mut() {
        *e = e.clone() * inv.clone();
    }
    let prow = t[p].clone();
    for (r, line) in t.iter_mut().enumerate() {
        if r == p || line[q] == S::zero() {
            continue;
        }
        let f = line[q].clone();
        for (e, pe) in line.iter_mut().zip(&prow) {
            *e = e.clone() - f.clone() * pe.clone();
        }
    }
}
