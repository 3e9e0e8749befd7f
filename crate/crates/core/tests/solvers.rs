mod common;

use std::cell::Cell;
use std::collections::BTreeSet;

use cliqdecomp_core::ip::{clique_decomp_ip, infer_cliq_wts_ip, IpEngine, IpOptions, WeightSet};
use cliqdecomp_core::lp::{clique_decomp_lp, lp_feasible, lp_system, phase_one, LpEngine, LpSystem};
use cliqdecomp_core::oracle::{exact_feasible, oracle_decide, oracle_weightsets};
use cliqdecomp_core::search::{drive_search, WeightEngine};
use cliqdecomp_core::wecp::solve_wecp;
use cliqdecomp_core::gen::{gen_random_planted, RandomParams, WeightModel};
use cliqdecomp_core::{
    graph_to_instance, verify, DiagonalWeights, Instance, NeverInterrupt, Outcome, PartialAssignment, Rational,
    Result, Scalar, SearchOptions,
};
use common::*;
use proptest::prelude::*;

fn opts(sym: bool) -> SearchOptions {
    SearchOptions { symmetry_breaking: sym }
}

fn decide_lp(inst: &Instance<Rational>, sym: bool) -> Outcome<Rational> {
    clique_decomp_lp(inst, opts(sym), &NeverInterrupt).unwrap()
}

fn decide_ip(inst: &Instance<Rational>, sym: bool) -> Outcome<Rational> {
    clique_decomp_ip(inst, IpOptions::default(), opts(sym), &NeverInterrupt).unwrap()
}

fn check_witness(inst: &Instance<Rational>, out: &Outcome<Rational>) {
    if let Outcome::Found(b, w) = out {
        assert!(verify(inst, b, w).unwrap(), "returned witness does not verify");
        assert!(w.0.iter().all(|x| x.is_some_and(|x| x >= Rational::from_int(0))));
    }
}

/// Wraps an engine and checks the pseudo-basis never exceeds `2k` rows.
struct Counting<'a, E> {
    inner: E,
    deepest: &'a Cell<usize>,
}

impl<S: Scalar, E: WeightEngine<S>> WeightEngine<S> for Counting<'_, E> {
    type State = E::State;

    fn initial(&self, inst: &Instance<S>) -> E::State {
        self.inner.initial(inst)
    }

    fn extend(&self, inst: &Instance<S>, bt: &PartialAssignment, prev: &E::State, row: usize) -> Result<Option<E::State>> {
        let rows = bt.filled().count();
        self.deepest.set(self.deepest.get().max(rows));
        self.inner.extend(inst, bt, prev, row)
    }

    fn weights(&self, s: &E::State) -> DiagonalWeights<S> {
        self.inner.weights(s)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lp_ip_oracle_agree(s in small(6, 3, 4), sym in any::<bool>()) {
        let inst = graph_to_instance(&s.graph(), s.k).unwrap();
        let lp = decide_lp(&inst, sym);
        let ip = decide_ip(&inst, sym);
        let oracle = oracle_decide(&inst).unwrap();
        check_witness(&inst, &lp);
        check_witness(&inst, &ip);
        prop_assert_eq!(lp.is_yes(), oracle.is_some());
        prop_assert_eq!(ip.is_yes(), oracle.is_some());
        if let Some((b, w)) = oracle {
            prop_assert!(verify(&inst, &b, &w).unwrap());
        }
    }

    #[test]
    fn lp_answer_satisfies_its_full_system(s in small(6, 3, 4)) {
        let inst = graph_to_instance(&s.graph(), s.k).unwrap();
        if let Outcome::Found(b, w) = decide_lp(&inst, true) {
            let sys = lp_system(&inst, &b);
            prop_assert!(sys.satisfied_by(&w.values().unwrap()));
        }
    }

    #[test]
    fn pseudo_basis_stays_within_two_k(s in small(7, 3, 3)) {
        let inst = graph_to_instance(&s.graph(), s.k).unwrap();
        let deepest = Cell::new(0);
        let lp = drive_search(&inst, &Counting { inner: LpEngine, deepest: &deepest }, opts(true), &NeverInterrupt).unwrap();
        prop_assert!(deepest.get() <= 2 * s.k);
        let deepest_ip = Cell::new(0);
        let engine = Counting { inner: IpEngine::default(), deepest: &deepest_ip };
        let ip = drive_search(&inst, &engine, opts(true), &NeverInterrupt).unwrap();
        prop_assert!(deepest_ip.get() <= 2 * s.k);
        prop_assert_eq!(lp.is_yes(), ip.is_yes());
    }

    #[test]
    fn yes_is_monotone_in_k(s in small(6, 3, 3)) {
        let inst = graph_to_instance(&s.graph(), s.k).unwrap();
        if decide_lp(&inst, true).is_yes() {
            let more = inst.with_budget(s.k + 1).unwrap();
            prop_assert!(decide_lp(&more, true).is_yes());
            prop_assert!(decide_ip(&more, true).is_yes());
        }
    }

    #[test]
    fn ip_weightset_is_exhaustive(
        s in small(5, 3, 2),
        rows in prop::collection::vec(prop::option::of(0u64..8), 5),
    ) {
        let inst = graph_to_instance(&s.graph(), 3).unwrap();
        prop_assume!(inst.max_entry() <= Rational::from_int(6));
        let mut bt = PartialAssignment::null(inst.n(), 3);
        let mut ws = WeightSet::initial(3);
        for (i, row) in rows.iter().take(inst.n()).enumerate() {
            if let Some(v) = row {
                bt.set(i, Some(*v));
                ws = infer_cliq_wts_ip(&inst, &bt, &ws, i).unwrap();
            }
        }
        let got: BTreeSet<Vec<Option<i64>>> = ws.members().iter().cloned().collect();
        prop_assert_eq!(got.len(), ws.len(), "duplicate vectors");
        let want = oracle_weightsets(&inst, &bt, 6).unwrap();
        prop_assert_eq!(&got, &want);
        let supports: BTreeSet<Vec<bool>> = got.iter().map(|w| w.iter().map(Option::is_some).collect()).collect();
        prop_assert!(supports.len() <= 1);
        prop_assert!(ws.len() <= 7usize.pow(3));
    }

    #[test]
    fn simplex_matches_support_enumeration(
        nvars in 1usize..=4,
        data in prop::collection::vec((prop::collection::vec(-2i64..=3, 4), -3i64..=6), 0..=10),
    ) {
        let a: Vec<Vec<Rational>> = data.iter().map(|(row, _)| row[..nvars].iter().map(|&x| r(x)).collect()).collect();
        let b: Vec<Rational> = data.iter().map(|&(_, v)| r(v)).collect();
        let fast = phase_one(&a, &b, nvars, 0.0);
        let slow = exact_feasible(&a, &b, nvars, 0.0);
        prop_assert_eq!(fast.is_some(), slow.is_some());
        for x in [fast, slow].into_iter().flatten() {
            prop_assert!(x.iter().all(|v| *v >= r(0)));
            for (row, rhs) in a.iter().zip(&b) {
                let lhs = row.iter().zip(&x).fold(r(0), |acc, (c, v)| acc + c * v);
                prop_assert_eq!(lhs, *rhs);
            }
        }
    }

    #[test]
    fn adding_constraints_only_shrinks(
        cons in prop::collection::vec((1u64..16, 0i64..5), 1..8),
        extra in (1u64..16, 0i64..5),
    ) {
        let mut small_sys = LpSystem::new(4, 0.0);
        for &(m, v) in &cons {
            small_sys.add(m, r(v));
        }
        let mut big = small_sys.clone();
        big.add(extra.0, r(extra.1));
        if let Some(x) = lp_feasible(&big) {
            prop_assert!(big.satisfied_by(&x));
            prop_assert!(small_sys.satisfied_by(&x));
            prop_assert!(lp_feasible(&small_sys).is_some());
        }
    }
}

#[test]
fn wecp_agrees_with_ip_on_planted() {
    for seed in 0..30 {
        let p = gen_random_planted(&RandomParams {
            k: 2 + (seed % 2) as usize,
            n: 10,
            min_size: 2,
            max_size: 3,
            overlap_percent: 100,
            weights: WeightModel::Uniform(2),
            seed,
        })
        .unwrap();
        let inst = graph_to_instance(&p.graph, p.k).unwrap();
        let ip = decide_ip(&inst, true);
        let big_k = p.big_k();
        let wecp = solve_wecp(&inst, big_k, opts(true), &NeverInterrupt).unwrap();
        assert_eq!(ip.is_yes(), wecp.is_yes(), "seed {seed}");
        if let Outcome::Found(b, w) = &wecp {
            assert_eq!(*w, DiagonalWeights::ones(big_k));
            assert!(verify(&inst.with_budget(big_k).unwrap(), b, w).unwrap());
        }
    }
}

#[test]
fn float_mode_matches_exact_on_fractional_weights() {
    // {0,1,2} weight 1/2, {1,2,3} weight 3/2
    let exact = graph_from(4, &[(0b0111, 1), (0b1110, 3)], None);
    let half = |x: &Rational| x / Rational::from_int(2);
    let rows: Vec<Vec<Option<Rational>>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { None } else { Some(half(exact.weight(i, j).unwrap_or(&r(0)))) }).collect())
        .collect();
    let inst = Instance::from_rows(&rows, 2).unwrap();
    let Outcome::Found(_, w) = decide_lp(&inst, true) else { panic!("expected yes") };
    let mut got = w.values().unwrap();
    got.sort();
    assert_eq!(got, vec![Rational::new(1, 2), Rational::new(3, 2)]);

    let frows: Vec<Vec<Option<f64>>> = rows.iter().map(|row| row.iter().map(|e| e.map(|x| x.to_f64())).collect()).collect();
    let finst = Instance::from_rows(&frows, 2).unwrap();
    let out = clique_decomp_lp(&finst, opts(true), &NeverInterrupt).unwrap();
    let Outcome::Found(b, w) = out else { panic!("expected yes") };
    assert!(verify(&finst, &b, &w).unwrap());
}
