use std::collections::BTreeMap;

use cliqdecomp::format::{parse_instance, parse_solution, write_instance, write_solution};
use cliqdecomp_core::{AnnotatedGraph, Clique, Decomposition, Rational, DEFAULT_EPS};
use proptest::prelude::*;

/// Edge list over `n` vertices with rational weights `p/q`.
fn edges(n: usize) -> impl Strategy<Value = Vec<(usize, usize, Rational)>> {
    prop::collection::btree_map((0..n, 0..n), (0i128..50, 1i128..5), 0..=2 * n).prop_map(|m| {
        m.into_iter()
            .filter(|((u, v), _)| u < v)
            .map(|((u, v), (p, q))| (u, v, Rational::new(p, q)))
            .collect()
    })
}

fn graph(labels: Vec<String>, edges: Vec<(usize, usize, Rational)>, ann: BTreeMap<usize, Rational>) -> AnnotatedGraph<Rational> {
    AnnotatedGraph::with_labels(labels, edges, ann, DEFAULT_EPS).unwrap()
}

proptest! {
    #[test]
    fn numeric_instances_round_trip(
        (n, e) in (1usize..12).prop_flat_map(|n| (Just(n), edges(n))),
        ann in prop::collection::btree_map(0usize..12, (0i128..9).prop_map(Rational::from_integer), 0..4),
        k in 0usize..10,
    ) {
        let ann: BTreeMap<usize, Rational> = ann.into_iter().filter(|(v, _)| *v < n).collect();
        let g = graph((0..n).map(|i| i.to_string()).collect(), e, ann);
        let back = parse_instance::<Rational>(&write_instance(&g, k), DEFAULT_EPS).unwrap();
        prop_assert_eq!(back.k, k);
        prop_assert_eq!(back.graph, g);
    }

    #[test]
    fn labelled_instances_round_trip((n, e) in (2usize..10).prop_flat_map(|n| (Just(n), edges(n)))) {
        // Label order must match first appearance for an exact round trip.
        let mut order: Vec<usize> = Vec::new();
        for &(u, v, _) in &e {
            for x in [u, v] {
                if !order.contains(&x) {
                    order.push(x);
                }
            }
        }
        prop_assume!(!order.is_empty());
        let rank: Vec<usize> = (0..n).map(|v| order.iter().position(|&x| x == v).unwrap_or(0)).collect();
        let e: Vec<_> = e.into_iter().map(|(u, v, w)| (rank[u], rank[v], w)).collect();
        let g = graph((0..order.len()).map(|i| format!("gene{i}")).collect(), e, BTreeMap::new());
        let back = parse_instance::<Rational>(&write_instance(&g, 3), DEFAULT_EPS).unwrap();
        prop_assert_eq!(back.graph, g);
    }

    #[test]
    fn solutions_round_trip(
        n in 1usize..10,
        cliques in prop::collection::vec((prop::collection::btree_set(0usize..10, 1..5), 0i128..20, 1i128..4), 0..6),
    ) {
        let g = graph((0..n).map(|i| format!("v{i}")).collect(), Vec::new(), BTreeMap::new());
        let d = Decomposition::new(
            cliques
                .into_iter()
                .map(|(vs, p, q)| Clique::new(vs.into_iter().map(|v| v % n).collect::<std::collections::BTreeSet<_>>().into_iter().collect(), Rational::new(p, q)))
                .collect(),
        );
        let back = parse_solution(&write_solution(&g, &d), &g).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn float_weights_round_trip(w in prop::collection::vec(0.0f64..1e6, 1..6)) {
        let n = w.len() + 1;
        let e: Vec<(usize, usize, f64)> = w.iter().enumerate().map(|(i, &x)| (i, i + 1, x)).collect();
        let g = AnnotatedGraph::with_labels((0..n).map(|i| i.to_string()).collect(), e, BTreeMap::new(), 1e-9).unwrap();
        let back = parse_instance::<f64>(&write_instance(&g, 2), 1e-9).unwrap();
        prop_assert_eq!(back.graph, g);
    }
}

#[test]
fn malformed_files_name_the_line() {
    let cases = [
        ("3 2 1\n0 1 1\n", "expected 2 edges"),
        ("3 1 1\n0 1 -1\n", "negative weight"),
        ("3 2 1\n0 1 1\n1 0 2\n", "duplicate edge"),
        ("3 1 1\n0 0 1\n", "self-loop"),
        ("3 1 1\n0 1 1\nv 2 1\nv 2 3\n", "annotated twice"),
        ("2 1\n", "header"),
        ("2 1 1\na b c d\n", "edge line"),
    ];
    for (text, needle) in cases {
        let err = parse_instance::<Rational>(text, DEFAULT_EPS).unwrap_err().to_string();
        assert!(err.contains(needle), "{text:?}: {err}");
    }
}
