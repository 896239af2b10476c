use proptest::prelude::*;

use resist_core::closed_form::{r_closed, r_sum, to_f64, StraightParams};
use resist_core::engine::{
    reduce_straight, resistance_det, resistance_exact_solve, resistance_float,
};
use resist_core::graph::straight_linear_2tree;
use resist_core::io::{parse_edge_list, write_edge_list};
use resist_core::{ratio, ExactGraph, Rational};

fn pair(max_n: usize) -> impl Strategy<Value = (usize, usize, usize)> {
    (3..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, i)| (Just(n), Just(i), i + 1..=n))
}

/// Connected graph: a random spanning path plus random extra edges.
fn weighted_graph() -> impl Strategy<Value = ExactGraph> {
    (3usize..=9)
        .prop_flat_map(|n| {
            let weights = prop::collection::vec((1i64..=7, 1i64..=5), n - 1);
            let extra = prop::collection::vec((1..=n, 1..=n, 1i64..=7, 1i64..=5), 0..2 * n);
            (Just(n), weights, extra)
        })
        .prop_map(|(n, chain, extra)| {
            let mut g = ExactGraph::new(n).unwrap();
            for (v, (a, b)) in chain.into_iter().enumerate() {
                g.add_edge(v + 1, v + 2, ratio(a, b)).unwrap();
            }
            for (u, v, a, b) in extra {
                if u != v {
                    g.add_edge(u, v, ratio(a, b)).unwrap();
                }
            }
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn straight_methods_agree((n, i, j) in pair(30)) {
        let dy = reduce_straight::<Rational>(n, i, j).unwrap();
        let g = straight_linear_2tree::<Rational>(n).unwrap();
        let p = StraightParams::from_pair(n, i, j).unwrap();
        prop_assert_eq!(&dy.value, &resistance_det(&g, i, j).unwrap().value);
        prop_assert_eq!(&dy.value, &r_sum(&p));
        prop_assert_eq!(&dy.value, &r_closed(&p).unwrap());
        dy.trace.unwrap().replay().unwrap();
    }

    #[test]
    fn general_graph_solvers_agree(g in weighted_graph(), a in 1usize..=9, b in 1usize..=9) {
        let n = g.vertex_count();
        let (i, j) = (1 + a % n, 1 + b % n);
        prop_assume!(i != j);
        let det = resistance_det(&g, i, j).unwrap().value;
        prop_assert_eq!(&det, &resistance_exact_solve(&g, i, j).unwrap().value);
        prop_assert_eq!(&det, &resistance_det(&g, j, i).unwrap().value);
        let float = resistance_float(&g, i, j, 1e-10).unwrap();
        prop_assert!((float.value - to_f64(&det)).abs() < 1e-9 * to_f64(&det).max(1.0));
    }

    #[test]
    fn triangle_inequality(g in weighted_graph(), a in 1usize..=9, b in 1usize..=9, c in 1usize..=9) {
        let n = g.vertex_count();
        let (x, y, z) = (1 + a % n, 1 + b % n, 1 + c % n);
        prop_assume!(x != y && y != z && x != z);
        let r = |u, v| resistance_det(&g, u, v).unwrap().value;
        prop_assert!(r(x, z) <= r(x, y) + r(y, z));
    }

    #[test]
    fn edge_list_round_trips(g in weighted_graph()) {
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }
}
