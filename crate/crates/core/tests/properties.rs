use std::collections::BTreeMap;
use std::io::Cursor;

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use streamscope::canonical::{graph_code, rooted_code, DiscType};
use streamscope::stream::{shuffle_stream, threshold_view};
use streamscope::verify::{bounded_disc_code, enumerate_outcomes, exact_cc_histogram, exact_mis};
use streamscope::{Edge, Graph, LoadOptions, Rational, VertexId};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |mask| {
            let mut edges = Vec::new();
            let mut i = 0;
            for a in 1..=n as u32 {
                for b in a + 1..=n as u32 {
                    if mask[i] {
                        edges.push(Edge::new(a, b));
                    }
                    i += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

fn weighted_strategy(max_n: usize, max_w: u32) -> impl Strategy<Value = Graph> {
    graph_strategy(max_n).prop_flat_map(move |g| {
        let m = g.m();
        proptest::collection::vec(1..=max_w, m).prop_map(move |ws| {
            let edges = g.edges().iter().zip(ws).map(|(e, w)| Edge::weighted(e.u, e.v, w));
            Graph::new(g.n(), edges.collect::<Vec<_>>()).unwrap()
        })
    })
}

fn relabel(g: &Graph, perm: &[u32]) -> Graph {
    let edges = g
        .edges()
        .iter()
        .map(|e| Edge::new(perm[e.u.label() as usize - 1], perm[e.v.label() as usize - 1]))
        .collect::<Vec<_>>();
    Graph::new(g.n(), edges).unwrap()
}

fn local_edges(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.u.label() as usize - 1, e.v.label() as usize - 1)).collect()
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn truncation_is_idempotent(g in graph_strategy(9), d in 0usize..5) {
        let once = g.truncate_high_degree(d);
        prop_assert_eq!(once.truncate_high_degree(d), once.clone());
        for v in once.vertices() {
            prop_assert!(once.degree(v) <= d);
        }
    }

    #[test]
    fn edge_list_round_trip(g in weighted_strategy(8, 5)) {
        let text = g.to_edge_list();
        let back = streamscope::graph::load_edge_list(Cursor::new(text.as_bytes()), &LoadOptions::default()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn unweighted_round_trip(g in graph_strategy(8)) {
        let text = g.to_edge_list();
        let back = streamscope::graph::load_edge_list(Cursor::new(text.as_bytes()), &LoadOptions::default()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn threshold_views_compose(g in weighted_strategy(7, 4), seed in any::<u64>(), a in 1u32..5, b in 1u32..5) {
        let s = shuffle_stream(&g, seed);
        let nested = threshold_view(&threshold_view(&s, a).unwrap(), b).unwrap();
        let direct = threshold_view(&s, a.min(b)).unwrap();
        prop_assert_eq!(nested.edges(), direct.edges());
        let mut got = direct.edges().to_vec();
        got.sort();
        prop_assert_eq!(got, g.threshold(a.min(b)).edges().to_vec());
    }

    #[test]
    fn neighbour_lists_strictly_increase(g in graph_strategy(9)) {
        for v in g.vertices() {
            let nb = g.neighbors_sorted(v).unwrap();
            prop_assert!(nb.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(nb.len(), g.degree(v));
        }
    }

    #[test]
    fn component_sizes_sum_to_n(g in graph_strategy(9)) {
        let total: usize = exact_cc_histogram(&g).iter().map(|(k, c)| k * c).sum();
        prop_assert_eq!(total, g.n());
    }

    #[test]
    fn shuffle_is_a_permutation(g in graph_strategy(9), seed in any::<u64>()) {
        let s = shuffle_stream(&g, seed);
        let mut got = s.edges().to_vec();
        got.sort();
        prop_assert_eq!(got, g.edges().to_vec());
        let times: Vec<u64> = s.iter().map(|t| t.time).collect();
        prop_assert_eq!(times, (1..=g.m() as u64).collect::<Vec<_>>());
    }

    #[test]
    fn codes_ignore_labels(
        (g, perm) in graph_strategy(7).prop_flat_map(|g| { let n = g.n(); (Just(g), perm_strategy(n)) }),
        root in 0usize..7,
        k in 1usize..4,
        d in 1usize..4,
    ) {
        let n = g.n();
        let root = root % n;
        let h = relabel(&g, &perm);
        prop_assert_eq!(graph_code(n, &local_edges(&g)).unwrap(), graph_code(n, &local_edges(&h)).unwrap());
        let pr = perm[root] as usize - 1;
        prop_assert_eq!(
            rooted_code(n, &local_edges(&g), root).unwrap(),
            rooted_code(n, &local_edges(&h), pr).unwrap()
        );
        prop_assert_eq!(
            bounded_disc_code(&g, VertexId(root as u32 + 1), k, d).unwrap(),
            bounded_disc_code(&h, VertexId(pr as u32 + 1), k, d).unwrap()
        );
    }

    #[test]
    fn codes_survive_decode_and_hex(g in graph_strategy(7), root in 0usize..7) {
        let root = root % g.n();
        let code = rooted_code(g.n(), &local_edges(&g), root).unwrap();
        let (n, edges) = code.decode();
        prop_assert_eq!(rooted_code(n, &edges, 0).unwrap(), code.clone());
        prop_assert_eq!(DiscType::from_hex(&code.to_hex()).unwrap(), code);
    }

    #[test]
    fn mis_never_shrinks_when_an_edge_goes(g in graph_strategy(9), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.m() > 0);
        let drop = pick.index(g.m());
        let rest: Vec<Edge> = g.edges().iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, e)| *e).collect();
        let h = Graph::new(g.n(), rest).unwrap();
        prop_assert!(exact_mis(&h, 16).unwrap().size >= exact_mis(&g, 16).unwrap().size);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumerated_outcomes_sum_to_one(g in graph_strategy(4), k in 1usize..4, disc in any::<bool>()) {
        prop_assume!(g.m() <= 5);
        let tau = Rational::new(BigInt::from(3), BigInt::from(10));
        let d = if disc { Some(2) } else { None };
        let dist = enumerate_outcomes(&g, VertexId(1), k, d, &tau).unwrap();
        prop_assert!(dist.total().is_one());
    }
}

/// Pearson statistic over bins, merging tail bins until each expects ≥ 5.
fn chi_square(observed: &[u64], expected: &[f64]) -> (f64, usize) {
    let mut stat = 0.0;
    let mut bins = 0;
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &ex) in observed.iter().zip(expected) {
        o += ob as f64;
        e += ex;
        if e >= 5.0 {
            stat += (o - e) * (o - e) / e;
            bins += 1;
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 {
        stat += (o - e) * (o - e) / e;
        bins += 1;
    }
    (stat, bins - 1)
}

/// Upper 0.1% points of the chi-square distribution.
fn critical(dof: usize) -> f64 {
    [10.83, 13.82, 16.27, 18.47, 20.52, 22.46, 24.32, 26.12, 27.88, 29.59, 31.26, 32.91][dof - 1]
}

#[test]
fn shuffle_orders_are_uniform() {
    let g = Graph::from_pairs(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
    let trials = 60_000u64;
    let mut counts: BTreeMap<Vec<Edge>, u64> = BTreeMap::new();
    for seed in 0..trials {
        *counts.entry(shuffle_stream(&g, seed).edges().to_vec()).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 6);
    let obs: Vec<u64> = counts.values().copied().collect();
    let (stat, dof) = chi_square(&obs, &[trials as f64 / 6.0; 6]);
    assert!(stat < critical(dof), "chi-square {stat} on {dof} dof");
}

#[test]
fn lambda_follows_binomial() {
    let (m, tau, draws) = (12u64, 0.3, 20_000u64);
    let mut obs = vec![0u64; m as usize + 1];
    for seed in 0..draws {
        let l = streamscope::stream::sample_lambda_online(m, tau, seed).unwrap();
        assert_eq!(l.m, m);
        obs[l.lambda as usize] += 1;
    }
    let mut pmf = vec![0.0; m as usize + 1];
    let mut choose = 1.0;
    for j in 0..=m {
        pmf[j as usize] = choose * tau.powi(j as i32) * (1.0 - tau).powi((m - j) as i32);
        choose = choose * (m - j) as f64 / (j + 1) as f64;
    }
    assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let expected: Vec<f64> = pmf.iter().map(|p| p * draws as f64).collect();
    let (stat, dof) = chi_square(&obs, &expected);
    assert!(stat < critical(dof), "chi-square {stat} on {dof} dof");
}
