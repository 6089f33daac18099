mod common;

use common::*;
use proptest::prelude::*;
use quasiwide::generators::{generate, GenSpec};
use quasiwide::solvers::{
    brute_cds, cds_fpt, cds_fpt_traced, default_k_threshold, dreyfus_wagner, exact_drds, is_connected_dominating,
    SteinerInstance,
};
use quasiwide::uqw::UqwConfig;
use quasiwide::{Error, Graph};

fn connected_graph(lo: usize, hi: usize, p: f64) -> impl Strategy<Value = Graph> {
    arb_graph(lo, hi, p).prop_map(|g| {
        // chain the components together through their smallest vertices
        let comps = g.components();
        let mut edges: Vec<(usize, usize)> = g.edges().collect();
        for pair in comps.windows(2) {
            edges.push((pair[0][0], pair[1][0]));
        }
        Graph::from_edges(g.n(), &edges).unwrap()
    })
}

fn is_tree_on(edges: &[(usize, usize)], vertices: &[usize]) -> bool {
    if edges.len() + 1 != vertices.len() {
        return false;
    }
    let n = vertices.iter().max().map_or(0, |&m| m + 1);
    let g = Graph::from_edges(n, edges).unwrap();
    g.induces_connected(vertices)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_drds_matches_enumeration(g in arb_graph(1, 14, 0.2), r in 1usize..4, k in 0usize..4) {
        let d = floyd(&g, &[]);
        let all: Vec<usize> = g.vertices().collect();
        let brute = subsets_up_to(g.n(), k).into_iter().any(|x| dominates(&d, &x, &all, r));
        let got = exact_drds(&g, r, k);
        prop_assert_eq!(got.is_some(), brute);
        if let Some(x) = got {
            prop_assert!(x.len() <= k);
            prop_assert!(dominates(&d, &x, &all, r));
        }
    }

    #[test]
    fn steiner_matches_brute_force(g in connected_graph(1, 12, 0.25), picks in proptest::collection::btree_set(0usize..12, 1..5)) {
        let terms: Vec<usize> = picks.into_iter().filter(|&t| t < g.n()).collect();
        prop_assume!(!terms.is_empty());
        let tree = dreyfus_wagner(&SteinerInstance { graph: &g, terminals: terms.clone() }).unwrap();
        prop_assert_eq!(Some(tree.cost), steiner_brute(&g, &terms));
        prop_assert_eq!(tree.edges.len(), tree.cost);
        for &(u, v) in &tree.edges {
            prop_assert!(g.adjacent(u, v));
        }
        for t in &terms {
            prop_assert!(tree.vertices.contains(t));
        }
        prop_assert!(is_tree_on(&tree.edges, &tree.vertices));
    }

    #[test]
    fn cds_fpt_agrees_with_brute(g in connected_graph(1, 16, 0.2), k in 1usize..5) {
        let fpt = cds_fpt(&g, k, &UqwConfig::default(), default_k_threshold(k)).unwrap();
        let brute = brute_cds(&g, k);
        prop_assert_eq!(fpt.is_some(), brute.is_some());
        prop_assert_eq!(brute.is_some(), min_cds_brute(&g, k).is_some());
        if let Some(x) = fpt {
            prop_assert!(x.len() <= k);
            prop_assert!(is_cds(&g, &x));
        }
    }
}

#[test]
fn disconnected_steiner_terminals_are_infeasible() {
    let g = Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
    let res = dreyfus_wagner(&SteinerInstance { graph: &g, terminals: vec![0, 3] });
    assert!(matches!(res, Err(Error::Infeasible { .. })));
}

/// Stars whose centers form a path: branching on the centers is forced.
fn caterpillar(spine: usize, legs: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..spine {
        if i + 1 < spine {
            edges.push((i, i + 1));
        }
        for j in 0..legs {
            edges.push((i, spine + i * legs + j));
        }
    }
    Graph::from_edges(spine * (legs + 1), &edges).unwrap()
}

#[test]
fn branching_steps_are_sound() {
    let mut events = 0;
    for (spine, legs) in [(2, 4), (3, 3), (3, 4), (4, 3)] {
        let g = caterpillar(spine, legs);
        for k in 1..=spine + 1 {
            let mut seen = Vec::new();
            let got = cds_fpt_traced(&g, k, &UqwConfig::default(), k + 2, &mut |e| seen.push(e.clone())).unwrap();
            assert_eq!(got.is_some(), brute_cds(&g, k).is_some(), "spine {spine} legs {legs} k {k}");
            let all_cds: Vec<Vec<usize>> =
                subsets_up_to(g.n(), k).into_iter().filter(|x| is_cds(&g, x)).collect();
            for e in &seen {
                let d = floyd(&g, &e.s);
                for (i, &a) in e.b.iter().enumerate() {
                    for &b in &e.b[i + 1..] {
                        assert!(d[a][b] > 2);
                    }
                }
                for x in all_cds.iter().filter(|x| e.x.iter().all(|v| x.contains(v))) {
                    assert!(
                        x.iter().any(|v| e.s.contains(v) && !e.x.contains(v)),
                        "CDS {x:?} extends {:?} without using S = {:?}",
                        e.x,
                        e.s
                    );
                }
            }
            events += seen.len();
        }
    }
    assert!(events > 0, "no branching happened");
}

#[test]
fn cds_examples() {
    let cfg = UqwConfig::default();
    let c5 = generate(&GenSpec::Cycle { n: 5 }).unwrap();
    assert_eq!(brute_cds(&c5, 2), None);
    assert!(brute_cds(&c5, 3).is_some());
    assert_eq!(cds_fpt(&c5, 2, &cfg, default_k_threshold(2)).unwrap(), None);
    let sol = cds_fpt(&c5, 3, &cfg, default_k_threshold(3)).unwrap().unwrap();
    assert!(is_connected_dominating(&c5, &sol));
    for n in [3, 10, 30] {
        let kn = generate(&GenSpec::Clique { n }).unwrap();
        assert_eq!(cds_fpt(&kn, 1, &cfg, default_k_threshold(1)).unwrap().map(|s| s.len()), Some(1));
    }
}
