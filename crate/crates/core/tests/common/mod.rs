//! Shared strategies and brute-force oracles for the property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use quasiwide::generators::{generate, GenSpec};
use quasiwide::Graph;

/// Random simple graph with `n` in `lo..=hi` and edge probability about `p`.
pub fn arb_graph(lo: usize, hi: usize, p: f64) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(move |n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(proptest::bool::weighted(p), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

pub fn arb_degenerate(lo: usize, hi: usize, max_c: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, 1..=max_c, any::<u64>())
        .prop_map(|(n, c, seed)| generate(&GenSpec::RandomDegenerate { n, c, seed }).unwrap())
}

pub fn dense(g: &Graph) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; g.n()]; g.n()];
    for (u, v) in g.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

pub const FAR: usize = usize::MAX / 4;

/// All-pairs distances by Floyd–Warshall, optionally with vertices deleted.
pub fn floyd(g: &Graph, deleted: &[usize]) -> Vec<Vec<usize>> {
    let n = g.n();
    let gone: Vec<bool> = (0..n).map(|v| deleted.contains(&v)).collect();
    let mut d = vec![vec![FAR; n]; n];
    for v in 0..n {
        if !gone[v] {
            d[v][v] = 0;
        }
    }
    for (u, v) in g.edges() {
        if !gone[u] && !gone[v] {
            d[u][v] = 1;
            d[v][u] = 1;
        }
    }
    for w in 0..n {
        for u in 0..n {
            for v in 0..n {
                if d[u][w] + d[w][v] < d[u][v] {
                    d[u][v] = d[u][w] + d[w][v];
                }
            }
        }
    }
    d
}

/// Every subset of `0..n` with at most `k` elements, in (size, lex) order.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l| l + 1);
            for v in start..n {
                let mut t = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `x` r-dominates every vertex of `targets` (distance matrix `d`).
pub fn dominates(d: &[Vec<usize>], x: &[usize], targets: &[usize], r: usize) -> bool {
    targets.iter().all(|&t| x.iter().any(|&s| d[s][t] <= r))
}

pub fn connected_in(g: &Graph, set: &[usize]) -> bool {
    if set.is_empty() {
        return true;
    }
    let adj = dense(g);
    let mut seen = vec![set[0]];
    let mut i = 0;
    while i < seen.len() {
        let u = seen[i];
        for &v in set {
            if adj[u][v] && !seen.contains(&v) {
                seen.push(v);
            }
        }
        i += 1;
    }
    seen.len() == set.len()
}

/// Connected dominating check straight from the definition.
pub fn is_cds(g: &Graph, set: &[usize]) -> bool {
    let adj = dense(g);
    let dominated = (0..g.n()).all(|v| set.iter().any(|&s| s == v || adj[s][v]));
    dominated && connected_in(g, set) && (!set.is_empty() || g.n() == 0)
}

pub fn min_cds_brute(g: &Graph, k: usize) -> Option<usize> {
    subsets_up_to(g.n(), k).into_iter().find(|s| is_cds(g, s)).map(|s| s.len())
}

/// Minimum Steiner tree cost: smallest connected vertex superset of `terms`,
/// minus one.
pub fn steiner_brute(g: &Graph, terms: &[usize]) -> Option<usize> {
    let n = g.n();
    let rest: Vec<usize> = (0..n).filter(|v| !terms.contains(v)).collect();
    for extra in 0..=rest.len() {
        for pick in subsets_up_to(rest.len(), extra).into_iter().filter(|s| s.len() == extra) {
            let mut set: Vec<usize> = terms.to_vec();
            set.extend(pick.iter().map(|&i| rest[i]));
            if connected_in(g, &set) {
                return Some(set.len() - 1);
            }
        }
    }
    None
}
