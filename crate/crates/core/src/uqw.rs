//! Splitter for uniformly quasi-wide graphs: delete a few vertices `S` so that
//! a subset `B` of a given vertex set `A` becomes `r`-independent.
//!
//! The construction runs `⌈r/2⌉` rounds. After round `i` the working set
//! `B_i` is `2i`-independent in `G - Z_i`, where `Z_i` collects the deletions
//! of all rounds so far. Round `i + 1` contracts the disjoint `i`-balls around
//! `B_i`, keeps an independent family of balls, extracts a `Δ_k`-indiscernible
//! subsequence `C` of them and deletes the ordinary (uncontracted) vertices
//! adjacent to many balls of `C`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Origin, Vertex};
use crate::logic::{extract_indiscernible, Delta};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UqwConfig {
    /// Upper bound on the total number of deleted vertices.
    pub s_max: usize,
    /// A vertex is deleted when it is adjacent to more than `theta * |C|`
    /// members of the current indiscernible sequence `C` (and to at least two).
    pub theta: f64,
    /// Fixed `Δ_k` arity for every round; `None` uses `2·round + 2` capped at
    /// `delta_cap`.
    pub delta_k: Option<usize>,
    pub delta_cap: usize,
    pub max_rounds: Option<usize>,
}

impl Default for UqwConfig {
    fn default() -> Self {
        UqwConfig {
            s_max: 16,
            theta: 0.5,
            delta_k: None,
            delta_cap: 4,
            max_rounds: None,
        }
    }
}

impl UqwConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return Err(Error::Config(format!("theta must lie in (0, 1], got {}", self.theta)));
        }
        if self.delta_k == Some(0) || self.delta_cap == 0 {
            return Err(Error::Config("Δ_k arity must be at least 1".into()));
        }
        Ok(())
    }

    pub fn arity_for_round(&self, round: usize) -> usize {
        self.delta_k.unwrap_or_else(|| (2 * round + 2).min(self.delta_cap))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLog {
    pub round: usize,
    pub arity: usize,
    /// Length of the sequence handed to the `Δ_k` extraction.
    pub len_before: usize,
    /// Length of the extracted sequence.
    pub len_after: usize,
    pub added: Vec<Vertex>,
    /// Size of `B_i` after pruning to `2i`-independence.
    pub kept: usize,
    /// Vertex count of the graph the extraction ran on.
    pub graph_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UqwResult {
    pub s: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub rounds: Vec<RoundLog>,
    pub verified: bool,
}

/// Evidence that the deletion budget was exceeded: the indiscernible
/// sequence (as base-graph centers) and the vertices that would have to go.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseCertificate {
    pub round: usize,
    pub sequence: Vec<Vertex>,
    pub candidates: Vec<Vertex>,
    pub already_deleted: usize,
    pub s_max: usize,
}

pub fn uqw_split(g: &Graph, a: &[Vertex], r: usize, m: usize, cfg: &UqwConfig) -> Result<UqwResult> {
    cfg.validate()?;
    if a.is_empty() {
        return Err(Error::input("A must not be empty"));
    }
    if r == 0 || m == 0 {
        return Err(Error::input("r and m must be at least 1"));
    }
    for &v in a {
        g.check_vertex(v)?;
    }
    let mut seq = a.to_vec();
    seq.sort_unstable();
    seq.dedup();

    let total_rounds = r.div_ceil(2);
    let rounds_to_run = cfg.max_rounds.map_or(total_rounds, |cap| cap.min(total_rounds));
    let mut deleted = vec![false; g.n()];
    let mut s: Vec<Vertex> = Vec::new();
    let mut logs = Vec::new();

    // round 1 works on G directly
    let arity = cfg.arity_for_round(1);
    let c = extract_indiscernible(g, &seq, &Delta::standard(arity)?, m)?;
    let added = heavy_vertices(g, &c, cfg, |_| true);
    commit(&mut s, &mut deleted, &added, &c, 1, cfg)?;
    let mut b = prune_to_independent(g, &c, 2, &deleted);
    debug_assert!(g.r_independent_unchecked(&b, 2, &deleted));
    logs.push(RoundLog {
        round: 1,
        arity,
        len_before: seq.len(),
        len_after: c.len(),
        added,
        kept: b.len(),
        graph_size: g.n(),
    });

    for i in 1..rounds_to_run {
        let round = i + 1;
        let arity = cfg.arity_for_round(round);

        // keep balls that are pairwise non-adjacent after contraction
        let h = g.contract_balls(&b, i, &s, true)?;
        let ball_ids: Vec<usize> = (0..b.len()).collect();
        let independent = extract_indiscernible(&h.graph, &ball_ids, &Delta::edge_only(), m)?;
        let independent = prune_to_independent(&h.graph, &independent, 1, &vec![false; h.graph.n()]);
        let centers: Vec<Vertex> = independent.iter().map(|&x| h.centers[x]).collect();

        // contract only the surviving balls so that deletions are ordinary vertices
        let minor = g.contract_balls(&centers, i, &s, true)?;
        let ball_ids: Vec<usize> = (0..centers.len()).collect();
        let c_ids = extract_indiscernible(&minor.graph, &ball_ids, &Delta::standard(arity)?, m)?;
        let heavy = heavy_vertices(&minor.graph, &c_ids, cfg, |x| {
            matches!(minor.origin[x], Origin::Base(_))
        });
        let added: Vec<Vertex> = {
            let mut v: Vec<Vertex> = heavy
                .iter()
                .map(|&x| match minor.origin[x] {
                    Origin::Base(v) => v,
                    Origin::Ball(_) => unreachable!("filtered to base vertices"),
                })
                .collect();
            v.sort_unstable();
            v
        };
        let c: Vec<Vertex> = c_ids.iter().map(|&x| minor.centers[x]).collect();
        commit(&mut s, &mut deleted, &added, &c, round, cfg)?;
        b = prune_to_independent(g, &c, 2 * round, &deleted);
        debug_assert!(g.r_independent_unchecked(&b, 2 * round, &deleted));
        logs.push(RoundLog {
            round,
            arity,
            len_before: centers.len(),
            len_after: c.len(),
            added,
            kept: b.len(),
            graph_size: minor.graph.n(),
        });
    }

    b.truncate(m);
    let verified = g.r_independent_unchecked(&b, r, &deleted);
    Ok(UqwResult {
        s,
        b,
        rounds: logs,
        verified,
    })
}

/// Vertices (passing `eligible`) adjacent to more than `theta·|seq|` and at
/// least two members of `seq`, in increasing id order.
fn heavy_vertices(g: &Graph, seq: &[Vertex], cfg: &UqwConfig, eligible: impl Fn(Vertex) -> bool) -> Vec<Vertex> {
    let mut hits = vec![0usize; g.n()];
    for &x in seq {
        for &y in g.neighbors(x) {
            hits[y] += 1;
        }
    }
    let bound = cfg.theta * seq.len() as f64;
    (0..g.n())
        .filter(|&y| hits[y] >= 2 && hits[y] as f64 > bound && eligible(y))
        .collect()
}

fn commit(
    s: &mut Vec<Vertex>,
    deleted: &mut [bool],
    added: &[Vertex],
    sequence: &[Vertex],
    round: usize,
    cfg: &UqwConfig,
) -> Result<()> {
    let fresh = added.iter().filter(|&&v| !deleted[v]).count();
    if s.len() + fresh > cfg.s_max {
        return Err(Error::TooDense(Box::new(DenseCertificate {
            round,
            sequence: sequence.to_vec(),
            candidates: added.to_vec(),
            already_deleted: s.len(),
            s_max: cfg.s_max,
        })));
    }
    for &v in added {
        if !deleted[v] {
            deleted[v] = true;
            s.push(v);
        }
    }
    s.sort_unstable();
    Ok(())
}

/// Greedy pruning in sequence order: an element survives when it is at
/// distance more than `radius` from every earlier survivor in `G - blocked`.
/// Blocked elements are dropped.
fn prune_to_independent(g: &Graph, seq: &[Vertex], radius: usize, blocked: &[bool]) -> Vec<Vertex> {
    let mut kept_mark = vec![false; g.n()];
    let mut kept = Vec::new();
    for &b in seq {
        if blocked[b] {
            continue;
        }
        let clash = g
            .bfs_raw(&[b], radius, Some(blocked))
            .into_iter()
            .any(|(w, _)| kept_mark[w]);
        if !clash {
            kept_mark[b] = true;
            kept.push(b);
        }
    }
    kept
}

/// Recheck a splitter result from scratch.
pub fn uqw_verify(g: &Graph, res: &UqwResult, a: &[Vertex], r: usize) -> bool {
    let in_range = res.s.iter().chain(&res.b).all(|&v| v < g.n());
    if !in_range {
        return false;
    }
    let mut in_a = vec![false; g.n()];
    for &v in a {
        if v < g.n() {
            in_a[v] = true;
        }
    }
    if !res.b.iter().all(|&v| in_a[v]) || res.s.iter().any(|v| res.b.contains(v)) {
        return false;
    }
    g.is_r_independent(&res.b, r, &res.s).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    fn grid(w: usize, h: usize) -> Graph {
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let v = y * w + x;
                if x + 1 < w {
                    edges.push((v, v + 1));
                }
                if y + 1 < h {
                    edges.push((v, v + w));
                }
            }
        }
        Graph::from_edges(w * h, &edges).unwrap()
    }

    #[test]
    fn edgeless_needs_no_deletions() {
        let g = Graph::empty(10);
        let a: Vec<_> = (0..10).collect();
        let res = uqw_split(&g, &a, 4, 10, &UqwConfig::default()).unwrap();
        assert!(res.s.is_empty());
        assert_eq!(res.b, a);
        assert!(res.verified);
        assert_eq!(res.rounds.len(), 2);
    }

    #[test]
    fn star_deletes_its_center() {
        let g = star(8);
        let leaves: Vec<_> = (1..=8).collect();
        let res = uqw_split(&g, &leaves, 2, 8, &UqwConfig::default()).unwrap();
        assert_eq!(res.s, vec![0]);
        assert_eq!(res.b, leaves);
        assert!(res.verified);
        assert!(uqw_verify(&g, &res, &leaves, 2));
    }

    #[test]
    fn tampered_result_fails_verification() {
        let g = star(8);
        let leaves: Vec<_> = (1..=8).collect();
        let mut res = uqw_split(&g, &leaves, 2, 8, &UqwConfig::default()).unwrap();
        res.s.clear();
        assert!(!uqw_verify(&g, &res, &leaves, 2));
        res.b = vec![3];
        assert!(uqw_verify(&g, &res, &leaves, 2));
        res.b = vec![0];
        assert!(!uqw_verify(&g, &res, &leaves, 2), "B must stay inside A");
    }

    #[test]
    fn grid_split_is_verified() {
        let g = grid(12, 12);
        let a: Vec<_> = (0..144).collect();
        let res = uqw_split(&g, &a, 2, 8, &UqwConfig::default()).unwrap();
        assert!(res.verified);
        assert!(res.s.len() <= 16);
        assert!(res.b.len() <= 8);
        assert!(uqw_verify(&g, &res, &a, 2));
    }

    #[test]
    fn large_clique_is_reported_dense() {
        let c = 40;
        let mut edges = Vec::new();
        for u in 0..c {
            for v in u + 1..c {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(c, &edges).unwrap();
        let a: Vec<_> = (0..c).collect();
        match uqw_split(&g, &a, 2, 4, &UqwConfig::default()) {
            Err(Error::TooDense(cert)) => {
                assert_eq!(cert.round, 1);
                assert!(cert.candidates.len() > 16);
            }
            other => panic!("expected dense certificate, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let g = star(3);
        let cfg = UqwConfig::default();
        assert!(uqw_split(&g, &[], 2, 1, &cfg).is_err());
        assert!(uqw_split(&g, &[1], 0, 1, &cfg).is_err());
        assert!(uqw_split(&g, &[9], 2, 1, &cfg).is_err());
        let bad = UqwConfig {
            theta: 0.0,
            ..UqwConfig::default()
        };
        assert!(uqw_split(&g, &[1], 2, 1, &bad).is_err());
    }

    #[test]
    fn odd_radius_uses_rounded_up_rounds() {
        let g = grid(6, 6);
        let a: Vec<_> = (0..36).collect();
        let res = uqw_split(&g, &a, 3, 36, &UqwConfig::default()).unwrap();
        assert_eq!(res.rounds.len(), 2);
        assert!(res.verified);
        assert!(g.is_r_independent(&res.b, 4, &res.s).unwrap());
    }
}
