use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::graph::{Graph, Vertex};

/// Smallest-found distance-`r` dominating set of size at most `k`.
///
/// Branches on the `r`-ball of an undominated vertex whose ball is smallest
/// (ties to the smaller id), candidates in increasing id order. Two prunings keep it usable on kernel
/// instances, neither loses solutions: a candidate whose newly dominated set
/// is contained in another candidate's is skipped, and a branch stops when a
/// greedy packing of undominated vertices with disjoint `r`-balls needs more
/// dominators than remain. Failed `(undominated, budget)` states are cached.
pub fn exact_drds(g: &Graph, r: usize, k: usize) -> Option<Vec<Vertex>> {
    let balls: Vec<FixedBitSet> = g
        .vertices()
        .map(|v| {
            let mut b = FixedBitSet::with_capacity(g.n());
            for (u, _) in g.bfs_raw(&[v], r, None) {
                b.insert(u);
            }
            b
        })
        .collect();
    let mut undominated = FixedBitSet::with_capacity(g.n());
    undominated.insert_range(..);
    let sizes = balls.iter().map(|b| b.count_ones(..)).collect();
    let mut search = Search { balls: &balls, sizes, failed: HashSet::new(), chosen: Vec::new() };
    if search.run(&undominated, k) {
        let mut out = search.chosen;
        out.sort_unstable();
        Some(out)
    } else {
        None
    }
}

struct Search<'a> {
    balls: &'a [FixedBitSet],
    sizes: Vec<usize>,
    failed: HashSet<(FixedBitSet, usize)>,
    chosen: Vec<Vertex>,
}

impl Search<'_> {
    fn run(&mut self, undominated: &FixedBitSet, budget: usize) -> bool {
        let Some(pivot) = undominated.ones().min_by_key(|&u| (self.sizes[u], u)) else {
            return true;
        };
        if budget == 0 || self.packing_bound(undominated, budget) > budget {
            return false;
        }
        if self.failed.contains(&(undominated.clone(), budget)) {
            return false;
        }
        let gains: Vec<(Vertex, FixedBitSet)> = self.balls[pivot]
            .ones()
            .map(|c| {
                let mut gain = self.balls[c].clone();
                gain.intersect_with(undominated);
                (c, gain)
            })
            .collect();
        for (i, (c, gain)) in gains.iter().enumerate() {
            let dominated = gains.iter().enumerate().any(|(j, (_, other))| {
                j != i && gain.is_subset(other) && (gain != other || j < i)
            });
            if dominated {
                continue;
            }
            let mut rest = undominated.clone();
            rest.difference_with(gain);
            self.chosen.push(*c);
            if self.run(&rest, budget - 1) {
                return true;
            }
            self.chosen.pop();
        }
        self.failed.insert((undominated.clone(), budget));
        false
    }

    /// Size of a greedy family of undominated vertices with pairwise disjoint
    /// `r`-balls, smallest balls first, stopping once it exceeds `budget`.
    fn packing_bound(&self, undominated: &FixedBitSet, budget: usize) -> usize {
        let mut order: Vec<Vertex> = undominated.ones().collect();
        order.sort_by_key(|&u| (self.sizes[u], u));
        let mut covered = FixedBitSet::with_capacity(undominated.len());
        let mut count = 0;
        for u in order {
            if self.balls[u].is_disjoint(&covered) {
                covered.union_with(&self.balls[u]);
                count += 1;
                if count > budget {
                    break;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(exact_drds(&Graph::empty(0), 1, 0), Some(vec![]));
        let c6 = cycle(6);
        let sol = exact_drds(&c6, 1, 2).unwrap();
        assert_eq!(sol.len(), 2);
        assert_eq!(c6.bfs_limited(&sol, 1).unwrap().len(), 6);
        assert_eq!(exact_drds(&c6, 1, 1), None);
        let p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(exact_drds(&p5, 2, 1), Some(vec![2]));
    }

    #[test]
    fn isolated_vertices_need_themselves() {
        assert_eq!(exact_drds(&Graph::empty(3), 2, 2), None);
        assert_eq!(exact_drds(&Graph::empty(3), 2, 3), Some(vec![0, 1, 2]));
    }
}
