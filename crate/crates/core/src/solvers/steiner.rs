use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug)]
pub struct SteinerInstance<'g> {
    pub graph: &'g Graph,
    pub terminals: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerTree {
    /// Edges with `u < v`, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Every vertex of the tree, terminals included, sorted.
    pub vertices: Vec<Vertex>,
    pub cost: usize,
}

#[derive(Clone, Copy)]
enum Back {
    None,
    Leaf,
    Merge(usize),
    Edge(Vertex),
}

const INF: usize = usize::MAX / 4;

/// Minimum Steiner tree with unit edge weights by the subset dynamic program
/// over `(terminal subset, vertex)` states.
pub fn dreyfus_wagner(inst: &SteinerInstance<'_>) -> Result<SteinerTree> {
    let g = inst.graph;
    let terms: Vec<Vertex> = {
        let set: BTreeSet<Vertex> = inst.terminals.iter().copied().collect();
        if set.len() != inst.terminals.len() {
            return Err(Error::input("terminals must be distinct"));
        }
        set.into_iter().collect()
    };
    if terms.is_empty() {
        return Err(Error::input("at least one terminal is required"));
    }
    for &t in &terms {
        g.check_vertex(t)?;
    }
    let reach = g.bfs_raw(&terms[..1], usize::MAX, None);
    let mut reached = vec![false; g.n()];
    for (v, _) in reach {
        reached[v] = true;
    }
    if let Some(&b) = terms.iter().find(|&&t| !reached[t]) {
        return Err(Error::Infeasible { a: terms[0], b });
    }
    if terms.len() == 1 {
        return Ok(SteinerTree { edges: vec![], vertices: terms, cost: 0 });
    }

    let n = g.n();
    let t = terms.len();
    let full = (1usize << t) - 1;
    let mut cost = vec![vec![INF; n]; full + 1];
    let mut back = vec![vec![Back::None; n]; full + 1];
    for (i, &term) in terms.iter().enumerate() {
        cost[1 << i][term] = 0;
        back[1 << i][term] = Back::Leaf;
    }
    for mask in 1..=full {
        if mask.count_ones() > 1 {
            let low = mask & mask.wrapping_neg();
            // proper submasks containing the lowest bit, each split counted once
            let mut sub = (mask - 1) & mask;
            while sub > 0 {
                if sub & low != 0 {
                    let other = mask ^ sub;
                    for v in 0..n {
                        let c = cost[sub][v] + cost[other][v];
                        if c < cost[mask][v] {
                            cost[mask][v] = c;
                            back[mask][v] = Back::Merge(sub);
                        }
                    }
                }
                sub = (sub - 1) & mask;
            }
        }
        relax(g, &mut cost[mask], &mut back[mask]);
    }

    let root = terms[0];
    let total = cost[full][root];
    let mut edges = BTreeSet::new();
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        match back[mask][v] {
            Back::Leaf => {}
            Back::Merge(sub) => {
                stack.push((sub, v));
                stack.push((mask ^ sub, v));
            }
            Back::Edge(u) => {
                edges.insert((u.min(v), u.max(v)));
                stack.push((mask, u));
            }
            Back::None => return Err(Error::Internal("Steiner back-pointer missing".into())),
        }
    }
    if edges.len() != total {
        return Err(Error::Internal(format!("Steiner tree has {} edges, cost {total}", edges.len())));
    }
    let mut vertices: BTreeSet<Vertex> = terms.iter().copied().collect();
    for &(u, v) in &edges {
        vertices.insert(u);
        vertices.insert(v);
    }
    Ok(SteinerTree {
        edges: edges.into_iter().collect(),
        vertices: vertices.into_iter().collect(),
        cost: total,
    })
}

/// Dijkstra with unit weights: `cost[v] = min(cost[v], cost[u] + 1)` along edges.
fn relax(g: &Graph, cost: &mut [usize], back: &mut [Back]) {
    let mut heap: BinaryHeap<Reverse<(usize, Vertex)>> = cost
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < INF)
        .map(|(v, &c)| Reverse((c, v)))
        .collect();
    while let Some(Reverse((c, u))) = heap.pop() {
        if c > cost[u] {
            continue;
        }
        for &w in g.neighbors(u) {
            if c + 1 < cost[w] {
                cost[w] = c + 1;
                back[w] = Back::Edge(u);
                heap.push(Reverse((c + 1, w)));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(g: &Graph, terminals: &[Vertex]) -> Result<SteinerTree> {
        dreyfus_wagner(&SteinerInstance { graph: g, terminals: terminals.to_vec() })
    }

    #[test]
    fn examples() {
        let p5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let single = solve(&p5, &[3]).unwrap();
        assert_eq!((single.cost, single.edges.len()), (0, 0));
        let t = solve(&p5, &[0, 4]).unwrap();
        assert_eq!(t.cost, 4);
        assert_eq!(t.vertices, vec![0, 1, 2, 3, 4]);

        let star = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let t = solve(&star, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(t.cost, 5);
        assert!(t.vertices.contains(&0));
    }

    #[test]
    fn disconnected_terminals_are_infeasible() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(solve(&g, &[0, 3]), Err(Error::Infeasible { .. })));
        assert!(solve(&g, &[1, 1]).is_err());
    }
}
