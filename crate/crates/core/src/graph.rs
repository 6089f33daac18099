//! Immutable simple undirected graphs stored in degeneracy order.
//!
//! Besides the usual sorted adjacency lists every vertex keeps the list of its
//! neighbours that come earlier in a degeneracy order `L`. An adjacency test
//! then only has to look at the smaller-neighbour list of the later endpoint,
//! which has at most `c` entries for a `c`-degenerate graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

const UNSEEN: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adjacency: Vec<Vec<Vertex>>,
    order: Vec<Vertex>,
    position: Vec<usize>,
    smaller_neighbors: Vec<Vec<Vertex>>,
    degeneracy: usize,
}

impl Graph {
    /// Builds a graph on `0..n` from an edge list. Self-loops and repeated
    /// edges are dropped.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted_adjacency(vec![Vec::new(); n])
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<Vertex>>) -> Graph {
        let n = adjacency.len();
        let m = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let order = peel_order(&adjacency);
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let smaller_neighbors: Vec<Vec<Vertex>> = adjacency
            .iter()
            .enumerate()
            .map(|(v, list)| {
                list.iter()
                    .copied()
                    .filter(|&w| position[w] < position[v])
                    .collect()
            })
            .collect();
        let degeneracy = smaller_neighbors.iter().map(Vec::len).max().unwrap_or(0);
        Graph {
            n,
            m,
            adjacency,
            order,
            position,
            smaller_neighbors,
            degeneracy,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degeneracy(&self) -> usize {
        self.degeneracy
    }

    /// The degeneracy order `L`.
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn smaller_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.smaller_neighbors[v]
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Adjacency test through the smaller-neighbour list of the endpoint that
    /// is later in `L`. Panics on out-of-range vertices.
    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        let (early, late) = if self.position[u] < self.position[v] {
            (u, v)
        } else {
            (v, u)
        };
        self.smaller_neighbors[late].binary_search(&early).is_ok()
    }

    pub fn try_adjacent(&self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.adjacent(u, v))
    }

    /// Multi-source BFS truncated at `depth`, skipping `blocked` vertices.
    /// Returns `(vertex, distance)` pairs in visiting order.
    pub(crate) fn bfs_raw(
        &self,
        sources: &[Vertex],
        depth: usize,
        blocked: Option<&[bool]>,
    ) -> Vec<(Vertex, usize)> {
        let is_blocked = |v: Vertex| blocked.is_some_and(|b| b[v]);
        let mut dist = vec![UNSEEN; self.n];
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        for &s in sources {
            if dist[s] == UNSEEN && !is_blocked(s) {
                dist[s] = 0;
                queue.push_back(s);
                out.push((s, 0));
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            if d == depth {
                continue;
            }
            for &w in &self.adjacency[u] {
                if dist[w] == UNSEEN && !is_blocked(w) {
                    dist[w] = d + 1;
                    queue.push_back(w);
                    out.push((w, d + 1));
                }
            }
        }
        out
    }

    /// Distances from the source set to every vertex within `depth`.
    pub fn bfs_limited(&self, sources: &[Vertex], depth: usize) -> Result<BTreeMap<Vertex, usize>> {
        if sources.is_empty() {
            return Err(Error::input("bfs_limited needs at least one source"));
        }
        for &s in sources {
            self.check_vertex(s)?;
        }
        Ok(self.bfs_raw(sources, depth, None).into_iter().collect())
    }

    /// Closed ball `N_r(v)` as a sorted vertex list.
    pub fn ball(&self, v: Vertex, r: usize) -> Vec<Vertex> {
        let mut ball: Vec<Vertex> = self.bfs_raw(&[v], r, None).into_iter().map(|(w, _)| w).collect();
        ball.sort_unstable();
        ball
    }

    pub fn closed_neighborhood(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = self.adjacency[v].clone();
        let pos = out.partition_point(|&w| w < v);
        out.insert(pos, v);
        out
    }

    pub fn distance_vector(&self, v: Vertex, anchors: &[Vertex], cap: usize) -> Result<DistanceVector> {
        self.check_vertex(v)?;
        let mut seen = BTreeSet::new();
        for &a in anchors {
            self.check_vertex(a)?;
            if !seen.insert(a) {
                return Err(Error::input(format!("anchor {a} listed twice")));
            }
        }
        Ok(self.distance_vector_unchecked(v, anchors, cap))
    }

    pub(crate) fn distance_vector_unchecked(&self, v: Vertex, anchors: &[Vertex], cap: usize) -> DistanceVector {
        let reached: BTreeMap<Vertex, usize> = self.bfs_raw(&[v], cap, None).into_iter().collect();
        let entries = anchors
            .iter()
            .map(|a| reached.get(a).map_or(Dist::Inf, |&d| Dist::Finite(d)))
            .collect();
        DistanceVector { entries, cap }
    }

    /// Whether all distinct members of `set` are at distance more than `r` in
    /// `G - forbidden`.
    pub fn is_r_independent(&self, set: &[Vertex], r: usize, forbidden: &[Vertex]) -> Result<bool> {
        let mut blocked = vec![false; self.n];
        for &f in forbidden {
            self.check_vertex(f)?;
            blocked[f] = true;
        }
        let mut member = vec![false; self.n];
        for &b in set {
            self.check_vertex(b)?;
            if blocked[b] {
                return Err(Error::input(format!("vertex {b} is both in the set and forbidden")));
            }
            if member[b] {
                return Err(Error::input(format!("vertex {b} listed twice")));
            }
            member[b] = true;
        }
        Ok(self.r_independent_unchecked(set, r, &blocked))
    }

    pub(crate) fn r_independent_unchecked(&self, set: &[Vertex], r: usize, blocked: &[bool]) -> bool {
        let mut member = vec![false; self.n];
        for &b in set {
            member[b] = true;
        }
        set.iter().all(|&b| {
            self.bfs_raw(&[b], r, Some(blocked))
                .into_iter()
                .all(|(w, _)| w == b || !member[w])
        })
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp: Vec<Vertex> = self
                .bfs_raw(&[s], usize::MAX, None)
                .into_iter()
                .map(|(v, _)| v)
                .collect();
            for &v in &comp {
                seen[v] = true;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether `set` induces a connected subgraph. The empty set counts as
    /// connected.
    pub fn induces_connected(&self, set: &[Vertex]) -> bool {
        let Some(&start) = set.first() else {
            return true;
        };
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        let blocked: Vec<bool> = inside.iter().map(|&b| !b).collect();
        let reached = self.bfs_raw(&[start], usize::MAX, Some(&blocked)).len();
        let distinct = inside.iter().filter(|&&b| b).count();
        reached == distinct
    }

    /// Contracts the depth-`depth` balls around `centers` in `G - avoid`.
    ///
    /// Contracted vertex `i` is the ball of `centers[i]`; remaining base
    /// vertices follow in increasing id order. Vertices of `avoid` are never
    /// absorbed into a ball; they are kept as ordinary vertices unless
    /// `drop_avoided` is set.
    pub fn contract_balls(
        &self,
        centers: &[Vertex],
        depth: usize,
        avoid: &[Vertex],
        drop_avoided: bool,
    ) -> Result<ContractedGraph<'_>> {
        let mut blocked = vec![false; self.n];
        for &a in avoid {
            self.check_vertex(a)?;
            blocked[a] = true;
        }
        let mut owner = vec![UNSEEN; self.n];
        let mut balls = Vec::with_capacity(centers.len());
        for (i, &c) in centers.iter().enumerate() {
            self.check_vertex(c)?;
            if blocked[c] {
                return Err(Error::input(format!("center {c} is in the avoided set")));
            }
            let mut ball = Vec::new();
            for (w, _) in self.bfs_raw(&[c], depth, Some(&blocked)) {
                if owner[w] != UNSEEN {
                    return Err(Error::OverlappingBalls {
                        a: centers[owner[w]],
                        b: c,
                        shared: w,
                    });
                }
                owner[w] = i;
                ball.push(w);
            }
            ball.sort_unstable();
            balls.push(ball);
        }

        let mut to_contracted = vec![None; self.n];
        let mut origin: Vec<Origin> = (0..centers.len()).map(Origin::Ball).collect();
        for v in 0..self.n {
            if owner[v] != UNSEEN {
                to_contracted[v] = Some(owner[v]);
            } else if !(drop_avoided && blocked[v]) {
                to_contracted[v] = Some(origin.len());
                origin.push(Origin::Base(v));
            }
        }
        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            if let (Some(a), Some(b)) = (to_contracted[u], to_contracted[v]) {
                if a != b {
                    edges.push((a, b));
                }
            }
        }
        let graph = Graph::from_edges(origin.len(), &edges)?;
        Ok(ContractedGraph {
            base: self,
            depth,
            centers: centers.to_vec(),
            ball_members: balls,
            origin,
            to_contracted,
            graph,
        })
    }
}

/// Greedy min-degree peeling, ties broken by smallest id.
fn peel_order(adjacency: &[Vec<Vertex>]) -> Vec<Vertex> {
    let n = adjacency.len();
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        removed[v] = true;
        order.push(v);
        for &w in &adjacency[v] {
            if !removed[w] {
                queue.remove(&(degree[w], w));
                degree[w] -= 1;
                queue.insert((degree[w], w));
            }
        }
    }
    // each peeled vertex has at most `c` neighbours peeled after it
    order.reverse();
    order
}

/// A distance that is either at most the cap or beyond it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dist {
    Finite(usize),
    Inf,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DistanceVector {
    pub entries: Vec<Dist>,
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Ball(usize),
    Base(Vertex),
}

/// A depth-`depth` minor obtained by contracting disjoint balls.
#[derive(Clone, Debug)]
pub struct ContractedGraph<'g> {
    pub base: &'g Graph,
    pub depth: usize,
    pub centers: Vec<Vertex>,
    pub ball_members: Vec<Vec<Vertex>>,
    pub origin: Vec<Origin>,
    to_contracted: Vec<Option<usize>>,
    pub graph: Graph,
}

impl ContractedGraph<'_> {
    /// Contracted id of a base vertex, `None` for dropped vertices.
    pub fn contracted_id(&self, v: Vertex) -> Option<usize> {
        self.to_contracted[v]
    }

    /// Base vertices represented by contracted vertex `x`.
    pub fn members(&self, x: usize) -> &[Vertex] {
        match &self.origin[x] {
            Origin::Ball(i) => &self.ball_members[*i],
            Origin::Base(v) => std::slice::from_ref(v),
        }
    }

    pub fn ball_count(&self) -> usize {
        self.centers.len()
    }
}
