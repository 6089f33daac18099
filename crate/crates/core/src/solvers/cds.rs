use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::uqw::{uqw_split, UqwConfig};

use super::steiner::{dreyfus_wagner, SteinerInstance};

fn closed_neighborhoods(g: &Graph) -> Vec<FixedBitSet> {
    g.vertices()
        .map(|v| {
            let mut b = FixedBitSet::with_capacity(g.n());
            b.insert(v);
            for &u in g.neighbors(v) {
                b.insert(u);
            }
            b
        })
        .collect()
}

pub fn is_connected_dominating(g: &Graph, set: &[Vertex]) -> bool {
    if set.is_empty() {
        return g.n() == 0;
    }
    if set.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let covered = g.bfs_raw(set, 1, None).len();
    covered == g.n() && g.induces_connected(set)
}

/// First connected dominating set of size at most `k` in (size, lexicographic)
/// order.
pub fn brute_cds(g: &Graph, k: usize) -> Option<Vec<Vertex>> {
    if g.n() == 0 {
        return Some(vec![]);
    }
    let nbhd = closed_neighborhoods(g);
    for size in 1..=k.min(g.n()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut cover = FixedBitSet::with_capacity(g.n());
            for &v in &idx {
                cover.union_with(&nbhd[v]);
            }
            if cover.count_ones(..) == g.n() && g.induces_connected(&idx) {
                return Some(idx);
            }
            // advance to the next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == g.n() - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// `4·(k+1)²`.
pub fn default_k_threshold(k: usize) -> usize {
    4 * (k + 1) * (k + 1)
}

/// A branching step: every connected dominating set of size at most `k`
/// containing `x` must contain a vertex of `s` outside `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchEvent {
    pub x: Vec<Vertex>,
    pub w: Vec<Vertex>,
    pub s: Vec<Vertex>,
    pub b: Vec<Vertex>,
}

pub fn cds_fpt(g: &Graph, k: usize, cfg: &UqwConfig, k_threshold: usize) -> Result<Option<Vec<Vertex>>> {
    cds_fpt_traced(g, k, cfg, k_threshold, &mut |_| {})
}

/// [`cds_fpt`] reporting every branching step to `trace`.
pub fn cds_fpt_traced(
    g: &Graph,
    k: usize,
    cfg: &UqwConfig,
    k_threshold: usize,
    trace: &mut dyn FnMut(&BranchEvent),
) -> Result<Option<Vec<Vertex>>> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if k_threshold < k + 2 {
        return Err(Error::Config(format!("K threshold must be at least k+2 = {}", k + 2)));
    }
    cfg.validate()?;
    match g.n() {
        0 => return Ok(Some(vec![])),
        1 => return Ok(Some(vec![0])),
        _ => {}
    }
    if g.components().len() > 1 {
        return Ok(None);
    }
    let mut solver = Fpt {
        g,
        k,
        cfg,
        k_threshold,
        nbhd: closed_neighborhoods(g),
        trace,
        leaf_memo: HashMap::new(),
        dead: HashSet::new(),
    };
    let mut w = FixedBitSet::with_capacity(g.n());
    w.insert_range(..);
    solver.node(&mut Vec::new(), &w)
}

/// Leaf answers keyed by `(X, dominator sets of the partition blocks)`.
type LeafMemo = HashMap<(Vec<Vertex>, Vec<FixedBitSet>), Option<Vec<Vertex>>>;

struct Fpt<'a> {
    g: &'a Graph,
    k: usize,
    cfg: &'a UqwConfig,
    k_threshold: usize,
    nbhd: Vec<FixedBitSet>,
    trace: &'a mut dyn FnMut(&BranchEvent),
    leaf_memo: LeafMemo,
    /// Enumeration states `(position, sorted dominator sets)` known to fail
    /// for the current leaf.
    dead: HashSet<(usize, Vec<FixedBitSet>)>,
}

impl Fpt<'_> {
    fn node(&mut self, x: &mut Vec<Vertex>, w: &FixedBitSet) -> Result<Option<Vec<Vertex>>> {
        let i = x.len();
        if i == self.k {
            let ok = w.is_clear() && self.g.induces_connected(x);
            return Ok(ok.then(|| sorted(x)));
        }
        let w_list: Vec<Vertex> = w.ones().collect();
        if w_list.len() >= self.k_threshold {
            match uqw_split(self.g, &w_list, 2, self.k + 1, self.cfg) {
                Ok(split) if split.verified && split.b.len() > self.k - i => {
                    (self.trace)(&BranchEvent {
                        x: sorted(x),
                        w: w_list.clone(),
                        s: split.s.clone(),
                        b: split.b.clone(),
                    });
                    for &v in &split.s {
                        if x.contains(&v) {
                            continue;
                        }
                        let mut rest = w.clone();
                        rest.difference_with(&self.nbhd[v]);
                        x.push(v);
                        let found = self.node(x, &rest)?;
                        x.pop();
                        if found.is_some() {
                            return Ok(found);
                        }
                    }
                    return Ok(None);
                }
                Ok(split) => {
                    log::debug!(
                        "cds: splitter kept {} of {} at depth {i}, solving as a leaf",
                        split.b.len(),
                        w_list.len()
                    );
                }
                Err(Error::TooDense(cert)) => {
                    log::debug!("cds: splitter too dense in round {}, solving as a leaf", cert.round);
                }
                Err(e) => return Err(e),
            }
        }
        self.leaf(x, &w_list)
    }

    fn leaf(&mut self, x: &[Vertex], w: &[Vertex]) -> Result<Option<Vec<Vertex>>> {
        let slots = self.k - x.len();
        if w.is_empty() {
            return self.steiner_leaf(x, &[]);
        }
        if self.packing(w, slots + 1) > slots {
            return Ok(None);
        }
        self.dead.clear();
        let mut blocks: Vec<(Vec<Vertex>, FixedBitSet)> = Vec::new();
        self.partitions(x, w, 0, slots, &mut blocks)
    }

    /// Greedy count of members of `w` with pairwise disjoint closed
    /// neighbourhoods, stopping at `limit`. Such members need distinct blocks.
    fn packing(&self, w: &[Vertex], limit: usize) -> usize {
        let mut covered = FixedBitSet::with_capacity(self.g.n());
        let mut count = 0;
        for &u in w {
            if self.nbhd[u].is_disjoint(&covered) {
                covered.union_with(&self.nbhd[u]);
                count += 1;
                if count >= limit {
                    break;
                }
            }
        }
        count
    }

    /// Restricted-growth enumeration: `w[pos]` joins an existing block or
    /// opens a new one, as long as every block keeps a common dominator.
    /// What remains to be tried depends only on `pos` and the multiset of
    /// dominator sets, so failed states are remembered under that key.
    fn partitions(
        &mut self,
        x: &[Vertex],
        w: &[Vertex],
        pos: usize,
        slots: usize,
        blocks: &mut Vec<(Vec<Vertex>, FixedBitSet)>,
    ) -> Result<Option<Vec<Vertex>>> {
        if pos == w.len() {
            let doms: Vec<FixedBitSet> = blocks.iter().map(|(_, d)| d.clone()).collect();
            return self.steiner_leaf(x, &doms);
        }
        if !self.remaining_fit(w, pos, slots, blocks) {
            return Ok(None);
        }
        let mut state: Vec<FixedBitSet> = blocks.iter().map(|(_, d)| d.clone()).collect();
        state.sort();
        let state = (pos, state);
        if self.dead.contains(&state) {
            return Ok(None);
        }
        let found = self.extend(x, w, pos, slots, blocks)?;
        if found.is_none() {
            self.dead.insert(state);
        }
        Ok(found)
    }

    fn extend(
        &mut self,
        x: &[Vertex],
        w: &[Vertex],
        pos: usize,
        slots: usize,
        blocks: &mut Vec<(Vec<Vertex>, FixedBitSet)>,
    ) -> Result<Option<Vec<Vertex>>> {
        let u = w[pos];
        for j in 0..blocks.len() {
            let mut d = blocks[j].1.clone();
            d.intersect_with(&self.nbhd[u]);
            if d.is_clear() {
                continue;
            }
            let saved = std::mem::replace(&mut blocks[j].1, d);
            blocks[j].0.push(u);
            let found = self.partitions(x, w, pos + 1, slots, blocks)?;
            blocks[j].0.pop();
            blocks[j].1 = saved;
            if found.is_some() {
                return Ok(found);
            }
        }
        if blocks.len() < slots {
            blocks.push((vec![u], self.nbhd[u].clone()));
            let found = self.partitions(x, w, pos + 1, slots, blocks)?;
            blocks.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Unplaced members that fit no current block and have pairwise disjoint
    /// closed neighbourhoods each need a new block.
    fn remaining_fit(&self, w: &[Vertex], pos: usize, slots: usize, blocks: &[(Vec<Vertex>, FixedBitSet)]) -> bool {
        let free = slots - blocks.len();
        let mut covered = FixedBitSet::with_capacity(self.g.n());
        let mut need = 0;
        for &u in &w[pos..] {
            let joinable = blocks.iter().any(|(_, d)| !d.is_disjoint(&self.nbhd[u]));
            if !joinable && self.nbhd[u].is_disjoint(&covered) {
                covered.union_with(&self.nbhd[u]);
                need += 1;
                if need > free {
                    return false;
                }
            }
        }
        true
    }

    /// Connects `x` and one dominator per block by a minimum Steiner tree in
    /// the graph with a terminal hanging off each block's dominators.
    fn steiner_leaf(&mut self, x: &[Vertex], doms: &[FixedBitSet]) -> Result<Option<Vec<Vertex>>> {
        if x.is_empty() && doms.len() == 1 {
            let v = doms[0].ones().next().expect("blocks keep a dominator");
            return Ok(Some(vec![v]));
        }
        let key = (sorted(x), {
            let mut d = doms.to_vec();
            d.sort();
            d
        });
        if let Some(hit) = self.leaf_memo.get(&key) {
            return Ok(hit.clone());
        }
        let result = self.solve_steiner(x, doms)?;
        self.leaf_memo.insert(key, result.clone());
        Ok(result)
    }

    fn solve_steiner(&self, x: &[Vertex], doms: &[FixedBitSet]) -> Result<Option<Vec<Vertex>>> {
        let n = self.g.n();
        let mut edges: Vec<(Vertex, Vertex)> = self.g.edges().collect();
        let mut next = n;
        let mut terminals = x.to_vec();
        for d in doms {
            let t = next;
            next += 1;
            terminals.push(t);
            for v in d.ones() {
                let (p1, p2) = (next, next + 1);
                next += 2;
                edges.extend([(v, p1), (p1, p2), (p2, t)]);
            }
        }
        let augmented = Graph::from_edges(next, &edges)?;
        let tree = dreyfus_wagner(&SteinerInstance { graph: &augmented, terminals: terminals.clone() })?;
        for &t in &terminals[x.len()..] {
            let degree = tree.edges.iter().filter(|&&(a, b)| a == t || b == t).count();
            if degree != 1 {
                log::warn!("cds: terminal {t} has degree {degree} in the Steiner tree, leaf rejected");
                return Ok(None);
            }
        }
        let kept: Vec<Vertex> = tree.vertices.into_iter().filter(|&v| v < n).collect();
        if kept.len() <= self.k && is_connected_dominating(self.g, &kept) {
            Ok(Some(kept))
        } else {
            Ok(None)
        }
    }
}

fn sorted(x: &[Vertex]) -> Vec<Vertex> {
    let mut v = x.to_vec();
    v.sort_unstable();
    v
}
