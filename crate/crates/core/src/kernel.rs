//! Polynomial kernel for distance-`r` dominating set.
//!
//! The pipeline shrinks `Z = V(G)` to an `r`-domination core by repeatedly
//! discarding irrelevant dominatees, collapses vertices with equal
//! `Z`-projections to representatives `Y`, and builds `(H, k + 1)` from
//! `Z ∪ Y`, shortest projection paths and a gadget `v, v′`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DistanceVector, Graph, Vertex};
use crate::uqw::{uqw_split, UqwConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoreConfig {
    pub r: usize,
    pub k: usize,
    /// Cores of at most this size are not shrunk further.
    pub ell: usize,
    pub uqw: UqwConfig,
    /// How often `A` is doubled when no bucket is large enough.
    pub retries: usize,
    /// Remove all but `k + 1` members of a bucket at once.
    pub batch: bool,
}

impl CoreConfig {
    pub fn new(r: usize, k: usize) -> CoreConfig {
        CoreConfig {
            r,
            k,
            ell: default_ell(r, k),
            uqw: UqwConfig::default(),
            retries: 3,
            batch: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.k == 0 {
            return Err(Error::Config("r and k must be at least 1".into()));
        }
        if self.ell < self.k + 2 {
            return Err(Error::Config(format!("ell must be at least k+2 = {}", self.k + 2)));
        }
        self.uqw.validate()
    }
}

/// `max(4·(k+2)·(2r+1)², 64)`.
pub fn default_ell(r: usize, k: usize) -> usize {
    let side = 2 * r + 1;
    (4 * (k + 2) * side * side).max(64)
}

/// Why a set of vertices could be dropped from `Z`: `bucket` is
/// `2r`-independent in `G - s` and all members share the distance vector
/// `vector` to `s` (capped at `2r`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalWitness {
    pub s: Vec<Vertex>,
    pub bucket: Vec<Vertex>,
    pub vector: DistanceVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub removed: Vec<Vertex>,
    pub witness: RemovalWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationCore {
    pub z: Vec<Vertex>,
    pub removal_log: Vec<Removal>,
    /// Set when the loop stopped above `ell` because no bucket was found.
    pub stalled: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representatives {
    /// Representatives in increasing id order.
    pub y: Vec<Vertex>,
    /// `N_r(y) ∩ Z` for each `y`, sorted.
    pub projection: BTreeMap<Vertex, Vec<Vertex>>,
    pub class_of: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub v: Vertex,
    pub v_prime: Vertex,
    /// Internal vertices of all paths leaving `v`.
    pub path_vertices: Vec<Vertex>,
}

#[derive(Clone, Debug)]
pub struct KernelInstance {
    pub h: Graph,
    pub r: usize,
    pub k_new: usize,
    /// Original vertex to its copy in `H`.
    pub z_in_h: BTreeMap<Vertex, Vertex>,
    pub y_in_h: BTreeMap<Vertex, Vertex>,
    pub gadget: Gadget,
    pub projection_ok: bool,
}

/// Looks for dominatees that can leave `z` without changing which sets of
/// size at most `k` dominate it. Returns the vertex to drop (`b_1`) and its
/// witness, or `None` when `|z| ≤ ell` or no bucket of size `k + 2` turned up.
pub fn find_irrelevant_dominatee(
    g: &Graph,
    z: &[Vertex],
    cfg: &CoreConfig,
) -> Result<Option<(Vertex, RemovalWitness)>> {
    cfg.validate()?;
    Ok(search_bucket(g, z, cfg)?.ok().map(|w| (w.bucket[0], w)))
}

/// `Ok(Err(diagnostic))` when nothing was found above the threshold.
fn search_bucket(g: &Graph, z: &[Vertex], cfg: &CoreConfig) -> Result<Result<RemovalWitness, String>> {
    for &v in z {
        g.check_vertex(v)?;
    }
    if z.len() <= cfg.ell {
        return Ok(Err(String::new()));
    }
    let mut sorted = z.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let radius = 2 * cfg.r;
    let mut size = cfg.ell;
    let mut attempts = Vec::new();
    for _ in 0..=cfg.retries {
        let a = &sorted[..size.min(sorted.len())];
        let split = uqw_split(g, a, radius, a.len(), &cfg.uqw)?;
        if split.verified {
            let want = bucket_request(cfg.k, cfg.r, split.s.len()).min(a.len());
            let b = &split.b[..want.min(split.b.len())];
            let mut buckets: BTreeMap<DistanceVector, Vec<Vertex>> = BTreeMap::new();
            for &x in b {
                buckets
                    .entry(g.distance_vector_unchecked(x, &split.s, radius))
                    .or_default()
                    .push(x);
            }
            let best = buckets
                .into_iter()
                .filter(|(_, members)| members.len() >= cfg.k + 2)
                .max_by(|(va, ma), (vb, mb)| ma.len().cmp(&mb.len()).then_with(|| vb.cmp(va)));
            if let Some((vector, mut bucket)) = best {
                bucket.sort_unstable();
                return Ok(Ok(RemovalWitness { s: split.s, bucket, vector }));
            }
            attempts.push(format!("|A|={} |S|={} |B|={}", a.len(), split.s.len(), b.len()));
        } else {
            attempts.push(format!("|A|={} unverified split", a.len()));
        }
        if size >= sorted.len() {
            break;
        }
        size *= 2;
    }
    Ok(Err(format!("no bucket with {} members: {}", cfg.k + 2, attempts.join("; "))))
}

/// Size guess for `S` used before the splitter has run.
const S_GUESS: usize = 4;

/// `(k+2)·(2r+1)^max(s, S_GUESS)`, saturating. The guess only grows when the
/// splitter deleted more than `S_GUESS` vertices.
fn bucket_request(k: usize, r: usize, s: usize) -> usize {
    let base = 2 * r + 1;
    let mut m = k + 2;
    for _ in 0..s.max(S_GUESS) {
        m = m.saturating_mul(base);
    }
    m
}

/// Which bucket members to drop: `b_1` alone, or in batch mode `b_1` and
/// every member after the first `k + 2`.
fn removal_set(bucket: &[Vertex], k: usize, batch: bool) -> Vec<Vertex> {
    if batch {
        let mut out = vec![bucket[0]];
        out.extend_from_slice(&bucket[(k + 2).min(bucket.len())..]);
        out
    } else {
        vec![bucket[0]]
    }
}

pub fn domination_core(g: &Graph, cfg: &CoreConfig) -> Result<DominationCore> {
    cfg.validate()?;
    let mut in_z = vec![true; g.n()];
    let mut z: Vec<Vertex> = g.vertices().collect();
    let mut log = Vec::new();
    let stalled = loop {
        match search_bucket(g, &z, cfg)? {
            Ok(witness) => {
                let removed = removal_set(&witness.bucket, cfg.k, cfg.batch);
                for &w in &removed {
                    in_z[w] = false;
                }
                z.retain(|&v| in_z[v]);
                log::debug!("core: removed {} vertices, |Z| = {}", removed.len(), z.len());
                log.push(Removal { removed, witness });
            }
            Err(diag) if diag.is_empty() => break None,
            Err(diag) => {
                log::info!("core stalled at |Z| = {}: {diag}", z.len());
                break Some(diag);
            }
        }
    };
    Ok(DominationCore { z, removal_log: log, stalled })
}

/// Independent check of one removal against the `Z` it was applied to.
pub fn verify_removal(g: &Graph, z: &[Vertex], removal: &Removal, r: usize, k: usize) -> bool {
    let w = &removal.witness;
    let in_z: BTreeSet<Vertex> = z.iter().copied().collect();
    let bucket: BTreeSet<Vertex> = w.bucket.iter().copied().collect();
    if bucket.len() != w.bucket.len() || !bucket.iter().all(|v| in_z.contains(v)) {
        return false;
    }
    if !removal.removed.iter().all(|v| bucket.contains(v)) {
        return false;
    }
    let removed: BTreeSet<Vertex> = removal.removed.iter().copied().collect();
    if bucket.len() - removed.len() < k + 1 || removed.is_empty() {
        return false;
    }
    let same_vector = w
        .bucket
        .iter()
        .all(|&b| g.distance_vector(b, &w.s, 2 * r).is_ok_and(|dv| dv == w.vector));
    same_vector && g.is_r_independent(&w.bucket, 2 * r, &w.s).unwrap_or(false)
}

pub fn reduce_dominators(g: &Graph, z: &[Vertex], r: usize) -> Result<Representatives> {
    let mut zs = z.to_vec();
    zs.sort_unstable();
    zs.dedup();
    let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for &zv in &zs {
        g.check_vertex(zv)?;
        for (v, _) in g.bfs_raw(&[zv], r, None) {
            lists[v].push(zv);
        }
    }
    let mut by_list: Vec<Vertex> = g.vertices().collect();
    by_list.sort_by(|&a, &b| lists[a].cmp(&lists[b]).then(a.cmp(&b)));
    let mut class_of = vec![0; g.n()];
    let mut projection = BTreeMap::new();
    let mut i = 0;
    while i < by_list.len() {
        let rep = by_list[i];
        let mut j = i;
        while j < by_list.len() && lists[by_list[j]] == lists[rep] {
            class_of[by_list[j]] = rep;
            j += 1;
        }
        projection.insert(rep, lists[rep].clone());
        i = j;
    }
    let y = projection.keys().copied().collect();
    Ok(Representatives { y, projection, class_of })
}

pub fn build_kernel(g: &Graph, z: &[Vertex], reps: &Representatives, r: usize, k: usize) -> Result<KernelInstance> {
    if r == 0 {
        return Err(Error::input("r must be at least 1"));
    }
    let mut zs = z.to_vec();
    zs.sort_unstable();
    zs.dedup();
    let z_set: BTreeSet<Vertex> = zs.iter().copied().collect();
    let originals: BTreeSet<Vertex> = zs.iter().chain(&reps.y).copied().collect();
    let copy: BTreeMap<Vertex, Vertex> = originals.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut next = copy.len();
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut attach: Vec<Vertex> = reps
        .y
        .iter()
        .filter(|y| !z_set.contains(y))
        .map(|y| copy[y])
        .collect();

    for &y in &reps.y {
        g.check_vertex(y)?;
        let proj = &reps.projection[&y];
        if proj.is_empty() {
            continue;
        }
        let dist = g.bfs_limited(&[y], r)?;
        for &zv in proj {
            if zv == y {
                continue;
            }
            let d = *dist.get(&zv).ok_or_else(|| {
                Error::Internal(format!("projected vertex {zv} is farther than {r} from {y}"))
            })?;
            let internals = lay_path(&mut edges, &mut next, copy[&y], copy[&zv], d);
            attach.extend(internals);
        }
    }

    let v = next;
    let v_prime = next + 1;
    next += 2;
    attach.push(v_prime);
    let mut path_vertices = Vec::new();
    for &t in &attach {
        path_vertices.extend(lay_path(&mut edges, &mut next, v, t, r));
    }
    let h = Graph::from_edges(next, &edges)?;

    let z_in_h: BTreeMap<Vertex, Vertex> = zs.iter().map(|&x| (x, copy[&x])).collect();
    let y_in_h: BTreeMap<Vertex, Vertex> = reps.y.iter().map(|&x| (x, copy[&x])).collect();
    let mut inst = KernelInstance {
        h,
        r,
        k_new: k + 1,
        z_in_h,
        y_in_h,
        gadget: Gadget { v, v_prime, path_vertices },
        projection_ok: false,
    };
    inst.projection_ok = projections_match(&inst, reps);
    if !inst.projection_ok {
        return Err(Error::Internal("kernel graph changed a Z-projection".into()));
    }
    Ok(inst)
}

/// Joins `a` and `b` by a path of `len` edges through fresh vertices and
/// returns the fresh vertices.
fn lay_path(edges: &mut Vec<(Vertex, Vertex)>, next: &mut usize, a: Vertex, b: Vertex, len: usize) -> Vec<Vertex> {
    let fresh: Vec<Vertex> = (*next..*next + len - 1).collect();
    *next += len - 1;
    let mut prev = a;
    for &x in &fresh {
        edges.push((prev, x));
        prev = x;
    }
    edges.push((prev, b));
    fresh
}

/// Rechecks `N_r^H(y) ∩ Z = N_r^G(y) ∩ Z` for every representative.
fn projections_match(inst: &KernelInstance, reps: &Representatives) -> bool {
    let back: BTreeMap<Vertex, Vertex> = inst.z_in_h.iter().map(|(&orig, &hv)| (hv, orig)).collect();
    reps.y.iter().all(|y| {
        let mut seen: Vec<Vertex> = inst
            .h
            .bfs_raw(&[inst.y_in_h[y]], inst.r, None)
            .into_iter()
            .filter_map(|(hv, _)| back.get(&hv).copied())
            .collect();
        seen.sort_unstable();
        seen == reps.projection[y]
    })
}

pub struct Kernelization {
    pub core: DominationCore,
    pub reps: Representatives,
    pub instance: KernelInstance,
}

pub fn kernelize(g: &Graph, cfg: &CoreConfig) -> Result<KernelInstance> {
    Ok(kernelize_staged(g, cfg)?.instance)
}

pub fn kernelize_staged(g: &Graph, cfg: &CoreConfig) -> Result<Kernelization> {
    let core = domination_core(g, cfg)?;
    let reps = reduce_dominators(g, &core.z, cfg.r)?;
    let instance = build_kernel(g, &core.z, &reps, cfg.r, cfg.k)?;
    Ok(Kernelization { core, reps, instance })
}

fn join(ids: impl IntoIterator<Item = Vertex>) -> String {
    ids.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl KernelInstance {
    /// Edge list of `H` preceded by `k_new`, `r`, `z`, `y` and `gadget` comment lines (ids in `H`).
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# k_new={}", self.k_new).unwrap();
        writeln!(out, "# r={}", self.r).unwrap();
        writeln!(out, "# z={}", join(self.z_in_h.values().copied())).unwrap();
        writeln!(out, "# y={}", join(self.y_in_h.values().copied())).unwrap();
        let mut gadget = vec![self.gadget.v, self.gadget.v_prime];
        gadget.extend(&self.gadget.path_vertices);
        writeln!(out, "# gadget={}", join(gadget)).unwrap();
        out.push_str(&crate::edgelist::graph_to_string(&self.h));
        out
    }
}
