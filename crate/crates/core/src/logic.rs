//! The formula family `Δ_k`, indiscernibility checks and extraction of
//! indiscernible subsequences via type trees.
//!
//! `Δ_k` consists of the edge relation plus, for `1 ≤ i ≤ k`,
//!
//! * `φ_i(x_1..x_k) = ∃y (y ~ x_1..x_i  ∧  y ≁ x_{i+1}..x_k)`
//! * `ψ_i(x_1..x_k) = ∃y (y ~ x_{i+1}..x_k  ∧  y ≁ x_1..x_i)`
//!
//! where `~` is the (irreflexive) edge relation. The witness `y` ranges over
//! all vertices, including the arguments themselves.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormulaKind {
    Edge,
    Phi,
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormulaId {
    pub kind: FormulaKind,
    /// Split index `i`; zero for the edge formula.
    pub split: usize,
    pub arity: usize,
}

impl FormulaId {
    pub const EDGE: FormulaId = FormulaId {
        kind: FormulaKind::Edge,
        split: 0,
        arity: 2,
    };

    pub fn phi(i: usize, k: usize) -> Result<FormulaId> {
        Self::split_formula(FormulaKind::Phi, i, k)
    }

    pub fn psi(i: usize, k: usize) -> Result<FormulaId> {
        Self::split_formula(FormulaKind::Psi, i, k)
    }

    fn split_formula(kind: FormulaKind, i: usize, k: usize) -> Result<FormulaId> {
        if i == 0 || i > k {
            return Err(Error::input(format!("split index {i} outside 1..={k}")));
        }
        Ok(FormulaId { kind, split: i, arity: k })
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FormulaKind::Edge => write!(f, "E"),
            FormulaKind::Phi => write!(f, "phi[{},{}]", self.split, self.arity),
            FormulaKind::Psi => write!(f, "psi[{},{}]", self.split, self.arity),
        }
    }
}

/// An ordered, duplicate-free set of formulas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta {
    formulas: Vec<FormulaId>,
}

impl Delta {
    pub fn new(formulas: Vec<FormulaId>) -> Result<Delta> {
        let mut seen = HashSet::new();
        for f in &formulas {
            if !seen.insert(*f) {
                return Err(Error::input(format!("formula {f} listed twice")));
            }
        }
        Ok(Delta { formulas })
    }

    pub fn edge_only() -> Delta {
        Delta {
            formulas: vec![FormulaId::EDGE],
        }
    }

    /// `Δ_k`: the edge formula, then `φ_1..φ_k`, then `ψ_1..ψ_k`.
    pub fn standard(k: usize) -> Result<Delta> {
        if k == 0 {
            return Err(Error::input("Δ_k needs k ≥ 1"));
        }
        let mut formulas = vec![FormulaId::EDGE];
        formulas.extend((1..=k).map(|i| FormulaId::phi(i, k).unwrap()));
        formulas.extend((1..=k).map(|i| FormulaId::psi(i, k).unwrap()));
        Ok(Delta { formulas })
    }

    pub fn formulas(&self) -> &[FormulaId] {
        &self.formulas
    }

    pub fn max_arity(&self) -> usize {
        self.formulas.iter().map(|f| f.arity).max().unwrap_or(0)
    }
}

pub fn eval_formula(g: &Graph, f: FormulaId, args: &[Vertex]) -> Result<bool> {
    if args.len() != f.arity {
        return Err(Error::input(format!(
            "{f} takes {} arguments, got {}",
            f.arity,
            args.len()
        )));
    }
    for &a in args {
        g.check_vertex(a)?;
    }
    Ok(holds(g, f, args))
}

#[inline]
pub(crate) fn holds(g: &Graph, f: FormulaId, args: &[Vertex]) -> bool {
    match f.kind {
        FormulaKind::Edge => g.adjacent(args[0], args[1]),
        FormulaKind::Phi => exists_witness(g, &args[..f.split], &args[f.split..]),
        FormulaKind::Psi => exists_witness(g, &args[f.split..], &args[..f.split]),
    }
}

/// Is there a vertex adjacent to everything in `pos` and to nothing in `neg`?
fn exists_witness(g: &Graph, pos: &[Vertex], neg: &[Vertex]) -> bool {
    let avoids_neg = |y: Vertex| neg.iter().all(|&q| !g.adjacent(y, q));
    match pos.iter().min_by_key(|&&p| g.degree(p)) {
        Some(&pivot) => g
            .neighbors(pivot)
            .iter()
            .any(|&y| pos.iter().all(|&p| p == pivot || g.adjacent(y, p)) && avoids_neg(y)),
        None => {
            let covered: usize = neg.iter().map(|&q| g.degree(q)).sum();
            covered < g.n() || g.vertices().any(avoids_neg)
        }
    }
}

/// Calls `visit` with every increasing index tuple of length `size` over
/// `0..len`, in lexicographic order.
pub(crate) fn for_each_increasing_tuple(len: usize, size: usize, mut visit: impl FnMut(&[usize])) {
    if size > len {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        visit(&idx);
        let mut i = size;
        while i > 0 && idx[i - 1] == len - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_distinct(g: &Graph, seq: &[Vertex]) -> Result<()> {
    let mut seen = HashSet::new();
    for &v in seq {
        g.check_vertex(v)?;
        if !seen.insert(v) {
            return Err(Error::input(format!("vertex {v} occurs twice in the sequence")));
        }
    }
    Ok(())
}

/// Brute-force indiscernibility: every formula takes the same truth value on
/// all increasing tuples of the sequence.
pub fn is_indiscernible(g: &Graph, seq: &[Vertex], delta: &Delta) -> Result<bool> {
    if seq.is_empty() {
        return Err(Error::input("sequence must not be empty"));
    }
    check_distinct(g, seq)?;
    let mut args = Vec::new();
    for &f in delta.formulas() {
        let mut first = None;
        let mut uniform = true;
        for_each_increasing_tuple(seq.len(), f.arity, |idx| {
            if !uniform {
                return;
            }
            args.clear();
            args.extend(idx.iter().map(|&i| seq[i]));
            let value = holds(g, f, &args);
            match first {
                None => first = Some(value),
                Some(v) if v != value => uniform = false,
                Some(_) => {}
            }
        });
        if !uniform {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Extracts a `delta`-indiscernible subsequence of `seq`.
///
/// Formulas are handled one after another in `delta` order. For a formula of
/// arity `k` there are `k` refinement rounds; round `m` fixes the last `m`
/// elements as parameters, builds a type tree over the rest and keeps its
/// longest branch followed by the parameters. The result may be shorter than
/// `target_len`; callers decide what to do with short sequences.
pub fn extract_indiscernible(g: &Graph, seq: &[Vertex], delta: &Delta, target_len: usize) -> Result<Vec<Vertex>> {
    if target_len == 0 {
        return Err(Error::input("target length must be at least 1"));
    }
    check_distinct(g, seq)?;
    let mut current = seq.to_vec();
    for &f in delta.formulas() {
        current = refine_for_formula(g, f, current);
    }
    Ok(current)
}

fn refine_for_formula(g: &Graph, f: FormulaId, mut current: Vec<Vertex>) -> Vec<Vertex> {
    let k = f.arity;
    for fixed in 0..k {
        if current.len() < k {
            // no increasing k-tuple left
            break;
        }
        let split = current.len() - fixed;
        let (body, params) = current.split_at(split);
        let tree = TypeTree::build(g, f, body, params);
        let mut next = tree.longest_branch();
        next.extend_from_slice(params);
        current = next;
    }
    current
}

const ROOT: usize = 0;

#[derive(Clone, Debug)]
pub struct TreeNode {
    /// `None` only for the root.
    pub vertex: Option<Vertex>,
    /// Position of the vertex in the sequence the tree was built from.
    pub seq_index: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub children: Vec<usize>,
    /// Evaluations over the increasing tuples that end in the parent vertex.
    /// Concatenating the signatures along the root path gives the node's full
    /// type over that path.
    pub signature: Vec<bool>,
}

/// Insertion tree over a vertex sequence for one formula with the last
/// `params.len()` argument positions fixed.
#[derive(Clone, Debug)]
pub struct TypeTree {
    formula: FormulaId,
    params: Vec<Vertex>,
    nodes: Vec<TreeNode>,
    deepest: usize,
}

impl TypeTree {
    pub fn build(g: &Graph, formula: FormulaId, body: &[Vertex], params: &[Vertex]) -> TypeTree {
        assert!(params.len() < formula.arity, "at most k-1 parameters");
        let mut tree = TypeTree {
            formula,
            params: params.to_vec(),
            nodes: vec![TreeNode {
                vertex: None,
                seq_index: usize::MAX,
                parent: None,
                depth: 0,
                children: Vec::new(),
                signature: Vec::new(),
            }],
            deepest: ROOT,
        };
        let mut scratch = Scratch::new(formula.arity, params);
        for (idx, &v) in body.iter().enumerate() {
            tree.insert(g, v, idx, &mut scratch);
        }
        tree
    }

    /// Number of argument positions before the candidate's slot.
    fn leading(&self) -> usize {
        self.formula.arity - self.params.len() - 1
    }

    fn insert(&mut self, g: &Graph, v: Vertex, seq_index: usize, scratch: &mut Scratch) {
        let mut at = ROOT;
        scratch.path.clear();
        loop {
            self.signature_below(g, at, v, scratch);
            let matching = self.nodes[at]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].signature == scratch.bits);
            match matching {
                Some(child) => {
                    if let Some(x) = self.nodes[at].vertex {
                        scratch.path.push(x);
                    }
                    at = child;
                }
                None => {
                    let depth = self.nodes[at].depth + 1;
                    let id = self.nodes.len();
                    self.nodes.push(TreeNode {
                        vertex: Some(v),
                        seq_index,
                        parent: Some(at),
                        depth,
                        children: Vec::new(),
                        signature: std::mem::take(&mut scratch.bits),
                    });
                    self.nodes[at].children.push(id);
                    if depth > self.nodes[self.deepest].depth {
                        self.deepest = id;
                    }
                    return;
                }
            }
        }
    }

    /// Evaluations of the candidate `v` over the tuples ending in node `at`;
    /// `scratch.path` holds the vertices strictly above `at`.
    fn signature_below(&self, g: &Graph, at: usize, v: Vertex, scratch: &mut Scratch) {
        scratch.bits.clear();
        let leading = self.leading();
        let f = self.formula;
        match self.nodes[at].vertex {
            None => {
                if leading == 0 {
                    scratch.args[0] = v;
                    scratch.bits.push(holds(g, f, &scratch.args));
                }
            }
            Some(x) => {
                if leading == 0 {
                    return;
                }
                scratch.args[leading - 1] = x;
                scratch.args[leading] = v;
                let Scratch { path, args, bits } = scratch;
                for_each_increasing_tuple(path.len(), leading - 1, |idx| {
                    for (slot, &i) in idx.iter().enumerate() {
                        args[slot] = path[i];
                    }
                    bits.push(holds(g, f, args));
                });
            }
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn formula(&self) -> FormulaId {
        self.formula
    }

    pub fn params(&self) -> &[Vertex] {
        &self.params
    }

    pub fn depth(&self) -> usize {
        self.nodes[self.deepest].depth
    }

    /// Vertices on the root path of node `id`, excluding the root.
    pub fn path_to(&self, id: usize) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut at = Some(id);
        while let Some(x) = at {
            if let Some(v) = self.nodes[x].vertex {
                out.push(v);
            }
            at = self.nodes[x].parent;
        }
        out.reverse();
        out
    }

    /// The first branch (in insertion order) reaching maximum depth.
    pub fn longest_branch(&self) -> Vec<Vertex> {
        self.path_to(self.deepest)
    }
}

struct Scratch {
    path: Vec<Vertex>,
    args: Vec<Vertex>,
    bits: Vec<bool>,
}

impl Scratch {
    fn new(arity: usize, params: &[Vertex]) -> Scratch {
        let mut args = vec![0; arity];
        let start = arity - params.len();
        args[start..].copy_from_slice(params);
        Scratch {
            path: Vec::new(),
            args,
            bits: Vec::new(),
        }
    }
}

/// Largest `k ≤ max_k` admitting `v_1..v_k, w_1..w_k` with
/// `v_i ~ w_j ⟺ i ≤ j`. Exhaustive search; meant for small graphs.
pub fn ladder_index(g: &Graph, max_k: usize) -> usize {
    let mut best = 0;
    for k in 1..=max_k {
        let mut vs = Vec::with_capacity(k);
        let mut ws = Vec::with_capacity(k);
        if extend_ladder(g, k, &mut vs, &mut ws) {
            best = k;
        } else {
            break;
        }
    }
    best
}

fn extend_ladder(g: &Graph, k: usize, vs: &mut Vec<Vertex>, ws: &mut Vec<Vertex>) -> bool {
    if vs.len() == k {
        return true;
    }
    for v in g.vertices() {
        // v is the next (largest) index: it must miss every earlier w
        if ws.iter().any(|&w| g.adjacent(v, w)) {
            continue;
        }
        vs.push(v);
        // the new w must be adjacent to every v chosen so far
        let pivot = vs[0];
        let candidates: Vec<Vertex> = g
            .neighbors(pivot)
            .iter()
            .copied()
            .filter(|&w| vs.iter().all(|&x| g.adjacent(x, w)))
            .collect();
        for w in candidates {
            ws.push(w);
            if extend_ladder(g, k, vs, ws) {
                return true;
            }
            ws.pop();
        }
        vs.pop();
    }
    false
}
