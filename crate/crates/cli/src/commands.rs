use std::fs;
use std::io::Write;

use quasiwide::edgelist;
use quasiwide::generators::{generate, GenSpec};
use quasiwide::kernel::{kernelize_staged, verify_removal, DominationCore, Kernelization};
use quasiwide::logic::{extract_indiscernible, is_indiscernible, ladder_index, Delta};
use quasiwide::solvers::{
    brute_cds, cds_fpt, default_k_threshold, dreyfus_wagner, exact_drds, is_connected_dominating, SteinerInstance,
    SteinerTree,
};
use quasiwide::uqw::{uqw_split, uqw_verify};
use quasiwide::{Error, Graph, Vertex};
use serde_json::json;

use crate::input::{load_graph, load_ids, parse_ids};
use crate::report::{InputSummary, Report};
use crate::{Cli, CliError, Command, Outcome, Problem};

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gen { spec, out } => gen(spec, out.as_deref(), cli.seed),
        Command::Bench { .. } => crate::bench::run(cli),
        other => {
            let mut report = Report::new();
            let outcome = run_reporting(other, &mut report)?;
            println!("{}", report.to_json());
            Ok(outcome)
        }
    }
}

fn run_reporting(cmd: &Command, report: &mut Report) -> Result<Outcome, CliError> {
    match cmd {
        Command::Uqw { graph, a, r, m, uqw } => {
            let g = load(graph, report)?;
            let a = load_ids(a, &g)?;
            let cfg = uqw.config();
            let res = match report.time("uqw", || uqw_split(&g, &a, *r, *m, &cfg)) {
                Err(Error::TooDense(cert)) => {
                    report.result = json!({ "status": "too_dense", "certificate": cert });
                    return Ok(Outcome::Failure);
                }
                other => other?,
            };
            let ok = report.time("verify", || uqw_verify(&g, &res, &a, *r));
            report.verify("uqw", ok);
            let reached = res.b.len() >= *m;
            if !reached {
                report.notes.push(format!("B has {} < m = {} vertices", res.b.len(), m));
            }
            report.result = json!({
                "s": res.s, "b": res.b, "s_size": res.s.len(), "b_size": res.b.len(), "rounds": res.rounds,
            });
            Ok(if ok && reached { Outcome::Success } else { Outcome::Failure })
        }
        Command::Indiscernible { graph, seq, delta, edge_only, target_len } => {
            let g = load(graph, report)?;
            let seq = load_ids(seq, &g)?;
            let d = if *edge_only { Delta::edge_only() } else { Delta::standard(*delta)? };
            let target = target_len.unwrap_or(seq.len().max(1));
            let out = report.time("extract", || extract_indiscernible(&g, &seq, &d, target))?;
            let ok = report.time("verify", || is_indiscernible(&g, &out, &d))?;
            report.verify("indiscernible", ok);
            if out.len() < target {
                report.notes.push(format!("extracted {} < target {target} elements", out.len()));
            }
            report.result = json!({ "sequence": out, "length": out.len() });
            Ok(if ok { Outcome::Success } else { Outcome::Failure })
        }
        Command::Ladder { graph, max_k } => {
            let g = load(graph, report)?;
            let idx = report.time("ladder", || ladder_index(&g, *max_k));
            report.result = json!({ "ladder_index": idx, "max_k": max_k });
            Ok(Outcome::Success)
        }
        Command::Core { graph, core } => {
            let g = load(graph, report)?;
            let cfg = core.config();
            let dc = match report.time("core", || quasiwide::kernel::domination_core(&g, &cfg)) {
                Err(Error::TooDense(cert)) => return too_dense(report, cert),
                other => other?,
            };
            let ok = report.time("verify", || removals_verified(&g, &dc, core.r, core.k));
            report.verify("core", ok);
            note_core(report, &g, &dc);
            report.result = json!({
                "z": dc.z, "z_size": dc.z.len(), "removal_steps": dc.removal_log.len(), "stalled": dc.stalled,
            });
            Ok(if ok { Outcome::Success } else { Outcome::Failure })
        }
        Command::Kernelize { graph, core, out, verify, verify_limit } => {
            let g = load(graph, report)?;
            let cfg = core.config();
            let kz = match report.time("kernelize", || kernelize_staged(&g, &cfg)) {
                Err(Error::TooDense(cert)) => return too_dense(report, cert),
                other => other?,
            };
            let ok = report.time("verify_core", || removals_verified(&g, &kz.core, core.r, core.k));
            report.verify("core", ok);
            report.verify("projection", kz.instance.projection_ok);
            note_core(report, &g, &kz.core);
            let equivalence = if *verify {
                if g.n() <= *verify_limit {
                    let eq = report.time("verify_exact", || equivalent(&g, &kz, core.r, core.k));
                    report.verify("equivalence", eq);
                    Some(eq)
                } else {
                    log::warn!("n = {} exceeds --verify-limit {verify_limit}; skipping", g.n());
                    report.notes.push(format!("equivalence check skipped: n = {} > {verify_limit}", g.n()));
                    None
                }
            } else {
                None
            };
            if let Some(path) = out {
                fs::write(path, kz.instance.to_edge_list())
                    .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            }
            let inst = &kz.instance;
            report.result = json!({
                "z_size": kz.core.z.len(),
                "y_size": kz.reps.y.len(),
                "h_n": inst.h.n(),
                "h_m": inst.h.m(),
                "k_new": inst.k_new,
                "projection_ok": inst.projection_ok,
                "equivalence": equivalence,
                "kernel_file": out.as_ref().map(|p| p.display().to_string()),
            });
            Ok(if report.all_verified() { Outcome::Success } else { Outcome::Failure })
        }
        Command::Solve { graph, problem, k, r, terminals, k_threshold, uqw } => {
            let g = load(graph, report)?;
            if *problem == Problem::Steiner {
                let list = terminals.as_deref().ok_or_else(|| CliError::input("--terminals is required"))?;
                let terms = parse_ids(list).map_err(CliError::input)?;
                let inst = SteinerInstance { graph: &g, terminals: terms.clone() };
                let tree = match report.time("solve", || dreyfus_wagner(&inst)) {
                    Err(Error::Infeasible { a, b }) => {
                        report.result = json!({ "solution": "NONE", "reason": format!("{a} and {b} are disconnected") });
                        return Ok(Outcome::No);
                    }
                    other => other?,
                };
                let ok = steiner_ok(&g, &terms, &tree);
                report.verify("steiner", ok);
                report.result =
                    json!({ "solution": tree.vertices, "cost": tree.cost, "edges": tree.edges });
                return Ok(if ok { Outcome::Success } else { Outcome::Failure });
            }
            let k = k.ok_or_else(|| CliError::input("--k is required"))?;
            let sol = match problem {
                Problem::Drds => report.time("solve", || exact_drds(&g, *r, k)),
                Problem::Cds => report.time("solve", || brute_cds(&g, k)),
                Problem::CdsFpt => {
                    let cfg = uqw.config();
                    let threshold = k_threshold.unwrap_or_else(|| default_k_threshold(k));
                    report.time("solve", || cds_fpt(&g, k, &cfg, threshold))?
                }
                Problem::Steiner => unreachable!(),
            };
            match sol {
                None => {
                    report.result = json!({ "solution": "NONE" });
                    Ok(Outcome::No)
                }
                Some(set) => {
                    let ok = set.len() <= k
                        && match problem {
                            Problem::Drds => dominates(&g, &set, *r),
                            _ => is_connected_dominating(&g, &set),
                        };
                    report.verify("solution", ok);
                    report.result = json!({ "solution": set, "size": set.len() });
                    Ok(if ok { Outcome::Success } else { Outcome::Failure })
                }
            }
        }
        Command::Gen { .. } | Command::Bench { .. } => unreachable!(),
    }
}

fn load(path: &std::path::Path, report: &mut Report) -> Result<Graph, CliError> {
    let g = load_graph(path)?;
    report.input = Some(InputSummary::of(&g));
    Ok(g)
}

fn too_dense(report: &mut Report, cert: Box<quasiwide::uqw::DenseCertificate>) -> Result<Outcome, CliError> {
    report.result = json!({ "status": "too_dense", "certificate": cert });
    Ok(Outcome::Failure)
}

fn note_core(report: &mut Report, g: &Graph, dc: &DominationCore) {
    if dc.z.len() == g.n() {
        report.notes.push("no shrinkage: Z = V(G)".into());
    }
    if let Some(why) = &dc.stalled {
        report.notes.push(format!("core stalled: {why}"));
    }
}

/// Replays the removal log and checks every step against the `Z` it acted on.
pub fn removals_verified(g: &Graph, dc: &DominationCore, r: usize, k: usize) -> bool {
    let mut z: Vec<Vertex> = g.vertices().collect();
    for removal in &dc.removal_log {
        if !verify_removal(g, &z, removal, r, k) {
            return false;
        }
        z.retain(|v| !removal.removed.contains(v));
    }
    z == dc.z
}

pub fn equivalent(g: &Graph, kz: &Kernelization, r: usize, k: usize) -> bool {
    let inst = &kz.instance;
    exact_drds(g, r, k).is_some() == exact_drds(&inst.h, inst.r, inst.k_new).is_some()
}

fn dominates(g: &Graph, set: &[Vertex], r: usize) -> bool {
    g.bfs_limited(set, r).is_ok_and(|reached| reached.len() == g.n())
}

fn steiner_ok(g: &Graph, terms: &[Vertex], tree: &SteinerTree) -> bool {
    if tree.edges.len() != tree.cost || tree.edges.iter().any(|&(u, v)| !g.adjacent(u, v)) {
        return false;
    }
    if tree.vertices.len() != tree.edges.len() + 1 || !terms.iter().all(|t| tree.vertices.contains(t)) {
        return false;
    }
    let index = |v: Vertex| tree.vertices.binary_search(&v).ok();
    let local: Option<Vec<_>> = tree.edges.iter().map(|&(u, v)| Some((index(u)?, index(v)?))).collect();
    match local.and_then(|edges| Graph::from_edges(tree.vertices.len(), &edges).ok()) {
        Some(t) => t.components().len() == 1,
        None => false,
    }
}

fn gen(spec: &str, out: Option<&std::path::Path>, seed: u64) -> Result<Outcome, CliError> {
    let spec = with_seed(spec, seed).parse::<GenSpec>()?;
    let g = generate(&spec)?;
    if !generated_ok(&spec, &g) {
        return Err(CliError { code: 2, msg: format!("{spec} failed its structural check") });
    }
    let comments = vec![format!("spec={spec}")];
    let mut buf = Vec::new();
    edgelist::write_graph(&g, &comments, &mut buf)?;
    match out {
        Some(path) => fs::write(path, buf).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(&buf).map_err(|e| CliError::input(e.to_string()))?,
    }
    Ok(Outcome::Success)
}

/// Appends the global seed to random family specs that omit it.
pub fn with_seed(spec: &str, seed: u64) -> String {
    match spec.split_once(':') {
        Some((family, params)) if family.starts_with("random_") && params.split(',').count() == 2 => {
            format!("{spec},{seed}")
        }
        _ => spec.to_string(),
    }
}

fn generated_ok(spec: &GenSpec, g: &Graph) -> bool {
    match *spec {
        GenSpec::Grid { w, h } => g.n() == w * h && g.m() == 2 * w * h - w - h,
        GenSpec::RandomDegenerate { n, c, .. } => g.n() == n && g.degeneracy() <= c,
        GenSpec::RandomBoundedDegree { n, d, .. } => g.n() == n && g.vertices().all(|v| g.degree(v) <= d),
        GenSpec::Clique { n } => g.m() == n * (n - 1) / 2,
        _ => true,
    }
}
