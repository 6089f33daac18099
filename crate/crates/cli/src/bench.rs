use std::fs;
use std::time::Instant;

use quasiwide::generators::{generate, GenSpec};
use quasiwide::kernel::{build_kernel, domination_core, reduce_dominators, CoreConfig};
use quasiwide::solvers::exact_drds;
use quasiwide::Graph;
use rayon::prelude::*;
use serde_json::json;

use crate::commands::removals_verified;
use crate::input::parse_range;
use crate::report::{elapsed_ms, Report};
use crate::{Cli, CliError, Command, Outcome};

/// Column order of the sweep CSV. Columns ending in `_ms` are timings.
pub const HEADER: &str =
    "family,spec,n,m,r,k,z,y,h_n,h_m,status,core_ok,projection_ok,equivalence,core_ms,reps_ms,kernel_ms,verify_ms";

struct Cell {
    spec: GenSpec,
    r: usize,
    k: usize,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let Command::Bench { family, sizes, param, r, k, out, ell, verify, verify_limit } = &cli.command else {
        unreachable!()
    };
    let mut report = Report::new();
    let sizes = parse_range(sizes).map_err(CliError::input)?;
    let rs = parse_range(r).map_err(CliError::input)?;
    let ks = parse_range(k).map_err(CliError::input)?;
    let mut cells = Vec::new();
    for &s in &sizes {
        let spec = family_spec(family, s, *param, cli.seed)?;
        for &r in &rs {
            for &k in &ks {
                cells.push(Cell { spec, r, k });
            }
        }
    }
    for c in &cells {
        let mut cfg = CoreConfig::new(c.r, c.k);
        if let Some(ell) = ell {
            cfg.ell = *ell;
        }
        cfg.validate()?;
    }

    let start = Instant::now();
    // par_iter keeps the sweep order in the collected rows
    let rows: Vec<String> = cells.par_iter().map(|c| run_cell(c, *ell, *verify, *verify_limit)).collect();
    report.timings_ms.insert("sweep".into(), elapsed_ms(start));

    let mut csv = String::from(HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(row);
        csv.push('\n');
    }
    fs::write(out, csv).map_err(|e| CliError::input(format!("{}: {e}", out.display())))?;
    let failed = rows.iter().filter(|row| !row_ok(row)).count();
    report.verify("rows", failed == 0);
    report.result = json!({ "rows": rows.len(), "failed_rows": failed, "csv": out.display().to_string() });
    println!("{}", report.to_json());
    Ok(if failed == 0 { Outcome::Success } else { Outcome::Failure })
}

fn row_ok(row: &str) -> bool {
    let cols: Vec<&str> = row.split(',').collect();
    let n = cols.len();
    // status, core_ok, projection_ok, equivalence sit before the four timing columns
    cols[n - 8] == "ok" && cols[n - 7] == "true" && cols[n - 6] == "true" && cols[n - 5] != "false"
}

pub fn family_spec(family: &str, s: usize, param: Option<usize>, seed: u64) -> Result<GenSpec, CliError> {
    let p = |default: usize| param.unwrap_or(default);
    let spec = match family {
        "grid" => format!("grid:{s}x{s}"),
        "path" | "cycle" | "clique" | "halfgraph" | "star" => format!("{family}:{s}"),
        "stars" => format!("stars:{s}x{}", p(3)),
        "biclique" => format!("biclique:{s}x{}", p(s)),
        "random_degenerate" => format!("random_degenerate:{s},{},{seed}", p(2)),
        "random_bounded_degree" => format!("random_bounded_degree:{s},{},{seed}", p(3)),
        other => return Err(CliError::input(format!("unknown family {other:?}"))),
    };
    Ok(spec.parse()?)
}

fn run_cell(c: &Cell, ell: Option<usize>, verify: bool, verify_limit: usize) -> String {
    let g = generate(&c.spec).expect("validated spec");
    let mut cfg = CoreConfig::new(c.r, c.k);
    if let Some(ell) = ell {
        cfg.ell = ell;
    }
    let head = format!("{},\"{}\",{},{},{},{}", c.spec.family(), c.spec, g.n(), g.m(), c.r, c.k);
    let mut times = [0.0f64; 4];
    match kernel_row(&g, &cfg, verify && g.n() <= verify_limit, &mut times) {
        Ok(body) => format!("{head},{body},{},{},{},{}", times[0], times[1], times[2], times[3]),
        Err(e) => {
            let status = match e {
                quasiwide::Error::TooDense(_) => "too_dense".to_string(),
                other => format!("error: {}", other.to_string().replace(',', ";")),
            };
            format!("{head},,,,,{status},,,,{},{},{},{}", times[0], times[1], times[2], times[3])
        }
    }
}

fn kernel_row(g: &Graph, cfg: &CoreConfig, verify: bool, times: &mut [f64; 4]) -> quasiwide::Result<String> {
    let t = Instant::now();
    let core = domination_core(g, cfg)?;
    times[0] = elapsed_ms(t);
    let t = Instant::now();
    let reps = reduce_dominators(g, &core.z, cfg.r)?;
    times[1] = elapsed_ms(t);
    let t = Instant::now();
    let inst = build_kernel(g, &core.z, &reps, cfg.r, cfg.k)?;
    times[2] = elapsed_ms(t);
    let t = Instant::now();
    let core_ok = removals_verified(g, &core, cfg.r, cfg.k);
    let equivalence = if verify {
        let eq = exact_drds(g, cfg.r, cfg.k).is_some() == exact_drds(&inst.h, inst.r, inst.k_new).is_some();
        eq.to_string()
    } else {
        "skipped".to_string()
    };
    times[3] = elapsed_ms(t);
    Ok(format!(
        "{},{},{},{},ok,{core_ok},{},{equivalence}",
        core.z.len(),
        reps.y.len(),
        inst.h.n(),
        inst.h.m(),
        inst.projection_ok
    ))
}
