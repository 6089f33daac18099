mod common;

use common::*;
use proptest::prelude::*;
use quasiwide::generators::{generate, GenSpec};
use quasiwide::kernel::{
    build_kernel, domination_core, find_irrelevant_dominatee, kernelize_staged, reduce_dominators,
    verify_removal, CoreConfig,
};
use quasiwide::solvers::exact_drds;
use quasiwide::Graph;

fn config(r: usize, k: usize, ell: usize, batch: bool) -> CoreConfig {
    let mut cfg = CoreConfig::new(r, k);
    cfg.ell = ell.max(k + 2);
    cfg.batch = batch;
    cfg
}

/// Sets of size at most `k` that r-dominate `targets`.
fn dominating_sets(d: &[Vec<usize>], n: usize, k: usize, targets: &[usize], r: usize) -> Vec<Vec<usize>> {
    subsets_up_to(n, k).into_iter().filter(|x| dominates(d, x, targets, r)).collect()
}

fn core_corpus() -> Vec<Graph> {
    let mut out = Vec::new();
    for seed in 0..6u64 {
        for c in 1..=3 {
            out.push(generate(&GenSpec::RandomDegenerate { n: 16 + (seed as usize % 9), c, seed }).unwrap());
        }
        out.push(generate(&GenSpec::RandomBoundedDegree { n: 24, d: 3, seed }).unwrap());
    }
    out.push(generate(&GenSpec::Grid { w: 4, h: 6 }).unwrap());
    out.push(generate(&GenSpec::Grid { w: 5, h: 4 }).unwrap());
    out.push(generate(&GenSpec::Stars { k: 3, p: 7 }).unwrap());
    out.push(generate(&GenSpec::Star { p: 20 }).unwrap());
    out.push(generate(&GenSpec::Path { n: 24 }).unwrap());
    out.push(generate(&GenSpec::Cycle { n: 21 }).unwrap());
    out
}

#[test]
fn core_and_every_removal_are_sound() {
    let mut removals = 0;
    for g in core_corpus() {
        let n = g.n();
        let d = floyd(&g, &[]);
        let all: Vec<usize> = g.vertices().collect();
        for r in 1..=2 {
            for k in 1..=3 {
                for batch in [true, false] {
                    let cfg = config(r, k, 6, batch);
                    let core = domination_core(&g, &cfg).unwrap();
                    let mut z = all.clone();
                    let mut reference = dominating_sets(&d, n, k, &z, r);
                    for removal in &core.removal_log {
                        assert!(verify_removal(&g, &z, removal, r, k));
                        z.retain(|v| !removal.removed.contains(v));
                        let now = dominating_sets(&d, n, k, &z, r);
                        assert_eq!(now, reference, "removal {:?} changed the dominating sets", removal.removed);
                        reference = now;
                        removals += 1;
                    }
                    assert_eq!(z, core.z);
                    for x in subsets_up_to(n, k) {
                        if dominates(&d, &x, &core.z, r) {
                            assert!(dominates(&d, &x, &all, r), "X = {x:?} dominates Z only");
                        }
                    }
                }
            }
        }
    }
    assert!(removals > 50, "corpus exercised only {removals} removals");
}

#[test]
fn irrelevant_dominatee_on_grid() {
    let g = generate(&GenSpec::Grid { w: 8, h: 8 }).unwrap();
    let cfg = config(1, 2, 20, true);
    let z: Vec<usize> = g.vertices().collect();
    let (w, witness) = find_irrelevant_dominatee(&g, &z, &cfg).unwrap().unwrap();
    assert_eq!(witness.bucket[0], w);
    let d = floyd(&g, &[]);
    let rest: Vec<usize> = z.iter().copied().filter(|&v| v != w).collect();
    // sample X of size <= 2 with the crate's own generator
    let mut rng = quasiwide::generators::SplitMix64::new(99);
    for _ in 0..1000 {
        let size = rng.below(3) as usize;
        let x: Vec<usize> = (0..size).map(|_| rng.below(64) as usize).collect();
        assert_eq!(dominates(&d, &x, &z, 1), dominates(&d, &x, &rest, 1), "X = {x:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn representatives_are_complete(g in arb_degenerate(1, 40, 3), r in 1usize..4, stride in 1usize..5) {
        let z: Vec<usize> = g.vertices().step_by(stride).collect();
        let reps = reduce_dominators(&g, &z, r).unwrap();
        let d = floyd(&g, &[]);
        let proj = |u: usize| -> Vec<usize> { z.iter().copied().filter(|&x| d[u][x] <= r).collect() };
        let mut seen = std::collections::BTreeSet::new();
        for &y in &reps.y {
            prop_assert_eq!(&reps.projection[&y], &proj(y));
            prop_assert!(seen.insert(proj(y)), "two representatives share a projection");
        }
        for u in g.vertices() {
            let c = reps.class_of[u];
            prop_assert!(reps.y.contains(&c));
            prop_assert!(c <= u);
            prop_assert_eq!(proj(u), proj(c));
        }
    }

    #[test]
    fn kernel_preserves_answers(g in arb_degenerate(4, 30, 3), r in 1usize..3, k in 1usize..5, ell in 4usize..12) {
        let cfg = config(r, k, ell, true);
        let staged = kernelize_staged(&g, &cfg).unwrap();
        let inst = &staged.instance;
        prop_assert!(inst.projection_ok);
        prop_assert_eq!(inst.k_new, k + 1);
        let zn = staged.core.z.len();
        let yn = staged.reps.y.len();
        prop_assert!(inst.h.n() <= r * zn * yn + 2 + r * (yn + 1) + zn);
        let d = floyd(&g, &[]);
        let all: Vec<usize> = g.vertices().collect();
        let brute = subsets_up_to(g.n(), k).into_iter().any(|x| dominates(&d, &x, &all, r));
        prop_assert_eq!(exact_drds(&g, r, k).is_some(), brute);
        prop_assert_eq!(exact_drds(&inst.h, r, k + 1).is_some(), brute);
    }

    #[test]
    fn kernel_projections_match_in_h(g in arb_degenerate(2, 30, 3), r in 1usize..4) {
        let z: Vec<usize> = g.vertices().filter(|v| v % 3 != 1).collect();
        let reps = reduce_dominators(&g, &z, r).unwrap();
        let inst = build_kernel(&g, &z, &reps, r, 2).unwrap();
        let dh = floyd(&inst.h, &[]);
        for &y in &reps.y {
            let hy = inst.y_in_h[&y];
            let mut seen: Vec<usize> = z.iter().copied().filter(|zv| dh[hy][inst.z_in_h[zv]] <= r).collect();
            seen.sort_unstable();
            prop_assert_eq!(&seen, &reps.projection[&y]);
        }
        // gadget center reaches every non-Z vertex and misses every Z copy
        let zc: Vec<usize> = inst.z_in_h.values().copied().collect();
        for v in 0..inst.h.n() {
            let dist = dh[inst.gadget.v][v];
            if zc.contains(&v) {
                prop_assert!(dist > r);
            } else {
                prop_assert!(dist <= r, "vertex {} at distance {}", v, dist);
            }
        }
    }
}

#[test]
fn kernel_examples() {
    let k3 = generate(&GenSpec::Clique { n: 3 }).unwrap();
    let reps = reduce_dominators(&k3, &[0, 1, 2], 1).unwrap();
    let inst = build_kernel(&k3, &[0, 1, 2], &reps, 1, 1).unwrap();
    assert!(exact_drds(&k3, 1, 1).is_some());
    assert!(exact_drds(&inst.h, 1, 2).is_some());

    let star = generate(&GenSpec::Star { p: 5 }).unwrap();
    let staged = kernelize_staged(&star, &config(1, 1, 4, true)).unwrap();
    assert!(exact_drds(&star, 1, 1).is_some());
    assert!(exact_drds(&staged.instance.h, 1, 2).is_some());

    let p9 = generate(&GenSpec::Path { n: 9 }).unwrap();
    let staged = kernelize_staged(&p9, &config(2, 1, 3, true)).unwrap();
    assert!(exact_drds(&p9, 2, 1).is_none());
    assert!(exact_drds(&staged.instance.h, 2, 2).is_none());

    let grid = generate(&GenSpec::Grid { w: 10, h: 10 }).unwrap();
    let staged = kernelize_staged(&grid, &CoreConfig::new(1, 5)).unwrap();
    assert_eq!(exact_drds(&grid, 1, 5).is_some(), exact_drds(&staged.instance.h, 1, 6).is_some());

    let g = generate(&GenSpec::RandomDegenerate { n: 200, c: 2, seed: 5 }).unwrap();
    let staged = kernelize_staged(&g, &CoreConfig::new(2, 4)).unwrap();
    assert!(staged.instance.projection_ok);
    assert_eq!(exact_drds(&g, 2, 4).is_some(), exact_drds(&staged.instance.h, 2, 5).is_some());
}
