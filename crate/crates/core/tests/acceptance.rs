//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! The process fails when any criterion fails, except for the documented
//! red cells in `KNOWN_RED`, which are printed as FAIL but do not abort the
//! run. A known-red cell that starts passing is reported as such.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lightcone_qaoa::baselines::{bm_optimize, DEFAULT_RESTARTS};
use lightcone_qaoa::generators::{random_connected, seeded};
use lightcone_qaoa::golden::{rows, Instance};
use lightcone_qaoa::graph::{CutInstance, Graph};
use lightcone_qaoa::oracle::maxcut_bruteforce;
use lightcone_qaoa::reduction::{
    b_constant, build_gprime, census, expected_census, gprime_order, integer_cut, laurent_recover_with, lift_cut,
    recover_maxcut, top_exponent, LaurentCoefficients, Transform,
};
use lightcone_qaoa::repro::{buco_sweep, cell, graph_sweep, Column, TABLE_SEED};
use num_complex::Complex64;

/// Cells that cannot match their reference. The three QAOA values printed
/// for GP(15,2) lie below what any triangle-free cubic graph reaches with
/// the printed p=1 angles (every such graph has the same depth-1 lightcone,
/// and GP(15, k) for k = 1..4 all give 0.69245); the BM and Th columns of
/// the same rows do match GP(15,2).
const KNOWN_RED: [(Instance, usize, Column); 3] =
    [(Instance::Gp15_2, 1, Column::Qaoa), (Instance::Gp15_2, 2, Column::Qaoa), (Instance::Gp15_2, 3, Column::Qaoa)];

struct Outcome {
    pass: bool,
    /// Failure limited to known-red cells.
    known: bool,
    detail: String,
}

impl Outcome {
    fn from(pass: bool, detail: String) -> Self {
        Outcome { pass, known: false, detail }
    }
}

fn graph_oracle() -> Outcome {
    let r = graph_sweep(200, 12, 3, 1).expect("sweep runs");
    Outcome::from(r.pass(1e-9), format!("{} graphs, n <= 12, p <= 3, max |delta| = {:.2e}", r.instances, r.max_abs_delta))
}

fn buco_oracle() -> Outcome {
    let r = buco_sweep(100, 10, 2, 1).expect("sweep runs");
    Outcome::from(r.pass(1e-9), format!("{} polynomials, n <= 10, p <= 2, max |delta| = {:.2e}", r.instances, r.max_abs_delta))
}

/// Recomputes one column for all nine rows.
fn column(col: Column) -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for instance in Instance::ALL {
        for p in 1..=3 {
            let c = cell(instance, p, col, TABLE_SEED).expect("cell computes");
            worst = worst.max(c.deviation());
            if !c.pass() {
                bad.push((instance, p, c.computed, c.reference));
            }
        }
    }
    let known = !bad.is_empty() && bad.iter().all(|&(i, p, _, _)| KNOWN_RED.contains(&(i, p, col)));
    let mut detail = format!("{}/9 within {}, max deviation {:.2e}", 9 - bad.len(), col.tolerance(), worst);
    for (i, p, got, want) in &bad {
        detail.push_str(&format!("; {} p={p}: {got:.4} vs {want:.4}", i.name()));
    }
    if known {
        detail.push_str(" (known red: printed GP(15,2) QAOA values are unreachable with the printed angles)");
    }
    let unexpected_green: Vec<_> =
        KNOWN_RED.iter().filter(|k| k.2 == col && !bad.iter().any(|b| (b.0, b.1) == (k.0, k.1))).collect();
    if !unexpected_green.is_empty() {
        detail.push_str(&format!("; known-red cells now pass: {unexpected_green:?}"));
    }
    Outcome { pass: bad.is_empty(), known, detail }
}

fn bm_optimizer() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut fails = Vec::new();
    for r in rows() {
        let (_, f) = bm_optimize(&r.instance.graph(), r.p, DEFAULT_RESTARTS, 0).expect("optimizer runs");
        let margin = f - (r.bm - 0.002);
        worst = worst.min(margin);
        if margin < 0.0 {
            fails.push(format!("{} p={}: {f:.4} < {:.4}", r.instance.name(), r.p, r.bm - 0.002));
        }
    }
    let mut detail = format!("9 (instance, k) pairs, smallest margin over table - 0.002 = {worst:.2e}");
    for f in &fails {
        detail.push_str("; ");
        detail.push_str(f);
    }
    Outcome::from(fails.is_empty(), detail)
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> (Vec<usize>, u64) {
    let mask = rng.random_range(0..1u64 << n);
    ((0..n).filter(|v| mask >> v & 1 == 1).collect(), mask)
}

fn reduction_suite() -> Outcome {
    let mut problems = Vec::new();
    let mut round_trips = 0;
    for n0 in 2..=6usize {
        let mut rng = seeded(100 + n0 as u64);
        for trial in 0..50 {
            let g = random_connected(n0, rng.random_range(0..=n0), &mut rng);
            let g = Graph::unweighted(n0, g.edges().iter().map(|e| (e.u(), e.v()))).unwrap();
            let inst = build_gprime(&g).unwrap();
            if trial == 0 {
                let c = census(&inst);
                if c != expected_census(n0, g.m()) || c.total() != inst.gprime.m() || inst.gprime.n() != gprime_order(n0) {
                    problems.push(format!("census mismatch at n0={n0}: {c:?}"));
                }
                for _ in 0..100 {
                    let (s, mask) = random_subset(&mut rng, n0);
                    let value = integer_cut(&inst.gprime, &lift_cut(&g, &s, &inst).unwrap());
                    let base = b_constant(n0 as u64) + (n0 as u128 + 1) * g.cut_value(mask) as u128;
                    if value < base || value > base + n0 as u128 {
                        problems.push(format!("identity broken at n0={n0}, S={s:?}: {value} vs b + (n0+1) cut = {base}"));
                    }
                }
            }
            let (best, witness) = maxcut_bruteforce(&g).unwrap();
            let value = integer_cut(&inst.gprime, &lift_cut(&g, &witness, &inst).unwrap());
            let recovered = recover_maxcut(value, n0 as u64).unwrap();
            round_trips += 1;
            if recovered != best as u128 {
                problems.push(format!("n0={n0} trial {trial}: recovered {recovered}, brute force {best}"));
            }
        }
    }
    let mut detail = format!("census and 100-cut identity for n0 = 2..6, {round_trips} recovery round trips");
    for p in problems.iter().take(3) {
        detail.push_str("; ");
        detail.push_str(p);
    }
    Outcome::from(problems.is_empty(), detail)
}

fn transform_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for m in [10usize, 200, 1000] {
        let c: Vec<Complex64> =
            (0..2 * m + 1).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let poly = LaurentCoefficients::new(m, c).unwrap();
        let samples = poly.sample();
        for how in [Transform::Fft, Transform::Direct] {
            let got = laurent_recover_with(&samples, m, how).unwrap();
            let err = got.as_slice().iter().zip(poly.as_slice()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            worst = worst.max(err);
        }
    }
    let mut gaps_ok = 0;
    let trials = 20;
    let threshold = 0.01;
    for _ in 0..trials {
        let m = rng.random_range(3..60usize);
        let top = rng.random_range(-(m as i64)..=m as i64);
        let c: Vec<Complex64> = (0..2 * m + 1)
            .map(|i| {
                if i as i64 - m as i64 == top {
                    Complex64::from_polar(2.0 * threshold, rng.random_range(0.0..std::f64::consts::TAU))
                } else {
                    Complex64::from_polar(rng.random_range(0.0..threshold / 3.0), rng.random_range(0.0..std::f64::consts::TAU))
                }
            })
            .collect();
        let poly = LaurentCoefficients::new(m, c).unwrap();
        let recovered = laurent_recover_with(&poly.sample(), m, Transform::Fft).unwrap();
        if top_exponent(&recovered, threshold).unwrap() == Some(top) {
            gaps_ok += 1;
        }
    }
    let pass = worst <= 1e-9 && gaps_ok == trials;
    Outcome::from(pass, format!("round-trip max error {worst:.2e} at m = 10, 200, 1000; top exponent {gaps_ok}/{trials} gap instances"))
}

fn properties() -> Outcome {
    let mut failures = Vec::new();
    let seeds = 40;
    for (name, check) in common::PROPERTIES {
        for seed in 0..seeds {
            if let Err(e) = check(seed) {
                failures.push(format!("{name}: {e}"));
                break;
            }
        }
    }
    let mut detail = format!("{} properties x {seeds} seeds", common::PROPERTIES.len());
    for f in &failures {
        detail.push_str("; ");
        detail.push_str(f);
    }
    Outcome::from(failures.is_empty(), detail)
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", Duration::from_secs(120), graph_oracle),
        ("BUCO oracle equivalence", Duration::from_secs(120), buco_oracle),
        ("local treewidth table", Duration::from_secs(60), || column(Column::LocalTreewidth)),
        ("QAOA columns", Duration::from_secs(300), || column(Column::Qaoa)),
        ("BM-k columns", Duration::from_secs(10), || column(Column::Bm)),
        ("Th-s columns", Duration::from_secs(30), || column(Column::Th)),
        ("BM optimizer", Duration::from_secs(120), bm_optimizer),
        ("reduction suite", Duration::from_secs(120), reduction_suite),
        ("transform suite", Duration::from_secs(10), transform_suite),
        ("property suites", Duration::from_secs(300), properties),
    ];
    let (mut passed, mut known, mut failed) = (0, 0, 0);
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let t = start.elapsed();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let over = if t > *budget { format!(", over the {}s budget", budget.as_secs()) } else { String::new() };
        println!("{status} [{:>2}] {name}: {} ({:.1}s{over})", i + 1, o.detail, t.as_secs_f64());
        match (o.pass, o.known) {
            (true, _) => passed += 1,
            (false, true) => known += 1,
            (false, false) => failed += 1,
        }
    }
    println!("acceptance: {passed} passed, {known} failed as documented, {failed} failed unexpectedly");
    if failed > 0 {
        std::process::exit(1);
    }
}
