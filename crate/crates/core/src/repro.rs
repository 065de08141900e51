//! Recomputes the published benchmark tables and scores each cell against
//! the embedded reference value.

use rand::Rng;
use rayon::prelude::*;

use crate::baselines::{bm_expected_cut, th_simulate, BmParams, ThParams, DEFAULT_SAMPLES};
use crate::error::Result;
use crate::generators::{random_connected, random_polynomial, seeded};
use crate::golden::{row, Instance, Row};
use crate::local::p_local_treewidth;
use crate::oracle::{oracle_buco, oracle_expectation};
use crate::qaoa::{buco_expectation, expectation, AngleSchedule, EvalOptions, PhaseConvention};

/// Seed of the Monte Carlo cells.
pub const TABLE_SEED: u64 = 2025;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    LocalTreewidth,
    Qaoa,
    Bm,
    Th,
}

impl Column {
    pub const ALL: [Column; 4] = [Column::LocalTreewidth, Column::Qaoa, Column::Bm, Column::Th];

    pub fn name(self) -> &'static str {
        match self {
            Column::LocalTreewidth => "ltw",
            Column::Qaoa => "qaoa",
            Column::Bm => "bm",
            Column::Th => "th",
        }
    }

    /// Allowed absolute deviation from the reference.
    pub fn tolerance(self) -> f64 {
        match self {
            Column::LocalTreewidth => 0.0,
            Column::Qaoa => 5e-4,
            Column::Bm => 2e-3,
            Column::Th => 1e-2,
        }
    }
}

/// One recomputed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub instance: Instance,
    pub p: usize,
    pub column: Column,
    pub computed: f64,
    pub reference: f64,
    /// Standard error for Monte Carlo cells.
    pub std_error: Option<f64>,
}

impl Cell {
    pub fn deviation(&self) -> f64 {
        (self.computed - self.reference).abs()
    }

    pub fn pass(&self) -> bool {
        self.deviation() <= self.column.tolerance() + 1e-12
    }
}

fn reference(r: &Row, column: Column) -> f64 {
    match column {
        Column::LocalTreewidth => r.local_treewidth as f64,
        Column::Qaoa => r.qaoa,
        Column::Bm => r.bm,
        Column::Th => r.th,
    }
}

/// QAOA cut fraction with the printed angles. The tables use the
/// `exp(-i γ Σ Z Z / 2)`-style Ising phase, twice the cut-operator angle.
pub fn qaoa_fraction(instance: Instance, p: usize) -> Result<f64> {
    let r = golden_row(instance, p)?;
    let sched = AngleSchedule::new(r.gamma.to_vec(), r.beta.to_vec())?.with_convention(PhaseConvention::Ising);
    Ok(expectation(&instance.graph(), &sched, &EvalOptions::default())?.cut_fraction())
}

fn golden_row(instance: Instance, p: usize) -> Result<Row> {
    row(instance, p).ok_or_else(|| crate::Error::Parameters(format!("no reference row at p = {p}")))
}

/// Recomputes one cell.
pub fn cell(instance: Instance, p: usize, column: Column, seed: u64) -> Result<Cell> {
    let r = golden_row(instance, p)?;
    let g = instance.graph();
    let mut std_error = None;
    let computed = match column {
        Column::LocalTreewidth => p_local_treewidth(&g, p)? as f64,
        Column::Qaoa => qaoa_fraction(instance, p)?,
        Column::Bm => bm_expected_cut(&g, &BmParams::new(r.alpha.to_vec())?)?,
        Column::Th => {
            let (mean, se) = th_simulate(&g, &ThParams::new(r.thresholds.to_vec(), DEFAULT_SAMPLES, seed)?)?;
            std_error = Some(se);
            mean
        }
    };
    Ok(Cell { instance, p, column, computed, reference: reference(&r, column), std_error })
}

/// Every cell of the requested columns, instance-major then by `p`.
pub fn cells(columns: &[Column], seed: u64) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for instance in Instance::ALL {
        for p in 1..=3 {
            for &c in columns {
                out.push(cell(instance, p, c, seed)?);
            }
        }
    }
    Ok(out)
}

/// Outcome of a DP-versus-statevector sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub instances: usize,
    pub max_abs_delta: f64,
}

impl SweepReport {
    pub fn pass(&self, tol: f64) -> bool {
        self.max_abs_delta <= tol
    }
}

fn random_schedule(rng: &mut impl Rng, p: usize) -> Result<AngleSchedule> {
    let pi = std::f64::consts::PI;
    let gamma = (0..p).map(|_| rng.random_range(-pi..=pi)).collect();
    let beta = (0..p).map(|_| rng.random_range(-pi..=pi)).collect();
    AngleSchedule::new(gamma, beta)
}

fn fold(deltas: Vec<Result<f64>>) -> Result<SweepReport> {
    let mut max = 0.0f64;
    let instances = deltas.len();
    for d in deltas {
        max = max.max(d?);
    }
    Ok(SweepReport { instances, max_abs_delta: max })
}

/// `count` random connected graphs with `n ∈ [3, max_n]`, `p ∈ [1, max_p]`
/// and angles uniform in `[-π, π]`, each compared against the dense
/// simulation. Instance `i` is drawn from its own seed `seed + i`.
pub fn graph_sweep(count: usize, max_n: usize, max_p: usize, seed: u64) -> Result<SweepReport> {
    let deltas = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded(seed.wrapping_add(i as u64));
            let n = rng.random_range(3..=max_n.max(3));
            let extra = rng.random_range(0..=n / 2);
            let g = random_connected(n, extra, &mut rng);
            let p = rng.random_range(1..=max_p.max(1));
            let sched = random_schedule(&mut rng, p)?;
            let dp = expectation(&g, &sched, &EvalOptions::default())?.value;
            Ok((dp - oracle_expectation(&g, 0.0, &sched)?).abs())
        })
        .collect();
    fold(deltas)
}

/// As [`graph_sweep`] for random polynomials with arities up to 3.
pub fn buco_sweep(count: usize, max_n: usize, max_p: usize, seed: u64) -> Result<SweepReport> {
    let deltas = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeded(seed.wrapping_add(i as u64));
            let n = rng.random_range(2..=max_n.max(2));
            let terms = rng.random_range(1..=n + 2);
            let poly = random_polynomial(n, terms, 3, &mut rng);
            let p = rng.random_range(1..=max_p.max(1));
            let sched = random_schedule(&mut rng, p)?;
            let dp = buco_expectation(&poly, &sched, &EvalOptions::default())?.value;
            Ok((dp - oracle_buco(&poly, &sched)?).abs())
        })
        .collect();
    fold(deltas)
}
