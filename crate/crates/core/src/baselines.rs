//! Locality-matched classical baselines: the Gaussian-sum rule BM-k and
//! the threshold-flip dynamics Th-s.
//!
//! BM-k draws an i.i.d. standard Gaussian at every vertex and assigns
//! `σ_v = sign(Σ_w α_{dist(v,w)} g_w)` over the radius-k ball. The two
//! scores on an edge are jointly Gaussian, so the cut probability is exactly
//! `arccos(ρ)/π` and no sampling is needed.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CutInstance, Graph};

/// Random restarts used by [`best_classical`].
pub const DEFAULT_RESTARTS: usize = 64;
/// Monte Carlo draws used by [`best_classical`].
pub const DEFAULT_SAMPLES: usize = 5000;

const LINE_SWEEPS: usize = 2;
const LINE_GRID: usize = 20;
const GOLDEN_ITERS: usize = 40;
const RHO_SLACK: f64 = 1e-12;

/// Distance weights `α_0, .., α_k` with `α_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BmParams {
    alpha: Vec<f64>,
}

impl BmParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.first() != Some(&1.0) {
            return Err(Error::Parameters("alpha must start with alpha_0 = 1".into()));
        }
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("alpha"));
        }
        Ok(BmParams { alpha })
    }

    /// Radius `k`.
    pub fn k(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }
}

/// Round count, per-round thresholds and Monte Carlo budget for Th-s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThParams {
    thresholds: Vec<u32>,
    samples: usize,
    seed: u64,
}

impl ThParams {
    pub fn new(thresholds: Vec<u32>, samples: usize, seed: u64) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(Error::Parameters("at least one round is required".into()));
        }
        if let Some(t) = thresholds.iter().find(|t| !(1..=3).contains(*t)) {
            return Err(Error::Parameters(format!("threshold {t} is not in {{1, 2, 3}}")));
        }
        if samples == 0 {
            return Err(Error::Parameters("samples must be positive".into()));
        }
        Ok(ThParams { thresholds, samples, seed })
    }

    /// Number of rounds `s`.
    pub fn s(&self) -> usize {
        self.thresholds.len()
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.thresholds
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Distance statistics of one edge: how many vertices sit at distance `a`
/// from `u` and `b` from `v`, plus the per-endpoint ball profiles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeCounts {
    joint: Vec<u32>,
    ball_u: Vec<u32>,
    ball_v: Vec<u32>,
}

/// Precomputed BM-k geometry of a graph for a fixed radius. Edges with
/// identical counts share one class, which keeps repeated evaluation cheap
/// on symmetric graphs.
#[derive(Debug, Clone)]
pub struct BmModel {
    k: usize,
    classes: Vec<(EdgeCounts, f64, (usize, usize))>,
    total_weight: f64,
}

/// Vertices within distance `k` of `s`, sorted by id.
fn ball(adj: &[Vec<usize>], s: usize, k: usize) -> Vec<(usize, usize)> {
    let mut seen = BTreeMap::from([(s, 0usize)]);
    let mut frontier = vec![s];
    for d in 1..=k {
        let mut next = Vec::new();
        for &x in &frontier {
            for &y in &adj[x] {
                if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(y) {
                    e.insert(d);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

impl BmModel {
    pub fn new(g: &Graph, k: usize) -> Result<Self> {
        if g.m() == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        let adj = g.adjacency();
        let balls: Vec<Vec<(usize, usize)>> = (0..g.n()).map(|v| ball(&adj, v, k)).collect();
        let profile = |b: &[(usize, usize)]| {
            let mut c = vec![0u32; k + 1];
            for &(_, d) in b {
                c[d] += 1;
            }
            c
        };
        let mut classes: BTreeMap<EdgeCounts, (f64, (usize, usize))> = BTreeMap::new();
        for e in g.edges() {
            let (bu, bv) = (&balls[e.u()], &balls[e.v()]);
            let mut joint = vec![0u32; (k + 1) * (k + 1)];
            let (mut i, mut j) = (0, 0);
            while i < bu.len() && j < bv.len() {
                match bu[i].0.cmp(&bv[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        joint[bu[i].1 * (k + 1) + bv[j].1] += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            let key = EdgeCounts { joint, ball_u: profile(bu), ball_v: profile(bv) };
            classes.entry(key).or_insert((0.0, (e.u(), e.v()))).0 += e.weight;
        }
        Ok(BmModel {
            k,
            classes: classes.into_iter().map(|(c, (w, uv))| (c, w, uv)).collect(),
            total_weight: g.total_weight(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Weighted cut fraction for any weight vector of length `k + 1`; no
    /// normalization of `α_0` is assumed.
    pub fn fraction(&self, alpha: &[f64]) -> Result<f64> {
        if alpha.len() != self.k + 1 {
            return Err(Error::Parameters(format!("expected {} weights, got {}", self.k + 1, alpha.len())));
        }
        let mut acc = 0.0;
        for (c, w, (u, v)) in &self.classes {
            let norm = |ball: &[u32]| ball.iter().zip(alpha).map(|(&n, a)| n as f64 * a * a).sum::<f64>();
            let (nu, nv) = (norm(&c.ball_u), norm(&c.ball_v));
            if nu == 0.0 {
                return Err(Error::ZeroProfile(*u));
            }
            if nv == 0.0 {
                return Err(Error::ZeroProfile(*v));
            }
            let mut dot = 0.0;
            for (a, row) in c.joint.chunks(self.k + 1).enumerate() {
                for (b, &n) in row.iter().enumerate() {
                    dot += n as f64 * alpha[a] * alpha[b];
                }
            }
            let rho = dot / (nu * nv).sqrt();
            if !rho.is_finite() {
                return Err(Error::NonFinite("correlation"));
            }
            if rho.abs() > 1.0 + RHO_SLACK {
                return Err(Error::CorrelationOutOfRange { u: *u, v: *v, rho });
            }
            acc += w * rho.clamp(-1.0, 1.0).acos() / std::f64::consts::PI;
        }
        Ok(acc / self.total_weight)
    }
}

/// Exact expected cut fraction of BM-k (weighted by edge weight; the plain
/// edge average on unweighted graphs).
pub fn bm_expected_cut(g: &Graph, params: &BmParams) -> Result<f64> {
    BmModel::new(g, params.k())?.fraction(params.alpha())
}

/// As [`bm_expected_cut`] without requiring `α_0 = 1`.
pub fn bm_expected_cut_unnormalized(g: &Graph, alpha: &[f64]) -> Result<f64> {
    if alpha.is_empty() {
        return Err(Error::Parameters("alpha must be non-empty".into()));
    }
    BmModel::new(g, alpha.len() - 1)?.fraction(alpha)
}

/// Maximizes over coordinate `i` of `alpha` on `[-1, 1]`: a coarse grid
/// first, then golden-section search in the bracket around the best point.
fn line_search(model: &BmModel, alpha: &mut [f64], i: usize) -> Result<f64> {
    let at = |x: f64, alpha: &mut [f64]| {
        alpha[i] = x;
        model.fraction(alpha)
    };
    let step = 2.0 / LINE_GRID as f64;
    let mut best = (alpha[i], at(alpha[i], alpha)?);
    for j in 0..=LINE_GRID {
        let x = -1.0 + step * j as f64;
        let f = at(x, alpha)?;
        if f > best.1 {
            best = (x, f);
        }
    }
    let (mut lo, mut hi) = ((best.0 - step).max(-1.0), (best.0 + step).min(1.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (hi - ratio * (hi - lo), lo + ratio * (hi - lo));
    let (mut f1, mut f2) = (at(x1, alpha)?, at(x2, alpha)?);
    for _ in 0..GOLDEN_ITERS {
        if f1 >= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - ratio * (hi - lo);
            f1 = at(x1, alpha)?;
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + ratio * (hi - lo);
            f2 = at(x2, alpha)?;
        }
    }
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f > best.1 {
            best = (x, f);
        }
    }
    alpha[i] = best.0;
    Ok(best.1)
}

/// Best BM-k weights found from `restarts` uniform draws in `[-1, 1]^k`,
/// each refined by coordinate-wise line searches. With zero restarts the
/// independent rule `α = (1, 0, .., 0)` is returned unchanged.
pub fn bm_optimize(g: &Graph, k: usize, restarts: usize, seed: u64) -> Result<(BmParams, f64)> {
    if k == 0 {
        return Err(Error::Parameters("radius must be at least 1".into()));
    }
    let model = BmModel::new(g, k)?;
    let mut best = vec![1.0];
    best.resize(k + 1, 0.0);
    let mut best_f = model.fraction(&best)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let mut alpha = vec![1.0];
        alpha.extend((0..k).map(|_| rng.random_range(-1.0..=1.0)));
        let mut f = model.fraction(&alpha)?;
        for _ in 0..LINE_SWEEPS {
            for i in 1..=k {
                f = line_search(&model, &mut alpha, i)?;
            }
        }
        if f > best_f {
            best_f = f;
            best = alpha;
        }
    }
    Ok((BmParams::new(best)?, best_f))
}

/// One Th-s run from the spins drawn by `rng`; returns the cut weight.
fn th_run(g: &Graph, adj: &[Vec<usize>], thresholds: &[u32], rng: &mut ChaCha8Rng) -> f64 {
    let mut spin: Vec<bool> = (0..g.n()).map(|_| rng.random()).collect();
    let mut next = spin.clone();
    for &t in thresholds {
        for (v, nbrs) in adj.iter().enumerate() {
            let same = nbrs.iter().filter(|&&w| spin[w] == spin[v]).count() as u32;
            next[v] = if same >= t { !spin[v] } else { spin[v] };
        }
        std::mem::swap(&mut spin, &mut next);
    }
    g.cut_of(&spin)
}

/// Monte Carlo mean cut fraction of Th-s and its standard error. Sample `i`
/// draws from stream `i` of a ChaCha8 generator keyed by the seed, so the
/// result does not depend on the thread count.
pub fn th_simulate(g: &Graph, params: &ThParams) -> Result<(f64, f64)> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let adj = g.adjacency();
    let total = g.total_weight();
    let fractions: Vec<f64> = (0..params.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(i as u64);
            th_run(g, &adj, &params.thresholds, &mut rng) / total
        })
        .collect();
    let t = fractions.len() as f64;
    let mean = fractions.iter().sum::<f64>() / t;
    if fractions.len() < 2 {
        return Ok((mean, 0.0));
    }
    let var = fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (t - 1.0);
    Ok((mean, (var / t).sqrt()))
}

/// Every threshold sequence with `1 ≤ s ≤ p`, shortest first, then
/// lexicographic.
fn threshold_sequences(p: usize) -> impl Iterator<Item = Vec<u32>> {
    (1..=p).flat_map(|s| {
        (0..3usize.pow(s as u32)).map(move |mut code| {
            let mut seq = vec![1u32; s];
            for slot in seq.iter_mut().rev() {
                *slot += (code % 3) as u32;
                code /= 3;
            }
            seq
        })
    })
}

/// Exhaustive Th-s search over `s ≤ p` and thresholds in `{1, 2, 3}`. All
/// candidates share the seed; ties keep the earliest candidate.
pub fn th_search(g: &Graph, p: usize, samples: usize, seed: u64) -> Result<(ThParams, f64)> {
    if p == 0 {
        return Err(Error::Parameters("p must be at least 1".into()));
    }
    let mut best: Option<(ThParams, f64)> = None;
    for seq in threshold_sequences(p) {
        let params = ThParams::new(seq, samples, seed)?;
        let (mean, _) = th_simulate(g, &params)?;
        if best.as_ref().is_none_or(|b| mean > b.1) {
            best = Some((params, mean));
        }
    }
    Ok(best.expect("p >= 1 yields candidates"))
}

/// Winning family of [`best_classical`].
#[derive(Debug, Clone, PartialEq)]
pub enum Classical {
    Bm(BmParams),
    Th(ThParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalBest {
    pub winner: Classical,
    pub fraction: f64,
    pub bm_fraction: f64,
    pub th_fraction: f64,
}

/// Pointwise maximum of the tuned BM-p and Th-s baselines; BM wins ties.
pub fn best_classical(g: &Graph, p: usize, seed: u64) -> Result<ClassicalBest> {
    let (bm, bm_fraction) = bm_optimize(g, p, DEFAULT_RESTARTS, seed)?;
    let (th, th_fraction) = th_search(g, p, DEFAULT_SAMPLES, seed)?;
    let (winner, fraction) =
        if bm_fraction >= th_fraction { (Classical::Bm(bm), bm_fraction) } else { (Classical::Th(th), th_fraction) };
    Ok(ClassicalBest { winner, fraction, bm_fraction, th_fraction })
}
