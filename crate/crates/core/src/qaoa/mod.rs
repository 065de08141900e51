//! Exact QAOA expectation values by message passing over tree
//! decompositions of each observable's lightcone.
//!
//! Every vertex carries `L = 2p + 1` replicated spins, one per layer of the
//! forward/backward path-integral expansion. A layer word packs them with bit
//! `b` holding layer `[1, 2, .., p, 0, -p, .., -1][b]`; a set bit is spin `-1`.

mod dp;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CutInstance, Graph, Hypergraph, PseudoBooleanPolynomial};
use crate::local::{local_subgraph, local_subhypergraph, LocalInstance};
use crate::treewidth::{self, RootedDecomposition, TreeDecomposition};

pub use dp::{message_tables, BagMessageTable};

/// Largest supported round count (layer words are `u32`).
pub const MAX_ROUNDS: usize = 15;

/// How the phase separator couples to the cost.
///
/// `Cut` applies `exp(-i γ C)` with `C` the weighted cut, which is the
/// literal reading of the layer formula. `Ising` applies `exp(-2i γ C)`,
/// equivalently `exp(i γ Σ w z_u z_v)` up to a global phase; published
/// angle tables for cubic graphs use this normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    #[default]
    Cut,
    Ising,
}

impl PhaseConvention {
    pub fn scale(self) -> f64 {
        match self {
            PhaseConvention::Cut => 1.0,
            PhaseConvention::Ising => 2.0,
        }
    }
}

/// Round count and the two angle vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSchedule {
    gamma: Vec<f64>,
    beta: Vec<f64>,
    convention: PhaseConvention,
}

impl AngleSchedule {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.is_empty() || gamma.len() != beta.len() {
            return Err(Error::Schedule(format!(
                "need p >= 1 with |gamma| = |beta|, got {} and {}",
                gamma.len(),
                beta.len()
            )));
        }
        if gamma.len() > MAX_ROUNDS {
            return Err(Error::Schedule(format!("p = {} exceeds the supported maximum {MAX_ROUNDS}", gamma.len())));
        }
        if gamma.iter().chain(&beta).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("angle schedule"));
        }
        Ok(AngleSchedule { gamma, beta, convention: PhaseConvention::Cut })
    }

    pub fn with_convention(mut self, convention: PhaseConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn layers(&self) -> usize {
        2 * self.p() + 1
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn convention(&self) -> PhaseConvention {
        self.convention
    }

    /// `Γ` in bit order: `(γ_1, .., γ_p, 0, -γ_p, .., -γ_1)`.
    pub fn gamma_vector(&self) -> Vec<f64> {
        let mut v = self.gamma.clone();
        v.push(0.0);
        v.extend(self.gamma.iter().rev().map(|g| -g));
        v
    }
}

/// Bit position of layer `j ∈ [-p, p]`.
pub fn layer_bit(p: usize, j: i32) -> usize {
    let p = p as i32;
    assert!((-p..=p).contains(&j), "layer {j} outside [-{p}, {p}]");
    match j {
        1.. => (j - 1) as usize,
        0 => p as usize,
        _ => (2 * p + 1 + j) as usize,
    }
}

/// One vertex's spins on all `2p + 1` layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerAssignment {
    pub p: usize,
    pub word: u32,
}

impl LayerAssignment {
    /// Builds a word from spins listed in layer order `j = -p, .., p`.
    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        if spins.len() % 2 == 0 || spins.iter().any(|s| s.abs() != 1) {
            return Err(Error::Parameters("spins must be ±1 on an odd number of layers".into()));
        }
        let p = spins.len() / 2;
        let word = spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .fold(0u32, |w, (i, _)| w | 1 << layer_bit(p, i as i32 - p as i32));
        Ok(LayerAssignment { p, word })
    }

    pub fn spin(&self, j: i32) -> i8 {
        1 - 2 * ((self.word >> layer_bit(self.p, j)) & 1) as i8
    }
}

/// Matrix element `<a| exp(±i β X) |b>` for bits `a`, `b`.
fn rotation(a: u32, b: u32, beta: f64, sign: f64) -> Complex64 {
    if a == b {
        Complex64::new(beta.cos(), 0.0)
    } else {
        Complex64::new(0.0, sign * beta.sin())
    }
}

pub(crate) fn kernel_word(word: u32, sched: &AngleSchedule) -> Complex64 {
    let p = sched.p();
    let bit = |b: usize| (word >> b) & 1;
    let mut acc = Complex64::new(0.5, 0.0);
    for b in 0..2 * p {
        acc *= if b < p {
            rotation(bit(b), bit(b + 1), sched.beta[b], 1.0)
        } else {
            rotation(bit(b), bit(b + 1), sched.beta[2 * p - b - 1], -1.0)
        };
    }
    acc
}

/// The one-qubit mixer kernel `f(z_v)`: half the product of the forward
/// chain `exp(iβX)` elements from layer 1 to 0 and the backward chain
/// `exp(-iβX)` elements from 0 to -1.
pub fn mixer_kernel(assign: LayerAssignment, sched: &AngleSchedule) -> Complex64 {
    assert_eq!(assign.p, sched.p(), "assignment and schedule disagree on p");
    kernel_word(assign.word, sched)
}

/// `exp(i Σ_j Γ_j C_j)` for per-layer cut values listed as `j = -p, .., p`.
pub fn phase_weight(layer_cuts: &[f64], sched: &AngleSchedule) -> Complex64 {
    let p = sched.p();
    assert_eq!(layer_cuts.len(), 2 * p + 1, "need one cut value per layer");
    let gv = sched.gamma_vector();
    let scale = sched.convention.scale();
    let angle: f64 = layer_cuts
        .iter()
        .enumerate()
        .map(|(i, c)| gv[layer_bit(p, i as i32 - p as i32)] * c)
        .sum();
    Complex64::from_polar(1.0, scale * angle)
}

/// Which spin domains the dynamic program sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// All `2^L` layer words for every vertex.
    None,
    /// A vertex at distance `d` from the observable only sees rounds
    /// `1..=p-d+1`; the remaining layers are summed out in closed form.
    #[default]
    Lightcone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decomposer {
    Exact,
    Heuristic,
    /// Exact up to the branch-and-bound cap, min-fill above it.
    #[default]
    Auto,
}

impl Decomposer {
    pub fn decompose<I: CutInstance + ?Sized>(self, inst: &I) -> Result<TreeDecomposition> {
        match self {
            Decomposer::Exact => treewidth::exact_decomposition(inst),
            Decomposer::Heuristic => Ok(treewidth::heuristic_decomposition(inst)),
            Decomposer::Auto => match treewidth::exact_decomposition(inst) {
                Err(Error::SizeCap { .. }) => Ok(treewidth::heuristic_decomposition(inst)),
                other => other,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    pub decomposer: Decomposer,
    pub reduction: Reduction,
    /// Keep every per-observable contribution in the result.
    pub keep_contributions: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationResult {
    /// Expected objective value, including `constant_shift`.
    pub value: f64,
    /// Largest imaginary part seen on any contribution.
    pub imag_residual: f64,
    /// `(parent vertex ids, contribution)` per observable, in instance order.
    pub per_contribution: Option<Vec<(Vec<usize>, Complex64)>>,
    pub constant_shift: f64,
    /// Sum of the instance's term weights.
    pub total_weight: f64,
    /// Largest decomposition width used.
    pub max_width: usize,
}

impl ExpectationResult {
    /// `value / total_weight`; the cut fraction for Max-Cut instances.
    pub fn cut_fraction(&self) -> f64 {
        (self.value - self.constant_shift) / self.total_weight
    }
}

/// The expectation of one term of `local.sub` (its anchor) under the
/// decomposition `rd`.
pub fn contribution<I: CutInstance>(
    local: &LocalInstance<I>,
    rd: &RootedDecomposition,
    sched: &AngleSchedule,
    reduction: Reduction,
) -> Result<Complex64> {
    dp::run(local, rd, sched, reduction)
}

/// `contrib_p(e)` for the anchor edge of a graph lightcone.
pub fn edge_contribution(local: &LocalInstance<Graph>, rd: &RootedDecomposition, sched: &AngleSchedule) -> Result<Complex64> {
    dp::run(local, rd, sched, Reduction::Lightcone)
}

/// Expectation of the anchor hyperedge's cut term.
pub fn hyperedge_contribution(
    local: &LocalInstance<Hypergraph>,
    rd: &RootedDecomposition,
    sched: &AngleSchedule,
) -> Result<Complex64> {
    dp::run(local, rd, sched, Reduction::Lightcone)
}

/// Decomposes, roots and evaluates one local instance.
pub fn evaluate_local<I: CutInstance>(local: &LocalInstance<I>, sched: &AngleSchedule, opts: &EvalOptions) -> Result<(Complex64, usize)> {
    let td = opts.decomposer.decompose(&local.sub)?;
    let rd = treewidth::root_at(&td, &local.anchor, &local.sub)?;
    Ok((dp::run(local, &rd, sched, opts.reduction)?, rd.width()))
}

fn assemble<F>(anchors: Vec<Vec<usize>>, total_weight: f64, shift: f64, opts: &EvalOptions, eval: F) -> Result<ExpectationResult>
where
    F: Fn(usize) -> Result<(Complex64, usize)> + Sync,
{
    let parts: Vec<(Complex64, usize)> = (0..anchors.len()).into_par_iter().map(&eval).collect::<Result<_>>()?;
    // Summed sequentially in anchor order so the result does not depend on
    // the worker count.
    let mut value = shift;
    let mut imag_residual: f64 = 0.0;
    let mut max_width = 0;
    for (c, w) in &parts {
        value += c.re;
        imag_residual = imag_residual.max(c.im.abs());
        max_width = max_width.max(*w);
    }
    let per_contribution = opts
        .keep_contributions
        .then(|| anchors.into_iter().zip(parts.iter().map(|p| p.0)).collect());
    Ok(ExpectationResult { value, imag_residual, per_contribution, constant_shift: shift, total_weight, max_width })
}

/// `⟨C⟩` for Max-Cut on `g`: the sum of edge contributions over lightcones.
pub fn expectation(g: &Graph, sched: &AngleSchedule, opts: &EvalOptions) -> Result<ExpectationResult> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let p = sched.p();
    let anchors: Vec<Vec<usize>> = g.edges().iter().map(|e| e.ends.to_vec()).collect();
    assemble(anchors, g.total_weight(), 0.0, opts, |i| {
        let e = g.edges()[i];
        let local = local_subgraph(g, e.u(), e.v(), p)?;
        evaluate_local(&local, sched, opts)
    })
}

/// `Σ_S ⟨w_S (1 - Π z) / 2⟩` over the hyperedges of `h`.
pub fn hypergraph_expectation(h: &Hypergraph, sched: &AngleSchedule, opts: &EvalOptions) -> Result<ExpectationResult> {
    hypergraph_expectation_shifted(h, 0.0, sched, opts)
}

fn hypergraph_expectation_shifted(h: &Hypergraph, shift: f64, sched: &AngleSchedule, opts: &EvalOptions) -> Result<ExpectationResult> {
    let p = sched.p();
    let anchors: Vec<Vec<usize>> = h.hyperedges().iter().map(|e| e.vertices.clone()).collect();
    assemble(anchors, h.total_weight(), shift, opts, |i| {
        let local = local_subhypergraph(h, &h.hyperedges()[i].vertices, p)?;
        evaluate_local(&local, sched, opts)
    })
}

/// Rewrites `C_B = c0 + Σ c_S Π z` as `c_* + Σ w_S (1 - Π z) / 2` with
/// `w_S = -2 c_S` and `c_* = c0 + Σ c_S`.
pub fn buco_encode(poly: &PseudoBooleanPolynomial) -> (Hypergraph, f64) {
    let shift = poly.constant() + poly.terms().iter().map(|t| t.coeff).sum::<f64>();
    let h = Hypergraph::new(poly.n(), poly.terms().iter().map(|t| (t.support.clone(), -2.0 * t.coeff)))
        .expect("polynomial supports are valid and distinct");
    (h, shift)
}

/// `⟨C_B⟩` with the hypergraph cut of [`buco_encode`] as the cost Hamiltonian.
pub fn buco_expectation(poly: &PseudoBooleanPolynomial, sched: &AngleSchedule, opts: &EvalOptions) -> Result<ExpectationResult> {
    let (h, shift) = buco_encode(poly);
    hypergraph_expectation_shifted(&h, shift, sched, opts)
}

#[cfg(test)]
mod tests;
