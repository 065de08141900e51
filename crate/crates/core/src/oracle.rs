//! Dense statevector reference for small instances.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{CutInstance, Graph, PseudoBooleanPolynomial};
use crate::qaoa::AngleSchedule;

/// Qubit cap for [`oracle_expectation`].
pub const ORACLE_CAP: usize = 22;
/// Vertex cap for [`maxcut_bruteforce`].
pub const BRUTEFORCE_CAP: usize = 24;

/// `2^n` amplitudes; qubit `q` is bit `q` of the basis index, and a set bit
/// is spin `-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|+>^n`.
    pub fn uniform(n: usize) -> Self {
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        StateVector { n, amps: vec![a; 1 << n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiplies amplitude `x` by `exp(-i θ diag[x])`.
    pub fn apply_phase(&mut self, diag: &[f64], theta: f64) {
        for (a, &c) in self.amps.iter_mut().zip(diag) {
            *a *= Complex64::from_polar(1.0, -theta * c);
        }
    }

    /// Applies `exp(-i β X)` to every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (c, s) = (beta.cos(), beta.sin());
        let minus_is = Complex64::new(0.0, -s);
        for q in 0..self.n {
            let stride = 1usize << q;
            for base in (0..self.amps.len()).step_by(2 * stride) {
                for x in base..base + stride {
                    let (a, b) = (self.amps[x], self.amps[x + stride]);
                    self.amps[x] = a * c + b * minus_is;
                    self.amps[x + stride] = a * minus_is + b * c;
                }
            }
        }
    }

    /// `Σ_x |ψ(x)|² diag[x]`.
    pub fn expectation(&self, diag: &[f64]) -> f64 {
        self.amps.iter().zip(diag).map(|(a, d)| a.norm_sqr() * d).sum()
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > ORACLE_CAP {
        return Err(Error::SizeCap { n, cap: ORACLE_CAP });
    }
    Ok(())
}

/// Runs the circuit with `diag` as the cost table and measures `diag`.
fn run(diag: &[f64], n: usize, sched: &AngleSchedule) -> StateVector {
    let scale = sched.convention().scale();
    let mut psi = StateVector::uniform(n);
    for (g, b) in sched.gamma().iter().zip(sched.beta()) {
        psi.apply_phase(diag, scale * g);
        psi.apply_mixer(*b);
    }
    psi
}

/// The QAOA state for the cut cost of `inst`.
pub fn qaoa_state<I: CutInstance + ?Sized>(inst: &I, sched: &AngleSchedule) -> Result<StateVector> {
    let n = inst.num_vertices();
    check_cap(n)?;
    let diag: Vec<f64> = (0..1u64 << n).map(|x| inst.cut_value(x)).collect();
    Ok(run(&diag, n, sched))
}

/// `shift + ⟨ψ_p| C |ψ_p⟩` by dense simulation, `C` the (hyper)cut.
pub fn oracle_expectation<I: CutInstance + ?Sized>(inst: &I, shift: f64, sched: &AngleSchedule) -> Result<f64> {
    let n = inst.num_vertices();
    check_cap(n)?;
    let diag: Vec<f64> = (0..1u64 << n).map(|x| inst.cut_value(x)).collect();
    Ok(shift + run(&diag, n, sched).expectation(&diag))
}

/// `⟨ψ_p| w_t (1 - Π_{i ∈ t} Z_i) / 2 |ψ_p⟩` for a single term `t`.
pub fn oracle_term<I: CutInstance + ?Sized>(inst: &I, t: usize, sched: &AngleSchedule) -> Result<f64> {
    let n = inst.num_vertices();
    check_cap(n)?;
    let diag: Vec<f64> = (0..1u64 << n).map(|x| inst.cut_value(x)).collect();
    let (vs, w) = inst.term(t);
    let observable: Vec<f64> = (0..1u64 << n)
        .map(|x| w * vs.iter().fold(0u64, |acc, &v| acc ^ ((x >> v) & 1)) as f64)
        .collect();
    Ok(run(&diag, n, sched).expectation(&observable))
}

/// `⟨C_B⟩` straight from the monomials. The circuit phases by `C_B`
/// itself, which differs from the hypergraph cut by a constant and hence
/// only by a global phase.
pub fn oracle_buco(poly: &PseudoBooleanPolynomial, sched: &AngleSchedule) -> Result<f64> {
    let n = poly.n();
    check_cap(n)?;
    let diag: Vec<f64> = (0..1u64 << n).map(|x| poly.evaluate(x)).collect();
    Ok(run(&diag, n, sched).expectation(&diag))
}

/// Maximum cut by exhaustive search over `2^(n-1)` bipartitions in Gray-code
/// order with vertex 0 kept outside the witness set. Ties go to the
/// smallest witness mask.
pub fn maxcut_bruteforce(g: &Graph) -> Result<(f64, Vec<usize>)> {
    let n = g.n();
    if n > BRUTEFORCE_CAP {
        return Err(Error::SizeCap { n, cap: BRUTEFORCE_CAP });
    }
    if n <= 1 {
        return Ok((0.0, Vec::new()));
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u()].push((e.v(), e.weight));
        adj[e.v()].push((e.u(), e.weight));
    }
    let tol = 1e-9 * (1.0 + g.total_weight());
    let mut mask: u64 = 0;
    let mut cut = 0.0;
    let (mut best, mut best_mask) = (0.0, 0u64);
    for i in 1u64..1 << (n - 1) {
        // Gray code step: flip vertex 1 + trailing_zeros(i).
        let v = 1 + i.trailing_zeros() as usize;
        let side = (mask >> v) & 1;
        for &(u, w) in &adj[v] {
            if (mask >> u) & 1 == side {
                cut += w;
            } else {
                cut -= w;
            }
        }
        mask ^= 1 << v;
        if cut > best + tol || (cut > best - tol && mask < best_mask) {
            best = cut;
            best_mask = mask;
        }
    }
    let witness = (0..n).filter(|&v| (best_mask >> v) & 1 == 1).collect();
    Ok((g.cut_value(best_mask), witness))
}
