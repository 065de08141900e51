//! The MAXCUT blow-up `G -> G'`, its cut lift and recovery arithmetic, and
//! Laurent coefficient recovery from samples on the unit circle.
//!
//! Vertex numbering in `G'`: one block of `11 n0 + 1` ids per original
//! vertex `u` in ascending order (first the `n0 + 1` left slots, then the
//! `10 n0` right slots), then the frame side `X`, then `Y`, then the
//! controller `w`. So `x_0 = n0 (11 n0 + 1)`, `y_0 = x_0 + M` and
//! `w = x_0 + 2M` with `M = 100 n0²`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// What a vertex of `G'` stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Slot `i ∈ 0..=n0` of `L_u`.
    Left { u: usize, i: usize },
    /// Slot `j ∈ 0..10 n0` of `R_u`.
    Right { u: usize, j: usize },
    X(usize),
    Y(usize),
    Controller,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionInstance {
    pub gprime: Graph,
    pub n0: usize,
    pub m0: usize,
    pub roles: Vec<Role>,
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
}

/// Side length `M = 100 n0²` of the frame.
pub fn frame_side(n0: usize) -> usize {
    100 * n0 * n0
}

fn block(n0: usize) -> usize {
    11 * n0 + 1
}

/// `|V(G')| = 211 n0² + n0 + 1`.
pub fn gprime_order(n0: usize) -> usize {
    211 * n0 * n0 + n0 + 1
}

impl ReductionInstance {
    pub fn left(&self, u: usize, i: usize) -> usize {
        u * block(self.n0) + i
    }

    pub fn right(&self, u: usize, j: usize) -> usize {
        u * block(self.n0) + self.n0 + 1 + j
    }
}

/// Builds `G'` from a connected unweighted graph on `n0 ≥ 2` vertices.
pub fn build_gprime(g: &Graph) -> Result<ReductionInstance> {
    let n0 = g.n();
    if n0 < 2 {
        return Err(Error::Reduction(format!("need at least 2 vertices, got {n0}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !g.is_unweighted() {
        return Err(Error::Reduction("input graph must be unweighted".into()));
    }
    let (b, big_m) = (block(n0), frame_side(n0));
    let (x0, y0, w) = (n0 * b, n0 * b + big_m, n0 * b + 2 * big_m);
    let left = |u: usize, i: usize| u * b + i;
    let right = |u: usize, j: usize| u * b + n0 + 1 + j;

    let mut roles = Vec::with_capacity(gprime_order(n0));
    for u in 0..n0 {
        roles.extend((0..=n0).map(|i| Role::Left { u, i }));
        roles.extend((0..10 * n0).map(|j| Role::Right { u, j }));
    }
    roles.extend((0..big_m).map(Role::X));
    roles.extend((0..big_m).map(Role::Y));
    roles.push(Role::Controller);

    let mut edges = Vec::with_capacity(expected_census(n0, g.m()).total());
    for u in 0..n0 {
        for i in 0..=n0 {
            edges.extend((0..10 * n0).map(|j| (left(u, i), right(u, j))));
        }
    }
    for e in g.edges() {
        edges.extend((0..=n0).map(|i| (left(e.u(), i), left(e.v(), i))));
    }
    for i in 0..big_m {
        edges.extend((0..big_m).map(|j| (x0 + i, y0 + j)));
    }
    for v in 0..n0 * b {
        edges.push((v, x0));
        edges.push((v, y0));
    }
    edges.extend([(w, x0), (w, y0)]);
    edges.extend((0..n0).map(|u| (w, left(u, 0))));

    let gprime = Graph::unweighted(roles.len(), edges)?;
    Ok(ReductionInstance { gprime, n0, m0: g.m(), roles, x0, y0, w })
}

/// Edge counts of `G'` by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Census {
    pub gadget: usize,
    pub synchronous: usize,
    pub frame: usize,
    pub spokes: usize,
    pub controller: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.gadget + self.synchronous + self.frame + self.spokes + self.controller
    }
}

/// Closed-form census for an input with `n0` vertices and `m0` edges.
pub fn expected_census(n0: usize, m0: usize) -> Census {
    Census {
        gadget: n0 * (n0 + 1) * 10 * n0,
        synchronous: m0 * (n0 + 1),
        frame: frame_side(n0).pow(2),
        spokes: 2 * n0 * (11 * n0 + 1),
        controller: n0 + 2,
    }
}

/// Census obtained by classifying every edge of the built graph.
pub fn census(inst: &ReductionInstance) -> Census {
    let mut c = Census::default();
    for e in inst.gprime.edges() {
        let (a, b) = (inst.roles[e.u()], inst.roles[e.v()]);
        let slot = match (a, b) {
            (Role::Controller, _) | (_, Role::Controller) => &mut c.controller,
            (Role::X(_), Role::Y(_)) | (Role::Y(_), Role::X(_)) => &mut c.frame,
            (Role::Left { .. }, Role::Left { .. }) => &mut c.synchronous,
            (Role::Left { .. }, Role::Right { .. }) | (Role::Right { .. }, Role::Left { .. }) => &mut c.gadget,
            _ => &mut c.spokes,
        };
        *slot += 1;
    }
    c
}

/// `b(n0) = 10000 n0⁴ + n0 (11 n0 + 1) + 1 + 10 n0² (n0 + 1)`.
pub fn b_constant(n0: u64) -> u128 {
    let n = n0 as u128;
    10000 * n.pow(4) + n * (11 * n + 1) + 1 + 10 * n * n * (n + 1)
}

/// Canonical lift of `S ⊆ V(G)` to a bipartition of `G'`: `L_u` joins the
/// lifted side iff `u ∈ S`, `R_u` goes opposite, `X` joins and `Y` stays
/// out, and `w` sits opposite the majority of the `u_{1,0}` (ties put it
/// with `y_0`). Returns membership flags of the lifted side.
pub fn lift_cut(g: &Graph, s: &[usize], inst: &ReductionInstance) -> Result<Vec<bool>> {
    let n0 = inst.n0;
    if g.n() != n0 {
        return Err(Error::Reduction(format!("instance built for {} vertices, graph has {}", n0, g.n())));
    }
    let mut in_s = vec![false; n0];
    for &u in s {
        if u >= n0 {
            return Err(Error::InvalidVertex { vertex: u, n: n0 });
        }
        in_s[u] = true;
    }
    let mut side: Vec<bool> = inst
        .roles
        .iter()
        .map(|r| match *r {
            Role::Left { u, .. } => in_s[u],
            Role::Right { u, .. } => !in_s[u],
            Role::X(_) => true,
            Role::Y(_) => false,
            Role::Controller => false,
        })
        .collect();
    let inside = in_s.iter().filter(|&&x| x).count();
    side[inst.w] = 2 * inside < n0;
    Ok(side)
}

/// `⌊(MAXCUT(G') − b(n0)) / (n0 + 1)⌋`.
pub fn recover_maxcut(gprime_maxcut: u128, n0: u64) -> Result<u128> {
    let b = b_constant(n0);
    if gprime_maxcut < b {
        return Err(Error::Reduction(format!("cut value {gprime_maxcut} is below b(n0) = {b}")));
    }
    Ok((gprime_maxcut - b) / (n0 as u128 + 1))
}

/// Integer cut value of a bipartition of an unweighted graph.
pub fn integer_cut(g: &Graph, side: &[bool]) -> u128 {
    g.edges().iter().filter(|e| side[e.u()] != side[e.v()]).count() as u128
}

/// Coefficients `w(k)` of `Σ_{k=-m}^{m} w(k) x^k`, stored at index `k + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentCoefficients {
    m: usize,
    coeffs: Vec<Complex64>,
}

impl LaurentCoefficients {
    pub fn new(m: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * m + 1 {
            return Err(Error::SampleCount { expected: 2 * m + 1, got: coeffs.len() });
        }
        Ok(LaurentCoefficients { m, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Coefficients by shifted index `k + m`.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `w(k)` for `k ∈ [-m, m]`.
    pub fn get(&self, k: i64) -> Option<Complex64> {
        let idx = k.checked_add(self.m as i64)?;
        usize::try_from(idx).ok().and_then(|i| self.coeffs.get(i).copied())
    }

    pub fn evaluate(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc * x.powi(-(self.m as i32))
    }

    /// Samples at `ω^j`, `ω = exp(2πi / (2m+1))`, `j = 0..=2m`.
    pub fn sample(&self) -> Vec<Complex64> {
        (0..self.coeffs.len()).map(|j| self.evaluate(root_of_unity(self.coeffs.len(), j))).collect()
    }
}

fn root_of_unity(n: usize, j: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64)
}

/// How [`laurent_recover_with`] computes the inverse transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    /// Mixed-radix FFT, `O(m log m)`.
    #[default]
    Fft,
    /// Plain `O(m²)` sum with exact root indices `jk mod (2m+1)`.
    Direct,
}

/// Recovers `w(k)` from samples `h(ω^j)` of `h(x) = Σ w(k) x^k`.
pub fn laurent_recover(samples: &[Complex64], m: usize) -> Result<LaurentCoefficients> {
    laurent_recover_with(samples, m, Transform::Fft)
}

pub fn laurent_recover_with(samples: &[Complex64], m: usize, how: Transform) -> Result<LaurentCoefficients> {
    let n = 2 * m + 1;
    if samples.len() != n {
        return Err(Error::SampleCount { expected: n, got: samples.len() });
    }
    if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
        return Err(Error::NonFinite("samples"));
    }
    // spectrum[r] = Σ_j h(ω^j) ω^{-jr}
    let spectrum = match how {
        Transform::Fft => {
            let mut buf = samples.to_vec();
            FftPlanner::new().plan_fft_forward(n).process(&mut buf);
            buf
        }
        Transform::Direct => {
            let roots: Vec<Complex64> = (0..n).map(|j| root_of_unity(n, j).conj()).collect();
            (0..n).map(|r| samples.iter().enumerate().map(|(j, s)| s * roots[(j * r) % n]).sum()).collect()
        }
    };
    let scale = 1.0 / n as f64;
    let coeffs = (0..n).map(|idx| spectrum[(idx + n - m) % n] * scale).collect();
    LaurentCoefficients::new(m, coeffs)
}

/// As [`laurent_recover`] for samples of `x^m h(x)`, the polynomial form.
pub fn laurent_recover_shifted(samples: &[Complex64], m: usize) -> Result<LaurentCoefficients> {
    let n = 2 * m + 1;
    if samples.len() != n {
        return Err(Error::SampleCount { expected: n, got: samples.len() });
    }
    let unshifted: Vec<Complex64> =
        samples.iter().enumerate().map(|(j, s)| s * root_of_unity(n, (j * m) % n).conj()).collect();
    laurent_recover(&unshifted, m)
}

/// Largest exponent whose coefficient exceeds `threshold` in modulus.
pub fn top_exponent(coeffs: &LaurentCoefficients, threshold: f64) -> Result<Option<i64>> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::Parameters(format!("threshold must be positive, got {threshold}")));
    }
    let m = coeffs.m as i64;
    Ok(coeffs.coeffs.iter().rposition(|c| c.norm() > threshold).map(|i| i as i64 - m))
}
