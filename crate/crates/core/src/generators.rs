//! The three benchmark families: generalized Petersen graphs, the fixed
//! double-layer triangular 2-lift, and the truncated icosahedron.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, PseudoBooleanPolynomial};

/// Edge list of the 24-vertex double-layer triangular 2-lift.
pub const TRI_2LIFT_EDGES: [(usize, usize); 36] = [
    (0, 5), (0, 11), (0, 13), (1, 4), (1, 10), (1, 12),
    (2, 7), (2, 9), (2, 15), (3, 6), (3, 8), (3, 14),
    (4, 10), (4, 18), (5, 11), (5, 19), (6, 8), (6, 16),
    (7, 9), (7, 17), (8, 23), (9, 22), (10, 21), (11, 20),
    (12, 19), (12, 22), (13, 18), (13, 23), (14, 17), (14, 20),
    (15, 16), (15, 21), (16, 21), (17, 20), (18, 23), (19, 22),
];

/// SHA-256 of the canonical edge list (`"u v\n"` per edge, sorted).
pub const TRI_2LIFT_SHA256: &str = "c618940c6a7d8ff98fa8936d8740d05bfc6ad25c65cdd910eee7babd6aab440e";

/// Edge list of the truncated icosahedron (C60 fullerene graph).
pub const C60_EDGES: [(usize, usize); 90] = [
    (0, 1), (0, 3), (0, 5), (1, 2), (1, 10), (2, 4),
    (2, 30), (3, 4), (3, 35), (4, 40), (5, 6), (5, 9),
    (6, 8), (6, 11), (7, 8), (7, 9), (7, 15), (8, 25),
    (9, 36), (10, 11), (10, 14), (11, 13), (12, 13), (12, 14),
    (12, 20), (13, 26), (14, 31), (15, 16), (15, 17), (16, 18),
    (16, 27), (17, 19), (17, 37), (18, 19), (18, 45), (19, 55),
    (20, 21), (20, 22), (21, 23), (21, 28), (22, 24), (22, 32),
    (23, 24), (23, 46), (24, 50), (25, 26), (25, 27), (26, 28),
    (27, 29), (28, 29), (29, 47), (30, 31), (30, 33), (31, 32),
    (32, 34), (33, 34), (33, 41), (34, 51), (35, 36), (35, 38),
    (36, 37), (37, 39), (38, 39), (38, 42), (39, 56), (40, 41),
    (40, 42), (41, 43), (42, 44), (43, 44), (43, 52), (44, 57),
    (45, 47), (45, 49), (46, 47), (46, 48), (48, 49), (48, 53),
    (49, 58), (50, 51), (50, 53), (51, 52), (52, 54), (53, 54),
    (54, 59), (55, 56), (55, 58), (56, 57), (57, 59), (58, 59),
];

pub const C60_SHA256: &str = "95c50028a8ae8eb144db8f7f8b24e02123bde117010df7790a9e656860f7fe5f";

/// Generalized Petersen graph `GP(n, k)`.
///
/// Outer vertices `v_i` are numbered `i`, inner vertices `w_i` are `n + i`.
/// Edges: `v_i v_{i+1}`, `v_i w_i` and `w_i w_{i+k}`, indices mod `n`.
pub fn gen_gp(n: usize, k: usize) -> Result<Graph> {
    if n < 3 || k == 0 || 2 * k >= n {
        return Err(Error::Parameters(format!("GP({n}, {k}) needs n >= 3 and 1 <= k < n/2")));
    }
    let edges = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, n + i), (n + i, n + (i + k) % n)]);
    Graph::unweighted(2 * n, edges)
}

pub fn gen_tri2lift() -> Graph {
    Graph::unweighted(24, TRI_2LIFT_EDGES).expect("constant edge list is simple")
}

pub fn gen_c60() -> Graph {
    Graph::unweighted(60, C60_EDGES).expect("constant edge list is simple")
}

/// Resolves a generator URI: `gp:<n>:<k>`, `tri2lift` or `c60`.
pub fn from_uri(uri: &str) -> Result<Graph> {
    let parts: Vec<&str> = uri.split(':').collect();
    match parts.as_slice() {
        ["tri2lift"] => Ok(gen_tri2lift()),
        ["c60"] => Ok(gen_c60()),
        ["gp", n, k] => {
            let n = n.parse().map_err(|_| Error::Parameters(format!("bad GP size `{n}`")))?;
            let k = k.parse().map_err(|_| Error::Parameters(format!("bad GP step `{k}`")))?;
            gen_gp(n, k)
        }
        _ => Err(Error::Parameters(format!("unknown generator `{uri}`"))),
    }
}

/// Random connected graph: a uniform random recursive tree plus up to
/// `extra` further edges, weights uniform in `[0.5, 1.5)`.
pub fn random_connected(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = BTreeSet::new();
    for v in 1..n {
        edges.insert((rng.random_range(0..v), v));
    }
    for _ in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let weighted: Vec<_> = edges.into_iter().map(|(a, b)| (a, b, rng.random_range(0.5..1.5))).collect();
    Graph::new(n, weighted).expect("edges are simple and in range")
}

/// Random polynomial with `terms` draws of arity `1..=max_arity` and
/// coefficients uniform in `[-1, 1)`; repeated supports are merged away.
pub fn random_polynomial(n: usize, terms: usize, max_arity: usize, rng: &mut ChaCha8Rng) -> PseudoBooleanPolynomial {
    let mut chosen = std::collections::BTreeMap::new();
    for _ in 0..terms {
        let arity = rng.random_range(1..=max_arity.min(n));
        let mut support = BTreeSet::new();
        while support.len() < arity {
            support.insert(rng.random_range(0..n));
        }
        let c: f64 = rng.random_range(-1.0..1.0);
        if c != 0.0 {
            chosen.insert(support.into_iter().collect::<Vec<_>>(), c);
        }
    }
    let constant = rng.random_range(-1.0..1.0);
    PseudoBooleanPolynomial::new(n, constant, chosen).expect("supports are distinct and in range")
}

/// Seeded generator for the helpers above.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
