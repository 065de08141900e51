//! Property checks shared by the proptest suite and the acceptance harness.
//! Each takes a seed, builds its own random instance and returns a
//! description of the first violation.

#![allow(dead_code)]

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use lightcone_qaoa::generators::{random_connected, seeded};
use lightcone_qaoa::graph::{bfs_distances, Graph};
use lightcone_qaoa::local::local_subgraph;
use lightcone_qaoa::qaoa::{evaluate_local, expectation, AngleSchedule, Decomposer, EvalOptions};

pub type Check = Result<(), String>;

fn angles(rng: &mut ChaCha8Rng, p: usize) -> AngleSchedule {
    let pi = std::f64::consts::PI;
    let g = (0..p).map(|_| rng.random_range(-pi..=pi)).collect();
    let b = (0..p).map(|_| rng.random_range(-pi..=pi)).collect();
    AngleSchedule::new(g, b).unwrap()
}

fn instance(seed: u64, max_n: usize, unit: bool) -> (Graph, AngleSchedule, ChaCha8Rng) {
    let mut rng = seeded(seed);
    let n = rng.random_range(3..=max_n);
    let extra = rng.random_range(0..=n / 2);
    let mut g = random_connected(n, extra, &mut rng);
    if unit {
        g = Graph::unweighted(g.n(), g.edges().iter().map(|e| (e.u(), e.v()))).unwrap();
    }
    let p = rng.random_range(1..=3);
    let s = angles(&mut rng, p);
    (g, s, rng)
}

fn kept() -> EvalOptions {
    EvalOptions { keep_contributions: true, ..EvalOptions::default() }
}

/// Every per-edge contribution is real, and within `[0, 1]` for unit weights.
pub fn realness(seed: u64) -> Check {
    let (g, s, _) = instance(seed, 10, true);
    let res = expectation(&g, &s, &kept()).map_err(|e| e.to_string())?;
    for (edge, c) in res.per_contribution.unwrap() {
        if c.im.abs() > 1e-9 * (1.0 + c.re.abs()) {
            return Err(format!("seed {seed}: edge {edge:?} has imaginary part {}", c.im));
        }
        if !(-1e-9..=1.0 + 1e-9).contains(&c.re) {
            return Err(format!("seed {seed}: edge {edge:?} contribution {} outside [0, 1]", c.re));
        }
    }
    Ok(())
}

/// Adding an edge whose endpoints are both farther than `p` from the
/// observed edge leaves its contribution unchanged. A path tail is grown
/// so that such far pairs always exist.
pub fn lightcone_invariance(seed: u64) -> Check {
    let (h, s, mut rng) = instance(seed, 8, false);
    let p = s.p();
    let tail = 2 * p + 4;
    let n = h.n() + tail;
    let mut edges: Vec<(usize, usize, f64)> = h.edges().iter().map(|e| (e.u(), e.v(), e.weight)).collect();
    let root = rng.random_range(0..h.n());
    edges.push((root, h.n(), 1.0));
    edges.extend((h.n()..n - 1).map(|v| (v, v + 1, 1.0)));
    let g = Graph::new(n, edges.clone()).unwrap();

    let e = h.edges()[rng.random_range(0..h.m())];
    let dist = bfs_distances(&g, &[e.u(), e.v()]).unwrap();
    let far: Vec<usize> = (0..n).filter(|v| dist.get(v).is_none_or(|&d| d > p)).collect();
    let candidates: Vec<(usize, usize)> = far
        .iter()
        .flat_map(|&a| far.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a < b && !g.has_edge(a, b))
        .collect();
    let &(a, b) = candidates.choose(&mut rng).ok_or(format!("seed {seed}: no far pair"))?;
    edges.push((a, b, rng.random_range(0.5..1.5)));
    let g2 = Graph::new(n, edges).unwrap();

    let opts = EvalOptions::default();
    let before = evaluate_local(&local_subgraph(&g, e.u(), e.v(), p).unwrap(), &s, &opts).unwrap().0;
    let after = evaluate_local(&local_subgraph(&g2, e.u(), e.v(), p).unwrap(), &s, &opts).unwrap().0;
    if (before - after).norm() > 1e-12 {
        return Err(format!("seed {seed}: adding ({a}, {b}) moved edge {:?} by {}", e.ends, (before - after).norm()));
    }
    Ok(())
}

/// A random vertex permutation leaves the expectation unchanged.
pub fn relabeling_invariance(seed: u64) -> Check {
    let (g, s, mut rng) = instance(seed, 10, false);
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(&mut rng);
    let h = g.relabel(&perm).unwrap();
    let opts = EvalOptions::default();
    let a = expectation(&g, &s, &opts).unwrap().value;
    let b = expectation(&h, &s, &opts).unwrap().value;
    if (a - b).abs() > 1e-12 {
        return Err(format!("seed {seed}: {a} vs {b} after relabeling"));
    }
    Ok(())
}

/// Exact and min-fill decompositions give the same edge contributions.
pub fn decomposition_independence(seed: u64) -> Check {
    let (g, s, _) = instance(seed, 10, false);
    let exact = EvalOptions { decomposer: Decomposer::Exact, keep_contributions: true, ..EvalOptions::default() };
    let heur = EvalOptions { decomposer: Decomposer::Heuristic, ..exact };
    let a = expectation(&g, &s, &exact).unwrap().per_contribution.unwrap();
    let b = expectation(&g, &s, &heur).unwrap().per_contribution.unwrap();
    for ((e, x), (_, y)) in a.iter().zip(&b) {
        if (x - y).norm() > 1e-10 {
            return Err(format!("seed {seed}: edge {e:?} differs by {}", (x - y).norm()));
        }
    }
    Ok(())
}

/// Shifting any single phase angle by `2π` changes nothing on unit-weight
/// graphs.
pub fn gamma_periodicity(seed: u64) -> Check {
    let (g, s, mut rng) = instance(seed, 10, true);
    let l = rng.random_range(0..s.p());
    let mut gamma = s.gamma().to_vec();
    gamma[l] += 2.0 * std::f64::consts::PI;
    let shifted = AngleSchedule::new(gamma, s.beta().to_vec()).unwrap().with_convention(s.convention());
    let opts = EvalOptions::default();
    let a = expectation(&g, &s, &opts).unwrap().value;
    let b = expectation(&g, &shifted, &opts).unwrap().value;
    if (a - b).abs() > 1e-10 {
        return Err(format!("seed {seed}: shifting gamma[{l}] moved {a} to {b}"));
    }
    Ok(())
}

pub type Property = (&'static str, fn(u64) -> Check);

pub const PROPERTIES: [Property; 5] = [
    ("realness", realness),
    ("lightcone invariance", lightcone_invariance),
    ("relabeling invariance", relabeling_invariance),
    ("decomposition independence", decomposition_independence),
    ("gamma periodicity", gamma_periodicity),
];
