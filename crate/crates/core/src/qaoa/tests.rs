use std::f64::consts::PI;

use super::*;
use crate::oracle::{oracle_buco, oracle_expectation, oracle_term};
use crate::treewidth::root_at;

fn sched(g: &[f64], b: &[f64]) -> AngleSchedule {
    AngleSchedule::new(g.to_vec(), b.to_vec()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn unit(&mut self) -> f64 {
        self.next() as f64 / (1u64 << 31) as f64
    }

    fn angle(&mut self) -> f64 {
        PI * (2.0 * self.unit() - 1.0)
    }
}

fn random_connected(rng: &mut Lcg, n: usize, extra: usize) -> Graph {
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        edges.insert(((rng.next() as usize) % v, v));
    }
    for _ in 0..extra {
        let (a, b) = (rng.next() as usize % n, rng.next() as usize % n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::unweighted(n, edges).unwrap()
}

#[test]
fn schedule_validation_and_gamma_vector() {
    assert!(AngleSchedule::new(vec![], vec![]).is_err());
    assert!(AngleSchedule::new(vec![0.1], vec![0.1, 0.2]).is_err());
    assert!(AngleSchedule::new(vec![f64::NAN], vec![0.1]).is_err());
    let s = sched(&[0.1, 0.2], &[0.3, 0.4]);
    assert_eq!(s.gamma_vector(), vec![0.1, 0.2, 0.0, -0.2, -0.1]);
    assert_eq!((layer_bit(2, 1), layer_bit(2, 2), layer_bit(2, 0), layer_bit(2, -2), layer_bit(2, -1)), (0, 1, 2, 3, 4));
}

#[test]
fn layer_assignment_spins() {
    let a = LayerAssignment::from_spins(&[1, -1, 1]).unwrap();
    assert_eq!(a.word, 1 << layer_bit(1, 0));
    assert_eq!((a.spin(-1), a.spin(0), a.spin(1)), (1, -1, 1));
    assert!(LayerAssignment::from_spins(&[1, 1]).is_err());
}

#[test]
fn mixer_kernel_examples() {
    let zero = sched(&[0.7, 0.1], &[0.0, 0.0]);
    for word in [0u32, 0b11111] {
        assert!((mixer_kernel(LayerAssignment { p: 2, word }, &zero) - 0.5).norm() < 1e-15);
    }
    assert!(mixer_kernel(LayerAssignment { p: 2, word: 0b00001 }, &zero).norm() < 1e-15);
    let quarter = sched(&[0.0], &[PI / 4.0]);
    assert!((mixer_kernel(LayerAssignment { p: 1, word: 0 }, &quarter) - 0.25).norm() < 1e-15);
}

#[test]
fn phase_weight_examples() {
    let s = sched(&[0.0, 0.0], &[0.3, 0.2]);
    assert!((phase_weight(&[1.0, 2.0, 3.0, 4.0, 5.0], &s) - 1.0).norm() < 1e-15);
    let s = sched(&[0.4, 1.1], &[0.3, 0.2]);
    assert!((phase_weight(&[1.0, 2.0, 7.0, 2.0, 1.0], &s) - 1.0).norm() < 1e-15);
    let s = sched(&[PI / 2.0], &[0.1]);
    // Layers listed j = -1, 0, 1.
    assert!((phase_weight(&[0.0, 5.0, 1.0], &s) - Complex64::i()).norm() < 1e-15);
}

fn single_edge(g: &Graph, p: usize, s: &AngleSchedule, reduction: Reduction) -> Complex64 {
    let e = g.edges()[0];
    let local = local_subgraph(g, e.u(), e.v(), p).unwrap();
    let td = treewidth::exact_decomposition(&local.sub).unwrap();
    let rd = root_at(&td, &local.anchor, &local.sub).unwrap();
    contribution(&local, &rd, s, reduction).unwrap()
}

#[test]
fn single_edge_trivial_limits() {
    let k2 = Graph::unweighted(2, [(0, 1)]).unwrap();
    for p in 1..4 {
        for reduction in [Reduction::None, Reduction::Lightcone] {
            let g0 = AngleSchedule::new(vec![0.0; p], (0..p).map(|i| 0.3 + i as f64).collect()).unwrap();
            assert!((single_edge(&k2, p, &g0, reduction) - 0.5).norm() < 1e-12);
            let b0 = AngleSchedule::new((0..p).map(|i| 0.7 - i as f64).collect(), vec![0.0; p]).unwrap();
            assert!((single_edge(&k2, p, &b0, reduction) - 0.5).norm() < 1e-12);
        }
    }
    let solved = sched(&[PI / 2.0], &[PI / 8.0]);
    assert!((single_edge(&k2, 1, &solved, Reduction::Lightcone) - 1.0).norm() < 1e-12);
}

#[test]
fn triangle_edges_match_oracle() {
    let tri = Graph::unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let s = sched(&[0.4], &[0.3]);
    for (t, e) in tri.edges().iter().enumerate() {
        let local = local_subgraph(&tri, e.u(), e.v(), 1).unwrap();
        let td = treewidth::exact_decomposition(&local.sub).unwrap();
        let rd = root_at(&td, &local.anchor, &local.sub).unwrap();
        let want = oracle_term(&tri, t, &s).unwrap();
        for r in [Reduction::None, Reduction::Lightcone] {
            let got = contribution(&local, &rd, &s, r).unwrap();
            assert!(close(got.re, want, 1e-10) && got.im.abs() < 1e-12, "{got} vs {want}");
        }
    }
}

#[test]
fn dense_and_reduced_agree_with_oracle_on_random_graphs() {
    let mut rng = Lcg(11);
    for case in 0..40 {
        let n = 3 + case % 6;
        let g = random_connected(&mut rng, n, n / 2);
        let p = 1 + case % 2;
        let s = AngleSchedule::new((0..p).map(|_| rng.angle()).collect(), (0..p).map(|_| rng.angle()).collect()).unwrap();
        let want = oracle_expectation(&g, 0.0, &s).unwrap();
        for reduction in [Reduction::None, Reduction::Lightcone] {
            let opts = EvalOptions { reduction, ..Default::default() };
            let got = expectation(&g, &s, &opts).unwrap();
            assert!(close(got.value, want, 1e-9), "case {case} {reduction:?}: {} vs {want}", got.value);
            assert!(got.imag_residual < 1e-9);
        }
    }
}

#[test]
fn whole_graph_instance_agrees_with_lightcone_instance() {
    // Evaluating on the full graph (extra vertices beyond distance p) must
    // give the same contribution as the strict lightcone.
    let g = crate::generators::gen_gp(6, 1).unwrap();
    let s = sched(&[0.5, -0.3], &[0.2, 0.9]);
    let e = g.edges()[3];
    let whole = LocalInstance::whole(g.clone(), 3);
    let td = treewidth::exact_decomposition(&g).unwrap();
    let rd = root_at(&td, &whole.anchor, &g).unwrap();
    let a = contribution(&whole, &rd, &s, Reduction::Lightcone).unwrap();
    let local = local_subgraph(&g, e.u(), e.v(), 2).unwrap();
    let (b, _) = evaluate_local(&local, &s, &EvalOptions::default()).unwrap();
    assert!((a - b).norm() < 1e-12);
    assert!(close(a.re, oracle_term(&g, 3, &s).unwrap(), 1e-10));
}

#[test]
fn anchor_outside_root_is_rejected() {
    let g = Graph::unweighted(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let local = LocalInstance::whole(g.clone(), 0);
    let td = treewidth::TreeDecomposition { bags: vec![vec![0, 1], vec![1, 2], vec![2, 3]], tree_edges: vec![(0, 1), (1, 2)] };
    let mut rd = root_at(&td, &[2, 3], &g).unwrap();
    rd.root = 2;
    assert!(matches!(edge_contribution(&local, &rd, &sched(&[0.1], &[0.1])), Err(Error::AnchorNotInRoot(_))));
}

#[test]
fn message_layout_without_reduction_is_concatenated_words() {
    let g = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
    let local = LocalInstance::whole(g.clone(), 0);
    let td = treewidth::TreeDecomposition { bags: vec![vec![0, 1], vec![1, 2]], tree_edges: vec![(0, 1)] };
    let rd = root_at(&td, &[0, 1], &g).unwrap();
    let s = sched(&[0.3], &[0.8]);
    let tables = message_tables(&local, &rd, &s, Reduction::None).unwrap();
    let leaf = &tables[0];
    assert_eq!((leaf.bag, leaf.separator.clone(), leaf.radices.clone()), (1, vec![1], vec![8]));
    // g(leaf, z_1) = Σ_{z_2} f(z_2) exp(i Σ_j Γ_j C_12(z^[j])).
    for z1 in 0..8u32 {
        let mut want = Complex64::new(0.0, 0.0);
        for z2 in 0..8u32 {
            let x = z1 ^ z2;
            let cuts: Vec<f64> = (-1..=1).map(|j| ((x >> layer_bit(1, j)) & 1) as f64).collect();
            want += kernel_word(z2, &s) * phase_weight(&cuts, &s);
        }
        assert!((leaf.values[z1 as usize] - want).norm() < 1e-14);
    }
}

#[test]
fn decomposition_choice_does_not_matter() {
    let mut rng = Lcg(5);
    for _ in 0..10 {
        let g = random_connected(&mut rng, 9, 6);
        let s = sched(&[rng.angle(), rng.angle()], &[rng.angle(), rng.angle()]);
        let e = g.edges()[0];
        let local = local_subgraph(&g, e.u(), e.v(), 2).unwrap();
        let a = evaluate_local(&local, &s, &EvalOptions { decomposer: Decomposer::Exact, ..Default::default() }).unwrap().0;
        let b = evaluate_local(&local, &s, &EvalOptions { decomposer: Decomposer::Heuristic, ..Default::default() }).unwrap().0;
        assert!((a - b).norm() < 1e-10);
        // A single bag holding the whole lightcone is a valid decomposition too.
        let s1 = sched(&[s.gamma()[0]], &[s.beta()[0]]);
        let local = local_subgraph(&g, e.u(), e.v(), 1).unwrap();
        let a = evaluate_local(&local, &s1, &EvalOptions::default()).unwrap().0;
        let triv = treewidth::TreeDecomposition::trivial(local.sub.n());
        let rd = root_at(&triv, &local.anchor, &local.sub).unwrap();
        let c = contribution(&local, &rd, &s1, Reduction::Lightcone).unwrap();
        assert!((a - c).norm() < 1e-10);
    }
}

#[test]
fn buco_encoding_examples() {
    let g = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
    let (h, shift) = buco_encode(&PseudoBooleanPolynomial::from_maxcut(&g));
    assert_eq!(h, Hypergraph::from_graph(&g));
    assert!(shift.abs() < 1e-15);

    let (h, shift) = buco_encode(&PseudoBooleanPolynomial::new(3, 2.5, Vec::<(Vec<usize>, f64)>::new()).unwrap());
    assert!(h.hyperedges().is_empty());
    assert_eq!(shift, 2.5);

    let poly = PseudoBooleanPolynomial::new(4, 0.0, [(vec![1, 2, 3], -0.5)]).unwrap();
    let (h, shift) = buco_encode(&poly);
    assert_eq!(h.hyperedges()[0].vertices, vec![1, 2, 3]);
    assert_eq!(h.hyperedges()[0].weight, 1.0);
    assert_eq!(shift, -0.5);
    for mask in 0..16 {
        assert!(close(poly.evaluate(mask), shift + h.cut_value(mask), 1e-12));
    }
}

#[test]
fn single_hyperedge_at_zero_gamma() {
    let h = Hypergraph::new(3, [(vec![0, 1, 2], 1.0)]).unwrap();
    let got = hypergraph_expectation(&h, &sched(&[0.0, 0.0], &[0.4, 0.1]), &EvalOptions::default()).unwrap();
    assert!(close(got.value, 0.5, 1e-12));
}

#[test]
fn arity_two_hypergraph_matches_graph() {
    let g = crate::generators::gen_gp(5, 2).unwrap();
    let s = sched(&[0.3, 0.6], &[0.5, 0.2]);
    let a = expectation(&g, &s, &EvalOptions::default()).unwrap();
    let b = hypergraph_expectation(&Hypergraph::from_graph(&g), &s, &EvalOptions::default()).unwrap();
    // The graph lightcone drops rim edges that the induced hypergraph keeps;
    // both are exact, so the totals agree.
    assert!(close(a.value, b.value, 1e-10), "{} vs {}", a.value, b.value);
}

#[test]
fn random_hypergraphs_match_oracle() {
    let mut rng = Lcg(3);
    for case in 0..12 {
        let n = 5;
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::new();
        for _ in 0..6 {
            let arity = 1 + rng.next() as usize % 3;
            let mut vs: Vec<usize> = (0..n).collect();
            for i in 0..arity {
                let j = i + rng.next() as usize % (n - i);
                vs.swap(i, j);
            }
            let mut vs = vs[..arity].to_vec();
            vs.sort_unstable();
            if seen.insert(vs.clone()) {
                terms.push((vs, 2.0 * rng.unit() - 1.0));
            }
        }
        let h = Hypergraph::new(n, terms).unwrap();
        let p = 1 + case % 2;
        let s = AngleSchedule::new((0..p).map(|_| rng.angle()).collect(), (0..p).map(|_| rng.angle()).collect()).unwrap();
        let want = oracle_expectation(&h, 0.0, &s).unwrap();
        for reduction in [Reduction::None, Reduction::Lightcone] {
            let got = hypergraph_expectation(&h, &s, &EvalOptions { reduction, ..Default::default() }).unwrap();
            assert!(close(got.value, want, 1e-10), "{} vs {want}", got.value);
        }
    }
}

#[test]
fn buco_matches_graph_and_oracle() {
    let g = Graph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
    let s = sched(&[0.9, -0.4], &[0.3, 0.7]);
    let poly = PseudoBooleanPolynomial::from_maxcut(&g);
    let a = expectation(&g, &s, &EvalOptions::default()).unwrap().value;
    let b = buco_expectation(&poly, &s, &EvalOptions::default()).unwrap().value;
    assert!(close(a, b, 1e-12));

    let cubic = PseudoBooleanPolynomial::new(6, 0.25, [(vec![0, 1, 2], 0.7), (vec![2, 3], -0.4), (vec![3, 4, 5], 0.9), (vec![1], 0.2), (vec![0, 5], -0.6)])
        .unwrap();
    let s1 = sched(&[0.8], &[-0.45]);
    let got = buco_expectation(&cubic, &s1, &EvalOptions::default()).unwrap();
    assert!(close(got.value, oracle_buco(&cubic, &s1).unwrap(), 1e-10));

    let flat = buco_expectation(&cubic, &sched(&[0.8], &[0.0]), &EvalOptions::default()).unwrap();
    let (h, shift) = buco_encode(&cubic);
    assert!(close(flat.value, shift + h.total_weight() / 2.0, 1e-12));
}

#[test]
fn ising_convention_doubles_gamma() {
    let g = Graph::unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let ising = sched(&[0.3], &[0.4]).with_convention(PhaseConvention::Ising);
    let doubled = sched(&[0.6], &[0.4]);
    let a = expectation(&g, &ising, &EvalOptions::default()).unwrap().value;
    let b = expectation(&g, &doubled, &EvalOptions::default()).unwrap().value;
    assert!(close(a, b, 1e-12));
    assert!(close(a, oracle_expectation(&g, 0.0, &ising).unwrap(), 1e-10));
}
