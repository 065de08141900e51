//! Graphs, hypergraphs and pseudo-Boolean polynomials.
//!
//! All three are immutable after construction. Edge lists are kept in a
//! canonical form (endpoints sorted, list sorted) so that every derived
//! quantity is reproducible byte for byte.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::error::{Error, Result};

/// Anything whose cost function is a weighted sum of parity terms
/// `w_S (1 - prod_{i in S} z_i) / 2`.
///
/// A graph edge is a term of arity two; a hyperedge can have any positive
/// arity.
pub trait CutInstance {
    fn num_vertices(&self) -> usize;
    fn num_terms(&self) -> usize;
    /// Vertex set (ascending) and weight of term `i`.
    fn term(&self, i: usize) -> (&[usize], f64);

    /// Cut value of an assignment given as a bit mask (bit `v` set means
    /// `z_v = -1`). Only meaningful for `num_vertices() <= 64`.
    fn cut_value(&self, mask: u64) -> f64 {
        (0..self.num_terms())
            .map(|i| {
                let (vs, w) = self.term(i);
                let odd = vs.iter().fold(0u32, |acc, &v| acc ^ ((mask >> v) as u32 & 1));
                w * odd as f64
            })
            .sum()
    }

    fn total_weight(&self) -> f64 {
        (0..self.num_terms()).map(|i| self.term(i).1).sum()
    }

    /// Adjacency lists of the primal graph, ascending.
    fn primal_adjacency(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.num_vertices()];
        for i in 0..self.num_terms() {
            let (vs, _) = self.term(i);
            for (a, &x) in vs.iter().enumerate() {
                for &y in &vs[a + 1..] {
                    sets[x].push(y);
                    sets[y].push(x);
                }
            }
        }
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        sets
    }
}

/// An undirected weighted edge with `ends[0] < ends[1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub ends: [usize; 2],
    pub weight: f64,
}

impl Edge {
    pub fn u(&self) -> usize {
        self.ends[0]
    }

    pub fn v(&self) -> usize {
        self.ends[1]
    }
}

/// A simple undirected graph with nonnegative edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples. Endpoints may be given in
    /// either order; self-loops, duplicates and negative or non-finite weights
    /// are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b, w) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { u: a, v: b, weight: w });
            }
            out.push(Edge { ends: [a.min(b), a.max(b)], weight: w });
        }
        out.sort_by_key(|e| e.ends);
        for pair in out.windows(2) {
            if pair[0].ends == pair[1].ends {
                return Err(Error::DuplicateEdge(pair[0].ends[0], pair[0].ends[1]));
            }
        }
        Ok(Graph { n, edges: out })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Graph::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Index of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = [u.min(v), u.max(v)];
        self.edges.binary_search_by(|e| e.ends.cmp(&key)).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Sorted adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u()].push(e.v());
            adj[e.v()].push(e.u());
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u()] += 1;
            d[e.v()] += 1;
        }
        d
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Parameters("permutation length mismatch".into()));
        }
        Graph::new(self.n, self.edges.iter().map(|e| (perm[e.u()], perm[e.v()], e.weight)))
    }

    /// The same graph without edge `{u, v}`.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let idx = self.edge_index(u, v).ok_or(Error::EdgeNotFound(u, v))?;
        let mut g = self.clone();
        g.edges.remove(idx);
        Ok(g)
    }

    /// Cut weight of the bipartition `(S, V \ S)` given by membership flags.
    pub fn cut_of(&self, side: &[bool]) -> f64 {
        self.edges
            .iter()
            .filter(|e| side[e.u()] != side[e.v()])
            .map(|e| e.weight)
            .sum()
    }

    /// Number of connected components (isolated vertices included).
    pub fn components(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components() == 1
    }

    /// Length of a shortest cycle, or `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if color[y] == u8::MAX {
                        color[y] = 1 - color[x];
                        queue.push_back(y);
                    } else if color[y] == color[x] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl CutInstance for Graph {
    fn num_vertices(&self) -> usize {
        self.n
    }

    fn num_terms(&self) -> usize {
        self.edges.len()
    }

    fn term(&self, i: usize) -> (&[usize], f64) {
        let e = &self.edges[i];
        (&e.ends, e.weight)
    }
}

/// A weighted hyperedge; `vertices` is sorted and nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    pub vertices: Vec<usize>,
    pub weight: f64,
}

/// A hypergraph with real (possibly negative) hyperedge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n: usize,
    hyperedges: Vec<Hyperedge>,
}

fn canonical_support(n: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Vec<usize>> {
    let mut vs: Vec<usize> = vertices.into_iter().collect();
    if vs.is_empty() {
        return Err(Error::EmptyHyperedge);
    }
    vs.sort_unstable();
    for pair in vs.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::RepeatedVertex(pair[0]));
        }
    }
    if let Some(&last) = vs.last() {
        if last >= n {
            return Err(Error::InvalidVertex { vertex: last, n });
        }
    }
    Ok(vs)
}

impl Hypergraph {
    /// Builds a hypergraph; hyperedges keep their input order.
    pub fn new<S>(n: usize, hyperedges: impl IntoIterator<Item = (S, f64)>) -> Result<Self>
    where
        S: IntoIterator<Item = usize>,
    {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (support, w) in hyperedges {
            let vs = canonical_support(n, support)?;
            if !w.is_finite() {
                return Err(Error::NonFinite("hyperedge weight"));
            }
            if !seen.insert(vs.clone()) {
                return Err(Error::DuplicateHyperedge(vs));
            }
            out.push(Hyperedge { vertices: vs, weight: w });
        }
        Ok(Hypergraph { n, hyperedges: out })
    }

    /// Every graph edge becomes an arity-2 hyperedge with the same weight.
    pub fn from_graph(g: &Graph) -> Hypergraph {
        Hypergraph {
            n: g.n(),
            hyperedges: g
                .edges()
                .iter()
                .map(|e| Hyperedge { vertices: e.ends.to_vec(), weight: e.weight })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn position(&self, support: &[usize]) -> Option<usize> {
        let mut key = support.to_vec();
        key.sort_unstable();
        self.hyperedges.iter().position(|h| h.vertices == key)
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Hypergraph> {
        Hypergraph::new(
            self.n,
            self.hyperedges
                .iter()
                .map(|h| (h.vertices.iter().map(|&v| perm[v]).collect::<Vec<_>>(), h.weight)),
        )
    }
}

impl CutInstance for Hypergraph {
    fn num_vertices(&self) -> usize {
        self.n
    }

    fn num_terms(&self) -> usize {
        self.hyperedges.len()
    }

    fn term(&self, i: usize) -> (&[usize], f64) {
        let h = &self.hyperedges[i];
        (&h.vertices, h.weight)
    }
}

/// One monomial `c_S prod_{i in S} z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub support: Vec<usize>,
    pub coeff: f64,
}

/// `C_B(z) = c0 + sum_S c_S prod_{i in S} z_i` over spins `z_i = +-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoBooleanPolynomial {
    n: usize,
    constant: f64,
    terms: Vec<Monomial>,
}

impl PseudoBooleanPolynomial {
    pub fn new<S>(n: usize, constant: f64, terms: impl IntoIterator<Item = (S, f64)>) -> Result<Self>
    where
        S: IntoIterator<Item = usize>,
    {
        if !constant.is_finite() {
            return Err(Error::NonFinite("polynomial constant"));
        }
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for (support, c) in terms {
            let vs = canonical_support(n, support)?;
            if !c.is_finite() {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
            if c == 0.0 {
                return Err(Error::ZeroCoefficient(vs));
            }
            if !seen.insert(vs.clone()) {
                return Err(Error::DuplicateHyperedge(vs));
            }
            out.push(Monomial { support: vs, coeff: c });
        }
        Ok(PseudoBooleanPolynomial { n, constant, terms: out })
    }

    /// The Max-Cut objective of `g` written as `sum_e w_e/2 - sum_e (w_e/2) z_u z_v`.
    /// Zero-weight edges are dropped.
    pub fn from_maxcut(g: &Graph) -> PseudoBooleanPolynomial {
        let constant = g.edges().iter().map(|e| e.weight / 2.0).sum();
        let terms = g
            .edges()
            .iter()
            .filter(|e| e.weight != 0.0)
            .map(|e| Monomial { support: e.ends.to_vec(), coeff: -e.weight / 2.0 })
            .collect();
        PseudoBooleanPolynomial { n: g.n(), constant, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    /// Evaluates `C_B` on spins encoded as a bit mask (bit set means `z = -1`).
    pub fn evaluate(&self, mask: u64) -> f64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|t| {
                    let odd = t.support.iter().fold(0u64, |acc, &v| acc ^ ((mask >> v) & 1));
                    if odd == 1 {
                        -t.coeff
                    } else {
                        t.coeff
                    }
                })
                .sum::<f64>()
    }
}

/// Multi-source BFS hop distances. Unreachable vertices are absent.
pub fn bfs_distances(g: &Graph, sources: &[usize]) -> Result<BTreeMap<usize, usize>> {
    let adj = g.adjacency();
    bfs_on_adjacency(&adj, sources)
}

pub(crate) fn bfs_on_adjacency(adj: &[Vec<usize>], sources: &[usize]) -> Result<BTreeMap<usize, usize>> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    let n = adj.len();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if s >= n {
            return Err(Error::InvalidVertex { vertex: s, n });
        }
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    Ok(dist
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d != usize::MAX)
        .collect())
}

/// Dense distance vector; `usize::MAX` marks unreachable vertices.
pub(crate) fn distance_vector(adj: &[Vec<usize>], sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Primal (Gaifman) graph: `{x, y}` is an edge iff some hyperedge holds both.
pub fn primal_graph(h: &Hypergraph) -> Graph {
    let adj = h.primal_adjacency();
    let mut edges = Vec::new();
    for (x, nbrs) in adj.iter().enumerate() {
        for &y in nbrs.iter().filter(|&&y| y > x) {
            edges.push(Edge { ends: [x, y], weight: 1.0 });
        }
    }
    Graph { n: h.n(), edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::unweighted(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(Graph::unweighted(2, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(Graph::unweighted(3, [(0, 1), (1, 0)]), Err(Error::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::unweighted(2, [(0, 2)]), Err(Error::InvalidVertex { .. })));
        assert!(matches!(Graph::new(2, [(0, 1, -1.0)]), Err(Error::InvalidWeight { .. })));
    }

    #[test]
    fn edges_are_canonical() {
        let g = Graph::unweighted(3, [(2, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges()[0].ends, [0, 1]);
        assert_eq!(g.edges()[1].ends, [1, 2]);
        assert_eq!(g.edge_index(2, 1), Some(1));
    }

    #[test]
    fn bfs_single_vertex() {
        let g = Graph::unweighted(1, []).unwrap();
        assert_eq!(bfs_distances(&g, &[0]).unwrap(), BTreeMap::from([(0, 0)]));
    }

    #[test]
    fn bfs_path_one_and_two_sources() {
        let g = path(3);
        assert_eq!(bfs_distances(&g, &[0]).unwrap(), BTreeMap::from([(0, 0), (1, 1), (2, 2)]));
        assert_eq!(bfs_distances(&g, &[0, 2]).unwrap(), BTreeMap::from([(0, 0), (1, 1), (2, 0)]));
    }

    #[test]
    fn bfs_errors_and_unreachable() {
        let g = Graph::unweighted(4, [(0, 1)]).unwrap();
        assert_eq!(bfs_distances(&g, &[]), Err(Error::EmptySources));
        assert!(matches!(bfs_distances(&g, &[7]), Err(Error::InvalidVertex { .. })));
        let d = bfs_distances(&g, &[0]).unwrap();
        assert!(!d.contains_key(&2) && !d.contains_key(&3));
    }

    #[test]
    fn primal_graph_examples() {
        let h = Hypergraph::new(3, [(vec![0, 1, 2], 1.0)]).unwrap();
        let g = primal_graph(&h);
        let ends: Vec<_> = g.edges().iter().map(|e| e.ends).collect();
        assert_eq!(ends, vec![[0, 1], [0, 2], [1, 2]]);

        let h = Hypergraph::new(4, [(vec![0, 1, 2], 1.0), (vec![2, 3], 1.0)]).unwrap();
        let ends: Vec<_> = primal_graph(&h).edges().iter().map(|e| e.ends).collect();
        assert_eq!(ends, vec![[0, 1], [0, 2], [1, 2], [2, 3]]);
    }

    #[test]
    fn primal_of_arity_two_is_identity() {
        let g = Graph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let back = primal_graph(&Hypergraph::from_graph(&g));
        assert_eq!(back, g);
    }

    #[test]
    fn hypergraph_validation() {
        assert_eq!(Hypergraph::new(3, [(vec![], 1.0)]), Err(Error::EmptyHyperedge));
        assert_eq!(Hypergraph::new(3, [(vec![1, 1], 1.0)]), Err(Error::RepeatedVertex(1)));
        assert!(matches!(
            Hypergraph::new(3, [(vec![0, 1], 1.0), (vec![1, 0], 2.0)]),
            Err(Error::DuplicateHyperedge(_))
        ));
    }

    #[test]
    fn polynomial_evaluation_and_maxcut_form() {
        let g = Graph::unweighted(3, [(0, 1), (1, 2)]).unwrap();
        let poly = PseudoBooleanPolynomial::from_maxcut(&g);
        for mask in 0..8u64 {
            assert_eq!(poly.evaluate(mask), g.cut_value(mask));
        }
        assert!(matches!(
            PseudoBooleanPolynomial::new(2, 0.0, [(vec![0], 0.0)]),
            Err(Error::ZeroCoefficient(_))
        ));
    }

    #[test]
    fn structural_queries() {
        let c5 = Graph::unweighted(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(c5.girth(), Some(5));
        assert!(!c5.is_bipartite());
        assert!(path(4).is_bipartite());
        assert_eq!(path(4).girth(), None);
        assert_eq!(Graph::unweighted(4, [(0, 1)]).unwrap().components(), 3);
    }
}
