//! Tree decompositions of small instances: exact construction by
//! branch and bound, a min-fill fallback, validation, and rooting.
//!
//! Both constructions go through an elimination ordering. Eliminating `v`
//! creates the bag `{v} ∪ N(v)` in the current elimination graph; the bag's
//! parent is the bag of the earliest-eliminated vertex among those
//! neighbours. Bags contained in a neighbouring bag are then contracted away.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::CutInstance;

/// Default vertex cap for [`exact_decomposition`].
pub const EXACT_CAP: usize = 64;

/// Bags (sorted vertex lists) and the tree connecting them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// The one-bag decomposition holding every vertex.
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition { bags: vec![(0..n).collect()], tree_edges: Vec::new() }
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// PACE-style dump with 1-based bag and vertex ids.
    pub fn to_pace(&self, n: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "s td {} {} {}", self.bags.len(), self.width() + 1, n);
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "b {}", i + 1);
            for v in bag {
                let _ = write!(out, " {}", v + 1);
            }
            out.push('\n');
        }
        for &(a, b) in &self.tree_edges {
            let _ = writeln!(out, "{} {}", a + 1, b + 1);
        }
        out
    }
}

/// The first property a candidate decomposition fails, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoBags,
    VertexOutOfRange { bag: usize, vertex: usize },
    BagOutOfRange { edge: (usize, usize) },
    NotATree { bags: usize, edges: usize },
    UncoveredVertex(usize),
    UncoveredEdge(Vec<usize>),
    /// The bags holding `vertex` are disconnected; `bags` are two of them
    /// in different components.
    RunningIntersection { vertex: usize, bags: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoBags => write!(f, "decomposition has no bags"),
            Violation::VertexOutOfRange { bag, vertex } => write!(f, "bag {bag} holds unknown vertex {vertex}"),
            Violation::BagOutOfRange { edge } => write!(f, "tree edge {edge:?} names a missing bag"),
            Violation::NotATree { bags, edges } => write!(f, "{edges} tree edges on {bags} bags do not form a tree"),
            Violation::UncoveredVertex(v) => write!(f, "vertex {v} is in no bag"),
            Violation::UncoveredEdge(e) => write!(f, "edge {e:?} is in no bag"),
            Violation::RunningIntersection { vertex, bags } => {
                write!(f, "bags {} and {} hold vertex {vertex} but are not connected through it", bags.0, bags.1)
            }
        }
    }
}

fn tree_adjacency(td: &TreeDecomposition) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); td.bags.len()];
    for &(a, b) in &td.tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

/// Checks tree-ness, covering, (hyper)edge coverage and running intersection.
pub fn validate<I: CutInstance + ?Sized>(td: &TreeDecomposition, inst: &I) -> std::result::Result<(), Violation> {
    let n = inst.num_vertices();
    let nb = td.bags.len();
    if nb == 0 {
        return Err(Violation::NoBags);
    }
    for (i, bag) in td.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|&&v| v >= n) {
            return Err(Violation::VertexOutOfRange { bag: i, vertex: v });
        }
    }
    if let Some(&edge) = td.tree_edges.iter().find(|&&(a, b)| a >= nb || b >= nb) {
        return Err(Violation::BagOutOfRange { edge });
    }
    let adj = tree_adjacency(td);
    let not_tree = Violation::NotATree { bags: nb, edges: td.tree_edges.len() };
    if td.tree_edges.len() + 1 != nb {
        return Err(not_tree);
    }
    let mut seen = vec![false; nb];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut reached = 1;
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                reached += 1;
                queue.push_back(b);
            }
        }
    }
    if reached != nb {
        return Err(not_tree);
    }

    let sets: Vec<BTreeSet<usize>> = td.bags.iter().map(|b| b.iter().copied().collect()).collect();
    let mut holders = vec![Vec::new(); n];
    for (i, bag) in sets.iter().enumerate() {
        for &v in bag {
            holders[v].push(i);
        }
    }
    if let Some(v) = holders.iter().position(Vec::is_empty) {
        return Err(Violation::UncoveredVertex(v));
    }
    for t in 0..inst.num_terms() {
        let (vs, _) = inst.term(t);
        if !sets.iter().any(|bag| vs.iter().all(|v| bag.contains(v))) {
            return Err(Violation::UncoveredEdge(vs.to_vec()));
        }
    }
    for (v, hs) in holders.iter().enumerate() {
        let mut seen = vec![false; nb];
        seen[hs[0]] = true;
        let mut queue = VecDeque::from([hs[0]]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !seen[b] && sets[b].contains(&v) {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        if let Some(&other) = hs.iter().find(|&&b| !seen[b]) {
            return Err(Violation::RunningIntersection { vertex: v, bags: (hs[0], other) });
        }
    }
    Ok(())
}

/// Builds the decomposition induced by an elimination ordering of `adj`.
pub fn decomposition_from_ordering(adj: &[Vec<usize>], order: &[usize]) -> TreeDecomposition {
    let n = adj.len();
    if n == 0 {
        return TreeDecomposition::trivial(0);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut nbrs: Vec<BTreeSet<usize>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    for (i, &v) in order.iter().enumerate() {
        let higher: Vec<usize> = nbrs[v].iter().copied().collect();
        for &a in &higher {
            nbrs[a].remove(&v);
            for &b in &higher {
                if a != b {
                    nbrs[a].insert(b);
                }
            }
        }
        parent[i] = higher.iter().map(|&u| pos[u]).min();
        let mut bag = higher;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // Disconnected inputs give a forest; chain the roots so the result is a tree.
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    for pair in roots.windows(2) {
        parent[pair[0]] = Some(pair[1]);
    }
    let edges = (0..n).filter_map(|i| parent[i].map(|p| (i, p))).collect();
    contract_subsumed(bags, edges)
}

/// Repeatedly merges a bag into a tree neighbour that contains it.
fn contract_subsumed(mut bags: Vec<Vec<usize>>, mut edges: Vec<(usize, usize)>) -> TreeDecomposition {
    let mut alive = vec![true; bags.len()];
    loop {
        let subsumed = edges.iter().enumerate().find_map(|(k, &(a, b))| {
            let sub = |x: &[usize], y: &[usize]| x.iter().all(|v| y.binary_search(v).is_ok());
            if sub(&bags[a], &bags[b]) {
                Some((k, a, b))
            } else if sub(&bags[b], &bags[a]) {
                Some((k, b, a))
            } else {
                None
            }
        });
        let Some((k, gone, keep)) = subsumed else { break };
        edges.swap_remove(k);
        for e in &mut edges {
            if e.0 == gone {
                e.0 = keep;
            }
            if e.1 == gone {
                e.1 = keep;
            }
        }
        alive[gone] = false;
    }
    let mut remap = vec![usize::MAX; bags.len()];
    let mut kept = Vec::new();
    for (i, bag) in bags.iter_mut().enumerate() {
        if alive[i] {
            remap[i] = kept.len();
            kept.push(std::mem::take(bag));
        }
    }
    let mut tree_edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (remap[a], remap[b]);
            (a.min(b), a.max(b))
        })
        .collect();
    tree_edges.sort_unstable();
    TreeDecomposition { bags: kept, tree_edges }
}

/// Maximum degree at elimination time along `order`.
pub fn ordering_width(adj: &[Vec<usize>], order: &[usize]) -> usize {
    let mut nbrs: Vec<BTreeSet<usize>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
    let mut width = 0;
    for &v in order {
        let higher: Vec<usize> = nbrs[v].iter().copied().collect();
        width = width.max(higher.len());
        for &a in &higher {
            nbrs[a].remove(&v);
            nbrs[a].extend(higher.iter().copied().filter(|&b| b != a));
        }
    }
    width
}

/// Min-fill elimination ordering; ties go to lower degree, then lower id.
pub fn min_fill_ordering(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut nbrs: Vec<BTreeSet<usize>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let fill = |v: usize| {
            let ns: Vec<usize> = nbrs[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in ns.iter().enumerate() {
                missing += ns[i + 1..].iter().filter(|b| !nbrs[a].contains(b)).count();
            }
            missing
        };
        let v = (0..n)
            .filter(|&v| !done[v])
            .min_by_key(|&v| (fill(v), nbrs[v].len(), v))
            .expect("a vertex remains");
        let higher: Vec<usize> = nbrs[v].iter().copied().collect();
        for &a in &higher {
            nbrs[a].remove(&v);
            nbrs[a].extend(higher.iter().copied().filter(|&b| b != a));
        }
        nbrs[v].clear();
        done[v] = true;
        order.push(v);
    }
    order
}

/// Min-fill decomposition of the primal graph; no optimality claim.
pub fn heuristic_decomposition<I: CutInstance + ?Sized>(inst: &I) -> TreeDecomposition {
    let adj = inst.primal_adjacency();
    decomposition_from_ordering(&adj, &min_fill_ordering(&adj))
}

/// Minimum-width decomposition of the primal graph, capped at [`EXACT_CAP`] vertices.
pub fn exact_decomposition<I: CutInstance + ?Sized>(inst: &I) -> Result<TreeDecomposition> {
    exact_decomposition_capped(inst, EXACT_CAP)
}

pub fn exact_decomposition_capped<I: CutInstance + ?Sized>(inst: &I, cap: usize) -> Result<TreeDecomposition> {
    let n = inst.num_vertices();
    let cap = cap.min(64);
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let adj = inst.primal_adjacency();
    let order = exact_ordering(&adj);
    Ok(decomposition_from_ordering(&adj, &order))
}

/// Treewidth of the primal graph (exact).
pub fn treewidth<I: CutInstance + ?Sized>(inst: &I) -> Result<usize> {
    Ok(exact_decomposition(inst)?.width())
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

/// Degeneracy: a lower bound on treewidth.
fn degeneracy(adj: &[u64]) -> usize {
    let mut left: u64 = if adj.len() == 64 { u64::MAX } else { (1u64 << adj.len()) - 1 };
    let mut best = 0;
    while left != 0 {
        let v = bits(left).min_by_key(|&v| (adj[v] & left).count_ones()).expect("nonempty");
        best = best.max((adj[v] & left).count_ones() as usize);
        left &= !(1u64 << v);
    }
    best
}

struct Search {
    k: usize,
    failed: HashSet<u64>,
}

impl Search {
    /// Can the graph `adj` restricted to `left` be eliminated with every
    /// elimination degree at most `k`? Pushes the ordering on success.
    fn feasible(&mut self, adj: &[u64], left: u64, order: &mut Vec<usize>) -> bool {
        if left.count_ones() as usize <= self.k + 1 {
            order.extend(bits(left));
            return true;
        }
        if self.failed.contains(&left) {
            return false;
        }
        // Almost-simplicial vertices of degree <= k are safe to eliminate.
        for v in bits(left) {
            let nv = adj[v];
            if nv.count_ones() as usize > self.k {
                continue;
            }
            let missing = |u: usize| nv & !adj[u] & !(1u64 << u);
            let non_clique: Vec<usize> = bits(nv).filter(|&u| missing(u) != 0).collect();
            let almost = non_clique.is_empty()
                || bits(nv).any(|x| bits(nv & !(1u64 << x)).all(|u| missing(u) & !(1u64 << x) == 0));
            if almost {
                let next = eliminate(adj, v);
                order.push(v);
                if self.feasible(&next, left & !(1u64 << v), order) {
                    return true;
                }
                order.pop();
                self.failed.insert(left);
                return false;
            }
        }
        for v in bits(left) {
            if adj[v].count_ones() as usize > self.k {
                continue;
            }
            let next = eliminate(adj, v);
            order.push(v);
            if self.feasible(&next, left & !(1u64 << v), order) {
                return true;
            }
            order.pop();
        }
        self.failed.insert(left);
        false
    }
}

fn eliminate(adj: &[u64], v: usize) -> Vec<u64> {
    let mut next = adj.to_vec();
    let nv = adj[v];
    for u in bits(nv) {
        next[u] = (next[u] | nv) & !(1u64 << u) & !(1u64 << v);
    }
    next[v] = 0;
    next
}

/// An optimal elimination ordering by iterative deepening on the width.
fn exact_ordering(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let masks: Vec<u64> = adj.iter().map(|a| a.iter().fold(0u64, |m, &u| m | (1u64 << u))).collect();
    let upper_order = min_fill_ordering(adj);
    let upper = ordering_width(adj, &upper_order);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for k in degeneracy(&masks)..upper {
        let mut search = Search { k, failed: HashSet::new() };
        let mut order = Vec::with_capacity(n);
        if search.feasible(&masks, all, &mut order) {
            return order;
        }
    }
    upper_order
}

/// A decomposition rooted at a bag containing the observable, with the
/// per-bag bookkeeping the message-passing evaluation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedDecomposition {
    pub base: TreeDecomposition,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Bags in BFS order from the root; children come after parents.
    pub order: Vec<usize>,
    /// `S_a = X_a ∩ X_pa(a)`, sorted; empty at the root.
    pub separators: Vec<Vec<usize>>,
    /// `V_a = X_a \ S_a`, sorted.
    pub introduced_vertices: Vec<Vec<usize>>,
    /// Indices of the terms whose topmost covering bag is `a`.
    pub introduced_terms: Vec<Vec<usize>>,
}

impl RootedDecomposition {
    pub fn width(&self) -> usize {
        self.base.width()
    }
}

/// Roots `td` at the lowest-index bag containing `anchor`.
pub fn root_at<I: CutInstance + ?Sized>(td: &TreeDecomposition, anchor: &[usize], inst: &I) -> Result<RootedDecomposition> {
    validate(td, inst).map_err(Error::InvalidDecomposition)?;
    let contains = |bag: &[usize], vs: &[usize]| vs.iter().all(|v| bag.binary_search(v).is_ok());
    let bags: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let root = bags
        .iter()
        .position(|b| contains(b, anchor))
        .ok_or_else(|| Error::AnchorNotCovered(anchor.to_vec()))?;

    let nb = bags.len();
    let adj = tree_adjacency(td);
    let mut parent = vec![None; nb];
    let mut depth = vec![usize::MAX; nb];
    let mut children = vec![Vec::new(); nb];
    let mut order = vec![root];
    depth[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let a = order[head];
        head += 1;
        for &b in &adj[a] {
            if depth[b] == usize::MAX {
                depth[b] = depth[a] + 1;
                parent[b] = Some(a);
                children[a].push(b);
                order.push(b);
            }
        }
    }

    let mut separators = vec![Vec::new(); nb];
    let mut introduced_vertices = vec![Vec::new(); nb];
    for a in 0..nb {
        let (sep, intro): (Vec<usize>, Vec<usize>) = match parent[a] {
            Some(p) => bags[a].iter().partition(|v| bags[p].binary_search(v).is_ok()),
            None => (Vec::new(), bags[a].clone()),
        };
        separators[a] = sep;
        introduced_vertices[a] = intro;
    }
    let mut introduced_terms = vec![Vec::new(); nb];
    for t in 0..inst.num_terms() {
        let (vs, _) = inst.term(t);
        let top = (0..nb)
            .filter(|&a| contains(&bags[a], vs))
            .min_by_key(|&a| depth[a])
            .expect("validated decomposition covers every term");
        introduced_terms[top].push(t);
    }
    let base = TreeDecomposition { bags, tree_edges: td.tree_edges.clone() };
    Ok(RootedDecomposition { base, root, parent, children, order, separators, introduced_vertices, introduced_terms })
}
