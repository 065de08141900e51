//! Radius-`p` neighbourhoods around an observable edge or hyperedge.

use crate::error::{Error, Result};
use crate::graph::{distance_vector, CutInstance, Graph, Hypergraph};
use crate::treewidth;

/// A sub-instance on local ids `0..k`, together with the observable it was
/// cut out for.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalInstance<I> {
    pub sub: I,
    /// Local ids of the observable's vertices, ascending.
    pub anchor: Vec<usize>,
    /// Index of the observable term inside `sub`.
    pub anchor_term: usize,
    /// Local id to parent id; strictly increasing.
    pub to_parent: Vec<usize>,
}

impl<I: CutInstance> LocalInstance<I> {
    pub fn anchor_weight(&self) -> f64 {
        self.sub.term(self.anchor_term).1
    }

    /// Treats a whole instance as its own "local" instance around term `t`.
    pub fn whole(sub: I, anchor_term: usize) -> Self {
        let anchor = sub.term(anchor_term).0.to_vec();
        let to_parent = (0..sub.num_vertices()).collect();
        LocalInstance { sub, anchor, anchor_term, to_parent }
    }
}

/// Which edges of the radius-`p` ball are kept for a graph lightcone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LightconeRule {
    /// Both endpoints within distance `p`, at least one within `p - 1`.
    #[default]
    Strict,
    /// Every edge with both endpoints within distance `p` (induced ball).
    Induced,
}

fn local_ids(dist: &[usize], p: usize) -> (Vec<usize>, Vec<usize>) {
    let mut to_parent = Vec::new();
    let mut to_local = vec![usize::MAX; dist.len()];
    for (v, &d) in dist.iter().enumerate() {
        if d <= p {
            to_local[v] = to_parent.len();
            to_parent.push(v);
        }
    }
    (to_parent, to_local)
}

/// The `p`-local subgraph `G_p(e)` of edge `{u, v}`.
pub fn local_subgraph(g: &Graph, u: usize, v: usize, p: usize) -> Result<LocalInstance<Graph>> {
    local_subgraph_with(g, u, v, p, LightconeRule::Strict)
}

pub fn local_subgraph_with(
    g: &Graph,
    u: usize,
    v: usize,
    p: usize,
    rule: LightconeRule,
) -> Result<LocalInstance<Graph>> {
    if !g.has_edge(u, v) {
        return Err(Error::EdgeNotFound(u, v));
    }
    let dist = distance_vector(&g.adjacency(), &[u, v]);
    let (to_parent, to_local) = local_ids(&dist, p);
    let edges = g.edges().iter().filter_map(|e| {
        let (dx, dy) = (dist[e.u()], dist[e.v()]);
        let inside = dx <= p && dy <= p;
        let keep = match rule {
            LightconeRule::Strict => inside && dx.min(dy) < p,
            LightconeRule::Induced => inside,
        };
        // The anchor edge itself is always kept, also for p = 0.
        let is_anchor = e.ends == [u.min(v), u.max(v)];
        (keep || is_anchor).then(|| (to_local[e.u()], to_local[e.v()], e.weight))
    });
    let sub = Graph::new(to_parent.len(), edges)?;
    let anchor = vec![to_local[u].min(to_local[v]), to_local[u].max(to_local[v])];
    let anchor_term = sub.edge_index(anchor[0], anchor[1]).expect("anchor edge kept");
    Ok(LocalInstance { sub, anchor, anchor_term, to_parent })
}

/// The induced sub-hypergraph on all vertices within primal distance `p` of
/// hyperedge `support`.
pub fn local_subhypergraph(h: &Hypergraph, support: &[usize], p: usize) -> Result<LocalInstance<Hypergraph>> {
    let idx = h.position(support).ok_or_else(|| Error::HyperedgeNotFound(support.to_vec()))?;
    let anchor_parent = &h.hyperedges()[idx].vertices;
    let dist = distance_vector(&h.primal_adjacency(), anchor_parent);
    let (to_parent, to_local) = local_ids(&dist, p);
    let mut anchor_term = usize::MAX;
    let mut kept = Vec::new();
    for (i, e) in h.hyperedges().iter().enumerate() {
        if e.vertices.iter().all(|&x| dist[x] <= p) {
            if i == idx {
                anchor_term = kept.len();
            }
            kept.push((e.vertices.iter().map(|&x| to_local[x]).collect::<Vec<_>>(), e.weight));
        }
    }
    let sub = Hypergraph::new(to_parent.len(), kept)?;
    let anchor = sub.hyperedges()[anchor_term].vertices.clone();
    Ok(LocalInstance { sub, anchor, anchor_term, to_parent })
}

/// `max_e tw(G_p(e))` using exact decompositions.
pub fn p_local_treewidth(g: &Graph, p: usize) -> Result<usize> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let mut best = 0;
    for e in g.edges() {
        let local = local_subgraph(g, e.u(), e.v(), p)?;
        let td = treewidth::exact_decomposition(&local.sub)?;
        best = best.max(td.width());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ends(g: &Graph) -> Vec<[usize; 2]> {
        g.edges().iter().map(|e| e.ends).collect()
    }

    #[test]
    fn single_edge_is_its_own_lightcone() {
        let k2 = Graph::unweighted(2, [(0, 1)]).unwrap();
        for p in 0..4 {
            let l = local_subgraph(&k2, 0, 1, p).unwrap();
            assert_eq!(l.sub, k2);
            assert_eq!(l.anchor, vec![0, 1]);
        }
    }

    #[test]
    fn path_p1_hand_evaluated() {
        let g = Graph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let l = local_subgraph(&g, 1, 2, 1).unwrap();
        assert_eq!(l.to_parent, vec![0, 1, 2, 3]);
        assert_eq!(ends(&l.sub), vec![[0, 1], [1, 2], [2, 3]]);
        assert_eq!(l.anchor, vec![1, 2]);
    }

    #[test]
    fn strict_rule_drops_rim_edges() {
        // Square 0-1-2-3-0 around edge (0,1) at p = 1: (2,3) joins two
        // distance-1 vertices and is dropped by the strict rule only.
        let g = Graph::unweighted(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let strict = local_subgraph(&g, 0, 1, 1).unwrap();
        let induced = local_subgraph_with(&g, 0, 1, 1, LightconeRule::Induced).unwrap();
        assert_eq!(strict.sub.m(), 3);
        assert_eq!(induced.sub.m(), 4);
    }

    #[test]
    fn missing_edge_is_an_error() {
        let g = Graph::unweighted(3, [(0, 1)]).unwrap();
        assert_eq!(local_subgraph(&g, 1, 2, 1), Err(Error::EdgeNotFound(1, 2)));
    }

    #[test]
    fn subhypergraph_examples() {
        let h = Hypergraph::new(3, [(vec![0, 1, 2], 1.0)]).unwrap();
        let l = local_subhypergraph(&h, &[0, 1, 2], 0).unwrap();
        assert_eq!(l.sub, h);

        let h = Hypergraph::new(4, [(vec![0, 1], 1.0), (vec![1, 2], 1.0), (vec![2, 3], 1.0)]).unwrap();
        let l = local_subhypergraph(&h, &[0, 1], 1).unwrap();
        assert_eq!(l.to_parent, vec![0, 1, 2]);
        let kept: Vec<_> = l.sub.hyperedges().iter().map(|e| e.vertices.clone()).collect();
        assert_eq!(kept, vec![vec![0, 1], vec![1, 2]]);
        assert!(local_subhypergraph(&h, &[0, 3], 1).is_err());
    }

    #[test]
    fn arity_two_subhypergraph_matches_induced_rule() {
        let g = Graph::unweighted(5, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]).unwrap();
        let h = Hypergraph::from_graph(&g);
        for p in 0..3 {
            let a = local_subhypergraph(&h, &[0, 1], p).unwrap();
            let b = local_subgraph_with(&g, 0, 1, p, LightconeRule::Induced).unwrap();
            assert_eq!(a.to_parent, b.to_parent);
            assert_eq!(a.sub, Hypergraph::from_graph(&b.sub));
        }
    }

    #[test]
    fn empty_graph_has_no_local_treewidth() {
        let g = Graph::unweighted(3, []).unwrap();
        assert_eq!(p_local_treewidth(&g, 1), Err(Error::EmptyEdgeSet));
    }
}
