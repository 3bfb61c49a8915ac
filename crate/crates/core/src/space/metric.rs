use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use super::{injectivity_radius, LocalSpace, MembershipOptions, SpacePoint};
use crate::rng::{seeded, stream};
use crate::scalar::Scalar;

/// Graph on sampled points with an edge `x -- x.g` whenever `g = f_x(y)` lies in
/// `B(step)`; weights are `d_G(1, g)`. Path lengths bound `d_M` from above.
pub struct ChainGraph<T: Scalar> {
    pub nodes: Vec<SpacePoint<T>>,
    pub step: T,
    graph: UnGraph<(), f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainResult {
    /// `None` when `q` is not reachable in the sampled graph.
    pub distance: Option<f64>,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub step: f64,
}

/// Half the smallest injectivity radius over a few sampled points.
pub fn default_step<T: Scalar, M: LocalSpace<T> + ?Sized>(m: &M, seed: u64) -> T {
    let mut rng = seeded(seed);
    let opts = MembershipOptions::default();
    (0..16)
        .map(|i| {
            let p = m.sample_point(&mut rng);
            let rmax = m.chart_radius(&p).max(m.sampling_scale()) * T::lit(2.0);
            injectivity_radius(m, &p, rmax, rmax * T::lit(1e-3), &opts, seed.wrapping_add(i))
        })
        .fold(T::infinity(), T::min)
        / T::lit(2.0)
}

impl<T: Scalar> ChainGraph<T> {
    /// Nodes are `anchors` (indices `0..anchors.len()`) followed by `n_nodes` samples.
    pub fn build<M: LocalSpace<T> + ?Sized>(m: &M, anchors: &[SpacePoint<T>], n_nodes: usize, step: Option<T>, seed: u64) -> Self {
        let step = step.unwrap_or_else(|| default_step(m, seed));
        let mut rng = stream(seed, 1);
        let mut nodes = anchors.to_vec();
        nodes.extend((0..n_nodes).map(|_| m.sample_point(&mut rng)));
        let group = m.group();
        let mut graph = UnGraph::<(), f64>::with_capacity(nodes.len(), nodes.len() * 8);
        let idx: Vec<NodeIndex> = nodes.iter().map(|_| graph.add_node(())).collect();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let Some(g) = m.chart_forward(&nodes[i], &nodes[j]) else { continue };
                let w = group.norm(&g);
                if w < step && matches!(m.act(&nodes[i], &g), Some(ref y) if m.same_point(y, &nodes[j])) {
                    graph.add_edge(idx[i], idx[j], w.as_f64());
                }
            }
        }
        Self { nodes, step, graph }
    }

    pub fn n_edges(&self) -> usize {
        self.graph.edge_count()
    }

    /// Shortest-path lengths from node `i` to every node.
    pub fn distances_from(&self, i: usize) -> Vec<Option<f64>> {
        let d = dijkstra(&self.graph, NodeIndex::new(i), None, |e| *e.weight());
        (0..self.nodes.len()).map(|j| d.get(&NodeIndex::new(j)).copied()).collect()
    }

    pub fn distance(&self, i: usize, j: usize) -> Option<f64> {
        let d = dijkstra(&self.graph, NodeIndex::new(i), Some(NodeIndex::new(j)), |e| *e.weight());
        d.get(&NodeIndex::new(j)).copied()
    }
}

/// Upper bound on `d_M(p, q)` from a sampled chain graph.
pub fn chain_metric<T: Scalar, M: LocalSpace<T> + ?Sized>(
    m: &M,
    p: &SpacePoint<T>,
    q: &SpacePoint<T>,
    n_nodes: usize,
    step: Option<T>,
    seed: u64,
) -> ChainResult {
    if m.same_point(p, q) {
        return ChainResult { distance: Some(0.0), n_nodes: 0, n_edges: 0, step: step.map_or(0.0, |s| s.as_f64()) };
    }
    let g = ChainGraph::build(m, &[p.clone(), q.clone()], n_nodes, step, seed);
    ChainResult { distance: g.distance(0, 1), n_nodes: g.nodes.len(), n_edges: g.n_edges(), step: g.step.as_f64() }
}
