//! Soft random geometric graphs.
//!
//! Nodes are placed uniformly in a [`DomainSpec`] and each unordered pair is
//! linked independently with probability `H(r) = exp(-beta r^eta)`, or by the
//! hard-disk indicator `r <= r0`.
//!
//! Link decisions use one uniform `u_ij` in `(0, 1]` per pair, drawn in
//! lexicographic order over `i < j`; the pair is linked iff `u_ij <= H(r_ij)`.
//! For the soft model that is the same as `beta <= -ln(u_ij) / r_ij^eta`, which
//! couples all values of `beta` on one draw and makes the edge set monotone
//! in `beta`. [`CoupledLinks`] exposes that coupling.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use crate::rng::RngStream;

/// Substream key for node positions.
pub const POSITIONS_STREAM: u64 = 0;
/// Substream key for the per-pair link uniforms.
pub const LINKS_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConnectionModel {
    SoftExponential { beta: f64, eta: f64 },
    HardDisk { range: f64 },
}

impl ConnectionModel {
    pub fn soft(beta: f64, eta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        if !(eta.is_finite() && eta >= 1.0) {
            return Err(Error::InvalidParameter(format!("eta must be >= 1, got {eta}")));
        }
        Ok(ConnectionModel::SoftExponential { beta, eta })
    }

    pub fn hard(range: f64) -> Result<Self> {
        if !(range.is_finite() && range > 0.0) {
            return Err(Error::InvalidParameter(format!("range must be positive, got {range}")));
        }
        Ok(ConnectionModel::HardDisk { range })
    }

    pub fn link_probability(&self, r: f64) -> f64 {
        match *self {
            ConnectionModel::SoftExponential { beta, eta } => (-beta * r.powf(eta)).exp(),
            ConnectionModel::HardDisk { range } => {
                if r <= range {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Provenance of a sampled graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphMeta {
    pub rho: f64,
    pub model: ConnectionModel,
    pub seed: u64,
}

/// Undirected simple graph with embedded nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    positions: Vec<Point>,
    // CSR adjacency: neighbors of i are targets[offsets[i]..offsets[i + 1]], sorted.
    offsets: Vec<usize>,
    targets: Vec<u32>,
    meta: Option<GraphMeta>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged; self-loops and out-of-range indices are errors.
    pub fn new(positions: Vec<Point>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidParameter(format!("self-loop on node {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!("edge ({i}, {j}) out of range for {n} nodes")));
            }
            adjacency[i].push(j as u32);
            adjacency[j].push(i as u32);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph::from_lists(positions, adjacency))
    }

    fn from_lists(positions: Vec<Point>, adjacency: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(adjacency.iter().map(Vec::len).sum());
        for list in adjacency {
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Graph {
            positions,
            offsets,
            targets,
            meta: None,
        }
    }

    /// Graph whose positions carry no meaning (node `i` sits at `(i, 0)`).
    pub fn unembedded(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new((0..n).map(|i| Point::new(i as f64, 0.0)).collect(), edges)
    }

    /// Edge list must already be valid: `i < j`, in range, no duplicates.
    fn from_sorted_pairs(positions: Vec<Point>, edges: impl Iterator<Item = (u32, u32)>) -> Self {
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        for (i, j) in edges {
            adjacency[i as usize].push(j);
            adjacency[j as usize].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph::from_lists(positions, adjacency)
    }

    pub fn with_meta(mut self, meta: GraphMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn meta(&self) -> Option<&GraphMeta> {
        self.meta.as_ref()
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |i| self.neighbors(i).iter().map(move |&j| (i, j as usize)).filter(|&(i, j)| i < j))
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn hop_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap();
            for &w in self.neighbors(v) {
                let w = w as usize;
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// True iff the graph has a single connected component. Graphs with zero
    /// or one node count as connected.
    pub fn is_connected(&self) -> bool {
        if self.node_count() <= 1 {
            return true;
        }
        self.hop_distances(0).iter().all(Option::is_some)
    }
}

/// Number of nodes for density `rho` on a domain of area `area`.
pub fn node_count_for(rho: f64, area: f64) -> usize {
    (rho * area).round() as usize
}

/// Samples `N = round(rho * area)` uniform nodes and links them under `model`.
pub fn sample_graph(domain: &DomainSpec, rho: f64, model: ConnectionModel, rng: &RngStream) -> Result<Graph> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("density must be positive, got {rho}")));
    }
    let n = node_count_for(rho, domain.area());
    let positions = domain.sample_uniform(n, &mut rng.substream(POSITIONS_STREAM));
    let graph = realize(positions, model, &mut rng.substream(LINKS_STREAM));
    Ok(graph.with_meta(GraphMeta {
        rho,
        model,
        seed: rng.seed(),
    }))
}

/// Links fixed positions under `model`, one uniform per pair in canonical order.
pub fn realize(positions: Vec<Point>, model: ConnectionModel, rng: &mut RngStream) -> Graph {
    let n = positions.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let u = rng.uniform_open_closed();
            if u <= model.link_probability(positions[i].distance(positions[j])) {
                edges.push((i as u32, j as u32));
            }
        }
    }
    Graph::from_sorted_pairs(positions, edges.into_iter())
}

/// Per-pair critical values `beta_ij = -ln(u_ij) / r_ij^eta` for one draw of
/// link uniforms. The edge `(i, j)` is present at level `beta` iff
/// `beta <= beta_ij`. Coincident nodes get `beta_ij = +inf` (always linked).
#[derive(Debug, Clone)]
pub struct CoupledLinks {
    n: usize,
    eta: f64,
    critical: Vec<f64>,
}

impl CoupledLinks {
    pub fn draw(positions: &[Point], eta: f64, rng: &mut RngStream) -> Result<Self> {
        if !(eta.is_finite() && eta >= 1.0) {
            return Err(Error::InvalidParameter(format!("eta must be >= 1, got {eta}")));
        }
        let n = positions.len();
        let uniforms: Vec<f64> = (0..n * n.saturating_sub(1) / 2).map(|_| rng.uniform_open_closed()).collect();
        CoupledLinks::from_uniforms(positions, eta, &uniforms)
    }

    /// Coupling from explicit pair uniforms in `(0, 1]`, lexicographic over `i < j`.
    pub fn from_uniforms(positions: &[Point], eta: f64, uniforms: &[f64]) -> Result<Self> {
        if !(eta.is_finite() && eta >= 1.0) {
            return Err(Error::InvalidParameter(format!("eta must be >= 1, got {eta}")));
        }
        let n = positions.len();
        if uniforms.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidParameter(format!(
                "{} pair uniforms supplied for {n} nodes",
                uniforms.len()
            )));
        }
        if let Some(u) = uniforms.iter().find(|u| !(**u > 0.0 && **u <= 1.0)) {
            return Err(Error::InvalidParameter(format!("pair uniform {u} outside (0, 1]")));
        }
        let mut critical = Vec::with_capacity(uniforms.len());
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let r = positions[i].distance(positions[j]);
                critical.push(if r == 0.0 {
                    f64::INFINITY
                } else {
                    -uniforms[k].ln() / r.powf(eta)
                });
                k += 1;
            }
        }
        Ok(CoupledLinks { n, eta, critical })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn critical_beta(&self, i: usize, j: usize) -> f64 {
        self.critical[self.index(i, j)]
    }

    /// Edge set at level `beta` (non-strict: `beta <= beta_ij`).
    pub fn realize(&self, positions: Vec<Point>, beta: f64) -> Graph {
        assert_eq!(positions.len(), self.n, "positions do not match the coupled draw");
        let n = self.n;
        let critical = &self.critical;
        let mut k = 0;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if beta <= critical[k] {
                    edges.push((i as u32, j as u32));
                }
                k += 1;
            }
        }
        Graph::from_sorted_pairs(positions, edges.into_iter())
    }

    /// Largest `beta` at which the coupled graph is connected: the smallest
    /// edge weight on a maximum spanning tree of the `beta_ij` (dense Prim).
    pub fn connectivity_threshold(&self) -> Result<f64> {
        let n = self.n;
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "connectivity threshold needs at least 2 nodes, got {n}"
            )));
        }
        let mut in_tree = vec![false; n];
        let mut best: Vec<f64> = (0..n).map(|v| if v == 0 { f64::NEG_INFINITY } else { self.critical_beta(0, v) }).collect();
        in_tree[0] = true;
        let mut bottleneck = f64::INFINITY;
        for _ in 1..n {
            let mut pick = usize::MAX;
            let mut pick_w = f64::NEG_INFINITY;
            for v in 0..n {
                if !in_tree[v] && (pick == usize::MAX || best[v] > pick_w) {
                    pick = v;
                    pick_w = best[v];
                }
            }
            bottleneck = bottleneck.min(pick_w);
            in_tree[pick] = true;
            let base = pick * n - pick * (pick + 1) / 2;
            for v in 0..n {
                if in_tree[v] {
                    continue;
                }
                let w = if v > pick {
                    self.critical[base + (v - pick - 1)]
                } else {
                    self.critical_beta(v, pick)
                };
                if w > best[v] {
                    best[v] = w;
                }
            }
        }
        if bottleneck.is_infinite() {
            return Err(Error::DegenerateDistance);
        }
        Ok(bottleneck)
    }
}

/// Connectivity-threshold `beta*` for fixed positions, and the graph realized
/// at `beta*` (which is connected).
pub fn beta_connectivity_threshold(positions: Vec<Point>, eta: f64, rng: &mut RngStream) -> Result<(f64, Graph)> {
    let links = CoupledLinks::draw(&positions, eta, rng)?;
    let beta = links.connectivity_threshold()?;
    Ok((beta, links.realize(positions, beta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn link_probabilities() {
        let soft = ConnectionModel::soft(1.0, 2.0).unwrap();
        assert_eq!(soft.link_probability(0.0), 1.0);
        assert!((soft.link_probability(1.0) - (-1f64).exp()).abs() < 1e-16);
        assert!(soft.link_probability(0.5) > soft.link_probability(0.6));
        let hard = ConnectionModel::hard(0.3).unwrap();
        assert_eq!(hard.link_probability(0.3), 1.0);
        assert_eq!(hard.link_probability(0.3000001), 0.0);
        assert!(ConnectionModel::soft(0.0, 2.0).is_err());
        assert!(ConnectionModel::soft(1.0, 0.5).is_err());
        assert!(ConnectionModel::hard(-1.0).is_err());
    }

    #[test]
    fn connectivity_small_cases() {
        assert!(Graph::unembedded(1, &[]).unwrap().is_connected());
        assert!(!Graph::unembedded(2, &[]).unwrap().is_connected());
        let path = Graph::unembedded(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(path.is_connected());
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(Graph::unembedded(3, &[(1, 1)]).is_err());
        assert!(Graph::unembedded(3, &[(0, 3)]).is_err());
        let g = Graph::unembedded(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn single_node_graph() {
        // rho * pi = 1 -> N = 1
        let g = sample_graph(
            &DomainSpec::unit_disk(),
            1.0 / std::f64::consts::PI,
            ConnectionModel::soft(1.0, 2.0).unwrap(),
            &RngStream::new(1),
        )
        .unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn hard_disk_covering_domain_is_complete() {
        let d = DomainSpec::unit_disk();
        let g = sample_graph(&d, 10.0, ConnectionModel::hard(2.0).unwrap(), &RngStream::new(5)).unwrap();
        let n = g.node_count();
        assert_eq!(n, 31);
        assert_eq!(g.edge_count(), n * (n - 1) / 2);
    }

    #[test]
    fn two_node_threshold() {
        let pos = vec![Point::new(0.0, 0.0), Point::new(0.3, 0.4)];
        let mut rng = RngStream::new(9);
        let u = rng.clone().uniform_open_closed();
        let (beta, g) = beta_connectivity_threshold(pos, 2.0, &mut rng).unwrap();
        assert!((beta - (-u.ln() / 0.25)).abs() <= 1e-15 * beta);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn coincident_nodes_are_always_linked() {
        let pos = vec![Point::new(0.1, 0.1); 3];
        let err = beta_connectivity_threshold(pos, 2.0, &mut RngStream::new(1)).unwrap_err();
        assert_eq!(err, Error::DegenerateDistance);

        let pos = vec![Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let (beta, g) = beta_connectivity_threshold(pos, 2.0, &mut RngStream::new(1)).unwrap();
        assert!(beta.is_finite());
        assert!(g.is_connected());
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn collinear_triple_threshold() {
        // 0 -- d -- 2d with equal uniforms: the two short pairs share the
        // largest critical value, so the spanning tree is the path and the
        // threshold is set by the spacing d, not by the long pair.
        let d = 0.2;
        let pos = vec![Point::new(0.0, 0.0), Point::new(d, 0.0), Point::new(2.0 * d, 0.0)];
        let u = 0.3_f64;
        let links = CoupledLinks::from_uniforms(&pos, 2.0, &[u, u, u]).unwrap();
        let short = -u.ln() / (d * d);
        let long = -u.ln() / (4.0 * d * d);
        assert!((links.critical_beta(0, 1) - short).abs() < 1e-12 * short);
        assert!((links.critical_beta(0, 2) - long).abs() < 1e-12 * long);
        let beta = links.connectivity_threshold().unwrap();
        assert!((beta - short).abs() < 1e-12 * short);
        let g = links.realize(pos, beta);
        assert!(g.is_connected());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn explicit_uniforms_validated() {
        let pos = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        assert!(CoupledLinks::from_uniforms(&pos, 2.0, &[]).is_err());
        assert!(CoupledLinks::from_uniforms(&pos, 2.0, &[0.0]).is_err());
        assert!(CoupledLinks::from_uniforms(&pos, 2.0, &[1.5]).is_err());
        assert!(CoupledLinks::from_uniforms(&pos, 2.0, &[1.0]).is_ok());
    }

    #[test]
    fn triangular_index_is_lexicographic() {
        let pos: Vec<Point> = (0..6).map(|i| Point::new(i as f64, 0.0)).collect();
        let links = CoupledLinks::draw(&pos, 2.0, &mut RngStream::new(2)).unwrap();
        let mut k = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                assert_eq!(links.index(i, j), k);
                assert_eq!(links.index(j, i), k);
                k += 1;
            }
        }
    }
}
