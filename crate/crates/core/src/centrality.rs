//! Exact betweenness centrality on unweighted graphs.
//!
//! `gamma(k) = sum over unordered pairs {i, j}, i != k != j, of
//! sigma_ij(k) / sigma_ij`, where `sigma_ij` counts hop-shortest paths and
//! `sigma_ij(k)` those through `k`. Pairs in different components contribute 0.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rgg::Graph;

/// Largest graph accepted by [`betweenness_bruteforce`].
pub const BRUTEFORCE_MAX_NODES: usize = 12;

/// Sources handled per task by [`betweenness_brandes_par`]. Fixed so the
/// floating-point summation order does not depend on the thread count.
const SOURCE_BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Raw,
    /// Divided by `(N-1)(N-2)/2`, the number of pairs excluding the node itself.
    PairNormalized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessVector {
    pub values: Vec<f64>,
    pub normalization: Normalization,
}

impl BetweennessVector {
    pub fn raw(values: Vec<f64>) -> Self {
        BetweennessVector {
            values,
            normalization: Normalization::Raw,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// `(N-1)(N-2)/2`.
pub fn pair_count(n: usize) -> f64 {
    let n = n as f64;
    (n - 1.0) * (n - 2.0) / 2.0
}

/// Converts between raw and pair-normalized values.
pub fn normalize(v: &BetweennessVector, mode: Normalization) -> Result<BetweennessVector> {
    if v.normalization == mode {
        return Ok(v.clone());
    }
    let n = v.len();
    if n < 3 {
        return Err(Error::DegenerateN { n });
    }
    let scale = match mode {
        Normalization::PairNormalized => 1.0 / pair_count(n),
        Normalization::Raw => pair_count(n),
    };
    Ok(BetweennessVector {
        values: v.values.iter().map(|x| x * scale).collect(),
        normalization: mode,
    })
}

/// Reusable buffers for single-source shortest-path accumulation.
struct Workspace {
    dist: Vec<u32>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    /// BFS queue; once drained, the visit order.
    order: Vec<u32>,
}

const UNSEEN: u32 = u32::MAX;

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            dist: vec![UNSEEN; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
        }
    }

    /// Adds the dependencies of `source` on every other node into `acc`.
    fn accumulate(&mut self, g: &Graph, source: usize, acc: &mut [f64]) {
        let Workspace {
            dist,
            sigma,
            delta,
            order,
        } = self;
        dist.fill(UNSEEN);
        sigma.fill(0.0);
        delta.fill(0.0);
        order.clear();

        dist[source] = 0;
        sigma[source] = 1.0;
        order.push(source as u32);
        let mut head = 0;
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            let next = dist[v] + 1;
            for &w in g.neighbors(v) {
                let w = w as usize;
                if dist[w] == UNSEEN {
                    dist[w] = next;
                    order.push(w as u32);
                }
                if dist[w] == next {
                    sigma[w] += sigma[v];
                }
            }
        }

        // Reverse BFS order: every node is finished before its predecessors.
        for &w in order.iter().rev() {
            let w = w as usize;
            if dist[w] == 0 {
                continue;
            }
            let coeff = (1.0 + delta[w]) / sigma[w];
            let prev = dist[w] - 1;
            for &v in g.neighbors(w) {
                let v = v as usize;
                if dist[v] == prev {
                    delta[v] += sigma[v] * coeff;
                }
            }
            acc[w] += delta[w];
        }
    }
}

/// Brandes' algorithm, sequential over sources.
pub fn betweenness_brandes(g: &Graph) -> BetweennessVector {
    let n = g.node_count();
    let mut acc = vec![0.0; n];
    let mut ws = Workspace::new(n);
    for s in 0..n {
        ws.accumulate(g, s, &mut acc);
    }
    // Each unordered pair was counted from both endpoints.
    BetweennessVector::raw(acc.into_iter().map(|x| x / 2.0).collect())
}

/// Brandes' algorithm with sources split into fixed blocks processed in
/// parallel; block sums are merged in block order, so the result is the same
/// for any thread count.
pub fn betweenness_brandes_par(g: &Graph) -> BetweennessVector {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_BLOCK)
        .map(|block| {
            let mut acc = vec![0.0; n];
            let mut ws = Workspace::new(n);
            for &s in block {
                ws.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    BetweennessVector::raw(total.into_iter().map(|x| x / 2.0).collect())
}

/// Exhaustive reference: for every pair, enumerates simple paths of
/// increasing length until some exist, then counts how many pass each node.
pub fn betweenness_bruteforce(g: &Graph) -> Result<BetweennessVector> {
    let n = g.node_count();
    if n > BRUTEFORCE_MAX_NODES {
        return Err(Error::TooLarge {
            n,
            max: BRUTEFORCE_MAX_NODES,
        });
    }
    let mut gamma = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            for len in 1..n {
                let mut paths = Vec::new();
                let mut path = vec![i];
                let mut on_path = vec![false; n];
                on_path[i] = true;
                simple_paths_of_length(g, j, len, &mut path, &mut on_path, &mut paths);
                if paths.is_empty() {
                    continue;
                }
                let total = paths.len() as f64;
                for p in &paths {
                    for &k in &p[1..p.len() - 1] {
                        gamma[k] += 1.0 / total;
                    }
                }
                break;
            }
        }
    }
    Ok(BetweennessVector::raw(gamma))
}

fn simple_paths_of_length(
    g: &Graph,
    target: usize,
    remaining: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let v = *path.last().unwrap();
    if remaining == 0 {
        if v == target {
            out.push(path.clone());
        }
        return;
    }
    if v == target {
        return;
    }
    for &w in g.neighbors(v) {
        let w = w as usize;
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        path.push(w);
        simple_paths_of_length(g, target, remaining - 1, path, on_path, out);
        path.pop();
        on_path[w] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        Graph::unembedded(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn path_of_three() {
        let g = Graph::unembedded(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(betweenness_brandes(&g).values, vec![0.0, 1.0, 0.0]);
        assert_eq!(betweenness_bruteforce(&g).unwrap().values, vec![0.0, 1.0, 0.0]);
        let norm = normalize(&betweenness_brandes(&g), Normalization::PairNormalized).unwrap();
        assert_eq!(norm.values[1], 1.0);
    }

    #[test]
    fn star_center_relays_every_pair() {
        let g = star(4);
        let raw = betweenness_brandes(&g);
        assert_eq!(raw.values, vec![6.0, 0.0, 0.0, 0.0, 0.0]);
        let norm = normalize(&raw, Normalization::PairNormalized).unwrap();
        assert_eq!(norm.values[0], 1.0);
        let back = normalize(&norm, Normalization::Raw).unwrap();
        assert_eq!(back.values, raw.values);
    }

    #[test]
    fn four_cycle_splits_antipodal_pairs() {
        let g = Graph::unembedded(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(betweenness_brandes(&g).values, vec![0.5; 4]);
        assert_eq!(betweenness_bruteforce(&g).unwrap().values, vec![0.5; 4]);
    }

    #[test]
    fn empty_and_complete_graphs() {
        let empty = Graph::unembedded(5, &[]).unwrap();
        assert_eq!(betweenness_bruteforce(&empty).unwrap().values, vec![0.0; 5]);
        assert_eq!(betweenness_brandes(&empty).values, vec![0.0; 5]);

        let mut edges = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                edges.push((i, j));
            }
        }
        let k5 = Graph::unembedded(5, &edges).unwrap();
        assert_eq!(betweenness_bruteforce(&k5).unwrap().values, vec![0.0; 5]);
        assert_eq!(betweenness_brandes(&k5).values, vec![0.0; 5]);
    }

    #[test]
    fn disconnected_pairs_contribute_nothing() {
        // two paths of three
        let g = Graph::unembedded(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(betweenness_brandes(&g).values, vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn bruteforce_guard() {
        let g = Graph::unembedded(13, &[]).unwrap();
        assert_eq!(betweenness_bruteforce(&g).unwrap_err(), Error::TooLarge { n: 13, max: 12 });
    }

    #[test]
    fn normalize_needs_three_nodes() {
        let v = BetweennessVector::raw(vec![0.0, 0.0]);
        assert_eq!(normalize(&v, Normalization::PairNormalized).unwrap_err(), Error::DegenerateN { n: 2 });
        let zeros = BetweennessVector::raw(vec![0.0; 4]);
        assert_eq!(normalize(&zeros, Normalization::PairNormalized).unwrap().values, vec![0.0; 4]);
    }

    #[test]
    fn parallel_matches_sequential() {
        // ladder long enough to span several source blocks
        let n = 200;
        let mut edges = Vec::new();
        for i in 0..n - 2 {
            edges.push((i, i + 2));
            if i % 2 == 0 {
                edges.push((i, i + 1));
            }
        }
        let g = Graph::unembedded(n, &edges).unwrap();
        let a = betweenness_brandes(&g);
        let b = betweenness_brandes_par(&g);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 1e-9 * x.max(1.0));
        }
        assert_eq!(b, betweenness_brandes_par(&g));
    }
}
