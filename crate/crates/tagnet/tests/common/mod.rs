//! Independent brute-force oracles used to check the CSR implementations.
//! Everything here works on a dense boolean adjacency matrix and stays
//! deliberately naive; none of it calls the code paths under test.

// shared across test targets; not every target uses every helper
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tagnet::graph::{NodeId, TagGraph};

pub struct DenseGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl DenseGraph {
    pub fn random(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(p) {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        Self { n, adj }
    }

    pub fn from_graph(g: &TagGraph) -> Self {
        let n = g.node_count();
        let mut adj = vec![vec![false; n]; n];
        for (i, j) in g.edges() {
            adj[i as usize][j as usize] = true;
            adj[j as usize][i as usize] = true;
        }
        Self { n, adj }
    }

    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.adj[i][j] {
                    out.push((i as NodeId, j as NodeId));
                }
            }
        }
        out
    }

    pub fn to_graph(&self) -> TagGraph {
        TagGraph::from_edges(self.n, self.edges())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj
            .iter()
            .map(|row| row.iter().filter(|&&b| b).count())
            .collect()
    }

    /// All-pairs distances by repeated squaring of the reachability
    /// matrix: dist = d once a node first becomes reachable within 2^t
    /// hops, refined by combining the two halves.
    pub fn apsp_matrix_squaring(&self) -> Vec<Vec<Option<u32>>> {
        let n = self.n;
        // start with 1-step reachability, then do (n-1) rounds of
        // "extend by one matrix multiplication" min-plus style over the
        // boolean closure; repeated squaring of the {0,1} min-plus matrix
        let inf = u32::MAX;
        let mut dist = vec![vec![inf; n]; n];
        for i in 0..n {
            dist[i][i] = 0;
            for j in 0..n {
                if self.adj[i][j] {
                    dist[i][j] = 1;
                }
            }
        }
        // min-plus squaring until fixpoint: dist <- dist (x) dist
        let mut span = 1usize;
        while span < n {
            let mut next = dist.clone();
            for i in 0..n {
                for k in 0..n {
                    let dik = dist[i][k];
                    if dik == inf {
                        continue;
                    }
                    for j in 0..n {
                        let dkj = dist[k][j];
                        if dkj != inf && dik + dkj < next[i][j] {
                            next[i][j] = dik + dkj;
                        }
                    }
                }
            }
            dist = next;
            span *= 2;
        }
        dist.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|d| if d == inf { None } else { Some(d) })
                    .collect()
            })
            .collect()
    }

    /// Edges among the neighbors of `i`, counted pair by pair.
    pub fn triangle_e_i(&self, i: usize) -> usize {
        let nbrs: Vec<usize> = (0..self.n).filter(|&j| self.adj[i][j]).collect();
        let mut e = 0;
        for (a, &u) in nbrs.iter().enumerate() {
            for &v in &nbrs[a + 1..] {
                if self.adj[u][v] {
                    e += 1;
                }
            }
        }
        e
    }

    pub fn local_clustering(&self, i: usize) -> Option<f64> {
        let k = self.degrees()[i];
        if k < 2 {
            return None;
        }
        Some(2.0 * self.triangle_e_i(i) as f64 / (k as f64 * (k - 1) as f64))
    }

    /// Component labels by flood fill over the matrix.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = next;
            while let Some(u) = stack.pop() {
                for v in 0..self.n {
                    if self.adj[u][v] && label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Exact average path length over connected pairs, from the matrix
    /// distances.
    pub fn average_path_length(&self) -> Option<(f64, u64)> {
        let dist = self.apsp_matrix_squaring();
        let mut sum = 0u64;
        let mut pairs = 0u64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if let Some(d) = dist[i][j] {
                    sum += d as u64;
                    pairs += 1;
                }
            }
        }
        if pairs == 0 {
            None
        } else {
            Some((sum as f64 / pairs as f64, pairs))
        }
    }
}
