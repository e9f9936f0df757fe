//! Seeded synthetic graph generators: Erdős–Rényi, Watts–Strogatz and
//! Barabási–Albert. These stand in for real folksonomy data as ground
//! truth for the metrics pipeline.
//!
//! All generators draw from ChaCha8 seeded with a 64-bit value, so the
//! same spec reproduces bit-identically on any platform. Snapshot writers
//! record the algorithm name ([`RNG_ALGORITHM`]) in a header comment.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TagGraph, TagTable};
use crate::ingest::ItemTagSets;

/// Name recorded in snapshot headers for reproducibility.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Model plus seed, as accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorSpec {
    Er { n: usize, p: f64 },
    Ws { n: usize, k_ring: usize, beta: f64 },
    Ba { n: usize, m: usize },
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Result<TagGraph> {
        match *self {
            GeneratorSpec::Er { n, p } => generate_er(n, p, seed),
            GeneratorSpec::Ws { n, k_ring, beta } => generate_ws(n, k_ring, beta, seed),
            GeneratorSpec::Ba { n, m } => generate_ba(n, m, seed),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            GeneratorSpec::Er { n, p } => format!("er n={n} p={p}"),
            GeneratorSpec::Ws { n, k_ring, beta } => format!("ws n={n} k={k_ring} beta={beta}"),
            GeneratorSpec::Ba { n, m } => format!("ba n={n} m={m}"),
        }
    }
}

/// Each unordered pair becomes an edge independently with probability `p`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<TagGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidGenerator(format!("ER: p = {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n as NodeId {
        for j in (i + 1)..n as NodeId {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Ok(TagGraph::from_edges(n, edges))
}

/// Ring lattice with `k_ring / 2` neighbors per side; each edge's far
/// endpoint is rewired with probability `beta` to a uniformly chosen
/// target that is neither the source nor already adjacent to it.
pub fn generate_ws(n: usize, k_ring: usize, beta: f64, seed: u64) -> Result<TagGraph> {
    if k_ring % 2 != 0 || k_ring >= n {
        return Err(Error::InvalidGenerator(format!(
            "WS: k_ring = {k_ring} must be even and < n = {n}"
        )));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidGenerator(format!("WS: beta = {beta} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    let add = |adj: &mut Vec<BTreeSet<NodeId>>, a: NodeId, b: NodeId| {
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
    };
    for i in 0..n {
        for d in 1..=k_ring / 2 {
            add(&mut adj, i as NodeId, ((i + d) % n) as NodeId);
        }
    }
    for i in 0..n {
        for d in 1..=k_ring / 2 {
            let u = i as NodeId;
            let v = ((i + d) % n) as NodeId;
            if !rng.gen_bool(beta) {
                continue;
            }
            // a node adjacent to everything else cannot be rewired
            if adj[i].len() >= n - 1 {
                continue;
            }
            let t = loop {
                let t = rng.gen_range(0..n as NodeId);
                if t != u && !adj[i].contains(&t) {
                    break t;
                }
            };
            adj[u as usize].remove(&v);
            adj[v as usize].remove(&u);
            add(&mut adj, u, t);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(i, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&j| (i as NodeId) < j)
                .map(move |j| (i as NodeId, j))
        })
        .collect::<Vec<_>>();
    Ok(TagGraph::from_edges(n, edges))
}

/// Preferential attachment: start from a complete graph on `m + 1` nodes;
/// each arriving node attaches `m` edges to distinct existing nodes drawn
/// with probability proportional to current degree (resampling until
/// distinct).
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<TagGraph> {
    if m < 1 || m >= n {
        return Err(Error::InvalidGenerator(format!("BA: need 1 <= m < n (m = {m}, n = {n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m * (m + 1) / 2 + m * (n - m - 1));
    // one entry per edge endpoint; uniform draws from this are
    // degree-proportional draws over nodes
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());
    for i in 0..=(m as NodeId) {
        for j in (i + 1)..=(m as NodeId) {
            edges.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    for v in (m + 1)..n {
        let v = v as NodeId;
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            targets.insert(t);
        }
        for t in targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Ok(TagGraph::from_edges(n, edges))
}

/// Synthetic graphs have no real tags; nodes are named `t0..t{N-1}`.
pub fn numbered_tag_table(n: usize) -> TagTable {
    let mut table = TagTable::new();
    for i in 0..n {
        table.intern(&format!("t{i}"));
    }
    table
}

/// Re-expresses a graph as 2-tag items, one synthetic URL per edge, so
/// generated graphs can exercise the full ingest path. Isolated nodes get
/// a 1-tag item to preserve N.
pub fn to_item_tag_sets(graph: &TagGraph, table: &TagTable) -> ItemTagSets {
    let mut items = ItemTagSets::new();
    for (idx, (i, j)) in graph.edges().enumerate() {
        items.insert(
            &format!("edge://{idx:08}"),
            [table.lookup(i).to_owned(), table.lookup(j).to_owned()].into_iter(),
        );
    }
    let mut iso = 0usize;
    for i in 0..graph.node_count() as NodeId {
        if graph.neighbors(i).is_empty() {
            items.insert(&format!("node://{iso:08}"), [table.lookup(i).to_owned()].into_iter());
            iso += 1;
        }
    }
    items
}
