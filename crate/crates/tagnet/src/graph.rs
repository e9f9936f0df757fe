//! Tag interning and the compact undirected co-occurrence graph.
//!
//! Tags are interned to dense ids so the adjacency can live in two flat
//! arrays (CSR layout): an offset per node into a shared, sorted neighbor
//! vector. The graph is simple and unweighted; multiple items covering the
//! same tag pair contribute a single edge.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ingest::ItemTagSets;

/// Dense node identifier in `[0, N)`.
pub type NodeId = u32;

/// Bijection between tag strings and dense node ids.
#[derive(Debug, Clone, Default)]
pub struct TagTable {
    tags: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl TagTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id for `tag`, interning it if unseen.
    pub fn intern(&mut self, tag: &str) -> NodeId {
        if let Some(&id) = self.index.get(tag) {
            return id;
        }
        let id = self.tags.len() as NodeId;
        self.tags.push(tag.to_owned());
        self.index.insert(tag.to_owned(), id);
        id
    }

    pub fn get(&self, tag: &str) -> Option<NodeId> {
        self.index.get(tag).copied()
    }

    pub fn lookup(&self, id: NodeId) -> &str {
        &self.tags[id as usize]
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &str)> {
        self.tags
            .iter()
            .enumerate()
            .map(|(i, t)| (i as NodeId, t.as_str()))
    }
}

/// Undirected simple graph in CSR form. Neighbor lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagGraph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
}

impl TagGraph {
    /// Builds from an edge list over `n` nodes. Self-loops are rejected by
    /// debug assertion; duplicate edges (in either orientation) collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut norm: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .map(|(a, b)| {
                debug_assert_ne!(a, b, "self-loop");
                if a < b { (a, b) } else { (b, a) }
            })
            .collect();
        norm.sort_unstable();
        norm.dedup();

        let mut degrees = vec![0usize; n];
        for &(a, b) in &norm {
            degrees[a as usize] += 1;
            degrees[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for &d in &degrees {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut neighbors = vec![0 as NodeId; acc];
        for &(a, b) in &norm {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }
        // rows come out sorted because the edge list is sorted, except the
        // reverse direction; sort each row to be safe
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self { offsets, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, node: NodeId) -> &[NodeId] {
        let i = node as usize;
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, node: NodeId) -> Result<usize> {
        if (node as usize) >= self.node_count() {
            return Err(Error::NodeOutOfRange(node as usize, self.node_count()));
        }
        Ok(self.neighbors(node).len())
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .copied()
                .filter(move |&j| i < j)
                .map(move |j| (i, j))
        })
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.node_count() as NodeId)
            .filter(|&i| self.neighbors(i).is_empty())
            .count()
    }

    /// Labels nodes by connected component (BFS). Sizes come back descending.
    pub fn connected_components(&self) -> ComponentLabeling {
        let n = self.node_count();
        let mut labels = vec![u32::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        for start in 0..n {
            if labels[start] != u32::MAX {
                continue;
            }
            let label = sizes.len() as u32;
            let mut size = 0usize;
            labels[start] = label;
            queue.push_back(start as NodeId);
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in self.neighbors(u) {
                    if labels[v as usize] == u32::MAX {
                        labels[v as usize] = label;
                        queue.push_back(v);
                    }
                }
            }
            sizes.push(size);
        }
        ComponentLabeling::new(labels, sizes)
    }
}

/// Per-node component labels plus component sizes sorted descending.
#[derive(Debug, Clone)]
pub struct ComponentLabeling {
    labels: Vec<u32>,
    sizes_desc: Vec<usize>,
    /// Label of a largest component (traversal order breaks ties).
    largest_label: u32,
}

impl ComponentLabeling {
    fn new(labels: Vec<u32>, sizes: Vec<usize>) -> Self {
        let largest_label = sizes
            .iter()
            .enumerate()
            .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
            .map(|(i, _)| i as u32)
            .unwrap_or(0);
        let mut sizes_desc = sizes;
        sizes_desc.sort_unstable_by(|a, b| b.cmp(a));
        Self { labels, sizes_desc, largest_label }
    }

    pub fn label(&self, node: NodeId) -> u32 {
        self.labels[node as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn count(&self) -> usize {
        self.sizes_desc.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes_desc
    }

    pub fn largest_size(&self) -> usize {
        self.sizes_desc.first().copied().unwrap_or(0)
    }

    pub fn in_largest(&self, node: NodeId) -> bool {
        self.labels[node as usize] == self.largest_label
    }
}

/// Counters reported by [`build_cooccurrence_graph`].
#[derive(Debug, Clone, Default)]
pub struct BuildStats {
    /// Items whose tag set exceeded the clique warning threshold.
    pub oversized_items: usize,
    /// Largest per-item tag set seen.
    pub max_item_tags: usize,
}

pub const DEFAULT_CLIQUE_WARN: usize = 1000;

/// Expands every item's tag set into a clique and assembles the graph.
///
/// Ids are assigned by first occurrence while walking URLs in sorted order
/// (tags sorted within each URL), so identical inputs build identical graphs.
pub fn build_cooccurrence_graph(items: &ItemTagSets) -> (TagTable, TagGraph) {
    let (t, g, _) = build_cooccurrence_graph_with(items, DEFAULT_CLIQUE_WARN);
    (t, g)
}

pub fn build_cooccurrence_graph_with(
    items: &ItemTagSets,
    clique_warn: usize,
) -> (TagTable, TagGraph, BuildStats) {
    let mut table = TagTable::new();
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut stats = BuildStats::default();
    for (_url, tags) in items.iter() {
        let ids: Vec<NodeId> = tags.iter().map(|t| table.intern(t)).collect();
        stats.max_item_tags = stats.max_item_tags.max(ids.len());
        if ids.len() > clique_warn {
            stats.oversized_items += 1;
        }
        for (a, &u) in ids.iter().enumerate() {
            for &v in &ids[a + 1..] {
                edges.push(if u < v { (u, v) } else { (v, u) });
            }
        }
    }
    let graph = TagGraph::from_edges(table.len(), edges);
    (table, graph, stats)
}

pub const SNAPSHOT_MAGIC: &str = "tagnet-graph";

/// Writes the `tagnet-graph v1` snapshot: header, optional `#` comment
/// lines, edges `i j` with `i < j` ascending, then `id<TAB>tag` lines.
pub fn write_snapshot<W: Write>(
    w: &mut W,
    table: &TagTable,
    graph: &TagGraph,
    comments: &[String],
) -> Result<()> {
    writeln!(
        w,
        "{SNAPSHOT_MAGIC} v1 {} {}",
        graph.node_count(),
        graph.edge_count()
    )?;
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    for (i, j) in graph.edges() {
        writeln!(w, "{i} {j}")?;
    }
    for (id, tag) in table.iter() {
        writeln!(w, "{id}\t{tag}")?;
    }
    Ok(())
}

pub fn read_snapshot<R: BufRead>(r: &mut R) -> Result<(TagTable, TagGraph)> {
    let bad = |msg: &str| Error::Snapshot(msg.to_owned());
    let mut header = String::new();
    r.read_line(&mut header)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != SNAPSHOT_MAGIC || parts[1] != "v1" {
        return Err(bad("expected header `tagnet-graph v1 N M`"));
    }
    let n: usize = parts[2].parse().map_err(|_| bad("bad node count"))?;
    let m: usize = parts[3].parse().map_err(|_| bad("bad edge count"))?;

    let mut edges = Vec::with_capacity(m);
    let mut tags: Vec<Option<String>> = vec![None; n];
    let mut seen_tags = 0usize;
    for line in r.lines() {
        let line = line?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((id_str, tag)) = line.split_once('\t') {
            let id: usize = id_str.parse().map_err(|_| bad("bad tag id"))?;
            if id >= n {
                return Err(bad("tag id out of range"));
            }
            if tags[id].replace(tag.to_owned()).is_some() {
                return Err(bad("duplicate tag id"));
            }
            seen_tags += 1;
        } else {
            let (a, b) = line
                .split_once(' ')
                .ok_or_else(|| bad("bad edge line"))?;
            let a: NodeId = a.parse().map_err(|_| bad("bad edge endpoint"))?;
            let b: NodeId = b.parse().map_err(|_| bad("bad edge endpoint"))?;
            if a as usize >= n || b as usize >= n || a >= b {
                return Err(bad("edge endpoints out of range or unordered"));
            }
            edges.push((a, b));
        }
    }
    if edges.len() != m {
        return Err(bad("edge count mismatch"));
    }
    if seen_tags != n {
        return Err(bad("tag table incomplete"));
    }
    let mut table = TagTable::new();
    for t in tags {
        table.intern(&t.unwrap());
    }
    Ok((table, TagGraph::from_edges(n, edges)))
}
