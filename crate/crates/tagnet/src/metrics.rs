//! Degree distribution with CCDF and log-log power-law fit, clustering
//! coefficient, and BFS average path length.
//!
//! Everything numeric is generic over the float scalar `F` (f32/f64 via
//! `num-traits`); counts stay in integer arithmetic until the final
//! division so exact results do not depend on the scalar choice.

use num_traits::{Float, FromPrimitive};
use rand::SeedableRng;
use rayon::prelude::*;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{NodeId, TagGraph};

fn fl<F: Float + FromPrimitive>(x: usize) -> F {
    F::from_usize(x).expect("count fits in float")
}

fn fl64<F: Float + FromPrimitive>(x: u64) -> F {
    F::from_u64(x).expect("count fits in float")
}

/// One row of the degree histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreePoint<F> {
    pub k: usize,
    pub count: usize,
    /// P(k) = n_k / N
    pub p: F,
    /// CCDF(k) = P(K >= k)
    pub ccdf: F,
}

/// Exact degree histogram over all nodes, degree-0 nodes included.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution<F> {
    /// `(k, n_k)` for observed degrees, ascending in `k`.
    counts: Vec<(usize, usize)>,
    node_count: usize,
    _marker: std::marker::PhantomData<F>,
}

impl<F: Float + FromPrimitive> DegreeDistribution<F> {
    pub fn from_degrees(degrees: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut hist = std::collections::BTreeMap::new();
        let mut n = 0usize;
        for d in degrees {
            *hist.entry(d).or_insert(0usize) += 1;
            n += 1;
        }
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok(Self {
            counts: hist.into_iter().collect(),
            node_count: n,
            _marker: std::marker::PhantomData,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts
            .binary_search_by_key(&k, |&(d, _)| d)
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    pub fn probability(&self, k: usize) -> F {
        fl::<F>(self.count(k)) / fl(self.node_count)
    }

    /// Histogram rows ascending in `k`, with P(k) and CCDF(k) filled in.
    /// CCDF at the smallest observed degree is 1 by construction.
    pub fn points(&self) -> Vec<DegreePoint<F>> {
        let n = fl::<F>(self.node_count);
        let mut out: Vec<DegreePoint<F>> = Vec::with_capacity(self.counts.len());
        let mut tail = 0usize;
        for &(k, c) in self.counts.iter().rev() {
            tail += c;
            out.push(DegreePoint { k, count: c, p: fl::<F>(c) / n, ccdf: fl::<F>(tail) / n });
        }
        out.reverse();
        out
    }
}

pub fn degree_distribution<F: Float + FromPrimitive>(
    graph: &TagGraph,
) -> Result<DegreeDistribution<F>> {
    DegreeDistribution::from_degrees(
        (0..graph.node_count() as NodeId).map(|i| graph.neighbors(i).len()),
    )
}

/// Least-squares line on (log10 k, log10 P(k)); gamma is the negated slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit<F> {
    pub gamma: F,
    /// Signed Pearson correlation of the fitted point set; a clean decaying
    /// power law gives r close to -1.
    pub r: F,
    pub k_min: usize,
    pub points_used: usize,
    /// Set when the point set had zero variance in log P(k) (flat fit);
    /// gamma and r are reported as 0.
    pub flat: bool,
}

fn fit_loglog<F: Float + FromPrimitive>(
    pts: &[(F, F)],
    k_min: usize,
) -> Result<PowerLawFit<F>> {
    if pts.len() < 3 {
        return Err(Error::FitDegenerate { points: pts.len() });
    }
    let n = fl::<F>(pts.len());
    let mut sx = F::zero();
    let mut sy = F::zero();
    for &(x, y) in pts {
        sx = sx + x;
        sy = sy + y;
    }
    let mx = sx / n;
    let my = sy / n;
    let mut sxx = F::zero();
    let mut syy = F::zero();
    let mut sxy = F::zero();
    for &(x, y) in pts {
        let dx = x - mx;
        let dy = y - my;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
        sxy = sxy + dx * dy;
    }
    if syy == F::zero() {
        return Ok(PowerLawFit {
            gamma: F::zero(),
            r: F::zero(),
            k_min,
            points_used: pts.len(),
            flat: true,
        });
    }
    let slope = sxy / sxx;
    let r = sxy / (sxx * syy).sqrt();
    Ok(PowerLawFit { gamma: -slope, r, k_min, points_used: pts.len(), flat: false })
}

/// Fits P(k) ~ k^(-gamma) by unbinned least squares on the raw histogram.
/// Only degrees with `n_k > 0` and `k >= max(k_min, 1)` enter the fit
/// (degree 0 cannot appear on log axes).
pub fn fit_power_law<F: Float + FromPrimitive>(
    dist: &DegreeDistribution<F>,
    k_min: usize,
) -> Result<PowerLawFit<F>> {
    let lo = k_min.max(1);
    let pts: Vec<(F, F)> = dist
        .points()
        .into_iter()
        .filter(|p| p.k >= lo && p.count > 0)
        .map(|p| (fl::<F>(p.k).log10(), p.p.log10()))
        .collect();
    fit_loglog(&pts, lo)
}

/// Same fit applied to the CCDF instead of P(k). For a pure power law with
/// exponent gamma the CCDF decays as k^-(gamma-1), so `gamma` here is the
/// CCDF's own exponent, not P(k)'s.
pub fn fit_power_law_ccdf<F: Float + FromPrimitive>(
    dist: &DegreeDistribution<F>,
    k_min: usize,
) -> Result<PowerLawFit<F>> {
    let lo = k_min.max(1);
    let pts: Vec<(F, F)> = dist
        .points()
        .into_iter()
        .filter(|p| p.k >= lo && p.count > 0 && p.ccdf > F::zero())
        .map(|p| (fl::<F>(p.k).log10(), p.ccdf.log10()))
        .collect();
    fit_loglog(&pts, lo)
}

/// Per-node clustering. `None` where the degree is below 2.
pub fn local_clustering<F: Float + FromPrimitive>(
    graph: &TagGraph,
    node: NodeId,
) -> Result<Option<F>> {
    if node as usize >= graph.node_count() {
        return Err(Error::NodeOutOfRange(node as usize, graph.node_count()));
    }
    Ok(local_clustering_unchecked(graph, node))
}

fn local_clustering_unchecked<F: Float + FromPrimitive>(
    graph: &TagGraph,
    node: NodeId,
) -> Option<F> {
    let adj = graph.neighbors(node);
    let k = adj.len();
    if k < 2 {
        return None;
    }
    // E_i via sorted-list intersection with each neighbor's adjacency;
    // every triangle edge is seen from both endpoints, hence the halving.
    let mut twice_edges = 0usize;
    for &u in adj {
        twice_edges += sorted_intersection_len(adj, graph.neighbors(u));
    }
    let e_i = twice_edges / 2;
    Some(fl::<F>(2 * e_i) / (fl::<F>(k) * fl::<F>(k - 1)))
}

fn sorted_intersection_len(a: &[NodeId], b: &[NodeId]) -> usize {
    let mut i = 0;
    let mut j = 0;
    let mut n = 0;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// How nodes with degree < 2 enter the network average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClusteringConvention {
    /// Average over nodes where C_i is defined (k_i >= 2).
    #[default]
    ExcludeUndefined,
    /// Treat undefined nodes as C_i = 0 and average over all nodes.
    CountAsZero,
}

#[derive(Debug, Clone)]
pub struct ClusteringResult<F> {
    pub average: F,
    pub per_node: Vec<Option<F>>,
    pub defined_nodes: usize,
    pub undefined_nodes: usize,
    pub convention: ClusteringConvention,
}

pub fn average_clustering<F: Float + FromPrimitive + Send + Sync>(
    graph: &TagGraph,
) -> Result<ClusteringResult<F>> {
    average_clustering_with(graph, ClusteringConvention::ExcludeUndefined)
}

pub fn average_clustering_with<F: Float + FromPrimitive + Send + Sync>(
    graph: &TagGraph,
    convention: ClusteringConvention,
) -> Result<ClusteringResult<F>> {
    let n = graph.node_count();
    let per_node: Vec<Option<F>> = (0..n as NodeId)
        .into_par_iter()
        .map(|i| local_clustering_unchecked(graph, i))
        .collect();
    let defined = per_node.iter().filter(|c| c.is_some()).count();
    if defined == 0 {
        return Err(Error::ClusteringUndefined);
    }
    // fixed-order reduction for run-to-run identical sums
    let sum = per_node
        .iter()
        .flatten()
        .fold(F::zero(), |acc, &c| acc + c);
    let denom = match convention {
        ClusteringConvention::ExcludeUndefined => defined,
        ClusteringConvention::CountAsZero => n,
    };
    Ok(ClusteringResult {
        average: sum / fl(denom),
        per_node,
        defined_nodes: defined,
        undefined_nodes: n - defined,
        convention,
    })
}

/// Exact runs one BFS per source node; sampled draws distinct sources with
/// a seeded generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AplMode {
    Exact,
    Sampled { sources: usize, seed: u64 },
}

/// Which pairs enter the average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathScope {
    /// All connected pairs across every component.
    #[default]
    AllComponents,
    /// Pairs within the largest connected component only.
    LargestComponent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathLengthResult<F> {
    pub l: F,
    /// Unordered connected pairs in exact mode; (source, target) pairs in
    /// sampled mode.
    pub pairs_counted: u64,
    pub mode: AplMode,
    pub scope: PathScope,
    pub standard_error: Option<F>,
}

/// Sum of BFS distances from `source` and the number of reached targets.
fn bfs_sum(graph: &TagGraph, source: NodeId, dist: &mut [u32], queue: &mut VecDeque<NodeId>) -> (u64, u64) {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source as usize] = 0;
    queue.push_back(source);
    let mut sum = 0u64;
    let mut reached = 0u64;
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &v in graph.neighbors(u) {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = du + 1;
                sum += (du + 1) as u64;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    (sum, reached)
}

pub fn average_path_length<F: Float + FromPrimitive + Send + Sync>(
    graph: &TagGraph,
    mode: AplMode,
) -> Result<PathLengthResult<F>> {
    average_path_length_in(graph, mode, PathScope::AllComponents)
}

pub fn average_path_length_in<F: Float + FromPrimitive + Send + Sync>(
    graph: &TagGraph,
    mode: AplMode,
    scope: PathScope,
) -> Result<PathLengthResult<F>> {
    if graph.edge_count() == 0 {
        return Err(Error::NoConnectedPairs);
    }
    let n = graph.node_count();
    let sources: Vec<NodeId> = {
        let all: Vec<NodeId> = match scope {
            PathScope::AllComponents => (0..n as NodeId).collect(),
            PathScope::LargestComponent => {
                let comps = graph.connected_components();
                (0..n as NodeId).filter(|&i| comps.in_largest(i)).collect()
            }
        };
        match mode {
            AplMode::Exact => all,
            AplMode::Sampled { sources, seed } => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let take = sources.min(all.len());
                let idx = rand::seq::index::sample(&mut rng, all.len(), take);
                idx.into_iter().map(|i| all[i]).collect()
            }
        }
    };

    // per-source results collected in source order, then reduced
    // sequentially so the result is independent of worker count
    let per_source: Vec<(u64, u64)> = sources
        .par_iter()
        .map_init(
            || (vec![0u32; n], VecDeque::new()),
            |(dist, queue), &s| bfs_sum(graph, s, dist, queue),
        )
        .collect();

    let total_sum: u64 = per_source.iter().map(|&(s, _)| s).sum();
    let total_pairs: u64 = per_source.iter().map(|&(_, c)| c).sum();
    if total_pairs == 0 {
        return Err(Error::NoConnectedPairs);
    }

    match mode {
        AplMode::Exact => Ok(PathLengthResult {
            // each unordered pair was counted from both endpoints
            l: fl64::<F>(total_sum) / fl64(total_pairs),
            pairs_counted: total_pairs / 2,
            mode,
            scope,
            standard_error: None,
        }),
        AplMode::Sampled { .. } => {
            let means: Vec<F> = per_source
                .iter()
                .filter(|&&(_, c)| c > 0)
                .map(|&(s, c)| fl64::<F>(s) / fl64(c))
                .collect();
            let k = fl::<F>(means.len());
            let mean_of_means = means.iter().fold(F::zero(), |a, &m| a + m) / k;
            let var = means
                .iter()
                .fold(F::zero(), |a, &m| a + (m - mean_of_means) * (m - mean_of_means))
                / (k - F::one()).max(F::one());
            Ok(PathLengthResult {
                l: fl64::<F>(total_sum) / fl64(total_pairs),
                pairs_counted: total_pairs,
                mode,
                scope,
                standard_error: Some((var / k).sqrt()),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TagGraph;

    fn k4() -> TagGraph {
        TagGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn histogram_and_ccdf() {
        // degrees {1,1,2,3}: path 0-1-2 plus 3-1? build explicit: star-ish
        let g = TagGraph::from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)]);
        // degrees: 0->1, 1->3, 2->2, 3->2 ... adjust to the spec's set
        let d = DegreeDistribution::<f64>::from_degrees([1usize, 1, 2, 3]).unwrap();
        assert_eq!(d.probability(1), 0.5);
        assert_eq!(d.probability(2), 0.25);
        assert_eq!(d.probability(3), 0.25);
        let pts = d.points();
        let ccdf = |k: usize| pts.iter().find(|p| p.k == k).unwrap().ccdf;
        assert_eq!(ccdf(1), 1.0);
        assert_eq!(ccdf(2), 0.5);
        assert_eq!(ccdf(3), 0.25);
        drop(g);

        let dk4 = degree_distribution::<f64>(&k4()).unwrap();
        assert_eq!(dk4.probability(3), 1.0);
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(DegreeDistribution::<f64>::from_degrees([]).is_err());
    }

    #[test]
    fn probabilities_sum_to_one() {
        let d = DegreeDistribution::<f64>::from_degrees([0usize, 0, 1, 1, 2, 5, 5, 5]).unwrap();
        let sum: f64 = d.points().iter().map(|p| p.p).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_fit_is_exact() {
        // P(k) = 0.5 k^-2 at k in {1,2,4}, exactly collinear in log-log
        let pts: Vec<(f64, f64)> = [1.0f64, 2.0, 4.0]
            .iter()
            .map(|&k| (k.log10(), (0.5 * k.powi(-2)).log10()))
            .collect();
        let fit = fit_loglog(&pts, 1).unwrap();
        assert!((fit.gamma - 2.0).abs() < 1e-9);
        assert!((fit.r + 1.0).abs() < 1e-12);
        assert!(!fit.flat);
    }

    #[test]
    fn flat_fit_flagged() {
        let pts: Vec<(f64, f64)> = [1.0f64, 2.0, 4.0]
            .iter()
            .map(|&k| (k.log10(), (0.25f64).log10()))
            .collect();
        let fit = fit_loglog(&pts, 1).unwrap();
        assert_eq!(fit.gamma, 0.0);
        assert_eq!(fit.r, 0.0);
        assert!(fit.flat);
    }

    #[test]
    fn fit_needs_three_points() {
        let d = DegreeDistribution::<f64>::from_degrees([1usize, 1, 2, 2]).unwrap();
        assert!(matches!(
            fit_power_law(&d, 1),
            Err(Error::FitDegenerate { points: 2 })
        ));
    }

    #[test]
    fn local_clustering_cases() {
        let tri = TagGraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]);
        assert_eq!(local_clustering::<f64>(&tri, 0).unwrap(), Some(1.0));

        let star = TagGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        assert_eq!(local_clustering::<f64>(&star, 0).unwrap(), Some(0.0));
        assert_eq!(local_clustering::<f64>(&star, 1).unwrap(), None);

        let g = TagGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)]);
        let c: f64 = local_clustering(&g, 0).unwrap().unwrap();
        assert!((c - 1.0 / 3.0).abs() < 1e-12);

        assert!(local_clustering::<f64>(&tri, 9).is_err());
    }

    #[test]
    fn average_clustering_cases() {
        let tri = TagGraph::from_edges(3, [(0, 1), (0, 2), (1, 2)]);
        assert_eq!(average_clustering::<f64>(&tri).unwrap().average, 1.0);

        let path = TagGraph::from_edges(3, [(0, 1), (1, 2)]);
        let r = average_clustering::<f64>(&path).unwrap();
        assert_eq!(r.average, 0.0);
        assert_eq!(r.defined_nodes, 1);
        assert_eq!(r.undefined_nodes, 2);

        let lonely = TagGraph::from_edges(2, [(0, 1)]);
        assert!(average_clustering::<f64>(&lonely).is_err());
    }

    #[test]
    fn count_as_zero_convention() {
        // triangle plus a pendant: C = (1+1+1/3? ) compute explicitly
        let g = TagGraph::from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)]);
        let excl = average_clustering_with::<f64>(&g, ClusteringConvention::ExcludeUndefined)
            .unwrap();
        let zero = average_clustering_with::<f64>(&g, ClusteringConvention::CountAsZero).unwrap();
        assert!(excl.average > zero.average);
        assert!((zero.average * 4.0 - excl.average * 3.0).abs() < 1e-12);
    }

    #[test]
    fn apl_cases() {
        let path = TagGraph::from_edges(3, [(0, 1), (1, 2)]);
        let r = average_path_length::<f64>(&path, AplMode::Exact).unwrap();
        assert!((r.l - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.pairs_counted, 3);

        let r = average_path_length::<f64>(&k4(), AplMode::Exact).unwrap();
        assert_eq!(r.l, 1.0);

        let two = TagGraph::from_edges(4, [(0, 1), (2, 3)]);
        let r = average_path_length::<f64>(&two, AplMode::Exact).unwrap();
        assert_eq!(r.l, 1.0);
        assert_eq!(r.pairs_counted, 2);

        let none = TagGraph::from_edges(3, []);
        assert!(average_path_length::<f64>(&none, AplMode::Exact).is_err());
    }

    #[test]
    fn sampled_all_sources_matches_exact_on_connected() {
        let g = TagGraph::from_edges(
            6,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)],
        );
        let exact = average_path_length::<f64>(&g, AplMode::Exact).unwrap();
        let sampled =
            average_path_length::<f64>(&g, AplMode::Sampled { sources: 6, seed: 1 }).unwrap();
        assert!((exact.l - sampled.l).abs() < 1e-12);
        assert!(sampled.standard_error.is_some());
    }

    #[test]
    fn lcc_scope_restricts_pairs() {
        // triangle plus disjoint edge
        let g = TagGraph::from_edges(5, [(0, 1), (0, 2), (1, 2), (3, 4)]);
        let all = average_path_length_in::<f64>(&g, AplMode::Exact, PathScope::AllComponents)
            .unwrap();
        let lcc = average_path_length_in::<f64>(&g, AplMode::Exact, PathScope::LargestComponent)
            .unwrap();
        assert_eq!(all.pairs_counted, 4);
        assert_eq!(lcc.pairs_counted, 3);
        assert_eq!(lcc.l, 1.0);
    }
}
