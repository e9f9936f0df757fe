//! Erdős–Rényi baselines, small-world / scale-free verdicts, top-degree
//! table and the summary document.

use num_traits::{Float, FromPrimitive};

use crate::error::{Error, Result};
use crate::graph::{NodeId, TagGraph, TagTable};
use crate::metrics::{AplMode, PathLengthResult, PathScope, PowerLawFit};
use crate::numfmt::sig6;

/// Expected path length and clustering of a random graph with the same
/// size and mean degree: l_random = ln N / ln <k>, C_random = <k> / N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErBaseline<F> {
    pub l_random: F,
    pub c_random: F,
}

pub fn er_baseline<F: Float + FromPrimitive>(n: usize, avg_degree: F) -> Result<ErBaseline<F>> {
    if n <= 1 || avg_degree <= F::one() {
        return Err(Error::BaselineUndefined {
            n,
            avg_degree: avg_degree.to_f64().unwrap_or(f64::NAN),
        });
    }
    let nf = F::from_usize(n).expect("n fits in float");
    Ok(ErBaseline {
        l_random: nf.ln() / avg_degree.ln(),
        c_random: avg_degree / nf,
    })
}

/// Cutoffs that operationalize "l close to l_random" and "C much larger
/// than C_random", plus the fit-quality bar for the scale-free call. The
/// verdicts always carry the thresholds they were judged against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds<F> {
    pub max_l_ratio: F,
    pub min_c_ratio: F,
    pub min_abs_r: F,
}

impl<F: Float> Default for Thresholds<F> {
    fn default() -> Self {
        Self {
            max_l_ratio: F::from(2.0).unwrap(),
            min_c_ratio: F::from(10.0).unwrap(),
            min_abs_r: F::from(0.9).unwrap(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorldVerdict<F> {
    pub small_world: bool,
    pub l_ratio: F,
    pub c_ratio: F,
}

pub fn small_world_verdict<F: Float>(
    l: F,
    clustering: F,
    baseline: &ErBaseline<F>,
    thresholds: &Thresholds<F>,
) -> SmallWorldVerdict<F> {
    let l_ratio = l / baseline.l_random;
    let c_ratio = clustering / baseline.c_random;
    SmallWorldVerdict {
        small_world: l_ratio <= thresholds.max_l_ratio && c_ratio >= thresholds.min_c_ratio,
        l_ratio,
        c_ratio,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFreeVerdict<F> {
    pub scale_free: bool,
    pub gamma: F,
    pub abs_r: F,
}

pub fn scale_free_verdict<F: Float>(
    fit: &PowerLawFit<F>,
    thresholds: &Thresholds<F>,
) -> ScaleFreeVerdict<F> {
    let abs_r = fit.r.abs();
    ScaleFreeVerdict {
        scale_free: !fit.flat && abs_r >= thresholds.min_abs_r && fit.gamma > F::zero(),
        gamma: fit.gamma,
        abs_r,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<F> {
    pub small_world: Option<SmallWorldVerdict<F>>,
    pub scale_free: Option<ScaleFreeVerdict<F>>,
    pub thresholds: Thresholds<F>,
}

/// Highest-degree tags, descending by degree with ties broken by tag
/// string ascending, truncated to `min(k, N)`.
pub fn top_k_degree(graph: &TagGraph, table: &TagTable, k: usize) -> Vec<(usize, String)> {
    let mut rows: Vec<(usize, String)> = (0..graph.node_count() as NodeId)
        .map(|i| (graph.neighbors(i).len(), table.lookup(i).to_owned()))
        .collect();
    rows.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    rows.truncate(k);
    rows
}

/// Everything the analysis reports for one network. Optional fields are
/// absent when the graph is too degenerate to compute them.
#[derive(Debug, Clone)]
pub struct NetworkSummary<F> {
    pub n: usize,
    pub m: usize,
    pub avg_degree: F,
    pub clustering: Option<F>,
    pub path_length: Option<PathLengthResult<F>>,
    pub baseline: Option<ErBaseline<F>>,
    pub fit: Option<PowerLawFit<F>>,
    pub fit_ccdf: Option<PowerLawFit<F>>,
    pub verdict: Verdict<F>,
    pub top_tags: Vec<(usize, String)>,
    pub isolated_nodes: usize,
    pub component_count: usize,
    pub largest_component: usize,
    /// Non-fatal conditions hit while assembling the summary.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions<F> {
    pub apl_mode: AplMode,
    pub path_scope: PathScope,
    pub clustering_convention: crate::metrics::ClusteringConvention,
    pub k_min: usize,
    pub thresholds: Thresholds<F>,
    pub top_k: usize,
}

impl<F: Float> Default for AnalysisOptions<F> {
    fn default() -> Self {
        Self {
            apl_mode: AplMode::Exact,
            path_scope: PathScope::default(),
            clustering_convention: Default::default(),
            k_min: 1,
            thresholds: Thresholds::default(),
            top_k: 20,
        }
    }
}

/// Runs the whole metrics pipeline over one graph. Degenerate graphs yield
/// a partial summary with warnings rather than an error.
pub fn network_summary<F: Float + FromPrimitive + Send + Sync>(
    graph: &TagGraph,
    table: &TagTable,
    opts: &AnalysisOptions<F>,
) -> NetworkSummary<F> {
    use crate::metrics;

    let n = graph.node_count();
    let m = graph.edge_count();
    let avg_degree = if n == 0 {
        F::zero()
    } else {
        F::from_usize(2 * m).unwrap() / F::from_usize(n).unwrap()
    };
    let comps = graph.connected_components();
    let mut warnings = Vec::new();

    let clustering = match metrics::average_clustering_with(graph, opts.clustering_convention) {
        Ok(c) => Some(c.average),
        Err(e) => {
            warnings.push(e.to_string());
            None
        }
    };
    let path_length = match metrics::average_path_length_in(graph, opts.apl_mode, opts.path_scope)
    {
        Ok(p) => Some(p),
        Err(e) => {
            warnings.push(e.to_string());
            None
        }
    };
    let dist = metrics::degree_distribution::<F>(graph).ok();
    let fit = dist.as_ref().and_then(|d| {
        metrics::fit_power_law(d, opts.k_min)
            .map_err(|e| warnings.push(e.to_string()))
            .ok()
    });
    let fit_ccdf = dist
        .as_ref()
        .and_then(|d| metrics::fit_power_law_ccdf(d, opts.k_min).ok());
    let baseline = match er_baseline(n, avg_degree) {
        Ok(b) => Some(b),
        Err(e) => {
            warnings.push(e.to_string());
            None
        }
    };

    let small_world = match (&baseline, clustering, &path_length) {
        (Some(b), Some(c), Some(p)) => Some(small_world_verdict(p.l, c, b, &opts.thresholds)),
        _ => None,
    };
    let scale_free = fit.as_ref().map(|f| scale_free_verdict(f, &opts.thresholds));

    NetworkSummary {
        n,
        m,
        avg_degree,
        clustering,
        path_length,
        baseline,
        fit,
        fit_ccdf,
        verdict: Verdict { small_world, scale_free, thresholds: opts.thresholds },
        top_tags: top_k_degree(graph, table, opts.top_k),
        isolated_nodes: graph.isolated_count(),
        component_count: comps.count(),
        largest_component: comps.largest_size(),
        warnings,
    }
}

fn json_f<F: Float>(v: Option<F>) -> String {
    match v {
        Some(x) => sig6(x.to_f64().unwrap_or(f64::NAN)),
        None => "null".to_owned(),
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

impl<F: Float> NetworkSummary<F> {
    /// Renders the fixed-key-order summary document. Floats carry 6
    /// significant digits; unavailable values are explicit nulls.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let mut push = |line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(format!("  \"n\": {},", self.n));
        push(format!("  \"m\": {},", self.m));
        push(format!("  \"avg_degree\": {},", json_f(Some(self.avg_degree))));
        push(format!("  \"clustering\": {},", json_f(self.clustering)));
        match &self.path_length {
            Some(p) => {
                let (mode, sources, seed) = match p.mode {
                    AplMode::Exact => ("exact", "null".to_owned(), "null".to_owned()),
                    AplMode::Sampled { sources, seed } => {
                        ("sampled", sources.to_string(), seed.to_string())
                    }
                };
                let scope = match p.scope {
                    PathScope::AllComponents => "all",
                    PathScope::LargestComponent => "lcc",
                };
                push(format!(
                    "  \"path_length\": {{\"value\": {}, \"mode\": \"{mode}\", \"pairs\": {}, \"scope\": \"{scope}\", \"sources\": {sources}, \"seed\": {seed}, \"standard_error\": {}}},",
                    json_f(Some(p.l)),
                    p.pairs_counted,
                    json_f(p.standard_error),
                ));
            }
            None => push("  \"path_length\": null,".to_owned()),
        }
        match &self.baseline {
            Some(b) => push(format!(
                "  \"baseline\": {{\"l_random\": {}, \"c_random\": {}}},",
                json_f(Some(b.l_random)),
                json_f(Some(b.c_random)),
            )),
            None => push("  \"baseline\": null,".to_owned()),
        }
        let fit_json = |f: &Option<PowerLawFit<F>>| match f {
            Some(f) => format!(
                "{{\"gamma\": {}, \"r\": {}, \"k_min\": {}, \"points_used\": {}, \"flat\": {}}}",
                json_f(Some(f.gamma)),
                json_f(Some(f.r)),
                f.k_min,
                f.points_used,
                f.flat,
            ),
            None => "null".to_owned(),
        };
        push(format!("  \"fit\": {},", fit_json(&self.fit)));
        push(format!("  \"fit_ccdf\": {},", fit_json(&self.fit_ccdf)));
        {
            let sw = self
                .verdict
                .small_world
                .map(|v| v.small_world.to_string())
                .unwrap_or_else(|| "null".to_owned());
            let sf = self
                .verdict
                .scale_free
                .map(|v| v.scale_free.to_string())
                .unwrap_or_else(|| "null".to_owned());
            let (lr, cr) = self
                .verdict
                .small_world
                .map(|v| (json_f(Some(v.l_ratio)), json_f(Some(v.c_ratio))))
                .unwrap_or_else(|| ("null".to_owned(), "null".to_owned()));
            let ar = self
                .verdict
                .scale_free
                .map(|v| json_f(Some(v.abs_r)))
                .unwrap_or_else(|| "null".to_owned());
            let t = &self.verdict.thresholds;
            push(format!(
                "  \"verdict\": {{\"small_world\": {sw}, \"scale_free\": {sf}, \"ratios\": {{\"l_ratio\": {lr}, \"c_ratio\": {cr}, \"abs_r\": {ar}}}, \"thresholds\": {{\"max_l_ratio\": {}, \"min_c_ratio\": {}, \"min_abs_r\": {}}}}},",
                json_f(Some(t.max_l_ratio)),
                json_f(Some(t.min_c_ratio)),
                json_f(Some(t.min_abs_r)),
            ));
        }
        {
            let rows: Vec<String> = self
                .top_tags
                .iter()
                .map(|(d, t)| format!("[{}, {}]", d, json_str(t)))
                .collect();
            push(format!("  \"top_tags\": [{}],", rows.join(", ")));
        }
        push(format!("  \"isolated_nodes\": {},", self.isolated_nodes));
        push(format!("  \"components\": {{\"count\": {}, \"largest\": {}}}", self.component_count, self.largest_component));
        out.push_str("}\n");
        out
    }
}
