//! Tag co-occurrence network analysis.
//!
//! Builds the undirected tag network of a folksonomy from tagged-bookmark
//! records (two tags are linked when they label the same URL) and computes
//! its diagnostics: degree distribution with CCDF and log-log power-law
//! fit, clustering coefficient, BFS average path length, Erdős–Rényi
//! baselines and the small-world / scale-free verdicts.
//!
//! Numeric code is generic over the float scalar through `num-traits`;
//! the `*64` / `*32` aliases below pick a concrete type.

pub mod diagnostics;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod numfmt;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{NodeId, TagGraph, TagTable};
pub use ingest::{ItemTagSets, NormalizationPolicy, PostRecord};
pub use metrics::{AplMode, PathScope};
pub use synth::GeneratorSpec;

pub type DegreeDistribution64 = metrics::DegreeDistribution<f64>;
pub type PowerLawFit64 = metrics::PowerLawFit<f64>;
pub type ClusteringResult64 = metrics::ClusteringResult<f64>;
pub type PathLengthResult64 = metrics::PathLengthResult<f64>;
pub type ErBaseline64 = diagnostics::ErBaseline<f64>;
pub type Thresholds64 = diagnostics::Thresholds<f64>;
pub type NetworkSummary64 = diagnostics::NetworkSummary<f64>;
pub type AnalysisOptions64 = diagnostics::AnalysisOptions<f64>;

pub type DegreeDistribution32 = metrics::DegreeDistribution<f32>;
pub type PowerLawFit32 = metrics::PowerLawFit<f32>;
pub type NetworkSummary32 = diagnostics::NetworkSummary<f32>;
