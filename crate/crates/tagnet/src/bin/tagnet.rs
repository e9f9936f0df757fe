//! Command-line front end: build a tag co-occurrence graph from records,
//! analyze it, generate synthetic test graphs, or pretty-print a summary.
//!
//! Exit codes: 0 success (including degenerate-graph warnings), 1 usage,
//! 2 input parse failure, 3 internal invariant violation.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tagnet::diagnostics::{AnalysisOptions, Thresholds};
use tagnet::graph::{self, TagGraph, TagTable};
use tagnet::ingest::{self, NormalizationPolicy};
use tagnet::metrics::{AplMode, ClusteringConvention, PathScope};
use tagnet::numfmt::sig6;
use tagnet::synth::{self, GeneratorSpec};
use tagnet::{Error, ItemTagSets};

/// Exact APL above this node count would be slow; default to sampling.
const EXACT_APL_MAX_NODES: usize = 20_000;
const DEFAULT_SAMPLE_SOURCES: usize = 1000;

#[derive(Parser)]
#[command(name = "tagnet", version, about = "Tag co-occurrence network diagnostics")]
struct Cli {
    /// Cap the worker thread count (1 reproduces parallel results exactly).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse records, aggregate per URL and write a graph snapshot.
    Build(BuildArgs),
    /// Compute metrics, baselines and verdicts; emit summary + TSVs.
    Analyze(AnalyzeArgs),
    /// Generate a seeded synthetic graph snapshot (er / ws / ba).
    Synth(SynthArgs),
    /// Render a previously written summary JSON as a text report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RecordFormat {
    Jsonl,
    Csv,
    Rss,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Jsonl,
    Csv,
    Rss,
    Snapshot,
}

#[derive(Args)]
struct NormFlags {
    /// Keep tag case instead of lowercasing.
    #[arg(long)]
    no_case_fold: bool,
    /// Keep surrounding whitespace on tags.
    #[arg(long)]
    no_trim: bool,
    /// Keep tags that are empty after trimming.
    #[arg(long)]
    keep_empty: bool,
}

impl NormFlags {
    fn policy(&self) -> NormalizationPolicy {
        NormalizationPolicy {
            case_fold: !self.no_case_fold,
            trim_whitespace: !self.no_trim,
            drop_empty: !self.keep_empty,
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    /// Input file of tagged-bookmark records.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short, value_enum)]
    format: RecordFormat,
    /// Snapshot file to write.
    #[arg(long, short)]
    output: PathBuf,
    /// Flag items whose tag set exceeds this size.
    #[arg(long, default_value_t = graph::DEFAULT_CLIQUE_WARN)]
    clique_warn: usize,
    #[command(flatten)]
    norm: NormFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum AplFlag {
    /// Exact when the graph is small, sampled above that.
    Auto,
    Exact,
    Sampled,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short, value_enum)]
    format: InputFormat,
    /// Output directory (overridable via TAGNET_OUT_DIR).
    #[arg(long, short, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = AplFlag::Auto)]
    apl: AplFlag,
    /// BFS sources in sampled mode.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SOURCES)]
    sources: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Average path length over the largest component only.
    #[arg(long)]
    lcc_only: bool,
    /// Count nodes with degree < 2 as clustering 0 instead of skipping them.
    #[arg(long)]
    clustering_zero: bool,
    /// Smallest degree included in the power-law fit.
    #[arg(long, default_value_t = 1)]
    k_min: usize,
    /// Rows in the top-degree table.
    #[arg(long, default_value_t = 20)]
    top: usize,
    #[arg(long, default_value_t = 2.0)]
    max_l_ratio: f64,
    #[arg(long, default_value_t = 10.0)]
    min_c_ratio: f64,
    #[arg(long, default_value_t = 0.9)]
    min_abs_r: f64,
    #[command(flatten)]
    norm: NormFlags,
}

#[derive(Args)]
struct SynthArgs {
    #[command(subcommand)]
    model: SynthModel,
}

#[derive(Subcommand)]
enum SynthModel {
    /// Erdős–Rényi G(n, p).
    Er {
        n: usize,
        p: f64,
        #[command(flatten)]
        common: SynthCommon,
    },
    /// Watts–Strogatz ring with rewiring.
    Ws {
        n: usize,
        k_ring: usize,
        beta: f64,
        #[command(flatten)]
        common: SynthCommon,
    },
    /// Barabási–Albert preferential attachment.
    Ba {
        n: usize,
        m: usize,
        #[command(flatten)]
        common: SynthCommon,
    },
}

#[derive(Args)]
struct SynthCommon {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Snapshot file to write (stdout if omitted).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the graph as JSONL 2-tag items for the ingest path.
    #[arg(long)]
    emit_items: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// summary.json produced by `analyze`.
    #[arg(long, short)]
    summary: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/usage text
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let result = match cli.command {
        Command::Build(args) => run_build(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Synth(args) => run_synth(args),
        Command::Report(args) => run_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::Xml(_) | Error::Snapshot(_) | Error::Io(_) => 2,
                Error::InvalidGenerator(_) => 1,
                _ => 3,
            })
        }
    }
}

struct Ingested {
    items: ItemTagSets,
    records: usize,
    skipped: usize,
}

fn read_records(path: &Path, format: RecordFormat, policy: &NormalizationPolicy) -> Result<Ingested, Error> {
    let (records, skipped) = match format {
        RecordFormat::Jsonl => (ingest::read_jsonl(BufReader::new(File::open(path)?))?, 0),
        RecordFormat::Csv => (ingest::read_csv(File::open(path)?)?, 0),
        RecordFormat::Rss => {
            let mut doc = String::new();
            File::open(path)?.read_to_string(&mut doc)?;
            let parsed = ingest::parse_delicious_rss(&doc)?;
            (parsed.records, parsed.skipped_items)
        }
    };
    let n = records.len();
    Ok(Ingested {
        items: ingest::aggregate_by_url(records, policy),
        records: n,
        skipped,
    })
}

fn run_build(args: BuildArgs) -> Result<(), Error> {
    let policy = args.norm.policy();
    let ing = read_records(&args.input, args.format, &policy)?;
    let (table, g, stats) = graph::build_cooccurrence_graph_with(&ing.items, args.clique_warn);

    let comments = vec![format!(
        "source records={} urls={} tags={} skipped_items={}",
        ing.records,
        ing.items.len(),
        table.len(),
        ing.skipped
    )];
    let mut w = BufWriter::new(File::create(&args.output)?);
    graph::write_snapshot(&mut w, &table, &g, &comments)?;
    w.flush()?;

    println!("records read: {}", ing.records);
    println!("distinct urls: {}", ing.items.len());
    println!("distinct tags: {}", table.len());
    println!("edges: {}", g.edge_count());
    let mut warnings = 0;
    if ing.records == 0 {
        eprintln!("warning: input contained no records");
        warnings += 1;
    }
    if ing.skipped > 0 {
        eprintln!("warning: {} items skipped (missing link)", ing.skipped);
        warnings += 1;
    }
    if stats.oversized_items > 0 {
        eprintln!(
            "warning: {} items exceeded the clique threshold of {} tags (largest: {})",
            stats.oversized_items, args.clique_warn, stats.max_item_tags
        );
        warnings += 1;
    }
    println!("warnings: {warnings}");
    println!("snapshot written: {}", args.output.display());
    Ok(())
}

fn load_graph(args: &AnalyzeArgs) -> Result<(TagTable, TagGraph), Error> {
    match args.format {
        InputFormat::Snapshot => {
            graph::read_snapshot(&mut BufReader::new(File::open(&args.input)?))
        }
        InputFormat::Jsonl | InputFormat::Csv | InputFormat::Rss => {
            let fmt = match args.format {
                InputFormat::Jsonl => RecordFormat::Jsonl,
                InputFormat::Csv => RecordFormat::Csv,
                _ => RecordFormat::Rss,
            };
            let ing = read_records(&args.input, fmt, &args.norm.policy())?;
            Ok(graph::build_cooccurrence_graph(&ing.items))
        }
    }
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), Error> {
    let (table, g) = load_graph(&args)?;

    let apl_mode = match args.apl {
        AplFlag::Exact => AplMode::Exact,
        AplFlag::Sampled => AplMode::Sampled { sources: args.sources, seed: args.seed },
        AplFlag::Auto if g.node_count() <= EXACT_APL_MAX_NODES => AplMode::Exact,
        AplFlag::Auto => AplMode::Sampled { sources: args.sources, seed: args.seed },
    };
    let opts = AnalysisOptions::<f64> {
        apl_mode,
        path_scope: if args.lcc_only { PathScope::LargestComponent } else { PathScope::AllComponents },
        clustering_convention: if args.clustering_zero {
            ClusteringConvention::CountAsZero
        } else {
            ClusteringConvention::ExcludeUndefined
        },
        k_min: args.k_min,
        thresholds: Thresholds {
            max_l_ratio: args.max_l_ratio,
            min_c_ratio: args.min_c_ratio,
            min_abs_r: args.min_abs_r,
        },
        top_k: args.top,
    };
    let summary = tagnet::diagnostics::network_summary(&g, &table, &opts);

    let out_dir = std::env::var_os("TAGNET_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or(args.out_dir);
    std::fs::create_dir_all(&out_dir)?;

    std::fs::write(out_dir.join("summary.json"), summary.to_json())?;

    let points = tagnet::metrics::degree_distribution::<f64>(&g)
        .map(|d| d.points())
        .unwrap_or_default();
    let mut hist = String::from("k\tcount\tP(k)\tCCDF(k)\n");
    let mut ccdf = String::from("k\tCCDF(k)\n");
    for p in &points {
        hist.push_str(&format!("{}\t{}\t{}\t{}\n", p.k, p.count, sig6(p.p), sig6(p.ccdf)));
        ccdf.push_str(&format!("{}\t{}\n", p.k, sig6(p.ccdf)));
    }
    std::fs::write(out_dir.join("degree.tsv"), hist)?;
    std::fs::write(out_dir.join("ccdf.tsv"), ccdf)?;
    std::fs::write(out_dir.join("plot.gnu"), PLOT_SCRIPT)?;

    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    println!("n: {}  m: {}  <k>: {}", summary.n, summary.m, sig6(summary.avg_degree));
    if let Some(c) = summary.clustering {
        println!("clustering: {}", sig6(c));
    }
    if let Some(p) = &summary.path_length {
        println!("path length: {} over {} pairs", sig6(p.l), p.pairs_counted);
    }
    if let Some(v) = summary.verdict.small_world {
        println!("small world: {}", v.small_world);
    }
    if let Some(v) = summary.verdict.scale_free {
        println!("scale free: {} (gamma {}, |r| {})", v.scale_free, sig6(v.gamma), sig6(v.abs_r));
    }
    println!("outputs in {}", out_dir.display());
    Ok(())
}

// log-log degree distribution and CCDF, one point per observed degree
const PLOT_SCRIPT: &str = r#"set terminal pngcairo size 800,600
set logscale xy
set xlabel "k"
set datafile separator "\t"
set output "degree_distribution.png"
set ylabel "P(k)"
plot "degree.tsv" using (($1)>0?($1):1/0):3 with points pt 7 title "P(k)"
set output "ccdf.png"
set ylabel "CCDF(k)"
plot "ccdf.tsv" using (($1)>0?($1):1/0):2 with points pt 7 title "CCDF"
"#;

fn run_synth(args: SynthArgs) -> Result<(), Error> {
    let (spec, common) = match args.model {
        SynthModel::Er { n, p, common } => (GeneratorSpec::Er { n, p }, common),
        SynthModel::Ws { n, k_ring, beta, common } => {
            (GeneratorSpec::Ws { n, k_ring, beta }, common)
        }
        SynthModel::Ba { n, m, common } => (GeneratorSpec::Ba { n, m }, common),
    };
    let g = spec.generate(common.seed)?;
    let table = synth::numbered_tag_table(g.node_count());
    let comments = vec![format!(
        "model {} seed={} rng={}",
        spec.describe(),
        common.seed,
        synth::RNG_ALGORITHM
    )];
    match &common.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            graph::write_snapshot(&mut w, &table, &g, &comments)?;
            w.flush()?;
            println!("snapshot written: {} (N={}, M={})", path.display(), g.node_count(), g.edge_count());
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            graph::write_snapshot(&mut w, &table, &g, &comments)?;
            w.flush()?;
        }
    }
    if let Some(path) = &common.emit_items {
        let items = synth::to_item_tag_sets(&g, &table);
        let mut w = BufWriter::new(File::create(path)?);
        for (url, tags) in items.iter() {
            let tags: Vec<&str> = tags.iter().map(|t| t.as_str()).collect();
            writeln!(
                w,
                "{}",
                serde_json::json!({ "url": url, "tags": tags })
            )?;
        }
        w.flush()?;
        println!("items written: {}", path.display());
    }
    Ok(())
}

fn run_report(args: ReportArgs) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.summary)?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse { line: e.line(), msg: format!("bad summary JSON: {e}") })?;
    let num = |key: &str| v.get(key).and_then(|x| x.as_f64());
    let fmt = |x: Option<f64>| x.map(sig6).unwrap_or_else(|| "-".to_owned());

    println!("tag network summary");
    println!("  nodes:        {}", fmt(num("n")));
    println!("  edges:        {}", fmt(num("m")));
    println!("  <k>:          {}", fmt(num("avg_degree")));
    println!("  clustering:   {}", fmt(num("clustering")));
    let pl = v.pointer("/path_length/value").and_then(|x| x.as_f64());
    println!("  path length:  {}", fmt(pl));
    println!(
        "  ER baseline:  l_random {}  c_random {}",
        fmt(v.pointer("/baseline/l_random").and_then(|x| x.as_f64())),
        fmt(v.pointer("/baseline/c_random").and_then(|x| x.as_f64()))
    );
    println!(
        "  fit:          gamma {}  r {}",
        fmt(v.pointer("/fit/gamma").and_then(|x| x.as_f64())),
        fmt(v.pointer("/fit/r").and_then(|x| x.as_f64()))
    );
    let verdict = |key: &str| match v.pointer(&format!("/verdict/{key}")) {
        Some(serde_json::Value::Bool(b)) => b.to_string(),
        _ => "-".to_owned(),
    };
    println!("  small world:  {}", verdict("small_world"));
    println!("  scale free:   {}", verdict("scale_free"));
    if let Some(rows) = v.get("top_tags").and_then(|x| x.as_array()) {
        println!("  top tags:");
        for row in rows {
            if let (Some(d), Some(t)) = (
                row.get(0).and_then(|x| x.as_u64()),
                row.get(1).and_then(|x| x.as_str()),
            ) {
                println!("    {d:>8}  {t}");
            }
        }
    }
    Ok(())
}
