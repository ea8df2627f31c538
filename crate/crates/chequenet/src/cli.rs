//! Command-line front end. Every report records the invocation that produced
//! it, and all outputs are byte-identical across runs with equal inputs.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chequenet_core::contagion::{
    resolve_seeds, run_cascade_indices, top_seeds_by_weighted_out_degree,
};
use chequenet_core::risk::{
    default_depth, loss_distribution, whatif_add_cheque, LossReading, Metric, RiskEngine,
    SamplingMode,
};
use chequenet_core::synth::{generate, GeneratorParams};
use chequenet_core::{BasisPoints, Cheque, CollateralNetwork, CustomerId};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::report::{self, StatsReport};
use crate::{dot, io, snapshot};

/// Directory for outputs when `--out` is not given. Without it, reports go to stdout.
pub const OUT_DIR_ENV: &str = "CHEQUENET_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "chequenet",
    version,
    about = "Contagion and systemic-risk analysis of cheques-as-collateral networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Aggregate a cheque CSV into a canonical JSON snapshot.
    Ingest(IngestArgs),
    /// Descriptive statistics and top-k listings.
    Stats(StatsArgs),
    /// Run one failure cascade.
    Cascade(CascadeArgs),
    /// Rank customers by a risk metric.
    Rank(RankArgs),
    /// Score a prospective cheque before accepting it as collateral.
    Whatif(WhatIfArgs),
    /// Loss distribution over independent customer failures.
    Distribution(DistributionArgs),
    /// Generate a synthetic cheque list.
    Generate(GenerateArgs),
    /// Write the network as DOT or as a JSON snapshot.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Cheque CSV, or a JSON snapshot when the extension is `.json`.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Output file. Defaults to a file under $CHEQUENET_OUT_DIR, else stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn parse_c_bp(s: &str) -> std::result::Result<BasisPoints, String> {
    let bp: u32 = s
        .parse()
        .map_err(|_| format!("`{s}` is not a whole number of basis points"))?;
    BasisPoints::new(bp).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct FractionArg {
    /// Failure fraction c in basis points (1..=10000).
    #[arg(long = "c-bp", value_parser = parse_c_bp, default_value = "5000")]
    pub c: BasisPoints,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub io: InputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Rows per top-k table.
    #[arg(long, default_value_t = 5)]
    pub top: usize,
    #[arg(long, value_enum, default_value_t = StatsFormat::Text)]
    pub format: StatsFormat,
    /// Betweenness on the undirected projection.
    #[arg(long)]
    pub undirected: bool,
    /// Print fractions instead of two-decimal percentages.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
#[group(id = "seed_choice", required = true, multiple = false, args = ["seeds", "seeds_top_wod"])]
pub struct CascadeArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub fraction: FractionArg,
    /// Comma-separated ids of the initially failing customers.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<String>,
    /// Seed with the m customers of largest weighted out-degree.
    #[arg(long = "seeds-top-wod", value_name = "M")]
    pub seeds_top_wod: Option<usize>,
    /// Stop after this many contagion stages.
    #[arg(long)]
    pub max_stages: Option<usize>,
    /// Write one DOT file per stage into this directory.
    #[arg(long, value_name = "DIR")]
    pub frames: Option<PathBuf>,
    /// Add unrounded fractions next to the percentages.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Uniform,
    Adjusted,
    Composite,
    Systemic,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Uniform => Metric::Uniform,
            MetricArg::Adjusted => Metric::Adjusted,
            MetricArg::Composite => Metric::Composite,
            MetricArg::Systemic => Metric::Systemic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossReadingArg {
    /// The full cascade loss seeded at the customer.
    Cascaded,
    /// Only the customer's own weighted out-degree.
    DirectOnly,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub fraction: FractionArg,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Recursion depth of the systemic score. Defaults to the diameter.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Loss term inside the composite score.
    #[arg(long, value_enum, default_value_t = LossReadingArg::Cascaded)]
    pub loss_reading: LossReadingArg,
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
pub struct WhatIfArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub fraction: FractionArg,
    #[arg(long)]
    pub issuer: String,
    #[arg(long)]
    pub recipient: String,
    #[arg(long, allow_negative_numbers = true)]
    pub value_cents: i64,
    #[arg(long, default_value = "whatif")]
    pub cheque_id: String,
    /// Recursion depth of the systemic score. Defaults to the diameter after the cheque is added.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Args)]
pub struct DistributionArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub fraction: FractionArg,
    /// CSV `customer_id,p` of independent failure probabilities.
    #[arg(long)]
    pub probabilities: PathBuf,
    /// Comma-separated candidate ids. Defaults to every customer in the probabilities file.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 100_000)]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// JSON file with generator parameters; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub funded: Option<usize>,
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub max_out_degree: Option<usize>,
    /// Cheques each funded customer issues to other funded customers.
    #[arg(long)]
    pub funded_out_degree: Option<usize>,
    #[arg(long)]
    pub max_cheques_per_edge: Option<usize>,
    #[arg(long)]
    pub value_min_cents: Option<u64>,
    #[arg(long)]
    pub value_max_cents: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cheque CSV destination.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the network snapshot here.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[arg(long, value_enum)]
    pub format: ExportFormat,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorConfig {
    node_count: Option<usize>,
    funded_count: Option<usize>,
    target_edge_count: Option<usize>,
    power_law_alpha: Option<f64>,
    max_out_degree: Option<usize>,
    funded_out_degree: Option<usize>,
    max_cheques_per_edge: Option<usize>,
    value_min_cents: Option<u64>,
    value_max_cents: Option<u64>,
    rng_seed: Option<u64>,
}

/// The command line as a single shell-quoted string, program name normalized.
pub fn invocation_line(args: &[String]) -> String {
    let mut parts = vec!["chequenet".to_string()];
    for a in args.iter().skip(1) {
        let plain = !a.is_empty()
            && a.chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_=.,/:+@%".contains(c));
        parts.push(if plain {
            a.clone()
        } else {
            format!("'{}'", a.replace('\'', "'\\''"))
        });
    }
    parts.join(" ")
}

fn write_output(explicit: Option<&Path>, default_name: &str, contents: &str) -> Result<()> {
    let target = match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(OUT_DIR_ENV).map(|dir| PathBuf::from(dir).join(default_name)),
    };
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| Error::io(parent.display().to_string(), e))?;
            }
            std::fs::write(&path, contents).map_err(|e| Error::io(path.display().to_string(), e))
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("stdout", e))
        }
    }
}

/// Parses and runs one command. `args[0]` is the program name.
pub fn run(args: Vec<String>) -> Result<()> {
    let cli = Cli::try_parse_from(&args).map_err(|e| Error::Usage(e.to_string()))?;
    execute(cli, &invocation_line(&args))
}

pub fn execute(cli: Cli, invocation: &str) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Stats(a) => stats(a, invocation),
        Command::Cascade(a) => cascade(a, invocation),
        Command::Rank(a) => rank(a, invocation),
        Command::Whatif(a) => whatif(a, invocation),
        Command::Distribution(a) => distribution(a, invocation),
        Command::Generate(a) => generate_cmd(a, invocation),
        Command::Export(a) => export(a),
    }
}

fn ingest(a: IngestArgs) -> Result<()> {
    let net = io::load_network(&a.io.input)?;
    eprintln!(
        "{} customers ({} funded), {} edges, total value {} EUR",
        net.node_count(),
        net.funded_count(),
        net.edge_count(),
        report::euros(net.total_value_cents())
    );
    write_output(
        a.io.out.as_deref(),
        "network.json",
        &snapshot::to_json(&net),
    )
}

fn stats(a: StatsArgs, invocation: &str) -> Result<()> {
    let net = io::load_network(&a.io.input)?;
    let report = StatsReport::build(&net, a.top, a.undirected)?;
    let (text, name) = match a.format {
        StatsFormat::Text => (report.to_text(invocation, a.raw), "stats.txt"),
        StatsFormat::Json => (
            report::json_text(&report.to_json(invocation, a.raw)),
            "stats.json",
        ),
    };
    write_output(a.io.out.as_deref(), name, &text)
}

fn cascade(a: CascadeArgs, invocation: &str) -> Result<()> {
    let net = io::load_network(&a.io.input)?;
    let seed_ids: BTreeSet<CustomerId> = match a.seeds_top_wod {
        Some(m) => top_seeds_by_weighted_out_degree(&net, m)?,
        None => a.seeds.iter().map(|s| CustomerId::from(s.trim())).collect(),
    };
    let seeds = resolve_seeds(&net, &seed_ids)?;
    let c = a.fraction.c;
    let result = run_cascade_indices(&net, c, &seeds, a.max_stages);
    if let Some(dir) = &a.frames {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        for stage in &result.stages {
            let path = dir.join(format!("stage_{:02}.dot", stage.k));
            std::fs::write(&path, dot::stage_dot(&net, &result, stage.k))
                .map_err(|e| Error::io(path.display().to_string(), e))?;
        }
    }
    eprintln!(
        "{} stages, {} failed, total loss {}%, adjusted loss {}%",
        result.stages.len(),
        result.failed_count(),
        report::pct2(result.total_uniform_loss()),
        report::pct2(result.adjusted_loss())
    );
    let json = report::cascade_json(&net, &result, &seeds, invocation, a.raw);
    write_output(
        a.io.out.as_deref(),
        "cascade.json",
        &report::json_text(&json),
    )
}

fn rank(a: RankArgs, invocation: &str) -> Result<()> {
    let net = io::load_network(&a.io.input)?;
    let reading = match a.loss_reading {
        LossReadingArg::Cascaded => LossReading::Cascaded,
        LossReadingArg::DirectOnly => LossReading::DirectOnly,
    };
    let metric = Metric::from(a.metric);
    let engine = RiskEngine::with_reading(&net, a.fraction.c, reading);
    let depth = a.depth.unwrap_or_else(|| default_depth(&net));
    let entries = engine.rank(metric, a.top, Some(depth))?;
    let mut settings = format!(
        "metric={} c_bp={}",
        report::metric_name(metric),
        a.fraction.c.get()
    );
    match metric {
        Metric::Systemic => settings.push_str(&format!(" depth={depth}")),
        Metric::Composite => {
            settings.push_str(&format!(" loss_reading={:?}", reading).to_lowercase())
        }
        _ => {}
    }
    let csv = report::rank_csv(&entries, &[invocation.to_string(), settings], a.raw);
    let name = format!("rank_{}.csv", report::metric_name(metric));
    write_output(a.io.out.as_deref(), &name, &csv)
}

fn whatif(a: WhatIfArgs, invocation: &str) -> Result<()> {
    let net = io::load_network(&a.io.input)?;
    let cheque = Cheque::new(
        a.cheque_id,
        a.issuer.as_str(),
        a.recipient.as_str(),
        a.value_cents,
    );
    let report = whatif_add_cheque(&net, a.fraction.c, &cheque, a.depth)?;
    let json = report::whatif_json(&report, invocation);
    write_output(
        a.io.out.as_deref(),
        "whatif.json",
        &report::json_text(&json),
    )
}

fn distribution(a: DistributionArgs, invocation: &str) -> Result<()> {
    let net = io::load_network(&a.io.input)?;
    let origin = a.probabilities.display().to_string();
    let probs = io::read_probabilities(io::read_file(&a.probabilities)?.as_bytes(), &origin)?;
    let candidates: BTreeSet<CustomerId> = if a.candidates.is_empty() {
        probs.keys().cloned().collect()
    } else {
        a.candidates
            .iter()
            .map(|s| CustomerId::from(s.trim()))
            .collect()
    };
    if candidates.is_empty() {
        return Err(Error::Usage("no candidate customers given".into()));
    }
    let mode = match a.mode {
        ModeArg::Exact => SamplingMode::Exact,
        ModeArg::MonteCarlo => SamplingMode::MonteCarlo {
            draws: a.draws,
            rng_seed: a.seed,
        },
    };
    let dist = loss_distribution(&net, a.fraction.c, &candidates, &probs, mode)?;
    let settings = format!(
        "c_bp={} candidates={}",
        a.fraction.c.get(),
        candidates.len()
    );
    let csv = report::distribution_csv(&dist, &[invocation.to_string(), settings], a.raw);
    write_output(a.io.out.as_deref(), "distribution.csv", &csv)
}

fn generator_params(a: &GenerateArgs) -> Result<GeneratorParams> {
    let config: GeneratorConfig = match &a.config {
        Some(path) => serde_json::from_str(&io::read_file(path)?).map_err(|e| Error::Format {
            origin: path.display().to_string(),
            message: e.to_string(),
        })?,
        None => GeneratorConfig::default(),
    };
    let base = GeneratorParams::table2(0);
    Ok(GeneratorParams {
        node_count: a.nodes.or(config.node_count).unwrap_or(base.node_count),
        funded_count: a
            .funded
            .or(config.funded_count)
            .unwrap_or(base.funded_count),
        target_edge_count: a
            .edges
            .or(config.target_edge_count)
            .unwrap_or(base.target_edge_count),
        power_law_alpha: a
            .alpha
            .or(config.power_law_alpha)
            .unwrap_or(base.power_law_alpha),
        max_out_degree: a
            .max_out_degree
            .or(config.max_out_degree)
            .unwrap_or(base.max_out_degree),
        funded_out_degree: a
            .funded_out_degree
            .or(config.funded_out_degree)
            .unwrap_or(base.funded_out_degree),
        max_cheques_per_edge: a
            .max_cheques_per_edge
            .or(config.max_cheques_per_edge)
            .unwrap_or(base.max_cheques_per_edge),
        value_min_cents: a
            .value_min_cents
            .or(config.value_min_cents)
            .unwrap_or(base.value_min_cents),
        value_max_cents: a
            .value_max_cents
            .or(config.value_max_cents)
            .unwrap_or(base.value_max_cents),
        rng_seed: a.seed.or(config.rng_seed).unwrap_or(base.rng_seed),
    })
}

fn generate_cmd(a: GenerateArgs, invocation: &str) -> Result<()> {
    let params = generator_params(&a)?;
    let generated = generate(&params)?;
    let mut buf = Vec::new();
    io::write_cheques(&mut buf, &generated.cheques)?;
    let p = &params;
    let header = format!(
        "# {invocation}\n# rng_seed={} node_count={} funded_count={} target_edge_count={} power_law_alpha={} \
         max_out_degree={} funded_out_degree={} max_cheques_per_edge={} value_min_cents={} value_max_cents={}\n",
        p.rng_seed,
        p.node_count,
        p.funded_count,
        p.target_edge_count,
        p.power_law_alpha,
        p.max_out_degree,
        p.funded_out_degree,
        p.max_cheques_per_edge,
        p.value_min_cents,
        p.value_max_cents
    );
    let csv = header + std::str::from_utf8(&buf).expect("csv output is utf-8");
    if let Some(path) = &a.snapshot {
        std::fs::write(path, snapshot::to_json(&generated.network))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    write_output(a.out.as_deref(), "cheques.csv", &csv)
}

fn export(a: ExportArgs) -> Result<()> {
    let net: CollateralNetwork = io::load_network(&a.io.input)?;
    match a.format {
        ExportFormat::Dot => {
            write_output(a.io.out.as_deref(), "network.dot", &dot::network_dot(&net))
        }
        ExportFormat::Json => write_output(
            a.io.out.as_deref(),
            "network.json",
            &snapshot::to_json(&net),
        ),
    }
}
