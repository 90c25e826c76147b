//! Command-line front end. Every subcommand loads its inputs, computes all
//! tables in memory, and only then writes them (plus `manifest.json`) into
//! `--out-dir`. Exit codes: 0 success, 2 input error, 1 internal error.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::bilayer::{
    build_bilayer, mismatch_report, monte_carlo_null, null_model_matrix,
    supremacy_pairs_with_threads, BilayerError, Marginals,
};
use crate::graph::{
    check_acyclicity, in_component, supremacy_all_with_threads, undirected_cycle_rank,
    weak_components, GraphError,
};
use crate::ingest::{
    export_generic_tsv, parse_generic_tsv, parse_ilinks_tsv, parse_pwn_database_with,
    GenericTsvBundle, IngestError, IngestReport, PwnOptions,
};
use crate::model::{
    InterlingualLink, LinkType, PartOfSpeech, RelationFilter, SupremacyConfig, WordnetGraph,
};
use crate::stats::{
    fit_exponential_scaling, fit_power_law, ilink_census, log_bin, log_bin_counts,
    polysemy_histogram, relation_census, supremacy_size_profile, synset_size_histogram,
    BinnedDistribution, StatsError, DEFAULT_COVERAGE,
};

#[derive(Debug, Parser)]
#[command(name = "wnnet", version, about = "Network statistics for wordnets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Synset-size, polysemy and relation-type censuses.
    Stats(StatsArgs),
    /// Weakly connected clusters and their size distribution.
    Components(ComponentsArgs),
    /// Per-synset supremacy, its distribution and fits.
    Supremacy(SupremacyArgs),
    /// Two wordnets joined by inter-lingual links: null model and mismatches.
    Bilayer(BilayerArgs),
    /// Export the in-component of one synset as generic TSV.
    Incomponent(IncomponentArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Stats(_) => "stats",
            Command::Components(_) => "components",
            Command::Supremacy(_) => "supremacy",
            Command::Bilayer(_) => "bilayer",
            Command::Incomponent(_) => "incomponent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Directory receiving the output tables and manifest.json.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Princeton WordNet database directory (data.noun, data.verb, ...).
    #[arg(long, value_name = "DIR", conflicts_with = "tsv")]
    pub pwn_dir: Option<PathBuf>,
    /// Generic TSV exchange files.
    #[arg(long, value_name = "SYNSETS,RELATIONS")]
    pub tsv: Option<String>,
    /// Language tag of the loaded wordnet.
    #[arg(long, default_value = "eng")]
    pub lang: String,
    /// Read instance pointers (@i, ~i) as hypernym/hyponym.
    #[arg(long)]
    pub fold_instance_hypernyms: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Restrict size and polysemy tables to one part of speech.
    #[arg(long)]
    pub pos: Option<String>,
    /// Inter-lingual links to include in a link-type census.
    #[arg(long, value_name = "FILE")]
    pub ilinks: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ComponentsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `all` or a comma-separated list of relation types.
    #[arg(long, default_value = "hypernym")]
    pub relations: String,
    #[arg(long, default_value_t = 5)]
    pub bins_per_decade: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SupremacyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fit a file of values (one per line) instead of computing supremacy.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["pwn_dir", "tsv"])]
    pub values: Option<PathBuf>,
    #[arg(long, default_value = "hypernym")]
    pub relations: String,
    /// Count the synset itself in its supremacy.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub include_self: bool,
    #[arg(long, default_value_t = 5)]
    pub bins_per_decade: u32,
    /// Smallest bin midpoint used by the power-law fit.
    #[arg(long, default_value_t = 1.0)]
    pub fit_smin: f64,
    /// Fraction of synsets the exponential-scaling fit must cover.
    #[arg(long, default_value_t = DEFAULT_COVERAGE)]
    pub coverage: f64,
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    #[arg(long, env = "WN_THREADS", default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginalsArg {
    /// Bin probabilities over all synsets of each layer.
    All,
    /// Bin probabilities over linked synsets only.
    Linked,
}

impl From<MarginalsArg> for Marginals {
    fn from(m: MarginalsArg) -> Self {
        match m {
            MarginalsArg::All => Marginals::AllSynsets,
            MarginalsArg::Linked => Marginals::LinkedOnly,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BilayerArgs {
    /// Layer A (link sources) as a Princeton database directory.
    #[arg(long, value_name = "DIR", conflicts_with = "a_tsv")]
    pub a_pwn_dir: Option<PathBuf>,
    /// Layer A as generic TSV files.
    #[arg(long, value_name = "SYNSETS,RELATIONS")]
    pub a_tsv: Option<String>,
    #[arg(long, default_value = "a")]
    pub a_lang: String,
    /// Layer B (link targets) as a Princeton database directory.
    #[arg(long, value_name = "DIR", conflicts_with = "b_tsv")]
    pub b_pwn_dir: Option<PathBuf>,
    /// Layer B as generic TSV files.
    #[arg(long, value_name = "SYNSETS,RELATIONS")]
    pub b_tsv: Option<String>,
    #[arg(long, default_value = "b")]
    pub b_lang: String,
    #[arg(long)]
    pub fold_instance_hypernyms: bool,
    /// Inter-lingual links (source in A, target in B).
    #[arg(long, value_name = "FILE")]
    pub ilinks: PathBuf,
    #[arg(long, default_value = "i_synonymy")]
    pub link_type: String,
    #[arg(long, default_value = "hypernym")]
    pub relations: String,
    #[arg(long, default_value_t = 5)]
    pub bins_per_decade: u32,
    #[arg(long, value_enum, default_value_t = MarginalsArg::All)]
    pub marginals: MarginalsArg,
    /// Minimum |log10(s_source / s_target)| reported as a mismatch.
    #[arg(long, default_value_t = 2.0)]
    pub threshold: f64,
    /// Randomized null-model trials; 0 skips the simulation.
    #[arg(long, default_value_t = 0)]
    pub mc_trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "WN_THREADS", default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IncomponentArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub synset: String,
    #[arg(long, default_value = "hypernym")]
    pub relations: String,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub include_self: bool,
    /// Directory receiving synsets.tsv, relations.tsv and manifest.json.
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad or unreadable input; exit code 2.
    Input(String),
    /// Failure inside the tool; exit code 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownSynset(_) => CliError::Input(e.to_string()),
            GraphError::ThreadPool(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<BilayerError> for CliError {
    fn from(e: BilayerError) -> Self {
        match e {
            BilayerError::Graph(g) => g.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn internal(context: &str) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Internal(format!("{context}: {e}"))
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    /// Undefined value, written as `NA` (CSV) or `null` (JSON).
    Missing,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

/// Rounds to 12 significant digits.
fn round12(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap_or(v)
}

/// Fixed-precision rendering: 12 significant digits, shortest form.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return "NA".to_string();
    }
    let r = round12(v);
    let a = r.abs();
    if r == 0.0 {
        "0".to_string()
    } else if (1e-6..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Missing => "NA".to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(round12(*v)),
            Cell::Float(_) | Cell::Missing => Json::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(name: &str, columns: &[&'static str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let fail = |e: csv::Error| CliError::Internal(format!("{}: {e}", self.name));
                w.write_record(&self.columns).map_err(fail)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(fail)?;
                }
                w.into_inner()
                    .map_err(|e| CliError::Internal(format!("{}: {e}", self.name)))
            }
            Format::Json => {
                let rows: Vec<Json> = self
                    .rows
                    .iter()
                    .map(|r| Json::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                let doc = json!({ "table": self.name, "columns": self.columns, "rows": rows });
                let mut bytes = serde_json::to_vec_pretty(&doc)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
        }
    }

    fn file_name(&self, format: Format) -> String {
        match format {
            Format::Csv => format!("{}.csv", self.name),
            Format::Json => format!("{}.json", self.name),
        }
    }
}

fn key_value_table(name: &str, pairs: Vec<(&str, Cell)>) -> Table {
    let mut t = Table::new(name, &["key", "value"]);
    for (k, v) in pairs {
        t.push(vec![k.into(), v]);
    }
    t
}

fn binned_table(name: &str, dist: &BinnedDistribution) -> Table {
    let mut t = Table::new(
        name,
        &["bin", "lower", "upper", "midpoint", "count", "density"],
    );
    for b in &dist.bins {
        t.push(vec![
            b.index.into(),
            b.lower.into(),
            b.upper.into(),
            b.midpoint().into(),
            b.count.into(),
            dist.density(b).into(),
        ]);
    }
    t
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
struct InputDigest {
    path: PathBuf,
    sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn digest_file(path: &Path) -> Result<InputDigest, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(InputDigest {
        path: path.to_path_buf(),
        sha256: sha256_hex(&bytes),
    })
}

struct Layer {
    graph: WordnetGraph,
    report: IngestReport,
}

fn split_tsv_pair(value: &str) -> Result<(PathBuf, PathBuf), CliError> {
    match value.split_once(',') {
        Some((s, r)) if !s.is_empty() && !r.is_empty() && !r.contains(',') => {
            Ok((PathBuf::from(s), PathBuf::from(r)))
        }
        _ => Err(CliError::Input(format!(
            "--tsv expects SYNSETS,RELATIONS, got {value:?}"
        ))),
    }
}

fn load_layer(
    pwn_dir: Option<&Path>,
    tsv: Option<&str>,
    lang: &str,
    fold_instance_hypernyms: bool,
    flag_prefix: &str,
    digests: &mut Vec<InputDigest>,
) -> Result<Layer, CliError> {
    match (pwn_dir, tsv) {
        (Some(dir), None) => {
            let options = PwnOptions {
                language_tag: lang.to_string(),
                fold_instance_hypernyms,
            };
            let loaded = parse_pwn_database_with(dir, &options)?;
            for name in ["data.noun", "data.verb", "data.adj", "data.adv"] {
                digests.push(digest_file(&dir.join(name))?);
            }
            Ok(Layer {
                graph: loaded.graph,
                report: loaded.report,
            })
        }
        (None, Some(value)) => {
            let (synsets, relations) = split_tsv_pair(value)?;
            let loaded = parse_generic_tsv(&GenericTsvBundle::new(lang, &synsets, &relations))?;
            digests.push(digest_file(&synsets)?);
            digests.push(digest_file(&relations)?);
            Ok(Layer {
                graph: loaded.graph,
                report: loaded.report,
            })
        }
        _ => Err(CliError::Input(format!(
            "exactly one of --{flag_prefix}pwn-dir or --{flag_prefix}tsv is required"
        ))),
    }
}

fn load_input(input: &InputArgs, digests: &mut Vec<InputDigest>) -> Result<Layer, CliError> {
    load_layer(
        input.pwn_dir.as_deref(),
        input.tsv.as_deref(),
        &input.lang,
        input.fold_instance_hypernyms,
        "",
        digests,
    )
}

fn load_links(
    path: &Path,
    digests: &mut Vec<InputDigest>,
) -> Result<(Vec<InterlingualLink>, usize), CliError> {
    let loaded = parse_ilinks_tsv(path)?;
    digests.push(digest_file(path)?);
    Ok((loaded.links, loaded.unknown_tags))
}

fn parse_relations(value: &str) -> Result<RelationFilter, CliError> {
    value.parse()
        .map_err(|e| CliError::Input(format!("--relations {value:?}: {e}")))
}

/// One value per line; blank lines and `#` comments are skipped.
fn read_values(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            CliError::Input(format!(
                "{}:{}: not a number: {line:?}",
                path.display(),
                i + 1
            ))
        })?;
        if !(v >= 1.0 && v.is_finite()) {
            return Err(CliError::Input(format!(
                "{}:{}: values must be finite and at least 1, got {v}",
                path.display(),
                i + 1
            )));
        }
        values.push(v);
    }
    Ok(values)
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

/// Computed output of one subcommand, not yet written.
struct Output {
    tables: Vec<Table>,
    inputs: Vec<InputDigest>,
    /// Subgraph to export as generic TSV instead of tables.
    export: Option<WordnetGraph>,
}

fn cmd_stats(args: &StatsArgs) -> Result<Output, CliError> {
    let mut inputs = Vec::new();
    let layer = load_input(&args.input, &mut inputs)?;
    let pos = args
        .pos
        .as_deref()
        .map(|p| {
            p.parse::<PartOfSpeech>()
                .map_err(|e| CliError::Input(format!("--pos {p:?}: {e}")))
        })
        .transpose()?;
    let links = args
        .ilinks
        .as_deref()
        .map(|p| load_links(p, &mut inputs))
        .transpose()?;
    let g = &layer.graph;

    let sizes = synset_size_histogram(g, pos);
    let polysemy = polysemy_histogram(g, pos);
    let senses: u64 = sizes.counts.iter().map(|(l, c)| l * c).sum();
    let mut tables = vec![key_value_table(
        "summary",
        vec![
            ("language", g.language_tag().into()),
            ("part_of_speech", sizes.key.clone().into()),
            ("synsets", sizes.total.into()),
            ("word_senses", senses.into()),
            ("lemmas", polysemy.total.into()),
            ("relation_edges", g.edge_count().into()),
            (
                "duplicate_edges_dropped",
                layer.report.duplicate_edges.into(),
            ),
            ("self_loops_dropped", layer.report.self_loops.into()),
        ],
    )];

    let mut t = Table::new("synset_sizes", &["size", "count"]);
    for (l, c) in &sizes.counts {
        t.push(vec![(*l).into(), (*c).into()]);
    }
    tables.push(t);

    let mut t = Table::new("polysemy", &["senses", "count"]);
    for (k, c) in &polysemy.counts {
        t.push(vec![(*k).into(), (*c).into()]);
    }
    tables.push(t);

    let mut t = Table::new("relation_census", &["type", "count"]);
    for (r, c) in relation_census(g) {
        t.push(vec![r.as_str().into(), c.into()]);
    }
    tables.push(t);

    if let Some((links, unknown)) = links {
        let mut t = Table::new("ilink_census", &["type", "count"]);
        for (k, c) in ilink_census(&links) {
            t.push(vec![k.as_str().into(), c.into()]);
        }
        if unknown > 0 {
            eprintln!("wnnet: {unknown} links with unrecognized type tags counted as other");
        }
        tables.push(t);
    }
    Ok(Output {
        tables,
        inputs,
        export: None,
    })
}

fn cmd_components(args: &ComponentsArgs) -> Result<Output, CliError> {
    let mut inputs = Vec::new();
    let layer = load_input(&args.input, &mut inputs)?;
    let filter = parse_relations(&args.relations)?;
    let g = &layer.graph;
    let report = weak_components(g, &filter);
    let acyclic = check_acyclicity(g, &filter);

    let mut tables = vec![key_value_table(
        "summary",
        vec![
            ("relations", filter.to_string().into()),
            ("synsets", report.node_count().into()),
            ("components", report.count().into()),
            ("largest", report.largest().into()),
            ("largest_share", report.largest_share().into()),
            ("acyclic", acyclic.acyclic.into()),
            (
                "undirected_cycle_rank",
                undirected_cycle_rank(g, &filter).into(),
            ),
        ],
    )];

    let sizes: Vec<u64> = report.component_sizes.iter().map(|&s| s as u64).collect();
    let mut hist = std::collections::BTreeMap::new();
    for &s in &sizes {
        *hist.entry(s).or_insert(0u64) += 1;
    }
    let mut t = Table::new("cluster_sizes", &["size", "count"]);
    for (s, c) in hist.iter().rev() {
        t.push(vec![(*s).into(), (*c).into()]);
    }
    tables.push(t);

    if !sizes.is_empty() {
        let dist = log_bin_counts(&sizes, args.bins_per_decade)?;
        tables.push(binned_table("cluster_size_distribution", &dist));
    }
    Ok(Output {
        tables,
        inputs,
        export: None,
    })
}

fn power_law_table(dist: &BinnedDistribution, s_min: f64) -> Table {
    let mut t = Table::new(
        "power_law_fit",
        &[
            "exponent",
            "intercept",
            "s_min",
            "s_max",
            "r_squared",
            "bins_used",
        ],
    );
    match fit_power_law(dist, s_min) {
        Ok(fit) => t.push(vec![
            fit.exponent.into(),
            fit.intercept.into(),
            fit.s_min.into(),
            fit.s_max.into(),
            fit.goodness.into(),
            fit.bins_used.into(),
        ]),
        Err(e) => eprintln!("wnnet: power-law fit skipped: {e}"),
    }
    t
}

fn cmd_supremacy(args: &SupremacyArgs) -> Result<Output, CliError> {
    let mut inputs = Vec::new();
    if let Some(path) = &args.values {
        let values = read_values(path)?;
        inputs.push(digest_file(path)?);
        if values.is_empty() {
            return Err(CliError::Input(format!("{}: no values", path.display())));
        }
        let dist = log_bin(&values, args.bins_per_decade)?;
        return Ok(Output {
            tables: vec![
                binned_table("supremacy_distribution", &dist),
                power_law_table(&dist, args.fit_smin),
            ],
            inputs,
            export: None,
        });
    }

    let layer = load_input(&args.input, &mut inputs)?;
    let g = &layer.graph;
    let config = SupremacyConfig {
        relation_types: parse_relations(&args.relations)?,
        include_self: args.include_self,
        ..SupremacyConfig::default()
    };
    let table = supremacy_all_with_threads(g, &config, args.threads)?;

    let mut t = Table::new("supremacy", &["id", "supremacy"]);
    for (id, s) in table.iter() {
        t.push(vec![id.into(), s.into()]);
    }
    let mut tables = vec![t];

    // zero supremacies only occur without self-inclusion and cannot be binned
    let positive: Vec<u64> = table.values.iter().copied().filter(|&s| s > 0).collect();
    if !positive.is_empty() {
        let dist = log_bin_counts(&positive, args.bins_per_decade)?;
        tables.push(binned_table("supremacy_distribution", &dist));
        tables.push(power_law_table(&dist, args.fit_smin));
    }

    if args.include_self {
        let profile = supremacy_size_profile(g, &table)?;
        let mut t = Table::new("size_profile", &["size", "count", "geometric_mean"]);
        for row in &profile {
            t.push(vec![
                row.size.into(),
                row.count.into(),
                row.geometric_mean.into(),
            ]);
        }
        tables.push(t);

        let mut t = Table::new(
            "exponential_fit",
            &[
                "alpha",
                "intercept",
                "l_min",
                "l_max",
                "coverage",
                "r_squared",
                "classes",
            ],
        );
        match fit_exponential_scaling(&profile, args.coverage) {
            Ok(fit) => t.push(vec![
                fit.alpha.into(),
                fit.intercept.into(),
                fit.l_min.into(),
                fit.l_max.into(),
                fit.coverage.into(),
                fit.goodness.into(),
                fit.classes.into(),
            ]),
            Err(e @ StatsError::InvalidCoverage(_)) => return Err(e.into()),
            Err(e) => eprintln!("wnnet: exponential fit skipped: {e}"),
        }
        tables.push(t);
    }
    Ok(Output {
        tables,
        inputs,
        export: None,
    })
}

fn cmd_bilayer(args: &BilayerArgs) -> Result<Output, CliError> {
    let mut inputs = Vec::new();
    let a = load_layer(
        args.a_pwn_dir.as_deref(),
        args.a_tsv.as_deref(),
        &args.a_lang,
        args.fold_instance_hypernyms,
        "a-",
        &mut inputs,
    )?;
    let b = load_layer(
        args.b_pwn_dir.as_deref(),
        args.b_tsv.as_deref(),
        &args.b_lang,
        args.fold_instance_hypernyms,
        "b-",
        &mut inputs,
    )?;
    let (links, _) = load_links(&args.ilinks, &mut inputs)?;
    let link_count = links.len();
    let built = build_bilayer(a.graph, b.graph, links)?;
    let network = built.network;

    let link_type = LinkType::parse(&args.link_type);
    let config = SupremacyConfig {
        relation_types: parse_relations(&args.relations)?,
        ..SupremacyConfig::default()
    };
    let pairs = supremacy_pairs_with_threads(&network, &link_type, &config, &config, args.threads)?;
    if pairs.is_empty() {
        return Err(CliError::Input(format!(
            "no links of requested type {}",
            link_type.as_str()
        )));
    }
    let matrix = null_model_matrix(&pairs, args.bins_per_decade, args.marginals.into())?;
    let mismatches = mismatch_report(&network, &pairs, args.threshold);

    let mut tables = vec![key_value_table(
        "summary",
        vec![
            ("layer_a", network.layer_a.language_tag().into()),
            ("layer_b", network.layer_b.language_tag().into()),
            ("synsets_a", network.layer_a.node_count().into()),
            ("synsets_b", network.layer_b.node_count().into()),
            ("links_read", link_count.into()),
            ("links_dropped", built.dropped_links.into()),
            ("link_type", link_type.as_str().into()),
            ("pairs", pairs.len().into()),
            ("mismatches", mismatches.records.len().into()),
            ("threshold", args.threshold.into()),
        ],
    )];

    let mut t = Table::new("pairs", &["source", "target", "s_source", "s_target"]);
    for p in &pairs.pairs {
        t.push(vec![
            p.link.source_id.as_str().into(),
            p.link.target_id.as_str().into(),
            p.s_source.into(),
            p.s_target.into(),
        ]);
    }
    tables.push(t);

    let mut t = Table::new(
        "r_matrix",
        &[
            "a_bin", "a_lower", "a_upper", "b_bin", "b_lower", "b_upper", "observed", "expected",
            "r",
        ],
    );
    for c in &matrix.cells {
        let (ba, bb) = (
            matrix.axis_a.bin(c.a_bin).expect("axis bin"),
            matrix.axis_b.bin(c.b_bin).expect("axis bin"),
        );
        t.push(vec![
            c.a_bin.into(),
            ba.lower.into(),
            ba.upper.into(),
            c.b_bin.into(),
            bb.lower.into(),
            bb.upper.into(),
            c.observed.into(),
            c.expected.into(),
            c.ratio.into(),
        ]);
    }
    tables.push(t);

    let mut t = Table::new(
        "mismatches",
        &[
            "score",
            "source",
            "source_lexemes",
            "target",
            "target_lexemes",
            "s_source",
            "s_target",
        ],
    );
    for r in &mismatches.records {
        t.push(vec![
            r.score.into(),
            r.source_id.as_str().into(),
            r.source_lexemes.join(";").into(),
            r.target_id.as_str().into(),
            r.target_lexemes.join(";").into(),
            r.s_source.into(),
            r.s_target.into(),
        ]);
    }
    tables.push(t);

    if args.mc_trials > 0 {
        let mc = monte_carlo_null(
            &pairs,
            args.bins_per_decade,
            args.mc_trials,
            args.seed,
            args.threads,
        )?;
        let analytic = null_model_matrix(&pairs, args.bins_per_decade, Marginals::AllSynsets)?;
        let mut t = Table::new(
            "monte_carlo",
            &[
                "a_bin", "b_bin", "mean", "std_dev", "expected", "trials", "seed",
            ],
        );
        for c in &mc.cells {
            let expected = analytic.cell(c.a_bin, c.b_bin).map(|x| x.expected);
            t.push(vec![
                c.a_bin.into(),
                c.b_bin.into(),
                c.mean.into(),
                c.std_dev.into(),
                expected.into(),
                mc.trials.into(),
                mc.seed.into(),
            ]);
        }
        tables.push(t);
    }
    Ok(Output {
        tables,
        inputs,
        export: None,
    })
}

fn cmd_incomponent(args: &IncomponentArgs) -> Result<Output, CliError> {
    let mut inputs = Vec::new();
    let layer = load_input(&args.input, &mut inputs)?;
    let config = SupremacyConfig {
        relation_types: parse_relations(&args.relations)?,
        include_self: args.include_self,
        ..SupremacyConfig::default()
    };
    let sub = in_component(&layer.graph, &args.synset, &config)?;
    Ok(Output {
        tables: Vec::new(),
        inputs,
        export: Some(sub),
    })
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    /// Written files, manifest last.
    pub files: Vec<PathBuf>,
}

fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(internal("creating output directory"))?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, bytes) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::Internal(format!("{}: {e}", path.display())));
        }
        written.push(path);
    }
    Ok(written)
}

pub fn run(cli: &Cli) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let command = &cli.command;
    let (output, out_dir, format) = match command {
        Command::Stats(a) => (cmd_stats(a)?, &a.output.out_dir, a.output.format),
        Command::Components(a) => (cmd_components(a)?, &a.output.out_dir, a.output.format),
        Command::Supremacy(a) => (cmd_supremacy(a)?, &a.output.out_dir, a.output.format),
        Command::Bilayer(a) => (cmd_bilayer(a)?, &a.output.out_dir, a.output.format),
        Command::Incomponent(a) => (cmd_incomponent(a)?, &a.out_dir, Format::Csv),
    };

    let mut files = Vec::new();
    for table in &output.tables {
        files.push((table.file_name(format), table.render(format)?));
    }
    let mut written = write_all(out_dir, &files)?;
    let mut digests: Vec<(String, String)> = files
        .iter()
        .map(|(name, bytes)| (name.clone(), sha256_hex(bytes)))
        .collect();
    if let Some(sub) = &output.export {
        let paths = export_generic_tsv(sub, None, out_dir)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        for p in paths {
            let bytes = fs::read(&p).map_err(internal("reading export"))?;
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            digests.push((name, sha256_hex(&bytes)));
            written.push(p);
        }
    }

    let manifest = json!({
        "tool": "wnnet",
        "version": env!("CARGO_PKG_VERSION"),
        "subcommand": command.name(),
        "flags": serde_json::to_value(command).map_err(|e| CliError::Internal(e.to_string()))?,
        "inputs": output.inputs,
        "outputs": digests
            .iter()
            .map(|(name, sha)| json!({ "file": name, "sha256": sha }))
            .collect::<Vec<_>>(),
        "duration_seconds": started.elapsed().as_secs_f64(),
    });
    let mut bytes =
        serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Internal(e.to_string()))?;
    bytes.push(b'\n');
    written.extend(write_all(out_dir, &[("manifest.json".to_string(), bytes)])?);
    Ok(RunSummary {
        out_dir: out_dir.clone(),
        files: written,
    })
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(summary) => {
            println!(
                "wrote {} files to {}",
                summary.files.len(),
                summary.out_dir.display()
            );
            0
        }
        Err(e) => {
            eprintln!("wnnet: error: {e}");
            e.exit_code()
        }
    }
}
