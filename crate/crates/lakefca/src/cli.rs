//! Command-line front end. Data goes to stdout or `-o`, diagnostics to stderr.

use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lakefca_core::{
    apply_script, context_stats, coverage_curve, labels, ConceptLattice, FormalContext, TransformOptions,
    TransformScript, DEFAULT_CONCEPT_CAP,
};

use crate::error::Error;
use crate::export::{coverage_csv, coverage_json, export_lattice, report_json, stats_json, LabelMode, LatticeFormat};
use crate::ingest::{catalog_to_context, parse_es_mapping, parse_influx_schema, Catalog, ContextFormat, IngestOptions};
use crate::session::{Session, SessionStore};

#[derive(Debug, Parser)]
#[command(name = "lakefca", version, about = "Formal concept analysis for data lake schemas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a context from schema sources.
    Ingest(IngestArgs),
    /// Compute the concept lattice and write it as DOT or JSON.
    Lattice(LatticeArgs),
    /// Apply a transformation script to a context.
    Transform(TransformArgs),
    /// Cumulative object coverage by most frequent attributes.
    Coverage(CoverageArgs),
    /// Object, attribute and concept counts and lattice height.
    Stats(StatsArgs),
    /// Serve the HTTP API with the context as session "default".
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Elasticsearch mapping JSON; the index name is the file stem.
    #[arg(long = "es", value_name = "PATH")]
    pub es: Vec<PathBuf>,
    /// InfluxDB schema dump JSON.
    #[arg(long, value_name = "PATH")]
    pub influx: Vec<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub csv: Vec<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub cxt: Vec<PathBuf>,
    /// Fail on empty mappings and measurements instead of warning.
    #[arg(long)]
    pub strict: bool,
    /// Output path; the extension picks CXT, CSV or catalog JSON.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LatticeFormatArg {
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LabelsArg {
    Reduced,
    Full,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    pub context: PathBuf,
    #[arg(long, value_enum, default_value = "dot")]
    pub format: LatticeFormatArg,
    #[arg(long, value_enum, default_value = "reduced")]
    pub labels: LabelsArg,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
    pub max_concepts: usize,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub context: PathBuf,
    /// Script JSON: `{"ops": [...]}` or a bare array of ops.
    #[arg(long)]
    pub script: PathBuf,
    /// Output path; the extension picks the format.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Where to write the JSON report (default: stderr).
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub skip_on_error: bool,
    /// Keep attributes left with an empty extent.
    #[arg(long)]
    pub no_prune: bool,
    #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
    pub max_concepts: usize,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    pub context: PathBuf,
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub context: PathBuf,
    #[arg(long)]
    pub json: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
    pub max_concepts: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    pub context: PathBuf,
    #[arg(long, env = "PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    /// Script to preload as the default session's history.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Journal sessions here and recover them on start.
    #[arg(long)]
    pub journal_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
    pub max_concepts: usize,
}

pub fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Lattice(a) => lattice(a),
        Command::Transform(a) => transform(a),
        Command::Coverage(a) => coverage(a),
        Command::Stats(a) => stats(a),
        Command::Serve(a) => serve(a),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(FormalContext, String), Error> {
    let text = read(path)?;
    let ctx = ContextFormat::from_path(path).parse(&text)?;
    Ok((ctx, text))
}

fn output_format(output: Option<&Path>) -> ContextFormat {
    output.map_or(ContextFormat::Cxt, ContextFormat::from_path)
}

fn ingest(a: IngestArgs) -> Result<(), Error> {
    let opts = IngestOptions { strict: a.strict };
    let tables: Vec<&PathBuf> = a.cxt.iter().chain(&a.csv).collect();
    if a.es.is_empty() && a.influx.is_empty() && tables.is_empty() {
        return Err(Error::Usage(
            "ingest needs at least one of --es, --influx, --csv, --cxt".into(),
        ));
    }
    let out_format = output_format(a.output.as_deref());

    // A lone context passes through with its object and attribute order intact.
    if a.es.is_empty() && a.influx.is_empty() && tables.len() == 1 {
        let path = tables[0];
        let text = read(path)?;
        let in_format = if a.cxt.is_empty() {
            ContextFormat::Csv
        } else {
            ContextFormat::Cxt
        };
        let ctx = in_format.parse(&text)?;
        let body = if out_format == in_format {
            text
        } else {
            out_format.write(&ctx)?
        };
        return emit(a.output.as_deref(), &body);
    }

    let mut catalog = Catalog::default();
    for path in &a.es {
        let index = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        let (record, warnings) = parse_es_mapping(&read(path)?, index, &opts)?;
        warnings
            .iter()
            .for_each(|w| eprintln!("warning: {}: {w}", path.display()));
        catalog.push(record)?;
    }
    for path in &a.influx {
        let (more, warnings) = parse_influx_schema(&read(path)?, &opts)?;
        warnings
            .iter()
            .for_each(|w| eprintln!("warning: {}: {w}", path.display()));
        catalog.extend(more)?;
    }
    for path in &a.cxt {
        catalog.extend(Catalog::from_context(&ContextFormat::Cxt.parse(&read(path)?)?))?;
    }
    for path in &a.csv {
        catalog.extend(Catalog::from_context(&ContextFormat::Csv.parse(&read(path)?)?))?;
    }
    let body = match out_format {
        ContextFormat::Catalog => catalog.to_json(),
        f => f.write(&catalog_to_context(&catalog)?)?,
    };
    emit(a.output.as_deref(), &body)
}

fn lattice(a: LatticeArgs) -> Result<(), Error> {
    let (ctx, _) = load(&a.context)?;
    let lat = ConceptLattice::compute(&ctx, a.max_concepts)?;
    let lab = labels(&ctx, &lat);
    let format = match a.format {
        LatticeFormatArg::Dot => LatticeFormat::Dot,
        LatticeFormatArg::Json => LatticeFormat::Json,
    };
    let mode = match a.labels {
        LabelsArg::Reduced => LabelMode::Reduced,
        LabelsArg::Full => LabelMode::Full,
    };
    emit(a.output.as_deref(), &export_lattice(&ctx, &lat, &lab, format, mode))
}

pub fn parse_script(text: &str) -> Result<TransformScript, Error> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Usage(format!("script: {e}")))?;
    let script = if value.is_array() {
        serde_json::from_value(value).map(TransformScript::new)
    } else {
        serde_json::from_value(value)
    };
    script.map_err(|e| Error::Usage(format!("script: {e}")))
}

fn transform(a: TransformArgs) -> Result<(), Error> {
    let (ctx, original) = load(&a.context)?;
    let script = parse_script(&read(&a.script)?)?;
    let opts = TransformOptions {
        prune_empty: !a.no_prune,
        skip_on_error: a.skip_on_error,
        concept_cap: a.max_concepts,
    };
    let (result, report) = apply_script(&ctx, &script, &opts)?;
    for (i, w) in &report.warnings {
        eprintln!("warning: op {i}: {w}");
    }
    let report_text = report_json(&report);
    match &a.report {
        Some(path) => std::fs::write(path, &report_text)?,
        None => eprint!("{report_text}"),
    }
    if let Some((index, e)) = report.first_rejection() {
        if !a.skip_on_error {
            return Err(Error::Rejected {
                index,
                reason: e.to_string(),
            });
        }
        eprintln!("warning: op {index} skipped: {e}");
    }
    let out_format = output_format(a.output.as_deref());
    let body = if result == ctx && out_format == ContextFormat::from_path(&a.context) {
        original
    } else {
        out_format.write(&result)?
    };
    emit(a.output.as_deref(), &body)
}

fn coverage(a: CoverageArgs) -> Result<(), Error> {
    let (ctx, _) = load(&a.context)?;
    let report = coverage_curve(&ctx);
    let body = if a.json {
        coverage_json(&ctx, &report)
    } else {
        coverage_csv(&ctx, &report)
    };
    emit(a.output.as_deref(), &body)
}

fn stats(a: StatsArgs) -> Result<(), Error> {
    let (ctx, _) = load(&a.context)?;
    let s = context_stats(&ctx, a.max_concepts)?;
    let body = if a.json {
        stats_json(&s)
    } else {
        format!(
            "objects\t{}\nattributes\t{}\nconcepts\t{}\nheight\t{}\n",
            s.object_count, s.attribute_count, s.concept_count, s.lattice_height
        )
    };
    emit(a.output.as_deref(), &body)
}

fn serve(a: ServeArgs) -> Result<(), Error> {
    let (ctx, _) = load(&a.context)?;
    let ops = match &a.script {
        Some(path) => parse_script(&read(path)?)?.ops,
        None => Vec::new(),
    };
    let opts = TransformOptions {
        concept_cap: a.max_concepts,
        ..Default::default()
    };
    let store = match a.journal_dir {
        Some(dir) => SessionStore::with_journal_dir(dir, opts)?,
        None => SessionStore::new(opts),
    };
    if store.get("default").is_err() {
        store.insert(Session::with_history("default", ctx, ops, opts)?)?;
    }
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(crate::server::serve(store, SocketAddr::new(a.host, a.port)))?;
    Ok(())
}
