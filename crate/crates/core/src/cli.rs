//! `eigenrank` command line.
//!
//! Exit status: 0 success, 1 usage error, 2 data or validation error,
//! 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{bigmac_fixture, parse_citation_edges, parse_journal_metadata, JournalTable, BIGMAC_HEADER};
use crate::error::{Error, Result};
use crate::metrics::{compute_scores, decomposition_check, Metric, MetricScores, MetricsConfig, SolverConfig};
use crate::report::{
    rank_comparison, render_cardinal_plot, render_histogram, render_ratio_plot, render_slopegraph, FigureSpec,
};
use crate::spurious::{
    logistic_map_correlation, simulate_journal_sizes, simulate_ossuary, simulate_yule_products, DistributionKind,
    DistributionSpec, YuleMode,
};
use crate::stats::{
    coefficient_of_variation, correlate, mann_whitney_u, mean, paired_metrics, pearson, per_field_correlations,
    ratio_analysis, sample_sd, tercile_median_ratio, CorrelationKind, FieldCorrelations,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "eigenrank", version, about = "Journal citation metrics and correlation diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute EF, AI, IF and TC from journals.csv and citations.csv.
    Compute(ComputeArgs),
    /// Correlate two score columns, optionally per field.
    Correlate(CorrelateArgs),
    /// Ratio of two score columns, optionally tested across a field split.
    Ratio(RatioArgs),
    /// Monte-Carlo spurious-correlation constructions.
    Simulate(SimulateArgs),
    /// Render an SVG figure.
    Plot(PlotArgs),
    /// Summary statistics of the Big Mac wage table.
    Bigmac(BigmacArgs),
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct ComputeArgs {
    #[arg(long)]
    journals: PathBuf,
    #[arg(long)]
    citations: PathBuf,
    /// Census year whose outgoing citations are counted.
    #[arg(long)]
    year: i32,
    #[arg(long, default_value_t = crate::metrics::DEFAULT_WINDOW)]
    window: u32,
    #[arg(long, default_value_t = crate::metrics::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = crate::metrics::DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = crate::metrics::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Keep journal self-citations in the Eigenfactor network.
    #[arg(long)]
    include_self_influence: bool,
    /// Drop journal self-citations from Impact Factor and Total Citations.
    #[arg(long)]
    exclude_self_counts: bool,
    /// Output scores.csv (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the decomposition diagnostics here.
    #[arg(long)]
    decomposition: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Pearson,
    Spearman,
}

impl From<KindArg> for CorrelationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Pearson => CorrelationKind::Pearson,
            KindArg::Spearman => CorrelationKind::Spearman,
        }
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct CorrelateArgs {
    #[arg(long)]
    scores: PathBuf,
    /// journals.csv; required with --by-field.
    #[arg(long)]
    journals: Option<PathBuf>,
    #[arg(long, default_value = "ai")]
    x: Metric,
    #[arg(long, default_value = "impact_factor")]
    y: Metric,
    #[arg(long)]
    log: bool,
    #[arg(long, value_enum, default_value = "pearson")]
    kind: KindArg,
    #[arg(long)]
    by_field: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TestArg {
    MannWhitney,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct RatioArgs {
    #[arg(long)]
    scores: PathBuf,
    #[arg(long, default_value = "ef")]
    numerator: Metric,
    #[arg(long, default_value = "total_citations")]
    denominator: Metric,
    /// Field label splitting journals into members and non-members.
    #[arg(long)]
    group_by: Option<String>,
    #[arg(long)]
    journals: Option<PathBuf>,
    #[arg(long, value_enum)]
    test: Option<TestArg>,
    /// Per-journal ratios as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary and test report (stdout when absent).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SimKind {
    Ossuary,
    Yule,
    JournalSize,
    Logistic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistArg {
    Lognormal,
    Normal,
    Uniform,
}

impl From<DistArg> for DistributionKind {
    fn from(d: DistArg) -> Self {
        match d {
            DistArg::Lognormal => DistributionKind::LogNormal,
            DistArg::Normal => DistributionKind::NormalTruncatedPositive,
            DistArg::Uniform => DistributionKind::UniformPositive,
        }
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct SimulateArgs {
    #[arg(value_enum)]
    kind: SimKind,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "EIGENRANK_SEED", default_value_t = 0)]
    seed: u64,
    /// Sample size per trial (bones, observations, journals or iterates).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "lognormal")]
    dist: DistArg,
    /// Coefficient of variation shared by every variable not set explicitly.
    #[arg(long, default_value_t = 0.1)]
    cv: f64,
    #[arg(long)]
    femur_cv: Option<f64>,
    #[arg(long)]
    tibia_cv: Option<f64>,
    #[arg(long)]
    humerus_cv: Option<f64>,
    #[arg(long)]
    z1_cv: Option<f64>,
    #[arg(long)]
    z2_cv: Option<f64>,
    #[arg(long)]
    x3_cv: Option<f64>,
    #[arg(long, default_value_t = 1.785)]
    ai_cv: f64,
    #[arg(long, default_value_t = 1.548)]
    if_cv: f64,
    #[arg(long, default_value_t = 1.910)]
    n5_cv: f64,
    #[arg(long, default_value_t = 4.0)]
    r: f64,
    #[arg(long, default_value_t = 0.2)]
    x0: f64,
    #[arg(long, default_value_t = crate::spurious::DEFAULT_LOGISTIC_BURN_IN)]
    burn_in: usize,
    /// simulation.csv (trial,rho).
    #[arg(long)]
    out: Option<PathBuf>,
    /// summary.txt (stdout when absent).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlotKind {
    Slopegraph,
    Cardinal,
    Histogram,
    Ratio,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct PlotArgs {
    #[arg(value_enum)]
    kind: PlotKind,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    scores: Option<PathBuf>,
    /// journals.csv; required with --field.
    #[arg(long)]
    journals: Option<PathBuf>,
    /// Restrict the plot to journals listed under this field.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value = "total_citations")]
    left: Metric,
    #[arg(long, default_value = "ef")]
    right: Metric,
    #[arg(long, default_value = "ef")]
    numerator: Metric,
    #[arg(long, default_value = "total_citations")]
    denominator: Metric,
    #[arg(long, default_value_t = 1.0)]
    top_fraction: f64,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    /// CSV with a numeric column to histogram, e.g. correlations.csv.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "rho")]
    column: String,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long, default_value_t = 640.0)]
    width: f64,
    #[arg(long, default_value_t = 800.0)]
    height: f64,
    #[arg(long, default_value = "")]
    title: String,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
struct BigmacArgs {
    /// Also write the table as bigmac.csv.
    #[arg(long)]
    export: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_data_error() {
                EXIT_DATA
            } else {
                EXIT_NUMERIC
            }
        }
    }
}

/// Replaces `--config FILE` with the file's `key=value` lines as long flags,
/// placed right after the subcommand so that explicit flags win.
fn expand_config(mut argv: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let Some(pos) = argv.iter().position(|a| {
        let s = a.to_string_lossy();
        s == "--config" || s.starts_with("--config=")
    }) else {
        return Ok(argv);
    };
    let flag = argv.remove(pos).to_string_lossy().into_owned();
    let path = match flag.strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None if pos < argv.len() => argv.remove(pos).to_string_lossy().into_owned(),
        None => return Err("--config requires a file path".into()),
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let mut extra: Vec<OsString> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key=value", n + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        let value = value.trim();
        match value {
            "true" => extra.push(format!("--{key}").into()),
            "false" => {}
            v => {
                extra.push(format!("--{key}").into());
                extra.push(v.into());
            }
        }
    }
    let at = 2.min(argv.len());
    argv.splice(at..at, extra);
    Ok(argv)
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Compute(a) => compute(a),
        Command::Correlate(a) => correlate_cmd(a),
        Command::Ratio(a) => ratio_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::Plot(a) => plot(a),
        Command::Bigmac(a) => bigmac(a),
    }
}

fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn with_path(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| with_path(path, e))
}

fn write_file(path: &Path, content: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, content).map_err(|e| with_path(path, e))
}

fn read_journals(path: &Path) -> Result<JournalTable> {
    parse_journal_metadata(open(path)?)
}

fn read_scores(path: &Path) -> Result<MetricScores> {
    MetricScores::parse_csv(open(path)?, 0)
}

fn require<'a>(opt: &'a Option<PathBuf>, flag: &str, why: &str) -> Result<&'a Path> {
    opt.as_deref()
        .ok_or_else(|| Error::Validation(format!("{flag} is required {why}")))
}

fn compute(a: ComputeArgs) -> Result<()> {
    let table = read_journals(&a.journals)?;
    let ledger = parse_citation_edges(open(&a.citations)?)?;
    let report = ledger.validate(&table)?;
    if !report.future_citations.is_empty() {
        eprintln!(
            "warning: {} citation records cite a later year",
            report.future_citations.len()
        );
    }
    let config = MetricsConfig {
        census_year: a.year,
        window: a.window,
        solver: SolverConfig {
            alpha: a.alpha,
            tolerance: a.tol,
            max_iter: a.max_iter,
        },
        exclude_self_influence: !a.include_self_influence,
        exclude_self_counts: a.exclude_self_counts,
    };
    let (scores, solver) = compute_scores(&ledger, &table, &config)?;
    eprintln!(
        "converged in {} iterations (residual {:e}, {} dangling)",
        solver.iterations, solver.final_residual, solver.dangling_count
    );
    emit(a.out.as_deref(), &scores.to_csv())?;
    if let Some(p) = a.decomposition {
        let d = decomposition_check(&scores)?;
        write_file(&p, format!("{d}\n"))?;
    }
    Ok(())
}

fn correlate_cmd(a: CorrelateArgs) -> Result<()> {
    let scores = read_scores(&a.scores)?;
    let kind: CorrelationKind = a.kind.into();
    let fc = if a.by_field {
        let table = read_journals(require(&a.journals, "--journals", "with --by-field")?)?;
        let fc = per_field_correlations(&scores, &table, a.x, a.y, kind, a.log);
        for (field, reason) in &fc.skipped {
            eprintln!("skipped field {field}: {reason}");
        }
        fc
    } else {
        let (obs, excluded) = paired_metrics(&scores, a.x, a.y, |_| true);
        let mut r = correlate(&obs, kind, a.log)?;
        r.excluded = excluded;
        FieldCorrelations {
            by_field: Default::default(),
            skipped: Vec::new(),
            pooled: Some(r),
        }
    };
    emit(a.out.as_deref(), &crate::stats::correlations_csv(&fc))
}

fn ratio_cmd(a: RatioArgs) -> Result<()> {
    let scores = read_scores(&a.scores)?;
    let (obs, undefined) = paired_metrics(&scores, a.numerator, a.denominator, |_| true);
    let ra = ratio_analysis(&obs.labels, &obs.x, &obs.y)?;

    let mut report = String::new();
    report.push_str(&format!("ratio={}/{}\n", a.numerator, a.denominator));
    report.push_str(&format!("n={}\n", ra.raw_ratios.len()));
    report.push_str(&format!("excluded={}\n", ra.excluded.len() + undefined));
    report.push_str(&format!("median={:e}\n", ra.median));
    report.push_str(&format!("mean={:e}\n", ra.mean));
    report.push_str(&format!("std_dev={:e}\n", ra.std_dev));
    report.push_str(&format!("cv={:.6}\n", ra.cv));
    if ra.raw_ratios.len() >= 3 {
        if let Ok(t) = tercile_median_ratio(&ra.raw_ratios) {
            report.push_str(&format!("tercile_median_ratio={t:.6}\n"));
        }
    }

    if let Some(field) = &a.group_by {
        let table = read_journals(require(&a.journals, "--journals", "with --group-by")?)?;
        let (mut inside, mut outside) = (Vec::new(), Vec::new());
        for (label, r) in ra.labels.iter().zip(&ra.raw_ratios) {
            match table.get(label) {
                Some(e) if e.fields.contains(field) => inside.push(*r),
                _ => outside.push(*r),
            }
        }
        report.push_str(&format!("group={field}\n"));
        report.push_str(&format!("group_n={}\nrest_n={}\n", inside.len(), outside.len()));
        if !inside.is_empty() && !outside.is_empty() {
            let (mi, mo) = (mean(&inside), mean(&outside));
            report.push_str(&format!("group_mean={mi:e}\nrest_mean={mo:e}\n"));
            report.push_str(&format!("relative_difference={:.6}\n", mi / mo - 1.0));
        }
        if a.test.is_some() {
            let t = mann_whitney_u(&inside, &outside)?;
            report.push_str(&format!("{t}\n"));
        }
    } else if a.test.is_some() {
        return Err(Error::Validation("--test requires --group-by".into()));
    }

    if let Some(p) = &a.out {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["journal_id", "ratio", "normalized"]).expect("in-memory write");
        for ((l, r), n) in ra.labels.iter().zip(&ra.raw_ratios).zip(&ra.normalized) {
            w.write_record([l.as_str(), &format!("{r:e}"), &format!("{n:.6}")])
                .expect("in-memory write");
        }
        write_file(p, w.into_inner().expect("in-memory flush"))?;
    }
    emit(a.report.as_deref(), &report)
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let dist: DistributionKind = a.dist.into();
    let spec = |cv: Option<f64>| DistributionSpec {
        kind: dist,
        location: 1.0,
        scale: cv.unwrap_or(a.cv),
    };
    let (result, echo) = match a.kind {
        SimKind::Ossuary => {
            let (f, t, h) = (spec(a.femur_cv), spec(a.tibia_cv), spec(a.humerus_cv));
            let n = a.n.unwrap_or(1000);
            (
                simulate_ossuary(&f, &t, &h, n, a.trials, a.seed)?,
                format!("ossuary femur={f} tibia={t} humerus={h} n_bones={n}"),
            )
        }
        SimKind::Yule => {
            let (z1, z2, x3) = (spec(a.z1_cv), spec(a.z2_cv), spec(a.x3_cv));
            let n = a.n.unwrap_or(1000);
            (
                simulate_yule_products(&z1, &z2, &x3, n, a.trials, a.seed, YuleMode::Independent)?,
                format!("yule z1={z1} z2={z2} x3={x3} n={n}"),
            )
        }
        SimKind::JournalSize => {
            let n = a.n.unwrap_or(7611);
            (
                simulate_journal_sizes(a.ai_cv, a.if_cv, a.n5_cv, n, a.trials, a.seed)?,
                format!(
                    "journal-size ai_cv={} if_cv={} n5_cv={} n_journals={n}",
                    a.ai_cv, a.if_cv, a.n5_cv
                ),
            )
        }
        SimKind::Logistic => {
            let n = a.n.unwrap_or(1_000_000);
            let rho = logistic_map_correlation(a.r, a.x0, n, a.burn_in)?;
            let summary = format!(
                "spec=logistic r={} x0={} n={n} burn_in={}\nrho={rho:.6}\n",
                a.r, a.x0, a.burn_in
            );
            if let Some(p) = &a.out {
                write_file(p, format!("trial,rho\n0,{rho:.12}\n"))?;
            }
            return emit(a.summary.as_deref(), &summary);
        }
    };
    if let Some(p) = &a.out {
        write_file(p, result.to_csv())?;
    }
    emit(a.summary.as_deref(), &result.summary(&echo))
}

fn figure_spec(a: &PlotArgs) -> FigureSpec {
    FigureSpec {
        width: a.width,
        height: a.height,
        top_fraction: a.top_fraction,
        title: a.title.clone(),
        ..FigureSpec::default()
    }
}

fn scores_for_plot(a: &PlotArgs) -> Result<MetricScores> {
    let mut scores = read_scores(require(&a.scores, "--scores", "for this plot")?)?;
    if let Some(field) = &a.field {
        let table = read_journals(require(&a.journals, "--journals", "with --field")?)?;
        scores
            .records
            .retain(|r| table.get(&r.journal_id).is_some_and(|e| e.fields.contains(field)));
    }
    Ok(scores)
}

fn plot(a: PlotArgs) -> Result<()> {
    let spec = figure_spec(&a);
    let svg = match a.kind {
        PlotKind::Slopegraph => {
            let cmp = rank_comparison(&scores_for_plot(&a)?, a.left, a.right)?;
            render_slopegraph(&cmp, &spec)?
        }
        PlotKind::Cardinal => {
            let cmp = rank_comparison(&scores_for_plot(&a)?, a.left, a.right)?;
            render_cardinal_plot(&cmp, &spec, a.top_k.min(cmp.len()))?
        }
        PlotKind::Ratio => {
            let (obs, _) = paired_metrics(&scores_for_plot(&a)?, a.numerator, a.denominator, |_| true);
            render_ratio_plot(&ratio_analysis(&obs.labels, &obs.x, &obs.y)?, &spec)?
        }
        PlotKind::Histogram => {
            let path = require(&a.input, "--input", "for a histogram")?;
            let values = read_column(path, &a.column)?;
            render_histogram(&values, a.bins, &spec)?
        }
    };
    write_file(&a.out, svg)?;
    Ok(())
}

/// Numeric column `name` from a headed CSV; the pooled `*` row of
/// correlations.csv is skipped.
fn read_column(path: &Path, name: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let headers = reader.headers().map_err(|e| Error::format(1, e.to_string()))?.clone();
    let k = headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::format(1, format!("no column `{name}`")))?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::format(e.position().map(|p| p.line()).unwrap_or(0), e.to_string()))?;
        if row.get(0) == Some("*") {
            continue;
        }
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        out.push(
            row[k]
                .parse::<f64>()
                .map_err(|_| Error::format(line, format!("malformed {name} `{}`", &row[k])))?,
        );
    }
    Ok(out)
}

fn bigmac(a: BigmacArgs) -> Result<()> {
    let data = bigmac_fixture();
    let rho = pearson(&data)?.rho;
    let real = data.ratios();
    let mut out = format!("rho={rho:.2}\n");
    for (name, xs) in [
        ("burger_price", &data.x),
        ("hourly_wage", &data.y),
        ("real_wage", &real),
    ] {
        out.push_str(&format!(
            "{name} mean={:.2} sd={:.2} cv={:.2}\n",
            mean(xs),
            sample_sd(xs),
            coefficient_of_variation(xs)?
        ));
    }
    out.push_str(&format!("tercile_median_ratio={:.2}\n", tercile_median_ratio(&real)?));
    if let Some(p) = a.export {
        write_file(&p, data.to_csv(BIGMAC_HEADER))?;
    }
    emit(None, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines_become_flags_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "# defaults\ntrials=5\nseed = 3\nlog=true\nby_field=false\n").unwrap();
        let argv: Vec<OsString> = ["eigenrank", "simulate", "--config", cfg.to_str().unwrap(), "yule", "--seed", "9"]
            .iter()
            .map(OsString::from)
            .collect();
        let out: Vec<String> = expand_config(argv)
            .unwrap()
            .into_iter()
            .map(|s| s.into_string().unwrap())
            .collect();
        assert_eq!(
            out,
            ["eigenrank", "simulate", "--trials", "5", "--seed", "3", "--log", "yule", "--seed", "9"]
        );
    }

    #[test]
    fn explicit_flag_overrides_config_value() {
        let cli = Cli::try_parse_from(["eigenrank", "simulate", "--seed", "3", "yule", "--seed", "9"]).unwrap();
        match cli.command {
            Command::Simulate(a) => assert_eq!(a.seed, 9),
            other => panic!("{other:?}"),
        }
    }
}
