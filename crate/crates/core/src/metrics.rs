//! Eigenfactor-family journal metrics.
//!
//! The influence vector is the stationary distribution of a damped random walk
//! on the column-normalised citation matrix `H`. Teleportation and the mass of
//! dangling journals (those citing nothing in the window) are both
//! redistributed in proportion to the article vector `a`:
//!
//! ```text
//! pi <- alpha * (H pi + a * sum_{j dangling} pi_j) + (1 - alpha) * a
//! ```
//!
//! Eigenfactor is `100 * H pi` renormalised to sum to 100, and Article
//! Influence is `0.01 * EF_i / a_i`, which puts the article-weighted mean at 1.

use std::fmt;
use std::str::FromStr;

use crate::corpus::{build_citation_matrix, CitationLedger, CitationMatrix, JournalTable};
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.85;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 1000;
pub const DEFAULT_WINDOW: u32 = 5;

/// Column-stochastic sparse matrix; `columns[j]` holds `(i, h_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStochastic {
    columns: Vec<Vec<(usize, f64)>>,
}

impl ColumnStochastic {
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    pub fn column_sums(&self) -> Vec<f64> {
        self.columns
            .iter()
            .map(|c| c.iter().map(|(_, v)| v).sum())
            .collect()
    }

    /// `H x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (j, col) in self.columns.iter().enumerate() {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for &(i, h) in col {
                out[i] += h * xj;
            }
        }
        out
    }
}

/// Divides each column of `z` by its sum. Columns summing to zero are left
/// empty and returned as dangling indices (ascending).
pub fn normalize_columns(z: &CitationMatrix) -> (ColumnStochastic, Vec<usize>) {
    let mut dangling = Vec::new();
    let columns = (0..z.dim())
        .map(|j| {
            let col = z.column(j);
            let total: f64 = col.iter().map(|(_, v)| v).sum();
            if total > 0.0 {
                col.iter().map(|&(i, v)| (i, v / total)).collect()
            } else {
                dangling.push(j);
                Vec::new()
            }
        })
        .collect();
    (ColumnStochastic { columns }, dangling)
}

/// Share of the window's articles published by each journal. The window is
/// `[census_year - window, census_year - 1]`.
pub fn article_vector(table: &JournalTable, census_year: i32, window: u32) -> Result<Vec<f64>> {
    let counts = window_articles(table, census_year, window);
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::Degenerate(format!(
            "no articles published in {}..={}",
            census_year - window as i32,
            census_year - 1
        )));
    }
    Ok(counts.iter().map(|&n| n as f64 / total as f64).collect())
}

fn window_articles(table: &JournalTable, census_year: i32, window: u32) -> Vec<u64> {
    table
        .entries()
        .iter()
        .map(|e| e.articles_between(census_year - window as i32, census_year - 1))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub alpha: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            tolerance: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub iterations: usize,
    pub final_residual: f64,
    pub alpha: f64,
    pub tolerance: f64,
    pub dangling_count: usize,
    /// L1 change between successive iterates, one per iteration.
    pub residuals: Vec<f64>,
}

/// Damped power iteration started from `a`, stopping once the L1 change
/// between iterates drops to `config.tolerance`.
pub fn power_iterate(
    h: &ColumnStochastic,
    dangling: &[usize],
    a: &[f64],
    config: &SolverConfig,
) -> Result<(Vec<f64>, SolverReport)> {
    let n = h.dim();
    let alpha = config.alpha;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("damping factor must lie in (0, 1), got {alpha}")));
    }
    if !(config.tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", config.tolerance)));
    }
    if a.len() != n {
        return Err(Error::Validation(format!(
            "article vector has {} entries for a {n}-journal matrix",
            a.len()
        )));
    }
    let a_sum: f64 = a.iter().sum();
    if (a_sum - 1.0).abs() > 1e-9 || a.iter().any(|&w| w < 0.0) {
        return Err(Error::Domain(format!(
            "article vector must be a probability vector (sum {a_sum})"
        )));
    }

    let mut pi = a.to_vec();
    let mut residuals = Vec::new();
    for _ in 0..config.max_iter {
        let dangling_mass: f64 = dangling.iter().map(|&j| pi[j]).sum();
        let mut next = h.mul_vec(&pi);
        for (x, &w) in next.iter_mut().zip(a) {
            *x = alpha * (*x + w * dangling_mass) + (1.0 - alpha) * w;
        }
        let residual: f64 = next.iter().zip(&pi).map(|(x, y)| (x - y).abs()).sum();
        residuals.push(residual);
        pi = next;
        if residual <= config.tolerance {
            let report = SolverReport {
                iterations: residuals.len(),
                final_residual: residual,
                alpha,
                tolerance: config.tolerance,
                dangling_count: dangling.len(),
                residuals,
            };
            return Ok((pi, report));
        }
    }
    Err(Error::Convergence {
        iterations: config.max_iter,
        residual: residuals.last().copied().unwrap_or(f64::INFINITY),
    })
}

/// `EF = 100 * H pi / sum(H pi)`. Dangling columns contribute nothing.
pub fn eigenfactor_scores(h: &ColumnStochastic, pi: &[f64]) -> Result<Vec<f64>> {
    let s = h.mul_vec(pi);
    let total: f64 = s.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Degenerate("no in-window citations between journals".into()));
    }
    Ok(s.into_iter().map(|x| 100.0 * x / total).collect())
}

/// `AI_i = 0.01 * EF_i / a_i`; `None` where the journal published nothing in
/// the window and received no influence.
pub fn article_influence(ef: &[f64], a: &[f64]) -> Result<Vec<Option<f64>>> {
    if ef.len() != a.len() {
        return Err(Error::Validation("EF and article vector lengths differ".into()));
    }
    ef.iter()
        .zip(a)
        .enumerate()
        .map(|(i, (&e, &w))| {
            if w > 0.0 {
                Ok(Some(0.01 * e / w))
            } else if e > 0.0 {
                Err(Error::Inconsistent(format!(
                    "journal #{i} has Eigenfactor {e} but no articles in the window"
                )))
            } else {
                Ok(None)
            }
        })
        .collect()
}

fn count_citations(
    ledger: &CitationLedger,
    table: &JournalTable,
    census_year: i32,
    exclude_self: bool,
    cited_years: impl Fn(i32) -> bool,
) -> Vec<u64> {
    let mut counts = vec![0u64; table.len()];
    for r in &ledger.records {
        if r.citing_year != census_year || !cited_years(r.cited_year) {
            continue;
        }
        if exclude_self && r.citing_id == r.cited_id {
            continue;
        }
        if let Some(i) = table.index_of(&r.cited_id) {
            counts[i] += r.count;
        }
    }
    counts
}

/// Two-year Impact Factor, aligned with `table`. `None` where the journal
/// published nothing in the two preceding years.
pub fn impact_factor(
    ledger: &CitationLedger,
    table: &JournalTable,
    census_year: i32,
    exclude_self: bool,
) -> Vec<Option<f64>> {
    let cites = count_citations(ledger, table, census_year, exclude_self, |y| {
        y == census_year - 1 || y == census_year - 2
    });
    window_articles(table, census_year, 2)
        .into_iter()
        .zip(cites)
        .map(|(n2, c)| (n2 > 0).then(|| c as f64 / n2 as f64))
        .collect()
}

/// Citations received in `census_year` to articles of any age, aligned with
/// `table`.
pub fn total_citations(
    ledger: &CitationLedger,
    table: &JournalTable,
    census_year: i32,
    exclude_self: bool,
) -> Vec<u64> {
    count_citations(ledger, table, census_year, exclude_self, |_| true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Eigenfactor,
    ArticleInfluence,
    ImpactFactor,
    TotalCitations,
    N5,
    N2,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Eigenfactor,
        Metric::ArticleInfluence,
        Metric::ImpactFactor,
        Metric::TotalCitations,
        Metric::N5,
        Metric::N2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Eigenfactor => "ef",
            Metric::ArticleInfluence => "ai",
            Metric::ImpactFactor => "impact_factor",
            Metric::TotalCitations => "total_citations",
            Metric::N5 => "n5",
            Metric::N2 => "n2",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "ef" | "eigenfactor" => Ok(Metric::Eigenfactor),
            "ai" | "article_influence" => Ok(Metric::ArticleInfluence),
            "if" | "impact_factor" => Ok(Metric::ImpactFactor),
            "tc" | "total_citations" => Ok(Metric::TotalCitations),
            "n5" => Ok(Metric::N5),
            "n2" => Ok(Metric::N2),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JournalScore {
    pub journal_id: String,
    pub ef: f64,
    pub ai: Option<f64>,
    pub impact_factor: Option<f64>,
    pub total_citations: u64,
    pub n5: u64,
    pub n2: u64,
}

impl JournalScore {
    pub fn metric(&self, m: Metric) -> Option<f64> {
        match m {
            Metric::Eigenfactor => Some(self.ef),
            Metric::ArticleInfluence => self.ai,
            Metric::ImpactFactor => self.impact_factor,
            Metric::TotalCitations => Some(self.total_citations as f64),
            Metric::N5 => Some(self.n5 as f64),
            Metric::N2 => Some(self.n2 as f64),
        }
    }
}

pub const SCORES_HEADER: [&str; 7] = [
    "journal_id",
    "ef",
    "ai",
    "impact_factor",
    "total_citations",
    "n5",
    "n2",
];

#[derive(Debug, Clone, PartialEq)]
pub struct MetricScores {
    pub census_year: i32,
    pub records: Vec<JournalScore>,
}

impl MetricScores {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, journal_id: &str) -> Option<&JournalScore> {
        self.records.iter().find(|r| r.journal_id == journal_id)
    }

    pub fn column(&self, m: Metric) -> Vec<Option<f64>> {
        self.records.iter().map(|r| r.metric(m)).collect()
    }

    /// Renders `scores.csv`. Real-valued metrics carry at least six
    /// significant digits and never fewer than six decimals; undefined values
    /// are empty fields.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(SCORES_HEADER).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.journal_id.clone(),
                format_sig(r.ef),
                r.ai.map(format_sig).unwrap_or_default(),
                r.impact_factor.map(format_sig).unwrap_or_default(),
                r.total_citations.to_string(),
                r.n5.to_string(),
                r.n2.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    /// Parses a `scores.csv` as written by [`MetricScores::to_csv`]. The
    /// census year is not part of the file.
    pub fn parse_csv<R: std::io::Read>(input: R, census_year: i32) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header = reader
            .headers()
            .map_err(|e| Error::format(1, e.to_string()))?
            .clone();
        if header.iter().collect::<Vec<_>>() != SCORES_HEADER {
            return Err(Error::format(1, format!("expected header `{}`", SCORES_HEADER.join(","))));
        }
        let mut records = Vec::new();
        for row in reader.records() {
            let row = row.map_err(|e| {
                Error::format(e.position().map(|p| p.line()).unwrap_or(0), e.to_string())
            })?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            let real = |k: usize| -> Result<Option<f64>> {
                if row[k].is_empty() {
                    return Ok(None);
                }
                row[k]
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| Error::format(line, format!("malformed {} `{}`", SCORES_HEADER[k], &row[k])))
            };
            let int = |k: usize| -> Result<u64> {
                row[k]
                    .parse::<u64>()
                    .map_err(|_| Error::format(line, format!("malformed {} `{}`", SCORES_HEADER[k], &row[k])))
            };
            records.push(JournalScore {
                journal_id: row[0].to_string(),
                ef: real(1)?.ok_or_else(|| Error::format(line, "missing ef"))?,
                ai: real(2)?,
                impact_factor: real(3)?,
                total_citations: int(4)?,
                n5: int(5)?,
                n2: int(6)?,
            });
        }
        Ok(Self { census_year, records })
    }
}

/// At least six significant digits, at least six decimals.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.6}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(6) as usize;
    format!("{v:.decimals$}")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsConfig {
    pub census_year: i32,
    pub window: u32,
    pub solver: SolverConfig,
    /// Drop journal self-citations from the Eigenfactor network.
    pub exclude_self_influence: bool,
    /// Drop journal self-citations from Impact Factor and Total Citations.
    pub exclude_self_counts: bool,
}

impl MetricsConfig {
    pub fn new(census_year: i32) -> Self {
        Self {
            census_year,
            window: DEFAULT_WINDOW,
            solver: SolverConfig::default(),
            exclude_self_influence: true,
            exclude_self_counts: false,
        }
    }
}

/// Full pipeline from ledger to per-journal scores.
pub fn compute_scores(
    ledger: &CitationLedger,
    table: &JournalTable,
    config: &MetricsConfig,
) -> Result<(MetricScores, SolverReport)> {
    let z = build_citation_matrix(
        ledger,
        table,
        config.census_year,
        config.window,
        config.exclude_self_influence,
    )?;
    let a = article_vector(table, config.census_year, config.window)?;
    let received = z.row_sums();
    let orphans: Vec<&str> = a
        .iter()
        .zip(&received)
        .zip(table.ids())
        .filter(|((&w, &c), _)| w == 0.0 && c > 0.0)
        .map(|(_, id)| id)
        .collect();
    if !orphans.is_empty() {
        return Err(Error::Inconsistent(format!(
            "journals cited in the window but with no articles in it: {}",
            orphans.join(", ")
        )));
    }

    let (h, dangling) = normalize_columns(&z);
    let (pi, report) = power_iterate(&h, &dangling, &a, &config.solver)?;
    let ef = eigenfactor_scores(&h, &pi)?;
    let ai = article_influence(&ef, &a)?;
    let ifs = impact_factor(ledger, table, config.census_year, config.exclude_self_counts);
    let tc = total_citations(ledger, table, config.census_year, config.exclude_self_counts);
    let n5 = window_articles(table, config.census_year, config.window);
    let n2 = window_articles(table, config.census_year, 2);

    let records = table
        .ids()
        .enumerate()
        .map(|(i, id)| JournalScore {
            journal_id: id.to_string(),
            ef: ef[i],
            ai: ai[i],
            impact_factor: ifs[i],
            total_citations: tc[i],
            n5: n5[i],
            n2: n2[i],
        })
        .collect();
    Ok((
        MetricScores {
            census_year: config.census_year,
            records,
        },
        report,
    ))
}

/// Per-journal check of `EF_i = c1 * AI_i * N5_i`, plus the spread of the
/// approximate Total Citations relation `TC_i ~ c * IF_i * N5_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `(journal_id, EF_i / (AI_i * N5_i))` for eligible journals.
    pub c1: Vec<(String, f64)>,
    /// `100 / sum(N5)` over all journals.
    pub c1_expected: f64,
    /// `(max - min) / mean` of the `c1` estimates.
    pub relative_spread: f64,
    /// `(journal_id, ln TC_i - ln(IF_i * N5_i))` where all three are positive.
    pub tc_log_offsets: Vec<(String, f64)>,
    /// `max - min` of the offsets, zero when fewer than two exist.
    pub tc_offset_range: f64,
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "c1_expected={:e}", self.c1_expected)?;
        writeln!(f, "c1_journals={}", self.c1.len())?;
        writeln!(f, "c1_relative_spread={:e}", self.relative_spread)?;
        writeln!(f, "tc_offset_journals={}", self.tc_log_offsets.len())?;
        write!(f, "tc_offset_range={:.6}", self.tc_offset_range)
    }
}

pub fn decomposition_check(scores: &MetricScores) -> Result<Decomposition> {
    let total_n5: u64 = scores.records.iter().map(|r| r.n5).sum();
    let c1: Vec<(String, f64)> = scores
        .records
        .iter()
        .filter_map(|r| match r.ai {
            Some(ai) if r.ef > 0.0 && ai > 0.0 && r.n5 > 0 => {
                Some((r.journal_id.clone(), r.ef / (ai * r.n5 as f64)))
            }
            _ => None,
        })
        .collect();
    if c1.is_empty() {
        return Err(Error::Degenerate(
            "no journal has positive EF, defined AI and positive N5".into(),
        ));
    }
    let (lo, hi, sum) = c1.iter().fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |acc, (_, v)| {
        (acc.0.min(*v), acc.1.max(*v), acc.2 + v)
    });
    let mean = sum / c1.len() as f64;

    let tc_log_offsets: Vec<(String, f64)> = scores
        .records
        .iter()
        .filter_map(|r| match r.impact_factor {
            Some(f) if f > 0.0 && r.total_citations > 0 && r.n5 > 0 => Some((
                r.journal_id.clone(),
                (r.total_citations as f64).ln() - (f * r.n5 as f64).ln(),
            )),
            _ => None,
        })
        .collect();
    let tc_offset_range = if tc_log_offsets.len() < 2 {
        0.0
    } else {
        let (lo, hi) = tc_log_offsets
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |acc, (_, v)| (acc.0.min(*v), acc.1.max(*v)));
        hi - lo
    };

    Ok(Decomposition {
        c1,
        c1_expected: 100.0 / total_n5 as f64,
        relative_spread: (hi - lo) / mean,
        tc_log_offsets,
        tc_offset_range,
    })
}
