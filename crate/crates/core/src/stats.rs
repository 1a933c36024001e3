//! Correlation, dispersion, ratio and rank-sum statistics.

use std::collections::BTreeMap;
use std::fmt;

use statrs::function::erf::erfc;

use crate::corpus::{JournalTable, PairedObservations};
use crate::error::{Error, Result};
use crate::metrics::{Metric, MetricScores};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelationKind {
    Pearson,
    Spearman,
}

impl CorrelationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationKind::Pearson => "pearson",
            CorrelationKind::Spearman => "spearman",
        }
    }
}

impl fmt::Display for CorrelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub rho: f64,
    pub n: usize,
    pub kind: CorrelationKind,
    pub log_transformed: bool,
    /// Items dropped because a metric was undefined.
    pub excluded: usize,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n - 1 denominator).
pub fn sample_sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Product-moment correlation of two equal-length slices.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Validation(format!(
            "series lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least 2 observations, got {}",
            x.len()
        )));
    }
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("a series has zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn pearson(obs: &PairedObservations) -> Result<CorrelationResult> {
    Ok(CorrelationResult {
        rho: pearson_r(&obs.x, &obs.y)?,
        n: obs.len(),
        kind: CorrelationKind::Pearson,
        log_transformed: false,
        excluded: 0,
    })
}

/// 1-based ranks, ties receiving the average of the ranks they span.
pub fn mid_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation of mid-ranks.
pub fn spearman(obs: &PairedObservations) -> Result<CorrelationResult> {
    let rho = pearson_r(&mid_ranks(&obs.x), &mid_ranks(&obs.y)).map_err(|e| match e {
        Error::UndefinedCorrelation(_) if obs.len() >= 2 => {
            Error::UndefinedCorrelation("all values tied in a series".into())
        }
        other => other,
    })?;
    Ok(CorrelationResult {
        rho,
        n: obs.len(),
        kind: CorrelationKind::Spearman,
        log_transformed: false,
        excluded: 0,
    })
}

/// Natural-log transform of both series; every value must be positive.
pub fn log_transform(obs: &PairedObservations) -> Result<PairedObservations> {
    for (i, label) in obs.labels.iter().enumerate() {
        if !(obs.x[i] > 0.0) || !(obs.y[i] > 0.0) {
            return Err(Error::Domain(format!(
                "nonpositive value for `{label}` cannot be logged ({}, {})",
                obs.x[i], obs.y[i]
            )));
        }
    }
    Ok(PairedObservations {
        labels: obs.labels.clone(),
        x: obs.x.iter().map(|v| v.ln()).collect(),
        y: obs.y.iter().map(|v| v.ln()).collect(),
        x_name: format!("log {}", obs.x_name),
        y_name: format!("log {}", obs.y_name),
    })
}

pub fn log_pearson(obs: &PairedObservations) -> Result<CorrelationResult> {
    let mut r = pearson(&log_transform(obs)?)?;
    r.log_transformed = true;
    Ok(r)
}

pub fn correlate(obs: &PairedObservations, kind: CorrelationKind, log: bool) -> Result<CorrelationResult> {
    match (kind, log) {
        (CorrelationKind::Pearson, false) => pearson(obs),
        (CorrelationKind::Pearson, true) => log_pearson(obs),
        (CorrelationKind::Spearman, false) => spearman(obs),
        // monotone transform: ranks are unchanged, but the domain still applies
        (CorrelationKind::Spearman, true) => {
            let mut r = spearman(&log_transform(obs)?)?;
            r.log_transformed = true;
            Ok(r)
        }
    }
}

/// `log10` of the upper tail `P(Z > x)` of the standard normal, for `x >= 0`.
/// Uses `erfc` while the tail is comfortably representable and an
/// asymptotic expansion of the Mills ratio beyond that.
pub fn log10_normal_upper_tail(x: f64) -> f64 {
    const SWITCH: f64 = 10.0;
    if x < SWITCH {
        return (0.5 * erfc(x / std::f64::consts::SQRT_2)).log10();
    }
    // ln P(Z > x) = -x^2/2 - ln x - ln sqrt(2 pi) + ln(1 - 1/x^2 + 3/x^4 - 15/x^6 + ...)
    let inv2 = 1.0 / (x * x);
    let mut term = 1.0;
    let mut series = 1.0;
    for k in 1..=6 {
        term *= -((2 * k - 1) as f64) * inv2;
        series += term;
    }
    let ln_tail = -0.5 * x * x - x.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() + series.ln();
    ln_tail / std::f64::consts::LN_10
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UTestResult {
    /// Rank-sum statistic of the first group.
    pub u: f64,
    pub n1: usize,
    pub n2: usize,
    /// Continuity-corrected standard score of `u`.
    pub z: f64,
    /// Two-sided; authoritative when `p` underflows.
    pub log10_p: f64,
    pub p: f64,
    /// Number of distinct values shared by more than one observation.
    pub tie_groups: usize,
    /// Observations belonging to those groups.
    pub tied_observations: usize,
}

impl fmt::Display for UTestResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "test=mann-whitney-u two-sided continuity-corrected")?;
        writeln!(f, "n1={}", self.n1)?;
        writeln!(f, "n2={}", self.n2)?;
        writeln!(f, "U={}", self.u)?;
        writeln!(f, "z={:.6}", self.z)?;
        writeln!(f, "log10_p={:.6}", self.log10_p)?;
        writeln!(f, "p={:e}", self.p)?;
        writeln!(f, "tie_groups={}", self.tie_groups)?;
        write!(f, "tied_observations={}", self.tied_observations)
    }
}

/// Two-sided Mann-Whitney U test via the normal approximation with
/// tie-corrected variance and a 0.5 continuity correction.
pub fn mann_whitney_u(group_a: &[f64], group_b: &[f64]) -> Result<UTestResult> {
    let (n1, n2) = (group_a.len(), group_b.len());
    if n1 == 0 || n2 == 0 {
        return Err(Error::Degenerate("both groups need at least one observation".into()));
    }
    if group_a.iter().chain(group_b).any(|v| v.is_nan()) {
        return Err(Error::Domain("NaN observation".into()));
    }
    let pooled: Vec<f64> = group_a.iter().chain(group_b).copied().collect();
    let ranks = mid_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..n1].iter().sum();
    let u = rank_sum_a - (n1 * (n1 + 1)) as f64 / 2.0;

    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let (mut tie_term, mut tie_groups, mut tied_observations) = (0.0, 0, 0);
    for run in sorted.chunk_by(|a, b| a == b) {
        let t = run.len();
        if t > 1 {
            tie_groups += 1;
            tied_observations += t;
            tie_term += (t * t * t - t) as f64;
        }
    }

    let n = (n1 + n2) as f64;
    let (f1, f2) = (n1 as f64, n2 as f64);
    let variance = if n > 1.0 {
        f1 * f2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)))
    } else {
        0.0
    };
    if !(variance > 0.0) {
        return Err(Error::Degenerate("all observations are identical".into()));
    }
    let diff = u - f1 * f2 / 2.0;
    let z = diff.signum() * (diff.abs() - 0.5).max(0.0) / variance.sqrt();
    let log10_p = (std::f64::consts::LOG10_2 + log10_normal_upper_tail(z.abs())).min(0.0);
    Ok(UTestResult {
        u,
        n1,
        n2,
        z,
        log10_p,
        p: 10f64.powf(log10_p),
        tie_groups,
        tied_observations,
    })
}

/// Sample standard deviation over mean.
pub fn coefficient_of_variation(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::Degenerate("need at least 2 values".into()));
    }
    let m = mean(xs);
    if !(m > 0.0) {
        return Err(Error::Domain(format!("mean must be positive, got {m}")));
    }
    Ok(sample_sd(xs) / m)
}

/// Ratio series sorted from highest to lowest ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioAnalysis {
    pub labels: Vec<String>,
    pub raw_ratios: Vec<f64>,
    /// `raw_ratios / median`.
    pub normalized: Vec<f64>,
    pub median: f64,
    pub mean: f64,
    pub std_dev: f64,
    pub cv: f64,
    /// Items dropped for a nonpositive denominator or non-finite numerator.
    pub excluded: Vec<String>,
}

pub fn ratio_analysis(labels: &[String], numerator: &[f64], denominator: &[f64]) -> Result<RatioAnalysis> {
    if labels.len() != numerator.len() || numerator.len() != denominator.len() {
        return Err(Error::Validation("ratio inputs have different lengths".into()));
    }
    let mut kept: Vec<(String, f64)> = Vec::new();
    let mut excluded = Vec::new();
    for ((l, &num), &den) in labels.iter().zip(numerator).zip(denominator) {
        if den > 0.0 && num.is_finite() {
            kept.push((l.clone(), num / den));
        } else {
            excluded.push(l.clone());
        }
    }
    if kept.is_empty() {
        return Err(Error::Degenerate("every denominator is zero".into()));
    }
    kept.sort_by(|a, b| b.1.total_cmp(&a.1));
    let raw_ratios: Vec<f64> = kept.iter().map(|(_, r)| *r).collect();
    let med = median(&raw_ratios);
    if !(med > 0.0) {
        return Err(Error::Degenerate(format!("median ratio is {med}; cannot normalise")));
    }
    let m = mean(&raw_ratios);
    let sd = if raw_ratios.len() > 1 { sample_sd(&raw_ratios) } else { 0.0 };
    Ok(RatioAnalysis {
        labels: kept.into_iter().map(|(l, _)| l).collect(),
        normalized: raw_ratios.iter().map(|r| r / med).collect(),
        raw_ratios,
        median: med,
        mean: m,
        std_dev: sd,
        cv: if m > 0.0 { sd / m } else { f64::NAN },
        excluded,
    })
}

/// Median of the top third over median of the bottom third, each third
/// holding `ceil(n / 3)` items of the descending sort.
pub fn tercile_median_ratio(xs: &[f64]) -> Result<f64> {
    if xs.len() < 3 {
        return Err(Error::Degenerate(format!("need at least 3 values, got {}", xs.len())));
    }
    if let Some(bad) = xs.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Domain(format!("values must be positive, found {bad}")));
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    let k = v.len().div_ceil(3);
    Ok(median(&v[..k]) / median(&v[v.len() - k..]))
}

/// Pairs two metrics per journal, dropping journals where either is undefined.
pub fn paired_metrics(
    scores: &MetricScores,
    x: Metric,
    y: Metric,
    keep: impl Fn(&str) -> bool,
) -> (PairedObservations, usize) {
    let mut labels = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut excluded = 0;
    for r in scores.records.iter().filter(|r| keep(&r.journal_id)) {
        match (r.metric(x), r.metric(y)) {
            (Some(a), Some(b)) => {
                labels.push(r.journal_id.clone());
                xs.push(a);
                ys.push(b);
            }
            _ => excluded += 1,
        }
    }
    let obs = PairedObservations {
        labels,
        x: xs,
        y: ys,
        x_name: x.to_string(),
        y_name: y.to_string(),
    };
    (obs, excluded)
}

pub const MIN_FIELD_SIZE: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldCorrelations {
    pub by_field: BTreeMap<String, CorrelationResult>,
    /// Fields that were not evaluated, with the reason.
    pub skipped: Vec<(String, String)>,
    /// All journals with both metrics defined, regardless of field.
    pub pooled: Option<CorrelationResult>,
}

/// Correlation of two metrics within each field label, plus the pooled value.
/// Cross-listed journals count in every field they belong to.
pub fn per_field_correlations(
    scores: &MetricScores,
    table: &JournalTable,
    x: Metric,
    y: Metric,
    kind: CorrelationKind,
    log: bool,
) -> FieldCorrelations {
    let run = |keep: &dyn Fn(&str) -> bool| -> std::result::Result<CorrelationResult, String> {
        let (obs, excluded) = paired_metrics(scores, x, y, keep);
        if obs.len() < MIN_FIELD_SIZE {
            return Err(format!("only {} journals with both metrics", obs.len()));
        }
        let (obs, dropped) = if log { drop_nonpositive(obs) } else { (obs, 0) };
        if obs.len() < MIN_FIELD_SIZE {
            return Err(format!("only {} journals with positive metrics", obs.len()));
        }
        correlate(&obs, kind, log)
            .map(|mut r| {
                r.excluded = excluded + dropped;
                r
            })
            .map_err(|e| e.to_string())
    };

    let mut by_field = BTreeMap::new();
    let mut skipped = Vec::new();
    for field in table.field_labels() {
        let keep = |id: &str| table.get(id).is_some_and(|e| e.fields.contains(field));
        match run(&keep) {
            Ok(r) => {
                by_field.insert(field.to_string(), r);
            }
            Err(reason) => skipped.push((field.to_string(), reason)),
        }
    }
    let pooled = run(&|_: &str| true).ok();
    FieldCorrelations {
        by_field,
        skipped,
        pooled,
    }
}

fn drop_nonpositive(obs: PairedObservations) -> (PairedObservations, usize) {
    let mut out = PairedObservations {
        labels: Vec::new(),
        x: Vec::new(),
        y: Vec::new(),
        x_name: obs.x_name,
        y_name: obs.y_name,
    };
    let mut dropped = 0;
    for ((l, x), y) in obs.labels.into_iter().zip(obs.x).zip(obs.y) {
        if x > 0.0 && y > 0.0 {
            out.labels.push(l);
            out.x.push(x);
            out.y.push(y);
        } else {
            dropped += 1;
        }
    }
    (out, dropped)
}

/// Orders correlation results for reporting: by field label, pooled last.
pub fn correlations_csv(fc: &FieldCorrelations) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "n", "rho", "kind", "log_transformed"])
        .expect("in-memory write");
    let rows = fc
        .by_field
        .iter()
        .map(|(f, r)| (f.as_str(), r))
        .chain(fc.pooled.iter().map(|r| ("*", r)));
    for (field, r) in rows {
        w.write_record([
            field,
            &r.n.to_string(),
            &format!("{:.6}", r.rho),
            r.kind.as_str(),
            &r.log_transformed.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::bigmac_fixture;

    fn obs(x: &[f64], y: &[f64]) -> PairedObservations {
        PairedObservations::from_series(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn pearson_bigmac() {
        let r = pearson(&bigmac_fixture()).unwrap();
        assert!((r.rho - 0.99).abs() <= 0.005, "{}", r.rho);
    }

    #[test]
    fn pearson_identity_and_reversal() {
        let x = [1.0, 2.0, 4.0, 7.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&obs(&x, &x)).unwrap().rho - 1.0).abs() < 1e-15);
        assert!((pearson(&obs(&x, &neg)).unwrap().rho + 1.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_zero_variance() {
        assert!(matches!(
            pearson(&obs(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0])),
            Err(Error::UndefinedCorrelation(_))
        ));
    }

    #[test]
    fn spearman_monotone() {
        let x = [0.1, 0.5, 1.0, 2.0, 3.5];
        let ex: Vec<f64> = x.iter().map(|v: &f64| v.exp()).collect();
        let rev: Vec<f64> = x.iter().rev().copied().collect();
        assert!((spearman(&obs(&x, &ex)).unwrap().rho - 1.0).abs() < 1e-15);
        assert!((spearman(&obs(&x, &rev)).unwrap().rho + 1.0).abs() < 1e-15);
    }

    #[test]
    fn spearman_with_ties_matches_hand_ranks() {
        // mid-ranks of x: (1, 2.5, 2.5, 4); y already ranked (1, 2, 3, 4)
        // centred x: (-1.5, 0, 0, 1.5), centred y: (-1.5, -0.5, 0.5, 1.5)
        // sxy = 4.5, sxx = 4.5, syy = 5  => rho = 4.5 / sqrt(22.5) = 0.9486832980505138
        let r = spearman(&obs(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!((r.rho - 0.9486832980505138).abs() < 1e-14, "{}", r.rho);
    }

    #[test]
    fn spearman_all_tied() {
        assert!(spearman(&obs(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0])).is_err());
    }

    #[test]
    fn mid_ranks_average_ties() {
        assert_eq!(mid_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn log_pearson_power_law() {
        let x = [0.5, 1.0, 3.0, 9.0];
        let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
        let r = log_pearson(&obs(&x, &sq)).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-14);
        assert!(r.log_transformed);
    }

    #[test]
    fn log_pearson_names_offender() {
        let o = PairedObservations::new(
            vec!["a".into(), "zeroed".into()],
            vec![1.0, 0.0],
            vec![1.0, 2.0],
            "x",
            "y",
        )
        .unwrap();
        let err = log_pearson(&o).unwrap_err();
        assert!(err.to_string().contains("zeroed"));
    }

    #[test]
    fn mann_whitney_two_by_two() {
        // exact two-sided p is 2/6 by enumerating C(4,2) rank splits
        let r = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(r.u, 0.0);
        assert!((r.p - 1.0 / 3.0).abs() < 0.1, "{}", r.p);
    }

    #[test]
    fn mann_whitney_identical_groups() {
        let a = [1.0, 4.0, 2.0, 8.0];
        let r = mann_whitney_u(&a, &a).unwrap();
        assert_eq!(r.z, 0.0);
        assert_eq!(r.p, 1.0);
        assert_eq!(r.log10_p, 0.0);
    }

    #[test]
    fn mann_whitney_all_identical_is_degenerate() {
        assert!(matches!(
            mann_whitney_u(&[1.0, 1.0], &[1.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(mann_whitney_u(&[], &[1.0]).is_err());
    }

    #[test]
    fn mann_whitney_counts_ties() {
        let r = mann_whitney_u(&[1.0, 2.0, 2.0], &[2.0, 3.0, 3.0]).unwrap();
        assert_eq!(r.tie_groups, 2);
        assert_eq!(r.tied_observations, 5);
    }

    #[test]
    fn normal_tail_switch_is_continuous() {
        let below = log10_normal_upper_tail(10.0 - 1e-9);
        let above = log10_normal_upper_tail(10.0);
        assert!((below - above).abs() < 1e-8, "{below} vs {above}");
        // P(Z > 30) = 4.906713927148187e-198
        assert!((log10_normal_upper_tail(30.0) - 4.906713927148187e-198f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn cv_examples() {
        let b = bigmac_fixture();
        assert!((coefficient_of_variation(&b.ratios()).unwrap() - 0.62).abs() <= 0.01);
        assert!((coefficient_of_variation(&b.x).unwrap() - 3.85).abs() <= 0.01);
        assert_eq!(coefficient_of_variation(&[4.0, 4.0, 4.0]).unwrap(), 0.0);
        assert!(matches!(coefficient_of_variation(&[-1.0, 0.5]), Err(Error::Domain(_))));
    }

    #[test]
    fn ratio_analysis_bigmac() {
        let b = bigmac_fixture();
        let ra = ratio_analysis(&b.labels, &b.y, &b.x).unwrap();
        assert_eq!(ra.labels[0], "Denmark");
        assert_eq!(ra.labels[21], "China");
        for (r, printed) in ra.raw_ratios.iter().zip(crate::corpus::BIGMAC_PRINTED_REAL_WAGE) {
            assert!((r - printed).abs() <= 0.005);
        }
        assert!((median(&ra.normalized) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_analysis_constant() {
        let labels: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let den = [1.0, 2.0, 5.0, 7.0, 11.0];
        let num: Vec<f64> = den.iter().map(|d| 3.0 * d).collect();
        let ra = ratio_analysis(&labels, &num, &den).unwrap();
        assert!(ra.normalized.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn ratio_analysis_excludes_zero_denominators() {
        let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let ra = ratio_analysis(&labels, &[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0]).unwrap();
        assert_eq!(ra.excluded, vec!["b".to_string()]);
        assert!(ratio_analysis(&labels, &[1.0, 2.0, 3.0], &[0.0; 3]).is_err());
    }

    #[test]
    fn ratio_analysis_cv_from_raw() {
        let labels: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let ra = ratio_analysis(&labels, &[2.0, 3.0, 8.0, 1.0], &[1.0, 1.0, 2.0, 1.0]).unwrap();
        // ratios 2, 3, 4, 1: mean 2.5, sample sd sqrt(5/3)
        assert!((ra.mean - 2.5).abs() < 1e-15);
        assert!((ra.cv - (5.0f64 / 3.0).sqrt() / 2.5).abs() < 1e-15);
        assert_eq!(ra.raw_ratios, vec![4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn tercile_examples() {
        assert_eq!(tercile_median_ratio(&[8.0, 4.0, 2.0, 1.0]).unwrap(), 4.0);
        assert_eq!(tercile_median_ratio(&[3.0; 7]).unwrap(), 1.0);
        let r = tercile_median_ratio(&bigmac_fixture().ratios()).unwrap();
        assert!((4.5..=6.0).contains(&r), "{r}");
        assert!(tercile_median_ratio(&[1.0, 0.0, 2.0]).is_err());
    }
}
