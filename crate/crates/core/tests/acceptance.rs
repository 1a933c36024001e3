//! Exit criteria. Prints one line per criterion and fails if any does.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use common::{dense_oracle, golden_figures, mw_worst_gap, random_corpus, rng, CENSUS};
use eigenrank::corpus::bigmac_fixture;
use eigenrank::metrics::{compute_scores, decomposition_check, MetricScores, MetricsConfig};
use eigenrank::report::{rank_comparison_from, render_slopegraph, FigureSpec, Movement};
use eigenrank::spurious::{
    logistic_map_correlation, simulate_journal_sizes, simulate_ossuary, simulate_yule_products, DistributionSpec,
    YuleMode, DEFAULT_LOGISTIC_BURN_IN,
};
use eigenrank::stats::{
    coefficient_of_variation, log10_normal_upper_tail, mann_whitney_u, mean, pearson, sample_sd,
    tercile_median_ratio,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn num(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

fn within(name: &str, value: f64, target: f64, tol: f64) -> Result<String, String> {
    let s = format!("{name}={} (target {} +/- {tol})", num(value), num(target));
    if (value - target).abs() <= tol {
        Ok(s)
    } else {
        Err(s)
    }
}

fn in_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<String, String> {
    let s = format!("{name}={} (range [{lo}, {hi}])", num(value));
    if (lo..=hi).contains(&value) {
        Ok(s)
    } else {
        Err(s)
    }
}

fn all(parts: Vec<Result<String, String>>) -> Outcome {
    let failed = parts.iter().any(|p| p.is_err());
    let text = parts
        .into_iter()
        .map(|p| p.unwrap_or_else(|e| format!("FAILED {e}")))
        .collect::<Vec<_>>()
        .join("; ");
    if failed {
        Err(text)
    } else {
        Ok(text)
    }
}

fn bigmac_table() -> Outcome {
    let b = bigmac_fixture();
    let real = b.ratios();
    all(vec![
        within("rho", pearson(&b).map_err(|e| e.to_string())?.rho, 0.99, 0.005),
        within("real_wage_mean", mean(&real), 3.72, 0.01),
        within("real_wage_sd", sample_sd(&real), 2.29, 0.02),
        within("real_wage_cv", coefficient_of_variation(&real).unwrap(), 0.62, 0.01),
        within("price_cv", coefficient_of_variation(&b.x).unwrap(), 3.85, 0.02),
        within("wage_cv", coefficient_of_variation(&b.y).unwrap(), 3.23, 0.02),
        in_range("tercile_ratio", tercile_median_ratio(&real).unwrap(), 4.5, 6.0),
    ])
}

fn ossuary() -> Outcome {
    let d = DistributionSpec::lognormal(1.0, 0.1);
    let start = Instant::now();
    let r = simulate_ossuary(&d, &d, &d, 1000, 1000, 0).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    all(vec![
        in_range("mean_rho", r.mean_rho, 0.40, 0.55),
        in_range("seconds", secs, 0.0, 10.0),
    ])
}

fn log_share(v1: f64, v2: f64, v3: f64) -> f64 {
    v3 / ((v1 + v3) * (v2 + v3)).sqrt()
}

fn yule() -> Outcome {
    let mut parts = Vec::new();
    let ln = |cv: f64| DistributionSpec::lognormal(1.0, cv);
    let lv = |cv: f64| ln(cv).log_variance();
    let r = simulate_yule_products(&ln(0.1), &ln(0.1), &ln(0.1), 1000, 500, 0, YuleMode::Independent)
        .map_err(|e| e.to_string())?;
    parts.push(if r.mean_rho > 0.0 {
        Ok(format!("mean_rho={:.4} > 0", r.mean_rho))
    } else {
        Err(format!("mean_rho={:.4} > 0", r.mean_rho))
    });
    parts.push(in_range("fraction_positive", r.fraction_positive(), 0.99, 1.0));
    parts.push(within("equal_cv_vs_formula", r.mean_rho, log_share(lv(0.1), lv(0.1), lv(0.1)), 0.05));
    let r = simulate_yule_products(&ln(0.05), &ln(0.05), &ln(0.5), 1000, 500, 1, YuleMode::Independent)
        .map_err(|e| e.to_string())?;
    parts.push(within("dominant_x3_vs_formula", r.mean_rho, log_share(lv(0.05), lv(0.05), lv(0.5)), 0.05));
    all(parts)
}

fn journal_sizes() -> Outcome {
    let start = Instant::now();
    let r = simulate_journal_sizes(1.785, 1.548, 1.910, 7611, 100, 0).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    all(vec![
        in_range("mean_rho", r.mean_rho, 0.5, 0.7),
        in_range("seconds", secs, 0.0, 30.0),
    ])
}

fn metrics_oracle() -> Outcome {
    let mut r = rng(5);
    let (mut worst, mut worst_sum, mut worst_ai) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let c = random_corpus(&mut r, 6);
        let (scores, _) = compute_scores(&c.ledger, &c.table, &MetricsConfig::new(CENSUS)).map_err(|e| e.to_string())?;
        let (_, ef, ai) = dense_oracle(&c.z, &c.n5, 0.85);
        let total: f64 = c.n5.iter().sum();
        let mut weighted = 0.0;
        for (k, rec) in scores.records.iter().enumerate() {
            worst = worst.max((rec.ef - ef[k]).abs());
            let a = rec.ai.ok_or("undefined AI")?;
            worst = worst.max((a - ai[k].ok_or("undefined oracle AI")?).abs());
            weighted += c.n5[k] / total * a;
        }
        worst_sum = worst_sum.max((scores.records.iter().map(|r| r.ef).sum::<f64>() - 100.0).abs());
        worst_ai = worst_ai.max((weighted - 1.0).abs());
    }
    all(vec![
        in_range("max_abs_diff", worst, 0.0, 1e-9),
        in_range("max_ef_sum_error", worst_sum, 0.0, 1e-9),
        in_range("max_weighted_ai_error", worst_ai, 0.0, 1e-9),
    ])
}

fn decomposition() -> Outcome {
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let c = random_corpus(&mut r, 6);
        let (scores, _) = compute_scores(&c.ledger, &c.table, &MetricsConfig::new(CENSUS)).map_err(|e| e.to_string())?;
        worst = worst.max(decomposition_check(&scores).map_err(|e| e.to_string())?.relative_spread);
    }
    let file = fs::File::open(fixture("synthetic/expected_scores.csv")).map_err(|e| e.to_string())?;
    let scores = MetricScores::parse_csv(file, CENSUS).map_err(|e| e.to_string())?;
    let fixture_spread = decomposition_check(&scores).map_err(|e| e.to_string())?.relative_spread;
    all(vec![
        in_range("max_relative_spread", worst, 0.0, 1e-9),
        in_range("fixture_relative_spread", fixture_spread, 0.0, 1e-9),
    ])
}

fn mann_whitney() -> Outcome {
    let mut failing = Vec::new();
    let mut worst = 0.0f64;
    for n1 in 1..=8 {
        for n2 in 1..=8 {
            let gap = mw_worst_gap(n1, n2);
            worst = worst.max(gap);
            if gap > 0.08 {
                failing.push(format!("({n1},{n2}):{gap:.3}"));
            }
        }
    }
    let gaps = if failing.is_empty() {
        Ok(format!("max |approx - exact| = {worst:.4} <= 0.08 for n1,n2 in 1..=8"))
    } else {
        Err(format!(
            "max |approx - exact| = {worst:.4}; sizes over 0.08: {}",
            failing.join(" ")
        ))
    };
    let tails: Vec<f64> = (0..=300).map(|k| log10_normal_upper_tail(k as f64 / 10.0)).collect();
    let finite = tails.iter().all(|v| v.is_finite()) && tails.windows(2).all(|w| w[1] < w[0]);
    let a: Vec<f64> = (0..1000).map(|i| 1.42 + i as f64 * 1e-5).collect();
    let b: Vec<f64> = (0..1000).map(|i| 2.12 + i as f64 * 1e-5).collect();
    let t = mann_whitney_u(&a, &b).map_err(|e| e.to_string())?;
    let extreme = if finite && t.log10_p.is_finite() && t.z.abs() > 30.0 {
        Ok(format!("log10_p finite for |z| <= 30; separated groups z={:.2} log10_p={:.1}", t.z, t.log10_p))
    } else {
        Err(format!("non-finite log10_p (z={}, log10_p={})", t.z, t.log10_p))
    };
    all(vec![gaps, extreme])
}

fn logistic() -> Outcome {
    let rho = logistic_map_correlation(4.0, 0.2, 1_000_000, DEFAULT_LOGISTIC_BURN_IN).map_err(|e| e.to_string())?;
    all(vec![within("rho", rho, 0.0, 0.01)])
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn renderer_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scores = dir.path().join("scores.csv");
    let corr = dir.path().join("correlations.csv");
    let exe = env!("CARGO_BIN_EXE_eigenrank");
    let run = |args: Vec<String>| -> Result<(), String> {
        let o = Command::new(exe).args(&args).output().map_err(|e| e.to_string())?;
        if o.status.success() {
            Ok(())
        } else {
            Err(format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)))
        }
    };
    let s = |p: &PathBuf| p.to_str().unwrap().to_string();
    run(vec![
        "compute".into(),
        "--journals".into(),
        s(&fixture("synthetic/journals.csv")),
        "--citations".into(),
        s(&fixture("synthetic/citations.csv")),
        "--year".into(),
        "2006".into(),
        "--out".into(),
        s(&scores),
    ])?;
    run(vec![
        "correlate".into(),
        "--scores".into(),
        s(&scores),
        "--journals".into(),
        s(&fixture("synthetic/journals.csv")),
        "--by-field".into(),
        "--out".into(),
        s(&corr),
    ])?;
    let mut mismatched = Vec::new();
    for kind in ["slopegraph", "cardinal", "histogram", "ratio"] {
        let mut outputs = Vec::new();
        for attempt in 0..2 {
            let out = dir.path().join(format!("{kind}{attempt}.svg"));
            let mut args = vec!["plot".to_string(), kind.into(), "--out".into(), s(&out)];
            if kind == "histogram" {
                args.extend(["--input".into(), s(&corr)]);
            } else {
                args.extend(["--scores".into(), s(&scores), "--top-fraction".into(), "0.5".into()]);
            }
            run(args)?;
            outputs.push(fs::read(&out).map_err(|e| e.to_string())?);
        }
        if outputs[0] != outputs[1] {
            mismatched.push(kind);
        }
    }
    let golden_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let stale: Vec<&str> = golden_figures()
        .into_iter()
        .filter(|(name, svg)| fs::read_to_string(golden_dir.join(name)).ok().as_deref() != Some(svg.as_str()))
        .map(|(name, _)| name)
        .collect();

    let mut r = rng(9);
    let mut tally_mismatch = 0;
    for _ in 0..100 {
        let n = r.random_range(2..60);
        let labels: Vec<String> = (0..n).map(|i| format!("J{i}")).collect();
        let left: Vec<f64> = (0..n).map(|_| r.random_range(0..30) as f64).collect();
        let mut right = left.clone();
        right.shuffle(&mut r);
        let cmp = rank_comparison_from(&labels, &left, &right, "l", "r").map_err(|e| e.to_string())?;
        let svg = render_slopegraph(&cmp, &FigureSpec::default()).map_err(|e| e.to_string())?;
        let tally = cmp.tally();
        for m in [Movement::Up, Movement::Down, Movement::Same] {
            let drawn = svg.matches(&format!("class=\"connector {}\"", m.as_str())).count();
            if drawn != tally.get(&m).copied().unwrap_or(0) {
                tally_mismatch += 1;
            }
        }
    }
    let runs = if mismatched.is_empty() {
        Ok("4 plot commands byte-identical across runs".to_string())
    } else {
        Err(format!("differing output: {mismatched:?}"))
    };
    let golden = if stale.is_empty() {
        Ok("fixture renders match golden snapshots".to_string())
    } else {
        Err(format!("golden mismatch: {stale:?}"))
    };
    let tallies = if tally_mismatch == 0 {
        Ok("connector colours match movement tallies on 100 comparisons".to_string())
    } else {
        Err(format!("{tally_mismatch} tally mismatches"))
    };
    all(vec![runs, golden, tallies])
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "Big Mac table statistics", bigmac_table),
        (2, "ossuary index correlation", ossuary),
        (3, "product construction correlation", yule),
        (4, "journal-size common factor", journal_sizes),
        (5, "Eigenfactor dense-solve equivalence", metrics_oracle),
        (6, "EF = c1 * AI * N5 decomposition", decomposition),
        (7, "Mann-Whitney approximation and log tail", mann_whitney),
        (8, "logistic map lag-one correlation", logistic),
        (9, "renderer determinism", renderer_determinism),
    ];
    let mut failures = 0;
    for (id, name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {id} PASS {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id} FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
