//! Independent oracles shared by the integration suites.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet};

use eigenrank::corpus::{CitationLedger, CitationRecord, JournalEntry, JournalTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CENSUS: i32 = 2006;

/// Dense Gaussian elimination with partial pivoting.
pub fn solve_dense(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x
}

/// Fixed point of the damped walk, solved directly from the raw matrix `z`
/// (`z[i][j]` = citations from j to i) and article counts.
/// Returns `(pi, ef, ai)`.
pub fn dense_oracle(z: &[Vec<f64>], articles: &[f64], alpha: f64) -> (Vec<f64>, Vec<f64>, Vec<Option<f64>>) {
    let n = articles.len();
    let total: f64 = articles.iter().sum();
    let a: Vec<f64> = articles.iter().map(|x| x / total).collect();
    let col_sum: Vec<f64> = (0..n).map(|j| (0..n).map(|i| z[i][j]).sum()).collect();
    // transition with dangling columns replaced by a
    let mut p = vec![vec![0.0; n]; n];
    for j in 0..n {
        for i in 0..n {
            p[i][j] = if col_sum[j] > 0.0 { z[i][j] / col_sum[j] } else { a[i] };
        }
    }
    let mut lhs = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            lhs[i][j] = if i == j { 1.0 } else { 0.0 } - alpha * p[i][j];
        }
    }
    let rhs: Vec<f64> = a.iter().map(|w| (1.0 - alpha) * w).collect();
    let pi = solve_dense(lhs, rhs);
    let s: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| col_sum[j] > 0.0).map(|j| z[i][j] / col_sum[j] * pi[j]).sum())
        .collect();
    let st: f64 = s.iter().sum();
    let ef: Vec<f64> = s.iter().map(|x| 100.0 * x / st).collect();
    let ai = ef
        .iter()
        .zip(&a)
        .map(|(e, w)| if *w > 0.0 { Some(0.01 * e / w) } else { None })
        .collect();
    (pi, ef, ai)
}

pub fn table_from(articles: &[(String, Vec<String>, BTreeMap<i32, u64>)]) -> JournalTable {
    JournalTable::new(
        articles
            .iter()
            .map(|(id, fields, years)| JournalEntry {
                journal_id: id.clone(),
                name: format!("Journal {id}"),
                fields: fields.iter().cloned().collect::<BTreeSet<_>>(),
                articles_by_year: years.clone(),
            })
            .collect(),
    )
    .unwrap()
}

/// A random corpus small enough for dense solves. Every journal publishes in
/// the 5-year window and at least one cross-citation exists.
pub struct RandomCorpus {
    pub table: JournalTable,
    pub ledger: CitationLedger,
    /// In-window, non-self citation counts, `z[cited][citing]`.
    pub z: Vec<Vec<f64>>,
    pub n5: Vec<f64>,
}

pub fn random_corpus(rng: &mut ChaCha8Rng, max_n: usize) -> RandomCorpus {
    let n = rng.random_range(2..=max_n);
    let ids: Vec<String> = (0..n).map(|i| format!("J{i}")).collect();
    let mut rows = Vec::new();
    let mut n5 = vec![0.0; n];
    for (i, id) in ids.iter().enumerate() {
        let mut years = BTreeMap::new();
        for y in CENSUS - 6..=CENSUS {
            if rng.random_bool(0.7) || y == CENSUS - 3 {
                let count = rng.random_range(1..60u64);
                years.insert(y, count);
                if (CENSUS - 5..CENSUS).contains(&y) {
                    n5[i] += count as f64;
                }
            }
        }
        rows.push((id.clone(), vec![format!("F{}", i % 2)], years));
    }
    let mut records = Vec::new();
    let mut z = vec![vec![0.0; n]; n];
    loop {
        for citing in 0..n {
            for cited in 0..n {
                if !rng.random_bool(0.55) {
                    continue;
                }
                let cited_year = rng.random_range(CENSUS - 8..=CENSUS);
                let citing_year = if rng.random_bool(0.85) { CENSUS } else { CENSUS - 1 };
                let count = rng.random_range(1..40u64);
                records.push(CitationRecord {
                    citing_id: ids[citing].clone(),
                    cited_id: ids[cited].clone(),
                    citing_year,
                    cited_year,
                    count,
                });
                if citing != cited && citing_year == CENSUS && (CENSUS - 5..CENSUS).contains(&cited_year) {
                    z[cited][citing] += count as f64;
                }
            }
        }
        if z.iter().flatten().any(|v| *v > 0.0) {
            break;
        }
    }
    RandomCorpus {
        table: table_from(&rows),
        ledger: CitationLedger::new(records),
        z,
        n5,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact two-sided Mann-Whitney p for untied data by enumerating every
/// assignment of ranks 1..=n1+n2 to the first group.
pub fn exact_mw_p(u_observed: f64, n1: usize, n2: usize) -> f64 {
    let n = n1 + n2;
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    let mut total = 0u64;
    let mut chosen = Vec::with_capacity(n1);
    fn rec(start: usize, n: usize, k: usize, chosen: &mut Vec<usize>, counts: &mut BTreeMap<i64, u64>, total: &mut u64) {
        if chosen.len() == k {
            let rank_sum: usize = chosen.iter().map(|r| r + 1).sum();
            let u = rank_sum as i64 - (k * (k + 1) / 2) as i64;
            *counts.entry(u).or_insert(0) += 1;
            *total += 1;
            return;
        }
        for r in start..n {
            chosen.push(r);
            rec(r + 1, n, k, chosen, counts, total);
            chosen.pop();
        }
    }
    rec(0, n, n1, &mut chosen, &mut counts, &mut total);
    let mu = (n1 * n2) as f64 / 2.0;
    let d = (u_observed - mu).abs();
    let extreme: u64 = counts
        .iter()
        .filter(|(u, _)| ((**u as f64) - mu).abs() >= d - 1e-9)
        .map(|(_, c)| c)
        .sum();
    extreme as f64 / total as f64
}

/// Worst |approximate - exact| over every attainable U for the given sizes.
pub fn mw_worst_gap(n1: usize, n2: usize) -> f64 {
    let max_u = n1 * n2;
    let mut worst: f64 = 0.0;
    for u in 0..=max_u {
        // realise U = u: group a takes u "wins" over group b
        let (a, b) = realise_u(u, n1, n2);
        let r = eigenrank::stats::mann_whitney_u(&a, &b).unwrap();
        assert_eq!(r.u, u as f64);
        worst = worst.max((r.p - exact_mw_p(u as f64, n1, n2)).abs());
    }
    worst
}

/// Untied samples whose first-group U statistic equals `u`.
pub fn realise_u(u: usize, n1: usize, n2: usize) -> (Vec<f64>, Vec<f64>) {
    // Start with every a below every b (U = 0) and move a's up one slot at a time.
    let mut slots: Vec<bool> = (0..n1 + n2).map(|i| i < n1).collect(); // true = a
    let mut remaining = u;
    while remaining > 0 {
        // swap the highest a that has a b immediately above it
        let i = (0..slots.len() - 1).rev().find(|&i| slots[i] && !slots[i + 1]).unwrap();
        slots.swap(i, i + 1);
        remaining -= 1;
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (rank, is_a) in slots.iter().enumerate() {
        if *is_a { a.push(rank as f64) } else { b.push(rank as f64) }
    }
    (a, b)
}

/// Figures rendered from the shipped fixtures, keyed by golden file name.
pub fn golden_figures() -> Vec<(&'static str, String)> {
    use eigenrank::corpus::bigmac_fixture;
    use eigenrank::metrics::{Metric, MetricScores};
    use eigenrank::report::{
        rank_comparison, render_cardinal_plot, render_histogram, render_ratio_plot, render_slopegraph, FigureSpec,
    };
    use eigenrank::stats::ratio_analysis;

    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic/expected_scores.csv");
    let scores = MetricScores::parse_csv(std::fs::File::open(path).unwrap(), CENSUS).unwrap();
    let cmp = rank_comparison(&scores, Metric::TotalCitations, Metric::Eigenfactor).unwrap();
    let spec = FigureSpec {
        title: "fixture".into(),
        ..FigureSpec::default()
    };
    let half = FigureSpec {
        top_fraction: 0.5,
        ..spec.clone()
    };
    let b = bigmac_fixture();
    let ra = ratio_analysis(&b.labels, &b.y, &b.x).unwrap();
    let values: Vec<f64> = (0..40).map(|i| ((i * 37) % 41) as f64 / 41.0).collect();
    vec![
        ("slopegraph.svg", render_slopegraph(&cmp, &half).unwrap()),
        ("cardinal.svg", render_cardinal_plot(&cmp, &spec, 6).unwrap()),
        ("histogram.svg", render_histogram(&values, 8, &spec).unwrap()),
        ("ratio.svg", render_ratio_plot(&ra, &spec).unwrap()),
    ]
}
