//! Monte-Carlo demonstrations of correlation manufactured by a shared factor.
//!
//! Each trial owns a ChaCha8 stream selected by `(seed, trial index)`, so
//! trials run in parallel and results do not depend on scheduling.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stats::{mean, pearson_r, sample_sd};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    LogNormal,
    NormalTruncatedPositive,
    UniformPositive,
}

impl DistributionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DistributionKind::LogNormal => "lognormal",
            DistributionKind::NormalTruncatedPositive => "normal-truncated-positive",
            DistributionKind::UniformPositive => "uniform-positive",
        }
    }
}

/// A strictly positive distribution given by its mean (`location`) and
/// coefficient of variation (`scale`). For the truncated families these are
/// the parameters before truncation. A zero scale yields the constant
/// `location`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub location: f64,
    pub scale: f64,
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(mean={}, cv={})", self.kind.as_str(), self.location, self.scale)
    }
}

impl DistributionSpec {
    pub fn lognormal(mean: f64, cv: f64) -> Self {
        Self {
            kind: DistributionKind::LogNormal,
            location: mean,
            scale: cv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.location > 0.0) || !self.location.is_finite() {
            return Err(Error::Domain(format!("location must be positive, got {}", self.location)));
        }
        if !(self.scale >= 0.0) || !self.scale.is_finite() {
            return Err(Error::Domain(format!("scale must be nonnegative, got {}", self.scale)));
        }
        Ok(())
    }

    /// Log-scale variance `ln(1 + cv^2)` of the lognormal with this cv.
    pub fn log_variance(&self) -> f64 {
        (self.scale * self.scale).ln_1p()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.scale == 0.0 {
            return self.location;
        }
        match self.kind {
            DistributionKind::LogNormal => {
                let s2 = self.log_variance();
                let mu = self.location.ln() - 0.5 * s2;
                let z: f64 = rng.sample(StandardNormal);
                (mu + s2.sqrt() * z).exp()
            }
            DistributionKind::NormalTruncatedPositive => {
                let sd = self.scale * self.location;
                loop {
                    let z: f64 = rng.sample(StandardNormal);
                    let x = self.location + sd * z;
                    if x > 0.0 {
                        return x;
                    }
                }
            }
            DistributionKind::UniformPositive => {
                let half = 3f64.sqrt() * self.scale * self.location;
                loop {
                    let x = self.location + half * (2.0 * rng.random::<f64>() - 1.0);
                    if x > 0.0 {
                        return x;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub trials: usize,
    /// One correlation per trial, in trial order.
    pub rhos: Vec<f64>,
    pub mean_rho: f64,
    pub sd_rho: f64,
    pub seed: u64,
}

impl SimulationResult {
    fn from_rhos(rhos: Vec<f64>, seed: u64) -> Self {
        let mean_rho = mean(&rhos);
        let sd_rho = if rhos.len() > 1 { sample_sd(&rhos) } else { 0.0 };
        Self {
            trials: rhos.len(),
            rhos,
            mean_rho,
            sd_rho,
            seed,
        }
    }

    pub fn fraction_positive(&self) -> f64 {
        self.rhos.iter().filter(|r| **r > 0.0).count() as f64 / self.trials as f64
    }

    /// Linear-interpolated quantile of the per-trial correlations.
    pub fn quantile(&self, q: f64) -> f64 {
        let mut v = self.rhos.clone();
        v.sort_by(f64::total_cmp);
        let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
    }

    /// `simulation.csv`: `trial,rho`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,rho\n");
        for (i, r) in self.rhos.iter().enumerate() {
            out.push_str(&format!("{i},{r:.12}\n"));
        }
        out
    }

    /// Plain-text summary; `spec` echoes the generating parameters.
    pub fn summary(&self, spec: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("spec={spec}\n"));
        out.push_str(&format!("seed={}\n", self.seed));
        out.push_str(&format!("trials={}\n", self.trials));
        out.push_str(&format!("mean_rho={:.6}\n", self.mean_rho));
        out.push_str(&format!("sd_rho={:.6}\n", self.sd_rho));
        for q in [0.05, 0.25, 0.5, 0.75, 0.95] {
            out.push_str(&format!("q{:02}={:.6}\n", (q * 100.0) as u32, self.quantile(q)));
        }
        out.push_str(&format!("fraction_positive={:.6}\n", self.fraction_positive()));
        out
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn run_trials<F>(trials: usize, seed: u64, trial: F) -> Result<SimulationResult>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let rhos = (0..trials)
        .into_par_iter()
        .map(|t| trial(&mut trial_rng(seed, t)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SimulationResult::from_rhos(rhos, seed))
}

fn check_size(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::Domain(format!("{what} must be at least {min}, got {n}")));
    }
    Ok(())
}

/// Randomly assembled skeletons: independent femur, tibia and humerus
/// lengths, correlating the indices femur/humerus and tibia/humerus.
pub fn simulate_ossuary(
    femur: &DistributionSpec,
    tibia: &DistributionSpec,
    humerus: &DistributionSpec,
    n_bones: usize,
    trials: usize,
    seed: u64,
) -> Result<SimulationResult> {
    check_size(n_bones, 10, "n_bones")?;
    for d in [femur, tibia, humerus] {
        d.validate()?;
    }
    run_trials(trials, seed, |rng| {
        let mut fh = Vec::with_capacity(n_bones);
        let mut th = Vec::with_capacity(n_bones);
        for _ in 0..n_bones {
            let f = femur.sample(rng);
            let t = tibia.sample(rng);
            let h = humerus.sample(rng);
            fh.push(f / h);
            th.push(t / h);
        }
        pearson_r(&fh, &th)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum YuleMode {
    /// `z1` and `z2` drawn independently.
    #[default]
    Independent,
    /// `z2` reuses the `z1` draw; a diagnostic upper reference.
    SharedNumerator,
}

/// Totals built from independent rates and a shared population:
/// `x1 = z1 * x3`, `x2 = z2 * x3`.
pub fn simulate_yule_products(
    z1: &DistributionSpec,
    z2: &DistributionSpec,
    x3: &DistributionSpec,
    n: usize,
    trials: usize,
    seed: u64,
    mode: YuleMode,
) -> Result<SimulationResult> {
    check_size(n, 10, "n")?;
    for d in [z1, z2, x3] {
        d.validate()?;
    }
    run_trials(trials, seed, |rng| {
        let mut x1 = Vec::with_capacity(n);
        let mut x2 = Vec::with_capacity(n);
        for _ in 0..n {
            let a = z1.sample(rng);
            let b = match mode {
                YuleMode::Independent => z2.sample(rng),
                YuleMode::SharedNumerator => a,
            };
            let c = x3.sample(rng);
            x1.push(a * c);
            x2.push(b * c);
        }
        pearson_r(&x1, &x2)
    })
}

/// Independent lognormal Article Influence, Impact Factor and article count
/// with the given coefficients of variation; correlates
/// `log AI + log N5` with `log IF + log N5`.
pub fn simulate_journal_sizes(
    ai_cv: f64,
    if_cv: f64,
    n5_cv: f64,
    n_journals: usize,
    trials: usize,
    seed: u64,
) -> Result<SimulationResult> {
    check_size(n_journals, 3, "n_journals")?;
    let specs = [ai_cv, if_cv, n5_cv].map(|cv| DistributionSpec::lognormal(1.0, cv));
    for s in &specs {
        s.validate()?;
    }
    let [ai, impact, n5] = specs;
    run_trials(trials, seed, |rng| {
        let mut log_ef = Vec::with_capacity(n_journals);
        let mut log_tc = Vec::with_capacity(n_journals);
        for _ in 0..n_journals {
            let a = ai.sample(rng).ln();
            let f = impact.sample(rng).ln();
            let size = n5.sample(rng).ln();
            log_ef.push(a + size);
            log_tc.push(f + size);
        }
        pearson_r(&log_ef, &log_tc)
    })
}

pub const DEFAULT_LOGISTIC_BURN_IN: usize = 1000;

/// Lag-one correlation of the logistic map `x <- r x (1 - x)` after
/// discarding `burn_in` iterates.
pub fn logistic_map_correlation(r: f64, x0: f64, n: usize, burn_in: usize) -> Result<f64> {
    if !(r > 0.0 && r <= 4.0) {
        return Err(Error::Domain(format!("r must lie in (0, 4], got {r}")));
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::Domain(format!("x0 must lie in (0, 1), got {x0}")));
    }
    check_size(n, 1000, "n")?;
    let step = |x: f64| r * x * (1.0 - x);
    let mut x = x0;
    for _ in 0..burn_in {
        x = step(x);
    }
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(x);
    for _ in 0..n {
        x = step(x);
        orbit.push(x);
    }
    let (lo, hi) = orbit
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if hi - lo <= 1e-12 {
        return Err(Error::UndefinedCorrelation(format!(
            "orbit settled at {x} after burn-in; the series is constant"
        )));
    }
    pearson_r(&orbit[..n], &orbit[1..])
}
