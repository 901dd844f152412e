//! Internet-ads bandit: `M` ads with unknown click rates, `N` visitors split
//! evenly across ads, every estimator run on the resulting click samples.

use rand::distr::{Distribution, Uniform};
use rand::Rng;

use crate::error::{Error, Result};
use crate::estimator::{estimate_all, EstimateRecord, SampleBatch};
use crate::par::{map_trials, Execution};
use crate::rng::{mix, trial_rng, TrialRng};
use crate::stats::MeanEstimate;

#[derive(Debug, Clone, PartialEq)]
pub struct BanditConfig {
    pub n_visitors: usize,
    pub n_ads: usize,
    pub rate_lo: f64,
    pub rate_hi: f64,
    pub trials: u64,
    pub k_fraction: f64,
    pub c: f64,
}

impl Default for BanditConfig {
    fn default() -> Self {
        BanditConfig {
            n_visitors: 30_000,
            n_ads: 30,
            rate_lo: 0.02,
            rate_hi: 0.05,
            trials: 2000,
            k_fraction: 0.15,
            c: 0.005,
        }
    }
}

impl BanditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_ads == 0 {
            return Err(Error::invalid("n_ads", "must be positive"));
        }
        if self.n_visitors == 0 {
            return Err(Error::invalid("n_visitors", "must be positive"));
        }
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if !in_unit(self.rate_lo) || !in_unit(self.rate_hi) || self.rate_lo > self.rate_hi {
            return Err(Error::invalid(
                "rate_lo",
                format!(
                    "need 0 < rate_lo <= rate_hi < 1, got [{}, {}]",
                    self.rate_lo, self.rate_hi
                ),
            ));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials", "must be positive"));
        }
        if !(self.k_fraction > 0.0 && self.k_fraction <= 1.0) {
            return Err(Error::invalid("k_fraction", "k_fraction out of (0,1]"));
        }
        if !(self.c > 0.0) {
            return Err(Error::invalid("c", "must be positive"));
        }
        Ok(())
    }

    /// Fixed candidate count, `max(1, round(k_fraction * M))` rounding half up.
    pub fn candidate_count(&self) -> usize {
        let k = (self.k_fraction * self.n_ads as f64 + 0.5).floor() as usize;
        k.clamp(1, self.n_ads)
    }

    pub fn samples_per_ad(&self) -> usize {
        self.n_visitors / self.n_ads
    }
}

pub fn sample_click_rates<R: Rng + ?Sized>(config: &BanditConfig, rng: &mut R) -> Vec<f64> {
    if config.rate_lo == config.rate_hi {
        return vec![config.rate_lo; config.n_ads];
    }
    let dist = Uniform::new_inclusive(config.rate_lo, config.rate_hi)
        .expect("validated rate interval");
    (0..config.n_ads).map(|_| dist.sample(rng)).collect()
}

/// One trial: fresh click rates, Bernoulli clicks, all five estimates.
pub fn run_trial(config: &BanditConfig, rng: &mut TrialRng) -> Result<EstimateRecord> {
    let per_ad = config.samples_per_ad();
    if per_ad < 2 {
        return Err(Error::TooFewSamples { per_ad });
    }
    let rates = sample_click_rates(config, rng);
    let samples: Vec<Vec<f64>> = rates
        .iter()
        .map(|&p| (0..per_ad).map(|_| f64::from(rng.random_bool(p) as u8)).collect())
        .collect();
    let mu_star = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let batch = SampleBatch::split(samples, rng)?;
    estimate_all(&batch, config.candidate_count(), config.c, mu_star, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    Impressions,
    Ads,
    MaxProb,
}

impl Setting {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "impressions" => Ok(Setting::Impressions),
            "ads" => Ok(Setting::Ads),
            "maxprob" => Ok(Setting::MaxProb),
            other => Err(Error::invalid(
                "setting",
                format!("unknown setting `{other}` (expected impressions, ads or maxprob)"),
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Setting::Impressions => "impressions",
            Setting::Ads => "ads",
            Setting::MaxProb => "maxprob",
        }
    }

    /// The sweep points used in the published experiment.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            Setting::Impressions => (1..=10).map(|i| 30_000.0 * i as f64).collect(),
            Setting::Ads => (1..=10).map(|i| 10.0 * i as f64).collect(),
            Setting::MaxProb => (3..=10).map(|i| i as f64 / 100.0).collect(),
        }
    }

    /// Applies one sweep value to a copy of `base`.
    pub fn apply(self, base: &BanditConfig, value: f64) -> Result<BanditConfig> {
        let mut cfg = base.clone();
        let ok = match self {
            Setting::Impressions => {
                cfg.n_visitors = value as usize;
                (30_000.0..=300_000.0).contains(&value) && value.fract() == 0.0
            }
            Setting::Ads => {
                cfg.n_ads = value as usize;
                (10.0..=100.0).contains(&value) && value.fract() == 0.0
            }
            Setting::MaxProb => {
                cfg.rate_hi = value;
                (0.03..=0.1).contains(&value)
            }
        };
        if !ok {
            return Err(Error::invalid(
                "values",
                format!("{value} is outside the {} sweep range", self.name()),
            ));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub const ESTIMATOR_NAMES: [&str; 5] = ["SE", "DE", "CDE", "AC-CDE", "Auto-AC-CDE"];

#[derive(Debug, Clone, PartialEq)]
pub struct BiasRow {
    pub setting_value: f64,
    pub estimator: &'static str,
    pub mean_bias: f64,
    /// Square of the mean bias.
    pub bias_squared: f64,
    /// Standard error of `mean_bias`.
    pub std_err: f64,
}

/// Per-estimator bias summary over `config.trials` trials.
///
/// Trial `t` uses the stream `trial_rng(seed, t)`.
pub fn bias_summary(
    config: &BanditConfig,
    setting_value: f64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<BiasRow>> {
    config.validate()?;
    let records = map_trials(config.trials, exec, |t| {
        run_trial(config, &mut trial_rng(seed, t))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let columns: [fn(&EstimateRecord) -> f64; 5] = [
        |r| r.se,
        |r| r.de,
        |r| r.cde,
        |r| r.ac_cde,
        |r| r.auto_ac_cde,
    ];
    Ok(ESTIMATOR_NAMES
        .iter()
        .zip(columns)
        .map(|(&name, col)| {
            let est = MeanEstimate::from_iter(records.iter().map(|r| col(r) - r.mu_star_true));
            BiasRow {
                setting_value,
                estimator: name,
                mean_bias: est.mean,
                bias_squared: est.mean * est.mean,
                std_err: est.std_err,
            }
        })
        .collect())
}

/// Bias table over a sweep. Sweep point `i` uses master seed `mix(seed, i)`.
pub fn sweep(
    setting: Setting,
    values: &[f64],
    base: &BanditConfig,
    seed: u64,
    exec: Execution,
) -> Result<Vec<BiasRow>> {
    if values.is_empty() {
        return Err(Error::invalid("values", "sweep needs at least one value"));
    }
    let mut rows = Vec::with_capacity(values.len() * ESTIMATOR_NAMES.len());
    for (i, &v) in values.iter().enumerate() {
        let cfg = setting.apply(base, v)?;
        rows.extend(bias_summary(&cfg, v, mix(seed, i as u64), exec)?);
    }
    Ok(rows)
}
