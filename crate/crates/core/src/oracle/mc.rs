use rand::Rng;

use crate::error::{Error, Result};
use crate::estimator::{
    ac_cde, adaptive_k, clipped_double_estimator, double_estimator, single_estimator,
    SampleBatch, SplitMeans,
};
use crate::par::{map_trials, Execution};
use crate::rng::{trial_rng, TrialRng};
use crate::stats::MeanEstimate;

use super::DistFamily;

/// An estimator of the maximum expected value, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind {
    Se,
    De,
    Cde,
    AcCde { k: usize },
    AutoAcCde { c: f64 },
    /// The B-side value at the candidate argmax, before clipping.
    CandidateB { k: usize },
}

impl EstimatorKind {
    pub fn name(&self) -> String {
        match self {
            EstimatorKind::Se => "SE".into(),
            EstimatorKind::De => "DE".into(),
            EstimatorKind::Cde => "CDE".into(),
            EstimatorKind::AcCde { k } => format!("AC-CDE(K={k})"),
            EstimatorKind::AutoAcCde { c } => format!("Auto-AC-CDE(c={c})"),
            EstimatorKind::CandidateB { k } => format!("B@a_K(K={k})"),
        }
    }

    pub fn evaluate<R: Rng + ?Sized>(&self, m: &SplitMeans, rng: &mut R) -> Result<f64> {
        match *self {
            EstimatorKind::Se => single_estimator(&m.full, rng).map(|(v, _)| v),
            EstimatorKind::De => double_estimator(&m.a, &m.b, rng),
            EstimatorKind::Cde => clipped_double_estimator(&m.full, &m.a, &m.b, rng),
            EstimatorKind::AcCde { k } => ac_cde(&m.full, &m.a, &m.b, k, rng).map(|e| e.value),
            EstimatorKind::AutoAcCde { c } => {
                let k = adaptive_k(&m.full, c)?;
                ac_cde(&m.full, &m.a, &m.b, k, rng).map(|e| e.value)
            }
            EstimatorKind::CandidateB { k } => {
                ac_cde(&m.full, &m.a, &m.b, k, rng).map(|e| e.unclipped)
            }
        }
    }
}

/// Runs `trials` independent draws from `family`, hands each split batch to
/// `f`, and returns the results in trial order.
///
/// Trial `t` uses `trial_rng(seed, t)` for sampling and splitting; `f`
/// receives the generator state right after the split.
pub fn simulate<T, F>(
    family: &DistFamily,
    trials: u64,
    seed: u64,
    exec: Execution,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&SplitMeans, &TrialRng) -> Result<T> + Sync + Send,
{
    map_trials(trials, exec, |t| {
        let mut rng = trial_rng(seed, t);
        let raw = family.draw(&mut rng);
        let batch = SampleBatch::split(raw, &mut rng)?;
        f(&batch.all_means(), &rng)
    })
    .into_iter()
    .collect()
}

/// Per-trial values of several estimators on shared samples. Every
/// estimator gets its own copy of the post-split generator.
pub fn simulate_estimators(
    family: &DistFamily,
    estimators: &[EstimatorKind],
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    let rows = simulate(family, trials, seed, exec, |m, rng| {
        estimators
            .iter()
            .map(|e| e.evaluate(m, &mut rng.clone()))
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok((0..estimators.len())
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect())
}

/// Monte-Carlo mean, variance and standard error of one estimator.
pub fn mc_estimate(
    estimator: EstimatorKind,
    family: &DistFamily,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<MeanEstimate> {
    if trials < 2 {
        return Err(Error::invalid("trials", "need at least two trials"));
    }
    let mut cols = simulate_estimators(family, &[estimator], trials, seed, exec)?;
    Ok(MeanEstimate::from_values(&cols.pop().expect("one column")))
}
