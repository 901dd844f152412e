//! Estimators of the maximum expected value `max_i E[X_i]`.
//!
//! Every estimator works on per-variable sample means. The double-family
//! estimators additionally need the means of a random A/B split of each
//! variable's samples, which [`SampleBatch`] provides.
//!
//! Randomness enters only through argmax tie-breaking and the split itself,
//! and always through an explicitly passed generator.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Samples for `N` variables and their balanced A/B split.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    samples: Vec<Vec<f64>>,
    split_a: Vec<Vec<f64>>,
    split_b: Vec<Vec<f64>>,
}

impl SampleBatch {
    /// Shuffles each variable's samples and sends the first `floor(n/2)` to A,
    /// the rest to B. A variable with a single sample has an empty A side;
    /// its A mean is defined as that sample.
    pub fn split<R: Rng + ?Sized>(samples: Vec<Vec<f64>>, rng: &mut R) -> Result<Self> {
        Self::validate(&samples)?;
        let mut split_a = Vec::with_capacity(samples.len());
        let mut split_b = Vec::with_capacity(samples.len());
        for s in &samples {
            let mut shuffled = s.clone();
            shuffled.shuffle(rng);
            let b = shuffled.split_off(shuffled.len() / 2);
            split_a.push(shuffled);
            split_b.push(b);
        }
        Ok(SampleBatch {
            samples,
            split_a,
            split_b,
        })
    }

    /// Split without shuffling: first half to A, remainder to B.
    pub fn split_in_order(samples: Vec<Vec<f64>>) -> Result<Self> {
        Self::validate(&samples)?;
        let (split_a, split_b) = samples
            .iter()
            .map(|s| {
                let half = s.len() / 2;
                (s[..half].to_vec(), s[half..].to_vec())
            })
            .unzip();
        Ok(SampleBatch {
            samples,
            split_a,
            split_b,
        })
    }

    fn validate(samples: &[Vec<f64>]) -> Result<()> {
        if samples.is_empty() || samples.iter().any(|s| s.is_empty()) {
            return Err(Error::EmptySamples);
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn split_a(&self) -> &[Vec<f64>] {
        &self.split_a
    }

    pub fn split_b(&self) -> &[Vec<f64>] {
        &self.split_b
    }

    pub fn means(&self) -> Vec<f64> {
        self.samples.iter().map(|s| mean_unchecked(s)).collect()
    }

    pub fn means_a(&self) -> Vec<f64> {
        self.split_a
            .iter()
            .zip(&self.split_b)
            .map(|(a, b)| if a.is_empty() { mean_unchecked(b) } else { mean_unchecked(a) })
            .collect()
    }

    pub fn means_b(&self) -> Vec<f64> {
        self.split_b.iter().map(|s| mean_unchecked(s)).collect()
    }

    pub fn all_means(&self) -> SplitMeans {
        SplitMeans {
            full: self.means(),
            a: self.means_a(),
            b: self.means_b(),
        }
    }
}

/// The three mean vectors every estimator is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitMeans {
    pub full: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

fn mean_unchecked(s: &[f64]) -> f64 {
    s.iter().sum::<f64>() / s.len() as f64
}

pub fn sample_mean(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(mean_unchecked(samples))
}

/// Index of the largest `values[i]` over `indices`, ties broken uniformly.
///
/// Draws from `rng` only when there is a tie.
pub(crate) fn argmax_among<R: Rng + ?Sized>(
    values: &[f64],
    indices: impl IntoIterator<Item = usize>,
    rng: &mut R,
) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut ties: Vec<usize> = Vec::new();
    for i in indices {
        let v = values[i];
        if ties.is_empty() || v > best {
            best = v;
            ties.clear();
            ties.push(i);
        } else if v == best {
            ties.push(i);
        }
    }
    match ties.len() {
        0 => panic!("argmax over an empty index set"),
        1 => ties[0],
        n => ties[rng.random_range(0..n)],
    }
}

pub(crate) fn argmax<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> usize {
    argmax_among(values, 0..values.len(), rng)
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(())
}

/// `max_i means[i]` and a uniformly tie-broken argmax.
pub fn single_estimator<R: Rng + ?Sized>(means: &[f64], rng: &mut R) -> Result<(f64, usize)> {
    if means.is_empty() {
        return Err(Error::EmptySamples);
    }
    let i = argmax(means, rng);
    Ok((means[i], i))
}

/// `means_b[argmax means_a]`.
pub fn double_estimator<R: Rng + ?Sized>(
    means_a: &[f64],
    means_b: &[f64],
    rng: &mut R,
) -> Result<f64> {
    check_lengths(means_a, means_b)?;
    Ok(means_b[argmax(means_a, rng)])
}

/// `min{ means_b[argmax means_a], max_i means_full[i] }`.
pub fn clipped_double_estimator<R: Rng + ?Sized>(
    means_full: &[f64],
    means_a: &[f64],
    means_b: &[f64],
    rng: &mut R,
) -> Result<f64> {
    check_lengths(means_full, means_a)?;
    check_lengths(means_a, means_b)?;
    let de = means_b[argmax(means_a, rng)];
    Ok(de.min(max_of(means_full)))
}

/// Indices of the `k` largest values, ascending by index.
///
/// Ties at the cut are resolved in favour of the lower index.
pub fn top_k_indices(values: &[f64], k: usize) -> Result<Vec<usize>> {
    let n = values.len();
    if k == 0 || k > n {
        return Err(Error::CandidateCountOutOfRange { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal values keep ascending index order
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut top = order[..k].to_vec();
    top.sort_unstable();
    Ok(top)
}

/// Result of the candidate-restricted clipped estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateEstimate {
    /// `min{ means_b[a_k], max_i means_full[i] }`.
    pub value: f64,
    /// The chosen candidate index `a_k`.
    pub index: usize,
    /// `means_b[a_k]` before clipping.
    pub unclipped: f64,
}

impl CandidateEstimate {
    pub fn clip_active(&self) -> bool {
        self.unclipped > self.value
    }
}

/// Action-candidate clipped double estimator.
///
/// Candidates are the top-`k` indices of `means_b`; among them the A-side
/// argmax is evaluated on the B side and clipped by the single estimator.
pub fn ac_cde<R: Rng + ?Sized>(
    means_full: &[f64],
    means_a: &[f64],
    means_b: &[f64],
    k: usize,
    rng: &mut R,
) -> Result<CandidateEstimate> {
    check_lengths(means_full, means_a)?;
    check_lengths(means_a, means_b)?;
    let candidates = top_k_indices(means_b, k)?;
    let index = argmax_among(means_a, candidates, rng);
    let unclipped = means_b[index];
    Ok(CandidateEstimate {
        value: unclipped.min(max_of(means_full)),
        index,
        unclipped,
    })
}

/// Spread of the sample means, `max - min`.
pub fn distribution_difference_hat(means: &[f64]) -> f64 {
    if means.is_empty() {
        return 0.0;
    }
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    max_of(means) - lo
}

/// `1 / (1 + spread / c)`, in `(0, 1]`.
pub fn normalized_difference(spread: f64, c: f64) -> f64 {
    1.0 / (1.0 + spread / c)
}

/// Maps a normalized difference in `[0, 1]` onto `1..=n`: the `i` with
/// `(i-1)/n <= j < i/n`, and `n` when `j == 1`.
pub fn candidate_count(j: f64, n: usize) -> usize {
    debug_assert!(n >= 1);
    // The first i with j < i/n; testing against i/n directly avoids the
    // rounding that floor(j * n) would introduce at the sub-range edges.
    (1..=n).find(|&i| j < i as f64 / n as f64).unwrap_or(n)
}

/// Candidate count chosen from the spread of the sample means.
pub fn adaptive_k(means: &[f64], c: f64) -> Result<usize> {
    if !(c > 0.0) {
        return Err(Error::invalid("c", format!("must be positive, got {c}")));
    }
    if means.is_empty() {
        return Err(Error::EmptySamples);
    }
    let j = normalized_difference(distribution_difference_hat(means), c);
    Ok(candidate_count(j, means.len()))
}

/// One trial's worth of estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateRecord {
    pub mu_star_true: f64,
    pub se: f64,
    pub de: f64,
    pub cde: f64,
    pub ac_cde: f64,
    pub auto_ac_cde: f64,
    /// Candidate count picked by the adaptive rule.
    pub chosen_k: usize,
    /// Whether the fixed-`k` AC estimate was clipped by the single estimator.
    pub clip_active: bool,
}

/// Evaluates all five estimators on one batch.
///
/// Each estimator draws its tie-breaks from its own clone of `rng`, so
/// estimators that coincide mathematically (e.g. `k = N` and CDE) also
/// coincide bit for bit.
pub fn estimate_all<R: Rng + Clone>(
    batch: &SampleBatch,
    k: usize,
    c: f64,
    mu_star_true: f64,
    rng: &mut R,
) -> Result<EstimateRecord> {
    let m = batch.all_means();
    let base = rng.clone();
    let (se, _) = single_estimator(&m.full, &mut base.clone())?;
    let de = double_estimator(&m.a, &m.b, &mut base.clone())?;
    let cde = clipped_double_estimator(&m.full, &m.a, &m.b, &mut base.clone())?;
    let fixed = ac_cde(&m.full, &m.a, &m.b, k, &mut base.clone())?;
    let chosen_k = adaptive_k(&m.full, c)?;
    let auto = ac_cde(&m.full, &m.a, &m.b, chosen_k, &mut base.clone())?;
    // advance the caller's stream past this trial
    rng.next_u64();
    Ok(EstimateRecord {
        mu_star_true,
        se,
        de,
        cde,
        ac_cde: fixed.value,
        auto_ac_cde: auto.value,
        chosen_k,
        clip_active: fixed.clip_active(),
    })
}
