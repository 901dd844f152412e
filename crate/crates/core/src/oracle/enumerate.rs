//! Exact expectations by enumerating every joint sample outcome.
//!
//! The split is fixed (first half of each variable's samples to A); since
//! samples are i.i.d. this has the same law as a random balanced split.
//! Argmax ties are averaged over rather than sampled. Candidate sets and
//! tie sets are computed here independently of the estimator module.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::estimator::{candidate_count, normalized_difference};

use super::{DiscreteDist, DistFamily, EstimatorKind};

pub const MAX_OUTCOMES: u64 = 1_000_000;

/// Distinct (full mean, A mean, B mean) triples of one variable with their
/// probabilities.
fn variable_outcomes(dist: &DiscreteDist, m: usize) -> Vec<([f64; 3], f64)> {
    let s = dist.support.len();
    let half = m / 2;
    let mut merged: BTreeMap<[u64; 3], f64> = BTreeMap::new();
    let mut digits = vec![0usize; m];
    loop {
        let prob: f64 = digits.iter().map(|&d| dist.probs[d]).product();
        if prob > 0.0 {
            let vals: Vec<f64> = digits.iter().map(|&d| dist.support[d]).collect();
            let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
            let full = mean(&vals);
            let b = mean(&vals[half..]);
            let a = if half == 0 { b } else { mean(&vals[..half]) };
            *merged.entry([full.to_bits(), a.to_bits(), b.to_bits()]).or_insert(0.0) += prob;
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == m {
                return merged
                    .into_iter()
                    .map(|(k, p)| ([f64::from_bits(k[0]), f64::from_bits(k[1]), f64::from_bits(k[2])], p))
                    .collect();
            }
            digits[pos] += 1;
            if digits[pos] < s {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Indices attaining the maximum of `values` over `indices`.
fn tie_set(values: &[f64], indices: &[usize]) -> Vec<usize> {
    let best = indices.iter().map(|&i| values[i]).fold(f64::NEG_INFINITY, f64::max);
    indices.iter().copied().filter(|&i| values[i] == best).collect()
}

fn candidates(b: &[f64], k: usize) -> Vec<usize> {
    // i is a candidate when fewer than k indices beat it, counting equal
    // values at lower indices as beating it
    (0..b.len())
        .filter(|&i| {
            (0..b.len()).filter(|&j| b[j] > b[i] || (b[j] == b[i] && j < i)).count() < k
        })
        .collect()
}

fn average_over(ties: &[usize], f: impl Fn(usize) -> f64) -> f64 {
    ties.iter().map(|&i| f(i)).sum::<f64>() / ties.len() as f64
}

/// Estimator value averaged over its tie-break choices.
pub(crate) fn tie_averaged_value(
    est: &EstimatorKind,
    full: &[f64],
    a: &[f64],
    b: &[f64],
) -> f64 {
    let n = full.len();
    let all: Vec<usize> = (0..n).collect();
    let se = max(full);
    let with_k = |k: usize, clip: bool| {
        let ties = tie_set(a, &candidates(b, k));
        average_over(&ties, |i| if clip { b[i].min(se) } else { b[i] })
    };
    match *est {
        EstimatorKind::Se => se,
        EstimatorKind::De => average_over(&tie_set(a, &all), |i| b[i]),
        EstimatorKind::Cde => average_over(&tie_set(a, &all), |i| b[i].min(se)),
        EstimatorKind::AcCde { k } => with_k(k, true),
        EstimatorKind::CandidateB { k } => with_k(k, false),
        EstimatorKind::AutoAcCde { c } => {
            let spread = se - full.iter().copied().fold(f64::INFINITY, f64::min);
            with_k(candidate_count(normalized_difference(spread, c), n), true)
        }
    }
}

pub fn enumerate_exact(family: &DistFamily, estimator: EstimatorKind) -> Result<f64> {
    let vars = family
        .as_discrete()
        .ok_or_else(|| Error::invalid("family", "exact enumeration needs a discrete family"))?;
    let n = vars.len();
    if let EstimatorKind::AcCde { k } | EstimatorKind::CandidateB { k } = estimator {
        if k == 0 || k > n {
            return Err(Error::CandidateCountOutOfRange { k, n });
        }
    }
    let m = family.samples_per_var;
    let raw: f64 = vars.iter().map(|d| (d.support.len() as f64).powi(m as i32)).product();
    if raw > MAX_OUTCOMES as f64 {
        return Err(Error::InstanceTooLarge { outcomes: raw, limit: MAX_OUTCOMES });
    }
    let per_var: Vec<_> = vars.iter().map(|d| variable_outcomes(d, m)).collect();

    let mut full = vec![0.0; n];
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let mut prob = 1.0;
        for v in 0..n {
            let (means, p) = per_var[v][idx[v]];
            full[v] = means[0];
            a[v] = means[1];
            b[v] = means[2];
            prob *= p;
        }
        total += prob * tie_averaged_value(&estimator, &full, &a, &b);
        let mut v = 0;
        loop {
            if v == n {
                return Ok(total);
            }
            idx[v] += 1;
            if idx[v] < per_var[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bernoulli_mean() {
        let f = DistFamily::bernoulli(vec![0.5], 2).unwrap();
        assert!((enumerate_exact(&f, EstimatorKind::Se).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn max_of_two_bernoulli_means() {
        // each sample mean is 0, 1/2, 1 w.p. 1/4, 1/2, 1/4, so
        // P(max = 1) = 1 - (3/4)^2 = 7/16, P(max = 0) = 1/16, P(max = 1/2) = 8/16
        // and E = 1/2 * 8/16 + 7/16 = 0.6875
        let f = DistFamily::bernoulli(vec![0.5, 0.5], 2).unwrap();
        let e = enumerate_exact(&f, EstimatorKind::Se).unwrap();
        assert!((e - 0.6875).abs() < 1e-15, "{e}");
    }

    #[test]
    fn candidate_sets() {
        assert_eq!(candidates(&[5.0, 2.0, 6.0], 2), vec![0, 2]);
        assert_eq!(candidates(&[3.0, 3.0, 1.0], 1), vec![0]);
        assert_eq!(candidates(&[3.0, 3.0, 3.0], 2), vec![0, 1]);
    }

    #[test]
    fn too_large_is_rejected() {
        let f = DistFamily::bernoulli(vec![0.5; 3], 8).unwrap();
        assert!(matches!(
            enumerate_exact(&f, EstimatorKind::Se),
            Err(Error::InstanceTooLarge { .. })
        ));
        let g = DistFamily::gaussian(vec![0.0], vec![1.0], 2).unwrap();
        assert!(enumerate_exact(&g, EstimatorKind::Se).is_err());
    }
}
