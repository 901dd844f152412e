//! Sample summaries shared by the oracle and the harness.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    /// Unbiased sample variance of the observations.
    pub variance: f64,
    /// `sqrt(variance / n)`.
    pub std_err: f64,
    pub n: usize,
}

impl MeanEstimate {
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return MeanEstimate {
                mean: f64::NAN,
                variance: f64::NAN,
                std_err: f64::NAN,
                n,
            };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let variance = if n > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        MeanEstimate {
            mean,
            variance,
            std_err: (variance / n as f64).sqrt(),
            n,
        }
    }

    pub fn from_iter(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().collect();
        Self::from_values(&v)
    }
}

/// Mean of pairwise differences `a[t] - b[t]` with its standard error.
pub fn paired_difference(a: &[f64], b: &[f64]) -> MeanEstimate {
    MeanEstimate::from_iter(a.iter().zip(b).map(|(x, y)| x - y))
}

/// Estimated variance of `values` together with the standard error of that
/// variance estimate (fourth-moment formula).
pub fn variance_with_std_err(values: &[f64]) -> (f64, f64) {
    let est = MeanEstimate::from_values(values);
    let n = values.len() as f64;
    let m4 = values.iter().map(|v| (v - est.mean).powi(4)).sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - est.mean).powi(2)).sum::<f64>() / n;
    let se = ((m4 - m2 * m2).max(0.0) / n).sqrt();
    (est.variance, se)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_variance() {
        let e = MeanEstimate::from_values(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        assert!((e.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!((e.std_err - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_values_have_zero_spread() {
        let e = MeanEstimate::from_values(&[3.0; 10]);
        assert_eq!(e.mean, 3.0);
        assert_eq!(e.variance, 0.0);
        assert_eq!(variance_with_std_err(&[3.0; 10]), (0.0, 0.0));
    }
}
