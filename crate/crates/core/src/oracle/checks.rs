//! Monte-Carlo checks of the estimator ordering, variance and bias claims.
//!
//! Every comparison allows [`STAT_TOLERANCE_SE`] standard errors of slack.
//! Differences between estimators on shared samples use paired standard
//! errors.

use std::fmt;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::stats::{paired_difference, variance_with_std_err, MeanEstimate};

use super::{simulate, simulate_estimators, DistFamily, EstimatorKind};

/// Slack, in standard errors, for pass/fail comparisons.
pub const STAT_TOLERANCE_SE: f64 = 3.0;
/// Slack, in standard errors, for agreement between independent oracles.
pub const AGREEMENT_SE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    /// `E[B at a_K]` nonincreasing in K and at least `E[DE]`.
    Property1,
    /// `E[CDE] <= E[AC-CDE(K)] <= E[SE]`, nonincreasing in K.
    Theorem1,
    /// Variance trend of AC-CDE over K (reported, no verdict).
    Theorem2,
    /// Bias of AC-CDE bounded below by `P(B at a_K > SE) * E[SE - mu*]`.
    Lemma1,
    /// `Var[full mean] <= Var[B mean]` per variable.
    VarHalving,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Property1,
        Property::Theorem1,
        Property::Theorem2,
        Property::Lemma1,
        Property::VarHalving,
    ];

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::invalid("property", format!("unknown property `{name}`")))
    }

    pub fn name(self) -> &'static str {
        match self {
            Property::Property1 => "property1",
            Property::Theorem1 => "theorem1",
            Property::Theorem2 => "theorem2",
            Property::Lemma1 => "lemma1",
            Property::VarHalving => "var_halving",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Reported,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Reported => "reported",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One row per candidate count (or per variable for `var_halving`).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    /// Candidate count K, or variable index for `var_halving`.
    pub index: usize,
    pub estimate: f64,
    pub std_err: f64,
    pub reference: f64,
    pub reference_std_err: f64,
    /// Worst standardized violation among this row's comparisons; the row
    /// fails when it exceeds [`STAT_TOLERANCE_SE`].
    pub worst_z: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub property: Property,
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<CheckRow>,
    pub verdict: Verdict,
    pub note: String,
}

/// Standardized excess for the claim `lhs <= rhs`, given the mean and
/// standard error of `lhs - rhs`. Positive values are violations.
fn violation_z(excess: &MeanEstimate) -> f64 {
    if excess.std_err > 0.0 {
        excess.mean / excess.std_err
    } else if excess.mean > 0.0 {
        f64::INFINITY
    } else if excess.mean < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    }
}

fn validate_k_range(k_range: &[usize], n: usize) -> Result<Vec<usize>> {
    if k_range.is_empty() {
        return Err(Error::invalid("k", "need at least one candidate count"));
    }
    let mut ks = k_range.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if let Some(&bad) = ks.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::CandidateCountOutOfRange { k: bad, n });
    }
    Ok(ks)
}

fn finish(property: Property, trials: u64, seed: u64, rows: Vec<CheckRow>, note: String) -> CheckReport {
    let verdict = if property == Property::Theorem2 {
        Verdict::Reported
    } else {
        Verdict::from_bool(rows.iter().all(|r| r.verdict == Verdict::Pass))
    };
    CheckReport { property, trials, seed, rows, verdict, note }
}

pub fn check_property(
    property: Property,
    family: &DistFamily,
    k_range: &[usize],
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<CheckReport> {
    if trials < 2 {
        return Err(Error::invalid("trials", "need at least two trials"));
    }
    let n = family.n_vars();
    match property {
        Property::VarHalving => return var_halving(family, trials, seed, exec),
        Property::Lemma1 if !family.is_iid() => {
            return Err(Error::invalid("family", "lemma1 needs an i.i.d. family"))
        }
        _ => {}
    }
    let ks = validate_k_range(k_range, n)?;

    let per_k = |k| match property {
        Property::Property1 => EstimatorKind::CandidateB { k },
        _ => EstimatorKind::AcCde { k },
    };
    let mut estimators: Vec<EstimatorKind> = ks.iter().map(|&k| per_k(k)).collect();
    // reference columns follow the per-K columns
    estimators.extend([EstimatorKind::Se, EstimatorKind::De, EstimatorKind::Cde]);
    if property == Property::Lemma1 {
        estimators.extend(ks.iter().map(|&k| EstimatorKind::CandidateB { k }));
    }
    let cols = simulate_estimators(family, &estimators, trials, seed, exec)?;
    let nk = ks.len();
    let (se, de, cde) = (&cols[nk], &cols[nk + 1], &cols[nk + 2]);
    let tol = STAT_TOLERANCE_SE;

    let mut rows = Vec::with_capacity(nk);
    let mut note = String::new();
    for (j, &k) in ks.iter().enumerate() {
        let col = &cols[j];
        let est = MeanEstimate::from_values(col);
        let row = match property {
            Property::Property1 | Property::Theorem1 => {
                let (reference, lower) = if property == Property::Property1 { (de, de) } else { (cde, cde) };
                let r = MeanEstimate::from_values(reference);
                let mut z = violation_z(&paired_difference(lower, col));
                if property == Property::Theorem1 {
                    z = z.max(violation_z(&paired_difference(col, se)));
                }
                if j > 0 {
                    z = z.max(violation_z(&paired_difference(col, &cols[j - 1])));
                }
                CheckRow {
                    index: k,
                    estimate: est.mean,
                    std_err: est.std_err,
                    reference: r.mean,
                    reference_std_err: r.std_err,
                    worst_z: z,
                    verdict: Verdict::from_bool(z <= tol),
                }
            }
            Property::Theorem2 => {
                let (var, var_se) = variance_with_std_err(col);
                let (cde_var, cde_se) = variance_with_std_err(cde);
                CheckRow {
                    index: k,
                    estimate: var,
                    std_err: var_se,
                    reference: cde_var,
                    reference_std_err: cde_se,
                    worst_z: 0.0,
                    verdict: Verdict::Reported,
                }
            }
            Property::Lemma1 => bias_bound_row(k, col, se, &cols[nk + 3 + j], family.mu_star()),
            Property::VarHalving => unreachable!(),
        };
        rows.push(row);
    }
    if property == Property::Theorem2 {
        let vars: Vec<f64> = rows.iter().map(|r| r.estimate).collect();
        let up = vars.windows(2).all(|w| w[1] >= w[0]);
        let down = vars.windows(2).all(|w| w[1] <= w[0]);
        let trend = match (up, down) {
            (true, true) => "constant",
            (true, false) => "nondecreasing",
            (false, true) => "nonincreasing",
            (false, false) => "mixed",
        };
        note = format!("variance of AC-CDE is {trend} in K");
    }
    Ok(finish(property, trials, seed, rows, note))
}

/// `bias(AC-CDE) >= P(B at a_K > SE) * E[SE - mu*]`, with a delta-method
/// standard error for the product term.
fn bias_bound_row(k: usize, ac: &[f64], se: &[f64], cand_b: &[f64], mu_star: f64) -> CheckRow {
    let t = ac.len() as f64;
    let bias: Vec<f64> = ac.iter().map(|x| x - mu_star).collect();
    let over: Vec<f64> = cand_b.iter().zip(se).map(|(b, s)| f64::from(b > s)).collect();
    let se_excess: Vec<f64> = se.iter().map(|s| s - mu_star).collect();
    let b = MeanEstimate::from_values(&bias);
    let p = over.iter().sum::<f64>() / t;
    let s = se_excess.iter().sum::<f64>() / t;
    let bound = p * s;
    // influence of D = mean(bias) - mean(over) * mean(se_excess)
    let influence: Vec<f64> = (0..ac.len())
        .map(|i| bias[i] - s * over[i] - p * se_excess[i])
        .collect();
    let d = MeanEstimate::from_values(&influence);
    let bound_se = MeanEstimate::from_iter((0..ac.len()).map(|i| s * over[i] + p * se_excess[i])).std_err;
    // the claim is bound <= bias
    let z = violation_z(&MeanEstimate { mean: bound - b.mean, ..d });
    CheckRow {
        index: k,
        estimate: b.mean,
        std_err: b.std_err,
        reference: bound,
        reference_std_err: bound_se,
        worst_z: z,
        verdict: Verdict::from_bool(z <= STAT_TOLERANCE_SE),
    }
}

fn var_halving(family: &DistFamily, trials: u64, seed: u64, exec: Execution) -> Result<CheckReport> {
    let samples = simulate(family, trials, seed, exec, |m, _| Ok((m.full.clone(), m.b.clone())))?;
    let rows = (0..family.n_vars())
        .map(|i| {
            let full: Vec<f64> = samples.iter().map(|(f, _)| f[i]).collect();
            let half: Vec<f64> = samples.iter().map(|(_, b)| b[i]).collect();
            let (vf, vf_se) = variance_with_std_err(&full);
            let (vb, vb_se) = variance_with_std_err(&half);
            let mf = full.iter().sum::<f64>() / full.len() as f64;
            let mb = half.iter().sum::<f64>() / half.len() as f64;
            let excess = MeanEstimate::from_iter(
                full.iter().zip(&half).map(|(x, y)| (x - mf).powi(2) - (y - mb).powi(2)),
            );
            let z = violation_z(&MeanEstimate { mean: vf - vb, ..excess });
            CheckRow {
                index: i,
                estimate: vf,
                std_err: vf_se,
                reference: vb,
                reference_std_err: vb_se,
                worst_z: z,
                verdict: Verdict::from_bool(z <= STAT_TOLERANCE_SE),
            }
        })
        .collect();
    Ok(finish(Property::VarHalving, trials, seed, rows, String::new()))
}
