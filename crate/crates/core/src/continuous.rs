//! Gaussian action candidates for continuous action spaces and the clipped
//! candidate target, exercised on analytic Q-functions.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::par::{map_trials, Execution};
use crate::rng::trial_rng;
use crate::stats::MeanEstimate;

/// Per-dimension closed action box.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Bounds {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::LengthMismatch { left: lo.len(), right: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(Error::invalid("bounds", "need lo <= hi in every dimension"));
        }
        Ok(Bounds { lo, hi })
    }

    pub fn symmetric(dim: usize, limit: f64) -> Self {
        Bounds { lo: vec![-limit; dim], hi: vec![limit; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn clip(&self, action: &mut [f64]) {
        for ((a, &l), &h) in action.iter_mut().zip(&self.lo).zip(&self.hi) {
            *a = a.clamp(l, h);
        }
    }

    pub fn contains(&self, action: &[f64]) -> bool {
        action.iter().zip(&self.lo).zip(&self.hi).all(|((a, l), h)| l <= a && a <= h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub actions: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// First candidate with the largest `q` (ties keep the earliest draw).
    pub fn best_by<F: Fn(&[f64]) -> f64>(&self, q: F) -> &[f64] {
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (i, a) in self.actions.iter().enumerate() {
            let v = q(a);
            if v > best_v {
                best = i;
                best_v = v;
            }
        }
        &self.actions[best]
    }
}

/// `k` draws from `N(mean, diag(sigma²))`, each clipped into `bounds`.
pub fn gaussian_candidates<R: Rng + ?Sized>(
    mean: &[f64],
    sigma: &[f64],
    k: usize,
    bounds: &Bounds,
    rng: &mut R,
) -> Result<CandidateSet> {
    if k == 0 {
        return Err(Error::invalid("k", "need at least one candidate"));
    }
    if mean.len() != sigma.len() {
        return Err(Error::LengthMismatch { left: mean.len(), right: sigma.len() });
    }
    if mean.len() != bounds.dim() {
        return Err(Error::LengthMismatch { left: mean.len(), right: bounds.dim() });
    }
    let normals = mean
        .iter()
        .zip(sigma)
        .map(|(&m, &s)| {
            if s > 0.0 && s.is_finite() {
                Ok(Normal::new(m, s).expect("finite positive sigma"))
            } else {
                Err(Error::invalid("sigma", "must be positive and finite"))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let actions = (0..k)
        .map(|_| {
            let mut a: Vec<f64> = normals.iter().map(|n| n.sample(rng)).collect();
            bounds.clip(&mut a);
            a
        })
        .collect();
    Ok(CandidateSet { actions, mean: mean.to_vec(), sigma: sigma.to_vec() })
}

/// `r + γ·min{q2(a_K), q1(actor_action)}` with `a_K` the candidate
/// maximizing `q1`.
pub fn ac_td3_target<F1, F2>(
    reward: f64,
    gamma: f64,
    q1: F1,
    q2: F2,
    actor_action: &[f64],
    candidates: &CandidateSet,
) -> Result<f64>
where
    F1: Fn(&[f64]) -> f64,
    F2: Fn(&[f64]) -> f64,
{
    if candidates.is_empty() {
        return Err(Error::EmptySamples);
    }
    let a_k = candidates.best_by(&q1);
    Ok(reward + gamma * q2(a_k).min(q1(actor_action)))
}

/// Concave quadratic `height - Σ curvature_i (a_i - optimum_i)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub optimum: Vec<f64>,
    pub curvature: Vec<f64>,
    pub height: f64,
}

impl Quadratic {
    pub fn unit(optimum: Vec<f64>) -> Self {
        let d = optimum.len();
        Quadratic { optimum, curvature: vec![1.0; d], height: 0.0 }
    }

    pub fn eval(&self, a: &[f64]) -> f64 {
        self.height
            - a.iter()
                .zip(&self.optimum)
                .zip(&self.curvature)
                .map(|((x, o), c)| c * (x - o) * (x - o))
                .sum::<f64>()
    }
}

/// Toy 1-D problem: `Q(a) = -(a - optimum)²` on `[-1, 1]`, candidates drawn
/// around `optimum + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyProblem {
    pub optimum: f64,
    pub offset: f64,
    pub sigma: f64,
    pub bound: f64,
}

impl Default for ToyProblem {
    fn default() -> Self {
        ToyProblem { optimum: 0.3, offset: 0.2, sigma: 0.1, bound: 1.0 }
    }
}

/// Mean of `|best candidate - optimum|` over `trials` independent draws.
/// Trial `t` uses `trial_rng(seed, t)`.
pub fn toy_argmax_error(
    problem: &ToyProblem,
    k: usize,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<MeanEstimate> {
    if trials < 2 {
        return Err(Error::invalid("trials", "need at least 2 trials"));
    }
    let q = Quadratic::unit(vec![problem.optimum]);
    let bounds = Bounds::symmetric(1, problem.bound);
    let mean = [problem.optimum + problem.offset];
    let sigma = [problem.sigma];
    let errors = map_trials(trials, exec, |t| {
        let mut rng = trial_rng(seed, t);
        let set = gaussian_candidates(&mean, &sigma, k, &bounds, &mut rng)?;
        Ok((set.best_by(|a| q.eval(a))[0] - problem.optimum).abs())
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(MeanEstimate::from_values(&errors))
}
