use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    pub support: Vec<f64>,
    pub probs: Vec<f64>,
}

impl DiscreteDist {
    pub fn bernoulli(p: f64) -> Self {
        DiscreteDist {
            support: vec![0.0, 1.0],
            probs: vec![1.0 - p, p],
        }
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.probs).map(|(x, p)| x * p).sum()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (x, p) in self.support.iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return *x;
            }
        }
        *self.support.last().expect("validated nonempty support")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistKind {
    Gaussian { means: Vec<f64>, stds: Vec<f64> },
    Bernoulli { probs: Vec<f64> },
    Discrete(Vec<DiscreteDist>),
}

/// `n_vars` independent variables, each observed `samples_per_var` times.
#[derive(Debug, Clone, PartialEq)]
pub struct DistFamily {
    pub kind: DistKind,
    pub samples_per_var: usize,
}

impl DistFamily {
    pub fn gaussian(means: Vec<f64>, stds: Vec<f64>, samples_per_var: usize) -> Result<Self> {
        Self::new(DistKind::Gaussian { means, stds }, samples_per_var)
    }

    pub fn bernoulli(probs: Vec<f64>, samples_per_var: usize) -> Result<Self> {
        Self::new(DistKind::Bernoulli { probs }, samples_per_var)
    }

    pub fn discrete(vars: Vec<DiscreteDist>, samples_per_var: usize) -> Result<Self> {
        Self::new(DistKind::Discrete(vars), samples_per_var)
    }

    pub fn new(kind: DistKind, samples_per_var: usize) -> Result<Self> {
        let family = DistFamily { kind, samples_per_var };
        family.validate()?;
        Ok(family)
    }

    fn validate(&self) -> Result<()> {
        if self.samples_per_var == 0 {
            return Err(Error::invalid("samples_per_var", "must be positive"));
        }
        if self.n_vars() == 0 {
            return Err(Error::invalid("n_vars", "need at least one variable"));
        }
        match &self.kind {
            DistKind::Gaussian { means, stds } => {
                if means.len() != stds.len() {
                    return Err(Error::LengthMismatch { left: means.len(), right: stds.len() });
                }
                if stds.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
                    return Err(Error::invalid("stds", "standard deviations must be finite and >= 0"));
                }
            }
            DistKind::Bernoulli { probs } => {
                if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(Error::invalid("probs", "Bernoulli parameters must lie in [0, 1]"));
                }
            }
            DistKind::Discrete(vars) => {
                for d in vars {
                    let total: f64 = d.probs.iter().sum();
                    if d.support.is_empty()
                        || d.support.len() != d.probs.len()
                        || d.probs.iter().any(|&p| p < 0.0)
                        || (total - 1.0).abs() > 1e-9
                    {
                        return Err(Error::invalid("probs", "invalid discrete distribution"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        match &self.kind {
            DistKind::Gaussian { means, .. } => means.len(),
            DistKind::Bernoulli { probs } => probs.len(),
            DistKind::Discrete(vars) => vars.len(),
        }
    }

    pub fn means(&self) -> Vec<f64> {
        match &self.kind {
            DistKind::Gaussian { means, .. } => means.clone(),
            DistKind::Bernoulli { probs } => probs.clone(),
            DistKind::Discrete(vars) => vars.iter().map(DiscreteDist::mean).collect(),
        }
    }

    pub fn mu_star(&self) -> f64 {
        self.means().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Whether every variable has the same distribution.
    pub fn is_iid(&self) -> bool {
        match &self.kind {
            DistKind::Gaussian { means, stds } => {
                means.iter().all(|&m| m == means[0]) && stds.iter().all(|&s| s == stds[0])
            }
            DistKind::Bernoulli { probs } => probs.iter().all(|&p| p == probs[0]),
            DistKind::Discrete(vars) => vars.iter().all(|d| d == &vars[0]),
        }
    }

    /// Per-variable discrete laws, when the family is discrete.
    pub fn as_discrete(&self) -> Option<Vec<DiscreteDist>> {
        match &self.kind {
            DistKind::Gaussian { .. } => None,
            DistKind::Bernoulli { probs } => Some(probs.iter().map(|&p| DiscreteDist::bernoulli(p)).collect()),
            DistKind::Discrete(vars) => Some(vars.clone()),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<f64>> {
        let m = self.samples_per_var;
        match &self.kind {
            DistKind::Gaussian { means, stds } => means
                .iter()
                .zip(stds)
                .map(|(&mu, &sd)| {
                    let normal = Normal::new(mu, sd).expect("validated std");
                    (0..m).map(|_| normal.sample(rng)).collect()
                })
                .collect(),
            DistKind::Bernoulli { probs } => probs
                .iter()
                .map(|&p| (0..m).map(|_| f64::from(rng.random_bool(p) as u8)).collect())
                .collect(),
            DistKind::Discrete(vars) => vars
                .iter()
                .map(|d| (0..m).map(|_| d.sample(rng)).collect())
                .collect(),
        }
    }
}
