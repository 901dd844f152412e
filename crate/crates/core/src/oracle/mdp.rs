//! Finite MDPs with expected rewards, solved by value iteration.

/// One outcome of taking an action: successor (`None` ends the episode),
/// probability and expected reward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub next: Option<usize>,
    pub prob: f64,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMdp {
    n_states: usize,
    n_actions: usize,
    outcomes: Vec<Vec<Outcome>>,
}

impl FiniteMdp {
    pub fn new(n_states: usize, n_actions: usize) -> Self {
        FiniteMdp {
            n_states,
            n_actions,
            outcomes: vec![Vec::new(); n_states * n_actions],
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn add_transition(
        &mut self,
        state: usize,
        action: usize,
        next: Option<usize>,
        prob: f64,
        reward: f64,
    ) {
        self.outcomes[state * self.n_actions + action].push(Outcome { next, prob, reward });
    }

    pub fn outcomes(&self, state: usize, action: usize) -> &[Outcome] {
        &self.outcomes[state * self.n_actions + action]
    }

    /// Relabels states so that old state `s` becomes `perm[s]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteMdp {
        let mut out = FiniteMdp::new(self.n_states, self.n_actions);
        for s in 0..self.n_states {
            for a in 0..self.n_actions {
                for o in self.outcomes(s, a) {
                    out.add_transition(perm[s], a, o.next.map(|n| perm[n]), o.prob, o.reward);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    pub n_states: usize,
    pub n_actions: usize,
    pub values: Vec<f64>,
    /// `||T Q - Q||_inf` of the returned table.
    pub residual: f64,
    pub iterations: usize,
}

impl QTable {
    pub fn get(&self, state: usize, action: usize) -> f64 {
        self.values[state * self.n_actions + action]
    }

    pub fn row(&self, state: usize) -> &[f64] {
        &self.values[state * self.n_actions..(state + 1) * self.n_actions]
    }

    pub fn state_value(&self, state: usize) -> f64 {
        self.row(state).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn bellman(mdp: &FiniteMdp, q: &[f64], gamma: f64) -> Vec<f64> {
    let na = mdp.n_actions();
    let v: Vec<f64> = (0..mdp.n_states())
        .map(|s| q[s * na..(s + 1) * na].iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    (0..mdp.n_states() * na)
        .map(|sa| {
            mdp.outcomes[sa]
                .iter()
                .map(|o| o.prob * (o.reward + gamma * o.next.map_or(0.0, |n| v[n])))
                .sum()
        })
        .collect()
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Iterates the Bellman optimality operator from `Q = 0` until the
/// fixed-point residual is at most `tol`.
pub fn value_iteration(mdp: &FiniteMdp, gamma: f64, tol: f64) -> QTable {
    assert!((0.0..1.0).contains(&gamma), "value iteration needs gamma < 1");
    let mut q = vec![0.0; mdp.n_states() * mdp.n_actions()];
    let mut iterations = 0;
    loop {
        let next = bellman(mdp, &q, gamma);
        let residual = sup_distance(&next, &q);
        q = next;
        iterations += 1;
        if residual <= tol {
            // residual of the table we return
            let residual = sup_distance(&bellman(mdp, &q, gamma), &q);
            if residual <= tol {
                return QTable {
                    n_states: mdp.n_states(),
                    n_actions: mdp.n_actions(),
                    values: q,
                    residual,
                    iterations,
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridworld::{optimal_start_value, GridConfig};

    #[test]
    fn absorbing_zero_reward_state() {
        let mut mdp = FiniteMdp::new(1, 2);
        mdp.add_transition(0, 0, Some(0), 1.0, 0.0);
        mdp.add_transition(0, 1, Some(0), 1.0, 0.0);
        let q = value_iteration(&mdp, 0.9, 1e-12);
        assert!(q.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn grid_start_value_matches_closed_form() {
        let cfg = GridConfig::default();
        let q = value_iteration(&cfg.expected_mdp(), 0.95, 1e-12);
        assert!((q.state_value(0) - 0.36265625).abs() < 1e-9);
        assert!(q.residual <= 1e-12);
        for n in 2..6 {
            let cfg = GridConfig { n, gamma: 0.9, ..Default::default() };
            let q = value_iteration(&cfg.expected_mdp(), 0.9, 1e-12);
            assert!((q.state_value(0) - optimal_start_value(n, 0.9)).abs() < 1e-9);
        }
    }

    #[test]
    fn invariant_to_state_order() {
        let cfg = GridConfig { n: 4, ..Default::default() };
        let mdp = cfg.expected_mdp();
        let n = mdp.n_states();
        let perm: Vec<usize> = (0..n).map(|s| (s * 5 + 3) % n).collect();
        let q = value_iteration(&mdp, 0.95, 1e-12);
        let qp = value_iteration(&mdp.permuted(&perm), 0.95, 1e-12);
        for s in 0..n {
            for a in 0..mdp.n_actions() {
                assert!((q.get(s, a) - qp.get(perm[s], a)).abs() < 1e-10);
            }
        }
    }
}
