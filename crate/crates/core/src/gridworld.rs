//! `n x n` grid world with deterministic moves and two-point random rewards.
//!
//! The start is `(0, 0)` (lower left) and the goal `(n-1, n-1)` (upper right).
//! Moving into a wall leaves the agent in place. Every move outside the goal
//! pays a step reward; any action taken in the goal pays a goal reward and
//! ends the episode, so the shortest episode is `2n - 1` actions.

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::FiniteMdp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    East,
    West,
    South,
    North,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::East, Action::West, Action::South, Action::North];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Action {
        Self::ALL[i]
    }
}

pub const N_ACTIONS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub n: usize,
    pub gamma: f64,
    pub goal_rewards: (f64, f64),
    pub step_rewards: (f64, f64),
    /// Probability of the first member of each reward pair.
    pub reward_prob: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n: 3,
            gamma: 0.95,
            goal_rewards: (-30.0, 40.0),
            step_rewards: (-6.0, 4.0),
            reward_prob: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridState {
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub next: GridState,
    pub reward: f64,
    pub done: bool,
}

impl GridConfig {
    /// Same geometry with rewards fixed at their means (-1 per step, +5 at
    /// the goal for the default pairs).
    pub fn deterministic(n: usize, gamma: f64) -> Self {
        let base = GridConfig { n, gamma, ..Default::default() };
        let step = base.expected_step_reward();
        let goal = base.expected_goal_reward();
        GridConfig {
            step_rewards: (step, step),
            goal_rewards: (goal, goal),
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid("n", "grid side must be at least 2"));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::invalid("gamma", "must lie in [0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.reward_prob) {
            return Err(Error::invalid("reward_prob", "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.n * self.n
    }

    pub fn start(&self) -> GridState {
        GridState { x: 0, y: 0 }
    }

    pub fn goal(&self) -> GridState {
        GridState { x: self.n - 1, y: self.n - 1 }
    }

    pub fn index(&self, s: GridState) -> usize {
        s.y * self.n + s.x
    }

    pub fn state(&self, index: usize) -> GridState {
        GridState { x: index % self.n, y: index / self.n }
    }

    pub fn expected_step_reward(&self) -> f64 {
        pair_mean(self.step_rewards, self.reward_prob)
    }

    pub fn expected_goal_reward(&self) -> f64 {
        pair_mean(self.goal_rewards, self.reward_prob)
    }

    pub fn move_from(&self, s: GridState, action: Action) -> GridState {
        let last = self.n - 1;
        match action {
            Action::East => GridState { x: (s.x + 1).min(last), ..s },
            Action::West => GridState { x: s.x.saturating_sub(1), ..s },
            Action::South => GridState { y: s.y.saturating_sub(1), ..s },
            Action::North => GridState { y: (s.y + 1).min(last), ..s },
        }
    }

    /// Tabular model with expected rewards. Actions in the goal terminate.
    pub fn expected_mdp(&self) -> FiniteMdp {
        let goal = self.index(self.goal());
        let mut mdp = FiniteMdp::new(self.n_states(), N_ACTIONS);
        for s in 0..self.n_states() {
            for a in Action::ALL {
                if s == goal {
                    mdp.add_transition(s, a.index(), None, 1.0, self.expected_goal_reward());
                } else {
                    let next = self.index(self.move_from(self.state(s), a));
                    mdp.add_transition(s, a.index(), Some(next), 1.0, self.expected_step_reward());
                }
            }
        }
        mdp
    }
}

fn pair_mean(pair: (f64, f64), p: f64) -> f64 {
    p * pair.0 + (1.0 - p) * pair.1
}

pub fn step<R: Rng + ?Sized>(
    config: &GridConfig,
    state: GridState,
    action: Action,
    rng: &mut R,
) -> StepOutcome {
    let done = state == config.goal();
    let (next, pair) = if done {
        (state, config.goal_rewards)
    } else {
        (config.move_from(state, action), config.step_rewards)
    };
    let reward = if pair.0 == pair.1 || rng.random_bool(config.reward_prob) {
        pair.0
    } else {
        pair.1
    };
    StepOutcome { next, reward, done }
}

/// Average reward per action of the shortest-path policy, `(7-2n)/(2n-1)`.
pub fn optimal_per_step_reward(n: usize) -> f64 {
    let n = n as f64;
    (7.0 - 2.0 * n) / (2.0 * n - 1.0)
}

/// Start-state value of the optimal policy,
/// `5 gamma^(2(n-1)) - sum_{i=0}^{2n-3} gamma^i`.
pub fn optimal_start_value(n: usize, gamma: f64) -> f64 {
    let steps = 2 * n - 2;
    let path_cost: f64 = (0..steps).map(|i| gamma.powi(i as i32)).sum();
    5.0 * gamma.powi(steps as i32) - path_cost
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::stats::MeanEstimate;

    #[test]
    fn wall_collision_stays_put() {
        let cfg = GridConfig::default();
        let out = step(&cfg, cfg.start(), Action::West, &mut seeded(0));
        assert_eq!(out.next, cfg.start());
        assert!(out.reward == -6.0 || out.reward == 4.0);
        assert!(!out.done);
        let out = step(&cfg, cfg.start(), Action::South, &mut seeded(0));
        assert_eq!(out.next, cfg.start());
    }

    #[test]
    fn acting_in_goal_ends_episode() {
        let cfg = GridConfig::default();
        let out = step(&cfg, GridState { x: 2, y: 1 }, Action::North, &mut seeded(1));
        assert_eq!(out.next, GridState { x: 2, y: 2 });
        assert!(!out.done);
        assert!(out.reward == -6.0 || out.reward == 4.0);
        for a in Action::ALL {
            let out = step(&cfg, cfg.goal(), a, &mut seeded(1));
            assert!(out.done);
            assert!(out.reward == -30.0 || out.reward == 40.0);
        }
    }

    #[test]
    fn transitions_are_deterministic() {
        let cfg = GridConfig { n: 4, ..Default::default() };
        let mut rng = seeded(2);
        for s in 0..cfg.n_states() {
            for a in Action::ALL {
                let first = step(&cfg, cfg.state(s), a, &mut rng).next;
                for _ in 0..5 {
                    assert_eq!(step(&cfg, cfg.state(s), a, &mut rng).next, first);
                }
            }
        }
    }

    #[test]
    fn reward_means_and_frequencies() {
        let cfg = GridConfig::default();
        let mut rng = seeded(3);
        let n = 100_000;
        let steps: Vec<f64> = (0..n)
            .map(|_| step(&cfg, cfg.start(), Action::East, &mut rng).reward)
            .collect();
        let goals: Vec<f64> = (0..n)
            .map(|_| step(&cfg, cfg.goal(), Action::East, &mut rng).reward)
            .collect();
        let s = MeanEstimate::from_values(&steps);
        let g = MeanEstimate::from_values(&goals);
        assert!((s.mean + 1.0).abs() <= 3.0 * s.std_err, "{s:?}");
        assert!((g.mean - 5.0).abs() <= 3.0 * g.std_err, "{g:?}");
        assert!(steps.iter().all(|&r| r == -6.0 || r == 4.0));
        assert!(goals.iter().all(|&r| r == -30.0 || r == 40.0));
        let freq = MeanEstimate::from_iter(steps.iter().map(|&r| f64::from(r == -6.0)));
        assert!((freq.mean - 0.5).abs() <= 3.0 * freq.std_err);
    }

    #[test]
    fn optimal_formulas() {
        assert!((optimal_per_step_reward(3) - 0.2).abs() < 1e-15);
        assert!((optimal_per_step_reward(4) + 1.0 / 7.0).abs() < 1e-15);
        assert!((optimal_per_step_reward(6) + 5.0 / 11.0).abs() < 1e-15);
        assert_eq!(optimal_start_value(3, 0.0), -1.0);
        assert_eq!(optimal_start_value(5, 0.0), -1.0);
        assert!((optimal_start_value(3, 0.95) - 0.36265625).abs() < 1e-12);
        assert!((optimal_start_value(2, 0.95) - 2.5625).abs() < 1e-12);
    }

    #[test]
    fn shortest_path_takes_two_n_minus_one_actions() {
        for n in 2..7 {
            let cfg = GridConfig { n, ..Default::default() };
            let det = GridConfig::deterministic(n, 0.9);
            let mut s = det.start();
            let mut actions = 0;
            let mut total = 0.0;
            let mut rng = seeded(0);
            loop {
                let a = if s.x < n - 1 { Action::East } else { Action::North };
                let out = step(&det, s, a, &mut rng);
                actions += 1;
                total += out.reward;
                if out.done {
                    break;
                }
                s = out.next;
            }
            assert_eq!(actions, 2 * n - 1);
            let per = total / actions as f64;
            assert!((per - optimal_per_step_reward(n)).abs() < 1e-12);
            assert_eq!(cfg.n_states(), n * n);
        }
    }

    #[test]
    fn deterministic_variant_uses_means() {
        let cfg = GridConfig::deterministic(3, 0.95);
        assert_eq!(cfg.step_rewards, (-1.0, -1.0));
        assert_eq!(cfg.goal_rewards, (5.0, 5.0));
        assert!(GridConfig { n: 1, ..Default::default() }.validate().is_err());
        assert!(GridConfig { gamma: 1.0, ..Default::default() }.validate().is_err());
    }
}
