//! Tabular Q-learning family over a pair of tables `Q^A`, `Q^B`.
//!
//! All learners share ε-greedy exploration on `Q^A + Q^B` and differ only in
//! the bootstrap target. Learning rates are `n(s,a)^-lr_exponent` and the
//! exploration rate is `n(s)^-eps_exponent`.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::estimator::{argmax, argmax_among, candidate_count, normalized_difference, top_k_indices};
use crate::gridworld::{self, Action, GridConfig, N_ACTIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Q,
    DoubleQ,
    ClippedDoubleQ,
    AcCdqFixed(usize),
    AutoAcCdq,
}

impl Algorithm {
    /// Parses `q`, `dq`, `cdq`, `acK` (e.g. `ac2`) or `auto`.
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "q" => Ok(Algorithm::Q),
            "dq" => Ok(Algorithm::DoubleQ),
            "cdq" => Ok(Algorithm::ClippedDoubleQ),
            "auto" => Ok(Algorithm::AutoAcCdq),
            other => other
                .strip_prefix("ac")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(Algorithm::AcCdqFixed)
                .ok_or_else(|| Error::invalid("algos", format!("unknown algorithm `{other}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Q => f.write_str("q"),
            Algorithm::DoubleQ => f.write_str("dq"),
            Algorithm::ClippedDoubleQ => f.write_str("cdq"),
            Algorithm::AcCdqFixed(k) => write!(f, "ac{k}"),
            Algorithm::AutoAcCdq => f.write_str("auto"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateMode {
    /// One table per step, chosen by a fair coin.
    #[default]
    Random,
    /// Both tables toward one shared target.
    Simultaneous,
}

impl UpdateMode {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "random" => Ok(UpdateMode::Random),
            "simultaneous" => Ok(UpdateMode::Simultaneous),
            other => Err(Error::invalid("mode", format!("unknown update mode `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UpdateMode::Random => "random",
            UpdateMode::Simultaneous => "simultaneous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentConfig {
    pub algorithm: Algorithm,
    pub gamma: f64,
    pub update_mode: UpdateMode,
    pub lr_exponent: f64,
    pub eps_exponent: f64,
    /// Capacity of the spread window used by [`Algorithm::AutoAcCdq`].
    pub window: usize,
}

impl AgentConfig {
    pub fn new(algorithm: Algorithm, gamma: f64) -> Self {
        AgentConfig {
            algorithm,
            gamma,
            update_mode: UpdateMode::Random,
            lr_exponent: 0.8,
            eps_exponent: 0.5,
            window: 50,
        }
    }

    pub fn validate(&self, n_actions: usize) -> Result<()> {
        if let Algorithm::AcCdqFixed(k) = self.algorithm {
            if k == 0 || k > n_actions {
                return Err(Error::CandidateCountOutOfRange { k, n: n_actions });
            }
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::invalid("gamma", "must lie in [0, 1)"));
        }
        if !(self.lr_exponent > 0.5 && self.lr_exponent <= 1.0) {
            return Err(Error::invalid("lr_exponent", "must lie in (0.5, 1]"));
        }
        if !(self.eps_exponent >= 0.0) {
            return Err(Error::invalid("eps_exponent", "must be nonnegative"));
        }
        if self.window == 0 {
            return Err(Error::invalid("window", "must be positive"));
        }
        Ok(())
    }
}

/// Paired action-value tables with visit counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DualQTable {
    n_states: usize,
    n_actions: usize,
    pub qa: Vec<f64>,
    pub qb: Vec<f64>,
    pub visit_counts: Vec<u64>,
    pub state_counts: Vec<u64>,
}

impl DualQTable {
    pub fn zeros(n_states: usize, n_actions: usize) -> Self {
        DualQTable {
            n_states,
            n_actions,
            qa: vec![0.0; n_states * n_actions],
            qb: vec![0.0; n_states * n_actions],
            visit_counts: vec![0; n_states * n_actions],
            state_counts: vec![0; n_states],
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    fn range(&self, s: usize) -> std::ops::Range<usize> {
        s * self.n_actions..(s + 1) * self.n_actions
    }

    pub fn row_a(&self, s: usize) -> &[f64] {
        &self.qa[self.range(s)]
    }

    pub fn row_b(&self, s: usize) -> &[f64] {
        &self.qb[self.range(s)]
    }

    pub fn sum_row(&self, s: usize) -> Vec<f64> {
        self.row_a(s).iter().zip(self.row_b(s)).map(|(a, b)| a + b).collect()
    }

    /// `max_a (Q^A(s0,a) + Q^B(s0,a)) / 2`.
    pub fn start_value_estimate(&self, start: usize) -> f64 {
        self.sum_row(start)
            .into_iter()
            .map(|v| v / 2.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Ring buffer of recent spreads; its mean is the adaptive reference.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffWindow {
    buffer: VecDeque<f64>,
    capacity: usize,
}

impl DiffWindow {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "window capacity must be positive");
        DiffWindow {
            buffer: VecDeque::with_capacity(capacity),
            capacity,
        }
    }

    pub fn push(&mut self, value: f64) {
        if self.buffer.len() == self.capacity {
            self.buffer.pop_front();
        }
        self.buffer.push_back(value);
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn mean(&self) -> Option<f64> {
        if self.buffer.is_empty() {
            None
        } else {
            Some(self.buffer.iter().sum::<f64>() / self.buffer.len() as f64)
        }
    }
}

/// Candidate count from the spread of the updating table's row at `s'`.
///
/// The spread is pushed into `window` first; an empty window before the
/// push or a nonpositive mean selects all actions.
pub fn adaptive_k_rl(q_row: &[f64], window: &mut DiffWindow) -> usize {
    let n = q_row.len();
    let hi = q_row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = q_row.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    let was_empty = window.is_empty();
    window.push(spread);
    match window.mean() {
        Some(c) if !was_empty && c > 0.0 => candidate_count(normalized_difference(spread, c), n),
        _ => n,
    }
}

/// How the bootstrap value at `s'` is formed from the updating table's row
/// (`own`) and the other table's row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetRule {
    /// `max own`
    Max,
    /// `other[argmax own]`
    Double,
    /// `min{own[a*], other[a*]}`, `a* = argmax own`
    Clipped,
    /// `min{other[a_K], max own}`, `a_K = argmax own over top-K of other`
    Candidate,
}

pub fn compute_target<R: Rng + ?Sized>(
    rule: TargetRule,
    own: &[f64],
    other: &[f64],
    reward: f64,
    gamma: f64,
    k: usize,
    rng: &mut R,
) -> Result<f64> {
    if own.len() != other.len() {
        return Err(Error::LengthMismatch { left: own.len(), right: other.len() });
    }
    if own.is_empty() {
        return Err(Error::EmptySamples);
    }
    let bootstrap = match rule {
        TargetRule::Max => own.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        TargetRule::Double => other[argmax(own, rng)],
        TargetRule::Clipped => {
            let a = argmax(own, rng);
            own[a].min(other[a])
        }
        TargetRule::Candidate => {
            let candidates = top_k_indices(other, k)?;
            let a = argmax_among(own, candidates, rng);
            let own_max = own.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            other[a].min(own_max)
        }
    };
    Ok(reward + gamma * bootstrap)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub state: usize,
    pub action: usize,
    pub reward: f64,
    pub next_state: usize,
    pub done: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Updated {
    A,
    B,
    Both,
}

#[derive(Debug, Clone)]
pub struct Agent {
    pub config: AgentConfig,
    pub tables: DualQTable,
    pub window: DiffWindow,
}

impl Agent {
    pub fn new(config: AgentConfig, n_states: usize, n_actions: usize) -> Result<Self> {
        config.validate(n_actions)?;
        Ok(Agent {
            config,
            tables: DualQTable::zeros(n_states, n_actions),
            window: DiffWindow::new(config.window),
        })
    }

    /// Counts a visit to `state` and picks an ε-greedy action on `Q^A + Q^B`.
    pub fn select_action<R: Rng + ?Sized>(&mut self, state: usize, rng: &mut R) -> usize {
        self.tables.state_counts[state] += 1;
        let n = self.tables.state_counts[state] as f64;
        let eps = n.powf(-self.config.eps_exponent);
        epsilon_greedy(&self.tables, state, eps, rng)
    }

    fn rule_and_k(&mut self, own_next: &[f64]) -> (TargetRule, usize) {
        let n = own_next.len();
        match self.config.algorithm {
            Algorithm::Q => (TargetRule::Max, n),
            Algorithm::DoubleQ => (TargetRule::Double, n),
            Algorithm::ClippedDoubleQ => (TargetRule::Clipped, n),
            Algorithm::AcCdqFixed(k) => (TargetRule::Candidate, k),
            Algorithm::AutoAcCdq => (TargetRule::Candidate, adaptive_k_rl(own_next, &mut self.window)),
        }
    }

    fn target<R: Rng + ?Sized>(&mut self, t: &Transition, use_a: bool, rng: &mut R) -> Result<f64> {
        if t.done {
            return Ok(t.reward);
        }
        let (own, other) = if use_a {
            (self.tables.row_a(t.next_state).to_vec(), self.tables.row_b(t.next_state).to_vec())
        } else {
            (self.tables.row_b(t.next_state).to_vec(), self.tables.row_a(t.next_state).to_vec())
        };
        let (rule, k) = self.rule_and_k(&own);
        compute_target(rule, &own, &other, t.reward, self.config.gamma, k, rng)
    }

    /// Applies one learning step and reports which tables moved.
    ///
    /// Plain Q-learning keeps the two tables identical by moving both toward
    /// the same single-table target.
    pub fn update<R: Rng + ?Sized>(&mut self, t: &Transition, rng: &mut R) -> Result<Updated> {
        let sa = t.state * self.tables.n_actions + t.action;
        self.tables.visit_counts[sa] += 1;
        let alpha = (self.tables.visit_counts[sa] as f64).powf(-self.config.lr_exponent);
        let which = match (self.config.algorithm, self.config.update_mode) {
            (Algorithm::Q, _) | (_, UpdateMode::Simultaneous) => Updated::Both,
            (_, UpdateMode::Random) => {
                if rng.random_bool(0.5) {
                    Updated::A
                } else {
                    Updated::B
                }
            }
        };
        match which {
            Updated::Both => {
                let y = self.target(t, true, rng)?;
                self.tables.qa[sa] += alpha * (y - self.tables.qa[sa]);
                self.tables.qb[sa] += alpha * (y - self.tables.qb[sa]);
            }
            Updated::A => {
                let y = self.target(t, true, rng)?;
                self.tables.qa[sa] += alpha * (y - self.tables.qa[sa]);
            }
            Updated::B => {
                let y = self.target(t, false, rng)?;
                self.tables.qb[sa] += alpha * (y - self.tables.qb[sa]);
            }
        }
        Ok(which)
    }
}

/// Uniform action with probability `eps`, otherwise the argmax of
/// `Q^A + Q^B` with random tie-break.
pub fn epsilon_greedy<R: Rng + ?Sized>(tables: &DualQTable, state: usize, eps: f64, rng: &mut R) -> usize {
    if eps > 0.0 && rng.random_bool(eps.min(1.0)) {
        rng.random_range(0..tables.n_actions)
    } else {
        argmax(&tables.sum_row(state), rng)
    }
}

/// Per-step trace of one grid-world run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// Reward received at each step.
    pub rewards: Vec<f64>,
    /// Start-state value estimate after each step.
    pub start_values: Vec<f64>,
}

/// Runs `steps` interaction steps, teleporting to the start after every
/// episode.
pub fn run_gridworld<R: Rng + ?Sized>(
    grid: &GridConfig,
    agent: &mut Agent,
    steps: usize,
    rng: &mut R,
) -> Result<RunTrace> {
    let start = grid.index(grid.start());
    let mut state = grid.start();
    let mut trace = RunTrace {
        rewards: Vec::with_capacity(steps),
        start_values: Vec::with_capacity(steps),
    };
    for _ in 0..steps {
        let s = grid.index(state);
        let a = agent.select_action(s, rng);
        let out = gridworld::step(grid, state, Action::from_index(a), rng);
        let t = Transition {
            state: s,
            action: a,
            reward: out.reward,
            next_state: grid.index(out.next),
            done: out.done,
        };
        agent.update(&t, rng)?;
        trace.rewards.push(out.reward);
        trace.start_values.push(agent.tables.start_value_estimate(start));
        state = if out.done { grid.start() } else { out.next };
    }
    Ok(trace)
}

pub fn grid_agent(grid: &GridConfig, config: AgentConfig) -> Result<Agent> {
    Agent::new(config, grid.n_states(), N_ACTIONS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    #[test]
    fn algorithm_names_round_trip() {
        for name in ["q", "dq", "cdq", "ac2", "ac3", "auto"] {
            assert_eq!(Algorithm::parse(name).unwrap().to_string(), name);
        }
        assert!(Algorithm::parse("ac0").is_err());
        assert!(Algorithm::parse("sarsa").is_err());
        assert!(UpdateMode::parse("both").is_err());
    }

    #[test]
    fn uniform_when_values_tie() {
        let tables = DualQTable::zeros(1, 4);
        let mut counts = [0usize; 4];
        let mut rng = seeded(1);
        for _ in 0..40_000 {
            counts[epsilon_greedy(&tables, 0, 0.0, &mut rng)] += 1;
        }
        for c in counts {
            assert!((c as f64 / 40_000.0 - 0.25).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn greedy_without_exploration() {
        let mut tables = DualQTable::zeros(1, 4);
        tables.qa.copy_from_slice(&[1.0, 9.0, 3.0, 2.0]);
        assert_eq!(epsilon_greedy(&tables, 0, 0.0, &mut seeded(0)), 1);
    }

    #[test]
    fn greedy_frequency_at_eps_point_two() {
        let mut tables = DualQTable::zeros(1, 4);
        tables.qb.copy_from_slice(&[0.0, 0.0, 1.0, 0.0]);
        let mut rng = seeded(2);
        let hits = (0..10_000).filter(|_| epsilon_greedy(&tables, 0, 0.2, &mut rng) == 2).count();
        assert!((hits as f64 / 10_000.0 - 0.85).abs() <= 0.02, "{hits}");
    }

    #[test]
    fn exploration_decays_with_state_visits() {
        let mut agent = Agent::new(AgentConfig::new(Algorithm::Q, 0.9), 1, 4).unwrap();
        agent.tables.qa.copy_from_slice(&[0.0, 0.0, 0.0, 1.0]);
        let mut rng = seeded(3);
        // first visit explores with probability 1
        agent.select_action(0, &mut rng);
        assert_eq!(agent.tables.state_counts[0], 1);
        for _ in 0..9_999 {
            agent.select_action(0, &mut rng);
        }
        let greedy = (0..10_000).filter(|_| agent.select_action(0, &mut rng) == 3).count();
        // eps is below 1/100 after 10^4 visits
        assert!(greedy > 9_900, "{greedy}");
    }

    #[test]
    fn target_examples() {
        let mut rng = seeded(0);
        let y = compute_target(TargetRule::Max, &[1.0, 2.0], &[0.0, 0.0], 0.0, 0.5, 2, &mut rng).unwrap();
        assert_eq!(y, 1.0);
        let y = compute_target(TargetRule::Clipped, &[3.0, 1.0], &[2.0, 5.0], 0.0, 1.0, 2, &mut rng).unwrap();
        assert_eq!(y, 2.0);
        let y = compute_target(TargetRule::Double, &[3.0, 1.0], &[2.0, 5.0], 1.0, 1.0, 2, &mut rng).unwrap();
        assert_eq!(y, 3.0);
        let y = compute_target(
            TargetRule::Candidate,
            &[1.0, 4.0, 3.0],
            &[5.0, 2.0, 6.0],
            0.0,
            1.0,
            2,
            &mut rng,
        )
        .unwrap();
        assert_eq!(y, 4.0);
        assert!(compute_target(TargetRule::Candidate, &[1.0], &[1.0], 0.0, 1.0, 2, &mut rng).is_err());
        assert!(compute_target(TargetRule::Max, &[1.0], &[1.0, 2.0], 0.0, 1.0, 1, &mut rng).is_err());
    }

    #[test]
    fn adaptive_k_rl_examples() {
        let mut w = DiffWindow::new(50);
        // empty window: all actions
        assert_eq!(adaptive_k_rl(&[1.0, 2.0, 3.0, 4.0], &mut w), 4);
        let mut w = DiffWindow::new(50);
        w.push(0.5);
        assert_eq!(adaptive_k_rl(&[0.7; 4], &mut w), 4);
        // spread equal to the window mean: J = 1/2, so K = 3 of 4
        let mut w = DiffWindow::new(50);
        w.push(2.0);
        assert_eq!(adaptive_k_rl(&[0.0, 1.0, 2.0, 2.0], &mut w), 3);
        let mut w = DiffWindow::new(50);
        w.push(2.0);
        w.push(4.0);
        assert_eq!(adaptive_k_rl(&[0.0, 3.0, 1.0, 1.0], &mut w), 3);
        assert_eq!(w.mean(), Some(3.0));
    }

    #[test]
    fn window_keeps_last_m_values() {
        let mut w = DiffWindow::new(3);
        assert_eq!(w.mean(), None);
        for v in [1.0, 2.0, 3.0, 4.0, 5.0] {
            w.push(v);
        }
        assert_eq!(w.len(), 3);
        assert_eq!(w.mean(), Some(4.0));
    }

    #[test]
    fn terminal_update_uses_reward_only() {
        for mode in [UpdateMode::Random, UpdateMode::Simultaneous] {
            let mut cfg = AgentConfig::new(Algorithm::AutoAcCdq, 0.9);
            cfg.update_mode = mode;
            let mut agent = Agent::new(cfg, 2, 4).unwrap();
            agent.tables.qa[4..8].copy_from_slice(&[9.0; 4]);
            let t = Transition { state: 0, action: 1, reward: 5.0, next_state: 1, done: true };
            let which = agent.update(&t, &mut seeded(4)).unwrap();
            // first visit: alpha = 1
            match which {
                Updated::A => assert_eq!(agent.tables.qa[1], 5.0),
                Updated::B => assert_eq!(agent.tables.qb[1], 5.0),
                Updated::Both => {
                    assert_eq!(agent.tables.qa[1], 5.0);
                    assert_eq!(agent.tables.qb[1], 5.0);
                }
            }
        }
    }

    #[test]
    fn simultaneous_mode_keeps_identical_tables_identical() {
        let grid = GridConfig::default();
        let mut cfg = AgentConfig::new(Algorithm::AcCdqFixed(2), 0.95);
        cfg.update_mode = UpdateMode::Simultaneous;
        let mut agent = grid_agent(&grid, cfg).unwrap();
        run_gridworld(&grid, &mut agent, 5_000, &mut seeded(5)).unwrap();
        assert_eq!(agent.tables.qa, agent.tables.qb);
        assert!(agent.tables.qa.iter().any(|&v| v != 0.0));
    }

    #[test]
    fn random_mode_coin_is_fair() {
        let mut agent = Agent::new(AgentConfig::new(Algorithm::DoubleQ, 0.9), 2, 4).unwrap();
        let mut rng = seeded(6);
        let t = Transition { state: 0, action: 0, reward: 1.0, next_state: 1, done: false };
        let a = (0..10_000)
            .filter(|_| agent.update(&t, &mut rng).unwrap() == Updated::A)
            .count();
        assert!((a as f64 / 10_000.0 - 0.5).abs() <= 0.02, "{a}");
    }

    #[test]
    fn visit_counts_sum_to_steps() {
        let grid = GridConfig::default();
        let mut agent = grid_agent(&grid, AgentConfig::new(Algorithm::AutoAcCdq, 0.95)).unwrap();
        run_gridworld(&grid, &mut agent, 3_000, &mut seeded(7)).unwrap();
        assert_eq!(agent.tables.visit_counts.iter().sum::<u64>(), 3_000);
        assert_eq!(agent.tables.state_counts.iter().sum::<u64>(), 3_000);
    }

    #[test]
    fn start_value_examples() {
        let mut t = DualQTable::zeros(1, 2);
        assert_eq!(t.start_value_estimate(0), 0.0);
        t.qa.copy_from_slice(&[1.0, 0.0]);
        t.qb.copy_from_slice(&[0.0, 1.0]);
        assert_eq!(t.start_value_estimate(0), 0.5);
        t.qb.copy_from_slice(&[1.0, 0.0]);
        assert_eq!(t.start_value_estimate(0), 1.0);
    }

    #[test]
    fn config_validation() {
        assert!(AgentConfig::new(Algorithm::AcCdqFixed(5), 0.9).validate(4).is_err());
        let mut c = AgentConfig::new(Algorithm::Q, 0.9);
        c.lr_exponent = 0.5;
        assert!(c.validate(4).is_err());
    }

    proptest! {
        #[test]
        fn full_candidate_target_equals_clipped(
            own in prop::collection::vec((-3i32..=3).prop_map(f64::from), 4),
            other in prop::collection::vec((-3i32..=3).prop_map(f64::from), 4),
            r in -2.0f64..2.0,
            seed in any::<u64>(),
        ) {
            let ac = compute_target(TargetRule::Candidate, &own, &other, r, 0.9, 4, &mut seeded(seed)).unwrap();
            let cdq = compute_target(TargetRule::Clipped, &own, &other, r, 0.9, 4, &mut seeded(seed)).unwrap();
            prop_assert_eq!(ac.to_bits(), cdq.to_bits());
        }
    }
}
