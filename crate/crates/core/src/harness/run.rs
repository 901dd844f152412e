//! Experiment execution and artifact writing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::bandit::{self, BiasRow, ESTIMATOR_NAMES};
use crate::continuous::toy_argmax_error;
use crate::error::{Error, Result};
use crate::gridworld::optimal_start_value;
use crate::oracle::checks::{check_property, CheckReport, Verdict};
use crate::oracle::value_iteration;
use crate::par::{map_trials, with_threads, Execution};
use crate::rng::trial_rng;
use crate::stats::MeanEstimate;
use crate::tabular::{grid_agent, run_gridworld, AgentConfig};

use super::config::{BanditJob, CheckJob, ContinuousJob, ExperimentSpec, Job, TabularJob};
use super::svg::{render_bar_chart, render_line_chart, BarChart, LineChart, Series};
use super::table::{write_table, Cell, ResultTable};

/// In-memory result of one experiment.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: ResultTable,
    pub plot: Option<String>,
    pub notes: Vec<String>,
    /// Set when a `check` property failed.
    pub check_failed: bool,
}

/// Runs the experiment on `spec.threads` workers without touching disk.
pub fn execute(spec: &ExperimentSpec) -> Result<Outcome> {
    with_threads(spec.threads, || match &spec.job {
        Job::Bandit(job) => run_bandit(job, spec.seed),
        Job::Gridworld(job) => run_gridworld_job(job, spec.seed),
        Job::Converge(job) => run_converge(job, spec.seed),
        Job::Continuous(job) => run_continuous(job, spec.seed),
        Job::Check(job) => run_check(job, spec.seed),
    })
}

/// Files written by [`run`].
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub results: PathBuf,
    pub manifest: PathBuf,
    pub plot: Option<PathBuf>,
    pub outcome: Outcome,
}

/// Executes `spec` and writes `results.csv`, `manifest.txt` and, when
/// requested, `plot.svg` into `spec.out_dir`.
pub fn run(spec: &ExperimentSpec) -> Result<Artifacts> {
    let outcome = execute(spec)?;
    let dir = &spec.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let results = dir.join("results.csv");
    write_table(&outcome.table, &results)?;
    let manifest = dir.join("manifest.txt");
    write_text(&manifest, &manifest_text(spec, &outcome))?;
    let plot = match (&outcome.plot, spec.plot) {
        (Some(svg), true) => {
            let path = dir.join("plot.svg");
            write_text(&path, svg)?;
            Some(path)
        }
        _ => None,
    };
    Ok(Artifacts { results, manifest, plot, outcome })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn manifest_text(spec: &ExperimentSpec, outcome: &Outcome) -> String {
    let mut m = String::new();
    let _ = writeln!(m, "acq {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "command = {}", spec.command);
    let _ = writeln!(m, "seed = {}", spec.seed);
    let _ = writeln!(m, "threads = {}", spec.threads);
    let _ = writeln!(m, "trial_seed = splitmix64(seed ^ splitmix64(trial_index)) into xoshiro256++");
    let _ = writeln!(m, "rows = {}", outcome.table.rows().len());
    let _ = writeln!(m, "\n[settings]");
    for (k, v) in &spec.settings {
        let _ = writeln!(m, "{k} = {v}");
    }
    let _ = writeln!(m, "\n[resolved]\n{:#?}", spec.job);
    if !outcome.notes.is_empty() {
        let _ = writeln!(m, "\n[notes]");
        for n in &outcome.notes {
            let _ = writeln!(m, "{n}");
        }
    }
    m
}

fn run_bandit(job: &BanditJob, seed: u64) -> Result<Outcome> {
    let exec = Execution::default();
    let (name, rows): (&str, Vec<BiasRow>) = match job.setting {
        None => ("none", bandit::bias_summary(&job.base, 0.0, seed, exec)?),
        Some(s) => (s.name(), bandit::sweep(s, &job.values, &job.base, seed, exec)?),
    };
    let mut table = ResultTable::new([
        "setting", "setting_value", "estimator", "mean_bias", "bias_squared", "std_err",
    ])?;
    for r in &rows {
        table.push(vec![
            name.into(),
            r.setting_value.into(),
            r.estimator.into(),
            r.mean_bias.into(),
            r.bias_squared.into(),
            r.std_err.into(),
        ])?;
    }
    let values: Vec<_> = rows.chunks(ESTIMATOR_NAMES.len()).collect();
    let chart = BarChart {
        title: format!("squared bias, {} trials per point", job.base.trials),
        y_label: "bias²".into(),
        groups: values
            .iter()
            .map(|c| if job.setting.is_some() { c[0].setting_value.to_string() } else { "default".into() })
            .collect(),
        series: ESTIMATOR_NAMES.iter().map(|s| s.to_string()).collect(),
        values: values.iter().map(|c| c.iter().map(|r| r.bias_squared).collect()).collect(),
    };
    Ok(Outcome { table, plot: Some(render_bar_chart(&chart)), notes: vec![], check_failed: false })
}

/// Per-run curves sampled at the recorded steps.
#[derive(Debug, Clone, PartialEq)]
pub struct RunCurves {
    pub steps: Vec<usize>,
    /// Average reward per step so far.
    pub mean_reward: Vec<f64>,
    pub start_value: Vec<f64>,
}

/// All runs of one agent configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentRuns {
    pub config: AgentConfig,
    pub runs: Vec<RunCurves>,
}

impl AgentRuns {
    pub fn final_start_values(&self) -> Vec<f64> {
        self.runs.iter().map(|r| *r.start_value.last().expect("nonempty run")).collect()
    }

    pub fn final_mean_rewards(&self) -> Vec<f64> {
        self.runs.iter().map(|r| *r.mean_reward.last().expect("nonempty run")).collect()
    }
}

/// Runs every agent of `job`; run `r` of every agent uses
/// `trial_rng(seed, r)`.
pub fn gridworld_runs(job: &TabularJob, seed: u64) -> Result<Vec<AgentRuns>> {
    job.grid.validate()?;
    job.agents
        .iter()
        .map(|cfg| {
            let runs = map_trials(job.runs, Execution::default(), |r| {
                let mut agent = grid_agent(&job.grid, *cfg)?;
                let trace = run_gridworld(&job.grid, &mut agent, job.steps, &mut trial_rng(seed, r))?;
                let mut curves = RunCurves { steps: vec![], mean_reward: vec![], start_value: vec![] };
                let mut total = 0.0;
                for (t, (&rew, &v)) in trace.rewards.iter().zip(&trace.start_values).enumerate() {
                    total += rew;
                    let step = t + 1;
                    if step % job.record_every == 0 || step == job.steps {
                        curves.steps.push(step);
                        curves.mean_reward.push(total / step as f64);
                        curves.start_value.push(v);
                    }
                }
                Ok(curves)
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            Ok(AgentRuns { config: *cfg, runs })
        })
        .collect()
}

fn run_gridworld_job(job: &TabularJob, seed: u64) -> Result<Outcome> {
    let all = gridworld_runs(job, seed)?;
    let mut table = ResultTable::new([
        "algo",
        "mode",
        "step",
        "mean_reward",
        "mean_reward_se",
        "start_value_estimate",
        "start_value_se",
    ])?;
    let mut series = Vec::new();
    for a in &all {
        let steps = &a.runs[0].steps;
        let mut points = Vec::with_capacity(steps.len());
        for (i, &step) in steps.iter().enumerate() {
            let reward = MeanEstimate::from_iter(a.runs.iter().map(|r| r.mean_reward[i]));
            let value = MeanEstimate::from_iter(a.runs.iter().map(|r| r.start_value[i]));
            table.push(vec![
                a.config.algorithm.to_string().into(),
                a.config.update_mode.name().into(),
                step.into(),
                reward.mean.into(),
                reward.std_err.into(),
                value.mean.into(),
                value.std_err.into(),
            ])?;
            points.push((step as f64, value.mean));
        }
        series.push(Series { name: a.config.algorithm.to_string(), points });
    }
    let v_star = optimal_start_value(job.grid.n, job.grid.gamma);
    let chart = LineChart {
        title: format!("{0}x{0} grid world, {1} runs", job.grid.n, job.runs),
        x_label: "step".into(),
        y_label: "estimated max action value at start".into(),
        series,
        reference: Some(("V*(s0)".into(), v_star)),
    };
    Ok(Outcome {
        table,
        plot: Some(render_line_chart(&chart)),
        notes: vec![format!("optimal start value = {v_star}")],
        check_failed: false,
    })
}

/// One learned agent compared with the value-iteration solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergeRow {
    pub config: AgentConfig,
    pub run: u64,
    /// `max over (s, a) and both tables of |Q - Q*|`.
    pub max_abs_error: f64,
    pub start_value: f64,
}

pub fn converge_rows(job: &TabularJob, seed: u64) -> Result<(Vec<ConvergeRow>, f64)> {
    job.grid.validate()?;
    let gamma = job.grid.gamma;
    let q_star = value_iteration(&job.grid.expected_mdp(), gamma, 1e-12);
    let start = job.grid.index(job.grid.start());
    let mut rows = Vec::new();
    for cfg in &job.agents {
        let results = map_trials(job.runs, Execution::default(), |r| {
            let mut agent = grid_agent(&job.grid, *cfg)?;
            run_gridworld(&job.grid, &mut agent, job.steps, &mut trial_rng(seed, r))?;
            let t = &agent.tables;
            let err = q_star
                .values
                .iter()
                .zip(t.qa.iter().zip(&t.qb))
                .map(|(q, (a, b))| (a - q).abs().max((b - q).abs()))
                .fold(0.0, f64::max);
            Ok::<_, Error>(ConvergeRow { config: *cfg, run: r, max_abs_error: err, start_value: t.start_value_estimate(start) })
        });
        for row in results {
            rows.push(row?);
        }
    }
    Ok((rows, q_star.state_value(start)))
}

fn run_converge(job: &TabularJob, seed: u64) -> Result<Outcome> {
    let (rows, v_star) = converge_rows(job, seed)?;
    let mut table = ResultTable::new([
        "algo",
        "mode",
        "run",
        "steps",
        "max_abs_error",
        "start_value_estimate",
        "optimal_start_value",
    ])?;
    for r in &rows {
        table.push(vec![
            r.config.algorithm.to_string().into(),
            r.config.update_mode.name().into(),
            r.run.into(),
            job.steps.into(),
            r.max_abs_error.into(),
            r.start_value.into(),
            v_star.into(),
        ])?;
    }
    let mut groups: Vec<String> = Vec::new();
    let mut series: Vec<String> = Vec::new();
    for r in &rows {
        let g = r.config.update_mode.name().to_string();
        let s = r.config.algorithm.to_string();
        if !groups.contains(&g) {
            groups.push(g);
        }
        if !series.contains(&s) {
            series.push(s);
        }
    }
    let values = groups
        .iter()
        .map(|g| {
            series
                .iter()
                .map(|s| {
                    MeanEstimate::from_iter(
                        rows.iter()
                            .filter(|r| r.config.update_mode.name() == g && &r.config.algorithm.to_string() == s)
                            .map(|r| r.max_abs_error),
                    )
                    .mean
                })
                .collect()
        })
        .collect();
    let chart = BarChart {
        title: format!("max |Q - Q*| after {} steps", job.steps),
        y_label: "max |Q - Q*|".into(),
        groups,
        series,
        values,
    };
    Ok(Outcome { table, plot: Some(render_bar_chart(&chart)), notes: vec![], check_failed: false })
}

fn run_continuous(job: &ContinuousJob, seed: u64) -> Result<Outcome> {
    let mut table = ResultTable::new(["k", "trials", "mean_error", "std_err"])?;
    let mut points = Vec::new();
    for &k in &job.ks {
        // a shared seed makes each candidate set a prefix of the larger ones
        let e = toy_argmax_error(&job.problem, k, job.trials, seed, Execution::default())?;
        table.push(vec![k.into(), job.trials.into(), e.mean.into(), e.std_err.into()])?;
        points.push((k as f64, e.mean));
    }
    let chart = LineChart {
        title: "argmax error of the best Gaussian candidate".into(),
        x_label: "K".into(),
        y_label: "mean |a_K - a*|".into(),
        series: vec![Series { name: "error".into(), points }],
        reference: None,
    };
    Ok(Outcome { table, plot: Some(render_line_chart(&chart)), notes: vec![], check_failed: false })
}

pub fn check_reports(job: &CheckJob, seed: u64) -> Result<Vec<CheckReport>> {
    job.properties
        .iter()
        .map(|&p| check_property(p, &job.family(p)?, &job.ks(), job.trials, seed, Execution::default()))
        .collect()
}

fn run_check(job: &CheckJob, seed: u64) -> Result<Outcome> {
    let reports = check_reports(job, seed)?;
    let mut table = ResultTable::new([
        "property",
        "index",
        "estimate",
        "std_err",
        "reference",
        "reference_std_err",
        "worst_z",
        "verdict",
    ])?;
    let mut notes = Vec::new();
    for rep in &reports {
        for r in &rep.rows {
            table.push(vec![
                rep.property.name().into(),
                r.index.into(),
                r.estimate.into(),
                r.std_err.into(),
                r.reference.into(),
                r.reference_std_err.into(),
                Cell::Real(r.worst_z),
                r.verdict.name().into(),
            ])?;
        }
        let mut line = format!("{}: {}", rep.property, rep.verdict.name());
        if !rep.note.is_empty() {
            line.push_str(&format!(" ({})", rep.note));
        }
        notes.push(line);
    }
    let check_failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
    Ok(Outcome { table, plot: None, notes, check_failed })
}
