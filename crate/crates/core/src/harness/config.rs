//! Flat key-value experiment configuration.
//!
//! Values come from three layers, highest first: command-line flags, the
//! TOML file, built-in defaults. Every key is typed and scoped to the
//! commands that use it; anything else is rejected with the key named.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::bandit::{BanditConfig, Setting};
use crate::continuous::ToyProblem;
use crate::error::{Error, Result};
use crate::gridworld::{GridConfig, N_ACTIONS};
use crate::oracle::checks::Property;
use crate::oracle::DistFamily;
use crate::tabular::{AgentConfig, Algorithm, UpdateMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bandit,
    Gridworld,
    Converge,
    Continuous,
    Check,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Bandit,
        Command::Gridworld,
        Command::Converge,
        Command::Continuous,
        Command::Check,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Bandit => "bandit",
            Command::Gridworld => "gridworld",
            Command::Converge => "converge",
            Command::Continuous => "continuous",
            Command::Check => "check",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::config("command", format!("unknown command `{name}`")))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    UInt,
    Float,
    Bool,
    Str,
    UInts,
    Floats,
    Strs,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::UInt => "a nonnegative integer",
            Kind::Float => "a number",
            Kind::Bool => "a boolean",
            Kind::Str => "a string",
            Kind::UInts => "a list of nonnegative integers",
            Kind::Floats => "a list of numbers",
            Kind::Strs => "a list of strings",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    UInt(u64),
    Float(f64),
    Bool(bool),
    Str(String),
    UInts(Vec<u64>),
    Floats(Vec<f64>),
    Strs(Vec<String>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
            f.write_str("[")?;
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")
        }
        match self {
            Value::UInt(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Str(v) => write!(f, "{v:?}"),
            Value::UInts(v) => list(f, v),
            Value::Floats(v) => list(f, v),
            Value::Strs(v) => {
                let quoted: Vec<String> = v.iter().map(|s| format!("{s:?}")).collect();
                list(f, &quoted)
            }
        }
    }
}

use Command::*;

const COMMON: &[Command] = &[Bandit, Gridworld, Converge, Continuous, Check];
const TABULAR: &[Command] = &[Gridworld, Converge];

/// (key, type, commands using it)
const SCHEMA: &[(&str, Kind, &[Command])] = &[
    ("seed", Kind::UInt, COMMON),
    ("threads", Kind::UInt, COMMON),
    ("out", Kind::Str, COMMON),
    ("plot", Kind::Bool, COMMON),
    ("trials", Kind::UInt, &[Bandit, Continuous, Check]),
    ("runs", Kind::UInt, TABULAR),
    // bandit
    ("n_visitors", Kind::UInt, &[Bandit]),
    ("n_ads", Kind::UInt, &[Bandit]),
    ("rate_lo", Kind::Float, &[Bandit]),
    ("rate_hi", Kind::Float, &[Bandit]),
    ("k_fraction", Kind::Float, &[Bandit]),
    ("c", Kind::Float, &[Bandit]),
    ("setting", Kind::Str, &[Bandit]),
    ("values", Kind::Floats, &[Bandit]),
    // tabular
    ("n", Kind::UInt, TABULAR),
    ("gamma", Kind::Float, TABULAR),
    ("steps", Kind::UInt, TABULAR),
    ("algos", Kind::Strs, TABULAR),
    ("mode", Kind::Str, TABULAR),
    ("lr_exponent", Kind::Float, TABULAR),
    ("eps_exponent", Kind::Float, TABULAR),
    ("window", Kind::UInt, TABULAR),
    ("record_every", Kind::UInt, &[Gridworld]),
    // continuous
    ("k", Kind::UInts, &[Continuous, Check]),
    ("sigma", Kind::Float, &[Continuous]),
    ("offset", Kind::Float, &[Continuous]),
    ("optimum", Kind::Float, &[Continuous]),
    ("bound", Kind::Float, &[Continuous]),
    // check
    ("property", Kind::Strs, &[Check]),
    ("n_vars", Kind::UInt, &[Check]),
    ("samples", Kind::UInt, &[Check]),
    ("spacing", Kind::Float, &[Check]),
    ("std", Kind::Float, &[Check]),
];

fn kind_of(command: Command, key: &str) -> Result<Kind> {
    SCHEMA
        .iter()
        .find(|(k, _, cmds)| *k == key && cmds.contains(&command))
        .map(|(_, kind, _)| *kind)
        .ok_or_else(|| Error::config(key, format!("unknown key for `{command}`")))
}

fn mismatch(key: &str, kind: Kind) -> Error {
    Error::config(key, format!("type mismatch: expected {}", kind.describe()))
}

fn from_toml(key: &str, kind: Kind, v: &toml::Value) -> Result<Value> {
    let uint = |v: &toml::Value| v.as_integer().and_then(|i| u64::try_from(i).ok());
    let float = |v: &toml::Value| v.as_float().or_else(|| v.as_integer().map(|i| i as f64));
    let bad = || mismatch(key, kind);
    Ok(match kind {
        Kind::UInt => Value::UInt(uint(v).ok_or_else(bad)?),
        Kind::Float => Value::Float(float(v).ok_or_else(bad)?),
        Kind::Bool => Value::Bool(v.as_bool().ok_or_else(bad)?),
        Kind::Str => Value::Str(v.as_str().ok_or_else(bad)?.to_owned()),
        Kind::UInts | Kind::Floats | Kind::Strs => {
            if let Some(s) = v.as_str() {
                return from_flag(key, kind, s);
            }
            let items = v.as_array().ok_or_else(bad)?;
            match kind {
                Kind::UInts => Value::UInts(items.iter().map(|x| uint(x).ok_or_else(bad)).collect::<Result<_>>()?),
                Kind::Floats => Value::Floats(items.iter().map(|x| float(x).ok_or_else(bad)).collect::<Result<_>>()?),
                _ => Value::Strs(
                    items
                        .iter()
                        .map(|x| x.as_str().map(str::to_owned).ok_or_else(bad))
                        .collect::<Result<_>>()?,
                ),
            }
        }
    })
}

/// Parses a flag string; lists are comma separated.
fn from_flag(key: &str, kind: Kind, s: &str) -> Result<Value> {
    let bad = || mismatch(key, kind);
    let items = || s.split(',').map(str::trim).filter(|x| !x.is_empty());
    Ok(match kind {
        Kind::UInt => Value::UInt(s.trim().parse().map_err(|_| bad())?),
        Kind::Float => Value::Float(s.trim().parse().map_err(|_| bad())?),
        Kind::Bool => Value::Bool(s.trim().parse().map_err(|_| bad())?),
        Kind::Str => Value::Str(s.trim().to_owned()),
        Kind::UInts => Value::UInts(items().map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?),
        Kind::Floats => Value::Floats(items().map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?),
        Kind::Strs => Value::Strs(items().map(str::to_owned).collect()),
    })
}

/// Raw, type-checked key-value settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    command: Command,
    values: BTreeMap<String, Value>,
}

impl Settings {
    pub fn new(command: Command) -> Self {
        Settings { command, values: BTreeMap::new() }
    }

    /// Merges a flat TOML document. Nested tables are rejected.
    pub fn merge_toml(&mut self, text: &str) -> Result<()> {
        let doc: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::config("config", e.message().to_owned()))?;
        for (key, v) in &doc {
            let kind = kind_of(self.command, key)?;
            self.values.insert(key.clone(), from_toml(key, kind, v)?);
        }
        Ok(())
    }

    /// Sets one key from its string form, as given on the command line.
    pub fn set_flag(&mut self, key: &str, raw: &str) -> Result<()> {
        let kind = kind_of(self.command, key)?;
        self.values.insert(key.to_owned(), from_flag(key, kind, raw)?);
        Ok(())
    }

    fn uint(&self, key: &str, default: u64) -> u64 {
        match self.values.get(key) {
            Some(Value::UInt(v)) => *v,
            _ => default,
        }
    }

    fn float(&self, key: &str, default: f64) -> f64 {
        self.float_opt(key).unwrap_or(default)
    }

    fn float_opt(&self, key: &str) -> Option<f64> {
        match self.values.get(key) {
            Some(Value::Float(v)) => Some(*v),
            _ => None,
        }
    }

    fn bool(&self, key: &str, default: bool) -> bool {
        match self.values.get(key) {
            Some(Value::Bool(v)) => *v,
            _ => default,
        }
    }

    fn str(&self, key: &str, default: &str) -> String {
        match self.values.get(key) {
            Some(Value::Str(v)) => v.clone(),
            _ => default.to_owned(),
        }
    }

    fn uints(&self, key: &str) -> Option<Vec<u64>> {
        match self.values.get(key) {
            Some(Value::UInts(v)) => Some(v.clone()),
            _ => None,
        }
    }

    fn floats(&self, key: &str) -> Option<Vec<f64>> {
        match self.values.get(key) {
            Some(Value::Floats(v)) => Some(v.clone()),
            _ => None,
        }
    }

    fn strs(&self, key: &str) -> Option<Vec<String>> {
        match self.values.get(key) {
            Some(Value::Strs(v)) => Some(v.clone()),
            _ => None,
        }
    }

    fn usize(&self, key: &str, default: usize, min: usize) -> Result<usize> {
        let v = self.uint(key, default as u64);
        let v = usize::try_from(v).map_err(|_| Error::config(key, "value too large"))?;
        if v < min {
            return Err(Error::config(key, format!("out of range: must be at least {min}")));
        }
        Ok(v)
    }

    fn positive_float(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.float(key, default);
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::config(key, "out of range: must be positive"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BanditJob {
    pub base: BanditConfig,
    /// `None` runs the base configuration once.
    pub setting: Option<Setting>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabularJob {
    pub grid: GridConfig,
    pub agents: Vec<AgentConfig>,
    pub runs: u64,
    pub steps: usize,
    pub record_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousJob {
    pub problem: ToyProblem,
    pub ks: Vec<usize>,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckJob {
    pub properties: Vec<Property>,
    pub ks: Vec<usize>,
    pub trials: u64,
    pub n_vars: usize,
    pub samples: usize,
    pub std: f64,
    /// Mean spacing between variables; `None` uses the per-property default.
    pub spacing: Option<f64>,
}

impl CheckJob {
    /// Gaussian family `N(spacing * i, std²)`; lemma1 defaults to zero
    /// spacing since it needs i.i.d. variables.
    pub fn family(&self, property: Property) -> Result<DistFamily> {
        let default = if property == Property::Lemma1 { 0.0 } else { 0.1 };
        let spacing = self.spacing.unwrap_or(default);
        let means = (0..self.n_vars).map(|i| spacing * i as f64).collect();
        DistFamily::gaussian(means, vec![self.std; self.n_vars], self.samples)
    }

    pub fn ks(&self) -> Vec<usize> {
        if self.ks.is_empty() {
            (1..=self.n_vars).collect()
        } else {
            self.ks.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Bandit(BanditJob),
    Gridworld(TabularJob),
    Converge(TabularJob),
    Continuous(ContinuousJob),
    Check(CheckJob),
}

/// Fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub command: Command,
    pub seed: u64,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
    pub out_dir: PathBuf,
    pub plot: bool,
    pub job: Job,
    /// Explicitly set keys, for the manifest.
    pub settings: BTreeMap<String, Value>,
}

/// Builds a spec from an optional TOML document and flag overrides.
pub fn parse_config(command: Command, file: Option<&str>, flags: &[(&str, String)]) -> Result<ExperimentSpec> {
    let mut s = Settings::new(command);
    if let Some(text) = file {
        s.merge_toml(text)?;
    }
    for (key, raw) in flags {
        s.set_flag(key, raw)?;
    }
    resolve(s)
}

fn parse_algos(s: &Settings, default: &[&str]) -> Result<Vec<Algorithm>> {
    let names = s
        .strs("algos")
        .unwrap_or_else(|| default.iter().map(|x| x.to_string()).collect());
    if names.is_empty() {
        return Err(Error::config("algos", "need at least one algorithm"));
    }
    names
        .iter()
        .map(|n| Algorithm::parse(n).map_err(|e| Error::config("algos", e.to_string())))
        .collect()
}

fn tabular_job(s: &Settings, command: Command) -> Result<TabularJob> {
    let n = s.usize("n", 3, 2)?;
    let gamma = s.float("gamma", 0.95);
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::config("gamma", "out of range: must lie in [0, 1)"));
    }
    let grid = if command == Converge {
        GridConfig::deterministic(n, gamma)
    } else {
        GridConfig { n, gamma, ..Default::default() }
    };
    let (default_algos, default_mode, default_runs, default_steps): (&[&str], _, _, _) = match command {
        Converge => (&["auto"], "both", 1, 200_000),
        _ => (&["q", "dq", "cdq", "ac2", "ac3", "auto"], "random", 100, 10_000),
    };
    let modes = match s.str("mode", default_mode).as_str() {
        "both" if command == Converge => vec![UpdateMode::Random, UpdateMode::Simultaneous],
        m => vec![UpdateMode::parse(m).map_err(|e| Error::config("mode", e.to_string()))?],
    };
    let lr = s.float("lr_exponent", 0.8);
    if !(lr > 0.5 && lr <= 1.0) {
        return Err(Error::config("lr_exponent", "out of range: must lie in (0.5, 1]"));
    }
    let eps = s.float("eps_exponent", 0.5);
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::config("eps_exponent", "out of range: must be nonnegative"));
    }
    let window = s.usize("window", 50, 1)?;
    let mut agents = Vec::new();
    for mode in &modes {
        for algorithm in parse_algos(s, default_algos)? {
            if let Algorithm::AcCdqFixed(k) = algorithm {
                if k > N_ACTIONS {
                    return Err(Error::config("algos", format!("out of range: ac{k} exceeds {N_ACTIONS} actions")));
                }
            }
            agents.push(AgentConfig {
                algorithm,
                gamma,
                update_mode: *mode,
                lr_exponent: lr,
                eps_exponent: eps,
                window,
            });
        }
    }
    let steps = s.usize("steps", default_steps, 1)?;
    let record_every = if command == Gridworld { s.usize("record_every", 100, 1)? } else { steps };
    Ok(TabularJob {
        grid,
        agents,
        runs: s.usize("runs", default_runs, 1)? as u64,
        steps,
        record_every,
    })
}

fn resolve(s: Settings) -> Result<ExperimentSpec> {
    let command = s.command;
    let job = match command {
        Bandit => {
            let base = BanditConfig {
                n_visitors: s.usize("n_visitors", 30_000, 1)?,
                n_ads: s.usize("n_ads", 30, 1)?,
                rate_lo: s.float("rate_lo", 0.02),
                rate_hi: s.float("rate_hi", 0.05),
                trials: s.usize("trials", 2000, 1)? as u64,
                k_fraction: s.float("k_fraction", 0.15),
                c: s.float("c", 0.005),
            };
            base.validate().map_err(|e| match e {
                Error::InvalidParameter { name, message } => Error::config(name, message),
                other => other,
            })?;
            if base.samples_per_ad() < 2 {
                return Err(Error::config("n_visitors", "out of range: need at least 2 visitors per ad"));
            }
            let setting = match s.str("setting", "none").as_str() {
                "none" => None,
                name => Some(Setting::parse(name).map_err(|e| Error::config("setting", e.to_string()))?),
            };
            let values = match (setting, s.floats("values")) {
                (None, Some(_)) => return Err(Error::config("values", "needs a sweep `setting`")),
                (None, None) => vec![],
                (Some(st), None) => st.default_values(),
                (Some(_), Some(v)) if v.is_empty() => {
                    return Err(Error::config("values", "need at least one value"))
                }
                (Some(_), Some(v)) => v,
            };
            if let Some(st) = setting {
                for &v in &values {
                    st.apply(&base, v).map_err(|e| Error::config("values", e.to_string()))?;
                }
            }
            Job::Bandit(BanditJob { base, setting, values })
        }
        Gridworld => Job::Gridworld(tabular_job(&s, command)?),
        Converge => Job::Converge(tabular_job(&s, command)?),
        Continuous => {
            let ks: Vec<usize> = s
                .uints("k")
                .unwrap_or_else(|| vec![1, 32, 64, 128])
                .into_iter()
                .map(|k| k as usize)
                .collect();
            if ks.is_empty() || ks.contains(&0) {
                return Err(Error::config("k", "out of range: need candidate counts of at least 1"));
            }
            let bound = s.positive_float("bound", 1.0)?;
            let problem = ToyProblem {
                optimum: s.float("optimum", 0.3),
                offset: s.float("offset", 0.2),
                sigma: s.positive_float("sigma", 0.1)?,
                bound,
            };
            if problem.optimum.abs() > bound {
                return Err(Error::config("optimum", "out of range: must lie within the bounds"));
            }
            Job::Continuous(ContinuousJob { problem, ks, trials: s.usize("trials", 10_000, 2)? as u64 })
        }
        Check => {
            let names = s.strs("property").unwrap_or_else(|| {
                Property::ALL.iter().map(|p| p.name().to_owned()).collect()
            });
            if names.is_empty() {
                return Err(Error::config("property", "need at least one property"));
            }
            let properties = names
                .iter()
                .map(|n| Property::parse(n).map_err(|e| Error::config("property", e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let n_vars = s.usize("n_vars", 10, 1)?;
            let ks: Vec<usize> = s.uints("k").unwrap_or_default().into_iter().map(|k| k as usize).collect();
            if let Some(&bad) = ks.iter().find(|&&k| k == 0 || k > n_vars) {
                return Err(Error::config("k", format!("out of range: {bad} not in [1, {n_vars}]")));
            }
            let spacing = s.float_opt("spacing");
            if spacing.is_some_and(|v| !v.is_finite()) {
                return Err(Error::config("spacing", "out of range: must be finite"));
            }
            Job::Check(CheckJob {
                properties,
                ks,
                trials: s.usize("trials", 100_000, 2)? as u64,
                n_vars,
                samples: s.usize("samples", 10, 1)?,
                std: s.positive_float("std", 1.0)?,
                spacing,
            })
        }
    };
    Ok(ExperimentSpec {
        command,
        seed: s.uint("seed", 0),
        threads: s.usize("threads", 0, 0)?,
        out_dir: PathBuf::from(s.str("out", "out")),
        plot: s.bool("plot", false),
        job,
        settings: s.values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bandit(file: &str, flags: &[(&str, String)]) -> Result<BanditJob> {
        match parse_config(Bandit, Some(file), flags)?.job {
            Job::Bandit(b) => Ok(b),
            _ => unreachable!(),
        }
    }

    #[test]
    fn empty_bandit_file_uses_defaults() {
        let b = bandit("", &[]).unwrap();
        assert_eq!(b.base, BanditConfig::default());
        assert_eq!(b.setting, None);
    }

    #[test]
    fn flags_override_file() {
        let b = bandit("trials = 2000", &[("trials", "50".into())]).unwrap();
        assert_eq!(b.base.trials, 50);
    }

    #[test]
    fn errors_name_the_key() {
        let msg = bandit("k_fraction = 1.5", &[]).unwrap_err().to_string();
        assert!(msg.contains("k_fraction") && msg.contains("k_fraction out of (0,1]"), "{msg}");
        let msg = bandit("bogus = 1", &[]).unwrap_err().to_string();
        assert!(msg.contains("bogus") && msg.contains("unknown key"), "{msg}");
        let msg = bandit("trials = \"many\"", &[]).unwrap_err().to_string();
        assert!(msg.contains("trials") && msg.contains("type mismatch"), "{msg}");
        let msg = bandit("trials = -3", &[]).unwrap_err().to_string();
        assert!(msg.contains("trials"), "{msg}");
        let msg = bandit("", &[("n", "3".into())]).unwrap_err().to_string();
        assert!(msg.starts_with("n:"), "{msg}");
        let msg = bandit("[table]\nx = 1", &[]).unwrap_err().to_string();
        assert!(msg.contains("table"), "{msg}");
    }

    #[test]
    fn sweep_values() {
        let b = bandit("setting = \"ads\"", &[]).unwrap();
        assert_eq!(b.values.len(), 10);
        let b = bandit("setting = \"maxprob\"\nvalues = [0.05, 0.07]", &[]).unwrap();
        assert_eq!(b.values, vec![0.05, 0.07]);
        assert!(bandit("values = [1.0]", &[]).is_err());
        assert!(bandit("setting = \"ads\"\nvalues = [5]", &[]).is_err());
    }

    #[test]
    fn gridworld_defaults_and_lists() {
        let spec = parse_config(Gridworld, None, &[]).unwrap();
        let Job::Gridworld(job) = spec.job else { unreachable!() };
        assert_eq!(job.runs, 100);
        assert_eq!(job.steps, 10_000);
        assert_eq!(job.agents.len(), 6);
        assert_eq!(job.grid, GridConfig::default());
        let spec = parse_config(Gridworld, Some("algos = [\"q\", \"ac2\"]"), &[("algos", "dq, auto".into())]).unwrap();
        let Job::Gridworld(job) = spec.job else { unreachable!() };
        let names: Vec<String> = job.agents.iter().map(|a| a.algorithm.to_string()).collect();
        assert_eq!(names, ["dq", "auto"]);
        assert!(parse_config(Gridworld, None, &[("algos", "ac5".into())]).is_err());
        assert!(parse_config(Gridworld, None, &[("mode", "both".into())]).is_err());
        assert!(parse_config(Gridworld, None, &[("gamma", "1.0".into())]).is_err());
    }

    #[test]
    fn converge_runs_both_modes_on_deterministic_grid() {
        let spec = parse_config(Converge, None, &[]).unwrap();
        let Job::Converge(job) = spec.job else { unreachable!() };
        assert_eq!(job.agents.len(), 2);
        assert_eq!(job.grid.step_rewards, (-1.0, -1.0));
        assert_eq!(job.steps, 200_000);
    }

    #[test]
    fn check_and_continuous() {
        let spec = parse_config(Check, None, &[("property", "lemma1".into()), ("k", "1,5,10".into())]).unwrap();
        let Job::Check(job) = spec.job else { unreachable!() };
        assert!(job.family(Property::Lemma1).unwrap().is_iid());
        assert!(!job.family(Property::Theorem1).unwrap().is_iid());
        assert_eq!(job.ks(), vec![1, 5, 10]);
        assert!(parse_config(Check, None, &[("k", "11".into())]).is_err());
        assert!(parse_config(Check, None, &[("property", "nope".into())]).is_err());
        let spec = parse_config(Continuous, None, &[]).unwrap();
        let Job::Continuous(job) = spec.job else { unreachable!() };
        assert_eq!(job.ks, vec![1, 32, 64, 128]);
        assert!(parse_config(Continuous, None, &[("sigma", "0".into())]).is_err());
    }

    #[test]
    fn common_keys() {
        let spec = parse_config(Continuous, Some("seed = 9\nplot = true"), &[("threads", "2".into())]).unwrap();
        assert_eq!((spec.seed, spec.threads, spec.plot), (9, 2, true));
        assert_eq!(spec.settings.len(), 3);
    }
}
