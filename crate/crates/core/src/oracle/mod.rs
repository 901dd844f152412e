//! Independent verification: Monte-Carlo expectations with standard errors,
//! exact enumeration on tiny discrete instances, and value iteration.

pub mod checks;
mod enumerate;
mod family;
mod mc;
mod mdp;

pub use checks::{
    check_property, CheckReport, CheckRow, Property, Verdict, AGREEMENT_SE, STAT_TOLERANCE_SE,
};
pub use enumerate::{enumerate_exact, MAX_OUTCOMES};
pub use family::{DiscreteDist, DistFamily, DistKind};
pub use mc::{mc_estimate, simulate, simulate_estimators, EstimatorKind};
pub use mdp::{value_iteration, FiniteMdp, Outcome, QTable};
