//! Action-candidate clipped double estimation of the maximum expected value,
//! its tabular and continuous-action learners, and the experiment harness
//! that drives them.

pub mod bandit;
pub mod continuous;
pub mod error;
pub mod estimator;
pub mod gridworld;
pub mod harness;
pub mod oracle;
pub mod par;
pub mod rng;
pub mod stats;
pub mod tabular;

pub use error::{Error, Result};
