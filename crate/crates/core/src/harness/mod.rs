//! Verification and evaluation tooling.

mod oracle;
pub mod random;
mod recovery;
mod sample;
mod smoke;
mod synth;

use thiserror::Error;

use crate::engine::EngineError;
use crate::kbmodel::KbError;

pub use oracle::{oracle_posterior, ORACLE_MAX_LATENT_CONFIGS, ORACLE_MAX_NODES};
pub use recovery::{generative_recovery, rankings_agree, RecoveryReport, RANK_TIE_TOLERANCE};
pub use sample::{sample_query, SampledQuery};
pub use smoke::{
    parse_smoke_suite, run_smoke, run_smoke_with, CaseResult, SmokeCase, SmokeReport, SmokeSuite,
};
pub use synth::{synth_kb, SynthParams};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("oracle refuses: {0}")]
    OracleRefused(String),
    #[error("infeasible parameters: {0}")]
    InfeasibleParams(String),
    #[error("smoke suite has no cases")]
    EmptySuite,
    #[error("smoke suite line {line}: {message}")]
    Suite { line: usize, message: String },
    #[error("no goal with id '{0}'")]
    UnknownGoal(String),
    #[error("activation for unknown node '{0}'")]
    UnknownNode(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Kb(#[from] KbError),
}
