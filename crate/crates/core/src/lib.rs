//! Bayesian term spotting: infer a posterior over a user's informational
//! goals from the words of a free-text query.
//!
//! - [`kbmodel`]: the knowledge base, its JSON format and validation.
//! - [`textpipe`]: tokenizing, stemming and spotting evidence in a query.
//! - [`engine`]: posterior scoring, ranking and explanations.
//! - [`harness`]: brute-force oracle, synthetic knowledge bases, query
//!   sampling and the smoke-test gate.
//! - [`demo`]: the bundled spreadsheet-help knowledge base and smoke suite.

pub mod demo;
pub mod engine;
pub mod harness;
pub mod kbmodel;
pub mod textpipe;

pub use engine::{
    explain, rank, score_goals, EngineError, ExplanationFactor, Outcome, PostingScore, RankOptions,
    RankedPosting,
};
pub use kbmodel::{load_kb, KbError, KnowledgeBase};
pub use textpipe::{analyze, AnalysisOptions, QueryAnalysis};
