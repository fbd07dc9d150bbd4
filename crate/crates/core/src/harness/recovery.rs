//! Engine-versus-oracle agreement on queries sampled from the model itself.

use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::score_goals;
use crate::kbmodel::KnowledgeBase;
use crate::textpipe::{analyze, AnalysisOptions};

use super::{oracle_posterior, sample_query, HarnessError};

/// Posteriors closer than this count as tied when comparing rankings.
pub const RANK_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RecoveryReport {
    pub trials: usize,
    pub engine_top1_rate: f64,
    pub oracle_top1_rate: f64,
    pub max_posterior_gap: f64,
    /// Fraction of trials where the engine ordering matches the oracle's.
    pub ranking_agreement_rate: f64,
    /// Fraction of trials where spotting recovered exactly the sampled nodes.
    pub spotting_recovery_rate: f64,
}

/// True when `order` sorts goals by non-increasing `posterior`, allowing
/// pairs within `tolerance` of each other in either order.
pub fn rankings_agree(order: &[&str], posterior: &HashMap<&str, f64>, tolerance: f64) -> bool {
    order
        .windows(2)
        .all(|w| posterior[w[0]] >= posterior[w[1]] - tolerance)
}

fn oracle_top(posteriors: &[(String, f64)]) -> &str {
    posteriors
        .iter()
        .min_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)))
        .map(|(id, _)| id.as_str())
        .expect("knowledge bases have goals")
}

struct Trial {
    engine_top: bool,
    oracle_top: bool,
    gap: f64,
    agree: bool,
    recovered: bool,
}

/// Samples `trials` goals from the priors, draws a query for each and
/// compares engine and oracle posteriors on the spotted evidence.
pub fn generative_recovery(
    kb: &KnowledgeBase,
    trials: usize,
    seed: u64,
) -> Result<RecoveryReport, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let priors =
        WeightedIndex::new(kb.goals().iter().map(|g| g.prior)).expect("priors are positive");
    let plan: Vec<(usize, u64)> = (0..trials)
        .map(|_| (priors.sample(&mut rng), rng.random()))
        .collect();

    let results = plan
        .par_iter()
        .map(|&(goal, query_seed)| {
            let goal_id = &kb.goals()[goal].id;
            let sampled = sample_query(kb, goal_id, query_seed)?;
            let analysis = analyze(&sampled.text, kb, AnalysisOptions::default());
            let postings = score_goals(kb, &analysis, false)?;
            let oracle = oracle_posterior(kb, &analysis.activations)?;
            let by_id: HashMap<&str, f64> =
                oracle.iter().map(|(id, p)| (id.as_str(), *p)).collect();

            let gap = postings
                .iter()
                .map(|p| (p.posterior - by_id[p.goal_id.as_str()]).abs())
                .fold(0.0, f64::max);
            let order: Vec<&str> = postings.iter().map(|p| p.goal_id.as_str()).collect();
            let mut spotted: Vec<&str> = analysis
                .activations
                .iter()
                .map(|a| a.node_id.as_str())
                .collect();
            let mut drawn: Vec<&str> = sampled.activations.iter().map(String::as_str).collect();
            spotted.sort_unstable();
            drawn.sort_unstable();
            Ok(Trial {
                engine_top: postings[0].goal_id == *goal_id,
                oracle_top: oracle_top(&oracle) == goal_id,
                gap,
                agree: rankings_agree(&order, &by_id, RANK_TIE_TOLERANCE),
                recovered: spotted == drawn,
            })
        })
        .collect::<Result<Vec<Trial>, HarnessError>>()?;

    let n = trials.max(1) as f64;
    let rate = |f: fn(&Trial) -> bool| results.iter().filter(|t| f(t)).count() as f64 / n;
    Ok(RecoveryReport {
        trials,
        engine_top1_rate: rate(|t| t.engine_top),
        oracle_top1_rate: rate(|t| t.oracle_top),
        max_posterior_gap: results.iter().map(|t| t.gap).fold(0.0, f64::max),
        ranking_agreement_rate: rate(|t| t.agree),
        spotting_recovery_rate: rate(|t| t.recovered),
    })
}
