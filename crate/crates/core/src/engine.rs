//! Goal posteriors in log space.
//!
//! For every goal the unnormalized log score is
//!
//! ```text
//! ln p(g) + Σ_seen-linked ln p(t|g) + Σ_unseen-linked ln(1 - p(t|g))
//!         + l·ln ε + m·ln(1 - ε)
//! ```
//!
//! where `l` counts present nodes the goal is not linked to and `m` absent
//! ones. Present split links take the mixture weights resolved from the
//! query; absent ones have no context and use the priors. Link factors are
//! accumulated in node-id order so results are reproducible bit for bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kbmodel::{KnowledgeBase, Link, LinkProbs};
use crate::textpipe::{analyze, AnalysisOptions, QueryAnalysis, UsageResolution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("analysis refers to node '{0}' which is not in the knowledge base")]
    UnknownNode(String),
    #[error("no goal with id '{0}'")]
    UnknownGoal(String),
    #[error("topK must be at least 1")]
    InvalidTopK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankOptions {
    pub top_k: usize,
    pub enable_definiteness: bool,
    pub enable_noun_verb: bool,
    /// Attach explanation factors to each posting.
    pub explain: bool,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self {
            top_k: 5,
            enable_definiteness: true,
            enable_noun_verb: true,
            explain: false,
        }
    }
}

impl RankOptions {
    pub fn top(top_k: usize) -> Self {
        Self {
            top_k,
            ..Self::default()
        }
    }

    pub fn analysis(&self) -> AnalysisOptions {
        AnalysisOptions {
            definiteness: self.enable_definiteness,
            noun_verb: self.enable_noun_verb,
        }
    }
}

/// The four goal/term outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    SeenLinked,
    UnseenLinked,
    SeenUnlinked,
    UnseenUnlinked,
}

pub const LEAK_AGGREGATE: &str = "leak-aggregate";
pub const ABSENT_AGGREGATE: &str = "absent-aggregate";

/// One multiplicative factor of a goal's score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExplanationFactor {
    /// A node id, or one of the aggregate labels.
    pub node_id: String,
    pub outcome: Outcome,
    pub factor: f64,
    /// p(t|g) after mixing, for split links.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_prob: Option<f64>,
    /// Number of nodes folded into an aggregate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PostingScore {
    pub goal_id: String,
    pub log_score: f64,
    pub posterior: f64,
    /// 1-based.
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<ExplanationFactor>>,
}

pub type RankedPosting = PostingScore;

/// p(t⁺|g) for a present node, mixing split links by the resolved usage.
pub fn effective_term_prob(link: &Link, usage: &UsageResolution) -> f64 {
    link.probs.mixed(usage.p_indefinite, usage.p_noun)
}

fn is_split(probs: &LinkProbs) -> bool {
    !matches!(probs, LinkProbs::Plain { .. })
}

/// Scores every goal, returning postings in rank order.
pub fn score_goals(
    kb: &KnowledgeBase,
    analysis: &QueryAnalysis,
    explain: bool,
) -> Result<Vec<PostingScore>, EngineError> {
    let node_count = kb.nodes().len();
    let mut active: Vec<Option<&UsageResolution>> = vec![None; node_count];
    for a in &analysis.activations {
        let pos = kb
            .node_position(&a.node_id)
            .ok_or_else(|| EngineError::UnknownNode(a.node_id.clone()))?;
        active[pos] = Some(&a.usage);
    }
    let present = analysis.activations.len();
    let leak = kb.leak();
    let ln_leak = leak.ln();
    let ln_no_leak = (-leak).ln_1p();

    let mut postings: Vec<PostingScore> = kb
        .goals()
        .iter()
        .enumerate()
        .map(|(gi, goal)| {
            let links = kb.links_of_goal(gi);
            let mut log_score = goal.prior.ln();
            let mut seen_linked = 0usize;
            let mut factors = explain.then(|| Vec::with_capacity(links.len() + 2));
            for &li in links {
                let link = &kb.links()[li];
                match active[kb.link_node(li)] {
                    Some(usage) => {
                        let p = effective_term_prob(link, usage);
                        log_score += p.ln();
                        seen_linked += 1;
                        if let Some(f) = factors.as_mut() {
                            f.push(ExplanationFactor {
                                node_id: link.node.clone(),
                                outcome: Outcome::SeenLinked,
                                factor: p,
                                effective_prob: is_split(&link.probs).then_some(p),
                                count: None,
                            });
                        }
                    }
                    None => {
                        let ln_absent = kb.absent_log_factor(li);
                        log_score += ln_absent;
                        if let Some(f) = factors.as_mut() {
                            let absent = ln_absent.exp();
                            f.push(ExplanationFactor {
                                node_id: link.node.clone(),
                                outcome: Outcome::UnseenLinked,
                                factor: absent,
                                effective_prob: is_split(&link.probs).then_some(1.0 - absent),
                                count: None,
                            });
                        }
                    }
                }
            }
            let seen_unlinked = present - seen_linked;
            let unseen_unlinked = node_count - links.len() - seen_unlinked;
            log_score += seen_unlinked as f64 * ln_leak + unseen_unlinked as f64 * ln_no_leak;
            if let Some(f) = factors.as_mut() {
                f.push(ExplanationFactor {
                    node_id: LEAK_AGGREGATE.to_string(),
                    outcome: Outcome::SeenUnlinked,
                    factor: leak.powi(seen_unlinked as i32),
                    effective_prob: None,
                    count: Some(seen_unlinked),
                });
                f.push(ExplanationFactor {
                    node_id: ABSENT_AGGREGATE.to_string(),
                    outcome: Outcome::UnseenUnlinked,
                    factor: (1.0 - leak).powi(unseen_unlinked as i32),
                    effective_prob: None,
                    count: Some(unseen_unlinked),
                });
            }
            PostingScore {
                goal_id: goal.id.clone(),
                log_score,
                posterior: 0.0,
                rank: 0,
                factors,
            }
        })
        .collect();

    let max = postings
        .iter()
        .map(|p| p.log_score)
        .fold(f64::NEG_INFINITY, f64::max);
    let total: f64 = postings.iter().map(|p| (p.log_score - max).exp()).sum();
    for p in &mut postings {
        p.posterior = (p.log_score - max).exp() / total;
    }

    postings.sort_by(|a, b| {
        b.log_score
            .total_cmp(&a.log_score)
            .then_with(|| a.goal_id.cmp(&b.goal_id))
    });
    for (i, p) in postings.iter_mut().enumerate() {
        p.rank = i + 1;
    }
    Ok(postings)
}

/// Tokenize, spot and score `query`, keeping the top `options.top_k` goals.
pub fn rank(
    kb: &KnowledgeBase,
    query: &str,
    options: &RankOptions,
) -> Result<Vec<RankedPosting>, EngineError> {
    let (_, postings) = rank_with_analysis(kb, query, options)?;
    Ok(postings)
}

/// Like [`rank`], also returning the query analysis.
pub fn rank_with_analysis(
    kb: &KnowledgeBase,
    query: &str,
    options: &RankOptions,
) -> Result<(QueryAnalysis, Vec<RankedPosting>), EngineError> {
    if options.top_k == 0 {
        return Err(EngineError::InvalidTopK);
    }
    let analysis = analyze(query, kb, options.analysis());
    let mut postings = score_goals(kb, &analysis, options.explain)?;
    postings.truncate(options.top_k);
    Ok((analysis, postings))
}

/// Factor decomposition of one goal's score for `query`.
///
/// The goal prior times the product of the factors equals `exp(log_score)`.
pub fn explain(
    kb: &KnowledgeBase,
    query: &str,
    goal_id: &str,
    options: &RankOptions,
) -> Result<Vec<ExplanationFactor>, EngineError> {
    if kb.goal(goal_id).is_none() {
        return Err(EngineError::UnknownGoal(goal_id.to_string()));
    }
    let analysis = analyze(query, kb, options.analysis());
    let postings = score_goals(kb, &analysis, true)?;
    Ok(postings
        .into_iter()
        .find(|p| p.goal_id == goal_id)
        .and_then(|p| p.factors)
        .expect("every goal is scored"))
}
