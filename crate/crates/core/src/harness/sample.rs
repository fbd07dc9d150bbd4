//! Generative query sampling.
//!
//! Reads the knowledge base as a generative model: given a goal, each node
//! appears independently, linked nodes with their prior-mixed probability
//! and unlinked ones with the leak.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::kbmodel::KnowledgeBase;

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SampledQuery {
    pub text: String,
    /// Node ids drawn, in knowledge-base order.
    pub activations: Vec<String>,
}

/// Draws a query for `goal_id`. Deterministic in `seed`.
pub fn sample_query(
    kb: &KnowledgeBase,
    goal_id: &str,
    seed: u64,
) -> Result<SampledQuery, HarnessError> {
    let goal = kb
        .goal_position(goal_id)
        .ok_or_else(|| HarnessError::UnknownGoal(goal_id.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_with_leak(kb, goal, kb.leak(), &mut rng))
}

pub(crate) fn sample_with_leak(
    kb: &KnowledgeBase,
    goal: usize,
    leak: f64,
    rng: &mut impl Rng,
) -> SampledQuery {
    let prior_indef = kb.indefiniteness().prior_indef;
    let prior_noun = kb.noun_verb_prior();
    let mut linked = vec![None; kb.nodes().len()];
    for &li in kb.links_of_goal(goal) {
        linked[kb.link_node(li)] = Some(kb.links()[li].probs.mixed(prior_indef, prior_noun));
    }

    let mut words = Vec::new();
    let mut activations = Vec::new();
    for (node, p) in kb.nodes().iter().zip(linked) {
        let p = p.unwrap_or(leak);
        if rng.random::<f64>() < p {
            let surface = &node.surfaces[rng.random_range(0..node.surfaces.len())];
            words.push(surface.text());
            activations.push(node.id.clone());
        }
    }
    SampledQuery {
        text: words.join(" "),
        activations,
    }
}
