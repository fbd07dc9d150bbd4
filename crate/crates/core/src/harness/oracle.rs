//! Brute-force posterior by joint enumeration.
//!
//! Independent of the engine: linear space, knowledge-base order rather than
//! node-id order, no shared mixture code. For the observed presence pattern it
//! enumerates every joint assignment of the latent usage variables (indefinite
//! vs definite, noun vs verb) across all nodes and sums the joint
//! probabilities with compensated summation.

use crate::kbmodel::{KnowledgeBase, LinkProbs};
use crate::textpipe::Activation;

use super::HarnessError;

pub const ORACLE_MAX_NODES: usize = 20;
pub const ORACLE_MAX_LATENT_CONFIGS: usize = 1 << 22;

/// Neumaier compensated sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// (weight, p(node present | latent state, goal)) for each latent state.
fn latent_states(probs: &LinkProbs, p_indef: f64, p_noun: f64) -> Vec<(f64, f64)> {
    match *probs {
        LinkProbs::Plain { p } => vec![(1.0, p.p)],
        LinkProbs::DefinitenessSplit {
            p_indef: i,
            p_def: d,
        } => vec![(p_indef, i.p), (1.0 - p_indef, d.p)],
        LinkProbs::NounVerbSplit {
            p_noun: n,
            p_verb: v,
        } => vec![(p_noun, n.p), (1.0 - p_noun, v.p)],
        LinkProbs::FullSplit {
            p_noun_indef,
            p_noun_def,
            p_verb,
        } => vec![
            (p_noun * p_indef, p_noun_indef.p),
            (p_noun * (1.0 - p_indef), p_noun_def.p),
            (1.0 - p_noun, p_verb.p),
        ],
    }
}

/// Posterior per goal, in knowledge-base goal order.
pub fn oracle_posterior(
    kb: &KnowledgeBase,
    activations: &[Activation],
) -> Result<Vec<(String, f64)>, HarnessError> {
    let nodes = kb.nodes();
    if nodes.len() > ORACLE_MAX_NODES {
        return Err(HarnessError::OracleRefused(format!(
            "{} nodes exceeds the limit of {ORACLE_MAX_NODES}",
            nodes.len()
        )));
    }

    let mut observed = vec![None; nodes.len()];
    for a in activations {
        let i = nodes
            .iter()
            .position(|n| n.id == a.node_id)
            .ok_or_else(|| HarnessError::UnknownNode(a.node_id.clone()))?;
        observed[i] = Some(a.usage);
    }

    let prior_indef = kb.indefiniteness().prior_indef;
    let prior_noun = kb.noun_verb_prior();
    let leak = kb.leak();

    let mut joint = Vec::with_capacity(kb.goals().len());
    for goal in kb.goals() {
        let states: Vec<Vec<(f64, f64)>> = nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                let link = kb
                    .links()
                    .iter()
                    .find(|l| l.goal == goal.id && l.node == node.id);
                let (p_indef, p_noun) = match observed[i] {
                    Some(u) => (u.p_indefinite, u.p_noun),
                    None => (prior_indef, prior_noun),
                };
                match link {
                    Some(l) => latent_states(&l.probs, p_indef, p_noun),
                    None => vec![(1.0, leak)],
                }
            })
            .collect();

        let configs = states
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.len()));
        match configs {
            Some(c) if c <= ORACLE_MAX_LATENT_CONFIGS => {}
            _ => {
                return Err(HarnessError::OracleRefused(format!(
                    "goal '{}' has more than {ORACLE_MAX_LATENT_CONFIGS} latent configurations",
                    goal.id
                )))
            }
        }

        // mixed-radix counter over latent states
        let mut digits = vec![0usize; states.len()];
        let mut total = CompensatedSum::default();
        loop {
            let mut p = goal.prior;
            for (i, s) in states.iter().enumerate() {
                let (weight, present) = s[digits[i]];
                p *= weight
                    * if observed[i].is_some() {
                        present
                    } else {
                        1.0 - present
                    };
            }
            total.add(p);

            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < states[k].len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
        joint.push(total.value());
    }

    let mut norm = CompensatedSum::default();
    joint.iter().for_each(|&j| norm.add(j));
    let norm = norm.value();
    Ok(kb
        .goals()
        .iter()
        .zip(joint)
        .map(|(g, j)| (g.id.clone(), j / norm))
        .collect())
}
