//! Random small knowledge bases and queries for oracle comparisons.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kbmodel::{
    EvidenceNode, Goal, KbModel, KnowledgeBase, Link, LinkProbs, NodeKind, SurfaceForm,
};

/// Lemmas that are stemmer fixed points and not function words.
pub const WORD_POOL: &[&str] = &[
    "chart", "graph", "print", "row", "column", "cell", "font", "sheet", "page", "border", "color",
    "macro", "filter", "sort", "tabl", "pivot", "zoom", "margin", "header", "footer", "file",
    "save", "open", "past", "link", "comment",
];

/// Words outside every generated lexicon.
pub const UNKNOWN_WORDS: &[&str] = &["qwerty", "zyx", "blorp", "frobnic"];

/// Words that drive the noun/verb templates.
pub const CUE_WORDS: &[&str] = &["to", "can", "do", "i", "you"];

fn prob(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.01..0.95)
}

/// A valid knowledge base with at most `max_goals` goals and `max_nodes`
/// nodes, mixing terms, phrases, metonyms, zero-derivation terms and every
/// link form.
pub fn random_small_kb(rng: &mut impl Rng, max_goals: usize, max_nodes: usize) -> KnowledgeBase {
    let goal_count = rng.random_range(1..=max_goals.max(1));
    let node_count = rng.random_range(1..=max_nodes.max(1));

    let mut model = KbModel::new("random");
    model.leak = rng.random_range(1e-5..7e-4);
    model.indefiniteness.prior_indef = rng.random_range(0.2..0.8);
    model.noun_verb_prior = rng.random_range(0.2..0.8);

    for g in 0..goal_count {
        model.goals.push(Goal {
            id: format!("g{g}"),
            title: format!("Goal {g}"),
            prior: rng.random_range(0.1..1.0),
        });
    }

    let mut words: Vec<&str> = WORD_POOL.to_vec();
    let mut fresh = |rng: &mut dyn rand::RngCore| -> String {
        let i = rng.random_range(0..words.len());
        words.swap_remove(i).to_string()
    };
    let mut phrases = std::collections::HashSet::new();
    for n in 0..node_count {
        let roll = rng.random_range(0..10);
        let (kind, surfaces, zero_derivation) = match roll {
            0..=5 => (
                NodeKind::Term,
                vec![SurfaceForm {
                    tokens: vec![fresh(rng)],
                    exact_case: false,
                }],
                roll < 3,
            ),
            6 | 7 => {
                let tokens = loop {
                    let a = WORD_POOL.choose(rng).unwrap().to_string();
                    let b = WORD_POOL.choose(rng).unwrap().to_string();
                    if phrases.insert((a.clone(), b.clone())) {
                        break vec![a, b];
                    }
                };
                (
                    NodeKind::Phrase,
                    vec![SurfaceForm {
                        tokens,
                        exact_case: false,
                    }],
                    false,
                )
            }
            _ => {
                let k = rng.random_range(2..=3);
                let surfaces = (0..k)
                    .map(|_| SurfaceForm {
                        tokens: vec![fresh(rng)],
                        exact_case: false,
                    })
                    .collect();
                (NodeKind::Metonym, surfaces, false)
            }
        };
        model.nodes.push(EvidenceNode {
            id: format!("n{n}"),
            kind,
            surfaces,
            case_sensitive: false,
            zero_derivation,
        });
    }

    for g in &model.goals {
        for n in &model.nodes {
            if !rng.random_bool(0.6) {
                continue;
            }
            let probs = match (n.zero_derivation, rng.random_range(0..3)) {
                (_, 0) => LinkProbs::plain(prob(rng)),
                (false, _) => LinkProbs::definiteness(prob(rng), prob(rng)),
                (true, 1) => LinkProbs::noun_verb(prob(rng), prob(rng)),
                (true, _) => LinkProbs::full(prob(rng), prob(rng), prob(rng)),
            };
            model.links.push(Link {
                goal: g.id.clone(),
                node: n.id.clone(),
                probs,
            });
        }
    }

    KnowledgeBase::new(model).expect("random small knowledge bases are valid by construction")
}

/// A query of up to `max_words` words drawn from the knowledge base's
/// surfaces, its function words, noun/verb cue words and unknown words.
pub fn random_query(kb: &KnowledgeBase, rng: &mut impl Rng, max_words: usize) -> String {
    QueryVocabulary::new(kb).query(rng, max_words)
}

/// `n` random queries, deterministic in `seed`.
pub fn random_queries(kb: &KnowledgeBase, n: usize, max_words: usize, seed: u64) -> Vec<String> {
    let vocab = QueryVocabulary::new(kb);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| vocab.query(&mut rng, max_words)).collect()
}

struct QueryVocabulary {
    surfaces: Vec<String>,
    function_words: Vec<String>,
}

impl QueryVocabulary {
    fn new(kb: &KnowledgeBase) -> Self {
        Self {
            surfaces: kb
                .nodes()
                .iter()
                .flat_map(|n| n.surfaces.iter().map(SurfaceForm::text))
                .collect(),
            function_words: kb.indefiniteness().function_words.keys().cloned().collect(),
        }
    }

    fn query(&self, rng: &mut impl Rng, max_words: usize) -> String {
        let len = rng.random_range(0..=max_words);
        let mut words = Vec::with_capacity(len);
        for _ in 0..len {
            let w = match rng.random_range(0..10) {
                0..=4 => self.surfaces.choose(rng).cloned().unwrap_or_default(),
                5..=7 => self.function_words.choose(rng).cloned().unwrap_or_default(),
                8 => CUE_WORDS.choose(rng).unwrap().to_string(),
                _ => UNKNOWN_WORDS.choose(rng).unwrap().to_string(),
            };
            words.push(w);
        }
        words.join(" ")
    }
}
