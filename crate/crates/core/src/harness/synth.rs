//! Synthetic knowledge bases at realistic scale.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kbmodel::{
    Assessed, EvidenceNode, Goal, KbModel, KnowledgeBase, Link, LinkProbs, NodeKind, SurfaceForm,
    MAX_BUCKET,
};
use crate::textpipe::stem;

use super::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub num_goals: usize,
    pub num_terms: usize,
    pub num_links: usize,
    pub seed: u64,
    /// Relative weight of buckets 1..=13.
    pub bucket_weights: [f64; 13],
    pub metonym_fraction: f64,
    pub phrase_fraction: f64,
    /// Fraction of term nodes flagged as zero-derivation.
    pub zero_derivation_fraction: f64,
    /// Fraction of links given a split form.
    pub split_fraction: f64,
}

impl SynthParams {
    pub fn new(num_goals: usize, num_terms: usize, num_links: usize, seed: u64) -> Self {
        Self {
            num_goals,
            num_terms,
            num_links,
            seed,
            bucket_weights: [
                1.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 6.0, 5.0, 4.0, 3.0, 2.0, 1.0,
            ],
            metonym_fraction: 0.1,
            phrase_fraction: 0.1,
            zero_derivation_fraction: 0.05,
            split_fraction: 0.1,
        }
    }

    /// 1,000 goals, 5,000 terms and 145,000 links.
    pub fn word_processor_scale(seed: u64) -> Self {
        Self::new(1000, 5000, 145_000, seed)
    }

    fn check(&self) -> Result<(), HarnessError> {
        let fail = |m: String| Err(HarnessError::InfeasibleParams(m));
        if self.num_goals == 0 || self.num_terms == 0 {
            return fail("need at least one goal and one term".into());
        }
        match self.num_goals.checked_mul(self.num_terms) {
            Some(cap) if self.num_links <= cap => {}
            _ => {
                return fail(format!(
                    "{} links cannot fit in {} goals x {} terms",
                    self.num_links, self.num_goals, self.num_terms
                ))
            }
        }
        let fractions = [
            self.metonym_fraction,
            self.phrase_fraction,
            self.zero_derivation_fraction,
            self.split_fraction,
        ];
        if fractions.iter().any(|f| !(0.0..=1.0).contains(f))
            || self.metonym_fraction + self.phrase_fraction > 1.0
        {
            return fail(
                "fractions must lie in [0,1] and metonym + phrase must not exceed 1".into(),
            );
        }
        if self
            .bucket_weights
            .iter()
            .any(|w| !(w.is_finite() && *w >= 0.0))
            || self.bucket_weights.iter().sum::<f64>() <= 0.0
        {
            return fail("bucket weights must be non-negative with a positive sum".into());
        }
        Ok(())
    }
}

const ONSETS: &[&str] = &[
    "b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "tr", "st", "pl",
];
const VOWELS: &[&str] = &["a", "e", "i", "o", "u"];
const CODAS: &[&str] = &["", "", "n", "r", "t", "k", "m"];

/// Unique pseudo-word lemmas.
struct Lexicon {
    used: HashSet<String>,
}

impl Lexicon {
    fn fresh(&mut self, rng: &mut ChaCha8Rng) -> String {
        loop {
            let syllables = rng.random_range(2..=4);
            let mut w = String::new();
            for _ in 0..syllables {
                w.push_str(ONSETS[rng.random_range(0..ONSETS.len())]);
                w.push_str(VOWELS[rng.random_range(0..VOWELS.len())]);
                w.push_str(CODAS[rng.random_range(0..CODAS.len())]);
            }
            let lemma = stem(&w);
            if lemma.len() >= 3 && self.used.insert(lemma.clone()) {
                return lemma;
            }
        }
    }
}

/// Builds a random, valid knowledge base. Deterministic in `params.seed`.
pub fn synth_kb(params: &SynthParams) -> Result<KnowledgeBase, HarnessError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut model = KbModel::new("synthetic");
    model.meta.version = format!("seed-{}", params.seed);

    let mut lexicon = Lexicon {
        used: model
            .indefiniteness
            .function_words
            .keys()
            .cloned()
            .collect(),
    };

    let goal_width = digits(params.num_goals);
    for g in 0..params.num_goals {
        model.goals.push(Goal {
            id: format!("g{g:0goal_width$}"),
            title: format!("Synthetic goal {g}"),
            prior: rng.random_range(0.5..2.0),
        });
    }

    let node_width = digits(params.num_terms);
    for n in 0..params.num_terms {
        let roll: f64 = rng.random();
        let (kind, surfaces) = if roll < params.metonym_fraction {
            let k = rng.random_range(2..=4);
            let surfaces = (0..k)
                .map(|_| SurfaceForm {
                    tokens: vec![lexicon.fresh(&mut rng)],
                    exact_case: false,
                })
                .collect();
            (NodeKind::Metonym, surfaces)
        } else if roll < params.metonym_fraction + params.phrase_fraction {
            let tokens = vec![lexicon.fresh(&mut rng), lexicon.fresh(&mut rng)];
            (
                NodeKind::Phrase,
                vec![SurfaceForm {
                    tokens,
                    exact_case: false,
                }],
            )
        } else {
            (
                NodeKind::Term,
                vec![SurfaceForm {
                    tokens: vec![lexicon.fresh(&mut rng)],
                    exact_case: false,
                }],
            )
        };
        let zero_derivation =
            kind == NodeKind::Term && rng.random_bool(params.zero_derivation_fraction);
        model.nodes.push(EvidenceNode {
            id: format!("n{n:0node_width$}"),
            kind,
            surfaces,
            case_sensitive: false,
            zero_derivation,
        });
    }

    let pairs = choose_pairs(
        &mut rng,
        params.num_goals,
        params.num_terms,
        params.num_links,
    );
    let buckets = WeightedIndex::new(params.bucket_weights).expect("weights checked");
    let scale = model.scale;
    let assess = |rng: &mut ChaCha8Rng| {
        let bucket = buckets.sample(rng) as i64 + 1;
        debug_assert!(bucket <= i64::from(MAX_BUCKET));
        Assessed {
            p: scale.probability(bucket).expect("bucket in range"),
            bucket: Some(bucket),
        }
    };
    for (g, n) in pairs {
        let zero_derivation = model.nodes[n].zero_derivation;
        let probs = if rng.random_bool(params.split_fraction) {
            match (zero_derivation, rng.random_bool(0.5)) {
                (false, _) => LinkProbs::DefinitenessSplit {
                    p_indef: assess(&mut rng),
                    p_def: assess(&mut rng),
                },
                (true, true) => LinkProbs::NounVerbSplit {
                    p_noun: assess(&mut rng),
                    p_verb: assess(&mut rng),
                },
                (true, false) => LinkProbs::FullSplit {
                    p_noun_indef: assess(&mut rng),
                    p_noun_def: assess(&mut rng),
                    p_verb: assess(&mut rng),
                },
            }
        } else {
            LinkProbs::Plain {
                p: assess(&mut rng),
            }
        };
        model.links.push(Link {
            goal: model.goals[g].id.clone(),
            node: model.nodes[n].id.clone(),
            probs,
        });
    }

    Ok(KnowledgeBase::new(model)?)
}

fn digits(n: usize) -> usize {
    n.saturating_sub(1).max(1).to_string().len()
}

/// `count` distinct (goal, node) pairs, sorted.
fn choose_pairs(
    rng: &mut ChaCha8Rng,
    goals: usize,
    nodes: usize,
    count: usize,
) -> Vec<(usize, usize)> {
    let total = goals * nodes;
    let mut pairs: Vec<(usize, usize)> = if count * 2 > total {
        let mut all: Vec<usize> = (0..total).collect();
        all.partial_shuffle(rng, count);
        all.truncate(count);
        all.into_iter().map(|i| (i / nodes, i % nodes)).collect()
    } else {
        let mut seen = HashSet::with_capacity(count);
        while seen.len() < count {
            seen.insert((rng.random_range(0..goals), rng.random_range(0..nodes)));
        }
        seen.into_iter().collect()
    };
    pairs.sort_unstable();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kbmodel::validate_kb;

    #[test]
    fn small_kb_has_requested_counts_and_validates() {
        let kb = synth_kb(&SynthParams::new(20, 50, 300, 3)).unwrap();
        assert_eq!(kb.goals().len(), 20);
        assert_eq!(kb.nodes().len(), 50);
        assert_eq!(kb.links().len(), 300);
        assert!(validate_kb(kb.model()).is_empty());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let p = SynthParams::new(10, 40, 120, 11);
        assert_eq!(
            synth_kb(&p).unwrap().to_json(),
            synth_kb(&p).unwrap().to_json()
        );
        let other = SynthParams { seed: 12, ..p };
        assert_ne!(
            synth_kb(&other).unwrap().to_json(),
            synth_kb(&SynthParams::new(10, 40, 120, 11))
                .unwrap()
                .to_json()
        );
    }

    #[test]
    fn dense_link_request_uses_every_pair() {
        let kb = synth_kb(&SynthParams::new(3, 4, 12, 1)).unwrap();
        assert_eq!(kb.links().len(), 12);
    }

    #[test]
    fn too_many_links_is_a_domain_error() {
        let err = synth_kb(&SynthParams::new(3, 4, 13, 1)).unwrap_err();
        assert!(matches!(err, HarnessError::InfeasibleParams(_)));
        assert!(matches!(
            synth_kb(&SynthParams::new(0, 4, 0, 1)),
            Err(HarnessError::InfeasibleParams(_))
        ));
        let bad = SynthParams {
            metonym_fraction: 0.8,
            phrase_fraction: 0.5,
            ..SynthParams::new(3, 4, 4, 1)
        };
        assert!(matches!(
            synth_kb(&bad),
            Err(HarnessError::InfeasibleParams(_))
        ));
    }

    #[test]
    fn bucket_annotations_survive_round_trip() {
        let kb = synth_kb(&SynthParams::new(5, 30, 60, 9)).unwrap();
        let again = crate::kbmodel::load_kb(&kb.to_json()).unwrap();
        assert_eq!(kb.model(), again.model());
    }
}
