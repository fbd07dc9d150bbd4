//! Deterministic noun/verb templates for zero-derivation terms.

use serde::{Deserialize, Serialize};

use crate::kbmodel::KnowledgeBase;

use super::Token;

/// How a zero-derivation occurrence is being used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PartOfSpeech {
    Noun,
    Verb,
    /// No template fired; probability of the noun reading.
    Mixture(f64),
}

impl PartOfSpeech {
    pub fn p_noun(self) -> f64 {
        match self {
            Self::Noun => 1.0,
            Self::Verb => 0.0,
            Self::Mixture(p) => p,
        }
    }
}

/// Words that, right before a zero-derivation term, mark it as a verb.
#[rustfmt::skip]
const VERB_CUES: &[&str] = &[
    // infinitive marker
    "to",
    // modals and do-support
    "can", "could", "do", "does", "did", "will", "would", "should", "shall", "may", "might", "must",
    // subject pronouns
    "i", "you", "we", "they", "he", "she",
];

fn is_determiner(token: &Token, kb: &KnowledgeBase) -> bool {
    kb.indefiniteness()
        .get(&token.lower)
        .is_some_and(|fw| fw.class.is_determiner())
}

fn starts_surface(token: &Token, kb: &KnowledgeBase) -> bool {
    !kb.lemma_surfaces(&token.lemma).is_empty() || !kb.exact_surfaces(&token.raw).is_empty()
}

/// Classifies the zero-derivation occurrence spanning `start..end`.
///
/// Templates, in order:
/// - preceded by an article, demonstrative or possessive: noun;
/// - preceded by `to`, a modal or a subject pronoun: verb;
/// - followed by a determiner and then a lexicon word: verb.
///
/// Otherwise the knowledge base's noun/verb prior applies.
pub fn classify_noun_verb(
    start: usize,
    end: usize,
    tokens: &[Token],
    kb: &KnowledgeBase,
) -> PartOfSpeech {
    if start > 0 && !tokens[start].sentence_initial {
        let prev = &tokens[start - 1];
        if is_determiner(prev, kb) {
            return PartOfSpeech::Noun;
        }
        if VERB_CUES.contains(&prev.lower.as_str()) {
            return PartOfSpeech::Verb;
        }
    }
    if let (Some(det), Some(object)) = (tokens.get(end), tokens.get(end + 1)) {
        if !det.sentence_initial
            && !object.sentence_initial
            && is_determiner(det, kb)
            && starts_surface(object, kb)
        {
            return PartOfSpeech::Verb;
        }
    }
    PartOfSpeech::Mixture(kb.noun_verb_prior())
}
