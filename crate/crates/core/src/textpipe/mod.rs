//! Query text → activated evidence.
//!
//! `tokenize` splits and stems, `spot_evidence` matches lexicon surfaces
//! left to right (longest first), then fills in each activation's clause
//! context and usage: the probability of an indefinite reading and, for
//! zero-derivation terms, of a noun reading.

mod definiteness;
mod nounverb;
pub mod stem;
mod tokenize;

use serde::{Deserialize, Serialize};

use crate::kbmodel::{KnowledgeBase, SurfaceForm};

pub use definiteness::{indefiniteness, TextError};
pub use nounverb::{classify_noun_verb, PartOfSpeech};
pub use stem::stem;
pub use tokenize::{tokenize, Token};

/// The contiguous run of function words right before an activation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClauseContext {
    pub function_words: Vec<String>,
    pub window_start: usize,
    pub window_end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UsageResolution {
    pub p_indefinite: f64,
    /// Always 1.0 for nodes without zero derivation.
    pub p_noun: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Activation {
    pub node_id: String,
    pub matched_surface: String,
    /// Half-open token range of the first occurrence.
    pub token_span: (usize, usize),
    pub clause_context: ClauseContext,
    pub usage: UsageResolution,
}

/// Toggles for the definiteness and noun/verb extensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisOptions {
    pub definiteness: bool,
    pub noun_verb: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            definiteness: true,
            noun_verb: true,
        }
    }
}

impl AnalysisOptions {
    pub fn disabled() -> Self {
        Self {
            definiteness: false,
            noun_verb: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryAnalysis {
    pub tokens: Vec<Token>,
    /// One entry per present node, in order of first occurrence.
    pub activations: Vec<Activation>,
    pub options: AnalysisOptions,
}

impl QueryAnalysis {
    pub fn is_active(&self, node_id: &str) -> bool {
        self.activations.iter().any(|a| a.node_id == node_id)
    }
}

/// A lexicon surface and the node it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedSurface {
    pub node_id: String,
    pub surface: SurfaceForm,
}

struct Match {
    len: usize,
    exact_case: bool,
    node: usize,
}

/// Chooses among surfaces starting at `i`: longest first, and on equal length
/// the exact-case reading unless the token opens a sentence.
fn best_match(tokens: &[Token], i: usize, kb: &KnowledgeBase, max_len: usize) -> Option<Match> {
    let rest = &tokens[i..];
    let exact = kb.exact_surfaces(&rest[0].raw).iter().find(|s| {
        s.tokens.len() <= max_len.min(rest.len())
            && s.tokens.iter().zip(rest).all(|(s, t)| *s == t.raw)
    });
    let lemma = kb.lemma_surfaces(&rest[0].lemma).iter().find(|s| {
        s.tokens.len() <= max_len.min(rest.len())
            && s.tokens.iter().zip(rest).all(|(s, t)| *s == t.lemma)
    });
    let pick = match (exact, lemma) {
        (Some(e), Some(l)) => {
            if e.tokens.len() > l.tokens.len()
                || (e.tokens.len() == l.tokens.len() && !rest[0].sentence_initial)
            {
                e
            } else {
                l
            }
        }
        (Some(e), None) => e,
        (None, Some(l)) => l,
        (None, None) => return None,
    };
    Some(Match {
        len: pick.tokens.len(),
        exact_case: pick.exact_case,
        node: pick.node,
    })
}

/// Resolves a single token against single-token surfaces, honouring
/// capitalization: a mid-sentence exact-case match wins; at sentence start
/// the lower-case reading wins when both exist.
pub fn resolve_case(token: &Token, kb: &KnowledgeBase) -> Option<ResolvedSurface> {
    let m = best_match(std::slice::from_ref(token), 0, kb, 1)?;
    let node = &kb.nodes()[m.node];
    let text = if m.exact_case {
        &token.raw
    } else {
        &token.lemma
    };
    Some(ResolvedSurface {
        node_id: node.id.clone(),
        surface: SurfaceForm {
            tokens: vec![text.clone()],
            exact_case: m.exact_case,
        },
    })
}

fn clause_context(tokens: &[Token], consumed: &[bool], start: usize) -> ClauseContext {
    let mut begin = start;
    if !tokens[start].sentence_initial {
        while begin > 0 {
            let t = &tokens[begin - 1];
            if !t.is_function_word || consumed[begin - 1] {
                break;
            }
            begin -= 1;
            if t.sentence_initial {
                break;
            }
        }
    }
    ClauseContext {
        function_words: tokens[begin..start]
            .iter()
            .map(|t| t.lower.clone())
            .collect(),
        window_start: begin,
        window_end: start,
    }
}

/// Finds the evidence nodes present in `tokens`.
///
/// Matched tokens are consumed; a node mentioned more than once yields one
/// activation, taken from its first occurrence.
pub fn spot_evidence(
    mut tokens: Vec<Token>,
    kb: &KnowledgeBase,
    options: AnalysisOptions,
) -> QueryAnalysis {
    let fw_model = kb.indefiniteness();
    for t in &mut tokens {
        t.is_function_word = fw_model.get(&t.lower).is_some();
    }

    let mut consumed = vec![false; tokens.len()];
    let mut found: Vec<(usize, usize, usize)> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        match best_match(&tokens, i, kb, usize::MAX) {
            Some(m) => {
                consumed[i..i + m.len].iter_mut().for_each(|c| *c = true);
                if !found.iter().any(|&(node, _, _)| node == m.node) {
                    found.push((m.node, i, i + m.len));
                }
                i += m.len;
            }
            None => i += 1,
        }
    }

    let activations = found
        .into_iter()
        .map(|(node, start, end)| {
            let n = &kb.nodes()[node];
            let clause_context = clause_context(&tokens, &consumed, start);
            let p_indefinite = if options.definiteness {
                indefiniteness(&clause_context, fw_model)
                    .expect("clause contexts hold lexicon function words only")
            } else {
                fw_model.prior_indef
            };
            let p_noun = match (n.zero_derivation, options.noun_verb) {
                (false, _) => 1.0,
                (true, true) => classify_noun_verb(start, end, &tokens, kb).p_noun(),
                (true, false) => kb.noun_verb_prior(),
            };
            Activation {
                node_id: n.id.clone(),
                matched_surface: tokens[start..end]
                    .iter()
                    .map(|t| t.raw.as_str())
                    .collect::<Vec<_>>()
                    .join(" "),
                token_span: (start, end),
                clause_context,
                usage: UsageResolution {
                    p_indefinite,
                    p_noun,
                },
            }
        })
        .collect();

    QueryAnalysis {
        tokens,
        activations,
        options,
    }
}

/// Tokenizes and spots `text` in one step.
pub fn analyze(text: &str, kb: &KnowledgeBase, options: AnalysisOptions) -> QueryAnalysis {
    spot_evidence(tokenize(text), kb, options)
}
