//! Knowledge-base data model.
//!
//! A [`KbModel`] is the plain, unchecked content of a knowledge base as read
//! from disk. [`KnowledgeBase`] wraps a model that passed [`validate_kb`]
//! together with the lookup indexes the text pipeline and engine need. It is
//! immutable after construction and can be shared freely across threads.

mod document;
mod scale;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use document::{load_kb, serialize_kb, KbDocument};
pub use scale::{
    bucket_to_probability, BucketScale, ScaleError, DEFAULT_P_MAX, DEFAULT_RATIO, MAX_BUCKET,
    MIN_BUCKET,
};
pub use validate::{validate_kb, Rule, Violation};

pub const DEFAULT_LEAK: f64 = 1e-4;
pub const DEFAULT_PRIOR_INDEF: f64 = 0.5;
pub const DEFAULT_NOUN_VERB_PRIOR: f64 = 0.5;

#[derive(Debug, Error)]
pub enum KbError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("knowledge base has {} validation violation(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbMeta {
    pub name: String,
    pub version: String,
    pub language: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Goal {
    pub id: String,
    pub title: String,
    pub prior: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Term,
    Phrase,
    Metonym,
}

/// One way an evidence node can be written in a query.
///
/// Tokens are lemmas unless `exact_case` is set, in which case they are
/// matched against the raw query text.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceForm {
    pub tokens: Vec<String>,
    pub exact_case: bool,
}

impl SurfaceForm {
    pub fn lemma(tokens: &[&str]) -> Self {
        Self {
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            exact_case: false,
        }
    }

    pub fn exact(tokens: &[&str]) -> Self {
        Self {
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            exact_case: true,
        }
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceNode {
    pub id: String,
    pub kind: NodeKind,
    pub surfaces: Vec<SurfaceForm>,
    pub case_sensitive: bool,
    pub zero_derivation: bool,
}

/// A link probability together with the bucket it was assessed on, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assessed {
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bucket: Option<i64>,
}

impl Assessed {
    pub fn value(p: f64) -> Self {
        Self { p, bucket: None }
    }
}

/// The probability form of a goal→node link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "form",
    rename_all = "camelCase",
    rename_all_fields = "camelCase"
)]
pub enum LinkProbs {
    Plain {
        p: Assessed,
    },
    DefinitenessSplit {
        p_indef: Assessed,
        p_def: Assessed,
    },
    NounVerbSplit {
        p_noun: Assessed,
        p_verb: Assessed,
    },
    FullSplit {
        p_noun_indef: Assessed,
        p_noun_def: Assessed,
        p_verb: Assessed,
    },
}

impl LinkProbs {
    pub fn plain(p: f64) -> Self {
        Self::Plain {
            p: Assessed::value(p),
        }
    }

    pub fn definiteness(p_indef: f64, p_def: f64) -> Self {
        Self::DefinitenessSplit {
            p_indef: Assessed::value(p_indef),
            p_def: Assessed::value(p_def),
        }
    }

    pub fn noun_verb(p_noun: f64, p_verb: f64) -> Self {
        Self::NounVerbSplit {
            p_noun: Assessed::value(p_noun),
            p_verb: Assessed::value(p_verb),
        }
    }

    pub fn full(p_noun_indef: f64, p_noun_def: f64, p_verb: f64) -> Self {
        Self::FullSplit {
            p_noun_indef: Assessed::value(p_noun_indef),
            p_noun_def: Assessed::value(p_noun_def),
            p_verb: Assessed::value(p_verb),
        }
    }

    pub fn form_name(&self) -> &'static str {
        match self {
            Self::Plain { .. } => "plain",
            Self::DefinitenessSplit { .. } => "definitenessSplit",
            Self::NounVerbSplit { .. } => "nounVerbSplit",
            Self::FullSplit { .. } => "fullSplit",
        }
    }

    /// Named slots in document order.
    pub fn slots(&self) -> Vec<(&'static str, Assessed)> {
        match *self {
            Self::Plain { p } => vec![("p", p)],
            Self::DefinitenessSplit { p_indef, p_def } => {
                vec![("pIndef", p_indef), ("pDef", p_def)]
            }
            Self::NounVerbSplit { p_noun, p_verb } => vec![("pNoun", p_noun), ("pVerb", p_verb)],
            Self::FullSplit {
                p_noun_indef,
                p_noun_def,
                p_verb,
            } => vec![
                ("pNounIndef", p_noun_indef),
                ("pNounDef", p_noun_def),
                ("pVerb", p_verb),
            ],
        }
    }

    /// Probability that the node appears given the goal, with the definite /
    /// indefinite and noun / verb usages mixed in by the given weights.
    ///
    /// Definiteness only applies to the noun branch of a full split.
    pub fn mixed(&self, p_indefinite: f64, p_noun: f64) -> f64 {
        match *self {
            Self::Plain { p } => p.p,
            Self::DefinitenessSplit { p_indef, p_def } => {
                p_indef.p * p_indefinite + p_def.p * (1.0 - p_indefinite)
            }
            Self::NounVerbSplit {
                p_noun: noun,
                p_verb,
            } => noun.p * p_noun + p_verb.p * (1.0 - p_noun),
            Self::FullSplit {
                p_noun_indef,
                p_noun_def,
                p_verb,
            } => {
                let noun = p_noun_indef.p * p_indefinite + p_noun_def.p * (1.0 - p_indefinite);
                p_noun * noun + (1.0 - p_noun) * p_verb.p
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub goal: String,
    pub node: String,
    pub probs: LinkProbs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionWordClass {
    ArticleIndef,
    ArticleDef,
    Possessive,
    Preposition,
    Demonstrative,
    Other,
}

impl FunctionWordClass {
    /// Articles, demonstratives and possessives: words that introduce a noun.
    pub fn is_determiner(self) -> bool {
        matches!(
            self,
            Self::ArticleIndef | Self::ArticleDef | Self::Possessive | Self::Demonstrative
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionWord {
    pub p_given_indef: f64,
    pub p_given_def: f64,
    pub class: FunctionWordClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndefinitenessModel {
    pub prior_indef: f64,
    /// Keyed by lower-cased surface.
    pub function_words: BTreeMap<String, FunctionWord>,
}

impl Default for IndefinitenessModel {
    /// English defaults.
    fn default() -> Self {
        use FunctionWordClass::*;
        let table: [(&str, f64, f64, FunctionWordClass); 12] = [
            ("a", 0.9, 0.05, ArticleIndef),
            ("an", 0.9, 0.05, ArticleIndef),
            ("the", 0.05, 0.8, ArticleDef),
            ("this", 0.05, 0.8, Demonstrative),
            ("that", 0.05, 0.8, Demonstrative),
            ("my", 0.02, 0.7, Possessive),
            ("your", 0.02, 0.7, Possessive),
            ("our", 0.02, 0.7, Possessive),
            ("its", 0.02, 0.7, Possessive),
            ("under", 0.1, 0.6, Preposition),
            ("on", 0.1, 0.6, Preposition),
            ("in", 0.1, 0.6, Preposition),
        ];
        let function_words = table
            .into_iter()
            .map(|(w, p_given_indef, p_given_def, class)| {
                (
                    w.to_string(),
                    FunctionWord {
                        p_given_indef,
                        p_given_def,
                        class,
                    },
                )
            })
            .collect();
        Self {
            prior_indef: DEFAULT_PRIOR_INDEF,
            function_words,
        }
    }
}

impl IndefinitenessModel {
    pub fn get(&self, lower: &str) -> Option<&FunctionWord> {
        self.function_words.get(lower)
    }
}

/// Unchecked knowledge-base content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KbModel {
    pub meta: KbMeta,
    pub scale: BucketScale,
    pub leak: f64,
    pub indefiniteness: IndefinitenessModel,
    pub noun_verb_prior: f64,
    pub goals: Vec<Goal>,
    pub nodes: Vec<EvidenceNode>,
    pub links: Vec<Link>,
}

impl KbModel {
    /// An empty model with default scale, leak and function words.
    pub fn new(name: &str) -> Self {
        Self {
            meta: KbMeta {
                name: name.to_string(),
                version: "1".to_string(),
                language: "en".to_string(),
            },
            scale: BucketScale::default(),
            leak: DEFAULT_LEAK,
            indefiniteness: IndefinitenessModel::default(),
            noun_verb_prior: DEFAULT_NOUN_VERB_PRIOR,
            goals: Vec::new(),
            nodes: Vec::new(),
            links: Vec::new(),
        }
    }
}

/// Scales priors to sum to one. Priors already normalized to within a few
/// ulps are left untouched so that a serialized knowledge base reloads
/// bit-for-bit.
fn normalize_priors(goals: &mut [Goal]) {
    let total: f64 = goals.iter().map(|g| g.prior).sum();
    if (total - 1.0).abs() > 1e-12 {
        for g in goals.iter_mut() {
            g.prior /= total;
        }
    }
}

/// A surface form in the spotting index.
#[derive(Debug, Clone)]
pub(crate) struct IndexedSurface {
    pub tokens: Vec<String>,
    pub exact_case: bool,
    pub node: usize,
}

/// A validated, indexed, read-only knowledge base.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    model: KbModel,
    goal_index: HashMap<String, usize>,
    node_index: HashMap<String, usize>,
    /// Per goal, its link indices ordered by node id.
    goal_links: Vec<Vec<usize>>,
    /// Node position of each link.
    link_nodes: Vec<usize>,
    /// ln(1 - p) for each link under the prior usage mixture.
    absent_log_factors: Vec<f64>,
    /// Lemma surfaces keyed by first token, longest first.
    by_lemma: HashMap<String, Vec<IndexedSurface>>,
    /// Exact-case surfaces keyed by first raw token, longest first.
    by_exact: HashMap<String, Vec<IndexedSurface>>,
}

impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
    }
}

impl KnowledgeBase {
    /// Validates `model` and builds the lookup indexes.
    pub fn new(mut model: KbModel) -> Result<Self, KbError> {
        let violations = validate_kb(&model);
        if !violations.is_empty() {
            return Err(KbError::Invalid(violations));
        }
        normalize_priors(&mut model.goals);

        let goal_index: HashMap<String, usize> = model
            .goals
            .iter()
            .enumerate()
            .map(|(i, g)| (g.id.clone(), i))
            .collect();
        let node_index: HashMap<String, usize> = model
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();

        let mut goal_links = vec![Vec::new(); model.goals.len()];
        for (i, link) in model.links.iter().enumerate() {
            goal_links[goal_index[&link.goal]].push(i);
        }
        for links in &mut goal_links {
            links.sort_by(|&a, &b| model.links[a].node.cmp(&model.links[b].node));
        }

        let link_nodes = model.links.iter().map(|l| node_index[&l.node]).collect();
        let prior_indef = model.indefiniteness.prior_indef;
        let absent_log_factors = model
            .links
            .iter()
            .map(|l| (-l.probs.mixed(prior_indef, model.noun_verb_prior)).ln_1p())
            .collect();

        let mut by_lemma: HashMap<String, Vec<IndexedSurface>> = HashMap::new();
        let mut by_exact: HashMap<String, Vec<IndexedSurface>> = HashMap::new();
        for (node, n) in model.nodes.iter().enumerate() {
            for s in &n.surfaces {
                let map = if s.exact_case {
                    &mut by_exact
                } else {
                    &mut by_lemma
                };
                map.entry(s.tokens[0].clone())
                    .or_default()
                    .push(IndexedSurface {
                        tokens: s.tokens.clone(),
                        exact_case: s.exact_case,
                        node,
                    });
            }
        }
        for list in by_lemma.values_mut().chain(by_exact.values_mut()) {
            list.sort_by(|a, b| {
                b.tokens
                    .len()
                    .cmp(&a.tokens.len())
                    .then_with(|| a.tokens.cmp(&b.tokens))
            });
        }

        Ok(Self {
            model,
            goal_index,
            node_index,
            goal_links,
            link_nodes,
            absent_log_factors,
            by_lemma,
            by_exact,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, KbError> {
        load_kb(text)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, KbError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| KbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        load_kb(&text)
    }

    pub fn to_json(&self) -> String {
        serialize_kb(self)
    }

    pub fn model(&self) -> &KbModel {
        &self.model
    }

    pub fn into_model(self) -> KbModel {
        self.model
    }

    pub fn meta(&self) -> &KbMeta {
        &self.model.meta
    }

    pub fn goals(&self) -> &[Goal] {
        &self.model.goals
    }

    pub fn nodes(&self) -> &[EvidenceNode] {
        &self.model.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.model.links
    }

    pub fn leak(&self) -> f64 {
        self.model.leak
    }

    pub fn scale(&self) -> &BucketScale {
        &self.model.scale
    }

    pub fn indefiniteness(&self) -> &IndefinitenessModel {
        &self.model.indefiniteness
    }

    pub fn noun_verb_prior(&self) -> f64 {
        self.model.noun_verb_prior
    }

    pub fn goal_position(&self, id: &str) -> Option<usize> {
        self.goal_index.get(id).copied()
    }

    pub fn goal(&self, id: &str) -> Option<&Goal> {
        self.goal_position(id).map(|i| &self.model.goals[i])
    }

    pub fn node_position(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Option<&EvidenceNode> {
        self.node_position(id).map(|i| &self.model.nodes[i])
    }

    /// Link indices of the goal at `goal`, ordered by node id.
    pub fn links_of_goal(&self, goal: usize) -> &[usize] {
        &self.goal_links[goal]
    }

    pub(crate) fn link_node(&self, link: usize) -> usize {
        self.link_nodes[link]
    }

    pub(crate) fn absent_log_factor(&self, link: usize) -> f64 {
        self.absent_log_factors[link]
    }

    pub(crate) fn lemma_surfaces(&self, first: &str) -> &[IndexedSurface] {
        self.by_lemma.get(first).map(Vec::as_slice).unwrap_or(&[])
    }

    pub(crate) fn exact_surfaces(&self, first: &str) -> &[IndexedSurface] {
        self.by_exact.get(first).map(Vec::as_slice).unwrap_or(&[])
    }

    /// True when some lemma surface of any node contains `lemma`, or some
    /// exact-case surface contains `raw`.
    pub fn in_lexicon(&self, raw: &str, lemma: &str) -> bool {
        self.model.nodes.iter().flat_map(|n| &n.surfaces).any(|s| {
            if s.exact_case {
                s.tokens.iter().any(|t| t == raw)
            } else {
                s.tokens.iter().any(|t| t == lemma)
            }
        })
    }
}
