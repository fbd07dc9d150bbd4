//! Request and response types shared by the CLI and the HTTP service, so
//! both produce the same answer for the same input.

use std::time::Instant;

use goalspot_core::engine::rank_with_analysis;
use goalspot_core::kbmodel::{KbMeta, LinkProbs, NodeKind};
use goalspot_core::{EngineError, ExplanationFactor, KnowledgeBase, RankOptions};
use serde::{Deserialize, Serialize};

pub const MAX_QUERY_CHARS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Toggles {
    #[serde(default = "yes")]
    pub definiteness: bool,
    #[serde(default = "yes")]
    pub noun_verb: bool,
}

fn yes() -> bool {
    true
}

fn default_top_k() -> usize {
    5
}

impl Default for Toggles {
    fn default() -> Self {
        Self {
            definiteness: true,
            noun_verb: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QueryRequest {
    pub text: String,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default)]
    pub explain: bool,
    #[serde(default)]
    pub toggles: Toggles,
}

impl QueryRequest {
    pub fn new(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            top_k: default_top_k(),
            explain: false,
            toggles: Toggles::default(),
        }
    }

    fn options(&self) -> RankOptions {
        RankOptions {
            top_k: self.top_k,
            enable_definiteness: self.toggles.definiteness,
            enable_noun_verb: self.toggles.noun_verb,
            explain: self.explain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RequestError {
    TooLong(usize),
    Engine(EngineError),
}

impl std::fmt::Display for RequestError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::TooLong(n) => {
                write!(f, "text has {n} characters; the limit is {MAX_QUERY_CHARS}")
            }
            Self::Engine(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for RequestError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRow {
    pub rank: usize,
    pub goal_id: String,
    pub title: String,
    pub posterior: f64,
    pub log_score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<ExplanationFactor>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ActivationEcho {
    pub node_id: String,
    pub matched_surface: String,
    pub token_span: (usize, usize),
    pub function_words: Vec<String>,
    pub p_indefinite: f64,
    pub p_noun: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryResponse {
    pub results: Vec<ResultRow>,
    pub analysis: Vec<ActivationEcho>,
    pub kb: KbMeta,
    pub elapsed_micros: u64,
}

pub fn answer(kb: &KnowledgeBase, request: &QueryRequest) -> Result<QueryResponse, RequestError> {
    let chars = request.text.chars().count();
    if chars > MAX_QUERY_CHARS {
        return Err(RequestError::TooLong(chars));
    }
    let started = Instant::now();
    let (analysis, postings) =
        rank_with_analysis(kb, &request.text, &request.options()).map_err(RequestError::Engine)?;
    let elapsed_micros = started.elapsed().as_micros() as u64;
    let results = postings
        .into_iter()
        .map(|p| ResultRow {
            rank: p.rank,
            title: kb
                .goal(&p.goal_id)
                .map(|g| g.title.clone())
                .unwrap_or_default(),
            goal_id: p.goal_id,
            posterior: p.posterior,
            log_score: p.log_score,
            factors: p.factors,
        })
        .collect();
    let analysis = analysis
        .activations
        .into_iter()
        .map(|a| ActivationEcho {
            node_id: a.node_id,
            matched_surface: a.matched_surface,
            token_span: a.token_span,
            function_words: a.clause_context.function_words,
            p_indefinite: a.usage.p_indefinite,
            p_noun: a.usage.p_noun,
        })
        .collect();
    Ok(QueryResponse {
        results,
        analysis,
        kb: kb.meta().clone(),
        elapsed_micros,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LinkCard {
    pub node_id: String,
    pub kind: NodeKind,
    pub surfaces: Vec<String>,
    pub probs: LinkProbs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GoalCard {
    pub id: String,
    pub title: String,
    pub prior: f64,
    pub links: Vec<LinkCard>,
}

pub fn goal_card(kb: &KnowledgeBase, id: &str) -> Option<GoalCard> {
    let pos = kb.goal_position(id)?;
    let goal = &kb.goals()[pos];
    let links = kb
        .links_of_goal(pos)
        .iter()
        .map(|&li| {
            let link = &kb.links()[li];
            let node = kb.node(&link.node).expect("links resolve");
            LinkCard {
                node_id: node.id.clone(),
                kind: node.kind,
                surfaces: node.surfaces.iter().map(|s| s.text()).collect(),
                probs: link.probs,
            }
        })
        .collect();
    Some(GoalCard {
        id: goal.id.clone(),
        title: goal.title.clone(),
        prior: goal.prior,
        links,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScaleStats {
    pub p_min: f64,
    pub p_max: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KbStats {
    pub meta: KbMeta,
    pub goals: usize,
    pub nodes: usize,
    pub links: usize,
    pub leak: f64,
    pub scale: ScaleStats,
}

pub fn kb_stats(kb: &KnowledgeBase) -> KbStats {
    let scale = kb.scale();
    KbStats {
        meta: kb.meta().clone(),
        goals: kb.goals().len(),
        nodes: kb.nodes().len(),
        links: kb.links().len(),
        leak: kb.leak(),
        scale: ScaleStats {
            p_min: scale.p_min,
            p_max: scale.p_max,
            ratio: scale.ratio(),
        },
    }
}
