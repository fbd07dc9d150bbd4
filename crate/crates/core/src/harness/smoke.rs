//! Smoke-test suites: curated queries with acceptable goals, scored by
//! top-k hit rate against a pass threshold.
//!
//! File format: UTF-8 text, one case per line, `query<TAB>goalId[,goalId…]`.
//! Blank lines and lines starting with `#` are ignored.

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::score_goals;
use crate::kbmodel::KnowledgeBase;
use crate::textpipe::{analyze, AnalysisOptions};

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SmokeCase {
    /// 1-based line in the source file.
    pub line: usize,
    pub query: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmokeSuite {
    pub name: String,
    pub cases: Vec<SmokeCase>,
}

impl SmokeSuite {
    /// Every expected goal id must exist in `kb`.
    pub fn check_against(&self, kb: &KnowledgeBase) -> Result<(), HarnessError> {
        for case in &self.cases {
            if let Some(id) = case.expected.iter().find(|id| kb.goal(id).is_none()) {
                return Err(HarnessError::Suite {
                    line: case.line,
                    message: format!("unknown goal '{id}'"),
                });
            }
        }
        Ok(())
    }
}

pub fn parse_smoke_suite(text: &str, name: &str) -> Result<SmokeSuite, HarnessError> {
    let mut cases = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: &str| HarnessError::Suite {
            line,
            message: message.to_string(),
        };
        let (query, ids) = raw
            .split_once('\t')
            .ok_or_else(|| err("expected query<TAB>goalId[,goalId...]"))?;
        let query = query.trim();
        if query.is_empty() {
            return Err(err("empty query"));
        }
        let expected: Vec<String> = ids.split(',').map(|s| s.trim().to_string()).collect();
        if expected.iter().any(String::is_empty) {
            return Err(err("empty goal id"));
        }
        cases.push(SmokeCase {
            line,
            query: query.to_string(),
            expected,
        });
    }
    Ok(SmokeSuite {
        name: name.to_string(),
        cases,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseResult {
    pub line: usize,
    pub query: String,
    pub expected: Vec<String>,
    pub hit_at_k: bool,
    /// Best 1-based rank reached by any expected goal.
    pub rank_of_best_expected: usize,
    pub top: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SmokeReport {
    pub suite: String,
    pub k: usize,
    pub threshold: f64,
    pub hits: usize,
    pub cases: usize,
    /// Exactly `hits / cases`.
    pub top_k_rate: f64,
    pub passed: bool,
    pub per_case: Vec<CaseResult>,
}

impl SmokeReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.per_case.iter().filter(|c| !c.hit_at_k)
    }
}

/// Runs `suite` with both extensions enabled.
pub fn run_smoke(
    kb: &KnowledgeBase,
    suite: &SmokeSuite,
    k: usize,
    threshold: f64,
) -> Result<SmokeReport, HarnessError> {
    run_smoke_with(kb, suite, k, threshold, AnalysisOptions::default())
}

pub fn run_smoke_with(
    kb: &KnowledgeBase,
    suite: &SmokeSuite,
    k: usize,
    threshold: f64,
    options: AnalysisOptions,
) -> Result<SmokeReport, HarnessError> {
    if suite.cases.is_empty() {
        return Err(HarnessError::EmptySuite);
    }
    if k == 0 {
        return Err(crate::engine::EngineError::InvalidTopK.into());
    }
    suite.check_against(kb)?;

    let per_case = suite
        .cases
        .par_iter()
        .map(|case| {
            let analysis = analyze(&case.query, kb, options);
            let postings = score_goals(kb, &analysis, false)?;
            let best = postings
                .iter()
                .find(|p| case.expected.contains(&p.goal_id))
                .map(|p| p.rank)
                .expect("expected goals were checked against the knowledge base");
            Ok(CaseResult {
                line: case.line,
                query: case.query.clone(),
                expected: case.expected.clone(),
                hit_at_k: best <= k,
                rank_of_best_expected: best,
                top: postings.iter().take(k).map(|p| p.goal_id.clone()).collect(),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let hits = per_case.iter().filter(|c| c.hit_at_k).count();
    let cases = per_case.len();
    let top_k_rate = hits as f64 / cases as f64;
    Ok(SmokeReport {
        suite: suite.name.clone(),
        k,
        threshold,
        hits,
        cases,
        top_k_rate,
        passed: top_k_rate >= threshold,
        per_case,
    })
}
