use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::{bucket_to_probability, KbModel, LinkProbs, NodeKind};
use crate::textpipe::stem::is_lemma;

/// Knowledge-base rule identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    NoGoals,
    EmptyId,
    DuplicateGoal,
    DuplicateNode,
    DuplicateLink,
    InvalidPrior,
    PriorIncomplete,
    ProbabilityOpenInterval,
    InvalidScale,
    LeakExceedsBucketFloor,
    BucketOutOfRange,
    BucketMismatch,
    LinkForm,
    UnresolvedGoal,
    UnresolvedNode,
    SplitKindMismatch,
    EmptySurfaces,
    EmptyToken,
    TermMultiToken,
    PhraseTooShort,
    MetonymTooFewSurfaces,
    ZeroDerivationOnNonTerm,
    CaseFlagMismatch,
    LemmaNotStemmed,
    SurfaceDisjointness,
    FunctionWordOverlap,
    FunctionWordNotLower,
    DuplicateFunctionWord,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::NoGoals => "no-goals",
            Rule::EmptyId => "empty-id",
            Rule::DuplicateGoal => "duplicate-goal",
            Rule::DuplicateNode => "duplicate-node",
            Rule::DuplicateLink => "duplicate-link",
            Rule::InvalidPrior => "invalid-prior",
            Rule::PriorIncomplete => "prior-incomplete",
            Rule::ProbabilityOpenInterval => "probability-open-interval",
            Rule::InvalidScale => "invalid-scale",
            Rule::LeakExceedsBucketFloor => "leak-exceeds-bucket-floor",
            Rule::BucketOutOfRange => "bucket-out-of-range",
            Rule::BucketMismatch => "bucket-mismatch",
            Rule::LinkForm => "link-form",
            Rule::UnresolvedGoal => "unresolved-goal",
            Rule::UnresolvedNode => "unresolved-node",
            Rule::SplitKindMismatch => "split-kind-mismatch",
            Rule::EmptySurfaces => "empty-surfaces",
            Rule::EmptyToken => "empty-token",
            Rule::TermMultiToken => "term-multi-token",
            Rule::PhraseTooShort => "phrase-too-short",
            Rule::MetonymTooFewSurfaces => "metonym-too-few-surfaces",
            Rule::ZeroDerivationOnNonTerm => "zero-derivation-on-non-term",
            Rule::CaseFlagMismatch => "case-flag-mismatch",
            Rule::LemmaNotStemmed => "lemma-not-stemmed",
            Rule::SurfaceDisjointness => "surface-disjointness",
            Rule::FunctionWordOverlap => "function-word-overlap",
            Rule::FunctionWordNotLower => "function-word-not-lower",
            Rule::DuplicateFunctionWord => "duplicate-function-word",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One broken invariant, located by a path into the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(rule: Rule, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            rule,
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.path, self.message)
    }
}

fn in_open_unit(p: f64) -> bool {
    p > 0.0 && p < 1.0
}

struct Checker<'a> {
    model: &'a KbModel,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn push(&mut self, rule: Rule, path: impl Into<String>, message: impl Into<String>) {
        self.out.push(Violation::new(rule, path, message));
    }

    fn probability(&mut self, path: String, p: f64) {
        if !in_open_unit(p) {
            self.push(
                Rule::ProbabilityOpenInterval,
                path,
                format!("probability not in open interval (0,1): {p}"),
            );
        }
    }

    fn globals(&mut self) {
        let m = self.model;
        if !m.scale.is_valid() {
            self.push(
                Rule::InvalidScale,
                "scale",
                format!(
                    "require 0 < pMin < pMax < 1, got pMin={}, pMax={}",
                    m.scale.p_min, m.scale.p_max
                ),
            );
        }
        self.probability("leak".into(), m.leak);
        if in_open_unit(m.leak) && m.scale.is_valid() && m.leak >= m.scale.p_min {
            self.push(
                Rule::LeakExceedsBucketFloor,
                "leak",
                format!(
                    "leak {} is not below bucket-1 probability {}",
                    m.leak, m.scale.p_min
                ),
            );
        }
        self.probability("nounVerbPrior".into(), m.noun_verb_prior);
        self.probability("indefiniteness.prior".into(), m.indefiniteness.prior_indef);
        for (word, fw) in &m.indefiniteness.function_words {
            let path = format!("indefiniteness.functionWords[{word}]");
            if word.is_empty() || *word != word.to_lowercase() {
                self.push(
                    Rule::FunctionWordNotLower,
                    path.clone(),
                    "function words are stored lower-cased",
                );
            }
            self.probability(format!("{path}.pGivenIndef"), fw.p_given_indef);
            self.probability(format!("{path}.pGivenDef"), fw.p_given_def);
        }
    }

    fn goals(&mut self) {
        let m = self.model;
        if m.goals.is_empty() {
            self.push(Rule::NoGoals, "goals", "knowledge base defines no goals");
        }
        let mut seen = HashSet::new();
        for (i, g) in m.goals.iter().enumerate() {
            let path = format!("goals[{i}]");
            if g.id.is_empty() {
                self.push(Rule::EmptyId, path.clone(), "goal id is empty");
            }
            if !seen.insert(g.id.as_str()) {
                self.push(
                    Rule::DuplicateGoal,
                    path.clone(),
                    format!("goal id '{}' repeats", g.id),
                );
            }
            if !(g.prior.is_finite() && g.prior > 0.0) {
                self.push(
                    Rule::InvalidPrior,
                    path,
                    format!("prior must be positive and finite, got {}", g.prior),
                );
            }
        }
    }

    fn nodes(&mut self) {
        let m = self.model;
        let mut seen = HashSet::new();
        // surface -> first node that claimed it
        let mut owners: HashMap<(&[String], bool), &str> = HashMap::new();
        for (i, n) in m.nodes.iter().enumerate() {
            let path = format!("nodes[{i}]");
            if n.id.is_empty() {
                self.push(Rule::EmptyId, path.clone(), "node id is empty");
            }
            if !seen.insert(n.id.as_str()) {
                self.push(
                    Rule::DuplicateNode,
                    path.clone(),
                    format!("node id '{}' repeats", n.id),
                );
            }
            if n.surfaces.is_empty() {
                self.push(
                    Rule::EmptySurfaces,
                    path.clone(),
                    format!("node '{}' has no surfaces", n.id),
                );
            }
            if n.zero_derivation && n.kind != NodeKind::Term {
                self.push(
                    Rule::ZeroDerivationOnNonTerm,
                    path.clone(),
                    format!("zeroDerivation is only allowed on term nodes ('{}')", n.id),
                );
            }
            if n.kind == NodeKind::Metonym && n.surfaces.len() < 2 {
                self.push(
                    Rule::MetonymTooFewSurfaces,
                    path.clone(),
                    format!("metonym '{}' needs at least 2 surfaces", n.id),
                );
            }
            for (j, s) in n.surfaces.iter().enumerate() {
                let spath = format!("{path}.surfaces[{j}]");
                if s.tokens.is_empty()
                    || s.tokens
                        .iter()
                        .any(|t| t.is_empty() || t.chars().any(char::is_whitespace))
                {
                    self.push(
                        Rule::EmptyToken,
                        spath.clone(),
                        "surface tokens must be non-empty single words",
                    );
                    continue;
                }
                match n.kind {
                    NodeKind::Term if s.tokens.len() != 1 => self.push(
                        Rule::TermMultiToken,
                        spath.clone(),
                        "term surfaces are single tokens",
                    ),
                    NodeKind::Phrase if s.tokens.len() < 2 => self.push(
                        Rule::PhraseTooShort,
                        spath.clone(),
                        "phrase surfaces need at least 2 tokens",
                    ),
                    _ => {}
                }
                if s.exact_case && !n.case_sensitive {
                    self.push(
                        Rule::CaseFlagMismatch,
                        spath.clone(),
                        format!("exactCase surface on node '{}' without caseSensitive", n.id),
                    );
                }
                if !s.exact_case {
                    for t in &s.tokens {
                        if !is_lemma(t) || *t != t.to_lowercase() {
                            self.push(
                                Rule::LemmaNotStemmed,
                                spath.clone(),
                                format!(
                                    "token '{t}' is not a lower-case lemma (stems to '{}')",
                                    crate::textpipe::stem(&t.to_lowercase())
                                ),
                            );
                        }
                    }
                }
                if let Some(owner) =
                    owners.insert((s.tokens.as_slice(), s.exact_case), n.id.as_str())
                {
                    if owner != n.id {
                        self.push(
                            Rule::SurfaceDisjointness,
                            spath.clone(),
                            format!("surface '{}' already belongs to node '{owner}'", s.text()),
                        );
                    }
                    owners.insert((s.tokens.as_slice(), s.exact_case), owner);
                }
                if s.tokens.len() == 1 {
                    let lower = s.tokens[0].to_lowercase();
                    if m.indefiniteness.function_words.contains_key(&lower) {
                        self.push(
                            Rule::FunctionWordOverlap,
                            spath,
                            format!("surface '{}' is also a function word", s.tokens[0]),
                        );
                    }
                }
            }
        }
    }

    fn links(&mut self) {
        let m = self.model;
        let goals: HashSet<&str> = m.goals.iter().map(|g| g.id.as_str()).collect();
        let nodes: HashMap<&str, &super::EvidenceNode> =
            m.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
        let mut pairs = HashSet::new();
        for (i, l) in m.links.iter().enumerate() {
            let path = format!("links[{i}]");
            if !goals.contains(l.goal.as_str()) {
                self.push(
                    Rule::UnresolvedGoal,
                    path.clone(),
                    format!("unknown goal '{}'", l.goal),
                );
            }
            match nodes.get(l.node.as_str()) {
                None => self.push(
                    Rule::UnresolvedNode,
                    path.clone(),
                    format!("unknown node '{}'", l.node),
                ),
                Some(node) => {
                    let allowed = match l.probs {
                        LinkProbs::Plain { .. } => true,
                        LinkProbs::DefinitenessSplit { .. } => !node.zero_derivation,
                        LinkProbs::NounVerbSplit { .. } | LinkProbs::FullSplit { .. } => {
                            node.zero_derivation
                        }
                    };
                    if !allowed {
                        let hint = if node.zero_derivation {
                            "zero-derivation nodes take plain, nounVerbSplit or fullSplit links"
                        } else {
                            "nounVerbSplit and fullSplit need a zeroDerivation node"
                        };
                        self.push(
                            Rule::SplitKindMismatch,
                            path.clone(),
                            format!("{} link on node '{}': {hint}", l.probs.form_name(), node.id),
                        );
                    }
                }
            }
            if !pairs.insert((l.goal.as_str(), l.node.as_str())) {
                self.push(
                    Rule::DuplicateLink,
                    path.clone(),
                    format!("second link between '{}' and '{}'", l.goal, l.node),
                );
            }
            for (slot, a) in l.probs.slots() {
                let spath = format!("{path}.{slot}");
                match a.bucket {
                    Some(b) => match bucket_to_probability(b, &m.scale) {
                        Ok(p) => {
                            if p != a.p {
                                self.push(
                                    Rule::BucketMismatch,
                                    spath,
                                    format!("bucket {b} maps to {p}, link stores {}", a.p),
                                );
                            }
                        }
                        Err(super::ScaleError::BucketOutOfRange(_)) => self.push(
                            Rule::BucketOutOfRange,
                            spath,
                            format!("bucket {b} outside 1..=13"),
                        ),
                        // reported once under `scale`
                        Err(super::ScaleError::InvalidScale { .. }) => {}
                    },
                    None => self.probability(spath, a.p),
                }
            }
        }
    }
}

/// Checks every knowledge-base invariant. An empty result means `model`
/// can be turned into a [`super::KnowledgeBase`].
pub fn validate_kb(model: &KbModel) -> Vec<Violation> {
    let mut checker = Checker {
        model,
        out: Vec::new(),
    };
    checker.globals();
    checker.goals();
    checker.nodes();
    checker.links();
    checker.out
}
