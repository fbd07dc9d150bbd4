//! On-disk JSON format.
//!
//! Unknown keys are rejected everywhere. A link probability slot holds either
//! a probability (`0.3`) or an assessed bucket (`{"bucket": 9}`); a plain link
//! may also use the `"bucket": 9` shorthand instead of `"p"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    bucket_to_probability, Assessed, BucketScale, EvidenceNode, FunctionWord, FunctionWordClass,
    Goal, IndefinitenessModel, KbError, KbMeta, KbModel, KnowledgeBase, Link, LinkProbs, NodeKind,
    Rule, SurfaceForm, Violation, DEFAULT_LEAK, DEFAULT_NOUN_VERB_PRIOR, DEFAULT_PRIOR_INDEF,
    DEFAULT_RATIO,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct KbDocument {
    pub meta: MetaDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leak: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indefiniteness: Option<IndefinitenessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noun_verb_prior: Option<f64>,
    pub goals: Vec<GoalDoc>,
    pub nodes: Vec<NodeDoc>,
    pub links: Vec<LinkDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaDoc {
    pub name: String,
    pub version: String,
    pub language: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ScaleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct IndefinitenessDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function_words: Option<Vec<FunctionWordDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct FunctionWordDoc {
    pub surface: String,
    pub p_given_indef: f64,
    pub p_given_def: f64,
    pub class: FunctionWordClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalDoc {
    pub id: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct NodeDoc {
    pub id: String,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "is_false")]
    pub case_sensitive: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub zero_derivation: bool,
    pub surfaces: Vec<SurfaceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SurfaceDoc {
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact_case: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbDoc {
    Value(f64),
    Bucket(BucketDoc),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BucketDoc {
    pub bucket: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct LinkDoc {
    pub goal: String,
    pub node: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ProbDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bucket: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_indef: Option<ProbDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_def: Option<ProbDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_noun: Option<ProbDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_verb: Option<ProbDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_noun_indef: Option<ProbDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_noun_def: Option<ProbDoc>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn expand(slot: ProbDoc, scale: &BucketScale) -> Assessed {
    match slot {
        ProbDoc::Value(p) => Assessed::value(p),
        ProbDoc::Bucket(BucketDoc { bucket }) => Assessed {
            p: bucket_to_probability(bucket, scale).unwrap_or(f64::NAN),
            bucket: Some(bucket),
        },
    }
}

fn collapse(a: Assessed) -> ProbDoc {
    match a.bucket {
        Some(bucket) => ProbDoc::Bucket(BucketDoc { bucket }),
        None => ProbDoc::Value(a.p),
    }
}

impl LinkDoc {
    fn probs(&self, scale: &BucketScale) -> Option<LinkProbs> {
        let e = |slot: ProbDoc| expand(slot, scale);
        let plain = match (self.p, self.bucket) {
            (Some(p), None) => Some(e(p)),
            (None, Some(b)) => Some(e(ProbDoc::Bucket(BucketDoc { bucket: b }))),
            _ => None,
        };
        let present = [
            self.p.is_some() || self.bucket.is_some(),
            self.p_indef.is_some(),
            self.p_def.is_some(),
            self.p_noun.is_some(),
            self.p_verb.is_some(),
            self.p_noun_indef.is_some(),
            self.p_noun_def.is_some(),
        ];
        match present {
            [true, false, false, false, false, false, false] => {
                plain.map(|p| LinkProbs::Plain { p })
            }
            [false, true, true, false, false, false, false] => Some(LinkProbs::DefinitenessSplit {
                p_indef: e(self.p_indef?),
                p_def: e(self.p_def?),
            }),
            [false, false, false, true, true, false, false] => Some(LinkProbs::NounVerbSplit {
                p_noun: e(self.p_noun?),
                p_verb: e(self.p_verb?),
            }),
            [false, false, false, false, true, true, true] => Some(LinkProbs::FullSplit {
                p_noun_indef: e(self.p_noun_indef?),
                p_noun_def: e(self.p_noun_def?),
                p_verb: e(self.p_verb?),
            }),
            _ => None,
        }
    }

    fn from_link(link: &Link) -> Self {
        let mut doc = LinkDoc {
            goal: link.goal.clone(),
            node: link.node.clone(),
            ..Default::default()
        };
        match link.probs {
            LinkProbs::Plain { p } => match p.bucket {
                Some(b) => doc.bucket = Some(b),
                None => doc.p = Some(ProbDoc::Value(p.p)),
            },
            LinkProbs::DefinitenessSplit { p_indef, p_def } => {
                doc.p_indef = Some(collapse(p_indef));
                doc.p_def = Some(collapse(p_def));
            }
            LinkProbs::NounVerbSplit { p_noun, p_verb } => {
                doc.p_noun = Some(collapse(p_noun));
                doc.p_verb = Some(collapse(p_verb));
            }
            LinkProbs::FullSplit {
                p_noun_indef,
                p_noun_def,
                p_verb,
            } => {
                doc.p_noun_indef = Some(collapse(p_noun_indef));
                doc.p_noun_def = Some(collapse(p_noun_def));
                doc.p_verb = Some(collapse(p_verb));
            }
        }
        doc
    }
}

impl KbDocument {
    /// Resolves defaults and bucket annotations. Links with an unreadable
    /// probability form are dropped and reported.
    pub fn into_model(self) -> (KbModel, Vec<Violation>) {
        let mut violations = Vec::new();

        let scale = match self.scale {
            None => BucketScale::default(),
            Some(ScaleDoc { p_min, p_max }) => {
                let p_max = p_max.unwrap_or(super::DEFAULT_P_MAX);
                let p_min = p_min
                    .unwrap_or_else(|| BucketScale::from_max_and_ratio(p_max, DEFAULT_RATIO).p_min);
                BucketScale { p_min, p_max }
            }
        };

        let indefiniteness = match self.indefiniteness {
            None => IndefinitenessModel::default(),
            Some(doc) => {
                let mut model = IndefinitenessModel {
                    prior_indef: doc.prior.unwrap_or(DEFAULT_PRIOR_INDEF),
                    ..IndefinitenessModel::default()
                };
                if let Some(words) = doc.function_words {
                    let mut table = BTreeMap::new();
                    for (i, w) in words.into_iter().enumerate() {
                        let fw = FunctionWord {
                            p_given_indef: w.p_given_indef,
                            p_given_def: w.p_given_def,
                            class: w.class,
                        };
                        if table.insert(w.surface.clone(), fw).is_some() {
                            violations.push(Violation::new(
                                Rule::DuplicateFunctionWord,
                                format!("indefiniteness.functionWords[{i}]"),
                                format!("function word '{}' listed twice", w.surface),
                            ));
                        }
                    }
                    model.function_words = table;
                }
                model
            }
        };

        let with_prior = self.goals.iter().filter(|g| g.prior.is_some()).count();
        if with_prior != 0 && with_prior != self.goals.len() {
            violations.push(Violation::new(
                Rule::PriorIncomplete,
                "goals",
                format!(
                    "{with_prior} of {} goals carry a prior; give all or none",
                    self.goals.len()
                ),
            ));
        }
        let goals = self
            .goals
            .into_iter()
            .map(|g| Goal {
                id: g.id,
                title: g.title,
                prior: g.prior.unwrap_or(1.0),
            })
            .collect();

        let nodes = self
            .nodes
            .into_iter()
            .map(|n| EvidenceNode {
                id: n.id,
                kind: n.kind,
                case_sensitive: n.case_sensitive,
                zero_derivation: n.zero_derivation,
                surfaces: n
                    .surfaces
                    .into_iter()
                    .map(|s| SurfaceForm {
                        tokens: s.tokens,
                        exact_case: s.exact_case,
                    })
                    .collect(),
            })
            .collect();

        let mut links = Vec::with_capacity(self.links.len());
        for (i, l) in self.links.iter().enumerate() {
            match l.probs(&scale) {
                Some(probs) => links.push(Link {
                    goal: l.goal.clone(),
                    node: l.node.clone(),
                    probs,
                }),
                None => violations.push(Violation::new(
                    Rule::LinkForm,
                    format!("links[{i}]"),
                    "exactly one probability form required: p | bucket | pIndef+pDef | pNoun+pVerb | pNounIndef+pNounDef+pVerb",
                )),
            }
        }

        let model = KbModel {
            meta: KbMeta {
                name: self.meta.name,
                version: self.meta.version,
                language: self.meta.language,
            },
            scale,
            leak: self.leak.unwrap_or(DEFAULT_LEAK),
            indefiniteness,
            noun_verb_prior: self.noun_verb_prior.unwrap_or(DEFAULT_NOUN_VERB_PRIOR),
            goals,
            nodes,
            links,
        };
        (model, violations)
    }

    /// Canonical document for `model`, with every default written out.
    pub fn from_model(model: &KbModel) -> Self {
        Self {
            meta: MetaDoc {
                name: model.meta.name.clone(),
                version: model.meta.version.clone(),
                language: model.meta.language.clone(),
            },
            scale: Some(ScaleDoc {
                p_min: Some(model.scale.p_min),
                p_max: Some(model.scale.p_max),
            }),
            leak: Some(model.leak),
            indefiniteness: Some(IndefinitenessDoc {
                prior: Some(model.indefiniteness.prior_indef),
                function_words: Some(
                    model
                        .indefiniteness
                        .function_words
                        .iter()
                        .map(|(surface, fw)| FunctionWordDoc {
                            surface: surface.clone(),
                            p_given_indef: fw.p_given_indef,
                            p_given_def: fw.p_given_def,
                            class: fw.class,
                        })
                        .collect(),
                ),
            }),
            noun_verb_prior: Some(model.noun_verb_prior),
            goals: model
                .goals
                .iter()
                .map(|g| GoalDoc {
                    id: g.id.clone(),
                    title: g.title.clone(),
                    prior: Some(g.prior),
                })
                .collect(),
            nodes: model
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    kind: n.kind,
                    case_sensitive: n.case_sensitive,
                    zero_derivation: n.zero_derivation,
                    surfaces: n
                        .surfaces
                        .iter()
                        .map(|s| SurfaceDoc {
                            tokens: s.tokens.clone(),
                            exact_case: s.exact_case,
                        })
                        .collect(),
                })
                .collect(),
            links: model.links.iter().map(LinkDoc::from_link).collect(),
        }
    }
}

/// Parses, resolves and validates a knowledge-base document.
pub fn load_kb(text: &str) -> Result<KnowledgeBase, KbError> {
    let doc: KbDocument = serde_json::from_str(text)?;
    let (model, mut violations) = doc.into_model();
    if !violations.is_empty() {
        violations.extend(super::validate_kb(&model));
        return Err(KbError::Invalid(violations));
    }
    KnowledgeBase::new(model)
}

/// Writes the canonical JSON document for `kb`.
pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let doc = KbDocument::from_model(kb.model());
    serde_json::to_string_pretty(&doc).expect("knowledge-base documents always serialize")
}
