//! JSON document formats for atomic systems, proof-theoretic systems
//! and Kripke models, with validated conversions to the domain types.
//!
//! Falsum is spelled `"bot"` in documents. Emitted documents are
//! deterministic: maps are sorted and Kripke orders are written as
//! covering edges.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atomic::{AtomicProp, AtomicRule, AtomicSystem, Signature};
use crate::formula::{Atom, AtomError};
use crate::kripke::{KripkeModel, ModelError, WorldId};
use crate::pts::{ProofTheoreticSystem, PtsError};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pts(#[from] PtsError),
    #[error("document is neither a Kripke model nor a proof-theoretic system")]
    UnrecognizedDocument,
}

fn prop_from_name(name: &str) -> Result<AtomicProp, AtomError> {
    if name == "bot" {
        Ok(AtomicProp::Bottom)
    } else {
        Ok(AtomicProp::Atom(Atom::from_name(name)?))
    }
}

fn prop_name(prop: &AtomicProp) -> String {
    prop.to_string()
}

/// One rule: `{"premises": ["p"], "conclusion": "q"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RuleDoc {
    #[serde(default)]
    pub premises: Vec<String>,
    pub conclusion: String,
}

impl RuleDoc {
    pub fn to_rule(&self) -> Result<AtomicRule, DocError> {
        let premises = self
            .premises
            .iter()
            .map(|p| prop_from_name(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AtomicRule::new(premises, prop_from_name(&self.conclusion)?))
    }
}

impl From<&AtomicRule> for RuleDoc {
    fn from(rule: &AtomicRule) -> Self {
        RuleDoc {
            premises: rule.premises().map(prop_name).collect(),
            conclusion: prop_name(rule.conclusion()),
        }
    }
}

/// An atomic system with its signature:
/// `{"signature": ["p"], "rules": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomicSystemDoc {
    pub signature: Vec<String>,
    pub rules: Vec<RuleDoc>,
}

impl AtomicSystemDoc {
    pub fn to_system(&self) -> Result<(Signature, AtomicSystem), DocError> {
        let signature = parse_signature(&self.signature)?;
        let rules = self
            .rules
            .iter()
            .map(RuleDoc::to_rule)
            .collect::<Result<Vec<_>, _>>()?;
        Ok((signature, AtomicSystem::new(rules)))
    }
}

fn parse_signature(names: &[String]) -> Result<Signature, DocError> {
    names
        .iter()
        .map(|n| Atom::from_name(n).map_err(DocError::from))
        .collect::<Result<Vec<_>, _>>()
        .map(Signature::new)
}

fn signature_names(sig: &Signature) -> Vec<String> {
    sig.atoms().map(|a| a.name().to_string()).collect()
}

/// A named member's rules inside a proof-theoretic system document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MemberDoc {
    pub rules: Vec<RuleDoc>,
}

/// A proof-theoretic system:
/// `{"signature": [...], "systems": {"S_w1": {"rules": [...]}, ...}}`.
/// Members load in name order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PtsDoc {
    pub signature: Vec<String>,
    pub systems: BTreeMap<String, MemberDoc>,
}

impl PtsDoc {
    pub fn to_pts(&self) -> Result<ProofTheoreticSystem, DocError> {
        let signature = parse_signature(&self.signature)?;
        let mut members = Vec::new();
        for (name, member) in &self.systems {
            let rules = member
                .rules
                .iter()
                .map(RuleDoc::to_rule)
                .collect::<Result<Vec<_>, _>>()?;
            members.push((name.clone(), AtomicSystem::new(rules)));
        }
        Ok(ProofTheoreticSystem::new(signature, members)?)
    }
}

impl From<&ProofTheoreticSystem> for PtsDoc {
    fn from(pts: &ProofTheoreticSystem) -> Self {
        PtsDoc {
            signature: signature_names(pts.signature()),
            systems: pts
                .members()
                .map(|m| {
                    (
                        m.name().to_string(),
                        MemberDoc {
                            rules: m.system().rules().map(RuleDoc::from).collect(),
                        },
                    )
                })
                .collect(),
        }
    }
}

/// A Kripke model:
/// `{"worlds": [...], "order": [["w1","w2"]], "valuation": {"w1": ["p"]}}`.
/// Order pairs are covering edges; the loader closes them reflexively
/// and transitively.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelDoc {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<KripkeModel, DocError> {
        let worlds = self
            .worlds
            .iter()
            .map(WorldId::new)
            .collect::<Result<Vec<_>, _>>()?;
        let order = self
            .order
            .iter()
            .map(|(a, b)| Ok((WorldId::new(a)?, WorldId::new(b)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        let mut valuation = BTreeMap::new();
        for (world, atoms) in &self.valuation {
            let atoms = atoms
                .iter()
                .map(|a| Atom::from_name(a).map_err(DocError::from))
                .collect::<Result<BTreeSet<_>, _>>()?;
            valuation.insert(WorldId::new(world)?, atoms);
        }
        Ok(KripkeModel::new(worlds, &order, valuation)?)
    }
}

impl From<&KripkeModel> for ModelDoc {
    fn from(m: &KripkeModel) -> Self {
        ModelDoc {
            worlds: m.worlds().map(|w| w.name().to_string()).collect(),
            order: m
                .covering_pairs()
                .into_iter()
                .map(|(a, b)| (a.name().to_string(), b.name().to_string()))
                .collect(),
            valuation: m
                .worlds()
                .enumerate()
                .map(|(i, w)| {
                    (
                        w.name().to_string(),
                        m.valuation_at(i).iter().map(|a| a.name().to_string()).collect(),
                    )
                })
                .collect(),
        }
    }
}

/// Either document kind accepted by evaluation entry points.
pub enum Target {
    Model(KripkeModel),
    Pts(ProofTheoreticSystem),
}

/// Parses a JSON document as a model or a proof-theoretic system,
/// telling them apart by their fields.
pub fn parse_target(text: &str) -> Result<Target, DocError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let object = value.as_object().ok_or(DocError::UnrecognizedDocument)?;
    if object.contains_key("worlds") {
        let doc: ModelDoc = serde_json::from_value(value)?;
        Ok(Target::Model(doc.to_model()?))
    } else if object.contains_key("systems") {
        let doc: PtsDoc = serde_json::from_value(value)?;
        Ok(Target::Pts(doc.to_pts()?))
    } else {
        Err(DocError::UnrecognizedDocument)
    }
}

pub fn model_from_json(text: &str) -> Result<KripkeModel, DocError> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    doc.to_model()
}

pub fn model_to_json(m: &KripkeModel) -> String {
    serde_json::to_string_pretty(&ModelDoc::from(m)).expect("model documents always serialize")
}

pub fn pts_from_json(text: &str) -> Result<ProofTheoreticSystem, DocError> {
    let doc: PtsDoc = serde_json::from_str(text)?;
    doc.to_pts()
}

pub fn pts_to_json(pts: &ProofTheoreticSystem) -> String {
    serde_json::to_string_pretty(&PtsDoc::from(pts)).expect("system documents always serialize")
}

pub fn system_from_json(text: &str) -> Result<(Signature, AtomicSystem), DocError> {
    let doc: AtomicSystemDoc = serde_json::from_str(text)?;
    doc.to_system()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::translate_model;

    #[test]
    fn atomic_system_document_round_trips() {
        let text = r#"{
            "signature": ["p", "q"],
            "rules": [
                {"premises": [], "conclusion": "p"},
                {"premises": ["p"], "conclusion": "q"},
                {"premises": ["bot"], "conclusion": "p"}
            ]
        }"#;
        let (sig, system) = system_from_json(text).unwrap();
        assert_eq!(sig.len(), 2);
        assert_eq!(system.len(), 3);
        assert!(system.contains(&AtomicRule::ex_falso(Atom::new("p").unwrap())));
    }

    #[test]
    fn model_document_round_trips() {
        let text = r#"{
            "worlds": ["w0", "w1"],
            "order": [["w0", "w1"]],
            "valuation": {"w0": [], "w1": ["p"]}
        }"#;
        let model = model_from_json(text).unwrap();
        let reloaded = model_from_json(&model_to_json(&model)).unwrap();
        assert_eq!(model, reloaded);
    }

    #[test]
    fn pts_documents_round_trip_through_translation() {
        let model = model_from_json(
            r#"{"worlds": ["a", "b"], "order": [["a", "b"]], "valuation": {"b": ["p"]}}"#,
        )
        .unwrap();
        let pts = translate_model(&model).pts;
        let reloaded = pts_from_json(&pts_to_json(&pts)).unwrap();
        assert_eq!(reloaded.len(), pts.len());
        assert!(reloaded.is_intuitionistic());
        assert_eq!(pts_to_json(&reloaded), pts_to_json(&pts));
    }

    #[test]
    fn target_detection() {
        assert!(matches!(
            parse_target(r#"{"worlds": ["w"], "order": [], "valuation": {}}"#).unwrap(),
            Target::Model(_)
        ));
        assert!(matches!(
            parse_target(r#"{"signature": [], "systems": {}}"#).unwrap(),
            Target::Pts(_)
        ));
        assert!(parse_target(r#"{"foo": 1}"#).is_err());
        assert!(parse_target("[1, 2]").is_err());
    }

    #[test]
    fn model_errors_surface_from_documents() {
        let cyclic = r#"{
            "worlds": ["a", "b"],
            "order": [["a", "b"], ["b", "a"]],
            "valuation": {}
        }"#;
        match model_from_json(cyclic).unwrap_err() {
            DocError::Model(ModelError::Antisymmetry(x, y)) => {
                assert_eq!((x.name(), y.name()), ("a", "b"));
            }
            e => panic!("unexpected error {e}"),
        }

        let bad_val = r#"{
            "worlds": ["a", "b"],
            "order": [["a", "b"]],
            "valuation": {"a": ["p"]}
        }"#;
        assert!(matches!(
            model_from_json(bad_val).unwrap_err(),
            DocError::Model(ModelError::NonMonotone { .. })
        ));
    }
}
