//! Proof-theoretic systems and their forcing relation.
//!
//! A proof-theoretic system is a finite family of atomic systems over a
//! shared signature, ordered by rule-set inclusion. Forcing evaluates a
//! formula at a member: atoms and falsum reduce to derivability,
//! conjunction and disjunction are pointwise, and implication
//! quantifies over exactly the members extending the current one —
//! inclusion plays the role a Kripke accessibility relation plays.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::atomic::{rule_universe, AtomicProp, AtomicSystem, Signature, UniverseError};
use crate::bridge;
use crate::formula::{Atom, Formula};
use crate::ipc;
use crate::kripke::{KripkeModel, WorldId};
use crate::search::SearchError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PtsError {
    #[error("rule in member {member:?} mentions an atom outside the signature")]
    RuleOutsideSignature { member: String },
    #[error("unknown atom {0} (not in the system's signature)")]
    UnknownAtom(Atom),
    #[error("member index {index} out of range: the system has {len} members")]
    BadIndex { index: usize, len: usize },
    #[error("unknown member {0:?}")]
    UnknownMember(String),
    #[error(transparent)]
    Universe(#[from] UniverseError),
    #[error("a proof-theoretic system of {members} members exceeds the cap of {cap}")]
    MemberCapExceeded { members: u128, cap: usize },
}

/// A named member of a proof-theoretic system. Names are surface labels
/// only; semantics depends just on the rule sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtsMember {
    name: String,
    system: AtomicSystem,
}

impl PtsMember {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn system(&self) -> &AtomicSystem {
        &self.system
    }
}

/// A finite family of atomic systems over one signature. Duplicate rule
/// sets are collapsed on construction, keeping the first name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTheoreticSystem {
    signature: Signature,
    members: Vec<PtsMember>,
}

impl ProofTheoreticSystem {
    pub fn new(
        signature: Signature,
        members: impl IntoIterator<Item = (String, AtomicSystem)>,
    ) -> Result<Self, PtsError> {
        let mut kept: Vec<PtsMember> = Vec::new();
        for (name, system) in members {
            if !system.mentions_only(&signature) {
                return Err(PtsError::RuleOutsideSignature { member: name });
            }
            if kept.iter().any(|m| m.system == system) {
                continue;
            }
            kept.push(PtsMember { name, system });
        }
        Ok(ProofTheoreticSystem {
            signature,
            members: kept,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn members(&self) -> impl Iterator<Item = &PtsMember> + '_ {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, index: usize) -> Result<&PtsMember, PtsError> {
        self.members.get(index).ok_or(PtsError::BadIndex {
            index,
            len: self.members.len(),
        })
    }

    pub fn member_index(&self, name: &str) -> Result<usize, PtsError> {
        self.members
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| PtsError::UnknownMember(name.to_string()))
    }

    /// True when every member contains the ex falso rule for every
    /// signature atom.
    pub fn is_intuitionistic(&self) -> bool {
        self.members
            .iter()
            .all(|m| m.system.is_ex_falso_complete(&self.signature))
    }
}

/// Memoizing forcing evaluator over a fixed proof-theoretic system.
/// Results are keyed by member index and subformula node, so repeated
/// queries against the same formula tree share work. Each evaluator
/// owns its table; concurrent evaluators over one shared system are
/// independent.
pub struct PtsEvaluator<'a> {
    pts: &'a ProofTheoreticSystem,
    /// `extensions[i]` lists every j with member_i ⊆ member_j.
    extensions: Vec<Vec<usize>>,
    derivable: Vec<std::collections::BTreeSet<AtomicProp>>,
    memo: HashMap<(usize, usize), bool>,
}

impl<'a> PtsEvaluator<'a> {
    pub fn new(pts: &'a ProofTheoreticSystem) -> Self {
        let n = pts.members.len();
        let extensions = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| pts.members[i].system.is_subset(&pts.members[j].system))
                    .collect()
            })
            .collect();
        let derivable = pts
            .members
            .iter()
            .map(|m| m.system.derivable_closure())
            .collect();
        PtsEvaluator {
            pts,
            extensions,
            derivable,
            memo: HashMap::new(),
        }
    }

    fn check_atoms(&self, f: &Formula) -> Result<(), PtsError> {
        for atom in f.atoms() {
            if !self.pts.signature.contains(&atom) {
                return Err(PtsError::UnknownAtom(atom));
            }
        }
        Ok(())
    }

    /// Forcing of `f` at the member with the given index.
    pub fn forces(&mut self, index: usize, f: &Formula) -> Result<bool, PtsError> {
        self.pts.member(index)?;
        self.check_atoms(f)?;
        Ok(self.eval(index, f))
    }

    /// Forcing at every member, in member order.
    pub fn forces_all(&mut self, f: &Formula) -> Result<Vec<bool>, PtsError> {
        self.check_atoms(f)?;
        Ok((0..self.pts.members.len())
            .map(|i| self.eval(i, f))
            .collect())
    }

    fn eval(&mut self, index: usize, f: &Formula) -> bool {
        let key = (index, f as *const Formula as usize);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let value = match f {
            Formula::Atom(a) => self.derivable[index].contains(&AtomicProp::Atom(a.clone())),
            Formula::Bottom => self.derivable[index].contains(&AtomicProp::Bottom),
            Formula::And(l, r) => self.eval(index, l) && self.eval(index, r),
            Formula::Or(l, r) => self.eval(index, l) || self.eval(index, r),
            Formula::Imp(l, r) => {
                let extensions = self.extensions[index].clone();
                extensions
                    .into_iter()
                    .all(|j| !self.eval(j, l) || self.eval(j, r))
            }
        };
        self.memo.insert(key, value);
        value
    }
}

/// Forcing of a formula at one member of the system.
pub fn pts_forces(
    pts: &ProofTheoreticSystem,
    index: usize,
    f: &Formula,
) -> Result<bool, PtsError> {
    PtsEvaluator::new(pts).forces(index, f)
}

/// Truth in the system: forcing at every member.
pub fn pts_valid(pts: &ProofTheoreticSystem, f: &Formula) -> Result<bool, PtsError> {
    let all = PtsEvaluator::new(pts).forces_all(f)?;
    Ok(all.into_iter().all(|b| b))
}

/// Default cap on the member count of a generated system.
pub const DEFAULT_MEMBER_CAP: usize = 4096;

/// The family of every superset of `base` within the rule universe of
/// the signature, each ex-falso-completed: the closure-style systems
/// generated from a fixed core of rules. Member names are `G0`, `G1`,
/// ... in enumeration order; equal completions collapse.
pub fn goldfarb_pts(
    base: &AtomicSystem,
    sig: &Signature,
    universe_cap: usize,
    member_cap: usize,
) -> Result<ProofTheoreticSystem, PtsError> {
    let universe = rule_universe(sig, universe_cap)?;
    let extra: Vec<_> = universe
        .into_iter()
        .filter(|r| !base.contains(r))
        .collect();
    let count = 1u128 << extra.len().min(127);
    if extra.len() >= 127 || count > member_cap as u128 {
        return Err(PtsError::MemberCapExceeded {
            members: count,
            cap: member_cap,
        });
    }
    let mut members = Vec::new();
    for mask in 0..(1usize << extra.len()) {
        let mut system = base.clone();
        for (bit, rule) in extra.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                system.insert(rule.clone());
            }
        }
        members.push((format!("G{mask}"), system.ex_falso_completion(sig)));
    }
    ProofTheoreticSystem::new(sig.clone(), members)
}

/// A self-certifying refutation: the countermodel found by search plus
/// its translation, pinned to the member where forcing fails.
#[derive(Clone, Debug)]
pub struct RefutationWitness {
    pub model: KripkeModel,
    pub world: WorldId,
    pub pts: ProofTheoreticSystem,
    pub member: usize,
}

/// Outcome of a generalised validity check.
#[derive(Clone, Debug)]
pub enum Verdict {
    Valid,
    Refuted(Box<RefutationWitness>),
    Unknown(String),
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Valid => 0,
            Verdict::Refuted(_) => 1,
            Verdict::Unknown(_) => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("Valid"),
            Verdict::Refuted(w) => write!(
                f,
                "Refuted at world {} ({} worlds, member {})",
                w.world,
                w.model.world_count(),
                w.pts
                    .member(w.member)
                    .map(|m| m.name().to_string())
                    .unwrap_or_else(|_| w.member.to_string()),
            ),
            Verdict::Unknown(note) => write!(f, "Unknown: {note}"),
        }
    }
}

/// Checks generalised proof-theoretic validity of a user formula.
///
/// Provable formulas are `Valid` outright. For a non-theorem the
/// procedure searches for a finite Kripke countermodel, translates it
/// into an intuitionistic proof-theoretic system, and re-evaluates the
/// formula there; the verdict is only `Refuted` once that second
/// evaluation also fails. Budget exhaustion yields `Unknown`.
pub fn gptv_check(f: &Formula, max_worlds: usize) -> Verdict {
    debug_assert!(
        !f.contains_label_atom(),
        "label atoms may not appear in checked formulas"
    );
    match ipc::decide(f, max_worlds) {
        Err(SearchError::CapExceeded { requested, cap }) => Verdict::Unknown(format!(
            "requested search bound {requested} exceeds the enumeration cap of {cap}"
        )),
        Ok(ipc::DecideOutcome::Valid) => Verdict::Valid,
        Ok(ipc::DecideOutcome::Unknown(note)) => Verdict::Unknown(note),
        Ok(ipc::DecideOutcome::Refuted { model, world }) => {
            let translation = bridge::translate_model_over(&model, f.atoms());
            let member = translation.member_of(&world);
            let refuted_again = pts_forces(&translation.pts, member, f);
            match refuted_again {
                Ok(false) => Verdict::Refuted(Box::new(RefutationWitness {
                    model,
                    world,
                    pts: translation.pts,
                    member,
                })),
                Ok(true) => Verdict::Unknown(format!(
                    "witness rejected: `{f}` fails at world {world} of the countermodel but \
                     holds at the translated member; translation and forcing disagree"
                )),
                Err(e) => Verdict::Unknown(format!("witness re-evaluation failed: {e}")),
            }
        }
    }
}
