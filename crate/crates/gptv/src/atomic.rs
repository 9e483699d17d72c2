//! Atomic rules, atomic systems and the derivability relation.
//!
//! An atomic rule takes a finite set of premises (atoms or falsum) to a
//! conclusion; with no premises it is an axiom. Derivability is the
//! least fixpoint of forward chaining, which treats a rule set as a
//! propositional Horn program.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::formula::Atom;

/// An atomic proposition: a named atom or falsum. Falsum orders before
/// every atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AtomicProp {
    Bottom,
    Atom(Atom),
}

impl AtomicProp {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            AtomicProp::Bottom => None,
            AtomicProp::Atom(a) => Some(a),
        }
    }
}

impl From<Atom> for AtomicProp {
    fn from(a: Atom) -> Self {
        AtomicProp::Atom(a)
    }
}

impl fmt::Display for AtomicProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomicProp::Bottom => f.write_str("bot"),
            AtomicProp::Atom(a) => write!(f, "{a}"),
        }
    }
}

/// The finite set of atoms a session works over. Falsum is implicitly
/// present and never a member.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Signature {
    atoms: BTreeSet<Atom>,
}

impl Signature {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Signature {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    /// True when the proposition is falsum or a signature atom.
    pub fn admits(&self, prop: &AtomicProp) -> bool {
        match prop {
            AtomicProp::Bottom => true,
            AtomicProp::Atom(a) => self.contains(a),
        }
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            atoms: self.atoms.union(&other.atoms).cloned().collect(),
        }
    }

    pub fn insert(&mut self, atom: Atom) {
        self.atoms.insert(atom);
    }

    /// All propositions the signature speaks about: its atoms plus falsum.
    pub fn props(&self) -> impl Iterator<Item = AtomicProp> + '_ {
        std::iter::once(AtomicProp::Bottom).chain(self.atoms.iter().cloned().map(AtomicProp::Atom))
    }
}

impl FromIterator<Atom> for Signature {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        Signature::new(iter)
    }
}

/// A premises-to-conclusion inference over atomic propositions. Premise
/// order and multiplicity are derivationally irrelevant, so premises are
/// a set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AtomicRule {
    premises: BTreeSet<AtomicProp>,
    conclusion: AtomicProp,
}

impl AtomicRule {
    pub fn new(
        premises: impl IntoIterator<Item = AtomicProp>,
        conclusion: AtomicProp,
    ) -> Self {
        AtomicRule {
            premises: premises.into_iter().collect(),
            conclusion,
        }
    }

    pub fn axiom(conclusion: AtomicProp) -> Self {
        AtomicRule::new([], conclusion)
    }

    /// The ex falso rule `bot => a`.
    pub fn ex_falso(atom: Atom) -> Self {
        AtomicRule::new([AtomicProp::Bottom], AtomicProp::Atom(atom))
    }

    /// The tautologous labelling rule `a => a`.
    pub fn tautology(prop: AtomicProp) -> Self {
        AtomicRule::new([prop.clone()], prop)
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn premises(&self) -> impl Iterator<Item = &AtomicProp> + '_ {
        self.premises.iter()
    }

    pub fn conclusion(&self) -> &AtomicProp {
        &self.conclusion
    }

    pub fn mentions_only(&self, sig: &Signature) -> bool {
        self.premises.iter().all(|p| sig.admits(p)) && sig.admits(&self.conclusion)
    }
}

impl fmt::Display for AtomicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_axiom() {
            write!(f, "=> {}", self.conclusion)
        } else {
            let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
            write!(f, "{} => {}", premises.join(", "), self.conclusion)
        }
    }
}

/// A finite set of atomic rules.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AtomicSystem {
    rules: BTreeSet<AtomicRule>,
}

impl AtomicSystem {
    pub fn new(rules: impl IntoIterator<Item = AtomicRule>) -> Self {
        AtomicSystem {
            rules: rules.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rules(&self) -> impl Iterator<Item = &AtomicRule> + '_ {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn contains(&self, rule: &AtomicRule) -> bool {
        self.rules.contains(rule)
    }

    pub fn insert(&mut self, rule: AtomicRule) {
        self.rules.insert(rule);
    }

    pub fn is_subset(&self, other: &AtomicSystem) -> bool {
        self.rules.is_subset(&other.rules)
    }

    pub fn union(&self, other: &AtomicSystem) -> AtomicSystem {
        AtomicSystem {
            rules: self.rules.union(&other.rules).cloned().collect(),
        }
    }

    pub fn mentions_only(&self, sig: &Signature) -> bool {
        self.rules.iter().all(|r| r.mentions_only(sig))
    }

    /// The least set of propositions closed under the rules: start from
    /// axiom conclusions and keep adding the conclusion of any rule whose
    /// premises are all present. A proposition is derivable exactly when
    /// it lands in this set.
    pub fn derivable_closure(&self) -> BTreeSet<AtomicProp> {
        let mut derived: BTreeSet<AtomicProp> = BTreeSet::new();
        let mut pending: Vec<&AtomicRule> = self.rules.iter().collect();
        loop {
            let mut progressed = false;
            pending.retain(|rule| {
                if derived.contains(rule.conclusion()) {
                    return false;
                }
                if rule.premises().all(|p| derived.contains(p)) {
                    derived.insert(rule.conclusion().clone());
                    progressed = true;
                    false
                } else {
                    true
                }
            });
            if !progressed {
                return derived;
            }
        }
    }

    /// Whether the proposition has a proof using only rules of the system.
    pub fn derives(&self, prop: &AtomicProp) -> bool {
        self.derivable_closure().contains(prop)
    }

    /// Adds `bot => a` for every signature atom. Idempotent.
    pub fn ex_falso_completion(&self, sig: &Signature) -> AtomicSystem {
        let mut completed = self.clone();
        for atom in sig.atoms() {
            completed.insert(AtomicRule::ex_falso(atom.clone()));
        }
        completed
    }

    /// True when `bot => a` is present for every signature atom.
    pub fn is_ex_falso_complete(&self, sig: &Signature) -> bool {
        sig.atoms()
            .all(|atom| self.rules.contains(&AtomicRule::ex_falso(atom.clone())))
    }

    /// Renders the rule set with the ex falso rules of `sig` elided, the
    /// way translated systems are usually displayed.
    pub fn display_elided(&self, sig: &Signature) -> String {
        let ex_falso: BTreeSet<AtomicRule> = sig
            .atoms()
            .map(|a| AtomicRule::ex_falso(a.clone()))
            .collect();
        let shown: Vec<String> = self
            .rules
            .iter()
            .filter(|r| !ex_falso.contains(r))
            .map(|r| r.to_string())
            .collect();
        format!("{{{}}}", shown.join("; "))
    }
}

impl FromIterator<AtomicRule> for AtomicSystem {
    fn from_iter<T: IntoIterator<Item = AtomicRule>>(iter: T) -> Self {
        AtomicSystem::new(iter)
    }
}

impl fmt::Display for AtomicSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<String> = self.rules.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", rules.join("; "))
    }
}

/// Default cap on [`rule_universe`] size; enough for six atoms.
pub const DEFAULT_RULE_UNIVERSE_CAP: usize = 1024;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniverseError {
    #[error("rule universe over {atoms} atoms holds {size} rules, exceeding the cap of {cap}")]
    CapExceeded {
        atoms: usize,
        size: usize,
        cap: usize,
    },
}

/// Every rule whose premises are a subset of the signature's
/// propositions and whose conclusion is one of them: `2^(n+1) * (n+1)`
/// rules for `n` atoms. Errors out when that count exceeds `cap`.
pub fn rule_universe(sig: &Signature, cap: usize) -> Result<BTreeSet<AtomicRule>, UniverseError> {
    let props: Vec<AtomicProp> = sig.props().collect();
    let n = props.len();
    let size = (1usize << n).saturating_mul(n);
    if size > cap {
        return Err(UniverseError::CapExceeded {
            atoms: sig.len(),
            size,
            cap,
        });
    }
    let mut rules = BTreeSet::new();
    for premise_mask in 0..(1usize << n) {
        let premises: Vec<AtomicProp> = props
            .iter()
            .enumerate()
            .filter(|(i, _)| premise_mask & (1 << i) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        for conclusion in &props {
            rules.insert(AtomicRule::new(premises.iter().cloned(), conclusion.clone()));
        }
    }
    Ok(rules)
}
