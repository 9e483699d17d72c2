//! Propositional formulas over atoms, `bot`, `&`, `|` and `->`.
//!
//! Negation is surface sugar: `~f` is represented as `f -> bot`. The
//! renderer reverses the sugar, so formulas round-trip through
//! [`crate::parse::parse_formula`] structurally unchanged.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Atom names reserved for world labels start with this marker.
pub const LABEL_MARKER: char = '@';

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtomError {
    #[error("invalid atom name {0:?}: expected a lowercase letter followed by letters, digits or underscores")]
    InvalidName(String),
    #[error("atom name {0:?} is reserved")]
    Reserved(String),
    #[error("invalid world label {0:?}: world names must be alphanumeric or underscore")]
    InvalidLabel(String),
}

/// A propositional atom. Ordinary atoms match `[a-z][a-zA-Z0-9_]*`;
/// names starting with `@` belong to the reserved world-label namespace
/// and can only be created through [`Atom::world_label`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

fn is_user_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_label_body(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Atom {
    /// Creates a user atom. `bot` is rejected (it spells falsum in the
    /// grammar and in documents), as are `@`-prefixed names.
    pub fn new(name: impl Into<String>) -> Result<Self, AtomError> {
        let name = name.into();
        if name == "bot" {
            return Err(AtomError::Reserved(name));
        }
        if !is_user_name(&name) {
            return Err(AtomError::InvalidName(name));
        }
        Ok(Atom(name))
    }

    /// Creates the label atom `@<world>` for a world identifier.
    pub fn world_label(world: &str) -> Result<Self, AtomError> {
        if !is_label_body(world) {
            return Err(AtomError::InvalidLabel(world.to_string()));
        }
        Ok(Atom(format!("{LABEL_MARKER}{world}")))
    }

    /// Parses either kind of atom name, as found in documents.
    pub fn from_name(name: &str) -> Result<Self, AtomError> {
        match name.strip_prefix(LABEL_MARKER) {
            Some(body) => Atom::world_label(body),
            None => Atom::new(name),
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_label(&self) -> bool {
        self.0.starts_with(LABEL_MARKER)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Atom({:?})", self.0)
    }
}

/// A propositional formula. `Bottom` is a leaf, mirroring the treatment
/// of falsum as an atomic proposition rather than a 0-ary connective.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(Atom),
    Bottom,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn bottom() -> Self {
        Formula::Bottom
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn imp(lhs: Formula, rhs: Formula) -> Self {
        Formula::Imp(Box::new(lhs), Box::new(rhs))
    }

    /// `~f`, i.e. `f -> bot`.
    pub fn not(f: Formula) -> Self {
        Formula::imp(f, Formula::Bottom)
    }

    /// The set of atoms occurring in the formula. `Bottom` contributes
    /// nothing.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut acc = BTreeSet::new();
        self.collect_atoms(&mut acc);
        acc
    }

    fn collect_atoms(&self, acc: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                acc.insert(a.clone());
            }
            Formula::Bottom => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_atoms(acc);
                r.collect_atoms(acc);
            }
        }
    }

    pub fn contains_label_atom(&self) -> bool {
        self.atoms().iter().any(Atom::is_label)
    }

    /// Tree depth; leaves count 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom => 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    /// Simultaneous replacement of every atom occurrence per the
    /// substitution; `Bottom` is never substituted.
    pub fn substitute(&self, subst: &Substitution) -> Formula {
        match self {
            Formula::Atom(a) => match subst.get(a) {
                Some(f) => f.clone(),
                None => self.clone(),
            },
            Formula::Bottom => Formula::Bottom,
            Formula::And(l, r) => Formula::and(l.substitute(subst), r.substitute(subst)),
            Formula::Or(l, r) => Formula::or(l.substitute(subst), r.substitute(subst)),
            Formula::Imp(l, r) => Formula::imp(l.substitute(subst), r.substitute(subst)),
        }
    }
}

// Rendering with minimal parentheses. Precedence: ~ binds tightest,
// then &, then |, then ->; -> is right-associative, & and | associate
// to the left.
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NEG: u8 = 4;
const PREC_ATOM: u8 = 5;

fn write_formula(f: &Formula, min_prec: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = match f {
        Formula::Atom(_) | Formula::Bottom => PREC_ATOM,
        Formula::Imp(_, rhs) if **rhs == Formula::Bottom => PREC_NEG,
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
    };
    if prec < min_prec {
        out.write_str("(")?;
        write_formula(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Bottom => out.write_str("bot"),
        Formula::Imp(lhs, rhs) if **rhs == Formula::Bottom => {
            out.write_str("~")?;
            write_formula(lhs, PREC_NEG, out)
        }
        Formula::Imp(lhs, rhs) => {
            write_formula(lhs, PREC_IMP + 1, out)?;
            out.write_str(" -> ")?;
            write_formula(rhs, PREC_IMP, out)
        }
        Formula::Or(lhs, rhs) => {
            write_formula(lhs, PREC_OR, out)?;
            out.write_str(" | ")?;
            write_formula(rhs, PREC_OR + 1, out)
        }
        Formula::And(lhs, rhs) => {
            write_formula(lhs, PREC_AND, out)?;
            out.write_str(" & ")?;
            write_formula(rhs, PREC_AND + 1, out)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, 0, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("label atom {0} may not appear in a substitution domain")]
    LabelInDomain(Atom),
    #[error("label atom in the replacement for {0}")]
    LabelInRange(Atom),
}

/// A finite map from atoms to formulas. Atoms not in the map stay
/// fixed; falsum is never substituted. Label atoms are excluded from
/// both domain and range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: std::collections::BTreeMap<Atom, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, atom: Atom, replacement: Formula) -> Result<(), SubstitutionError> {
        if atom.is_label() {
            return Err(SubstitutionError::LabelInDomain(atom));
        }
        if replacement.contains_label_atom() {
            return Err(SubstitutionError::LabelInRange(atom));
        }
        self.map.insert(atom, replacement);
        Ok(())
    }

    pub fn get(&self, atom: &Atom) -> Option<&Formula> {
        self.map.get(atom)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Formula)> {
        self.map.iter()
    }

    /// Sequential composition: applying the result equals applying
    /// `self` and then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut map = std::collections::BTreeMap::new();
        for (a, f) in &self.map {
            map.insert(a.clone(), f.substitute(other));
        }
        for (a, f) in &other.map {
            map.entry(a.clone()).or_insert_with(|| f.clone());
        }
        Substitution { map }
    }
}

impl FromIterator<(Atom, Formula)> for Substitution {
    /// Builds a substitution from pairs already known to be label-free;
    /// panics otherwise.
    fn from_iter<T: IntoIterator<Item = (Atom, Formula)>>(iter: T) -> Self {
        let mut s = Substitution::new();
        for (a, f) in iter {
            s.bind(a, f).expect("label atom in substitution");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    fn var(name: &str) -> Formula {
        Formula::atom(atom(name))
    }

    #[test]
    fn atom_names_are_validated() {
        assert!(Atom::new("p").is_ok());
        assert!(Atom::new("p_1x").is_ok());
        assert!(Atom::new("P").is_err());
        assert!(Atom::new("1p").is_err());
        assert!(Atom::new("").is_err());
        assert_eq!(Atom::new("bot"), Err(AtomError::Reserved("bot".into())));
        assert!(Atom::new("@w").is_err());
    }

    #[test]
    fn world_labels_live_in_reserved_namespace() {
        let l = Atom::world_label("w1").unwrap();
        assert_eq!(l.name(), "@w1");
        assert!(l.is_label());
        assert!(!atom("p").is_label());
        assert!(Atom::world_label("a b").is_err());
        assert_eq!(Atom::from_name("@w1").unwrap(), l);
    }

    #[test]
    fn atoms_of_collects_each_atom_once() {
        assert_eq!(var("p").atoms(), [atom("p")].into());
        assert_eq!(Formula::not(var("p")).atoms(), [atom("p")].into());
        let f = Formula::and(var("p"), Formula::and(var("p"), var("q")));
        assert_eq!(f.atoms(), [atom("p"), atom("q")].into());
        assert!(Formula::Bottom.atoms().is_empty());
    }

    #[test]
    fn rendering_uses_minimal_parentheses() {
        let f = Formula::imp(var("p"), Formula::or(var("q"), var("r")));
        assert_eq!(f.to_string(), "p -> q | r");
        assert_eq!(Formula::Bottom.to_string(), "bot");
        let g = Formula::and(Formula::or(var("p"), var("q")), var("r"));
        assert_eq!(g.to_string(), "(p | q) & r");
        assert_eq!(Formula::not(var("p")).to_string(), "~p");
        assert_eq!(
            Formula::not(Formula::and(var("p"), var("q"))).to_string(),
            "~(p & q)"
        );
        assert_eq!(
            Formula::imp(var("p"), Formula::imp(var("q"), var("r"))).to_string(),
            "p -> q -> r"
        );
        assert_eq!(
            Formula::imp(Formula::imp(var("p"), var("q")), var("r")).to_string(),
            "(p -> q) -> r"
        );
    }

    #[test]
    fn substitution_is_simultaneous() {
        let mut s = Substitution::new();
        s.bind(atom("p"), var("q")).unwrap();
        s.bind(atom("q"), var("p")).unwrap();
        let f = Formula::imp(var("p"), var("q"));
        assert_eq!(f.substitute(&s), Formula::imp(var("q"), var("p")));
    }

    #[test]
    fn empty_substitution_is_identity() {
        let f = Formula::imp(var("p"), Formula::and(var("q"), Formula::Bottom));
        assert_eq!(f.substitute(&Substitution::new()), f);
    }

    #[test]
    fn substitution_replaces_every_occurrence() {
        let mut s = Substitution::new();
        s.bind(atom("p"), Formula::and(var("q"), var("r"))).unwrap();
        let f = Formula::imp(var("p"), var("p"));
        let qr = Formula::and(var("q"), var("r"));
        assert_eq!(f.substitute(&s), Formula::imp(qr.clone(), qr));
    }

    #[test]
    fn labels_are_rejected_in_substitutions() {
        let mut s = Substitution::new();
        let l = Atom::world_label("w").unwrap();
        assert!(s.bind(l.clone(), var("p")).is_err());
        assert!(s.bind(atom("p"), Formula::atom(l)).is_err());
    }
}
