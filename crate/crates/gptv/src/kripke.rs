//! Finite intuitionistic Kripke models and their forcing relation.
//!
//! A model is a finite partial order of worlds with a monotone atomic
//! valuation. The constructor closes the given order pairs reflexively
//! and transitively, so documents only need to list covering edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{Atom, Formula};

/// A world identifier. Alphanumeric/underscore, so every world has a
/// well-formed label atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct WorldId(String);

impl WorldId {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ModelError::InvalidWorldName(name));
        }
        Ok(WorldId(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid world name {0:?}: expected alphanumeric or underscore")]
    InvalidWorldName(String),
    #[error("duplicate world {0}")]
    DuplicateWorld(WorldId),
    #[error("unknown world {0} in order relation")]
    UnknownWorldInOrder(WorldId),
    #[error("unknown world {0} in valuation")]
    UnknownWorldInValuation(WorldId),
    #[error("antisymmetry violation: distinct worlds {0} and {1} reach each other")]
    Antisymmetry(WorldId, WorldId),
    #[error("valuation not monotone: {atom} holds at {lower} but not at {upper}")]
    NonMonotone {
        lower: WorldId,
        upper: WorldId,
        atom: Atom,
    },
    #[error("unknown world {0}")]
    UnknownWorld(WorldId),
}

/// A finite intuitionistic Kripke model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KripkeModel {
    worlds: Vec<WorldId>,
    index: BTreeMap<WorldId, usize>,
    /// Reflexive-transitive closure of the input order; `leq[i][j]`
    /// means world `i` accesses world `j`.
    leq: Vec<Vec<bool>>,
    valuation: Vec<BTreeSet<Atom>>,
}

impl KripkeModel {
    /// Builds and validates a model from covering data: the order pairs
    /// are closed reflexively and transitively, then antisymmetry and
    /// valuation monotonicity are checked.
    pub fn new(
        worlds: Vec<WorldId>,
        order: &[(WorldId, WorldId)],
        valuation: BTreeMap<WorldId, BTreeSet<Atom>>,
    ) -> Result<Self, ModelError> {
        let mut index = BTreeMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let n = worlds.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in order {
            let i = *index
                .get(a)
                .ok_or_else(|| ModelError::UnknownWorldInOrder(a.clone()))?;
            let j = *index
                .get(b)
                .ok_or_else(|| ModelError::UnknownWorldInOrder(b.clone()))?;
            leq[i][j] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(ModelError::Antisymmetry(
                        worlds[i].clone(),
                        worlds[j].clone(),
                    ));
                }
            }
        }
        let mut val = vec![BTreeSet::new(); n];
        for (w, atoms) in valuation {
            let i = *index
                .get(&w)
                .ok_or(ModelError::UnknownWorldInValuation(w))?;
            val[i] = atoms;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] {
                    if let Some(atom) = val[i].difference(&val[j]).next() {
                        return Err(ModelError::NonMonotone {
                            lower: worlds[i].clone(),
                            upper: worlds[j].clone(),
                            atom: atom.clone(),
                        });
                    }
                }
            }
        }
        Ok(KripkeModel {
            worlds,
            index,
            leq,
            valuation: val,
        })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> impl Iterator<Item = &WorldId> + '_ {
        self.worlds.iter()
    }

    pub fn world(&self, i: usize) -> &WorldId {
        &self.worlds[i]
    }

    pub fn world_index(&self, w: &WorldId) -> Result<usize, ModelError> {
        self.index
            .get(w)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(w.clone()))
    }

    /// Whether world `i` accesses world `j` (indices).
    pub fn accessible(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn valuation_at(&self, i: usize) -> &BTreeSet<Atom> {
        &self.valuation[i]
    }

    /// Every atom used anywhere in the valuation.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.valuation.iter().flatten().cloned().collect()
    }

    /// Worlds accessible from `i`, including `i` itself.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.leq[i]
            .iter()
            .enumerate()
            .filter_map(|(j, &up)| up.then_some(j))
    }

    /// The covering edges of the order: the transitive reduction, minus
    /// reflexive pairs. This is what gets written back to documents.
    pub fn covering_pairs(&self) -> Vec<(WorldId, WorldId)> {
        let n = self.worlds.len();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq[i][j] {
                    continue;
                }
                let has_midpoint = (0..n).any(|k| {
                    k != i && k != j && self.leq[i][k] && self.leq[k][j]
                });
                if !has_midpoint {
                    covers.push((self.worlds[i].clone(), self.worlds[j].clone()));
                }
            }
        }
        covers
    }

    fn forces_at(&self, memo: &mut ForcingMemo, i: usize, f: &Formula) -> bool {
        let key = (i, f as *const Formula as usize);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let value = match f {
            Formula::Atom(a) => self.valuation[i].contains(a),
            Formula::Bottom => false,
            Formula::And(l, r) => self.forces_at(memo, i, l) && self.forces_at(memo, i, r),
            Formula::Or(l, r) => self.forces_at(memo, i, l) || self.forces_at(memo, i, r),
            Formula::Imp(l, r) => (0..self.worlds.len())
                .filter(|&j| self.leq[i][j])
                .all(|j| !self.forces_at(memo, j, l) || self.forces_at(memo, j, r)),
        };
        memo.insert(key, value);
        value
    }

    /// Forcing at a world index. Atoms absent from the model are simply
    /// nowhere true; falsum is forced nowhere.
    pub fn forces_index(&self, i: usize, f: &Formula) -> bool {
        let mut memo = ForcingMemo::new();
        self.forces_at(&mut memo, i, f)
    }

    /// Evaluates forcing at every world in one pass, sharing work.
    pub fn forces_all(&self, f: &Formula) -> Vec<bool> {
        let mut memo = ForcingMemo::new();
        (0..self.worlds.len())
            .map(|i| self.forces_at(&mut memo, i, f))
            .collect()
    }

    pub fn forces(&self, w: &WorldId, f: &Formula) -> Result<bool, ModelError> {
        Ok(self.forces_index(self.world_index(w)?, f))
    }

    /// True when the formula is forced at every world.
    pub fn valid(&self, f: &Formula) -> bool {
        self.forces_all(f).into_iter().all(|b| b)
    }
}

type ForcingMemo = std::collections::HashMap<(usize, usize), bool>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn w(name: &str) -> WorldId {
        WorldId::new(name).unwrap()
    }

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    /// Two worlds w0 < w1, with p true only at the top.
    fn two_chain() -> KripkeModel {
        KripkeModel::new(
            vec![w("w0"), w("w1")],
            &[(w("w0"), w("w1"))],
            [
                (w("w0"), BTreeSet::new()),
                (w("w1"), [atom("p")].into()),
            ]
            .into(),
        )
        .unwrap()
    }

    #[test]
    fn single_world_model_is_valid() {
        let m = KripkeModel::new(vec![w("w")], &[], [(w("w"), BTreeSet::new())].into()).unwrap();
        assert_eq!(m.world_count(), 1);
        assert!(m.accessible(0, 0));
    }

    #[test]
    fn cycles_violate_antisymmetry() {
        let err = KripkeModel::new(
            vec![w("a"), w("b")],
            &[(w("a"), w("b")), (w("b"), w("a"))],
            BTreeMap::new(),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::Antisymmetry(w("a"), w("b")));
    }

    #[test]
    fn non_monotone_valuations_are_rejected() {
        let err = KripkeModel::new(
            vec![w("a"), w("b")],
            &[(w("a"), w("b"))],
            [(w("a"), [atom("p")].into()), (w("b"), BTreeSet::new())].into(),
        )
        .unwrap_err();
        assert_eq!(
            err,
            ModelError::NonMonotone {
                lower: w("a"),
                upper: w("b"),
                atom: atom("p"),
            }
        );
    }

    #[test]
    fn unknown_world_in_valuation_is_rejected() {
        let err = KripkeModel::new(
            vec![w("a")],
            &[],
            [(w("zz"), BTreeSet::new())].into(),
        )
        .unwrap_err();
        assert_eq!(err, ModelError::UnknownWorldInValuation(w("zz")));
    }

    #[test]
    fn order_is_closed_transitively() {
        let m = KripkeModel::new(
            vec![w("a"), w("b"), w("c")],
            &[(w("a"), w("b")), (w("b"), w("c"))],
            BTreeMap::new(),
        )
        .unwrap();
        assert!(m.accessible(0, 2));
        assert_eq!(m.covering_pairs(), vec![(w("a"), w("b")), (w("b"), w("c"))]);
    }

    #[test]
    fn excluded_middle_fails_at_the_root_of_a_chain() {
        let m = two_chain();
        let f = parse_formula("p | ~p").unwrap();
        assert!(!m.forces(&w("w0"), &f).unwrap());
        assert!(m.forces(&w("w1"), &f).unwrap());
        assert!(!m.valid(&f));
    }

    #[test]
    fn double_negation_of_p_holds_at_the_root() {
        let m = two_chain();
        let f = parse_formula("~~p").unwrap();
        assert!(m.forces(&w("w0"), &f).unwrap());
    }

    #[test]
    fn bottom_is_forced_nowhere() {
        let m = two_chain();
        for world in [w("w0"), w("w1")] {
            assert!(!m.forces(&world, &Formula::Bottom).unwrap());
        }
    }

    #[test]
    fn identity_implication_is_valid_everywhere() {
        let m = two_chain();
        assert!(m.valid(&parse_formula("p -> p").unwrap()));
        let single = KripkeModel::new(
            vec![w("v")],
            &[],
            [(w("v"), [atom("p")].into())].into(),
        )
        .unwrap();
        assert!(single.valid(&parse_formula("p").unwrap()));
    }

    #[test]
    fn unknown_world_errors() {
        let m = two_chain();
        assert_eq!(
            m.forces(&w("nope"), &Formula::Bottom).unwrap_err(),
            ModelError::UnknownWorld(w("nope"))
        );
    }

    #[test]
    fn absent_atoms_are_nowhere_true() {
        let m = two_chain();
        let f = parse_formula("q").unwrap();
        assert!(!m.forces(&w("w1"), &f).unwrap());
        // ~q is then forced everywhere
        assert!(m.valid(&parse_formula("~q").unwrap()));
    }
}
