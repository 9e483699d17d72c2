//! Decision procedure for intuitionistic propositional logic.
//!
//! Backward proof search in a contraction-free sequent calculus in the
//! style of Dyckhoff's LJT/G4ip. The left-implication rule is split by
//! the shape of the implication's antecedent, which makes every rule
//! shrink a well-founded measure; search therefore terminates without
//! loop checking. Strategy: saturate with invertible rules, then try
//! the branching rules, resolving ties by the leftmost principal
//! formula.

use crate::formula::Formula;
use crate::kripke::{KripkeModel, WorldId};
use crate::search::{countermodel_search, SearchError};

/// A single-succedent sequent: a multiset of hypotheses and a goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn proving(goal: Formula) -> Self {
        Sequent {
            antecedent: Vec::new(),
            succedent: goal,
        }
    }
}

/// Decides derivability of `|- f` in intuitionistic propositional
/// logic. Deterministic and total.
pub fn ipc_provable(f: &Formula) -> bool {
    provable(Sequent::proving(f.clone()))
}

fn provable(sequent: Sequent) -> bool {
    let Sequent {
        mut antecedent,
        mut succedent,
    } = sequent;

    // Right implication is invertible: load antecedents until the goal
    // is no longer an implication.
    while let Formula::Imp(lhs, rhs) = succedent {
        antecedent.push(*lhs);
        succedent = *rhs;
    }

    // Right conjunction is invertible; prove both halves.
    if let Formula::And(lhs, rhs) = succedent {
        return provable(Sequent {
            antecedent: antecedent.clone(),
            succedent: *lhs,
        }) && provable(Sequent {
            antecedent,
            succedent: *rhs,
        });
    }

    // Saturate the antecedent with invertible left rules, leftmost
    // principal formula first. Each step strictly shrinks the sequent
    // measure, so this loop terminates.
    let mut scan = 0;
    while scan < antecedent.len() {
        match antecedent[scan].clone() {
            Formula::Bottom => return true,
            Formula::And(lhs, rhs) => {
                antecedent[scan] = *lhs;
                antecedent.push(*rhs);
                scan = 0;
            }
            Formula::Or(lhs, rhs) => {
                antecedent.swap_remove(scan);
                let mut left = antecedent.clone();
                left.push(*lhs);
                let mut right = antecedent;
                right.push(*rhs);
                return provable(Sequent {
                    antecedent: left,
                    succedent: succedent.clone(),
                }) && provable(Sequent {
                    antecedent: right,
                    succedent,
                });
            }
            Formula::Imp(lhs, rhs) => match *lhs {
                // A hypothesis bot -> b is itself provable, hence inert.
                Formula::Bottom => {
                    antecedent.swap_remove(scan);
                    scan = 0;
                }
                Formula::Atom(ref a) => {
                    if antecedent.iter().any(|g| matches!(g, Formula::Atom(b) if b == a)) {
                        antecedent[scan] = *rhs;
                        scan = 0;
                    } else {
                        scan += 1;
                    }
                }
                Formula::And(c, d) => {
                    antecedent[scan] = Formula::imp(*c, Formula::imp(*d, *rhs));
                    scan = 0;
                }
                Formula::Or(c, d) => {
                    antecedent[scan] = Formula::imp(*c, (*rhs).clone());
                    antecedent.push(Formula::imp(*d, *rhs));
                    scan = 0;
                }
                Formula::Imp(..) => scan += 1,
            },
            Formula::Atom(_) => scan += 1,
        }
    }

    // Axiom: an atomic goal present among the hypotheses.
    if matches!(succedent, Formula::Atom(_)) && antecedent.contains(&succedent) {
        return true;
    }

    // Branching rules. Right disjunction first, then attack each nested
    // implication (a -> b) -> c: prove a -> b with b -> c in place of
    // the hypothesis, then continue from c.
    if let Formula::Or(ref lhs, ref rhs) = succedent {
        if provable(Sequent {
            antecedent: antecedent.clone(),
            succedent: (**lhs).clone(),
        }) || provable(Sequent {
            antecedent: antecedent.clone(),
            succedent: (**rhs).clone(),
        }) {
            return true;
        }
    }

    for i in 0..antecedent.len() {
        let Formula::Imp(ref lhs, ref rhs) = antecedent[i] else {
            continue;
        };
        let Formula::Imp(ref a, ref b) = **lhs else {
            continue;
        };
        let (a, b, c) = ((**a).clone(), (**b).clone(), (**rhs).clone());
        let mut rest: Vec<Formula> = antecedent.clone();
        rest.remove(i);

        let mut major = rest.clone();
        major.push(Formula::imp(b.clone(), c.clone()));
        let major_ok = provable(Sequent {
            antecedent: major,
            succedent: Formula::imp(a, b),
        });
        if major_ok {
            let mut minor = rest;
            minor.push(c);
            if provable(Sequent {
                antecedent: minor,
                succedent: succedent.clone(),
            }) {
                return true;
            }
        }
    }

    false
}

/// Outcome of [`decide`]: a proof, a Kripke countermodel, or budget
/// exhaustion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecideOutcome {
    Valid,
    Refuted { model: KripkeModel, world: WorldId },
    Unknown(String),
}

/// Decides the formula, producing a countermodel for non-theorems by
/// bounded search. A non-theorem with no countermodel within the bound
/// yields `Unknown` carrying a diagnostic; for desk-scale formulas this
/// indicates an internal inconsistency between prover and search.
pub fn decide(f: &Formula, max_worlds: usize) -> Result<DecideOutcome, SearchError> {
    if ipc_provable(f) {
        return Ok(DecideOutcome::Valid);
    }
    match countermodel_search(f, max_worlds)? {
        Some((model, world)) => Ok(DecideOutcome::Refuted { model, world }),
        None => Ok(DecideOutcome::Unknown(format!(
            "internal-inconsistency candidate: `{f}` is not provable, yet no countermodel \
             with at most {max_worlds} worlds exists; either the formula needs a larger \
             frame or prover and search disagree"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn provable_text(text: &str) -> bool {
        ipc_provable(&parse_formula(text).unwrap())
    }

    #[test]
    fn axiom_schemas_are_provable() {
        assert!(provable_text("p -> (q -> p)"));
        assert!(provable_text("(p -> (q -> r)) -> ((p -> q) -> (p -> r))"));
        assert!(provable_text("p -> p | q"));
        assert!(provable_text("p & q -> p"));
        assert!(provable_text("bot -> p"));
        assert!(provable_text("p -> ~~p"));
    }

    #[test]
    fn classical_principles_are_not_provable() {
        assert!(!provable_text("p | ~p"));
        assert!(!provable_text("~~p -> p"));
        assert!(!provable_text("((p -> q) -> p) -> p"));
        assert!(!provable_text("(p -> q) | (q -> p)"));
        assert!(!provable_text("~p | ~~p"));
    }

    #[test]
    fn glivenko_style_double_negations_hold() {
        assert!(provable_text("~~(p | ~p)"));
        assert!(provable_text("~~(((p -> q) -> p) -> p)"));
        assert!(provable_text("~~~p -> ~p"));
    }

    #[test]
    fn goal_side_bottom_is_not_assumed() {
        assert!(!provable_text("bot"));
        assert!(!provable_text("~p"));
        assert!(provable_text("~bot"));
        assert!(provable_text("p -> (~p -> q)"));
    }

    #[test]
    fn vacuous_implication_hypotheses_are_inert() {
        assert!(provable_text("(bot -> q) -> p -> p"));
        assert!(!provable_text("(bot -> q) -> q"));
    }

    #[test]
    fn decide_returns_witnesses() {
        let valid = parse_formula("p -> p").unwrap();
        assert_eq!(decide(&valid, 2).unwrap(), DecideOutcome::Valid);

        let lem = parse_formula("p | ~p").unwrap();
        match decide(&lem, 3).unwrap() {
            DecideOutcome::Refuted { model, world } => {
                assert!(!model.forces(&world, &lem).unwrap());
                assert_eq!(model.world_count(), 2);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn linearity_needs_a_three_world_fork() {
        let f = parse_formula("(p -> q) | (q -> p)").unwrap();
        assert_eq!(countermodel_search(&f, 2).unwrap(), None);
        match decide(&f, 3).unwrap() {
            DecideOutcome::Refuted { model, world } => {
                assert_eq!(model.world_count(), 3);
                assert!(!model.forces(&world, &f).unwrap());
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn kreisel_putnam_shape_is_refuted_at_four_worlds() {
        let f = parse_formula("(~p -> (q | r)) -> ((~p -> q) | (~p -> r))").unwrap();
        assert!(!ipc_provable(&f));
        // Minimal countermodels for this shape have four worlds.
        assert_eq!(countermodel_search(&f, 3).unwrap(), None);
        match decide(&f, 4).unwrap() {
            DecideOutcome::Refuted { model, world } => {
                assert_eq!(model.world_count(), 4);
                assert!(!model.forces(&world, &f).unwrap());
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn exhausted_budget_is_reported_as_unknown() {
        // Refutable, but only on frames larger than the given bound.
        let f = parse_formula("(p -> q) | (q -> p)").unwrap();
        match decide(&f, 2).unwrap() {
            DecideOutcome::Unknown(note) => assert!(note.contains("2")),
            other => panic!("expected unknown, got {other:?}"),
        }
    }
}
