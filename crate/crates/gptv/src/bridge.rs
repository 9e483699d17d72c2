//! Translation of finite Kripke models into proof-theoretic systems.
//!
//! Each world `w` becomes the atomic system holding an axiom for every
//! atom true at `w`, a tautologous label rule `@s => @s` for every
//! world `s` that accesses `w`, and the ex falso rules over the whole
//! translation signature. The label rules derive nothing new, but they
//! pin the inclusion order among members to the accessibility relation
//! exactly: `S_w ⊆ S_v` holds precisely when `w` accesses `v`, and two
//! distinct worlds never share a member.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::atomic::{AtomicProp, AtomicRule, AtomicSystem, Signature};
use crate::formula::{Atom, Formula};
use crate::kripke::{KripkeModel, WorldId};
use crate::pts::{ProofTheoreticSystem, PtsEvaluator};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BridgeError {
    #[error("formula mentions reserved label atom {0}")]
    LabelAtomInFormula(Atom),
}

/// The label atom `@w` for a world. World names are validated on model
/// construction, so labelling never fails and is injective on the
/// model's worlds.
pub fn world_label(world: &WorldId) -> Atom {
    Atom::world_label(world.name()).expect("world names are valid label bodies")
}

/// A translated model: the proof-theoretic system plus the map from
/// each world to the index of its member system.
#[derive(Clone, Debug)]
pub struct TranslationResult {
    pub pts: ProofTheoreticSystem,
    pub world_map: BTreeMap<WorldId, usize>,
}

impl TranslationResult {
    /// Index of the member a world translates to. Worlds of the source
    /// model are always mapped.
    pub fn member_of(&self, world: &WorldId) -> usize {
        self.world_map[world]
    }
}

fn translate(m: &KripkeModel, user_atoms: Signature, with_labels: bool) -> TranslationResult {
    let mut signature = user_atoms;
    for atom in m.atoms() {
        signature.insert(atom);
    }
    for world in m.worlds() {
        signature.insert(world_label(world));
    }

    let mut systems = Vec::new();
    for (i, world) in m.worlds().enumerate() {
        let mut system = AtomicSystem::empty();
        for atom in m.valuation_at(i) {
            system.insert(AtomicRule::axiom(AtomicProp::Atom(atom.clone())));
        }
        if with_labels {
            for (j, source) in m.worlds().enumerate() {
                if m.accessible(j, i) {
                    system.insert(AtomicRule::tautology(AtomicProp::Atom(world_label(source))));
                }
            }
        }
        systems.push((world.clone(), system.ex_falso_completion(&signature)));
    }

    let pts = ProofTheoreticSystem::new(
        signature,
        systems
            .iter()
            .map(|(w, s)| (format!("S_{w}"), s.clone())),
    )
    .expect("translated rules stay within the translation signature");

    // Members can collapse only if the construction is deliberately
    // corrupted; the map then sends both worlds to the shared member,
    // which the embedding checks report.
    let world_map = systems
        .into_iter()
        .map(|(world, system)| {
            let index = pts
                .members()
                .position(|member| *member.system() == system)
                .expect("every world's rule set is a member");
            (world, index)
        })
        .collect();
    TranslationResult { pts, world_map }
}

/// Translates a model over its own atoms.
pub fn translate_model(m: &KripkeModel) -> TranslationResult {
    translate(m, Signature::empty(), true)
}

/// Translates a model with extra user atoms included in the signature,
/// so formulas mentioning atoms absent from the model can still be
/// evaluated on the result.
pub fn translate_model_over(
    m: &KripkeModel,
    extra_atoms: impl IntoIterator<Item = Atom>,
) -> TranslationResult {
    translate(m, extra_atoms.into_iter().collect(), true)
}

/// Translation with the label rules dropped. This deliberately breaks
/// the construction — models with repeated valuations collapse — and
/// exists so the verification report can be shown catching exactly that
/// failure.
#[doc(hidden)]
pub fn translate_model_unlabeled(m: &KripkeModel) -> TranslationResult {
    translate(m, Signature::empty(), false)
}

/// Result of checking that translation embeds the accessibility order
/// into rule-set inclusion: distinct worlds get distinct members,
/// accessibility implies inclusion, and inclusion implies
/// accessibility.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingReport {
    /// World pairs sharing one member system.
    pub distinctness_violations: Vec<(WorldId, WorldId)>,
    /// Pairs where `w` accesses `v` but `S_w ⊄ S_v`.
    pub order_preservation_violations: Vec<(WorldId, WorldId)>,
    /// Pairs where `S_w ⊆ S_v` but `w` does not access `v`.
    pub order_reflection_violations: Vec<(WorldId, WorldId)>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.distinctness_violations.is_empty()
            && self.order_preservation_violations.is_empty()
            && self.order_reflection_violations.is_empty()
    }
}

impl fmt::Display for EmbeddingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, label: &str, violations: &[(WorldId, WorldId)]| {
            if violations.is_empty() {
                writeln!(f, "PASS {label}")
            } else {
                let pairs: Vec<String> = violations
                    .iter()
                    .map(|(a, b)| format!("({a}, {b})"))
                    .collect();
                writeln!(f, "FAIL {label}: {}", pairs.join(", "))
            }
        };
        line(f, "member distinctness", &self.distinctness_violations)?;
        line(
            f,
            "accessibility implies inclusion",
            &self.order_preservation_violations,
        )?;
        line(
            f,
            "inclusion implies accessibility",
            &self.order_reflection_violations,
        )
    }
}

/// Checks the order embedding on an existing translation.
pub fn verify_embedding(m: &KripkeModel, translation: &TranslationResult) -> EmbeddingReport {
    let mut report = EmbeddingReport::default();
    let worlds: Vec<&WorldId> = m.worlds().collect();
    for (i, &w) in worlds.iter().enumerate() {
        for (j, &v) in worlds.iter().enumerate() {
            if i == j {
                continue;
            }
            let sw = translation.pts.member(translation.member_of(w)).unwrap();
            let sv = translation.pts.member(translation.member_of(v)).unwrap();
            if i < j && sw.system() == sv.system() {
                report.distinctness_violations.push((w.clone(), v.clone()));
            }
            let included = sw.system().is_subset(sv.system());
            if m.accessible(i, j) && !included {
                report
                    .order_preservation_violations
                    .push((w.clone(), v.clone()));
            }
            if included && !m.accessible(i, j) {
                report
                    .order_reflection_violations
                    .push((w.clone(), v.clone()));
            }
        }
    }
    report
}

/// Translates the model and checks the order embedding; the expected
/// report is all-pass for every valid model.
pub fn verify_order_embedding(m: &KripkeModel) -> EmbeddingReport {
    verify_embedding(m, &translate_model(m))
}

/// Checks that the model and its translation force the same formulas:
/// at every world, Kripke forcing of `f` equals forcing at the
/// translated member. The formula may mention atoms outside the model
/// but no reserved label atoms.
pub fn verify_equivalence(m: &KripkeModel, f: &Formula) -> Result<bool, BridgeError> {
    if let Some(label) = f.atoms().into_iter().find(Atom::is_label) {
        return Err(BridgeError::LabelAtomInFormula(label));
    }
    let translation = translate_model_over(m, f.atoms());
    let mut evaluator = PtsEvaluator::new(&translation.pts);
    let kripke_side = m.forces_all(f);
    for (i, world) in m.worlds().enumerate() {
        let pts_side = evaluator
            .forces(translation.member_of(world), f)
            .expect("translation signature covers the formula");
        if kripke_side[i] != pts_side {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::pts::pts_forces;
    use std::collections::BTreeSet;

    fn w(name: &str) -> WorldId {
        WorldId::new(name).unwrap()
    }

    fn atom(name: &str) -> Atom {
        Atom::new(name).unwrap()
    }

    fn atoms(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|n| atom(n)).collect()
    }

    /// Chain w1 < w2 branching to w3 and w4, with valuations p; p,q;
    /// p,q,r; p,q.
    fn wedge_model() -> KripkeModel {
        KripkeModel::new(
            vec![w("w1"), w("w2"), w("w3"), w("w4")],
            &[
                (w("w1"), w("w2")),
                (w("w2"), w("w3")),
                (w("w2"), w("w4")),
            ],
            [
                (w("w1"), atoms(&["p"])),
                (w("w2"), atoms(&["p", "q"])),
                (w("w3"), atoms(&["p", "q", "r"])),
                (w("w4"), atoms(&["p", "q"])),
            ]
            .into(),
        )
        .unwrap()
    }

    fn two_chain() -> KripkeModel {
        KripkeModel::new(
            vec![w("w0"), w("w1")],
            &[(w("w0"), w("w1"))],
            [(w("w0"), BTreeSet::new()), (w("w1"), atoms(&["p"]))].into(),
        )
        .unwrap()
    }

    #[test]
    fn wedge_members_contain_exactly_the_expected_rules() {
        let m = wedge_model();
        let t = translate_model(&m);
        assert_eq!(t.pts.len(), 4);
        assert!(t.pts.is_intuitionistic());

        let sig = t.pts.signature().clone();
        let expect = |axioms: &[&str], labels: &[&str]| {
            let mut s = AtomicSystem::empty();
            for a in axioms {
                s.insert(AtomicRule::axiom(AtomicProp::Atom(atom(a))));
            }
            for l in labels {
                s.insert(AtomicRule::tautology(AtomicProp::Atom(
                    Atom::from_name(l).unwrap(),
                )));
            }
            s.ex_falso_completion(&sig)
        };

        let member = |world: &str| {
            t.pts
                .member(t.member_of(&w(world)))
                .unwrap()
                .system()
                .clone()
        };
        assert_eq!(member("w1"), expect(&["p"], &["@w1"]));
        assert_eq!(member("w2"), expect(&["p", "q"], &["@w1", "@w2"]));
        assert_eq!(
            member("w3"),
            expect(&["p", "q", "r"], &["@w1", "@w2", "@w3"])
        );
        assert_eq!(member("w4"), expect(&["p", "q"], &["@w1", "@w2", "@w4"]));
    }

    #[test]
    fn wedge_embedding_checks_pass() {
        let report = verify_order_embedding(&wedge_model());
        assert!(report.passed(), "{report}");
        assert_eq!(report.to_string().matches("PASS").count(), 3);
    }

    #[test]
    fn single_world_translation() {
        let m = KripkeModel::new(vec![w("w")], &[], BTreeMap::new()).unwrap();
        let t = translate_model(&m);
        assert_eq!(t.pts.len(), 1);
        let expected = AtomicSystem::new([AtomicRule::tautology(AtomicProp::Atom(
            Atom::from_name("@w").unwrap(),
        ))])
        .ex_falso_completion(t.pts.signature());
        assert_eq!(t.pts.member(0).unwrap().system(), &expected);
    }

    #[test]
    fn chain_translation_orders_members_strictly() {
        let m = two_chain();
        let t = translate_model(&m);
        let s0 = t.pts.member(t.member_of(&w("w0"))).unwrap().system();
        let s1 = t.pts.member(t.member_of(&w("w1"))).unwrap().system();
        assert!(s0.is_subset(s1));
        assert_ne!(s0, s1);
        let sig = t.pts.signature();
        assert!(s0.is_ex_falso_complete(sig));
        assert!(s1.is_ex_falso_complete(sig));
    }

    #[test]
    fn equal_valuation_antichain_stays_distinct() {
        let m = KripkeModel::new(
            vec![w("a"), w("b")],
            &[],
            [(w("a"), atoms(&["p"])), (w("b"), atoms(&["p"]))].into(),
        )
        .unwrap();
        let report = verify_order_embedding(&m);
        assert!(report.passed(), "{report}");

        // Dropping the label rules collapses the two members.
        let corrupted = translate_model_unlabeled(&m);
        assert_eq!(corrupted.pts.len(), 1);
        let report = verify_embedding(&m, &corrupted);
        assert!(!report.passed());
        assert_eq!(report.distinctness_violations, vec![(w("a"), w("b"))]);
    }

    #[test]
    fn three_chain_embeds_as_a_three_chain() {
        let m = KripkeModel::new(
            vec![w("a"), w("b"), w("c")],
            &[(w("a"), w("b")), (w("b"), w("c"))],
            BTreeMap::new(),
        )
        .unwrap();
        let t = translate_model(&m);
        let report = verify_embedding(&m, &t);
        assert!(report.passed(), "{report}");
        let sa = t.pts.member(t.member_of(&w("a"))).unwrap().system();
        let sc = t.pts.member(t.member_of(&w("c"))).unwrap().system();
        assert!(sa.is_subset(sc));
        assert!(!sc.is_subset(sa));
    }

    #[test]
    fn translated_members_never_derive_bottom() {
        for m in [wedge_model(), two_chain()] {
            let t = translate_model(&m);
            for member in t.pts.members() {
                assert!(
                    !member.system().derives(&AtomicProp::Bottom),
                    "{} derives bot",
                    member.name()
                );
            }
        }
    }

    #[test]
    fn member_closures_match_valuations_exactly() {
        let m = wedge_model();
        let t = translate_model(&m);
        for (i, world) in m.worlds().enumerate() {
            let closure = t
                .pts
                .member(t.member_of(world))
                .unwrap()
                .system()
                .derivable_closure();
            let expected: BTreeSet<AtomicProp> = m
                .valuation_at(i)
                .iter()
                .cloned()
                .map(AtomicProp::Atom)
                .collect();
            assert_eq!(closure, expected);
        }
    }

    #[test]
    fn label_rules_are_derivationally_inert() {
        let m = wedge_model();
        let t = translate_model(&m);
        for member in t.pts.members() {
            let stripped = AtomicSystem::new(
                member
                    .system()
                    .rules()
                    .filter(|r| {
                        !r.premises().chain([r.conclusion()]).any(|p| {
                            p.atom().is_some_and(Atom::is_label)
                        })
                    })
                    .cloned(),
            );
            assert_eq!(
                stripped.derivable_closure(),
                member.system().derivable_closure()
            );
        }
    }

    #[test]
    fn equivalence_on_the_named_examples() {
        let chain = two_chain();
        assert!(verify_equivalence(&chain, &parse_formula("p | ~p").unwrap()).unwrap());
        assert!(verify_equivalence(&chain, &parse_formula("p -> p").unwrap()).unwrap());
        let wedge = wedge_model();
        assert!(verify_equivalence(&wedge, &parse_formula("q -> p").unwrap()).unwrap());
    }

    #[test]
    fn equivalence_covers_atoms_missing_from_the_model() {
        let chain = two_chain();
        let f = parse_formula("s -> p").unwrap();
        assert!(verify_equivalence(&chain, &f).unwrap());
    }

    #[test]
    fn label_atoms_in_formulas_are_rejected() {
        let chain = two_chain();
        let f = Formula::atom(Atom::from_name("@w0").unwrap());
        assert_eq!(
            verify_equivalence(&chain, &f).unwrap_err(),
            BridgeError::LabelAtomInFormula(Atom::from_name("@w0").unwrap())
        );
    }

    #[test]
    fn forcing_agrees_across_the_wedge_for_sampled_formulas() {
        let m = wedge_model();
        let t = translate_model(&m);
        for text in ["p", "q", "r", "q -> p", "r | ~r", "~~r", "(q -> r) -> r", "bot"] {
            let f = parse_formula(text).unwrap();
            for (i, world) in m.worlds().enumerate() {
                let kripke = m.forces_index(i, &f);
                let translated =
                    pts_forces(&t.pts, t.member_of(world), &f).unwrap();
                assert_eq!(kripke, translated, "disagreement on {text} at {world}");
            }
        }
    }
}
