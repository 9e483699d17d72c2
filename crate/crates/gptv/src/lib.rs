//! Generalised proof-theoretic validity at desk scale.
//!
//! The crate implements two satisfaction relations over the same
//! propositional language — forcing in finite intuitionistic Kripke
//! models, and forcing in proof-theoretic systems, where a family of
//! atomic rule sets ordered by inclusion plays the role of a frame —
//! together with the translation taking any finite model to an
//! equivalent intuitionistic proof-theoretic system. An independent
//! decision procedure for intuitionistic propositional logic plus
//! bounded countermodel search closes the loop: a formula is valid in
//! every intuitionistic proof-theoretic system exactly when it is an
//! intuitionistic theorem, and every non-theorem receives a finite,
//! re-checkable refutation on both sides of the translation.
//!
//! Module map:
//!
//! - [`formula`], [`parse`]: the propositional language, rendering and
//!   uniform substitution.
//! - [`atomic`]: atomic rules, atomic systems, derivability.
//! - [`pts`]: proof-theoretic systems, their forcing relation, and the
//!   generalised validity check.
//! - [`kripke`], [`search`]: finite Kripke models, their forcing
//!   relation, bounded countermodel search.
//! - [`bridge`]: the model-to-system translation and its verification.
//! - [`ipc`]: the intuitionistic decision procedure.
//! - [`doc`]: JSON document formats.
//! - [`selftest`]: the randomized cross-verification harness.

pub mod atomic;
pub mod bridge;
pub mod doc;
pub mod formula;
pub mod ipc;
pub mod kripke;
pub mod parse;
pub mod pts;
pub mod search;
pub mod selftest;

pub use atomic::{AtomicProp, AtomicRule, AtomicSystem, Signature};
pub use bridge::{translate_model, verify_equivalence, verify_order_embedding, TranslationResult};
pub use formula::{Atom, Formula, Substitution};
pub use ipc::{ipc_provable, decide, DecideOutcome};
pub use kripke::{KripkeModel, WorldId};
pub use parse::parse_formula;
pub use pts::{gptv_check, pts_forces, pts_valid, ProofTheoreticSystem, Verdict};
pub use search::countermodel_search;
