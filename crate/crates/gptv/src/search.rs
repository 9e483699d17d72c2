//! Bounded countermodel search over finite Kripke models.
//!
//! Enumerates partial orders up to isomorphism, pairs each with every
//! monotone valuation over the formula's atoms (again up to
//! isomorphism), and reports the first world where the formula fails.
//! The enumeration order is fixed, so the returned witness is
//! deterministic: smallest model first, canonical encodings in
//! ascending order, worlds in index order.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::formula::{Atom, Formula};
use crate::kripke::{KripkeModel, WorldId};

/// Largest world count the enumerator accepts; poset enumeration past
/// this is no longer desk scale.
pub const MAX_ENUMERATED_WORLDS: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("countermodel search over {requested} worlds exceeds the enumeration cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

/// A partial order on `n` indexed points, as a reflexive-transitive
/// adjacency matrix packed row-major into a `u64`.
#[derive(Clone, Debug)]
struct Poset {
    n: usize,
    leq: Vec<Vec<bool>>,
    /// Relabelings that leave the order unchanged.
    automorphisms: Vec<Vec<usize>>,
}

fn encode(n: usize, leq: &[Vec<bool>]) -> u64 {
    let mut bits = 0u64;
    for i in 0..n {
        for j in 0..n {
            bits <<= 1;
            if leq[i][j] {
                bits |= 1;
            }
        }
    }
    bits
}

fn permute(n: usize, leq: &[Vec<bool>], perm: &[usize]) -> Vec<Vec<bool>> {
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = leq[perm[i]][perm[j]];
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut perms = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &perms {
            for v in 0..n {
                if !p.contains(&v) {
                    let mut q = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
        }
        perms = next;
    }
    perms
}

/// All partial orders on `n` points up to isomorphism, sorted by their
/// canonical encoding. Every finite poset admits a labeling where the
/// strict order only ascends in index, so scanning upper-triangular
/// transitively closed relations covers every isomorphism class.
fn enumerate_posets(n: usize) -> Vec<Poset> {
    let perms = permutations(n);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut canonical: BTreeMap<u64, Vec<Vec<bool>>> = BTreeMap::new();
    for mask in 0..(1u32 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                leq[i][j] = true;
            }
        }
        let transitive = (0..n).all(|i| {
            (0..n).all(|j| {
                !leq[i][j] || (0..n).all(|k| !leq[j][k] || leq[i][k])
            })
        });
        if !transitive {
            continue;
        }
        let min_code = perms
            .iter()
            .map(|p| encode(n, &permute(n, &leq, p)))
            .min()
            .expect("at least the identity permutation");
        canonical.entry(min_code).or_insert_with(|| {
            let best = perms
                .iter()
                .map(|p| permute(n, &leq, p))
                .min_by_key(|m| encode(n, m))
                .unwrap();
            best
        });
    }
    canonical
        .into_values()
        .map(|leq| {
            let automorphisms = perms
                .iter()
                .filter(|p| permute(n, &leq, p) == leq)
                .cloned()
                .collect();
            Poset {
                n,
                leq,
                automorphisms,
            }
        })
        .collect()
}

fn poset_catalog(n: usize) -> &'static [Poset] {
    static CATALOGS: OnceLock<Vec<OnceLock<Vec<Poset>>>> = OnceLock::new();
    let catalogs = CATALOGS.get_or_init(|| {
        (0..=MAX_ENUMERATED_WORLDS).map(|_| OnceLock::new()).collect()
    });
    catalogs[n].get_or_init(|| enumerate_posets(n))
}

impl Poset {
    /// Upward-closed world sets, each packed into a bitmask, ascending.
    fn up_sets(&self) -> Vec<u32> {
        (0u32..(1 << self.n))
            .filter(|&mask| {
                (0..self.n).all(|i| {
                    mask & (1 << i) == 0
                        || (0..self.n).all(|j| !self.leq[i][j] || mask & (1 << j) != 0)
                })
            })
            .collect()
    }

    /// Keeps one valuation per orbit of the automorphism group.
    fn is_canonical_valuation(&self, assignment: &[u32]) -> bool {
        self.automorphisms.iter().all(|perm| {
            let relabeled: Vec<u32> = assignment
                .iter()
                .map(|&mask| {
                    let mut out = 0u32;
                    for i in 0..self.n {
                        if mask & (1 << perm[i]) != 0 {
                            out |= 1 << i;
                        }
                    }
                    out
                })
                .collect();
            assignment <= relabeled.as_slice()
        })
    }

    fn to_model(&self, atoms: &[Atom], assignment: &[u32]) -> KripkeModel {
        let worlds: Vec<WorldId> = (0..self.n)
            .map(|i| WorldId::new(format!("k{i}")).unwrap())
            .collect();
        let mut order = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.leq[i][j] {
                    order.push((worlds[i].clone(), worlds[j].clone()));
                }
            }
        }
        let valuation: BTreeMap<WorldId, BTreeSet<Atom>> = (0..self.n)
            .map(|i| {
                let at_world: BTreeSet<Atom> = atoms
                    .iter()
                    .enumerate()
                    .filter(|(a, _)| assignment[*a] & (1 << i) != 0)
                    .map(|(_, atom)| atom.clone())
                    .collect();
                (worlds[i].clone(), at_world)
            })
            .collect();
        KripkeModel::new(worlds, &order, valuation)
            .expect("enumerated posets with up-set valuations are always valid models")
    }
}

fn assignments(up_sets: &[u32], arity: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * up_sets.len());
        for prefix in &out {
            for &mask in up_sets {
                let mut assignment = prefix.clone();
                assignment.push(mask);
                next.push(assignment);
            }
        }
        out = next;
    }
    out
}

/// Searches for a model and world where the formula is not forced,
/// trying one through `max_worlds` worlds. Returns the first witness in
/// enumeration order, or `None` when every enumerated model forces the
/// formula everywhere.
pub fn countermodel_search(
    f: &Formula,
    max_worlds: usize,
) -> Result<Option<(KripkeModel, WorldId)>, SearchError> {
    if max_worlds == 0 || max_worlds > MAX_ENUMERATED_WORLDS {
        return Err(SearchError::CapExceeded {
            requested: max_worlds,
            cap: MAX_ENUMERATED_WORLDS,
        });
    }
    let atoms: Vec<Atom> = f.atoms().into_iter().collect();
    for n in 1..=max_worlds {
        for poset in poset_catalog(n) {
            let up_sets = poset.up_sets();
            for assignment in assignments(&up_sets, atoms.len()) {
                if !poset.is_canonical_valuation(&assignment) {
                    continue;
                }
                let model = poset.to_model(&atoms, &assignment);
                let forced = model.forces_all(f);
                if let Some(i) = forced.iter().position(|&b| !b) {
                    let world = model.world(i).clone();
                    return Ok(Some((model, world)));
                }
            }
        }
    }
    Ok(None)
}
