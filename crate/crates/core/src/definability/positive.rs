//! Positive definitions (`&`, `|`, `<=` only).
//!
//! Positive formulas are monotone in the set of true `<=` atoms, and that set
//! only grows when two adjacent blocks of an orbit merge. A relation is
//! positive iff it is closed under such merges; the certificate is the
//! disjunction of the atom conjunctions of its minimal orbits, each weakened
//! greedily.

use serde::Serialize;

use crate::formulas::{Cmp, Formula};
use crate::orders::{enumerate_weak_orders, WeakOrder};
use crate::relations::TemporalRelation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Positive {
    /// Minimal orbits, and `<=` conjunctions whose disjunction defines
    /// the relation.
    Definable { minimal: Vec<WeakOrder>, disjuncts: Vec<Vec<(usize, usize)>> },
    /// `member` is in the relation, its coarsening `coarsening` is not.
    NotPositive { member: WeakOrder, coarsening: WeakOrder },
}

impl Positive {
    pub fn is_definable(&self) -> bool {
        matches!(self, Positive::Definable { .. })
    }
}

/// Orbits obtained by merging two adjacent blocks.
pub fn coarsenings(w: &WeakOrder) -> Vec<WeakOrder> {
    (1..w.num_blocks() as u8)
        .map(|k| WeakOrder::from_ranks(w.ranks().iter().map(|&r| if r >= k { r - 1 } else { r }).collect()).expect("surjective"))
        .collect()
}

/// Whether every `<=` atom true in `a` is true in `b`.
pub fn atoms_included(a: &WeakOrder, b: &WeakOrder) -> bool {
    let n = a.arity();
    (0..n).all(|i| (0..n).all(|j| a.rank(i) > a.rank(j) || b.rank(i) <= b.rank(j)))
}

/// `<=` atoms `(i, j)` true in an orbit, `i != j`.
pub fn orbit_le_atoms(w: &WeakOrder) -> Vec<(usize, usize)> {
    let n = w.arity();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i != j && w.rank(i) <= w.rank(j)).collect()
}

fn up_set_inside(atoms: &[(usize, usize)], r: &TemporalRelation, all: &[WeakOrder]) -> bool {
    all.iter().all(|w| r.contains(w) || atoms.iter().any(|&(i, j)| w.rank(i) > w.rank(j)))
}

pub fn positive_definition(r: &TemporalRelation) -> Positive {
    for w in r.orbits() {
        if let Some(c) = coarsenings(w).into_iter().find(|c| !r.contains(c)) {
            return Positive::NotPositive { member: w.clone(), coarsening: c };
        }
    }
    let minimal: Vec<WeakOrder> = r
        .orbits()
        .iter()
        .filter(|w| !r.orbits().iter().any(|v| v != *w && atoms_included(v, w)))
        .cloned()
        .collect();
    // Weaken each disjunct while its up-set stays inside the relation.
    let all = enumerate_weak_orders(r.arity()).expect("relation arity is enumerable");
    let mut disjuncts: Vec<Vec<(usize, usize)>> = Vec::new();
    for w in &minimal {
        let mut atoms = orbit_le_atoms(w);
        let mut k = 0;
        while k < atoms.len() {
            let removed = atoms.remove(k);
            if !up_set_inside(&atoms, r, &all) {
                atoms.insert(k, removed);
                k += 1;
            }
        }
        if !disjuncts.contains(&atoms) {
            disjuncts.push(atoms);
        }
    }
    let subsumed = |i: usize| {
        disjuncts.iter().enumerate().any(|(j, d)| j != i && d.len() < disjuncts[i].len() && d.iter().all(|a| disjuncts[i].contains(a)))
    };
    let keep: Vec<bool> = (0..disjuncts.len()).map(|i| !subsumed(i)).collect();
    let disjuncts = disjuncts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(d, _)| d).collect();
    Positive::Definable { minimal, disjuncts }
}

pub fn positive_formula<S: AsRef<str>>(disjuncts: &[Vec<(usize, usize)>], names: &[S]) -> Formula {
    let n = |i: usize| names[i].as_ref().to_string();
    let conj = |atoms: &[(usize, usize)]| {
        let mut items: Vec<Formula> = atoms.iter().map(|&(i, j)| Formula::atom(n(i), Cmp::Le, n(j))).collect();
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::and(items)
        }
    };
    match disjuncts {
        [one] => conj(one),
        _ => Formula::or(disjuncts.iter().map(|d| conj(d)).collect()),
    }
}
