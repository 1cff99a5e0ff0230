//! Ord-Horn definitions by entailed clauses.
//!
//! A relation is Ord-Horn iff it equals the conjunction of the Ord-Horn
//! clauses it entails. Every non-member `w` must be excluded by an entailed
//! clause; the weakest clauses excluding `w` use all equalities of `w` as
//! disequalities plus one literal false in `w` (or none), so trying those
//! decides the question.

use rayon::prelude::*;
use serde::Serialize;

use crate::formulas::{Cmp, Formula};
use crate::orders::{enumerate_weak_orders, WeakOrder};
use crate::relations::{output_names, TemporalRelation};
use crate::error::Result;

/// `(x1 != y1 | ... | xk != yk | x R y)` with `R` one of `<`, `<=`, `=`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OhClause {
    pub diseqs: Vec<(usize, usize)>,
    pub literal: Option<(usize, Cmp, usize)>,
}

impl OhClause {
    pub fn holds(&self, ranks: &[u8]) -> bool {
        self.diseqs.iter().any(|&(a, b)| ranks[a] != ranks[b])
            || self.literal.is_some_and(|(a, c, b)| c.holds(ranks[a], ranks[b]))
    }

    pub fn to_formula<S: AsRef<str>>(&self, names: &[S]) -> Formula {
        let n = |i: usize| names[i].as_ref().to_string();
        let mut items: Vec<Formula> = self.diseqs.iter().map(|&(a, b)| Formula::atom(n(a), Cmp::Ne, n(b))).collect();
        if let Some((a, c, b)) = self.literal {
            items.push(Formula::atom(n(a), c, n(b)));
        }
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::or(items)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum OrdHorn {
    Definable { clauses: Vec<OhClause> },
    /// `orbit` is outside the relation but satisfies every entailed clause.
    NotOrdHorn { orbit: WeakOrder },
}

impl OrdHorn {
    pub fn is_definable(&self) -> bool {
        matches!(self, OrdHorn::Definable { .. })
    }
}

/// Conjunction of clauses; `true` for none.
pub fn clauses_formula<S: AsRef<str>>(clauses: &[OhClause], names: &[S]) -> Formula {
    match clauses {
        [one] => one.to_formula(names),
        _ => Formula::and(clauses.iter().map(|c| c.to_formula(names)).collect()),
    }
}

fn literals_false_in(w: &WeakOrder) -> Vec<Option<(usize, Cmp, usize)>> {
    let n = w.arity();
    let mut out = vec![None];
    for cmp in [Cmp::Eq, Cmp::Lt, Cmp::Le] {
        for a in 0..n {
            for b in 0..n {
                if a == b || (cmp == Cmp::Eq && b < a) {
                    continue;
                }
                if !cmp.holds(w.rank(a), w.rank(b)) {
                    out.push(Some((a, cmp, b)));
                }
            }
        }
    }
    out
}

fn entailed(clause: &OhClause, members: &[&WeakOrder]) -> bool {
    members.iter().all(|m| clause.holds(m.ranks()))
}

/// Decides Ord-Horn definability and returns a pruned clause list.
pub fn ordhorn_definition(r: &TemporalRelation) -> Result<OrdHorn> {
    let n = r.arity();
    let members: Vec<&WeakOrder> = r.orbits().iter().collect();
    let outside: Vec<WeakOrder> = enumerate_weak_orders(n)?.into_iter().filter(|w| !r.contains(w)).collect();
    let found: Vec<std::result::Result<OhClause, WeakOrder>> = outside
        .par_iter()
        .map(|w| {
            let eqs: Vec<(usize, usize)> =
                (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| w.rank(a) == w.rank(b)).collect();
            // Equalities of `w` agreeing with the members considered.
            let relevant: Vec<&WeakOrder> =
                members.iter().copied().filter(|m| eqs.iter().all(|&(a, b)| m.rank(a) == m.rank(b))).collect();
            for literal in literals_false_in(w) {
                let mut clause = OhClause { diseqs: eqs.clone(), literal };
                if !entailed(&clause, &relevant) {
                    continue;
                }
                // Drop disequalities while the clause stays entailed.
                let mut k = 0;
                while k < clause.diseqs.len() {
                    let removed = clause.diseqs.remove(k);
                    if !entailed(&clause, &members) {
                        clause.diseqs.insert(k, removed);
                        k += 1;
                    }
                }
                return Ok(clause);
            }
            Err(w.clone())
        })
        .collect();
    let mut clauses = Vec::new();
    for f in found {
        match f {
            Ok(c) => clauses.push(c),
            Err(orbit) => return Ok(OrdHorn::NotOrdHorn { orbit }),
        }
    }
    clauses.sort();
    clauses.dedup();
    // Remove clauses implied by the others, last first.
    let mut i = clauses.len();
    while i > 0 {
        i -= 1;
        let rest: Vec<&OhClause> = clauses.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c).collect();
        let still_exact = outside.iter().all(|w| rest.iter().any(|c| !c.holds(w.ranks())));
        if still_exact {
            clauses.remove(i);
        }
    }
    Ok(OrdHorn::Definable { clauses })
}

/// The certificate as a formula over the default variable names.
pub fn ordhorn_formula(r: &TemporalRelation, clauses: &[OhClause]) -> Formula {
    clauses_formula(clauses, &output_names(r.arity()))
}
