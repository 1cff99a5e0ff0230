//! Definitions by Boolean combinations of equalities.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::formulas::{Cmp, Formula};
use crate::orders::{enumerate_weak_orders, WeakOrder};
use crate::polymorphisms::equality_pattern;
use crate::relations::TemporalRelation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Equality {
    /// Equality patterns (coordinate -> first equal coordinate) of the relation.
    Definable { patterns: Vec<Vec<u8>> },
    /// Same equality pattern, different membership.
    NotEquality { member: WeakOrder, missing: WeakOrder },
}

impl Equality {
    pub fn is_definable(&self) -> bool {
        matches!(self, Equality::Definable { .. })
    }
}

pub fn equality_definition(r: &TemporalRelation) -> Equality {
    let patterns: BTreeSet<Vec<u8>> = r.orbits().iter().map(equality_pattern).collect();
    let all = enumerate_weak_orders(r.arity()).expect("relation arity is enumerable");
    for w in all {
        if !r.contains(&w) && patterns.contains(&equality_pattern(&w)) {
            let member = r.orbits().iter().find(|m| equality_pattern(m) == equality_pattern(&w)).unwrap().clone();
            return Equality::NotEquality { member, missing: w };
        }
    }
    Equality::Definable { patterns: patterns.into_iter().collect() }
}

/// `x_i = x_rep` for repeated coordinates, pairwise `!=` between
/// representatives.
pub fn pattern_formula<S: AsRef<str>>(pattern: &[u8], names: &[S]) -> Formula {
    let n = |i: usize| names[i].as_ref().to_string();
    let mut items = Vec::new();
    for (i, &p) in pattern.iter().enumerate() {
        if p as usize != i {
            items.push(Formula::atom(n(p as usize), Cmp::Eq, n(i)));
        }
    }
    let reps: Vec<usize> = (0..pattern.len()).filter(|&i| pattern[i] as usize == i).collect();
    for (k, &a) in reps.iter().enumerate() {
        for &b in &reps[k + 1..] {
            items.push(Formula::atom(n(a), Cmp::Ne, n(b)));
        }
    }
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        Formula::and(items)
    }
}

pub fn equality_formula<S: AsRef<str>>(patterns: &[Vec<u8>], names: &[S]) -> Formula {
    match patterns {
        [one] => pattern_formula(one, names),
        _ => Formula::or(patterns.iter().map(|p| pattern_formula(p, names)).collect()),
    }
}
