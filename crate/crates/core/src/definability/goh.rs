//! Guarded Ord-Horn formulas: recognition and bounded synthesis.
//!
//! A guard distributes over conjunction,
//! `G(P, a & b) = G(P, a) & G(P, b)`, so every GOH formula is equivalent to
//! a conjunction of chains `G(P1, G(P2, ... basic))`. The search enumerates
//! chains up to the depth and guard-width bounds, keeps those containing the
//! target, and covers the non-members with at most `C` of them.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::bits::{orbit_table, BitSet};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::formulas::{relation_of, Cmp, Formula};
use crate::relations::{output_names, TemporalRelation};

use super::ordhorn::ordhorn_definition;

/// GOH formula over variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum GohFormula {
    Eq { x: usize, y: usize },
    Le { x: usize, y: usize },
    /// `x1 != y1 | ... | xp != yp`.
    Diseqs { pairs: Vec<(usize, usize)> },
    /// `(x != x2 | ...) | x < y | (y != y2 | ...)`.
    GuardedLt { x: usize, xs: Vec<usize>, y: usize, ys: Vec<usize> },
    Conj { items: Vec<GohFormula> },
    /// `x1 <= y1 & ... & (x1 != y1 | ... | inner)`.
    Guard { pairs: Vec<(usize, usize)>, inner: Box<GohFormula> },
}

impl GohFormula {
    pub fn to_formula<S: AsRef<str>>(&self, names: &[S]) -> Formula {
        let n = |i: usize| names[i].as_ref().to_string();
        let ne = |a: usize, b: usize| Formula::atom(n(a), Cmp::Ne, n(b));
        let or = |mut items: Vec<Formula>| if items.len() == 1 { items.pop().unwrap() } else { Formula::or(items) };
        match self {
            GohFormula::Eq { x, y } => Formula::atom(n(*x), Cmp::Eq, n(*y)),
            GohFormula::Le { x, y } => Formula::atom(n(*x), Cmp::Le, n(*y)),
            GohFormula::Diseqs { pairs } => or(pairs.iter().map(|&(a, b)| ne(a, b)).collect()),
            GohFormula::GuardedLt { x, xs, y, ys } => {
                let mut items: Vec<Formula> = xs.iter().map(|&v| ne(*x, v)).collect();
                items.push(Formula::atom(n(*x), Cmp::Lt, n(*y)));
                items.extend(ys.iter().map(|&v| ne(*y, v)));
                or(items)
            }
            GohFormula::Conj { items } => match items.as_slice() {
                [one] => one.to_formula(names),
                _ => Formula::and(items.iter().map(|i| i.to_formula(names)).collect()),
            },
            GohFormula::Guard { pairs, inner } => {
                let mut items: Vec<Formula> = pairs.iter().map(|&(a, b)| Formula::atom(n(a), Cmp::Le, n(b))).collect();
                let mut disj: Vec<Formula> = pairs.iter().map(|&(a, b)| ne(a, b)).collect();
                disj.push(inner.to_formula(names));
                items.push(Formula::or(disj));
                Formula::and(items)
            }
        }
    }

    /// Number of atoms, used to order candidates.
    pub fn size(&self) -> usize {
        match self {
            GohFormula::Eq { .. } | GohFormula::Le { .. } => 1,
            GohFormula::Diseqs { pairs } => pairs.len(),
            GohFormula::GuardedLt { xs, ys, .. } => 1 + xs.len() + ys.len(),
            GohFormula::Conj { items } => items.iter().map(GohFormula::size).sum(),
            GohFormula::Guard { pairs, inner } => 2 * pairs.len() + inner.size(),
        }
    }
}

// ---------------------------------------------------------------------------
// Recognition

fn atom_parts(f: &Formula) -> Option<(&str, Cmp, &str)> {
    match f {
        Formula::Atom { lhs, cmp, rhs } => Some((lhs, *cmp, rhs)),
        _ => None,
    }
}

/// Disjunction of literals in one of the two basic disjunctive shapes.
fn is_basic_disjunction(items: &[&Formula]) -> bool {
    let mut lts = Vec::new();
    let mut nes = Vec::new();
    for f in items {
        match atom_parts(f) {
            Some((a, Cmp::Ne, b)) => nes.push((a, b)),
            Some((a, Cmp::Lt, b)) => lts.push((a, b)),
            _ => return false,
        }
    }
    match lts.as_slice() {
        [] => !nes.is_empty(),
        [(x, y)] => nes.iter().all(|&(a, b)| a == *x || b == *x || a == *y || b == *y),
        _ => false,
    }
}

/// Flattens nested disjunctions.
fn disjuncts(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::Or { items } => items.iter().flat_map(disjuncts).collect(),
        other => vec![other],
    }
}

/// Whether `f` is a GOH formula, up to associativity and commutativity of
/// `&` and `|`. A guard's `x <= y` conjuncts are looked up among the
/// siblings of its disjunction.
pub fn goh_recognize(f: &Formula) -> bool {
    recognize(f, &BTreeSet::new())
}

fn recognize(f: &Formula, guards: &BTreeSet<(String, String)>) -> bool {
    match f {
        Formula::Atom { .. } => true,
        Formula::And { .. } => {
            let flat: Vec<&Formula> = conjuncts_flat(f);
            let mut les = guards.clone();
            for c in &flat {
                if let Some((a, Cmp::Le, b)) = atom_parts(c) {
                    les.insert((a.to_string(), b.to_string()));
                }
            }
            flat.iter().all(|c| recognize(c, &les))
        }
        Formula::Or { .. } => {
            let items = disjuncts(f);
            if is_basic_disjunction(&items) {
                return true;
            }
            // Split into a guard (disequalities backed by sibling `<=`) and
            // a GOH remainder.
            let eligible: Vec<usize> = (0..items.len())
                .filter(|&i| {
                    matches!(atom_parts(items[i]), Some((a, Cmp::Ne, b))
                        if guards.contains(&(a.to_string(), b.to_string())) || guards.contains(&(b.to_string(), a.to_string())))
                })
                .collect();
            if eligible.len() > 16 {
                return false;
            }
            for mask in 1u32..(1 << eligible.len()) {
                let chosen: BTreeSet<usize> = (0..eligible.len()).filter(|k| mask >> k & 1 == 1).map(|k| eligible[k]).collect();
                let rest: Vec<&Formula> = (0..items.len()).filter(|i| !chosen.contains(i)).map(|i| items[i]).collect();
                let ok = match rest.as_slice() {
                    [] => false,
                    [one] => recognize(one, guards),
                    many => is_basic_disjunction(many),
                };
                if ok {
                    return true;
                }
            }
            false
        }
        _ => false,
    }
}

fn conjuncts_flat(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And { items } => items.iter().flat_map(conjuncts_flat).collect(),
        other => vec![other],
    }
}

// ---------------------------------------------------------------------------
// Search

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum GohOutcome {
    Found { formula: GohFormula, text: String },
    /// Not a proof that no GOH definition exists.
    NotFoundWithinBound { depth: usize, conjuncts: usize, width: usize },
}

impl GohOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, GohOutcome::Found { .. })
    }
}

/// Largest arity the GOH search accepts.
pub const MAX_GOH_ARITY: usize = 4;

struct Universe {
    n: usize,
    len: usize,
    ranks: Vec<Vec<u8>>,
}

impl Universe {
    fn new(n: usize) -> Self {
        let t = orbit_table(n);
        Universe { n, len: t.len(), ranks: t.orders.iter().map(|w| w.ranks().to_vec()).collect() }
    }

    fn bits(&self, pred: impl Fn(&[u8]) -> bool) -> BitSet {
        let mut b = BitSet::new(self.len);
        for (i, r) in self.ranks.iter().enumerate() {
            if pred(r) {
                b.set(i);
            }
        }
        b
    }
}

fn subsets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for item in items {
        let mut more = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut t = s.clone();
                t.push(item.clone());
                more.push(t);
            }
        }
        out.extend(more);
    }
    out.sort_by_key(Vec::len);
    out
}

fn basics(u: &Universe) -> Vec<(GohFormula, BitSet)> {
    let n = u.n;
    let mut out = Vec::new();
    let ordered: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    let unordered: Vec<(usize, usize)> = ordered.iter().copied().filter(|(a, b)| a < b).collect();
    for &(x, y) in &unordered {
        out.push((GohFormula::Eq { x, y }, u.bits(|r| r[x] == r[y])));
    }
    for &(x, y) in &ordered {
        out.push((GohFormula::Le { x, y }, u.bits(|r| r[x] <= r[y])));
    }
    for pairs in subsets(&unordered, unordered.len()).into_iter().skip(1) {
        let b = u.bits(|r| pairs.iter().any(|&(a, c)| r[a] != r[c]));
        out.push((GohFormula::Diseqs { pairs }, b));
    }
    if n == 1 {
        out.push((GohFormula::Diseqs { pairs: vec![(0, 0)] }, BitSet::new(u.len)));
    }
    for &(x, y) in &ordered {
        let others_x: Vec<usize> = (0..n).filter(|&v| v != x).collect();
        let others_y: Vec<usize> = (0..n).filter(|&v| v != y).collect();
        for xs in subsets(&others_x, n) {
            for ys in subsets(&others_y, n) {
                let b = u.bits(|r| r[x] < r[y] || xs.iter().any(|&v| r[v] != r[x]) || ys.iter().any(|&v| r[v] != r[y]));
                out.push((GohFormula::GuardedLt { x, xs: xs.clone(), y, ys }, b));
            }
        }
    }
    out
}

fn dedup(items: Vec<(GohFormula, BitSet)>, seen: &mut HashMap<BitSet, ()>) -> Vec<(GohFormula, BitSet)> {
    let mut items = items;
    items.sort_by_key(|(f, _)| f.size());
    let mut out = Vec::new();
    for (f, b) in items {
        if seen.insert(b.clone(), ()).is_none() {
            out.push((f, b));
        }
    }
    out
}

type Guard = (Vec<(usize, usize)>, BitSet, BitSet);

/// Chains of guard depth `0..=depth`, one per distinct relation, smallest
/// formula first.
fn chains(u: &Universe, bounds: &Bounds) -> Vec<(GohFormula, BitSet)> {
    let mut seen = HashMap::new();
    let level0 = dedup(basics(u), &mut seen);
    let ordered: Vec<(usize, usize)> =
        (0..u.n).flat_map(|a| (0..u.n).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    // Guard pairs with the orbits where all hold as `<=` and where one is `!=`.
    let guards: Vec<Guard> = subsets(&ordered, bounds.guard_width)
        .into_iter()
        .skip(1)
        .map(|p| {
            let le = u.bits(|r| p.iter().all(|&(a, b)| r[a] <= r[b]));
            let ne = u.bits(|r| p.iter().any(|&(a, b)| r[a] != r[b]));
            (p, le, ne)
        })
        .collect();
    let mut all = level0.clone();
    let mut frontier = level0;
    for _ in 0..bounds.goh_depth {
        let mut next = Vec::new();
        for (p, le, ne) in &guards {
            for (f, b) in &frontier {
                let bits = le.and(&ne.or(b));
                next.push((GohFormula::Guard { pairs: p.clone(), inner: Box::new(f.clone()) }, bits));
            }
        }
        frontier = dedup(next, &mut seen);
        all.extend(frontier.iter().cloned());
    }
    all
}

/// Searches for a GOH definition of an Ord-Horn relation within the bounds.
pub fn goh_search(r: &TemporalRelation, bounds: &Bounds) -> Result<GohOutcome> {
    bounds.validate()?;
    if r.arity() > MAX_GOH_ARITY {
        return Err(Error::ArityBoundExceeded { arity: r.arity(), bound: MAX_GOH_ARITY });
    }
    if !ordhorn_definition(r)?.is_definable() {
        return Err(Error::NotOrdHorn);
    }
    let u = Universe::new(r.arity());
    let target = r.to_bits();
    let names = output_names(r.arity());
    let finish = |formula: GohFormula| -> Result<GohOutcome> {
        let text = formula.to_formula(&names);
        if relation_of(&text, &names)? != *r {
            return Err(Error::InternalInconsistency(format!("GOH certificate {text} does not define {}", r.label())));
        }
        Ok(GohOutcome::Found { text: text.to_string(), formula })
    };
    if target.all() {
        return finish(GohFormula::Conj { items: Vec::new() });
    }
    let candidates: Vec<(GohFormula, BitSet)> =
        chains(&u, bounds).into_iter().filter(|(_, b)| target.is_subset(b) && !b.all()).collect();
    if target.none() {
        if let Some((f, _)) = candidates.iter().find(|(_, b)| b.none()) {
            return finish(f.clone());
        }
    }
    // Exclusion sets; drop candidates dominated by another.
    let excl: Vec<BitSet> = candidates.iter().map(|(_, b)| b.not()).collect();
    let keep: Vec<usize> = (0..candidates.len())
        .filter(|&i| !(0..candidates.len()).any(|j| j != i && excl[i].is_subset(&excl[j]) && (excl[i] != excl[j] || j < i)))
        .collect();
    let nonmembers = target.not();
    let covering: Vec<Vec<usize>> = nonmembers
        .ones()
        .map(|o| keep.iter().copied().filter(|&i| excl[i].get(o)).collect())
        .collect();
    let index: HashMap<usize, usize> = nonmembers.ones().enumerate().map(|(k, o)| (o, k)).collect();

    fn dfs(
        uncovered: &BitSet,
        budget: usize,
        chosen: &mut Vec<usize>,
        excl: &[BitSet],
        covering: &[Vec<usize>],
        index: &HashMap<usize, usize>,
    ) -> bool {
        let Some(o) = uncovered.ones().next() else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        for &c in &covering[index[&o]] {
            chosen.push(c);
            let rest = uncovered.and(&excl[c].not());
            if dfs(&rest, budget - 1, chosen, excl, covering, index) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    for budget in 1..=bounds.goh_conjuncts {
        let mut chosen = Vec::new();
        if dfs(&nonmembers, budget, &mut chosen, &excl, &covering, &index) {
            let mut items: Vec<GohFormula> = chosen.into_iter().map(|i| candidates[i].0.clone()).collect();
            let formula = if items.len() == 1 { items.pop().unwrap() } else { GohFormula::Conj { items } };
            return finish(formula);
        }
    }
    Ok(GohOutcome::NotFoundWithinBound {
        depth: bounds.goh_depth,
        conjuncts: bounds.goh_conjuncts,
        width: bounds.guard_width,
    })
}
