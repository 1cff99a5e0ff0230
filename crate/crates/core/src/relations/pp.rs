use std::collections::BTreeSet;

use super::{Language, TemporalRelation};
use crate::error::{Error, Result};
use crate::formulas::{Cmp, Formula, Quantifier};
use crate::orders::{joins, WeakOrder};
use crate::relations::catalog;

/// A relation over named variables; `vars` may be empty (a truth value).
#[derive(Debug, Clone)]
pub(crate) struct Table {
    pub vars: Vec<String>,
    pub rows: BTreeSet<WeakOrder>,
}

impl Table {
    fn unit() -> Self {
        Table { vars: Vec::new(), rows: [WeakOrder::unit()].into_iter().collect() }
    }

    fn join(&self, other: &Table) -> Result<Table> {
        let mut vars = None;
        let mut rows = BTreeSet::new();
        for a in &self.rows {
            for b in &other.rows {
                let (union, js) = joins(&self.vars, a, &other.vars, b)?;
                rows.extend(js);
                vars.get_or_insert(union);
            }
        }
        let vars = vars.unwrap_or_else(|| {
            let mut v = self.vars.clone();
            v.extend(other.vars.iter().filter(|x| !self.vars.contains(x)).cloned());
            v
        });
        Ok(Table { vars, rows })
    }

    fn project(&self, keep: &[String]) -> Table {
        let pos: Vec<usize> = keep.iter().map(|k| self.vars.iter().position(|v| v == k).unwrap()).collect();
        Table {
            vars: keep.to_vec(),
            rows: self.rows.iter().map(|w| w.restrict_unchecked(&pos)).collect(),
        }
    }

    fn add_free(&mut self, var: &str) {
        self.vars.push(var.to_string());
        self.rows = self.rows.iter().flat_map(WeakOrder::extensions).collect();
    }
}

/// Table of one atom `R(v1..vk)`, handling repeated variables.
fn atom_table(rel: &TemporalRelation, args: &[String]) -> Table {
    let mut distinct: Vec<String> = Vec::new();
    let mut first: Vec<usize> = Vec::new();
    let owner: Vec<usize> = args
        .iter()
        .enumerate()
        .map(|(p, a)| match distinct.iter().position(|d| d == a) {
            Some(k) => k,
            None => {
                distinct.push(a.clone());
                first.push(p);
                distinct.len() - 1
            }
        })
        .collect();
    let rows = rel
        .orbits()
        .iter()
        .filter(|w| (0..args.len()).all(|p| w.rank(p) == w.rank(first[owner[p]])))
        .map(|w| w.restrict_unchecked(&first))
        .collect();
    Table { vars: distinct, rows }
}

fn builtin(cmp: Cmp) -> TemporalRelation {
    match cmp {
        Cmp::Lt => catalog::less(),
        Cmp::Le => catalog::leq(),
        Cmp::Eq => catalog::eq(),
        Cmp::Ne => catalog::neq(),
    }
}

/// Resolves the literals of a pp-formula into tables plus its existential
/// variables.
pub(crate) fn pp_atoms(f: &Formula, lang: &Language) -> Result<(Vec<Table>, Vec<String>)> {
    let (prefix, matrix) = f.prefix();
    if prefix.iter().any(|(q, _)| *q == Quantifier::Forall) {
        return Err(Error::Shape("pp-formula may not contain universal quantifiers".into()));
    }
    let lits = matrix
        .conjuncts()
        .ok_or_else(|| Error::Shape("pp-formula body must be a conjunction of atoms".into()))?;
    let mut tables = Vec::with_capacity(lits.len());
    for lit in lits {
        tables.push(match lit {
            Formula::Rel { name, args } => {
                let rel = lang.get(name).ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                if rel.arity() != args.len() {
                    return Err(Error::ArityMismatch {
                        name: name.clone(),
                        expected: rel.arity(),
                        found: args.len(),
                    });
                }
                atom_table(rel, args)
            }
            Formula::Atom { lhs, cmp, rhs } => atom_table(&builtin(*cmp), &[lhs.clone(), rhs.clone()]),
            _ => unreachable!("conjuncts yields literals"),
        });
    }
    let existentials = prefix.into_iter().map(|(_, v)| v.to_string()).collect();
    Ok((tables, existentials))
}

/// Joins atom tables greedily (fewest new variables first) and projects away
/// every variable outside `keep` as soon as no pending atom mentions it.
pub(crate) fn evaluate_tables(mut pending: Vec<Table>, keep: &[String]) -> Result<Table> {
    let mut acc = Table::unit();
    while !pending.is_empty() {
        let pick = (0..pending.len())
            .min_by_key(|&i| {
                let new = pending[i].vars.iter().filter(|v| !acc.vars.contains(v)).count();
                (new, pending[i].rows.len(), i)
            })
            .unwrap();
        let atom = pending.remove(pick);
        acc = acc.join(&atom)?;
        if acc.rows.is_empty() {
            return Ok(Table { vars: keep.to_vec(), rows: BTreeSet::new() });
        }
        let live: Vec<String> = acc
            .vars
            .iter()
            .filter(|v| keep.contains(v) || pending.iter().any(|t| t.vars.contains(v)))
            .cloned()
            .collect();
        if live.len() < acc.vars.len() {
            acc = acc.project(&live);
        }
    }
    for v in keep {
        if !acc.vars.contains(v) {
            acc.add_free(v);
        }
    }
    Ok(acc.project(keep))
}

/// Exact relation defined by a pp-formula over `lang` on the output
/// variables `out` (which may include variables the formula does not
/// mention; those are unconstrained).
pub fn pp_evaluate<S: AsRef<str>>(f: &Formula, lang: &Language, out: &[S]) -> Result<TemporalRelation> {
    let out: Vec<String> = out.iter().map(|s| s.as_ref().to_string()).collect();
    if out.is_empty() {
        return Err(Error::EmptyTuple);
    }
    for (i, v) in out.iter().enumerate() {
        if out[..i].contains(v) {
            return Err(Error::Shape(format!("output variable `{v}` listed twice")));
        }
    }
    let (tables, existentials) = pp_atoms(f, lang)?;
    if let Some(v) = existentials.iter().find(|v| out.contains(v)) {
        return Err(Error::Shape(format!("output variable `{v}` is quantified")));
    }
    if let Some(v) = f.free_vars().into_iter().find(|v| !out.contains(v)) {
        return Err(Error::UnboundVariable(v));
    }
    let table = evaluate_tables(tables, &out)?;
    TemporalRelation::new(out.len(), table.rows)
}

/// Truth of a pp-sentence (all variables quantified or free ones read
/// existentially).
pub fn pp_satisfiable(f: &Formula, lang: &Language) -> Result<bool> {
    let (tables, _) = pp_atoms(f, lang)?;
    Ok(!evaluate_tables(tables, &[])?.rows.is_empty())
}
