use std::collections::{BTreeSet, HashMap};

use super::{Cmp, Formula};
use crate::error::{Error, Result};
use crate::orders::{enumerate_weak_orders, WeakOrder};
use crate::relations::TemporalRelation;

/// A quantifier-free formula with variables resolved to coordinate indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompiledFormula {
    Atom(usize, Cmp, usize),
    Not(Box<CompiledFormula>),
    And(Vec<CompiledFormula>),
    Or(Vec<CompiledFormula>),
}

impl CompiledFormula {
    pub fn compile(f: &Formula, binding: &impl Fn(&str) -> Option<usize>) -> Result<Self> {
        let var = |v: &str| binding(v).ok_or_else(|| Error::UnboundVariable(v.to_string()));
        Ok(match f {
            Formula::Atom { lhs, cmp, rhs } => CompiledFormula::Atom(var(lhs)?, *cmp, var(rhs)?),
            Formula::Not { body } => CompiledFormula::Not(Box::new(Self::compile(body, binding)?)),
            Formula::And { items } => {
                CompiledFormula::And(items.iter().map(|i| Self::compile(i, binding)).collect::<Result<_>>()?)
            }
            Formula::Or { items } => {
                CompiledFormula::Or(items.iter().map(|i| Self::compile(i, binding)).collect::<Result<_>>()?)
            }
            Formula::Rel { name, .. } => {
                return Err(Error::Shape(format!(
                    "relation atom `{name}` cannot be evaluated without a language"
                )))
            }
            Formula::Exists { .. } | Formula::Forall { .. } => {
                return Err(Error::Shape("expected a quantifier-free formula".into()))
            }
        })
    }

    #[inline]
    pub fn eval(&self, ranks: &[u8]) -> bool {
        match self {
            CompiledFormula::Atom(a, cmp, b) => cmp.holds(ranks[*a], ranks[*b]),
            CompiledFormula::Not(f) => !f.eval(ranks),
            CompiledFormula::And(items) => items.iter().all(|i| i.eval(ranks)),
            CompiledFormula::Or(items) => items.iter().any(|i| i.eval(ranks)),
        }
    }
}

/// Truth value of a quantifier-free formula on the orbit `w`, with variables
/// mapped to coordinates of `w`.
pub fn eval_on_weak_order(f: &Formula, w: &WeakOrder, binding: &HashMap<String, usize>) -> Result<bool> {
    let compiled = CompiledFormula::compile(f, &|v| binding.get(v).copied())?;
    if let Some(&index) = binding.values().find(|&&i| i >= w.arity()) {
        return Err(Error::IndexOutOfRange { index, arity: w.arity() });
    }
    Ok(compiled.eval(w.ranks()))
}

/// The relation defined by a quantifier-free formula on the given variable
/// order. Variables in `vars` that do not occur in `f` are unconstrained.
pub fn relation_of<S: AsRef<str>>(f: &Formula, vars: &[S]) -> Result<TemporalRelation> {
    let names: Vec<&str> = vars.iter().map(AsRef::as_ref).collect();
    for (i, v) in names.iter().enumerate() {
        if names[..i].contains(v) {
            return Err(Error::Shape(format!("variable `{v}` listed twice")));
        }
    }
    if let Some(v) = f.free_vars().into_iter().find(|v| !names.contains(&v.as_str())) {
        return Err(Error::UnboundVariable(v));
    }
    let compiled = CompiledFormula::compile(f, &|v| names.iter().position(|n| *n == v))?;
    let orbits: BTreeSet<WeakOrder> = enumerate_weak_orders(names.len())?
        .into_iter()
        .filter(|w| compiled.eval(w.ranks()))
        .collect();
    TemporalRelation::new(names.len(), orbits)
}
