//! Temporal formulas over the atoms `<`, `<=`, `=`, `!=` (with `>` and `>=`
//! accepted as sugar), Boolean connectives and quantifiers.
//!
//! Text grammar (whitespace-insensitive):
//!
//! ```text
//! formula := quant | or
//! quant   := ("E" | "A") ident "." formula       -- scopes maximally right
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | primary
//! primary := "(" formula ")" | "true" | "false" | quant
//!          | ident "(" ident ("," ident)* ")"    -- relation atom
//!          | ident cmp ident                     -- cmp: < <= = != > >=
//! ```

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use eval::{eval_on_weak_order, relation_of, CompiledFormula};
pub use parse::parse;

/// Binary comparator of an atom; `>` and `>=` are normalized away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
        }
    }

    /// Truth of `a cmp b` for ranks (or any ordered values).
    #[inline]
    pub fn holds<T: Ord>(self, a: T, b: T) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Formula AST. `true` is the empty conjunction, `false` the empty
/// disjunction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Formula {
    Atom { lhs: String, cmp: Cmp, rhs: String },
    Rel { name: String, args: Vec<String> },
    Not { body: Box<Formula> },
    And { items: Vec<Formula> },
    Or { items: Vec<Formula> },
    Exists { var: String, body: Box<Formula> },
    Forall { var: String, body: Box<Formula> },
}

/// Syntactic class of a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaClass {
    QuantifierFree,
    Pp,
    ForallExistsAnd,
    General,
}

impl Formula {
    pub fn atom(lhs: impl Into<String>, cmp: Cmp, rhs: impl Into<String>) -> Self {
        Formula::Atom { lhs: lhs.into(), cmp, rhs: rhs.into() }
    }

    pub fn rel(name: impl Into<String>, args: &[&str]) -> Self {
        Formula::Rel {
            name: name.into(),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn and(items: Vec<Formula>) -> Self {
        Formula::And { items }
    }

    pub fn or(items: Vec<Formula>) -> Self {
        Formula::Or { items }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Self {
        Formula::Not { body: Box::new(body) }
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Self {
        Formula::Exists { var: var.into(), body: Box::new(body) }
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Self {
        Formula::Forall { var: var.into(), body: Box::new(body) }
    }

    pub fn truth() -> Self {
        Formula::And { items: Vec::new() }
    }

    pub fn falsity() -> Self {
        Formula::Or { items: Vec::new() }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Atom { .. } | Formula::Rel { .. })
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom { .. } | Formula::Rel { .. } => true,
            Formula::Not { body } => body.is_quantifier_free(),
            Formula::And { items } | Formula::Or { items } => items.iter().all(Formula::is_quantifier_free),
            Formula::Exists { .. } | Formula::Forall { .. } => false,
        }
    }

    /// Leading quantifier block and the formula under it.
    pub fn prefix(&self) -> (Vec<(Quantifier, &str)>, &Formula) {
        let mut out = Vec::new();
        let mut f = self;
        loop {
            match f {
                Formula::Exists { var, body } => {
                    out.push((Quantifier::Exists, var.as_str()));
                    f = body;
                }
                Formula::Forall { var, body } => {
                    out.push((Quantifier::Forall, var.as_str()));
                    f = body;
                }
                _ => return (out, f),
            }
        }
    }

    /// Literals of a (nested) conjunction of literals, or `None`.
    pub fn conjuncts(&self) -> Option<Vec<&Formula>> {
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) -> bool {
            match f {
                Formula::Atom { .. } | Formula::Rel { .. } => {
                    out.push(f);
                    true
                }
                Formula::And { items } => items.iter().all(|i| walk(i, out)),
                _ => false,
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out).then_some(out)
    }

    pub fn class(&self) -> FormulaClass {
        if self.is_quantifier_free() {
            return FormulaClass::QuantifierFree;
        }
        let (prefix, matrix) = self.prefix();
        if matrix.conjuncts().is_none() {
            return FormulaClass::General;
        }
        if prefix.iter().all(|(q, _)| *q == Quantifier::Exists) {
            FormulaClass::Pp
        } else {
            FormulaClass::ForallExistsAnd
        }
    }

    /// Free variables in order of first appearance.
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            let note = |v: &String, bound: &Vec<String>, out: &mut Vec<String>| {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            };
            match f {
                Formula::Atom { lhs, rhs, .. } => {
                    note(lhs, bound, out);
                    note(rhs, bound, out);
                }
                Formula::Rel { args, .. } => args.iter().for_each(|a| note(a, bound, out)),
                Formula::Not { body } => walk(body, bound, out),
                Formula::And { items } | Formula::Or { items } => items.iter().for_each(|i| walk(i, bound, out)),
                Formula::Exists { var, body } | Formula::Forall { var, body } => {
                    bound.push(var.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// All quantified variable names.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Exists { var, .. } | Formula::Forall { var, .. } = f {
                out.insert(var.clone());
            }
        });
        out
    }

    /// Relation symbols used, with their arities as written.
    pub fn relation_symbols(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Rel { name, args } = f {
                if !out.iter().any(|(n, k)| n == name && *k == args.len()) {
                    out.push((name.clone(), args.len()));
                }
            }
        });
        out
    }

    fn visit(&self, cb: &mut impl FnMut(&Formula)) {
        cb(self);
        match self {
            Formula::Not { body } | Formula::Exists { body, .. } | Formula::Forall { body, .. } => body.visit(cb),
            Formula::And { items } | Formula::Or { items } => items.iter().for_each(|i| i.visit(cb)),
            _ => {}
        }
    }

    /// Renames variables (free and bound) through `map`.
    pub fn rename(&self, map: &impl Fn(&str) -> String) -> Formula {
        match self {
            Formula::Atom { lhs, cmp, rhs } => Formula::Atom { lhs: map(lhs), cmp: *cmp, rhs: map(rhs) },
            Formula::Rel { name, args } => Formula::Rel {
                name: name.clone(),
                args: args.iter().map(|a| map(a)).collect(),
            },
            Formula::Not { body } => Formula::not(body.rename(map)),
            Formula::And { items } => Formula::and(items.iter().map(|i| i.rename(map)).collect()),
            Formula::Or { items } => Formula::or(items.iter().map(|i| i.rename(map)).collect()),
            Formula::Exists { var, body } => Formula::exists(map(var), body.rename(map)),
            Formula::Forall { var, body } => Formula::forall(map(var), body.rename(map)),
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, in_and: bool) -> fmt::Result {
        let wrap = match self {
            Formula::Exists { .. } | Formula::Forall { .. } => true,
            Formula::Or { items } => !items.is_empty(),
            Formula::And { items } => in_and && !items.is_empty(),
            _ => false,
        };
        if wrap {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { lhs, cmp, rhs } => write!(f, "{lhs}{}{rhs}", cmp.symbol()),
            Formula::Rel { name, args } => write!(f, "{name}({})", args.join(",")),
            Formula::Not { body } => {
                write!(f, "!")?;
                match **body {
                    Formula::Atom { .. } | Formula::Rel { .. } | Formula::Not { .. } => write!(f, "{body}"),
                    Formula::And { ref items } | Formula::Or { ref items } if items.is_empty() => write!(f, "{body}"),
                    _ => write!(f, "({body})"),
                }
            }
            Formula::And { items } if items.is_empty() => write!(f, "true"),
            Formula::Or { items } if items.is_empty() => write!(f, "false"),
            Formula::And { items } => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    item.fmt_operand(f, true)?;
                }
                Ok(())
            }
            Formula::Or { items } => {
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    match item {
                        Formula::And { .. } => write!(f, "{item}")?,
                        _ => item.fmt_operand(f, false)?,
                    }
                }
                Ok(())
            }
            Formula::Exists { var, body } => write!(f, "E {var}. {body}"),
            Formula::Forall { var, body } => write!(f, "A {var}. {body}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(parse("x<y & y<z").unwrap().class(), FormulaClass::QuantifierFree);
        assert_eq!(parse("E u. E v. (x=u & u=y)").unwrap().class(), FormulaClass::Pp);
        assert_eq!(parse("A x. E y. x<y").unwrap().class(), FormulaClass::ForallExistsAnd);
        assert_eq!(parse("E x. (x<y | y<x)").unwrap().class(), FormulaClass::General);
    }

    #[test]
    fn free_vars_in_order() {
        let f = parse("E u. r(z,u) & x<z").unwrap();
        assert_eq!(f.free_vars(), vec!["z", "x"]);
        assert_eq!(f.relation_symbols(), vec![("r".to_string(), 2)]);
    }

    #[test]
    fn display_examples() {
        let f = parse("x<y & (y<z | z<=x) & !x=y").unwrap();
        assert_eq!(f.to_string(), "x<y & (y<z | z<=x) & !x=y");
        assert_eq!(parse("x > y").unwrap().to_string(), "y<x");
        assert_eq!(parse("true").unwrap(), Formula::truth());
    }

    #[test]
    fn json_ast_is_node_tagged() {
        let f = parse("!x<=y").unwrap();
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(j["node"], "not");
        assert_eq!(j["body"]["cmp"], "<=");
        let back: Formula = serde_json::from_value(j).unwrap();
        assert_eq!(back, f);
    }
}
