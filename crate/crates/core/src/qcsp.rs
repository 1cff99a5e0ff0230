//! Exact evaluation of quantified conjunctions over a temporal language.
//!
//! The truth of the matrix only depends on the weak order of the assigned
//! values, so quantifying a fresh variable ranges over the `2m + 1`
//! extensions of the current weak order. The search is depth first with
//! short-cuts, checks each atom as soon as its variables are assigned, and
//! memoizes on the weak order of the variables that still matter.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{parse, Cmp, Formula, Quantifier};
use crate::orders::WeakOrder;
use crate::relations::{catalog, Language, TemporalRelation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcspAtom {
    /// Relation symbol as written (`<`, `<=`, `=`, `!=` for comparisons).
    pub name: String,
    pub relation: TemporalRelation,
    /// Prefix positions of the arguments.
    pub args: Vec<usize>,
}

/// `Q1 v1 ... Qn vn. R1(...) & ... & Rk(...)` with resolved relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcspInstance {
    pub prefix: Vec<(Quantifier, String)>,
    pub atoms: Vec<QcspAtom>,
}

fn builtin(cmp: Cmp) -> TemporalRelation {
    match cmp {
        Cmp::Lt => catalog::less(),
        Cmp::Le => catalog::leq(),
        Cmp::Eq => catalog::eq(),
        Cmp::Ne => catalog::neq(),
    }
}

impl QcspInstance {
    pub fn from_formula(f: &Formula, lang: &Language) -> Result<Self> {
        let (prefix, matrix) = f.prefix();
        let prefix: Vec<(Quantifier, String)> = prefix.into_iter().map(|(q, v)| (q, v.to_string())).collect();
        for (i, (_, v)) in prefix.iter().enumerate() {
            if prefix[..i].iter().any(|(_, w)| w == v) {
                return Err(Error::Shape(format!("variable `{v}` quantified twice")));
            }
        }
        let lits = matrix
            .conjuncts()
            .ok_or_else(|| Error::Shape("matrix must be a conjunction of atoms".into()))?;
        let pos = |v: &str| -> Result<usize> {
            prefix.iter().position(|(_, w)| w == v).ok_or_else(|| Error::UnboundVariable(v.to_string()))
        };
        let mut atoms = Vec::with_capacity(lits.len());
        for lit in lits {
            let atom = match lit {
                Formula::Rel { name, args } => {
                    let rel = lang.get(name).ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                    if rel.arity() != args.len() {
                        return Err(Error::ArityMismatch { name: name.clone(), expected: rel.arity(), found: args.len() });
                    }
                    QcspAtom {
                        name: name.clone(),
                        relation: rel.clone(),
                        args: args.iter().map(|a| pos(a)).collect::<Result<_>>()?,
                    }
                }
                Formula::Atom { lhs, cmp, rhs } => QcspAtom {
                    name: cmp.symbol().to_string(),
                    relation: builtin(*cmp),
                    args: vec![pos(lhs)?, pos(rhs)?],
                },
                _ => unreachable!("conjuncts yields literals"),
            };
            atoms.push(atom);
        }
        Ok(QcspInstance { prefix, atoms })
    }

    /// Parses text such as `A x. E y. betwc(x,y,z) & x<=z`.
    pub fn parse(text: &str, lang: &Language) -> Result<Self> {
        QcspInstance::from_formula(&parse(text)?, lang)
    }

    pub fn num_vars(&self) -> usize {
        self.prefix.len()
    }

    /// Whether every quantifier is existential.
    pub fn is_existential(&self) -> bool {
        self.prefix.iter().all(|(q, _)| *q == Quantifier::Exists)
    }

    pub fn to_formula(&self) -> Formula {
        let name = |i: usize| self.prefix[i].1.clone();
        let items = self
            .atoms
            .iter()
            .map(|a| match a.name.as_str() {
                "<" | "<=" | "=" | "!=" => {
                    let cmp = match a.name.as_str() {
                        "<" => Cmp::Lt,
                        "<=" => Cmp::Le,
                        "=" => Cmp::Eq,
                        _ => Cmp::Ne,
                    };
                    Formula::atom(name(a.args[0]), cmp, name(a.args[1]))
                }
                _ => Formula::Rel { name: a.name.clone(), args: a.args.iter().map(|&i| name(i)).collect() },
            })
            .collect();
        let mut f = Formula::and(items);
        for (q, v) in self.prefix.iter().rev() {
            f = match q {
                Quantifier::Exists => Formula::exists(v.clone(), f),
                Quantifier::Forall => Formula::forall(v.clone(), f),
            };
        }
        f
    }

    /// Same instance with one more conjunct.
    pub fn with_atom(&self, atom: QcspAtom) -> Self {
        let mut out = self.clone();
        out.atoms.push(atom);
        out
    }
}

impl fmt::Display for QcspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

fn atom_holds(atom: &QcspAtom, state: &WeakOrder) -> bool {
    atom.relation.contains(&state.restrict_unchecked(&atom.args))
}

/// Search statistics of one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QcspStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub memo_entries: usize,
}

struct Solver<'a> {
    inst: &'a QcspInstance,
    /// Atoms to check right after position `k` is assigned.
    ready: Vec<Vec<&'a QcspAtom>>,
    /// Positions that still matter once `k` variables are assigned.
    relevant: Vec<Vec<usize>>,
    memo: HashMap<(usize, WeakOrder), bool>,
    stats: QcspStats,
}

impl<'a> Solver<'a> {
    fn new(inst: &'a QcspInstance) -> Self {
        let n = inst.num_vars();
        let mut ready = vec![Vec::new(); n];
        for a in &inst.atoms {
            if let Some(&last) = a.args.iter().max() {
                ready[last].push(a);
            }
        }
        let relevant = (0..=n)
            .map(|k| {
                let mut keep: Vec<usize> = inst
                    .atoms
                    .iter()
                    .filter(|a| a.args.iter().any(|&v| v >= k))
                    .flat_map(|a| a.args.iter().copied().filter(|&v| v < k))
                    .collect();
                keep.sort_unstable();
                keep.dedup();
                keep
            })
            .collect();
        Solver { inst, ready, relevant, memo: HashMap::new(), stats: QcspStats::default() }
    }

    /// Truth of the suffix from position `k` given the order on `0..k`.
    fn solve(&mut self, k: usize, state: &WeakOrder) -> bool {
        self.stats.nodes += 1;
        if k == self.inst.num_vars() {
            return true;
        }
        let key = (k, state.restrict_unchecked(&self.relevant[k]));
        if let Some(&v) = self.memo.get(&key) {
            self.stats.memo_hits += 1;
            return v;
        }
        let exists = self.inst.prefix[k].0 == Quantifier::Exists;
        let mut value = !exists;
        for ext in state.extensions() {
            let ok = self.ready[k].iter().all(|a| atom_holds(a, &ext)) && self.solve(k + 1, &ext);
            if ok == exists {
                value = exists;
                break;
            }
        }
        self.memo.insert(key, value);
        value
    }
}

/// Truth of the sentence in `(Q; Gamma)`.
pub fn evaluate(inst: &QcspInstance) -> bool {
    evaluate_with_stats(inst).0
}

pub fn evaluate_with_stats(inst: &QcspInstance) -> (bool, QcspStats) {
    let mut solver = Solver::new(inst);
    let value = solver.solve(0, &WeakOrder::unit());
    let mut stats = solver.stats;
    stats.memo_entries = solver.memo.len();
    (value, stats)
}

/// Reference evaluator: plain game tree, atoms checked at the leaves only.
pub fn evaluate_naive(inst: &QcspInstance) -> bool {
    fn go(inst: &QcspInstance, k: usize, state: &WeakOrder) -> bool {
        if k == inst.num_vars() {
            return inst.atoms.iter().all(|a| atom_holds(a, state));
        }
        let mut children = state.extensions().into_iter().map(|e| go(inst, k + 1, &e));
        match inst.prefix[k].0 {
            Quantifier::Exists => children.any(|b| b),
            Quantifier::Forall => children.all(|b| b),
        }
    }
    go(inst, 0, &WeakOrder::unit())
}

/// Random instance over the relations of `lang`: `vars` variables `v0..`,
/// `atoms` atoms, each quantifier existential with probability `p_exists`.
pub fn random_instance<R: Rng>(rng: &mut R, lang: &Language, vars: usize, atoms: usize, p_exists: f64) -> QcspInstance {
    let prefix = (0..vars)
        .map(|i| {
            let q = if rng.random_bool(p_exists) { Quantifier::Exists } else { Quantifier::Forall };
            (q, format!("v{i}"))
        })
        .collect();
    let rels: Vec<&TemporalRelation> = lang.iter().collect();
    let atoms = (0..atoms)
        .map(|_| {
            let r = rels[rng.random_range(0..rels.len())];
            QcspAtom {
                name: r.label(),
                relation: r.clone(),
                args: (0..r.arity()).map(|_| rng.random_range(0..vars)).collect(),
            }
        })
        .collect();
    QcspInstance { prefix, atoms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::pp_satisfiable;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lang() -> Language {
        Language::new(vec![
            catalog::less().named("less"),
            catalog::leq().named("leq"),
            catalog::betwc().named("betwc"),
            catalog::cyclc().named("cyclc"),
            catalog::i().named("i"),
            catalog::eqxor().named("eqxor"),
        ])
        .unwrap()
    }

    fn eval(text: &str) -> bool {
        let inst = QcspInstance::parse(text, &lang()).unwrap();
        let v = evaluate(&inst);
        assert_eq!(v, evaluate_naive(&inst), "{text}");
        v
    }

    #[test]
    fn examples() {
        assert!(eval("A x. E y. less(x,y)"));
        assert!(!eval("A x. A y. leq(x,y)"));
        assert!(!eval("E y. A x. less(x,y)"));
        assert!(eval("A x. A y. E z. betwc(x,z,y)"));
        assert!(!eval("A x. A y. E z. betwc(x,y,z) & betwc(z,x,y) & x<y"));
        assert!(!eval("E x. E y. x<y & y<=x"));
    }

    #[test]
    fn input_errors() {
        let l = lang();
        assert!(matches!(QcspInstance::parse("A x. nope(x,x)", &l), Err(Error::UnknownRelation(_))));
        assert!(matches!(QcspInstance::parse("A x. less(x,y)", &l), Err(Error::UnboundVariable(_))));
        assert!(matches!(QcspInstance::parse("A x. less(x)", &l), Err(Error::ArityMismatch { .. })));
        assert!(QcspInstance::parse("A x. less(x,x) | less(x,x)", &l).is_err());
    }

    #[test]
    fn display_round_trip() {
        let l = lang();
        let inst = QcspInstance::parse("A x. E y. A z. betwc(x,y,z) & x<=z", &l).unwrap();
        assert_eq!(QcspInstance::parse(&inst.to_string(), &l).unwrap(), inst);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn memo_agrees_with_naive(seed in any::<u64>(), vars in 1usize..=5, atoms in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &lang(), vars, atoms, 0.5);
            prop_assert_eq!(evaluate(&inst), evaluate_naive(&inst));
        }

        #[test]
        fn existential_matches_pp(seed in any::<u64>(), vars in 1usize..=5, atoms in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &lang(), vars, atoms, 1.0);
            prop_assert_eq!(evaluate(&inst), pp_satisfiable(&inst.to_formula(), &lang()).unwrap());
        }

        #[test]
        fn adding_a_conjunct_never_helps(seed in any::<u64>(), vars in 1usize..=4, atoms in 1usize..=3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &lang(), vars, atoms + 1, 0.5);
            let mut fewer = inst.clone();
            let extra = fewer.atoms.pop().unwrap();
            prop_assert!(!evaluate(&fewer.with_atom(extra)) || evaluate(&fewer));
        }

        #[test]
        fn swapping_same_quantifiers_is_harmless(seed in any::<u64>(), vars in 2usize..=5, atoms in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = random_instance(&mut rng, &lang(), vars, atoms, 0.5);
            for k in 0..vars - 1 {
                if inst.prefix[k].0 != inst.prefix[k + 1].0 {
                    continue;
                }
                let mut swapped = inst.clone();
                swapped.prefix.swap(k, k + 1);
                for a in &mut swapped.atoms {
                    for v in &mut a.args {
                        if *v == k { *v = k + 1 } else if *v == k + 1 { *v = k }
                    }
                }
                prop_assert_eq!(evaluate(&inst), evaluate(&swapped));
            }
        }
    }
}
