use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{pp_evaluate, Language, TemporalRelation};
use crate::bits::{orbit_table, BitSet};
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::formulas::Formula;
use crate::orders::DEFAULT_MAX_ARITY;

/// States kept per breadth-first level before the search gives up early.
const MAX_LEVEL_STATES: usize = 4_000_000;

/// Result of a bounded pp-definition search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum PpSearchOutcome {
    Found {
        formula: Formula,
        text: String,
        vars: Vec<String>,
    },
    /// No definition with at most `existentials` quantified variables and
    /// `atoms` atoms. With `complete` set this is a proof of absence within
    /// those bounds.
    NotFoundWithinBound {
        existentials: usize,
        atoms: usize,
        complete: bool,
    },
}

impl PpSearchOutcome {
    pub fn formula(&self) -> Option<&Formula> {
        match self {
            PpSearchOutcome::Found { formula, .. } => Some(formula),
            PpSearchOutcome::NotFoundWithinBound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.formula().is_some()
    }
}

/// Conventional variable names: `x,y,z` up to arity 3, else `x1..xn`.
pub fn output_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn existential_names(e: usize) -> Vec<String> {
    if e <= 3 {
        ["u", "v", "w"][..e].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=e).map(|i| format!("u{i}")).collect()
    }
}

struct Atom {
    relation: usize,
    args: Vec<usize>,
    bits: BitSet,
    /// Bit `k` set when existential `k` occurs.
    exist_mask: u32,
}

#[derive(Clone)]
struct State {
    bits: BitSet,
    fresh: u8,
    parent: u32,
    atom: u32,
}

struct Space {
    proj: Vec<u32>,
    target: BitSet,
    n_orbits: usize,
}

impl Space {
    fn projection(&self, bits: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.n_orbits);
        for o in bits.ones() {
            out.set(self.proj[o] as usize);
        }
        out
    }
}

fn all_tuples(universe: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..universe).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Breadth-first search, by number of atoms, for a pp-formula over `lang`
/// that defines `target` exactly.
///
/// Existential variables are introduced in a fixed order and states with
/// equal orbit sets are merged, so renamings and reorderings of a conjunction
/// are visited once. The first definition found at the least atom count is
/// returned; the result does not depend on thread scheduling.
pub fn pp_search(target: &TemporalRelation, lang: &Language, bounds: &Bounds) -> Result<PpSearchOutcome> {
    bounds.validate()?;
    let n = target.arity();
    if n > DEFAULT_MAX_ARITY {
        return Err(Error::ArityBoundExceeded { arity: n, bound: DEFAULT_MAX_ARITY });
    }
    let e = bounds.max_existentials.min(DEFAULT_MAX_ARITY - n);
    let a_max = bounds.max_atoms;
    let universe = n + e;
    let utable = orbit_table(universe);
    let ntable = orbit_table(n);
    let ident: Vec<usize> = (0..n).collect();
    let space = Space {
        proj: utable.orders.iter().map(|w| ntable.index_of(&w.restrict_unchecked(&ident)) as u32).collect(),
        target: target.to_bits(),
        n_orbits: ntable.len(),
    };
    let names = output_names(n);
    let ex_names = existential_names(e);
    let not_found = |complete| PpSearchOutcome::NotFoundWithinBound { existentials: e, atoms: a_max, complete };

    let full = BitSet::full(utable.len());
    if space.projection(&full) == space.target {
        return finish(&[], &[], &names, &ex_names, lang, target, n);
    }

    // Candidate atoms.
    let mut atoms: Vec<Atom> = Vec::new();
    let mut seen_bits: HashSet<BitSet> = HashSet::new();
    for (ri, rel) in lang.relations().iter().enumerate() {
        let k = rel.arity();
        let cands: Vec<(Vec<usize>, BitSet)> = all_tuples(universe, k)
            .into_par_iter()
            .map(|args| {
                let mut bits = BitSet::new(utable.len());
                for (o, w) in utable.orders.iter().enumerate() {
                    if rel.contains(&w.restrict_unchecked(&args)) {
                        bits.set(o);
                    }
                }
                (args, bits)
            })
            .collect();
        for (args, bits) in cands {
            if bits.all() || !space.target.is_subset(&space.projection(&bits)) {
                continue;
            }
            if !seen_bits.insert(bits.clone()) {
                continue;
            }
            let exist_mask = args.iter().filter(|&&v| v >= n).fold(0u32, |m, &v| m | 1 << (v - n));
            atoms.push(Atom { relation: ri, args, bits, exist_mask });
        }
    }

    let mut levels: Vec<Vec<State>> = vec![vec![State { bits: full, fresh: 0, parent: u32::MAX, atom: u32::MAX }]];
    let mut seen: HashSet<(BitSet, u8)> = HashSet::new();
    let mut complete = true;
    for _ in 1..=a_max {
        let prev = levels.last().unwrap();
        let children: Vec<Vec<(u32, u32, BitSet, u8)>> = prev
            .par_iter()
            .enumerate()
            .map(|(si, st)| {
                let mut out = Vec::new();
                for (ai, atom) in atoms.iter().enumerate() {
                    // New existentials must be exactly the next ones in order.
                    let fresh_bits = atom.exist_mask >> st.fresh;
                    if fresh_bits & (fresh_bits + 1) != 0 {
                        continue;
                    }
                    let used = st.fresh + fresh_bits.count_ones() as u8;
                    let bits = st.bits.and(&atom.bits);
                    if bits == st.bits || !space.target.is_subset(&space.projection(&bits)) {
                        continue;
                    }
                    out.push((si as u32, ai as u32, bits, used));
                }
                out
            })
            .collect();
        let mut next: Vec<State> = Vec::new();
        for (parent, atom, bits, fresh) in children.into_iter().flatten() {
            if !seen.insert((bits.clone(), fresh)) {
                continue;
            }
            let goal = space.projection(&bits) == space.target;
            next.push(State { bits, fresh, parent, atom });
            if goal {
                levels.push(next);
                let chain = trace(&levels);
                let chosen: Vec<&Atom> = chain.iter().map(|&a| &atoms[a]).collect();
                let used = chosen.iter().fold(0u32, |m, a| m | a.exist_mask);
                let used: Vec<usize> = (0..e).filter(|k| used >> k & 1 == 1).collect();
                return finish(&chosen, &used, &names, &ex_names, lang, target, n);
            }
            if next.len() >= MAX_LEVEL_STATES {
                complete = false;
                break;
            }
        }
        if next.is_empty() || !complete {
            break;
        }
        levels.push(next);
    }
    Ok(not_found(complete))
}

/// Atom indices along the parent chain of the last state of the last level.
fn trace(levels: &[Vec<State>]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut idx = levels.last().unwrap().len() - 1;
    for level in levels.iter().skip(1).rev() {
        let st = &level[idx];
        out.push(st.atom as usize);
        idx = st.parent as usize;
    }
    out.reverse();
    out
}

fn finish(
    chosen: &[&Atom],
    used: &[usize],
    names: &[String],
    ex_names: &[String],
    lang: &Language,
    target: &TemporalRelation,
    n: usize,
) -> Result<PpSearchOutcome> {
    let var = |v: usize| if v < n { names[v].clone() } else { ex_names[v - n].clone() };
    let lits: Vec<Formula> = chosen
        .iter()
        .map(|a| Formula::Rel {
            name: lang.relations()[a.relation].label(),
            args: a.args.iter().map(|&v| var(v)).collect(),
        })
        .collect();
    let mut f = if lits.len() == 1 { lits.into_iter().next().unwrap() } else { Formula::and(lits) };
    for &k in used.iter().rev() {
        f = Formula::exists(ex_names[k].clone(), f);
    }
    let check = pp_evaluate(&f, lang, names)?;
    if &check != target {
        return Err(Error::InternalInconsistency(format!("pp certificate `{f}` does not define the target")));
    }
    Ok(PpSearchOutcome::Found { text: f.to_string(), formula: f, vars: names.to_vec() })
}

/// How the dual of one relation was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DualStatus {
    /// The dual is itself a relation of the language.
    Present { partner: String },
    /// The dual has the given pp-definition.
    Defined { formula: String },
    /// No pp-definition within the bounds.
    Unverified { existentials: usize, atoms: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualClosureEntry {
    pub relation: String,
    #[serde(flatten)]
    pub status: DualStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualClosureReport {
    pub closed: bool,
    pub entries: Vec<DualClosureEntry>,
}

impl DualClosureReport {
    pub fn unverified(&self) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, DualStatus::Unverified { .. }))
            .map(|e| e.relation.as_str())
            .collect()
    }
}

/// Checks that the dual of every relation is pp-definable in the language,
/// first by lookup, then by bounded search.
pub fn dual_closure_report(lang: &Language, bounds: &Bounds) -> Result<DualClosureReport> {
    let mut entries = Vec::new();
    for r in lang.relations() {
        let d = r.dual();
        let status = if let Some(p) = lang.iter().find(|p| **p == d) {
            DualStatus::Present { partner: p.label() }
        } else {
            match pp_search(&d, lang, bounds)? {
                PpSearchOutcome::Found { text, .. } => DualStatus::Defined { formula: text },
                PpSearchOutcome::NotFoundWithinBound { existentials, atoms, .. } => {
                    DualStatus::Unverified { existentials, atoms }
                }
            }
        };
        entries.push(DualClosureEntry { relation: r.label(), status });
    }
    let closed = entries.iter().all(|e| !matches!(e.status, DualStatus::Unverified { .. }));
    Ok(DualClosureReport { closed, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse;
    use crate::relations::catalog;

    fn lang(rels: Vec<TemporalRelation>) -> Language {
        Language::new(rels).unwrap()
    }

    fn bounds(e: usize, a: usize) -> Bounds {
        Bounds { max_existentials: e, max_atoms: a, ..Bounds::default() }
    }

    #[test]
    fn finds_i_from_betwc() {
        let l = lang(vec![catalog::betwc()]);
        let out = pp_search(&catalog::i(), &l, &bounds(2, 3)).unwrap();
        let f = out.formula().expect("gadget within bounds");
        assert_eq!(pp_evaluate(f, &l, &["x", "y", "z"]).unwrap(), catalog::i());
    }

    #[test]
    fn leq_not_definable_from_less() {
        let l = lang(vec![catalog::less()]);
        let out = pp_search(&catalog::leq(), &l, &bounds(2, 4)).unwrap();
        assert_eq!(out, PpSearchOutcome::NotFoundWithinBound { existentials: 2, atoms: 4, complete: true });
    }

    #[test]
    fn eq_from_leq() {
        let l = lang(vec![catalog::leq()]);
        let out = pp_search(&catalog::eq(), &l, &bounds(0, 2)).unwrap();
        let f = out.formula().unwrap();
        assert_eq!(f, &parse("leq(x,y) & leq(y,x)").unwrap());
    }

    #[test]
    fn full_target_is_true() {
        let l = lang(vec![catalog::less()]);
        let out = pp_search(&TemporalRelation::full(2).unwrap(), &l, &bounds(0, 1)).unwrap();
        assert_eq!(out.formula(), Some(&Formula::truth()));
    }

    #[test]
    fn dual_closure_examples() {
        let b = Bounds::default();
        let r = dual_closure_report(&lang(vec![catalog::eq(), catalog::neq()]), &b).unwrap();
        assert!(r.closed);
        assert!(matches!(r.entries[0].status, DualStatus::Present { .. }));
        let r = dual_closure_report(&lang(vec![catalog::betwc()]), &b).unwrap();
        assert!(r.closed);
        // Greater(x,y) is less(y,x): found by the search.
        let r = dual_closure_report(&lang(vec![catalog::less()]), &b).unwrap();
        assert!(r.closed);
        assert_eq!(r.entries[0].status, DualStatus::Defined { formula: "less(y,x)".into() });
        // CyclC's dual needs a genuine definition; whatever is reported must hold.
        let l = lang(vec![catalog::cyclc()]);
        let r = dual_closure_report(&l, &b).unwrap();
        if let DualStatus::Defined { formula } = &r.entries[0].status {
            let f = parse(formula).unwrap();
            assert_eq!(pp_evaluate(&f, &l, &["x", "y", "z"]).unwrap(), catalog::cyclc().dual());
        }
    }
}
