//! Exhaustive law suites over every relation of a small arity.
//!
//! Each suite compares a definability procedure (or a generation fact)
//! against mask-level preservation checks on all `2^orbits` relations.

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::orbit_table;
use crate::definability::{equality_definition, ordhorn_definition, positive_definition};
use crate::error::{Error, Result};
use crate::polymorphisms::{catalog as ops, closed_under_all_permutations, BinaryOp, ImageTable, Operation};
use crate::relations::TemporalRelation;

/// Largest arity whose relations can be enumerated.
pub const MAX_SWEEP_ARITY: usize = 3;

/// Masks kept per suite as counterexample witnesses.
const KEPT_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Ord-Horn definable iff preserved by lele and dlele.
    OrdHorn,
    /// Positive definable iff preserved by wave.
    Positive,
    /// Preserved by ic and ci implies preserved by su1.
    IcCiSu1,
    /// Equality definable iff closed under all permutations.
    Equality,
    /// Preserved by pp and dpp implies Ord-Horn definable.
    PpOrdHorn,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::OrdHorn, Suite::Positive, Suite::IcCiSu1, Suite::Equality, Suite::PpOrdHorn];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OrdHorn => "ord-horn",
            Suite::Positive => "positive",
            Suite::IcCiSu1 => "ic-ci-su1",
            Suite::Equality => "equality",
            Suite::PpOrdHorn => "pp-ord-horn",
        }
    }

    pub fn law(self) -> &'static str {
        match self {
            Suite::OrdHorn => "OH-definable <=> preserved by lele and dlele",
            Suite::Positive => "positive-definable <=> preserved by wave",
            Suite::IcCiSu1 => "preserved by ic and ci => preserved by su1",
            Suite::Equality => "equality-definable <=> closed under all permutations",
            Suite::PpOrdHorn => "preserved by pp and dpp => OH-definable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub law: String,
    pub relations: usize,
    /// Relations on which the left-hand side holds.
    pub premise_holds: usize,
    pub violations: usize,
    /// Orbit masks of the first violations.
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub arity: usize,
    pub suites: Vec<SuiteReport>,
}

impl SweepReport {
    pub fn violations(&self) -> usize {
        self.suites.iter().map(|s| s.violations).sum()
    }
}

/// Per-relation check returning `(premise holds, law holds)`.
type Check = Box<dyn Fn(u128, &TemporalRelation) -> (bool, bool) + Sync>;

fn table(op: Operation, arity: usize) -> ImageTable {
    ImageTable::new(&op, arity)
}

/// Runs one suite over every relation of `arity`.
pub fn run_suite(suite: Suite, arity: usize) -> Result<SuiteReport> {
    if arity == 0 || arity > MAX_SWEEP_ARITY {
        return Err(Error::ArityBoundExceeded { arity, bound: MAX_SWEEP_ARITY });
    }
    let orbits = orbit_table(arity).len();
    let total: u128 = 1 << orbits;
    let bin = |b| table(Operation::Binary(b), arity);
    let un = |u| table(Operation::Unary(u), arity);
    let check: Check = match suite {
        Suite::OrdHorn => {
            let (lele, dlele) = (bin(BinaryOp::Lele), bin(BinaryOp::Dlele));
            Box::new(move |m, r| {
                let p = lele.preserves(m) && dlele.preserves(m);
                (p, p == ordhorn_definition(r).expect("small arity").is_definable())
            })
        }
        Suite::Positive => {
            let wave = un(ops::wave());
            Box::new(move |m, r| {
                let p = wave.preserves(m);
                (p, p == positive_definition(r).is_definable())
            })
        }
        Suite::IcCiSu1 => {
            let (ic, ci, su1) = (un(ops::ic()), un(ops::ci()), un(ops::su(1)?));
            Box::new(move |m, _| {
                let p = ic.preserves(m) && ci.preserves(m);
                (p, !p || su1.preserves(m))
            })
        }
        Suite::Equality => Box::new(|_, r| {
            let p = closed_under_all_permutations(r);
            (p, p == equality_definition(r).is_definable())
        }),
        Suite::PpOrdHorn => {
            let (pp, dpp) = (bin(BinaryOp::Pp), bin(BinaryOp::Dpp));
            Box::new(move |m, r| {
                let p = pp.preserves(m) && dpp.preserves(m);
                (p, !p || ordhorn_definition(r).expect("small arity").is_definable())
            })
        }
    };
    let results: Vec<(u128, bool, bool)> = (0..total)
        .into_par_iter()
        .map(|m| {
            let r = TemporalRelation::from_mask(arity, m).expect("mask within the orbit count");
            let (premise, ok) = check(m, &r);
            (m, premise, ok)
        })
        .collect();
    let bad: Vec<u128> = results.iter().filter(|(_, _, ok)| !ok).map(|(m, _, _)| *m).collect();
    Ok(SuiteReport {
        suite,
        law: suite.law().to_string(),
        relations: results.len(),
        premise_holds: results.iter().filter(|(_, p, _)| *p).count(),
        violations: bad.len(),
        witnesses: bad.iter().take(KEPT_WITNESSES).map(|m| format!("{m:#x}")).collect(),
    })
}

/// Runs every suite over all relations of the given arity.
pub fn sweep(arity: usize) -> Result<SweepReport> {
    let suites = Suite::ALL.iter().map(|&s| run_suite(s, arity)).collect::<Result<_>>()?;
    Ok(SweepReport { arity, suites })
}
