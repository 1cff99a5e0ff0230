//! Bounded generation tests and the classification of unary operations.
//!
//! `f` generates `g` iff every temporal relation preserved by `f` is
//! preserved by `g`. That is not decidable by enumeration, so
//! [`bounded_generation_check`] searches for counterexample relations of
//! small arity: exhaustively up to arity 3, by sampling closures at arity 4.

use std::collections::BTreeSet;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::orbit_table;
use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::polymorphisms::{catalog, preserves_unary, Behavior, Bound, ImageTable, Operation, UnaryOp};
use crate::relations::{catalog as rel, TemporalRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnaryVerdict {
    Constant,
    OrderPreserving,
    GeneratesMinus,
    GeneratesCyc,
    GeneratesMinusAndCyc,
    GeneratesAllPermutations,
    GeneratesIc,
    GeneratesCi,
    GeneratesSu1,
    GeneratesPeak,
}

impl UnaryVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            UnaryVerdict::Constant => "constant",
            UnaryVerdict::OrderPreserving => "order-preserving",
            UnaryVerdict::GeneratesMinus => "generates-minus",
            UnaryVerdict::GeneratesCyc => "generates-cyc",
            UnaryVerdict::GeneratesMinusAndCyc => "generates-minus-and-cyc",
            UnaryVerdict::GeneratesAllPermutations => "generates-all-permutations",
            UnaryVerdict::GeneratesIc => "generates-ic",
            UnaryVerdict::GeneratesCi => "generates-ci",
            UnaryVerdict::GeneratesSu1 => "generates-su1",
            UnaryVerdict::GeneratesPeak => "generates-peak",
        }
    }
}

impl UnaryVerdict {
    /// Catalog operations the verdict claims are generated.
    pub fn generated_ops(self) -> &'static [&'static str] {
        match self {
            UnaryVerdict::Constant => &["const"],
            UnaryVerdict::OrderPreserving | UnaryVerdict::GeneratesAllPermutations => &[],
            UnaryVerdict::GeneratesMinus => &["minus"],
            UnaryVerdict::GeneratesCyc => &["cyc"],
            UnaryVerdict::GeneratesMinusAndCyc => &["minus", "cyc"],
            UnaryVerdict::GeneratesIc => &["ic"],
            UnaryVerdict::GeneratesCi => &["ci"],
            UnaryVerdict::GeneratesSu1 => &["su1"],
            UnaryVerdict::GeneratesPeak => &["peak"],
        }
    }
}

/// One preservation fact consulted by [`classify_unary`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub check: String,
    pub preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnaryClassification {
    pub op: String,
    /// Nonempty, sorted. Several entries only in mixed cases.
    pub verdicts: Vec<UnaryVerdict>,
    /// Case of the unary trichotomy the verdict rests on.
    pub branch: String,
    pub mixed: bool,
    pub evidence: Vec<Evidence>,
}

impl UnaryClassification {
    pub fn verdict(&self) -> UnaryVerdict {
        self.verdicts[0]
    }
}

fn bound_pos(b: Bound) -> i64 {
    match b {
        Bound::NegInf => -1,
        Bound::Landmark(k) => k as i64,
        Bound::PosInf => i64::MAX,
    }
}

/// Image of a cell as an open interval `(lo, hi)` or a point, over landmark
/// positions.
fn image_span(b: Behavior) -> (i64, i64, bool) {
    match b {
        Behavior::Constant(k) => (k as i64, k as i64, true),
        Behavior::Increasing { lo, hi } | Behavior::Decreasing { lo, hi } => (bound_pos(lo), bound_pos(hi), false),
    }
}

fn images_collide(a: Behavior, b: Behavior) -> bool {
    let (alo, ahi, ap) = image_span(a);
    let (blo, bhi, bp) = image_span(b);
    match (ap, bp) {
        (true, true) => alo == blo,
        (true, false) => blo < alo && alo < bhi,
        (false, true) => alo < blo && blo < ahi,
        (false, false) => alo.max(blo) < ahi.min(bhi),
    }
}

/// Cells that take part in a collision of values (non-injectivity).
fn collapse_cells(op: &UnaryOp) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for (i, c) in op.cells.iter().enumerate() {
        if !c.point && !c.behavior.is_monotone() {
            out.insert(i);
        }
        for (j, d) in op.cells.iter().enumerate().skip(i + 1) {
            if images_collide(c.behavior, d.behavior) {
                out.insert(i);
                out.insert(j);
            }
        }
    }
    out
}

/// Decides which canonical operation `op` generates.
///
/// Injective operations are split by preservation of `Betw`, `Cycl` and
/// `Sep`. Non-injective operations with infinite image are read off the cell
/// structure: a monotone region below a collision gives `ic`, above gives
/// `ci`. Finite-image operations give `su1` when two interval cells take
/// distinct values and `peak` otherwise.
pub fn classify_unary(op: &UnaryOp) -> UnaryClassification {
    let mut evidence = Vec::new();
    let mut check = |name: &str, r: &TemporalRelation| {
        let preserved = preserves_unary(op, r).is_none();
        evidence.push(Evidence { check: format!("preserves {name}"), preserved });
        preserved
    };
    let done = |verdicts: Vec<UnaryVerdict>, branch: &str, evidence: Vec<Evidence>| UnaryClassification {
        op: op.name.clone(),
        mixed: verdicts.len() > 1,
        verdicts,
        branch: branch.into(),
        evidence,
    };
    if op.is_constant() {
        return done(vec![UnaryVerdict::Constant], "constant", evidence);
    }
    if check("<", &rel::less()) {
        return done(vec![UnaryVerdict::OrderPreserving], "order-preserving", evidence);
    }
    if check("!=", &rel::neq()) {
        let v = if check("Betw", &rel::betw()) {
            UnaryVerdict::GeneratesMinus
        } else if check("Cycl", &rel::cycl()) {
            UnaryVerdict::GeneratesCyc
        } else if check("Sep", &rel::sep()) {
            UnaryVerdict::GeneratesMinusAndCyc
        } else {
            UnaryVerdict::GeneratesAllPermutations
        };
        return done(vec![v], "injective", evidence);
    }
    if op.has_infinite_image() {
        let collapse = collapse_cells(op);
        let mut verdicts = BTreeSet::new();
        for (m, cell) in op.cells.iter().enumerate() {
            if !cell.behavior.is_monotone() {
                continue;
            }
            if collapse.iter().any(|&c| m < c) {
                verdicts.insert(UnaryVerdict::GeneratesIc);
            }
            if collapse.iter().any(|&c| c < m) {
                verdicts.insert(UnaryVerdict::GeneratesCi);
            }
        }
        // On any finite set a decreasing region acts as `-`, and `-` turns
        // `ic` into `ci`.
        if op.cells.iter().any(|c| matches!(c.behavior, Behavior::Decreasing { .. })) {
            verdicts.extend([UnaryVerdict::GeneratesMinus, UnaryVerdict::GeneratesIc, UnaryVerdict::GeneratesCi]);
        }
        if verdicts.is_empty() {
            // A single monotone cell colliding only with itself cannot happen
            // for a non-injective op; keep a conservative answer.
            verdicts.insert(UnaryVerdict::GeneratesIc);
            verdicts.insert(UnaryVerdict::GeneratesCi);
        }
        return done(verdicts.into_iter().collect(), "infinite-image-non-injective", evidence);
    }
    let intervals: BTreeSet<usize> = op
        .cells
        .iter()
        .filter(|c| !c.point)
        .filter_map(|c| match c.behavior {
            Behavior::Constant(k) => Some(k),
            _ => None,
        })
        .collect();
    let v = if intervals.len() > 1 { UnaryVerdict::GeneratesSu1 } else { UnaryVerdict::GeneratesPeak };
    done(vec![v], "finite-image", evidence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum GenerationOutcome {
    /// No relation of arity at most `arity` separates the operations.
    /// Exhaustive up to `exhaustive_arity`; sampled above it.
    NoCounterexample {
        arity: usize,
        exhaustive_arity: usize,
        relations_checked: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        samples: Option<usize>,
    },
    /// A relation preserved by every source operation but not by the target.
    Counterexample { relation: TemporalRelation },
}

impl GenerationOutcome {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, GenerationOutcome::Counterexample { .. })
    }
}

/// Largest arity swept exhaustively.
pub const EXHAUSTIVE_ARITY: usize = 3;
/// Largest arity supported at all (orbit masks).
pub const MAX_GENERATION_ARITY: usize = 4;

fn closure(tables: &[ImageTable], start: u128) -> u128 {
    let mut r = start;
    loop {
        let mut next = r;
        for t in tables {
            next |= t.image_of(r);
        }
        if next == r {
            return r;
        }
        r = next;
    }
}

/// Searches for a relation of arity at most `k` preserved by all of `from`
/// but violated by `to`; the least one (by arity, then orbit mask) is
/// returned. Arity 4 is sampled: closures of random orbit sets under `from`
/// are tested, `bounds.sample_count` of them, seeded by `bounds.seed`.
pub fn bounded_generation_check(
    from: &[Operation],
    to: &Operation,
    k: usize,
    bounds: &Bounds,
) -> Result<GenerationOutcome> {
    if k == 0 || k > MAX_GENERATION_ARITY {
        return Err(Error::Bounds(format!("generation arity must be in 1..={MAX_GENERATION_ARITY}, got {k}")));
    }
    let mut checked = 0u64;
    for n in 1..=k.min(EXHAUSTIVE_ARITY) {
        let tables: Vec<ImageTable> = from.iter().map(|op| ImageTable::new(op, n)).collect();
        let target = ImageTable::new(to, n);
        let count = 1u128 << orbit_table(n).len();
        let found = (0..count as u64).into_par_iter().find_first(|&mask| {
            let mask = mask as u128;
            tables.iter().all(|t| t.preserves(mask)) && !target.preserves(mask)
        });
        checked += count as u64;
        if let Some(mask) = found {
            return Ok(GenerationOutcome::Counterexample { relation: TemporalRelation::from_mask(n, mask as u128)? });
        }
    }
    if k <= EXHAUSTIVE_ARITY {
        return Ok(GenerationOutcome::NoCounterexample {
            arity: k,
            exhaustive_arity: k,
            relations_checked: checked,
            seed: None,
            samples: None,
        });
    }
    let tables: Vec<ImageTable> = from.iter().map(|op| ImageTable::new(op, k)).collect();
    let target = ImageTable::new(to, k);
    let len = orbit_table(k).len();
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let starts: Vec<u128> = (0..bounds.sample_count)
        .map(|_| {
            let generators = rng.random_range(1..=3);
            (0..generators).fold(0u128, |m, _| m | 1u128 << rng.random_range(0..len))
        })
        .collect();
    let found = starts
        .par_iter()
        .map(|&s| closure(&tables, s))
        .find_first(|&r| !target.preserves(r));
    if let Some(mask) = found {
        return Ok(GenerationOutcome::Counterexample { relation: TemporalRelation::from_mask(k, mask)? });
    }
    Ok(GenerationOutcome::NoCounterexample {
        arity: k,
        exhaustive_arity: EXHAUSTIVE_ARITY,
        relations_checked: checked + bounds.sample_count as u64,
        seed: Some(bounds.seed),
        samples: Some(bounds.sample_count),
    })
}

/// Resolves a comma-separated list of catalog names.
pub fn ops_by_names(names: &str) -> Result<Vec<Operation>> {
    names.split(',').map(str::trim).filter(|s| !s.is_empty()).map(catalog::by_name).collect()
}

/// One tuple of the `ci(alpha(ic(t))) = su1(t)` identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCase {
    pub tuple: Vec<String>,
    pub expected: Vec<String>,
    pub obtained: Vec<String>,
    pub pass: bool,
}

fn ic_value(x: Rational64) -> Rational64 {
    if x < Rational64::from_integer(0) {
        x
    } else {
        Rational64::from_integer(0)
    }
}

fn ci_value(x: Rational64) -> Rational64 {
    if x < Rational64::from_integer(0) {
        Rational64::from_integer(0)
    } else {
        x
    }
}

fn su1_value(x: Rational64) -> Rational64 {
    if x < Rational64::from_integer(0) {
        Rational64::from_integer(0)
    } else {
        Rational64::from_integer(1)
    }
}

/// Order automorphism fixing everything up to `q < 0`, linear from `(q, q)`
/// to `(0, 1)`, and `x + 1` from 0 on.
pub fn alpha(q: Rational64, x: Rational64) -> Rational64 {
    let zero = Rational64::from_integer(0);
    let one = Rational64::from_integer(1);
    if x <= q {
        x
    } else if x < zero {
        q + (x - q) * (one - q) / (zero - q)
    } else {
        x + one
    }
}

/// Checks `ci(alpha(ic(t))) = su1(t)` exactly for each tuple, with `alpha`
/// chosen per tuple to move the negative values below 0 and 0 to 1.
pub fn identity_check_su1_from_ic_ci(tuples: &[Vec<Rational64>]) -> Vec<IdentityCase> {
    let zero = Rational64::from_integer(0);
    tuples
        .iter()
        .map(|t| {
            let inner: Vec<Rational64> = t.iter().map(|&x| ic_value(x)).collect();
            let q = inner.iter().copied().filter(|&x| x < zero).max().unwrap_or(Rational64::from_integer(-1));
            let obtained: Vec<Rational64> = inner.iter().map(|&x| ci_value(alpha(q, x))).collect();
            let expected: Vec<Rational64> = t.iter().map(|&x| su1_value(x)).collect();
            let show = |v: &[Rational64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            IdentityCase { tuple: show(t), expected: show(&expected), obtained: show(&obtained), pass: obtained == expected }
        })
        .collect()
}
