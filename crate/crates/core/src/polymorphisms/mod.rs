//! Catalog operations on `Q` and exact preservation tests.
//!
//! Preservation is decided at the orbit level: every tuple of an orbit (or
//! pair of orbits) is covered by a finite set of placements relative to the
//! operation's breakpoints, so no numeric representative is ever used.

pub mod binary;
pub mod catalog;
pub mod unary;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::orbit_table;
use crate::orders::WeakOrder;
use crate::relations::{Language, TemporalRelation};

pub use binary::{BinaryOp, Sign};
pub use unary::{Behavior, Bound, Cell, UnaryOp, UnaryOpSpec};

/// A catalog operation or a user-specified piecewise unary operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operation {
    Unary(UnaryOp),
    Binary(BinaryOp),
}

impl Operation {
    pub fn name(&self) -> &str {
        match self {
            Operation::Unary(u) => &u.name,
            Operation::Binary(b) => b.name(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Operation::Unary(_) => 1,
            Operation::Binary(_) => 2,
        }
    }

    /// `-f(-x1, ..., -xk)`, named after its catalog partner when there is one.
    pub fn dual(&self) -> Operation {
        match self {
            Operation::Binary(b) => Operation::Binary(b.dual()),
            Operation::Unary(u) => {
                let name = catalog::dual_name(&u.name).unwrap_or_else(|| format!("dual-{}", u.name));
                Operation::Unary(u.dual_named(name))
            }
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<UnaryOp> for Operation {
    fn from(u: UnaryOp) -> Self {
        Operation::Unary(u)
    }
}

impl From<BinaryOp> for Operation {
    fn from(b: BinaryOp) -> Self {
        Operation::Binary(b)
    }
}

/// A tuple pattern of the relation whose image leaves the relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Unary {
        orbit: WeakOrder,
        image: WeakOrder,
    },
    Binary {
        first: WeakOrder,
        second: WeakOrder,
        /// Sign of each coordinate of the first argument relative to 0.
        placement: Vec<Sign>,
        image: WeakOrder,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unary { orbit, image } => write!(f, "{orbit} -> {image}"),
            Violation::Binary { first, second, placement, image } => {
                write!(f, "({first}, {second}) with signs {placement:?} -> {image}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguageViolation {
    pub relation: String,
    #[serde(flatten)]
    pub violation: Violation,
}

/// First (least) violation of `op` on `r`, or `None` when `op` preserves `r`.
pub fn preserves_unary(op: &UnaryOp, r: &TemporalRelation) -> Option<Violation> {
    let orbits: Vec<&WeakOrder> = r.orbits().iter().collect();
    orbits.par_iter().find_map_first(|w| {
        op.images(w)
            .into_iter()
            .find(|img| !r.contains(img))
            .map(|image| Violation::Unary { orbit: (*w).clone(), image })
    })
}

pub fn preserves_binary(op: BinaryOp, r: &TemporalRelation) -> Option<Violation> {
    let orbits: Vec<&WeakOrder> = r.orbits().iter().collect();
    orbits.par_iter().find_map_first(|w1| {
        orbits.iter().find_map(|w2| {
            op.images(w1, w2).into_iter().find(|(_, img)| !r.contains(img)).map(|(placement, image)| {
                Violation::Binary { first: (*w1).clone(), second: (*w2).clone(), placement, image }
            })
        })
    })
}

pub fn preserves(op: &Operation, r: &TemporalRelation) -> Option<Violation> {
    match op {
        Operation::Unary(u) => preserves_unary(u, r),
        Operation::Binary(b) => preserves_binary(*b, r),
    }
}

/// First violated relation in language order.
pub fn preserves_language(op: &Operation, lang: &Language) -> Option<LanguageViolation> {
    lang.iter().find_map(|r| {
        preserves(op, r).map(|violation| LanguageViolation { relation: r.label(), violation })
    })
}

/// Constant operations preserve `r` iff it contains the all-equal orbit.
pub fn preserved_by_constant(r: &TemporalRelation) -> bool {
    r.contains(&WeakOrder::all_equal(r.arity()))
}

/// Equality pattern of an orbit: each coordinate labelled by the first
/// coordinate it equals.
pub fn equality_pattern(w: &WeakOrder) -> Vec<u8> {
    let mut first = HashMap::new();
    w.ranks().iter().enumerate().map(|(i, r)| *first.entry(*r).or_insert(i as u8)).collect()
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

/// Whether membership depends only on the equality pattern, i.e. `r` is
/// preserved by all permutations of `Q`.
pub fn closed_under_all_permutations(r: &TemporalRelation) -> bool {
    let mut counts: HashMap<Vec<u8>, (usize, usize)> = HashMap::new();
    for w in r.orbits() {
        counts.entry(equality_pattern(w)).or_insert((0, w.num_blocks())).0 += 1;
    }
    counts.values().all(|&(n, m)| n == factorial(m))
}

/// Image masks over the orbit table of one arity (at most 4), for testing
/// many relations given as masks against one operation.
#[derive(Debug, Clone)]
pub struct ImageTable {
    arity: usize,
    /// Unary: `images[i]`; binary: `images[i * len + j]`.
    images: Vec<u128>,
    binary: bool,
}

impl ImageTable {
    pub fn new(op: &Operation, arity: usize) -> ImageTable {
        assert!(arity <= 4, "image tables cover arity at most 4");
        let table = orbit_table(arity);
        let mask = |set: &mut dyn Iterator<Item = WeakOrder>| set.fold(0u128, |m, w| m | 1 << table.index_of(&w));
        match op {
            Operation::Unary(u) => ImageTable {
                arity,
                images: table.orders.par_iter().map(|w| mask(&mut u.images(w).into_iter())).collect(),
                binary: false,
            },
            Operation::Binary(b) => {
                let n = table.len();
                let images = (0..n * n)
                    .into_par_iter()
                    .map(|k| mask(&mut b.image_set(&table.orders[k / n], &table.orders[k % n]).into_iter()))
                    .collect();
                ImageTable { arity, images, binary: true }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Union of the images of all orbits (or orbit pairs) of `r`.
    pub fn image_of(&self, r: u128) -> u128 {
        let n = orbit_table(self.arity).len();
        let mut out = 0;
        let mut rest = r;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.binary {
                let mut inner = r;
                while inner != 0 {
                    let j = inner.trailing_zeros() as usize;
                    inner &= inner - 1;
                    out |= self.images[i * n + j];
                }
            } else {
                out |= self.images[i];
            }
        }
        out
    }

    /// Whether the relation with orbit mask `r` is preserved.
    pub fn preserves(&self, r: u128) -> bool {
        let n = orbit_table(self.arity).len();
        let mut rest = r;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.binary {
                let mut inner = r;
                while inner != 0 {
                    let j = inner.trailing_zeros() as usize;
                    inner &= inner - 1;
                    if self.images[i * n + j] & !r != 0 {
                        return false;
                    }
                }
            } else if self.images[i] & !r != 0 {
                return false;
            }
        }
        true
    }
}
