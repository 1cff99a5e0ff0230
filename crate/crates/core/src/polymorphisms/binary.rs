//! Binary operations given by comparison rules.
//!
//! For `pp` and `lele` the comparison of `f(a1, b1)` with `f(a2, b2)` only
//! depends on the position of `a1`, `a2` relative to 0 and on the orders of
//! the `a`s and the `b`s. Each argument pair is therefore mapped to a sort
//! key built from symbolic ranks, and the image orbit is the orbit of the
//! keys. Duals use `key'(a, b) = -key(-a, -b)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::orders::{canonicalize, joins, WeakOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryOp {
    Pp,
    Dpp,
    Lele,
    Dlele,
    /// Pointwise minimum (needs the joint order of both arguments).
    Min,
    /// Pointwise maximum.
    Max,
}

/// Sign of a first-argument value relative to the breakpoint 0.
pub type Sign = i8;

impl BinaryOp {
    pub const ALL: [BinaryOp; 6] = [BinaryOp::Pp, BinaryOp::Dpp, BinaryOp::Lele, BinaryOp::Dlele, BinaryOp::Min, BinaryOp::Max];

    pub fn name(self) -> &'static str {
        match self {
            BinaryOp::Pp => "pp",
            BinaryOp::Dpp => "dpp",
            BinaryOp::Lele => "lele",
            BinaryOp::Dlele => "dlele",
            BinaryOp::Min => "min",
            BinaryOp::Max => "max",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BinaryOp::ALL.into_iter().find(|op| op.name() == name)
    }

    pub fn dual(self) -> Self {
        match self {
            BinaryOp::Pp => BinaryOp::Dpp,
            BinaryOp::Dpp => BinaryOp::Pp,
            BinaryOp::Lele => BinaryOp::Dlele,
            BinaryOp::Dlele => BinaryOp::Lele,
            BinaryOp::Min => BinaryOp::Max,
            BinaryOp::Max => BinaryOp::Min,
        }
    }

    fn base_key(self, s: Sign, a: i32, b: i32) -> [i32; 3] {
        let nonpos = s <= 0;
        match self {
            BinaryOp::Pp => {
                if nonpos {
                    [0, a, 0]
                } else {
                    [1, b, 0]
                }
            }
            BinaryOp::Lele => {
                if nonpos {
                    [0, a, b]
                } else {
                    [1, b, a]
                }
            }
            _ => unreachable!("joint-order operations have no key"),
        }
    }

    /// Sort key of the argument pair with first-argument sign `s` and
    /// symbolic ranks `a`, `b`.
    pub fn key(self, s: Sign, a: i32, b: i32) -> [i32; 3] {
        match self {
            BinaryOp::Pp | BinaryOp::Lele => self.base_key(s, a, b),
            BinaryOp::Dpp | BinaryOp::Dlele => {
                let k = self.dual().base_key(-s, -a, -b);
                [-k[0], -k[1], -k[2]]
            }
            _ => unreachable!("joint-order operations have no key"),
        }
    }

    fn uses_breakpoint(self) -> bool {
        !matches!(self, BinaryOp::Min | BinaryOp::Max)
    }

    /// The `2m + 1` sign vectors for the blocks of `w`: a cut between blocks
    /// or one block placed on 0.
    pub fn placements(w: &WeakOrder) -> Vec<Vec<Sign>> {
        let m = w.num_blocks();
        let mut out = Vec::with_capacity(2 * m + 1);
        for slot in 0..=2 * m {
            let block_sign = |blk: usize| -> Sign {
                if slot % 2 == 0 {
                    if blk < slot / 2 {
                        -1
                    } else {
                        1
                    }
                } else {
                    match blk.cmp(&(slot / 2)) {
                        std::cmp::Ordering::Less => -1,
                        std::cmp::Ordering::Equal => 0,
                        std::cmp::Ordering::Greater => 1,
                    }
                }
            };
            out.push(w.ranks().iter().map(|&r| block_sign(r as usize)).collect());
        }
        out
    }

    /// Image orbit for one placement of the first argument.
    pub fn image_for(self, w1: &WeakOrder, w2: &WeakOrder, signs: &[Sign]) -> WeakOrder {
        let keys: Vec<[i32; 3]> = (0..w1.arity())
            .map(|i| self.key(signs[i], w1.rank(i) as i32, w2.rank(i) as i32))
            .collect();
        canonicalize(&keys).expect("nonempty key list")
    }

    /// All `(placement, image)` pairs for arguments from orbits `w1`, `w2`.
    ///
    /// For `min`/`max` the placement is empty and images range over all joint
    /// orders of the two arguments.
    pub fn images(self, w1: &WeakOrder, w2: &WeakOrder) -> Vec<(Vec<Sign>, WeakOrder)> {
        assert_eq!(w1.arity(), w2.arity(), "binary images need equal arities");
        if self.uses_breakpoint() {
            return BinaryOp::placements(w1)
                .into_iter()
                .map(|p| {
                    let img = self.image_for(w1, w2, &p);
                    (p, img)
                })
                .collect();
        }
        let n = w1.arity();
        let a_vars: Vec<usize> = (0..n).collect();
        let b_vars: Vec<usize> = (n..2 * n).collect();
        let (_, joint) = joins(&a_vars, w1, &b_vars, w2).expect("disjoint variables");
        let mut seen = BTreeSet::new();
        for j in joint {
            let vals: Vec<u8> = (0..n)
                .map(|i| {
                    let (x, y) = (j.rank(i), j.rank(n + i));
                    if self == BinaryOp::Min {
                        x.min(y)
                    } else {
                        x.max(y)
                    }
                })
                .collect();
            seen.insert(canonicalize(&vals).expect("nonempty"));
        }
        seen.into_iter().map(|img| (Vec::new(), img)).collect()
    }

    pub fn image_set(self, w1: &WeakOrder, w2: &WeakOrder) -> BTreeSet<WeakOrder> {
        self.images(w1, w2).into_iter().map(|(_, i)| i).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::enumerate_weak_orders;

    fn w(r: &[u8]) -> WeakOrder {
        WeakOrder::from_ranks(r.to_vec()).unwrap()
    }

    /// Every symbolic (sign, a, b) triple for three argument pairs.
    fn triples() -> Vec<[(Sign, i32, i32); 3]> {
        let mut out = Vec::new();
        for wa in enumerate_weak_orders(3).unwrap() {
            for wb in enumerate_weak_orders(3).unwrap() {
                for p in BinaryOp::placements(&wa) {
                    out.push([0, 1, 2].map(|i| (p[i], wa.rank(i) as i32, wb.rank(i) as i32)));
                }
            }
        }
        out
    }

    #[test]
    fn keys_follow_the_stated_rules() {
        // pp: f(a1,b1) <= f(a2,b2) iff (a1<=0 and a1<=a2) or (a1>0, a2>0, b1<=b2)
        // lele: f(a1,b1) < f(a2,b2) iff one of the four listed conditions.
        for t in triples() {
            for &(s1, a1, b1) in &t {
                for &(s2, a2, b2) in &t {
                    let pp_le = (s1 <= 0 && a1 <= a2) || (s1 > 0 && s2 > 0 && b1 <= b2);
                    assert_eq!(BinaryOp::Pp.key(s1, a1, b1) <= BinaryOp::Pp.key(s2, a2, b2), pp_le);
                    let lele_lt = (s1 <= 0 && a1 < a2)
                        || (s1 <= 0 && a1 == a2 && b1 < b2)
                        || (s1 > 0 && s2 > 0 && b1 < b2)
                        || (s1 > 0 && b1 == b2 && a1 < a2);
                    if lele_lt {
                        assert!(BinaryOp::Lele.key(s1, a1, b1) < BinaryOp::Lele.key(s2, a2, b2));
                    }
                }
            }
        }
    }

    #[test]
    fn placements_count() {
        assert_eq!(BinaryOp::placements(&w(&[0, 1, 2])).len(), 7);
        assert_eq!(BinaryOp::placements(&w(&[0, 0])).len(), 3);
    }

    #[test]
    fn pp_eqxor_witness() {
        // t1 = (1,1,-1): orbit (1,1,0), z negative; t2 = (0,5,0): orbit (0,1,0).
        let img = BinaryOp::Pp.image_for(&w(&[1, 1, 0]), &w(&[0, 1, 0]), &[1, 1, -1]);
        assert_eq!(img, w(&[1, 2, 0]));
    }

    #[test]
    fn min_max_are_duals() {
        for a in enumerate_weak_orders(3).unwrap() {
            for b in enumerate_weak_orders(3).unwrap() {
                let mins: BTreeSet<_> = BinaryOp::Min.image_set(&a, &b);
                let maxs: BTreeSet<_> = BinaryOp::Max.image_set(&a.dual(), &b.dual()).iter().map(WeakOrder::dual).collect();
                assert_eq!(mins, maxs);
            }
        }
    }
}
