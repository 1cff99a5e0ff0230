//! Piecewise unary operations on `Q`.
//!
//! The line is cut into cells: open intervals and attainable breakpoints.
//! Two adjacent interval cells meet at an unattainable (irrational) cut. On
//! each cell the operation is either constant at a symbolic landmark or a
//! strictly monotone bijection onto an open image interval whose ends are
//! landmarks or infinities. Images of an orbit are computed from this data
//! alone, so the result is the same for every operation with that shape.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orders::WeakOrder;

/// End of an image interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    NegInf,
    Landmark(usize),
    PosInf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Behavior {
    /// Strictly increasing onto the open interval `(lo, hi)`.
    Increasing { lo: Bound, hi: Bound },
    /// Strictly decreasing onto the open interval `(lo, hi)`.
    Decreasing { lo: Bound, hi: Bound },
    /// Constant at the given landmark.
    Constant(usize),
}

impl Behavior {
    pub fn is_monotone(&self) -> bool {
        !matches!(self, Behavior::Constant(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    /// Left breakpoint label (`-inf` for the first cell).
    pub from: String,
    /// Right breakpoint label (`+inf` for the last cell).
    pub to: String,
    /// Attainable breakpoint (`from == to`) rather than an open interval.
    pub point: bool,
    pub behavior: Behavior,
}

/// A piecewise unary operation; landmarks are listed in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnaryOp {
    pub name: String,
    pub landmarks: Vec<String>,
    pub cells: Vec<Cell>,
}

/// JSON form of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub from: String,
    pub to: String,
    pub behavior: BehaviorKind,
    pub image: ImageSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BehaviorKind {
    Increasing,
    Decreasing,
    Constant,
}

/// A landmark name (constant cells) or a `[lo, hi]` pair (monotone cells).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ImageSpec {
    Point(String),
    Interval([String; 2]),
}

/// JSON form of a piecewise operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnaryOpSpec {
    pub name: String,
    #[serde(default)]
    pub landmarks: Vec<String>,
    pub cells: Vec<CellSpec>,
}

pub const NEG_INF: &str = "-inf";
pub const POS_INF: &str = "+inf";

fn bound_rank(b: Bound) -> i32 {
    match b {
        Bound::NegInf => -1,
        Bound::Landmark(k) => k as i32,
        Bound::PosInf => i32::MAX,
    }
}

impl UnaryOp {
    /// Checks the structural invariants: the cells chain from `-inf` to
    /// `+inf`, breakpoint cells are constant and isolated, landmarks exist
    /// and image intervals are nonempty.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidOpSpec(format!("{}: {m}", self.name)));
        for (i, l) in self.landmarks.iter().enumerate() {
            if self.landmarks[..i].contains(l) || l == NEG_INF || l == POS_INF {
                return bad(format!("landmark `{l}` repeated or reserved"));
            }
        }
        let Some(first) = self.cells.first() else {
            return bad("no cells".into());
        };
        let last = self.cells.last().unwrap();
        if first.from != NEG_INF || first.point {
            return bad("first cell must be an interval starting at -inf".into());
        }
        if last.to != POS_INF || last.point {
            return bad("last cell must be an interval ending at +inf".into());
        }
        let lm = |k: usize| k < self.landmarks.len();
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 && self.cells[i - 1].to != c.from {
                return bad(format!("cell {i} does not start where cell {} ends", i - 1));
            }
            if c.point {
                if c.from != c.to {
                    return bad(format!("breakpoint cell {i} must have from == to"));
                }
                if i > 0 && self.cells[i - 1].point {
                    return bad(format!("breakpoint cells {} and {i} are adjacent", i - 1));
                }
            } else if c.from == c.to {
                return bad(format!("interval cell {i} is empty"));
            }
            match c.behavior {
                Behavior::Constant(k) if !lm(k) => return bad(format!("cell {i}: unknown landmark")),
                Behavior::Constant(_) => {}
                Behavior::Increasing { lo, hi } | Behavior::Decreasing { lo, hi } => {
                    if c.point {
                        return bad(format!("breakpoint cell {i} must be constant"));
                    }
                    for b in [lo, hi] {
                        if let Bound::Landmark(k) = b {
                            if !lm(k) {
                                return bad(format!("cell {i}: unknown landmark"));
                            }
                        }
                    }
                    if bound_rank(lo) >= bound_rank(hi) || lo == Bound::PosInf || hi == Bound::NegInf {
                        return bad(format!("cell {i}: empty image interval"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_spec(spec: &UnaryOpSpec) -> Result<Self> {
        let lm = |s: &str| -> Result<usize> {
            spec.landmarks
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::InvalidOpSpec(format!("{}: unknown landmark `{s}`", spec.name)))
        };
        let bound = |s: &str| -> Result<Bound> {
            Ok(match s {
                NEG_INF => Bound::NegInf,
                POS_INF => Bound::PosInf,
                other => Bound::Landmark(lm(other)?),
            })
        };
        let mut cells = Vec::new();
        for c in &spec.cells {
            let behavior = match (c.behavior, &c.image) {
                (BehaviorKind::Constant, ImageSpec::Point(l)) => Behavior::Constant(lm(l)?),
                (BehaviorKind::Increasing, ImageSpec::Interval([lo, hi])) => {
                    Behavior::Increasing { lo: bound(lo)?, hi: bound(hi)? }
                }
                (BehaviorKind::Decreasing, ImageSpec::Interval([lo, hi])) => {
                    Behavior::Decreasing { lo: bound(lo)?, hi: bound(hi)? }
                }
                _ => {
                    return Err(Error::InvalidOpSpec(format!(
                        "{}: cell {}..{} pairs behavior and image wrongly",
                        spec.name, c.from, c.to
                    )))
                }
            };
            cells.push(Cell { from: c.from.clone(), to: c.to.clone(), point: c.from == c.to, behavior });
        }
        let op = UnaryOp { name: spec.name.clone(), landmarks: spec.landmarks.clone(), cells };
        op.validate()?;
        Ok(op)
    }

    pub fn to_spec(&self) -> UnaryOpSpec {
        let b = |b: Bound| match b {
            Bound::NegInf => NEG_INF.to_string(),
            Bound::PosInf => POS_INF.to_string(),
            Bound::Landmark(k) => self.landmarks[k].clone(),
        };
        UnaryOpSpec {
            name: self.name.clone(),
            landmarks: self.landmarks.clone(),
            cells: self
                .cells
                .iter()
                .map(|c| {
                    let (behavior, image) = match c.behavior {
                        Behavior::Constant(k) => (BehaviorKind::Constant, ImageSpec::Point(self.landmarks[k].clone())),
                        Behavior::Increasing { lo, hi } => (BehaviorKind::Increasing, ImageSpec::Interval([b(lo), b(hi)])),
                        Behavior::Decreasing { lo, hi } => (BehaviorKind::Decreasing, ImageSpec::Interval([b(lo), b(hi)])),
                    };
                    CellSpec { from: c.from.clone(), to: c.to.clone(), behavior, image }
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: UnaryOpSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("line {}: {e}", e.line()),
        })?;
        UnaryOp::from_spec(&spec)
    }

    /// `x -> -f(-x)`: cells and landmarks in reverse order.
    pub fn dual_named(&self, name: impl Into<String>) -> UnaryOp {
        let l = self.landmarks.len();
        let flip = |b: Bound| match b {
            Bound::NegInf => Bound::PosInf,
            Bound::PosInf => Bound::NegInf,
            Bound::Landmark(k) => Bound::Landmark(l - 1 - k),
        };
        let neg = |s: &str| match s {
            NEG_INF => POS_INF.to_string(),
            POS_INF => NEG_INF.to_string(),
            other => other.strip_prefix('-').map_or_else(|| format!("-{other}"), str::to_string),
        };
        UnaryOp {
            name: name.into(),
            landmarks: self.landmarks.iter().rev().map(|s| neg(s)).collect(),
            cells: self
                .cells
                .iter()
                .rev()
                .map(|c| Cell {
                    from: neg(&c.to),
                    to: neg(&c.from),
                    point: c.point,
                    behavior: match c.behavior {
                        Behavior::Constant(k) => Behavior::Constant(l - 1 - k),
                        Behavior::Increasing { lo, hi } => Behavior::Increasing { lo: flip(hi), hi: flip(lo) },
                        Behavior::Decreasing { lo, hi } => Behavior::Decreasing { lo: flip(hi), hi: flip(lo) },
                    },
                })
                .collect(),
        }
    }

    pub fn is_constant(&self) -> bool {
        let mut ks = self.cells.iter().map(|c| match c.behavior {
            Behavior::Constant(k) => Some(k),
            _ => None,
        });
        let first = ks.next().flatten();
        first.is_some() && ks.all(|k| k == first)
    }

    pub fn has_infinite_image(&self) -> bool {
        self.cells.iter().any(|c| c.behavior.is_monotone())
    }

    /// Every way to put the blocks of an `m`-block orbit into cells:
    /// nondecreasing cell indices, at most one block per breakpoint cell.
    pub fn placements(&self, m: usize) -> Vec<Vec<usize>> {
        fn rec(op: &UnaryOp, m: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == m {
                out.push(cur.clone());
                return;
            }
            for c in from..op.cells.len() {
                cur.push(c);
                let next = if op.cells[c].point { c + 1 } else { c };
                rec(op, m, next, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, m, 0, &mut Vec::new(), &mut out);
        out
    }

    /// Orbits of `f(t)` over all tuples `t` in orbit `w`.
    pub fn images(&self, w: &WeakOrder) -> BTreeSet<WeakOrder> {
        let mut out = BTreeSet::new();
        for placement in self.placements(w.num_blocks()) {
            self.images_for_placement(w, &placement, &mut out);
        }
        out
    }

    /// Images of `w` with its blocks placed in the given cells.
    pub fn images_for_placement(&self, w: &WeakOrder, placement: &[usize], out: &mut BTreeSet<WeakOrder>) {
        let l = self.landmarks.len();
        // Item of each block in the final order over landmarks + monotone blocks.
        let mut item = vec![0usize; placement.len()];
        let mut monotone = Vec::new();
        for (b, &c) in placement.iter().enumerate() {
            match self.cells[c].behavior {
                Behavior::Constant(k) => item[b] = k,
                _ => {
                    item[b] = l + monotone.len();
                    monotone.push(b);
                }
            }
        }
        let start = if l == 0 {
            WeakOrder::unit()
        } else {
            WeakOrder::from_ranks_unchecked((0..l as u8).collect())
        };
        let coord_items: Vec<usize> = w.ranks().iter().map(|&r| item[r as usize]).collect();
        self.insert_blocks(&start, &monotone, 0, placement, l, &coord_items, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn insert_blocks(
        &self,
        state: &WeakOrder,
        monotone: &[usize],
        k: usize,
        placement: &[usize],
        l: usize,
        coord_items: &[usize],
        out: &mut BTreeSet<WeakOrder>,
    ) {
        if k == monotone.len() {
            out.insert(state.restrict_unchecked(coord_items));
            return;
        }
        let b = monotone[k];
        let cell = placement[b];
        let (lo, hi, increasing) = match self.cells[cell].behavior {
            Behavior::Increasing { lo, hi } => (lo, hi, true),
            Behavior::Decreasing { lo, hi } => (lo, hi, false),
            Behavior::Constant(_) => unreachable!(),
        };
        // The previous block in the same cell, if any, is the previous item.
        let prev = (k > 0 && placement[monotone[k - 1]] == cell).then(|| l + k - 1);
        let new = l + k;
        for ext in state.extensions() {
            let r = ext.rank(new);
            let above = |b: Bound| match b {
                Bound::NegInf => true,
                Bound::PosInf => false,
                Bound::Landmark(j) => r > ext.rank(j),
            };
            let below = |b: Bound| match b {
                Bound::NegInf => false,
                Bound::PosInf => true,
                Bound::Landmark(j) => r < ext.rank(j),
            };
            if !above(lo) || !below(hi) {
                continue;
            }
            if let Some(p) = prev {
                let ok = if increasing { r > ext.rank(p) } else { r < ext.rank(p) };
                if !ok {
                    continue;
                }
            }
            self.insert_blocks(&ext, monotone, k + 1, placement, l, coord_items, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymorphisms::catalog;

    fn w(r: &[u8]) -> WeakOrder {
        WeakOrder::from_ranks(r.to_vec()).unwrap()
    }

    fn set(v: &[&[u8]]) -> BTreeSet<WeakOrder> {
        v.iter().map(|r| w(r)).collect()
    }

    #[test]
    fn catalog_ops_validate() {
        for name in catalog::UNARY_NAMES {
            catalog::unary(name).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn peak_images() {
        let peak = catalog::unary("peak").unwrap();
        assert_eq!(peak.images(&w(&[0, 1, 2])), set(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn minus_images() {
        let minus = catalog::unary("minus").unwrap();
        assert_eq!(minus.images(&w(&[0, 1, 1])), set(&[&[1, 0, 0]]));
    }

    #[test]
    fn wave_images() {
        // Weakly increasing: the reversed pair is impossible.
        let wave = catalog::unary("wave").unwrap();
        assert_eq!(wave.images(&w(&[0, 1])), set(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn cyc_rotates() {
        let cyc = catalog::unary("cyc").unwrap();
        assert_eq!(cyc.images(&w(&[0, 1, 2])), set(&[&[0, 1, 2], &[2, 0, 1], &[1, 2, 0]]));
        assert_eq!(cyc.images(&w(&[0, 0])), set(&[&[0, 0]]));
    }

    #[test]
    fn placements_respect_breakpoints() {
        let peak = catalog::unary("peak").unwrap();
        // 3 cells, middle one a breakpoint: 2 blocks -> 3+2+1 minus (mid,mid) = 5
        assert_eq!(peak.placements(2).len(), 5);
        let cyc = catalog::unary("cyc").unwrap();
        assert_eq!(cyc.placements(3).len(), 4);
    }

    #[test]
    fn spec_round_trip_and_validation() {
        for name in catalog::UNARY_NAMES {
            let op = catalog::unary(name).unwrap();
            let text = serde_json::to_string(&op.to_spec()).unwrap();
            assert_eq!(UnaryOp::from_json(&text).unwrap(), op);
        }
        let bad = r#"{"name":"b","cells":[{"from":"-inf","to":"0","behavior":"increasing","image":["+inf","-inf"]},
            {"from":"0","to":"+inf","behavior":"increasing","image":["-inf","+inf"]}]}"#;
        assert!(matches!(UnaryOp::from_json(bad), Err(Error::InvalidOpSpec(_))));
        let bad = r#"{"name":"b","landmarks":["a"],"cells":[{"from":"-inf","to":"0","behavior":"constant","image":"a"},
            {"from":"0","to":"0","behavior":"increasing","image":["-inf","+inf"]},
            {"from":"0","to":"+inf","behavior":"constant","image":"a"}]}"#;
        assert!(UnaryOp::from_json(bad).is_err());
    }

    #[test]
    fn dual_of_ic_is_ci() {
        let ic = catalog::unary("ic").unwrap();
        let ci = catalog::unary("ci").unwrap();
        let d = ic.dual_named("ci");
        for n in 1..=3 {
            for o in crate::orders::enumerate_weak_orders(n).unwrap() {
                assert_eq!(d.images(&o), ci.images(&o));
            }
        }
    }
}
