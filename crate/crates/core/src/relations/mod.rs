//! Temporal relations as finite sets of orbits, the gadget catalog, languages,
//! exact pp-evaluation, bounded pp-definition search and dual-closure checks.

pub mod catalog;
mod language;
mod pp;
mod search;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::bits::{orbit_table, BitSet};
use crate::error::{Error, Result};
use crate::orders::{canonicalize, enumerate_weak_orders, WeakOrder};

pub use language::{Language, LanguageFile, RelationEntry};
pub use pp::{pp_evaluate, pp_satisfiable};
pub use search::{dual_closure_report, output_names, pp_search, DualClosureEntry, DualClosureReport, DualStatus, PpSearchOutcome};

/// A first-order definable relation over `(Q; <)`, stored as its orbits.
///
/// Equality and hashing ignore the optional name.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RawRelation")]
pub struct TemporalRelation {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    arity: usize,
    orbits: BTreeSet<WeakOrder>,
}

#[derive(Deserialize)]
struct RawRelation {
    name: Option<String>,
    arity: usize,
    orbits: BTreeSet<WeakOrder>,
}

impl TryFrom<RawRelation> for TemporalRelation {
    type Error = Error;

    fn try_from(raw: RawRelation) -> Result<Self> {
        let mut r = TemporalRelation::new(raw.arity, raw.orbits)?;
        r.name = raw.name;
        Ok(r)
    }
}

impl TemporalRelation {
    pub fn new(arity: usize, orbits: impl IntoIterator<Item = WeakOrder>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::EmptyTuple);
        }
        let orbits: BTreeSet<WeakOrder> = orbits.into_iter().collect();
        if let Some(w) = orbits.iter().find(|w| w.arity() != arity) {
            return Err(Error::ArityMismatch {
                name: format!("orbit {w}"),
                expected: arity,
                found: w.arity(),
            });
        }
        Ok(TemporalRelation { name: None, arity, orbits })
    }

    pub fn empty(arity: usize) -> Result<Self> {
        TemporalRelation::new(arity, [])
    }

    pub fn full(arity: usize) -> Result<Self> {
        TemporalRelation::new(arity, enumerate_weak_orders(arity)?)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Name for reports; unnamed relations render as `R/arity`.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("R/{}", self.arity))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn orbits(&self) -> &BTreeSet<WeakOrder> {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn contains(&self, w: &WeakOrder) -> bool {
        self.orbits.contains(w)
    }

    /// Membership of a concrete tuple, decided by its orbit.
    pub fn contains_tuple<T: PartialOrd>(&self, t: &[T]) -> Result<bool> {
        if t.len() != self.arity {
            return Err(Error::ArityMismatch {
                name: self.label(),
                expected: self.arity,
                found: t.len(),
            });
        }
        Ok(self.contains(&canonicalize(t)?))
    }

    fn same_arity(&self, other: &TemporalRelation) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                name: other.label(),
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    pub fn complement(&self) -> Result<Self> {
        let all = enumerate_weak_orders(self.arity)?;
        TemporalRelation::new(self.arity, all.into_iter().filter(|w| !self.contains(w)))
    }

    pub fn intersection(&self, other: &TemporalRelation) -> Result<Self> {
        self.same_arity(other)?;
        TemporalRelation::new(self.arity, self.orbits.intersection(&other.orbits).cloned())
    }

    pub fn union(&self, other: &TemporalRelation) -> Result<Self> {
        self.same_arity(other)?;
        TemporalRelation::new(self.arity, self.orbits.union(&other.orbits).cloned())
    }

    /// Image under `x -> -x`.
    pub fn dual(&self) -> Self {
        TemporalRelation {
            name: self.name.clone(),
            arity: self.arity,
            orbits: self.orbits.iter().map(WeakOrder::dual).collect(),
        }
    }

    pub fn is_self_dual(&self) -> bool {
        self.orbits.iter().all(|w| self.contains(&w.dual()))
    }

    /// Orbit bitset over the shared table of this arity.
    pub fn to_bits(&self) -> BitSet {
        let table = orbit_table(self.arity);
        let mut b = BitSet::new(table.len());
        for w in &self.orbits {
            b.set(table.index_of(w));
        }
        b
    }

    pub fn from_bits(arity: usize, bits: &BitSet) -> Result<Self> {
        let table = orbit_table(arity);
        TemporalRelation::new(arity, bits.ones().map(|i| table.orders[i].clone()))
    }

    /// Relation of arity `n <= 4` from a mask over the sorted orbit table.
    pub fn from_mask(arity: usize, mask: u128) -> Result<Self> {
        let table = orbit_table(arity);
        if table.len() < 128 && mask >> table.len() != 0 {
            return Err(Error::InvalidOrder(format!("mask has bits beyond {} orbits", table.len())));
        }
        TemporalRelation::new(
            arity,
            (0..table.len()).filter(|i| mask >> i & 1 == 1).map(|i| table.orders[i].clone()),
        )
    }

    /// Inverse of [`TemporalRelation::from_mask`]; arity at most 4.
    pub fn to_mask(&self) -> u128 {
        assert!(self.arity <= 4, "masks cover arity at most 4");
        let table = orbit_table(self.arity);
        self.orbits.iter().fold(0u128, |m, w| m | 1u128 << table.index_of(w))
    }
}

impl PartialEq for TemporalRelation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.orbits == other.orbits
    }
}

impl Eq for TemporalRelation {}

impl Hash for TemporalRelation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.orbits.hash(state);
    }
}

impl fmt::Debug for TemporalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.label())?;
        for (i, w) in self.orbits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for TemporalRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::catalog;
    use super::*;

    #[test]
    fn set_operations() {
        assert_eq!(catalog::eq().complement().unwrap(), catalog::neq());
        assert_eq!(catalog::leq().intersection(&catalog::leq().dual()).unwrap(), catalog::eq());
        assert_eq!(catalog::less().union(&catalog::eq()).unwrap(), catalog::leq());
        assert!(catalog::less().union(&catalog::betwc()).is_err());
    }

    #[test]
    fn duals() {
        assert_eq!(catalog::less().dual(), catalog::greater());
        // Oracle: dual each orbit by hand.
        let by_hand: BTreeSet<WeakOrder> = catalog::betwc().orbits().iter().map(|w| {
            let top = *w.ranks().iter().max().unwrap();
            WeakOrder::from_ranks(w.ranks().iter().map(|r| top - r).collect()).unwrap()
        }).collect();
        assert_eq!(&by_hand, catalog::betwc().orbits());
        assert!(catalog::betwc().is_self_dual());
        assert_ne!(catalog::cyclc().dual(), catalog::cyclc());
    }

    #[test]
    fn tuple_membership() {
        let b = catalog::betwc();
        assert!(b.contains_tuple(&[1, 2, 3]).unwrap());
        assert!(b.contains_tuple(&[7, 7, 7]).unwrap());
        assert!(!b.contains_tuple(&[1, 3, 2]).unwrap());
        assert!(b.contains_tuple(&[1, 2]).is_err());
    }

    #[test]
    fn masks_round_trip() {
        for mask in [0u128, 1, 0b1010101, (1 << 13) - 1] {
            assert_eq!(TemporalRelation::from_mask(3, mask).unwrap().to_mask(), mask);
        }
        assert!(TemporalRelation::from_mask(3, 1 << 13).is_err());
        let r = catalog::s();
        assert_eq!(TemporalRelation::from_bits(3, &r.to_bits()).unwrap(), r);
    }

    #[test]
    fn serde_validates() {
        let r: TemporalRelation = serde_json::from_str(r#"{"name":"lt","arity":2,"orbits":[[3,8]]}"#).unwrap();
        assert_eq!(r, catalog::less());
        assert!(serde_json::from_str::<TemporalRelation>(r#"{"arity":2,"orbits":[[0,1,2]]}"#).is_err());
    }
}
