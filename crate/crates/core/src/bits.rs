//! Indexed orbit tables and compact orbit bitsets.
//!
//! Every weak order of arity `n` gets a stable index (its position in the
//! sorted enumeration), which lets relations be handled as bitsets in the
//! exhaustive engines.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::orders::{enumerate_weak_orders_bounded, WeakOrder, DEFAULT_MAX_ARITY};

/// All weak orders of one arity with a reverse index.
#[derive(Debug)]
pub struct OrbitTable {
    pub arity: usize,
    pub orders: Vec<WeakOrder>,
    index: HashMap<WeakOrder, usize>,
}

impl OrbitTable {
    fn build(arity: usize) -> Self {
        let orders = enumerate_weak_orders_bounded(arity, DEFAULT_MAX_ARITY)
            .expect("orbit table arity within ceiling");
        let index = orders.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        OrbitTable { arity, orders, index }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn index_of(&self, w: &WeakOrder) -> usize {
        self.index[w]
    }

    /// Index of the all-equal orbit.
    pub fn all_equal_index(&self) -> usize {
        self.index_of(&WeakOrder::all_equal(self.arity))
    }
}

/// The shared table for arity `n` (1 ..= 7), built on first use.
pub fn orbit_table(n: usize) -> &'static OrbitTable {
    static TABLES: [OnceLock<OrbitTable>; DEFAULT_MAX_ARITY + 1] =
        [const { OnceLock::new() }; DEFAULT_MAX_ARITY + 1];
    assert!((1..=DEFAULT_MAX_ARITY).contains(&n), "orbit table arity {n} out of range");
    TABLES[n].get_or_init(|| OrbitTable::build(n))
}

/// A fixed-length bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut b = BitSet { words: vec![u64::MAX; len.div_ceil(64)], len };
        b.trim();
        b
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn none(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn all(&self) -> bool {
        *self == BitSet::full(self.len)
    }

    pub fn and(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len: self.len,
        }
    }

    pub fn or(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            len: self.len,
        }
    }

    pub fn not(&self) -> BitSet {
        let mut b = BitSet {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        b.trim();
        b
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// Least index set here but not in `other`.
    pub fn first_outside(&self, other: &BitSet) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(wi, (a, b))| {
                let d = a & !b;
                (d != 0).then(|| wi * 64 + d.trailing_zeros() as usize)
            })
    }
}
