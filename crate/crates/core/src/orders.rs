//! Weak orders (ordered set partitions) on finite index sets.
//!
//! A [`WeakOrder`] is the orbit of a rational tuple under the order
//! automorphisms of `(Q; <)`: two tuples lie in the same orbit exactly when
//! they induce the same pattern of `<` and `=` between coordinates. The
//! canonical form is a dense, zero-based rank map, so orbit equality is plain
//! vector equality.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the arity of enumerated weak orders.
///
/// Ordered Bell numbers grow quickly: 47293 orders at arity 7.
pub const DEFAULT_MAX_ARITY: usize = 7;

/// An orbit of an `n`-tuple of rationals, stored as a surjective rank map.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u8>")]
pub struct WeakOrder {
    ranks: Vec<u8>,
}

impl WeakOrder {
    /// Canonicalizes an arbitrary labelling: `[5, 9, 9]` becomes `[0, 1, 1]`.
    pub fn from_labels<T: PartialOrd>(labels: &[T]) -> Result<Self> {
        canonicalize(labels)
    }

    /// Builds a weak order from ranks that are already dense and zero-based.
    pub fn from_ranks(ranks: Vec<u8>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::EmptyTuple);
        }
        let m = *ranks.iter().max().unwrap() as usize + 1;
        let mut seen = vec![false; m];
        for &r in &ranks {
            seen[r as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidOrder(format!(
                "ranks {ranks:?} are not surjective onto 0..{m}"
            )));
        }
        Ok(WeakOrder { ranks })
    }

    /// Internal constructor; also admits the arity-0 order used as the unit
    /// of joins.
    pub(crate) fn from_ranks_unchecked(ranks: Vec<u8>) -> Self {
        debug_assert!(ranks.is_empty() || WeakOrder::from_ranks(ranks.clone()).is_ok());
        WeakOrder { ranks }
    }

    pub(crate) fn unit() -> Self {
        WeakOrder { ranks: Vec::new() }
    }

    /// The orbit in which every coordinate is equal.
    pub fn all_equal(n: usize) -> Self {
        assert!(n > 0, "weak orders have positive arity");
        WeakOrder { ranks: vec![0; n] }
    }

    pub fn arity(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[u8] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> u8 {
        self.ranks[i]
    }

    /// Number of blocks (distinct values) of the orbit.
    pub fn num_blocks(&self) -> usize {
        self.ranks.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// True when all coordinates are pairwise distinct.
    pub fn is_injective(&self) -> bool {
        self.num_blocks() == self.arity()
    }

    pub fn cmp_positions(&self, i: usize, j: usize) -> Ordering {
        self.ranks[i].cmp(&self.ranks[j])
    }

    /// Positions grouped by block, lowest block first.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &r) in self.ranks.iter().enumerate() {
            out[r as usize].push(i);
        }
        out
    }

    /// Action of `x -> -x`: block order reversed.
    pub fn dual(&self) -> Self {
        if self.ranks.is_empty() {
            return self.clone();
        }
        let top = self.num_blocks() as u8 - 1;
        WeakOrder {
            ranks: self.ranks.iter().map(|&r| top - r).collect(),
        }
    }

    /// Canonical pattern of the selected coordinates, in the given order.
    ///
    /// Repeated indices are allowed and yield equal coordinates.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if let Some(&index) = keep.iter().find(|&&i| i >= self.arity()) {
            return Err(Error::IndexOutOfRange {
                index,
                arity: self.arity(),
            });
        }
        Ok(self.restrict_unchecked(keep))
    }

    pub(crate) fn restrict_unchecked(&self, keep: &[usize]) -> Self {
        let picked: Vec<u8> = keep.iter().map(|&i| self.ranks[i]).collect();
        WeakOrder {
            ranks: densify(&picked),
        }
    }

    /// All `2m + 1` orders on one more coordinate whose restriction to the
    /// first `n` coordinates is `self`.
    ///
    /// Order: below block 0, equal to block 0, between blocks 0 and 1, ...,
    /// above the top block.
    pub fn extensions(&self) -> Vec<Self> {
        let m = self.num_blocks() as u8;
        let mut out = Vec::with_capacity(2 * m as usize + 1);
        for slot in 0..=(2 * m) {
            let mut ranks = Vec::with_capacity(self.arity() + 1);
            if slot % 2 == 0 {
                // new block inserted in gap slot/2
                let g = slot / 2;
                ranks.extend(self.ranks.iter().map(|&r| if r >= g { r + 1 } else { r }));
                ranks.push(g);
            } else {
                ranks.extend_from_slice(&self.ranks);
                ranks.push(slot / 2);
            }
            out.push(WeakOrder { ranks });
        }
        out
    }

    /// Renders the orbit as a chain such as `x < y = z`.
    pub fn describe<S: AsRef<str>>(&self, names: &[S]) -> String {
        self.blocks()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&i| names.get(i).map_or_else(|| format!("v{i}"), |s| s.as_ref().to_string()))
                    .collect::<Vec<_>>()
                    .join(" = ")
            })
            .collect::<Vec<_>>()
            .join(" < ")
    }
}

impl fmt::Debug for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.ranks)
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.ranks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<i64>> for WeakOrder {
    type Error = Error;

    fn try_from(labels: Vec<i64>) -> Result<Self> {
        canonicalize(&labels)
    }
}

impl From<WeakOrder> for Vec<u8> {
    fn from(w: WeakOrder) -> Self {
        w.ranks
    }
}

/// Replaces labels by their dense rank among the distinct labels.
fn densify(labels: &[u8]) -> Vec<u8> {
    let mut distinct: Vec<u8> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    labels
        .iter()
        .map(|l| distinct.binary_search(l).unwrap() as u8)
        .collect()
}

/// The orbit of a tuple: `ranks[i] < ranks[j]` iff `values[i] < values[j]`.
pub fn canonicalize<T: PartialOrd>(values: &[T]) -> Result<WeakOrder> {
    if values.is_empty() {
        return Err(Error::EmptyTuple);
    }
    if values.len() > u8::MAX as usize {
        return Err(Error::ArityBoundExceeded {
            arity: values.len(),
            bound: u8::MAX as usize,
        });
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    let mut incomparable = false;
    idx.sort_by(|&a, &b| {
        values[a].partial_cmp(&values[b]).unwrap_or_else(|| {
            incomparable = true;
            Ordering::Equal
        })
    });
    if incomparable {
        return Err(Error::Incomparable);
    }
    let mut ranks = vec![0u8; values.len()];
    let mut rank = 0u8;
    for k in 0..idx.len() {
        if k > 0 {
            match values[idx[k - 1]].partial_cmp(&values[idx[k]]) {
                Some(Ordering::Less) => rank += 1,
                Some(Ordering::Equal) => {}
                _ => return Err(Error::Incomparable),
            }
        }
        ranks[idx[k]] = rank;
    }
    Ok(WeakOrder { ranks })
}

/// All weak orders on `n` coordinates, sorted, under the default ceiling.
pub fn enumerate_weak_orders(n: usize) -> Result<Vec<WeakOrder>> {
    enumerate_weak_orders_bounded(n, DEFAULT_MAX_ARITY)
}

/// All weak orders on `n` coordinates, sorted lexicographically by rank map.
pub fn enumerate_weak_orders_bounded(n: usize, max_arity: usize) -> Result<Vec<WeakOrder>> {
    if n == 0 {
        return Err(Error::EmptyTuple);
    }
    if n > max_arity {
        return Err(Error::ArityBoundExceeded {
            arity: n,
            bound: max_arity,
        });
    }
    let mut level = vec![WeakOrder::all_equal(1)];
    for _ in 1..n {
        level = level.iter().flat_map(WeakOrder::extensions).collect();
    }
    level.sort_unstable();
    Ok(level)
}

/// All weak orders on the union of two variable lists that restrict to `w1`
/// on `a_vars` and to `w2` on `b_vars`.
///
/// The union lists `a_vars` first, then the variables of `b_vars` that are
/// not in `a_vars`, in their `b_vars` order. Inconsistent inputs produce an
/// empty result.
pub fn joins<V: PartialEq + Clone>(
    a_vars: &[V],
    w1: &WeakOrder,
    b_vars: &[V],
    w2: &WeakOrder,
) -> Result<(Vec<V>, Vec<WeakOrder>)> {
    check_vars(a_vars, w1)?;
    check_vars(b_vars, w2)?;

    let mut union: Vec<V> = a_vars.to_vec();
    // b position -> union position
    let mut b_to_union = Vec::with_capacity(b_vars.len());
    let mut fresh = Vec::new();
    for (j, v) in b_vars.iter().enumerate() {
        match a_vars.iter().position(|a| a == v) {
            Some(i) => b_to_union.push(i),
            None => {
                b_to_union.push(union.len());
                fresh.push(j);
                union.push(v.clone());
            }
        }
    }

    let shared: Vec<usize> = (0..b_vars.len()).filter(|j| !fresh.contains(j)).collect();
    if !shared.is_empty() {
        let on_a: Vec<usize> = shared.iter().map(|&j| b_to_union[j]).collect();
        if w1.restrict_unchecked(&on_a) != w2.restrict_unchecked(&shared) {
            return Ok((union, Vec::new()));
        }
    }

    // Interleave the fresh variables one at a time, keeping only partial
    // orders that agree with w2 on the b-variables placed so far.
    let mut placed_b = shared;
    let mut current = vec![w1.clone()];
    for &j in &fresh {
        placed_b.push(j);
        let mut order_b = placed_b.clone();
        order_b.sort_unstable();
        let on_union: Vec<usize> = order_b.iter().map(|&k| b_to_union[k]).collect();
        let expected = w2.restrict_unchecked(&order_b);
        current = current
            .iter()
            .flat_map(WeakOrder::extensions)
            .filter(|ext| ext.restrict_unchecked(&on_union) == expected)
            .collect();
        if current.is_empty() {
            break;
        }
    }
    current.sort_unstable();
    Ok((union, current))
}

fn check_vars<V: PartialEq>(vars: &[V], w: &WeakOrder) -> Result<()> {
    if vars.len() != w.arity() {
        return Err(Error::ArityMismatch {
            name: "join operand".into(),
            expected: w.arity(),
            found: vars.len(),
        });
    }
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(Error::InvalidOrder("duplicate variable in join operand".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(r: &[u8]) -> WeakOrder {
        WeakOrder::from_ranks(r.to_vec()).unwrap()
    }

    /// Counts weak orders by brute force: every map {0..n} -> {0..m} that is
    /// onto, for every m <= n, deduplicated.
    fn surjection_oracle(n: usize) -> usize {
        let mut seen = std::collections::HashSet::new();
        for m in 1..=n {
            let total = m.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let mut f = Vec::with_capacity(n);
                for _ in 0..n {
                    f.push((c % m) as u8);
                    c /= m;
                }
                let mut hit = vec![false; m];
                f.iter().for_each(|&x| hit[x as usize] = true);
                if hit.iter().all(|&h| h) {
                    seen.insert(f);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(&[3.5, 3.5, -1.0]).unwrap(), w(&[1, 1, 0]));
        assert_eq!(canonicalize(&[0, 0, 0]).unwrap(), w(&[0, 0, 0]));
        assert_eq!(canonicalize(&[-1, 1, 2, 1]).unwrap(), w(&[0, 1, 2, 1]));
        assert_eq!(canonicalize::<i32>(&[]), Err(Error::EmptyTuple));
        assert_eq!(canonicalize(&[1.0, f64::NAN]), Err(Error::Incomparable));
    }

    #[test]
    fn enumeration_counts_match_surjection_oracle() {
        let expected: Vec<usize> = (1..=6).map(surjection_oracle).collect();
        assert_eq!(expected, vec![1, 3, 13, 75, 541, 4683]);
        for n in 1..=6 {
            let all = enumerate_weak_orders(n).unwrap();
            assert_eq!(all.len(), expected[n - 1], "n = {n}");
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
    }

    #[test]
    fn enumeration_respects_ceiling() {
        assert!(matches!(
            enumerate_weak_orders(8),
            Err(Error::ArityBoundExceeded { arity: 8, bound: 7 })
        ));
        assert_eq!(enumerate_weak_orders_bounded(2, 2).unwrap().len(), 3);
        assert!(enumerate_weak_orders_bounded(3, 2).is_err());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(w(&[0, 1, 2]).dual(), w(&[2, 1, 0]));
        assert_eq!(w(&[0, 0, 0]).dual(), w(&[0, 0, 0]));
        assert_eq!(w(&[1, 1, 0]).dual(), w(&[0, 0, 1]));
        for n in 1..=5 {
            for o in enumerate_weak_orders(n).unwrap() {
                assert_eq!(o.dual().dual(), o);
            }
        }
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(w(&[0, 1, 2]).restrict(&[0, 2]).unwrap(), w(&[0, 1]));
        assert_eq!(w(&[0, 0, 1]).restrict(&[0, 1]).unwrap(), w(&[0, 0]));
        assert_eq!(w(&[2, 0, 1]).restrict(&[1, 2]).unwrap(), w(&[0, 1]));
        assert_eq!(w(&[0, 1]).restrict(&[1, 1, 0]).unwrap(), w(&[1, 1, 0]));
        assert_eq!(w(&[0, 1]).restrict(&[]), Err(Error::EmptyTuple));
        assert!(w(&[0, 1]).restrict(&[2]).is_err());
    }

    #[test]
    fn extension_examples() {
        assert_eq!(w(&[0]).extensions().len(), 3);
        assert_eq!(w(&[0, 1]).extensions().len(), 5);
        assert_eq!(w(&[0, 0]).extensions().len(), 3);
        assert_eq!(
            w(&[0]).extensions(),
            vec![w(&[1, 0]), w(&[0, 0]), w(&[0, 1])]
        );
    }

    #[test]
    fn join_examples() {
        let (vars, js) = joins(&["x", "y"], &w(&[0, 1]), &["y", "z"], &w(&[0, 1])).unwrap();
        assert_eq!(vars, vec!["x", "y", "z"]);
        assert_eq!(js, vec![w(&[0, 1, 2])]);

        let (_, js) = joins(&["x", "y"], &w(&[0, 1]), &["x", "y"], &w(&[1, 0])).unwrap();
        assert!(js.is_empty());

        let (vars, js) = joins(&["x"], &w(&[0]), &["y"], &w(&[0])).unwrap();
        assert_eq!(vars, vec!["x", "y"]);
        assert_eq!(js.len(), 3);
    }

    #[test]
    fn serde_canonicalizes() {
        let o: WeakOrder = serde_json::from_str("[5,9,9]").unwrap();
        assert_eq!(o, w(&[0, 1, 1]));
        assert_eq!(serde_json::to_string(&o).unwrap(), "[0,1,1]");
        assert!(serde_json::from_str::<WeakOrder>("[]").is_err());
    }

    #[test]
    fn describe_chain() {
        assert_eq!(w(&[1, 0, 1]).describe(&["x", "y", "z"]), "y < x = z");
    }
}
