//! Concrete evaluation of the catalog operations, shared by the numeric
//! cross-check tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64 as Q;
use tqcsp_core::polymorphisms::{catalog, BinaryOp};
use tqcsp_core::{canonicalize, WeakOrder};

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn int(n: i64) -> Q {
    Q::from_integer(n)
}

/// Executable form and sample grid for each unary catalog operation.
pub fn executable(name: &str) -> (Box<dyn Fn(Q) -> Q>, Vec<Q>) {
    let quarter = |lo: i64| (1..=3).map(move |k| Q::from_integer(lo) + q(k, 4));
    match name {
        "minus" => (Box::new(|x: Q| -x), (-2..=2).map(int).collect()),
        "cyc" => {
            let pi = q(22, 7);
            (
                Box::new(move |x: Q| if x < pi { x + 100 } else { x - 100 }),
                (-1..=7).map(int).collect(),
            )
        }
        "wave" => {
            let mut g: Vec<Q> = (-4..=1).map(int).chain(quarter(0)).chain((2..=5).map(int)).collect();
            g.sort();
            (
                Box::new(|x: Q| {
                    if x < int(0) {
                        x
                    } else if x <= int(1) {
                        int(0)
                    } else {
                        x - 1
                    }
                }),
                g,
            )
        }
        "peak" => (
            Box::new(|x: Q| if x == int(0) { int(1) } else { int(-1) }),
            (-4..=4).map(int).collect(),
        ),
        "ic" => (
            Box::new(|x: Q| if x < int(0) { x } else { int(0) }),
            (-4..=4).map(int).collect(),
        ),
        "ci" => (
            Box::new(|x: Q| if x < int(0) { int(0) } else { x }),
            (-4..=4).map(int).collect(),
        ),
        "const" => (Box::new(|_| int(7)), (-2..=2).map(int).collect()),
        su if su.starts_with("su") => {
            let i: i64 = su[2..].parse().unwrap();
            let mut g: Vec<Q> = (-4..0).map(int).chain((i - 1 + 1..=i - 1 + 4).map(int)).collect();
            for j in 0..i {
                g.push(int(j));
                if j + 1 < i {
                    g.extend(quarter(j));
                }
            }
            g.sort();
            g.dedup();
            (
                Box::new(move |x: Q| {
                    if x < int(0) {
                        int(0)
                    } else if x >= int(i - 1) {
                        int(i)
                    } else {
                        x.floor() + 1
                    }
                }),
                g,
            )
        }
        other => panic!("no executable form for {other}"),
    }
}

pub fn tuples(grid: &[Q], n: usize) -> Vec<Vec<Q>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                grid.iter().map(move |v| {
                    let mut t = t.clone();
                    t.push(*v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Output orbit of a binary op on concrete tuples, computed from the raw
/// comparison rules and checked to be a total preorder.
pub fn rule_image(op: BinaryOp, a: &[i64], b: &[i64]) -> WeakOrder {
    let pp_le = |a1: i64, b1: i64, a2: i64, b2: i64| (a1 <= 0 && a1 <= a2) || (0 < a1 && 0 < a2 && b1 <= b2);
    let lele_lt = |a1: i64, b1: i64, a2: i64, b2: i64| {
        (a1 <= 0 && a1 < a2) || (a1 <= 0 && a1 == a2 && b1 < b2) || (a1 > 0 && a2 > 0 && b1 < b2) || (a1 > 0 && b1 == b2 && a1 < a2)
    };
    let le = |i: usize, j: usize| -> bool {
        match op {
            BinaryOp::Pp => pp_le(a[i], b[i], a[j], b[j]),
            BinaryOp::Dpp => pp_le(-a[j], -b[j], -a[i], -b[i]),
            BinaryOp::Lele => !lele_lt(a[j], b[j], a[i], b[i]),
            BinaryOp::Dlele => !lele_lt(-a[i], -b[i], -a[j], -b[j]),
            _ => unreachable!(),
        }
    };
    let n = a.len();
    for i in 0..n {
        for j in 0..n {
            assert!(le(i, j) || le(j, i), "{op:?} not total on {a:?} {b:?}");
            for k in 0..n {
                assert!(!(le(i, j) && le(j, k)) || le(i, k), "{op:?} not transitive on {a:?} {b:?}");
            }
        }
    }
    let ranks: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| le(j, i) && !le(i, j)).count()).collect();
    canonicalize(&ranks).unwrap()
}

/// Compares the symbolic images of a unary catalog op with concrete
/// evaluation on every orbit of arity `1..=max_arity`.
pub fn unary_matches(name: &str, max_arity: usize) -> Result<usize, String> {
    let op = catalog::unary(name).map_err(|e| e.to_string())?;
    let (f, grid) = executable(name);
    let mut checked = 0;
    for n in 1..=max_arity {
        let mut numeric: BTreeMap<WeakOrder, BTreeSet<WeakOrder>> = BTreeMap::new();
        for t in tuples(&grid, n) {
            let image: Vec<Q> = t.iter().map(|&x| f(x)).collect();
            numeric.entry(canonicalize(&t).unwrap()).or_default().insert(canonicalize(&image).unwrap());
        }
        for w in tqcsp_core::enumerate_weak_orders(n).unwrap() {
            if numeric.get(&w) != Some(&op.images(&w)) {
                return Err(format!("{name} on {w}: symbolic {:?}, numeric {:?}", op.images(&w), numeric.get(&w)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Same for a binary op on pairs of orbits of arity `n`, with first
/// arguments drawn from `[-amax, amax]` and second from `[0, 3]`.
pub fn binary_matches(op: BinaryOp, n: usize, amax: i64) -> Result<usize, String> {
    let ints = |lo: i64, hi: i64| -> Vec<Vec<i64>> {
        let grid: Vec<Q> = (lo..=hi).map(int).collect();
        tuples(&grid, n).into_iter().map(|t| t.iter().map(|x| x.to_integer()).collect()).collect()
    };
    let mut numeric: BTreeMap<(WeakOrder, WeakOrder), BTreeSet<WeakOrder>> = BTreeMap::new();
    let bs = ints(0, 3);
    for a in ints(-amax, amax) {
        let wa = canonicalize(&a).unwrap();
        for b in &bs {
            numeric.entry((wa.clone(), canonicalize(b).unwrap())).or_default().insert(rule_image(op, &a, b));
        }
    }
    let all = tqcsp_core::enumerate_weak_orders(n).unwrap();
    for w1 in &all {
        for w2 in &all {
            let symbolic = op.image_set(w1, w2);
            if numeric.get(&(w1.clone(), w2.clone())) != Some(&symbolic) {
                return Err(format!("{op:?} on {w1}, {w2}"));
            }
        }
    }
    Ok(all.len() * all.len())
}
