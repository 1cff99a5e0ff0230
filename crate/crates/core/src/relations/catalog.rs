//! Named relations: the hardness gadgets, the test relations of the unary
//! classification, and the basic order relations.

use super::TemporalRelation;
use crate::error::{Error, Result};
use crate::formulas::{parse, relation_of};

/// Largest `n` for which `eqor{n}` is materialized.
pub const MAX_EQOR: usize = 5;

/// Catalog names accepted by [`by_name`] (plus `eqor3` ..= `eqor5`).
pub const NAMES: &[&str] = &[
    "betwc", "cyclc", "eqxor", "eqor3", "eqor4", "eqor5", "s", "i", "betw", "cycl", "sep", "less", "leq", "eq",
    "neq", "greater", "geq",
];

pub const BETWC: &str = "(x<y & y<z) | (x>y & y>z) | (x=y & y=z)";
pub const CYCLC: &str = "(x<y & y<z) | (y<z & z<x) | (z<x & x<y) | (x=y & y=z)";
pub const EQXOR: &str = "x=y | x=z";
pub const S: &str = "(x=y & y=z) | (x!=y & x!=z & z!=y)";
pub const I: &str = "x!=y | y=z";
pub const BETW: &str = "(x<y & y<z) | (x>y & y>z)";
pub const CYCL: &str = "(x<y & y<z) | (y<z & z<x) | (z<x & x<y)";
pub const SEP: &str = "(x1<x2 & x2<y1 & y1<y2) | (x1<y2 & y2<y1 & y1<x2) | (y1<x2 & x2<x1 & x1<y2) \
    | (y1<y2 & y2<x1 & x1<x2) | (x2<x1 & x1<y2 & y2<y1) | (x2<y1 & y1<y2 & y2<x1) \
    | (y2<x1 & x1<x2 & x2<y1) | (y2<y1 & y1<x2 & x2<x1)";

const XYZ: [&str; 3] = ["x", "y", "z"];
const XY: [&str; 2] = ["x", "y"];

fn build(name: &str, text: &str, vars: &[&str]) -> TemporalRelation {
    let f = parse(text).expect("catalog formula parses");
    relation_of(&f, vars).expect("catalog formula evaluates").named(name)
}

pub fn betwc() -> TemporalRelation {
    build("betwc", BETWC, &XYZ)
}

pub fn cyclc() -> TemporalRelation {
    build("cyclc", CYCLC, &XYZ)
}

pub fn eqxor() -> TemporalRelation {
    build("eqxor", EQXOR, &XYZ)
}

/// Formula text of `eqor{n}`: some two coordinates are equal.
pub fn eqor_formula(n: usize) -> String {
    let mut parts = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            parts.push(format!("x{i}=x{j}"));
        }
    }
    parts.join(" | ")
}

pub fn eqor(n: usize) -> Result<TemporalRelation> {
    if !(3..=MAX_EQOR).contains(&n) {
        return Err(Error::ArityBoundExceeded { arity: n, bound: MAX_EQOR });
    }
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(build(&format!("eqor{n}"), &eqor_formula(n), &vars))
}

pub fn s() -> TemporalRelation {
    build("s", S, &XYZ)
}

pub fn i() -> TemporalRelation {
    build("i", I, &XYZ)
}

pub fn betw() -> TemporalRelation {
    build("betw", BETW, &XYZ)
}

pub fn cycl() -> TemporalRelation {
    build("cycl", CYCL, &XYZ)
}

pub fn sep() -> TemporalRelation {
    build("sep", SEP, &["x1", "y1", "x2", "y2"])
}

pub fn less() -> TemporalRelation {
    build("less", "x<y", &XY)
}

pub fn leq() -> TemporalRelation {
    build("leq", "x<=y", &XY)
}

pub fn eq() -> TemporalRelation {
    build("eq", "x=y", &XY)
}

pub fn neq() -> TemporalRelation {
    build("neq", "x!=y", &XY)
}

pub fn greater() -> TemporalRelation {
    build("greater", "x>y", &XY)
}

pub fn geq() -> TemporalRelation {
    build("geq", "x>=y", &XY)
}

/// Defining formula and variable order of a catalog relation.
pub fn definition(name: &str) -> Result<(String, Vec<String>)> {
    let v = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let key = name.to_ascii_lowercase();
    Ok(match key.as_str() {
        "betwc" => (BETWC.into(), v(&XYZ)),
        "cyclc" => (CYCLC.into(), v(&XYZ)),
        "eqxor" => (EQXOR.into(), v(&XYZ)),
        "s" => (S.into(), v(&XYZ)),
        "i" => (I.into(), v(&XYZ)),
        "betw" => (BETW.into(), v(&XYZ)),
        "cycl" => (CYCL.into(), v(&XYZ)),
        "sep" => (SEP.into(), v(&["x1", "y1", "x2", "y2"])),
        "less" => ("x<y".into(), v(&XY)),
        "leq" => ("x<=y".into(), v(&XY)),
        "eq" => ("x=y".into(), v(&XY)),
        "neq" => ("x!=y".into(), v(&XY)),
        "greater" => ("x>y".into(), v(&XY)),
        "geq" => ("x>=y".into(), v(&XY)),
        other => match other.strip_prefix("eqor").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if (3..=MAX_EQOR).contains(&n) => (eqor_formula(n), (1..=n).map(|i| format!("x{i}")).collect()),
            Some(n) => return Err(Error::ArityBoundExceeded { arity: n, bound: MAX_EQOR }),
            None => return Err(Error::UnknownRelation(name.to_string())),
        },
    })
}

/// Looks up a catalog relation by (case-insensitive) name.
pub fn by_name(name: &str) -> Result<TemporalRelation> {
    let (text, vars) = definition(name)?;
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(build(&name.to_ascii_lowercase(), &text, &vars))
}

/// Every catalog relation in listing order.
pub fn all() -> Vec<TemporalRelation> {
    NAMES.iter().map(|n| by_name(n).expect("catalog name")).collect()
}
