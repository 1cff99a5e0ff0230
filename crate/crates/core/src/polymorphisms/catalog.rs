//! Named operations.

use crate::error::{Error, Result};

use super::binary::BinaryOp;
use super::unary::{Behavior, Bound, Cell, UnaryOp};
use super::Operation;

/// Unary catalog names (`su_i` is available for every `i >= 1` as `su<i>`).
pub const UNARY_NAMES: [&str; 12] =
    ["minus", "cyc", "wave", "peak", "su1", "su2", "su3", "su4", "su5", "ic", "ci", "const"];

pub const BINARY_NAMES: [&str; 4] = ["pp", "dpp", "lele", "dlele"];

fn cell(from: &str, to: &str, behavior: Behavior) -> Cell {
    Cell { from: from.into(), to: to.into(), point: from == to, behavior }
}

fn op(name: &str, landmarks: &[&str], cells: Vec<Cell>) -> UnaryOp {
    let op = UnaryOp { name: name.into(), landmarks: landmarks.iter().map(|s| s.to_string()).collect(), cells };
    debug_assert!(op.validate().is_ok(), "catalog op {name} is malformed");
    op
}

use Behavior::{Constant, Decreasing, Increasing};
use Bound::{Landmark, NegInf, PosInf};

pub fn minus() -> UnaryOp {
    op("minus", &[], vec![cell("-inf", "+inf", Decreasing { lo: NegInf, hi: PosInf })])
}

/// Swaps the two sides of an irrational cut, keeping the order on each side.
pub fn cyc() -> UnaryOp {
    op(
        "cyc",
        &["pi"],
        vec![
            cell("-inf", "pi", Increasing { lo: Landmark(0), hi: PosInf }),
            cell("pi", "+inf", Increasing { lo: NegInf, hi: Landmark(0) }),
        ],
    )
}

/// `x` below 0, `0` on `[0, 1]`, `x - 1` above 1.
pub fn wave() -> UnaryOp {
    op(
        "wave",
        &["0"],
        vec![
            cell("-inf", "0", Increasing { lo: NegInf, hi: Landmark(0) }),
            cell("0", "0", Constant(0)),
            cell("0", "1", Constant(0)),
            cell("1", "1", Constant(0)),
            cell("1", "+inf", Increasing { lo: Landmark(0), hi: PosInf }),
        ],
    )
}

/// `1` at 0 and `-1` elsewhere.
pub fn peak() -> UnaryOp {
    op(
        "peak",
        &["-1", "1"],
        vec![cell("-inf", "0", Constant(0)), cell("0", "0", Constant(1)), cell("0", "+inf", Constant(0))],
    )
}

/// Staircase: `0` below 0, `j` on `[j-1, j)` for `0 < j < i`, `i` from `i-1` on.
pub fn su(i: usize) -> Result<UnaryOp> {
    if i == 0 {
        return Err(Error::UnknownOperation("su0".into()));
    }
    let landmarks: Vec<String> = (0..=i).map(|j| j.to_string()).collect();
    let mut cells = vec![cell("-inf", "0", Constant(0))];
    for j in 1..=i {
        let at = (j - 1).to_string();
        let next = if j == i { "+inf".to_string() } else { j.to_string() };
        cells.push(cell(&at, &at, Constant(j)));
        cells.push(cell(&at, &next, Constant(j)));
    }
    let op = UnaryOp { name: format!("su{i}"), landmarks, cells };
    op.validate()?;
    Ok(op)
}

/// Identity below 0, `0` from 0 on.
pub fn ic() -> UnaryOp {
    op(
        "ic",
        &["0"],
        vec![
            cell("-inf", "0", Increasing { lo: NegInf, hi: Landmark(0) }),
            cell("0", "0", Constant(0)),
            cell("0", "+inf", Constant(0)),
        ],
    )
}

/// `0` below 0, identity from 0 on.
pub fn ci() -> UnaryOp {
    op(
        "ci",
        &["0"],
        vec![
            cell("-inf", "0", Constant(0)),
            cell("0", "0", Constant(0)),
            cell("0", "+inf", Increasing { lo: Landmark(0), hi: PosInf }),
        ],
    )
}

pub fn constant() -> UnaryOp {
    op("const", &["c"], vec![cell("-inf", "+inf", Constant(0))])
}

/// Piecewise operation by catalog name.
pub fn unary(name: &str) -> Result<UnaryOp> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "minus" | "-" => Ok(minus()),
        "cyc" => Ok(cyc()),
        "wave" => Ok(wave()),
        "peak" => Ok(peak()),
        "ic" => Ok(ic()),
        "ci" => Ok(ci()),
        "const" => Ok(constant()),
        _ => match lower.strip_prefix("su").map(str::parse::<usize>) {
            Some(Ok(i)) if i >= 1 => su(i),
            _ => Err(Error::UnknownOperation(name.into())),
        },
    }
}

/// Any catalog operation by name, unary or binary.
pub fn by_name(name: &str) -> Result<Operation> {
    if let Some(b) = BinaryOp::from_name(&name.to_ascii_lowercase()) {
        return Ok(Operation::Binary(b));
    }
    unary(name).map(Operation::Unary)
}

/// Name of the dual operation `-f(-x)` within the catalog.
pub fn dual_name(name: &str) -> Option<String> {
    let lower = name.to_ascii_lowercase();
    let d = match lower.as_str() {
        "minus" | "cyc" | "const" | "wave" => lower.clone(),
        "ic" => "ci".into(),
        "ci" => "ic".into(),
        other => return BinaryOp::from_name(other).map(|b| b.dual().name().to_string()),
    };
    Some(d)
}
