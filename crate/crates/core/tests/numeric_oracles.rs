//! Cross-checks of the symbolic image engines against concrete evaluation.

mod common;

use tqcsp_core::polymorphisms::{catalog, BinaryOp};

#[test]
fn unary_images_match_numeric_evaluation() {
    for name in catalog::UNARY_NAMES {
        common::unary_matches(name, 3).unwrap();
    }
}

#[test]
fn binary_images_match_comparison_rules() {
    for op in [BinaryOp::Pp, BinaryOp::Dpp, BinaryOp::Lele, BinaryOp::Dlele] {
        for n in 1..=3 {
            common::binary_matches(op, n, 3).unwrap();
        }
    }
}

#[test]
fn su_saturates_at_the_arity() {
    // su_i for i >= n adds no image patterns on n-tuples beyond those of su_n.
    for n in 1..=4 {
        let base = catalog::su(n).unwrap();
        for i in n + 1..=n + 2 {
            let op = catalog::su(i).unwrap();
            for w in tqcsp_core::enumerate_weak_orders(n).unwrap() {
                assert_eq!(op.images(&w), base.images(&w), "su{i} vs su{n} on {w}");
            }
        }
    }
}
