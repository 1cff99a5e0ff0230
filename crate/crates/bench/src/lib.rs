//! Fixtures shared by the criterion benchmarks.

use tqcsp_core::{catalog, Language};

/// The hardness gadgets plus the basic order relations, under their
/// lowercase catalog names.
pub fn gadget_language() -> Language {
    let names = ["betwc", "cyclc", "eqxor", "s", "i", "less", "leq"];
    Language::new(names.iter().map(|n| catalog::by_name(n).expect("catalog name")).collect())
        .expect("distinct names")
}
