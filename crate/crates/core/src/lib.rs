//! Symbolic analysis of temporal constraint languages over `(Q; <)`.
//!
//! Relations are stored finitely as sets of weak orders (orbits under the
//! order automorphisms of the rationals). On top of that representation the
//! crate provides exact pp-evaluation, preservation tests for a catalog of
//! polymorphisms, Ord-Horn / positive / equality / guarded Ord-Horn
//! definability, a QCSP evaluator, and the complexity classifier for
//! dually-closed languages.

pub mod bits;
pub mod classifier;
pub mod config;
pub mod definability;
pub mod error;
pub mod formulas;
pub mod generation;
pub mod orders;
pub mod polymorphisms;
pub mod qcsp;
pub mod relations;
pub mod sweep;

pub use classifier::{classify, explain, ClassificationResult, Label};
pub use config::Bounds;
pub use error::{Error, Result};
pub use formulas::{parse, Cmp, Formula, FormulaClass};
pub use orders::{canonicalize, enumerate_weak_orders, joins, WeakOrder};
pub use polymorphisms::Operation;
pub use qcsp::QcspInstance;
pub use relations::{catalog, pp_evaluate, pp_search, Language, TemporalRelation};
