//! Ord-Horn, positive and equality definability with certificates, and
//! Guarded Ord-Horn recognition and bounded synthesis.

mod equality;
mod goh;
mod ordhorn;
mod positive;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::Bounds;
use crate::error::{Error, Result};
use crate::formulas::{relation_of, Formula};
use crate::relations::{output_names, TemporalRelation};

pub use equality::{equality_definition, equality_formula, pattern_formula, Equality};
pub use goh::{goh_recognize, goh_search, GohFormula, GohOutcome, MAX_GOH_ARITY};
pub use ordhorn::{clauses_formula, ordhorn_definition, ordhorn_formula, OhClause, OrdHorn};
pub use positive::{atoms_included, coarsenings, orbit_le_atoms, positive_definition, positive_formula, Positive};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DefinitionKind {
    Oh,
    Positive,
    Equality,
    Goh,
}

impl FromStr for DefinitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oh" | "ord-horn" => Ok(DefinitionKind::Oh),
            "positive" => Ok(DefinitionKind::Positive),
            "equality" => Ok(DefinitionKind::Equality),
            "goh" => Ok(DefinitionKind::Goh),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown definition kind `{other}`") }),
        }
    }
}

impl fmt::Display for DefinitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefinitionKind::Oh => "oh",
            DefinitionKind::Positive => "positive",
            DefinitionKind::Equality => "equality",
            DefinitionKind::Goh => "goh",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefinitionStatus {
    Defined,
    NotDefinable,
    NotFoundWithinBound,
}

/// Uniform result of [`define`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefinitionReport {
    pub kind: DefinitionKind,
    pub relation: String,
    pub status: DefinitionStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    /// Why the relation is not definable, or the bounds that were hit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Checks that a certificate defines exactly `r`.
pub fn verify_certificate(r: &TemporalRelation, f: &Formula) -> Result<()> {
    let got = relation_of(f, &output_names(r.arity()))?;
    if got != *r {
        return Err(Error::InternalInconsistency(format!("certificate {f} does not define {}", r.label())));
    }
    Ok(())
}

/// Runs one definability procedure and re-verifies its certificate.
pub fn define(kind: DefinitionKind, r: &TemporalRelation, bounds: &Bounds) -> Result<DefinitionReport> {
    let names = output_names(r.arity());
    let (status, certificate, detail) = match kind {
        DefinitionKind::Oh => match ordhorn_definition(r)? {
            OrdHorn::Definable { clauses } => (DefinitionStatus::Defined, Some(clauses_formula(&clauses, &names)), None),
            OrdHorn::NotOrdHorn { orbit } => (
                DefinitionStatus::NotDefinable,
                None,
                Some(format!("{} satisfies every entailed Ord-Horn clause", orbit.describe(&names))),
            ),
        },
        DefinitionKind::Positive => match positive_definition(r) {
            Positive::Definable { disjuncts, .. } => (DefinitionStatus::Defined, Some(positive_formula(&disjuncts, &names)), None),
            Positive::NotPositive { member, coarsening } => (
                DefinitionStatus::NotDefinable,
                None,
                Some(format!("{} is in, its coarsening {} is not", member.describe(&names), coarsening.describe(&names))),
            ),
        },
        DefinitionKind::Equality => match equality_definition(r) {
            Equality::Definable { patterns } => (DefinitionStatus::Defined, Some(equality_formula(&patterns, &names)), None),
            Equality::NotEquality { member, missing } => (
                DefinitionStatus::NotDefinable,
                None,
                Some(format!("{} is in, {} with the same equalities is not", member.describe(&names), missing.describe(&names))),
            ),
        },
        DefinitionKind::Goh => match goh_search(r, bounds) {
            Ok(GohOutcome::Found { formula, .. }) => (DefinitionStatus::Defined, Some(formula.to_formula(&names)), None),
            Ok(GohOutcome::NotFoundWithinBound { depth, conjuncts, width }) => (
                DefinitionStatus::NotFoundWithinBound,
                None,
                Some(format!("no GOH formula with D={depth}, C={conjuncts}, W={width}")),
            ),
            Err(Error::NotOrdHorn) => {
                (DefinitionStatus::NotDefinable, None, Some("GOH requires Ord-Horn input; the relation is not Ord-Horn".into()))
            }
            Err(e) => return Err(e),
        },
    };
    if let Some(f) = &certificate {
        verify_certificate(r, f)?;
    }
    Ok(DefinitionReport {
        kind,
        relation: r.label(),
        status,
        certificate: certificate.map(|f| f.to_string()),
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse;
    use crate::polymorphisms::{catalog as ops, closed_under_all_permutations, BinaryOp, ImageTable, Operation};
    use crate::relations::catalog as rel;

    fn cert(kind: DefinitionKind, r: &TemporalRelation) -> Option<String> {
        define(kind, r, &Bounds::default()).unwrap().certificate
    }

    #[test]
    fn ordhorn_examples() {
        let i = cert(DefinitionKind::Oh, &rel::i()).unwrap();
        assert!(i == "x!=y | x=z" || i == "x!=y | y=z", "{i}");
        let s = ordhorn_definition(&rel::s()).unwrap();
        let OrdHorn::Definable { clauses } = s else { panic!() };
        assert_eq!(clauses.len(), 3);
        assert!(clauses.iter().all(|c| c.diseqs.len() == 1 && c.literal.is_some_and(|l| l.1 == crate::Cmp::Eq)));
        assert!(!ordhorn_definition(&rel::betwc()).unwrap().is_definable());
        assert_eq!(cert(DefinitionKind::Oh, &rel::leq()).unwrap(), "x<=y");
        assert_eq!(cert(DefinitionKind::Oh, &TemporalRelation::full(2).unwrap()).unwrap(), "true");
        assert_eq!(cert(DefinitionKind::Oh, &TemporalRelation::empty(2).unwrap()).unwrap(), "false");
    }

    #[test]
    fn positive_examples() {
        let e = positive_definition(&rel::eqxor());
        let Positive::Definable { minimal, disjuncts } = &e else { panic!() };
        assert_eq!(minimal.len(), 4);
        assert_eq!(disjuncts.len(), 2);
        assert_eq!(cert(DefinitionKind::Positive, &rel::eqxor()).unwrap(), "x<=y & y<=x | x<=z & z<=x");
        assert!(matches!(positive_definition(&rel::neq()), Positive::NotPositive { .. }));
        assert_eq!(cert(DefinitionKind::Positive, &rel::leq()).unwrap(), "x<=y");
    }

    #[test]
    fn equality_examples() {
        let s = cert(DefinitionKind::Equality, &rel::s()).unwrap();
        assert_eq!(s, "x=y & x=z | x!=y & x!=z & y!=z");
        assert!(equality_definition(&rel::eqor(3).unwrap()).is_definable());
        assert!(!equality_definition(&rel::less()).is_definable());
    }

    #[test]
    fn goh_recognizer() {
        let yes = ["x<=y", "x=y", "x!=y | y!=z", "x!=z | x<y | y!=z", "x<=y & (x!=y | z=w)", "x<=y & y<=z & (x!=y | y!=z | z<w)"];
        for s in yes {
            assert!(goh_recognize(&parse(s).unwrap()), "{s}");
        }
        let no = ["x!=y | y=z", "x<y | z<w", "E u. x<=u", "!(x<y)", "x<=y | y<=x"];
        for s in no {
            assert!(!goh_recognize(&parse(s).unwrap()), "{s}");
        }
    }

    #[test]
    fn goh_search_examples() {
        let b = Bounds::default();
        let leq = goh_search(&rel::leq(), &b).unwrap();
        assert!(matches!(&leq, GohOutcome::Found { text, .. } if text == "x<=y"), "{leq:?}");
        assert!(matches!(goh_search(&rel::eq(), &b).unwrap(), GohOutcome::Found { text, .. } if text == "x=y"));
        assert!(!goh_search(&rel::i(), &b).unwrap().is_found());
        assert!(!goh_search(&rel::s(), &b).unwrap().is_found());
        assert_eq!(goh_search(&rel::betwc(), &b), Err(Error::NotOrdHorn));
        let less = goh_search(&rel::less(), &b).unwrap();
        assert!(matches!(less, GohOutcome::Found { text, .. } if text == "x<y"));
    }

    #[test]
    fn goh_certificates_are_recognized_and_ordhorn() {
        let b = Bounds::default();
        let lele = ImageTable::new(&Operation::Binary(BinaryOp::Lele), 3);
        let dlele = ImageTable::new(&Operation::Binary(BinaryOp::Dlele), 3);
        let mut found = 0;
        for mask in (0u128..8192).step_by(7) {
            if !(lele.preserves(mask) && dlele.preserves(mask)) {
                continue;
            }
            let r = TemporalRelation::from_mask(3, mask).unwrap();
            if let GohOutcome::Found { formula, .. } = goh_search(&r, &b).unwrap() {
                found += 1;
                let f = formula.to_formula(&output_names(3));
                assert!(goh_recognize(&f), "{f}");
                assert!(ordhorn_definition(&r).unwrap().is_definable());
                assert!(goh_recognize(&parse(&f.to_string()).unwrap()), "{f}");
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn small_arity_laws() {
        // Exhaustive at arity 2; the arity-3 suites live in the acceptance tests.
        let lele = ImageTable::new(&Operation::Binary(BinaryOp::Lele), 2);
        let dlele = ImageTable::new(&Operation::Binary(BinaryOp::Dlele), 2);
        let wave = ImageTable::new(&Operation::Unary(ops::wave()), 2);
        for mask in 0u128..8 {
            let r = TemporalRelation::from_mask(2, mask).unwrap();
            assert_eq!(ordhorn_definition(&r).unwrap().is_definable(), lele.preserves(mask) && dlele.preserves(mask));
            assert_eq!(positive_definition(&r).is_definable(), wave.preserves(mask));
            assert_eq!(equality_definition(&r).is_definable(), closed_under_all_permutations(&r));
            for kind in [DefinitionKind::Oh, DefinitionKind::Positive, DefinitionKind::Equality] {
                define(kind, &r, &Bounds::default()).unwrap();
            }
        }
    }
}
