//! Complexity classification of dually-closed temporal languages.
//!
//! The decision tree only uses decidable checks: preservation by the four
//! binary operations, by constants and by the unary catalog, Ord-Horn
//! definability, and bounded Guarded Ord-Horn synthesis. Every step is kept
//! in a trail together with the argument it relies on.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::config::Bounds;
use crate::definability::{clauses_formula, goh_search, ordhorn_definition, verify_certificate, GohOutcome, OrdHorn};
use crate::error::{Error, Result};
use crate::polymorphisms::{
    catalog as ops, closed_under_all_permutations, preserved_by_constant, preserves_language, BinaryOp, Operation,
};
use crate::relations::{catalog, dual_closure_report, output_names, pp_search, Language, PpSearchOutcome};

/// Anchors naming the argument behind a step.
pub mod anchor {
    pub const DUAL_CLOSURE: &str = "dual-closure";
    pub const BINARY: &str = "ord-horn-via-binary";
    pub const GOH: &str = "guarded-ord-horn";
    pub const CONSTANT: &str = "constant-free-np-hard";
    pub const UNARY: &str = "unary-catalog";
    pub const SU1_POSITIVE: &str = "su1-positive-frontier";
    pub const SU1_NOT_POSITIVE: &str = "su1-not-positive";
    pub const EQUALITY: &str = "equality-language";
    pub const PEAK: &str = "peak-permutations";
    pub const MINUS_ONLY: &str = "minus-only-betwc";
    pub const CYC_ONLY: &str = "cyc-only-cyclc";
    pub const MINUS_AND_CYC: &str = "minus-and-cyc-s";
    pub const NO_CATALOG_OP: &str = "no-catalog-op-betwc";
}

/// Printed by [`explain`] when dual closure could not be established.
pub const DUAL_CLOSURE_WARNING: &str =
    "WARNING: dual closure unverified; the classification assumes a dually-closed language";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    #[serde(rename = "P")]
    P,
    #[serde(rename = "NP-hard")]
    NpHard,
    #[serde(rename = "coNP-hard")]
    CoNpHard,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::P => "P",
            Label::NpHard => "NP-hard",
            Label::CoNpHard => "coNP-hard",
            Label::Inconclusive => "inconclusive",
        }
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(self) -> i32 {
        match self {
            Label::P => 0,
            Label::NpHard => 10,
            Label::CoNpHard => 11,
            Label::Inconclusive => 20,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    DualClosureUnverified,
    GohBoundConditional,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::DualClosureUnverified => "dual-closure-unverified",
            Flag::GohBoundConditional => "goh-bound-conditional",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrailStep {
    pub check: String,
    pub outcome: String,
    pub anchor: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Goh,
    OrdHorn,
    PpDefinition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub relation: String,
    pub kind: CertificateKind,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub label: Label,
    pub flags: Vec<Flag>,
    pub trail: Vec<TrailStep>,
    pub certificates: Vec<Certificate>,
    /// Why the label follows, for hardness results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    pub bounds: Bounds,
}

impl ClassificationResult {
    /// Anchor of the step that decided the label.
    pub fn deciding_anchor(&self) -> Option<&str> {
        self.trail.last().map(|s| s.anchor.as_str())
    }

    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }
}

struct Run<'a> {
    lang: &'a Language,
    bounds: &'a Bounds,
    trail: Vec<TrailStep>,
    flags: Vec<Flag>,
    certificates: Vec<Certificate>,
}

impl Run<'_> {
    fn step(&mut self, check: impl Into<String>, outcome: impl Into<String>, anchor: &str) {
        self.trail.push(TrailStep { check: check.into(), outcome: outcome.into(), anchor: anchor.to_string() });
    }

    fn preserved(&mut self, op: Operation, anchor: &str) -> bool {
        let check = format!("preserved by {}", op.name());
        match preserves_language(&op, self.lang) {
            None => {
                self.step(check, "yes", anchor);
                true
            }
            Some(v) => {
                self.step(check, format!("no: {} on {}", v.violation, v.relation), anchor);
                false
            }
        }
    }

    fn finish(mut self, label: Label, basis: Option<String>) -> ClassificationResult {
        self.flags.sort();
        self.flags.dedup();
        ClassificationResult {
            label,
            flags: self.flags,
            trail: self.trail,
            certificates: self.certificates,
            basis,
            bounds: *self.bounds,
        }
    }

    /// Ord-Horn definitions are already known to exist; tries GOH ones.
    fn goh_route(mut self) -> Result<ClassificationResult> {
        let mut missing = Vec::new();
        for r in self.lang.iter() {
            let names = output_names(r.arity());
            match goh_search(r, self.bounds)? {
                GohOutcome::Found { formula, text } => {
                    verify_certificate(r, &formula.to_formula(&names))?;
                    self.step(format!("GOH definition of {}", r.label()), format!("found: {text}"), anchor::GOH);
                    self.certificates.push(Certificate { relation: r.label(), kind: CertificateKind::Goh, formula: text });
                }
                GohOutcome::NotFoundWithinBound { depth, conjuncts, width } => {
                    self.step(
                        format!("GOH definition of {}", r.label()),
                        format!("not found within D={depth}, C={conjuncts}, W={width}"),
                        anchor::GOH,
                    );
                    if let OrdHorn::Definable { clauses } = ordhorn_definition(r)? {
                        self.certificates.push(Certificate {
                            relation: r.label(),
                            kind: CertificateKind::OrdHorn,
                            formula: clauses_formula(&clauses, &names).to_string(),
                        });
                    }
                    missing.push(r.label());
                }
            }
        }
        if missing.is_empty() {
            return Ok(self.finish(Label::P, None));
        }
        self.flags.push(Flag::GohBoundConditional);
        let basis = format!(
            "dually-closed Ord-Horn but no Guarded Ord-Horn definition of {} within the bounds; such languages are coNP-hard",
            missing.join(", ")
        );
        Ok(self.finish(Label::CoNpHard, Some(basis)))
    }

    fn ordhorn_all(&mut self, anchor: &str) -> Result<bool> {
        let mut all = true;
        for r in self.lang.iter() {
            let outcome = match ordhorn_definition(r)? {
                OrdHorn::Definable { clauses } => format!("yes: {}", clauses_formula(&clauses, &output_names(r.arity()))),
                OrdHorn::NotOrdHorn { orbit } => {
                    all = false;
                    format!("no: {} satisfies every entailed clause", orbit.describe(&output_names(r.arity())))
                }
            };
            self.step(format!("Ord-Horn definition of {}", r.label()), outcome, anchor);
        }
        Ok(all)
    }
}

/// Runs the classification pipeline on `lang`.
pub fn classify(lang: &Language, bounds: &Bounds) -> Result<ClassificationResult> {
    bounds.validate()?;
    if lang.is_empty() {
        return Err(Error::InvalidLanguage("no relations".into()));
    }
    if lang.max_arity() > bounds.max_arity {
        return Err(Error::ArityBoundExceeded { arity: lang.max_arity(), bound: bounds.max_arity });
    }
    let mut run = Run { lang, bounds, trail: Vec::new(), flags: Vec::new(), certificates: Vec::new() };

    // 1. Dual closure.
    let report = dual_closure_report(lang, bounds)?;
    if report.closed {
        run.step("dual closure", "verified", anchor::DUAL_CLOSURE);
    } else {
        run.step("dual closure", format!("unverified for {}", report.unverified().join(", ")), anchor::DUAL_CLOSURE);
        run.flags.push(Flag::DualClosureUnverified);
    }

    // 2. Binary operations: dually-closed Ord-Horn.
    let lele = run.preserved(Operation::Binary(BinaryOp::Lele), anchor::BINARY);
    let dlele = run.preserved(Operation::Binary(BinaryOp::Dlele), anchor::BINARY);
    let pp = run.preserved(Operation::Binary(BinaryOp::Pp), anchor::BINARY);
    let dpp = run.preserved(Operation::Binary(BinaryOp::Dpp), anchor::BINARY);
    if (lele && dlele) || (pp && dpp) {
        if !run.ordhorn_all(anchor::BINARY)? {
            return Err(Error::InternalInconsistency(
                "language preserved by a dual pair of binary operations is not Ord-Horn".into(),
            ));
        }
        return run.goh_route();
    }

    // 3. No constant polymorphism.
    if let Some(r) = lang.iter().find(|r| !preserved_by_constant(r)) {
        let label = r.label();
        run.step("preserved by a constant", format!("no: {label} has no constant tuple"), anchor::CONSTANT);
        let basis = "preserved neither by pp, dpp, lele, dlele nor by a constant; already the CSP is NP-hard";
        return Ok(run.finish(Label::NpHard, Some(basis.into())));
    }
    run.step("preserved by a constant", "yes", anchor::CONSTANT);

    // 4. Unary catalog.
    let su1 = run.preserved(Operation::Unary(ops::su(1)?), anchor::UNARY);
    let ic = run.preserved(Operation::Unary(ops::ic()), anchor::UNARY);
    let ci = run.preserved(Operation::Unary(ops::ci()), anchor::UNARY);
    let peak = run.preserved(Operation::Unary(ops::peak()), anchor::UNARY);
    let minus = run.preserved(Operation::Unary(ops::minus()), anchor::UNARY);
    let cyc = run.preserved(Operation::Unary(ops::cyc()), anchor::UNARY);
    let wave = run.preserved(Operation::Unary(ops::wave()), anchor::UNARY);
    let not_closed: Vec<String> = lang.iter().filter(|r| !closed_under_all_permutations(r)).map(|r| r.label()).collect();
    let perms = not_closed.is_empty();
    run.step(
        "preserved by all permutations",
        if perms { "yes".to_string() } else { format!("no: {}", not_closed.join(", ")) },
        anchor::UNARY,
    );

    // a. su1, ic or ci: positive or NP-hard, and positive without pp/dpp is NP-hard.
    if su1 || ic || ci {
        let (a, basis) = if wave {
            (anchor::SU1_POSITIVE, "positive (preserved by wave) but preserved neither by pp nor by dpp: NP-hard")
        } else {
            (anchor::SU1_NOT_POSITIVE, "preserved by su1 (or ic/ci) but not positive: NP-hard")
        };
        run.step("su1/ic/ci branch", if wave { "positive" } else { "not positive" }, a);
        return Ok(run.finish(Label::NpHard, Some(basis.into())));
    }

    // b. Equality language.
    if perms {
        run.step("equality language", "yes", anchor::EQUALITY);
        if run.ordhorn_all(anchor::EQUALITY)? {
            return run.goh_route();
        }
        let mut targets = vec![("EqXor", catalog::eqxor(), Label::NpHard)];
        for n in 3..=catalog::MAX_EQOR {
            targets.push(("EqOr", catalog::eqor(n)?, Label::NpHard));
        }
        targets.push(("I", catalog::i(), Label::CoNpHard));
        targets.push(("S", catalog::s(), Label::CoNpHard));
        for (name, target, label) in targets {
            let name = if name == "EqOr" { format!("EqOr{}", target.arity()) } else { name.to_string() };
            match pp_search(&target, lang, bounds)? {
                PpSearchOutcome::Found { text, .. } => {
                    run.step(format!("pp-definition of {name}"), format!("found: {text}"), anchor::EQUALITY);
                    run.certificates.push(Certificate { relation: name.clone(), kind: CertificateKind::PpDefinition, formula: text });
                    return Ok(run.finish(label, Some(format!("pp-defines {name}"))));
                }
                PpSearchOutcome::NotFoundWithinBound { existentials, atoms, .. } => {
                    run.step(
                        format!("pp-definition of {name}"),
                        format!("not found within E={existentials}, A={atoms}"),
                        anchor::EQUALITY,
                    );
                }
            }
        }
        let basis = format!(
            "equality language that is not Ord-Horn and pp-defines no hard gadget within E={}, A={}",
            bounds.max_existentials, bounds.max_atoms
        );
        return Ok(run.finish(Label::Inconclusive, Some(basis)));
    }

    // c.-g. Contrapositives of the pp-definability lemmas.
    let (a, basis) = if peak {
        (anchor::PEAK, "preserved by peak but not an equality language: pp-defines EqXor or some EqOr_n, NP-hard")
    } else if minus && !cyc {
        (anchor::MINUS_ONLY, "preserved by - only among the catalog: pp-defines BetwC, coNP-hard")
    } else if cyc && !minus {
        (anchor::CYC_ONLY, "preserved by cyc only among the catalog: pp-defines CyclC, coNP-hard")
    } else if minus && cyc {
        (anchor::MINUS_AND_CYC, "preserved by - and cyc only among the catalog: pp-defines S, coNP-hard")
    } else {
        (anchor::NO_CATALOG_OP, "preserved by a constant and no catalog operation: pp-defines BetwC, coNP-hard")
    };
    let label = if peak { Label::NpHard } else { Label::CoNpHard };
    run.step("catalog branch", label.as_str(), a);
    Ok(run.finish(label, Some(basis.into())))
}

/// Plain-text report of a classification.
pub fn explain(result: &ClassificationResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "label: {}", result.label);
    if result.has_flag(Flag::DualClosureUnverified) {
        let _ = writeln!(out, "{DUAL_CLOSURE_WARNING}");
    }
    if !result.flags.is_empty() {
        let flags: Vec<&str> = result.flags.iter().map(|f| f.as_str()).collect();
        let _ = writeln!(out, "flags: {}", flags.join(", "));
    }
    let _ = writeln!(out, "bounds: {}", result.bounds);
    let _ = writeln!(out, "trail:");
    for (i, s) in result.trail.iter().enumerate() {
        let _ = writeln!(out, "  {:>2}. {}: {} [{}]", i + 1, s.check, s.outcome, s.anchor);
    }
    for c in &result.certificates {
        let kind = match c.kind {
            CertificateKind::Goh => "GOH certificate",
            CertificateKind::OrdHorn => "Ord-Horn certificate",
            CertificateKind::PpDefinition => "pp-definition",
        };
        let _ = writeln!(out, "{kind}: {} ({})", c.formula, c.relation);
    }
    if let Some(b) = &result.basis {
        let _ = writeln!(out, "basis: {b}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymorphisms::{preserves, ImageTable};
    use crate::relations::TemporalRelation;

    fn run(rels: Vec<TemporalRelation>) -> ClassificationResult {
        classify(&Language::new(rels).unwrap(), &Bounds::default()).unwrap()
    }

    #[test]
    fn gadget_labels() {
        let leq = run(vec![catalog::leq()]);
        assert_eq!(leq.label, Label::P);
        assert_eq!(leq.certificates[0].formula, "x<=y");
        assert!(explain(&leq).contains("GOH certificate: x<=y"));

        for (r, a) in [(catalog::i(), anchor::GOH), (catalog::s(), anchor::GOH)] {
            let res = run(vec![r]);
            assert_eq!(res.label, Label::CoNpHard);
            assert!(res.has_flag(Flag::GohBoundConditional));
            assert_eq!(res.deciding_anchor(), Some(a));
        }
        let betwc = run(vec![catalog::betwc()]);
        assert_eq!((betwc.label, betwc.deciding_anchor()), (Label::CoNpHard, Some(anchor::MINUS_ONLY)));
        let text = explain(&betwc);
        assert!(text.contains(anchor::MINUS_ONLY));
        let violated = betwc.trail.iter().filter(|s| s.anchor == anchor::UNARY && s.outcome.starts_with("no")).count();
        assert_eq!(violated, 7);

        let cyclc = run(vec![catalog::cyclc()]);
        assert_eq!((cyclc.label, cyclc.deciding_anchor()), (Label::CoNpHard, Some(anchor::CYC_ONLY)));
        for r in [catalog::eqxor(), catalog::eqor(3).unwrap()] {
            let res = run(vec![r]);
            assert_eq!((res.label, res.deciding_anchor()), (Label::NpHard, Some(anchor::SU1_POSITIVE)));
        }
    }

    #[test]
    fn constant_free_is_np_hard() {
        let res = run(vec![catalog::neq(), catalog::betw()]);
        assert_eq!((res.label, res.deciding_anchor()), (Label::NpHard, Some(anchor::CONSTANT)));
    }

    #[test]
    fn unverified_dual_closure_is_flagged() {
        let low = crate::formulas::relation_of(&crate::parse("x<y | x<z").unwrap(), &output_names(3)).unwrap();
        let res = run(vec![low.named("low")]);
        assert!(res.has_flag(Flag::DualClosureUnverified));
        assert!(explain(&res).contains(DUAL_CLOSURE_WARNING));
    }

    #[test]
    fn trail_claims_reverify() {
        let res = run(vec![catalog::betwc()]);
        for s in &res.trail {
            if let Some(name) = s.check.strip_prefix("preserved by ") {
                if let Ok(op) = crate::polymorphisms::catalog::by_name(name) {
                    let ok = catalog::betwc();
                    assert_eq!(preserves(&op, &ok).is_none(), s.outcome == "yes", "{name}");
                }
            }
        }
    }

    #[test]
    fn dual_pair_preservation_implies_ordhorn_at_arity_3() {
        let pp = ImageTable::new(&Operation::Binary(BinaryOp::Pp), 3);
        let dpp = ImageTable::new(&Operation::Binary(BinaryOp::Dpp), 3);
        for mask in 0u128..8192 {
            if pp.preserves(mask) && dpp.preserves(mask) {
                let r = TemporalRelation::from_mask(3, mask).unwrap();
                assert!(ordhorn_definition(&r).unwrap().is_definable(), "{mask:#b}");
            }
        }
    }

    #[test]
    fn dual_language_same_label() {
        for r in [catalog::cyclc(), catalog::leq(), catalog::less(), catalog::eqxor(), catalog::i()] {
            let a = run(vec![r.clone()]);
            let b = run(vec![r.dual()]);
            assert_eq!((a.label, &a.flags), (b.label, &b.flags), "{}", r.label());
        }
    }
}
