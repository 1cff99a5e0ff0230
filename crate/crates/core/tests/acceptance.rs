//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tqcsp_core::classifier::{anchor, classify, Flag, Label};
use tqcsp_core::generation::identity_check_su1_from_ic_ci;
use tqcsp_core::polymorphisms::{catalog as ops, preserves, BinaryOp, Operation, Violation};
use tqcsp_core::qcsp::{evaluate, evaluate_naive, random_instance};
use tqcsp_core::relations::pp_satisfiable;
use tqcsp_core::sweep::{sweep, Suite};
use tqcsp_core::{catalog, parse, pp_evaluate, Bounds, Language, TemporalRelation};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:.2?}, limit {limit:?}"))
}

fn gadgets() -> Outcome {
    let target = catalog::i();
    for (name, r) in [("betwc", catalog::betwc()), ("cyclc", catalog::cyclc())] {
        let start = Instant::now();
        let lang = Language::new(vec![r.named(name)]).map_err(|e| e.to_string())?;
        let f = parse(&format!("E u. E v. {name}(x,y,u) & {name}(x,y,v) & {name}(u,v,z)")).map_err(|e| e.to_string())?;
        let got = pp_evaluate(&f, &lang, &["x", "y", "z"]).map_err(|e| e.to_string())?;
        ensure(got == target, || format!("{name} gadget gives {got}"))?;
        ensure(got.len() == 11, || format!("{name} gadget has {} orbits", got.len()))?;
        within(start, Duration::from_secs(1), name)?;
    }
    Ok("both gadgets define I (11 of 13 orbits)".into())
}

fn reverify(op: &Operation, r: &TemporalRelation, v: &Violation) -> bool {
    match (op, v) {
        (Operation::Unary(u), Violation::Unary { orbit, image }) => {
            r.contains(orbit) && !r.contains(image) && u.images(orbit).contains(image)
        }
        (Operation::Binary(b), Violation::Binary { first, second, image, .. }) => {
            r.contains(first) && r.contains(second) && !r.contains(image) && b.image_set(first, second).contains(image)
        }
        _ => false,
    }
}

fn preservation_table() -> Outcome {
    let start = Instant::now();
    let op = |n: &str| ops::by_name(n).expect("catalog op");
    let mut table: Vec<(Operation, TemporalRelation, bool)> = vec![
        (op("minus"), catalog::betw(), true),
        (op("minus"), catalog::betwc(), true),
        (op("cyc"), catalog::cycl(), true),
        (op("cyc"), catalog::cyclc(), true),
        (op("minus"), catalog::sep(), true),
        (op("cyc"), catalog::sep(), true),
        (op("minus"), catalog::s(), true),
        (op("cyc"), catalog::s(), true),
        (op("cyc"), catalog::betwc(), false),
        (op("minus"), catalog::cyclc(), false),
        (op("su1"), catalog::s(), false),
        (op("su1"), catalog::betwc(), false),
        (op("peak"), catalog::s(), false),
        (op("peak"), catalog::betwc(), false),
    ];
    for name in ops::UNARY_NAMES.iter().chain(ops::BINARY_NAMES.iter()) {
        table.push((op(name), catalog::eq(), true));
    }
    let mut witnesses = 0;
    for (o, r, expected) in &table {
        let v = preserves(o, r);
        ensure(v.is_none() == *expected, || format!("{} on {}: expected preserved={expected}", o.name(), r.label()))?;
        if let Some(v) = v {
            ensure(reverify(o, r, &v), || format!("witness {v} for {} on {} does not re-verify", o.name(), r.label()))?;
            witnesses += 1;
        }
    }
    within(start, Duration::from_secs(5), "preservation table")?;
    Ok(format!("{} entries, {witnesses} violation witnesses re-verified", table.len()))
}

fn law_suites() -> Outcome {
    let start = Instant::now();
    let report = sweep(3).map_err(|e| e.to_string())?;
    let required = [Suite::OrdHorn, Suite::Positive, Suite::IcCiSu1, Suite::Equality];
    for s in &report.suites {
        ensure(s.relations == 8192, || format!("{} covered {} relations", s.suite.name(), s.relations))?;
        ensure(s.violations == 0, || format!("{}: {} violations, e.g. {:?}", s.law, s.violations, s.witnesses))?;
    }
    ensure(required.iter().all(|r| report.suites.iter().any(|s| s.suite == *r)), || "missing suite".into())?;
    within(start, Duration::from_secs(600), "law suites")?;
    let premises: Vec<String> = report.suites.iter().map(|s| format!("{}:{}", s.suite.name(), s.premise_holds)).collect();
    Ok(format!("0 counterexamples over 8192 relations ({})", premises.join(", ")))
}

fn classifier_table() -> Outcome {
    let start = Instant::now();
    let b = Bounds::default();
    let cases: Vec<(&str, TemporalRelation, Label, &str, Option<Flag>)> = vec![
        ("leq", catalog::leq(), Label::P, anchor::GOH, None),
        ("i", catalog::i(), Label::CoNpHard, anchor::GOH, Some(Flag::GohBoundConditional)),
        ("s", catalog::s(), Label::CoNpHard, anchor::GOH, Some(Flag::GohBoundConditional)),
        ("betwc", catalog::betwc(), Label::CoNpHard, anchor::MINUS_ONLY, None),
        ("cyclc", catalog::cyclc(), Label::CoNpHard, anchor::CYC_ONLY, None),
        ("eqxor", catalog::eqxor(), Label::NpHard, anchor::SU1_POSITIVE, None),
        ("eqor3", catalog::eqor(3).map_err(|e| e.to_string())?, Label::NpHard, anchor::SU1_POSITIVE, None),
    ];
    for (name, r, label, anc, flag) in cases {
        let lang = Language::new(vec![r.named(name)]).map_err(|e| e.to_string())?;
        let res = classify(&lang, &b).map_err(|e| e.to_string())?;
        ensure(res.label == label, || format!("{name}: label {} instead of {label}", res.label))?;
        ensure(res.deciding_anchor() == Some(anc), || format!("{name}: anchor {:?} instead of {anc}", res.deciding_anchor()))?;
        if let Some(f) = flag {
            ensure(res.has_flag(f), || format!("{name}: missing flag {}", f.as_str()))?;
        }
        if name == "leq" {
            ensure(res.certificates.iter().any(|c| c.formula == "x<=y"), || "leq certificate is not x<=y".into())?;
        }
    }
    within(start, Duration::from_secs(30), "classifier table")?;
    Ok("7 languages classified with the expected labels and anchors".into())
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    let b = Bounds::default();
    let mut all_ops: Vec<Operation> = ops::UNARY_NAMES.iter().chain(ops::BINARY_NAMES.iter()).map(|n| ops::by_name(n).unwrap()).collect();
    all_ops.push(Operation::Binary(BinaryOp::Min));
    all_ops.push(Operation::Binary(BinaryOp::Max));
    for k in 0..200 {
        let r = TemporalRelation::from_mask(3, rng.random_range(0..1u128 << 13)).unwrap();
        let d = r.dual();
        let l1 = Language::new(vec![r.clone().named("r"), d.clone().named("rd")]).map_err(|e| e.to_string())?;
        let l2 = Language::new(vec![d.clone().named("rd"), r.clone().named("r")]).map_err(|e| e.to_string())?;
        let c1 = classify(&l1, &b).map_err(|e| e.to_string())?;
        let c2 = classify(&l2, &b).map_err(|e| e.to_string())?;
        ensure(c1.label == c2.label && c1.flags == c2.flags, || {
            format!("relation #{k} {r}: {} vs {}", c1.label, c2.label)
        })?;
        for op in &all_ops {
            let direct = preserves(op, &r).is_none();
            let dual = preserves(&op.dual(), &d).is_none();
            ensure(direct == dual, || format!("{} on {r}: {direct}, dual {dual}", op.name()))?;
        }
    }
    Ok("200 random relations, labels and preservation facts commute".into())
}

fn qcsp_oracle() -> Outcome {
    let start = Instant::now();
    let lang = Language::new(vec![
        catalog::betwc().named("betwc"),
        catalog::cyclc().named("cyclc"),
        catalog::eqxor().named("eqxor"),
        catalog::s().named("s"),
        catalog::i().named("i"),
        catalog::less().named("less"),
        catalog::leq().named("leq"),
    ])
    .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9c5b);
    let mut truths = 0;
    for k in 0..500 {
        let vars = rng.random_range(1..=5);
        let atoms = rng.random_range(1..=4);
        let inst = random_instance(&mut rng, &lang, vars, atoms, 0.5);
        let v = evaluate(&inst);
        ensure(v == evaluate_naive(&inst), || format!("instance #{k} `{inst}` disagrees"))?;
        truths += v as usize;
        let ex = random_instance(&mut rng, &lang, vars, atoms, 1.0);
        let pp = pp_satisfiable(&ex.to_formula(), &lang).map_err(|e| e.to_string())?;
        ensure(evaluate(&ex) == pp, || format!("existential instance `{ex}` disagrees with pp_evaluate"))?;
    }
    within(start, Duration::from_secs(120), "qcsp oracle")?;
    Ok(format!("500 mixed instances ({truths} true) and 500 existential instances agree"))
}

fn numeric_cross_check() -> Outcome {
    let start = Instant::now();
    let mut orbits = 0;
    for name in ops::UNARY_NAMES {
        orbits += common::unary_matches(name, 4)?;
    }
    let mut pairs = 0;
    for op in [BinaryOp::Pp, BinaryOp::Dpp, BinaryOp::Lele, BinaryOp::Dlele] {
        for n in 1..=4 {
            pairs += common::binary_matches(op, n, 4)?;
        }
    }
    within(start, Duration::from_secs(300), "numeric cross-check")?;
    Ok(format!("{orbits} unary orbit images and {pairs} binary orbit-pair images match"))
}

fn identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d);
    let tuples: Vec<Vec<Rational64>> = (0..100)
        .map(|_| {
            let len = rng.random_range(1..=6);
            (0..len).map(|_| Rational64::new(rng.random_range(-40..=40), rng.random_range(1..=8))).collect()
        })
        .collect();
    let cases = identity_check_su1_from_ic_ci(&tuples);
    ensure(cases.len() == 100, || "wrong case count".into())?;
    if let Some(c) = cases.iter().find(|c| !c.pass) {
        return Err(format!("{:?}: expected {:?}, obtained {:?}", c.tuple, c.expected, c.obtained));
    }
    Ok("100 random tuples satisfy ci(alpha(ic(t))) = su1(t)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("gadget reproduction", gadgets),
        ("preservation table", preservation_table),
        ("arity-3 law suites", law_suites),
        ("classifier end-to-end", classifier_table),
        ("duality metamorphic suite", duality),
        ("QCSP oracle equivalence", qcsp_oracle),
        ("numeric cross-check", numeric_cross_check),
        ("generation identity", identity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(msg) => println!("PASS {} {name}: {msg} [{took:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} [{took:.2?}]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
