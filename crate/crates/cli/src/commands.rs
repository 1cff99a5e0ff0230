//! Subcommand implementations: load inputs, call the engine, render reports.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use tqcsp_core::classifier::{classify, explain};
use tqcsp_core::definability::{define, DefinitionKind, DefinitionStatus};
use tqcsp_core::formulas::relation_of;
use tqcsp_core::generation::{bounded_generation_check, classify_unary, ops_by_names, GenerationOutcome};
use tqcsp_core::polymorphisms::{catalog as ops, preserves, Operation, UnaryOp};
use tqcsp_core::qcsp::{evaluate_with_stats, QcspInstance};
use tqcsp_core::relations::PpSearchOutcome;
use tqcsp_core::sweep::sweep;
use tqcsp_core::{catalog, parse, pp_evaluate, pp_search, Bounds, Language, TemporalRelation};

use crate::{Cli, Command};

/// Display names of the catalog relations.
const DISPLAY: &[(&str, &str)] = &[
    ("betwc", "BetwC"),
    ("cyclc", "CyclC"),
    ("eqxor", "EqXor"),
    ("eqor3", "EqOr3"),
    ("eqor4", "EqOr4"),
    ("eqor5", "EqOr5"),
    ("s", "S"),
    ("i", "I"),
    ("betw", "Betw"),
    ("cycl", "Cycl"),
    ("sep", "Sep"),
    ("less", "Less"),
    ("leq", "Leq"),
    ("eq", "Eq"),
    ("neq", "Neq"),
    ("greater", "Greater"),
    ("geq", "Geq"),
];

fn load_language(path: &Path) -> Result<Language> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read language file {}", path.display()))?;
    let (lang, warnings) = Language::from_json(&text).with_context(|| format!("in language file {}", path.display()))?;
    for w in warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(lang)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Adds the bounds to a JSON object report.
fn with_bounds(mut value: Value, bounds: &Bounds) -> Value {
    if let Value::Object(map) = &mut value {
        map.insert("bounds".into(), serde_json::to_value(bounds).expect("bounds serialize"));
    }
    value
}

fn orbit_lines(r: &TemporalRelation, names: &[String]) -> String {
    let mut out = String::new();
    for w in r.orbits() {
        let _ = writeln!(out, "  {}", w.describe(names));
    }
    out
}

pub fn run(cli: &Cli) -> Result<u8> {
    let bounds = cli.global.bounds()?;
    let json = cli.global.json;
    match &cli.command {
        Command::Classify { language } => {
            let lang = load_language(language)?;
            let result = classify(&lang, &bounds)?;
            if json {
                print_json(&result)?;
            } else {
                print!("{}", explain(&result));
            }
            Ok(result.label.exit_code() as u8)
        }
        Command::PolyCheck { op, language } => {
            let op = ops::by_name(op)?;
            let lang = load_language(language)?;
            poly_check(&op, &lang, &bounds, json)
        }
        Command::PpEval { language, expr, vars } => {
            let lang = load_language(language)?;
            let f = parse(expr).context("in --expr")?;
            let names = vars.clone().unwrap_or_else(|| f.free_vars());
            let r = pp_evaluate(&f, &lang, &names)?;
            if json {
                let orbits: Vec<_> = r.orbits().iter().collect();
                print_json(&with_bounds(
                    json!({ "formula": f.to_string(), "vars": names, "count": r.len(), "orbits": orbits }),
                    &bounds,
                ))?;
            } else {
                println!("{} orbits over ({}):", r.len(), names.join(","));
                print!("{}", orbit_lines(&r, &names));
            }
            Ok(0)
        }
        Command::PpSearch { language, target, formula, vars } => {
            let lang = load_language(language)?;
            let target = match (target, formula) {
                (Some(name), _) => match lang.get(name) {
                    Some(r) => r.clone(),
                    None => catalog::by_name(name)?,
                },
                (None, Some(text)) => {
                    let f = parse(text).context("in --formula")?;
                    let names = vars.clone().unwrap_or_else(|| f.free_vars());
                    relation_of(&f, &names)?
                }
                (None, None) => bail!("give --target or --formula"),
            };
            let outcome = pp_search(&target, &lang, &bounds)?;
            if json {
                let mut v = serde_json::to_value(&outcome)?;
                if let Value::Object(map) = &mut v {
                    map.remove("formula");
                    map.insert("target".into(), json!(target.label()));
                }
                print_json(&with_bounds(v, &bounds))?;
            } else {
                match &outcome {
                    PpSearchOutcome::Found { text, vars, .. } => println!("found ({}): {text}", vars.join(",")),
                    PpSearchOutcome::NotFoundWithinBound { existentials, atoms, complete } => println!(
                        "no pp-definition with E={existentials}, A={atoms}{}",
                        if *complete { " (search complete)" } else { " (search truncated)" }
                    ),
                }
            }
            Ok(0)
        }
        Command::QcspEval { language, instance, expr } => {
            let lang = load_language(language)?;
            let text = match (instance, expr) {
                (Some(path), _) => {
                    fs::read_to_string(path).with_context(|| format!("cannot read instance file {}", path.display()))?
                }
                (None, Some(e)) => e.clone(),
                (None, None) => bail!("give --instance or --expr"),
            };
            let inst = QcspInstance::parse(text.trim(), &lang).with_context(|| match instance {
                Some(p) => format!("in instance file {}", p.display()),
                None => "in --expr".to_string(),
            })?;
            let (value, stats) = evaluate_with_stats(&inst);
            if json {
                print_json(&with_bounds(
                    json!({ "instance": inst.to_string(), "value": value, "stats": stats }),
                    &bounds,
                ))?;
            } else {
                println!("{value}");
                log::info!("{} nodes, {} memo hits", stats.nodes, stats.memo_hits);
            }
            Ok(0)
        }
        Command::Define { kind, relation } => {
            let kind: DefinitionKind = kind.parse()?;
            let rels: Vec<TemporalRelation> = if Path::new(relation).is_file() {
                load_language(Path::new(relation))?.relations().to_vec()
            } else {
                vec![catalog::by_name(relation)?]
            };
            let reports = rels.iter().map(|r| define(kind, r, &bounds)).collect::<tqcsp_core::Result<Vec<_>>>()?;
            if json {
                print_json(&with_bounds(json!({ "kind": kind, "reports": reports }), &bounds))?;
            } else {
                for rep in &reports {
                    match (&rep.status, &rep.certificate) {
                        (DefinitionStatus::Defined, Some(c)) => println!("{}: {c}", rep.relation),
                        _ => println!(
                            "{}: {} ({})",
                            rep.relation,
                            serde_json::to_value(rep.status)?.as_str().unwrap_or_default(),
                            rep.detail.as_deref().unwrap_or("")
                        ),
                    }
                }
            }
            Ok(0)
        }
        Command::UnaryClassify { op } => {
            let path = Path::new(op);
            let op = if path.is_file() {
                let text = fs::read_to_string(path).with_context(|| format!("cannot read op spec {}", path.display()))?;
                UnaryOp::from_json(&text).with_context(|| format!("in op spec {}", path.display()))?
            } else {
                ops::unary(op)?
            };
            let c = classify_unary(&op);
            if json {
                print_json(&with_bounds(serde_json::to_value(&c)?, &bounds))?;
            } else {
                let verdicts: Vec<&str> = c.verdicts.iter().map(|v| v.as_str()).collect();
                println!("{}: {}{}", c.op, verdicts.join(", "), if c.mixed { " (mixed)" } else { "" });
                println!("branch: {}", c.branch);
                for e in &c.evidence {
                    println!("  {}: {}", e.check, if e.preserved { "yes" } else { "no" });
                }
            }
            Ok(0)
        }
        Command::GenerateCheck { from, to, arity } => {
            let from_ops = ops_by_names(from)?;
            if from_ops.is_empty() {
                bail!("--from names no operation");
            }
            let to_op = ops::by_name(to)?;
            let outcome = bounded_generation_check(&from_ops, &to_op, *arity, &bounds)?;
            if json {
                let v = json!({ "from": from, "to": to, "arity": arity, "result": outcome });
                print_json(&with_bounds(v, &bounds))?;
            } else {
                match &outcome {
                    GenerationOutcome::NoCounterexample { exhaustive_arity, relations_checked, seed, .. } => {
                        print!("no counterexample up to arity {arity} ({relations_checked} relations, exhaustive to {exhaustive_arity}");
                        match seed {
                            Some(s) => println!(", sampled with seed {s})"),
                            None => println!(")"),
                        }
                    }
                    GenerationOutcome::Counterexample { relation } => {
                        println!("counterexample: {relation}");
                    }
                }
            }
            Ok(0)
        }
        Command::Catalog => catalog_listing(&bounds, json),
        Command::Sweep { arity } => {
            let report = sweep(*arity)?;
            if json {
                print_json(&with_bounds(serde_json::to_value(&report)?, &bounds))?;
            } else {
                println!("{:<12} {:>9} {:>8} {:>10}  law", "suite", "relations", "premise", "violations");
                for s in &report.suites {
                    println!("{:<12} {:>9} {:>8} {:>10}  {}", s.suite.name(), s.relations, s.premise_holds, s.violations, s.law);
                }
            }
            Ok(if report.violations() == 0 { 0 } else { 1 })
        }
    }
}

fn poly_check(op: &Operation, lang: &Language, bounds: &Bounds, json: bool) -> Result<u8> {
    let results: Vec<_> = lang.iter().map(|r| (r.label(), preserves(op, r))).collect();
    if json {
        let rows: Vec<Value> = results
            .iter()
            .map(|(r, v)| json!({ "relation": r, "preserved": v.is_none(), "violation": v }))
            .collect();
        print_json(&with_bounds(json!({ "op": op.name(), "relations": rows }), bounds))?;
    } else {
        for (r, v) in &results {
            match v {
                None => println!("{r}: preserved by {}", op.name()),
                Some(v) => println!("{r}: violated by {}: {v}", op.name()),
            }
        }
    }
    Ok(0)
}

fn catalog_listing(bounds: &Bounds, json: bool) -> Result<u8> {
    let mut rels = Vec::new();
    for (key, display) in DISPLAY {
        let r = catalog::by_name(key)?;
        let (formula, vars) = catalog::definition(key)?;
        rels.push(json!({
            "name": display,
            "key": key,
            "arity": r.arity(),
            "orbits": r.len(),
            "formula": formula,
            "vars": vars,
        }));
    }
    let op_rows: Vec<Value> = ops::UNARY_NAMES
        .iter()
        .chain(ops::BINARY_NAMES.iter())
        .map(|n| {
            let op = ops::by_name(n).expect("catalog op");
            json!({ "name": n, "arity": op.arity(), "dual": ops::dual_name(n) })
        })
        .collect();
    if json {
        print_json(&with_bounds(json!({ "relations": rels, "operations": op_rows }), bounds))?;
    } else {
        println!("relations:");
        for r in &rels {
            println!(
                "  {:<8} arity {}  {:>3} orbits  {}",
                r["name"].as_str().unwrap_or_default(),
                r["arity"],
                r["orbits"],
                r["formula"].as_str().unwrap_or_default()
            );
        }
        println!("operations:");
        for o in &op_rows {
            let dual = o["dual"].as_str().map_or(String::new(), |d| format!("  dual {d}"));
            println!("  {:<6} arity {}{dual}", o["name"].as_str().unwrap_or_default(), o["arity"]);
        }
    }
    Ok(0)
}
