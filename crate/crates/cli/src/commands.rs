use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};
use sigprime::designs::{build_hermitian_unital, build_ree_unital_3, cnp_check, DesignError};
use sigprime::matrep::points_to_doc;
use sigprime::permgroup::PermError;
use sigprime::weyl::{parabolic_index_poly, root_system, verify_lemma, LemmaCase, RootType, DEFAULT_WEYL_CAP};
use sigprime::{IncidenceStructure, PermGroup};

use crate::input::{load_design, load_group};
use crate::{Cli, Command, Outcome};

/// Exact integer as a JSON number when it fits in 64 bits, else a decimal string.
fn big_json(text: String) -> Value {
    text.parse::<i64>()
        .map(Value::from)
        .or_else(|_| text.parse::<u64>().map(Value::from))
        .unwrap_or(Value::String(text))
}

fn pass(body: Value) -> Outcome {
    Outcome { body, passed: true, out: None }
}

fn verdict(mut body: Value, passed: bool) -> Outcome {
    body["status"] = json!(if passed { "pass" } else { "fail" });
    Outcome { body, passed, out: None }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cap = cli.cap;
    match &cli.command {
        Command::ConstructHermitian { q, out } => {
            let mut o = construct_hermitian(*q)?;
            o.out = out.clone();
            Ok(o)
        }
        Command::ConstructRee3 { out } => {
            let mut o = construct_ree3()?;
            o.out = out.clone();
            Ok(o)
        }
        Command::CheckSpace { file } => check_space(file),
        Command::CheckTransitivity { space, group, group_key, flags } => {
            let s = load_design(space)?;
            let g = load_group(group, group_key.as_deref(), cap)?;
            check_transitivity(&s, &g, *flags)
        }
        Command::CnpCheck { space, group, group_key, p } => {
            let s = load_design(space)?;
            let g = load_group(group, group_key.as_deref(), cap)?;
            cnp(&s, &g, *p)
        }
        Command::GroupOrder { file, group_key } => {
            let g = load_group(file, group_key.as_deref(), cap)?;
            let bsgs = g.bsgs();
            Ok(pass(json!({
                "status": "pass",
                "degree": g.degree(),
                "order": big_json(g.order_big().to_string()),
                "base": bsgs.base(),
                "basic_orbit_lengths": bsgs.basic_orbit_lengths(),
            })))
        }
        Command::Subdegrees { group, group_key, point } => {
            let g = load_group(group, group_key.as_deref(), cap)?;
            match g.subdegrees(*point) {
                Ok(sizes) => Ok(pass(json!({
                    "status": "pass",
                    "point": point,
                    "subdegrees": sizes,
                    "sum": sizes.iter().sum::<usize>(),
                }))),
                Err(PermError::NotTransitive) => Ok(verdict(
                    json!({"error": "group is not transitive", "orbits": g.orbits().len()}),
                    false,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::WeylIndex { label, rank, omit, eval } => {
            weyl_index(label, *rank, omit, *eval, cap.unwrap_or(DEFAULT_WEYL_CAP))
        }
        Command::VerifyLemma { case_id, qmax } => {
            let case: LemmaCase = case_id.parse().map_err(|e| anyhow!("--case: {e}"))?;
            let report = verify_lemma(case, *qmax, cap.unwrap_or(DEFAULT_WEYL_CAP)).map_err(|e| anyhow!("{e}"))?;
            let passed = report.passed();
            Ok(Outcome {
                body: serde_json::to_value(&report)?,
                passed,
                out: None,
            })
        }
    }
}

fn construct_hermitian(q: u64) -> Result<Outcome> {
    eprintln!("building H({q})");
    let h = build_hermitian_unital(q).map_err(|e| anyhow!("--q: {e}"))?;
    let params = h.space.space_params()?;
    Ok(pass(json!({
        "status": "pass",
        "q": q,
        "field": h.field.to_doc(),
        "points": points_to_doc(&h.field, &h.points),
        "design": h.space.to_doc(),
        "group": h.group.to_doc(),
        "group_order": big_json(h.group.order_big().to_string()),
        "params": params,
        "significant_primes": h.space.significant_primes()?,
        "tangents": h.tangents,
    })))
}

fn construct_ree3() -> Result<Outcome> {
    eprintln!("building R(3)");
    let r = build_ree_unital_3()?;
    Ok(pass(json!({
        "status": "pass",
        "design": r.space.to_doc(),
        "socle": r.socle.to_doc(),
        "socle_order": big_json(r.socle.order_big().to_string()),
        "extended": r.extended.to_doc(),
        "extended_order": big_json(r.extended.order_big().to_string()),
        "params": r.space.space_params()?,
        "significant_primes": r.space.significant_primes()?,
    })))
}

fn check_space(file: &Path) -> Result<Outcome> {
    let s = load_design(file)?;
    let report = s.is_linear_space();
    let mut body = json!({"v": s.v(), "b": s.b(), "linear_space": report});
    if !report.passed() {
        return Ok(verdict(body, false));
    }
    match s.space_params() {
        Ok(p) => {
            body["params"] = json!(p);
            body["significant_primes"] = json!(s.significant_primes()?);
            Ok(verdict(body, true))
        }
        Err(e) => {
            body["params_error"] = json!(e.to_string());
            Ok(verdict(body, false))
        }
    }
}

/// Invariance failures are mathematical (exit 1); anything else is an input error.
fn invariance(e: DesignError) -> Result<Outcome> {
    match e {
        DesignError::Perm(PermError::NotInvariant { generator, block }) => Ok(verdict(
            json!({
                "error": "group does not preserve the line set",
                "generator": generator,
                "line": block,
            }),
            false,
        )),
        other => Err(other).context("transitivity check"),
    }
}

fn check_transitivity(s: &IncidenceStructure, g: &PermGroup, flags: bool) -> Result<Outcome> {
    let lines = match s.line_orbit_sizes(g) {
        Ok(l) => l,
        Err(e) => return invariance(e),
    };
    let line_transitive = lines.len() == 1;
    let mut body = json!({"line_orbits": lines, "line_transitive": line_transitive});
    let mut passed = line_transitive;
    if flags {
        let f = match s.flag_orbit_sizes(g) {
            Ok(f) => f,
            Err(e) => return invariance(e),
        };
        passed &= f.len() == 1;
        body["flag_transitive"] = json!(f.len() == 1);
        body["flag_orbits"] = json!(f);
    }
    Ok(verdict(body, passed))
}

fn cnp(s: &IncidenceStructure, g: &PermGroup, p: u64) -> Result<Outcome> {
    match cnp_check(s, g, p) {
        Ok(o) => {
            let holds = o.holds;
            Ok(verdict(json!({"p": p, "cnp": o}), holds))
        }
        Err(DesignError::Precondition(msg)) => Ok(verdict(json!({"p": p, "precondition": msg}), false)),
        Err(e) => invariance(e),
    }
}

fn parse_omit(omit: &str) -> Result<Vec<usize>> {
    omit.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().with_context(|| format!("--omit: \"{t}\" is not a simple-root label")))
        .collect()
}

fn weyl_index(label: &str, rank: usize, omit: &str, eval: Option<u64>, cap: usize) -> Result<Outcome> {
    let ty: RootType = label.parse().map_err(|e| anyhow!("--type: {e}"))?;
    let rs = root_system(ty, rank).map_err(|e| anyhow!("--rank: {e}"))?;
    let omitted = parse_omit(omit)?;
    let j = rs.complement(&omitted).map_err(|e| anyhow!("--omit: {e}"))?;
    if omitted.is_empty() {
        bail!("--omit: at least one simple root is required");
    }
    let poly = parabolic_index_poly(&rs, &j, cap).map_err(|e| anyhow!("{e}"))?;
    let mut body = json!({
        "status": "pass",
        "root_system": rs.to_string(),
        "omit": omitted,
        "coefficients": poly,
        "polynomial": poly.to_string(),
        "value_at_1": big_json(poly.eval_i64(1).to_string()),
    });
    if let Some(q) = eval {
        body["q"] = json!(q);
        body["value"] = big_json(poly.eval_i64(q as i64).to_string());
    }
    Ok(pass(body))
}
