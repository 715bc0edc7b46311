//! Browser bindings for hgforge.
//!
//! Each operation has a plain Rust form returning a JSON string (tested
//! natively) and a thin `#[wasm_bindgen]` wrapper used by `www/index.html`.

use hgforge::formats::{parse_cube, write_cube};
use hgforge::rational::{format_rational, parse_rational};
use hgforge::sampler::MeasureSampler;
use hgforge::{
    cayley_table, check_corollaries, degeneracy_check, derive_cube, enumerate_abelian_groups,
    is_associative_bruteforce, is_associative_matrix, is_commutative, recover, satisfies_condition_a, CayleyTable,
    InvariantFactors, MeasureVector, RecoveryResult,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest group order the page accepts; keeps the exact checks interactive.
pub const MAX_ORDER: usize = 24;

fn parse_factors(text: &str) -> Result<CayleyTable, String> {
    let factors = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| format!("not a positive integer: {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let factors = InvariantFactors::new(factors).map_err(|e| e.to_string())?;
    if factors.order() > MAX_ORDER {
        return Err(format!("order {} exceeds the demo limit {MAX_ORDER}", factors.order()));
    }
    Ok(cayley_table(&factors))
}

fn parse_values(text: &str) -> Result<MeasureVector, String> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    MeasureVector::new(values).map_err(|e| e.to_string())
}

fn to_value(value: impl serde::Serialize) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

/// Derives the cube of a measure on the group with the given invariant
/// factors. Degenerate measures still produce a cube.
pub fn derive_json(factors: &str, measure: &str) -> Result<String, String> {
    let table = parse_factors(factors)?;
    let m = parse_values(measure)?;
    let verdict = degeneracy_check(&table, &m).map_err(|e| e.to_string())?;
    let cube = derive_cube(&table, &m).map_err(|e| e.to_string())?;
    Ok(json!({
        "factors": to_value(table.factors()),
        "n": cube.n(),
        "verdict": to_value(&verdict),
        "verdict_text": verdict.to_string(),
        "cube": write_cube(&cube),
    })
    .to_string())
}

/// Validates a cube document, runs every check and attempts recovery.
pub fn analyze_json(cube: &str) -> Result<String, String> {
    let raw = parse_cube(cube).map_err(|e| e.to_string())?;
    let cube = match raw.validate() {
        Ok(cube) => cube,
        Err(e) => {
            let lines: Vec<String> = e.violations.iter().map(ToString::to_string).collect();
            return Ok(json!({ "valid": false, "violations": lines }).to_string());
        }
    };
    let mut checks: Vec<String> = [
        is_commutative(&cube),
        is_associative_matrix(&cube),
        is_associative_bruteforce(&cube),
    ]
    .iter()
    .map(ToString::to_string)
    .collect();
    checks.push(satisfies_condition_a(&cube).to_string());
    checks.extend(check_corollaries(&cube).iter().map(ToString::to_string));
    let recovery = match recover(&cube) {
        RecoveryResult::Recovered {
            table,
            measure,
            factors,
        } => json!({
            "recovered": true,
            "factors": factors.to_string(),
            "cayley_table": table.rows_one_based(),
            "measure": measure.values().iter().map(format_rational).collect::<Vec<_>>(),
        }),
        RecoveryResult::NotDerived(reason) => json!({
            "recovered": false,
            "reason": reason.name(),
            "detail": reason.to_string(),
        }),
    };
    Ok(json!({ "valid": true, "n": cube.n(), "checks": checks, "recovery": recovery }).to_string())
}

/// Invariant-factor lists of the abelian groups of order `n`.
pub fn enumerate_json(n: usize) -> Result<String, String> {
    hgforge::groups::check_order(n, hgforge::groups::DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
    let groups: Vec<String> = enumerate_abelian_groups(n).iter().map(ToString::to_string).collect();
    Ok(json!({ "n": n, "count": groups.len(), "groups": groups }).to_string())
}

/// A seeded non-degenerate measure for the group, as comma-separated values.
pub fn random_measure_text(factors: &str, seed: u64) -> Result<String, String> {
    let table = parse_factors(factors)?;
    let m = MeasureSampler::new(seed)
        .non_degenerate(&table)
        .map_err(|e| e.to_string())?;
    Ok(m.values().iter().map(format_rational).collect::<Vec<_>>().join(", "))
}

#[wasm_bindgen]
pub fn derive(factors: &str, measure: &str) -> Result<String, JsError> {
    derive_json(factors, measure).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(cube: &str) -> Result<String, JsError> {
    analyze_json(cube).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn enumerate(n: usize) -> Result<String, JsError> {
    enumerate_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn random_measure(factors: &str, seed: u32) -> Result<String, JsError> {
    random_measure_text(factors, seed.into()).map_err(|e| JsError::new(&e))
}
