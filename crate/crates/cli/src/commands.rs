//! One function per subcommand. Each reads its inputs, runs the library and
//! returns an [`Outcome`]; printing and exit codes live in `output`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hgforge::formats::{parse_cube, parse_group, parse_measure, write_cube, write_group, write_measure, RawCube};
use hgforge::groups::check_order;
use hgforge::rational::format_rational;
use hgforge::roundtrip::{run_roundtrip, RoundtripConfig};
use hgforge::{
    degeneracy_check, derive_cube, enumerate_abelian_groups, Checker, PropertyReport, RecoveryResult, RejectionReason,
    StructureCube, ValidationError,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::output::{InputError, Outcome, Status};
use crate::PropertySelection;

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), InputError> {
    fs::write(path, contents).map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))
}

fn in_file<E: std::fmt::Display>(path: &Path) -> impl Fn(E) -> InputError + '_ {
    move |e| InputError(format!("{}: {e}", path.display()))
}

fn load_raw_cube(path: &Path) -> Result<RawCube, InputError> {
    parse_cube(&read(path)?).map_err(in_file(path))
}

fn load_cube(path: &Path) -> Result<Result<StructureCube, ValidationError>, InputError> {
    Ok(load_raw_cube(path)?.validate())
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn object(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn report_only(status: Status, text: String, json: Map<String, Value>) -> Outcome {
    Outcome {
        status,
        text,
        json,
        stdout_payload: None,
    }
}

fn invalid_cube(error: &ValidationError) -> Outcome {
    let mut text = format!("invalid: {} violation(s)\n", error.violations.len());
    for v in &error.violations {
        let _ = writeln!(text, "    {v}");
    }
    report_only(
        Status::Rejected,
        text,
        object(vec![
            ("valid", json!(false)),
            ("violations", to_value(&error.violations)),
        ]),
    )
}

pub fn validate(path: &Path) -> Result<Outcome, InputError> {
    Ok(match load_cube(path)? {
        Ok(cube) => report_only(
            Status::Success,
            format!("valid: cube of order {}\n", cube.n()),
            object(vec![
                ("valid", json!(true)),
                ("n", json!(cube.n())),
                ("violations", json!([])),
            ]),
        ),
        Err(e) => invalid_cube(&e),
    })
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("    {l}\n")).collect()
}

pub fn check(path: &Path, selection: PropertySelection, witness_cap: usize) -> Result<Outcome, InputError> {
    let cube = match load_cube(path)? {
        Ok(cube) => cube,
        Err(e) => return Ok(invalid_cube(&e)),
    };
    let checker = Checker::new(witness_cap);
    let mut holds = true;
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut push = |report: PropertyReport| {
        holds &= report.holds;
        let _ = writeln!(text, "{report}");
        entries.push(to_value(&report));
    };
    use PropertySelection as P;
    if matches!(selection, P::All | P::Commutative) {
        push(checker.is_commutative(&cube));
    }
    if matches!(selection, P::All | P::Associative) {
        push(checker.is_associative_matrix(&cube));
        push(checker.is_associative_bruteforce(&cube));
    }
    if matches!(selection, P::All | P::ConditionA) {
        let report = checker.satisfies_condition_a(&cube);
        holds &= report.holds;
        let _ = writeln!(text, "{report}");
        let mut entry = object(vec![("property", json!("condition-a"))]);
        if let Value::Object(fields) = to_value(&report) {
            entry.extend(fields);
        }
        entries.push(Value::Object(entry));
    }
    if matches!(selection, P::All | P::Corollaries) {
        let reports = checker.check_corollaries(&cube);
        let all = reports.iter().all(|r| r.holds);
        holds &= all;
        let _ = writeln!(text, "corollaries: {}", if all { "hold" } else { "FAIL" });
        for r in &reports {
            text.push_str(&indent(&r.to_string()));
        }
        entries.push(Value::Object(object(vec![
            ("property", json!("corollaries")),
            ("holds", json!(all)),
            ("reports", to_value(&reports)),
        ])));
    }
    Ok(report_only(
        Status::from_holds(holds),
        text,
        object(vec![("holds", json!(holds)), ("properties", Value::Array(entries))]),
    ))
}

pub fn derive(group: &Path, measure: &Path, out: Option<&Path>) -> Result<Outcome, InputError> {
    let table = parse_group(&read(group)?).map_err(in_file(group))?;
    let m = parse_measure(&read(measure)?).map_err(in_file(measure))?;
    let verdict = degeneracy_check(&table, &m)?;
    let cube = derive_cube(&table, &m)?;
    let document = write_cube(&cube);
    let mut text = format!("verdict: {verdict}\n");
    let mut json = object(vec![("n", json!(cube.n())), ("verdict", to_value(&verdict))]);
    if let Some(path) = out {
        write(path, &document)?;
        let _ = writeln!(text, "wrote cube of order {} to {}", cube.n(), path.display());
        json.insert("out".into(), json!(path.display().to_string()));
    } else {
        json.insert(
            "cube".into(),
            serde_json::from_str(&document).expect("canonical cube is valid JSON"),
        );
    }
    Ok(Outcome {
        status: if verdict.is_degenerate() {
            Status::Degenerate
        } else {
            Status::Success
        },
        text,
        json,
        stdout_payload: out.is_none().then_some(document),
    })
}

pub fn recover(path: &Path, out: Option<&Path>, out_measure: Option<&Path>) -> Result<Outcome, InputError> {
    let result = match load_cube(path)? {
        Ok(cube) => hgforge::recover(&cube),
        Err(e) => RecoveryResult::NotDerived(RejectionReason::FailsValidation { detail: e.to_string() }),
    };
    let (table, measure, factors) = match result {
        RecoveryResult::Recovered {
            table,
            measure,
            factors,
        } => (table, measure, factors),
        RecoveryResult::NotDerived(reason) => {
            return Ok(report_only(
                Status::Rejected,
                format!("not derived: {reason}\n"),
                object(vec![("recovered", json!(false)), ("rejection", to_value(&reason))]),
            ))
        }
    };
    let rows = table.rows_one_based();
    let mut text = format!("recovered: abelian group {factors}, identity e_1\ncayley table:\n");
    for row in &rows {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "    {}", cells.join(" "));
    }
    let _ = writeln!(text, "measure: {measure}\nround-trip: exact");
    let values: Vec<String> = measure.values().iter().map(format_rational).collect();
    let mut json = object(vec![
        ("recovered", json!(true)),
        ("invariant_factors", to_value(&factors)),
        ("cayley_table", json!(rows)),
        ("measure", json!(values)),
        ("certification", json!("round-trip: exact")),
    ]);
    if let Some(path) = out {
        write(path, &write_group(&table))?;
        let _ = writeln!(text, "wrote group to {}", path.display());
        json.insert("out".into(), json!(path.display().to_string()));
    }
    if let Some(path) = out_measure {
        write(path, &write_measure(&measure))?;
        let _ = writeln!(text, "wrote measure to {}", path.display());
        json.insert("out_measure".into(), json!(path.display().to_string()));
    }
    Ok(report_only(Status::Success, text, json))
}

pub fn enumerate_groups(n: usize, count_only: bool, cap: usize) -> Result<Outcome, InputError> {
    check_order(n, cap)?;
    let groups = enumerate_abelian_groups(n);
    let text = if count_only {
        format!("{}\n", groups.len())
    } else {
        groups.iter().map(|g| format!("{g}\n")).collect()
    };
    let mut json = object(vec![("n", json!(n)), ("count", json!(groups.len()))]);
    if !count_only {
        json.insert("groups".into(), to_value(&groups));
    }
    Ok(report_only(Status::Success, text, json))
}

pub struct RoundtripArgs {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub include_degenerate: bool,
    pub denominator: u32,
    pub cap: usize,
}

pub fn roundtrip(args: RoundtripArgs) -> Result<Outcome, InputError> {
    if args.denominator == 0 {
        return Err(InputError("--denominator must be positive".into()));
    }
    let mut config = RoundtripConfig::new(args.order, args.trials, args.seed);
    config.include_degenerate = args.include_degenerate;
    config.denominator = args.denominator;
    config.order_cap = args.cap;
    let summary = run_roundtrip(&config)?;
    let mut text = format!(
        "roundtrip: order {}, {} trial(s) per group, seed {}\n",
        summary.order, summary.trials, summary.seed
    );
    for g in &summary.groups {
        let _ = write!(text, "    {}: {} passed, {} failed", g.factors, g.passed, g.failed);
        if args.include_degenerate {
            let _ = write!(text, ", {} skipped-degenerate", g.skipped_degenerate);
        }
        text.push('\n');
        for f in &g.failures {
            let _ = writeln!(text, "        {f}");
        }
    }
    let _ = writeln!(
        text,
        "total: {} passed, {} failed, {} skipped-degenerate",
        summary.passed, summary.failed, summary.skipped_degenerate
    );
    let json = match to_value(&summary) {
        Value::Object(fields) => fields,
        _ => unreachable!("summary serializes as an object"),
    };
    Ok(report_only(Status::from_holds(summary.all_passed()), text, json))
}
