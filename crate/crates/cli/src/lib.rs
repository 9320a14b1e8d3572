//! Scenario runner behind the `grcoarse` binary.

pub mod certificate;
pub mod checks;
pub mod env;
pub mod report;
pub mod scenario;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use grcoarse::field::{Field, FieldKind, PrimeField, Rationals};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::checks::{error_kind, resolve_references, run_check, CheckError, Options};
use crate::env::Env;
use crate::report::{CheckRecord, ErrorRecord, Report, Verdict};
use crate::scenario::{CheckSpec, Scenario, SCENARIO_VERSION};

/// Error kinds that mean the library contradicted itself.
pub const INTERNAL_ERROR_KINDS: [&str; 2] = ["soundness", "panic"];

/// The scenario could not be run at all: it does not parse, names
/// something undeclared, or declares an invalid object.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub field: Option<String>,
    /// Check kinds to run; `None` runs every check.
    pub kinds: Option<Vec<&'static str>>,
    pub guard_dim: Option<usize>,
    pub jobs: Option<usize>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, InputError> {
    let s: Scenario = serde_json::from_str(text).map_err(|e| InputError(format!("scenario: {e}")))?;
    if s.version != SCENARIO_VERSION {
        return Err(InputError(format!("unsupported scenario version {} (expected {SCENARIO_VERSION})", s.version)));
    }
    Ok(s)
}

pub fn field_kind(name: &str) -> Result<FieldKind, InputError> {
    name.parse::<FieldKind>().map_err(|e| InputError(format!("field {name:?}: {e}")))
}

/// Builds every declaration, resolves the selected checks and runs them.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<Report, InputError> {
    let name = opts.field.as_deref().unwrap_or(&scenario.field);
    match field_kind(name)? {
        FieldKind::Prime(p) => run(PrimeField::new(p).map_err(|e| InputError(e.to_string()))?, scenario, opts),
        FieldKind::Rational => run(Rationals, scenario, opts),
    }
}

/// Builds every declaration and resolves every check without running any;
/// returns the number of checks.
pub fn validate_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<usize, InputError> {
    let name = opts.field.as_deref().unwrap_or(&scenario.field);
    match field_kind(name)? {
        FieldKind::Prime(p) => {
            Ok(prepare(PrimeField::new(p).map_err(|e| InputError(e.to_string()))?, scenario, None)?.1.len())
        }
        FieldKind::Rational => Ok(prepare(Rationals, scenario, None)?.1.len()),
    }
}

type Prepared<'a, F> = (Env<F>, Vec<(usize, &'a CheckSpec)>);

fn prepare<'a, F: Field>(
    field: F,
    scenario: &'a Scenario,
    kinds: Option<&[&str]>,
) -> Result<Prepared<'a, F>, InputError> {
    let env = Env::build(field, scenario).map_err(|e| InputError(e.to_string()))?;
    let selected: Vec<(usize, &CheckSpec)> = scenario
        .checks
        .iter()
        .enumerate()
        .filter(|(_, c)| kinds.is_none_or(|k| k.contains(&c.kind.tag())))
        .collect();
    for (i, c) in &selected {
        resolve_references(&env, &c.kind).map_err(|e| InputError(format!("check {}: {e}", check_name(*i, c))))?;
    }
    Ok((env, selected))
}

fn run<F: Field>(field: F, scenario: &Scenario, opts: &RunOptions) -> Result<Report, InputError> {
    let (env, selected) = prepare(field, scenario, opts.kinds.as_deref())?;
    let check_opts = Options { guard_dim: opts.guard_dim };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(0))
        .build()
        .map_err(|e| InputError(format!("thread pool: {e}")))?;
    let records = pool.install(|| {
        selected.par_iter().map(|(i, c)| record(&env, scenario, *i, c, &check_opts)).collect::<Vec<_>>()
    });
    Ok(Report::new(scenario.name.clone(), env.field.name(), records))
}

fn check_name(i: usize, c: &CheckSpec) -> String {
    c.name.clone().unwrap_or_else(|| format!("{}#{i}", c.kind.tag()))
}

fn record<F: Field>(env: &Env<F>, scenario: &Scenario, i: usize, c: &CheckSpec, opts: &Options) -> CheckRecord {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| run_check(env, scenario, &c.kind, opts)));
    let duration_ms = start.elapsed().as_millis() as u64;
    let mut inputs = serde_json::to_value(&c.kind).expect("serializable");
    if let Value::Object(m) = &mut inputs {
        m.remove("check");
    }
    let mut rec = CheckRecord {
        name: check_name(i, c),
        kind: c.kind.tag().to_string(),
        inputs,
        expect: c.expect.clone(),
        verdict: Verdict::Info,
        summary: String::new(),
        observed: Map::new(),
        evidence: Value::Null,
        error: None,
        mismatches: Vec::new(),
        duration_ms,
    };
    let expected_error = c.expect.as_ref().and_then(|e| e.get("error")).and_then(Value::as_str);
    let error = match result {
        Ok(Ok(outcome)) => {
            rec.summary = outcome.summary;
            rec.observed = outcome.observed;
            rec.evidence = outcome.evidence;
            if expected_error.is_some() {
                rec.observed.insert("error".into(), Value::Null);
            }
            rec.mismatches = mismatches(c.expect.as_ref(), &rec.observed);
            rec.verdict = if !outcome.holds || !rec.mismatches.is_empty() {
                Verdict::Fail
            } else if c.expect.is_some() {
                Verdict::Pass
            } else {
                Verdict::Info
            };
            return rec;
        }
        Ok(Err(CheckError::Lib(e))) => ErrorRecord { kind: error_kind(&e).into(), message: e.to_string() },
        Ok(Err(CheckError::Decl(e))) => ErrorRecord { kind: "declaration".into(), message: e.to_string() },
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            ErrorRecord { kind: "panic".into(), message }
        }
    };
    rec.summary = format!("{} error", error.kind);
    rec.observed.insert("error".into(), Value::String(error.kind.clone()));
    let internal = INTERNAL_ERROR_KINDS.contains(&error.kind.as_str());
    rec.verdict = if !internal && expected_error == Some(error.kind.as_str()) {
        Verdict::Pass
    } else {
        if expected_error.is_some() {
            rec.mismatches.push("error".into());
        }
        Verdict::Error
    };
    rec.error = Some(error);
    rec
}

fn mismatches(expect: Option<&Map<String, Value>>, observed: &Map<String, Value>) -> Vec<String> {
    let Some(expect) = expect else { return Vec::new() };
    expect
        .iter()
        .filter(|(k, v)| observed.get(k.as_str()).unwrap_or(&Value::Null) != *v)
        .map(|(k, _)| k.clone())
        .collect()
}

/// True when some check hit a soundness failure or a panic.
pub fn has_internal_error(report: &Report) -> bool {
    report.checks.iter().any(|c| c.error.as_ref().is_some_and(|e| INTERNAL_ERROR_KINDS.contains(&e.kind.as_str())))
}
