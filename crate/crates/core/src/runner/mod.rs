//! Scenarios, the claim registry, report emission and recheck.

mod claims;
mod report;
mod scenario;

pub use claims::{find_claim, pell_reduction, Claim, Context, Kind, PellReduction, ORBIT_STEPS, PELL_SWEEP_T, PELL_WINDOW_T, REGISTRY};
pub use report::{canonical_json, emit_report, read_report, ClaimReport, Report, Status, TOOL_VERSION};
pub use scenario::{builtin, load_scenario, parse_scenario, Expectations, Scenario, ScenarioError, BUILTINS};

use crate::par::{map_slice, Exec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::time::Instant;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

/// Everything a claim needs to be recomputed, embedded in its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimInput {
    pub scenario: Scenario,
    pub search_height: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub exec: Exec,
    pub search_height: i64,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { exec: Exec::Parallel, search_height: crate::diophant::search_height_from_env(), timings: false }
    }
}

/// Resolves `selection` (full ids or prefixes like `C04`) against the
/// scenario's list; `None` selects the scenario's own list.
pub fn select(scn: &Scenario, selection: Option<&[String]>) -> Result<Vec<&'static Claim>, ScenarioError> {
    let keys: Vec<String> = match selection {
        Some(s) => s.to_vec(),
        None => scn.claim_ids.clone(),
    };
    keys.iter().map(|k| find_claim(k.trim()).ok_or_else(|| ScenarioError::UnknownClaim(k.clone()))).collect()
}

fn input_for(scn: &Scenario, claim: &Claim, opts: &RunOptions) -> ClaimInput {
    let mut s = scn.clone();
    s.claim_ids = vec![claim.id.to_string()];
    ClaimInput { scenario: s, search_height: opts.search_height }
}

pub fn run_claim(ctx: &Context, claim: &Claim, opts: &RunOptions) -> ClaimReport {
    let start = Instant::now();
    let (status, certificate) = match &claim.kind {
        Kind::Assumed { statement, supports } => (Status::AssumedByPaper, json!({ "statement": statement, "supports": supports })),
        Kind::Computed(f) => {
            let (status, result) = match f(ctx) {
                Ok((true, v)) => (Status::Pass, v),
                Ok((false, v)) => (Status::Fail, v),
                Err(e) => (Status::Fail, json!({ "error": e })),
            };
            let input = serde_json::to_value(input_for(&ctx.scenario, claim, opts)).expect("serializable");
            (status, json!({ "input": input, "result": result }))
        }
    };
    let elapsed_ms = opts.timings.then(|| start.elapsed().as_millis() as u64);
    ClaimReport { id: claim.id.to_string(), status, certificate, elapsed_ms }
}

/// Runs the selected claims (in parallel when enabled); output order follows the selection.
pub fn run_claims(scn: &Scenario, selection: Option<&[String]>, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let claims = select(scn, selection)?;
    let ctx = Context::new(scn.clone(), opts.exec, opts.search_height)?;
    let reports = map_slice(&claims, opts.exec, |c| run_claim(&ctx, c, opts));
    Ok(Report::new(&scn.name, reports))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecheckEntry {
    pub id: String,
    pub status: Status,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecheckSummary {
    pub scenario: String,
    pub entries: Vec<RecheckEntry>,
    pub all_consistent: bool,
}

fn recheck_one(c: &ClaimReport, exec: Exec) -> Result<(), String> {
    let claim = REGISTRY.iter().find(|r| r.id == c.id).ok_or_else(|| format!("unknown claim id {}", c.id))?;
    match &claim.kind {
        Kind::Assumed { .. } => {
            if c.status != Status::AssumedByPaper {
                return Err("assumed claim carries a machine verdict".into());
            }
            Ok(())
        }
        Kind::Computed(f) => {
            let input: ClaimInput = serde_json::from_value(c.certificate.get("input").cloned().ok_or("certificate has no input")?)
                .map_err(|e| format!("certificate input: {e}"))?;
            input.scenario.validate().map_err(|e| e.to_string())?;
            let ctx = Context::new(input.scenario, exec, input.search_height).map_err(|e| e.to_string())?;
            let (passed, result) = match f(&ctx) {
                Ok(r) => r,
                Err(e) => (false, json!({ "error": e })),
            };
            let status = if passed { Status::Pass } else { Status::Fail };
            if status != c.status {
                return Err(format!("recomputed status {status:?} differs from reported {:?}", c.status));
            }
            if Some(&result) != c.certificate.get("result") {
                return Err("recomputed result differs from the certificate".into());
            }
            Ok(())
        }
    }
}

/// Recomputes every claim from the input embedded in its certificate and
/// compares verdict and payload. No scenario file is consulted.
pub fn recheck(report: &Report, exec: Exec) -> RecheckSummary {
    let entries = map_slice(&report.claims, exec, |c| {
        let r = recheck_one(c, exec);
        RecheckEntry { id: c.id.clone(), status: c.status, consistent: r.is_ok(), problem: r.err() }
    });
    let all_consistent = entries.iter().all(|e| e.consistent);
    RecheckSummary { scenario: report.scenario.clone(), entries, all_consistent }
}

pub fn exit_code(report: &Report) -> i32 {
    if report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

pub fn to_canonical<T: Serialize>(t: &T) -> String {
    canonical_json(&serde_json::to_value(t).expect("serializable"))
}

/// Convenience for tests and the CLI: the report as a JSON value.
pub fn report_value(report: &Report) -> Value {
    serde_json::to_value(report).expect("serializable")
}
