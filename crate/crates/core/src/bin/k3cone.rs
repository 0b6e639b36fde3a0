use clap::{Args, Parser, Subcommand};
use k3cone::arith::{int, Int};
use k3cone::conegeom::{cone_from_rays, dual_cone_q, mori_lemma_replay};
use k3cone::diophant::{pell_orbit, pell_window, quad_isotropic_rank3, search_height_from_env, solve_conic};
use k3cone::dynamics::{invariant_divisor_report, orbit, periodicity_certificate};
use k3cone::hilbscheme::{lke_basis, HilbLattice};
use k3cone::par::Exec;
use k3cone::quadlat::LatVec;
use k3cone::runner::{
    canonical_json, emit_report, exit_code, load_scenario, read_report, recheck, run_claims, RunOptions, Scenario, Status,
    EXIT_FAIL, EXIT_INPUT, EXIT_PASS,
};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "k3cone", version, about = "Exact verification of lattice, cone and dynamics claims for Hilbert schemes of K3 surfaces")]
struct Cli {
    /// Run every sweep on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ScenarioArg {
    /// Built-in name (hilb3-deg6, hilb2-deg4) or path to a scenario JSON file.
    #[arg(long, default_value = "hilb3-deg6")]
    scenario: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run claims and emit a report.
    Verify {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Comma-separated claim ids or prefixes, e.g. C01,C04.
        #[arg(long, value_delimiter = ',')]
        claims: Option<Vec<String>>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Record per-claim wall time (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Recompute every claim of a report from its certificate payload.
    Recheck {
        #[arg(long)]
        report: PathBuf,
    },
    /// Solutions of a·x² + 2b·xy + c·y² = target for the Gram [[a,b],[b,c]] with |x|,|y| ≤ bound.
    Conic {
        #[arg(long)]
        gram: String,
        #[arg(long, allow_hyphen_values = true)]
        target: i64,
        #[arg(long, default_value_t = 10)]
        bound: i64,
    },
    /// Isotropy of a ternary form given by its 3×3 Gram matrix.
    Isotropy {
        #[arg(long)]
        gram: String,
        /// Brute-force height (default from K3CONE_SEARCH_HEIGHT, else 200).
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Classes of solutions of t² − d·y² = target.
    Pell {
        #[arg(long)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        target: i64,
        /// Orbit members listed per class.
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Also list every solution with 0 ≤ t ≤ bound.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Dual of the scenario's Mori cone under q.
    ConeDual {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
    /// Replay of the Mori cone lemma: finite boxes per violated facet.
    MoriReplay {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
    /// Orbit of a curve class under f_*.
    Orbit {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Coordinates in the basis (H1, E, H2), e.g. "0,-3/2,1". Defaults to L1.
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long, default_value_t = 20)]
        steps: u32,
    },
    /// Non-periodicity certificate for a curve class.
    Periodicity {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long, default_value_t = 20)]
        steps: u32,
    },
    /// The f*-fixed divisor line and why no multiple is effective.
    InvariantDivisors {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<(Value, i32), InputError>;

fn parse_gram(s: &str) -> Result<Vec<Vec<i64>>, InputError> {
    serde_json::from_str(s).map_err(|e| InputError(format!("--gram must be a JSON integer matrix: {e}")))
}

fn scenario_lattice(arg: &ScenarioArg) -> Result<(Scenario, HilbLattice), InputError> {
    let scn = load_scenario(&arg.scenario)?;
    let hl = scn.hilb()?;
    Ok((scn, hl))
}

fn class_or_l1(hl: &HilbLattice, class: &Option<String>) -> Result<LatVec, InputError> {
    match class {
        Some(c) => {
            let v = LatVec::parse(c)?;
            hl.lattice().check(&v)?;
            Ok(v)
        }
        None => Ok(lke_basis(hl, 1)?[0].clone()),
    }
}

fn growth_ample(scn: &Scenario) -> Option<LatVec> {
    scn.growth_class.clone().or_else(|| {
        let a = &scn.ample_generators;
        (!a.is_empty()).then(|| a.iter().skip(1).fold(a[0].clone(), |acc, x| acc.add(x)))
    })
}

fn run(cli: Cli) -> CmdResult {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.cmd {
        Cmd::Verify { scenario, claims, report, timings } => {
            let scn = load_scenario(&scenario.scenario)?;
            let opts = RunOptions { exec, search_height: search_height_from_env(), timings };
            let rep = run_claims(&scn, claims.as_deref(), &opts)?;
            let code = exit_code(&rep);
            match report {
                Some(path) => {
                    emit_report(&rep, &path)?;
                    for c in &rep.claims {
                        let s = match c.status {
                            Status::Pass => "pass",
                            Status::Fail => "FAIL",
                            Status::AssumedByPaper => "assumed-by-paper",
                        };
                        eprintln!("{:<40} {s}", c.id);
                    }
                    Ok((json!(null), code))
                }
                None => Ok((serde_json::to_value(&rep)?, code)),
            }
        }
        Cmd::Recheck { report } => {
            let rep = read_report(&report).map_err(InputError)?;
            let summary = recheck(&rep, exec);
            let code = if summary.all_consistent { EXIT_PASS } else { EXIT_FAIL };
            Ok((serde_json::to_value(&summary)?, code))
        }
        Cmd::Conic { gram, target, bound } => {
            let g = parse_gram(&gram)?;
            if g.len() != 2 || g.iter().any(|r| r.len() != 2) || g[0][1] != g[1][0] {
                return Err(InputError("--gram must be a symmetric 2×2 matrix".into()));
            }
            let s = solve_conic(g[0][0], 2 * g[0][1], g[1][1], target, bound, exec)?;
            Ok((serde_json::to_value(&s)?, EXIT_PASS))
        }
        Cmd::Isotropy { gram, bound } => {
            let g = parse_gram(&gram)?;
            let cert = quad_isotropic_rank3(&g, bound.unwrap_or_else(search_height_from_env), exec)?;
            Ok((serde_json::to_value(&cert)?, EXIT_PASS))
        }
        Cmd::Pell { d, target, steps, bound } => {
            let sols = pell_orbit(d, target, steps)?;
            let pair = |p: &(Int, Int)| json!([p.0.to_string(), p.1.to_string()]);
            let classes: Vec<Value> = sols
                .classes
                .iter()
                .map(|c| json!({ "fundamental": pair(&c.fundamental), "orbit": c.orbit.iter().map(pair).collect::<Vec<_>>() }))
                .collect();
            let mut out = json!({ "d": d, "n": target, "unit": pair(&sols.unit), "seed_bound": sols.seed_bound.to_string(), "classes": classes });
            if let Some(b) = bound {
                if b < 0 {
                    return Err(InputError("--bound must be non-negative".into()));
                }
                let w = pell_window(d, target, &int(b))?;
                out["window"] = json!({ "t_max": b, "solutions": w.iter().map(pair).collect::<Vec<_>>() });
            }
            Ok((out, EXIT_PASS))
        }
        Cmd::ConeDual { scenario } => {
            let (scn, hl) = scenario_lattice(&scenario)?;
            let mori = cone_from_rays(hl.lattice().clone(), &scn.mori_generators)?;
            let dual = dual_cone_q(&mori)?;
            let dd = dual_cone_q(&dual)?;
            let matches = (!scn.ample_generators.is_empty()).then(|| dual.same_rays(&scn.ample_generators));
            let ok = matches != Some(false) && dd.rays() == mori.rays();
            let out = json!({
                "mori_rays": mori.ray_vecs(), "dual_rays": dual.ray_vecs(),
                "matches_ample_generators": matches, "dual_of_dual_is_mori": dd.rays() == mori.rays(),
            });
            Ok((out, if ok { EXIT_PASS } else { EXIT_FAIL }))
        }
        Cmd::MoriReplay { scenario } => {
            let (scn, hl) = scenario_lattice(&scenario)?;
            let mori = cone_from_rays(hl.lattice().clone(), &scn.mori_generators)?;
            let rep = mori_lemma_replay(&hl, &mori, &scn.ht_predicates, exec)?;
            let code = if rep.passed { EXIT_PASS } else { EXIT_FAIL };
            Ok((serde_json::to_value(&rep)?, code))
        }
        Cmd::Orbit { scenario, class, steps } => {
            let (scn, hl) = scenario_lattice(&scenario)?;
            let seed = class_or_l1(&hl, &class)?;
            let ample = growth_ample(&scn).unwrap_or_else(|| hl.polarization(1).cloned().unwrap_or_else(|_| LatVec::zero(hl.rank())));
            let j1 = if scn.mori_generators.is_empty() {
                None
            } else {
                let mori = cone_from_rays(hl.lattice().clone(), &scn.mori_generators)?;
                Some(k3cone::dynamics::j_cones(&hl, &mori)?.j1)
            };
            let rec = orbit(&hl, &seed, steps, &ample, j1.as_ref())?;
            Ok((serde_json::to_value(&rec)?, EXIT_PASS))
        }
        Cmd::Periodicity { scenario, class, steps } => {
            let (scn, hl) = scenario_lattice(&scenario)?;
            let seed = class_or_l1(&hl, &class)?;
            let ample = growth_ample(&scn);
            let growth = ample.as_ref().map(|a| (6u32.min(steps.max(1)), a));
            let cert = periodicity_certificate(&hl, &seed, steps, growth)?;
            let code = if cert.periodic { EXIT_FAIL } else { EXIT_PASS };
            Ok((serde_json::to_value(&cert)?, code))
        }
        Cmd::InvariantDivisors { scenario } => {
            let (scn, hl) = scenario_lattice(&scenario)?;
            let rep = invariant_divisor_report(&hl, &scn.ample_generators)?;
            let code = if rep.passed { EXIT_PASS } else { EXIT_FAIL };
            Ok((serde_json::to_value(&rep)?, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok((value, code)) => {
            if !value.is_null() {
                print!("{}", canonical_json(&value));
            }
            ExitCode::from(code as u8)
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
