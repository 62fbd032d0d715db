//! Command dispatch: engine calls and report assembly.

use std::time::Instant;

use serde_json::{json, Map, Value};

use jetzcr_core::equation::DEFAULT_DEPTH_LIMIT;
use jetzcr_core::expr::parse_expr;
use jetzcr_core::zcr::{
    abelian_characteristic_condition, cosymmetry_check, current_shift, generating_function,
    ZcrError, ZcrPair,
};

use crate::problem::{format_decomposition_key, Problem};
use crate::report::{bools_value, function_value, matrix_value, Report, Status};

/// The supported subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckZcr,
    CharForm,
    CharElement,
    IsCharRep,
    Gauge,
    EulerCheck,
    NecCheck,
    Cosymmetry,
    AbelianCheck,
    Conservation,
    Shift,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckZcr => "check-zcr",
            Command::CharForm => "char-form",
            Command::CharElement => "char-element",
            Command::IsCharRep => "is-char-rep",
            Command::Gauge => "gauge",
            Command::EulerCheck => "euler-check",
            Command::NecCheck => "nec-check",
            Command::Cosymmetry => "cosymmetry",
            Command::AbelianCheck => "abelian-check",
            Command::Conservation => "conservation",
            Command::Shift => "shift",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub depth_limit: usize,
    pub timing: bool,
    /// The shift expression for `shift`.
    pub shift_by: Option<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            depth_limit: DEFAULT_DEPTH_LIMIT,
            timing: false,
            shift_by: None,
        }
    }
}

/// Failures raised after the problem file itself was valid: missing fields
/// for the requested command or engine-level errors.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("command `{command}` requires the `{field}` field")]
    MissingField {
        command: &'static str,
        field: &'static str,
    },
    #[error("invalid --shift-by expression: {0}")]
    BadShift(jetzcr_core::expr::ParseError),
    #[error("{0}")]
    Engine(#[from] ZcrError),
    #[error("{0}")]
    Reduce(#[from] jetzcr_core::equation::ReduceError),
}

fn zcr_pair<'a>(
    problem: &'a Problem,
    command: &'static str,
    opts: &RunOptions,
) -> Result<ZcrPair<'a>, RunError> {
    let Some((a, b)) = &problem.zcr else {
        return Err(RunError::MissingField {
            command,
            field: "zcr",
        });
    };
    let pair = ZcrPair::new(&problem.algebra, &problem.system, a.clone(), b.clone())?;
    Ok(pair.with_depth_limit(opts.depth_limit))
}

fn decomposition_value(
    coeffs: &jetzcr_core::zcr::ResidualDecomposition,
) -> Value {
    let mut map = Map::new();
    for ((l, idx), c) in coeffs {
        map.insert(format_decomposition_key(*l, *idx), matrix_value(c));
    }
    Value::Object(map)
}

fn matrices_value(ms: &[jetzcr_core::liealg::MatrixFunction]) -> Value {
    Value::Array(ms.iter().map(matrix_value).collect())
}

fn status_of(all_pass: bool) -> Status {
    if all_pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Execute a command against a loaded problem.
pub fn run(command: Command, problem: &Problem, opts: &RunOptions) -> Result<Report, RunError> {
    let started = Instant::now();
    let mut report = match command {
        Command::CheckZcr => {
            let pair = zcr_pair(problem, "check-zcr", opts)?;
            let (ok, red) = pair.is_zcr()?;
            Report::new("check-zcr", status_of(ok))
                .field("verdict", json!(ok))
                .field("decomposition", decomposition_value(&red.coeffs))
                .field("obstruction", matrix_value(&red.normal))
        }
        Command::CharForm => {
            let pair = zcr_pair(problem, "char-form", opts)?;
            let form = pair.characteristic_form(problem.decomposition.as_ref())?;
            Report::new("char-form", Status::Pass)
                .field("A_tilde", matrix_value(&form.a_tilde))
                .field("B_tilde", matrix_value(&form.b_tilde))
                .field("A1", matrix_value(&form.a1))
                .field("B1", matrix_value(&form.b1))
                .field("Q", matrices_value(&form.q))
        }
        Command::CharElement => {
            let pair = zcr_pair(problem, "char-element", opts)?;
            let chi = pair.characteristic_element(problem.decomposition.as_ref())?;
            Report::new("char-element", Status::Pass)
                .field("element", matrices_value(&chi.components))
        }
        Command::IsCharRep => {
            let pair = zcr_pair(problem, "is-char-rep", opts)?;
            let q = pair.is_characteristic_representative()?;
            let mut report = Report::new("is-char-rep", status_of(q.is_some()))
                .field("verdict", json!(q.is_some()));
            if let Some(q) = q {
                report = report.field("Q", matrices_value(&q));
            }
            report
        }
        Command::Gauge => {
            let pair = zcr_pair(problem, "gauge", opts)?;
            let Some(h) = &problem.gauge else {
                return Err(RunError::MissingField {
                    command: "gauge",
                    field: "gauge",
                });
            };
            let gauged = pair.gauge_transform(h)?;
            let (ok, _) = gauged.is_zcr()?;
            Report::new("gauge", status_of(ok))
                .field("A", matrix_value(gauged.a()))
                .field("B", matrix_value(gauged.b()))
                .field("is_zcr", json!(ok))
        }
        Command::EulerCheck => {
            let pair = zcr_pair(problem, "euler-check", opts)?;
            let result = pair.check_gauge_euler_condition()?;
            Report::new("euler-check", status_of(result.all_pass()))
                .field("verdicts", bools_value(&result.passes))
                .field("normal_forms", matrices_value(&result.normal_forms))
        }
        Command::NecCheck => {
            let pair = zcr_pair(problem, "nec-check", opts)?;
            let chi = match &problem.q {
                Some(q) => q.clone(),
                None => {
                    pair.characteristic_element(problem.decomposition.as_ref())?
                        .components
                }
            };
            let verdicts = pair.char_element_nec_check(&chi)?;
            Report::new("nec-check", status_of(verdicts.iter().all(|&v| v)))
                .field("verdicts", bools_value(&verdicts))
                .field("chi", matrices_value(&chi))
        }
        Command::Cosymmetry => {
            let Some(psi) = &problem.psi else {
                return Err(RunError::MissingField {
                    command: "cosymmetry",
                    field: "psi",
                });
            };
            let verdicts = cosymmetry_check(psi, &problem.system, opts.depth_limit)?;
            Report::new("cosymmetry", status_of(verdicts.iter().all(|&v| v)))
                .field("verdicts", bools_value(&verdicts))
        }
        Command::AbelianCheck => {
            let Some(q) = &problem.q else {
                return Err(RunError::MissingField {
                    command: "abelian-check",
                    field: "Q",
                });
            };
            let verdicts = abelian_characteristic_condition(q, &problem.system, &problem.algebra)?;
            Report::new("abelian-check", status_of(verdicts.iter().all(|&v| v)))
                .field("verdicts", bools_value(&verdicts))
        }
        Command::Conservation => {
            let Some((p1, p2)) = &problem.current else {
                return Err(RunError::MissingField {
                    command: "conservation",
                    field: "current",
                });
            };
            match generating_function(p1, p2, &problem.system, opts.depth_limit) {
                Ok(psi) => {
                    let values: Vec<Value> = psi.iter().map(function_value).collect();
                    Report::new("conservation", Status::Pass)
                        .field("verdict", json!(true))
                        .field("generating_function", Value::Array(values))
                }
                Err(ZcrError::NotConserved) => Report::new("conservation", Status::Fail)
                    .field("verdict", json!(false)),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Shift => {
            let Some((p1, p2)) = &problem.current else {
                return Err(RunError::MissingField {
                    command: "shift",
                    field: "current",
                });
            };
            let Some(text) = &opts.shift_by else {
                return Err(RunError::MissingField {
                    command: "shift",
                    field: "--shift-by",
                });
            };
            let r = parse_expr(text, problem.dependents).map_err(RunError::BadShift)?;
            let (q1, q2) = current_shift(p1, p2, &r);
            match generating_function(&q1, &q2, &problem.system, opts.depth_limit) {
                Ok(psi) => {
                    let values: Vec<Value> = psi.iter().map(function_value).collect();
                    Report::new("shift", Status::Pass)
                        .field("P1", function_value(&q1))
                        .field("P2", function_value(&q2))
                        .field("generating_function", Value::Array(values))
                }
                Err(ZcrError::NotConserved) => Report::new("shift", Status::Fail)
                    .field("P1", function_value(&q1))
                    .field("P2", function_value(&q2))
                    .field("verdict", json!(false)),
                Err(e) => return Err(e.into()),
            }
        }
    };
    if opts.timing {
        report.timing_ms = Some(started.elapsed().as_millis());
    }
    Ok(report)
}

/// A uniform fallback used by the binary so a machine report is emitted even
/// on input errors.
pub fn error_report(command_name: &str, message: &str) -> Report {
    Report::new(command_name, Status::Error).field("error", json!(message))
}

