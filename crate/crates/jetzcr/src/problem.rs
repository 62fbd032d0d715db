//! Problem-file schema and loading into engine values.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use jetzcr_core::equation::{Equation, EquationSystem, SystemError};
use jetzcr_core::expr::{parse_expr, DiffFunction, JetCoordinate, MultiIndex, ParseError, Var};
use jetzcr_core::liealg::{LieAlgebraError, LieAlgebraSpec, MatrixFunction};
use jetzcr_core::zcr::ResidualDecomposition;

/// The on-disk problem document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dependents: u32,
    pub equations: Vec<EquationDef>,
    pub algebra: AlgebraDef,
    #[serde(default)]
    pub zcr: Option<ZcrDef>,
    #[serde(default)]
    pub gauge: Option<Vec<Vec<String>>>,
    #[serde(default, rename = "Q")]
    pub q: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default)]
    pub psi: Option<Vec<String>>,
    #[serde(default)]
    pub decomposition: Option<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default)]
    pub current: Option<CurrentDef>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationDef {
    pub lead: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDef {
    pub n: usize,
    pub basis: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZcrDef {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentDef {
    #[serde(rename = "P1")]
    pub p1: String,
    #[serde(rename = "P2")]
    pub p2: String,
}

/// Everything parsed and validated into engine values.
#[derive(Debug, Clone)]
pub struct Problem {
    pub dependents: u32,
    pub system: EquationSystem,
    pub algebra: LieAlgebraSpec,
    pub zcr: Option<(MatrixFunction, MatrixFunction)>,
    pub gauge: Option<MatrixFunction>,
    pub q: Option<Vec<MatrixFunction>>,
    pub psi: Option<Vec<DiffFunction>>,
    pub decomposition: Option<ResidualDecomposition>,
    pub current: Option<(DiffFunction, DiffFunction)>,
}

/// Input-side failures: file, JSON shape, expression, and validation errors.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in {context}: {error}")]
    Expr { context: String, error: ParseError },
    #[error("equation {index}: lead `{text}` is not a single jet coordinate")]
    BadLead { index: usize, text: String },
    #[error("{0}")]
    System(SystemError),
    #[error("algebra: {0}")]
    Algebra(LieAlgebraError),
    #[error("matrix in {context} is not {n} x {n}")]
    MatrixShape { context: String, n: usize },
    #[error("decomposition key `{0}` is not of the form (l,a,b)")]
    DecompositionKey(String),
    #[error("decomposition key `{key}` references equation {l} of {count}")]
    DecompositionIndex { key: String, l: usize, count: usize },
    #[error("{list} has {found} entries, expected {expected}")]
    WrongLength {
        list: String,
        expected: usize,
        found: usize,
    },
}

fn parse_in(text: &str, dependents: u32, context: &str) -> Result<DiffFunction, InputError> {
    parse_expr(text, dependents).map_err(|error| InputError::Expr {
        context: context.to_string(),
        error,
    })
}

fn parse_lead(text: &str, dependents: u32, index: usize) -> Result<JetCoordinate, InputError> {
    let f = parse_in(text, dependents, &format!("equations[{index}].lead"))?;
    for v in f.numerator().vars() {
        if let Var::Jet(c) = v {
            if f == DiffFunction::coordinate(c) {
                return Ok(c);
            }
        }
    }
    Err(InputError::BadLead {
        index,
        text: text.to_string(),
    })
}

fn parse_matrix(
    rows: &[Vec<String>],
    dependents: u32,
    n: usize,
    context: &str,
) -> Result<MatrixFunction, InputError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(InputError::MatrixShape {
            context: context.to_string(),
            n,
        });
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let mut r = Vec::with_capacity(n);
        for (j, text) in row.iter().enumerate() {
            r.push(parse_in(text, dependents, &format!("{context}[{i}][{j}]"))?);
        }
        out.push(r);
    }
    MatrixFunction::from_rows(out).map_err(InputError::Algebra)
}

/// The on-disk `(l,a,b)` key with one-based `l`.
fn parse_decomposition_key(key: &str) -> Result<(usize, MultiIndex), InputError> {
    let bad = || InputError::DecompositionKey(key.to_string());
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(bad)?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let l: usize = parts[0].parse().map_err(|_| bad())?;
    let a: u32 = parts[1].parse().map_err(|_| bad())?;
    let b: u32 = parts[2].parse().map_err(|_| bad())?;
    if l == 0 {
        return Err(bad());
    }
    Ok((l - 1, MultiIndex::new(a, b)))
}

pub fn format_decomposition_key(l: usize, idx: MultiIndex) -> String {
    format!("({},{},{})", l + 1, idx.x, idx.y)
}

/// Validate a raw document into engine values.
pub fn parse_problem(file: &ProblemFile) -> Result<Problem, InputError> {
    let m = file.dependents;
    let mut equations = Vec::with_capacity(file.equations.len());
    for (i, eq) in file.equations.iter().enumerate() {
        equations.push(Equation {
            lead: parse_lead(&eq.lead, m, i)?,
            rhs: parse_in(&eq.rhs, m, &format!("equations[{i}].rhs"))?,
        });
    }
    let system = EquationSystem::new(m, equations).map_err(InputError::System)?;

    let n = file.algebra.n;
    let mut basis = Vec::with_capacity(file.algebra.basis.len());
    for (i, rows) in file.algebra.basis.iter().enumerate() {
        basis.push(parse_matrix(rows, m, n, &format!("algebra.basis[{i}]"))?);
    }
    let algebra =
        LieAlgebraSpec::new(n, basis, file.algebra.name.clone()).map_err(InputError::Algebra)?;

    let zcr = match &file.zcr {
        Some(z) => Some((
            parse_matrix(&z.a, m, n, "zcr.A")?,
            parse_matrix(&z.b, m, n, "zcr.B")?,
        )),
        None => None,
    };
    let gauge = match &file.gauge {
        Some(rows) => Some(parse_matrix(rows, m, n, "gauge")?),
        None => None,
    };
    let q = match &file.q {
        Some(list) => {
            if list.len() != system.len() {
                return Err(InputError::WrongLength {
                    list: "Q".to_string(),
                    expected: system.len(),
                    found: list.len(),
                });
            }
            let mut out = Vec::with_capacity(list.len());
            for (l, rows) in list.iter().enumerate() {
                out.push(parse_matrix(rows, m, n, &format!("Q[{l}]"))?);
            }
            Some(out)
        }
        None => None,
    };
    let psi = match &file.psi {
        Some(list) => {
            if list.len() != system.len() {
                return Err(InputError::WrongLength {
                    list: "psi".to_string(),
                    expected: system.len(),
                    found: list.len(),
                });
            }
            let mut out = Vec::with_capacity(list.len());
            for (l, text) in list.iter().enumerate() {
                out.push(parse_in(text, m, &format!("psi[{l}]"))?);
            }
            Some(out)
        }
        None => None,
    };
    let decomposition = match &file.decomposition {
        Some(map) => {
            let mut out = ResidualDecomposition::new();
            for (key, rows) in map {
                let (l, idx) = parse_decomposition_key(key)?;
                if l >= system.len() {
                    return Err(InputError::DecompositionIndex {
                        key: key.clone(),
                        l: l + 1,
                        count: system.len(),
                    });
                }
                let mat = parse_matrix(rows, m, n, &format!("decomposition[{key}]"))?;
                out.insert((l, idx), mat);
            }
            Some(out)
        }
        None => None,
    };
    let current = match &file.current {
        Some(c) => Some((
            parse_in(&c.p1, m, "current.P1")?,
            parse_in(&c.p2, m, "current.P2")?,
        )),
        None => None,
    };

    Ok(Problem {
        dependents: m,
        system,
        algebra,
        zcr,
        gauge,
        q,
        psi,
        decomposition,
        current,
    })
}

/// Read and validate a problem document from disk.
pub fn load_problem(path: &Path) -> Result<Problem, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ProblemFile = serde_json::from_str(&text)?;
    parse_problem(&file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_keys_parse_one_based() {
        assert_eq!(
            parse_decomposition_key("(1,0,0)").unwrap(),
            (0, MultiIndex::new(0, 0))
        );
        assert_eq!(
            parse_decomposition_key(" ( 2 , 3 , 1 ) ").unwrap(),
            (1, MultiIndex::new(3, 1))
        );
        assert_eq!(
            format_decomposition_key(0, MultiIndex::new(1, 1)),
            "(1,1,1)"
        );
        for bad in ["(0,0,0)", "1,0,0", "(1,0)", "(a,0,0)", "(1,0,0,0)"] {
            assert!(parse_decomposition_key(bad).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn leads_must_be_bare_coordinates() {
        assert_eq!(parse_lead("u1[0,1]", 1, 0).unwrap(), JetCoordinate::new(1, 0, 1));
        assert_eq!(parse_lead("u_y", 1, 0).unwrap(), JetCoordinate::new(1, 0, 1));
        assert!(matches!(
            parse_lead("2*u1[0,1]", 1, 0),
            Err(InputError::BadLead { .. })
        ));
        assert!(matches!(
            parse_lead("u1 + 1", 1, 0),
            Err(InputError::BadLead { .. })
        ));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let doc = r#"{"dependents":1,"equations":[],"algebra":{"n":1,"basis":[[["1"]]]},"extra":1}"#;
        assert!(serde_json::from_str::<ProblemFile>(doc).is_err());
    }
}
