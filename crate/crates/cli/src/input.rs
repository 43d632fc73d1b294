//! Parsing of state specs, matrix files and circuit documents.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use qudit_magic::pauli::{t_gate, CliffordKind, CliffordOp};
use qudit_magic::qpsim::{Gate, MeasurementEffect};
use qudit_magic::random::{haar_pure_state, random_mixed_state, stream_rng};
use qudit_magic::stabilizer::{stabilizer_state, StabilizerGroup};
use qudit_magic::{CMatrix, DensityState, QuditSystem};

use crate::CliError;

pub fn system(d: usize, n: usize, cap: usize) -> Result<QuditSystem, CliError> {
    Ok(QuditSystem::with_cap(d, n, cap)?)
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(Path::new(path)).map_err(|e| CliError::Validation(format!("cannot read {path}: {e}")))
}

/// Entries are numbers or `[re, im]` pairs.
pub fn complex_matrix(v: &Value) -> Result<CMatrix, CliError> {
    let bad = || CliError::Validation("matrix must be a square array of rows of numbers or [re, im] pairs".into());
    let rows = v.as_array().ok_or_else(bad)?;
    let dim = rows.len();
    let mut out = CMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(bad)?;
        if row.len() != dim {
            return Err(bad());
        }
        for (j, e) in row.iter().enumerate() {
            out[(i, j)] = match e {
                Value::Number(x) => Complex64::new(x.as_f64().ok_or_else(bad)?, 0.0),
                Value::Array(p) if p.len() == 2 => {
                    Complex64::new(p[0].as_f64().ok_or_else(bad)?, p[1].as_f64().ok_or_else(bad)?)
                }
                _ => return Err(bad()),
            };
        }
    }
    Ok(out)
}

fn qudits_for_dim(d: usize, dim: usize) -> Result<usize, CliError> {
    let mut n = 0;
    let mut k = 1;
    while k < dim {
        k *= d;
        n += 1;
    }
    if k != dim || n == 0 {
        return Err(CliError::Validation(format!("matrix dimension {dim} is not a power of d = {d}")));
    }
    Ok(n)
}

fn check_n(given: Option<usize>, found: usize) -> Result<usize, CliError> {
    match given {
        Some(n) if n != found => Err(CliError::Validation(format!("state spec describes {found} qudit(s) but n = {n}"))),
        _ => Ok(found),
    }
}

fn named(d: usize, name: &str) -> Result<DensityState, CliError> {
    let s = QuditSystem::new(d, 1)?;
    let plus = vec![Complex64::new(1.0, 0.0); d];
    Ok(match name {
        "zero" => DensityState::basis(s, 0)?,
        "plus" => DensityState::from_ket(s, &plus)?,
        "t" => {
            let t = t_gate(d);
            let amps: Vec<Complex64> = (0..d).map(|j| t[(j, j)]).collect();
            DensityState::from_ket(s, &amps)?
        }
        "mixed" => DensityState::maximally_mixed(s),
        other => match other.parse::<usize>() {
            Ok(k) if k < d => DensityState::basis(s, k)?,
            _ => {
                return Err(CliError::Validation(format!(
                    "unknown single-qudit state '{other}' (expected zero, plus, t, mixed or a digit below d)"
                )))
            }
        },
    })
}

/// `random:SEED`, `random-mixed:SEED`, `matrix:FILE`, `stabilizer:FILE` or a comma list of
/// single-qudit names, one per qudit.
pub fn parse_state(spec: &str, d: usize, n: Option<usize>, cap: usize) -> Result<DensityState, CliError> {
    let seed = |s: &str| s.parse::<u64>().map_err(|_| CliError::Validation(format!("bad seed '{s}'")));
    if let Some(rest) = spec.strip_prefix("random:") {
        return Ok(haar_pure_state(system(d, n.unwrap_or(1), cap)?, &mut stream_rng(seed(rest)?, 0)));
    }
    if let Some(rest) = spec.strip_prefix("random-mixed:") {
        return Ok(random_mixed_state(system(d, n.unwrap_or(1), cap)?, &mut stream_rng(seed(rest)?, 0)));
    }
    if let Some(path) = spec.strip_prefix("matrix:") {
        let v: Value = serde_json::from_str(&read(path)?).map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
        let m = complex_matrix(&v)?;
        let n = check_n(n, qudits_for_dim(d, m.nrows())?)?;
        return Ok(DensityState::new(system(d, n, cap)?, m)?);
    }
    if let Some(path) = spec.strip_prefix("stabilizer:") {
        let text = read(path)?;
        let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
        let found = first.map_or(0, |l| l.split('|').next().unwrap_or("").split(',').count());
        let n = check_n(n, found)?;
        let group = StabilizerGroup::parse(system(d, n, cap)?, &text)?;
        return Ok(stabilizer_state(&group)?);
    }
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let n = check_n(n, parts.len())?;
    system(d, n, cap)?;
    let mut rho = named(d, parts[0])?;
    for p in &parts[1..] {
        rho = rho.tensor(&named(d, p)?)?;
    }
    Ok(rho)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpec {
    pub gate: String,
    pub targets: Vec<usize>,
    #[serde(default)]
    pub matrix: Option<Value>,
}

impl GateSpec {
    pub fn to_gate(&self) -> Result<Gate, CliError> {
        match self.gate.to_ascii_lowercase().as_str() {
            "t" => {
                if self.targets.len() != 1 {
                    return Err(CliError::Validation("t takes one target".into()));
                }
                Ok(Gate::t(self.targets[0]))
            }
            "unitary" => {
                let m = self.matrix.as_ref().ok_or_else(|| CliError::Validation("unitary gate needs a matrix".into()))?;
                Ok(Gate::unitary(complex_matrix(m)?, self.targets.clone()))
            }
            name => Ok(Gate::clifford(clifford_kind(name)?, self.targets.clone())),
        }
    }

    pub fn to_clifford(&self) -> Result<CliffordOp, CliError> {
        Ok(CliffordOp::new(clifford_kind(&self.gate)?, self.targets.clone()))
    }
}

fn clifford_kind(name: &str) -> Result<CliffordKind, CliError> {
    CliffordKind::parse(name).ok_or_else(|| CliError::Validation(format!("unknown gate '{name}'")))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasurementSpec {
    Computational { qudits: Vec<usize>, outcome: Vec<usize> },
    Explicit(Value),
}

impl MeasurementSpec {
    pub fn to_effect(&self) -> Result<MeasurementEffect, CliError> {
        Ok(match self {
            MeasurementSpec::Computational { qudits, outcome } => {
                MeasurementEffect::Computational { qudits: qudits.clone(), outcome: outcome.clone() }
            }
            MeasurementSpec::Explicit(v) => MeasurementEffect::Explicit(complex_matrix(v)?),
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub d: usize,
    pub n: Option<usize>,
    pub input: String,
    #[serde(default)]
    pub gates: Vec<GateSpec>,
    pub measurement: MeasurementSpec,
    pub epsilon: Option<f64>,
    pub p_fail: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianDoc {
    pub d: usize,
    pub n: Option<usize>,
    pub state: String,
    #[serde(rename = "S")]
    pub s: Option<Vec<f64>>,
    pub displacement: Option<Vec<f64>>,
    /// Logical Clifford word used instead of S and displacement.
    pub clifford: Option<Vec<GateSpec>>,
    #[serde(default)]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Validation(format!("{path}: {e}")))
}
