use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

use qudit_magic::basis::{index_to_coords, o_operator, o_trace, Domain, PhasePoint};
use qudit_magic::exec::Exec;
use qudit_magic::gkp::{verify_wigner_cell_identity, verify_char_cell_identity};
use qudit_magic::gkpsim::{logical_clifford_word, pseudo_probability_report_with, simulate_homodyne_batch, GaussianCircuit};
use qudit_magic::measures::{characteristic_fn, discrete_wigner, is_hyperpolyhedral, magic_negativity, stabilizer_renyi, wigner_negativity, x_distribution};
use qudit_magic::qpsim::{estimate_born_with, Circuit, Variant};
use qudit_magic::random::{haar_pure_state, random_mixed_state, stream_rng};
use qudit_magic::stabilizer::{enumerate_single_qudit_stabilizer_groups, stabilizer_state};
use qudit_magic::{CMatrix, DensityState};

use crate::input::{load_json, parse_state, system, CircuitDoc, GaussianDoc};
use crate::{document, BasisArgs, CharArgs, CliError, EnumerateArgs, GkpCheckArgs, GkpSimArgs, MeasureArgs, Output, SimulateArgs, StateArgs, VariantArg};

/// Residual tolerance for the cell-norm identities.
const IDENTITY_TOL: f64 = 1e-9;

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| cjson(m[(i, j)])).collect())).collect())
}

fn key(x: f64) -> String {
    format!("{x}")
}

fn state(a: &StateArgs, cap: usize) -> Result<DensityState, CliError> {
    parse_state(&a.state, a.d, a.n, cap)
}

fn exec(sequential: bool) -> Exec {
    if sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    }
}

pub fn basis(a: &BasisArgs, cap: usize) -> Result<Output, CliError> {
    let s = system(a.d, a.n, cap)?;
    let domain = if a.full { Domain::Full } else { Domain::Restricted };
    let modulus = domain.modulus(a.d);
    if let (Some(l), Some(m)) = (&a.l, &a.m) {
        if l.len() != a.n || m.len() != a.n {
            return Err(CliError::Validation(format!("--l and --m need {} entries each", a.n)));
        }
        let p = PhasePoint::new(l, m, 2 * a.d)?;
        let op = o_operator(s, &p)?;
        eprintln!("O(l={:?}, m={:?}): trace {:.6}", p.l, p.m, op.trace().re);
        return Ok(vec![document(
            "basis",
            json!({
                "d": a.d, "n": a.n, "l": p.l, "m": p.m,
                "trace": o_trace(s, &p)?,
                "hermiticity_deviation": op.hermiticity_deviation(),
                "unitarity_deviation": op.unitarity_deviation(),
                "matrix": matrix_json(op.matrix()),
            }),
        )]);
    }
    let mut points = Vec::new();
    for i in 0..domain.size(s) {
        let p = PhasePoint::from_index(i, a.n, modulus);
        points.push(json!({ "l": p.l, "m": p.m, "trace": o_trace(s, &p)? }));
    }
    eprintln!("{} labels over Z_{}", points.len(), modulus);
    Ok(vec![document("basis", json!({ "d": a.d, "n": a.n, "domain": domain_name(domain), "points": points }))])
}

fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Restricted => "restricted",
        Domain::Full => "full",
    }
}

pub fn measure(a: &MeasureArgs, cap: usize) -> Result<Output, CliError> {
    let rho = state(&a.state, cap)?;
    let s = rho.system();
    if a.wigner && !s.is_odd() {
        return Err(CliError::Validation(format!(
            "the discrete Wigner function is defined here only for odd local dimension; d = {} is even",
            s.d()
        )));
    }
    let x = x_distribution(&rho, Domain::Restricted);
    let mut norms = Map::new();
    for &p in &a.p {
        norms.insert(key(p), json!(x.lp_norm(p)?));
    }
    let scale = if a.bits { std::f64::consts::LN_2 } else { 1.0 };
    let mut renyi = Map::new();
    for &alpha in &a.alpha {
        renyi.insert(key(alpha), json!(stabilizer_renyi(&rho, alpha)? / scale));
    }
    let hp = is_hyperpolyhedral(&rho);
    let negativity = magic_negativity(&rho);
    let mut body = json!({
        "d": s.d(), "n": s.n(),
        "negativity": negativity,
        "lp_norms": norms,
        "renyi": renyi,
        "renyi_unit": if a.bits { "bits" } else { "nats" },
        "hyperpolyhedral": hp,
    });
    if s.is_odd() {
        let (l1, neg) = wigner_negativity(&rho)?;
        body["wigner_negativity"] = json!({ "l1": l1, "negativity": neg });
    }
    eprintln!("negativity {negativity:.9}  hyperpolyhedral {}", hp.hyperpolyhedral);
    for (k, v) in &renyi_table(&body) {
        eprintln!("M_{k} = {v}");
    }
    Ok(vec![document("measure", body)])
}

fn renyi_table(body: &Value) -> Vec<(String, String)> {
    body["renyi"].as_object().map(|m| m.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()).unwrap_or_default()
}

pub fn wigner(a: &StateArgs, cap: usize) -> Result<Output, CliError> {
    let rho = state(a, cap)?;
    let s = rho.system();
    if !s.is_odd() {
        return Err(CliError::Validation(format!(
            "the discrete Wigner function is defined here only for odd local dimension; d = {} is even",
            s.d()
        )));
    }
    let w = discrete_wigner(&rho)?;
    let values: Vec<Value> = w
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let u = index_to_coords(i, s.n(), s.d());
            json!({ "l": &u[..s.n()], "m": &u[s.n()..], "value": v.re })
        })
        .collect();
    eprintln!("||W||_1 = {:.9}", w.lp_norm(1.0)?);
    Ok(vec![document("wigner", json!({ "d": s.d(), "n": s.n(), "l1": w.lp_norm(1.0)?, "values": values }))])
}

pub fn characteristic(a: &CharArgs, cap: usize) -> Result<Output, CliError> {
    let rho = state(&a.state, cap)?;
    let s = rho.system();
    let domain = if a.full { Domain::Full } else { Domain::Restricted };
    let chi = characteristic_fn(&rho, domain);
    let n = s.n();
    let values: Vec<Value> = chi
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let u = index_to_coords(i, n, chi.modulus());
            json!({ "a": &u[..n], "b": &u[n..], "value": cjson(*v) })
        })
        .collect();
    eprintln!("||chi||_1 = {:.9}", chi.lp_norm(1.0)?);
    Ok(vec![document("char", json!({ "d": s.d(), "n": n, "domain": domain_name(domain), "l1": chi.lp_norm(1.0)?, "values": values }))])
}

#[derive(Serialize)]
struct CsvRow {
    d: usize,
    n: usize,
    p: f64,
    state: usize,
    wigner_lhs: f64,
    wigner_residual: f64,
    char_lhs: f64,
    char_residual: f64,
}

pub fn gkp_check(a: &GkpCheckArgs, cap: usize) -> Result<Output, CliError> {
    if a.d.is_empty() || a.n.is_empty() || a.p.is_empty() {
        return Err(CliError::Validation("grid lists must be nonempty".into()));
    }
    if let Some(p) = a.p.iter().find(|p| !p.is_finite() || **p <= 0.0) {
        return Err(CliError::Validation(format!("p must be positive, got {p}")));
    }
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &d in &a.d {
        for &n in &a.n {
            let s = system(d, n, cap)?;
            if s.dim() > a.grid_cap {
                continue;
            }
            let mut rng = stream_rng(a.seed, (d * 100 + n) as u64);
            for k in 0..a.states {
                let rho = if k % 2 == 0 { haar_pure_state(s, &mut rng) } else { random_mixed_state(s, &mut rng) };
                for &p in &a.p {
                    let t1 = verify_wigner_cell_identity(&rho, p)?;
                    let t2 = verify_char_cell_identity(&rho, p)?;
                    worst = worst.max(t1.residual).max(t2.residual);
                    csv_rows.push(CsvRow {
                        d,
                        n,
                        p,
                        state: k,
                        wigner_lhs: t1.lhs,
                        wigner_residual: t1.residual,
                        char_lhs: t2.lhs,
                        char_residual: t2.residual,
                    });
                    rows.push(json!({
                        "d": d, "n": n, "p": p, "state": k, "pure": k % 2 == 0,
                        "wigner_cell": t1, "char_cell": t2,
                    }));
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Validation("the grid is empty after applying --grid-cap".into()));
    }
    if let Some(path) = &a.csv {
        let fail = |e: csv::Error| CliError::Validation(format!("cannot write {}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(fail)?;
        for r in &csv_rows {
            w.serialize(r).map_err(fail)?;
        }
        w.flush().map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    }
    let passed = worst < IDENTITY_TOL;
    eprintln!("{} checks, max residual {worst:.3e} ({})", rows.len(), if passed { "ok" } else { "FAILED" });
    Ok(vec![document(
        "gkp-check",
        json!({ "rows": rows, "max_residual": worst, "tolerance": IDENTITY_TOL, "passed": passed }),
    )])
}

pub fn simulate(a: &SimulateArgs, cap: usize) -> Result<Output, CliError> {
    let doc: CircuitDoc = load_json(&a.circuit.to_string_lossy())?;
    let rho = parse_state(&doc.input, doc.d, doc.n, cap)?;
    let gates = doc.gates.iter().map(|g| g.to_gate()).collect::<Result<Vec<_>, _>>()?;
    let circuit = Circuit::new(rho, gates, doc.measurement.to_effect()?)?;
    let epsilon = a.epsilon.or(doc.epsilon).unwrap_or(0.05);
    let p_fail = a.p_fail.or(doc.p_fail).unwrap_or(0.05);
    let seed = a.seed.or(doc.seed).unwrap_or(0);
    let variant = match a.variant {
        VariantArg::Basis => Variant::Basis,
        VariantArg::Characteristic => Variant::Characteristic,
    };
    let report = estimate_born_with(&circuit, variant, epsilon, p_fail, seed, a.streams, exec(a.sequential))?;
    let mut body = serde_json::to_value(&report).map_err(|e| CliError::Invariant(e.to_string()))?;
    body["variant"] = json!(variant);
    body["d"] = json!(circuit.system.d());
    body["n"] = json!(circuit.system.n());
    if a.exact {
        body["exact"] = json!(circuit.exact_born()?);
    }
    eprintln!(
        "estimate {:.6} +/- {} (p_f {}), {} samples, forward norm {:.6}",
        report.estimate, epsilon, p_fail, report.samples_used, report.forward_norm
    );
    Ok(vec![document("simulate", body)])
}

pub fn gkp_sim(a: &GkpSimArgs, cap: usize) -> Result<Output, CliError> {
    let doc: GaussianDoc = load_json(&a.circuit.to_string_lossy())?;
    let rho = parse_state(&doc.state, doc.d, doc.n, cap)?;
    let s = rho.system();
    let circuit = match (&doc.clifford, &doc.s, &doc.displacement) {
        (Some(word), None, None) => {
            let ops = word.iter().map(|g| g.to_clifford()).collect::<Result<Vec<_>, _>>()?;
            logical_clifford_word(s, &ops)?
        }
        (None, Some(m), disp) => GaussianCircuit::new(s.n(), m.clone(), disp.clone().unwrap_or_else(|| vec![0.0; 2 * s.n()]))?,
        _ => return Err(CliError::Validation("give either S (with optional displacement) or a clifford word".into())),
    };
    let samples = a.samples.unwrap_or(doc.samples);
    let seed = a.seed.unwrap_or(doc.seed);
    if a.histogram {
        let rep = pseudo_probability_report_with(&rho, &circuit, samples, seed, a.streams, exec(a.sequential))?;
        eprintln!("{} samples in {} bins (pseudo-probability, not normalizable)", samples, rep.bins.len());
        let body = serde_json::to_value(&rep).map_err(|e| CliError::Invariant(e.to_string()))?;
        return Ok(vec![document("gkp-sim", body)]);
    }
    let out = simulate_homodyne_batch(&rho, &circuit, samples, seed, a.streams, exec(a.sequential))?;
    eprintln!("{} samples", out.len());
    out.iter()
        .map(|smp| Ok(document("gkp-sim", serde_json::to_value(smp).map_err(|e| CliError::Invariant(e.to_string()))?)))
        .collect()
}

pub fn enumerate(a: &EnumerateArgs) -> Result<Output, CliError> {
    let groups = enumerate_single_qudit_stabilizer_groups(a.d)?;
    let mut states = Vec::new();
    for g in &groups {
        let rho = stabilizer_state(g)?;
        states.push(json!({
            "generators": g.generators,
            "phase_vector": g.phase_vector,
            "negativity": magic_negativity(&rho),
        }));
    }
    eprintln!("{} stabilizer states for d = {}", states.len(), a.d);
    Ok(vec![document("enumerate-stabilizers", json!({ "d": a.d, "count": states.len(), "states": states }))])
}
