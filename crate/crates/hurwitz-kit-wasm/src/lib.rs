//! Browser bindings: thin JSON-string adapters over the library. Every
//! export returns a JSON string so the page needs no generated types;
//! failures come back as `{"error": "..."}`. The crate also compiles on
//! native targets, where the exports are plain functions, so the adapters
//! are tested without a browser.

use wasm_bindgen::prelude::*;

use hurwitz_kit::certify::{certify_with_oracles, CertKind, StabilityVerdict, Verdict};
use hurwitz_kit::family::Corner;
use hurwitz_kit::insulin;
use hurwitz_kit::json;
use hurwitz_kit::positive::{equilibrium, simulate, PositiveLinearSystem};
use hurwitz_kit::scalar::{Mode, Scalar, Tolerance};
use hurwitz_kit::{Error, Matrix};

fn error_json(message: &str) -> String {
    format!(
        "{{\"error\":{}}}",
        serde_json::to_string(message).expect("strings serialize")
    )
}

fn verdict_json_or_error(matrix: &Matrix, kind: CertKind, tol: &Tolerance) -> Result<String, String> {
    match certify_with_oracles(matrix, kind, tol) {
        Ok(verdict) => Ok(json::verdict_to_json(&verdict)),
        Err(Error::OracleDisagreement(disagreement)) => {
            let verdict = StabilityVerdict {
                hurwitz: disagreement.certificate.verdict == Verdict::Hurwitz,
                certificate: disagreement.certificate,
                oracle_agreement: Some(disagreement.oracles),
            };
            Ok(json::verdict_to_json(&verdict))
        }
        Err(e) => Err(e.to_string()),
    }
}

/// Certifies a matrix JSON string as `"symmetric"` or `"metzler"`. The
/// arithmetic mode follows the matrix encoding: string entries run exactly,
/// numeric entries run in float at the default tolerance.
#[wasm_bindgen]
pub fn certify_json(matrix_json: &str, kind: &str) -> String {
    let kind = match kind {
        "symmetric" => CertKind::Symmetric,
        "metzler" => CertKind::Metzler,
        other => return error_json(&format!("unknown kind {other:?}; use symmetric or metzler")),
    };
    let matrix = match json::matrix_from_json(matrix_json) {
        Ok(m) => m,
        Err(e) => return error_json(&e.to_string()),
    };
    let tol = Tolerance::for_mode(matrix.mode());
    match verdict_json_or_error(&matrix, kind, &tol) {
        Ok(text) => text,
        Err(message) => error_json(&message),
    }
}

/// The bundled 7x7 insulin-subsystem matrix in canonical exact JSON.
#[wasm_bindgen]
pub fn insulin_matrix_json() -> String {
    insulin::a7_json().to_string()
}

fn build_member(h2: f64, k2: f64, h6: f64, k6: f64, k7: f64) -> Result<Matrix, Error> {
    let tol = Tolerance::default_float();
    insulin::restricted_family(
        &Scalar::from_f64(h2)?,
        &Scalar::from_f64(h6)?,
        &Scalar::from_f64(k2)?,
        &Scalar::from_f64(k6)?,
        &Corner::Chart { k_n: k7 },
        &tol,
    )
}

/// Builds the restricted-family member for (h2, k2, h6, k6, k7) and
/// certifies it. Returns `{"matrix": ..., "verdict": ...}`.
#[wasm_bindgen]
pub fn insulin_family_member(h2: f64, k2: f64, h6: f64, k6: f64, k7: f64) -> String {
    let member = match build_member(h2, k2, h6, k6, k7) {
        Ok(m) => m,
        Err(e) => return error_json(&e.to_string()),
    };
    let tol = Tolerance::default_float();
    match verdict_json_or_error(&member, CertKind::Metzler, &tol) {
        Ok(verdict) => format!(
            "{{\"matrix\":{},\"verdict\":{}}}",
            json::matrix_to_json(&member),
            verdict
        ),
        Err(message) => error_json(&message),
    }
}

/// Integrates the member system from the empty state under a unit insulin
/// input at compartment 2. Returns
/// `{"dt": ..., "states": [[...], ...], "x_bar": [...]}`.
#[wasm_bindgen]
pub fn insulin_trajectory(h2: f64, k2: f64, h6: f64, k6: f64, k7: f64, dt: f64, steps: u32) -> String {
    let run = || -> Result<String, Error> {
        let member = build_member(h2, k2, h6, k6, k7)?;
        let tol = Tolerance::default_float();
        let sys = PositiveLinearSystem::new(member, insulin::default_input(Mode::Float), &tol)?;
        let eq = equilibrium(&sys, &tol)?;
        let trajectory = simulate(&sys, &vec![0.0; sys.dim()], dt, steps as usize)?;
        let mut out = String::from("{\"dt\":");
        out.push_str(&json::fmt_f64(trajectory.dt));
        out.push_str(",\"states\":[");
        for (i, state) in trajectory.states.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            for (j, x) in state.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&json::fmt_f64(*x));
            }
            out.push(']');
        }
        out.push_str("],\"x_bar\":[");
        for (i, x) in eq.x_bar.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&json::fmt_f64(x.to_f64()));
        }
        out.push_str("]}");
        Ok(out)
    };
    match run() {
        Ok(text) => text,
        Err(e) => error_json(&e.to_string()),
    }
}
