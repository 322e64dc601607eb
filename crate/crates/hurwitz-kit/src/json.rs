//! Canonical JSON (and trajectory CSV) serialization, plus parsers.
//!
//! Output is byte-reproducible: object keys appear in sorted order, floats
//! are rendered with 17 significant digits in scientific notation, exact
//! rationals as `"p/q"` strings (`"p"` when the denominator is 1), and there
//! is no insignificant whitespace. Parsers accept any key order and ignore
//! unknown keys. Scalars follow one convention everywhere: JSON strings are
//! exact rationals, JSON numbers are floats; integer literals are also
//! accepted for exact entries.

use serde_json::Value;
use std::fmt::Write as _;

use crate::certify::StabilityVerdict;
use crate::chart::{ChartPoint, DirectLiftParams};
use crate::error::{Error, Result};
use crate::family::{BallFamilySpec, Corner, FamilyReport, MetzlerLiftParams};
use crate::matrix::Matrix;
use crate::positive::{Equilibrium, PositiveLinearSystem, Trajectory};
use crate::scalar::{Mode, Scalar, Tolerance};

/// Fixed-width float rendering: sign, 17 significant digits, `e` exponent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Exact(_) => format!("\"{}\"", s.rational_string().expect("exact scalar")),
        Scalar::Float(x) => fmt_f64(*x),
    }
}

fn write_scalar_list(out: &mut String, items: &[Scalar]) {
    out.push('[');
    for (i, s) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_scalar(s));
    }
    out.push(']');
}

fn write_f64_list(out: &mut String, items: &[f64]) {
    out.push('[');
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&fmt_f64(*x));
    }
    out.push(']');
}

pub fn matrix_to_json(m: &Matrix) -> String {
    let n = m.dim();
    let mut out = String::from("{\"entries\":[");
    for i in 0..n {
        if i > 0 {
            out.push(',');
        }
        let row: Vec<Scalar> = (0..n).map(|j| m.get(i, j)).collect();
        write_scalar_list(&mut out, &row);
    }
    let mode = match m.mode() {
        Mode::Exact => "exact",
        Mode::Float => "float",
    };
    let _ = write!(out, "],\"mode\":\"{mode}\",\"n\":{n}}}");
    out
}

pub fn verdict_to_json(v: &StabilityVerdict) -> String {
    let mut out = String::from("{\"failure_stage\":");
    match v.certificate.failure_stage {
        Some(stage) => {
            let _ = write!(out, "{stage}");
        }
        None => out.push_str("null"),
    }
    let _ = write!(out, ",\"kind\":\"{}\",\"oracles\":{{", v.certificate.kind);
    if let Some(oracles) = &v.oracle_agreement {
        for (i, (name, passed)) in oracles.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{name}\":{passed}");
        }
    }
    out.push_str("},\"pivots\":");
    write_scalar_list(&mut out, &v.certificate.pivots);
    let _ = write!(out, ",\"verdict\":\"{}\"}}", v.certificate.verdict);
    out
}

pub fn chart_point_to_json(p: &ChartPoint) -> String {
    let mut out = String::from("{\"base\":");
    out.push_str(&matrix_to_json(p.base()));
    out.push_str(",\"k\":");
    write_f64_list(&mut out, p.k());
    out.push('}');
    out
}

pub fn direct_lift_params_to_json(p: &DirectLiftParams) -> String {
    let mut out = String::from("{\"d\":");
    out.push_str(&fmt_scalar(p.d()));
    out.push_str(",\"k_row\":");
    write_scalar_list(&mut out, p.k_row());
    out.push('}');
    out
}

pub fn metzler_lift_params_to_json(p: &MetzlerLiftParams) -> String {
    let mut out = String::from("{");
    if let Corner::Direct { d } = p.corner() {
        out.push_str("\"d\":");
        out.push_str(&fmt_scalar(d));
        out.push(',');
    }
    out.push_str("\"h\":");
    write_scalar_list(&mut out, p.h());
    out.push_str(",\"k\":");
    write_scalar_list(&mut out, p.k());
    if let Corner::Chart { k_n } = p.corner() {
        out.push_str(",\"k_n\":");
        out.push_str(&fmt_f64(*k_n));
    }
    out.push('}');
    out
}

pub fn family_report_to_json(r: &FamilyReport) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"accepted\":{},\"rejected_reasons\":{{\"condition_violated\":{},\"not_hurwitz\":{},\"not_metzler\":{},\"not_symmetric\":{}}},\"total\":{},\"witnesses\":[",
        r.accepted,
        r.rejected_reasons.condition_violated,
        r.rejected_reasons.not_hurwitz,
        r.rejected_reasons.not_metzler,
        r.rejected_reasons.not_symmetric,
        r.total
    );
    for (i, w) in r.witnesses.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&matrix_to_json(w));
    }
    out.push_str("]}");
    out
}

pub fn system_to_json(sys: &PositiveLinearSystem) -> String {
    let mut out = String::from("{\"a\":");
    out.push_str(&matrix_to_json(sys.a()));
    out.push_str(",\"b\":");
    write_scalar_list(&mut out, sys.b());
    out.push('}');
    out
}

pub fn equilibrium_to_json(eq: &Equilibrium) -> String {
    let mut out = String::from("{\"residual\":");
    out.push_str(&fmt_f64(eq.residual_norm));
    out.push_str(",\"x_bar\":");
    write_scalar_list(&mut out, &eq.x_bar);
    out.push('}');
    out
}

/// CSV with header `t,x1,...,xn`; every value in the canonical float format.
pub fn trajectory_to_csv(tr: &Trajectory) -> String {
    let n = tr.states.first().map_or(0, |s| s.len());
    let mut out = String::from("t");
    for i in 1..=n {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    for (s, state) in tr.states.iter().enumerate() {
        out.push_str(&fmt_f64(tr.time_at(s)));
        for x in state {
            out.push(',');
            out.push_str(&fmt_f64(*x));
        }
        out.push('\n');
    }
    out
}

fn parse_value(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse {
        detail: format!("invalid JSON: {e}"),
    })
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse {
        detail: format!("{what} must be a JSON object"),
    })
}

fn get<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse {
        detail: format!("missing field \"{key}\""),
    })
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse {
        detail: format!("{what} must be a JSON array"),
    })
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::Parse {
        detail: format!("{what} must be a nonnegative integer"),
    })
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::Parse {
        detail: format!("{what} must be a number"),
    })
}

/// A JSON string is an exact rational; a JSON number is a float. Integer
/// literals are accepted as exact values when `mode` is Exact.
fn scalar_from_value(v: &Value, mode: Mode) -> Result<Scalar> {
    match (mode, v) {
        (Mode::Exact, Value::String(s)) => Scalar::from_rational_str(s),
        (Mode::Exact, Value::Number(num)) => match num.as_i64() {
            Some(i) => Ok(Scalar::from_int(i)),
            None => Err(Error::Parse {
                detail: format!("exact entries must be \"p/q\" strings or integers, got {num}"),
            }),
        },
        (Mode::Float, Value::Number(_)) => Scalar::from_f64(as_f64(v, "entry")?),
        (Mode::Exact, other) => Err(Error::Parse {
            detail: format!("exact entries must be \"p/q\" strings, got {other}"),
        }),
        (Mode::Float, other) => Err(Error::Parse {
            detail: format!("float entries must be numbers, got {other}"),
        }),
    }
}

/// Scalar in self-describing position: string means exact, number means float.
fn scalar_from_free_value(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Scalar::from_rational_str(s),
        Value::Number(_) => Scalar::from_f64(as_f64(v, "value")?),
        other => Err(Error::Parse {
            detail: format!("expected \"p/q\" string or number, got {other}"),
        }),
    }
}

fn scalar_list_from_value(v: &Value, what: &str) -> Result<Vec<Scalar>> {
    as_array(v, what)?.iter().map(scalar_from_free_value).collect()
}

fn matrix_from_value(v: &Value) -> Result<Matrix> {
    let obj = as_object(v, "matrix")?;
    let n = as_usize(get(obj, "n")?, "\"n\"")?;
    let mode = match get(obj, "mode")?.as_str() {
        Some("exact") => Mode::Exact,
        Some("float") => Mode::Float,
        _ => {
            return Err(Error::Parse {
                detail: "\"mode\" must be \"exact\" or \"float\"".into(),
            })
        }
    };
    let entries = as_array(get(obj, "entries")?, "\"entries\"")?;
    if entries.len() != n {
        return Err(Error::Parse {
            detail: format!("expected {n} rows, got {}", entries.len()),
        });
    }
    let mut rows = Vec::with_capacity(n);
    for row_val in entries {
        let row_vals = as_array(row_val, "matrix row")?;
        if row_vals.len() != n {
            return Err(Error::Parse {
                detail: format!("expected {n} entries per row, got {}", row_vals.len()),
            });
        }
        rows.push(
            row_vals
                .iter()
                .map(|e| scalar_from_value(e, mode))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Matrix::from_rows(rows)
}

pub fn matrix_from_json(s: &str) -> Result<Matrix> {
    matrix_from_value(&parse_value(s)?)
}

pub fn chart_point_from_json(s: &str, tol: &Tolerance) -> Result<ChartPoint> {
    let v = parse_value(s)?;
    let obj = as_object(&v, "chart point")?;
    let base = matrix_from_value(get(obj, "base")?)?;
    let k = as_array(get(obj, "k")?, "\"k\"")?
        .iter()
        .map(|x| as_f64(x, "coordinate"))
        .collect::<Result<Vec<_>>>()?;
    ChartPoint::new(base, k, tol)
}

pub fn direct_lift_params_from_json(s: &str) -> Result<DirectLiftParams> {
    let v = parse_value(s)?;
    let obj = as_object(&v, "lift parameters")?;
    let d = scalar_from_free_value(get(obj, "d")?)?;
    let k_row = scalar_list_from_value(get(obj, "k_row")?, "\"k_row\"")?;
    DirectLiftParams::new(k_row, d)
}

pub fn metzler_lift_params_from_json(s: &str) -> Result<MetzlerLiftParams> {
    let v = parse_value(s)?;
    let obj = as_object(&v, "lift parameters")?;
    let h = scalar_list_from_value(get(obj, "h")?, "\"h\"")?;
    let k = scalar_list_from_value(get(obj, "k")?, "\"k\"")?;
    let corner = match (obj.get("d"), obj.get("k_n")) {
        (Some(d), None) => Corner::Direct {
            d: scalar_from_free_value(d)?,
        },
        (None, Some(k_n)) => Corner::Chart {
            k_n: as_f64(k_n, "\"k_n\"")?,
        },
        _ => {
            return Err(Error::Parse {
                detail: "exactly one of \"d\" (direct corner) or \"k_n\" (chart corner) required"
                    .into(),
            })
        }
    };
    MetzlerLiftParams::new(h, k, corner)
}

/// Ball family configuration: either an explicit symmetric float `center`
/// matrix or a `dim` for the zero center; `radius` and `count` are required;
/// `lift_k_bounds` defaults to [-1, 1] and `seed` to 0.
pub fn ball_config_from_json(s: &str) -> Result<(BallFamilySpec, (f64, f64))> {
    let v = parse_value(s)?;
    let obj = as_object(&v, "family config")?;
    let center = match (obj.get("center"), obj.get("dim")) {
        (Some(c), _) => {
            let m = matrix_from_value(c)?;
            if let Some(d) = obj.get("dim") {
                if as_usize(d, "\"dim\"")? != m.dim() {
                    return Err(Error::Parse {
                        detail: "\"dim\" disagrees with the center matrix dimension".into(),
                    });
                }
            }
            m
        }
        (None, Some(d)) => Matrix::zero(as_usize(d, "\"dim\"")?, Mode::Float)?,
        (None, None) => {
            return Err(Error::Parse {
                detail: "either \"center\" or \"dim\" required".into(),
            })
        }
    };
    let radius = as_f64(get(obj, "radius")?, "\"radius\"")?;
    let count = as_usize(get(obj, "count")?, "\"count\"")?;
    let seed = match obj.get("seed") {
        Some(v) => as_usize(v, "\"seed\"")? as u64,
        None => 0,
    };
    let bounds = match obj.get("lift_k_bounds") {
        Some(v) => {
            let pair = as_array(v, "\"lift_k_bounds\"")?;
            if pair.len() != 2 {
                return Err(Error::Parse {
                    detail: "\"lift_k_bounds\" must be [lower, upper]".into(),
                });
            }
            (
                as_f64(&pair[0], "lower bound")?,
                as_f64(&pair[1], "upper bound")?,
            )
        }
        None => (-1.0, 1.0),
    };
    Ok((BallFamilySpec::new(center, radius, count, seed)?, bounds))
}

pub fn system_from_json(s: &str, tol: &Tolerance) -> Result<PositiveLinearSystem> {
    let v = parse_value(s)?;
    let obj = as_object(&v, "system")?;
    let a = matrix_from_value(get(obj, "a")?)?;
    let mode = a.mode();
    let b = as_array(get(obj, "b")?, "\"b\"")?
        .iter()
        .map(|e| scalar_from_value(e, mode))
        .collect::<Result<Vec<_>>>()?;
    PositiveLinearSystem::new(a, b, tol)
}

pub fn f64_vector_from_json(s: &str) -> Result<Vec<f64>> {
    let v = parse_value(s)?;
    as_array(&v, "vector")?
        .iter()
        .map(|x| as_f64(x, "component"))
        .collect()
}
