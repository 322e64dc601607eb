//! Positive linear systems dx/dt = A x + b with Metzler A and nonnegative b:
//! equilibrium computation and a fixed-step trajectory integrator.
//!
//! For Hurwitz Metzler A the system has the unique nonnegative equilibrium
//! x_bar = -A^{-1} b, and trajectories from nonnegative initial states stay
//! in the positive cone and converge to it.

use crate::certify::certify_metzler;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixData};
use crate::scalar::{Scalar, SignClass, Tolerance};

/// System data: a Metzler matrix and a componentwise nonnegative input,
/// both in one scalar mode. Validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveLinearSystem {
    a: Matrix,
    b: Vec<Scalar>,
}

impl PositiveLinearSystem {
    pub fn new(a: Matrix, b: Vec<Scalar>, tol: &Tolerance) -> Result<Self> {
        if !a.is_metzler(tol, false) {
            return Err(Error::NotMetzler);
        }
        if b.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.len(),
            });
        }
        if b.iter().any(|s| s.mode() != a.mode()) {
            return Err(Error::ModeMismatch);
        }
        if b.iter().any(|s| s.sign_class(tol) == SignClass::Negative) {
            return Err(Error::InvalidParameter {
                detail: "input vector b must be componentwise nonnegative".into(),
            });
        }
        Ok(PositiveLinearSystem { a, b })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[Scalar] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// Equilibrium of a Hurwitz positive system, with the achieved residual
/// max-norm of A x_bar + b (exactly zero in exact mode).
#[derive(Clone, Debug, PartialEq)]
pub struct Equilibrium {
    pub x_bar: Vec<Scalar>,
    pub residual_norm: f64,
}

/// Solves A x_bar = -b and checks the positivity guarantees. The matrix must
/// certify as Hurwitz Metzler first; a singular solve or a negative component
/// afterwards would contradict that and is reported as an internal error.
pub fn equilibrium(sys: &PositiveLinearSystem, tol: &Tolerance) -> Result<Equilibrium> {
    tol.check_mode(sys.a.mode())?;
    let verdict = certify_metzler(&sys.a, tol)?;
    if !verdict.hurwitz {
        return Err(Error::NotHurwitz);
    }
    let rhs: Vec<Scalar> = sys.b.iter().map(|s| s.neg()).collect();
    let x_bar = sys.a.solve_linear(&rhs, tol).map_err(|e| match e {
        Error::SingularMatrix { pivot_col } => Error::Internal {
            detail: format!(
                "Hurwitz-certified matrix reported singular at pivot column {pivot_col}"
            ),
        },
        other => other,
    })?;
    if x_bar.iter().any(|s| s.sign_class(tol) == SignClass::Negative) {
        return Err(Error::Internal {
            detail: "equilibrium of a Hurwitz positive system has a negative component".into(),
        });
    }
    let mut residual_norm = 0.0f64;
    for i in 0..sys.dim() {
        let mut acc = sys.b[i].clone();
        for j in 0..sys.dim() {
            acc = acc.checked_add(&sys.a.get(i, j).checked_mul(&x_bar[j])?)?;
        }
        residual_norm = residual_norm.max(acc.to_f64().abs());
    }
    Ok(Equilibrium {
        x_bar,
        residual_norm,
    })
}

/// Sampled trajectory of a fixed-step integration: states[s] is the state at
/// time s * dt, starting with the initial state at s = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory includes t = 0")
    }

    pub fn time_at(&self, index: usize) -> f64 {
        index as f64 * self.dt
    }
}

/// Classic fixed-step RK4 on dx/dt = A x + b. Integration always runs in
/// f64; exact systems are converted first. The initial state must be
/// componentwise nonnegative.
pub fn simulate(
    sys: &PositiveLinearSystem,
    x0: &[f64],
    dt: f64,
    steps: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::NonPositiveStep);
    }
    let n = sys.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x0.iter().any(|x| *x < 0.0) {
        return Err(Error::InvalidParameter {
            detail: "initial state must be componentwise nonnegative".into(),
        });
    }
    let a_float = sys.a.to_float();
    let a: &[f64] = match a_float.data() {
        MatrixData::Float(v) => v,
        MatrixData::Exact(_) => unreachable!("to_float returns float data"),
    };
    let b: Vec<f64> = sys.b.iter().map(|s| s.to_f64()).collect();
    let deriv = |x: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let mut acc = b[i];
            for j in 0..n {
                acc += a[i * n + j] * x[j];
            }
            out[i] = acc;
        }
    };
    let mut states = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    states.push(x.clone());
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut stage = vec![0.0; n];
    for _ in 0..steps {
        deriv(&x, &mut k1);
        for i in 0..n {
            stage[i] = x[i] + 0.5 * dt * k1[i];
        }
        deriv(&stage, &mut k2);
        for i in 0..n {
            stage[i] = x[i] + 0.5 * dt * k2[i];
        }
        deriv(&stage, &mut k3);
        for i in 0..n {
            stage[i] = x[i] + dt * k3[i];
        }
        deriv(&stage, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        states.push(x.clone());
    }
    Ok(Trajectory { dt, states })
}
