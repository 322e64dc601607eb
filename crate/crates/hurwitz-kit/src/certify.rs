//! Hurwitz certification by recursive Schur reduction, with independent
//! classical criteria as cross-checking oracles.
//!
//! The certifier walks the pivot chain d_n, d_{n-1}, ..., d_1: at each stage
//! the trailing diagonal entry must be strictly negative, and the matrix is
//! replaced by the Schur complement of that entry. For symmetric and for
//! Metzler matrices this chain decides Hurwitz stability outright. A
//! nonnegative trailing entry short-circuits to NotHurwitz, which also means
//! the reduction never divides by a nonnegative pivot.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Disagreement, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Mode, Scalar, SignClass, Tolerance};

/// Structural class a certificate applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertKind {
    Symmetric,
    Metzler,
}

impl fmt::Display for CertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertKind::Symmetric => write!(f, "symmetric"),
            CertKind::Metzler => write!(f, "metzler"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Hurwitz,
    NotHurwitz,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Hurwitz => write!(f, "hurwitz"),
            Verdict::NotHurwitz => write!(f, "not_hurwitz"),
        }
    }
}

/// Replayable record of one certification run.
///
/// `pivots` lists the trailing diagonal entry of each reduction stage in
/// order. On a Hurwitz verdict it has one pivot per starting dimension; on
/// NotHurwitz it stops at (and includes) the first nonnegative pivot, whose
/// 1-based stage is `failure_stage`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub kind: CertKind,
    pub pivots: Vec<Scalar>,
    pub verdict: Verdict,
    pub failure_stage: Option<usize>,
}

impl Certificate {
    fn hurwitz(kind: CertKind, pivots: Vec<Scalar>) -> Self {
        Certificate {
            kind,
            pivots,
            verdict: Verdict::Hurwitz,
            failure_stage: None,
        }
    }

    fn not_hurwitz(kind: CertKind, pivots: Vec<Scalar>) -> Self {
        let stage = pivots.len();
        Certificate {
            kind,
            pivots,
            verdict: Verdict::NotHurwitz,
            failure_stage: Some(stage),
        }
    }
}

/// Certification outcome. `oracle_agreement` is populated only by
/// [`certify_with_oracles`], and every recorded oracle verdict then equals
/// `hurwitz`; a disagreement surfaces as an error instead.
#[derive(Clone, Debug)]
pub struct StabilityVerdict {
    pub hurwitz: bool,
    pub certificate: Certificate,
    pub oracle_agreement: Option<BTreeMap<String, bool>>,
}

fn run_chain(a: &Matrix, kind: CertKind, tol: &Tolerance) -> Result<StabilityVerdict> {
    let n = a.dim();
    let mut pivots = Vec::with_capacity(n);
    let mut current = a.clone();
    for stage in 1..=n {
        let m = current.dim();
        let pivot = current.get(m - 1, m - 1);
        match pivot.sign_class(tol) {
            SignClass::Negative => pivots.push(pivot),
            SignClass::Zero => {
                // An exact zero diagonal entry decides the verdict; a float
                // value inside the eps band does not.
                if a.mode() == Mode::Float {
                    return Err(Error::TolDisagreement { stage });
                }
                pivots.push(pivot);
                return Ok(StabilityVerdict {
                    hurwitz: false,
                    certificate: Certificate::not_hurwitz(kind, pivots),
                    oracle_agreement: None,
                });
            }
            SignClass::Positive => {
                pivots.push(pivot);
                return Ok(StabilityVerdict {
                    hurwitz: false,
                    certificate: Certificate::not_hurwitz(kind, pivots),
                    oracle_agreement: None,
                });
            }
        }
        if m > 1 {
            current = current.reduce_once(tol, stage)?;
        }
    }
    Ok(StabilityVerdict {
        hurwitz: true,
        certificate: Certificate::hurwitz(kind, pivots),
        oracle_agreement: None,
    })
}

/// Decides Hurwitz stability of a symmetric matrix (equivalently, negative
/// definiteness) via the recursive pivot chain.
pub fn certify_symmetric(a: &Matrix, tol: &Tolerance) -> Result<StabilityVerdict> {
    tol.check_mode(a.mode())?;
    if !a.is_symmetric(tol) {
        return Err(Error::NotSymmetric);
    }
    run_chain(a, CertKind::Symmetric, tol)
}

/// Decides Hurwitz stability of a Metzler matrix via the recursive pivot
/// chain. Metzler structure is preserved by every reduction stage, so the
/// same recursion applies.
pub fn certify_metzler(a: &Matrix, tol: &Tolerance) -> Result<StabilityVerdict> {
    tol.check_mode(a.mode())?;
    if !a.is_metzler(tol, false) {
        return Err(Error::NotMetzler);
    }
    run_chain(a, CertKind::Metzler, tol)
}

/// Sylvester test for negative definiteness: (-1)^k Delta_k > 0 for every
/// leading principal minor Delta_k. Only meaningful for symmetric input.
pub fn oracle_sylvester(a: &Matrix, tol: &Tolerance) -> bool {
    let mut flip = false;
    a.leading_minors().into_iter().all(|minor| {
        flip = !flip;
        let signed = if flip { minor.neg() } else { minor };
        signed.sign_class(tol) == SignClass::Positive
    })
}

/// Routh-Hurwitz criterion on the characteristic polynomial. Applies to any
/// real square matrix. A first-column entry inside the eps band is reported
/// as `Inconclusive` rather than classified.
pub fn oracle_routh_hurwitz(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    use crate::kernel;
    use crate::matrix::MatrixData;
    use num_rational::BigRational;
    use num_traits::Zero;
    match a.data() {
        MatrixData::Exact(v) => {
            let coeffs = kernel::char_poly(v, a.dim());
            kernel::routh_hurwitz(&coeffs, &BigRational::zero())
        }
        MatrixData::Float(v) => {
            let coeffs = kernel::char_poly(v, a.dim());
            kernel::routh_hurwitz(&coeffs, &tol.eps())
        }
    }
}

/// M-matrix test: a Metzler matrix is Hurwitz iff every leading principal
/// minor of its negation is strictly positive.
pub fn oracle_mmatrix(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    if !a.is_metzler(tol, false) {
        return Err(Error::NotMetzler);
    }
    Ok(a.negate()
        .leading_minors()
        .into_iter()
        .all(|minor| minor.sign_class(tol) == SignClass::Positive))
}

/// Runs the recursive certifier together with every oracle applicable to
/// `kind` and records their verdicts. Any disagreement between the chain and
/// an oracle is an error carrying the full evidence, never a verdict.
pub fn certify_with_oracles(a: &Matrix, kind: CertKind, tol: &Tolerance) -> Result<StabilityVerdict> {
    let mut verdict = match kind {
        CertKind::Symmetric => certify_symmetric(a, tol)?,
        CertKind::Metzler => certify_metzler(a, tol)?,
    };
    let mut oracles = BTreeMap::new();
    match kind {
        CertKind::Symmetric => {
            oracles.insert("sylvester".to_string(), oracle_sylvester(a, tol));
            oracles.insert("routh".to_string(), oracle_routh_hurwitz(a, tol)?);
        }
        CertKind::Metzler => {
            oracles.insert("mmatrix".to_string(), oracle_mmatrix(a, tol)?);
            oracles.insert("routh".to_string(), oracle_routh_hurwitz(a, tol)?);
        }
    }
    if oracles.values().any(|&v| v != verdict.hurwitz) {
        return Err(Error::OracleDisagreement(Box::new(Disagreement {
            certificate: verdict.certificate,
            oracles,
        })));
    }
    verdict.oracle_agreement = Some(oracles);
    Ok(verdict)
}
