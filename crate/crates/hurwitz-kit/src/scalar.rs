//! Dual-mode scalars: exact rationals or 64-bit floats.
//!
//! Every matrix entry in the toolkit is a [`Scalar`]. The two modes never mix
//! silently; conversion from exact to float is explicit via [`Scalar::to_f64`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arithmetic mode of a scalar or matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Arbitrary-precision rationals, always reduced, positive denominator.
    Exact,
    /// IEEE 754 double precision with an explicit tolerance.
    Float,
}

/// Sign of a value relative to a tolerance band around zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignClass {
    /// Strictly below -eps.
    Negative,
    /// Within [-eps, eps] (exactly zero in exact mode).
    Zero,
    /// Strictly above eps.
    Positive,
}

/// A real number in one of the two modes.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    /// Reduced rational with positive denominator (maintained by `Ratio::new`).
    Exact(BigRational),
    /// Finite 64-bit float.
    Float(f64),
}

impl Scalar {
    /// Exact zero in the given mode.
    pub fn zero(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    /// Exact integer scalar.
    pub fn from_int(v: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact rational p/q. Errors on q = 0.
    pub fn from_ratio(p: i64, q: i64) -> Result<Scalar> {
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Exact(BigRational::new(BigInt::from(p), BigInt::from(q))))
    }

    /// Finite float scalar. Errors on NaN or infinity.
    pub fn from_f64(v: f64) -> Result<Scalar> {
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Scalar::Float(v))
    }

    /// Parses the canonical fraction syntax `p` or `p/q`.
    pub fn from_rational_str(s: &str) -> Result<Scalar> {
        let parse_int = |t: &str| {
            BigInt::from_str(t.trim()).map_err(|_| Error::Parse {
                detail: format!("invalid integer {t:?}"),
            })
        };
        match s.split_once('/') {
            None => Ok(Scalar::Exact(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let denom = parse_int(q)?;
                if denom.is_zero() {
                    return Err(Error::Parse {
                        detail: format!("zero denominator in {s:?}"),
                    });
                }
                Ok(Scalar::Exact(BigRational::new(parse_int(p)?, denom)))
            }
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    /// Float approximation (exact for `Float`, rounded for `Exact`).
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(v) => *v,
        }
    }

    /// Canonical fraction string for exact scalars, `None` for floats.
    pub fn rational_string(&self) -> Option<String> {
        match self {
            Scalar::Exact(r) => Some(rational_string(r)),
            Scalar::Float(_) => None,
        }
    }

    /// The rational payload of an exact scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Sign relative to the tolerance band (exact: relative to zero).
    pub fn sign_class(&self, tol: &Tolerance) -> SignClass {
        match self {
            Scalar::Exact(r) => {
                if r.is_negative() {
                    SignClass::Negative
                } else if r.is_positive() {
                    SignClass::Positive
                } else {
                    SignClass::Zero
                }
            }
            Scalar::Float(v) => {
                let eps = tol.eps();
                if *v < -eps {
                    SignClass::Negative
                } else if *v > eps {
                    SignClass::Positive
                } else {
                    SignClass::Zero
                }
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r.clone()),
            Scalar::Float(v) => Scalar::Float(-v),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(v) => Scalar::Float(v.abs()),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Exact(a / b))
                }
            }
            (Scalar::Float(a), Scalar::Float(b)) => {
                if *b == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Float(a / b))
                }
            }
            _ => Err(Error::ModeMismatch),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", rational_string(r)),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Canonical rendering: `p` when the denominator is one, otherwise `p/q`.
pub(crate) fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    // Convert through enough precision that desk-scale fractions round once.
    let numer = big_to_f64(r.numer());
    let denom = big_to_f64(r.denom());
    if numer.is_finite() && denom.is_finite() && denom != 0.0 {
        return numer / denom;
    }
    // Fall back to scaling both sides down for huge components.
    let bits = r.numer().bits().max(r.denom().bits()) as i64;
    let shift = (bits - 900).max(0) as u64;
    let sn = big_to_f64(&(r.numer() >> shift));
    let sd = big_to_f64(&(r.denom() >> shift));
    sn / sd
}

fn big_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Tolerance for float-mode sign and equality tests.
///
/// Exact-mode operations carry a zero tolerance; float-mode operations require
/// a strictly positive eps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

/// Default float-mode tolerance.
pub const DEFAULT_EPS: f64 = 1e-9;

impl Tolerance {
    /// Zero tolerance for exact arithmetic.
    pub fn exact() -> Tolerance {
        Tolerance { eps: 0.0 }
    }

    /// Float-mode tolerance; eps must be finite and strictly positive.
    pub fn float(eps: f64) -> Result<Tolerance> {
        if !eps.is_finite() || eps <= 0.0 {
            return Err(Error::InvalidParameter {
                detail: format!("float tolerance must be positive, got {eps}"),
            });
        }
        Ok(Tolerance { eps })
    }

    /// The default float tolerance (1e-9).
    pub fn default_float() -> Tolerance {
        Tolerance { eps: DEFAULT_EPS }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Matching tolerance for the given mode.
    pub fn for_mode(mode: Mode) -> Tolerance {
        match mode {
            Mode::Exact => Tolerance::exact(),
            Mode::Float => Tolerance::default_float(),
        }
    }

    /// Enforces eps = 0 exactly when the mode is exact.
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        let ok = match mode {
            Mode::Exact => self.eps == 0.0,
            Mode::Float => self.eps > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ModeMismatch)
        }
    }
}
