//! Coordinate maps on the space of Hurwitz symmetric matrices.
//!
//! An n x n Hurwitz symmetric matrix splits into its (n-1) x (n-1) Schur
//! reduction (again Hurwitz symmetric) and n free fiber coordinates: the
//! last-row head and the log of the negated corner. `phi` and `phi_inverse`
//! realize the two directions. The log coordinate forces float mode, so a
//! direct parametrization with an explicit negative corner is provided as
//! well; it works in both modes and is the basis of the constructive
//! Hurwitz-matrix sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::certify_symmetric;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, MAX_DIM};
use crate::scalar::{Mode, Scalar, SignClass, Tolerance};

/// Chart image of an n x n Hurwitz symmetric matrix: a certified
/// (n-1) x (n-1) Hurwitz symmetric base and n fiber coordinates
/// (last-row head entries, then the log coordinate ln(-a_nn)).
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    base: Matrix,
    k: Vec<f64>,
}

impl ChartPoint {
    /// Validates and builds a chart point: float-mode Hurwitz symmetric
    /// base, finite coordinates, one more coordinate than the base are wide.
    pub fn new(base: Matrix, k: Vec<f64>, tol: &Tolerance) -> Result<Self> {
        if base.mode() != Mode::Float {
            return Err(Error::ModeMismatch);
        }
        if base.dim() + 1 > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n: base.dim() + 1 });
        }
        if k.len() != base.dim() + 1 {
            return Err(Error::DimensionMismatch {
                expected: base.dim() + 1,
                got: k.len(),
            });
        }
        if k.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let verdict = certify_symmetric(&base, tol)?;
        if !verdict.hurwitz {
            return Err(Error::BaseNotHurwitz);
        }
        Ok(ChartPoint { base, k })
    }

    pub fn base(&self) -> &Matrix {
        &self.base
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }
}

/// Fiber parameters for the direct (log-free) symmetric lift: the shared
/// last row/column head and a strictly negative corner.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectLiftParams {
    k_row: Vec<Scalar>,
    d: Scalar,
}

impl DirectLiftParams {
    pub fn new(k_row: Vec<Scalar>, d: Scalar) -> Result<Self> {
        if k_row.iter().any(|s| s.mode() != d.mode()) {
            return Err(Error::ModeMismatch);
        }
        // The corner must be strictly negative; the eps band around zero is
        // judged with the tolerance implied by the mode.
        let tol = Tolerance::for_mode(d.mode());
        if d.sign_class(&tol) != SignClass::Negative {
            return Err(Error::NonNegativeCorner);
        }
        Ok(DirectLiftParams { k_row, d })
    }

    pub fn k_row(&self) -> &[Scalar] {
        &self.k_row
    }

    pub fn d(&self) -> &Scalar {
        &self.d
    }
}

/// Chart map: certifies the input, then returns its Schur reduction as the
/// base and (a_n1, ..., a_n,n-1, ln(-a_nn)) as the fiber coordinates.
/// Float mode only; the log coordinate has no exact counterpart.
pub fn phi(a: &Matrix, tol: &Tolerance) -> Result<ChartPoint> {
    tol.check_mode(a.mode())?;
    if a.mode() != Mode::Float {
        return Err(Error::ModeMismatch);
    }
    if a.dim() < 2 {
        return Err(Error::DimensionTooSmall { n: a.dim() });
    }
    let verdict = certify_symmetric(a, tol)?;
    if !verdict.hurwitz {
        return Err(Error::NotHurwitz);
    }
    let n = a.dim();
    let corner = a.get(n - 1, n - 1).to_f64();
    if corner >= 0.0 {
        return Err(Error::NonNegativeDiagonal);
    }
    let base = a.reduce_once(tol, 1)?;
    let mut k: Vec<f64> = (0..n - 1).map(|j| a.get(n - 1, j).to_f64()).collect();
    k.push((-corner).ln());
    Ok(ChartPoint { base, k })
}

/// Inverse chart map: rebuilds the unique Hurwitz symmetric matrix whose
/// reduction is `base` and whose fiber coordinates are `k`. The corner is
/// -e^{k_n} and the leading block is base_ij - k_i k_j / e^{k_n}, so the
/// Schur reduction of the result gives back `base`.
pub fn phi_inverse(p: &ChartPoint, tol: &Tolerance) -> Result<Matrix> {
    let verdict = certify_symmetric(&p.base, tol)?;
    if !verdict.hurwitz {
        return Err(Error::BaseNotHurwitz);
    }
    let m = p.base.dim();
    let n = m + 1;
    if n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n });
    }
    let scale = p.k[m].exp();
    let mut rows = Vec::with_capacity(n);
    for i in 0..m {
        let mut row = Vec::with_capacity(n);
        for j in 0..m {
            let v = p.base.get(i, j).to_f64() - p.k[i] * p.k[j] / scale;
            row.push(Scalar::from_f64(v)?);
        }
        row.push(Scalar::from_f64(p.k[i])?);
        rows.push(row);
    }
    let mut last: Vec<Scalar> = (0..m).map(|j| Scalar::from_f64(p.k[j])).collect::<Result<_>>()?;
    last.push(Scalar::from_f64(-scale)?);
    rows.push(last);
    Matrix::from_rows(rows)
}

/// Log-free version of the inverse map: the corner is given directly as a
/// strictly negative scalar, so the construction stays inside exact
/// arithmetic when the inputs are exact.
pub fn lift_symmetric_direct(
    base: &Matrix,
    p: &DirectLiftParams,
    tol: &Tolerance,
) -> Result<Matrix> {
    tol.check_mode(base.mode())?;
    let verdict = certify_symmetric(base, tol)?;
    if !verdict.hurwitz {
        return Err(Error::BaseNotHurwitz);
    }
    let m = base.dim();
    if m + 1 > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n: m + 1 });
    }
    if p.k_row.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: p.k_row.len(),
        });
    }
    let mut rows = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = Vec::with_capacity(m + 1);
        for j in 0..m {
            // base_ij + k_i k_j / d, and d < 0 makes this base_ij - k_i k_j / |d|.
            let coupling = p.k_row[i].checked_mul(&p.k_row[j])?.checked_div(&p.d)?;
            row.push(base.get(i, j).checked_add(&coupling)?);
        }
        row.push(p.k_row[i].clone());
        rows.push(row);
    }
    let mut last = p.k_row.clone();
    last.push(p.d.clone());
    rows.push(last);
    Matrix::from_rows(rows)
}

/// Constructive sampler: starts from a random negative 1x1 matrix and applies
/// n-1 random direct lifts, so the output is Hurwitz symmetric by
/// construction. Deterministic per seed. Float mode.
pub fn random_hurwitz_symmetric(n: usize, seed: u64, tol: &Tolerance) -> Result<Matrix> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n });
    }
    tol.check_mode(Mode::Float)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = Matrix::from_f64_rows(&[&[-rng.random_range(0.1..10.0)]])?;
    while current.dim() < n {
        let k_row = (0..current.dim())
            .map(|_| Scalar::from_f64(rng.random_range(-1.0..1.0)))
            .collect::<Result<Vec<_>>>()?;
        let d = Scalar::from_f64(rng.random_range(-10.0..-0.1))?;
        let params = DirectLiftParams::new(k_row, d)?;
        current = lift_symmetric_direct(&current, &params, tol)?;
    }
    Ok(current)
}
