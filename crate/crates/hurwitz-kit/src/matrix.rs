//! Dense square matrices over a single scalar mode.
//!
//! A `Matrix` is immutable after construction: dimension, mode, and entries
//! are fixed. All structural predicates and reductions live here; the
//! certification logic builds on top of them.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernel;
use crate::scalar::{rational_to_f64, Mode, Scalar, Tolerance};

/// Largest supported dimension. The reduction is dense and the exact path
/// carries arbitrary-precision rationals, so this is a desk-scale tool.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum MatrixData {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Square matrix, row-major, 1 <= n <= 64, all entries in one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: MatrixData,
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n });
    }
    Ok(())
}

impl Matrix {
    /// Builds a matrix from rows of scalars. All rows must have the same
    /// length as the row count and every entry must share one mode.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let mode = rows[0][0].mode();
        match mode {
            Mode::Exact => {
                let mut data = Vec::with_capacity(n * n);
                for row in rows {
                    for s in row {
                        match s {
                            Scalar::Exact(q) => data.push(q),
                            Scalar::Float(_) => return Err(Error::ModeMismatch),
                        }
                    }
                }
                Ok(Matrix {
                    n,
                    data: MatrixData::Exact(data),
                })
            }
            Mode::Float => {
                let mut data = Vec::with_capacity(n * n);
                for row in rows {
                    for s in row {
                        match s {
                            Scalar::Float(x) => data.push(x),
                            Scalar::Exact(_) => return Err(Error::ModeMismatch),
                        }
                    }
                }
                Ok(Matrix {
                    n,
                    data: MatrixData::Float(data),
                })
            }
        }
    }

    /// Exact matrix from rational literals such as `"-173/100"` or `"0"`.
    pub fn exact_from_strs(rows: &[&[&str]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| Scalar::from_rational_str(s)).collect())
            .collect::<Result<Vec<Vec<Scalar>>>>()?;
        Self::from_rows(parsed)
    }

    /// Float matrix from `f64` rows. Non-finite entries are rejected.
    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|x| Scalar::from_f64(*x)).collect())
            .collect::<Result<Vec<Vec<Scalar>>>>()?;
        Self::from_rows(parsed)
    }

    /// Zero matrix of the given dimension and mode.
    pub fn zero(n: usize, mode: Mode) -> Result<Self> {
        check_dim(n)?;
        let data = match mode {
            Mode::Exact => MatrixData::Exact(vec![BigRational::zero(); n * n]),
            Mode::Float => MatrixData::Float(vec![0.0; n * n]),
        };
        Ok(Matrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        match self.data {
            MatrixData::Exact(_) => Mode::Exact,
            MatrixData::Float(_) => Mode::Float,
        }
    }

    /// Entry at 0-based (i, j). Panics if out of range, like slice indexing.
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.n && j < self.n, "index out of range");
        match &self.data {
            MatrixData::Exact(v) => Scalar::Exact(v[i * self.n + j].clone()),
            MatrixData::Float(v) => Scalar::Float(v[i * self.n + j]),
        }
    }

    pub(crate) fn data(&self) -> &MatrixData {
        &self.data
    }

    pub(crate) fn from_exact_data(n: usize, data: Vec<BigRational>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Matrix {
            n,
            data: MatrixData::Exact(data),
        }
    }

    pub(crate) fn from_float_data(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Matrix {
            n,
            data: MatrixData::Float(data),
        }
    }

    /// Row-major float image of the matrix (exact entries rounded to f64).
    pub fn to_float(&self) -> Matrix {
        match &self.data {
            MatrixData::Float(_) => self.clone(),
            MatrixData::Exact(v) => Matrix {
                n: self.n,
                data: MatrixData::Float(v.iter().map(rational_to_f64).collect()),
            },
        }
    }

    /// Exact image of the matrix. Float entries convert to their dyadic
    /// rational value, which is lossless.
    pub fn to_exact(&self) -> Matrix {
        match &self.data {
            MatrixData::Exact(_) => self.clone(),
            MatrixData::Float(v) => Matrix {
                n: self.n,
                data: MatrixData::Exact(
                    v.iter()
                        .map(|x| BigRational::from_float(*x).expect("finite by construction"))
                        .collect(),
                ),
            },
        }
    }

    /// Entrywise negation.
    pub fn negate(&self) -> Matrix {
        match &self.data {
            MatrixData::Exact(v) => Matrix {
                n: self.n,
                data: MatrixData::Exact(v.iter().map(|q| -q).collect()),
            },
            MatrixData::Float(v) => Matrix {
                n: self.n,
                data: MatrixData::Float(v.iter().map(|x| -x).collect()),
            },
        }
    }

    /// True iff |a_ij - a_ji| <= eps for all i, j (exact equality in Exact
    /// mode; `tol` is ignored there).
    pub fn is_symmetric(&self, tol: &Tolerance) -> bool {
        let n = self.n;
        match &self.data {
            MatrixData::Exact(v) => (0..n)
                .all(|i| (0..i).all(|j| v[i * n + j] == v[j * n + i])),
            MatrixData::Float(v) => (0..n)
                .all(|i| (0..i).all(|j| (v[i * n + j] - v[j * n + i]).abs() <= tol.eps())),
        }
    }

    /// Metzler test on the off-diagonal entries. `strict = false` asks for
    /// a_ij >= -eps (i != j); `strict = true` asks for a_ij > eps.
    pub fn is_metzler(&self, tol: &Tolerance, strict: bool) -> bool {
        let n = self.n;
        match &self.data {
            MatrixData::Exact(v) => (0..n).all(|i| {
                (0..n).filter(|&j| j != i).all(|j| {
                    let x = &v[i * n + j];
                    if strict {
                        x > &BigRational::zero()
                    } else {
                        x >= &BigRational::zero()
                    }
                })
            }),
            MatrixData::Float(v) => (0..n).all(|i| {
                (0..n).filter(|&j| j != i).all(|j| {
                    let x = v[i * n + j];
                    if strict {
                        x > tol.eps()
                    } else {
                        x >= -tol.eps()
                    }
                })
            }),
        }
    }

    /// Splits off the last row and column. Requires n >= 2.
    pub fn partition(&self) -> Result<BlockPartition> {
        let n = self.n;
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        let m = n - 1;
        let mut sub_rows = Vec::with_capacity(m);
        let mut b_col = Vec::with_capacity(m);
        let mut c_row = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                row.push(self.get(i, j));
            }
            sub_rows.push(row);
            b_col.push(self.get(i, m));
            c_row.push(self.get(m, i));
        }
        let a_sub = Matrix::from_rows(sub_rows).expect("blocks of a valid matrix");
        Ok(BlockPartition {
            a_sub,
            b_col,
            c_row,
            d: self.get(m, m),
        })
    }

    /// One reduction step: partition, then Schur-complement the corner.
    /// `stage` labels the pivot in error reports (1-based).
    pub(crate) fn reduce_once(&self, tol: &Tolerance, stage: usize) -> Result<Matrix> {
        if self.n < 2 {
            return Err(Error::DimensionTooSmall { n: self.n });
        }
        match &self.data {
            MatrixData::Exact(v) => {
                let out = kernel::schur_complement(v, self.n, &BigRational::zero(), stage)?;
                Ok(Matrix::from_exact_data(self.n - 1, out))
            }
            MatrixData::Float(v) => {
                let out = kernel::schur_complement(v, self.n, &tol.eps(), stage)?;
                Ok(Matrix::from_float_data(self.n - 1, out))
            }
        }
    }

    /// Determinant by elimination with partial pivoting.
    pub fn determinant(&self) -> Scalar {
        match &self.data {
            MatrixData::Exact(v) => Scalar::Exact(kernel::determinant(v, self.n)),
            MatrixData::Float(v) => Scalar::Float(kernel::determinant(v, self.n)),
        }
    }

    /// Leading principal minors, sizes 1..=n.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        match &self.data {
            MatrixData::Exact(v) => kernel::leading_minors(v, self.n)
                .into_iter()
                .map(Scalar::Exact)
                .collect(),
            MatrixData::Float(v) => kernel::leading_minors(v, self.n)
                .into_iter()
                .map(Scalar::Float)
                .collect(),
        }
    }

    /// Monic characteristic polynomial coefficients, highest degree first,
    /// length n + 1, by the Faddeev-LeVerrier trace recursion.
    pub fn char_poly(&self) -> Vec<Scalar> {
        match &self.data {
            MatrixData::Exact(v) => kernel::char_poly(v, self.n)
                .into_iter()
                .map(Scalar::Exact)
                .collect(),
            MatrixData::Float(v) => kernel::char_poly(v, self.n)
                .into_iter()
                .map(Scalar::Float)
                .collect(),
        }
    }

    /// Solves A x = rhs by Gaussian elimination with partial pivoting.
    /// The right-hand side must match the matrix mode.
    pub fn solve_linear(&self, rhs: &[Scalar], tol: &Tolerance) -> Result<Vec<Scalar>> {
        if rhs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.len(),
            });
        }
        match &self.data {
            MatrixData::Exact(v) => {
                let r = rhs
                    .iter()
                    .map(|s| match s {
                        Scalar::Exact(q) => Ok(q.clone()),
                        Scalar::Float(_) => Err(Error::ModeMismatch),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let x = kernel::solve(v, self.n, &r, &BigRational::zero())?;
                Ok(x.into_iter().map(Scalar::Exact).collect())
            }
            MatrixData::Float(v) => {
                let r = rhs
                    .iter()
                    .map(|s| match s {
                        Scalar::Float(x) => Ok(*x),
                        Scalar::Exact(_) => Err(Error::ModeMismatch),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let x = kernel::solve(v, self.n, &r, &tol.eps())?;
                Ok(x.into_iter().map(Scalar::Float).collect())
            }
        }
    }
}

/// Blocks of a matrix split around its trailing diagonal entry:
/// the leading (n-1)x(n-1) block, the last column head, the last row head,
/// and the corner. Constructed through `Matrix::partition` or `new`, so the
/// blocks always agree in mode and dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    a_sub: Matrix,
    b_col: Vec<Scalar>,
    c_row: Vec<Scalar>,
    d: Scalar,
}

impl BlockPartition {
    pub fn new(a_sub: Matrix, b_col: Vec<Scalar>, c_row: Vec<Scalar>, d: Scalar) -> Result<Self> {
        let m = a_sub.dim();
        if a_sub.dim() + 1 > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n: m + 1 });
        }
        if b_col.len() != m || c_row.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: if b_col.len() != m {
                    b_col.len()
                } else {
                    c_row.len()
                },
            });
        }
        let mode = a_sub.mode();
        if b_col.iter().any(|s| s.mode() != mode)
            || c_row.iter().any(|s| s.mode() != mode)
            || d.mode() != mode
        {
            return Err(Error::ModeMismatch);
        }
        Ok(BlockPartition {
            a_sub,
            b_col,
            c_row,
            d,
        })
    }

    pub fn a_sub(&self) -> &Matrix {
        &self.a_sub
    }

    pub fn b_col(&self) -> &[Scalar] {
        &self.b_col
    }

    pub fn c_row(&self) -> &[Scalar] {
        &self.c_row
    }

    pub fn d(&self) -> &Scalar {
        &self.d
    }

    /// Rebuilds the source matrix entry-for-entry.
    pub fn reassemble(&self) -> Matrix {
        let m = self.a_sub.dim();
        let n = m + 1;
        let mut rows = Vec::with_capacity(n);
        for i in 0..m {
            let mut row = Vec::with_capacity(n);
            for j in 0..m {
                row.push(self.a_sub.get(i, j));
            }
            row.push(self.b_col[i].clone());
            rows.push(row);
        }
        let mut last = self.c_row.clone();
        last.push(self.d.clone());
        rows.push(last);
        Matrix::from_rows(rows).expect("partition blocks are consistent")
    }

    /// Schur complement of the corner: `a_sub - b_col c_row^T / d`.
    /// Preserves symmetry, and preserves the Metzler property when d < 0.
    pub fn schur_reduce(&self, tol: &Tolerance) -> Result<Matrix> {
        self.reassemble().reduce_once(tol, 1)
    }
}
