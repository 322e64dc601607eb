//! Mode-generic dense kernels.
//!
//! Every routine here is generic over the entry type so the exact and float
//! paths share one implementation. `eps` is the tolerance band around zero
//! (exactly zero in exact mode). Matrices are row-major slices of length n*n.

use num_traits::{FromPrimitive, Signed};

use crate::error::{Error, Result};

pub(crate) trait Field: Clone + PartialOrd + Signed + FromPrimitive {}
impl<T: Clone + PartialOrd + Signed + FromPrimitive> Field for T {}

#[inline]
pub(crate) fn at<T>(data: &[T], n: usize, i: usize, j: usize) -> &T {
    &data[i * n + j]
}

/// Schur complement of the trailing 1x1 block:
/// `out[i][j] = a[i][j] - a[i][n-1] * a[n-1][j] / d` with `d = a[n-1][n-1]`.
///
/// `stage` is only used to label the error.
pub(crate) fn schur_complement<T: Field>(
    data: &[T],
    n: usize,
    eps: &T,
    stage: usize,
) -> Result<Vec<T>> {
    debug_assert!(n >= 2);
    let d = at(data, n, n - 1, n - 1).clone();
    if d.abs() <= *eps {
        return Err(Error::SingularPivot { stage });
    }
    let m = n - 1;
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        let bi = at(data, n, i, n - 1).clone();
        for j in 0..m {
            let cj = at(data, n, n - 1, j).clone();
            let v = at(data, n, i, j).clone() - bi.clone() * cj / d.clone();
            out.push(v);
        }
    }
    Ok(out)
}

/// Gaussian elimination with partial pivoting (row swap by largest |pivot|).
pub(crate) fn solve<T: Field>(a: &[T], n: usize, rhs: &[T], eps: &T) -> Result<Vec<T>> {
    debug_assert_eq!(rhs.len(), n);
    let mut w = a.to_vec();
    let mut x = rhs.to_vec();
    for col in 0..n {
        let mut best = col;
        for r in col + 1..n {
            if at(&w, n, r, col).abs() > at(&w, n, best, col).abs() {
                best = r;
            }
        }
        if at(&w, n, best, col).abs() <= *eps {
            return Err(Error::SingularMatrix { pivot_col: col });
        }
        if best != col {
            for j in 0..n {
                w.swap(col * n + j, best * n + j);
            }
            x.swap(col, best);
        }
        let pivot = at(&w, n, col, col).clone();
        for r in col + 1..n {
            let factor = at(&w, n, r, col).clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = at(&w, n, r, j).clone() - factor.clone() * at(&w, n, col, j).clone();
                w[r * n + j] = v;
            }
            x[r] = x[r].clone() - factor * x[col].clone();
        }
    }
    // Back substitution.
    for col in (0..n).rev() {
        let mut acc = x[col].clone();
        for j in col + 1..n {
            acc = acc - at(&w, n, col, j).clone() * x[j].clone();
        }
        x[col] = acc / at(&w, n, col, col).clone();
    }
    Ok(x)
}

/// Determinant by elimination with partial pivoting. A column with no usable
/// pivot yields an exact zero.
pub(crate) fn determinant<T: Field>(a: &[T], n: usize) -> T {
    let mut w = a.to_vec();
    let mut negate = false;
    for col in 0..n {
        let mut best = col;
        for r in col + 1..n {
            if at(&w, n, r, col).abs() > at(&w, n, best, col).abs() {
                best = r;
            }
        }
        if at(&w, n, best, col).is_zero() {
            return T::zero();
        }
        if best != col {
            for j in 0..n {
                w.swap(col * n + j, best * n + j);
            }
            negate = !negate;
        }
        let pivot = at(&w, n, col, col).clone();
        for r in col + 1..n {
            let factor = at(&w, n, r, col).clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = at(&w, n, r, j).clone() - factor.clone() * at(&w, n, col, j).clone();
                w[r * n + j] = v;
            }
        }
    }
    let mut det = T::one();
    for i in 0..n {
        det = det * at(&w, n, i, i).clone();
    }
    if negate {
        -det
    } else {
        det
    }
}

/// Leading principal minors, sizes 1..=n.
pub(crate) fn leading_minors<T: Field>(a: &[T], n: usize) -> Vec<T> {
    (1..=n)
        .map(|k| {
            let mut sub = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    sub.push(at(a, n, i, j).clone());
                }
            }
            determinant(&sub, k)
        })
        .collect()
}

/// Monic characteristic polynomial coefficients, highest degree first,
/// by the Faddeev-LeVerrier trace recursion.
pub(crate) fn char_poly<T: Field>(a: &[T], n: usize) -> Vec<T> {
    let mut coeffs = vec![T::one()];
    let mut m = vec![T::zero(); n * n];
    for k in 1..=n {
        // m <- a * (m + c_{k-1} I)
        let mut t = m.clone();
        for i in 0..n {
            t[i * n + i] = t[i * n + i].clone() + coeffs[k - 1].clone();
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for l in 0..n {
                    acc = acc + at(a, n, i, l).clone() * at(&t, n, l, j).clone();
                }
                m[i * n + j] = acc;
            }
        }
        let mut trace = T::zero();
        for i in 0..n {
            trace = trace + m[i * n + i].clone();
        }
        coeffs.push(-trace / T::from_usize(k).expect("small integer"));
    }
    coeffs
}

/// Routh array first column for a monic polynomial (coefficients highest
/// degree first). Returns `Ok(true)` iff every first-column entry is strictly
/// positive. A first-column entry inside the eps band makes the construction
/// marginal and yields `Error::Inconclusive`.
pub(crate) fn routh_hurwitz<T: Field>(coeffs: &[T], eps: &T) -> Result<bool> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(true);
    }
    // Positive-coefficient necessary condition; a coefficient at or below the
    // eps band already decides (or refuses to decide) without the table.
    for c in &coeffs[1..] {
        if *c < -eps.clone() {
            return Ok(false);
        }
        if c.abs() <= *eps {
            return if eps.is_zero() {
                Ok(false)
            } else {
                Err(Error::Inconclusive {
                    detail: "characteristic polynomial coefficient within eps of zero".into(),
                })
            };
        }
    }
    let width = n / 2 + 1;
    let mut row0: Vec<T> = coeffs.iter().step_by(2).cloned().collect();
    let mut row1: Vec<T> = coeffs.iter().skip(1).step_by(2).cloned().collect();
    row0.resize(width, T::zero());
    row1.resize(width, T::zero());
    let mut rows = vec![row0, row1];
    for i in 2..=n {
        let pivot = rows[i - 1][0].clone();
        if pivot.abs() <= *eps {
            return Err(Error::Inconclusive {
                detail: format!("zero in Routh array first column at row {i}"),
            });
        }
        let mut row = Vec::with_capacity(width);
        for j in 0..width - 1 {
            let v = (pivot.clone() * rows[i - 2][j + 1].clone()
                - rows[i - 2][0].clone() * rows[i - 1][j + 1].clone())
                / pivot.clone();
            row.push(v);
        }
        row.push(T::zero());
        rows.push(row);
    }
    for row in &rows {
        if row[0].abs() <= *eps {
            return Err(Error::Inconclusive {
                detail: "zero in Routh array first column".into(),
            });
        }
        if row[0] < T::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
