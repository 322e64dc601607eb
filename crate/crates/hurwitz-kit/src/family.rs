//! Families of stable matrices: the Metzler lift with its sign conditions,
//! and robustness families sampled from a Frobenius ball of symmetric
//! matrices and lifted fiberwise.
//!
//! The Metzler lift extends a Hurwitz Metzler base B to one dimension higher:
//! last column head h >= 0, last row head k >= 0, strictly negative corner c,
//! and leading block b_ij + h_i k_j / c. When additionally every off-diagonal
//! entry of that block stays nonnegative, the result is again Metzler and its
//! Schur reduction is B, so it is Hurwitz.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::certify::{certify_metzler, certify_symmetric};
use crate::chart::{phi_inverse, ChartPoint};
use crate::error::{Error, Result, Violation};
use crate::matrix::{Matrix, MAX_DIM};
use crate::scalar::{Mode, Scalar, SignClass, Tolerance};

/// Corner parametrization of a lift fiber: either the chart coordinate k_n
/// (corner value -e^{k_n}, float only) or a direct strictly negative scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum Corner {
    Chart { k_n: f64 },
    Direct { d: Scalar },
}

impl Corner {
    /// The corner entry itself. Always strictly negative for `Chart`;
    /// `Direct` is validated by `MetzlerLiftParams::new`.
    pub fn value(&self) -> Result<Scalar> {
        match self {
            Corner::Chart { k_n } => Scalar::from_f64(-k_n.exp()),
            Corner::Direct { d } => Ok(d.clone()),
        }
    }

    fn mode(&self) -> Mode {
        match self {
            Corner::Chart { .. } => Mode::Float,
            Corner::Direct { d } => d.mode(),
        }
    }
}

/// Parameters of one Metzler lift: h (last column head), k (last row head),
/// and the corner. Sign conditions are checked by
/// [`check_metzler_lift_conditions`], not at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct MetzlerLiftParams {
    h: Vec<Scalar>,
    k: Vec<Scalar>,
    corner: Corner,
}

impl MetzlerLiftParams {
    pub fn new(h: Vec<Scalar>, k: Vec<Scalar>, corner: Corner) -> Result<Self> {
        if h.len() != k.len() {
            return Err(Error::DimensionMismatch {
                expected: h.len(),
                got: k.len(),
            });
        }
        let mode = corner.mode();
        if h.iter().chain(k.iter()).any(|s| s.mode() != mode) {
            return Err(Error::ModeMismatch);
        }
        if let Corner::Chart { k_n } = corner {
            if !k_n.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(MetzlerLiftParams { h, k, corner })
    }

    pub fn h(&self) -> &[Scalar] {
        &self.h
    }

    pub fn k(&self) -> &[Scalar] {
        &self.k
    }

    pub fn corner(&self) -> &Corner {
        &self.corner
    }
}

/// Evaluates the lift sign conditions against a base matrix: h >= 0, k >= 0,
/// corner < 0, and every off-diagonal entry of the lifted leading block
/// nonnegative. Returns the (possibly empty) violation list; an empty list
/// means the lift is admissible. Indices in violations are 1-based.
pub fn check_metzler_lift_conditions(
    b: &Matrix,
    p: &MetzlerLiftParams,
    tol: &Tolerance,
) -> Result<Vec<Violation>> {
    let m = b.dim();
    if p.h.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: p.h.len(),
        });
    }
    let corner = p.corner.value()?;
    if corner.mode() != b.mode() {
        return Err(Error::ModeMismatch);
    }
    let mut violations = Vec::new();
    for (i, hi) in p.h.iter().enumerate() {
        if hi.sign_class(tol) == SignClass::Negative {
            violations.push(Violation::NegativeH(i + 1));
        }
    }
    for (j, kj) in p.k.iter().enumerate() {
        if kj.sign_class(tol) == SignClass::Negative {
            violations.push(Violation::NegativeK(j + 1));
        }
    }
    let corner_ok = corner.sign_class(tol) == SignClass::Negative;
    if !corner_ok {
        violations.push(Violation::NonNegativeCorner);
        // The off-diagonal conditions divide by the corner; without a valid
        // corner they are not well defined, so stop here.
        return Ok(violations);
    }
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let entry = b
                .get(i, j)
                .checked_add(&p.h[i].checked_mul(&p.k[j])?.checked_div(&corner)?)?;
            if entry.sign_class(tol) == SignClass::Negative {
                violations.push(Violation::OffDiagonal {
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    Ok(violations)
}

/// Lifts a certified Hurwitz Metzler base one dimension up. Fails with the
/// full violation list if the sign conditions do not hold. The Schur
/// reduction of the output reproduces the base exactly in exact mode.
pub fn lift_metzler(b: &Matrix, p: &MetzlerLiftParams, tol: &Tolerance) -> Result<Matrix> {
    tol.check_mode(b.mode())?;
    if b.dim() + 1 > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n: b.dim() + 1 });
    }
    let verdict = certify_metzler(b, tol)?;
    if !verdict.hurwitz {
        return Err(Error::BaseNotHurwitz);
    }
    let violations = check_metzler_lift_conditions(b, p, tol)?;
    if !violations.is_empty() {
        return Err(Error::ConditionViolated { violations });
    }
    let corner = p.corner.value()?;
    let m = b.dim();
    let mut rows = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = Vec::with_capacity(m + 1);
        for j in 0..m {
            let coupling = p.h[i].checked_mul(&p.k[j])?.checked_div(&corner)?;
            row.push(b.get(i, j).checked_add(&coupling)?);
        }
        row.push(p.h[i].clone());
        rows.push(row);
    }
    let mut last = p.k.clone();
    last.push(corner);
    rows.push(last);
    Matrix::from_rows(rows)
}

/// Frobenius-ball sampling plan for a family of symmetric matrices around a
/// symmetric center.
#[derive(Clone, Debug, PartialEq)]
pub struct BallFamilySpec {
    center: Matrix,
    radius: f64,
    count: usize,
    seed: u64,
}

impl BallFamilySpec {
    pub fn new(center: Matrix, radius: f64, count: usize, seed: u64) -> Result<Self> {
        if center.mode() != Mode::Float {
            return Err(Error::ModeMismatch);
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter {
                detail: "radius must be strictly positive and finite".into(),
            });
        }
        if count == 0 {
            return Err(Error::InvalidParameter {
                detail: "count must be at least 1".into(),
            });
        }
        Ok(BallFamilySpec {
            center,
            radius,
            count,
            seed,
        })
    }

    pub fn center(&self) -> &Matrix {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Why a draw was rejected, tallied per family run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RejectionHistogram {
    pub not_metzler: usize,
    pub not_hurwitz: usize,
    pub condition_violated: usize,
    pub not_symmetric: usize,
}

impl RejectionHistogram {
    pub fn total(&self) -> usize {
        self.not_metzler + self.not_hurwitz + self.condition_violated + self.not_symmetric
    }
}

/// Outcome of a family sampling run. At most ten accepted (lifted) matrices
/// are retained as witnesses.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub total: usize,
    pub accepted: usize,
    pub rejected_reasons: RejectionHistogram,
    pub witnesses: Vec<Matrix>,
}

pub const MAX_WITNESSES: usize = 10;

/// Draws `count` symmetric matrices uniformly from the Frobenius ball around
/// the center, keeps those certified Hurwitz, and lifts each survivor with
/// fiber coordinates uniform in `lift_k_bounds`. Every lifted matrix is
/// certified again before acceptance. Draw i uses stream i of the seeded
/// generator, so the run is reproducible and order-independent.
pub fn sample_ball_family(
    spec: &BallFamilySpec,
    lift_k_bounds: (f64, f64),
    tol: &Tolerance,
) -> Result<FamilyReport> {
    tol.check_mode(Mode::Float)?;
    if !spec.center.is_symmetric(tol) {
        return Err(Error::NotSymmetric);
    }
    let (lo, hi) = lift_k_bounds;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter {
            detail: "lift coordinate bounds must be finite with lower < upper".into(),
        });
    }
    let m = spec.center.dim();
    if m + 1 > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n: m + 1 });
    }
    // Degrees of freedom of a symmetric m x m matrix; governs the radial law
    // that makes the draw uniform in the ball.
    let dof = m * (m + 1) / 2;
    let mut report = FamilyReport {
        total: spec.count,
        accepted: 0,
        rejected_reasons: RejectionHistogram::default(),
        witnesses: Vec::new(),
    };
    for draw in 0..spec.count {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(draw as u64);
        let candidate = ball_draw(&spec.center, spec.radius, dof, &mut rng)?;
        match certify_symmetric(&candidate, tol) {
            Ok(v) if v.hurwitz => {}
            Ok(_) | Err(Error::TolDisagreement { .. }) => {
                report.rejected_reasons.not_hurwitz += 1;
                continue;
            }
            Err(e) => return Err(e),
        }
        let k: Vec<f64> = (0..=m).map(|_| rng.random_range(lo..hi)).collect();
        let point = ChartPoint::new(candidate, k, tol)?;
        let lifted = phi_inverse(&point, tol)?;
        match certify_symmetric(&lifted, tol) {
            Ok(v) if v.hurwitz => {
                report.accepted += 1;
                if report.witnesses.len() < MAX_WITNESSES {
                    report.witnesses.push(lifted);
                }
            }
            Ok(_) | Err(Error::TolDisagreement { .. }) => {
                report.rejected_reasons.not_hurwitz += 1;
            }
            Err(e) => return Err(e),
        }
    }
    if report.accepted == 0 {
        return Err(Error::EmptyFamily);
    }
    Ok(report)
}

/// One uniform draw from the Frobenius ball: Gaussian direction on the
/// symmetric subspace (upper triangle sampled, then mirrored), radius scaled
/// by U^{1/dof}.
fn ball_draw(center: &Matrix, radius: f64, dof: usize, rng: &mut ChaCha8Rng) -> Result<Matrix> {
    let m = center.dim();
    let mut sym = vec![0.0f64; m * m];
    for i in 0..m {
        for j in i..m {
            let g: f64 = rng.sample(StandardNormal);
            sym[i * m + j] = g;
            sym[j * m + i] = g;
        }
    }
    let norm = sym.iter().map(|x| x * x).sum::<f64>().sqrt();
    let u: f64 = rng.random_range(0.0..1.0);
    let scale = if norm > 0.0 {
        radius * u.powf(1.0 / dof as f64) / norm
    } else {
        0.0
    };
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| center.get(i, j).to_f64() + scale * sym[i * m + j])
                .collect()
        })
        .collect();
    let row_refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    Matrix::from_f64_rows(&row_refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coupling_lift_is_block_diagonal() {
        let b = Matrix::exact_from_strs(&[&["-1"]]).unwrap();
        let p = MetzlerLiftParams::new(
            vec![Scalar::from_int(0)],
            vec![Scalar::from_int(0)],
            Corner::Direct {
                d: Scalar::from_int(-1),
            },
        )
        .unwrap();
        let a = lift_metzler(&b, &p, &Tolerance::exact()).unwrap();
        assert_eq!(
            a,
            Matrix::exact_from_strs(&[&["-1", "0"], &["0", "-1"]]).unwrap()
        );
    }

    #[test]
    fn all_zero_parameters_pass_conditions() {
        let b = Matrix::exact_from_strs(&[&["-2", "1"], &["1", "-2"]]).unwrap();
        let p = MetzlerLiftParams::new(
            vec![Scalar::from_int(0); 2],
            vec![Scalar::from_int(0); 2],
            Corner::Direct {
                d: Scalar::from_int(-3),
            },
        )
        .unwrap();
        let v = check_metzler_lift_conditions(&b, &p, &Tolerance::exact()).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn violations_are_enumerated_with_indices() {
        let b = Matrix::exact_from_strs(&[&["-2", "1"], &["1", "-2"]]).unwrap();
        let p = MetzlerLiftParams::new(
            vec![Scalar::from_int(-1), Scalar::from_int(5)],
            vec![Scalar::from_int(0), Scalar::from_int(1)],
            Corner::Direct {
                d: Scalar::from_int(-1),
            },
        )
        .unwrap();
        let v = check_metzler_lift_conditions(&b, &p, &Tolerance::exact()).unwrap();
        // h_1 < 0, and entry (2,1)... the lifted (i=2, j=... ) check:
        // b_21 + h_2 k_1 / d = 1 + 0 = 1 ok; b_12 + h_1 k_2 / d = 1 + 1 = 2 ok.
        assert!(v.contains(&Violation::NegativeH(1)));
    }

    #[test]
    fn off_diagonal_violation_is_reported() {
        let b = Matrix::exact_from_strs(&[&["-2", "1"], &["1", "-2"]]).unwrap();
        // b_12 + h_1 k_2 / d = 1 - 10 < 0.
        let p = MetzlerLiftParams::new(
            vec![Scalar::from_int(10), Scalar::from_int(0)],
            vec![Scalar::from_int(0), Scalar::from_int(1)],
            Corner::Direct {
                d: Scalar::from_int(-1),
            },
        )
        .unwrap();
        let v = check_metzler_lift_conditions(&b, &p, &Tolerance::exact()).unwrap();
        assert_eq!(v, vec![Violation::OffDiagonal { row: 1, col: 2 }]);
        let lift = lift_metzler(&b, &p, &Tolerance::exact());
        assert!(matches!(lift, Err(Error::ConditionViolated { .. })));
    }

    #[test]
    fn lift_reduction_returns_base() {
        let b = Matrix::exact_from_strs(&[&["-2", "1"], &["1", "-2"]]).unwrap();
        let p = MetzlerLiftParams::new(
            vec![Scalar::from_ratio(1, 2).unwrap(), Scalar::from_int(1)],
            vec![Scalar::from_ratio(1, 3).unwrap(), Scalar::from_int(2)],
            Corner::Direct {
                d: Scalar::from_int(-2),
            },
        )
        .unwrap();
        let tol = Tolerance::exact();
        let a = lift_metzler(&b, &p, &tol).unwrap();
        let v = certify_metzler(&a, &tol).unwrap();
        assert!(v.hurwitz);
        let back = a.partition().unwrap().schur_reduce(&tol).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn ball_inside_stable_region_accepts_everything() {
        let center = Matrix::from_f64_rows(&[
            &[-5.0, 0.0, 0.0],
            &[0.0, -5.0, 0.0],
            &[0.0, 0.0, -5.0],
        ])
        .unwrap();
        let spec = BallFamilySpec::new(center, 0.1, 50, 7).unwrap();
        let report = sample_ball_family(&spec, (-1.0, 1.0), &Tolerance::default_float()).unwrap();
        assert_eq!(report.accepted, 50);
        assert_eq!(report.rejected_reasons.total(), 0);
        assert_eq!(report.witnesses.len(), MAX_WITNESSES);
        for w in &report.witnesses {
            assert_eq!(w.dim(), 4);
        }
    }

    #[test]
    fn origin_ball_rejects_some_draws() {
        let center = Matrix::zero(2, Mode::Float).unwrap();
        let spec = BallFamilySpec::new(center, 1.0, 100, 3).unwrap();
        let report = sample_ball_family(&spec, (-1.0, 1.0), &Tolerance::default_float()).unwrap();
        assert!(report.accepted < 100);
        assert_eq!(
            report.accepted + report.rejected_reasons.total(),
            report.total
        );
    }

    #[test]
    fn family_runs_are_reproducible() {
        let center = Matrix::from_f64_rows(&[&[-2.0, 0.5], &[0.5, -2.0]]).unwrap();
        let spec = BallFamilySpec::new(center, 0.5, 20, 11).unwrap();
        let tol = Tolerance::default_float();
        let a = sample_ball_family(&spec, (-2.0, 2.0), &tol).unwrap();
        let b = sample_ball_family(&spec, (-2.0, 2.0), &tol).unwrap();
        assert_eq!(a.accepted, b.accepted);
        assert_eq!(a.witnesses, b.witnesses);
    }
}
