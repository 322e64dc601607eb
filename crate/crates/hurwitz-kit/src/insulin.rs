//! The insulin compartment application: bundled matrices, the restricted
//! lift family around the reduced model, and an end-to-end demo pipeline.
//!
//! The 7x7 Metzler matrix couples the insulin compartments (brain, heart,
//! gut, liver, kidney, periphery, pancreas-side dynamics); its one-step
//! Schur reduction changes only the trailing diagonal entry. Both matrices
//! are bundled as exact fractions in versioned data files.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{certify_with_oracles, CertKind};
use crate::error::{Error, Result};
use crate::family::{lift_metzler, Corner, MetzlerLiftParams};
use crate::json::{matrix_from_json, matrix_to_json};
use crate::matrix::Matrix;
use crate::positive::{equilibrium, Equilibrium, PositiveLinearSystem};
use crate::scalar::{Mode, Scalar, Tolerance};

/// Canonical JSON bytes of the bundled 7x7 matrix.
pub fn a7_json() -> &'static str {
    include_str!("../data/insulin_a7.json")
}

/// Canonical JSON bytes of the bundled reduced 6x6 matrix.
pub fn b6_json() -> &'static str {
    include_str!("../data/insulin_b6.json")
}

/// The bundled 7x7 insulin matrix, exact mode.
pub fn a7() -> Matrix {
    matrix_from_json(a7_json()).expect("bundled data is valid")
}

/// The bundled 6x6 reduction of the insulin matrix, exact mode.
pub fn b6() -> Matrix {
    matrix_from_json(b6_json()).expect("bundled data is valid")
}

/// The lift parameters that reproduce the 7x7 matrix from its reduction:
/// h = (0,0,0,0,0,91/200), k = (0,0,0,0,0,1/20), corner -111/1000.
pub fn nominal_params() -> MetzlerLiftParams {
    let zero = Scalar::from_int(0);
    let mut h = vec![zero.clone(); 6];
    let mut k = vec![zero; 6];
    h[5] = Scalar::from_ratio(91, 200).expect("nonzero denominator");
    k[5] = Scalar::from_ratio(1, 20).expect("nonzero denominator");
    let d = Scalar::from_ratio(-111, 1000).expect("nonzero denominator");
    MetzlerLiftParams::new(h, k, Corner::Direct { d }).expect("consistent nominal parameters")
}

/// Default inoculation input: unit insulin inflow at compartment 2 (heart,
/// the circulation entry point). Illustrative, not physiological.
pub fn default_input(mode: Mode) -> Vec<Scalar> {
    let mut b = vec![Scalar::zero(mode); 7];
    b[1] = match mode {
        Mode::Exact => Scalar::from_int(1),
        Mode::Float => Scalar::Float(1.0),
    };
    b
}

/// Member of the restricted lift family around the reduced matrix: only
/// h_2, h_6, k_2, k_6 are free (all other head entries zero), plus the
/// corner. Admissibility reduces to the two coupling conditions
/// 709/500 - h_6 k_2 / |corner| >= 0 and 53/50 - h_2 k_6 / |corner| >= 0.
pub fn restricted_family(
    h2: &Scalar,
    h6: &Scalar,
    k2: &Scalar,
    k6: &Scalar,
    corner: &Corner,
    tol: &Tolerance,
) -> Result<Matrix> {
    let mode = match corner {
        Corner::Chart { .. } => Mode::Float,
        Corner::Direct { d } => d.mode(),
    };
    let zero = Scalar::zero(mode);
    let mut h = vec![zero.clone(); 6];
    let mut k = vec![zero; 6];
    h[1] = h2.clone();
    h[5] = h6.clone();
    k[1] = k2.clone();
    k[5] = k6.clone();
    let params = MetzlerLiftParams::new(h, k, corner.clone())?;
    let base = match mode {
        Mode::Exact => b6(),
        Mode::Float => b6().to_float(),
    };
    lift_metzler(&base, &params, tol)
}

/// Outcome of the demo's family stage: how many condition-passing draws were
/// requested, how many raw draws that took, and the certification tally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyOutcome {
    pub requested: usize,
    pub tried: usize,
    pub certified: usize,
    pub failures: usize,
}

/// Results of the four demo stages. A stage that errs internally reports
/// as failed with its payload absent.
#[derive(Clone, Debug)]
pub struct DemoReport {
    pub reduction_ok: bool,
    pub b6_corner: Option<Scalar>,
    pub nominal_ok: bool,
    pub family: Option<FamilyOutcome>,
    pub family_ok: bool,
    pub equilibrium: Option<Equilibrium>,
    pub equilibrium_ok: bool,
}

impl DemoReport {
    pub fn all_ok(&self) -> bool {
        self.first_failure_stage().is_none()
    }

    /// 1-based index of the first failed stage, if any.
    pub fn first_failure_stage(&self) -> Option<usize> {
        if !self.reduction_ok {
            Some(1)
        } else if !self.nominal_ok {
            Some(2)
        } else if !self.family_ok {
            Some(3)
        } else if !self.equilibrium_ok {
            Some(4)
        } else {
            None
        }
    }
}

/// Runs the four-stage pipeline: (1) reduce the 7x7 matrix and compare with
/// the bundled reduction, (2) rebuild it via the nominal lift, (3) sample
/// `family_count` members of the restricted family and certify each,
/// (4) solve the equilibrium for the default input. `matrix` is normally the
/// bundled 7x7 matrix but can be overridden to exercise failure paths.
pub fn demo(matrix: &Matrix, family_count: usize, seed: u64) -> DemoReport {
    let bundled_b6 = b6();
    let tol = Tolerance::for_mode(matrix.mode());

    let (reduction_ok, b6_corner) = match matrix
        .partition()
        .and_then(|p| p.schur_reduce(&tol))
    {
        Ok(reduced) => {
            let expected = match matrix.mode() {
                Mode::Exact => bundled_b6.clone(),
                Mode::Float => bundled_b6.to_float(),
            };
            let m = reduced.dim();
            let corner = reduced.get(m - 1, m - 1);
            (reduced == expected, Some(corner))
        }
        Err(_) => (false, None),
    };

    let nominal_ok = match lift_metzler(&bundled_b6, &nominal_params(), &Tolerance::exact()) {
        Ok(rebuilt) => {
            matrix.mode() == Mode::Exact
                && matrix_to_json(&rebuilt) == matrix_to_json(matrix)
        }
        Err(_) => false,
    };

    let (family, family_ok) = if family_count == 0 {
        (None, true)
    } else {
        match run_family_stage(family_count, seed) {
            Ok(outcome) => {
                let ok = outcome.certified == outcome.requested && outcome.failures == 0;
                (Some(outcome), ok)
            }
            Err(_) => (None, false),
        }
    };

    let (eq, equilibrium_ok) = match PositiveLinearSystem::new(
        matrix.clone(),
        default_input(matrix.mode()),
        &tol,
    )
    .and_then(|sys| equilibrium(&sys, &tol))
    {
        Ok(eq) => (Some(eq), true),
        Err(_) => (None, false),
    };

    DemoReport {
        reduction_ok,
        b6_corner,
        nominal_ok,
        family,
        family_ok,
        equilibrium: eq,
        equilibrium_ok,
    }
}

/// Draws restricted-family parameters until `count` of them satisfy the
/// coupling conditions, then certifies every resulting member with all
/// applicable oracles.
fn run_family_stage(count: usize, seed: u64) -> Result<FamilyOutcome> {
    let tol = Tolerance::default_float();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tried = 0usize;
    let mut certified = 0usize;
    let mut failures = 0usize;
    let mut accepted = 0usize;
    let cap = 10_000 + 200 * count;
    while accepted < count {
        if tried >= cap {
            return Err(Error::Internal {
                detail: "restricted family rejection sampling exceeded its cap".into(),
            });
        }
        tried += 1;
        let h2 = Scalar::from_f64(rng.random_range(0.0..1.5))?;
        let h6 = Scalar::from_f64(rng.random_range(0.0..1.5))?;
        let k2 = Scalar::from_f64(rng.random_range(0.0..1.5))?;
        let k6 = Scalar::from_f64(rng.random_range(0.0..1.5))?;
        let k7 = rng.random_range(-2.5..0.5);
        let member = match restricted_family(&h2, &h6, &k2, &k6, &Corner::Chart { k_n: k7 }, &tol) {
            Ok(m) => m,
            Err(Error::ConditionViolated { .. }) => continue,
            Err(e) => return Err(e),
        };
        accepted += 1;
        match certify_with_oracles(&member, CertKind::Metzler, &tol) {
            Ok(v) if v.hurwitz => certified += 1,
            _ => failures += 1,
        }
    }
    Ok(FamilyOutcome {
        requested: count,
        tried,
        certified,
        failures,
    })
}
