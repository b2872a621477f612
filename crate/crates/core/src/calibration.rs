//! Fixes the conventions operationally before any check runs: quaternion
//! side, the sign of `phi`, the sign of sectional curvature, and the index
//! pairing of the curvature expansion. Each choice is the candidate with the
//! smaller measured defect, and both defects are recorded.

use serde::{Deserialize, Serialize};

use crate::curvature::{
    holomorphic_sectional, horizontal_frame, ricci_of_r0, sectional, theorem_sec_check, CurvatureRoute, Pairing,
};
use crate::error::GeometryError;
use crate::field::{levi_civita, lie_bracket, VectorField};
use crate::numerics::{max_residual, AmbientVector, RngStream, Sampler};
use crate::sphere::{Alpha, QuaternionSide, SphereContext};

/// Points sampled per calibration decision.
pub const CALIBRATION_SAMPLES: u32 = 16;

/// Curvature values on the plane spanned by two Reeb fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerticalExtreme {
    pub k_bar_expansion: f64,
    pub k_bar_direct: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRecord {
    pub quaternion_side: QuaternionSide,
    pub bracket_defect_right: f64,
    pub bracket_defect_left: f64,
    pub sign_phi: f64,
    pub reeb_derivative_defect_plus: f64,
    pub reeb_derivative_defect_minus: f64,
    pub sectional_sign: f64,
    pub sectional_defect_plus: f64,
    pub sectional_defect_minus: f64,
    pub expansion_pairing: Pairing,
    pub expansion_defect_distinct: f64,
    pub expansion_defect_all: f64,
    pub holomorphic_constant: f64,
    pub r0_trace_coefficient: f64,
    /// `(4n+8)/(n-2)`, absent where it is undefined.
    pub printed_holomorphic_constant: Option<f64>,
    pub vertical_extreme: VerticalExtreme,
    /// Largest gap between the direct curvature and the sectional formula on
    /// the mixed sweep.
    pub sweep_defect_direct: f64,
    pub findings: Vec<String>,
}

fn samples(seed: u64, tag: &str) -> impl Iterator<Item = Sampler> + '_ {
    (0..CALIBRATION_SAMPLES).map(move |i| RngStream::for_sample(seed, tag, i).rng())
}

fn fold_max<I: IntoIterator<Item = Result<f64, GeometryError>>>(it: I) -> Result<f64, GeometryError> {
    it.into_iter().try_fold(0.0, |acc, v| Ok(max_residual(acc, v?)))
}

/// `max |[xi_a, xi_b] - 2 xi_c|` over even permutations.
fn bracket_defect(ctx: &SphereContext, seed: u64) -> Result<f64, GeometryError> {
    fold_max(samples(seed, "calibration.side").map(|mut s| {
        let p = ctx.random_point(&mut s).into_vector();
        fold_max(Alpha::even_permutations().into_iter().map(|(a, b, c)| {
            let br = lie_bracket(ctx, &VectorField::reeb(a), &VectorField::reeb(b), &p)?;
            Ok((&br - &ctx.xi_at(&p, c).scale(2.0)).max_abs())
        }))
    }))
}

/// `max |nabla_X xi_a + phi_a X|`
fn reeb_derivative_defect(ctx: &SphereContext, seed: u64) -> Result<f64, GeometryError> {
    fold_max(samples(seed, "calibration.sign_phi").map(|mut s| {
        let p = ctx.random_point(&mut s).into_vector();
        let x = ctx.random_tangent(&p, &mut s);
        fold_max(Alpha::ALL.into_iter().map(|a| {
            let d = levi_civita(ctx, &VectorField::reeb(a), &p, &x)?;
            Ok((&d + &ctx.phi_at(&p, a, &x)).max_abs())
        }))
    }))
}

/// `max |H_a(X) - K(X, phi_a X) - 3|`
fn sectional_defect(ctx: &SphereContext, seed: u64, sign: f64, step: f64) -> Result<f64, GeometryError> {
    let route = CurvatureRoute::hbar_direct(step);
    fold_max(samples(seed, "calibration.sectional").map(|mut s| {
        let p = ctx.random_point(&mut s).into_vector();
        let x = ctx.random_horizontal(&p, &mut s);
        fold_max(Alpha::ALL.into_iter().map(|a| {
            let h = holomorphic_sectional(ctx, &p, a, &x, &route)?.value;
            let k = sectional(ctx, &p, &x, &ctx.phi_at(&p, a, &x), &CurvatureRoute::Sphere, sign)?;
            Ok((h - k - 3.0).abs())
        }))
    }))
}

/// Tangent triple with one slot forced horizontal. The expansion defect is
/// trilinear in the vertical parts, so it vanishes on such triples.
pub fn mixed_triple(ctx: &SphereContext, p: &AmbientVector, slot: usize, s: &mut Sampler) -> [AmbientVector; 3] {
    let mut t = [0; 3].map(|_| ctx.random_tangent(p, s));
    t[slot % 3] = ctx.random_horizontal(p, s);
    t
}

fn expansion_defect(ctx: &SphereContext, seed: u64, pairing: Pairing, step: f64) -> Result<f64, GeometryError> {
    let direct = CurvatureRoute::hbar_direct(step);
    let expansion = CurvatureRoute::HbarExpansion(pairing);
    fold_max(samples(seed, "calibration.pairing").enumerate().map(|(i, mut s)| {
        let p = ctx.random_point(&mut s).into_vector();
        let [x, y, z] = mixed_triple(ctx, &p, i, &mut s);
        Ok((&direct.apply(ctx, &p, &x, &y, &z)? - &expansion.apply(ctx, &p, &x, &y, &z)?).max_abs())
    }))
}

fn pick<T>(a: (T, f64), b: (T, f64)) -> T {
    if a.1 <= b.1 || b.1.is_nan() {
        a.0
    } else {
        b.0
    }
}

/// Runs every calibration decision and returns the calibrated context.
pub fn calibrate(n: usize, seed: u64, step: f64) -> Result<(SphereContext, CalibrationRecord), GeometryError> {
    let right = bracket_defect(&SphereContext::new(n, QuaternionSide::Right, -1.0)?, seed)?;
    let left = bracket_defect(&SphereContext::new(n, QuaternionSide::Left, -1.0)?, seed)?;
    let side = pick((QuaternionSide::Right, right), (QuaternionSide::Left, left));

    let plus = reeb_derivative_defect(&SphereContext::new(n, side, 1.0)?, seed)?;
    let minus = reeb_derivative_defect(&SphereContext::new(n, side, -1.0)?, seed)?;
    let sign_phi = pick((1.0, plus), (-1.0, minus));
    let ctx = SphereContext::new(n, side, sign_phi)?;

    let sec_plus = sectional_defect(&ctx, seed, 1.0, step)?;
    let sec_minus = sectional_defect(&ctx, seed, -1.0, step)?;
    let sectional_sign = pick((1.0, sec_plus), (-1.0, sec_minus));

    let distinct = expansion_defect(&ctx, seed, Pairing::Distinct, step)?;
    let all = expansion_defect(&ctx, seed, Pairing::All, step)?;
    let pairing = pick((Pairing::Distinct, distinct), (Pairing::All, all));

    // measured constants
    let direct = CurvatureRoute::hbar_direct(step);
    let mut s = RngStream::for_sample(seed, "calibration.constants", 0).rng();
    let p = ctx.random_point(&mut s).into_vector();
    let x = ctx.random_horizontal(&p, &mut s);
    let holomorphic_constant = holomorphic_sectional(&ctx, &p, Alpha::I, &x, &direct)?.value;
    let frame = horizontal_frame(&ctx, &p, &mut s)?;
    let r0_trace_coefficient = ricci_of_r0(&ctx, &p, &x, &x, &frame);
    let printed_holomorphic_constant = (n != 2).then(|| (4 * n + 8) as f64 / (n as f64 - 2.0));

    // plane of two Reeb fields, and the mixed sweep against the direct route
    let expansion = CurvatureRoute::HbarExpansion(pairing);
    let xb = ctx.xi_at(&p, Alpha::J);
    let exp_v = theorem_sec_check(&ctx, &p, Alpha::I, &xb, &expansion, sectional_sign)?;
    let dir_v = theorem_sec_check(&ctx, &p, Alpha::I, &xb, &direct, sectional_sign)?;
    let vertical_extreme = VerticalExtreme { k_bar_expansion: exp_v.k_bar, k_bar_direct: dir_v.k_bar, rhs: exp_v.rhs };
    let sweep_defect_direct = fold_max((0..8).map(|i| {
        let t = 0.1 + 0.2 * i as f64;
        let mut v = x.scale(t.cos());
        v.axpy(t.sin(), &xb);
        Ok(theorem_sec_check(&ctx, &p, Alpha::I, &v, &direct, sectional_sign)?.defect())
    }))?;

    let mut findings = vec![
        format!(
            "holomorphic sectional curvature is constant with value {}; the printed constant (4n+8)/(n-2) is not reproduced",
            fmt(holomorphic_constant)
        ),
        format!(
            "the trace of R_0 over a horizontal frame is (n+2) g (measured coefficient {}), not (n-2) g; this trace line is where the printed constant goes wrong, and (4n+8)/(n+2) = 4",
            fmt(r0_trace_coefficient)
        ),
        "commuting of Rbar(X, Y) with a single phi_a fails on H whenever Omega^b(X, Y) != 0 for b != a; it holds on phi_a-planes".into(),
        "the expansion of Rbar in R is exact as soon as one of X, Y, Z is horizontal; its defect depends only on the vertical parts of the three arguments".into(),
        format!(
            "plane spanned by two Reeb fields: expansion gives {}, direct curvature gives {}, sectional formula gives {} (not asserted)",
            fmt(vertical_extreme.k_bar_expansion),
            fmt(vertical_extreme.k_bar_direct),
            fmt(vertical_extreme.rhs)
        ),
    ];
    if sweep_defect_direct > 1e-6 {
        findings.push(format!(
            "on the mixed sweep the sectional formula matches the expansion but not the direct curvature (gap {})",
            fmt(sweep_defect_direct)
        ));
    }

    Ok((
        ctx,
        CalibrationRecord {
            quaternion_side: side,
            bracket_defect_right: right,
            bracket_defect_left: left,
            sign_phi,
            reeb_derivative_defect_plus: plus,
            reeb_derivative_defect_minus: minus,
            sectional_sign,
            sectional_defect_plus: sec_plus,
            sectional_defect_minus: sec_minus,
            expansion_pairing: pairing,
            expansion_defect_distinct: distinct,
            expansion_defect_all: all,
            holomorphic_constant,
            r0_trace_coefficient,
            printed_holomorphic_constant,
            vertical_extreme,
            sweep_defect_direct,
            findings,
        },
    ))
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DEFAULT_FD_STEP;

    #[test]
    fn calibration_outcome() {
        for n in [1, 2] {
            let (ctx, rec) = calibrate(n, 42, DEFAULT_FD_STEP).unwrap();
            assert_eq!(rec.quaternion_side, QuaternionSide::Right);
            assert!(rec.bracket_defect_right < 1e-12 && rec.bracket_defect_left > 1.0);
            assert_eq!(rec.sign_phi, -1.0);
            assert_eq!(ctx.sign_phi(), -1.0);
            assert!(rec.reeb_derivative_defect_minus < 1e-12 && rec.reeb_derivative_defect_plus > 0.1);
            assert_eq!(rec.sectional_sign, 1.0);
            assert!(rec.sectional_defect_plus < 1e-6 && (rec.sectional_defect_minus - 2.0).abs() < 1e-6);
            assert_eq!(rec.expansion_pairing, Pairing::Distinct);
            assert!(rec.expansion_defect_distinct < 1e-6 && rec.expansion_defect_all > 1e-2);
            assert!((rec.holomorphic_constant - 4.0).abs() < 1e-6);
            assert!((rec.r0_trace_coefficient - (n + 2) as f64).abs() < 1e-9);
            assert!((rec.vertical_extreme.k_bar_expansion - 2.0).abs() < 1e-9);
            assert!(rec.vertical_extreme.k_bar_direct.abs() < 1e-6);
        }
        let (_, rec) = calibrate(2, 42, DEFAULT_FD_STEP).unwrap();
        assert_eq!(rec.printed_holomorphic_constant, None);
    }

    #[test]
    fn calibration_is_deterministic() {
        let a = calibrate(1, 7, DEFAULT_FD_STEP).unwrap().1;
        let b = calibrate(1, 7, DEFAULT_FD_STEP).unwrap().1;
        assert_eq!(a, b);
    }
}
