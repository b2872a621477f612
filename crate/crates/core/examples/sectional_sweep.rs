//! Sectional curvature of the plane {X, phi_1 X} as X tilts from H toward
//! xi_2, against the closed-form comparison formula.

use hkcontact::curvature::{theorem_sec_check, CurvatureRoute, Pairing};
use hkcontact::numerics::{RngStream, DEFAULT_FD_STEP};
use hkcontact::sphere::{Alpha, QuaternionSide, SphereContext};

fn main() -> Result<(), hkcontact::GeometryError> {
    let ctx = SphereContext::new(1, QuaternionSide::Right, -1.0)?;
    let mut s = RngStream::new(9, 0).rng();
    let p = ctx.random_point(&mut s).into_vector();
    let xh = ctx.random_horizontal(&p, &mut s);
    let xi = ctx.xi_at(&p, Alpha::J);
    let expansion = CurvatureRoute::HbarExpansion(Pairing::Distinct);
    let direct = CurvatureRoute::hbar_direct(DEFAULT_FD_STEP);

    println!("   t    formula   Kbar(expansion)   Kbar(direct)");
    for i in 0..=8 {
        let t = i as f64 * std::f64::consts::FRAC_PI_2 / 8.0;
        let x = &xh.scale(t.cos()) + &xi.scale(t.sin());
        let e = theorem_sec_check(&ctx, &p, Alpha::I, &x, &expansion, 1.0)?;
        let d = theorem_sec_check(&ctx, &p, Alpha::I, &x, &direct, 1.0)?;
        println!("{t:>5.3}  {:>8.5}  {:>15.5}  {:>13.5}", e.rhs, e.k_bar, d.k_bar);
    }
    Ok(())
}
