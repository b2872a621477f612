//! The curvature of the H-connection two ways: from second covariant
//! derivatives, and from its expansion in the sphere curvature. The two agree
//! unless all three arguments are vertical.

use hkcontact::curvature::{CurvatureRoute, Pairing};
use hkcontact::numerics::{RngStream, DEFAULT_FD_STEP};
use hkcontact::sphere::{Alpha, QuaternionSide, SphereContext};

fn main() -> Result<(), hkcontact::GeometryError> {
    let ctx = SphereContext::new(1, QuaternionSide::Right, -1.0)?;
    let mut s = RngStream::new(5, 0).rng();
    let p = ctx.random_point(&mut s).into_vector();
    let direct = CurvatureRoute::hbar_direct(DEFAULT_FD_STEP);

    let h = |s: &mut _| ctx.random_horizontal(&p, s);
    let t = |s: &mut _| ctx.random_tangent(&p, s);
    let (x1, x2) = (ctx.xi_at(&p, Alpha::I), ctx.xi_at(&p, Alpha::J));
    let sectors = [
        ("horizontal", [h(&mut s), h(&mut s), h(&mut s)]),
        ("one horizontal", [h(&mut s), t(&mut s), t(&mut s)]),
        ("generic tangent", [t(&mut s), t(&mut s), t(&mut s)]),
        ("all vertical", [x1.clone(), x2, x1]),
    ];
    for pairing in [Pairing::Distinct, Pairing::All] {
        let expansion = CurvatureRoute::HbarExpansion(pairing);
        println!("pairing {pairing:?}");
        for (label, [x, y, z]) in &sectors {
            let a = direct.apply(&ctx, &p, x, y, z)?;
            let b = expansion.apply(&ctx, &p, x, y, z)?;
            println!("  {label:<16} gap {:.2e}", (&a - &b).max_abs());
        }
    }
    Ok(())
}
