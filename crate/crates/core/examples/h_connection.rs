//! The H-connection by its defining formula and by the horizontal/vertical
//! split, plus its torsion.

use hkcontact::field::{ExtensionFamily, FieldRule, VectorField};
use hkcontact::hconn::{hbar, hbar_projection_oracle, hbar_torsion, phi_parallel_residual, torsion_expected};
use hkcontact::numerics::RngStream;
use hkcontact::sphere::{Alpha, QuaternionSide, SphereContext};

fn main() -> Result<(), hkcontact::GeometryError> {
    let ctx = SphereContext::new(1, QuaternionSide::Right, -1.0)?;
    let mut s = RngStream::new(3, 0).rng();
    let p = ctx.random_point(&mut s).into_vector();
    let x = ctx.random_tangent(&p, &mut s);
    let field = VectorField::new(FieldRule::Combination(vec![
        (1.0, FieldRule::Canonical(s.gaussian_vector(8))),
        (0.5, FieldRule::Reeb(Alpha::J)),
    ]));

    let a = hbar(&ctx, &field, &p, &x)?;
    let b = hbar_projection_oracle(&ctx, &field, &p, &x)?;
    println!("formula route      {:.5?}", a.as_slice());
    println!("projection route   {:.5?}", b.as_slice());
    println!("gap {:.1e}", (&a - &b).max_abs());

    let y = ctx.random_tangent(&p, &mut s);
    let t = hbar_torsion(&ctx, &p, &x, &y, &ExtensionFamily::Canonical)?;
    println!("torsion vs 2 Omega^a(X,Y) xi_a: {:.1e}", (&t - &torsion_expected(&ctx, &p, &x, &y)).max_abs());

    let (xh, yh) = (ctx.random_horizontal(&p, &mut s), ctx.random_horizontal(&p, &mut s));
    for a in Alpha::ALL {
        let r = phi_parallel_residual(&ctx, &p, a, &xh, &yh, &ExtensionFamily::Canonical)?;
        println!("(nabla-bar phi_{}) on H: {:.1e}", a.label(), r);
    }
    Ok(())
}
