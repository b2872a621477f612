//! Levi-Civita derivatives, Lie brackets and the h tensors on S^11.

use hkcontact::field::{h_tensor, h_tensor_expected, levi_civita, lie_bracket, ExtensionFamily, VectorField};
use hkcontact::numerics::RngStream;
use hkcontact::sphere::{Alpha, QuaternionSide, SphereContext};

fn main() -> Result<(), hkcontact::GeometryError> {
    let ctx = SphereContext::new(2, QuaternionSide::Right, -1.0)?;
    let mut s = RngStream::new(11, 0).rng();
    let p = ctx.random_point(&mut s).into_vector();
    let x = ctx.random_tangent(&p, &mut s);

    for (a, b, c) in Alpha::even_permutations() {
        let br = lie_bracket(&ctx, &VectorField::reeb(a), &VectorField::reeb(b), &p)?;
        println!("[xi_{}, xi_{}] - 2 xi_{}: {:.1e}", a.label(), b.label(), c.label(), (&br - &ctx.xi_at(&p, c).scale(2.0)).max_abs());
    }

    for a in Alpha::ALL {
        let d = levi_civita(&ctx, &VectorField::reeb(a), &p, &x)?;
        println!("nabla_X xi_{} + phi X: {:.1e}", a.label(), (&d + &ctx.phi_at(&p, a, &x)).max_abs());
    }

    let affine = ExtensionFamily::random_affine(ctx.ambient_dim(), &mut s);
    for a in Alpha::ALL {
        for b in Alpha::ALL {
            let canon = h_tensor(&ctx, &p, a, b, &x, &ExtensionFamily::Canonical)?;
            let other = h_tensor(&ctx, &p, a, b, &x, &affine)?;
            println!(
                "h_{}{}: table defect {:.1e}, extension gap {:.1e}",
                a.label(),
                b.label(),
                (&canon - &h_tensor_expected(&ctx, &p, a, b, &x)).max_abs(),
                (&canon - &other).max_abs()
            );
        }
    }
    Ok(())
}
