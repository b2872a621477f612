//! The structure tensors at a random point of S^7 and their defining relations.

use hkcontact::numerics::RngStream;
use hkcontact::sphere::{Alpha, QuaternionSide, SphereContext, TangentAt};

fn main() -> Result<(), hkcontact::GeometryError> {
    let ctx = SphereContext::new(1, QuaternionSide::Right, -1.0)?;
    let mut s = RngStream::new(7, 0).rng();
    let p = ctx.random_point(&mut s);
    println!("p = {:.4?}", p.vector().as_slice());

    let x = ctx.random_tangent(p.vector(), &mut s);
    for a in Alpha::ALL {
        let xi = ctx.xi_at(p.vector(), a);
        let fx = ctx.phi_at(p.vector(), a, &x);
        println!(
            "{}: |xi| = {:.3}  eta(X) = {:+.4}  |phi X|^2 = {:.4}  |X|^2 - eta(X)^2 = {:.4}",
            a.label(),
            xi.norm(),
            ctx.eta_at(p.vector(), a, &x),
            fx.dot(&fx),
            x.dot(&x) - ctx.eta_at(p.vector(), a, &x).powi(2),
        );
    }

    let h = ctx.horizontal_at(p.vector(), &x);
    println!("horizontal part of X has norm {:.4}", h.norm());

    let t = vec![TangentAt::new(p.clone(), x)?];
    let d = ctx.check_three_sasakian_relations(&p, &t);
    println!("quaternion relation defects: xi {:.1e}, eta {:.1e}, phi {:.1e}", d.xi, d.eta, d.phi);
    Ok(())
}
