//! Holomorphic sectional curvature of the H-connection, the trace of the
//! model tensor R_0, and the constant they imply, for n = 1..4.

use hkcontact::curvature::{holomorphic_sectional, horizontal_frame, ricci_bar, ricci_of_r0, CurvatureRoute};
use hkcontact::numerics::{RngStream, DEFAULT_FD_STEP};
use hkcontact::sphere::{Alpha, QuaternionSide, SphereContext};

fn main() -> Result<(), hkcontact::GeometryError> {
    let route = CurvatureRoute::hbar_direct(DEFAULT_FD_STEP);
    println!(" n   H_1      H_2      H_3      Sbar/g    c(n)    (4n+8)/c(n)  (4n+8)/(n-2)");
    for n in 1..=4 {
        let ctx = SphereContext::new(n, QuaternionSide::Right, -1.0)?;
        let mut s = RngStream::new(n as u64, 0).rng();
        let p = ctx.random_point(&mut s).into_vector();
        let x = ctx.random_horizontal(&p, &mut s);
        let h = Alpha::ALL.map(|a| holomorphic_sectional(&ctx, &p, a, &x, &route).map(|h| h.value));
        let frame = horizontal_frame(&ctx, &p, &mut s)?;
        let sbar = ricci_bar(&ctx, &p, &x, &x, &frame, &route)?;
        let c = ricci_of_r0(&ctx, &p, &x, &x, &frame);
        let k = (4 * n + 8) as f64;
        let printed = if n == 2 { "undefined".to_string() } else { format!("{:.3}", k / (n as f64 - 2.0)) };
        println!(
            "{n:>2}  {:.5}  {:.5}  {:.5}  {sbar:>7.4}  {c:>6.3}  {:>11.5}  {printed:>12}",
            h[0].clone()?,
            h[1].clone()?,
            h[2].clone()?,
            k / c
        );
    }
    Ok(())
}
