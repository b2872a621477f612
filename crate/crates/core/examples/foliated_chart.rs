//! A chart adapted to the Reeb foliation: coordinates, adapted frame,
//! transverse Christoffel symbols and the bundle-like property.

use hkcontact::chart::{adapted_frame, bundle_like_residual, christoffel, ChartCoords, FoliatedChart};
use hkcontact::numerics::DEFAULT_FD_STEP;
use hkcontact::sphere::{QuaternionSide, SphereContext};

fn main() -> Result<(), hkcontact::GeometryError> {
    let ctx = SphereContext::new(1, QuaternionSide::Right, -1.0)?;
    let chart = FoliatedChart::new(&ctx);
    let c = ChartCoords { z: [0.3, -0.2, 0.5], x: vec![0.4, -1.1, 0.7, 0.2] };
    let p = chart.param(&c)?;
    println!("p(z, x) = {:.4?}", p.as_slice());
    println!("inverse  = {:.6?}", chart.inverse(&p)?);

    let frame = adapted_frame(&ctx, &chart, &c)?;
    println!("block defect of the metric in (xi_a, delta_i): {:.1e}", frame.block_defect(&ctx));
    for row in &frame.g {
        println!("  g_ij row {:.4?}", row);
    }

    let f = christoffel(&ctx, &chart, &p, DEFAULT_FD_STEP)?;
    println!("condition number of g_ij: {:.3}", f.condition);
    println!("F^0_ij row 0: {:.5?}", f.symbols[0][0]);
    println!("symmetry defect: {:.1e}", f.symmetry_defect());

    let b = bundle_like_residual(&ctx, &chart, &p, DEFAULT_FD_STEP)?;
    println!("xi_a(g_ij): {:.1e}, horizontal part of nabla_xi xi: {:.1e}", b.metric, b.totally_geodesic);

    let outside = ChartCoords { z: [3.2, 0.0, 0.0], x: vec![0.0; 4] };
    println!("outside the domain: {}", chart.param(&outside).unwrap_err());
    Ok(())
}
