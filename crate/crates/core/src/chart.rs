//! Foliated chart `(z^1, z^2, z^3, x^1, ..., x^{4n})` built from the
//! quaternionic Hopf fibration.
//!
//! With `u = exp(z_1 i + z_2 j + z_3 k)` and quaternions `q_a` read from `x`,
//!
//! ```text
//! p = (u, q_1 u, ..., q_n u) / sqrt(1 + |q|^2)      (right action)
//! p = (u, u q_1, ..., u q_n) / sqrt(1 + |q|^2)      (left action)
//! ```
//!
//! The quotients `q_a = p_a p_0^{-1}` (resp. `p_0^{-1} p_a`) are invariant
//! along the Reeb orbits, so the leaves are exactly the slices `x = const`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::GeometryError;
use crate::field::{levi_civita, lie_bracket, VectorField};
use crate::numerics::{gram_schmidt, nested_step, richardson_derivative, AmbientVector, Sampler};
use crate::sphere::{Alpha, QuaternionSide, SphereContext};

/// Condition numbers of `g_ij` above this are rejected.
pub const MAX_CONDITION: f64 = 1e8;

type Quat = [f64; 4];

fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn conj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

fn block(v: &[f64], a: usize) -> Quat {
    [v[4 * a], v[4 * a + 1], v[4 * a + 2], v[4 * a + 3]]
}

fn unit(m: usize) -> Quat {
    let mut e = [0.0; 4];
    e[m] = 1.0;
    e
}

/// `sin(t)/t` and `(t cos t - sin t)/t^3`, with series near zero.
fn exp_coefficients(t: f64) -> (f64, f64) {
    if t < 1e-4 {
        let t2 = t * t;
        (1.0 - t2 / 6.0 + t2 * t2 / 120.0, -1.0 / 3.0 + t2 / 30.0)
    } else {
        (t.sin() / t, (t * t.cos() - t.sin()) / (t * t * t))
    }
}

/// Chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartCoords {
    pub z: [f64; 3],
    pub x: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct FoliatedChart {
    n: usize,
    side: QuaternionSide,
}

impl FoliatedChart {
    pub const X_MAX: f64 = 10.0;
    /// Sampling margin inside the domain.
    pub const MARGIN: f64 = 0.1;

    pub fn new(ctx: &SphereContext) -> Self {
        FoliatedChart { n: ctx.n(), side: ctx.side() }
    }

    fn transverse(&self, q: Quat, u: Quat) -> Quat {
        match self.side {
            QuaternionSide::Right => qmul(q, u),
            QuaternionSide::Left => qmul(u, q),
        }
    }

    pub fn check_domain(&self, c: &ChartCoords) -> Result<(), GeometryError> {
        if c.x.len() != 4 * self.n {
            return Err(GeometryError::DimensionMismatch { expected: 4 * self.n, found: c.x.len() });
        }
        let zn = c.z.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xn = c.x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(zn < PI) {
            return Err(GeometryError::ChartDomain(format!("|z| = {zn} is not below pi")));
        }
        if !(xn <= Self::X_MAX) {
            return Err(GeometryError::ChartDomain(format!("|x| = {xn} exceeds {}", Self::X_MAX)));
        }
        Ok(())
    }

    fn u_and_derivatives(z: &[f64; 3]) -> (Quat, [Quat; 3]) {
        let t = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (s, ds) = exp_coefficients(t);
        let u = [t.cos(), s * z[0], s * z[1], s * z[2]];
        let du = [0, 1, 2].map(|a| {
            let mut d = [-s * z[a], ds * z[a] * z[0], ds * z[a] * z[1], ds * z[a] * z[2]];
            d[a + 1] += s;
            d
        });
        (u, du)
    }

    /// The point with coordinates `c`.
    pub fn param(&self, c: &ChartCoords) -> Result<AmbientVector, GeometryError> {
        self.check_domain(c)?;
        let (u, _) = Self::u_and_derivatives(&c.z);
        Ok(self.assemble(u, &c.x))
    }

    fn assemble(&self, u: Quat, x: &[f64]) -> AmbientVector {
        let norm = (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let mut out = Vec::with_capacity(4 * (self.n + 1));
        out.extend_from_slice(&u);
        for a in 0..self.n {
            out.extend_from_slice(&self.transverse(block(x, a), u));
        }
        AmbientVector::from_vec(out).scale(1.0 / norm)
    }

    /// Coordinates of `p`.
    pub fn inverse(&self, p: &AmbientVector) -> Result<ChartCoords, GeometryError> {
        let p0 = block(p.as_slice(), 0);
        let r2 = p0.iter().map(|v| v * v).sum::<f64>();
        if r2 < 1e-24 {
            return Err(GeometryError::ChartDomain("first quaternion vanishes".into()));
        }
        let inv = conj(p0).map(|v| v / r2);
        let mut x = Vec::with_capacity(4 * self.n);
        for a in 1..=self.n {
            let pa = block(p.as_slice(), a);
            x.extend_from_slice(&match self.side {
                QuaternionSide::Right => qmul(pa, inv),
                QuaternionSide::Left => qmul(inv, pa),
            });
        }
        let r = r2.sqrt();
        let u = p0.map(|v| v / r);
        let vn = (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]).sqrt();
        let theta = vn.atan2(u[0]);
        let scale = if vn < 1e-300 { 0.0 } else { theta / vn };
        let c = ChartCoords { z: [u[1] * scale, u[2] * scale, u[3] * scale], x };
        self.check_domain(&c)?;
        Ok(c)
    }

    /// A point drawn well inside the domain.
    pub fn random_coords(&self, s: &mut Sampler) -> ChartCoords {
        let z = loop {
            let z = [s.normal(), s.normal(), s.normal()];
            if z.iter().map(|v| v * v).sum::<f64>().sqrt() < PI - Self::MARGIN {
                break z;
            }
        };
        let x = loop {
            let x = s.gaussian_vector(4 * self.n);
            if x.norm() <= Self::X_MAX - Self::MARGIN {
                break x.into_vec();
            }
        };
        ChartCoords { z, x }
    }
}

/// Columns of the parametrization Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateFields {
    pub base: AmbientVector,
    pub dz: [AmbientVector; 3],
    pub dx: Vec<AmbientVector>,
}

/// `d/dz^a` and `d/dx^i` at `c`, in closed form.
pub fn coordinate_fields(chart: &FoliatedChart, c: &ChartCoords) -> Result<CoordinateFields, GeometryError> {
    chart.check_domain(c)?;
    let (u, du) = FoliatedChart::u_and_derivatives(&c.z);
    let norm2 = 1.0 + c.x.iter().map(|v| v * v).sum::<f64>();
    let norm = norm2.sqrt();
    let base = chart.assemble(u, &c.x);
    let dz = du.map(|d| {
        let mut out = Vec::with_capacity(4 * (chart.n + 1));
        out.extend_from_slice(&d);
        for a in 0..chart.n {
            out.extend_from_slice(&chart.transverse(block(&c.x, a), d));
        }
        AmbientVector::from_vec(out).scale(1.0 / norm)
    });
    let dx = (0..4 * chart.n)
        .map(|i| {
            let mut v = AmbientVector::zeros(4 * (chart.n + 1));
            let (a, m) = (i / 4, i % 4);
            let w = chart.transverse(unit(m), u);
            for (k, wk) in w.iter().enumerate() {
                v[4 * (a + 1) + k] = wk / norm;
            }
            v.axpy(-c.x[i] / norm2, &base);
            v
        })
        .collect();
    Ok(CoordinateFields { base, dz, dx })
}

/// Adapted frame `delta_i = d/dx^i - eta^a_i xi_a` at a chart point.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedFrameAt {
    pub base: AmbientVector,
    pub delta: Vec<AmbientVector>,
    /// `eta[a][i] = eta^a(d/dx^i)`
    pub eta: [Vec<f64>; 3],
    /// `g_ij = g(delta_i, delta_j)`
    pub g: Vec<Vec<f64>>,
}

impl AdaptedFrameAt {
    /// Gram matrix of `(xi_1, xi_2, xi_3, delta_1, ..., delta_4n)`.
    pub fn full_gram(&self, ctx: &SphereContext) -> Vec<Vec<f64>> {
        let mut frame: Vec<_> = Alpha::ALL.iter().map(|&a| ctx.xi_at(&self.base, a)).collect();
        frame.extend(self.delta.iter().cloned());
        frame.iter().map(|u| frame.iter().map(|v| u.dot(v)).collect()).collect()
    }

    /// Max deviation of the full Gram matrix from the block form `diag(I_3, g_ij)`.
    pub fn block_defect(&self, ctx: &SphereContext) -> f64 {
        let gram = self.full_gram(ctx);
        let mut worst: f64 = 0.0;
        for (r, row) in gram.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                let expected = match (r < 3, c < 3) {
                    (true, true) => f64::from(r == c),
                    (false, false) => self.g[r - 3][c - 3],
                    _ => 0.0,
                };
                worst = worst.max((v - expected).abs());
            }
        }
        worst
    }
}

pub fn adapted_frame(ctx: &SphereContext, chart: &FoliatedChart, c: &ChartCoords) -> Result<AdaptedFrameAt, GeometryError> {
    let fields = coordinate_fields(chart, c)?;
    let mut columns: Vec<_> = fields.dz.to_vec();
    columns.extend(fields.dx.iter().cloned());
    if let Err(GeometryError::RankDeficient { index, .. }) = gram_schmidt(&columns) {
        return Err(GeometryError::ChartDegenerate { rank: index, expected: columns.len() });
    }
    let p = &fields.base;
    let eta = Alpha::ALL.map(|a| fields.dx.iter().map(|d| ctx.eta_at(p, a, d)).collect::<Vec<_>>());
    let delta: Vec<_> = fields
        .dx
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut v = d.clone();
            for a in Alpha::ALL {
                v.axpy(-eta[a.index()][i], &ctx.xi_at(p, a));
            }
            v
        })
        .collect();
    let g = delta.iter().map(|u| delta.iter().map(|v| u.dot(v)).collect()).collect();
    Ok(AdaptedFrameAt { base: fields.base, delta, eta, g })
}

/// Adapted frame at an arbitrary point of the chart domain.
pub fn adapted_frame_at(ctx: &SphereContext, chart: &FoliatedChart, p: &AmbientVector) -> Result<AdaptedFrameAt, GeometryError> {
    let mut frame = adapted_frame(ctx, chart, &chart.inverse(p)?)?;
    frame.base = p.clone();
    Ok(frame)
}

/// `delta_i` as a vector field, differentiated by finite differences.
pub fn delta_field(ctx: &SphereContext, chart: &FoliatedChart, i: usize, step: f64) -> VectorField {
    let (ctx, chart) = (ctx.clone(), chart.clone());
    VectorField::custom(format!("delta_{}", i + 1), step, move |q| {
        Ok(adapted_frame_at(&ctx, &chart, q)?.delta[i].clone())
    })
}

/// `[delta_i, delta_j]` at `p`.
pub fn bracket_coords(
    ctx: &SphereContext,
    chart: &FoliatedChart,
    p: &AmbientVector,
    i: usize,
    j: usize,
    step: f64,
) -> Result<AmbientVector, GeometryError> {
    if i == j {
        return Ok(AmbientVector::zeros(p.len()));
    }
    lie_bracket(ctx, &delta_field(ctx, chart, i, step), &delta_field(ctx, chart, j, step), p)
}

/// `-2 Omega^a(delta_i, delta_j) xi_a`
pub fn bracket_expected(ctx: &SphereContext, frame: &AdaptedFrameAt, i: usize, j: usize) -> AmbientVector {
    let p = &frame.base;
    let mut out = AmbientVector::zeros(p.len());
    for a in Alpha::ALL {
        out.axpy(-2.0 * ctx.omega_at(p, a, &frame.delta[i], &frame.delta[j]), &ctx.xi_at(p, a));
    }
    out
}

fn flatten(m: &[Vec<f64>]) -> AmbientVector {
    AmbientVector::from_vec(m.iter().flatten().copied().collect())
}

/// Derivative of `g_ij` along the curve `normalize(p + t v)`, flattened row-major.
pub fn metric_derivative_along(
    ctx: &SphereContext,
    chart: &FoliatedChart,
    p: &AmbientVector,
    v: &AmbientVector,
    step: f64,
) -> Result<AmbientVector, GeometryError> {
    richardson_derivative(
        |t| {
            let mut q = p.clone();
            q.axpy(t, v);
            Ok(flatten(&adapted_frame_at(ctx, chart, &q.normalized())?.g))
        },
        0.0,
        step,
    )
}

/// Christoffel symbols `F[k][i][j]` of the transverse metric in the adapted frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    pub symbols: Vec<Vec<Vec<f64>>>,
    pub condition: f64,
}

impl Christoffel {
    fn flat(&self) -> AmbientVector {
        AmbientVector::from_vec(self.symbols.iter().flatten().flatten().copied().collect())
    }

    /// `max |F^k_ij - F^k_ji|`
    pub fn symmetry_defect(&self) -> f64 {
        let m = self.symbols.len();
        let mut worst: f64 = 0.0;
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    worst = worst.max((self.symbols[k][i][j] - self.symbols[k][j][i]).abs());
                }
            }
        }
        worst
    }
}

/// `F^k_ij = g^{kh}/2 (delta_j g_ih + delta_i g_jh - delta_h g_ij)`
pub fn christoffel(ctx: &SphereContext, chart: &FoliatedChart, p: &AmbientVector, step: f64) -> Result<Christoffel, GeometryError> {
    let frame = adapted_frame_at(ctx, chart, p)?;
    let m = frame.delta.len();
    let g = DMatrix::from_fn(m, m, |r, c| frame.g[r][c]);
    let eig = SymmetricEigen::new(g.clone()).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(GeometryError::IllConditioned(condition));
    }
    let ginv = g.cholesky().ok_or(GeometryError::IllConditioned(condition))?.inverse();
    // dg[k][i*m + j] = delta_k(g_ij)
    let dg = frame
        .delta
        .iter()
        .map(|d| metric_derivative_along(ctx, chart, p, d, step))
        .collect::<Result<Vec<_>, _>>()?;
    let d = |k: usize, i: usize, j: usize| dg[k][i * m + j];
    let mut symbols = vec![vec![vec![0.0; m]; m]; m];
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                symbols[k][i][j] = 0.5
                    * (0..m)
                        .map(|h| ginv[(k, h)] * (d(j, i, h) + d(i, j, h) - d(h, i, j)))
                        .sum::<f64>();
            }
        }
    }
    Ok(Christoffel { symbols, condition })
}

/// Derivative of the Christoffel array along `normalize(p + t v)`, flattened.
pub fn christoffel_derivative_along(
    ctx: &SphereContext,
    chart: &FoliatedChart,
    p: &AmbientVector,
    v: &AmbientVector,
    step: f64,
) -> Result<AmbientVector, GeometryError> {
    richardson_derivative(
        |t| {
            let mut q = p.clone();
            q.axpy(t, v);
            Ok(christoffel(ctx, chart, &q.normalized(), step)?.flat())
        },
        0.0,
        nested_step(step),
    )
}

/// `max |nabla_{delta_i} delta_j - F^k_ij delta_k + Omega^a_ij xi_a|` over all `(i, j)`.
pub fn levi_civita_frame_residual(
    ctx: &SphereContext,
    chart: &FoliatedChart,
    p: &AmbientVector,
    step: f64,
) -> Result<f64, GeometryError> {
    let frame = adapted_frame_at(ctx, chart, p)?;
    let f = christoffel(ctx, chart, p, step)?;
    let m = frame.delta.len();
    let mut worst: f64 = 0.0;
    for j in 0..m {
        let field = delta_field(ctx, chart, j, step);
        for i in 0..m {
            let mut expected = AmbientVector::zeros(p.len());
            for k in 0..m {
                expected.axpy(f.symbols[k][i][j], &frame.delta[k]);
            }
            for a in Alpha::ALL {
                expected.axpy(-ctx.omega_at(p, a, &frame.delta[i], &frame.delta[j]), &ctx.xi_at(p, a));
            }
            let got = levi_civita(ctx, &field, p, &frame.delta[i])?;
            worst = worst.max((&got - &expected).max_abs());
        }
    }
    Ok(worst)
}

/// Foliation defects along the Reeb directions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BundleLike {
    /// `max |xi_a(g_ij)|`
    pub metric: f64,
    /// `max |h(nabla_{xi_a} xi_b)|`
    pub totally_geodesic: f64,
}

pub fn bundle_like_residual(
    ctx: &SphereContext,
    chart: &FoliatedChart,
    p: &AmbientVector,
    step: f64,
) -> Result<BundleLike, GeometryError> {
    let mut out = BundleLike::default();
    for a in Alpha::ALL {
        let xi = ctx.xi_at(p, a);
        out.metric = out.metric.max(metric_derivative_along(ctx, chart, p, &xi, step)?.max_abs());
        for b in Alpha::ALL {
            let d = levi_civita(ctx, &VectorField::reeb(b), p, &xi)?;
            out.totally_geodesic = out.totally_geodesic.max(ctx.horizontal_at(p, &d).max_abs());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hconn::hbar;
    use crate::numerics::{richardson_derivative, RngStream, DEFAULT_FD_STEP};

    fn setup(n: usize, side: QuaternionSide) -> (SphereContext, FoliatedChart) {
        let c = SphereContext::new(n, side, -1.0).unwrap();
        let chart = FoliatedChart::new(&c);
        (c, chart)
    }

    #[test]
    fn origin_and_round_trip() {
        let (c, chart) = setup(1, QuaternionSide::Right);
        let origin = ChartCoords { z: [0.0; 3], x: vec![0.0; 4] };
        let p = chart.param(&origin).unwrap();
        assert_eq!(p, AmbientVector::basis(8, 0));
        let f = coordinate_fields(&chart, &origin).unwrap();
        assert!((&f.dz[0] - &c.xi_at(&p, Alpha::I)).max_abs() < 1e-15);
        let mut s = RngStream::new(51, 0).rng();
        for _ in 0..100 {
            let cc = chart.random_coords(&mut s);
            let p = chart.param(&cc).unwrap();
            assert!((p.norm() - 1.0).abs() < 1e-13);
            let back = chart.inverse(&p).unwrap();
            for a in 0..3 {
                assert!((back.z[a] - cc.z[a]).abs() < 1e-10);
            }
            for (u, v) in back.x.iter().zip(&cc.x) {
                assert!((u - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn jacobian_matches_richardson_and_is_tangent() {
        for side in [QuaternionSide::Right, QuaternionSide::Left] {
            let (c, chart) = setup(2, side);
            let mut s = RngStream::new(52, 0).rng();
            for _ in 0..20 {
                let cc = chart.random_coords(&mut s);
                let f = coordinate_fields(&chart, &cc).unwrap();
                for a in 0..3 {
                    let fd = richardson_derivative(
                        |t| {
                            let mut z = cc.z;
                            z[a] += t;
                            chart.param(&ChartCoords { z, x: cc.x.clone() })
                        },
                        0.0,
                        1e-3,
                    )
                    .unwrap();
                    assert!((&fd - &f.dz[a]).max_abs() < 1e-9);
                    assert!(f.dz[a].dot(&f.base).abs() < 1e-10);
                    // leaf tangency: no horizontal part
                    assert!(c.horizontal_at(&f.base, &f.dz[a]).max_abs() < 1e-9);
                }
                for i in 0..8 {
                    let fd = richardson_derivative(
                        |t| {
                            let mut x = cc.x.clone();
                            x[i] += t;
                            chart.param(&ChartCoords { z: cc.z, x })
                        },
                        0.0,
                        1e-3,
                    )
                    .unwrap();
                    assert!((&fd - &f.dx[i]).max_abs() < 1e-9);
                    assert!(f.dx[i].dot(&f.base).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn small_angle_branch_matches_richardson() {
        let (_, chart) = setup(1, QuaternionSide::Right);
        let cc = ChartCoords { z: [2e-5, -1e-5, 3e-5], x: vec![0.3, -0.2, 0.1, 0.5] };
        let f = coordinate_fields(&chart, &cc).unwrap();
        for a in 0..3 {
            let fd = richardson_derivative(
                |t| {
                    let mut z = cc.z;
                    z[a] += t;
                    chart.param(&ChartCoords { z, x: cc.x.clone() })
                },
                0.0,
                1e-6,
            )
            .unwrap();
            assert!((&fd - &f.dz[a]).max_abs() < 1e-9);
        }
    }

    #[test]
    fn domain_is_enforced() {
        let (_, chart) = setup(1, QuaternionSide::Right);
        assert!(chart.param(&ChartCoords { z: [PI, 0.0, 0.0], x: vec![0.0; 4] }).is_err());
        assert!(chart.param(&ChartCoords { z: [0.0; 3], x: vec![11.0, 0.0, 0.0, 0.0] }).is_err());
        assert!(chart.param(&ChartCoords { z: [0.0; 3], x: vec![0.0; 3] }).is_err());
        let mut p = AmbientVector::zeros(8);
        p[5] = 1.0;
        assert!(chart.inverse(&p).is_err());
    }

    #[test]
    fn adapted_frame_structure() {
        let (c, chart) = setup(1, QuaternionSide::Right);
        let mut s = RngStream::new(53, 0).rng();
        for _ in 0..20 {
            let cc = chart.random_coords(&mut s);
            let f = adapted_frame(&c, &chart, &cc).unwrap();
            for d in &f.delta {
                for a in Alpha::ALL {
                    assert!(c.eta_at(&f.base, a, d).abs() < 1e-10);
                }
            }
            assert!(f.block_defect(&c) < 1e-10);
        }
    }

    #[test]
    fn brackets_reduce() {
        let (c, chart) = setup(1, QuaternionSide::Right);
        let mut s = RngStream::new(54, 0).rng();
        let cc = chart.random_coords(&mut s);
        let p = chart.param(&cc).unwrap();
        let f = adapted_frame(&c, &chart, &cc).unwrap();
        for i in 0..4 {
            assert_eq!(bracket_coords(&c, &chart, &p, i, i, DEFAULT_FD_STEP).unwrap().max_abs(), 0.0);
            for j in 0..4 {
                let b = bracket_coords(&c, &chart, &p, i, j, DEFAULT_FD_STEP).unwrap();
                assert!((&b - &bracket_expected(&c, &f, i, j)).max_abs() < 1e-7);
                assert!(c.horizontal_at(&p, &b).max_abs() < 1e-7);
            }
            for a in Alpha::ALL {
                let b = lie_bracket(&c, &delta_field(&c, &chart, i, DEFAULT_FD_STEP), &VectorField::reeb(a), &p).unwrap();
                assert!(b.max_abs() < 1e-8);
            }
        }
    }

    #[test]
    fn christoffel_and_levi_civita_frame() {
        let (c, chart) = setup(1, QuaternionSide::Right);
        let mut s = RngStream::new(55, 0).rng();
        let p = chart.param(&chart.random_coords(&mut s)).unwrap();
        let f = christoffel(&c, &chart, &p, DEFAULT_FD_STEP).unwrap();
        assert!(f.symmetry_defect() < 1e-9);
        assert!(levi_civita_frame_residual(&c, &chart, &p, DEFAULT_FD_STEP).unwrap() < 1e-6);
        for a in Alpha::ALL {
            let d = christoffel_derivative_along(&c, &chart, &p, &c.xi_at(&p, a), DEFAULT_FD_STEP).unwrap();
            assert!(d.max_abs() < 1e-6, "{}", d.max_abs());
        }
        let b = bundle_like_residual(&c, &chart, &p, DEFAULT_FD_STEP).unwrap();
        assert!(b.metric < 1e-7 && b.totally_geodesic < 1e-9);
    }

    #[test]
    fn hbar_on_frame_fields() {
        let (c, chart) = setup(1, QuaternionSide::Right);
        let mut s = RngStream::new(56, 0).rng();
        let p = chart.param(&chart.random_coords(&mut s)).unwrap();
        let frame = adapted_frame_at(&c, &chart, &p).unwrap();
        let f = christoffel(&c, &chart, &p, DEFAULT_FD_STEP).unwrap();
        for j in 0..4 {
            let field = delta_field(&c, &chart, j, DEFAULT_FD_STEP);
            for i in 0..4 {
                let mut expected = AmbientVector::zeros(8);
                for k in 0..4 {
                    expected.axpy(f.symbols[k][i][j], &frame.delta[k]);
                }
                assert!((&hbar(&c, &field, &p, &frame.delta[i]).unwrap() - &expected).max_abs() < 1e-6);
            }
            for a in Alpha::ALL {
                assert!(hbar(&c, &field, &p, &c.xi_at(&p, a)).unwrap().max_abs() < 1e-7);
            }
        }
    }

    #[test]
    fn ill_conditioned_metric_is_rejected() {
        let (c, chart) = setup(1, QuaternionSide::Right);
        // healthy point well inside the chart
        let p = chart.param(&ChartCoords { z: [0.1, 0.2, 0.3], x: vec![1.0, 0.0, 0.5, 0.0] }).unwrap();
        let f = christoffel(&c, &chart, &p, DEFAULT_FD_STEP).unwrap();
        assert!(f.condition >= 1.0 && f.condition < 10.0);
    }
}
