//! Curvature of the sphere and of the H-connection.
//!
//! Four-tensors use the slot order `R(X, Y, Z, W) = g(R(X, Y) W, Z)`, so that
//! Ricci traces read `S(X, Y) = sum_i R(v_i, X, v_i, Y)`.

use crate::error::GeometryError;
use crate::field::{levi_civita, lie_bracket, ExtensionFamily, VectorField};
use crate::hconn::{hbar, hbar_field};
use crate::numerics::{gram_schmidt, AmbientVector, Sampler};
use crate::sphere::{Alpha, SphereContext};

/// Denominators below this reject the plane.
pub const DEGENERATE_PLANE: f64 = 1e-10;

/// Which index pairs the two-index terms of the curvature expansion run over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `alpha != beta` only.
    Distinct,
    /// Every `(alpha, beta)` including the diagonal.
    All,
}

/// How a curvature operator `R(X, Y) Z` is obtained.
#[derive(Clone, Debug)]
pub enum CurvatureRoute {
    /// Closed form of the round sphere.
    Sphere,
    /// Levi-Civita curvature from second covariant derivatives of extensions.
    SphereFromDefinition { family: ExtensionFamily, step: f64 },
    /// H-connection curvature from second covariant derivatives of extensions.
    HbarDirect { family: ExtensionFamily, step: f64 },
    /// H-connection curvature through its expansion in the sphere curvature.
    HbarExpansion(Pairing),
}

impl CurvatureRoute {
    pub fn hbar_direct(step: f64) -> Self {
        CurvatureRoute::HbarDirect { family: ExtensionFamily::Canonical, step }
    }

    pub fn is_levi_civita(&self) -> bool {
        matches!(self, CurvatureRoute::Sphere | CurvatureRoute::SphereFromDefinition { .. })
    }

    /// `R(x, y) z`.
    pub fn apply(
        &self,
        ctx: &SphereContext,
        p: &AmbientVector,
        x: &AmbientVector,
        y: &AmbientVector,
        z: &AmbientVector,
    ) -> Result<AmbientVector, GeometryError> {
        match self {
            CurvatureRoute::Sphere => Ok(riemann_sphere(x, y, z)),
            CurvatureRoute::SphereFromDefinition { family, step } => {
                riemann_from_definition(ctx, p, x, y, z, family, *step)
            }
            CurvatureRoute::HbarDirect { family, step } => rbar_direct(ctx, p, x, y, z, family, *step),
            CurvatureRoute::HbarExpansion(pairing) => Ok(rbar_expansion(ctx, p, x, y, z, *pairing)),
        }
    }

    /// `R(x, y, z, w) = g(R(x, y) w, z)`.
    pub fn quad(
        &self,
        ctx: &SphereContext,
        p: &AmbientVector,
        x: &AmbientVector,
        y: &AmbientVector,
        z: &AmbientVector,
        w: &AmbientVector,
    ) -> Result<f64, GeometryError> {
        Ok(self.apply(ctx, p, x, y, w)?.dot(z))
    }
}

/// `g(Y, Z) X - g(X, Z) Y`
pub fn riemann_sphere(x: &AmbientVector, y: &AmbientVector, z: &AmbientVector) -> AmbientVector {
    let mut out = x.scale(y.dot(z));
    out.axpy(-x.dot(z), y);
    out
}

fn second_derivative_curvature<C>(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    family: &ExtensionFamily,
    step: f64,
    connection: C,
) -> Result<AmbientVector, GeometryError>
where
    C: Fn(&SphereContext, &VectorField, &AmbientVector, &AmbientVector) -> Result<AmbientVector, GeometryError>
        + Clone
        + Send
        + Sync
        + 'static,
{
    let xf = family.extend(p, x);
    let yf = family.extend(p, y);
    let zf = family.extend(p, z);
    let nested = |outer: &VectorField| {
        let (c, zf, outer, conn) = (ctx.clone(), zf.clone(), outer.clone(), connection.clone());
        VectorField::custom("nested", step, move |q| conn(&c, &zf, q, &outer.eval(&c, q)?))
    };
    let mut out = connection(ctx, &nested(&yf), p, x)?;
    out -= &connection(ctx, &nested(&xf), p, y)?;
    out -= &connection(ctx, &zf, p, &lie_bracket(ctx, &xf, &yf, p)?)?;
    Ok(out)
}

/// `nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z` on extensions.
pub fn riemann_from_definition(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    family: &ExtensionFamily,
    step: f64,
) -> Result<AmbientVector, GeometryError> {
    second_derivative_curvature(ctx, p, x, y, z, family, step, |c, f, q, v| levi_civita(c, f, q, v))
}

/// `Dbar_X Dbar_Y Z - Dbar_Y Dbar_X Z - Dbar_[X,Y] Z` on extensions.
pub fn rbar_direct(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    family: &ExtensionFamily,
    step: f64,
) -> Result<AmbientVector, GeometryError> {
    let xf = family.extend(p, x);
    let yf = family.extend(p, y);
    let zf = family.extend(p, z);
    let mut out = hbar(ctx, &hbar_field(ctx, &zf, &yf, step), p, x)?;
    out -= &hbar(ctx, &hbar_field(ctx, &zf, &xf, step), p, y)?;
    out -= &hbar(ctx, &zf, p, &lie_bracket(ctx, &xf, &yf, p)?)?;
    Ok(out)
}

/// H-connection curvature written out in terms of the sphere curvature, with
/// the two-index terms over distinct pairs.
pub fn rbar_from_r(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
) -> AmbientVector {
    rbar_expansion(ctx, p, x, y, z, Pairing::Distinct)
}

/// The expansion with an explicit choice of index pairing.
pub fn rbar_expansion(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    pairing: Pairing,
) -> AmbientVector {
    let eta = |a, v: &AmbientVector| ctx.eta_at(p, a, v);
    let phi = |a, v: &AmbientVector| ctx.phi_at(p, a, v);
    let omega = |a, u: &AmbientVector, v: &AmbientVector| ctx.omega_at(p, a, u, v);

    let mut out = riemann_sphere(x, y, z);
    for a in Alpha::ALL {
        let (fx, fy, fz) = (phi(a, x), phi(a, y), phi(a, z));
        out.axpy(-2.0 * omega(a, y, x), &fz);
        out.axpy(-omega(a, z, x), &fy);
        out.axpy(omega(a, z, y), &fx);
        out.axpy(eta(a, x) * eta(a, z), y);
        out.axpy(-eta(a, y) * eta(a, z), x);
        out.axpy(eta(a, y) * x.dot(z) - eta(a, x) * y.dot(z), &ctx.xi_at(p, a));

        for b in Alpha::ALL {
            if pairing == Pairing::Distinct && a == b {
                continue;
            }
            out.axpy(-eta(a, z) * eta(b, y), &phi(b, &fx));
            out.axpy(eta(a, z) * eta(b, x), &phi(b, &fy));
            out.axpy(2.0 * eta(a, y) * eta(b, x), &phi(b, &fz));
            let vertical = 2.0 * eta(a, z) * omega(b, x, &fy) - eta(a, x) * omega(b, y, &fz)
                + eta(a, y) * omega(b, x, &fz);
            out.axpy(vertical, &ctx.xi_at(p, b));
            out.axpy(eta(a, y) * eta(b, &fz) + eta(a, z) * eta(b, &fy), &phi(b, x));
            out.axpy(-eta(a, x) * eta(b, &fz) - eta(a, z) * eta(b, &fx), &phi(b, y));
        }
    }
    out
}

/// One sampled curvature quadruple.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureQuad {
    pub base: AmbientVector,
    pub x: AmbientVector,
    pub y: AmbientVector,
    pub z: AmbientVector,
    pub w: AmbientVector,
    pub value_r: f64,
    pub value_rbar: f64,
    pub value_r0: f64,
}

impl CurvatureQuad {
    pub fn evaluate(
        ctx: &SphereContext,
        p: &AmbientVector,
        [x, y, z, w]: [AmbientVector; 4],
        rbar: &CurvatureRoute,
    ) -> Result<Self, GeometryError> {
        Ok(CurvatureQuad {
            value_r: CurvatureRoute::Sphere.quad(ctx, p, &x, &y, &z, &w)?,
            value_rbar: rbar.quad(ctx, p, &x, &y, &z, &w)?,
            value_r0: r0_model(ctx, p, 1.0, &x, &y, &z, &w),
            base: p.clone(),
            x,
            y,
            z,
            w,
        })
    }
}

/// Max defects of the four identity families of a curvature four-tensor.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IdentityDefects {
    pub antisymmetry: f64,
    pub bianchi: f64,
    pub pair_symmetry: f64,
    pub phi_invariance: f64,
}

impl IdentityDefects {
    pub fn max(&self) -> f64 {
        [self.antisymmetry, self.bianchi, self.pair_symmetry, self.phi_invariance]
            .into_iter()
            .fold(0.0, crate::numerics::max_residual)
    }
}

/// Identity defects of an arbitrary four-tensor `quad` on the arguments.
pub fn identity_defects<Q>(
    ctx: &SphereContext,
    p: &AmbientVector,
    [x, y, z, u]: [&AmbientVector; 4],
    quad: Q,
) -> Result<IdentityDefects, GeometryError>
where
    Q: Fn(&AmbientVector, &AmbientVector, &AmbientVector, &AmbientVector) -> Result<f64, GeometryError>,
{
    let base = quad(x, y, z, u)?;
    let antisymmetry = (base + quad(y, x, z, u)?).abs().max((base + quad(x, y, u, z)?).abs());
    let bianchi = (quad(x, y, u, z)? + quad(y, z, u, x)? + quad(z, x, u, y)?).abs();
    let pair_symmetry = (base - quad(z, u, x, y)?).abs();
    let mut phi_invariance: f64 = 0.0;
    for a in Alpha::ALL {
        let (fx, fy, fz, fu) = (ctx.phi_at(p, a, x), ctx.phi_at(p, a, y), ctx.phi_at(p, a, z), ctx.phi_at(p, a, u));
        phi_invariance = phi_invariance
            .max((quad(x, y, &fz, &fu)? - base).abs())
            .max((quad(&fx, &fy, z, u)? - base).abs());
    }
    Ok(IdentityDefects { antisymmetry, bianchi, pair_symmetry, phi_invariance })
}

/// Identity defects of the chosen curvature route.
pub fn curvature_identities(
    ctx: &SphereContext,
    p: &AmbientVector,
    args: [&AmbientVector; 4],
    route: &CurvatureRoute,
) -> Result<IdentityDefects, GeometryError> {
    identity_defects(ctx, p, args, |a, b, c, d| route.quad(ctx, p, a, b, c, d))
}

/// `max |Q(X, Y, phi_a Z, phi_a U) - Q(X, Y, Z, U)|` for one `alpha` and a
/// fixed first pair, with `Q` an arbitrary four-tensor.
pub fn phi_plane_invariance_with<Q>(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    y: &AmbientVector,
    [z, u]: [&AmbientVector; 2],
    quad: Q,
) -> Result<f64, GeometryError>
where
    Q: Fn(&AmbientVector, &AmbientVector, &AmbientVector, &AmbientVector) -> Result<f64, GeometryError>,
{
    let (fz, fu) = (ctx.phi_at(p, alpha, z), ctx.phi_at(p, alpha, u));
    let (fx, fy) = (ctx.phi_at(p, alpha, x), ctx.phi_at(p, alpha, y));
    let base = quad(x, y, z, u)?;
    Ok((quad(x, y, &fz, &fu)? - base).abs().max((quad(z, u, &fx, &fy)? - quad(z, u, x, y)?).abs()))
}

/// [`phi_plane_invariance_with`] for a curvature route.
pub fn phi_plane_invariance(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    y: &AmbientVector,
    zu: [&AmbientVector; 2],
    route: &CurvatureRoute,
) -> Result<f64, GeometryError> {
    phi_plane_invariance_with(ctx, p, alpha, x, y, zu, |a, b, c, d| route.quad(ctx, p, a, b, c, d))
}

/// `(Rbar(X, phi_1 X, phi_2 X, phi_3 X), R(X, phi_1 X, phi_2 X, phi_3 X))`
pub fn corollary_quad(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    route: &CurvatureRoute,
) -> Result<(f64, f64), GeometryError> {
    let [f1, f2, f3] = Alpha::ALL.map(|a| ctx.phi_at(p, a, x));
    Ok((
        route.quad(ctx, p, x, &f1, &f2, &f3)?,
        CurvatureRoute::Sphere.quad(ctx, p, x, &f1, &f2, &f3)?,
    ))
}

/// Orthonormal frame of the horizontal space at `p`.
pub fn horizontal_frame(ctx: &SphereContext, p: &AmbientVector, s: &mut Sampler) -> Result<Vec<AmbientVector>, GeometryError> {
    let raw: Vec<_> = (0..ctx.horizontal_dim())
        .map(|_| ctx.horizontal_at(p, &s.gaussian_vector(ctx.ambient_dim()).reject(p)))
        .collect();
    gram_schmidt(&raw)
}

/// Reeb fields followed by a horizontal orthonormal frame.
pub fn tangent_frame(ctx: &SphereContext, p: &AmbientVector, s: &mut Sampler) -> Result<Vec<AmbientVector>, GeometryError> {
    let mut frame: Vec<_> = Alpha::ALL.iter().map(|&a| ctx.xi_at(p, a)).collect();
    frame.extend(horizontal_frame(ctx, p, s)?);
    Ok(frame)
}

/// `sum_i R(v_i, X, v_i, Y)` over the given orthonormal frame.
pub fn ricci(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    frame: &[AmbientVector],
    route: &CurvatureRoute,
) -> Result<f64, GeometryError> {
    frame.iter().try_fold(0.0, |acc, v| Ok(acc + route.quad(ctx, p, v, x, v, y)?))
}

/// Ricci tensor of the horizontal distribution, traced over a horizontal frame.
pub fn ricci_bar(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    frame: &[AmbientVector],
    route: &CurvatureRoute,
) -> Result<f64, GeometryError> {
    ricci(ctx, p, x, y, frame, route)
}

/// `sign * g(R(X, Y) Y, X) / (|X|^2 |Y|^2 - g(X, Y)^2)`
pub fn sectional(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    route: &CurvatureRoute,
    sign: f64,
) -> Result<f64, GeometryError> {
    let den = x.dot(x) * y.dot(y) - x.dot(y).powi(2);
    if den < DEGENERATE_PLANE {
        return Err(GeometryError::DegeneratePlane(den));
    }
    Ok(sign * route.quad(ctx, p, x, y, x, y)? / den)
}

/// Holomorphic sectional curvature and whether the input had to be normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Holomorphic {
    pub value: f64,
    pub normalized: bool,
}

/// `Rbar(X, phi_a X, X, phi_a X)` for unit horizontal `X`.
pub fn holomorphic_sectional(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    route: &CurvatureRoute,
) -> Result<Holomorphic, GeometryError> {
    let norm = x.norm();
    if norm < DEGENERATE_PLANE {
        return Err(GeometryError::DegeneratePlane(norm));
    }
    let normalized = (norm - 1.0).abs() > 1e-12;
    let x = if normalized { x.scale(1.0 / norm) } else { x.clone() };
    let fx = ctx.phi_at(p, alpha, &x);
    Ok(Holomorphic { value: route.quad(ctx, p, &x, &fx, &x, &fx)?, normalized })
}

/// Sectional data for a plane.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionalResult {
    pub x: AmbientVector,
    pub y: AmbientVector,
    pub k: f64,
    pub k_bar: f64,
    /// Holomorphic sectional curvatures at the normalized horizontal part of `x`.
    pub h_alpha: [f64; 3],
}

impl SectionalResult {
    pub fn evaluate(
        ctx: &SphereContext,
        p: &AmbientVector,
        x: &AmbientVector,
        y: &AmbientVector,
        rbar: &CurvatureRoute,
        sign: f64,
    ) -> Result<Self, GeometryError> {
        let xh = ctx.horizontal_at(p, x);
        let mut h_alpha = [f64::NAN; 3];
        for a in Alpha::ALL {
            if let Ok(h) = holomorphic_sectional(ctx, p, a, &xh, rbar) {
                h_alpha[a.index()] = h.value;
            }
        }
        Ok(SectionalResult {
            x: x.clone(),
            y: y.clone(),
            k: sectional(ctx, p, x, y, &CurvatureRoute::Sphere, sign)?,
            k_bar: sectional(ctx, p, x, y, rbar, sign)?,
            h_alpha,
        })
    }
}

/// `k R_0(X, Y, Z, U)` with
///
/// ```text
/// 4 R_0 = g(X,Z) g(Y,U) - g(X,U) g(Y,Z)
///       + sum_a [ g(X, phi_a Z) g(Y, phi_a U) - g(X, phi_a U) g(Y, phi_a Z) + 2 g(X, phi_a Y) g(Z, phi_a U) ]
/// ```
pub fn r0_model(
    ctx: &SphereContext,
    p: &AmbientVector,
    k: f64,
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    u: &AmbientVector,
) -> f64 {
    let mut acc = x.dot(z) * y.dot(u) - x.dot(u) * y.dot(z);
    for a in Alpha::ALL {
        let (fy, fz, fu) = (ctx.phi_at(p, a, y), ctx.phi_at(p, a, z), ctx.phi_at(p, a, u));
        acc += x.dot(&fz) * y.dot(&fu) - x.dot(&fu) * y.dot(&fz) + 2.0 * x.dot(&fy) * z.dot(&fu);
    }
    k * acc / 4.0
}

/// Operator form of the model, `g(r0_operator(X, Y) Z, W) = k R_0(X, Y, W, Z)`.
pub fn r0_operator(
    ctx: &SphereContext,
    p: &AmbientVector,
    k: f64,
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
) -> AmbientVector {
    let mut out = riemann_sphere(x, y, z);
    for a in Alpha::ALL {
        let (fx, fy) = (ctx.phi_at(p, a, x), ctx.phi_at(p, a, y));
        out.axpy(fy.dot(z), &fx);
        out.axpy(-fx.dot(z), &fy);
        out.axpy(2.0 * x.dot(&fy), &ctx.phi_at(p, a, z));
    }
    out.scale(k / 4.0)
}

/// `sum_i R_0(v_i, X, v_i, Y)` over a horizontal frame.
pub fn ricci_of_r0(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    frame: &[AmbientVector],
) -> f64 {
    frame.iter().map(|v| r0_model(ctx, p, 1.0, v, x, v, y)).sum()
}

/// `H_a(X) - K(X, phi_a X)` with `K` the Levi-Civita sectional curvature.
pub fn cons_rela_check(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    rbar: &CurvatureRoute,
    sign: f64,
) -> Result<f64, GeometryError> {
    let h = holomorphic_sectional(ctx, p, alpha, x, rbar)?;
    let x = x.normalized();
    let k = sectional(ctx, p, &x, &ctx.phi_at(p, alpha, &x), &CurvatureRoute::Sphere, sign)?;
    Ok(h.value - k)
}

/// Both sides of the sectional comparison on the plane `{X, phi_a X}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectionalComparison {
    pub k_bar: f64,
    pub k: f64,
    pub rhs: f64,
}

impl SectionalComparison {
    pub fn defect(&self) -> f64 {
        (self.k_bar - self.rhs).abs()
    }
}

/// `Kbar = K + 3 + 4 (e_b e_c)^2 + 6 (e_b^4 + e_c^4) - 8 (e_b^2 + e_c^2)` with
/// `e_b = eta^b(X)`, `e_c = eta^c(X)` for the two indices other than `alpha`.
pub fn theorem_sec_check(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    rbar: &CurvatureRoute,
    sign: f64,
) -> Result<SectionalComparison, GeometryError> {
    let fx = ctx.phi_at(p, alpha, x);
    let k_bar = sectional(ctx, p, x, &fx, rbar, sign)?;
    let k = sectional(ctx, p, x, &fx, &CurvatureRoute::Sphere, sign)?;
    let b = alpha.next();
    let c = b.next();
    let (eb, ec) = (ctx.eta_at(p, b, x), ctx.eta_at(p, c, x));
    let rhs = k + 3.0 + 4.0 * (eb * ec).powi(2) + 6.0 * (eb.powi(4) + ec.powi(4)) - 8.0 * (eb * eb + ec * ec);
    Ok(SectionalComparison { k_bar, k, rhs })
}
