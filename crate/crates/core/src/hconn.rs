//! The H-connection
//!
//! ```text
//! Dbar_X Y = nabla_X Y - eta^a(X) nabla_Y xi_a - eta^a(Y) nabla_X xi_a + Omega^a(X, Y) xi_a
//! ```
//!
//! evaluated literally from Levi-Civita derivatives of the Reeb fields, and
//! an independent route that builds the same connection by splitting its
//! arguments into horizontal and vertical parts.

use crate::error::GeometryError;
use crate::field::{
    directional_derivative, eta_derivative, levi_civita, lie_bracket, ExtensionFamily, VectorField,
};
use crate::numerics::AmbientVector;
use crate::sphere::{Alpha, PointOnSphere, SphereContext, TangentAt};

/// `Dbar_x F` at `p`.
pub fn hbar(
    ctx: &SphereContext,
    field: &VectorField,
    p: &AmbientVector,
    x: &AmbientVector,
) -> Result<AmbientVector, GeometryError> {
    let y = field.eval(ctx, p)?;
    let mut out = levi_civita(ctx, field, p, x)?;
    for a in Alpha::ALL {
        let reeb = VectorField::reeb(a);
        out.axpy(-ctx.eta_at(p, a, x), &levi_civita(ctx, &reeb, p, &y)?);
        out.axpy(-ctx.eta_at(p, a, &y), &levi_civita(ctx, &reeb, p, x)?);
        out.axpy(ctx.omega_at(p, a, x, &y), &ctx.xi_at(p, a));
    }
    Ok(out)
}

/// An evaluated `Dbar_X F`.
#[derive(Clone, Debug, PartialEq)]
pub struct HConnectionEval {
    pub base: PointOnSphere,
    pub direction: TangentAt,
    pub field_id: String,
    pub value: TangentAt,
}

/// Typed form of [`hbar`].
pub fn hbar_eval(
    ctx: &SphereContext,
    field: &VectorField,
    p: &PointOnSphere,
    x: &TangentAt,
) -> Result<HConnectionEval, GeometryError> {
    x.check_base(p)?;
    let value = hbar(ctx, field, p.vector(), &x.v)?;
    Ok(HConnectionEval {
        base: p.clone(),
        direction: x.clone(),
        field_id: format!("{:?}", field.rule),
        value: TangentAt::new(p.clone(), value)?,
    })
}

/// The field `q -> Dbar_{Y(q)} Z` differentiated by finite differences.
pub fn hbar_field(ctx: &SphereContext, z: &VectorField, y: &VectorField, step: f64) -> VectorField {
    let (ctx, z, y) = (ctx.clone(), z.clone(), y.clone());
    VectorField::custom("hbar", step, move |q| hbar(&ctx, &z, q, &y.eval(&ctx, q)?))
}

/// Second route to `Dbar_x F`, by case split on vertical and horizontal parts:
///
/// ```text
/// Dbar_x F = h(nabla_{hx} hF) + sum_a eta^a(x) [xi_a, hF] + sum_b x(eta^b(F)) xi_b
/// ```
///
/// using `Dbar xi = 0`, `Dbar_{xi} hY = [xi, hY]` and the projected
/// Levi-Civita connection on horizontal arguments.
pub fn hbar_projection_oracle(
    ctx: &SphereContext,
    field: &VectorField,
    p: &AmbientVector,
    x: &AmbientVector,
) -> Result<AmbientVector, GeometryError> {
    let hf = VectorField::horizontal_of(field);
    let xh = ctx.horizontal_at(p, x);
    let mut out = ctx.horizontal_at(p, &levi_civita(ctx, &hf, p, &xh)?);
    for a in Alpha::ALL {
        let coeff = ctx.eta_at(p, a, x);
        if coeff != 0.0 {
            let br = lie_bracket(ctx, &VectorField::reeb(a), &hf, p)?;
            out.axpy(coeff, &ctx.horizontal_at(p, &br));
        }
        out.axpy(eta_derivative(ctx, a, field, p, x)?, &ctx.xi_at(p, a));
    }
    Ok(out)
}

/// `|x g(F, G) - g(Dbar_x F, G) - g(F, Dbar_x G)|`
pub fn hbar_metric_compat_residual(
    ctx: &SphereContext,
    f: &VectorField,
    g: &VectorField,
    p: &AmbientVector,
    x: &AmbientVector,
) -> Result<f64, GeometryError> {
    let fp = f.eval(ctx, p)?;
    let gp = g.eval(ctx, p)?;
    let derivative = directional_derivative(ctx, f, p, x)?.dot(&gp) + fp.dot(&directional_derivative(ctx, g, p, x)?);
    Ok((derivative - hbar(ctx, f, p, x)?.dot(&gp) - fp.dot(&hbar(ctx, g, p, x)?)).abs())
}

/// `T(x, y) = Dbar_x Y - Dbar_y X - [X, Y]` on extensions of `x`, `y`.
pub fn hbar_torsion(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    family: &ExtensionFamily,
) -> Result<AmbientVector, GeometryError> {
    let xf = family.extend(p, x);
    let yf = family.extend(p, y);
    let mut out = hbar(ctx, &yf, p, x)?;
    out -= &hbar(ctx, &xf, p, y)?;
    out -= &lie_bracket(ctx, &xf, &yf, p)?;
    Ok(out)
}

/// `2 sum_a Omega^a(x, y) xi_a`, the torsion predicted on every pair.
pub fn torsion_expected(ctx: &SphereContext, p: &AmbientVector, x: &AmbientVector, y: &AmbientVector) -> AmbientVector {
    let mut out = AmbientVector::zeros(p.len());
    for a in Alpha::ALL {
        out.axpy(2.0 * ctx.omega_at(p, a, x, y), &ctx.xi_at(p, a));
    }
    out
}

/// Max-norm defect of `[X, Y] = Dbar_X Y - Dbar_Y X - 2 Omega^a(X, Y) xi_a`.
pub fn bracket_identity_residual(
    ctx: &SphereContext,
    p: &AmbientVector,
    x: &AmbientVector,
    y: &AmbientVector,
    family: &ExtensionFamily,
) -> Result<f64, GeometryError> {
    let torsion = hbar_torsion(ctx, p, x, y, family)?;
    Ok((&torsion - &torsion_expected(ctx, p, x, y)).max_abs())
}

/// `(Dbar_x phi_a) y = Dbar_x(phi_a Y) - phi_a(Dbar_x Y)`.
pub fn phi_covariant_derivative(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    y: &AmbientVector,
    family: &ExtensionFamily,
) -> Result<AmbientVector, GeometryError> {
    let yf = family.extend(p, y);
    let lhs = hbar(ctx, &VectorField::phi_of(alpha, &yf), p, x)?;
    Ok(&lhs - &ctx.phi_at(p, alpha, &hbar(ctx, &yf, p, x)?))
}

/// Max-norm of [`phi_covariant_derivative`].
pub fn phi_parallel_residual(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    y: &AmbientVector,
    family: &ExtensionFamily,
) -> Result<f64, GeometryError> {
    Ok(phi_covariant_derivative(ctx, p, alpha, x, y, family)?.max_abs())
}
