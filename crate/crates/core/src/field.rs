//! Vector fields on the sphere, their ambient directional derivatives, the
//! Levi-Civita connection by tangential projection, Lie brackets, and the
//! Lie-derivative tensors `h_ab`.
//!
//! A field is a [`FieldRule`] (how to evaluate it at a point) plus a
//! [`Strategy`] (how to differentiate it). Every built-in rule carries a
//! closed-form derivative; [`FieldRule::Custom`] fields are differentiated
//! by Richardson finite differences along `t -> normalize(p + t x)`.

use std::fmt;
use std::sync::Arc;

use crate::error::GeometryError;
use crate::numerics::{richardson_derivative, AmbientVector, Sampler, DEFAULT_FD_STEP};
use crate::sphere::{Alpha, SphereContext};

/// How a field's directional derivative is computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Strategy {
    Analytic,
    FiniteDifference { step: f64 },
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Analytic
    }
}

pub type CustomRule = Arc<dyn Fn(&AmbientVector) -> Result<AmbientVector, GeometryError> + Send + Sync>;

/// Evaluation rule of a vector field, as a map on the unit sphere.
#[derive(Clone)]
pub enum FieldRule {
    /// `q -> s - <s, q> q`
    Canonical(AmbientVector),
    /// `q -> v(q) - <v(q), q> q` with `v(q) = s + A (q - anchor)`.
    Affine {
        seed: AmbientVector,
        rows: Arc<Vec<AmbientVector>>,
        anchor: AmbientVector,
    },
    /// `q -> xi_a(q)`
    Reeb(Alpha),
    /// `q -> phi_a(F(q))`
    Phi(Alpha, Box<FieldRule>),
    /// `q -> h(F(q))`
    Horizontal(Box<FieldRule>),
    /// `q -> sum_k c_k F_k(q)`
    Combination(Vec<(f64, FieldRule)>),
    Custom { label: String, rule: CustomRule },
}

impl fmt::Debug for FieldRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldRule::Canonical(s) => f.debug_tuple("Canonical").field(s).finish(),
            FieldRule::Affine { seed, .. } => f.debug_struct("Affine").field("seed", seed).finish_non_exhaustive(),
            FieldRule::Reeb(a) => f.debug_tuple("Reeb").field(a).finish(),
            FieldRule::Phi(a, inner) => f.debug_tuple("Phi").field(a).field(inner).finish(),
            FieldRule::Horizontal(inner) => f.debug_tuple("Horizontal").field(inner).finish(),
            FieldRule::Combination(terms) => f.debug_tuple("Combination").field(terms).finish(),
            FieldRule::Custom { label, .. } => f.debug_tuple("Custom").field(label).finish(),
        }
    }
}

impl FieldRule {
    pub fn eval(&self, ctx: &SphereContext, q: &AmbientVector) -> Result<AmbientVector, GeometryError> {
        Ok(match self {
            FieldRule::Canonical(s) => s.reject(q),
            FieldRule::Affine { seed, rows, anchor } => affine_ambient(seed, rows, anchor, q).reject(q),
            FieldRule::Reeb(a) => ctx.xi_at(q, *a),
            FieldRule::Phi(a, inner) => ctx.phi_at(q, *a, &inner.eval(ctx, q)?),
            FieldRule::Horizontal(inner) => ctx.horizontal_at(q, &inner.eval(ctx, q)?),
            FieldRule::Combination(terms) => {
                let mut out = AmbientVector::zeros(q.len());
                for (c, rule) in terms {
                    out.axpy(*c, &rule.eval(ctx, q)?);
                }
                out
            }
            FieldRule::Custom { rule, .. } => rule(q)?,
        })
    }

    /// Closed-form derivative of `t -> F(c(t))` for any curve with
    /// `c(0) = q`, `c'(0) = x`.
    pub fn derivative(
        &self,
        ctx: &SphereContext,
        q: &AmbientVector,
        x: &AmbientVector,
    ) -> Result<AmbientVector, GeometryError> {
        Ok(match self {
            FieldRule::Canonical(s) => {
                // d/dt (s - <s,q> q) = -<s,x> q - <s,q> x
                let mut out = q.scale(-s.dot(x));
                out.axpy(-s.dot(q), x);
                out
            }
            FieldRule::Affine { seed, rows, anchor } => {
                let v = affine_ambient(seed, rows, anchor, q);
                let dv = mat_vec(rows, x);
                let mut out = dv.clone();
                out.axpy(-(dv.dot(q) + v.dot(x)), q);
                out.axpy(-v.dot(q), x);
                out
            }
            FieldRule::Reeb(a) => ctx.structure_apply(*a, x),
            FieldRule::Phi(a, inner) => {
                // phi_a(q) f = s (E f + <f, E q> q)
                let f = inner.eval(ctx, q)?;
                let df = inner.derivative(ctx, q, x)?;
                let eq = ctx.xi_at(q, *a);
                let mut out = ctx.structure_apply(*a, &df);
                out.axpy(df.dot(&eq) + f.dot(&ctx.structure_apply(*a, x)), q);
                out.axpy(f.dot(&eq), x);
                out.scale(ctx.sign_phi())
            }
            FieldRule::Horizontal(inner) => {
                let f = inner.eval(ctx, q)?;
                let df = inner.derivative(ctx, q, x)?;
                let mut out = df.clone();
                for b in Alpha::ALL {
                    let eq = ctx.xi_at(q, b);
                    let ex = ctx.structure_apply(b, x);
                    out.axpy(-(df.dot(&eq) + f.dot(&ex)), &eq);
                    out.axpy(-f.dot(&eq), &ex);
                }
                out
            }
            FieldRule::Combination(terms) => {
                let mut out = AmbientVector::zeros(q.len());
                for (c, rule) in terms {
                    out.axpy(*c, &rule.derivative(ctx, q, x)?);
                }
                out
            }
            FieldRule::Custom { label, .. } => return Err(GeometryError::NoAnalyticDerivative(label.clone())),
        })
    }

    fn has_analytic_derivative(&self) -> bool {
        match self {
            FieldRule::Custom { .. } => false,
            FieldRule::Phi(_, inner) | FieldRule::Horizontal(inner) => inner.has_analytic_derivative(),
            FieldRule::Combination(terms) => terms.iter().all(|(_, r)| r.has_analytic_derivative()),
            _ => true,
        }
    }
}

fn mat_vec(rows: &[AmbientVector], x: &AmbientVector) -> AmbientVector {
    AmbientVector::from_vec(rows.iter().map(|r| r.dot(x)).collect())
}

fn affine_ambient(seed: &AmbientVector, rows: &[AmbientVector], anchor: &AmbientVector, q: &AmbientVector) -> AmbientVector {
    seed + &mat_vec(rows, &(q - anchor))
}

/// A vector field on the sphere with its differentiation strategy.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub rule: FieldRule,
    pub strategy: Strategy,
}

impl VectorField {
    pub fn new(rule: FieldRule) -> Self {
        let strategy = if rule.has_analytic_derivative() {
            Strategy::Analytic
        } else {
            Strategy::FiniteDifference { step: DEFAULT_FD_STEP }
        };
        Self { rule, strategy }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Tangential projection of the constant ambient field `seed`.
    pub fn canonical(seed: AmbientVector) -> Self {
        Self::new(FieldRule::Canonical(seed))
    }

    pub fn reeb(alpha: Alpha) -> Self {
        Self::new(FieldRule::Reeb(alpha))
    }

    pub fn phi_of(alpha: Alpha, field: &VectorField) -> Self {
        Self {
            rule: FieldRule::Phi(alpha, Box::new(field.rule.clone())),
            strategy: field.strategy,
        }
    }

    pub fn horizontal_of(field: &VectorField) -> Self {
        Self {
            rule: FieldRule::Horizontal(Box::new(field.rule.clone())),
            strategy: field.strategy,
        }
    }

    /// Field given by an arbitrary rule, differentiated by finite differences.
    pub fn custom<F>(label: impl Into<String>, step: f64, rule: F) -> Self
    where
        F: Fn(&AmbientVector) -> Result<AmbientVector, GeometryError> + Send + Sync + 'static,
    {
        Self {
            rule: FieldRule::Custom {
                label: label.into(),
                rule: Arc::new(rule),
            },
            strategy: Strategy::FiniteDifference { step },
        }
    }

    pub fn eval(&self, ctx: &SphereContext, q: &AmbientVector) -> Result<AmbientVector, GeometryError> {
        self.rule.eval(ctx, q)
    }
}

/// Families of extensions of a tangent vector at `p` to a field near `p`.
#[derive(Clone, Debug)]
pub enum ExtensionFamily {
    /// Tangential projection of the constant ambient field.
    Canonical,
    /// Tangential projection of `v + A (q - p)` for a fixed matrix `A`.
    Affine(Arc<Vec<AmbientVector>>),
}

impl ExtensionFamily {
    /// Affine family with a Gaussian matrix drawn from `s`.
    pub fn random_affine(dim: usize, s: &mut Sampler) -> Self {
        ExtensionFamily::Affine(Arc::new((0..dim).map(|_| s.gaussian_vector(dim)).collect()))
    }

    pub fn extend(&self, p: &AmbientVector, v: &AmbientVector) -> VectorField {
        match self {
            ExtensionFamily::Canonical => VectorField::canonical(v.clone()),
            ExtensionFamily::Affine(rows) => VectorField::new(FieldRule::Affine {
                seed: v.clone(),
                rows: Arc::clone(rows),
                anchor: p.clone(),
            }),
        }
    }
}

/// `D_x F` at `p`: derivative of `t -> F(normalize(p + t x))` at `t = 0`.
pub fn directional_derivative(
    ctx: &SphereContext,
    field: &VectorField,
    p: &AmbientVector,
    x: &AmbientVector,
) -> Result<AmbientVector, GeometryError> {
    match field.strategy {
        Strategy::Analytic => field.rule.derivative(ctx, p, x),
        Strategy::FiniteDifference { step } => {
            richardson_derivative(|t| field.eval(ctx, &(p + &x.scale(t)).normalized()), 0.0, step)
        }
    }
}

/// Levi-Civita connection of the round metric: `nabla_x F = P_p(D_x F)`.
pub fn levi_civita(
    ctx: &SphereContext,
    field: &VectorField,
    p: &AmbientVector,
    x: &AmbientVector,
) -> Result<AmbientVector, GeometryError> {
    Ok(directional_derivative(ctx, field, p, x)?.reject(p))
}

/// `D_F G - D_G F` at `p`, without projection.
pub fn lie_bracket_ambient(
    ctx: &SphereContext,
    f: &VectorField,
    g: &VectorField,
    p: &AmbientVector,
) -> Result<AmbientVector, GeometryError> {
    let fp = f.eval(ctx, p)?;
    let gp = g.eval(ctx, p)?;
    Ok(&directional_derivative(ctx, g, p, &fp)? - &directional_derivative(ctx, f, p, &gp)?)
}

/// Lie bracket `[F, G](p)`, projected to the tangent space. The normal
/// component of [`lie_bracket_ambient`] vanishes for tangent fields.
pub fn lie_bracket(
    ctx: &SphereContext,
    f: &VectorField,
    g: &VectorField,
    p: &AmbientVector,
) -> Result<AmbientVector, GeometryError> {
    Ok(lie_bracket_ambient(ctx, f, g, p)?.reject(p))
}

/// `x(<F, G>)` at `p`.
pub fn metric_derivative(
    ctx: &SphereContext,
    f: &VectorField,
    g: &VectorField,
    p: &AmbientVector,
    x: &AmbientVector,
) -> Result<f64, GeometryError> {
    let df = directional_derivative(ctx, f, p, x)?;
    let dg = directional_derivative(ctx, g, p, x)?;
    Ok(df.dot(&g.eval(ctx, p)?) + f.eval(ctx, p)?.dot(&dg))
}

/// `x(eta^a(F))` at `p`.
pub fn eta_derivative(
    ctx: &SphereContext,
    alpha: Alpha,
    f: &VectorField,
    p: &AmbientVector,
    x: &AmbientVector,
) -> Result<f64, GeometryError> {
    let df = directional_derivative(ctx, f, p, x)?;
    Ok(df.dot(&ctx.xi_at(p, alpha)) + f.eval(ctx, p)?.dot(&ctx.structure_apply(alpha, x)))
}

/// `d eta^a(x, y) = 1/2 (x eta(Y) - y eta(X) - eta([X, Y]))` on the given
/// extensions of `x` and `y`.
pub fn d_eta(
    ctx: &SphereContext,
    alpha: Alpha,
    xf: &VectorField,
    yf: &VectorField,
    p: &AmbientVector,
) -> Result<f64, GeometryError> {
    let x = xf.eval(ctx, p)?;
    let y = yf.eval(ctx, p)?;
    let bracket = lie_bracket(ctx, xf, yf, p)?;
    Ok(0.5 * (eta_derivative(ctx, alpha, yf, p, &x)? - eta_derivative(ctx, alpha, xf, p, &y)? - ctx.eta_at(p, alpha, &bracket)))
}

/// Max-norm of `(nabla_x phi_a) Y - g(x, Y) xi_a + eta^a(Y) x`.
pub fn sasaki_condition_residual(
    ctx: &SphereContext,
    p: &AmbientVector,
    alpha: Alpha,
    x: &AmbientVector,
    y_field: &VectorField,
) -> Result<f64, GeometryError> {
    let y = y_field.eval(ctx, p)?;
    let phi_y = VectorField::phi_of(alpha, y_field);
    let mut lhs = levi_civita(ctx, &phi_y, p, x)?;
    lhs -= &ctx.phi_at(p, alpha, &levi_civita(ctx, y_field, p, x)?);
    lhs.axpy(-x.dot(&y), &ctx.xi_at(p, alpha));
    lhs.axpy(ctx.eta_at(p, alpha, &y), x);
    Ok(lhs.max_abs())
}

/// `h_ab(x) = 1/2 (L_{xi_a} phi_b)(x) = 1/2 ([xi_a, phi_b X] - phi_b [xi_a, X])`.
pub fn h_tensor(
    ctx: &SphereContext,
    p: &AmbientVector,
    a: Alpha,
    b: Alpha,
    x: &AmbientVector,
    family: &ExtensionFamily,
) -> Result<AmbientVector, GeometryError> {
    let xf = family.extend(p, x);
    let xi = VectorField::reeb(a);
    let first = lie_bracket(ctx, &xi, &VectorField::phi_of(b, &xf), p)?;
    let second = ctx.phi_at(p, b, &lie_bracket(ctx, &xi, &xf, p)?);
    Ok((&first - &second).scale(0.5))
}

/// Closed form of `h_ab` on a 3-Sasakian manifold:
/// zero on the diagonal, `h_ab = phi_c` for every even permutation `(a, b, c)`.
pub fn h_tensor_expected(ctx: &SphereContext, p: &AmbientVector, a: Alpha, b: Alpha, x: &AmbientVector) -> AmbientVector {
    if a == b {
        AmbientVector::zeros(x.len())
    } else if b == a.next() {
        ctx.phi_at(p, b.next(), x)
    } else {
        ctx.phi_at(p, a.next(), x).scale(-1.0)
    }
}
