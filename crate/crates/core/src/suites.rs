//! The verification suites and the runner that executes them.
//!
//! Every check draws its samples from its own seeded stream, evaluates them in
//! parallel, and folds the per-sample values sequentially, so the residuals do
//! not depend on the worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::calibration::{calibrate, mixed_triple, CalibrationRecord};
use crate::chart::{
    adapted_frame_at, bracket_coords, bracket_expected, bundle_like_residual, christoffel, christoffel_derivative_along,
    delta_field, levi_civita_frame_residual, FoliatedChart,
};
use crate::config::{ConfigError, RunConfig, Suite, Tier};
use crate::curvature::{
    corollary_quad, cons_rela_check, curvature_identities, holomorphic_sectional, horizontal_frame, identity_defects,
    phi_plane_invariance, phi_plane_invariance_with, r0_model, ricci, ricci_bar, ricci_of_r0, riemann_sphere, sectional,
    tangent_frame, theorem_sec_check, CurvatureRoute, Pairing,
};
use crate::error::GeometryError;
use crate::field::{
    d_eta, directional_derivative, h_tensor, h_tensor_expected, levi_civita, lie_bracket, metric_derivative,
    sasaki_condition_residual, ExtensionFamily, FieldRule, Strategy, VectorField,
};
use crate::hconn::{
    bracket_identity_residual, hbar, hbar_metric_compat_residual, hbar_projection_oracle, hbar_torsion,
    phi_parallel_residual, torsion_expected,
};
use crate::numerics::{gram_defect, max_residual, AmbientVector, RngStream, Sampler};
use crate::report::{CheckResult, Summary, SuiteReport};
use crate::sphere::{Alpha, SphereContext, TangentAt};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("check `{check}` failed to evaluate: {source}")]
    Numeric { check: String, source: GeometryError },
}

/// How per-sample values become one residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduce {
    /// Largest absolute value.
    MaxAbs,
    /// `max - min` of the raw values.
    Spread,
}

/// Everything a check may read.
pub struct Env {
    pub ctx: SphereContext,
    pub chart: FoliatedChart,
    pub step: f64,
    pub sectional_sign: f64,
    pub pairing: Pairing,
}

impl Env {
    fn n(&self) -> usize {
        self.ctx.n()
    }

    fn direct(&self) -> CurvatureRoute {
        CurvatureRoute::hbar_direct(self.step)
    }

    fn expansion(&self) -> CurvatureRoute {
        CurvatureRoute::HbarExpansion(self.pairing)
    }

    fn point(&self, s: &mut Sampler) -> AmbientVector {
        self.ctx.random_point(s).into_vector()
    }

    /// A point well inside the chart domain.
    fn chart_point(&self, s: &mut Sampler) -> Result<AmbientVector, GeometryError> {
        self.chart.param(&self.chart.random_coords(s))
    }
}

type Eval = fn(&Env, &mut Sampler, u32) -> Result<Vec<f64>, GeometryError>;

pub struct Check {
    pub name: &'static str,
    /// The identity being tested, as a formula.
    pub formula: &'static str,
    pub tier: Tier,
    pub reduce: Reduce,
    eval: Eval,
}

const fn check(name: &'static str, formula: &'static str, tier: Tier, eval: Eval) -> Check {
    Check { name, formula, tier, reduce: Reduce::MaxAbs, eval }
}

impl Check {
    const fn spread(mut self) -> Self {
        self.reduce = Reduce::Spread;
        self
    }

    /// Evaluates the check over its samples and reduces to one residual.
    pub fn residual(&self, env: &Env, seed: u64, samples: u32) -> Result<f64, GeometryError> {
        let values: Vec<Result<Vec<f64>, GeometryError>> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut s = RngStream::for_sample(seed, self.name, i).rng();
                (self.eval)(env, &mut s, i)
            })
            .collect();
        let mut acc = match self.reduce {
            Reduce::MaxAbs => (0.0, 0.0),
            Reduce::Spread => (f64::INFINITY, f64::NEG_INFINITY),
        };
        for v in values {
            for x in v? {
                acc = match self.reduce {
                    Reduce::MaxAbs => (max_residual(acc.0, x.abs()), 0.0),
                    Reduce::Spread if x.is_nan() || acc.0.is_nan() => (f64::NAN, f64::NAN),
                    Reduce::Spread => (acc.0.min(x), acc.1.max(x)),
                };
            }
        }
        Ok(match self.reduce {
            Reduce::MaxAbs => acc.0,
            Reduce::Spread if acc.0.is_nan() => f64::NAN,
            Reduce::Spread if acc.0 > acc.1 => 0.0,
            Reduce::Spread => acc.1 - acc.0,
        })
    }
}

fn per_alpha<F>(mut f: F) -> Result<Vec<f64>, GeometryError>
where
    F: FnMut(Alpha) -> Result<f64, GeometryError>,
{
    Alpha::ALL.into_iter().map(&mut f).collect()
}

fn mixed_field(env: &Env, s: &mut Sampler) -> VectorField {
    let dim = env.ctx.ambient_dim();
    VectorField::new(FieldRule::Combination(vec![
        (1.0, FieldRule::Canonical(s.gaussian_vector(dim))),
        (s.normal(), FieldRule::Reeb(Alpha::ALL[s.uniform(0.0, 3.0) as usize % 3])),
    ]))
}

// ---------------------------------------------------------------- axioms

fn axioms() -> Vec<Check> {
    vec![
        check("axioms.phi_squared", "phi_a^2 X = -X + eta^a(X) xi_a", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let x = e.ctx.random_tangent(&p, s);
            per_alpha(|a| {
                let mut d = e.ctx.phi_at(&p, a, &e.ctx.phi_at(&p, a, &x));
                d += &x;
                d.axpy(-e.ctx.eta_at(&p, a, &x), &e.ctx.xi_at(&p, a));
                Ok(d.max_abs())
            })
        }),
        check("axioms.reeb_normalization", "eta^a(xi_b) = delta_ab, phi_a xi_a = 0", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let mut out = Vec::new();
            for a in Alpha::ALL {
                out.push(e.ctx.phi_at(&p, a, &e.ctx.xi_at(&p, a)).max_abs());
                for b in Alpha::ALL {
                    out.push(e.ctx.eta_at(&p, a, &e.ctx.xi_at(&p, b)) - f64::from(a == b));
                }
            }
            Ok(out)
        }),
        check(
            "axioms.metric_compatibility",
            "g(phi_a X, phi_a Y) = g(X, Y) - eta^a(X) eta^a(Y)",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
                per_alpha(|a| {
                    let lhs = e.ctx.phi_at(&p, a, &x).dot(&e.ctx.phi_at(&p, a, &y));
                    Ok(lhs - x.dot(&y) + e.ctx.eta_at(&p, a, &x) * e.ctx.eta_at(&p, a, &y))
                })
            },
        ),
        check("axioms.omega_is_d_eta", "Omega^a(X, Y) = d eta^a(X, Y)", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
            let (xf, yf) = (VectorField::canonical(x.clone()), VectorField::canonical(y.clone()));
            per_alpha(|a| Ok(d_eta(&e.ctx, a, &xf, &yf, &p)? - e.ctx.omega_at(&p, a, &x, &y)))
        }),
        check("axioms.reeb_derivative", "nabla_X xi_a = -phi_a X", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let x = e.ctx.random_tangent(&p, s);
            per_alpha(|a| Ok((&levi_civita(&e.ctx, &VectorField::reeb(a), &p, &x)? + &e.ctx.phi_at(&p, a, &x)).max_abs()))
        }),
        check(
            "axioms.sasaki_condition",
            "(nabla_X phi_a) Y = g(X, Y) xi_a - eta^a(Y) X",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let yf = VectorField::canonical(s.gaussian_vector(e.ctx.ambient_dim()));
                per_alpha(|a| sasaki_condition_residual(&e.ctx, &p, a, &x, &yf))
            },
        ),
        check(
            "axioms.quaternion_relations",
            "phi_c = phi_a phi_b - eta^b (x) xi_a = -phi_b phi_a + eta^a (x) xi_b, xi_c = phi_a xi_b, eta^c = eta^a o phi_b",
            Tier::Closed,
            |e, s, _| {
                let p = e.ctx.random_point(s);
                let t = (0..2)
                    .map(|_| TangentAt::new(p.clone(), e.ctx.random_tangent(p.vector(), s)))
                    .collect::<Result<Vec<_>, _>>()?;
                let d = e.ctx.check_three_sasakian_relations(&p, &t);
                Ok(vec![d.xi, d.eta, d.phi])
            },
        ),
        check("axioms.reeb_brackets", "[xi_a, xi_b] = 2 xi_c", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            Alpha::even_permutations()
                .into_iter()
                .map(|(a, b, c)| {
                    let br = lie_bracket(&e.ctx, &VectorField::reeb(a), &VectorField::reeb(b), &p)?;
                    Ok((&br - &e.ctx.xi_at(&p, c).scale(2.0)).max_abs())
                })
                .collect()
        }),
        check("axioms.adapted_frame_orthonormal", "g = diag(I_3, I_4n) on (xi_a, v_i)", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            Ok(vec![gram_defect(&tangent_frame(&e.ctx, &p, s)?)])
        }),
    ]
}

// ---------------------------------------------------------------- field calculus

fn field_calculus() -> Vec<Check> {
    vec![
        check("field-calculus.killing", "g(nabla_X xi_a, Y) + g(X, nabla_Y xi_a) = 0", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
            per_alpha(|a| {
                let xi = VectorField::reeb(a);
                Ok(levi_civita(&e.ctx, &xi, &p, &x)?.dot(&y) + x.dot(&levi_civita(&e.ctx, &xi, &p, &y)?))
            })
        }),
        check(
            "field-calculus.levi_civita_metric",
            "X g(F, G) = g(nabla_X F, G) + g(F, nabla_X G)",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let f = mixed_field(e, s);
                let g = VectorField::phi_of(Alpha::J, &VectorField::canonical(s.gaussian_vector(e.ctx.ambient_dim())));
                let lhs = metric_derivative(&e.ctx, &f, &g, &p, &x)?;
                let rhs = levi_civita(&e.ctx, &f, &p, &x)?.dot(&g.eval(&e.ctx, &p)?)
                    + f.eval(&e.ctx, &p)?.dot(&levi_civita(&e.ctx, &g, &p, &x)?);
                Ok(vec![lhs - rhs])
            },
        ),
        check(
            "field-calculus.levi_civita_torsion_free",
            "nabla_F G - nabla_G F = [F, G]",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let f = mixed_field(e, s);
                let g = VectorField::horizontal_of(&VectorField::canonical(s.gaussian_vector(e.ctx.ambient_dim())));
                let (fp, gp) = (f.eval(&e.ctx, &p)?, g.eval(&e.ctx, &p)?);
                let t = &(&levi_civita(&e.ctx, &g, &p, &fp)? - &levi_civita(&e.ctx, &f, &p, &gp)?)
                    - &lie_bracket(&e.ctx, &f, &g, &p)?;
                Ok(vec![t.max_abs()])
            },
        ),
        check(
            "field-calculus.finite_difference_route",
            "D_X F (difference quotient) = D_X F (closed form)",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let base = ExtensionFamily::random_affine(e.ctx.ambient_dim(), s).extend(&p, &e.ctx.random_tangent(&p, s));
                let f = VectorField::horizontal_of(&VectorField::phi_of(Alpha::K, &base));
                let analytic = directional_derivative(&e.ctx, &f, &p, &x)?;
                let numeric = directional_derivative(
                    &e.ctx,
                    &f.clone().with_strategy(Strategy::FiniteDifference { step: e.step }),
                    &p,
                    &x,
                )?;
                Ok(vec![(&analytic - &numeric).max_abs()])
            },
        ),
        check(
            "field-calculus.h_tensor",
            "h_ab = (L_{xi_a} phi_b) / 2 = phi_c for (a, b, c) even, h_aa = 0",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let mut out = Vec::new();
                for a in Alpha::ALL {
                    for b in Alpha::ALL {
                        let got = h_tensor(&e.ctx, &p, a, b, &x, &ExtensionFamily::Canonical)?;
                        out.push((&got - &h_tensor_expected(&e.ctx, &p, a, b, &x)).max_abs());
                    }
                }
                Ok(out)
            },
        ),
        check(
            "field-calculus.extension_independence",
            "h_ab(X) independent of the extension of X",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let affine = ExtensionFamily::random_affine(e.ctx.ambient_dim(), s);
                let mut out = Vec::new();
                for a in Alpha::ALL {
                    for b in Alpha::ALL {
                        let c = h_tensor(&e.ctx, &p, a, b, &x, &ExtensionFamily::Canonical)?;
                        let f = h_tensor(&e.ctx, &p, a, b, &x, &affine)?;
                        out.push((&c - &f).max_abs());
                    }
                }
                Ok(out)
            },
        ),
    ]
}

// ---------------------------------------------------------------- H-connection

fn h_connection() -> Vec<Check> {
    vec![
        check(
            "h-connection.projection_route",
            "nabla-bar_X F = h(nabla_{hX} hF) + eta^a(X) h[xi_a, hF] + X(eta^b(F)) xi_b",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let f = mixed_field(e, s);
                Ok(vec![(&hbar(&e.ctx, &f, &p, &x)? - &hbar_projection_oracle(&e.ctx, &f, &p, &x)?).max_abs()])
            },
        ),
        check(
            "h-connection.preserves_splitting",
            "nabla-bar xi_a = 0, nabla-bar_X hF horizontal",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let hf = VectorField::horizontal_of(&mixed_field(e, s));
                let mut out = per_alpha(|a| Ok(hbar(&e.ctx, &VectorField::reeb(a), &p, &x)?.max_abs()))?;
                let v = hbar(&e.ctx, &hf, &p, &x)?;
                out.push((&v - &e.ctx.horizontal_at(&p, &v)).max_abs());
                Ok(out)
            },
        ),
        check(
            "h-connection.metric",
            "X g(F, G) = g(nabla-bar_X F, G) + g(F, nabla-bar_X G)",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_tangent(&p, s);
                let f = mixed_field(e, s);
                let g = VectorField::phi_of(Alpha::I, &mixed_field(e, s));
                Ok(vec![hbar_metric_compat_residual(&e.ctx, &f, &g, &p, &x)?])
            },
        ),
        check("h-connection.torsion", "T(X, Y) = 2 Omega^a(X, Y) xi_a", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
            let t = hbar_torsion(&e.ctx, &p, &x, &y, &ExtensionFamily::Canonical)?;
            Ok(vec![(&t - &torsion_expected(&e.ctx, &p, &x, &y)).max_abs()])
        }),
        check(
            "h-connection.torsion_extension_independence",
            "T(X, Y) independent of the extensions of X, Y",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
                let affine = ExtensionFamily::random_affine(e.ctx.ambient_dim(), s);
                let a = hbar_torsion(&e.ctx, &p, &x, &y, &ExtensionFamily::Canonical)?;
                let b = hbar_torsion(&e.ctx, &p, &x, &y, &affine)?;
                Ok(vec![(&a - &b).max_abs()])
            },
        ),
        check(
            "h-connection.bracket_identity",
            "[X, Y] = nabla-bar_X Y - nabla-bar_Y X - 2 Omega^a(X, Y) xi_a",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
                let affine = ExtensionFamily::random_affine(e.ctx.ambient_dim(), s);
                Ok(vec![bracket_identity_residual(&e.ctx, &p, &x, &y, &affine)?])
            },
        ),
        check("h-connection.phi_parallel", "(nabla-bar_X phi_a) Y = 0 on H", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_horizontal(&p, s), e.ctx.random_horizontal(&p, s));
            per_alpha(|a| phi_parallel_residual(&e.ctx, &p, a, &x, &y, &ExtensionFamily::Canonical))
        }),
    ]
}

// ---------------------------------------------------------------- foliated chart

fn foliated_chart() -> Vec<Check> {
    vec![
        check(
            "foliated-chart.consistency",
            "p(z(p), x(p)) = p and chart frame matches the ambient structure",
            Tier::Closed,
            |e, s, _| {
                let c = e.chart.random_coords(s);
                let p = e.chart.param(&c)?;
                let back = e.chart.param(&e.chart.inverse(&p)?)?;
                let frame = adapted_frame_at(&e.ctx, &e.chart, &p)?;
                let mut out = vec![(&back - &p).max_abs(), (p.norm() - 1.0).abs()];
                for d in &frame.delta {
                    out.push(d.dot(&p));
                    out.extend(Alpha::ALL.map(|a| e.ctx.eta_at(&p, a, d)));
                }
                Ok(out)
            },
        ),
        check("foliated-chart.block_metric", "g = diag(I_3, g_ij) on (xi_a, delta_i)", Tier::Closed, |e, s, _| {
            let p = e.chart_point(s)?;
            Ok(vec![adapted_frame_at(&e.ctx, &e.chart, &p)?.block_defect(&e.ctx)])
        }),
        check(
            "foliated-chart.bracket_reduction",
            "[delta_i, delta_j] = -2 Omega^a(delta_i, delta_j) xi_a",
            Tier::Fd,
            |e, s, _| {
                let p = e.chart_point(s)?;
                let frame = adapted_frame_at(&e.ctx, &e.chart, &p)?;
                let m = frame.delta.len();
                let mut out = Vec::new();
                for i in 0..m {
                    for j in i + 1..m {
                        let got = bracket_coords(&e.ctx, &e.chart, &p, i, j, e.step)?;
                        out.push((&got - &bracket_expected(&e.ctx, &frame, i, j)).max_abs());
                    }
                }
                Ok(out)
            },
        ),
        check(
            "foliated-chart.levi_civita_frame",
            "nabla_{delta_i} delta_j = F^k_ij delta_k - Omega^a_ij xi_a",
            Tier::Fd,
            |e, s, _| {
                let p = e.chart_point(s)?;
                Ok(vec![levi_civita_frame_residual(&e.ctx, &e.chart, &p, e.step)?])
            },
        ),
        check(
            "foliated-chart.hbar_frame",
            "nabla-bar_{delta_i} delta_j = F^k_ij delta_k",
            Tier::Fd,
            |e, s, _| {
                let p = e.chart_point(s)?;
                let frame = adapted_frame_at(&e.ctx, &e.chart, &p)?;
                let f = christoffel(&e.ctx, &e.chart, &p, e.step)?;
                let m = frame.delta.len();
                let mut out = vec![f.symmetry_defect()];
                for j in 0..m {
                    let field = delta_field(&e.ctx, &e.chart, j, e.step);
                    for i in 0..m {
                        let mut expected = AmbientVector::zeros(p.len());
                        for k in 0..m {
                            expected.axpy(f.symbols[k][i][j], &frame.delta[k]);
                        }
                        out.push((&hbar(&e.ctx, &field, &p, &frame.delta[i])? - &expected).max_abs());
                    }
                }
                Ok(out)
            },
        ),
        check("foliated-chart.bundle_like", "xi_a(g_ij) = 0", Tier::Fd, |e, s, _| {
            let p = e.chart_point(s)?;
            Ok(vec![bundle_like_residual(&e.ctx, &e.chart, &p, e.step)?.metric])
        }),
        check("foliated-chart.totally_geodesic", "h(nabla_{xi_a} xi_b) = 0", Tier::Closed, |e, s, _| {
            let p = e.chart_point(s)?;
            Ok(vec![bundle_like_residual(&e.ctx, &e.chart, &p, e.step)?.totally_geodesic])
        }),
        check("foliated-chart.christoffel_along_leaves", "xi_a(F^k_ij) = 0", Tier::Fd, |e, s, _| {
            let p = e.chart_point(s)?;
            per_alpha(|a| Ok(christoffel_derivative_along(&e.ctx, &e.chart, &p, &e.ctx.xi_at(&p, a), e.step)?.max_abs()))
        }),
    ]
}

// ---------------------------------------------------------------- curvature

fn horizontal4(e: &Env, p: &AmbientVector, s: &mut Sampler) -> [AmbientVector; 4] {
    [0; 4].map(|_| e.ctx.random_horizontal(p, s))
}

fn rbar_gap(e: &Env, p: &AmbientVector, [x, y, z]: [&AmbientVector; 3]) -> Result<f64, GeometryError> {
    let d = e.direct().apply(&e.ctx, p, x, y, z)?;
    Ok((&d - &e.expansion().apply(&e.ctx, p, x, y, z)?).max_abs())
}

fn curvature() -> Vec<Check> {
    vec![
        check(
            "curvature.sphere_from_definition",
            "nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z = g(Y, Z) X - g(X, Z) Y",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let [x, y, z] = [0; 3].map(|_| e.ctx.random_tangent(&p, s));
                let route = CurvatureRoute::SphereFromDefinition { family: ExtensionFamily::Canonical, step: e.step };
                Ok(vec![(&route.apply(&e.ctx, &p, &x, &y, &z)? - &riemann_sphere(&x, &y, &z)).max_abs()])
            },
        ),
        check(
            "curvature.rbar_routes_tangent",
            "R-bar(X, Y) Z from nabla-bar = R-bar(X, Y) Z expanded in R, X, Y, Z in TM",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let [x, y, z] = [0; 3].map(|_| e.ctx.random_tangent(&p, s));
                let [v1, v2] = [Alpha::I, Alpha::J].map(|a| e.ctx.xi_at(&p, a));
                // the all-vertical sector is part of TM and is evaluated on every sample
                Ok(vec![rbar_gap(e, &p, [&x, &y, &z])?, rbar_gap(e, &p, [&v1, &v2, &v1])?])
            },
        ),
        check(
            "curvature.rbar_routes_horizontal",
            "R-bar(X, Y) Z from nabla-bar = R-bar(X, Y) Z expanded in R, X, Y, Z in H",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let [x, y, z, _] = horizontal4(e, &p, s);
                Ok(vec![rbar_gap(e, &p, [&x, &y, &z])?])
            },
        ),
        check(
            "curvature.rbar_routes_mixed",
            "R-bar(X, Y) Z from nabla-bar = R-bar(X, Y) Z expanded in R, one of X, Y, Z in H",
            Tier::Fd,
            |e, s, i| {
                let p = e.point(s);
                let [x, y, z] = mixed_triple(&e.ctx, &p, i as usize, s);
                Ok(vec![rbar_gap(e, &p, [&x, &y, &z])?])
            },
        ),
        check("curvature.rbar_reeb_argument", "R-bar(X, Y) xi_a = 0", Tier::Fd, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
            let xh = e.ctx.random_horizontal(&p, s);
            let mut out = Vec::new();
            for a in Alpha::ALL {
                let xi = e.ctx.xi_at(&p, a);
                out.push(e.direct().apply(&e.ctx, &p, &x, &y, &xi)?.max_abs());
                out.push(e.expansion().apply(&e.ctx, &p, &xh, &y, &xi)?.max_abs());
            }
            Ok(out)
        }),
        check("curvature.rbar_mixed_vanishing", "R-bar(X, xi_a) Z = 0 for X, Z in H", Tier::Fd, |e, s, _| {
            let p = e.point(s);
            let (x, z) = (e.ctx.random_horizontal(&p, s), e.ctx.random_horizontal(&p, s));
            per_alpha(|a| Ok(e.direct().apply(&e.ctx, &p, &x, &e.ctx.xi_at(&p, a), &z)?.max_abs()))
        }),
        check(
            "curvature.rbar_symmetries",
            "R-bar(X,Y,Z,U) = -R-bar(Y,X,Z,U) = -R-bar(X,Y,U,Z) = R-bar(Z,U,X,Y), cyclic sum = 0",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let [x, y, z, u] = horizontal4(e, &p, s);
                let d = curvature_identities(&e.ctx, &p, [&x, &y, &z, &u], &e.direct())?;
                Ok(vec![d.antisymmetry, d.bianchi, d.pair_symmetry])
            },
        ),
        check(
            "curvature.rbar_phi_invariance",
            "R-bar(X, Y, phi_a Z, phi_a U) = R-bar(X, Y, Z, U)",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let [x, y, z, u] = horizontal4(e, &p, s);
                Ok(vec![curvature_identities(&e.ctx, &p, [&x, &y, &z, &u], &e.direct())?.phi_invariance])
            },
        ),
        check(
            "curvature.rbar_phi_plane_invariance",
            "R-bar(X, phi_a X, phi_a Z, phi_a U) = R-bar(X, phi_a X, Z, U)",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let [x, _, z, u] = horizontal4(e, &p, s);
                per_alpha(|a| {
                    let fx = e.ctx.phi_at(&p, a, &x);
                    phi_plane_invariance(&e.ctx, &p, a, &x, &fx, [&z, &u], &e.direct())
                })
            },
        ),
        check(
            "curvature.r0_symmetries",
            "R_0(X,Y,Z,U) = -R_0(Y,X,Z,U) = -R_0(X,Y,U,Z) = R_0(Z,U,X,Y), cyclic sum = 0",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let [x, y, z, u] = horizontal4(e, &p, s);
                let d = identity_defects(&e.ctx, &p, [&x, &y, &z, &u], |a, b, c, d| Ok(r0_model(&e.ctx, &p, 1.0, a, b, c, d)))?;
                Ok(vec![d.antisymmetry, d.bianchi, d.pair_symmetry])
            },
        ),
        check(
            "curvature.r0_phi_invariance",
            "R_0(X, Y, phi_a Z, phi_a U) = R_0(X, Y, Z, U)",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let [x, y, z, u] = horizontal4(e, &p, s);
                let d = identity_defects(&e.ctx, &p, [&x, &y, &z, &u], |a, b, c, d| Ok(r0_model(&e.ctx, &p, 1.0, a, b, c, d)))?;
                Ok(vec![d.phi_invariance])
            },
        ),
        check(
            "curvature.r0_phi_plane_invariance",
            "R_0(X, phi_a X, phi_a Z, phi_a U) = R_0(X, phi_a X, Z, U)",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let [x, _, z, u] = horizontal4(e, &p, s);
                per_alpha(|a| {
                    let fx = e.ctx.phi_at(&p, a, &x);
                    phi_plane_invariance_with(&e.ctx, &p, a, &x, &fx, [&z, &u], |a, b, c, d| {
                        Ok(r0_model(&e.ctx, &p, 1.0, a, b, c, d))
                    })
                })
            },
        ),
        check(
            "curvature.r0_holomorphic",
            "R_0(X, phi_a X, X, phi_a X) = 1 for unit X in H",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_horizontal(&p, s);
                per_alpha(|a| {
                    let fx = e.ctx.phi_at(&p, a, &x);
                    Ok(r0_model(&e.ctx, &p, 1.0, &x, &fx, &x, &fx) - 1.0)
                })
            },
        ),
        check(
            "curvature.phi_frame_quad",
            "R-bar(X, phi_1 X, phi_2 X, phi_3 X) = R(X, phi_1 X, phi_2 X, phi_3 X)",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_horizontal(&p, s).scale(s.uniform(0.5, 2.0));
                let (rbar, r) = corollary_quad(&e.ctx, &p, &x, &e.direct())?;
                Ok(vec![rbar - r])
            },
        ),
        check("curvature.ricci_bar", "S-bar(X, Y) = (4n+8) g(X, Y)", Tier::Deep, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_horizontal(&p, s), e.ctx.random_horizontal(&p, s));
            let frame = horizontal_frame(&e.ctx, &p, s)?;
            let k = (4 * e.n() + 8) as f64;
            Ok(vec![
                ricci_bar(&e.ctx, &p, &x, &y, &frame, &e.direct())? - k * x.dot(&y),
                ricci_bar(&e.ctx, &p, &x, &x, &frame, &e.direct())? - k,
            ])
        }),
        check(
            "curvature.ricci_bar_frame_independence",
            "S-bar(X, Y) independent of the orthonormal frame of H",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let (x, y) = (e.ctx.random_horizontal(&p, s), e.ctx.random_horizontal(&p, s));
                let f1 = horizontal_frame(&e.ctx, &p, s)?;
                let f2 = horizontal_frame(&e.ctx, &p, s)?;
                let route = e.expansion();
                Ok(vec![
                    ricci_bar(&e.ctx, &p, &x, &y, &f1, &route)? - ricci_bar(&e.ctx, &p, &x, &y, &f2, &route)?,
                    ricci_bar(&e.ctx, &p, &x, &y, &f1, &route)? - ricci_bar(&e.ctx, &p, &y, &x, &f1, &route)?,
                ])
            },
        ),
        check("curvature.einstein", "S(X, Y) = (4n+2) g(X, Y)", Tier::Deep, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
            let frame = tangent_frame(&e.ctx, &p, s)?;
            let route = CurvatureRoute::SphereFromDefinition { family: ExtensionFamily::Canonical, step: e.step };
            Ok(vec![ricci(&e.ctx, &p, &x, &y, &frame, &route)? - (4 * e.n() + 2) as f64 * x.dot(&y)])
        }),
        check(
            "curvature.sectional_sphere",
            "K(X, Y) = 1, unchanged under (X, Y) -> (aX + bY, cX + dY)",
            Tier::Closed,
            |e, s, _| {
                let p = e.point(s);
                let (x, y) = (e.ctx.random_tangent(&p, s), e.ctx.random_tangent(&p, s));
                let [a, b, c, d] = [0; 4].map(|_| s.normal());
                let x2 = &x.scale(a) + &y.scale(b);
                let y2 = &x.scale(c) + &y.scale(d);
                let k = sectional(&e.ctx, &p, &x, &y, &CurvatureRoute::Sphere, e.sectional_sign)?;
                let mut out = vec![k - 1.0];
                // nearly dependent respans are skipped as degenerate
                if let Ok(k2) = sectional(&e.ctx, &p, &x2, &y2, &CurvatureRoute::Sphere, e.sectional_sign) {
                    out.push(k2 - k);
                }
                Ok(out)
            },
        ),
        check("curvature.sectional_phi_plane", "K-bar(X, phi_a X) = 4 for X in H", Tier::Fd, |e, s, _| {
            let p = e.point(s);
            let x = e.ctx.random_horizontal(&p, s);
            per_alpha(|a| Ok(sectional(&e.ctx, &p, &x, &e.ctx.phi_at(&p, a, &x), &e.direct(), e.sectional_sign)? - 4.0))
        }),
        check("curvature.rbar_model", "R-bar = 4 R_0 on H", Tier::Fd, |e, s, _| {
            let p = e.point(s);
            let [x, y, z, u] = horizontal4(e, &p, s);
            Ok(vec![e.direct().quad(&e.ctx, &p, &x, &y, &z, &u)? - r0_model(&e.ctx, &p, 4.0, &x, &y, &z, &u)])
        }),
        check("curvature.r0_trace", "sum_i R_0(v_i, X, v_i, Y) = (n+2) g(X, Y)", Tier::Closed, |e, s, _| {
            let p = e.point(s);
            let (x, y) = (e.ctx.random_horizontal(&p, s), e.ctx.random_horizontal(&p, s));
            let frame = horizontal_frame(&e.ctx, &p, s)?;
            Ok(vec![ricci_of_r0(&e.ctx, &p, &x, &y, &frame) - (e.n() + 2) as f64 * x.dot(&y)])
        }),
    ]
}

// ---------------------------------------------------------------- theorems

const SWEEP: [f64; 8] = [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5];

fn holomorphic_values(e: &Env, s: &mut Sampler) -> Result<Vec<f64>, GeometryError> {
    let p = e.point(s);
    let x = e.ctx.random_horizontal(&p, s);
    per_alpha(|a| Ok(holomorphic_sectional(&e.ctx, &p, a, &x, &e.direct())?.value))
}

fn theorems() -> Vec<Check> {
    vec![
        check(
            "theorems.holomorphic_spread",
            "H_a(X) = R-bar(X, phi_a X, X, phi_a X) is the same for every unit X in H and every a",
            Tier::Fd,
            |e, s, _| holomorphic_values(e, s),
        )
        .spread(),
        check("theorems.holomorphic_value", "H_a(X) = 4", Tier::Deep, |e, s, _| {
            Ok(holomorphic_values(e, s)?.into_iter().map(|h| h - 4.0).collect())
        }),
        check("theorems.holomorphic_phi_invariance", "H_a(phi_b X) = H_a(X)", Tier::Fd, |e, s, _| {
            let p = e.point(s);
            let x = e.ctx.random_horizontal(&p, s);
            let route = e.direct();
            let mut out = Vec::new();
            for a in Alpha::ALL {
                let h = holomorphic_sectional(&e.ctx, &p, a, &x, &route)?.value;
                for b in Alpha::ALL {
                    let hb = holomorphic_sectional(&e.ctx, &p, a, &e.ctx.phi_at(&p, b, &x), &route)?.value;
                    out.push(hb - h);
                }
            }
            Ok(out)
        }),
        check(
            "theorems.holomorphic_trace_consistency",
            "H_a(X) = (4n+8) / c(n), c(n) g = sum_i R_0(v_i, ., v_i, .)",
            Tier::Deep,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_horizontal(&p, s);
                let frame = horizontal_frame(&e.ctx, &p, s)?;
                let c = ricci_of_r0(&e.ctx, &p, &x, &x, &frame);
                let k = (4 * e.n() + 8) as f64 / c;
                per_alpha(|a| Ok(holomorphic_sectional(&e.ctx, &p, a, &x, &e.direct())?.value - k))
            },
        ),
        check("theorems.holomorphic_minus_sectional", "H_a(X) - K(X, phi_a X) = 3", Tier::Fd, |e, s, _| {
            let p = e.point(s);
            let x = e.ctx.random_horizontal(&p, s);
            per_alpha(|a| Ok(cons_rela_check(&e.ctx, &p, a, &x, &e.direct(), e.sectional_sign)? - 3.0))
        }),
        check(
            "theorems.holomorphic_minus_sectional_spread",
            "H_a(X) - K(X, phi_a X) independent of a",
            Tier::Fd,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_horizontal(&p, s);
                per_alpha(|a| cons_rela_check(&e.ctx, &p, a, &x, &e.direct(), e.sectional_sign))
            },
        )
        .spread(),
        check(
            "theorems.sectional_comparison_horizontal",
            "K-bar(X, phi_a X) = K(X, phi_a X) + 3 for X in H",
            Tier::Deep,
            |e, s, _| {
                let p = e.point(s);
                let x = e.ctx.random_horizontal(&p, s);
                per_alpha(|a| Ok(theorem_sec_check(&e.ctx, &p, a, &x, &e.expansion(), e.sectional_sign)?.defect()))
            },
        ),
        check(
            "theorems.sectional_comparison_sweep",
            "K-bar = K + 3 + 4 (e_b e_c)^2 + 6 (e_b^4 + e_c^4) - 8 (e_b^2 + e_c^2), X = cos t X_h + sin t xi_b",
            Tier::Deep,
            |e, s, _| {
                let p = e.point(s);
                let xh = e.ctx.random_horizontal(&p, s);
                let mut out = Vec::new();
                for a in Alpha::ALL {
                    let xi = e.ctx.xi_at(&p, a.next());
                    for t in SWEEP {
                        let x = &xh.scale(t.cos()) + &xi.scale(t.sin());
                        out.push(theorem_sec_check(&e.ctx, &p, a, &x, &e.expansion(), e.sectional_sign)?.defect());
                    }
                }
                Ok(out)
            },
        ),
    ]
}

pub fn checks_for(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Axioms => axioms(),
        Suite::FieldCalculus => field_calculus(),
        Suite::HConnection => h_connection(),
        Suite::FoliatedChart => foliated_chart(),
        Suite::Curvature => curvature(),
        Suite::Theorems => theorems(),
    }
}

/// Calibrates, then runs the configured suites in order.
pub fn run(config: &RunConfig) -> Result<SuiteReport, RunError> {
    config.validate()?;
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();

    let (ctx, calibration): (SphereContext, CalibrationRecord) = calibrate(config.n, config.seed, config.fd_step)
        .map_err(|source| RunError::Numeric { check: "calibration".into(), source })?;
    let env = Env {
        chart: FoliatedChart::new(&ctx),
        ctx,
        step: config.fd_step,
        sectional_sign: calibration.sectional_sign,
        pairing: calibration.expansion_pairing,
    };

    let mut checks = Vec::new();
    let mut timing = BTreeMap::new();
    for suite in &suites {
        let start = Instant::now();
        for c in checks_for(*suite) {
            let residual = c
                .residual(&env, config.seed, config.samples)
                .map_err(|source| RunError::Numeric { check: c.name.into(), source })?;
            checks.push(CheckResult::new(c.name, c.formula, residual, config.threshold(c.tier)));
        }
        timing.insert(suite.name().to_string(), start.elapsed().as_secs_f64());
    }
    Ok(SuiteReport {
        config: RunConfig { suites, ..config.clone() },
        calibration,
        summary: Summary::of(&checks),
        checks,
        timing,
    })
}
