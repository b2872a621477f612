//! The 3-Sasakian structure of the round sphere `S^{4n+3}` inside
//! `H^{n+1} = R^{4n+4}`.
//!
//! Coordinates come in blocks of four, ordered `(1, i, j, k)`. The Reeb fields
//! are `xi_a(p) = p * e_a` (componentwise quaternion multiplication on the
//! side fixed by [`QuaternionSide`]) and `phi_a` is the tangential part of the
//! same multiplication, with a global sign fixed by calibration.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::numerics::{max_residual, AmbientVector, Sampler};

/// Tolerance on `|p| = 1` for [`PointOnSphere`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Tolerance on `<v, p> = 0` for [`TangentAt`].
pub const TANGENCY_TOLERANCE: f64 = 1e-10;

/// Index of one of the three Sasakian structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Alpha {
    I,
    J,
    K,
}

impl Alpha {
    pub const ALL: [Alpha; 3] = [Alpha::I, Alpha::J, Alpha::K];

    pub fn index(self) -> usize {
        match self {
            Alpha::I => 0,
            Alpha::J => 1,
            Alpha::K => 2,
        }
    }

    /// 1-based label used in check names.
    pub fn label(self) -> usize {
        self.index() + 1
    }

    /// Next index in the cyclic order, so `(a, a.next(), a.next().next())`
    /// runs over the even permutations of `(1, 2, 3)`.
    pub fn next(self) -> Alpha {
        match self {
            Alpha::I => Alpha::J,
            Alpha::J => Alpha::K,
            Alpha::K => Alpha::I,
        }
    }

    /// The three even permutations `(a, b, c)` of `(1, 2, 3)`.
    pub fn even_permutations() -> [(Alpha, Alpha, Alpha); 3] {
        Alpha::ALL.map(|a| (a, a.next(), a.next().next()))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Side on which the unit quaternions act to produce the Reeb fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuaternionSide {
    Right,
    Left,
}

/// Quaternion product of `q` by the unit `e_alpha` on the given side,
/// for one `(1, i, j, k)` block.
fn unit_product(side: QuaternionSide, alpha: Alpha, q: [f64; 4]) -> [f64; 4] {
    let [a, b, c, d] = q;
    match (side, alpha) {
        // q * i, q * j, q * k
        (QuaternionSide::Right, Alpha::I) => [-b, a, d, -c],
        (QuaternionSide::Right, Alpha::J) => [-c, -d, a, b],
        (QuaternionSide::Right, Alpha::K) => [-d, c, -b, a],
        // i * q, j * q, k * q
        (QuaternionSide::Left, Alpha::I) => [-b, a, -d, c],
        (QuaternionSide::Left, Alpha::J) => [-c, d, a, -b],
        (QuaternionSide::Left, Alpha::K) => [-d, -c, b, a],
    }
}

/// Immutable 3-Sasakian structure on `S^{4n+3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereContext {
    n: usize,
    side: QuaternionSide,
    sign_phi: f64,
}

impl SphereContext {
    /// Builds a context with an explicit convention. Most callers want
    /// [`crate::calibration::calibrate`] instead.
    pub fn new(n: usize, side: QuaternionSide, sign_phi: f64) -> Result<Self, GeometryError> {
        if n == 0 {
            return Err(GeometryError::InvalidDimension);
        }
        assert!(sign_phi == 1.0 || sign_phi == -1.0, "sign_phi must be +-1");
        Ok(Self { n, side, sign_phi })
    }

    /// Quaternionic dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient dimension `4n + 4`.
    pub fn ambient_dim(&self) -> usize {
        4 * (self.n + 1)
    }

    /// Horizontal dimension `4n`.
    pub fn horizontal_dim(&self) -> usize {
        4 * self.n
    }

    pub fn side(&self) -> QuaternionSide {
        self.side
    }

    pub fn sign_phi(&self) -> f64 {
        self.sign_phi
    }

    /// `E_alpha v`: blockwise multiplication by the quaternion unit.
    pub fn structure_apply(&self, alpha: Alpha, v: &AmbientVector) -> AmbientVector {
        debug_assert_eq!(v.len(), self.ambient_dim());
        let mut out = AmbientVector::zeros(v.len());
        for b in 0..=self.n {
            let o = 4 * b;
            let q = [v[o], v[o + 1], v[o + 2], v[o + 3]];
            let r = unit_product(self.side, alpha, q);
            for c in 0..4 {
                out[o + c] = r[c];
            }
        }
        out
    }

    /// Dense row-major `E_alpha`.
    pub fn structure_matrix(&self, alpha: Alpha) -> Vec<Vec<f64>> {
        let dim = self.ambient_dim();
        let mut m = vec![vec![0.0; dim]; dim];
        for col in 0..dim {
            let image = self.structure_apply(alpha, &AmbientVector::basis(dim, col));
            for (row, line) in m.iter_mut().enumerate() {
                line[col] = image[row];
            }
        }
        m
    }

    // Raw pointwise formulas. `p` is a unit vector, `v` is tangent at `p`.

    pub fn xi_at(&self, p: &AmbientVector, alpha: Alpha) -> AmbientVector {
        self.structure_apply(alpha, p)
    }

    pub fn eta_at(&self, p: &AmbientVector, alpha: Alpha, v: &AmbientVector) -> f64 {
        v.dot(&self.xi_at(p, alpha))
    }

    /// `phi_a v = sign_phi * (E_a v + eta^a(v) p)`.
    pub fn phi_at(&self, p: &AmbientVector, alpha: Alpha, v: &AmbientVector) -> AmbientVector {
        let mut out = self.structure_apply(alpha, v);
        out.axpy(self.eta_at(p, alpha, v), p);
        out.scale(self.sign_phi)
    }

    /// `Omega^a(x, y) = g(x, phi_a y)`.
    pub fn omega_at(&self, p: &AmbientVector, alpha: Alpha, x: &AmbientVector, y: &AmbientVector) -> f64 {
        x.dot(&self.phi_at(p, alpha, y))
    }

    /// `h v = v - sum_a eta^a(v) xi_a`.
    pub fn horizontal_at(&self, p: &AmbientVector, v: &AmbientVector) -> AmbientVector {
        let mut out = v.clone();
        for alpha in Alpha::ALL {
            let xi = self.xi_at(p, alpha);
            out.axpy(-v.dot(&xi), &xi);
        }
        out
    }

    /// Vertical part `sum_a eta^a(v) xi_a`.
    pub fn vertical_at(&self, p: &AmbientVector, v: &AmbientVector) -> AmbientVector {
        v - &self.horizontal_at(p, v)
    }

    // Typed API with base-point checks.

    pub fn xi(&self, p: &PointOnSphere, alpha: Alpha) -> TangentAt {
        TangentAt::unchecked(p.clone(), self.xi_at(p.vector(), alpha))
    }

    pub fn eta(&self, p: &PointOnSphere, alpha: Alpha, x: &TangentAt) -> Result<f64, GeometryError> {
        x.check_base(p)?;
        Ok(self.eta_at(p.vector(), alpha, &x.v))
    }

    pub fn phi(&self, p: &PointOnSphere, alpha: Alpha, x: &TangentAt) -> Result<TangentAt, GeometryError> {
        x.check_base(p)?;
        Ok(TangentAt::unchecked(p.clone(), self.phi_at(p.vector(), alpha, &x.v)))
    }

    pub fn omega(
        &self,
        p: &PointOnSphere,
        alpha: Alpha,
        x: &TangentAt,
        y: &TangentAt,
    ) -> Result<f64, GeometryError> {
        x.check_base(p)?;
        y.check_base(p)?;
        Ok(self.omega_at(p.vector(), alpha, &x.v, &y.v))
    }

    pub fn horizontal_project(&self, p: &PointOnSphere, x: &TangentAt) -> Result<TangentAt, GeometryError> {
        x.check_base(p)?;
        Ok(TangentAt::unchecked(p.clone(), self.horizontal_at(p.vector(), &x.v)))
    }

    /// Max defects of the three quaternionic relation families over the
    /// given tangents at `p`, for every even permutation `(b, c, t)`:
    /// `xi_t = phi_b xi_c = -phi_c xi_b`,
    /// `eta^t = eta^b o phi_c = -eta^c o phi_b`,
    /// `phi_t = phi_b phi_c - eta^c (x) xi_b = -phi_c phi_b + eta^b (x) xi_c`.
    pub fn check_three_sasakian_relations(&self, p: &PointOnSphere, tangents: &[TangentAt]) -> RelationDefects {
        let pv = p.vector();
        let mut out = RelationDefects::default();
        for (b, c, t) in Alpha::even_permutations() {
            let xi_t = self.xi_at(pv, t);
            let d1 = &xi_t - &self.phi_at(pv, b, &self.xi_at(pv, c));
            let d2 = &xi_t + &self.phi_at(pv, c, &self.xi_at(pv, b));
            out.xi = max_residual(out.xi, max_residual(d1.max_abs(), d2.max_abs()));
            for x in tangents {
                let v = &x.v;
                let eta_t = self.eta_at(pv, t, v);
                let e1 = eta_t - self.eta_at(pv, b, &self.phi_at(pv, c, v));
                let e2 = eta_t + self.eta_at(pv, c, &self.phi_at(pv, b, v));
                out.eta = max_residual(out.eta, max_residual(e1.abs(), e2.abs()));

                let phi_t = self.phi_at(pv, t, v);
                let mut f1 = self.phi_at(pv, b, &self.phi_at(pv, c, v));
                f1.axpy(-self.eta_at(pv, c, v), &self.xi_at(pv, b));
                let mut f2 = -self.phi_at(pv, c, &self.phi_at(pv, b, v));
                f2.axpy(self.eta_at(pv, b, v), &self.xi_at(pv, c));
                out.phi = max_residual(out.phi, max_residual((&phi_t - &f1).max_abs(), (&phi_t - &f2).max_abs()));
            }
        }
        out
    }

    // Sampling.

    pub fn random_point(&self, s: &mut Sampler) -> PointOnSphere {
        PointOnSphere::unchecked(s.projected_unit(self.ambient_dim(), |v| v.clone()))
    }

    /// Unit tangent at `p`, uniform on the tangent sphere.
    pub fn random_tangent(&self, p: &AmbientVector, s: &mut Sampler) -> AmbientVector {
        s.projected_unit(self.ambient_dim(), |v| v.reject(p))
    }

    /// Unit horizontal vector at `p`.
    pub fn random_horizontal(&self, p: &AmbientVector, s: &mut Sampler) -> AmbientVector {
        s.projected_unit(self.ambient_dim(), |v| self.horizontal_at(p, &v.reject(p)))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelationDefects {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

/// A point of the unit sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct PointOnSphere(AmbientVector);

impl PointOnSphere {
    pub fn new(p: AmbientVector) -> Result<Self, GeometryError> {
        let defect = p.norm() - 1.0;
        if !(defect.abs() <= UNIT_TOLERANCE) {
            return Err(GeometryError::OffSphere(defect));
        }
        Ok(Self(p))
    }

    /// Normalizes a nonzero vector onto the sphere.
    pub fn normalize(v: &AmbientVector) -> Self {
        Self(v.normalized())
    }

    pub(crate) fn unchecked(p: AmbientVector) -> Self {
        Self(p)
    }

    pub fn vector(&self) -> &AmbientVector {
        &self.0
    }

    pub fn into_vector(self) -> AmbientVector {
        self.0
    }
}

/// A tangent vector together with its base point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentAt {
    pub base: PointOnSphere,
    pub v: AmbientVector,
}

impl TangentAt {
    pub fn new(base: PointOnSphere, v: AmbientVector) -> Result<Self, GeometryError> {
        if v.len() != base.vector().len() {
            return Err(GeometryError::DimensionMismatch {
                expected: base.vector().len(),
                found: v.len(),
            });
        }
        let defect = v.dot(base.vector());
        if !(defect.abs() <= TANGENCY_TOLERANCE) {
            return Err(GeometryError::NotTangent(defect));
        }
        Ok(Self { base, v })
    }

    pub(crate) fn unchecked(base: PointOnSphere, v: AmbientVector) -> Self {
        Self { base, v }
    }

    pub fn check_base(&self, p: &PointOnSphere) -> Result<(), GeometryError> {
        if self.base == *p {
            Ok(())
        } else {
            Err(GeometryError::BaseMismatch)
        }
    }
}
