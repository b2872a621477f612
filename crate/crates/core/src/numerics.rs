//! Dense small-vector arithmetic, seeded sampling streams, Richardson
//! differentiation and the residual bookkeeping shared by every suite.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::GeometryError;

/// Default finite-difference step for Richardson extrapolation.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Pivot norm below which Gram-Schmidt declares rank deficiency.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Projected samples shorter than this are rejected and redrawn.
pub const DEGENERATE_SAMPLE_NORM: f64 = 1e-8;

/// A vector of the ambient Euclidean space `R^{4n+4}`.
#[derive(Clone, PartialEq, Default)]
pub struct AmbientVector(Vec<f64>);

impl AmbientVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// The `index`-th standard basis vector.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = 1.0;
        v
    }

    pub fn from_vec(entries: Vec<f64>) -> Self {
        Self(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Euclidean inner product. Panics on length mismatch; use [`dot`] for
    /// the checked form.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: dimension mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| max_residual(m, x.abs()))
    }

    pub fn normalized(&self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| x * s).collect())
    }

    /// `self += s * other`
    pub fn axpy(&mut self, s: f64, other: &Self) {
        assert_eq!(self.len(), other.len(), "axpy: dimension mismatch");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += s * b;
        }
    }

    /// Component of `self` orthogonal to the unit vector `unit`.
    pub fn reject(&self, unit: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-self.dot(unit), unit);
        out
    }
}

impl fmt::Debug for AmbientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl Index<usize> for AmbientVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for AmbientVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<Vec<f64>> for AmbientVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl<'a> Add<&'a AmbientVector> for &'a AmbientVector {
    type Output = AmbientVector;
    fn add(self, rhs: &AmbientVector) -> AmbientVector {
        assert_eq!(self.len(), rhs.len(), "add: dimension mismatch");
        AmbientVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a AmbientVector> for &'a AmbientVector {
    type Output = AmbientVector;
    fn sub(self, rhs: &AmbientVector) -> AmbientVector {
        assert_eq!(self.len(), rhs.len(), "sub: dimension mismatch");
        AmbientVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for AmbientVector {
    type Output = AmbientVector;
    fn add(self, rhs: AmbientVector) -> AmbientVector {
        &self + &rhs
    }
}

impl Sub for AmbientVector {
    type Output = AmbientVector;
    fn sub(self, rhs: AmbientVector) -> AmbientVector {
        &self - &rhs
    }
}

impl AddAssign<&AmbientVector> for AmbientVector {
    fn add_assign(&mut self, rhs: &AmbientVector) {
        self.axpy(1.0, rhs);
    }
}

impl SubAssign<&AmbientVector> for AmbientVector {
    fn sub_assign(&mut self, rhs: &AmbientVector) {
        self.axpy(-1.0, rhs);
    }
}

impl Mul<&AmbientVector> for f64 {
    type Output = AmbientVector;
    fn mul(self, rhs: &AmbientVector) -> AmbientVector {
        rhs.scale(self)
    }
}

impl Mul<AmbientVector> for f64 {
    type Output = AmbientVector;
    fn mul(self, rhs: AmbientVector) -> AmbientVector {
        rhs.scale(self)
    }
}

impl Neg for &AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self.scale(-1.0)
    }
}

impl Neg for AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self.scale(-1.0)
    }
}

/// Checked Euclidean inner product.
pub fn dot(u: &AmbientVector, v: &AmbientVector) -> Result<f64, GeometryError> {
    if u.len() != v.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(u.dot(v))
}

/// Max that lets NaN win, so a poisoned sample can never hide behind a
/// later finite one.
pub fn max_residual(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn central_difference<F>(f: &F, t0: f64, h: f64) -> Result<AmbientVector, GeometryError>
where
    F: Fn(f64) -> Result<AmbientVector, GeometryError>,
{
    let eval = |t: f64| -> Result<AmbientVector, GeometryError> {
        let v = f(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeometryError::NonFinite { t })
        }
    };
    let plus = eval(t0 + h)?;
    let minus = eval(t0 - h)?;
    Ok((&plus - &minus).scale(0.5 / h))
}

/// Step for differencing a quantity that is itself a difference quotient at
/// `step`. Its roundoff is about `eps / step`, so the outer step grows to
/// `sqrt(step)` to keep the second division from amplifying it.
pub fn nested_step(step: f64) -> f64 {
    step.sqrt()
}

/// One level of Richardson extrapolation on the central difference:
/// `(4 D(h/2) - D(h)) / 3`, accurate to `O(h^4)` for smooth `f`.
pub fn richardson_derivative<F>(f: F, t0: f64, h: f64) -> Result<AmbientVector, GeometryError>
where
    F: Fn(f64) -> Result<AmbientVector, GeometryError>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(GeometryError::InvalidStep(h));
    }
    let coarse = central_difference(&f, t0, h)?;
    let fine = central_difference(&f, t0, 0.5 * h)?;
    Ok((&fine.scale(4.0) - &coarse).scale(1.0 / 3.0))
}

/// Scalar convenience wrapper around [`richardson_derivative`].
pub fn richardson_scalar<F>(f: F, t0: f64, h: f64) -> Result<f64, GeometryError>
where
    F: Fn(f64) -> Result<f64, GeometryError>,
{
    let d = richardson_derivative(|t| f(t).map(|x| AmbientVector(vec![x])), t0, h)?;
    Ok(d[0])
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
pub fn gram_schmidt(vs: &[AmbientVector]) -> Result<Vec<AmbientVector>, GeometryError> {
    let mut out: Vec<AmbientVector> = Vec::with_capacity(vs.len());
    for (index, v) in vs.iter().enumerate() {
        if let Some(first) = vs.first() {
            if first.len() != v.len() {
                return Err(GeometryError::DimensionMismatch {
                    expected: first.len(),
                    found: v.len(),
                });
            }
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = w.dot(u);
                w.axpy(-c, u);
            }
        }
        let norm = w.norm();
        if !(norm >= RANK_TOLERANCE) {
            return Err(GeometryError::RankDeficient { index, norm });
        }
        out.push(w.scale(1.0 / norm));
    }
    Ok(out)
}

/// Max entry of `|G - I|` for the Gram matrix of `vs`.
pub fn gram_defect(vs: &[AmbientVector]) -> f64 {
    let mut worst = 0.0;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = max_residual(worst, (a.dot(b) - target).abs());
        }
    }
    worst
}

/// A reproducible random stream keyed by `(seed, stream_index)`.
///
/// Backed by ChaCha8, whose output is specified bit-for-bit, so the same key
/// yields the same samples on every platform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Stream for sample `sample` of the check identified by `tag`.
    pub fn for_sample(seed: u64, tag: &str, sample: u32) -> Self {
        Self::new(seed, (u64::from(fnv1a32(tag)) << 32) | u64::from(sample))
    }

    pub fn rng(&self) -> Sampler {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        Sampler { rng }
    }
}

fn fnv1a32(s: &str) -> u32 {
    s.bytes().fold(0x811c_9dc5_u32, |h, b| {
        (h ^ u32::from(b)).wrapping_mul(0x0100_0193)
    })
}

/// Draws Gaussian ambient vectors and uniform scalars from an [`RngStream`].
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    pub fn gaussian_vector(&mut self, len: usize) -> AmbientVector {
        AmbientVector((0..len).map(|_| self.normal()).collect())
    }

    /// Gaussian vector passed through `project`, normalized, redrawn while
    /// the projection is degenerate.
    pub fn projected_unit<P>(&mut self, len: usize, project: P) -> AmbientVector
    where
        P: Fn(&AmbientVector) -> AmbientVector,
    {
        loop {
            let v = project(&self.gaussian_vector(len));
            let norm = v.norm();
            if norm >= DEGENERATE_SAMPLE_NORM {
                return v.scale(1.0 / norm);
            }
        }
    }
}

/// Outcome of one named identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Residual {
    pub fn new(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> AmbientVector {
        AmbientVector::basis(8, i)
    }

    #[test]
    fn dot_identity_and_orthogonality() {
        assert_eq!(dot(&e(0), &e(0)).unwrap(), 1.0);
        assert_eq!(dot(&e(0), &e(1)).unwrap(), 0.0);
    }

    #[test]
    fn dot_is_symmetric_bitwise() {
        let mut s = RngStream::new(7, 0).rng();
        for _ in 0..100 {
            let u = s.gaussian_vector(12);
            let v = s.gaussian_vector(12);
            assert_eq!(u.dot(&v), v.dot(&u));
        }
    }

    #[test]
    fn dot_rejects_mismatched_lengths() {
        let err = dot(&AmbientVector::zeros(8), &AmbientVector::zeros(12)).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::DimensionMismatch {
                expected: 8,
                found: 12
            }
        ));
    }

    #[test]
    fn richardson_is_exact_on_quadratics() {
        let d = richardson_derivative(|t| Ok(e(0).scale(t * t)), 1.0, 1e-3).unwrap();
        assert!((&d - &e(0).scale(2.0)).max_abs() < 1e-10);
    }

    #[test]
    fn richardson_of_constant_is_zero() {
        let c = AmbientVector::from_vec(vec![1.5, -2.0, 0.25]);
        let d = richardson_derivative(|_| Ok(c.clone()), 0.3, 1e-4).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn richardson_matches_exponential() {
        let d = richardson_derivative(|t| Ok(e(0).scale(t.exp())), 0.0, 1e-3).unwrap();
        assert!((&d - &e(0)).max_abs() < 1e-11);
    }

    #[test]
    fn richardson_reports_non_finite_t() {
        let err = richardson_derivative(
            |t| Ok(e(0).scale(if t > 0.0 { f64::INFINITY } else { 1.0 })),
            0.0,
            1e-3,
        )
        .unwrap_err();
        assert!(matches!(err, GeometryError::NonFinite { t } if t > 0.0));
    }

    #[test]
    fn gram_schmidt_axis_case() {
        let out = gram_schmidt(&[e(0).scale(2.0), &e(0) + &e(1)]).unwrap();
        assert!((&out[0] - &e(0)).max_abs() < 1e-15);
        assert!((&out[1] - &e(1)).max_abs() < 1e-15);
    }

    #[test]
    fn gram_schmidt_is_idempotent_on_orthonormal_input() {
        let frame: Vec<_> = (0..8).map(e).collect();
        let out = gram_schmidt(&frame).unwrap();
        for (a, b) in frame.iter().zip(&out) {
            assert!((a - b).max_abs() < 1e-14);
        }
    }

    #[test]
    fn gram_schmidt_flags_failing_index() {
        let err = gram_schmidt(&[e(0), e(1), &e(0) + &e(1)]).unwrap_err();
        assert!(matches!(err, GeometryError::RankDeficient { index: 2, .. }));
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut s = RngStream::for_sample(42, "x", 3).rng();
            (0..16).map(|_| s.normal()).collect()
        };
        let b: Vec<f64> = {
            let mut s = RngStream::for_sample(42, "x", 3).rng();
            (0..16).map(|_| s.normal()).collect()
        };
        let c: Vec<f64> = {
            let mut s = RngStream::for_sample(42, "x", 4).rng();
            (0..16).map(|_| s.normal()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn nan_poisons_max() {
        assert!(max_residual(1.0, f64::NAN).is_nan());
        assert!(max_residual(f64::NAN, 0.0).is_nan());
        assert_eq!(max_residual(1.0, 2.0), 2.0);
    }
}
