//! The signature-(n,1) Hermitian form, projective lifts of Siegel-domain
//! points, the Bergman distance and its geodesics.
//!
//! Points of the closed Siegel domain are written in horospherical
//! coordinates `(ξ, v, u)` with `ξ ∈ C^{n-1}`, `v ∈ R`, `u ≥ 0`, plus the
//! point at infinity. A finite point lifts to
//!
//! ```text
//!     (2ξ, 1 - w, 1 + w),   w = |ξ|² + u - iv
//! ```
//!
//! in `C^{n,1}` with form `⟨z, w⟩ = Σ_{i<n} z_i w̄_i - z_n w̄_n`, so that
//! `⟨lift(p), lift(p)⟩ = -4u`. Infinity lifts to the null vector
//! `(0, …, 0, 1, -1)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative tolerance on `⟨z,z⟩/‖z‖²` separating interior, boundary and
/// exterior lifts.
pub const DEFAULT_LOCATION_TOL: f64 = 1e-9;

/// Distance scale `κ` in `d = κ·arccosh(…)`. With `κ = 2` the sectional
/// curvature is pinched in `[-1, -1/4]`; `κ = 1` gives `[-4, -1]`.
pub const DEFAULT_KAPPA: f64 = 2.0;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Finite point of the closed Siegel domain in horospherical coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Horospherical {
    pub xi: Vec<C64>,
    pub v: f64,
    pub u: f64,
}

impl Horospherical {
    pub fn dim(&self) -> usize {
        self.xi.len() + 1
    }

    /// `|ξ|² + u - iv`, the quantity whose modulus is the squared Cygan norm.
    pub fn w(&self) -> C64 {
        c64(norm_sqr(&self.xi) + self.u, -self.v)
    }
}

/// A point of the closed complex hyperbolic space seen from a fixed point
/// at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum HPoint {
    Finite(Horospherical),
    /// The point at infinity of the `n`-dimensional space.
    Infinity { n: usize },
}

impl HPoint {
    pub fn new(xi: Vec<C64>, v: f64, u: f64) -> Result<Self> {
        if !v.is_finite() || !u.is_finite() || xi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        if u < 0.0 {
            return Err(Error::InvalidArgument(format!("height u = {u} is negative")));
        }
        Ok(HPoint::Finite(Horospherical { xi, v, u }))
    }

    pub fn boundary(xi: Vec<C64>, v: f64) -> Result<Self> {
        Self::new(xi, v, 0.0)
    }

    pub fn infinity(n: usize) -> Self {
        HPoint::Infinity { n }
    }

    pub fn origin(n: usize) -> Self {
        HPoint::Finite(Horospherical {
            xi: vec![C64::new(0.0, 0.0); n - 1],
            v: 0.0,
            u: 0.0,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            HPoint::Finite(h) => h.dim(),
            HPoint::Infinity { n } => *n,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, HPoint::Infinity { .. })
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, HPoint::Finite(h) if h.u > 0.0)
    }

    /// Boundary of the ball: `u = 0` or infinity.
    pub fn is_ideal(&self) -> bool {
        !self.is_interior()
    }

    pub fn finite(&self) -> Option<&Horospherical> {
        match self {
            HPoint::Finite(h) => Some(h),
            HPoint::Infinity { .. } => None,
        }
    }

    pub(crate) fn require_finite(&self) -> Result<&Horospherical> {
        self.finite().ok_or(Error::InfinityNotAllowed)
    }

    pub(crate) fn require_interior(&self) -> Result<&Horospherical> {
        match self {
            HPoint::Finite(h) if h.u > 0.0 => Ok(h),
            HPoint::Finite(_) => Err(Error::NotInterior),
            HPoint::Infinity { .. } => Err(Error::InfinityNotAllowed),
        }
    }
}

/// Lift of a point to `C^{n+1}`; only its complex line matters.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftVector(pub CVector);

impl LiftVector {
    pub fn new(z: Vec<C64>) -> Result<Self> {
        if z.len() < 2 {
            return Err(Error::InvalidArgument("lift vectors need at least two entries".into()));
        }
        Ok(LiftVector(CVector::from_vec(z)))
    }

    /// Ambient complex dimension `n` (the vector has `n + 1` entries).
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_slice(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn scale(&self, s: C64) -> LiftVector {
        LiftVector(&self.0 * s)
    }

    /// `⟨z, z⟩`, real by construction.
    pub fn form_value(&self) -> f64 {
        form_raw(self.as_slice(), self.as_slice()).re
    }
}

/// Signature-(n,1) form with `J = diag(1, …, 1, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    pub n: usize,
}

impl HermitianForm {
    pub fn new(n: usize) -> Self {
        HermitianForm { n }
    }

    pub fn matrix(&self) -> CMatrix {
        j_matrix(self.n)
    }

    pub fn eval(&self, z: &LiftVector, w: &LiftVector) -> Result<C64> {
        check_dim(self.n, z.dim())?;
        check_dim(self.n, w.dim())?;
        Ok(form_raw(z.as_slice(), w.as_slice()))
    }
}

pub fn j_matrix(n: usize) -> CMatrix {
    let mut j = CMatrix::identity(n + 1, n + 1);
    j[(n, n)] = c64(-1.0, 0.0);
    j
}

/// `⟨z, w⟩ = Σ_{i<n} z_i w̄_i - z_n w̄_n`.
pub fn hermitian_form(z: &LiftVector, w: &LiftVector) -> Result<C64> {
    check_dim(z.dim(), w.dim())?;
    Ok(form_raw(z.as_slice(), w.as_slice()))
}

#[inline]
pub(crate) fn form_raw(z: &[C64], w: &[C64]) -> C64 {
    let last = z.len() - 1;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..last {
        acc += z[i] * w[i].conj();
    }
    acc - z[last] * w[last].conj()
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Lift of a finite point or infinity.
pub fn lift(p: &HPoint) -> LiftVector {
    match p {
        HPoint::Infinity { n } => {
            let mut z = vec![C64::new(0.0, 0.0); n + 1];
            z[*n - 1] = c64(1.0, 0.0);
            z[*n] = c64(-1.0, 0.0);
            LiftVector(CVector::from_vec(z))
        }
        HPoint::Finite(h) => {
            let w = h.w();
            let mut z: Vec<C64> = h.xi.iter().map(|x| x * 2.0).collect();
            z.push(c64(1.0, 0.0) - w);
            z.push(c64(1.0, 0.0) + w);
            LiftVector(CVector::from_vec(z))
        }
    }
}

/// Inverse of [`lift`] up to scale. Heights with `|u| ≤ tol·(1 + |w|)`
/// are rounded to the boundary.
pub fn unlift(z: &LiftVector, tol: f64) -> Result<HPoint> {
    let n = z.dim();
    let norm = z.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let ratio = z.form_value() / (norm * norm);
    if ratio > tol {
        return Err(Error::ExteriorVector(ratio));
    }
    let s = z.0[n - 1] + z.0[n];
    if s.norm() <= tol * norm {
        return Ok(HPoint::Infinity { n });
    }
    let scale = c64(2.0, 0.0) / s;
    let xi: Vec<C64> = (0..n - 1).map(|i| z.0[i] * scale * 0.5).collect();
    let w = (z.0[n] - z.0[n - 1]) * scale * 0.5;
    let mut u = w.re - norm_sqr(&xi);
    if u.abs() <= tol * (1.0 + w.norm()) {
        u = 0.0;
    }
    Ok(HPoint::Finite(Horospherical { xi, v: -w.im, u: u.max(0.0) }))
}

/// Unlift of a vector known to be negative, with the height read off the
/// form value (`⟨z,z⟩ = -u |z_{n-1} + z_n|²`) and never rounded to zero.
/// Callers pass `form` when it is known exactly (e.g. preserved by an
/// isometry), since recomputing it from large entries cancels badly.
pub(crate) fn unlift_interior(z: &LiftVector, form: f64) -> Result<HPoint> {
    let n = z.dim();
    let s = z.0[n - 1] + z.0[n];
    if s.norm() == 0.0 {
        return Err(Error::NotInterior);
    }
    let scale = c64(1.0, 0.0) / s;
    let xi: Vec<C64> = (0..n - 1).map(|i| z.0[i] * scale).collect();
    let w = (z.0[n] - z.0[n - 1]) * scale;
    let u = -form / s.norm_sqr();
    Ok(HPoint::Finite(Horospherical { xi, v: -w.im, u: u.max(f64::MIN_POSITIVE) }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

pub fn point_location(z: &LiftVector, tol: f64) -> Result<Location> {
    let norm = z.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let r = z.form_value() / (norm * norm);
    Ok(if r < -tol {
        Location::Interior
    } else if r <= tol {
        Location::Boundary
    } else {
        Location::Exterior
    })
}

/// Coordinates of the lift in the unit-ball chart, `z' / z_{n+1}`.
pub fn ball_coordinates(z: &LiftVector) -> Result<Vec<C64>> {
    let n = z.dim();
    let last = z.0[n];
    if last.norm() == 0.0 {
        return Err(Error::ExteriorVector(f64::INFINITY));
    }
    Ok((0..n).map(|i| z.0[i] / last).collect())
}

/// Euclidean distance between the ball-chart images of two points of the
/// closed ball. Bounded by 2 and well defined at infinity.
pub fn chordal_distance(p: &HPoint, q: &HPoint) -> Result<f64> {
    check_dim(p.dim(), q.dim())?;
    let a = ball_coordinates(&lift(p))?;
    let b = ball_coordinates(&lift(q))?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
}

/// `M* J M = J` after rescaling `M` to `|det M| = 1`.
pub fn is_j_unitary(m: &CMatrix, tol: f64) -> bool {
    j_unitary_deviation(m).map(|d| d <= tol).unwrap_or(false)
}

pub(crate) fn j_unitary_deviation(m: &CMatrix) -> Option<f64> {
    let k = m.nrows();
    if k != m.ncols() || k < 2 {
        return None;
    }
    let det = m.determinant().norm();
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let s = det.powf(-1.0 / k as f64);
    let ms = m * c64(s, 0.0);
    let j = j_matrix(k - 1);
    let d = ms.adjoint() * &j * &ms - j;
    Some(d.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Bergman metric with distance scale `κ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric {
    pub kappa: f64,
}

impl Default for Metric {
    fn default() -> Self {
        Metric { kappa: DEFAULT_KAPPA }
    }
}

impl Metric {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!("kappa must be positive, got {kappa}")));
        }
        Ok(Metric { kappa })
    }

    pub fn distance(&self, p: &HPoint, q: &HPoint) -> Result<f64> {
        p.require_interior()?;
        q.require_interior()?;
        check_dim(p.dim(), q.dim())?;
        Ok(self.lift_distance(lift(p).as_slice(), lift(q).as_slice()))
    }

    /// Distance between two negative lifts.
    ///
    /// Uses `sinh²(d/κ) = -⟨P∧Q, P∧Q⟩ / (⟨P,P⟩⟨Q,Q⟩)`, where the numerator is
    /// a signed sum of squared 2×2 minors; this stays accurate for nearby
    /// points where the arccosh form loses half the digits.
    pub fn lift_distance(&self, p: &[C64], q: &[C64]) -> f64 {
        let last = p.len() - 1;
        let mut num = 0.0;
        for i in 0..last {
            num += (p[i] * q[last] - p[last] * q[i]).norm_sqr();
            for j in (i + 1)..last {
                num -= (p[i] * q[j] - p[j] * q[i]).norm_sqr();
            }
        }
        let den = form_raw(p, p).re * form_raw(q, q).re;
        let s2 = (num / den).max(0.0);
        self.kappa * s2.sqrt().asinh()
    }

    /// Point at arclength `s` from `p` on the geodesic toward `q`.
    pub fn geodesic_point(&self, p: &HPoint, q: &HPoint, s: f64) -> Result<HPoint> {
        let (ph, xh) = self.geodesic_frame(p, q)?;
        if s < 0.0 {
            return Err(Error::InvalidArgument("arclength must be non-negative".into()));
        }
        let t = s / self.kappa;
        let z = &ph * c64(t.cosh(), 0.0) + &xh * c64(t.sinh(), 0.0);
        unlift(&LiftVector(z), 0.0)
    }

    /// Unit-speed frame `(P̂, X̂)` with `⟨P̂,P̂⟩ = -1`, `⟨X̂,X̂⟩ = 1`,
    /// `⟨X̂,P̂⟩ = 0`, such that `cosh(s/κ)P̂ + sinh(s/κ)X̂` runs from `p`
    /// through `q`.
    pub fn geodesic_frame(&self, p: &HPoint, q: &HPoint) -> Result<(CVector, CVector)> {
        p.require_interior()?;
        q.require_interior()?;
        check_dim(p.dim(), q.dim())?;
        if p == q {
            return Err(Error::CoincidentPoints("geodesic endpoints coincide"));
        }
        let ph = normalize_negative(&lift(p).0);
        let qv = lift(q).0;
        let h = form_raw(qv.as_slice(), ph.as_slice());
        if h.norm() == 0.0 {
            return Err(Error::CoincidentPoints("degenerate geodesic frame"));
        }
        // phase making ⟨Q', P̂⟩ real negative
        let qp = &qv * (-h.conj() / h.norm());
        let hp = form_raw(qp.as_slice(), ph.as_slice());
        let x = &qp + &ph * hp;
        let xn = form_raw(x.as_slice(), x.as_slice()).re;
        if xn <= 0.0 {
            return Err(Error::CoincidentPoints("geodesic endpoints coincide numerically"));
        }
        Ok((ph, x / c64(xn.sqrt(), 0.0)))
    }
}

/// Rescale a negative vector to `⟨z, z⟩ = -1`.
pub(crate) fn normalize_negative(z: &CVector) -> CVector {
    let f = -form_raw(z.as_slice(), z.as_slice()).re;
    z / c64(f.sqrt(), 0.0)
}

/// Distance with the default scale.
pub fn bergman_distance(p: &HPoint, q: &HPoint) -> Result<f64> {
    Metric::default().distance(p, q)
}
