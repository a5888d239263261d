//! The Heisenberg group `H_n = C^{n-1} × R`, its Cygan metric, the
//! semidirect product `H(n) = H_n ⋊ U(n-1)`, the Heisenberg inversion and
//! the matrix embedding of `H(n)` into `U(n,1)`.
//!
//! The pairing `⟨⟨a, b⟩⟩ = Σ a_j b̄_j` is used throughout; the group law is
//! `(ξ₀,v₀)(ξ,v) = (ξ₀+ξ, v₀+v+2 Im⟨⟨ξ₀,ξ⟩⟩)`.

use crate::error::{Error, Result};
use crate::hermitian::{c64, check_dim, norm_sqr, CMatrix, HPoint, Horospherical, C64};

/// Tolerance on `‖A*A - I‖_max` for rotation parts.
pub const UNITARY_TOL: f64 = 1e-10;

pub fn pairing(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// Real inner product of `C^{n-1}` viewed as `R^{2(n-1)}`.
pub(crate) fn real_dot(a: &[C64], b: &[C64]) -> f64 {
    pairing(a, b).re
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeisElement {
    pub xi: Vec<C64>,
    pub v: f64,
}

impl HeisElement {
    pub fn new(xi: Vec<C64>, v: f64) -> Self {
        HeisElement { xi, v }
    }

    pub fn identity(n: usize) -> Self {
        HeisElement { xi: vec![c64(0.0, 0.0); n - 1], v: 0.0 }
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.xi.len() + 1
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.v.abs() <= tol && self.xi.iter().all(|z| z.norm() <= tol)
    }

    pub fn mul(&self, other: &HeisElement) -> Result<HeisElement> {
        h_mul(self, other)
    }

    pub fn inv(&self) -> HeisElement {
        h_inv(self)
    }

    /// The boundary point `(ξ, v, 0)`.
    pub fn to_point(&self) -> HPoint {
        HPoint::Finite(Horospherical { xi: self.xi.clone(), v: self.v, u: 0.0 })
    }
}

pub fn h_mul(a: &HeisElement, b: &HeisElement) -> Result<HeisElement> {
    check_dim(a.dim(), b.dim())?;
    let xi = a.xi.iter().zip(&b.xi).map(|(x, y)| x + y).collect();
    Ok(HeisElement { xi, v: a.v + b.v + 2.0 * pairing(&a.xi, &b.xi).im })
}

pub fn h_inv(a: &HeisElement) -> HeisElement {
    HeisElement { xi: a.xi.iter().map(|x| -x).collect(), v: -a.v }
}

/// `[a, b] = a b a⁻¹ b⁻¹`.
pub fn commutator(a: &HeisElement, b: &HeisElement) -> Result<HeisElement> {
    h_mul(&h_mul(&h_mul(a, b)?, &h_inv(a))?, &h_inv(b))
}

/// Element `(A, τ)` of `H(n)` acting by `x ↦ T_τ(A x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisIsometry {
    pub a: CMatrix,
    pub tau: HeisElement,
}

impl HeisIsometry {
    pub fn new(a: CMatrix, tau: HeisElement) -> Result<Self> {
        let m = tau.dim() - 1;
        if a.nrows() != m || a.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: a.nrows() });
        }
        let dev = unitary_deviation(&a);
        if dev > UNITARY_TOL {
            return Err(Error::NonUnitaryRotation(dev));
        }
        Ok(HeisIsometry { a, tau })
    }

    pub fn translation(tau: HeisElement) -> Self {
        let m = tau.dim() - 1;
        HeisIsometry { a: CMatrix::identity(m, m), tau }
    }

    pub fn rotation(a: CMatrix) -> Result<Self> {
        let n = a.nrows() + 1;
        Self::new(a, HeisElement::identity(n))
    }

    pub fn identity(n: usize) -> Self {
        Self::translation(HeisElement::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.tau.dim()
    }

    pub fn rotate(&self, xi: &[C64]) -> Vec<C64> {
        (0..self.a.nrows())
            .map(|i| (0..xi.len()).map(|j| self.a[(i, j)] * xi[j]).sum())
            .collect()
    }

    /// `self ∘ other`: `(A, τ)(B, σ) = (AB, τ·(Aσ))`.
    pub fn compose(&self, other: &HeisIsometry) -> Result<HeisIsometry> {
        check_dim(self.dim(), other.dim())?;
        let a_sigma = HeisElement { xi: self.rotate(&other.tau.xi), v: other.tau.v };
        Ok(HeisIsometry { a: &self.a * &other.a, tau: h_mul(&self.tau, &a_sigma)? })
    }

    pub fn inverse(&self) -> HeisIsometry {
        let a_inv = self.a.adjoint();
        let t_inv = h_inv(&self.tau);
        let xi = (0..a_inv.nrows())
            .map(|i| (0..t_inv.xi.len()).map(|j| a_inv[(i, j)] * t_inv.xi[j]).sum())
            .collect();
        HeisIsometry { a: a_inv, tau: HeisElement { xi, v: t_inv.v } }
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: usize) -> HeisIsometry {
        let mut acc = HeisIsometry::identity(self.dim());
        for _ in 0..k {
            acc = acc.compose(self).expect("same dimension");
        }
        acc
    }

    pub fn apply(&self, p: &HPoint) -> Result<HPoint> {
        apply_heis_isometry(self, p)
    }

    pub fn embed(&self) -> CMatrix {
        embed(self)
    }
}

pub(crate) fn unitary_deviation(a: &CMatrix) -> f64 {
    let k = a.nrows();
    (a.adjoint() * a - CMatrix::identity(k, k))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn cygan_norm(p: &HPoint) -> Result<f64> {
    Ok(p.require_finite()?.w().norm().sqrt())
}

/// Extended Cygan distance on the closed Siegel domain,
/// `| |ξ_p-ξ_q|² + |u_p-u_q| - i(v_p - v_q + 2 Im⟨⟨ξ_p, ξ_q⟩⟩) |^{1/2}`.
/// On the boundary it equals `‖q⁻¹p‖_c`.
pub fn cygan_dist(p: &HPoint, q: &HPoint) -> Result<f64> {
    let (a, b) = (p.require_finite()?, q.require_finite()?);
    check_dim(a.dim(), b.dim())?;
    Ok(cygan_dist_raw(a, b))
}

pub(crate) fn cygan_dist_raw(a: &Horospherical, b: &Horospherical) -> f64 {
    let dxi: f64 = a.xi.iter().zip(&b.xi).map(|(x, y)| (x - y).norm_sqr()).sum();
    let re = dxi + (a.u - b.u).abs();
    let im = a.v - b.v + 2.0 * pairing(&a.xi, &b.xi).im;
    re.hypot(im).sqrt()
}

pub fn apply_heis_isometry(g: &HeisIsometry, p: &HPoint) -> Result<HPoint> {
    check_dim(g.dim(), p.dim())?;
    match p {
        HPoint::Infinity { n } => Ok(HPoint::Infinity { n: *n }),
        HPoint::Finite(h) => {
            let r = g.rotate(&h.xi);
            let t = &g.tau;
            Ok(HPoint::Finite(Horospherical {
                xi: t.xi.iter().zip(&r).map(|(a, b)| a + b).collect(),
                v: t.v + h.v + 2.0 * pairing(&t.xi, &r).im,
                u: h.u,
            }))
        }
    }
}

/// Heisenberg dilation `(ξ, v, u) ↦ (λξ, λ²v, λ²u)`.
pub fn dilate(p: &HPoint, lambda: f64) -> HPoint {
    match p {
        HPoint::Infinity { n } => HPoint::Infinity { n: *n },
        HPoint::Finite(h) => HPoint::Finite(Horospherical {
            xi: h.xi.iter().map(|z| z * lambda).collect(),
            v: h.v * lambda * lambda,
            u: h.u * lambda * lambda,
        }),
    }
}

/// `𝓘(ξ, v) = (ξ / (|ξ|² - iv), -v / (v² + |ξ|⁴))` on the boundary, with
/// `𝓘(0) = ∞` and `𝓘(∞) = 0`.
pub fn h_inversion(p: &HPoint) -> Result<HPoint> {
    match p {
        HPoint::Infinity { n } => Ok(HPoint::origin(*n)),
        HPoint::Finite(h) => {
            if h.u != 0.0 {
                return Err(Error::NotBoundary);
            }
            let r2 = norm_sqr(&h.xi);
            let w = c64(r2, -h.v);
            if w.norm() == 0.0 {
                return Ok(HPoint::Infinity { n: h.dim() });
            }
            Ok(HPoint::Finite(Horospherical {
                xi: h.xi.iter().map(|z| z / w).collect(),
                v: -h.v / (h.v * h.v + r2 * r2),
                u: 0.0,
            }))
        }
    }
}

/// Matrix of the Heisenberg translation by `(ξ, v)`:
///
/// ```text
///     [ I         ξ          ξ       ]
///     [ -ξ̄ᵗ     1 - c       -c       ]     c = (|ξ|² - iv) / 2
///     [ ξ̄ᵗ        c        1 + c     ]
/// ```
pub fn translation_matrix(tau: &HeisElement) -> CMatrix {
    let n = tau.dim();
    let c = c64(norm_sqr(&tau.xi), -tau.v) * 0.5;
    let one = c64(1.0, 0.0);
    let mut m = CMatrix::identity(n + 1, n + 1);
    for (i, x) in tau.xi.iter().enumerate() {
        m[(i, n - 1)] = *x;
        m[(i, n)] = *x;
        m[(n - 1, i)] = -x.conj();
        m[(n, i)] = x.conj();
    }
    m[(n - 1, n - 1)] = one - c;
    m[(n - 1, n)] = -c;
    m[(n, n - 1)] = c;
    m[(n, n)] = one + c;
    m
}

pub fn rotation_matrix(a: &CMatrix) -> CMatrix {
    let m = a.nrows();
    let mut r = CMatrix::identity(m + 2, m + 2);
    r.view_mut((0, 0), (m, m)).copy_from(a);
    r
}

/// `embed((A, τ)) = embed(τ) · blockdiag(A, 1, 1)`: rotation first, then
/// translation.
pub fn embed(g: &HeisIsometry) -> CMatrix {
    translation_matrix(&g.tau) * rotation_matrix(&g.a)
}

/// A connected subgroup `V` of `H_n` of the form `W` or `W × center`, where
/// `W ⊆ C^{n-1}` is a real-linear subspace, together with the conjugator
/// `b` and the index `k` of the translation subgroup.
///
/// The set preserved by the original group is `b⁻¹·V`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgroupDescriptor {
    /// Real-orthonormal basis of `W`.
    pub basis: Vec<Vec<C64>>,
    pub include_center: bool,
    pub conjugator: HeisElement,
    pub index: usize,
}

impl SubgroupDescriptor {
    /// Builds a descriptor from any spanning set of `W`, orthonormalizing it.
    /// Without the center, `W` must be isotropic (`Im⟨⟨w, w'⟩⟩ = 0`) for
    /// `V` to be a subgroup.
    pub fn new(
        n: usize,
        span: &[Vec<C64>],
        include_center: bool,
        conjugator: HeisElement,
        index: usize,
    ) -> Result<Self> {
        for s in span {
            check_dim(n - 1, s.len())?;
        }
        check_dim(n, conjugator.dim())?;
        let basis = real_orthonormal_basis(span, 1e-10);
        if !include_center {
            for (i, a) in basis.iter().enumerate() {
                for b in &basis[i + 1..] {
                    if pairing(a, b).im.abs() > 1e-10 {
                        return Err(Error::InvalidSubgroup(
                            "W is not isotropic, so W alone is not a subgroup; include the center".into(),
                        ));
                    }
                }
            }
        }
        Ok(SubgroupDescriptor { basis, include_center, conjugator, index: index.max(1) })
    }

    pub fn center(n: usize) -> Self {
        SubgroupDescriptor {
            basis: vec![],
            include_center: true,
            conjugator: HeisElement::identity(n),
            index: 1,
        }
    }

    pub fn whole(n: usize) -> Self {
        let mut span = vec![];
        for j in 0..n - 1 {
            let mut e = vec![c64(0.0, 0.0); n - 1];
            e[j] = c64(1.0, 0.0);
            span.push(e.clone());
            e[j] = c64(0.0, 1.0);
            span.push(e);
        }
        SubgroupDescriptor::new(n, &span, true, HeisElement::identity(n), 1).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.conjugator.dim()
    }

    /// Real dimension of `V`.
    pub fn real_dim(&self) -> usize {
        self.basis.len() + usize::from(self.include_center)
    }

    /// Real-orthogonal projection onto `W`.
    pub fn project(&self, xi: &[C64]) -> Vec<C64> {
        let mut out = vec![c64(0.0, 0.0); xi.len()];
        for e in &self.basis {
            let c = real_dot(xi, e);
            for (o, x) in out.iter_mut().zip(e) {
                *o += x * c;
            }
        }
        out
    }

    pub fn contains(&self, g: &HeisElement, tol: f64) -> bool {
        let p = self.project(&g.xi);
        let off: f64 = g.xi.iter().zip(&p).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        off <= tol && (self.include_center || g.v.abs() <= tol)
    }
}

/// Gram–Schmidt in `R^{2(n-1)}`; drops vectors dependent within `tol`.
pub(crate) fn real_orthonormal_basis(span: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = vec![];
    for s in span {
        let mut v = s.clone();
        for _ in 0..2 {
            for e in &basis {
                let c = real_dot(&v, e);
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= y * c;
                }
            }
        }
        let norm = norm_sqr(&v).sqrt();
        let scale = norm_sqr(s).sqrt().max(1.0);
        if norm > tol * scale {
            basis.push(v.iter().map(|x| x / norm).collect());
        }
    }
    basis
}

/// `inf_{q ∈ b⁻¹V} ρ_c(p, q)` over boundary points `q` of the subgroup.
///
/// With the center included the vertical offset can be cancelled exactly
/// and the infimum is `(|ξ_⊥|² + u)^{1/2}`. Without it (isotropic `W`) the
/// minimizer lies on a line in `W`, and the stationarity condition is the
/// depressed cubic `t³ + (B + 2G²)t + Gc = 0`, solved by Cardano's formula.
pub fn heis_dist_to_subgroup(p: &HPoint, sub: &SubgroupDescriptor) -> Result<f64> {
    let h = p.require_finite()?;
    check_dim(sub.dim(), h.dim())?;
    // move into the frame where the invariant set is V itself
    let moved = apply_heis_isometry(&HeisIsometry::translation(sub.conjugator.clone()), p)?;
    let h = moved.finite().expect("finite");
    let a = sub.project(&h.xi);
    let b: Vec<C64> = h.xi.iter().zip(&a).map(|(x, y)| x - y).collect();
    let big_b = norm_sqr(&b) + h.u;
    if sub.include_center {
        return Ok(big_b.sqrt());
    }
    let c = h.v + 2.0 * pairing(&b, &a).im;
    let minus_ib: Vec<C64> = b.iter().map(|z| z * c64(0.0, -1.0)).collect();
    let g = norm_sqr(&sub.project(&minus_ib)).sqrt();
    let t = depressed_cubic_root(big_b + 2.0 * g * g, g * c);
    let f = (big_b + t * t).powi(2) + (c + 2.0 * g * t).powi(2);
    Ok(f.sqrt().sqrt())
}

/// Real root of `t³ + pt + q = 0` for `p ≥ 0` (unique), polished by Newton.
fn depressed_cubic_root(p: f64, q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let s = disc.sqrt();
    let mut t = (-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt();
    for _ in 0..3 {
        let f = t * t * t + p * t + q;
        let df = 3.0 * t * t + p;
        if df == 0.0 {
            break;
        }
        t -= f / df;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{is_j_unitary, lift, unlift, HPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn el(xi: &[(f64, f64)], v: f64) -> HeisElement {
        HeisElement::new(xi.iter().map(|&(a, b)| c64(a, b)).collect(), v)
    }

    pub(crate) fn random_unitary(rng: &mut ChaCha8Rng, m: usize) -> CMatrix {
        let g = CMatrix::from_fn(m, m, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        g.qr().q()
    }

    fn random_el(rng: &mut ChaCha8Rng, n: usize) -> HeisElement {
        HeisElement::new(
            (0..n - 1).map(|_| c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect(),
            rng.random_range(-3.0..3.0),
        )
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize, u: f64) -> HPoint {
        let e = random_el(rng, n);
        HPoint::new(e.xi, e.v, u).unwrap()
    }

    fn dist(a: &HeisElement, b: &HeisElement) -> f64 {
        a.xi.iter().zip(&b.xi).map(|(x, y)| (x - y).norm()).fold((a.v - b.v).abs(), f64::max)
    }

    #[test]
    fn group_law_examples() {
        let id = HeisElement::identity(2);
        let a = el(&[(0.3, -1.2)], 2.5);
        assert_eq!(h_mul(&id, &a).unwrap(), a);
        assert!(h_mul(&a, &h_inv(&a)).unwrap().is_identity(0.0));
        assert_eq!(h_mul(&el(&[(1.0, 0.0)], 0.0), &el(&[(0.0, 1.0)], 0.0)).unwrap(), el(&[(1.0, 1.0)], -2.0));
        assert_eq!(h_inv(&el(&[(1.0, 0.0)], 3.0)), el(&[(-1.0, 0.0)], -3.0));
        assert_eq!(h_inv(&id), id);
        assert!(h_mul(&id, &HeisElement::identity(3)).is_err());
    }

    #[test]
    fn associativity_center_and_nilpotency() {
        // exact on integers
        let a = el(&[(1.0, 2.0), (-3.0, 1.0)], 4.0);
        let b = el(&[(0.0, -1.0), (2.0, 2.0)], -1.0);
        let c = el(&[(5.0, 0.0), (1.0, -4.0)], 7.0);
        let l = h_mul(&h_mul(&a, &b).unwrap(), &c).unwrap();
        let r = h_mul(&a, &h_mul(&b, &c).unwrap()).unwrap();
        assert_eq!(l, r);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rng.random_range(2..5);
            let (a, b, c) = (random_el(&mut rng, n), random_el(&mut rng, n), random_el(&mut rng, n));
            let l = h_mul(&h_mul(&a, &b).unwrap(), &c).unwrap();
            let r = h_mul(&a, &h_mul(&b, &c).unwrap()).unwrap();
            assert!(dist(&l, &r) < 1e-12);
            let z = HeisElement::new(vec![c64(0.0, 0.0); n - 1], rng.random_range(-5.0..5.0));
            assert_eq!(h_mul(&z, &a).unwrap(), h_mul(&a, &z).unwrap());
            let k = commutator(&a, &b).unwrap();
            assert!(k.xi.iter().all(|x| x.norm() < 1e-12));
            assert!(commutator(&k, &c).unwrap().is_identity(1e-12));
            assert_eq!(h_inv(&h_inv(&a)), a);
        }
    }

    #[test]
    fn cygan_norm_examples() {
        let p = HPoint::new(vec![c64(0.0, 0.0)], 0.0, 1.0).unwrap();
        assert!((cygan_norm(&p).unwrap() - 1.0).abs() < 1e-15);
        let p = HPoint::new(vec![c64(0.6, 0.8)], 0.0, 0.0).unwrap();
        assert!((cygan_norm(&p).unwrap() - 1.0).abs() < 1e-15);
        let p = HPoint::new(vec![c64(0.0, 0.0)], 4.0, 0.0).unwrap();
        assert!((cygan_norm(&p).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(cygan_norm(&HPoint::infinity(2)), Err(Error::InfinityNotAllowed));
    }

    #[test]
    fn cygan_dist_examples_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..2000 {
            let n = rng.random_range(2..4);
            let u1 = if rng.random_bool(0.5) { 0.0 } else { rng.random_range(0.0..2.0) };
            let u2 = if rng.random_bool(0.5) { 0.0 } else { rng.random_range(0.0..2.0) };
            let p = random_point(&mut rng, n, u1);
            let q = random_point(&mut rng, n, u2);
            assert_eq!(cygan_dist(&p, &p).unwrap(), 0.0);
            let d = cygan_dist(&p, &q).unwrap();
            assert!((d - cygan_dist(&q, &p).unwrap()).abs() < 1e-12);
            let g = HeisIsometry::new(random_unitary(&mut rng, n - 1), random_el(&mut rng, n)).unwrap();
            let d2 = cygan_dist(&g.apply(&p).unwrap(), &g.apply(&q).unwrap()).unwrap();
            assert!((d - d2).abs() < 1e-12 * (1.0 + d), "{d} {d2}");
            // dilations scale the metric
            let d3 = cygan_dist(&dilate(&p, 1.7), &dilate(&q, 1.7)).unwrap();
            assert!((d3 - 1.7 * d).abs() < 1e-12 * (1.0 + d));
            // distance from the origin on the boundary is the norm
            if u1 == 0.0 {
                let o = HPoint::origin(n);
                assert!((cygan_dist(&o, &p).unwrap() - cygan_norm(&p).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn heis_isometry_action() {
        let p = HPoint::new(vec![c64(0.5, -0.25)], 1.5, 0.75).unwrap();
        assert_eq!(HeisIsometry::identity(2).apply(&p).unwrap(), p);
        let g = HeisIsometry::translation(el(&[(1.0, 2.0)], -1.0));
        let h = p.finite().unwrap();
        let expect_v = -1.0 + 1.5 + 2.0 * (c64(1.0, 2.0) * h.xi[0].conj()).im;
        let got = g.apply(&p).unwrap();
        let gf = got.finite().unwrap();
        assert_eq!(gf.xi[0], c64(1.5, 1.75));
        assert!((gf.v - expect_v).abs() < 1e-15);
        assert_eq!(gf.u, 0.75);
        assert_eq!(g.apply(&HPoint::infinity(2)).unwrap(), HPoint::infinity(2));
    }

    #[test]
    fn inversion_examples() {
        let p = HPoint::boundary(vec![c64(1.0, 0.0)], 0.0).unwrap();
        assert_eq!(h_inversion(&p).unwrap(), p);
        let p = HPoint::boundary(vec![c64(0.0, 0.0)], 1.0).unwrap();
        assert_eq!(h_inversion(&p).unwrap(), HPoint::boundary(vec![c64(0.0, 0.0)], -1.0).unwrap());
        assert_eq!(h_inversion(&HPoint::origin(3)).unwrap(), HPoint::infinity(3));
        assert_eq!(h_inversion(&HPoint::infinity(3)).unwrap(), HPoint::origin(3));
        let interior = HPoint::new(vec![c64(1.0, 0.0)], 0.0, 0.5).unwrap();
        assert_eq!(h_inversion(&interior), Err(Error::NotBoundary));
    }

    #[test]
    fn inversion_is_the_swap_matrix_on_lifts() {
        // 𝓘 acts on lifts as diag(1,…,1,-1,1) up to scale: (2ξ, 1-w, 1+w) ↦ (2ξ, w-1, w+1) = w·lift(𝓘p)
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let p = random_point(&mut rng, 3, 0.0);
            let mut z = lift(&p);
            z.0[2] = -z.0[2];
            let q = unlift(&z, 1e-12).unwrap();
            let r = h_inversion(&p).unwrap();
            assert!(cygan_dist(&q, &r).unwrap() < 1e-6);
        }
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(&HeisIsometry::identity(3)), CMatrix::identity(4, 4));
        let m = embed(&HeisIsometry::translation(el(&[(1.0, 0.0)], 0.0)));
        let expect = [[1.0, 1.0, 1.0], [-1.0, 0.5, -0.5], [1.0, 0.5, 1.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], c64(expect[i][j], 0.0));
            }
        }
    }

    #[test]
    fn embed_product_reads_off_group_law() {
        // Oracle for (1,0)·(i,0) = (1+i, -2): product of the translation matrices.
        let a = translation_matrix(&el(&[(1.0, 0.0)], 0.0));
        let b = translation_matrix(&el(&[(0.0, 1.0)], 0.0));
        let ab = a * b;
        let expect = translation_matrix(&el(&[(1.0, 1.0)], -2.0));
        assert!((ab - expect).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn embed_is_homomorphism_and_j_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..500 {
            let n = rng.random_range(2..4);
            let g = HeisIsometry::new(random_unitary(&mut rng, n - 1), random_el(&mut rng, n)).unwrap();
            let h = HeisIsometry::new(random_unitary(&mut rng, n - 1), random_el(&mut rng, n)).unwrap();
            let (mg, mh) = (embed(&g), embed(&h));
            assert!(is_j_unitary(&mg, 1e-10));
            let err = (&mg * &mh - embed(&g.compose(&h).unwrap())).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{err}");
            let inv_err = (&mg * embed(&g.inverse()) - CMatrix::identity(n + 1, n + 1))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(inv_err < 1e-10);
        }
    }

    #[test]
    fn non_unitary_rotation_rejected() {
        let a = CMatrix::from_element(1, 1, c64(2.0, 0.0));
        assert!(matches!(HeisIsometry::rotation(a), Err(Error::NonUnitaryRotation(_))));
    }

    /// Brute-force oracle: golden-section / grid minimization of the Cygan
    /// distance over a one-parameter family in V.
    fn brute_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        let steps = 4000;
        for i in 0..=steps {
            let t = lo + (hi - lo) * i as f64 / steps as f64;
            let v = f(t);
            if v < best.0 {
                best = (v, t);
            }
        }
        let (mut a, mut b) = (best.1 - (hi - lo) / steps as f64, best.1 + (hi - lo) / steps as f64);
        let gr = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - gr * (b - a);
            let d = a + gr * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        f((a + b) / 2.0)
    }

    #[test]
    fn distance_to_center_closed_form() {
        let v = SubgroupDescriptor::center(2);
        let p = HPoint::boundary(vec![c64(0.6, -0.8)], 0.0).unwrap();
        assert!((heis_dist_to_subgroup(&p, &v).unwrap() - 1.0).abs() < 1e-15);
        let on = HPoint::boundary(vec![c64(0.0, 0.0)], 3.5).unwrap();
        assert_eq!(heis_dist_to_subgroup(&on, &v).unwrap(), 0.0);
        // oracle: minimize over the vertical coordinate
        let p = HPoint::boundary(vec![c64(0.3, 1.1)], -0.7).unwrap();
        let oracle = brute_min(
            |s| cygan_dist(&p, &HPoint::boundary(vec![c64(0.0, 0.0)], s).unwrap()).unwrap(),
            -10.0,
            10.0,
        );
        assert!((heis_dist_to_subgroup(&p, &v).unwrap() - oracle).abs() < 1e-7);
        let whole = SubgroupDescriptor::whole(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = random_point(&mut rng, 3, 0.0);
            assert!(heis_dist_to_subgroup(&p, &whole).unwrap() < 1e-12);
        }
        assert!(heis_dist_to_subgroup(&HPoint::infinity(2), &v).is_err());
    }

    #[test]
    fn distance_to_horizontal_line_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let dir = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let sub = SubgroupDescriptor::new(2, &[vec![dir]], false, HeisElement::identity(2), 1).unwrap();
            let u = if rng.random_bool(0.5) { 0.0 } else { rng.random_range(0.0..1.0) };
            let p = random_point(&mut rng, 2, u);
            let unit = sub.basis[0][0];
            let oracle = brute_min(
                |t| cygan_dist(&p, &HPoint::boundary(vec![unit * t], 0.0).unwrap()).unwrap(),
                -20.0,
                20.0,
            );
            let got = heis_dist_to_subgroup(&p, &sub).unwrap();
            assert!((got - oracle).abs() < 1e-7, "{got} vs {oracle}");
        }
    }

    #[test]
    fn conjugator_shifts_the_invariant_set() {
        let b = el(&[(0.0, 0.5)], 1.0);
        let sub = SubgroupDescriptor::new(2, &[vec![c64(1.0, 0.0)]], false, b.clone(), 1).unwrap();
        // points of b⁻¹·V are at distance zero
        for t in [-2.0, 0.0, 0.7] {
            let q = h_mul(&h_inv(&b), &el(&[(t, 0.0)], 0.0)).unwrap();
            assert!(heis_dist_to_subgroup(&q.to_point(), &sub).unwrap() < 1e-7);
        }
    }

    #[test]
    fn non_isotropic_w_requires_center() {
        let span = vec![vec![c64(1.0, 0.0)], vec![c64(0.0, 1.0)]];
        assert!(SubgroupDescriptor::new(2, &span, false, HeisElement::identity(2), 1).is_err());
        assert!(SubgroupDescriptor::new(2, &span, true, HeisElement::identity(2), 1).is_ok());
    }

    #[test]
    fn inversion_reciprocity_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let n = rng.random_range(2..4);
            let p = random_point(&mut rng, n, 0.0);
            let q = h_inversion(&p).unwrap();
            let back = h_inversion(&q).unwrap();
            assert!(cygan_dist(&p, &back).unwrap() < 1e-6);
            let prod = cygan_norm(&p).unwrap() * cygan_norm(&q).unwrap();
            assert!((prod - 1.0).abs() < 1e-10);
        }
    }
}
