//! Elements of `PU(n,1)` as J-unitary matrices: canonical form,
//! classification, fixed points and the action on the closed ball.

use std::fmt;

use crate::error::{Error, Result};
use crate::heisenberg::{embed, HeisIsometry};
use crate::hermitian::{
    c64, form_raw, j_matrix, j_unitary_deviation, lift, point_location, unlift, unlift_interior, CMatrix, CVector, HPoint,
    LiftVector, Location, C64, DEFAULT_LOCATION_TOL,
};

/// Tolerance used when admitting a matrix as an [`Isometry`].
pub const ADMISSION_TOL: f64 = 1e-8;

/// An element of `PU(n,1)` stored in canonical form: `det = 1`, then the
/// global phase rotated so that the first entry of near-maximal modulus is
/// real positive.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    m: CMatrix,
}

impl Isometry {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tol(m, ADMISSION_TOL)
    }

    pub fn with_tol(m: CMatrix, tol: f64) -> Result<Self> {
        match j_unitary_deviation(&m) {
            Some(d) if d <= tol => Ok(Isometry { m: canonical(&m) }),
            Some(d) => Err(Error::NotJUnitary { deviation: d, tol }),
            None => Err(Error::NotJUnitary { deviation: f64::INFINITY, tol }),
        }
    }

    /// Wraps a product of canonical matrices; only the phase is refreshed.
    pub(crate) fn from_product(m: CMatrix) -> Self {
        Isometry { m: fix_phase(m) }
    }

    pub fn identity(n: usize) -> Self {
        Isometry { m: CMatrix::identity(n + 1, n + 1) }
    }

    pub fn from_heis(g: &HeisIsometry) -> Self {
        Isometry { m: canonical(&embed(g)) }
    }

    /// `blockdiag(I_{n-1}, [[cosh t, sinh t], [sinh t, cosh t]])`.
    pub fn boost(n: usize, t: f64) -> Self {
        let mut m = CMatrix::identity(n + 1, n + 1);
        m[(n - 1, n - 1)] = c64(t.cosh(), 0.0);
        m[(n, n)] = c64(t.cosh(), 0.0);
        m[(n - 1, n)] = c64(t.sinh(), 0.0);
        m[(n, n - 1)] = c64(t.sinh(), 0.0);
        Isometry::from_product(m)
    }

    /// The Heisenberg inversion `diag(1, …, 1, -1, 1)`.
    pub fn inversion(n: usize) -> Self {
        let mut m = CMatrix::identity(n + 1, n + 1);
        m[(n - 1, n - 1)] = c64(-1.0, 0.0);
        Isometry { m: canonical(&m) }
    }

    pub fn n(&self) -> usize {
        self.m.nrows() - 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::from_product(&self.m * &other.m)
    }

    /// `J M* J` is the inverse up to a unimodular scalar.
    pub fn inverse(&self) -> Isometry {
        let j = j_matrix(self.n());
        Isometry::from_product(&j * self.m.adjoint() * &j)
    }

    pub fn conjugate_by(&self, h: &Isometry) -> Isometry {
        h.compose(self).compose(&h.inverse())
    }

    pub fn apply_lift(&self, z: &LiftVector) -> LiftVector {
        LiftVector(&self.m * &z.0)
    }

    /// Action on any point of the closed ball.
    pub fn apply(&self, p: &HPoint) -> Result<HPoint> {
        if p.dim() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: p.dim() });
        }
        let l = lift(p);
        let z = self.apply_lift(&l);
        if p.is_interior() {
            unlift_interior(&z, l.form_value())
        } else {
            unlift(&z, DEFAULT_LOCATION_TOL)
        }
    }

    /// Max-entry distance between canonical forms after aligning the phase
    /// on the largest entry of `self`.
    pub fn projective_distance(&self, other: &Isometry) -> f64 {
        let (k, _) = argmax_modulus(&self.m);
        let b = other.m[k];
        if b.norm() == 0.0 {
            return f64::INFINITY;
        }
        let ph = self.m[k] / b;
        let ph = ph / ph.norm();
        self.m
            .iter()
            .zip(other.m.iter())
            .map(|(x, y)| (x - y * ph).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn argmax_modulus(m: &CMatrix) -> ((usize, usize), f64) {
    let mut best = ((0, 0), -1.0);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let a = m[(i, j)].norm();
            if a > best.1 {
                best = ((i, j), a);
            }
        }
    }
    best
}

fn canonical(m: &CMatrix) -> CMatrix {
    let det = m.determinant();
    let root = det.powf(1.0 / m.nrows() as f64);
    fix_phase(m / root)
}

/// Products of unimodular matrices are already unimodular; recomputing the
/// determinant of a matrix with large entries would only add cancellation
/// error, so only the phase is normalized.
fn fix_phase(mut out: CMatrix) -> CMatrix {
    let k = out.nrows();
    let (_, max) = argmax_modulus(&out);
    // first entry in row-major order within a relative 1e-6 of the maximum
    let mut pivot = c64(1.0, 0.0);
    'outer: for i in 0..k {
        for j in 0..k {
            if out[(i, j)].norm() >= max * (1.0 - 1e-6) {
                pivot = out[(i, j)];
                break 'outer;
            }
        }
    }
    if pivot.norm() > 0.0 {
        out *= pivot.conj() / pivot.norm();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsometryType {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl fmt::Display for IsometryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsometryType::Identity => "Identity",
            IsometryType::Elliptic => "Elliptic",
            IsometryType::Parabolic => "Parabolic",
            IsometryType::Loxodromic => "Loxodromic",
        };
        f.write_str(s)
    }
}

/// Tolerances for [`classify`]. Eigenvalues are clustered at radius
/// `10·tol`; a cluster is semisimple when `M - λ̄I` has as many singular
/// values below `rank_tol·‖M‖₂` as the cluster has members.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub tol: f64,
    pub rank_tol: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { tol: 1e-4, rank_tol: 1e-8 }
    }
}

impl ClassifyConfig {
    pub fn cluster_radius(&self) -> f64 {
        10.0 * self.tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: IsometryType,
    /// Parabolic elements whose spectrum is not a single point
    /// (ellipto-parabolic / screw parabolic).
    pub has_nontrivial_rotation: bool,
}

#[derive(Clone, Debug)]
struct Cluster {
    mean: C64,
    size: usize,
    /// Orthonormal basis of the numerical null space of `M - λ̄I`.
    kernel: Vec<CVector>,
}

fn spectral_clusters(m: &CMatrix, cfg: &ClassifyConfig) -> Result<Vec<Cluster>> {
    let k = m.nrows();
    let eig = m
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::InvalidArgument("Schur decomposition failed".into()))?;
    let eig: Vec<C64> = eig.iter().copied().collect();
    // single-linkage clustering
    let mut label: Vec<usize> = (0..k).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if (eig[i] - eig[j]).norm() <= cfg.cluster_radius() {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let norm2 = m.clone().svd(false, false).singular_values.max();
    let mut roots: Vec<usize> = (0..k).map(|i| find(&mut label, i)).collect();
    let order = roots.clone();
    roots.sort_unstable();
    roots.dedup();
    let mut out = vec![];
    for r in roots {
        let members: Vec<usize> = (0..k).filter(|&i| order[i] == r).collect();
        let mean = members.iter().map(|&i| eig[i]).sum::<C64>() / members.len() as f64;
        let shifted = m - CMatrix::identity(k, k) * mean;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested");
        let kernel = (0..k)
            .filter(|&i| svd.singular_values[i] <= cfg.rank_tol * norm2)
            .map(|i| v_t.row(i).adjoint().into_owned())
            .collect();
        out.push(Cluster { mean, size: members.len(), kernel });
    }
    Ok(out)
}

pub fn classify(g: &Isometry, cfg: &ClassifyConfig) -> Result<Classification> {
    let m = g.matrix();
    let k = m.nrows();
    let lambda = m.trace() / k as f64;
    let scalar_dev = (m - CMatrix::identity(k, k) * lambda).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scalar_dev <= cfg.tol {
        return Ok(Classification { kind: IsometryType::Identity, has_nontrivial_rotation: false });
    }
    let clusters = spectral_clusters(m, cfg)?;
    if clusters.iter().any(|c| (c.mean.norm() - 1.0).abs() > cfg.tol) {
        return Ok(Classification { kind: IsometryType::Loxodromic, has_nontrivial_rotation: false });
    }
    let semisimple = clusters.iter().all(|c| c.kernel.len() >= c.size);
    Ok(if semisimple {
        Classification { kind: IsometryType::Elliptic, has_nontrivial_rotation: false }
    } else {
        Classification { kind: IsometryType::Parabolic, has_nontrivial_rotation: clusters.len() > 1 }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint {
    pub lift: LiftVector,
    pub location: Location,
    pub eigenvalue: C64,
}

impl FixedPoint {
    pub fn point(&self) -> Result<HPoint> {
        unlift(&self.lift, DEFAULT_LOCATION_TOL)
    }
}

/// Fixed points in the closed ball, one per eigenvalue cluster whose
/// eigenspace meets it. Within an eigenspace the representative minimizes
/// `⟨z,z⟩/‖z‖²`, so an interior fixed point is reported whenever one exists.
pub fn fixed_points(g: &Isometry, cfg: &ClassifyConfig) -> Result<Vec<FixedPoint>> {
    if classify(g, cfg)?.kind == IsometryType::Identity {
        return Err(Error::IdentityInput);
    }
    let mut out = vec![];
    for c in spectral_clusters(g.matrix(), cfg)? {
        if c.kernel.is_empty() {
            continue;
        }
        let d = c.kernel.len();
        let gram = CMatrix::from_fn(d, d, |i, j| form_raw(c.kernel[j].as_slice(), c.kernel[i].as_slice()));
        let eig = gram.symmetric_eigen();
        let (imin, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        let coeffs = eig.eigenvectors.column(imin);
        let mut z = CVector::zeros(g.n() + 1);
        for (b, a) in c.kernel.iter().zip(coeffs.iter()) {
            z += b * *a;
        }
        let lv = LiftVector(z);
        let location = point_location(&lv, 1e-7)?;
        if location != Location::Exterior {
            out.push(FixedPoint { lift: lv, location, eigenvalue: c.mean });
        }
    }
    Ok(out)
}

/// `unlift(M·lift(p))` for boundary points and infinity.
pub fn boundary_action(g: &Isometry, p: &HPoint) -> Result<HPoint> {
    if p.is_interior() {
        return Err(Error::NotBoundary);
    }
    g.apply(p)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::heisenberg::{apply_heis_isometry, cygan_dist, HeisElement};
    use crate::hermitian::{chordal_distance, is_j_unitary, HPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_unitary(rng: &mut ChaCha8Rng, m: usize) -> CMatrix {
        let g = CMatrix::from_fn(m, m, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        g.qr().q()
    }

    /// Random J-unitary: rotation in U(n)×U(1), a boost, and a translation.
    pub(crate) fn random_j_unitary(rng: &mut ChaCha8Rng, n: usize) -> Isometry {
        let mut r = CMatrix::identity(n + 1, n + 1);
        r.view_mut((0, 0), (n, n)).copy_from(&random_unitary(rng, n));
        let rot = Isometry::new(r).unwrap();
        let boost = Isometry::boost(n, rng.random_range(-1.0..1.0));
        let tau = HeisElement::new(
            (0..n - 1).map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
            rng.random_range(-1.0..1.0),
        );
        let t = Isometry::from_heis(&HeisIsometry::translation(tau));
        rot.compose(&boost).compose(&t)
    }

    fn translation(xi: &[(f64, f64)], v: f64) -> Isometry {
        Isometry::from_heis(&HeisIsometry::translation(HeisElement::new(
            xi.iter().map(|&(a, b)| c64(a, b)).collect(),
            v,
        )))
    }

    fn diag_rotation(phases: &[f64]) -> Isometry {
        let m = phases.len();
        let a = CMatrix::from_fn(m, m, |i, j| if i == j { C64::from_polar(1.0, phases[i]) } else { c64(0.0, 0.0) });
        Isometry::from_heis(&HeisIsometry::rotation(a).unwrap())
    }

    #[test]
    fn canonical_form_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_j_unitary(&mut rng, 2);
        let h = Isometry::new(g.matrix() * c64(-0.4, 2.2)).unwrap();
        assert!(g.projective_distance(&h) < 1e-12);
        assert!((h.matrix().determinant().norm() - 1.0).abs() < 1e-12);
        let bad = CMatrix::from_diagonal(&CVector::from_vec(vec![c64(2.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0)]));
        assert!(matches!(Isometry::new(bad), Err(Error::NotJUnitary { .. })));
    }

    #[test]
    fn classification_examples() {
        let cfg = ClassifyConfig::default();
        assert_eq!(classify(&Isometry::identity(2), &cfg).unwrap().kind, IsometryType::Identity);
        for (xi, v) in [((1.0, 0.0), 0.0), ((0.0, 0.0), 1.0), ((0.3, -2.0), 0.5)] {
            let c = classify(&translation(&[xi], v), &cfg).unwrap();
            assert_eq!(c.kind, IsometryType::Parabolic);
            assert!(!c.has_nontrivial_rotation);
        }
        assert_eq!(classify(&diag_rotation(&[0.7]), &cfg).unwrap().kind, IsometryType::Elliptic);
        assert_eq!(classify(&diag_rotation(&[0.0, 2.0]), &cfg).unwrap().kind, IsometryType::Elliptic);
        assert_eq!(classify(&Isometry::boost(2, 1.0), &cfg).unwrap().kind, IsometryType::Loxodromic);
        assert_eq!(classify(&Isometry::boost(3, 1.0), &cfg).unwrap().kind, IsometryType::Loxodromic);
        // screw parabolic: rotation composed with a translation along its fixed line
        let a = CMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c64(1.0, 0.0),
            (1, 1) => c64(0.0, 1.0),
            _ => c64(0.0, 0.0),
        });
        let g = Isometry::from_heis(
            &HeisIsometry::new(a, HeisElement::new(vec![c64(1.0, 0.0), c64(0.0, 0.0)], 0.0)).unwrap(),
        );
        let c = classify(&g, &cfg).unwrap();
        assert_eq!(c.kind, IsometryType::Parabolic);
        assert!(c.has_nontrivial_rotation);
    }

    #[test]
    fn classification_survives_conjugation_and_scaling() {
        let cfg = ClassifyConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let suite = [
            (translation(&[(1.0, 0.0)], 0.0), IsometryType::Parabolic),
            (translation(&[(0.0, 0.0)], 1.0), IsometryType::Parabolic),
            (diag_rotation(&[2.0 * std::f64::consts::PI / 3.0]), IsometryType::Elliptic),
            (Isometry::boost(2, 1.0), IsometryType::Loxodromic),
        ];
        for (g, kind) in suite.iter() {
            for _ in 0..200 {
                let h = random_j_unitary(&mut rng, 2);
                let c = g.conjugate_by(&h);
                assert_eq!(classify(&c, &cfg).unwrap().kind, *kind);
                let scaled = Isometry::new(c.matrix() * c64(0.0, 5.0)).unwrap();
                assert_eq!(classify(&scaled, &cfg).unwrap().kind, *kind);
            }
        }
    }

    #[test]
    fn fixed_point_examples() {
        let cfg = ClassifyConfig::default();
        let fps = fixed_points(&translation(&[(0.0, 0.0)], 1.0), &cfg).unwrap();
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].location, Location::Boundary);
        assert_eq!(fps[0].point().unwrap(), HPoint::infinity(2));

        let fps = fixed_points(&Isometry::boost(2, 1.0), &cfg).unwrap();
        assert_eq!(fps.len(), 2);
        assert!(fps.iter().all(|f| f.location == Location::Boundary));
        let pts: Vec<HPoint> = fps.iter().map(|f| f.point().unwrap()).collect();
        assert!(pts.contains(&HPoint::infinity(2)));
        assert!(pts.iter().any(|p| chordal_distance(p, &HPoint::origin(2)).unwrap() < 1e-9));

        let fps = fixed_points(&diag_rotation(&[1.0, 0.0]), &cfg).unwrap();
        let interior: Vec<_> = fps.iter().filter(|f| f.location == Location::Interior).collect();
        assert!(!interior.is_empty());
        // (0,…,0,1) is fixed, i.e. the point (0, 0, 1)
        let p = interior[0].point().unwrap();
        let h = p.finite().unwrap();
        assert!(h.xi.iter().all(|z| z.norm() < 1e-9) && h.v.abs() < 1e-9 && (h.u - 1.0).abs() < 1e-9);

        assert_eq!(fixed_points(&Isometry::identity(2), &cfg), Err(Error::IdentityInput));
    }

    #[test]
    fn fixed_points_consistent_with_type() {
        let cfg = ClassifyConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for _ in 0..100 {
            let h = random_j_unitary(&mut rng, 2);
            let par = translation(&[(0.5, 0.5)], -1.0).conjugate_by(&h);
            let fp = fixed_points(&par, &cfg).unwrap();
            assert_eq!(fp.len(), 1);
            assert_eq!(fp[0].location, Location::Boundary);
            let lox = Isometry::boost(2, 0.8).conjugate_by(&h);
            let fp = fixed_points(&lox, &cfg).unwrap();
            assert_eq!(fp.len(), 2);
            assert!(fp.iter().all(|f| f.location == Location::Boundary));
            let ell = diag_rotation(&[1.3]).conjugate_by(&h);
            let fp = fixed_points(&ell, &cfg).unwrap();
            assert!(fp.iter().any(|f| f.location == Location::Interior));
        }
    }

    #[test]
    fn boundary_action_matches_heisenberg_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        for _ in 0..500 {
            let n = rng.random_range(2..4);
            let g = HeisIsometry::new(
                random_unitary(&mut rng, n - 1),
                HeisElement::new(
                    (0..n - 1).map(|_| c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect(),
                    rng.random_range(-2.0..2.0),
                ),
            )
            .unwrap();
            let p = HPoint::boundary(
                (0..n - 1).map(|_| c64(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect(),
                rng.random_range(-2.0..2.0),
            )
            .unwrap();
            let iso = Isometry::from_heis(&g);
            assert!(is_j_unitary(iso.matrix(), 1e-10));
            let a = boundary_action(&iso, &p).unwrap();
            let b = apply_heis_isometry(&g, &p).unwrap();
            let (fa, fb) = (a.finite().unwrap(), b.finite().unwrap());
            let err = fa.xi.iter().zip(&fb.xi).map(|(x, y)| (x - y).norm()).fold((fa.v - fb.v).abs(), f64::max);
            assert!(err < 1e-12 * (1.0 + fb.v.abs()), "{err}");
            assert_eq!(boundary_action(&iso, &HPoint::infinity(n)).unwrap(), HPoint::infinity(n));
        }
    }

    #[test]
    fn boost_acts_as_dilation() {
        // Direct matrix multiplication on (2ξ, 1-w, 1+w): rows n-1, n give
        // e^t - w e^{-t} and e^t + w e^{-t}, i.e. w ↦ e^{-2t} w, ξ ↦ e^{-t} ξ.
        let t = 1.0f64;
        let g = Isometry::boost(2, t);
        let p = HPoint::boundary(vec![c64(0.4, -0.3)], 0.9).unwrap();
        let q = boundary_action(&g, &p).unwrap();
        let expect = crate::heisenberg::dilate(&p, (-t).exp());
        assert!(cygan_dist(&q, &expect).unwrap() < 1e-7);
        assert!(boundary_action(&g, &HPoint::new(vec![c64(0.0, 0.0)], 0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn boundary_action_is_a_group_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..300 {
            let g = random_j_unitary(&mut rng, 2);
            let h = random_j_unitary(&mut rng, 2);
            let p = HPoint::boundary(vec![c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))], rng.random_range(-1.0..1.0)).unwrap();
            let a = boundary_action(&g.compose(&h), &p).unwrap();
            let b = boundary_action(&g, &boundary_action(&h, &p).unwrap()).unwrap();
            assert!(chordal_distance(&a, &b).unwrap() < 1e-10);
        }
    }
}
