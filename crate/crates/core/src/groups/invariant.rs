use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::GroupSpec;
use crate::error::{Error, Result};
use crate::heisenberg::{
    commutator, cygan_dist, cygan_norm, h_inv, h_mul, pairing, real_dot, real_orthonormal_basis, HeisElement, HeisIsometry,
    SubgroupDescriptor,
};
use crate::hermitian::{c64, CMatrix, HPoint, C64};
use crate::rng::stream;

const TOL: f64 = 1e-9;
/// Largest rotation order searched for class (b).
const MAX_ORDER: usize = 10_000;

fn is_identity(a: &CMatrix) -> bool {
    let k = a.nrows();
    (a - CMatrix::identity(k, k)).iter().all(|z| z.norm() <= TOL)
}

fn rotation_order(a: &CMatrix) -> Option<usize> {
    let mut p = a.clone();
    for k in 1..=MAX_ORDER {
        if is_identity(&p) {
            return Some(k);
        }
        p = &p * a;
    }
    None
}

/// Class (a) rule on a set of translations: `W` is the real span of the
/// horizontal parts. The center is needed unless `W` is isotropic and the
/// vertical parts are a linear function `φ` of the horizontal ones, in
/// which case conjugating by `(-i·g/4, 0)`, `g` the Riesz vector of `φ`,
/// moves every generator into `W`.
fn translation_rule(n: usize, taus: &[HeisElement]) -> Result<SubgroupDescriptor> {
    let span: Vec<Vec<C64>> = taus.iter().map(|t| t.xi.clone()).collect();
    let basis = real_orthonormal_basis(&span, 1e-10);
    let isotropic = basis
        .iter()
        .enumerate()
        .all(|(i, a)| basis[i + 1..].iter().all(|b| pairing(a, b).im.abs() <= TOL));
    if !isotropic {
        return SubgroupDescriptor::new(n, &span, true, HeisElement::identity(n), 1);
    }
    let (m, d) = (taus.len(), basis.len());
    let coords = DMatrix::from_fn(m, d, |i, j| real_dot(&taus[i].xi, &basis[j]));
    let v = DVector::from_iterator(m, taus.iter().map(|t| t.v));
    let phi = if d == 0 {
        DVector::zeros(0)
    } else {
        coords.clone().svd(true, true).solve(&v, 1e-12).map_err(|e| Error::InvalidArgument(e.to_string()))?
    };
    let residual = (&coords * &phi - &v).norm();
    if residual > TOL * (1.0 + v.norm()) {
        return SubgroupDescriptor::new(n, &span, true, HeisElement::identity(n), 1);
    }
    let mut zeta = vec![c64(0.0, 0.0); n - 1];
    for (e, &c) in basis.iter().zip(phi.iter()) {
        for (z, x) in zeta.iter_mut().zip(e) {
            *z += x * c64(0.0, -c / 4.0);
        }
    }
    SubgroupDescriptor::new(n, &span, false, HeisElement::new(zeta, 0.0), 1)
}

/// Smallest connected subgroup `V` of `H_n` (up to the conjugator `b`) on
/// which a finite-index subgroup acts cocompactly by translations, for
/// (a) groups of Heisenberg translations and (b) cyclic groups `⟨(A, τ)⟩`
/// with `A` of finite order.
pub fn minimal_invariant_subgroup(g: &GroupSpec) -> Result<SubgroupDescriptor> {
    let n = g.n();
    let gens = g
        .heis_generators()
        .ok_or_else(|| Error::UnsupportedGroupClass("generators must be Heisenberg isometries".into()))?;
    if gens.iter().all(|h| is_identity(&h.a)) {
        let taus: Vec<HeisElement> = gens.iter().map(|h| h.tau.clone()).collect();
        return translation_rule(n, &taus);
    }
    if gens.len() != 1 {
        return Err(Error::UnsupportedGroupClass(
            "several generators with nontrivial rotation parts".into(),
        ));
    }
    let h = gens[0];
    let k = rotation_order(&h.a)
        .ok_or_else(|| Error::UnsupportedGroupClass("rotation part has infinite (or very large) order".into()))?;
    let m = n - 1;
    let shifted = &h.a - CMatrix::identity(m, m);
    let svd = shifted.clone().svd(true, true);
    let v_t = svd.v_t.as_ref().expect("requested");
    // orthogonal projection onto Fix(A)
    let mut xi_par = vec![c64(0.0, 0.0); m];
    for i in 0..m {
        if svd.singular_values[i] <= TOL {
            let e: Vec<C64> = v_t.row(i).adjoint().iter().copied().collect();
            let c = pairing(&h.tau.xi, &e);
            for (x, y) in xi_par.iter_mut().zip(&e) {
                *x += y * c;
            }
        }
    }
    let xi_perp = CMatrix::from_iterator(m, 1, h.tau.xi.iter().zip(&xi_par).map(|(a, b)| a - b));
    let zeta = svd.solve(&xi_perp, TOL).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let b = HeisElement::new(zeta.iter().copied().collect(), 0.0);
    let bt = HeisIsometry::translation(b.clone());
    let conj = bt.compose(h)?.compose(&bt.inverse())?;
    let star = conj.pow(k);
    let inner = translation_rule(n, &[star.tau.clone()])?;
    let conjugator = h_mul(&inner.conjugator, &b)?;
    let span = inner.basis.clone();
    SubgroupDescriptor::new(n, &span, inner.include_center, conjugator, k)
}

/// Generators conjugated by the descriptor's `b`: `b g b⁻¹`.
pub fn conjugated_generators(g: &GroupSpec, desc: &SubgroupDescriptor) -> Result<Vec<HeisIsometry>> {
    let gens = g
        .heis_generators()
        .ok_or_else(|| Error::UnsupportedGroupClass("generators must be Heisenberg isometries".into()))?;
    let bt = HeisIsometry::translation(desc.conjugator.clone());
    let binv = bt.inverse();
    gens.iter().map(|h| bt.compose(h)?.compose(&binv)).collect()
}

/// `max_g ‖(A_g - I)|_W‖` over the conjugated generators, measured by the
/// Frobenius norm on an orthonormal basis of `W` (an upper bound for the
/// operator norm).
pub fn rotation_defect(g: &GroupSpec, desc: &SubgroupDescriptor) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for h in conjugated_generators(g, desc)? {
        let mut s = 0.0;
        for e in &desc.basis {
            let ae = h.rotate(e);
            s += ae.iter().zip(e).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
        }
        worst = worst.max(s.sqrt());
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocompactnessReport {
    /// Covering radius required: the largest Cygan norm among the
    /// generators of `Γ*` and their commutators.
    pub delta: f64,
    /// Half-width of the sampled box of `V` (horizontal; the vertical range is its square).
    pub box_radius: f64,
    pub samples: usize,
    pub orbit_size: usize,
    /// Largest distance from a sample to the orbit of the identity.
    pub max_gap: f64,
    /// Orbit points not lying on `V` (should be none).
    pub points_off_v: usize,
    pub passed: bool,
}

/// Checks that the `Γ*`-orbit of the identity, conjugated into `V`, stays
/// on `V` and is `δ`-dense in a box of `V`.
pub fn cocompactness_check(g: &GroupSpec, desc: &SubgroupDescriptor, samples: usize, seed: u64) -> Result<CocompactnessReport> {
    let k = desc.index;
    let star: Vec<HeisElement> = conjugated_generators(g, desc)?
        .iter()
        .map(|h| {
            let p = h.pow(k);
            if is_identity(&p.a) {
                Ok(p.tau)
            } else {
                Err(Error::InvalidSubgroup("Γ* contains a nontrivial rotation".into()))
            }
        })
        .collect::<Result<_>>()?;
    let n = g.n();
    // commutators generate the vertical part when W is not isotropic
    let mut spanning = star.clone();
    for (i, a) in star.iter().enumerate() {
        for b in &star[i + 1..] {
            spanning.push(commutator(a, b)?);
        }
    }
    let delta = spanning.iter().map(|t| cygan_norm(&t.to_point())).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let r = 2.0 * delta;

    // breadth-first orbit of the identity in H_n
    let key = |t: &HeisElement| -> Vec<i64> {
        t.xi.iter().flat_map(|z| [(z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64]).chain([(t.v * 1e8).round() as i64]).collect()
    };
    let mut letters = vec![];
    for s in &star {
        letters.push(s.clone());
        letters.push(h_inv(s));
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut orbit = vec![HeisElement::identity(n)];
    seen.insert(key(&orbit[0]));
    let mut frontier = orbit.clone();
    let reach = 2.0 * r + delta;
    while !frontier.is_empty() && orbit.len() < 200_000 {
        let mut next = vec![];
        for f in &frontier {
            for l in &letters {
                let p = h_mul(f, l)?;
                if cygan_norm(&p.to_point())? > reach * 1.5 + 1.0 {
                    continue;
                }
                if seen.insert(key(&p)) {
                    next.push(p.clone());
                    orbit.push(p);
                }
            }
        }
        frontier = next;
    }
    let points_off_v = orbit.iter().filter(|p| !desc.contains(p, 1e-8)).count();

    let mut max_gap: f64 = 0.0;
    if delta > 0.0 && desc.real_dim() > 0 {
        for i in 0..samples {
            let mut rng = stream(seed, i as u64);
            let mut xi = vec![c64(0.0, 0.0); n - 1];
            for e in &desc.basis {
                let t: f64 = rng.random_range(-r..=r);
                for (x, y) in xi.iter_mut().zip(e) {
                    *x += y * t;
                }
            }
            let v = if desc.include_center { rng.random_range(-r * r..=r * r) } else { 0.0 };
            let q = HPoint::boundary(xi, v)?;
            let mut best = f64::INFINITY;
            for p in &orbit {
                best = best.min(cygan_dist(&q, &p.to_point())?);
            }
            max_gap = max_gap.max(best);
        }
    }
    Ok(CocompactnessReport {
        delta,
        box_radius: r,
        samples,
        orbit_size: orbit.len(),
        max_gap,
        points_off_v,
        passed: points_off_v == 0 && max_gap <= delta,
    })
}
