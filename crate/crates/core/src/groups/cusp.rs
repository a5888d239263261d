use rand::Rng;

use super::table::{enumerate_elements_with, EnumerationConfig};
use super::GroupSpec;
use crate::error::{Error, Result};
use crate::heisenberg::{apply_heis_isometry, h_inv, heis_dist_to_subgroup, HeisElement, HeisIsometry, SubgroupDescriptor};
use crate::hermitian::{c64, chordal_distance, HPoint};
use crate::isometry::Isometry;
use crate::par::Execution;
use crate::rng::stream;

/// `𝓘_p = T_p ∘ 𝓘 ∘ T_p⁻¹`, the inversion in the unit Cygan sphere about a
/// finite boundary point `p`; it swaps `p` and `∞`.
pub fn inversion_at(p: &HPoint) -> Result<Isometry> {
    let h = p.require_finite()?;
    if h.u != 0.0 {
        return Err(Error::NotBoundary);
    }
    let t = Isometry::from_heis(&HeisIsometry::translation(HeisElement::new(h.xi.clone(), h.v)));
    Ok(t.compose(&Isometry::inversion(p.dim())).compose(&t.inverse()))
}

/// `ρ_c(𝓘_p x, V)`, with `𝓘_∞` the identity. The cusp neighbourhood of
/// radius `r` is where this is at least `1/r`.
pub fn cusp_height(p: &HPoint, x: &HPoint, v: &SubgroupDescriptor) -> Result<f64> {
    if p.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: x.dim() });
    }
    if p.is_infinity() {
        if x.is_infinity() {
            return Err(Error::CoincidentPoints("x equals the cusp point"));
        }
        return heis_dist_to_subgroup(x, v);
    }
    if chordal_distance(p, x)? == 0.0 {
        return Err(Error::CoincidentPoints("x equals the cusp point"));
    }
    let y = inversion_at(p)?.apply(x)?;
    if y.is_infinity() {
        return Err(Error::CoincidentPoints("x equals the cusp point"));
    }
    heis_dist_to_subgroup(&y, v)
}

pub fn cusp_contains(p: &HPoint, r: f64, x: &HPoint, v: &SubgroupDescriptor) -> Result<bool> {
    check_radius(r)?;
    Ok(cusp_height(p, x, v)? >= 1.0 / r)
}

/// Membership in the bounding surface `S_{p,r}` within `tol`.
pub fn on_cusp_surface(p: &HPoint, r: f64, x: &HPoint, v: &SubgroupDescriptor, tol: f64) -> Result<bool> {
    check_radius(r)?;
    Ok((cusp_height(p, x, v)? - 1.0 / r).abs() <= tol)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("cusp radius must be positive, got {r}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspAuditConfig {
    pub samples: usize,
    pub seed: u64,
    /// Word radius of the element table.
    pub radius: usize,
    /// Height tolerance when deciding membership of images.
    pub delta_eq: f64,
    /// Chordal tolerance for `g·p = p`.
    pub fix_tol: f64,
    pub enumeration: EnumerationConfig,
    pub execution: Execution,
}

impl Default for CuspAuditConfig {
    fn default() -> Self {
        CuspAuditConfig {
            samples: 10_000,
            seed: 0,
            radius: 3,
            delta_eq: 1e-7,
            fix_tol: 1e-9,
            enumeration: EnumerationConfig::default(),
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A stabilizer element maps a sample out of the neighbourhood.
    StabilizerLeaves,
    /// A non-stabilizer element maps a sample into the neighbourhood.
    OtherOverlaps,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CuspViolation {
    pub sample: usize,
    pub word: String,
    pub kind: ViolationKind,
    pub point: HPoint,
    pub image_height: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CuspAudit {
    pub r: f64,
    pub stabilizer: Vec<String>,
    pub others: Vec<String>,
    pub samples: usize,
    /// Samples that could not be drawn by rejection.
    pub rejected: usize,
    pub violations: Vec<CuspViolation>,
    pub seed: u64,
    pub delta_eq: f64,
}

const MAX_ATTEMPTS: usize = 10_000;

/// Draws a point of `U_{∞,r}` for `V` near the invariant set by rejection
/// in a box of half-width `4/r` about `b⁻¹`.
fn sample_at_infinity(n: usize, r: f64, v: &SubgroupDescriptor, seed: u64, i: usize) -> Result<Option<HPoint>> {
    let mut rng = stream(seed, i as u64);
    let b = 4.0 / r;
    let shift = HeisIsometry::translation(h_inv(&v.conjugator));
    for _ in 0..MAX_ATTEMPTS {
        let xi = (0..n - 1).map(|_| c64(rng.random_range(-b..b), rng.random_range(-b..b))).collect();
        let vv = rng.random_range(-b * b..b * b);
        let u = b * b * (1.0 - rng.random::<f64>());
        let x = apply_heis_isometry(&shift, &HPoint::new(xi, vv, u)?)?;
        if heis_dist_to_subgroup(&x, v)? >= 1.0 / r {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Samples `U_{p,r}` and checks that stabilizer elements of `p` in the
/// table preserve it while all other elements move it off itself.
pub fn precise_invariance_audit(
    g: &GroupSpec,
    p: &HPoint,
    r: f64,
    v: &SubgroupDescriptor,
    cfg: &CuspAuditConfig,
) -> Result<CuspAudit> {
    check_radius(r)?;
    if p.is_interior() {
        return Err(Error::NotBoundary);
    }
    if p.dim() != g.n() || v.dim() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: p.dim() });
    }
    let t = enumerate_elements_with(g, cfg.radius, &cfg.enumeration)?;
    let mut stab = vec![];
    let mut rest = vec![];
    for e in t.non_identity() {
        let q = e.iso.apply(p)?;
        if chordal_distance(&q, p)? <= cfg.fix_tol {
            stab.push(e);
        } else {
            rest.push(e);
        }
    }
    let inv = if p.is_infinity() { None } else { Some(inversion_at(p)?) };
    let level = 1.0 / r;
    let per_sample = cfg.execution.map(cfg.samples, |i| -> Result<Option<Vec<CuspViolation>>> {
        let Some(x0) = sample_at_infinity(g.n(), r, v, cfg.seed, i)? else { return Ok(None) };
        let x = match &inv {
            Some(m) => m.apply(&x0)?,
            None => x0,
        };
        let mut out = vec![];
        for (list, kind) in [(&stab, ViolationKind::StabilizerLeaves), (&rest, ViolationKind::OtherOverlaps)] {
            for e in list.iter() {
                let h = cusp_height(p, &e.iso.apply(&x)?, v)?;
                let bad = match kind {
                    ViolationKind::StabilizerLeaves => h < level - cfg.delta_eq,
                    ViolationKind::OtherOverlaps => h >= level + cfg.delta_eq,
                };
                if bad {
                    out.push(CuspViolation { sample: i, word: t.render(&e.word), kind, point: x.clone(), image_height: h });
                }
            }
        }
        Ok(Some(out))
    });
    let mut violations = vec![];
    let mut rejected = 0;
    for s in per_sample {
        match s? {
            Some(v) => violations.extend(v),
            None => rejected += 1,
        }
    }
    Ok(CuspAudit {
        r,
        stabilizer: stab.iter().map(|e| t.render(&e.word)).collect(),
        others: rest.iter().map(|e| t.render(&e.word)).collect(),
        samples: cfg.samples,
        rejected,
        violations,
        seed: cfg.seed,
        delta_eq: cfg.delta_eq,
    })
}
