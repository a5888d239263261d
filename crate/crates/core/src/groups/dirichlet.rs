use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::StandardNormal;

use super::table::{enumerate_elements_with, ElementTable, EnumerationConfig};
use super::{GroupSpec, Word};
use crate::error::{Error, Result};
use crate::hermitian::{
    c64, form_raw, lift, normalize_negative, unlift_interior, CVector, HPoint, LiftVector, Metric, C64,
};
use crate::isometry::{classify, ClassifyConfig, IsometryType};
use crate::par::Execution;
use crate::rng::stream;

/// Distance below which `g·y` is considered equal to `y`.
const FIXED_CENTER_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirichletConfig {
    pub rays: usize,
    /// Maximal arclength searched along each ray, in units of the metric.
    pub t_max: f64,
    pub seed: u64,
    pub metric: Metric,
    /// Face-candidate tolerance on `d(x,gy) - d(x,y)`.
    pub delta_eq: f64,
    /// Required clearance of every other element at a witness.
    pub delta_strict: f64,
    pub bisect_tol: f64,
    /// Re-run with twice the rays and compare face sets.
    pub check_stability: bool,
    pub enumeration: EnumerationConfig,
    pub execution: Execution,
}

impl Default for DirichletConfig {
    fn default() -> Self {
        DirichletConfig {
            rays: 2000,
            t_max: 20.0,
            seed: 0,
            metric: Metric::default(),
            delta_eq: 1e-7,
            delta_strict: 1e-9,
            bisect_tol: 1e-10,
            check_stability: true,
            enumeration: EnumerationConfig::default(),
            execution: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    /// Index into the element table.
    pub element: usize,
    pub word: Word,
    pub label: String,
    /// Ray exit point where this element alone attains the minimum.
    pub witness: HPoint,
    /// Clearance of the runner-up element at the witness.
    pub margin: f64,
    pub hits: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SideReport {
    pub center: HPoint,
    pub radius: usize,
    pub table_size: usize,
    pub faces: Vec<Face>,
    pub rays_total: usize,
    pub rays_hit: usize,
    pub rays_escaped: usize,
    /// Rays whose exit point lies on two or more bisectors within `δ_eq`.
    pub rays_ambiguous: usize,
    pub stable: bool,
    /// Face count with doubled rays, when the stability check ran.
    pub doubled_count: Option<usize>,
    pub seed: u64,
    pub kappa: f64,
    pub t_max: f64,
    pub delta_eq: f64,
    pub delta_strict: f64,
    pub bisect_tol: f64,
    pub warnings: Vec<String>,
}

impl SideReport {
    /// Certified lower bound on the number of sides.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn worst_margin(&self) -> f64 {
        self.faces.iter().map(|f| f.margin).fold(f64::INFINITY, f64::min)
    }
}

/// `m(x) = min_{g ≠ 1} d(x, gy) - d(x, y)` and the word attaining it;
/// `m(x) ≥ 0` iff `x` lies in the Dirichlet domain of the table.
pub fn membership_margin(x: &HPoint, y: &HPoint, t: &ElementTable, metric: &Metric) -> Result<(f64, Word)> {
    x.require_interior()?;
    let images = Images::new(t, y, metric)?;
    let (m, idx) = images.margin(lift(x).as_slice());
    Ok((m, t.entries[idx].word.clone()))
}

/// Normalized lifts of `y` and of its images under the non-identity table
/// elements.
struct Images {
    metric: Metric,
    center: CVector,
    /// `(table index, lift of g·y)`.
    points: Vec<(usize, CVector)>,
}

impl Images {
    fn new(t: &ElementTable, y: &HPoint, metric: &Metric) -> Result<Self> {
        y.require_interior()?;
        if y.dim() != t.n {
            return Err(Error::DimensionMismatch { expected: t.n, found: y.dim() });
        }
        let center = normalize_negative(&lift(y).0);
        let mut points = vec![];
        for (i, e) in t.entries.iter().enumerate().skip(1) {
            let z = e.iso.matrix() * &center;
            if metric.lift_distance(center.as_slice(), z.as_slice()) <= FIXED_CENTER_TOL {
                return Err(Error::FixedCenter(t.render(&e.word)));
            }
            points.push((i, z));
        }
        Ok(Images { metric: *metric, center, points })
    }

    fn gaps(&self, x: &[C64]) -> Vec<f64> {
        let d0 = self.metric.lift_distance(x, self.center.as_slice());
        self.points.iter().map(|(_, z)| self.metric.lift_distance(x, z.as_slice()) - d0).collect()
    }

    fn margin(&self, x: &[C64]) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (k, g) in self.gaps(x).into_iter().enumerate() {
            if g < best.0 {
                best = (g, self.points[k].0);
            }
        }
        best
    }
}

#[derive(Clone, Debug)]
enum RayOutcome {
    Escaped,
    Ambiguous,
    Face { element: usize, margin: f64, point: CVector },
}

/// Form-orthonormal basis of `P̂^⊥`, the tangent space at the center.
fn tangent_basis(p: &CVector) -> Vec<CVector> {
    let k = p.len();
    let mut basis: Vec<CVector> = vec![];
    for i in 0..k {
        let mut e = CVector::zeros(k);
        e[i] = c64(1.0, 0.0);
        // ⟨P̂,P̂⟩ = -1, so adding ⟨e,P̂⟩P̂ removes the P̂ component
        let c = form_raw(e.as_slice(), p.as_slice());
        e += p * c;
        for b in &basis {
            let c = form_raw(e.as_slice(), b.as_slice());
            e -= b * c;
        }
        let nrm = form_raw(e.as_slice(), e.as_slice()).re;
        if nrm > 1e-8 {
            basis.push(e / c64(nrm.sqrt(), 0.0));
        }
        if basis.len() == k - 1 {
            break;
        }
    }
    basis
}

fn march(images: &Images, basis: &[CVector], cfg: &DirichletConfig, ray: usize) -> RayOutcome {
    let mut rng = stream(cfg.seed, ray as u64);
    let mut x = CVector::zeros(images.center.len());
    for b in basis {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        x += b * c64(re, im);
    }
    let nrm = form_raw(x.as_slice(), x.as_slice()).re;
    if nrm <= 0.0 {
        return RayOutcome::Escaped;
    }
    let x = x / c64(nrm.sqrt(), 0.0);
    let point = |s: f64| {
        let t = s / cfg.metric.kappa;
        &images.center * c64(t.cosh(), 0.0) + &x * c64(t.sinh(), 0.0)
    };
    let outside = |s: f64| images.margin(point(s).as_slice()).0 < 0.0;
    // the domain is star-shaped about its center, so each ray crosses once
    if images.points.is_empty() || !outside(cfg.t_max) {
        return RayOutcome::Escaped;
    }
    let (mut lo, mut hi) = (0.0, cfg.t_max);
    while hi - lo > cfg.bisect_tol {
        let mid = 0.5 * (lo + hi);
        if outside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let z = point(lo);
    let gaps = images.gaps(z.as_slice());
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    order.sort_by(|&a, &b| gaps[a].total_cmp(&gaps[b]));
    let close = order.iter().take_while(|&&i| gaps[i] < cfg.delta_eq).count();
    if close != 1 {
        return RayOutcome::Ambiguous;
    }
    let margin = order.get(1).map(|&i| gaps[i]).unwrap_or(f64::INFINITY);
    if margin < cfg.delta_strict {
        return RayOutcome::Ambiguous;
    }
    RayOutcome::Face { element: images.points[order[0]].0, margin, point: z }
}

pub fn dirichlet_sides(g: &GroupSpec, y: &HPoint, radius: usize, cfg: &DirichletConfig) -> Result<SideReport> {
    let t = enumerate_elements_with(g, radius, &cfg.enumeration)?;
    dirichlet_sides_table(&t, y, cfg)
}

/// Faces of the Dirichlet domain of a precomputed table detected by radial
/// ray marching from `y`.
pub(crate) fn dirichlet_sides_table(t: &ElementTable, y: &HPoint, cfg: &DirichletConfig) -> Result<SideReport> {
    if cfg.rays == 0 {
        return Err(Error::InvalidArgument("rays must be at least 1".into()));
    }
    if !(cfg.t_max > 0.0) {
        return Err(Error::InvalidArgument("T_max must be positive".into()));
    }
    let images = Images::new(t, y, &cfg.metric)?;
    let basis = tangent_basis(&images.center);
    let total = if cfg.check_stability { 2 * cfg.rays } else { cfg.rays };
    let outcomes = cfg.execution.map(total, |r| march(&images, &basis, cfg, r));

    let collect = |upto: usize| {
        let mut faces: BTreeMap<usize, (usize, f64, usize)> = BTreeMap::new(); // hits, margin, ray
        for (r, o) in outcomes[..upto].iter().enumerate() {
            if let RayOutcome::Face { element, margin, .. } = o {
                let e = faces.entry(*element).or_insert((0, f64::NEG_INFINITY, r));
                e.0 += 1;
                if *margin > e.1 {
                    e.1 = *margin;
                    e.2 = r;
                }
            }
        }
        faces
    };
    let primary = collect(cfg.rays);
    let doubled = cfg.check_stability.then(|| collect(total));
    let stable = doubled.as_ref().map(|d| d.keys().eq(primary.keys())).unwrap_or(false);

    let mut faces = vec![];
    for (&element, &(hits, margin, ray)) in &primary {
        let RayOutcome::Face { point, .. } = &outcomes[ray] else { unreachable!() };
        let l = LiftVector(point.clone());
        let witness = unlift_interior(&l, -1.0)?;
        let word = t.entries[element].word.clone();
        faces.push(Face { element, label: t.render(&word), word, witness, margin, hits });
    }
    // order faces by table position, i.e. by word
    faces.sort_by_key(|f| f.element);
    let primary_outcomes = &outcomes[..cfg.rays];
    let count = |pred: fn(&RayOutcome) -> bool| primary_outcomes.iter().filter(|o| pred(o)).count();
    let rays_escaped = count(|o| matches!(o, RayOutcome::Escaped));
    let rays_ambiguous = count(|o| matches!(o, RayOutcome::Ambiguous));
    let mut warnings = t.warnings.clone();
    if faces.is_empty() && t.len() > 1 {
        warnings.push(format!(
            "no faces detected ({rays_escaped} of {} rays escaped); T_max = {} may be too small",
            cfg.rays, cfg.t_max
        ));
    }
    Ok(SideReport {
        center: y.clone(),
        radius: t.radius,
        table_size: t.len(),
        rays_total: cfg.rays,
        rays_hit: cfg.rays - rays_escaped,
        rays_escaped,
        rays_ambiguous,
        stable,
        doubled_count: doubled.map(|d| d.len()),
        faces,
        seed: cfg.seed,
        kappa: cfg.metric.kappa,
        t_max: cfg.t_max,
        delta_eq: cfg.delta_eq,
        delta_strict: cfg.delta_strict,
        bisect_tol: cfg.bisect_tol,
        warnings,
    })
}

/// Coordinate ranges `[lo, hi]` for a center search: `Re ξ_j`, `Im ξ_j`
/// for each `j`, then `v`, then `u` (which must stay positive).
#[derive(Clone, Debug, PartialEq)]
pub struct CenterBox {
    pub ranges: Vec<(f64, f64)>,
}

impl CenterBox {
    pub fn new(xi: &[((f64, f64), (f64, f64))], v: (f64, f64), u: (f64, f64)) -> Result<Self> {
        let mut ranges = vec![];
        for &(re, im) in xi {
            ranges.push(re);
            ranges.push(im);
        }
        ranges.push(v);
        ranges.push(u);
        for &(lo, hi) in &ranges {
            if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidArgument(format!("bad search range [{lo}, {hi}]")));
            }
        }
        if u.0 <= 0.0 {
            return Err(Error::InvalidArgument("the u range must be positive".into()));
        }
        Ok(CenterBox { ranges })
    }

    /// A box of half-width `h` around a point (`u` is scaled multiplicatively).
    pub fn around(p: &HPoint, h: f64) -> Result<Self> {
        let f = p.require_interior()?;
        let xi: Vec<_> = f.xi.iter().map(|z| ((z.re - h, z.re + h), (z.im - h, z.im + h))).collect();
        CenterBox::new(&xi, (f.v - h, f.v + h), (f.u / (1.0 + h), f.u * (1.0 + h)))
    }

    fn point(&self, x: &[f64]) -> Result<HPoint> {
        let k = self.ranges.len();
        let c: Vec<f64> = x.iter().zip(&self.ranges).map(|(&v, &(lo, hi))| v.clamp(lo, hi)).collect();
        let xi = (0..(k - 2) / 2).map(|j| c64(c[2 * j], c[2 * j + 1])).collect();
        HPoint::new(xi, c[k - 2], c[k - 1])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterSearch {
    pub center: HPoint,
    pub report: SideReport,
    pub found: bool,
    pub evaluations: usize,
}

/// Grid points per axis and simplex iterations for the center search.
const GRID: usize = 3;
const SIMPLEX_ITERS: usize = 60;

/// Looks for a center whose Dirichlet domain has exactly two stable sides:
/// a coarse grid scan of the box, then a downhill simplex on
/// `|count - 2| - tanh(worst margin)/2`.
pub fn two_sided_center_search(
    g: &GroupSpec,
    bx: &CenterBox,
    radius: usize,
    cfg: &DirichletConfig,
) -> Result<CenterSearch> {
    if g.generators().len() != 1 {
        return Err(Error::UnsupportedGroupClass("center search needs a cyclic group".into()));
    }
    if bx.ranges.len() != 2 * (g.n() - 1) + 2 {
        return Err(Error::DimensionMismatch { expected: 2 * (g.n() - 1) + 2, found: bx.ranges.len() });
    }
    let kind = classify(&g.generators()[0].isometry(), &ClassifyConfig::default())?.kind;
    if kind != IsometryType::Parabolic {
        return Err(Error::UnsupportedGroupClass(format!("center search needs a parabolic generator, got {kind}")));
    }
    let t = enumerate_elements_with(g, radius, &cfg.enumeration)?;
    let mut evaluations = 0;
    let mut best: Option<(f64, HPoint, SideReport)> = None;
    let mut eval = |x: &[f64]| -> Result<(f64, bool)> {
        evaluations += 1;
        let p = bx.point(x)?;
        let rep = match dirichlet_sides_table(&t, &p, cfg) {
            Ok(r) => r,
            Err(Error::FixedCenter(_)) => return Ok((1e6, false)),
            Err(e) => return Err(e),
        };
        let wm = if rep.faces.is_empty() { 0.0 } else { rep.worst_margin() };
        let score = (rep.face_count() as f64 - 2.0).abs() - 0.5 * wm.tanh();
        let done = rep.face_count() == 2 && rep.stable;
        if best.as_ref().map(|b| score < b.0).unwrap_or(true) || done {
            best = Some((score, p, rep));
        }
        Ok((score, done))
    };

    // grid scan; a degenerate range contributes a single value
    let axes: Vec<Vec<f64>> = bx
        .ranges
        .iter()
        .map(|&(lo, hi)| {
            if hi > lo {
                (0..GRID).map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64).collect()
            } else {
                vec![lo]
            }
        })
        .collect();
    let mut idx = vec![0usize; axes.len()];
    let mut best_x: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    let mut best_score = f64::INFINITY;
    loop {
        let x: Vec<f64> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
        let (s, done) = eval(&x)?;
        if done {
            let (_, center, report) = best.expect("set");
            return Ok(CenterSearch { center, report, found: true, evaluations });
        }
        if s < best_score {
            best_score = s;
            best_x = x;
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }

    // downhill simplex over the free coordinates
    let free: Vec<usize> = (0..bx.ranges.len()).filter(|&i| bx.ranges[i].1 > bx.ranges[i].0).collect();
    if !free.is_empty() {
        let embed = |y: &[f64]| {
            let mut x = best_x.clone();
            for (k, &i) in free.iter().enumerate() {
                x[i] = y[k];
            }
            x
        };
        let y0: Vec<f64> = free.iter().map(|&i| best_x[i]).collect();
        let mut simplex = vec![(best_score, y0.clone())];
        for (k, &i) in free.iter().enumerate() {
            let mut y = y0.clone();
            let (lo, hi) = bx.ranges[i];
            let step = 0.25 * (hi - lo);
            y[k] = if y[k] + step <= hi { y[k] + step } else { y[k] - step };
            let (s, done) = eval(&embed(&y))?;
            if done {
                let (_, center, report) = best.expect("set");
                return Ok(CenterSearch { center, report, found: true, evaluations });
            }
            simplex.push((s, y));
        }
        for _ in 0..SIMPLEX_ITERS {
            simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
            let m = simplex.len() - 1;
            let centroid: Vec<f64> =
                (0..free.len()).map(|k| simplex[..m].iter().map(|s| s.1[k]).sum::<f64>() / m as f64).collect();
            let along = |c: f64| -> Vec<f64> {
                centroid.iter().zip(&simplex[m].1).map(|(a, w)| a + c * (a - w)).collect()
            };
            let mut try_point = |y: Vec<f64>| -> Result<Option<(f64, Vec<f64>)>> {
                let (s, done) = eval(&embed(&y))?;
                Ok(if done { None } else { Some((s, y)) })
            };
            let finish = |best: Option<(f64, HPoint, SideReport)>, evaluations| {
                let (_, center, report) = best.expect("set");
                Ok(CenterSearch { center, report, found: true, evaluations })
            };
            let Some(r) = try_point(along(1.0))? else { return finish(best, evaluations) };
            if r.0 < simplex[0].0 {
                let Some(e) = try_point(along(2.0))? else { return finish(best, evaluations) };
                simplex[m] = if e.0 < r.0 { e } else { r };
            } else if r.0 < simplex[m - 1].0 {
                simplex[m] = r;
            } else {
                let Some(c) = try_point(along(-0.5))? else { return finish(best, evaluations) };
                if c.0 < simplex[m].0 {
                    simplex[m] = c;
                } else {
                    let b0 = simplex[0].1.clone();
                    for j in 1..=m {
                        let y: Vec<f64> = b0.iter().zip(&simplex[j].1).map(|(a, w)| 0.5 * (a + w)).collect();
                        let Some(s) = try_point(y)? else { return finish(best, evaluations) };
                        simplex[j] = s;
                    }
                }
            }
        }
    }
    let (_, center, report) = best.expect("at least one evaluation");
    Ok(CenterSearch { found: false, center, report, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::table::enumerate_elements;
    use crate::groups::Generator;
    use crate::heisenberg::{HeisElement, HeisIsometry};
    use crate::hermitian::CMatrix;
    use crate::isometry::Isometry;

    fn el(re: f64, im: f64, v: f64) -> HeisElement {
        HeisElement::new(vec![c64(re, im)], v)
    }

    fn y0() -> HPoint {
        HPoint::new(vec![c64(0.0, 0.0)], 0.0, 1.0).unwrap()
    }

    #[test]
    fn margin_examples() {
        let g = GroupSpec::translations(2, &[el(0.0, 0.0, 1.0)]).unwrap();
        let t = enumerate_elements(&g, 2).unwrap();
        let m = Metric::default();
        let (v, _) = membership_margin(&y0(), &y0(), &t, &m).unwrap();
        let gy = t.entries[1].iso.apply(&y0()).unwrap();
        assert!((v - m.distance(&y0(), &gy).unwrap()).abs() < 1e-12);
        let (v, w) = membership_margin(&gy, &y0(), &t, &m).unwrap();
        assert!(v < 0.0);
        assert_eq!(w, t.entries[1].word);
        // bisection along the geodesic from y to g·y for the bisector point
        let d = m.distance(&y0(), &gy).unwrap();
        let mid = m.geodesic_point(&y0(), &gy, d / 2.0).unwrap();
        let (v, w) = membership_margin(&mid, &y0(), &t, &m).unwrap();
        assert!(v.abs() < 1e-9, "{v}");
        assert_eq!(w, t.entries[1].word);
    }

    #[test]
    fn fixed_center_is_rejected() {
        let a = CMatrix::from_element(1, 1, C64::from_polar(1.0, 1.0));
        let g = GroupSpec::cyclic(Generator::Heis(HeisIsometry::rotation(a).unwrap())).unwrap();
        let t = enumerate_elements(&g, 2).unwrap();
        let err = membership_margin(&y0(), &y0(), &t, &Metric::default()).unwrap_err();
        assert!(matches!(err, Error::FixedCenter(_)));
    }

    #[test]
    fn vertical_cyclic_has_two_sides() {
        let g = GroupSpec::translations(2, &[el(0.0, 0.0, 1.0)]).unwrap();
        let cfg = DirichletConfig { rays: 2000, seed: 3, ..Default::default() };
        for y in [y0(), HPoint::new(vec![c64(0.0, 0.0)], 0.3, 2.0).unwrap()] {
            let r = dirichlet_sides(&g, &y, 4, &cfg).unwrap();
            assert_eq!(r.face_count(), 2, "{:?}", r.faces);
            assert!(r.stable);
            for f in &r.faces {
                assert!(f.margin >= r.delta_strict);
            }
        }
    }

    #[test]
    fn witnesses_satisfy_the_face_conditions() {
        let g = GroupSpec::translations(2, &[el(1.0, 0.0, 0.0), el(0.0, 0.0, 1.0)]).unwrap();
        let t = enumerate_elements(&g, 3).unwrap();
        let cfg = DirichletConfig { rays: 500, seed: 11, check_stability: false, ..Default::default() };
        let r = dirichlet_sides_table(&t, &y0(), &cfg).unwrap();
        let m = Metric::default();
        for f in &r.faces {
            let dy = m.distance(&f.witness, &y0()).unwrap();
            for (i, e) in t.entries.iter().enumerate().skip(1) {
                let gap = m.distance(&f.witness, &e.iso.apply(&y0()).unwrap()).unwrap() - dy;
                if i == f.element {
                    assert!(gap.abs() <= cfg.delta_eq, "{gap}");
                } else {
                    assert!(gap >= cfg.delta_strict, "{gap}");
                }
            }
        }
    }

    #[test]
    fn trivial_group_has_no_faces() {
        let g = GroupSpec::translations(2, &[el(0.0, 0.0, 0.0)]).unwrap();
        let cfg = DirichletConfig { rays: 50, ..Default::default() };
        let r = dirichlet_sides(&g, &y0(), 2, &cfg).unwrap();
        assert_eq!(r.table_size, 1);
        assert_eq!(r.face_count(), 0);
        assert_eq!(r.rays_escaped, 50);
    }

    #[test]
    fn sides_independent_of_execution() {
        let g = GroupSpec::translations(2, &[el(1.0, 0.0, 0.0), el(0.0, 0.0, 1.0)]).unwrap();
        let par = DirichletConfig { rays: 300, seed: 5, ..Default::default() };
        let seq = DirichletConfig { execution: Execution::Sequential, ..par };
        assert_eq!(dirichlet_sides(&g, &y0(), 2, &par).unwrap(), dirichlet_sides(&g, &y0(), 2, &seq).unwrap());
    }

    #[test]
    fn center_search_preconditions() {
        let cfg = DirichletConfig { rays: 100, ..Default::default() };
        let bx = CenterBox::around(&y0(), 0.5).unwrap();
        let lox = GroupSpec::cyclic(Generator::Matrix(Isometry::boost(2, 1.0))).unwrap();
        assert!(matches!(two_sided_center_search(&lox, &bx, 2, &cfg), Err(Error::UnsupportedGroupClass(_))));
        let two = GroupSpec::translations(2, &[el(1.0, 0.0, 0.0), el(0.0, 0.0, 1.0)]).unwrap();
        assert!(matches!(two_sided_center_search(&two, &bx, 2, &cfg), Err(Error::UnsupportedGroupClass(_))));
    }

    #[test]
    fn center_search_vertical() {
        let g = GroupSpec::translations(2, &[el(0.0, 0.0, 1.0)]).unwrap();
        let cfg = DirichletConfig { rays: 1000, seed: 1, ..Default::default() };
        let bx = CenterBox::around(&y0(), 0.5).unwrap();
        let s = two_sided_center_search(&g, &bx, 4, &cfg).unwrap();
        assert!(s.found);
        assert_eq!(s.report.face_count(), 2);
        assert_eq!(s.evaluations, 1);
    }
}
