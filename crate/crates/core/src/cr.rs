//! Cygan cross-ratios, (M, α) distortion audits and μ-chains on finite
//! boundary point sets.

use std::collections::VecDeque;

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::heisenberg::cygan_dist;
use crate::hermitian::HPoint;
use crate::par::Execution;
use crate::rng::stream;

/// Four boundary points (or `∞`).
#[derive(Clone, Debug, PartialEq)]
pub struct Quad(pub [HPoint; 4]);

impl Quad {
    pub fn new(x1: HPoint, x2: HPoint, x3: HPoint, x4: HPoint) -> Result<Self> {
        let q = Quad([x1, x2, x3, x4]);
        for p in &q.0 {
            if p.is_interior() {
                return Err(Error::NotBoundary);
            }
            if p.dim() != q.0[0].dim() {
                return Err(Error::DimensionMismatch { expected: q.0[0].dim(), found: p.dim() });
            }
        }
        Ok(q)
    }

    /// The `(14)(23)` relabelling `(x4, x3, x2, x1)`.
    pub fn reversed(&self) -> Quad {
        let [a, b, c, d] = self.0.clone();
        Quad([d, c, b, a])
    }
}

/// `ρ(x,y)` with `∞` kept symbolic.
enum Factor {
    Zero,
    Infinite,
    Finite(f64),
}

fn factor(x: &HPoint, y: &HPoint) -> Result<Factor> {
    Ok(match (x.is_infinity(), y.is_infinity()) {
        (true, true) => Factor::Zero,
        (true, false) | (false, true) => Factor::Infinite,
        _ => match cygan_dist(x, y)? {
            d if d == 0.0 => Factor::Zero,
            d => Factor::Finite(d),
        },
    })
}

/// `CR = ρ(x1,x2) ρ(x3,x4) / (ρ(x1,x3) ρ(x2,x4))`, extended to `∞` by
/// cancelling the two factors that contain it.
///
/// A vanishing denominator is an error; a vanishing numerator gives 0.
pub fn cross_ratio(q: &Quad) -> Result<f64> {
    let [x1, x2, x3, x4] = &q.0;
    let den = [factor(x1, x3)?, factor(x2, x4)?];
    let num = [factor(x1, x2)?, factor(x3, x4)?];
    if den.iter().any(|f| matches!(f, Factor::Zero)) {
        return Err(Error::DegenerateQuad("coincident points in a denominator"));
    }
    if num.iter().any(|f| matches!(f, Factor::Zero)) {
        return Ok(0.0);
    }
    // each ∞ appears once upstairs and once downstairs, so the infinite
    // factors cancel and only the finite ones remain
    let prod = |fs: &[Factor]| fs.iter().map(|f| if let Factor::Finite(d) = f { *d } else { 1.0 }).product::<f64>();
    Ok(prod(&num) / prod(&den))
}

/// `η_α(t) = t^α` for `t ≥ 1` and `t^{1/α}` below.
pub fn eta_alpha(t: f64, alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must be at least 1, got {alpha}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("eta needs t >= 0, got {t}")));
    }
    Ok(if t >= 1.0 { t.powf(alpha) } else { t.powf(1.0 / alpha) })
}

pub fn default_alphas() -> Vec<f64> {
    (0..13).map(|i| 1.0 + 0.25 * i as f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrAuditConfig {
    pub quads: usize,
    pub alphas: Vec<f64>,
    pub seed: u64,
    /// Number of worst quads kept.
    pub keep_worst: usize,
    pub execution: Execution,
}

impl Default for CrAuditConfig {
    fn default() -> Self {
        CrAuditConfig { quads: 100_000, alphas: default_alphas(), seed: 0, keep_worst: 10, execution: Execution::Parallel }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaFit {
    pub alpha: f64,
    /// `max CR(f(q)) / η_α(CR(q))` over the sampled quads.
    pub m_hat: f64,
    pub worst: Option<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorstQuad {
    pub indices: [usize; 4],
    pub cr_source: f64,
    pub cr_image: f64,
    /// Ratio at the first α of the grid.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrAudit {
    pub fits: Vec<AlphaFit>,
    pub worst: Vec<WorstQuad>,
    pub sampled: usize,
    pub degenerate: usize,
    /// Some quad had `CR(q) = 0` but `CR(f(q)) > 0`.
    pub unbounded: bool,
    pub seed: u64,
}

/// Fits `M̂(α)` such that `CR(f(q)) ≤ M̂ η_α(CR(q))` on random quads of
/// `(x, f(x))` pairs.
pub fn quasi_cr_audit(pairs: &[(HPoint, HPoint)], cfg: &CrAuditConfig) -> Result<CrAudit> {
    if pairs.len() < 4 {
        return Err(Error::InvalidArgument(format!("need at least 4 pairs, got {}", pairs.len())));
    }
    if cfg.alphas.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    for &a in &cfg.alphas {
        eta_alpha(1.0, a)?;
    }
    let quad_of = |idx: &[usize; 4], image: bool| -> Result<f64> {
        let pick = |i: usize| if image { pairs[i].1.clone() } else { pairs[i].0.clone() };
        cross_ratio(&Quad::new(pick(idx[0]), pick(idx[1]), pick(idx[2]), pick(idx[3]))?)
    };
    let results = cfg.execution.map(cfg.quads, |i| -> Result<Option<([usize; 4], f64, f64)>> {
        let mut rng = stream(cfg.seed, i as u64);
        let s = sample(&mut rng, pairs.len(), 4);
        let idx = [s.index(0), s.index(1), s.index(2), s.index(3)];
        let src = match quad_of(&idx, false) {
            Ok(v) => v,
            Err(Error::DegenerateQuad(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        match quad_of(&idx, true) {
            Ok(img) => Ok(Some((idx, src, img))),
            Err(Error::DegenerateQuad(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let mut fits: Vec<AlphaFit> = cfg.alphas.iter().map(|&alpha| AlphaFit { alpha, m_hat: 0.0, worst: None }).collect();
    let mut all: Vec<WorstQuad> = vec![];
    let (mut degenerate, mut unbounded) = (0, false);
    for r in results {
        let Some((idx, src, img)) = r? else {
            degenerate += 1;
            continue;
        };
        for (k, fit) in fits.iter_mut().enumerate() {
            let e = eta_alpha(src, fit.alpha)?;
            let ratio = if e > 0.0 {
                img / e
            } else if img > 0.0 {
                unbounded = true;
                f64::INFINITY
            } else {
                continue;
            };
            if ratio > fit.m_hat {
                fit.m_hat = ratio;
                fit.worst = Some(idx);
            }
            if k == 0 {
                all.push(WorstQuad { indices: idx, cr_source: src, cr_image: img, ratio });
            }
        }
    }
    // stable sort keeps sampling order among ties
    all.sort_by(|a, b| b.ratio.total_cmp(&a.ratio));
    all.truncate(cfg.keep_worst);
    Ok(CrAudit { fits, worst: all, sampled: cfg.quads, degenerate, unbounded, seed: cfg.seed })
}

/// Link condition for μ-chains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChainCondition {
    /// `CR(a, x, y, b) ≤ μ`.
    #[default]
    UpperBound,
    /// `1/μ ≤ CR(a, x, y, b) ≤ μ`.
    TwoSided,
}

impl ChainCondition {
    pub fn admits(self, cr: f64, mu: f64) -> bool {
        match self {
            ChainCondition::UpperBound => cr <= mu,
            ChainCondition::TwoSided => cr <= mu && cr >= 1.0 / mu,
        }
    }
}

fn check_distinct(points: &[HPoint]) -> Result<()> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i].is_interior() {
                return Err(Error::NotBoundary);
            }
            let same = match (points[i].is_infinity(), points[j].is_infinity()) {
                (true, true) => true,
                (false, false) => cygan_dist(&points[i], &points[j])? == 0.0,
                _ => false,
            };
            if same {
                return Err(Error::CoincidentPoints("point set contains duplicates"));
            }
        }
    }
    Ok(())
}

/// Nearest point to `target` among `candidates` (lowest index on ties).
fn anchor(points: &[HPoint], candidates: &[usize], target: usize) -> Result<usize> {
    let mut best = (f64::INFINITY, candidates[0]);
    for &c in candidates {
        let d = if points[target].is_infinity() || points[c].is_infinity() {
            f64::INFINITY
        } else {
            cygan_dist(&points[c], &points[target])?
        };
        if d < best.0 {
            best = (d, c);
        }
    }
    Ok(best.1)
}

/// Link graph on the points other than `a` and `b`, edge `x → y` iff the
/// condition holds for `CR(a, x, y, b)`. Returns `(interior nodes, adjacency)`.
pub(crate) fn link_graph(
    points: &[HPoint],
    a: usize,
    b: usize,
    mu: f64,
    cond: ChainCondition,
) -> Result<(Vec<usize>, Vec<Vec<bool>>)> {
    let inner: Vec<usize> = (0..points.len()).filter(|&i| i != a && i != b).collect();
    let mut adj = vec![vec![false; points.len()]; points.len()];
    for &x in &inner {
        for &y in &inner {
            if x == y {
                continue;
            }
            let q = Quad::new(points[a].clone(), points[x].clone(), points[y].clone(), points[b].clone())?;
            adj[x][y] = cond.admits(cross_ratio(&q)?, mu);
        }
    }
    Ok((inner, adj))
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 1.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("mu must exceed 1, got {mu}")))
    }
}

/// Finite μ-chain from `points[a]` to `points[b]`.
///
/// The link condition is imposed between consecutive interior points only;
/// the chain leaves `a` through the interior point nearest to `a` and
/// reaches `b` through the one nearest to `b`. With no interior points the
/// chain `[a, b]` is accepted. Among valid chains the shortest is returned,
/// ties broken by index order.
pub fn mu_chain(points: &[HPoint], a: usize, b: usize, mu: f64, cond: ChainCondition) -> Result<Option<Vec<usize>>> {
    check_mu(mu)?;
    if a == b {
        return Err(Error::CoincidentPoints("chain endpoints coincide"));
    }
    if a >= points.len() || b >= points.len() {
        return Err(Error::InvalidArgument("chain endpoint out of range".into()));
    }
    check_distinct(points)?;
    mu_chain_unchecked(points, a, b, mu, cond)
}

fn mu_chain_unchecked(points: &[HPoint], a: usize, b: usize, mu: f64, cond: ChainCondition) -> Result<Option<Vec<usize>>> {
    let (inner, adj) = link_graph(points, a, b, mu, cond)?;
    if inner.is_empty() {
        return Ok(Some(vec![a, b]));
    }
    let start = anchor(points, &inner, a)?;
    let goal = anchor(points, &inner, b)?;
    let mut prev = vec![usize::MAX; points.len()];
    let mut seen = vec![false; points.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        if x == goal {
            let mut path = vec![x];
            let mut c = x;
            while c != start {
                c = prev[c];
                path.push(c);
            }
            path.push(a);
            path.reverse();
            path.push(b);
            return Ok(Some(path));
        }
        for &y in &inner {
            if adj[x][y] && !seen[y] {
                seen[y] = true;
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub dense: bool,
    /// Ordered pairs `(a, b)` with no μ-chain.
    pub failing: Vec<(usize, usize)>,
    pub mu: f64,
    pub condition: ChainCondition,
}

/// μ-density of a finite set: every ordered pair is joined by a μ-chain.
pub fn mu_density(points: &[HPoint], mu: f64, cond: ChainCondition, exec: Execution) -> Result<DensityReport> {
    check_mu(mu)?;
    if points.len() < 2 {
        return Err(Error::InvalidArgument("mu-density needs at least two points".into()));
    }
    check_distinct(points)?;
    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let found = exec.map_slice(&pairs, |&(a, b)| mu_chain_unchecked(points, a, b, mu, cond));
    let mut failing = vec![];
    for (p, f) in pairs.into_iter().zip(found) {
        if f?.is_none() {
            failing.push(p);
        }
    }
    Ok(DensityReport { dense: failing.is_empty(), failing, mu, condition: cond })
}
