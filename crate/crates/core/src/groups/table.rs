use std::collections::HashMap;

use super::{GroupSpec, Word};
use crate::error::{Error, Result};
use crate::hermitian::{c64, chordal_distance, lift, unlift, HPoint, LiftVector};
use crate::isometry::Isometry;
use crate::par::Execution;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerationConfig {
    pub cap: usize,
    /// Relative projective distance under which two matrices are one element.
    pub dedup_tol: f64,
    /// Distinct elements closer than this trigger a discreteness warning.
    pub warn_tol: f64,
    pub execution: Execution,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig { cap: 1_000_000, dedup_tol: 1e-8, warn_tol: 1e-6, execution: Execution::Parallel }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub iso: Isometry,
    pub word: Word,
}

/// Distinct group elements of word length `≤ L`, ordered by word length and
/// then lexicographically by shortest word. Entry 0 is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementTable {
    pub n: usize,
    pub radius: usize,
    pub entries: Vec<TableEntry>,
    pub labels: Vec<String>,
    pub warnings: Vec<String>,
}

impl ElementTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries other than the identity.
    pub fn non_identity(&self) -> &[TableEntry] {
        &self.entries[1..]
    }

    pub fn render(&self, w: &Word) -> String {
        w.render(&self.labels)
    }
}

/// Phase- and scale-invariant bucketing key; entries are compared exactly
/// only within neighbouring buckets.
struct DedupIndex {
    buckets: HashMap<(i64, i64), Vec<usize>>,
    width: f64,
}

impl DedupIndex {
    fn key(m: &Isometry, width: f64) -> (f64, f64) {
        let a = m.matrix();
        let k = a.nrows();
        let (mut s1, mut s2, mut tot) = (0.0, 0.0, 0.0);
        for i in 0..k {
            for j in 0..k {
                let x = a[(i, j)].norm();
                s1 += x * (1.0 + (i * k + j) as f64 / (k * k) as f64);
                s2 += x * (1.0 + ((7 * i + 3 * j) % 11) as f64 / 11.0);
                tot += x;
            }
        }
        (s1 / tot / width, s2 / tot / width)
    }

    fn candidates(&self, m: &Isometry) -> Vec<usize> {
        let (a, b) = Self::key(m, self.width);
        let (a, b) = (a.floor() as i64, b.floor() as i64);
        let mut out = vec![];
        for da in -1..=1 {
            for db in -1..=1 {
                if let Some(v) = self.buckets.get(&(a + da, b + db)) {
                    out.extend_from_slice(v);
                }
            }
        }
        out
    }

    fn insert(&mut self, m: &Isometry, idx: usize) {
        let (a, b) = Self::key(m, self.width);
        self.buckets.entry((a.floor() as i64, b.floor() as i64)).or_default().push(idx);
    }
}

pub fn enumerate_elements(g: &GroupSpec, radius: usize) -> Result<ElementTable> {
    enumerate_elements_with(g, radius, &EnumerationConfig::default())
}

/// Breadth-first enumeration. Products of one level are computed in parallel
/// and merged sequentially in candidate order, so the table does not depend
/// on the thread count.
pub fn enumerate_elements_with(g: &GroupSpec, radius: usize, cfg: &EnumerationConfig) -> Result<ElementTable> {
    if radius < 1 {
        return Err(Error::InvalidArgument("word radius L must be at least 1".into()));
    }
    let letters = g.letters();
    let mut entries = vec![TableEntry { iso: Isometry::identity(g.n()), word: Word::default() }];
    // the bucket width must exceed the key perturbation caused by dedup_tol
    let mut index = DedupIndex { buckets: HashMap::new(), width: (cfg.warn_tol * 100.0).max(1e-6) };
    index.insert(&entries[0].iso, 0);
    let mut warnings = vec![];
    let mut frontier: Vec<usize> = vec![0];
    for _ in 0..radius {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&e| {
                let last = entries[e].word.0.last().copied();
                (0..letters.len())
                    .filter(move |&l| last.map(|x| x.inv() != letters_letter(l)).unwrap_or(true))
                    .map(move |l| (e, l))
            })
            .collect();
        let products = cfg.execution.map(jobs.len(), |i| {
            let (e, l) = jobs[i];
            entries[e].iso.compose(&letters[l].1)
        });
        let mut next = vec![];
        for ((e, l), iso) in jobs.into_iter().zip(products) {
            let scale = iso.max_modulus().max(1.0);
            let mut duplicate = false;
            for c in index.candidates(&iso) {
                let d = entries[c].iso.projective_distance(&iso);
                if d <= cfg.dedup_tol * scale {
                    duplicate = true;
                    break;
                }
                if d <= cfg.warn_tol * scale {
                    let mut w = entries[e].word.clone();
                    w.0.push(letters[l].0);
                    warnings.push(format!(
                        "distinct elements {} and {} agree to {:.1e}; the group may not be discrete",
                        entries[c].word.render(g.labels()),
                        w.render(g.labels()),
                        d / scale
                    ));
                }
            }
            if duplicate {
                continue;
            }
            let mut word = entries[e].word.clone();
            word.0.push(letters[l].0);
            let idx = entries.len();
            index.insert(&iso, idx);
            entries.push(TableEntry { iso, word });
            next.push(idx);
            if entries.len() > cfg.cap {
                return Err(Error::TableCapExceeded(cfg.cap));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(ElementTable { n: g.n(), radius, entries, labels: g.labels().to_vec(), warnings })
}

/// Letter order is `g1, g1⁻¹, g2, g2⁻¹, …`.
fn letters_letter(l: usize) -> super::Letter {
    super::Letter { gen: l / 2, inverse: l % 2 == 1 }
}

/// `{g·y}` in table order.
pub fn orbit(t: &ElementTable, y: &HPoint) -> Result<Vec<HPoint>> {
    orbit_with(t, y, Execution::Parallel)
}

pub(crate) fn orbit_with(t: &ElementTable, y: &HPoint, exec: Execution) -> Result<Vec<HPoint>> {
    y.require_interior()?;
    if y.dim() != t.n {
        return Err(Error::DimensionMismatch { expected: t.n, found: y.dim() });
    }
    exec.map_slice(&t.entries, |e| e.iso.apply(y)).into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitSetConfig {
    /// Orbit points with `|⟨z,z⟩| / ‖z‖² ` below this count as near the boundary.
    pub ratio_threshold: f64,
    /// Single-linkage merge radius in the ball chart.
    pub merge_radius: f64,
    pub enumeration: EnumerationConfig,
}

impl Default for LimitSetConfig {
    fn default() -> Self {
        LimitSetConfig { ratio_threshold: 1e-2, merge_radius: 0.25, enumeration: EnumerationConfig::default() }
    }
}

/// Approximate limit set: boundary projections of orbit points close to
/// the sphere, clustered in the ball chart (where `∞` is an ordinary point).
/// Each cluster is represented by its member closest to the sphere.
pub fn limit_set_sample(g: &GroupSpec, radius: usize, y: &HPoint, cfg: &LimitSetConfig) -> Result<Vec<HPoint>> {
    y.require_interior()?;
    let t = enumerate_elements_with(g, radius, &cfg.enumeration)?;
    let ly = lift(y);
    let form = ly.form_value().abs();
    let near: Vec<Option<(f64, HPoint)>> = cfg.enumeration.execution.map_slice(&t.entries, |e| {
        let z = e.iso.apply_lift(&ly);
        let norm2 = z.norm().powi(2);
        let ratio = form / norm2;
        if ratio >= cfg.ratio_threshold {
            return None;
        }
        // rescale the C^n part onto the null cone
        let n = t.n;
        let last = z.0[n];
        let head = z.0.rows(0, n).norm();
        if head == 0.0 {
            return None;
        }
        let mut w = z.0.clone();
        for i in 0..n {
            w[i] *= c64(last.norm() / head, 0.0);
        }
        unlift(&LiftVector(w), 1e-6).ok().map(|p| (ratio, p))
    });
    let pts: Vec<(f64, HPoint)> = near.into_iter().flatten().collect();
    // single-linkage union-find
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if chordal_distance(&pts[i].1, &pts[j].1)? < cfg.merge_radius {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut reps: Vec<(usize, usize)> = vec![]; // (root, best member)
    for i in 0..pts.len() {
        let r = root(&mut parent, i);
        match reps.iter_mut().find(|(rr, _)| *rr == r) {
            Some(slot) => {
                if pts[i].0 < pts[slot.1].0 {
                    slot.1 = i;
                }
            }
            None => reps.push((r, i)),
        }
    }
    Ok(reps.into_iter().map(|(_, i)| pts[i].1.clone()).collect())
}
