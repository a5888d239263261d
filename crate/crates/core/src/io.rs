//! File formats: JSON group specs, CSV point clouds, CSV reports and run
//! manifests. Complex numbers are `[re, im]` pairs; floats in CSV output
//! carry 17 significant digits.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Generator, GroupSpec, SideReport};
use crate::heisenberg::{HeisElement, HeisIsometry};
use crate::hermitian::{c64, CMatrix, HPoint, C64};
use crate::isometry::Isometry;

#[derive(Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum GeneratorFile {
    Heis {
        #[serde(rename = "A", default)]
        a: Option<Vec<Vec<[f64; 2]>>>,
        xi: Vec<[f64; 2]>,
        v: f64,
    },
    Matrix {
        entries: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    n: usize,
    generators: Vec<GeneratorFile>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

fn square(rows: &[Vec<[f64; 2]>], size: usize, field: &str) -> Result<CMatrix> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(Error::Parse(format!("{field}: expected a {size}x{size} matrix")));
    }
    Ok(CMatrix::from_fn(size, size, |i, j| c64(rows[i][j][0], rows[i][j][1])))
}

fn with_field(field: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse(m) => Error::Parse(m),
        Error::NotJUnitary { deviation, tol } => Error::NotJUnitary { deviation, tol },
        other => Error::Parse(format!("{field}: {other}")),
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    let file: GroupFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))?;
    let n = file.n;
    if n < 2 {
        return Err(Error::Parse(format!("n: must be at least 2, got {n}")));
    }
    let mut gens = vec![];
    for (i, g) in file.generators.iter().enumerate() {
        let field = format!("generators[{i}]");
        let gen = match g {
            GeneratorFile::Heis { a, xi, v } => {
                if xi.len() != n - 1 {
                    return Err(Error::Parse(format!("{field}.xi: expected {} entries, got {}", n - 1, xi.len())));
                }
                let a = match a {
                    Some(rows) => square(rows, n - 1, &format!("{field}.A"))?,
                    None => CMatrix::identity(n - 1, n - 1),
                };
                let tau = HeisElement::new(xi.iter().map(|z| c64(z[0], z[1])).collect(), *v);
                match HeisIsometry::new(a, tau) {
                    Ok(h) => Generator::Heis(h),
                    Err(Error::NonUnitaryRotation(d)) => return Err(Error::NonUnitaryRotation(d)),
                    Err(e) => return Err(with_field(format!("{field}.A"))(e)),
                }
            }
            GeneratorFile::Matrix { entries } => {
                let m = square(entries, n + 1, &format!("{field}.entries"))?;
                Generator::Matrix(Isometry::new(m).map_err(with_field(format!("{field}.entries")))?)
            }
        };
        gens.push(gen);
    }
    GroupSpec::new(n, gens, file.labels).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::Parse(format!("group file: {m}")),
        other => other,
    })
}

pub fn read_group_spec(path: &Path) -> Result<GroupSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_group_spec(&text)
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect()
}

/// JSON text for a group spec, readable by [`parse_group_spec`].
pub fn group_spec_json(g: &GroupSpec) -> String {
    let generators = g
        .generators()
        .iter()
        .map(|gen| match gen {
            Generator::Heis(h) => GeneratorFile::Heis {
                a: Some(rows(&h.a)),
                xi: h.tau.xi.iter().map(|z| pair(*z)).collect(),
                v: h.tau.v,
            },
            Generator::Matrix(m) => GeneratorFile::Matrix { entries: rows(m.matrix()) },
        })
        .collect();
    let file = GroupFile { n: g.n(), generators, labels: Some(g.labels().to_vec()) };
    serde_json::to_string_pretty(&file).expect("serializable")
}

/// A boundary point cloud, optionally paired with image points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<HPoint>,
    pub images: Option<Vec<HPoint>>,
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim() == name)
}

/// Reads `xi_re_1, xi_im_1, …, v` columns (and `f_xi_re_1, …, f_v` for
/// images). Every row is a boundary point.
pub fn parse_points(text: &str) -> Result<PointCloud> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse(format!("points header: {e}")))?.clone();
    let layout = |prefix: &str| -> Option<(Vec<(usize, usize)>, usize)> {
        let v = column(&headers, &format!("{prefix}v"))?;
        let mut xi = vec![];
        for j in 1.. {
            match (column(&headers, &format!("{prefix}xi_re_{j}")), column(&headers, &format!("{prefix}xi_im_{j}"))) {
                (Some(r), Some(i)) => xi.push((r, i)),
                _ => break,
            }
        }
        Some((xi, v))
    };
    let (xi_cols, v_col) =
        layout("").ok_or_else(|| Error::Parse("points header: missing column v".into()))?;
    if xi_cols.is_empty() {
        return Err(Error::Parse("points header: missing columns xi_re_1, xi_im_1".into()));
    }
    let image_layout = layout("f_");
    if let Some((fx, _)) = &image_layout {
        if fx.len() != xi_cols.len() {
            return Err(Error::Parse("points header: image columns do not match point columns".into()));
        }
    }
    let mut points = vec![];
    let mut images = vec![];
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("points line {}: {e}", line + 2)))?;
        let num = |c: usize| -> Result<f64> {
            let s = rec.get(c).unwrap_or("");
            s.parse::<f64>().map_err(|_| {
                Error::Parse(format!("points line {}, column {}: not a number: {s:?}", line + 2, &headers[c]))
            })
        };
        let read = |cols: &[(usize, usize)], v: usize| -> Result<HPoint> {
            let xi = cols.iter().map(|&(r, i)| Ok(c64(num(r)?, num(i)?))).collect::<Result<Vec<_>>>()?;
            HPoint::boundary(xi, num(v)?).map_err(|e| Error::Parse(format!("points line {}: {e}", line + 2)))
        };
        points.push(read(&xi_cols, v_col)?);
        if let Some((fx, fv)) = &image_layout {
            images.push(read(fx, *fv)?);
        }
    }
    Ok(PointCloud { points, images: image_layout.map(|_| images) })
}

pub fn read_points(path: &Path) -> Result<PointCloud> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_points(&text)
}

/// `{:.16e}`: 17 significant digits, round-trips every `f64`. Negative
/// zero is written as `0`.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Header names for a finite point with the given prefix.
pub fn point_headers(prefix: &str, n: usize) -> Vec<String> {
    let mut h = vec![];
    for j in 1..n {
        h.push(format!("{prefix}xi_re_{j}"));
        h.push(format!("{prefix}xi_im_{j}"));
    }
    h.push(format!("{prefix}v"));
    h.push(format!("{prefix}u"));
    h
}

/// Point coordinates as CSV fields; `∞` is written as `inf` in every column.
pub fn point_fields(p: &HPoint) -> Vec<String> {
    match p {
        HPoint::Infinity { n } => vec!["inf".to_string(); 2 * (n - 1) + 2],
        HPoint::Finite(h) => {
            let mut f = vec![];
            for z in &h.xi {
                f.push(fmt_f64(z.re));
                f.push(fmt_f64(z.im));
            }
            f.push(fmt_f64(h.v));
            f.push(fmt_f64(h.u));
            f
        }
    }
}

/// In-memory CSV table, written in one go.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(headers: Vec<String>) -> Self {
        CsvTable { headers, rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(vec![]);
        w.write_record(&self.headers).map_err(|e| Error::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.into_inner().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let bytes = self.to_bytes()?;
        let mut f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        f.write_all(&bytes)?;
        Ok(())
    }
}

/// Everything needed to reproduce a run. Written next to the output as
/// `<out>.manifest.json` so CSV bodies depend only on the inputs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    pub seed: Option<u64>,
    pub kappa: Option<f64>,
    pub threads: Option<usize>,
    pub code_version: String,
    pub wall_time_seconds: f64,
    pub summary: serde_json::Map<String, serde_json::Value>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<serde_json::Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<serde_json::Value>) -> &mut Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    pub fn manifest_path(out: &Path) -> std::path::PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        s.into()
    }

    pub fn write_for(&self, out: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("serializable");
        std::fs::write(Self::manifest_path(out), text)?;
        Ok(())
    }
}

/// One row per detected face: table index, word, ray hits, runner-up
/// margin, the total face count and the witness coordinates.
pub fn side_report_table(r: &SideReport) -> CsvTable {
    let n = r.center.dim();
    let mut headers: Vec<String> =
        ["face", "element", "word", "hits", "margin", "face_count", "stable"].iter().map(|s| s.to_string()).collect();
    headers.extend(point_headers("witness_", n));
    let mut t = CsvTable::new(headers);
    for (i, f) in r.faces.iter().enumerate() {
        let mut row = vec![
            (i + 1).to_string(),
            f.element.to_string(),
            f.label.clone(),
            f.hits.to_string(),
            fmt_f64(f.margin),
            r.face_count().to_string(),
            r.stable.to_string(),
        ];
        row.extend(point_fields(&f.witness));
        t.push(row);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_round_trip() {
        let text = r#"{"n": 2, "generators": [
            {"type": "heis", "xi": [[1, 0]], "v": 0},
            {"type": "heis", "A": [[[0, 1]]], "xi": [[0, 0]], "v": 1},
            {"type": "matrix", "entries": [[[1,0],[0,0],[0,0]],[[0,0],[-1,0],[0,0]],[[0,0],[0,0],[1,0]]]}
        ], "labels": ["a", "b", "c"]}"#;
        let g = parse_group_spec(text).unwrap();
        assert_eq!(g.labels(), ["a", "b", "c"]);
        let again = parse_group_spec(&group_spec_json(&g)).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn group_errors_name_the_field() {
        let bad_xi = r#"{"n": 3, "generators": [{"type": "heis", "xi": [[1, 0]], "v": 0}]}"#;
        let e = parse_group_spec(bad_xi).unwrap_err();
        assert!(e.to_string().contains("generators[0].xi"), "{e}");
        let bad_a = r#"{"n": 2, "generators": [{"type": "heis", "A": [[[2, 0]]], "xi": [[1, 0]], "v": 0}]}"#;
        assert!(parse_group_spec(bad_a).unwrap_err().is_numeric());
        let bad_m = r#"{"n": 2, "generators": [{"type": "matrix", "entries": [[[2,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]}]}"#;
        assert!(matches!(parse_group_spec(bad_m).unwrap_err(), Error::NotJUnitary { .. }));
        let shape = r#"{"n": 2, "generators": [{"type": "matrix", "entries": [[[1,0]]]}]}"#;
        assert!(parse_group_spec(shape).unwrap_err().to_string().contains("generators[0].entries"));
        let e = parse_group_spec("{\"n\": 2,\n \"generators\": [}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_group_spec(r#"{"n": 2, "generators": []}"#).is_err());
    }

    #[test]
    fn points_round_trip() {
        let text = "xi_re_1,xi_im_1,v,f_xi_re_1,f_xi_im_1,f_v\n0,0,0,1,0,0\n1.5,-2,3,2.5,-2,3\n";
        let pc = parse_points(text).unwrap();
        assert_eq!(pc.points.len(), 2);
        assert_eq!(pc.points[1], HPoint::boundary(vec![c64(1.5, -2.0)], 3.0).unwrap());
        assert_eq!(pc.images.as_ref().unwrap()[0], HPoint::boundary(vec![c64(1.0, 0.0)], 0.0).unwrap());
        let e = parse_points("xi_re_1,xi_im_1,v\n0,x,0\n").unwrap_err();
        assert!(e.to_string().contains("line 2") && e.to_string().contains("xi_im_1"), "{e}");
        assert!(parse_points("xi_re_1,v\n0,0\n").is_err());
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        let mut t = CsvTable::new(vec!["a".into(), "b".into()]);
        t.push(vec!["1".into(), fmt_f64(0.5)]);
        assert_eq!(String::from_utf8(t.to_bytes().unwrap()).unwrap(), "a,b\n1,5.0000000000000000e-1\n");
    }
}
