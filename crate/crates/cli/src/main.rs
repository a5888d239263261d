//! `chgeom`: seeded, file-based experiments on complex hyperbolic isometry
//! groups. Every subcommand prints a short summary; with `--out` it also
//! writes a CSV and `<out>.manifest.json`.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use chgeom::cr::{default_alphas, mu_density, quasi_cr_audit, ChainCondition, CrAuditConfig};
use chgeom::groups::{
    cocompactness_check, dirichlet_sides, enumerate_elements_with, limit_set_sample, minimal_invariant_subgroup,
    precise_invariance_audit, rotation_defect, two_sided_center_search, CenterBox, CuspAuditConfig, DirichletConfig,
    EnumerationConfig, GroupSpec, LimitSetConfig, SideReport, ViolationKind,
};
use chgeom::io::{fmt_f64, point_fields, point_headers, read_group_spec, read_points, side_report_table, CsvTable, RunManifest};
use chgeom::{classify, ClassifyConfig, Error, HPoint, Metric, SubgroupDescriptor, C64, DEFAULT_KAPPA};

#[derive(Parser)]
#[command(name = "chgeom", version, about = "Experiments on discrete groups of complex hyperbolic isometries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// CSV output path; a manifest is written to <out>.manifest.json
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GroupArg {
    /// Group file (JSON)
    #[arg(long)]
    group: PathBuf,
}

#[derive(Args)]
struct CenterArg {
    /// Interior point: comma-separated ξ entries as complex literals (e.g. 1+2i), then v, then u
    #[arg(long, allow_hyphen_values = true)]
    center: String,
}

#[derive(Args)]
struct TableArgs {
    /// Word-length radius of the element table
    #[arg(long = "L", default_value_t = 4)]
    radius: usize,
    /// Maximal number of table entries
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
    /// Projective distance under which two elements are identified
    #[arg(long, default_value_t = 1e-8)]
    dedup_tol: f64,
}

impl TableArgs {
    fn config(&self) -> EnumerationConfig {
        EnumerationConfig { cap: self.cap, dedup_tol: self.dedup_tol, ..Default::default() }
    }

    fn record(&self, m: &mut RunManifest) {
        m.param("L", self.radius).param("cap", self.cap).param("dedup_tol", self.dedup_tol);
    }
}

#[derive(Args)]
struct RayArgs {
    /// Random ray directions from the center
    #[arg(long, default_value_t = 2000)]
    rays: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Metric scale: d = κ·acosh(...)
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    kappa: f64,
    /// Arclength searched along each ray
    #[arg(long, default_value_t = 20.0)]
    t_max: f64,
    /// Face-candidate tolerance on d(x,gy) - d(x,y)
    #[arg(long, default_value_t = 1e-7)]
    delta_eq: f64,
    /// Required clearance of the runner-up element at a witness
    #[arg(long, default_value_t = 1e-9)]
    delta_strict: f64,
    /// Bisection tolerance along a ray
    #[arg(long, default_value_t = 1e-10)]
    bisect_tol: f64,
    /// Skip the doubled-ray stability rerun
    #[arg(long)]
    no_stability: bool,
}

impl RayArgs {
    fn config(&self, enumeration: EnumerationConfig) -> Result<DirichletConfig, Error> {
        Ok(DirichletConfig {
            rays: self.rays,
            t_max: self.t_max,
            seed: self.seed,
            metric: Metric::new(self.kappa)?,
            delta_eq: self.delta_eq,
            delta_strict: self.delta_strict,
            bisect_tol: self.bisect_tol,
            check_stability: !self.no_stability,
            enumeration,
            ..Default::default()
        })
    }

    fn record(&self, m: &mut RunManifest) {
        m.param("rays", self.rays)
            .param("t_max", self.t_max)
            .param("delta_eq", self.delta_eq)
            .param("delta_strict", self.delta_strict)
            .param("bisect_tol", self.bisect_tol)
            .param("check_stability", !self.no_stability);
        m.seed = Some(self.seed);
        m.kappa = Some(self.kappa);
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify each generator as elliptic, parabolic or loxodromic
    Classify {
        #[command(flatten)]
        group: GroupArg,
        /// Eigenvalue tolerance
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Relative singular-value tolerance for semisimplicity
        #[arg(long, default_value_t = 1e-8)]
        rank_tol: f64,
    },
    /// Orbit of a point under all elements of word length ≤ L
    Orbit {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        center: CenterArg,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Approximate limit set from a truncated orbit
    Limitset {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        center: CenterArg,
        #[command(flatten)]
        table: TableArgs,
        /// Orbit points with |⟨z,z⟩|/‖z‖² below this are near the boundary
        #[arg(long, default_value_t = 1e-2)]
        ratio: f64,
        /// Clustering radius in the ball chart
        #[arg(long, default_value_t = 0.25)]
        merge: f64,
    },
    /// Ray-sampled sides of a Dirichlet domain
    DirichletSides {
        #[command(flatten)]
        group: GroupArg,
        #[command(flatten)]
        center: CenterArg,
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        rays: RayArgs,
    },
    /// Search a box for a center with a two-sided Dirichlet domain
    CenterSearch {
        #[command(flatten)]
        group: GroupArg,
        /// Middle of the search box
        #[command(flatten)]
        center: CenterArg,
        /// Half-width of the box (u is scaled by 1 ± this)
        #[arg(long, default_value_t = 0.5)]
        half_width: f64,
        #[command(flatten)]
        table: TableArgs,
        #[command(flatten)]
        rays: RayArgs,
    },
    /// Minimal subgroup of the Heisenberg group on which the group acts cocompactly
    InvariantSubgroup {
        #[command(flatten)]
        group: GroupArg,
        /// Samples for the density check
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a cusp neighbourhood and check precise invariance
    CuspAudit {
        #[command(flatten)]
        group: GroupArg,
        /// Cusp point: `inf` or comma-separated ξ entries then v
        #[arg(long, default_value = "inf", allow_hyphen_values = true)]
        p: String,
        /// Cusp radius
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Invariant subgroup: auto (minimal invariant), center or whole
        #[arg(long, default_value = "auto")]
        subgroup: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Word-length radius of the element table
        #[arg(long = "L", default_value_t = 3)]
        radius: usize,
        /// Height tolerance for image membership
        #[arg(long, default_value_t = 1e-7)]
        delta_eq: f64,
    },
    /// Fit cross-ratio distortion bounds for a map given by point pairs
    CrAudit {
        /// CSV with point columns and f_ image columns
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        quads: usize,
        /// Comma-separated exponents (default 1, 1.25, …, 4)
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of worst quads reported
        #[arg(long, default_value_t = 10)]
        keep_worst: usize,
    },
    /// Check μ-density of a finite boundary point set
    MuDensity {
        /// CSV with point columns
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        mu: f64,
        /// Require 1/μ ≤ CR as well as CR ≤ μ
        #[arg(long)]
        two_sided: bool,
    },
}

fn parse_complex(s: &str, what: &str) -> Result<C64, Error> {
    s.trim().parse::<C64>().map_err(|_| Error::Parse(format!("{what}: not a complex number: {s:?}")))
}

fn parse_real(s: &str, what: &str) -> Result<f64, Error> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("{what}: not a number: {s:?}")))
}

fn parse_center(s: &str, n: usize) -> Result<HPoint, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n + 1 {
        return Err(Error::Parse(format!("--center: expected {} comma-separated values (ξ…, v, u), got {}", n + 1, parts.len())));
    }
    let xi = parts[..n - 1].iter().map(|p| parse_complex(p, "--center")).collect::<Result<Vec<_>, _>>()?;
    let (v, u) = (parse_real(parts[n - 1], "--center")?, parse_real(parts[n], "--center")?);
    if !(u > 0.0) {
        return Err(Error::Parse(format!("--center: u must be positive, got {u}")));
    }
    HPoint::new(xi, v, u)
}

fn parse_boundary(s: &str, n: usize) -> Result<HPoint, Error> {
    if s.trim() == "inf" {
        return Ok(HPoint::infinity(n));
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(Error::Parse(format!("--p: expected `inf` or {n} comma-separated values (ξ…, v), got {}", parts.len())));
    }
    let xi = parts[..n - 1].iter().map(|p| parse_complex(p, "--p")).collect::<Result<Vec<_>, _>>()?;
    HPoint::boundary(xi, parse_real(parts[n - 1], "--p")?)
}

fn complex_text(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Output of a subcommand: the stdout summary and an optional table.
struct Run {
    manifest: RunManifest,
    lines: Vec<String>,
    table: Option<CsvTable>,
}

impl Run {
    fn new(name: &str) -> Self {
        Run { manifest: RunManifest::new(name), lines: vec![], table: None }
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }
}

fn load_group(arg: &GroupArg, run: &mut Run) -> Result<GroupSpec, Error> {
    run.manifest.inputs.push(arg.group.display().to_string());
    read_group_spec(&arg.group)
}

fn side_summary(run: &mut Run, r: &SideReport) {
    let doubled = r.doubled_count.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
    run.say(format!("faces: {} (stable: {}, doubled-ray count: {doubled})", r.face_count(), r.stable));
    run.say(format!(
        "rays: {} hit, {} escaped, {} ambiguous; table size {}",
        r.rays_hit, r.rays_escaped, r.rays_ambiguous, r.table_size
    ));
    for f in &r.faces {
        run.say(format!("  {} hits {} margin {:.3e}", f.label, f.hits, f.margin));
    }
    run.manifest
        .result("face_count", r.face_count())
        .result("stable", r.stable)
        .result("rays_hit", r.rays_hit)
        .result("rays_escaped", r.rays_escaped)
        .result("rays_ambiguous", r.rays_ambiguous)
        .result("table_size", r.table_size);
    run.manifest.warnings.extend(r.warnings.iter().cloned());
}

fn execute(cmd: &Command) -> Result<Run, Error> {
    match cmd {
        Command::Classify { group, tol, rank_tol } => {
            let mut run = Run::new("classify");
            let g = load_group(group, &mut run)?;
            run.manifest.param("tol", *tol).param("rank_tol", *rank_tol);
            let cfg = ClassifyConfig { tol: *tol, rank_tol: *rank_tol };
            let mut t = CsvTable::new(vec!["generator".into(), "type".into(), "nontrivial_rotation".into()]);
            for (gen, label) in g.generators().iter().zip(g.labels()) {
                let c = classify(&gen.isometry(), &cfg)?;
                if g.generators().len() == 1 {
                    run.say(c.kind.to_string());
                } else {
                    run.say(format!("{label}: {}", c.kind));
                }
                t.push(vec![label.clone(), c.kind.to_string(), c.has_nontrivial_rotation.to_string()]);
            }
            run.table = Some(t);
            Ok(run)
        }
        Command::Orbit { group, center, table } => {
            let mut run = Run::new("orbit");
            let g = load_group(group, &mut run)?;
            let y = parse_center(&center.center, g.n())?;
            table.record(&mut run.manifest);
            run.manifest.param("center", center.center.clone());
            let t = enumerate_elements_with(&g, table.radius, &table.config())?;
            let mut headers = vec!["element".to_string(), "word".to_string()];
            headers.extend(point_headers("", g.n()));
            let mut csv = CsvTable::new(headers);
            for (i, e) in t.entries.iter().enumerate() {
                let mut row = vec![i.to_string(), t.render(&e.word)];
                row.extend(point_fields(&e.iso.apply(&y)?));
                csv.push(row);
            }
            run.say(format!("orbit points: {}", t.len()));
            run.manifest.result("orbit_size", t.len());
            run.manifest.warnings.extend(t.warnings.iter().cloned());
            run.table = Some(csv);
            Ok(run)
        }
        Command::Limitset { group, center, table, ratio, merge } => {
            let mut run = Run::new("limitset");
            let g = load_group(group, &mut run)?;
            let y = parse_center(&center.center, g.n())?;
            table.record(&mut run.manifest);
            run.manifest.param("center", center.center.clone()).param("ratio", *ratio).param("merge", *merge);
            let cfg = LimitSetConfig { ratio_threshold: *ratio, merge_radius: *merge, enumeration: table.config() };
            let pts = limit_set_sample(&g, table.radius, &y, &cfg)?;
            let mut headers = vec!["cluster".to_string()];
            headers.extend(point_headers("", g.n()));
            let mut csv = CsvTable::new(headers);
            run.say(format!("limit set clusters: {}", pts.len()));
            for (i, p) in pts.iter().enumerate() {
                let mut row = vec![(i + 1).to_string()];
                row.extend(point_fields(p));
                run.say(format!("  {}", point_fields(p).join(", ")));
                csv.push(row);
            }
            run.manifest.result("clusters", pts.len());
            run.table = Some(csv);
            Ok(run)
        }
        Command::DirichletSides { group, center, table, rays } => {
            let mut run = Run::new("dirichlet-sides");
            let g = load_group(group, &mut run)?;
            let y = parse_center(&center.center, g.n())?;
            table.record(&mut run.manifest);
            rays.record(&mut run.manifest);
            run.manifest.param("center", center.center.clone());
            let r = dirichlet_sides(&g, &y, table.radius, &rays.config(table.config())?)?;
            side_summary(&mut run, &r);
            run.table = Some(side_report_table(&r));
            Ok(run)
        }
        Command::CenterSearch { group, center, half_width, table, rays } => {
            let mut run = Run::new("center-search");
            let g = load_group(group, &mut run)?;
            let y = parse_center(&center.center, g.n())?;
            table.record(&mut run.manifest);
            rays.record(&mut run.manifest);
            run.manifest.param("center", center.center.clone()).param("half_width", *half_width);
            let bx = CenterBox::around(&y, *half_width)?;
            let s = two_sided_center_search(&g, &bx, table.radius, &rays.config(table.config())?)?;
            run.say(format!("found: {} after {} evaluations", s.found, s.evaluations));
            run.say(format!("center: {}", point_fields(&s.center).join(", ")));
            side_summary(&mut run, &s.report);
            run.manifest.result("found", s.found).result("evaluations", s.evaluations);
            run.table = Some(side_report_table(&s.report));
            Ok(run)
        }
        Command::InvariantSubgroup { group, samples, seed } => {
            let mut run = Run::new("invariant-subgroup");
            let g = load_group(group, &mut run)?;
            run.manifest.param("samples", *samples);
            run.manifest.seed = Some(*seed);
            let d = minimal_invariant_subgroup(&g)?;
            let c = cocompactness_check(&g, &d, *samples, *seed)?;
            let defect = rotation_defect(&g, &d)?;
            let basis: Vec<String> =
                d.basis.iter().map(|b| format!("({})", b.iter().map(|z| complex_text(*z)).collect::<Vec<_>>().join(", "))).collect();
            let b = &d.conjugator;
            let conj = format!("(({}), {})", b.xi.iter().map(|z| complex_text(*z)).collect::<Vec<_>>().join(", "), b.v);
            run.say(format!("W basis: [{}]", basis.join(", ")));
            run.say(format!("include center: {}", d.include_center));
            run.say(format!("conjugator: {conj}"));
            run.say(format!("index: {}", d.index));
            run.say(format!("rotation defect: {defect:.3e}"));
            run.say(format!(
                "cocompact: {} (max gap {:.4} vs delta {:.4}, orbit {} points, {} off V)",
                c.passed, c.max_gap, c.delta, c.orbit_size, c.points_off_v
            ));
            let mut csv = CsvTable::new(vec!["key".into(), "value".into()]);
            for (k, v) in [
                ("real_dim", d.real_dim().to_string()),
                ("include_center", d.include_center.to_string()),
                ("index", d.index.to_string()),
                ("conjugator", conj),
                ("rotation_defect", fmt_f64(defect)),
                ("delta", fmt_f64(c.delta)),
                ("max_gap", fmt_f64(c.max_gap)),
                ("points_off_v", c.points_off_v.to_string()),
                ("cocompact", c.passed.to_string()),
            ] {
                csv.push(vec![k.into(), v]);
            }
            for (i, b) in basis.iter().enumerate() {
                csv.push(vec![format!("basis_{}", i + 1), b.clone()]);
            }
            run.manifest.result("cocompact", c.passed).result("real_dim", d.real_dim());
            run.table = Some(csv);
            Ok(run)
        }
        Command::CuspAudit { group, p, r, subgroup, samples, seed, radius, delta_eq } => {
            let mut run = Run::new("cusp-audit");
            let g = load_group(group, &mut run)?;
            let pt = parse_boundary(p, g.n())?;
            let v = match subgroup.as_str() {
                "auto" => minimal_invariant_subgroup(&g)?,
                "center" => SubgroupDescriptor::center(g.n()),
                "whole" => SubgroupDescriptor::whole(g.n()),
                other => return Err(Error::Parse(format!("--subgroup: expected auto, center or whole, got {other:?}"))),
            };
            run.manifest
                .param("p", p.clone())
                .param("r", *r)
                .param("subgroup", subgroup.clone())
                .param("samples", *samples)
                .param("L", *radius)
                .param("delta_eq", *delta_eq);
            run.manifest.seed = Some(*seed);
            let cfg = CuspAuditConfig { samples: *samples, seed: *seed, radius: *radius, delta_eq: *delta_eq, ..Default::default() };
            let a = precise_invariance_audit(&g, &pt, *r, &v, &cfg)?;
            run.say(format!("violations: {}", a.violations.len()));
            run.say(format!("stabilizer elements: {}, other elements: {}", a.stabilizer.len(), a.others.len()));
            run.say(format!("samples: {} ({} rejected)", a.samples, a.rejected));
            let mut headers: Vec<String> = ["sample", "word", "kind", "image_height"].iter().map(|s| s.to_string()).collect();
            headers.extend(point_headers("", g.n()));
            let mut csv = CsvTable::new(headers);
            for x in &a.violations {
                let kind = match x.kind {
                    ViolationKind::StabilizerLeaves => "stabilizer_leaves",
                    ViolationKind::OtherOverlaps => "other_overlaps",
                };
                let mut row = vec![x.sample.to_string(), x.word.clone(), kind.into(), fmt_f64(x.image_height)];
                row.extend(point_fields(&x.point));
                csv.push(row);
            }
            run.manifest.result("violations", a.violations.len()).result("rejected", a.rejected);
            run.table = Some(csv);
            Ok(run)
        }
        Command::CrAudit { points, quads, alphas, seed, keep_worst } => {
            let mut run = Run::new("cr-audit");
            run.manifest.inputs.push(points.display().to_string());
            let cloud = read_points(points)?;
            let images = cloud
                .images
                .ok_or_else(|| Error::Parse("points: cr-audit needs image columns f_xi_re_1, …, f_v".into()))?;
            let pairs: Vec<(HPoint, HPoint)> = cloud.points.into_iter().zip(images).collect();
            let alphas = alphas.clone().unwrap_or_else(default_alphas);
            run.manifest.param("quads", *quads).param("alphas", alphas.clone()).param("keep_worst", *keep_worst);
            run.manifest.seed = Some(*seed);
            let cfg = CrAuditConfig { quads: *quads, alphas, seed: *seed, keep_worst: *keep_worst, ..Default::default() };
            let a = quasi_cr_audit(&pairs, &cfg)?;
            let mut csv = CsvTable::new(
                ["alpha", "M_hat", "worst_1", "worst_2", "worst_3", "worst_4"].iter().map(|s| s.to_string()).collect(),
            );
            for f in &a.fits {
                run.say(format!("alpha {:.2}: M_hat {}", f.alpha, fmt_f64(f.m_hat)));
                let mut row = vec![fmt_f64(f.alpha), fmt_f64(f.m_hat)];
                match f.worst {
                    Some(w) => row.extend(w.iter().map(|i| i.to_string())),
                    None => row.extend(std::iter::repeat_n(String::new(), 4)),
                }
                csv.push(row);
            }
            run.say(format!("quads: {} sampled, {} degenerate, unbounded: {}", a.sampled, a.degenerate, a.unbounded));
            run.manifest.result("degenerate", a.degenerate).result("unbounded", a.unbounded);
            run.table = Some(csv);
            Ok(run)
        }
        Command::MuDensity { points, mu, two_sided } => {
            let mut run = Run::new("mu-density");
            run.manifest.inputs.push(points.display().to_string());
            let cloud = read_points(points)?;
            let cond = if *two_sided { ChainCondition::TwoSided } else { ChainCondition::UpperBound };
            run.manifest.param("mu", *mu).param("condition", format!("{cond:?}"));
            let r = mu_density(&cloud.points, *mu, cond, Default::default())?;
            run.say(format!("dense: {}", r.dense));
            run.say("chains: interior links only; endpoints attach to their nearest interior point");
            let mut csv = CsvTable::new(vec!["a".into(), "b".into()]);
            for &(a, b) in &r.failing {
                run.say(format!("  no chain {a} -> {b}"));
                csv.push(vec![a.to_string(), b.to_string()]);
            }
            run.manifest.result("dense", r.dense).result("failing_pairs", r.failing.len());
            run.table = Some(csv);
            Ok(run)
        }
    }
}

fn write_outputs(run: &Run, out: &Path) -> Result<(), Error> {
    if let Some(t) = &run.table {
        t.write(out)?;
    }
    run.manifest.write_for(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    let result = execute(&cli.command).and_then(|mut run| {
        run.manifest.threads = Some(rayon::current_num_threads());
        run.manifest.wall_time_seconds = start.elapsed().as_secs_f64();
        if let Some(out) = &cli.out {
            write_outputs(&run, out)?;
        }
        Ok(run)
    });
    match result {
        Ok(run) => {
            let mut stdout = std::io::stdout().lock();
            for l in &run.lines {
                if writeln!(stdout, "{l}").is_err() {
                    break;
                }
            }
            for w in &run.manifest.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}
