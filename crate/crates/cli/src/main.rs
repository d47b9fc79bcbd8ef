use std::collections::HashSet;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use isocone::cone3::{
    all_choices, enumerator, isotropy_check, ChoiceVector, Cone3Error, ConeProblem, Membership, SampledChoices,
};
use isocone::fixtures::{fixture_document, FIXTURE_NAMES};
use isocone::flatsurf::{
    compatible_pair, delaunay_with_report, dual_track, find_rotation, fmt_cx, heights, is_delaunay,
    kahler_pairing_numeric, period_defect, random_tangent, rotate, Cx, FlatError, FlatSurface, PeriodTangent, ROUTES,
};
use isocone::formats::{
    parse_flat, parse_manifold, parse_multiplier, parse_tree, write_cone, write_flat, write_track, FlatDoc,
    FormatError, Parsed,
};
use isocone::lamtree::{four_point_check, is_zero_hyperbolic, TreeError};
use isocone::ordgroup::{fmt_rat, LexVec};
use isocone::track::{weights_from_labels, TrackError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exact isotropic boundary cones, train tracks, metric trees and flat surfaces.
#[derive(Parser, Debug)]
#[command(name = "isocone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    job: JobConfig,
}

#[derive(Args, Debug)]
struct JobConfig {
    /// Input file; standard input when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Report file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// ChoiceVector enumeration: `all` or `sample:N`.
    #[arg(long, global = true, default_value = "all")]
    choices: String,
    /// Seed for sampled choices and random tangents.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Quadrature subdivision depth.
    #[arg(long, global = true, default_value_t = 3)]
    depth: u32,
    /// Rotation multiplier `a+bi` applied before height computations.
    #[arg(long, global = true)]
    rotate: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary cones of triangulated 3-manifolds.
    Cone {
        #[command(subcommand)]
        op: ConeOp,
    },
    /// Flat surfaces.
    Surface {
        #[command(subcommand)]
        op: SurfaceOp,
    },
    /// Metric trees.
    Tree {
        #[command(subcommand)]
        op: TreeOp,
    },
    /// Prints a named fixture in its text format; `list` names them all.
    Fixtures { name: String },
}

#[derive(Subcommand, Debug)]
enum ConeOp {
    /// Enumerates the cone components.
    Compute,
    /// Decides membership of the `weight` lines.
    Member,
    /// Checks that the four-point subspaces are isotropic.
    Isotropy,
}

#[derive(Subcommand, Debug)]
enum SurfaceOp {
    Validate,
    Delaunay,
    Heights,
    Track,
    SymplecticCheck,
}

#[derive(Subcommand, Debug)]
enum TreeOp {
    /// Checks the four-point condition on all vertex quadruples.
    Fourpoint,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Usage(_) => 2,
            CliError::Format(e) if e.is_syntax() => 2,
            CliError::Format(_) | CliError::Domain(_) => 1,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}
domain_from!(FlatError, Cone3Error, TrackError, TreeError, isocone::ordgroup::OrdError);

/// How the status line is rendered: as a field, as a comment so the output
/// stays a valid input document, or not at all.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Report,
    Document,
    Raw,
}

/// A report plus an optional failed invariant; the report is written either way.
struct Outcome {
    report: String,
    failure: Option<String>,
    style: Style,
}

impl From<String> for Outcome {
    fn from(report: String) -> Self {
        Self { report, failure: None, style: Style::Report }
    }
}

impl Outcome {
    fn render(&self) -> String {
        let status = if self.failure.is_some() { "failed" } else { "ok" };
        match self.style {
            Style::Report => format!("status: {status}\n{}", self.report),
            Style::Document => format!("# status: {status}\n{}", self.report),
            Style::Raw => self.report.clone(),
        }
    }
}

fn read_input(job: &JobConfig) -> Result<String, CliError> {
    match &job.input {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn with_notes<T>(p: Parsed<T>, report: &mut String) -> T {
    for n in &p.notes {
        *report += &format!("note: {n}\n");
    }
    p.value
}

fn sample_count(job: &JobConfig) -> Result<Option<usize>, CliError> {
    if job.choices == "all" {
        return Ok(None);
    }
    let n = job
        .choices
        .strip_prefix("sample:")
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| CliError::Usage(format!("--choices must be all or sample:N, got {}", job.choices)))?;
    if n == 0 {
        return Err(CliError::Usage("sample:N needs N >= 1".into()));
    }
    if job.seed.is_none() {
        return Err(CliError::Usage("--seed is required with --choices sample:N".into()));
    }
    Ok(Some(n))
}

fn choices_line(choice: &[u8]) -> String {
    choice.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn cone_compute(job: &JobConfig, text: &str) -> Result<Outcome, CliError> {
    let sample = sample_count(job)?;
    let mut r = String::new();
    let doc = with_notes(parse_manifold(text)?, &mut r);
    let out = doc.out.ok_or_else(|| CliError::Domain("input has no boundary track (switch lines)".into()))?;
    let problem = ConeProblem::new(&doc.tri, &out)?;
    let strategy = enumerator(&job.choices, job.seed.unwrap_or(0))?;
    let cone = problem.cone(strategy.as_ref());
    let t = doc.tri.tet_count();
    let dim = problem.weight_space_dim();
    r += &format!("strategy: {}\n", strategy.name());
    if let Some(n) = sample {
        let drawn: HashSet<ChoiceVector> =
            SampledChoices { count: n, seed: job.seed.unwrap_or(0) }.draw(t).into_iter().collect();
        r += &format!("coverage: {}/3^{t}\n", drawn.len());
    }
    let isotropic: Vec<bool> = cone.components.iter().map(|c| problem.is_isotropic(c)).collect();
    r += &format!("tetrahedra: {t}\nweight-space-dim: {dim}\nmax-component-dim: {}\n", cone.max_dim());
    r += &format!("all-isotropic: {}\n", isotropic.iter().all(|x| *x));
    r += &write_cone(&cone);
    let failure = if let Some(k) = isotropic.iter().position(|x| !x) {
        Some(format!("component {} is not isotropic", k + 1))
    } else if 2 * cone.max_dim() > dim {
        Some(format!("component dimension {} exceeds half of {dim}", cone.max_dim()))
    } else {
        None
    };
    Ok(Outcome { report: r, failure, style: Style::Report })
}

fn cone_member(text: &str) -> Result<Outcome, CliError> {
    let mut r = String::new();
    let doc = with_notes(parse_manifold(text)?, &mut r);
    let out = doc.out.ok_or_else(|| CliError::Domain("input has no boundary track (switch lines)".into()))?;
    if doc.weights.is_empty() {
        return Err(CliError::Domain("input has no weight lines".into()));
    }
    let problem = ConeProblem::new(&doc.tri, &out)?;
    let w = weights_from_labels(problem.track(), &doc.weights)?;
    match problem.member(&w) {
        Membership::Member { choice, extension } => {
            let verified = problem.verify_witness(&w, &choice, &extension);
            r += &format!("member: true\nverified: {verified}\nchoice: {}\nwitness:\n", choices_line(&choice));
            for (label, x) in doc.tri.edge_labels().iter().zip(&extension) {
                r += &format!("  weight {label} {}\n", fmt_rat(x));
            }
            let failure = (!verified).then(|| "witness fails substitution".to_string());
            Ok(Outcome { report: r, failure, style: Style::Report })
        }
        Membership::NotMember { reason } | Membership::Rejected { reason } => {
            r += &format!("member: false\nreason: {reason}\n");
            Ok(r.into())
        }
    }
}

fn cone_isotropy(job: &JobConfig, text: &str) -> Result<Outcome, CliError> {
    let sample = sample_count(job)?;
    let mut r = String::new();
    let doc = with_notes(parse_manifold(text)?, &mut r);
    let t = doc.tri.tet_count();
    let choices: Vec<ChoiceVector> = match sample {
        Some(count) => SampledChoices { count, seed: job.seed.unwrap_or(0) }.draw(t),
        None if t > 12 => {
            return Err(CliError::Usage(format!("3^{t} choice vectors is too many for `all`; use --choices sample:N")))
        }
        None => all_choices(t).collect(),
    };
    let failed: Vec<&ChoiceVector> = choices.iter().filter(|c| !isotropy_check(&doc.tri, c)).collect();
    r += &format!("tetrahedra: {t}\nchecked: {}\nisotropic: {}\n", choices.len(), choices.len() - failed.len());
    let failure = failed.first().map(|c| format!("subspace for choice {} is not isotropic", choices_line(c)));
    Ok(Outcome { report: r, failure, style: Style::Report })
}

fn rotated(job: &JobConfig, s: FlatSurface) -> Result<(FlatSurface, Option<Cx>), CliError> {
    match &job.rotate {
        Some(m) => {
            let c = parse_multiplier(m).map_err(|e| CliError::Usage(format!("--rotate: {e}")))?;
            Ok((rotate(&s, &c)?, Some(c)))
        }
        None => Ok((s, None)),
    }
}

fn surface_validate(text: &str) -> Result<Outcome, CliError> {
    let mut r = String::new();
    let doc = with_notes(parse_flat(text)?, &mut r);
    let s = doc.surface;
    let v = s.validate()?;
    let angles: Vec<String> = v.cone_angles.iter().map(|a| a.to_string()).collect();
    r += &format!(
        "kind: {}\ntriangles: {}\nedges: {}\ngenus: {}\nsymbol: {}\ncone-angles-pi: {}\nmarked-points: {}\narea: {}\n",
        s.kind(),
        s.triangle_count(),
        s.edge_count(),
        v.genus,
        v.symbol,
        angles.join(" "),
        v.marked_points,
        fmt_rat(&v.area)
    );
    Ok(r.into())
}

/// The Delaunay surface as a flat-surface document with a commented summary.
fn surface_delaunay(text: &str) -> Result<Outcome, CliError> {
    let mut r = String::new();
    let doc = with_notes(parse_flat(text)?, &mut r);
    let (d, rep) = delaunay_with_report(&doc.surface);
    r += &format!("# flips: {}\n# delaunay: {}\n", rep.flips, is_delaunay(&d));
    r += &format!("# cocircular: {}\n", rep.cocircular.join(" "));
    r += &write_flat(&FlatDoc { surface: d, tangents: Vec::new() });
    Ok(Outcome { report: r, failure: None, style: Style::Document })
}

fn surface_heights(job: &JobConfig, text: &str) -> Result<Outcome, CliError> {
    let mut r = String::new();
    let doc = with_notes(parse_flat(text)?, &mut r);
    let (s, c) = rotated(job, doc.surface)?;
    if let Some(c) = c {
        r += &format!("rotation: {}\n", fmt_cx(&c));
    }
    for (label, h) in s.edge_labels().iter().zip(heights(&s)?) {
        r += &format!("height {label} {}\n", fmt_rat(&h));
    }
    Ok(r.into())
}

/// The dual track as a track document, with heights as comments.
fn surface_track(job: &JobConfig, text: &str) -> Result<Outcome, CliError> {
    let mut r = String::new();
    let doc = with_notes(parse_flat(text)?, &mut r);
    let (s, c) = rotated(job, doc.surface)?;
    if let Some(c) = c {
        r += &format!("# rotation: {}\n", fmt_cx(&c));
    }
    let d = dual_track(&s)?;
    r += &write_track(&d.track);
    for (label, h) in d.track.branches().iter().zip(&d.heights) {
        r += &format!("# height {label} {}\n", fmt_rat(h));
    }
    Ok(Outcome { report: r, failure: None, style: Style::Document })
}

fn symplectic_check(job: &JobConfig, text: &str) -> Result<Outcome, CliError> {
    let mut r = String::new();
    let doc = with_notes(parse_flat(text)?, &mut r);
    let (s, c) = match &job.rotate {
        Some(_) => rotated(job, doc.surface)?,
        None if heights(&doc.surface).is_err() => {
            let c = find_rotation(&doc.surface);
            (rotate(&doc.surface, &c)?, Some(c))
        }
        None => (doc.surface, None),
    };
    let turn = |t: &PeriodTangent| c.as_ref().map_or_else(|| t.clone(), |c| t.times(c));
    let (a, b, source) = if doc.tangents.len() >= 2 {
        (turn(&doc.tangents[0]), turn(&doc.tangents[1]), "bundled")
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(job.seed.unwrap_or(0));
        let a = random_tangent(&s, &mut rng, 5);
        let b = compatible_pair(&s, &a, &random_tangent(&s, &mut rng, 5));
        (a, b, "random")
    };
    if let Some(c) = &c {
        r += &format!("rotation: {}\n", fmt_cx(c));
    }
    let defect = period_defect(&s, &a, &b);
    r += &format!("kind: {}\ntangents: {source}\nperiod-defect: {}\n", s.kind(), fmt_rat(&defect));
    let mut vals = Vec::new();
    for route in ROUTES {
        let v = route.pairing(&s, &a, &b)?;
        r += &format!("{}: {}\n", route.name(), fmt_rat(&v));
        vals.push(v);
    }
    let agree = vals.iter().all(|v| *v == vals[0]);
    r += &format!("agree: {agree}\n");
    let num = kahler_pairing_numeric(&s, &a, &b, job.depth)?;
    let norm = kahler_pairing_numeric(&s, &a, &a, job.depth)?;
    r += &format!("# floating point, quadrature depth {}\n", job.depth);
    r += &format!("numeric-omega: {:.9}\nnumeric-norm-first: {:.9}\n", num.im, norm.re);
    let failure = (!agree).then(|| format!("routes disagree; period defect is {}", fmt_rat(&defect)));
    Ok(Outcome { report: r, failure, style: Style::Report })
}

fn tree_fourpoint(text: &str) -> Result<Outcome, CliError> {
    let mut r = String::new();
    let t = with_notes(parse_tree(text)?, &mut r);
    let n = t.vertex_count();
    let d: Vec<Vec<LexVec>> = (0..n).map(|a| (0..n).map(|b| t.vertex_distance(a, b).clone()).collect()).collect();
    let (mut checked, mut passed) = (0usize, 0usize);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let q = [i, j, k, l];
                    let m = q.map(|x| q.map(|y| d[x][y].clone()));
                    checked += 1;
                    passed += usize::from(four_point_check(&m)?);
                }
            }
        }
    }
    let hyperbolic = is_zero_hyperbolic(&d)?;
    r += &format!(
        "rank: {}\nvertices: {n}\nedges: {}\nquadruples: {checked}\npassed: {passed}\nzero-hyperbolic: {hyperbolic}\n",
        t.rank(),
        t.edges().len()
    );
    let failure = (passed < checked || !hyperbolic).then(|| "four-point condition fails".to_string());
    Ok(Outcome { report: r, failure, style: Style::Report })
}

fn fixtures(name: &str) -> Result<Outcome, CliError> {
    if name == "list" {
        let report = FIXTURE_NAMES.iter().map(|n| format!("{n}\n")).collect();
        return Ok(Outcome { report, failure: None, style: Style::Raw });
    }
    fixture_document(name)
        .map(|report| Outcome { report, failure: None, style: Style::Raw })
        .ok_or_else(|| CliError::Usage(format!("unknown fixture {name}; known: {}", FIXTURE_NAMES.join(", "))))
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let job = &cli.job;
    match &cli.command {
        Command::Fixtures { name } => fixtures(name),
        Command::Cone { op } => {
            let text = read_input(job)?;
            match op {
                ConeOp::Compute => cone_compute(job, &text),
                ConeOp::Member => cone_member(&text),
                ConeOp::Isotropy => cone_isotropy(job, &text),
            }
        }
        Command::Surface { op } => {
            let text = read_input(job)?;
            match op {
                SurfaceOp::Validate => surface_validate(&text),
                SurfaceOp::Delaunay => surface_delaunay(&text),
                SurfaceOp::Heights => surface_heights(job, &text),
                SurfaceOp::Track => surface_track(job, &text),
                SurfaceOp::SymplecticCheck => symplectic_check(job, &text),
            }
        }
        Command::Tree { op: TreeOp::Fourpoint } => tree_fourpoint(&read_input(job)?),
    }
}

fn emit(job: &JobConfig, report: &str) -> Result<(), CliError> {
    match &job.output {
        Some(p) => fs::write(p, report).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match run(&cli) {
        Ok(o) => emit(&cli.job, &o.render()).and_then(|()| o.failure.map_or(Ok(()), |f| Err(CliError::Domain(f)))),
        // Model-level failures still produce a report.
        Err(e) if e.exit_code() == 1 => emit(&cli.job, &format!("status: failed\nerror: {e}\n")).and(Err(e)),
        Err(e) => Err(e),
    };
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
