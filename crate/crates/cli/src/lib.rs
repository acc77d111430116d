//! Command-line runs: unfold a mesh file, re-verify a saved run, or sweep
//! random convex hulls.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vunfold::hull::random_hull;
use vunfold::io::{emit_json, emit_svg, parse_json, parse_mesh, InputError, MeshFormat, RunDocument, RunKind, SvgStyle};
use vunfold::{check_layout, check_path, lattice_graph, unfold_cycle, unfold_path, FacetCycleError, Mesh64, MeshError, Report, UnfoldError, Unfolding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Path,
    Cycle,
    Verify,
    Experiment,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    /// Mesh file (OFF or OBJ) for path and cycle, run JSON for verify.
    pub input: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    /// Facet ids in unfolding order, one per line.
    pub out_order: Option<PathBuf>,
    /// Number of hulls in experiment mode.
    pub n: usize,
    pub seed: u64,
    pub style: SvgStyle,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        RunConfig { mode, input: None, out_svg: None, out_json: None, out_order: None, n: 100, seed: 0, style: SvgStyle::default() }
    }
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Runs `config`, writing the summary to `out`. Returns the process exit
/// code: 0 when every check passes, 1 on a failed check or internal error,
/// 2 on unreadable or unsuitable input.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> i32 {
    match execute(config, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

/// 2 when the chain of causes shows the input was at fault.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    let input = e.chain().any(|c| {
        c.is::<InputError>()
            || c.is::<MeshError>()
            || c.is::<std::io::Error>()
            || c.is::<serde_json::Error>()
            || matches!(c.downcast_ref::<FacetCycleError>(), Some(FacetCycleError::GenusNotZero { .. }))
            || matches!(c.downcast_ref::<UnfoldError>(), Some(UnfoldError::Cycle(FacetCycleError::GenusNotZero { .. })))
    });
    if input {
        EXIT_INPUT
    } else {
        EXIT_FAIL
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    match config.mode {
        Mode::Path | Mode::Cycle => unfold_file(config, out),
        Mode::Verify => verify_file(config, out),
        Mode::Experiment => experiment(config, out),
    }
}

fn input_path(config: &RunConfig) -> Result<&Path> {
    match &config.input {
        Some(p) => Ok(p),
        None => Err(usage("--in is required for this mode")),
    }
}

fn usage(msg: &str) -> anyhow::Error {
    std::io::Error::new(std::io::ErrorKind::InvalidInput, msg.to_owned()).into()
}

pub fn read_mesh(path: &Path) -> Result<Mesh64> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let m = parse_mesh(&bytes, MeshFormat::detect(path, &bytes)).with_context(|| format!("parsing {}", path.display()))?;
    Ok(m)
}

fn unfold_file(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let path = input_path(config)?;
    let m = read_mesh(path)?;
    let (kind, u) = match config.mode {
        Mode::Path => (RunKind::Path, unfold_path(&m)?),
        _ => (RunKind::Cycle, unfold_cycle(&m)?),
    };
    writeln!(
        out,
        "{:?}: {} facets, {} strips, {} quads, {}",
        kind,
        m.triangle_count(),
        u.layout.strips.len(),
        u.quad_count,
        verdict(&u.report)
    )?;
    print_violations(&u.report, out)?;
    if let Some(p) = &config.out_svg {
        write_file(p, &emit_svg(&u.layout, config.style))?;
    }
    if let Some(p) = &config.out_order {
        write_file(p, &facet_order(&u))?;
    }
    let pass = u.report.pass;
    if let Some(p) = &config.out_json {
        let doc = RunDocument::new(kind, &m, u.nodes, Some(u.layout), u.report);
        write_file(p, &emit_json(&doc))?;
    }
    Ok(pass)
}

/// Facet ids in the order the unfolding visits them; both triangles of a
/// quad strip in layout order.
pub fn facet_order(u: &Unfolding<f64>) -> String {
    let mut s = String::new();
    for pt in &u.layout.triangles {
        let _ = writeln!(s, "{}", pt.triangle);
    }
    s
}

fn verify_file(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let path = input_path(config)?;
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: RunDocument<f64> = parse_json(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    let m = doc.mesh().context("rebuilding the stored mesh")?;
    let report = recheck(&doc, &m);
    writeln!(
        out,
        "verify {:?} run: {} facets, {} nodes, {}{}",
        doc.kind,
        m.triangle_count(),
        doc.nodes.len(),
        verdict(&report),
        if report.pass == doc.report.pass { "" } else { " (stored report disagrees)" }
    )?;
    print_violations(&report, out)?;
    let pass = report.pass;
    if let Some(p) = &config.out_json {
        let verified = RunDocument::new(RunKind::Verify, &m, doc.nodes, None, report);
        write_file(p, &emit_json(&verified))?;
    }
    Ok(pass)
}

/// Checks a stored run from scratch: the node sequence against the mesh,
/// and the layout when there is one.
pub fn recheck(doc: &RunDocument<f64>, m: &Mesh64) -> Report {
    let cyclic = doc.kind == RunKind::Cycle;
    let report = check_path(&lattice_graph(m), &doc.nodes, cyclic);
    match &doc.layout {
        Some(l) => report.merge(check_layout(l, m)),
        None => report,
    }
}

/// One row of the experiment table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub instance: usize,
    pub points: usize,
    pub triangles: usize,
    pub quads: usize,
    pub path_ms: f64,
    pub path_ok: bool,
    pub cycle_ms: f64,
    pub cycle_ok: bool,
}

/// Point counts and hull seeds for `n` instances, drawn from `seed`.
pub fn experiment_instances(n: usize, seed: u64) -> Vec<(usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.random_range(10..=500), rng.random())).collect()
}

pub fn experiment_row(instance: usize, points: usize, hull_seed: u64) -> Result<ExperimentRow> {
    let m = random_hull::<f64>(points, hull_seed)?;
    let start = Instant::now();
    let p = unfold_path(&m);
    let path_ms = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let c = unfold_cycle(&m);
    let cycle_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(ExperimentRow {
        instance,
        points,
        triangles: m.triangle_count(),
        quads: p.as_ref().map_or(0, |u| u.quad_count),
        path_ms,
        path_ok: p.is_ok_and(|u| u.report.pass),
        cycle_ms,
        cycle_ok: c.is_ok_and(|u| u.report.pass && u.quad_count == 0),
    })
}

fn experiment(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    if config.n == 0 {
        return Err(usage("--n must be positive"));
    }
    writeln!(out, "{:>8} {:>6} {:>9} {:>5} {:>9} {:>7} {:>9} {:>8}", "instance", "points", "triangles", "quads", "path_ms", "path_ok", "cycle_ms", "cycle_ok")?;
    let mut all = true;
    let mut with_quads = 0;
    for (i, (points, hull_seed)) in experiment_instances(config.n, config.seed).into_iter().enumerate() {
        let r = experiment_row(i, points, hull_seed)?;
        writeln!(
            out,
            "{:>8} {:>6} {:>9} {:>5} {:>9.3} {:>7} {:>9.3} {:>8}",
            r.instance, r.points, r.triangles, r.quads, r.path_ms, r.path_ok, r.cycle_ms, r.cycle_ok
        )?;
        all &= r.path_ok && r.cycle_ok;
        with_quads += usize::from(r.quads > 0);
    }
    writeln!(
        out,
        "path runs with a quad strip: {with_quads}/{} ({:.1}%); {}",
        config.n,
        100.0 * with_quads as f64 / config.n as f64,
        if all { "all verified" } else { "VERIFICATION FAILED" }
    )?;
    Ok(all)
}

fn verdict(r: &Report) -> &'static str {
    if r.pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn print_violations(r: &Report, out: &mut dyn Write) -> Result<()> {
    for v in &r.violations {
        writeln!(out, "  {} {:?}: {}", v.rule, v.elements, v.detail)?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

