//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.
//! Diagnostics go to standard error; artifacts are written atomically.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::caps::{find_isosceles_cap, find_non_isosceles_cap, Cap, ConvexDisc};
use crate::geom::Vec3;
use crate::io::{
    emit_packing, emit_tiling, gen_random_packing, parse_packing, parse_polygon, parse_tiling, render_polygon_packing,
    render_svg, GenParams, Geometry, Meta, PackingDocument, SvgOptions, TilingDocument,
};
use crate::nonsep::{counterexample, NonsepError, CIRCULAR_MARGIN};
use crate::tiling::{BBox, TilingError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "polysep", version, about = "Separating polygonal tilings for disc packings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the separating tiling of a packing, verify it and write it out.
    Tile(TileArgs),
    /// Check a tiling against a packing.
    Verify(VerifyArgs),
    /// Isosceles and non-isosceles caps of a convex polygon.
    Caps(CapsArgs),
    /// Build and certify a non-separable packing of copies of a polygon.
    Counterexample(CounterexampleArgs),
    /// Random packing by rejection sampling.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
struct Render {
    /// SVG figure to write.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Viewing direction for sphere figures, as `x,y,z`.
    #[arg(long = "view-dir", value_parser = parse_vec3, default_value = "0,0,1")]
    view_dir: Vec3,
}

impl Render {
    fn options(&self) -> SvgOptions {
        SvgOptions {
            view_dir: self.view_dir,
            ..SvgOptions::default()
        }
    }
}

#[derive(Debug, Args)]
struct TileArgs {
    #[arg(long)]
    geometry: Option<Geometry>,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_parser = parse_tol, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Radius of the hyperbolic disc the cell areas are measured in.
    #[arg(long = "clip-radius")]
    clip_radius: Option<f64>,
    #[command(flatten)]
    render: Render,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    packing: PathBuf,
    #[arg(long)]
    tiling: PathBuf,
    #[arg(long, value_parser = parse_tol, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Debug, Args)]
struct CapsArgs {
    /// Polygon file `{"vertices": [[x, y], ...]}`.
    #[arg(long)]
    disc: PathBuf,
    /// Apex angle of the isosceles cap to find.
    #[arg(long)]
    alpha: Option<f64>,
    /// Minimal relative side difference of the non-isosceles cap.
    #[arg(long, default_value_t = CIRCULAR_MARGIN)]
    margin: f64,
    #[arg(long, value_parser = parse_tol, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CounterexampleArgs {
    #[arg(long)]
    disc: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    render: Render,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    geometry: Geometry,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.01)]
    rmin: f64,
    #[arg(long, default_value_t = 0.05)]
    rmax: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    render: Render,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (1e-15..=1e-3).contains(&t) {
        Ok(t)
    } else {
        Err(format!("tolerance {t} outside [1e-15, 1e-3]"))
    }
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [x, y, z] = parts[..] else {
        return Err(format!("expected x,y,z, got {s:?}"));
    };
    let v = Vec3::new(x, y, z);
    if !(v.norm() > 0.0 && v.is_finite()) {
        return Err("view direction must be a nonzero finite vector".into());
    }
    Ok(v)
}

/// What went wrong, and which exit code it maps to.
enum Failure {
    Input(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Failed(_) => EXIT_FAILED,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Failed(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(what: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", what.display()))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(input(path))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, data: &[u8]) -> Outcome {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(data).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn tiling_failure(e: TilingError) -> Failure {
    match e {
        TilingError::BadOwner(_) | TilingError::CardinalityMismatch { .. } | TilingError::EmptyCell(_) => {
            Failure::Failed(e.to_string())
        }
        _ => Failure::Input(e.to_string()),
    }
}

fn tile(a: &TileArgs) -> Outcome {
    let doc = parse_packing(&read(&a.input)?).map_err(input(&a.input))?;
    if let Some(g) = a.geometry.filter(|g| *g != doc.geometry) {
        return Err(Failure::Input(format!("--geometry {g} but {} holds a {} packing", a.input.display(), doc.geometry)));
    }
    if a.clip_radius.is_some_and(|r| !(r > 0.0 && r.is_finite())) {
        return Err(Failure::Input("--clip-radius must be positive".into()));
    }
    let packing = doc.packing().map_err(input(&a.input))?;
    let tiling = packing.tile(a.clip_radius).map_err(tiling_failure)?;
    let report = packing.verify(&tiling, a.tol).map_err(tiling_failure)?;
    if let Some(msg) = &report.failure {
        return Err(Failure::Failed(format!("verification failed: {msg}")));
    }
    let svg = a.render.svg.as_ref().map(|p| (p, render_svg(&packing, Some(&tiling), &a.render.options())));
    write_atomic(&a.out, emit_tiling(&TilingDocument::from_tiling(&tiling)).as_bytes())?;
    if let Some((path, svg)) = svg {
        write_atomic(path, svg.as_bytes())?;
    }
    eprintln!(
        "{} cells, area {} of {} (relative error {:.3e})",
        report.cells,
        report.area_sum,
        report.domain_area,
        report.coverage_error()
    );
    Ok(())
}

fn verify(a: &VerifyArgs) -> Outcome {
    let pdoc = parse_packing(&read(&a.packing)?).map_err(input(&a.packing))?;
    let tdoc = parse_tiling(&read(&a.tiling)?).map_err(input(&a.tiling))?;
    if pdoc.geometry != tdoc.geometry {
        return Err(Failure::Input(format!(
            "packing is {} but tiling is {}",
            pdoc.geometry, tdoc.geometry
        )));
    }
    let packing = pdoc.packing().map_err(input(&a.packing))?;
    let tiling = tdoc.tiling().map_err(input(&a.tiling))?;
    let report = packing.verify(&tiling, a.tol).map_err(|e| match e {
        TilingError::InvalidDomain(m) => Failure::Input(m),
        e => Failure::Failed(format!("verification failed: {e}")),
    })?;
    match report.failure {
        Some(msg) => Err(Failure::Failed(format!("verification failed: {msg}"))),
        None => {
            eprintln!("ok: {} cells separate the packing", report.cells);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CapsReport {
    vertices: usize,
    diameter: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    isosceles: Option<Cap>,
    non_isosceles: Option<Cap>,
}

fn caps(a: &CapsArgs) -> Outcome {
    let disc = parse_polygon(&read(&a.disc)?).map_err(input(&a.disc))?;
    let isosceles = match a.alpha {
        Some(alpha) => Some(find_isosceles_cap(&disc, alpha, a.tol).map_err(|e| Failure::Input(e.to_string()))?),
        None => None,
    };
    let non_isosceles = find_non_isosceles_cap(&disc, a.margin);
    match &non_isosceles {
        Some(c) => eprintln!("non-isosceles cap: angle {}, relative side difference {:.3e}", c.angle, c.relative_difference()),
        None => eprintln!("no cap with relative side difference above {}", a.margin),
    }
    let report = CapsReport {
        vertices: disc.len(),
        diameter: disc.diameter(),
        isosceles,
        non_isosceles,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("finite caps");
    text.push('\n');
    match &a.out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn counterexample_cmd(a: &CounterexampleArgs) -> Outcome {
    let disc: ConvexDisc = parse_polygon(&read(&a.disc)?).map_err(input(&a.disc))?;
    let (c, cert) = counterexample(&disc).map_err(|e| match e {
        NonsepError::TooCircular | NonsepError::Cap(_) => Failure::Input(format!("{}: {e}", a.disc.display())),
        e => Failure::Failed(e.to_string()),
    })?;
    let pass = cert.pass;
    let infeasible = cert.pairs.iter().filter(|p| !p.feasible).count();
    let pairs = cert.pairs.len();
    let doc = PackingDocument::from_construction(&c, Some(cert), Meta::tool());
    write_atomic(&a.out, emit_packing(&doc).as_bytes())?;
    if let (Some(path), Some(pd), Some([x0, y0, x1, y1])) = (&a.render.svg, &doc.polygon_disc, doc.bbox) {
        let window = BBox { xmin: x0, ymin: y0, xmax: x1, ymax: y1 };
        write_atomic(path, render_polygon_packing(pd, window, &a.render.options()).as_bytes())?;
    }
    eprintln!(
        "n = {}, alpha = {}, beta = {}, {infeasible} of {pairs} consecutive pairs admit no admissible separating line",
        c.params.n, c.params.alpha, c.params.beta
    );
    if pass {
        Ok(())
    } else {
        Err(Failure::Failed("certificate failed".into()))
    }
}

fn gen(a: &GenArgs) -> Outcome {
    let doc = gen_random_packing(&GenParams::new(a.geometry, a.n, a.rmin, a.rmax, a.seed))
        .map_err(|e| Failure::Input(e.to_string()))?;
    let svg = match &a.render.svg {
        Some(p) => {
            let packing = doc.packing().map_err(|e| Failure::Failed(e.to_string()))?;
            Some((p, render_svg(&packing, None, &a.render.options())))
        }
        None => None,
    };
    write_atomic(&a.out, emit_packing(&doc).as_bytes())?;
    if let Some((p, svg)) = svg {
        write_atomic(p, svg.as_bytes())?;
    }
    eprintln!("{} {} discs, seed {}", doc.discs.len(), doc.geometry, a.seed);
    Ok(())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Tile(a) => tile(a),
        Command::Verify(a) => verify(a),
        Command::Caps(a) => caps(a),
        Command::Counterexample(a) => counterexample_cmd(a),
        Command::Gen(a) => gen(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_bounds() {
        assert!(parse_tol("1e-9").is_ok());
        assert!(parse_tol("1e-15").is_ok());
        assert!(parse_tol("1e-2").is_err());
        assert!(parse_tol("1e-16").is_err());
        assert!(parse_tol("abc").is_err());
    }

    #[test]
    fn view_direction() {
        assert_eq!(parse_vec3("0, 1,2").unwrap(), Vec3::new(0.0, 1.0, 2.0));
        assert!(parse_vec3("0,0,0").is_err());
        assert!(parse_vec3("1,2").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["polysep", "tile", "--bogus"]), EXIT_INPUT);
        assert_eq!(run(["polysep"]), EXIT_INPUT);
        assert_eq!(run(["polysep", "--help"]), EXIT_OK);
        assert_eq!(run(["polysep", "verify", "--packing", "a", "--tiling", "b", "--tol", "1"]), EXIT_INPUT);
    }
}
