//! Command-line front end.
//!
//! Three subcommands: `mesh` exports triangle meshes, `report` runs the
//! numeric analyses (curvature, transitions, multipole, areas, axes, level
//! sets, graph deviation), `stability` decides motif stability with a
//! scripting-friendly exit code. JSON goes to standard output, diagnostics
//! to standard error, file artifacts into `--out`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{Complex, HelicalMotif, MotifField};
use crate::region::Region;
use crate::{area, graph, immersion, levelset, mesh, multipole, stability};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_UNSTABLE: u8 = 4;
pub const EXIT_INDETERMINATE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "enneper",
    about = "Minimal surfaces from helical motifs: meshes, reports, stability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export a triangle mesh (OBJ + PLY + attribute CSV)
    Mesh(MeshCmd),
    /// Numeric analyses with JSON/CSV output
    #[command(subcommand)]
    Report(Analysis),
    /// Decide stability of a finite motif arrangement
    Stability(StabilityCmd),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Motif field: inline JSON or a path to a JSON file
    #[arg(long)]
    field: String,
    /// Planar region: inline JSON or a path; defaults to a family-sized box
    #[arg(long)]
    region: Option<String>,
    /// Target tolerance for quadrature-based quantities
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Worker cap for parallel sections
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for randomized sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for file artifacts
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct MeshCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Nodes per side of the sampling lattice
    #[arg(long, default_value_t = 128)]
    grid: usize,
    /// Stacked copies at the common vertical period
    #[arg(long, default_value_t = 1)]
    layers: usize,
    /// Keep only triangles with north-hemisphere normals
    #[arg(long)]
    clip: bool,
    /// Basename for the exported files
    #[arg(long, default_value = "surface")]
    name: String,
}

#[derive(Subcommand)]
enum Analysis {
    /// Max discrete mean curvature of a sampled mesh, optionally swept in pitch
    Curvature {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Pitch sweep `p=start:end:step`; emits CSV instead of JSON
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Critical pitch where the south sublevel-set components fuse
    Transition {
        /// One of: same-handed, dipole, tgb, utgb
        #[arg(long)]
        family: String,
        /// Center separation for the pair families
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Chain spacing for tgb / utgb
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 28)]
        iterations: usize,
        /// Override the lower bracket pitch
        #[arg(long)]
        pitch_lo: Option<f64>,
        /// Override the upper bracket pitch
        #[arg(long)]
        pitch_hi: Option<f64>,
    },
    /// Multipole coefficients of the far height field
    Multipole {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Surface area over a region
    Area {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Integrated Gauss curvature over a region
    TotalCurvature {
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict to the north-hemisphere subset of the region
        #[arg(long)]
        north: bool,
    },
    /// Compare truncated multipole heights against the exact field far out
    FarField {
        #[command(flatten)]
        common: CommonArgs,
        /// Test circle radius; defaults to 10x the field scale
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Extract screw-axis curves and their metrics
    Axes {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Trace level curves of |g| and write them as CSV
    Levelset {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Level of |g| to trace
        #[arg(long, default_value_t = 1.0)]
        level: f64,
    },
    /// Verify the immersion conditions at random sample points
    Enneper {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Height-graph mean curvature deviation scan
    Deviation {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
}

#[derive(Args)]
struct StabilityCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Decide in exact rational arithmetic (floats read as dyadics)
    #[arg(long)]
    exact: bool,
    /// Also estimate the spherical image area at this resolution
    #[arg(long)]
    sphere_resolution: Option<usize>,
}

/// Parses `std::env::args` and runs one command; returns the process exit
/// code.
pub fn run_from_env() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::Io { .. }
        | Error::WrongFamily(_)
        | Error::DegenerateGeometry(_) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Mesh(cmd) => cmd_mesh(cmd),
        Command::Report(analysis) => cmd_report(analysis),
        Command::Stability(cmd) => cmd_stability(cmd),
    }
}

fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

/// Inline JSON starts with `{`; anything else is a file path.
fn load_field(spec: &str) -> Result<MotifField> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') {
        MotifField::from_json(trimmed)
    } else {
        let text = fs::read_to_string(trimmed).map_err(|e| Error::Io {
            path: PathBuf::from(trimmed),
            source: e,
        })?;
        MotifField::from_json(&text)
    }
}

fn load_region(spec: Option<&str>, field: &MotifField) -> Result<Region> {
    let Some(spec) = spec else {
        return Ok(default_region(field));
    };
    let trimmed = spec.trim();
    let text = if trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        fs::read_to_string(trimmed).map_err(|e| Error::Io {
            path: PathBuf::from(trimmed),
            source: e,
        })?
    };
    let region: Region = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("bad region JSON: {}", e)))?;
    region.validate()?;
    Ok(region)
}

/// Family-sized default domain: motif bounding box padded by 1.5 scale
/// units, or one period cell of a chain.
fn default_region(field: &MotifField) -> Region {
    match field {
        MotifField::Finite { motifs } => {
            let pad = 1.5 * field.scale();
            let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
            for m in motifs {
                x0 = x0.min(m.x);
                x1 = x1.max(m.x);
                y0 = y0.min(m.y);
                y1 = y1.max(m.y);
            }
            Region::rect(x0 - pad, x1 + pad, y0 - pad, y1 + pad).unwrap()
        }
        MotifField::Tgb { spacing, .. } | MotifField::Utgb { spacing, .. } => {
            Region::rect(0.0, 2.0 * spacing, -3.0 * spacing, 3.0 * spacing).unwrap()
        }
    }
}

fn ensure_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })
}

fn cmd_mesh(cmd: MeshCmd) -> Result<u8> {
    init_threads(cmd.common.threads);
    let field = load_field(&cmd.common.field)?;
    let region = load_region(cmd.common.region.as_deref(), &field)?;
    let m = mesh::build_mesh(&field, &region, cmd.grid, cmd.layers, cmd.clip)?;
    ensure_out(&cmd.common.out)?;
    let obj = cmd.common.out.join(format!("{}.obj", cmd.name));
    let ply = cmd.common.out.join(format!("{}.ply", cmd.name));
    mesh::write_obj(&m, &obj)?;
    mesh::write_ply(&m, &ply)?;
    println!(
        "{}",
        json!({
            "obj": obj.display().to_string(),
            "ply": ply.display().to_string(),
            "csv": obj.with_extension("csv").display().to_string(),
            "vertices": m.vertices.len(),
            "triangles": m.triangles.len(),
        })
    );
    Ok(EXIT_OK)
}

/// `p=start:end:step`
fn parse_sweep(spec: &str) -> Result<(f64, f64, f64)> {
    let bad = || Error::Config(format!("bad sweep `{}`; expected p=start:end:step", spec));
    let rest = spec.strip_prefix("p=").ok_or_else(bad)?;
    let parts: Vec<&str> = rest.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if nums[2] <= 0.0 || nums[1] < nums[0] {
        return Err(bad());
    }
    Ok((nums[0], nums[1], nums[2]))
}

/// Same arrangement with the common pitch magnitude set to `p`, handedness
/// pattern preserved.
fn with_pitch(field: &MotifField, p: f64) -> Result<MotifField> {
    match field {
        MotifField::Finite { motifs } => MotifField::finite(
            motifs
                .iter()
                .map(|m| HelicalMotif::new(m.center(), p.abs() * m.pitch.signum()))
                .collect(),
        ),
        MotifField::Tgb { spacing, .. } => MotifField::tgb(p, *spacing),
        MotifField::Utgb { spacing, .. } => MotifField::utgb(p, *spacing),
    }
}

fn max_discrete_h(field: &MotifField, region: &Region, grid: usize) -> Result<f64> {
    let m = mesh::build_mesh(field, region, grid, 1, false)?;
    Ok(mesh::discrete_mean_curvature(&m)
        .into_iter()
        .filter(|h| h.is_finite())
        .fold(0.0, f64::max))
}

fn cmd_report(analysis: Analysis) -> Result<u8> {
    match analysis {
        Analysis::Curvature { common, grid, sweep } => {
            init_threads(common.threads);
            let field = load_field(&common.field)?;
            let region = load_region(common.region.as_deref(), &field)?;
            match sweep {
                None => {
                    let h = max_discrete_h(&field, &region, grid)?;
                    println!(
                        "{}",
                        json!({
                            "grid": grid,
                            "max_discrete_h": h,
                            "scale": field.scale(),
                            "dimensionless": h * field.scale(),
                        })
                    );
                }
                Some(spec) => {
                    let (start, end, step) = parse_sweep(&spec)?;
                    let mut out = String::from("p,max_discrete_h\n");
                    let mut p = start;
                    while p <= end + 0.5 * step {
                        let swept = with_pitch(&field, p)?;
                        let h = max_discrete_h(&swept, &region, grid)?;
                        out.push_str(&format!("{},{}\n", p, h));
                        p += step;
                    }
                    print!("{}", out);
                }
            }
            Ok(EXIT_OK)
        }
        Analysis::Transition {
            family,
            r,
            spacing,
            grid,
            iterations,
            pitch_lo,
            pitch_hi,
        } => {
            let (make, lo, hi): (Box<dyn Fn(f64) -> Result<MotifField>>, f64, f64) =
                match family.as_str() {
                    "same-handed" => (
                        Box::new(move |p| MotifField::same_handed_pair(r, p)),
                        0.55 * r,
                        1.45 * r,
                    ),
                    "dipole" => (
                        Box::new(move |p| MotifField::dipole(r, p)),
                        0.28 * r,
                        0.72 * r,
                    ),
                    "tgb" => (
                        Box::new(move |p| MotifField::tgb(p, spacing)),
                        0.45 * spacing,
                        0.9 * spacing,
                    ),
                    "utgb" => (
                        Box::new(move |p| MotifField::utgb(p, spacing)),
                        0.45 * spacing,
                        0.9 * spacing,
                    ),
                    other => {
                        return Err(Error::Config(format!(
                            "unknown family `{}`; expected same-handed, dipole, tgb or utgb",
                            other
                        )))
                    }
                };
            let lo = pitch_lo.unwrap_or(lo);
            let hi = pitch_hi.unwrap_or(hi);
            let sample = make(0.5 * (lo + hi))?;
            let bbox = default_region(&sample).bounding_box();
            let report = levelset::detect_transition(&*make, lo, hi, bbox, grid, iterations)?;
            println!(
                "{}",
                serde_json::to_string(&report)
                    .map_err(|e| Error::Numeric(format!("report serialization: {}", e)))?
            );
            Ok(EXIT_OK)
        }
        Analysis::Multipole { common, kmax } => {
            let field = load_field(&common.field)?;
            let exp = multipole::MultipoleExpansion::of(&field, kmax)?;
            let b = stability::coefficients_b(&field, kmax + 1)?;
            let mut value = serde_json::to_value(&exp)
                .map_err(|e| Error::Numeric(format!("report serialization: {}", e)))?;
            value["b"] = serde_json::to_value(&b)
                .map_err(|e| Error::Numeric(format!("report serialization: {}", e)))?;
            println!("{}", value);
            Ok(EXIT_OK)
        }
        Analysis::Area { common } => {
            init_threads(common.threads);
            let field = load_field(&common.field)?;
            let region = load_region(common.region.as_deref(), &field)?;
            let surface = area::integrate_area(&field, &region, common.tol)?;
            println!(
                "{}",
                json!({
                    "planar_area": region.planar_area(),
                    "surface_area": surface,
                    "tol": common.tol,
                })
            );
            Ok(EXIT_OK)
        }
        Analysis::TotalCurvature { common, north } => {
            init_threads(common.threads);
            let field = load_field(&common.field)?;
            let region = load_region(common.region.as_deref(), &field)?;
            let total = if north {
                area::total_curvature_north(&field, &region, common.tol)?
            } else {
                area::total_curvature(&field, &region, common.tol)?
            };
            println!(
                "{}",
                json!({
                    "total_curvature": total,
                    "north_only": north,
                    "in_units_of_minus_4pi": total / (-4.0 * std::f64::consts::PI),
                })
            );
            Ok(EXIT_OK)
        }
        Analysis::FarField { common, radius, kmax, samples } => {
            let field = load_field(&common.field)?;
            let r = radius.unwrap_or(10.0 * field.scale());
            let report = multipole::far_field_check(&field, r, kmax, samples)?;
            println!(
                "{}",
                serde_json::to_string(&report)
                    .map_err(|e| Error::Numeric(format!("report serialization: {}", e)))?
            );
            Ok(EXIT_OK)
        }
        Analysis::Axes { common, grid } => {
            let field = load_field(&common.field)?;
            let region = load_region(common.region.as_deref(), &field)?;
            let axes = levelset::extract_axes(&field, region.bounding_box(), grid, common.tol)?;
            let metrics = levelset::axis_metrics(&axes);
            ensure_out(&common.out)?;
            let csv_path = common.out.join("axes.csv");
            mesh::write_atomic(&csv_path, levelset::axes_csv(&axes).as_bytes())?;
            let mut value = serde_json::to_value(&metrics)
                .map_err(|e| Error::Numeric(format!("report serialization: {}", e)))?;
            value["csv"] = json!(csv_path.display().to_string());
            println!("{}", value);
            Ok(EXIT_OK)
        }
        Analysis::Levelset { common, grid, level } => {
            let field = load_field(&common.field)?;
            let region = load_region(common.region.as_deref(), &field)?;
            let s = move |x: f64, y: f64| match field.hz_hzz(Complex::new(x, y)) {
                Ok((hz, _)) => {
                    let n = hz.norm();
                    if n == 0.0 { 1e9 } else { 1.0 / n - level }
                }
                Err(_) => -level,
            };
            let contours =
                levelset::trace_level_set(&s, region.bounding_box(), grid, grid, true);
            ensure_out(&common.out)?;
            let csv_path = common.out.join("levelset.csv");
            mesh::write_atomic(&csv_path, levelset::level_set_csv(&contours).as_bytes())?;
            println!(
                "{}",
                json!({
                    "level": level,
                    "contours": contours.len(),
                    "points": contours.iter().map(|c| c.points.len()).sum::<usize>(),
                    "csv": csv_path.display().to_string(),
                })
            );
            Ok(EXIT_OK)
        }
        Analysis::Enneper { common, samples } => {
            let field = load_field(&common.field)?;
            let region = load_region(common.region.as_deref(), &field)?;
            let (x0, x1, y0, y1) = region.bounding_box();
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            let guard = 10.0 * field.guard_radius();
            let mut points = Vec::with_capacity(samples);
            let mut attempts = 0usize;
            while points.len() < samples && attempts < 1000 * samples.max(1) {
                attempts += 1;
                let z = Complex::new(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
                if !region.contains(z) || field.nearest_singularity(z).1 < guard {
                    continue;
                }
                points.push(z);
            }
            if points.len() < samples {
                return Err(Error::Config(
                    "region leaves no room for sample points outside the singular guards".into(),
                ));
            }
            let check = immersion::check_enneper_conditions(&field, &points)?;
            println!(
                "{}",
                json!({
                    "samples": check.samples,
                    "max_residual": check.max_residual,
                    "min_regularity": check.min_regularity,
                    "seed": common.seed,
                })
            );
            Ok(EXIT_OK)
        }
        Analysis::Deviation { common, grid } => {
            let field = load_field(&common.field)?;
            let region = load_region(common.region.as_deref(), &field)?;
            let (x0, x1, y0, y1) = region.bounding_box();
            let guard = 10.0 * field.guard_radius();
            let mut points = Vec::new();
            for j in 0..grid {
                for i in 0..grid {
                    let z = Complex::new(
                        x0 + (x1 - x0) * (i as f64 + 0.5) / grid as f64,
                        y0 + (y1 - y0) * (j as f64 + 0.5) / grid as f64,
                    );
                    if region.contains(z) && field.nearest_singularity(z).1 > guard {
                        points.push(z);
                    }
                }
            }
            let scan = graph::deviation_scan(&field, &points)?;
            ensure_out(&common.out)?;
            let mut csv = String::from("x,y,mean,gauss,deviation\n");
            let mut max_dev = 0.0f64;
            for s in &scan {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    s.x, s.y, s.mean, s.gauss, s.deviation
                ));
                if s.deviation.is_finite() {
                    max_dev = max_dev.max(s.deviation);
                }
            }
            let csv_path = common.out.join("deviation.csv");
            mesh::write_atomic(&csv_path, csv.as_bytes())?;
            println!(
                "{}",
                json!({
                    "samples": scan.len(),
                    "max_finite_deviation": max_dev,
                    "csv": csv_path.display().to_string(),
                })
            );
            Ok(EXIT_OK)
        }
    }
}

fn cmd_stability(cmd: StabilityCmd) -> Result<u8> {
    init_threads(cmd.common.threads);
    let field = load_field(&cmd.common.field)?;
    let mut report = stability::decide_stability(&field)?;
    let mut exact_used = false;
    if cmd.exact {
        let motifs = match &field {
            MotifField::Finite { motifs } => motifs,
            _ => unreachable!("decide_stability already rejected non-finite fields"),
        };
        let exact: Option<Vec<stability::ExactMotif>> = motifs
            .iter()
            .map(|m| stability::ExactMotif::from_f64(m.x, m.y, m.pitch))
            .collect();
        let exact =
            exact.ok_or_else(|| Error::Config("non-finite motif coordinates".into()))?;
        report.verdict = stability::decide_stability_exact(&exact)?;
        exact_used = true;
    }
    if let Some(resolution) = cmd.sphere_resolution {
        let region = load_region(cmd.common.region.as_deref(), &field)?;
        report.spherical_area =
            Some(stability::spherical_image_area(&field, &region, resolution, true)?);
    }
    let mut value = serde_json::to_value(&report)
        .map_err(|e| Error::Numeric(format!("report serialization: {}", e)))?;
    value["exact"] = json!(exact_used);
    println!("{}", value);
    Ok(match report.verdict {
        stability::Verdict::Stable => EXIT_OK,
        stability::Verdict::Unstable => EXIT_UNSTABLE,
        stability::Verdict::Indeterminate => EXIT_INDETERMINATE,
    })
}
