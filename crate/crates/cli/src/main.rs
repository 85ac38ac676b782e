//! Command-line interface: polygon validation, unfolding summaries,
//! trajectory tracing, illumination search, blocking verification,
//! non-illumination certificates, no-return checks, room search, and SVG
//! figures.
//!
//! Exit codes: 0 success/consistent, 1 counterexample or invalid
//! certificate, 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use billiards_core::flow::{shoot, straighten, PhaseState, VertexPolicy};
use billiards_core::geom::Point2;
use billiards_core::illumination::{
    blocking_eps, illuminate_search, invariance_check, lift_blocking_set, verify_blocking,
    BlockingSet, IlluminationOutcome, SearchBudget,
};
use billiards_core::io;
use billiards_core::polygon::{Polygon, DEFAULT_MAX_DEN};
use billiards_core::render::{self, Style};
use billiards_core::tokarsky::{
    certify, compose_polygon, lemma_hypotheses, no_return_sampling, recognize_cells,
    search_min_edges, snap_chart_point, verify_no_return_exact, CoxeterTriangle,
    TriangleFamily,
};
use billiards_core::unfolding::{unfold, UnfoldedSurface, DEFAULT_CLOSURE_BOUND};
use billiards_core::Vec2;

#[derive(Parser)]
#[command(name = "billiards", version, about = "rational polygonal billiards toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Trace length bound (defaults scale with the polygon diameter).
    #[arg(long)]
    length: Option<f64>,
    /// Number of sampled directions.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// RNG seed; fixed seeds give reproducible reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a polygon file and report rationality.
    Validate {
        file: PathBuf,
        /// Largest angle denominator to detect.
        #[arg(long, default_value_t = DEFAULT_MAX_DEN)]
        max_den: i64,
    },
    /// Unfold a rational polygon and summarize the translation surface.
    Unfold { file: PathBuf },
    /// Trace a billiard trajectory.
    Shoot {
        file: PathBuf,
        /// Start point `x:y`.
        #[arg(long)]
        from: String,
        /// Direction `dx:dy`.
        #[arg(long)]
        dir: String,
        #[arg(long, default_value_t = 10.0)]
        length: f64,
        /// Vertex policy: stop | continue.
        #[arg(long, default_value = "stop")]
        policy: String,
        /// Write an SVG of the trace.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search for a trajectory connecting two marked points.
    Illuminate {
        file: PathBuf,
        /// Pair: marked-point names or `x:y` literals, comma separated.
        #[arg(long)]
        pair: String,
        /// Vertex policy for the search rays: stop | continue (geodesics
        /// through removable singularities; off by default).
        #[arg(long, default_value = "stop")]
        policy: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Verify a blocking set: every found connection must meet it.
    VerifyBlocking {
        file: PathBuf,
        #[arg(long)]
        pair: String,
        /// Blocking points `x:y`, semicolon separated; may be empty.
        #[arg(long, default_value = "")]
        block: String,
        /// Incidence tolerance (default 1e-6 * diameter).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Also verify all group-squared transported pairs.
        #[arg(long)]
        invariance: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check a non-illumination certificate for a tiled room.
    Certify {
        /// A `.cells` file or a `.poly` file with chart-integer vertices.
        file: PathBuf,
        #[arg(long)]
        pair: String,
    },
    /// No-return checks for the lemma triangle family.
    NoReturn {
        /// Exact verification for a tiling triangle: 244 or 236.
        #[arg(long)]
        triangle: Option<String>,
        /// Sampling check for the general (pi/n, m pi/n) triangle.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Bounded search for minimal-edge rooms with a certified dark pair.
    Search {
        #[arg(long, default_value = "244")]
        family: String,
        #[arg(long, default_value_t = 6)]
        grid: i64,
        #[arg(long, default_value_t = 16)]
        max_cells: usize,
        #[arg(long, default_value_t = 200_000)]
        states: usize,
    },
    /// Emit an SVG figure.
    Render {
        /// Figure kind: polygon | trajectory | star | tiling.
        what: String,
        /// Input file (.poly for polygon/trajectory, .cells for tiling).
        file: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Star parameters.
        #[arg(long, default_value_t = 8)]
        n: i64,
        #[arg(long, default_value_t = 5)]
        m: i64,
        /// Trajectory parameters (same as shoot).
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        dir: Option<String>,
        #[arg(long, default_value_t = 10.0)]
        length: f64,
    },
}

fn parse_xy(s: &str) -> Result<Point2<f64>> {
    let (x, y) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("expected `x:y`, got '{s}'"))?;
    Ok(Point2::new(x.trim().parse()?, y.trim().parse()?))
}

struct LoadedPolygon {
    polygon: Polygon<f64>,
    marked: Vec<(String, Point2<f64>)>,
    exact_literals: bool,
}

fn load_polygon(path: &PathBuf) -> Result<LoadedPolygon> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let parsed: io::PolygonFile<f64> =
        io::parse_polygon_file(&text).map_err(|e| anyhow!("{e}"))?;
    let polygon = parsed.build().map_err(|e| anyhow!("{e}"))?;
    Ok(LoadedPolygon {
        polygon,
        marked: parsed.marked,
        exact_literals: io::has_exact_literals(&text),
    })
}

fn resolve_pair(loaded: &LoadedPolygon, pair: &str) -> Result<(Point2<f64>, Point2<f64>)> {
    let mut parts = pair.split(',');
    let mut take = || -> Result<Point2<f64>> {
        let tok =
            parts.next().ok_or_else(|| anyhow!("--pair needs two points"))?.trim();
        if let Some((_, p)) = loaded.marked.iter().find(|(n, _)| n == tok) {
            Ok(p.clone())
        } else {
            parse_xy(tok)
        }
    };
    let a = take()?;
    let b = take()?;
    Ok((a, b))
}

fn surface_of(loaded: &LoadedPolygon) -> Result<UnfoldedSurface<f64>> {
    let witness = loaded
        .polygon
        .rationality(DEFAULT_MAX_DEN)
        .ok_or_else(|| anyhow!("polygon is not (detectably) rational"))?;
    unfold(loaded.polygon.clone(), witness, DEFAULT_CLOSURE_BOUND).map_err(|e| anyhow!("{e}"))
}

fn budget_for(polygon: &Polygon<f64>, args: &BudgetArgs, default_mult: f64) -> SearchBudget {
    let length = args.length.unwrap_or(default_mult * polygon.diameter_f64());
    SearchBudget::new(length, args.samples, args.seed)
}

fn cone_angle_list(surface: &UnfoldedSurface<f64>) -> String {
    surface
        .singularities
        .iter()
        .map(|s| {
            if s.cone_multiple == 1 {
                "2pi".to_string()
            } else {
                format!("{}pi", 2 * s.cone_multiple)
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file, max_den } => {
            let loaded = load_polygon(&file)?;
            let q = &loaded.polygon;
            println!("edges: {}", q.len());
            println!("area: {:.12}", q.area());
            println!("diameter: {:.12}", q.diameter_f64());
            match q.rationality(max_den) {
                Some(w) => {
                    println!("rational: yes");
                    println!("lcm-denominator: {}", w.lcm_den);
                    let angles = w
                        .angles
                        .iter()
                        .map(|a| format!("{}", a))
                        .collect::<Vec<_>>()
                        .join(", ");
                    println!("angles: {angles}");
                }
                None => println!("rational: no (within denominator {max_den})"),
            }
            println!(
                "backend: {}",
                if loaded.exact_literals { "exact available" } else { "float" }
            );
            for (name, p) in &loaded.marked {
                println!("marked {}: ({:.12}, {:.12})", name, p.x, p.y);
            }
            Ok(0)
        }
        Command::Unfold { file } => {
            let loaded = load_polygon(&file)?;
            let m = surface_of(&loaded)?;
            println!("copies: {}", m.sheet_count());
            println!("cone-angles: {}", cone_angle_list(&m));
            println!("genus: {}", m.genus);
            println!("area: {:.12}", m.area());
            Ok(0)
        }
        Command::Shoot { file, from, dir, length, policy, svg } => {
            let loaded = load_polygon(&file)?;
            let m = surface_of(&loaded)?;
            let start = parse_xy(&from)?;
            let d = parse_xy(&dir)?;
            let policy = match policy.as_str() {
                "stop" => VertexPolicy::StopAtVertex,
                "continue" => VertexPolicy::ContinueRemovable,
                other => bail!("unknown policy '{other}'"),
            };
            let traj = shoot(
                &m.base,
                &m.witness,
                PhaseState { point: start, direction: Vec2::new(d.x, d.y) },
                length,
                policy,
            )
            .map_err(|e| anyhow!("{e}"))?;
            println!("bounces: {}", traj.bounces.len());
            println!("termination: {:?}", traj.termination);
            println!("length: {:.12}", traj.total_length);
            println!("end: ({:.12}, {:.12})", traj.end.x, traj.end.y);
            let lifted = straighten(&m, &traj);
            println!("endpoint-sheet: {}", lifted.endpoint_sheet);
            println!("direction-deviation: {:.3e}", lifted.direction_deviation());
            if let Some(out) = svg {
                let doc = render::render_trajectory(
                    &m.base,
                    &traj,
                    &loaded.marked,
                    &Style::default(),
                );
                std::fs::write(&out, doc)?;
                println!("svg: {}", out.display());
            }
            Ok(0)
        }
        Command::Illuminate { file, pair, policy, budget } => {
            let loaded = load_polygon(&file)?;
            let m = surface_of(&loaded)?;
            let (a, b) = resolve_pair(&loaded, &pair)?;
            let through = match policy.as_str() {
                "stop" => false,
                "continue" => true,
                other => bail!("unknown policy '{other}'"),
            };
            let budget = budget_for(&m.base, &budget, 50.0).with_through_removable(through);
            let report = illuminate_search(&m, &a, &b, &budget);
            println!("pair: ({:.9}, {:.9}) -> ({:.9}, {:.9})", a.x, a.y, b.x, b.y);
            println!(
                "budget: length={:.3} samples={} seed={}",
                budget.max_length, budget.directions, budget.seed
            );
            match &report.outcome {
                IlluminationOutcome::Connected(t) => {
                    println!("result: connected");
                    println!("bounces: {}", t.bounces.len());
                    println!("length: {:.12}", t.total_length);
                    println!("endpoint-error: {:.3e}", t.end.dist_f64(&b));
                }
                IlluminationOutcome::NoConnectionFound {
                    directions_tried,
                    vertex_discarded,
                    closest_approach,
                } => {
                    println!("result: no-connection-found (evidence, not proof)");
                    println!("directions-tried: {directions_tried}");
                    println!("vertex-discarded: {vertex_discarded}");
                    println!("closest-approach: {closest_approach:.3e}");
                }
            }
            Ok(0)
        }
        Command::VerifyBlocking { file, pair, block, epsilon, invariance, budget } => {
            let loaded = load_polygon(&file)?;
            let m = surface_of(&loaded)?;
            let (a, b) = resolve_pair(&loaded, &pair)?;
            let mut points = Vec::new();
            for tok in block.split(';').filter(|t| !t.trim().is_empty()) {
                points.push(parse_xy(tok.trim())?);
            }
            let eps = epsilon.unwrap_or_else(|| blocking_eps(&m.base));
            let set = BlockingSet::new(points, (a.clone(), b.clone()))
                .map_err(|e| anyhow!("{e}"))?;
            let budget = budget_for(&m.base, &budget, 50.0);
            println!("blocking-points: {}", set.points.len());
            println!("epsilon: {eps:.3e}");
            let lifted = lift_blocking_set(&m, &set).map_err(|e| anyhow!("{e}"))?;
            println!(
                "lifted-cardinality: {} (bound {})",
                lifted.len(),
                m.sheet_count() * set.points.len()
            );
            let report = verify_blocking(&m, &set, &budget, eps);
            println!("connections-checked: {}", report.connections_checked);
            if !report.consistent {
                println!("result: counterexample");
                if let Some(t) = &report.counterexample {
                    println!("counterexample-bounces: {}", t.bounces.len());
                    println!("counterexample-length: {:.9}", t.total_length);
                }
                return Ok(1);
            }
            println!("result: consistent");
            if invariance {
                let inv = invariance_check(&m, (a, b), Some(&set), &budget, eps);
                let bad = inv.pairs.iter().filter(|p| !p.consistent).count();
                println!("invariance: {} pairs checked, {} violations", inv.pairs.len(), bad);
                if bad > 0 {
                    return Ok(1);
                }
            }
            Ok(0)
        }
        Command::Certify { file, pair } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("cannot read {}", file.display()))?;
            let is_cells = file.extension().map_or(false, |e| e == "cells");
            let (room, marked) = if is_cells {
                let (family, cells) =
                    io::parse_cells_file(&text).map_err(|e| anyhow!("{e}"))?;
                (compose_polygon(family, &cells).map_err(|e| anyhow!("{e}"))?, Vec::new())
            } else {
                let parsed: io::PolygonFile<f64> =
                    io::parse_polygon_file(&text).map_err(|e| anyhow!("{e}"))?;
                let polygon = parsed.build().map_err(|e| anyhow!("{e}"))?;
                let family = TriangleFamily::Right244;
                let cells = recognize_cells(family, &polygon).ok_or_else(|| {
                    anyhow!("polygon is not a recognizable union of tiling cells")
                })?;
                (compose_polygon(family, &cells).map_err(|e| anyhow!("{e}"))?, parsed.marked)
            };
            let synth = LoadedPolygon {
                polygon: room.polygon.clone(),
                marked,
                exact_literals: true,
            };
            let (a, b) = resolve_pair(&synth, &pair)?;
            let tol = 1e-9 * room.polygon.diameter_f64().max(1.0);
            let snap = |p: &Point2<f64>| snap_chart_point(room.family, p.x, p.y, tol);
            let (Some(p1), Some(p2)) = (snap(&a), snap(&b)) else {
                println!("result: invalid");
                println!("reason: marked point is not a tiling vertex");
                return Ok(1);
            };
            let cert = certify(&room, p1, p2);
            println!(
                "family: {:?} (n={}, m={})",
                room.family,
                room.family.n(),
                room.family.m()
            );
            println!("edges: {}", room.edge_count());
            println!("cells: {}", room.cells.len());
            println!("pair-chart: ({}, {}) and ({}, {})", p1.0, p1.1, p2.0, p2.1);
            let pl1 = room.to_plane(p1);
            let pl2 = room.to_plane(p2);
            println!(
                "pair-plane: ({:.12}, {:.12}) and ({:.12}, {:.12})",
                pl1.x, pl1.y, pl2.x, pl2.y
            );
            println!("check hypotheses_ok: {}", cert.checks.hypotheses_ok);
            println!("check tiling_ok: {}", cert.checks.tiling_ok);
            println!(
                "check both_points_are_a_images: {}",
                cert.checks.both_points_are_a_images
            );
            println!(
                "check points_distinct_and_interior_or_allowed: {}",
                cert.checks.points_distinct_and_interior_or_allowed
            );
            println!(
                "check tiling_vertices_covered: {}",
                cert.checks.tiling_vertices_covered
            );
            println!("basis: {}", cert.lemma_basis);
            if cert.valid() {
                println!("result: valid (pair is dark)");
                Ok(0)
            } else {
                println!("result: invalid ({})", cert.failed_checks().join(", "));
                Ok(1)
            }
        }
        Command::NoReturn { triangle, n, m, budget } => {
            if let Some(t) = triangle {
                let tri = match t.as_str() {
                    "244" => CoxeterTriangle::RIGHT_ISOSCELES,
                    "236" => CoxeterTriangle::HALF_EQUILATERAL,
                    other => bail!("unknown triangle '{other}' (expected 244 or 236)"),
                };
                let radius = budget.length.unwrap_or(100.0);
                let report = verify_no_return_exact(tri, radius);
                println!("family: {:?}", report.family);
                println!("radius: {}", report.radius);
                println!("images-checked: {}", report.images_checked);
                println!("violations: {}", report.violations.len());
                if report.verified() {
                    println!("result: verified (exhaustive within radius)");
                    return Ok(0);
                }
                println!("result: violation found");
                return Ok(1);
            }
            let (n, m) = (
                n.ok_or_else(|| anyhow!("--n required for sampling"))?,
                m.ok_or_else(|| anyhow!("--m required for sampling"))?,
            );
            if !lemma_hypotheses(n, m) {
                println!("hypotheses: fail (need n even, 1 <= m < n-1)");
                return Ok(2);
            }
            let report = no_return_sampling(
                n,
                m,
                budget.samples,
                budget.length.unwrap_or(100.0),
                budget.seed,
            );
            println!("triangle: pi/{n}, {m}pi/{n}");
            println!("samples: {}", report.samples);
            println!("min-return-distance: {:.6e}", report.min_return_distance);
            println!("vertex-passages-checked: {}", report.vertex_passages_checked);
            println!("max-asymmetry: {:.3e}", report.max_asymmetry);
            Ok(0)
        }
        Command::Search { family, grid, max_cells, states } => {
            let family = match family.as_str() {
                "244" => TriangleFamily::Right244,
                "236" => TriangleFamily::Half236,
                other => bail!("unknown family '{other}'"),
            };
            let out = search_min_edges(family, grid, max_cells, states);
            println!("outcomes: {}", out.len());
            for o in &out {
                println!(
                    "edges: {} cells: {} pair: ({},{}) -> ({},{})",
                    o.edge_count,
                    o.cells.len(),
                    o.pair.0 .0,
                    o.pair.0 .1,
                    o.pair.1 .0,
                    o.pair.1 .1
                );
            }
            Ok(0)
        }
        Command::Render { what, file, out, n, m, from, dir, length } => {
            let style = Style::default();
            let doc = match what.as_str() {
                "star" => render::render_unfolding_star(n, m, &style),
                "polygon" => {
                    let loaded = load_polygon(
                        file.as_ref().ok_or_else(|| anyhow!("file required"))?,
                    )?;
                    render::render_polygon(&loaded.polygon, &loaded.marked, &style)
                }
                "trajectory" => {
                    let loaded = load_polygon(
                        file.as_ref().ok_or_else(|| anyhow!("file required"))?,
                    )?;
                    let msurf = surface_of(&loaded)?;
                    let start = parse_xy(&from.ok_or_else(|| anyhow!("--from required"))?)?;
                    let d = parse_xy(&dir.ok_or_else(|| anyhow!("--dir required"))?)?;
                    let traj = shoot(
                        &msurf.base,
                        &msurf.witness,
                        PhaseState { point: start, direction: Vec2::new(d.x, d.y) },
                        length,
                        VertexPolicy::StopAtVertex,
                    )
                    .map_err(|e| anyhow!("{e}"))?;
                    render::render_trajectory(&msurf.base, &traj, &loaded.marked, &style)
                }
                "tiling" => {
                    let path = file.as_ref().ok_or_else(|| anyhow!("file required"))?;
                    let text = std::fs::read_to_string(path)?;
                    let (family, cells) =
                        io::parse_cells_file(&text).map_err(|e| anyhow!("{e}"))?;
                    let room =
                        compose_polygon(family, &cells).map_err(|e| anyhow!("{e}"))?;
                    render::render_tiling(&room, &[], &style)
                }
                other => bail!("unknown figure '{other}'"),
            };
            if !render::looks_well_formed(&doc) {
                bail!("internal error: malformed svg");
            }
            std::fs::write(&out, doc)?;
            println!("svg: {}", out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
