use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dimerwall_core::catalog::{catalog, NAMES};
use dimerwall_core::chambers::{chamber_from_geometry, chamber_of, walls, WallKind};
use dimerwall_core::dimer::{perfect_matchings, validate_and_build};
use dimerwall_core::model::ModelFile;
use dimerwall_core::moduli::{curve_degrees, fan, line_bundle, tautological_classes};
use dimerwall_core::oracle::fixture;
use dimerwall_core::paths::path_census;
use dimerwall_core::tiling::Tiling;
use dimerwall_core::wallcross::{cross_wall, explore, reachability_report, to_dot, verify_crossing};
use dimerwall_core::{Error, Result};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "dimerwall", version, about = "Dimer models, quiver moduli and wall crossing")]
struct Cli {
    /// Regenerate the golden catalog fixtures into DIR from the brute-force oracles.
    #[arg(long, value_name = "DIR", num_args = 0..=1, default_missing_value = "crates/core/fixtures")]
    regen_fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(clap::Args)]
struct Theta {
    /// Stability parameter, comma separated, summing to zero.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    theta: Vec<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a model is a valid dimer model on the torus.
    Validate { model: String },
    /// The dual quiver with its relations.
    Quiver { model: String },
    /// Perfect matchings and their classes.
    Matchings { model: String },
    /// The characteristic polygon.
    Polygon { model: String },
    /// The fan of the moduli space at a generic parameter.
    Fan {
        model: String,
        #[command(flatten)]
        theta: Theta,
    },
    /// The chamber of a generic parameter.
    Chamber {
        model: String,
        #[command(flatten)]
        theta: Theta,
    },
    /// The classified walls of a chamber.
    Walls {
        model: String,
        #[command(flatten)]
        theta: Theta,
    },
    /// Cross one facet of a chamber and verify the prediction.
    Cross {
        model: String,
        #[command(flatten)]
        theta: Theta,
        #[arg(long)]
        facet: usize,
    },
    /// The graph of all chambers reachable from a parameter.
    Explore {
        model: String,
        #[command(flatten)]
        theta: Theta,
        #[arg(long, default_value_t = 1000)]
        max: usize,
        /// Also write the graph in DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Exploration, reachability of crepant resolutions, and the geometric
    /// description of every chamber.
    Report {
        model: String,
        #[command(flatten)]
        theta: Theta,
        #[arg(long, default_value_t = 1000)]
        max: usize,
    },
    /// Path classes modulo relations up to a length.
    CensusPaths {
        model: String,
        #[arg(long)]
        max_len: usize,
    },
}

fn load(spec: &str) -> Result<ModelFile> {
    match spec.strip_prefix("catalog:") {
        Some(name) => catalog(name),
        None => {
            let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
            ModelFile::parse(&text)
        }
    }
}

fn tiling(spec: &str) -> Result<Tiling> {
    Tiling::from_file(&load(spec)?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(command: Command) -> Result<Value> {
    Ok(match command {
        Command::Validate { model } => {
            let m = load(&model)?.to_model()?;
            let q = validate_and_build(&m)?;
            let ms = perfect_matchings(&m)?;
            json!({
                "valid": true,
                "name": m.name,
                "faces": q.num_vertices,
                "edges": m.edges.len(),
                "nodes": m.nodes.len(),
                "matchings": ms.matchings.len(),
                "non_degenerate": ms.non_degenerate,
            })
        }
        Command::Quiver { model } => {
            let m = load(&model)?.to_model()?;
            let q = validate_and_build(&m)?;
            json!({
                "vertices": q.num_vertices,
                "v0": q.v0,
                "arrows": to_value(&q.arrows),
                "p_plus": q.p_plus,
                "p_minus": q.p_minus,
                "relations": q.rel,
                "small_cycles": to_value(&q.small_cycles),
            })
        }
        Command::Matchings { model } => {
            let m = load(&model)?.to_model()?;
            validate_and_build(&m)?;
            to_value(&perfect_matchings(&m)?)
        }
        Command::Polygon { model } => {
            let t = tiling(&model)?;
            let p = &t.polygon;
            json!({
                "vertices": p.polygon.vertices,
                "multiplicities": p.multiplicities.iter().map(|(k, v)| json!({"point": k, "matchings": v})).collect::<Vec<_>>(),
                "normalized_area": p.normalized_area(),
                "interior_points": p.polygon.interior_points(),
            })
        }
        Command::Fan { model, theta } => {
            let t = tiling(&model)?;
            let f = fan(&t, &theta.theta)?;
            let classes = tautological_classes(&t, &f)?;
            let lt = line_bundle(&classes, &theta.theta);
            json!({
                "fan": to_value(&f),
                "tautological_classes": classes,
                "line_bundle": lt,
                "degrees": curve_degrees(&f, &lt),
            })
        }
        Command::Chamber { model, theta } => {
            let t = tiling(&model)?;
            let ch = chamber_of(&t, &theta.theta)?;
            to_value(&ch)
        }
        Command::Walls { model, theta } => {
            let t = tiling(&model)?;
            let ch = chamber_of(&t, &theta.theta)?;
            to_value(&walls(&t, &ch)?)
        }
        Command::Cross { model, theta, facet } => {
            let t = tiling(&model)?;
            let ch = chamber_of(&t, &theta.theta)?;
            let ws = walls(&t, &ch)?;
            let w = ws.get(facet).ok_or(Error::FacetOutOfRange {
                index: facet,
                count: ws.len(),
            })?;
            let mut rec = cross_wall(&t, &ch, w)?;
            verify_crossing(&t, &mut rec)?;
            to_value(&rec)
        }
        Command::Explore { model, theta, max, dot } => {
            let t = tiling(&model)?;
            let g = explore(&t, &theta.theta, max)?;
            if let Some(path) = dot {
                let r = reachability_report(&t, &g);
                std::fs::write(&path, to_dot(&g, &r)).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            json!({
                "chambers": g.nodes.len(),
                "walls": g.wall_count(),
                "all_agree": g.all_agree(),
                "all_involutive": g.all_involutive(),
                "graph": to_value(&g),
            })
        }
        Command::Report { model, theta, max } => {
            let t = tiling(&model)?;
            let g = explore(&t, &theta.theta, max)?;
            let r = reachability_report(&t, &g);
            let geometry = g
                .chambers
                .iter()
                .map(|c| chamber_from_geometry(c).map(|_| true))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|x| x);
            let mut kinds = g.kinds();
            kinds.sort_by_key(|k| *k as u8);
            kinds.dedup();
            let walls = match kinds[..] {
                [] => "none".to_string(),
                [k] => format!("all type {}", kind_name(k)),
                _ => format!(
                    "types {}",
                    kinds.iter().map(|&k| kind_name(k)).collect::<Vec<_>>().join(", ")
                ),
            };
            json!({
                "summary": format!("{}; walls: {walls}; geometry-chamber match: {geometry}", r.summary()),
                "chambers": g.nodes.len(),
                "walls": g.wall_count(),
                "wall_labels": g.wall_labels(),
                "all_agree": g.all_agree(),
                "all_involutive": g.all_involutive(),
                "budget_exceeded": g.budget_exceeded,
                "geometry_chamber_match": geometry,
                "reachability": to_value(&r),
            })
        }
        Command::CensusPaths { model, max_len } => {
            let m = load(&model)?.to_model()?;
            let q = validate_and_build(&m)?;
            to_value(&path_census(&q, max_len)?)
        }
    })
}

fn kind_name(k: WallKind) -> &'static str {
    match k {
        WallKind::Zero => "0",
        WallKind::I => "I",
        WallKind::III => "III",
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Quiver { .. } => "quiver",
        Command::Matchings { .. } => "matchings",
        Command::Polygon { .. } => "polygon",
        Command::Fan { .. } => "fan",
        Command::Chamber { .. } => "chamber",
        Command::Walls { .. } => "walls",
        Command::Cross { .. } => "cross",
        Command::Explore { .. } => "explore",
        Command::Report { .. } => "report",
        Command::CensusPaths { .. } => "census-paths",
    }
}

fn regen(dir: &Path) -> Result<Value> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for name in NAMES {
        let q = validate_and_build(&catalog(name)?.to_model()?)?;
        let f = fixture(&q)?;
        let path = dir.join(format!("{name}.json"));
        let text = serde_json::to_string_pretty(&f).expect("serializable") + "\n";
        std::fs::write(&path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    Ok(json!({ "written": written }))
}

fn emit(v: &Value) {
    use std::io::Write;
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            emit(&json!({"schema": SCHEMA, "error": "Usage", "message": e.to_string().trim()}));
            return ExitCode::from(1);
        }
    };
    let (name, result) = match (cli.regen_fixtures, cli.command) {
        (Some(dir), _) => ("regen-fixtures", regen(&dir)),
        (None, Some(c)) => (command_name(&c), run(c)),
        (None, None) => {
            emit(&json!({"schema": SCHEMA, "error": "Usage", "message": "no subcommand given"}));
            return ExitCode::from(1);
        }
    };
    match result {
        Ok(v) => {
            emit(&json!({"schema": SCHEMA, "command": name, "result": v}));
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit(&json!({"schema": SCHEMA, "command": name, "error": e.name(), "message": e.to_string()}));
            ExitCode::from(if e.is_invariant_violation() { 2 } else { 1 })
        }
    }
}
