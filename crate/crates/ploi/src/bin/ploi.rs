//! Command-line interface for exact computations with piecewise-linear
//! homeomorphisms of [0,1] and their finitely generated groups.
//!
//! Exit codes: 0 on success, 1 when an obstruction is found and reported
//! as a result, 2 on errors.

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use ploi::construct::{alpha1, alpha2, beta, bump, gn_generators, w_generators, TruncationParams};
use ploi::orbitals::{self, BalanceVerdict};
use ploi::rational::rat;
use ploi::{classify, slopes, split, towers, words};
use ploi::{GroupSpec, Interval, PLMap, Rat};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "ploi",
    about = "Exact piecewise-linear homeomorphisms of [0,1]: orbitals, towers, \
             slope lattices, split groups, and solvable-group classification",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Word-ball radius used by group computations
    #[arg(long, global = true, default_value_t = 2)]
    radius: usize,
    /// Enumeration cap for word balls
    #[arg(long, global = true, default_value_t = 20000)]
    cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a named map (id, a1, a2, beta:K, bump:A/B:C/D, or inline JSON)
    Make { name: String },
    /// Evaluate a map at a rational point
    Eval { name: String, x: String },
    /// Compose maps left to right (right action: x · f1 · f2 · ...)
    Compose {
        #[arg(required = true)]
        names: Vec<String>,
    },
    /// Orbitals of the generators and of the group they generate
    Orbitals {
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// Maximal tower found in the word ball
    Towers {
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// Depth evidence: tower height and iterated-commutator lower bound
    Depth {
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// Scan the word ball for imbalance witnesses
    Balance {
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// End slopes of a map on an orbital (orbital as LEFT RIGHT rationals)
    Phi {
        name: String,
        left: String,
        right: String,
    },
    /// Slope lattice and controller on a group orbital
    Controller {
        #[arg(required = true)]
        gens: Vec<String>,
        /// Orbital as "LEFT:RIGHT"; defaults to the first group orbital
        #[arg(long)]
        orbital: Option<String>,
    },
    /// One-orbital pieces of the ball elements with their depth tags
    Split {
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// Classify the group as wreath products and sums, or report obstructions
    Classify {
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// Plot a map as an SVG graph or a CSV breakpoint polyline
    Graph { name: String },
}

fn parse_map(s: &str) -> Result<PLMap, String> {
    if s == "id" {
        return Ok(PLMap::identity());
    }
    if s == "a1" {
        return Ok(alpha1());
    }
    if s == "a2" {
        return Ok(alpha2());
    }
    if let Some(k) = s.strip_prefix("beta:") {
        let k: i64 = k.parse().map_err(|e| format!("bad beta exponent: {}", e))?;
        return Ok(beta(k));
    }
    if let Some(rest) = s.strip_prefix("bump:") {
        let iv = parse_interval(rest)?;
        return Ok(bump(&iv));
    }
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| format!("bad map JSON: {}", e));
    }
    Err(format!(
        "unknown map name '{}' (try id, a1, a2, beta:K, bump:A/B:C/D, or inline JSON)",
        s
    ))
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    Rat::from_str(s).map_err(|e| format!("bad rational '{}': {}", s, e))
}

fn parse_interval(s: &str) -> Result<Interval, String> {
    let (l, r) = s
        .split_once(':')
        .ok_or_else(|| format!("bad interval '{}', expected LEFT:RIGHT", s))?;
    let left = parse_rat(l)?;
    let right = parse_rat(r)?;
    if !(left >= rat(0, 1) && left < right && right <= rat(1, 1)) {
        return Err(format!("'{}' is not a subinterval of [0,1]", s));
    }
    Ok(Interval::new(left, right))
}

/// A group argument is either a single family name (w:N or g:LEVEL:WIDTH)
/// or a list of map names.
fn parse_group(args: &[String]) -> Result<GroupSpec, String> {
    if args.len() == 1 {
        let s = &args[0];
        if let Some(n) = s.strip_prefix("w:") {
            let n: usize = n.parse().map_err(|e| format!("bad w level: {}", e))?;
            return Ok(w_generators(n));
        }
        if let Some(rest) = s.strip_prefix("g:") {
            let (lvl, w) = rest
                .split_once(':')
                .ok_or_else(|| format!("bad group name '{}', expected g:LEVEL:WIDTH", s))?;
            let level: usize = lvl.parse().map_err(|e| format!("bad level: {}", e))?;
            let width: i64 = w.parse().map_err(|e| format!("bad width: {}", e))?;
            return Ok(gn_generators(TruncationParams { level, width }));
        }
    }
    let gens = args
        .iter()
        .map(|s| parse_map(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupSpec::new(args.join(" "), gens))
}

fn emit(cli: &Cli, text: String) -> Result<(), String> {
    match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| format!("cannot write {}: {}", path.display(), e)),
        None => {
            println!("{}", text);
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}

fn emit_report<T: Serialize>(cli: &Cli, value: &T, text: String) -> Result<(), String> {
    match cli.format {
        Format::Json => emit(cli, to_json(value)?),
        _ => emit(cli, text),
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.cmd {
        Cmd::Make { name } => {
            let f = parse_map(name)?;
            emit_report(cli, &f, f.to_string())?;
            Ok(0)
        }
        Cmd::Eval { name, x } => {
            let f = parse_map(name)?;
            let x = parse_rat(x)?;
            let y = f.eval(&x).map_err(|e| e.to_string())?;
            emit_report(cli, &y, y.to_string())?;
            Ok(0)
        }
        Cmd::Compose { names } => {
            let mut acc = PLMap::identity();
            for n in names {
                acc = acc.compose(&parse_map(n)?);
            }
            emit_report(cli, &acc, acc.to_string())?;
            Ok(0)
        }
        Cmd::Orbitals { gens } => {
            let g = parse_group(gens)?;
            #[derive(Serialize)]
            struct Out {
                label: String,
                group_orbitals: Vec<Interval>,
                signed_orbitals: Vec<ploi::SignedOrbital>,
            }
            let out = Out {
                label: g.label().to_string(),
                group_orbitals: orbitals::group_orbitals(&g),
                signed_orbitals: orbitals::signed_orbitals(g.generators()),
            };
            let mut text = format!("group orbitals of {}:", out.label);
            for o in &out.group_orbitals {
                text.push_str(&format!("\n  {}", o));
            }
            text.push_str("\ngenerator orbitals:");
            for s in &out.signed_orbitals {
                text.push_str(&format!("\n  {}  of  {}", s.orbital, s.signature));
            }
            emit_report(cli, &out, text)?;
            Ok(0)
        }
        Cmd::Towers { gens } => {
            let g = parse_group(gens)?;
            let ball =
                words::ball_with_cap(&g, cli.radius, cli.cap).map_err(|e| e.to_string())?;
            let tower = towers::max_tower(ball.elements());
            #[derive(Serialize)]
            struct Out {
                height: usize,
                exemplary: bool,
                radius: usize,
                tower: towers::Tower,
            }
            let out = Out {
                height: tower.height(),
                exemplary: towers::is_exemplary(&tower),
                radius: cli.radius,
                tower,
            };
            let mut text = format!(
                "tower of height {} at radius {} (exemplary: {})",
                out.height, out.radius, out.exemplary
            );
            for e in out.tower.entries() {
                text.push_str(&format!("\n  {}  of  {}", e.orbital, e.signature));
            }
            emit_report(cli, &out, text)?;
            Ok(0)
        }
        Cmd::Depth { gens } => {
            let g = parse_group(gens)?;
            let depth = towers::depth_lower_bound(&g, cli.radius).map_err(|e| e.to_string())?;
            let derived =
                words::derived_length_bounds(&g, cli.radius).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Out {
                tower_height: usize,
                derived_lower_bound: usize,
                derived_vanishing_level: Option<usize>,
                radius: usize,
                tower: towers::DepthReport,
                derived: words::DerivedReport,
            }
            let out = Out {
                tower_height: depth.height,
                derived_lower_bound: derived.lower_bound,
                derived_vanishing_level: derived.vanishing_level,
                radius: cli.radius,
                tower: depth,
                derived,
            };
            let text = format!(
                "radius {}: tower height {}, commutator lower bound {}{}",
                out.radius,
                out.tower_height,
                out.derived_lower_bound,
                match out.derived_vanishing_level {
                    Some(v) => format!(", commutators vanish at level {}", v),
                    None => String::new(),
                }
            );
            emit_report(cli, &out, text)?;
            Ok(0)
        }
        Cmd::Balance { gens } => {
            let g = parse_group(gens)?;
            let verdict = orbitals::balance_check(&g, cli.radius);
            let (code, text) = match &verdict {
                BalanceVerdict::BalancedUpToRadius { radius } => {
                    (0, format!("no imbalance witness up to radius {}", radius))
                }
                BalanceVerdict::ImbalancedWitness { witness, note, .. } => (
                    1,
                    format!(
                        "imbalance witness: orbital {} of an element realizes one end \
                         of {}\n{}",
                        witness.0.orbital, witness.1, note
                    ),
                ),
            };
            emit_report(cli, &verdict, text)?;
            Ok(code)
        }
        Cmd::Phi { name, left, right } => {
            let f = parse_map(name)?;
            let a = Interval::new(parse_rat(left)?, parse_rat(right)?);
            let p = slopes::phi(&f, &a).map_err(|e| e.to_string())?;
            emit_report(cli, &p, format!("({}, {})", p.left, p.right))?;
            Ok(0)
        }
        Cmd::Controller { gens, orbital } => {
            let g = parse_group(gens)?;
            let a = match orbital {
                Some(s) => parse_interval(s)?,
                None => orbitals::group_orbitals(&g)
                    .into_iter()
                    .next()
                    .ok_or("the group is trivial and has no orbitals")?,
            };
            let lattice = slopes::image_lattice(&g, &a).map_err(|e| e.to_string())?;
            let controller = slopes::find_controller(&g, &a, cli.radius).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Out {
                orbital: Interval,
                lattice: slopes::LatticeVerdict,
                controller: PLMap,
            }
            let out = Out {
                orbital: a,
                lattice,
                controller,
            };
            let text = format!(
                "orbital {}: lattice rank {} ({:?}), controller {}",
                out.orbital, out.lattice.rank, out.lattice.kind, out.controller
            );
            emit_report(cli, &out, text)?;
            Ok(0)
        }
        Cmd::Split { gens } => {
            let g = parse_group(gens)?;
            let gamma = split::gamma_g(&g, cli.radius).map_err(|e| e.to_string())?;
            let tagged = split::tag_depths(&gamma);
            let mut text = format!(
                "{} one-orbital pieces at radius {}:",
                tagged.len(),
                cli.radius
            );
            for t in &tagged {
                text.push_str(&format!("\n  depth {}  {}  {}", t.g_depth, t.orbital, t.piece));
            }
            emit_report(cli, &tagged, text)?;
            Ok(0)
        }
        Cmd::Classify { gens } => {
            let g = parse_group(gens)?;
            let report =
                classify::classification_report(&g, cli.radius).map_err(|e| e.to_string())?;
            let text = match &report.outcome {
                classify::Outcome::Classified {
                    expression,
                    derived_length,
                    embedding_target,
                    ..
                } => format!(
                    "{} ~= {}  (derived length {}, embeds in member {} of the \
                     canonical solvable family; tower height {})",
                    report.group, expression, derived_length, embedding_target, report.tower_height
                ),
                classify::Outcome::Obstructed { kind, detail } => {
                    format!("obstruction ({}): {}", kind, detail)
                }
            };
            let code = if report.is_classified() { 0 } else { 1 };
            emit_report(cli, &report, text)?;
            Ok(code)
        }
        Cmd::Graph { name } => {
            let f = parse_map(name)?;
            match cli.format {
                Format::Csv => {
                    let mut text = String::from("x,y");
                    for (x, y) in f.breakpoints() {
                        text.push_str(&format!("\n{},{}", x, y));
                    }
                    emit(cli, text)?;
                }
                _ => emit(cli, svg_graph(&f))?,
            }
            Ok(0)
        }
    }
}

const SVG_SIZE: i64 = 400;

/// Pixel coordinate of a rational in [0,1], scaled to the SVG grid.
fn px(r: &Rat) -> i64 {
    let scaled = r * &Rat::from(SVG_SIZE);
    (scaled.numer() / scaled.denom()).to_i64().unwrap_or(0)
}

fn svg_graph(f: &PLMap) -> String {
    let pts: Vec<String> = f
        .breakpoints()
        .iter()
        .map(|(x, y)| format!("{},{}", px(x), SVG_SIZE - px(y)))
        .collect();
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" \
         viewBox=\"0 0 {s} {s}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{s}\" height=\"{s}\" fill=\"white\" \
         stroke=\"black\"/>\n\
         <line x1=\"0\" y1=\"{s}\" x2=\"{s}\" y2=\"0\" stroke=\"#cccccc\" \
         stroke-dasharray=\"4\"/>\n\
         <polyline points=\"{p}\" fill=\"none\" stroke=\"#1f6feb\" \
         stroke-width=\"2\"/>\n\
         </svg>",
        s = SVG_SIZE,
        p = pts.join(" ")
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
