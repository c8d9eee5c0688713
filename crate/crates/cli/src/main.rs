mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clusterlab::catalog::CoxeterType;
use clusterlab::explore::{enumerate_with, Coherence, ExploreOptions, PatternKind};
use clusterlab::explore::explore_states;
use clusterlab::geometry::{build_exchange_graph, count_rays, fan_of, fan_verify, FanVerdict, GCone, GraphKind};
use clusterlab::quasiint::{classify_quiver, construct_integer_matrix, NonQuasiWitness, QuasiVerdict};
use clusterlab::rank2::rank2_fan;
use clusterlab::skewsym::sk;
use clusterlab::Scalar;
use input::{load_matrix, load_quiver, CliResult};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

const FALLBACK_DEPTH: usize = 8;

#[derive(Parser)]
#[command(name = "clusterlab", version, about = "Exact real cluster-algebra matrix patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Args)]
struct Source {
    /// JSON file with a matrix, {"B": .., "D": ..}, or a quiver.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Catalog type instead of a file, e.g. H3, F4, I2(7).
    #[arg(long = "type")]
    type_name: Option<String>,
}

#[derive(Args)]
struct PatternArgs {
    #[command(flatten)]
    source: Source,
    /// Maximum mutation depth; catalog types have their own default.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate B-matrices up to permutation.
    BPattern(PatternArgs),
    /// Enumerate C-matrices up to permutation, with periodicity and coherence.
    CPattern {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Report sign-coherence (always computed; kept for compatibility).
        #[arg(long)]
        check_sign_coherence: bool,
        /// Also check the duality identities at every node.
        #[arg(long)]
        verify: bool,
        /// Exit with status 2 if the pattern is not sign-coherent.
        #[arg(long)]
        expect_coherent: bool,
    },
    /// Decide whether a quiver is of quasi-integer type.
    ClassifyQuasiInteger(Source),
    /// Build an integer matrix whose Sk-image is the quiver.
    ConstructInteger(Source),
    /// Compute a skew-symmetrizer D of B.
    SkewSymmetrizer(Source),
    /// Compute Sk(B) = D^(1/2) B D^(-1/2).
    Sk(Source),
    /// G-cones of the explored pattern.
    Fan {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Check the fan property exactly (rank at most 4).
        #[arg(long)]
        verify: bool,
    },
    /// Exchange graph of one of the five kinds.
    ExchangeGraph {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long, value_parser = ["C", "G", "fan", "modC", "modG"])]
        kind: String,
    },
    /// Rank-2 classification, closed forms and fan picture for [[0,-a],[b,0]].
    Rank2 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Write the fan drawing here.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a Coxeter quiver.
    Catalog {
        name: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("CLUSTERLAB_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("CLUSTERLAB_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            return Err("CLUSTERLAB_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn parse_scalar(s: &str) -> CliResult<Scalar> {
    let v: Value = serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()));
    Scalar::from_json(&v).map_err(|e| format!("bad scalar {s:?}: {e}"))
}

fn no_svg(format: Format) -> CliResult<()> {
    if format == Format::Svg {
        return Err("svg output is only available for rank2".into());
    }
    Ok(())
}

/// Output text and exit code.
type Outcome = (String, u8);

fn run_pattern(p: &PatternArgs, kind: PatternKind, verify: bool, expect_coherent: bool) -> CliResult<Outcome> {
    no_svg(p.format)?;
    let inp = load_matrix(p.source.input.as_deref(), p.source.type_name.as_deref())?;
    let depth = p.depth.or(inp.default_depth).unwrap_or(FALLBACK_DEPTH);
    let opts = ExploreOptions { symmetrizer: if verify { Some(inp.symmetrizer()?) } else { None } };
    let report = enumerate_with(&inp.matrix, depth, kind, &opts);
    let out = match p.format {
        Format::Text => report.render_text(),
        _ => pretty(&report.to_json()),
    };
    let incoherent = matches!(report.coherence, Some(Coherence::Incoherent(_)));
    Ok((out, if expect_coherent && incoherent { 2 } else { 0 }))
}

fn cones_json(cones: &[GCone]) -> Value {
    Value::Array(cones.iter().map(GCone::to_json).collect())
}

fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::BPattern(p) => run_pattern(&p, PatternKind::B, false, false),
        Command::CPattern { pattern, verify, expect_coherent, .. } => {
            run_pattern(&pattern, PatternKind::C, verify, expect_coherent)
        }
        Command::ClassifyQuasiInteger(src) => {
            let q = load_quiver(src.input.as_deref(), src.type_name.as_deref())?;
            let v = match classify_quiver(&q) {
                QuasiVerdict::QuasiInteger(_) => {
                    let cert = construct_integer_matrix(&q).map_err(|e| e.to_string())?;
                    json!({ "quasi_integer": true, "certificate": cert.to_json() })
                }
                QuasiVerdict::Not(NonQuasiWitness::Weight { i, j, weight, square }) => json!({
                    "quasi_integer": false,
                    "witness": { "edge": [i, j], "weight": weight, "square": square },
                }),
                QuasiVerdict::Not(NonQuasiWitness::Cycle { cycle, product }) => json!({
                    "quasi_integer": false,
                    "witness": { "cycle": cycle, "product": product },
                }),
            };
            Ok((pretty(&v), 0))
        }
        Command::ConstructInteger(src) => {
            let q = load_quiver(src.input.as_deref(), src.type_name.as_deref())?;
            let cert = construct_integer_matrix(&q).map_err(|e| e.to_string())?;
            Ok((pretty(&cert.to_json()), 0))
        }
        Command::SkewSymmetrizer(src) => {
            let inp = load_matrix(src.input.as_deref(), src.type_name.as_deref())?;
            let d = inp.symmetrizer()?;
            Ok((pretty(&json!({ "D": d.iter().map(Scalar::to_json).collect::<Vec<_>>() })), 0))
        }
        Command::Sk(src) => {
            let inp = load_matrix(src.input.as_deref(), src.type_name.as_deref())?;
            let m = sk(&inp.matrix).map_err(|e| e.to_string())?;
            Ok((pretty(&m.to_json()), 0))
        }
        Command::Fan { pattern: p, verify } => {
            no_svg(p.format)?;
            let inp = load_matrix(p.source.input.as_deref(), p.source.type_name.as_deref())?;
            let depth = p.depth.or(inp.default_depth).unwrap_or(FALLBACK_DEPTH);
            let d = inp.symmetrizer()?;
            let space = explore_states(&inp.matrix, depth);
            let cones = fan_of(&space, &d).map_err(|e| e.to_string())?;
            let verdict = verify.then(|| fan_verify(&cones));
            let v = json!({
                "cones": cones_json(&cones),
                "cone_count": cones.len(),
                "rays": count_rays(&cones),
                "complete": space.is_complete(),
                "fan_verified": verdict.as_ref().map(|f| *f == FanVerdict::Pass),
                "fan_check": verdict.map(|f| match f {
                    FanVerdict::Pass => "pass".to_string(),
                    FanVerdict::Partial => "partial".to_string(),
                    FanVerdict::Fail { first, second } => format!("fail: cones {first} and {second} overlap"),
                }),
            });
            let out = match p.format {
                Format::Text => format!("cones {}\nrays {}\n", cones.len(), count_rays(&cones)),
                _ => pretty(&v),
            };
            Ok((out, 0))
        }
        Command::ExchangeGraph { pattern: p, kind } => {
            no_svg(p.format)?;
            let inp = load_matrix(p.source.input.as_deref(), p.source.type_name.as_deref())?;
            let depth = p.depth.or(inp.default_depth).unwrap_or(FALLBACK_DEPTH);
            let d = inp.symmetrizer()?;
            let kind = GraphKind::parse(&kind).expect("validated by clap");
            let space = explore_states(&inp.matrix, depth);
            let g = build_exchange_graph(&space, kind, &d).map_err(|e| e.to_string())?;
            let mut v = g.to_json();
            v["regular"] = json!(g.is_regular(space.n()));
            let out = match p.format {
                Format::Text => format!("{} vertices {}\nregular {}\n", g.kind, g.len(), g.is_regular(space.n())),
                _ => pretty(&v),
            };
            Ok((out, 0))
        }
        Command::Rank2 { a, b, depth, svg, format } => {
            let (a, b) = (parse_scalar(&a)?, parse_scalar(&b)?);
            let verdict = clusterlab::rank2::classify_rank2(&a, &b).map_err(|e| e.to_string())?;
            let fan = if verdict.is_coherent() { Some(rank2_fan(&a, &b, depth).map_err(|e| e.to_string())?) } else { None };
            if let (Some(path), Some(fan)) = (&svg, &fan) {
                std::fs::write(path, fan.svg()).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let out = match (format, &fan) {
                (Format::Svg, Some(fan)) => fan.svg(),
                (Format::Svg, None) => return Err("no fan to draw: the pattern is not sign-coherent".into()),
                (Format::Text, _) => format!("{}\n", verdict.to_json()),
                (Format::Json, Some(fan)) => pretty(&fan.to_json()),
                (Format::Json, None) => pretty(&json!({ "classification": verdict.to_json() })),
            };
            Ok((out, 0))
        }
        Command::Catalog { name, format } => {
            no_svg(format)?;
            let t = CoxeterType::parse(&name).map_err(|e| e.to_string())?;
            let q = t.quiver();
            let out = match format {
                Format::Text => q.weights().render(),
                _ => pretty(&json!({
                    "name": name,
                    "rank": t.rank(),
                    "default_depth": t.default_depth(),
                    "matrix": q.weights().to_json(),
                    "quiver": q.to_json(),
                })),
            };
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
