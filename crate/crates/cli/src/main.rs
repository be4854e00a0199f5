//! Command-line interface: load modulated-graph presets (built-in names or
//! JSON files), inspect Cartan data, algebra dimensions, and root systems,
//! compute Hom/Ext between modules, enumerate crystal graphs, verify the
//! crystal axioms, and run the built-in acceptance checks.
//!
//! Exit codes: 0 on success, 1 on a domain error (invalid input data,
//! failed check, out-of-scope request), 2 on a usage error.

use clap::{Parser, Subcommand, ValueEnum};
use preproj::algebra::graded_dimensions;
use preproj::crystal::{check_axioms, enumerate};
use preproj::modgraph::ModGraph;
use preproj::rep::{ext1_space, hom_space, Genericity, Representation};
use preproj::{acceptance, oracle, preset};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "preproj",
    version,
    about = "Preprojective algebras of modulated graphs, nilpotent modules, and crystal graphs",
    max_term_width = 100
)]
struct Cli {
    /// Master seed for the deterministic genericity sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Genericity budget: initial agreeing samples per generic construction
    /// (escalation grows with it). Default 3.
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Deformation parameter for the sl2hat-z preset (nonzero rational,
    /// e.g. "1", "-1", "3/2"). Default 1.
    #[arg(long, global = true)]
    z: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a preset (built-in name or JSON file) and report its structure.
    Validate { preset: String },
    /// Print the Cartan matrix and symmetrizing degrees as JSON.
    Cartan { preset: String },
    /// Graded dimensions of the preprojective algebra up to a degree bound.
    AlgebraDims {
        preset: String,
        /// Largest tensor degree to compute.
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
    },
    /// Positive roots of the (finite-type) Cartan matrix.
    Roots { preset: String },
    /// Number of multisets of positive roots summing to a weight.
    Kostant {
        preset: String,
        /// Comma-separated integers in declared vertex order, e.g. "3,2".
        #[arg(long)]
        weight: String,
    },
    /// Hom and Ext dimensions between two modules given as JSON files.
    Ext {
        preset: String,
        #[arg(long)]
        module_a: PathBuf,
        #[arg(long)]
        module_b: PathBuf,
    },
    /// Enumerate the crystal graph of all module classes up to a total weight.
    Crystal {
        preset: String,
        /// Largest total weight to enumerate.
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Enumerate the crystal graph and verify the crystal axioms on it.
    CheckAxioms {
        preset: String,
        /// Largest total weight to enumerate (axioms are checked two levels
        /// below so every raising target exists).
        #[arg(long)]
        depth: usize,
    },
    /// Run the built-in acceptance checks (several minutes).
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(clean) => {
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn budget(cli: &Cli) -> Genericity {
    match cli.samples {
        Some(s) => Genericity::with_samples(s),
        None => Genericity::default(),
    }
}

fn load(cli: &Cli, spec: &str) -> preproj::Result<Arc<ModGraph>> {
    Ok(Arc::new(preset::load(spec, cli.z.as_deref())?))
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("value serialization is infallible")
    );
}

fn parse_weight(text: &str) -> preproj::Result<Vec<i64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| preproj::Error::Parse(format!("bad weight entry: {part:?}")))
        })
        .collect()
}

fn load_module(
    graph: &Arc<ModGraph>,
    path: &PathBuf,
) -> preproj::Result<Representation> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| preproj::Error::Parse(format!("{}: {e}", path.display())))?;
    let rep = Representation::from_json(graph.clone(), &value)?;
    rep.require_valid()?;
    Ok(rep)
}

/// Runs the selected command; `Ok(false)` means the command completed but
/// its verification failed (nonzero exit without an error message).
fn run(cli: &Cli) -> preproj::Result<bool> {
    match &cli.command {
        Command::Validate { preset } => {
            let g = load(cli, preset)?;
            let cartan = g.cartan();
            println!("graph: {}", g.name());
            for i in 0..g.n() {
                println!(
                    "  vertex {} (degree {} over the base)",
                    g.vertex_name(i),
                    g.degree(i)
                );
            }
            for &(u, v) in g.edges() {
                let b = g.bimodule(u, v).expect("edge bimodule");
                println!(
                    "  edge {} -- {} (bimodule dimension {} over the base)",
                    g.vertex_name(u),
                    g.vertex_name(v),
                    b.base_dim
                );
            }
            let finite = cartan.is_finite_type();
            println!("finite type: {finite}");
            if finite {
                println!("type: {}", oracle::type_label(cartan)?);
            }
            println!("valid");
            Ok(true)
        }
        Command::Cartan { preset } => {
            let g = load(cli, preset)?;
            let cartan = g.cartan();
            let mut out = serde_json::json!({
                "C": cartan.c,
                "d": cartan.d,
                "finite_type": cartan.is_finite_type(),
            });
            if cartan.is_finite_type() {
                out["type"] = serde_json::json!(oracle::type_label(cartan)?);
            }
            print_json(&out);
            Ok(true)
        }
        Command::AlgebraDims { preset, max_degree } => {
            let g = load(cli, preset)?;
            let report = graded_dimensions(&g, *max_degree)?;
            let out = serde_json::json!({
                "graph": g.name(),
                "max_degree": max_degree,
                "dims": report.dims,
                "verdict": report.verdict.to_string(),
            });
            print_json(&out);
            Ok(true)
        }
        Command::Roots { preset } => {
            let g = load(cli, preset)?;
            let roots = oracle::positive_roots(g.cartan())?;
            let out = serde_json::json!({
                "type": oracle::type_label(g.cartan())?,
                "count": roots.count(),
                "roots": roots.positive_roots,
            });
            print_json(&out);
            Ok(true)
        }
        Command::Kostant { preset, weight } => {
            let g = load(cli, preset)?;
            let v = parse_weight(weight)?;
            if v.len() != g.n() {
                return Err(preproj::Error::Parse(format!(
                    "weight has {} entries, the graph has {} vertices",
                    v.len(),
                    g.n()
                )));
            }
            let roots = oracle::positive_roots(g.cartan())?;
            let count = oracle::kostant_count(&roots, &v)?;
            let out = serde_json::json!({ "weight": v, "count": count });
            print_json(&out);
            Ok(true)
        }
        Command::Ext {
            preset,
            module_a,
            module_b,
        } => {
            let g = load(cli, preset)?;
            let a = load_module(&g, module_a)?;
            let b = load_module(&g, module_b)?;
            let out = serde_json::json!({
                "dim_a": a.dims(),
                "dim_b": b.dims(),
                "hom_ab": hom_space(&a, &b)?.dim(),
                "hom_ba": hom_space(&b, &a)?.dim(),
                "ext_ab": ext1_space(&a, &b)?.dim(),
                "ext_ba": ext1_space(&b, &a)?.dim(),
            });
            print_json(&out);
            Ok(true)
        }
        Command::Crystal {
            preset,
            depth,
            format,
        } => {
            let g = load(cli, preset)?;
            let cg = enumerate(&g, *depth, cli.seed, &budget(cli))?;
            match format {
                Format::Json => print_json(&cg.to_json()),
                Format::Dot => print!("{}", cg.to_dot()),
            }
            Ok(true)
        }
        Command::CheckAxioms { preset, depth } => {
            let g = load(cli, preset)?;
            let cg = enumerate(&g, *depth, cli.seed, &budget(cli))?;
            let report = check_axioms(&cg);
            println!("{report}");
            Ok(report.is_clean())
        }
        Command::Selftest => {
            let mut clean = true;
            for (name, outcome) in acceptance::run_all(&budget(cli)) {
                match outcome {
                    Ok(detail) => println!("ok   {name}: {detail}"),
                    Err(err) => {
                        println!("FAIL {name}: {err}");
                        clean = false;
                    }
                }
            }
            Ok(clean)
        }
    }
}
