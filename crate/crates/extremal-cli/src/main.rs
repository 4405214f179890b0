use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use extremal::commands::{self, Command, Format, GraphSource, RunConfig};

/// Lie algebras generated by extremal elements over a simple graph.
#[derive(Parser)]
#[command(name = "extremal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the graph and, for affine shapes, analyse character ranks
    Classify(CommonArgs),
    /// Dimension and weight multiplicities of the parameter-zero algebra
    Sandwich(CommonArgs),
    /// Check a parameter file for membership, with violation witnesses
    Check(CommonArgs),
    /// Seeded generic realization with an isomorphism certificate
    Generic(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Graph file: JSON with "vertices" and "edges" arrays
    #[arg(long, value_name = "PATH", conflicts_with = "diagram")]
    graph: Option<PathBuf>,

    /// Built-in diagram name such as A3, D4 or E6; "~" suffix for affine
    #[arg(long, value_name = "NAME")]
    diagram: Option<String>,

    /// Scalar field: Q, or F<p> with p an odd prime
    #[arg(long, default_value = "Q")]
    field: String,

    /// Degree cap for the graded construction
    #[arg(long, default_value_t = 24, value_name = "N")]
    cap: usize,

    /// Seed for generic realizations
    #[arg(long, default_value_t = 1, value_name = "N")]
    seed: u64,

    /// Parameter file for check: {"edges": {...}} or a full table
    #[arg(long, value_name = "PATH")]
    params: Option<PathBuf>,

    /// Output file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Report format; csv covers the sandwich multiplicity table only
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Classify(a) => (Command::Classify, a),
        Cmd::Sandwich(a) => (Command::Sandwich, a),
        Cmd::Check(a) => (Command::Check, a),
        Cmd::Generic(a) => (Command::Generic, a),
    };
    let graph = match (args.graph, args.diagram) {
        (Some(path), None) => GraphSource::Path(path),
        (None, Some(name)) => GraphSource::Diagram(name),
        _ => {
            eprintln!("error: exactly one of --graph or --diagram is required");
            return ExitCode::from(2);
        }
    };
    let config = RunConfig {
        command,
        graph,
        field: args.field,
        cap: args.cap,
        seed: args.seed,
        params: args.params,
        format: match args.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    };
    match commands::run(&config) {
        Ok(rendered) => {
            if let Some(path) = args.out {
                if let Err(e) = std::fs::write(&path, &rendered.body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", rendered.body);
            }
            ExitCode::from(if rendered.verdict_ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
