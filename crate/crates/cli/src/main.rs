use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eqchrom::group::PGroupSpec;

mod commands;

/// Default truncation order when `--order` is not given.
pub const ORDER_ENV: &str = "EQCHROM_ORDER";

#[derive(Parser, Debug)]
#[command(name = "eqchrom", version, about = "Balmer spectra, formal group laws and equivariant bordism presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subgroup lattice with stable ids S0, S1, ...
    Lattice(LatticeArgs),
    /// Type functions, obstructions, fracture sets and the Balmer poset.
    #[command(subcommand)]
    Balmer(BalmerCommand),
    /// Formal group laws.
    #[command(subcommand)]
    Fgl(FglCommand),
    /// Axiom check of an equivariant formal group law.
    Equivariant(EquivariantArgs),
    /// Generators of the C2-equivariant BP ring as Borel/geometric pairs.
    Strickland(StricklandArgs),
    /// Node and edge rings over the subdivided subgroup lattice.
    Diagram(DiagramArgs),
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// Group as `p:[k1,k2,...]`.
    #[arg(long, required_unless_present = "group_file", conflicts_with = "group_file")]
    group: Option<PGroupSpec>,
    /// Group document (`eqchrom/group/v1`).
    #[arg(long)]
    group_file: Option<std::path::PathBuf>,
    /// Only list ids with their elements.
    #[arg(long)]
    list: bool,
    /// Render the subdivided diagram instead of the Hasse diagram.
    #[arg(long)]
    sd: bool,
    /// Shade the subgroups on which this character is trivial, e.g. `[1,0]`.
    #[arg(long)]
    shade_character: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum BalmerCommand {
    /// Admissibility of a height function given as `{"S0": 3, "S1": "inf"}`.
    Admissible {
        #[arg(long)]
        group: PGroupSpec,
        #[arg(long = "fn")]
        function: String,
    },
    /// Whether a type function can be raised by one on a set of subgroups.
    Obstruction {
        #[arg(long)]
        group: PGroupSpec,
        #[arg(long = "type")]
        type_fn: String,
        /// Comma-separated subgroup ids.
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
    },
    /// Points between two type functions.
    Fracture {
        #[arg(long)]
        group: PGroupSpec,
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
    },
    /// Points of level at most `--nmax` plus the infinite points.
    Poset {
        #[arg(long)]
        group: PGroupSpec,
        #[arg(long, default_value_t = 3)]
        nmax: u32,
        /// Shade the closed set of this type function.
        #[arg(long)]
        shade: Option<String>,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Araki,
    Hazewinkel,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum LawArg {
    Additive,
    Multiplicative,
    /// p-typical with `v_n = 1` and the other generators zero.
    Honda,
}

#[derive(Subcommand, Debug)]
enum FglCommand {
    /// `[n](x)` of the p-typical law.
    PSeries {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "araki")]
        convention: ConventionArg,
        #[arg(long, default_value_t = 2)]
        vmax: usize,
        /// Number of coefficients kept.
        #[arg(long, env = ORDER_ENV, default_value_t = 5)]
        order: usize,
        /// Reduce coefficients mod p.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// Series multiplier; defaults to p.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Associativity, commutativity and unit residuals.
    Axioms {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "araki")]
        convention: ConventionArg,
        #[arg(long, default_value_t = 3)]
        vmax: usize,
        /// Largest total degree.
        #[arg(long, default_value_t = 9)]
        degree: usize,
    },
    /// Height of a law over the prime field.
    Height {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        law: LawArg,
        /// For `honda`, the height `n`.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        bound: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    /// `Z[e]/(e^2 + 2e)` with the multiplicative law.
    MultiplicativeC2,
    /// The same with `b(z) = e + z`.
    CorruptedC2,
    /// Borel completion of the p-typical law over `--group`.
    Borel,
}

#[derive(Args, Debug)]
struct EquivariantArgs {
    #[arg(long, value_enum, conflicts_with = "input")]
    model: Option<Model>,
    /// Required for `--model borel`.
    #[arg(long)]
    group: Option<PGroupSpec>,
    /// Equivariant FGL data document.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    #[arg(long, env = ORDER_ENV, default_value_t = 5)]
    order: i32,
    #[arg(long, default_value_t = 1)]
    vmax: usize,
    /// Print the data document instead of checking it.
    #[arg(long)]
    emit: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct StricklandArgs {
    #[arg(long, default_value_t = 8)]
    imax: usize,
    #[arg(long, default_value_t = 2)]
    jmax: usize,
    #[arg(long, env = ORDER_ENV, default_value_t = 9)]
    order: i32,
    #[arg(long, default_value_t = 3)]
    vmax: usize,
    /// Check that q_{2^n} has the expected fixed points instead.
    #[arg(long)]
    vnm: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct DiagramArgs {
    #[arg(long)]
    group: PGroupSpec,
    #[arg(long, default_value_t = 2)]
    imax: usize,
    #[arg(long, env = ORDER_ENV, default_value_t = 5)]
    order: i32,
    #[arg(long, default_value_t = 2)]
    vmax: usize,
    /// Element tuple document to test for membership in the limit.
    #[arg(long)]
    check: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Domain(e)) => {
            let mut v = serde_json::json!({"error": e.kind(), "message": e.to_string()});
            if let eqchrom::Error::SchemaViolation { pointer, .. } = &e {
                v["pointer"] = serde_json::json!(pointer);
            }
            eprintln!("{v}");
            ExitCode::from(1)
        }
    }
}
