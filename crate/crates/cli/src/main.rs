use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cascade_cli::checks::{self, DEFAULT_SEED};
use cascade_cli::commands::{self, load};
use cascade_cli::CliError;
use cascade_core::Limits;
use clap::{Args, Parser, Subcommand};

/// Cascade products of transformation semigroups and permutation groups.
///
/// Input files are JSON documents tagged by "kind": semigroup, group,
/// cascade-spec or chain. States are numbered from 1.
///
/// Exit codes: 0 success, 1 invalid input, 2 a size cap was hit,
/// 3 `check` found property violations.
#[derive(Parser)]
#[command(name = "cascade", version)]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Maximum number of elements any enumeration may produce.
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_ELEMENTS)]
    cap_elements: usize,
    /// Maximum flattened degree (product of component sizes).
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_FLAT_DEGREE)]
    cap_flat_degree: usize,
    /// Maximum degree accepted by the holonomy engine (subset width).
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_SUBSET_DEGREE)]
    cap_degree: usize,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the cascade semigroup of a cascade spec and report its order.
    Compose { file: PathBuf },
    /// Print each cascade of a cascade spec as a flat image array.
    Flatten { file: PathBuf },
    /// Decompose a semigroup or group into a cascade product.
    #[command(subcommand)]
    Decompose(Decompose),
    /// Emit DOT source.
    #[command(subcommand)]
    Dot(Dot),
    /// Run the property suite against a document.
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum Decompose {
    /// Holonomy decomposition of a semigroup (or group) document.
    Holonomy {
        file: PathBuf,
        /// Write the tiling picture as DOT to this path.
        #[arg(long)]
        dot_tiling: Option<PathBuf>,
        /// Write the lifted generators as a cascade spec to this path.
        #[arg(long)]
        emit_cascade: Option<PathBuf>,
    },
    /// Frobenius-Lagrange decomposition of a group (or chain) document.
    ///
    /// Without --chain the group is coordinatized along its point-stabilizer
    /// chain (base points smallest first, trivial steps pruned). This is not
    /// a chief series; supply a chain document to use any other subgroup
    /// chain, for example Q8 > <i> > <i^2> > 1.
    Flg {
        file: PathBuf,
        /// Chain document: generator lists per subgroup, outermost first.
        #[arg(long)]
        chain: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Dot {
    /// Dependency tree of one cascade in a cascade spec.
    Tree {
        file: PathBuf,
        /// Cascade name or 1-based index (default: the first).
        #[arg(long)]
        cascade: Option<String>,
    },
    /// Tiling picture of a semigroup's skeleton.
    Tiling { file: PathBuf },
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let limits = Limits {
        elements: cli.caps.cap_elements,
        flat_degree: cli.caps.cap_flat_degree,
        subset_degree: cli.caps.cap_degree,
    };
    match cli.command {
        Command::Compose { file } => commands::compose(&load(&file, &limits)?, &limits, out),
        Command::Flatten { file } => commands::flatten(&load(&file, &limits)?, &limits, out),
        Command::Decompose(Decompose::Holonomy {
            file,
            dot_tiling,
            emit_cascade,
        }) => commands::decompose_holonomy(
            &load(&file, &limits)?,
            &limits,
            dot_tiling.as_deref(),
            emit_cascade.as_deref(),
            out,
        ),
        Command::Decompose(Decompose::Flg { file, chain }) => {
            let doc = load(&file, &limits)?;
            let chain = chain.map(|c| load(&c, &limits)).transpose()?;
            commands::decompose_flg(&doc, chain.as_ref(), &limits, out)
        }
        Command::Dot(Dot::Tree { file, cascade }) => {
            commands::dot_tree(&load(&file, &limits)?, cascade.as_deref(), out)
        }
        Command::Dot(Dot::Tiling { file }) => commands::dot_tiling(&load(&file, &limits)?, &limits, out),
        Command::Check { file } => checks::check(&load(&file, &limits)?, &limits, cli.caps.seed, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; help and version are not errors
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
