//! Command-line front end for the visibility pipeline: fixed-grid
//! evaluation, settings search, random scans, and the exact demos.

mod gridfile;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Parser, Subcommand};
use render::Format;
use vcrit::lhv::{self, DedupMode, DEFAULT_MAX_TOTAL_SETTINGS};
use vcrit::lp::{self, LpStatus};
use vcrit::optimizer::{self, SimplexConfig};
use vcrit::{demos, grids, Error as LibError, SettingsGrid};

const CAP_ENV: &str = "VCRIT_MAX_TOTAL_SETTINGS";

#[derive(Parser)]
#[command(
    name = "vcrit",
    version,
    about = "Critical visibility of multiparty correlation experiments",
    after_help = "Exit codes: 0 success, 2 input error, 3 enumeration cap exceeded, \
                  4 solver iteration limit.\n\
                  The strategy enumeration cap (default 24 total settings) can be \
                  overridden with VCRIT_MAX_TOTAL_SETTINGS."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical visibility of one fixed analyzer grid.
    Visibility(VisibilityArgs),
    /// Search for the grid with the lowest critical visibility.
    Optimize(OptimizeArgs),
    /// Evaluate random grids of a fixed shape.
    Scan(ScanArgs),
    /// Exact small-scale demonstrations.
    Demo(DemoArgs),
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("source").required(true).args(["grid", "angles", "paper_5"])))]
struct VisibilityArgs {
    /// Settings file: one line per party, whitespace-separated angles in
    /// radians, `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    grid: Option<PathBuf>,

    /// Inline grid: per-party angle lists separated by `;`, e.g.
    /// "0 1.5708; 0 1.5708".
    #[arg(long, value_name = "LISTS")]
    angles: Option<String>,

    /// The five-setting reference grid.
    #[arg(long = "paper-5")]
    paper_5: bool,

    /// Also print the optimal mixture weights and row duals.
    #[arg(long)]
    certificate: bool,

    /// Write the LP in its text form to FILE before solving.
    #[arg(long, value_name = "FILE")]
    dump_lp: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the output to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["counts", "paper_2", "paper_3"])))]
struct OptimizeArgs {
    /// Setting counts per party, e.g. `--counts 3 3 3`.
    #[arg(long, num_args = 1.., value_name = "N")]
    counts: Vec<usize>,

    /// Spread a single `--counts` value over N parties.
    #[arg(long, value_name = "N", requires = "counts")]
    parties: Option<usize>,

    /// RNG seed for the restart starting points.
    #[arg(long, default_value_t = 0, conflicts_with_all = ["paper_2", "paper_3"])]
    seed: u64,

    /// Number of independent restarts.
    #[arg(long, default_value_t = 30, conflicts_with_all = ["paper_2", "paper_3"])]
    restarts: usize,

    /// Preset: the two-setting search (counts 2 2 2, seed 1, 30 restarts).
    #[arg(long = "paper-2")]
    paper_2: bool,

    /// Preset: the three-setting search (counts 3 3 3, seed 1, 30 restarts).
    #[arg(long = "paper-3")]
    paper_3: bool,

    /// Also write the best grid to FILE in the settings-file format.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(clap::Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["counts", "paper_4x4x4"])))]
struct ScanArgs {
    /// Setting counts per party, e.g. `--counts 4 4 4`.
    #[arg(long, num_args = 1.., value_name = "N")]
    counts: Vec<usize>,

    /// Spread a single `--counts` value over N parties.
    #[arg(long, value_name = "N", requires = "counts")]
    parties: Option<usize>,

    /// RNG seed for the grid draws.
    #[arg(long, default_value_t = 0, conflicts_with = "paper_4x4x4")]
    seed: u64,

    /// Number of random grids to draw.
    #[arg(
        long,
        value_name = "M",
        required_unless_present = "paper_4x4x4",
        conflicts_with = "paper_4x4x4"
    )]
    samples: Option<usize>,

    /// Preset: counts 4 4 4, 9000 samples, seed 1.
    #[arg(long = "paper-4x4x4")]
    paper_4x4x4: bool,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the output to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct DemoArgs {
    #[command(subcommand)]
    which: DemoKind,
}

#[derive(Subcommand)]
enum DemoKind {
    /// The inequality-free three-party contradiction, shown by exhaustion.
    Ghz,
    /// The two-party inequality at its maximally violating settings.
    Chsh {
        /// List every deterministic answer sheet and its combination value.
        #[arg(long)]
        classical: bool,
    },
}

/// A failed run: the message goes to stderr, the kind picks the exit code
/// (2 input, 3 cap, 4 solver).
enum Failure {
    Input(String),
    Cap(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Solver(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cap(m) | Failure::Solver(m) => m,
        }
    }
}

impl From<LibError> for Failure {
    fn from(e: LibError) -> Self {
        match e {
            LibError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            LibError::Numerical(_) => Failure::Solver(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cap = cap_from_env()?;
    match cli.command {
        Command::Visibility(args) => cmd_visibility(args, cap),
        Command::Optimize(args) => cmd_optimize(args, cap),
        Command::Scan(args) => cmd_scan(args, cap),
        Command::Demo(args) => {
            let text = match args.which {
                DemoKind::Ghz => render::ghz_transcript(&demos::ghz_paradox()),
                DemoKind::Chsh { classical } => render::chsh_transcript(classical),
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn cap_from_env() -> Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Input(format!("{CAP_ENV} must be a non-negative integer, got '{text}'"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_TOTAL_SETTINGS),
        Err(e) => Err(Failure::Input(format!("{CAP_ENV}: {e}"))),
    }
}

fn resolve_counts(counts: &[usize], parties: Option<usize>) -> Result<Vec<usize>, Failure> {
    match parties {
        None => Ok(counts.to_vec()),
        Some(n) if counts.len() == 1 => Ok(vec![counts[0]; n]),
        Some(n) if counts.len() == n => Ok(counts.to_vec()),
        Some(n) => Err(Failure::Input(format!(
            "--parties {n} does not match the {} values given to --counts",
            counts.len()
        ))),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: String, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_visibility(args: VisibilityArgs, cap: usize) -> Result<(), Failure> {
    let grid = if let Some(path) = &args.grid {
        let angles = gridfile::parse(&read_file(path)?)
            .map_err(|msg| Failure::Input(format!("{}: {msg}", path.display())))?;
        SettingsGrid::from_coplanar_angles(&angles)?
    } else if let Some(spec) = &args.angles {
        let angles = gridfile::parse_inline(spec).map_err(Failure::Input)?;
        SettingsGrid::from_coplanar_angles(&angles)?
    } else {
        grids::five_setting_reference()
    };

    let basis = lhv::build_basis_with(&grid, DedupMode::EvenFlips, cap)?;
    let problem = lp::build_problem_with_basis(Arc::new(basis), &grid)?;
    if let Some(path) = &args.dump_lp {
        let file = std::fs::File::create(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        lp::write_lp_format(&problem, std::io::BufWriter::new(file))
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }

    let solution = lp::solve_lp(&problem)?;
    if solution.status() == LpStatus::IterationLimit {
        return Err(Failure::Solver(format!(
            "simplex hit its iteration limit; best bound found: v_max >= {:.9}",
            solution.v_max().value()
        )));
    }
    emit(
        render::visibility(&grid, &solution, args.certificate, args.format),
        args.out.as_deref(),
    )
}

fn cmd_optimize(args: OptimizeArgs, cap: usize) -> Result<(), Failure> {
    let preset = |base: usize| {
        (
            vec![base; 3],
            SimplexConfig {
                restarts: 30,
                seed: 1,
                ..SimplexConfig::default()
            },
        )
    };
    let (counts, cfg) = if args.paper_2 {
        preset(2)
    } else if args.paper_3 {
        preset(3)
    } else {
        (
            resolve_counts(&args.counts, args.parties)?,
            SimplexConfig {
                restarts: args.restarts,
                seed: args.seed,
                ..SimplexConfig::default()
            },
        )
    };

    let report = optimizer::minimize_vmax_capped(&counts, &cfg, cap)?;
    if let Some(path) = &args.out {
        write_file(path, &gridfile::render(report.best_angles()))?;
    }
    print!("{}", render::optimize(&report, args.format));
    Ok(())
}

fn cmd_scan(args: ScanArgs, cap: usize) -> Result<(), Failure> {
    let (counts, samples, seed) = if args.paper_4x4x4 {
        (vec![4, 4, 4], 9000, 1)
    } else {
        (
            resolve_counts(&args.counts, args.parties)?,
            args.samples.expect("clap requires --samples without the preset"),
            args.seed,
        )
    };
    let report = optimizer::random_scan_capped(&counts, samples, seed, cap)?;
    emit(render::scan(&report, args.format), args.out.as_deref())
}
