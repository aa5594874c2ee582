//! Command line front end for UDL: check programs, run them, benchmark the
//! checked evaluator against the stripped one, and dump unit tables.
//!
//! Exit codes: 0 on success, 1 when diagnostics were reported, 2 for usage
//! and I/O problems, 3 when a checked program fails at runtime.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use udl::lang::check::{CheckOptions, DimEncoding, TypedProgram};
use udl::{
    analyze, eval_checked, eval_fast, format_output, instrument, Diagnostic, EncodingConfig,
    OutputRecord, Precision, UnitSystem,
};

#[derive(Parser)]
#[command(name = "udl", version, about = "Dimension checker and evaluator for UDL programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check programs and report diagnostics without evaluating.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Check one program, evaluate it, and print its records.
    Run {
        file: PathBuf,
        /// Evaluate without any runtime dimension bookkeeping. The program
        /// is fully checked first either way.
        #[arg(long)]
        fast: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Evaluate a checked program repeatedly in both modes and report wall
    /// times, dimension-operation counters, and output equality.
    Bench {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        iterations: u64,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print every unit and constant a program defines, with dimension,
    /// factor, and (under the packed encoding) the packed dimension code.
    DumpUnits {
        file: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Dimension representation used while checking and during checked runs.
    #[arg(long, value_enum, default_value_t = EncodingArg::Packed)]
    encoding: EncodingArg,
    /// Radix of the packed encoding's digit places.
    #[arg(long, default_value_t = 10)]
    radix: i64,
    /// Raw packed-integer arithmetic without capacity checks, reproducing
    /// the aliasing of plain template arithmetic. Implies the packed
    /// encoding.
    #[arg(long)]
    compat: bool,
    /// Precision given to expression leaves in `let` and `print` statements.
    #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EncodingArg {
    Vector,
    Packed,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Single,
    Double,
}

/// The number of dimension axes a program may declare. Seven covers the SI
/// base dimensions; at radix 10 the packed codes stay well inside i64.
const AXES: usize = 7;

struct Config {
    encoding: DimEncoding,
    strict: bool,
    radix: i64,
    precision: Precision,
}

impl Config {
    fn from_args(args: &ConfigArgs) -> Result<Self, String> {
        if args.compat && args.encoding == EncodingArg::Vector {
            return Err("--compat implies the packed encoding; it cannot combine with --encoding vector".into());
        }
        Ok(Config {
            encoding: match args.encoding {
                EncodingArg::Vector => DimEncoding::Vector,
                EncodingArg::Packed => DimEncoding::Packed,
            },
            strict: !args.compat,
            radix: args.radix,
            precision: match args.precision {
                PrecisionArg::Single => Precision::Single,
                PrecisionArg::Double => Precision::Double,
            },
        })
    }

    fn system(&self) -> Result<UnitSystem, String> {
        let cfg = EncodingConfig::new(AXES, self.radix, self.strict)
            .map_err(|e| format!("invalid encoding configuration: {e}"))?;
        Ok(UnitSystem::new(cfg))
    }

    fn options(&self) -> CheckOptions {
        CheckOptions { encoding: self.encoding, default_precision: self.precision }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// `Err` carries usage and I/O problems (exit 2); `Ok` carries the exit
/// status of a command that at least got to run.
fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check { files, config } => cmd_check(&files, &Config::from_args(&config)?),
        Command::Run { file, fast, config } => cmd_run(&file, fast, &Config::from_args(&config)?),
        Command::Bench { file, iterations, config } => {
            cmd_bench(&file, iterations, &Config::from_args(&config)?)
        }
        Command::DumpUnits { file, config } => cmd_dump_units(&file, &Config::from_args(&config)?),
    }
}

fn read_source(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load(path: &Path, config: &Config) -> Result<Result<TypedProgram, Vec<Diagnostic>>, String> {
    let source = read_source(path)?;
    let system = config.system()?;
    Ok(analyze(&path.display().to_string(), &source, system, &config.options()))
}

fn report(diags: &[Diagnostic]) {
    for diag in diags {
        eprintln!("{diag}");
    }
}

fn cmd_check(files: &[PathBuf], config: &Config) -> Result<ExitCode, String> {
    let mut clean = true;
    for path in files {
        if let Err(diags) = load(path, config)? {
            report(&diags);
            clean = false;
        }
    }
    Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_run(path: &Path, fast: bool, config: &Config) -> Result<ExitCode, String> {
    let tp = match load(path, config)? {
        Ok(tp) => tp,
        Err(diags) => {
            report(&diags);
            return Ok(ExitCode::from(1));
        }
    };
    let result = if fast { eval_fast(&tp) } else { eval_checked(&tp) };
    match result {
        Ok(records) => {
            for record in &records {
                println!("{}", format_output(record));
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(diag) => {
            eprintln!("{diag}");
            Ok(ExitCode::from(3))
        }
    }
}

fn cmd_bench(path: &Path, iterations: u64, config: &Config) -> Result<ExitCode, String> {
    let tp = match load(path, config)? {
        Ok(tp) => tp,
        Err(diags) => {
            report(&diags);
            return Ok(ExitCode::from(1));
        }
    };

    let checked_records = match eval_checked(&tp) {
        Ok(records) => records,
        Err(diag) => {
            eprintln!("{diag}");
            return Ok(ExitCode::from(3));
        }
    };
    let fast_records = eval_fast(&tp).expect("fast eval fails only where checked eval does");
    let outputs_equal = records_equal(&checked_records, &fast_records);

    instrument::reset();
    let start = Instant::now();
    for _ in 0..iterations {
        std::hint::black_box(eval_checked(std::hint::black_box(&tp)).unwrap());
    }
    let checked_wall = start.elapsed().as_secs_f64();
    let checked_ops = instrument::snapshot().dim_ops;

    instrument::reset();
    let start = Instant::now();
    for _ in 0..iterations {
        std::hint::black_box(eval_fast(std::hint::black_box(&tp)).unwrap());
    }
    let fast_wall = start.elapsed().as_secs_f64();
    let fast_ops = instrument::snapshot().dim_ops;

    println!("iterations: {iterations}");
    println!("dim-ops-per-eval: {}", tp.runtime_dim_ops_per_eval());
    println!("checked-wall-s: {checked_wall:.6}");
    println!("checked-dim-ops: {checked_ops}");
    println!("fast-wall-s: {fast_wall:.6}");
    println!("fast-dim-ops: {fast_ops}");
    println!("outputs-equal: {outputs_equal}");
    Ok(ExitCode::SUCCESS)
}

fn records_equal(a: &[OutputRecord], b: &[OutputRecord]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.label == y.label
                && x.unit_text == y.unit_text
                && x.value.to_bits() == y.value.to_bits()
        })
}

fn cmd_dump_units(path: &Path, config: &Config) -> Result<ExitCode, String> {
    let tp = match load(path, config)? {
        Ok(tp) => tp,
        Err(diags) => {
            report(&diags);
            return Ok(ExitCode::from(1));
        }
    };
    let system = &tp.system;
    let packed = tp.encoding == DimEncoding::Packed;
    let emit = |symbol: &str, dim: &udl::DimVector, value: f64| {
        let mut line = format!("{symbol}  {}  {value}", system.dim_display(dim));
        if packed {
            // Checked definitions always fit the digit window under a strict
            // config, and the compat pack wraps the way compat arithmetic
            // does everywhere else.
            let code = dim.pack(system.cfg()).expect("checked definitions pack");
            line.push_str(&format!("  {}", code.code()));
        }
        println!("{line}");
    };
    for unit in system.units() {
        emit(unit.symbol(), unit.dim(), unit.factor());
    }
    for (name, quantity) in system.constants() {
        emit(name, quantity.dim(), quantity.value());
    }
    Ok(ExitCode::SUCCESS)
}
