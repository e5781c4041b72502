use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use localtype::io::{
    parse_records, parse_table, run_aux_prime, run_classify, run_oracle, tables, write_reports_csv,
    write_reports_json, AuxRequest, FieldSpec, IoError, OracleCase, OracleOptions, Status,
};

#[derive(Parser)]
#[command(name = "localtype", version, about = "Local types at a prime from quadratic-twist data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Gauss,
    Ps,
    ScUnram,
    ScRam,
}

impl From<Case> for OracleCase {
    fn from(c: Case) -> Self {
        match c {
            Case::Gauss => OracleCase::Gauss,
            Case::Ps => OracleCase::Ps,
            Case::ScUnram => OracleCase::ScUnram,
            Case::ScRam => OracleCase::ScRam,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify JSON-lines observation records.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the twist sign rules against explicit finite sums.
    Oracle {
        #[arg(long, value_enum)]
        case: Case,
        #[arg(long)]
        p_max: u64,
        #[arg(long, default_value_t = 3)]
        p_min: u64,
        /// Largest p^a enumerated by the gauss and ps cases.
        #[arg(long, default_value_t = 350)]
        max_modulus: u64,
        #[arg(long, default_value_t = 2)]
        weight: u32,
    },
    /// Find a prime making the twisting character trivial on totally positive units.
    AuxPrime {
        #[arg(long, conflicts_with = "table", required_unless_present = "table")]
        d: Option<i64>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        target_prime: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        /// Square root of d mod the target prime fixing the prime ideal.
        #[arg(long)]
        root: Option<u64>,
        /// Search even when no auxiliary prime is needed.
        #[arg(long)]
        force: bool,
    },
    /// Print the types allowed at a level exponent.
    Tables {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        val: u32,
    },
}

fn open(path: &PathBuf) -> Result<BufReader<File>, IoError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| IoError::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<u8, IoError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Classify { input, format } => {
            let records = parse_records(open(&input)?)?;
            let reports = run_classify(&records);
            match format {
                Format::Json => write_reports_json(&reports, &mut out)?,
                Format::Csv => write_reports_csv(&reports, &mut out)?,
            }
            let bad = reports.iter().any(|r| r.status == Status::Inconsistent);
            Ok(u8::from(bad))
        }
        Command::Oracle {
            case,
            p_max,
            p_min,
            max_modulus,
            weight,
        } => {
            let opts = OracleOptions {
                p_min,
                p_max,
                max_modulus,
                weight,
            };
            let report = run_oracle(case.into(), &opts)?;
            for check in &report.checks {
                serde_json::to_writer(&mut out, check)?;
                writeln!(out)?;
            }
            writeln!(
                out,
                "{}",
                serde_json::json!({"checked": report.checked, "failed": report.failed})
            )?;
            Ok(u8::from(!report.all_pass()))
        }
        Command::AuxPrime {
            d,
            table,
            target_prime,
            bound,
            root,
            force,
        } => {
            let field = match (d, table) {
                (Some(d), _) => FieldSpec::Quadratic(d),
                (None, Some(path)) => FieldSpec::Table(parse_table(open(&path)?)?),
                (None, None) => return Err(IoError::Usage("give --d or --table".into())),
            };
            let outcome = run_aux_prime(&AuxRequest {
                field,
                target_prime,
                root,
                bound,
                force,
            })?;
            writeln!(out, "{outcome}")?;
            Ok(0)
        }
        Command::Tables { p, val } => {
            writeln!(out, "{}", tables(p, val)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        // A closed downstream pipe (e.g. `| head`) is not an error.
        Err(IoError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
