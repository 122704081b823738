use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use butson::bhcore::{BhObject, ObjectFile};
use butson::census::{run_census, Bounds, Mode};
use butson::constructions::{cyclic_bh, perfect_array};
use butson::existence::{classify, Verdict};
use butson::numtheory;

/// Usage and I/O errors; 1 and 2 are verdicts.
const EXIT_ERROR: u8 = 64;

#[derive(Parser)]
#[command(name = "bh", version, about = "Group-invariant Butson Hadamard matrices over cyclic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Attribution {
    Staged,
    Independent,
}

#[derive(Subcommand)]
enum Command {
    /// Decide BH(Z_n, h). Exit 0 exists, 1 does not exist, 2 open.
    Classify {
        n: u64,
        h: u64,
        #[arg(long)]
        json: bool,
    },
    /// Sweep a grid of (n, h) pairs.
    Census {
        #[arg(long, default_value_t = 1)]
        n_min: u64,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        h_min: u64,
        #[arg(long, default_value_t = 100)]
        h_max: u64,
        #[arg(long, value_enum, default_value = "staged")]
        attribution: Attribution,
        /// CSV for a .csv path, full JSON report otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Build a verified BH(Z_n, h).
    Construct {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a matrix or array file. Exit 0 pass, 1 fail.
    Verify { file: PathBuf },
    /// Build a verified perfect array.
    Array {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number-theoretic helpers.
    Tools {
        #[command(subcommand)]
        tool: Tool,
    },
}

#[derive(Subcommand)]
enum Tool {
    /// Prime factorization.
    Factor { n: u64 },
    /// Multiplicative order of b modulo m.
    Ord { m: u64, b: u64 },
    /// Field-descent value F(m, n).
    FValue { m: u64, n: u64 },
    /// Whether p is self-conjugate modulo n.
    Selfconj { p: u64, n: u64 },
}

type CliResult = Result<ExitCode, Box<dyn std::error::Error>>;

fn emit(file: &ObjectFile, out: Option<PathBuf>) -> Result<(), Box<dyn std::error::Error>> {
    match out {
        Some(path) => file.write(&path)?,
        None => println!("{}", file.to_json()),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Classify { n, h, json } => {
            if n == 0 || h == 0 {
                return Err("n and h must be positive".into());
            }
            let verdict = classify(n, h);
            if json {
                println!("{}", serde_json::to_string(&verdict)?);
            } else {
                match &verdict {
                    Verdict::Exists { method } => println!("EXISTS {method}"),
                    Verdict::NotExists { rule, certificate } => {
                        println!("NONEXISTENT {rule} {}", serde_json::to_string(certificate)?)
                    }
                    Verdict::Open => println!("OPEN"),
                }
            }
            Ok(ExitCode::from(match verdict {
                Verdict::Exists { .. } => 0,
                Verdict::NotExists { .. } => 1,
                Verdict::Open => 2,
            }))
        }
        Command::Census {
            n_min,
            n_max,
            h_min,
            h_max,
            attribution,
            out,
            summary,
            jobs,
        } => {
            let bounds = Bounds::new(n_min, n_max, h_min, h_max)?;
            let mode = match attribution {
                Attribution::Staged => Mode::Staged,
                Attribution::Independent => Mode::Independent,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()?;
            let report = pool.install(|| run_census(bounds, mode))?;
            if let Some(path) = out {
                report.export(&path)?;
            }
            if let Some(path) = summary {
                report.write_summary(&path)?;
            }
            println!("{}", serde_json::to_string_pretty(&report.summary)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Construct { n, h, out } => {
            let m = cyclic_bh(n, h)?;
            emit(&m.to_file(), out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file } => {
            let object = ObjectFile::read(&file)?;
            let ok = object.verify();
            let what = match &object {
                BhObject::Matrix(m) => format!("BH({}, {})", m.group(), m.alphabet()),
                BhObject::Array(a) => format!("{:?} array over {} phases", a.dims(), a.alphabet()),
            };
            println!("{} {what}", if ok { "PASS" } else { "FAIL" });
            Ok(ExitCode::from(u8::from(!ok)))
        }
        Command::Array { dims, h, out } => {
            let a = perfect_array(&dims, h)?;
            emit(&a.to_file(), out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tools { tool } => {
            match tool {
                Tool::Factor { n } => {
                    let f = numtheory::factorize(n)?;
                    let parts: Vec<String> = f.factors().iter().map(|(p, e)| format!("{p}^{e}")).collect();
                    println!("{}", if parts.is_empty() { "1".into() } else { parts.join(" * ") });
                }
                Tool::Ord { m, b } => println!("{}", numtheory::ord(m, b)?),
                Tool::FValue { m, n } => println!("{}", numtheory::field_descent_f(m, n)?),
                Tool::Selfconj { p, n } => {
                    if !numtheory::is_prime(p) || n == 0 {
                        return Err("expected a prime p and a positive n".into());
                    }
                    println!("{}", numtheory::is_self_conjugate(p, n));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
