use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use speh_kit::derivative::{derivative_ladder, highest_shifted_derivative};
use speh_kit::distinction::{end_of_complementary_series, is_distinguished};
use speh_kit::dsl::{evaluate, parse_rational, parse_segment, print_canonical};
use speh_kit::enumerate::{cross_check, enumerate, CrossCheckOptions, UniverseSpec};
use speh_kit::rational::fmt_rational;
use speh_kit::{Alphabet, Exponent};

#[derive(Parser)]
#[command(name = "speh-kit", version, about = "Distinction calculator for unitary representations of GL(n)")]
struct Cli {
    /// Alphabet file declaring the cuspidal symbols.
    #[arg(long, global = true, value_name = "FILE")]
    alphabet: Option<PathBuf>,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide sigma-distinction (exit 0 if distinguished, 1 if not).
    Check { expr: String },
    /// Print the proof trace of the distinction verdict.
    Trace { expr: String },
    /// Print the canonical form.
    Canonical { expr: String },
    /// Highest shifted derivative, or the whole ladder with --ladder.
    Derive {
        expr: String,
        #[arg(long)]
        ladder: bool,
    },
    /// Langlands data with centers.
    Langlands { expr: String },
    /// The two subquotients of pi(u(SEGMENT,K),1/2).
    #[command(name = "end-cs")]
    EndCs {
        segment: String,
        #[arg(allow_hyphen_values = true)]
        k: i64,
    },
    /// List every canonical representation of a bounded universe.
    Enumerate(UniverseArgs),
    /// Cross-check every rule over a bounded universe (exit 0 iff no counterexample).
    Selfcheck {
        #[command(flatten)]
        universe: UniverseArgs,
        /// Flip this symbol's parity on the engine side to test the harness.
        #[arg(long, hide = true, value_name = "ID")]
        inject_parity_flip: Option<String>,
    },
}

#[derive(Args)]
struct UniverseArgs {
    #[arg(long)]
    max_degree: u64,
    #[arg(long)]
    max_k: u32,
    /// Comma-separated rationals in (0, 1/2), e.g. `1/4,1/3`.
    #[arg(long, default_value = "")]
    alpha_grid: String,
}

#[derive(Serialize)]
struct CheckJson {
    version: u32,
    canonical: String,
    distinguished: bool,
}

#[derive(Serialize)]
struct CanonicalJson {
    version: u32,
    canonical: String,
    degree: u64,
}

#[derive(Serialize)]
struct DeriveJson {
    version: u32,
    input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivative: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ladder: Option<Vec<String>>,
}

#[derive(Serialize)]
struct LanglandsSegment {
    segment: String,
    center: String,
    degree: u64,
}

#[derive(Serialize)]
struct LanglandsJson {
    version: u32,
    canonical: String,
    segments: Vec<LanglandsSegment>,
}

#[derive(Serialize)]
struct EndCsJson {
    version: u32,
    segment: String,
    k: i64,
    subquotients: [String; 2],
}

#[derive(Serialize)]
struct EnumerateJson {
    version: u32,
    count: usize,
    representations: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_alphabet(cli: &Cli) -> Result<Alphabet, String> {
    let path = cli.alphabet.as_ref().ok_or("--alphabet FILE is required")?;
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Alphabet::load(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn universe(alphabet: Alphabet, args: &UniverseArgs) -> Result<UniverseSpec, String> {
    let grid = args
        .alpha_grid
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(|e| format!("--alpha-grid `{s}`: {e}")))
        .collect::<Result<Vec<Exponent>, String>>()?;
    UniverseSpec::new(alphabet, args.max_degree, args.max_k, grid).map_err(|e| e.to_string())
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let alphabet = load_alphabet(cli)?;
    let a = &alphabet;
    let eval = |text: &str| evaluate(text, a).map_err(|e| e.to_string());

    match &cli.command {
        Command::Check { expr } => {
            let rep = eval(expr)?;
            let verdict = is_distinguished(&rep, a).verdict;
            if cli.json {
                print_json(&CheckJson {
                    version: 1,
                    canonical: print_canonical(&rep, a),
                    distinguished: verdict,
                });
            } else {
                println!("{}", if verdict { "DISTINGUISHED" } else { "NOT-DISTINGUISHED" });
            }
            return Ok(if verdict { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Trace { expr } => {
            let trace = is_distinguished(&eval(expr)?, a);
            if cli.json {
                println!("{}", trace.to_json_pretty());
            } else {
                print!("{trace}");
            }
        }
        Command::Canonical { expr } => {
            let rep = eval(expr)?;
            if cli.json {
                print_json(&CanonicalJson {
                    version: 1,
                    canonical: print_canonical(&rep, a),
                    degree: rep.degree(),
                });
            } else {
                println!("{}", print_canonical(&rep, a));
            }
        }
        Command::Derive { expr, ladder } => {
            let rep = eval(expr)?;
            let steps: Vec<String> = if *ladder {
                derivative_ladder(&rep).iter().map(|r| print_canonical(r, a)).collect()
            } else {
                vec![print_canonical(&highest_shifted_derivative(&rep), a)]
            };
            if cli.json {
                let input = print_canonical(&rep, a);
                let out = if *ladder {
                    DeriveJson { version: 1, input, derivative: None, ladder: Some(steps) }
                } else {
                    DeriveJson { version: 1, input, derivative: steps.into_iter().next(), ladder: None }
                };
                print_json(&out);
            } else {
                for s in steps {
                    println!("{s}");
                }
            }
        }
        Command::Langlands { expr } => {
            let rep = eval(expr)?;
            let segments: Vec<LanglandsSegment> = rep
                .langlands_data()
                .iter()
                .map(|s| LanglandsSegment {
                    segment: s.display(a).to_string(),
                    center: fmt_rational(&s.center()),
                    degree: s.degree(),
                })
                .collect();
            if cli.json {
                print_json(&LanglandsJson {
                    version: 1,
                    canonical: print_canonical(&rep, a),
                    segments,
                });
            } else {
                for s in segments {
                    println!("{}\tcenter {}", s.segment, s.center);
                }
            }
        }
        Command::EndCs { segment, k } => {
            let delta = parse_segment(segment, a).map_err(|e| e.to_string())?;
            let (first, second) = end_of_complementary_series(&delta, *k).map_err(|e| e.to_string())?;
            let (first, second) = (print_canonical(&first, a), print_canonical(&second, a));
            if cli.json {
                print_json(&EndCsJson {
                    version: 1,
                    segment: delta.display(a).to_string(),
                    k: *k,
                    subquotients: [first, second],
                });
            } else {
                println!("{first}");
                println!("{second}");
            }
        }
        Command::Enumerate(args) => {
            let spec = universe(alphabet.clone(), args)?;
            let reps: Vec<String> = enumerate(&spec).iter().map(|r| print_canonical(r, a)).collect();
            if cli.json {
                print_json(&EnumerateJson {
                    version: 1,
                    count: reps.len(),
                    representations: reps,
                });
            } else {
                for r in reps {
                    println!("{r}");
                }
            }
        }
        Command::Selfcheck {
            universe: args,
            inject_parity_flip,
        } => {
            let spec = universe(alphabet.clone(), args)?;
            let options = CrossCheckOptions {
                inject_parity_flip: inject_parity_flip.clone(),
            };
            let report = cross_check(&spec, &options).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{report}");
            }
            return Ok(if report.success() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}
