use bfclab::adeg::{lp_limits, SINK_MAX_ARITY};
use bfclab::func::Limits;
use bfclab::measures::{measure_report, MeasureLimits, MeasureReport};
use bfclab::noisy::transcript_text;
use bfclab::verify::{self, VerificationReport, WalksConfig};
use bfclab::{zoo, Error, FnSpec, PartialFn};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Boolean function complexity lab.
#[derive(Parser)]
#[command(name = "bfclab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    out: Format,

    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,

    /// Include wall times in JSON reports (breaks byte-identical output).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct Inputs {
    /// Zoo functions, e.g. `or:4,sink:4`.
    #[arg(long, value_delimiter = ',')]
    zoo: Vec<String>,

    /// JSON function spec files.
    #[arg(long)]
    file: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// s, bs, fbs, deg and D for each input function.
    Measures {
        #[command(flatten)]
        inputs: Inputs,
        /// Default 14.
        #[arg(long)]
        max_arity: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// The block-sensitivity composition chain for `f ∘ g`; with no input,
    /// every pair of {or:3, xor:2, maj:3} x {and:2, xor:2}.
    VerifyBsChain {
        /// Exactly two functions: `f` then `g`.
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        eps: f64,
        /// Composed arity bound for LPs (default 12).
        #[arg(long)]
        max_arity: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Promise-OR of the given inner functions (default and:2,xor:2).
    VerifyPror {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        eps: f64,
        #[arg(long)]
        max_arity: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Paturi band over all symmetric functions up to `--n-max`, and the
    /// junta restriction example.
    VerifySymmetric {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        eps: f64,
        #[arg(long)]
        max_arity: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Amplification bounds, walk durations and bit-stream statistics.
    VerifyWalks {
        /// Low biases, each in (0, 0.1].
        #[arg(long, value_delimiter = ',', default_values_t = [0.02, 0.05, 0.1])]
        gamma_hat: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [4, 16, 64])]
        t: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        walks: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1_000_000)]
        bits: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the composed algorithm on `f ∘ GapMaj_t` for every input of
    /// `Dom(f)`.
    Simulate {
        /// One function (default or:2).
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 64)]
        t: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory for the first transcript of every input.
        #[arg(long)]
        transcripts: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Builds and checks the SINK_k approximating polynomial.
    SinkPoly {
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 1.0 / 3.0)]
        eps: f64,
        /// Polynomial output, one `mask coefficient` line per term.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        max_arity: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_resource_bound() {
        return 3;
    }
    match e {
        Error::Verification(_) | Error::Certificate { .. } | Error::LpStatus(_) | Error::MalformedLp(_) => 1,
        _ => 2,
    }
}

fn load(inputs: &Inputs) -> Result<Vec<(String, PartialFn)>, Failure> {
    let mut out = Vec::new();
    for name in inputs.zoo.iter().filter(|n| !n.trim().is_empty()) {
        out.push((name.trim().to_string(), zoo::by_name(name)?));
    }
    for path in &inputs.file {
        let spec = FnSpec::parse(&std::fs::read_to_string(path)?)?;
        let name = path.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned());
        out.push((name, spec.build()?));
    }
    Ok(out)
}

fn lp_bound(max_arity: Option<usize>) -> Limits {
    max_arity.map_or_else(lp_limits, |m| Limits { max_arity: m })
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_report(common: &Common, report: &VerificationReport) -> Result<u8, Failure> {
    let text = match common.out {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(common.timings) + "\n",
    };
    emit(common, &text)?;
    for line in report.failures().map(|c| format!("FAIL {}: {}", c.name, c.description)) {
        eprintln!("{line}");
    }
    Ok(report.exit_code() as u8)
}

fn measures(inputs: &Inputs, max_arity: Option<usize>, common: &Common) -> Result<u8, Failure> {
    let limits = max_arity.map_or_else(MeasureLimits::default, |m| MeasureLimits { max_arity: m });
    let rows = load(inputs)?
        .iter()
        .map(|(name, f)| measure_report(name, f, limits))
        .collect::<bfclab::Result<Vec<_>>>()?;
    let text = match common.out {
        Format::Csv => {
            let mut s = format!("{}\n", MeasureReport::CSV_HEADER);
            for r in &rows {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&rows).map_err(Error::from)? + "\n",
    };
    emit(common, &text)?;
    Ok(0)
}

fn check_eps(eps: f64) -> Result<(), Failure> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--eps {eps} outside (0, 1/2)")))
    }
}

fn run(command: &Command) -> Result<u8, Failure> {
    match command {
        Command::Measures {
            inputs,
            max_arity,
            common,
        } => measures(inputs, *max_arity, common),
        Command::VerifyBsChain {
            inputs,
            eps,
            max_arity,
            common,
        } => {
            check_eps(*eps)?;
            let limits = lp_bound(*max_arity);
            let fns = load(inputs)?;
            let pairs: Vec<((String, PartialFn), (String, PartialFn))> = match fns.as_slice() {
                [] => {
                    let outer = ["or:3", "xor:2", "maj:3"];
                    let inner = ["and:2", "xor:2"];
                    let named = |n: &str| zoo::by_name(n).map(|f| (n.replace(':', ""), f));
                    let mut v = Vec::new();
                    for f in outer {
                        for g in inner {
                            v.push((named(f)?, named(g)?));
                        }
                    }
                    v
                }
                [f, g] => vec![(f.clone(), g.clone())],
                _ => return Err(Failure::Usage("verify-bs-chain takes exactly two functions".into())),
            };
            let mut report = VerificationReport::new("bs-chain");
            for ((fname, f), (gname, g)) in &pairs {
                report.extend(verify::bs_chain(fname, f, gname, g, &limits, *eps)?);
            }
            emit_report(common, &report.finish())
        }
        Command::VerifyPror {
            inputs,
            eps,
            max_arity,
            common,
        } => {
            check_eps(*eps)?;
            let mut fns = load(inputs)?;
            if fns.is_empty() {
                fns = vec![
                    ("and2".into(), zoo::and(2)?),
                    ("xor2".into(), zoo::xor(2)?),
                ];
            }
            let (names, inner): (Vec<String>, Vec<PartialFn>) = fns.into_iter().unzip();
            emit_report(common, &verify::pror_study(&names, &inner, &lp_bound(*max_arity), *eps)?)
        }
        Command::VerifySymmetric {
            n_max,
            eps,
            max_arity,
            common,
        } => {
            check_eps(*eps)?;
            emit_report(common, &verify::symmetric_suite(&lp_bound(*max_arity), *n_max, *eps)?)
        }
        Command::VerifyWalks {
            gamma_hat,
            t,
            walks,
            samples,
            bits,
            seed,
            common,
        } => {
            let cfg = WalksConfig {
                gamma_hats: gamma_hat.clone(),
                ts: t.clone(),
                walks: *walks,
                prefix_samples: *samples,
                bits: *bits,
                seed: *seed,
            };
            emit_report(common, &verify::walks_suite(&cfg)?)
        }
        Command::Simulate {
            inputs,
            t,
            trials,
            seed,
            transcripts,
            common,
        } => {
            let mut fns = load(inputs)?;
            let (name, f) = match fns.len() {
                0 => ("or2".to_string(), zoo::or(2)?),
                1 => fns.remove(0),
                _ => return Err(Failure::Usage("simulate takes one function".into())),
            };
            let out = verify::simulate_suite(&name, &f, *t, *trials, *seed)?;
            if let Some(dir) = transcripts {
                std::fs::create_dir_all(dir)?;
                for (x, tr) in &out.transcripts {
                    std::fs::write(dir.join(format!("{name}-t{t}-x{x}.txt")), transcript_text(tr))?;
                }
            }
            emit_report(common, &out.report)
        }
        Command::SinkPoly {
            k,
            eps,
            witness,
            max_arity,
            common,
        } => {
            check_eps(*eps)?;
            let limits = Limits {
                max_arity: max_arity.unwrap_or(SINK_MAX_ARITY),
            };
            let (report, poly) = verify::sink_suite(&limits, *k, *eps)?;
            if let Some(path) = witness {
                std::fs::write(path, poly.poly.to_text())?;
            }
            emit_report(common, &report)
        }
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Measures { common, .. }
        | Command::VerifyBsChain { common, .. }
        | Command::VerifyPror { common, .. }
        | Command::VerifySymmetric { common, .. }
        | Command::VerifyWalks { common, .. }
        | Command::Simulate { common, .. }
        | Command::SinkPoly { common, .. } => common,
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
    if let Some(jobs) = common(&cli.command).jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
