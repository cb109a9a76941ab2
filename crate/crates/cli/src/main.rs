use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ternary_dht::dht::{check_realizable, FieldFn};
use ternary_dht::harness::{
    check_pair, emit_report, report_json, search_report, spectrum_csv, spectrum_report,
    verify_gauss, verify_hamming, verify_lemmas, verify_lin, ReportFormat, ScreenMode,
    VerificationReport,
};
use ternary_dht::sequences::{
    autocorrelation_csv, autocorrelation_rows, build_realized_sequence, is_ideal_two_level,
    lin_sequence, m_sequence, TernarySequence,
};
use ternary_dht::{Error, FieldContext};

#[derive(Parser)]
#[command(name = "ternary-dht")]
#[command(about = "Exact decimation-Hadamard transforms and two-level ternary sequences")]
#[command(version)]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Emit CSV where the command supports it
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,

    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Include wall-clock time in reports (makes output run-dependent)
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field construction
    #[command(subcommand)]
    Field(FieldCmd),
    /// Sequence generation and autocorrelation
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Multiplexing decimation-Hadamard transforms
    #[command(subcommand)]
    Dht(DhtCmd),
    /// End-to-end verification suites
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Gauss-sum identities
    #[command(subcommand)]
    Gauss(GaussCmd),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Print the modulus, order and primitive-element order of GF(3^n)
    Info {
        #[arg(long)]
        n: usize,
        /// Modulus coefficients c0,c1,...,cn (low degree first)
        #[arg(long, value_delimiter = ',')]
        poly: Option<Vec<u8>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    M,
    Lin,
    Dht,
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Generate a sequence and write it as JSON
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Required for the dht family
        #[arg(long)]
        v: Option<u64>,
        /// Required for the dht family
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact autocorrelation of a sequence file
    Autocorr { file: PathBuf },
}

#[derive(Args)]
struct Pair {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    v: u64,
    #[arg(long)]
    t: u64,
}

#[derive(Subcommand)]
enum DhtCmd {
    /// Second-order spectrum of the trace at gamma = alpha^R
    Spectrum {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        gamma: u64,
    },
    /// Decide realizability of one pair from the exact spectrum
    CheckPair {
        #[command(flatten)]
        pair: Pair,
    },
    /// Screen a rectangle of (v, t) pairs
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        v_from: u64,
        #[arg(long)]
        v_to: u64,
        #[arg(long)]
        t_from: u64,
        #[arg(long)]
        t_to: u64,
        #[arg(long, default_value = "both")]
        screen: String,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Lin sequence, Lin pair realizability and its trace form (odd n, 3..=9)
    Lin {
        #[arg(long)]
        n: usize,
    },
    /// The H(j) weight theorem, exhaustively (odd n, 3..=15)
    Hamming {
        #[arg(long)]
        n: usize,
    },
    /// Run-block and digit-weight lemma predicates
    Lemmas {
        #[arg(long)]
        n: usize,
        /// Random instances instead of the exhaustive domain
        #[arg(long)]
        samples: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GaussCmd {
    /// Gauss-sum identities over GF(3^n)
    Check {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

struct Output {
    format: ReportFormat,
    timing: bool,
    started: Instant,
}

impl Output {
    fn report(&self, mut report: VerificationReport) -> bool {
        if self.timing {
            report.elapsed_ms = Some(self.started.elapsed().as_millis() as u64);
        }
        print!("{}", emit_report(&report, self.format));
        report.pass
    }

    fn json(&self, mut value: Value) {
        if self.timing {
            value["elapsedMs"] = json!(self.started.elapsed().as_millis() as u64);
        }
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::InvalidArgument("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    let out = Output {
        format: if cli.json {
            ReportFormat::Json
        } else if cli.csv {
            ReportFormat::Csv
        } else {
            ReportFormat::Text
        },
        timing: cli.timing,
        started: Instant::now(),
    };
    let jobs = cli.jobs.unwrap_or_else(rayon::current_num_threads);

    match cli.command {
        Command::Field(FieldCmd::Info { n, poly }) => {
            let ctx = FieldContext::new(n, poly.as_deref())?;
            out.json(report_json(&ctx.info()));
            Ok(true)
        }
        Command::Seq(SeqCmd::Gen {
            family,
            n,
            v,
            t,
            out: path,
        }) => {
            let ctx = FieldContext::build(n)?;
            let seq = match family {
                FamilyArg::M => m_sequence(&ctx),
                FamilyArg::Lin => lin_sequence(&ctx)?,
                FamilyArg::Dht => {
                    let (Some(v), Some(t)) = (v, t) else {
                        return Err(Error::InvalidArgument(
                            "the dht family needs --v and --t".into(),
                        ));
                    };
                    let report = check_realizable(&ctx, &FieldFn::trace(&ctx), v, t)?;
                    if !report.realizable {
                        return Err(Error::NotRealizable { v, t });
                    }
                    build_realized_sequence(&ctx, &report)?
                }
            };
            fs::write(&path, seq.to_json() + "\n")
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            let mut report = VerificationReport::new("seq gen")
                .param("n", n)
                .param("out", path.display().to_string());
            report.summary("period", seq.period());
            report.summary("digitCounts", seq.digit_counts());
            Ok(out.report(report))
        }
        Command::Seq(SeqCmd::Autocorr { file }) => {
            let text = fs::read_to_string(&file)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", file.display())))?;
            let seq = TernarySequence::from_json(&text)?;
            let two_level = is_ideal_two_level(&seq);
            match out.format {
                ReportFormat::Csv => print!("{}", autocorrelation_csv(&seq)),
                ReportFormat::Json => out.json(report_json(&json!({
                    "n": seq.n,
                    "period": seq.period(),
                    "twoLevel": two_level,
                    "rows": autocorrelation_rows(&seq),
                }))),
                ReportFormat::Text => {
                    let mut report = VerificationReport::new("seq autocorr")
                        .param("file", file.display().to_string());
                    report.check("ideal-two-level", two_level);
                    report.summary("period", seq.period());
                    return Ok(out.report(report));
                }
            }
            Ok(two_level)
        }
        Command::Dht(DhtCmd::Spectrum { pair, gamma }) => {
            let s = spectrum_report(pair.n, pair.v, pair.t, gamma)?;
            match out.format {
                ReportFormat::Csv => print!("{}", spectrum_csv(&s)),
                _ => out.json(report_json(&s)),
            }
            Ok(true)
        }
        Command::Dht(DhtCmd::CheckPair { pair }) => {
            Ok(out.report(check_pair(pair.n, pair.v, pair.t)?))
        }
        Command::Dht(DhtCmd::Search {
            n,
            v_from,
            v_to,
            t_from,
            t_to,
            screen,
        }) => {
            let mode: ScreenMode = screen.parse()?;
            Ok(out.report(search_report(n, v_from..=v_to, t_from..=t_to, mode, jobs)?))
        }
        Command::Verify(VerifyCmd::Lin { n }) => Ok(out.report(verify_lin(n)?)),
        Command::Verify(VerifyCmd::Hamming { n }) => Ok(out.report(verify_hamming(n)?)),
        Command::Verify(VerifyCmd::Lemmas { n, samples }) => {
            Ok(out.report(verify_lemmas(n, samples, cli.seed)?))
        }
        Command::Gauss(GaussCmd::Check { n, tol }) => Ok(out.report(verify_gauss(n, tol)?)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
