use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sds_core::boundscalc::{
    depth_threshold, derivative_bound, normalized_height, raw_height, required_depth,
    theorem1_bound,
};
use sds_core::golden::{run_golden, EXAMPLE1_TEXT};
use sds_core::polyring::{parse_form, parse_system, serialize_form};
use sds_core::rational::parse_rational;
use sds_core::sdsengine::{
    replay_cell_certificate, replay_certificate, sds_search, CellCertificate, Certificate, Goal,
    SdsConfig, Traversal, Verdict, CELL_CERTIFICATE_HEADER, CERTIFICATE_HEADER,
};
use sds_core::zerodetect::{
    detect_zero_with, replay_zero_report, theorem2_threshold, SystemInput, ZeroConfig,
    ZeroReport, ZeroVerdict, ZERO_REPORT_HEADER,
};
use sds_core::{expand, sign_classify, Error, Form, PermutationWord, RationalPoint, SimplexMatrix};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;

/// Exact sign certificates for forms on the standard simplex.
#[derive(Parser)]
#[command(name = "sds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print f(M X) for a cell matrix or a permutation word.
    Expand {
        form: PathBuf,
        #[command(flatten)]
        cell: CellArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the sign class of f, or of f(M X) when a cell is given.
    Classify {
        form: PathBuf,
        #[command(flatten)]
        cell: CellArgs,
    },
    /// Print numeric bounds for a form, or for a system with --system.
    Bound {
        input: PathBuf,
        /// Point of the simplex for the sign-preserving diameter.
        #[arg(long, conflicts_with_all = ["lambda_lower", "system"])]
        point: Option<String>,
        /// Lower bound on the minimum of f over the simplex.
        #[arg(long, conflicts_with = "system")]
        lambda_lower: Option<String>,
        /// Treat the input as a system and print the zero-detection threshold.
        #[arg(long)]
        system: bool,
    },
    /// Search for a positivity certificate or a negative witness.
    Prove {
        form: PathBuf,
        /// positive | nonneg | decide
        #[arg(long, default_value = "positive", value_parser = parse_goal)]
        goal: Goal,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Look for a common zero of a "---"-separated system on the simplex.
    FindZero {
        system: PathBuf,
        #[arg(long, default_value_t = sds_core::zerodetect::DEFAULT_BUDGET)]
        budget: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a certificate or zero report against its input.
    Replay { input: PathBuf, certificate: PathBuf },
    /// Run the built-in golden suite.
    SelfTest {
        /// Example 1 file to check instead of the embedded copy.
        #[arg(long)]
        example1: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CellArgs {
    /// File with n rows of n rationals.
    #[arg(long, conflicts_with = "word")]
    matrix: Option<PathBuf>,
    /// Comma-separated permutations in one-line notation, e.g. 132,213.
    #[arg(long)]
    word: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// bfs | dfs
    #[arg(long, default_value = "bfs", value_parser = parse_traversal)]
    traversal: Traversal,
    #[arg(long, default_value_t = SdsConfig::default().node_cap)]
    node_cap: usize,
    /// Worker threads, or "max". Capped by SDS_WORKERS.
    #[arg(long, default_value = "1", value_parser = parse_workers)]
    workers: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_goal(s: &str) -> Result<Goal, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_traversal(s: &str) -> Result<Traversal, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_workers(s: &str) -> Result<usize, String> {
    if s == "max" {
        return Ok(std::thread::available_parallelism().map_or(1, |n| n.get()));
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive count or \"max\", got {s:?}")),
        Ok(n) => Ok(n),
    }
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EX_USAGE, message: message.into() }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EX_NOINPUT,
        message: format!("{}: {e}", path.display()),
    })
}

/// Maps library errors to exit statuses, tagging them with the file.
fn at(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure {
        code: if e.is_parse() { EX_USAGE } else { EX_DATAERR },
        message: format!("{}: {e}", path.display()),
    }
}

fn data_err(e: Error) -> Failure {
    Failure { code: EX_DATAERR, message: e.to_string() }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure {
            code: EX_NOINPUT,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_form(path: &Path) -> Result<Form, Failure> {
    parse_form(&read(path)?).map_err(at(path))
}

fn load_system(path: &Path) -> Result<SystemInput, Failure> {
    let forms = parse_system(&read(path)?).map_err(at(path))?;
    SystemInput::new(forms).map_err(at(path))
}

fn load_cell(cell: &CellArgs, n: usize) -> Result<Option<SimplexMatrix>, Failure> {
    if let Some(p) = &cell.matrix {
        let m = SimplexMatrix::parse(&read(p)?).map_err(at(p))?;
        return Ok(Some(m));
    }
    if let Some(w) = &cell.word {
        let word: PermutationWord = w
            .parse()
            .map_err(|e: Error| Failure::usage(format!("--word: {e}")))?;
        let m = SimplexMatrix::product_chain(&word, n).map_err(|e| Failure::usage(format!("--word: {e}")))?;
        return Ok(Some(m));
    }
    Ok(None)
}

fn cell_form(form: &Path, cell: &CellArgs) -> Result<Form, Failure> {
    let f = load_form(form)?;
    match load_cell(cell, f.n())? {
        Some(m) => expand(&f, &m).map_err(data_err),
        None => Ok(f),
    }
}

fn bound(input: &Path, point: Option<&str>, lambda: Option<&str>, system: bool) -> Outcome {
    if system {
        let sys = load_system(input)?;
        let b = theorem2_threshold(&sys).map_err(data_err)?;
        let mut text = b.threshold.to_text();
        text.push_str(&format!("theoretical_depth={}\n", b.theoretical_depth));
        emit(&text, None)?;
        return Ok(0);
    }
    let f = load_form(input)?;
    let mut text = String::new();
    if let Some(p) = point {
        let p = RationalPoint::parse(p)
            .ok_or_else(|| Failure::usage(format!("--point: cannot parse {p:?}")))?;
        text.push_str(&theorem1_bound(&f, &p).map_err(data_err)?.to_text());
    } else if let Some(l) = lambda {
        let l = parse_rational(l)
            .ok_or_else(|| Failure::usage(format!("--lambda-lower: cannot parse {l:?}")))?;
        let r = depth_threshold(&f, &l).map_err(data_err)?;
        let depth = required_depth(f.n(), &r.threshold()).map_err(data_err)?;
        text.push_str(&r.to_text());
        text.push_str(&format!("required_depth={depth}\n"));
    } else {
        let lf = normalized_height(&f).map_err(data_err)?;
        let h = raw_height(&f).map_err(data_err)?;
        let db = derivative_bound(&f).map_err(data_err)?;
        text.push_str(&format!("L_f={lf}\nH={h}\nderivative_bound={db}\n"));
    }
    emit(&text, None)?;
    Ok(0)
}

fn prove(form: &Path, goal: Goal, max_depth: usize, s: &SearchArgs) -> Outcome {
    let f = load_form(form)?;
    let config = SdsConfig {
        max_depth,
        goal,
        traversal: s.traversal,
        node_cap: s.node_cap,
        workers: s.workers,
    };
    let cert = sds_search(&f, &config).map_err(data_err)?;
    emit(&cert.to_text(), s.output.as_deref())?;
    Ok(match cert.verdict {
        Verdict::Positive | Verdict::Nonnegative => 0,
        Verdict::NegativeWitness => 1,
        Verdict::Undecided => 2,
    })
}

fn find_zero(system: &Path, budget: usize, s: &SearchArgs) -> Outcome {
    let sys = load_system(system)?;
    let config = ZeroConfig {
        budget_depth: budget,
        traversal: s.traversal,
        node_cap: s.node_cap,
        workers: s.workers,
    };
    let report = detect_zero_with(&sys, &config).map_err(data_err)?;
    emit(&report.to_text(), s.output.as_deref())?;
    Ok(match report.verdict {
        ZeroVerdict::ZeroFound => 0,
        ZeroVerdict::NoZero => 1,
        ZeroVerdict::Undecided => 2,
    })
}

fn replay(input: &Path, certificate: &Path) -> Outcome {
    let text = read(certificate)?;
    let header = text.lines().next().unwrap_or("").trim();
    let valid = match header {
        h if h == CERTIFICATE_HEADER => {
            let cert = Certificate::parse(&text).map_err(at(certificate))?;
            replay_certificate(&load_form(input)?, &cert).map_err(at(certificate))?
        }
        h if h == CELL_CERTIFICATE_HEADER => {
            let cert = CellCertificate::parse(&text).map_err(at(certificate))?;
            replay_cell_certificate(&load_form(input)?, &cert).map_err(at(certificate))?
        }
        h if h == ZERO_REPORT_HEADER => {
            let report = ZeroReport::parse(&text).map_err(at(certificate))?;
            replay_zero_report(&load_system(input)?, &report).map_err(at(certificate))?
        }
        _ => {
            return Err(Failure {
                code: EX_USAGE,
                message: format!("{}:1: unrecognized certificate header", certificate.display()),
            })
        }
    };
    println!("{}", if valid { "valid" } else { "invalid" });
    Ok(if valid { 0 } else { 1 })
}

fn self_test(example1: Option<&Path>) -> Outcome {
    let text = match example1 {
        Some(p) => read(p)?,
        None => EXAMPLE1_TEXT.to_string(),
    };
    let items = run_golden(&text);
    for it in &items {
        match &it.outcome {
            Ok(()) => println!("PASS {}", it.name),
            Err(why) => println!("FAIL {}: {why}", it.name),
        }
    }
    let failed = items.iter().filter(|i| !i.passed()).count();
    println!("{} passed, {failed} failed", items.len() - failed);
    Ok(u8::from(failed > 0))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Expand { form, cell, output } => {
            emit(&serialize_form(&cell_form(&form, &cell)?), output.as_deref())?;
            Ok(0)
        }
        Command::Classify { form, cell } => {
            println!("{}", sign_classify(&cell_form(&form, &cell)?));
            Ok(0)
        }
        Command::Bound { input, point, lambda_lower, system } => {
            bound(&input, point.as_deref(), lambda_lower.as_deref(), system)
        }
        Command::Prove { form, goal, max_depth, search } => prove(&form, goal, max_depth, &search),
        Command::FindZero { system, budget, search } => find_zero(&system, budget, &search),
        Command::Replay { input, certificate } => replay(&input, &certificate),
        Command::SelfTest { example1 } => self_test(example1.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EX_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("sds: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
