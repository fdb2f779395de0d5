//! The `starcode` command line.
//!
//! Exit codes: 0 success or verified true, 1 verified false, 2 usage or input
//! error, 3 inconclusive (budget exhausted).

pub mod permfile;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::{intersection_stats, stab1_code, Bitrade, Code, MinDistance, Stab1Certificate};
use crate::error::Error;
use crate::group::{pgl2_in_degree, Side};
use crate::perm::Permutation;
use crate::search::{
    classify_perfect_codes, embed_bitrade, enumerate_bitrades, Embedding, SolveOptions,
    DEFAULT_BITRADE_BUDGET, DEFAULT_CODE_BUDGET,
};
use crate::star::StarGraph;
use report::{sha256_hex, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "STARCODE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "starcode",
    version,
    about = "Perfect codes and bitrades in Star graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit reports as a JSON object.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the searches (1 = sequential).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a code and write it as a .perm file.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a property of a code or a pair of codes.
    #[command(subcommand)]
    Verify(Verify),
    /// Classify perfect codes by exhaustive search.
    #[command(subcommand)]
    Classify(Classify),
    /// Enumerate perfect bitrades.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Find a perfect code containing T0 and avoiding T1.
    Embed(EmbedArgs),
    /// Distance between two vertices of S_n.
    Distance(DistanceArgs),
    /// Summary of a code.
    Info(InputArgs),
    /// Intersection of two codes.
    Intersect(PairArgs),
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// Stabilizer of point 1.
    Stab1 {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// PGL(2,q) acting on the projective line, optionally in a larger degree.
    Pgl {
        #[arg(long, default_value_t = 5)]
        q: u64,
        /// Degree; points beyond q+1 are fixed.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Left or right translate of a code.
    Coset {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        by: String,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recursive lift from degree n-1 to degree n.
    Lift {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Conjugate every codeword.
    Conjugate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        by: String,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// Minimum distance at least 3.
    Mindist(InputArgs),
    /// Perfect code.
    Perfect(InputArgs),
    /// Perfect bitrade given as halves T0, T1 (or as two codes with --codes).
    Bitrade(TradeArgs),
}

#[derive(Debug, Subcommand)]
enum Classify {
    /// Perfect codes of S_n up to automorphism.
    Codes {
        #[arg(long)]
        n: usize,
        /// Stop after this many solutions.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        budget_seconds: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
enum SearchCmd {
    /// Volume spectrum of perfect bitrades of S_n.
    Bitrades {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        budget_seconds: Option<f64>,
        /// Directory for one representative per volume.
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long = "in", short = 'i')]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long = "in", short = 'i')]
    input: PathBuf,
    #[arg(long = "in2", short = 'j')]
    input2: PathBuf,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct TradeArgs {
    #[arg(long = "in", short = 'i')]
    input: PathBuf,
    #[arg(long = "in2", short = 'j')]
    input2: PathBuf,
    /// Read the inputs as two perfect codes C, C' and use (C\C', C'\C).
    #[arg(long)]
    codes: bool,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[command(flatten)]
    trade: TradeArgs,
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct DistanceArgs {
    /// Target vertex as an image word.
    #[arg(long)]
    by: String,
    /// Source vertex; the identity by default.
    #[arg(long)]
    from: Option<String>,
}

#[derive(Debug, Args)]
struct OutArgs {
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

/// Failure that ends a command with exit code 2.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: a report (if any), raw output and an exit code.
struct Outcome {
    report: Option<Report>,
    stdout: String,
    code: i32,
}

impl Outcome {
    fn report(report: Report, code: i32) -> Self {
        Self {
            report: Some(report),
            stdout: String::new(),
            code,
        }
    }
}

struct Context {
    threads: Option<usize>,
}

impl Context {
    fn parallel(&self) -> bool {
        self.threads != Some(1)
    }

    fn note_threads(&self, report: &mut Report) {
        match self.threads {
            Some(t) => report.set("threads", t),
            None => report.set("threads", "auto"),
        };
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => match v.trim().parse() {
                Ok(t) => Some(t),
                Err(_) => {
                    eprintln!("error: {THREADS_ENV} must be a positive integer, got {v:?}");
                    return EXIT_INPUT;
                }
            },
            Err(_) => None,
        },
    };
    if threads == Some(0) {
        eprintln!("error: thread count must be positive");
        return EXIT_INPUT;
    }
    let ctx = Context { threads };
    let result = match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &ctx)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => dispatch(&cli.command, &ctx),
    };
    match result {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            if let Some(report) = outcome.report {
                print!("{}", report.render(cli.json));
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn dispatch(command: &Command, ctx: &Context) -> CliResult<Outcome> {
    match command {
        Command::Construct(c) => construct(c),
        Command::Verify(v) => verify(v),
        Command::Classify(Classify::Codes {
            n,
            limit,
            budget_seconds,
        }) => classify(*n, *limit, *budget_seconds, ctx),
        Command::Search(SearchCmd::Bitrades {
            n,
            budget_seconds,
            out,
        }) => search_bitrades(*n, *budget_seconds, out.as_deref(), ctx),
        Command::Embed(args) => embed(args),
        Command::Distance(args) => distance(args),
        Command::Info(args) => info(args),
        Command::Intersect(args) => intersect(args),
    }
}

struct Loaded {
    code: Code,
    digest: String,
}

fn load(path: &Path) -> CliResult<Loaded> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::File {
        path: path.into(),
        source: Error::Parse {
            line: 0,
            message: "file is not UTF-8".into(),
        },
    })?;
    let code = permfile::parse(&text).map_err(|source| CliError::File {
        path: path.into(),
        source,
    })?;
    Ok(Loaded {
        code,
        digest: sha256_hex(&bytes),
    })
}

fn parse_word(text: &str) -> CliResult<Permutation> {
    Ok(text.parse::<Permutation>()?)
}

fn budget(seconds: Option<f64>, default: Duration) -> CliResult<Duration> {
    match seconds {
        None => Ok(default),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Duration::from_secs_f64(s)),
        Some(s) => Err(CliError::Usage(format!("invalid budget {s}"))),
    }
}

/// Writes `code` to `out`, or returns the file text for stdout.
fn emit(code: &Code, out: &OutArgs, mut report: Report) -> CliResult<Outcome> {
    let text = permfile::write(code);
    report
        .set("degree", code.degree())
        .set("codewords", code.len())
        .set("output_sha256", sha256_hex(text.as_bytes()));
    match &out.out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(Outcome::report(report, EXIT_OK))
        }
        None => Ok(Outcome {
            report: None,
            stdout: text,
            code: EXIT_OK,
        }),
    }
}

fn construct(c: &Construct) -> CliResult<Outcome> {
    match c {
        Construct::Stab1 { n, out } => {
            let mut report = Report::new("construct stab1");
            report.set("n", *n);
            emit(&stab1_code(*n)?, out, report)
        }
        Construct::Pgl { q, n, out } => {
            let degree = n.unwrap_or(*q as usize + 1);
            let code = Code::from_set(&pgl2_in_degree(*q, degree)?)?;
            let mut report = Report::new("construct pgl");
            report.set("q", *q);
            emit(&code, out, report)
        }
        Construct::Coset {
            input,
            by,
            side,
            out,
        } => {
            let loaded = load(&input.input)?;
            let g = parse_word(by)?;
            let code = loaded.code.coset_code(&g, (*side).into())?;
            let mut report = Report::new("construct coset");
            report
                .set("input_sha256", loaded.digest)
                .set("by", g.word())
                .set(
                    "side",
                    if matches!(side, SideArg::Left) {
                        "left"
                    } else {
                        "right"
                    },
                );
            emit(&code, out, report)
        }
        Construct::Lift { input, out } => {
            let loaded = load(&input.input)?;
            let n = loaded.code.degree() + 1;
            let code = loaded.code.embed(n)?.lift()?;
            let mut report = Report::new("construct lift");
            report.set("input_sha256", loaded.digest);
            emit(&code, out, report)
        }
        Construct::Conjugate { input, by, out } => {
            let loaded = load(&input.input)?;
            let g = parse_word(by)?;
            let code = loaded.code.conjugate(&g)?;
            let mut report = Report::new("construct conjugate");
            report
                .set("input_sha256", loaded.digest)
                .set("by", g.word());
            emit(&code, out, report)
        }
    }
}

fn min_distance_value(md: &MinDistance) -> Value {
    match md {
        MinDistance::Trivial => json!("trivial"),
        MinDistance::Holds => json!("at least 3"),
        MinDistance::Violated(p, q) => json!(format!("violated by {:?} and {:?}", p, q)),
    }
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn verify(v: &Verify) -> CliResult<Outcome> {
    match v {
        Verify::Mindist(input) => {
            let loaded = load(&input.input)?;
            let md = loaded.code.min_distance();
            let ok = !matches!(md, MinDistance::Violated(..));
            let mut report = Report::new("verify mindist");
            report
                .set("input_sha256", loaded.digest)
                .set("degree", loaded.code.degree())
                .set("codewords", loaded.code.len())
                .set("min_distance", min_distance_value(&md))
                .set("result", ok);
            Ok(Outcome::report(report, verdict(ok)))
        }
        Verify::Perfect(input) => {
            let loaded = load(&input.input)?;
            let code = &loaded.code;
            let md = code.min_distance();
            let ok = code.is_perfect();
            let mut report = Report::new("verify perfect");
            report
                .set("input_sha256", loaded.digest)
                .set("degree", code.degree())
                .set("codewords", code.len())
                .set("required", crate::perm::factorial(code.degree() - 1))
                .set("min_distance", min_distance_value(&md))
                .set("result", ok);
            Ok(Outcome::report(report, verdict(ok)))
        }
        Verify::Bitrade(args) => {
            let mut report = Report::new("verify bitrade");
            let trade = match load_trade(args, &mut report)? {
                Ok(trade) => trade,
                Err(reason) => {
                    report.set("reason", reason).set("result", false);
                    return Ok(Outcome::report(report, EXIT_FALSE));
                }
            };
            let ok = trade.verify();
            report.set("volume", trade.volume()).set("result", ok);
            Ok(Outcome::report(report, verdict(ok)))
        }
    }
}

/// Reads a bitrade; the inner error is a reason the pair is not one.
fn load_trade(
    args: &TradeArgs,
    report: &mut Report,
) -> CliResult<std::result::Result<Bitrade, String>> {
    let a = load(&args.input)?;
    let b = load(&args.input2)?;
    report
        .set("input_sha256", a.digest)
        .set("input2_sha256", b.digest)
        .set("degree", a.code.degree());
    if a.code.degree() != b.code.degree() {
        return Err(Error::DegreeMismatch {
            left: a.code.degree(),
            right: b.code.degree(),
        }
        .into());
    }
    if args.codes {
        report.set("intersection", a.code.intersection(&b.code)?.len());
        return Ok(Bitrade::from_codes(&a.code, &b.code).map_err(|e| e.to_string()));
    }
    Ok(Bitrade::new(a.code, b.code).map_err(|e| e.to_string()))
}

fn classify(
    n: usize,
    limit: Option<usize>,
    budget_seconds: Option<f64>,
    ctx: &Context,
) -> CliResult<Outcome> {
    let budget = budget(budget_seconds, DEFAULT_CODE_BUDGET)?;
    let options = SolveOptions {
        limit,
        budget: Some(budget),
        parallel: ctx.parallel(),
    };
    let result = classify_perfect_codes(n, &options)?;
    let classes: Vec<Value> = result
        .classes
        .iter()
        .map(|c| {
            let form: Vec<String> = c.canonical_form.iter().map(u64::to_string).collect();
            json!({
                "size": c.count,
                "stab1_class": c.is_stab1_class,
                "canonical_sha256": sha256_hex(form.join(" ").as_bytes()),
            })
        })
        .collect();
    let mut report = Report::new("classify codes");
    report
        .set("n", n)
        .set("budget_seconds", budget.as_secs_f64());
    if let Some(l) = limit {
        report.set("limit", l);
    }
    ctx.note_threads(&mut report);
    report
        .set("identity_forced", true)
        .set("solutions", result.solutions)
        .set("class_count", result.classes.len())
        .set("classes", classes)
        .set("complete", result.complete)
        .set("nodes", result.nodes);
    let code = if result.complete {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    };
    Ok(Outcome::report(report, code))
}

fn search_bitrades(
    n: usize,
    budget_seconds: Option<f64>,
    out: Option<&Path>,
    ctx: &Context,
) -> CliResult<Outcome> {
    let budget = budget(budget_seconds, DEFAULT_BITRADE_BUDGET)?;
    let spectrum = enumerate_bitrades(n, Some(budget))?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.into(),
            source,
        })?;
        for (volume, trade) in &spectrum.volumes {
            for (half, code) in [("t0", trade.t0()), ("t1", trade.t1())] {
                let path = dir.join(format!("volume-{volume}-{half}.perm"));
                fs::write(&path, permfile::write(code))
                    .map_err(|source| CliError::Io { path, source })?;
            }
        }
    }
    let mut report = Report::new("search bitrades");
    report
        .set("n", n)
        .set("budget_seconds", budget.as_secs_f64());
    ctx.note_threads(&mut report);
    report
        .set("volumes", spectrum.volume_list())
        .set("connected_bitrades", spectrum.bitrades.len())
        .set("search_complete", spectrum.search_complete)
        .set("unions_excluded", spectrum.unions_excluded)
        .set("complete", spectrum.complete())
        .set("nodes", spectrum.nodes);
    let code = if spectrum.complete() {
        EXIT_OK
    } else {
        EXIT_INCONCLUSIVE
    };
    Ok(Outcome::report(report, code))
}

fn embed(args: &EmbedArgs) -> CliResult<Outcome> {
    let budget = budget(args.budget_seconds, DEFAULT_CODE_BUDGET)?;
    let mut report = Report::new("embed");
    report.set("budget_seconds", budget.as_secs_f64());
    let trade = match load_trade(&args.trade, &mut report)? {
        Ok(trade) => trade,
        Err(reason) => {
            report.set("reason", reason).set("result", "not a bitrade");
            return Ok(Outcome::report(report, EXIT_INPUT));
        }
    };
    report.set("volume", trade.volume());
    match embed_bitrade(&trade, Some(budget)) {
        Err(Error::NotABitrade) => {
            report.set("result", "not a bitrade");
            Ok(Outcome::report(report, EXIT_INPUT))
        }
        Err(e) => Err(e.into()),
        Ok(Embedding::Embedded { code, partner }) => {
            report
                .set("result", "embedded")
                .set("code_perfect", code.is_perfect())
                .set("partner_perfect", partner.is_perfect())
                .set("code_sha256", sha256_hex(permfile::write(&code).as_bytes()))
                .set(
                    "partner_sha256",
                    sha256_hex(permfile::write(&partner).as_bytes()),
                );
            if let Some(path) = &args.out.out {
                fs::write(path, permfile::write(&code)).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            Ok(Outcome::report(report, EXIT_OK))
        }
        Ok(Embedding::NotEmbeddable) => {
            report.set("result", "not embeddable");
            Ok(Outcome::report(report, EXIT_FALSE))
        }
        Ok(Embedding::Unknown) => {
            report.set("result", "unknown");
            Ok(Outcome::report(report, EXIT_INCONCLUSIVE))
        }
    }
}

fn distance(args: &DistanceArgs) -> CliResult<Outcome> {
    let to = parse_word(&args.by)?;
    let from = match &args.from {
        Some(w) => parse_word(w)?,
        None => Permutation::identity(to.degree())?,
    };
    let graph = StarGraph::new(to.degree())?;
    let d = graph.distance(&from, &to)?;
    let mut report = Report::new("distance");
    report
        .set("degree", to.degree())
        .set("from", from.word())
        .set("to", to.word())
        .set("distance", d);
    Ok(Outcome::report(report, EXIT_OK))
}

fn info(args: &InputArgs) -> CliResult<Outcome> {
    let loaded = load(&args.input)?;
    let code = &loaded.code;
    let certificate = match code.stab1_class_certificate() {
        Stab1Certificate::InClass { point } => {
            format!("in class (every codeword maps {point} to 1)")
        }
        Stab1Certificate::NotInClass { first, second } => {
            format!("not in class ({first:?} and {second:?} differ)")
        }
    };
    let mut report = Report::new("info");
    report
        .set("input_sha256", loaded.digest)
        .set("degree", code.degree())
        .set("codewords", code.len())
        .set("min_distance", min_distance_value(&code.min_distance()))
        .set("perfect", code.is_perfect())
        .set("subgroup", code.to_set().is_group())
        .set("stab1_certificate", certificate);
    Ok(Outcome::report(report, EXIT_OK))
}

fn intersect(args: &PairArgs) -> CliResult<Outcome> {
    let a = load(&args.input)?;
    let b = load(&args.input2)?;
    let stats = intersection_stats(&a.code, &b.code)?;
    let common = a.code.intersection(&b.code)?;
    let mut report = Report::new("intersect");
    report
        .set("input_sha256", a.digest)
        .set("input2_sha256", b.digest)
        .set("degree", a.code.degree())
        .set("common", stats.common)
        .set("first_size", stats.left)
        .set("second_size", stats.right);
    if let Some(path) = &args.out.out {
        fs::write(path, permfile::write(&common)).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(Outcome::report(report, EXIT_OK))
}
