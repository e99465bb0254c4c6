use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dspec_core::exact::{parse_fraction, Rational, Vars};
use dspec_core::nabla::{Direction, NablaExpansion};
use dspec_core::order::{classify, compare, sign_of, FieldContext};
use dspec_core::search::{find_infinite_point, prepare, SearchConfig, SearchError, SearchOutcome};
use dspec_core::spectrum::{
    clearance_batch, distance_squared, is_arithmetical, is_discrete_cone, is_m_discrete_cone,
    is_transcendental, SpecPoint,
};
use dspec_core::suite::run_property_suite;

mod files;
mod report;

use files::Diagnostic;
use report::Report;

#[derive(Parser)]
#[command(name = "dspec", version, about = "Exact dominance-order arithmetic, cone predicates and infinite-point search")]
struct Cli {
    /// Seed for direction sampling and the property suite.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Operator tower and direction checks.
    #[command(subcommand)]
    Nabla(NablaCmd),
    /// Dominance-order comparisons.
    #[command(subcommand)]
    Order(OrderCmd),
    /// Cone predicates, hyperplane clearance and distances.
    #[command(subcommand)]
    Spec(SpecCmd),
    /// Search for a point where every corpus polynomial is infinite.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Self-checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum NablaCmd {
    /// Print the tower G_k and the coefficient table of each polynomial.
    Expand {
        #[arg(long)]
        poly: PathBuf,
        /// Only this level.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Test a direction against U_F for each polynomial.
    CheckDirection {
        #[arg(long)]
        polys: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
}

#[derive(Subcommand)]
enum OrderCmd {
    Compare {
        /// Generators, least significant first.
        #[arg(long)]
        generators: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    Classify {
        #[arg(long)]
        generators: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Discrete,
    MDiscrete,
    Arithmetical,
    Transcendental,
}

#[derive(Subcommand)]
enum SpecCmd {
    Check {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
    },
    /// Check every nonzero integer normal with entries bounded by B.
    Clearance {
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    Dist {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    alpha: PathBuf,
    #[arg(long)]
    corpus: PathBuf,
    /// Positive rational radius.
    #[arg(long)]
    r: String,
    /// Direction; sampled from the admissible set when absent.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Step size override.
    #[arg(long)]
    lambda: Option<String>,
    /// Point count override.
    #[arg(long)]
    count: Option<u64>,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Print the planned point count and step size.
    Plan(SearchArgs),
    Run(SearchArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run the seeded property suite.
    Suite {
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
}

/// A failure before any report exists: exit 1 with a diagnostic.
#[derive(Debug)]
struct UsageError(String);

impl From<Diagnostic> for UsageError {
    fn from(d: Diagnostic) -> Self {
        UsageError(d.to_string())
    }
}

fn usage<E: std::fmt::Display>(e: E) -> UsageError {
    UsageError(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Text => report.text(),
                Format::Machine => report.machine(),
            };
            print!("{out}");
            ExitCode::from(report.exit)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, UsageError> {
    match &cli.command {
        Command::Nabla(NablaCmd::Expand { poly, k }) => nabla_expand(poly, *k),
        Command::Nabla(NablaCmd::CheckDirection { polys, q }) => nabla_check(polys, q),
        Command::Order(OrderCmd::Compare { generators, x, y }) => order_compare(generators, x, y),
        Command::Order(OrderCmd::Classify { generators, x }) => order_classify(generators, x),
        Command::Spec(SpecCmd::Check { point, corpus, mode }) => spec_check(point, corpus, *mode),
        Command::Spec(SpecCmd::Clearance { point, bound }) => spec_clearance(point, *bound),
        Command::Spec(SpecCmd::Dist { p, q }) => spec_dist(p, q),
        Command::Search(SearchCmd::Plan(args)) => search_plan(args, cli.seed),
        Command::Search(SearchCmd::Run(args)) => search_run(args, cli.seed),
        Command::Verify(VerifyCmd::Suite { trials }) => Ok(verify_suite(cli.seed, *trials)),
    }
}

fn load_point(path: &Path) -> Result<SpecPoint, UsageError> {
    let src = files::read(path)?;
    Ok(files::parse_point(&path.display().to_string(), &src)?)
}

fn load_corpus(path: &Path, point: &SpecPoint) -> Result<Vec<dspec_core::exact::Poly>, UsageError> {
    let src = files::read(path)?;
    Ok(files::parse_corpus(&path.display().to_string(), &src, point)?)
}

fn load_polys(path: &Path) -> Result<files::PolyFile, UsageError> {
    let src = files::read(path)?;
    Ok(files::parse_poly_file(&path.display().to_string(), &src)?)
}

fn parse_rational(flag: &str, s: &str) -> Result<Rational, UsageError> {
    let empty = Vars::indexed("X", 0);
    parse_fraction(s, &empty)
        .ok()
        .and_then(|x| x.as_rational())
        .ok_or_else(|| UsageError(format!("{flag}: `{s}` is not a rational number")))
}

fn parse_direction(s: &str, n: usize) -> Result<Direction, UsageError> {
    let q: Direction = s.parse().map_err(|e| UsageError(format!("--q: {e}")))?;
    if q.len() != n {
        return Err(UsageError(format!("--q has {} entries, expected {n}", q.len())));
    }
    Ok(q)
}

fn nabla_expand(path: &Path, k: Option<usize>) -> Result<Report, UsageError> {
    let file = load_polys(path)?;
    let mut r = Report::new("nabla expand", None);
    let mut polys = Vec::new();
    for (j, f) in file.polys.iter().enumerate() {
        let e = NablaExpansion::new(f, file.n).map_err(|e| UsageError(format!("poly {}: {e}", j + 1)))?;
        if let Some(k) = k {
            if k == 0 || k > e.depth() {
                return Err(UsageError(format!(
                    "--k {k} is out of range for poly {} with {} levels",
                    j + 1,
                    e.depth()
                )));
            }
        }
        polys.push(report::expansion(&mut r, j, &e, k));
    }
    r.set("polys", Value::Array(polys));
    Ok(r)
}

fn nabla_check(path: &Path, q: &str) -> Result<Report, UsageError> {
    let file = load_polys(path)?;
    let q = parse_direction(q, file.n)?;
    let mut r = Report::new("nabla check-direction", None);
    r.line(format!("direction: {q}"));
    let mut all = true;
    let mut entries = Vec::new();
    for (j, f) in file.polys.iter().enumerate() {
        let e = NablaExpansion::new(f, file.n).map_err(|e| UsageError(format!("poly {}: {e}", j + 1)))?;
        let u1 = e.membership_u1(&q).map_err(usage)?;
        let u2 = e.membership_u2(&q).map_err(usage)?;
        all &= u1 && u2;
        r.line(format!(
            "poly[{}]: {}  u1: {}  u2: {}",
            j + 1,
            f,
            report::pass(u1),
            report::pass(u2)
        ));
        entries.push(json!({ "poly": f.to_string(), "u1": u1, "u2": u2, "admissible": u1 && u2 }));
    }
    r.line(format!("result: {}", report::pass(all)));
    r.set("direction", json!(q.to_string()));
    r.set("polys", Value::Array(entries));
    r.set("passed", json!(all));
    r.exit = if all { 0 } else { 2 };
    Ok(r)
}

fn field_from_flag(generators: &str) -> Result<FieldContext, UsageError> {
    let gens = files::parse_generators(generators)?;
    FieldContext::new(&gens, 0).map_err(usage)
}

fn order_compare(generators: &str, x: &str, y: &str) -> Result<Report, UsageError> {
    let field = field_from_flag(generators)?;
    let px = parse_fraction(x, field.generators()).map_err(|e| UsageError(format!("--x: {e}")))?;
    let py = parse_fraction(y, field.generators()).map_err(|e| UsageError(format!("--y: {e}")))?;
    let ord = compare(&px, &py).map_err(usage)?;
    let (name, sym) = match ord {
        std::cmp::Ordering::Less => ("lt", "<"),
        std::cmp::Ordering::Equal => ("eq", "="),
        std::cmp::Ordering::Greater => ("gt", ">"),
    };
    let mut r = Report::new("order compare", None);
    r.line(format!("generators: {}", field.generators()));
    r.line(format!("x: {px}"));
    r.line(format!("y: {py}"));
    r.line(format!("result: {name} (x {sym} y)"));
    r.set("generators", json!(field.generators().names()));
    r.set("x", json!(px.to_string()));
    r.set("y", json!(py.to_string()));
    r.set("result", json!(name));
    Ok(r)
}

fn order_classify(generators: &str, x: &str) -> Result<Report, UsageError> {
    let field = field_from_flag(generators)?;
    let px = parse_fraction(x, field.generators()).map_err(|e| UsageError(format!("--x: {e}")))?;
    let mut r = Report::new("order classify", None);
    let sign = sign_of(&px);
    let mag = classify(&px);
    r.line(format!("generators: {}", field.generators()));
    r.line(format!("x: {px}"));
    r.line(format!("sign: {sign}"));
    r.line(format!("magnitude: {mag}"));
    r.set("generators", json!(field.generators().names()));
    r.set("x", json!(px.to_string()));
    r.set("sign", json!(sign.as_i8()));
    r.set("magnitude", json!(mag.name()));
    Ok(r)
}

fn spec_check(point: &Path, corpus: &Path, mode: Mode) -> Result<Report, UsageError> {
    let p = load_point(point)?;
    let c = load_corpus(corpus, &p)?;
    let verdict = match mode {
        Mode::Discrete => is_discrete_cone(&p, &c),
        Mode::MDiscrete => is_m_discrete_cone(&p, &c),
        Mode::Arithmetical => is_arithmetical(&p, &c),
        Mode::Transcendental => is_transcendental(&p, &c),
    }
    .map_err(usage)?;
    let mut r = Report::new("spec check", None);
    report::point_header(&mut r, &p);
    let v = report::verdict(&mut r, &verdict);
    r.set("verdict", v);
    r.exit = if verdict.passed { 0 } else { 2 };
    Ok(r)
}

fn spec_clearance(point: &Path, bound: u32) -> Result<Report, UsageError> {
    let p = load_point(point)?;
    let batch = clearance_batch(&p, bound).map_err(usage)?;
    let mut r = Report::new("spec clearance", None);
    report::point_header(&mut r, &p);
    let v = report::batch(&mut r, &batch);
    r.set("clearance", v);
    r.exit = if batch.passed() { 0 } else { 2 };
    Ok(r)
}

fn spec_dist(p: &Path, q: &Path) -> Result<Report, UsageError> {
    let a = load_point(p)?;
    let b = load_point(q)?;
    let d = distance_squared(&a, &b).map_err(usage)?;
    let mag = classify(&d);
    let mut r = Report::new("spec dist", None);
    r.line(format!("p: {a}"));
    r.line(format!("q: {b}"));
    r.line(format!("distance_squared: {d}"));
    r.line(format!("magnitude: {mag}"));
    r.set("p", report::coords(&a));
    r.set("q", report::coords(&b));
    r.set("distance_squared", json!(d.to_string()));
    r.set("magnitude", json!(mag.name()));
    Ok(r)
}

fn search_config(args: &SearchArgs, seed: u64) -> Result<SearchConfig, UsageError> {
    let alpha = load_point(&args.alpha)?;
    let corpus = load_corpus(&args.corpus, &alpha)?;
    let radius = parse_rational("--r", &args.r)?;
    let mut cfg = SearchConfig::new(alpha, corpus, radius).with_seed(seed);
    if let Some(q) = &args.q {
        let q = parse_direction(q, cfg.alpha.arity())?;
        cfg = cfg.with_direction(q);
    }
    if let Some(l) = &args.lambda {
        cfg = cfg.with_lambda(parse_rational("--lambda", l)?);
    }
    if let Some(c) = args.count {
        cfg = cfg.with_count(c);
    }
    Ok(cfg)
}

fn search_plan(args: &SearchArgs, seed: u64) -> Result<Report, UsageError> {
    let cfg = search_config(args, seed)?;
    let (_, q, plan) = prepare(&cfg).map_err(usage)?;
    let mut r = Report::new("search plan", Some(seed));
    r.line(format!("direction: {q}"));
    r.line(format!("count: {}", plan.count));
    r.line(format!("lambda: {}", plan.lambda));
    r.set("direction", json!(q.to_string()));
    r.set("count", json!(plan.count));
    r.set("lambda", json!(plan.lambda.to_string()));
    Ok(r)
}

fn search_run(args: &SearchArgs, seed: u64) -> Result<Report, UsageError> {
    let cfg = search_config(args, seed)?;
    let mut r = Report::new("search run", Some(seed));
    report::point_header(&mut r, &cfg.alpha);
    r.line(format!("radius: {}", cfg.radius));
    r.set("radius", json!(cfg.radius.to_string()));
    match find_infinite_point(&cfg) {
        Ok(SearchOutcome::Found(rep)) => {
            report::search_report(&mut r, &cfg.corpus, &rep);
            r.exit = 0;
        }
        Ok(SearchOutcome::Refuted(refutation)) => {
            report::refutation(&mut r, &cfg.corpus, &refutation);
            r.exit = 3;
        }
        Err(SearchError::Exhausted { points }) => {
            r.line("outcome: exhausted".to_string());
            r.line(format!("points_generated: {points}"));
            r.set("outcome", json!("exhausted"));
            r.set("points_generated", json!(points));
            r.exit = 4;
        }
        Err(e) => return Err(usage(e)),
    }
    Ok(r)
}

fn verify_suite(seed: u64, trials: u64) -> Report {
    let summary = run_property_suite(seed, trials);
    let mut r = Report::new("verify suite", Some(seed));
    report::suite(&mut r, &summary);
    r.exit = if summary.all_passed() { 0 } else { 2 };
    r
}
