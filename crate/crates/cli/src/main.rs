mod input;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use strassman::condition::kappa_global_report;
use strassman::lab::{self, ExperimentReport, SampleConfig};
use strassman::solver::{ShiftSource, StrassmanTree};
use strassman::{
    dist_to_singular, kappa_local, refine, required_precision, solve, strassman_count_ball, Ball, Error, Exponent,
    IntPoly, KappaValue, PAdicInt, PAdicPoly, Prime, SolverConfig,
};

use input::{InputError, Problem};

#[derive(Debug, Parser)]
#[command(name = "padic", version, about = "Isolate and certify the roots in Z_p of integer polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Isolate every root in Z_p and certify each ball.
    Solve {
        #[command(flatten)]
        poly: PolyArgs,
        /// Largest scale a ball may be split to.
        #[arg(long)]
        max_depth: Option<u32>,
        /// Keep every degree of the shifted polynomial instead of truncating.
        #[arg(long)]
        full_degree: bool,
        #[arg(long, default_value_t = 4)]
        max_restarts: u32,
    },
    /// Newton iterates from the center of an isolating ball.
    Refine {
        #[command(flatten)]
        poly: PolyArgs,
        /// Ball as center:scale.
        #[arg(long)]
        ball: String,
        #[arg(long, default_value_t = 5)]
        steps: usize,
    },
    /// Condition numbers and the precision they call for.
    Kappa {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Strassman count on a ball (Z_p by default).
    Count {
        #[command(flatten)]
        poly: PolyArgs,
        /// Ball as center:scale.
        #[arg(long)]
        ball: Option<String>,
    },
    /// Monte Carlo experiment on random polynomials, checked against exact predictions.
    Sample(SampleArgs),
    /// The subdivision tree of a solver run.
    Tree {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        max_depth: Option<u32>,
    },
}

#[derive(Debug, Args)]
struct PolyArgs {
    /// The prime.
    #[arg(long)]
    p: Option<u64>,
    /// Coefficients c0,c1,...,cd in increasing degree.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// JSON file holding p, coeffs and optionally precision.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Digits of precision; defaults to the input file, then PADIC_DEFAULT_PRECISION, then degree + 8.
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl PolyArgs {
    fn load(&self) -> Result<Problem, CliError> {
        Ok(input::load(self.p, self.coeffs.as_deref(), self.input.as_deref(), self.precision)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Experiment {
    StUnit,
    StBall,
    KappaTail,
    Projection,
    SolverAverage,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    experiment: Experiment,
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Degree of the random polynomials.
    #[arg(long, default_value_t = 4)]
    d: usize,
    /// Ball scale, or the tail exponent for the projection experiment.
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Length of the random vector (projection).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Length of the leading block (projection).
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = lab::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Digits sampled per coefficient.
    #[arg(long)]
    precision: Option<u32>,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(InputError),
    Core(Error),
    ChecksFailed,
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 1,
            CliError::Core(e) => match e {
                Error::NotPrime(_) | Error::InvalidPrecision(_) | Error::PrimeMismatch(..) => 1,
                Error::MaxDepthExceeded(..) => 2,
                Error::PrecisionExhausted(_) => 3,
                Error::PreconditionViolated(_) => 4,
                Error::SingularDerivative | Error::DivisionByAmbiguousZero | Error::NotDivisible => 5,
                Error::RandomnessBudgetExhausted(_) => 6,
                Error::CertificationFailed(_) => 7,
            },
            CliError::ChecksFailed => 8,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Input(e) => e.to_string(),
            CliError::Core(e) => e.to_string(),
            CliError::ChecksFailed => "one or more experiment checks failed".into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Solve { poly, max_depth, full_degree, max_restarts } => {
            let source = if full_degree { ShiftSource::FullDegree } else { ShiftSource::Input };
            cmd_solve(&poly, max_depth, source, max_restarts)
        }
        Command::Refine { poly, ball, steps } => cmd_refine(&poly, &ball, steps),
        Command::Kappa { poly } => cmd_kappa(&poly),
        Command::Count { poly, ball } => cmd_count(&poly, ball.as_deref()),
        Command::Sample(args) => cmd_sample(&args),
        Command::Tree { poly, max_depth } => cmd_tree(&poly, max_depth),
    }
}

fn reject_dot(format: Format) -> Result<(), CliError> {
    if format == Format::Dot {
        return Err(CliError::Usage("dot output is only available for the tree command".into()));
    }
    Ok(())
}

fn with_schema(schema: &str, body: Value) -> String {
    let mut out = json!({ "schema": schema });
    if let (Value::Object(head), Value::Object(rest)) = (&mut out, body) {
        head.extend(rest);
    }
    let mut text = serde_json::to_string_pretty(&out).expect("JSON values serialize");
    text.push('\n');
    text
}

/// The input in the shape `--input` accepts.
fn input_json(problem: &Problem) -> Value {
    let coeffs: Vec<String> = problem.poly.coeffs().iter().map(ToString::to_string).collect();
    json!({ "p": problem.prime.get(), "precision": problem.precision, "coeffs": coeffs })
}

fn embed(problem: &Problem) -> Result<PAdicPoly, CliError> {
    Ok(problem.poly.to_padic(problem.prime, problem.precision)?)
}

/// Coefficients lifted to the symmetric range `(-p^b/2, p^b/2]`.
fn signed_coeffs(f: &PAdicPoly) -> Vec<String> {
    f.coeffs()
        .iter()
        .map(|c| {
            let modulus = f.prime().pow(c.precision());
            if c.value() * 2u32 > modulus {
                format!("-{}", modulus - c.value())
            } else {
                c.value().to_string()
            }
        })
        .collect()
}

fn poly_text(poly: &IntPoly) -> String {
    poly.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn exponent_text(e: Exponent, prime: Prime) -> String {
    match e {
        Exponent::PosInfinity => "0".into(),
        Exponent::NegInfinity => "inf".into(),
        Exponent::Exact(r) => format!("{prime}^{}", -r),
        Exponent::AtLeast(r) => format!("<= {prime}^{}", -r),
    }
}

fn solver_config(poly: &PolyArgs, problem: &Problem, max_depth: Option<u32>, source: ShiftSource, restarts: u32) -> SolverConfig {
    SolverConfig {
        precision: Some(problem.precision),
        max_depth,
        seed: poly.seed,
        max_restarts: restarts,
        shift_source: source,
        ..SolverConfig::default()
    }
}

fn cmd_solve(poly: &PolyArgs, max_depth: Option<u32>, source: ShiftSource, restarts: u32) -> Result<String, CliError> {
    reject_dot(poly.format)?;
    let problem = poly.load()?;
    let config = solver_config(poly, &problem, max_depth, source, restarts);
    let result = solve(&problem.poly, problem.prime, &config)?;
    if poly.format == Format::Json {
        return Ok(with_schema(
            "padic/solve/v1",
            json!({
                "input": input_json(&problem),
                "roots": result.certificates,
                "precision": result.precision,
                "initial_precision": result.initial_precision,
                "restarts": result.restarts,
                "seed": result.seed,
                "tree": result.tree.stats(),
            }),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(out, "f = [{}] over Z_{}", poly_text(&problem.poly), problem.prime);
    let _ = writeln!(out, "precision {} (started at {}, {} restarts)", result.precision, result.initial_precision, result.restarts);
    if result.certificates.is_empty() {
        out.push_str("no roots\n");
        return Ok(out);
    }
    let n = result.certificates.len();
    let _ = writeln!(out, "{n} {}", if n == 1 { "root" } else { "roots" });
    for c in &result.certificates {
        let _ = writeln!(
            out,
            "  {} mod {}^{}  alpha = {}  beta = {}  gamma = {}",
            c.ball.center,
            c.ball.prime,
            c.ball.scale,
            exponent_text(c.smale.alpha, problem.prime),
            exponent_text(c.smale.beta, problem.prime),
            exponent_text(c.smale.gamma, problem.prime),
        );
    }
    Ok(out)
}

fn cmd_refine(poly: &PolyArgs, ball: &str, steps: usize) -> Result<String, CliError> {
    reject_dot(poly.format)?;
    let problem = poly.load()?;
    let ball = input::parse_ball(ball, problem.prime)?;
    let f = embed(&problem)?;
    let trace = refine(&f, &ball, steps)?;
    if poly.format == Format::Json {
        return Ok(with_schema("padic/refine/v1", json!({ "input": input_json(&problem), "trace": trace })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "Newton iterates from {ball}");
    for (k, (x, data)) in trace.iterates.iter().zip(&trace.params).enumerate() {
        let _ = writeln!(
            out,
            "  x{k} = {} + O({}^{})  beta = {}",
            x.value,
            problem.prime,
            x.precision,
            exponent_text(data.beta, problem.prime)
        );
    }
    if trace.converged {
        out.push_str("converged to working precision\n");
    }
    Ok(out)
}

fn kappa_text(k: KappaValue, prime: Prime) -> String {
    match k {
        KappaValue::Finite(e) => format!("{prime}^{e}"),
        KappaValue::Infinite => "inf".into(),
    }
}

/// Residue classes listed individually by the kappa command.
const KAPPA_TABLE_LIMIT: u64 = 64;

fn cmd_kappa(poly: &PolyArgs) -> Result<String, CliError> {
    reject_dot(poly.format)?;
    let problem = poly.load()?;
    let f = embed(&problem)?;
    let global = kappa_global_report(&f)?;
    let norm = f.gauss_norm_exponent()?;
    let needed = required_precision(&f)?;
    let p = problem.prime.get();
    let mut table = Vec::new();
    for n in 0..p.min(KAPPA_TABLE_LIMIT) {
        let x = PAdicInt::from_residue(n.into(), problem.prime, problem.precision)?;
        table.push((n, kappa_local(&f, &x)?));
    }
    // dist(f, Sigma) = ||f|| / kappa(f)
    let distance = global.kappa.exponent().map(|e| norm + e);
    let witness = match global.balls.iter().max_by_key(|(_, e)| *e) {
        Some((ball, _)) => Some(dist_to_singular(&f, &ball.center_at(problem.precision)?)?.witness),
        None => None,
    };
    if poly.format == Format::Json {
        let residues: Vec<Value> = table.iter().map(|(n, k)| json!({ "residue": n, "kappa": k })).collect();
        return Ok(with_schema(
            "padic/kappa/v1",
            json!({
                "input": input_json(&problem),
                "kappa": global.kappa,
                "depth": global.depth,
                "residues": residues,
                "distance_exponent": distance,
                "nearest_singular": witness.as_ref().map(signed_coeffs),
                "required_precision": needed,
            }),
        ));
    }
    let prime = problem.prime;
    let mut out = String::new();
    let _ = writeln!(out, "kappa(f) = {}", kappa_text(global.kappa, prime));
    for (n, k) in &table {
        let _ = writeln!(out, "  kappa(f, {n}) = {}", kappa_text(*k, prime));
    }
    if p > KAPPA_TABLE_LIMIT {
        let _ = writeln!(out, "  ({} further residues omitted)", p - KAPPA_TABLE_LIMIT);
    }
    match distance {
        Some(e) => {
            let _ = writeln!(out, "distance to singular polynomials = {prime}^-{e}");
        }
        None => out.push_str("distance to singular polynomials = 0\n"),
    }
    if let Some(w) = witness {
        let _ = writeln!(out, "nearest singular polynomial = [{}]", signed_coeffs(&w).join(","));
    }
    let _ = writeln!(out, "required precision = {needed}");
    Ok(out)
}

fn cmd_count(poly: &PolyArgs, ball: Option<&str>) -> Result<String, CliError> {
    reject_dot(poly.format)?;
    let problem = poly.load()?;
    let ball = match ball {
        Some(b) => input::parse_ball(b, problem.prime)?,
        None => Ball::unit(problem.prime),
    };
    let f = embed(&problem)?;
    let count = strassman_count_ball(&f, &ball)?;
    if poly.format == Format::Json {
        return Ok(with_schema(
            "padic/count/v1",
            json!({ "input": input_json(&problem), "ball": ball, "count": count }),
        ));
    }
    Ok(format!("{count}\n"))
}

fn cmd_sample(args: &SampleArgs) -> Result<String, CliError> {
    reject_dot(args.format)?;
    let prime = Prime::new(args.p)?;
    let mut config = SampleConfig::new(prime, args.d, args.trials, args.seed);
    if let Some(b) = args.precision {
        if b == 0 {
            return Err(Error::InvalidPrecision(0).into());
        }
        config = config.with_precision(b);
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let report = match args.experiment {
        Experiment::StUnit => lab::experiment_st_unit(&config),
        Experiment::StBall => lab::experiment_st_ball(&config, args.s)?,
        Experiment::KappaTail => lab::experiment_kappa_tail(&config),
        Experiment::Projection => lab::experiment_projection(&config, args.n, args.r, args.s)?,
        Experiment::SolverAverage => lab::experiment_solver_average(&config),
    };
    let json_text = with_schema("padic/sample/v1", serde_json::to_value(&report).expect("reports serialize"));
    if let Some(path) = &args.json {
        std::fs::write(path, &json_text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let out = if args.format == Format::Json { json_text } else { report_text(&report) };
    if !report.passed() {
        print!("{out}");
        return Err(CliError::ChecksFailed);
    }
    Ok(out)
}

fn report_text(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}: p = {}, d = {}, {} digits, {} trials, seed {}, {} undecided",
        report.experiment, report.prime, report.degree, report.precision, report.trials, report.seed, report.undecided
    );
    for s in &report.statistics {
        let _ = writeln!(out, "  {:<24} {:.6}", s.name, s.value);
    }
    for c in &report.checks {
        let reference = match &c.reference_exact {
            Some(exact) => format!("{exact} ({:.6})", c.reference),
            None => format!("{:.6}", c.reference),
        };
        let _ = writeln!(
            out,
            "  {} {:<32} empirical {:.6}  prediction {}  se {:.6}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.empirical,
            reference,
            c.standard_error
        );
    }
    out
}

fn cmd_tree(poly: &PolyArgs, max_depth: Option<u32>) -> Result<String, CliError> {
    let problem = poly.load()?;
    let config = solver_config(poly, &problem, max_depth, ShiftSource::Input, 4);
    let result = solve(&problem.poly, problem.prime, &config)?;
    let tree = &result.tree;
    Ok(match poly.format {
        Format::Dot => tree.to_dot(),
        Format::Json => with_schema(
            "padic/tree/v1",
            json!({ "input": input_json(&problem), "stats": tree.stats(), "tree": tree }),
        ),
        Format::Text => {
            let mut out = String::new();
            for root in tree.nodes.iter().enumerate().filter(|(_, n)| n.parent.is_none()).map(|(i, _)| i) {
                tree_text(tree, root, 0, &mut out);
            }
            let stats = tree.stats();
            let _ = writeln!(out, "depth {}, width {}, {} nodes", stats.depth, stats.width, stats.nodes);
            out
        }
    })
}

fn tree_text(tree: &StrassmanTree, node: usize, indent: usize, out: &mut String) {
    let n = &tree.nodes[node];
    let _ = writeln!(
        out,
        "{:indent$}{} mod {}^{}  St = {}  {:?}",
        "",
        n.ball.center,
        n.ball.prime,
        n.ball.scale,
        n.count,
        n.disposition,
        indent = indent * 2
    );
    for child in tree.children(node) {
        tree_text(tree, child, indent + 1, out);
    }
}
