//! Monte Carlo experiments on random p-adic polynomials.
//!
//! A random polynomial of degree `d` has `d + 1` independent Haar-uniform
//! coefficients in `Z_p`, approximated by uniform residues mod `p^b`. Each
//! trial draws from its own ChaCha stream keyed by `(seed, trial index)`, so
//! reports are reproducible whatever the thread count.

pub mod predict;

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::condition::{kappa_global_report, kappa_local, KappaValue};
use crate::counting::{strassman_count, strassman_count_ball, Ball};
use crate::error::{Error, Result};
use crate::padic::{PAdicInt, Valuation};
use crate::poly::{IntPoly, PAdicPoly};
use crate::prime::Prime;
use crate::solver::{solve, SolverConfig, DEFAULT_PRECISION_SLACK};

use predict::to_f64;

/// Verdicts allow this many standard errors.
pub const TOLERANCE_SE: f64 = 3.0;

/// Largest share of solver trials allowed to need a restart.
pub const MAX_RESTART_RATE: f64 = 0.05;

pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub prime: Prime,
    pub degree: usize,
    /// Digits sampled per coefficient.
    pub precision: u32,
    pub trials: usize,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(prime: Prime, degree: usize, trials: usize, seed: u64) -> Self {
        SampleConfig {
            prime,
            degree,
            precision: degree as u32 + DEFAULT_PRECISION_SLACK,
            trials,
            seed,
        }
    }

    pub fn with_precision(self, precision: u32) -> Self {
        SampleConfig { precision, ..self }
    }
}

/// The generator for one trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// A uniform residue mod `p^digits`, drawn digit by digit.
pub fn sample_residue<R: Rng + ?Sized>(prime: Prime, digits: u32, rng: &mut R) -> BigUint {
    let p = prime.get();
    (0..digits).fold(BigUint::default(), |acc, _| acc * p + rng.gen_range(0..p))
}

/// The coefficient residues of trial `trial`.
pub fn sample_coeffs(config: &SampleConfig, trial: usize) -> Vec<BigUint> {
    let mut rng = trial_rng(config.seed, trial);
    (0..=config.degree)
        .map(|_| sample_residue(config.prime, config.precision, &mut rng))
        .collect()
}

/// The random polynomial of trial `trial`.
pub fn sample_poly(config: &SampleConfig, trial: usize) -> PAdicPoly {
    let coeffs = sample_coeffs(config, trial)
        .into_iter()
        .map(|c| PAdicInt::reduced(c, config.prime, config.precision))
        .collect();
    PAdicPoly::new(config.prime, coeffs).expect("degree + 1 coefficients over one prime")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// `|empirical - reference| <= 3 SE`.
    TwoSided,
    /// `empirical <= reference + 3 SE`.
    AtMost,
    /// `empirical >= reference - 3 SE`.
    AtLeast,
    /// Exact equality.
    Exact,
}

/// One verdict of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub empirical: f64,
    pub reference: f64,
    /// The reference as an exact fraction, when it is rational.
    pub reference_exact: Option<String>,
    pub standard_error: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, kind: CheckKind, empirical: f64, reference: f64, se: f64) -> Self {
        let slack = TOLERANCE_SE * se + 1e-12;
        let passed = match kind {
            CheckKind::TwoSided => (empirical - reference).abs() <= slack,
            CheckKind::AtMost => empirical <= reference + slack,
            CheckKind::AtLeast => empirical >= reference - slack,
            CheckKind::Exact => empirical == reference,
        };
        Check {
            name: name.into(),
            kind,
            empirical,
            reference,
            reference_exact: None,
            standard_error: se,
            passed,
        }
    }

    pub fn exact_reference(mut self, r: &BigRational) -> Self {
        self.reference_exact = Some(r.to_string());
        self
    }

    /// A proportion against a rational reference, with the standard error of
    /// a binomial proportion at the reference value.
    pub fn proportion(name: impl Into<String>, kind: CheckKind, hits: usize, n: usize, reference: &BigRational) -> Self {
        let r = to_f64(reference);
        let se = binomial_se(r, n);
        Check::new(name, kind, ratio(hits, n), r, se).exact_reference(reference)
    }
}

fn ratio(a: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        a as f64 / n as f64
    }
}

fn binomial_se(q: f64, n: usize) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    (q * (1.0 - q) / n as f64).max(0.0).sqrt()
}

/// Mean and standard error of the mean.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::INFINITY);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn median(mut xs: Vec<u64>) -> u64 {
    if xs.is_empty() {
        return 0;
    }
    xs.sort_unstable();
    xs[xs.len() / 2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistic {
    pub name: String,
    pub value: f64,
}

/// Empirical statistics, exact predictions and verdicts of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub prime: u64,
    pub degree: usize,
    pub precision: u32,
    pub trials: usize,
    pub seed: u64,
    /// Trials whose outcome working precision could not decide.
    pub undecided: usize,
    pub statistics: Vec<Statistic>,
    pub checks: Vec<Check>,
}

impl ExperimentReport {
    fn new(experiment: &str, config: &SampleConfig) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            prime: config.prime.get(),
            degree: config.degree,
            precision: config.precision,
            trials: config.trials,
            seed: config.seed,
            undecided: 0,
            statistics: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn stat(&mut self, name: impl Into<String>, value: f64) {
        self.statistics.push(Statistic { name: name.into(), value });
    }

    pub fn statistic(&self, name: &str) -> Option<f64> {
        self.statistics.iter().find(|s| s.name == name).map(|s| s.value)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn run_trials<T: Send>(config: &SampleConfig, trial: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..config.trials).into_par_iter().map(trial).collect()
}

/// Distribution and mean of `St(f; 0, 1)` against their closed forms.
pub fn experiment_st_unit(config: &SampleConfig) -> ExperimentReport {
    let p = config.prime.get();
    let d = config.degree;
    let outcomes = run_trials(config, |i| strassman_count(&sample_poly(config, i)).ok());
    let decided: Vec<usize> = outcomes.iter().flatten().copied().collect();
    let n = decided.len();

    let mut report = ExperimentReport::new("st-unit", config);
    report.undecided = config.trials - n;
    for l in 0..=d {
        let hits = decided.iter().filter(|&&c| c == l).count();
        let law = predict::st_unit_probability(p, d, l);
        report.checks.push(Check::proportion(format!("P(St = {l})"), CheckKind::TwoSided, hits, n, &law));
    }
    let mean = ratio(decided.iter().sum(), n);
    let exact_mean = predict::st_unit_mean(p, d);
    let se = (to_f64(&predict::st_unit_variance(p, d)) / n as f64).sqrt();
    report.stat("mean St", mean);
    report
        .checks
        .push(Check::new("E St", CheckKind::TwoSided, mean, to_f64(&exact_mean), se).exact_reference(&exact_mean));
    report
}

/// Tails of `St(f; 0, p^{-s})` and the expected total count over the balls of scale `s`.
pub fn experiment_st_ball(config: &SampleConfig, s: u32) -> Result<ExperimentReport> {
    if s == 0 {
        return Err(Error::PreconditionViolated("ball experiment needs s >= 1".into()));
    }
    let prime = config.prime;
    let p = prime.get();
    let balls: Vec<Ball> = (0..p.pow(s)).map(|n| Ball::new(prime, BigUint::from(n), s)).collect();
    let outcomes = run_trials(config, |i| {
        let f = sample_poly(config, i);
        balls
            .iter()
            .map(|b| strassman_count_ball(&f, b))
            .collect::<Result<Vec<usize>>>()
            .ok()
    });
    let decided: Vec<Vec<usize>> = outcomes.into_iter().flatten().collect();
    let n = decided.len();

    let mut report = ExperimentReport::new("st-ball", config);
    report.undecided = config.trials - n;
    report.stat("s", f64::from(s));
    for l in 1..=config.degree {
        let hits = decided.iter().filter(|c| c[0] >= l).count();
        let bound = predict::st_ball_tail_bound(p, s, l);
        report.checks.push(Check::proportion(
            format!("P(St(f; 0, p^-{s}) >= {l})"),
            CheckKind::AtMost,
            hits,
            n,
            &bound,
        ));
    }
    let at_zero: Vec<f64> = decided.iter().map(|c| c[0] as f64).collect();
    let (m0, se0) = mean_se(&at_zero);
    report.stat("mean St(f; 0, p^-s)", m0);
    report.checks.push(Check::new(
        "E St(f; 0, p^-s) per-ball bound",
        CheckKind::AtMost,
        m0,
        predict::st_ball_moment_bound(p, s, 1),
        se0,
    ));
    let sums: Vec<f64> = decided.iter().map(|c| c.iter().sum::<usize>() as f64).collect();
    let (m, se) = mean_se(&sums);
    report.stat("mean total St at scale s", m);
    report.checks.push(Check::new(
        "E sum_n St(f; n, p^-s)",
        CheckKind::AtMost,
        m,
        predict::st_ball_sum_bound(p, s, 1),
        se,
    ));
    let max_at_zero = decided.iter().map(|c| c[0]).max().unwrap_or(0);
    report.checks.push(Check::new(
        "St(f; 0, p^-s) <= d",
        CheckKind::AtMost,
        max_at_zero as f64,
        config.degree as f64,
        0.0,
    ));
    Ok(report)
}

/// Outcome of a condition-number tail event at finite precision.
fn tail_event(kappa: Result<KappaValue>, s: u32) -> Option<bool> {
    match kappa {
        Ok(KappaValue::Finite(e)) => Some(e >= s),
        Ok(KappaValue::Infinite) => Some(true),
        Err(Error::MaxDepthExceeded(_, lower)) if lower >= s => Some(true),
        Err(_) => None,
    }
}

pub const KAPPA_TAIL_SCALES: [u32; 4] = [1, 2, 3, 4];

/// Tails of `kappa(f, 0)` and `kappa(f)` against their bounds, for `s = 1..=4`.
pub fn experiment_kappa_tail(config: &SampleConfig) -> ExperimentReport {
    let p = config.prime.get();
    let outcomes = run_trials(config, |i| {
        let f = sample_poly(config, i);
        let x = PAdicInt::reduced(BigUint::default(), config.prime, config.precision);
        let local = kappa_local(&f, &x);
        let global = kappa_global_report(&f).map(|g| g.kappa);
        KAPPA_TAIL_SCALES.map(|s| (tail_event(local.clone(), s), tail_event(global.clone(), s)))
    });

    let mut report = ExperimentReport::new("kappa-tail", config);
    let mut undecided = 0;
    for (j, &s) in KAPPA_TAIL_SCALES.iter().enumerate() {
        let local: Vec<bool> = outcomes.iter().filter_map(|o| o[j].0).collect();
        let global: Vec<bool> = outcomes.iter().filter_map(|o| o[j].1).collect();
        undecided = undecided.max(config.trials - local.len()).max(config.trials - global.len());
        let hits = local.iter().filter(|&&e| e).count();
        report.checks.push(Check::proportion(
            format!("P(kappa(f, 0) >= p^{s}) upper"),
            CheckKind::AtMost,
            hits,
            local.len(),
            &predict::kappa_local_tail_upper(p, s),
        ));
        if config.degree >= 2 {
            report.checks.push(Check::proportion(
                format!("P(kappa(f, 0) >= p^{s}) lower"),
                CheckKind::AtLeast,
                hits,
                local.len(),
                &predict::kappa_local_tail_lower(p, s),
            ));
        }
        let hits = global.iter().filter(|&&e| e).count();
        report.checks.push(Check::proportion(
            format!("P(kappa(f) >= p^{s})"),
            CheckKind::AtMost,
            hits,
            global.len(),
            &predict::kappa_global_tail_upper(p, s),
        ));
    }
    report.undecided = undecided;
    report
}

/// `P(||x|| / ||x_{1..r}|| >= p^s)` for `x` uniform in `Z_p^n`.
pub fn experiment_projection(config: &SampleConfig, n: usize, r: usize, s: u32) -> Result<ExperimentReport> {
    if r == 0 || r > n || s == 0 {
        return Err(Error::PreconditionViolated("projection needs 1 <= r <= n and s >= 1".into()));
    }
    let b = config.precision;
    let outcomes = run_trials(config, |i| {
        let mut rng = trial_rng(config.seed, i);
        let vals: Vec<Valuation> = (0..n)
            .map(|_| PAdicInt::reduced(sample_residue(config.prime, b, &mut rng), config.prime, b).valuation())
            .collect();
        let whole = vals.iter().filter_map(|v| v.known()).min()?;
        let head = vals[..r].iter().map(|v| v.lower_bound()).min().expect("r >= 1");
        let head_known = vals[..r].iter().any(|v| v.known() == Some(head));
        if head - whole >= s {
            Some(true)
        } else if head_known {
            Some(false)
        } else {
            None
        }
    });
    let decided: Vec<bool> = outcomes.into_iter().flatten().collect();
    let mut report = ExperimentReport::new("projection", config);
    report.degree = n;
    report.undecided = config.trials - decided.len();
    report.stat("n", n as f64);
    report.stat("r", r as f64);
    report.stat("s", f64::from(s));
    let hits = decided.iter().filter(|&&e| e).count();
    report.checks.push(Check::proportion(
        format!("P(||x|| / ||x_1..{r}|| >= p^{s})"),
        CheckKind::TwoSided,
        hits,
        decided.len(),
        &predict::projection_tail(n, r, config.prime.get(), s),
    ));
    Ok(report)
}

/// Per-trial outcome of a solver run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverTrial {
    pub roots: usize,
    pub depth: u32,
    pub width: usize,
    pub restarts: u32,
    pub precision: u32,
    pub ring_ops: u64,
    pub modp_ops: u64,
}

/// Runs the solver on trial `trial` with default settings.
pub fn solver_trial(config: &SampleConfig, trial: usize) -> Result<SolverTrial> {
    let coeffs = sample_coeffs(config, trial).into_iter().map(Into::into).collect();
    let f = IntPoly::new(coeffs)?;
    let solver = SolverConfig { seed: config.seed ^ trial as u64, ..SolverConfig::default() };
    let r = solve(&f, config.prime, &solver)?;
    Ok(SolverTrial {
        roots: r.certificates.len(),
        depth: r.tree.depth(),
        width: r.tree.width(),
        restarts: r.restarts,
        precision: r.precision,
        ring_ops: r.tree.ring_ops,
        modp_ops: r.tree.modp_ops,
    })
}

/// Average-case behaviour of the solver: depth, width, restarts, precision and work.
///
/// Coefficients are sampled with `config.precision` digits; the solver starts
/// at `d + 8` and may restart with more of them.
pub fn experiment_solver_average(config: &SampleConfig) -> ExperimentReport {
    let p = config.prime.get();
    let d = config.degree;
    let outcomes = run_trials(config, |i| solver_trial(config, i));
    let ok: Vec<SolverTrial> = outcomes.iter().filter_map(|o| o.as_ref().ok().copied()).collect();
    let failures = outcomes.len() - ok.len();

    let mut report = ExperimentReport::new("solver-average", config);
    report.undecided = failures;
    let col = |f: fn(&SolverTrial) -> f64| ok.iter().map(f).collect::<Vec<f64>>();

    let (depth, depth_se) = mean_se(&col(|t| f64::from(t.depth)));
    let (width, width_se) = mean_se(&col(|t| t.width as f64));
    let (prec, prec_se) = mean_se(&col(|t| f64::from(t.precision)));
    let (roots, _) = mean_se(&col(|t| t.roots as f64));
    let restarted = ok.iter().filter(|t| t.restarts > 0).count();
    report.stat("mean depth", depth);
    report.stat("mean width", width);
    report.stat("mean roots", roots);
    report.stat("mean final precision", prec);
    report.stat("restart rate", ratio(restarted, ok.len()));
    report.stat("median ring ops", median(ok.iter().map(|t| t.ring_ops).collect()) as f64);
    report.stat("median modp ops", median(ok.iter().map(|t| t.modp_ops).collect()) as f64);
    let mut depths: Vec<u64> = ok.iter().map(|t| u64::from(t.depth)).collect();
    depths.sort_unstable();
    if let Some(&p95) = depths.get(depths.len() * 95 / 100) {
        report.stat("p95 depth", p95 as f64);
    }

    let depth_bound = predict::mean_depth_bound(p);
    report.checks.push(
        Check::new("mean depth", CheckKind::AtMost, depth, to_f64(&depth_bound), depth_se)
            .exact_reference(&depth_bound),
    );
    report.checks.push(Check::new(
        "mean width",
        CheckKind::AtMost,
        width,
        predict::st_ball_sum_bound(p, 1, 1),
        width_se,
    ));
    report.checks.push(Check::new(
        "mean final precision",
        CheckKind::AtMost,
        prec,
        (d as u32 + DEFAULT_PRECISION_SLACK) as f64,
        prec_se,
    ));
    report.checks.push(Check::new(
        "restart rate",
        CheckKind::AtMost,
        ratio(restarted, ok.len()),
        MAX_RESTART_RATE,
        0.0,
    ));
    report.checks.push(Check::new("failed runs", CheckKind::Exact, failures as f64, 0.0, 0.0));
    report
}

/// Counts of `St(f)` over every coefficient tuple mod `p^b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    /// `counts[l]`: tuples with `St = l`.
    pub counts: Vec<u64>,
    /// Tuples where the count is undecidable (all coefficients vanish mod `p^b`).
    pub undecided: u64,
    pub total: u64,
}

/// Enumerates all `p^{b(d+1)}` coefficient tuples. Only for tiny parameters.
pub fn enumerate_st_unit(prime: Prime, degree: usize, precision: u32) -> Result<Enumeration> {
    let modulus = prime.get().pow(precision);
    let total = modulus.pow(degree as u32 + 1);
    let mut counts = vec![0u64; degree + 1];
    let mut undecided = 0;
    for code in 0..total {
        let mut rest = code;
        let coeffs = (0..=degree)
            .map(|_| {
                let c = rest % modulus;
                rest /= modulus;
                PAdicInt::reduced(BigUint::from(c), prime, precision)
            })
            .collect();
        match strassman_count(&PAdicPoly::new(prime, coeffs)?) {
            Ok(l) => counts[l] += 1,
            Err(Error::PrecisionExhausted(_)) => undecided += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(Enumeration { counts, undecided, total })
}

/// Exact comparison of the enumerated law with the closed form.
///
/// Tuples with a coefficient valuation below `b` decide the count exactly,
/// and they carry mass `1 - p^{-b(d+1)}` with the same conditional law as in
/// `Z_p`; so `counts[l] = P(St = l) (total - 1)` with one undecided tuple.
pub fn exhaustive_law_check(prime: Prime, degree: usize, precision: u32) -> Result<ExperimentReport> {
    let e = enumerate_st_unit(prime, degree, precision)?;
    let config = SampleConfig { prime, degree, precision, trials: e.total as usize, seed: 0 };
    let mut report = ExperimentReport::new("st-unit-exhaustive", &config);
    report.undecided = e.undecided as usize;
    let decided_mass = BigRational::from_integer((e.total - 1).into());
    for (l, &count) in e.counts.iter().enumerate() {
        let expected = predict::st_unit_probability(prime.get(), degree, l) * &decided_mass;
        report.checks.push(
            Check::new(format!("#(St = {l})"), CheckKind::Exact, count as f64, to_f64(&expected), 0.0)
                .exact_reference(&expected),
        );
    }
    report.checks.push(Check::new("undecided tuples", CheckKind::Exact, e.undecided as f64, 1.0, 0.0));
    let union_bound = (degree as f64 + 1.0) * (prime.get() as f64).powi(-(precision as i32));
    report.checks.push(Check::new(
        "undecided mass",
        CheckKind::AtMost,
        e.undecided as f64 / e.total as f64,
        union_bound,
        0.0,
    ));
    Ok(report)
}
