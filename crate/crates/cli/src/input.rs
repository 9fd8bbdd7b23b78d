use std::fmt;
use std::path::Path;

use serde::Deserialize;
use strassman::{Ball, IntPoly, ParsePolyError, Prime};

pub const PRECISION_ENV: &str = "PADIC_DEFAULT_PRECISION";

/// Problems with the command line or input file; all exit with code 1.
#[derive(Debug)]
pub enum InputError {
    Parse(ParsePolyError),
    File(String),
    Invalid(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse(e) => write!(f, "cannot parse coefficients: {e}"),
            InputError::File(e) => write!(f, "cannot read input: {e}"),
            InputError::Invalid(e) => f.write_str(e),
        }
    }
}

impl From<ParsePolyError> for InputError {
    fn from(e: ParsePolyError) -> Self {
        InputError::Parse(e)
    }
}

/// `{"p": 2, "precision": 32, "coeffs": ["0", "2", "1"]}`; coefficients may also be JSON integers.
#[derive(Debug, Deserialize)]
struct InputFile {
    p: u64,
    precision: Option<u32>,
    coeffs: Vec<Coefficient>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Text(String),
    Int(i64),
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Text(s) => f.write_str(s),
            Coefficient::Int(n) => write!(f, "{n}"),
        }
    }
}

/// A polynomial with its prime and the precision to embed it at.
#[derive(Debug, Clone)]
pub struct Problem {
    pub poly: IntPoly,
    pub prime: Prime,
    pub precision: u32,
}

pub fn load(
    p: Option<u64>,
    coeffs: Option<&str>,
    input: Option<&Path>,
    precision: Option<u32>,
) -> Result<Problem, InputError> {
    let (p, poly, file_precision) = match (input, coeffs) {
        (Some(_), Some(_)) => return Err(InputError::Invalid("give either --input or --coeffs, not both".into())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| InputError::File(format!("{}: {e}", path.display())))?;
            let file: InputFile = serde_json::from_str(&text).map_err(|e| InputError::File(e.to_string()))?;
            let joined = file.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
            let p = match p {
                Some(q) if q != file.p => {
                    return Err(InputError::Invalid(format!("--p {q} contradicts p = {} in the input file", file.p)))
                }
                _ => file.p,
            };
            (p, joined.parse::<IntPoly>()?, file.precision)
        }
        (None, Some(c)) => {
            let p = p.ok_or_else(|| InputError::Invalid("--p is required with --coeffs".into()))?;
            (p, c.parse::<IntPoly>()?, None)
        }
        (None, None) => return Err(InputError::Invalid("no polynomial: use --coeffs or --input".into())),
    };
    let prime = Prime::new(p).map_err(|e| InputError::Invalid(e.to_string()))?;
    let env_precision = match std::env::var(PRECISION_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<u32>()
                .map_err(|_| InputError::Invalid(format!("{PRECISION_ENV} must be a positive integer, got {v:?}")))?,
        ),
        Err(_) => None,
    };
    let precision = precision
        .or(file_precision)
        .or(env_precision)
        .unwrap_or(poly.degree() as u32 + strassman::solver::DEFAULT_PRECISION_SLACK);
    if precision == 0 {
        return Err(InputError::Invalid("precision must be at least 1".into()));
    }
    Ok(Problem { poly, prime, precision })
}

/// Parses `center:scale`.
pub fn parse_ball(text: &str, prime: Prime) -> Result<Ball, InputError> {
    let bad = || InputError::Invalid(format!("ball must be center:scale, got {text:?}"));
    let (c, s) = text.split_once(':').ok_or_else(bad)?;
    let center = c.trim().parse().map_err(|_| bad())?;
    let scale = s.trim().parse().map_err(|_| bad())?;
    Ok(Ball::new(prime, center, scale))
}
