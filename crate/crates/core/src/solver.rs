//! Root isolation in `Z_p` by Strassman-count subdivision.
//!
//! Starting from `Z_p`, a ball whose count exceeds one is split into the `p`
//! sub-balls of the next scale, keeping only those whose center reduces to a
//! root mod `p` of the normalized shifted polynomial. Balls with count one
//! are isolating and balls with count zero are dropped.

use std::fmt::Write as _;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counting::{strassman_count, Ball};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::modp::{reduce_mod_p, RootFinder};
use crate::padic::ring_ops;
use crate::poly::{IntPoly, PAdicPoly};
use crate::prime::Prime;
use crate::smale::{certify, SmaleData};

/// How the polynomial on a child ball is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftSource {
    /// Shift the input, then truncate at the parent's count.
    #[default]
    Input,
    /// Shift the input and keep every degree.
    FullDegree,
    /// Shift the input already normalized and truncated at its initial count.
    /// Terms dropped before the shift can decide a child's count, so this
    /// route can miss roots.
    TruncatedInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Initial precision; `None` means `d + 8`.
    pub precision: Option<u32>,
    /// Largest scale a subdivided ball may reach; `None` means initial precision + 2.
    pub max_depth: Option<u32>,
    pub seed: u64,
    /// Passed to [`RootFinder`].
    pub modp_threshold: Option<u64>,
    pub max_restarts: u32,
    pub shift_source: ShiftSource,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            precision: None,
            max_depth: None,
            seed: 0,
            modp_threshold: None,
            max_restarts: 4,
            shift_source: ShiftSource::Input,
        }
    }
}

pub const DEFAULT_PRECISION_SLACK: u32 = 8;

/// A ball still to be split: `g` is the normalized shift of `f` at `ball`, truncated at `count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkItem {
    pub g: PAdicPoly,
    pub ball: Ball,
    pub count: usize,
    /// Index of the node in the tree.
    pub node: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Disposition {
    Subdivided,
    Isolated,
    Discarded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub ball: Ball,
    pub count: usize,
    pub disposition: Disposition,
    pub parent: Option<usize>,
}

/// The balls visited during subdivision.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrassmanTree {
    pub nodes: Vec<TreeNode>,
    /// Multiplications mod p spent on root finding.
    pub modp_ops: u64,
    /// p-adic ring operations spent on shifts and counts.
    pub ring_ops: u64,
}

impl StrassmanTree {
    fn push(&mut self, ball: Ball, count: usize, disposition: Disposition, parent: Option<usize>) -> usize {
        self.nodes.push(TreeNode { ball, count, disposition, parent });
        self.nodes.len() - 1
    }

    /// Largest scale of any node.
    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.ball.scale).max().unwrap_or(0)
    }

    /// Largest number of nodes with positive count at one scale `s >= 1`.
    pub fn width(&self) -> usize {
        let mut per_scale = std::collections::BTreeMap::new();
        for n in self.nodes.iter().filter(|n| n.ball.scale >= 1 && n.count >= 1) {
            *per_scale.entry(n.ball.scale).or_insert(0usize) += 1;
        }
        per_scale.into_values().max().unwrap_or(0)
    }

    pub fn children(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(move |(_, n)| n.parent == Some(node))
            .map(|(i, _)| i)
    }

    pub fn stats(&self) -> TreeStats {
        TreeStats {
            depth: self.depth(),
            width: self.width(),
            nodes: self.nodes.len(),
            modp_ops: self.modp_ops,
            ring_ops: self.ring_ops,
        }
    }

    /// Graphviz rendering; nodes are labelled with center, scale, count and disposition.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph strassman {\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let style = match n.disposition {
                Disposition::Subdivided => "",
                Disposition::Isolated => ", style=bold",
                Disposition::Discarded => ", style=dashed",
            };
            let _ = writeln!(
                out,
                "  n{i} [label=\"{} mod {}^{}\\nSt = {}\\n{:?}\"{style}];",
                n.ball.center, n.ball.prime, n.ball.scale, n.count, n.disposition
            );
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let _ = writeln!(out, "  n{p} -> n{i};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub depth: u32,
    pub width: usize,
    pub nodes: usize,
    pub modp_ops: u64,
    pub ring_ops: u64,
}

/// An isolating ball with its alpha-theory data at the center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCertificate {
    pub ball: Ball,
    pub smale: SmaleData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationResult {
    /// Sorted by scale, then center.
    pub certificates: Vec<RootCertificate>,
    pub tree: StrassmanTree,
    /// Precision of the successful run.
    pub precision: u32,
    pub initial_precision: u32,
    pub restarts: u32,
    pub seed: u64,
}

impl IsolationResult {
    pub fn balls(&self) -> Vec<Ball> {
        self.certificates.iter().map(|c| c.ball.clone()).collect()
    }
}

/// Either the answer is already known from the count on `Z_p`, or there is work to do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Initial {
    Done { count: usize, balls: Vec<Ball> },
    Work { f_in: PAdicPoly, item: WorkItem },
}

/// Counts on `Z_p` and builds the root work item.
pub fn handle_initial(f: &PAdicPoly) -> Result<Initial> {
    let count = strassman_count(f)?;
    let balls = match count {
        0 => Vec::new(),
        1 => vec![Ball::unit(f.prime())],
        _ => {
            let f_in = f.normalize_truncate(count)?;
            let item = WorkItem { g: f_in.clone(), ball: Ball::unit(f.prime()), count, node: 0 };
            return Ok(Initial::Work { f_in, item });
        }
    };
    Ok(Initial::Done { count, balls })
}

/// What one split produced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepOutcome {
    pub children: Vec<WorkItem>,
    pub isolated: Vec<Ball>,
    pub discarded: Vec<Ball>,
}

/// Splits one ball. `source` is the polynomial the shifts are taken from and
/// `cap` the degree they are truncated at after shifting.
pub fn subdivide_step<R: rand::Rng + ?Sized>(
    item: &WorkItem,
    source: &PAdicPoly,
    cap: usize,
    finder: &mut RootFinder,
    rng: &mut R,
    tree: &mut StrassmanTree,
) -> Result<StepOutcome> {
    let prime = source.prime();
    let b = source.effective_precision();
    let residues = finder.roots(&reduce_mod_p(&item.g)?, rng)?;
    let step = prime.pow(item.ball.scale);
    let mut out = StepOutcome::default();
    for a in residues {
        let child = Ball::new(prime, &item.ball.center + &step * BigUint::from(a), item.ball.scale + 1);
        let h = source.ball_substitute(&child.center_at(b)?, child.scale, cap)?;
        let count = strassman_count(&h)?;
        match count {
            0 => {
                tree.push(child.clone(), 0, Disposition::Discarded, Some(item.node));
                out.discarded.push(child);
            }
            1 => {
                tree.push(child.clone(), 1, Disposition::Isolated, Some(item.node));
                out.isolated.push(child);
            }
            _ => {
                let g = h.normalize_truncate(count)?;
                let node = tree.push(child.clone(), count, Disposition::Subdivided, Some(item.node));
                out.children.push(WorkItem { g, ball: child, count, node });
            }
        }
    }
    Ok(out)
}

/// One run at the precision `f` carries, with no restarts.
pub fn solve_at_precision(f: &PAdicPoly, config: &SolverConfig, max_depth: u32) -> Result<(Vec<RootCertificate>, StrassmanTree)> {
    let ops_before = ring_ops();
    let mut tree = StrassmanTree::default();
    let mut finder = RootFinder::new(config.modp_threshold);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut isolated = Vec::new();
    match handle_initial(f)? {
        Initial::Done { count, balls } => {
            let disposition = if count == 0 { Disposition::Discarded } else { Disposition::Isolated };
            tree.push(Ball::unit(f.prime()), count, disposition, None);
            isolated = balls;
        }
        Initial::Work { f_in, item } => {
            tree.push(item.ball.clone(), item.count, Disposition::Subdivided, None);
            let source = match config.shift_source {
                ShiftSource::TruncatedInput => &f_in,
                ShiftSource::Input | ShiftSource::FullDegree => f,
            };
            let mut stack = vec![item];
            while let Some(item) = stack.pop() {
                if item.ball.scale >= max_depth {
                    return Err(Error::MaxDepthExceeded(max_depth, max_depth.saturating_sub(1)));
                }
                let cap = match config.shift_source {
                    ShiftSource::FullDegree => f.degree(),
                    _ => item.count,
                };
                let out = subdivide_step(&item, source, cap, &mut finder, &mut rng, &mut tree)?;
                isolated.extend(out.isolated);
                stack.extend(out.children.into_iter().rev());
            }
        }
    }

    let b = f.effective_precision();
    let mut certificates = Vec::with_capacity(isolated.len());
    for ball in isolated {
        let cert = certify(f, &ball.center_at(b)?);
        if !cert.certified {
            let data = cert.data;
            let inexact = [data.alpha, data.beta, data.gamma].iter().any(|e| matches!(e, Exponent::AtLeast(_)));
            return Err(if inexact {
                Error::exhausted(format!("alpha at the center of {ball} only known as a bound"))
            } else {
                Error::CertificationFailed(ball.to_string())
            });
        }
        certificates.push(RootCertificate { ball, smale: cert.data });
    }
    certificates.sort_by(|x, y| x.ball.cmp(&y.ball));
    tree.modp_ops = finder.mults;
    tree.ring_ops = ring_ops() - ops_before;
    Ok((certificates, tree))
}

/// Isolates the roots of `f` in `Z_p`, doubling the precision whenever it runs out.
pub fn solve(f: &IntPoly, prime: Prime, config: &SolverConfig) -> Result<IsolationResult> {
    let initial = config
        .precision
        .unwrap_or(f.degree() as u32 + DEFAULT_PRECISION_SLACK);
    let max_depth = config.max_depth.unwrap_or(initial + 2);
    let mut precision = initial;
    let mut restarts = 0;
    loop {
        let fp = f.to_padic(prime, precision)?;
        match solve_at_precision(&fp, config, max_depth) {
            Ok((certificates, tree)) => {
                return Ok(IsolationResult {
                    certificates,
                    tree,
                    precision,
                    initial_precision: initial,
                    restarts,
                    seed: config.seed,
                })
            }
            Err(Error::PrecisionExhausted(_)) if restarts < config.max_restarts => {
                restarts += 1;
                precision *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

/// [`solve`] for a polynomial already in `Z_p[T]`; its residues are taken as exact integers.
pub fn solve_padic(f: &PAdicPoly, config: &SolverConfig) -> Result<IsolationResult> {
    let config = SolverConfig {
        precision: Some(config.precision.unwrap_or(f.effective_precision())),
        ..config.clone()
    };
    solve(&f.to_int_poly(), f.prime(), &config)
}
