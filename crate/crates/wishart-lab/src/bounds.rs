//! Closed-form evaluators for the quantitative bounds and exact moment
//! identities attached to the ensembles.
//!
//! Universal constants are never hard-coded: every evaluator takes its
//! constant as an explicit argument (default 1 at the CLI layer) and
//! reports it back through [`BoundReport`].

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("required constant `{0}` missing from the argument record")]
    ConstantMissing(&'static str),
    #[error("argument outside the bound's domain: {0}")]
    DomainError(String),
    #[error("unknown tail bound kind `{0}`")]
    UnknownKind(String),
}

/// A named bound evaluation with the constant it used and the inputs it saw.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub constant_used: f64,
    pub inputs: BTreeMap<String, f64>,
}

impl BoundReport {
    pub fn new(name: &str, value: f64, constant_used: f64, inputs: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            value,
            constant_used,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Entropy bound for the projection of an i.i.d. vector:
/// n · min(2(ε + ζ²d)/c, 1) · Ent(ν‖γ₁).
pub fn projection_entropy_bound(
    epsilon: f64,
    gram_zeta: f64,
    n: usize,
    d: usize,
    c: f64,
    ent1: f64,
) -> f64 {
    assert!(c > 0.0 && c <= 1.0, "spectral gap constant must lie in (0, 1]");
    assert!(ent1 >= 0.0 && epsilon >= 0.0 && gram_zeta >= 0.0);
    let factor = (2.0 * (epsilon + gram_zeta * gram_zeta * d as f64) / c).min(1.0);
    n as f64 * factor * ent1
}

/// Quantitative bound on the squared total variation between the hollow
/// Wishart and hollow Gaussian ensembles:
/// C · (n³·ln(n)·ln⁴(d)/d + √(n³/d)), natural logarithms.
pub fn tv_squared_bound(n: usize, d: usize, c_const: f64) -> f64 {
    assert!(n >= 1 && d >= 2 && c_const > 0.0);
    let nf = n as f64;
    let df = d as f64;
    let n3 = nf * nf * nf;
    c_const * (n3 * nf.ln() * df.ln().powi(4) / df + (n3 / df).sqrt())
}

/// Exact finite-size moments of the cubic-trace statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicTraceMoments {
    /// E Tr(W³) under the hollow Wishart ensemble: n(n−1)(n−2)/√d, valid
    /// for any unit-variance entry law.
    pub wishart_mean: f64,
    /// E Tr(G³) under the hollow Gaussian ensemble.
    pub gaussian_mean: f64,
    /// Var Tr(G³) = 6·n(n−1)(n−2) (one unit of variance per ordered
    /// closed walk around each of the C(n,3) triangles).
    pub gaussian_var: f64,
}

pub fn cubic_trace_moments(n: usize, d: usize) -> CubicTraceMoments {
    assert!(n >= 1 && d >= 1);
    let nf = n as f64;
    let triangles6 = nf * (nf - 1.0) * (nf - 2.0);
    CubicTraceMoments {
        wishart_mean: triangles6 / (d as f64).sqrt(),
        gaussian_mean: 0.0,
        gaussian_var: 6.0 * triangles6,
    }
}

/// Bound on E[−logdet((1/d)XXᵀ)]: C·(√(n/d) + n²/d).
pub fn logdet_bound(n: usize, d: usize, c_const: f64) -> f64 {
    assert!(n >= 1 && d >= 1 && c_const > 0.0);
    let nf = n as f64;
    let df = d as f64;
    c_const * ((nf / df).sqrt() + nf * nf / df)
}

/// Exact deviation-moment identities driven by the entry law's fourth
/// moment ζ₄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentIdentities {
    /// Upper bound on E|Tr(I − G)|: √((ζ₄−1)·n/d).
    pub trace_bound: f64,
    /// Exact expectation E‖I − G‖²_HS = (n²−n)/d + n(ζ₄−1)/d.
    pub hs_expect: f64,
}

pub fn moment_identities(n: usize, d: usize, fourth_moment: f64) -> MomentIdentities {
    assert!(fourth_moment >= 1.0, "unit-variance laws have fourth moment >= 1");
    let nf = n as f64;
    let df = d as f64;
    MomentIdentities {
        trace_bound: ((fourth_moment - 1.0) * nf / df).sqrt(),
        hs_expect: (nf * nf - nf) / df + nf * (fourth_moment - 1.0) / df,
    }
}

/// The tail estimates used by the small-ball argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailBoundKind {
    /// P(|Y| ≥ (1+t)√n) ≤ exp(−c·t·√n) for isotropic log-concave Y ∈ ℝⁿ.
    PaourisLarge,
    /// P(|Y| ≤ ε√d) ≤ (c·ε)^√d for isotropic log-concave Y ∈ ℝᵈ,
    /// ε ∈ (0, 1/10].
    PaourisSmallBall,
    /// Operator-norm deviation: C′·√(n·ln(n)/d)·ln²(1/δ).
    AlptOpNorm,
    /// Net cardinality factor (3/s)ⁿ of the ε-net argument.
    LambdaMinNet,
}

impl std::str::FromStr for TailBoundKind {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paouris_large" => Ok(Self::PaourisLarge),
            "paouris_smallball" => Ok(Self::PaourisSmallBall),
            "alpt_opnorm" => Ok(Self::AlptOpNorm),
            "lambda_min_net" => Ok(Self::LambdaMinNet),
            other => Err(BoundsError::UnknownKind(other.to_string())),
        }
    }
}

fn require(args: &BTreeMap<String, f64>, name: &'static str) -> Result<f64, BoundsError> {
    args.get(name).copied().ok_or(BoundsError::ConstantMissing(name))
}

/// Evaluates one tail-bound right-hand side from a key-value argument
/// record. Required keys per kind:
/// paouris_large: t, n, c; paouris_smallball: eps, d, c;
/// alpt_opnorm: n, d, delta, cprime; lambda_min_net: s, n.
pub fn tail_bound(kind: TailBoundKind, args: &BTreeMap<String, f64>) -> Result<f64, BoundsError> {
    match kind {
        TailBoundKind::PaourisLarge => {
            let t = require(args, "t")?;
            let n = require(args, "n")?;
            let c = require(args, "c")?;
            if t < 0.0 || n < 1.0 {
                return Err(BoundsError::DomainError(format!("need t >= 0, n >= 1 (t={t}, n={n})")));
            }
            Ok((-c * t * n.sqrt()).exp())
        }
        TailBoundKind::PaourisSmallBall => {
            let eps = require(args, "eps")?;
            let d = require(args, "d")?;
            let c = require(args, "c")?;
            if !(eps > 0.0 && eps <= 0.1) {
                return Err(BoundsError::DomainError(format!("eps={eps} outside (0, 1/10]")));
            }
            Ok((c * eps).powf(d.sqrt()))
        }
        TailBoundKind::AlptOpNorm => {
            let n = require(args, "n")?;
            let d = require(args, "d")?;
            let delta = require(args, "delta")?;
            let cprime = require(args, "cprime")?;
            if !(delta > 0.0 && delta < 1.0) {
                return Err(BoundsError::DomainError(format!("delta={delta} outside (0, 1)")));
            }
            Ok(cprime * (n * n.ln() / d).sqrt() * (1.0 / delta).ln().powi(2))
        }
        TailBoundKind::LambdaMinNet => {
            let s = require(args, "s")?;
            let n = require(args, "n")?;
            if s <= 0.0 {
                return Err(BoundsError::DomainError(format!("s={s} must be positive")));
            }
            Ok((3.0 / s).powf(n))
        }
    }
}
