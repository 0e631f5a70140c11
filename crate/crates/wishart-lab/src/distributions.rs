//! Standardized (mean 0, variance 1) log-concave entry laws.
//!
//! Every law carries exact analytic moments, its relative entropy to the
//! standard Gaussian, and a Poincaré (spectral-gap) lower bound. The family
//! is deliberately small — gaussian, uniform, laplace, and the
//! exponential-power interpolation between them — spanning smooth and
//! non-smooth log-concave densities with closed-form constants.

use crate::quad;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

/// ½·ln(2πe), the differential entropy of the standard Gaussian.
pub const HALF_LN_2PI_E: f64 = 1.418_938_533_204_672_7;

/// Upper bound on the fourth moment of any standardized log-concave law.
pub const FOURTH_MOMENT_CAP: f64 = 70.0;

/// Conservative Poincaré-constant lower bound for standardized log-concave
/// laws; the gaussian attains gap exactly 1.
pub const DEFAULT_SPECTRAL_GAP_LB: f64 = 1.0 / 12.0;

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_2PI: f64 = 1.837_877_066_409_345_3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistributionError {
    #[error("unknown distribution kind `{0}`")]
    UnknownKind(String),
    #[error("{kind} takes {expected} parameter(s), got {got}")]
    BadParameterCount { kind: &'static str, expected: usize, got: usize },
    #[error("parameter {name}={value} outside the log-concave range {range}")]
    ParameterOutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("spectral gap lower bound {0} outside (0, 1]")]
    BadSpectralGap(f64),
    #[error(transparent)]
    Quadrature(#[from] quad::QuadError),
}

/// Which member of the standardized log-concave family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionKind {
    Gaussian,
    Uniform,
    Laplace,
    /// Density ∝ exp(−|x/α|^β) with β ∈ [1, 2]; β = 1 is laplace, β = 2
    /// gaussian.
    ExponentialPower { beta: f64 },
}

impl DistributionKind {
    pub fn name(&self) -> &'static str {
        match self {
            DistributionKind::Gaussian => "gaussian",
            DistributionKind::Uniform => "uniform",
            DistributionKind::Laplace => "laplace",
            DistributionKind::ExponentialPower { .. } => "exponential_power",
        }
    }
}

/// A standardized one-dimensional log-concave law.
///
/// `shift` and `scale` record the affine standardization of the family's
/// base form: the standardized variable is `X = (Y - shift) / scale` where
/// `Y` follows the conventional parameterization (unit-scale base). All
/// derived constants are exact (closed form through the gamma function).
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateLogConcave {
    kind: DistributionKind,
    shift: f64,
    scale: f64,
    fourth_moment: f64,
    rel_ent_gaussian: f64,
    spectral_gap_lb: f64,
    /// Scale α of the standardized exponential-power density; 0 when unused.
    ep_alpha: f64,
}

impl UnivariateLogConcave {
    /// Standard normal N(0, 1).
    pub fn gaussian() -> Self {
        Self {
            kind: DistributionKind::Gaussian,
            shift: 0.0,
            scale: 1.0,
            fourth_moment: 3.0,
            rel_ent_gaussian: 0.0,
            spectral_gap_lb: 1.0,
            ep_alpha: 0.0,
        }
    }

    /// Uniform on [-√3, √3].
    pub fn uniform() -> Self {
        Self {
            kind: DistributionKind::Uniform,
            shift: 0.0,
            scale: 1.0 / SQRT_3,
            fourth_moment: 9.0 / 5.0,
            rel_ent_gaussian: HALF_LN_2PI_E - (2.0 * SQRT_3).ln(),
            spectral_gap_lb: DEFAULT_SPECTRAL_GAP_LB,
            ep_alpha: 0.0,
        }
    }

    /// Laplace with scale b = 1/√2 (unit variance).
    pub fn laplace() -> Self {
        Self {
            kind: DistributionKind::Laplace,
            shift: 0.0,
            scale: SQRT_2,
            fourth_moment: 6.0,
            rel_ent_gaussian: HALF_LN_2PI_E - (1.0 + 0.5 * std::f64::consts::LN_2),
            spectral_gap_lb: DEFAULT_SPECTRAL_GAP_LB,
            ep_alpha: 1.0 / SQRT_2,
        }
    }

    /// Exponential-power (generalized normal) law with shape β ∈ [1, 2],
    /// standardized to unit variance.
    pub fn exponential_power(beta: f64) -> Result<Self, DistributionError> {
        if !(1.0..=2.0).contains(&beta) {
            return Err(DistributionError::ParameterOutOfRange {
                name: "beta",
                value: beta,
                range: "[1, 2]",
            });
        }
        // Base form exp(-|y|^beta): std dev and moments via gamma ratios.
        let g1 = ln_gamma(1.0 / beta);
        let g3 = ln_gamma(3.0 / beta);
        let g5 = ln_gamma(5.0 / beta);
        let base_sd = (0.5 * (g3 - g1)).exp();
        let alpha = 1.0 / base_sd;
        let fourth = alpha.powi(4) * (g5 - g1).exp();
        // h = 1/beta + ln(2 alpha Gamma(1/beta) / beta)
        let entropy = 1.0 / beta + (2.0 * alpha / beta).ln() + g1;
        Ok(Self {
            kind: DistributionKind::ExponentialPower { beta },
            shift: 0.0,
            scale: base_sd,
            fourth_moment: fourth,
            rel_ent_gaussian: (HALF_LN_2PI_E - entropy).max(0.0),
            spectral_gap_lb: DEFAULT_SPECTRAL_GAP_LB,
            ep_alpha: alpha,
        })
    }

    /// Instantiates a law from its config-file name and parameter list.
    pub fn from_spec(name: &str, params: &[f64]) -> Result<Self, DistributionError> {
        let expect_none = |kind: &'static str| {
            if params.is_empty() {
                Ok(())
            } else {
                Err(DistributionError::BadParameterCount { kind, expected: 0, got: params.len() })
            }
        };
        match name {
            "gaussian" => {
                expect_none("gaussian")?;
                Ok(Self::gaussian())
            }
            "uniform" => {
                expect_none("uniform")?;
                Ok(Self::uniform())
            }
            "laplace" => {
                expect_none("laplace")?;
                Ok(Self::laplace())
            }
            "exponential_power" => {
                if params.len() != 1 {
                    return Err(DistributionError::BadParameterCount {
                        kind: "exponential_power",
                        expected: 1,
                        got: params.len(),
                    });
                }
                Self::exponential_power(params[0])
            }
            other => Err(DistributionError::UnknownKind(other.to_string())),
        }
    }

    /// Overrides the spectral-gap lower bound (must lie in (0, 1]).
    pub fn with_spectral_gap(mut self, c: f64) -> Result<Self, DistributionError> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(DistributionError::BadSpectralGap(c));
        }
        self.spectral_gap_lb = c;
        Ok(self)
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Exact fourth moment ζ₄ of the standardized law.
    pub fn fourth_moment(&self) -> f64 {
        self.fourth_moment
    }

    /// Ent(ν ‖ γ₁) = ½ln(2πe) − h(ν); zero exactly for the gaussian.
    pub fn rel_entropy_to_std_gaussian(&self) -> f64 {
        self.rel_ent_gaussian
    }

    /// Poincaré-constant lower bound c ∈ (0, 1].
    pub fn spectral_gap_lb(&self) -> f64 {
        self.spectral_gap_lb
    }

    /// Closed-form differential entropy h(ν) in nats.
    pub fn differential_entropy(&self) -> f64 {
        HALF_LN_2PI_E - self.rel_ent_gaussian
    }

    /// Support of the standardized density (±∞ for unbounded laws).
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            DistributionKind::Uniform => (-SQRT_3, SQRT_3),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Points where the density or its log-derivative is not smooth, in
    /// ascending order. Quadratures split panels here.
    pub fn kinks(&self) -> Vec<f64> {
        match self.kind {
            DistributionKind::Gaussian => vec![],
            DistributionKind::Uniform => vec![-SQRT_3, SQRT_3],
            DistributionKind::Laplace => vec![0.0],
            DistributionKind::ExponentialPower { beta } => {
                if beta < 2.0 {
                    vec![0.0]
                } else {
                    vec![]
                }
            }
        }
    }

    /// Density of the standardized law.
    pub fn density(&self, x: f64) -> f64 {
        match self.kind {
            DistributionKind::Gaussian => (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            DistributionKind::Uniform => {
                if (-SQRT_3..=SQRT_3).contains(&x) {
                    1.0 / (2.0 * SQRT_3)
                } else {
                    0.0
                }
            }
            DistributionKind::Laplace => (-SQRT_2 * x.abs()).exp() / SQRT_2,
            DistributionKind::ExponentialPower { beta } => {
                let a = self.ep_alpha;
                let norm = beta / (2.0 * a * ln_gamma(1.0 / beta).exp());
                norm * (-(x.abs() / a).powf(beta)).exp()
            }
        }
    }

    /// Natural log of the density; −∞ outside the support.
    pub fn log_density(&self, x: f64) -> f64 {
        match self.kind {
            DistributionKind::Gaussian => -0.5 * x * x - 0.5 * LN_2PI,
            DistributionKind::Uniform => {
                if (-SQRT_3..=SQRT_3).contains(&x) {
                    -(2.0 * SQRT_3).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            DistributionKind::Laplace => -SQRT_2 * x.abs() - 0.5 * std::f64::consts::LN_2,
            DistributionKind::ExponentialPower { beta } => {
                let a = self.ep_alpha;
                (beta / (2.0 * a)).ln() - ln_gamma(1.0 / beta) - (x.abs() / a).powf(beta)
            }
        }
    }

    /// Second derivative of −log f at x, where defined. `None` for laws
    /// whose log-density curvature carries a point mass (laplace), which
    /// pointwise evaluation cannot represent.
    pub fn log_density_curvature(&self, x: f64) -> Option<f64> {
        match self.kind {
            DistributionKind::Gaussian => Some(1.0),
            DistributionKind::Uniform => Some(0.0),
            DistributionKind::Laplace => None,
            DistributionKind::ExponentialPower { beta } => {
                if beta <= 1.0 {
                    None
                } else {
                    let a = self.ep_alpha;
                    Some(beta * (beta - 1.0) * x.abs().powf(beta - 2.0) / a.powf(beta))
                }
            }
        }
    }

    /// Closed-form Fisher information J(ν) = ∫ f'²/f of the standardized
    /// law; +∞ for the uniform (its density jumps at the support edges).
    pub fn fisher_information(&self) -> f64 {
        match self.kind {
            DistributionKind::Gaussian => 1.0,
            DistributionKind::Uniform => f64::INFINITY,
            DistributionKind::Laplace => 2.0,
            DistributionKind::ExponentialPower { beta } => {
                let a = self.ep_alpha;
                let lg = ln_gamma((2.0 * beta - 1.0) / beta) - ln_gamma(1.0 / beta);
                beta * beta * lg.exp() / (a * a)
            }
        }
    }

    /// Radius r with the analytic two-sided tail bound below `bound`.
    pub fn support_radius_for_tail(&self, bound: f64) -> f64 {
        assert!(bound > 0.0 && bound < 1.0);
        let log_inv = (1.0 / bound).ln();
        match self.kind {
            DistributionKind::Gaussian => (2.0 * log_inv).sqrt(),
            DistributionKind::Uniform => SQRT_3,
            DistributionKind::Laplace => log_inv / SQRT_2,
            DistributionKind::ExponentialPower { beta } => {
                // invert the dominating exponential, padding for the
                // algebraic prefactor
                self.ep_alpha * (log_inv + (2.0 * self.ep_alpha).max(1.0).ln() + 2.0).powf(1.0 / beta)
            }
        }
    }

    /// Analytic upper bound on the mass beyond ±r (two-sided).
    pub fn tail_mass_bound_beyond(&self, r: f64) -> f64 {
        assert!(r > 0.0);
        match self.kind {
            DistributionKind::Gaussian => (-0.5 * r * r).exp(),
            DistributionKind::Uniform => {
                if r >= SQRT_3 {
                    0.0
                } else {
                    1.0 - r / SQRT_3
                }
            }
            DistributionKind::Laplace => (-SQRT_2 * r).exp(),
            DistributionKind::ExponentialPower { beta } => {
                // For u >= u_r and beta >= 1: u^beta >= u_r^(beta-1) * u, so the
                // tail integral is dominated by an exponential.
                let u_r = r / self.ep_alpha;
                2.0 * self.ep_alpha * u_r.powf(1.0 - beta) * (-u_r.powf(beta)).exp()
            }
        }
    }

    /// One standardized draw.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            DistributionKind::Gaussian => rng.sample(StandardNormal),
            DistributionKind::Uniform => (2.0 * rng.random::<f64>() - 1.0) * SQRT_3,
            DistributionKind::Laplace => {
                let e: f64 = rng.sample(Exp1);
                let mag = e / SQRT_2;
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
            DistributionKind::ExponentialPower { beta } => {
                // |X/alpha|^beta ~ Gamma(1/beta, 1).
                let g = Gamma::new(1.0 / beta, 1.0).expect("valid gamma shape");
                let t: f64 = g.sample(rng);
                let mag = self.ep_alpha * t.powf(1.0 / beta);
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
        }
    }

    /// Fills `out` with i.i.d. standardized draws.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match self.kind {
            DistributionKind::Gaussian => {
                for v in out.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
            }
            DistributionKind::Uniform => {
                for v in out.iter_mut() {
                    *v = (2.0 * rng.random::<f64>() - 1.0) * SQRT_3;
                }
            }
            DistributionKind::Laplace => {
                for v in out.iter_mut() {
                    let e: f64 = rng.sample(Exp1);
                    let mag = e / SQRT_2;
                    *v = if rng.random::<bool>() { mag } else { -mag };
                }
            }
            DistributionKind::ExponentialPower { beta } => {
                let g = Gamma::new(1.0 / beta, 1.0).expect("valid gamma shape");
                for v in out.iter_mut() {
                    let t: f64 = g.sample(rng);
                    let mag = self.ep_alpha * t.powf(1.0 / beta);
                    *v = if rng.random::<bool>() { mag } else { -mag };
                }
            }
        }
    }

    /// `count` i.i.d. standardized draws.
    pub fn sample_vec<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; count];
        self.sample_into(rng, &mut out);
        out
    }

    /// Differential entropy by adaptive quadrature of −f·ln f, as an
    /// independent check on the closed forms. Integrates over the support
    /// clipped to ±QUAD_WINDOW; the analytic tail bound must be negligible.
    pub fn entropy_by_quadrature(&self, abs_tol: f64) -> Result<f64, DistributionError> {
        let integrand = |x: f64| {
            let f = self.density(x);
            if f > 0.0 {
                -f * f.ln()
            } else {
                0.0
            }
        };
        self.quadrature_of(&integrand, abs_tol)
    }

    /// ∫ g(x) f(x)-style adaptive quadrature over the clipped support with
    /// kink-aware panels.
    pub fn quadrature_of<F: Fn(f64) -> f64>(
        &self,
        integrand: &F,
        abs_tol: f64,
    ) -> Result<f64, DistributionError> {
        let (lo, hi) = self.support();
        let lo = lo.max(-QUAD_WINDOW);
        let hi = hi.min(QUAD_WINDOW);
        debug_assert!(self.tail_mass_bound_beyond(QUAD_WINDOW) < abs_tol * 1e-2);
        let mut pts = vec![lo];
        for k in self.kinks() {
            if k > lo && k < hi {
                pts.push(k);
            }
        }
        pts.push(0.0_f64.clamp(lo, hi));
        pts.push(hi);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        Ok(quad::adaptive_gk_segmented(integrand, &pts, abs_tol)?)
    }
}

/// Quadrature window half-width: ≈20 standard deviations, so every
/// implemented law's analytic tail bound is below 1e-11.
pub const QUAD_WINDOW: f64 = 20.0;

/// Draws `count` i.i.d. samples from the standardized law.
pub fn sample<R: Rng + ?Sized>(
    dist: &UnivariateLogConcave,
    count: usize,
    rng: &mut R,
) -> Vec<f64> {
    dist.sample_vec(count, rng)
}
