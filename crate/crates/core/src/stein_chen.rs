//! The exceedance point process of a field sample, dependence
//! neighborhoods, and computable versions of the three error terms in the
//! Poisson approximation of the exceedance count W = Σ 1{φ_α > u}:
//!
//! * `b1_bound` — neighborhood size × squared marginal tail;
//! * `b2_bound` — neighborhood size × a bivariate-tail bound at the worst
//!   admissible correlation (g(e₁) = (1−κ)·g(0));
//! * `b3_surrogate` — long-range term assembled from the Gaussian tail of
//!   the conditional drift and the variance mismatch of the conditional
//!   fluctuation; the third term has no closed form, so the surrogate keeps
//!   the proven decay shapes with unit constants and takes the drift
//!   variance from exact finite-domain computations.
//!
//! Exact small instances (≤ 12 sites) are served by a Cholesky Monte Carlo
//! oracle with Wilson confidence intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremes::scaling_constants;
use crate::green::GreenTable;
use crate::lattice::{LatticePoint, SiteSet};
use crate::sampler::{drift_variance_exact, FieldSample, WindowSampler};
use crate::stats::{normal_pdf, normal_upper_tail, wilson_99, WilsonInterval};

/// Indicators of threshold exceedance for one field sample.
#[derive(Debug, Clone)]
pub struct ExceedanceProcess {
    pub threshold: f64,
    pub indicators: Vec<bool>,
    /// Exceedance count W.
    pub count: u64,
    /// Marginal exceedance probability under the stationary law N(0, g0).
    pub p: f64,
    /// λ = N·p.
    pub lambda: f64,
}

impl ExceedanceProcess {
    /// `marginal_var` is the stationary site variance used for p and λ
    /// (g(0) for the infinite-volume field).
    pub fn new(field: &FieldSample, u: f64, marginal_var: f64) -> Result<Self> {
        if field.is_empty() {
            return Err(Error::invalid("field sample is empty"));
        }
        if !(marginal_var > 0.0) {
            return Err(Error::invalid("marginal variance must be positive"));
        }
        let indicators: Vec<bool> = field.values.iter().map(|&v| v > u).collect();
        let count = indicators.iter().filter(|&&b| b).count() as u64;
        let p = if u == f64::INFINITY {
            0.0
        } else if u == f64::NEG_INFINITY {
            1.0
        } else {
            normal_upper_tail(u / marginal_var.sqrt())
        };
        Ok(ExceedanceProcess {
            threshold: u,
            indicators,
            count,
            p,
            lambda: field.len() as f64 * p,
        })
    }

    /// {W = 0} ⇔ {max ≤ u}.
    pub fn none_exceed(&self) -> bool {
        self.count == 0
    }
}

/// Dependence-neighborhood radius (log N)^{2+2ε}.
pub fn neighborhood_radius(n_sites: usize, epsilon: f64) -> Result<f64> {
    if n_sites < 3 {
        return Err(Error::invalid("neighborhood radius needs N ≥ 3"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    Ok((n_sites as f64).ln().powf(2.0 + 2.0 * epsilon))
}

/// B_α = B(α, (log N)^{2+2ε}) ∩ A in the ℓ∞ metric.
#[derive(Debug, Clone)]
pub struct DependenceNeighborhood {
    pub center: LatticePoint,
    pub radius: f64,
    pub epsilon: f64,
    pub members: SiteSet,
}

pub fn neighborhood(
    alpha: &LatticePoint,
    window: &SiteSet,
    epsilon: f64,
) -> Result<DependenceNeighborhood> {
    let radius = neighborhood_radius(window.len(), epsilon)?;
    let members = window.ball_intersect(alpha, radius.floor() as i64);
    Ok(DependenceNeighborhood {
        center: alpha.clone(),
        radius,
        epsilon,
        members,
    })
}

/// Volume bound on a dependence neighborhood: min((2⌊r⌋+1)^d, N).
fn neighborhood_volume_bound(n_sites: u64, d: usize, epsilon: f64) -> Result<f64> {
    let r = neighborhood_radius(n_sites as usize, epsilon)?;
    let ball = (2.0 * r.floor() + 1.0).powi(d as i32);
    Ok(ball.min(n_sites as f64))
}

fn threshold_in_stationary_units(n_sites: u64, z: f64, g0: f64) -> Result<(f64, f64)> {
    let sc = scaling_constants(n_sites, g0)?;
    let u = sc.threshold(z);
    if !(u > 0.0) {
        return Err(Error::invalid(format!(
            "threshold u_N({z}) = {u} is not positive at N = {n_sites}"
        )));
    }
    Ok((u, u / g0.sqrt()))
}

/// Upper bound on b₁ = Σ_α Σ_{β∈B_α} p²: N·|B|·(Mills upper of the
/// marginal tail)², evaluated at u_N(z).
pub fn b1_bound(n_sites: u64, d: usize, epsilon: f64, z: f64, g0: f64) -> Result<f64> {
    if n_sites < 16 {
        return Err(Error::invalid("b1 bound needs N ≥ 16"));
    }
    let (_, t) = threshold_in_stationary_units(n_sites, z, g0)?;
    let vol = neighborhood_volume_bound(n_sites, d, epsilon)?;
    let mills_upper = normal_pdf(t) / t;
    Ok(n_sites as f64 * vol * mills_upper * mills_upper)
}

/// Bivariate Gaussian upper-tail bound for equal thresholds
/// P(φ_α > u, φ_β > u) with Var = g0 and Cov = ρ_g:
///
/// ```text
/// (1/2π)·(det Σ₂)^{−1/2}·(Δ₁Δ₂)^{−1}·exp(−u²·1ᵗΣ₂⁻¹1/2),  Δᵢ = u/(g0+ρ_g),
/// ```
///
/// clamped at 1. Monotone increasing in ρ_g, diverging as ρ_g → g0.
pub fn bivariate_tail_bound(g0: f64, rho_g: f64, u: f64) -> Result<f64> {
    if !(g0 > 0.0) || rho_g.abs() >= g0 {
        return Err(Error::invalid(
            "bivariate spec must be positive definite (|ρ_g| < g0)",
        ));
    }
    if !(u > 0.0) {
        return Err(Error::invalid("bivariate tail bound needs u > 0"));
    }
    let det = g0 * g0 - rho_g * rho_g;
    let s = g0 + rho_g;
    let value = s * s / (2.0 * std::f64::consts::PI * det.sqrt() * u * u)
        * (-u * u / s).exp();
    Ok(value.min(1.0))
}

/// N-decay exponent of the b₂ bound: −κ/(2−κ), strictly negative for
/// κ ∈ (0, 1).
pub fn b2_exponent(kappa: f64) -> f64 {
    -kappa / (2.0 - kappa)
}

/// Upper bound on b₂ = Σ_α Σ_{β∈B_α∖{α}} E[X_α X_β], from the bivariate
/// tail bound at the worst admissible correlation ρ_g ≤ (1−κ)·g0 and the
/// bracketing of b_N²:
///
/// ```text
/// (2⌊r⌋+1)^d · N^{−κ/(2−κ)} · (2−κ)^{3/2}·κ^{−1/2} · g0/(2π·u²)
///   · (4π·log N)^{1/(2−κ)} · max(e^{−2z}, e^{−2z/(2−κ)}).
/// ```
///
/// Every factor is an explicit step of the chain, so the value really does
/// dominate b₂; no unspecified constants remain. The polylog neighborhood
/// volume dominates the N-power until N ≈ 10⁶, so the decay only sets in
/// past that point.
pub fn b2_bound(n_sites: u64, d: usize, epsilon: f64, z: f64, g0: f64, kappa: f64) -> Result<f64> {
    if n_sites < 16 {
        return Err(Error::invalid("b2 bound needs N ≥ 16"));
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::invalid("kappa must lie in (0, 1)"));
    }
    let (u, _) = threshold_in_stationary_units(n_sites, z, g0)?;
    let r = neighborhood_radius(n_sites as usize, epsilon)?;
    let vol = (2.0 * r.floor() + 1.0).powi(d as i32);
    let n = n_sites as f64;
    let gamma = 1.0 / (2.0 - kappa);
    let prefactor = (2.0 - kappa).powf(1.5) / kappa.sqrt();
    let log_n = n.ln();
    let hall = (4.0 * std::f64::consts::PI * log_n).powf(gamma);
    let branch = ((-2.0 * z).exp()).max((-2.0 * z * gamma).exp());
    Ok(vol
        * n.powf(b2_exponent(kappa))
        * prefactor
        * (g0 / (2.0 * std::f64::consts::PI * u * u))
        * hall
        * branch)
}

/// Instance-adapted b₂ bound: ordered-pair count × the bivariate bound at
/// the instance's own maximal correlation.
pub fn b2_instance_bound(ordered_pairs: u64, rho_max: f64, g0: f64, u: f64) -> Result<f64> {
    Ok(ordered_pairs as f64 * bivariate_tail_bound(g0, rho_max, u)?)
}

/// Exact drift variance for the conditioning set A ∖ B(α, radius) along
/// with the sup-Green bound dominating it: Var(μ_α) = Σ_β P_α(hit at β)
/// g(α,β) ≤ sup_{β∈A∖B_α} g(α,β). Both are 0 when the ball swallows A.
pub fn drift_variance_bound(
    window: &SiteSet,
    alpha: &LatticePoint,
    neighborhood_radius: i64,
    green: &GreenTable,
) -> Result<(f64, f64)> {
    let ball = window.ball_intersect(alpha, neighborhood_radius);
    let outside = window.difference(&ball)?;
    if outside.is_empty() {
        return Ok((0.0, 0.0));
    }
    let exact = drift_variance_exact(alpha, &outside, green)?;
    let mut sup = 0.0f64;
    for beta in outside.sites() {
        sup = sup.max(green.cov(alpha, beta)?);
    }
    Ok((exact, sup))
}

/// Asymptotic stand-in for the drift variance at scale N: the far-field
/// Green's bound c_d·dist^{2−d} at the neighborhood distance ⌊r⌋+1.
pub fn drift_var_asymptotic(n_sites: u64, d: usize, epsilon: f64, c_far: f64) -> Result<f64> {
    let r = neighborhood_radius(n_sites as usize, epsilon)?;
    Ok(c_far * (r.floor() + 1.0).powi(2 - d as i32))
}

/// Computable surrogate for b₃ = Σ_α E|E[X_α − p | outside B_α]|:
///
/// ```text
/// N · [ exp(−(log N)^{(2d−5)(1+ε)})                              (drift tail)
///     + |1 − exp(−dv·u²/(2·g0·(g0 − dv)))| · Mills-upper(u/√g0) ] (variance mismatch)
/// ```
///
/// The first term is the proven decay rate of P(|μ_α| > u^{−1−ε}) with unit
/// constant; the second evaluates the conditional-variance deficit
/// g_U(α) = g0 − dv exactly from the supplied drift variance.
pub fn b3_surrogate(
    n_sites: u64,
    d: usize,
    epsilon: f64,
    z: f64,
    g0: f64,
    drift_var: f64,
) -> Result<f64> {
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if !(0.0..1.0).contains(&(drift_var / g0)) {
        return Err(Error::invalid("drift variance must lie in [0, g0)"));
    }
    let (u, t) = threshold_in_stationary_units(n_sites, z, g0)?;
    let n = n_sites as f64;
    let tail_exponent = ((2 * d) as f64 - 5.0) * (1.0 + epsilon);
    let tail = (-(n.ln().powf(tail_exponent))).exp();
    let mismatch = if drift_var == 0.0 {
        0.0
    } else {
        let shift = drift_var * u * u / (2.0 * g0 * (g0 - drift_var));
        (1.0 - (-shift).exp()).abs() * normal_pdf(t) / t
    };
    Ok(n * (tail + mismatch))
}

/// Evaluated error terms and the two Poisson-approximation bounds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SteinChenBounds {
    pub lambda: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3_surrogate: f64,
    /// True when the terms are exact small-instance values rather than
    /// analytic bounds.
    pub exact_instance: bool,
}

impl SteinChenBounds {
    pub fn sum(&self) -> f64 {
        self.b1 + self.b2 + self.b3_surrogate
    }

    /// Total-variation bound 2(b₁+b₂+b₃).
    pub fn tv_bound(&self) -> f64 {
        2.0 * self.sum()
    }

    /// Bound on |P(W=0) − e^{−λ}|: min(1, 1/λ)(b₁+b₂+b₃).
    pub fn w0_gap_bound(&self) -> f64 {
        (1.0f64).min(1.0 / self.lambda) * self.sum()
    }
}

/// Outcome of checking |P(W=0) − e^{−λ}| against the bound, with the
/// Monte Carlo confidence radius of the empirical probability taken off
/// the gap first.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GapCheck {
    pub lambda: f64,
    pub empirical_p_w0: f64,
    pub gap: f64,
    pub bound: f64,
    pub ci_radius: f64,
    pub pass: bool,
}

pub fn poisson_gap(bounds: &SteinChenBounds, empirical_p_w0: f64, ci_radius: f64) -> Result<GapCheck> {
    if !(bounds.lambda > 0.0) {
        return Err(Error::invalid("poisson gap needs λ > 0"));
    }
    let gap = (empirical_p_w0 - (-bounds.lambda).exp()).abs();
    let bound = bounds.w0_gap_bound();
    Ok(GapCheck {
        lambda: bounds.lambda,
        empirical_p_w0,
        gap,
        bound,
        ci_radius,
        pass: gap - ci_radius <= bound,
    })
}

/// Monte Carlo ground truth on a tiny window: P(W=0), E[W], and the
/// pairwise joint exceedance matrix, all with 99% Wilson intervals, from
/// exact Cholesky samples of the infinite-volume law.
#[derive(Debug, Clone)]
pub struct SmallOracle {
    pub p_w0: WilsonInterval,
    pub mean_w: f64,
    pub mean_w_se: f64,
    /// Row-major |A|×|A| matrix of E[X_α X_β] estimates (diagonal = p_α).
    pub pair_means: Vec<f64>,
    pub pair_intervals: Vec<WilsonInterval>,
    pub budget: u64,
}

pub const ORACLE_SITE_LIMIT: usize = 12;
pub const ORACLE_MIN_BUDGET: u64 = 10_000;

pub fn exact_small_oracle(
    window: &SiteSet,
    u: f64,
    green: &GreenTable,
    mc_budget: u64,
    master_seed: u64,
) -> Result<SmallOracle> {
    if window.len() > ORACLE_SITE_LIMIT {
        return Err(Error::invalid(format!(
            "oracle window limited to {ORACLE_SITE_LIMIT} sites, got {}",
            window.len()
        )));
    }
    if mc_budget < ORACLE_MIN_BUDGET {
        return Err(Error::invalid(format!(
            "oracle budget must be at least {ORACLE_MIN_BUDGET}"
        )));
    }
    let sampler = WindowSampler::new(window, green, master_seed)?;
    let k = window.len();
    let mut zero_count = 0u64;
    let mut w_sum = 0.0f64;
    let mut w_sq = 0.0f64;
    let mut pair_counts = vec![0u64; k * k];
    for rep in 0..mc_budget {
        let f = sampler.sample(rep);
        let x: Vec<bool> = f.values.iter().map(|&v| v > u).collect();
        let w = x.iter().filter(|&&b| b).count() as f64;
        if w == 0.0 {
            zero_count += 1;
        }
        w_sum += w;
        w_sq += w * w;
        for i in 0..k {
            if x[i] {
                for j in 0..k {
                    if x[j] {
                        pair_counts[i * k + j] += 1;
                    }
                }
            }
        }
    }
    let n = mc_budget as f64;
    let mean_w = w_sum / n;
    let var_w = (w_sq / n - mean_w * mean_w).max(0.0);
    Ok(SmallOracle {
        p_w0: wilson_99(zero_count, mc_budget),
        mean_w,
        mean_w_se: (var_w / n).sqrt(),
        pair_means: pair_counts.iter().map(|&c| c as f64 / n).collect(),
        pair_intervals: pair_counts
            .iter()
            .map(|&c| wilson_99(c, mc_budget))
            .collect(),
        budget: mc_budget,
    })
}
