//! Scaling constants for the maximum, Gumbel targets, Mills-ratio
//! brackets, Kolmogorov–Smirnov distance, convergence-of-types ratios, and
//! the law-of-large-numbers diagnostic for the maximum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::FieldSample;
use crate::stats::normal_pdf;

/// Centering b_N and scale a_N for the maximum over N sites of a field
/// with site variance g0:
///
/// ```text
/// b_N = √g0·[√(2 log N) − (log log N + log 4π) / (2√(2 log N))],
/// a_N = g0 / b_N.
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingConstants {
    pub n_sites: u64,
    pub g0: f64,
    pub a_n: f64,
    pub b_n: f64,
}

/// b_N at a real-valued site count; used by the convergence-of-types
/// ratios where m_N = (1−2δ)^d N is not an integer.
fn b_of(n: f64, g0: f64) -> f64 {
    let two_log = 2.0 * n.ln();
    let root = two_log.sqrt();
    g0.sqrt() * (root - (n.ln().ln() + (4.0 * std::f64::consts::PI).ln()) / (2.0 * root))
}

pub fn scaling_constants(n_sites: u64, g0: f64) -> Result<ScalingConstants> {
    if n_sites <= 2 {
        return Err(Error::invalid(format!(
            "scaling constants need N ≥ 3, got {n_sites}"
        )));
    }
    if !(g0 > 0.0) {
        return Err(Error::invalid("g0 must be positive"));
    }
    let b_n = b_of(n_sites as f64, g0);
    if !(b_n > 0.0) {
        return Err(Error::invalid(format!("b_N not positive at N={n_sites}")));
    }
    Ok(ScalingConstants {
        n_sites,
        g0,
        a_n: g0 / b_n,
        b_n,
    })
}

impl ScalingConstants {
    /// The exceedance threshold u_N(z) = a_N·z + b_N.
    pub fn threshold(&self, z: f64) -> f64 {
        self.a_n * z + self.b_n
    }

    /// Rescale a raw maximum: (m − b_N)/a_N.
    pub fn rescale(&self, raw_max: f64) -> f64 {
        (raw_max - self.b_n) / self.a_n
    }
}

/// A raw maximum together with its rescaled value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MaxStatistic {
    pub raw_max: f64,
    pub rescaled: f64,
    pub n_sites: u64,
}

/// Maximum of a field sample, rescaled by the given constants.
pub fn rescaled_max(field: &FieldSample, sc: &ScalingConstants) -> Result<MaxStatistic> {
    if field.is_empty() {
        return Err(Error::invalid("field sample is empty"));
    }
    let raw = field.max();
    Ok(MaxStatistic {
        raw_max: raw,
        rescaled: sc.rescale(raw),
        n_sites: sc.n_sites,
    })
}

/// The Gumbel distribution function exp(−e^{−z}).
pub fn gumbel_cdf(z: f64) -> f64 {
    (-(-z).exp()).exp()
}

/// Two-sided Mills bracket of the standard normal tail at t > 0:
/// (1 − 1/t²)·φ(t)/t ≤ P(N(0,1) > t) ≤ φ(t)/t.
pub fn mills_bounds(t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::invalid(format!("mills bracket needs t > 0, got {t}")));
    }
    let upper = normal_pdf(t) / t;
    Ok(((1.0 - 1.0 / (t * t)) * upper, upper))
}

/// Two-sided Kolmogorov–Smirnov statistic between a sample and a reference
/// CDF: the sup distance of the right-continuous empirical CDF, no
/// small-sample correction.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::invalid("ks distance needs at least 2 samples"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::invalid("ks distance rejects NaN samples"));
    }
    let mut xs = samples.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        worst = worst.max((f - i as f64 / n).abs());
        worst = worst.max(((i as f64 + 1.0) / n - f).abs());
    }
    Ok(worst)
}

/// Convergence-of-types ratios between the constants at m_N = (1−2δ)^d·N
/// and at N: (a_{m_N}/a_N, (b_{m_N} − b_N)/a_N). As N grows the pair tends
/// to (1, d·log(1−2δ)), with the shift converging at rate 1/log N.
pub fn cot_ratios(n_sites: u64, delta: f64, d: usize, g0: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(format!(
            "cot ratios need 0 < δ < 1/2, got {delta}"
        )));
    }
    let sc = scaling_constants(n_sites, g0)?;
    let m = (1.0 - 2.0 * delta).powi(d as i32) * n_sites as f64;
    if m < 3.0 {
        return Err(Error::invalid(format!("diluted count m_N = {m} below 3")));
    }
    let b_m = b_of(m, g0);
    let a_ratio = (g0 / b_m) / sc.a_n;
    let b_shift = (b_m - sc.b_n) / sc.a_n;
    Ok((a_ratio, b_shift))
}

/// Normalized mean of raw maxima: estimate of E[max]/√(2·g0·log N) with
/// its standard error. The proof of the law of large numbers for the
/// maximum gives limit 1 under this normalization.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LlnEstimate {
    pub ratio: f64,
    pub std_error: f64,
    pub n_sites: u64,
    pub replicates: u64,
}

pub fn lln_ratio(raw_maxima: &[f64], n_sites: u64, g0: f64) -> Result<LlnEstimate> {
    if raw_maxima.len() < 100 {
        return Err(Error::invalid("lln ratio needs at least 100 samples"));
    }
    if n_sites < 2 {
        return Err(Error::invalid(
            "lln ratio is meaningless for a single site (log N = 0)",
        ));
    }
    let norm = (2.0 * g0 * (n_sites as f64).ln()).sqrt();
    let n = raw_maxima.len() as f64;
    let mean = raw_maxima.iter().sum::<f64>() / n;
    let var = raw_maxima.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Ok(LlnEstimate {
        ratio: mean / norm,
        std_error: (var / n).sqrt() / norm,
        n_sites,
        replicates: raw_maxima.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SiteSet;
    use crate::rng::SeedInfo;
    use crate::sampler::LawTag;
    use crate::stats::normal_upper_tail;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::sync::Arc;

    #[test]
    fn closed_form_at_log_log_one() {
        // g0 = 1 and N = e^e gives log log N = 1, so
        // b_N = √(2e) − (1 + log 4π)/(2√(2e)).
        let n = std::f64::consts::E.exp();
        let b = b_of(n, 1.0);
        let want = (2.0 * std::f64::consts::E).sqrt()
            - (1.0 + (4.0 * std::f64::consts::PI).ln())
                / (2.0 * (2.0 * std::f64::consts::E).sqrt());
        assert_abs_diff_eq!(b, want, epsilon = 1e-12);
    }

    #[test]
    fn bracketing_of_b_squared() {
        // g0(2 log N − log log N − log 4π) ≤ b_N² ≤ 2 g0 log N for N ≥ 16.
        let g0 = 1.5163860591519780;
        for k in 4..=30 {
            let n = 1u64 << k;
            let sc = scaling_constants(n, g0).unwrap();
            let log_n = (n as f64).ln();
            let lower = g0 * (2.0 * log_n - log_n.ln() - (4.0 * std::f64::consts::PI).ln());
            let upper = 2.0 * g0 * log_n;
            assert!(sc.b_n * sc.b_n >= lower, "lower bracket fails at N = 2^{k}");
            assert!(sc.b_n * sc.b_n <= upper, "upper bracket fails at N = 2^{k}");
            assert_abs_diff_eq!(sc.a_n, g0 / sc.b_n, epsilon = 1e-15);
        }
    }

    #[test]
    fn a_n_asymptotics() {
        // a_N·√(2 log N)/√g0 → 1 through N = 10³, 10⁶, 10⁹ (a_N carries the
        // units of the field, so the normalization is by √g0).
        let mut last_err = f64::INFINITY;
        for n in [1_000u64, 1_000_000_000, 1_000_000_000_000_000] {
            let sc = scaling_constants(n, 2.3).unwrap();
            let val = sc.a_n * (2.0 * (n as f64).ln()).sqrt() / sc.g0.sqrt();
            let err = (val - 1.0).abs();
            assert!(err < last_err);
            last_err = err;
        }
        assert!(last_err < 0.05);
    }

    #[test]
    fn rejects_tiny_n() {
        assert!(scaling_constants(2, 1.0).is_err());
        assert!(scaling_constants(16, -1.0).is_err());
    }

    #[test]
    fn threshold_is_affine_and_monotone() {
        let sc = scaling_constants(4096, 1.5).unwrap();
        assert_eq!(sc.threshold(0.0), sc.b_n);
        assert_abs_diff_eq!(sc.threshold(1.0), sc.b_n + sc.a_n, epsilon = 1e-15);
        assert!(sc.threshold(2.0) > sc.threshold(1.0));
    }

    #[test]
    fn gumbel_reference_points() {
        assert_abs_diff_eq!(gumbel_cdf(0.0), (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(gumbel_cdf(-(2.0f64.ln().ln())), 0.5, epsilon = 1e-12);
        assert!(gumbel_cdf(40.0) > 1.0 - 1e-15);
    }

    #[test]
    fn mills_brackets_the_erf_oracle() {
        // At t = 1 the lower bound degenerates to 0.
        let (lo, hi) = mills_bounds(1.0).unwrap();
        assert_eq!(lo, 0.0);
        assert!(hi > normal_upper_tail(1.0));
        let (lo, hi) = mills_bounds(2.0).unwrap();
        assert_abs_diff_eq!(lo, 0.020246612442445522, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 0.026995483256594030, epsilon = 1e-12);
        let truth = normal_upper_tail(2.0);
        assert!(lo < truth && truth < hi);
        // By t = 5 the bracket is within 5% of itself.
        let (lo, hi) = mills_bounds(5.0).unwrap();
        assert!(hi / lo < 1.05);
        assert!(mills_bounds(0.0).is_err());
    }

    fn constant_field(value: f64, copies: usize) -> FieldSample {
        let sites = (0..copies)
            .map(|i| crate::lattice::LatticePoint(vec![i as i64, 0, 0]))
            .collect();
        FieldSample {
            sites: Arc::new(SiteSet::new(3, sites).unwrap()),
            values: vec![value; copies],
            law: LawTag::InfiniteWindow,
            seed: SeedInfo {
                master_seed: 0,
                replicate: 0,
            },
        }
    }

    #[test]
    fn rescaled_max_of_constant_field() {
        let sc = scaling_constants(100, 1.0).unwrap();
        let f = constant_field(3.0, 100);
        let m = rescaled_max(&f, &sc).unwrap();
        assert_abs_diff_eq!(m.rescaled, (3.0 - sc.b_n) / sc.a_n, epsilon = 1e-14);
    }

    #[test]
    fn ks_distance_basics() {
        // All mass at a point with cdf value 1/2 gives distance 1/2.
        let d = ks_distance(&[0.7, 0.7, 0.7], |_| 0.5).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-15);
        assert!(ks_distance(&[1.0], |x| x).is_err());
        assert!(ks_distance(&[f64::NAN, 0.0], |x| x).is_err());
    }

    #[test]
    fn ks_distance_of_exact_draws_is_small() {
        // Gumbel draws via inversion at fixed seed; at n = 10⁴ the
        // Kolmogorov tail gives P(D > 0.02) < 10⁻³.
        use rand::Rng;
        let mut rng = crate::rng::replicate_rng(2024, 0);
        let samples: Vec<f64> = (0..10_000)
            .map(|_| {
                let u: f64 = rng.gen_range(1e-12..1.0);
                -(-u.ln()).ln()
            })
            .collect();
        let d = ks_distance(&samples, gumbel_cdf).unwrap();
        assert!(d < 0.02, "ks distance {d}");
    }

    #[test]
    fn cot_ratios_limits_and_rate() {
        // δ → 0 degenerates to (1, 0).
        let (a, b) = cot_ratios(1_000_000, 1e-12, 3, 1.5).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-6);

        // Convergence to (1, d·log(1−2δ)) with 1/log N shift rate.
        let target = 3.0 * (0.8f64).ln();
        let mut prev_a_err = f64::INFINITY;
        let mut scaled_errs = Vec::new();
        for n in [10_000u64, 1_000_000, 100_000_000] {
            let (a, b) = cot_ratios(n, 0.1, 3, 1.5163860591519780).unwrap();
            let a_err = (a - 1.0).abs();
            assert!(a_err < prev_a_err);
            prev_a_err = a_err;
            scaled_errs.push((b - target).abs() * (n as f64).ln());
        }
        assert!(prev_a_err < 0.03);
        // (b_shift − target)·log N stays within a tight band: 1/log N rate.
        let max = scaled_errs.iter().cloned().fold(f64::MIN, f64::max);
        let min = scaled_errs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            max / min < 1.25,
            "shift error not 1/log N: scaled errors {scaled_errs:?}"
        );
        // At N = 10⁸ the shift is within 5e−2 of the limit.
        let (_, b) = cot_ratios(100_000_000, 0.1, 3, 1.5163860591519780).unwrap();
        assert!((b - target).abs() < 5e-2);

        assert!(cot_ratios(1000, 0.5, 3, 1.0).is_err());
        assert!(cot_ratios(1000, 0.0, 3, 1.0).is_err());
    }

    #[test]
    fn lln_ratio_validates_input() {
        assert!(lln_ratio(&[1.0; 99], 100, 1.0).is_err());
        assert!(lln_ratio(&[1.0; 100], 1, 1.0).is_err());
        let est = lln_ratio(&vec![3.0; 200], 4096, 1.0).unwrap();
        let want = 3.0 / (2.0 * (4096f64).ln()).sqrt();
        assert_abs_diff_eq!(est.ratio, want, epsilon = 1e-12);
        assert_eq!(est.replicates, 200);
    }

    #[test]
    fn gumbel_cdf_tail_calibration() {
        // N·P(N(0,g0) > u_N(z)) → e^{−z}, at a logarithmic rate: the
        // relative deviation shrinks monotonically through an exponential
        // N ladder for every z, and the z-dependent penalty
        // exp(−(z²/2+z)/b̂²) keeps the larger z values slower.
        let g0 = 1.5163860591519780;
        for z in [-1.0, 0.0, 1.0, 2.0] {
            let mut last_err = f64::INFINITY;
            for n in [1_000_000u64, 10_000_000_000, 100_000_000_000_000, 1_000_000_000_000_000_000] {
                let sc = scaling_constants(n, g0).unwrap();
                let lam = n as f64 * normal_upper_tail(sc.threshold(z) / g0.sqrt());
                let err = (lam / (-z).exp() - 1.0).abs();
                assert!(err < last_err, "calibration error not shrinking at z={z}");
                last_err = err;
            }
            let cap = if z <= 0.0 { 0.05 } else { 0.10 };
            assert!(last_err < cap, "z={z}: residual {last_err} above {cap}");
        }
    }
}
