//! Small statistical utilities shared by the experiments: normal tails via
//! the error function, mergeable moment accumulators, Wilson score
//! intervals, and the Kolmogorov statistic's limiting tail.

use statrs::function::erf::erfc;

/// Standard normal density.
pub fn normal_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// P(N(0,1) > t), computed from the complementary error function.
pub fn normal_upper_tail(t: f64) -> f64 {
    0.5 * erfc(t / std::f64::consts::SQRT_2)
}

/// P(N(0,1) ≤ t).
pub fn normal_cdf(t: f64) -> f64 {
    0.5 * erfc(-t / std::f64::consts::SQRT_2)
}

/// Mean/variance accumulator in Welford form. Merging is associative, so
/// replicate streams can be reduced in any fixed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 += other.m2
            + delta * delta * (self.count as f64) * (other.count as f64) / total as f64;
        self.count = total;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        self.m2 / (self.count as f64 - 1.0)
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.count as f64).sqrt()
    }
}

/// Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy)]
pub struct WilsonInterval {
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

impl WilsonInterval {
    pub fn radius(&self) -> f64 {
        0.5 * (self.high - self.low)
    }
}

/// 99% Wilson interval (z = Φ⁻¹(0.995)).
pub fn wilson_99(successes: u64, trials: u64) -> WilsonInterval {
    wilson(successes, trials, 2.5758293035489004)
}

pub fn wilson(successes: u64, trials: u64, z: f64) -> WilsonInterval {
    assert!(trials > 0, "wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    WilsonInterval {
        estimate: p,
        low: (center - half).max(0.0),
        high: (center + half).min(1.0),
    }
}

/// Limiting tail of the Kolmogorov statistic: P(√n·D_n > x) → Q(x) with
/// Q(x) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²x²}.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..200 {
        let term = (-2.0 * (k as f64) * (k as f64) * x * x).exp();
        if term < 1e-18 {
            break;
        }
        sum += if k % 2 == 1 { term } else { -term };
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Critical value of √n·D_n at level `alpha` (bisection on the tail).
pub fn kolmogorov_critical(alpha: f64) -> f64 {
    assert!((0.0..1.0).contains(&alpha) && alpha > 0.0);
    let (mut lo, mut hi) = (0.2, 4.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_survival(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
