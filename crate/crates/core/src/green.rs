//! Infinite-volume Green's function of simple random walk on ℤᵈ, d ≥ 3.
//!
//! `g(x)` is the expected number of visits to `x` by a walk started at the
//! origin. It is evaluated through the Laplace transform of the
//! continuous-time transition kernel,
//!
//! ```text
//! g(x) = ∫_0^∞  ∏_j  e^{−t/d} I_{|x_j|}(t/d)  dt,
//! ```
//!
//! a 1-D integral whose integrand factorizes over coordinates. The finite
//! part is handled by adaptive Gauss–Legendre with the scaled Bessel vector
//! memoized per node; the algebraic tail (the integrand decays like
//! t^{−d/2}) is mapped to a finite interval by t = T/v² and evaluated with
//! the large-argument Bessel expansion. Both pieces carry error estimates,
//! so a requested absolute tolerance is either met or reported as failed.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::bessel::{asymptotic_cutoff, ive_asymptotic, ive_vec};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::quad::integrate_adaptive;

/// Shared evaluation engine: one per (d, max coordinate) so that Bessel
/// vectors are computed once per quadrature node across many points.
pub struct GreenEngine {
    d: usize,
    n_max: usize,
    cache: RefCell<HashMap<u64, Rc<Vec<f64>>>>,
}

impl GreenEngine {
    pub fn new(d: usize, n_max: usize) -> Result<Self> {
        if d < 3 {
            return Err(Error::DimensionTooSmall(d));
        }
        Ok(GreenEngine {
            d,
            n_max,
            cache: RefCell::new(HashMap::new()),
        })
    }

    fn bessel_at(&self, z: f64) -> Rc<Vec<f64>> {
        let key = z.to_bits();
        if let Some(v) = self.cache.borrow().get(&key) {
            return Rc::clone(v);
        }
        let v = Rc::new(ive_vec(self.n_max, z));
        self.cache.borrow_mut().insert(key, Rc::clone(&v));
        v
    }

    /// g(x) with absolute tolerance `tol`. The value depends only on the
    /// multiset of |coordinates|.
    pub fn value(&self, x: &LatticePoint, tol: f64) -> Result<f64> {
        if x.dim() != self.d {
            return Err(Error::invalid(format!(
                "point dimension {} does not match engine dimension {}",
                x.dim(),
                self.d
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        let orders: Vec<usize> = x.0.iter().map(|c| c.unsigned_abs() as usize).collect();
        let top = orders.iter().copied().max().unwrap_or(0);
        if top > self.n_max {
            return Err(Error::invalid(format!(
                "coordinate {top} exceeds engine order budget {}",
                self.n_max
            )));
        }
        let d = self.d as f64;
        let z_switch = asymptotic_cutoff(top);
        let t_switch = d * z_switch;

        let (finite, err_finite) = integrate_adaptive(
            |t| {
                let v = self.bessel_at(t / d);
                orders.iter().map(|&n| v[n]).product::<f64>()
            },
            0.0,
            t_switch,
            0.45 * tol,
        );

        // Tail: t = T/v² maps [T, ∞) to (0, 1]; the transformed integrand is
        // analytic, with value ∝ v^{d-3} at v = 0.
        let (tail, err_tail) = integrate_adaptive(
            |v| {
                let t = t_switch / (v * v);
                let z = t / d;
                let p: f64 = orders.iter().map(|&n| ive_asymptotic(n, z)).product();
                p * 2.0 * t_switch / (v * v * v)
            },
            0.0,
            1.0,
            0.45 * tol,
        );

        let achieved = err_finite + err_tail;
        if achieved > tol {
            return Err(Error::QuadratureNotConverged {
                requested: tol,
                achieved,
            });
        }
        Ok(finite + tail)
    }
}

/// One-off evaluation of g(x). Builds a throwaway engine; use
/// [`GreenTable`] when many points are needed.
pub fn green_infinite(x: &LatticePoint, d: usize, tol: f64) -> Result<f64> {
    let top = x.0.iter().map(|c| c.unsigned_abs() as usize).max().unwrap_or(0);
    GreenEngine::new(d, top)?.value(x, tol)
}

/// Escape probability κ = P₀(no return) = 1/g(0), in (0, 1) for d ≥ 3.
pub fn escape_probability(d: usize, tol: f64) -> Result<f64> {
    let g0 = green_infinite(&LatticePoint::origin(d), d, tol)?;
    Ok(1.0 / g0)
}

/// Estimate of the far-field constant c_d in g(x) ≈ c_d·‖x‖^{2−d}, read off
/// the quadrature at a large on-axis point.
pub fn far_field_constant(d: usize, tol: f64) -> Result<f64> {
    let r: i64 = 40;
    let mut coords = vec![0i64; d];
    coords[0] = r;
    let g = green_infinite(&LatticePoint(coords), d, tol)?;
    Ok(g * (r as f64).powi(d as i32 - 2))
}

/// Cached values of g on the ℓ∞ ball of radius `radius`, stored per
/// canonical representative (sorted absolute coordinates).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GreenTable {
    d: usize,
    radius: i64,
    quad_tol: f64,
    /// Serialized as an array of (coordinates, value) pairs: JSON object
    /// keys must be strings.
    #[serde(with = "map_as_pairs")]
    values: BTreeMap<Vec<i64>, f64>,
}

mod map_as_pairs {
    use std::collections::BTreeMap;

    use serde::de::{Deserialize, Deserializer};
    use serde::ser::Serializer;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<Vec<i64>, f64>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        ser.collect_seq(map.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<Vec<i64>, f64>, D::Error> {
        let pairs: Vec<(Vec<i64>, f64)> = Deserialize::deserialize(de)?;
        Ok(pairs.into_iter().collect())
    }
}

impl GreenTable {
    /// Evaluate and validate a fresh table.
    pub fn build(d: usize, radius: i64, quad_tol: f64) -> Result<Self> {
        if d < 3 {
            return Err(Error::DimensionTooSmall(d));
        }
        if radius < 0 {
            return Err(Error::invalid("radius must be nonnegative"));
        }
        if !(quad_tol > 0.0) {
            return Err(Error::invalid("quad_tol must be positive"));
        }
        let engine = GreenEngine::new(d, radius as usize)?;
        let mut values = BTreeMap::new();
        let mut reps: Vec<Vec<i64>> = Vec::new();
        enumerate_canonical(d, radius, &mut vec![], &mut reps);
        for rep in reps {
            let v = engine.value(&LatticePoint(rep.clone()), quad_tol)?;
            values.insert(rep, v);
        }
        let table = GreenTable {
            d,
            radius,
            quad_tol,
            values,
        };
        table.validate()?;
        Ok(table)
    }

    /// Build, or load from `cache_dir` when a file for these parameters
    /// exists (writing one after a fresh build).
    pub fn build_cached(d: usize, radius: i64, quad_tol: f64, cache_dir: &Path) -> Result<Self> {
        let path = Self::cache_path(cache_dir, d, radius, quad_tol);
        if path.is_file() {
            let raw = std::fs::read_to_string(&path)?;
            let table: GreenTable = serde_json::from_str(&raw)?;
            if table.d == d && table.radius == radius && table.quad_tol == quad_tol {
                table.validate()?;
                return Ok(table);
            }
        }
        let table = Self::build(d, radius, quad_tol)?;
        std::fs::create_dir_all(cache_dir)?;
        std::fs::write(&path, serde_json::to_string(&table)?)?;
        Ok(table)
    }

    pub fn cache_path(cache_dir: &Path, d: usize, radius: i64, quad_tol: f64) -> PathBuf {
        cache_dir.join(format!("green_d{d}_r{radius}_tol{quad_tol:e}.json"))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// g(0), the variance of the field at a site.
    pub fn g0(&self) -> f64 {
        *self
            .values
            .get(&vec![0; self.d])
            .expect("origin is always stored")
    }

    /// κ = 1/g(0).
    pub fn kappa(&self) -> f64 {
        1.0 / self.g0()
    }

    pub fn value(&self, x: &LatticePoint) -> Result<f64> {
        self.values
            .get(&x.canonical())
            .copied()
            .ok_or_else(|| Error::OutsideTable {
                d: self.d,
                radius: self.radius,
                point: x.0.clone(),
            })
    }

    /// g(a − b).
    pub fn cov(&self, a: &LatticePoint, b: &LatticePoint) -> Result<f64> {
        self.value(&a.sub(b))
    }

    pub fn covers(&self, x: &LatticePoint) -> bool {
        x.dim() == self.d && x.linf() <= self.radius
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<i64>, &f64)> {
        self.values.iter()
    }

    /// Structural invariants: positivity, g(0) > 1, and the defining
    /// relation (I − P)g = δ₀ at the origin within 10·quad_tol.
    fn validate(&self) -> Result<()> {
        let g0 = self.g0();
        if g0 <= 1.0 {
            return Err(Error::invalid(format!("g(0) = {g0} must exceed 1 for d ≥ 3")));
        }
        if self.values.values().any(|&v| !(v > 0.0)) {
            return Err(Error::invalid("green values must be positive"));
        }
        if self.radius >= 1 {
            let origin = LatticePoint::origin(self.d);
            let mean: f64 = origin
                .neighbors()
                .iter()
                .map(|e| self.value(e).expect("neighbors of origin are stored"))
                .sum::<f64>()
                / (2.0 * self.d as f64);
            let residual = (g0 - mean - 1.0).abs();
            if residual > 10.0 * self.quad_tol {
                return Err(Error::invalid(format!(
                    "harmonicity at origin violated: residual {residual:e}"
                )));
            }
        }
        Ok(())
    }

    /// Residual of the harmonic identity at `x`: g(x) − mean of neighbours,
    /// minus 1 at the origin. Zero in exact arithmetic.
    pub fn harmonicity_residual(&self, x: &LatticePoint) -> Result<f64> {
        let mean: f64 = x
            .neighbors()
            .iter()
            .map(|e| self.value(e))
            .collect::<Result<Vec<f64>>>()?
            .iter()
            .sum::<f64>()
            / (2.0 * self.d as f64);
        let delta = if x.0.iter().all(|&c| c == 0) { 1.0 } else { 0.0 };
        Ok(self.value(x)? - mean - delta)
    }
}

fn enumerate_canonical(d: usize, radius: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == d {
        out.push(prefix.clone());
        return;
    }
    let lo = prefix.last().copied().unwrap_or(0);
    for c in lo..=radius {
        prefix.push(c);
        enumerate_canonical(d, radius, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Simple cubic lattice Green function at the origin (Watson's integral)
    // and a few off-origin values, from a 40-digit independent evaluation of
    // the same Laplace representation in mpmath.
    const G0_D3: f64 = 1.5163860591519780;
    const REFS_D3: &[(&[i64], f64)] = &[
        (&[1, 0, 0], 0.5163860591519780),
        (&[1, 1, 0], 0.3311486021264239),
        (&[1, 1, 1], 0.2614701263863532),
        (&[2, 0, 0], 0.2573358872541945),
        (&[2, 1, 0], 0.2155896208409405),
        (&[3, 0, 0], 0.1652707810094267),
        (&[10, 0, 0], 0.04786956925157643),
        (&[40, 0, 0], 0.0119384891950885),
    ];

    #[test]
    fn matches_reference_values_d3() {
        assert_relative_eq!(
            green_infinite(&LatticePoint::origin(3), 3, 1e-10).unwrap(),
            G0_D3,
            max_relative = 1e-9
        );
        for (coords, want) in REFS_D3 {
            let got = green_infinite(&LatticePoint(coords.to_vec()), 3, 1e-10).unwrap();
            assert_abs_diff_eq!(got, want, epsilon = 1e-9);
        }
    }

    #[test]
    fn g_at_unit_vector_is_g0_minus_one() {
        // Harmonicity at the origin plus full symmetry forces this exactly.
        for d in [3, 4, 5] {
            let g0 = green_infinite(&LatticePoint::origin(d), d, 1e-9).unwrap();
            let g1 = green_infinite(&LatticePoint::unit(d, 0), d, 1e-9).unwrap();
            assert_abs_diff_eq!(g1, g0 - 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn rejects_low_dimension_and_bad_tolerance() {
        assert!(matches!(
            green_infinite(&LatticePoint::origin(2), 2, 1e-8),
            Err(Error::DimensionTooSmall(2))
        ));
        assert!(green_infinite(&LatticePoint::origin(3), 3, 0.0).is_err());
    }

    #[test]
    fn escape_probability_values_and_monotonicity() {
        let k3 = escape_probability(3, 1e-9).unwrap();
        assert_abs_diff_eq!(k3, 0.6594626704490009, epsilon = 1e-8);
        let k5 = escape_probability(5, 1e-9).unwrap();
        assert_abs_diff_eq!(k5, 0.8648213901793447, epsilon = 1e-8);
        assert!(k5 > k3);
        // g(e₁)/g(0) = 1 − κ.
        let g0 = green_infinite(&LatticePoint::origin(3), 3, 1e-9).unwrap();
        let g1 = green_infinite(&LatticePoint::unit(3, 0), 3, 1e-9).unwrap();
        assert_abs_diff_eq!(g1 / g0, 1.0 - k3, epsilon = 1e-9);
    }

    #[test]
    fn far_field_ratio_stabilizes() {
        // g(x)·‖x‖^{d−2} along e₁ settles toward a constant; successive
        // ratios at ‖x‖ = 10, 20, 40 agree within 5%.
        let mut ratios = Vec::new();
        for r in [10i64, 20, 40] {
            let g = green_infinite(&LatticePoint(vec![r, 0, 0]), 3, 1e-10).unwrap();
            ratios.push(g * r as f64);
        }
        for pair in ratios.windows(2) {
            assert!((pair[1] / pair[0] - 1.0).abs() < 0.05);
        }
        // The limit is 3/(2π) for d = 3; at r = 40 the estimate is within 1%.
        assert_relative_eq!(
            far_field_constant(3, 1e-10).unwrap(),
            3.0 / (2.0 * std::f64::consts::PI),
            max_relative = 0.01
        );
    }

    #[test]
    fn table_covers_window_and_respects_symmetry() {
        let table = GreenTable::build(3, 3, 1e-8).unwrap();
        assert_eq!(table.len(), 20); // multisets {0≤a≤b≤c≤3}
        let a = table.value(&LatticePoint(vec![-2, 1, 0])).unwrap();
        let b = table.value(&LatticePoint(vec![0, -1, 2])).unwrap();
        assert_eq!(a, b);
        assert!(table.covers(&LatticePoint(vec![3, -3, 3])));
        assert!(!table.covers(&LatticePoint(vec![4, 0, 0])));
        assert!(table.value(&LatticePoint(vec![4, 0, 0])).is_err());
    }

    #[test]
    fn harmonicity_inside_table() {
        let table = GreenTable::build(3, 4, 1e-8).unwrap();
        for x in [
            LatticePoint(vec![0, 0, 0]),
            LatticePoint(vec![1, 0, 0]),
            LatticePoint(vec![2, -1, 1]),
            LatticePoint(vec![-3, 2, 0]),
        ] {
            let r = table.harmonicity_residual(&x).unwrap();
            assert!(
                r.abs() <= 10.0 * table.quad_tol(),
                "residual {r:e} at {:?}",
                x.0
            );
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let a = GreenTable::build_cached(3, 2, 1e-7, dir.path()).unwrap();
        assert!(GreenTable::cache_path(dir.path(), 3, 2, 1e-7).is_file());
        let b = GreenTable::build_cached(3, 2, 1e-7, dir.path()).unwrap();
        assert_eq!(a.len(), b.len());
        for (k, v) in a.entries() {
            assert_eq!(b.values[k], *v);
        }
    }
}
