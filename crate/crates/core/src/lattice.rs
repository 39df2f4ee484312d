//! Lattice points, finite site sets with fast index lookup, and the
//! hypercube domains used throughout.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of ℤᵈ. The dimension is the coordinate count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(d: usize) -> Self {
        LatticePoint(vec![0; d])
    }

    /// Unit vector e_axis.
    pub fn unit(d: usize, axis: usize) -> Self {
        let mut c = vec![0; d];
        c[axis] = 1;
        LatticePoint(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn linf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn l2(&self) -> f64 {
        self.0
            .iter()
            .map(|&c| (c as f64) * (c as f64))
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        LatticePoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticePoint(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Canonical representative under the symmetry group of the lattice
    /// Green's function: absolute values of the coordinates, sorted
    /// ascending. All 2^d·d! signed permutations share one representative.
    pub fn canonical(&self) -> Vec<i64> {
        let mut abs: Vec<i64> = self.0.iter().map(|c| c.abs()).collect();
        abs.sort_unstable();
        abs
    }

    /// The 2d nearest neighbours.
    pub fn neighbors(&self) -> Vec<LatticePoint> {
        let d = self.dim();
        let mut out = Vec::with_capacity(2 * d);
        for axis in 0..d {
            for step in [-1i64, 1] {
                let mut c = self.0.clone();
                c[axis] += step;
                out.push(LatticePoint(c));
            }
        }
        out
    }
}

/// An ordered finite subset of ℤᵈ with O(1) membership lookup.
#[derive(Debug, Clone)]
pub struct SiteSet {
    d: usize,
    sites: Vec<LatticePoint>,
    index: HashMap<LatticePoint, u32>,
}

impl SiteSet {
    pub fn new(d: usize, sites: Vec<LatticePoint>) -> Result<Self> {
        if sites.iter().any(|s| s.dim() != d) {
            return Err(Error::invalid("site dimension mismatch"));
        }
        let mut index = HashMap::with_capacity(sites.len());
        for (i, s) in sites.iter().enumerate() {
            if index.insert(s.clone(), i as u32).is_some() {
                return Err(Error::invalid(format!("duplicate site {:?}", s.0)));
            }
        }
        Ok(SiteSet { d, sites, index })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[LatticePoint] {
        &self.sites
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &LatticePoint) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticePoint> {
        self.sites.iter()
    }

    /// ℓ∞ diameter, 0 for a singleton.
    pub fn diameter_linf(&self) -> i64 {
        let mut diam = 0;
        for a in &self.sites {
            for b in &self.sites {
                diam = diam.max(a.sub(b).linf());
            }
        }
        diam
    }

    /// Sites of `self` absent from `other`, preserving order.
    pub fn difference(&self, other: &SiteSet) -> Result<SiteSet> {
        SiteSet::new(
            self.d,
            self.sites
                .iter()
                .filter(|s| !other.contains(s))
                .cloned()
                .collect(),
        )
    }

    /// ℓ∞ ball of radius `r` around `center`, intersected with `self`.
    pub fn ball_intersect(&self, center: &LatticePoint, r: i64) -> SiteSet {
        let sites = self
            .sites
            .iter()
            .filter(|s| s.sub(center).linf() <= r)
            .cloned()
            .collect();
        SiteSet::new(self.d, sites).expect("subset of a valid set")
    }
}

/// The discrete hypercube [0, n−1]^d with N = n^d sites, enumerated
/// row-major (first coordinate slowest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub d: usize,
    pub n: usize,
}

impl BoxDomain {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::invalid("box requires d ≥ 1 and n ≥ 1"));
        }
        Ok(BoxDomain { d, n })
    }

    pub fn volume(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn site_at(&self, mut idx: usize) -> LatticePoint {
        let mut coords = vec![0i64; self.d];
        for axis in (0..self.d).rev() {
            coords[axis] = (idx % self.n) as i64;
            idx /= self.n;
        }
        LatticePoint(coords)
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        let mut idx = 0usize;
        for &c in &p.0 {
            if c < 0 || c >= self.n as i64 {
                return None;
            }
            idx = idx * self.n + c as usize;
        }
        Some(idx)
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.d && self.index_of(p).is_some()
    }

    pub fn site_set(&self) -> SiteSet {
        let sites = (0..self.volume()).map(|i| self.site_at(i)).collect();
        SiteSet::new(self.d, sites).expect("box sites are distinct")
    }

    /// Sites at ℓ∞ distance strictly greater than δ·n from the complement.
    /// The distance of α to the complement along axis j is
    /// min(αⱼ + 1, n − αⱼ), so the per-axis condition is
    /// ⌊δn⌋ ≤ αⱼ ≤ n − 1 − ⌊δn⌋ when δn is not an integer, and the same
    /// with ⌊δn⌋ = δn otherwise; either way each axis keeps n − 2⌊δn⌋
    /// values.
    pub fn bulk(&self, delta: f64) -> Result<SiteSet> {
        if !(0.0..0.5).contains(&delta) {
            return Err(Error::invalid(format!(
                "bulk requires 0 ≤ δ < 1/2, got {delta}"
            )));
        }
        let n = self.n as f64;
        let threshold = delta * n;
        let keep = |c: i64| -> bool {
            let dist = (c + 1).min(self.n as i64 - c) as f64;
            dist > threshold
        };
        let sites: Vec<LatticePoint> = self
            .site_set()
            .sites()
            .iter()
            .filter(|p| p.0.iter().all(|&c| keep(c)))
            .cloned()
            .collect();
        if sites.is_empty() {
            return Err(Error::invalid(format!(
                "bulk is empty for n={}, δ={delta}",
                self.n
            )));
        }
        SiteSet::new(self.d, sites)
    }

    /// Sites of the box at depth 1, i.e. adjacent to the complement.
    pub fn boundary_shell(&self) -> SiteSet {
        let sites = self
            .site_set()
            .sites()
            .iter()
            .filter(|p| p.0.iter().any(|&c| c == 0 || c == self.n as i64 - 1))
            .cloned()
            .collect();
        SiteSet::new(self.d, sites).expect("shell sites are distinct")
    }

    /// Sites of the complement adjacent to the box (the enclosing shell).
    pub fn outer_shell(&self) -> SiteSet {
        let mut out: Vec<LatticePoint> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for p in self.site_set().sites() {
            for q in p.neighbors() {
                if !self.contains(&q) && seen.insert(q.clone()) {
                    out.push(q);
                }
            }
        }
        out.sort();
        SiteSet::new(self.d, out).expect("outer shell sites are distinct")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_is_sign_and_permutation_invariant() {
        let a = LatticePoint(vec![-3, 1, 2]);
        let b = LatticePoint(vec![2, -1, 3]);
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.canonical(), vec![1, 2, 3]);
    }

    #[test]
    fn box_indexing_round_trips() {
        let b = BoxDomain::new(3, 4).unwrap();
        for i in 0..b.volume() {
            let p = b.site_at(i);
            assert_eq!(b.index_of(&p), Some(i));
        }
        assert_eq!(b.volume(), 64);
    }

    #[test]
    fn bulk_matches_counting_formula() {
        // n=10, δ=0.1: strictly interior sites at ℓ∞ distance > 1 from the
        // complement, 8 values per axis.
        let b = BoxDomain::new(3, 10).unwrap();
        let bulk = b.bulk(0.1).unwrap();
        assert_eq!(bulk.len(), 8usize.pow(3));
        for p in bulk.sites() {
            assert!(p.0.iter().all(|&c| (1..=8).contains(&c)));
        }
        // δ → 0 keeps the whole box.
        assert_eq!(b.bulk(0.0).unwrap().len(), b.volume());
        // Exact per-axis count n − 2⌊δn⌋ across a range of δ.
        for n in [5usize, 9, 12, 16] {
            let bx = BoxDomain::new(3, n).unwrap();
            for &delta in &[0.05, 0.1, 0.2, 0.3, 0.249] {
                let per_axis = n as i64 - 2 * ((delta * n as f64).floor() as i64);
                match bx.bulk(delta) {
                    Ok(s) => assert_eq!(s.len() as i64, per_axis.pow(3)),
                    Err(_) => assert!(per_axis <= 0),
                }
            }
        }
    }

    #[test]
    fn bulk_rejects_bad_delta() {
        let b = BoxDomain::new(3, 8).unwrap();
        assert!(b.bulk(0.5).is_err());
        assert!(b.bulk(-0.1).is_err());
    }

    #[test]
    fn shells_have_expected_sizes() {
        let b = BoxDomain::new(3, 8).unwrap();
        assert_eq!(b.boundary_shell().len(), 512 - 216);
        // Outer shell: 6 faces of 8², no edges or corners (ℓ1 neighbours only).
        assert_eq!(b.outer_shell().len(), 6 * 64);
    }

    #[test]
    fn ball_intersect_counts() {
        let b = BoxDomain::new(3, 8).unwrap().site_set();
        let center = LatticePoint(vec![4, 4, 4]);
        assert_eq!(b.ball_intersect(&center, 2).len(), 125);
        let corner = LatticePoint(vec![0, 0, 0]);
        // Corner keeps about 1/2^d of the full ball.
        assert_eq!(b.ball_intersect(&corner, 2).len(), 27);
    }
}
