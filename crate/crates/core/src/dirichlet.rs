//! Dirichlet Green's functions on finite site sets, hitting distributions,
//! and harmonic extensions.
//!
//! Two independent engines are kept side by side on purpose: a dense solve
//! of (I − P_Λ)G = I, and (for hitting problems) either an exact Gram-system
//! solve built on the infinite-volume Green's function or a truncated
//! absorbing-box solve. They cross-validate each other in the tests.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::green::GreenTable;
use crate::lattice::{LatticePoint, SiteSet};

/// Dirichlet Green's matrix g_Λ(α, β) of simple random walk killed on
/// exiting Λ: the inverse of I − P_Λ. Symmetric positive definite, with
/// 1 ≤ g_Λ(α, α) ≤ g(0).
#[derive(Debug, Clone)]
pub struct DirichletGreen {
    domain: SiteSet,
    matrix: DMatrix<f64>,
}

/// I − P restricted to `domain`, with P the SRW transition matrix.
pub fn laplacian_matrix(domain: &SiteSet) -> DMatrix<f64> {
    let n = domain.len();
    let step = 1.0 / (2.0 * domain.d() as f64);
    let mut m = DMatrix::zeros(n, n);
    for (i, site) in domain.sites().iter().enumerate() {
        m[(i, i)] = 1.0;
        for nb in site.neighbors() {
            if let Some(j) = domain.position(&nb) {
                m[(i, j)] = -step;
            }
        }
    }
    m
}

/// Dense Dirichlet Green's function of `domain`.
pub fn green_dirichlet(domain: &SiteSet) -> Result<DirichletGreen> {
    if domain.is_empty() {
        return Err(Error::invalid("domain must be nonempty"));
    }
    let m = laplacian_matrix(domain);
    let chol = Cholesky::new(m)
        .ok_or_else(|| Error::SolverFailure("I − P is not positive definite".into()))?;
    let matrix = chol.inverse();
    Ok(DirichletGreen {
        domain: domain.clone(),
        matrix,
    })
}

impl DirichletGreen {
    pub fn domain(&self) -> &SiteSet {
        &self.domain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn entry(&self, a: &LatticePoint, b: &LatticePoint) -> Option<f64> {
        let i = self.domain.position(a)?;
        let j = self.domain.position(b)?;
        Some(self.matrix[(i, j)])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.domain.len()).map(|i| self.matrix[(i, i)]).collect()
    }

    /// ‖(I − P)G − I‖_max, a direct check of the defining relation.
    pub fn residual(&self) -> f64 {
        let lap = laplacian_matrix(&self.domain);
        let prod = &lap * &self.matrix;
        let n = self.domain.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[(i, j)] - want).abs());
            }
        }
        worst
    }
}

/// First-hit distribution of a finite target set.
#[derive(Debug, Clone)]
pub struct HittingDistribution {
    pub start: LatticePoint,
    pub targets: SiteSet,
    /// Probability of first hitting the target set at each of its sites,
    /// aligned with `targets` order.
    pub weights: Vec<f64>,
    /// 1 − Σ weights: mass escaping to infinity (or past the truncation).
    pub defect: f64,
}

impl HittingDistribution {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn weight_at(&self, site: &LatticePoint) -> Option<f64> {
        self.targets.position(site).map(|i| self.weights[i])
    }
}

/// Hitting distribution of `targets` from `alpha` on the infinite lattice,
/// via the strong-Markov linear system Σ_γ w_γ g(γ − β) = g(α − β), β ∈ K.
/// The Gram matrix is the field covariance on K, hence positive definite,
/// and the solution is the exact hitting distribution up to the table's
/// quadrature tolerance.
pub fn hitting_distribution(
    alpha: &LatticePoint,
    targets: &SiteSet,
    green: &GreenTable,
) -> Result<HittingDistribution> {
    if targets.is_empty() {
        return Err(Error::invalid("target set must be nonempty"));
    }
    if let Some(i) = targets.position(alpha) {
        let mut weights = vec![0.0; targets.len()];
        weights[i] = 1.0;
        return Ok(HittingDistribution {
            start: alpha.clone(),
            targets: targets.clone(),
            weights,
            defect: 0.0,
        });
    }
    let k = targets.len();
    let mut gram = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let v = green.cov(&targets.sites()[i], &targets.sites()[j])?;
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    let rhs = DVector::from_iterator(
        k,
        targets
            .sites()
            .iter()
            .map(|b| green.cov(alpha, b))
            .collect::<Result<Vec<f64>>>()?,
    );
    let chol = Cholesky::new(gram)
        .ok_or_else(|| Error::SolverFailure("green gram matrix not positive definite".into()))?;
    let w = chol.solve(&rhs);
    let weights: Vec<f64> = w.iter().copied().collect();
    let defect = 1.0 - weights.iter().sum::<f64>();
    Ok(HittingDistribution {
        start: alpha.clone(),
        targets: targets.clone(),
        weights,
        defect,
    })
}

/// Hitting distribution computed on a truncated box with absorbing far
/// boundary: the walk is killed on leaving the ℓ∞ ball of radius `radius`
/// around `alpha`, and kill mass counts toward the defect. Weights increase
/// monotonically to the infinite-lattice ones as the radius grows.
pub fn hitting_distribution_truncated(
    alpha: &LatticePoint,
    targets: &SiteSet,
    radius: i64,
) -> Result<HittingDistribution> {
    if targets.is_empty() {
        return Err(Error::invalid("target set must be nonempty"));
    }
    if let Some(i) = targets.position(alpha) {
        let mut weights = vec![0.0; targets.len()];
        weights[i] = 1.0;
        return Ok(HittingDistribution {
            start: alpha.clone(),
            targets: targets.clone(),
            weights,
            defect: 0.0,
        });
    }
    let max_target_dist = targets
        .sites()
        .iter()
        .map(|t| t.sub(alpha).linf())
        .max()
        .unwrap();
    if radius <= max_target_dist {
        return Err(Error::Truncation {
            radius,
            reason: format!("targets extend to ℓ∞ distance {max_target_dist} from the start"),
        });
    }
    // Free sites: ball minus targets, built by flood fill from alpha.
    let d = alpha.dim();
    let mut free: Vec<LatticePoint> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    seen.insert(alpha.clone());
    queue.push_back(alpha.clone());
    while let Some(p) = queue.pop_front() {
        free.push(p.clone());
        for nb in p.neighbors() {
            if nb.sub(alpha).linf() <= radius
                && !targets.contains(&nb)
                && seen.insert(nb.clone())
            {
                queue.push_back(nb);
            }
        }
    }
    let free_set = SiteSet::new(d, free)?;
    // Green row g_D(alpha, ·) on the free domain, then one-step weights
    // w_β = (1/2d) Σ_{y ~ β, y free} g_D(alpha, y).
    let mut rhs = vec![0.0; free_set.len()];
    rhs[free_set.position(alpha).expect("alpha is free")] = 1.0;
    let row = cg_solve(&free_set, &rhs, 1e-13, 40 * (radius as usize + 10))?;
    let step = 1.0 / (2.0 * d as f64);
    let weights: Vec<f64> = targets
        .sites()
        .iter()
        .map(|b| {
            b.neighbors()
                .iter()
                .filter_map(|y| free_set.position(y))
                .map(|iy| row[iy])
                .sum::<f64>()
                * step
        })
        .collect();
    let defect = 1.0 - weights.iter().sum::<f64>();
    Ok(HittingDistribution {
        start: alpha.clone(),
        targets: targets.clone(),
        weights,
        defect,
    })
}

/// Conjugate gradients on (I − P_domain) x = rhs, matrix-free.
pub fn cg_solve(domain: &SiteSet, rhs: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
    let n = domain.len();
    if rhs.len() != n {
        return Err(Error::invalid("rhs length mismatch"));
    }
    // Neighbor index lists, precomputed once.
    let neighbors: Vec<Vec<u32>> = domain
        .sites()
        .iter()
        .map(|s| {
            s.neighbors()
                .iter()
                .filter_map(|nb| domain.position(nb).map(|i| i as u32))
                .collect()
        })
        .collect();
    let step = 1.0 / (2.0 * domain.d() as f64);
    let apply = |x: &[f64], out: &mut [f64]| {
        for i in 0..n {
            let mut acc = x[i];
            for &j in &neighbors[i] {
                acc -= step * x[j as usize];
            }
            out[i] = acc;
        }
    };
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
    let mut rs: f64 = r.iter().map(|v| v * v).sum();
    for _ in 0..max_iter {
        if rs.sqrt() <= tol * rhs_norm {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if rs.sqrt() <= tol * rhs_norm * 10.0 {
        return Ok(x);
    }
    Err(Error::SolverFailure(format!(
        "cg did not converge: residual {:e} after {max_iter} iterations",
        rs.sqrt() / rhs_norm
    )))
}

/// Discrete harmonic extension: the function equal to `boundary_values` on
/// `boundary` and harmonic on `domain` (killed outside both). Returns the
/// values on `domain` in site order.
pub fn harmonic_extension(
    domain: &SiteSet,
    boundary: &SiteSet,
    boundary_values: &[f64],
    tol: f64,
) -> Result<Vec<f64>> {
    if boundary_values.len() != boundary.len() {
        return Err(Error::invalid("boundary value length mismatch"));
    }
    let step = 1.0 / (2.0 * domain.d() as f64);
    let rhs: Vec<f64> = domain
        .sites()
        .iter()
        .map(|s| {
            s.neighbors()
                .iter()
                .filter_map(|nb| boundary.position(nb))
                .map(|j| boundary_values[j])
                .sum::<f64>()
                * step
        })
        .collect();
    cg_solve(domain, &rhs, tol, 200 + 40 * domain.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::BoxDomain;
    use approx::assert_abs_diff_eq;

    fn singleton(d: usize) -> SiteSet {
        SiteSet::new(d, vec![LatticePoint::origin(d)]).unwrap()
    }

    #[test]
    fn single_site_green_is_one() {
        for d in [3, 4, 5] {
            let g = green_dirichlet(&singleton(d)).unwrap();
            assert_abs_diff_eq!(g.matrix()[(0, 0)], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn two_site_green_is_exact_rational() {
        // Λ = {0, e₁} in d = 3: inverse of [[1, −1/6], [−1/6, 1]].
        let domain = SiteSet::new(
            3,
            vec![LatticePoint::origin(3), LatticePoint::unit(3, 0)],
        )
        .unwrap();
        let g = green_dirichlet(&domain).unwrap();
        assert_abs_diff_eq!(g.matrix()[(0, 0)], 36.0 / 35.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.matrix()[(1, 1)], 36.0 / 35.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.matrix()[(0, 1)], 6.0 / 35.0, epsilon = 1e-12);
    }

    #[test]
    fn defining_relation_and_diagonal_bounds() {
        let domain = BoxDomain::new(3, 3).unwrap().site_set();
        let g = green_dirichlet(&domain).unwrap();
        assert!(g.residual() < 1e-10);
        let g0 = 1.5163860591519780;
        for v in g.diagonal() {
            assert!((1.0..=g0).contains(&v), "diagonal {v} outside [1, g(0)]");
        }
        // Symmetry.
        for i in 0..domain.len() {
            for j in 0..domain.len() {
                assert_abs_diff_eq!(g.matrix()[(i, j)], g.matrix()[(j, i)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn domain_monotonicity_of_diagonal() {
        // Λ ⊆ Λ′ ⇒ g_Λ(α,α) ≤ g_Λ′(α,α), tested on nested boxes around
        // a common site.
        let mut prev = 0.0;
        for n in [1usize, 3, 5, 7] {
            let b = BoxDomain::new(3, n).unwrap();
            let g = green_dirichlet(&b.site_set()).unwrap();
            let center = LatticePoint(vec![(n as i64 - 1) / 2; 3]);
            let diag = g.entry(&center, &center).unwrap();
            assert!(diag >= prev);
            prev = diag;
        }
        assert!(prev < 1.5163860591519780);
    }

    #[test]
    fn hitting_point_mass_when_start_in_targets() {
        let green = GreenTable::build(3, 2, 1e-8).unwrap();
        let targets = SiteSet::new(
            3,
            vec![LatticePoint::origin(3), LatticePoint::unit(3, 0)],
        )
        .unwrap();
        let h = hitting_distribution(&LatticePoint::origin(3), &targets, &green).unwrap();
        assert_eq!(h.weights, vec![1.0, 0.0]);
        assert_eq!(h.defect, 0.0);
    }

    #[test]
    fn hitting_single_target_matches_green_ratio() {
        // P_α(hit 0) = g(α)/g(0) for K = {0}.
        let green = GreenTable::build(3, 4, 1e-9).unwrap();
        let targets = singleton(3);
        let alpha = LatticePoint(vec![2, 0, 0]);
        let h = hitting_distribution(&alpha, &targets, &green).unwrap();
        let want = green.value(&alpha).unwrap() / green.g0();
        assert_abs_diff_eq!(h.total_mass(), want, epsilon = 1e-9);
        assert!(h.defect > 0.0 && h.defect < 1.0);
    }

    #[test]
    fn truncated_hitting_increases_to_exact() {
        let green = GreenTable::build(3, 4, 1e-9).unwrap();
        let targets = singleton(3);
        let alpha = LatticePoint(vec![2, 0, 0]);
        let exact = hitting_distribution(&alpha, &targets, &green).unwrap();
        let mut prev_mass = 0.0;
        for radius in [4i64, 8, 16, 32] {
            let h = hitting_distribution_truncated(&alpha, &targets, radius).unwrap();
            assert!(h.total_mass() >= prev_mass - 1e-13);
            assert!(h.total_mass() <= exact.total_mass() + 1e-9);
            prev_mass = h.total_mass();
        }
        // By radius 32 the truncated mass is within ~c/R of the exact one.
        assert!((exact.total_mass() - prev_mass).abs() < 0.02);
    }

    #[test]
    fn truncated_rejects_tight_radius() {
        let targets = SiteSet::new(3, vec![LatticePoint(vec![3, 0, 0])]).unwrap();
        let alpha = LatticePoint::origin(3);
        assert!(matches!(
            hitting_distribution_truncated(&alpha, &targets, 3),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn markov_identity_via_truncated_weights() {
        // g(α,β) = Σ_γ P_α(hit K at γ)·g(γ,β) for β ∈ K; the truncated
        // route is independent of the Gram solve, so the residual checks
        // both the quadrature and the solver.
        let green = GreenTable::build(3, 6, 1e-9).unwrap();
        let targets = SiteSet::new(
            3,
            vec![
                LatticePoint(vec![2, 0, 0]),
                LatticePoint(vec![2, 1, 0]),
                LatticePoint(vec![3, 0, 0]),
            ],
        )
        .unwrap();
        let alpha = LatticePoint::origin(3);
        let h = hitting_distribution_truncated(&alpha, &targets, 48).unwrap();
        for beta in targets.sites() {
            let lhs = green.cov(&alpha, beta).unwrap();
            let rhs: f64 = targets
                .sites()
                .iter()
                .zip(&h.weights)
                .map(|(gamma, w)| w * green.cov(gamma, beta).unwrap())
                .sum();
            // Truncation pushes weights down by O(1/R); allow that scale.
            assert!((lhs - rhs).abs() < 0.02, "residual {}", (lhs - rhs).abs());
        }
        // The Gram route satisfies the identity to solver precision.
        let h2 = hitting_distribution(&alpha, &targets, &green).unwrap();
        for beta in targets.sites() {
            let lhs = green.cov(&alpha, beta).unwrap();
            let rhs: f64 = targets
                .sites()
                .iter()
                .zip(&h2.weights)
                .map(|(gamma, w)| w * green.cov(gamma, beta).unwrap())
                .sum();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }

    #[test]
    fn harmonic_extension_of_constant_is_constant() {
        let b = BoxDomain::new(3, 5).unwrap();
        let interior = BoxDomain::new(3, 3)
            .unwrap()
            .site_set()
            .sites()
            .iter()
            .map(|p| LatticePoint(p.0.iter().map(|c| c + 1).collect()))
            .collect::<Vec<_>>();
        let interior = SiteSet::new(3, interior).unwrap();
        let boundary = b.site_set().difference(&interior).unwrap();
        let values = vec![2.5; boundary.len()];
        let mu = harmonic_extension(&interior, &boundary, &values, 1e-12).unwrap();
        for v in mu {
            assert_abs_diff_eq!(v, 2.5, epsilon = 1e-9);
        }
    }
}
