//! Gaussian rules on `[0, 1]` for the weight `z^(alpha-1)` and the
//! node-doubling driver shared by all integral operators.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Quadrature controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub base_nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            base_nodes: 32,
            max_nodes: 512,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.base_nodes < 4 {
            return Err(Error::invalid(
                "base_nodes",
                self.base_nodes as f64,
                "must be at least 4",
            ));
        }
        if self.max_nodes < self.base_nodes {
            return Err(Error::invalid(
                "max_nodes",
                self.max_nodes as f64,
                "must not be smaller than base_nodes",
            ));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", self.rel_tol, "must be positive"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", self.abs_tol, "must be positive"));
        }
        Ok(())
    }
}

/// A value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
    /// False when `max_nodes` was reached before the tolerance was met.
    pub converged: bool,
    /// Node count of the rule that produced `value`.
    pub nodes: usize,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            error_estimate: 0.0,
            converged: true,
            nodes: 0,
        }
    }
}

/// Nodes (ascending) and weights of a Gaussian rule on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Gauss rule exact for `∫₀¹ z^(alpha-1) p(z) dz`, `deg p <= 2n - 1`.
///
/// Golub-Welsch: the Jacobi matrix of the shifted Jacobi polynomials with
/// parameters `(0, alpha - 1)` is diagonalised; nodes are its eigenvalues
/// and weights `mu0 * v0²` with `mu0 = 1/alpha`.
pub fn jacobi_nodes(alpha: f64, n: usize) -> Result<GaussRule> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(
            "alpha",
            alpha,
            "Jacobi weight needs alpha > 0",
        ));
    }
    if n == 0 {
        return Err(Error::invalid("n_nodes", 0.0, "need at least one node"));
    }
    // Recurrence on [-1, 1] with weight (1-x)^a (1+x)^b, then z = (1+x)/2.
    let (a, b) = (0.0f64, alpha - 1.0);
    let ab = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let d = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let s = 2.0 * kf + ab;
            (b * b - a * a) / (s * (s + 2.0))
        };
        diag.push(0.5 * (1.0 + d));
        if k + 1 < n {
            let j = (k + 1) as f64;
            let s = 2.0 * j + ab;
            let beta = 4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
            off.push(0.5 * beta.sqrt());
        }
    }
    let first = tridiagonal_eigen(&mut diag, &mut off).ok_or(Error::EigenNonConvergence(n))?;
    let mu0 = 1.0 / alpha;
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first)
        .map(|(x, v)| (x, mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(GaussRule { nodes, weights })
}

/// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds
/// the eigenvalues; the result holds the first component of each
/// normalised eigenvector.
fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let t = z[i + 1];
                z[i + 1] = s * z[i] + c * t;
                z[i] = c * z[i] - s * t;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some(z)
}

type RuleCache = RwLock<HashMap<(u64, usize), Arc<GaussRule>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached [`jacobi_nodes`]. Each `(alpha, n)` rule is computed once.
pub fn jacobi_rule(alpha: f64, n: usize) -> Result<Arc<GaussRule>> {
    let key = (alpha.to_bits(), n);
    if let Some(rule) = cache().read().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let mut map = cache().write().expect("rule cache poisoned");
    if let Some(rule) = map.get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(jacobi_nodes(alpha, n)?);
    map.insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// Gauss-Legendre rule on `[0, 1]`.
pub fn legendre_rule(n: usize) -> Result<Arc<GaussRule>> {
    jacobi_rule(1.0, n)
}

/// Evaluates `sum(n)` for `n = base, 2 base, ...` until two successive
/// values agree to `max(rel_tol |Q|, abs_tol)` or `max_nodes` is reached.
pub fn by_doubling(
    cfg: &QuadConfig,
    mut sum: impl FnMut(usize) -> Result<f64>,
) -> Result<Estimate> {
    cfg.validate()?;
    let mut n = cfg.base_nodes;
    let mut prev = sum(n)?;
    let mut diff = f64::INFINITY;
    if n * 2 > cfg.max_nodes {
        // No room to double: compare against the half-size rule instead.
        let coarse = sum((n / 2).max(1))?;
        diff = (prev - coarse).abs();
        return Ok(Estimate {
            value: prev,
            error_estimate: diff,
            converged: diff <= cfg.rel_tol * prev.abs() || diff <= cfg.abs_tol,
            nodes: n,
        });
    }
    while n * 2 <= cfg.max_nodes {
        n *= 2;
        let cur = sum(n)?;
        diff = (cur - prev).abs();
        prev = cur;
        if diff <= cfg.rel_tol * cur.abs() || diff <= cfg.abs_tol {
            return Ok(Estimate {
                value: cur,
                error_estimate: diff,
                converged: true,
                nodes: n,
            });
        }
    }
    Ok(Estimate {
        value: prev,
        error_estimate: diff,
        converged: false,
        nodes: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moment(rule: &GaussRule, k: i32) -> f64 {
        rule.iter().map(|(x, w)| w * x.powi(k)).sum()
    }

    #[test]
    fn legendre_weights_sum_to_one() {
        for n in [1, 2, 5, 32, 128] {
            let r = jacobi_nodes(1.0, n).unwrap();
            assert!((moment(&r, 0) - 1.0).abs() < 1e-14, "n={n}");
        }
        let r = jacobi_nodes(1.0, 2).unwrap();
        let x0 = 0.5 - 0.5 / 3f64.sqrt();
        assert!((r.nodes[0] - x0).abs() < 1e-15);
    }

    #[test]
    fn singular_weight_moments() {
        let r4 = jacobi_nodes(0.5, 4).unwrap();
        assert!((moment(&r4, 0) - 2.0).abs() < 1e-13);
        let r8 = jacobi_nodes(0.5, 8).unwrap();
        assert!((moment(&r8, 3) - 2.0 / 7.0).abs() < 1e-13);
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        // ∫₀¹ z^(alpha-1) z^k dz = 1/(alpha + k)
        for alpha in [0.1, 0.3, 0.7, 1.0, 1.5, 2.7, 3.9] {
            for n in [3, 6, 10] {
                let r = jacobi_nodes(alpha, n).unwrap();
                assert!(r.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
                assert!(r.weights.iter().all(|&w| w > 0.0));
                for k in 0..(2 * n as i32) {
                    let exact = 1.0 / (alpha + k as f64);
                    let got = moment(&r, k);
                    assert!(
                        (got - exact).abs() <= 1e-13 * exact,
                        "alpha={alpha} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn large_rules_stay_accurate() {
        let r = jacobi_rule(0.3, 512).unwrap();
        assert!((moment(&r, 0) - 1.0 / 0.3).abs() < 1e-12);
        assert!((moment(&r, 5) - 1.0 / 5.3).abs() < 1e-12);
        let again = jacobi_rule(0.3, 512).unwrap();
        assert!(Arc::ptr_eq(&r, &again));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(jacobi_nodes(0.0, 4).is_err());
        assert!(jacobi_nodes(1.0, 0).is_err());
        let bad = QuadConfig {
            base_nodes: 2,
            ..QuadConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn doubling_driver() {
        let cfg = QuadConfig::default();
        let est = by_doubling(&cfg, |n| {
            let r = legendre_rule(n)?;
            Ok(r.iter().map(|(x, w)| w * x.exp()).sum())
        })
        .unwrap();
        assert!(est.converged);
        assert_eq!(est.nodes, 64);
        assert!((est.value - (1f64.exp() - 1.0)).abs() < 1e-15);
        // sqrt has an endpoint singularity: Gauss converges only algebraically.
        let est = by_doubling(&cfg, |n| {
            let r = legendre_rule(n)?;
            Ok(r.iter().map(|(x, w)| w * x.sqrt()).sum())
        })
        .unwrap();
        assert!(!est.converged);
        assert!(est.error_estimate > 0.0);
    }
}
