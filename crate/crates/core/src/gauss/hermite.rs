use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, sqrt};

const MAX_NEWTON: usize = 100;

/// Gauss–Hermite rule for the standard normal measure: `∫ f dN(0,1) ≈ Σ wₖ f(xₖ)`.
///
/// Weights sum to one; the rule is exact for polynomials of degree `< 2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermiteRule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("nodes_per_dim", "must be positive"));
        }
        let (phys_nodes, phys_weights) = physicists(n)?;
        // e^{-x²} weight → N(0,1): x ↦ √2·x, w ↦ w/√π.
        let inv_sqrt_pi = 1.0 / sqrt(core::f64::consts::PI);
        let mut pairs: Vec<(f64, f64)> = phys_nodes
            .iter()
            .zip(&phys_weights)
            .map(|(x, w)| (core::f64::consts::SQRT_2 * x, w * inv_sqrt_pi))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}

/// Orthonormal Hermite recurrence; returns `(p_n(x), p_{n-1}(x))`.
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = libm::pow(core::f64::consts::PI, -0.25);
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = x * sqrt(2.0 / jf) * p2 - sqrt((jf - 1.0) / jf) * p3;
    }
    (p1, p2)
}

/// Roots and weights for the weight `e^{-x²}` by Newton iteration with asymptotic starts.
fn physicists(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => sqrt(2.0 * nf + 1.0) - 1.85575 * libm::pow(2.0 * nf + 1.0, -1.0 / 6.0),
            1 => z - 1.14 * libm::pow(nf, 0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (p1, p2) = hermite_pair(n, z);
            let pp = sqrt(2.0 * nf) * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if abs(z - z1) <= 1.0e-15 * (1.0 + abs(z)) {
                converged = true;
                break;
            }
        }
        if !converged || !z.is_finite() {
            return Err(Error::NonFinite {
                context: "Gauss–Hermite root iteration",
            });
        }
        let (_, p2) = hermite_pair(n, z);
        let pp = sqrt(2.0 * nf) * p2;
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    Ok((x, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial_odd(k: usize) -> f64 {
        // (k-1)!! for even k: E[z^k] of the standard normal.
        (1..k).step_by(2).map(|j| j as f64).product()
    }

    #[test]
    fn single_node_is_the_mean() {
        let rule = GaussHermiteRule::new(1).unwrap();
        assert!(rule.nodes()[0].abs() < 1e-14);
        assert!((rule.weights()[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_node_rule_is_plus_minus_one() {
        let rule = GaussHermiteRule::new(2).unwrap();
        assert!((rule.nodes()[0] + 1.0).abs() < 1e-14);
        assert!((rule.nodes()[1] - 1.0).abs() < 1e-14);
        assert!((rule.weights()[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_one_and_nodes_symmetric() {
        for n in [3, 7, 16, 32, 48, 64] {
            let rule = GaussHermiteRule::new(n).unwrap();
            let total: f64 = rule.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-13, "n = {n}: {total}");
            for k in 0..n {
                assert!((rule.nodes()[k] + rule.nodes()[n - 1 - k]).abs() < 1e-12);
            }
            assert!(rule.weights().iter().all(|w| *w > 0.0));
        }
    }

    #[test]
    fn exact_for_even_moments_below_degree_2n() {
        let rule = GaussHermiteRule::new(12).unwrap();
        for k in (0..24).step_by(2) {
            let got = rule.integrate(|x| libm::pow(x, k as f64));
            let want = double_factorial_odd(k);
            assert!(
                (got - want).abs() <= 1e-10 * want,
                "k = {k}: {got} vs {want}"
            );
        }
        for k in (1..24).step_by(2) {
            let scale = rule.integrate(|x| libm::pow(x.abs(), k as f64));
            assert!(rule.integrate(|x| libm::pow(x, k as f64)).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn rejects_zero_nodes() {
        assert!(GaussHermiteRule::new(0).is_err());
    }
}
