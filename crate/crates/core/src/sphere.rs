//! Weighted direction sets on `S^{d-1}` and the dimensional constant
//! `C_{d,q} = (E[s(theta)^q])^{1/q}` for `theta` uniform on the sphere.
//!
//! Under the uniform law, `s(theta)^2 ~ Beta(3/2, (d-3)/2)` for `d >= 4`, so any
//! integrand depending on `theta` only through `s(theta)` reduces to a
//! one-dimensional integral. `beta_quadrature` turns that integral into a
//! Gauss–Jacobi rule whose nodes are realized as unit vectors
//! `s e1 + sqrt(1 - s^2) e4`.
//!
//! Monte-Carlo directions use ChaCha20 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`; the same `(d, n, seed)` always yields the
//! same nodes.

use crate::error::{invalid, Result};
use crate::families::s_of_theta;
use crate::quad::gauss_jacobi_normalized;
use crate::transport1d::Order;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    MonteCarlo { seed: u64, n: usize },
    /// Only valid for integrands that depend on `theta` through `s(theta)`.
    BetaQuadrature { n: usize },
}

/// Weighted nodes on the unit sphere; weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    provenance: Provenance,
}

impl DirectionSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `sum_k w_k f(theta_k)`, accumulated in node order.
    pub fn average<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(t, w)| w * f(t)).sum()
    }
}

/// `n` independent uniform directions in `R^d` (normalized Gaussian vectors),
/// each with weight `1/n`.
pub fn mc_directions(d: usize, n: usize, seed: u64) -> Result<DirectionSet> {
    if d < 2 {
        return Err(invalid("d", d as f64, "directions need d >= 2"));
    }
    if n == 0 {
        return Err(invalid("n", 0.0, "need at least one direction"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(n);
    while nodes.len() < n {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            nodes.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    Ok(DirectionSet {
        dim: d,
        nodes,
        weights: vec![1.0 / n as f64; n],
        provenance: Provenance::MonteCarlo { seed, n },
    })
}

/// `n`-node rule exact for integrands of the form `g(s(theta))` with `g`
/// polynomial of degree below `2n` (times a smooth factor for even `d`).
/// For `d = 3`, `s` is identically one and a single node `e1` suffices.
pub fn beta_quadrature(d: usize, n: usize) -> Result<DirectionSet> {
    if d < 3 {
        return Err(invalid("d", d as f64, "beta quadrature needs d >= 3"));
    }
    if n == 0 {
        return Err(invalid("n", 0.0, "need at least one node"));
    }
    let provenance = Provenance::BetaQuadrature { n };
    let unit = |s: f64| {
        let mut theta = vec![0.0; d];
        theta[0] = s;
        if d > 3 {
            theta[3] = (1.0 - s * s).max(0.0).sqrt();
        }
        theta
    };
    if d == 3 {
        return Ok(DirectionSet { dim: d, nodes: vec![unit(1.0)], weights: vec![1.0], provenance });
    }
    // density of s: 2 s^2 (1 - s)^a (1 + s)^a / B(3/2, (d-3)/2), a = (d-5)/2
    let a = (d as f64 - 5.0) / 2.0;
    let rule = gauss_jacobi_normalized(n, a, 0.0);
    let ss: Vec<f64> = rule.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect();
    let raw: Vec<f64> = ss
        .iter()
        .zip(&rule.weights)
        .map(|(s, w)| w * s * s * (1.0 + s).powf(a))
        .collect();
    let total: f64 = raw.iter().sum();
    Ok(DirectionSet {
        dim: d,
        nodes: ss.iter().map(|&s| unit(s)).collect(),
        weights: raw.iter().map(|w| w / total).collect(),
        provenance,
    })
}

/// How `C_{d,q}` is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CMethod {
    MonteCarlo { n: usize, seed: u64 },
    BetaQuadrature { n: usize },
}

/// Monte-Carlo estimate of a mean together with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// `E[s(theta)^q]` estimated from `n` uniform directions.
pub fn mc_s_moment(d: usize, q: f64, n: usize, seed: u64) -> Result<MeanEstimate> {
    let dirs = mc_directions(d, n, seed)?;
    let values: Vec<f64> = dirs
        .nodes()
        .iter()
        .map(|t| s_of_theta(t).map(|s| s.powf(q)))
        .collect::<Result<_>>()?;
    Ok(mean_estimate(&values))
}

pub(crate) fn mean_estimate(values: &[f64]) -> MeanEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    MeanEstimate { mean, std_error: (var / n).sqrt() }
}

/// `C_{d,q} = (E[s(theta)^q])^{1/q}` in `(0, 1]`; exactly one when `d = 3` or `q = inf`.
pub fn c_dq(d: usize, q: Order, method: CMethod) -> Result<f64> {
    if d < 3 {
        return Err(invalid("d", d as f64, "C_{d,q} needs d >= 3"));
    }
    let q = match q.validate()? {
        Order::Infinite => return Ok(1.0),
        Order::Finite(q) => q,
    };
    if d == 3 {
        return Ok(1.0);
    }
    let moment = match method {
        CMethod::BetaQuadrature { n } => {
            let dirs = beta_quadrature(d, n)?;
            dirs.nodes()
                .iter()
                .zip(dirs.weights())
                .map(|(t, w)| s_of_theta(t).map(|s| w * s.powf(q)))
                .sum::<Result<f64>>()?
        }
        CMethod::MonteCarlo { n, seed } => mc_s_moment(d, q, n, seed)?.mean,
    };
    Ok(moment.powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use statrs::function::gamma::ln_gamma;

    // E s^q = B((3+q)/2, (d-3)/2) / B(3/2, (d-3)/2)
    fn beta_moment(d: usize, q: f64) -> f64 {
        let b = (d as f64 - 3.0) / 2.0;
        let ln_beta = |x: f64, y: f64| ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
        (ln_beta((3.0 + q) / 2.0, b) - ln_beta(1.5, b)).exp()
    }

    #[test]
    fn mc_nodes_are_unit_and_deterministic() {
        let dirs = mc_directions(2, 10, 5).unwrap();
        for t in dirs.nodes() {
            let n: f64 = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_eq!(dirs, mc_directions(2, 10, 5).unwrap());
        assert_ne!(dirs, mc_directions(2, 10, 6).unwrap());
    }

    #[test]
    fn mc_s_squared_means() {
        let d3 = mc_s_moment(3, 2.0, 100_000, 1).unwrap();
        assert_relative_eq!(d3.mean, 1.0, max_relative = 1e-12);
        let d4 = mc_s_moment(4, 2.0, 100_000, 1).unwrap();
        assert!((d4.mean - 0.75).abs() < 4.0 * d4.std_error, "{d4:?}");
    }

    #[test]
    fn beta_rule_weights_and_units() {
        for d in [3, 4, 5, 7, 10] {
            let dirs = beta_quadrature(d, 24).unwrap();
            assert_relative_eq!(dirs.weights().iter().sum::<f64>(), 1.0, max_relative = 1e-12);
            for t in dirs.nodes() {
                assert!((t.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn c_dq_matches_beta_moments() {
        for d in [4usize, 5, 6, 7, 12] {
            for q in [1.0, 1.5, 2.0, 3.0, 4.0] {
                let got = c_dq(d, Order::Finite(q), CMethod::BetaQuadrature { n: 32 }).unwrap();
                let want = beta_moment(d, q).powf(1.0 / q);
                assert_relative_eq!(got, want, max_relative = 1e-10);
            }
        }
        let c42 = c_dq(4, Order::Finite(2.0), CMethod::BetaQuadrature { n: 32 }).unwrap();
        assert_relative_eq!(c42, 0.75f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn c_dq_trivial_cases() {
        for q in [1.0, 2.0, 7.5] {
            assert_eq!(c_dq(3, Order::Finite(q), CMethod::BetaQuadrature { n: 4 }).unwrap(), 1.0);
        }
        for d in [3, 4, 9] {
            assert_eq!(c_dq(d, Order::Infinite, CMethod::MonteCarlo { n: 10, seed: 0 }).unwrap(), 1.0);
        }
        assert!(c_dq(4, Order::Finite(0.5), CMethod::BetaQuadrature { n: 4 }).is_err());
        assert!(c_dq(2, Order::Finite(2.0), CMethod::BetaQuadrature { n: 4 }).is_err());
    }

    #[test]
    fn c_dq_bounds_and_monotonicity() {
        for d in [4usize, 5, 8] {
            let mut prev = 0.0;
            for q in [Order::Finite(1.0), Order::Finite(2.0), Order::Finite(4.0), Order::Infinite] {
                let c = c_dq(d, q, CMethod::BetaQuadrature { n: 32 }).unwrap();
                assert!(c > 0.0 && c <= 1.0);
                assert!(c >= prev);
                prev = c;
            }
        }
    }

    #[test]
    fn mc_and_quadrature_agree() {
        for (d, q, seed) in [(4usize, 1.0, 3u64), (5, 2.5, 4), (8, 1.5, 5), (11, 3.0, 6)] {
            let est = mc_s_moment(d, q, 50_000, seed).unwrap();
            let quad = c_dq(d, Order::Finite(q), CMethod::BetaQuadrature { n: 32 }).unwrap().powf(q);
            assert!((est.mean - quad).abs() < 4.0 * est.std_error, "d={d} q={q}: {est:?} vs {quad}");
        }
    }
}
