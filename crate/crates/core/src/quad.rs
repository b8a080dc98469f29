//! Gauss quadrature rules (Golub–Welsch) and composite Gauss–Legendre
//! integration with panel doubling.

use nalgebra::{DMatrix, SymmetricEigen};
use std::sync::OnceLock;

/// Nodes and weights of a Gauss rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Applies the rule to `f` on `[a, b]` (affine change of variables).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        sum * half
    }
}

/// Gauss–Jacobi rule for the weight `(1-x)^a (1+x)^b`, `a, b > -1`, with
/// weights normalized to sum to one. Nodes are ascending.
pub fn gauss_jacobi_normalized(n: usize, a: f64, b: f64) -> GaussRule {
    assert!(n >= 1, "a Gauss rule needs at least one node");
    assert!(a > -1.0 && b > -1.0, "Jacobi exponents must exceed -1");
    let ab = a + b;
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        jacobi[(k, k)] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let beta = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let two_m = 2.0 * m + ab;
                4.0 * m * (m + a) * (m + b) * (m + ab)
                    / (two_m * two_m * (two_m + 1.0) * (two_m - 1.0))
            };
            let off = beta.sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    }
}

/// Gauss–Legendre rule with `n` nodes; weights sum to 2.
pub fn gauss_legendre(n: usize) -> GaussRule {
    let mut rule = gauss_jacobi_normalized(n, 0.0, 0.0);
    // symmetrize against eigen-solver noise
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        let w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if n % 2 == 1 {
        rule.nodes[n / 2] = 0.0;
    }
    for w in &mut rule.weights {
        *w *= 2.0;
    }
    rule
}

const PANEL_NODES: usize = 16;
const MAX_DOUBLINGS: u32 = 14;

fn panel_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_NODES))
}

/// Composite 16-point Gauss–Legendre on `[a, b]`, doubling the panel count
/// until two successive estimates agree to `rel_tol` (relative) or the
/// doubling budget is exhausted.
pub fn integrate_doubling<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = panel_rule();
    let composite = |panels: usize| -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + h * k as f64;
                let hi = if k + 1 == panels { b } else { lo + h };
                rule.integrate(&f, lo, hi)
            })
            .sum()
    };
    let mut panels = 1usize;
    let mut prev = composite(panels);
    for _ in 0..MAX_DOUBLINGS {
        panels *= 2;
        let next = composite(panels);
        if (next - prev).abs() <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        prev = next;
    }
    prev
}
