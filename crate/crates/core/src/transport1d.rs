//! One-dimensional optimal transport through quantile functions: monotone
//! optimal maps, displacement interpolation, `W_p` for finite `p >= 1` and
//! `W_inf`, and constant-speed checks for curves of measures.

use crate::error::{invalid, Error, Result};
use crate::measure1d::{check_level, Measure1D, MeasureKind, PiecewiseLinearMap, Quantile, QuantileFn};
use crate::quad::{gauss_legendre, integrate_doubling, GaussRule};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Exponent of a Wasserstein distance or of the slice average: `p` / `q` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Finite(f64),
    Infinite,
}

impl Order {
    pub fn finite(p: f64) -> Result<Self> {
        if p >= 1.0 && p.is_finite() {
            Ok(Order::Finite(p))
        } else {
            Err(invalid("order", p, "must be a finite number >= 1"))
        }
    }

    pub fn as_finite(self) -> Option<f64> {
        match self {
            Order::Finite(p) => Some(p),
            Order::Infinite => None,
        }
    }

    pub(crate) fn validate(self) -> Result<Self> {
        match self {
            Order::Finite(p) => Order::finite(p),
            Order::Infinite => Ok(self),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(p) => write!(f, "{p}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Order::Infinite),
            other => {
                let p: f64 = other.parse().map_err(|_| Error::Parse {
                    line: 0,
                    message: format!("`{s}` is neither a number nor `inf`"),
                })?;
                Order::finite(p)
            }
        }
    }
}

/// Monotone rearrangement `F°_nu ∘ F_mu` from an atomless `mu` to `nu`.
///
/// The map is constant outside the support of `mu` (end slopes zero). Jumps
/// of the quantile of `nu` (gaps in its support) become vertical breakpoint
/// pairs.
pub fn optimal_map(mu: &Measure1D, nu: &Measure1D) -> Result<PiecewiseLinearMap> {
    if mu.kind() == MeasureKind::Analytic || nu.kind() == MeasureKind::Analytic {
        return Err(Error::AnalyticNotSupported);
    }
    if mu.has_atoms() {
        return Err(Error::SourceHasAtoms);
    }
    let q_mu = QuantileFn::from(mu);
    let q_nu = QuantileFn::from(nu);

    let mut xs: Vec<f64> = q_mu.breakpoints().iter().map(|p| p.1).collect();
    for s in q_nu.levels() {
        xs.push(q_mu.eval_left(s));
        xs.push(q_mu.eval(s));
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())));

    let nu_levels = q_nu.levels();
    let mut points = Vec::with_capacity(xs.len() + nu_levels.len());
    for x in xs {
        let mut s = mu.cdf(x);
        if let Some(&level) = nu_levels.iter().find(|&&l| (l - s).abs() <= 1e-13) {
            s = level;
        }
        let below = q_nu.eval_left(s);
        let at = q_nu.eval(s);
        if below < at {
            points.push((x, below));
        }
        points.push((x, at));
    }
    // rounding can produce a downward wiggle of an ulp
    for i in 1..points.len() {
        if points[i].1 < points[i - 1].1 {
            points[i].1 = points[i - 1].1;
        }
    }
    PiecewiseLinearMap::new(points, 0.0, 0.0)
}

/// Displacement interpolation `((1 - lambda) id + lambda T)_# mu`.
pub fn interpolate(mu: &Measure1D, nu: &Measure1D, lambda: f64) -> Result<Measure1D> {
    check_level("lambda", lambda)?;
    let map = optimal_map(mu, nu)?;
    if lambda == 0.0 {
        return Ok(mu.clone());
    }
    mu.pushforward(&map.blend_with_identity(lambda))
}

impl From<&Measure1D> for QuantileFn {
    /// Panics on analytic measures; callers check the kind first.
    fn from(m: &Measure1D) -> Self {
        match m.quantile() {
            Quantile::Piecewise(q) => q,
            Quantile::Analytic(_) => panic!("analytic measure has no piecewise quantile"),
        }
    }
}

fn merged_levels(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().filter(|s| (0.0..=1.0).contains(s)).collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    all
}

fn short_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(8))
}

/// `∫_0^len |g(u)|^p du` for `g` affine with `g(0) = g0`, `g(len) = g1`.
fn abs_pow_integral(g0: f64, g1: f64, len: f64, p: f64) -> f64 {
    if len <= 0.0 {
        return 0.0;
    }
    if g0 * g1 < 0.0 {
        let z = g0 / (g0 - g1);
        return abs_pow_integral(g0, 0.0, len * z, p) + abs_pow_integral(0.0, g1, len * (1.0 - z), p);
    }
    let (u, v) = (g0.abs(), g1.abs());
    let spread = (v - u).abs();
    if spread == 0.0 {
        return u.powf(p) * len;
    }
    if spread < 1e-3 * u.max(v) {
        // the antiderivative difference cancels badly; the integrand is smooth here
        return short_rule().integrate(|t| (u + (v - u) * t).powf(p), 0.0, 1.0) * len;
    }
    (v.powf(p + 1.0) - u.powf(p + 1.0)) / ((p + 1.0) * (v - u)) * len
}

/// `W_p^p` between two piecewise-affine quantiles, integrated exactly piece by piece.
pub fn quantile_cost(qa: &QuantileFn, qb: &QuantileFn, p: f64) -> f64 {
    scaled_cost(qa, qb, p, 1.0)
}

/// `∫ |(qa - qb) / scale|^p`; dividing by the sup keeps large `p` from underflowing.
fn scaled_cost(qa: &QuantileFn, qb: &QuantileFn, p: f64, scale: f64) -> f64 {
    let levels = merged_levels(&qa.levels(), &qb.levels());
    levels
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let (a0, ka) = qa.affine_between(lo, hi);
            let (b0, kb) = qb.affine_between(lo, hi);
            let g0 = a0 - b0;
            let g1 = g0 + (ka - kb) * (hi - lo);
            abs_pow_integral(g0 / scale, g1 / scale, hi - lo, p)
        })
        .sum()
}

/// Essential supremum of `|qa - qb|` on `(0, 1)`.
pub fn quantile_sup(qa: &QuantileFn, qb: &QuantileFn) -> f64 {
    let levels = merged_levels(&qa.levels(), &qb.levels());
    levels
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let (a0, ka) = qa.affine_between(lo, hi);
            let (b0, kb) = qb.affine_between(lo, hi);
            let g0 = a0 - b0;
            let g1 = g0 + (ka - kb) * (hi - lo);
            g0.abs().max(g1.abs())
        })
        .fold(0.0, f64::max)
}

const ANALYTIC_REL_TOL: f64 = 1e-10;
const SUP_GRID: usize = 10_000;

/// `W_p(mu, nu)` for finite `p >= 1`.
///
/// Piecewise measures are integrated in closed form; measures with arcsine
/// components use composite Gauss–Legendre between all quantile breakpoints,
/// doubling panels until successive estimates agree to 1e-10 relative.
pub fn wasserstein_p(mu: &Measure1D, nu: &Measure1D, p: f64) -> Result<f64> {
    Order::finite(p)?;
    let (qa, qb) = (mu.quantile(), nu.quantile());
    // Work with |g| / scale <= 1 so that |g|^p cannot underflow for large p.
    let (scale, cost) = match (qa.as_piecewise(), qb.as_piecewise()) {
        (Some(a), Some(b)) => {
            let scale = quantile_sup(a, b);
            if scale == 0.0 {
                return Ok(0.0);
            }
            (scale, scaled_cost(a, b, p, scale))
        }
        _ => {
            let ((alo, ahi), (blo, bhi)) = (mu.support(), nu.support());
            let scale = (ahi - blo).abs().max((bhi - alo).abs());
            if scale == 0.0 {
                return Ok(0.0);
            }
            let levels = merged_levels(&qa.levels(), &qb.levels());
            let cost = levels
                .windows(2)
                .filter(|w| w[1] > w[0])
                .map(|w| {
                    integrate_doubling(
                        |s| ((qa.eval(s) - qb.eval(s)).abs() / scale).powf(p),
                        w[0],
                        w[1],
                        ANALYTIC_REL_TOL,
                    )
                })
                .sum::<f64>();
            (scale, cost)
        }
    };
    Ok(scale * cost.max(0.0).powf(1.0 / p))
}

/// `W_inf(mu, nu) = sup_s |F°_mu(s) - F°_nu(s)|` for compactly supported measures.
///
/// Exact over merged breakpoints for piecewise measures. Otherwise a grid of
/// 10^4 levels (plus every breakpoint level) is refined by golden-section
/// search around the largest grid value to 1e-10 in `s`.
pub fn wasserstein_inf(mu: &Measure1D, nu: &Measure1D) -> Result<f64> {
    let (qa, qb) = (mu.quantile(), nu.quantile());
    if let (Some(a), Some(b)) = (qa.as_piecewise(), qb.as_piecewise()) {
        return Ok(quantile_sup(a, b));
    }
    let gap = |s: f64| (qa.eval(s) - qb.eval(s)).abs();
    let h = 1.0 / SUP_GRID as f64;
    let (mut best_s, mut best) = (0.5 * h, gap(0.5 * h));
    for i in 1..SUP_GRID {
        let s = (i as f64 + 0.5) * h;
        let v = gap(s);
        if v > best {
            best = v;
            best_s = s;
        }
    }
    for &s in merged_levels(&qa.levels(), &qb.levels()).iter().filter(|&&s| s > 0.0 && s < 1.0) {
        best = best.max(gap(s));
    }
    let refined = golden_max(&gap, (best_s - h).max(0.0), (best_s + h).min(1.0), 1e-10);
    Ok(best.max(refined))
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f(0.5 * (a + b)))
}

/// `W_p` for finite or infinite order.
pub fn wasserstein(mu: &Measure1D, nu: &Measure1D, order: Order) -> Result<f64> {
    match order.validate()? {
        Order::Finite(p) => wasserstein_p(mu, nu, p),
        Order::Infinite => wasserstein_inf(mu, nu),
    }
}

/// Exact `W_p` between two weighted atomic measures given as `(position,
/// weight)` pairs sorted by position, by north-west-corner matching of the
/// merged quantile breakpoints. Weights of each side must sum to one.
pub fn wasserstein_p_sorted_atoms(a: &[(f64, f64)], b: &[(f64, f64)], p: f64) -> f64 {
    let (mut i, mut j) = (0, 0);
    let (mut ra, mut rb) = (a.first().map_or(0.0, |x| x.1), b.first().map_or(0.0, |x| x.1));
    let mut cost = 0.0;
    while i < a.len() && j < b.len() {
        let moved = ra.min(rb);
        cost += moved * (a[i].0 - b[j].0).abs().powf(p);
        ra -= moved;
        rb -= moved;
        if ra <= rb {
            i += 1;
            ra = a.get(i).map_or(0.0, |x| x.1);
        } else {
            j += 1;
            rb = b.get(j).map_or(0.0, |x| x.1);
        }
    }
    cost.max(0.0).powf(1.0 / p)
}

/// Largest violation of `d(c_t, c_s) = |t - s| d(c_0, c_1)` over all pairs of
/// a grid that contains both endpoints.
pub fn speed_deviation<T, C, D>(grid: &[f64], curve: C, dist: D) -> Result<f64>
where
    C: Fn(f64) -> Result<T>,
    D: Fn(&T, &T) -> Result<f64>,
{
    for &t in grid {
        check_level("t", t)?;
    }
    if !grid.contains(&0.0) || !grid.contains(&1.0) {
        return Err(invalid("grid", grid.len() as f64, "grid must contain 0 and 1"));
    }
    let points = grid.iter().map(|&t| curve(t)).collect::<Result<Vec<T>>>()?;
    let i0 = grid.iter().position(|&t| t == 0.0).unwrap_or(0);
    let i1 = grid.iter().position(|&t| t == 1.0).unwrap_or(0);
    let full = dist(&points[i0], &points[i1])?;
    let mut worst: f64 = 0.0;
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let d = dist(&points[i], &points[j])?;
            worst = worst.max((d - (grid[i] - grid[j]).abs() * full).abs());
        }
    }
    Ok(worst)
}

/// Constant-speed deviation of a curve of 1D measures under `W_p`.
pub fn geodesic_deviation<C>(curve: C, order: Order, grid: &[f64]) -> Result<f64>
where
    C: Fn(f64) -> Result<Measure1D>,
{
    speed_deviation(grid, curve, |a, b| wasserstein(a, b, order))
}
