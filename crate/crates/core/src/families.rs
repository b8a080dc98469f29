//! Closed-form curves of measures.
//!
//! * `mu_t^{alpha,beta}` on the line: uniform on `[-1, 1]` flowing to
//!   `(1 - alpha) uniform + alpha delta_beta`, with a shrinking ball of raised
//!   density around `beta (1 - alpha (1 - t))`.
//! * Shell mixtures in `R^d`: weighted normalized surface measures of
//!   2-spheres lying in `span{e1, e2, e3}` (radius 0 is a Dirac mass), and the
//!   curve `nu_t^{alpha,x}` whose every Radon projection is a dilated
//!   `mu_t`. Mass moves from the unit shell to an inner shell of radius
//!   `alpha (1 - t)` instead of travelling continuously.
//! * Circle mixtures in `R^2`, whose projections are arcsine laws.

use crate::error::{invalid, Error, Result};
use crate::measure1d::{check_level, Arcsine, Atom, Measure1D, Piece};
use std::fmt::Write as _;

const UNIT_TOL: f64 = 1e-12;
const WEIGHT_TOL: f64 = 1e-12;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid("alpha", alpha, "must lie in (0, 1)"))
    }
}

/// The measure `mu_t^{alpha,beta}`.
///
/// Density `(1 - alpha) / (2 (1 - alpha (1 - t)))` on `[-1, 1]` outside the
/// ball `B_{alpha (1 - t)}[beta (1 - alpha (1 - t))]` and `1 / (2 (1 - t))`
/// inside it; at `t = 1` the ball collapses to an atom of mass `alpha` at `beta`.
pub fn mu_family(alpha: f64, beta: f64, t: f64) -> Result<Measure1D> {
    check_alpha(alpha)?;
    if !(-1.0..=1.0).contains(&beta) {
        return Err(invalid("beta", beta, "must lie in [-1, 1]"));
    }
    check_level("t", t)?;
    let shrink = 1.0 - alpha * (1.0 - t);
    let radius = alpha * (1.0 - t);
    let center = beta * shrink;
    if center.abs() + radius > 1.0 + 1e-15 {
        return Err(invalid("beta", beta, "ball leaves [-1, 1]"));
    }
    let outer = (1.0 - alpha) / (2.0 * shrink);
    if t == 1.0 {
        return Measure1D::new(
            vec![Atom { position: beta, mass: alpha }],
            vec![Piece { lo: -1.0, hi: 1.0, density: outer }],
        );
    }
    let (lo, hi) = ((center - radius).max(-1.0), (center + radius).min(1.0));
    let mut pieces = vec![Piece { lo, hi, density: 1.0 / (2.0 * (1.0 - t)) }];
    if lo > -1.0 {
        pieces.push(Piece { lo: -1.0, hi: lo, density: outer });
    }
    if hi < 1.0 {
        pieces.push(Piece { lo: hi, hi: 1.0, density: outer });
    }
    Measure1D::new(Vec::new(), pieces)
}

/// `W_p(mu_0^{alpha,beta}, mu_1^{alpha,beta})` in closed form, `1 <= p < inf`.
///
/// Sum of the three transport pieces `|alpha (1 + s) / (1 - alpha)|^p`,
/// `|beta - s|^p` and `|alpha (s - 1) / (1 - alpha)|^p` against `ds / 2`, with
/// the inner piece running over `[beta - alpha (1 + beta), beta + alpha (1 - beta)]`.
pub fn w_p_mu01(alpha: f64, beta: f64, p: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(-1.0..=1.0).contains(&beta) {
        return Err(invalid("beta", beta, "must lie in [-1, 1]"));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(invalid("p", p, "closed form needs finite p >= 1; W_inf is alpha at beta = 0"));
    }
    let k = 1.0 / (2.0 * (p + 1.0));
    let outer = (alpha / (1.0 - alpha)).powf(p)
        * (((1.0 + beta) * (1.0 - alpha)).powf(p + 1.0) + ((1.0 - beta) * (1.0 - alpha)).powf(p + 1.0));
    let inner = (alpha * (1.0 + beta)).powf(p + 1.0) + (alpha * (1.0 - beta)).powf(p + 1.0);
    Ok((k * outer + k * inner).powf(1.0 / p))
}

/// One summand of a shell mixture: `weight * sigma_{radius, center}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub weight: f64,
    pub radius: f64,
    pub center: Vec<f64>,
}

/// Weighted 2-sphere shells in `span{e1, e2, e3}` of `R^d`, `d >= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellMixture {
    dim: usize,
    shells: Vec<Shell>,
}

/// `sqrt(sum_{i<3} theta_i^2)`, the norm of the part of `theta` in `span{e1, e2, e3}`.
pub fn s_of_theta(theta: &[f64]) -> Result<f64> {
    check_unit(theta)?;
    Ok(theta.iter().take(3).map(|x| x * x).sum::<f64>().sqrt().min(1.0))
}

pub(crate) fn check_unit(theta: &[f64]) -> Result<()> {
    let norm = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitVector(norm));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ShellMixture {
    pub fn new(dim: usize, shells: Vec<Shell>) -> Result<Self> {
        if dim < 3 {
            return Err(invalid("d", dim as f64, "shell mixtures need d >= 3"));
        }
        let mut total = 0.0;
        for s in &shells {
            if s.center.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.center.len() });
            }
            if !(s.weight > 0.0) {
                return Err(invalid("weight", s.weight, "shell weights must be positive"));
            }
            if !(s.radius >= 0.0) || !s.radius.is_finite() {
                return Err(invalid("radius", s.radius, "radius must be finite and >= 0"));
            }
            total += s.weight;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("shell weights sum to {total}")));
        }
        Ok(Self { dim, shells })
    }

    /// The single shell `sigma_{r, c}`.
    pub fn sigma(dim: usize, radius: f64, center: Vec<f64>) -> Result<Self> {
        Self::new(dim, vec![Shell { weight: 1.0, radius, center }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shells(&self) -> &[Shell] {
        &self.shells
    }

    /// True when every center is the origin; such mixtures are invariant under
    /// rotations of `span{e1, e2, e3}`.
    pub fn is_centered(&self) -> bool {
        self.shells.iter().all(|s| s.center.iter().all(|&c| c == 0.0))
    }

    /// Pushforward by `x -> a x`.
    pub fn dilate(&self, a: f64) -> Self {
        let shells = self
            .shells
            .iter()
            .map(|s| Shell {
                weight: s.weight,
                radius: s.radius * a.abs(),
                center: s.center.iter().map(|c| a * c).collect(),
            })
            .collect();
        Self { dim: self.dim, shells }
    }

    /// Pushforward by `x -> x + v`.
    pub fn translate(&self, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        let shells = self
            .shells
            .iter()
            .map(|s| Shell {
                weight: s.weight,
                radius: s.radius,
                center: s.center.iter().zip(v).map(|(c, d)| c + d).collect(),
            })
            .collect();
        Ok(Self { dim: self.dim, shells })
    }

    /// Radon projection `R^theta_#`: a shell of radius `r` centered at `c`
    /// projects to the uniform law on `[theta.c - r s(theta), theta.c + r s(theta)]`
    /// (Archimedes), or to an atom when `r s(theta)` vanishes.
    pub fn radon_project(&self, theta: &[f64]) -> Result<Measure1D> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: theta.len() });
        }
        let s = s_of_theta(theta)?;
        let mut atoms = Vec::new();
        let mut pieces = Vec::new();
        for shell in &self.shells {
            let c = dot(theta, &shell.center);
            let half = shell.radius * s;
            if half <= 1e-13 * (1.0 + c.abs()) {
                atoms.push(Atom { position: c, mass: shell.weight });
            } else {
                pieces.push(Piece { lo: c - half, hi: c + half, density: shell.weight / (2.0 * half) });
            }
        }
        Measure1D::new(atoms, pieces)
    }

    /// Law of `|X|` for a centered mixture.
    pub fn radial_law(&self) -> Result<Measure1D> {
        if !self.is_centered() {
            return Err(Error::NotConcentric);
        }
        let atoms = self.shells.iter().map(|s| Atom { position: s.radius, mass: s.weight }).collect();
        Measure1D::new(atoms, Vec::new())
    }

    /// `shell <weight> <radius> <c1> ... <cd>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.shells {
            let _ = write!(out, "shell {} {}", s.weight, s.radius);
            for c in &s.center {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses `shell` lines; the dimension is the number of center coordinates.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut shells = Vec::new();
        let mut dim = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: idx + 1, message };
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("shell") => {}
                Some(other) => return Err(parse_err(format!("unknown record `{other}`"))),
                None => continue,
            }
            let nums: Vec<f64> = fields
                .map(|f| f.parse::<f64>().map_err(|e| parse_err(format!("`{f}`: {e}"))))
                .collect::<Result<_>>()?;
            if nums.len() < 5 {
                return Err(parse_err("shell needs weight, radius and at least 3 coordinates".into()));
            }
            let d = nums.len() - 2;
            match dim {
                None => dim = Some(d),
                Some(expected) if expected != d => {
                    return Err(parse_err(format!("expected {expected} coordinates, got {d}")));
                }
                _ => {}
            }
            shells.push(Shell { weight: nums[0], radius: nums[1], center: nums[2..].to_vec() });
        }
        let dim = dim.ok_or_else(|| Error::Parse { line: 0, message: "no shell records".into() })?;
        Self::new(dim, shells)
    }
}

/// `(outer, inner)` masses of `nu_t^{alpha,x}`:
/// `((1 - alpha) / (1 - alpha + alpha t), alpha t / (1 - alpha + alpha t))`.
///
/// The support is the unit shell together with the inner shell of radius
/// `alpha (1 - t)`; mass hops from the former to the latter as `t` grows.
pub fn shell_masses(alpha: f64, t: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    check_level("t", t)?;
    let denom = 1.0 - alpha + alpha * t;
    let inner = alpha * t / denom;
    Ok((1.0 - inner, inner))
}

/// `nu_t^{alpha,x}`: the unit shell at the origin plus a shell of radius
/// `alpha (1 - t)` centered at `x (1 - alpha (1 - t))`, weighted by
/// [`shell_masses`]. `x` lies in the closed unit ball of `span{e1, e2, e3}`;
/// shorter vectors are zero-padded to `d` coordinates.
pub fn nu_family(alpha: f64, x: &[f64], t: f64, d: usize) -> Result<ShellMixture> {
    let (outer, inner) = shell_masses(alpha, t)?;
    if d < 3 {
        return Err(invalid("d", d as f64, "shell mixtures need d >= 3"));
    }
    if x.len() > d {
        return Err(Error::DimensionMismatch { expected: d, found: x.len() });
    }
    if x.iter().skip(3).any(|&c| c != 0.0) {
        return Err(invalid("x", x.len() as f64, "x must lie in span{e1, e2, e3}"));
    }
    let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm > 1.0 + 1e-15 {
        return Err(invalid("|x|", norm, "x must lie in the closed unit ball"));
    }
    let shrink = 1.0 - alpha * (1.0 - t);
    let mut shells = vec![Shell { weight: outer, radius: 1.0, center: vec![0.0; d] }];
    if inner > 0.0 {
        let mut center = vec![0.0; d];
        for (c, xi) in center.iter_mut().zip(x) {
            *c = xi * shrink;
        }
        shells.push(Shell { weight: inner, radius: alpha * (1.0 - t), center });
    }
    ShellMixture::new(d, shells)
}

/// Parameters of the curve `t -> M^a_# A^{t y + z}_# nu_t^{alpha,x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellCurve {
    pub alpha: f64,
    pub x: Vec<f64>,
    pub dim: usize,
    pub dilation: f64,
    pub drift: Vec<f64>,
    pub offset: Vec<f64>,
}

impl ShellCurve {
    /// The untransformed curve `nu_t^{alpha,x}`.
    pub fn plain(alpha: f64, x: Vec<f64>, dim: usize) -> Self {
        Self {
            alpha,
            x,
            dim,
            dilation: 1.0,
            drift: vec![0.0; dim],
            offset: vec![0.0; dim],
        }
    }

    pub fn at(&self, t: f64) -> Result<ShellMixture> {
        let base = nu_family(self.alpha, &self.x, t, self.dim)?;
        let shift: Vec<f64> = self.drift.iter().zip(&self.offset).map(|(y, z)| t * y + z).collect();
        Ok(base.translate(&shift)?.dilate(self.dilation))
    }
}

/// One summand of a circle mixture in `R^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub weight: f64,
    pub radius: f64,
    pub center: [f64; 2],
}

/// Weighted normalized arc-length measures on circles in `R^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleMixture {
    circles: Vec<Circle>,
}

impl CircleMixture {
    pub fn new(circles: Vec<Circle>) -> Result<Self> {
        let mut total = 0.0;
        for c in &circles {
            if !(c.weight > 0.0) {
                return Err(invalid("weight", c.weight, "circle weights must be positive"));
            }
            if !(c.radius >= 0.0) {
                return Err(invalid("radius", c.radius, "radius must be >= 0"));
            }
            total += c.weight;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("circle weights sum to {total}")));
        }
        Ok(Self { circles })
    }

    /// `t delta_0 + (1 - t)` (uniform measure on the unit circle).
    pub fn atom_and_unit_circle(t: f64) -> Result<Self> {
        check_level("t", t)?;
        let parts = [(t, 0.0), (1.0 - t, 1.0)];
        Self::new(
            parts
                .into_iter()
                .filter(|p| p.0 > 0.0)
                .map(|(weight, radius)| Circle { weight, radius, center: [0.0, 0.0] })
                .collect(),
        )
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn is_centered(&self) -> bool {
        self.circles.iter().all(|c| c.center == [0.0, 0.0])
    }

    /// Each circle projects to an arcsine law on `(c.theta - r, c.theta + r)`.
    pub fn project(&self, theta: &[f64]) -> Result<Measure1D> {
        if theta.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: theta.len() });
        }
        check_unit(theta)?;
        let mut atoms = Vec::new();
        let mut arcs = Vec::new();
        for c in &self.circles {
            let pos = dot(&c.center, theta);
            if c.radius == 0.0 {
                atoms.push(Atom { position: pos, mass: c.weight });
            } else {
                arcs.push(Arcsine { center: pos, half_width: c.radius, weight: c.weight });
            }
        }
        Measure1D::with_arcsines(atoms, Vec::new(), arcs)
    }

    /// Law of `|X|` for a centered mixture.
    pub fn radial_law(&self) -> Result<Measure1D> {
        if !self.is_centered() {
            return Err(Error::NotConcentric);
        }
        let atoms = self.circles.iter().map(|c| Atom { position: c.radius, mass: c.weight }).collect();
        Measure1D::new(atoms, Vec::new())
    }
}
