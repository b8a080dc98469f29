//! Probability measures on the real line built from atoms, piecewise-constant
//! densities and (scaled) arcsine components, together with their CDFs,
//! generalized inverses and pushforwards by monotone piecewise-affine maps.
//!
//! The CDF convention is `F(x) = m((-inf, x))`: left-continuous, an atom at
//! `x` is not counted in `F(x)`. The generalized inverse is
//! `F°(s) = sup { x : F(x) <= s }`. Quantile functions of two conventions
//! agree almost everywhere, so transport costs do not depend on the choice.

use crate::error::{invalid, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Total mass must lie within this distance of one.
pub const MASS_TOL: f64 = 1e-12;
/// Positions closer than this (relative to `1 + |x|`) are treated as equal.
const POS_TOL: f64 = 1e-12;
/// Adjacent pieces whose densities agree to this relative tolerance merge.
const DENSITY_TOL: f64 = 1e-12;

fn same_pos(a: f64, b: f64) -> bool {
    (a - b).abs() <= POS_TOL * (1.0 + a.abs().max(b.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

/// Constant density on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub density: f64,
}

impl Piece {
    pub fn mass(&self) -> f64 {
        self.density * (self.hi - self.lo)
    }
}

/// `weight` times the arcsine law rescaled to `(center - half_width, center + half_width)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arcsine {
    pub center: f64,
    pub half_width: f64,
    pub weight: f64,
}

impl Arcsine {
    fn cdf(&self, x: f64) -> f64 {
        let u = ((x - self.center) / self.half_width).clamp(-1.0, 1.0);
        self.weight * (0.5 + u.asin() / PI)
    }

    fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    fn hi(&self) -> f64 {
        self.center + self.half_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    /// Atoms and piecewise-constant densities only; quantiles are exact.
    DiscreteMixture,
    /// Contains arcsine components; quantiles are evaluated numerically.
    Analytic,
}

/// A probability measure on the real line.
///
/// Always held in canonical form: atoms sorted with distinct positions,
/// pieces sorted with disjoint interiors, adjacent equal-density pieces merged
/// and pieces split at atom positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure1D {
    atoms: Vec<Atom>,
    pieces: Vec<Piece>,
    arcsines: Vec<Arcsine>,
}

impl Measure1D {
    /// Builds and canonicalizes a measure; overlapping pieces are summed.
    pub fn new(atoms: Vec<Atom>, pieces: Vec<Piece>) -> Result<Self> {
        Self::with_arcsines(atoms, pieces, Vec::new())
    }

    pub fn with_arcsines(atoms: Vec<Atom>, pieces: Vec<Piece>, arcsines: Vec<Arcsine>) -> Result<Self> {
        let m = Self::canonical(atoms, pieces, arcsines)?;
        let total = m.total_mass();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {total} is not 1")));
        }
        Ok(m)
    }

    pub fn dirac(x: f64) -> Self {
        Self {
            atoms: vec![Atom { position: x, mass: 1.0 }],
            pieces: Vec::new(),
            arcsines: Vec::new(),
        }
    }

    /// Uniform law on `[a, b]`, held exactly as a density piece.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(invalid("b - a", b - a, "uniform needs a < b"));
        }
        Ok(Self {
            atoms: Vec::new(),
            pieces: vec![Piece { lo: a, hi: b, density: 1.0 / (b - a) }],
            arcsines: Vec::new(),
        })
    }

    /// Arcsine law on (-1, 1): density `1 / (pi sqrt(1 - x^2))`.
    pub fn arcsine() -> Self {
        Self::arcsine_on(0.0, 1.0).expect("unit arcsine is valid")
    }

    pub fn arcsine_on(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(invalid("half_width", half_width, "must be positive"));
        }
        Ok(Self {
            atoms: Vec::new(),
            pieces: Vec::new(),
            arcsines: vec![Arcsine { center, half_width, weight: 1.0 }],
        })
    }

    /// Convex combination `sum w_i m_i`.
    pub fn mixture(parts: &[(f64, &Measure1D)]) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut pieces = Vec::new();
        let mut arcs = Vec::new();
        for &(w, m) in parts {
            if !(w >= 0.0) {
                return Err(invalid("weight", w, "mixture weights must be nonnegative"));
            }
            if w == 0.0 {
                continue;
            }
            atoms.extend(m.atoms.iter().map(|a| Atom { mass: w * a.mass, ..*a }));
            pieces.extend(m.pieces.iter().map(|p| Piece { density: w * p.density, ..*p }));
            arcs.extend(m.arcsines.iter().map(|c| Arcsine { weight: w * c.weight, ..*c }));
        }
        Self::with_arcsines(atoms, pieces, arcs)
    }

    fn canonical(mut atoms: Vec<Atom>, pieces: Vec<Piece>, mut arcsines: Vec<Arcsine>) -> Result<Self> {
        for a in &atoms {
            if !a.position.is_finite() || !a.mass.is_finite() || a.mass < 0.0 {
                return Err(Error::InvalidMeasure(format!("bad atom {a:?}")));
            }
        }
        for p in &pieces {
            if !p.lo.is_finite() || !p.hi.is_finite() || !p.density.is_finite() || p.density < 0.0 || p.lo > p.hi {
                return Err(Error::InvalidMeasure(format!("bad piece {p:?}")));
            }
        }
        for c in &arcsines {
            if !c.center.is_finite() || !(c.half_width > 0.0) || !(c.weight >= 0.0) {
                return Err(Error::InvalidMeasure(format!("bad arcsine component {c:?}")));
            }
        }

        atoms.retain(|a| a.mass > 0.0);
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if same_pos(last.position, a.position) => last.mass += a.mass,
                _ => merged.push(a),
            }
        }

        let mut pieces = elementary_pieces(&pieces);
        // snap atoms onto nearby piece endpoints
        for a in &mut merged {
            for p in &pieces {
                if same_pos(a.position, p.lo) {
                    a.position = p.lo;
                } else if same_pos(a.position, p.hi) {
                    a.position = p.hi;
                }
            }
        }
        pieces = split_at_atoms(pieces, &merged);

        arcsines.retain(|c| c.weight > 0.0);
        arcsines.sort_by(|a, b| a.center.total_cmp(&b.center).then(a.half_width.total_cmp(&b.half_width)));

        Ok(Self {
            atoms: merged,
            pieces,
            arcsines,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn arcsines(&self) -> &[Arcsine] {
        &self.arcsines
    }

    pub fn kind(&self) -> MeasureKind {
        if self.arcsines.is_empty() {
            MeasureKind::DiscreteMixture
        } else {
            MeasureKind::Analytic
        }
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self.pieces.iter().map(Piece::mass).sum::<f64>()
            + self.arcsines.iter().map(|c| c.weight).sum::<f64>()
    }

    /// Smallest closed interval containing the support.
    pub fn support(&self) -> (f64, f64) {
        let lows = self
            .atoms
            .iter()
            .map(|a| a.position)
            .chain(self.pieces.iter().map(|p| p.lo))
            .chain(self.arcsines.iter().map(Arcsine::lo));
        let highs = self
            .atoms
            .iter()
            .map(|a| a.position)
            .chain(self.pieces.iter().map(|p| p.hi))
            .chain(self.arcsines.iter().map(Arcsine::hi));
        (lows.fold(f64::INFINITY, f64::min), highs.fold(f64::NEG_INFINITY, f64::max))
    }

    /// `m((-inf, x))`.
    pub fn cdf(&self, x: f64) -> f64 {
        let atoms: f64 = self.atoms.iter().take_while(|a| a.position < x).map(|a| a.mass).sum();
        let pieces: f64 = self
            .pieces
            .iter()
            .take_while(|p| p.lo < x)
            .map(|p| p.density * (x.min(p.hi) - p.lo))
            .sum();
        let arcs: f64 = self.arcsines.iter().map(|c| c.cdf(x)).sum();
        (atoms + pieces + arcs).min(1.0)
    }

    /// Generalized inverse of the CDF.
    pub fn quantile(&self) -> Quantile {
        match self.kind() {
            MeasureKind::DiscreteMixture => Quantile::Piecewise(QuantileFn::from_measure(self)),
            MeasureKind::Analytic => Quantile::Analytic(AnalyticQuantile::new(self.clone())),
        }
    }

    /// Pushforward by `x -> scale * x + shift`; valid for every kind.
    pub fn affine_image(&self, scale: f64, shift: f64) -> Result<Self> {
        if scale == 0.0 {
            return Ok(Self::dirac(shift));
        }
        let map = |x: f64| scale * x + shift;
        let atoms = self.atoms.iter().map(|a| Atom { position: map(a.position), mass: a.mass }).collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let (u, v) = (map(p.lo), map(p.hi));
                Piece {
                    lo: u.min(v),
                    hi: u.max(v),
                    density: p.density / scale.abs(),
                }
            })
            .collect();
        let arcs = self
            .arcsines
            .iter()
            .map(|c| Arcsine {
                center: map(c.center),
                half_width: c.half_width * scale.abs(),
                weight: c.weight,
            })
            .collect();
        Self::with_arcsines(atoms, pieces, arcs)
    }

    /// Exact pushforward by a monotone piecewise-affine map. Constant stretches
    /// of the map collapse the mass they cover into atoms.
    pub fn pushforward(&self, map: &PiecewiseLinearMap) -> Result<Self> {
        if self.kind() == MeasureKind::Analytic {
            return Err(Error::AnalyticNotSupported);
        }
        let mut atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| Atom {
                position: map.eval(a.position),
                mass: a.mass,
            })
            .collect();
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let mut cuts = vec![p.lo];
            cuts.extend(map.points.iter().map(|q| q.0).filter(|&x| x > p.lo && x < p.hi));
            cuts.push(p.hi);
            cuts.dedup();
            for w in cuts.windows(2) {
                let (u, v) = (w[0], w[1]);
                let (slope, intercept) = map.affine_on(0.5 * (u + v));
                let (yu, yv) = (slope * u + intercept, slope * v + intercept);
                let mass = p.density * (v - u);
                if yv - yu <= POS_TOL * (1.0 + yu.abs().max(yv.abs())) {
                    atoms.push(Atom { position: 0.5 * (yu + yv), mass });
                } else {
                    pieces.push(Piece {
                        lo: yu,
                        hi: yv,
                        density: mass / (yv - yu),
                    });
                }
            }
        }
        let m = Self::canonical(atoms, pieces, Vec::new())?;
        let total = m.total_mass();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("pushforward lost mass: {total}")));
        }
        Ok(m)
    }

    /// `n` inverse-CDF draws. Uniforms come from ChaCha20 seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let q = self.quantile();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..n).map(|_| q.eval(rng.random::<f64>())).collect()
    }

    /// Compares atoms and pieces entry by entry within `tol`.
    pub fn structurally_eq(&self, other: &Self, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()));
        self.atoms.len() == other.atoms.len()
            && self.pieces.len() == other.pieces.len()
            && self.arcsines.len() == other.arcsines.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| close(a.position, b.position) && close(a.mass, b.mass))
            && self
                .pieces
                .iter()
                .zip(&other.pieces)
                .all(|(a, b)| close(a.lo, b.lo) && close(a.hi, b.hi) && close(a.density, b.density))
            && self.arcsines.iter().zip(&other.arcsines).all(|(a, b)| {
                close(a.center, b.center) && close(a.half_width, b.half_width) && close(a.weight, b.weight)
            })
    }

    /// Serializes to the line-oriented text form (`atom`, `piece`, `arcsine` records).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.atoms {
            let _ = writeln!(out, "atom {} {}", a.position, a.mass);
        }
        for p in &self.pieces {
            let _ = writeln!(out, "piece {} {} {}", p.lo, p.hi, p.density);
        }
        for c in &self.arcsines {
            let _ = writeln!(out, "arcsine {} {} {}", c.center, c.half_width, c.weight);
        }
        out
    }

    /// Parses the text form. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut pieces = Vec::new();
        let mut arcs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: idx + 1, message };
            let mut fields = line.split_whitespace();
            let tag = fields.next().unwrap_or_default();
            let nums: Vec<f64> = fields
                .map(|f| f.parse::<f64>().map_err(|e| parse_err(format!("`{f}`: {e}"))))
                .collect::<Result<_>>()?;
            let want = match tag {
                "atom" => 2,
                "piece" | "arcsine" => 3,
                other => return Err(parse_err(format!("unknown record `{other}`"))),
            };
            if nums.len() != want {
                return Err(parse_err(format!("`{tag}` takes {want} numbers, got {}", nums.len())));
            }
            match tag {
                "atom" => atoms.push(Atom { position: nums[0], mass: nums[1] }),
                "piece" => {
                    if nums[0] >= nums[1] {
                        return Err(parse_err("piece needs lo < hi".into()));
                    }
                    pieces.push(Piece { lo: nums[0], hi: nums[1], density: nums[2] })
                }
                _ => arcs.push(Arcsine { center: nums[0], half_width: nums[1], weight: nums[2] }),
            }
        }
        Self::with_arcsines(atoms, pieces, arcs)
    }
}

/// Decomposes possibly-overlapping pieces into disjoint ones with summed
/// densities, then merges touching neighbours of equal density.
fn elementary_pieces(pieces: &[Piece]) -> Vec<Piece> {
    let pieces: Vec<&Piece> = pieces.iter().filter(|p| p.density > 0.0 && p.hi > p.lo).collect();
    if pieces.is_empty() {
        return Vec::new();
    }
    let mut ends: Vec<f64> = pieces.iter().flat_map(|p| [p.lo, p.hi]).collect();
    ends.sort_by(f64::total_cmp);
    let mut grid: Vec<f64> = Vec::with_capacity(ends.len());
    for x in ends {
        match grid.last() {
            Some(&last) if same_pos(last, x) => {}
            _ => grid.push(x),
        }
    }
    let snap = |x: f64| -> f64 {
        let i = grid.partition_point(|&g| g < x);
        [i.saturating_sub(1), i.min(grid.len() - 1)]
            .into_iter()
            .map(|j| grid[j])
            .find(|&g| same_pos(g, x))
            .unwrap_or(x)
    };
    let max_density = pieces.iter().map(|p| p.density).fold(0.0, f64::max);
    // difference array over the snapped grid
    let mut delta = vec![0.0; grid.len()];
    for p in &pieces {
        let lo = grid.partition_point(|&g| g < snap(p.lo));
        let hi = grid.partition_point(|&g| g < snap(p.hi));
        if hi > lo {
            delta[lo] += p.density;
            delta[hi] -= p.density;
        }
    }
    let mut out: Vec<Piece> = Vec::new();
    let mut density = 0.0;
    for i in 0..grid.len() - 1 {
        density += delta[i];
        if density.abs() <= 1e-14 * max_density {
            density = 0.0;
            continue;
        }
        let (lo, hi) = (grid[i], grid[i + 1]);
        match out.last_mut() {
            Some(last)
                if last.hi == lo
                    && (last.density - density).abs() <= DENSITY_TOL * last.density.max(density) =>
            {
                // keep the total mass exact when merging
                let mass = last.mass() + density * (hi - lo);
                last.hi = hi;
                last.density = mass / (hi - last.lo);
            }
            _ => out.push(Piece { lo, hi, density }),
        }
    }
    out
}

fn split_at_atoms(pieces: Vec<Piece>, atoms: &[Atom]) -> Vec<Piece> {
    let mut out = Vec::with_capacity(pieces.len() + atoms.len());
    for p in pieces {
        let mut lo = p.lo;
        for a in atoms.iter().filter(|a| a.position > p.lo && a.position < p.hi) {
            out.push(Piece { lo, hi: a.position, density: p.density });
            lo = a.position;
        }
        out.push(Piece { lo, hi: p.hi, density: p.density });
    }
    out
}

/// Piecewise-affine generalized inverse CDF on `[0, 1]`.
///
/// Breakpoints `(s, x)` are nondecreasing in both coordinates. Runs of equal
/// `x` are atoms of the measure; runs of equal `s` are gaps in its support,
/// where evaluation returns the upper end (the supremum convention).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFn {
    points: Vec<(f64, f64)>,
}

impl QuantileFn {
    /// Validates and wraps raw breakpoints.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidMeasure("quantile needs at least two breakpoints".into()));
        }
        let first = points[0].0;
        let last = points[points.len() - 1].0;
        if first != 0.0 || last != 1.0 {
            return Err(Error::InvalidMeasure("quantile must span s in [0, 1]".into()));
        }
        if points.windows(2).any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1) {
            return Err(Error::InvalidMeasure("quantile breakpoints must be nondecreasing".into()));
        }
        Ok(Self { points })
    }

    fn from_measure(m: &Measure1D) -> Self {
        enum Item {
            Atom(Atom),
            Piece(Piece),
        }
        let mut items: Vec<(f64, u8, Item)> = m
            .atoms
            .iter()
            .map(|a| (a.position, 0, Item::Atom(*a)))
            .chain(m.pieces.iter().map(|p| (p.lo, 1, Item::Piece(*p))))
            .collect();
        items.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let (start, _) = m.support();
        let mut points = vec![(0.0, start)];
        let mut s = 0.0;
        fn push(pt: (f64, f64), points: &mut Vec<(f64, f64)>) {
            if points.last() != Some(&pt) {
                points.push(pt);
            }
        }
        for (_, _, item) in items {
            let (lo, hi, mass) = match item {
                Item::Atom(a) => (a.position, a.position, a.mass),
                Item::Piece(p) => (p.lo, p.hi, p.mass()),
            };
            push((s, lo), &mut points);
            s = (s + mass).min(1.0);
            push((s, hi), &mut points);
        }
        if points.len() == 1 {
            points.push((1.0, start));
        }
        let n = points.len();
        points[n - 1].0 = 1.0;
        Self { points }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// `sup { x : F(x) <= s }` for `s` in `[0, 1]`.
    pub fn eval(&self, s: f64) -> f64 {
        let i = self.points.partition_point(|p| p.0 <= s);
        if i == 0 {
            return self.points[0].1;
        }
        if i == self.points.len() {
            return self.points[i - 1].1;
        }
        let (s0, x0) = self.points[i - 1];
        let (s1, x1) = self.points[i];
        x0 + (x1 - x0) * (s - s0) / (s1 - s0)
    }

    /// Left limit `lim_{u -> s-} F°(u)`; differs from [`eval`](Self::eval)
    /// only at jumps.
    pub fn eval_left(&self, s: f64) -> f64 {
        let i = self.points.partition_point(|p| p.0 < s);
        if i == 0 {
            return self.points[0].1;
        }
        if i == self.points.len() {
            return self.points[i - 1].1;
        }
        let (s0, x0) = self.points[i - 1];
        let (s1, x1) = self.points[i];
        x0 + (x1 - x0) * (s - s0) / (s1 - s0)
    }

    /// Distinct `s` levels at which the slope may change.
    pub fn levels(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.points.iter().map(|p| p.0).collect();
        out.dedup();
        out
    }

    /// Affine coefficients `(value at lo, slope)` valid on the open interval
    /// `(lo, hi)`, which must not contain a breakpoint level.
    pub(crate) fn affine_between(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mid = 0.5 * (lo + hi);
        let i = self.points.partition_point(|p| p.0 <= mid).clamp(1, self.points.len() - 1);
        let (s0, x0) = self.points[i - 1];
        let (s1, x1) = self.points[i];
        if s1 == s0 {
            return (x1, 0.0);
        }
        let slope = (x1 - x0) / (s1 - s0);
        (x0 + slope * (lo - s0), slope)
    }
}

/// Quantile of a measure with arcsine components, evaluated from its CDF.
#[derive(Debug, Clone)]
pub struct AnalyticQuantile {
    measure: Measure1D,
    levels: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl AnalyticQuantile {
    fn new(measure: Measure1D) -> Self {
        let (lo, hi) = measure.support();
        let mut xs: Vec<f64> = Vec::new();
        for a in &measure.atoms {
            xs.push(a.position);
        }
        for p in &measure.pieces {
            xs.extend([p.lo, p.hi]);
        }
        for c in &measure.arcsines {
            xs.extend([c.lo(), c.hi()]);
        }
        let mut levels = vec![0.0, 1.0];
        for &x in &xs {
            let below = measure.cdf(x);
            levels.push(below);
            let at: f64 = measure.atoms.iter().filter(|a| a.position == x).map(|a| a.mass).sum();
            levels.push((below + at).min(1.0));
        }
        levels.sort_by(f64::total_cmp);
        levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
        Self { measure, levels, lo, hi }
    }

    pub fn eval(&self, s: f64) -> f64 {
        if let ([], [], [c]) = (&self.measure.atoms[..], &self.measure.pieces[..], &self.measure.arcsines[..]) {
            return c.center + c.half_width * (PI * (s - 0.5)).sin();
        }
        // largest x with F(x) <= s
        let (mut lo, mut hi) = (self.lo, self.hi);
        if self.measure.cdf(hi) <= s {
            return hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.measure.cdf(mid) <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
}

/// Generalized inverse CDF of either measure kind.
#[derive(Debug, Clone)]
pub enum Quantile {
    Piecewise(QuantileFn),
    Analytic(AnalyticQuantile),
}

impl Quantile {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Quantile::Piecewise(q) => q.eval(s),
            Quantile::Analytic(q) => q.eval(s),
        }
    }

    /// Levels in `[0, 1]` between which the quantile is smooth.
    pub fn levels(&self) -> Vec<f64> {
        match self {
            Quantile::Piecewise(q) => q.levels(),
            Quantile::Analytic(q) => q.levels().to_vec(),
        }
    }

    pub fn as_piecewise(&self) -> Option<&QuantileFn> {
        match self {
            Quantile::Piecewise(q) => Some(q),
            Quantile::Analytic(_) => None,
        }
    }
}

/// Monotone nondecreasing piecewise-affine map of the real line.
///
/// Between consecutive breakpoints the map is affine; beyond the first and
/// last breakpoints it extends with `left_slope` and `right_slope`. Two
/// breakpoints may share an `x` (a jump); evaluation is right-continuous.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearMap {
    points: Vec<(f64, f64)>,
    left_slope: f64,
    right_slope: f64,
}

impl PiecewiseLinearMap {
    pub fn new(points: Vec<(f64, f64)>, left_slope: f64, right_slope: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("map needs at least one breakpoint".into()));
        }
        if !(left_slope >= 0.0) || !(right_slope >= 0.0) {
            return Err(Error::NonMonotoneMap(points[0].0));
        }
        for w in points.windows(2) {
            if w[1].0 < w[0].0 || w[1].1 < w[0].1 {
                return Err(Error::NonMonotoneMap(w[1].0));
            }
        }
        Ok(Self {
            points,
            left_slope,
            right_slope,
        })
    }

    pub fn identity() -> Self {
        Self {
            points: vec![(0.0, 0.0), (1.0, 1.0)],
            left_slope: 1.0,
            right_slope: 1.0,
        }
    }

    /// `x -> slope * x + intercept`, `slope >= 0`.
    pub fn affine(slope: f64, intercept: f64) -> Result<Self> {
        Self::new(vec![(0.0, intercept)], slope, slope)
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn end_slopes(&self) -> (f64, f64) {
        (self.left_slope, self.right_slope)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (slope, intercept) = self.affine_on(x);
        slope * x + intercept
    }

    /// `(slope, intercept)` of the affine piece in force at `x` (right-continuous).
    fn affine_on(&self, x: f64) -> (f64, f64) {
        let pts = &self.points;
        let i = pts.partition_point(|p| p.0 <= x);
        if i == 0 {
            let (x0, y0) = pts[0];
            return (self.left_slope, y0 - self.left_slope * x0);
        }
        if i == pts.len() {
            let (x1, y1) = pts[i - 1];
            return (self.right_slope, y1 - self.right_slope * x1);
        }
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        let slope = (y1 - y0) / (x1 - x0);
        (slope, y0 - slope * x0)
    }

    /// `(1 - lambda) id + lambda self`.
    pub fn blend_with_identity(&self, lambda: f64) -> Self {
        let points = self.points.iter().map(|&(x, y)| (x, (1.0 - lambda) * x + lambda * y)).collect();
        Self {
            points,
            left_slope: (1.0 - lambda) + lambda * self.left_slope,
            right_slope: (1.0 - lambda) + lambda * self.right_slope,
        }
    }
}

/// Validates a probability level.
pub(crate) fn check_level(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(name, v, "must lie in [0, 1]"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn alpha_beta_endpoint(alpha: f64, beta: f64) -> Measure1D {
        let u = Measure1D::uniform(-1.0, 1.0).unwrap();
        Measure1D::mixture(&[(1.0 - alpha, &u), (alpha, &Measure1D::dirac(beta))]).unwrap()
    }

    #[test]
    fn cdf_is_left_continuous_at_atoms() {
        assert_abs_diff_eq!(Measure1D::uniform(-1.0, 1.0).unwrap().cdf(0.0), 0.5);
        let m = alpha_beta_endpoint(0.5, 0.2);
        assert_abs_diff_eq!(m.cdf(0.2), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(m.cdf(0.2 + 1e-12), 0.8, epsilon = 1e-11);
        assert_abs_diff_eq!(Measure1D::arcsine().cdf(0.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn quantile_of_uniform_is_affine() {
        let q = Measure1D::uniform(-1.0, 1.0).unwrap().quantile();
        for k in 0..=10 {
            let s = k as f64 / 10.0;
            assert_abs_diff_eq!(q.eval(s), 2.0 * s - 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn quantile_of_uniform_plus_atom() {
        let q = alpha_beta_endpoint(0.5, 0.2).quantile();
        let expected = |s: f64| {
            if s < 0.3 {
                -1.0 + 4.0 * s
            } else if s <= 0.8 {
                0.2
            } else {
                -1.0 + 4.0 * (s - 0.5)
            }
        };
        for k in 0..=1000 {
            let s = k as f64 / 1000.0;
            assert_abs_diff_eq!(q.eval(s), expected(s), epsilon = 1e-12);
        }
    }

    #[test]
    fn arcsine_quantile_closed_form() {
        let q = Measure1D::arcsine().quantile();
        assert_abs_diff_eq!(q.eval(0.75), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
    }

    #[test]
    fn mixed_arcsine_quantile_by_bisection() {
        let m = Measure1D::mixture(&[(0.5, &Measure1D::dirac(0.0)), (0.5, &Measure1D::arcsine())]).unwrap();
        let q = m.quantile();
        // lower arcsine branch: F(x) = 0.5 (1/2 + asin(x)/pi)
        let s: f64 = 0.1;
        let expected = (PI * (2.0 * s - 0.5)).sin();
        assert_abs_diff_eq!(q.eval(s), expected, epsilon = 1e-13);
        assert_eq!(q.eval(0.5), 0.0);
        assert!(q.levels().iter().any(|&l| (l - 0.25).abs() < 1e-15));
    }

    #[test]
    fn quantile_jumps_take_upper_value_in_gaps() {
        let m = Measure1D::mixture(&[
            (0.5, &Measure1D::uniform(0.0, 1.0).unwrap()),
            (0.5, &Measure1D::uniform(2.0, 3.0).unwrap()),
        ])
        .unwrap();
        let q = m.quantile();
        let qf = q.as_piecewise().unwrap();
        assert_eq!(qf.eval(0.5), 2.0);
        assert_eq!(qf.eval_left(0.5), 1.0);
    }

    #[test]
    fn overlapping_pieces_sum() {
        let m = Measure1D::new(
            vec![],
            vec![
                Piece { lo: -1.0, hi: 1.0, density: 1.0 / 3.0 },
                Piece { lo: -0.25, hi: 0.25, density: 2.0 / 3.0 },
            ],
        )
        .unwrap();
        assert_eq!(m.pieces().len(), 3);
        assert_abs_diff_eq!(m.pieces()[1].density, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        let err = Measure1D::new(vec![Atom { position: 0.0, mass: 0.9 }], vec![]);
        assert!(matches!(err, Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn pushforward_dilation() {
        let u = Measure1D::uniform(-1.0, 1.0).unwrap();
        let got = u.pushforward(&PiecewiseLinearMap::affine(2.0, 0.0).unwrap()).unwrap();
        assert!(got.structurally_eq(&Measure1D::uniform(-2.0, 2.0).unwrap(), 1e-15));
    }

    #[test]
    fn pushforward_collapses_flat_segment() {
        // lambda = 1, alpha = 0.5, beta = 0: constant 0 on [-0.5, 0.5]
        let map = PiecewiseLinearMap::new(vec![(-1.0, -1.0), (-0.5, 0.0), (0.5, 0.0), (1.0, 1.0)], 0.0, 0.0).unwrap();
        let u = Measure1D::uniform(-1.0, 1.0).unwrap();
        let got = u.pushforward(&map).unwrap();
        assert!(got.structurally_eq(&alpha_beta_endpoint(0.5, 0.0), 1e-14), "{got:?}");
    }

    #[test]
    fn pushforward_rejects_analytic() {
        let r = Measure1D::arcsine().pushforward(&PiecewiseLinearMap::identity());
        assert_eq!(r, Err(Error::AnalyticNotSupported));
    }

    #[test]
    fn non_monotone_map_rejected() {
        assert!(matches!(
            PiecewiseLinearMap::new(vec![(0.0, 1.0), (1.0, 0.0)], 1.0, 1.0),
            Err(Error::NonMonotoneMap(_))
        ));
        assert!(PiecewiseLinearMap::affine(-1.0, 0.0).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_unbiased() {
        let u = Measure1D::uniform(-1.0, 1.0).unwrap();
        let n = 100_000;
        let xs = u.sample(n, 7);
        assert_eq!(xs, u.sample(n, 7));
        let mean = xs.iter().sum::<f64>() / n as f64;
        let sigma = (1.0f64 / 3.0).sqrt();
        assert!(mean.abs() < 4.0 * sigma / (n as f64).sqrt(), "mean {mean}");

        assert!(Measure1D::dirac(0.2).sample(50, 1).iter().all(|&x| x == 0.2));
    }

    #[test]
    fn arcsine_samples_balance_at_zero() {
        // Binomial(n, 1/2): sd of the proportion is 0.5/sqrt(n) ~ 0.0016
        let xs = Measure1D::arcsine().sample(100_000, 11);
        let frac = xs.iter().filter(|&&x| x < 0.0).count() as f64 / xs.len() as f64;
        assert!((frac - 0.5).abs() < 0.01);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let m = alpha_beta_endpoint(0.5, 0.2);
        let back = Measure1D::from_text(&m.to_text()).unwrap();
        assert_eq!(m, back);
        let parsed = Measure1D::from_text("# uniform\npiece -1 1 0.5\n\n").unwrap();
        assert_eq!(parsed, Measure1D::uniform(-1.0, 1.0).unwrap());
        assert!(matches!(Measure1D::from_text("blob 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Measure1D::from_text("atom 1"), Err(Error::Parse { .. })));
        assert!(matches!(Measure1D::from_text("piece 1 0 1"), Err(Error::Parse { .. })));
    }

    fn arb_measure() -> impl Strategy<Value = Measure1D> {
        (
            prop::collection::vec((-3.0f64..3.0, 0.05f64..1.0), 0..4),
            prop::collection::vec((-3.0f64..3.0, 0.01f64..2.0, 0.05f64..1.0), 1..4),
        )
            .prop_map(|(atoms, pieces)| {
                let total: f64 = atoms.iter().map(|a| a.1).sum::<f64>() + pieces.iter().map(|p| p.2).sum::<f64>();
                let atoms = atoms
                    .into_iter()
                    .map(|(x, w)| Atom { position: x, mass: w / total })
                    .collect();
                let pieces = pieces
                    .into_iter()
                    .map(|(lo, len, w)| Piece { lo, hi: lo + len, density: w / total / len })
                    .collect();
                Measure1D::new(atoms, pieces).unwrap()
            })
    }

    proptest! {
        #[test]
        fn quantile_inverts_cdf(m in arb_measure()) {
            let q = m.quantile();
            let qf = q.as_piecewise().unwrap();
            let levels = qf.levels();
            let mut prev = f64::NEG_INFINITY;
            for k in 0..1000 {
                let s = (k as f64 + 0.5) / 1000.0;
                let x = qf.eval(s);
                prop_assert!(x >= prev);
                prev = x;
                prop_assert!(m.cdf(x) <= s + 1e-12);
                if levels.iter().all(|l| (l - s).abs() > 1e-6) {
                    prop_assert!(m.cdf(x + 1e-9) > s);
                }
            }
        }

        #[test]
        fn identity_pushforward_is_exact(m in arb_measure()) {
            let pushed = m.pushforward(&PiecewiseLinearMap::identity()).unwrap();
            prop_assert!(pushed.structurally_eq(&m, 1e-14));
            prop_assert!((pushed.total_mass() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn pushforward_preserves_mass(m in arb_measure(), a in 0.0f64..3.0, b in 0.0f64..3.0, c in -1.0f64..1.0) {
            let map = PiecewiseLinearMap::new(vec![(-1.0, -4.0), (c, c * a), (c + 1.0, c * a + b)], a, 1.0).unwrap();
            let pushed = m.pushforward(&map).unwrap();
            prop_assert!((pushed.total_mass() - 1.0).abs() < 1e-12);
        }
    }
}
