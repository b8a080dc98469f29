//! One function per subcommand, each producing a [`Report`].

use crate::family::{self, Curve};
use crate::output::{Cell, Marker, Plot, Report, Series};
use crate::params::{parse_grid, parse_list, Params};
use anyhow::{bail, Context, Result};
use std::path::{Path, PathBuf};
use swgeo::exec::try_map_indexed;
use swgeo::families::{mu_family, nu_family, shell_masses, CircleMixture};
use swgeo::sliced::{sw_pq_with, w_p_radial, SlicePath};
use swgeo::sphere::{beta_quadrature, c_dq, mc_directions, mc_s_moment, CMethod};
use swgeo::transport1d::{wasserstein, Order};
use swgeo::{DirectionSet, Execution, Measure1D, ShellMixture};

/// Flags shared by every command, still unresolved.
#[derive(Debug, Clone, Default)]
pub struct Common {
    pub seed: Option<String>,
    pub dirs: Option<String>,
    pub quad: Option<String>,
    pub exec: Option<String>,
}

pub struct Ctx {
    pub params: Params,
    pub common: Common,
    pub exec: Execution,
}

impl Ctx {
    pub fn new(params: Params, common: Common) -> Result<Self> {
        // execution mode never changes results, so it stays out of the header
        let exec = match common.exec.as_deref().or(params.config_value("exec")).unwrap_or("par") {
            "par" | "parallel" => Execution::Parallel,
            "seq" | "sequential" => Execution::Sequential,
            other => bail!("invalid value {other:?} for exec (expected seq or par)"),
        };
        Ok(Self { params, common, exec })
    }

    fn seed(&mut self) -> Result<u64> {
        let flag = self.common.seed.clone();
        self.params.get("seed", flag.as_deref(), "0")
    }

    fn dirs(&mut self, default: &str) -> Result<usize> {
        let flag = self.common.dirs.clone();
        let n: usize = self.params.get("dirs", flag.as_deref(), default)?;
        if n == 0 {
            bail!("dirs must be positive");
        }
        Ok(n)
    }

    /// Direction set on `S^{d-1}` from `--quad`, `--dirs` and (for Monte Carlo) `--seed`.
    fn directions(&mut self, d: usize) -> Result<DirectionSet> {
        let flag = self.common.quad.clone();
        let quad = self.params.raw("quad", flag.as_deref(), "beta");
        let n = self.dirs("32")?;
        Ok(match quad.as_str() {
            "beta" => beta_quadrature(d, n)?,
            "mc" => mc_directions(d, n, self.seed()?)?,
            other => bail!("invalid value {other:?} for quad (expected beta or mc)"),
        })
    }

    fn real(&mut self, key: &str, flag: &Option<String>, default: &str) -> Result<f64> {
        self.params.get(key, flag.as_deref(), default)
    }

    fn order(&mut self, key: &str, flag: &Option<String>, default: &str) -> Result<Order> {
        self.params.get(key, flag.as_deref(), default)
    }

    fn grid(&mut self, key: &str, flag: &Option<String>, default: &str) -> Result<Vec<f64>> {
        let raw = self.params.raw(key, flag.as_deref(), default);
        parse_grid(&raw).with_context(|| format!("parsing {key}"))
    }

    fn dim(&mut self, flag: &Option<String>, default: &str) -> Result<usize> {
        let d: usize = self.params.get("d", flag.as_deref(), default)?;
        if d < 3 {
            bail!("d must be at least 3");
        }
        Ok(d)
    }
}

fn unit_interval(name: &str, ts: &[f64], open_at_zero: bool) -> Result<()> {
    for &t in ts {
        if !(t <= 1.0 && (t > 0.0 || (!open_at_zero && t == 0.0))) {
            let range = if open_at_zero { "(0, 1]" } else { "[0, 1]" };
            bail!("{name}={t} outside {range}");
        }
    }
    Ok(())
}

/// Least-squares slope of `ln y` against `ln t` over `t` in `[lo, hi]`.
fn loglog_slope(points: &[(f64, f64)], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, y)| *t >= lo * (1.0 - 1e-12) && *t <= hi * (1.0 + 1e-12) && *y > 0.0)
        .map(|(t, y)| (t.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

const FIT_LO: f64 = 1e-4;
const FIT_HI: f64 = 1e-1;
const FIT_TOL: f64 = 0.01;

fn fit_check(report: &mut Report, name: &str, points: &[(f64, f64)], target: f64) {
    match loglog_slope(points, FIT_LO, FIT_HI) {
        Some(slope) => {
            let pass = (slope - target).abs() <= FIT_TOL;
            report.notes.push(format!("fit {name}={} target={} window=1e-4..1e-1", crate::output::real(slope), crate::output::real(target)));
            report.check(name, pass, format!("|{slope:.6} - {target:.6}| <= {FIT_TOL}"));
        }
        None => report.notes.push(format!("fit {name} skipped: fewer than two t values in 1e-4..1e-1")),
    }
}

pub struct DensityArgs {
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub t: Option<String>,
}

pub fn density(ctx: &mut Ctx, a: &DensityArgs) -> Result<Report> {
    let alpha = ctx.real("alpha", &a.alpha, "0.5")?;
    let beta = ctx.real("beta", &a.beta, "0.2")?;
    let ts = ctx.grid("t", &a.t, "0,0.1,0.5")?;
    unit_interval("t", &ts, false)?;
    let mut report = Report::new(vec!["t", "kind", "x_lo", "x_hi", "value"]);
    report.plot = Plot {
        title: format!("density of mu_t, alpha={alpha}, beta={beta}"),
        x_label: "x".into(),
        y_label: "density".into(),
        ..Plot::default()
    };
    for &t in &ts {
        let m = mu_family(alpha, beta, t)?;
        let mut points = Vec::new();
        for p in m.pieces() {
            report.rows.push(vec![t.into(), "piece".into(), p.lo.into(), p.hi.into(), p.density.into()]);
            points.push((p.lo, p.density));
            points.push((p.hi, p.density));
        }
        let top = m.pieces().iter().map(|p| p.density).fold(0.0, f64::max);
        for atom in m.atoms() {
            report.rows.push(vec![t.into(), "atom".into(), atom.position.into(), atom.position.into(), atom.mass.into()]);
            report.plot.markers.push(Marker {
                label: format!("atom {} (t={t})", atom.mass),
                x: atom.position,
                y: top * 1.1,
            });
        }
        report.plot.series.push(Series { label: format!("t={t}"), points });
    }
    Ok(report)
}

pub struct NonequivArgs {
    pub alpha: Option<String>,
    pub p: Option<String>,
    pub q: Option<String>,
    pub d: Option<String>,
    pub t: Option<String>,
}

fn reject_p_one(p: Order) -> Result<()> {
    if p == Order::Finite(1.0) {
        bail!("p = 1 is outside the hypothesis of the non-equivalence statement, which holds for all 1 < p <= inf");
    }
    Ok(())
}

pub fn nonequiv(ctx: &mut Ctx, a: &NonequivArgs) -> Result<Report> {
    let alpha = ctx.real("alpha", &a.alpha, "0.5")?;
    let p = ctx.order("p", &a.p, "2")?;
    reject_p_one(p)?;
    let q = ctx.order("q", &a.q, "2")?;
    let d = ctx.dim(&a.d, "3")?;
    let ts = ctx.grid("t", &a.t, "log:1e-4:1e-1:13")?;
    unit_interval("t", &ts, true)?;
    let dirs = ctx.directions(d)?;
    let exec = ctx.exec;
    let nu_0 = nu_family(alpha, &vec![0.0; d], 0.0, d)?;
    let rows = try_map_indexed(exec, ts.len(), |k| -> Result<(f64, f64)> {
        let nu_t = nu_family(alpha, &vec![0.0; d], ts[k], d)?;
        let w = w_p_radial(&nu_t, &nu_0, p)?;
        let sw = sw_pq_with(&nu_t, &nu_0, p, q, &dirs, Execution::Sequential, SlicePath::Auto)?;
        Ok((w, sw))
    })?;
    let mut report = Report::new(vec!["t", "w_p", "sw_pq", "ratio"]);
    let mut ratio_pts = Vec::new();
    let (mut w_pts, mut sw_pts) = (Vec::new(), Vec::new());
    for (&t, &(w, sw)) in ts.iter().zip(&rows) {
        report.rows.push(vec![t.into(), w.into(), sw.into(), (w / sw).into()]);
        ratio_pts.push((t, w / sw));
        w_pts.push((t, w));
        sw_pts.push((t, sw));
    }
    let target = match p {
        Order::Finite(p) => 1.0 / p - 1.0,
        Order::Infinite => -1.0,
    };
    fit_check(&mut report, "ratio_slope", &ratio_pts, target);
    report.plot = Plot {
        title: format!("W_p / SW_p,q along nu_t, alpha={alpha}, p={p}, q={q}, d={d}"),
        x_label: "t".into(),
        y_label: "value".into(),
        log_x: true,
        log_y: true,
        series: vec![
            Series { label: "W_p".into(), points: w_pts },
            Series { label: "SW_p,q".into(), points: sw_pts },
            Series { label: "ratio".into(), points: ratio_pts },
        ],
        markers: vec![],
    };
    Ok(report)
}

pub struct HolderArgs {
    pub alpha: Option<String>,
    pub p: Option<String>,
    pub d: Option<String>,
    pub t: Option<String>,
}

pub fn holder(ctx: &mut Ctx, a: &HolderArgs) -> Result<Report> {
    let alpha = ctx.real("alpha", &a.alpha, "0.5")?;
    let p = ctx.order("p", &a.p, "2")?;
    reject_p_one(p)?;
    let Order::Finite(pf) = p else {
        bail!("the Hölder exponent fit needs a finite p");
    };
    let d = ctx.dim(&a.d, "3")?;
    let ts = ctx.grid("t", &a.t, "log:1e-4:1e-1:13")?;
    unit_interval("t", &ts, true)?;
    let nu_0 = nu_family(alpha, &vec![0.0; d], 0.0, d)?;
    let ws = try_map_indexed(ctx.exec, ts.len(), |k| -> Result<f64> {
        Ok(w_p_radial(&nu_family(alpha, &vec![0.0; d], ts[k], d)?, &nu_0, p)?)
    })?;
    let mut report = Report::new(vec!["t", "w_p"]);
    let pts: Vec<(f64, f64)> = ts.iter().copied().zip(ws.iter().copied()).collect();
    for &(t, w) in &pts {
        report.rows.push(vec![t.into(), w.into()]);
    }
    fit_check(&mut report, "holder_exponent", &pts, 1.0 / pf);
    report.plot = Plot {
        title: format!("W_p(nu_t, nu_0), alpha={alpha}, p={p}, d={d}"),
        x_label: "t".into(),
        y_label: "W_p".into(),
        log_x: true,
        log_y: true,
        series: vec![Series { label: "W_p".into(), points: pts }],
        markers: vec![],
    };
    Ok(report)
}

pub struct HoppingArgs {
    pub alpha: Option<String>,
    pub t: Option<String>,
}

pub fn hopping(ctx: &mut Ctx, a: &HoppingArgs) -> Result<Report> {
    let alpha = ctx.real("alpha", &a.alpha, "0.5")?;
    let ts = ctx.grid("t", &a.t, "lin:0:1:11")?;
    unit_interval("t", &ts, false)?;
    let mut report = Report::new(vec!["t", "outer_mass", "inner_mass", "inner_radius"]);
    let (mut outer_pts, mut inner_pts, mut radius_pts) = (Vec::new(), Vec::new(), Vec::new());
    let mut worst: f64 = 0.0;
    for &t in &ts {
        let (outer, inner) = shell_masses(alpha, t)?;
        let radius = alpha * (1.0 - t);
        worst = worst.max((outer + inner - 1.0).abs());
        report.rows.push(vec![t.into(), outer.into(), inner.into(), radius.into()]);
        outer_pts.push((t, outer));
        inner_pts.push((t, inner));
        radius_pts.push((t, radius));
    }
    report.check("masses_sum_to_one", worst <= 1e-12, format!("max |outer + inner - 1| = {worst:e}"));
    report.plot = Plot {
        title: format!("shell masses along nu_t, alpha={alpha}"),
        x_label: "t".into(),
        y_label: "mass / radius".into(),
        series: vec![
            Series { label: "outer mass".into(), points: outer_pts },
            Series { label: "inner mass".into(), points: inner_pts },
            Series { label: "inner radius".into(), points: radius_pts },
        ],
        ..Plot::default()
    };
    Ok(report)
}

pub struct CircleArgs {
    pub t: Option<String>,
    pub q: Option<String>,
}

pub const SIN_FORM: &str = "sin(pi*t/2)";
pub const ALT_FORM: &str = "2*sin(t)/pi";

/// Directions on the circle are always Monte Carlo; the projections do not
/// depend on the direction, so the count only matters for non-centered input.
pub fn circle(ctx: &mut Ctx, a: &CircleArgs) -> Result<Report> {
    let ts = ctx.grid("t", &a.t, "0.1,0.25,0.5,0.75,1")?;
    unit_interval("t", &ts, true)?;
    let q = ctx.order("q", &a.q, "2")?;
    let n = ctx.dirs("32")?;
    let dirs = mc_directions(2, n, ctx.seed()?)?;
    let ring = CircleMixture::atom_and_unit_circle(0.0)?;
    let values = try_map_indexed(ctx.exec, ts.len(), |k| -> Result<(f64, f64)> {
        let mixed = CircleMixture::atom_and_unit_circle(ts[k])?;
        let w = w_p_radial(&mixed, &ring, Order::Infinite)?;
        let sw = sw_pq_with(&mixed, &ring, Order::Infinite, q, &dirs, Execution::Sequential, SlicePath::Auto)?;
        Ok((w, sw))
    })?;
    let mut report = Report::new(vec!["t", "w_inf", "sw_inf_q", "ratio", "sin_pi_t_over_2", "two_sin_t_over_pi", "closest_form"]);
    let (mut sw_pts, mut sin_pts, mut alt_pts) = (Vec::new(), Vec::new(), Vec::new());
    let mut w_ok = true;
    for (&t, &(w, sw)) in ts.iter().zip(&values) {
        let sin_form = (std::f64::consts::FRAC_PI_2 * t).sin();
        let alt_form = 2.0 * t.sin() / std::f64::consts::PI;
        let closest = if (sw - sin_form).abs() <= (sw - alt_form).abs() { SIN_FORM } else { ALT_FORM };
        w_ok &= w == 1.0;
        report.rows.push(vec![
            t.into(),
            w.into(),
            sw.into(),
            (w / sw).into(),
            sin_form.into(),
            alt_form.into(),
            closest.into(),
        ]);
        sw_pts.push((t, sw));
        sin_pts.push((t, sin_form));
        alt_pts.push((t, alt_form));
    }
    report.check("w_inf_is_one", w_ok, "W_inf(mu_t, mu_0) = 1 for every t > 0".into());
    report.plot = Plot {
        title: format!("circle example, SW_inf,q with q={q}"),
        x_label: "t".into(),
        y_label: "distance".into(),
        series: vec![
            Series { label: "SW_inf,q".into(), points: sw_pts },
            Series { label: SIN_FORM.into(), points: sin_pts },
            Series { label: ALT_FORM.into(), points: alt_pts },
        ],
        ..Plot::default()
    };
    Ok(report)
}

pub struct CdqArgs {
    pub d: Option<String>,
    pub q: Option<String>,
    pub nodes: Option<String>,
}

pub fn cdq(ctx: &mut Ctx, a: &CdqArgs) -> Result<Report> {
    let raw_d = ctx.params.raw("d", a.d.as_deref(), "3,4,5,7,10");
    let ds: Vec<usize> = parse_list(&raw_d)?;
    if let Some(&d) = ds.iter().find(|&&d| d < 3) {
        bail!("d={d} must be at least 3");
    }
    let raw_q = ctx.params.raw("q", a.q.as_deref(), "1,2,4,inf");
    let qs: Vec<Order> = parse_list(&raw_q)?;
    let nodes: usize = ctx.params.get("nodes", a.nodes.as_deref(), "32")?;
    let samples = ctx.dirs("100000")?;
    let seed = ctx.seed()?;
    let cases: Vec<(usize, Order)> = ds.iter().flat_map(|&d| qs.iter().map(move |&q| (d, q))).collect();
    let rows = try_map_indexed(ctx.exec, cases.len(), |k| -> Result<(f64, f64, f64)> {
        let (d, q) = cases[k];
        let beta = c_dq(d, q, CMethod::BetaQuadrature { n: nodes })?;
        match q {
            Order::Finite(qf) if d > 3 => {
                let est = mc_s_moment(d, qf, samples, seed.wrapping_add(k as u64))?;
                let c = est.mean.powf(1.0 / qf);
                // delta method for m -> m^{1/q}
                let se = est.std_error * c / (qf * est.mean);
                Ok((beta, c, se))
            }
            _ => Ok((beta, c_dq(d, q, CMethod::MonteCarlo { n: samples, seed })?, 0.0)),
        }
    })?;
    let mut report = Report::new(vec!["d", "q", "c_beta", "c_mc", "mc_std_error", "discrepancy", "within_4se"]);
    let mut all_ok = true;
    let mut series: Vec<Series> = Vec::new();
    for (&(d, q), &(beta, mc, se)) in cases.iter().zip(&rows) {
        let gap = (beta - mc).abs();
        let ok = gap <= 4.0 * se || gap == 0.0;
        all_ok &= ok;
        report.rows.push(vec![d.into(), q.to_string().into(), beta.into(), mc.into(), se.into(), gap.into(), (if ok { "yes" } else { "no" }).into()]);
        if let Order::Finite(qf) = q {
            match series.iter_mut().find(|s| s.label == format!("d={d}")) {
                Some(s) => s.points.push((qf, beta)),
                None => series.push(Series { label: format!("d={d}"), points: vec![(qf, beta)] }),
            }
        }
    }
    report.check("methods_agree", all_ok, "beta quadrature within 4 Monte-Carlo standard errors".into());
    report.plot = Plot {
        title: "dimensional constant C_d,q".into(),
        x_label: "q".into(),
        y_label: "C_d,q".into(),
        series,
        ..Plot::default()
    };
    Ok(report)
}

pub struct GeodesicArgs {
    pub family: Option<String>,
    pub p: Option<String>,
    pub q: Option<String>,
    pub grid: Option<String>,
    pub tol: Option<String>,
}

pub fn geodesic_check(ctx: &mut Ctx, a: &GeodesicArgs) -> Result<Report> {
    let spec = ctx.params.raw("family", a.family.as_deref(), "mu(alpha=0.5,beta=0.2)");
    let curve = family::parse(&spec).with_context(|| format!("family spec {spec:?}"))?;
    let p = ctx.order("p", &a.p, "2")?;
    let grid = ctx.grid("grid", &a.grid, "lin:0:1:5")?;
    unit_interval("grid", &grid, false)?;
    if !grid.contains(&0.0) || !grid.contains(&1.0) {
        bail!("grid must contain 0 and 1");
    }
    let tol = ctx.real("tol", &a.tol, "1e-6")?;
    let pairs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|i| (i + 1..grid.len()).map(move |j| (i, j))).collect();
    let exec = ctx.exec;
    let distances: Vec<f64> = match &curve {
        Curve::Shells(c) => {
            let q = ctx.order("q", &a.q, "2")?;
            let dirs = ctx.directions(c.dim)?;
            let points = grid.iter().map(|&t| c.at(t)).collect::<swgeo::Result<Vec<_>>>()?;
            try_map_indexed(exec, pairs.len(), |k| {
                let (i, j) = pairs[k];
                sw_pq_with(&points[i], &points[j], p, q, &dirs, Execution::Sequential, SlicePath::Auto)
            })?
        }
        line => {
            let points = grid.iter().map(|&t| line.line_at(t)).collect::<swgeo::Result<Vec<_>>>()?;
            try_map_indexed(exec, pairs.len(), |k| {
                let (i, j) = pairs[k];
                wasserstein(&points[i], &points[j], p)
            })?
        }
    };
    let i0 = grid.iter().position(|&t| t == 0.0).unwrap_or(0);
    let i1 = grid.iter().position(|&t| t == 1.0).unwrap_or(0);
    let full = pairs
        .iter()
        .zip(&distances)
        .find(|((i, j), _)| (*i, *j) == (i0.min(i1), i0.max(i1)))
        .map(|(_, d)| *d)
        .unwrap_or(0.0);
    let mut report = Report::new(vec!["t", "s", "distance", "expected", "deviation"]);
    let mut worst: f64 = 0.0;
    let (mut got_pts, mut want_pts) = (Vec::new(), Vec::new());
    for (&(i, j), &dist) in pairs.iter().zip(&distances) {
        let expected = (grid[i] - grid[j]).abs() * full;
        let dev = (dist - expected).abs();
        worst = worst.max(dev);
        report.rows.push(vec![grid[i].into(), grid[j].into(), dist.into(), expected.into(), dev.into()]);
        got_pts.push(((grid[i] - grid[j]).abs(), dist));
        want_pts.push(((grid[i] - grid[j]).abs(), expected));
    }
    got_pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    want_pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    report.notes.push(format!("max_deviation={}", crate::output::real(worst)));
    report.check("constant_speed", worst < tol, format!("max deviation {worst:e} vs tolerance {tol:e}"));
    report.plot = Plot {
        title: format!("constant-speed check for {spec}"),
        x_label: "|t - s|".into(),
        y_label: "distance".into(),
        series: vec![
            Series { label: "measured".into(), points: got_pts },
            Series { label: "|t - s| d(0, 1)".into(), points: want_pts },
        ],
        ..Plot::default()
    };
    Ok(report)
}

pub struct DistanceArgs {
    pub measure_file: Vec<PathBuf>,
    pub shell_file: Vec<PathBuf>,
    pub p: Option<String>,
    pub q: Option<String>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn distance(ctx: &mut Ctx, a: &DistanceArgs) -> Result<Report> {
    let p = ctx.order("p", &a.p, "2")?;
    let mut report = Report::new(vec!["quantity", "value"]);
    match (a.measure_file.as_slice(), a.shell_file.as_slice()) {
        ([x, y], []) => {
            let mx = Measure1D::from_text(&read(x)?).with_context(|| format!("parsing {}", x.display()))?;
            let my = Measure1D::from_text(&read(y)?).with_context(|| format!("parsing {}", y.display()))?;
            report.rows.push(vec!["w_p".into(), wasserstein(&mx, &my, p)?.into()]);
        }
        ([], [x, y]) => {
            let q = ctx.order("q", &a.q, "2")?;
            let sx = ShellMixture::from_text(&read(x)?).with_context(|| format!("parsing {}", x.display()))?;
            let sy = ShellMixture::from_text(&read(y)?).with_context(|| format!("parsing {}", y.display()))?;
            let dirs = ctx.directions(sx.dim())?;
            let sw = sw_pq_with(&sx, &sy, p, q, &dirs, ctx.exec, SlicePath::Auto)?;
            report.rows.push(vec!["sw_pq".into(), sw.into()]);
            if sx.is_centered() && sy.is_centered() {
                report.rows.push(vec![Cell::from("w_p_radial"), w_p_radial(&sx, &sy, p)?.into()]);
            }
        }
        _ => bail!("give exactly two --measure-file or exactly two --shell-file inputs"),
    }
    Ok(report)
}
