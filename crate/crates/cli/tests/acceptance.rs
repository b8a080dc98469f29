//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Every criterion compares the library (or the `swgeo` binary) against an
//! oracle computed here independently: closed forms, Beta-function moments,
//! brute-force discretized matchings, or an assignment solver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use statrs::function::gamma::ln_gamma;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;
use swgeo::families::{mu_family, nu_family, CircleMixture, ShellCurve};
use swgeo::sliced::{per_direction, sample_shell, sw_pq, sw_pq_empirical, w_p_radial, SlicePath};
use swgeo::sphere::{beta_quadrature, c_dq, mc_directions, mc_s_moment, CMethod};
use swgeo::transport1d::{geodesic_deviation, interpolate, optimal_map, speed_deviation, wasserstein, Order};
use swgeo::{Execution, Measure1D};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn swgeo(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swgeo"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("failed to launch swgeo")
}

fn core_fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

/// `E[s^q]` for `s^2 ~ Beta(3/2, (d-3)/2)`, from the Beta-function identity.
fn beta_moment(d: usize, q: f64) -> f64 {
    if d == 3 {
        return 1.0;
    }
    let b = (d as f64 - 3.0) / 2.0;
    let ln_beta = |x: f64, y: f64| ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
    (ln_beta((3.0 + q) / 2.0, b) - ln_beta(1.5, b)).exp()
}

fn c_oracle(d: usize, q: Order) -> f64 {
    match q {
        Order::Infinite => 1.0,
        Order::Finite(q) => beta_moment(d, q).powf(1.0 / q),
    }
}

fn criterion_1() -> Outcome {
    let (alpha, beta) = (0.5, 0.2);
    let mu = ok(Measure1D::uniform(-1.0, 1.0))?;
    let map = ok(optimal_map(&mu, &ok(mu_family(alpha, beta, 1.0))?))?;
    let jump = (1.0 - alpha) * (beta + 1.0) - 1.0;
    let formula = |s: f64| {
        if s < jump {
            -1.0 + (s + 1.0) / (1.0 - alpha)
        } else if s < jump + 2.0 * alpha {
            beta
        } else {
            -1.0 + (s + 1.0 - 2.0 * alpha) / (1.0 - alpha)
        }
    };
    let n = 10_000;
    let err = (0..n)
        .map(|k| -1.0 + 2.0 * (k as f64 + 0.5) / n as f64)
        .map(|s| (map.eval(s) - formula(s)).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-12, || format!("sup error {err:e}"))?;
    Ok(format!("sup error {err:.2e} over {n} points"))
}

fn cdf_gap(a: &Measure1D, b: &Measure1D) -> f64 {
    (0..=1000).map(|k| -1.0 + 2.0 * k as f64 / 1000.0).map(|x| (a.cdf(x) - b.cdf(x)).abs()).fold(0.0, f64::max)
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (alpha, beta, t) = (rng.random_range(0.05..0.95), rng.random_range(-1.0..=1.0), rng.random_range(0.0..1.0));
        let path = ok(interpolate(&ok(mu_family(alpha, beta, 0.0))?, &ok(mu_family(alpha, beta, 1.0))?, t))?;
        let gap = cdf_gap(&path, &ok(mu_family(alpha, beta, t))?);
        ensure(gap < 1e-12, || format!("alpha={alpha} beta={beta} t={t}: gap {gap:e}"))?;
        worst = worst.max(gap);
    }
    Ok(format!("worst CDF gap {worst:.2e} over 20 random triples"))
}

const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for alpha in [0.3, 0.5, 0.8] {
        for beta in [-0.5, 0.0, 0.2] {
            for p in [1.0, 1.5, 2.0, 3.0] {
                cases.push((alpha, beta, Order::Finite(p)));
            }
        }
        cases.push((alpha, 0.0, Order::Infinite));
    }
    for &(alpha, beta, p) in &cases {
        let dev = ok(geodesic_deviation(|t| mu_family(alpha, beta, t), p, &GRID))?;
        ensure(dev < 1e-8, || format!("alpha={alpha} beta={beta} p={p}: {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("worst deviation {worst:.2e} over {} curves", cases.len()))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in [0.3, 0.5, 0.8] {
        let (a, b) = (ok(mu_family(alpha, 0.0, 0.0))?, ok(mu_family(alpha, 0.0, 1.0))?);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let got = ok(wasserstein(&a, &b, Order::Finite(p)))?;
            let want = alpha / (p + 1.0f64).powf(1.0 / p);
            ensure((got - want).abs() < 1e-10, || format!("alpha={alpha} p={p}: {got} vs {want}"))?;
            worst = worst.max((got - want).abs());
        }
        let inf = ok(wasserstein(&a, &b, Order::Infinite))?;
        ensure((inf - alpha).abs() < 1e-10, || format!("alpha={alpha}: W_inf {inf}"))?;
        worst = worst.max((inf - alpha).abs());
    }
    Ok(format!("worst error {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let orders = [Order::Finite(1.0), Order::Finite(2.0), Order::Infinite];
    let (mut worst_rel, mut worst_z): (f64, f64) = (0.0, 0.0);
    for d in [3usize, 4, 7] {
        let quad = ok(beta_quadrature(d, 32))?;
        let mc = ok(mc_directions(d, 100_000, 50 + d as u64))?;
        for p in [1.5, 2.0, 3.0] {
            for t in [0.25, 0.5, 1.0] {
                let alpha = 0.5;
                let nu_t = ok(nu_family(alpha, &vec![0.0; d], t, d))?;
                let nu_0 = ok(nu_family(alpha, &vec![0.0; d], 0.0, d))?;
                let per_dir = ok(per_direction(&nu_t, &nu_0, Order::Finite(p), &mc, Execution::Parallel, SlicePath::Auto))?;
                for q in orders {
                    let want = alpha * t * c_oracle(d, q) / (p + 1.0f64).powf(1.0 / p);
                    let got = ok(sw_pq(&nu_t, &nu_0, Order::Finite(p), q, &quad))?;
                    let rel = (got - want).abs() / want;
                    ensure(rel < 1e-6, || format!("d={d} p={p} q={q} t={t}: {got} vs {want}"))?;
                    worst_rel = worst_rel.max(rel);

                    let est = ok(sw_pq(&nu_t, &nu_0, Order::Finite(p), q, &mc))?;
                    let se = match q {
                        Order::Infinite => 0.0,
                        Order::Finite(q) => {
                            let vals: Vec<f64> = per_dir.iter().map(|v| v.powf(q)).collect();
                            let n = vals.len() as f64;
                            let m = vals.iter().sum::<f64>() / n;
                            let var = vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
                            // delta method for m -> m^{1/q}
                            (var / n).sqrt() * est / (q * m)
                        }
                    };
                    let gap = (est - want).abs();
                    ensure(gap <= 4.0 * se + 1e-12, || format!("MC d={d} p={p} q={q} t={t}: {est} vs {want}, se {se:e}"))?;
                    // in d = 3 every direction gives the same value, so se is
                    // rounding noise and the z-score carries no information
                    if se > 1e-12 {
                        worst_z = worst_z.max(gap / se);
                    }
                }
            }
        }
    }
    Ok(format!("worst relative error {worst_rel:.2e}; worst Monte-Carlo z-score {worst_z:.2}"))
}

/// Minimum-cost perfect assignment (Hungarian algorithm with potentials), O(n^3).
fn assignment_cost(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    let (mut u, mut v) = (vec![0.0; n + 1], vec![0.0; n + 1]);
    let (mut p, mut way) = (vec![0usize; n + 1], vec![0usize; n + 1]);
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let (mut delta, mut j1) = (f64::INFINITY, 0);
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[p[j] - 1][j - 1]).sum()
}

fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for alpha in [0.3, 0.5, 0.8] {
        for t in [0.1, 0.5, 1.0] {
            let nu_t = ok(nu_family(alpha, &[0.0; 3], t, 3))?;
            let nu_0 = ok(nu_family(alpha, &[0.0; 3], 0.0, 3))?;
            for p in [1.0, 2.0, 3.0, 4.5] {
                let got = ok(w_p_radial(&nu_t, &nu_0, Order::Finite(p)))?;
                let want = (alpha * t * (1.0 - alpha * (1.0 - t)).powf(p - 1.0)).powf(1.0 / p);
                ensure((got - want).abs() < 1e-12, || format!("alpha={alpha} t={t} p={p}: {got} vs {want}"))?;
                worst = worst.max((got - want).abs());
            }
        }
    }
    // Discretize nu_0 by 3M near-uniform sphere points and nu_t (alpha = t = 0.5:
    // masses 2/3 and 1/3, inner radius 1/4) by keeping two thirds of them on the
    // unit sphere and shrinking every third point onto the inner shell.
    let (alpha, t) = (0.5, 0.5);
    let n = 600;
    let outer = fibonacci_sphere(n);
    let inner_radius = alpha * (1.0 - t);
    let moved: Vec<[f64; 3]> = outer
        .iter()
        .enumerate()
        .map(|(k, x)| if k % 3 == 0 { x.map(|c| c * inner_radius) } else { *x })
        .collect();
    let cost: Vec<Vec<f64>> = moved
        .iter()
        .map(|a| outer.iter().map(|b| (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()).collect())
        .collect();
    let upper = (assignment_cost(&cost) / n as f64).sqrt();
    // |x| is 1-Lipschitz, so matching sorted radii bounds the assignment from below
    let mut ra: Vec<f64> = moved.iter().map(|x| x.iter().map(|c| c * c).sum::<f64>().sqrt()).collect();
    let mut rb: Vec<f64> = outer.iter().map(|x| x.iter().map(|c| c * c).sum::<f64>().sqrt()).collect();
    ra.sort_by(f64::total_cmp);
    rb.sort_by(f64::total_cmp);
    let lower = (ra.iter().zip(&rb).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / n as f64).sqrt();
    let w = ok(w_p_radial(
        &ok(nu_family(alpha, &[0.0; 3], t, 3))?,
        &ok(nu_family(alpha, &[0.0; 3], 0.0, 3))?,
        Order::Finite(2.0),
    ))?;
    ensure(lower <= upper + 1e-12, || format!("bracket inverted: [{lower}, {upper}]"))?;
    ensure(w >= lower - 0.01 && w <= upper + 0.01, || format!("W_2 {w} outside bracket [{lower}, {upper}] +- 0.01"))?;
    Ok(format!("formula error {worst:.2e}; W_2={w:.7} in assignment bracket [{lower:.7}, {upper:.7}]"))
}

fn fit_from_cli(command: &str, p: &str, key: &str) -> Result<f64, String> {
    let out = swgeo(&[command, "--p", p, "--d", "3", "--alpha", "0.5"], "4");
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    ensure(out.status.success(), || format!("swgeo {command} --p {p} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)))?;
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix(&format!("# fit {key}=")))
        .ok_or_else(|| format!("no fit line in swgeo {command} output"))?;
    line.split_whitespace().next().unwrap_or("").parse().map_err(|e| format!("bad fit value: {e}"))
}

fn criterion_7() -> Outcome {
    let mut detail = Vec::new();
    for (p, target) in [("2", -0.5), ("4", -0.75)] {
        let slope = fit_from_cli("nonequiv", p, "ratio_slope")?;
        ensure((slope - target).abs() <= 0.01, || format!("p={p}: slope {slope} vs {target}"))?;
        detail.push(format!("p={p}: {slope:.4} (target {target})"));
    }
    Ok(detail.join("; "))
}

fn criterion_8() -> Outcome {
    let mut detail = Vec::new();
    for (p, target) in [("2", 0.5), ("4", 0.25)] {
        let exponent = fit_from_cli("holder", p, "holder_exponent")?;
        ensure((exponent - target).abs() <= 0.01, || format!("p={p}: exponent {exponent} vs {target}"))?;
        detail.push(format!("p={p}: {exponent:.4} (target {target})"));
    }
    Ok(detail.join("; "))
}

fn criterion_9() -> Outcome {
    let beta = CMethod::BetaQuadrature { n: 32 };
    for q in [1.0, 2.0, 4.0, 7.5] {
        let c = ok(c_dq(3, Order::Finite(q), beta))?;
        ensure(c == 1.0, || format!("C_3,{q} = {c}"))?;
    }
    for d in [3, 4, 7, 12] {
        let c = ok(c_dq(d, Order::Infinite, CMethod::MonteCarlo { n: 100, seed: 1 }))?;
        ensure(c == 1.0, || format!("C_{d},inf = {c}"))?;
    }
    let c42 = ok(c_dq(4, Order::Finite(2.0), beta))?;
    let oracle = beta_moment(4, 2.0).sqrt();
    ensure((oracle - 0.75f64.sqrt()).abs() < 1e-12, || format!("Beta oracle {oracle}"))?;
    ensure((c42 - oracle).abs() < 1e-6, || format!("C_4,2 = {c42} vs {oracle}"))?;
    let est = ok(mc_s_moment(4, 2.0, 100_000, 9))?;
    let c_mc = est.mean.sqrt();
    let se = est.std_error / (2.0 * c_mc);
    ensure((c_mc - oracle).abs() <= 4.0 * se, || format!("MC C_4,2 = {c_mc} +- {se} vs {oracle}"))?;
    Ok(format!("C_4,2 = {c42:.10} (oracle {oracle:.10}); MC {c_mc:.5} +- {se:.1e}"))
}

/// Sup of the difference between sorted equal-weight discretizations of
/// `t delta_0 + (1 - t) arcsine` and `arcsine`.
fn circle_brute_force(t: f64, n: usize) -> f64 {
    let ring = |m: usize| -> Vec<f64> {
        (0..m).map(|k| (2.0 * std::f64::consts::PI * (k as f64 + 0.5) / m as f64).cos()).collect()
    };
    let atoms = (t * n as f64).round() as usize;
    let mut mixed = vec![0.0; atoms];
    mixed.extend(ring(n - atoms));
    let mut plain = ring(n);
    mixed.sort_by(f64::total_cmp);
    plain.sort_by(f64::total_cmp);
    mixed.iter().zip(&plain).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn criterion_10() -> Outcome {
    let golden = std::fs::read_to_string(core_fixture("golden.txt")).map_err(|e| e.to_string())?;
    let (golden_value, golden_form) = golden
        .lines()
        .find_map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f.first() == Some(&"circle_sw_inf")).then(|| (f[2].parse::<f64>().ok(), f.get(3).map(|s| s.to_string())))
        })
        .ok_or("no circle_sw_inf entry in golden file")?;
    let golden_form = golden_form.ok_or("golden entry lacks the winning form")?;
    let golden_value = golden_value.ok_or("golden entry lacks a value")?;
    let dirs = ok(mc_directions(2, 64, 10))?;
    let ring = ok(CircleMixture::atom_and_unit_circle(0.0))?;
    let mut detail = Vec::new();
    for t in [0.1, 0.5, 1.0] {
        let mixed = ok(CircleMixture::atom_and_unit_circle(t))?;
        let w = ok(w_p_radial(&mixed, &ring, Order::Infinite))?;
        ensure(w == 1.0, || format!("t={t}: W_inf = {w}"))?;
        let values: Vec<f64> = [Order::Finite(1.0), Order::Finite(2.0), Order::Infinite]
            .iter()
            .map(|&q| ok(sw_pq(&mixed, &ring, Order::Infinite, q, &dirs)))
            .collect::<Result<_, _>>()?;
        let spread = values.iter().fold(0.0f64, |m, v| m.max((v - values[0]).abs()));
        ensure(spread < 1e-10, || format!("t={t}: q-dependence {spread:e}"))?;
        let brute = circle_brute_force(t, 100_000);
        ensure((values[0] - brute).abs() < 1e-3, || format!("t={t}: {} vs brute force {brute}", values[0]))?;
        let sin_form = (std::f64::consts::FRAC_PI_2 * t).sin();
        let alt_form = 2.0 * t.sin() / std::f64::consts::PI;
        let winner = if (brute - sin_form).abs() < (brute - alt_form).abs() { "sin(pi*t/2)" } else { "2*sin(t)/pi" };
        ensure(winner == golden_form, || format!("t={t}: oracle picks {winner}, golden records {golden_form}"))?;
        if t == 0.5 {
            ensure((values[0] - golden_value).abs() < 1e-10, || format!("golden {golden_value} vs {}", values[0]))?;
        }
        detail.push(format!("t={t}: {:.6} (brute {brute:.6})", values[0]));
    }
    Ok(format!("W_inf = 1; winner {golden_form}; {}", detail.join(", ")))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let d = rng.random_range(3..=5);
        let dirs = ok(mc_directions(d, 64, 100 + k))?;
        let mut x: Vec<f64> = (0..3).map(|_| rng.random_range(-0.55..0.55)).collect();
        x.resize(d, 0.0);
        let mut a = rng.random_range(-2.0..2.0);
        if f64::abs(a) < 0.1 {
            a = 1.0;
        }
        let curve = ShellCurve {
            alpha: rng.random_range(0.1..0.9),
            x,
            dim: d,
            dilation: a,
            drift: (0..d).map(|_| rng.random_range(-1.0..1.0)).collect(),
            offset: (0..d).map(|_| rng.random_range(-1.0..1.0)).collect(),
        };
        let p = Order::Finite(rng.random_range(1.0..4.0));
        let q = Order::Finite(rng.random_range(1.0..3.0));
        let dev = ok(speed_deviation(&GRID, |t| curve.at(t), |u, v| sw_pq(u, v, p, q, &dirs)))?;
        ensure(dev < 1e-6, || format!("{curve:?}: deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("worst deviation {worst:.2e} over 10 random curves"))
}

fn criterion_12() -> Outcome {
    let nu_t = ok(nu_family(0.5, &[0.0; 3], 0.5, 3))?;
    let nu_0 = ok(nu_family(0.5, &[0.0; 3], 0.0, 3))?;
    let dirs = ok(mc_directions(3, 256, 12))?;
    let want = 0.25 / 3f64.sqrt();
    let estimates: Vec<f64> = (0..5u64)
        .map(|seed| {
            let x = ok(sample_shell(&nu_t, 10_000, 1000 + 2 * seed))?;
            let y = ok(sample_shell(&nu_0, 10_000, 1001 + 2 * seed))?;
            ok(sw_pq_empirical(&x, &y, 2.0, Order::Finite(2.0), &dirs, Execution::Parallel))
        })
        .collect::<Result<_, _>>()?;
    let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
    ensure((mean - want).abs() < 0.01, || format!("mean {mean} vs {want}"))?;
    Ok(format!("mean over 5 seeds {mean:.6} vs {want:.6}"))
}

fn criterion_13() -> Outcome {
    let m0 = core_fixture("mu_0.5_0.2_t0.1.txt");
    let m1 = core_fixture("mu_0.5_0.2_t1.txt");
    let s0 = core_fixture("nu_0.5_0_t0.5_d3.txt");
    let (m0, m1, s0) = (m0.to_str().unwrap(), m1.to_str().unwrap(), s0.to_str().unwrap());
    let runs: Vec<Vec<&str>> = vec![
        vec!["density"],
        vec!["density", "--format", "svg"],
        vec!["nonequiv", "--quad", "mc", "--d", "5", "--dirs", "200"],
        vec!["nonequiv", "--p", "inf", "--q", "1", "--d", "4"],
        vec!["holder", "--p", "3"],
        vec!["hopping"],
        vec!["circle", "--q", "inf"],
        vec!["cdq", "--dirs", "20000"],
        vec!["geodesic-check"],
        vec!["geodesic-check", "--family", "nu(alpha=0.5,d=4,x=0.3:0.1)|dilate(a=2)|translate(y=e2,z=0:0:0:1)", "--quad", "mc", "--dirs", "300"],
        vec!["geodesic-check", "--family", "control()"],
        vec!["distance", "--measure-file", m0, "--measure-file", m1, "--p", "3"],
        vec!["distance", "--shell-file", s0, "--shell-file", s0, "--quad", "mc"],
    ];
    for args in &runs {
        let mut full = args.clone();
        full.extend(["--seed", "7"]);
        let first = swgeo(&full, "1");
        ensure(!first.stdout.is_empty(), || format!("{args:?}: empty output ({})", String::from_utf8_lossy(&first.stderr)))?;
        let mut seq = full.clone();
        seq.extend(["--exec", "seq"]);
        for (label, out) in [("rerun", swgeo(&full, "1")), ("4 threads", swgeo(&full, "4")), ("sequential", swgeo(&seq, "4"))] {
            ensure(out.stdout == first.stdout, || format!("{args:?}: output differs on {label}"))?;
            ensure(out.status.code() == first.status.code(), || format!("{args:?}: exit status differs on {label}"))?;
        }
    }
    Ok(format!("{} invocations byte-identical across reruns, thread counts and execution modes", runs.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("optimal map matches the piecewise formula", criterion_1),
        ("interpolation reproduces the closed-form family", criterion_2),
        ("one-dimensional curves have constant speed", criterion_3),
        ("beta = 0 endpoint distances", criterion_4),
        ("sliced distance along the shell curve", criterion_5),
        ("full W_p along the shell curve", criterion_6),
        ("ratio exponent 1/p - 1", criterion_7),
        ("Hölder exponent 1/p", criterion_8),
        ("dimensional constant C_d,q", criterion_9),
        ("circle example with p = inf", criterion_10),
        ("transformed shell curves are geodesics", criterion_11),
        ("empirical sliced distance converges", criterion_12),
        ("CLI output is deterministic", criterion_13),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
