//! Curve specifications for `geodesic-check`.
//!
//! ```text
//! spec      := base ( '|' transform )*
//! base      := mu(alpha=A,beta=B) | nu(alpha=A,d=D,x=V) | control()
//! transform := dilate(a=A) | translate(y=V,z=V)
//! V         := e<k> | c1:c2:...   (zero-padded to the ambient dimension)
//! ```
//!
//! Transforms compose left to right; a dilation applied after a translation
//! yields `t -> M^a_# A^{t y + z}_# base_t`.

use anyhow::{anyhow, bail, Context, Result};
use swgeo::families::{mu_family, ShellCurve};
use swgeo::Measure1D;

#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    /// `t -> a * (mu_t + t y + z)` on the line.
    Line { alpha: f64, beta: f64, dilation: f64, drift: f64, offset: f64 },
    /// `t -> (1 - t) uniform(-1, 1) + t delta_0`, which is not a geodesic.
    Control,
    Shells(ShellCurve),
}

impl Curve {
    pub fn line_at(&self, t: f64) -> swgeo::Result<Measure1D> {
        match self {
            Curve::Line { alpha, beta, dilation, drift, offset } => {
                mu_family(*alpha, *beta, t)?.affine_image(*dilation, dilation * (t * drift + offset))
            }
            Curve::Control => {
                let uniform = Measure1D::uniform(-1.0, 1.0)?;
                if t <= 0.0 {
                    Ok(uniform)
                } else if t >= 1.0 {
                    Ok(Measure1D::dirac(0.0))
                } else {
                    Measure1D::mixture(&[(1.0 - t, &uniform), (t, &Measure1D::dirac(0.0))])
                }
            }
            Curve::Shells(_) => unreachable!("shell curves are not one-dimensional"),
        }
    }
}

struct Stage<'a> {
    name: &'a str,
    args: Vec<(&'a str, &'a str)>,
}

impl Stage<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.args.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn real(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.get(key) {
            Some(v) => v.parse().with_context(|| format!("{}: {key}={v:?} is not a number", self.name)),
            None => default.ok_or_else(|| anyhow!("{}: missing {key}=", self.name)),
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, _) in &self.args {
            if !allowed.contains(k) {
                bail!("{}: unknown argument {k:?}", self.name);
            }
        }
        Ok(())
    }
}

fn stage(text: &str) -> Result<Stage<'_>> {
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| anyhow!("expected name(...) in {text:?}"))?;
    let inner = text[open + 1..].strip_suffix(')').ok_or_else(|| anyhow!("missing ')' in {text:?}"))?;
    let args = inner
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| a.split_once('=').map(|(k, v)| (k.trim(), v.trim())).ok_or_else(|| anyhow!("expected key=value, got {a:?}")))
        .collect::<Result<_>>()?;
    Ok(Stage { name: text[..open].trim(), args })
}

fn vector(text: &str, dim: usize) -> Result<Vec<f64>> {
    let mut v = vec![0.0; dim];
    if let Some(k) = text.strip_prefix('e') {
        let k: usize = k.parse().with_context(|| format!("bad unit vector {text:?}"))?;
        if k == 0 || k > dim {
            bail!("unit vector {text:?} outside dimension {dim}");
        }
        v[k - 1] = 1.0;
        return Ok(v);
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() > dim {
        bail!("vector {text:?} has more than {dim} components");
    }
    for (slot, part) in v.iter_mut().zip(parts) {
        *slot = part.parse().with_context(|| format!("bad vector component {part:?}"))?;
    }
    Ok(v)
}

fn scale(st: &Stage) -> Result<f64> {
    st.check_keys(&["a"])?;
    let a = st.real("a", None)?;
    if a == 0.0 {
        bail!("dilate: a must be nonzero");
    }
    Ok(a)
}

pub fn parse(spec: &str) -> Result<Curve> {
    let mut stages = spec.split('|');
    let base = stage(stages.next().unwrap_or(""))?;
    let mut curve = match base.name {
        "mu" => {
            base.check_keys(&["alpha", "beta"])?;
            Curve::Line {
                alpha: base.real("alpha", None)?,
                beta: base.real("beta", Some(0.0))?,
                dilation: 1.0,
                drift: 0.0,
                offset: 0.0,
            }
        }
        "nu" => {
            base.check_keys(&["alpha", "d", "x"])?;
            let d = base.real("d", Some(3.0))?;
            if d.fract() != 0.0 || d < 3.0 {
                bail!("nu: d={d} must be an integer >= 3");
            }
            let d = d as usize;
            let x = vector(base.get("x").unwrap_or("0"), d)?;
            Curve::Shells(ShellCurve::plain(base.real("alpha", None)?, x, d))
        }
        "control" => {
            base.check_keys(&[])?;
            Curve::Control
        }
        other => bail!("unknown family {other:?} (expected mu, nu or control)"),
    };
    for text in stages {
        let st = stage(text)?;
        match (st.name, &mut curve) {
            ("dilate", Curve::Line { dilation, .. }) => *dilation *= scale(&st)?,
            ("dilate", Curve::Shells(c)) => c.dilation *= scale(&st)?,
            ("translate", Curve::Line { dilation, drift, offset, .. }) => {
                st.check_keys(&["y", "z"])?;
                // a translation after a dilation by a is a translation by v / a before it
                *drift += vector(st.get("y").unwrap_or("0"), 1)?[0] / *dilation;
                *offset += vector(st.get("z").unwrap_or("0"), 1)?[0] / *dilation;
            }
            ("translate", Curve::Shells(c)) => {
                st.check_keys(&["y", "z"])?;
                let y = vector(st.get("y").unwrap_or("0"), c.dim)?;
                let z = vector(st.get("z").unwrap_or("0"), c.dim)?;
                for i in 0..c.dim {
                    c.drift[i] += y[i] / c.dilation;
                    c.offset[i] += z[i] / c.dilation;
                }
            }
            ("dilate" | "translate", Curve::Control) => bail!("the control curve takes no transforms"),
            (other, _) => bail!("unknown transform {other:?} (expected dilate or translate)"),
        }
    }
    Ok(curve)
}
