//! Young functions: convex `Φ: [0,∞) → [0,∞)` with `Φ(0) = 0`, positive on `(0,∞)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct YoungFunction {
    kind: YoungKind,
}

#[derive(Debug, Clone)]
pub enum YoungKind {
    /// `scale · t^p`, `p ≥ 1`.
    Power { p: f64, scale: f64 },
    /// `t^p · log(e + t)`, `p ≥ 1`.
    PowerLog { p: f64 },
    /// `e^t - 1`; convex but not doubling.
    ExpMinusOne,
    /// `Φ_θ(t) = ∫_0^{t^θ} Φ(s)/s ds`, realised numerically.
    Integrated(Arc<IntegratedYoung>),
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        Self::scaled_power(p, 1.0)
    }

    pub fn scaled_power(p: f64, scale: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidYoungFunction(format!("power exponent {p} must be ≥ 1")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidYoungFunction(format!("scale {scale} must be positive")));
        }
        Ok(Self {
            kind: YoungKind::Power { p, scale },
        })
    }

    pub fn power_log(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidYoungFunction(format!("power exponent {p} must be ≥ 1")));
        }
        Ok(Self {
            kind: YoungKind::PowerLog { p },
        })
    }

    pub fn exp_minus_one() -> Self {
        Self {
            kind: YoungKind::ExpMinusOne,
        }
    }

    pub fn kind(&self) -> &YoungKind {
        &self.kind
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.kind {
            YoungKind::Power { p, scale } => scale * powf(t, *p),
            YoungKind::PowerLog { p } => powf(t, *p) * (std::f64::consts::E + t).ln(),
            YoungKind::ExpMinusOne => t.exp_m1(),
            YoungKind::Integrated(table) => table.evaluate(t),
        }
    }

    /// `Φ^{-1}(1)`.
    pub fn inverse_at_one(&self) -> f64 {
        match &self.kind {
            YoungKind::Power { p, scale } => powf(1.0 / scale, 1.0 / p),
            YoungKind::ExpMinusOne => std::f64::consts::LN_2,
            _ => {
                let (mut lo, mut hi) = (0.0, 1.0);
                while self.evaluate(hi) < 1.0 {
                    lo = hi;
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.evaluate(mid) < 1.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
        }
    }

    /// Short text form, matching the `orlicz:` space syntax where possible.
    pub fn descriptor(&self) -> String {
        self.to_string()
    }

    /// Checks `Φ(0) = 0`, positivity, and midpoint convexity on 64
    /// log-spaced points of `[2^-20, 2^20]` (relative tolerance `1e-9`).
    pub fn validate(&self) -> Result<()> {
        if self.evaluate(0.0) != 0.0 {
            return Err(Error::InvalidYoungFunction("Φ(0) ≠ 0".into()));
        }
        let pts: Vec<f64> = (0..64)
            .map(|i| (-20.0 + 40.0 * i as f64 / 63.0).exp2())
            .collect();
        for &t in &pts {
            let v = self.evaluate(t);
            if v.is_nan() || v <= 0.0 {
                return Err(Error::InvalidYoungFunction(format!("Φ({t}) = {v} is not positive")));
            }
        }
        let mut pairs: Vec<(f64, f64)> = pts.windows(2).map(|w| (w[0], w[1])).collect();
        pairs.extend(pts.iter().map(|&t| (0.0, t)));
        for (a, b) in pairs {
            let (fa, fb) = (self.evaluate(a), self.evaluate(b));
            if !fb.is_finite() {
                continue;
            }
            let chord = 0.5 * (fa + fb);
            let mid = self.evaluate(0.5 * (a + b));
            if mid > chord * (1.0 + 1e-9) {
                return Err(Error::InvalidYoungFunction(format!(
                    "midpoint convexity fails on [{a}, {b}]: {mid} > {chord}"
                )));
            }
        }
        Ok(())
    }

    /// `Φ_θ(t) = ∫_0^{t^θ} Φ(s)/s ds`; closed form `scale · t^{θp}/p` for powers.
    pub fn integrated(&self, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        match self.kind {
            YoungKind::Power { p, scale } => Self::scaled_power(theta * p, scale / p),
            _ => self.integrated_numeric(theta),
        }
    }

    /// Like [`integrated`](Self::integrated) but always through the quadrature table.
    pub fn integrated_numeric(&self, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self {
            kind: YoungKind::Integrated(Arc::new(IntegratedYoung::build(self.clone(), theta)?)),
        })
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta >= 1.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidYoungFunction(format!("θ = {theta} must be ≥ 1")))
    }
}

fn powf(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        t
    } else if p == 2.0 {
        t * t
    } else {
        t.powf(p)
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            YoungKind::Power { p, scale } if *scale == 1.0 => write!(f, "power,p={p}"),
            YoungKind::Power { p, scale } => write!(f, "power,p={p},scale={scale}"),
            YoungKind::PowerLog { p } => write!(f, "powerlog,p={p}"),
            YoungKind::ExpMinusOne => write!(f, "exp"),
            YoungKind::Integrated(t) => write!(f, "integrated[theta={}]({})", t.theta, t.base),
        }
    }
}

/// Knots every `2^{1/16}` across `u ∈ [2^-120, 2^120]`.
const KNOTS_PER_OCTAVE: i32 = 16;
const OCTAVES: i32 = 120;
const PANEL_RTOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 48;

/// Lookup table for `G(u) = ∫_0^u Φ(s)/s ds` at log-spaced knots, with
/// Fritsch–Carlson limited cubic Hermite interpolation of `ln G` against
/// `ln u`. Slopes are exact: `d ln G / d ln u = Φ(u)/G(u)`.
#[derive(Debug)]
pub struct IntegratedYoung {
    base: YoungFunction,
    theta: f64,
    ln_u0: f64,
    step: f64,
    ln_g: Vec<f64>,
    slope: Vec<f64>,
    g: Vec<f64>,
}

impl IntegratedYoung {
    fn build(base: YoungFunction, theta: f64) -> Result<Self> {
        let step = std::f64::consts::LN_2 / KNOTS_PER_OCTAVE as f64;
        let n = (2 * OCTAVES * KNOTS_PER_OCTAVE + 1) as usize;
        let knot = |k: usize| ((k as i32 - OCTAVES * KNOTS_PER_OCTAVE) as f64 / KNOTS_PER_OCTAVE as f64).exp2();
        let integrand = |s: f64| base.evaluate(s) / s;

        // Below the first knot Φ(s)/s behaves like a power s^a; integrate that exactly.
        let u0 = knot(0);
        let (g0, g1) = (integrand(u0), integrand(2.0 * u0));
        let first = if g0 > 0.0 && g1 > 0.0 {
            let a = (g1 / g0).log2();
            u0 * g0 / (a + 1.0)
        } else {
            0.0
        };

        let mut g = Vec::with_capacity(n);
        g.push(first);
        for k in 1..n {
            let prev = g[k - 1];
            if !prev.is_finite() {
                g.push(f64::INFINITY);
                continue;
            }
            let panel = adaptive_simpson(&integrand, knot(k - 1), knot(k))?;
            g.push(prev + panel);
        }
        let ln_g = g.iter().map(|v| v.ln()).collect();
        let slope = (0..n)
            .map(|k| {
                let u = knot(k);
                base.evaluate(u) / g[k]
            })
            .collect();
        Ok(Self {
            base,
            theta,
            ln_u0: u0.ln(),
            step,
            ln_g,
            slope,
            g,
        })
    }

    fn evaluate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let u = t.powf(self.theta);
        self.primitive(u)
    }

    /// `G(u)`.
    fn primitive(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if !u.is_finite() {
            return f64::INFINITY;
        }
        let x = (u.ln() - self.ln_u0) / self.step;
        let last = self.g.len() - 1;
        if x <= 0.0 {
            // Power-law continuation with the exact end slope.
            return self.g[0] * (x * self.step * self.slope[0]).exp();
        }
        let k = (x.floor() as usize).min(last);
        if k >= last || !self.ln_g[k + 1].is_finite() || !self.ln_g[k].is_finite() {
            let k = k.min(last);
            let from = (self.ln_u0 + k as f64 * self.step).exp();
            return match adaptive_simpson(&|s: f64| self.base.evaluate(s) / s, from, u) {
                Ok(v) => self.g[k] + v,
                Err(_) => f64::INFINITY,
            };
        }
        let s = x - k as f64;
        let (y0, y1) = (self.ln_g[k], self.ln_g[k + 1]);
        let h = self.step;
        let mut d0 = self.slope[k] * h;
        let mut d1 = self.slope[k + 1] * h;
        let delta = y1 - y0;
        if delta <= 0.0 {
            return y0.exp();
        }
        let (a, b) = (d0 / delta, d1 / delta);
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            d0 *= tau;
            d1 *= tau;
        }
        let s2 = s * s;
        let s3 = s2 * s;
        let y = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1;
        y.exp()
    }
}

/// Adaptive Simpson on `[a, b]` with relative tolerance [`PANEL_RTOL`].
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    if !whole.is_finite() {
        return Ok(f64::INFINITY);
    }
    simpson_step(f, a, b, fa, fm, fb, whole, PANEL_RTOL * whole.abs(), MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let both = left + right;
    if !both.is_finite() {
        return Ok(f64::INFINITY);
    }
    let err = both - whole;
    if err.abs() <= 15.0 * tol || (b - a) <= f64::EPSILON * a.abs() {
        return Ok(both + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "adaptive Simpson did not converge on [{a}, {b}]"
        )));
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}
