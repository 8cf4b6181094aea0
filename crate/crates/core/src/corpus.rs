//! Deterministic test functions, weights and exponents.
//!
//! Random members use SplitMix64: the state advances by `0x9e3779b97f4a7c15`
//! and each output is the state passed through the mixer
//! `z ^= z >> 30; z *= 0xbf58476d1ce4e5b9; z ^= z >> 27; z *= 0x94d049bb133111eb; z ^= z >> 31`.
//! Uniform doubles take the top 53 bits of an output.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::grid::{DyadicGrid, GridFunction};
use crate::spaces::VariableExponent;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (-53f64).exp2()
    }

    /// Uniform on `[-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusSpec {
    /// `ln|x - x₀|`, with `x₀` a grid vertex.
    LogDistance { x0: Vec<f64> },
    /// `|x|^θ`, `0 < θ ≤ 1`.
    Power { theta: f64 },
    /// `levels[⌊m x₁⌋]` with `m = levels.len()` a power of two.
    Step { levels: Vec<f64> },
    /// Dyadic martingale: every non-cell dyadic cube adds mean-zero uniform
    /// jumps of size `amplitude` across its children.
    RandomCz { seed: u64, amplitude: f64 },
    /// `sin(2π · frequency · x₁)`.
    Sine { frequency: f64 },
    /// Independent uniform values on `[-1, 1)`.
    Noise { seed: u64 },
}

impl fmt::Display for CorpusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[f64]| v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(";");
        match self {
            Self::LogDistance { x0 } => write!(f, "log:x0={}", list(x0)),
            Self::Power { theta } => write!(f, "power:theta={}", fmt_f64(*theta)),
            Self::Step { levels } => write!(f, "step:levels={}", list(levels)),
            Self::RandomCz { seed, amplitude } => write!(f, "randomcz:seed={seed},amplitude={}", fmt_f64(*amplitude)),
            Self::Sine { frequency } => write!(f, "sine:frequency={}", fmt_f64(*frequency)),
            Self::Noise { seed } => write!(f, "noise:seed={seed}"),
        }
    }
}

impl CorpusSpec {
    /// Inverse of `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let (kind, rest) = t.split_once(':').unwrap_or((t, ""));
        let mut args = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            args.insert(k.trim(), v.trim());
        }
        let get = |k: &str| {
            args.get(k)
                .copied()
                .ok_or_else(|| Error::Parse(format!("corpus spec {t:?} lacks {k}")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?.parse().map_err(|_| Error::Parse(format!("bad number for {k} in {t:?}")))
        };
        let list = |k: &str| -> Result<Vec<f64>> {
            get(k)?
                .split(';')
                .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad list for {k} in {t:?}"))))
                .collect()
        };
        let seed = || -> Result<u64> { get("seed")?.parse().map_err(|_| Error::Parse(format!("bad seed in {t:?}"))) };
        match kind {
            "log" => Ok(Self::LogDistance { x0: list("x0")? }),
            "power" => Ok(Self::Power { theta: num("theta")? }),
            "step" => Ok(Self::Step { levels: list("levels")? }),
            "randomcz" => Ok(Self::RandomCz {
                seed: seed()?,
                amplitude: num("amplitude")?,
            }),
            "sine" => Ok(Self::Sine { frequency: num("frequency")? }),
            "noise" => Ok(Self::Noise { seed: seed()? }),
            _ => Err(Error::Parse(format!("unknown corpus generator {t:?}"))),
        }
    }
}

pub fn generate(spec: &CorpusSpec, grid: DyadicGrid) -> Result<GridFunction> {
    let dim = grid.dim();
    let norm = |x: &[f64]| match x {
        [a] => a.abs(),
        _ => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
    };
    match spec {
        CorpusSpec::LogDistance { x0 } => {
            if x0.len() != dim || !grid.is_vertex(x0) {
                return Err(Error::InvalidSpec(format!(
                    "log singularity {x0:?} must be a vertex of the {grid} grid"
                )));
            }
            GridFunction::from_fn(grid, |x| {
                let d: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a - b).collect();
                norm(&d).ln()
            })
        }
        CorpusSpec::Power { theta } => {
            if !(*theta > 0.0 && *theta <= 1.0) {
                return Err(Error::InvalidSpec(format!("power exponent θ = {theta} must lie in (0, 1]")));
            }
            GridFunction::from_fn(grid, |x| norm(x).powf(*theta))
        }
        CorpusSpec::Step { levels } => {
            let m = levels.len();
            if !m.is_power_of_two() || levels.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "step needs a power-of-two count of finite levels, got {levels:?}"
                )));
            }
            GridFunction::from_fn(grid, |x| levels[((x[0] * m as f64) as usize).min(m - 1)])
        }
        CorpusSpec::RandomCz { seed, amplitude } => {
            if !amplitude.is_finite() {
                return Err(Error::InvalidSpec(format!("amplitude {amplitude} must be finite")));
            }
            let mut rng = SplitMix64::new(*seed);
            let mut values = vec![0.0; grid.cell_count()];
            let cubes = grid.base_cube().dyadic_descendants()?;
            for q in cubes.iter().filter(|q| q.side_cells() > 1) {
                let kids = q.children();
                let jumps: Vec<f64> = kids.iter().map(|_| rng.symmetric()).collect();
                let mean = jumps.iter().sum::<f64>() / jumps.len() as f64;
                for (kid, j) in kids.iter().zip(&jumps) {
                    for c in grid.cells(kid) {
                        values[c] += amplitude * (j - mean);
                    }
                }
            }
            GridFunction::new(grid, values)
        }
        CorpusSpec::Sine { frequency } => {
            if !frequency.is_finite() {
                return Err(Error::InvalidSpec(format!("frequency {frequency} must be finite")));
            }
            GridFunction::from_fn(grid, |x| (2.0 * PI * frequency * x[0]).sin())
        }
        CorpusSpec::Noise { seed } => {
            let mut rng = SplitMix64::new(*seed);
            GridFunction::new(grid, (0..grid.cell_count()).map(|_| rng.symmetric()).collect())
        }
    }
}

/// Names and generators of the standard corpus in dimension `dim`, in their
/// fixed order.
pub fn standard_specs(dim: usize) -> Vec<(&'static str, CorpusSpec)> {
    vec![
        ("log_origin", CorpusSpec::LogDistance { x0: vec![0.0; dim] }),
        ("log_center", CorpusSpec::LogDistance { x0: vec![0.5; dim] }),
        ("power_1", CorpusSpec::Power { theta: 1.0 }),
        ("power_half", CorpusSpec::Power { theta: 0.5 }),
        ("step_half", CorpusSpec::Step { levels: vec![0.0, 1.0] }),
        ("step_quarter", CorpusSpec::Step { levels: vec![1.0, -1.0, 0.5, 2.0] }),
        (
            "step_spike",
            CorpusSpec::Step {
                levels: vec![0.0, 0.0, 0.0, 0.0, 0.0, 8.0, 0.0, 0.0],
            },
        ),
        ("random_cz_1", CorpusSpec::RandomCz { seed: 1, amplitude: 1.0 }),
        ("random_cz_2", CorpusSpec::RandomCz { seed: 2, amplitude: 1.0 }),
        ("random_cz_3", CorpusSpec::RandomCz { seed: 3, amplitude: 1.0 }),
        ("random_cz_4", CorpusSpec::RandomCz { seed: 4, amplitude: 1.0 }),
        ("sine_1", CorpusSpec::Sine { frequency: 1.0 }),
    ]
}

/// The twelve-member suite; needs `L ≥ 1` so that the center is a vertex.
pub fn standard_corpus(grid: DyadicGrid) -> Result<Vec<(String, GridFunction)>> {
    standard_specs(grid.dim())
        .into_iter()
        .map(|(name, spec)| Ok((name.to_string(), generate(&spec, grid)?)))
        .collect()
}

/// Looks up one member of [`standard_corpus`] by name, or parses a spec.
pub fn member(name: &str, grid: DyadicGrid) -> Result<GridFunction> {
    match standard_specs(grid.dim()).into_iter().find(|(n, _)| *n == name.trim()) {
        Some((_, spec)) => generate(&spec, grid),
        None => generate(&CorpusSpec::parse(name)?, grid),
    }
}

/// `|x|^a` at cell centers.
pub fn power_weight(grid: DyadicGrid, a: f64) -> Result<GridFunction> {
    GridFunction::from_fn(grid, |x| x.iter().map(|v| v * v).sum::<f64>().sqrt().powf(a))
}

/// `w ≡ 1`, the `A₂` power weights `|x|^{±1/2}`, and the non-`A_p` control
/// `|x - c|^{-n}` with `c` the base-cube center.
pub fn standard_weights(grid: DyadicGrid) -> Result<Vec<(String, GridFunction)>> {
    let n = grid.dim() as f64;
    Ok(vec![
        ("uniform".to_string(), GridFunction::constant(grid, 1.0)?),
        ("midpoint_pow_half".to_string(), power_weight(grid, 0.5)?),
        ("midpoint_pow_neg_half".to_string(), power_weight(grid, -0.5)?),
        (
            "spike".to_string(),
            GridFunction::from_fn(grid, |x| {
                x.iter().map(|v| (v - 0.5) * (v - 0.5)).sum::<f64>().sqrt().powf(-n)
            })?,
        ),
    ])
}

/// `p(x) = 2 + x₁/4`.
pub fn standard_exponent(grid: DyadicGrid) -> Result<VariableExponent> {
    VariableExponent::new(GridFunction::from_fn(grid, |x| 2.0 + 0.25 * x[0])?)
}
