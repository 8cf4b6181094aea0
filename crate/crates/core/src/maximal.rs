//! The grid Hardy–Littlewood maximal operator and the boundedness probes
//! built on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Cube, DyadicGrid, GridFunction};
use crate::spaces::SpaceSpec;
use crate::sum::pairwise_mean;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaximalMode {
    /// Every grid-aligned cube inside the base cube.
    #[default]
    Full,
    /// Only the dyadic descendants of the base cube.
    Dyadic,
}

impl MaximalMode {
    pub fn cubes(self, grid: DyadicGrid) -> Vec<Cube> {
        match self {
            Self::Full => grid.enumerate_cubes(),
            Self::Dyadic => grid
                .base_cube()
                .dyadic_descendants()
                .expect("the base cube has a power-of-two side"),
        }
    }
}

impl std::fmt::Display for MaximalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::Dyadic => "dyadic",
        })
    }
}

impl std::str::FromStr for MaximalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" => Ok(Self::Full),
            "dyadic" => Ok(Self::Dyadic),
            other => Err(Error::Parse(format!("unknown maximal mode {other:?}"))),
        }
    }
}

/// `Mf(cell) = max_{Q ∋ cell} (1/|Q|) ∫_Q |f|` over the cubes of `mode`.
///
/// Every cube average is computed once and scattered onto its cells, so the
/// cost is the total cell count over all cubes rather than cells × cubes.
pub fn maximal(f: &GridFunction, mode: MaximalMode) -> GridFunction {
    let grid = f.grid();
    let abs = f.abs();
    let cubes = mode.cubes(grid);
    let averages: Vec<f64> = cubes
        .par_iter()
        .map(|q| {
            let vals: Vec<f64> = grid.cells(q).into_iter().map(|c| abs.values()[c]).collect();
            pairwise_mean(&vals)
        })
        .collect();
    let mut out = vec![0.0f64; grid.cell_count()];
    for (q, &a) in cubes.iter().zip(&averages) {
        for c in grid.cells(q) {
            if a > out[c] {
                out[c] = a;
            }
        }
    }
    GridFunction::new(grid, out).expect("averages of finite values are finite")
}

/// `min_{cell ∈ Q} Mχ_E(cell)` for `E ⊂ Q` with `|Q| ≤ 2|E|`; the result is
/// at least `|E|/|Q| ≥ 1/2` because `Q` itself is one of the competitors.
pub fn maximal_of_indicator_lower(grid: DyadicGrid, e: &[usize], q: &Cube) -> Result<f64> {
    grid.check_cube(q)?;
    let inside = grid.cells(q);
    let mut marked = vec![false; grid.cell_count()];
    for &c in e {
        if c >= grid.cell_count() || inside.binary_search(&c).is_err() {
            return Err(Error::Contract(format!("cell {c} of E lies outside {q}")));
        }
        marked[c] = true;
    }
    let count = marked.iter().filter(|m| **m).count();
    if inside.len() > 2 * count {
        return Err(Error::Contract(format!(
            "|E| = {count} cells is less than half of |Q| = {} cells",
            inside.len()
        )));
    }
    let chi = GridFunction::indicator_of_cells(grid, e)?;
    let m = maximal(&chi, MaximalMode::Full);
    let low = inside.iter().map(|&c| m.values()[c]).fold(f64::INFINITY, f64::min);
    let floor = count as f64 / inside.len() as f64;
    if low < floor {
        return Err(Error::Contract(format!(
            "Mχ_E dropped to {low} inside {q}, below |E|/|Q| = {floor}"
        )));
    }
    Ok(low)
}

/// `λ ‖χ_{{Mf > λ}}‖_X / ‖f‖_X`.
pub fn weak_bound_ratio(x: &SpaceSpec, f: &GridFunction, lambda: f64, mode: MaximalMode) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Contract(format!("level λ = {lambda} must be positive and finite")));
    }
    let denom = x.quasi_norm(f)?;
    if denom == 0.0 {
        return Err(Error::UndefinedRatio("‖f‖_X = 0 in the weak-type ratio".into()));
    }
    let m = maximal(f, mode);
    let level = m.map(|v| if v > lambda { 1.0 } else { 0.0 })?;
    Ok(lambda * x.quasi_norm(&level)? / denom)
}

/// `‖Σ_j (Mf_j)^η‖_X / ‖Σ_j |f_j|^η‖_X`.
pub fn vector_valued_ratio(x: &SpaceSpec, fs: &[GridFunction], eta: f64, mode: MaximalMode) -> Result<f64> {
    let (num, den) = vector_sums(fs, eta, mode)?;
    ratio(x, &num, &den)
}

/// The same probe with the `η`-th root taken inside the norms:
/// `‖(Σ_j (Mf_j)^η)^{1/η}‖_X / ‖(Σ_j |f_j|^η)^{1/η}‖_X`.
pub fn vector_valued_ratio_rooted(
    x: &SpaceSpec,
    fs: &[GridFunction],
    eta: f64,
    mode: MaximalMode,
) -> Result<f64> {
    let (num, den) = vector_sums(fs, eta, mode)?;
    ratio(x, &num.map(|v| v.powf(1.0 / eta))?, &den.map(|v| v.powf(1.0 / eta))?)
}

fn vector_sums(fs: &[GridFunction], eta: f64, mode: MaximalMode) -> Result<(GridFunction, GridFunction)> {
    let Some(first) = fs.first() else {
        return Err(Error::Contract("vector-valued probe needs at least one function".into()));
    };
    if !(eta > 1.0 && eta.is_finite()) {
        return Err(Error::Contract(format!("η = {eta} must exceed 1")));
    }
    let grid = first.grid();
    let mut num = vec![0.0; grid.cell_count()];
    let mut den = vec![0.0; grid.cell_count()];
    for f in fs {
        first.same_grid(f)?;
        let m = maximal(f, mode);
        for c in 0..grid.cell_count() {
            num[c] += m.values()[c].powf(eta);
            den[c] += f.values()[c].abs().powf(eta);
        }
    }
    let to_fn = |v: Vec<f64>| {
        GridFunction::new(grid, v).map_err(|_| Error::NumericOverflow(format!("Σ|f_j|^η overflows for η = {eta}")))
    };
    Ok((to_fn(num)?, to_fn(den)?))
}

fn ratio(x: &SpaceSpec, num: &GridFunction, den: &GridFunction) -> Result<f64> {
    let d = x.quasi_norm(den)?;
    if d == 0.0 {
        return Err(Error::UndefinedRatio("the family vanishes identically".into()));
    }
    Ok(x.quasi_norm(num)? / d)
}

/// `max_cell |M(δ^t f)(cell) − (Mf)(t·cell)|` for `t = 2^-j`.
///
/// The right side reads `Mf` at the image cell, so it needs no support
/// condition; the left side needs `f` to vanish outside `[0, 2^-j)^n`.
pub fn dilation_commutation_check(f: &GridFunction, j: u32, mode: MaximalMode) -> Result<f64> {
    let grid = f.grid();
    let lhs = maximal(&f.dilate(j)?, mode);
    let mf = maximal(f, mode);
    let mut worst: f64 = 0.0;
    for (i, &v) in lhs.values().iter().enumerate() {
        let c = grid.coords(i);
        let image = mf.values()[grid.index([c[0] >> j, c[1] >> j])];
        worst = worst.max((v - image).abs());
    }
    Ok(worst)
}
