//! BMO, Campanato and space-based oscillation functionals, and the
//! equivalence ratios between them.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::conditions::PhiParameter;
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::grid::{Cube, DyadicGrid, GridFunction};
use crate::spaces::{normalized_luxemburg, ModularKind, SpaceSpec, YoungFunction};

/// `‖(f - f_Q) χ_Q‖_X / ‖χ_Q‖_X`.
pub fn oscillation_ratio(x: &SpaceSpec, f: &GridFunction, q: &Cube) -> Result<f64> {
    let osc = f.oscillation(q)?;
    let num = x.quasi_norm(&osc)?;
    if num == 0.0 {
        return Ok(0.0);
    }
    Ok(num / x.quasi_norm(&GridFunction::indicator(f.grid(), q)?)?)
}

fn lebesgue(p: f64) -> Result<SpaceSpec> {
    SpaceSpec::lp(p)
}

/// `sup_Q (1/|Q|) ∫_Q |f - f_Q|`.
pub fn bmo_norm(f: &GridFunction) -> Result<f64> {
    campanato_norm(f, &PhiParameter::Constant, 1.0)
}

/// `sup_Q φ(Q) ‖(f - f_Q) χ_Q‖_{L^p} / ‖χ_Q‖_{L^p}`.
pub fn campanato_norm(f: &GridFunction, phi: &PhiParameter, p: f64) -> Result<f64> {
    Ok(x_campanato(f, phi, &lebesgue(p)?)?.x_campanato)
}

/// Per-cube record of an oscillation profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeRecord {
    pub cube: Cube,
    /// `(1/|Q|) ∫_Q |f - f_Q|`.
    pub l1_osc: f64,
    /// `‖(f - f_Q) χ_Q‖_X / ‖χ_Q‖_X`.
    pub x_ratio: f64,
}

/// The `φ`-free part of the functionals: both per-cube ratios on every cube.
#[derive(Debug, Clone)]
pub struct OscillationProfile {
    pub grid: DyadicGrid,
    pub space: String,
    pub records: Vec<CubeRecord>,
}

/// `‖χ_Q‖_X` for every grid cube in enumeration order. It depends only on
/// the space and the grid, so one table serves a whole corpus.
#[derive(Debug, Clone)]
pub struct IndicatorNorms {
    grid: DyadicGrid,
    space: String,
    cubes: Vec<Cube>,
    norms: Vec<f64>,
}

impl IndicatorNorms {
    pub fn new(x: &SpaceSpec, grid: DyadicGrid) -> Result<Self> {
        x.check_grid(grid)?;
        let cubes = grid.enumerate_cubes();
        let norms = cubes
            .par_iter()
            .map(|q| x.quasi_norm(&GridFunction::indicator(grid, q)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            space: x.to_string(),
            cubes,
            norms,
        })
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }
}

impl OscillationProfile {
    pub fn compute(f: &GridFunction, x: &SpaceSpec) -> Result<Self> {
        Self::compute_with(f, x, &IndicatorNorms::new(x, f.grid())?)
    }

    /// [`compute`](Self::compute) with the denominators taken from `table`,
    /// which must have been built for the same space and grid.
    pub fn compute_with(f: &GridFunction, x: &SpaceSpec, table: &IndicatorNorms) -> Result<Self> {
        x.check_grid(f.grid())?;
        if table.grid != f.grid() || table.space != x.to_string() {
            return Err(Error::Contract(format!(
                "indicator norms for {} on {:?} used with {x} on {:?}",
                table.space,
                table.grid,
                f.grid()
            )));
        }
        let grid = f.grid();
        let l1 = lebesgue(1.0)?;
        let same = matches!(x, SpaceSpec::Lp { p } if *p == 1.0);
        let records = table
            .cubes
            .par_iter()
            .zip(table.norms.par_iter())
            .map(|(q, &denom)| {
                let osc = f.oscillation(q)?;
                let l1_osc = l1.quasi_norm(&osc)? / q.measure(grid);
                let x_ratio = if same {
                    l1_osc
                } else {
                    let num = x.quasi_norm(&osc)?;
                    if num == 0.0 {
                        0.0
                    } else {
                        num / denom
                    }
                };
                Ok(CubeRecord { cube: *q, l1_osc, x_ratio })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            space: x.to_string(),
            records,
        })
    }

    pub fn report(&self, phi: &PhiParameter) -> OscillationReport {
        let phis: Vec<f64> = self.records.iter().map(|r| phi.at_cube(self.grid, &r.cube)).collect();
        let (campanato, x_campanato) = aggregates(&self.records, &phis);
        let (lower_ratio, upper_ratio) = ratios(campanato, x_campanato);
        OscillationReport {
            grid: self.grid,
            space: self.space.clone(),
            phi: phi.to_string(),
            records: self.records.clone(),
            phis,
            campanato,
            x_campanato,
            lower_ratio,
            upper_ratio,
        }
    }
}

fn aggregates(records: &[CubeRecord], phis: &[f64]) -> (f64, f64) {
    records.iter().zip(phis).fold((0.0f64, 0.0f64), |(a, b), (r, &p)| {
        (a.max(p * r.l1_osc), b.max(p * r.x_ratio))
    })
}

/// `(a/b, b/a)` with `0/0 = 1`.
fn ratios(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 && b == 0.0 {
        (1.0, 1.0)
    } else {
        (a / b, b / a)
    }
}

/// Result of one equivalence experiment: per-cube values and the aggregate
/// functionals.
#[derive(Debug, Clone)]
pub struct OscillationReport {
    pub grid: DyadicGrid,
    pub space: String,
    pub phi: String,
    pub records: Vec<CubeRecord>,
    /// `φ(Q)` per record.
    pub phis: Vec<f64>,
    /// `sup_Q φ(Q) l1_osc(Q)`.
    pub campanato: f64,
    /// `sup_Q φ(Q) x_ratio(Q)`.
    pub x_campanato: f64,
    /// `campanato / x_campanato`.
    pub lower_ratio: f64,
    /// `x_campanato / campanato`.
    pub upper_ratio: f64,
}

impl OscillationReport {
    /// True when the aggregates equal the maxima recomputed from the records.
    pub fn is_consistent(&self) -> bool {
        let (a, b) = aggregates(&self.records, &self.phis);
        let (l, u) = ratios(a, b);
        let same = |x: f64, y: f64| x == y || (x.is_nan() && y.is_nan());
        same(a, self.campanato) && same(b, self.x_campanato) && same(l, self.lower_ratio) && same(u, self.upper_ratio)
    }

    /// Header `corner0[,corner1],side_cells,phi,l1_osc,x_ratio`, one row per cube.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("corner0,");
        if self.grid.dim() == 2 {
            out.push_str("corner1,");
        }
        out.push_str("side_cells,phi,l1_osc,x_ratio\n");
        for (r, p) in self.records.iter().zip(&self.phis) {
            for c in r.cube.corner() {
                let _ = write!(out, "{c},");
            }
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.cube.side_cells(),
                fmt_f64(*p),
                fmt_f64(r.l1_osc),
                fmt_f64(r.x_ratio)
            );
        }
        out
    }

    /// `{campanato, x_campanato, lower_ratio, upper_ratio}`; non-finite
    /// values become strings.
    pub fn aggregates_json(&self) -> Value {
        json!({
            "campanato": number(self.campanato),
            "x_campanato": number(self.x_campanato),
            "lower_ratio": number(self.lower_ratio),
            "upper_ratio": number(self.upper_ratio),
        })
    }
}

/// A JSON number when finite, otherwise its text form.
pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(fmt_f64(x)), Value::Number)
}

/// `sup_Q φ(Q) ‖(f - f_Q) χ_Q‖_X / ‖χ_Q‖_X` with its comparison against the
/// `L¹` Campanato norm.
pub fn x_campanato(f: &GridFunction, phi: &PhiParameter, x: &SpaceSpec) -> Result<OscillationReport> {
    Ok(OscillationProfile::compute(f, x)?.report(phi))
}

/// `‖f‖_{Φ,Q} = inf{λ > 0 : (1/|Q|) ∫_Q Φ(|f|/λ) ≤ 1}`.
pub fn orlicz_average(f: &GridFunction, phi: &YoungFunction, q: &Cube) -> Result<f64> {
    f.grid().check_cube(q)?;
    normalized_luxemburg(ModularKind::Orlicz(phi), f, q)
}

/// `‖f‖_{X,Q}`: the `X` quasi-norm of `f χ_Q` rescaled onto the unit cube.
/// Weight and exponent fields are block-averaged to the rescaled level.
pub fn x_average_norm(f: &GridFunction, x: &SpaceSpec, q: &Cube) -> Result<f64> {
    x.check_grid(f.grid())?;
    let g = f.rescale_to_unit(q)?;
    x.coarsened(g.grid().level())?.quasi_norm(&g)
}

/// `sup_Q φ(Q) ‖f - f_Q‖_{X,Q}` over cubes with a power-of-two side.
pub fn average_campanato(f: &GridFunction, phi: &PhiParameter, x: &SpaceSpec) -> Result<f64> {
    let grid = f.grid();
    let cubes: Vec<Cube> = grid
        .enumerate_cubes()
        .into_iter()
        .filter(|q| q.has_power_of_two_side())
        .collect();
    let values = cubes
        .par_iter()
        .map(|q| Ok(phi.at_cube(grid, q) * x_average_norm(&f.oscillation(q)?, x, q)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(0.0, f64::max))
}

/// `f_Q / ‖f‖_{X,Q}` for `f ≥ 0`.
pub fn technical_condition_ratio(f: &GridFunction, x: &SpaceSpec, q: &Cube) -> Result<f64> {
    if let Some(v) = f.values().iter().find(|v| **v < 0.0) {
        return Err(Error::Contract(format!("technical ratio needs f ≥ 0, found {v}")));
    }
    let den = x_average_norm(f, x, q)?;
    if den == 0.0 {
        return Err(Error::UndefinedRatio(format!("‖f‖_(X,Q) = 0 on {q}")));
    }
    Ok(f.average(q)? / den)
}
