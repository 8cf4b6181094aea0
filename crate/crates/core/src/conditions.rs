//! Checkers for the hypotheses the equivalence theorems rest on: `χ_Q`
//! duality bounds, Muckenhoupt-type weight constants, Young-function growth
//! conditions, regularity of `φ`, and log-Hölder continuity of exponents.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::corpus::SplitMix64;
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::grid::{Cube, DyadicGrid, GridFunction};
use crate::spaces::{associate_norm_indicator, SpaceSpec, VariableExponent, YoungFunction};
use crate::sum::{pairwise_mean, pairwise_sum};

type PhiFn = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// The scale function `φ(x, r) > 0`; on cubes `φ(Q) = φ(center(Q), ℓ(Q)/2)`.
#[derive(Clone)]
pub enum PhiParameter {
    Constant,
    /// `φ(x, r) = (2r)^{-θ}`, so that `φ(Q) = ℓ(Q)^{-θ}`.
    Power { theta: f64 },
    Custom { name: String, eval: PhiFn },
}

impl PhiParameter {
    pub fn power(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Parse(format!("φ exponent θ = {theta} must be finite")));
        }
        Ok(Self::Power { theta })
    }

    pub fn custom(name: &str, eval: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Custom {
            name: name.to_string(),
            eval: Arc::new(eval),
        }
    }

    pub fn evaluate(&self, x: &[f64], r: f64) -> f64 {
        match self {
            Self::Constant => 1.0,
            Self::Power { theta } => (2.0 * r).powf(-theta),
            Self::Custom { eval, .. } => eval(x, r),
        }
    }

    pub fn at_cube(&self, grid: DyadicGrid, q: &Cube) -> f64 {
        match self {
            Self::Constant => 1.0,
            Self::Power { theta } if *theta == 0.0 => 1.0,
            _ => {
                let c = q.center(grid);
                self.evaluate(&c[..grid.dim()], 0.5 * q.side_length(grid))
            }
        }
    }

    /// `1` (or `const`), `power:theta=T`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "1" || t == "const" || t == "constant" {
            return Ok(Self::Constant);
        }
        if let Some(rest) = t.strip_prefix("power:") {
            let value = rest
                .trim()
                .strip_prefix("theta=")
                .ok_or_else(|| Error::Parse(format!("expected power:theta=T, got {t:?}")))?;
            let theta: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad θ in {t:?}")))?;
            return Self::power(theta);
        }
        Err(Error::Parse(format!("unknown φ descriptor {t:?}")))
    }
}

impl fmt::Display for PhiParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant => f.write_str("1"),
            Self::Power { theta } => write!(f, "power:theta={}", fmt_f64(*theta)),
            Self::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl fmt::Debug for PhiParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhiParameter({self})")
    }
}

/// Where a checker found its worst case.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    None,
    Cube(Cube),
    Subset { cube: Cube, cells: Vec<usize> },
    Level(f64),
    Pair { x: Vec<f64>, y: Vec<f64>, r: f64 },
}

impl Witness {
    fn to_json(&self) -> Value {
        match self {
            Self::None => Value::Null,
            Self::Cube(q) => json!({ "cube": q.to_string() }),
            Self::Subset { cube, cells } => json!({ "cube": cube.to_string(), "cells": cells }),
            Self::Level(r) => json!({ "r": fmt_f64(*r) }),
            Self::Pair { x, y, r } => json!({
                "x": x.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>(),
                "y": y.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>(),
                "r": fmt_f64(*r),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition: String,
    /// `None` when no admissible constant exists on the samples.
    pub constant: Option<f64>,
    pub witness: Witness,
    /// Random samples drawn per item, where the checker draws any.
    pub budget: usize,
    /// Number of items (cubes, levels, pairs) evaluated.
    pub samples: usize,
    pub threshold: Option<f64>,
    /// False when some associate norm came from the uncertified ascent.
    pub certified: bool,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn new(condition: &str, constant: f64, witness: Witness, samples: usize) -> Self {
        Self {
            condition: condition.to_string(),
            constant: Some(constant),
            witness,
            budget: 0,
            samples,
            threshold: None,
            certified: true,
            notes: Vec::new(),
        }
    }

    /// Numbers are written as round-trip decimal strings so that `inf` and
    /// `NaN` survive.
    pub fn to_json(&self) -> Value {
        json!({
            "condition": self.condition,
            "constant": self.constant.map(fmt_f64),
            "witness": self.witness.to_json(),
            "budget": self.budget,
            "samples": self.samples,
            "threshold": self.threshold.map(fmt_f64),
            "certified": self.certified,
            "notes": self.notes,
        })
    }

    pub fn passes(&self) -> Option<bool> {
        let t = self.threshold?;
        Some(self.constant.is_some_and(|c| c <= t))
    }
}

/// Max of `f` over the items, keeping the first item that attains it.
fn argmax<T: Clone>(items: impl IntoIterator<Item = (f64, T)>) -> Option<(f64, T)> {
    let mut best: Option<(f64, T)> = None;
    for (v, t) in items {
        if best.as_ref().is_none_or(|(b, _)| v > *b || (v.is_nan() && !b.is_nan())) {
            best = Some((v, t));
        }
    }
    best
}

/// `‖χ_Q‖_X ‖χ_Q‖_{X'} / |Q|` and whether the associate norm is certified.
pub fn ax_product_ratio(x: &SpaceSpec, grid: DyadicGrid, q: &Cube) -> Result<(f64, bool)> {
    let dual = associate_norm_indicator(x, grid, q)?;
    let norm = x.quasi_norm(&GridFunction::indicator(grid, q)?)?;
    Ok((norm * dual.value / q.measure(grid), dual.certified))
}

/// Max of [`ax_product_ratio`] over every grid cube.
pub fn ax_constant(x: &SpaceSpec, grid: DyadicGrid) -> Result<ConditionReport> {
    let cubes = grid.enumerate_cubes();
    let values = cubes
        .par_iter()
        .map(|q| ax_product_ratio(x, grid, q))
        .collect::<Result<Vec<_>>>()?;
    let certified = values.iter().all(|v| v.1);
    let (c, q) = argmax(values.iter().map(|v| v.0).zip(cubes.iter().copied())).expect("a grid has cubes");
    let mut report = ConditionReport::new("ax", c, Witness::Cube(q), cubes.len());
    report.certified = certified;
    if !certified {
        report.notes.push("associate norms are ascent lower bounds".into());
    }
    Ok(report)
}

/// `|f|_Q ‖χ_Q‖_X / ‖f χ_Q‖_X`.
pub fn ax_lerner_ratio(x: &SpaceSpec, f: &GridFunction, q: &Cube) -> Result<f64> {
    let grid = f.grid();
    let den = x.quasi_norm(&f.restrict(q)?)?;
    if den == 0.0 {
        return Err(Error::UndefinedRatio(format!("‖fχ_Q‖_X = 0 on {q}")));
    }
    let avg = f.abs().average(q)?;
    Ok(avg * x.quasi_norm(&GridFunction::indicator(grid, q)?)? / den)
}

fn check_weight(w: &GridFunction) -> Result<()> {
    if let Some(i) = w.values().iter().position(|v| !(*v > 0.0)) {
        return Err(Error::Contract(format!("weight is not positive at cell {i}")));
    }
    Ok(())
}

/// `sup_Q (w)_Q ((w^{1-p'})_Q)^{p-1}`; for `p = 1` the `A_1` form
/// `sup_Q (w)_Q / min_Q w`.
pub fn ap_constant(w: &GridFunction, p: f64) -> Result<ConditionReport> {
    check_weight(w)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Contract(format!("A_p needs 1 ≤ p < ∞, got {p}")));
    }
    let grid = w.grid();
    let dual: Vec<f64> = if p > 1.0 {
        let e = 1.0 - p / (p - 1.0);
        w.values().iter().map(|v| v.powf(e)).collect()
    } else {
        Vec::new()
    };
    let cubes = grid.enumerate_cubes();
    let values: Vec<f64> = cubes
        .par_iter()
        .map(|q| {
            let cells = grid.cells(q);
            let wq: Vec<f64> = cells.iter().map(|&c| w.values()[c]).collect();
            let mean = pairwise_mean(&wq);
            if p == 1.0 {
                mean / wq.iter().copied().fold(f64::INFINITY, f64::min)
            } else {
                let dq: Vec<f64> = cells.iter().map(|&c| dual[c]).collect();
                let dm = pairwise_mean(&dq);
                mean * if p == 2.0 { dm } else { dm.powf(p - 1.0) }
            }
        })
        .collect();
    let (c, q) = argmax(values.into_iter().zip(cubes.iter().copied())).expect("a grid has cubes");
    Ok(ConditionReport::new(&format!("ap,p={}", fmt_f64(p)), c, Witness::Cube(q), cubes.len()))
}

/// Seed of the random subsets drawn by [`ap1_constant`].
pub const AP1_SEED: u64 = 0x005e_eda1;

/// `sup (|E|/|Q|) / (w(E)/w(Q))^{1/p}` over cubes `Q` and sampled `E ⊂ Q`.
///
/// For a fixed `|E|` the ratio is largest when `w(E)` is smallest, i.e. when
/// `E` collects the cells of smallest weight; those sublevel sets are always
/// tried, followed by `subset_budget` random subsets per cube.
pub fn ap1_constant(w: &GridFunction, p: f64, subset_budget: usize) -> Result<ConditionReport> {
    ap1_search(w, p, subset_budget, usize::MAX)
}

/// [`ap1_constant`] restricted to cubes with at most `max_cells` cells.
pub fn ap1_constant_small(w: &GridFunction, p: f64, subset_budget: usize, max_cells: usize) -> Result<ConditionReport> {
    ap1_search(w, p, subset_budget, max_cells)
}

fn ap1_ratio(e_cells: usize, q_cells: usize, we: f64, wq: f64, p: f64) -> f64 {
    (e_cells as f64 / q_cells as f64) / (we / wq).powf(1.0 / p)
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Contract(format!("A(p,1) needs 1 ≤ p < ∞, got {p}")));
    }
    Ok(())
}

fn ap1_search(w: &GridFunction, p: f64, budget: usize, max_cells: usize) -> Result<ConditionReport> {
    check_weight(w)?;
    check_p(p)?;
    let grid = w.grid();
    let cubes: Vec<(usize, Cube)> = grid
        .enumerate_cubes()
        .into_iter()
        .filter(|q| q.cell_count() <= max_cells)
        .enumerate()
        .collect();
    let per_cube: Vec<(f64, Vec<usize>)> = cubes
        .par_iter()
        .map(|(k, q)| {
            let mut cells = grid.cells(q);
            let wq = pairwise_sum(&cells.iter().map(|&c| w.values()[c]).collect::<Vec<_>>());
            let n = cells.len();
            let mut best = (f64::NEG_INFINITY, Vec::new());
            let mut rng = SplitMix64::new(AP1_SEED ^ (*k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let random: Vec<Vec<usize>> = (0..budget)
                .map(|_| {
                    let mut e: Vec<usize> = cells.iter().copied().filter(|_| rng.next_u64() >> 63 == 1).collect();
                    if e.is_empty() {
                        e.push(cells[(rng.next_u64() % n as u64) as usize]);
                    }
                    e
                })
                .collect();
            cells.sort_by(|&a, &b| w.values()[a].total_cmp(&w.values()[b]).then(a.cmp(&b)));
            let mut acc = 0.0;
            for (i, &c) in cells.iter().enumerate() {
                acc += w.values()[c];
                let r = ap1_ratio(i + 1, n, acc, wq, p);
                if r > best.0 {
                    let mut e = cells[..=i].to_vec();
                    e.sort_unstable();
                    best = (r, e);
                }
            }
            for e in random {
                let we = pairwise_sum(&e.iter().map(|&c| w.values()[c]).collect::<Vec<_>>());
                let r = ap1_ratio(e.len(), n, we, wq, p);
                if r > best.0 {
                    best = (r, e);
                }
            }
            best
        })
        .collect();
    let (c, (q, cells)) = argmax(
        per_cube
            .into_iter()
            .zip(&cubes)
            .map(|((r, e), (_, q))| (r, (*q, e))),
    )
    .ok_or_else(|| Error::Contract(format!("no cube has at most {max_cells} cells")))?;
    let mut report = ConditionReport::new(
        &format!("ap1,p={}", fmt_f64(p)),
        c,
        Witness::Subset { cube: q, cells },
        cubes.len(),
    );
    report.budget = budget;
    Ok(report)
}

/// Exhaustive A(p,1) search over every nonempty subset of every cube with at
/// most `max_cells` cells (at most 20).
pub fn ap1_constant_exhaustive(w: &GridFunction, p: f64, max_cells: usize) -> Result<ConditionReport> {
    check_weight(w)?;
    check_p(p)?;
    if max_cells > 20 {
        return Err(Error::Contract(format!("exhaustive subsets of {max_cells} cells are out of reach")));
    }
    let grid = w.grid();
    let cubes: Vec<Cube> = grid
        .enumerate_cubes()
        .into_iter()
        .filter(|q| q.cell_count() <= max_cells)
        .collect();
    let per_cube: Vec<(f64, u32)> = cubes
        .par_iter()
        .map(|q| {
            let cells = grid.cells(q);
            let n = cells.len();
            let ws: Vec<f64> = cells.iter().map(|&c| w.values()[c]).collect();
            let wq = pairwise_sum(&ws);
            let mut sums = vec![0.0f64; 1 << n];
            let mut best = (f64::NEG_INFINITY, 0u32);
            for mask in 1u32..(1 << n) {
                let low = mask.trailing_zeros() as usize;
                sums[mask as usize] = sums[(mask & (mask - 1)) as usize] + ws[low];
                let r = ap1_ratio(mask.count_ones() as usize, n, sums[mask as usize], wq, p);
                if r > best.0 {
                    best = (r, mask);
                }
            }
            best
        })
        .collect();
    let (c, (q, mask)) = argmax(per_cube.into_iter().zip(&cubes).map(|((r, m), q)| (r, (*q, m))))
        .ok_or_else(|| Error::Contract(format!("no cube has at most {max_cells} cells")))?;
    let cells = grid
        .cells(&q)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, c)| c)
        .collect();
    Ok(ConditionReport::new(
        &format!("ap1-exhaustive,p={}", fmt_f64(p)),
        c,
        Witness::Subset { cube: q, cells },
        cubes.len(),
    ))
}

/// Sample points `r` for Young-function growth checks.
#[derive(Debug, Clone, PartialEq)]
pub struct YoungSample {
    pub points: Vec<f64>,
    pub per_decade: usize,
}

impl YoungSample {
    /// `per_decade` log-spaced points per factor of ten on `[lo, hi]`.
    pub fn log_spaced(lo: f64, hi: f64, per_decade: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite() && per_decade > 0) {
            return Err(Error::Contract(format!("bad sample range [{lo}, {hi}]")));
        }
        let step = 10f64.powf(1.0 / per_decade as f64).ln();
        let count = ((hi / lo).ln() / step).floor() as usize + 1;
        let points = (0..count).map(|i| lo * (i as f64 * step).exp()).collect();
        Ok(Self { points, per_decade })
    }

    /// 64 points per decade over `[2^-20, 2^20]`.
    pub fn standard() -> Self {
        Self::log_spaced(2f64.powi(-20), 2f64.powi(20), 64).expect("fixed range is valid")
    }
}

/// Outcome of the `Δ₂` estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Estimate {
    pub constant: f64,
    pub at: f64,
    /// Largest ratio within each consecutive block of `per_decade` samples.
    pub decade_max: Vec<f64>,
    /// True when the last three decade maxima each grow by more than 10%.
    pub diverging: bool,
    /// Samples where `Φ(2r)` was finite.
    pub used: usize,
}

impl Delta2Estimate {
    pub fn report(&self) -> ConditionReport {
        let mut r = ConditionReport::new("delta2", self.constant, Witness::Level(self.at), self.used);
        if self.diverging {
            r.notes.push("constant grows across sample decades; not Δ₂ on the samples".into());
        }
        r
    }
}

fn young_positive(phi: &YoungFunction, r: f64) -> Result<f64> {
    let v = phi.evaluate(r);
    if !(v > 0.0) {
        return Err(Error::InvalidYoungFunction(format!("{phi} vanishes at r = {r}")));
    }
    Ok(v)
}

/// `max_r Φ(2r)/Φ(r)` over the samples where `Φ(2r)` is finite.
pub fn young_delta2_constant(phi: &YoungFunction, sample: &YoungSample) -> Result<Delta2Estimate> {
    let mut ratios = Vec::new();
    for &r in &sample.points {
        let lo = young_positive(phi, r)?;
        let hi = phi.evaluate(2.0 * r);
        if hi.is_finite() {
            ratios.push((hi / lo, r));
        }
    }
    let (constant, at) = argmax(ratios.iter().copied())
        .ok_or_else(|| Error::NumericOverflow(format!("{phi} overflows on every sample")))?;
    let decade_max: Vec<f64> = ratios
        .chunks(sample.per_decade)
        .map(|c| c.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let diverging = decade_max.len() >= 4
        && decade_max[decade_max.len() - 4..]
            .windows(2)
            .all(|w| w[1] > 1.1 * w[0]);
    Ok(Delta2Estimate {
        constant,
        at,
        decade_max,
        diverging,
        used: ratios.len(),
    })
}

/// The search grid `k = 2^{i/64}`, `i = 1..=384`, i.e. `1.011 … 64`.
pub fn nabla2_search_grid() -> Vec<f64> {
    (1..=384).map(|i| (i as f64 / 64.0).exp2()).collect()
}

/// Smallest `k` on [`nabla2_search_grid`] with `2k Φ(r) ≤ Φ(kr)` at every
/// sample where `Φ(kr)` is finite; `None` if there is none.
pub fn young_nabla2_constant(phi: &YoungFunction, sample: &YoungSample) -> Result<Option<f64>> {
    let base: Vec<f64> = sample
        .points
        .iter()
        .map(|&r| young_positive(phi, r))
        .collect::<Result<_>>()?;
    for k in nabla2_search_grid() {
        let mut ok = true;
        let mut any = false;
        for (&r, &v) in sample.points.iter().zip(&base) {
            let big = phi.evaluate(k * r);
            if !big.is_finite() {
                continue;
            }
            any = true;
            if 2.0 * k * v > big {
                ok = false;
                break;
            }
        }
        if ok && any {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn nabla2_report(phi: &YoungFunction, sample: &YoungSample) -> Result<ConditionReport> {
    let k = young_nabla2_constant(phi, sample)?;
    let mut r = ConditionReport::new("nabla2", 0.0, Witness::None, sample.points.len());
    r.constant = k;
    if k.is_none() {
        r.notes.push("no k up to 64 satisfies the condition on the samples".into());
    }
    Ok(r)
}

/// `Φ_θ(t) = ∫_0^{t^θ} Φ(s)/s ds`.
pub fn phi_theta(phi: &YoungFunction, theta: f64) -> Result<YoungFunction> {
    phi.integrated(theta)
}

/// Centers of the dyadic cubes of `grid` and the half side lengths
/// `2^{-k-1}`, `k = 0..=L`.
fn phi_samples(grid: DyadicGrid) -> (Vec<Vec<f64>>, Vec<f64>) {
    let centers = grid
        .base_cube()
        .dyadic_descendants()
        .expect("the base cube has a power-of-two side")
        .iter()
        .map(|q| q.center(grid)[..grid.dim()].to_vec())
        .collect();
    let radii = (0..=grid.level()).map(|k| (-(k as f64) - 1.0).exp2()).collect();
    (centers, radii)
}

/// `(max φ(x,r)/φ(x,s) over r ≥ s, max φ(x,r)/φ(y,r) over |x - y| ≤ r)` on
/// dyadic cube centers and dyadic radii.
pub fn phi_regularity(phi: &PhiParameter, grid: DyadicGrid) -> Result<(ConditionReport, ConditionReport)> {
    let (centers, radii) = phi_samples(grid);
    let mut table = Vec::with_capacity(centers.len());
    for x in &centers {
        let row: Vec<f64> = radii.iter().map(|&r| phi.evaluate(x, r)).collect();
        if let Some(v) = row.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Contract(format!("φ = {v} at x = {x:?}")));
        }
        table.push(row);
    }
    let mut dec = (1.0f64, Witness::None);
    for (x, row) in centers.iter().zip(&table) {
        for (i, &r) in radii.iter().enumerate() {
            for (j, &s) in radii.iter().enumerate() {
                if r >= s {
                    let v = row[i] / row[j];
                    if v > dec.0 {
                        dec = (v, Witness::Pair { x: x.clone(), y: x.clone(), r: s });
                    }
                }
            }
        }
    }
    let mut near = (1.0f64, Witness::None);
    let mut pairs = 0;
    for (a, x) in centers.iter().enumerate() {
        for (b, y) in centers.iter().enumerate().skip(a + 1) {
            let d = x.iter().zip(y).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt();
            for (i, &r) in radii.iter().enumerate() {
                if d <= r {
                    pairs += 1;
                    let v = (table[a][i] / table[b][i]).max(table[b][i] / table[a][i]);
                    if v > near.0 {
                        near = (v, Witness::Pair { x: x.clone(), y: y.clone(), r });
                    }
                }
            }
        }
    }
    let n = centers.len() * radii.len();
    Ok((
        ConditionReport::new("phi-almost-decreasing", dec.0, dec.1, n * radii.len()),
        ConditionReport::new("phi-comparability", near.0, near.1, pairs),
    ))
}

/// `(lh₀, lh_∞)`: `lh₀ = max |p(x) - p(y)| (-ln|x - y|)` over cell-center
/// pairs with `|x - y| < 1/2`; `lh_∞ = max |p(x) - p_∞| ln(e + |x|)` with
/// `p_∞` the exponent on the cell holding the base-cube center.
pub fn log_holder_constants(p: &VariableExponent) -> (ConditionReport, ConditionReport) {
    let grid = p.grid();
    let centers: Vec<[f64; 2]> = (0..grid.cell_count()).map(|i| grid.cell_center(i)).collect();
    let dim = grid.dim();
    let dist = |a: &[f64; 2], b: &[f64; 2]| (0..dim).map(|k| (a[k] - b[k]).powi(2)).sum::<f64>().sqrt();
    let rows: Vec<(f64, Witness)> = (0..centers.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (0.0f64, Witness::None);
            for j in i + 1..centers.len() {
                let d = dist(&centers[i], &centers[j]);
                if d < 0.5 {
                    let v = (p.at(i) - p.at(j)).abs() * -d.ln();
                    if v > best.0 {
                        best = (v, Witness::Pair {
                            x: centers[i][..dim].to_vec(),
                            y: centers[j][..dim].to_vec(),
                            r: d,
                        });
                    }
                }
            }
            best
        })
        .collect();
    let (lh0, w0) = argmax(rows).unwrap_or((0.0, Witness::None));
    let mid = grid.index([grid.side_cells() / 2, if dim == 2 { grid.side_cells() / 2 } else { 0 }]);
    let p_inf = p.at(mid);
    let origin = [0.0; 2];
    let (lhi, wi) = argmax((0..centers.len()).map(|i| {
        let v = (p.at(i) - p_inf).abs() * (std::f64::consts::E + dist(&centers[i], &origin)).ln();
        (v, Witness::Pair { x: centers[i][..dim].to_vec(), y: Vec::new(), r: 0.0 })
    }))
    .unwrap_or((0.0, Witness::None));
    let pairs = centers.len() * (centers.len().saturating_sub(1)) / 2;
    let mut inf = ConditionReport::new("log-holder-infinity", lhi, wi, centers.len());
    inf.notes.push("vacuous on a bounded base cube; not a pass/fail criterion".into());
    (ConditionReport::new("log-holder-local", lh0, w0, pairs), inf)
}
