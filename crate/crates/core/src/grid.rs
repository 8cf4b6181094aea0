//! Dyadic grids over `[0,1)^n`, grid-aligned cubes and piecewise-constant functions.
//!
//! Cells are indexed in row-major order: in two dimensions the cell with
//! coordinates `(i, j)` (`i` along `x₁`) has index `i * side + j`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::sum::{pairwise_mean, pairwise_sum};

/// Largest supported value of `dim * level`.
const MAX_CELLS_LOG2: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicGrid {
    dim: usize,
    level: u32,
}

impl DyadicGrid {
    /// A grid of `2^level` cells per side on `[0,1)^dim`.
    ///
    /// Level 0 (a single cell) is accepted; it is the target of rescaling a
    /// single-cell cube onto the unit cube.
    pub fn new(dim: usize, level: u32) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if dim as u32 * level > MAX_CELLS_LOG2 {
            return Err(Error::InvalidGrid(format!(
                "level {level} too fine for dimension {dim}"
            )));
        }
        Ok(Self { dim, level })
    }

    pub fn dim(self) -> usize {
        self.dim
    }

    pub fn level(self) -> u32 {
        self.level
    }

    /// Cells along each axis.
    pub fn side_cells(self) -> usize {
        1 << self.level
    }

    pub fn cell_count(self) -> usize {
        1 << (self.dim as u32 * self.level)
    }

    /// Side length `2^-L` of a cell, exact in binary floating point.
    pub fn cell_side(self) -> f64 {
        1.0 / self.side_cells() as f64
    }

    pub fn cell_volume(self) -> f64 {
        1.0 / self.cell_count() as f64
    }

    pub fn coords(self, index: usize) -> [usize; 2] {
        match self.dim {
            1 => [index, 0],
            _ => [index / self.side_cells(), index % self.side_cells()],
        }
    }

    pub fn index(self, coords: [usize; 2]) -> usize {
        match self.dim {
            1 => coords[0],
            _ => coords[0] * self.side_cells() + coords[1],
        }
    }

    pub fn cell_center(self, index: usize) -> [f64; 2] {
        let h = self.cell_side();
        let c = self.coords(index);
        let mut x = [0.0; 2];
        for k in 0..self.dim {
            x[k] = (c[k] as f64 + 0.5) * h;
        }
        x
    }

    /// True when every coordinate of `x` is a multiple of the cell side inside `[0,1]`.
    pub fn is_vertex(self, x: &[f64]) -> bool {
        x.len() == self.dim
            && x.iter().all(|&v| {
                let s = v * self.side_cells() as f64;
                (0.0..=1.0).contains(&v) && s == s.round()
            })
    }

    pub fn cube(self, corner: &[usize], side_cells: usize) -> Result<Cube> {
        if corner.len() != self.dim {
            return Err(Error::InvalidCube(format!(
                "corner has {} coordinates, grid has dimension {}",
                corner.len(),
                self.dim
            )));
        }
        let mut c = [0; 2];
        c[..self.dim].copy_from_slice(corner);
        let q = Cube {
            dim: self.dim,
            corner: c,
            side: side_cells,
        };
        self.check_cube(&q)?;
        Ok(q)
    }

    pub fn base_cube(self) -> Cube {
        Cube {
            dim: self.dim,
            corner: [0, 0],
            side: self.side_cells(),
        }
    }

    pub fn cell_cube(self, index: usize) -> Cube {
        Cube {
            dim: self.dim,
            corner: self.coords(index),
            side: 1,
        }
    }

    pub fn check_cube(self, q: &Cube) -> Result<()> {
        let s = self.side_cells();
        if q.dim != self.dim {
            return Err(Error::InvalidCube(format!(
                "cube of dimension {} on a grid of dimension {}",
                q.dim, self.dim
            )));
        }
        if q.side == 0 || q.corner[..self.dim].iter().any(|&c| c + q.side > s) {
            return Err(Error::InvalidCube(format!(
                "cube {q} does not fit in a grid with {s} cells per side"
            )));
        }
        Ok(())
    }

    /// Every grid-aligned cube inside the base cube, each exactly once,
    /// ordered by side length and then by corner in row-major order.
    pub fn enumerate_cubes(self) -> Vec<Cube> {
        let s = self.side_cells();
        let mut out = Vec::with_capacity(self.cube_count());
        for side in 1..=s {
            let positions = s - side + 1;
            match self.dim {
                1 => out.extend((0..positions).map(|i| Cube {
                    dim: 1,
                    corner: [i, 0],
                    side,
                })),
                _ => {
                    for i in 0..positions {
                        out.extend((0..positions).map(|j| Cube {
                            dim: 2,
                            corner: [i, j],
                            side,
                        }));
                    }
                }
            }
        }
        out
    }

    pub fn cube_count(self) -> usize {
        let s = self.side_cells();
        (1..=s).map(|side| (s - side + 1).pow(self.dim as u32)).sum()
    }

    /// Cell indices of `q` in ascending order.
    pub fn cells(self, q: &Cube) -> Vec<usize> {
        let s = self.side_cells();
        match self.dim {
            1 => (q.corner[0]..q.corner[0] + q.side).collect(),
            _ => {
                let mut out = Vec::with_capacity(q.side * q.side);
                for i in q.corner[0]..q.corner[0] + q.side {
                    out.extend((q.corner[1]..q.corner[1] + q.side).map(|j| i * s + j));
                }
                out
            }
        }
    }
}

impl fmt::Display for DyadicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} L={}", self.dim, self.level)
    }
}

/// An axis-parallel cube made of whole grid cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    dim: usize,
    corner: [usize; 2],
    side: usize,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cell coordinates of the lower corner.
    pub fn corner(&self) -> &[usize] {
        &self.corner[..self.dim]
    }

    pub fn side_cells(&self) -> usize {
        self.side
    }

    pub fn cell_count(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    /// `ℓ(Q)`.
    pub fn side_length(&self, grid: DyadicGrid) -> f64 {
        self.side as f64 * grid.cell_side()
    }

    /// `|Q|`.
    pub fn measure(&self, grid: DyadicGrid) -> f64 {
        self.cell_count() as f64 * grid.cell_volume()
    }

    pub fn center(&self, grid: DyadicGrid) -> [f64; 2] {
        let h = grid.cell_side();
        let mut x = [0.0; 2];
        for (xk, &c) in x.iter_mut().zip(&self.corner[..self.dim]) {
            *xk = (c as f64 + 0.5 * self.side as f64) * h;
        }
        x
    }

    pub fn contains_coords(&self, c: [usize; 2]) -> bool {
        (0..self.dim).all(|k| c[k] >= self.corner[k] && c[k] < self.corner[k] + self.side)
    }

    pub fn contains(&self, other: &Cube) -> bool {
        other.dim == self.dim
            && (0..self.dim).all(|k| {
                other.corner[k] >= self.corner[k]
                    && other.corner[k] + other.side <= self.corner[k] + self.side
            })
    }

    /// Number of cells shared with `other`.
    pub fn overlap_cells(&self, other: &Cube) -> usize {
        (0..self.dim)
            .map(|k| {
                let lo = self.corner[k].max(other.corner[k]);
                let hi = (self.corner[k] + self.side).min(other.corner[k] + other.side);
                hi.saturating_sub(lo)
            })
            .product()
    }

    pub fn has_power_of_two_side(&self) -> bool {
        self.side.is_power_of_two()
    }

    fn require_power_of_two(&self) -> Result<()> {
        if self.has_power_of_two_side() {
            Ok(())
        } else {
            Err(Error::UnsupportedCube(format!(
                "cube {self} has a side of {} cells, not a power of two",
                self.side
            )))
        }
    }

    /// The `2^n` halves of a cube with an even side, in row-major order.
    pub fn children(&self) -> Vec<Cube> {
        if self.side < 2 {
            return Vec::new();
        }
        let half = self.side / 2;
        let offsets: &[[usize; 2]] = match self.dim {
            1 => &[[0, 0], [1, 0]],
            _ => &[[0, 0], [0, 1], [1, 0], [1, 1]],
        };
        offsets
            .iter()
            .map(|o| Cube {
                dim: self.dim,
                corner: [self.corner[0] + o[0] * half, self.corner[1] + o[1] * half],
                side: half,
            })
            .collect()
    }

    /// `𝒟(Q)`: all cubes reachable by repeated bisection, `Q` first, then
    /// generation by generation down to single cells.
    pub fn dyadic_descendants(&self) -> Result<Vec<Cube>> {
        self.require_power_of_two()?;
        let mut out = vec![*self];
        let mut start = 0;
        while out[start].side > 1 {
            let end = out.len();
            for i in start..end {
                let kids = out[i].children();
                out.extend(kids);
            }
            start = end;
        }
        Ok(out)
    }

    /// True when `self` is obtained from `root` by finitely many bisections.
    pub fn is_dyadic_descendant_of(&self, root: &Cube) -> bool {
        if !root.has_power_of_two_side() || !root.contains(self) || !self.side.is_power_of_two() {
            return false;
        }
        (0..self.dim).all(|k| (self.corner[k] - root.corner[k]).is_multiple_of(self.side))
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let corner: Vec<String> = self.corner().iter().map(|c| c.to_string()).collect();
        write!(f, "{}:{}", corner.join(","), self.side)
    }
}

impl FromStr for Cube {
    type Err = Error;

    /// Parses `c0[,c1]:side`; the result still has to be checked against a grid.
    fn from_str(s: &str) -> Result<Self> {
        let (corner, side) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("cube `{s}` is not of the form corner:side")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("cube `{s}`: {e}")))
        };
        let coords = corner.split(',').map(parse).collect::<Result<Vec<_>>>()?;
        if coords.is_empty() || coords.len() > 2 {
            return Err(Error::Parse(format!("cube `{s}` must have 1 or 2 corner coordinates")));
        }
        let mut c = [0; 2];
        c[..coords.len()].copy_from_slice(&coords);
        Ok(Cube {
            dim: coords.len(),
            corner: c,
            side: parse(side)?,
        })
    }
}

/// A finite real function, constant on each cell of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: DyadicGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: DyadicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::InvalidFunction(format!(
                "{} values for {} cells",
                values.len(),
                grid.cell_count()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!(
                "value {} at cell {i} is not finite",
                values[i]
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: DyadicGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.cell_count()],
        }
    }

    pub fn constant(grid: DyadicGrid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.cell_count()])
    }

    /// Samples `f` at cell centers.
    pub fn from_fn(grid: DyadicGrid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.cell_count())
            .map(|i| f(&grid.cell_center(i)[..grid.dim()]))
            .collect();
        Self::new(grid, values)
    }

    /// `χ_Q`.
    pub fn indicator(grid: DyadicGrid, q: &Cube) -> Result<Self> {
        grid.check_cube(q)?;
        let mut values = vec![0.0; grid.cell_count()];
        for c in grid.cells(q) {
            values[c] = 1.0;
        }
        Ok(Self { grid, values })
    }

    /// Indicator of an arbitrary set of cells.
    pub fn indicator_of_cells(grid: DyadicGrid, cells: &[usize]) -> Result<Self> {
        let mut values = vec![0.0; grid.cell_count()];
        for &c in cells {
            *values.get_mut(c).ok_or_else(|| {
                Error::InvalidFunction(format!("cell {c} outside a grid of {} cells", grid.cell_count()))
            })? = 1.0;
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> DyadicGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Applies `op` cellwise; fails if any result is not finite.
    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| op(v)).collect())
    }

    pub fn abs(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    pub fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_grid(other)?;
        Self::new(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::IncompatibleSpace(format!(
                "functions live on different grids ({} vs {})",
                self.grid, other.grid
            )))
        }
    }

    /// Values on the cells of `q`, ascending cell order.
    pub fn cube_values(&self, q: &Cube) -> Result<Vec<f64>> {
        self.grid.check_cube(q)?;
        Ok(self.grid.cells(q).into_iter().map(|c| self.values[c]).collect())
    }

    /// `f_Q`, the mean of the cell values of `q` (pairwise, ascending order).
    pub fn average(&self, q: &Cube) -> Result<f64> {
        Ok(pairwise_mean(&self.cube_values(q)?))
    }

    /// `(f - f_Q) χ_Q`.
    pub fn oscillation(&self, q: &Cube) -> Result<Self> {
        let mean = self.average(q)?;
        let mut values = vec![0.0; self.values.len()];
        for c in self.grid.cells(q) {
            values[c] = self.values[c] - mean;
        }
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// `f χ_Q`.
    pub fn restrict(&self, q: &Cube) -> Result<Self> {
        self.grid.check_cube(q)?;
        let mut values = vec![0.0; self.values.len()];
        for c in self.grid.cells(q) {
            values[c] = self.values[c];
        }
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// Inclusive per-axis cell ranges covering the nonzero cells.
    pub fn support_bbox(&self) -> Option<([usize; 2], [usize; 2])> {
        let mut lo = [usize::MAX; 2];
        let mut hi = [0; 2];
        let mut any = false;
        for (i, &v) in self.values.iter().enumerate() {
            if v != 0.0 {
                any = true;
                let c = self.grid.coords(i);
                for k in 0..2 {
                    lo[k] = lo[k].min(c[k]);
                    hi[k] = hi[k].max(c[k]);
                }
            }
        }
        any.then_some((lo, hi))
    }

    /// `δ^t f` with `t = 2^-j`: `g(x) = f(2^-j x)`, each source cell stretched
    /// over `2^{nj}` target cells. `f` must vanish outside `[0, 2^-j)^n`.
    pub fn dilate(&self, j: u32) -> Result<Self> {
        let level = self.grid.level;
        if j > level {
            return Err(Error::UnsupportedDilation(format!(
                "dilation exponent {j} exceeds grid level {level}"
            )));
        }
        let limit = self.grid.side_cells() >> j;
        for (i, &v) in self.values.iter().enumerate() {
            let c = self.grid.coords(i);
            if v != 0.0 && (0..self.grid.dim).any(|k| c[k] >= limit) {
                return Err(Error::UnsupportedDilation(format!(
                    "cell {i} lies outside [0, 2^-{j})^n and carries {v}"
                )));
            }
        }
        let values = (0..self.values.len())
            .map(|i| {
                let c = self.grid.coords(i);
                self.values[self.grid.index([c[0] >> j, c[1] >> j])]
            })
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// `x ↦ f(corner(Q) + ℓ(Q) x)` on a grid with as many cells per side as `Q`.
    pub fn rescale_to_unit(&self, q: &Cube) -> Result<Self> {
        self.grid.check_cube(q)?;
        q.require_power_of_two()?;
        let target = DyadicGrid::new(self.grid.dim, q.side.trailing_zeros())?;
        let values = self.cube_values(q)?;
        Ok(Self {
            grid: target,
            values,
        })
    }

    /// Averages blocks of cells down to a coarser level of the same dimension.
    pub fn coarsen(&self, level: u32) -> Result<Self> {
        if level > self.grid.level {
            return Err(Error::IncompatibleSpace(format!(
                "cannot coarsen level {} to finer level {level}",
                self.grid.level
            )));
        }
        let target = DyadicGrid::new(self.grid.dim, level)?;
        let block = 1usize << (self.grid.level - level);
        let values = (0..target.cell_count())
            .map(|i| {
                let c = target.coords(i);
                let q = Cube {
                    dim: self.grid.dim,
                    corner: [c[0] * block, c[1] * block],
                    side: block,
                };
                let vals: Vec<f64> = self.grid.cells(&q).into_iter().map(|k| self.values[k]).collect();
                pairwise_mean(&vals)
            })
            .collect();
        Ok(Self {
            grid: target,
            values,
        })
    }

    /// `∫ f` over the base cube.
    pub fn integral(&self) -> f64 {
        pairwise_sum(&self.values) * self.grid.cell_volume()
    }

    /// Text format: a header line `n L`, then one value per line in row-major
    /// cell order, each written so that it parses back to the same bits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.grid.dim, self.grid.level);
        for v in &self.values {
            out.push_str(&fmt_f64(*v));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty grid function file".into()))?;
        let mut parts = header.split_whitespace();
        let (dim, level) = match (parts.next(), parts.next(), parts.next()) {
            (Some(n), Some(l), None) => (
                n.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("header dimension `{n}`: {e}")))?,
                l.parse::<u32>()
                    .map_err(|e| Error::Parse(format!("header level `{l}`: {e}")))?,
            ),
            _ => return Err(Error::Parse(format!("header `{header}` is not `n L`"))),
        };
        let grid = DyadicGrid::new(dim, level)?;
        let values = lines
            .enumerate()
            .map(|(i, l)| {
                l.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("value {i} `{l}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, values)
    }
}
