//! Sparse families from a Calderón–Zygmund stopping time on local
//! oscillations.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::grid::{Cube, DyadicGrid, GridFunction};
use crate::sum::pairwise_mean;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseEntry {
    pub cube: Cube,
    /// `E_Q` as ascending cell indices.
    pub e_cells: Vec<usize>,
    /// `(1/|Q|) ∫_Q |f - f_Q|`.
    pub osc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseFamily {
    pub grid: DyadicGrid,
    pub root: Cube,
    pub alpha: f64,
    /// Depth-first preorder: each cube precedes its stopping descendants.
    pub entries: Vec<SparseEntry>,
}

impl SparseFamily {
    /// Checks dyadic containment in the root, `E_Q ⊂ Q`, pairwise
    /// disjointness of the `E_Q`, and `|Q| ≤ 2|E_Q|`, all on cell counts.
    pub fn check_invariants(&self) -> Result<()> {
        let mut owner: Vec<Option<usize>> = vec![None; self.grid.cell_count()];
        for (k, e) in self.entries.iter().enumerate() {
            if !e.cube.is_dyadic_descendant_of(&self.root) {
                return Err(Error::Contract(format!(
                    "{} is not a dyadic subcube of {}",
                    e.cube, self.root
                )));
            }
            let inside = self.grid.cells(&e.cube);
            for &c in &e.e_cells {
                if inside.binary_search(&c).is_err() {
                    return Err(Error::Contract(format!("E_Q cell {c} lies outside {}", e.cube)));
                }
                if let Some(j) = owner[c] {
                    return Err(Error::Contract(format!(
                        "cell {c} belongs to E_Q of both {} and {}",
                        self.entries[j].cube, e.cube
                    )));
                }
                owner[c] = Some(k);
            }
            if inside.len() > 2 * e.e_cells.len() {
                return Err(Error::Contract(format!(
                    "{} has |E_Q| = {} of {} cells",
                    e.cube,
                    e.e_cells.len(),
                    inside.len()
                )));
            }
        }
        Ok(())
    }

    /// One header line, then `corner… side_cells e_cells osc` per entry.
    pub fn dump(&self) -> String {
        let mut out = format!(
            "# sparse alpha={} n={} L={} root={}\n",
            fmt_f64(self.alpha),
            self.grid.dim(),
            self.grid.level(),
            self.root
        );
        for e in &self.entries {
            for c in e.cube.corner() {
                let _ = write!(out, "{c} ");
            }
            let _ = writeln!(out, "{} {} {}", e.cube.side_cells(), e.e_cells.len(), fmt_f64(e.osc));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `(1/|Q|) ∫_Q |f - f_Q|` together with the cellwise `|f - f_Q|` on `Q`.
fn local_oscillation(f: &GridFunction, q: &Cube) -> Result<(f64, Vec<f64>)> {
    let mean = f.average(q)?;
    let dev: Vec<f64> = f.cube_values(q)?.into_iter().map(|v| (v - mean).abs()).collect();
    Ok((pairwise_mean(&dev), dev))
}

/// Builds the sparse family of `f` below `root`.
///
/// For the current cube `Q`, the stopping cubes are the maximal dyadic
/// `P ⊊ Q` with `(1/|P|) ∫_P |f - f_Q| > α osc(Q)`. Chebyshev gives
/// `Σ|P| < |Q|/α`, so `E_Q = Q \ ∪P` keeps at least half of `Q` when `α ≥ 2`.
/// The construction recurses into every stopping cube; cubes with zero
/// oscillation own themselves and stop.
pub fn cz_sparse(f: &GridFunction, root: &Cube, alpha: f64) -> Result<SparseFamily> {
    let grid = f.grid();
    grid.check_cube(root)?;
    if !root.has_power_of_two_side() {
        return Err(Error::UnsupportedCube(format!(
            "sparse root {root} needs a power-of-two side"
        )));
    }
    if !(alpha >= 2.0 && alpha.is_finite()) {
        return Err(Error::Contract(format!("stopping threshold α = {alpha} must be at least 2")));
    }
    let mut entries = Vec::new();
    let mut stack = vec![*root];
    while let Some(q) = stack.pop() {
        let (osc, dev) = local_oscillation(f, &q)?;
        if osc == 0.0 {
            entries.push(SparseEntry {
                cube: q,
                e_cells: grid.cells(&q),
                osc,
            });
            continue;
        }
        let stops = stopping_cubes(grid, &q, &dev, alpha * osc);
        let mut in_stop = vec![false; q.cell_count()];
        let local = |c: usize| {
            let xy = grid.coords(c);
            match grid.dim() {
                1 => xy[0] - q.corner()[0],
                _ => (xy[0] - q.corner()[0]) * q.side_cells() + (xy[1] - q.corner()[1]),
            }
        };
        for p in &stops {
            for c in grid.cells(p) {
                in_stop[local(c)] = true;
            }
        }
        let e_cells = grid
            .cells(&q)
            .into_iter()
            .filter(|&c| !in_stop[local(c)])
            .collect();
        entries.push(SparseEntry { cube: q, e_cells, osc });
        // Reverse so that popping visits stopping cubes in enumeration order.
        stack.extend(stops.into_iter().rev());
    }
    Ok(SparseFamily {
        grid,
        root: *root,
        alpha,
        entries,
    })
}

/// Maximal dyadic `P ⊊ Q` whose mean of `dev` exceeds `threshold`, in
/// breadth-first order. `dev` is indexed in `Q`'s local row-major order.
fn stopping_cubes(grid: DyadicGrid, q: &Cube, dev: &[f64], threshold: f64) -> Vec<Cube> {
    let side = q.side_cells();
    let mean_over = |p: &Cube| {
        let vals: Vec<f64> = grid
            .cells(p)
            .into_iter()
            .map(|c| {
                let xy = grid.coords(c);
                match grid.dim() {
                    1 => dev[xy[0] - q.corner()[0]],
                    _ => dev[(xy[0] - q.corner()[0]) * side + (xy[1] - q.corner()[1])],
                }
            })
            .collect();
        pairwise_mean(&vals)
    };
    let mut out = Vec::new();
    let mut queue: VecDeque<Cube> = q.children().into();
    while let Some(p) = queue.pop_front() {
        if mean_over(&p) > threshold {
            out.push(p);
        } else {
            queue.extend(p.children());
        }
    }
    out
}

/// `Σ_{Q ∈ S} osc(Q) χ_Q`, accumulated in entry order.
pub fn sparse_majorant(s: &SparseFamily, f: &GridFunction) -> Result<GridFunction> {
    if f.grid() != s.grid {
        return Err(Error::IncompatibleSpace(format!(
            "sparse family lives on {}, function on {}",
            s.grid,
            f.grid()
        )));
    }
    let mut out = vec![0.0; s.grid.cell_count()];
    for e in &s.entries {
        let (osc, _) = local_oscillation(f, &e.cube)?;
        for c in s.grid.cells(&e.cube) {
            out[c] += osc;
        }
    }
    GridFunction::new(s.grid, out)
}

/// `max_{x ∈ Q₀} |f(x) - f_{Q₀}| / Σ_{Q ∈ S} osc(Q) χ_Q(x)` with `0/0 = 0`
/// and `x/0 = +∞` for `x > 0`.
pub fn domination_constant(f: &GridFunction, root: &Cube, alpha: f64) -> Result<f64> {
    let s = cz_sparse(f, root, alpha)?;
    let majorant = sparse_majorant(&s, f)?;
    let mean = f.average(root)?;
    let mut worst: f64 = 0.0;
    for c in f.grid().cells(root) {
        let lhs = (f.values()[c] - mean).abs();
        let rhs = majorant.values()[c];
        let r = if lhs == 0.0 {
            0.0
        } else if rhs == 0.0 {
            f64::INFINITY
        } else {
            lhs / rhs
        };
        worst = worst.max(r);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SplitMix64;
    use proptest::prelude::*;

    fn line(v: &[f64]) -> GridFunction {
        let level = v.len().trailing_zeros();
        GridFunction::new(DyadicGrid::new(1, level).unwrap(), v.to_vec()).unwrap()
    }

    #[test]
    fn hand_traced_example() {
        let f = line(&[0.0, 0.0, 0.0, 8.0]);
        let root = f.grid().base_cube();
        let s = cz_sparse(&f, &root, 2.0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.entries[0].cube, root);
        assert_eq!(s.entries[0].e_cells, vec![0, 1, 2, 3]);
        assert_eq!(s.entries[0].osc, 3.0);
        assert_eq!(sparse_majorant(&s, &f).unwrap().values(), &[3.0; 4]);
        assert_eq!(domination_constant(&f, &root, 2.0).unwrap(), 2.0);
    }

    #[test]
    fn constant_function() {
        let g = DyadicGrid::new(2, 3).unwrap();
        let f = GridFunction::constant(g, -1.25).unwrap();
        let s = cz_sparse(&f, &g.base_cube(), 2.0).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.entries[0].e_cells.len(), 64);
        assert!(sparse_majorant(&s, &f).unwrap().is_zero());
        assert_eq!(domination_constant(&f, &g.base_cube(), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn spike_stops_below_root() {
        // A single large cell deep inside forces stopping cubes.
        let mut v = vec![0.0; 16];
        v[5] = 100.0;
        let f = line(&v);
        let s = cz_sparse(&f, &f.grid().base_cube(), 2.0).unwrap();
        assert!(s.len() > 1);
        s.check_invariants().unwrap();
        assert!(domination_constant(&f, &f.grid().base_cube(), 2.0).unwrap().is_finite());
    }

    #[test]
    fn rejects_bad_input() {
        let f = line(&[0.0; 8]);
        let q3 = f.grid().cube(&[0], 3).unwrap();
        assert!(matches!(cz_sparse(&f, &q3, 2.0), Err(Error::UnsupportedCube(_))));
        assert!(cz_sparse(&f, &f.grid().base_cube(), 1.5).is_err());
    }

    #[test]
    fn invariant_checker_catches_violations() {
        let f = line(&[0.0, 0.0, 0.0, 8.0]);
        let mut s = cz_sparse(&f, &f.grid().base_cube(), 2.0).unwrap();
        s.entries[0].e_cells = vec![0];
        assert!(s.check_invariants().is_err());
        let mut s = cz_sparse(&f, &f.grid().base_cube(), 2.0).unwrap();
        let twin = s.entries[0].clone();
        s.entries.push(twin);
        assert!(s.check_invariants().is_err());
    }

    #[test]
    fn dump_format() {
        let f = line(&[0.0, 0.0, 0.0, 8.0]);
        let s = cz_sparse(&f, &f.grid().base_cube(), 2.0).unwrap();
        assert_eq!(s.dump(), "# sparse alpha=2.0 n=1 L=2 root=0:4\n0 4 4 3.0\n");
    }

    #[test]
    fn two_dimensional_random() {
        let g = DyadicGrid::new(2, 4).unwrap();
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let v: Vec<f64> = (0..g.cell_count()).map(|_| rng.uniform() * 2.0 - 1.0).collect();
            let f = GridFunction::new(g, v).unwrap();
            for alpha in [2.0, 3.0] {
                let s = cz_sparse(&f, &g.base_cube(), alpha).unwrap();
                s.check_invariants().unwrap();
                assert!(domination_constant(&f, &g.base_cube(), alpha).unwrap().is_finite());
            }
        }
    }

    proptest! {
        #[test]
        fn invariants_and_affine_invariance(
            v in prop::collection::vec(-10.0f64..10.0, 32),
            k in -3i32..4,
            shift in -64i32..64,
        ) {
            let f = line(&v);
            let root = f.grid().base_cube();
            let s = cz_sparse(&f, &root, 2.0).unwrap();
            prop_assert!(s.check_invariants().is_ok());
            let total: usize = s.entries.iter().map(|e| e.e_cells.len()).sum();
            prop_assert!(total <= 32);
            let a = (k as f64).exp2();
            let b = shift as f64 * 0.125;
            let g = f.map(|x| a * x + b).unwrap();
            let t = cz_sparse(&g, &root, 2.0).unwrap();
            let cubes = |s: &SparseFamily| s.entries.iter().map(|e| (e.cube, e.e_cells.clone())).collect::<Vec<_>>();
            prop_assert_eq!(cubes(&s), cubes(&t));
        }
    }
}
