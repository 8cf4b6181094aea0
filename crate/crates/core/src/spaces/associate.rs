use crate::error::Result;
use crate::grid::{Cube, DyadicGrid, GridFunction};
use crate::spaces::{SpaceSpec, Weight};
use crate::sum::pairwise_sum;

/// `‖χ_Q‖_{X'} = sup_{‖g‖_X ≤ 1} ∫_Q |g|`.
#[derive(Debug, Clone)]
pub struct AssociateNorm {
    pub value: f64,
    /// False when `value` is only the best lower bound the ascent found.
    pub certified: bool,
    /// A `g ≥ 0` supported on `Q` with `∫_Q g / ‖g‖_X = value`.
    pub extremal: GridFunction,
}

const MAX_SWEEPS: usize = 500;
const MIN_GAIN: f64 = 1e-10;
const MIN_STEP: f64 = 1e-6;

/// Closed forms from the Hölder extremal for `L^p` and `L^p(w)`; a
/// coordinate-ascent lower bound for every other space.
///
/// For `L^p(w)`, `p > 1`: `(∫_Q w^{1-p'})^{1/p'}`, extremal `w^{1-p'} χ_Q`.
/// For `p = 1`: `1 / min_Q w`, extremal the indicator of the minimising cell.
pub fn associate_norm_indicator(x: &SpaceSpec, grid: DyadicGrid, q: &Cube) -> Result<AssociateNorm> {
    grid.check_cube(q)?;
    x.check_grid(grid)?;
    let uniform = Weight::uniform();
    let closed = match x {
        SpaceSpec::Lp { p } => Some((*p, &uniform)),
        SpaceSpec::WeightedLp { p, weight } => Some((*p, weight)),
        _ => None,
    };
    let cells = grid.cells(q);
    let vol = grid.cell_volume();
    if let Some((p, w)) = closed {
        if p == 1.0 {
            let best = cells
                .iter()
                .copied()
                .min_by(|&a, &b| w.value(a).total_cmp(&w.value(b)).then(a.cmp(&b)))
                .expect("cubes are nonempty");
            return Ok(AssociateNorm {
                value: 1.0 / w.value(best),
                certified: true,
                extremal: GridFunction::indicator_of_cells(grid, &[best])?,
            });
        }
        let conj = p / (p - 1.0);
        let mut g = vec![0.0; grid.cell_count()];
        let mut terms = Vec::with_capacity(cells.len());
        for &c in &cells {
            let v = if w.is_uniform() { 1.0 } else { w.value(c).powf(1.0 - conj) };
            g[c] = v;
            terms.push(v * vol);
        }
        return Ok(AssociateNorm {
            value: super::root(pairwise_sum(&terms), conj),
            certified: true,
            extremal: GridFunction::new(grid, g)?,
        });
    }
    ascend(x, grid, &cells)
}

/// Maximises `∫_Q g / ‖g‖_X` over `g ≥ 0` on `Q` by multiplicative
/// coordinate moves, starting from `χ_Q`; the step halves whenever a sweep
/// gains less than `MIN_GAIN` relatively.
fn ascend(x: &SpaceSpec, grid: DyadicGrid, cells: &[usize]) -> Result<AssociateNorm> {
    let vol = grid.cell_volume();
    let mut g = vec![1.0; cells.len()];
    let ratio = |g: &[f64]| -> Result<f64> {
        let mut full = vec![0.0; grid.cell_count()];
        for (&c, &v) in cells.iter().zip(g) {
            full[c] = v;
        }
        let norm = x.quasi_norm(&GridFunction::new(grid, full)?)?;
        Ok(pairwise_sum(g) * vol / norm)
    };
    let mut best = ratio(&g)?;
    let mut step = 1.0;
    for _ in 0..MAX_SWEEPS {
        let before = best;
        for i in 0..g.len() {
            let old = g[i];
            for factor in [1.0 + step, 1.0 / (1.0 + step)] {
                g[i] = old * factor;
                let r = ratio(&g)?;
                if r > best {
                    best = r;
                    break;
                }
                g[i] = old;
            }
        }
        let top = g.iter().copied().fold(0.0, f64::max);
        g.iter_mut().for_each(|v| *v /= top);
        if best - before <= MIN_GAIN * before {
            if step < MIN_STEP {
                break;
            }
            step *= 0.5;
        }
    }
    let mut full = vec![0.0; grid.cell_count()];
    for (&c, &v) in cells.iter().zip(&g) {
        full[c] = v;
    }
    Ok(AssociateNorm {
        value: best,
        certified: false,
        extremal: GridFunction::new(grid, full)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::YoungFunction;

    fn grid(level: u32) -> DyadicGrid {
        DyadicGrid::new(1, level).unwrap()
    }

    #[test]
    fn lebesgue_closed_forms() {
        let g = grid(4);
        for q in g.enumerate_cubes() {
            let m = q.measure(g);
            for p in [1.5, 2.0, 3.0] {
                let a = associate_norm_indicator(&SpaceSpec::lp(p).unwrap(), g, &q).unwrap();
                assert!(a.certified);
                assert!((a.value - m.powf(1.0 - 1.0 / p)).abs() < 1e-14);
            }
            let a = associate_norm_indicator(&SpaceSpec::lp(1.0).unwrap(), g, &q).unwrap();
            assert_eq!(a.value, 1.0);
        }
        let q = g.cube(&[0], 8).unwrap();
        let w = SpaceSpec::weighted_lp(2.0, Weight::uniform()).unwrap();
        let a = associate_norm_indicator(&w, g, &q).unwrap();
        assert!((a.value - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn extremal_attains_value() {
        let g = grid(4);
        let w = Weight::field(GridFunction::from_fn(g, |x| x[0].sqrt()).unwrap()).unwrap();
        for x in [SpaceSpec::weighted_lp(3.0, w.clone()).unwrap(), SpaceSpec::weighted_lp(1.0, w).unwrap()] {
            for q in g.enumerate_cubes() {
                let a = associate_norm_indicator(&x, g, &q).unwrap();
                let e = &a.extremal;
                let ratio = e.integral() / x.quasi_norm(e).unwrap();
                assert!((ratio - a.value).abs() <= 1e-12 * a.value, "{x} {q}");
            }
        }
    }

    #[test]
    fn ascent_recovers_lp_value_through_orlicz() {
        // L^Φ with Φ(t) = t² is L²; the generic ascent should find |Q|^{1/2}
        // from below.
        let g = grid(3);
        let x = SpaceSpec::orlicz(YoungFunction::power(2.0).unwrap()).unwrap();
        let q = g.cube(&[1], 3).unwrap();
        let a = associate_norm_indicator(&x, g, &q).unwrap();
        assert!(!a.certified);
        let exact = q.measure(g).sqrt();
        assert!(a.value <= exact * (1.0 + 1e-9));
        assert!(a.value >= exact * (1.0 - 1e-6));
    }

    #[test]
    fn ascent_on_l1_like_space_concentrates() {
        // Morrey with p = q = 1 is L¹ on the grid; the dual value for χ_Q is 1.
        let g = grid(3);
        let x = SpaceSpec::morrey(1.0, 1.0).unwrap();
        let q = g.cube(&[2], 4).unwrap();
        let a = associate_norm_indicator(&x, g, &q).unwrap();
        assert!(a.value <= 1.0 + 1e-12);
        assert!(a.value >= 1.0 - 1e-4, "{}", a.value);
    }
}
