//! Modulars and their Luxemburg norms `inf{λ > 0 : ρ(f/λ) ≤ 1}`.

use crate::error::{Error, Result};
use crate::grid::{Cube, GridFunction};
use crate::spaces::{VariableExponent, YoungFunction};
use crate::sum::pairwise_sum;

#[derive(Debug, Clone, Copy)]
pub enum ModularKind<'a> {
    /// `ρ(f) = ∫ Φ(|f|)`.
    Orlicz(&'a YoungFunction),
    /// `ρ(f) = ∫ |f|^{p(x)}`.
    Variable(&'a VariableExponent),
}

impl ModularKind<'_> {
    fn term(&self, cell: usize, t: f64) -> f64 {
        match self {
            Self::Orlicz(phi) => phi.evaluate(t),
            Self::Variable(p) => {
                let e = p.at(cell);
                if e == 1.0 {
                    t
                } else if e == 2.0 {
                    t * t
                } else {
                    t.powf(e)
                }
            }
        }
    }

    fn check(&self, f: &GridFunction) -> Result<()> {
        match self {
            Self::Variable(p) if p.grid() != f.grid() => Err(Error::IncompatibleSpace(format!(
                "exponent lives on {}, function on {}",
                p.grid(),
                f.grid()
            ))),
            _ => Ok(()),
        }
    }
}

/// `∫ Φ(|f|/λ)` (resp. `∫ (|f|/λ)^{p(x)}`) as an exact cell sum. Overflow
/// yields `+∞`, which keeps the value nonincreasing in `λ`.
pub fn modular(kind: ModularKind<'_>, f: &GridFunction, lambda: f64) -> Result<f64> {
    kind.check(f)?;
    if !(lambda > 0.0) {
        return Err(Error::Contract(format!("modular needs λ > 0, got {lambda}")));
    }
    let terms = Terms::all(f);
    Ok(terms.modular(kind, lambda))
}

/// Luxemburg norm of `f` over the whole base cube.
pub fn luxemburg_norm(kind: ModularKind<'_>, f: &GridFunction) -> Result<f64> {
    kind.check(f)?;
    Terms::all(f).solve(kind)
}

/// Luxemburg norm for the normalised modular `(1/|Q|) ∫_Q ρ(|f|/λ)`.
pub fn normalized_luxemburg(kind: ModularKind<'_>, f: &GridFunction, q: &Cube) -> Result<f64> {
    kind.check(f)?;
    let cells = f.grid().cells(q);
    let weight = 1.0 / cells.len() as f64;
    let terms = Terms {
        cells: cells
            .into_iter()
            .filter(|&c| f.values()[c] != 0.0)
            .map(|c| (c, f.values()[c].abs()))
            .collect(),
        weight,
    };
    terms.solve(kind)
}

/// Nonzero magnitudes with the measure each cell carries.
struct Terms {
    cells: Vec<(usize, f64)>,
    weight: f64,
}

const MAX_ITER: usize = 200;
/// Target width of the final bracket on `ln λ`, i.e. relative width in `λ`.
/// Widened to a few ulps of `ln λ` when `λ` is extreme.
const LOG_TOL: f64 = 1e-14;

impl Terms {
    fn all(f: &GridFunction) -> Self {
        Self {
            cells: f
                .values()
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(c, v)| (c, v.abs()))
                .collect(),
            weight: f.grid().cell_volume(),
        }
    }

    fn modular(&self, kind: ModularKind<'_>, lambda: f64) -> f64 {
        let vals: Vec<f64> = self
            .cells
            .iter()
            .map(|&(c, a)| kind.term(c, a / lambda) * self.weight)
            .collect();
        let s = pairwise_sum(&vals);
        if s.is_nan() {
            f64::INFINITY
        } else {
            s
        }
    }

    /// Brackets the crossing `ρ(λ) = 1` by doubling, then shrinks the bracket
    /// on `u = ln λ` with Illinois-modified false position on `ln ρ`, keeping
    /// every trial point a quarter of the tolerance inside the bracket so that
    /// convergence is always two-sided.
    fn solve(&self, kind: ModularKind<'_>) -> Result<f64> {
        let Some(start) = self.cells.iter().map(|c| c.1).reduce(f64::max) else {
            return Ok(0.0);
        };
        let eval = |u: f64| self.modular(kind, u.exp()).ln();
        let mut iter = 0;
        let mut u = start.ln();
        let mut fu = eval(u);
        let (mut lo, mut flo, mut hi, mut fhi);
        if fu > 0.0 {
            (lo, flo) = (u, fu);
            loop {
                u += std::f64::consts::LN_2;
                fu = eval(u);
                iter += 1;
                if fu <= 0.0 {
                    (hi, fhi) = (u, fu);
                    break;
                }
                (lo, flo) = (u, fu);
                if iter >= MAX_ITER {
                    return Err(self.no_convergence(kind));
                }
            }
        } else {
            (hi, fhi) = (u, fu);
            loop {
                u -= std::f64::consts::LN_2;
                fu = eval(u);
                iter += 1;
                if fu > 0.0 {
                    (lo, flo) = (u, fu);
                    break;
                }
                (hi, fhi) = (u, fu);
                if iter >= MAX_ITER {
                    return Err(self.no_convergence(kind));
                }
            }
        }

        let mut last_side = 0i8;
        let tol = LOG_TOL.max(8.0 * f64::EPSILON * lo.abs().max(hi.abs()));
        while hi - lo > tol {
            iter += 1;
            if iter > MAX_ITER {
                return Err(self.no_convergence(kind));
            }
            let mid = 0.5 * (lo + hi);
            let mut u = if flo.is_finite() && fhi.is_finite() && flo != fhi {
                hi - fhi * (hi - lo) / (fhi - flo)
            } else {
                mid
            };
            let guard = 0.25 * tol;
            if !(u.is_finite()) {
                u = mid;
            }
            u = u.clamp(lo + guard, hi - guard);
            let fu = eval(u);
            if fu == 0.0 {
                return Ok(u.exp());
            }
            if fu > 0.0 {
                (lo, flo) = (u, fu);
                if last_side == 1 {
                    fhi *= 0.5;
                }
                last_side = 1;
            } else {
                (hi, fhi) = (u, fu);
                if last_side == -1 {
                    flo *= 0.5;
                }
                last_side = -1;
            }
        }
        Ok(hi.exp())
    }

    fn no_convergence(&self, kind: ModularKind<'_>) -> Error {
        let name = match kind {
            ModularKind::Orlicz(phi) => format!("Orlicz modular {phi}"),
            ModularKind::Variable(_) => "variable exponent modular".to_string(),
        };
        Error::NonConvergence(format!("Luxemburg bracket for {name} after {MAX_ITER} steps"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DyadicGrid;
    use crate::spaces::SpaceSpec;

    fn grid(level: u32) -> DyadicGrid {
        DyadicGrid::new(1, level).unwrap()
    }

    #[test]
    fn modular_examples() {
        let sq = YoungFunction::power(2.0).unwrap();
        let f = GridFunction::new(grid(2), vec![2.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(modular(ModularKind::Orlicz(&sq), &f, 2.0).unwrap(), 0.25);
        let z = GridFunction::zeros(grid(2));
        assert_eq!(modular(ModularKind::Orlicz(&sq), &z, 0.3).unwrap(), 0.0);
        let one = GridFunction::constant(grid(3), 1.0).unwrap();
        let p1 = VariableExponent::constant(grid(3), 1.0).unwrap();
        assert_eq!(modular(ModularKind::Variable(&p1), &one, 1.0).unwrap(), 1.0);
        assert!(modular(ModularKind::Orlicz(&sq), &f, 0.0).is_err());
    }

    #[test]
    fn modular_overflow_is_infinite_and_monotone() {
        let e = YoungFunction::exp_minus_one();
        let f = GridFunction::new(grid(1), vec![1.0, 2.0]).unwrap();
        let tiny = modular(ModularKind::Orlicz(&e), &f, 1e-6).unwrap();
        assert_eq!(tiny, f64::INFINITY);
        let mut prev = f64::INFINITY;
        for k in -10..10 {
            let m = modular(ModularKind::Orlicz(&e), &f, (k as f64).exp2()).unwrap();
            assert!(m <= prev);
            prev = m;
        }
    }

    #[test]
    fn luxemburg_power_is_lp() {
        let f = GridFunction::from_fn(grid(5), |x| (9.0 * x[0]).cos() * 3.0 - 0.4).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let phi = YoungFunction::power(p).unwrap();
            let lux = luxemburg_norm(ModularKind::Orlicz(&phi), &f).unwrap();
            let lp = SpaceSpec::lp(p).unwrap().quasi_norm(&f).unwrap();
            assert!((lux - lp).abs() <= 1e-10 * lp, "p={p}: {lux} vs {lp}");
            let ex = VariableExponent::constant(grid(5), p).unwrap();
            let var = luxemburg_norm(ModularKind::Variable(&ex), &f).unwrap();
            assert!((var - lp).abs() <= 1e-10 * lp, "p={p}: {var} vs {lp}");
        }
        let z = GridFunction::zeros(grid(5));
        let phi = YoungFunction::power_log(1.0).unwrap();
        assert_eq!(luxemburg_norm(ModularKind::Orlicz(&phi), &z).unwrap(), 0.0);
    }

    #[test]
    fn luxemburg_solves_modular_equation() {
        let f = GridFunction::from_fn(grid(4), |x| 1.0 / (x[0] + 0.05)).unwrap();
        for phi in [YoungFunction::power_log(1.0).unwrap(), YoungFunction::exp_minus_one()] {
            let n = luxemburg_norm(ModularKind::Orlicz(&phi), &f).unwrap();
            let at = modular(ModularKind::Orlicz(&phi), &f, n).unwrap();
            let below = modular(ModularKind::Orlicz(&phi), &f, n * (1.0 - 1e-9)).unwrap();
            assert!(at <= 1.0 && below > 1.0, "{phi}: {at} {below}");
        }
        // Exponents below one make a quasi-norm, still monotone.
        let p = VariableExponent::new(GridFunction::from_fn(grid(4), |x| 0.5 + x[0]).unwrap()).unwrap();
        let n = luxemburg_norm(ModularKind::Variable(&p), &f).unwrap();
        assert!(modular(ModularKind::Variable(&p), &f, n).unwrap() <= 1.0);
        assert!(modular(ModularKind::Variable(&p), &f, n * (1.0 - 1e-9)).unwrap() > 1.0);
    }

    #[test]
    fn normalized_constant() {
        // (1/|Q|)∫_Q Φ(c/λ) = Φ(c/λ) ≤ 1  ⇔  λ ≥ c / Φ^{-1}(1).
        let g = grid(4);
        let f = GridFunction::constant(g, 3.0).unwrap();
        let q = g.cube(&[5], 6).unwrap();
        let sq = YoungFunction::power(2.0).unwrap();
        let v = normalized_luxemburg(ModularKind::Orlicz(&sq), &f, &q).unwrap();
        assert!((v - 3.0).abs() < 1e-11);
    }
}
