use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::spaces::Weight;
use crate::sum::pairwise_sum;

/// One step of a decreasing rearrangement: value `height` on an interval of
/// length `width` (in `w`-measure).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub height: f64,
    pub width: f64,
}

/// The decreasing rearrangement `f*_w` of `|f|` with respect to `w dx`.
///
/// Cells are sorted by `|f|` descending, ties by ascending cell index; each
/// contributes a plateau as wide as its `w`-measure.
pub fn weighted_rearrangement(f: &GridFunction, w: &Weight) -> Result<Vec<Plateau>> {
    w.check_grid(f.grid())?;
    let vol = f.grid().cell_volume();
    let mut cells: Vec<usize> = (0..f.values().len()).collect();
    // Stable sort keeps ascending index among equal magnitudes.
    cells.sort_by(|&a, &b| f.values()[b].abs().total_cmp(&f.values()[a].abs()));
    Ok(cells
        .into_iter()
        .map(|c| Plateau {
            height: f.values()[c].abs(),
            width: w.value(c) * vol,
        })
        .collect())
}

/// `‖f‖_{L^{p,q}(w)}`.
///
/// For `q < ∞` each plateau `[t₀, t₁)` contributes
/// `h^q ∫_{t₀}^{t₁} t^{q/p-1} dt = h^q (p/q)(t₁^{q/p} - t₀^{q/p})`; for `q = ∞`
/// the supremum of `t^{1/p} h` is approached at the right end of a plateau.
pub fn lorentz_norm(p: f64, q: f64, w: &Weight, f: &GridFunction) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidSpace(format!("Lorentz exponent p = {p} unsupported")));
    }
    if !(q > 0.0) {
        return Err(Error::InvalidSpace(format!("Lorentz exponent q = {q} must be positive")));
    }
    let plateaus = weighted_rearrangement(f, w)?;
    let mut t0 = 0.0;
    if q.is_infinite() {
        let mut best: f64 = 0.0;
        for pl in plateaus.iter().take_while(|pl| pl.height > 0.0) {
            let t1 = t0 + pl.width;
            best = best.max(t1.powf(1.0 / p) * pl.height);
            t0 = t1;
        }
        return Ok(best);
    }
    let r = q / p;
    let mut terms = Vec::with_capacity(plateaus.len());
    for pl in plateaus.iter().take_while(|pl| pl.height > 0.0) {
        let t1 = t0 + pl.width;
        let span = if r == 1.0 { t1 - t0 } else { t1.powf(r) - t0.powf(r) };
        terms.push(super::abs_pow(pl.height, q) * span / r);
        t0 = t1;
    }
    Ok(super::root(pairwise_sum(&terms), q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DyadicGrid;

    fn f(level: u32, v: &[f64]) -> GridFunction {
        GridFunction::new(DyadicGrid::new(1, level).unwrap(), v.to_vec()).unwrap()
    }

    #[test]
    fn rearrangement_examples() {
        let expect = vec![
            Plateau { height: 3.0, width: 0.5 },
            Plateau { height: 1.0, width: 0.5 },
        ];
        assert_eq!(weighted_rearrangement(&f(1, &[3.0, 1.0]), &Weight::uniform()).unwrap(), expect);
        assert_eq!(weighted_rearrangement(&f(1, &[1.0, -3.0]), &Weight::uniform()).unwrap(), expect);
        let w = Weight::field(f(1, &[2.0, 4.0])).unwrap();
        assert_eq!(
            weighted_rearrangement(&f(1, &[3.0, 1.0]), &w).unwrap(),
            vec![
                Plateau { height: 3.0, width: 1.0 },
                Plateau { height: 1.0, width: 2.0 },
            ]
        );
    }

    #[test]
    fn norm_examples() {
        let chi = f(2, &[1.0, 0.0, 0.0, 0.0]);
        let u = Weight::uniform();
        assert_eq!(lorentz_norm(2.0, 2.0, &u, &chi).unwrap(), 0.5);
        assert_eq!(lorentz_norm(2.0, f64::INFINITY, &u, &chi).unwrap(), 0.5);
        assert_eq!(lorentz_norm(2.0, 1.0, &u, &f(2, &[0.0; 4])).unwrap(), 0.0);
        assert!(lorentz_norm(f64::INFINITY, 1.0, &u, &chi).is_err());
    }

    #[test]
    fn indicator_closed_form() {
        // ‖χ_E‖_{L^{p,q}} = (p/q)^{1/q} |E|^{1/p}.
        let chi = f(3, &[0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let (p, q): (f64, f64) = (2.0, 1.0);
        let expect = (p / q).powf(1.0 / q) * (3.0f64 / 8.0).powf(1.0 / p);
        let got = lorentz_norm(p, q, &Weight::uniform(), &chi).unwrap();
        assert!((got - expect).abs() < 1e-15);
    }
}
