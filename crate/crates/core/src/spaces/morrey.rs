use crate::error::{Error, Result};
use crate::grid::GridFunction;

/// `‖f‖_{M^p_q} = sup_Q |Q|^{1/p - 1/q} (∫_Q |f|^q)^{1/q}` over grid cubes.
///
/// Let `S` be the smallest grid cube (of side equal to the longest side of
/// the support's bounding box) that contains the support. For any cube `Q`,
/// `Q ∩ S` is a box with sides at most `ℓ(Q)`, which fits inside a subcube of
/// `S` of no larger measure and with the same integral; since `1/p - 1/q ≤ 0`
/// that subcube scores at least as high. So only subcubes of `S` are scanned,
/// with integrals read off a summed-area table.
pub fn morrey_norm(p: f64, q: f64, f: &GridFunction) -> Result<f64> {
    if !(1.0 <= q && q <= p && p.is_finite()) {
        return Err(Error::InvalidSpace(format!(
            "Morrey exponents need 1 ≤ q ≤ p < ∞, got p={p}, q={q}"
        )));
    }
    let grid = f.grid();
    let Some((lo, hi)) = f.support_bbox() else {
        return Ok(0.0);
    };
    let dim = grid.dim();
    let n = grid.side_cells();
    let b = (0..dim).map(|k| hi[k] - lo[k] + 1).max().unwrap_or(1);
    let mut corner = [0usize; 2];
    for k in 0..dim {
        corner[k] = lo[k].min(n - b);
    }
    let vol = grid.cell_volume();
    let h = grid.cell_side();
    // |Q_t|^{q/p - 1} for side t; the q-th root is taken once at the end.
    let exponent = q / p - 1.0;
    let factor: Vec<f64> = (0..=b)
        .map(|t| ((t as f64 * h).powi(dim as i32)).powf(exponent))
        .collect();
    let term = |c: [usize; 2]| super::abs_pow(f.values()[grid.index(c)], q) * vol;

    let best = if dim == 1 {
        let mut prefix = vec![0.0; b + 1];
        for i in 0..b {
            prefix[i + 1] = prefix[i] + term([corner[0] + i, 0]);
        }
        let mut best: f64 = 0.0;
        for t in 1..=b {
            for i in 0..=(b - t) {
                best = best.max(factor[t] * (prefix[i + t] - prefix[i]));
            }
        }
        best
    } else {
        let w = b + 1;
        let mut sat = vec![0.0; w * w];
        for i in 0..b {
            let mut row = 0.0;
            for j in 0..b {
                row += term([corner[0] + i, corner[1] + j]);
                sat[(i + 1) * w + j + 1] = sat[i * w + j + 1] + row;
            }
        }
        let mut best: f64 = 0.0;
        for t in 1..=b {
            for i in 0..=(b - t) {
                for j in 0..=(b - t) {
                    let s = sat[(i + t) * w + j + t] - sat[i * w + j + t] - sat[(i + t) * w + j]
                        + sat[i * w + j];
                    best = best.max(factor[t] * s);
                }
            }
        }
        best
    };
    Ok(super::root(best, q))
}
