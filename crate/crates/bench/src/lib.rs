//! Shared inputs for the criterion benchmarks.

use campanato_core::corpus::{self, standard_exponent};
use campanato_core::{DyadicGrid, GridFunction, SpaceSpec, Weight, YoungFunction};

pub fn grid(dim: usize, level: u32) -> DyadicGrid {
    DyadicGrid::new(dim, level).expect("benchmark grids are valid")
}

/// A rough corpus member with stopping cubes at several scales.
pub fn rough(dim: usize, level: u32) -> GridFunction {
    corpus::member("random_cz_1", grid(dim, level)).expect("standard member")
}

/// One space of each kind on the given grid.
pub fn spaces(g: DyadicGrid) -> Vec<(&'static str, SpaceSpec)> {
    let w = corpus::power_weight(g, 0.5).expect("power weight");
    vec![
        ("lp2", SpaceSpec::lp(2.0).unwrap()),
        ("wlp2", SpaceSpec::weighted_lp(2.0, Weight::field(w).unwrap()).unwrap()),
        ("lorentz21", SpaceSpec::lorentz(2.0, 1.0, Weight::uniform()).unwrap()),
        ("orlicz_t2", SpaceSpec::orlicz(YoungFunction::power(2.0).unwrap()).unwrap()),
        ("orlicz_exp", SpaceSpec::orlicz(YoungFunction::exp_minus_one()).unwrap()),
        ("varlp", SpaceSpec::variable(standard_exponent(g).unwrap())),
        ("morrey42", SpaceSpec::morrey(4.0, 2.0).unwrap()),
    ]
}
