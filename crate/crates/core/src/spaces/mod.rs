//! Quasi-norms of the function spaces `X` that the oscillation functionals are
//! taken over.

mod associate;
mod lorentz;
mod luxemburg;
mod morrey;
mod young;

use std::fmt;

pub use associate::{associate_norm_indicator, AssociateNorm};
pub use lorentz::{lorentz_norm, weighted_rearrangement, Plateau};
pub use luxemburg::{luxemburg_norm, modular, normalized_luxemburg, ModularKind};
pub use morrey::morrey_norm;
pub use young::{IntegratedYoung, YoungFunction, YoungKind};

use crate::error::{Error, Result};
use crate::grid::{DyadicGrid, GridFunction};
use crate::sum::pairwise_sum;

/// A weight: either `w ≡ 1` or a strictly positive grid field.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight(Option<GridFunction>);

impl Weight {
    pub fn uniform() -> Self {
        Self(None)
    }

    pub fn field(w: GridFunction) -> Result<Self> {
        if let Some(i) = w.values().iter().position(|&v| v <= 0.0) {
            return Err(Error::InvalidSpace(format!(
                "weight must be strictly positive; cell {i} has {}",
                w.values()[i]
            )));
        }
        Ok(Self(Some(w)))
    }

    pub fn is_uniform(&self) -> bool {
        self.0.is_none()
    }

    pub fn as_field(&self) -> Option<&GridFunction> {
        self.0.as_ref()
    }

    pub fn value(&self, cell: usize) -> f64 {
        self.0.as_ref().map_or(1.0, |w| w.values()[cell])
    }

    pub fn check_grid(&self, grid: DyadicGrid) -> Result<()> {
        match &self.0 {
            Some(w) if w.grid() != grid => Err(Error::IncompatibleSpace(format!(
                "weight lives on {}, function on {grid}",
                w.grid()
            ))),
            _ => Ok(()),
        }
    }

    /// `w(E) = ∫_E w` for a set of cells.
    pub fn measure(&self, grid: DyadicGrid, cells: &[usize]) -> f64 {
        let vals: Vec<f64> = cells.iter().map(|&c| self.value(c)).collect();
        pairwise_sum(&vals) * grid.cell_volume()
    }

    /// Block averages on a coarser level; `∫_cell w` is preserved exactly in
    /// exact arithmetic.
    pub fn coarsen(&self, level: u32) -> Result<Self> {
        match &self.0 {
            None => Ok(Self(None)),
            Some(w) => Self::field(w.coarsen(level)?),
        }
    }
}

/// An exponent field `p(·)` with `0 < p₋ ≤ p₊ < ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableExponent {
    values: GridFunction,
    p_minus: f64,
    p_plus: f64,
}

impl VariableExponent {
    pub fn new(values: GridFunction) -> Result<Self> {
        let p_minus = values.values().iter().copied().fold(f64::INFINITY, f64::min);
        let p_plus = values.values().iter().copied().fold(0.0, f64::max);
        if !(p_minus > 0.0) {
            return Err(Error::InvalidSpace(format!("exponent infimum {p_minus} must be positive")));
        }
        Ok(Self {
            values,
            p_minus,
            p_plus,
        })
    }

    pub fn constant(grid: DyadicGrid, p: f64) -> Result<Self> {
        Self::new(GridFunction::constant(grid, p)?)
    }

    pub fn field(&self) -> &GridFunction {
        &self.values
    }

    pub fn grid(&self) -> DyadicGrid {
        self.values.grid()
    }

    pub fn at(&self, cell: usize) -> f64 {
        self.values.values()[cell]
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn coarsen(&self, level: u32) -> Result<Self> {
        Self::new(self.values.coarsen(level)?)
    }
}

#[derive(Debug, Clone)]
pub enum SpaceSpec {
    Lp { p: f64 },
    WeightedLp { p: f64, weight: Weight },
    /// `q = f64::INFINITY` selects the weak-type (sup) variant.
    WeightedLorentz { p: f64, q: f64, weight: Weight },
    Orlicz { young: YoungFunction },
    VariableLp { exponent: VariableExponent },
    Morrey { p: f64, q: f64 },
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        let x = Self::Lp { p };
        x.validate()?;
        Ok(x)
    }

    pub fn weighted_lp(p: f64, weight: Weight) -> Result<Self> {
        let x = Self::WeightedLp { p, weight };
        x.validate()?;
        Ok(x)
    }

    pub fn lorentz(p: f64, q: f64, weight: Weight) -> Result<Self> {
        let x = Self::WeightedLorentz { p, q, weight };
        x.validate()?;
        Ok(x)
    }

    pub fn orlicz(young: YoungFunction) -> Result<Self> {
        young.validate()?;
        Ok(Self::Orlicz { young })
    }

    pub fn variable(exponent: VariableExponent) -> Self {
        Self::VariableLp { exponent }
    }

    pub fn morrey(p: f64, q: f64) -> Result<Self> {
        let x = Self::Morrey { p, q };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpace(m));
        match self {
            Self::Lp { p } | Self::WeightedLp { p, .. } if !(*p >= 1.0 && p.is_finite()) => {
                bad(format!("Lebesgue exponent {p} must be in [1, ∞)"))
            }
            Self::WeightedLorentz { p, q, .. } if !(*p > 0.0 && p.is_finite() && *q > 0.0) => {
                bad(format!("Lorentz exponents p={p}, q={q} need 0 < p < ∞, 0 < q ≤ ∞"))
            }
            Self::Morrey { p, q } if !(1.0 <= *q && q <= p && p.is_finite()) => {
                bad(format!("Morrey exponents need 1 ≤ q ≤ p < ∞, got p={p}, q={q}"))
            }
            _ => Ok(()),
        }
    }

    /// The grid a weight or exponent field pins this space to, if any.
    pub fn field_grid(&self) -> Option<DyadicGrid> {
        match self {
            Self::WeightedLp { weight, .. } | Self::WeightedLorentz { weight, .. } => {
                weight.as_field().map(GridFunction::grid)
            }
            Self::VariableLp { exponent } => Some(exponent.grid()),
            _ => None,
        }
    }

    pub fn check_grid(&self, grid: DyadicGrid) -> Result<()> {
        match self.field_grid() {
            Some(g) if g != grid => Err(Error::IncompatibleSpace(format!(
                "space {self} is defined on {g}, function on {grid}"
            ))),
            _ => Ok(()),
        }
    }

    /// True when the associate norm of indicators has a closed form here.
    pub fn has_closed_form_associate(&self) -> bool {
        matches!(self, Self::Lp { .. } | Self::WeightedLp { .. })
    }

    /// `‖f‖_X`.
    pub fn quasi_norm(&self, f: &GridFunction) -> Result<f64> {
        self.validate()?;
        self.check_grid(f.grid())?;
        // Every space here is degree-1 homogeneous, so the input is brought to
        // `max |f| ∈ [1, 2)` by an exact power of two; this keeps `|f|^p` away
        // from overflow and underflow for any magnitude of `f`.
        let m = f.max_abs();
        if m.is_finite() && m > 0.0 && !(1.0..2.0).contains(&m) {
            let k = m.log2().floor();
            let scaled = f.map(|v| v * (-k).exp2())?;
            let value = self.quasi_norm(&scaled)? * k.exp2();
            return if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::NumericOverflow(format!("‖f‖ in {self} is {value}")))
            };
        }
        let value = match self {
            Self::Lp { p } => weighted_lp_norm(f, *p, &Weight::uniform()),
            Self::WeightedLp { p, weight } => weighted_lp_norm(f, *p, weight),
            Self::WeightedLorentz { p, q, weight } => lorentz_norm(*p, *q, weight, f)?,
            Self::Orlicz { young } => luxemburg_norm(ModularKind::Orlicz(young), f)?,
            Self::VariableLp { exponent } => luxemburg_norm(ModularKind::Variable(exponent), f)?,
            Self::Morrey { p, q } => morrey_norm(*p, *q, f)?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NumericOverflow(format!("‖f‖ in {self} is {value}")))
        }
    }

    /// The same space with its fields resampled to a coarser level, used when
    /// a cube is rescaled onto the unit cube.
    pub fn coarsened(&self, level: u32) -> Result<Self> {
        Ok(match self {
            Self::WeightedLp { p, weight } => Self::WeightedLp {
                p: *p,
                weight: weight.coarsen(level)?,
            },
            Self::WeightedLorentz { p, q, weight } => Self::WeightedLorentz {
                p: *p,
                q: *q,
                weight: weight.coarsen(level)?,
            },
            Self::VariableLp { exponent } => Self::VariableLp {
                exponent: exponent.coarsen(level)?,
            },
            other => other.clone(),
        })
    }

    /// Parses the text syntax
    /// `lp:p=2`, `wlp:p=2,w=FILE`, `lorentz:p=2,q=1[,w=FILE]`,
    /// `orlicz:power,p=2[,scale=S]`, `orlicz:powerlog,p=2`, `orlicz:exp`,
    /// `varlp:p=FILE`, `morrey:p=4,q=2`.
    ///
    /// `load` resolves FILE references to grid functions.
    pub fn parse(text: &str, load: &mut dyn FnMut(&str) -> Result<GridFunction>) -> Result<Self> {
        let text = text.trim();
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut words = Vec::new();
        let mut params = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => params.push((k.trim(), v.trim())),
                None => words.push(item),
            }
        }
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let num = |key: &str| -> Result<f64> {
            let v = get(key).ok_or_else(|| Error::Parse(format!("`{text}`: missing `{key}=`")))?;
            parse_number(v).map_err(|e| Error::Parse(format!("`{text}`: {key}: {e}")))
        };
        let known = |allowed: &[&str]| -> Result<()> {
            match params.iter().find(|(k, _)| !allowed.contains(k)) {
                Some((k, _)) => Err(Error::Parse(format!("`{text}`: unknown parameter `{k}`"))),
                None => Ok(()),
            }
        };
        let spec = match kind {
            "lp" => {
                known(&["p"])?;
                Self::lp(num("p")?)?
            }
            "wlp" => {
                known(&["p", "w"])?;
                let w = get("w").ok_or_else(|| Error::Parse(format!("`{text}`: missing `w=`")))?;
                Self::weighted_lp(num("p")?, Weight::field(load(w)?)?)?
            }
            "lorentz" => {
                known(&["p", "q", "w"])?;
                let weight = match get("w") {
                    Some(w) => Weight::field(load(w)?)?,
                    None => Weight::uniform(),
                };
                Self::lorentz(num("p")?, num("q")?, weight)?
            }
            "orlicz" => {
                known(&["p", "scale"])?;
                let young = match words.as_slice() {
                    ["power"] => match get("scale") {
                        Some(_) => YoungFunction::scaled_power(num("p")?, num("scale")?)?,
                        None => YoungFunction::power(num("p")?)?,
                    },
                    ["powerlog"] => YoungFunction::power_log(num("p")?)?,
                    ["exp"] => YoungFunction::exp_minus_one(),
                    _ => {
                        return Err(Error::Parse(format!(
                            "`{text}`: orlicz needs one of power, powerlog, exp"
                        )))
                    }
                };
                Self::orlicz(young)?
            }
            "varlp" => {
                known(&["p"])?;
                let p = get("p").ok_or_else(|| Error::Parse(format!("`{text}`: missing `p=`")))?;
                Self::variable(VariableExponent::new(load(p)?)?)
            }
            "morrey" => {
                known(&["p", "q"])?;
                Self::morrey(num("p")?, num("q")?)?
            }
            _ => return Err(Error::Parse(format!("unknown space kind in `{text}`"))),
        };
        if !words.is_empty() && kind != "orlicz" {
            return Err(Error::Parse(format!("`{text}`: unexpected `{}`", words.join(","))));
        }
        Ok(spec)
    }
}

fn parse_number(v: &str) -> std::result::Result<f64, String> {
    match v {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        _ => v.parse::<f64>().map_err(|e| format!("`{v}`: {e}")),
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |w: &Weight| if w.is_uniform() { "1" } else { "<field>" };
        match self {
            Self::Lp { p } => write!(f, "lp:p={p}"),
            Self::WeightedLp { p, weight } => write!(f, "wlp:p={p},w={}", w(weight)),
            Self::WeightedLorentz { p, q, weight } => {
                write!(f, "lorentz:p={p},q={q},w={}", w(weight))
            }
            Self::Orlicz { young } => write!(f, "orlicz:{young}"),
            Self::VariableLp { exponent } => write!(
                f,
                "varlp:p=<field p-={} p+={}>",
                exponent.p_minus(),
                exponent.p_plus()
            ),
            Self::Morrey { p, q } => write!(f, "morrey:p={p},q={q}"),
        }
    }
}

pub(crate) fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

pub(crate) fn root(s: f64, p: f64) -> f64 {
    if p == 1.0 {
        s
    } else if p == 2.0 {
        s.sqrt()
    } else {
        s.powf(1.0 / p)
    }
}

/// `(∫ |f|^p w)^{1/p}` by pairwise summation over all cells.
fn weighted_lp_norm(f: &GridFunction, p: f64, w: &Weight) -> f64 {
    let vol = f.grid().cell_volume();
    let terms: Vec<f64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| abs_pow(v, p) * w.value(i) * vol)
        .collect();
    root(pairwise_sum(&terms), p)
}

/// Checks the lattice property `|g| ≤ |f| ⇒ ‖g‖ ≤ ‖f‖` for one pair, with
/// relative slack `1e-9`.
pub fn ideal_property_probe(x: &SpaceSpec, f: &GridFunction, g: &GridFunction) -> Result<bool> {
    f.same_grid(g)?;
    if let Some(i) = (0..f.values().len()).find(|&i| g.values()[i].abs() > f.values()[i].abs()) {
        return Err(Error::Contract(format!(
            "|g| ≤ |f| fails at cell {i}: {} > {}",
            g.values()[i].abs(),
            f.values()[i].abs()
        )));
    }
    Ok(x.quasi_norm(g)? <= x.quasi_norm(f)? * (1.0 + 1e-9))
}
