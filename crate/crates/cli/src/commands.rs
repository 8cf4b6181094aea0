//! One function per subcommand.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use campanato_core::conditions::{
    ap1_constant, ap_constant, ax_constant, log_holder_constants, nabla2_report, phi_regularity,
    young_delta2_constant, YoungSample,
};
use campanato_core::corpus::{self, standard_exponent, standard_specs, standard_weights};
use campanato_core::maximal::{maximal as maximal_op, weak_bound_ratio};
use campanato_core::oscillation::number;
use campanato_core::sparse::{cz_sparse, domination_constant};
use campanato_core::{
    fmt_f64, ConditionReport, Cube, DyadicGrid, GridFunction, IndicatorNorms, MaximalMode,
    OscillationProfile, PhiParameter, SpaceSpec, VariableExponent,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::output::{emit, pretty, report, sha256_hex, write_atomic, SCHEMA};

pub fn read_function(path: &Path) -> Result<GridFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GridFunction::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Resolves a field reference inside a space descriptor: a standard weight
/// name (`uniform`, `midpoint_pow_half`, ...), `standard_exponent`, or a
/// grid function file.
fn resolve_field(name: &str, grid: Option<DyadicGrid>) -> campanato_core::Result<GridFunction> {
    if let Some(g) = grid {
        if name == "standard_exponent" {
            return Ok(standard_exponent(g)?.field().clone());
        }
        if let Some((_, w)) = standard_weights(g)?.into_iter().find(|(n, _)| n == name) {
            return Ok(w);
        }
    }
    let text = fs::read_to_string(name)
        .map_err(|e| campanato_core::Error::Parse(format!("reading field file `{name}`: {e}")))?;
    GridFunction::from_text(&text)
}

fn parse_space(text: &str, grid: Option<DyadicGrid>) -> Result<SpaceSpec> {
    let spec = SpaceSpec::parse(text, &mut |name| resolve_field(name, grid))
        .with_context(|| format!("space `{text}`"))?;
    if let Some(g) = grid {
        spec.check_grid(g)?;
    }
    Ok(spec)
}

pub fn norm(space: &str, file: &Path) -> Result<()> {
    let f = read_function(file)?;
    let x = parse_space(space, Some(f.grid()))?;
    println!("{}", fmt_f64(x.quasi_norm(&f)?));
    Ok(())
}

fn parse_cube(text: Option<&str>, grid: DyadicGrid) -> Result<Cube> {
    let Some(t) = text else {
        return Ok(grid.base_cube());
    };
    let q: Cube = t.parse()?;
    grid.check_cube(&q)?;
    Ok(q)
}

pub fn sparse(file: &Path, cube: Option<&str>, alpha: f64, output: Option<&Path>) -> Result<()> {
    let f = read_function(file)?;
    let root = parse_cube(cube, f.grid())?;
    let family = cz_sparse(&f, &root, alpha)?;
    family
        .check_invariants()
        .context("sparse family failed its self-check; nothing written")?;
    let constant = domination_constant(&f, &root, alpha)?;
    let mut text = family.dump();
    text.push_str(&format!("# domination_constant={}\n", fmt_f64(constant)));
    emit(output, &text)
}

fn young_of(space: &SpaceSpec) -> Result<&campanato_core::YoungFunction> {
    match space {
        SpaceSpec::Orlicz { young } => Ok(young),
        other => bail!("young checks need an orlicz space, got {other:?}"),
    }
}

fn param(args: &[String], key: &str) -> Result<f64> {
    let prefix = format!("{key}=");
    let v = args
        .iter()
        .find_map(|a| a.strip_prefix(&prefix))
        .with_context(|| format!("missing `{key}=` argument"))?;
    v.parse().with_context(|| format!("bad `{key}` value {v:?}"))
}

fn arg(args: &[String], i: usize, what: &str) -> Result<String> {
    args.get(i).cloned().with_context(|| format!("missing {what}"))
}

pub fn check(
    condition: &str,
    args: &[String],
    n: usize,
    level: u32,
    budget: usize,
    output: Option<&Path>,
) -> Result<()> {
    let grid = DyadicGrid::new(n, level)?;
    let reports: Vec<ConditionReport> = match condition {
        "ax" => vec![ax_constant(&parse_space(&arg(args, 0, "space")?, Some(grid))?, grid)?],
        "ap" => {
            let w = read_function(Path::new(&arg(args, 0, "weight file")?))?;
            vec![ap_constant(&w, param(args, "p")?)?]
        }
        "ap1" => {
            let w = read_function(Path::new(&arg(args, 0, "weight file")?))?;
            vec![ap1_constant(&w, param(args, "p")?, budget)?]
        }
        "young" => {
            let which = arg(args, 0, "`delta2` or `nabla2`")?;
            let space = parse_space(&arg(args, 1, "orlicz space")?, None)?;
            let phi = young_of(&space)?;
            let sample = YoungSample::standard();
            match which.as_str() {
                "delta2" => vec![young_delta2_constant(phi, &sample)?.report()],
                "nabla2" => vec![nabla2_report(phi, &sample)?],
                other => bail!("unknown young condition {other:?}; expected delta2 or nabla2"),
            }
        }
        "phi" => {
            let phi = PhiParameter::parse(&arg(args, 0, "φ descriptor")?)?;
            let (dec, near) = phi_regularity(&phi, grid)?;
            vec![dec, near]
        }
        "loghoelder" => {
            let p = VariableExponent::new(read_function(Path::new(&arg(args, 0, "exponent file")?))?)?;
            let (local, inf) = log_holder_constants(&p);
            vec![local, inf]
        }
        other => bail!("unknown condition {other:?}; expected ax, ap, ap1, young, phi or loghoelder"),
    };
    let invocation = format!(
        "check {condition} {} n={n} level={level} budget={budget}",
        args.join(" ")
    );
    let certified = reports.iter().all(|r| r.certified);
    let body = json!({
        "command": invocation,
        "reports": reports
            .iter()
            .map(|r| {
                let mut v = r.to_json();
                v["passes"] = json!(r.passes());
                v
            })
            .collect::<Vec<_>>(),
    });
    emit(output, &pretty(&report(&sha256_hex(&invocation), certified, body)))
}

pub fn corpus(name: &str, n: usize, level: u32, output: Option<&Path>) -> Result<()> {
    let grid = DyadicGrid::new(n, level)?;
    emit(output, &corpus::member(name, grid)?.to_text())
}

pub fn maximal(file: &Path, mode: MaximalMode, output: Option<&Path>) -> Result<()> {
    let f = read_function(file)?;
    emit(output, &maximal_op(&f, mode).to_text())
}

/// Per-level state shared by every corpus member.
struct Level {
    grid: DyadicGrid,
    space: SpaceSpec,
    norms: IndicatorNorms,
}

/// Results for one corpus member at one level.
struct Run {
    member: String,
    level: u32,
    csv: String,
    aggregates: Value,
    upper_ratio: f64,
    extras: Value,
}

fn members(config: &ExperimentConfig) -> Vec<String> {
    let mut out = Vec::new();
    for name in &config.corpus {
        if name == "standard" {
            out.extend(standard_specs(config.n).into_iter().map(|(n, _)| n.to_string()));
        } else {
            out.push(name.clone());
        }
    }
    out
}

/// File-name-safe form of a member name (specs contain `:`, `=`, `;`).
fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}

fn run_one(config: &ExperimentConfig, phi: &PhiParameter, level: &Level, member: &str) -> Result<Run> {
    let grid = level.grid;
    let x = &level.space;
    let f = corpus::member(member, grid).with_context(|| format!("corpus member {member:?}"))?;
    let report = OscillationProfile::compute_with(&f, x, &level.norms)
        .with_context(|| format!("{member} at L={}", grid.level()))?
        .report(phi);
    let root = grid.base_cube();
    let family = cz_sparse(&f, &root, config.alpha)?;
    family.check_invariants()?;
    let dom = domination_constant(&f, &root, config.alpha)?;
    // Weak-type probe at half the sup norm; undefined for the zero function.
    let weak = if f.is_zero() {
        Value::Null
    } else {
        number(weak_bound_ratio(x, &f, 0.5 * f.max_abs(), config.mode)?)
    };
    let mut csv = format!("# schema={SCHEMA}\n");
    csv.push_str(&report.to_csv());
    Ok(Run {
        member: member.to_string(),
        level: grid.level(),
        csv,
        aggregates: report.aggregates_json(),
        upper_ratio: report.upper_ratio,
        extras: json!({
            "sparse_entries": family.len(),
            "domination_constant": number(dom),
            "weak_ratio": weak,
        }),
    })
}

fn relative_change(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (b - a).abs() / a.abs()
    }
}

pub fn equivalence(path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = ExperimentConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let phi = PhiParameter::parse(&config.phi)?;
    let hash = config.hash();
    let names = members(&config);
    let levels = config
        .levels
        .iter()
        .map(|&l| {
            let grid = DyadicGrid::new(config.n, l)?;
            let space = parse_space(&config.space, Some(grid))?;
            let norms = IndicatorNorms::new(&space, grid)?;
            Ok(Level { grid, space, norms })
        })
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(&Level, &str)> = levels
        .iter()
        .flat_map(|l| names.iter().map(move |m| (l, m.as_str())))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(l, m)| run_one(&config, &phi, l, m))
        .collect::<Result<Vec<_>>>()?;

    fs::create_dir_all(&config.output)
        .with_context(|| format!("creating {}", config.output.display()))?;
    for run in &runs {
        let stem = format!("{}_L{}", slug(&run.member), run.level);
        write_atomic(&config.output.join(format!("{stem}.csv")), &run.csv)?;
        let body = json!({
            "member": run.member,
            "n": config.n,
            "level": run.level,
            "space": config.space,
            "phi": phi.to_string(),
            "mode": config.mode.to_string(),
            "alpha": number(config.alpha),
            "aggregates": run.aggregates,
            "extras": run.extras,
        });
        write_atomic(&config.output.join(format!("{stem}.json")), &pretty(&report(&hash, true, body)))?;
    }

    let mut per_member = serde_json::Map::new();
    for name in &names {
        let mine: Vec<&Run> = runs.iter().filter(|r| &r.member == name).collect();
        let deltas: Vec<Value> = mine
            .windows(2)
            .map(|w| number(relative_change(w[0].upper_ratio, w[1].upper_ratio)))
            .collect();
        per_member.insert(
            name.clone(),
            json!({
                "levels": mine.iter().map(|r| json!({"level": r.level, "aggregates": r.aggregates})).collect::<Vec<_>>(),
                "upper_ratio_deltas": deltas,
            }),
        );
    }
    let corpus_max: Vec<f64> = config
        .levels
        .iter()
        .map(|&l| {
            runs.iter()
                .filter(|r| r.level == l)
                .map(|r| r.upper_ratio)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let max_deltas: Vec<Value> = corpus_max
        .windows(2)
        .map(|w| number(relative_change(w[0], w[1])))
        .collect();
    let body = json!({
        "config": config.render(),
        "levels": config.levels,
        "members": per_member,
        "corpus_max_upper_ratio": corpus_max.iter().map(|&v| number(v)).collect::<Vec<_>>(),
        "corpus_max_deltas": max_deltas,
    });
    let summary = config.output.join("summary.json");
    write_atomic(&summary, &pretty(&report(&hash, true, body)))?;
    println!("{}", summary.display());
    Ok(())
}
