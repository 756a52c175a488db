//! `growth`: finite-depth norm and Carleman profiles.

use clap::Args;
use serde::Serialize;
use serde_json::json;

use treejacobi::constructions::{theorem3_build, NormSchedule};
use treejacobi::exactmath::{gaussian as complex, int, pow2, GaussianRational, Rational};
use treejacobi::par::Execution;
use treejacobi::solutions::norm_growth_profile;
use treejacobi::tree::{generate, Coefficients, PathSelection, Shape, Site, TreeTruncation};

use super::Global;
use crate::input::{depths, gaussian_value, CliError, CliResult};
use crate::report::{gaussian, rational, ReportBuilder};

#[derive(Args, Debug, Serialize)]
pub struct GrowthArgs {
    /// `homogeneous:D`, `path`, `decorated`, or `theorem3` (the bounded-solution construction).
    #[arg(long)]
    pub generator: String,
    /// Depths to report: `3..15`, `3..=15`, or `3,5,8`.
    #[arg(long)]
    pub depths: String,
    /// Nonreal spectral parameter.
    #[arg(long, default_value = "0/1+1/1i", allow_hyphen_values = true)]
    pub z: String,
    /// Spine weights `λ_{x_n}`: `one`, `linear` (n+1), `square` ((n+1)^2) or `geometric` (2^n).
    /// Other weights are 1 and `β ≡ 0`.
    #[arg(long, default_value = "one")]
    pub spine_lambda: String,
}

fn spine_rule(name: &str) -> CliResult<fn(usize) -> Rational> {
    Ok(match name {
        "one" => |_| int(1),
        "linear" => |n| int(n as i64 + 1),
        "square" => |n| int((n as i64 + 1).pow(2)),
        "geometric" => |n| pow2(n as i64),
        other => return Err(CliError::Usage(format!("unknown spine weight rule `{other}`"))),
    })
}

/// The tree, its path and the seed `v(x_0)`.
fn build(args: &GrowthArgs, depth: usize) -> CliResult<(TreeTruncation, PathSelection, GaussianRational, bool)> {
    if args.generator == "theorem3" {
        if args.spine_lambda != "one" {
            return Err(CliError::Usage("the theorem3 generator chooses its own weights".into()));
        }
        let b = theorem3_build(depth, &NormSchedule::standard(depth))?;
        let seed = complex(NormSchedule::standard(depth).seed, Rational::from_integer(0.into()));
        return Ok((b.tree, b.path, seed, true));
    }
    let shape = match args.generator.split_once(':') {
        Some(("homogeneous", d)) => {
            let arity = d.parse().map_err(|_| CliError::Usage(format!("bad branching `{d}`")))?;
            Shape::Homogeneous { arity, depth }
        }
        None if args.generator == "path" => Shape::Path { depth },
        None if args.generator == "decorated" => Shape::DecoratedPath { depth },
        _ => return Err(CliError::Usage(format!("unknown generator `{}`", args.generator))),
    };
    let spine = spine_rule(&args.spine_lambda)?;
    let coeffs = Coefficients::new(move |s: &Site| if s.on_spine() { spine(s.level) } else { int(1) }, |_| int(0));
    let tree = generate(shape, &coeffs)?;
    let path = PathSelection::leftmost(&tree)?;
    Ok((tree, path, GaussianRational::new(int(1), int(0)), false))
}

pub fn growth_cmd(args: &GrowthArgs, _global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let depths = depths(&args.depths)?;
    let z = gaussian_value(&args.z)?;
    let max = *depths.iter().max().expect("depths are nonempty");
    let (tree, path, seed, bounded) = build(args, max)?;
    let profile = norm_growth_profile(&tree, &path, &z, &seed, &depths, Execution::default())?;

    let rows: Vec<_> = profile
        .rows
        .iter()
        .map(|row| json!({ "depth": row.depth, "norm_sq": rational(&row.norm_sq), "carleman_sum": rational(&row.carleman_sum) }))
        .collect();
    r.result("z", gaussian(&z));
    r.result("seed", gaussian(&seed));
    r.result("vertices", tree.len());
    r.result("rows", rows);
    r.result("norm_strictly_increasing", profile.norm_strictly_increasing);
    r.result("norm_trend", profile.norm_trend);
    r.result("carleman_trend", profile.carleman_trend);
    r.result("indicator", json!({ "verdict": profile.indicator(), "kind": "finite-depth indicator, not a proof" }));
    let drops = |key: fn(&treejacobi::solutions::GrowthRow) -> &Rational| -> Vec<usize> {
        profile.rows.windows(2).filter(|w| key(&w[1]) < key(&w[0])).map(|w| w[1].depth).collect()
    };
    let norm_drops = drops(|row| &row.norm_sq);
    r.check("norm nondecreasing in depth", norm_drops.is_empty(), format!("decreases at depths {norm_drops:?}"));
    let sum_drops = drops(|row| &row.carleman_sum);
    r.check("carleman sum nondecreasing in depth", sum_drops.is_empty(), format!("decreases at depths {sum_drops:?}"));
    if bounded {
        let over: Vec<usize> = profile
            .rows
            .iter()
            .filter(|row| row.norm_sq > Rational::from_integer(1.into()) - pow2(-(row.depth as i64)))
            .map(|row| row.depth)
            .collect();
        r.check("norm within 1 - 2^-d", over.is_empty(), format!("depths over budget: {over:?}"));
    }
    r.note(format!("indicator: {} (finite-depth indicator)", profile.indicator()));
    Ok(())
}
