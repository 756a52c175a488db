//! `construct`: explicit matrices written as tree specs with their evidence.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use treejacobi::classical::{lemma5_family, pq_partial_sums};
use treejacobi::constructions::{
    decorated_path_build, degenerate_path, prop5_build_with, remark2_build, theorem3_build, NormSchedule, PendantWeights,
};
use treejacobi::exactmath::{is_zero_gaussian, pow2, Rational};
use treejacobi::solutions::{propagate_real, RealPropagation};
use treejacobi::tree::{PathSelection, TreeTruncation};

use super::Global;
use crate::input::{params, CliError, CliResult, Params};
use crate::report::{gaussian, rational, ReportBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Example {
    /// Matrix with a square-summable solution at `z = i` (`seed`).
    Theorem3,
    /// Bounded homogeneous matrix plus a fast-decaying path (`d`, a perfect square).
    Remark2,
    /// Path with one pendant vertex per level (`beta`, `lambda`, `family=lemma5` with `q`, `a`, `mode`).
    Decorated,
    /// Matrix with no solution of `J v = 0` (`x0_beta`).
    Prop5,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub example: Example,
    #[arg(long)]
    pub depth: usize,
    /// Comma-separated `key=value` parameters of the example.
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Where to write the tree spec.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn construct_cmd(args: &ConstructArgs, _global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let raw = params(args.params.as_deref())?;
    let tree = match args.example {
        Example::Theorem3 => small_norm(args.depth, Params::new(raw, &["seed"])?, r)?,
        Example::Remark2 => bounded_plus_path(args.depth, Params::new(raw, &["d"])?, r)?,
        Example::Decorated => decorated(args.depth, Params::new(raw, &["beta", "lambda", "family", "q", "a", "mode"])?, r)?,
        Example::Prop5 => obstructed(args.depth, Params::new(raw, &["x0_beta"])?, r)?,
    };
    match (&args.out, tree) {
        (Some(out), Some(tree)) => {
            let text = tree.to_spec_json();
            std::fs::write(out, &text).map_err(|source| CliError::Write { path: out.display().to_string(), source })?;
            r.result(
                "spec",
                json!({ "file": out.display().to_string(), "vertices": tree.len(), "sha256": hex::encode(Sha256::digest(text.as_bytes())) }),
            );
            r.note(format!("wrote {} vertices to {}", tree.len(), out.display()));
        }
        (Some(_), None) => return Err(CliError::Usage("this configuration has no tree to write".into())),
        (None, Some(tree)) => r.result("spec", json!({ "file": null, "vertices": tree.len() })),
        (None, None) => {}
    }
    Ok(())
}

fn path_lambdas(tree: &TreeTruncation, path: &PathSelection) -> serde_json::Value {
    path.vertices().iter().map(|&x| json!({ "vertex": tree.name(x), "lambda": rational(tree.lambda(x)) })).collect()
}

/// Edges from `v` up to the nearest path vertex.
fn distance_to_path(tree: &TreeTruncation, on_path: &[bool], v: usize) -> usize {
    tree.ancestors(v).iter().position(|&a| on_path[a]).expect("the top is on the path")
}

fn small_norm(depth: usize, p: Params, r: &mut ReportBuilder) -> CliResult<Option<TreeTruncation>> {
    let standard = NormSchedule::standard(depth);
    let seed = p.rational("seed", &treejacobi::exactmath::format_rational(&standard.seed))?;
    let schedule = NormSchedule::custom(seed, |n| pow2(-(n as i64) - 2), depth);
    let b = theorem3_build(depth, &schedule)?;
    let failures = b.field.residual_failures();
    r.result("path", path_lambdas(&b.tree, &b.path));
    r.result("ledger", &b.ledger);
    r.result("norm_sq", rational(&b.field.norm_sq()));
    r.result("v_path", b.path.vertices().iter().map(|&x| gaussian(b.field.value(x))).collect::<Vec<_>>());
    r.check("eigen-equation", failures.is_empty(), format!("{} vertices with nonzero residual", failures.len()));
    r.check("norm ledger within 1 - 2^-n", b.ledger_within_bounds(), format!("{} steps", b.ledger.len()));
    let mut on_path = vec![false; b.tree.len()];
    for &x in b.path.vertices() {
        on_path[x] = true;
    }
    let far: Vec<usize> = (0..b.tree.len()).filter(|&v| distance_to_path(&b.tree, &on_path, v) >= 2).collect();
    let unit = far.iter().all(|&v| b.tree.lambda(v).is_one());
    r.check("unit weights away from the path", unit, format!("{} vertices at distance >= 2", far.len()));
    r.note(format!("|v|^2 = {} on {} vertices", treejacobi::exactmath::format_rational(&b.field.norm_sq()), b.tree.len()));
    Ok(Some(b.tree))
}

fn bounded_plus_path(depth: usize, p: Params, r: &mut ReportBuilder) -> CliResult<Option<TreeTruncation>> {
    let d = p.usize("d", 4)?;
    let b = remark2_build(d, depth)?;
    let path = PathSelection::leftmost(&b.tree)?;
    r.result("path", path_lambdas(&b.tree, &path));
    r.result("side_lambda", rational(b.base.lambda(b.base.top())));
    r.result("base_eigenvalues_outside", b.base_outside);
    r.check("base spectrum within [-2, 2]", b.base_outside == 0, format!("{} eigenvalues outside", b.base_outside));
    let sums = pq_partial_sums(&degenerate_path(depth)?, &Rational::zero(), depth)?;
    r.result(
        "degenerate_path_indicator",
        json!({ "kind": "finite-depth indicator, not a proof", "partial_sums": sums.iter().map(rational).collect::<Vec<_>>() }),
    );
    Ok(Some(b.tree))
}

fn decorated(depth: usize, p: Params, r: &mut ReportBuilder) -> CliResult<Option<TreeTruncation>> {
    let family = p.text("family", "constant");
    let built = match family {
        "constant" => {
            let (lambda, beta) = (p.rational("lambda", "1")?, p.rational("beta", "3/4")?);
            let mode = weights(p.text("mode", "exact"))?;
            decorated_path_build(|_| lambda.clone(), |_| beta.clone(), depth, mode)?
        }
        "lemma5" => {
            let j = lemma5_family(&p.rational("q", "2")?, &p.rational("a", "1")?, depth + 1)?;
            let mode = weights(p.text("mode", "squared"))?;
            decorated_path_build(|n| j.lambda(n).clone(), |n| j.beta(n).clone(), depth, mode)?
        }
        other => return Err(CliError::Usage(format!("unknown family `{other}`; expected constant or lemma5"))),
    };
    r.result("mode", built.mode);
    r.result("mu_sq", built.mu_sq.iter().skip(1).map(rational).collect::<Vec<_>>());
    r.result("path_values", built.path_values.iter().map(gaussian).collect::<Vec<_>>());
    r.result("reduced_residuals", built.reduced_residual_strings());
    let reduced = built.reduced_residuals.iter().all(is_zero_gaussian);
    r.check("reduced recurrence", reduced, format!("{} rows", built.reduced_residuals.len()));
    let eigen = built.eigen_residuals.iter().all(is_zero_gaussian);
    r.check("eigen-equation", eigen, format!("{} rows", built.eigen_residuals.len()));
    let pendants = built.pendant_identity.iter().all(|&b| b);
    r.check("pendant modulus identity", pendants, format!("{} pendants", built.pendant_identity.len()));
    Ok(built.tree)
}

fn weights(mode: &str) -> CliResult<PendantWeights> {
    match mode {
        "exact" => Ok(PendantWeights::Exact),
        "squared" => Ok(PendantWeights::Squared),
        other => Err(CliError::Usage(format!("unknown mode `{other}`; expected exact or squared"))),
    }
}

fn obstructed(depth: usize, p: Params, r: &mut ReportBuilder) -> CliResult<Option<TreeTruncation>> {
    let b = prop5_build_with(depth, &p.rational("x0_beta", "1")?)?;
    let x0 = b.path.vertices()[0];
    let obstruction = match propagate_real(&b.tree, x0, &Rational::zero())? {
        RealPropagation::Obstruction { vertex } => Some(b.tree.name(vertex).to_string()),
        RealPropagation::Field(_) => None,
    };
    r.result("path", path_lambdas(&b.tree, &b.path));
    r.result("blocks", &b.blocks);
    r.result("obstruction", &obstruction);
    r.check("no solution at r = 0", obstruction.is_some(), format!("obstruction at {}", obstruction.as_deref().unwrap_or("none")));
    let positive = b.blocks.iter().all(|k| k.interior_negative == 0);
    r.check("interior blocks have no negative eigenvalues", positive, format!("{} blocks", b.blocks.len()));
    let unique = b.blocks.iter().all(|k| k.interior_dimension == 1);
    r.check("interior solutions unique up to scale", unique, format!("{} blocks", b.blocks.len()));
    Ok(Some(b.tree))
}
