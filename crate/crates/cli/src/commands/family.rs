//! `poly` and `spectrum`.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::json;

use treejacobi::exactmath::{has_real_simple_roots, isolate_real_roots, strict_interlace};
use treejacobi::par::Execution;
use treejacobi::spectra::{
    char_poly, eigenvector_witnesses, spectral_identity_or_fallback, theorem2_spectrum, IdentityVerdict, TruncatedOperator,
};
use treejacobi::treepoly::PolyFamily;

use super::Global;
use crate::input::{load_tree, vertex, CliError, CliResult};
use crate::report::{poly, roots, ReportBuilder};

#[derive(Args, Debug, Serialize)]
pub struct PolyArgs {
    /// Tree spec JSON file.
    #[arg(long)]
    pub tree: PathBuf,
    /// Vertex `x` whose row `P_{x,·}` is reported.
    #[arg(long)]
    pub at: String,
    /// Report the single entry `P_{x,t}` for this vertex `t` below `x`.
    #[arg(long)]
    pub target: Option<String>,
}

pub fn poly_cmd(args: &PolyArgs, global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let loaded = load_tree(&args.tree)?;
    r.input("tree", &loaded.bytes);
    let t = &loaded.tree;
    let x = vertex(t, &args.at)?;
    let family = PolyFamily::build_with(&t.subtree(x), Execution::default())?;
    let sub = family.tree();
    let top = sub.top();
    let (own, up) = (family.own(top), family.up(top));
    r.result("vertex", &args.at);
    r.result("own", poly(own));
    r.result("up", poly(up));
    if let Some(target) = &args.target {
        let y = sub.index_of(target).map_err(|_| CliError::Usage(format!("`{target}` is not below `{}`", args.at)))?;
        let entry = family.get(top, y).expect("every vertex of the subtree has an entry");
        r.result("target", json!({ "vertex": target, "poly": poly(entry) }));
    }
    if global.full {
        let row: Vec<_> = family.row(top).into_iter().map(|(y, p)| json!({ "vertex": sub.name(y), "poly": poly(p) })).collect();
        r.result("row", row);
    }

    let degree_law = up.deg() == own.deg() + 1;
    r.check("degree law", degree_law, format!("deg P_xx = {}, deg P_xx' = {}", own.deg(), up.deg()));
    let leading = up.leading() == Some(&t.lambda(x).recip());
    r.check("leading coefficient", leading, "leading coefficient of P_xx' is 1/lambda_x");
    let simple = has_real_simple_roots(own) && has_real_simple_roots(up);
    r.check("real simple roots", simple, "P_xx and P_xx' have only real simple roots");
    let interlaced = own.is_constant() || strict_interlace(up, own);
    r.check("interlacing", interlaced, "roots of P_xx strictly interlace those of P_xx'");
    r.note(format!("P_{{{0},{0}}} = {1}", args.at, own.pretty()));
    r.note(format!("P_{{{0},{0}'}} = {1}", args.at, up.pretty()));
    Ok(())
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    /// Tree spec JSON file.
    #[arg(long)]
    pub tree: PathBuf,
    /// Top of the truncation `Γ_x` whose spectrum is described.
    #[arg(long)]
    pub at: String,
    /// Check the factorization against the characteristic polynomial.
    #[arg(long)]
    pub verify: bool,
}

pub fn spectrum_cmd(args: &SpectrumArgs, global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let loaded = load_tree(&args.tree)?;
    r.input("tree", &loaded.bytes);
    let t = &loaded.tree;
    let x = vertex(t, &args.at)?;
    let family = PolyFamily::build_with(&t.subtree(x), Execution::default())?;
    let sub = family.tree();
    let top = sub.top();
    let desc = theorem2_spectrum(&family, top)?;
    let char = char_poly(&TruncatedOperator::new(sub));

    r.result("dimension", sub.len());
    r.result("char_poly", poly(&char));
    r.result("eigenvalues", roots(&isolate_real_roots(&char)));
    r.result("part_a", json!({ "factor": poly(&desc.up), "roots": roots(&desc.part_a) }));
    let part_b: Vec<_> =
        desc.part_b.iter().map(|s| json!({ "vertex": sub.name(s.vertex), "factor": poly(&s.factor), "roots": roots(&s.roots) })).collect();
    r.result("part_b", part_b);
    let mut factors = vec![desc.up.pretty()];
    factors.extend(desc.part_b.iter().map(|s| s.factor.pretty()));
    r.note(format!("det(z - J) = {} = ({})", char.pretty(), factors.join(")·(")));
    r.result("factors", factors);

    if args.verify {
        let (identity, mode, detail) = match spectral_identity_or_fallback(&family, top) {
            Ok(IdentityVerdict::Exact) => (true, "exact", "product of factors equals det(z - J)".to_string()),
            Ok(IdentityVerdict::SetsOnly) => (false, "sets_only", "only the sets of eigenvalues agree".to_string()),
            Err(e) => (false, "mismatch", e.to_string()),
        };
        r.result("verdict", json!({ "identity": identity, "mode": mode }));
        r.check("spectral identity", identity, detail);
        let witnesses = eigenvector_witnesses(&family, top)?;
        let failing = witnesses.iter().filter(|w| !w.passed()).count();
        r.check("eigenvector witnesses", failing == 0, format!("{} witnesses, {failing} failing", witnesses.len()));
        if global.full {
            r.result("witnesses", &witnesses);
        }
        r.note(format!("identity verdict: {identity}"));
    }
    Ok(())
}
