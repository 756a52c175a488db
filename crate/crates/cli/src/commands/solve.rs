//! `solve` and `wronskian`.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::json;

use treejacobi::exactmath::{gaussian as complex, is_zero_gaussian, GaussianRational, Rational};
use treejacobi::par::Execution;
use treejacobi::solutions::{solve_pair_with, wronskian, SolutionField};
use treejacobi::tree::{PathSelection, TreeTruncation};

use super::Global;
use crate::input::{gaussian_value, load_tree, path, CliResult};
use crate::report::{gaussian, rational, ReportBuilder};

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    /// Tree spec JSON file.
    #[arg(long)]
    pub tree: PathBuf,
    /// Nonreal spectral parameter, e.g. `0/1+1/1i`.
    #[arg(long, default_value = "0/1+1/1i", allow_hyphen_values = true)]
    pub z: String,
    /// Comma-separated path from a level-0 vertex to the top; defaults to the leftmost one.
    #[arg(long)]
    pub path: Option<String>,
}

struct Solved {
    tree: TreeTruncation,
    path: PathSelection,
    v: SolutionField,
    u: SolutionField,
}

fn solve(args: &SolveArgs, r: &mut ReportBuilder) -> CliResult<Solved> {
    let loaded = load_tree(&args.tree)?;
    r.input("tree", &loaded.bytes);
    let tree = loaded.tree;
    let z = gaussian_value(&args.z)?;
    let path = path(&tree, args.path.as_deref())?;
    let (v, u) = solve_pair_with(&tree, &path, &z, Execution::default())?;
    r.result("z", gaussian(&z));
    r.result("path", path.vertices().iter().map(|&x| tree.name(x)).collect::<Vec<_>>());
    Ok(Solved { tree, path, v, u })
}

fn wronskian_rows(s: &Solved) -> CliResult<(Vec<serde_json::Value>, usize)> {
    let mut rows = Vec::new();
    let mut failures = 0;
    for (n, &x) in s.path.vertices().iter().enumerate() {
        let w = wronskian(&s.v, &s.u, &s.path, n)?;
        let expected = complex(s.tree.lambda(x).recip(), Rational::from_integer(0.into()));
        let ok = w == expected;
        failures += usize::from(!ok);
        rows.push(json!({ "n": n, "vertex": s.tree.name(x), "value": gaussian(&w), "expected": gaussian(&expected), "ok": ok }));
    }
    Ok((rows, failures))
}

pub fn solve_cmd(args: &SolveArgs, global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let s = solve(args, r)?;
    let (t, xs) = (&s.tree, s.path.vertices());
    let row = |x: usize| json!({ "vertex": t.name(x), "v": gaussian(s.v.value(x)), "u": gaussian(s.u.value(x)) });
    r.result("path_values", xs.iter().map(|&x| row(x)).collect::<Vec<_>>());
    r.result("above_top", json!({ "v": gaussian(s.v.above_top()), "u": gaussian(s.u.above_top()) }));
    r.result("norm_sq", rational(&s.v.norm_sq()));
    if global.full {
        r.result("values", (0..t.len()).map(row).collect::<Vec<_>>());
    }

    let v_bad = s.v.residual_failures();
    r.check("eigen-equation for v", v_bad.is_empty(), format!("{} vertices with nonzero residual", v_bad.len()));
    let u_bad = s.u.residual_failures();
    r.check("eigen-equation for u off x0", u_bad.is_empty(), format!("{} vertices with nonzero residual", u_bad.len()));
    let zeros = (0..t.len()).filter(|&x| is_zero_gaussian(s.v.value(x))).count();
    r.check("v nonvanishing", zeros == 0, format!("{zeros} zero values"));
    let (_, failures) = wronskian_rows(&s)?;
    r.check("wronskian", failures == 0, format!("{} path positions, {failures} failures", xs.len()));
    let mut side_checked = 0;
    let mut side_failures = 0;
    for n in 1..xs.len() {
        for &c in t.children(xs[n]).iter().filter(|&&c| c != xs[n - 1]) {
            for x in t.descendants(c) {
                side_checked += 1;
                let lhs: GaussianRational = s.v.value(xs[n]) * s.u.value(x);
                side_failures += usize::from(lhs != s.u.value(xs[n]) * s.v.value(x));
            }
        }
    }
    r.check("side proportionality", side_failures == 0, format!("{side_checked} side vertices, {side_failures} failures"));
    r.note(format!(
        "solved at z = {} along {} path vertices; |v|^2 = {}",
        args.z,
        xs.len(),
        treejacobi::exactmath::format_rational(&s.v.norm_sq())
    ));
    Ok(())
}

pub fn wronskian_cmd(args: &SolveArgs, _global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let s = solve(args, r)?;
    let (rows, failures) = wronskian_rows(&s)?;
    let n = rows.len();
    r.result("wronskians", rows);
    r.check("wronskian equals 1/lambda", failures == 0, format!("{n} path positions, {failures} failures"));
    r.note(format!("wronskian checked at {n} path positions, {failures} failures"));
    Ok(())
}
