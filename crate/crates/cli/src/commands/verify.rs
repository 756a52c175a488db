//! `verify-all`: every exact check on one tree plus a seeded random corpus.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use serde_json::json;

use treejacobi::constructions::positivity_check;
use treejacobi::corpus::{self, random_tree};
use treejacobi::exactmath::{gaussian as complex, int, is_zero_gaussian, Rational};
use treejacobi::par::Execution;
use treejacobi::solutions::{lemma4_positivity, solve_pair, uniqueness_dimension, wronskian};
use treejacobi::spectra::{eigenvector_witnesses, verify_spectral_identity};
use treejacobi::tree::{PathSelection, TreeTruncation};
use treejacobi::treepoly::PolyFamily;
use treejacobi::Result;

use super::Global;
use crate::input::{load_tree, CliResult};
use crate::report::ReportBuilder;

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Tree spec JSON file.
    #[arg(long)]
    pub tree: PathBuf,
    /// Random trees in the seeded corpus.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Largest random tree.
    #[arg(long, default_value_t = 12)]
    pub max_vertices: usize,
}

/// Outcome of the solution checks at `z = i` along the leftmost path.
#[derive(Default)]
struct SolutionChecks {
    residual_failures: usize,
    zeros: usize,
    wronskian_failures: usize,
    positions: usize,
    conjugation_failures: usize,
}

fn solution_checks(t: &TreeTruncation) -> Result<SolutionChecks> {
    let i = complex(int(0), int(1));
    let path = PathSelection::leftmost(t)?;
    let (v, u) = solve_pair(t, &path, &i)?;
    let (vc, uc) = solve_pair(t, &path, &i.conj())?;
    let mut out = SolutionChecks {
        residual_failures: v.residual_failures().len() + u.residual_failures().len(),
        positions: path.len(),
        ..SolutionChecks::default()
    };
    for x in 0..t.len() {
        out.zeros += usize::from(is_zero_gaussian(v.value(x)));
        out.conjugation_failures += usize::from(*vc.value(x) != v.value(x).conj() || *uc.value(x) != u.value(x).conj());
    }
    for (n, &x) in path.vertices().iter().enumerate() {
        let expected = complex(t.lambda(x).recip(), Rational::from_integer(0.into()));
        out.wronskian_failures += usize::from(wronskian(&v, &u, &path, n)? != expected);
    }
    Ok(out)
}

/// Checks applied to every tree of the random corpus.
#[derive(Default)]
struct CorpusOutcome {
    identity: bool,
    interlacing: bool,
    solutions: bool,
    uniqueness: bool,
}

fn corpus_item(t: &TreeTruncation) -> Result<CorpusOutcome> {
    let family = PolyFamily::build_with(t, Execution::Sequential)?;
    let s = solution_checks(t)?;
    Ok(CorpusOutcome {
        identity: verify_spectral_identity(&family, t.top())?,
        interlacing: family.check_interlacing().vertices.iter().all(|v| v.passed()),
        solutions: s.residual_failures + s.zeros + s.wronskian_failures + s.conjugation_failures == 0,
        uniqueness: uniqueness_dimension(t, t.top(), &complex(int(0), int(1)))? == 1,
    })
}

pub fn verify_cmd(args: &VerifyArgs, global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let loaded = load_tree(&args.tree)?;
    r.input("tree", &loaded.bytes);
    let t = &loaded.tree;
    let exec = Execution::default();
    r.result("tree", json!({ "vertices": t.len(), "height": t.height(), "top": t.name(t.top()) }));

    let round_trip = TreeTruncation::from_spec_json(&t.to_spec_json()).is_ok_and(|back| back == *t);
    r.check("spec round trip", round_trip, "serialize then parse reproduces the tree");

    let family = PolyFamily::build_with(t, exec)?;
    let interlacing = family.check_interlacing();
    let bad: Vec<&str> = interlacing.vertices.iter().filter(|v| !v.passed()).map(|v| v.vertex.as_str()).collect();
    r.check("real simple interlacing roots and degree law", bad.is_empty(), format!("{} vertices, failing: {bad:?}", t.len()));
    if global.full {
        r.result("interlacing", &interlacing);
    }
    let divisibility = family.check_divisibility();
    r.check("divisibility", divisibility.passed, format!("{} pairs checked", divisibility.checked));
    r.check("telescoping products", family.verify_telescoping(), "along every descending path");

    let vertices: Vec<usize> = (0..t.len()).collect();
    let identities = exec.map(&vertices, |&x| verify_spectral_identity(&family, x));
    let mut mismatches = Vec::new();
    for (x, ok) in vertices.iter().zip(identities) {
        if !ok? {
            mismatches.push(t.name(*x).to_string());
        }
    }
    r.check("spectral identity at every vertex", mismatches.is_empty(), format!("{} vertices, mismatches: {mismatches:?}", t.len()));
    let witnesses = eigenvector_witnesses(&family, t.top())?;
    let failing = witnesses.iter().filter(|w| !w.passed()).count();
    r.check("eigenvector witnesses", failing == 0, format!("{} witnesses, {failing} failing", witnesses.len()));

    let i = complex(int(0), int(1));
    let targets: Vec<usize> = if global.full { vertices.clone() } else { vec![t.top()] };
    let dims = exec.map(&targets, |&x| uniqueness_dimension(t, x, &i));
    let mut wrong = 0;
    for d in dims {
        wrong += usize::from(d? != 1);
    }
    r.check("uniqueness dimension at z = i", wrong == 0, format!("{} subtrees, {wrong} with dimension != 1", targets.len()));

    let s = solution_checks(t)?;
    r.check("eigen-equation for the solution pair", s.residual_failures == 0, format!("{} nonzero residuals", s.residual_failures));
    r.check("solution nonvanishing", s.zeros == 0, format!("{} zero values", s.zeros));
    r.check("wronskian", s.wronskian_failures == 0, format!("{} positions, {} failures", s.positions, s.wronskian_failures));
    r.check("conjugation symmetry", s.conjugation_failures == 0, format!("{} failures", s.conjugation_failures));

    if t.beta_is_zero() {
        let report = lemma4_positivity(t, &PathSelection::leftmost(t)?)?;
        r.check(
            "rotated solution positivity",
            report.passed,
            format!("{} vertices, {} steps", report.vertices_checked, report.steps_checked),
        );
    } else {
        r.result("rotated_solution_positivity", "skipped: beta is not identically zero");
    }

    let verdict = positivity_check(t, &vec![Rational::from_integer(1.into()); t.len()])?;
    let consistent = !verdict.inequality_holds || verdict.negative_eigenvalues == Some(0);
    let negatives = verdict.negative_eigenvalues.map_or("not counted".to_string(), |k| k.to_string());
    r.check(
        "unit certificate consistency",
        consistent,
        format!("inequality holds: {}, negative eigenvalues: {negatives}", verdict.inequality_holds),
    );

    let mut rng = corpus::rng(global.seed);
    let trees = (0..args.samples).map(|_| random_tree(&mut rng, args.max_vertices)).collect::<Result<Vec<_>>>()?;
    let outcomes = exec.map(&trees, corpus_item);
    let mut counts = [0usize; 4];
    for o in outcomes {
        let o = o?;
        for (c, ok) in counts.iter_mut().zip([o.identity, o.interlacing, o.solutions, o.uniqueness]) {
            *c += usize::from(!ok);
        }
    }
    let n = trees.len();
    r.result("random_corpus", json!({ "seed": global.seed, "samples": n, "max_vertices": args.max_vertices }));
    r.check("random corpus: spectral identity", counts[0] == 0, format!("{n} trees, {} failures", counts[0]));
    r.check("random corpus: interlacing", counts[1] == 0, format!("{n} trees, {} failures", counts[1]));
    r.check("random corpus: solution pair and wronskian", counts[2] == 0, format!("{n} trees, {} failures", counts[2]));
    r.check("random corpus: uniqueness", counts[3] == 0, format!("{n} trees, {} failures", counts[3]));
    Ok(())
}
