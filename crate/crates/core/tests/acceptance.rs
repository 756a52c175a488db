use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use treejacobi::classical::{even_reduction_residuals, kernel_vector_residuals, lemma5_family, pq_partial_sums, ClassicalJacobi};
use treejacobi::constructions::{
    degenerate_path, positivity_check, positivity_construct_m, prop5_build, remark2_build, theorem3_build, NormSchedule,
};
use treejacobi::corpus::{self, exhaustive_shapes, random_positive_definite_tree, random_spined_tree, random_symmetric_tree, random_tree};
use treejacobi::exactmath::{format_rational, gaussian, int, pow2, rat, GaussianRational, Poly, Rational};
use treejacobi::par::Execution;
use treejacobi::solutions::{
    lemma4_positivity, norm_growth_profile, propagate_real, solve_pair, uniqueness_dimension, wronskian, RealPropagation,
};
use treejacobi::spectra::{char_poly, theorem2_spectrum, verify_spectral_identity, TruncatedOperator};
use treejacobi::tree::{generate, Coefficients, PathSelection, Shape, TreeBuilder, TreeTruncation};
use treejacobi::treepoly::PolyFamily;
use treejacobi::Result;

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn i() -> GaussianRational {
    gaussian(int(0), int(1))
}

fn corpus() -> Result<Vec<TreeTruncation>> {
    let mut trees = exhaustive_shapes(6)?;
    let mut rng = corpus::rng(1);
    for _ in 0..100 {
        trees.push(random_tree(&mut rng, 12)?);
    }
    Ok(trees)
}

fn spectral_identity() -> Outcome {
    let trees = corpus()?;
    let mut failures = 0;
    for t in &trees {
        let family = PolyFamily::build(t)?;
        if !verify_spectral_identity(&family, t.top())? {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{} trees, {failures} mismatches", trees.len())))
}

fn interlacing_suite() -> Outcome {
    let trees = corpus()?;
    let mut vertices = 0;
    let mut failures = 0;
    for t in &trees {
        let report = PolyFamily::build(t)?.check_interlacing();
        vertices += report.vertices.len();
        failures += report.vertices.iter().filter(|v| !v.passed()).count();
    }
    Ok((failures == 0, format!("{vertices} vertices, {failures} failures")))
}

fn star_example() -> Outcome {
    let mut b = TreeBuilder::new("x", 1, int(1), int(0));
    b.child("a", "x", int(1), int(0))?.child("b", "x", int(1), int(0))?;
    let t = b.build()?;
    let family = PolyFamily::build(&t)?;
    let x = t.top();
    let p = |c: &[i64]| Poly::new(c.iter().map(|&v| int(v)).collect());
    let char = char_poly(&TruncatedOperator::new(&t));
    let spectrum = theorem2_spectrum(&family, x)?;
    let ok = *family.own(x) == Poly::z()
        && *family.up(x) == p(&[-2, 0, 1])
        && char == p(&[0, -2, 0, 1])
        && spectrum.product() == char
        && spectrum.part_b.len() == 1
        && spectrum.part_b[0].factor == Poly::z();
    Ok((ok, format!("P_xx = {}, P_xx' = {}, det = {}", family.own(x).pretty(), family.up(x).pretty(), char.pretty())))
}

fn wronskian_identity() -> Outcome {
    let mut rng = corpus::rng(4);
    let mut checked = 0;
    let mut failures = 0;
    for _ in 0..20 {
        let t = random_spined_tree(&mut rng, 10, 10)?;
        let bottom = t.index_of(&format!("v{}", t.height()))?;
        let path = PathSelection::from_bottom(&t, bottom)?;
        let (v, u) = solve_pair(&t, &path, &i())?;
        for (n, &x) in path.vertices().iter().enumerate() {
            checked += 1;
            if wronskian(&v, &u, &path, n)? != gaussian(t.lambda(x).recip(), int(0)) {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{checked} path positions, {failures} failures")))
}

fn uniqueness() -> Outcome {
    let trees = corpus()?;
    let mut checked = 0;
    let mut failures = 0;
    for t in &trees {
        for x in 0..t.len() {
            checked += 1;
            if uniqueness_dimension(t, x, &i())? != 1 {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{checked} subtrees, {failures} with dimension != 1")))
}

fn rotated_positivity() -> Outcome {
    let mut rng = corpus::rng(6);
    let mut failures = 0;
    let mut vertices = 0;
    for _ in 0..20 {
        let t = random_symmetric_tree(&mut rng, 12)?;
        let report = lemma4_positivity(&t, &PathSelection::leftmost(&t)?)?;
        vertices += report.vertices_checked;
        if !report.passed {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("20 trees, {vertices} vertices, {failures} failing trees")))
}

fn theorem3() -> Outcome {
    let b = theorem3_build(8, &NormSchedule::standard(8))?;
    let residual_failures = b.field.residual_failures().len();
    let ok = residual_failures == 0 && b.ledger_within_bounds() && b.ledger.len() == 9;
    let last = b.ledger.last().expect("ledger has rows");
    Ok((
        ok,
        format!(
            "{} vertices, {residual_failures} nonzero residuals, norm {} <= {}",
            b.tree.len(),
            format_rational(&last.norm_sq),
            format_rational(&last.bound)
        ),
    ))
}

fn remark2() -> Outcome {
    let mut outside = Vec::new();
    for depth in 2..=5 {
        outside.push(remark2_build(4, depth)?.base_outside);
    }
    let sums = pq_partial_sums(&degenerate_path(30)?, &int(0), 30)?;
    let increase = &sums[30] - &sums[20];
    let threshold = rat(1, 1_000_000);
    let growing = ClassicalJacobi::from_rules(|n| pow2(n as i64), |_| Rational::zero(), 30)?;
    let g = pq_partial_sums(&growing, &int(0), 30)?;
    let g_increase = &g[30] - &g[20];
    println!("INFO 8 reference weights 2^n: partial-sum increase from N=20 to N=30 is {:.4e}", approx(&g_increase));
    let ok = outside.iter().all(|&c| c == 0) && increase < threshold;
    Ok((
        ok,
        format!(
            "J_0 eigenvalues outside [-2,2] at depths 2..5: {outside:?}; partial-sum increase for 2^-n from N=20 to N=30: {:.4e}",
            approx(&increase)
        ),
    ))
}

fn approx(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

fn lemma5() -> Outcome {
    let j = lemma5_family(&int(2), &int(1), 41)?;
    let kernel_ok = kernel_vector_residuals(&j, 40)?.iter().all(Zero::is_zero);
    let mut rng = corpus::rng(9);
    let mut failures = 0;
    for _ in 0..50 {
        let a = rat(rng.gen_range(-20..=20), rng.gen_range(1..=9));
        let b = rat(rng.gen_range(-20..=20), rng.gen_range(1..=9));
        if !even_reduction_residuals(&j, (&a, &b), 40)?.iter().all(Zero::is_zero) {
            failures += 1;
        }
    }
    Ok((kernel_ok && failures == 0, format!("kernel residuals zero up to N=40: {kernel_ok}; reduction failures: {failures}/50")))
}

fn positivity() -> Outcome {
    let h = generate(Shape::Homogeneous { arity: 2, depth: 4 }, &Coefficients::constant(int(1), int(4)))?;
    let verdict = positivity_check(&h, &vec![Rational::one(); h.len()])?;
    let mut rng = corpus::rng(10);
    let mut failures = 0;
    for _ in 0..20 {
        let t = random_positive_definite_tree(&mut rng, 12)?;
        let built = positivity_construct_m(&t, &PathSelection::leftmost(&t)?, 1)?;
        let check = built.certificate.check();
        if !check.passed || !built.certificate.m.iter().all(Signed::is_positive) {
            failures += 1;
        }
    }
    Ok((
        verdict.certified && failures == 0,
        format!(
            "m = 1 certified: {}, negative eigenvalues: {}; constructed certificates failing: {failures}/20",
            verdict.certified,
            verdict.negative_eigenvalues.map_or("not counted".to_string(), |k| k.to_string())
        ),
    ))
}

fn prop5() -> Outcome {
    let b = prop5_build(4)?;
    let x0 = b.path.vertices()[0];
    let obstruction = match propagate_real(&b.tree, x0, &Rational::zero())? {
        RealPropagation::Obstruction { vertex } => Some(b.tree.name(vertex).to_string()),
        RealPropagation::Field(_) => None,
    };
    let mut rng = corpus::rng(11);
    let lambdas: Vec<Rational> = (0..8).map(|_| corpus::random_lambda(&mut rng)).collect();
    let betas: Vec<Rational> = (0..8).map(|_| corpus::random_beta(&mut rng)).collect();
    let path_tree = generate(Shape::Path { depth: 7 }, &Coefficients::new(|s| lambdas[s.level].clone(), |s| betas[s.level].clone()))?;
    let bottom = path_tree.index_of("x0")?;
    let mut path_obstructions = 0;
    for _ in 0..20 {
        let r = rat(rng.gen_range(-40..=40), rng.gen_range(1..=8));
        if matches!(propagate_real(&path_tree, bottom, &r)?, RealPropagation::Obstruction { .. }) {
            path_obstructions += 1;
        }
    }
    Ok((
        obstruction.is_some() && path_obstructions == 0,
        format!("obstruction at {}; path obstructions: {path_obstructions}/20", obstruction.as_deref().unwrap_or("none")),
    ))
}

fn carleman() -> Outcome {
    let c = Coefficients::new(|s| if s.on_spine() { int(s.level as i64 + 1) } else { int(1) }, |_| int(0));
    let t = generate(Shape::Homogeneous { arity: 2, depth: 15 }, &c)?;
    let path = PathSelection::leftmost(&t)?;
    let depths: Vec<usize> = (3..=15).collect();
    let profile = norm_growth_profile(&t, &path, &i(), &GaussianRational::one(), &depths, Execution::default())?;

    let b = theorem3_build(8, &NormSchedule::standard(8))?;
    let seed = gaussian(pow2(-1), int(0));
    let bounded = norm_growth_profile(&b.tree, &b.path, &i(), &seed, &(1..=8).collect::<Vec<_>>(), Execution::default())?;
    let below_one = bounded.rows.iter().all(|r| r.norm_sq <= Rational::one());
    Ok((
        profile.norm_strictly_increasing && below_one,
        format!(
            "indicator for lambda = n+1: {} (norm strictly increasing over 3..15: {}); indicator for the bounded construction: {} (norm <= 1: {below_one})",
            profile.indicator(),
            profile.norm_strictly_increasing,
            bounded.indicator()
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("spectral identity oracle", spectral_identity),
        ("real simple interlacing roots and degree law", interlacing_suite),
        ("star worked example", star_example),
        ("wronskian along random paths", wronskian_identity),
        ("uniqueness dimension at z = i", uniqueness),
        ("rotated solution positivity", rotated_positivity),
        ("small-norm solution construction", theorem3),
        ("bounded base plus degenerate path", remark2),
        ("explicit coefficient family", lemma5),
        ("positivity certificates", positivity),
        ("real parameter without solutions", prop5),
        ("carleman indicator", carleman),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(result) => result,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} {:>2} {name}: {detail} ({:.2}s)", if ok { "PASS" } else { "FAIL" }, k + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
