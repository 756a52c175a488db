//! `classical`: path (one-dimensional) Jacobi matrices.

use clap::{Args, ValueEnum};
use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use treejacobi::classical::{
    even_reduction_residuals, kernel_vector_residuals, lemma5_family, positivity_sign_vector, pq_partial_sums, pq_values,
    product_ratio_check, recursion_residuals, wronskians, ClassicalJacobi,
};
use treejacobi::corpus;
use treejacobi::exactmath::{int, pow2, rat, Rational};

use super::Global;
use crate::input::{rational_value, CliResult};
use crate::report::{rational, rationals, ReportBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `λ_{2n} = λ_{2n+1} = q^n` with the matching diagonal.
    Lemma5,
    /// `λ ≡ 1`, `β ≡ 0`.
    Free,
    /// `λ_n = 2^{-n}`, `β ≡ 0`.
    Degenerate,
    /// `λ_n = n + 1`, `β ≡ 0`.
    Linear,
    /// `λ ≡ 1`, `β ≡ 3`; diagonally dominant, hence positive definite.
    Shifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalReport {
    /// `p_n(x), q_n(x)`, the partial sums of their squares, recursion and Wronskian checks.
    Pq0,
    /// Residual of the alternating kernel vector of the diagonal-free matrix.
    Kernel,
    /// Even-index reduction for random seeds.
    Reduction,
    /// Product formulas for `p_{2n}(0)` and `q_{2n+1}(0)` when `β ≡ 0`.
    ProductRatio,
    /// `(−1)^n p_n(0)` for a positive definite truncation.
    SignVector,
}

#[derive(Args, Debug, Serialize)]
pub struct ClassicalArgs {
    #[arg(long, value_enum)]
    pub rule: Rule,
    /// Ratio `q > 1` of the explicit family.
    #[arg(long, default_value = "2")]
    pub q: String,
    /// Nonzero scale `a` of the explicit family.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub a: String,
    /// Highest index `N`.
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    #[arg(long, value_enum, default_value = "pq0")]
    pub report: ClassicalReport,
    /// Evaluation point for `pq0`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x: String,
    /// Random seeds for `reduction`.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

fn matrix(args: &ClassicalArgs, cap: usize) -> CliResult<ClassicalJacobi> {
    Ok(match args.rule {
        Rule::Lemma5 => lemma5_family(&rational_value(&args.q)?, &rational_value(&args.a)?, cap)?,
        Rule::Free => ClassicalJacobi::from_rules(|_| int(1), |_| Rational::zero(), cap)?,
        Rule::Degenerate => ClassicalJacobi::from_rules(|n| pow2(-(n as i64)), |_| Rational::zero(), cap)?,
        Rule::Linear => ClassicalJacobi::from_rules(|n| int(n as i64 + 1), |_| Rational::zero(), cap)?,
        Rule::Shifted => ClassicalJacobi::from_rules(|_| int(1), |_| int(3), cap)?,
    })
}

fn all_zero(rs: &[Rational]) -> bool {
    rs.iter().all(Zero::is_zero)
}

pub fn classical_cmd(args: &ClassicalArgs, global: Global, r: &mut ReportBuilder) -> CliResult<()> {
    let n = args.depth;
    let j = matrix(args, 2 * n + 2)?;
    r.result("lambdas", rationals(&(0..=n).map(|k| j.lambda(k).clone()).collect::<Vec<_>>()));
    r.result("betas", rationals(&(0..=n).map(|k| j.beta(k).clone()).collect::<Vec<_>>()));
    match args.report {
        ClassicalReport::Pq0 => {
            let x = rational_value(&args.x)?;
            let (p, q) = pq_values(&j, &x, n)?;
            let sums = pq_partial_sums(&j, &x, n)?;
            let rows: Vec<_> =
                (0..=n).map(|k| json!({ "n": k, "p": rational(&p[k]), "q": rational(&q[k]), "partial_sum": rational(&sums[k]) })).collect();
            r.result("x", rational(&x));
            r.result("rows", rows);
            r.check("recursion for p", all_zero(&recursion_residuals(&j, &x, &p)), "residuals at 0 <= n < N");
            let q_res = recursion_residuals(&j, &x, &q);
            r.check("recursion for q", all_zero(&q_res[1.min(q_res.len())..]), "residuals at 1 <= n < N");
            let w = wronskians(&j, &p, &q);
            r.check("wronskian", w.iter().all(|v| *v == int(1)), format!("{} indices", w.len()));
            r.note(format!("sum of p_n^2 + q_n^2 up to N = {n}: {:.6e}", approx(&sums[n])));
        }
        ClassicalReport::Kernel => {
            let res = kernel_vector_residuals(&j, n)?;
            r.result("residuals", rationals(&res));
            r.check("kernel vector", all_zero(&res), format!("{} rows", res.len()));
        }
        ClassicalReport::Reduction => {
            let mut rng = corpus::rng(global.seed);
            let mut failures = 0;
            let mut seeds = Vec::new();
            for _ in 0..args.samples {
                let a = rat(rng.gen_range(-20..=20), rng.gen_range(1..=9));
                let b = rat(rng.gen_range(-20..=20), rng.gen_range(1..=9));
                failures += usize::from(!all_zero(&even_reduction_residuals(&j, (&a, &b), n)?));
                seeds.push(json!([rational(&a), rational(&b)]));
            }
            if global.full {
                r.result("seeds", seeds);
            }
            r.check("even-index reduction", failures == 0, format!("{} seeds, {failures} failures", args.samples));
        }
        ClassicalReport::ProductRatio => {
            let report = product_ratio_check(&j, n / 2)?;
            r.check("product formulas", report.passed, format!("{} indices, failures at {:?}", report.checked, report.failures));
            r.result("product_ratio", report);
        }
        ClassicalReport::SignVector => {
            let signs = positivity_sign_vector(&j, n)?;
            r.result("sign_vector", rationals(&signs));
            r.check("sign vector positive", signs.iter().all(Signed::is_positive), format!("{} entries", signs.len()));
        }
    }
    Ok(())
}

fn approx(r: &Rational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::INFINITY)
}
