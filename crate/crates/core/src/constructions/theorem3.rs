//! A symmetric matrix on the binary tree whose solution at `z = i` has
//! norm below 1 on every truncation.
//!
//! The spine weights are chosen inductively. At step `n` the weight
//! `λ_{x_{n-1}}` is doubled from 1 until `|v(x_n)|²` fits the budget. Inside
//! the side subtree below `x_n` every weight is 1. The pendant weight
//! `λ_y` is halved from 1 until the rescaled side solution fits the budget.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, gaussian, is_zero_gaussian, pow2, GaussianRational, Rational};
use crate::par::Execution;
use crate::solutions::{side_ratios, SolutionField};
use crate::tree::{generate, Coefficients, PathSelection, Shape, TreeTruncation};

/// Seed `v(x_0)` and the per-step budgets for `|v(x_n)|²` and the side norms.
#[derive(Clone, Debug)]
pub struct NormSchedule {
    pub seed: Rational,
    budgets: Vec<Rational>,
}

impl NormSchedule {
    /// `v(x_0) = 1/2` and budget `2^{-n-2}` for each part of step `n`, so the
    /// norm on `Γ_{x_n}` stays below `3/4 − 2^{-n-1} ≤ 1 − 2^{-n}`.
    pub fn standard(depth: usize) -> Self {
        NormSchedule { seed: pow2(-1), budgets: (0..=depth + 1).map(|n| pow2(-(n as i64) - 2)).collect() }
    }

    pub fn custom(seed: Rational, budget: impl Fn(usize) -> Rational, depth: usize) -> Self {
        NormSchedule { seed, budgets: (0..=depth + 1).map(budget).collect() }
    }

    fn budget(&self, n: usize) -> &Rational {
        &self.budgets[n]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRow {
    pub step: usize,
    /// `|v(x_n)|²`
    pub path_sq: Rational,
    /// `Σ ‖v|Γ_y‖²` over the side children of `x_n`.
    pub side_sq: Rational,
    /// `‖v|Γ_{x_n}‖²`
    pub norm_sq: Rational,
    /// `1 − 2^{-n}`
    pub bound: Rational,
}

impl LedgerRow {
    pub fn within_bound(&self) -> bool {
        self.norm_sq <= self.bound
    }
}

#[derive(Serialize)]
struct LedgerRowJson {
    step: usize,
    path_sq: String,
    side_sq: String,
    norm_sq: String,
    bound: String,
    within_bound: bool,
}

impl Serialize for LedgerRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LedgerRowJson {
            step: self.step,
            path_sq: format_rational(&self.path_sq),
            side_sq: format_rational(&self.side_sq),
            norm_sq: format_rational(&self.norm_sq),
            bound: format_rational(&self.bound),
            within_bound: self.within_bound(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug)]
pub struct Theorem3Build {
    pub tree: TreeTruncation,
    pub path: PathSelection,
    pub field: SolutionField,
    pub ledger: Vec<LedgerRow>,
}

impl Theorem3Build {
    pub fn ledger_within_bounds(&self) -> bool {
        self.ledger.iter().filter(|r| r.step >= 1).all(LedgerRow::within_bound)
    }
}

fn real(r: Rational) -> GaussianRational {
    gaussian(r, Rational::zero())
}

/// Builds the matrix on `Γ_{x_depth}` with `β ≡ 0` and its solution at `z = i`.
/// The top weight is chosen by one more doubling step, so the eigen-equation
/// holds at every vertex including the top.
pub fn theorem3_build(depth: usize, schedule: &NormSchedule) -> Result<Theorem3Build> {
    if depth == 0 {
        return Err(Error::Argument("depth must be at least 1".into()));
    }
    let z = gaussian(Rational::zero(), Rational::one());
    let skeleton = generate(Shape::Homogeneous { arity: 2, depth }, &Coefficients::free())?;
    let path = PathSelection::leftmost(&skeleton)?;
    let xs = path.vertices().to_vec();
    // ratios inside side subtrees, where every weight is 1
    let rho = side_ratios(&skeleton, &path, &z, Execution::default())?;
    let mut weight = vec![Rational::zero(); skeleton.len()];
    for level in skeleton.levels() {
        for v in level {
            if rho[v].is_some() {
                weight[v] = Rational::one()
                    + skeleton.children(v).iter().map(|&c| rho[c].as_ref().expect("side").norm_sqr() * &weight[c]).sum::<Rational>();
            }
        }
    }

    let mut lambda = vec![Rational::one(); skeleton.len()];
    let mut values = vec![GaussianRational::zero(); skeleton.len()];
    values[xs[0]] = real(schedule.seed.clone());
    let mut ledger = vec![LedgerRow {
        step: 0,
        path_sq: values[xs[0]].norm_sqr(),
        side_sq: Rational::zero(),
        norm_sq: values[xs[0]].norm_sqr(),
        bound: Rational::zero(),
    }];
    let mut above_top = GaussianRational::zero();
    for n in 1..=depth + 1 {
        let below = xs[n - 1];
        let mut rhs = &z * &values[below];
        for &c in skeleton.children(below) {
            rhs -= values[c].scale(lambda[c].clone());
        }
        if is_zero_gaussian(&rhs) {
            return Err(Error::Construction(format!("step {n}: the spine equation has a vanishing right-hand side")));
        }
        let mut weight_below = Rational::one();
        while rhs.norm_sqr() / (&weight_below * &weight_below) > *schedule.budget(n) {
            weight_below *= Rational::from_integer(2.into());
        }
        let value = rhs / real(weight_below.clone());
        lambda[below] = weight_below;
        if n > depth {
            above_top = value;
            break;
        }
        let x = xs[n];
        values[x] = value;
        let mut side_sq = Rational::zero();
        for &y in skeleton.children(x) {
            if y == below {
                continue;
            }
            let mut numer = z.clone();
            for &c in skeleton.children(y) {
                numer -= rho[c].clone().expect("side");
            }
            if is_zero_gaussian(&numer) {
                return Err(Error::Construction(format!(
                    "step {n}: the pendant equation at `{}` has a vanishing numerator",
                    skeleton.name(y)
                )));
            }
            let base = values[x].norm_sqr() * &weight[y] / numer.norm_sqr();
            let mut pendant = Rational::one();
            while &pendant * &pendant * &base > *schedule.budget(n) {
                pendant /= Rational::from_integer(2.into());
            }
            side_sq += &pendant * &pendant * &base;
            let scale = values[x].scale(pendant.clone()) / numer;
            lambda[y] = pendant;
            for s in skeleton.descendants(y) {
                values[s] = if s == y {
                    scale.clone()
                } else {
                    let p = skeleton.parent(s).expect("below y");
                    &values[p] * rho[s].as_ref().expect("side")
                };
            }
        }
        let path_sq = values[x].norm_sqr();
        let norm_sq = &ledger[n - 1].norm_sq + &path_sq + &side_sq;
        ledger.push(LedgerRow { step: n, path_sq, side_sq, norm_sq, bound: Rational::one() - pow2(-(n as i64)) });
    }
    let tree = skeleton.with_coefficients(lambda, vec![Rational::zero(); skeleton.len()])?;
    let field = SolutionField::from_values(&tree, z, values, above_top)?;
    if let Some(&v) = field.residual_failures().first() {
        return Err(Error::Construction(format!("eigen-equation fails at `{}`", tree.name(v))));
    }
    Ok(Theorem3Build { tree, path, field, ledger })
}
