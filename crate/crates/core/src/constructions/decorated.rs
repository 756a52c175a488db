//! A path `x_n` with a pendant `y_{n-1}` below each `x_n`, `n ≥ 1`.
//!
//! With `β ≡ 0` on the path, `β_{y_{n-1}} = β_n` and `λ_{y_{n-1}} = μ_n`,
//! `μ_n² = 1 + β_n²`, the solution at `z = i` satisfies the reduced recurrence
//! `2i v_n = λ_n v_{n+1} − β_n v_n + λ_{n-1} v_{n-1}` and `|v(y_{n-1})| = |v_n|`.
//!
//! When some `1 + β_n²` is not a rational square the pendants are kept in the
//! scaled coordinate `w_n = μ_n v(y_{n-1})`, where all coefficients are rational:
//! `i v_n = λ_n v_{n+1} + λ_{n-1} v_{n-1} + w_n` and `i w_n = μ_n² v_n + β_n w_n`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{format_gaussian, gaussian, is_zero_gaussian, rational_sqrt, GaussianRational, Rational};
use crate::solutions::solve_pair;
use crate::tree::{generate, Coefficients, PathSelection, Shape, TreeTruncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PendantWeights {
    /// `μ_n` must be rational; a tree is built and solved.
    Exact,
    /// Only `μ_n²` is used; the check runs in scaled coordinates.
    Squared,
}

#[derive(Clone, Debug)]
pub struct DecoratedPath {
    pub mode: PendantWeights,
    /// Present in exact mode.
    pub tree: Option<TreeTruncation>,
    /// `μ_n²` for `1 ≤ n ≤ depth`; index 0 unused.
    pub mu_sq: Vec<Rational>,
    /// `v_0, …, v_depth` and the value above the top.
    pub path_values: Vec<GaussianRational>,
    /// `λ_n v_{n+1} − β_n v_n + λ_{n-1} v_{n-1} − 2i v_n` for `1 ≤ n ≤ depth`.
    pub reduced_residuals: Vec<GaussianRational>,
    /// Eigen-equation residuals at every vertex (scaled coordinates in squared mode).
    pub eigen_residuals: Vec<GaussianRational>,
    /// `|v(y_{n-1})|² = |v_n|²` for `1 ≤ n ≤ depth`.
    pub pendant_identity: Vec<bool>,
}

impl DecoratedPath {
    pub fn passed(&self) -> bool {
        self.reduced_residuals.iter().chain(&self.eigen_residuals).all(is_zero_gaussian) && self.pendant_identity.iter().all(|&b| b)
    }

    pub fn reduced_residual_strings(&self) -> Vec<String> {
        self.reduced_residuals.iter().map(format_gaussian).collect()
    }
}

fn real(r: &Rational) -> GaussianRational {
    gaussian(r.clone(), Rational::zero())
}

/// `lambdas(n)` gives `λ_{x_n}` for `0 ≤ n ≤ depth`; `betas(n)` gives
/// `β_{y_{n-1}}` for `1 ≤ n ≤ depth`.
pub fn decorated_path_build(
    lambdas: impl Fn(usize) -> Rational,
    betas: impl Fn(usize) -> Rational,
    depth: usize,
    mode: PendantWeights,
) -> Result<DecoratedPath> {
    if depth == 0 {
        return Err(Error::Argument("depth must be at least 1".into()));
    }
    let lam: Vec<Rational> = (0..=depth).map(&lambdas).collect();
    let beta: Vec<Rational> = (0..=depth).map(|n| if n == 0 { Rational::zero() } else { betas(n) }).collect();
    let mu_sq: Vec<Rational> = beta.iter().map(|b| Rational::one() + b * b).collect();
    let i = gaussian(Rational::zero(), Rational::one());
    let (path_values, pendant_sq, eigen_residuals, tree) = match mode {
        PendantWeights::Exact => {
            let mut mu = vec![Rational::one()];
            for (n, m2) in mu_sq.iter().enumerate().skip(1) {
                mu.push(rational_sqrt(m2).ok_or_else(|| Error::Argument(format!("1 + beta_{n}^2 is not a rational square")))?);
            }
            let coeffs = Coefficients::new(
                |s| if s.on_spine() { lam[s.level].clone() } else { mu[s.level + 1].clone() },
                |s| if s.on_spine() { Rational::zero() } else { beta[s.level + 1].clone() },
            );
            let tree = generate(Shape::DecoratedPath { depth }, &coeffs)?;
            let path = PathSelection::leftmost(&tree)?;
            let (v, _) = solve_pair(&tree, &path, &i)?;
            let mut along: Vec<GaussianRational> = path.vertices().iter().map(|&x| v.value(x).clone()).collect();
            along.push(v.above_top().clone());
            let pendant_sq =
                (1..=depth).map(|n| v.value(tree.index_of(&format!("y{}", n - 1)).expect("pendant exists")).norm_sqr()).collect::<Vec<_>>();
            let residuals = (0..tree.len()).map(|s| v.residual(s)).collect();
            (along, pendant_sq, residuals, Some(tree))
        }
        PendantWeights::Squared => {
            let mut v = vec![GaussianRational::one(), &i / real(&lam[0])];
            let mut w = vec![GaussianRational::zero()];
            for n in 1..=depth {
                let denom = &i - real(&beta[n]);
                w.push(v[n].scale(mu_sq[n].clone()) / denom);
                let next = (&i * &v[n] - v[n - 1].scale(lam[n - 1].clone()) - &w[n]) / real(&lam[n]);
                v.push(next);
            }
            let mut residuals = vec![&i * &v[0] - v[1].scale(lam[0].clone())];
            for n in 1..=depth {
                residuals.push(&i * &v[n] - v[n + 1].scale(lam[n].clone()) - v[n - 1].scale(lam[n - 1].clone()) - &w[n]);
                residuals.push(&i * &w[n] - v[n].scale(mu_sq[n].clone()) - w[n].scale(beta[n].clone()));
            }
            // |v(y_{n-1})|² = |w_n|² / μ_n²
            let pendant_sq = (1..=depth).map(|n| w[n].norm_sqr() / &mu_sq[n]).collect();
            (v, pendant_sq, residuals, None)
        }
    };
    let two_i = gaussian(Rational::zero(), Rational::from_integer(2.into()));
    let reduced_residuals = (1..=depth)
        .map(|n| {
            path_values[n + 1].scale(lam[n].clone()) - path_values[n].scale(beta[n].clone()) + path_values[n - 1].scale(lam[n - 1].clone())
                - &two_i * &path_values[n]
        })
        .collect();
    let pendant_identity = (1..=depth).map(|n| pendant_sq[n - 1] == path_values[n].norm_sqr()).collect();
    Ok(DecoratedPath { mode, tree, mu_sq, path_values, reduced_residuals, eigen_residuals, pendant_identity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::lemma5_family;
    use crate::exactmath::{int, rat};

    #[test]
    fn pythagorean_beta() {
        let d = decorated_path_build(|_| int(1), |_| rat(3, 4), 6, PendantWeights::Exact).unwrap();
        assert_eq!(d.mu_sq[1], rat(25, 16));
        let t = d.tree.as_ref().unwrap();
        assert_eq!(*t.lambda(t.index_of("y0").unwrap()), rat(5, 4));
        assert!(d.passed());
    }

    #[test]
    fn zero_beta_is_the_free_recurrence() {
        let d = decorated_path_build(|_| int(1), |_| int(0), 5, PendantWeights::Exact).unwrap();
        assert!(d.passed());
        assert!(d.mu_sq.iter().all(|m| *m == int(1)));
    }

    #[test]
    fn nonsquare_needs_squared_mode() {
        assert!(matches!(decorated_path_build(|_| int(1), |_| int(1), 3, PendantWeights::Exact), Err(Error::Argument(_))));
        assert!(decorated_path_build(|_| int(1), |_| int(1), 3, PendantWeights::Squared).unwrap().passed());
    }

    #[test]
    fn modes_agree_when_both_apply() {
        let lam = |n: usize| rat(n as i64 + 2, 3);
        let beta = |n: usize| if n.is_multiple_of(2) { rat(3, 4) } else { rat(-5, 12) };
        let e = decorated_path_build(lam, beta, 7, PendantWeights::Exact).unwrap();
        let s = decorated_path_build(lam, beta, 7, PendantWeights::Squared).unwrap();
        assert_eq!(e.path_values, s.path_values);
        assert!(e.passed() && s.passed());
    }

    #[test]
    fn lemma5_pipeline() {
        let j = lemma5_family(&int(2), &int(1), 11).unwrap();
        let d = decorated_path_build(|n| j.lambda(n).clone(), |n| j.beta(n).clone(), 10, PendantWeights::Squared).unwrap();
        assert!(d.passed());
    }
}
