//! A matrix on the binary tree for which `J v = 0` has no solution with
//! `v(x_0) ≠ 0`.
//!
//! Below each pendant `y_k` (the side child of `x_{k+1}`) the weights are 1 and
//! the diagonal is 4, a positive definite block. The solution of `J v = 0` there
//! is unique up to scale and nonzero at `y_k`; `β_{y_k}` is chosen so that the
//! equation at `y_k` forces `v(x_{k+1}) = 0`. Spine vertices have `λ = 1` and
//! `β = 0`, except `x_0`, whose diagonal is a parameter. With `β_{x_0} = 0`
//! the vector `δ_{x_0} − δ_{y_0}` lies in the kernel, so the default is 1.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, int, Rational};
use crate::solutions::solution_space_dimension;
use crate::spectra::{count_negative_eigenvalues, TruncatedOperator};
use crate::tree::{generate, Coefficients, PathSelection, Shape, TreeTruncation};
use crate::treepoly::PolyFamily;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PendantBlock {
    pub pendant: String,
    pub beta: String,
    /// Dimension of the solutions of `J v = 0` on `Γ_{y_k} \ {y_k}`.
    pub interior_dimension: usize,
    /// Negative eigenvalues of each block below the pendant.
    pub interior_negative: usize,
}

#[derive(Clone, Debug)]
pub struct Prop5Build {
    pub tree: TreeTruncation,
    pub path: PathSelection,
    pub blocks: Vec<PendantBlock>,
}

pub fn prop5_build(depth: usize) -> Result<Prop5Build> {
    prop5_build_with(depth, &Rational::one())
}

pub fn prop5_build_with(depth: usize, x0_beta: &Rational) -> Result<Prop5Build> {
    if depth < 2 {
        return Err(Error::Argument("depth must be at least 2".into()));
    }
    let coeffs = Coefficients::new(
        |_| Rational::one(),
        |s| match s.distance {
            0 if s.level == 0 => x0_beta.clone(),
            0 | 1 => Rational::zero(),
            _ => int(4),
        },
    );
    let skeleton = generate(Shape::Homogeneous { arity: 2, depth }, &coeffs)?;
    let path = PathSelection::leftmost(&skeleton)?;
    let xs = path.vertices().to_vec();
    let zero = Rational::zero();
    let mut betas: Vec<Rational> = (0..skeleton.len()).map(|v| skeleton.beta(v).clone()).collect();
    let mut blocks = Vec::new();
    for n in 1..xs.len() {
        for &y in skeleton.children(xs[n]) {
            if y == xs[n - 1] {
                continue;
            }
            let sub = skeleton.subtree(y);
            let family = PolyFamily::build(&sub)?;
            let top = sub.top();
            let at_top = family.own(top).eval(&zero);
            if at_top.is_zero() {
                return Err(Error::Construction(format!("interior solution vanishes at `{}`", skeleton.name(y))));
            }
            let children_sum: Rational =
                sub.children(top).iter().map(|&c| sub.lambda(c) * family.get(top, c).expect("child").eval(&zero)).sum();
            let beta = -children_sum / at_top;
            betas[y] = beta.clone();
            let interior_negative =
                sub.children(top).iter().map(|&c| count_negative_eigenvalues(&TruncatedOperator::new(&sub.subtree(c)))).sum();
            blocks.push(PendantBlock {
                pendant: skeleton.name(y).to_string(),
                beta: format_rational(&beta),
                interior_dimension: solution_space_dimension(&sub, top, &zero),
                interior_negative,
            });
        }
    }
    let lambdas = (0..skeleton.len()).map(|v| skeleton.lambda(v).clone()).collect();
    let tree = skeleton.with_coefficients(lambdas, betas)?;
    Ok(Prop5Build { tree, path, blocks })
}
