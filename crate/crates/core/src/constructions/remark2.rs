//! A bounded homogeneous matrix plus a degenerate path matrix.
//!
//! On the `d`-ary tree the base matrix has `λ ≡ 1/√d` and `β ≡ 0`, so every
//! truncation has spectrum in `[−2, 2]`. Along the leftmost path the extra
//! weights `2^{-n}` are added.

use num_traits::Zero;

use crate::classical::ClassicalJacobi;
use crate::error::{Error, Result};
use crate::exactmath::{int, pow2, rational_sqrt, Rational};
use crate::spectra::count_outside_factored;
use crate::tree::{generate, Coefficients, Shape, TreeTruncation};
use crate::treepoly::PolyFamily;

#[derive(Clone, Debug)]
pub struct Remark2Build {
    /// `J_0 + J_1`
    pub tree: TreeTruncation,
    /// `J_0` alone.
    pub base: TreeTruncation,
    /// Eigenvalues of the `J_0` truncation outside `[−2, 2]`, with multiplicity.
    pub base_outside: usize,
}

pub fn remark2_build(d: usize, depth: usize) -> Result<Remark2Build> {
    if d < 1 {
        return Err(Error::Argument("branching must be positive".into()));
    }
    let side = rational_sqrt(&int(d as i64)).ok_or_else(|| Error::Argument(format!("branching {d} is not a perfect square")))?.recip();
    let shape = Shape::Homogeneous { arity: d, depth };
    let base = generate(shape, &Coefficients::constant(side.clone(), Rational::zero()))?;
    let perturbed = Coefficients::new(|s| if s.on_spine() { &side + pow2(-(s.level as i64)) } else { side.clone() }, |_| Rational::zero());
    let tree = generate(shape, &perturbed)?;
    let family = PolyFamily::build(&base)?;
    let base_outside = count_outside_factored(&family, base.top(), &int(-2), &int(2))?;
    Ok(Remark2Build { tree, base, base_outside })
}

/// The degenerate path part alone as a classical matrix, `λ_n = 2^{-n}`, `β ≡ 0`.
pub fn degenerate_path(cap: usize) -> Result<ClassicalJacobi> {
    ClassicalJacobi::from_rules(|n| pow2(-(n as i64)), |_| Rational::zero(), cap)
}
