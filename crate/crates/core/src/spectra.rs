//! Exact spectra of truncated operators `J_x`.
//!
//! The characteristic polynomial is computed by a cofactor recursion over the
//! tree (with a dense Hessenberg routine as an independent check) and compared
//! against the factorization predicted by the polynomial family:
//!
//! `det(z − J_x) = P_{x,x'} · Π_t [Π_i P_{t_i,t}] / P_{t,t}` (all factors monic),
//!
//! the product running over the vertices `t` of `Γ_x` with children `t_1, …, t_k`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::linalg::Matrix;
use crate::exactmath::{count_roots_with_multiplicity, isolate_real_roots, Poly, Rational, RootSet};
use crate::tree::TreeTruncation;
use crate::treepoly::PolyFamily;

/// `J_x` as an exact symmetric matrix in the tree's storage order.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    tree: TreeTruncation,
    matrix: Matrix<Rational>,
}

impl TruncatedOperator {
    pub fn new(tree: &TreeTruncation) -> Self {
        TruncatedOperator { tree: tree.clone(), matrix: tree.dense_matrix() }
    }

    pub fn tree(&self) -> &TreeTruncation {
        &self.tree
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }
}

/// `det(z − J_x)` by expanding along the tree: with `D_v` the determinant for
/// `Γ_v` and `E_v = Π_{c ∈ N_v} D_c`,
/// `D_v = (z − β_v) E_v − Σ_c λ_c² E_c Π_{c' ≠ c} D_{c'}`.
pub fn char_poly(op: &TruncatedOperator) -> Poly {
    let tree = &op.tree;
    let n = tree.len();
    let mut d: Vec<Poly> = vec![Poly::zero(); n];
    let mut e: Vec<Poly> = vec![Poly::one(); n];
    for v in tree.postorder() {
        let kids = tree.children(v);
        // prefix[k] = D_{c_0} ⋯ D_{c_{k-1}}, suffix likewise from the right
        let mut prefix = vec![Poly::one()];
        for &c in kids {
            prefix.push(prefix.last().expect("nonempty") * &d[c]);
        }
        let mut suffix = vec![Poly::one(); kids.len() + 1];
        for k in (0..kids.len()).rev() {
            suffix[k] = &suffix[k + 1] * &d[kids[k]];
        }
        let all = prefix[kids.len()].clone();
        let mut dv = &Poly::linear(-tree.beta(v).clone(), Rational::one()) * &all;
        for (k, &c) in kids.iter().enumerate() {
            let l2 = tree.lambda(c) * tree.lambda(c);
            let others = &prefix[k] * &suffix[k + 1];
            dv = &dv - &(&e[c] * &others).scale(&l2);
        }
        d[v] = dv;
        e[v] = all;
    }
    d[tree.top()].clone()
}

/// `det(z − A)` for any square rational matrix, by reduction to upper
/// Hessenberg form followed by the standard determinant recurrence.
pub fn char_poly_dense(a: &Matrix<Rational>) -> Poly {
    let n = a.len();
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        for i in j + 2..n {
            if h[i][j].is_zero() {
                continue;
            }
            let u = &h[i][j] / &h[j + 1][j];
            for k in 0..n {
                let delta = &u * &h[j + 1][k];
                h[i][k] -= delta;
            }
            for row in h.iter_mut() {
                let delta = &u * &row[i];
                row[j + 1] += delta;
            }
        }
    }
    let mut p = vec![Poly::one()];
    for m in 0..n {
        let mut next = &Poly::linear(-h[m][m].clone(), Rational::one()) * &p[m];
        let mut sub = Rational::one();
        for i in (0..m).rev() {
            sub *= &h[i + 1][i];
            if sub.is_zero() {
                break;
            }
            next = &next - &p[i].scale(&(&h[i][m] * &sub));
        }
        p.push(next);
    }
    p.pop().expect("nonempty")
}

/// Multiplicity of `r` as a root of `p` (zero polynomial excluded).
pub fn root_multiplicity(p: &Poly, r: &Rational) -> usize {
    let lin = Poly::linear(-r.clone(), Rational::one());
    let mut q = p.clone();
    let mut m = 0;
    while !q.is_zero() && q.eval(r).is_zero() {
        q = q.exact_div(&lin).expect("r is a root");
        m += 1;
    }
    m
}

/// Real roots of `p` strictly below `a` or strictly above `b`, with multiplicity.
pub fn count_outside(p: &Poly, a: &Rational, b: &Rational) -> usize {
    let below = count_roots_with_multiplicity(p, None, Some(a)) - root_multiplicity(p, a);
    let above = count_roots_with_multiplicity(p, Some(b), None);
    below + above
}

/// Negative eigenvalues of `J_x`, counted with multiplicity.
pub fn count_negative_eigenvalues(op: &TruncatedOperator) -> usize {
    let p = char_poly(op);
    let zero = Rational::zero();
    count_roots_with_multiplicity(&p, None, Some(&zero)) - root_multiplicity(&p, &zero)
}

/// Eigenvalues shared by the subtrees hanging below one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedRoots {
    pub vertex: usize,
    /// `Π_i monic(P_{t_i,t}) / monic(P_{t,t})`
    pub factor: Poly,
    /// Roots of `factor`; a root shared by `n` children appears with multiplicity `n − 1`.
    pub roots: RootSet,
}

impl SharedRoots {
    pub fn contributed(&self) -> usize {
        self.factor.deg()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralDescription {
    pub top: usize,
    /// `monic(P_{x,x'})`
    pub up: Poly,
    /// Roots of `P_{x,x'}`, all simple.
    pub part_a: RootSet,
    /// Only vertices with a nonconstant shared factor are listed.
    pub part_b: Vec<SharedRoots>,
}

impl SpectralDescription {
    /// The predicted characteristic polynomial.
    pub fn product(&self) -> Poly {
        self.part_b.iter().fold(self.up.clone(), |acc, s| &acc * &s.factor)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.up.deg() + self.part_b.iter().map(SharedRoots::contributed).sum::<usize>()
    }
}

fn shared_factor(family: &PolyFamily, t: usize) -> Result<Poly> {
    let tree = family.tree();
    let product = tree.children(t).iter().fold(Poly::one(), |acc, &c| &acc * &family.up(c).monic());
    product.exact_div(family.own(t))
}

/// `(t, Π_i monic(P_{t_i,t}) / monic(P_{t,t}))` for every `t ∈ Γ_x` where the
/// factor is nonconstant.
pub fn shared_factors(family: &PolyFamily, x: usize) -> Result<Vec<(usize, Poly)>> {
    let tree = family.tree();
    let mut out = Vec::new();
    for t in tree.descendants(x) {
        if tree.children(t).is_empty() {
            continue;
        }
        let factor = shared_factor(family, t)?;
        if !factor.is_constant() {
            out.push((t, factor));
        }
    }
    out.sort_by_key(|&(t, _)| t);
    Ok(out)
}

/// Spectrum of `J_x` assembled from the family: roots of `P_{x,x'}` plus the
/// roots shared among sibling subtrees at each vertex of `Γ_x`.
pub fn theorem2_spectrum(family: &PolyFamily, x: usize) -> Result<SpectralDescription> {
    let up = family.up(x).monic();
    let part_b = shared_factors(family, x)?
        .into_iter()
        .map(|(vertex, factor)| SharedRoots { vertex, roots: isolate_real_roots(&factor), factor })
        .collect();
    Ok(SpectralDescription { top: x, part_a: isolate_real_roots(&up), up, part_b })
}

fn predicted_char_poly(family: &PolyFamily, x: usize) -> Result<Poly> {
    Ok(shared_factors(family, x)?.iter().fold(family.up(x).monic(), |acc, (_, f)| &acc * f))
}

/// `monic(det(z − J_x))` equals the product of the predicted factors.
pub fn verify_spectral_identity(family: &PolyFamily, x: usize) -> Result<bool> {
    let sub = family.tree().subtree(x);
    let char = char_poly(&TruncatedOperator::new(&sub)).monic();
    let predicted = predicted_char_poly(family, x)?;
    Ok(char == predicted)
}

/// The multiplicity-free fallback: same distinct roots.
pub fn verify_spectral_sets(family: &PolyFamily, x: usize) -> Result<bool> {
    let sub = family.tree().subtree(x);
    let char = char_poly(&TruncatedOperator::new(&sub));
    let predicted = predicted_char_poly(family, x)?;
    Ok(char.square_free_part() == predicted.square_free_part())
}

/// Roots of `det(z − J_x)` outside `[a, b]`, counted factor by factor so that
/// large truncations never form the full characteristic polynomial. Equal
/// factors are counted once and weighted.
pub fn count_outside_factored(family: &PolyFamily, x: usize, a: &Rational, b: &Rational) -> Result<usize> {
    let mut weights: BTreeMap<String, (Poly, usize)> = BTreeMap::new();
    for (_, factor) in shared_factors(family, x)? {
        weights.entry(factor.to_string()).or_insert_with(|| (factor, 0)).1 += 1;
    }
    let mut total = count_outside(family.up(x), a, b);
    for (factor, w) in weights.values() {
        total += w * count_outside(factor, a, b);
    }
    Ok(total)
}

/// An eigenvector of `J_x` living on two sibling subtrees `Γ_{y_1} ∪ Γ_{y_2}`
/// below `t`, valid at every common root of `P_{y_1,t}` and `P_{y_2,t}`.
/// Entries are polynomials in `z`; all checks are done modulo
/// `g = gcd(P_{y_1,t}, P_{y_2,t})`, so irrational roots are covered exactly.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EigenvectorWitness {
    pub vertex: String,
    pub first: String,
    pub second: String,
    /// Coefficient list of `g`.
    pub shared: String,
    /// `(J_x − z) u ≡ 0 (mod g)` at every vertex.
    pub residual_vanishes: bool,
    /// `u(y_1)` is coprime to `g`, so `u ≠ 0` at each root.
    pub nonzero: bool,
    /// Rational roots of `g` at which `J_x u = r u` was also checked by direct evaluation.
    pub rational_roots_checked: usize,
}

impl EigenvectorWitness {
    pub fn passed(&self) -> bool {
        self.residual_vanishes && self.nonzero
    }
}

/// Witnesses for every sibling pair below every vertex of `Γ_x` that shares a root.
pub fn eigenvector_witnesses(family: &PolyFamily, x: usize) -> Result<Vec<EigenvectorWitness>> {
    let tree = family.tree();
    let mut out = Vec::new();
    for t in tree.descendants(x) {
        let kids = tree.children(t);
        for i in 0..kids.len() {
            for j in i + 1..kids.len() {
                let (y1, y2) = (kids[i], kids[j]);
                let g = family.up(y1).gcd(family.up(y2));
                if g.is_constant() {
                    continue;
                }
                out.push(witness(family, t, y1, y2, &g)?);
            }
        }
    }
    Ok(out)
}

fn witness(family: &PolyFamily, t: usize, y1: usize, y2: usize, g: &Poly) -> Result<EigenvectorWitness> {
    let tree = family.tree();
    let n = tree.len();
    let mut u: Vec<Poly> = vec![Poly::zero(); n];
    let c1 = family.own(y2).scale(tree.lambda(y2));
    let c2 = -&family.own(y1).scale(tree.lambda(y1));
    for (y, c) in [(y1, &c1), (y2, &c2)] {
        for s in tree.descendants(y) {
            u[s] = (c * family.get(y, s).expect("s below y")).rem(g)?;
        }
    }
    let residual = |s: usize, z: &Poly| -> Result<Poly> {
        let mut r = &(z - &Poly::constant(tree.beta(s).clone())) * &u[s];
        if let Some(p) = tree.parent(s) {
            r = &r - &u[p].scale(tree.lambda(s));
        }
        for &c in tree.children(s) {
            r = &r - &u[c].scale(tree.lambda(c));
        }
        r.rem(g)
    };
    let mut support: Vec<usize> = tree.descendants(y1);
    support.extend(tree.descendants(y2));
    support.push(t);
    let mut residual_vanishes = true;
    for &s in &support {
        residual_vanishes &= residual(s, &Poly::z())?.is_zero();
    }
    let nonzero = u[y1].gcd(g).is_constant();

    let mut rational_roots_checked = 0;
    for root in isolate_real_roots(g).roots.iter().filter(|r| r.is_exact()) {
        let r = &root.lo;
        let value = |s: usize| u[s].eval(r);
        for &s in &support {
            let mut lhs = (tree.beta(s) - r) * value(s);
            if let Some(p) = tree.parent(s) {
                lhs += tree.lambda(s) * value(p);
            }
            for &c in tree.children(s) {
                lhs += tree.lambda(c) * value(c);
            }
            if !lhs.is_zero() {
                residual_vanishes = false;
            }
        }
        rational_roots_checked += 1;
    }
    Ok(EigenvectorWitness {
        vertex: tree.name(t).to_string(),
        first: tree.name(y1).to_string(),
        second: tree.name(y2).to_string(),
        shared: g.to_string(),
        residual_vanishes,
        nonzero,
        rational_roots_checked,
    })
}

/// Checks that a family's spectral factorization is self-consistent; the
/// only failure mode is an inexact division, reported as an error.
pub fn spectral_identity_or_fallback(family: &PolyFamily, x: usize) -> Result<IdentityVerdict> {
    if verify_spectral_identity(family, x)? {
        return Ok(IdentityVerdict::Exact);
    }
    if verify_spectral_sets(family, x)? {
        Ok(IdentityVerdict::SetsOnly)
    } else {
        Err(Error::Division(format!("spectral factorization disagrees with det(z - J) at `{}`", family.tree().name(x))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityVerdict {
    /// Polynomial identity with multiplicities.
    Exact,
    /// Only the sets of distinct eigenvalues agree.
    SetsOnly,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::tree::{generate, Coefficients, Shape, TreeBuilder};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    fn star(beta_x: i64, beta_a: i64, beta_b: i64) -> TreeTruncation {
        let mut b = TreeBuilder::new("x", 1, int(1), int(beta_x));
        b.child("a", "x", int(1), int(beta_a)).unwrap().child("b", "x", int(1), int(beta_b)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn char_poly_examples() {
        let one = TreeBuilder::new("v", 0, int(1), int(7)).build().unwrap();
        assert_eq!(char_poly(&TruncatedOperator::new(&one)), p(&[-7, 1]));
        let s = TruncatedOperator::new(&star(0, 0, 0));
        assert_eq!(char_poly(&s), p(&[0, -2, 0, 1]));
        assert_eq!(char_poly_dense(s.matrix()), p(&[0, -2, 0, 1]));
        let path = generate(Shape::Path { depth: 2 }, &Coefficients::free()).unwrap();
        assert_eq!(char_poly(&TruncatedOperator::new(&path)), p(&[0, -2, 0, 1]));
    }

    #[test]
    fn tree_and_dense_routes_agree() {
        let c = Coefficients::new(|s| rat(s.level as i64 + 2, 3), |s| rat(s.child_index as i64 * 2 - 1, 2));
        let t = generate(Shape::Homogeneous { arity: 3, depth: 2 }, &c).unwrap();
        let op = TruncatedOperator::new(&t);
        assert_eq!(char_poly(&op), char_poly_dense(op.matrix()));
    }

    #[test]
    fn direct_sum_multiplies() {
        let a = star(1, 2, 3).dense_matrix();
        let b = generate(Shape::Path { depth: 2 }, &Coefficients::constant(rat(1, 2), int(1))).unwrap().dense_matrix();
        let n = a.len() + b.len();
        let mut m = vec![vec![int(0); n]; n];
        for i in 0..a.len() {
            for j in 0..a.len() {
                m[i][j] = a[i][j].clone();
            }
        }
        for i in 0..b.len() {
            for j in 0..b.len() {
                m[a.len() + i][a.len() + j] = b[i][j].clone();
            }
        }
        assert_eq!(char_poly_dense(&m), &char_poly_dense(&a) * &char_poly_dense(&b));
    }

    #[test]
    fn theorem2_examples() {
        let t = star(0, 0, 0);
        let f = PolyFamily::build(&t).unwrap();
        let s = theorem2_spectrum(&f, t.top()).unwrap();
        assert_eq!(s.up, p(&[-2, 0, 1]));
        assert_eq!(s.part_a.distinct(), 2);
        assert_eq!(s.part_b.len(), 1);
        assert_eq!(s.part_b[0].factor, Poly::z());
        assert_eq!(s.part_b[0].roots.multiplicities(), vec![1]);
        assert!(verify_spectral_identity(&f, t.top()).unwrap());

        let path = generate(Shape::Path { depth: 4 }, &Coefficients::free()).unwrap();
        let fp = PolyFamily::build(&path).unwrap();
        assert!(theorem2_spectrum(&fp, path.top()).unwrap().part_b.is_empty());

        let t12 = star(0, 1, 2);
        let f12 = PolyFamily::build(&t12).unwrap();
        let s12 = theorem2_spectrum(&f12, t12.top()).unwrap();
        assert!(s12.part_b.is_empty());
        assert_eq!(s12.up.monic(), char_poly(&TruncatedOperator::new(&t12)));
    }

    #[test]
    fn identity_on_a_single_vertex() {
        let t = TreeBuilder::new("v", 0, int(3), int(5)).build().unwrap();
        let f = PolyFamily::build(&t).unwrap();
        assert!(verify_spectral_identity(&f, 0).unwrap());
        assert_eq!(spectral_identity_or_fallback(&f, 0).unwrap(), IdentityVerdict::Exact);
    }

    #[test]
    fn negative_eigenvalue_counts() {
        assert_eq!(count_negative_eigenvalues(&TruncatedOperator::new(&star(4, 4, 4))), 0);
        assert_eq!(count_negative_eigenvalues(&TruncatedOperator::new(&star(0, 0, 0))), 1);
        let neg = TreeBuilder::new("v", 0, int(1), int(-1)).build().unwrap();
        assert_eq!(count_negative_eigenvalues(&TruncatedOperator::new(&neg)), 1);
        assert_eq!(root_multiplicity(&p(&[0, 0, 1, 1]), &int(0)), 2);
        // z^3 - 2z has ±√2 outside [-1, 1]
        assert_eq!(count_outside(&p(&[0, -2, 0, 1]), &int(-1), &int(1)), 2);
        assert_eq!(count_outside(&p(&[0, -2, 0, 1]), &int(-2), &int(2)), 0);
    }

    #[test]
    fn factored_counts_match_full_counts() {
        let t = generate(Shape::Homogeneous { arity: 4, depth: 2 }, &Coefficients::constant(rat(1, 2), int(0))).unwrap();
        let f = PolyFamily::build(&t).unwrap();
        let full = char_poly(&TruncatedOperator::new(&t));
        for (a, b) in [(int(-2), int(2)), (rat(-1, 2), rat(1, 2)), (int(0), int(0))] {
            assert_eq!(count_outside_factored(&f, t.top(), &a, &b).unwrap(), count_outside(&full, &a, &b));
        }
    }

    #[test]
    fn witnesses_for_shared_roots() {
        // shared root 0 (rational) on the star
        let t = star(0, 0, 0);
        let f = PolyFamily::build(&t).unwrap();
        let w = eigenvector_witnesses(&f, t.top()).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].passed());
        assert_eq!(w[0].rational_roots_checked, 1);

        // identical depth-2 branches share the irrational roots ±√2
        let h = generate(Shape::Homogeneous { arity: 2, depth: 2 }, &Coefficients::free()).unwrap();
        let fh = PolyFamily::build(&h).unwrap();
        let wh = eigenvector_witnesses(&fh, h.top()).unwrap();
        assert!(wh.iter().all(EigenvectorWitness::passed));
        assert!(wh.iter().any(|w| w.shared == "[-2/1, 0/1, 1/1]"));
    }
}
