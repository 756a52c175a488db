//! The polynomial family `P_{x,t}(z)`.
//!
//! For a vertex `x` the values `t ↦ P_{x,t}(z)`, `t ∈ Γ_x ∪ {x'}`, form the
//! solution of the eigen-equation on `Γ_x \ {x}`, unique up to scale. They are
//! built bottom-up: a childless vertex has `P_{x,x} = 1`; otherwise `P_{x,x}` is
//! the monic lcm of the children's `P_{y,x}`, values below `x` are transferred
//! from each child by `P_{x,t} = P_{x,x} / P_{y,x} · P_{y,t}`, and the value at
//! the parent comes from the eigen-equation at `x`:
//! `λ_x P_{x,x'} = (z − β_x) P_{x,x} − Σ_y λ_y P_{x,y}`.

use std::collections::HashMap;

use num_traits::One;
use serde::Serialize;

use crate::error::Result;
use crate::exactmath::{has_real_simple_roots, strict_interlace, Poly, Rational};
use crate::par::Execution;
use crate::tree::TreeTruncation;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Entry {
    /// `t ↦ P_{x,t}` for `t ∈ Γ_x`.
    below: HashMap<usize, Poly>,
    /// `P_{x,x'}`
    up: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFamily {
    tree: TreeTruncation,
    entries: Vec<Entry>,
}

fn compute_entry(tree: &TreeTruncation, entries: &[Option<Entry>], x: usize) -> Result<Entry> {
    let z_minus_beta = Poly::linear(-tree.beta(x).clone(), Rational::one());
    let kids = tree.children(x);
    let mut below = HashMap::new();
    if kids.is_empty() {
        below.insert(x, Poly::one());
        let up = z_minus_beta.scale(&tree.lambda(x).recip());
        return Ok(Entry { below, up });
    }
    let child = |y: usize| entries[y].as_ref().expect("children are computed first");
    let mut own = Poly::one();
    for &y in kids {
        own = own.lcm(&child(y).up)?;
    }
    let mut side_sum = Poly::zero();
    for &y in kids {
        let cy = child(y);
        let factor = own.exact_div(&cy.up)?;
        for (&t, p) in &cy.below {
            below.insert(t, &factor * p);
        }
        side_sum = &side_sum + &below[&y].scale(tree.lambda(y));
    }
    let up = (&(&z_minus_beta * &own) - &side_sum).scale(&tree.lambda(x).recip());
    below.insert(x, own);
    Ok(Entry { below, up })
}

impl PolyFamily {
    /// The family for every vertex of `tree`, computed level by level.
    pub fn build(tree: &TreeTruncation) -> Result<Self> {
        Self::build_with(tree, Execution::default())
    }

    pub fn build_with(tree: &TreeTruncation, exec: Execution) -> Result<Self> {
        let mut entries: Vec<Option<Entry>> = vec![None; tree.len()];
        for level in tree.levels() {
            let done = &entries;
            let computed = exec.map(&level, |&x| compute_entry(tree, done, x));
            for (x, e) in level.into_iter().zip(computed) {
                entries[x] = Some(e?);
            }
        }
        Ok(PolyFamily { tree: tree.clone(), entries: entries.into_iter().map(|e| e.expect("every level visited")).collect() })
    }

    /// The family of `Γ_x`.
    pub fn for_subtree(tree: &TreeTruncation, x: usize) -> Result<Self> {
        Self::build(&tree.subtree(x))
    }

    pub fn tree(&self) -> &TreeTruncation {
        &self.tree
    }

    /// `P_{x,x}`, monic.
    pub fn own(&self, x: usize) -> &Poly {
        &self.entries[x].below[&x]
    }

    /// `P_{x,x'}`
    pub fn up(&self, x: usize) -> &Poly {
        &self.entries[x].up
    }

    /// `P_{x,t}` for `t ∈ Γ_x`; `None` when `t` is not below `x`.
    pub fn get(&self, x: usize, t: usize) -> Option<&Poly> {
        self.entries[x].below.get(&t)
    }

    /// All `(t, P_{x,t})` with `t ∈ Γ_x` in storage order.
    pub fn row(&self, x: usize) -> Vec<(usize, &Poly)> {
        let mut row: Vec<(usize, &Poly)> = self.entries[x].below.iter().map(|(&t, p)| (t, p)).collect();
        row.sort_by_key(|&(t, _)| t);
        row
    }

    /// Roots, degrees, leading coefficients and interlacing at every vertex.
    pub fn check_interlacing(&self) -> InterlacingReport {
        let tree = &self.tree;
        let vertices: Vec<VertexInterlacing> = (0..tree.len())
            .map(|v| {
                let own = self.own(v);
                let up = self.up(v);
                VertexInterlacing {
                    vertex: tree.name(v).to_string(),
                    own_real_simple: has_real_simple_roots(own),
                    up_real_simple: has_real_simple_roots(up),
                    interlaced: strict_interlace(up, own),
                    degree_law: up.deg() == own.deg() + 1,
                    leading_law: own.is_monic() && up.leading() == Some(&tree.lambda(v).recip()),
                }
            })
            .collect();
        let passed = vertices.iter().all(VertexInterlacing::passed);
        InterlacingReport { vertices, passed }
    }

    /// Exact division `P_{y,t} | P_{x,t}` for every child `y` of `x` and
    /// every `t ∈ Γ_y ∪ {x}`.
    pub fn check_divisibility(&self) -> DivisibilityReport {
        let tree = &self.tree;
        let mut checked = 0;
        let mut failures = Vec::new();
        for x in 0..tree.len() {
            for &y in tree.children(x) {
                let mut pairs = vec![(x, self.up(y))];
                pairs.extend(self.row(y));
                for (t, small) in pairs {
                    checked += 1;
                    let big = self.get(x, t).expect("t lies below x");
                    let rem = big.rem(small).expect("family entries are nonzero");
                    if !rem.is_zero() {
                        failures.push(DivisibilityFailure {
                            outer: tree.name(x).to_string(),
                            inner: tree.name(y).to_string(),
                            target: tree.name(t).to_string(),
                            remainder: rem.to_string(),
                        });
                    }
                }
            }
        }
        DivisibilityReport { checked, passed: failures.is_empty(), failures }
    }

    /// Checks the telescoping product along every descending path
    /// `y = y_0, y_1, …, y_n = x`:
    /// `P_{x,y} · Π_{k≥1} P_{y_{k-1},y_k} = Π_{k≥0} P_{y_k,y_k}`.
    pub fn verify_telescoping(&self) -> bool {
        let tree = &self.tree;
        (0..tree.len()).all(|y| {
            let chain = tree.ancestors(y);
            let mut lhs_factors = Poly::one();
            let mut rhs = self.own(y).clone();
            chain.windows(2).all(|w| {
                let (lower, upper) = (w[0], w[1]);
                lhs_factors = &lhs_factors * self.up(lower);
                rhs = &rhs * self.own(upper);
                self.get(upper, y).expect("y below upper") * &lhs_factors == rhs
            })
        })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VertexInterlacing {
    pub vertex: String,
    pub own_real_simple: bool,
    pub up_real_simple: bool,
    pub interlaced: bool,
    pub degree_law: bool,
    pub leading_law: bool,
}

impl VertexInterlacing {
    pub fn passed(&self) -> bool {
        self.own_real_simple && self.up_real_simple && self.interlaced && self.degree_law && self.leading_law
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InterlacingReport {
    pub vertices: Vec<VertexInterlacing>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DivisibilityFailure {
    pub outer: String,
    pub inner: String,
    pub target: String,
    pub remainder: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub checked: usize,
    pub passed: bool,
    pub failures: Vec<DivisibilityFailure>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{gaussian, int, is_zero_gaussian, rat};
    use crate::tree::{generate, Coefficients, Shape, TreeBuilder};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    fn star(beta_a: i64, beta_b: i64) -> TreeTruncation {
        let mut b = TreeBuilder::new("x", 1, int(1), int(0));
        b.child("a", "x", int(1), int(beta_a)).unwrap().child("b", "x", int(1), int(beta_b)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn level_zero_vertex() {
        let t = TreeBuilder::new("v", 0, int(2), int(3)).build().unwrap();
        let f = PolyFamily::build(&t).unwrap();
        assert_eq!(*f.own(0), Poly::one());
        assert_eq!(*f.up(0), Poly::linear(rat(-3, 2), rat(1, 2)));
        assert!(f.check_interlacing().passed);
    }

    #[test]
    fn star_family() {
        let t = star(0, 0);
        let f = PolyFamily::build(&t).unwrap();
        let x = t.top();
        assert_eq!(*f.own(x), Poly::z());
        assert_eq!(*f.up(x), p(&[-2, 0, 1]));
        assert_eq!(*f.get(x, t.index_of("a").unwrap()).unwrap(), Poly::one());
        assert!(f.check_interlacing().passed);
        let d = f.check_divisibility();
        assert!(d.passed);
        assert!(d.checked > 0);

        let f5 = PolyFamily::build(&star(5, 5)).unwrap();
        assert_eq!(*f5.own(x), p(&[-5, 1]));
    }

    #[test]
    fn path_divisibility() {
        let t = generate(Shape::Path { depth: 3 }, &Coefficients::free()).unwrap();
        let f = PolyFamily::build(&t).unwrap();
        let (x0, x1, x2) = (t.index_of("x0").unwrap(), t.index_of("x1").unwrap(), t.index_of("x2").unwrap());
        assert!(f.get(x1, x0).unwrap().divides(f.get(x2, x0).unwrap()));
        assert!(f.check_divisibility().passed);
        assert!(f.verify_telescoping());
    }

    #[test]
    fn homogeneous_laws_and_nonvanishing() {
        let c = Coefficients::new(|s| rat(s.level as i64 + 1, 2), |s| rat(s.child_index as i64 - 1, 3));
        let t = generate(Shape::Homogeneous { arity: 2, depth: 3 }, &c).unwrap();
        let f = PolyFamily::build(&t).unwrap();
        assert!(f.check_interlacing().passed);
        assert!(f.check_divisibility().passed);
        assert!(f.verify_telescoping());
        let i = gaussian(int(0), int(1));
        assert!((0..t.len()).all(|v| !is_zero_gaussian(&f.own(v).eval_gaussian(&i))));
        let seq = PolyFamily::build_with(&t, Execution::Sequential).unwrap();
        assert!((0..t.len()).all(|v| seq.up(v) == f.up(v) && seq.row(v) == f.row(v)));
    }

    #[test]
    fn eigen_equation_holds_below_x() {
        let t = generate(Shape::Homogeneous { arity: 3, depth: 2 }, &Coefficients::constant(int(1), int(1))).unwrap();
        let f = PolyFamily::build(&t).unwrap();
        let x = t.top();
        let zp = Poly::z();
        for v in 0..t.len() {
            if v == x {
                continue;
            }
            let parent = t.parent(v).unwrap();
            let mut rhs = f.get(x, parent).unwrap().scale(t.lambda(v));
            rhs = &rhs + &f.get(x, v).unwrap().scale(t.beta(v));
            for &c in t.children(v) {
                rhs = &rhs + &f.get(x, c).unwrap().scale(t.lambda(c));
            }
            assert_eq!(&zp * f.get(x, v).unwrap(), rhs);
        }
    }
}
