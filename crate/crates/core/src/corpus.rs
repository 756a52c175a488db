//! Deterministic tree corpora for property suites: every rooted shape up to a
//! size, and seeded random trees with random rational coefficients.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exactmath::{int, rat, Rational};
use crate::tree::TreeBuilder;
use crate::tree::TreeTruncation;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Builds a truncation from a parent array (`parents[k] < k` for `k ≥ 1`,
/// vertex 0 is the top). The top sits at the height of the rooted tree and
/// childless vertices above level 0 are cut.
pub fn from_parents(parents: &[usize], lambdas: &[Rational], betas: &[Rational]) -> Result<TreeTruncation> {
    let n = parents.len() + 1;
    let mut depth = vec![0usize; n];
    for k in 1..n {
        depth[k] = depth[parents[k - 1]] + 1;
    }
    let height = depth.iter().copied().max().unwrap_or(0);
    let mut b = TreeBuilder::new("v0", height, lambdas[0].clone(), betas[0].clone()).auto_cut();
    for k in 1..n {
        b.child(&format!("v{k}"), &format!("v{}", parents[k - 1]), lambdas[k].clone(), betas[k].clone())?;
    }
    b.build()
}

fn canonical(parents: &[usize]) -> String {
    let n = parents.len() + 1;
    let mut children = vec![Vec::new(); n];
    for (k, &p) in parents.iter().enumerate() {
        children[p].push(k + 1);
    }
    fn encode(v: usize, children: &[Vec<usize>]) -> String {
        let mut parts: Vec<String> = children[v].iter().map(|&c| encode(c, children)).collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    encode(0, &children)
}

/// One parent array per rooted unordered tree with at most `max_vertices` vertices.
pub fn rooted_shapes(max_vertices: usize) -> Vec<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(parents) = stack.pop() {
        if seen.insert(canonical(&parents)) {
            out.push(parents.clone());
        }
        if parents.len() + 1 < max_vertices {
            for p in 0..=parents.len() {
                let mut next = parents.clone();
                next.push(p);
                stack.push(next);
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Every rooted shape with at most `max_vertices` vertices, `λ ≡ 1`, `β ≡ 0`.
pub fn exhaustive_shapes(max_vertices: usize) -> Result<Vec<TreeTruncation>> {
    rooted_shapes(max_vertices)
        .iter()
        .map(|p| {
            let n = p.len() + 1;
            from_parents(p, &vec![int(1); n], &vec![int(0); n])
        })
        .collect()
}

/// A rational in `(0, 3]` with denominator at most 4.
pub fn random_lambda(rng: &mut CorpusRng) -> Rational {
    let den = rng.gen_range(1..=4i64);
    rat(rng.gen_range(1..=3 * den), den)
}

/// A rational in `[−3, 3]` with denominator at most 4.
pub fn random_beta(rng: &mut CorpusRng) -> Rational {
    let den = rng.gen_range(1..=4i64);
    rat(rng.gen_range(-3 * den..=3 * den), den)
}

fn random_parents(rng: &mut CorpusRng, n: usize) -> Vec<usize> {
    (1..n).map(|k| rng.gen_range(0..k)).collect()
}

/// A random tree with `1..=max_vertices` vertices, `λ ∈ (0, 3]`, `β ∈ [−3, 3]`.
pub fn random_tree(rng: &mut CorpusRng, max_vertices: usize) -> Result<TreeTruncation> {
    let n = rng.gen_range(1..=max_vertices);
    let parents = random_parents(rng, n);
    let lambdas: Vec<Rational> = (0..n).map(|_| random_lambda(rng)).collect();
    let betas: Vec<Rational> = (0..n).map(|_| random_beta(rng)).collect();
    from_parents(&parents, &lambdas, &betas)
}

/// Like [`random_tree`] with `β ≡ 0`.
pub fn random_symmetric_tree(rng: &mut CorpusRng, max_vertices: usize) -> Result<TreeTruncation> {
    let t = random_tree(rng, max_vertices)?;
    let lambdas = (0..t.len()).map(|v| t.lambda(v).clone()).collect();
    t.with_coefficients(lambdas, vec![Rational::zero(); t.len()])
}

/// A random tree made positive definite by strict diagonal dominance:
/// `β_x = [x ≠ top] λ_x + Σ λ_y + r_x` with `r_x ∈ (0, 2]`.
pub fn random_positive_definite_tree(rng: &mut CorpusRng, max_vertices: usize) -> Result<TreeTruncation> {
    let t = random_tree(rng, max_vertices)?;
    let lambdas: Vec<Rational> = (0..t.len()).map(|v| t.lambda(v).clone()).collect();
    let betas = (0..t.len())
        .map(|x| {
            let up = if t.parent(x).is_some() { t.lambda(x).clone() } else { Rational::zero() };
            let down: Rational = t.children(x).iter().map(|&y| t.lambda(y).clone()).sum();
            let den = rng.gen_range(1..=4i64);
            up + down + rat(rng.gen_range(1..=2 * den), den)
        })
        .collect();
    t.with_coefficients(lambdas, betas)
}

/// A random tree containing a spine of `1..=max_height` edges, with up to
/// `extra` more vertices attached anywhere. Vertex `v{height}` is level 0 on the spine.
pub fn random_spined_tree(rng: &mut CorpusRng, max_height: usize, extra: usize) -> Result<TreeTruncation> {
    let height = rng.gen_range(1..=max_height);
    let mut parents: Vec<usize> = (0..height).collect();
    let spine_len = height + 1;
    let more = rng.gen_range(0..=extra);
    let mut depth: Vec<usize> = (0..spine_len).collect();
    for k in spine_len..spine_len + more {
        // keep every vertex at depth ≤ height so the spine bottom stays on level 0
        let p = loop {
            let p = rng.gen_range(0..k);
            if depth[p] < height {
                break p;
            }
        };
        parents.push(p);
        depth.push(depth[p] + 1);
    }
    let n = parents.len() + 1;
    let lambdas: Vec<Rational> = (0..n).map(|_| random_lambda(rng)).collect();
    let betas: Vec<Rational> = (0..n).map(|_| random_beta(rng)).collect();
    from_parents(&parents, &lambdas, &betas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| rooted_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 8, 17, 37]);
        assert_eq!(exhaustive_shapes(6).unwrap().len(), 37);
    }

    #[test]
    fn random_trees_are_deterministic_and_bounded() {
        let a: Vec<TreeTruncation> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(random_tree(r, 12).unwrap())).collect();
        let b: Vec<TreeTruncation> = (0..5).map(|_| ()).scan(rng(7), |r, _| Some(random_tree(r, 12).unwrap())).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|t| t.len() <= 12));
    }

    #[test]
    fn spined_tree_bottom_is_level_zero() {
        let mut r = rng(3);
        for _ in 0..10 {
            let t = random_spined_tree(&mut r, 10, 8).unwrap();
            let h = t.height();
            assert_eq!(t.level(t.index_of(&format!("v{h}")).unwrap()), 0);
        }
    }
}
