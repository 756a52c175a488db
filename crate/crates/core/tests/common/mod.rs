#![allow(dead_code)]

use proptest::prelude::*;

use treejacobi::corpus::from_parents;
use treejacobi::exactmath::{gaussian, rat, GaussianRational, Poly, Rational};
use treejacobi::tree::TreeTruncation;

/// A rational `n / d` with `n ∈ lo..=hi` and `d ∈ 1..=4`.
pub fn rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (1..=4i64).prop_flat_map(move |d| (lo * d..=hi * d).prop_map(move |n| rat(n, d)))
}

pub fn lambda() -> impl Strategy<Value = Rational> {
    (1..=4i64).prop_flat_map(|d| (1..=3 * d).prop_map(move |n| rat(n, d)))
}

pub fn beta() -> impl Strategy<Value = Rational> {
    rational(-3, 3)
}

pub fn poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(rational(-5, 5), 0..=max_degree + 1).prop_map(Poly::new)
}

pub fn nonzero_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    poly(max_degree).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn gaussian_value() -> impl Strategy<Value = GaussianRational> {
    (rational(-4, 4), rational(-4, 4)).prop_map(|(a, b)| gaussian(a, b))
}

pub fn nonreal() -> impl Strategy<Value = GaussianRational> {
    (rational(-3, 3), rational(-3, 3).prop_filter("nonzero", |b| *b != rat(0, 1))).prop_map(|(a, b)| gaussian(a, b))
}

/// Random tree with at most `max_vertices` vertices, top at the height.
pub fn tree(max_vertices: usize) -> impl Strategy<Value = TreeTruncation> {
    coefficients_for(max_vertices, 3)
}

/// Random tree with `β ≡ 0`.
pub fn symmetric_tree(max_vertices: usize) -> impl Strategy<Value = TreeTruncation> {
    coefficients_for(max_vertices, 0)
}

/// Random tree with `β ∈ [−beta_bound, beta_bound]`.
fn coefficients_for(max_vertices: usize, beta_bound: i64) -> impl Strategy<Value = TreeTruncation> {
    (1..=max_vertices).prop_flat_map(move |n| {
        (
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec(lambda(), n),
            prop::collection::vec(rational(-beta_bound, beta_bound), n),
        )
            .prop_map(|(picks, lambdas, betas)| {
                let parents: Vec<usize> = picks.iter().enumerate().map(|(k, ix)| ix.index(k + 1)).collect();
                from_parents(&parents, &lambdas, &betas).expect("valid parent array")
            })
    })
}
