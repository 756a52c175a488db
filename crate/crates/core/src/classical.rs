//! Classical Jacobi matrices on a path: polynomials of the first and second
//! kind, their values at a point, product-ratio sums, and an explicit
//! coefficient family whose `β`-free part has a non-summable kernel vector.
//!
//! The recurrence is `x p_n = λ_n p_{n+1} + β_n p_n + λ_{n-1} p_{n-1}` with
//! `p_{-1} = 0`, `p_0 = 1`; the second kind uses `q_0 = 0`, `q_1 = 1/λ_0`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::{count_roots_with_multiplicity, Poly, Rational};
use crate::spectra::{char_poly, TruncatedOperator};
use crate::tree::{generate, Coefficients, Shape, TreeTruncation};

/// Coefficients `λ_n`, `β_n` for `0 ≤ n ≤ cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalJacobi {
    lambdas: Vec<Rational>,
    betas: Vec<Rational>,
}

impl ClassicalJacobi {
    /// Evaluates both rules at `0..=cap`.
    pub fn from_rules(lambda: impl Fn(usize) -> Rational, beta: impl Fn(usize) -> Rational, cap: usize) -> Result<Self> {
        let lambdas: Vec<Rational> = (0..=cap).map(&lambda).collect();
        if let Some(n) = lambdas.iter().position(|l| !l.is_positive()) {
            return Err(Error::Argument(format!("lambda_{n} must be positive")));
        }
        Ok(ClassicalJacobi { lambdas, betas: (0..=cap).map(beta).collect() })
    }

    pub fn cap(&self) -> usize {
        self.lambdas.len() - 1
    }

    pub fn lambda(&self, n: usize) -> &Rational {
        &self.lambdas[n]
    }

    pub fn beta(&self, n: usize) -> &Rational {
        &self.betas[n]
    }

    pub fn beta_is_zero(&self) -> bool {
        self.betas.iter().all(Zero::is_zero)
    }

    /// The same coefficients with every `β_n` negated.
    pub fn negated_betas(&self) -> Self {
        ClassicalJacobi { lambdas: self.lambdas.clone(), betas: self.betas.iter().map(|b| -b).collect() }
    }

    /// The first `n` rows as a path tree `x0 … x{n-1}` with `x{n-1}` on top.
    pub fn path_tree(&self, n: usize) -> Result<TreeTruncation> {
        if n == 0 || n > self.lambdas.len() {
            return Err(Error::Argument(format!("path length {n} outside 1..={}", self.lambdas.len())));
        }
        let c = Coefficients::new(|s| self.lambdas[s.level].clone(), |s| self.betas[s.level].clone());
        generate(Shape::Path { depth: n - 1 }, &c)
    }

    fn require(&self, n: usize) -> Result<()> {
        if n > self.cap() {
            Err(Error::Argument(format!("index {n} exceeds the depth cap {}", self.cap())))
        } else {
            Ok(())
        }
    }
}

fn recurse<T: Clone>(
    j: &ClassicalJacobi,
    n_max: usize,
    seeds: (T, T),
    step: impl Fn(&T, &T, &Rational, &Rational, &Rational) -> T,
) -> Vec<T> {
    let mut out = vec![seeds.0, seeds.1];
    for n in 1..n_max {
        let next = step(&out[n], &out[n - 1], j.beta(n), j.lambda(n - 1), j.lambda(n));
        out.push(next);
    }
    out.truncate(n_max + 1);
    out
}

/// `(p_0(x), …, p_N(x))` and `(q_0(x), …, q_N(x))`.
pub fn pq_values(j: &ClassicalJacobi, x: &Rational, n_max: usize) -> Result<(Vec<Rational>, Vec<Rational>)> {
    j.require(n_max)?;
    let step = |cur: &Rational, prev: &Rational, b: &Rational, l_prev: &Rational, l: &Rational| ((x - b) * cur - l_prev * prev) / l;
    let p1 = (x - j.beta(0)) / j.lambda(0);
    let p = recurse(j, n_max, (Rational::one(), p1), step);
    let q = recurse(j, n_max, (Rational::zero(), j.lambda(0).recip()), step);
    Ok((p, q))
}

/// `p_0, …, p_N` as polynomials.
pub fn p_polys(j: &ClassicalJacobi, n_max: usize) -> Result<Vec<Poly>> {
    j.require(n_max)?;
    let p1 = Poly::linear(-j.beta(0).clone(), Rational::one()).scale(&j.lambda(0).recip());
    Ok(recurse(j, n_max, (Poly::one(), p1), |cur, prev, b, l_prev, l| {
        (&(&Poly::linear(-b.clone(), Rational::one()) * cur) - &prev.scale(l_prev)).scale(&l.recip())
    }))
}

/// `λ_n p_{n+1}(x) + β_n p_n(x) + λ_{n-1} p_{n-1}(x) − x p_n(x)` for `0 ≤ n < N`.
pub fn recursion_residuals(j: &ClassicalJacobi, x: &Rational, values: &[Rational]) -> Vec<Rational> {
    (0..values.len().saturating_sub(1))
        .map(|n| {
            let below = if n == 0 { Rational::zero() } else { j.lambda(n - 1) * &values[n - 1] };
            j.lambda(n) * &values[n + 1] + j.beta(n) * &values[n] + below - x * &values[n]
        })
        .collect()
}

/// `λ_n (p_n q_{n+1} − q_n p_{n+1})` for `0 ≤ n < N`; identically 1.
pub fn wronskians(j: &ClassicalJacobi, p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    (0..p.len().saturating_sub(1)).map(|n| j.lambda(n) * (&p[n] * &q[n + 1] - &q[n] * &p[n + 1])).collect()
}

/// `Σ_{n=1}^{N} [p_n(x)² + q_n(x)²]` for every `N` from 0 up to `n_max`.
pub fn pq_partial_sums(j: &ClassicalJacobi, x: &Rational, n_max: usize) -> Result<Vec<Rational>> {
    let (p, q) = pq_values(j, x, n_max)?;
    let mut sums = vec![Rational::zero()];
    for n in 1..=n_max {
        let s = &sums[n - 1] + &p[n] * &p[n] + &q[n] * &q[n];
        sums.push(s);
    }
    Ok(sums)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ProductRatioReport {
    pub checked: usize,
    /// Indices `n` where `p_{2n}(0)² = A_n²` or `λ_0² q_{2n+1}(0)² = B_n²` fails.
    pub failures: Vec<usize>,
    pub passed: bool,
}

/// For `β ≡ 0`, compares `p_{2n}(0)²` with `A_n² = (λ_0λ_2⋯λ_{2n-2} / λ_1λ_3⋯λ_{2n-1})²`
/// and `λ_0² q_{2n+1}(0)²` with `B_n² = (λ_1λ_3⋯λ_{2n-1} / λ_2λ_4⋯λ_{2n})²` for `1 ≤ n ≤ N`.
pub fn product_ratio_check(j: &ClassicalJacobi, n_max: usize) -> Result<ProductRatioReport> {
    if !j.beta_is_zero() {
        return Err(Error::Argument("product ratios require beta identically zero".into()));
    }
    let (p, q) = pq_values(j, &Rational::zero(), 2 * n_max + 1)?;
    let mut a = Rational::one();
    let mut b = Rational::one();
    let mut failures = Vec::new();
    for n in 1..=n_max {
        a = a * j.lambda(2 * n - 2) / j.lambda(2 * n - 1);
        b = b * j.lambda(2 * n - 1) / j.lambda(2 * n);
        let lq = j.lambda(0) * &q[2 * n + 1];
        if &p[2 * n] * &p[2 * n] != &a * &a || &lq * &lq != &b * &b {
            failures.push(n);
        }
    }
    Ok(ProductRatioReport { checked: n_max, passed: failures.is_empty(), failures })
}

/// `λ_{2n+1} = λ_{2n} = q^n`, `β_{2n+1} = a q^n`, `β_{2n} = (q^n + q^{n-1}) / a`.
/// The associated recurrence is `0 = λ_n x_{n+1} − β_n x_n + λ_{n-1} x_{n-1}`.
pub fn lemma5_family(q: &Rational, a: &Rational, cap: usize) -> Result<ClassicalJacobi> {
    if q <= &Rational::one() {
        return Err(Error::Argument("q must exceed 1".into()));
    }
    if a.is_zero() {
        return Err(Error::Argument("a must be nonzero".into()));
    }
    let power = |k: usize| num_traits::pow(q.clone(), k);
    ClassicalJacobi::from_rules(
        |n| power(n / 2),
        |n| {
            let k = n / 2;
            if n % 2 == 1 {
                a * power(k)
            } else {
                (power(k) + power(k) / q) / a
            }
        },
        cap,
    )
}

/// Residuals of `λ_n x_{n+1} + λ_{n-1} x_{n-1} = 0` (`β` dropped) for the
/// sequence `x_{2n-1} = 0`, `x_{2n} = (−1)^n`, at indices `0 ≤ n < N`.
pub fn kernel_vector_residuals(j: &ClassicalJacobi, n_max: usize) -> Result<Vec<Rational>> {
    j.require(n_max)?;
    let x = |n: usize| -> Rational {
        match (n % 2, (n / 2) % 2) {
            (1, _) => Rational::zero(),
            (_, 0) => Rational::one(),
            _ => -Rational::one(),
        }
    };
    Ok((0..n_max)
        .map(|n| {
            let below = if n == 0 { Rational::zero() } else { j.lambda(n - 1) * x(n - 1) };
            j.lambda(n) * x(n + 1) + below
        })
        .collect())
}

/// Extends `(x_0, x_1)` through `λ_n x_{n+1} = β_n x_n − λ_{n-1} x_{n-1}` (`n ≥ 1`)
/// and returns `λ_{2n} x_{2n+2} + λ_{2n-2} x_{2n-2}` for `1 ≤ n` with `2n + 2 ≤ N`.
pub fn even_reduction_residuals(j: &ClassicalJacobi, seed: (&Rational, &Rational), n_max: usize) -> Result<Vec<Rational>> {
    j.require(n_max)?;
    let xs = recurse(j, n_max, (seed.0.clone(), seed.1.clone()), |cur, prev, b, l_prev, l| (b * cur - l_prev * prev) / l);
    Ok((1..).take_while(|n| 2 * n + 2 <= n_max).map(|n| j.lambda(2 * n) * &xs[2 * n + 2] + j.lambda(2 * n - 2) * &xs[2 * n - 2]).collect())
}

/// Whether the `n × n` truncation is positive definite (no root of its
/// characteristic polynomial in `(−∞, 0]`).
pub fn truncation_positive_definite(j: &ClassicalJacobi, n: usize) -> Result<bool> {
    let op = TruncatedOperator::new(&j.path_tree(n)?);
    Ok(count_roots_with_multiplicity(&char_poly(&op), None, Some(&Rational::zero())) == 0)
}

/// `((−1)^n p_n(0))_{0 ≤ n < N}` for a positive definite `N × N` truncation.
pub fn positivity_sign_vector(j: &ClassicalJacobi, n: usize) -> Result<Vec<Rational>> {
    if !truncation_positive_definite(j, n)? {
        return Err(Error::Argument(format!("the {n}x{n} truncation is not positive definite")));
    }
    let (p, _) = pq_values(j, &Rational::zero(), n - 1)?;
    let signed: Vec<Rational> = p.into_iter().take(n).enumerate().map(|(k, v)| if k % 2 == 0 { v } else { -v }).collect();
    if let Some(k) = signed.iter().position(|v| !v.is_positive()) {
        return Err(Error::Positivity(format!("(-1)^{k} p_{k}(0) is not positive for a positive definite truncation")));
    }
    Ok(signed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, pow2, rat};
    use crate::treepoly::PolyFamily;

    fn free(cap: usize) -> ClassicalJacobi {
        ClassicalJacobi::from_rules(|_| int(1), |_| int(0), cap).unwrap()
    }

    #[test]
    fn free_values_at_zero() {
        let (p, q) = pq_values(&free(8), &int(0), 8).unwrap();
        let expected: Vec<Rational> = [1, 0, -1, 0, 1, 0, -1, 0, 1].iter().map(|&v| int(v)).collect();
        assert_eq!(p, expected);
        assert_eq!(q[1], int(1));
        assert!(recursion_residuals(&free(8), &int(0), &p).iter().all(Zero::is_zero));
        assert!(wronskians(&free(8), &p, &q).iter().all(|w| *w == int(1)));
    }

    #[test]
    fn residuals_and_wronskian_at_other_points() {
        let j = ClassicalJacobi::from_rules(|n| rat(n as i64 + 2, 3), |n| rat(n as i64 % 3 - 1, 2), 12).unwrap();
        for x in [rat(1, 3), int(-2), int(5)] {
            let (p, q) = pq_values(&j, &x, 12).unwrap();
            assert!(recursion_residuals(&j, &x, &p).iter().all(Zero::is_zero));
            assert!(wronskians(&j, &p, &q).iter().all(|w| *w == int(1)));
        }
        assert!(pq_values(&j, &int(0), 13).is_err());
    }

    #[test]
    fn path_family_matches_polynomials() {
        let j = ClassicalJacobi::from_rules(|n| rat(n as i64 + 1, 2), |n| int(n as i64 - 2), 6).unwrap();
        let t = j.path_tree(6).unwrap();
        let fam = PolyFamily::build(&t).unwrap();
        let p = p_polys(&j, 6).unwrap();
        for n in 0..6 {
            let x = t.index_of(&format!("x{n}")).unwrap();
            let lead = p[n].leading().unwrap().clone();
            assert_eq!(*fam.own(x), p[n].scale(&lead.recip()));
            assert_eq!(*fam.up(x), p[n + 1].scale(&lead.recip()));
        }
    }

    #[test]
    fn geometric_sums_flatten_or_grow() {
        let shrinking = ClassicalJacobi::from_rules(|n| pow2(-(n as i64)), |_| int(0), 40).unwrap();
        let growing = ClassicalJacobi::from_rules(|n| pow2(n as i64), |_| int(0), 40).unwrap();
        let s = pq_partial_sums(&shrinking, &int(0), 8).unwrap();
        assert!(s.windows(2).all(|w| w[1] >= w[0]));
        let g = pq_partial_sums(&growing, &int(0), 30).unwrap();
        assert!(&g[30] - &g[20] < rat(1, 100_000));
        assert!(product_ratio_check(&shrinking, 10).unwrap().passed);
        assert!(product_ratio_check(&growing, 10).unwrap().passed);
    }

    #[test]
    fn product_ratios_need_zero_beta() {
        let j = ClassicalJacobi::from_rules(|_| int(1), |_| int(1), 10).unwrap();
        assert!(product_ratio_check(&j, 3).is_err());
        let k = ClassicalJacobi::from_rules(|n| int(n as i64 + 1), |_| int(0), 30).unwrap();
        assert!(product_ratio_check(&k, 12).unwrap().passed);
    }

    #[test]
    fn lemma5_coefficients_and_checks() {
        let j = lemma5_family(&int(2), &int(1), 40).unwrap();
        assert_eq!((j.beta(1), j.beta(2), j.beta(3), j.beta(4)), (&int(1), &int(3), &int(2), &int(6)));
        assert_eq!((j.lambda(4), j.lambda(5)), (&int(4), &int(4)));
        assert!(kernel_vector_residuals(&j, 40).unwrap().iter().all(Zero::is_zero));
        for (a, b) in [(int(1), int(0)), (rat(-3, 7), int(5)), (int(0), rat(2, 9))] {
            let res = even_reduction_residuals(&j, (&a, &b), 40).unwrap();
            assert_eq!(res.len(), 19);
            assert!(res.iter().all(Zero::is_zero));
        }
        assert!(lemma5_family(&int(1), &int(1), 4).is_err());
        assert!(lemma5_family(&int(2), &int(0), 4).is_err());
    }

    #[test]
    fn sign_vector() {
        let j = ClassicalJacobi::from_rules(|_| int(1), |_| int(4), 12).unwrap();
        for n in 1..=12 {
            let m = positivity_sign_vector(&j, n).unwrap();
            assert_eq!(m.len(), n);
            assert!(m.iter().all(Signed::is_positive));
        }
        assert_eq!(positivity_sign_vector(&free(3), 1), Err(Error::Argument("the 1x1 truncation is not positive definite".into())));
        assert!(positivity_sign_vector(&free(3), 3).is_err());
        let one = ClassicalJacobi::from_rules(|_| int(1), |_| int(2), 0).unwrap();
        assert_eq!(positivity_sign_vector(&one, 1).unwrap(), vec![int(1)]);
    }
}
