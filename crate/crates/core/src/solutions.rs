//! Solutions of `J f = z f` on a truncation, the solution / associated
//! solution pair along a path, and finite-depth selfadjointness indicators.
//!
//! Along a path `x_0, …, x_N` (with `x_N` the top) every side subtree hanging
//! off the path is proportional to its own polynomial family, so a solution is
//! fixed by its path values. With the side ratios
//! `ρ(s) = f(s) / f(s') = λ_s / (z − β_s − Σ_{c ∈ N_s} λ_c ρ(c))`
//! and `c_n = Σ λ_y ρ(y)` over the side children `y` of `x_n`, the path values
//! obey `λ_{x_n} f(x_{n+1}) = (z − β_{x_n} − c_n) f(x_n) − λ_{x_{n-1}} f(x_{n-1})`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::linalg::{nullspace, solve_affine, Matrix};
use crate::exactmath::{gaussian, is_zero_gaussian, GaussianRational, Rational};
use crate::par::Execution;
use crate::tree::{PathSelection, TreeTruncation};
use crate::treepoly::PolyFamily;

/// A vertex function at a fixed spectral parameter, with the value at the
/// (absent) vertex above the top kept separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionField {
    tree: TreeTruncation,
    z: GaussianRational,
    values: Vec<GaussianRational>,
    above_top: GaussianRational,
    satisfied_at: Vec<bool>,
}

impl SolutionField {
    /// A field asserted to satisfy the eigen-equation at every vertex.
    pub fn from_values(
        tree: &TreeTruncation,
        z: GaussianRational,
        values: Vec<GaussianRational>,
        above_top: GaussianRational,
    ) -> Result<Self> {
        if values.len() != tree.len() {
            return Err(Error::Argument("one value per vertex is required".into()));
        }
        Ok(SolutionField { tree: tree.clone(), z, values, above_top, satisfied_at: vec![true; tree.len()] })
    }

    pub fn tree(&self) -> &TreeTruncation {
        &self.tree
    }

    pub fn z(&self) -> &GaussianRational {
        &self.z
    }

    pub fn value(&self, v: usize) -> &GaussianRational {
        &self.values[v]
    }

    pub fn values(&self) -> &[GaussianRational] {
        &self.values
    }

    /// The value at the parent of the top vertex.
    pub fn above_top(&self) -> &GaussianRational {
        &self.above_top
    }

    /// Whether the eigen-equation is asserted at `v`.
    pub fn asserted_at(&self, v: usize) -> bool {
        self.satisfied_at[v]
    }

    fn parent_value(&self, v: usize) -> &GaussianRational {
        match self.tree.parent(v) {
            Some(p) => &self.values[p],
            None => &self.above_top,
        }
    }

    /// `z f(v) − λ_v f(v') − β_v f(v) − Σ_{y ∈ N_v} λ_y f(y)`.
    pub fn residual(&self, v: usize) -> GaussianRational {
        let t = &self.tree;
        let mut r = (&self.z - gaussian(t.beta(v).clone(), Rational::zero())) * &self.values[v];
        r -= self.parent_value(v).scale(t.lambda(v).clone());
        for &c in t.children(v) {
            r -= self.values[c].scale(t.lambda(c).clone());
        }
        r
    }

    /// Asserted vertices whose residual is not exactly zero.
    pub fn residual_failures(&self) -> Vec<usize> {
        (0..self.tree.len()).filter(|&v| self.satisfied_at[v] && !is_zero_gaussian(&self.residual(v))).collect()
    }

    /// `Σ_{v ∈ Γ_x} |f(v)|²`
    pub fn norm_sq_on(&self, x: usize) -> Rational {
        self.tree.descendants(x).iter().map(|&v| self.values[v].norm_sqr()).sum()
    }

    pub fn norm_sq(&self) -> Rational {
        self.values.iter().map(|w| w.norm_sqr()).sum()
    }

    pub fn scaled(&self, c: &GaussianRational) -> SolutionField {
        SolutionField { values: self.values.iter().map(|w| w * c).collect(), above_top: &self.above_top * c, ..self.clone() }
    }
}

fn real(r: &Rational) -> GaussianRational {
    gaussian(r.clone(), Rational::zero())
}

fn require_nonreal(z: &GaussianRational) -> Result<()> {
    if z.im.is_zero() {
        Err(Error::Argument("spectral parameter must be nonreal; use propagate_real for real values".into()))
    } else {
        Ok(())
    }
}

fn require_full_path(tree: &TreeTruncation, path: &PathSelection) -> Result<()> {
    match path.vertices().last() {
        Some(&last) if last == tree.top() && tree.level(path.vertices()[0]) == 0 => Ok(()),
        _ => Err(Error::Argument("path must run from a level-0 vertex to the top".into())),
    }
}

/// `ρ(s) = f(s) / f(s')` for every vertex off the path, computed level by level.
/// Entries on the path are left `None`.
pub fn side_ratios(
    tree: &TreeTruncation,
    path: &PathSelection,
    z: &GaussianRational,
    exec: Execution,
) -> Result<Vec<Option<GaussianRational>>> {
    let mut on_path = vec![false; tree.len()];
    for &v in path.vertices() {
        on_path[v] = true;
    }
    let mut rho: Vec<Option<GaussianRational>> = vec![None; tree.len()];
    for level in tree.levels() {
        let side: Vec<usize> = level.into_iter().filter(|&v| !on_path[v]).collect();
        let done = &rho;
        let computed = exec.map(&side, |&s| {
            let mut denom = z - real(tree.beta(s));
            for &c in tree.children(s) {
                denom -= done[c].as_ref().expect("children first").scale(tree.lambda(c).clone());
            }
            if is_zero_gaussian(&denom) {
                return Err(Error::Solve(format!("side ratio denominator vanishes at `{}`", tree.name(s))));
            }
            Ok(real(tree.lambda(s)) / denom)
        });
        for (s, r) in side.into_iter().zip(computed) {
            rho[s] = Some(r?);
        }
    }
    Ok(rho)
}

/// `c_n = Σ λ_y ρ(y)` over the children of `x_n` off the path.
fn side_masses(tree: &TreeTruncation, path: &PathSelection, rho: &[Option<GaussianRational>]) -> Vec<GaussianRational> {
    path.vertices()
        .iter()
        .map(|&x| {
            tree.children(x)
                .iter()
                .filter_map(|&y| rho[y].as_ref().map(|r| r.scale(tree.lambda(y).clone())))
                .fold(GaussianRational::zero(), |acc, w| acc + w)
        })
        .collect()
}

/// Runs the path recurrence from two seeds and fills side subtrees by ratios.
fn propagate(
    tree: &TreeTruncation,
    path: &PathSelection,
    z: &GaussianRational,
    rho: &[Option<GaussianRational>],
    seeds: (GaussianRational, GaussianRational),
    satisfied_at: Vec<bool>,
) -> SolutionField {
    let xs = path.vertices();
    let masses = side_masses(tree, path, rho);
    let mut along = vec![seeds.0, seeds.1];
    for n in 1..xs.len() {
        let x = xs[n];
        let mut rhs = (z - real(tree.beta(x)) - &masses[n]) * &along[n];
        rhs -= along[n - 1].scale(tree.lambda(xs[n - 1]).clone());
        along.push(rhs / real(tree.lambda(x)));
    }
    let mut values = vec![GaussianRational::zero(); tree.len()];
    for (k, &x) in xs.iter().enumerate() {
        values[x] = along[k].clone();
    }
    for v in tree.descendants(tree.top()) {
        if let Some(r) = &rho[v] {
            let p = tree.parent(v).expect("side vertices have parents");
            values[v] = &values[p] * r;
        }
    }
    let above_top = along.pop().expect("path is nonempty");
    SolutionField { tree: tree.clone(), z: z.clone(), values, above_top, satisfied_at }
}

/// The solution `v` (`v(x_0) = 1`, equation everywhere) and the associated
/// solution `u` (`u(x_0) = 0`, `u(x_1) = 1/λ_{x_0}`, equation off `x_0`).
pub fn solve_pair(tree: &TreeTruncation, path: &PathSelection, z: &GaussianRational) -> Result<(SolutionField, SolutionField)> {
    solve_pair_with(tree, path, z, Execution::default())
}

pub fn solve_pair_with(
    tree: &TreeTruncation,
    path: &PathSelection,
    z: &GaussianRational,
    exec: Execution,
) -> Result<(SolutionField, SolutionField)> {
    require_nonreal(z)?;
    require_full_path(tree, path)?;
    let rho = side_ratios(tree, path, z, exec)?;
    let x0 = path.vertices()[0];
    let inv = real(&tree.lambda(x0).recip());
    let all = vec![true; tree.len()];
    let mut off_x0 = all.clone();
    off_x0[x0] = false;
    let v = propagate(tree, path, z, &rho, (GaussianRational::one(), (z - real(tree.beta(x0))) * &inv), all);
    let u = propagate(tree, path, z, &rho, (GaussianRational::zero(), inv), off_x0);
    Ok((v, u))
}

/// `v(x_n) u(x_{n+1}) − u(x_n) v(x_{n+1})`; index `n = N` uses the values above the top.
pub fn wronskian(v: &SolutionField, u: &SolutionField, path: &PathSelection, n: usize) -> Result<GaussianRational> {
    let xs = path.vertices();
    if n >= xs.len() {
        return Err(Error::Argument(format!("wronskian index {n} beyond path of length {}", xs.len())));
    }
    let next = |f: &SolutionField| {
        if n + 1 < xs.len() {
            f.value(xs[n + 1]).clone()
        } else {
            f.above_top().clone()
        }
    };
    Ok(v.value(xs[n]) * next(u) - u.value(xs[n]) * next(v))
}

/// Rows of the eigen-equation `(z − β_s) f(s) − λ_s f(s') − Σ λ_c f(c) = 0` over
/// the unknowns `order` (vertex positions), for each vertex in `rows`.
/// The parent of the subtree top, when needed, is the extra last column.
fn equation_rows<T: Clone + num_traits::Num + From<Rational>>(
    tree: &TreeTruncation,
    order: &[usize],
    rows: &[usize],
    z: &T,
    with_above: bool,
) -> Matrix<T> {
    let mut col = vec![usize::MAX; tree.len()];
    for (k, &v) in order.iter().enumerate() {
        col[v] = k;
    }
    let width = order.len() + usize::from(with_above);
    rows.iter()
        .map(|&s| {
            let mut row = vec![T::zero(); width];
            row[col[s]] = z.clone() - T::from(tree.beta(s).clone());
            match tree.parent(s).map(|p| col[p]).filter(|&c| c != usize::MAX) {
                Some(c) => row[c] = T::zero() - T::from(tree.lambda(s).clone()),
                None if with_above => row[width - 1] = T::zero() - T::from(tree.lambda(s).clone()),
                None => {}
            }
            for &c in tree.children(s) {
                row[col[c]] = T::zero() - T::from(tree.lambda(c).clone());
            }
            row
        })
        .collect()
}

/// Dimension of `{f on Γ_x : J f = z f at every vertex of Γ_x \ {x}}` over any
/// exact field containing the coefficients.
pub fn solution_space_dimension<T: Clone + num_traits::Num + From<Rational>>(tree: &TreeTruncation, x: usize, z: &T) -> usize {
    let order = tree.descendants(x);
    let rows: Vec<usize> = order[1..].to_vec();
    let m = equation_rows(tree, &order, &rows, z, false);
    nullspace(&m, order.len()).len()
}

/// The nonreal case of [`solution_space_dimension`]; always 1 in theory.
pub fn uniqueness_dimension(tree: &TreeTruncation, x: usize, z: &GaussianRational) -> Result<usize> {
    require_nonreal(z)?;
    Ok(solution_space_dimension(tree, x, z))
}

/// `(−i)^k`
fn minus_i_pow(k: usize) -> GaussianRational {
    match k % 4 {
        0 => gaussian(Rational::one(), Rational::zero()),
        1 => gaussian(Rational::zero(), -Rational::one()),
        2 => gaussian(-Rational::one(), Rational::zero()),
        _ => gaussian(Rational::zero(), Rational::one()),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PositivityOfRotatedSolution {
    pub vertices_checked: usize,
    /// Vertices where `i^{-ℓ} v` is not real.
    pub not_real: Vec<String>,
    /// Vertices where `i^{-ℓ} v` is real but not positive.
    pub not_positive: Vec<String>,
    /// Path indices `n ≥ 1` where `λ_{x_n} ṽ(x_{n+1}) − λ_{x_{n-1}} ṽ(x_{n-1}) > 0` fails.
    pub step_failures: Vec<usize>,
    pub steps_checked: usize,
    pub passed: bool,
}

/// For `β ≡ 0`: `ṽ = i^{-ℓ} v` is real and positive for the solution at `z = i`
/// normalized by `v(x_0) = 1`, and the path values satisfy the step inequality.
pub fn lemma4_positivity(tree: &TreeTruncation, path: &PathSelection) -> Result<PositivityOfRotatedSolution> {
    if !tree.beta_is_zero() {
        return Err(Error::Argument("requires beta identically zero".into()));
    }
    let i = gaussian(Rational::zero(), Rational::one());
    let (v, _) = solve_pair(tree, path, &i)?;
    let rotated = |val: &GaussianRational, level: usize| val * minus_i_pow(level);
    let mut not_real = Vec::new();
    let mut not_positive = Vec::new();
    for s in 0..tree.len() {
        let w = rotated(v.value(s), tree.level(s));
        if !w.im.is_zero() {
            not_real.push(tree.name(s).to_string());
        } else if !w.re.is_positive() {
            not_positive.push(tree.name(s).to_string());
        }
    }
    let xs = path.vertices();
    let path_values: Vec<Rational> = xs
        .iter()
        .map(|&x| rotated(v.value(x), tree.level(x)).re)
        .chain(std::iter::once(rotated(v.above_top(), tree.height() + 1).re))
        .collect();
    let mut step_failures = Vec::new();
    for n in 1..xs.len() {
        let diff = tree.lambda(xs[n]) * &path_values[n + 1] - tree.lambda(xs[n - 1]) * &path_values[n - 1];
        if !diff.is_positive() {
            step_failures.push(n);
        }
    }
    let passed = not_real.is_empty() && not_positive.is_empty() && step_failures.is_empty();
    Ok(PositivityOfRotatedSolution {
        vertices_checked: tree.len(),
        not_real,
        not_positive,
        steps_checked: xs.len().saturating_sub(1),
        step_failures,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealPropagation {
    Field(Box<SolutionField>),
    /// No solution with `v(x_0) = 1` exists on `Γ_x` (with the value above `x`
    /// left free) for this vertex `x` of the path, nor for any above it.
    Obstruction {
        vertex: usize,
    },
}

/// Seeks a solution of `J f = r f` on the whole truncation with `f(x_0) = 1`.
/// Side subtrees are filled from the polynomial family while every
/// `P_{y,x_n}(r)` is nonzero; past a vanishing value the nested truncations
/// `Γ_{x_m}` are solved as exact linear systems until one is inconsistent.
pub fn propagate_real(tree: &TreeTruncation, x0: usize, r: &Rational) -> Result<RealPropagation> {
    let path = PathSelection::from_bottom(tree, x0)?;
    let family = PolyFamily::build(tree)?;
    let xs = path.vertices();
    let mut values = vec![Rational::zero(); tree.len()];
    values[x0] = Rational::one();
    let mut prev = Rational::zero();
    for (n, &x) in xs.iter().enumerate() {
        let mut rhs = (r - tree.beta(x)) * &values[x];
        if n > 0 {
            rhs -= tree.lambda(xs[n - 1]) * &prev;
        }
        for &y in tree.children(x) {
            if n > 0 && y == xs[n - 1] {
                continue;
            }
            let denom = family.up(y).eval(r);
            if denom.is_zero() {
                return propagate_by_elimination(tree, &path, n, r);
            }
            let scale = &values[x] / denom;
            for s in tree.descendants(y) {
                values[s] = &scale * family.get(y, s).expect("s below y").eval(r);
            }
            rhs -= tree.lambda(y) * &values[y];
        }
        let next = rhs / tree.lambda(x);
        prev = values[x].clone();
        match xs.get(n + 1) {
            Some(&up) => values[up] = next,
            None => {
                return Ok(RealPropagation::Field(Box::new(real_field(tree, r, &values, next))));
            }
        }
    }
    unreachable!("the loop returns at the top")
}

fn real_field(tree: &TreeTruncation, r: &Rational, values: &[Rational], above: Rational) -> SolutionField {
    SolutionField {
        tree: tree.clone(),
        z: real(r),
        values: values.iter().map(real).collect(),
        above_top: real(&above),
        satisfied_at: vec![true; tree.len()],
    }
}

/// Equations at every vertex of `Γ_x` over the unknowns `Γ_x ∪ {x'}`, plus
/// `f(x_0) = 1` when `x0` is given.
fn nested_system(tree: &TreeTruncation, x: usize, r: &Rational, x0: Option<usize>) -> (Vec<usize>, Matrix<Rational>, Vec<Rational>) {
    let order = tree.descendants(x);
    let mut m = equation_rows(tree, &order, &order, r, true);
    let mut b = vec![Rational::zero(); m.len()];
    if let Some(x0) = x0 {
        let mut row = vec![Rational::zero(); order.len() + 1];
        row[order.iter().position(|&v| v == x0).expect("x0 below x")] = Rational::one();
        m.push(row);
        b.push(Rational::one());
    }
    (order, m, b)
}

fn propagate_by_elimination(tree: &TreeTruncation, path: &PathSelection, from: usize, r: &Rational) -> Result<RealPropagation> {
    let xs = path.vertices();
    for &x in &xs[from..] {
        let (order, m, b) = nested_system(tree, x, r, Some(xs[0]));
        let cols = order.len() + 1;
        let Some((sol, _)) = solve_affine(&m, &b, cols) else {
            return Ok(RealPropagation::Obstruction { vertex: x });
        };
        if x == tree.top() {
            let mut values = vec![Rational::zero(); tree.len()];
            for (k, &v) in order.iter().enumerate() {
                values[v] = sol[k].clone();
            }
            return Ok(RealPropagation::Field(Box::new(real_field(tree, r, &values, sol[cols - 1].clone()))));
        }
    }
    unreachable!("the path ends at the top")
}

/// Vertices of `Γ_x` where every solution of `J f = r f` on `Γ_x` (value above
/// `x` free) vanishes.
pub fn forced_zeros(tree: &TreeTruncation, x: usize, r: &Rational) -> Vec<usize> {
    let (order, m, _) = nested_system(tree, x, r, None);
    let kernel = nullspace(&m, order.len() + 1);
    order.iter().enumerate().filter(|(k, _)| kernel.iter().all(|basis| basis[*k].is_zero())).map(|(_, &v)| v).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub depth: usize,
    /// `‖v|Γ_{x_d}‖²`
    pub norm_sq: Rational,
    /// `Σ_{1 ≤ n ≤ d} 1/λ_{x_n}`
    pub carleman_sum: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// Increments shrink at least geometrically (ratio ≤ 1/2) over the last three depths.
    Settling,
    Growing,
    /// Fewer than three depths observed.
    Unknown,
}

/// Finite-depth profile of the solution norm and Carleman sums. These are
/// indicators only: no finite truncation decides square-summability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthProfile {
    pub rows: Vec<GrowthRow>,
    pub norm_strictly_increasing: bool,
    pub norm_trend: Trend,
    pub carleman_trend: Trend,
}

impl GrowthProfile {
    /// `"essentially selfadjoint"` when the Carleman terms do not settle,
    /// `"not essentially selfadjoint"` when the norm settles while the
    /// Carleman terms do, otherwise `"inconclusive"`. Always an indicator.
    pub fn indicator(&self) -> &'static str {
        match (self.carleman_trend, self.norm_trend) {
            (Trend::Growing, _) => "essentially selfadjoint",
            (Trend::Settling, Trend::Settling) => "not essentially selfadjoint",
            _ => "inconclusive",
        }
    }
}

fn trend(increments: &[Rational]) -> Trend {
    if increments.len() < 3 {
        return Trend::Unknown;
    }
    let half = Rational::new(1.into(), 2.into());
    let tail = &increments[increments.len() - 3..];
    if tail.windows(2).all(|w| w[1] <= &w[0] * &half) {
        Trend::Settling
    } else {
        Trend::Growing
    }
}

/// Prefix norms `‖v|Γ_{x_d}‖²` of the solution at `z` with `v(x_0) = seed`,
/// along a path from level 0 to the top, for the requested depths.
/// Side subtree norms use `S(y) = 1 + Σ_c |ρ(c)|² S(c)`, so `‖v|Γ_y‖² = |v(y)|² S(y)`.
pub fn norm_growth_profile(
    tree: &TreeTruncation,
    path: &PathSelection,
    z: &GaussianRational,
    seed: &GaussianRational,
    depths: &[usize],
    exec: Execution,
) -> Result<GrowthProfile> {
    require_nonreal(z)?;
    require_full_path(tree, path)?;
    if let Some(&d) = depths.iter().find(|&&d| d >= path.len()) {
        return Err(Error::Argument(format!("depth {d} exceeds the truncation height")));
    }
    let rho = side_ratios(tree, path, z, exec)?;
    let xs = path.vertices();
    let masses = side_masses(tree, path, &rho);
    let mut weight = vec![Rational::zero(); tree.len()];
    for level in tree.levels() {
        for v in level {
            if rho[v].is_some() {
                weight[v] = Rational::one()
                    + tree.children(v).iter().map(|&c| rho[c].as_ref().expect("side").norm_sqr() * &weight[c]).sum::<Rational>();
            }
        }
    }
    let mut along = vec![seed.clone(), (z - real(tree.beta(xs[0]))) * seed / real(tree.lambda(xs[0]))];
    for n in 1..xs.len() {
        let x = xs[n];
        let mut rhs = (z - real(tree.beta(x)) - &masses[n]) * &along[n];
        rhs -= along[n - 1].scale(tree.lambda(xs[n - 1]).clone());
        along.push(rhs / real(tree.lambda(x)));
    }
    let mut prefix = Vec::with_capacity(xs.len());
    let mut carleman = Vec::with_capacity(xs.len());
    let mut norm = Rational::zero();
    let mut sum = Rational::zero();
    for (n, &x) in xs.iter().enumerate() {
        let here = along[n].norm_sqr();
        let side: Rational = tree.children(x).iter().filter_map(|&y| rho[y].as_ref().map(|r| &here * r.norm_sqr() * &weight[y])).sum();
        norm += here + side;
        if n >= 1 {
            sum += tree.lambda(x).recip();
        }
        prefix.push(norm.clone());
        carleman.push(sum.clone());
    }
    let rows: Vec<GrowthRow> =
        depths.iter().map(|&d| GrowthRow { depth: d, norm_sq: prefix[d].clone(), carleman_sum: carleman[d].clone() }).collect();
    let norm_increments: Vec<Rational> = rows.windows(2).map(|w| &w[1].norm_sq - &w[0].norm_sq).collect();
    let carleman_increments: Vec<Rational> = rows.windows(2).map(|w| &w[1].carleman_sum - &w[0].carleman_sum).collect();
    Ok(GrowthProfile {
        norm_strictly_increasing: norm_increments.iter().all(Signed::is_positive),
        norm_trend: trend(&norm_increments),
        carleman_trend: trend(&carleman_increments),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::tree::{generate, Coefficients, Shape, TreeBuilder};

    fn i() -> GaussianRational {
        gaussian(int(0), int(1))
    }

    fn star() -> TreeTruncation {
        let mut b = TreeBuilder::new("x", 1, int(1), int(0));
        b.child("a", "x", int(1), int(0)).unwrap().child("b", "x", int(1), int(0)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn path_pair_example() {
        let t = generate(Shape::Path { depth: 1 }, &Coefficients::free()).unwrap();
        let path = PathSelection::leftmost(&t).unwrap();
        let (v, u) = solve_pair(&t, &path, &i()).unwrap();
        let (x0, x1) = (path.vertices()[0], path.vertices()[1]);
        assert_eq!((v.value(x0).clone(), v.value(x1).clone()), (gaussian(int(1), int(0)), i()));
        assert_eq!((u.value(x0).clone(), u.value(x1).clone()), (gaussian(int(0), int(0)), gaussian(int(1), int(0))));
        assert_eq!(wronskian(&v, &u, &path, 0).unwrap(), gaussian(int(1), int(0)));
        assert!(v.residual_failures().is_empty());
        assert!(u.residual_failures().is_empty());
        assert!(!is_zero_gaussian(&u.residual(x0)));
    }

    #[test]
    fn real_parameter_is_rejected() {
        let t = star();
        let path = PathSelection::leftmost(&t).unwrap();
        assert!(matches!(solve_pair(&t, &path, &gaussian(int(1), int(0))), Err(Error::Argument(_))));
    }

    #[test]
    fn decorated_and_homogeneous_pairs() {
        let d = generate(Shape::DecoratedPath { depth: 2 }, &Coefficients::free()).unwrap();
        let path = PathSelection::leftmost(&d).unwrap();
        let (v, u) = solve_pair(&d, &path, &i()).unwrap();
        assert!(v.residual_failures().is_empty() && u.residual_failures().is_empty());

        let h = generate(Shape::Homogeneous { arity: 2, depth: 4 }, &Coefficients::free()).unwrap();
        let path = PathSelection::leftmost(&h).unwrap();
        let (v, u) = solve_pair(&h, &path, &i()).unwrap();
        assert!(v.residual_failures().is_empty() && u.residual_failures().is_empty());
        assert!(v.values().iter().all(|w| !is_zero_gaussian(w)));
        for n in 0..=3 {
            assert_eq!(wronskian(&v, &u, &path, n).unwrap(), gaussian(int(1), int(0)));
        }
    }

    #[test]
    fn wronskian_tracks_lambda() {
        let c = Coefficients::new(|s| if s.on_spine() && s.level == 2 { rat(3, 2) } else { int(1) }, |_| int(0));
        let t = generate(Shape::Homogeneous { arity: 2, depth: 3 }, &c).unwrap();
        let path = PathSelection::leftmost(&t).unwrap();
        let (v, u) = solve_pair(&t, &path, &i()).unwrap();
        assert_eq!(wronskian(&v, &u, &path, 2).unwrap(), gaussian(rat(2, 3), int(0)));
    }

    #[test]
    fn uniqueness_examples() {
        let single = TreeBuilder::new("v", 0, int(1), int(0)).build().unwrap();
        assert_eq!(uniqueness_dimension(&single, 0, &i()).unwrap(), 1);
        let s = star();
        assert_eq!(uniqueness_dimension(&s, s.top(), &i()).unwrap(), 1);
        let h = generate(Shape::Homogeneous { arity: 2, depth: 3 }, &Coefficients::free()).unwrap();
        assert_eq!(uniqueness_dimension(&h, h.top(), &i()).unwrap(), 1);
        // a real parameter at a shared eigenvalue can exceed 1
        assert_eq!(solution_space_dimension(&s, s.top(), &int(0)), 2);
    }

    #[test]
    fn lemma4_examples() {
        let p = generate(Shape::Path { depth: 1 }, &Coefficients::free()).unwrap();
        let rep = lemma4_positivity(&p, &PathSelection::leftmost(&p).unwrap()).unwrap();
        assert!(rep.passed);

        let h = generate(Shape::Homogeneous { arity: 2, depth: 4 }, &Coefficients::free()).unwrap();
        assert!(lemma4_positivity(&h, &PathSelection::leftmost(&h).unwrap()).unwrap().passed);

        let c = Coefficients::new(|s| int(s.level as i64 + 1), |_| int(0));
        let h3 = generate(Shape::Homogeneous { arity: 3, depth: 3 }, &c).unwrap();
        let rep = lemma4_positivity(&h3, &PathSelection::leftmost(&h3).unwrap()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.vertices_checked, 40);

        let beta = generate(Shape::Path { depth: 1 }, &Coefficients::constant(int(1), int(1))).unwrap();
        assert!(matches!(lemma4_positivity(&beta, &PathSelection::leftmost(&beta).unwrap()), Err(Error::Argument(_))));
    }

    #[test]
    fn propagate_real_examples() {
        let s = star();
        let a = s.index_of("a").unwrap();
        let RealPropagation::Field(f) = propagate_real(&s, a, &int(1)).unwrap() else {
            panic!("star at r = 1 has a solution");
        };
        assert!(f.values().iter().all(|w| *w == gaussian(int(1), int(0))));
        assert!(f.residual_failures().is_empty());

        let p = generate(Shape::Path { depth: 4 }, &Coefficients::free()).unwrap();
        for r in [int(0), int(1), rat(-3, 2), int(2)] {
            let x0 = p.index_of("x0").unwrap();
            assert!(matches!(propagate_real(&p, x0, &r).unwrap(), RealPropagation::Field(_)));
        }
    }

    #[test]
    fn elimination_fallback_finds_a_solution() {
        // r = 0 makes P_{b,x}(0) vanish on the star, but a solution with v(a) = 1 exists
        let s = star();
        let a = s.index_of("a").unwrap();
        let RealPropagation::Field(f) = propagate_real(&s, a, &int(0)).unwrap() else {
            panic!("star at r = 0 has a solution");
        };
        assert!(f.residual_failures().is_empty());
        assert_eq!(*f.value(a), gaussian(int(1), int(0)));
    }

    #[test]
    fn obstruction_is_reported() {
        // x0 with beta 1, pendant y0 with beta 0: at r = 0 the equation at y0 forces
        // v(x1) = 0 while the equation at x0 forces v(x1) = -1
        let mut b = TreeBuilder::new("x1", 1, int(1), int(0));
        b.child("x0", "x1", int(1), int(1)).unwrap().child("y0", "x1", int(1), int(0)).unwrap();
        let t = b.build().unwrap();
        let x0 = t.index_of("x0").unwrap();
        assert_eq!(propagate_real(&t, x0, &int(0)).unwrap(), RealPropagation::Obstruction { vertex: t.top() });
        let forced = forced_zeros(&t, t.top(), &int(0));
        assert!(forced.contains(&x0));
    }

    #[test]
    fn growth_profile_prefixes_match_direct_norms() {
        let c = Coefficients::new(|s| if s.on_spine() { int(s.level as i64 + 1) } else { int(1) }, |_| int(0));
        let t = generate(Shape::Homogeneous { arity: 2, depth: 5 }, &c).unwrap();
        let path = PathSelection::leftmost(&t).unwrap();
        let one = gaussian(int(1), int(0));
        let prof = norm_growth_profile(&t, &path, &i(), &one, &[1, 2, 3, 4, 5], Execution::Sequential).unwrap();
        let (v, _) = solve_pair(&t, &path, &i()).unwrap();
        for row in &prof.rows {
            assert_eq!(row.norm_sq, v.norm_sq_on(path.vertices()[row.depth]));
        }
        assert!(prof.norm_strictly_increasing);
        assert_eq!(prof.rows[1].carleman_sum, rat(1, 2) + rat(1, 3));
        assert_eq!(prof.carleman_trend, Trend::Growing);
        assert_eq!(prof.indicator(), "essentially selfadjoint");
    }
}
