//! Positivity certificates: positive `m` with
//! `β_x m(x) ≥ λ_x m(x') + Σ_{y ∈ N_x} λ_y m(y)`.
//!
//! On a truncation the parent term is dropped at the top, which is exactly
//! the row of the truncated matrix there.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::classical::{positivity_sign_vector, ClassicalJacobi};
use crate::error::{Error, Result};
use crate::exactmath::linalg::{solve_square, Matrix};
use crate::exactmath::{format_rational, Rational};
use crate::spectra::{count_negative_eigenvalues, TruncatedOperator};
use crate::tree::{PathSelection, TreeTruncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    Inequality,
    /// Equality at every vertex except the top.
    Equality,
}

/// `β_x m(x) − [x ≠ top] λ_x m(x') − Σ λ_y m(y)`
fn slack(tree: &TreeTruncation, m: &[Rational], x: usize) -> Rational {
    let mut s = tree.beta(x) * &m[x];
    if let Some(p) = tree.parent(x) {
        s -= tree.lambda(x) * &m[p];
    }
    for &y in tree.children(x) {
        s -= tree.lambda(y) * &m[y];
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub tree: TreeTruncation,
    pub m: Vec<Rational>,
    pub mode: CertificateMode,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CertificateCheck {
    pub positive: bool,
    /// Vertices violating the mode's condition.
    pub failures: Vec<String>,
    pub passed: bool,
}

impl Certificate {
    pub fn slack(&self, x: usize) -> Rational {
        slack(&self.tree, &self.m, x)
    }

    pub fn check(&self) -> CertificateCheck {
        let t = &self.tree;
        let positive = self.m.iter().all(Signed::is_positive);
        let failures: Vec<String> = (0..t.len())
            .filter(|&x| {
                let s = self.slack(x);
                match self.mode {
                    CertificateMode::Equality if x != t.top() => !s.is_zero(),
                    _ => s.is_negative(),
                }
            })
            .map(|x| t.name(x).to_string())
            .collect();
        CertificateCheck { positive, passed: positive && failures.is_empty(), failures }
    }

    pub fn m_strings(&self) -> Vec<(String, String)> {
        (0..self.tree.len()).map(|v| (self.tree.name(v).to_string(), format_rational(&self.m[v]))).collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VertexRatios {
    pub vertex: String,
    /// `λ_x m(x) / m(x')`
    pub alpha: String,
    /// `λ_x m(x') / m(x)`
    pub gamma: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PositivityVerdict {
    pub inequality_holds: bool,
    pub failures: Vec<String>,
    /// Equality at every vertex below the top.
    pub equality_below_top: bool,
    pub ratios: Vec<VertexRatios>,
    /// Counted only when the inequality holds.
    pub negative_eigenvalues: Option<usize>,
    pub certified: bool,
}

/// Checks the inequality at every vertex; on success also counts negative
/// eigenvalues of the truncation, which must be zero.
pub fn positivity_check(tree: &TreeTruncation, m: &[Rational]) -> Result<PositivityVerdict> {
    if m.len() != tree.len() {
        return Err(Error::Argument("one value of m per vertex is required".into()));
    }
    if let Some(v) = m.iter().position(|x| !x.is_positive()) {
        return Err(Error::Argument(format!("m must be positive, fails at `{}`", tree.name(v))));
    }
    let slacks: Vec<Rational> = (0..tree.len()).map(|x| slack(tree, m, x)).collect();
    let failures: Vec<String> = (0..tree.len()).filter(|&x| slacks[x].is_negative()).map(|x| tree.name(x).to_string()).collect();
    let equality_below_top = (0..tree.len()).filter(|&x| x != tree.top()).all(|x| slacks[x].is_zero());
    let ratios = (0..tree.len())
        .filter_map(|x| {
            tree.parent(x).map(|p| VertexRatios {
                vertex: tree.name(x).to_string(),
                alpha: format_rational(&(tree.lambda(x) * &m[x] / &m[p])),
                gamma: format_rational(&(tree.lambda(x) * &m[p] / &m[x])),
            })
        })
        .collect();
    let inequality_holds = failures.is_empty();
    let negative_eigenvalues = inequality_holds.then(|| count_negative_eigenvalues(&TruncatedOperator::new(tree)));
    Ok(PositivityVerdict {
        inequality_holds,
        failures,
        equality_below_top,
        ratios,
        certified: inequality_holds && negative_eigenvalues == Some(0),
        negative_eigenvalues,
    })
}

/// `U J U + shift` restricted to `vertices`, where `U` flips the sign on odd
/// levels: `β + shift` on the diagonal and `−λ` on edges.
fn flipped_block(tree: &TreeTruncation, vertices: &[usize], shift: &Rational) -> Matrix<Rational> {
    let mut col = vec![usize::MAX; tree.len()];
    for (k, &v) in vertices.iter().enumerate() {
        col[v] = k;
    }
    let n = vertices.len();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (k, &v) in vertices.iter().enumerate() {
        m[k][k] = tree.beta(v) + shift;
        if let Some(p) = tree.parent(v).filter(|&p| col[p] != usize::MAX) {
            m[k][col[p]] = -tree.lambda(v).clone();
            m[col[p]][k] = -tree.lambda(v).clone();
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct ConstructedCertificate {
    pub certificate: Certificate,
    /// `c_n` along the path.
    pub side_masses: Vec<Rational>,
    /// The regularized `m_n = f_n / f_n(x_0)`.
    pub regularized: Vec<Rational>,
    /// Whether `m_n > 0` everywhere.
    pub regularized_positive: bool,
}

/// Builds an equality-mode certificate on a positive definite truncation.
///
/// Each side subtree `Γ_y` hanging off `x_n` gets the exact solution of
/// `β_s m(s) = λ_s m(s') + Σ λ_c m(c)` with `m(x_n) = 1`, which is positive
/// because the sign-flipped block is a nonsingular M-matrix. The side masses
/// `c_n = Σ λ_y m(y)` define a classical matrix with diagonal `β_{x_n} − c_n`,
/// whose sign vector `(−1)^n p_n(0)` gives the path values; sides are rescaled
/// by them. The regularized solve `(1/n_reg + U J U) f = δ_{x_0}` is reported
/// alongside.
pub fn positivity_construct_m(tree: &TreeTruncation, path: &PathSelection, n_reg: usize) -> Result<ConstructedCertificate> {
    if n_reg == 0 {
        return Err(Error::Argument("regularization index must be at least 1".into()));
    }
    let xs = path.vertices();
    if xs.last() != Some(&tree.top()) || tree.level(xs[0]) != 0 {
        return Err(Error::Argument("path must run from a level-0 vertex to the top".into()));
    }
    if count_negative_eigenvalues(&TruncatedOperator::new(tree)) != 0 {
        return Err(Error::Argument("truncation has negative eigenvalues".into()));
    }

    let all = tree.descendants(tree.top());
    let shift = Rational::new(1.into(), (n_reg as i64).into());
    let reg = flipped_block(tree, &all, &shift);
    let mut rhs = vec![Rational::zero(); all.len()];
    let x0_col = all.iter().position(|&v| v == xs[0]).expect("x0 in tree");
    rhs[x0_col] = Rational::one();
    let f = solve_square(&reg, &rhs)?;
    let mut regularized = vec![Rational::zero(); tree.len()];
    for (k, &v) in all.iter().enumerate() {
        regularized[v] = &f[k] / &f[x0_col];
    }
    let regularized_positive = regularized.iter().all(Signed::is_positive);

    // side solves with m(x_n) = 1
    let mut side = vec![Rational::zero(); tree.len()];
    let mut masses = Vec::with_capacity(xs.len());
    for (n, &x) in xs.iter().enumerate() {
        let mut c = Rational::zero();
        for &y in tree.children(x) {
            if n > 0 && y == xs[n - 1] {
                continue;
            }
            let block_vertices = tree.descendants(y);
            let block = flipped_block(tree, &block_vertices, &Rational::zero());
            let mut b = vec![Rational::zero(); block_vertices.len()];
            b[0] = tree.lambda(y).clone();
            let sol = solve_square(&block, &b)?;
            for (k, &s) in block_vertices.iter().enumerate() {
                side[s] = sol[k].clone();
            }
            c += tree.lambda(y) * &sol[0];
        }
        masses.push(c);
    }

    let path_matrix = ClassicalJacobi::from_rules(|n| tree.lambda(xs[n]).clone(), |n| tree.beta(xs[n]) - &masses[n], xs.len() - 1)?;
    let signs = positivity_sign_vector(&path_matrix, xs.len())?;
    let mut m = vec![Rational::zero(); tree.len()];
    for (n, &x) in xs.iter().enumerate() {
        m[x] = signs[n].clone();
        for &y in tree.children(x) {
            if n > 0 && y == xs[n - 1] {
                continue;
            }
            for s in tree.descendants(y) {
                m[s] = &signs[n] * &side[s];
            }
        }
    }
    if let Some(v) = m.iter().position(|x| !x.is_positive()) {
        return Err(Error::Positivity(format!("constructed m is not positive at `{}`", tree.name(v))));
    }
    let certificate = Certificate { tree: tree.clone(), m, mode: CertificateMode::Equality };
    let check = certificate.check();
    if !check.passed {
        return Err(Error::Positivity(format!("constructed certificate fails at {:?}", check.failures)));
    }
    Ok(ConstructedCertificate { certificate, side_masses: masses, regularized, regularized_positive })
}
