//! Finite truncations `Γ_x` of a one-ended tree carrying Jacobi coefficients.
//!
//! Every vertex `v` has a level, a positive weight `λ_v` on the edge to its
//! parent and a real diagonal entry `β_v`. The top vertex keeps its `λ` for
//! the edge to the (absent) vertex above it.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::linalg::Matrix;
use crate::exactmath::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeTruncation {
    names: Vec<String>,
    index: HashMap<String, usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    level: Vec<usize>,
    lambda: Vec<Rational>,
    beta: Vec<Rational>,
    cut: Vec<bool>,
    top: usize,
}

/// One vertex record before validation.
#[derive(Clone, Debug)]
struct RawVertex {
    id: String,
    parent: Option<String>,
    level: usize,
    lambda: Option<Rational>,
    beta: Rational,
    cut: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexSpec {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent: Option<String>,
    level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    beta: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    cut: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeSpec {
    vertices: Vec<VertexSpec>,
    top: String,
    top_lambda: String,
}

fn invalid(vertex: &str, reason: impl Into<String>) -> Error {
    Error::Validation { vertex: vertex.to_string(), reason: reason.into() }
}

impl TreeTruncation {
    fn from_raw(raw: Vec<RawVertex>, top: &str, top_lambda: Rational) -> Result<Self> {
        let n = raw.len();
        let mut index = HashMap::with_capacity(n);
        for (k, v) in raw.iter().enumerate() {
            if v.id.is_empty() {
                return Err(invalid("", "empty vertex id"));
            }
            if index.insert(v.id.clone(), k).is_some() {
                return Err(invalid(&v.id, "duplicate vertex id"));
            }
        }
        let top_idx = *index.get(top).ok_or_else(|| invalid(top, "top vertex is not listed"))?;
        if !top_lambda.is_positive() {
            return Err(invalid(top, "lambda must be positive"));
        }

        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut lambda = Vec::with_capacity(n);
        for (k, v) in raw.iter().enumerate() {
            match (&v.parent, k == top_idx) {
                (Some(_), true) => return Err(invalid(&v.id, "top vertex cannot have a parent")),
                (None, false) => return Err(invalid(&v.id, "only the top vertex may lack a parent")),
                (None, true) => {
                    if v.lambda.as_ref().is_some_and(|l| *l != top_lambda) {
                        return Err(invalid(&v.id, "lambda disagrees with top_lambda"));
                    }
                    lambda.push(top_lambda.clone());
                }
                (Some(p), false) => {
                    let pi = *index.get(p).ok_or_else(|| invalid(&v.id, format!("unknown parent `{p}`")))?;
                    parent[k] = Some(pi);
                    children[pi].push(k);
                    let l = v.lambda.clone().ok_or_else(|| invalid(&v.id, "missing lambda"))?;
                    if !l.is_positive() {
                        return Err(invalid(&v.id, "lambda must be positive"));
                    }
                    lambda.push(l);
                }
            }
        }

        // every vertex must hang below the top; this also rules out cycles
        let mut seen = vec![false; n];
        let mut stack = vec![top_idx];
        let mut reached = 0;
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            reached += 1;
            stack.extend(&children[v]);
        }
        if reached != n {
            let stray = (0..n).find(|&k| !seen[k]).expect("some vertex unreached");
            return Err(invalid(&raw[stray].id, "not connected to the top vertex"));
        }

        for (k, v) in raw.iter().enumerate() {
            if let Some(p) = parent[k] {
                if raw[p].level != v.level + 1 {
                    return Err(invalid(&v.id, "level must be one less than the parent's level"));
                }
            }
            if children[k].is_empty() && v.level > 0 && !v.cut {
                return Err(invalid(&v.id, "leaf above level 0 must be flagged as cut"));
            }
        }

        Ok(TreeTruncation {
            names: raw.iter().map(|v| v.id.clone()).collect(),
            index,
            parent,
            children,
            level: raw.iter().map(|v| v.level).collect(),
            lambda,
            beta: raw.iter().map(|v| v.beta.clone()).collect(),
            cut: raw.iter().map(|v| v.cut).collect(),
            top: top_idx,
        })
    }

    fn to_raw(&self) -> Vec<RawVertex> {
        (0..self.len())
            .map(|v| RawVertex {
                id: self.names[v].clone(),
                parent: self.parent[v].map(|p| self.names[p].clone()),
                level: self.level[v],
                lambda: self.parent[v].map(|_| self.lambda[v].clone()),
                beta: self.beta[v].clone(),
                cut: self.cut[v],
            })
            .collect()
    }

    /// Parses and validates a tree spec document.
    pub fn from_spec_json(text: &str) -> Result<Self> {
        let spec: TreeSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let raw = spec
            .vertices
            .into_iter()
            .map(|v| {
                Ok(RawVertex {
                    lambda: v.lambda.as_deref().map(parse_rational).transpose()?,
                    beta: parse_rational(&v.beta)?,
                    id: v.id,
                    parent: v.parent,
                    level: v.level,
                    cut: v.cut,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_raw(raw, &spec.top, parse_rational(&spec.top_lambda)?)
    }

    /// Canonical spec document; `from_spec_json` inverts it exactly.
    pub fn to_spec_json(&self) -> String {
        let spec = TreeSpec {
            vertices: self
                .to_raw()
                .into_iter()
                .map(|v| VertexSpec {
                    id: v.id,
                    parent: v.parent,
                    level: v.level,
                    lambda: v.lambda.as_ref().map(format_rational),
                    beta: format_rational(&v.beta),
                    cut: v.cut,
                })
                .collect(),
            top: self.names[self.top].clone(),
            top_lambda: format_rational(&self.lambda[self.top]),
        };
        serde_json::to_string_pretty(&spec).expect("spec serializes")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn lambda(&self, v: usize) -> &Rational {
        &self.lambda[v]
    }

    pub fn beta(&self, v: usize) -> &Rational {
        &self.beta[v]
    }

    pub fn is_cut(&self, v: usize) -> bool {
        self.cut[v]
    }

    pub fn height(&self) -> usize {
        self.level[self.top]
    }

    /// Vertices grouped by level, lowest level first, each group in storage order.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let top_level = self.level[self.top];
        let lowest = self.level.iter().copied().min().unwrap_or(top_level);
        let mut out = vec![Vec::new(); top_level - lowest + 1];
        for v in 0..self.len() {
            out[self.level[v] - lowest].push(v);
        }
        out
    }

    /// `v` and everything below it, parents before children.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut k = 0;
        while k < out.len() {
            out.extend(&self.children[out[k]]);
            k += 1;
        }
        out
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = self.descendants(self.top);
        order.reverse();
        order
    }

    /// The path from `v` up to the top, `v` first.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(p) = self.parent[*out.last().expect("nonempty")] {
            out.push(p);
        }
        out
    }

    pub fn beta_is_zero(&self) -> bool {
        self.beta.iter().all(Zero::is_zero)
    }

    /// `Γ_x` with inherited coefficients and storage order.
    pub fn subtree(&self, x: usize) -> TreeTruncation {
        let mut keep = vec![false; self.len()];
        for v in self.descendants(x) {
            keep[v] = true;
        }
        let raw: Vec<RawVertex> = self
            .to_raw()
            .into_iter()
            .enumerate()
            .filter(|(k, _)| keep[*k])
            .map(|(k, mut v)| {
                if k == x {
                    v.parent = None;
                    v.lambda = None;
                }
                v
            })
            .collect();
        Self::from_raw(raw, &self.names[x], self.lambda[x].clone()).expect("a subtree of a valid tree is valid")
    }

    pub fn subtree_named(&self, x: &str) -> Result<TreeTruncation> {
        Ok(self.subtree(self.index_of(x)?))
    }

    /// Copy with one vertex's `λ` replaced.
    pub fn with_lambda(&self, v: usize, lambda: Rational) -> Result<TreeTruncation> {
        if !lambda.is_positive() {
            return Err(invalid(&self.names[v], "lambda must be positive"));
        }
        let mut t = self.clone();
        t.lambda[v] = lambda;
        Ok(t)
    }

    /// Same shape with every coefficient replaced, indexed by storage order.
    pub fn with_coefficients(&self, lambdas: Vec<Rational>, betas: Vec<Rational>) -> Result<TreeTruncation> {
        if lambdas.len() != self.len() || betas.len() != self.len() {
            return Err(Error::Argument("coefficient vectors must match the vertex count".into()));
        }
        if let Some(v) = lambdas.iter().position(|l| !l.is_positive()) {
            return Err(invalid(&self.names[v], "lambda must be positive"));
        }
        Ok(TreeTruncation { lambda: lambdas, beta: betas, ..self.clone() })
    }

    /// Copy with one vertex's `β` replaced.
    pub fn with_beta(&self, v: usize, beta: Rational) -> TreeTruncation {
        let mut t = self.clone();
        t.beta[v] = beta;
        t
    }

    /// The symmetric matrix `J_x` in storage order.
    pub fn dense_matrix(&self) -> Matrix<Rational> {
        let n = self.len();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for v in 0..n {
            m[v][v] = self.beta[v].clone();
            if let Some(p) = self.parent[v] {
                m[v][p] = self.lambda[v].clone();
                m[p][v] = self.lambda[v].clone();
            }
        }
        m
    }
}

/// Incremental construction in code; children are added below existing vertices.
#[derive(Clone, Debug)]
pub struct TreeBuilder {
    raw: Vec<RawVertex>,
    levels: HashMap<String, usize>,
    top_lambda: Rational,
    auto_cut: bool,
}

impl TreeBuilder {
    pub fn new(top: &str, level: usize, lambda: Rational, beta: Rational) -> Self {
        TreeBuilder {
            raw: vec![RawVertex { id: top.to_string(), parent: None, level, lambda: None, beta, cut: false }],
            levels: HashMap::from([(top.to_string(), level)]),
            top_lambda: lambda,
            auto_cut: false,
        }
    }

    /// Flag every childless vertex above level 0 as cut when building.
    pub fn auto_cut(mut self) -> Self {
        self.auto_cut = true;
        self
    }

    pub fn child(&mut self, id: &str, parent: &str, lambda: Rational, beta: Rational) -> Result<&mut Self> {
        let pl = *self.levels.get(parent).ok_or_else(|| Error::UnknownVertex(parent.to_string()))?;
        let level = pl.checked_sub(1).ok_or_else(|| invalid(id, "parent is on level 0"))?;
        if self.levels.insert(id.to_string(), level).is_some() {
            return Err(invalid(id, "duplicate vertex id"));
        }
        self.raw.push(RawVertex { id: id.to_string(), parent: Some(parent.to_string()), level, lambda: Some(lambda), beta, cut: false });
        Ok(self)
    }

    pub fn cut(&mut self, id: &str) -> &mut Self {
        if let Some(v) = self.raw.iter_mut().find(|v| v.id == id) {
            v.cut = true;
        }
        self
    }

    pub fn build(mut self) -> Result<TreeTruncation> {
        if self.auto_cut {
            let parents: std::collections::HashSet<String> = self.raw.iter().filter_map(|v| v.parent.clone()).collect();
            for v in &mut self.raw {
                if v.level > 0 && !parents.contains(&v.id) {
                    v.cut = true;
                }
            }
        }
        let top = self.raw[0].id.clone();
        TreeTruncation::from_raw(self.raw, &top, self.top_lambda)
    }
}

/// A finite path `x_0, x_1, …, x_n` climbing one level per step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSelection {
    path: Vec<usize>,
}

impl PathSelection {
    /// The path from the level-0 vertex `x0` up to the top.
    pub fn from_bottom(tree: &TreeTruncation, x0: usize) -> Result<Self> {
        if tree.level(x0) != 0 {
            return Err(Error::Argument(format!("path must start on level 0, `{}` is not", tree.name(x0))));
        }
        Ok(PathSelection { path: tree.ancestors(x0) })
    }

    /// Starts at the level-0 vertex whose chain of child positions is
    /// lexicographically first, which follows first children when they reach level 0.
    pub fn leftmost(tree: &TreeTruncation) -> Result<Self> {
        let bottom = tree.descendants(tree.top()).into_iter().find(|&v| tree.level(v) == 0);
        let bottom = bottom.ok_or_else(|| Error::Argument("no vertex on level 0".into()))?;
        Self::from_bottom(tree, bottom)
    }

    /// Parses a comma-separated list of names, bottom first.
    pub fn from_names(tree: &TreeTruncation, names: &[&str]) -> Result<Self> {
        let path = names.iter().map(|n| tree.index_of(n)).collect::<Result<Vec<_>>>()?;
        let Some(&x0) = path.first() else {
            return Err(Error::Argument("empty path".into()));
        };
        let full = Self::from_bottom(tree, x0)?;
        if !full.path.starts_with(&path) {
            return Err(Error::Argument("path must climb one parent per step".into()));
        }
        Ok(PathSelection { path })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

/// Where a generated vertex sits relative to the spine `x_0, …, x_depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Site {
    pub level: usize,
    pub is_top: bool,
    /// Edges to the nearest spine vertex; 0 on the spine.
    pub distance: usize,
    /// Level of the spine vertex this vertex hangs below (its own level on the spine).
    pub anchor_level: usize,
    /// Position among the parent's children.
    pub child_index: usize,
}

impl Site {
    pub fn on_spine(&self) -> bool {
        self.distance == 0
    }
}

type Rule<'a> = Box<dyn Fn(&Site) -> Rational + 'a>;

/// Assigns `λ` and `β` to generated vertices from their [`Site`].
pub struct Coefficients<'a> {
    lambda: Rule<'a>,
    beta: Rule<'a>,
}

impl<'a> Coefficients<'a> {
    pub fn new(lambda: impl Fn(&Site) -> Rational + 'a, beta: impl Fn(&Site) -> Rational + 'a) -> Self {
        Coefficients { lambda: Box::new(lambda), beta: Box::new(beta) }
    }

    pub fn constant(lambda: Rational, beta: Rational) -> Self {
        Self::new(move |_| lambda.clone(), move |_| beta.clone())
    }

    pub fn free() -> Self {
        Self::constant(Rational::one(), Rational::zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Every vertex above level 0 has `arity` children.
    Homogeneous { arity: usize, depth: usize },
    /// The classical case: one child per vertex.
    Path { depth: usize },
    /// A path where each `x_n`, `n ≥ 1`, also carries a pendant vertex `y_{n-1}`.
    DecoratedPath { depth: usize },
}

impl Shape {
    pub fn depth(&self) -> usize {
        match *self {
            Shape::Homogeneous { depth, .. } | Shape::Path { depth } | Shape::DecoratedPath { depth } => depth,
        }
    }
}

/// Builds a truncation of the given shape. Spine vertices are named
/// `x{level}`, off-spine children `{parent}.{k}`, pendants `y{n}`.
pub fn generate(shape: Shape, coeffs: &Coefficients) -> Result<TreeTruncation> {
    let depth = shape.depth();
    if let Shape::Homogeneous { arity: 0, .. } = shape {
        return Err(Error::Argument("arity must be at least 1".into()));
    }
    let mut raw = Vec::new();
    // (name, parent name, site)
    let top_site = Site { level: depth, is_top: true, distance: 0, anchor_level: depth, child_index: 0 };
    let mut stack = vec![(format!("x{depth}"), None::<String>, top_site)];
    let mut top_lambda = None;
    while let Some((name, parent, site)) = stack.pop() {
        let lambda = (coeffs.lambda)(&site);
        if !lambda.is_positive() {
            return Err(Error::Argument(format!("coefficient rule gave nonpositive lambda at `{name}`")));
        }
        let beta = (coeffs.beta)(&site);
        let mut kids = Vec::new();
        if site.level > 0 {
            let child = |k: usize, child_name: String| {
                let distance = if site.distance == 0 && k == 0 { 0 } else { site.distance + 1 };
                let anchor_level = if distance == 0 { site.level - 1 } else { site.anchor_level };
                (child_name, Site { level: site.level - 1, is_top: false, distance, anchor_level, child_index: k })
            };
            match shape {
                Shape::Homogeneous { arity, .. } => {
                    for k in 0..arity {
                        let child_name = if site.distance == 0 && k == 0 { format!("x{}", site.level - 1) } else { format!("{name}.{k}") };
                        kids.push(child(k, child_name));
                    }
                }
                Shape::Path { .. } => kids.push(child(0, format!("x{}", site.level - 1))),
                Shape::DecoratedPath { .. } => {
                    if site.distance == 0 {
                        kids.push(child(0, format!("x{}", site.level - 1)));
                        kids.push(child(1, format!("y{}", site.level - 1)));
                    }
                }
            }
        }
        let cut = site.level > 0 && kids.is_empty();
        if site.is_top {
            top_lambda = Some(lambda.clone());
        }
        raw.push(RawVertex {
            id: name.clone(),
            parent: parent.clone(),
            level: site.level,
            lambda: parent.as_ref().map(|_| lambda),
            beta,
            cut,
        });
        for (child_name, child_site) in kids.into_iter().rev() {
            stack.push((child_name, Some(name.clone()), child_site));
        }
    }
    TreeTruncation::from_raw(raw, &format!("x{depth}"), top_lambda.expect("top visited"))
}
