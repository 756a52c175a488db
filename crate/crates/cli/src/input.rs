//! Reading tree specs and parsing argument values.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use treejacobi::exactmath::{parse_gaussian, parse_rational, GaussianRational, Rational};
use treejacobi::tree::{PathSelection, TreeTruncation};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read `{path}`: {source}")]
    Read { path: String, source: std::io::Error },

    #[error("cannot write `{path}`: {source}")]
    Write { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] treejacobi::Error),
}

impl CliError {
    /// Exit status: 2 for bad input, 1 when a computation itself failed.
    pub fn exit_code(&self) -> u8 {
        use treejacobi::Error as E;
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::Write { .. } => 2,
            CliError::Core(E::Parse(_) | E::Validation { .. } | E::UnknownVertex(_) | E::Argument(_)) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A tree read from a spec file, with the raw bytes kept for the digest.
pub struct LoadedTree {
    pub tree: TreeTruncation,
    pub bytes: Vec<u8>,
}

pub fn load_tree(path: &Path) -> CliResult<LoadedTree> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Usage(format!("`{}` is not UTF-8: {e}", path.display())))?;
    let tree = TreeTruncation::from_spec_json(text)?;
    Ok(LoadedTree { tree, bytes })
}

pub fn vertex(tree: &TreeTruncation, name: &str) -> CliResult<usize> {
    Ok(tree.index_of(name)?)
}

/// The explicit `--path` list, or the leftmost path when absent.
pub fn path(tree: &TreeTruncation, names: Option<&str>) -> CliResult<PathSelection> {
    match names {
        Some(list) => {
            let names: Vec<&str> = list.split(',').map(str::trim).collect();
            Ok(PathSelection::from_names(tree, &names)?)
        }
        None => Ok(PathSelection::leftmost(tree)?),
    }
}

pub fn gaussian_value(text: &str) -> CliResult<GaussianRational> {
    Ok(parse_gaussian(text)?)
}

pub fn rational_value(text: &str) -> CliResult<Rational> {
    Ok(parse_rational(text)?)
}

/// `a..b` (inclusive), `a..=b`, or a comma-separated list.
pub fn depths(text: &str) -> CliResult<Vec<usize>> {
    let number = |s: &str| s.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad depth `{s}` in `{text}`")));
    let out = if let Some((a, b)) = text.split_once("..") {
        let (lo, hi) = (number(a)?, number(b.trim_start_matches('='))?);
        if lo > hi {
            return Err(CliError::Usage(format!("empty depth range `{text}`")));
        }
        (lo..=hi).collect()
    } else {
        text.split(',').map(number).collect::<CliResult<Vec<_>>>()?
    };
    if out.is_empty() {
        return Err(CliError::Usage("no depths given".into()));
    }
    Ok(out)
}

/// `key=value` pairs separated by commas.
pub fn params(text: Option<&str>) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in text.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| CliError::Usage(format!("parameter `{item}` is not key=value")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Looks up a parameter, rejecting names the example does not know.
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn new(values: BTreeMap<String, String>, known: &[&str]) -> CliResult<Self> {
        if let Some(k) = values.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("unknown parameter `{k}`; expected one of {}", known.join(", "))));
        }
        Ok(Params { values })
    }

    pub fn rational(&self, key: &str, default: &str) -> CliResult<Rational> {
        rational_value(self.values.get(key).map_or(default, String::as_str))
    }

    pub fn usize(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| CliError::Usage(format!("parameter `{key}` must be a nonnegative integer"))),
        }
    }

    pub fn text<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.values.get(key).map_or(default, String::as_str)
    }
}
