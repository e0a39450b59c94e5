//! Vertex names, ports, state symbols and renamings.
//!
//! Names are structured as a base identifier followed by a path of small
//! integers (`v3.0.1`). Rules derive fresh names by appending segments, so a
//! name produced from `v3` is always `v3.k` for some `k`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Errors raised while building names or symbols from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("vertex name base must be nonempty and alphanumeric, got {0:?}")]
    BadBase(String),
    #[error("vertex name suffix must be a decimal integer, got {0:?}")]
    BadSegment(String),
    #[error("symbol must be nonempty without whitespace, got {0:?}")]
    BadSymbol(String),
    #[error("port must look like <name>:<index>, got {0:?}")]
    BadPort(String),
}

/// A vertex identifier: an alphanumeric base plus a suffix path.
///
/// Ordering is lexicographic on the base, then on the path. Every
/// deterministic iteration in the crate follows this order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexName {
    base: Arc<str>,
    path: SmallVec<[u32; 4]>,
}

impl VertexName {
    pub fn new(base: &str) -> Result<Self, NameError> {
        if base.is_empty() || !base.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(NameError::BadBase(base.to_string()));
        }
        Ok(Self {
            base: Arc::from(base),
            path: SmallVec::new(),
        })
    }

    pub fn with_path(base: &str, path: &[u32]) -> Result<Self, NameError> {
        let mut name = Self::new(base)?;
        name.path.extend_from_slice(path);
        Ok(name)
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    /// The name extended by one suffix segment.
    pub fn child(&self, segment: u32) -> Self {
        let mut path = self.path.clone();
        path.push(segment);
        Self {
            base: self.base.clone(),
            path,
        }
    }

    /// The name with its last segment removed, if it has one.
    pub fn parent(&self) -> Option<Self> {
        if self.path.is_empty() {
            return None;
        }
        let mut path = self.path.clone();
        path.pop();
        Some(Self {
            base: self.base.clone(),
            path,
        })
    }

    /// True when `self` equals `other` or `other` extends `self` by suffixes.
    pub fn is_prefix_of(&self, other: &VertexName) -> bool {
        self.base == other.base && other.path.starts_with(&self.path)
    }

    /// Number of segments `other` adds to `self`, when `self` is a prefix of it.
    pub fn depth_to(&self, other: &VertexName) -> Option<usize> {
        self.is_prefix_of(other)
            .then(|| other.path.len() - self.path.len())
    }

    /// Replaces the prefix `from` of `self` by `to`. The caller guarantees
    /// `from.is_prefix_of(self)`.
    fn reroot(&self, from: &VertexName, to: &VertexName) -> VertexName {
        let mut path = to.path.clone();
        path.extend_from_slice(&self.path[from.path.len()..]);
        VertexName {
            base: to.base.clone(),
            path,
        }
    }
}

impl fmt::Display for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        for seg in &self.path {
            write!(f, ".{seg}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VertexName {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split('.');
        let mut name = Self::new(parts.next().unwrap_or(""))?;
        for seg in parts {
            if seg.is_empty() || !seg.bytes().all(|b| b.is_ascii_digit()) {
                return Err(NameError::BadSegment(seg.to_string()));
            }
            let value = seg
                .parse::<u32>()
                .map_err(|_| NameError::BadSegment(seg.to_string()))?;
            name.path.push(value);
        }
        Ok(name)
    }
}

impl Serialize for VertexName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout tests and generators. Panics on malformed input.
pub fn vn(text: &str) -> VertexName {
    text.parse()
        .unwrap_or_else(|e| panic!("invalid vertex name {text:?}: {e}"))
}

/// A vertex or edge state drawn from a finite alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(text: &str) -> Result<Self, NameError> {
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(NameError::BadSymbol(text.to_string()));
        }
        Ok(Self(Arc::from(text)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl FromStr for Symbol {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

/// Panicking shorthand for literal symbols.
pub fn sym(text: &str) -> Symbol {
    Symbol::new(text).unwrap_or_else(|e| panic!("invalid symbol {text:?}: {e}"))
}

/// Edge state used by every built-in rule and generator.
pub const DEFAULT_EDGE_STATE: &str = "e";

/// A numbered attachment point `u:i` on a vertex. Indices start at 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub vertex: VertexName,
    pub index: u32,
}

impl Port {
    pub fn new(vertex: VertexName, index: u32) -> Self {
        Self { vertex, index }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vertex, self.index)
    }
}

impl fmt::Debug for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Port {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, index) = s
            .rsplit_once(':')
            .ok_or_else(|| NameError::BadPort(s.to_string()))?;
        let index = index
            .parse::<u32>()
            .map_err(|_| NameError::BadPort(s.to_string()))?;
        Ok(Port::new(name.parse()?, index))
    }
}

/// A finite-support renaming: explicit pairs, identity everywhere else.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Renaming {
    pairs: BTreeMap<VertexName, VertexName>,
}

impl Renaming {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a renaming, rejecting pairs that send two names to one.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, (VertexName, VertexName, VertexName)>
    where
        I: IntoIterator<Item = (VertexName, VertexName)>,
    {
        let mut map = BTreeMap::new();
        let mut seen: BTreeMap<VertexName, VertexName> = BTreeMap::new();
        for (from, to) in pairs {
            if from == to {
                continue;
            }
            if let Some(prev) = seen.get(&to) {
                if *prev != from {
                    return Err((prev.clone(), from, to));
                }
            }
            seen.insert(to.clone(), from.clone());
            map.insert(from, to);
        }
        Ok(Self { pairs: map })
    }

    /// Exchanges two names.
    pub fn swap(a: VertexName, b: VertexName) -> Self {
        let mut pairs = BTreeMap::new();
        if a != b {
            pairs.insert(a.clone(), b.clone());
            pairs.insert(b, a);
        }
        Self { pairs }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&VertexName, &VertexName)> {
        self.pairs.iter()
    }

    pub fn apply(&self, name: &VertexName) -> VertexName {
        self.pairs.get(name).cloned().unwrap_or_else(|| name.clone())
    }

    /// The conjugate action on derived names: the longest prefix of `name`
    /// found in the explicit domain is renamed and the remaining suffix is kept.
    /// `v.2` under `{v -> w}` becomes `w.2`.
    pub fn apply_conjugate(&self, name: &VertexName) -> VertexName {
        let mut probe = Some(name.clone());
        while let Some(candidate) = probe {
            if let Some(target) = self.pairs.get(&candidate) {
                return name.reroot(&candidate, target);
            }
            probe = candidate.parent();
        }
        name.clone()
    }

    pub fn inverse(&self) -> Self {
        Self {
            pairs: self
                .pairs
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    /// Returns the first pair of distinct names in `names` sharing an image.
    pub fn collision<'a, I>(&self, names: I) -> Option<(VertexName, VertexName, VertexName)>
    where
        I: IntoIterator<Item = &'a VertexName>,
    {
        let mut images: BTreeMap<VertexName, VertexName> = BTreeMap::new();
        for name in names {
            let image = self.apply(name);
            if let Some(prev) = images.insert(image.clone(), name.clone()) {
                if prev != *name {
                    return Some((prev, name.clone(), image));
                }
            }
        }
        None
    }

    pub fn domain(&self) -> BTreeSet<VertexName> {
        self.pairs.keys().cloned().collect()
    }
}
