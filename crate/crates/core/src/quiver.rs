//! Quivers: directed multigraphs with ordered, named vertices and arrows.
//!
//! Declaration order is part of the data model. Intertwiner unknowns and
//! block matrices are laid out by vertex index, so two quivers are equal
//! only when their vertex and arrow lists agree in order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    #[serde(rename = "src")]
    pub source: String,
    #[serde(rename = "dst")]
    pub target: String,
}

impl Arrow {
    pub fn new(name: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Arrow { name: name.into(), source: source.into(), target: target.into() }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    // (source index, target index) per arrow
    ends: Vec<(usize, usize)>,
}

/// Canonical quivers with deterministic naming: vertices "1", "2", ...
/// and arrows "a1", "a2", ...
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalKind {
    /// One vertex with `n` loops (`L_n`).
    Loop(usize),
    /// Two vertices with `n` parallel arrows 1 -> 2.
    Kronecker(usize),
    /// `n` sources each with one arrow into the sink `n + 1` (`R_n`).
    Subspace(usize),
    /// 1 -> 3 <- 2, the shape of two subspaces of one space.
    TwoInclusions,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        let mut names = HashMap::new();
        let mut ends = Vec::with_capacity(arrows.len());
        for a in &arrows {
            if names.insert(a.name.clone(), ()).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow `{}`", a.name)));
            }
            let s = *vertex_index
                .get(&a.source)
                .ok_or_else(|| Error::InvalidQuiver(format!("arrow `{}` has unknown source `{}`", a.name, a.source)))?;
            let t = *vertex_index
                .get(&a.target)
                .ok_or_else(|| Error::InvalidQuiver(format!("arrow `{}` has unknown target `{}`", a.name, a.target)))?;
            ends.push((s, t));
        }
        Ok(Quiver { vertices, arrows, vertex_index, ends })
    }

    /// Convenience constructor from string slices and `(name, src, dst)` triples.
    pub fn from_parts(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        Quiver::new(
            vertices.iter().map(|v| v.to_string()).collect(),
            arrows.iter().map(|(n, s, t)| Arrow::new(*n, *s, *t)).collect(),
        )
    }

    pub fn canonical(kind: CanonicalKind) -> Result<Self> {
        let name = |k: usize| format!("a{k}");
        match kind {
            CanonicalKind::Loop(n) => {
                if n == 0 {
                    return Err(Error::InvalidParameter("loop quiver needs n >= 1".into()));
                }
                let arrows = (1..=n).map(|k| Arrow::new(name(k), "1", "1")).collect();
                Quiver::new(vec!["1".into()], arrows)
            }
            CanonicalKind::Kronecker(n) => {
                if n == 0 {
                    return Err(Error::InvalidParameter("kronecker quiver needs at least one arrow".into()));
                }
                let arrows = (1..=n).map(|k| Arrow::new(name(k), "1", "2")).collect();
                Quiver::new(vec!["1".into(), "2".into()], arrows)
            }
            CanonicalKind::Subspace(n) => {
                if n == 0 {
                    return Err(Error::InvalidParameter("subspace quiver needs n >= 1".into()));
                }
                let sink = (n + 1).to_string();
                let vertices = (1..=n + 1).map(|k| k.to_string()).collect();
                let arrows = (1..=n).map(|k| Arrow::new(name(k), k.to_string(), sink.clone())).collect();
                Quiver::new(vertices, arrows)
            }
            CanonicalKind::TwoInclusions => Quiver::from_parts(&["1", "2", "3"], &[("a1", "1", "3"), ("a2", "2", "3")]),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, v: &str) -> Result<usize> {
        self.vertex_index.get(v).copied().ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// `(source index, target index)` of arrow `k`.
    pub fn ends(&self, k: usize) -> (usize, usize) {
        self.ends[k]
    }

    /// Loops at `v`, in declaration order.
    pub fn loops_at(&self, v: &str) -> Result<Vec<&Arrow>> {
        self.vertex_index(v)?;
        Ok(self.arrows.iter().filter(|a| a.is_loop() && a.source == v).collect())
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(Arrow::is_loop)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.ends.iter().filter(|(s, _)| *s == v).count()
    }

    /// True iff there is no directed cycle (a loop counts as a cycle).
    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.ends {
            indeg[t] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for &(s, t) in &self.ends {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        seen == n
    }
}

/// A path: consecutive arrows with matching range and source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    arrows: Vec<usize>,
    source: usize,
    target: usize,
}

impl Path {
    pub fn new(quiver: &Quiver, arrow_names: &[&str]) -> Result<Self> {
        let mut arrows = Vec::with_capacity(arrow_names.len());
        for name in arrow_names {
            let k =
                quiver.arrow_index(name).ok_or_else(|| Error::InvalidParameter(format!("unknown arrow `{name}`")))?;
            if let Some(&prev) = arrows.last() {
                if quiver.ends(prev).1 != quiver.ends(k).0 {
                    return Err(Error::InvalidParameter(format!("arrow `{name}` does not continue the path")));
                }
            }
            arrows.push(k);
        }
        let (first, last) = match (arrows.first(), arrows.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::InvalidParameter("a path needs at least one arrow".into())),
        };
        Ok(Path { source: quiver.ends(first).0, target: quiver.ends(last).1, arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn is_cycle(&self) -> bool {
        self.source == self.target
    }
}
