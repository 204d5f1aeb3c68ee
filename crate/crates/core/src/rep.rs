//! Finite-dimensional Hilbert representations of a quiver.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::quiver::Quiver;
use crate::settings::Settings;

/// Complex dimension per vertex, in vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionVector(pub Vec<usize>);

impl DimensionVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A space per vertex and a matrix of shape `dims[target] x dims[source]`
/// per arrow.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    quiver: Quiver,
    dims: Vec<usize>,
    maps: Vec<CMat>,
}

impl Representation {
    pub fn new(quiver: Quiver, dims: Vec<usize>, maps: Vec<CMat>) -> Result<Self> {
        if dims.len() != quiver.vertex_count() {
            return Err(Error::InvalidRepresentation(format!(
                "{} dimensions given for {} vertices",
                dims.len(),
                quiver.vertex_count()
            )));
        }
        if maps.len() != quiver.arrow_count() {
            return Err(Error::InvalidRepresentation(format!(
                "{} matrices given for {} arrows",
                maps.len(),
                quiver.arrow_count()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let (s, t) = quiver.ends(k);
            let name = &quiver.arrows()[k].name;
            if m.shape() != (dims[t], dims[s]) {
                return Err(Error::InvalidRepresentation(format!(
                    "arrow `{name}` has a {}x{} matrix, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    dims[t],
                    dims[s]
                )));
            }
            if !linalg::is_finite(m) {
                return Err(Error::InvalidRepresentation(format!("arrow `{name}` has non-finite entries")));
            }
        }
        Ok(Representation { quiver, dims, maps })
    }

    /// Builds a representation from maps given by arrow name.
    pub fn from_named(quiver: Quiver, dims: Vec<usize>, maps: Vec<(&str, CMat)>) -> Result<Self> {
        let mut ordered: Vec<Option<CMat>> = vec![None; quiver.arrow_count()];
        for (name, m) in maps {
            let k = quiver
                .arrow_index(name)
                .ok_or_else(|| Error::InvalidRepresentation(format!("unknown arrow `{name}`")))?;
            ordered[k] = Some(m);
        }
        let maps = ordered
            .into_iter()
            .enumerate()
            .map(|(k, m)| {
                m.ok_or_else(|| {
                    Error::InvalidRepresentation(format!("missing matrix for arrow `{}`", quiver.arrows()[k].name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::new(quiver, dims, maps)
    }

    pub fn zero(quiver: Quiver) -> Self {
        let dims = vec![0; quiver.vertex_count()];
        let maps = vec![CMat::zeros(0, 0); quiver.arrow_count()];
        Representation { quiver, dims, maps }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dimension_vector(&self) -> DimensionVector {
        DimensionVector(self.dims.clone())
    }

    pub fn maps(&self) -> &[CMat] {
        &self.maps
    }

    pub fn map(&self, arrow: &str) -> Option<&CMat> {
        self.quiver.arrow_index(arrow).map(|k| &self.maps[k])
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Start of each vertex block inside the acting space `⊕_v H_v`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            out.push(acc);
            acc += d;
        }
        out
    }

    /// Largest Frobenius norm among the arrow matrices, or 1 when all vanish.
    pub fn scale(&self) -> f64 {
        let s = self.maps.iter().map(linalg::frobenius).fold(0.0, f64::max);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// Arrow `k` as an operator on the acting space (zero off its block).
    pub fn embedded_arrow(&self, k: usize) -> CMat {
        let off = self.offsets();
        let (s, t) = self.quiver.ends(k);
        let n = self.total_dim();
        let mut out = CMat::zeros(n, n);
        out.view_mut((off[t], off[s]), self.maps[k].shape()).copy_from(&self.maps[k]);
        out
    }

    /// Coordinate projection onto the block of vertex `v`.
    pub fn vertex_idempotent(&self, v: usize) -> CMat {
        let off = self.offsets();
        let n = self.total_dim();
        let mut out = CMat::zeros(n, n);
        for i in off[v]..off[v] + self.dims[v] {
            out[(i, i)] = linalg::ONE;
        }
        out
    }

    /// Transports the representation along invertible per-vertex maps:
    /// `g_a = phi_t f_a phi_s^{-1}`.
    pub fn transport(&self, phi: &[CMat]) -> Result<Representation> {
        if phi.len() != self.dims.len() {
            return Err(Error::InvalidParameter("one change of basis per vertex required".into()));
        }
        let mut inverses = Vec::with_capacity(phi.len());
        for (v, p) in phi.iter().enumerate() {
            if p.shape() != (self.dims[v], self.dims[v]) {
                return Err(Error::InvalidParameter(format!("change of basis at vertex {v} has wrong shape")));
            }
            let inv = if p.is_empty() { Some(p.clone()) } else { p.clone().try_inverse() };
            inverses.push(inv.ok_or_else(|| Error::Numerical(format!("change of basis at vertex {v} is singular")))?);
        }
        let maps = (0..self.maps.len())
            .map(|k| {
                let (s, t) = self.quiver.ends(k);
                &phi[t] * &self.maps[k] * &inverses[s]
            })
            .collect();
        Representation::new(self.quiver.clone(), self.dims.clone(), maps)
    }
}

/// Block-diagonal sum with `a`'s block first at every vertex.
pub fn direct_sum(a: &Representation, b: &Representation) -> Result<Representation> {
    if a.quiver != b.quiver {
        return Err(Error::QuiverMismatch);
    }
    let dims = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
    let maps = a.maps.iter().zip(&b.maps).map(|(f, g)| linalg::block_diag(f, g)).collect();
    Representation::new(a.quiver.clone(), dims, maps)
}

/// Restricts `rep` to the subspaces spanned by the columns of the per-vertex
/// inclusion matrices, solving `f_a i_s = i_t g_a` in the least-squares
/// sense. Fails when an inclusion is rank deficient or when some arrow does
/// not map its source subspace into its target subspace.
pub fn restrict(rep: &Representation, inclusions: &[CMat], settings: &Settings) -> Result<Representation> {
    let q = &rep.quiver;
    if inclusions.len() != q.vertex_count() {
        return Err(Error::InvalidParameter("one inclusion matrix per vertex required".into()));
    }
    let kappa = settings.svd_kappa();
    let mut sub_dims = Vec::with_capacity(inclusions.len());
    for (v, inc) in inclusions.iter().enumerate() {
        if inc.nrows() != rep.dims[v] {
            return Err(Error::InvalidParameter(format!(
                "inclusion at vertex `{}` has {} rows, expected {}",
                q.vertices()[v],
                inc.nrows(),
                rep.dims[v]
            )));
        }
        let r = linalg::rank(inc, kappa);
        if r < inc.ncols() {
            return Err(Error::RankDeficient { vertex: q.vertices()[v].clone(), rank: r, cols: inc.ncols() });
        }
        sub_dims.push(inc.ncols());
    }
    let mut maps = Vec::with_capacity(rep.maps.len());
    for (k, f) in rep.maps.iter().enumerate() {
        let (s, t) = q.ends(k);
        let image = f * &inclusions[s];
        let g = linalg::least_squares(&inclusions[t], &image, kappa);
        let residual = linalg::max_abs(&(&inclusions[t] * &g - &image));
        let tolerance = settings.tau_range() * linalg::max_abs(f);
        if residual > tolerance {
            return Err(Error::NotInvariant { arrow: q.arrows()[k].name.clone(), residual, tolerance });
        }
        maps.push(g);
    }
    Representation::new(q.clone(), sub_dims, maps)
}

/// `C` at `v0`, zero spaces elsewhere, all maps zero.
pub fn canonically_simple(quiver: &Quiver, v0: &str) -> Result<Representation> {
    let i = quiver.vertex_index(v0)?;
    let mut dims = vec![0; quiver.vertex_count()];
    dims[i] = 1;
    let maps = (0..quiver.arrow_count())
        .map(|k| {
            let (s, t) = quiver.ends(k);
            CMat::zeros(dims[t], dims[s])
        })
        .collect();
    Representation::new(quiver.clone(), dims, maps)
}

/// Equal dimension vectors, a necessary condition for isomorphism.
pub fn is_isomorphism_compatible(a: &Representation, b: &Representation) -> Result<bool> {
    if a.quiver != b.quiver {
        return Err(Error::QuiverMismatch);
    }
    Ok(a.dims == b.dims)
}
