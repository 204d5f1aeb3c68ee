//! Systems of subspaces of one space, their endomorphism algebras, and the
//! End-preserving bridges between operators, representations and systems.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intertwiner::{self, Intertwiner};
use crate::linalg::{self, CMat};
use crate::quiver::{Arrow, CanonicalKind, Quiver};
use crate::rep::Representation;
use crate::settings::Settings;
use crate::structure::AlgebraBasis;

/// A named subspace given by an inclusion with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub name: String,
    pub basis: CMat,
}

/// `(C^d; E_1, ..., E_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceSystem {
    ambient: usize,
    subspaces: Vec<Subspace>,
}

impl SubspaceSystem {
    /// Orthonormalizes each spanning matrix; rejects rank-deficient ones.
    pub fn new(ambient: usize, spanning: Vec<(String, CMat)>, settings: &Settings) -> Result<Self> {
        let mut subspaces = Vec::with_capacity(spanning.len());
        for (name, m) in spanning {
            if m.nrows() != ambient {
                return Err(Error::InvalidParameter(format!(
                    "subspace `{name}` has {} rows, expected {ambient}",
                    m.nrows()
                )));
            }
            if !linalg::is_finite(&m) {
                return Err(Error::InvalidParameter(format!("subspace `{name}` has non-finite entries")));
            }
            let rank = linalg::rank(&m, settings.svd_kappa());
            if rank < m.ncols() {
                return Err(Error::RankDeficient { vertex: name, rank, cols: m.ncols() });
            }
            let basis = if m.ncols() == 0 { m } else { m.qr().q() };
            subspaces.push(Subspace { name, basis });
        }
        Ok(SubspaceSystem { ambient, subspaces })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    /// Orthogonal projection onto subspace `i`.
    pub fn projection(&self, i: usize) -> CMat {
        let b = &self.subspaces[i].basis;
        b * b.adjoint()
    }
}

/// Basis of End with the evidence for its dimension.
#[derive(Clone, Debug)]
pub struct SystemEnd {
    pub algebra: AlgebraBasis,
    pub threshold: f64,
    pub gap: Option<f64>,
}

impl SystemEnd {
    pub fn dimension(&self) -> usize {
        self.algebra.dimension()
    }
}

/// Stacked constraints `Q_i^* T E_i = 0` on `vec(T)`, where `Q_i` spans the
/// orthogonal complement of `E_i`.
fn system_constraints(s: &SubspaceSystem, settings: &Settings) -> CMat {
    let d = s.ambient;
    let mut blocks = Vec::new();
    for sub in &s.subspaces {
        let q = linalg::orthogonal_complement(&sub.basis, settings.svd_kappa());
        if q.ncols() == 0 || sub.basis.ncols() == 0 {
            continue;
        }
        blocks.push(linalg::kron(&sub.basis.transpose(), &q.adjoint()));
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = CMat::zeros(rows, d * d);
    let mut r = 0;
    for b in blocks {
        m.view_mut((r, 0), b.shape()).copy_from(&b);
        r += b.nrows();
    }
    m
}

/// `{T : T E_i ⊂ E_i for all i}`.
pub fn system_end(s: &SubspaceSystem, settings: &Settings) -> Result<SystemEnd> {
    let d = s.ambient;
    if d * d > settings.max_unknowns {
        return Err(Error::SizeLimit { unknowns: d * d, limit: settings.max_unknowns });
    }
    let ns = linalg::nullspace_scaled(&system_constraints(s, settings), settings.svd_kappa(), 1.0);
    let elements = (0..ns.dim()).map(|j| linalg::unvec_col(ns.basis.column(j).as_slice(), d, d)).collect();
    Ok(SystemEnd { algebra: AlgebraBasis { ambient: d, elements }, threshold: ns.threshold, gap: ns.gap })
}

/// Largest `|(I - P_i) T P_i|` over the subspaces.
pub fn system_residual(s: &SubspaceSystem, t: &CMat) -> f64 {
    s.subspaces
        .iter()
        .map(|sub| {
            let image = t * &sub.basis;
            linalg::frobenius(&(&image - &sub.basis * (sub.basis.adjoint() * &image)))
        })
        .fold(0.0, f64::max)
}

/// Four subspaces of `K ⊕ K`: `K ⊕ 0`, `0 ⊕ K`, the graph of `A` and the
/// diagonal.
pub fn from_operator(a: &CMat, settings: &Settings) -> Result<SubspaceSystem> {
    let k = a.nrows();
    if a.ncols() != k {
        return Err(Error::InvalidParameter("operator must be square".into()));
    }
    let id = linalg::identity(k);
    let zero = CMat::zeros(k, k);
    let stack = |top: &CMat, bottom: &CMat| {
        let mut m = CMat::zeros(2 * k, k);
        m.view_mut((0, 0), (k, k)).copy_from(top);
        m.view_mut((k, 0), (k, k)).copy_from(bottom);
        m
    };
    SubspaceSystem::new(
        2 * k,
        vec![
            ("E1".into(), stack(&id, &zero)),
            ("E2".into(), stack(&zero, &id)),
            ("E3".into(), stack(&id, a)),
            ("E4".into(), stack(&id, &id)),
        ],
        settings,
    )
}

/// Representation of the subspace quiver: dims `(k_1, ..., k_n, d)` and the
/// inclusions as arrow maps.
pub fn system_to_rep(s: &SubspaceSystem) -> Result<Representation> {
    let q = Quiver::canonical(CanonicalKind::Subspace(s.len()))?;
    let mut dims: Vec<usize> = s.subspaces.iter().map(|e| e.basis.ncols()).collect();
    dims.push(s.ambient);
    let maps = s.subspaces.iter().map(|e| e.basis.clone()).collect();
    Representation::new(q, dims, maps)
}

/// Coordinate subspaces of `⊕_v H_v` followed by the graph of every arrow.
pub fn rep_to_system(rep: &Representation, settings: &Settings) -> Result<SubspaceSystem> {
    let q = rep.quiver();
    if let Some(a) = q.arrows().iter().find(|a| a.is_loop()) {
        return Err(Error::SelfLoop(a.source.clone()));
    }
    let d = rep.total_dim();
    let off = rep.offsets();
    let mut spanning = Vec::with_capacity(q.vertex_count() + q.arrow_count());
    for (v, name) in q.vertices().iter().enumerate() {
        let mut m = CMat::zeros(d, rep.dims()[v]);
        for i in 0..rep.dims()[v] {
            m[(off[v] + i, i)] = linalg::ONE;
        }
        spanning.push((name.clone(), m));
    }
    for (k, arrow) in q.arrows().iter().enumerate() {
        let (s, t) = q.ends(k);
        let ds = rep.dims()[s];
        let mut m = CMat::zeros(d, ds);
        for i in 0..ds {
            m[(off[s] + i, i)] = linalg::ONE;
        }
        let f = &rep.maps()[k];
        m.view_mut((off[t], 0), f.shape()).copy_from(f);
        spanning.push((arrow.name.clone(), m));
    }
    SubspaceSystem::new(d, spanning, settings)
}

fn fresh_name(taken: &[String], base: String) -> String {
    let mut name = base;
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

/// Replaces the loops at each vertex `v` by arrows `v -> v'` into a new copy
/// `v'` placed right after `v`, adds an identity arrow `v -> v'`, and moves
/// the sources of the other arrows leaving `v` to `v'`.
pub fn remove_loops(rep: &Representation) -> Result<Representation> {
    let q = rep.quiver();
    if !q.has_loops() {
        return Ok(rep.clone());
    }
    let mut vertices: Vec<String> = Vec::new();
    let mut dims = Vec::new();
    let mut copy_of: Vec<Option<String>> = vec![None; q.vertex_count()];
    let all_vertex_names: Vec<String> = q.vertices().to_vec();
    for (v, name) in q.vertices().iter().enumerate() {
        vertices.push(name.clone());
        dims.push(rep.dims()[v]);
        if q.loops_at(name)?.is_empty() {
            continue;
        }
        let mut taken = all_vertex_names.clone();
        taken.extend(vertices.iter().cloned());
        let copy = fresh_name(&taken, format!("{name}'"));
        vertices.push(copy.clone());
        dims.push(rep.dims()[v]);
        copy_of[v] = Some(copy);
    }
    let mut arrow_names: Vec<String> = q.arrows().iter().map(|a| a.name.clone()).collect();
    let mut arrows = Vec::new();
    let mut maps = Vec::new();
    for (v, name) in q.vertices().iter().enumerate() {
        let copy = match &copy_of[v] {
            Some(c) => c,
            None => continue,
        };
        for (k, a) in q.arrows().iter().enumerate() {
            if a.is_loop() && a.source == *name {
                arrows.push(Arrow::new(a.name.clone(), name.clone(), copy.clone()));
                maps.push(rep.maps()[k].clone());
            }
        }
        let id_name = fresh_name(&arrow_names, format!("id_{name}"));
        arrow_names.push(id_name.clone());
        arrows.push(Arrow::new(id_name, name.clone(), copy.clone()));
        maps.push(linalg::identity(rep.dims()[v]));
    }
    for (k, a) in q.arrows().iter().enumerate() {
        if a.is_loop() {
            continue;
        }
        let (s, _) = q.ends(k);
        let source = copy_of[s].clone().unwrap_or_else(|| a.source.clone());
        arrows.push(Arrow::new(a.name.clone(), source, a.target.clone()));
        maps.push(rep.maps()[k].clone());
    }
    Representation::new(Quiver::new(vertices, arrows)?, dims, maps)
}

/// Dimensions of End on both sides of a bridge, and the largest residual of
/// the explicit algebra map applied to a basis.
#[derive(Clone, Debug, Serialize)]
pub struct EndPreservation {
    pub source_dim_end: usize,
    pub target_dim_end: usize,
    pub map_residual: f64,
    pub tolerance: f64,
}

impl EndPreservation {
    pub fn holds(&self) -> bool {
        self.source_dim_end == self.target_dim_end && self.map_residual <= self.tolerance
    }

    fn into_result(self) -> Result<Self> {
        if self.holds() {
            Ok(self)
        } else {
            Err(Error::Numerical(format!(
                "End not preserved: dimensions {} vs {}, map residual {:.3e}",
                self.source_dim_end, self.target_dim_end, self.map_residual
            )))
        }
    }
}

/// `rep_to_system` with End preservation checked through `T -> ⊕_v T_v`.
pub fn rep_to_system_checked(rep: &Representation, settings: &Settings) -> Result<(SubspaceSystem, EndPreservation)> {
    let sys = rep_to_system(rep, settings)?;
    let end = intertwiner::end(rep, settings)?;
    let send = system_end(&sys, settings)?;
    let map_residual = end.elements.iter().map(|t| system_residual(&sys, &t.to_block_diag())).fold(0.0, f64::max);
    let check = EndPreservation {
        source_dim_end: end.dimension(),
        target_dim_end: send.dimension(),
        map_residual,
        tolerance: settings.tau_hom() * rep.scale(),
    };
    Ok((sys, check.into_result()?))
}

/// `system_to_rep` with End preservation checked through
/// `T -> (T|_{E_1}, ..., T|_{E_n}, T)`.
pub fn system_to_rep_checked(s: &SubspaceSystem, settings: &Settings) -> Result<(Representation, EndPreservation)> {
    let rep = system_to_rep(s)?;
    let send = system_end(s, settings)?;
    let end = intertwiner::end(&rep, settings)?;
    let map_residual = send
        .algebra
        .elements
        .iter()
        .map(|t| {
            let mut blocks: Vec<CMat> = s.subspaces.iter().map(|e| e.basis.adjoint() * t * &e.basis).collect();
            blocks.push(t.clone());
            Intertwiner { blocks }.residual(&rep, &rep)
        })
        .fold(0.0, f64::max);
    let check = EndPreservation {
        source_dim_end: send.dimension(),
        target_dim_end: end.dimension(),
        map_residual,
        tolerance: settings.tau_hom() * rep.scale(),
    };
    Ok((rep, check.into_result()?))
}

/// `remove_loops` with End preservation checked through
/// `T -> (T_v, T_v' = T_v)`.
pub fn remove_loops_checked(rep: &Representation, settings: &Settings) -> Result<(Representation, EndPreservation)> {
    let out = remove_loops(rep)?;
    let end = intertwiner::end(rep, settings)?;
    let end_out = intertwiner::end(&out, settings)?;
    let q = rep.quiver();
    let map_residual = end
        .elements
        .iter()
        .map(|t| {
            let mut blocks = Vec::new();
            for (v, name) in q.vertices().iter().enumerate() {
                blocks.push(t.blocks[v].clone());
                if !q.loops_at(name).map(|l| l.is_empty()).unwrap_or(true) {
                    blocks.push(t.blocks[v].clone());
                }
            }
            Intertwiner { blocks }.residual(&out, &out)
        })
        .fold(0.0, f64::max);
    let check = EndPreservation {
        source_dim_end: end.dimension(),
        target_dim_end: end_out.dimension(),
        map_residual,
        tolerance: settings.tau_hom() * rep.scale(),
    };
    Ok((out, check.into_result()?))
}

/// `from_operator` with `dim End(S_A)` compared to the commutant of `A`.
pub fn from_operator_checked(a: &CMat, settings: &Settings) -> Result<(SubspaceSystem, EndPreservation)> {
    let sys = from_operator(a, settings)?;
    let k = a.nrows();
    let l1 = Representation::new(Quiver::canonical(CanonicalKind::Loop(1))?, vec![k], vec![a.clone()])?;
    let commutant = intertwiner::end(&l1, settings)?;
    let send = system_end(&sys, settings)?;
    // T in the commutant acts as T ⊕ T on K ⊕ K.
    let map_residual = commutant
        .elements
        .iter()
        .map(|t| system_residual(&sys, &linalg::block_diag(&t.blocks[0], &t.blocks[0])))
        .fold(0.0, f64::max);
    let check = EndPreservation {
        source_dim_end: commutant.dimension(),
        target_dim_end: send.dimension(),
        map_residual,
        tolerance: settings.tau_hom() * l1.scale(),
    };
    Ok((sys, check.into_result()?))
}
