//! Intertwiner spaces `Hom(a, b)` as numerical nullspaces of the stacked
//! intertwining equations `T_t f_a - g_a T_s = 0`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::rep::Representation;
use crate::settings::Settings;

/// A vertex-indexed tuple of matrices `T_v : H_v -> K_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Intertwiner {
    pub blocks: Vec<CMat>,
}

impl Intertwiner {
    pub fn identity(rep: &Representation) -> Self {
        Intertwiner { blocks: rep.dims().iter().map(|&d| linalg::identity(d)).collect() }
    }

    /// Block-diagonal operator on the acting space.
    pub fn to_block_diag(&self) -> CMat {
        let rows: usize = self.blocks.iter().map(|b| b.nrows()).sum();
        let cols: usize = self.blocks.iter().map(|b| b.ncols()).sum();
        let mut out = CMat::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in &self.blocks {
            out.view_mut((r, c), b.shape()).copy_from(b);
            r += b.nrows();
            c += b.ncols();
        }
        out
    }

    /// Splits a block-diagonal operator back into vertex blocks.
    pub fn from_block_diag(m: &CMat, target_dims: &[usize], source_dims: &[usize]) -> Self {
        let (mut r, mut c) = (0, 0);
        let mut blocks = Vec::with_capacity(target_dims.len());
        for (&dt, &ds) in target_dims.iter().zip(source_dims) {
            blocks.push(m.view((r, c), (dt, ds)).into_owned());
            r += dt;
            c += ds;
        }
        Intertwiner { blocks }
    }

    /// Entries stacked vertex by vertex, each block column-major.
    pub fn to_vec(&self) -> linalg::CVec {
        let n: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut out = linalg::CVec::zeros(n);
        let mut k = 0;
        for b in &self.blocks {
            for x in b.iter() {
                out[k] = *x;
                k += 1;
            }
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
    }

    /// Largest Frobenius norm of `T_t f_a - g_a T_s` over the arrows.
    pub fn residual(&self, a: &Representation, b: &Representation) -> f64 {
        let q = a.quiver();
        (0..q.arrow_count())
            .map(|k| {
                let (s, t) = q.ends(k);
                linalg::frobenius(&(&self.blocks[t] * &a.maps()[k] - &b.maps()[k] * &self.blocks[s]))
            })
            .fold(0.0, f64::max)
    }
}

/// Orthonormal basis of `Hom(a, b)` together with the numerical evidence
/// behind its dimension.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub elements: Vec<Intertwiner>,
    pub source_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    /// Singular value cutoff used for the nullspace.
    pub threshold: f64,
    pub sigma_max: f64,
    pub gap: Option<f64>,
    /// Bound every element's residual is checked against.
    pub tolerance: f64,
    pub max_residual: f64,
}

impl HomBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn summary(&self) -> HomSummary {
        HomSummary {
            dimension: self.dimension(),
            svd_threshold: self.threshold,
            sigma_max: self.sigma_max,
            gap: self.gap,
            tolerance: self.tolerance,
            max_residual: self.max_residual,
        }
    }

    /// `sum_k c_k B_k`.
    pub fn combination(&self, coeffs: &[linalg::Complex64]) -> Intertwiner {
        let mut blocks: Vec<CMat> =
            self.target_dims.iter().zip(&self.source_dims).map(|(&t, &s)| CMat::zeros(t, s)).collect();
        for (e, &c) in self.elements.iter().zip(coeffs) {
            for (acc, b) in blocks.iter_mut().zip(&e.blocks) {
                *acc += b * c;
            }
        }
        Intertwiner { blocks }
    }
}

/// Serializable evidence for a hom dimension.
#[derive(Clone, Debug, Serialize)]
pub struct HomSummary {
    pub dimension: usize,
    pub svd_threshold: f64,
    pub sigma_max: f64,
    pub gap: Option<f64>,
    pub tolerance: f64,
    pub max_residual: f64,
}

/// Number of scalar unknowns of `Hom(a, b)`.
pub fn unknown_count(a: &Representation, b: &Representation) -> usize {
    a.dims().iter().zip(b.dims()).map(|(x, y)| x * y).sum()
}

/// Stacked constraint matrix acting on the unknowns `vec(T_v)`, vertex by
/// vertex. Arrow `s -> t` contributes the rows of
/// `(f^T (x) I) vec(T_t) - (I (x) g) vec(T_s)`.
pub fn constraint_matrix(a: &Representation, b: &Representation) -> CMat {
    let q = a.quiver();
    let (da, db) = (a.dims(), b.dims());
    let mut offsets = Vec::with_capacity(da.len());
    let mut n = 0;
    for v in 0..da.len() {
        offsets.push(n);
        n += da[v] * db[v];
    }
    let rows: usize = (0..q.arrow_count())
        .map(|k| {
            let (s, t) = q.ends(k);
            db[t] * da[s]
        })
        .sum();
    let mut m = CMat::zeros(rows, n);
    let mut r0 = 0;
    for k in 0..q.arrow_count() {
        let (s, t) = q.ends(k);
        let h = db[t] * da[s];
        if h == 0 {
            continue;
        }
        let f = &a.maps()[k];
        let g = &b.maps()[k];
        let left = linalg::kron(&f.transpose(), &linalg::identity(db[t]));
        let right = linalg::kron(&linalg::identity(da[s]), g);
        let mut view = m.view_mut((r0, offsets[t]), (h, da[t] * db[t]));
        view += &left;
        let mut view = m.view_mut((r0, offsets[s]), (h, da[s] * db[s]));
        view -= &right;
        r0 += h;
    }
    m
}

/// Basis of `Hom(a, b)`.
pub fn hom(a: &Representation, b: &Representation, settings: &Settings) -> Result<HomBasis> {
    if a.quiver() != b.quiver() {
        return Err(Error::QuiverMismatch);
    }
    let unknowns = unknown_count(a, b);
    if unknowns > settings.max_unknowns {
        return Err(Error::SizeLimit { unknowns, limit: settings.max_unknowns });
    }
    let tolerance = settings.tau_hom() * a.scale().max(b.scale());
    let m = constraint_matrix(a, b);
    let ns = linalg::nullspace_scaled(&m, settings.svd_kappa(), a.scale().max(b.scale()));
    let (da, db) = (a.dims(), b.dims());
    let mut elements = Vec::with_capacity(ns.dim());
    for j in 0..ns.dim() {
        let col = ns.basis.column(j);
        let mut blocks = Vec::with_capacity(da.len());
        let mut off = 0;
        for v in 0..da.len() {
            let len = da[v] * db[v];
            blocks.push(linalg::unvec_col(&col.as_slice()[off..off + len], db[v], da[v]));
            off += len;
        }
        elements.push(Intertwiner { blocks });
    }
    let max_residual = elements.iter().map(|e| e.residual(a, b)).fold(0.0, f64::max);
    if max_residual > tolerance {
        return Err(Error::Numerical(format!(
            "intertwiner residual {max_residual:.3e} exceeds tolerance {tolerance:.3e}"
        )));
    }
    Ok(HomBasis {
        elements,
        source_dims: da.to_vec(),
        target_dims: db.to_vec(),
        threshold: ns.threshold,
        sigma_max: ns.sigma_max,
        gap: ns.gap,
        tolerance,
        max_residual,
    })
}

/// Basis of `End(rep) = Hom(rep, rep)`.
pub fn end(rep: &Representation, settings: &Settings) -> Result<HomBasis> {
    hom(rep, rep, settings)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotIsomorphic {
    DimensionMismatch,
    HomZero,
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Yes(Intertwiner),
    No(NotIsomorphic),
    /// Hom is nonzero but none of the random samples was invertible.
    ProbablyNo {
        hom_dimension: usize,
        samples: usize,
    },
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            IsoVerdict::Yes(_) => "yes",
            IsoVerdict::No(_) => "no",
            IsoVerdict::ProbablyNo { .. } => "probably_no",
        }
    }
}

/// True when every vertex block is square and well conditioned relative to
/// `tau_inv`.
pub fn is_invertible(t: &Intertwiner, settings: &Settings) -> bool {
    t.blocks.iter().all(|b| {
        if b.nrows() != b.ncols() {
            return false;
        }
        if b.is_empty() {
            return true;
        }
        let (lo, hi) = linalg::singular_extremes(b);
        hi > 0.0 && lo >= settings.tau_inv() * hi
    })
}

/// Isomorphism test by random sampling of `Hom(a, b)`.
pub fn are_isomorphic(a: &Representation, b: &Representation, settings: &Settings) -> Result<IsoVerdict> {
    if a.quiver() != b.quiver() {
        return Err(Error::QuiverMismatch);
    }
    if a.dims() != b.dims() {
        return Ok(IsoVerdict::No(NotIsomorphic::DimensionMismatch));
    }
    if a.is_zero() {
        return Ok(IsoVerdict::Yes(Intertwiner::identity(a)));
    }
    let h = hom(a, b, settings)?;
    if h.dimension() == 0 {
        return Ok(IsoVerdict::No(NotIsomorphic::HomZero));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    for _ in 0..settings.iso_samples {
        let coeffs: Vec<_> = (0..h.dimension()).map(|_| linalg::random_complex(&mut rng)).collect();
        let t = h.combination(&coeffs);
        if is_invertible(&t, settings) {
            return Ok(IsoVerdict::Yes(t));
        }
    }
    Ok(IsoVerdict::ProbablyNo { hom_dimension: h.dimension(), samples: settings.iso_samples })
}

/// True iff `Hom(a, b) = 0` and `Hom(b, a) = 0`.
pub fn relatively_prime(a: &Representation, b: &Representation, settings: &Settings) -> Result<bool> {
    Ok(hom(a, b, settings)?.dimension() == 0 && hom(b, a, settings)?.dimension() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_rows, identity};
    use crate::quiver::{CanonicalKind, Quiver};
    use crate::rep::{canonically_simple, direct_sum};

    fn jordan(n: usize, lambda: f64) -> CMat {
        let mut m = identity(n) * c(lambda, 0.0);
        for i in 1..n {
            m[(i - 1, i)] = linalg::ONE;
        }
        m
    }

    fn l1(m: CMat) -> Representation {
        let n = m.nrows();
        Representation::new(Quiver::canonical(CanonicalKind::Loop(1)).unwrap(), vec![n], vec![m]).unwrap()
    }

    fn kron2(f: CMat, g: CMat) -> Representation {
        let dims = vec![f.ncols(), f.nrows()];
        Representation::new(Quiver::canonical(CanonicalKind::Kronecker(2)).unwrap(), dims, vec![f, g]).unwrap()
    }

    fn lower_shift(n: usize) -> CMat {
        let mut s = CMat::zeros(n, n);
        for i in 1..n {
            s[(i, i - 1)] = linalg::ONE;
        }
        s
    }

    /// Commutant dimension by brute force: solve `XA = AX` entry by entry
    /// with an explicit `n^2 x n^2` system assembled without Kronecker
    /// products.
    fn brute_commutant_dim(a: &CMat) -> usize {
        let n = a.nrows();
        let mut m = CMat::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let row = i * n + j;
                // (XA - AX)_{ij} = sum_k X_{ik} A_{kj} - A_{ik} X_{kj}
                for k in 0..n {
                    m[(row, i * n + k)] += a[(k, j)];
                    m[(row, k * n + j)] -= a[(i, k)];
                }
            }
        }
        n * n - linalg::rank(&m, 10.0)
    }

    #[test]
    fn end_of_jordan_block_has_dimension_n() {
        let s = Settings::default();
        for n in 2..=5 {
            let j = jordan(n, 0.7);
            assert_eq!(brute_commutant_dim(&j), n);
            let e = end(&l1(j), &s).unwrap();
            assert_eq!(e.dimension(), n);
            assert!(e.max_residual <= e.tolerance);
        }
    }

    #[test]
    fn end_contains_identity() {
        let s = Settings::default();
        let rep = kron2(from_real_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]), from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let e = end(&rep, &s).unwrap();
        assert!(e.dimension() >= 1);
        // identity lies in the span of the orthonormal basis
        let id = Intertwiner::identity(&rep).to_vec();
        let mut proj = linalg::CVec::zeros(id.len());
        for el in &e.elements {
            let v = el.to_vec();
            proj += &v * v.dotc(&id);
        }
        assert!((proj - id).norm() < 1e-10);
    }

    #[test]
    fn basis_is_orthonormal() {
        let e = end(&l1(jordan(4, 0.0)), &Settings::default()).unwrap();
        for (i, x) in e.elements.iter().enumerate() {
            for (j, y) in e.elements.iter().enumerate() {
                let ip = y.to_vec().dotc(&x.to_vec());
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn shifted_jordan_models_are_relatively_prime() {
        let s = Settings::default();
        let n = 3;
        let a = kron2(identity(n), identity(n) * c(0.5, 0.0) + lower_shift(n));
        let b = kron2(identity(n), identity(n) * c(-1.0, 0.0) + lower_shift(n));
        assert_eq!(hom(&a, &b, &s).unwrap().dimension(), 0);
        assert!(relatively_prime(&a, &b, &s).unwrap());
        assert!(!relatively_prime(&a, &a, &s).unwrap());
        assert!(matches!(are_isomorphic(&a, &b, &s).unwrap(), IsoVerdict::No(NotIsomorphic::HomZero)));
    }

    #[test]
    fn self_isomorphism_found() {
        let s = Settings::default();
        let rep = l1(jordan(3, 1.0));
        match are_isomorphic(&rep, &rep, &s).unwrap() {
            IsoVerdict::Yes(t) => assert!(t.residual(&rep, &rep) < 1e-8),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_and_quiver_mismatch() {
        let s = Settings::default();
        let a = l1(jordan(2, 0.0));
        let b = l1(jordan(3, 0.0));
        assert!(matches!(are_isomorphic(&a, &b, &s).unwrap(), IsoVerdict::No(NotIsomorphic::DimensionMismatch)));
        let k = kron2(identity(2), identity(2));
        assert!(matches!(hom(&a, &k, &s), Err(Error::QuiverMismatch)));
    }

    #[test]
    fn nonisomorphic_with_nonzero_hom_is_probably_no() {
        // J_2(0) and the zero map share Hom of dimension 2 but are not similar.
        let s = Settings::default();
        let a = l1(jordan(2, 0.0));
        let b = l1(CMat::zeros(2, 2));
        match are_isomorphic(&a, &b, &s).unwrap() {
            IsoVerdict::ProbablyNo { hom_dimension, .. } => assert_eq!(hom_dimension, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn simples_at_unconnected_vertices_are_relatively_prime() {
        let q = Quiver::from_parts(&["x", "y", "z"], &[("f", "x", "z")]).unwrap();
        let s = Settings::default();
        let a = canonically_simple(&q, "x").unwrap();
        let b = canonically_simple(&q, "y").unwrap();
        assert!(relatively_prime(&a, &b, &s).unwrap());
    }

    #[test]
    fn size_limit_enforced() {
        let s = Settings { max_unknowns: 3, ..Settings::default() };
        match end(&l1(jordan(2, 0.0)), &s) {
            Err(Error::SizeLimit { unknowns, limit }) => assert_eq!((unknowns, limit), (4, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_representation_has_zero_dimensional_hom() {
        let q = Quiver::canonical(CanonicalKind::Kronecker(2)).unwrap();
        let z = Representation::zero(q);
        assert_eq!(end(&z, &Settings::default()).unwrap().dimension(), 0);
    }

    #[test]
    fn end_of_direct_sum_dominates() {
        let s = Settings::default();
        let a = l1(jordan(2, 1.0));
        let b = l1(jordan(1, 1.0));
        let sum = direct_sum(&a, &b).unwrap();
        let d = end(&sum, &s).unwrap().dimension();
        assert!(d >= 3);
        // commutant of J_2(1) + J_1(1) has dimension 5
        assert_eq!(d, brute_commutant_dim(&sum.maps()[0]));
    }
}
