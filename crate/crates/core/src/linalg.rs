//! Dense complex linear algebra used throughout the crate: numerical
//! nullspaces and ranks under one threshold policy, column spaces, least
//! squares, and Schur-based spectral projectors.

use nalgebra::{DMatrix, DVector};
use ndarray::{Array2, ShapeBuilder};
use ndarray_linalg::{JobSvd, SVD, SVDDC};
pub use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::ffi::{c_char, c_int};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Builds a complex matrix from real row-major data.
pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> CMat {
    assert_eq!(data.len(), rows * cols);
    CMat::from_fn(rows, cols, |i, j| real(data[i * cols + j]))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Largest absolute entry; zero for empty matrices.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Haar-ish random unitary from the Q factor of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMat {
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    random_matrix(rng, n, n).qr().q()
}

/// Result of a numerical nullspace computation.
#[derive(Clone, Debug)]
pub struct Nullspace {
    /// Orthonormal columns spanning the numerical nullspace.
    pub basis: CMat,
    pub rank: usize,
    /// Singular values at or below this value were treated as zero.
    pub threshold: f64,
    pub sigma_max: f64,
    /// Smallest kept singular value divided by the largest discarded one
    /// (infinite when every discarded value is exactly zero). `None` when
    /// one of the two sets is empty.
    pub gap: Option<f64>,
}

impl Nullspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Threshold rule `max(m, n) * eps * sigma_max * kappa`.
pub fn svd_threshold(rows: usize, cols: usize, sigma_max: f64, kappa: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max * kappa
}

fn gap_of(kept_min: Option<f64>, discarded_max: Option<f64>) -> Option<f64> {
    match (kept_min, discarded_max) {
        (Some(k), Some(d)) if d > 0.0 => Some(k / d),
        (Some(_), Some(_)) => Some(f64::INFINITY),
        _ => None,
    }
}

/// Numerical nullspace of `m` via a full singular value decomposition.
///
/// Wide matrices are padded with zero rows so that the decomposition
/// returns a complete set of right singular vectors.
pub fn nullspace(m: &CMat, kappa: f64) -> Nullspace {
    nullspace_by(m, |rows, cols, sigma_max| svd_threshold(rows, cols, sigma_max, kappa))
}

/// Like [`nullspace`], but with `sigma_max` in the threshold replaced by
/// `max(sigma_max, reference)`. Passing the scale of the data the matrix was
/// built from keeps pure rounding noise from being counted as rank.
pub fn nullspace_scaled(m: &CMat, kappa: f64, reference: f64) -> Nullspace {
    nullspace_by(m, |rows, cols, sigma_max| svd_threshold(rows, cols, sigma_max.max(reference), kappa))
}

/// Numerical nullspace with the cutoff `rel * sigma_max`.
pub fn nullspace_relative(m: &CMat, rel: f64) -> Nullspace {
    nullspace_by(m, |_, _, sigma_max| rel * sigma_max)
}

fn nullspace_by(m: &CMat, cutoff: impl Fn(usize, usize, f64) -> f64) -> Nullspace {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Nullspace { basis: CMat::zeros(0, 0), rank: 0, threshold: 0.0, sigma_max: 0.0, gap: None };
    }
    if rows == 0 {
        return Nullspace { basis: identity(cols), rank: 0, threshold: 0.0, sigma_max: 0.0, gap: None };
    }
    // a tall matrix shares singular values and right vectors with its R factor
    let reduced = if rows > cols { m.clone().qr().r() } else { m.clone() };
    let svd = Svd::new(&reduced, JobSvd::All);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut sv = svd.s;
    sv.resize(cols, 0.0);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let threshold = cutoff(rows, cols, sigma_max);
    let mut null_idx = Vec::new();
    let mut kept_min: Option<f64> = None;
    let mut discarded_max: Option<f64> = None;
    for (i, &s) in sv.iter().enumerate() {
        if s > threshold {
            kept_min = Some(kept_min.map_or(s, |k: f64| k.min(s)));
        } else {
            null_idx.push(i);
            discarded_max = Some(discarded_max.map_or(s, |d: f64| d.max(s)));
        }
    }
    let mut basis = CMat::zeros(cols, null_idx.len());
    for (k, &i) in null_idx.iter().enumerate() {
        for j in 0..cols {
            basis[(j, k)] = v_t[(i, j)].conj();
        }
    }
    Nullspace { basis, rank: cols - null_idx.len(), threshold, sigma_max, gap: gap_of(kept_min, discarded_max) }
}

/// Singular values of `m` in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    Svd::new(m, JobSvd::None).s
}

/// Numerical rank under the standard threshold policy.
pub fn rank(m: &CMat, kappa: f64) -> usize {
    let sv = singular_values(m);
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let t = svd_threshold(m.nrows(), m.ncols(), sigma_max, kappa);
    sv.iter().filter(|&&s| s > t).count()
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &CMat, kappa: f64) -> CMat {
    let k = rank(m, kappa);
    leading_left_singular_vectors(m, k)
}

/// The `k` dominant left singular vectors of `m`.
pub fn leading_left_singular_vectors(m: &CMat, k: usize) -> CMat {
    let rows = m.nrows();
    if k == 0 || m.is_empty() {
        return CMat::zeros(rows, 0);
    }
    let u = Svd::new(m, JobSvd::Some).u.expect("left singular vectors requested");
    u.columns(0, k.min(u.ncols())).into_owned()
}

/// Extreme singular values `(min, max)` of a nonempty matrix.
pub fn singular_extremes(m: &CMat) -> (f64, f64) {
    let sv = singular_values(m);
    let lo = sv.last().copied().unwrap_or(0.0);
    let hi = sv.first().copied().unwrap_or(0.0);
    (lo, hi)
}

/// Least-squares solution of `a x = b` through the pseudo-inverse.
pub fn least_squares(a: &CMat, b: &CMat, kappa: f64) -> CMat {
    if a.ncols() == 0 || b.ncols() == 0 || a.nrows() == 0 {
        return CMat::zeros(a.ncols(), b.ncols());
    }
    let svd = Svd::new(a, JobSvd::Some);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.s.first().copied().unwrap_or(0.0);
    let eps = svd_threshold(a.nrows(), a.ncols(), sigma_max, kappa);
    let mut coeffs = u.adjoint() * b;
    for (i, &s) in svd.s.iter().enumerate() {
        let scale = if s > eps { real(1.0 / s) } else { ZERO };
        for z in coeffs.row_mut(i).iter_mut() {
            *z *= scale;
        }
    }
    v_t.adjoint() * coeffs
}

/// Thin singular value decomposition computed by LAPACK (divide and
/// conquer, falling back to the QR iteration driver).
struct Svd {
    u: Option<CMat>,
    /// Decreasing.
    s: Vec<f64>,
    v_t: Option<CMat>,
}

impl Svd {
    fn new(m: &CMat, job: JobSvd) -> Self {
        let a = Array2::from_shape_vec((m.nrows(), m.ncols()).f(), m.as_slice().to_vec())
            .expect("column-major buffer matches the shape");
        let (u, s, v_t) = match a.svddc(job) {
            Ok(r) => r,
            Err(_) => {
                let want = !matches!(job, JobSvd::None);
                let (u, s, v_t) = a.svd(want, want).expect("LAPACK singular value decomposition failed");
                if matches!(job, JobSvd::Some) {
                    let k = s.len();
                    let u = u.map(|u| u.slice_move(ndarray::s![.., ..k]));
                    let v_t = v_t.map(|v| v.slice_move(ndarray::s![..k, ..]));
                    (u, s, v_t)
                } else {
                    (u, s, v_t)
                }
            }
        };
        Svd { u: u.map(|x| from_array(&x)), s: s.to_vec(), v_t: v_t.map(|x| from_array(&x)) }
    }
}

fn from_array(a: &Array2<Complex64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Orthonormal basis of the orthogonal complement of the column span of an
/// orthonormal `d x k` matrix.
pub fn orthogonal_complement(basis: &CMat, kappa: f64) -> CMat {
    let d = basis.nrows();
    if basis.ncols() == 0 {
        return identity(d);
    }
    nullspace(&basis.adjoint(), kappa).basis
}

/// Vectorizes a matrix column by column.
pub fn vec_col(m: &CMat) -> CVec {
    CVec::from_iterator(m.len(), m.iter().cloned())
}

pub fn unvec_col(v: &[Complex64], rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v)
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for p in 0..br {
                for q in 0..bc {
                    out[(i * br + p, j * bc + q)] = s * b[(p, q)];
                }
            }
        }
    }
    out
}

pub fn trace(m: &CMat) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

pub fn matrix_power(m: &CMat, k: usize) -> CMat {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// Block-diagonal sum of square or rectangular blocks.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// Complex Schur form `a = q t q^H` with `t` upper triangular.
#[derive(Clone, Debug)]
pub struct SchurForm {
    pub q: CMat,
    pub t: CMat,
}

impl SchurForm {
    pub fn new(a: &CMat) -> Self {
        let n = a.nrows();
        if n == 0 {
            return SchurForm { q: CMat::zeros(0, 0), t: CMat::zeros(0, 0) };
        }
        let (q, mut t) = lapack_schur(a);
        for j in 0..n {
            for i in (j + 1)..n {
                t[(i, j)] = ZERO;
            }
        }
        SchurForm { q, t }
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Exchanges the diagonal entries at `k` and `k + 1` by a unitary
    /// similarity, keeping `t` triangular.
    pub fn swap_adjacent(&mut self, k: usize) {
        let n = self.t.nrows();
        let t11 = self.t[(k, k)];
        let t12 = self.t[(k, k + 1)];
        let t22 = self.t[(k + 1, k + 1)];
        // first column: eigenvector of the 2x2 block for t22
        let x1 = t12;
        let x2 = t22 - t11;
        let norm = (x1.norm_sqr() + x2.norm_sqr()).sqrt();
        if norm == 0.0 {
            return;
        }
        let (g11, g21) = (x1 / norm, x2 / norm);
        let (g12, g22) = (-g21.conj(), g11.conj());
        // rows k, k+1 <- G^H rows
        for j in 0..n {
            let a = self.t[(k, j)];
            let b = self.t[(k + 1, j)];
            self.t[(k, j)] = g11.conj() * a + g21.conj() * b;
            self.t[(k + 1, j)] = g12.conj() * a + g22.conj() * b;
        }
        // columns k, k+1 <- columns G
        for i in 0..n {
            let a = self.t[(i, k)];
            let b = self.t[(i, k + 1)];
            self.t[(i, k)] = a * g11 + b * g21;
            self.t[(i, k + 1)] = a * g12 + b * g22;
        }
        for i in 0..self.q.nrows() {
            let a = self.q[(i, k)];
            let b = self.q[(i, k + 1)];
            self.q[(i, k)] = a * g11 + b * g21;
            self.q[(i, k + 1)] = a * g12 + b * g22;
        }
        self.t[(k + 1, k)] = ZERO;
    }

    /// Reorders the form so that diagonal positions flagged in `front`
    /// come first (stable within each group). Returns the new flags.
    pub fn reorder(&mut self, front: &[bool]) -> Vec<bool> {
        let mut flags = front.to_vec();
        let n = flags.len();
        // bubble flagged entries leftwards
        for _ in 0..n {
            let mut moved = false;
            for k in 0..n.saturating_sub(1) {
                if !flags[k] && flags[k + 1] {
                    self.swap_adjacent(k);
                    flags.swap(k, k + 1);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        flags
    }
}

/// Complex Schur decomposition `(q, t)` of a nonempty square matrix by
/// LAPACK `zgees`.
fn lapack_schur(a: &CMat) -> (CMat, CMat) {
    let n = a.nrows();
    let ni = n as c_int;
    let mut t = a.clone();
    let mut q = CMat::zeros(n, n);
    let mut w = vec![ZERO; n];
    let mut rwork = vec![0.0; n];
    let mut bwork = vec![0 as c_int; n];
    let mut sdim: c_int = 0;
    let mut info: c_int = 0;
    let jobvs = b'V' as c_char;
    let sort = b'N' as c_char;
    let mut call = |work: &mut [Complex64], lwork: c_int, t: &mut CMat, q: &mut CMat| unsafe {
        lapack_sys::zgees_(
            &jobvs,
            &sort,
            None,
            &ni,
            t.as_mut_ptr().cast(),
            &ni,
            &mut sdim,
            w.as_mut_ptr().cast(),
            q.as_mut_ptr().cast(),
            &ni,
            work.as_mut_ptr().cast(),
            &lwork,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        )
    };
    let mut query = [ZERO];
    call(&mut query, -1, &mut t, &mut q);
    let lwork = (query[0].re as usize).max(2 * n).max(1);
    let mut work = vec![ZERO; lwork];
    call(&mut work, lwork as c_int, &mut t, &mut q);
    assert!(info == 0, "LAPACK zgees failed with info {info}");
    (q, t)
}

/// Solves `a x - x b = rhs` for upper triangular `a` and `b` with disjoint
/// spectra by column-wise back substitution.
pub fn solve_triangular_sylvester(a: &CMat, b: &CMat, rhs: &CMat) -> CMat {
    let p = a.nrows();
    let q = b.nrows();
    let mut x = CMat::zeros(p, q);
    for j in 0..q {
        let mut col: Vec<Complex64> = (0..p).map(|i| rhs[(i, j)]).collect();
        for k in 0..j {
            let bkj = b[(k, j)];
            if bkj != ZERO {
                for i in 0..p {
                    col[i] += x[(i, k)] * bkj;
                }
            }
        }
        let shift = b[(j, j)];
        for i in (0..p).rev() {
            let mut s = col[i];
            for k in (i + 1)..p {
                s -= a[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / (a[(i, i)] - shift);
        }
    }
    x
}

/// Splits eigenvalues into two groups by cutting the longest edge of their
/// single-linkage (minimum spanning) tree. Returns `None` when that edge is
/// not longer than `tau`, i.e. all eigenvalues form one cluster.
pub fn split_clusters(eigs: &[Complex64], tau: f64) -> Option<Vec<bool>> {
    let n = eigs.len();
    if n < 2 {
        return None;
    }
    // Prim's algorithm on the complete graph
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    best[0] = 0.0;
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n - 1);
    for _ in 0..n {
        let u = (0..n).filter(|&i| !in_tree[i]).min_by(|&a, &b| best[a].total_cmp(&best[b])).expect("vertex left");
        in_tree[u] = true;
        if parent[u] != usize::MAX {
            edges.push((parent[u], u, best[u]));
        }
        for v in 0..n {
            if !in_tree[v] {
                let d = (eigs[u] - eigs[v]).norm();
                if d < best[v] {
                    best[v] = d;
                    parent[v] = u;
                }
            }
        }
    }
    let (cut, _) = edges.iter().enumerate().max_by(|a, b| a.1 .2.total_cmp(&b.1 .2)).expect("n >= 2");
    if edges[cut].2 <= tau {
        return None;
    }
    // component of vertex 0 after removing the cut edge
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b, _)) in edges.iter().enumerate() {
        if i != cut {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut side = vec![false; n];
    let mut stack = vec![0usize];
    side[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !side[v] {
                side[v] = true;
                stack.push(v);
            }
        }
    }
    Some(side)
}

/// Spectral projector of `a` onto the invariant subspace belonging to the
/// eigenvalues at the positions flagged in `group` (positions refer to the
/// diagonal of `schur.t`). The complementary group must have a disjoint
/// spectrum.
pub fn spectral_projector(schur: &SchurForm, group: &[bool]) -> CMat {
    let mut form = schur.clone();
    let flags = form.reorder(group);
    let n = flags.len();
    let p = flags.iter().filter(|&&f| f).count();
    let t11 = form.t.view((0, 0), (p, p)).into_owned();
    let t12 = form.t.view((0, p), (p, n - p)).into_owned();
    let t22 = form.t.view((p, p), (n - p, n - p)).into_owned();
    let x = solve_triangular_sylvester(&t11, &t22, &(-t12));
    let mut core = CMat::zeros(n, n);
    for i in 0..p {
        core[(i, i)] = ONE;
    }
    core.view_mut((0, p), (p, n - p)).copy_from(&(-x));
    &form.q * core * form.q.adjoint()
}

/// One Newton step `3p^2 - 2p^3` towards the nearest idempotent.
pub fn refine_idempotent(p: &CMat) -> CMat {
    let p2 = p * p;
    let p3 = &p2 * p;
    p2 * real(3.0) - p3 * real(2.0)
}

/// Unit eigenvectors of `a`, one per diagonal position of its Schur form,
/// obtained as the leading Schur vector after moving that eigenvalue to the
/// front.
pub fn schur_eigenvectors(a: &CMat) -> Vec<CVec> {
    let base = SchurForm::new(a);
    let n = a.nrows();
    (0..n)
        .map(|k| {
            let mut form = base.clone();
            for j in (0..k).rev() {
                form.swap_adjacent(j);
            }
            form.q.column(0).into_owned()
        })
        .collect()
}

/// Incrementally maintained orthonormal basis of a subspace of `C^n`
/// (modified Gram-Schmidt with one reorthogonalization pass).
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    pub len: usize,
    pub vectors: Vec<CVec>,
}

impl OrthoBasis {
    pub fn new(len: usize) -> Self {
        OrthoBasis { len, vectors: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Component of `v` orthogonal to the current span.
    pub fn residual(&self, v: &CVec) -> CVec {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &self.vectors {
                let coeff = q.dotc(&r);
                r.axpy(-coeff, q, ONE);
            }
        }
        r
    }

    /// Adds `v` if its orthogonal residual exceeds `rel_tol * |v|` and
    /// `abs_floor`. Returns whether the span grew.
    pub fn try_add(&mut self, v: &CVec, rel_tol: f64, abs_floor: f64) -> bool {
        let nv = v.norm();
        if nv <= abs_floor {
            return false;
        }
        let r = self.residual(v);
        let nr = r.norm();
        if nr <= rel_tol * nv || nr <= abs_floor {
            return false;
        }
        self.vectors.push(r.unscale(nr));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nullspace_of_wide_matrix_is_complete() {
        let m = from_real_rows(1, 3, &[1.0, 1.0, 0.0]);
        let ns = nullspace(&m, 10.0);
        assert_eq!(ns.dim(), 2);
        assert!(frobenius(&(&m * &ns.basis)) < 1e-14);
        let g = ns.basis.adjoint() * &ns.basis;
        assert!(frobenius(&(g - identity(2))) < 1e-14);
    }

    #[test]
    fn nullspace_edge_shapes() {
        assert_eq!(nullspace(&CMat::zeros(0, 4), 10.0).dim(), 4);
        assert_eq!(nullspace(&CMat::zeros(3, 0), 10.0).dim(), 0);
        assert_eq!(nullspace(&CMat::zeros(3, 3), 10.0).dim(), 3);
    }

    #[test]
    fn gap_reports_separation() {
        let m = from_real_rows(2, 2, &[1.0, 0.0, 0.0, 1e-20]);
        let ns = nullspace(&m, 10.0);
        assert_eq!(ns.dim(), 1);
        assert!(ns.gap.unwrap() > 1e15);
    }

    #[test]
    fn swap_preserves_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 5, 5);
        let mut s = SchurForm::new(&a);
        let before = s.eigenvalues();
        s.swap_adjacent(1);
        let after = s.eigenvalues();
        assert!((before[1] - after[2]).norm() < 1e-10);
        assert!((before[2] - after[1]).norm() < 1e-10);
        let back = &s.q * &s.t * s.q.adjoint();
        assert!(frobenius(&(back - &a)) < 1e-10);
    }

    #[test]
    fn projector_of_diagonalizable_matrix() {
        let a = from_real_rows(3, 3, &[1.0, 5.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 1.0]);
        let s = SchurForm::new(&a);
        let group: Vec<bool> = s.eigenvalues().iter().map(|z| (z.re - 2.0).abs() < 0.5).collect();
        let p = spectral_projector(&s, &group);
        assert!(frobenius(&(&p * &p - &p)) < 1e-10);
        assert!(frobenius(&(&p * &a - &a * &p)) < 1e-10);
        assert!((trace(&p).re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn clusters_cut_at_largest_gap() {
        let eigs = [c(0.0, 0.0), c(1e-4, 0.0), c(3.0, 0.0), c(3.0, 1e-5)];
        let side = split_clusters(&eigs, 1e-6).unwrap();
        assert_eq!(side, vec![true, true, false, false]);
        assert!(split_clusters(&eigs[..2], 1.0).is_none());
    }

    #[test]
    fn sylvester_solution_satisfies_equation() {
        let a = from_real_rows(2, 2, &[1.0, 2.0, 0.0, 3.0]);
        let b = from_real_rows(2, 2, &[-1.0, 1.0, 0.0, -2.0]);
        let rhs = from_real_rows(2, 2, &[1.0, 0.0, 4.0, 2.0]);
        let x = solve_triangular_sylvester(&a, &b, &rhs);
        assert!(frobenius(&(&a * &x - &x * &b - rhs)) < 1e-12);
    }

    #[test]
    fn schur_eigenvectors_are_eigenvectors() {
        let a = from_real_rows(3, 3, &[2.0, 1.0, 0.0, 0.0, 2.0, 0.0, 1.0, 0.0, 5.0]);
        for v in schur_eigenvectors(&a) {
            let av = &a * &v;
            let lambda = v.dotc(&av);
            assert!((av - v * lambda).norm() < 1e-6);
        }
    }
}
