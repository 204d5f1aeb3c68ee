//! Structural verdicts: indecomposability, transitivity, simplicity,
//! irreducibility, strong irreducibility and decomposition into
//! indecomposable summands.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intertwiner::{self, HomBasis, Intertwiner};
use crate::linalg::{self, CMat, CVec, OrthoBasis, SchurForm};
use crate::quiver::{Arrow, CanonicalKind, Quiver};
use crate::rep::{self, Representation};
use crate::settings::Settings;

/// A subalgebra of `M_n(C)` given by a linear basis.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    pub ambient: usize,
    pub elements: Vec<CMat>,
}

impl AlgebraBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn combination(&self, coeffs: &[linalg::Complex64]) -> CMat {
        let mut out = CMat::zeros(self.ambient, self.ambient);
        for (e, &c) in self.elements.iter().zip(coeffs) {
            out += e * c;
        }
        out
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> CMat {
        let coeffs: Vec<_> = (0..self.dimension()).map(|_| linalg::random_complex(rng)).collect();
        self.combination(&coeffs)
    }

    /// Largest distance from a product of basis elements to the span.
    pub fn closure_defect(&self) -> f64 {
        let mut span = OrthoBasis::new(self.ambient * self.ambient);
        for e in &self.elements {
            span.try_add(&linalg::vec_col(e), 0.0, 0.0);
        }
        let mut worst: f64 = 0.0;
        for x in &self.elements {
            for y in &self.elements {
                let p = linalg::vec_col(&(x * y));
                worst = worst.max(span.residual(&p).norm());
            }
        }
        worst
    }
}

/// End as block-diagonal operators on the acting space.
pub fn end_algebra(rep: &Representation, settings: &Settings) -> Result<(HomBasis, AlgebraBasis)> {
    let h = intertwiner::end(rep, settings)?;
    let elements = h.elements.iter().map(Intertwiner::to_block_diag).collect();
    Ok((h, AlgebraBasis { ambient: rep.total_dim(), elements }))
}

/// Jacobson radical of a subalgebra as the kernel of the trace form.
#[derive(Clone, Debug, Serialize)]
pub struct RadicalInfo {
    pub algebra_dimension: usize,
    pub radical_dimension: usize,
    /// `dim A / rad A`, the rank of the trace-form Gram matrix.
    pub semisimple_dimension: usize,
    pub gram_gap: Option<f64>,
    #[serde(skip)]
    pub radical: Vec<CMat>,
}

pub fn radical(alg: &AlgebraBasis, settings: &Settings) -> RadicalInfo {
    let k = alg.dimension();
    let mut gram = CMat::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let t = (&alg.elements[i] * &alg.elements[j]).trace();
            gram[(i, j)] = t;
            gram[(j, i)] = t;
        }
    }
    let ns = linalg::nullspace_relative(&gram, settings.tau_radical());
    let radical = (0..ns.dim())
        .map(|j| {
            let coeffs: Vec<_> = ns.basis.column(j).iter().copied().collect();
            alg.combination(&coeffs)
        })
        .collect();
    RadicalInfo {
        algebra_dimension: k,
        radical_dimension: ns.dim(),
        semisimple_dimension: ns.rank,
        gram_gap: ns.gap,
        radical,
    }
}

fn require_nonzero(rep: &Representation) -> Result<()> {
    if rep.is_zero() {
        Err(Error::ZeroRepresentation)
    } else {
        Ok(())
    }
}

/// A nontrivial idempotent endomorphism, evidence of decomposability.
#[derive(Clone, Debug)]
pub struct IdempotentWitness {
    pub idempotent: Intertwiner,
    /// `|P^2 - P| / |P|` after refinement.
    pub idempotent_defect: f64,
    /// Rank of each vertex block.
    pub ranks: Vec<usize>,
    pub attempts: usize,
}

#[derive(Clone, Debug)]
pub enum Indecomposability {
    Yes,
    No(IdempotentWitness),
}

#[derive(Clone, Debug)]
pub struct IndecomposabilityReport {
    pub end: HomBasis,
    pub radical: RadicalInfo,
    pub verdict: Indecomposability,
}

impl IndecomposabilityReport {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self.verdict, Indecomposability::Yes)
    }
}

pub fn is_indecomposable(rep: &Representation, settings: &Settings) -> Result<IndecomposabilityReport> {
    require_nonzero(rep)?;
    let (end, alg) = end_algebra(rep, settings)?;
    let rad = radical(&alg, settings);
    if rad.semisimple_dimension == 1 {
        return Ok(IndecomposabilityReport { end, radical: rad, verdict: Indecomposability::Yes });
    }
    let witness = find_idempotent(rep, &alg, settings)?;
    Ok(IndecomposabilityReport { end, radical: rad, verdict: Indecomposability::No(witness) })
}

fn find_idempotent(rep: &Representation, alg: &AlgebraBasis, settings: &Settings) -> Result<IdempotentWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let dims = rep.dims();
    let mut last = String::from("no spectral split found");
    for attempt in 1..=settings.max_tries {
        let x = alg.random_element(&mut rng);
        let schur = SchurForm::new(&x);
        let eigs = schur.eigenvalues();
        let rho = eigs.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let group = match linalg::split_clusters(&eigs, settings.tau_cluster() * rho) {
            Some(g) => g,
            None => continue,
        };
        let p = polish_idempotent(alg, linalg::spectral_projector(&schur, &group));
        let norm = linalg::frobenius(&p);
        let defect = linalg::frobenius(&(&p * &p - &p)) / norm;
        let t = Intertwiner::from_block_diag(&p, dims, dims);
        let off_block = (linalg::frobenius(&p).powi(2) - t.norm().powi(2)).max(0.0).sqrt() / norm;
        let residual = t.residual(rep, rep) / (norm * rep.scale());
        let tol = settings.tau_idempotent();
        if defect > tol || off_block > tol || residual > tol {
            last = format!(
                "idempotent check failed: defect {defect:.2e}, off-block {off_block:.2e}, residual {residual:.2e}"
            );
            continue;
        }
        let ranks: Vec<usize> = t.blocks.iter().map(|b| linalg::trace(b).re.round().max(0.0) as usize).collect();
        let total: usize = ranks.iter().sum();
        if total == 0 || total == rep.total_dim() {
            last = "spectral projector was trivial".into();
            continue;
        }
        return Ok(IdempotentWitness { idempotent: t, idempotent_defect: defect, ranks, attempts: attempt });
    }
    Err(Error::Numerical(format!(
        "End/rad has dimension > 1 but no nontrivial idempotent was found in {} tries ({last})",
        settings.max_tries
    )))
}

/// Alternates orthogonal projection onto the algebra with Newton steps
/// towards the nearest idempotent.
fn polish_idempotent(alg: &AlgebraBasis, mut p: CMat) -> CMat {
    for _ in 0..3 {
        let coeffs: Vec<_> = alg.elements.iter().map(|b| b.dotc(&p)).collect();
        p = linalg::refine_idempotent(&alg.combination(&coeffs));
    }
    p
}

/// True iff `End(rep)` consists of scalars.
pub fn is_transitive(rep: &Representation, settings: &Settings) -> Result<bool> {
    require_nonzero(rep)?;
    Ok(intertwiner::end(rep, settings)?.dimension() == 1)
}

pub fn is_canonically_simple(rep: &Representation) -> bool {
    rep.dims().iter().sum::<usize>() == 1
        && rep.dims().iter().all(|&d| d <= 1)
        && rep.maps().iter().all(|m| m.iter().all(|x| *x == linalg::ZERO))
}

/// Unital algebra generated by the vertex idempotents and the arrows,
/// closed under left multiplication by the generators.
pub fn generated_algebra(rep: &Representation, settings: &Settings) -> Result<AlgebraBasis> {
    let n = rep.total_dim();
    let mut gens: Vec<CMat> = (0..rep.dims().len()).map(|v| rep.vertex_idempotent(v)).collect();
    gens.extend((0..rep.maps().len()).map(|k| rep.embedded_arrow(k)));
    let (rel, floor) = (settings.tau_alg(), settings.alg_floor());
    let mut span = OrthoBasis::new(n * n);
    let mut elements: Vec<CMat> = Vec::new();
    let add = |m: CMat, span: &mut OrthoBasis, elements: &mut Vec<CMat>| {
        let norm = linalg::frobenius(&m);
        if norm == 0.0 {
            return;
        }
        let v = linalg::vec_col(&m).unscale(norm);
        if span.try_add(&v, rel, floor) {
            let q = span.vectors.last().expect("just added");
            elements.push(linalg::unvec_col(q.as_slice(), n, n));
        }
    };
    add(linalg::identity(n), &mut span, &mut elements);
    for g in &gens {
        add(g.clone(), &mut span, &mut elements);
    }
    let mut next = 0;
    while next < elements.len() && elements.len() < n * n {
        let b = elements[next].clone();
        for g in &gens {
            add(g * &b, &mut span, &mut elements);
        }
        next += 1;
        if elements.len() > n * n {
            return Err(Error::Numerical("generated algebra exceeded the full matrix algebra".into()));
        }
    }
    Ok(AlgebraBasis { ambient: n, elements })
}

#[derive(Clone, Debug)]
pub enum Simplicity {
    Yes,
    /// A proper nonzero subrepresentation given by per-vertex inclusions.
    No {
        inclusions: Vec<CMat>,
        sub: Representation,
    },
}

#[derive(Clone, Debug)]
pub struct SimplicityReport {
    pub generated_dimension: usize,
    pub full_dimension: usize,
    pub verdict: Simplicity,
}

impl SimplicityReport {
    pub fn is_simple(&self) -> bool {
        matches!(self.verdict, Simplicity::Yes)
    }
}

pub fn is_simple(rep: &Representation, settings: &Settings) -> Result<SimplicityReport> {
    require_nonzero(rep)?;
    let alg = generated_algebra(rep, settings)?;
    let n = rep.total_dim();
    let full_dimension = n * n;
    if alg.dimension() == full_dimension {
        return Ok(SimplicityReport { generated_dimension: alg.dimension(), full_dimension, verdict: Simplicity::Yes });
    }
    let (inclusions, sub) = invariant_subspace(rep, &alg, settings)?;
    Ok(SimplicityReport {
        generated_dimension: alg.dimension(),
        full_dimension,
        verdict: Simplicity::No { inclusions, sub },
    })
}

/// Splits a subspace of the acting space that is invariant under the vertex
/// idempotents into per-vertex orthonormal inclusions. `basis` has
/// orthonormal columns, so each vertex block has singular values near 0 or 1.
fn graded_inclusions(rep: &Representation, basis: &CMat) -> Vec<CMat> {
    let off = rep.offsets();
    rep.dims()
        .iter()
        .enumerate()
        .map(|(v, &d)| {
            let block = basis.view((off[v], 0), (d, basis.ncols())).into_owned();
            let k =
                if block.is_empty() { 0 } else { linalg::singular_values(&block).iter().filter(|&&s| s > 0.5).count() };
            linalg::leading_left_singular_vectors(&block, k)
        })
        .collect()
}

fn orbit_span(alg: &AlgebraBasis, vectors: &[CVec], settings: &Settings) -> CMat {
    let cols: Vec<CVec> = alg.elements.iter().flat_map(|b| vectors.iter().map(move |v| b * v)).collect();
    let m = CMat::from_columns(&cols);
    linalg::column_space(&m, settings.svd_kappa())
}

fn invariant_subspace(
    rep: &Representation,
    alg: &AlgebraBasis,
    settings: &Settings,
) -> Result<(Vec<CMat>, Representation)> {
    let n = rep.total_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut candidates: Vec<CMat> = Vec::new();
    let x = alg.random_element(&mut rng);
    for v in linalg::schur_eigenvectors(&x) {
        candidates.push(orbit_span(alg, &[v], settings));
    }
    // A non-semisimple algebra moves every vector into J V, a proper subspace.
    let rad = radical(alg, settings);
    if rad.radical_dimension > 0 {
        let cols: Vec<CVec> =
            (0..n).map(|i| CVec::from_fn(n, |j, _| if i == j { linalg::ONE } else { linalg::ZERO })).collect();
        let jv: Vec<CVec> = rad.radical.iter().flat_map(|j| cols.iter().map(move |e| j * e)).collect();
        let span = linalg::column_space(&CMat::from_columns(&jv), settings.svd_kappa());
        if span.ncols() > 0 {
            candidates.push(orbit_span(alg, &span.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>(), settings));
        }
    }
    for w in candidates {
        if w.ncols() == 0 || w.ncols() >= n {
            continue;
        }
        let inclusions = graded_inclusions(rep, &w);
        let total: usize = inclusions.iter().map(|i| i.ncols()).sum();
        if total == 0 || total >= n {
            continue;
        }
        if let Ok(sub) = rep::restrict(rep, &inclusions, settings) {
            return Ok((inclusions, sub));
        }
    }
    Err(Error::Numerical("generated algebra is proper but no invariant subspace was isolated".into()))
}

/// The representation with an adjoint arrow `t -> s` added for each arrow.
pub fn doubled(rep: &Representation) -> Result<Representation> {
    let q = rep.quiver();
    let mut arrows: Vec<Arrow> = q.arrows().to_vec();
    let mut maps: Vec<CMat> = rep.maps().to_vec();
    for (k, a) in q.arrows().iter().enumerate() {
        let mut name = format!("{}*", a.name);
        while arrows.iter().any(|b| b.name == name) {
            name.push('*');
        }
        arrows.push(Arrow::new(name, a.target.clone(), a.source.clone()));
        maps.push(rep.maps()[k].adjoint());
    }
    let quiver = Quiver::new(q.vertices().to_vec(), arrows)?;
    Representation::new(quiver, rep.dims().to_vec(), maps)
}

/// Dimension of `{T in End : T^* in End}`.
pub fn star_closed_end_dimension(rep: &Representation, settings: &Settings) -> Result<usize> {
    Ok(intertwiner::end(&doubled(rep)?, settings)?.dimension())
}

/// True iff the only orthogonal projections in End are 0 and I.
pub fn is_irreducible(rep: &Representation, settings: &Settings) -> Result<bool> {
    require_nonzero(rep)?;
    Ok(star_closed_end_dimension(rep, settings)? == 1)
}

#[derive(Clone, Debug)]
pub enum DecompositionTree {
    Leaf(Representation),
    Node { rep: Representation, idempotent: Intertwiner, children: Box<(DecompositionTree, DecompositionTree)> },
}

impl DecompositionTree {
    pub fn representation(&self) -> &Representation {
        match self {
            DecompositionTree::Leaf(r) => r,
            DecompositionTree::Node { rep, .. } => rep,
        }
    }

    pub fn leaves(&self) -> Vec<&Representation> {
        match self {
            DecompositionTree::Leaf(r) => vec![r],
            DecompositionTree::Node { children, .. } => {
                let mut out = children.0.leaves();
                out.extend(children.1.leaves());
                out
            }
        }
    }

    /// Direct sum of the leaves in tree order.
    pub fn reassemble(&self) -> Result<Representation> {
        let leaves = self.leaves();
        let mut acc = leaves[0].clone();
        for l in &leaves[1..] {
            acc = rep::direct_sum(&acc, l)?;
        }
        Ok(acc)
    }
}

/// Recursively splits along idempotent witnesses until every leaf is
/// indecomposable.
pub fn decompose(rep: &Representation, settings: &Settings) -> Result<DecompositionTree> {
    let report = is_indecomposable(rep, settings)?;
    let witness = match report.verdict {
        Indecomposability::Yes => return Ok(DecompositionTree::Leaf(rep.clone())),
        Indecomposability::No(w) => w,
    };
    let mut image = Vec::new();
    let mut kernel = Vec::new();
    for (v, p) in witness.idempotent.blocks.iter().enumerate() {
        let d = rep.dims()[v];
        let r = witness.ranks[v].min(d);
        image.push(linalg::leading_left_singular_vectors(p, r));
        kernel.push(linalg::leading_left_singular_vectors(&(linalg::identity(d) - p), d - r));
    }
    let left = rep::restrict(rep, &image, settings)?;
    let right = rep::restrict(rep, &kernel, settings)?;
    let (l, r) = rayon::join(|| decompose(&left, settings), || decompose(&right, settings));
    Ok(DecompositionTree::Node { rep: rep.clone(), idempotent: witness.idempotent, children: Box::new((l?, r?)) })
}

/// Both routes for strong irreducibility of a square matrix.
#[derive(Clone, Debug, Serialize)]
pub struct StrongIrreducibility {
    /// Single Jordan block: `A - (tr A / n) I` is nilpotent of rank `n - 1`.
    pub single_jordan_block: bool,
    /// Indecomposability of the one-loop representation of `A`.
    pub one_loop_indecomposable: bool,
}

/// Decides whether `a` is a single Jordan block up to similarity, by the
/// direct criterion and by indecomposability of its one-loop
/// representation; disagreement is an error.
pub fn strong_irreducibility(a: &CMat, settings: &Settings) -> Result<StrongIrreducibility> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::InvalidParameter("strong irreducibility needs a nonempty square matrix".into()));
    }
    let mu = linalg::trace(a) / linalg::real(n as f64);
    let nil = a - linalg::identity(n) * mu;
    let rank = linalg::rank(&nil, settings.svd_kappa());
    let norm = linalg::frobenius(&nil);
    let nilpotent = linalg::frobenius(&linalg::matrix_power(&nil, n)) <= settings.tau_cluster() * norm.powi(n as i32);
    let single_jordan_block = rank + 1 == n && (n == 1 || nilpotent);
    let l1 = Representation::new(Quiver::canonical(CanonicalKind::Loop(1))?, vec![n], vec![a.clone()])?;
    let one_loop_indecomposable = is_indecomposable(&l1, settings)?.is_indecomposable();
    if single_jordan_block != one_loop_indecomposable {
        return Err(Error::Numerical(format!(
            "strong irreducibility routes disagree: single Jordan block {single_jordan_block}, \
             one-loop indecomposable {one_loop_indecomposable}"
        )));
    }
    Ok(StrongIrreducibility { single_jordan_block, one_loop_indecomposable })
}

pub fn is_strongly_irreducible(a: &CMat, settings: &Settings) -> Result<bool> {
    Ok(strong_irreducibility(a, settings)?.single_jordan_block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_rows, identity};

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

    fn l2(a: CMat, b: CMat) -> Representation {
        let n = a.nrows();
        Representation::new(Quiver::canonical(CanonicalKind::Loop(2)).unwrap(), vec![n], vec![a, b]).unwrap()
    }

    fn e(i: usize, j: usize) -> CMat {
        let mut m = CMat::zeros(2, 2);
        m[(i, j)] = linalg::ONE;
        m
    }

    #[test]
    fn radical_dimensions() {
        let s = Settings::default();
        let (_, a) = end_algebra(&l1(from_real_rows(2, 2, &[1.0, 0.0, 0.0, 2.0])), &s).unwrap();
        assert_eq!(radical(&a, &s).radical_dimension, 0);
        let (_, b) = end_algebra(&l1(jordan(2, 0.0)), &s).unwrap();
        assert_eq!(radical(&b, &s).radical_dimension, 1);
        assert!(b.closure_defect() < 1e-10);
    }

    #[test]
    fn jordan_block_is_indecomposable() {
        let s = Settings::default();
        for n in 1..=5 {
            assert!(is_indecomposable(&l1(jordan(n, 0.3)), &s).unwrap().is_indecomposable());
        }
    }

    #[test]
    fn diagonal_splits_with_eigenprojection() {
        let s = Settings::default();
        let rep = l1(from_real_rows(2, 2, &[1.0, 0.0, 0.0, 2.0]));
        match is_indecomposable(&rep, &s).unwrap().verdict {
            Indecomposability::No(w) => {
                let p = &w.idempotent.blocks[0];
                let d0 = from_real_rows(2, 2, &[1.0, 0.0, 0.0, 0.0]);
                let d1 = from_real_rows(2, 2, &[0.0, 0.0, 0.0, 1.0]);
                assert!(linalg::max_abs(&(p - &d0)) < 1e-10 || linalg::max_abs(&(p - &d1)) < 1e-10);
            }
            Indecomposability::Yes => panic!("diag(1,2) is decomposable"),
        }
        assert!(matches!(
            is_indecomposable(&Representation::zero(rep.quiver().clone()), &s),
            Err(Error::ZeroRepresentation)
        ));
    }

    #[test]
    fn example_six_transitive_not_simple() {
        let s = Settings::default();
        let rep = l2(e(0, 0), e(0, 1));
        assert!(is_transitive(&rep, &s).unwrap());
        let r = is_simple(&rep, &s).unwrap();
        assert_eq!(r.generated_dimension, 3);
        match r.verdict {
            Simplicity::No { sub, .. } => assert_eq!(sub.dims(), [1]),
            Simplicity::Yes => panic!("not simple"),
        }
    }

    #[test]
    fn example_seven_transitive_and_simple() {
        let s = Settings::default();
        let rep = l2(e(0, 0), from_real_rows(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        assert!(is_transitive(&rep, &s).unwrap());
        let r = is_simple(&rep, &s).unwrap();
        assert!(r.is_simple());
        assert_eq!(r.generated_dimension, 4);
        assert!(is_irreducible(&rep, &s).unwrap());
    }

    #[test]
    fn canonically_simple_is_simple() {
        let s = Settings::default();
        let q = Quiver::canonical(CanonicalKind::Subspace(3)).unwrap();
        for v in q.vertices() {
            let r = rep::canonically_simple(&q, v).unwrap();
            assert!(is_canonically_simple(&r));
            assert!(is_simple(&r, &s).unwrap().is_simple());
        }
        let k = Quiver::canonical(CanonicalKind::Kronecker(2)).unwrap();
        let r = Representation::new(k, vec![1, 1], vec![CMat::zeros(1, 1), CMat::zeros(1, 1)]).unwrap();
        assert!(!is_canonically_simple(&r));
    }

    #[test]
    fn irreducibility_of_diagonal() {
        let s = Settings::default();
        assert!(!is_irreducible(&l1(from_real_rows(2, 2, &[1.0, 0.0, 0.0, 2.0])), &s).unwrap());
        assert!(is_irreducible(&l1(jordan(3, 0.0)), &s).unwrap());
    }

    #[test]
    fn decompose_diagonal_into_scalars() {
        let s = Settings::default();
        let rep = l1(from_real_rows(2, 2, &[1.0, 0.0, 0.0, 2.0]));
        let tree = decompose(&rep, &s).unwrap();
        let mut vals: Vec<f64> = tree.leaves().iter().map(|l| l.maps()[0][(0, 0)].re).collect();
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals.len(), 2);
        assert!((vals[0] - 1.0).abs() < 1e-10 && (vals[1] - 2.0).abs() < 1e-10);
        let back = tree.reassemble().unwrap();
        assert!(intertwiner::are_isomorphic(&back, &rep, &s).unwrap().is_yes());
        let single = decompose(&l1(jordan(3, 0.0)), &s).unwrap();
        assert_eq!(single.leaves().len(), 1);
    }

    #[test]
    fn decompose_sum_of_jordan_blocks() {
        let s = Settings::default();
        let a = l1(jordan(2, 0.0));
        let b = l1(jordan(3, 0.0));
        let sum = rep::direct_sum(&a, &b).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mixed = sum.transport(&[linalg::random_matrix(&mut rng, 5, 5)]).unwrap();
        let tree = decompose(&mixed, &s).unwrap();
        let mut sizes: Vec<usize> = tree.leaves().iter().map(|l| l.total_dim()).collect();
        sizes.sort();
        assert_eq!(sizes, [2, 3]);
        assert!(intertwiner::are_isomorphic(&tree.reassemble().unwrap(), &mixed, &s).unwrap().is_yes());
    }

    #[test]
    fn strong_irreducibility_routes_agree() {
        let s = Settings::default();
        assert!(is_strongly_irreducible(&jordan(3, 0.0), &s).unwrap());
        assert!(!is_strongly_irreducible(&identity(2), &s).unwrap());
        assert!(is_strongly_irreducible(&identity(1), &s).unwrap());
        let mut w = CMat::zeros(4, 4);
        for i in 1..4 {
            w[(i, i - 1)] = c(0.5 * i as f64, 0.0);
        }
        assert!(is_strongly_irreducible(&w, &s).unwrap());
        w[(2, 1)] = linalg::ZERO;
        assert!(!is_strongly_irreducible(&w, &s).unwrap());
        assert!(!is_strongly_irreducible(&from_real_rows(3, 3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]), &s)
            .unwrap());
    }
}
