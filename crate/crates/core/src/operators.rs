//! Finite compressions of shift-type operators and the representations
//! built from them: rank-one perturbed weighted shifts, bilateral models
//! with double-exponential weights, and small named examples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intertwiner::{self, HomBasis};
use crate::linalg::{self, CMat, Complex64};
use crate::quiver::{CanonicalKind, Quiver};
use crate::rep::Representation;
use crate::settings::Settings;

/// Smallest realized weight allowed in the bilateral model.
pub const WEIGHT_FLOOR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum TruncationSpec {
    /// Indices `1..=N`.
    Unilateral(usize),
    /// Indices `-N..=N`.
    Bilateral(usize),
}

impl TruncationSpec {
    pub fn dimension(&self) -> usize {
        match *self {
            TruncationSpec::Unilateral(n) => n,
            TruncationSpec::Bilateral(n) => 2 * n + 1,
        }
    }
}

/// `e_j -> e_{j+1}`, `e_N -> 0`.
pub fn shift(n: usize) -> CMat {
    let mut s = CMat::zeros(n, n);
    for j in 1..n {
        s[(j, j - 1)] = linalg::ONE;
    }
    s
}

/// The shift on indices `-N..=N`, with `e_N -> 0`.
pub fn bilateral_shift(n: usize) -> CMat {
    shift(2 * n + 1)
}

pub fn diagonal(v: &[Complex64]) -> CMat {
    let mut m = CMat::zeros(v.len(), v.len());
    for (i, &x) in v.iter().enumerate() {
        m[(i, i)] = x;
    }
    m
}

/// The operator `x -> (x|b) a`, i.e. `a b^*`.
pub fn rank_one(a: &[Complex64], b: &[Complex64]) -> CMat {
    CMat::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
}

fn kronecker2(f: CMat, g: CMat) -> Result<Representation> {
    let dims = vec![f.ncols(), f.nrows()];
    Representation::new(Quiver::canonical(CanonicalKind::Kronecker(2))?, dims, vec![f, g])
}

/// `lambda_k = 1 + k/N`, `w_k = 1/k`.
pub fn default_perturbation_params(n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let lambda = (1..=n).map(|k| linalg::real(1.0 + k as f64 / n as f64)).collect();
    let w = (1..=n).map(|k| linalg::real(1.0 / k as f64)).collect();
    (lambda, w)
}

/// Kronecker representation `(S, S D_lambda + theta_{e_1, conj w})`: the
/// second map has first row `w` and subdiagonal `lambda_1..lambda_{N-1}`.
pub fn perturbation_model(n: usize, lambda: &[Complex64], w: &[Complex64]) -> Result<Representation> {
    if n == 0 {
        return Err(Error::InvalidParameter("perturbation model needs N >= 1".into()));
    }
    if lambda.len() != n || w.len() != n {
        return Err(Error::InvalidParameter(format!("perturbation model needs {n} values of lambda and of w")));
    }
    for i in 0..n {
        for j in 0..i {
            if lambda[i] == lambda[j] {
                return Err(Error::InvalidParameter(format!("lambda_{} equals lambda_{}", j + 1, i + 1)));
            }
        }
        if w[i] == linalg::ZERO {
            return Err(Error::InvalidParameter(format!("w_{} is zero", i + 1)));
        }
    }
    let mut e1 = vec![linalg::ZERO; n];
    e1[0] = linalg::ONE;
    let w_bar: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
    let s = shift(n);
    let t = &s * diagonal(lambda) + rank_one(&e1, &w_bar);
    kronecker2(s, t)
}

/// Largest entry, over an End basis of the perturbation model, among the
/// coordinates that must vanish: the first row of `psi` beyond `(1,1)`,
/// the first column of `psi` below `(1,1)`, and the off-diagonal entries in
/// the first `N - 1` rows of `phi`. Here `phi` and `psi` are the blocks at
/// the source and target vertex.
pub fn perturbation_structure_residual(end: &HomBasis) -> f64 {
    let mut worst: f64 = 0.0;
    for e in &end.elements {
        let (phi, psi) = (&e.blocks[0], &e.blocks[1]);
        let n = psi.nrows();
        for j in 1..n {
            worst = worst.max(psi[(0, j)].norm()).max(psi[(j, 0)].norm());
        }
        for i in 0..n.saturating_sub(1) {
            for j in 0..n {
                if i != j {
                    worst = worst.max(phi[(i, j)].norm());
                }
            }
        }
    }
    worst
}

/// Natural-log weights of the bilateral model on indices `-N..=N`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightLog {
    pub n: usize,
    pub lambda: f64,
    pub log_a: Vec<f64>,
    pub log_b: Vec<f64>,
}

impl WeightLog {
    /// Largest `N` with `lambda^N <= ln(1 / WEIGHT_FLOOR)`.
    pub fn max_admissible_n(lambda: f64) -> usize {
        let bound = (1.0 / WEIGHT_FLOOR).ln();
        let mut n = (bound.ln() / lambda.ln()).floor() as usize;
        while lambda.powi(n as i32 + 1) <= bound {
            n += 1;
        }
        while n > 0 && lambda.powi(n as i32) > bound {
            n -= 1;
        }
        n
    }

    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if lambda.is_nan() || lambda <= 1.0 || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("bilateral model needs lambda > 1, got {lambda}")));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("bilateral model needs N >= 1".into()));
        }
        let max_n = Self::max_admissible_n(lambda);
        if n > max_n {
            return Err(Error::InvalidParameter(format!(
                "weights underflow below {WEIGHT_FLOOR:e} at N = {n}; the largest admissible N for lambda = {lambda} is {max_n}"
            )));
        }
        let idx = |i: usize| i as i64 - n as i64;
        let log_a = (0..2 * n + 1)
            .map(|i| {
                let m = idx(i);
                if m >= 1 && m % 2 == 0 {
                    -lambda.powi(m as i32)
                } else {
                    0.0
                }
            })
            .collect();
        let log_b = (0..2 * n + 1)
            .map(|i| {
                let m = idx(i);
                if m >= 1 && m % 2 == 1 {
                    -lambda.powi(m as i32)
                } else {
                    0.0
                }
            })
            .collect();
        Ok(WeightLog { n, lambda, log_a, log_b })
    }

    /// Position of index `m` in `-N..=N`.
    pub fn position(&self, m: i64) -> usize {
        (m + self.n as i64) as usize
    }

    pub fn a(&self) -> Vec<f64> {
        self.log_a.iter().map(|x| x.exp()).collect()
    }

    pub fn b(&self) -> Vec<f64> {
        self.log_b.iter().map(|x| x.exp()).collect()
    }

    /// `log w_m = log b(m) - log a(m)` at every position.
    pub fn log_w(&self) -> Vec<f64> {
        self.log_a.iter().zip(&self.log_b).map(|(a, b)| b - a).collect()
    }
}

/// Kronecker representation `(D_a, U D_b)` on indices `-N..=N`.
pub fn hrr_model(n: usize, lambda: f64) -> Result<Representation> {
    let w = WeightLog::new(n, lambda)?;
    let to_c = |v: Vec<f64>| v.into_iter().map(linalg::real).collect::<Vec<_>>();
    let da = diagonal(&to_c(w.a()));
    let ub = bilateral_shift(n) * diagonal(&to_c(w.b()));
    kronecker2(da, ub)
}

/// Outcome of checking intertwiners between two bilateral models against
/// the weight recursion.
#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub n: usize,
    pub source_lambda: f64,
    pub target_lambda: f64,
    pub dimension: usize,
    pub tolerance: f64,
    /// Per basis element: constant diagonal of `T_2` (only when source and
    /// target coincide), recursion, and the `T_1`/`T_2` relation.
    pub elements: Vec<RecursionCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecursionCheck {
    pub diagonal_residual: Option<f64>,
    pub recursion_residual: f64,
    pub first_block_residual: f64,
    pub pass: bool,
}

impl RecursionReport {
    pub fn pass_count(&self) -> usize {
        self.elements.iter().filter(|e| e.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.pass_count() == self.elements.len()
    }

    pub fn pass_rate(&self) -> f64 {
        if self.elements.is_empty() {
            1.0
        } else {
            self.pass_count() as f64 / self.elements.len() as f64
        }
    }
}

/// Checks `t_{m+1,n+1} = (w'_m / w_n) t_{m,n}` for `m, n` in `-N..N-1` and
/// `T_1 = (a(n) / a'(m)) t_{m,n}`, with primes for the target weights. Both
/// relations are evaluated with denominators cleared, since the weight
/// ratios reach `1 / WEIGHT_FLOOR^2`.
pub fn recursion_check(
    src: &WeightLog,
    dst: &WeightLog,
    hom: &HomBasis,
    scale: f64,
    settings: &Settings,
) -> RecursionReport {
    let n = src.n;
    let (a_s, b_s, a_t, b_t) = (src.a(), src.b(), dst.a(), dst.b());
    let tolerance = settings.tau_hom() * scale;
    let same = src.lambda == dst.lambda;
    let elements = hom
        .elements
        .iter()
        .map(|e| {
            let (t1, t2) = (&e.blocks[0], &e.blocks[1]);
            let size = 2 * n + 1;
            let mut recursion: f64 = 0.0;
            for m in 0..size - 1 {
                for k in 0..size - 1 {
                    let lhs = t2[(m + 1, k + 1)] * (a_t[m] * b_s[k]);
                    let rhs = t2[(m, k)] * (b_t[m] * a_s[k]);
                    recursion = recursion.max((lhs - rhs).norm());
                }
            }
            let mut first: f64 = 0.0;
            for m in 0..size {
                for k in 0..size {
                    first = first.max((t1[(m, k)] * a_t[m] - t2[(m, k)] * a_s[k]).norm());
                }
            }
            let diagonal = same.then(|| (1..size).map(|i| (t2[(i, i)] - t2[(0, 0)]).norm()).fold(0.0, f64::max));
            let pass = recursion <= tolerance && first <= tolerance && diagonal.is_none_or(|d| d <= tolerance);
            RecursionCheck {
                diagonal_residual: diagonal,
                recursion_residual: recursion,
                first_block_residual: first,
                pass,
            }
        })
        .collect();
    RecursionReport {
        n,
        source_lambda: src.lambda,
        target_lambda: dst.lambda,
        dimension: hom.dimension(),
        tolerance,
        elements,
    }
}

/// End of `hrr_model(n, lambda)` checked against the weight recursion.
pub fn end_recursion_check(n: usize, lambda: f64, settings: &Settings) -> Result<RecursionReport> {
    let w = WeightLog::new(n, lambda)?;
    let rep = hrr_model(n, lambda)?;
    let end = intertwiner::end(&rep, settings)?;
    Ok(recursion_check(&w, &w, &end, rep.scale(), settings))
}

/// `Hom(hrr_model(n, lambda), hrr_model(n, mu))` checked against the cross
/// recursion.
pub fn cross_model_hom(lambda: f64, mu: f64, n: usize, settings: &Settings) -> Result<RecursionReport> {
    let (ws, wt) = (WeightLog::new(n, lambda)?, WeightLog::new(n, mu)?);
    let (a, b) = (hrr_model(n, lambda)?, hrr_model(n, mu)?);
    let hom = intertwiner::hom(&a, &b, settings)?;
    Ok(recursion_check(&ws, &wt, &hom, a.scale().max(b.scale()), settings))
}

/// Partial-product ratios `|a_1 ... a_n| / |b_1 ... b_n|` for `n = 1..N`.
/// A bounded range is necessary evidence for similarity of the two
/// weighted shifts, never a certificate.
#[derive(Clone, Debug, Serialize)]
pub struct SimilarityEvidence {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub log_ratios: Vec<f64>,
    pub bounded_so_far: bool,
}

pub fn weighted_shift_similarity(a: &[Complex64], b: &[Complex64], n: usize) -> Result<SimilarityEvidence> {
    if a.len() < n || b.len() < n || n == 0 {
        return Err(Error::InvalidParameter(format!("need at least {n} >= 1 weights in each sequence")));
    }
    if let Some(k) = b[..n].iter().position(|x| *x == linalg::ZERO) {
        return Err(Error::InvalidParameter(format!("weight b_{} is zero", k + 1)));
    }
    let mut acc = 0.0;
    let mut log_ratios = Vec::with_capacity(n);
    for k in 0..n {
        acc += a[k].norm().ln() - b[k].norm().ln();
        log_ratios.push(acc);
    }
    let lo = log_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = log_ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(SimilarityEvidence {
        ratio_min: lo.exp(),
        ratio_max: hi.exp(),
        bounded_so_far: (hi - lo).is_finite(),
        log_ratios,
    })
}

/// Named example representations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Example {
    /// Two lines in `C^2` at angle `theta` on `1 -> 3 <- 2`.
    Ex1 { theta: f64 },
    /// One loop carrying the shift.
    Ex2 { n: usize },
    /// Two loops carrying `S` and `S^*`.
    Ex3 { n: usize },
    /// Three parallel arrows carrying `S`, `S^*` and `I`.
    Ex4 { n: usize },
    /// Two loops on `C^2` carrying `E_11` and `E_12`.
    Ex6,
    /// Two loops on `C^2` carrying `E_11` and the all-ones matrix.
    Ex7,
    /// Kronecker `(I, lambda I + S)`.
    Ex8 { lambda: Complex64, n: usize },
    /// Kronecker `(I, lambda I + S^*)`.
    Ex8Star { lambda: Complex64, n: usize },
    /// Kronecker `(S, S^*)`.
    Ex9 { n: usize },
}

impl Example {
    /// True for compressions of infinite-dimensional constructions.
    pub fn is_truncation(&self) -> bool {
        !matches!(self, Example::Ex1 { .. } | Example::Ex6 | Example::Ex7)
    }
}

fn unit(i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(i, j)] = linalg::ONE;
    m
}

pub fn example(ex: Example) -> Result<Representation> {
    let need = |n: usize| {
        if n == 0 {
            Err(Error::InvalidParameter("truncation level must be >= 1".into()))
        } else {
            Ok(n)
        }
    };
    match ex {
        Example::Ex1 { theta } => {
            let q = Quiver::canonical(CanonicalKind::TwoInclusions)?;
            let e1 = linalg::from_real_rows(2, 1, &[1.0, 0.0]);
            let e2 = linalg::from_real_rows(2, 1, &[theta.cos(), theta.sin()]);
            Representation::new(q, vec![1, 1, 2], vec![e1, e2])
        }
        Example::Ex2 { n } => {
            let n = need(n)?;
            Representation::new(Quiver::canonical(CanonicalKind::Loop(1))?, vec![n], vec![shift(n)])
        }
        Example::Ex3 { n } => {
            let n = need(n)?;
            let s = shift(n);
            Representation::new(Quiver::canonical(CanonicalKind::Loop(2))?, vec![n], vec![s.clone(), s.adjoint()])
        }
        Example::Ex4 { n } => {
            let n = need(n)?;
            let s = shift(n);
            let maps = vec![s.clone(), s.adjoint(), linalg::identity(n)];
            Representation::new(Quiver::canonical(CanonicalKind::Kronecker(3))?, vec![n, n], maps)
        }
        Example::Ex6 => {
            Representation::new(Quiver::canonical(CanonicalKind::Loop(2))?, vec![2], vec![unit(0, 0), unit(0, 1)])
        }
        Example::Ex7 => Representation::new(
            Quiver::canonical(CanonicalKind::Loop(2))?,
            vec![2],
            vec![unit(0, 0), linalg::from_real_rows(2, 2, &[1.0, 1.0, 1.0, 1.0])],
        ),
        Example::Ex8 { lambda, n } => {
            let n = need(n)?;
            kronecker2(linalg::identity(n), linalg::identity(n) * lambda + shift(n))
        }
        Example::Ex8Star { lambda, n } => {
            let n = need(n)?;
            kronecker2(linalg::identity(n), linalg::identity(n) * lambda + shift(n).adjoint())
        }
        Example::Ex9 { n } => {
            let n = need(n)?;
            let s = shift(n);
            kronecker2(s.clone(), s.adjoint())
        }
    }
}

/// Odd- and even-index coordinate inclusions (1-based) at both vertices of
/// `ex9(n)`, the two halves of its splitting.
pub fn ex9_splitting(n: usize) -> (Vec<CMat>, Vec<CMat>) {
    let pick = |odd: bool| {
        let idx: Vec<usize> = (0..n).filter(|i| (i % 2 == 0) == odd).collect();
        let mut m = CMat::zeros(n, idx.len());
        for (c, &i) in idx.iter().enumerate() {
            m[(i, c)] = linalg::ONE;
        }
        m
    };
    // S maps odd positions to even ones; S^* maps them back.
    (vec![pick(true), pick(false)], vec![pick(false), pick(true)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intertwiner::{end, hom, relatively_prime};
    use crate::linalg::{c, real};
    use crate::rep::restrict;
    use crate::structure::{decompose, is_indecomposable, is_simple, is_transitive};

    #[test]
    fn basic_operators() {
        let s = shift(3);
        assert_eq!(s, linalg::from_real_rows(3, 3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]));
        let e1 = [real(1.0), real(0.0), real(0.0)];
        let wbar = [real(1.0), real(2.0), real(3.0)];
        let r = rank_one(&e1, &wbar);
        assert_eq!(r, linalg::from_real_rows(3, 3, &[1.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
        let sd = shift(2) * diagonal(&[real(5.0), real(7.0)]);
        assert_eq!(sd, linalg::from_real_rows(2, 2, &[0.0, 0.0, 5.0, 0.0]));
        assert_eq!(bilateral_shift(1).nrows(), 3);
        assert_eq!(TruncationSpec::Bilateral(4).dimension(), 9);
        // complex conjugation in the second slot
        let r = rank_one(&[real(1.0)], &[c(0.0, 1.0)]);
        assert_eq!(r[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn perturbation_matrix_layout() {
        let (lambda, w) = default_perturbation_params(4);
        let rep = perturbation_model(4, &lambda, &w).unwrap();
        let t = &rep.maps()[1];
        for j in 0..4 {
            assert_eq!(t[(0, j)], w[j]);
        }
        for i in 1..4 {
            assert_eq!(t[(i, i - 1)], lambda[i - 1]);
        }
        let mut bad = lambda.clone();
        bad[2] = bad[0];
        assert!(perturbation_model(4, &bad, &w).is_err());
        let mut zero_w = w.clone();
        zero_w[1] = linalg::ZERO;
        assert!(perturbation_model(4, &lambda, &zero_w).is_err());
    }

    #[test]
    fn perturbation_end_structure() {
        let s = Settings::default();
        for n in 1..=5 {
            let (lambda, w) = default_perturbation_params(n);
            let rep = perturbation_model(n, &lambda, &w).unwrap();
            let e = end(&rep, &s).unwrap();
            assert_eq!(e.dimension(), n);
            assert!(perturbation_structure_residual(&e) <= s.tau_hom() * rep.scale());
        }
    }

    #[test]
    fn hrr_weights() {
        let w = WeightLog::new(3, 2.0).unwrap();
        // log w_m: 0 for m <= 0, -2, +4, -8 for m = 1, 2, 3
        assert_eq!(w.log_w(), [0.0, 0.0, 0.0, 0.0, -2.0, 4.0, -8.0]);
        assert!(hrr_model(20, 1.1).is_ok());
        assert_eq!(WeightLog::max_admissible_n(1.1), 30);
        let err = hrr_model(31, 1.1).unwrap_err().to_string();
        assert!(err.contains("30"), "{err}");
        assert!(hrr_model(4, 1.0).is_err());
        let rep = hrr_model(4, 1.5).unwrap();
        let (lo, hi) = linalg::singular_extremes(&rep.maps()[0]);
        assert!((lo / hi - (-(1.5f64).powi(4)).exp()).abs() < 1e-12);
    }

    #[test]
    fn hrr_recursion_holds() {
        let s = Settings::default();
        for lambda in [1.05, 1.1] {
            let r = end_recursion_check(4, lambda, &s).unwrap();
            assert_eq!(r.dimension, 9);
            assert!(r.all_pass(), "{r:?}");
        }
        let x = cross_model_hom(1.05, 1.1, 4, &s).unwrap();
        assert!(x.all_pass());
    }

    #[test]
    fn similarity_evidence() {
        let ones = vec![real(1.0); 6];
        let e = weighted_shift_similarity(&ones, &ones, 6).unwrap();
        assert_eq!((e.ratio_min, e.ratio_max), (1.0, 1.0));
        let twos = vec![real(2.0); 6];
        let e = weighted_shift_similarity(&twos, &ones, 6).unwrap();
        assert!((e.ratio_max / e.ratio_min - 32.0).abs() < 1e-9);
        let mut zero = ones.clone();
        zero[2] = linalg::ZERO;
        assert!(weighted_shift_similarity(&ones, &zero, 6).is_err());
    }

    #[test]
    fn example_three_is_simple_and_transitive() {
        let s = Settings::default();
        for n in 2..=4 {
            let rep = example(Example::Ex3 { n }).unwrap();
            assert!(is_simple(&rep, &s).unwrap().is_simple());
            assert!(is_transitive(&rep, &s).unwrap());
        }
    }

    #[test]
    fn example_eight_indecomposable_and_prime() {
        let s = Settings::default();
        let a = example(Example::Ex8 { lambda: real(0.5), n: 3 }).unwrap();
        let b = example(Example::Ex8 { lambda: real(-1.0), n: 3 }).unwrap();
        assert!(is_indecomposable(&a, &s).unwrap().is_indecomposable());
        assert_eq!(end(&a, &s).unwrap().dimension(), 3);
        assert!(relatively_prime(&a, &b, &s).unwrap());
        assert_eq!(hom(&a, &a, &s).unwrap().dimension(), 3);
    }

    #[test]
    fn example_nine_splits_into_halves() {
        let s = Settings::default();
        let rep = example(Example::Ex9 { n: 4 }).unwrap();
        let (l, m) = ex9_splitting(4);
        assert_eq!(restrict(&rep, &l, &s).unwrap().dims(), [2, 2]);
        assert_eq!(restrict(&rep, &m, &s).unwrap().dims(), [2, 2]);
        let tree = decompose(&rep, &s).unwrap();
        let dims: Vec<_> = tree.leaves().iter().map(|l| l.dims().to_vec()).collect();
        assert_eq!(dims, [[2, 2], [2, 2]]);
    }

    #[test]
    fn example_one_and_six() {
        let rep = example(Example::Ex1 { theta: std::f64::consts::FRAC_PI_4 }).unwrap();
        assert_eq!(end(&rep, &Settings::default()).unwrap().dimension(), 2);
        assert!(!Example::Ex6.is_truncation());
        assert!(example(Example::Ex2 { n: 0 }).is_err());
    }
}
