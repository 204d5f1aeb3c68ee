//! Representations of Kronecker quivers: the indecomposable families of
//! matrix pencils, reductions of a pencil to normal form, and the
//! polynomial model on the `(n + 1)`-Kronecker quiver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intertwiner::Intertwiner;
use crate::linalg::{self, CMat, Complex64};
use crate::quiver::{CanonicalKind, Quiver};
use crate::rep::Representation;
use crate::settings::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum KroneckerFamily {
    /// `(lambda I + J_n, I_n)`.
    JordanFirst { lambda: Complex64, n: usize },
    /// `(I_n, lambda I + J_n)`.
    JordanSecond { lambda: Complex64, n: usize },
    /// Dimensions `(n + 1, n)` with `[I_n, 0]` and `[0, I_n]`.
    Wide { n: usize },
    /// Dimensions `(n, n + 1)` with `[I_n; 0]` and `[0; I_n]`.
    Tall { n: usize },
}

/// `lambda I + J_n` with ones on the superdiagonal.
pub fn jordan_block(lambda: Complex64, n: usize) -> CMat {
    let mut m = linalg::identity(n) * lambda;
    for i in 1..n {
        m[(i - 1, i)] = linalg::ONE;
    }
    m
}

fn kronecker2(f: CMat, g: CMat) -> Result<Representation> {
    let dims = vec![f.ncols(), f.nrows()];
    Representation::new(Quiver::canonical(CanonicalKind::Kronecker(2))?, dims, vec![f, g])
}

pub fn build_family(fam: KroneckerFamily) -> Result<Representation> {
    match fam {
        KroneckerFamily::JordanFirst { lambda, n } | KroneckerFamily::JordanSecond { lambda, n } => {
            if n == 0 {
                return Err(Error::InvalidParameter("jordan families need n >= 1".into()));
            }
            let j = jordan_block(lambda, n);
            let id = linalg::identity(n);
            if matches!(fam, KroneckerFamily::JordanFirst { .. }) {
                kronecker2(j, id)
            } else {
                kronecker2(id, j)
            }
        }
        KroneckerFamily::Wide { n } => {
            // maps C^{n+1} -> C^n
            let mut first = CMat::zeros(n, n + 1);
            let mut second = CMat::zeros(n, n + 1);
            for i in 0..n {
                first[(i, i)] = linalg::ONE;
                second[(i, i + 1)] = linalg::ONE;
            }
            kronecker2(first, second)
        }
        KroneckerFamily::Tall { n } => {
            let mut first = CMat::zeros(n + 1, n);
            let mut second = CMat::zeros(n + 1, n);
            for i in 0..n {
                first[(i, i)] = linalg::ONE;
                second[(i + 1, i)] = linalg::ONE;
            }
            kronecker2(first, second)
        }
    }
}

fn checked_inverse(m: &CMat, what: &str, settings: &Settings) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidParameter(format!("{what} must be square")));
    }
    if m.is_empty() {
        return Ok(m.clone());
    }
    let (lo, hi) = linalg::singular_extremes(m);
    if hi == 0.0 || lo < settings.tau_inv() * hi {
        return Err(Error::Numerical(format!("{what} is numerically singular (singular values {lo:.3e} / {hi:.3e})")));
    }
    m.clone().try_inverse().ok_or_else(|| Error::Numerical(format!("{what} could not be inverted")))
}

/// A reduced Kronecker representation with an isomorphism from the input.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub original: Representation,
    pub reduced: Representation,
    /// Intertwiner from `original` to `reduced`.
    pub witness: Intertwiner,
}

fn check_pair(a: &CMat, b: &CMat) -> Result<()> {
    if a.nrows() != a.ncols() || a.shape() != b.shape() {
        return Err(Error::InvalidParameter("pencil matrices must be square of equal size".into()));
    }
    Ok(())
}

/// `(A, B) -> (I, A^{-1} B)` with witness `(I, A^{-1})`.
pub fn reduce_invertible_first(a: &CMat, b: &CMat, settings: &Settings) -> Result<Reduction> {
    check_pair(a, b)?;
    let a_inv = checked_inverse(a, "first map", settings)?;
    let n = a.nrows();
    let original = kronecker2(a.clone(), b.clone())?;
    let reduced = kronecker2(linalg::identity(n), &a_inv * b)?;
    let witness = Intertwiner { blocks: vec![linalg::identity(n), a_inv] };
    Ok(Reduction { original, reduced, witness })
}

/// `(A, B) -> (T, I/y - (x/y) T)` with `T = (xA + yB)^{-1} A` and witness
/// `(I, (xA + yB)^{-1})`.
pub fn reduce_pencil(a: &CMat, b: &CMat, x: Complex64, y: Complex64, settings: &Settings) -> Result<Reduction> {
    check_pair(a, b)?;
    if y == linalg::ZERO {
        return Err(Error::InvalidParameter("pencil reduction needs y != 0".into()));
    }
    let n = a.nrows();
    let m_inv = checked_inverse(&(a * x + b * y), "pencil value xA + yB", settings)?;
    let t = &m_inv * a;
    let second = linalg::identity(n) * (linalg::ONE / y) - &t * (x / y);
    let original = kronecker2(a.clone(), b.clone())?;
    let reduced = kronecker2(t, second)?;
    let witness = Intertwiner { blocks: vec![linalg::identity(n), m_inv] };
    Ok(Reduction { original, reduced, witness })
}

/// `(n + 1)`-Kronecker representation with `a0 = sum_k lambda_k T^k` and
/// `a_k = T^k` for `k = 1..n`.
pub fn polynomial_model(t: &CMat, coeffs: &[Complex64]) -> Result<Representation> {
    if t.nrows() != t.ncols() {
        return Err(Error::InvalidParameter("polynomial model needs a square matrix".into()));
    }
    if coeffs.len() < 2 {
        return Err(Error::InvalidParameter(
            "polynomial model needs coefficients lambda_0..lambda_n with n >= 1".into(),
        ));
    }
    if coeffs[0] == linalg::ZERO {
        return Err(Error::InvalidParameter("lambda_0 must be nonzero".into()));
    }
    let d = t.nrows();
    let n = coeffs.len() - 1;
    let mut powers = vec![linalg::identity(d)];
    for k in 1..=n {
        powers.push(&powers[k - 1] * t);
    }
    let mut first = CMat::zeros(d, d);
    for (p, &c) in powers.iter().zip(coeffs) {
        first += p * c;
    }
    let names: Vec<String> = (0..=n).map(|k| format!("a{k}")).collect();
    let arrows: Vec<(&str, &str, &str)> = names.iter().map(|s| (s.as_str(), "1", "2")).collect();
    let quiver = Quiver::from_parts(&["1", "2"], &arrows)?;
    let mut maps = vec![first];
    maps.extend(powers.into_iter().skip(1));
    Representation::new(quiver, vec![d, d], maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intertwiner::{are_isomorphic, end};
    use crate::linalg::{c, real};
    use crate::structure::is_indecomposable;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn family_shapes() {
        let w0 = build_family(KroneckerFamily::Wide { n: 0 }).unwrap();
        assert_eq!(w0.dims(), [1, 0]);
        assert!(w0.maps().iter().all(|m| m.shape() == (0, 1)));
        let j = build_family(KroneckerFamily::JordanFirst { lambda: real(0.0), n: 1 }).unwrap();
        assert_eq!(j.maps()[0][(0, 0)], real(0.0));
        assert_eq!(j.maps()[1][(0, 0)], real(1.0));
        let t1 = build_family(KroneckerFamily::Tall { n: 1 }).unwrap();
        assert_eq!(t1.dims(), [1, 2]);
        assert_eq!(t1.maps()[0], linalg::from_real_rows(2, 1, &[1.0, 0.0]));
        assert_eq!(t1.maps()[1], linalg::from_real_rows(2, 1, &[0.0, 1.0]));
        assert!(build_family(KroneckerFamily::JordanSecond { lambda: real(1.0), n: 0 }).is_err());
    }

    #[test]
    fn jordan_family_end_dimension() {
        let s = Settings::default();
        for n in 1..=4 {
            let r = build_family(KroneckerFamily::JordanSecond { lambda: c(0.5, -0.2), n }).unwrap();
            assert_eq!(end(&r, &s).unwrap().dimension(), n);
            assert!(is_indecomposable(&r, &s).unwrap().is_indecomposable());
        }
    }

    #[test]
    fn reduce_invertible_first_cases() {
        let s = Settings::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = linalg::random_matrix(&mut rng, 3, 3);
        let r = reduce_invertible_first(&linalg::identity(3), &b, &s).unwrap();
        assert!(linalg::max_abs(&(&r.reduced.maps()[1] - &b)) < 1e-14);
        let shift = linalg::from_real_rows(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        let r = reduce_invertible_first(&(linalg::identity(2) * real(2.0)), &shift, &s).unwrap();
        assert!(linalg::max_abs(&(&r.reduced.maps()[1] - &shift * real(0.5))) < 1e-14);
        let a = linalg::random_matrix(&mut rng, 3, 3);
        let r = reduce_invertible_first(&a, &b, &s).unwrap();
        assert!(r.witness.residual(&r.original, &r.reduced) <= s.tau_hom() * r.original.scale().max(r.reduced.scale()));
        assert!(are_isomorphic(&r.original, &r.reduced, &s).unwrap().is_yes());
        assert!(matches!(reduce_invertible_first(&CMat::zeros(2, 2), &shift, &s), Err(Error::Numerical(_))));
    }

    #[test]
    fn reduce_pencil_cases() {
        let s = Settings::default();
        let id = linalg::identity(2);
        let r = reduce_pencil(&id, &id, real(0.5), real(0.5), &s).unwrap();
        assert!(linalg::max_abs(&(&r.reduced.maps()[0] - &id)) < 1e-14);
        assert!(linalg::max_abs(&(&r.reduced.maps()[1] - &id)) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = linalg::random_matrix(&mut rng, 3, 3);
        let b = linalg::random_matrix(&mut rng, 3, 3);
        let r = reduce_pencil(&a, &b, real(0.0), real(1.0), &s).unwrap();
        let expect = b.clone().try_inverse().unwrap() * &a;
        assert!(linalg::max_abs(&(&r.reduced.maps()[0] - expect)) < 1e-12);
        assert!(linalg::max_abs(&(&r.reduced.maps()[1] - linalg::identity(3))) < 1e-12);
        let r = reduce_pencil(&a, &b, c(0.3, 0.1), c(-0.7, 0.4), &s).unwrap();
        assert!(r.witness.residual(&r.original, &r.reduced) <= s.tau_hom() * r.original.scale().max(r.reduced.scale()));
        assert!(reduce_pencil(&a, &b, real(1.0), real(0.0), &s).is_err());
        assert!(matches!(reduce_pencil(&id, &(-&id), real(1.0), real(1.0), &s), Err(Error::Numerical(_))));
    }

    #[test]
    fn polynomial_model_end_is_commutant() {
        let s = Settings::default();
        let j3 = jordan_block(real(0.0), 3);
        let r = polynomial_model(&j3, &[real(1.0), real(0.0), real(0.0)]).unwrap();
        assert_eq!(r.quiver().arrow_count(), 3);
        assert_eq!(end(&r, &s).unwrap().dimension(), 3);
        assert!(is_indecomposable(
            &polynomial_model(&jordan_block(real(0.0), 2), &[real(1.0), real(2.0)]).unwrap(),
            &s
        )
        .unwrap()
        .is_indecomposable());
        let diag = linalg::from_real_rows(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert!(!is_indecomposable(&polynomial_model(&diag, &[real(1.0), real(1.0)]).unwrap(), &s)
            .unwrap()
            .is_indecomposable());
        assert!(polynomial_model(&diag, &[real(0.0), real(1.0)]).is_err());
    }

    #[test]
    fn polynomial_model_respects_similarity() {
        let s = Settings::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = jordan_block(c(0.2, 0.0), 3);
        let sim = linalg::random_matrix(&mut rng, 3, 3);
        let t2 = &sim * &t * sim.clone().try_inverse().unwrap();
        let coeffs = [real(1.0), real(-0.5), c(0.0, 0.3)];
        let a = polynomial_model(&t, &coeffs).unwrap();
        let b = polynomial_model(&t2, &coeffs).unwrap();
        assert!(are_isomorphic(&a, &b, &s).unwrap().is_yes());
    }
}
