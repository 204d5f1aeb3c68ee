use serde::{Deserialize, Serialize};

/// Numerical knobs shared by every computation. All tolerances are
/// multiplied by `tol_scale`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// Multiplier in the singular value threshold `max(m,n) eps sigma_max kappa`.
    pub kappa: f64,
    pub tol_scale: f64,
    pub seed: u64,
    /// Random samples drawn by the isomorphism test.
    pub iso_samples: usize,
    /// Random End elements tried when extracting an idempotent.
    pub max_tries: usize,
    /// Upper bound on the number of intertwiner unknowns.
    pub max_unknowns: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { kappa: 10.0, tol_scale: 1.0, seed: 0, iso_samples: 8, max_tries: 8, max_unknowns: 250_000 }
    }
}

impl Settings {
    pub fn with_seed(seed: u64) -> Self {
        Settings { seed, ..Settings::default() }
    }

    pub fn svd_kappa(&self) -> f64 {
        self.kappa * self.tol_scale
    }

    /// Relative intertwining residual bound (times the arrow scale).
    pub fn tau_hom(&self) -> f64 {
        1e-8 * self.tol_scale
    }

    /// Relative invariance bound for restrictions (times the max-norm).
    pub fn tau_range(&self) -> f64 {
        1e-9 * self.tol_scale
    }

    /// Relative smallest-singular-value bound for invertibility.
    pub fn tau_inv(&self) -> f64 {
        1e-8 * self.tol_scale
    }

    /// Relative eigenvalue clustering distance (times the spectral radius).
    pub fn tau_cluster(&self) -> f64 {
        1e-6 * self.tol_scale
    }

    /// Relative idempotency defect accepted for witnesses.
    pub fn tau_idempotent(&self) -> f64 {
        1e-6 * self.tol_scale
    }

    /// Relative residual for algebra span closure.
    pub fn tau_alg(&self) -> f64 {
        1e-8 * self.tol_scale
    }

    /// Norm below which a product of unit-norm algebra elements is treated
    /// as zero.
    pub fn alg_floor(&self) -> f64 {
        1e-10 * self.tol_scale
    }

    /// Relative cutoff for the rank of the trace-form Gram matrix.
    pub fn tau_radical(&self) -> f64 {
        1e-8 * self.tol_scale
    }
}
