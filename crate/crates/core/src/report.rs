//! Structured analysis of one representation: all verdicts with the
//! dimensions and thresholds that produced them.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::intertwiner::HomSummary;
use crate::linalg;
use crate::rep::Representation;
use crate::settings::Settings;
use crate::structure::{self, Indecomposability, Simplicity};

/// Where the analyzed representation came from.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum InputIdentity {
    File { path: String, meta: Option<Value> },
    Builder { model: String, params: Vec<(String, String)> },
    Inline,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub kappa: f64,
    pub tol_scale: f64,
    pub tau_hom: f64,
    pub tau_range: f64,
    pub tau_inv: f64,
    pub tau_cluster: f64,
    pub tau_idempotent: f64,
    pub tau_alg: f64,
    pub tau_radical: f64,
}

impl Tolerances {
    pub fn from_settings(s: &Settings) -> Self {
        Tolerances {
            kappa: s.kappa,
            tol_scale: s.tol_scale,
            tau_hom: s.tau_hom(),
            tau_range: s.tau_range(),
            tau_inv: s.tau_inv(),
            tau_cluster: s.tau_cluster(),
            tau_idempotent: s.tau_idempotent(),
            tau_alg: s.tau_alg(),
            tau_radical: s.tau_radical(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndecomposableVerdict {
    pub value: bool,
    pub dim_end: usize,
    pub dim_radical: usize,
    pub dim_semisimple_quotient: usize,
    pub gram_gap: Option<f64>,
    /// Per-vertex ranks of the idempotent witness when decomposable.
    pub witness_ranks: Option<Vec<usize>>,
    pub witness_defect: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitiveVerdict {
    pub value: bool,
    pub dim_end: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimpleVerdict {
    pub value: bool,
    pub generated_algebra_dim: usize,
    pub full_algebra_dim: usize,
    /// Dimension vector of the witness subrepresentation when not simple.
    pub witness_dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicallySimpleVerdict {
    pub value: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibleVerdict {
    pub value: bool,
    /// Dimension of `{T in End : T^* in End}`.
    pub star_closed_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdicts {
    pub indecomposable: IndecomposableVerdict,
    pub transitive: TransitiveVerdict,
    pub simple: SimpleVerdict,
    pub canonically_simple: CanonicallySimpleVerdict,
    pub irreducible: IrreducibleVerdict,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timings {
    pub end_ms: f64,
    pub simple_ms: f64,
    pub irreducible_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputIdentity,
    pub seed: u64,
    pub vertices: Vec<String>,
    pub dims: Vec<usize>,
    pub end: HomSummary,
    pub verdicts: Verdicts,
    pub tolerances: Tolerances,
    pub finite_truncation: bool,
    /// Per arrow, the smallest singular value above the rank threshold over
    /// the largest (`null` for a zero map). Every finite matrix has closed
    /// range; a ratio drifting to zero as a truncation grows is the finite
    /// stand-in for a range that is not closed.
    pub range_ratios: serde_json::Map<String, Value>,
    pub timings: Timings,
}

/// Smallest singular value above the rank threshold divided by the largest;
/// `None` for a zero or empty matrix.
pub fn range_ratio(m: &linalg::CMat, settings: &Settings) -> Option<f64> {
    let sv = linalg::singular_values(m);
    let hi = sv.first().copied().filter(|&x| x > 0.0)?;
    let t = linalg::svd_threshold(m.nrows(), m.ncols(), hi, settings.svd_kappa());
    let lo = sv.iter().copied().filter(|&x| x > t).fold(hi, f64::min);
    Some(lo / hi)
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Runs every structural test on `rep`.
pub fn analyze(
    rep: &Representation,
    input: InputIdentity,
    finite_truncation: bool,
    settings: &Settings,
) -> Result<AnalysisReport> {
    if rep.is_zero() {
        return Err(Error::ZeroRepresentation);
    }
    let start = Instant::now();
    let t = Instant::now();
    let ind = structure::is_indecomposable(rep, settings)?;
    let end_ms = ms(t);
    let dim_end = ind.end.dimension();
    let (witness_ranks, witness_defect) = match &ind.verdict {
        Indecomposability::Yes => (None, None),
        Indecomposability::No(w) => (Some(w.ranks.clone()), Some(w.idempotent_defect)),
    };
    let indecomposable = IndecomposableVerdict {
        value: ind.is_indecomposable(),
        dim_end,
        dim_radical: ind.radical.radical_dimension,
        dim_semisimple_quotient: ind.radical.semisimple_dimension,
        gram_gap: ind.radical.gram_gap,
        witness_ranks,
        witness_defect,
    };
    let t = Instant::now();
    let simple = structure::is_simple(rep, settings)?;
    let simple_ms = ms(t);
    let simple = SimpleVerdict {
        value: simple.is_simple(),
        generated_algebra_dim: simple.generated_dimension,
        full_algebra_dim: simple.full_dimension,
        witness_dims: match &simple.verdict {
            Simplicity::Yes => None,
            Simplicity::No { sub, .. } => Some(sub.dims().to_vec()),
        },
    };
    let t = Instant::now();
    let star_closed_dim = structure::star_closed_end_dimension(rep, settings)?;
    let irreducible_ms = ms(t);
    let verdicts = Verdicts {
        indecomposable,
        transitive: TransitiveVerdict { value: dim_end == 1, dim_end },
        simple,
        canonically_simple: CanonicallySimpleVerdict { value: structure::is_canonically_simple(rep) },
        irreducible: IrreducibleVerdict { value: star_closed_dim == 1, star_closed_dim },
    };
    check_implications(&verdicts)?;
    Ok(AnalysisReport {
        input,
        seed: settings.seed,
        vertices: rep.quiver().vertices().to_vec(),
        dims: rep.dims().to_vec(),
        end: ind.end.summary(),
        verdicts,
        tolerances: Tolerances::from_settings(settings),
        finite_truncation,
        range_ratios: rep
            .quiver()
            .arrows()
            .iter()
            .zip(rep.maps())
            .map(|(a, m)| (a.name.clone(), range_ratio(m, settings).map_or(Value::Null, Value::from)))
            .collect(),
        timings: Timings { end_ms, simple_ms, irreducible_ms, total_ms: ms(start) },
    })
}

/// canonically simple ⟹ simple ⟹ indecomposable, transitive ⟹
/// indecomposable, indecomposable ⟹ irreducible.
pub fn check_implications(v: &Verdicts) -> Result<()> {
    let chain = [
        (v.canonically_simple.value, v.simple.value, "canonically simple", "simple"),
        (v.simple.value, v.indecomposable.value, "simple", "indecomposable"),
        (v.transitive.value, v.indecomposable.value, "transitive", "indecomposable"),
        (v.indecomposable.value, v.irreducible.value, "indecomposable", "irreducible"),
    ];
    for (premise, conclusion, p, c) in chain {
        if premise && !conclusion {
            return Err(Error::Numerical(format!("inconsistent verdicts: {p} but not {c}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{example, Example};

    #[test]
    fn example_reports() {
        let s = Settings::default();
        let r6 = analyze(&example(Example::Ex6).unwrap(), InputIdentity::Inline, false, &s).unwrap();
        assert!(r6.verdicts.transitive.value && !r6.verdicts.simple.value);
        assert_eq!(r6.verdicts.simple.generated_algebra_dim, 3);
        let r7 = analyze(&example(Example::Ex7).unwrap(), InputIdentity::Inline, false, &s).unwrap();
        assert!(r7.verdicts.transitive.value && r7.verdicts.simple.value);
        let r1 = analyze(&example(Example::Ex1 { theta: 0.785 }).unwrap(), InputIdentity::Inline, false, &s).unwrap();
        assert!(!r1.verdicts.indecomposable.value && r1.verdicts.irreducible.value);
        assert_eq!(r1.verdicts.indecomposable.dim_end, 2);
        let json = serde_json::to_value(&r1).unwrap();
        assert_eq!(json["input"]["source"], "inline");
    }

    #[test]
    fn range_ratio_ignores_the_kernel() {
        let s = Settings::default();
        let m = linalg::from_real_rows(3, 3, &[2.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0]);
        assert!((range_ratio(&m, &s).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(range_ratio(&linalg::CMat::zeros(2, 3), &s), None);
        assert_eq!(range_ratio(&linalg::CMat::zeros(0, 3), &s), None);
        let r = analyze(&example(Example::Ex6).unwrap(), InputIdentity::Inline, false, &s).unwrap();
        assert_eq!(r.range_ratios.len(), 2);
    }

    #[test]
    fn violated_chain_is_an_error() {
        let s = Settings::default();
        let mut v = analyze(&example(Example::Ex6).unwrap(), InputIdentity::Inline, false, &s).unwrap().verdicts;
        v.indecomposable.value = false;
        assert!(matches!(check_implications(&v), Err(Error::Numerical(_))));
    }

    #[test]
    fn zero_representation_rejected() {
        let q = crate::quiver::Quiver::canonical(crate::quiver::CanonicalKind::Kronecker(2)).unwrap();
        let z = Representation::zero(q);
        assert!(matches!(
            analyze(&z, InputIdentity::Inline, false, &Settings::default()),
            Err(Error::ZeroRepresentation)
        ));
    }
}
