//! Truncation sweeps: one row per (parameter point, N), computed in
//! parallel and emitted in grid order.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::intertwiner;
use crate::models::{self, ModelSpec};
use crate::operators::{self, WeightLog};
use crate::settings::Settings;
use crate::structure::{self, Indecomposability};

pub const CSV_HEADER: &[&str] = &[
    "model",
    "N",
    "params",
    "params_hash",
    "dim_end",
    "dim_hom_cross",
    "recursion_pass_rate",
    "summands",
    "summand_dims",
    "flags",
    "wall_ms",
    "error",
];

/// Parameter values per key; the grid is their cartesian product in the
/// order given (first key varies slowest).
#[derive(Clone, Debug, Default)]
pub struct ParamGrid {
    pub axes: Vec<(String, Vec<String>)>,
}

impl ParamGrid {
    /// Parses `key=v1,v2,...`.
    pub fn push_axis(&mut self, spec: &str) -> Result<()> {
        let (k, vs) = spec
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("grid axis `{spec}` is not key=v1,v2,...")))?;
        let values: Vec<String> = vs.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
        if values.is_empty() {
            return Err(Error::InvalidParameter(format!("grid axis `{k}` has no values")));
        }
        self.axes.push((k.trim().to_string(), values));
        Ok(())
    }

    pub fn points(&self) -> Vec<Vec<(String, String)>> {
        let mut out: Vec<Vec<(String, String)>> = vec![Vec::new()];
        for (k, values) in &self.axes {
            out = out
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push((k.clone(), v.clone()));
                        q
                    })
                })
                .collect();
        }
        out
    }
}

/// Parses `a..b` (inclusive) or a single integer.
pub fn parse_n_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParameter(format!("N range `{s}` is not `a..b` or an integer"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.trim().parse().map_err(|_| bad())?]),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub model: String,
    pub n: usize,
    pub params: String,
    pub params_hash: String,
    pub dim_end: Option<usize>,
    pub dim_hom_cross: Option<usize>,
    pub recursion_pass_rate: Option<f64>,
    pub summands: Option<usize>,
    pub summand_dims: Option<String>,
    pub flags: Vec<String>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl SweepRow {
    fn record(&self) -> Vec<String> {
        let opt = |x: Option<String>| x.unwrap_or_default();
        vec![
            self.model.clone(),
            self.n.to_string(),
            self.params.clone(),
            self.params_hash.clone(),
            opt(self.dim_end.map(|d| d.to_string())),
            opt(self.dim_hom_cross.map(|d| d.to_string())),
            opt(self.recursion_pass_rate.map(|r| format!("{r}"))),
            opt(self.summands.map(|d| d.to_string())),
            opt(self.summand_dims.clone()),
            self.flags.join(";"),
            format!("{:.3}", self.wall_ms),
            opt(self.error.clone()),
        ]
    }
}

pub fn params_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

struct RowData {
    dim_end: usize,
    dim_hom_cross: Option<usize>,
    recursion_pass_rate: Option<f64>,
    summands: usize,
    summand_dims: String,
    flags: Vec<String>,
}

fn compute_row(spec: &ModelSpec, settings: &Settings) -> Result<RowData> {
    let rep = spec.build()?;
    let ind = structure::is_indecomposable(&rep, settings)?;
    let dim_end = ind.end.dimension();
    let mut flags = Vec::new();
    if spec.is_truncation() {
        flags.push("finite_truncation".to_string());
    }
    let leaves: Vec<Vec<usize>> = match ind.verdict {
        Indecomposability::Yes => {
            flags.push("indecomposable".into());
            vec![rep.dims().to_vec()]
        }
        Indecomposability::No(_) => {
            flags.push("decomposable".into());
            structure::decompose(&rep, settings)?.leaves().iter().map(|l| l.dims().to_vec()).collect()
        }
    };
    if dim_end == 1 {
        flags.push("transitive".into());
    }
    let recursion_pass_rate = if spec.name == "hrr" {
        let lambda = models::parse_complex(spec.get("lambda").unwrap_or_default())?.re;
        let w = WeightLog::new(rep.dims()[0] / 2, lambda)?;
        Some(operators::recursion_check(&w, &w, &ind.end, rep.scale(), settings).pass_rate())
    } else {
        None
    };
    let dim_hom_cross = match spec.cross_partner() {
        Some(partner) => {
            let other = partner.build()?;
            let hom = intertwiner::hom(&rep, &other, settings)?;
            if spec.name == "hrr" {
                let lambda = models::parse_complex(spec.get("lambda").unwrap_or_default())?.re;
                let mu = models::parse_complex(partner.get("lambda").unwrap_or_default())?.re;
                let n = rep.dims()[0] / 2;
                let check = operators::recursion_check(
                    &WeightLog::new(n, lambda)?,
                    &WeightLog::new(n, mu)?,
                    &hom,
                    rep.scale().max(other.scale()),
                    settings,
                );
                if !check.all_pass() {
                    flags.push("cross_recursion_fail".into());
                }
            }
            Some(hom.dimension())
        }
        None => None,
    };
    let summand_dims = leaves
        .iter()
        .map(|d| format!("({})", d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(";");
    Ok(RowData { dim_end, dim_hom_cross, recursion_pass_rate, summands: leaves.len(), summand_dims, flags })
}

/// True when the row exists: bilateral rows beyond the admissible N are
/// omitted rather than reported as failures.
fn row_admissible(spec: &ModelSpec) -> bool {
    if spec.name != "hrr" {
        return true;
    }
    let n: usize = spec.get("n").and_then(|v| v.parse().ok()).unwrap_or(0);
    let ok = |key: &str| {
        spec.get(key)
            .and_then(|v| models::parse_complex(v).ok())
            .map(|z| z.re <= 1.0 || n <= WeightLog::max_admissible_n(z.re))
            .unwrap_or(true)
    };
    ok("lambda") && ok("mu")
}

/// Runs the sweep with at most `jobs` worker threads (0 = default).
pub fn run(
    model: &str,
    grid: &ParamGrid,
    n_range: &[usize],
    jobs: usize,
    settings: &Settings,
) -> Result<Vec<SweepRow>> {
    let mut specs = Vec::new();
    for point in grid.points() {
        for &n in n_range {
            let mut params: Vec<String> = point.iter().map(|(k, v)| format!("{k}={v}")).collect();
            params.push(format!("n={n}"));
            let refs: Vec<&str> = params.iter().map(String::as_str).collect();
            let spec = ModelSpec::new(model, &refs)?;
            if row_admissible(&spec) {
                specs.push((n, spec));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {jobs} workers: {e}")))?;
    let rows = pool.install(|| {
        specs
            .par_iter()
            .map(|(n, spec)| {
                let start = Instant::now();
                let without_n: Vec<(String, String)> = spec.params.iter().filter(|(k, _)| k != "n").cloned().collect();
                let canonical = models::canonical_params(&without_n);
                let hash = params_hash(&models::canonical_params(&spec.params));
                let result = compute_row(spec, settings);
                let wall_ms = start.elapsed().as_secs_f64() * 1e3;
                let mut row = SweepRow {
                    model: model.to_string(),
                    n: *n,
                    params: canonical,
                    params_hash: hash,
                    dim_end: None,
                    dim_hom_cross: None,
                    recursion_pass_rate: None,
                    summands: None,
                    summand_dims: None,
                    flags: Vec::new(),
                    wall_ms,
                    error: None,
                };
                match result {
                    Ok(d) => {
                        row.dim_end = Some(d.dim_end);
                        row.dim_hom_cross = d.dim_hom_cross;
                        row.recursion_pass_rate = d.recursion_pass_rate;
                        row.summands = Some(d.summands);
                        row.summand_dims = Some(d.summand_dims);
                        row.flags = d.flags;
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
                row
            })
            .collect::<Vec<_>>()
    });
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parse(format!("writing CSV: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("writing CSV: {e}")))?;
    Ok(())
}
