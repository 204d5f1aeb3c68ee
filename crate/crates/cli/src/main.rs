use std::io::Write;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use quiver_core::document::{self, Document};
use quiver_core::intertwiner::{self, IsoVerdict, NotIsomorphic};
use quiver_core::linalg::CMat;
use quiver_core::models::ModelSpec;
use quiver_core::report::{self, InputIdentity};
use quiver_core::subspace::{self, EndPreservation};
use quiver_core::sweep::{self, ParamGrid};
use quiver_core::{CanonicalKind, Error, Quiver, Representation, Result, Settings};

#[derive(Parser)]
#[command(name = "quiver", version, about = "Structure of finite-dimensional quiver representations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[command(group(ArgGroup::new("format").args(["json", "csv"])))]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Multiplies every numerical tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
    /// Emit JSON (the default except for `sweep`).
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (the default for `sweep`).
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every structural test on one representation.
    Analyze {
        /// Document path, `-` for stdin.
        #[arg(required_unless_present = "model", conflicts_with = "model")]
        file: Option<String>,
        /// Build the input from a named model instead of a file.
        #[arg(long)]
        model: Option<String>,
        /// Model parameter `key=value`; repeatable.
        #[arg(short, long = "param", requires = "model")]
        params: Vec<String>,
    },
    /// Dimension (and optionally a basis) of Hom(A, B).
    Hom {
        a: String,
        b: String,
        /// Include an orthonormal basis in the output.
        #[arg(long)]
        basis: bool,
    },
    /// Decide whether A and B are isomorphic.
    Iso { a: String, b: String },
    /// Write the document of a named model.
    Build {
        model: String,
        /// Parameters `key=value`.
        params: Vec<String>,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<String>,
    },
    /// Sweep a model over a parameter grid and a range of N.
    Sweep {
        model: String,
        /// Grid axis `key=v1,v2,...`; repeatable, first axis varies slowest.
        #[arg(long)]
        grid: Vec<String>,
        /// `a..b` (inclusive) or a single N.
        #[arg(long)]
        n_range: String,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<String>,
    },
    /// Convert between representations and subspace systems.
    #[command(group(ArgGroup::new("direction").required(true).multiple(true)))]
    Convert {
        /// Loop-free representation to subspace system.
        #[arg(long, group = "direction")]
        rep_to_system: bool,
        /// Subspace system to representation of the star quiver.
        #[arg(long, group = "direction", conflicts_with_all = ["rep_to_system", "operator_to_4system"])]
        system_to_rep: bool,
        /// Replace loops by arrows into a copied vertex; also allowed together with --rep-to-system.
        #[arg(long, group = "direction", conflicts_with = "operator_to_4system")]
        remove_loops: bool,
        /// Operator to its four-subspace system.
        #[arg(long = "operator-to-4system", group = "direction", conflicts_with = "rep_to_system")]
        operator_to_4system: bool,
        /// Input document, `-` for stdin.
        file: String,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<String>,
        /// End-preservation record; defaults to `<out>.end.json`, or stderr.
        #[arg(long)]
        sidecar: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::SelfLoop(_) = e {
                eprintln!("hint: pass --remove-loops (optionally with --rep-to-system)");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    if !(g.tol_scale.is_finite() && g.tol_scale > 0.0) {
        return Err(Error::InvalidParameter(format!("--tol-scale must be positive, got {}", g.tol_scale)));
    }
    let settings = Settings { seed: g.seed, tol_scale: g.tol_scale, ..Settings::default() };
    let format = |default: Format| match (g.json, g.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => default,
    };
    match &cli.command {
        Command::Analyze { file, model, params } => {
            analyze(file.as_deref(), model.as_deref(), params, format(Format::Json), &settings)
        }
        Command::Hom { a, b, basis } => hom(a, b, *basis, format(Format::Json), &settings),
        Command::Iso { a, b } => iso(a, b, format(Format::Json), &settings),
        Command::Build { model, params, out } => {
            let refs: Vec<&str> = params.iter().map(String::as_str).collect();
            let spec = ModelSpec::new(model, &refs)?;
            let rep = spec.build()?;
            emit(out.as_deref(), &pretty(&document::rep_to_json(&rep, Some(spec.meta(settings.seed)))))
        }
        Command::Sweep { model, grid, n_range, jobs, out } => {
            let mut g = ParamGrid::default();
            for axis in grid {
                g.push_axis(axis)?;
            }
            let ns = sweep::parse_n_range(n_range)?;
            let rows = sweep::run(model, &g, &ns, *jobs, &settings)?;
            match format(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    sweep::write_csv(&rows, &mut buf)?;
                    emit(out.as_deref(), &String::from_utf8_lossy(&buf))
                }
                Format::Json => emit(out.as_deref(), &pretty(&json!(rows))),
            }
        }
        Command::Convert { rep_to_system, system_to_rep, remove_loops, operator_to_4system, file, out, sidecar } => {
            let doc = document::read_document(file, &settings)?;
            let (result, checks) = if *system_to_rep {
                let Document::System(s) = doc else { return wrong_kind(file, "a system", &doc) };
                let (rep, c) = subspace::system_to_rep_checked(&s, &settings)?;
                (Document::Representation(rep), vec![("system_to_rep", c)])
            } else if *operator_to_4system {
                let a = operator_of(file, doc)?;
                let (s, c) = subspace::from_operator_checked(&a, &settings)?;
                (Document::System(s), vec![("operator_to_4system", c)])
            } else {
                let Document::Representation(mut rep) = doc else {
                    return wrong_kind(file, "a representation", &doc);
                };
                let mut checks = Vec::new();
                if *remove_loops {
                    let (r, c) = subspace::remove_loops_checked(&rep, &settings)?;
                    rep = r;
                    checks.push(("remove_loops", c));
                }
                if *rep_to_system {
                    let (s, c) = subspace::rep_to_system_checked(&rep, &settings)?;
                    checks.push(("rep_to_system", c));
                    (Document::System(s), checks)
                } else {
                    (Document::Representation(rep), checks)
                }
            };
            emit(out.as_deref(), &pretty(&result.to_json()))?;
            write_sidecar(file, out.as_deref(), sidecar.as_deref(), &checks)
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn emit(out: Option<&str>, text: &str) -> Result<()> {
    match out {
        Some(path) if path != "-" => {
            std::fs::write(path, text).map_err(|e| Error::InvalidParameter(format!("cannot write {path}: {e}")))
        }
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::InvalidParameter(format!("cannot write to stdout: {e}")))
        }
    }
}

fn wrong_kind<T>(file: &str, expected: &str, found: &Document) -> Result<T> {
    Err(Error::Parse(format!("{file}: expected {expected} document, found a {} document", found.kind())))
}

/// An operator document, or a one-vertex one-loop representation.
fn operator_of(file: &str, doc: Document) -> Result<CMat> {
    match doc {
        Document::Operator(a) => Ok(a),
        Document::Representation(r) if r.quiver().vertex_count() == 1 && r.quiver().arrow_count() == 1 => {
            Ok(r.maps()[0].clone())
        }
        other => wrong_kind(file, "an operator or one-loop representation", &other),
    }
}

fn write_sidecar(
    file: &str,
    out: Option<&str>,
    sidecar: Option<&str>,
    checks: &[(&str, EndPreservation)],
) -> Result<()> {
    let steps: Vec<Value> = checks
        .iter()
        .map(|(step, c)| {
            json!({
                "step": step,
                "source_dim_end": c.source_dim_end,
                "target_dim_end": c.target_dim_end,
                "map_residual": c.map_residual,
                "tolerance": c.tolerance,
                "holds": c.holds(),
            })
        })
        .collect();
    let record = json!({ "input": file, "end_preservation": steps });
    match (sidecar, out) {
        (Some(path), _) => emit(Some(path), &pretty(&record)),
        (None, Some(o)) if o != "-" => emit(Some(&format!("{o}.end.json")), &pretty(&record)),
        _ => {
            eprintln!("{}", serde_json::to_string(&record).expect("JSON values always serialize"));
            Ok(())
        }
    }
}

/// Representation plus its finite-truncation flag from `meta`, converting
/// operator and system documents to their representations.
fn load_rep(path: &str, settings: &Settings) -> Result<(Representation, Option<Value>)> {
    let raw = document::read_json(path)?;
    let meta = raw.get("meta").cloned();
    let doc = document::document_from_json(&raw, settings).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        other => other,
    })?;
    let rep = match doc {
        Document::Representation(r) => r,
        Document::System(s) => subspace::system_to_rep(&s)?,
        Document::Operator(a) => {
            let n = a.nrows();
            Representation::new(Quiver::canonical(CanonicalKind::Loop(1))?, vec![n], vec![a])?
        }
    };
    Ok((rep, meta))
}

fn analyze(
    file: Option<&str>,
    model: Option<&str>,
    params: &[String],
    format: Format,
    settings: &Settings,
) -> Result<()> {
    let (rep, input, truncation) = match (file, model) {
        (_, Some(name)) => {
            let refs: Vec<&str> = params.iter().map(String::as_str).collect();
            let spec = ModelSpec::new(name, &refs)?;
            let truncation = spec.is_truncation();
            (spec.build()?, InputIdentity::Builder { model: spec.name, params: spec.params }, truncation)
        }
        (Some(path), None) => {
            let (rep, meta) = load_rep(path, settings)?;
            let truncation =
                meta.as_ref().and_then(|m| m.get("finite_truncation")).and_then(Value::as_bool).unwrap_or(false);
            (rep, InputIdentity::File { path: path.to_string(), meta }, truncation)
        }
        (None, None) => return Err(Error::InvalidParameter("analyze needs a file or --model".into())),
    };
    let r = report::analyze(&rep, input, truncation, settings)?;
    match format {
        Format::Json => emit(None, &pretty(&json!(r))),
        Format::Csv => {
            let v = &r.verdicts;
            let dims: Vec<String> = r.dims.iter().map(|d| d.to_string()).collect();
            let text = format!(
                "dims,dim_end,dim_radical,generated_algebra_dim,indecomposable,transitive,simple,canonically_simple,irreducible,finite_truncation\n\
                 {},{},{},{},{},{},{},{},{},{}\n",
                dims.join(";"),
                v.indecomposable.dim_end,
                v.indecomposable.dim_radical,
                v.simple.generated_algebra_dim,
                v.indecomposable.value,
                v.transitive.value,
                v.simple.value,
                v.canonically_simple.value,
                v.irreducible.value,
                r.finite_truncation,
            );
            emit(None, &text)
        }
    }
}

fn intertwiner_json(t: &intertwiner::Intertwiner, rep: &Representation) -> Value {
    let blocks: serde_json::Map<String, Value> =
        rep.quiver().vertices().iter().zip(&t.blocks).map(|(v, b)| (v.clone(), document::matrix_to_json(b))).collect();
    Value::Object(blocks)
}

fn load_pair(a: &str, b: &str, settings: &Settings) -> Result<(Representation, Representation)> {
    let (ra, _) = load_rep(a, settings)?;
    let (rb, _) = load_rep(b, settings)?;
    if ra.quiver() != rb.quiver() {
        return Err(Error::QuiverMismatch);
    }
    Ok((ra, rb))
}

fn hom(a: &str, b: &str, basis: bool, format: Format, settings: &Settings) -> Result<()> {
    let (ra, rb) = load_pair(a, b, settings)?;
    let h = intertwiner::hom(&ra, &rb, settings)?;
    match format {
        Format::Csv => emit(None, &format!("dim,gap\n{},{}\n", h.dimension(), gap_text(h.gap))),
        Format::Json => {
            let mut out = json!({
                "source": a,
                "target": b,
                "dim": h.dimension(),
                "evidence": h.summary(),
            });
            if basis {
                out["basis"] = h.elements.iter().map(|t| intertwiner_json(t, &ra)).collect();
            }
            emit(None, &pretty(&out))
        }
    }
}

fn gap_text(gap: Option<f64>) -> String {
    gap.map(|g| g.to_string()).unwrap_or_default()
}

fn iso(a: &str, b: &str, format: Format, settings: &Settings) -> Result<()> {
    let (ra, rb) = load_pair(a, b, settings)?;
    let verdict = intertwiner::are_isomorphic(&ra, &rb, settings)?;
    let (reason, hom_dim) = match &verdict {
        IsoVerdict::Yes(_) => ("invertible intertwiner found", None),
        IsoVerdict::No(NotIsomorphic::DimensionMismatch) => ("dimension vectors differ", None),
        IsoVerdict::No(NotIsomorphic::HomZero) => ("Hom(A, B) = 0", Some(0)),
        IsoVerdict::ProbablyNo { hom_dimension, .. } => {
            ("no invertible element among random samples", Some(*hom_dimension))
        }
    };
    match format {
        Format::Csv => emit(None, &format!("verdict\n{}\n", verdict.label())),
        Format::Json => {
            let mut out = json!({
                "source": a,
                "target": b,
                "verdict": verdict.label(),
                "reason": reason,
                "seed": settings.seed,
            });
            if let Some(d) = hom_dim {
                out["hom_dim"] = json!(d);
            }
            if let IsoVerdict::ProbablyNo { samples, .. } = &verdict {
                out["samples"] = json!(samples);
            }
            if let IsoVerdict::Yes(t) = &verdict {
                out["witness"] = intertwiner_json(t, &ra);
                out["witness_residual"] = json!(t.residual(&ra, &rb));
            }
            emit(None, &pretty(&out))
        }
    }
}
