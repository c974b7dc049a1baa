//! The `locmat` command line.
//!
//! Every run prints one JSON report on stdout (sorted keys, so identical inputs
//! give identical bytes) and a short human summary on stderr. Exit status: 0 on
//! success, 1 when a property fails with a certified witness, 2 on bad input.

use std::ffi::OsString;
use std::fmt::Debug;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{AlgebraError, Element};
use crate::clifford::{clifford_generators, clifford_generators_bounded, generated_dimension, CliffordError};
use crate::exactla::{ExactMatrix, LinalgError};
use crate::invariants::{
    degree_witness, normalized_det, normalized_rank, radical_eq, rank_by_degree, DegreeStrategy, InvariantError,
};
use crate::json::{self as js, JsonError};
use crate::preserver::{
    counterexample, frobenius_form, jordan_check, jr_decompose, preserves_normalized_det,
    preserves_normalized_rank, recover_inner, verify_split, CorpusSpec, DecompositionWitness, FrobeniusMode, Kind,
    MatLinearMap, PreserverError, Verdict,
};
use crate::steinitz::{Steinitz, SteinitzError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "locmat", version, about = "Exact computations in locally matrix algebras")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steinitz number arithmetic
    Steinitz {
        #[command(subcommand)]
        op: SteinitzOp,
    },
    /// Normalized rank of an element, with a promotion self-check
    Rank { file: PathBuf },
    /// Normalized determinant of an element, with a promotion self-check
    Det { file: PathBuf },
    /// Test a linear map for a preserver property and decompose it
    AnalyzeMap {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Rank)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Rank as the maximal degree of det(t·a + b)
    Lemma2 {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Strategy::Witness)]
        strategy: Strategy,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build and check the map a ↦ diag(a, …, a, aᵗ)
    Counterexample {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Clifford generators at stage k
    Clifford {
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum SteinitzOp {
    Parse { s: String },
    Mul { a: String, b: String },
    Lcm { a: String, b: String },
    Gcd { a: String, b: String },
    Divides { a: String, b: String },
    LocallyFinite { s: String },
    Corner {
        #[arg(long)]
        s: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Rank,
    Det,
    Jordan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Witness,
    Random,
    Exhaustive,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Steinitz(#[from] SteinitzError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Preserver(#[from] PreserverError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

fn variant_name<T: Debug>(e: &T) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_alphanumeric()).collect()
}

impl CliError {
    fn code(&self) -> String {
        match self {
            CliError::Io { .. } => "Io".into(),
            CliError::Json(_) => "MalformedInput".into(),
            CliError::Steinitz(e) => variant_name(e),
            CliError::Algebra(e) => variant_name(e),
            CliError::Linalg(e) => variant_name(e),
            CliError::Invariant(InvariantError::Linalg(e)) => variant_name(e),
            CliError::Invariant(InvariantError::Map(e)) => e.code().into(),
            CliError::Invariant(e) => variant_name(e),
            CliError::Preserver(e) => e.code().into(),
            CliError::Clifford(e) => variant_name(e),
        }
    }
}

/// Result of one CLI run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Outcome {
    exit: i32,
    results: Value,
    summary: Vec<String>,
}

impl Outcome {
    fn new(exit: i32, results: Value, summary: Vec<String>) -> Outcome {
        Outcome { exit, results, summary }
    }
}

#[derive(Default)]
struct Inputs {
    files: Vec<Value>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let shown = path.display().to_string();
        let bytes = fs::read(path).map_err(|e| CliError::Io {
            path: shown.clone(),
            msg: e.to_string(),
        })?;
        self.files.push(json!({"path": shown, "sha256": hex::encode(Sha256::digest(&bytes))}));
        String::from_utf8(bytes).map_err(|_| CliError::Io {
            path: shown,
            msg: "file is not UTF-8".into(),
        })
    }
}

fn write_json(path: &Path, v: &Value) -> Result<String, CliError> {
    let text = pretty(v);
    fs::write(path, &text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Steinitz { .. } => "steinitz",
        Command::Rank { .. } => "rank",
        Command::Det { .. } => "det",
        Command::AnalyzeMap { .. } => "analyze-map",
        Command::Lemma2 { .. } => "lemma2",
        Command::Counterexample { .. } => "counterexample",
        Command::Clifford { .. } => "clifford",
    }
}

/// Runs the CLI on `args` (program name first) without touching the process
/// streams or exit status.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Execution { exit: EXIT_PASS, stdout: text, stderr: String::new() }
            } else {
                Execution { exit: EXIT_ERROR, stdout: String::new(), stderr: text }
            };
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let name = command_name(&cli.command);
    let mut inputs = Inputs::default();
    let outcome = dispatch(&cli.command, &mut inputs).unwrap_or_else(|e| {
        let code = e.code();
        Outcome::new(
            EXIT_ERROR,
            json!({"error": {"code": code, "message": e.to_string()}}),
            vec![format!("error [{code}]: {e}")],
        )
    });
    let status = match outcome.exit {
        EXIT_PASS => "pass",
        EXIT_FAIL => "fail",
        _ => "error",
    };
    let report = json!({
        "command": {"name": name, "argv": argv},
        "inputs": inputs.files,
        "results": outcome.results,
        "status": status,
        "exit": outcome.exit,
    });
    let mut stderr = outcome.summary.join("\n");
    stderr.push('\n');
    Execution { exit: outcome.exit, stdout: pretty(&report), stderr }
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    match cmd {
        Command::Steinitz { op } => cmd_steinitz(op),
        Command::Rank { file } => cmd_rank(&load_element(inputs, file)?),
        Command::Det { file } => cmd_det(&load_element(inputs, file)?),
        Command::AnalyzeMap { file, mode, seed, samples } => {
            let map = js::map_from_json(&js::parse(&inputs.read(file)?)?)?;
            cmd_analyze_map(&map, *mode, CorpusSpec { random: *samples, seed: *seed })
        }
        Command::Lemma2 { file, strategy, trials, seed } => {
            let v = js::parse(&inputs.read(file)?)?;
            let a = if v.get("tower").is_some() {
                js::element_from_json(&v)?.matrix().clone()
            } else {
                js::matrix_from_json(&v, "$")?
            };
            cmd_lemma2(&a, *strategy, *trials, *seed)
        }
        Command::Counterexample { p, n, out, seed, samples } => {
            cmd_counterexample(*p, *n, out.as_deref(), CorpusSpec { random: *samples, seed: *seed })
        }
        Command::Clifford { stage, out } => cmd_clifford(*stage, out.as_deref()),
    }
}

fn load_element(inputs: &mut Inputs, file: &Path) -> Result<Element, CliError> {
    Ok(js::element_from_json(&js::parse(&inputs.read(file)?)?)?)
}

fn cmd_steinitz(op: &SteinitzOp) -> Result<Outcome, CliError> {
    let st = |s: &str| s.parse::<Steinitz>();
    let (name, operands, value) = match op {
        SteinitzOp::Parse { s } => {
            let x = st(s)?;
            let value = json!({
                "canonical": x.to_string(),
                "locally_finite": x.is_locally_finite(),
                "natural": x.to_nat(),
            });
            ("parse", vec![x], value)
        }
        SteinitzOp::Mul { a, b } => {
            let (x, y) = (st(a)?, st(b)?);
            let v = json!(x.mul(&y).to_string());
            ("mul", vec![x, y], v)
        }
        SteinitzOp::Lcm { a, b } => {
            let (x, y) = (st(a)?, st(b)?);
            let v = json!(x.lcm(&y).to_string());
            ("lcm", vec![x, y], v)
        }
        SteinitzOp::Gcd { a, b } => {
            let (x, y) = (st(a)?, st(b)?);
            let v = json!(x.gcd(&y).to_string());
            ("gcd", vec![x, y], v)
        }
        SteinitzOp::Divides { a, b } => {
            let (x, y) = (st(a)?, st(b)?);
            let v = json!(x.divides(&y));
            ("divides", vec![x, y], v)
        }
        SteinitzOp::LocallyFinite { s } => {
            let x = st(s)?;
            let v = json!(x.is_locally_finite());
            ("locally-finite", vec![x], v)
        }
        SteinitzOp::Corner { s, n, r } => {
            let x = st(s)?;
            let v = json!(x.corner(*r, *n)?.to_string());
            ("corner", vec![x], v)
        }
    };
    let shown = match &value {
        Value::String(s) => s.clone(),
        Value::Object(o) => o["canonical"].as_str().unwrap_or_default().to_string(),
        other => other.to_string(),
    };
    let mut results = json!({
        "op": name,
        "operands": operands.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "value": value,
    });
    if let SteinitzOp::Corner { n, r, .. } = op {
        results["n"] = json!(n);
        results["r"] = json!(r);
    }
    Ok(Outcome::new(EXIT_PASS, results, vec![format!("{name}: {shown}")]))
}

fn cmd_rank(a: &Element) -> Result<Outcome, CliError> {
    let value = normalized_rank(a);
    let up = a.promote(a.stage() + 1)?;
    let value_up = normalized_rank(&up);
    let agrees = value == value_up;
    let shown = js::rational_to_json(&value);
    let results = json!({
        "stage": a.stage(),
        "size": a.size(),
        "rank": a.matrix().rank(),
        "normalized_rank": shown,
        "self_check": {
            "stage": up.stage(),
            "size": up.size(),
            "normalized_rank": js::rational_to_json(&value_up),
            "agrees": agrees,
        },
    });
    let exit = if agrees { EXIT_PASS } else { EXIT_FAIL };
    Ok(Outcome::new(
        exit,
        results,
        vec![
            format!("normalized rank: {}", shown.as_str().unwrap_or_default()),
            format!("promotion to stage {}: {}", up.stage(), if agrees { "agrees" } else { "DISAGREES" }),
        ],
    ))
}

fn cmd_det(a: &Element) -> Result<Outcome, CliError> {
    let value = normalized_det(a);
    let up = a.promote(a.stage() + 1)?;
    let value_up = normalized_det(&up);
    let agrees = radical_eq(&value, &value_up);
    let results = json!({
        "stage": a.stage(),
        "size": a.size(),
        "det": js::scalar_to_json(&a.matrix().det()?),
        "normalized_det": js::radical_to_json(&value),
        "self_check": {
            "stage": up.stage(),
            "size": up.size(),
            "normalized_det": js::radical_to_json(&value_up),
            "agrees": agrees,
        },
    });
    let exit = if agrees { EXIT_PASS } else { EXIT_FAIL };
    Ok(Outcome::new(
        exit,
        results,
        vec![
            format!("normalized determinant: {value}"),
            format!("promotion to stage {}: {}", up.stage(), if agrees { "agrees" } else { "DISAGREES" }),
        ],
    ))
}

fn opt_matrix(a: &Option<ExactMatrix>) -> Value {
    a.as_ref().map_or(Value::Null, js::matrix_to_json)
}

fn opt_pair(p: &Option<(ExactMatrix, ExactMatrix)>) -> Value {
    p.as_ref().map_or(Value::Null, js::pair_to_json)
}

fn decomposition_json(w: &DecompositionWitness) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("kind".into(), json!(w.kind.as_str()));
    out.insert("e1".into(), js::matrix_to_json(&w.e1));
    out.insert("e2".into(), js::matrix_to_json(&w.e2));
    out.insert("e1_rank".into(), json!(w.e1.rank()));
    out.insert("e2_rank".into(), json!(w.e2.rank()));
    out.insert("u".into(), opt_matrix(&w.u));
    out.insert("x".into(), opt_matrix(&w.x));
    out.insert("y".into(), opt_matrix(&w.y));
    out.insert("hom_fail".into(), opt_pair(&w.hom_fail));
    out.insert("antihom_fail".into(), opt_pair(&w.antihom_fail));
    out
}

/// Normalizes by `c = φ(I)`, splits `c⁻¹φ` and, for a pure split with
/// `n = m`, recovers the inner part.
fn general_decomposition(map: &MatLinearMap) -> Result<DecompositionWitness, PreserverError> {
    let c = map.unit_image();
    let c_inv = c.inverse().map_err(|_| PreserverError::SingularUnitImage)?;
    let normalized = if c.is_identity() { map.clone() } else { map.left_multiply(&c_inv) };
    if let Verdict::CertifiedFail(crate::preserver::Witness::Pair(x, y)) = jordan_check(&normalized) {
        return Err(PreserverError::NotJordanAfterNormalization(Box::new((x, y))));
    }
    let mut w = jr_decompose(&normalized)?;
    verify_split(&normalized, &w.e1, &w.e2)?;
    let m = map.target_size();
    if map.source_size() == m && w.kind != Kind::Mixed {
        let u = recover_inner(&normalized, w.kind)?;
        w.x = Some(&c * &u);
        w.y = Some(u.inverse().expect("recovered conjugators are invertible"));
        w.u = Some(u);
    } else {
        w.x = Some(c);
        w.y = Some(ExactMatrix::identity(map.field(), m));
    }
    Ok(w)
}

fn cmd_analyze_map(map: &MatLinearMap, mode: Mode, spec: CorpusSpec) -> Result<Outcome, CliError> {
    let (n, m) = (map.source_size(), map.target_size());
    let (mode_name, verdict) = match mode {
        Mode::Rank => ("rank", preserves_normalized_rank(map, spec)),
        Mode::Det => ("det", preserves_normalized_det(map, spec)),
        Mode::Jordan => ("jordan", jordan_check(map)),
    };
    let mut results = json!({
        "mode": mode_name,
        "n": n,
        "m": m,
        "field": map.field().tag(),
        "seed": spec.seed,
        "samples": spec.random,
        "test": js::verdict_to_json(&verdict),
    });
    let mut summary = vec![format!("{mode_name} test on M_{n} -> M_{m}: {}", verdict_label(&verdict))];
    if verdict.is_fail() {
        results["decomposition"] = Value::Null;
        summary.push(format!("witness: {}", js::witness_to_json(verdict.witness().expect("failing verdict"))));
        return Ok(Outcome::new(EXIT_FAIL, results, summary));
    }
    if mode == Mode::Jordan && !map.is_unital() {
        results["decomposition"] = json!({"skipped": "NotUnital"});
        summary.push("decomposition skipped: map is not unital".into());
        return Ok(Outcome::new(EXIT_PASS, results, summary));
    }
    let witness = match mode {
        Mode::Rank if n == m => frobenius_form(map, FrobeniusMode::Rank)?,
        Mode::Det if n == m => frobenius_form(map, FrobeniusMode::Det)?,
        _ => general_decomposition(map)?,
    };
    let mut dec = decomposition_json(&witness);
    dec.insert("verified".into(), json!(true));
    results["decomposition"] = Value::Object(dec);
    summary.push(format!(
        "decomposition: {} (rank e1 = {}, rank e2 = {})",
        witness.kind,
        witness.e1.rank(),
        witness.e2.rank()
    ));
    Ok(Outcome::new(EXIT_PASS, results, summary))
}

fn verdict_label(v: &Verdict) -> String {
    match v {
        Verdict::Certified => "certified".into(),
        Verdict::PassedSamples { samples } => format!("passed {samples} samples"),
        Verdict::CertifiedFail(_) => "FAILED".into(),
    }
}

fn cmd_lemma2(a: &ExactMatrix, strategy: Strategy, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    if !a.is_square() {
        return Err(LinalgError::NonSquare { rows: a.rows(), cols: a.cols() }.into());
    }
    let rank = a.rank();
    let mut results = json!({"n": a.rows(), "rank_exact": rank});
    let (name, degree, ok) = match strategy {
        Strategy::Witness => {
            let w = degree_witness(a)?;
            let degree = w.poly.degree().unwrap_or(0);
            results["b"] = js::matrix_to_json(&w.b);
            results["poly"] = js::poly_to_json(&w.poly);
            ("witness", degree, degree == rank)
        }
        Strategy::Random => {
            let degree = rank_by_degree(a, DegreeStrategy::Random { trials, seed })?;
            results["trials"] = json!(trials);
            results["seed"] = json!(seed);
            ("random", degree, degree <= rank)
        }
        Strategy::Exhaustive => {
            let degree = rank_by_degree(a, DegreeStrategy::ExhaustiveSmall)?;
            ("exhaustive", degree, degree == rank)
        }
    };
    results["strategy"] = json!(name);
    results["degree"] = json!(degree);
    results["consistent"] = json!(ok);
    let relation = if strategy == Strategy::Random { "<=" } else { "=" };
    let summary = vec![format!(
        "{name}: max deg det(ta+b) = {degree}, rank = {rank} ({})",
        if ok { format!("{relation} holds") } else { format!("{relation} FAILS") }
    )];
    Ok(Outcome::new(if ok { EXIT_PASS } else { EXIT_FAIL }, results, summary))
}

fn cmd_counterexample(p: usize, n: usize, out: Option<&Path>, spec: CorpusSpec) -> Result<Outcome, CliError> {
    let ce = counterexample(p, n)?;
    let rank = preserves_normalized_rank(&ce.map, spec);
    let jordan = jordan_check(&ce.map);
    let mut results = json!({
        "p": p,
        "n": n,
        "m": ce.map.target_size(),
        "rank_test": js::verdict_to_json(&rank),
        "jordan": js::verdict_to_json(&jordan),
        "hom_fail": js::pair_to_json(&ce.hom_fail),
        "antihom_fail": js::pair_to_json(&ce.antihom_fail),
    });
    let map_json = js::map_to_json(&ce.map);
    match out {
        Some(path) => {
            let digest = write_json(path, &map_json)?;
            results["out"] = json!({"path": path.display().to_string(), "sha256": digest});
        }
        None => results["map"] = map_json,
    }
    let ok = !rank.is_fail() && jordan == Verdict::Certified;
    let summary = vec![
        format!("map a -> diag(a x{}, a^t): M_{n} -> M_{}", p - 1, ce.map.target_size()),
        format!("rank test: {}", verdict_label(&rank)),
        format!("Jordan: {}", verdict_label(&jordan)),
        "not multiplicative at (e12, e21); not antimultiplicative at (e12, e21)".into(),
    ];
    Ok(Outcome::new(if ok { EXIT_PASS } else { EXIT_FAIL }, results, summary))
}

fn cmd_clifford(k: usize, out: Option<&Path>) -> Result<Outcome, CliError> {
    let stage = clifford_generators(k)?;
    let defects = stage.anticommutator_defects();
    let failures: Vec<Value> = defects
        .iter()
        .filter(|(_, _, d)| !d.is_zero())
        .map(|(a, b, _)| json!([a + 1, b + 1]))
        .collect();
    let relations_ok = failures.is_empty();
    let dimension = generated_dimension(&stage);
    let expected = 1usize << (2 * k);
    let next = clifford_generators_bounded(k + 1, k + 1)?;
    let compatible = stage
        .gammas()
        .iter()
        .zip(next.gammas())
        .all(|(g, h)| &g.kron_identity(2) == h);
    let generators: Vec<Value> = stage.gammas().iter().map(js::matrix_to_json).collect();
    let mut results = json!({
        "k": k,
        "size": stage.size(),
        "generator_count": stage.gammas().len(),
        "relations": {"checked": defects.len(), "ok": relations_ok, "failures": failures},
        "generated_dimension": dimension,
        "expected_dimension": expected,
        "promotion_compatible": compatible,
        "steinitz": "2^inf",
    });
    match out {
        Some(path) => {
            let digest = write_json(path, &json!({"k": k, "generators": generators}))?;
            results["out"] = json!({"path": path.display().to_string(), "sha256": digest});
        }
        None => results["generators"] = Value::Array(generators),
    }
    let ok = relations_ok && dimension == expected && compatible;
    let summary = vec![
        format!("Cl_{} in M_{}: {} generators", 2 * k, stage.size(), stage.gammas().len()),
        format!(
            "anticommutation: {} ({} relations)",
            if relations_ok { "OK" } else { "FAILED" },
            defects.len()
        ),
        format!("generated dimension: {dimension} (expected {expected})"),
        format!("promotion to stage {}: {}", k + 1, if compatible { "compatible" } else { "INCOMPATIBLE" }),
    ];
    Ok(Outcome::new(if ok { EXIT_PASS } else { EXIT_FAIL }, results, summary))
}
