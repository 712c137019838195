//! Command-line front-end: validation, simulation, equivalence checking,
//! bilinearization, the MM-1QFA counterexample and the brute-force oracle.
//!
//! Exit status is 0 for "equivalent" (and for successful non-verdict
//! commands), 1 for "not equivalent", and 2 for usage, parse or validation
//! errors.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qsm_equiv::equivalence::{self, EquivalenceOptions};
use qsm_equiv::format::{machine_to_json, parse_machine};
use qsm_equiv::machines::{AnyMachine, IoPair, Machine};
use qsm_equiv::mm_analysis::counterexample_demo;
use qsm_equiv::scalar::{Backend, Complex64, ExactComplex, Field};
use qsm_equiv::span::DEFAULT_EPS_RANK;
use serde_json::json;

pub use report::{Bounds, EquivReport, MethodResult, Value, Witness};

pub const EXIT_EQUIVALENT: i32 = 0;
pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Tree,
    Bilinear,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "qsm-equiv",
    version,
    about = "Equivalence checking for quantum sequential machines and one-way QFAs"
)]
pub struct Cli {
    /// Arithmetic backend. Defaults to the backend declared in each file.
    #[arg(long, global = true, value_enum, env = "QSM_EQUIV_BACKEND")]
    pub backend: Option<BackendArg>,
    /// Relative rank threshold for the float backend.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS_RANK)]
    pub eps_rank: f64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a machine file against its model's invariants.
    Validate { file: PathBuf },
    /// Evaluate a machine on one input (and, for QSMs, output) word.
    Simulate {
        file: PathBuf,
        /// Input word; symbols separated by commas or spaces, or packed
        /// when every symbol is one character. Empty or `ε` is the empty word.
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Output word, for QSMs.
        #[arg(long)]
        output: Option<String>,
    },
    /// Decide equivalence of two machines of the same model.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        /// Defaults to `tree` for QSMs and MO-1QFAs and `bilinear` for BLMs.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Write the bilinear machine of a QSM.
    Bilinearize {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        out: PathBuf,
    },
    /// Run the MM-1QFA counterexample.
    Counterexample,
    /// Compare two machines on every word up to length `k`.
    Oracle {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(short = 'k', long = "depth")]
        k: usize,
    },
}

/// Reads, parses and validates a machine file, applying the backend
/// override.
pub fn load_machine(path: &Path, backend: Option<Backend>, eps: f64) -> Result<AnyMachine> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let machine = parse_machine(&text).with_context(|| format!("{}", path.display()))?;
    let machine = convert(machine, backend).with_context(|| format!("{}", path.display()))?;
    let violations = machine.validate(eps);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        bail!("{} is invalid: {}", path.display(), list.join("; "));
    }
    Ok(machine)
}

fn convert(machine: AnyMachine, backend: Option<Backend>) -> Result<AnyMachine> {
    match (backend, machine) {
        (Some(Backend::Float), m) => Ok(m.into_float()),
        (Some(Backend::Exact), AnyMachine::Float(_)) => {
            bail!("float machines cannot be read with the exact backend")
        }
        (_, m) => Ok(m),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let backend = cli.backend.map(Backend::from);
    let eps = cli.eps_rank;
    if !(eps.is_finite() && eps >= 0.0) {
        bail!("--eps-rank must be a non-negative number");
    }
    let opts = EquivalenceOptions { eps_rank: eps };
    let json = cli.format == OutputFormat::Json;
    match &cli.command {
        Command::Validate { file } => validate(file, backend, eps, json, out),
        Command::Simulate {
            file,
            input,
            output,
        } => {
            let machine = load_machine(file, backend, eps)?;
            let doc = match &machine {
                AnyMachine::Exact(m) => simulate(m, input, output.as_deref())?,
                AnyMachine::Float(m) => simulate(m, input, output.as_deref())?,
            };
            emit(out, json, &doc, simulate_text(&doc))?;
            Ok(0)
        }
        Command::Equiv {
            file1,
            file2,
            method,
        } => {
            let report = match load_pair(file1, file2, backend, eps)? {
                Pair::Exact(a, b) => equiv(&a, &b, *method, &opts)?,
                Pair::Float(a, b) => equiv(&a, &b, *method, &opts)?,
            };
            emit_report(out, json, &report)
        }
        Command::Oracle { file1, file2, k } => {
            let report = match load_pair(file1, file2, backend, eps)? {
                Pair::Exact(a, b) => oracle(&a, &b, *k, &opts)?,
                Pair::Float(a, b) => oracle(&a, &b, *k, &opts)?,
            };
            emit_report(out, json, &report)
        }
        Command::Bilinearize { file, out: path } => {
            let text = match load_machine(file, backend, eps)? {
                AnyMachine::Exact(m) => bilinear_file(&m)?,
                AnyMachine::Float(m) => bilinear_file(&m)?,
            };
            std::fs::write(path, &text.0)
                .with_context(|| format!("cannot write {}", path.display()))?;
            let doc = json!({
                "command": "bilinearize",
                "states": text.1,
                "symbols": text.2,
                "path": path.display().to_string(),
            });
            let summary = format!(
                "wrote {}-state BLM over {} pair symbols to {}\n",
                text.1,
                text.2,
                path.display()
            );
            emit(out, json, &doc, summary)?;
            Ok(0)
        }
        Command::Counterexample => {
            let report = counterexample_demo();
            let doc = serde_json::to_value(&report)?;
            emit(out, json, &doc, format!("{report}\n"))?;
            Ok(0)
        }
    }
}

fn emit(out: &mut dyn Write, json: bool, doc: &serde_json::Value, text: String) -> Result<()> {
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(doc)?)?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(())
}

fn emit_report(out: &mut dyn Write, json: bool, report: &EquivReport) -> Result<i32> {
    emit(out, json, &serde_json::to_value(report)?, report.text())?;
    Ok(if report.equivalent() {
        EXIT_EQUIVALENT
    } else {
        EXIT_NOT_EQUIVALENT
    })
}

fn validate(
    file: &Path,
    backend: Option<Backend>,
    eps: f64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let machine = parse_machine(&text).with_context(|| format!("{}", file.display()))?;
    let machine = convert(machine, backend)?;
    let violations: Vec<String> = machine
        .validate(eps)
        .iter()
        .map(|v| v.to_string())
        .collect();
    let states = match &machine {
        AnyMachine::Exact(m) => m.states(),
        AnyMachine::Float(m) => m.states(),
    };
    let doc = json!({
        "command": "validate",
        "model": machine.model(),
        "backend": machine.backend(),
        "states": states,
        "valid": violations.is_empty(),
        "violations": violations,
    });
    let mut text = format!(
        "{}: {}, {states} state(s), {} backend\n",
        file.display(),
        machine.model(),
        machine.backend()
    );
    if violations.is_empty() {
        text.push_str("valid\n");
    } else {
        text.push_str("invalid:\n");
        for v in &violations {
            text.push_str(&format!("  {v}\n"));
        }
    }
    emit(out, json, &doc, text)?;
    Ok(if violations.is_empty() { 0 } else { EXIT_ERROR })
}

fn simulate<F: Field>(
    m: &Machine<F>,
    input: &str,
    output: Option<&str>,
) -> Result<serde_json::Value> {
    let backend = F::BACKEND;
    let real = |r: &F::Real| serde_json::to_value(Value::real(r, backend)).expect("plain data");
    if output.is_some() && !matches!(m, Machine::Qsm(_)) {
        bail!("--output only applies to QSMs");
    }
    let mut doc = json!({
        "command": "simulate",
        "model": m.model(),
        "backend": backend,
        "input": input,
    });
    match m {
        Machine::Qsm(q) => {
            let output = output.ok_or_else(|| anyhow!("QSMs need --output"))?;
            let u = q.inputs().parse_word(input)?;
            let v = q.outputs().parse_word(output)?;
            let pair = IoPair::new(u, v)?;
            doc["output"] = json!(output);
            doc["probability"] = real(&q.probability(&pair)?);
        }
        Machine::Blm(b) => {
            let w = b.alphabet().parse_word(input)?;
            doc["value"] = serde_json::to_value(Value::complex(&b.word_value(&w)?))?;
        }
        Machine::Mo1qfa(a) => {
            let w = a.alphabet().parse_word(input)?;
            doc["probability"] = real(&a.probability(&w)?);
        }
        Machine::Mm1qfa(a) => {
            let w = a.alphabet().parse_word(input)?;
            let r = a.run(&w)?;
            doc["accept"] = real(&r.accept);
            doc["reject"] = real(&r.reject);
            doc["residual"] = real(&r.residual);
        }
        Machine::Mog1qfa(a) => {
            let w = a.alphabet().parse_word(input)?;
            doc["value"] = real(&a.value(&w)?);
        }
    }
    Ok(doc)
}

fn simulate_text(doc: &serde_json::Value) -> String {
    let mut s = String::new();
    for key in ["probability", "value", "accept", "reject", "residual"] {
        let Some(v) = doc.get(key) else { continue };
        let pretty = v["pretty"].as_str().unwrap_or_default();
        let decimal = v["decimal"].as_str().unwrap_or_default();
        if pretty == decimal {
            s.push_str(&format!("{key}: {decimal}\n"));
        } else {
            s.push_str(&format!("{key}: {pretty} ≈ {decimal}\n"));
        }
        if let Some(exact) = v.get("exact").and_then(|e| e.as_str()) {
            s.push_str(&format!("  exact literal: {exact}\n"));
        }
    }
    s
}

enum Pair {
    Exact(Machine<ExactComplex>, Machine<ExactComplex>),
    Float(Machine<Complex64>, Machine<Complex64>),
}

fn load_pair(a: &Path, b: &Path, backend: Option<Backend>, eps: f64) -> Result<Pair> {
    let m1 = load_machine(a, backend, eps)?;
    let m2 = load_machine(b, backend, eps)?;
    match (m1, m2) {
        (AnyMachine::Exact(x), AnyMachine::Exact(y)) => Ok(Pair::Exact(x, y)),
        (AnyMachine::Float(x), AnyMachine::Float(y)) => Ok(Pair::Float(x, y)),
        _ => bail!("the two files use different backends; pass --backend float to compare them"),
    }
}

fn comparison<F: Field>(opts: &EquivalenceOptions) -> (String, Option<f64>) {
    match F::BACKEND {
        Backend::Exact => ("exact".into(), None),
        Backend::Float => ("within eps_rank".into(), Some(opts.eps_rank)),
    }
}

fn report<F: Field>(
    command: &'static str,
    m: &Machine<F>,
    results: Vec<MethodResult>,
    opts: &EquivalenceOptions,
) -> EquivReport {
    let (comparison, eps_rank) = comparison::<F>(opts);
    EquivReport {
        command,
        model: m.model().to_string(),
        backend: F::BACKEND,
        comparison,
        eps_rank,
        results,
    }
}

fn equiv<F: Field>(
    m1: &Machine<F>,
    m2: &Machine<F>,
    method: Option<MethodArg>,
    opts: &EquivalenceOptions,
) -> Result<EquivReport> {
    let real = |r: &F::Real| Value::real(r, F::BACKEND);
    let mut results = Vec::new();
    match (m1, m2) {
        (Machine::Qsm(a), Machine::Qsm(b)) => {
            let (n1, n2) = (a.states(), b.states());
            let (run_tree, run_bilinear) = match method {
                None | Some(MethodArg::Tree) => (true, false),
                Some(MethodArg::Bilinear) => (false, true),
                Some(MethodArg::Both) => (true, true),
            };
            let pair = |p: &IoPair| Witness::pair(p, a.inputs(), a.outputs());
            if run_tree {
                let t = Instant::now();
                let v = equivalence::qsm_equivalence_tree(a, b, opts)?;
                let bound = (n1 + n2).pow(2);
                let bounds = Bounds {
                    basis: Some(bound),
                    witness: Some(bound),
                    depth: None,
                };
                results.push(MethodResult::new(v, pair, real, bounds, t.elapsed()));
            }
            if run_bilinear {
                let t = Instant::now();
                let v = equivalence::qsm_equivalence_bilinear(a, b, opts)?;
                let basis = n1 * n1 + n2 * n2;
                let bounds = Bounds {
                    basis: Some(basis),
                    witness: Some(basis - 1),
                    depth: None,
                };
                results.push(MethodResult::new(v, pair, real, bounds, t.elapsed()));
            }
        }
        (Machine::Mo1qfa(a), Machine::Mo1qfa(b)) => {
            if matches!(method, Some(MethodArg::Bilinear | MethodArg::Both)) {
                bail!("MO-1QFAs are compared with the tree method only");
            }
            let t = Instant::now();
            let v = equivalence::mo1qfa_equivalence(a, b, opts)?;
            let bound = (a.states() + b.states()).pow(2);
            let bounds = Bounds {
                basis: Some(bound),
                witness: Some(bound),
                depth: None,
            };
            let word = |w: &Vec<usize>| Witness::word(w, a.alphabet());
            results.push(MethodResult::new(v, word, real, bounds, t.elapsed()));
        }
        (Machine::Blm(a), Machine::Blm(b)) => {
            if matches!(method, Some(MethodArg::Tree | MethodArg::Both)) {
                bail!("BLMs are compared with the bilinear method only");
            }
            let t = Instant::now();
            let v = equivalence::blm_equivalence(a, b, opts)?;
            let basis = a.states() + b.states();
            let bounds = Bounds {
                basis: Some(basis),
                witness: Some(basis - 1),
                depth: None,
            };
            let word = |w: &Vec<usize>| Witness::word(w, a.alphabet());
            results.push(MethodResult::new(
                v,
                word,
                Value::complex,
                bounds,
                t.elapsed(),
            ));
        }
        (Machine::Mm1qfa(_) | Machine::Mog1qfa(_), _) => {
            bail!(
                "equivalence is only decided for QSMs, MO-1QFAs and BLMs, not {} machines",
                m1.model()
            )
        }
        (_, Machine::Mm1qfa(_) | Machine::Mog1qfa(_)) => {
            bail!(
                "equivalence is only decided for QSMs, MO-1QFAs and BLMs, not {} machines",
                m2.model()
            )
        }
        _ => bail!("cannot compare a {} with a {}", m1.model(), m2.model()),
    }
    Ok(report("equiv", m1, results, opts))
}

fn oracle<F: Field>(
    m1: &Machine<F>,
    m2: &Machine<F>,
    k: usize,
    opts: &EquivalenceOptions,
) -> Result<EquivReport> {
    let real = |r: &F::Real| Value::real(r, F::BACKEND);
    let bounds = || Bounds {
        basis: None,
        witness: None,
        depth: Some(k),
    };
    let t = Instant::now();
    let result = match (m1, m2) {
        (Machine::Qsm(a), Machine::Qsm(b)) => {
            let v = equivalence::brute_force_qsm(a, b, k, opts)?;
            let pair = |p: &IoPair| Witness::pair(p, a.inputs(), a.outputs());
            MethodResult::new(v, pair, real, bounds(), t.elapsed())
        }
        (Machine::Mo1qfa(a), Machine::Mo1qfa(b)) => {
            let v = equivalence::brute_force_mo1qfa(a, b, k, opts)?;
            let word = |w: &Vec<usize>| Witness::word(w, a.alphabet());
            MethodResult::new(v, word, real, bounds(), t.elapsed())
        }
        (Machine::Blm(a), Machine::Blm(b)) => {
            let v = equivalence::brute_force_blm(a, b, k, opts)?;
            let word = |w: &Vec<usize>| Witness::word(w, a.alphabet());
            MethodResult::new(v, word, Value::complex, bounds(), t.elapsed())
        }
        _ => bail!(
            "the oracle compares two QSMs, two MO-1QFAs or two BLMs, not a {} and a {}",
            m1.model(),
            m2.model()
        ),
    };
    Ok(report("oracle", m1, vec![result], opts))
}

fn bilinear_file<F: Field>(m: &Machine<F>) -> Result<(String, usize, usize)> {
    let Machine::Qsm(q) = m else {
        bail!("bilinearize expects a QSM, not a {}", m.model());
    };
    let b = equivalence::bilinearize(q);
    let (states, symbols) = (b.states(), b.alphabet().len());
    Ok((machine_to_json(&Machine::Blm(b)), states, symbols))
}
