//! JSON machine files.
//!
//! ```json
//! {
//!   "model": "qsm",
//!   "backend": "exact",
//!   "states": 1,
//!   "initial": 0,
//!   "inputs": ["a"],
//!   "outputs": ["0", "1"],
//!   "transitions": [
//!     { "input": "a", "output": "0", "matrix": [["0/1 + 1/2 r2"]] },
//!     { "input": "a", "output": "1", "matrix": [["0/1 + 1/2 r2"]] }
//!   ]
//! }
//! ```
//!
//! QFAs use `alphabet`, `evolutions` (a list of `{symbol, matrix}`, with an
//! extra `"$"` entry for `mm1qfa` and `mog1qfa`), `accepting` and, for
//! `mm1qfa`, `rejecting`. BLMs and PAs use `alphabet`, `matrices`,
//! `initial_vector` and `final_vector`. Entries are scalar literals of the
//! file's backend. Matrices use the row-vector convention: row `i` is the
//! image of state `i`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::machines::{
    Alphabet, AnyMachine, Blm, BlmKind, Machine, Mm1qfa, Mo1qfa, Model, Mog1qfa, Qsm, END_MARKER,
};
use crate::matrix::Matrix;
use crate::scalar::{Backend, ExactComplex, Field, Scalar};
use num_complex::Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.into(),
        message: message.into(),
    }
}

type Rows = Vec<Vec<String>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Transition {
    input: String,
    output: String,
    matrix: Rows,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolMatrix {
    symbol: String,
    matrix: Rows,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMachine {
    model: Option<Model>,
    backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alphabet: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transitions: Option<Vec<Transition>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    evolutions: Option<Vec<SymbolMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrices: Option<Vec<SymbolMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_vector: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    final_vector: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accepting: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rejecting: Option<Vec<usize>>,
}

fn required<T>(value: Option<T>, name: &str, model: Model) -> Result<T, FormatError> {
    value.ok_or_else(|| field(name, format!("required for model {model}")))
}

impl RawMachine {
    /// Fields that are set but mean nothing for the model.
    fn check_unused(&self, model: Model) -> Result<(), FormatError> {
        let used: &[&str] = match model {
            Model::Qsm => &["states", "initial", "inputs", "outputs", "transitions"],
            Model::Blm | Model::Pa => &[
                "states",
                "alphabet",
                "matrices",
                "initial_vector",
                "final_vector",
            ],
            Model::Mo1qfa | Model::Mog1qfa => {
                &["states", "initial", "alphabet", "evolutions", "accepting"]
            }
            Model::Mm1qfa => &[
                "states",
                "initial",
                "alphabet",
                "evolutions",
                "accepting",
                "rejecting",
            ],
        };
        let present = [
            ("states", self.states.is_some()),
            ("initial", self.initial.is_some()),
            ("inputs", self.inputs.is_some()),
            ("outputs", self.outputs.is_some()),
            ("alphabet", self.alphabet.is_some()),
            ("transitions", self.transitions.is_some()),
            ("evolutions", self.evolutions.is_some()),
            ("matrices", self.matrices.is_some()),
            ("initial_vector", self.initial_vector.is_some()),
            ("final_vector", self.final_vector.is_some()),
            ("accepting", self.accepting.is_some()),
            ("rejecting", self.rejecting.is_some()),
        ];
        match present
            .iter()
            .find(|(name, set)| *set && !used.contains(name))
        {
            Some((name, _)) => Err(field(*name, format!("not used by model {model}"))),
            None => Ok(()),
        }
    }
}

fn literal<F: Field>(text: &str, path: &str) -> Result<F, FormatError> {
    Scalar::parse(text, F::BACKEND)
        .and_then(F::from_scalar)
        .map_err(|e| field(path, e.to_string()))
}

fn matrix<F: Field>(rows: &Rows, n: usize, path: &str) -> Result<Matrix<F>, FormatError> {
    if rows.len() != n {
        return Err(field(
            path,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(field(
                format!("{path}[{i}]"),
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        for (j, text) in row.iter().enumerate() {
            data.push(literal(text, &format!("{path}[{i}][{j}]"))?);
        }
    }
    Ok(Matrix::new(n, n, data).expect("checked shape"))
}

fn vector<F: Field>(entries: &[String], path: &str) -> Result<Vec<F>, FormatError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, t)| literal(t, &format!("{path}[{i}]")))
        .collect()
}

fn alphabet(symbols: Vec<String>, path: &str) -> Result<Alphabet, FormatError> {
    Alphabet::new(symbols).map_err(|e| field(path, e.to_string()))
}

fn positive_states(states: usize) -> Result<usize, FormatError> {
    if states == 0 {
        Err(field("states", "must be positive"))
    } else {
        Ok(states)
    }
}

/// Evolutions keyed by symbol, ordered like `names`.
fn symbol_matrices<F: Field>(
    entries: &[SymbolMatrix],
    names: &[&str],
    n: usize,
    path: &str,
) -> Result<Vec<Matrix<F>>, FormatError> {
    let mut found: Vec<Option<Matrix<F>>> = vec![None; names.len()];
    for (k, e) in entries.iter().enumerate() {
        let here = format!("{path}[{k}]");
        let idx = names.iter().position(|s| *s == e.symbol).ok_or_else(|| {
            field(
                format!("{here}.symbol"),
                format!("unknown symbol `{}`", e.symbol),
            )
        })?;
        if found[idx].is_some() {
            return Err(field(
                format!("{here}.symbol"),
                format!("duplicate symbol `{}`", e.symbol),
            ));
        }
        found[idx] = Some(matrix(&e.matrix, n, &format!("{here}.matrix"))?);
    }
    found
        .into_iter()
        .zip(names)
        .map(|(m, s)| m.ok_or_else(|| field(path, format!("missing matrix for `{s}`"))))
        .collect()
}

fn build<F: Field>(raw: RawMachine, model: Model) -> Result<Machine<F>, FormatError> {
    let structure = |e: crate::machines::MachineError| field("machine", e.to_string());
    match model {
        Model::Qsm => {
            let n = positive_states(required(raw.states, "states", model)?)?;
            let initial = required(raw.initial, "initial", model)?;
            let inputs = alphabet(required(raw.inputs, "inputs", model)?, "inputs")?;
            let outputs = alphabet(required(raw.outputs, "outputs", model)?, "outputs")?;
            let entries = required(raw.transitions, "transitions", model)?;
            let no = outputs.len();
            let mut found: Vec<Option<Matrix<F>>> = vec![None; inputs.len() * no];
            for (k, t) in entries.iter().enumerate() {
                let here = format!("transitions[{k}]");
                let x = inputs.index_of(&t.input).ok_or_else(|| {
                    field(
                        format!("{here}.input"),
                        format!("unknown input `{}`", t.input),
                    )
                })?;
                let y = outputs.index_of(&t.output).ok_or_else(|| {
                    field(
                        format!("{here}.output"),
                        format!("unknown output `{}`", t.output),
                    )
                })?;
                if found[x * no + y].is_some() {
                    return Err(field(
                        here,
                        format!("duplicate A({}|{})", t.output, t.input),
                    ));
                }
                found[x * no + y] = Some(matrix(&t.matrix, n, &format!("{here}.matrix"))?);
            }
            let transitions = found
                .into_iter()
                .enumerate()
                .map(|(k, m)| {
                    m.ok_or_else(|| {
                        field(
                            "transitions",
                            format!(
                                "missing A({}|{})",
                                outputs.name(k % no),
                                inputs.name(k / no)
                            ),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if initial >= n {
                return Err(field(
                    "initial",
                    format!("state {initial} out of range 0..{n}"),
                ));
            }
            Qsm::new(n, initial, inputs, outputs, transitions)
                .map(Machine::Qsm)
                .map_err(structure)
        }
        Model::Blm | Model::Pa => {
            let sigma = alphabet(required(raw.alphabet, "alphabet", model)?, "alphabet")?;
            let pi = vector::<F>(
                &required(raw.initial_vector, "initial_vector", model)?,
                "initial_vector",
            )?;
            let eta = vector::<F>(
                &required(raw.final_vector, "final_vector", model)?,
                "final_vector",
            )?;
            let n = positive_states(raw.states.unwrap_or(pi.len()))?;
            if pi.len() != n {
                return Err(field(
                    "initial_vector",
                    format!("expected {n} entries, found {}", pi.len()),
                ));
            }
            if eta.len() != n {
                return Err(field(
                    "final_vector",
                    format!("expected {n} entries, found {}", eta.len()),
                ));
            }
            let names: Vec<&str> = sigma.symbols().iter().map(String::as_str).collect();
            let matrices = symbol_matrices(
                &required(raw.matrices, "matrices", model)?,
                &names,
                n,
                "matrices",
            )?;
            let kind = if model == Model::Pa {
                BlmKind::Probabilistic
            } else {
                BlmKind::General
            };
            Blm::with_kind(
                kind,
                sigma,
                Matrix::new(1, n, pi).expect("length checked"),
                Matrix::new(n, 1, eta).expect("length checked"),
                matrices,
            )
            .map(Machine::Blm)
            .map_err(structure)
        }
        Model::Mo1qfa | Model::Mm1qfa | Model::Mog1qfa => {
            let n = positive_states(required(raw.states, "states", model)?)?;
            let initial = required(raw.initial, "initial", model)?;
            let sigma = alphabet(required(raw.alphabet, "alphabet", model)?, "alphabet")?;
            if sigma.index_of(END_MARKER).is_some() {
                return Err(field("alphabet", format!("`{END_MARKER}` is reserved")));
            }
            let mut names: Vec<&str> = sigma.symbols().iter().map(String::as_str).collect();
            if model != Model::Mo1qfa {
                names.push(END_MARKER);
            }
            let evolutions = symbol_matrices(
                &required(raw.evolutions, "evolutions", model)?,
                &names,
                n,
                "evolutions",
            )?;
            let accepting = raw.accepting.unwrap_or_default();
            let rejecting = raw.rejecting.unwrap_or_default();
            for (name, set) in [("accepting", &accepting), ("rejecting", &rejecting)] {
                if let Some((k, q)) = set.iter().enumerate().find(|(_, &q)| q >= n) {
                    return Err(field(
                        format!("{name}[{k}]"),
                        format!("state {q} out of range 0..{n}"),
                    ));
                }
            }
            if initial >= n {
                return Err(field(
                    "initial",
                    format!("state {initial} out of range 0..{n}"),
                ));
            }
            match model {
                Model::Mo1qfa => {
                    Mo1qfa::new(n, initial, sigma, evolutions, &accepting).map(Machine::Mo1qfa)
                }
                Model::Mm1qfa => Mm1qfa::new(n, initial, sigma, evolutions, &accepting, &rejecting)
                    .map(Machine::Mm1qfa),
                _ => Mog1qfa::new(n, initial, sigma, evolutions, &accepting).map(Machine::Mog1qfa),
            }
            .map_err(structure)
        }
    }
}

/// Parses a machine file. Structural problems are errors; invariant
/// violations such as non-unitarity are left to `validate`.
pub fn parse_machine(text: &str) -> Result<AnyMachine, FormatError> {
    let raw: RawMachine = serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    let model = raw.model.ok_or_else(|| field("model", "missing"))?;
    let backend = raw.backend.ok_or_else(|| field("backend", "missing"))?;
    raw.check_unused(model)?;
    Ok(match backend {
        Backend::Exact => AnyMachine::Exact(build::<ExactComplex>(raw, model)?),
        Backend::Float => AnyMachine::Float(build::<Complex64>(raw, model)?),
    })
}

fn rows<F: Field>(m: &Matrix<F>) -> Rows {
    m.to_scalars()
        .into_iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn entries<F: Field>(m: &Matrix<F>) -> Vec<String> {
    m.entries()
        .iter()
        .map(|x| x.clone().into_scalar().to_string())
        .collect()
}

fn symbol_entries<F: Field>(names: &[String], ms: &[Matrix<F>]) -> Vec<SymbolMatrix> {
    names
        .iter()
        .zip(ms)
        .map(|(s, m)| SymbolMatrix {
            symbol: s.clone(),
            matrix: rows(m),
        })
        .collect()
}

/// Serializes a machine; [`parse_machine`] inverts it exactly.
pub fn machine_to_json<F: Field>(machine: &Machine<F>) -> String {
    let mut raw = RawMachine {
        model: Some(machine.model()),
        backend: Some(F::BACKEND),
        states: Some(machine.states()),
        ..RawMachine::default()
    };
    let with_end = |sigma: &Alphabet| {
        let mut names = sigma.symbols().to_vec();
        names.push(END_MARKER.to_string());
        names
    };
    match machine {
        Machine::Qsm(m) => {
            raw.initial = Some(m.initial());
            raw.inputs = Some(m.inputs().symbols().to_vec());
            raw.outputs = Some(m.outputs().symbols().to_vec());
            let no = m.outputs().len();
            raw.transitions = Some(
                m.uqsm()
                    .transitions()
                    .iter()
                    .enumerate()
                    .map(|(k, a)| Transition {
                        input: m.inputs().name(k / no).to_string(),
                        output: m.outputs().name(k % no).to_string(),
                        matrix: rows(a),
                    })
                    .collect(),
            );
        }
        Machine::Blm(b) => {
            raw.alphabet = Some(b.alphabet().symbols().to_vec());
            raw.initial_vector = Some(entries(b.initial()));
            raw.final_vector = Some(entries(b.final_vector()));
            raw.matrices = Some(symbol_entries(b.alphabet().symbols(), b.matrices()));
        }
        Machine::Mo1qfa(a) => {
            raw.initial = Some(a.initial());
            raw.alphabet = Some(a.alphabet().symbols().to_vec());
            raw.evolutions = Some(symbol_entries(a.alphabet().symbols(), a.evolutions()));
            raw.accepting = Some(a.accepting().to_vec());
        }
        Machine::Mm1qfa(a) => {
            raw.initial = Some(a.initial());
            raw.alphabet = Some(a.alphabet().symbols().to_vec());
            raw.evolutions = Some(symbol_entries(&with_end(a.alphabet()), a.evolutions()));
            raw.accepting = Some(a.accepting().to_vec());
            raw.rejecting = Some(a.rejecting().to_vec());
        }
        Machine::Mog1qfa(a) => {
            raw.initial = Some(a.initial());
            raw.alphabet = Some(a.alphabet().symbols().to_vec());
            raw.evolutions = Some(symbol_entries(&with_end(a.alphabet()), a.evolutions()));
            raw.accepting = Some(a.accepting().to_vec());
        }
    }
    compact_matrices(&serde_json::to_string_pretty(&raw).expect("plain data serializes"))
}

/// Puts each innermost string array (a matrix row or vector) on one line.
fn compact_matrices(pretty: &str) -> String {
    let mut out = String::with_capacity(pretty.len());
    let mut lines = pretty.lines().peekable();
    while let Some(line) = lines.next() {
        let opens_row = line.trim_end().ends_with('[')
            && lines
                .peek()
                .is_some_and(|next| next.trim_start().starts_with('"'));
        if !opens_row {
            out.push_str(line);
            out.push('\n');
            continue;
        }
        let mut items = Vec::new();
        let mut close = "]";
        for inner in lines.by_ref() {
            let t = inner.trim();
            if t.starts_with(']') {
                close = t;
                break;
            }
            items.push(t.trim_end_matches(','));
        }
        out.push_str(line.trim_end());
        out.push_str(&items.join(", "));
        out.push_str(close);
        out.push('\n');
    }
    out
}
