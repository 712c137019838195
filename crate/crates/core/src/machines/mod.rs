//! Machine models and their forward semantics.
//!
//! Every model uses the row-vector convention: a configuration is a row
//! vector `ψ` and reading a symbol maps it to `ψ·U`. Row `i` of an evolution
//! matrix is therefore the image of basis state `i`.

mod blm;
mod qfa;
mod qsm;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::LinalgError;
use crate::scalar::{Backend, ExactComplex, Field};

pub use blm::{Blm, BlmKind};
pub use qfa::{Mm1qfa, MmOutcome, MmStep, Mo1qfa, Mog1qfa, END_MARKER};
pub use qsm::{Qsm, Uqsm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MachineError {
    #[error("alphabet `{0}` is empty")]
    EmptyAlphabet(&'static str),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is reserved")]
    ReservedSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol index {index} out of range for an alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },
    #[error("state index {index} out of range for {states} states")]
    StateOutOfRange { index: usize, states: usize },
    #[error("input and output words differ in length ({input} vs {output})")]
    LengthMismatch { input: usize, output: usize },
    #[error("{what}: expected {expected}, got {actual}")]
    Shape {
        what: String,
        expected: String,
        actual: String,
    },
    #[error("machine has no states")]
    NoStates,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Ordered, duplicate-free list of symbol names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet(Vec<String>);

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, MachineError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(MachineError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet(symbols))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.0.iter().position(|s| s == symbol)
    }

    /// Maps symbol names to indices.
    pub fn encode<S: AsRef<str>>(&self, word: &[S]) -> Result<Vec<usize>, MachineError> {
        word.iter()
            .map(|s| {
                self.index_of(s.as_ref())
                    .ok_or_else(|| MachineError::UnknownSymbol(s.as_ref().to_string()))
            })
            .collect()
    }

    /// Splits a textual word into symbols and encodes it. Words containing
    /// commas or whitespace are split on those; otherwise, when every symbol
    /// is a single character, the word is split into characters.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>, MachineError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        if text.contains(',') || text.contains(char::is_whitespace) {
            let parts: Vec<&str> = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            return self.encode(&parts);
        }
        if let Some(i) = self.index_of(text) {
            return Ok(vec![i]);
        }
        let chars: Vec<String> = text.chars().map(String::from).collect();
        self.encode(&chars)
    }

    pub fn check_word(&self, word: &[usize]) -> Result<(), MachineError> {
        match word.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(MachineError::SymbolOutOfRange {
                index,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// Human-readable word; `ε` for the empty word.
    pub fn render(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let single = word.iter().all(|&i| self.0[i].chars().count() == 1);
        let names: Vec<&str> = word.iter().map(|&i| self.0[i].as_str()).collect();
        if single {
            names.concat()
        } else {
            names.join(" ")
        }
    }
}

/// An input-output pair `(u, v)` with `|u| = |v|`, stored as symbol indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IoPair {
    input: Vec<usize>,
    output: Vec<usize>,
}

impl IoPair {
    pub fn new(input: Vec<usize>, output: Vec<usize>) -> Result<Self, MachineError> {
        if input.len() != output.len() {
            return Err(MachineError::LengthMismatch {
                input: input.len(),
                output: output.len(),
            });
        }
        Ok(IoPair { input, output })
    }

    pub fn empty() -> Self {
        IoPair::default()
    }

    pub fn input(&self) -> &[usize] {
        &self.input
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }

    pub fn len(&self) -> usize {
        self.input.len()
    }

    pub fn is_empty(&self) -> bool {
        self.input.is_empty()
    }

    /// The pair `(x·u, y·v)`.
    pub fn prepend(&self, x: usize, y: usize) -> IoPair {
        let mut input = Vec::with_capacity(self.len() + 1);
        input.push(x);
        input.extend_from_slice(&self.input);
        let mut output = Vec::with_capacity(self.len() + 1);
        output.push(y);
        output.extend_from_slice(&self.output);
        IoPair { input, output }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.input.iter().copied().zip(self.output.iter().copied())
    }
}

/// A failed model invariant, reported as data by `validate`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub symbol: Option<String>,
    pub identity: String,
}

impl Violation {
    pub(crate) fn at(symbol: impl Into<String>, identity: impl Into<String>) -> Self {
        Violation {
            symbol: Some(symbol.into()),
            identity: identity.into(),
        }
    }

    pub(crate) fn global(identity: impl Into<String>) -> Self {
        Violation {
            symbol: None,
            identity: identity.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.symbol {
            Some(s) => write!(f, "at symbol `{s}`: {} fails", self.identity),
            None => write!(f, "{} fails", self.identity),
        }
    }
}

pub(crate) fn check_state(index: usize, states: usize) -> Result<(), MachineError> {
    if index >= states {
        Err(MachineError::StateOutOfRange { index, states })
    } else {
        Ok(())
    }
}

pub(crate) fn check_square<F: Field>(
    what: impl Fn() -> String,
    m: &crate::matrix::Matrix<F>,
    n: usize,
) -> Result<(), MachineError> {
    if m.rows() != n || m.cols() != n {
        return Err(MachineError::Shape {
            what: what(),
            expected: format!("{n}x{n}"),
            actual: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

/// Model tag used in machine files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Qsm,
    Blm,
    Pa,
    Mo1qfa,
    Mm1qfa,
    Mog1qfa,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Model::Qsm => "qsm",
            Model::Blm => "blm",
            Model::Pa => "pa",
            Model::Mo1qfa => "mo1qfa",
            Model::Mm1qfa => "mm1qfa",
            Model::Mog1qfa => "mog1qfa",
        };
        f.write_str(s)
    }
}

/// Any supported machine over a fixed backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Machine<F> {
    Qsm(Qsm<F>),
    Blm(Blm<F>),
    Mo1qfa(Mo1qfa<F>),
    Mm1qfa(Mm1qfa<F>),
    Mog1qfa(Mog1qfa<F>),
}

impl<F: Field> Machine<F> {
    pub fn model(&self) -> Model {
        match self {
            Machine::Qsm(_) => Model::Qsm,
            Machine::Blm(b) => match b.kind() {
                BlmKind::General => Model::Blm,
                BlmKind::Probabilistic => Model::Pa,
            },
            Machine::Mo1qfa(_) => Model::Mo1qfa,
            Machine::Mm1qfa(_) => Model::Mm1qfa,
            Machine::Mog1qfa(_) => Model::Mog1qfa,
        }
    }

    pub fn states(&self) -> usize {
        match self {
            Machine::Qsm(m) => m.states(),
            Machine::Blm(m) => m.states(),
            Machine::Mo1qfa(m) => m.states(),
            Machine::Mm1qfa(m) => m.states(),
            Machine::Mog1qfa(m) => m.states(),
        }
    }

    pub fn validate(&self, eps: f64) -> Vec<Violation> {
        match self {
            Machine::Qsm(m) => m.validate_with_eps(eps),
            Machine::Blm(m) => m.validate_with_eps(eps),
            Machine::Mo1qfa(m) => m.validate_with_eps(eps),
            Machine::Mm1qfa(m) => m.validate_with_eps(eps),
            Machine::Mog1qfa(m) => m.validate_with_eps(eps),
        }
    }

    pub fn to_float(&self) -> Machine<Complex64> {
        match self {
            Machine::Qsm(m) => Machine::Qsm(m.to_float()),
            Machine::Blm(m) => Machine::Blm(m.to_float()),
            Machine::Mo1qfa(m) => Machine::Mo1qfa(m.to_float()),
            Machine::Mm1qfa(m) => Machine::Mm1qfa(m.to_float()),
            Machine::Mog1qfa(m) => Machine::Mog1qfa(m.to_float()),
        }
    }
}

/// A machine whose backend was decided at runtime (e.g. by a file).
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMachine {
    Exact(Machine<ExactComplex>),
    Float(Machine<Complex64>),
}

impl AnyMachine {
    pub fn backend(&self) -> Backend {
        match self {
            AnyMachine::Exact(_) => Backend::Exact,
            AnyMachine::Float(_) => Backend::Float,
        }
    }

    pub fn model(&self) -> Model {
        match self {
            AnyMachine::Exact(m) => m.model(),
            AnyMachine::Float(m) => m.model(),
        }
    }

    pub fn validate(&self, eps: f64) -> Vec<Violation> {
        match self {
            AnyMachine::Exact(m) => m.validate(eps),
            AnyMachine::Float(m) => m.validate(eps),
        }
    }

    /// Converts to the float backend; already-float machines are unchanged.
    pub fn into_float(self) -> AnyMachine {
        match self {
            AnyMachine::Exact(m) => AnyMachine::Float(m.to_float()),
            f => f,
        }
    }
}

impl From<Machine<ExactComplex>> for AnyMachine {
    fn from(m: Machine<ExactComplex>) -> Self {
        AnyMachine::Exact(m)
    }
}

impl From<Machine<Complex64>> for AnyMachine {
    fn from(m: Machine<Complex64>) -> Self {
        AnyMachine::Float(m)
    }
}
