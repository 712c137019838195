use std::fmt::Write as _;
use std::time::Duration;

use qsm_equiv::equivalence::{Method, Verdict};
use qsm_equiv::machines::{Alphabet, IoPair};
use qsm_equiv::scalar::{decimal12, Backend, Field, RealScalar};
use serde::Serialize;

/// A value as an exact literal (exact backend only), a readable form and a
/// 12-digit decimal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Value {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub pretty: String,
    pub decimal: String,
}

impl Value {
    pub fn real<R: RealScalar>(r: &R, backend: Backend) -> Self {
        Value {
            exact: (backend == Backend::Exact).then(|| r.literal()),
            pretty: r.pretty(),
            decimal: decimal12(r.to_f64()),
        }
    }

    pub fn complex<F: Field>(z: &F) -> Self {
        if z.im() == F::Real::zero() {
            return Value::real(&z.re(), F::BACKEND);
        }
        let c = z.to_complex64();
        let decimal = format!("{} + {} i", decimal12(c.re), decimal12(c.im));
        Value {
            exact: (F::BACKEND == Backend::Exact).then(|| z.clone().into_scalar().to_string()),
            pretty: format!("{} + ({}) i", z.re().pretty(), z.im().pretty()),
            decimal,
        }
    }

    fn text(&self) -> String {
        if self.pretty == self.decimal {
            self.pretty.clone()
        } else {
            format!("{} ≈ {}", self.pretty, self.decimal)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// The witness as printed: `(u, v)` for pairs, the word otherwise.
    pub display: String,
    pub length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<String>>,
}

impl Witness {
    pub fn pair(p: &IoPair, inputs: &Alphabet, outputs: &Alphabet) -> Self {
        let names = |a: &Alphabet, w: &[usize]| w.iter().map(|&s| a.name(s).to_string()).collect();
        Witness {
            display: format!(
                "({}, {})",
                inputs.render(p.input()),
                outputs.render(p.output())
            ),
            length: p.len(),
            input: Some(names(inputs, p.input())),
            output: Some(names(outputs, p.output())),
            word: None,
        }
    }

    pub fn word(w: &[usize], alphabet: &Alphabet) -> Self {
        Witness {
            display: alphabet.render(w),
            length: w.len(),
            input: None,
            output: None,
            word: Some(w.iter().map(|&s| alphabet.name(s).to_string()).collect()),
        }
    }
}

/// One decider's verdict with the bounds it is expected to respect.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodResult {
    pub method: Method,
    pub equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<[Value; 2]>,
    pub basis_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_length_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub nodes_visited: usize,
    pub elapsed_ms: f64,
}

pub struct Bounds {
    pub basis: Option<usize>,
    pub witness: Option<usize>,
    pub depth: Option<usize>,
}

impl MethodResult {
    pub fn new<W, V>(
        verdict: Verdict<W, V>,
        witness: impl FnOnce(&W) -> Witness,
        value: impl Fn(&V) -> Value,
        bounds: Bounds,
        elapsed: Duration,
    ) -> Self {
        MethodResult {
            method: verdict.method,
            equivalent: verdict.equivalent,
            witness: verdict.witness.as_ref().map(witness),
            values: verdict.values.as_ref().map(|(a, b)| [value(a), value(b)]),
            basis_size: verdict.basis_size,
            basis_bound: bounds.basis,
            witness_length_bound: bounds.witness,
            depth: bounds.depth,
            nodes_visited: verdict.nodes_visited,
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivReport {
    pub command: &'static str,
    pub model: String,
    pub backend: Backend,
    /// `exact`, or `within eps_rank` for the float backend.
    pub comparison: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_rank: Option<f64>,
    pub results: Vec<MethodResult>,
}

impl EquivReport {
    pub fn equivalent(&self) -> bool {
        self.results.iter().all(|r| r.equivalent)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let verdict = if r.equivalent {
                "EQUIVALENT"
            } else {
                "NOT EQUIVALENT"
            };
            let mut notes = Vec::new();
            if self.backend == Backend::Float {
                notes.push(format!(
                    "within ε_rank = {}",
                    self.eps_rank.unwrap_or_default()
                ));
            }
            if let Some(k) = r.depth {
                notes.push(format!("up to length {k}"));
            }
            let qualifier = if notes.is_empty() {
                String::new()
            } else {
                format!(" ({})", notes.join(", "))
            };
            let _ = writeln!(s, "[{}] {verdict}{qualifier}", r.method);
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "  witness: {} (length {})", w.display, w.length);
            }
            if let Some([a, b]) = &r.values {
                let _ = writeln!(s, "  machine 1: {}", a.text());
                let _ = writeln!(s, "  machine 2: {}", b.text());
            }
            if r.depth.is_none() {
                let bound = r
                    .basis_bound
                    .map(|b| format!(" (bound {b})"))
                    .unwrap_or_default();
                let _ = writeln!(s, "  basis size: {}{bound}", r.basis_size);
            }
            let _ = writeln!(s, "  nodes visited: {}", r.nodes_visited);
            let _ = writeln!(s, "  time: {:.3} ms", r.elapsed_ms);
        }
        s
    }
}
