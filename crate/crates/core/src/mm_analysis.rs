//! Koshiba's reduction from MM-1QFAs to MO-g1QFAs, and a worked instance on
//! which it fails to preserve acceptance probabilities.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::machines::{Alphabet, MachineError, Mm1qfa, Mog1qfa, END_MARKER};
use crate::matrix::{Matrix, RealRatios};
use crate::scalar::{decimal12, ExactComplex, ExactReal, Field};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KoshibaError {
    #[error("the machine has no accepting states")]
    NoAcceptingStates,
    #[error("the initial state q{0} is accepting")]
    InitialAccepting(usize),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Builds the MO-g1QFA `M'` from an MM-1QFA `M`.
///
/// States of `M'`, in order: the non-accepting states of `M` in their
/// original order, then one sink `q_σ` per symbol of `Σ`, then `q_$`.
/// `U'_σ` copies `U_σ` on carried-over states except that every amplitude
/// sent into `Q_acc` is added onto `q_σ`. Every sink is fixed by every
/// `U'`, and the sinks are the accepting set of `M'`.
///
/// With several accepting states the amplitudes are summed before squaring,
/// so interference between them is kept.
pub fn koshiba_construct<F: Field>(m: &Mm1qfa<F>) -> Result<Mog1qfa<F>, KoshibaError> {
    if m.accepting().is_empty() {
        return Err(KoshibaError::NoAcceptingStates);
    }
    let is_accepting = |q: usize| m.accepting().binary_search(&q).is_ok();
    if is_accepting(m.initial()) {
        return Err(KoshibaError::InitialAccepting(m.initial()));
    }

    // new_index[q] is the position of q in M', None for accepting states.
    let mut new_index = vec![None; m.states()];
    let mut carried = Vec::new();
    for q in (0..m.states()).filter(|&q| !is_accepting(q)) {
        new_index[q] = Some(carried.len());
        carried.push(q);
    }
    let symbols = m.alphabet().len() + 1;
    let n = carried.len() + symbols;
    let sink = |s: usize| carried.len() + s;

    let evolutions = (0..symbols)
        .map(|s| {
            let u = m.evolution(s);
            let mut v = Matrix::<F>::zeros(n, n);
            for (i, &q) in carried.iter().enumerate() {
                for t in 0..m.states() {
                    let col = new_index[t].unwrap_or_else(|| sink(s));
                    v[(i, col)] = v[(i, col)].clone() + &u[(q, t)];
                }
            }
            for k in 0..symbols {
                v[(sink(k), sink(k))] = F::one();
            }
            v
        })
        .collect();
    let accepting: Vec<usize> = (0..symbols).map(sink).collect();
    let initial = new_index[m.initial()].expect("initial state is not accepting");
    Ok(Mog1qfa::new(
        n,
        initial,
        m.alphabet().clone(),
        evolutions,
        &accepting,
    )?)
}

/// Names of the states of [`koshiba_construct`]`(m)`, given names for the
/// states of `m`.
pub fn koshiba_state_names<F: Field>(m: &Mm1qfa<F>, names: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = (0..m.states())
        .filter(|q| m.accepting().binary_search(q).is_err())
        .map(|q| names[q].to_string())
        .collect();
    out.extend(
        m.alphabet()
            .symbols()
            .iter()
            .map(String::as_str)
            .chain([END_MARKER])
            .map(|s| format!("q_{s}")),
    );
    out
}

/// State names of [`example_mm1qfa`].
pub const EXAMPLE_STATES: [&str; 4] = ["q0", "q1", "q_acc", "q_rej"];

fn exact(rows: Vec<Vec<RealRatios>>) -> Matrix<ExactComplex> {
    Matrix::exact_real(rows)
}

const ZERO: RealRatios = ((0, 1), (0, 1));
const ONE: RealRatios = ((1, 1), (0, 1));
const HALF: RealRatios = ((1, 2), (0, 1));
const INV_SQRT2: RealRatios = ((0, 1), (1, 2));
const NEG_INV_SQRT2: RealRatios = ((0, 1), (-1, 2));

fn example_with(
    halting_a: [Vec<RealRatios>; 2],
    halting_end: [Vec<RealRatios>; 2],
) -> Mm1qfa<ExactComplex> {
    let [acc_a, rej_a] = halting_a;
    let [acc_end, rej_end] = halting_end;
    let u_a = exact(vec![
        vec![HALF, INV_SQRT2, HALF, ZERO],
        vec![HALF, NEG_INV_SQRT2, HALF, ZERO],
        acc_a,
        rej_a,
    ]);
    let u_end = exact(vec![
        vec![ZERO, ZERO, ONE, ZERO],
        vec![ZERO, ZERO, ZERO, ONE],
        acc_end,
        rej_end,
    ]);
    Mm1qfa::new(
        4,
        0,
        Alphabet::new(["a"]).expect("one symbol"),
        vec![u_a, u_end],
        &[2],
        &[3],
    )
    .expect("well-formed example")
}

/// The four-state MM-1QFA over `{a}` on which the reduction fails.
///
/// States are `q0, q1, q_acc, q_rej`. Only the rows of `q0` and `q1` matter;
/// the halting rows are completed as `U_a|q_acc⟩ = (|q0⟩ − |q_acc⟩)/√2`,
/// `U_a|q_rej⟩ = |q_rej⟩`, `U_$|q_acc⟩ = |q0⟩`, `U_$|q_rej⟩ = |q1⟩`.
pub fn example_mm1qfa() -> Mm1qfa<ExactComplex> {
    example_with(
        [
            vec![INV_SQRT2, ZERO, NEG_INV_SQRT2, ZERO],
            vec![ZERO, ZERO, ZERO, ONE],
        ],
        [vec![ONE, ZERO, ZERO, ZERO], vec![ZERO, ONE, ZERO, ZERO]],
    )
}

/// [`example_mm1qfa`] with a different unitary completion of the halting
/// rows. Every run gives the same probabilities.
pub fn example_mm1qfa_alternate() -> Mm1qfa<ExactComplex> {
    example_with(
        [
            vec![ZERO, ZERO, ZERO, ONE],
            vec![NEG_INV_SQRT2, ZERO, INV_SQRT2, ZERO],
        ],
        [vec![ZERO, ONE, ZERO, ZERO], vec![ONE, ZERO, ZERO, ZERO]],
    )
}

/// An exact real value with its renderings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportValue {
    #[serde(skip)]
    pub value: ExactReal,
    /// Literal in the machine-file grammar.
    pub exact: String,
    pub pretty: String,
    pub decimal: String,
}

impl From<ExactReal> for ReportValue {
    fn from(value: ExactReal) -> Self {
        ReportValue {
            exact: value.to_string(),
            pretty: value.pretty(),
            decimal: decimal12(value.to_f64()),
            value,
        }
    }
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {}", self.pretty, self.decimal)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub symbol: String,
    pub accept_increment: ReportValue,
    pub reject_increment: ReportValue,
    /// Non-halting residue as literals, one per state.
    pub residue: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub word: String,
    pub mm_states: Vec<String>,
    pub steps: Vec<StepReport>,
    pub mm_accept: ReportValue,
    pub mm_reject: ReportValue,
    pub mm_residual: ReportValue,
    pub constructed_states: Vec<String>,
    pub constructed_value: ReportValue,
    pub values_differ: bool,
    pub constructed_exceeds_one: bool,
}

/// Runs [`example_mm1qfa`] and its [`koshiba_construct`] image on `aa`.
pub fn counterexample_demo() -> CounterexampleReport {
    let mm = example_mm1qfa();
    let word = vec![0, 0];
    let trace = mm.trace(&word).expect("word over {a}");
    let outcome = mm.run(&word).expect("word over {a}");
    let constructed = koshiba_construct(&mm).expect("example has one accepting state");
    let value = constructed.value(&word).expect("word over {a}");

    let symbol_name = |s: usize| {
        if s == mm.end_marker() {
            END_MARKER.to_string()
        } else {
            mm.alphabet().name(s).to_string()
        }
    };
    let steps = trace
        .into_iter()
        .map(|s| StepReport {
            symbol: symbol_name(s.symbol),
            accept_increment: s.accept_increment.into(),
            reject_increment: s.reject_increment.into(),
            residue: s.residue.iter().map(ToString::to_string).collect(),
        })
        .collect();

    CounterexampleReport {
        word: mm.alphabet().render(&word),
        mm_states: EXAMPLE_STATES.iter().map(|s| s.to_string()).collect(),
        steps,
        values_differ: outcome.accept != value,
        constructed_exceeds_one: value > ExactReal::from_integer(1),
        mm_accept: outcome.accept.into(),
        mm_reject: outcome.reject.into(),
        mm_residual: outcome.residual.into(),
        constructed_states: koshiba_state_names(&mm, &EXAMPLE_STATES),
        constructed_value: value.into(),
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "MM-1QFA on {}$ (states {}):",
            self.word,
            self.mm_states.join(", ")
        )?;
        for s in &self.steps {
            writeln!(
                f,
                "  after {}: accept +{}, reject +{}, residue ({})",
                s.symbol,
                s.accept_increment.pretty,
                s.reject_increment.pretty,
                s.residue.join(", ")
            )?;
        }
        writeln!(f, "  accepting probability  {}", self.mm_accept)?;
        writeln!(f, "  rejecting probability  {}", self.mm_reject)?;
        writeln!(f, "  residual               {}", self.mm_residual)?;
        writeln!(
            f,
            "constructed MO-g1QFA (states {}):",
            self.constructed_states.join(", ")
        )?;
        writeln!(f, "  value                  {}", self.constructed_value)?;
        writeln!(f, "values differ: {}", self.values_differ)?;
        write!(
            f,
            "constructed value exceeds 1: {}",
            self.constructed_exceeds_one
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::RealScalar;

    fn er(a: (i64, i64), b: (i64, i64)) -> ExactReal {
        ExactReal::from_ratios(a, b)
    }

    #[test]
    fn examples_are_valid() {
        assert!(example_mm1qfa().validate().is_empty());
        assert!(example_mm1qfa_alternate().validate().is_empty());
    }

    #[test]
    fn constructed_first_row() {
        let m = koshiba_construct(&example_mm1qfa()).unwrap();
        assert_eq!(m.states(), 5);
        let half = ExactComplex::from_ratios((1, 2), (0, 1));
        let r = ExactComplex::inv_sqrt2();
        let z = ExactComplex::from_integer(0);
        let expected = vec![half.clone(), r, z.clone(), half, z];
        assert_eq!(m.evolution(0).row(0), expected.as_slice());
        assert!(!m.evolution(0).is_unitary(0.0));
    }

    #[test]
    fn untouched_acceptance_keeps_dynamics() {
        // U_a swaps q0 and q1; only U_$ reaches the accepting state.
        let z = ((0, 1), (0, 1));
        let o = ((1, 1), (0, 1));
        let swap = Matrix::exact_real(vec![vec![z, o, z], vec![o, z, z], vec![z, z, o]]);
        let end = Matrix::exact_real(vec![vec![z, z, o], vec![z, o, z], vec![o, z, z]]);
        let mm = Mm1qfa::new(
            3,
            0,
            Alphabet::new(["a"]).unwrap(),
            vec![swap.clone(), end],
            &[2],
            &[],
        )
        .unwrap();
        let m = koshiba_construct(&mm).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m.evolution(0)[(i, j)], swap[(i, j)]);
            }
        }
    }

    #[test]
    fn construction_errors() {
        let mm = example_mm1qfa();
        let none = Mm1qfa::new(
            4,
            0,
            mm.alphabet().clone(),
            mm.evolutions().to_vec(),
            &[],
            &[3],
        )
        .unwrap();
        assert_eq!(
            koshiba_construct(&none),
            Err(KoshibaError::NoAcceptingStates)
        );
        let init = Mm1qfa::new(
            4,
            2,
            mm.alphabet().clone(),
            mm.evolutions().to_vec(),
            &[2],
            &[3],
        )
        .unwrap();
        assert_eq!(
            koshiba_construct(&init),
            Err(KoshibaError::InitialAccepting(2))
        );
    }

    #[test]
    fn demo_values() {
        let r = counterexample_demo();
        assert_eq!(r.mm_accept.value, er((5, 8), (1, 4)));
        assert_eq!(r.constructed_value.value, er((7, 8), (1, 2)));
        assert_eq!(r.mm_accept.pretty, "5/8 + 1/(2√2)");
        assert_eq!(r.constructed_value.pretty, "7/8 + 1/√2");
        assert!(r.values_differ && r.constructed_exceeds_one);
        assert_eq!(r.steps.len(), 3);
        // First a: residue (1/2)q0 + (1/√2)q1, halting mass 1/4 accept.
        assert_eq!(r.steps[0].accept_increment.value, er((1, 4), (0, 1)));
        assert_eq!(r.steps[0].residue[0], "1/2");
        assert_eq!(r.steps[0].residue[1], "0/1 + 1/2 r2");
        // Second a: accept increment (1/2(1/2 + 1/√2))².
        let amp = er((1, 4), (1, 4));
        assert_eq!(r.steps[1].accept_increment.value, amp.clone() * &amp);
        let total = r.mm_accept.value.clone() + &r.mm_reject.value + &r.mm_residual.value;
        assert!(total.approx_eq(&ExactReal::from_integer(1), 0.0));
    }

    #[test]
    fn single_symbol_run() {
        // After a the residue is (1/2)q0 + (1/√2)q1; $ sends q0 to q_acc and
        // q1 to q_rej, so p_acc(a) = 1/4 + 1/4 and p_rej(a) = 1/2.
        for m in [example_mm1qfa(), example_mm1qfa_alternate()] {
            let r = m.run(&[0]).unwrap();
            assert_eq!(r.accept, er((1, 2), (0, 1)));
            assert_eq!(r.reject, er((1, 2), (0, 1)));
            assert!(r.residual.is_zero());
        }
    }

    #[test]
    fn report_renders() {
        let r = counterexample_demo();
        let text = r.to_string();
        assert!(text.contains("5/8 + 1/(2√2) ≈ 0.978553390593"));
        assert!(text.contains("7/8 + 1/√2 ≈ 1.58210678119"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["mm_accept"]["exact"], "5/8 + 1/4 r2");
        assert_eq!(json["constructed_exceeds_one"], true);
    }
}
