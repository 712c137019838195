use num_complex::Complex64;

use super::{check_square, check_state, Alphabet, IoPair, MachineError, Violation};
use crate::matrix::Matrix;
use crate::scalar::Field;
use crate::span::DEFAULT_EPS_RANK;

/// A QSM without a fixed initial distribution.
///
/// `transitions[x·|O| + y]` holds `A(y|x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Uqsm<F> {
    states: usize,
    inputs: Alphabet,
    outputs: Alphabet,
    transitions: Vec<Matrix<F>>,
}

impl<F: Field> Uqsm<F> {
    pub fn new(
        states: usize,
        inputs: Alphabet,
        outputs: Alphabet,
        transitions: Vec<Matrix<F>>,
    ) -> Result<Self, MachineError> {
        if states == 0 {
            return Err(MachineError::NoStates);
        }
        if inputs.is_empty() {
            return Err(MachineError::EmptyAlphabet("inputs"));
        }
        if outputs.is_empty() {
            return Err(MachineError::EmptyAlphabet("outputs"));
        }
        let expected = inputs.len() * outputs.len();
        if transitions.len() != expected {
            return Err(MachineError::Shape {
                what: "transition table".into(),
                expected: format!("{expected} matrices"),
                actual: format!("{} matrices", transitions.len()),
            });
        }
        for (k, m) in transitions.iter().enumerate() {
            let (x, y) = (k / outputs.len(), k % outputs.len());
            check_square(
                || format!("A({}|{})", outputs.name(y), inputs.name(x)),
                m,
                states,
            )?;
        }
        Ok(Uqsm {
            states,
            inputs,
            outputs,
            transitions,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    /// `A(y|x)` by symbol index.
    pub fn transition(&self, x: usize, y: usize) -> &Matrix<F> {
        &self.transitions[x * self.outputs.len() + y]
    }

    pub fn transitions(&self) -> &[Matrix<F>] {
        &self.transitions
    }

    pub fn check_pair(&self, pair: &IoPair) -> Result<(), MachineError> {
        self.inputs.check_word(pair.input())?;
        self.outputs.check_word(pair.output())
    }

    /// `A(v|u) = A(y₁|x₁)⋯A(y_m|x_m)`; the identity for the empty pair.
    pub fn pair_matrix(&self, pair: &IoPair) -> Result<Matrix<F>, MachineError> {
        self.check_pair(pair)?;
        Ok(pair
            .iter()
            .fold(Matrix::identity(self.states), |acc, (x, y)| {
                &acc * self.transition(x, y)
            }))
    }

    /// `‖ρ·A(v|u)‖²` for an initial row vector `ρ`.
    pub fn probability_from(
        &self,
        rho: &Matrix<F>,
        pair: &IoPair,
    ) -> Result<F::Real, MachineError> {
        if rho.rows() != 1 || rho.cols() != self.states {
            return Err(MachineError::Shape {
                what: "initial row vector".into(),
                expected: format!("1x{}", self.states),
                actual: format!("{}x{}", rho.rows(), rho.cols()),
            });
        }
        self.check_pair(pair)?;
        let psi = pair
            .iter()
            .fold(rho.clone(), |acc, (x, y)| &acc * self.transition(x, y));
        Ok(psi.norm_sq())
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with_eps(DEFAULT_EPS_RANK)
    }

    /// Checks `Σ_y A(y|x)·A(y|x)† = I` for every input symbol.
    pub fn validate_with_eps(&self, eps: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        for x in 0..self.inputs.len() {
            let mut sum = Matrix::zeros(self.states, self.states);
            for y in 0..self.outputs.len() {
                let a = self.transition(x, y);
                sum = sum
                    .checked_add(&(a * &a.adjoint()))
                    .expect("square blocks of equal size");
            }
            if !sum.is_identity(eps) {
                violations.push(Violation::at(
                    self.inputs.name(x),
                    format!("Σ_y A(y|{x})·A(y|{x})† = I", x = self.inputs.name(x)),
                ));
            }
        }
        violations
    }

    pub fn to_float(&self) -> Uqsm<Complex64> {
        Uqsm {
            states: self.states,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            transitions: self.transitions.iter().map(Matrix::to_float).collect(),
        }
    }
}

/// A quantum sequential machine with a degenerate initial distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Qsm<F> {
    machine: Uqsm<F>,
    initial: usize,
}

impl<F: Field> Qsm<F> {
    pub fn new(
        states: usize,
        initial: usize,
        inputs: Alphabet,
        outputs: Alphabet,
        transitions: Vec<Matrix<F>>,
    ) -> Result<Self, MachineError> {
        let machine = Uqsm::new(states, inputs, outputs, transitions)?;
        Qsm::from_uqsm(machine, initial)
    }

    pub fn from_uqsm(machine: Uqsm<F>, initial: usize) -> Result<Self, MachineError> {
        check_state(initial, machine.states())?;
        Ok(Qsm { machine, initial })
    }

    pub fn uqsm(&self) -> &Uqsm<F> {
        &self.machine
    }

    pub fn states(&self) -> usize {
        self.machine.states()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn inputs(&self) -> &Alphabet {
        self.machine.inputs()
    }

    pub fn outputs(&self) -> &Alphabet {
        self.machine.outputs()
    }

    pub fn transition(&self, x: usize, y: usize) -> &Matrix<F> {
        self.machine.transition(x, y)
    }

    /// The degenerate row vector `η_{i₀}`.
    pub fn initial_vector(&self) -> Matrix<F> {
        Matrix::basis_row(self.states(), self.initial)
    }

    /// `P(v|u) = ‖η_{i₀}·A(v|u)‖²`.
    pub fn probability(&self, pair: &IoPair) -> Result<F::Real, MachineError> {
        self.machine.probability_from(&self.initial_vector(), pair)
    }

    /// The same probability through the Gram form `η·A(v|u)·A(v|u)†·η†`.
    pub fn probability_gram(&self, pair: &IoPair) -> Result<F::Real, MachineError> {
        let a = self.machine.pair_matrix(pair)?;
        let d = &a * &a.adjoint();
        Ok(d[(self.initial, self.initial)].re())
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.machine.validate()
    }

    pub fn validate_with_eps(&self, eps: f64) -> Vec<Violation> {
        self.machine.validate_with_eps(eps)
    }

    pub fn to_float(&self) -> Qsm<Complex64> {
        Qsm {
            machine: self.machine.to_float(),
            initial: self.initial,
        }
    }

    /// Relabels states: new state `perm[i]` behaves like old state `i`.
    pub fn permute_states(&self, perm: &[usize]) -> Result<Qsm<F>, MachineError> {
        let n = self.states();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(MachineError::Shape {
                what: "state permutation".into(),
                expected: format!("a permutation of 0..{n}"),
                actual: format!("{perm:?}"),
            });
        }
        let transitions = self
            .machine
            .transitions()
            .iter()
            .map(|a| {
                let mut b = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        b[(perm[i], perm[j])] = a[(i, j)].clone();
                    }
                }
                b
            })
            .collect();
        Qsm::new(
            n,
            perm[self.initial],
            self.inputs().clone(),
            self.outputs().clone(),
            transitions,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactComplex, ExactReal};

    type M = Matrix<ExactComplex>;

    fn one_state(a0: M, a1: M) -> Qsm<ExactComplex> {
        Qsm::new(
            1,
            0,
            Alphabet::new(["a"]).unwrap(),
            Alphabet::new(["0", "1"]).unwrap(),
            vec![a0, a1],
        )
        .unwrap()
    }

    fn coin() -> Qsm<ExactComplex> {
        let r = M::exact_real(vec![vec![((0, 1), (1, 2))]]);
        one_state(r.clone(), r)
    }

    fn pair(u: &[usize], v: &[usize]) -> IoPair {
        IoPair::new(u.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn completeness_validation() {
        assert!(coin().validate().is_empty());
        let bad = one_state(M::identity(1), M::identity(1));
        let v = bad.validate();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].symbol.as_deref(), Some("a"));
    }

    #[test]
    fn coin_probabilities() {
        let m = coin();
        assert_eq!(
            m.probability(&IoPair::empty()).unwrap(),
            ExactReal::from_integer(1)
        );
        assert_eq!(
            m.probability(&pair(&[0], &[0])).unwrap(),
            ExactReal::from_ratios((1, 2), (0, 1))
        );
        assert_eq!(
            m.probability(&pair(&[0, 0], &[0, 1])).unwrap(),
            ExactReal::from_ratios((1, 4), (0, 1))
        );
    }

    #[test]
    fn unknown_symbols_are_rejected() {
        let m = coin();
        assert!(matches!(
            m.probability(&pair(&[1], &[0])),
            Err(MachineError::SymbolOutOfRange { index: 1, size: 1 })
        ));
    }

    #[test]
    fn uqsm_probability_with_own_initial_vector() {
        let m = coin();
        let p = pair(&[0, 0], &[1, 1]);
        assert_eq!(
            m.uqsm().probability_from(&m.initial_vector(), &p).unwrap(),
            m.probability(&p).unwrap()
        );
        assert!(m.uqsm().probability_from(&M::zeros(1, 2), &p).is_err());
    }

    #[test]
    fn structural_errors() {
        let i = M::identity(1);
        let ab = || Alphabet::new(["a"]).unwrap();
        let out = || Alphabet::new(["0", "1"]).unwrap();
        assert!(matches!(
            Qsm::new(1, 1, ab(), out(), vec![i.clone(), i.clone()]),
            Err(MachineError::StateOutOfRange { .. })
        ));
        assert!(matches!(
            Qsm::new(1, 0, ab(), out(), vec![i.clone()]),
            Err(MachineError::Shape { .. })
        ));
        assert!(matches!(
            Qsm::new(2, 0, ab(), out(), vec![i.clone(), i]),
            Err(MachineError::Shape { .. })
        ));
    }
}
