use num_complex::Complex64;

use super::{check_square, Alphabet, MachineError, Violation};
use crate::matrix::Matrix;
use crate::scalar::{Backend, Field, RealScalar};
use crate::span::DEFAULT_EPS_RANK;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlmKind {
    General,
    /// Probabilistic automaton: stochastic `π` and `M(σ)`, 0/1 final vector.
    Probabilistic,
}

/// Bilinear machine computing `f(w) = π·M(w₁)⋯M(w_m)·η`.
#[derive(Clone, Debug, PartialEq)]
pub struct Blm<F> {
    kind: BlmKind,
    alphabet: Alphabet,
    initial: Matrix<F>,
    final_vector: Matrix<F>,
    matrices: Vec<Matrix<F>>,
}

impl<F: Field> Blm<F> {
    pub fn new(
        alphabet: Alphabet,
        initial: Matrix<F>,
        final_vector: Matrix<F>,
        matrices: Vec<Matrix<F>>,
    ) -> Result<Self, MachineError> {
        Blm::with_kind(BlmKind::General, alphabet, initial, final_vector, matrices)
    }

    pub fn probabilistic(
        alphabet: Alphabet,
        initial: Matrix<F>,
        final_vector: Matrix<F>,
        matrices: Vec<Matrix<F>>,
    ) -> Result<Self, MachineError> {
        Blm::with_kind(
            BlmKind::Probabilistic,
            alphabet,
            initial,
            final_vector,
            matrices,
        )
    }

    pub fn with_kind(
        kind: BlmKind,
        alphabet: Alphabet,
        initial: Matrix<F>,
        final_vector: Matrix<F>,
        matrices: Vec<Matrix<F>>,
    ) -> Result<Self, MachineError> {
        if alphabet.is_empty() {
            return Err(MachineError::EmptyAlphabet("alphabet"));
        }
        let n = initial.cols();
        if n == 0 {
            return Err(MachineError::NoStates);
        }
        if initial.rows() != 1 {
            return Err(MachineError::Shape {
                what: "initial vector".into(),
                expected: format!("1x{n}"),
                actual: format!("{}x{}", initial.rows(), initial.cols()),
            });
        }
        if final_vector.rows() != n || final_vector.cols() != 1 {
            return Err(MachineError::Shape {
                what: "final vector".into(),
                expected: format!("{n}x1"),
                actual: format!("{}x{}", final_vector.rows(), final_vector.cols()),
            });
        }
        if matrices.len() != alphabet.len() {
            return Err(MachineError::Shape {
                what: "symbol matrices".into(),
                expected: format!("{} matrices", alphabet.len()),
                actual: format!("{} matrices", matrices.len()),
            });
        }
        for (s, m) in matrices.iter().enumerate() {
            check_square(|| format!("M({})", alphabet.name(s)), m, n)?;
        }
        Ok(Blm {
            kind,
            alphabet,
            initial,
            final_vector,
            matrices,
        })
    }

    pub fn kind(&self) -> BlmKind {
        self.kind
    }

    pub fn states(&self) -> usize {
        self.initial.cols()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The row vector `π`.
    pub fn initial(&self) -> &Matrix<F> {
        &self.initial
    }

    /// The column vector `η`.
    pub fn final_vector(&self) -> &Matrix<F> {
        &self.final_vector
    }

    pub fn matrix(&self, symbol: usize) -> &Matrix<F> {
        &self.matrices[symbol]
    }

    pub fn matrices(&self) -> &[Matrix<F>] {
        &self.matrices
    }

    /// `f(w)`; for the empty word this is `π·η`.
    pub fn word_value(&self, word: &[usize]) -> Result<F, MachineError> {
        self.alphabet.check_word(word)?;
        let row = word
            .iter()
            .fold(self.initial.clone(), |acc, &s| &acc * &self.matrices[s]);
        Ok((&row * &self.final_vector)[(0, 0)].clone())
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with_eps(DEFAULT_EPS_RANK)
    }

    /// General BLMs only need dimensional conformance, which construction
    /// already enforces. PAs are additionally checked for stochasticity.
    pub fn validate_with_eps(&self, eps: f64) -> Vec<Violation> {
        let mut violations = Vec::new();
        if self.kind == BlmKind::General {
            return violations;
        }
        if !is_stochastic_row(self.initial.row(0), eps) {
            violations.push(Violation::global("π is a stochastic vector"));
        }
        let zero = F::zero();
        let one = F::one();
        if !self
            .final_vector
            .entries()
            .iter()
            .all(|x| x.approx_eq(&zero, eps) || x.approx_eq(&one, eps))
        {
            violations.push(Violation::global("η has 0/1 entries"));
        }
        for (s, m) in self.matrices.iter().enumerate() {
            if !(0..m.rows()).all(|i| is_stochastic_row(m.row(i), eps)) {
                violations.push(Violation::at(
                    self.alphabet.name(s),
                    format!("M({}) is stochastic", self.alphabet.name(s)),
                ));
            }
        }
        violations
    }

    pub fn to_float(&self) -> Blm<Complex64> {
        Blm {
            kind: self.kind,
            alphabet: self.alphabet.clone(),
            initial: self.initial.to_float(),
            final_vector: self.final_vector.to_float(),
            matrices: self.matrices.iter().map(Matrix::to_float).collect(),
        }
    }
}

fn is_stochastic_row<F: Field>(row: &[F], eps: f64) -> bool {
    let zero = F::Real::zero();
    let nonnegative_real = row.iter().all(|x| {
        let re = x.re();
        let nonnegative = match F::BACKEND {
            Backend::Exact => re >= zero,
            Backend::Float => re.to_f64() >= -eps,
        };
        nonnegative && x.im().approx_eq(&zero, eps)
    });
    let sum = row.iter().fold(F::zero(), |acc, x| acc + x);
    nonnegative_real && sum.approx_eq(&F::one(), eps)
}
