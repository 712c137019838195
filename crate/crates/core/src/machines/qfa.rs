use num_complex::Complex64;

use super::{check_square, check_state, Alphabet, MachineError, Violation};
use crate::matrix::Matrix;
use crate::scalar::{Field, RealScalar};
use crate::span::DEFAULT_EPS_RANK;

/// Right end-marker appended to every MM-1QFA and MO-g1QFA input.
pub const END_MARKER: &str = "$";

fn check_states(states: usize, indices: &[usize]) -> Result<Vec<usize>, MachineError> {
    let mut sorted = indices.to_vec();
    for &i in &sorted {
        check_state(i, states)?;
    }
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted)
}

fn check_evolutions<F: Field>(
    states: usize,
    names: &[&str],
    evolutions: &[Matrix<F>],
) -> Result<(), MachineError> {
    if evolutions.len() != names.len() {
        return Err(MachineError::Shape {
            what: "evolution matrices".into(),
            expected: format!("{} matrices", names.len()),
            actual: format!("{} matrices", evolutions.len()),
        });
    }
    for (name, m) in names.iter().zip(evolutions) {
        check_square(|| format!("U({name})"), m, states)?;
    }
    Ok(())
}

fn marked_names(alphabet: &Alphabet) -> Result<Vec<&str>, MachineError> {
    if alphabet.index_of(END_MARKER).is_some() {
        return Err(MachineError::ReservedSymbol(END_MARKER.to_string()));
    }
    let mut names: Vec<&str> = alphabet.symbols().iter().map(String::as_str).collect();
    names.push(END_MARKER);
    Ok(names)
}

fn unitarity_violations<F: Field>(
    names: &[&str],
    evolutions: &[Matrix<F>],
    eps: f64,
) -> Vec<Violation> {
    names
        .iter()
        .zip(evolutions)
        .filter(|(_, m)| !m.is_unitary(eps))
        .map(|(name, _)| Violation::at(*name, format!("U({name})·U({name})† = I")))
        .collect()
}

fn weight<F: Field>(psi: &[F], states: &[usize]) -> F::Real {
    states
        .iter()
        .fold(F::Real::zero(), |acc, &i| acc + psi[i].norm_sq())
}

fn step<F: Field>(psi: &[F], u: &Matrix<F>) -> Vec<F> {
    let row = Matrix::new(1, psi.len(), psi.to_vec()).expect("row vector");
    (&row * u).entries().to_vec()
}

// ---------------------------------------------------------------------------
// MO-1QFA
// ---------------------------------------------------------------------------

/// Measure-once one-way QFA: unitary evolutions, one measurement at the end.
#[derive(Clone, Debug, PartialEq)]
pub struct Mo1qfa<F> {
    states: usize,
    initial: usize,
    alphabet: Alphabet,
    evolutions: Vec<Matrix<F>>,
    accepting: Vec<usize>,
}

impl<F: Field> Mo1qfa<F> {
    pub fn new(
        states: usize,
        initial: usize,
        alphabet: Alphabet,
        evolutions: Vec<Matrix<F>>,
        accepting: &[usize],
    ) -> Result<Self, MachineError> {
        if states == 0 {
            return Err(MachineError::NoStates);
        }
        if alphabet.is_empty() {
            return Err(MachineError::EmptyAlphabet("alphabet"));
        }
        check_state(initial, states)?;
        let names: Vec<&str> = alphabet.symbols().iter().map(String::as_str).collect();
        check_evolutions(states, &names, &evolutions)?;
        let accepting = check_states(states, accepting)?;
        Ok(Mo1qfa {
            states,
            initial,
            alphabet,
            evolutions,
            accepting,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn evolution(&self, symbol: usize) -> &Matrix<F> {
        &self.evolutions[symbol]
    }

    pub fn evolutions(&self) -> &[Matrix<F>] {
        &self.evolutions
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    /// `P_acc = diag(p₀ … p_{n-1})` with `p_i = 1` iff `q_i` accepts.
    pub fn projector(&self) -> Matrix<F> {
        Matrix::diagonal(
            (0..self.states)
                .map(|i| {
                    if self.accepting.binary_search(&i).is_ok() {
                        F::one()
                    } else {
                        F::zero()
                    }
                })
                .collect(),
        )
    }

    /// `A(u) = A(x₁)⋯A(x_m)`.
    pub fn word_matrix(&self, word: &[usize]) -> Result<Matrix<F>, MachineError> {
        self.alphabet.check_word(word)?;
        Ok(word.iter().fold(Matrix::identity(self.states), |acc, &x| {
            &acc * &self.evolutions[x]
        }))
    }

    /// `F(u) = A(u)·P_acc·A(u)†`.
    pub fn acceptance_operator(&self, word: &[usize]) -> Result<Matrix<F>, MachineError> {
        let a = self.word_matrix(word)?;
        Ok(&(&a * &self.projector()) * &a.adjoint())
    }

    /// `‖⟨q₀|·A(u)·P_acc‖²`.
    pub fn probability(&self, word: &[usize]) -> Result<F::Real, MachineError> {
        self.probability_from(self.initial, word)
    }

    /// Acceptance probability with the machine started in `state`.
    pub fn probability_from(&self, state: usize, word: &[usize]) -> Result<F::Real, MachineError> {
        check_state(state, self.states)?;
        self.alphabet.check_word(word)?;
        let mut psi = vec![F::zero(); self.states];
        psi[state] = F::one();
        for &x in word {
            psi = step(&psi, &self.evolutions[x]);
        }
        Ok(weight(&psi, &self.accepting))
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with_eps(DEFAULT_EPS_RANK)
    }

    pub fn validate_with_eps(&self, eps: f64) -> Vec<Violation> {
        let names: Vec<&str> = self.alphabet.symbols().iter().map(String::as_str).collect();
        unitarity_violations(&names, &self.evolutions, eps)
    }

    pub fn to_float(&self) -> Mo1qfa<Complex64> {
        Mo1qfa {
            states: self.states,
            initial: self.initial,
            alphabet: self.alphabet.clone(),
            evolutions: self.evolutions.iter().map(Matrix::to_float).collect(),
            accepting: self.accepting.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// MM-1QFA
// ---------------------------------------------------------------------------

/// Cumulative outcome of an MM-1QFA run.
#[derive(Clone, Debug, PartialEq)]
pub struct MmOutcome<R> {
    pub accept: R,
    pub reject: R,
    /// Squared norm of the non-halting residue after the end-marker.
    pub residual: R,
}

/// One symbol of an MM-1QFA run.
#[derive(Clone, Debug, PartialEq)]
pub struct MmStep<F: Field> {
    /// Index into `Σ ∪ {$}`; the end-marker is `alphabet.len()`.
    pub symbol: usize,
    /// Amplitudes right after applying `U_σ`, before measuring.
    pub evolved: Vec<F>,
    pub accept_increment: F::Real,
    pub reject_increment: F::Real,
    /// Unnormalised non-halting state the computation continues with.
    pub residue: Vec<F>,
}

/// Measure-many one-way QFA with right end-marker `$`.
///
/// `evolutions[σ]` for `σ < |Σ|` is `U_σ`; `evolutions[|Σ|]` is `U_$`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mm1qfa<F> {
    states: usize,
    initial: usize,
    alphabet: Alphabet,
    evolutions: Vec<Matrix<F>>,
    accepting: Vec<usize>,
    rejecting: Vec<usize>,
}

impl<F: Field> Mm1qfa<F> {
    pub fn new(
        states: usize,
        initial: usize,
        alphabet: Alphabet,
        evolutions: Vec<Matrix<F>>,
        accepting: &[usize],
        rejecting: &[usize],
    ) -> Result<Self, MachineError> {
        if states == 0 {
            return Err(MachineError::NoStates);
        }
        if alphabet.is_empty() {
            return Err(MachineError::EmptyAlphabet("alphabet"));
        }
        check_state(initial, states)?;
        let names = marked_names(&alphabet)?;
        check_evolutions(states, &names, &evolutions)?;
        let accepting = check_states(states, accepting)?;
        let rejecting = check_states(states, rejecting)?;
        Ok(Mm1qfa {
            states,
            initial,
            alphabet,
            evolutions,
            accepting,
            rejecting,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// `Σ`, without the end-marker.
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn end_marker(&self) -> usize {
        self.alphabet.len()
    }

    pub fn evolution(&self, symbol: usize) -> &Matrix<F> {
        &self.evolutions[symbol]
    }

    pub fn evolutions(&self) -> &[Matrix<F>] {
        &self.evolutions
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    pub fn rejecting(&self) -> &[usize] {
        &self.rejecting
    }

    pub fn is_halting(&self, state: usize) -> bool {
        self.accepting.binary_search(&state).is_ok() || self.rejecting.binary_search(&state).is_ok()
    }

    /// Runs on `w$`, measuring after every symbol. Callers pass `w` without
    /// the end-marker.
    pub fn run(&self, word: &[usize]) -> Result<MmOutcome<F::Real>, MachineError> {
        let trace = self.trace(word)?;
        let mut accept = F::Real::zero();
        let mut reject = F::Real::zero();
        for s in &trace {
            accept = accept + &s.accept_increment;
            reject = reject + &s.reject_increment;
        }
        let residue = &trace.last().expect("end-marker step").residue;
        let residual = residue
            .iter()
            .fold(F::Real::zero(), |acc, x| acc + x.norm_sq());
        Ok(MmOutcome {
            accept,
            reject,
            residual,
        })
    }

    /// Per-symbol record of a run on `w$`.
    pub fn trace(&self, word: &[usize]) -> Result<Vec<MmStep<F>>, MachineError> {
        self.alphabet.check_word(word)?;
        let mut psi = vec![F::zero(); self.states];
        psi[self.initial] = F::one();
        let mut steps = Vec::with_capacity(word.len() + 1);
        for &symbol in word.iter().chain(std::iter::once(&self.end_marker())) {
            let evolved = step(&psi, &self.evolutions[symbol]);
            let accept_increment = weight(&evolved, &self.accepting);
            let reject_increment = weight(&evolved, &self.rejecting);
            let mut residue = evolved.clone();
            for (i, x) in residue.iter_mut().enumerate() {
                if self.is_halting(i) {
                    *x = F::zero();
                }
            }
            psi = residue.clone();
            steps.push(MmStep {
                symbol,
                evolved,
                accept_increment,
                reject_increment,
                residue,
            });
        }
        Ok(steps)
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.validate_with_eps(DEFAULT_EPS_RANK)
    }

    pub fn validate_with_eps(&self, eps: f64) -> Vec<Violation> {
        let names = marked_names(&self.alphabet).expect("checked at construction");
        let mut violations = unitarity_violations(&names, &self.evolutions, eps);
        if self
            .accepting
            .iter()
            .any(|q| self.rejecting.binary_search(q).is_ok())
        {
            violations.push(Violation::global("Q_acc ∩ Q_rej = ∅"));
        }
        violations
    }

    pub fn to_float(&self) -> Mm1qfa<Complex64> {
        Mm1qfa {
            states: self.states,
            initial: self.initial,
            alphabet: self.alphabet.clone(),
            evolutions: self.evolutions.iter().map(Matrix::to_float).collect(),
            accepting: self.accepting.clone(),
            rejecting: self.rejecting.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// MO-g1QFA
// ---------------------------------------------------------------------------

/// MO-1QFA-shaped machine whose evolutions need not be unitary, read with a
/// right end-marker like an MM-1QFA.
#[derive(Clone, Debug, PartialEq)]
pub struct Mog1qfa<F> {
    states: usize,
    initial: usize,
    alphabet: Alphabet,
    evolutions: Vec<Matrix<F>>,
    accepting: Vec<usize>,
}

impl<F: Field> Mog1qfa<F> {
    pub fn new(
        states: usize,
        initial: usize,
        alphabet: Alphabet,
        evolutions: Vec<Matrix<F>>,
        accepting: &[usize],
    ) -> Result<Self, MachineError> {
        if states == 0 {
            return Err(MachineError::NoStates);
        }
        if alphabet.is_empty() {
            return Err(MachineError::EmptyAlphabet("alphabet"));
        }
        check_state(initial, states)?;
        let names = marked_names(&alphabet)?;
        check_evolutions(states, &names, &evolutions)?;
        let accepting = check_states(states, accepting)?;
        Ok(Mog1qfa {
            states,
            initial,
            alphabet,
            evolutions,
            accepting,
        })
    }

    /// Wraps an MO-1QFA, using `end` as the end-marker evolution.
    pub fn from_mo1qfa(machine: &Mo1qfa<F>, end: Matrix<F>) -> Result<Self, MachineError> {
        let mut evolutions = machine.evolutions().to_vec();
        evolutions.push(end);
        Mog1qfa::new(
            machine.states(),
            machine.initial(),
            machine.alphabet().clone(),
            evolutions,
            machine.accepting(),
        )
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn end_marker(&self) -> usize {
        self.alphabet.len()
    }

    pub fn evolution(&self, symbol: usize) -> &Matrix<F> {
        &self.evolutions[symbol]
    }

    pub fn evolutions(&self) -> &[Matrix<F>] {
        &self.evolutions
    }

    pub fn accepting(&self) -> &[usize] {
        &self.accepting
    }

    /// Row vector after reading `w$` from the initial state.
    pub fn final_amplitudes(&self, word: &[usize]) -> Result<Vec<F>, MachineError> {
        self.alphabet.check_word(word)?;
        let mut psi = vec![F::zero(); self.states];
        psi[self.initial] = F::one();
        for &x in word.iter().chain(std::iter::once(&self.end_marker())) {
            psi = step(&psi, &self.evolutions[x]);
        }
        Ok(psi)
    }

    /// Squared norm of the projection of the final amplitudes onto the
    /// accepting states. Not bounded by 1 in general.
    pub fn value(&self, word: &[usize]) -> Result<F::Real, MachineError> {
        Ok(weight(&self.final_amplitudes(word)?, &self.accepting))
    }

    pub fn validate(&self) -> Vec<Violation> {
        Vec::new()
    }

    pub fn validate_with_eps(&self, _eps: f64) -> Vec<Violation> {
        Vec::new()
    }

    pub fn to_float(&self) -> Mog1qfa<Complex64> {
        Mog1qfa {
            states: self.states,
            initial: self.initial,
            alphabet: self.alphabet.clone(),
            evolutions: self.evolutions.iter().map(Matrix::to_float).collect(),
            accepting: self.accepting.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactComplex, ExactReal};

    type M = Matrix<ExactComplex>;

    fn hadamard() -> M {
        M::exact_real(vec![
            vec![((0, 1), (1, 2)), ((0, 1), (1, 2))],
            vec![((0, 1), (1, 2)), ((0, 1), (-1, 2))],
        ])
    }

    fn hadamard_qfa(accepting: &[usize]) -> Mo1qfa<ExactComplex> {
        Mo1qfa::new(
            2,
            0,
            Alphabet::new(["a"]).unwrap(),
            vec![hadamard()],
            accepting,
        )
        .unwrap()
    }

    #[test]
    fn mo1qfa_probabilities() {
        let half = ExactReal::from_ratios((1, 2), (0, 1));
        assert_eq!(hadamard_qfa(&[1]).probability(&[0]).unwrap(), half);
        assert_eq!(
            hadamard_qfa(&[0, 1]).probability(&[0, 0, 0]).unwrap(),
            ExactReal::from_integer(1)
        );
        assert_eq!(
            hadamard_qfa(&[]).probability(&[0, 0]).unwrap(),
            ExactReal::from_integer(0)
        );
        assert_eq!(
            hadamard_qfa(&[1]).probability(&[]).unwrap(),
            ExactReal::from_integer(0)
        );
        assert!(hadamard_qfa(&[1]).probability(&[1]).is_err());
    }

    #[test]
    fn acceptance_operator_matches_probability() {
        let a = hadamard_qfa(&[1]);
        for word in [vec![], vec![0], vec![0, 0]] {
            let f = a.acceptance_operator(&word).unwrap();
            assert_eq!(f[(0, 0)].re(), a.probability(&word).unwrap());
            assert!(f.is_hermitian(0.0));
            assert_eq!(&f * &f, f);
        }
    }

    #[test]
    fn unitarity_validation() {
        assert!(hadamard_qfa(&[1]).validate().is_empty());
        let scaled = hadamard().scale(&ExactComplex::from_integer(2));
        let bad = Mo1qfa::new(2, 0, Alphabet::new(["a"]).unwrap(), vec![scaled], &[0]).unwrap();
        assert_eq!(bad.validate().len(), 1);
    }

    #[test]
    fn mm1qfa_rejects_reserved_symbol_and_overlap() {
        let i = M::identity(2);
        assert!(matches!(
            Mm1qfa::new(
                2,
                0,
                Alphabet::new(["$"]).unwrap(),
                vec![i.clone(), i.clone()],
                &[],
                &[]
            ),
            Err(MachineError::ReservedSymbol(_))
        ));
        let overlap = Mm1qfa::new(
            2,
            0,
            Alphabet::new(["a"]).unwrap(),
            vec![i.clone(), i],
            &[1],
            &[1],
        )
        .unwrap();
        assert_eq!(overlap.validate().len(), 1);
    }

    #[test]
    fn mm1qfa_without_accepting_states_never_accepts() {
        let m = Mm1qfa::new(
            2,
            0,
            Alphabet::new(["a"]).unwrap(),
            vec![hadamard(), hadamard()],
            &[],
            &[1],
        )
        .unwrap();
        for w in [vec![], vec![0], vec![0, 0, 0]] {
            let out = m.run(&w).unwrap();
            assert_eq!(out.accept, ExactReal::from_integer(0));
            assert_eq!(
                out.accept + out.reject + out.residual,
                ExactReal::from_integer(1)
            );
        }
    }

    #[test]
    fn mog1qfa_with_identity_marker_matches_mo1qfa() {
        let a = hadamard_qfa(&[1]);
        let g = Mog1qfa::from_mo1qfa(&a, M::identity(2)).unwrap();
        for w in [vec![], vec![0], vec![0, 0]] {
            assert_eq!(g.value(&w).unwrap(), a.probability(&w).unwrap());
        }
        let empty = Mog1qfa::from_mo1qfa(&hadamard_qfa(&[]), M::identity(2)).unwrap();
        assert_eq!(empty.value(&[0]).unwrap(), ExactReal::from_integer(0));
    }
}
