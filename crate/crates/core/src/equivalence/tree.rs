use super::search::breadth_first_prune;
use super::{require_valid, EquivalenceError, EquivalenceOptions, Method, Verdict};
use crate::machines::{IoPair, Mo1qfa, Qsm, Uqsm};
use crate::matrix::Matrix;
use crate::scalar::{Field, RealScalar};

/// Direct sum of two QSMs with the two embedded initial vectors
/// `ρ = (η_{i₀}, 0)` and `ρ' = (0, η_{j₀})`.
#[derive(Clone, Debug)]
pub struct QsmSum<F> {
    pub machine: Uqsm<F>,
    pub rho: Matrix<F>,
    pub rho_prime: Matrix<F>,
    /// Index of the first state of the second machine.
    pub offset: usize,
}

pub fn qsm_direct_sum<F: Field>(m1: &Qsm<F>, m2: &Qsm<F>) -> Result<QsmSum<F>, EquivalenceError> {
    if m1.inputs() != m2.inputs() {
        return Err(EquivalenceError::AlphabetMismatch(format!(
            "input alphabets {:?} and {:?}",
            m1.inputs().symbols(),
            m2.inputs().symbols()
        )));
    }
    if m1.outputs() != m2.outputs() {
        return Err(EquivalenceError::AlphabetMismatch(format!(
            "output alphabets {:?} and {:?}",
            m1.outputs().symbols(),
            m2.outputs().symbols()
        )));
    }
    let n = m1.states() + m2.states();
    let transitions = m1
        .uqsm()
        .transitions()
        .iter()
        .zip(m2.uqsm().transitions())
        .map(|(a, b)| a.direct_sum(b))
        .collect();
    let machine = Uqsm::new(n, m1.inputs().clone(), m1.outputs().clone(), transitions)?;
    Ok(QsmSum {
        machine,
        rho: Matrix::basis_row(n, m1.initial()),
        rho_prime: Matrix::basis_row(n, m1.states() + m2.initial()),
        offset: m1.states(),
    })
}

struct GramNode<F> {
    gram: Matrix<F>,
    pair: IoPair,
}

/// Tree-pruning QSM equivalence.
///
/// Visits `D(v|u)` breadth-first from `D(ε|ε) = I`, children
/// `D(yv|xu) = A(y|x)·D(v|u)·A(y|x)†` for `x` then `y` in declaration order.
/// The root is expanded but not added to the basis; it always satisfies the
/// final test since both sides equal 1.
pub fn qsm_equivalence_tree<F: Field>(
    m1: &Qsm<F>,
    m2: &Qsm<F>,
    opts: &EquivalenceOptions,
) -> Result<Verdict<IoPair, F::Real>, EquivalenceError> {
    let sum = qsm_direct_sum(m1, m2)?;
    require_valid(1, m1.validate_with_eps(opts.eps_rank))?;
    require_valid(2, m2.validate_with_eps(opts.eps_rank))?;

    let machine = &sum.machine;
    let n = machine.states();
    let (ni, no) = (machine.inputs().len(), machine.outputs().len());
    let ops: Vec<(usize, usize, &Matrix<F>, Matrix<F>)> = (0..ni)
        .flat_map(|x| (0..no).map(move |y| (x, y)))
        .map(|(x, y)| {
            let a = machine.transition(x, y);
            (x, y, a, a.adjoint())
        })
        .collect();

    let root = GramNode {
        gram: Matrix::identity(n),
        pair: IoPair::empty(),
    };
    let outcome = breadth_first_prune(
        root,
        n * n,
        false,
        opts.eps_rank,
        |node: &GramNode<F>| node.gram.entries(),
        |node| {
            ops.iter()
                .map(|(x, y, a, a_dag)| GramNode {
                    gram: &(*a * &node.gram) * a_dag,
                    pair: node.pair.prepend(*x, *y),
                })
                .collect()
        },
        |_| {},
    )?;

    let i = m1.initial();
    let j = sum.offset + m2.initial();
    let basis_size = outcome.accepted.len();
    for node in outcome.accepted {
        let p1 = node.gram[(i, i)].re();
        let p2 = node.gram[(j, j)].re();
        if !p1.approx_eq(&p2, opts.eps_rank) {
            return Ok(Verdict::differ(
                Method::Tree,
                node.pair,
                (p1, p2),
                basis_size,
                outcome.nodes_visited,
            ));
        }
    }
    Ok(Verdict::equivalent(
        Method::Tree,
        basis_size,
        outcome.nodes_visited,
    ))
}

/// Direct sum of two MO-1QFAs: evolutions `A₁(x) ⊕ A₂(x)`, projector
/// `P₁ ⊕ P₂`, and the two embedded initial states.
#[derive(Clone, Debug)]
pub struct Mo1qfaSum<F> {
    pub evolutions: Vec<Matrix<F>>,
    pub projector: Matrix<F>,
    pub initial: usize,
    pub initial_prime: usize,
}

pub fn mo1qfa_direct_sum<F: Field>(
    a1: &Mo1qfa<F>,
    a2: &Mo1qfa<F>,
) -> Result<Mo1qfaSum<F>, EquivalenceError> {
    if a1.alphabet() != a2.alphabet() {
        return Err(EquivalenceError::AlphabetMismatch(format!(
            "alphabets {:?} and {:?}",
            a1.alphabet().symbols(),
            a2.alphabet().symbols()
        )));
    }
    Ok(Mo1qfaSum {
        evolutions: a1
            .evolutions()
            .iter()
            .zip(a2.evolutions())
            .map(|(a, b)| a.direct_sum(b))
            .collect(),
        projector: a1.projector().direct_sum(&a2.projector()),
        initial: a1.initial(),
        initial_prime: a1.states() + a2.initial(),
    })
}

struct AcceptNode<F> {
    op: Matrix<F>,
    word: Vec<usize>,
}

/// Tree-pruning MO-1QFA equivalence over `F(u)`, children
/// `F(xu) = A(x)·F(u)·A(x)†`. Unlike the QSM tree, the root
/// `F(ε) = P_acc` is part of the basis, since the empty word's acceptance
/// probability can differ.
pub fn mo1qfa_equivalence<F: Field>(
    a1: &Mo1qfa<F>,
    a2: &Mo1qfa<F>,
    opts: &EquivalenceOptions,
) -> Result<Verdict<Vec<usize>, F::Real>, EquivalenceError> {
    mo1qfa_equivalence_inspect(a1, a2, opts, |_, _| {})
}

/// [`mo1qfa_equivalence`] that also reports every visited node `(u, F(u))`.
pub fn mo1qfa_equivalence_inspect<F: Field>(
    a1: &Mo1qfa<F>,
    a2: &Mo1qfa<F>,
    opts: &EquivalenceOptions,
    mut inspect: impl FnMut(&[usize], &Matrix<F>),
) -> Result<Verdict<Vec<usize>, F::Real>, EquivalenceError> {
    let sum = mo1qfa_direct_sum(a1, a2)?;
    require_valid(1, a1.validate_with_eps(opts.eps_rank))?;
    require_valid(2, a2.validate_with_eps(opts.eps_rank))?;

    let n = a1.states() + a2.states();
    let ops: Vec<(usize, &Matrix<F>, Matrix<F>)> = sum
        .evolutions
        .iter()
        .enumerate()
        .map(|(x, a)| (x, a, a.adjoint()))
        .collect();
    let root = AcceptNode {
        op: sum.projector.clone(),
        word: Vec::new(),
    };
    let outcome = breadth_first_prune(
        root,
        n * n,
        true,
        opts.eps_rank,
        |node: &AcceptNode<F>| node.op.entries(),
        |node| {
            ops.iter()
                .map(|(x, a, a_dag)| {
                    let mut word = Vec::with_capacity(node.word.len() + 1);
                    word.push(*x);
                    word.extend_from_slice(&node.word);
                    AcceptNode {
                        op: &(*a * &node.op) * a_dag,
                        word,
                    }
                })
                .collect()
        },
        |node| inspect(&node.word, &node.op),
    )?;

    let (i, j) = (sum.initial, sum.initial_prime);
    let basis_size = outcome.accepted.len();
    for node in outcome.accepted {
        let p1 = node.op[(i, i)].re();
        let p2 = node.op[(j, j)].re();
        if !p1.approx_eq(&p2, opts.eps_rank) {
            return Ok(Verdict::differ(
                Method::Tree,
                node.word,
                (p1, p2),
                basis_size,
                outcome.nodes_visited,
            ));
        }
    }
    Ok(Verdict::equivalent(
        Method::Tree,
        basis_size,
        outcome.nodes_visited,
    ))
}
