//! Random machines with entries in `ℚ(√2, i)`, for property tests and
//! benchmarks.
//!
//! Unitaries are products of a phased permutation (phases are eighth roots of
//! unity) and a few two-level rotations drawn from a fixed set whose entries
//! stay in the field. Equivalent pairs come from transformations that provably
//! preserve every probability: state relabelling, a unitary gauge that fixes
//! the initial state, and padding with an unreachable block.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::machines::{Alphabet, Mm1qfa, Mo1qfa, Qsm};
use crate::matrix::Matrix;
use crate::scalar::{ExactComplex, ExactReal, Field};

type E = ExactComplex;

fn real(p: i64, q: i64) -> E {
    E::from_ratios((p, q), (0, 1))
}

/// `e^{iπk/4}`.
fn eighth_root(k: usize) -> E {
    let s = ExactReal::from_ratios((0, 1), (1, 2));
    let z = ExactReal::from_integer(0);
    let one = ExactReal::from_integer(1);
    let (re, im) = match k % 8 {
        0 => (one, z),
        1 => (s.clone(), s),
        2 => (z, one),
        3 => (-s.clone(), s),
        4 => (-one, z),
        5 => (-s.clone(), -s),
        6 => (z, -one),
        _ => (s.clone(), -s),
    };
    E::new(re, im)
}

/// A 2×2 unitary `[[a, b], [c, d]]` from the fixed rotation set.
fn rotation<R: Rng + ?Sized>(rng: &mut R) -> [E; 4] {
    let s = E::inv_sqrt2();
    match rng.gen_range(0..3) {
        0 => [s.clone(), s.clone(), s.clone(), -s],
        1 => [real(3, 5), real(-4, 5), real(4, 5), real(3, 5)],
        _ => {
            let is = E::i() * &s;
            [s.clone(), is.clone(), is, s]
        }
    }
}

pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random `n×n` unitary with `rotations` two-level factors.
pub fn exact_unitary_with<R: Rng + ?Sized>(n: usize, rotations: usize, rng: &mut R) -> Matrix<E> {
    let perm = permutation(n, rng);
    let mut u = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        u[(i, j)] = eighth_root(rng.gen_range(0..8));
    }
    if n < 2 {
        return u;
    }
    for _ in 0..rotations {
        let j = rng.gen_range(0..n);
        let k = (j + rng.gen_range(1..n)) % n;
        let [a, b, c, d] = rotation(rng);
        for r in 0..n {
            let (x, y) = (u[(r, j)].clone(), u[(r, k)].clone());
            u[(r, j)] = x.clone() * &a + &(y.clone() * &c);
            u[(r, k)] = x * &b + &(y * &d);
        }
    }
    u
}

/// Random `n×n` unitary with `n` rotations.
pub fn exact_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix<E> {
    exact_unitary_with(n, n, rng)
}

fn block<F: Field>(m: &Matrix<F>, rows: Range<usize>, cols: Range<usize>) -> Matrix<F> {
    let (r, c) = (rows.len(), cols.len());
    let data = rows
        .flat_map(|i| cols.clone().map(move |j| (i, j)))
        .map(|(i, j)| m[(i, j)].clone())
        .collect();
    Matrix::new(r, c, data).expect("block fits")
}

/// Random QSM. For each input `x` the blocks `A(y|x)` are the first `n`
/// rows of a random `n|O| × n|O|` unitary, so `Σ_y A(y|x)·A(y|x)† = I`
/// holds by construction.
pub fn exact_qsm<R: Rng + ?Sized>(
    n: usize,
    inputs: &Alphabet,
    outputs: &Alphabet,
    rng: &mut R,
) -> Qsm<E> {
    let no = outputs.len();
    let mut transitions = Vec::with_capacity(inputs.len() * no);
    for _ in 0..inputs.len() {
        let u = exact_unitary(n * no, rng);
        for y in 0..no {
            transitions.push(block(&u, 0..n, y * n..(y + 1) * n));
        }
    }
    Qsm::new(
        n,
        rng.gen_range(0..n),
        inputs.clone(),
        outputs.clone(),
        transitions,
    )
    .expect("dimensions match")
}

/// Unitary `V` acting as the identity on `fixed` and as a random unitary on
/// the remaining states.
fn gauge<R: Rng + ?Sized>(n: usize, fixed: usize, rng: &mut R) -> Matrix<E> {
    let w = exact_unitary(n - 1, rng);
    let others: Vec<usize> = (0..n).filter(|&q| q != fixed).collect();
    let mut v = Matrix::zeros(n, n);
    v[(fixed, fixed)] = E::from_integer(1);
    for (a, &i) in others.iter().enumerate() {
        for (b, &j) in others.iter().enumerate() {
            v[(i, j)] = w[(a, b)].clone();
        }
    }
    v
}

/// `A'(y|x) = V†·A(y|x)·V` with `V` fixing the initial state. Equivalent to
/// `m` since `η_{i₀}·V† = η_{i₀}` and `V` preserves norms.
pub fn gauge_qsm<R: Rng + ?Sized>(m: &Qsm<E>, rng: &mut R) -> Qsm<E> {
    let n = m.states();
    if n == 1 {
        return m.clone();
    }
    let v = gauge(n, m.initial(), rng);
    let v_dag = v.adjoint();
    let transitions = m
        .uqsm()
        .transitions()
        .iter()
        .map(|a| &(&v_dag * a) * &v)
        .collect();
    Qsm::new(
        n,
        m.initial(),
        m.inputs().clone(),
        m.outputs().clone(),
        transitions,
    )
    .expect("same shape")
}

/// `A(y|x) ⊕ B(y|x)` with the initial state in the first block. The second
/// block is unreachable, so the result is equivalent to `m`.
pub fn pad_qsm<F: Field>(m: &Qsm<F>, extra: &Qsm<F>) -> Qsm<F> {
    let transitions = m
        .uqsm()
        .transitions()
        .iter()
        .zip(extra.uqsm().transitions())
        .map(|(a, b)| a.direct_sum(b))
        .collect();
    Qsm::new(
        m.states() + extra.states(),
        m.initial(),
        m.inputs().clone(),
        m.outputs().clone(),
        transitions,
    )
    .expect("alphabets match")
}

/// Random MO-1QFA; each state accepts with probability 1/2.
pub fn exact_mo1qfa<R: Rng + ?Sized>(n: usize, alphabet: &Alphabet, rng: &mut R) -> Mo1qfa<E> {
    let evolutions = (0..alphabet.len()).map(|_| exact_unitary(n, rng)).collect();
    let accepting: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    Mo1qfa::new(
        n,
        rng.gen_range(0..n),
        alphabet.clone(),
        evolutions,
        &accepting,
    )
    .expect("dimensions match")
}

/// Relabels states: new state `perm[i]` behaves like old state `i`.
pub fn permute_mo1qfa<F: Field>(a: &Mo1qfa<F>, perm: &[usize]) -> Mo1qfa<F> {
    let n = a.states();
    let evolutions = a
        .evolutions()
        .iter()
        .map(|u| {
            let mut v = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    v[(perm[i], perm[j])] = u[(i, j)].clone();
                }
            }
            v
        })
        .collect();
    let accepting: Vec<usize> = a.accepting().iter().map(|&q| perm[q]).collect();
    Mo1qfa::new(
        n,
        perm[a.initial()],
        a.alphabet().clone(),
        evolutions,
        &accepting,
    )
    .expect("perm is a permutation")
}

/// `A'(x) = D†·A(x)·D` for a random diagonal phase matrix `D`, which
/// commutes with the accepting projector.
pub fn phase_gauge_mo1qfa<R: Rng + ?Sized>(a: &Mo1qfa<E>, rng: &mut R) -> Mo1qfa<E> {
    let d = Matrix::diagonal(
        (0..a.states())
            .map(|_| eighth_root(rng.gen_range(0..8)))
            .collect(),
    );
    let d_dag = d.adjoint();
    let evolutions = a.evolutions().iter().map(|u| &(&d_dag * u) * &d).collect();
    Mo1qfa::new(
        a.states(),
        a.initial(),
        a.alphabet().clone(),
        evolutions,
        a.accepting(),
    )
    .expect("same shape")
}

/// `A(x) ⊕ B(x)` with accepting set `F_A ∪ F_B` and the initial state in
/// the first block.
pub fn pad_mo1qfa<F: Field>(a: &Mo1qfa<F>, extra: &Mo1qfa<F>) -> Mo1qfa<F> {
    let evolutions = a
        .evolutions()
        .iter()
        .zip(extra.evolutions())
        .map(|(u, v)| u.direct_sum(v))
        .collect();
    let accepting: Vec<usize> = a
        .accepting()
        .iter()
        .copied()
        .chain(extra.accepting().iter().map(|&q| q + a.states()))
        .collect();
    Mo1qfa::new(
        a.states() + extra.states(),
        a.initial(),
        a.alphabet().clone(),
        evolutions,
        &accepting,
    )
    .expect("alphabets match")
}

/// Random MM-1QFA with initial state 0. Every other state is independently
/// accepting, rejecting or non-halting.
pub fn exact_mm1qfa<R: Rng + ?Sized>(n: usize, alphabet: &Alphabet, rng: &mut R) -> Mm1qfa<E> {
    let evolutions = (0..=alphabet.len())
        .map(|_| exact_unitary(n, rng))
        .collect();
    let (mut accepting, mut rejecting) = (Vec::new(), Vec::new());
    for q in 1..n {
        match rng.gen_range(0..3) {
            0 => accepting.push(q),
            1 => rejecting.push(q),
            _ => {}
        }
    }
    Mm1qfa::new(n, 0, alphabet.clone(), evolutions, &accepting, &rejecting)
        .expect("dimensions match")
}
