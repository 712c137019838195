#![allow(dead_code)]

use qsm_equiv::machines::{Alphabet, IoPair, Mo1qfa, Qsm};
use qsm_equiv::matrix::Matrix;
use qsm_equiv::scalar::{ExactComplex, ExactReal};

pub type E = ExactComplex;
pub type M = Matrix<E>;

pub fn er(a: (i64, i64), b: (i64, i64)) -> ExactReal {
    ExactReal::from_ratios(a, b)
}

pub fn rat(p: i64, q: i64) -> ExactReal {
    er((p, q), (0, 1))
}

pub fn scalar(r: ((i64, i64), (i64, i64))) -> M {
    M::exact_real(vec![vec![r]])
}

pub fn io() -> (Alphabet, Alphabet) {
    (
        Alphabet::new(["a"]).unwrap(),
        Alphabet::new(["0", "1"]).unwrap(),
    )
}

pub fn one_state_qsm(a0: M, a1: M) -> Qsm<E> {
    let (i, o) = io();
    Qsm::new(1, 0, i, o, vec![a0, a1]).unwrap()
}

/// A(0|a) = A(1|a) = [1/√2].
pub fn fair_coin() -> Qsm<E> {
    let r = scalar(((0, 1), (1, 2)));
    one_state_qsm(r.clone(), r)
}

/// A(0|a) = [1], A(1|a) = [0].
pub fn always_zero() -> Qsm<E> {
    one_state_qsm(M::identity(1), M::zeros(1, 1))
}

pub fn pair(u: &[usize], v: &[usize]) -> IoPair {
    IoPair::new(u.to_vec(), v.to_vec()).unwrap()
}

pub fn hadamard() -> M {
    let s = ((0, 1), (1, 2));
    let t = ((0, 1), (-1, 2));
    M::exact_real(vec![vec![s, s], vec![s, t]])
}

/// 1-state, F = {q0}, A(a) = [1].
pub fn trivial_acceptor() -> Mo1qfa<E> {
    Mo1qfa::new(
        1,
        0,
        Alphabet::new(["a"]).unwrap(),
        vec![M::identity(1)],
        &[0],
    )
    .unwrap()
}

/// 2-state, F = {q0}, A(a) = Hadamard.
pub fn hadamard_acceptor() -> Mo1qfa<E> {
    Mo1qfa::new(2, 0, Alphabet::new(["a"]).unwrap(), vec![hadamard()], &[0]).unwrap()
}

/// All pairs of length `len` over `ni` inputs and `no` outputs, in
/// length-then-lexicographic order.
pub fn pairs_of_length(ni: usize, no: usize, len: usize) -> Vec<IoPair> {
    words_of_length(ni * no, len)
        .into_iter()
        .map(|w| {
            let (u, v) = w.iter().map(|&s| (s / no, s % no)).unzip();
            IoPair::new(u, v).unwrap()
        })
        .collect()
}

pub fn words_of_length(symbols: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..symbols).map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}
