//! Exhaustive comparison on all words up to a length bound. Words are
//! visited by length, then lexicographically by symbol index, so the first
//! difference found is a shortest one.

use super::{EquivalenceError, EquivalenceOptions, Method, Verdict};
use crate::machines::{Blm, IoPair, Mo1qfa, Qsm};
use crate::matrix::Matrix;
use crate::scalar::{Field, RealScalar};

/// Largest `symbols^k` the oracle agrees to enumerate.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

fn check_budget(symbols: usize, k: usize) -> Result<(), EquivalenceError> {
    let required = u32::try_from(k)
        .ok()
        .and_then(|k| (symbols as u128).checked_pow(k))
        .unwrap_or(u128::MAX);
    if required > ENUMERATION_BUDGET {
        return Err(EquivalenceError::BudgetExceeded {
            required,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

/// Calls `check(word, state)` for every word of length `min_len..=max_len`
/// until it returns `Some`. States are propagated along a prefix stack, so
/// each word costs one `step` amortised.
fn enumerate<S: Clone, R>(
    symbols: usize,
    min_len: usize,
    max_len: usize,
    root: &S,
    step: impl Fn(&S, usize) -> S,
    mut check: impl FnMut(&[usize], &S) -> Option<R>,
) -> (Option<(Vec<usize>, R)>, usize) {
    let mut visited = 0;
    for len in min_len..=max_len {
        let mut word = vec![0; len];
        // stack[d] is the state after the first d symbols of `word`.
        let mut stack = vec![root.clone()];
        for d in 0..len {
            let next = step(&stack[d], word[d]);
            stack.push(next);
        }
        loop {
            visited += 1;
            if let Some(r) = check(&word, &stack[len]) {
                return (Some((word, r)), visited);
            }
            let mut d = len;
            while d > 0 && word[d - 1] + 1 == symbols {
                d -= 1;
            }
            if d == 0 {
                break;
            }
            word[d - 1] += 1;
            word[d..].fill(0);
            stack.truncate(d);
            for i in d - 1..len {
                let next = step(&stack[i], word[i]);
                stack.push(next);
            }
        }
    }
    (None, visited)
}

fn verdict<W, V>(found: Option<(W, (V, V))>, visited: usize) -> Verdict<W, V> {
    match found {
        Some((w, values)) => Verdict::differ(Method::Oracle, w, values, 0, visited),
        None => Verdict::equivalent(Method::Oracle, 0, visited),
    }
}

fn same_alphabets(ok: bool, what: impl FnOnce() -> String) -> Result<(), EquivalenceError> {
    if ok {
        Ok(())
    } else {
        Err(EquivalenceError::AlphabetMismatch(what()))
    }
}

/// Compares `P(v|u)` on every pair with `1 ≤ |u| ≤ k`. The empty pair is
/// skipped since its probability is 1 for every machine.
pub fn brute_force_qsm<F: Field>(
    m1: &Qsm<F>,
    m2: &Qsm<F>,
    k: usize,
    opts: &EquivalenceOptions,
) -> Result<Verdict<IoPair, F::Real>, EquivalenceError> {
    same_alphabets(
        m1.inputs() == m2.inputs() && m1.outputs() == m2.outputs(),
        || "QSM input/output alphabets differ".into(),
    )?;
    let no = m1.outputs().len();
    let symbols = m1.inputs().len() * no;
    check_budget(symbols, k)?;

    let step = |(r1, r2): &(Matrix<F>, Matrix<F>), s: usize| {
        let (x, y) = (s / no, s % no);
        (r1 * m1.transition(x, y), r2 * m2.transition(x, y))
    };
    let root = (m1.initial_vector(), m2.initial_vector());
    let (found, visited) = enumerate(symbols, 1, k, &root, step, |_, (r1, r2)| {
        let (p1, p2) = (r1.norm_sq(), r2.norm_sq());
        (!p1.approx_eq(&p2, opts.eps_rank)).then_some((p1, p2))
    });
    let found = found.map(|(word, values)| {
        let (input, output) = word.iter().map(|&s| (s / no, s % no)).unzip();
        (IoPair::new(input, output).expect("equal lengths"), values)
    });
    Ok(verdict(found, visited))
}

/// Compares acceptance probabilities on every word with `|w| ≤ k`.
pub fn brute_force_mo1qfa<F: Field>(
    a1: &Mo1qfa<F>,
    a2: &Mo1qfa<F>,
    k: usize,
    opts: &EquivalenceOptions,
) -> Result<Verdict<Vec<usize>, F::Real>, EquivalenceError> {
    same_alphabets(a1.alphabet() == a2.alphabet(), || {
        "MO-1QFA alphabets differ".into()
    })?;
    check_budget(a1.alphabet().len(), k)?;

    let accepted = |a: &Mo1qfa<F>, row: &Matrix<F>| {
        a.accepting()
            .iter()
            .fold(F::zero(), |acc, &q| {
                acc + F::from_real(row[(0, q)].norm_sq())
            })
            .re()
    };
    let step =
        |(r1, r2): &(Matrix<F>, Matrix<F>), s: usize| (r1 * a1.evolution(s), r2 * a2.evolution(s));
    let root = (
        Matrix::basis_row(a1.states(), a1.initial()),
        Matrix::basis_row(a2.states(), a2.initial()),
    );
    let (found, visited) = enumerate(a1.alphabet().len(), 0, k, &root, step, |_, (r1, r2)| {
        let (p1, p2) = (accepted(a1, r1), accepted(a2, r2));
        (!p1.approx_eq(&p2, opts.eps_rank)).then_some((p1, p2))
    });
    Ok(verdict(found, visited))
}

/// Compares `f(w)` on every word with `|w| ≤ k`.
pub fn brute_force_blm<F: Field>(
    b1: &Blm<F>,
    b2: &Blm<F>,
    k: usize,
    opts: &EquivalenceOptions,
) -> Result<Verdict<Vec<usize>, F>, EquivalenceError> {
    same_alphabets(b1.alphabet() == b2.alphabet(), || {
        "BLM alphabets differ".into()
    })?;
    check_budget(b1.alphabet().len(), k)?;

    let step = |(r1, r2): &(Matrix<F>, Matrix<F>), s: usize| (r1 * b1.matrix(s), r2 * b2.matrix(s));
    let root = (b1.initial().clone(), b2.initial().clone());
    let (found, visited) = enumerate(b1.alphabet().len(), 0, k, &root, step, |_, (r1, r2)| {
        let f1 = (r1 * b1.final_vector())[(0, 0)].clone();
        let f2 = (r2 * b2.final_vector())[(0, 0)].clone();
        (!f1.approx_eq(&f2, opts.eps_rank)).then_some((f1, f2))
    });
    Ok(verdict(found, visited))
}
