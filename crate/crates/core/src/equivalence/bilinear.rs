use super::search::breadth_first_prune;
use super::{require_valid, EquivalenceError, EquivalenceOptions, Method, Verdict};
use crate::machines::{Alphabet, Blm, IoPair, Qsm};
use crate::matrix::Matrix;
use crate::scalar::Field;

/// Maps a QSM with `n` states to an `n²`-state BLM over the pair alphabet
/// `{(y|x)}` such that `f(w) = P(v|u)` for the pair spelled by `w`.
///
/// `π = e_{i₀} ⊗ e_{i₀}`, `M((y|x)) = A(y|x) ⊗ conj(A(y|x))` and
/// `η = Σ_j e_j ⊗ e_j`. Pair symbols are ordered input-major, so symbol
/// `k` stands for `(k mod |O| | k div |O|)`.
pub fn bilinearize<F: Field>(m: &Qsm<F>) -> Blm<F> {
    let n = m.states();
    let (inputs, outputs) = (m.inputs(), m.outputs());
    let pairs: Vec<(usize, usize)> = (0..inputs.len())
        .flat_map(|x| (0..outputs.len()).map(move |y| (x, y)))
        .collect();

    let named = pairs
        .iter()
        .map(|&(x, y)| format!("({}|{})", outputs.name(y), inputs.name(x)));
    let alphabet = Alphabet::new(named).unwrap_or_else(|_| {
        // Symbol names containing '|' or parentheses can collide; fall back
        // to positional names.
        Alphabet::new(pairs.iter().map(|&(x, y)| format!("(y{y}|x{x})")))
            .expect("positional pair names are distinct")
    });

    let e = Matrix::<F>::basis_row(n, m.initial());
    let initial = e.kron(&e);
    let mut final_vector = Matrix::zeros(n * n, 1);
    for j in 0..n {
        final_vector[(j * n + j, 0)] = F::one();
    }
    let matrices = pairs
        .iter()
        .map(|&(x, y)| {
            let a = m.transition(x, y);
            a.kron(&a.conj())
        })
        .collect();
    Blm::new(alphabet, initial, final_vector, matrices)
        .expect("bilinearization preserves dimensions")
}

struct RowNode<F> {
    row: Vec<F>,
    word: Vec<usize>,
}

/// BLM equivalence by breadth-first search over the reachable row vectors
/// `(π₁·M₁(w), π₂·M₂(w))`, children appending one symbol. The root `w = ε`
/// is part of the basis. Machines agree everywhere iff every kept vector
/// `v` satisfies `v·(η₁; −η₂) = 0`.
pub fn blm_equivalence<F: Field>(
    b1: &Blm<F>,
    b2: &Blm<F>,
    opts: &EquivalenceOptions,
) -> Result<Verdict<Vec<usize>, F>, EquivalenceError> {
    if b1.alphabet() != b2.alphabet() {
        return Err(EquivalenceError::AlphabetMismatch(format!(
            "alphabets {:?} and {:?}",
            b1.alphabet().symbols(),
            b2.alphabet().symbols()
        )));
    }
    require_valid(1, b1.validate_with_eps(opts.eps_rank))?;
    require_valid(2, b2.validate_with_eps(opts.eps_rank))?;

    let n1 = b1.states();
    let dim = n1 + b2.states();
    let sums: Vec<Matrix<F>> = b1
        .matrices()
        .iter()
        .zip(b2.matrices())
        .map(|(a, b)| a.direct_sum(b))
        .collect();
    let root = RowNode {
        row: [b1.initial().entries(), b2.initial().entries()].concat(),
        word: Vec::new(),
    };
    let outcome = breadth_first_prune(
        root,
        dim,
        true,
        opts.eps_rank,
        |node: &RowNode<F>| node.row.as_slice(),
        |node| {
            let v = Matrix::new(1, dim, node.row.clone()).expect("row has the sum dimension");
            sums.iter()
                .enumerate()
                .map(|(s, m)| {
                    let mut word = node.word.clone();
                    word.push(s);
                    RowNode {
                        row: (&v * m).entries().to_vec(),
                        word,
                    }
                })
                .collect()
        },
        |_| {},
    )?;

    let eta1 = b1.final_vector().entries();
    let eta2 = b2.final_vector().entries();
    let basis_size = outcome.accepted.len();
    for node in outcome.accepted {
        let f1 = dot(&node.row[..n1], eta1);
        let f2 = dot(&node.row[n1..], eta2);
        if !f1.approx_eq(&f2, opts.eps_rank) {
            return Ok(Verdict::differ(
                Method::Bilinear,
                node.word,
                (f1, f2),
                basis_size,
                outcome.nodes_visited,
            ));
        }
    }
    Ok(Verdict::equivalent(
        Method::Bilinear,
        basis_size,
        outcome.nodes_visited,
    ))
}

fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |acc, (x, y)| acc + &(x.clone() * y))
}

/// QSM equivalence through [`bilinearize`] and [`blm_equivalence`]. The
/// witness is translated back to an input/output pair.
pub fn qsm_equivalence_bilinear<F: Field>(
    m1: &Qsm<F>,
    m2: &Qsm<F>,
    opts: &EquivalenceOptions,
) -> Result<Verdict<IoPair, F::Real>, EquivalenceError> {
    if m1.inputs() != m2.inputs() || m1.outputs() != m2.outputs() {
        return Err(EquivalenceError::AlphabetMismatch(format!(
            "{:?}/{:?} and {:?}/{:?}",
            m1.inputs().symbols(),
            m1.outputs().symbols(),
            m2.inputs().symbols(),
            m2.outputs().symbols()
        )));
    }
    require_valid(1, m1.validate_with_eps(opts.eps_rank))?;
    require_valid(2, m2.validate_with_eps(opts.eps_rank))?;

    let verdict = blm_equivalence(&bilinearize(m1), &bilinearize(m2), opts)?;
    let no = m1.outputs().len();
    let witness = verdict.witness.map(|word| {
        let (input, output) = word.iter().map(|&k| (k / no, k % no)).unzip();
        IoPair::new(input, output).expect("pair halves have equal length")
    });
    Ok(Verdict {
        equivalent: verdict.equivalent,
        witness,
        values: verdict.values.map(|(a, b)| (a.re(), b.re())),
        method: Method::Bilinear,
        basis_size: verdict.basis_size,
        nodes_visited: verdict.nodes_visited,
    })
}
