//! Acceptance suite. Prints one PASS/FAIL line per criterion to stderr,
//! bypassing the test harness's output capture.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{io, pairs_of_length, words_of_length, E};
use qsm_equiv::equivalence::{
    bilinearize, brute_force_mo1qfa, brute_force_qsm, mo1qfa_equivalence,
    mo1qfa_equivalence_inspect, qsm_equivalence_bilinear, qsm_equivalence_tree, EquivalenceOptions,
};
use qsm_equiv::machines::{Alphabet, Mm1qfa, Mo1qfa, Qsm};
use qsm_equiv::mm_analysis::{example_mm1qfa, example_mm1qfa_alternate, koshiba_construct};
use qsm_equiv::random;
use qsm_equiv::scalar::{ExactReal, Field, RealScalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const QSM_PAIRS: usize = 200;
const MO1QFA_PAIRS: usize = 100;
const ORACLE_DEPTH: usize = 4;
const CONSERVATION_LENGTH: usize = 6;
const BILINEAR_LENGTH: usize = 4;

type Outcome = Result<String, String>;

fn opts() -> EquivalenceOptions {
    EquivalenceOptions::default()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

/// Random exact QSM pairs with n1, n2 in {1,2,3}: mostly independent draws,
/// plus equivalent pairs built by gauge transformation and padding.
fn qsm_corpus() -> Vec<(Qsm<E>, Qsm<E>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157);
    let (i, o) = io();
    let mut corpus = Vec::with_capacity(QSM_PAIRS);
    while corpus.len() < QSM_PAIRS {
        let n1 = rng.gen_range(1..=3);
        let m1 = random::exact_qsm(n1, &i, &o, &mut rng);
        let m2 = match corpus.len() % 4 {
            0 => random::gauge_qsm(&m1, &mut rng),
            1 if n1 < 3 => {
                let extra = random::exact_qsm(3 - n1, &i, &o, &mut rng);
                random::pad_qsm(&random::gauge_qsm(&m1, &mut rng), &extra)
            }
            _ => random::exact_qsm(rng.gen_range(1..=3), &i, &o, &mut rng),
        };
        corpus.push((m1, m2));
    }
    corpus
}

fn mo1qfa_corpus() -> Vec<(Mo1qfa<E>, Mo1qfa<E>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d4f);
    let sigma = Alphabet::new(["a", "b"]).unwrap();
    let mut corpus = Vec::with_capacity(MO1QFA_PAIRS);
    while corpus.len() < MO1QFA_PAIRS {
        let n1 = rng.gen_range(1..=3);
        let a1 = random::exact_mo1qfa(n1, &sigma, &mut rng);
        let a2 = match corpus.len() % 4 {
            0 => {
                let p = random::permute_mo1qfa(&a1, &random::permutation(n1, &mut rng));
                random::phase_gauge_mo1qfa(&p, &mut rng)
            }
            1 if n1 < 3 => random::pad_mo1qfa(&a1, &random::exact_mo1qfa(1, &sigma, &mut rng)),
            _ => random::exact_mo1qfa(rng.gen_range(1..=3), &sigma, &mut rng),
        };
        corpus.push((a1, a2));
    }
    corpus
}

fn counterexample() -> Outcome {
    let start = Instant::now();
    let m = example_mm1qfa();
    let word = m.alphabet().parse_word("aa").map_err(|e| e.to_string())?;
    let p_acc = m.run(&word).map_err(|e| e.to_string())?.accept;
    let g = koshiba_construct(&m).map_err(|e| e.to_string())?;
    let value = g.value(&word).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let expected_acc = ExactReal::from_ratios((5, 8), (1, 4));
    let expected_value = ExactReal::from_ratios((7, 8), (1, 2));
    check(p_acc == expected_acc, || {
        format!("p_acc(aa) = {}", p_acc.pretty())
    })?;
    check(value == expected_value, || {
        format!("constructed value {}", value.pretty())
    })?;
    check(p_acc != value, || "values coincide".into())?;
    check(value > ExactReal::one(), || {
        "constructed value is at most 1".into()
    })?;
    within(elapsed, Duration::from_millis(10), "counterexample")?;
    Ok(format!(
        "p_acc = {}, constructed = {}, {elapsed:?}",
        p_acc.pretty(),
        value.pretty()
    ))
}

struct QsmRun {
    equivalent: (bool, bool),
    witnesses: (Option<usize>, Option<usize>),
}

fn witness_bounds(corpus: &[(Qsm<E>, Qsm<E>)]) -> (Outcome, Vec<QsmRun>) {
    let mut runs = Vec::new();
    let mut elapsed = Duration::ZERO;
    let mut inequivalent = 0;
    let outcome = (|| {
        for (k, (m1, m2)) in corpus.iter().enumerate() {
            let (n1, n2) = (m1.states(), m2.states());
            let start = Instant::now();
            let t = qsm_equivalence_tree(m1, m2, &opts()).map_err(|e| e.to_string())?;
            let b = qsm_equivalence_bilinear(m1, m2, &opts()).map_err(|e| e.to_string())?;
            elapsed += start.elapsed();

            let tree_bound = (n1 + n2).pow(2);
            let bilinear_basis = n1 * n1 + n2 * n2;
            check(t.basis_size <= tree_bound, || {
                format!("pair {k}: tree basis {} > {tree_bound}", t.basis_size)
            })?;
            check(b.basis_size <= bilinear_basis, || {
                format!(
                    "pair {k}: bilinear basis {} > {bilinear_basis}",
                    b.basis_size
                )
            })?;
            if let Some(w) = &t.witness {
                check(w.len() <= tree_bound, || {
                    format!("pair {k}: tree witness length {}", w.len())
                })?;
            }
            if let Some(w) = &b.witness {
                check(w.len() < bilinear_basis, || {
                    format!("pair {k}: bilinear witness length {}", w.len())
                })?;
            }
            if !t.equivalent {
                inequivalent += 1;
            }
            runs.push(QsmRun {
                equivalent: (t.equivalent, b.equivalent),
                witnesses: (
                    t.witness.as_ref().map(|w| w.len()),
                    b.witness.as_ref().map(|w| w.len()),
                ),
            });
        }
        within(
            elapsed,
            Duration::from_secs(30),
            "tree + bilinear over the corpus",
        )?;
        Ok(format!(
            "{} pairs ({inequivalent} inequivalent), {elapsed:?}",
            corpus.len()
        ))
    })();
    (outcome, runs)
}

fn oracle_agreement(corpus: &[(Qsm<E>, Qsm<E>)], runs: &[QsmRun]) -> Outcome {
    check(runs.len() == corpus.len(), || {
        "corpus did not complete".into()
    })?;
    let mut mismatches = 0;
    for (k, ((m1, m2), run)) in corpus.iter().zip(runs).enumerate() {
        let oracle = brute_force_qsm(m1, m2, ORACLE_DEPTH, &opts()).map_err(|e| e.to_string())?;
        let (tree, bilinear) = run.equivalent;
        if !oracle.equivalent {
            mismatches += 1;
            check(!tree && !bilinear, || {
                format!("pair {k}: oracle mismatch but tree={tree}, bilinear={bilinear}")
            })?;
        }
        if tree || bilinear {
            check(oracle.equivalent, || {
                format!("pair {k}: reported equivalent, oracle disagrees")
            })?;
        }
        check(tree == bilinear, || {
            format!("pair {k}: tree={tree}, bilinear={bilinear}")
        })?;
        // A witness within the oracle's depth must be seen by the oracle too.
        for len in [run.witnesses.0, run.witnesses.1].into_iter().flatten() {
            check(len > ORACLE_DEPTH || !oracle.equivalent, || {
                format!("pair {k}: short witness missed by oracle")
            })?;
        }
    }
    Ok(format!(
        "{} pairs, {mismatches} with a mismatch at depth ≤ {ORACLE_DEPTH}",
        corpus.len()
    ))
}

fn witness_soundness(qsms: &[(Qsm<E>, Qsm<E>)], qfas: &[(Mo1qfa<E>, Mo1qfa<E>)]) -> Outcome {
    let mut checked = 0;
    for (k, (m1, m2)) in qsms.iter().enumerate() {
        for v in [
            qsm_equivalence_tree(m1, m2, &opts()).map_err(|e| e.to_string())?,
            qsm_equivalence_bilinear(m1, m2, &opts()).map_err(|e| e.to_string())?,
        ] {
            if v.equivalent {
                continue;
            }
            let w = v.witness.as_ref().ok_or(format!("pair {k}: no witness"))?;
            let p1 = m1.probability(w).map_err(|e| e.to_string())?;
            let p2 = m2.probability(w).map_err(|e| e.to_string())?;
            check(p1 != p2, || {
                format!("QSM pair {k}: witness gives equal probabilities")
            })?;
            check(v.values == Some((p1, p2)), || {
                format!("QSM pair {k}: reported values differ from simulation")
            })?;
            checked += 1;
        }
    }
    for (k, (a1, a2)) in qfas.iter().enumerate() {
        let v = mo1qfa_equivalence(a1, a2, &opts()).map_err(|e| e.to_string())?;
        if let Some(w) = &v.witness {
            let p1 = a1.probability(w).map_err(|e| e.to_string())?;
            let p2 = a2.probability(w).map_err(|e| e.to_string())?;
            check(p1 != p2, || {
                format!("MO-1QFA pair {k}: witness gives equal probabilities")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} witnesses replayed"))
}

fn mo1qfa_suite(corpus: &[(Mo1qfa<E>, Mo1qfa<E>)]) -> Outcome {
    let mut nodes = 0;
    let mut equivalent = 0;
    for (k, (a1, a2)) in corpus.iter().enumerate() {
        let mut bad = None;
        let v = mo1qfa_equivalence_inspect(a1, a2, &opts(), |word, f| {
            nodes += 1;
            if bad.is_none() && (&(f * f) != f || &f.adjoint() != f) {
                bad = Some(word.to_vec());
            }
        })
        .map_err(|e| e.to_string())?;
        check(bad.is_none(), || {
            format!("pair {k}: F({bad:?}) is not an exact orthogonal projector")
        })?;
        let oracle =
            brute_force_mo1qfa(a1, a2, ORACLE_DEPTH, &opts()).map_err(|e| e.to_string())?;
        check(v.equivalent == oracle.equivalent, || {
            format!(
                "pair {k}: tree says {}, oracle says {}",
                v.equivalent, oracle.equivalent
            )
        })?;
        if v.equivalent {
            equivalent += 1;
        }
    }
    Ok(format!(
        "{} pairs ({equivalent} equivalent), {nodes} nodes inspected",
        corpus.len()
    ))
}

fn conserves(m: &Mm1qfa<E>, label: &str) -> Result<usize, String> {
    let mut words = 0;
    for len in 0..=CONSERVATION_LENGTH {
        for w in words_of_length(m.alphabet().len(), len) {
            let r = m.run(&w).map_err(|e| e.to_string())?;
            let total = r.accept.clone() + r.reject.clone() + r.residual.clone();
            check(total == ExactReal::one(), || {
                format!("{label}: total {} on {w:?}", total.pretty())
            })?;
            words += 1;
        }
    }
    Ok(words)
}

fn conservation() -> Outcome {
    let example = example_mm1qfa();
    let alternate = example_mm1qfa_alternate();
    let mut words = conserves(&example, "example")?;
    words += conserves(&alternate, "alternate completion")?;
    check(example != alternate, || {
        "the two completions coincide".into()
    })?;
    for len in 0..=CONSERVATION_LENGTH {
        for w in words_of_length(example.alphabet().len(), len) {
            let (r1, r2) = (
                example.run(&w).map_err(|e| e.to_string())?,
                alternate.run(&w).map_err(|e| e.to_string())?,
            );
            check(r1 == r2, || format!("completions differ on {w:?}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x4d4d);
    let sigma = Alphabet::new(["a", "b"]).unwrap();
    for k in 0..20 {
        let m = random::exact_mm1qfa(3, &sigma, &mut rng);
        words += conserves(&m, &format!("random machine {k}"))?;
    }
    Ok(format!("{words} runs sum to exactly 1; completions agree"))
}

fn bilinearization_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x424c);
    let (i, o) = io();
    let mut pairs = 0;
    for k in 0..50 {
        let q = random::exact_qsm(2, &i, &o, &mut rng);
        let b = bilinearize(&q);
        for len in 0..=BILINEAR_LENGTH {
            for p in pairs_of_length(i.len(), o.len(), len) {
                let symbols: Vec<usize> = p
                    .input()
                    .iter()
                    .zip(p.output())
                    .map(|(&x, &y)| x * o.len() + y)
                    .collect();
                let f = b.word_value(&symbols).map_err(|e| e.to_string())?;
                let prob = q.probability(&p).map_err(|e| e.to_string())?;
                check(f.im() == ExactReal::zero(), || {
                    format!("machine {k}: imaginary part on {p:?}")
                })?;
                check(f.re() == prob, || {
                    format!(
                        "machine {k}: f = {} but P = {} on {p:?}",
                        f.re().pretty(),
                        prob.pretty()
                    )
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pair evaluations over 50 machines"))
}

fn four_state_smoke() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x534d);
    let (i, o) = io();
    let m1 = random::exact_qsm(4, &i, &o, &mut rng);
    let m2 = random::gauge_qsm(&m1, &mut rng);
    let start = Instant::now();
    let v = qsm_equivalence_tree(&m1, &m2, &opts()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(v.equivalent, || {
        "gauge-equivalent machines reported inequivalent".into()
    })?;
    within(
        elapsed,
        Duration::from_secs(5),
        "n1 = n2 = 4 tree equivalence",
    )?;
    Ok(format!("basis {}, {elapsed:?}", v.basis_size))
}

fn line(text: String) {
    let _ = writeln!(std::io::stderr(), "{text}");
}

#[test]
fn acceptance() {
    let qsms = qsm_corpus();
    let qfas = mo1qfa_corpus();
    let (bounds, runs) = witness_bounds(&qsms);
    let results = [
        ("1 counterexample reproduction", counterexample()),
        ("2 witness-length and basis bounds", bounds),
        ("3 oracle agreement", oracle_agreement(&qsms, &runs)),
        ("4 witness soundness", witness_soundness(&qsms, &qfas)),
        ("5 MO-1QFA suite", mo1qfa_suite(&qfas)),
        ("6 conservation", conservation()),
        ("7 bilinearization identity", bilinearization_identity()),
        ("smoke n1 = n2 = 4", four_state_smoke()),
    ];
    let mut failed = Vec::new();
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => line(format!("PASS criterion {name}: {detail}")),
            Err(why) => {
                line(format!("FAIL criterion {name}: {why}"));
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
