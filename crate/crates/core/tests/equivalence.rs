mod common;

use common::*;
use proptest::prelude::*;
use qsm_equiv::equivalence::*;
use qsm_equiv::machines::{Alphabet, Blm, Qsm};
use qsm_equiv::random;
use qsm_equiv::scalar::ExactComplex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> EquivalenceOptions {
    EquivalenceOptions::default()
}

#[test]
fn direct_sum_of_one_state_machines() {
    let sum = qsm_direct_sum(&fair_coin(), &always_zero()).unwrap();
    assert_eq!(sum.machine.states(), 2);
    let a = sum.machine.transition(0, 1);
    assert_eq!(a[(0, 0)], ExactComplex::inv_sqrt2());
    assert!(a[(0, 1)].is_zero() && a[(1, 0)].is_zero() && a[(1, 1)].is_zero());
    assert!(sum.machine.validate().is_empty());
}

#[test]
fn direct_sum_rejects_alphabet_mismatch() {
    let other = Qsm::new(
        1,
        0,
        Alphabet::new(["b"]).unwrap(),
        Alphabet::new(["0", "1"]).unwrap(),
        fair_coin().uqsm().transitions().to_vec(),
    )
    .unwrap();
    assert!(matches!(
        qsm_direct_sum(&fair_coin(), &other),
        Err(EquivalenceError::AlphabetMismatch(_))
    ));
    assert!(qsm_equivalence_tree(&fair_coin(), &other, &opts()).is_err());
    assert!(qsm_equivalence_bilinear(&fair_coin(), &other, &opts()).is_err());
}

#[test]
fn invalid_machines_are_rejected() {
    let bad = one_state_qsm(M::identity(1), M::identity(1));
    let err = qsm_equivalence_tree(&fair_coin(), &bad, &opts()).unwrap_err();
    assert!(matches!(
        err,
        EquivalenceError::InvalidMachine { which: 2, .. }
    ));
}

#[test]
fn embedded_distributions_reproduce_each_machine() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (i, o) = io();
    for _ in 0..10 {
        let m1 = random::exact_qsm(2, &i, &o, &mut rng);
        let m2 = random::exact_qsm(3, &i, &o, &mut rng);
        let sum = qsm_direct_sum(&m1, &m2).unwrap();
        assert!(sum.machine.validate().is_empty());
        for len in 0..=3 {
            for p in pairs_of_length(1, 2, len) {
                let lhs = sum.machine.probability_from(&sum.rho, &p).unwrap();
                assert_eq!(lhs, m1.probability(&p).unwrap());
                let rhs = sum.machine.probability_from(&sum.rho_prime, &p).unwrap();
                assert_eq!(rhs, m2.probability(&p).unwrap());
            }
        }
    }
}

#[test]
fn tree_self_equivalence() {
    let v = qsm_equivalence_tree(&fair_coin(), &fair_coin(), &opts()).unwrap();
    assert!(v.equivalent && v.witness.is_none());
    assert_eq!(v.method, Method::Tree);
}

#[test]
fn tree_one_state_witness() {
    let v = qsm_equivalence_tree(&fair_coin(), &always_zero(), &opts()).unwrap();
    assert!(!v.equivalent);
    assert_eq!(v.witness, Some(pair(&[0], &[0])));
    assert_eq!(v.values, Some((rat(1, 2), rat(1, 1))));
}

#[test]
fn bilinearize_one_state() {
    let b = bilinearize(&fair_coin());
    assert_eq!(b.states(), 1);
    assert_eq!(b.initial(), &M::identity(1));
    assert_eq!(b.final_vector(), &M::identity(1));
    let half = scalar(((1, 2), (0, 1)));
    assert_eq!(b.matrix(0), &half);
    assert_eq!(b.matrix(1), &half);
    assert_eq!(b.alphabet().symbols(), ["(0|a)", "(1|a)"]);
    assert_eq!(b.word_value(&[0]).unwrap(), ExactComplex::real(rat(1, 2)));
    let quarter = b.word_value(&[0, 1]).unwrap();
    assert_eq!(
        quarter.re,
        fair_coin().probability(&pair(&[0, 0], &[0, 1])).unwrap()
    );
    assert_eq!(quarter, ExactComplex::real(rat(1, 4)));
}

#[test]
fn bilinearized_values_match_qsm_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (i, o) = io();
    for _ in 0..5 {
        let m = random::exact_qsm(2, &i, &o, &mut rng);
        let b = bilinearize(&m);
        for len in 0..=4 {
            for (k, p) in pairs_of_length(1, 2, len).iter().enumerate() {
                let word = &words_of_length(2, len)[k];
                let f = b.word_value(word).unwrap();
                assert!(f.im.sign().is_eq());
                assert_eq!(f.re, m.probability(p).unwrap());
            }
        }
    }
}

fn scalar_blm(p: i64, q: i64) -> Blm<ExactComplex> {
    Blm::new(
        Alphabet::new(["s"]).unwrap(),
        M::identity(1),
        M::identity(1),
        vec![scalar(((p, q), (0, 1)))],
    )
    .unwrap()
}

#[test]
fn blm_examples() {
    let b = scalar_blm(1, 2);
    assert!(blm_equivalence(&b, &b, &opts()).unwrap().equivalent);

    let v = blm_equivalence(&b, &scalar_blm(1, 3), &opts()).unwrap();
    assert!(!v.equivalent);
    assert_eq!(v.witness, Some(vec![0]));
    assert_eq!(
        v.values,
        Some((ExactComplex::real(rat(1, 2)), ExactComplex::real(rat(1, 3))))
    );

    let v = blm_equivalence(
        &bilinearize(&fair_coin()),
        &bilinearize(&always_zero()),
        &opts(),
    )
    .unwrap();
    assert_eq!(v.witness, Some(vec![0]));
}

#[test]
fn bilinear_matches_tree_on_examples() {
    let cases = [
        (fair_coin(), fair_coin()),
        (fair_coin(), always_zero()),
        (always_zero(), always_zero()),
    ];
    for (m1, m2) in &cases {
        let t = qsm_equivalence_tree(m1, m2, &opts()).unwrap();
        let b = qsm_equivalence_bilinear(m1, m2, &opts()).unwrap();
        assert_eq!(t.equivalent, b.equivalent);
        assert_eq!(b.method, Method::Bilinear);
    }
    let b = qsm_equivalence_bilinear(&fair_coin(), &always_zero(), &opts()).unwrap();
    let w = b.witness.unwrap();
    assert_eq!(w, pair(&[0], &[0]));
    assert!(w.len() < 1 + 1);
}

#[test]
fn permuted_copies_are_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (i, o) = io();
    for n in 1..=3 {
        let m = random::exact_qsm(n, &i, &o, &mut rng);
        let p = m.permute_states(&random::permutation(n, &mut rng)).unwrap();
        assert!(
            qsm_equivalence_bilinear(&m, &p, &opts())
                .unwrap()
                .equivalent
        );
        assert!(qsm_equivalence_tree(&m, &p, &opts()).unwrap().equivalent);
    }
}

#[test]
fn mo1qfa_examples() {
    let a = hadamard_acceptor();
    assert!(mo1qfa_equivalence(&a, &a, &opts()).unwrap().equivalent);

    let v = mo1qfa_equivalence(&trivial_acceptor(), &a, &opts()).unwrap();
    assert!(!v.equivalent);
    assert_eq!(v.witness, Some(vec![0]));
    assert_eq!(v.values, Some((rat(1, 1), rat(1, 2))));
}

#[test]
fn mo1qfa_empty_word_is_tested() {
    let reject_all = qsm_equiv::machines::Mo1qfa::new(
        1,
        0,
        Alphabet::new(["a"]).unwrap(),
        vec![M::identity(1)],
        &[],
    )
    .unwrap();
    let v = mo1qfa_equivalence(&trivial_acceptor(), &reject_all, &opts()).unwrap();
    assert_eq!(v.witness, Some(vec![]));
}

#[test]
fn brute_force_examples() {
    let v = brute_force_qsm(&fair_coin(), &always_zero(), 1, &opts()).unwrap();
    assert_eq!(v.witness, Some(pair(&[0], &[0])));
    assert_eq!(v.method, Method::Oracle);
    assert!(
        brute_force_qsm(&fair_coin(), &fair_coin(), 3, &opts())
            .unwrap()
            .equivalent
    );

    let v = brute_force_mo1qfa(&trivial_acceptor(), &hadamard_acceptor(), 2, &opts()).unwrap();
    assert_eq!(v.witness, Some(vec![0]));
    assert!(
        brute_force_blm(&scalar_blm(1, 2), &scalar_blm(1, 2), 5, &opts())
            .unwrap()
            .equivalent
    );
}

#[test]
fn brute_force_budget() {
    let err = brute_force_qsm(&fair_coin(), &fair_coin(), 24, &opts()).unwrap_err();
    assert!(matches!(err, EquivalenceError::BudgetExceeded { .. }));
    // 2^23 is under the budget.
    assert!(brute_force_blm(&scalar_blm(1, 2), &scalar_blm(1, 2), 23, &opts()).is_ok());
}

#[test]
fn determinism() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (i, o) = io();
    let m1 = random::exact_qsm(3, &i, &o, &mut rng);
    let m2 = random::exact_qsm(2, &i, &o, &mut rng);
    let a = qsm_equivalence_tree(&m1, &m2, &opts()).unwrap();
    let b = qsm_equivalence_tree(&m1, &m2, &opts()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn float_backend_agrees_with_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (i, o) = io();
    for _ in 0..20 {
        let m1 = random::exact_qsm(2, &i, &o, &mut rng);
        let m2 = if rng.gen_bool(0.5) {
            random::gauge_qsm(&m1, &mut rng)
        } else {
            random::exact_qsm(2, &i, &o, &mut rng)
        };
        let exact = qsm_equivalence_tree(&m1, &m2, &opts()).unwrap();
        let float = qsm_equivalence_tree(&m1.to_float(), &m2.to_float(), &opts()).unwrap();
        assert_eq!(exact.equivalent, float.equivalent);
        assert_eq!(exact.basis_size, float.basis_size);
        if let (Some((p, q)), Some((fp, fq))) = (exact.values, float.values) {
            assert!((p.to_f64() - fp).abs() < 1e-12 && (q.to_f64() - fq).abs() < 1e-12);
        }
    }
}

fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn qsm_methods_agree_and_respect_bounds(seed in arb_seed(), n1 in 1usize..=3, n2 in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, o) = io();
        let m1 = random::exact_qsm(n1, &i, &o, &mut rng);
        let m2 = random::exact_qsm(n2, &i, &o, &mut rng);
        let t = qsm_equivalence_tree(&m1, &m2, &opts()).unwrap();
        let b = qsm_equivalence_bilinear(&m1, &m2, &opts()).unwrap();
        prop_assert_eq!(t.equivalent, b.equivalent);
        prop_assert!(t.basis_size <= (n1 + n2).pow(2));
        prop_assert!(b.basis_size <= n1 * n1 + n2 * n2);
        for (v, bound) in [(&t, (n1 + n2).pow(2)), (&b, n1 * n1 + n2 * n2 - 1)] {
            if let Some(w) = &v.witness {
                prop_assert!(w.len() <= bound);
                let (p1, p2) = (m1.probability(w).unwrap(), m2.probability(w).unwrap());
                prop_assert_ne!(&p1, &p2);
                prop_assert_eq!(v.values.clone(), Some((p1, p2)));
            }
        }
    }

    #[test]
    fn gauge_and_padding_preserve_equivalence(seed in arb_seed(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, o) = io();
        let m = random::exact_qsm(n, &i, &o, &mut rng);
        let g = random::gauge_qsm(&m, &mut rng);
        let extra = random::exact_qsm(1, &i, &o, &mut rng);
        let padded = random::pad_qsm(&g, &extra);
        prop_assert!(qsm_equivalence_tree(&m, &padded, &opts()).unwrap().equivalent);
        prop_assert!(qsm_equivalence_bilinear(&m, &padded, &opts()).unwrap().equivalent);
    }

    #[test]
    fn mo1qfa_witnesses_are_sound(seed in arb_seed(), n1 in 1usize..=3, n2 in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        let a1 = random::exact_mo1qfa(n1, &sigma, &mut rng);
        let a2 = random::exact_mo1qfa(n2, &sigma, &mut rng);
        let v = mo1qfa_equivalence(&a1, &a2, &opts()).unwrap();
        prop_assert!(v.basis_size <= (n1 + n2).pow(2));
        if let Some(w) = &v.witness {
            prop_assert!(w.len() <= (n1 + n2).pow(2));
            prop_assert_ne!(a1.probability(w).unwrap(), a2.probability(w).unwrap());
            let oracle = brute_force_mo1qfa(&a1, &a2, w.len(), &opts()).unwrap();
            prop_assert!(!oracle.equivalent);
        }
    }

    #[test]
    fn mo1qfa_transformations_preserve_equivalence(seed in arb_seed(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        let a = random::exact_mo1qfa(n, &sigma, &mut rng);
        let p = random::permute_mo1qfa(&a, &random::permutation(n, &mut rng));
        let g = random::phase_gauge_mo1qfa(&p, &mut rng);
        let padded = random::pad_mo1qfa(&g, &random::exact_mo1qfa(1, &sigma, &mut rng));
        prop_assert!(mo1qfa_equivalence(&a, &padded, &opts()).unwrap().equivalent);
    }

    #[test]
    fn blm_methods_match_oracle(seed in arb_seed()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, o) = io();
        let b1 = bilinearize(&random::exact_qsm(1, &i, &o, &mut rng));
        let b2 = bilinearize(&random::exact_qsm(1, &i, &o, &mut rng));
        let v = blm_equivalence(&b1, &b2, &opts()).unwrap();
        let oracle = brute_force_blm(&b1, &b2, 3, &opts()).unwrap();
        prop_assert_eq!(v.equivalent, oracle.equivalent);
    }
}

#[test]
fn tree_witness_is_found_by_oracle_at_its_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (i, o) = io();
    for _ in 0..30 {
        let m1 = random::exact_qsm(2, &i, &o, &mut rng);
        let m2 = random::exact_qsm(2, &i, &o, &mut rng);
        let v = qsm_equivalence_tree(&m1, &m2, &opts()).unwrap();
        if let Some(w) = v.witness {
            assert!(
                !brute_force_qsm(&m1, &m2, w.len(), &opts())
                    .unwrap()
                    .equivalent
            );
        }
    }
}
