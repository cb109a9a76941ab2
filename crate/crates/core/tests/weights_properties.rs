use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ternary_dht::weights::{
    check_add_two_delta, check_block_delta, check_pair_cancel, check_run_sum,
    check_shift_congruence, h_value, modulus, run_decompose, sigma, verify_lin_weight_theorem,
    weight_criterion, wt, LinParameters, RunBlock,
};

#[test]
fn shift_invariance_exhaustive() {
    for n in 1..=11usize {
        let m = modulus(n) as i128;
        for j in 0..m {
            assert_eq!(wt(3 * j, n), wt(j, n));
            assert_eq!(sigma(3 * j, n), sigma(j, n));
            if n % 2 == 1 {
                assert_eq!(
                    h_value(3 * j, n).unwrap(),
                    h_value(j, n).unwrap(),
                    "n={n} j={j}"
                );
            }
        }
    }
}

#[test]
fn run_sum_exhaustive() {
    for n in 1..=8usize {
        for a in 0..modulus(n) as i128 {
            match check_run_sum(a, n) {
                Ok(ok) => assert!(ok, "n={n} a={a}"),
                Err(_) => assert_eq!(a, modulus(n) as i128 / 2),
            }
        }
    }
}

#[test]
fn run_sum_random_up_to_15() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100_000 {
        let n = rng.gen_range(9..=15usize);
        let a = rng.gen_range(0..modulus(n)) as i128;
        if a == modulus(n) as i128 / 2 {
            continue;
        }
        assert!(check_run_sum(a, n).unwrap(), "n={n} a={a}");
    }
}

#[test]
fn block_identities_up_to_18() {
    for r in 0..=18 {
        assert!(check_block_delta(RunBlock::zero(r)));
        assert!(check_block_delta(RunBlock::two(r)));
        assert!(check_pair_cancel(r));
    }
}

#[test]
fn add_two_and_shift_congruence_exhaustive() {
    for n in 1..=7usize {
        for a in 0..modulus(n) as i128 {
            for i in 0..n {
                assert!(check_add_two_delta(a, i, n).unwrap(), "n={n} a={a} i={i}");
                if n % 2 == 1 {
                    assert!(check_shift_congruence(a, i, n).unwrap());
                }
            }
        }
    }
}

/// Both phrasings of the Lin weight theorem pick out the same set.
#[test]
fn weight_sum_and_h_agree_up_to_13() {
    for n in [3, 5, 7, 9, 11, 13] {
        let r = verify_lin_weight_theorem(n).unwrap();
        assert!(r.pass, "n = {n}");
        assert_eq!(r.equality_set, r.weight_sum_equality_set);
        let p = LinParameters::new(n).unwrap();
        let crit = weight_criterion(p.v, p.t, n).unwrap();
        assert!(crit.realizable);
        assert_eq!(crit.equality_set, r.equality_set);
    }
}

/// Base case of the inductive argument: H(2) is at least 2 (it is 4 at n = 3).
#[test]
fn h_of_two() {
    assert_eq!(h_value(2, 3).unwrap(), 4);
    for n in (5..=15).step_by(2) {
        assert_eq!(h_value(2, n).unwrap(), 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5000))]

    #[test]
    fn decomposition_is_a_rotation(n in 1usize..=15, seed in any::<u64>()) {
        let m = modulus(n);
        let a = seed % m;
        prop_assume!(a != m / 2);
        let dec = run_decompose(a as i128, n).unwrap();
        prop_assert_eq!(dec.digits_le().len(), n);
        let value = dec.value() as u64 % m;
        let rotated = (0..n as u32).any(|k| (a as u128 * 3u128.pow(k) % m as u128) as u64 == value);
        prop_assert!(rotated);
        prop_assert_eq!(wt(value as i128, n), wt(a as i128, n));
    }

    #[test]
    fn reduction_is_periodic(n in 1usize..=19, j in -1_000_000_000i128..1_000_000_000, k in -50i128..50) {
        let m = modulus(n) as i128;
        prop_assert_eq!(wt(j + k * m, n), wt(j, n));
        prop_assert_eq!(sigma(j + k * m, n), sigma(j, n));
    }
}
