use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ternary_dht::arith::gcd;
use ternary_dht::dht::{
    check_realizable, check_realizable_with, first_order_mdht, hadamard,
    realization_is_well_defined, second_order_mdht_naive, FieldFn, Transformer,
};
use ternary_dht::weights::weight_criterion;
use ternary_dht::{Eisenstein, FieldContext, FieldElement};

#[test]
fn fast_transforms_agree_with_naive() {
    let ctx = FieldContext::build(4).unwrap();
    let tf = Transformer::new(&ctx);
    let fs = [
        FieldFn::trace(&ctx),
        FieldFn::from_fn(&ctx, |x| ctx.trace(ctx.mul(x, x))),
    ];
    for f in &fs {
        for v in [1u64, 2, 5, 8, 40] {
            for r in [0i64, 3, 17] {
                let gamma = ctx.alpha_pow(r);
                assert_eq!(
                    tf.first_order(f, v, gamma).unwrap(),
                    first_order_mdht(&ctx, f, v, gamma).unwrap()
                );
                for t in [1u64, 3, 7] {
                    assert_eq!(
                        tf.second_order(f, v, t, gamma).unwrap(),
                        second_order_mdht_naive(&ctx, f, v, t, gamma).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn hadamard_of_linear_functions_is_a_point_mass() {
    let ctx = FieldContext::build(3).unwrap();
    let q = Eisenstein::from_int(27);
    let zero = hadamard(&ctx, &FieldFn::zero(&ctx));
    let tr = hadamard(&ctx, &FieldFn::trace(&ctx));
    for x in ctx.elements() {
        let z = if x.is_zero() { q } else { Eisenstein::ZERO };
        let o = if x == FieldElement::ONE {
            q
        } else {
            Eisenstein::ZERO
        };
        assert_eq!(zero.at(x), z);
        assert_eq!(tr.at(x), o);
    }
}

/// Screen and exact spectrum agree on every admissible pair at n = 3.
#[test]
fn weight_criterion_matches_spectrum_n3() {
    let ctx = FieldContext::build(3).unwrap();
    let f = FieldFn::trace(&ctx);
    let m = ctx.q_minus_1();
    for v in 1..m {
        for t in 1..m {
            if gcd(v, m) == 1 || gcd(t, m) != 1 {
                continue;
            }
            let exact = check_realizable(&ctx, &f, v, t).unwrap();
            let screen = weight_criterion(v, t, 3).unwrap();
            assert_eq!(screen.realizable, exact.realizable, "v={v} t={t}");
            if exact.realizable {
                assert!(realization_is_well_defined(&ctx, &exact));
            }
        }
    }
}

#[test]
fn weight_criterion_matches_spectrum_sampled_n5() {
    let ctx = FieldContext::build(5).unwrap();
    let tf = Transformer::new(&ctx);
    let f = FieldFn::trace(&ctx);
    let m = ctx.q_minus_1();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    let mut realizable = 0;
    while tested < 300 {
        let (v, t) = (rng.gen_range(1..m), rng.gen_range(1..m));
        if gcd(v, m) == 1 || gcd(t, m) != 1 {
            continue;
        }
        tested += 1;
        let exact = check_realizable_with(&tf, &f, v, t).unwrap();
        assert_eq!(
            weight_criterion(v, t, 5).unwrap().realizable,
            exact.realizable
        );
        realizable += exact.realizable as u32;
    }
    // The Lin pair is always among the realizable ones.
    let lin = check_realizable(&ctx, &f, 52, 61).unwrap();
    assert!(lin.realizable && realization_is_well_defined(&ctx, &lin));
    assert!(realizable < 300);
}

#[test]
fn realizable_values_have_norm_q_squared() {
    let ctx = FieldContext::build(3).unwrap();
    let tf = Transformer::new(&ctx);
    let f = FieldFn::trace(&ctx);
    let q = ctx.q() as u128;
    let m = ctx.q_minus_1();
    let mut seen = 0;
    for v in 1..m {
        for t in (1..m).filter(|&t| gcd(t, m) == 1) {
            let report = check_realizable(&ctx, &f, v, t).unwrap();
            if !report.realizable {
                continue;
            }
            seen += 1;
            for &r in &report.gamma_reps {
                let s = tf.second_order(&f, v, t, ctx.alpha_pow(r as i64)).unwrap();
                assert!(s.values.iter().all(|x| x.norm_sq() == q * q));
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn energy_identity_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for n in [3usize, 5] {
        let ctx = FieldContext::build(n).unwrap();
        let tf = Transformer::new(&ctx);
        let f = FieldFn::trace(&ctx);
        let m = ctx.q_minus_1();
        let target = 3u128.pow(3 * n as u32);
        let mut done = 0;
        while done < 25 {
            let (v, t, r) = (
                rng.gen_range(1..m),
                rng.gen_range(1..m),
                rng.gen_range(0..m),
            );
            if gcd(t, m) != 1 {
                continue;
            }
            let s = tf.second_order(&f, v, t, ctx.alpha_pow(r as i64)).unwrap();
            assert_eq!(s.energy(), target, "n={n} v={v} t={t} r={r}");
            done += 1;
        }
    }
}
