use std::sync::OnceLock;

use proptest::prelude::*;
use ternary_dht::field::{all_cosets, FieldContext, FieldElement};

#[test]
fn trace_is_additive_and_frobenius_invariant_exhaustively() {
    for n in 1..=7 {
        let ctx = FieldContext::build(n).unwrap();
        let tr: Vec<u8> = ctx.elements().map(|x| ctx.trace(x)).collect();
        for x in ctx.elements() {
            let x3 = ctx.pow(x, 3).unwrap_or(FieldElement::ZERO);
            assert_eq!(tr[x3.index()], tr[x.index()]);
            for y in ctx.elements() {
                assert_eq!(
                    tr[ctx.add(x, y).index()],
                    (tr[x.index()] + tr[y.index()]) % 3
                );
            }
        }
    }
}

#[test]
fn alpha_is_primitive() {
    for n in 1..=10 {
        let ctx = FieldContext::build(n).unwrap();
        let m = ctx.q_minus_1();
        assert_eq!(ctx.alpha_order(), m);
        assert_eq!(ctx.alpha_pow(m as i64), FieldElement::ONE);
    }
}

#[test]
fn coset_members_are_closed_under_tripling() {
    for n in 1..=7u32 {
        let m = 3u64.pow(n) - 1;
        for c in all_cosets(m) {
            for &j in &c.members {
                assert!(j < m);
                assert!(c.contains((3 * j) % m));
            }
        }
    }
}

fn ctx(n: usize) -> &'static FieldContext {
    static CACHE: OnceLock<Vec<FieldContext>> = OnceLock::new();
    &CACHE.get_or_init(|| (1..=10).map(|n| FieldContext::build(n).unwrap()).collect())[n - 1]
}

fn field_and_elements() -> impl Strategy<Value = (usize, u32, u32, u32)> {
    (1usize..=10).prop_flat_map(|n| {
        let q = 3u32.pow(n as u32);
        (Just(n), 0..q, 0..q, 0..q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn field_axioms((n, a, b, c) in field_and_elements()) {
        let ctx = ctx(n);
        let (x, y, z) = (
            ctx.element(a).unwrap(),
            ctx.element(b).unwrap(),
            ctx.element(c).unwrap(),
        );
        prop_assert_eq!(ctx.add(x, y), ctx.add(y, x));
        prop_assert_eq!(ctx.mul(x, y), ctx.mul(y, x));
        prop_assert_eq!(ctx.mul(ctx.mul(x, y), z), ctx.mul(x, ctx.mul(y, z)));
        prop_assert_eq!(
            ctx.mul(x, ctx.add(y, z)),
            ctx.add(ctx.mul(x, y), ctx.mul(x, z))
        );
        prop_assert_eq!(ctx.add(x, ctx.neg(x)), FieldElement::ZERO);
        prop_assert_eq!(ctx.sub(ctx.add(x, y), y), x);
        if let Some(inv) = ctx.inv(x) {
            prop_assert_eq!(ctx.mul(x, inv), FieldElement::ONE);
        } else {
            prop_assert!(x.is_zero());
        }
    }

    #[test]
    fn power_laws((n, a, _, _) in field_and_elements(), e in -500i64..500, f in -500i64..500) {
        let ctx = ctx(n);
        let x = ctx.element(a).unwrap();
        prop_assume!(!x.is_zero());
        let xe = ctx.pow(x, e).unwrap();
        let xf = ctx.pow(x, f).unwrap();
        prop_assert_eq!(ctx.mul(xe, xf), ctx.pow(x, e + f).unwrap());
        prop_assert_eq!(ctx.pow(xe, f).unwrap(), ctx.pow(x, e * f).unwrap());
    }

    #[test]
    fn frobenius_is_additive((n, a, b, _) in field_and_elements()) {
        let ctx = ctx(n);
        let (x, y) = (ctx.element(a).unwrap(), ctx.element(b).unwrap());
        let cube = |v: FieldElement| ctx.pow(v, 3).unwrap_or(FieldElement::ZERO);
        prop_assert_eq!(cube(ctx.add(x, y)), ctx.add(cube(x), cube(y)));
    }
}
