//! Randomized invariants: ring axioms in the cyclotomic quotient, q-binomial
//! identities, character multiplicativity, and agreement of independent
//! computation routes.

use proptest::prelude::*;
use std::sync::Arc;

use qfrob_core::cyclo::{CycloScalar, RootParams};
use qfrob_core::hyper::{CycloRing, HyperAlgebra, HyperElement, PrimeField};
use qfrob_core::identities::{s_poly, s_poly_table, EvalPoint};
use qfrob_core::pbw::{PBWElement, UqContext};
use qfrob_core::qbinom::{gauss_binomial, int_binomial};
use qfrob_core::serialize::ScalarData;
use qfrob_core::torus::{SmallTorusElement, TorusContext};

fn odd_l() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5), Just(7), Just(9), Just(15)]
}

#[derive(Debug, Clone)]
struct ScalarSpec {
    coeffs: Vec<i64>,
    den: i64,
}

fn scalar_spec() -> impl Strategy<Value = ScalarSpec> {
    (
        proptest::collection::vec(-9i64..=9, 1..=8),
        prop_oneof![Just(1i64), Just(2), Just(3), Just(4), Just(6), Just(8)],
    )
        .prop_map(|(coeffs, den)| ScalarSpec { coeffs, den })
}

fn realize(ring: &Arc<RootParams>, spec: &ScalarSpec) -> CycloScalar {
    let mut acc = ring.zero();
    for (i, &c) in spec.coeffs.iter().enumerate() {
        acc = &acc + &(&ring.q_power(i as i64) * &ring.from_int(c));
    }
    &acc * &ring.from_ratio(1, spec.den)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms(l in odd_l(), a in scalar_spec(), b in scalar_spec(), c in scalar_spec()) {
        let ring = RootParams::new(l).unwrap();
        let (a, b, c) = (realize(&ring, &a), realize(&ring, &b), realize(&ring, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn inverses_multiply_to_one(l in odd_l(), a in scalar_spec()) {
        let ring = RootParams::new(l).unwrap();
        let a = realize(&ring, &a);
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn dyadic_closed_under_product(l in odd_l(), a in scalar_spec(), b in scalar_spec()) {
        let ring = RootParams::new(l).unwrap();
        let (mut a, mut b) = (realize(&ring, &a), realize(&ring, &b));
        // force dyadic denominators
        if !a.is_dyadic() {
            a = &a * &ring.from_bigint(a.denominator().clone());
        }
        if !b.is_dyadic() {
            b = &b * &ring.from_bigint(b.denominator().clone());
        }
        prop_assert!(a.is_dyadic() && b.is_dyadic());
        prop_assert!((&a * &b).is_dyadic());
        prop_assert!((&a + &b).is_dyadic());
    }

    #[test]
    fn scalar_serialization_round_trip(l in odd_l(), a in scalar_spec()) {
        let ring = RootParams::new(l).unwrap();
        let a = realize(&ring, &a);
        let json = serde_json::to_string(&ScalarData::from_scalar(&a)).unwrap();
        let back: ScalarData = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.into_scalar(&ring).unwrap(), a);
    }

    #[test]
    fn q_pascal_identity(l in odd_l(), n in 1i64..=20, k in 1u64..=10) {
        let ring = RootParams::new(l).unwrap();
        let n = n.min(4 * l as i64);
        let k = k.min(n as u64);
        let lhs = gauss_binomial(&ring, n, k, 1);
        let rhs = &(&ring.q_power(k as i64) * &gauss_binomial(&ring, n - 1, k, 1))
            + &(&ring.q_power(k as i64 - n) * &gauss_binomial(&ring, n - 1, k - 1, 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quantum_lucas_factorization(l in odd_l(), n in 0i64..=40, k in 0u64..=40) {
        let ring = RootParams::new(l).unwrap();
        let n = n.min(4 * l as i64);
        let k = k.min(n as u64);
        let (n1, n0) = (n / l as i64, n % l as i64);
        let (k1, k0) = (k / l, k % l);
        let lhs = gauss_binomial(&ring, n, k, 1);
        let rhs = &ring.from_bigint(int_binomial(n1, k1)) * &gauss_binomial(&ring, n0, k0, 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn characters_are_multiplicative(l in odd_l(), seeds in proptest::collection::vec((0i64..30, 0i64..30, 1i64..5), 2), m in -30i64..30) {
        let ring = RootParams::new(l).unwrap();
        let ctx = TorusContext::new(ring.clone(), 2 * l as usize);
        let build = |s: &(i64, i64, i64)| {
            SmallTorusElement::k_power(&ring, s.0)
                .scale(&(&ring.q_power(s.1) * &ring.from_ratio(1, s.2)))
        };
        let x = build(&seeds[0]);
        let y = build(&seeds[1]);
        let lhs = ctx.eval_small(&x.mul(&y), m);
        let rhs = &ctx.eval_small(&x, m) * &ctx.eval_small(&y, m);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetric_sum_recurrence(l in odd_l(), d in 1u64..=6, exps in proptest::collection::vec(0i64..12, 2..=5)) {
        let ring = RootParams::new(l).unwrap();
        let pts = EvalPoint::q_powers(&ring, &exps);
        let shorter = EvalPoint::new(pts.values[..pts.values.len() - 1].to_vec());
        let x_last = pts.values.last().unwrap().clone();
        // S_(d,n) = x_n S_(d-1,n) + S_(d,n-1)
        let lhs = s_poly(d, &pts);
        let rhs = &(&x_last * &s_poly(d - 1, &pts)) + &s_poly(d, &shorter);
        prop_assert_eq!(lhs, rhs);
        // table evaluation agrees with single evaluation
        let table = s_poly_table(d, &pts);
        prop_assert_eq!(table[d as usize].clone(), s_poly(d, &pts));
    }

    #[test]
    fn hyper_routes_agree_mod_p(
        p in prop_oneof![Just(3u64), Just(5), Just(7)],
        xs in proptest::collection::vec((0u32..5, 0u32..5, 0u32..5, 1i64..5), 1..3),
        ys in proptest::collection::vec((0u32..5, 0u32..5, 0u32..5, 1i64..5), 1..3),
    ) {
        let alg = HyperAlgebra::new(PrimeField(p), 64);
        let build = |specs: &[(u32, u32, u32, i64)]| {
            let mut acc = HyperElement::zero();
            for &(a, i, c, s) in specs {
                let term = alg.scale(&alg.basis(a, i, c), &qfrob_core::modp::ModPScalar::new(s, p));
                acc = alg.add(&acc, &term);
            }
            acc
        };
        let x = build(&xs);
        let y = build(&ys);
        prop_assert_eq!(alg.mul(&x, &y).unwrap(), alg.mul_closed(&x, &y).unwrap());
    }

    #[test]
    fn hyper_routes_agree_cyclotomic(
        l in prop_oneof![Just(3u64), Just(5)],
        x in (0u32..4, 0u32..4, 0u32..4),
        y in (0u32..4, 0u32..4, 0u32..4),
    ) {
        let ring = RootParams::new(l).unwrap();
        let alg = HyperAlgebra::new(CycloRing(ring), 64);
        let xe = alg.basis(x.0, x.1, x.2);
        let ye = alg.basis(y.0, y.1, y.2);
        prop_assert_eq!(alg.mul(&xe, &ye).unwrap(), alg.mul_closed(&xe, &ye).unwrap());
    }
}

// Associativity and the Frobenius morphism property on random bounded basis
// elements; fewer cases because normal forms at the root of unity are the
// expensive path.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pbw_associativity_random(
        xs in (0u32..4, 0u32..2, 0u32..3, 0u32..4),
        ys in (0u32..4, 0u32..2, 0u32..3, 0u32..4),
        zs in (0u32..4, 0u32..2, 0u32..3, 0u32..4),
    ) {
        let l = 3u64;
        let torus = TorusContext::new(RootParams::new(l).unwrap(), 40);
        let ctx = UqContext::new(torus, 16);
        let build = |s: (u32, u32, u32, u32)| {
            let mut coords = std::collections::BTreeMap::new();
            coords.insert((s.0, (s.1 % 2) as u8, s.2, s.3), ctx.torus.ring().one());
            PBWElement { coords }
        };
        let (x, y, z) = (build(xs), build(ys), build(zs));
        let a = x.mul(&ctx, &y).unwrap().mul(&ctx, &z).unwrap();
        let b = x.mul(&ctx, &y.mul(&ctx, &z).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn frobenius_is_a_morphism_random(
        xs in (0u32..7, 0u32..2, 0u32..4, 0u32..7),
        ys in (0u32..7, 0u32..2, 0u32..4, 0u32..7),
    ) {
        let l = 3u64;
        let torus = TorusContext::new(RootParams::new(l).unwrap(), 40);
        let ctx = UqContext::new(torus, 20);
        let alg = HyperAlgebra::new(CycloRing(ctx.torus.ring().clone()), 20);
        let build = |s: (u32, u32, u32, u32)| {
            let mut coords = std::collections::BTreeMap::new();
            coords.insert((s.0, (s.1 % 2) as u8, s.2, s.3), ctx.torus.ring().one());
            PBWElement { coords }
        };
        let (x, y) = (build(xs), build(ys));
        let lhs = x.mul(&ctx, &y).unwrap().frobenius(&ctx).unwrap();
        let rhs = alg
            .mul(&x.frobenius(&ctx).unwrap(), &y.frobenius(&ctx).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn k_to_the_l_grades_the_primed_blocks() {
    // K^l kappa'_n = kappa'_n for even n and -kappa'_n for odd n, so K^l acts
    // by +1 on the even block and -1 on the odd block of any module.
    for l in [3u64, 5] {
        let ring = RootParams::new(l).unwrap();
        let kl = SmallTorusElement::k_power(&ring, l as i64);
        for n in 0..2 * l as i64 {
            let kp = qfrob_core::torus::kappa_prime(&ring, n);
            let expected = if n % 2 == 0 {
                kp.clone()
            } else {
                kp.scale(&-ring.one())
            };
            assert_eq!(kl.mul(&kp), expected, "l={l} n={n}");
        }
    }
}

#[test]
fn eq1_family_matches_shifted_coordinate() {
    // The alpha_(0,s) coordinate of kappa_(-s) [K; 2s-la-lb; s] in the
    // shifted basis is 1/(2l) times the first nullity family.
    let l = 3u64;
    let ring = RootParams::new(l).unwrap();
    let ctx = TorusContext::new(ring.clone(), 24);
    for s in 1..=3u32 {
        let la = l;
        let lb = l;
        let c = 2 * s as i64 - la as i64 - lb as i64;
        let shifted = ctx
            .interpolate_fn(c, (s + l as u32 + 2) as usize, &|m| {
                if (m + 4 * s as i64).rem_euclid(2 * l as i64) == 0 {
                    ctx.qbinom.half_top(m + 2 * c, s as u64)
                } else {
                    ring.zero()
                }
            })
            .unwrap();
        let coord = shifted
            .coords
            .get(&(0, s))
            .cloned()
            .unwrap_or_else(|| ring.zero());
        let family = qfrob_core::identities::nullity_families(&ring, s as u64)
            .into_iter()
            .find(|(name, _)| name == "alpha_0_s")
            .unwrap()
            .1;
        let expected = &family * &ring.from_ratio(1, 2 * l as i64);
        assert_eq!(coord, expected, "s={s}");
        if s % l as u32 == 0 {
            assert!(!coord.is_zero());
        } else {
            assert!(coord.is_zero());
        }
    }
}
