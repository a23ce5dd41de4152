use proptest::prelude::*;

use weightlab::gf::FieldSpec;
use weightlab::labels::{enumerate_iibr, kappa_alp, kappa_ibr, omega, omega_inv};
use weightlab::matgroups::{gl_group, gu_group, sl_group};
use weightlab::partitions::{core_tower, pi_m, pi_m_inv, tower_to_partition, Partition};
use weightlab::radical::{
    basic_shapes_up_to, candidate_shapes, det_info, exceptional_weight_case, is_special, splitting_count,
    substitute_d, ExceptionalCase,
};
use weightlab::roots::GlobalContext;

const FIELDS: [(u64, u32); 8] = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)];

fn field_and_coeffs() -> impl Strategy<Value = (FieldSpec, [Vec<u64>; 3])> {
    (0..FIELDS.len()).prop_flat_map(|i| {
        let (p, k) = FIELDS[i];
        let v = || proptest::collection::vec(0..p, k as usize);
        (Just(FieldSpec::new(p, k).unwrap()), [v(), v(), v()])
    })
}

fn context() -> impl Strategy<Value = GlobalContext> {
    (prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), prop::bool::ANY, prop::sample::select(vec![2u64, 3, 5, 7]))
        .prop_filter_map("ell equals the characteristic", |(q, up, ell)| {
            GlobalContext::new(q, if up { 1 } else { -1 }, ell).ok()
        })
}

fn partition() -> impl Strategy<Value = Partition> {
    proptest::collection::vec(1u32..7, 0..7).prop_map(Partition::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms((f, [a, b, c]) in field_and_coeffs()) {
        let (a, b, c) = (f.from_coeffs(&a), f.from_coeffs(&b), f.from_coeffs(&c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert!(f.add(a, f.neg(a)).is_zero());
        prop_assert_eq!(f.frobenius_power(f.add(a, b), 1), f.add(f.frobenius_power(a, 1), f.frobenius_power(b, 1)));
        prop_assert_eq!(f.from_coeffs(&f.to_coeffs(a)), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.from_int(1));
            prop_assert_eq!(f.pow(a, f.units() as i64), f.from_int(1));
            prop_assert_eq!(f.units() % f.order(a), 0);
        }
    }

    #[test]
    fn core_quotient_round_trip(mu in partition(), d in 2u32..5) {
        let (core, quot) = mu.core_quotient(d);
        prop_assert!(core.is_core(d));
        prop_assert_eq!(quot.len(), d as usize);
        let w: u64 = quot.iter().map(Partition::size).sum();
        prop_assert_eq!(core.size() + d as u64 * w, mu.size());
        prop_assert_eq!(Partition::from_core_quotient(&core, &quot), mu.clone());
        prop_assert_eq!(mu.transpose().transpose(), mu.clone());
        prop_assert_eq!(mu.hook_lengths().len() as u64, mu.size());
    }

    #[test]
    fn core_tower_inverts(mu in partition(), ell in prop::sample::select(vec![2u32, 3, 5])) {
        let t = core_tower(&mu, ell);
        prop_assert_eq!(t.weight(), mu.size());
        prop_assert_eq!(tower_to_partition(&t), mu.clone());
        let f = pi_m(&mu, ell);
        prop_assert!(f.is_valid());
        prop_assert_eq!(f.weight(), mu.size());
        prop_assert_eq!(pi_m_inv(&f), mu);
    }

    #[test]
    fn omega_round_trip(ctx in context(), n in 1u64..4, pick in any::<prop::sample::Index>()) {
        let labels = enumerate_iibr(&ctx, n);
        let x = pick.get(&labels);
        let y = omega(&ctx, x);
        prop_assert_eq!(&omega_inv(&ctx, &y), x);
        prop_assert_eq!(kappa_alp(&ctx, &y), kappa_ibr(&ctx, x));
        prop_assert_eq!(y.s.degree(), n);
    }

    #[test]
    fn determinant_orders(ctx in context(), n in 1u64..5) {
        let qe = ctx.q_minus_eta();
        for r in candidate_shapes(&ctx, n) {
            let d = det_info(&ctx, &r).unwrap();
            prop_assert_eq!(qe % d.order_det_n, 0);
            prop_assert_eq!(d.order_det_n % d.order_det_rc, 0);
            prop_assert_eq!(d.order_det_rc % d.order_det_r, 0);
            if exceptional_weight_case(&ctx, &r).unwrap() == ExceptionalCase::None {
                prop_assert_eq!(d.order_det_n, d.order_det_rc);
            }
            if is_special(&ctx, &r).unwrap() {
                prop_assert_eq!(splitting_count(&ctx, &r).unwrap(), qe / d.order_det_n);
            } else {
                prop_assert!(splitting_count(&ctx, &r).is_err());
            }
        }
    }

    #[test]
    fn substitution_is_idempotent(q in prop::sample::select(vec![3u64, 7, 11, 5, 9]), up in prop::bool::ANY, n in 1u64..9) {
        let ctx = GlobalContext::new(q, if up { 1 } else { -1 }, 2).unwrap();
        prop_assume!(ctx.two_unitary());
        for b in basic_shapes_up_to(&ctx, n) {
            let once = substitute_d(&ctx, &b).unwrap();
            prop_assert_eq!(substitute_d(&ctx, &once).unwrap(), once.clone());
            prop_assert_eq!(once.degree(&ctx), b.degree(&ctx));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn class_equation(which in 0usize..3, q in prop::sample::select(vec![2u64, 3, 4, 5])) {
        let g = match which {
            0 => gl_group(2, q),
            1 => sl_group(2, q),
            _ => gu_group(2, q),
        }
        .unwrap();
        let t = g.conjugacy_classes();
        prop_assert_eq!(t.sizes.iter().sum::<usize>(), g.order());
        for (&s, &o) in t.sizes.iter().zip(&t.orders) {
            prop_assert_eq!(g.order() % s, 0);
            prop_assert_eq!(g.order() as u64 % o, 0);
        }
    }
}
