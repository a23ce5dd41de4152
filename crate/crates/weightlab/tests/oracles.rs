//! Pinned values, each checked against an independent computation
//! (closed-form class numbers, necklace counts, hand enumeration).

use std::collections::BTreeSet;

use weightlab::arith::partition_count;
use weightlab::gf::{make_field, Fe};
use weightlab::labels::{
    count, defect_valuation, enumerate_iibr, enumerate_semisimple, kappa_ibr, nu_valuation, omega, GroupKind,
};
use weightlab::matgroups::{gl_group, gu_group, sl_group};
use weightlab::partitions::{core_tower, d_core, d_quotient, hook_lengths, partitions_of, strata_d, strata_u, Partition};
use weightlab::radical::{
    det_info_basic, exceptional_weight_case, is_special, is_special_basic, splitting_count, substitute_d,
    BasicShape, ExceptionalCase, RadicalShape,
};
use weightlab::roots::{enumerate_orbits, frobenius, mul_root, norm_map, orbit_of, GlobalContext, Root};
use weightlab::symplectic::{field_for, vandermonde_v0};

fn ctx(q: u64, eta: i8, ell: u64) -> GlobalContext {
    GlobalContext::new(q, eta, ell).unwrap()
}

fn r(num: i128, den: u64) -> Root {
    Root::new(num, den)
}

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec())
}

/// Number of monic irreducible polynomials of degree d over GF(q) other than X.
fn necklaces(q: u64, d: u64) -> u64 {
    let mobius = |n: u64| -> i64 {
        let mut n = n;
        let mut k = 0;
        let mut f = 2;
        while f * f <= n {
            if n % f == 0 {
                n /= f;
                if n % f == 0 {
                    return 0;
                }
                k += 1;
            }
            f += 1;
        }
        if n > 1 {
            k += 1;
        }
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    };
    let total: i64 = (1..=d).filter(|e| d % e == 0).map(|e| mobius(d / e) * (q as i64).pow(e as u32)).sum();
    total as u64 / d - u64::from(d == 1)
}

#[test]
fn root_arithmetic() {
    assert_eq!(mul_root(r(1, 8), r(3, 8)), r(1, 2));
    assert_eq!(frobenius(&ctx(3, 1, 2), r(1, 8)), r(3, 8));
    assert_eq!(frobenius(&ctx(2, -1, 3), r(1, 3)), r(1, 3));
    let o = orbit_of(&ctx(3, 1, 2), r(1, 8)).unwrap();
    assert_eq!(o.members.iter().copied().collect::<BTreeSet<_>>(), [r(1, 8), r(3, 8)].into());
    assert_eq!((o.d, o.alpha_gamma, o.m_gamma), (2, 1, 1));
    assert_eq!(orbit_of(&ctx(2, -1, 3), r(1, 3)).unwrap().d, 1);
    assert_eq!(norm_map(&ctx(3, 1, 2), 1, r(1, 8)).unwrap(), r(1, 2));
    assert_eq!(norm_map(&ctx(2, -1, 3), 1, r(1, 9)).unwrap(), r(1, 3));
    // -13 = 2 mod 3 has multiplicative order 2.
    assert_eq!(ctx(13, -1, 3).e, 2);
    assert_eq!(ctx(2, -1, 3).e, 1);
}

#[test]
fn orbit_counts_match_irreducible_polynomials() {
    for q in [2u64, 3, 4, 5] {
        let c = ctx(q, 1, if q % 2 == 0 { 3 } else { 2 });
        let orbits = enumerate_orbits(&c, 4, false);
        for d in 1..=4 {
            let got = orbits.iter().filter(|o| o.d == d).count() as u64;
            assert_eq!(got, necklaces(q, d), "q={q} d={d}");
        }
    }
    let unitary = enumerate_orbits(&ctx(2, -1, 3), 1, false);
    assert_eq!(unitary.len(), 3);
}

#[test]
fn partition_combinatorics() {
    assert_eq!(hook_lengths(&p(&[2])).into_iter().collect::<BTreeSet<_>>(), [1, 2].into());
    let mut h = hook_lengths(&p(&[2, 1]));
    h.sort_unstable();
    assert_eq!(h, vec![1, 1, 3]);
    assert!(d_core(&p(&[2]), 2).is_empty());
    assert!(d_core(&p(&[2, 1, 1]), 2).is_empty());
    assert_eq!(d_quotient(&p(&[2, 1, 1]), 2).iter().map(Partition::size).sum::<u64>(), 2);
    let t = core_tower(&p(&[2]), 2);
    assert_eq!(t.entries.keys().filter(|k| k.0 == 0).count(), 0);
    assert_eq!(t.entries.iter().filter(|(k, _)| k.0 == 1).map(|(_, v)| v.size()).sum::<u64>(), 1);
    for m in 0..=20u32 {
        assert_eq!(partitions_of(m).len() as u64, partition_count(m as u64));
    }
    let u4 = strata_u(4, 2);
    assert_eq!([0, 1, 2].map(|g| u4.get(&g).map_or(0, Vec::len)), [3, 1, 1]);
    let d2 = strata_d(2, 2);
    assert_eq!([0, 1].map(|g| d2.get(&g).map_or(0, Vec::len)), [1, 1]);
}

#[test]
fn semisimple_and_label_counts() {
    let c = ctx(3, 1, 2);
    assert_eq!(enumerate_semisimple(&c, 2, false).len(), 6);
    assert_eq!(enumerate_semisimple(&c, 2, true).len(), 1);
    assert_eq!(count(&c, 2, GroupKind::Gl), (2, 2));
    assert_eq!(count(&c, 2, GroupKind::Sl), (3, 3));
    assert_eq!(count(&ctx(2, -1, 3), 2, GroupKind::Gl), (2, 2));

    let mut kappas: Vec<(u64, u64)> = enumerate_iibr(&c, 2).iter().map(|x| kappa_ibr(&c, x)).collect();
    kappas.sort_unstable();
    assert_eq!(kappas, vec![(1, 1), (1, 2)]);
    for x in enumerate_iibr(&c, 2) {
        let want = if x.mu[0] == p(&[2]) { Some(0) } else { Some(1) };
        assert_eq!(omega(&c, &x).deg(), want);
    }
}

#[test]
fn valuations() {
    assert_eq!(nu_valuation(&ctx(3, 1, 2), 1), 1);
    assert_eq!(nu_valuation(&ctx(3, 1, 2), 2), 3);
    assert_eq!(nu_valuation(&ctx(4, 1, 3), 1), 1);
    assert_eq!(nu_valuation(&ctx(3, 1, 5), 1), 0);
    let c = ctx(3, 1, 2);
    for x in enumerate_iibr(&c, 2) {
        assert_eq!(defect_valuation(&c, &x), 4);
    }
    let trivial_21 = enumerate_iibr(&c, 3).into_iter().find(|x| x.mu == vec![p(&[2, 1])]).unwrap();
    assert_eq!(defect_valuation(&c, &trivial_21), 3);
}

#[test]
fn brute_force_class_numbers() {
    // Closed forms: k(GL2(q)) = q² − 1, k(GU2(q)) = (q + 1)²,
    // k(SL2(q)) = q + 4 for odd q and q + 1 for even q.
    for q in [2u64, 3, 4, 5] {
        assert_eq!(gl_group(2, q).unwrap().conjugacy_classes().reps.len() as u64, q * q - 1);
        assert_eq!(gu_group(2, q).unwrap().conjugacy_classes().reps.len() as u64, (q + 1) * (q + 1));
        let k_sl = if q % 2 == 1 { q + 4 } else { q + 1 };
        assert_eq!(sl_group(2, q).unwrap().conjugacy_classes().reps.len() as u64, k_sl);
    }
    assert_eq!(gl_group(2, 3).unwrap().ell_regular_class_count(2), 2);
    assert_eq!(sl_group(2, 3).unwrap().ell_regular_class_count(2), 3);
    assert_eq!(gu_group(2, 2).unwrap().order(), 18);
    assert_eq!(gu_group(2, 2).unwrap().ell_regular_class_count(3), 2);
}

#[test]
fn finite_fields() {
    let f = make_field(3, 2).unwrap();
    assert_eq!(f.order(f.gen()), 8);
    let z4 = f.element_of_order(4).unwrap();
    assert_eq!(f.mul(z4, z4), f.minus_one());
    let two_z4 = f.mul(f.from_int(2), z4);
    let l = f.sqrt(two_z4).unwrap();
    assert_eq!(f.mul(l, l), two_z4);
    assert!(make_field(3, 1).unwrap().sqrt(make_field(3, 1).unwrap().from_int(2)).is_err());
    let g4 = make_field(2, 2).unwrap();
    assert_eq!(g4.frobenius_power(g4.gen(), 1), g4.mul(g4.gen(), g4.gen()));
}

#[test]
fn vandermonde_determinant() {
    let c = ctx(4, 1, 3);
    let f = field_for(&c, 0).unwrap();
    let v = vandermonde_v0(&f, 3).unwrap();
    assert_eq!(v.det(&f), Fe::ONE);
}

#[test]
fn specialness_and_determinants() {
    let c43 = ctx(4, 1, 3);
    assert!(!is_special_basic(&c43, &BasicShape::r(1, 1, 0, &[])).unwrap());
    assert!(is_special_basic(&c43, &BasicShape::r(1, 0, 1, &[])).unwrap());
    assert!(is_special_basic(&ctx(7, 1, 2), &BasicShape::s(1, 1, &[])).unwrap());

    let c115 = ctx(11, 1, 5);
    let b = BasicShape::r(1, 0, 1, &[]);
    let d = det_info_basic(&c115, &b).unwrap();
    assert_eq!((d.order_det_r, d.order_det_rc, d.order_det_n), (1, 2, 2));
    assert_eq!(splitting_count(&c115, &RadicalShape::basic(b)).unwrap(), 5);

    let single = RadicalShape::basic(BasicShape::r(1, 0, 1, &[]));
    assert!(is_special(&c43, &single).unwrap());
    assert_eq!(exceptional_weight_case(&c43, &single).unwrap(), ExceptionalCase::Ell3);
    assert_eq!(splitting_count(&c43, &single).unwrap(), 1);

    let c72 = ctx(7, 1, 2);
    let em = det_info_basic(&c72, &BasicShape::eminus(1, 1, &[])).unwrap();
    assert_eq!((em.order_det_r, em.order_det_rc), (1, 3));
    assert_eq!(
        exceptional_weight_case(&c72, &RadicalShape::basic(BasicShape::r(1, 1, 0, &[]))).unwrap(),
        ExceptionalCase::None
    );
    assert_eq!(substitute_d(&c72, &BasicShape::r(3, 2, 0, &[])).unwrap(), BasicShape::r(3, 2, 0, &[]));
    assert_eq!(substitute_d(&c72, &BasicShape::r(3, 0, 1, &[])).unwrap(), BasicShape::eminus(3, 1, &[]));
    assert_eq!(substitute_d(&c72, &BasicShape::r(1, 0, 0, &[1, 2])).unwrap(), BasicShape::s(1, 1, &[2]));
}
