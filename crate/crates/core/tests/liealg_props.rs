use hkr_core::liealg::{
    derivation_pth_power, jacobson_l, left_normed_rank, lie_to_assoc, norm_element,
    restricted_checks, satisfies_leibniz, w_element, FreeAssoc, TruncatedDerivation,
};
use proptest::prelude::*;

#[test]
fn left_normed_span_has_full_rank() {
    for p in [2u64, 3, 5] {
        let expected = (1..p).product::<u64>() as usize;
        assert_eq!(left_normed_rank(p).unwrap(), expected);
    }
}

#[test]
fn w_goes_to_norm() {
    for p in [2, 3, 5] {
        assert_eq!(lie_to_assoc(&w_element(p).unwrap()), norm_element(p).unwrap());
    }
}

#[test]
fn jacobson_certified() {
    for p in [2u64, 3, 5] {
        let l = jacobson_l(p).unwrap();
        let x = FreeAssoc::letter(p, 0);
        let y = FreeAssoc::letter(p, 1);
        let lhs = x.add(&y).pow(p as u32);
        let rhs = x.pow(p as u32).add(&y.pow(p as u32)).add(&l.to_assoc());
        assert!(lhs.sub(&rhs).is_zero());
    }
}

#[test]
fn restricted_axioms_on_matrices() {
    for (n, p) in [(2, 2), (3, 3), (2, 5)] {
        let r = restricted_checks(n, p, 100, 2024).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

fn derivation_input() -> impl Strategy<Value = (u64, Vec<i64>, Vec<u64>, Vec<u64>)> {
    (prop::sample::select(vec![2u64, 3, 5]), 2usize..10).prop_flat_map(|(p, n)| {
        (
            Just(p),
            prop::collection::vec(0..p as i64, n),
            prop::collection::vec(0..p, n),
            prop::collection::vec(0..p, n),
        )
    })
}

proptest! {
    #[test]
    fn pth_power_is_a_derivation((p, mut v, f, g) in derivation_input()) {
        if !(v.len() as u64).is_multiple_of(p) {
            v[0] = 0;
        }
        let xi = TruncatedDerivation::new(p, &v).unwrap();
        let d = derivation_pth_power(&xi, p).unwrap();
        prop_assert!(satisfies_leibniz(p, &d.matrix(), &[(f, g)]));
    }
}
