use std::sync::Arc;

use hkr_core::ring::{
    exact_div_p, int, rat, reduce_mod, Modulus, ModPrimePower, Rational, RingElem, SeriesRing,
    WeightedSeries,
};
use num_bigint::BigInt;
use proptest::prelude::*;

type S = WeightedSeries<Rational>;

fn ring() -> Arc<SeriesRing<Rational>> {
    SeriesRing::builder(())
        .capped("lambda", -1, 2)
        .var("u", 1)
        .var("v", 1)
        .degree(4)
        .build()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, prop::sample::select(vec![1i64, 2, 3, 5])).prop_map(|(n, d)| rat(n, d))
}

fn series_in(r: Arc<SeriesRing<Rational>>, zero_constant: bool) -> impl Strategy<Value = S> {
    let n = r.num_vars();
    prop::collection::vec((prop::collection::vec(0u32..3, n), small_rational()), 0..6).prop_map(
        move |terms| {
            let terms = terms
                .into_iter()
                .filter(|(e, _)| !zero_constant || e.iter().any(|&x| x > 0));
            S::from_terms(&r, terms)
        },
    )
}

proptest! {
    #[test]
    fn addition_is_associative(a in series_in(ring(), false), b in series_in(ring(), false), c in series_in(ring(), false)) {
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
    }

    #[test]
    fn multiplication_distributes(a in series_in(ring(), false), b in series_in(ring(), false), c in series_in(ring(), false)) {
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
    }

    #[test]
    fn multiplication_is_associative_and_commutative(a in series_in(ring(), false), b in series_in(ring(), false), c in series_in(ring(), false)) {
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b), b.times(&a));
    }

    #[test]
    fn exact_division_inverts_scaling(n in -1000i64..1000, d in prop::sample::select(vec![1i64, 7, 11]), e in 0u32..5, p in prop::sample::select(vec![2u64, 3, 5])) {
        let x = rat(n, d);
        let scaled = &x * Rational::from_integer(BigInt::from(p).pow(e));
        prop_assert_eq!(exact_div_p(&scaled, e, p).unwrap(), x);
    }

    #[test]
    fn reduction_is_a_ring_map(a in -500i64..500, b in -500i64..500, da in prop::sample::select(vec![1i64, 2, 4, 7]), db in prop::sample::select(vec![1i64, 5, 8])) {
        let m = Modulus::new(3, 2).unwrap();
        let (x, y) = (rat(a, da), rat(b, db));
        let rx = reduce_mod(&x, m).unwrap();
        let ry = reduce_mod(&y, m).unwrap();
        prop_assert_eq!(reduce_mod(&(&x + &y), m).unwrap(), rx.plus(&ry));
        prop_assert_eq!(reduce_mod(&(&x * &y), m).unwrap(), rx.times(&ry));
    }

    #[test]
    fn substitution_composes(
        f in series_in(SeriesRing::builder(()).var("a", 1).var("b", 1).degree(4).build(), false),
        ga in series_in(SeriesRing::builder(()).var("c", 1).degree(4).build(), true),
        gb in series_in(SeriesRing::builder(()).var("c", 1).degree(4).build(), true),
        h in series_in(SeriesRing::builder(()).var("d", 1).degree(4).build(), true),
    ) {
        let cring = ga.ring().clone();
        let dring = h.ring().clone();
        let ga = ga.to_ring(&cring).unwrap();
        let gb = gb.to_ring(&cring).unwrap();
        let step = f.substitute(&cring, &[("a", ga.clone()), ("b", gb.clone())]).unwrap();
        let left = step.substitute(&dring, &[("c", h.clone())]).unwrap();
        let ga_h = ga.substitute(&dring, &[("c", h.clone())]).unwrap();
        let gb_h = gb.substitute(&dring, &[("c", h.clone())]).unwrap();
        let right = f.substitute(&dring, &[("a", ga_h), ("b", gb_h)]).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn exp_is_additive(f in series_in(ring(), true), g in series_in(ring(), true)) {
        let lhs = f.plus(&g).exp_truncated().unwrap();
        let rhs = f.exp_truncated().unwrap().times(&g.exp_truncated().unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn modular_series_reduce_consistently() {
    let m = Modulus::new(2, 2).unwrap();
    let qr = ring();
    let mr = SeriesRing::<ModPrimePower>::builder(m)
        .capped("lambda", -1, 2)
        .var("u", 1)
        .var("v", 1)
        .degree(4)
        .build();
    let f = S::from_terms(&qr, [(vec![0, 1, 0], rat(1, 3)), (vec![1, 1, 1], int(5))]);
    let g = S::from_terms(&qr, [(vec![0, 0, 1], int(2)), (vec![0, 1, 0], rat(-1, 5))]);
    let red = |s: &S| s.map_coeffs(&mr, |c| reduce_mod(c, m)).unwrap();
    assert_eq!(red(&f.times(&g)), red(&f).times(&red(&g)));
}
