use hkr_core::fgl::{
    additive, artin_hasse, g_lambda, law_ring, multiplicative, psi_homomorphism_check,
    psi_series, validate_fgl, FormalGroupLaw1D, Poly, LAMBDA,
};
use hkr_core::ring::{int, RingElem};
use proptest::prelude::*;

#[test]
fn artin_hasse_is_integral_to_degree_thirty() {
    for p in [2, 3, 5] {
        let ah = artin_hasse(p, 30).unwrap();
        assert!(ah.is_p_integral(p), "p = {p}");
        assert_eq!(ah.num_terms(), 31);
    }
}

#[test]
fn standard_laws_validate() {
    assert!(validate_fgl(&additive(6)));
    assert!(validate_fgl(&multiplicative(6)));
    assert!(validate_fgl(&g_lambda(4, 6)));
}

#[test]
fn wrong_lift_breaks_the_second_clause() {
    // Ψ(V T) = Ψ([λ^{p-1}] T) is sensitive to the exponent of λ: with
    // [λ^p] instead the first coordinate already disagrees.
    let psi = psi_series(2, 2, 4, 3).unwrap();
    let r = psi.ring().clone();
    let l = Poly::var(&r, LAMBDA).unwrap();
    let t = |i: usize| Poly::var(&r, &format!("T{i}")).unwrap();
    let vt = [Poly::zero(&r), t(0), t(1)];
    let wrong = [l.pow(2).times(&t(0)), l.pow(4).times(&t(1)), l.pow(8).times(&t(2))];
    let bind = |c: &[Poly; 3]| -> Vec<(&'static str, Poly)> {
        vec![("T0", c[0].clone()), ("T1", c[1].clone()), ("T2", c[2].clone())]
    };
    let a = psi.substitute(&r, &bind(&vt)).unwrap();
    let b = psi.substitute(&r, &bind(&wrong)).unwrap();
    assert_ne!(a, b);
    assert!(psi_homomorphism_check(2, 2, 4, 3).unwrap().passed());
}

proptest! {
    #[test]
    fn symmetric_perturbations_break_associativity(i in 2u32..4, j in 2u32..4, c in 1i64..5) {
        // adding c (v^i w^j + v^j w^i) keeps unit and symmetry but not associativity
        let r = law_ring(None, &["v", "w"], 7);
        let v = Poly::var(&r, "v").unwrap();
        let w = Poly::var(&r, "w").unwrap();
        let bump = v.pow(i as u64).times(&w.pow(j as u64))
            .plus(&v.pow(j as u64).times(&w.pow(i as u64)))
            .scale(&int(c));
        let f = FormalGroupLaw1D::new(v.plus(&w).plus(&bump)).unwrap();
        let ax = f.axioms().unwrap();
        prop_assert!(ax.unit && ax.commutative);
        prop_assert!(!ax.associative);
    }
}
