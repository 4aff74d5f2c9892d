use hkr_core::gadual::{
    bockstein_leibniz_check, cohomology_of_rep, deformation_class_check, ext_table,
    random_complex, rhom, BaseRing, RMatrix, ThetaComplex, ThetaModule,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn trivial_rep_cohomology_is_the_ring() {
    for p in [2, 3, 5] {
        for r in [BaseRing::Fp(p), BaseRing::Zp2(p), BaseRing::FpLambda(p), BaseRing::Zp2Lambda(p)] {
            let h = cohomology_of_rep(&ThetaModule::trivial(r, 1));
            assert!(h.h0.is_free() && h.h1.is_free());
            assert_eq!(h.h0.num_summands(), r.lambda_dim());
            assert_eq!(h.h1.num_summands(), r.lambda_dim());
        }
    }
}

#[test]
fn ext_ranks() {
    for p in [2, 3] {
        for n in [2, 3] {
            assert_eq!(ext_table(p, n).unwrap().ranks(), vec![n, 2 * n, n, 0]);
        }
    }
}

#[test]
fn deformation_class_agrees() {
    for (p, n) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        assert!(deformation_class_check(p, n).unwrap().passed());
    }
}

#[test]
fn leibniz_rules() {
    for p in [2, 3] {
        assert!(bockstein_leibniz_check(p, 100, 99).unwrap().passed());
    }
}

proptest! {
    #[test]
    fn bockstein_independent_of_lift(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_complex(p, &mut rng);
        let c = m.tensor(&m).unwrap().expand();
        for k in c.start..c.end() - 1 {
            let h = c.cohomology_mod_p(k);
            let next = c.cohomology_mod_p(k + 1);
            for (i, z) in h.cocycles.basis().iter().enumerate() {
                let w: Vec<u64> = (0..z.len()).map(|j| ((seed >> ((i + j) % 60)) & 1) * (j as u64 % p)).collect();
                let a = c.bockstein(k, z).unwrap();
                let b = c.bockstein_with_lift(k, z, Some(&w)).unwrap();
                prop_assert!(next.same_class(&a, &b));
            }
        }
    }

    #[test]
    fn rhom_of_theta_complexes_is_a_complex(c in 0i64..9) {
        // a scalar differential commutes with the Jordan block
        let ring = BaseRing::Zp2(3);
        let t = RMatrix::from_rows(ring, &[vec![0, 0], vec![1, 0]]);
        let d = RMatrix::identity(ring, 2).scale(c);
        let cx = hkr_core::gadual::RComplex::new(ring, 0, vec![2, 2], vec![d], vec![]).unwrap();
        let tc = ThetaComplex::new(cx, vec![t.clone(), t]).unwrap();
        let r = rhom(&tc, &tc).unwrap();
        for k in r.start()..r.end() - 1 {
            prop_assert!(r.diff(k + 1).mul(&r.diff(k)).is_zero());
        }
    }
}
