use std::time::Instant;

use hkr_core::witt::WittPolynomialSystem;

#[test]
fn structure_polynomials_are_integral_at_the_caps() {
    for (p, n) in [(2, 4), (3, 3), (5, 2)] {
        let start = Instant::now();
        let sys = WittPolynomialSystem::shared(p, n).unwrap();
        assert!(sys.all_integral());
        assert!(sys.check_ghost_identities().unwrap(), "p={p} n={n}");
        assert!(sys.check_frobenius_congruence().unwrap());
        for i in 0..n {
            sys.sekiguchi_suwa_g(i).unwrap();
        }
        eprintln!("p={p} n={n}: max terms {} in {:?}", sys.max_terms(), start.elapsed());
    }
}

#[test]
fn recursion_holds_modulo_p() {
    for (p, n) in [(2, 3), (3, 3)] {
        let sys = WittPolynomialSystem::shared(p, n).unwrap();
        for i in 0..n {
            let check = sys.check_recursion(i).unwrap();
            eprintln!("{check:?}");
            assert!(check.mod_p);
        }
    }
}
