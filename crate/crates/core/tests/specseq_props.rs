use std::collections::HashSet;

use hkr_core::specseq::{
    adams_vanishing_check, all_pages, converges, extension_edge, infinity_page, random_filtered,
    random_weight_pure, split_generator, split_vanishing_check, FilteredComplex,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// All vectors of `F_p^n`.
fn all_vectors(p: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn log_p(p: u64, mut n: usize) -> usize {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p as usize, 0);
        n /= p as usize;
        k += 1;
    }
    k
}

/// `dim H^k` by counting cocycles and coboundaries one vector at a time.
fn brute_force_cohomology(fc: &FilteredComplex, k: i32) -> usize {
    let p = fc.prime();
    let d = fc.diff(k);
    let cocycles = all_vectors(p, fc.dim(k))
        .into_iter()
        .filter(|v| fc.dim(k + 1) == 0 || d.apply(v).iter().all(|&x| x == 0))
        .count();
    let prev = fc.diff(k - 1);
    let boundaries: HashSet<Vec<u64>> = if fc.dim(k - 1) == 0 {
        HashSet::from([vec![0; fc.dim(k)]])
    } else {
        all_vectors(p, fc.dim(k - 1)).iter().map(|u| prev.apply(u)).collect()
    };
    log_p(p, cocycles) - log_p(p, boundaries.len())
}

fn gr_cohomology_dim(fc: &FilteredComplex, t: i64) -> usize {
    fc.degrees()
        .map(|k| {
            let n = fc.gr_basis(k, t).len();
            let out = if fc.gr_basis(k + 1, t).is_empty() { 0 } else { fc.gr_diff(k, t).rank() };
            let inc = if fc.gr_basis(k - 1, t).is_empty() || n == 0 { 0 } else { fc.gr_diff(k - 1, t).rank() };
            n - out - inc
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn infinity_page_matches_cohomology(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, l) = random_filtered(p, 4, 2, 3, |_| true, &mut rng);
        let fc = FilteredComplex::from_levels(p, 0, d, l, 3).unwrap();
        prop_assert!(fc.total_dim() <= 8);
        prop_assert!(converges(&fc));
        let h: usize = fc.degrees().map(|k| brute_force_cohomology(&fc, k)).sum();
        prop_assert_eq!(infinity_page(&fc).total_dim(), h);
    }

    #[test]
    fn pages_shrink(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d, l) = random_filtered(p, 4, 3, 3, |_| true, &mut rng);
        let fc = FilteredComplex::from_levels(p, 0, d, l, 3).unwrap();
        let pages = all_pages(&fc).unwrap();
        for w in pages.windows(2) {
            for g in w[1].groups() {
                let prev = w[0].group(g.filtration, g.degree).unwrap();
                prop_assert!(g.dim() <= prev.dim());
            }
            for g in w[0].groups() {
                if let Some(t) = w[0].group(g.filtration + w[0].r as i64 - 1, g.degree + 1) {
                    prop_assert!(t.differential.mul(&g.differential).is_zero());
                }
            }
        }
    }

    #[test]
    fn weight_forbidden_differentials_vanish(seed in any::<u64>(), pm in prop::sample::select(vec![(3u64, 2u64), (5, 2), (5, 3)])) {
        let (p, m) = pm;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fc = random_weight_pure(p, m, 4, 4, 6, &mut rng).unwrap();
        let r = adams_vanishing_check(&fc, m).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }
}

#[test]
fn split_vanishing_on_generated_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [2, 3] {
        for n in 0..3 {
            let mut nonzero = 0;
            for _ in 0..100 {
                let inst = split_generator(p, n, &mut rng).unwrap();
                let r = split_vanishing_check(&inst.complex, &inst.split).unwrap();
                assert!(r.passed(), "p={p} n={n}: {r:?}");
                // d_{n+2} is the twist times an injection on H(gr^0)
                let expect = if inst.twist == 0 { 0 } else { gr_cohomology_dim(&inst.complex, 0) };
                assert_eq!(r.first_open_rank, expect, "p={p} n={n}");
                let e = extension_edge(&inst.complex, &inst.split).unwrap();
                assert!(e.matches_differential, "p={p} n={n}");
                if r.first_open_rank > 0 {
                    nonzero += 1;
                }
            }
            assert!(nonzero >= 10, "p={p} n={n}: only {nonzero} instances with d_(n+2) ≠ 0");
        }
    }
}
