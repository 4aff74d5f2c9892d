use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hkr_core::fgl::{
    additive, artin_hasse, g_lambda, height_h_check, is_homomorphism, minimal_coordinates,
    psi_homomorphism_check, truncated_exponential,
};
use hkr_core::gadual::{
    bockstein_leibniz_check, colie_complex, colie_differential_text, deformation_class_check, ext_table,
    BaseRing,
};
use hkr_core::liealg::{
    gamma_p_verschiebung_checks, jacobson_l, left_normed_rank, lie_to_assoc, norm_element,
    restricted_checks, w_element,
};
use hkr_core::specseq::{
    adams_allowed_pages, adams_vanishing_check, all_pages, converges, extension_edge, infinity_page,
    initial_page, random_filtered, random_weight_pure, split_generator, split_vanishing_check,
    turn_page, FilteredComplex,
};
use hkr_core::witt::WittPolynomialSystem;
use hkr_core::ring::valuation_p;

use crate::config::{ConfigError, SuiteConfig};
use crate::report::Report;

pub const SUITES: [&str; 5] = ["witt", "fgl", "lie", "gadual", "specseq"];

/// Runs one suite, or every suite for `"all"`. Failing checks are recorded
/// in the report; only configuration problems are errors.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    if name != "all" && !SUITES.contains(&name) {
        return Err(ConfigError::UnknownSuite(name.to_owned()));
    }
    let start = Instant::now();
    let params = serde_json::to_value(cfg).expect("config serializes");
    let mut report = Report::new(name, params);
    for suite in SUITES.iter().filter(|s| name == "all" || **s == name) {
        for &p in &cfg.primes {
            match *suite {
                "witt" => witt_suite(&mut report, cfg, p),
                "fgl" => fgl_suite(&mut report, cfg, p),
                "lie" => lie_suite(&mut report, cfg, p),
                "gadual" => gadual_suite(&mut report, cfg, p),
                _ => specseq_suite(&mut report, cfg, p),
            }
        }
    }
    let elapsed = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(report.finish(elapsed))
}

fn rng_for(cfg: &SuiteConfig, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(tag))
}

fn witt_suite(report: &mut Report, cfg: &SuiteConfig, p: u64) {
    let n = cfg.witt_length_for(p);
    let prefix = format!("witt/p{p}/n{n}");
    let sys = match WittPolynomialSystem::shared(p, n) {
        Ok(s) => s,
        Err(e) => {
            report.record(format!("{prefix}/build"), "Witt structure polynomials", false, json!({ "error": e.to_string() }));
            return;
        }
    };
    report.record(
        format!("{prefix}/integrality"),
        "sum, product, negation and Frobenius polynomials have integer coefficients",
        sys.all_integral(),
        json!({ "max_terms": sys.max_terms() }),
    );
    report.record_result(
        format!("{prefix}/ghost_homomorphism"),
        "ghost components are ring homomorphisms and Φ_i∘F = Φ_{i+1}",
        sys.check_ghost_identities().map(|ok| (ok, Value::Null)),
    );
    report.record_result(
        format!("{prefix}/frobenius_congruence"),
        "F_i ≡ T_i^p mod p",
        sys.check_frobenius_congruence().map(|ok| (ok, Value::Null)),
    );
    let g_terms: Result<Vec<usize>, _> = (0..n).map(|i| sys.sekiguchi_suwa_g(i).map(|g| g.num_terms())).collect();
    report.record_result(
        format!("{prefix}/sekiguchi_suwa_integral"),
        "G_i = (F_i - T_i^p)/p is integral",
        g_terms.map(|t| (true, json!({ "terms": t }))),
    );
    for i in 0..n.min(3) {
        report.record_result(
            format!("{prefix}/recursion/i{i}"),
            "Sekiguchi–Suwa recursion for G_i modulo p",
            sys.check_recursion(i).map(|c| {
                (c.mod_p, json!({ "exact_over_z": c.exact, "difference_terms": c.difference_terms }))
            }),
        );
    }
    let dg: Result<(bool, Value), _> = (0..n)
        .map(|i| sys.dg_at_origin(i))
        .collect::<Result<Vec<_>, _>>()
        .map(|rows| {
            let ok = rows.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, c)| {
                    let expect = if j == i + 1 { hkr_core::ring::int(1) } else { hkr_core::ring::int(0) };
                    valuation_p(&(c - &expect), p).at_least(1)
                })
            });
            (ok, json!({ "indices": n }))
        });
    report.record_result(format!("{prefix}/dG_at_origin"), "dG_i at T = 0 is dT_{i+1} mod p", dg);
}

fn fgl_suite(report: &mut Report, cfg: &SuiteConfig, p: u64) {
    let prefix = format!("fgl/p{p}");
    let d = cfg.degree_t.max(2 * p as u32);
    report.record_result(
        format!("{prefix}/g_lambda_axioms"),
        "v + w + λvw is a formal group law",
        g_lambda(p as u32, d).axioms().map(|a| (a.all(), json!(a))),
    );
    let split = truncated_exponential(p).and_then(|e| {
        let (ga, gl) = (additive(d), g_lambda(p as u32, d));
        let low = is_homomorphism(&e, &ga, &gl, p as u32 - 1, d)?;
        let high = is_homomorphism(&e, &ga, &gl, p as u32, d)?;
        Ok((low && !high, json!({ "degree": d, "mod_lambda_p_minus_1": low, "mod_lambda_p": high })))
    });
    report.record_result(
        format!("{prefix}/truncated_exponential_split"),
        "E_λ: Ĝ_a → Ĝ_λ is a homomorphism modulo λ^{p-1} and not modulo λ^p",
        split,
    );
    report.record_result(
        format!("{prefix}/artin_hasse"),
        "the Artin–Hasse exponential is p-integral",
        artin_hasse(p, 30).map(|ah| (ah.is_p_integral(p), json!({ "degree": 30 }))),
    );
    let dl = cfg.degree_lambda_for(p);
    let m = minimal_coordinates(p, dl);
    report.record_result(
        format!("{prefix}/psi/m{m}"),
        "Ψ is p-integral, ≡ E_λ mod λ^{p-1}, and a homomorphism W → Ĝ_λ killing V - [λ^{p-1}]",
        psi_homomorphism_check(p, m, cfg.degree_t, dl).map(|c| (c.passed(), json!(c))),
    );
    for h in (1..=2).filter(|&h| h == 1 || p.pow(h) <= 4) {
        report.record_result(
            format!("{prefix}/height{h}"),
            "height-h law: group law axioms and λ-triviality below λ^{p^h - 1}",
            height_h_check(p, h).map(|c| (c.axioms.all() && c.integral && c.trivial_below_split_order, json!(c))),
        );
    }
}

fn lie_suite(report: &mut Report, cfg: &SuiteConfig, p: u64) {
    let prefix = format!("lie/p{p}");
    report.record_result(
        format!("{prefix}/w_to_norm"),
        "w ↦ N(X_1⋯X_p) in the free associative algebra",
        w_element(p).and_then(|w| {
            let n = norm_element(p)?;
            Ok((lie_to_assoc(&w) == n, json!({ "terms": w.num_terms() })))
        }),
    );
    report.record_result(
        format!("{prefix}/left_normed_rank"),
        "left-normed brackets span Lie(p) of rank (p-1)!",
        left_normed_rank(p).map(|r| (r == (1..p).product::<u64>() as usize, json!({ "rank": r }))),
    );
    report.record_result(
        format!("{prefix}/jacobson"),
        "(x + y)^p = x^p + y^p + L(x, y)",
        jacobson_l(p).map(|l| (true, json!({ "L": l.to_string() }))),
    );
    let n = cfg.matrix_dim;
    report.record_result(
        format!("{prefix}/restricted/n{n}"),
        "gl_n(F_p) with X ↦ X^p satisfies the restricted Lie algebra axioms",
        restricted_checks(n, p, cfg.trials, cfg.seed).map(|r| (r.passed(), json!(r))),
    );
    if p <= 3 {
        report.record_result(
            format!("{prefix}/gamma_verschiebung/n{n}"),
            "V∘N agrees with w, and [V(z), y] with the nested bracket, on Γ^p gl_n",
            gamma_p_verschiebung_checks(n, p, cfg.trials, cfg.seed).map(|r| (r.passed(), json!(r))),
        );
    }
}

fn gadual_suite(report: &mut Report, cfg: &SuiteConfig, p: u64) {
    let n = cfg.witt_length_for(p);
    let prefix = format!("gadual/p{p}");
    let colie = colie_complex(p, n).map(|c| {
        let flat = c.reduce_to(BaseRing::Zp2(p)).complex().expand();
        let mut ok = true;
        let mut images = Vec::new();
        for i in 0..n {
            let mut z = vec![0; n];
            z[i] = 1;
            match flat.bockstein(-1, &z) {
                Ok(b) => {
                    let mut expect = vec![0; n];
                    if i + 1 < n {
                        expect[i + 1] = 1;
                    }
                    ok &= b == expect;
                    images.push(format!("Bock(dS_{i}) = {}", flat.describe(0, &b)));
                }
                Err(e) => {
                    ok = false;
                    images.push(e.to_string());
                }
            }
        }
        (ok, json!({ "differential": colie_differential_text(&c), "bockstein": images }))
    });
    report.record_result(
        format!("{prefix}/n{n}/colie_bockstein"),
        "Bock(dS_i) = dT_{i+1} on the co-Lie complex",
        colie,
    );
    report.record_result(
        format!("{prefix}/leibniz"),
        "the Bockstein is a derivation for ⊗ and Hom",
        bockstein_leibniz_check(p, cfg.trials, cfg.seed).map(|r| (r.passed(), json!(r))),
    );
    report.record_result(
        format!("{prefix}/n{n}/ext_table"),
        "Ext^*(ℓ, F_p) has ranks (n, 2n, n, 0)",
        ext_table(p, n).map(|t| (t.ranks() == vec![n, 2 * n, n, 0], json!(t))),
    );
    if n >= 2 {
        report.record_result(
            format!("{prefix}/n{n}/deformation_class"),
            "-τ∂_{S_0}λ^{p-1} = -λ^{p-1}Bock(τ∂_{T_1})",
            deformation_class_check(p, n).map(|c| (c.passed(), json!(c))),
        );
    }
}

fn smallest_primitive_root(p: u64) -> u64 {
    (1..p.max(2))
        .find(|&m| adams_allowed_pages(p, m, 2).is_ok())
        .expect("every prime has a primitive root")
}

fn two_step(p: u64) -> FilteredComplex {
    let f = hkr_core::ring::Modulus::new(p, 1).expect("prime");
    let d = hkr_core::linalg::Matrix::from_rows(f, &[vec![1]]);
    FilteredComplex::from_levels(p, 0, vec![d], vec![vec![0], vec![1]], 1).expect("filtered")
}

fn specseq_suite(report: &mut Report, cfg: &SuiteConfig, p: u64) {
    let prefix = format!("specseq/p{p}");
    let fc = two_step(p);
    let e2 = initial_page(&fc);
    let ok = e2.total_dim() == 2
        && e2.d_rank_total() == 1
        && turn_page(&e2, &fc).is_ok_and(|e3| e3.is_zero())
        && converges(&fc);
    report.record(
        format!("{prefix}/two_step"),
        "two-step complex: d_2 is an isomorphism and E_3 = 0",
        ok,
        json!({ "E_2": e2.entries() }),
    );

    let mut rng = rng_for(cfg, p);
    let mut ok = true;
    let mut nonzero = 0;
    for _ in 0..cfg.trials {
        let (d, l) = random_filtered(p, 4, 2, 3, |_| true, &mut rng);
        let fc = FilteredComplex::from_levels(p, 0, d, l, 3).expect("generated complexes are filtered");
        let h: usize = fc.degrees().map(|k| fc.cohomology_dim(k)).sum();
        ok &= converges(&fc) && infinity_page(&fc).total_dim() == h && fc.total_dim() <= 8;
        nonzero += (h > 0) as usize;
        let shrink = all_pages(&fc).is_ok_and(|pages| {
            pages.windows(2).all(|w| {
                w[1].groups()
                    .all(|g| w[0].group(g.filtration, g.degree).is_some_and(|q| g.dim() <= q.dim()))
            })
        });
        ok &= shrink;
    }
    report.record(
        format!("{prefix}/convergence"),
        "E_∞ is gr H(C) for bounded filtrations, and pages only shrink",
        ok,
        json!({ "complexes": cfg.trials, "with_cohomology": nonzero }),
    );

    for n in 0..3usize {
        let mut rng = rng_for(cfg, 100 * p + n as u64);
        let mut ok = true;
        let mut nonzero = 0;
        let mut first_failure = Value::Null;
        for t in 0..cfg.trials {
            let res = split_generator(p, n, &mut rng).and_then(|inst| {
                let r = split_vanishing_check(&inst.complex, &inst.split)?;
                let e = extension_edge(&inst.complex, &inst.split)?;
                let expect = if inst.twist == 0 { 0 } else { inst.complex.gr_cohomology_dim(0) };
                Ok((r.passed() && r.first_open_rank == expect && e.matches_differential, r.first_open_rank))
            });
            let good = matches!(res, Ok((true, _)));
            if let Ok((_, rank)) = res {
                nonzero += (rank > 0) as usize;
            }
            if !good && first_failure.is_null() {
                first_failure = json!({ "instance": t, "detail": format!("{res:?}") });
            }
            ok &= good;
        }
        report.record(
            format!("{prefix}/split/n{n}"),
            "split to order n: d_r = 0 for r ≤ n+1, and H(e) = d_{n+2}",
            ok,
            json!({ "instances": cfg.trials, "nonzero_d_n_plus_2": nonzero, "first_failure": first_failure }),
        );
    }

    let m = smallest_primitive_root(p);
    let mut rng = rng_for(cfg, 1000 + p);
    let allowed = adams_allowed_pages(p, m, 13);
    let expect: Vec<u32> = (2..=13).filter(|r| (r - 1) % (p as u32 - 1) == 0).collect();
    let mut ok = allowed.as_ref().is_ok_and(|a| *a == expect);
    let mut forbidden = 0;
    for _ in 0..cfg.trials {
        match random_weight_pure(p, m, 4, 3, 6, &mut rng).and_then(|fc| adams_vanishing_check(&fc, m)) {
            Ok(r) => {
                ok &= r.passed();
                forbidden += r.forbidden_ranks.len();
            }
            Err(_) => ok = false,
        }
    }
    report.record(
        format!("{prefix}/adams"),
        "with ψ_m acting by m^i on gr^i, d_r = 0 unless r ≡ 1 mod p-1",
        ok,
        json!({ "m": m, "allowed": allowed.ok(), "complexes": cfg.trials, "forbidden_pages_checked": forbidden }),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_config_error() {
        assert!(matches!(
            run_suite("nope", &SuiteConfig::default()),
            Err(ConfigError::UnknownSuite(_))
        ));
    }

    #[test]
    fn fgl_rejects_seven() {
        let cfg = SuiteConfig::default().with_primes(&[7]);
        assert_eq!(run_suite("fgl", &cfg), Err(ConfigError::UnsupportedPrime(7)));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(smallest_primitive_root(2), 1);
        assert_eq!(smallest_primitive_root(3), 2);
        assert_eq!(smallest_primitive_root(5), 2);
    }
}
