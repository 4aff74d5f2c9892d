//! One line per acceptance criterion, each with its runtime bound. Exits
//! nonzero if any criterion fails or overruns.

use std::time::{Duration, Instant};

use hkr_cli::{demo_gm_restricted, demo_projective_space, run_suite, Report, SuiteConfig};

struct Outcome {
    ok: bool,
    detail: String,
}

fn suite(name: &str, cfg: &SuiteConfig) -> Report {
    run_suite(name, cfg).expect("acceptance configurations are valid")
}

/// Every record whose name contains one of `keys` passed, and at least
/// `min` such records exist.
fn select(report: &Report, keys: &[&str], min: usize) -> Outcome {
    let hits: Vec<_> = report
        .checks
        .iter()
        .filter(|c| keys.iter().any(|k| c.name.contains(k)))
        .collect();
    let failed: Vec<&str> = hits.iter().filter(|c| c.status != hkr_cli::Status::Pass).map(|c| c.name.as_str()).collect();
    Outcome {
        ok: hits.len() >= min && failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{} checks", hits.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    }
}

fn all_of(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        ok: parts.iter().all(|o| o.ok),
        detail: parts.iter().map(|o| o.detail.as_str()).collect::<Vec<_>>().join("; "),
    }
}

fn cfg(primes: &[u64]) -> SuiteConfig {
    SuiteConfig::default().with_primes(primes)
}

fn witt_integrality() -> Outcome {
    let c = SuiteConfig { witt_length: 4, ..cfg(&[2, 3, 5]) };
    let r = suite("witt", &c);
    select(
        &r,
        &["p2/n4/integrality", "p3/n3/integrality", "p5/n2/integrality", "ghost_homomorphism", "sekiguchi_suwa_integral"],
        9,
    )
}

fn sekiguchi_suwa() -> Outcome {
    let r = suite("witt", &cfg(&[2, 3]));
    select(&r, &["/recursion/i", "dG_at_origin"], 8)
}

fn truncated_exponential() -> Outcome {
    let r = suite("fgl", &cfg(&[2, 3, 5]));
    select(&r, &["truncated_exponential_split"], 3)
}

fn artin_hasse_and_psi() -> Outcome {
    let ah = suite("fgl", &cfg(&[2, 3, 5]));
    let two = suite("fgl", &SuiteConfig { degree_t: 4, degree_lambda: Some(3), ..cfg(&[2]) });
    let three = suite("fgl", &cfg(&[3]));
    all_of(vec![
        select(&ah, &["artin_hasse"], 3),
        select(&two, &["fgl/p2/psi/m2"], 1),
        select(&three, &["fgl/p3/psi/m1"], 1),
    ])
}

fn bockstein_calculus() -> Outcome {
    let r = suite("gadual", &cfg(&[2, 3]));
    select(&r, &["colie_bockstein", "leibniz", "ext_table", "deformation_class"], 8)
}

fn restricted_lie() -> Outcome {
    let mut parts = Vec::new();
    for (n, p) in [(2, 2), (3, 3), (2, 5)] {
        let r = suite("lie", &SuiteConfig { matrix_dim: n, ..cfg(&[p]) });
        parts.push(select(&r, &["w_to_norm", "jacobson", &format!("restricted/n{n}")], 3));
    }
    for n in 1..=3 {
        let r = suite("lie", &SuiteConfig { matrix_dim: n, ..cfg(&[2, 3]) });
        parts.push(select(&r, &["gamma_verschiebung"], 2));
    }
    all_of(parts)
}

fn spectral_sequences() -> Outcome {
    let r = suite("specseq", &cfg(&[2, 3, 5]));
    all_of(vec![
        select(&r, &["convergence", "two_step"], 6),
        select(&r, &["/split/n"], 9),
        select(&r, &["p3/adams", "p5/adams"], 2),
    ])
}

fn height_laws() -> Outcome {
    let r = suite("fgl", &cfg(&[2, 3]));
    select(&r, &["fgl/p2/height1", "fgl/p2/height2", "fgl/p3/height1"], 3)
}

fn demos() -> Outcome {
    let mut parts = Vec::new();
    for p in [2, 3, 5] {
        for n in [1, 2, 4] {
            let r = demo_projective_space(n, p).expect("valid demo input");
            parts.push(select(&r, &["V(c) = c^p", "d_p"], 2));
        }
        let r = demo_gm_restricted(p).expect("valid demo input");
        parts.push(select(&r, &["x d/dx"], 1));
    }
    all_of(parts)
}

fn determinism() -> Outcome {
    let c = cfg(&[2, 3]);
    let a = suite("all", &c).to_json();
    let b = suite("all", &c).to_json();
    Outcome {
        ok: a == b,
        detail: format!("{} bytes", a.len()),
    }
}

fn main() {
    type Criterion = (u32, &'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "Witt integrality and ghost identities", 30, witt_integrality),
        (2, "Sekiguchi–Suwa recursion and dG_i at the origin", 10, sekiguchi_suwa),
        (3, "E_λ splits to order p-2", 10, truncated_exponential),
        (4, "Artin–Hasse and Ψ integrality and homomorphism", 60, artin_hasse_and_psi),
        (5, "Bockstein calculus", 30, bockstein_calculus),
        (6, "restricted Lie suite", 60, restricted_lie),
        (7, "spectral sequence engine", 60, spectral_sequences),
        (8, "height-h laws", 30, height_laws),
        (9, "demos", 5, demos),
        (10, "determinism of `run_suite all`", 120, determinism),
    ];
    let mut failures = 0;
    for (n, name, bound, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(bound);
        let ok = out.ok && in_time;
        failures += (!ok) as usize;
        println!(
            "criterion {n:>2} {}: {name} ({} ms, bound {bound} s) {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_millis(),
            if in_time { out.detail } else { format!("{}; over the time bound", out.detail) },
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
