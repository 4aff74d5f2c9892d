use serde_json::json;

use hkr_core::liealg::{derivation_pth_power, satisfies_leibniz, truncated_mul, TruncatedDerivation};
use hkr_core::linalg::Matrix;
use hkr_core::ring::Modulus;

use crate::config::{ConfigError, SUPPORTED_PRIMES};
use crate::report::Report;

fn check_prime(p: u64) -> Result<(), ConfigError> {
    if !SUPPORTED_PRIMES.contains(&p) {
        return Err(ConfigError::UnsupportedPrime(p));
    }
    Ok(())
}

fn monomial_text(k: usize) -> String {
    match k {
        0 => "1".to_owned(),
        1 => "c".to_owned(),
        _ => format!("c^{k}"),
    }
}

fn poly_text(v: &[u64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| if c == 1 { monomial_text(k) } else { format!("{c}*{}", monomial_text(k)) })
        .collect();
    if parts.is_empty() {
        "0".to_owned()
    } else {
        parts.join(" + ")
    }
}

fn basis(n: usize, k: usize) -> Vec<u64> {
    (0..n).map(|i| (i == k) as u64).collect()
}

/// Hodge cohomology of `P^n` over `F_p` as `F_p[c]/c^{n+1}`, with `c` in
/// bidegree `(1, 1)`. `V` is the derivation with `V(c) = c^p`; since the
/// Bockstein of the torsion-free lift vanishes, `d_p = [V, Bock] = 0`.
pub fn demo_projective_space(n: usize, p: u64) -> Result<Report, ConfigError> {
    check_prime(p)?;
    if n == 0 {
        return Err(ConfigError::OutOfRange { name: "dimension", value: 0, max: u64::MAX });
    }
    let mut report = Report::new("demo/projective-space", json!({ "n": n, "p": p }));
    let len = n + 1;
    let c = basis(len, 1);
    let mut cp = basis(len, 0);
    for _ in 0..p {
        cp = truncated_mul(p, &cp, &c);
    }
    let expect_zero = p as usize > n;
    report.record(
        "V(c) = c^p",
        "V(c) = c^p in F_p[c]/c^{n+1}",
        cp.iter().all(|&x| x == 0) == expect_zero && (expect_zero || cp == basis(len, p as usize)),
        json!({ "ring": format!("F_{p}[c]/c^{len}"), "V(c)": poly_text(&cp) }),
    );

    let value: Vec<i64> = cp.iter().map(|&x| x as i64).collect();
    let v = TruncatedDerivation::new(p, &value).map_err(|_| ConfigError::OutOfRange {
        name: "dimension",
        value: n as u64,
        max: u64::MAX,
    })?;
    let pairs: Vec<(Vec<u64>, Vec<u64>)> = (0..len)
        .flat_map(|i| (0..len).map(move |j| (basis(len, i), basis(len, j))))
        .collect();
    let action: Vec<String> = (0..len)
        .map(|k| {
            format!(
                "V({}) = {}  [({k},{k}) → ({},{})]",
                monomial_text(k),
                poly_text(&v.apply(&basis(len, k))),
                k + p as usize - 1,
                k + p as usize - 1
            )
        })
        .collect();
    report.record(
        "V is a derivation",
        "V extends to a derivation of the bigraded Hodge ring",
        satisfies_leibniz(p, &v.matrix(), &pairs),
        json!({ "V": v.to_string().replace('x', "c"), "action": action }),
    );

    let f = Modulus::new(p, 1).expect("prime");
    let bock = Matrix::zeros(f, len, len);
    let vm = v.matrix();
    let dp = vm.mul(&bock).sub(&bock.mul(&vm));
    report.record(
        "d_p = [V, Bock] = 0",
        "the torsion-free lift has zero Bockstein, so d_p = [V, Bock] vanishes and the sequence degenerates",
        dp.is_zero(),
        json!({ "bockstein": "0", "d_p_rank": dp.rank() }),
    );
    Ok(report.finish(0))
}

/// The restricted structure on vector fields of `G_m`: `(x∂_x)^{[p]} = x∂_x`
/// while `∂_x^{[p]} = 0`, computed on `F_p[x]/x^{3p}`.
pub fn demo_gm_restricted(p: u64) -> Result<Report, ConfigError> {
    check_prime(p)?;
    let mut report = Report::new("demo/gm-restricted", json!({ "p": p }));
    let trunc = 3 * p as usize;
    let xi = TruncatedDerivation::monomial(p, 1, trunc).expect("x d/dx is a derivation");
    let res = derivation_pth_power(&xi, p).map(|pow| {
        (pow == xi, json!({ "xi": xi.to_string(), "xi^[p]": pow.to_string(), "truncation": trunc }))
    });
    report.record_result(
        "(x d/dx)^[p] = x d/dx",
        "∂^{[p]} = ∂ for the multiplicative vector field, dual to V(c) = c^p",
        res,
    );
    let d = TruncatedDerivation::monomial(p, 0, trunc).expect("d/dx preserves (x^{3p})");
    let res = derivation_pth_power(&d, p).map(|pow| {
        (pow.is_zero(), json!({ "xi": d.to_string(), "xi^[p]": pow.to_string() }))
    });
    report.record_result("(d/dx)^[p] = 0", "the additive generator has zero p-th power", res);
    Ok(report.finish(0))
}
