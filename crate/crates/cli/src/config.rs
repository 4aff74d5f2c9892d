use serde::Serialize;

use hkr_core::witt::length_cap;

pub const SUPPORTED_PRIMES: [u64; 3] = [2, 3, 5];
pub const MAX_MATRIX_DIM: usize = 3;
pub const MAX_DEGREE_T: u32 = 10;
pub const MAX_DEGREE_LAMBDA: u32 = 6;
pub const MAX_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown suite `{0}` (expected witt, fgl, lie, gadual, specseq or all)")]
    UnknownSuite(String),
    #[error("prime {0} is not supported (expected 2, 3 or 5)")]
    UnsupportedPrime(u64),
    #[error("no primes given")]
    NoPrimes,
    #[error("{name} = {value} is outside 1..={max}")]
    OutOfRange { name: &'static str, value: u64, max: u64 },
}

/// Parameters shared by every suite. `witt_length` is clamped per prime to
/// the module cap; `degree_lambda = None` means `D_λ = p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub primes: Vec<u64>,
    pub witt_length: usize,
    pub degree_t: u32,
    pub degree_lambda: Option<u32>,
    pub matrix_dim: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip)]
    pub format: Format,
    /// Record wall time in reports; off by default so reports are
    /// byte-identical across runs.
    #[serde(skip)]
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            primes: vec![2, 3],
            witt_length: 3,
            degree_t: 6,
            degree_lambda: None,
            matrix_dim: 2,
            trials: 100,
            seed: 0,
            format: Format::Json,
            timing: false,
        }
    }
}

fn in_range(name: &'static str, value: u64, max: u64) -> Result<(), ConfigError> {
    if value == 0 || value > max {
        return Err(ConfigError::OutOfRange { name, value, max });
    }
    Ok(())
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.primes.is_empty() {
            return Err(ConfigError::NoPrimes);
        }
        if let Some(&p) = self.primes.iter().find(|p| !SUPPORTED_PRIMES.contains(p)) {
            return Err(ConfigError::UnsupportedPrime(p));
        }
        in_range("witt length", self.witt_length as u64, length_cap(2) as u64)?;
        in_range("degree-t", self.degree_t as u64, MAX_DEGREE_T as u64)?;
        if let Some(d) = self.degree_lambda {
            in_range("degree-lambda", d as u64, MAX_DEGREE_LAMBDA as u64)?;
        }
        in_range("matrix dimension", self.matrix_dim as u64, MAX_MATRIX_DIM as u64)?;
        in_range("trials", self.trials as u64, MAX_TRIALS as u64)?;
        Ok(())
    }

    pub fn witt_length_for(&self, p: u64) -> usize {
        self.witt_length.min(length_cap(p))
    }

    pub fn degree_lambda_for(&self, p: u64) -> u32 {
        self.degree_lambda.unwrap_or(p as u32)
    }

    pub fn with_primes(mut self, primes: &[u64]) -> Self {
        self.primes = primes.to_vec();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(SuiteConfig::default().validate().is_ok());
    }

    #[test]
    fn prime_cap() {
        let c = SuiteConfig::default().with_primes(&[7]);
        assert_eq!(c.validate(), Err(ConfigError::UnsupportedPrime(7)));
    }

    #[test]
    fn witt_length_is_clamped_per_prime() {
        let c = SuiteConfig {
            witt_length: 4,
            ..SuiteConfig::default()
        };
        assert_eq!(c.witt_length_for(2), 4);
        assert_eq!(c.witt_length_for(3), 3);
        assert_eq!(c.witt_length_for(5), 2);
        let bad = SuiteConfig {
            witt_length: 5,
            ..SuiteConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
