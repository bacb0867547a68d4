//! Numeric run configuration shared by the library and the CLI.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numeric::{parse_decimal, pow10};

/// Numeric policy: working precision, comparison tolerances, rational
/// reconstruction bounds and the property-test seed.
#[derive(Clone, Debug)]
pub struct Config {
    /// Significant decimal digits for square roots and rendered decimals.
    pub precision: u32,
    /// Absolute tolerance for value equality and pentagon residuals.
    pub tol: BigRational,
    /// Threshold below which |F| counts as zero.
    pub zero_tol: BigRational,
    /// Tolerance for declaring a value equal to a reconstructed rational.
    /// Much tighter than `tol`: any real is within ~1e-12 of a fraction with
    /// denominator <= 10^6, so the rationality verdict has to look at the
    /// full working precision.
    pub rational_tol: BigRational,
    /// Largest denominator attempted by rational reconstruction.
    pub max_denominator: BigInt,
    /// Seed for sampled gauge vectors.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: 50,
            tol: pow10(-9),
            zero_tol: pow10(-9),
            rational_tol: pow10(-30),
            max_denominator: BigInt::from(1_000_000u64),
            seed: 0,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        use num_traits::Signed;
        if self.precision < 20 {
            return Err(Error::InvalidConfig(format!(
                "precision must be at least 20, got {}",
                self.precision
            )));
        }
        for (name, t) in [("tol", &self.tol), ("zero_tol", &self.zero_tol), ("rational_tol", &self.rational_tol)] {
            if !t.is_positive() {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if self.tol < pow10(-(self.precision as i64)) {
            return Err(Error::InvalidConfig(format!(
                "tol is below 10^-{}, not representable at the chosen precision",
                self.precision
            )));
        }
        if self.max_denominator < BigInt::from(1) {
            return Err(Error::InvalidConfig("max_denominator must be at least 1".into()));
        }
        Ok(())
    }
}

/// JSON overrides for [`Config`]; all fields optional, numbers given as
/// decimal strings so tolerances stay exact.
#[derive(Debug, Default, Deserialize)]
pub struct ConfigOverrides {
    pub precision: Option<u32>,
    pub tol: Option<String>,
    pub zero_tol: Option<String>,
    pub rational_tol: Option<String>,
    pub max_denominator: Option<u64>,
    pub seed: Option<u64>,
}

impl ConfigOverrides {
    pub fn apply(self, mut config: Config) -> Result<Config> {
        if let Some(p) = self.precision {
            config.precision = p;
        }
        if let Some(t) = &self.tol {
            config.tol = parse_decimal(t)?;
        }
        if let Some(t) = &self.zero_tol {
            config.zero_tol = parse_decimal(t)?;
        }
        if let Some(t) = &self.rational_tol {
            config.rational_tol = parse_decimal(t)?;
        }
        if let Some(d) = self.max_denominator {
            config.max_denominator = BigInt::from(d);
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        config.validate()?;
        Ok(config)
    }
}
