//! Probabilities stored as base-2 exponents.
//!
//! Values such as `2^(-10^4)` underflow an `f64`, and values such as
//! `1 - 2^(-10^4)` round to exactly one. [`LogProb`] keeps both `log2(p)` and
//! `log2(1 - p)` so either end of the unit interval stays resolvable.

use std::cmp::Ordering;
use std::f64::consts::{LN_2, LOG10_2};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogProb {
    log2: f64,
    log2_complement: f64,
}

/// `log2(1 - 2^x)` for `x <= 0`.
fn log2_one_minus_exp2(x: f64) -> f64 {
    if x == 0.0 {
        return f64::NEG_INFINITY;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    // Near x = 0 the difference 1 - 2^x is best taken through expm1;
    // far from it, through log1p.
    if x > -1.0 {
        (-(x * LN_2).exp_m1()).ln() / LN_2
    } else {
        (-(x.exp2())).ln_1p() / LN_2
    }
}

impl LogProb {
    pub const ZERO: LogProb = LogProb {
        log2: f64::NEG_INFINITY,
        log2_complement: 0.0,
    };
    pub const ONE: LogProb = LogProb {
        log2: 0.0,
        log2_complement: f64::NEG_INFINITY,
    };

    /// Probability `2^log2`.
    pub fn from_log2(log2: f64) -> Result<Self> {
        if log2.is_nan() || log2 > 0.0 {
            return Err(Error::Domain(format!(
                "log2 probability must be <= 0, got {log2}"
            )));
        }
        Ok(Self {
            log2,
            log2_complement: log2_one_minus_exp2(log2),
        })
    }

    /// Probability `1 - 2^complement_log2`, exact in the complement.
    pub fn from_complement_log2(complement_log2: f64) -> Result<Self> {
        let c = Self::from_log2(complement_log2)?;
        Ok(c.complement())
    }

    pub fn from_log10(log10: f64) -> Result<Self> {
        Self::from_log2(log10 / LOG10_2)
    }

    pub fn from_prob(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "probability must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self {
            log2: p.log2(),
            log2_complement: (-p).ln_1p() / LN_2,
        })
    }

    pub fn log2(&self) -> f64 {
        self.log2
    }

    pub fn log10(&self) -> f64 {
        self.log2 * LOG10_2
    }

    /// `log2(1 - p)`.
    pub fn complement_log2(&self) -> f64 {
        self.log2_complement
    }

    pub fn complement_log10(&self) -> f64 {
        self.log2_complement * LOG10_2
    }

    /// Nearest `f64`; underflows to 0 below about `2^-1074`.
    pub fn value(&self) -> f64 {
        if self.log2 > -1.0 {
            // closer to one: the complement carries the precision
            1.0 - self.log2_complement.exp2()
        } else {
            self.log2.exp2()
        }
    }

    pub fn complement(&self) -> Self {
        Self {
            log2: self.log2_complement,
            log2_complement: self.log2,
        }
    }

    /// `p^exponent` for `exponent >= 0`.
    pub fn powf(&self, exponent: f64) -> Result<Self> {
        if exponent.is_nan() || exponent < 0.0 {
            return Err(Error::Domain(format!(
                "exponent must be >= 0, got {exponent}"
            )));
        }
        if exponent == 0.0 {
            return Ok(Self::ONE);
        }
        Self::from_log2(self.log2 * exponent)
    }

    /// `p + q` evaluated as a base-2 log-sum-exp, capped at one.
    pub fn saturating_add(&self, other: &LogProb) -> Self {
        let (hi, lo) = if self.log2 >= other.log2 {
            (self.log2, other.log2)
        } else {
            (other.log2, self.log2)
        };
        if lo == f64::NEG_INFINITY {
            return if hi == self.log2 { *self } else { *other };
        }
        let sum = hi + (lo - hi).exp2().ln_1p() / LN_2;
        if sum >= 0.0 {
            Self::ONE
        } else {
            Self {
                log2: sum,
                log2_complement: log2_one_minus_exp2(sum),
            }
        }
    }

    /// Reports `x·10^e` using the log10 form, valid far below `f64` range.
    pub fn scientific(&self) -> String {
        if self.log2 == f64::NEG_INFINITY {
            return "0".to_string();
        }
        let l10 = self.log10();
        let mut exp = l10.floor();
        let mut mantissa = 10f64.powf(l10 - exp);
        if mantissa >= 9.9999995 {
            mantissa = 1.0;
            exp += 1.0;
        }
        format!("{mantissa:.6}e{exp}")
    }
}

impl PartialOrd for LogProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.log2.partial_cmp(&other.log2) {
            Some(Ordering::Equal) => other.log2_complement.partial_cmp(&self.log2_complement),
            ord => ord,
        }
    }
}
