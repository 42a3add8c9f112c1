//! Closed-form security bounds evaluated in log-domain arithmetic.
//!
//! Given an averaged trace distance `ε̄` and a key length `l`:
//!
//! | quantity | formula |
//! |---|---|
//! | averaged guessing bound | `ε̄ + 2^(-l)` |
//! | individual (Markov) bound | `ε̄^(1/3) + 2^(-l)` |
//! | bits per leaked bit | `f = log2(1/ε)` |
//! | leaked bits per key | `l / f` |
//! | uniform-key guessing probability | `2^(-l)` |
//!
//! and, for the finite-key trade-off, the extractable length
//! `l(ε̄) = ⌊n(1 - h(Q+μ)) - Leak_EC - log2(2·P_fail / (ε̄²·ε_cor))⌋₊`.
//! Every probability is carried as a [`LogProb`] so that values like
//! `2^(-10^4)` never underflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logprob::LogProb;
use crate::probdist::binary_entropy;

fn check_eps_bar(eps_bar: f64) -> Result<LogProb> {
    if !(0.0..=1.0).contains(&eps_bar) {
        return Err(Error::Domain(format!(
            "averaged trace distance must lie in [0, 1], got {eps_bar}"
        )));
    }
    LogProb::from_prob(eps_bar)
}

fn check_key_len(l: u64) -> Result<LogProb> {
    if l == 0 {
        return Err(Error::Domain("key length must be at least 1 bit".into()));
    }
    LogProb::from_log2(-(l as f64))
}

/// Upper bound `ε̄ + 2^(-l)` on the averaged guessing probability of an
/// `l`-bit key whose averaged trace distance to ideal is `ε̄`.
pub fn yuen_upper_bound(eps_bar: f64, l: u64) -> Result<LogProb> {
    let e = check_eps_bar(eps_bar)?;
    Ok(e.saturating_add(&check_key_len(l)?))
}

/// Individual-key bound `ε̄^(1/3) + 2^(-l)` obtained by applying Markov's
/// inequality twice to the averaged bound.
pub fn markov_individual_bound(eps_bar: f64, l: u64) -> Result<LogProb> {
    let e = check_eps_bar(eps_bar)?.powf(1.0 / 3.0)?;
    Ok(e.saturating_add(&check_key_len(l)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeakageProfile {
    /// One key bit may leak for every `f = log2(1/ε)` bits.
    pub f: f64,
    /// `l / f`.
    pub leaked_bits: f64,
    /// `l / log2(1/l)`: the alternative denominator, which is negative for
    /// every `l > 1` and so cannot be a bit count. Reported for comparison.
    pub alternative_denominator_value: f64,
}

pub fn leakage_profile(l: u64, eps: f64) -> Result<LeakageProfile> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("leakage needs 0 < ε < 1, got {eps}")));
    }
    if l == 0 {
        return Err(Error::Domain("key length must be at least 1 bit".into()));
    }
    let l = l as f64;
    let f = -eps.log2();
    Ok(LeakageProfile {
        f,
        leaked_bits: l / f,
        alternative_denominator_value: l / (1.0 / l).log2(),
    })
}

/// Same as [`leakage_profile`] with `ε` given in log form, for `ε` below `f64`
/// range (e.g. `ε = 2^(-l)`).
pub fn leakage_profile_log(l: u64, eps: &LogProb) -> Result<LeakageProfile> {
    if !(eps.log2() < 0.0 && eps.log2() > f64::NEG_INFINITY) {
        return Err(Error::Domain(format!(
            "leakage needs 0 < ε < 1, got 2^{}",
            eps.log2()
        )));
    }
    if l == 0 {
        return Err(Error::Domain("key length must be at least 1 bit".into()));
    }
    let lf = l as f64;
    let f = -eps.log2();
    Ok(LeakageProfile {
        f,
        leaked_bits: lf / f,
        alternative_denominator_value: lf / (1.0 / lf).log2(),
    })
}

/// `2^(-l)`: the guessing probability a perfectly uniform `l`-bit key allows.
pub fn required_epsilon(l: u64) -> Result<LogProb> {
    check_key_len(l)
}

/// Default error-correction leakage: `1.1·n·h(Q)`.
pub const DEFAULT_RECONCILIATION_INEFFICIENCY: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteKeyParams {
    /// Block length of the reconciled key.
    pub n: u64,
    /// Quantum bit error rate as a fraction.
    pub qber: f64,
    /// Finite-size fluctuation added to the QBER.
    pub mu: f64,
    /// Bits revealed during error correction; `None` means `1.1·n·h(Q)`.
    pub leak_ec: Option<f64>,
    pub p_fail: f64,
    pub eps_bar: f64,
    pub eps_cor: f64,
}

impl FiniteKeyParams {
    /// `μ = 0` and the default leakage.
    pub fn new(n: u64, qber: f64, p_fail: f64, eps_bar: f64, eps_cor: f64) -> Self {
        Self {
            n,
            qber,
            mu: 0.0,
            leak_ec: None,
            p_fail,
            eps_bar,
            eps_cor,
        }
    }

    /// The documented reference scenario: `Q = 0.02`, `μ = 0.005`,
    /// `Leak_EC = 1.1·n·h(Q)`, `P_fail = ε̄ = 10^-10`, `ε_cor = 10^-15`.
    pub fn reference(n: u64) -> Self {
        Self {
            n,
            qber: 0.02,
            mu: 0.005,
            leak_ec: None,
            p_fail: 1e-10,
            eps_bar: 1e-10,
            eps_cor: 1e-15,
        }
    }

    pub fn with_eps_bar(mut self, eps_bar: f64) -> Self {
        self.eps_bar = eps_bar;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("block length n must be >= 1".into()));
        }
        if !(self.qber >= 0.0 && self.mu >= 0.0 && self.qber + self.mu <= 1.0) {
            return Err(Error::Domain(format!(
                "need Q >= 0, μ >= 0, Q + μ <= 1 (got Q = {}, μ = {})",
                self.qber, self.mu
            )));
        }
        for (name, v) in [
            ("P_fail", self.p_fail),
            ("ε̄", self.eps_bar),
            ("ε_cor", self.eps_cor),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Domain(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        if let Some(leak) = self.leak_ec {
            if !(leak >= 0.0 && leak.is_finite()) {
                return Err(Error::Domain(format!("Leak_EC must be >= 0, got {leak}")));
            }
        }
        Ok(())
    }

    /// Error-correction leakage, applying the default when none was given.
    pub fn leak_ec_bits(&self) -> Result<f64> {
        match self.leak_ec {
            Some(v) => Ok(v),
            None => Ok(DEFAULT_RECONCILIATION_INEFFICIENCY
                * self.n as f64
                * binary_entropy(self.qber)?),
        }
    }

    /// `log2(2·P_fail / (ε̄²·ε_cor))`, evaluated term by term.
    pub fn security_cost_bits(&self) -> f64 {
        1.0 + self.p_fail.log2() - 2.0 * self.eps_bar.log2() - self.eps_cor.log2()
    }

    /// Unclamped, unfloored right-hand side of the key-length formula.
    pub fn key_length_bound(&self) -> Result<f64> {
        self.validate()?;
        let n = self.n as f64;
        Ok(n * (1.0 - binary_entropy(self.qber + self.mu)?)
            - self.leak_ec_bits()?
            - self.security_cost_bits())
    }
}

/// Extractable key length in bits, floored and clamped at zero.
pub fn extractable_key_length(p: &FiniteKeyParams) -> Result<u64> {
    let bound = p.key_length_bound()?;
    Ok(if bound <= 0.0 {
        0
    } else {
        bound.floor() as u64
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecurityRateSolution {
    pub eps_bar: f64,
    pub key_len: u64,
    /// `key_len / n`.
    pub rate: f64,
    pub iterations: u32,
}

/// Smallest searched `ε̄` (as a base-2 exponent).
pub const RATE_SEARCH_MIN_LOG2: f64 = -200.0;
pub const RATE_RELATIVE_TOLERANCE: f64 = 1e-3;
pub const RATE_MAX_ITERATIONS: u32 = 200;

/// Solves `ε̄ / l(ε̄) = s_target` for `ε̄ ∈ (2^-200, 1)`; the `eps_bar` field
/// of `base` is ignored.
///
/// `ε̄ - s_target·l(ε̄)` is scanned on a log grid for its first sign change
/// from negative to non-negative, then bisected in `log2 ε̄` until `ε̄` is
/// known to a relative `10^-3`.
pub fn epsilon_for_security_rate(
    s_target: f64,
    base: &FiniteKeyParams,
) -> Result<SecurityRateSolution> {
    if !(s_target > 0.0 && s_target.is_finite()) {
        return Err(Error::Domain(format!(
            "security rate target must be > 0, got {s_target}"
        )));
    }
    base.with_eps_bar(0.5).validate()?;
    let length_at = |log2_eps: f64| extractable_key_length(&base.with_eps_bar(log2_eps.exp2()));
    let gap = |log2_eps: f64| -> Result<f64> {
        Ok(log2_eps.exp2() - s_target * length_at(log2_eps)? as f64)
    };

    const GRID: usize = 400;
    let step = -RATE_SEARCH_MIN_LOG2 / GRID as f64;
    let mut bracket = None;
    let mut prev = (RATE_SEARCH_MIN_LOG2, gap(RATE_SEARCH_MIN_LOG2)?);
    for k in 1..=GRID {
        let x = RATE_SEARCH_MIN_LOG2 + k as f64 * step;
        let g = gap(x)?;
        if prev.1 < 0.0 && g >= 0.0 {
            bracket = Some((prev.0, x));
            break;
        }
        prev = (x, g);
    }
    let infeasible = || {
        Error::NoSolution(format!(
            "no ε̄ in (2^-200, 1) gives ε̄/l = {s_target:e} at n = {}: \
             the extractable length is too small, so the key rate vanishes",
            base.n
        ))
    };
    let (mut lo, mut hi) = bracket.ok_or_else(infeasible)?;

    let tolerance = (1.0 + RATE_RELATIVE_TOLERANCE).log2();
    let mut iterations = 0;
    while hi - lo > tolerance && iterations < RATE_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let log2_eps = 0.5 * (lo + hi);
    let key_len = length_at(log2_eps)?;
    if key_len == 0 {
        return Err(infeasible());
    }
    Ok(SecurityRateSolution {
        eps_bar: log2_eps.exp2(),
        key_len,
        rate: key_len as f64 / base.n as f64,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineEfficiency {
    /// `key_rate / raw_rate`.
    pub ratio: f64,
    /// Set when the key rate exceeds the raw rate, which no real pipeline can do.
    pub key_exceeds_raw: bool,
}

pub fn pipeline_efficiency(raw_rate_bps: f64, key_rate_bps: f64) -> Result<PipelineEfficiency> {
    if !(raw_rate_bps > 0.0 && key_rate_bps > 0.0) {
        return Err(Error::Domain(format!(
            "rates must be > 0, got raw {raw_rate_bps} and key {key_rate_bps}"
        )));
    }
    Ok(PipelineEfficiency {
        ratio: key_rate_bps / raw_rate_bps,
        key_exceeds_raw: key_rate_bps > raw_rate_bps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yuen_examples() {
        assert_eq!(yuen_upper_bound(0.0, 8).unwrap().log2(), -8.0);
        let b = yuen_upper_bound(1e-6, 10_000).unwrap();
        assert!((b.log10() + 6.0).abs() < 1e-12);
        assert_eq!(yuen_upper_bound(1.0 / 16.0, 4).unwrap().log2(), -3.0);
    }

    #[test]
    fn markov_examples() {
        let b = markov_individual_bound(1e-6, 10_000).unwrap();
        assert!((b.log10() + 2.0).abs() < 1e-9);
        assert_eq!(markov_individual_bound(0.0, 12).unwrap().log2(), -12.0);
        // 10^(-14/3), 50-digit reference in tests/fixtures/oracles.py
        let v = markov_individual_bound(1e-14, 10_000).unwrap().value();
        assert!((v - 2.154_434_690_031_883_7e-5).abs() < 1e-18);
    }

    #[test]
    fn bounds_reject_bad_inputs() {
        assert!(yuen_upper_bound(-0.1, 8).is_err());
        assert!(yuen_upper_bound(0.1, 0).is_err());
        assert!(markov_individual_bound(1.5, 8).is_err());
    }

    #[test]
    fn leakage_examples() {
        let lp = leakage_profile(10_000, 1e-2).unwrap();
        assert!((lp.f - 6.643_856_189_774_724).abs() < 1e-12);
        assert!((lp.leaked_bits - 1_505.149_978_319_906).abs() < 1e-9);
        assert!(lp.alternative_denominator_value < 0.0);

        let half = leakage_profile(77, 0.5).unwrap();
        assert_eq!((half.f, half.leaked_bits), (1.0, 77.0));

        let tight = leakage_profile(20, (-20f64).exp2()).unwrap();
        assert_eq!((tight.f, tight.leaked_bits), (20.0, 1.0));

        let big = leakage_profile_log(10_000, &required_epsilon(10_000).unwrap()).unwrap();
        assert_eq!((big.f, big.leaked_bits), (10_000.0, 1.0));

        assert!(leakage_profile(10, 0.0).is_err());
        assert!(leakage_profile(10, 1.0).is_err());
    }

    #[test]
    fn required_epsilon_examples() {
        assert!((required_epsilon(10_000).unwrap().log10() + 3010.3).abs() < 0.01);
        assert_eq!(required_epsilon(1).unwrap().value(), 0.5);
        assert_eq!(required_epsilon(10).unwrap().value(), 9.765625e-4);
    }

    #[test]
    fn half_error_rate_leaves_nothing() {
        let p = FiniteKeyParams {
            qber: 0.5,
            mu: 0.0,
            leak_ec: Some(0.0),
            ..FiniteKeyParams::reference(1_000_000)
        };
        assert_eq!(extractable_key_length(&p).unwrap(), 0);
    }

    #[test]
    fn reference_key_length_matches_high_precision_oracle() {
        // mpmath, 50 digits: see tests/fixtures/oracles.py
        assert_eq!(
            extractable_key_length(&FiniteKeyParams::reference(1_000_000)).unwrap(),
            675_670
        );
    }

    #[test]
    fn larger_eps_bar_gives_longer_keys() {
        let base = FiniteKeyParams::reference(1_000_000);
        let a = extractable_key_length(&base.with_eps_bar(1e-12)).unwrap();
        let b = extractable_key_length(&base.with_eps_bar(1e-3)).unwrap();
        assert!(b > a);
    }

    #[test]
    fn params_validation() {
        let mut p = FiniteKeyParams::reference(10);
        p.qber = 0.8;
        p.mu = 0.3;
        assert!(p.validate().is_err());
        assert!(FiniteKeyParams::reference(0).validate().is_err());
        assert!(FiniteKeyParams::reference(10)
            .with_eps_bar(0.0)
            .validate()
            .is_err());
    }

    #[test]
    fn security_rate_at_large_block_length() {
        let s = epsilon_for_security_rate(1e-14, &FiniteKeyParams::reference(10_000_000)).unwrap();
        assert!(s.rate > 1e-2 && s.rate < 1.0);
        assert!((s.eps_bar / s.key_len as f64 / 1e-14 - 1.0).abs() < 2e-3);
    }

    #[test]
    fn security_rate_infeasible_for_tiny_blocks() {
        let err = epsilon_for_security_rate(1.0, &FiniteKeyParams::reference(10)).unwrap_err();
        assert!(matches!(err, Error::NoSolution(_)));
        assert!(epsilon_for_security_rate(0.0, &FiniteKeyParams::reference(10)).is_err());
    }

    #[test]
    fn pipeline_examples() {
        let e = pipeline_efficiency(5e10, 3e5).unwrap();
        assert_eq!(e.ratio, 6e-6);
        assert!(!e.key_exceeds_raw);
        assert_eq!(pipeline_efficiency(7.0, 7.0).unwrap().ratio, 1.0);
        assert!(pipeline_efficiency(1.0, 2.0).unwrap().key_exceeds_raw);
        assert!(pipeline_efficiency(0.0, 2.0).is_err());
    }
}
