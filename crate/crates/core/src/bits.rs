//! Bitstrings used as keys, plaintexts, ciphertexts and outcome labels.
//!
//! Outcome indices follow the most-significant-bit-first convention: the
//! bitstring `b0 b1 ... b(n-1)` maps to the integer `b0·2^(n-1) + ... + b(n-1)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest bitstring that may be materialized (2^20 bits).
pub const MAX_MATERIALIZED_BITS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() > MAX_MATERIALIZED_BITS {
            return Err(Error::Scale(format!(
                "bitstring of length {} exceeds the 2^20-bit cap",
                bits.len()
            )));
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    /// Bitstring of length `len` whose MSB-first integer value is `value`.
    pub fn from_index(value: u64, len: usize) -> Self {
        let bits = (0..len)
            .map(|i| {
                let shift = len - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        Self(bits)
    }

    /// MSB-first integer value. Fails when the string is longer than 63 bits.
    pub fn to_index(&self) -> Result<u64> {
        if self.0.len() > 63 {
            return Err(Error::Scale(format!(
                "bitstring of length {} has no 64-bit index",
                self.0.len()
            )));
        }
        Ok(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn prefix(&self, m: usize) -> BitString {
        Self(self.0[..m.min(self.0.len())].to_vec())
    }

    pub fn suffix_from(&self, m: usize) -> BitString {
        Self(self.0[m.min(self.0.len())..].to_vec())
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "xor of bitstrings with lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "bitstring literal contains '{other}' (only 0 and 1 allowed)"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        BitString::new(bits)
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        Self(bits)
    }
}
