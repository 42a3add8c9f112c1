//! Simulated imperfect random sources and exact uniformity checks.
//!
//! A source emits blocks of `block_len ≤ 16` bits. The exact block
//! distribution is computed analytically, so the model's distance to uniform
//! is known exactly and can be compared with what a finite sample shows.
//!
//! # Generator
//!
//! Sampling is reproducible across platforms: the stream is ChaCha20
//! (`rand_chacha::ChaCha20Rng`, 20 rounds) seeded with
//! `SeedableRng::seed_from_u64(seed)`. Each block consumes one `u64` from
//! the stream; its top 53 bits give `u = (x >> 11)·2^-53 ∈ [0, 1)`, and the
//! block is the first outcome (MSB-first index order) whose cumulative
//! probability exceeds `u`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::bits::BitString;
use crate::coupling::independent_coupling_failure;
use crate::error::{Error, Result};
use crate::logprob::LogProb;
use crate::probdist::{statistical_distance, ConditionalChannel, Distribution};

pub const MAX_BLOCK_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum SourceModel {
    /// Independent bits with `Pr[1] = 0.5 + bias`.
    IidBernoulli { bias: f64 },
    /// First bit from `initial`, each following bit from `transition`
    /// given the previous one. Every block starts afresh.
    Markov {
        transition: ConditionalChannel,
        initial: Distribution,
    },
}

impl SourceModel {
    pub fn iid(bias: f64) -> Result<Self> {
        let m = Self::IidBernoulli { bias };
        m.validate()?;
        Ok(m)
    }

    pub fn markov(transition: ConditionalChannel, initial: Distribution) -> Result<Self> {
        let m = Self::Markov {
            transition,
            initial,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::IidBernoulli { bias } => {
                if !(-0.5..=0.5).contains(bias) {
                    return Err(Error::Domain(format!(
                        "bias must lie in [-0.5, 0.5], got {bias}"
                    )));
                }
            }
            Self::Markov {
                transition,
                initial,
            } => {
                if transition.in_bits() != 1
                    || transition.out_bits() != 1
                    || initial.outcome_bits() != 1
                {
                    return Err(Error::Dimension(
                        "Markov source needs a 1-bit transition and a 1-bit initial distribution"
                            .into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Exact distribution of one `block_len`-bit block.
    pub fn block_distribution(&self, block_len: usize) -> Result<Distribution> {
        check_block_len(block_len)?;
        let n = 1usize << block_len;
        let bit = |i: usize, pos: usize| (i >> (block_len - 1 - pos)) & 1;
        let masses = match self {
            Self::IidBernoulli { bias } => {
                let p1 = 0.5 + bias;
                let p0 = 0.5 - bias;
                (0..n)
                    .map(|i| {
                        let ones = i.count_ones() as i32;
                        p1.powi(ones) * p0.powi(block_len as i32 - ones)
                    })
                    .collect()
            }
            Self::Markov {
                transition,
                initial,
            } => (0..n)
                .map(|i| {
                    (1..block_len).fold(initial.prob(bit(i, 0) as u64), |acc, pos| {
                        acc * transition.prob(bit(i, pos - 1), bit(i, pos))
                    })
                })
                .collect(),
        };
        Distribution::dense(block_len, masses)
    }
}

fn check_block_len(block_len: usize) -> Result<()> {
    if block_len == 0 || block_len > MAX_BLOCK_BITS {
        return Err(Error::Domain(format!(
            "block length must lie in 1..={MAX_BLOCK_BITS}, got {block_len}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    block_len: usize,
    blocks: Vec<u16>,
    seed: u64,
}

impl SampleSet {
    /// Builds a sample set from explicit blocks.
    pub fn from_blocks(block_len: usize, blocks: &[BitString], seed: u64) -> Result<Self> {
        check_block_len(block_len)?;
        let idx = blocks
            .iter()
            .map(|b| {
                if b.len() != block_len {
                    return Err(Error::Dimension(format!(
                        "block of length {} in a {block_len}-bit sample set",
                        b.len()
                    )));
                }
                Ok(b.to_index()? as u16)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            block_len,
            blocks: idx,
            seed,
        })
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, i: usize) -> BitString {
        BitString::from_index(self.blocks[i] as u64, self.block_len)
    }

    /// Block values as MSB-first integers.
    pub fn block_indices(&self) -> &[u16] {
        &self.blocks
    }

    pub fn counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; 1 << self.block_len];
        for &b in &self.blocks {
            counts[b as usize] += 1;
        }
        counts
    }
}

/// Uniform `[0, 1)` variate from the top 53 bits of one `u64`.
fn unit_interval(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (-53f64).exp2()
}

pub fn sample_blocks(
    model: &SourceModel,
    block_len: usize,
    count: usize,
    seed: u64,
) -> Result<SampleSet> {
    if count == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    model.validate()?;
    let dist = model.block_distribution(block_len)?;
    let masses = dist.masses()?;
    let mut cdf: Vec<f64> = masses
        .iter()
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect();
    *cdf.last_mut().expect("nonempty outcome space") = 1.0;

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let blocks = (0..count)
        .map(|_| {
            let u = unit_interval(&mut rng);
            cdf.partition_point(|&c| c <= u) as u16
        })
        .collect();
    Ok(SampleSet {
        block_len,
        blocks,
        seed,
    })
}

/// `p(x) - 2^(-b)` for an iid block with `ones` ones out of `b` bits, as the
/// polynomial `Σ_{j>=1} c_j·β^j·2^(j-b)` where `c_j` are the coefficients of
/// `(1+t)^ones·(1-t)^(b-ones)`. Avoids the cancellation in forming `0.5 + β`.
fn iid_deviation(b: usize, ones: usize, bias: f64) -> f64 {
    let mut coeffs = vec![1i64];
    for i in 0..b {
        let sign = if i < ones { 1 } else { -1 };
        let mut next = vec![0i64; coeffs.len() + 1];
        for (j, &c) in coeffs.iter().enumerate() {
            next[j] += c;
            next[j + 1] += sign * c;
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, &c)| c as f64 * bias.powi(j as i32) * (j as f64 - b as f64).exp2())
        .sum()
}

/// Exact `δ(block distribution, uniform)`.
pub fn model_distance_to_uniform(model: &SourceModel, block_len: usize) -> Result<f64> {
    match model {
        SourceModel::IidBernoulli { bias } => {
            check_block_len(block_len)?;
            model.validate()?;
            // group outcomes by their number of ones
            let mut binom = 1.0;
            let mut total = 0.0;
            for ones in 0..=block_len {
                total += binom * iid_deviation(block_len, ones, *bias).abs();
                binom = binom * (block_len - ones) as f64 / (ones + 1) as f64;
            }
            Ok(0.5 * total)
        }
        SourceModel::Markov { .. } => {
            let dist = model.block_distribution(block_len)?;
            statistical_distance(&dist, &Distribution::uniform(block_len)?)
        }
    }
}

/// Relative block frequencies.
pub fn empirical_distribution(s: &SampleSet) -> Result<Distribution> {
    if s.is_empty() {
        return Err(Error::Domain("empty sample set".into()));
    }
    let n = s.len() as f64;
    Distribution::dense(
        s.block_len,
        s.counts().into_iter().map(|c| c as f64 / n).collect(),
    )
}

/// `δ(empirical block frequencies, uniform)`.
pub fn empirical_distance(s: &SampleSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::Domain("empty sample set".into()));
    }
    // Integer counts against the exact expected count avoid renormalization.
    let n = s.len() as f64;
    let expected = n * (-(s.block_len as f64)).exp2();
    let total: f64 = s
        .counts()
        .iter()
        .map(|&c| (c as f64 - expected).abs())
        .sum();
    Ok(0.5 * total / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformityReport {
    pub empirical_delta: f64,
    /// Every block value occurred exactly `count / 2^block_len` times.
    pub exactly_uniform: bool,
    /// `1 - 2^(-block_len)`: mismatch against an independent ideal block.
    pub independent_failure: LogProb,
}

pub fn uniformity_failure_report(s: &SampleSet) -> Result<UniformityReport> {
    let empirical_delta = empirical_distance(s)?;
    let outcomes = 1u64 << s.block_len;
    let n = s.len() as u64;
    let exactly_uniform =
        n.is_multiple_of(outcomes) && s.counts().iter().all(|&c| c == n / outcomes);
    Ok(UniformityReport {
        empirical_delta,
        exactly_uniform,
        independent_failure: independent_coupling_failure(s.block_len as u64)?,
    })
}
