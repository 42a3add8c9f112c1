//! Couplings of two distributions on the same outcome space.
//!
//! For any coupling `(X, Y)` of `p` and `q`, `Pr[X != Y] >= δ(p, q)`, and
//! equality is attained by the maximal coupling built in
//! [`maximal_coupling`]. The bound says nothing about couplings that can be
//! *realized* by comparing independently produced samples: for an ideal
//! uniform key drawn independently of the real one the mismatch is
//! `1 - 2^(-l)` whatever the real key distribution is
//! ([`independent_coupling_failure`]). [`contradiction_report`] puts the two
//! numbers side by side.

mod oracle;

pub use oracle::{min_mismatch_oracle, MAX_ORACLE_SUPPORT};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::logprob::LogProb;
use crate::probdist::{
    random_distribution, statistical_distance, ConditionalChannel, Distribution, JointDistribution,
};

/// Per-entry tolerance between a coupling's marginals and its declared
/// distributions.
pub const MARGINAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    joint: JointDistribution,
    p: Distribution,
    q: Distribution,
}

fn check_marginal(actual: &Distribution, declared: &Distribution, side: &str) -> Result<()> {
    let (a, d) = (actual.masses()?, declared.masses()?);
    for (i, (x, y)) in a.iter().zip(d.iter()).enumerate() {
        if (x - y).abs() > MARGINAL_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "{side} marginal differs from the declared distribution at outcome {i}: {x} vs {y}"
            )));
        }
    }
    Ok(())
}

impl Coupling {
    pub fn new(joint: JointDistribution, p: Distribution, q: Distribution) -> Result<Self> {
        if joint.x_bits() != joint.y_bits()
            || p.outcome_bits() != joint.x_bits()
            || q.outcome_bits() != joint.y_bits()
        {
            return Err(Error::Dimension(format!(
                "coupling joint is {}x{} bits, declared marginals are {} and {} bits",
                joint.x_bits(),
                joint.y_bits(),
                p.outcome_bits(),
                q.outcome_bits()
            )));
        }
        check_marginal(&joint.x_marginal()?, &p, "row")?;
        check_marginal(&joint.y_marginal()?, &q, "column")?;
        Ok(Self { joint, p, q })
    }

    /// Coupling whose declared distributions are the joint's own marginals.
    pub fn from_joint(joint: JointDistribution) -> Result<Self> {
        let (p, q) = (joint.x_marginal()?, joint.y_marginal()?);
        Self::new(joint, p, q)
    }

    pub fn joint(&self) -> &JointDistribution {
        &self.joint
    }

    pub fn p(&self) -> &Distribution {
        &self.p
    }

    pub fn q(&self) -> &Distribution {
        &self.q
    }
}

/// `Pr[X != Y] = 1 - Σ_x J(x, x)`.
pub fn mismatch_probability(c: &Coupling) -> f64 {
    let j = &c.joint;
    let diagonal: f64 = (0..j.x_len()).map(|x| j.get(x, x)).sum();
    (1.0 - diagonal).clamp(0.0, 1.0)
}

/// Diagonal `min(p, q)`, off-diagonal residual `(p-q)₊ ⊗ (q-p)₊ / δ`.
pub fn maximal_coupling(p: &Distribution, q: &Distribution) -> Result<Coupling> {
    if p.outcome_bits() != q.outcome_bits() {
        return Err(Error::Dimension(format!(
            "distributions over {} and {} bits",
            p.outcome_bits(),
            q.outcome_bits()
        )));
    }
    let (pm, qm) = (p.masses()?, q.masses()?);
    let n = pm.len();
    let excess_p: Vec<f64> = pm
        .iter()
        .zip(qm.iter())
        .map(|(a, b)| (a - b).max(0.0))
        .collect();
    let excess_q: Vec<f64> = pm
        .iter()
        .zip(qm.iter())
        .map(|(a, b)| (b - a).max(0.0))
        .collect();
    let delta: f64 = excess_p.iter().sum();

    let mut masses = vec![0.0; n * n];
    for x in 0..n {
        masses[x * n + x] = pm[x].min(qm[x]);
    }
    if delta > 0.0 {
        for x in (0..n).filter(|&x| excess_p[x] > 0.0) {
            for y in (0..n).filter(|&y| y != x && excess_q[y] > 0.0) {
                masses[x * n + y] = excess_p[x] * excess_q[y] / delta;
            }
        }
    }
    let joint = JointDistribution::new(p.outcome_bits(), q.outcome_bits(), masses)?;
    Coupling::new(joint, p.clone(), q.clone())
}

/// `P(x, y) = p(x)·q(y)`.
pub fn independent_coupling(p: &Distribution, q: &Distribution) -> Result<Coupling> {
    Coupling::new(JointDistribution::product(p, q)?, p.clone(), q.clone())
}

/// Random coupling on `bits`-bit outcomes: a random joint with at most
/// `support` nonzero cells, declared marginals taken from the joint.
pub fn random_coupling<R: Rng + ?Sized>(
    rng: &mut R,
    bits: usize,
    support: usize,
) -> Result<Coupling> {
    let flat = random_distribution(rng, 2 * bits, support)?;
    Coupling::from_joint(JointDistribution::new(
        bits,
        bits,
        flat.masses()?.into_owned(),
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelGap {
    /// `δ(P_{X,X̃}, P_{X,Y})` with `X̃` a perfect copy of `X`.
    pub delta_joint: f64,
    /// `Pr[X != Y]` under `P_{X,Y}`.
    pub mismatch: f64,
}

/// Distance between "copy the input" and "send it through `w`", alongside
/// the channel's error probability. The two agree for every input and channel.
pub fn copy_vs_channel_gap(p: &Distribution, w: &ConditionalChannel) -> Result<ChannelGap> {
    if w.in_bits() != w.out_bits() {
        return Err(Error::Dimension(format!(
            "channel must be square, got {} -> {} bits",
            w.in_bits(),
            w.out_bits()
        )));
    }
    let through_channel = w.joint(p)?;
    let copied = ConditionalChannel::identity(w.in_bits())?.joint(p)?;
    let delta_joint = statistical_distance(&copied.flatten()?, &through_channel.flatten()?)?;
    let mismatch = mismatch_probability(&Coupling::from_joint(through_channel)?);
    Ok(ChannelGap {
        delta_joint,
        mismatch,
    })
}

/// `Pr[K != K_U] = 1 - 2^(-l)` when the ideal key `K_U` is uniform and
/// independent of `K`: `Σ_k P(k)·2^(-l) = 2^(-l)` for every key distribution.
pub fn independent_coupling_failure(l: u64) -> Result<LogProb> {
    if l == 0 {
        return Err(Error::Domain("key length must be at least 1 bit".into()));
    }
    LogProb::from_complement_log2(-(l as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContradictionReport {
    /// `δ(P_K, U)`.
    pub delta: f64,
    /// `Pr[K != K_U]` under the maximal coupling; equals `delta`.
    pub maximal_mismatch: f64,
    /// `Pr[K != K_U]` when `K_U` is drawn independently.
    pub independent_failure: LogProb,
}

pub fn contradiction_report(p_k: &Distribution) -> Result<ContradictionReport> {
    let uniform = Distribution::uniform(p_k.outcome_bits())?.to_dense()?;
    let delta = statistical_distance(p_k, &uniform)?;
    let maximal_mismatch = mismatch_probability(&maximal_coupling(p_k, &uniform)?);
    let independent_failure = independent_coupling_failure(p_k.outcome_bits() as u64)?;
    Ok(ContradictionReport {
        delta,
        maximal_mismatch,
        independent_failure,
    })
}
