//! Attacks on a one-time pad keyed with an imperfectly uniform key.
//!
//! Everything is exact enumeration over small key spaces; Eve's side
//! information is classical. The spike distribution
//! `ε·point(k*) + (1-ε)·uniform` is the canonical bad key: it sits at
//! statistical distance `ε(1-2^(-l))` from uniform while giving Eve a guessing
//! probability of about `ε`.

use serde::Serialize;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::probdist::{conditional_guessing_probability, Distribution, JointDistribution};

/// Key length limit for exhaustive averages over all ciphertexts.
pub const MAX_ATTACK_BITS: usize = 12;

/// Key length limit on the key side of privacy-amplification enumeration.
pub const MAX_PA_KEY_BITS: usize = 10;

/// `c = x ⊕ k`.
pub fn otp_encrypt(x: &BitString, k: &BitString) -> Result<BitString> {
    x.xor(k)
}

/// `ε·point(k*) + (1-ε)·uniform(l)`.
pub fn spike_distribution(l: usize, eps: f64, k_star: &BitString) -> Result<Distribution> {
    if k_star.len() != l {
        return Err(Error::Dimension(format!(
            "spike outcome has {} bits, expected {l}",
            k_star.len()
        )));
    }
    Distribution::spike(k_star.clone(), eps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    /// Most probable key (or key remainder), lowest index on ties.
    pub map_guess: BitString,
    /// Posterior probability of `map_guess` given what Eve saw.
    pub map_posterior: f64,
    /// Success probability of the MAP strategy averaged over everything Eve
    /// could have seen.
    pub avg_success: f64,
    pub posterior_table: Option<Distribution>,
}

fn dense_key_space(p: &Distribution, what: &str) -> Result<usize> {
    let l = p.outcome_bits();
    if l > MAX_ATTACK_BITS {
        return Err(Error::Scale(format!(
            "{what} over {l} bits exceeds the {MAX_ATTACK_BITS}-bit enumeration limit"
        )));
    }
    Ok(l)
}

fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// MAP estimate of the key from the ciphertext alone.
///
/// The posterior is `P(k|c) ∝ p_k(k)·p_x(c ⊕ k)`; `avg_success` is
/// `Σ_c P(c)·max_k P(k|c) = Σ_c max_k p_k(k)·p_x(c ⊕ k)`.
pub fn ciphertext_only_attack(
    c: &BitString,
    p_x: &Distribution,
    p_k: &Distribution,
) -> Result<AttackReport> {
    let l = dense_key_space(p_k, "key distribution")?;
    if p_x.outcome_bits() != l || c.len() != l {
        return Err(Error::Dimension(format!(
            "ciphertext ({}), plaintext ({}) and key ({l}) lengths differ",
            c.len(),
            p_x.outcome_bits()
        )));
    }
    let (km, xm) = (p_k.masses()?, p_x.masses()?);
    let n = km.len();
    let ci = c.to_index()? as usize;

    let weights: Vec<f64> = (0..n).map(|k| km[k] * xm[ci ^ k]).collect();
    let evidence: f64 = weights.iter().sum();
    if evidence == 0.0 {
        return Err(Error::ZeroProbability(format!(
            "ciphertext {c} cannot occur"
        )));
    }
    let posterior: Vec<f64> = weights.iter().map(|w| w / evidence).collect();
    let (best, best_p) = argmax(&posterior);

    let avg_success = (0..n)
        .map(|cc| (0..n).map(|k| km[k] * xm[cc ^ k]).fold(0.0, f64::max))
        .sum::<f64>()
        .min(1.0);

    Ok(AttackReport {
        map_guess: BitString::from_index(best as u64, l),
        map_posterior: best_p,
        avg_success,
        posterior_table: Some(Distribution::dense(l, posterior)?),
    })
}

/// Posterior over plaintexts given the ciphertext, `P(x|c) ∝ p_x(x)·p_k(c ⊕ x)`.
/// Equals `p_x` for every `c` exactly when the key is uniform.
pub fn plaintext_posterior(
    c: &BitString,
    p_x: &Distribution,
    p_k: &Distribution,
) -> Result<Distribution> {
    let l = dense_key_space(p_k, "key distribution")?;
    if p_x.outcome_bits() != l || c.len() != l {
        return Err(Error::Dimension(
            "ciphertext, plaintext and key lengths differ".into(),
        ));
    }
    let (km, xm) = (p_k.masses()?, p_x.masses()?);
    let ci = c.to_index()? as usize;
    let weights: Vec<f64> = (0..km.len()).map(|x| xm[x] * km[ci ^ x]).collect();
    let evidence: f64 = weights.iter().sum();
    if evidence == 0.0 {
        return Err(Error::ZeroProbability(format!(
            "ciphertext {c} cannot occur"
        )));
    }
    Distribution::dense(l, weights.into_iter().map(|w| w / evidence).collect())
}

/// Next-bit prediction: given the first `m` key bits (learned from known
/// plaintext), the MAP guess for the remaining `l - m` bits.
///
/// `avg_success` averages the MAP success over all prefixes:
/// `Σ_a max_r P(a, r)`.
pub fn kpa_next_bits(p_k: &Distribution, known_prefix: &BitString) -> Result<AttackReport> {
    let l = dense_key_space(p_k, "key distribution")?;
    let m = known_prefix.len();
    if m >= l {
        return Err(Error::Dimension(format!(
            "known prefix of {m} bits leaves nothing to predict in a {l}-bit key"
        )));
    }
    let rest_bits = l - m;
    let rest_len = 1usize << rest_bits;
    let km = p_k.masses()?;
    let a = known_prefix.to_index()? as usize;

    let block = &km[a * rest_len..(a + 1) * rest_len];
    let evidence: f64 = block.iter().sum();
    if evidence == 0.0 {
        return Err(Error::ZeroProbability(format!(
            "known prefix {known_prefix} has zero probability"
        )));
    }
    let conditional: Vec<f64> = block.iter().map(|p| p / evidence).collect();
    let (best, best_p) = argmax(&conditional);

    let avg_success = km
        .chunks(rest_len)
        .map(|chunk| chunk.iter().cloned().fold(0.0, f64::max))
        .sum::<f64>()
        .min(1.0);

    Ok(AttackReport {
        map_guess: BitString::from_index(best as u64, rest_bits),
        map_posterior: best_p,
        avg_success,
        posterior_table: Some(Distribution::dense(rest_bits, conditional)?),
    })
}

/// Toeplitz hash over GF(2): output bit `i` is the parity of
/// `Σ_j T[i][j]·k[j]` with `T[i][j] = seed[i + (|k| - 1) - j]`.
pub fn toeplitz_hash(k: &BitString, seed: &BitString, out_len: usize) -> Result<BitString> {
    let n = k.len();
    if out_len > n {
        return Err(Error::Dimension(format!(
            "output length {out_len} exceeds input length {n}"
        )));
    }
    if out_len == 0 {
        return Ok(BitString::zeros(0));
    }
    if seed.len() != n + out_len - 1 {
        return Err(Error::Dimension(format!(
            "Toeplitz seed must have {} bits for a {n}-bit input and {out_len}-bit output, got {}",
            n + out_len - 1,
            seed.len()
        )));
    }
    let (kb, sb) = (k.bits(), seed.bits());
    // Row i reads the seed window sb[i..i+n] in reverse against k.
    let out: Vec<bool> = (0..out_len)
        .map(|i| {
            sb[i..i + n]
                .iter()
                .rev()
                .zip(kb)
                .fold(false, |acc, (&s, &b)| acc ^ (s & b))
        })
        .collect();
    Ok(BitString::from(out))
}

/// Every seed for a Toeplitz hash from `k_bits` to `out_len` bits.
pub fn all_toeplitz_seeds(k_bits: usize, out_len: usize) -> Result<Vec<BitString>> {
    if out_len == 0 || out_len > k_bits {
        return Err(Error::Dimension(format!(
            "need 1 <= out_len <= k_bits, got {out_len} and {k_bits}"
        )));
    }
    let len = k_bits + out_len - 1;
    if len > 20 {
        return Err(Error::Scale(format!(
            "2^{len} seeds is too many to enumerate"
        )));
    }
    Ok((0..1u64 << len)
        .map(|s| BitString::from_index(s, len))
        .collect())
}

/// Seed for which the Toeplitz matrix (`out_len = k_bits`) is the identity.
pub fn identity_toeplitz_seed(k_bits: usize) -> BitString {
    let mut bits = vec![false; 2 * k_bits - 1];
    bits[k_bits - 1] = true;
    BitString::from(bits)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaEffect {
    /// Guessing probability of the key `K` given `E`.
    pub before: f64,
    /// Guessing probability of the hashed key given `E`, per seed.
    pub after: Vec<f64>,
    pub after_avg: f64,
}

/// Guessing probability of the key before and after Toeplitz hashing, with
/// Eve's classical side information `E` (the joint's `y` side).
///
/// Hashing her best guess of `K` is always available to Eve, so every entry
/// of `after` is at least `before`.
pub fn pa_effect_on_guessing(
    joint_ke: &JointDistribution,
    out_len: usize,
    seeds: &[BitString],
) -> Result<PaEffect> {
    let k_bits = joint_ke.x_bits();
    if k_bits > MAX_PA_KEY_BITS {
        return Err(Error::Scale(format!(
            "key side has {k_bits} bits, enumeration limit is {MAX_PA_KEY_BITS}"
        )));
    }
    if out_len == 0 || out_len > k_bits {
        return Err(Error::Dimension(format!(
            "hash output length {out_len} must lie in 1..={k_bits}"
        )));
    }
    if seeds.is_empty() {
        return Err(Error::Dimension("at least one seed is required".into()));
    }
    let before = conditional_guessing_probability(joint_ke);
    let keys: Vec<BitString> = (0..joint_ke.x_len() as u64)
        .map(|k| BitString::from_index(k, k_bits))
        .collect();

    let mut after = Vec::with_capacity(seeds.len());
    for seed in seeds {
        let hashed: Vec<usize> = keys
            .iter()
            .map(|k| toeplitz_hash(k, seed, out_len).and_then(|h| h.to_index().map(|v| v as usize)))
            .collect::<Result<_>>()?;
        let mut table = vec![0.0; (1usize << out_len) * joint_ke.y_len()];
        for (k, &h) in hashed.iter().enumerate() {
            for (e, &p) in joint_ke.row(k).iter().enumerate() {
                table[h * joint_ke.y_len() + e] += p;
            }
        }
        let hashed_joint = JointDistribution::new(out_len, joint_ke.y_bits(), table)?;
        after.push(conditional_guessing_probability(&hashed_joint));
    }
    let after_avg = after.iter().sum::<f64>() / after.len() as f64;
    Ok(PaEffect {
        before,
        after,
        after_avg,
    })
}
