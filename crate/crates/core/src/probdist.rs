//! Exact finite distributions over bitstring outcomes.
//!
//! A [`Distribution`] is either dense (an explicit mass per outcome, at most
//! 2^20 outcomes) or a *spike*: the mixture `ε·point(k*) + (1-ε)·uniform`.
//! The spike form has no size limit, so 10^4-bit key spaces remain usable
//! wherever an analytic formula exists.
//!
//! Outcome index = integer value of the bitstring, most-significant bit first.
//! Ties in `max_x p(x)` are broken by the lowest outcome index.

use std::borrow::Cow;

use rand::Rng;
use serde::Deserialize;

use crate::bits::{BitString, MAX_MATERIALIZED_BITS};
use crate::error::{Error, Result};

/// Largest outcome space stored densely (2^20 outcomes).
pub const MAX_DENSE_BITS: usize = 20;

/// Absolute tolerance on the total mass of a distribution.
pub const SUM_TOLERANCE: f64 = 1e-9;

fn uniform_mass(bits: usize) -> f64 {
    (-(bits as f64)).exp2()
}

fn check_masses(masses: &mut [f64], what: &str) -> Result<()> {
    let mut sum = 0.0;
    for (i, &m) in masses.iter().enumerate() {
        if !m.is_finite() || m < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "{what}: mass at index {i} is {m} (must be finite and >= 0)"
            )));
        }
        sum += m;
    }
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "{what}: masses sum to {sum}, outside 1 ± {SUM_TOLERANCE:e}"
        )));
    }
    // a sum off by summation rounding only is left alone, so that reading
    // back a written distribution gives the same masses
    if (sum - 1.0).abs() > masses.len() as f64 * f64::EPSILON {
        masses.iter_mut().for_each(|m| *m /= sum);
    }
    Ok(())
}

fn argmax_lowest(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Dense(Vec<f64>),
    Spike { outcome: BitString, epsilon: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    outcome_bits: usize,
    repr: Repr,
}

impl Distribution {
    /// Dense distribution; `masses` has one entry per outcome, MSB-first index.
    pub fn dense(outcome_bits: usize, mut masses: Vec<f64>) -> Result<Self> {
        if outcome_bits > MAX_DENSE_BITS {
            return Err(Error::Scale(format!(
                "dense distributions are capped at {MAX_DENSE_BITS} outcome bits, got {outcome_bits}"
            )));
        }
        if masses.len() != 1usize << outcome_bits {
            return Err(Error::Dimension(format!(
                "{} masses given for {} outcome bits (expected {})",
                masses.len(),
                outcome_bits,
                1usize << outcome_bits
            )));
        }
        check_masses(&mut masses, "distribution")?;
        Ok(Self {
            outcome_bits,
            repr: Repr::Dense(masses),
        })
    }

    /// `epsilon·point(outcome) + (1 - epsilon)·uniform(outcome.len())`.
    pub fn spike(outcome: BitString, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Domain(format!(
                "spike weight must lie in [0, 1], got {epsilon}"
            )));
        }
        Ok(Self {
            outcome_bits: outcome.len(),
            repr: Repr::Spike { outcome, epsilon },
        })
    }

    pub fn uniform(outcome_bits: usize) -> Result<Self> {
        if outcome_bits > MAX_MATERIALIZED_BITS {
            return Err(Error::Scale(format!(
                "outcome space of {outcome_bits} bits exceeds the 2^20-bit cap"
            )));
        }
        Self::spike(BitString::zeros(outcome_bits), 0.0)
    }

    pub fn point_mass(outcome: BitString) -> Result<Self> {
        Self::spike(outcome, 1.0)
    }

    pub fn outcome_bits(&self) -> usize {
        self.outcome_bits
    }

    pub fn is_dense_representable(&self) -> bool {
        self.outcome_bits <= MAX_DENSE_BITS
    }

    /// Spike parameters, if this distribution is stored in spike form.
    pub fn spike_parts(&self) -> Option<(&BitString, f64)> {
        match &self.repr {
            Repr::Spike { outcome, epsilon } => Some((outcome, *epsilon)),
            Repr::Dense(_) => None,
        }
    }

    /// Probability of the outcome with the given index.
    pub fn prob(&self, index: u64) -> f64 {
        match &self.repr {
            Repr::Dense(m) => m.get(index as usize).copied().unwrap_or(0.0),
            Repr::Spike { outcome, epsilon } => {
                let hit = outcome.to_index().map(|k| k == index).unwrap_or(false);
                spike_lookup(self.outcome_bits, *epsilon, hit)
            }
        }
    }

    /// Probability of a bitstring outcome; works at any length for spikes.
    pub fn prob_of(&self, x: &BitString) -> Result<f64> {
        if x.len() != self.outcome_bits {
            return Err(Error::Dimension(format!(
                "outcome of length {} queried on a {}-bit distribution",
                x.len(),
                self.outcome_bits
            )));
        }
        Ok(match &self.repr {
            Repr::Dense(_) => self.prob(x.to_index()?),
            Repr::Spike { outcome, epsilon } => {
                spike_lookup(self.outcome_bits, *epsilon, outcome == x)
            }
        })
    }

    /// Dense masses, expanding a spike when the space is small enough.
    pub fn masses(&self) -> Result<Cow<'_, [f64]>> {
        match &self.repr {
            Repr::Dense(m) => Ok(Cow::Borrowed(m)),
            Repr::Spike { .. } => {
                if !self.is_dense_representable() {
                    return Err(Error::Scale(format!(
                        "cannot materialize {} outcome bits (cap {MAX_DENSE_BITS})",
                        self.outcome_bits
                    )));
                }
                let n = 1u64 << self.outcome_bits;
                Ok(Cow::Owned((0..n).map(|i| self.prob(i)).collect()))
            }
        }
    }

    /// Same distribution in dense storage.
    pub fn to_dense(&self) -> Result<Self> {
        let masses = self.masses()?.into_owned();
        Ok(Self {
            outcome_bits: self.outcome_bits,
            repr: Repr::Dense(masses),
        })
    }

    /// Most likely outcome (lowest index on ties) and its probability.
    pub fn map_outcome(&self) -> (BitString, f64) {
        match &self.repr {
            Repr::Dense(m) => {
                let (i, p) = argmax_lowest(m);
                (BitString::from_index(i as u64, self.outcome_bits), p)
            }
            Repr::Spike { outcome, epsilon } => {
                let p = spike_lookup(self.outcome_bits, *epsilon, true);
                if *epsilon > 0.0 {
                    (outcome.clone(), p)
                } else {
                    (BitString::zeros(self.outcome_bits), p)
                }
            }
        }
    }

    pub fn sum(&self) -> f64 {
        match &self.repr {
            Repr::Dense(m) => m.iter().sum(),
            Repr::Spike { .. } => 1.0,
        }
    }
}

fn spike_lookup(bits: usize, epsilon: f64, hit: bool) -> f64 {
    let background = (1.0 - epsilon) * uniform_mass(bits);
    if hit {
        background + epsilon
    } else {
        background
    }
}

fn check_same_space(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.outcome_bits != q.outcome_bits {
        return Err(Error::Dimension(format!(
            "distributions over {} and {} bits",
            p.outcome_bits, q.outcome_bits
        )));
    }
    Ok(())
}

/// Total-variation distance `½ Σ_x |p(x) - q(x)|`.
pub fn statistical_distance(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_same_space(p, q)?;
    if p.is_dense_representable() {
        let (a, b) = (p.masses()?, q.masses()?);
        let total: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum();
        return Ok(0.5 * total);
    }
    match (&p.repr, &q.repr) {
        (
            Repr::Spike {
                outcome: sp,
                epsilon: ep,
            },
            Repr::Spike {
                outcome: sq,
                epsilon: eq,
            },
        ) => Ok(spike_distance(p.outcome_bits, sp, *ep, sq, *eq)),
        _ => unreachable!("dense distributions never exceed the dense cap"),
    }
}

/// Closed form of the distance between two spikes on a `bits`-bit space.
fn spike_distance(bits: usize, sp: &BitString, ep: f64, sq: &BitString, eq: f64) -> f64 {
    let u = uniform_mass(bits);
    // background difference a - b = (eq - ep)·u on every non-spike outcome
    let diff = (eq - ep) * u;
    if sp == sq {
        0.5 * ((ep - eq).abs() * (1.0 - u) + (diff + ep - eq).abs())
    } else {
        0.5 * ((ep - eq).abs() * (1.0 - 2.0 * u) + (diff + ep).abs() + (diff - eq).abs())
    }
}

/// Optimal single-guess success probability `max_x p(x) = 2^(-H_min)`.
pub fn guessing_probability(p: &Distribution) -> f64 {
    p.map_outcome().1
}

/// Min-entropy in bits.
pub fn min_entropy(p: &Distribution) -> f64 {
    -guessing_probability(p).log2()
}

/// `-q·log2 q - (1-q)·log2(1-q)` with `0·log 0 = 0`.
pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!(
            "binary entropy argument must lie in [0, 1], got {q}"
        )));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(q) + term(1.0 - q))
}

/// Joint distribution over `(x, y)`, stored row-major with `x` as the row.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    x_bits: usize,
    y_bits: usize,
    masses: Vec<f64>,
}

impl JointDistribution {
    pub fn new(x_bits: usize, y_bits: usize, mut masses: Vec<f64>) -> Result<Self> {
        if x_bits + y_bits > MAX_DENSE_BITS {
            return Err(Error::Scale(format!(
                "joint over {x_bits}+{y_bits} bits exceeds the {MAX_DENSE_BITS}-bit dense cap"
            )));
        }
        let expected = 1usize << (x_bits + y_bits);
        if masses.len() != expected {
            return Err(Error::Dimension(format!(
                "{} joint masses given, expected {expected}",
                masses.len()
            )));
        }
        check_masses(&mut masses, "joint distribution")?;
        Ok(Self {
            x_bits,
            y_bits,
            masses,
        })
    }

    pub fn from_rows(x_bits: usize, y_bits: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != 1 << x_bits || rows.iter().any(|r| r.len() != 1 << y_bits) {
            return Err(Error::Dimension(format!(
                "joint rows must form a {}x{} matrix",
                1usize << x_bits,
                1usize << y_bits
            )));
        }
        Self::new(x_bits, y_bits, rows.concat())
    }

    /// `P(x, y) = px(x)·py(y)`.
    pub fn product(px: &Distribution, py: &Distribution) -> Result<Self> {
        let (a, b) = (px.masses()?, py.masses()?);
        let masses = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| x * y))
            .collect();
        Self::new(px.outcome_bits(), py.outcome_bits(), masses)
    }

    pub fn x_bits(&self) -> usize {
        self.x_bits
    }

    pub fn y_bits(&self) -> usize {
        self.y_bits
    }

    pub fn x_len(&self) -> usize {
        1 << self.x_bits
    }

    pub fn y_len(&self) -> usize {
        1 << self.y_bits
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.masses[x * self.y_len() + y]
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let n = self.y_len();
        &self.masses[x * n..(x + 1) * n]
    }

    pub fn x_marginal(&self) -> Result<Distribution> {
        let m = (0..self.x_len())
            .map(|x| self.row(x).iter().sum())
            .collect();
        Distribution::dense(self.x_bits, m)
    }

    pub fn y_marginal(&self) -> Result<Distribution> {
        let m = (0..self.y_len())
            .map(|y| (0..self.x_len()).map(|x| self.get(x, y)).sum())
            .collect();
        Distribution::dense(self.y_bits, m)
    }

    /// The joint as a distribution over the concatenated bitstring `xy`.
    pub fn flatten(&self) -> Result<Distribution> {
        Distribution::dense(self.x_bits + self.y_bits, self.masses.clone())
    }
}

/// `Σ_y P(y)·max_x P(x|y) = Σ_y max_x P(x, y)`: guessing `x` given `y`.
/// All-zero columns contribute nothing.
pub fn conditional_guessing_probability(j: &JointDistribution) -> f64 {
    (0..j.y_len())
        .map(|y| (0..j.x_len()).map(|x| j.get(x, y)).fold(0.0, f64::max))
        .sum()
}

/// Stochastic map from `in_bits`-bit inputs to `out_bits`-bit outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalChannel {
    in_bits: usize,
    out_bits: usize,
    rows: Vec<Distribution>,
}

impl ConditionalChannel {
    pub fn new(in_bits: usize, out_bits: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if in_bits + out_bits > MAX_DENSE_BITS {
            return Err(Error::Scale(format!(
                "channel over {in_bits}->{out_bits} bits exceeds the dense cap"
            )));
        }
        if rows.len() != 1 << in_bits {
            return Err(Error::Dimension(format!(
                "{} channel rows given for {in_bits} input bits",
                rows.len()
            )));
        }
        let rows = rows
            .into_iter()
            .map(|r| Distribution::dense(out_bits, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            in_bits,
            out_bits,
            rows,
        })
    }

    pub fn identity(bits: usize) -> Result<Self> {
        let n = 1usize << bits;
        let rows = (0..n)
            .map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(bits, bits, rows)
    }

    /// One-bit channel flipping its input with probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&flip) {
            return Err(Error::Domain(format!(
                "flip probability {flip} outside [0, 1]"
            )));
        }
        Self::new(1, 1, vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]])
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.out_bits
    }

    pub fn row(&self, x: usize) -> &Distribution {
        &self.rows[x]
    }

    /// `P(y | x)`.
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.rows[x].prob(y as u64)
    }

    /// Joint of input and output when the input is drawn from `p`.
    pub fn joint(&self, p: &Distribution) -> Result<JointDistribution> {
        if p.outcome_bits() != self.in_bits {
            return Err(Error::Dimension(format!(
                "{}-bit input fed to a {}-bit channel",
                p.outcome_bits(),
                self.in_bits
            )));
        }
        let pm = p.masses()?;
        let ny = 1usize << self.out_bits;
        let masses = pm
            .iter()
            .enumerate()
            .flat_map(|(x, &px)| (0..ny).map(move |y| (x, y, px)))
            .map(|(x, y, px)| px * self.prob(x, y))
            .collect();
        JointDistribution::new(self.in_bits, self.out_bits, masses)
    }
}

/// Random dense distribution with at most `support` nonzero outcomes.
pub fn random_distribution<R: Rng + ?Sized>(
    rng: &mut R,
    outcome_bits: usize,
    support: usize,
) -> Result<Distribution> {
    let n = 1usize << outcome_bits;
    let support = support.clamp(1, n);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..support {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    let mut masses = vec![0.0; n];
    let mut total = 0.0;
    for &i in &idx[..support] {
        // exponential weights give a uniform draw from the simplex
        let w = -(1.0 - rng.gen::<f64>()).ln();
        masses[i] = w;
        total += w;
    }
    masses.iter_mut().for_each(|m| *m /= total);
    Distribution::dense(outcome_bits, masses)
}

/// Random dense joint distribution on `x_bits + y_bits` bits.
pub fn random_joint<R: Rng + ?Sized>(
    rng: &mut R,
    x_bits: usize,
    y_bits: usize,
) -> Result<JointDistribution> {
    let d = random_distribution(rng, x_bits + y_bits, 1 << (x_bits + y_bits))?;
    JointDistribution::new(x_bits, y_bits, d.masses()?.into_owned())
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpikeFields {
    outcome: String,
    epsilon: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionFile {
    outcome_bits: usize,
    #[serde(default)]
    masses: Option<Vec<f64>>,
    #[serde(default)]
    spike: Option<SpikeFields>,
}

/// Formats a real with 17 significant digits.
pub fn exact_decimal(x: f64) -> String {
    format!("{x:.16e}")
}

impl Distribution {
    /// Parses the JSON distribution document:
    /// `{"outcome_bits": n, "masses": [...]}` or
    /// `{"outcome_bits": n, "spike": {"outcome": "0101", "epsilon": 0.1}}`.
    pub fn from_document(text: &str) -> Result<Self> {
        let file: DistributionFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("malformed distribution file: {e}")))?;
        match (file.masses, file.spike) {
            (Some(m), None) => Self::dense(file.outcome_bits, m),
            (None, Some(s)) => {
                let outcome: BitString = s.outcome.parse()?;
                if outcome.len() != file.outcome_bits {
                    return Err(Error::Dimension(format!(
                        "spike outcome has {} bits but outcome_bits is {}",
                        outcome.len(),
                        file.outcome_bits
                    )));
                }
                Self::spike(outcome, s.epsilon)
            }
            _ => Err(Error::Parse(
                "malformed distribution file: exactly one of `masses` or `spike` is required"
                    .into(),
            )),
        }
    }

    pub fn to_document(&self) -> String {
        match &self.repr {
            Repr::Dense(m) => {
                let body: Vec<String> = m.iter().map(|&x| exact_decimal(x)).collect();
                format!(
                    "{{\n  \"outcome_bits\": {},\n  \"masses\": [{}]\n}}\n",
                    self.outcome_bits,
                    body.join(", ")
                )
            }
            Repr::Spike { outcome, epsilon } => format!(
                "{{\n  \"outcome_bits\": {},\n  \"spike\": {{\"outcome\": \"{}\", \"epsilon\": {}}}\n}}\n",
                self.outcome_bits,
                outcome,
                exact_decimal(*epsilon)
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(bits: usize, m: &[f64]) -> Distribution {
        Distribution::dense(bits, m.to_vec()).unwrap()
    }

    fn spike8() -> Distribution {
        Distribution::spike(BitString::from_index(0b1011_0001, 8), 1.0 / 16.0).unwrap()
    }

    #[test]
    fn distance_examples() {
        let u1 = Distribution::uniform(1).unwrap();
        let point = Distribution::point_mass("0".parse().unwrap()).unwrap();
        assert_eq!(statistical_distance(&u1, &u1).unwrap(), 0.0);
        assert_eq!(statistical_distance(&point, &u1).unwrap(), 0.5);

        // direct summation over 256 outcomes
        let s = spike8();
        let u = Distribution::uniform(8).unwrap();
        let masses = s.masses().unwrap();
        let brute: f64 = 0.5 * masses.iter().map(|m| (m - 1.0 / 256.0).abs()).sum::<f64>();
        let expected = (1.0 / 16.0) * (1.0 - 1.0 / 256.0);
        assert!((brute - expected).abs() < 1e-15);
        assert!((statistical_distance(&s, &u).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn distance_rejects_mismatched_spaces() {
        let a = Distribution::uniform(2).unwrap();
        let b = Distribution::uniform(3).unwrap();
        assert!(matches!(
            statistical_distance(&a, &b),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn guessing_examples() {
        assert_eq!(
            guessing_probability(&Distribution::uniform(8).unwrap()),
            0.00390625
        );
        let point = Distribution::point_mass("0110".parse().unwrap()).unwrap();
        assert_eq!(guessing_probability(&point), 1.0);
        let brute = spike8()
            .masses()
            .unwrap()
            .iter()
            .cloned()
            .fold(0.0, f64::max);
        assert_eq!(guessing_probability(&spike8()), brute);
        assert!((brute - (1.0 / 16.0 + (15.0 / 16.0) / 256.0)).abs() < 1e-15);
    }

    #[test]
    fn map_ties_break_to_lowest_index() {
        let p = d(2, &[0.1, 0.4, 0.1, 0.4]);
        assert_eq!(p.map_outcome().0.to_index().unwrap(), 1);
        assert_eq!(
            Distribution::uniform(3)
                .unwrap()
                .map_outcome()
                .0
                .to_index()
                .unwrap(),
            0
        );
    }

    #[test]
    fn conditional_guessing_examples() {
        let j = JointDistribution::from_rows(1, 1, &[vec![0.4, 0.1], vec![0.2, 0.3]]).unwrap();
        assert!((conditional_guessing_probability(&j) - 0.7).abs() < 1e-15);

        let pk = d(2, &[0.5, 0.25, 0.125, 0.125]);
        let pe = d(1, &[0.3, 0.7]);
        let indep = JointDistribution::product(&pk, &pe).unwrap();
        assert!((conditional_guessing_probability(&indep) - 0.5).abs() < 1e-15);

        let copy = ConditionalChannel::identity(2).unwrap().joint(&pk).unwrap();
        assert!((conditional_guessing_probability(&copy) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_columns_contribute_nothing() {
        let j = JointDistribution::from_rows(1, 1, &[vec![0.6, 0.0], vec![0.4, 0.0]]).unwrap();
        assert_eq!(conditional_guessing_probability(&j), 0.6);
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        // 50-digit reference value, see tests/fixtures/oracles.py
        assert!((binary_entropy(0.11).unwrap() - 0.499_915_958_164_528).abs() < 1e-15);
        assert!(matches!(binary_entropy(1.1), Err(Error::Domain(_))));
        assert!(matches!(binary_entropy(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn constructor_renormalizes_within_tolerance() {
        let p = Distribution::dense(1, vec![0.5 + 4e-10, 0.5]).unwrap();
        assert_eq!(p.masses().unwrap().iter().sum::<f64>(), 1.0);
        assert!(Distribution::dense(1, vec![0.5 + 2e-9, 0.5]).is_err());
        assert!(Distribution::dense(1, vec![1.5, -0.5]).is_err());
        assert!(Distribution::dense(2, vec![0.5, 0.5]).is_err());
        assert!(Distribution::dense(21, vec![]).is_err());
    }

    #[test]
    fn spike_and_dense_lookups_are_identical() {
        let s = spike8();
        let dense = s.to_dense().unwrap();
        for i in 0..256u64 {
            assert_eq!(s.prob(i).to_bits(), dense.prob(i).to_bits());
        }
        assert_eq!(guessing_probability(&s), guessing_probability(&dense));
        assert_eq!(s.map_outcome(), dense.map_outcome());
    }

    #[test]
    fn closed_form_spike_distance_matches_dense_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for bits in 1..=8usize {
            for _ in 0..20 {
                let n = 1u64 << bits;
                let sp = BitString::from_index(rng.gen_range(0..n), bits);
                let sq = if rng.gen_bool(0.3) {
                    sp.clone()
                } else {
                    BitString::from_index(rng.gen_range(0..n), bits)
                };
                let (ep, eq) = (rng.gen::<f64>(), rng.gen::<f64>());
                let p = Distribution::spike(sp.clone(), ep).unwrap();
                let q = Distribution::spike(sq.clone(), eq).unwrap();
                let dense = statistical_distance(&p, &q).unwrap();
                let closed = spike_distance(bits, &sp, ep, &sq, eq);
                assert!(
                    (dense - closed).abs() < 1e-12,
                    "bits={bits}: {dense} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn large_spike_distance_to_uniform() {
        let k = BitString::zeros(10_000);
        let s = Distribution::spike(k, 1e-6).unwrap();
        let u = Distribution::uniform(10_000).unwrap();
        assert_eq!(statistical_distance(&s, &u).unwrap(), 1e-6);
        assert_eq!(guessing_probability(&s), 1e-6);
    }

    #[test]
    fn marginals_of_product_are_the_factors() {
        let a = d(1, &[0.25, 0.75]);
        let b = d(2, &[0.125, 0.375, 0.25, 0.25]);
        let j = JointDistribution::product(&a, &b).unwrap();
        assert_eq!(j.x_marginal().unwrap(), a);
        assert_eq!(j.y_marginal().unwrap(), b);
    }

    #[test]
    fn document_round_trip() {
        let p = d(2, &[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(Distribution::from_document(&p.to_document()).unwrap(), p);
        let s = spike8();
        assert_eq!(Distribution::from_document(&s.to_document()).unwrap(), s);
    }

    #[test]
    fn document_errors() {
        assert!(matches!(
            Distribution::from_document("{\"outcome_bits\": 1}"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Distribution::from_document("not json"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Distribution::from_document(
                "{\"outcome_bits\": 3, \"spike\": {\"outcome\": \"01\", \"epsilon\": 0.1}}"
            ),
            Err(Error::Dimension(_))
        ));
    }
}
