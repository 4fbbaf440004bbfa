//! The sequence `u_k ∈ ℓ∞`, `u_k(i) = 1` iff `k ∈ T(i)`.
//!
//! Weak convergence is not something a finite computation can observe. What can
//! be checked are the constructive witnesses behind the two halves of the
//! argument:
//!
//! * coordinatewise nullity (`u_k(i) = 0` once `k > max T(i)`) and a
//!   challenge/response search: given `α > 0` and finite prefixes of strictly
//!   increasing `(k_j)`, `(i_n)`, `(J_n)`, produce `n` and `j ≤ J_n` with
//!   `|u_{k_j}(i_n)| ≤ α`. Only finitely presented challenges can be refuted,
//!   which is the gap between this check and the quantifier over all sequences.
//! * for any strictly increasing `(k_j)` and any `N`, the set
//!   `A_N = {k_{N+1}, …, k_{N+k_{N+1}}}` is a maximal Schreier set, so the
//!   coordinate `i₀ = T⁻¹(A_N)` certifies `‖(1/2N) Σ_{j≤2N} u_{k_j}‖_∞ ≥ 1/2`
//!   in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schreier::{Enumeration, SchreierRank, SchreierSet};

/// Refuse witness sets larger than this many elements.
pub const MAX_WITNESS_LEN: u64 = 1 << 20;

/// Entry oracle for `u_k(i)` under a fixed enumeration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SequenceOracle {
    enumeration: Enumeration,
}

impl SequenceOracle {
    pub fn new(enumeration: Enumeration) -> Self {
        SequenceOracle { enumeration }
    }

    pub fn enumeration(&self) -> Enumeration {
        self.enumeration
    }

    /// `T(i)`, the support of the `i`-th coordinate functional.
    pub fn row(&self, i: &SchreierRank) -> SchreierSet {
        self.enumeration.unrank(i)
    }

    /// `u_k(i)`.
    pub fn entry(&self, k: u64, i: &SchreierRank) -> u8 {
        u8::from(self.row(i).contains(k))
    }

    /// `max T(i)`: `u_k(i) = 0` for every `k` above the returned threshold.
    pub fn coordinatewise_null_check(&self, i: &SchreierRank) -> u64 {
        self.row(i).max_element()
    }

    /// Answers a weak-convergence challenge following the search in the
    /// nullity argument: take `n = k_1 + 1`; either `k_1 ∉ T(i_n)` or
    /// `|T(i_n)| ≤ k_1 < J_n` forces some `k_j`, `j ≤ J_n`, outside `T(i_n)`.
    pub fn find_weak_witness(&self, challenge: &WeakConvergenceChallenge) -> Result<WeakWitness> {
        challenge.validate()?;
        let k1 = challenge.k_seq[0];
        let n = k1 + 1;
        let i_n = challenge.i_seq_at(n)?;
        let j_n = challenge.j_seq_at(n)?;
        let row = self.row(&SchreierRank::from(i_n));
        // j ranges over 1..=J_n; at most |T(i_n)| + 1 ≤ k_1 + 1 of them are needed.
        for j in 1..=j_n {
            let k_j = challenge.k_seq_at(j)?;
            if !row.contains(k_j) {
                let entry = 0u8;
                if BigRational::from_integer(BigInt::from(entry)) > challenge.alpha {
                    return Err(Error::CertificateViolation(format!(
                        "witness entry {entry} exceeds alpha {}",
                        challenge.alpha
                    )));
                }
                return Ok(WeakWitness { n, j, k_j, i_n, entry });
            }
        }
        Err(Error::CertificateViolation(format!(
            "all of k_1..k_{j_n} lie in T({i_n}) = {row}, impossible for a maximal Schreier set"
        )))
    }

    /// Builds `A_N`, locates `i₀ = T⁻¹(A_N)` and evaluates the Cesàro mean
    /// `(1/2N) Σ_{j=1}^{2N} u_{k_j}(i₀)` exactly.
    pub fn certify_not_cesaro_null(&self, sub: &Subsequence, n: u64) -> Result<CesaroCertificate> {
        if n == 0 {
            return Err(Error::invalid("N must be positive"));
        }
        let head = sub.take(n + 1)?;
        let k_next = head[n as usize];
        if k_next > MAX_WITNESS_LEN {
            return Err(Error::invalid(format!(
                "k_(N+1) = {k_next} would need a witness set of that many elements"
            )));
        }
        let prefix_len = n + k_next;
        let prefix = sub.take(prefix_len)?;
        let witness: Vec<u64> = prefix[n as usize..].to_vec();
        debug_assert_eq!(witness.len() as u64, k_next);
        let witness_set = SchreierSet::new(witness)?;
        let witness_coordinate = self.enumeration.rank_of(&witness_set);

        // Evaluate through the enumeration, not through the set built above.
        let row = self.row(&witness_coordinate);
        let hits: u64 = prefix[..2 * n as usize]
            .iter()
            .map(|&k| u64::from(row.contains(k)))
            .sum();
        let mean = BigRational::new(BigInt::from(hits), BigInt::from(2 * n));
        let half = BigRational::new(BigInt::one(), BigInt::from(2));

        let cert = CesaroCertificate {
            n,
            witness_set,
            witness_coordinate,
            mean,
            prefix: prefix[..2 * n as usize].to_vec(),
            prefix_len,
            enumeration: self.enumeration,
        };
        if cert.mean < half {
            return Err(Error::CertificateViolation(format!(
                "Cesàro mean {} < 1/2 for N = {n}",
                cert.mean
            )));
        }
        Ok(cert)
    }

    /// The certified lower bound on `‖(1/2N) Σ_{j≤2N} u_{k_j}‖_∞`.
    pub fn sup_cesaro_norm_lower_bound(&self, sub: &Subsequence, n: u64) -> Result<BigRational> {
        Ok(self.certify_not_cesaro_null(sub, n)?.mean)
    }
}

/// Closed-form tail for a [`Subsequence`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubsequenceRule {
    /// `k_j = slope·j + offset`.
    Affine { slope: u64, offset: u64 },
    /// `k_j = first·ratio^(j−1)`.
    Geometric { first: u64, ratio: u64 },
}

impl SubsequenceRule {
    fn validate(&self) -> Result<()> {
        match *self {
            SubsequenceRule::Affine { slope: 0, .. } => {
                Err(Error::invalid("affine rule needs slope ≥ 1"))
            }
            SubsequenceRule::Geometric { first, ratio } if first == 0 || ratio < 2 => {
                Err(Error::invalid("geometric rule needs first ≥ 1 and ratio ≥ 2"))
            }
            _ => Ok(()),
        }
    }

    fn at(&self, j: u64) -> Result<u64> {
        let overflow = || Error::invalid(format!("subsequence index {j} overflows u64"));
        match *self {
            SubsequenceRule::Affine { slope, offset } => slope
                .checked_mul(j)
                .and_then(|v| v.checked_add(offset))
                .ok_or_else(overflow),
            SubsequenceRule::Geometric { first, ratio } => {
                let exp = u32::try_from(j - 1).map_err(|_| overflow())?;
                ratio
                    .checked_pow(exp)
                    .and_then(|p| p.checked_mul(first))
                    .ok_or_else(overflow)
            }
        }
    }
}

/// A strictly increasing sequence `k_1 < k_2 < …` of positive integers, given
/// as an explicit prefix optionally continued by a closed-form rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsequence {
    prefix: Vec<u64>,
    rule: Option<SubsequenceRule>,
}

impl Subsequence {
    pub fn from_prefix(prefix: Vec<u64>) -> Result<Self> {
        Subsequence::new(prefix, None)
    }

    pub fn from_rule(rule: SubsequenceRule) -> Result<Self> {
        Subsequence::new(Vec::new(), Some(rule))
    }

    pub fn new(prefix: Vec<u64>, rule: Option<SubsequenceRule>) -> Result<Self> {
        if prefix.first() == Some(&0) {
            return Err(Error::invalid("subsequence entries must be positive"));
        }
        if prefix.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("subsequence prefix must be strictly increasing"));
        }
        if let Some(rule) = &rule {
            rule.validate()?;
            let next = rule.at(prefix.len() as u64 + 1)?;
            if next == 0 || prefix.last().is_some_and(|&last| next <= last) {
                return Err(Error::invalid(
                    "rule must continue the prefix strictly increasingly with positive values",
                ));
            }
        }
        Ok(Subsequence { prefix, rule })
    }

    /// `k_1 … k_len`, `len` random steps of size `1..=max_step` above 0.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize, max_step: u64) -> Self {
        let max_step = max_step.max(1);
        let mut prefix = Vec::with_capacity(len);
        let mut k = 0u64;
        for _ in 0..len {
            k += rng.gen_range(1..=max_step);
            prefix.push(k);
        }
        Subsequence { prefix, rule: None }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn rule(&self) -> Option<&SubsequenceRule> {
        self.rule.as_ref()
    }

    /// `k_j`, 1-based.
    pub fn get(&self, j: u64) -> Result<u64> {
        assert!(j >= 1, "subsequence indices are 1-based");
        if let Some(&k) = self.prefix.get(j as usize - 1) {
            return Ok(k);
        }
        match &self.rule {
            Some(rule) => rule.at(j),
            None => Err(Error::NeedsMoreData {
                what: "subsequence prefix",
                required: j,
                available: self.prefix.len() as u64,
            }),
        }
    }

    /// `k_1 … k_len`.
    pub fn take(&self, len: u64) -> Result<Vec<u64>> {
        if self.rule.is_none() && len > self.prefix.len() as u64 {
            return Err(Error::NeedsMoreData {
                what: "subsequence prefix",
                required: len,
                available: self.prefix.len() as u64,
            });
        }
        (1..=len).map(|j| self.get(j)).collect()
    }
}

/// The witness produced for one weak-convergence challenge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakWitness {
    pub n: u64,
    pub j: u64,
    pub k_j: u64,
    pub i_n: u64,
    pub entry: u8,
}

/// Finite prefixes of `(k_j)`, `(i_n)`, `(J_n)` together with `α > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakConvergenceChallenge {
    #[serde(with = "ratio_string")]
    pub alpha: BigRational,
    pub k_seq: Vec<u64>,
    pub i_seq: Vec<u64>,
    pub j_seq: Vec<u64>,
}

impl WeakConvergenceChallenge {
    pub fn new(alpha: BigRational, k_seq: Vec<u64>, i_seq: Vec<u64>, j_seq: Vec<u64>) -> Result<Self> {
        let c = WeakConvergenceChallenge { alpha, k_seq, i_seq, j_seq };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.alpha <= BigRational::zero() {
            return Err(Error::invalid("alpha must be positive"));
        }
        for (name, seq) in [("k", &self.k_seq), ("i", &self.i_seq), ("J", &self.j_seq)] {
            if seq.first() == Some(&0) || seq.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!(
                    "{name} sequence must be strictly increasing positive integers"
                )));
            }
        }
        if self.k_seq.is_empty() {
            return Err(Error::NeedsMoreData { what: "k sequence", required: 1, available: 0 });
        }
        Ok(())
    }

    fn at(seq: &[u64], what: &'static str, idx: u64) -> Result<u64> {
        seq.get(idx as usize - 1).copied().ok_or(Error::NeedsMoreData {
            what,
            required: idx,
            available: seq.len() as u64,
        })
    }

    fn k_seq_at(&self, j: u64) -> Result<u64> {
        Self::at(&self.k_seq, "k sequence", j)
    }

    fn i_seq_at(&self, n: u64) -> Result<u64> {
        Self::at(&self.i_seq, "i sequence", n)
    }

    fn j_seq_at(&self, n: u64) -> Result<u64> {
        Self::at(&self.j_seq, "J sequence", n)
    }
}

/// Exact witness that the Cesàro mean of `u_{k_1}, …, u_{k_{2N}}` has sup
/// norm at least 1/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CesaroCertificate {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "A_N")]
    pub witness_set: SchreierSet,
    #[serde(rename = "i0")]
    pub witness_coordinate: SchreierRank,
    #[serde(with = "ratio_string")]
    pub mean: BigRational,
    /// `k_1 … k_{2N}`.
    pub prefix: Vec<u64>,
    /// How many subsequence terms were read (`N + k_{N+1}`).
    pub prefix_len: u64,
    pub enumeration: Enumeration,
}

impl CesaroCertificate {
    /// Re-checks the certificate from its own data under its enumeration.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::CertificateViolation(msg));
        let n = self.n as usize;
        if self.prefix.len() != 2 * n {
            return fail(format!("prefix has {} terms, expected {}", self.prefix.len(), 2 * n));
        }
        let a = &self.witness_set;
        if a.min_element() != a.len() as u64 {
            return fail(format!("{a} is not a maximal Schreier set"));
        }
        if a.elements()[..n] != self.prefix[n..] {
            return fail("A_N does not start with k_(N+1), …, k_(2N)".into());
        }
        if self.enumeration.unrank(&self.witness_coordinate) != *a {
            return fail(format!("T(i0) ≠ A_N for i0 = {}", self.witness_coordinate));
        }
        let hits = self.prefix.iter().filter(|&&k| a.contains(k)).count();
        let mean = BigRational::new(BigInt::from(hits), BigInt::from(2 * n));
        if mean != self.mean {
            return fail(format!("recomputed mean {mean} ≠ recorded {}", self.mean));
        }
        if self.mean < BigRational::new(BigInt::one(), BigInt::from(2)) {
            return fail(format!("mean {} < 1/2", self.mean));
        }
        Ok(())
    }
}

/// `BigRational` as a `"p/q"` string.
pub mod ratio_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", value.numer(), value.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
