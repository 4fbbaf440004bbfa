//! Maximal Schreier sets and an explicit enumeration `T : ℕ → 𝒜`.
//!
//! `𝒜 = {A ⊂ ℕ : A ≠ ∅, |A| = min A}`. The canonical enumeration grades sets by
//! their maximum and orders each (finite) grade lexicographically on the sorted
//! element tuple:
//!
//! ```text
//! 1 ↦ {1}, 2 ↦ {2,3}, 3 ↦ {2,4}, 4 ↦ {2,5}, 5 ↦ {3,4,5}, 6 ↦ {2,6}, ...
//! ```
//!
//! The number of sets with maximum at most `n` is `Σ_{m≥1} C(n−m, m−1)`, a
//! Fibonacci number, so ranks quickly leave the range of any fixed-width integer.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonempty finite set `A ⊂ ℕ` with `|A| = min A`, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchreierSet {
    elements: Vec<u64>,
}

impl SchreierSet {
    /// Builds a set from its elements in any order.
    pub fn new(elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut elements: Vec<u64> = elements.into_iter().collect();
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate element in Schreier set"));
        }
        if !is_maximal_schreier(&elements)? {
            return Err(Error::invalid(format!(
                "{elements:?} is not a maximal Schreier set (|A| must equal min A)"
            )));
        }
        Ok(SchreierSet { elements })
    }

    fn from_sorted_unchecked(elements: Vec<u64>) -> Self {
        debug_assert!(is_maximal_schreier(&elements).unwrap_or(false));
        SchreierSet { elements }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn min_element(&self) -> u64 {
        self.elements[0]
    }

    pub fn max_element(&self) -> u64 {
        *self.elements.last().expect("Schreier sets are nonempty")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: u64) -> bool {
        self.elements.binary_search(&k).is_ok()
    }
}

/// Canonical order: by maximum, then lexicographically.
impl Ord for SchreierSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.max_element()
            .cmp(&other.max_element())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl PartialOrd for SchreierSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SchreierSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SchreierSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SchreierSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<u64>::deserialize(deserializer)?;
        SchreierSet::new(elements).map_err(serde::de::Error::custom)
    }
}

/// 1-based position in an enumeration of `𝒜`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchreierRank(BigUint);

impl SchreierRank {
    pub fn new(value: BigUint) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::invalid("ranks are 1-based; 0 is not a rank"));
        }
        Ok(SchreierRank(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }
}

impl From<u64> for SchreierRank {
    /// Panics on zero.
    fn from(value: u64) -> Self {
        assert!(value >= 1, "ranks are 1-based");
        SchreierRank(BigUint::from(value))
    }
}

impl fmt::Display for SchreierRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for SchreierRank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = BigUint::from_str(s.trim())
            .map_err(|e| Error::invalid(format!("bad rank {s:?}: {e}")))?;
        SchreierRank::new(value)
    }
}

impl Serialize for SchreierRank {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for SchreierRank {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff `candidate` is nonempty and `|candidate| = min(candidate)`.
///
/// The candidate is read as a set: repeated entries count once.
pub fn is_maximal_schreier(candidate: &[u64]) -> Result<bool> {
    if candidate.contains(&0) {
        return Err(Error::invalid("Schreier sets contain positive integers only"));
    }
    let set: BTreeSet<u64> = candidate.iter().copied().collect();
    Ok(match set.first() {
        None => false,
        Some(&min) => set.len() as u64 == min,
    })
}

/// `|{A ∈ 𝒜 : max A ≤ n}| = Σ_{m=1}^{n} C(n−m, m−1)`.
pub fn count_max_at_most(n: u64) -> BigUint {
    let mut total = BigUint::zero();
    let mut m = 1;
    // C(n−m, m−1) vanishes once m−1 > n−m.
    while m <= n && m - 1 <= n - m {
        total += binomial(n - m, m - 1);
        m += 1;
    }
    total
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Counts `c(1), c(2), …` via `c(n) = c(n−1) + c(n−2)`; the tests tie this to
/// the binomial form of [`count_max_at_most`].
fn count_by_recurrence(n: u64) -> BigUint {
    fib_pair(n).0
}

/// `(c(n), c(n+1))` by fast doubling, where `c` is the Fibonacci sequence.
fn fib_pair(n: u64) -> (BigUint, BigUint) {
    if n == 0 {
        return (BigUint::zero(), BigUint::one());
    }
    let (a, b) = fib_pair(n / 2);
    let two_b = &b << 1u32;
    let even = &a * (two_b - &a);
    let odd = &a * &a + &b * &b;
    if n.is_multiple_of(2) {
        (even, odd)
    } else {
        let next = &even + &odd;
        (odd, next)
    }
}

/// Number of sets whose maximum is exactly `n`.
fn grade_size(n: u64) -> BigUint {
    match n {
        0 | 2 => BigUint::zero(),
        1 => BigUint::one(),
        _ => count_by_recurrence(n - 2),
    }
}

/// `C(a, b)` that can be stepped down in `a` (or in both) with one small
/// multiplication and exact division.
struct RunningBinomial {
    a: u64,
    b: u64,
    value: BigUint,
}

impl RunningBinomial {
    fn new(a: u64, b: u64) -> Self {
        RunningBinomial { a, b, value: binomial(a, b) }
    }

    /// `C(a, b) → C(a−1, b)`.
    fn dec_a(&mut self) {
        debug_assert!(self.a > 0);
        if !self.value.is_zero() {
            self.value *= self.a - self.b;
            self.value /= self.a;
        }
        self.a -= 1;
    }

    /// `C(a, b) → C(a−1, b−1)`.
    fn dec_both(&mut self) {
        debug_assert!(self.a > 0 && self.b > 0);
        if !self.value.is_zero() {
            self.value *= self.b;
            self.value /= self.a;
        }
        self.a -= 1;
        self.b -= 1;
    }
}

/// The `offset`-th (0-based) `k`-subset of `[lo, hi]` in lexicographic order.
fn lex_unrank(lo: u64, hi: u64, k: u64, mut offset: BigUint) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    if k == 0 {
        debug_assert!(offset.is_zero());
        return out;
    }
    let mut v = lo;
    // Subsets whose next element is v: C(hi − v, remaining − 1).
    let mut count = RunningBinomial::new(hi - v, k - 1);
    loop {
        if offset < count.value {
            out.push(v);
            if out.len() as u64 == k {
                return out;
            }
            count.dec_both();
        } else {
            offset -= &count.value;
            count.dec_a();
        }
        v += 1;
    }
}

/// 0-based lexicographic index of the sorted `k`-subset `subset` of `[lo, hi]`.
fn lex_rank(lo: u64, hi: u64, subset: &[u64]) -> BigUint {
    let k = subset.len() as u64;
    let mut acc = BigUint::zero();
    if k == 0 {
        return acc;
    }
    let mut v = lo;
    let mut count = RunningBinomial::new(hi - v, k - 1);
    for (i, &c) in subset.iter().enumerate() {
        // Every subset agreeing so far but with a smaller element here comes first.
        while v < c {
            acc += &count.value;
            count.dec_a();
            v += 1;
        }
        if i + 1 < subset.len() {
            count.dec_both();
            v += 1;
        }
    }
    acc
}

/// Sizes `C(n−m−1, m−2)` of the min-`m` blocks of grade `n ≥ 3`, for `m = 2, 3, …`.
struct BlockSizes {
    a: u64,
    b: u64,
    value: BigUint,
}

impl BlockSizes {
    fn new(n: u64) -> Self {
        debug_assert!(n >= 3);
        BlockSizes { a: n - 3, b: 0, value: BigUint::one() }
    }

    /// `C(a, b) → C(a−1, b+1)`.
    fn advance(&mut self) {
        if self.value.is_zero() || self.a == 0 || self.a - self.b < 2 {
            self.value = BigUint::zero();
        } else {
            self.value *= (self.a - self.b) * (self.a - self.b - 1);
            self.value /= self.a * (self.b + 1);
        }
        self.a = self.a.saturating_sub(1);
        self.b += 1;
    }
}

/// Locates the grade of a rank: returns `(n, offset)` with `offset` the
/// 0-based position inside the sets of maximum `n`.
fn locate_grade(rank: &BigUint) -> (u64, BigUint) {
    if rank.is_one() {
        return (1, BigUint::zero());
    }
    // c(n) has about 0.694·n bits; start near the answer and walk.
    let guess = ((rank.bits() as f64 + 1.0) / 0.694_241_913_6) as u64;
    let mut n = guess.max(2);
    let (mut prev, mut cur) = fib_pair(n - 1);
    while n > 2 && &prev >= rank {
        let before = &cur - &prev;
        cur = std::mem::replace(&mut prev, before);
        n -= 1;
    }
    while &cur < rank {
        let next = &prev + &cur;
        prev = std::mem::replace(&mut cur, next);
        n += 1;
    }
    (n, rank - &prev - 1u32)
}

/// The set at 0-based position `offset` within grade `n`, lexicographic order.
fn unrank_in_grade(n: u64, mut offset: BigUint) -> SchreierSet {
    if n == 1 {
        return SchreierSet::from_sorted_unchecked(vec![1]);
    }
    let mut m = 2;
    let mut sizes = BlockSizes::new(n);
    while offset >= sizes.value {
        offset -= &sizes.value;
        sizes.advance();
        m += 1;
    }
    let mut elements = Vec::with_capacity(m as usize);
    elements.push(m);
    elements.extend(lex_unrank(m + 1, n - 1, m - 2, offset));
    elements.push(n);
    SchreierSet::from_sorted_unchecked(elements)
}

fn rank_in_grade(set: &SchreierSet) -> BigUint {
    let (m, n) = (set.min_element(), set.max_element());
    if n == 1 {
        return BigUint::zero();
    }
    let mut acc = BigUint::zero();
    let mut sizes = BlockSizes::new(n);
    for _ in 2..m {
        acc += &sizes.value;
        sizes.advance();
    }
    let middle = &set.elements()[1..set.len() - 1];
    acc + lex_rank(m + 1, n - 1, middle)
}

/// Which bijection `ℕ → 𝒜` to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumeration {
    /// Grade by maximum, lexicographic inside a grade.
    #[default]
    Canonical,
    /// Grade by maximum, reverse lexicographic inside a grade.
    ReverseLex,
}

impl Enumeration {
    pub fn name(self) -> &'static str {
        match self {
            Enumeration::Canonical => "canonical",
            Enumeration::ReverseLex => "reverse-lex",
        }
    }

    pub fn unrank(self, rank: &SchreierRank) -> SchreierSet {
        let (n, offset) = locate_grade(rank.value());
        let offset = match self {
            Enumeration::Canonical => offset,
            Enumeration::ReverseLex => grade_size(n) - 1u32 - offset,
        };
        unrank_in_grade(n, offset)
    }

    pub fn rank_of(self, set: &SchreierSet) -> SchreierRank {
        let n = set.max_element();
        let offset = rank_in_grade(set);
        let offset = match self {
            Enumeration::Canonical => offset,
            Enumeration::ReverseLex => grade_size(n) - 1u32 - offset,
        };
        SchreierRank(count_by_recurrence(n - 1) + offset + 1u32)
    }
}

impl fmt::Display for Enumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Enumeration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Enumeration::Canonical),
            "alt" | "reverse-lex" => Ok(Enumeration::ReverseLex),
            other => Err(Error::invalid(format!(
                "unknown enumeration {other:?} (expected canonical|alt)"
            ))),
        }
    }
}

/// `T(index)` under the canonical enumeration.
pub fn unrank(index: &SchreierRank) -> SchreierSet {
    Enumeration::Canonical.unrank(index)
}

/// `T⁻¹(set)` under the canonical enumeration.
pub fn rank_of(set: &SchreierSet) -> SchreierRank {
    Enumeration::Canonical.rank_of(set)
}
