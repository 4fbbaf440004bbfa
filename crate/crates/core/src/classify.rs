//! Weak Banach–Saks verdicts for `C^α(M)`, `C_b(M)`, `L∞(μ)` and `C(K)` with
//! `K` a countable compact space.
//!
//! Countable compact spaces are described by an ordinal `o` in Cantor normal
//! form; the space is the order-topology interval `[1, o]`, so a natural
//! number `n` is an `n`-point space and `ω` is a convergent sequence with its
//! limit. The derived set of `[1, o]` is the set of limit ordinals `ω·β ≤ o`,
//! which is homeomorphic to `[1, β]`: drop the finite part of `o` and lower
//! each finite exponent by one (an infinite exponent `e` satisfies
//! `1 + e = e` and is kept).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One `ω^exponent · coefficient` summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

/// An ordinal below `ε₀` in Cantor normal form. The empty sum is 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn natural(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term { exponent: Ordinal::zero(), coefficient: n }] }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::natural(1), 1)
    }

    /// `ω^exponent · coefficient`.
    pub fn omega_pow(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal { terms: vec![Term { exponent, coefficient }] }
    }

    /// Checks the normal-form conditions: positive coefficients and strictly
    /// decreasing exponents, recursively.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.coefficient == 0 {
                return Err(Error::invalid("Cantor normal form coefficients must be positive"));
            }
        }
        if terms.windows(2).any(|w| w[0].exponent <= w[1].exponent) {
            return Err(Error::invalid("Cantor normal form exponents must strictly decrease"));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when the ordinal is a natural number.
    pub fn as_natural(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_natural().is_some()
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = a.exponent.cmp(&b.exponent).then(a.coefficient.cmp(&b.coefficient));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match t.exponent.as_natural() {
                Some(0) => {
                    write!(f, "{}", t.coefficient)?;
                    continue;
                }
                Some(1) => write!(f, "ω")?,
                Some(n) => write!(f, "ω^{n}")?,
                None if t.exponent == Ordinal::omega() => write!(f, "ω^ω")?,
                None => write!(f, "ω^({})", t.exponent)?,
            }
            if t.coefficient > 1 {
                write!(f, "·{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

/// Accepts `ω` or `w`, `^`, `*` or `·`, `+`, parentheses and naturals, e.g.
/// `w^2*3 + w*2 + 5`, `ω^ω`, `w^(w+1)`.
impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut parser = Parser { tokens: &tokens, pos: 0 };
        let o = parser.sum()?;
        if parser.pos != tokens.len() {
            return Err(Error::invalid(format!("unexpected input at position {} in {s:?}", parser.pos)));
        }
        Ok(o)
    }
}

struct Parser<'a> {
    tokens: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn natural(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::invalid(format!("expected a number at position {start}")));
        }
        let text: String = self.tokens[start..self.pos].iter().collect();
        text.parse().map_err(|e| Error::invalid(format!("bad number {text}: {e}")))
    }

    fn is_omega(c: Option<char>) -> bool {
        matches!(c, Some('w') | Some('ω'))
    }

    fn sum(&mut self) -> Result<Ordinal> {
        let mut terms = vec![self.term()?];
        while self.eat('+') {
            terms.push(self.term()?);
        }
        let terms: Vec<Term> = terms.into_iter().flatten().collect();
        Ordinal::from_terms(terms)
    }

    fn term(&mut self) -> Result<Option<Term>> {
        if Self::is_omega(self.peek()) {
            self.pos += 1;
            let exponent = if self.eat('^') { self.exponent()? } else { Ordinal::natural(1) };
            let coefficient = if self.eat('*') || self.eat('·') { self.natural()? } else { 1 };
            if coefficient == 0 {
                return Ok(None);
            }
            Ok(Some(Term { exponent, coefficient }))
        } else {
            let n = self.natural()?;
            Ok((n > 0).then(|| Term { exponent: Ordinal::zero(), coefficient: n }))
        }
    }

    fn exponent(&mut self) -> Result<Ordinal> {
        if self.eat('(') {
            let o = self.sum()?;
            if !self.eat(')') {
                return Err(Error::invalid("missing ')'"));
            }
            Ok(o)
        } else if Self::is_omega(self.peek()) {
            self.pos += 1;
            Ok(Ordinal::omega())
        } else {
            Ok(Ordinal::natural(self.natural()?))
        }
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Type of the derived set of `[1, o]`; zero when it is empty.
pub fn derived_set(o: &Ordinal) -> Ordinal {
    let terms = o
        .terms
        .iter()
        .filter(|t| !t.exponent.is_zero())
        .map(|t| match t.exponent.as_natural() {
            Some(e) => Term { exponent: Ordinal::natural(e - 1), coefficient: t.coefficient },
            None => t.clone(),
        })
        .collect();
    Ordinal { terms }
}

/// Cantor–Bendixson rank of `[1, o]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CbRank {
    /// Least `n` with an empty `n`-th derived set.
    Finite(u64),
    /// No finite derived set is empty, so `M^(ω) ≠ ∅`.
    Infinite,
}

impl Serialize for CbRank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CbRank::Finite(n) => s.serialize_u64(*n),
            CbRank::Infinite => s.serialize_str("infinite"),
        }
    }
}

pub fn cb_rank(o: &Ordinal) -> CbRank {
    // An infinite exponent survives every derivation.
    if o.terms.iter().any(|t| !t.exponent.is_finite()) {
        return CbRank::Infinite;
    }
    let mut rank = 0;
    let mut current = o.clone();
    while !current.is_zero() {
        current = derived_set(&current);
        rank += 1;
    }
    CbRank::Finite(rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceFamily {
    Calpha,
    Cb,
    Linf,
    COfOrdinal,
}

/// Which theorem decided a verdict, and under which assumption.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub theorem: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assumption: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub space_family: SpaceFamily,
    pub wbs: bool,
    pub reason: Reason,
}

const THM_CALPHA: &str = "C^α(M) is weakly Banach–Saks iff M is finite";
const THM_COMPACT: &str = "for compact M, C(M) is weakly Banach–Saks iff M^(ω) = ∅";
const THM_NONCOMPACT: &str =
    "for non-compact M, ℓ∞ embeds isometrically into C_b(M), which is therefore not weakly Banach–Saks";
const THM_LINF: &str =
    "L∞(μ) fails weak Banach–Saks iff there are infinitely many disjoint sets of positive measure";

/// Cardinality of a metric space, as far as the caller knows it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceSize {
    Finite(u64),
    Infinite,
}

pub fn classify_calpha(size: SpaceSize) -> Verdict {
    let (wbs, detail) = match size {
        SpaceSize::Finite(n) => (true, format!("|M| = {n}: C^α(M) is finite-dimensional")),
        SpaceSize::Infinite => (false, "M is infinite: ℓ∞ embeds into C^α(M)".to_owned()),
    };
    Verdict {
        space_family: SpaceFamily::Calpha,
        wbs,
        reason: Reason { theorem: THM_CALPHA.into(), detail, assumption: None },
    }
}

pub fn classify_c_of_ordinal(o: &Ordinal) -> Verdict {
    let rank = cb_rank(o);
    let (wbs, detail) = match rank {
        CbRank::Finite(r) => (true, format!("[1, {o}] has Cantor–Bendixson rank {r}, so M^(ω) = ∅")),
        CbRank::Infinite => (false, format!("[1, {o}] has M^(n) ≠ ∅ for every n, so M^(ω) ≠ ∅")),
    };
    Verdict {
        space_family: SpaceFamily::COfOrdinal,
        wbs,
        reason: Reason { theorem: THM_COMPACT.into(), detail, assumption: None },
    }
}

/// What the caller asserts about a metric space given only as a finite sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CbAssumption {
    /// The space is exactly the finite point set.
    Finite(u64),
    /// The space is compact and homeomorphic to the ordinal interval `[1, o]`.
    Ordinal(Ordinal),
    /// The space is not compact.
    Noncompact,
}

pub fn classify_cb(assumption: &CbAssumption) -> Verdict {
    match assumption {
        CbAssumption::Finite(n) => Verdict {
            space_family: SpaceFamily::Cb,
            wbs: true,
            reason: Reason {
                theorem: THM_COMPACT.into(),
                detail: format!("a {n}-point space is compact with no limit points"),
                assumption: Some(format!("M is finite ({n} points)")),
            },
        },
        CbAssumption::Ordinal(o) => {
            let mut v = classify_c_of_ordinal(o);
            v.space_family = SpaceFamily::Cb;
            v.reason.assumption = Some(format!("M is homeomorphic to [1, {o}]"));
            v
        }
        CbAssumption::Noncompact => Verdict {
            space_family: SpaceFamily::Cb,
            wbs: false,
            reason: Reason {
                theorem: THM_NONCOMPACT.into(),
                detail: "a sequence without convergent subsequence carries disjoint bumps φ_n".into(),
                assumption: Some("M is not compact (not decidable from finite data)".into()),
            },
        },
    }
}

/// Atoms `A_1 … A_m` of a purely atomic measure, or a finite piece of an
/// infinite disjoint family when `is_terminal` is false.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteMeasurePartition {
    masses: Vec<f64>,
    is_terminal: bool,
}

impl FiniteMeasurePartition {
    pub fn new(masses: Vec<f64>, is_terminal: bool) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::invalid("a partition needs at least one cell"));
        }
        if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
            return Err(Error::invalid(format!("cell mass {m} is not positive")));
        }
        Ok(FiniteMeasurePartition { masses, is_terminal })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn is_terminal(&self) -> bool {
        self.is_terminal
    }
}

pub fn classify_linf(p: &FiniteMeasurePartition) -> Verdict {
    let m = p.masses.len();
    let detail = if p.is_terminal {
        format!("{m} atoms exhaust the measure: L∞(μ) ≅ ℝ^{m} is finite-dimensional")
    } else {
        "infinitely many disjoint sets of positive measure: ℓ∞ embeds isometrically".to_owned()
    };
    Verdict {
        space_family: SpaceFamily::Linf,
        wbs: p.is_terminal,
        reason: Reason { theorem: THM_LINF.into(), detail, assumption: None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(o("w^2*3 + w*2 + 5").to_string(), "ω^2·3 + ω·2 + 5");
        assert_eq!(o("ω^ω").to_string(), "ω^ω");
        assert_eq!(o("w^(w+1)*2 + w").to_string(), "ω^(ω + 1)·2 + ω");
        assert_eq!(o("0"), Ordinal::zero());
        assert_eq!(o("7"), Ordinal::natural(7));
        assert!("w + w^2".parse::<Ordinal>().is_err());
        assert!("w + w".parse::<Ordinal>().is_err());
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("w^(2".parse::<Ordinal>().is_err());
        assert_eq!(o(&o("w^(w^2+3)*4 + w^5 + 1").to_string()), o("w^(w^2+3)*4 + w^5 + 1"));
    }

    #[test]
    fn ordering() {
        assert!(o("w^w") > o("w^5*100"));
        assert!(o("w*2") > o("w + 100"));
        assert!(o("w + 1") > o("w"));
        assert!(o("3") < o("w"));
    }

    #[test]
    fn derived_examples() {
        assert_eq!(derived_set(&o("w^2*3 + w*2 + 5")), o("w*3 + 2"));
        assert!(derived_set(&o("5")).is_zero());
        assert_eq!(derived_set(&o("w")), o("1"));
        assert_eq!(derived_set(&o("w^w*2 + w^3")), o("w^w*2 + w^2"));
    }

    #[test]
    fn ranks() {
        assert_eq!(cb_rank(&o("5")), CbRank::Finite(1));
        assert_eq!(cb_rank(&o("w^2*3 + w*2 + 5")), CbRank::Finite(3));
        assert_eq!(cb_rank(&o("w^w")), CbRank::Infinite);
        assert_eq!(cb_rank(&Ordinal::zero()), CbRank::Finite(0));
        for s in ["w", "w^2 + 1", "w^4*2 + w + 9"] {
            let x = o(s);
            if let (CbRank::Finite(a), CbRank::Finite(b)) = (cb_rank(&x), cb_rank(&derived_set(&x))) {
                assert_eq!(a, b + 1);
            } else {
                panic!("finite exponents give finite ranks");
            }
        }
    }

    #[test]
    fn verdicts() {
        assert!(classify_c_of_ordinal(&o("4")).wbs);
        assert!(classify_c_of_ordinal(&o("w^2 + 1")).wbs);
        assert!(!classify_c_of_ordinal(&o("w^w")).wbs);
        assert!(classify_calpha(SpaceSize::Finite(10)).wbs);
        assert!(classify_calpha(SpaceSize::Finite(1)).wbs);
        assert!(!classify_calpha(SpaceSize::Infinite).wbs);
        let p = FiniteMeasurePartition::new(vec![0.2, 0.3, 0.5], true).unwrap();
        assert!(classify_linf(&p).wbs);
        let p = FiniteMeasurePartition::new(vec![0.5, 0.25], false).unwrap();
        assert!(!classify_linf(&p).wbs);
        assert!(FiniteMeasurePartition::new(vec![0.5, 0.0], true).is_err());
        assert!(!classify_cb(&CbAssumption::Noncompact).wbs);
        assert!(classify_cb(&CbAssumption::Finite(3)).wbs);
        let v = classify_cb(&CbAssumption::Ordinal(o("w^w + 1")));
        assert!(!v.wbs);
        assert!(v.reason.assumption.is_some());
    }

    #[test]
    fn verdict_json() {
        let v = classify_c_of_ordinal(&o("w^w"));
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["space_family"], "c_of_ordinal");
        assert_eq!(j["wbs"], false);
        assert!(j["reason"]["theorem"].as_str().unwrap().contains("M^(ω)"));
    }
}
