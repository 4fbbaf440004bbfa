//! Linear embeddings of (truncated) `ℓ∞` into `C^α(M)`, `C_b(M)` and `L∞`.
//!
//! A vector `a ∈ ℝ^m` stands for the first `m` coordinates of an element of
//! `ℓ∞`, paired with exactly `m` bumps. For `C^α(M)` the operator is
//! `T(a)(x) = a(n(x))·f_{n(x)}(x)`, where `n(x)` is the unique bump whose
//! support contains `x`, and points outside every support map to 0. It
//! satisfies `‖a‖ ≤ ‖T a‖_{C^α} ≤ (2/K^α + 1)‖a‖`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holder::{bump_f, bump_phi, holder_seminorm, sup_norm, HolderExponent, ScalarField};
use crate::metric::{FiniteMetricSpace, SeparatedPairFamily};
use crate::tolerance::Tolerances;

/// A truncation `a(1..m)` of an element of `ℓ∞`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FiniteSequence {
    entries: Vec<f64>,
}

impl FiniteSequence {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("sequence entries must be finite"));
        }
        Ok(FiniteSequence { entries })
    }

    pub fn zeros(m: usize) -> Self {
        FiniteSequence { entries: vec![0.0; m] }
    }

    /// The unit vector `e_k` (0-based `k`).
    pub fn unit(m: usize, k: usize) -> Self {
        let mut entries = vec![0.0; m];
        entries[k] = 1.0;
        FiniteSequence { entries }
    }

    /// `(+1, −1, +1, …)` when `start_positive`, else the negation.
    pub fn alternating(m: usize, start_positive: bool) -> Self {
        let s = if start_positive { 1.0 } else { -1.0 };
        FiniteSequence {
            entries: (0..m).map(|i| if i % 2 == 0 { s } else { -s }).collect(),
        }
    }

    /// Random signs and magnitudes in `[-scale, scale]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, m: usize, scale: f64) -> Self {
        FiniteSequence {
            entries: (0..m).map(|_| rng.gen_range(-scale..=scale)).collect(),
        }
    }

    /// Entries from the dyadic grid `{j / 2^bits : |j| ≤ 2^bits·scale}`.
    pub fn random_dyadic<R: Rng + ?Sized>(rng: &mut R, m: usize, scale: i64, bits: u32) -> Self {
        let den = (1i64 << bits) as f64;
        let top = scale << bits;
        FiniteSequence {
            entries: (0..m).map(|_| rng.gen_range(-top..=top) as f64 / den).collect(),
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `max |a(n)|`.
    pub fn sup_value(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// `self + λ·other`.
    pub fn axpy(&self, lambda: f64, other: &FiniteSequence) -> Result<FiniteSequence> {
        if self.len() != other.len() {
            return Err(Error::invalid("length mismatch"));
        }
        FiniteSequence::new(self.entries.iter().zip(&other.entries).map(|(a, b)| a + lambda * b).collect())
    }
}

impl TryFrom<Vec<f64>> for FiniteSequence {
    type Error = Error;

    fn try_from(entries: Vec<f64>) -> Result<Self> {
        FiniteSequence::new(entries)
    }
}

impl From<FiniteSequence> for Vec<f64> {
    fn from(a: FiniteSequence) -> Vec<f64> {
        a.entries
    }
}

/// `n(x)`: for each point, the index of the bump supported there, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportIndexMap {
    assignment: Vec<Option<usize>>,
}

impl SupportIndexMap {
    pub fn get(&self, p: usize) -> Option<usize> {
        self.assignment[p]
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }
}

/// Bumps `f_n` of a family together with the support map.
#[derive(Clone, Debug)]
pub struct HolderBumps<'s> {
    bumps: Vec<ScalarField<'s>>,
    support: SupportIndexMap,
    k: f64,
    alpha: HolderExponent,
}

impl<'s> HolderBumps<'s> {
    pub fn new(space: &'s FiniteMetricSpace, family: &SeparatedPairFamily, alpha: HolderExponent) -> Result<Self> {
        let bumps = family
            .pairs()
            .iter()
            .map(|&pair| bump_f(space, pair, family.k(), alpha))
            .collect::<Result<Vec<_>>>()?;
        let mut assignment = vec![None; space.len()];
        for (n, f) in bumps.iter().enumerate() {
            for p in f.support() {
                if let Some(m) = assignment[p] {
                    return Err(Error::InconsistentFamily(format!(
                        "point {:?} lies in the supports of bumps {m} and {n}",
                        space.label(p)
                    )));
                }
                assignment[p] = Some(n);
            }
        }
        Ok(HolderBumps { bumps, support: SupportIndexMap { assignment }, k: family.k(), alpha })
    }

    pub fn bumps(&self) -> &[ScalarField<'s>] {
        &self.bumps
    }

    pub fn support_map(&self) -> &SupportIndexMap {
        &self.support
    }

    /// `2/K^α + 1`.
    pub fn upper_constant(&self) -> f64 {
        2.0 / self.k.powf(self.alpha.get()) + 1.0
    }

    /// `T(a)(x) = a(n(x))·f_{n(x)}(x)`, and 0 where `n(x)` is undefined.
    pub fn apply(&self, a: &FiniteSequence) -> Result<ScalarField<'s>> {
        if a.len() != self.bumps.len() {
            return Err(Error::invalid(format!(
                "vector of length {} for a family of {} pairs",
                a.len(),
                self.bumps.len()
            )));
        }
        let space = self.bumps.first().map(ScalarField::space);
        let Some(space) = space else {
            return Err(Error::invalid("empty pair family"));
        };
        let values = self
            .support
            .assignment
            .iter()
            .enumerate()
            .map(|(p, owner)| match owner {
                Some(n) => a.entries[*n] * self.bumps[*n].value(p),
                None => 0.0,
            })
            .collect();
        ScalarField::new(space, values)
    }

    /// Evaluates `‖T a‖_{C^α}` and checks both sides of the two-sided bound.
    pub fn check(&self, a: &FiniteSequence) -> Result<SandwichCheck> {
        self.check_with(a, &Tolerances::default())
    }

    /// [`Self::check`] with an explicit relative slack.
    pub fn check_with(&self, a: &FiniteSequence, tol: &Tolerances) -> Result<SandwichCheck> {
        let rel = tol.sandwich_rel;
        let image = self.apply(a)?;
        let sup_part = sup_norm(&image);
        let seminorm_part = holder_seminorm(&image, self.alpha);
        let a_norm = a.sup_value();
        let image_norm = sup_part + seminorm_part;
        let bound = self.upper_constant();
        let lower_ok = image_norm >= a_norm * (1.0 - rel);
        let upper_ok = image_norm <= bound * a_norm * (1.0 + rel);
        // The finer bounds the upper estimate is assembled from.
        let seminorm_ok = seminorm_part <= (bound - 1.0) * a_norm * (1.0 + rel);
        let sup_ok = sup_part <= a_norm * (1.0 + rel);
        Ok(SandwichCheck {
            a_norm,
            image_norm,
            sup_part,
            seminorm_part,
            bound_upper: bound,
            ratio: if a_norm > 0.0 { image_norm / a_norm } else { 0.0 },
            lower_ok,
            upper_ok: upper_ok && seminorm_ok && sup_ok,
        })
    }
}

/// Support map of the bumps `f_n`; fails if two supports meet.
pub fn build_support_map(
    space: &FiniteMetricSpace,
    family: &SeparatedPairFamily,
    alpha: HolderExponent,
) -> Result<SupportIndexMap> {
    Ok(HolderBumps::new(space, family, alpha)?.support)
}

/// `T(a)` in `C^α(M)`.
pub fn embed_holder<'s>(
    a: &FiniteSequence,
    space: &'s FiniteMetricSpace,
    family: &SeparatedPairFamily,
    alpha: HolderExponent,
) -> Result<ScalarField<'s>> {
    HolderBumps::new(space, family, alpha)?.apply(a)
}

/// Norms of one vector and its image, with the outcome of both inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub a_norm: f64,
    pub image_norm: f64,
    pub sup_part: f64,
    pub seminorm_part: f64,
    pub bound_upper: f64,
    /// `‖T a‖ / ‖a‖`, or 0 for `a = 0`.
    pub ratio: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl SandwichCheck {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Checks `‖a‖ ≤ ‖T a‖_{C^α} ≤ (2/K^α + 1)‖a‖` for one vector; a failure is
/// a certificate violation.
pub fn verify_sandwich(
    a: &FiniteSequence,
    space: &FiniteMetricSpace,
    family: &SeparatedPairFamily,
    alpha: HolderExponent,
) -> Result<SandwichCheck> {
    let check = HolderBumps::new(space, family, alpha)?.check(a)?;
    if !check.holds() {
        return Err(Error::CertificateViolation(format!(
            "‖a‖ = {}, ‖T a‖ = {} (sup {} + seminorm {}), upper constant {}",
            check.a_norm, check.image_norm, check.sup_part, check.seminorm_part, check.bound_upper
        )));
    }
    Ok(check)
}

/// Distortion of `T` over a batch of vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    /// Smallest observed `‖T a‖ / ‖a‖`.
    pub lower: f64,
    /// Largest observed `‖T a‖ / ‖a‖`.
    pub upper: f64,
    /// `2/K^α + 1`.
    pub bound_upper: f64,
    pub samples: usize,
    /// The vector attaining `lower`.
    pub worst_vector: FiniteSequence,
    /// Vectors for which either inequality failed.
    pub failures: Vec<FiniteSequence>,
}

impl EmbeddingReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs [`HolderBumps::check`] over `vectors` (zero vectors are checked but
/// do not contribute a ratio).
pub fn distortion_report(
    space: &FiniteMetricSpace,
    family: &SeparatedPairFamily,
    alpha: HolderExponent,
    vectors: &[FiniteSequence],
) -> Result<EmbeddingReport> {
    let op = HolderBumps::new(space, family, alpha)?;
    let mut report = EmbeddingReport {
        lower: f64::INFINITY,
        upper: 0.0,
        bound_upper: op.upper_constant(),
        samples: 0,
        worst_vector: FiniteSequence::zeros(family.len()),
        failures: Vec::new(),
    };
    for a in vectors {
        let check = op.check(a)?;
        report.samples += 1;
        if !check.holds() {
            report.failures.push(a.clone());
        }
        if check.a_norm > 0.0 {
            if check.ratio < report.lower {
                report.lower = check.ratio;
                report.worst_vector = a.clone();
            }
            report.upper = report.upper.max(check.ratio);
        }
    }
    if !report.lower.is_finite() {
        report.lower = 0.0;
    }
    Ok(report)
}

/// The structured test vectors: every `e_k` and both alternating sign patterns.
pub fn extremal_vectors(m: usize) -> Vec<FiniteSequence> {
    let mut out: Vec<FiniteSequence> = (0..m).map(|k| FiniteSequence::unit(m, k)).collect();
    out.push(FiniteSequence::alternating(m, true));
    out.push(FiniteSequence::alternating(m, false));
    out
}

/// `T(a) = Σ a(n) φ_n` with `φ_n(x) = max{1 − d(x, x_n)/ε_n, 0}`; the balls
/// `B(x_n, ε_n)` must be pairwise disjoint over the point set.
pub fn embed_cb<'s>(
    a: &FiniteSequence,
    space: &'s FiniteMetricSpace,
    centers: &[usize],
    radii: &[f64],
) -> Result<ScalarField<'s>> {
    if centers.len() != radii.len() || a.len() != centers.len() {
        return Err(Error::invalid(format!(
            "{} entries, {} centers, {} radii",
            a.len(),
            centers.len(),
            radii.len()
        )));
    }
    let bumps = centers
        .iter()
        .zip(radii)
        .map(|(&c, &eps)| bump_phi(space, c, eps))
        .collect::<Result<Vec<_>>>()?;
    let mut owner: Vec<Option<usize>> = vec![None; space.len()];
    for (n, (&c, &eps)) in centers.iter().zip(radii).enumerate() {
        for p in (0..space.len()).filter(|&p| space.d(p, c) < eps) {
            if let Some(m) = owner[p] {
                return Err(Error::invalid(format!(
                    "balls {m} and {n} both contain point {:?}",
                    space.label(p)
                )));
            }
            owner[p] = Some(n);
        }
    }
    let values = (0..space.len())
        .map(|p| bumps.iter().zip(&a.entries).map(|(phi, &an)| an * phi.value(p)).sum())
        .collect();
    ScalarField::new(space, values)
}

/// `Σ a(n) χ_{A_n}` on a partition into cells of positive mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    pub masses: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepFunction {
    /// Essential supremum: the largest `|value|` over cells of positive mass.
    pub fn ess_sup(&self) -> f64 {
        self.masses
            .iter()
            .zip(&self.values)
            .filter(|(m, _)| **m > 0.0)
            .fold(0.0, |acc, (_, v)| acc.max(v.abs()))
    }
}

pub fn embed_linf(a: &FiniteSequence, masses: &[f64]) -> Result<StepFunction> {
    if a.len() != masses.len() {
        return Err(Error::invalid(format!("{} entries for {} cells", a.len(), masses.len())));
    }
    if let Some(m) = masses.iter().find(|m| !(**m > 0.0 && m.is_finite())) {
        return Err(Error::invalid(format!("cell mass {m} is not positive")));
    }
    Ok(StepFunction { masses: masses.to_vec(), values: a.entries.clone() })
}
