//! Sup norm, Hölder seminorm and bump functions on a finite metric space.
//!
//! `‖f‖_C = max |f(x)|`, `ρ_α(f) = max_{x≠y} |f(x) − f(y)| / d(x,y)^α` and
//! `‖f‖_{C^α} = ‖f‖_C + ρ_α(f)`. Pairs are scanned in a fixed order, so all
//! results are bit-reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::tolerance::FLOAT_SLACK;

/// `α ∈ (0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HolderExponent(f64);

impl HolderExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(HolderExponent(alpha))
        } else {
            Err(Error::invalid(format!("Hölder exponent must lie in (0, 1], got {alpha}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for HolderExponent {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        HolderExponent::new(alpha)
    }
}

impl std::str::FromStr for HolderExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("not a number: {s:?}"));
        let alpha = match s.trim().split_once('/') {
            Some((p, q)) => {
                let p: f64 = p.trim().parse().map_err(|_| bad())?;
                let q: f64 = q.trim().parse().map_err(|_| bad())?;
                p / q
            }
            None => s.trim().parse().map_err(|_| bad())?,
        };
        HolderExponent::new(alpha)
    }
}

impl From<HolderExponent> for f64 {
    fn from(alpha: HolderExponent) -> f64 {
        alpha.0
    }
}

/// A real value at every point of a space.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField<'s> {
    space: &'s FiniteMetricSpace,
    values: Vec<f64>,
}

impl<'s> ScalarField<'s> {
    pub fn new(space: &'s FiniteMetricSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::invalid(format!(
                "{} values for a {}-point space",
                values.len(),
                space.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("field values must be finite"));
        }
        Ok(ScalarField { space, values })
    }

    pub fn zero(space: &'s FiniteMetricSpace) -> Self {
        ScalarField { space, values: vec![0.0; space.len()] }
    }

    pub fn space(&self) -> &'s FiniteMetricSpace {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, p: usize) -> f64 {
        self.values[p]
    }

    /// Points where the field is strictly positive.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&p| self.values[p] > 0.0).collect()
    }

    /// Pointwise image under `g`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        ScalarField::new(self.space, self.values.iter().map(|&v| g(v)).collect())
    }

    /// The field read on a subspace, matched by label.
    pub fn restrict<'t>(&self, subspace: &'t FiniteMetricSpace) -> Result<ScalarField<'t>> {
        let values = subspace
            .labels()
            .iter()
            .map(|l| Ok(self.values[self.space.index_of(l)?]))
            .collect::<Result<Vec<_>>>()?;
        ScalarField::new(subspace, values)
    }

    pub fn to_file(&self, space_ref: Option<String>) -> FieldFile {
        FieldFile { space_ref, values: self.values.clone() }
    }
}

/// On-disk scalar field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_ref: Option<String>,
    pub values: Vec<f64>,
}

pub fn sup_norm(f: &ScalarField<'_>) -> f64 {
    f.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Exhaustive scan over unordered pairs; 0 on a one-point space.
pub fn holder_seminorm(f: &ScalarField<'_>, alpha: HolderExponent) -> f64 {
    let space = f.space;
    let a = alpha.get();
    let mut best = 0.0f64;
    for x in 0..space.len() {
        for y in x + 1..space.len() {
            let ratio = (f.values[x] - f.values[y]).abs() / space.d(x, y).powf(a);
            best = best.max(ratio);
        }
    }
    best
}

pub fn holder_norm(f: &ScalarField<'_>, alpha: HolderExponent) -> f64 {
    sup_norm(f) + holder_seminorm(f, alpha)
}

/// `f_n(x) = max{min{1, d^α(x_n,y_n) − d^α(x,y_n)/K^α}, 0}`.
///
/// The inner term is positive exactly on the open ball `B(y_n, K·d(x_n,y_n))`;
/// outside it the value is set to an exact 0 so that the support agrees with
/// the ball even where rounding would leave a tiny positive residue.
pub fn bump_f<'s>(
    space: &'s FiniteMetricSpace,
    pair: (usize, usize),
    k: f64,
    alpha: HolderExponent,
) -> Result<ScalarField<'s>> {
    let (x_n, y_n) = pair;
    if x_n >= space.len() || y_n >= space.len() {
        return Err(Error::invalid("pair point outside the space"));
    }
    if x_n == y_n {
        return Err(Error::invalid("bump needs x_n ≠ y_n"));
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::invalid(format!("K must lie in (0, 1], got {k}")));
    }
    let a = alpha.get();
    let d_pair = space.d(x_n, y_n);
    let radius = k * d_pair;
    let peak = d_pair.powf(a);
    let scale = k.powf(a);
    let values = (0..space.len())
        .map(|x| {
            let d = space.d(x, y_n);
            if d >= radius {
                0.0
            } else {
                (peak - d.powf(a) / scale).clamp(0.0, 1.0)
            }
        })
        .collect();
    ScalarField::new(space, values)
}

/// `φ_n(x) = max{1 − d(x, x_n)/ε_n, 0}`.
pub fn bump_phi(space: &FiniteMetricSpace, center: usize, epsilon: f64) -> Result<ScalarField<'_>> {
    if center >= space.len() {
        return Err(Error::invalid("center outside the space"));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let values = (0..space.len())
        .map(|x| (1.0 - space.d(x, center) / epsilon).max(0.0))
        .collect();
    ScalarField::new(space, values)
}

/// `|a^α − b^α| ≤ |a − b|^α`, up to `FLOAT_SLACK · max(1, a^α, b^α)`.
pub fn power_diff_check(a: f64, b: f64, alpha: HolderExponent) -> bool {
    if !(a >= 0.0 && b >= 0.0) {
        return false;
    }
    let (pa, pb) = (a.powf(alpha.get()), b.powf(alpha.get()));
    (pa - pb).abs() <= (a - b).abs().powf(alpha.get()) + FLOAT_SLACK * 1f64.max(pa).max(pb)
}
