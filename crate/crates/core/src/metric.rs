//! Finite metric spaces and separated pair families.
//!
//! Balls are open: `p ∈ B(y, r)` iff `d(p, y) < r`. A [`SeparatedPairFamily`]
//! with constant `K ∈ (0, 1]` must satisfy, over the finite point set,
//!
//! 1. `x_n ≠ y_n`,
//! 2. `d(x_m, y_n) ≥ K·d(x_n, y_n)` for all `n, m`,
//! 3. no point lies in two of the balls `B_n = B(y_n, K·d(x_n, y_n))`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::METRIC_REL;

/// A validated finite metric space with labelled points.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    dist: Vec<f64>,
}

/// One failed metric axiom.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    NonzeroDiagonal { point: String, value: f64 },
    Asymmetric { a: String, b: String, ab: f64, ba: f64 },
    NotPositive { a: String, b: String, value: f64 },
    Triangle { a: String, b: String, c: String, ac: f64, ab_plus_bc: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub points: usize,
    pub violations: Vec<MetricViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the metric axioms on a labelled square matrix.
///
/// The triangle inequality `d(a,c) ≤ d(a,b) + d(b,c)` is accepted up to a
/// relative slack of `tolerance` (on the larger side). Every violated triple is
/// listed; an empty report means the matrix is a metric.
pub fn validate_metric(labels: &[String], rows: &[Vec<f64>], tolerance: f64) -> Result<ValidationReport> {
    let n = rows.len();
    if labels.len() != n {
        return Err(Error::invalid(format!("{} labels for a {n}-row matrix", labels.len())));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::invalid(format!("row {i} has {} entries, expected {n}", row.len())));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("distance matrix contains NaN or infinite entries"));
    }
    let unique: BTreeSet<&String> = labels.iter().collect();
    if unique.len() != n {
        return Err(Error::invalid("duplicate point labels"));
    }

    let mut violations = Vec::new();
    for a in 0..n {
        if rows[a][a] != 0.0 {
            violations.push(MetricViolation::NonzeroDiagonal {
                point: labels[a].clone(),
                value: rows[a][a],
            });
        }
        for b in a + 1..n {
            if rows[a][b] != rows[b][a] {
                violations.push(MetricViolation::Asymmetric {
                    a: labels[a].clone(),
                    b: labels[b].clone(),
                    ab: rows[a][b],
                    ba: rows[b][a],
                });
            }
            for (p, q) in [(a, b), (b, a)] {
                if rows[p][q] <= 0.0 {
                    violations.push(MetricViolation::NotPositive {
                        a: labels[p].clone(),
                        b: labels[q].clone(),
                        value: rows[p][q],
                    });
                }
            }
        }
    }
    for a in 0..n {
        for c in 0..n {
            if a == c {
                continue;
            }
            for b in 0..n {
                if b == a || b == c {
                    continue;
                }
                let ac = rows[a][c];
                let via = rows[a][b] + rows[b][c];
                if ac - via > tolerance * ac.max(via) {
                    violations.push(MetricViolation::Triangle {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        c: labels[c].clone(),
                        ac,
                        ab_plus_bc: via,
                    });
                }
            }
        }
    }
    Ok(ValidationReport { points: n, violations })
}

/// Distance used to turn coordinates into a matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointMetric {
    #[default]
    Euclidean,
    L1,
    Linf,
}

impl PointMetric {
    pub fn distance(self, p: &[f64], q: &[f64]) -> f64 {
        let diffs = p.iter().zip(q).map(|(a, b)| (a - b).abs());
        match self {
            PointMetric::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            PointMetric::L1 => diffs.sum(),
            PointMetric::Linf => diffs.fold(0.0, f64::max),
        }
    }
}

/// On-disk form of a space: coordinates plus a norm, or an explicit matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceFile {
    Points {
        points: Vec<Vec<f64>>,
        #[serde(default)]
        metric: PointMetric,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Matrix {
        matrix: Vec<Vec<f64>>,
        labels: Vec<String>,
    },
}

impl SpaceFile {
    /// Labels and distance rows, before validation.
    pub fn into_matrix(self) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
        match self {
            SpaceFile::Matrix { matrix, labels } => Ok((labels, matrix)),
            SpaceFile::Points { points, metric, labels } => {
                if let Some(dim) = points.first().map(Vec::len) {
                    if points.iter().any(|p| p.len() != dim) {
                        return Err(Error::invalid("points have differing dimensions"));
                    }
                }
                let labels = labels.unwrap_or_else(|| (0..points.len()).map(|i| i.to_string()).collect());
                let rows = points
                    .iter()
                    .map(|p| points.iter().map(|q| metric.distance(p, q)).collect())
                    .collect();
                Ok((labels, rows))
            }
        }
    }
}

impl FiniteMetricSpace {
    /// Validates and wraps a labelled distance matrix.
    pub fn from_matrix(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        FiniteMetricSpace::from_matrix_with_tolerance(labels, rows, METRIC_REL)
    }

    /// [`Self::from_matrix`] with a relative triangle-inequality tolerance.
    pub fn from_matrix_with_tolerance(labels: Vec<String>, rows: Vec<Vec<f64>>, tolerance: f64) -> Result<Self> {
        let report = validate_metric(&labels, &rows, tolerance)?;
        if let Some(first) = report.violations.first() {
            return Err(Error::invalid(format!(
                "not a metric ({} violations, first: {first:?})",
                report.violations.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::invalid("a metric space needs at least one point"));
        }
        let n = labels.len();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let dist = rows.into_iter().flatten().collect::<Vec<_>>();
        debug_assert_eq!(dist.len(), n * n);
        Ok(FiniteMetricSpace { labels, index, dist })
    }

    pub fn from_points(points: &[Vec<f64>], metric: PointMetric) -> Result<Self> {
        SpaceFile::Points { points: points.to_vec(), metric, labels: None }.try_into()
    }

    /// Points of the real line with their coordinates (formatted) as labels.
    pub fn from_line(coords: &[f64]) -> Result<Self> {
        let labels = coords.iter().map(|c| format!("{c}")).collect();
        let rows = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        FiniteMetricSpace::from_matrix(labels, rows)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::invalid(format!("unknown point label {label:?}")))
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.len()).map(<[f64]>::to_vec).collect()
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile::Matrix { matrix: self.rows(), labels: self.labels.clone() }
    }

    /// Induced subspace on `subset`, in the order given.
    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<FiniteMetricSpace> {
        let idx = subset
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.d(i, j)).collect())
            .collect();
        FiniteMetricSpace::from_matrix(labels, rows)
    }
}

impl TryFrom<SpaceFile> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(file: SpaceFile) -> Result<Self> {
        let (labels, rows) = file.into_matrix()?;
        FiniteMetricSpace::from_matrix(labels, rows)
    }
}

/// Pairs `(x_n, y_n)` (point indices) with the separation constant `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedPairFamily {
    pairs: Vec<(usize, usize)>,
    k: f64,
}

impl SeparatedPairFamily {
    /// Indices must be points of `space`; the separation conditions are
    /// checked by [`verify_pair_family`], not here.
    pub fn new(space: &FiniteMetricSpace, pairs: Vec<(usize, usize)>, k: f64) -> Result<Self> {
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= space.len() || y >= space.len()) {
            return Err(Error::invalid(format!("pair ({x}, {y}) is outside a {}-point space", space.len())));
        }
        if !k.is_finite() {
            return Err(Error::invalid("K must be finite"));
        }
        Ok(SeparatedPairFamily { pairs, k })
    }

    pub fn from_file(space: &FiniteMetricSpace, file: &PairFamilyFile) -> Result<Self> {
        let pairs = file
            .pairs
            .iter()
            .map(|(x, y)| Ok((space.index_of(x)?, space.index_of(y)?)))
            .collect::<Result<Vec<_>>>()?;
        SeparatedPairFamily::new(space, pairs, file.k)
    }

    pub fn to_file(&self, space: &FiniteMetricSpace) -> PairFamilyFile {
        PairFamilyFile {
            k: self.k,
            pairs: self
                .pairs
                .iter()
                .map(|&(x, y)| (space.label(x).to_owned(), space.label(y).to_owned()))
                .collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Radius `K·d(x_n, y_n)` of the ball `B_n` around `y_n`.
    pub fn radius(&self, space: &FiniteMetricSpace, n: usize) -> f64 {
        let (x, y) = self.pairs[n];
        self.k * space.d(x, y)
    }

    /// Whether point `p` lies in the open ball `B_n`.
    pub fn in_ball(&self, space: &FiniteMetricSpace, n: usize, p: usize) -> bool {
        space.d(p, self.pairs[n].1) < self.radius(space, n)
    }
}

/// On-disk pair family: labels instead of indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFamilyFile {
    #[serde(rename = "K")]
    pub k: f64,
    pub pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum PairViolation {
    /// `K ∉ (0, 1]`.
    ConstantOutOfRange { k: f64 },
    /// (i) `x_n = y_n`.
    Degenerate { n: usize },
    /// (ii) `x_m ∈ B(y_n, K d(x_n, y_n))`.
    XInBall { m: usize, n: usize, distance: f64, radius: f64 },
    /// (iii) a point lies in both `B_n` and `B_m`.
    BallsIntersect { n: usize, m: usize, point: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFamilyReport {
    pub ok: bool,
    pub pairs: usize,
    pub violations: Vec<PairViolation>,
}

/// Checks conditions (i)–(iii) and `0 < K ≤ 1` over the finite point set.
pub fn verify_pair_family(space: &FiniteMetricSpace, family: &SeparatedPairFamily) -> PairFamilyReport {
    let mut violations = Vec::new();
    let k = family.k();
    if !(k > 0.0 && k <= 1.0) {
        violations.push(PairViolation::ConstantOutOfRange { k });
    }
    let pairs = family.pairs();
    for (n, &(x, y)) in pairs.iter().enumerate() {
        if x == y {
            violations.push(PairViolation::Degenerate { n });
        }
    }
    for n in 0..pairs.len() {
        let (_, y_n) = pairs[n];
        let radius = family.radius(space, n);
        for (m, &(x_m, _)) in pairs.iter().enumerate() {
            let distance = space.d(x_m, y_n);
            if distance < radius {
                violations.push(PairViolation::XInBall { m, n, distance, radius });
            }
        }
    }
    for p in 0..space.len() {
        let owners: Vec<usize> = (0..pairs.len()).filter(|&n| family.in_ball(space, n, p)).collect();
        for (a, &n) in owners.iter().enumerate() {
            for &m in &owners[a + 1..] {
                violations.push(PairViolation::BallsIntersect {
                    n,
                    m,
                    point: space.label(p).to_owned(),
                });
            }
        }
    }
    PairFamilyReport { ok: violations.is_empty(), pairs: pairs.len(), violations }
}

/// Outcome of [`find_pair_family`].
#[derive(Clone, Debug, PartialEq)]
pub enum PairSearch {
    Found(SeparatedPairFamily),
    /// Fewer than `target` pairs; `best` is still a verified family.
    Shortfall { best: SeparatedPairFamily, target: usize },
}

impl PairSearch {
    pub fn family(&self) -> &SeparatedPairFamily {
        match self {
            PairSearch::Found(f) | PairSearch::Shortfall { best: f, .. } => f,
        }
    }

    pub fn into_family(self) -> SeparatedPairFamily {
        match self {
            PairSearch::Found(f) | PairSearch::Shortfall { best: f, .. } => f,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, PairSearch::Found(_))
    }
}

/// Greedy search for a separated pair family with constant `k`.
///
/// Ordered candidate pairs are scanned by increasing `d(x, y)`, ties broken by
/// the labels of `x`, then `y`. A candidate is accepted when both points are unused, `x` lies
/// outside every accepted ball, the new ball contains no accepted `x_m`, and no
/// point falls in both the new ball and an accepted one. Every point is used at
/// most once, so no family exceeds `⌊|M|/2⌋` pairs.
pub fn find_pair_family(space: &FiniteMetricSpace, k: f64, target_count: usize) -> Result<PairSearch> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::invalid(format!("K must lie in (0, 1], got {k}")));
    }
    let n = space.len();
    let mut candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    candidates.sort_by(|&(a, b), &(c, d)| {
        space
            .d(a, b)
            .total_cmp(&space.d(c, d))
            .then_with(|| (space.label(a), space.label(b)).cmp(&(space.label(c), space.label(d))))
    });

    let mut used = vec![false; n];
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut accepted: Vec<(usize, usize)> = Vec::new();
    for (x, y) in candidates {
        if accepted.len() >= target_count {
            break;
        }
        if used[x] || used[y] || owner[x].is_some() {
            continue;
        }
        let radius = k * space.d(x, y);
        let ball: Vec<usize> = (0..n).filter(|&p| space.d(p, y) < radius).collect();
        if ball.iter().any(|&p| owner[p].is_some()) {
            continue;
        }
        if accepted.iter().any(|&(x_m, _)| space.d(x_m, y) < radius) {
            continue;
        }
        let id = accepted.len();
        for p in ball {
            owner[p] = Some(id);
        }
        used[x] = true;
        used[y] = true;
        accepted.push((x, y));
    }

    let family = SeparatedPairFamily { pairs: accepted, k };
    debug_assert!(verify_pair_family(space, &family).ok);
    Ok(if family.len() >= target_count {
        PairSearch::Found(family)
    } else {
        PairSearch::Shortfall { best: family, target: target_count }
    })
}
