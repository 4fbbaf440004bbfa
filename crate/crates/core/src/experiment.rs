//! Seeded experiment suites.
//!
//! Each suite returns summary rows (for a CSV table) and JSON artifacts such as
//! certificates. Outcomes depend only on the [`ExperimentConfig`], so two runs
//! with the same config serialise to identical bytes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{
    classify_c_of_ordinal, classify_calpha, classify_cb, classify_linf, CbAssumption,
    FiniteMeasurePartition, Ordinal, SpaceSize, Verdict,
};
use crate::embed::{embed_cb, embed_linf, extremal_vectors, FiniteSequence, HolderBumps};
use crate::error::{Error, Result};
use crate::holder::{holder_seminorm, power_diff_check, sup_norm, HolderExponent};
use crate::metric::{find_pair_family, verify_pair_family, FiniteMetricSpace, PointMetric, SeparatedPairFamily};
use crate::samples;
use crate::schreier::{count_max_at_most, Enumeration, SchreierRank};
use crate::tolerance::Tolerances;
use crate::weaknull::{SequenceOracle, Subsequence, SubsequenceRule};

/// The `N` values every Cesàro subsequence is certified at.
pub const CESARO_NS: [u64; 6] = [1, 2, 4, 8, 16, 32];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub enumeration: Enumeration,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { seed: 0, tolerances: Tolerances::default(), enumeration: Enumeration::Canonical }
    }
}

impl ExperimentConfig {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    CesaroSuite,
    SchreierSuite,
    NullitySuite,
    SeminormSuite,
    SandwichSuite,
    IsometrySuite,
    ScalarSuite,
    ClassifyTable,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::CesaroSuite,
        Experiment::SchreierSuite,
        Experiment::NullitySuite,
        Experiment::SeminormSuite,
        Experiment::SandwichSuite,
        Experiment::IsometrySuite,
        Experiment::ScalarSuite,
        Experiment::ClassifyTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::CesaroSuite => "cesaro-suite",
            Experiment::SchreierSuite => "schreier-suite",
            Experiment::NullitySuite => "nullity-suite",
            Experiment::SeminormSuite => "seminorm-suite",
            Experiment::SandwichSuite => "sandwich-suite",
            Experiment::IsometrySuite => "isometry-suite",
            Experiment::ScalarSuite => "scalar-suite",
            Experiment::ClassifyTable => "classify-table",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown experiment {s:?}")))
    }
}

/// One line of the CSV summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub case: String,
    pub quantity: String,
    pub value: String,
    pub bound: String,
    pub ok: bool,
}

impl SummaryRow {
    fn new(case: impl Into<String>, quantity: &str, value: impl ToString, bound: impl ToString, ok: bool) -> Self {
        SummaryRow {
            case: case.into(),
            quantity: quantity.to_owned(),
            value: value.to_string(),
            bound: bound.to_string(),
            ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub passed: bool,
    pub rows: Vec<SummaryRow>,
    pub artifacts: Value,
}

pub fn run_experiment(config: &ExperimentConfig, experiment: Experiment) -> Result<ExperimentOutcome> {
    let (rows, artifacts) = match experiment {
        Experiment::CesaroSuite => cesaro_suite(config)?,
        Experiment::SchreierSuite => schreier_suite(config)?,
        Experiment::NullitySuite => nullity_suite(config)?,
        Experiment::SeminormSuite => seminorm_suite(config)?,
        Experiment::SandwichSuite => sandwich_suite(config)?,
        Experiment::IsometrySuite => isometry_suite(config)?,
        Experiment::ScalarSuite => scalar_suite(config)?,
        Experiment::ClassifyTable => classify_table(config)?,
    };
    Ok(ExperimentOutcome {
        experiment,
        config: config.clone(),
        passed: rows.iter().all(|r| r.ok),
        rows,
        artifacts,
    })
}

/// 50 affine rules and 50 random prefixes, all strictly increasing.
pub fn cesaro_subsequences(seed: u64) -> Vec<(String, Subsequence)> {
    let mut rng = ExperimentConfig { seed, ..Default::default() }.rng(1);
    let mut out = Vec::with_capacity(100);
    for _ in 0..50 {
        let slope = rng.gen_range(1..=5);
        let offset = rng.gen_range(0..=9);
        let rule = SubsequenceRule::Affine { slope, offset };
        let sub = Subsequence::from_rule(rule).expect("slope ≥ 1");
        out.push((format!("affine({slope}j+{offset})"), sub));
    }
    for i in 0..50 {
        out.push((format!("random#{i}"), Subsequence::random(&mut rng, 300, 4)));
    }
    out
}

fn cesaro_suite(config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let oracle = SequenceOracle::new(config.enumeration);
    let half = BigRational::new(1.into(), 2.into());
    let mut rows = Vec::new();
    let mut certs = Vec::new();
    for (name, sub) in cesaro_subsequences(config.seed) {
        for n in CESARO_NS {
            let case = format!("{name} N={n}");
            match oracle.certify_not_cesaro_null(&sub, n) {
                Ok(cert) => {
                    let ok = cert.mean >= half && cert.verify().is_ok();
                    rows.push(SummaryRow::new(case, "mean", &cert.mean, ">= 1/2", ok));
                    certs.push(serde_json::to_value(&cert).expect("certificates serialise"));
                }
                Err(Error::CertificateViolation(msg)) => {
                    rows.push(SummaryRow::new(case, "mean", msg, ">= 1/2", false));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok((rows, Value::Array(certs)))
}

fn schreier_suite(config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let e = config.enumeration;
    let mut rows = Vec::new();
    let bad = (1..=10_000u64)
        .filter(|&r| {
            let rank = SchreierRank::from(r);
            e.rank_of(&e.unrank(&rank)) != rank
        })
        .count();
    rows.push(SummaryRow::new("ranks 1..=10^4", "round-trip failures", bad, 0, bad == 0));

    let mut rng = config.rng(2);
    let mut big_bad = 0;
    for _ in 0..100 {
        let bits = rng.gen_range(64..=256);
        let digits: Vec<u32> = (0..bits / 32 + 1).map(|_| rng.gen()).collect();
        let value = BigUint::from_slice(&digits) % (BigUint::from(1u8) << bits) + 1u32;
        let rank = SchreierRank::new(value)?;
        if e.rank_of(&e.unrank(&rank)) != rank {
            big_bad += 1;
        }
    }
    rows.push(SummaryRow::new("100 random ranks < 2^256", "round-trip failures", big_bad, 0, big_bad == 0));

    let counts: Vec<BigUint> = (0..=500).map(count_max_at_most).collect();
    let rec_bad = (3..=500).filter(|&n| counts[n] != &counts[n - 1] + &counts[n - 2]).count();
    rows.push(SummaryRow::new("n = 3..=500", "recurrence failures", rec_bad, 0, rec_bad == 0));
    Ok((rows, json!({ "count_500": counts[500].to_string() })))
}

fn nullity_suite(config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let oracle = SequenceOracle::new(config.enumeration);
    let mut failures = Vec::new();
    for i in 1..=10_000u64 {
        let rank = SchreierRank::from(i);
        let row = oracle.row(&rank);
        let threshold = oracle.coordinatewise_null_check(&rank);
        if row.max_element() != threshold || (threshold + 1..=threshold + 1000).any(|k| row.contains(k)) {
            failures.push(i);
        }
    }
    let rows = vec![SummaryRow::new(
        "i = 1..=10^4, k in (t, t+1000]",
        "nonzero entries",
        failures.len(),
        0,
        failures.is_empty(),
    )];
    Ok((rows, json!({ "failures": failures })))
}

/// A metric space with a verified separated pair family and an exponent.
#[derive(Clone, Debug)]
pub struct HolderInstance {
    pub name: String,
    pub space: FiniteMetricSpace,
    pub family: SeparatedPairFamily,
    pub alpha: HolderExponent,
}

/// Bundled spaces × `K ∈ {1, 1/2, 1/4}` × `α ∈ {1, 1/2}`; greedy families.
pub fn holder_instances(seed: u64) -> Result<Vec<HolderInstance>> {
    let mut rng = ExperimentConfig { seed, ..Default::default() }.rng(3);
    let spaces = vec![
        ("line12", samples::line_grid(12, 1.0)?),
        ("line9x0.3", samples::line_grid(9, 0.3)?),
        ("harmonic20", samples::harmonic(20)?),
        ("harmonic12", samples::harmonic(12)?),
        ("dyadic16", samples::dyadic(16)?),
        ("cloud25-l2", samples::random_cloud(&mut rng, 25, 2, PointMetric::Euclidean)?),
        ("cloud20-l1", samples::random_cloud(&mut rng, 20, 3, PointMetric::L1)?),
        ("cloud20-linf", samples::random_cloud(&mut rng, 20, 2, PointMetric::Linf)?),
        ("cycle14", samples::cycle(14)?),
        ("grid4x4", samples::grid_graph(4, 4)?),
        ("star8", samples::shrinking_star(8)?),
    ];
    let mut out = Vec::new();
    for (name, space) in spaces {
        for k in [1.0, 0.5, 0.25] {
            let family = find_pair_family(&space, k, space.len() / 2)?.into_family();
            for a in [1.0, 0.5] {
                out.push(HolderInstance {
                    name: format!("{name} K={k} α={a}"),
                    space: space.clone(),
                    family: family.clone(),
                    alpha: HolderExponent::new(a)?,
                });
            }
        }
    }
    Ok(out)
}

fn seminorm_suite(config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let tol = config.tolerances;
    let mut rows = Vec::new();
    for inst in holder_instances(config.seed)? {
        let report = verify_pair_family(&inst.space, &inst.family);
        rows.push(SummaryRow::new(&inst.name, "family violations", report.violations.len(), 0, report.ok));
        let bumps = HolderBumps::new(&inst.space, &inst.family, inst.alpha);
        let Ok(bumps) = bumps else {
            rows.push(SummaryRow::new(&inst.name, "disjoint supports", "no", "yes", false));
            continue;
        };
        let bound = 1.0 / inst.family.k().powf(inst.alpha.get());
        let (mut worst_rho, mut worst_sup) = (0.0f64, 0.0f64);
        for f in bumps.bumps() {
            worst_rho = worst_rho.max(holder_seminorm(f, inst.alpha));
            worst_sup = worst_sup.max(sup_norm(f));
        }
        rows.push(SummaryRow::new(
            &inst.name,
            "max seminorm(f_n)",
            worst_rho,
            bound,
            worst_rho <= bound + tol.float_slack,
        ));
        rows.push(SummaryRow::new(&inst.name, "max sup(f_n)", worst_sup, 1, worst_sup <= 1.0));
    }
    Ok((rows, Value::Null))
}

/// 20 random vectors (entries in `[-3, 3]`) plus every `e_k` and `±(1,−1,…)`.
pub fn sandwich_vectors<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<FiniteSequence> {
    let mut out: Vec<FiniteSequence> = (0..20).map(|_| FiniteSequence::random(rng, m, 3.0)).collect();
    out.extend(extremal_vectors(m));
    out
}

fn sandwich_suite(config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let mut rng = config.rng(4);
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for inst in holder_instances(config.seed)? {
        let op = HolderBumps::new(&inst.space, &inst.family, inst.alpha)?;
        let vectors = sandwich_vectors(&mut rng, inst.family.len());
        let mut lower = f64::INFINITY;
        let mut upper = 0.0f64;
        let mut failures = Vec::new();
        for a in &vectors {
            let c = op.check_with(a, &config.tolerances)?;
            if !c.holds() {
                failures.push(json!({ "vector": a, "check": c }));
            }
            lower = lower.min(c.ratio);
            upper = upper.max(c.ratio);
        }
        let ok = failures.is_empty();
        rows.push(SummaryRow::new(&inst.name, "min ratio", lower, 1, ok));
        rows.push(SummaryRow::new(&inst.name, "max ratio", upper, op.upper_constant(), ok));
        reports.push(json!({
            "instance": inst.name,
            "pairs": inst.family.len(),
            "lower": lower,
            "upper": upper,
            "bound_upper": op.upper_constant(),
            "samples": vectors.len(),
            "failures": failures,
        }));
    }
    Ok((rows, Value::Array(reports)))
}

fn isometry_suite(config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let mut rng = config.rng(5);
    let m = 20;
    let space = samples::line_grid(4 * m, 1.0)?;
    let centers: Vec<usize> = (0..m).map(|n| 4 * n).collect();
    let radii: Vec<f64> = (0..m).map(|n| 1.5 * 0.9f64.powi(n as i32)).collect();
    let masses: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..1.0)).collect();

    let (mut cb_bad, mut linf_bad) = (0usize, 0usize);
    for _ in 0..1000 {
        let a = FiniteSequence::random_dyadic(&mut rng, m, 4, 10);
        let t = embed_cb(&a, &space, &centers, &radii)?;
        if sup_norm(&t) != a.sup_value() {
            cb_bad += 1;
        }
        let step = embed_linf(&a, &masses)?;
        if step.ess_sup() != a.sup_value() {
            linf_bad += 1;
        }
    }
    let rows = vec![
        SummaryRow::new("C_b, 1000 dyadic vectors", "inexact norms", cb_bad, 0, cb_bad == 0),
        SummaryRow::new("L_inf, 1000 dyadic vectors", "inexact norms", linf_bad, 0, linf_bad == 0),
    ];
    Ok((rows, Value::Null))
}

fn scalar_suite(config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let mut rng = config.rng(6);
    let mut failures = Vec::new();
    for _ in 0..100_000 {
        let a = 10f64.powf(rng.gen_range(-6.0..6.0)) * f64::from(rng.gen_bool(0.95) as u8);
        let b = 10f64.powf(rng.gen_range(-6.0..6.0));
        let alpha = HolderExponent::new(1.0 - rng.gen::<f64>())?;
        if !power_diff_check(a, b, alpha) {
            failures.push(json!([a, b, alpha.get()]));
        }
    }
    let rows = vec![SummaryRow::new(
        "10^5 random (a, b, α)",
        "failures",
        failures.len(),
        0,
        failures.is_empty(),
    )];
    Ok((rows, json!({ "failures": failures })))
}

/// The twelve reference cases and the verdict each must receive.
pub fn verdict_table() -> Result<Vec<(String, Verdict, bool)>> {
    let ord = |s: &str| s.parse::<Ordinal>();
    let partition = FiniteMeasurePartition::new;
    Ok(vec![
        ("C^α, |M| = 10".into(), classify_calpha(SpaceSize::Finite(10)), true),
        ("C^α, |M| = 1".into(), classify_calpha(SpaceSize::Finite(1)), true),
        ("C^α, M infinite".into(), classify_calpha(SpaceSize::Infinite), false),
        ("C_b, M finite".into(), classify_cb(&CbAssumption::Finite(7)), true),
        ("C_b, M non-compact".into(), classify_cb(&CbAssumption::Noncompact), false),
        ("C(K), K = [1, 5]".into(), classify_c_of_ordinal(&ord("5")?), true),
        ("C(K), K = [1, ω^2 + 1]".into(), classify_c_of_ordinal(&ord("w^2 + 1")?), true),
        ("C(K), K = [1, ω^2·3 + ω·2 + 5]".into(), classify_c_of_ordinal(&ord("w^2*3 + w*2 + 5")?), true),
        ("C(K), K = [1, ω^ω]".into(), classify_c_of_ordinal(&ord("w^w")?), false),
        ("L_inf, 3 atoms".into(), classify_linf(&partition(vec![0.25, 0.25, 0.5], true)?), true),
        ("L_inf, 1 atom".into(), classify_linf(&partition(vec![1.0], true)?), true),
        ("L_inf, infinite disjoint family".into(), classify_linf(&partition(vec![0.5, 0.25, 0.125], false)?), false),
    ])
}

fn classify_table(_config: &ExperimentConfig) -> Result<(Vec<SummaryRow>, Value)> {
    let table = verdict_table()?;
    let rows = table
        .iter()
        .map(|(case, v, expected)| SummaryRow::new(case, "wbs", v.wbs, expected, v.wbs == *expected))
        .collect();
    let verdicts = table.into_iter().map(|(case, v, _)| json!({ "case": case, "verdict": v })).collect();
    Ok((rows, Value::Array(verdicts)))
}
