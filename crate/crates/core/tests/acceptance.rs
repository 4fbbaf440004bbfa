//! Acceptance criteria 1–8. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wbs_core::classify::{
    cb_rank, classify_c_of_ordinal, classify_calpha, classify_cb, classify_linf, derived_set, CbAssumption,
    CbRank, FiniteMeasurePartition, Ordinal, SpaceFamily, SpaceSize, Term, Verdict,
};
use wbs_core::embed::{embed_cb, embed_linf, FiniteSequence, HolderBumps};
use wbs_core::experiment::{cesaro_subsequences, holder_instances, sandwich_vectors, CESARO_NS};
use wbs_core::holder::{bump_f, holder_seminorm, power_diff_check, sup_norm, HolderExponent};
use wbs_core::samples;
use wbs_core::schreier::{count_max_at_most, rank_of, unrank, SchreierRank, SchreierSet};
use wbs_core::weaknull::SequenceOracle;

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn first<T: std::fmt::Debug>(failures: &[T]) -> String {
    failures.first().map_or_else(String::new, |f| format!("; first: {f:?}"))
}

fn cesaro_certificates() -> Outcome {
    let start = Instant::now();
    let oracle = SequenceOracle::default();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let subs = cesaro_subsequences(SEED);
    let mut violations = Vec::new();
    let mut count = 0;
    for (name, sub) in &subs {
        for n in CESARO_NS {
            count += 1;
            match oracle.certify_not_cesaro_null(sub, n) {
                Ok(cert) => {
                    // Recount hits against the certificate's own set.
                    let hits = cert.prefix.iter().filter(|k| cert.witness_set.elements().contains(k)).count();
                    let mean = BigRational::new(BigInt::from(hits), BigInt::from(2 * n));
                    if cert.mean < half || mean != cert.mean || cert.verify().is_err() || unrank(&cert.witness_coordinate) != cert.witness_set {
                        violations.push(format!("{name} N={n}: mean {}", cert.mean));
                    }
                }
                Err(e) => violations.push(format!("{name} N={n}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = subs.len() == 100 && violations.is_empty() && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!("{count} certificates, {} violations, {:.2}s{}", violations.len(), elapsed.as_secs_f64(), first(&violations)),
    )
}

fn schreier_bijection() -> Outcome {
    let mut failures = Vec::new();
    for r in 1..=10_000u64 {
        let rank = SchreierRank::from(r);
        if rank_of(&unrank(&rank)) != rank {
            failures.push(format!("rank {r}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..100 {
        let digits: Vec<u32> = (0..rng.gen_range(2..=8)).map(|_| rng.gen()).collect();
        let rank = SchreierRank::new(BigUint::from_slice(&digits) + 1u32).unwrap();
        if rank_of(&unrank(&rank)) != rank {
            failures.push(format!("rank {rank}"));
        }
    }
    let brute = common::brute_schreier_sets(15);
    for (i, elements) in brute.iter().enumerate() {
        let set = SchreierSet::new(elements.iter().copied()).unwrap();
        if unrank(&rank_of(&set)) != set || rank_of(&set) != SchreierRank::from(i as u64 + 1) {
            failures.push(format!("set {set}"));
        }
    }
    for n in 0..=15u64 {
        let expected = brute.iter().filter(|s| *s.last().unwrap() <= n).count();
        if count_max_at_most(n) != BigUint::from(expected) {
            failures.push(format!("count({n})"));
        }
    }
    let counts: Vec<BigUint> = (0..=500).map(count_max_at_most).collect();
    for n in 3..=500 {
        if counts[n] != &counts[n - 1] + &counts[n - 2] {
            failures.push(format!("recurrence at {n}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("10^4 small + 100 big ranks, {} brute-force sets, recurrence to 500: {} failures{}", brute.len(), failures.len(), first(&failures)),
    )
}

fn seminorm_bound() -> Outcome {
    let instances = holder_instances(SEED).unwrap();
    let mut failures = Vec::new();
    let mut bumps = 0;
    for inst in &instances {
        let (k, a) = (inst.family.k(), inst.alpha.get());
        if !common::brute_pair_family_ok(&inst.space.rows(), inst.family.pairs(), k) {
            failures.push(format!("{}: invalid family", inst.name));
        }
        for &pair in inst.family.pairs() {
            bumps += 1;
            let f = bump_f(&inst.space, pair, k, inst.alpha).unwrap();
            let rho = holder_seminorm(&f, inst.alpha);
            let brute = common::brute_seminorm(&inst.space.rows(), f.values(), a);
            if rho > 1.0 / k.powf(a) + 1e-12 || sup_norm(&f) > 1.0 || (rho - brute).abs() > 1e-12 * brute.max(1.0) {
                failures.push(format!("{} pair {pair:?}: ρ = {rho}", inst.name));
            }
        }
    }
    outcome(
        instances.len() >= 50 && failures.is_empty(),
        format!("{} instances, {bumps} bumps, {} failures{}", instances.len(), failures.len(), first(&failures)),
    )
}

fn sandwich() -> Outcome {
    let instances = holder_instances(SEED).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut lower_failures, mut upper_failures, mut checked) = (Vec::new(), Vec::new(), 0);
    let (mut min_ratio, mut max_excess) = (f64::INFINITY, 0.0f64);
    for inst in &instances {
        let op = HolderBumps::new(&inst.space, &inst.family, inst.alpha).unwrap();
        for a in sandwich_vectors(&mut rng, inst.family.len()) {
            checked += 1;
            let c = op.check(&a).unwrap();
            if !c.lower_ok {
                lower_failures.push(format!("{}: ‖a‖ = {}, ‖Ta‖ = {}", inst.name, c.a_norm, c.image_norm));
            }
            if !c.upper_ok {
                upper_failures.push(format!("{}: ratio {} > {}", inst.name, c.ratio, c.bound_upper));
            }
            min_ratio = min_ratio.min(c.ratio);
            max_excess = max_excess.max(c.ratio / c.bound_upper);
        }
    }
    for f in &lower_failures {
        println!("    lower-bound failure: {f}");
    }
    outcome(
        lower_failures.is_empty() && upper_failures.is_empty(),
        format!(
            "{checked} vectors on {} instances; min ‖Ta‖/‖a‖ = {min_ratio:.6}, max ratio/bound = {max_excess:.12}; {} lower, {} upper failures",
            instances.len(),
            lower_failures.len(),
            upper_failures.len()
        ),
    )
}

fn isometries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = 16;
    let space = samples::harmonic(4 * m).unwrap();
    // Point 0 is the limit 0; point k is 1/k. Centers 1/(4n+1) with radii well
    // inside the gap to their neighbours.
    let centers: Vec<usize> = (0..m).map(|n| 4 * n + 1).collect();
    let radii: Vec<f64> = centers.iter().map(|&c| 0.5 * (space.d(c, 0) - space.d(c + 1, 0))).collect();
    let masses: Vec<f64> = (0..m).map(|_| rng.gen_range(1e-3..1.0)).collect();
    let (mut cb_bad, mut linf_bad) = (0, 0);
    for _ in 0..1000 {
        let a = FiniteSequence::random_dyadic(&mut rng, m, 16, 20);
        let norm = a.sup_value();
        if sup_norm(&embed_cb(&a, &space, &centers, &radii).unwrap()).to_bits() != norm.to_bits() {
            cb_bad += 1;
        }
        if embed_linf(&a, &masses).unwrap().ess_sup().to_bits() != norm.to_bits() {
            linf_bad += 1;
        }
    }
    outcome(cb_bad == 0 && linf_bad == 0, format!("1000 + 1000 dyadic vectors: {cb_bad} C_b and {linf_bad} L∞ mismatches"))
}

fn scalar_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for i in 0..100_000 {
        let (a, b) = match i % 3 {
            0 => (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)),
            1 => (10f64.powf(rng.gen_range(-8.0..8.0)), 10f64.powf(rng.gen_range(-8.0..8.0))),
            _ => {
                let a: f64 = rng.gen_range(0.0..1e3);
                (a, a + rng.gen_range(0.0..1e-6))
            }
        };
        let alpha = HolderExponent::new(1.0 - rng.gen::<f64>()).unwrap();
        if !power_diff_check(a, b, alpha) {
            failures.push((a, b, alpha.get()));
        }
    }
    outcome(failures.is_empty(), format!("10^5 triples, {} failures{}", failures.len(), first(&failures)))
}

fn cantor_bendixson() -> Outcome {
    let mut failures = Vec::new();
    let mut ordinals = 0;
    for c2 in 0..=3u64 {
        for c1 in 0..=3u64 {
            for c0 in 0..=3u64 {
                ordinals += 1;
                let terms: Vec<(u32, u64)> = [(2, c2), (1, c1), (0, c0)].into_iter().filter(|t| t.1 > 0).collect();
                let o = Ordinal::from_terms(
                    terms.iter().map(|&(e, c)| Term { exponent: Ordinal::natural(e as u64), coefficient: c }).collect(),
                )
                .unwrap();
                let d: Vec<(u32, u64)> = derived_set(&o)
                    .terms()
                    .iter()
                    .map(|t| (t.exponent.as_natural().unwrap() as u32, t.coefficient))
                    .collect();
                for m in 2..=5 {
                    if common::detected_limit_points(&terms, m) != common::ordinal_points(&d, m).len() {
                        failures.push(format!("derived set of {o}"));
                    }
                }
            }
        }
    }
    let example: Ordinal = "w^2*3 + w*2 + 5".parse().unwrap();
    if cb_rank(&example) != CbRank::Finite(3) {
        failures.push(format!("cb_rank({example})"));
    }

    let ord = |s: &str| s.parse::<Ordinal>().unwrap();
    let atoms = |m: Vec<f64>, t: bool| FiniteMeasurePartition::new(m, t).unwrap();
    let table: Vec<(&str, Verdict, SpaceFamily, bool)> = vec![
        ("C^α, 10 points", classify_calpha(SpaceSize::Finite(10)), SpaceFamily::Calpha, true),
        ("C^α, 1 point", classify_calpha(SpaceSize::Finite(1)), SpaceFamily::Calpha, true),
        ("C^α, infinite", classify_calpha(SpaceSize::Infinite), SpaceFamily::Calpha, false),
        ("C_b, finite", classify_cb(&CbAssumption::Finite(5)), SpaceFamily::Cb, true),
        ("C_b, [1, ω^2+1]", classify_cb(&CbAssumption::Ordinal(ord("w^2 + 1"))), SpaceFamily::Cb, true),
        ("C_b, [1, ω^ω]", classify_cb(&CbAssumption::Ordinal(ord("w^w"))), SpaceFamily::Cb, false),
        ("C_b, non-compact", classify_cb(&CbAssumption::Noncompact), SpaceFamily::Cb, false),
        ("C, [1, ω^2·3+ω·2+5]", classify_c_of_ordinal(&example), SpaceFamily::COfOrdinal, true),
        ("C, [1, ω^ω·2]", classify_c_of_ordinal(&ord("w^w*2")), SpaceFamily::COfOrdinal, false),
        ("L∞, 3 atoms", classify_linf(&atoms(vec![0.5, 0.25, 0.25], true)), SpaceFamily::Linf, true),
        ("L∞, 1 atom", classify_linf(&atoms(vec![2.0], true)), SpaceFamily::Linf, true),
        ("L∞, non-terminal", classify_linf(&atoms(vec![0.5, 0.25, 0.125], false)), SpaceFamily::Linf, false),
    ];
    for (case, verdict, family, wbs) in &table {
        if verdict.wbs != *wbs || verdict.space_family != *family || verdict.reason.theorem.is_empty() {
            failures.push(format!("verdict for {case}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{ordinals} ordinals × 4 truncations, cb_rank example, {} verdicts: {} failures{}", table.len(), failures.len(), first(&failures)),
    )
}

fn coordinatewise_nullity() -> Outcome {
    let oracle = SequenceOracle::default();
    let mut failures = Vec::new();
    for i in 1..=10_000u64 {
        let rank = SchreierRank::from(i);
        let threshold = oracle.coordinatewise_null_check(&rank);
        let row = oracle.row(&rank);
        if (threshold + 1..=threshold + 1000).any(|k| row.contains(k)) || !row.contains(threshold) {
            failures.push(i);
        }
    }
    // Spot-check the entry oracle itself on a slice.
    for i in (1..=10_000u64).step_by(97) {
        let rank = SchreierRank::from(i);
        let t = oracle.coordinatewise_null_check(&rank);
        if (t + 1..=t + 1000).any(|k| oracle.entry(k, &rank) != 0) {
            failures.push(i);
        }
    }
    outcome(failures.is_empty(), format!("i ≤ 10^4, k ∈ (t, t+1000]: {} failures{}", failures.len(), first(&failures)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 cesaro certificates", cesaro_certificates),
        ("2 schreier bijection", schreier_bijection),
        ("3 seminorm bound", seminorm_bound),
        ("4 sandwich", sandwich),
        ("5 isometries", isometries),
        ("6 scalar inequality", scalar_inequality),
        ("7 cantor-bendixson", cantor_bendixson),
        ("8 coordinatewise nullity", coordinatewise_nullity),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "{} criterion {name}: {} ({:.2}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
