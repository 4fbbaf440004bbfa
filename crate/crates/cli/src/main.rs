mod io;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wbs_core::classify::{
    cb_rank, classify_c_of_ordinal, classify_calpha, classify_cb, classify_linf, derived_set, CbAssumption,
    FiniteMeasurePartition, Ordinal, SpaceSize,
};
use wbs_core::embed::{distortion_report, embed_cb, embed_linf, HolderBumps};
use wbs_core::experiment::{run_experiment, Experiment, ExperimentConfig, ExperimentOutcome};
use wbs_core::holder::{bump_f, holder_norm, holder_seminorm, sup_norm, FieldFile, HolderExponent, ScalarField};
use wbs_core::metric::{find_pair_family, validate_metric, verify_pair_family, PairFamilyFile, PairSearch, SeparatedPairFamily, SpaceFile};
use wbs_core::schreier::{count_max_at_most, Enumeration, SchreierRank, SchreierSet};
use wbs_core::weaknull::{SequenceOracle, WeakConvergenceChallenge};
use wbs_core::Tolerances;

#[derive(Parser)]
#[command(name = "wbs", version, about = "Schreier sets, Hölder bumps and weak Banach–Saks certificates")]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for triangle-inequality checks.
    #[arg(long, global = true, default_value_t = wbs_core::tolerance::METRIC_REL)]
    tolerance: f64,
    /// Enumeration of the maximal Schreier sets (`canonical` or `alt`).
    #[arg(long, global = true, default_value = "canonical")]
    enumeration: Enumeration,
    /// Output file (a directory for `experiment run`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, unrank and count maximal Schreier sets.
    #[command(subcommand)]
    Schreier(SchreierCmd),
    /// Cesàro certificates and weak-nullity witnesses.
    #[command(subcommand)]
    Cesaro(CesaroCmd),
    /// Metric-space validation.
    #[command(subcommand)]
    Metric(MetricCmd),
    /// Separated pair families.
    #[command(subcommand)]
    Pairs(PairsCmd),
    /// Hölder norms and bump functions.
    #[command(subcommand)]
    Holder(HolderCmd),
    /// Embeddings of finite sequences.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Weak Banach–Saks verdicts.
    #[command(subcommand)]
    Classify(ClassifyCmd),
    /// Seeded experiment suites.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum SchreierCmd {
    /// The set at a rank.
    Unrank { rank: SchreierRank },
    /// The rank of a set, given as comma-separated elements.
    Rank { elements: String },
    /// Number of sets with maximum at most `n`.
    Count { n: u64 },
}

#[derive(Subcommand)]
enum CesaroCmd {
    /// Certify that the Cesàro mean of `u_{k_1} … u_{k_{2N}}` has norm ≥ 1/2.
    Certify {
        /// `affine:S,O`, `geometric:F,R`, `random:LEN,STEP`, or a JSON file.
        #[arg(long)]
        subsequence: String,
        #[arg(long = "N")]
        n: u64,
    },
    /// Answer a weak-convergence challenge read from a JSON file.
    Witness { challenge: PathBuf },
}

#[derive(Subcommand)]
enum MetricCmd {
    /// Report every violated metric axiom.
    Validate { space: PathBuf },
}

#[derive(Subcommand)]
enum PairsCmd {
    /// Greedy search for a separated pair family.
    Find {
        space: PathBuf,
        #[arg(long = "K")]
        k: f64,
        #[arg(long)]
        count: usize,
    },
    /// Check conditions (i)–(iii) for a family file.
    Verify { space: PathBuf, family: PathBuf },
}

#[derive(Subcommand)]
enum HolderCmd {
    /// Sup norm, Hölder seminorm and Hölder norm of a field.
    Seminorm {
        space: PathBuf,
        field: PathBuf,
        #[arg(long)]
        alpha: HolderExponent,
    },
    /// The bump `f` for one pair, given by labels.
    Bump {
        space: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long = "K")]
        k: f64,
        #[arg(long)]
        alpha: HolderExponent,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// `T(a) = Σ a(n) f_n` in `C^α(M)`, with a distortion report.
    Holder {
        space: PathBuf,
        family: PathBuf,
        #[arg(long)]
        alpha: HolderExponent,
        /// `random:SEED` or a JSON array file.
        #[arg(long)]
        vector: String,
        /// Where to write the distortion report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// `T(a) = Σ a(n) φ_n` in `C_b(M)`.
    Cb {
        space: PathBuf,
        /// Comma-separated center labels.
        #[arg(long)]
        centers: String,
        /// Comma-separated radii.
        #[arg(long)]
        radii: String,
        #[arg(long)]
        vector: String,
    },
    /// `T(a) = Σ a(n) χ_{A_n}` in `L∞`.
    Linf {
        /// Comma-separated cell masses.
        #[arg(long)]
        masses: String,
        #[arg(long)]
        vector: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Assume {
    Finite,
    Infinite,
    Noncompact,
}

#[derive(Args)]
struct SizeArgs {
    /// What is assumed about the whole space.
    #[arg(long)]
    assume: Option<Assume>,
    /// A finite sample of the space (its size is used for finite spaces).
    #[arg(long)]
    space: Option<PathBuf>,
    /// Number of points, instead of a space file.
    #[arg(long)]
    points: Option<u64>,
}

#[derive(Subcommand)]
enum ClassifyCmd {
    /// `C^α(M)`.
    Calpha(SizeArgs),
    /// `C_b(M)`; pass `--ordinal` for a compact space homeomorphic to `[1, o]`.
    Cb {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        ordinal: Option<Ordinal>,
    },
    /// `L∞(μ)` over a partition into cells of positive mass.
    Linf {
        #[arg(long)]
        masses: String,
        /// The listed cells are a finite piece of an infinite disjoint family.
        #[arg(long)]
        non_terminal: bool,
    },
    /// `C([1, o])`, with derived set and Cantor–Bendixson rank.
    Ordinal { ordinal: Ordinal },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Run one suite (or `all`), writing `<name>.json` and `<name>.csv`.
    Run {
        name: String,
        /// JSON config overriding the global flags.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// List suite names.
    List,
}

/// Whether the emitted report records a failed check.
enum Status {
    Ok,
    Violated,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violated) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<io::UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Violated
    }
}

fn run(cli: &Cli) -> Result<Status> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Schreier(cmd) => schreier(cmd, cli.enumeration, out),
        Command::Cesaro(cmd) => cesaro(cmd, cli, out),
        Command::Metric(MetricCmd::Validate { space }) => {
            let (labels, rows) = io::read_json::<SpaceFile>(space)?.into_matrix()?;
            let report = validate_metric(&labels, &rows, cli.tolerance)?;
            io::emit(&report, out)?;
            Ok(status(report.is_valid()))
        }
        Command::Pairs(cmd) => pairs(cmd, cli.tolerance, out),
        Command::Holder(cmd) => holder(cmd, cli.tolerance, out),
        Command::Embed(cmd) => embed(cmd, cli.tolerance, out),
        Command::Classify(cmd) => classify(cmd, cli.tolerance, out),
        Command::Experiment(cmd) => experiment(cmd, cli),
    }
}

fn schreier(cmd: &SchreierCmd, e: Enumeration, out: Option<&Path>) -> Result<Status> {
    let value = match cmd {
        SchreierCmd::Unrank { rank } => json!({ "rank": rank, "set": e.unrank(rank), "enumeration": e }),
        SchreierCmd::Rank { elements } => {
            let set = SchreierSet::new(io::parse_list::<u64>(elements)?)?;
            json!({ "set": set, "rank": e.rank_of(&set), "enumeration": e })
        }
        SchreierCmd::Count { n } => json!({ "n": n, "count": count_max_at_most(*n).to_string() }),
    };
    io::emit(&value, out)?;
    Ok(Status::Ok)
}

fn cesaro(cmd: &CesaroCmd, cli: &Cli, out: Option<&Path>) -> Result<Status> {
    let oracle = SequenceOracle::new(cli.enumeration);
    match cmd {
        CesaroCmd::Certify { subsequence, n } => {
            let sub = io::parse_subsequence(subsequence, cli.seed)?;
            let cert = oracle.certify_not_cesaro_null(&sub, *n)?;
            io::emit(&cert, out)?;
        }
        CesaroCmd::Witness { challenge } => {
            let c: WeakConvergenceChallenge = io::read_json(challenge)?;
            let c = WeakConvergenceChallenge::new(c.alpha, c.k_seq, c.i_seq, c.j_seq)?;
            io::emit(&oracle.find_weak_witness(&c)?, out)?;
        }
    }
    Ok(Status::Ok)
}

fn pairs(cmd: &PairsCmd, tolerance: f64, out: Option<&Path>) -> Result<Status> {
    match cmd {
        PairsCmd::Find { space, k, count } => {
            let space = io::load_space(space, tolerance)?;
            let search = find_pair_family(&space, *k, *count)?;
            io::emit(&search.family().to_file(&space), out)?;
            if let PairSearch::Shortfall { best, target } = &search {
                eprintln!("found {} pairs, fewer than the requested {target}", best.len());
                return Ok(Status::Violated);
            }
            Ok(Status::Ok)
        }
        PairsCmd::Verify { space, family } => {
            let space = io::load_space(space, tolerance)?;
            let family = SeparatedPairFamily::from_file(&space, &io::read_json::<PairFamilyFile>(family)?)?;
            let report = verify_pair_family(&space, &family);
            io::emit(&report, out)?;
            Ok(status(report.ok))
        }
    }
}

fn holder(cmd: &HolderCmd, tolerance: f64, out: Option<&Path>) -> Result<Status> {
    match cmd {
        HolderCmd::Seminorm { space, field, alpha } => {
            let space = io::load_space(space, tolerance)?;
            let file: FieldFile = io::read_json(field)?;
            let f = ScalarField::new(&space, file.values)?;
            io::emit(
                &json!({
                    "alpha": alpha,
                    "sup": sup_norm(&f),
                    "seminorm": holder_seminorm(&f, *alpha),
                    "norm": holder_norm(&f, *alpha),
                }),
                out,
            )?;
        }
        HolderCmd::Bump { space: path, x, y, k, alpha } => {
            let space = io::load_space(path, tolerance)?;
            let f = bump_f(&space, (space.index_of(x)?, space.index_of(y)?), *k, *alpha)?;
            let mut file = serde_json::to_value(f.to_file(Some(path.display().to_string())))?;
            file["seminorm"] = json!(holder_seminorm(&f, *alpha));
            file["bound"] = json!(1.0 / k.powf(alpha.get()));
            io::emit(&file, out)?;
        }
    }
    Ok(Status::Ok)
}

fn embed(cmd: &EmbedCmd, tolerance: f64, out: Option<&Path>) -> Result<Status> {
    match cmd {
        EmbedCmd::Holder { space: path, family, alpha, vector, report } => {
            let space = io::load_space(path, tolerance)?;
            let family = SeparatedPairFamily::from_file(&space, &io::read_json::<PairFamilyFile>(family)?)?;
            let a = io::parse_vector(vector, family.len())?;
            let image = HolderBumps::new(&space, &family, *alpha)?.apply(&a)?;
            io::emit(&image.to_file(Some(path.display().to_string())), out)?;
            let r = distortion_report(&space, &family, *alpha, std::slice::from_ref(&a))?;
            if let Some(report) = report {
                io::emit(&r, Some(report))?;
            }
            Ok(status(r.holds()))
        }
        EmbedCmd::Cb { space: path, centers, radii, vector } => {
            let space = io::load_space(path, tolerance)?;
            let centers = io::parse_list::<String>(centers)?
                .iter()
                .map(|l| space.index_of(l))
                .collect::<wbs_core::Result<Vec<_>>>()?;
            let radii = io::parse_list::<f64>(radii)?;
            let a = io::parse_vector(vector, centers.len())?;
            let f = embed_cb(&a, &space, &centers, &radii)?;
            let exact = sup_norm(&f) == a.sup_value();
            let mut file = serde_json::to_value(f.to_file(Some(path.display().to_string())))?;
            file["a_norm"] = json!(a.sup_value());
            file["image_norm"] = json!(sup_norm(&f));
            io::emit(&file, out)?;
            Ok(status(exact))
        }
        EmbedCmd::Linf { masses, vector } => {
            let masses = io::parse_list::<f64>(masses)?;
            let a = io::parse_vector(vector, masses.len())?;
            let f = embed_linf(&a, &masses)?;
            let exact = f.ess_sup() == a.sup_value();
            io::emit(&json!({ "step_function": f, "a_norm": a.sup_value(), "image_norm": f.ess_sup() }), out)?;
            Ok(status(exact))
        }
    }
}

fn point_count(size: &SizeArgs, tolerance: f64) -> Result<u64> {
    match (&size.space, size.points) {
        (Some(path), _) => Ok(io::load_space(path, tolerance)?.len() as u64),
        (None, Some(n)) => Ok(n),
        (None, None) => Err(io::usage("--assume finite needs --space or --points")),
    }
}

fn classify(cmd: &ClassifyCmd, tolerance: f64, out: Option<&Path>) -> Result<Status> {
    let verdict = match cmd {
        ClassifyCmd::Calpha(size) => match size.assume {
            Some(Assume::Finite) => classify_calpha(SpaceSize::Finite(point_count(size, tolerance)?)),
            Some(Assume::Infinite | Assume::Noncompact) => {
                let mut v = classify_calpha(SpaceSize::Infinite);
                v.reason.assumption = Some("M is infinite".into());
                v
            }
            None => return Err(io::usage("infiniteness cannot be read from a finite file: pass --assume finite|infinite|noncompact")),
        },
        ClassifyCmd::Cb { size, ordinal } => match (ordinal, size.assume) {
            (Some(o), None | Some(Assume::Infinite)) => classify_cb(&CbAssumption::Ordinal(o.clone())),
            (None, Some(Assume::Finite)) => classify_cb(&CbAssumption::Finite(point_count(size, tolerance)?)),
            (None, Some(Assume::Noncompact)) => classify_cb(&CbAssumption::Noncompact),
            (None, Some(Assume::Infinite)) => return Err(io::usage("an infinite compact space needs --ordinal")),
            (Some(_), Some(_)) => return Err(io::usage("--ordinal describes a compact infinite space; drop --assume or use infinite")),
            (None, None) => return Err(io::usage("pass --assume finite|noncompact, or --ordinal for a compact space")),
        },
        ClassifyCmd::Linf { masses, non_terminal } => {
            classify_linf(&FiniteMeasurePartition::new(io::parse_list(masses)?, !non_terminal)?)
        }
        ClassifyCmd::Ordinal { ordinal } => {
            let value = json!({
                "ordinal": ordinal,
                "derived_set": derived_set(ordinal),
                "cb_rank": cb_rank(ordinal),
                "verdict": classify_c_of_ordinal(ordinal),
            });
            io::emit(&value, out)?;
            return Ok(Status::Ok);
        }
    };
    io::emit(&verdict, out)?;
    Ok(Status::Ok)
}

fn experiment(cmd: &ExperimentCmd, cli: &Cli) -> Result<Status> {
    let (name, config_path) = match cmd {
        ExperimentCmd::List => {
            for e in Experiment::ALL {
                println!("{e}");
            }
            return Ok(Status::Ok);
        }
        ExperimentCmd::Run { name, config } => (name, config),
    };
    let config = match config_path {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            if text.trim().is_empty() {
                return Err(io::usage(format!("config file {} is empty", path.display())));
            }
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => ExperimentConfig {
            seed: cli.seed,
            tolerances: Tolerances { metric_rel: cli.tolerance, ..Tolerances::default() },
            enumeration: cli.enumeration,
        },
    };
    let selected: Vec<Experiment> = if name == "all" {
        Experiment::ALL.to_vec()
    } else {
        vec![name.parse().map_err(|e: wbs_core::Error| io::usage(e.to_string()))?]
    };
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut all_passed = true;
    for e in selected {
        let outcome = run_experiment(&config, e)?;
        write_outcome(&outcome, &dir)?;
        let failed = outcome.rows.iter().filter(|r| !r.ok).count();
        println!(
            "{} {e}: {} rows, {failed} failed -> {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.rows.len(),
            dir.join(format!("{e}.json")).display()
        );
        for row in outcome.rows.iter().filter(|r| !r.ok) {
            eprintln!("  violation: {} {} = {} (bound {})", row.case, row.quantity, row.value, row.bound);
        }
        all_passed &= outcome.passed;
    }
    Ok(status(all_passed))
}

fn write_outcome(outcome: &ExperimentOutcome, dir: &Path) -> Result<()> {
    let name = outcome.experiment.name();
    io::emit(outcome, Some(&dir.join(format!("{name}.json"))))?;
    let csv_path = dir.join(format!("{name}.csv"));
    let mut w = csv::Writer::from_path(&csv_path).with_context(|| format!("writing {}", csv_path.display()))?;
    w.write_record(["experiment", "seed", "case", "quantity", "value", "bound", "ok"])?;
    let seed = outcome.config.seed.to_string();
    for row in &outcome.rows {
        w.write_record([name, &seed, &row.case, &row.quantity, &row.value, &row.bound, &row.ok.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
