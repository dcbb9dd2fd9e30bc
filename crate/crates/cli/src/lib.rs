//! Command implementations behind the `llp` binary.
//!
//! Every randomized command takes a mandatory `--seed`; with identical flags
//! and inputs all outputs are byte-identical. Reports are `key=value` lines,
//! rationals are printed as `num/den`.

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use llp_bool::dictator_test::{self, DictParams};
use llp_bool::hypothesis_search::{self, SearchBudget};
use llp_bool::labelcover::{self, LabelCoverInstance};
use llp_bool::llp_core::{self, Hypothesis, LlpInstance, ParityHypothesis};
use llp_bool::parity_solver;
use llp_bool::reductions::{self, ScaleSet};
use llp_bool::{seeding, BitVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {reason}")]
    Input { path: PathBuf, reason: String },
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Output(#[from] std::io::Error),
}

fn usage(reason: impl Display) -> CliError {
    CliError::Usage(reason.to_string())
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A check failed; the string is a one-line reason.
    Fail(String),
}

#[derive(Debug, Parser)]
#[command(name = "llp", version, about = "Label-proportion learning experiments over Boolean hypotheses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate planted instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Sample an LLP instance from a Label-Cover instance.
    Reduce(ReduceArgs),
    /// Run a solver on an LLP instance.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Evaluate a hypothesis file on an LLP instance.
    Eval(EvalArgs),
    /// Run a verification experiment.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// LLP instance consistent with a hidden affine parity.
    PlantedParity(GenParityArgs),
    /// Label-Cover instance with a planted satisfying labeling.
    Labelcover(GenLabelCoverArgs),
}

#[derive(Debug, Args)]
pub struct GenParityArgs {
    #[arg(long)]
    pub dim: usize,
    /// Largest bag size; sizes are uniform in [1, q].
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub bags: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write the hidden parity.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LabelCoverKind {
    Bipartite,
    Smooth,
}

#[derive(Debug, Args)]
pub struct GenLabelCoverArgs {
    #[arg(long, value_enum)]
    pub kind: LabelCoverKind,
    /// Right vertices (bipartite) or vertices (smooth).
    #[arg(long)]
    pub v: usize,
    /// Left vertices of a bipartite instance; defaults to `--v`.
    #[arg(long)]
    pub u: Option<usize>,
    /// Left degree (bipartite) or degree (smooth).
    #[arg(long)]
    pub deg: usize,
    #[arg(long = "N")]
    pub n_labels: usize,
    #[arg(long = "M")]
    pub m_labels: usize,
    /// Copies of every right vertex (bipartite only).
    #[arg(long, default_value_t = 1)]
    pub replicate: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Planted labeling; defaults to `<out>.labels`.
    #[arg(long)]
    pub labeling: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionKind {
    OrCnf,
    OrDnf,
    Parity,
}

#[derive(Debug, Args)]
pub struct ReductionInput {
    #[arg(value_enum)]
    pub kind: ReductionKind,
    #[arg(long)]
    pub lc: PathBuf,
    #[arg(long)]
    pub labeling: PathBuf,
    /// Scale exponent (or-cnf) or samples per side (or-dnf).
    #[arg(long = "T")]
    pub t: Option<u64>,
    /// Bag size (parity).
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub bags: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: ReductionInput,
    #[arg(long)]
    pub out: PathBuf,
    /// Canonical YES-case hypothesis; defaults to `<out>.hyp`.
    #[arg(long)]
    pub hypothesis: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    /// Random member of the parity constraint solution space.
    Parity(SolveParityArgs),
    /// Exhaustive search over a small hypothesis family.
    Brute(SolveBruteArgs),
}

#[derive(Debug, Args)]
pub struct SolveParityArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    /// Drop contradicting constraints instead of failing.
    #[arg(long)]
    pub best_effort: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long = "hypothesis-out")]
    pub hypothesis_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchClass {
    Or,
    Cnf,
    Dnf,
    Parity,
}

#[derive(Debug, Args)]
pub struct SolveBruteArgs {
    #[arg(long, value_enum)]
    pub class: SearchClass,
    /// Clauses (cnf) or term width (dnf).
    #[arg(long = "l", default_value_t = 1)]
    pub l: usize,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Terms of a DNF.
    #[arg(long, default_value_t = 2)]
    pub max_terms: usize,
    /// Width of a CNF clause or OR.
    #[arg(long, default_value_t = 16)]
    pub max_width: usize,
    #[arg(long, default_value_t = 16)]
    pub max_dim: usize,
    #[arg(long, default_value_t = 1 << 24)]
    pub max_enumeration: u128,
    #[arg(long)]
    pub negations: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long = "hypothesis-out")]
    pub hypothesis_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub hypothesis: PathBuf,
    /// Fail unless every bag is satisfied.
    #[arg(long)]
    pub require_all: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Dictatorship-test completeness, soundness and XOR-bias checks.
    Dict(VerifyDictArgs),
    /// Mean single-draw random-parity performance on planted instances.
    ParityApprox(VerifyParityArgs),
    /// Canonical hypotheses against sampled reduction bags.
    Reduction(VerifyReductionArgs),
}

#[derive(Debug, Args)]
pub struct VerifyDictArgs {
    #[arg(long, default_value_t = 2)]
    pub q_min: usize,
    #[arg(long, default_value_t = 6)]
    pub q_max: usize,
    #[arg(long, default_value_t = 64)]
    pub k_max: usize,
    /// Coordinates per sampled bag.
    #[arg(long, default_value_t = 50)]
    pub m: usize,
    /// Sampled bags per q for the completeness check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long)]
    pub seed: u64,
    /// Per-(q, K, c0) soundness records as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyParityArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub bags: usize,
    #[arg(long)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyReductionArgs {
    #[command(flatten)]
    pub input: ReductionInput,
    /// Random (c̄, x̂) pairs for the folding identity (parity only).
    #[arg(long, default_value_t = 1000)]
    pub pairs: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Ordered `key=value` report.
#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn add(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    fn emit(&self, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
        match path {
            Some(p) => write_file(p, &self.render()),
            None => Ok(stdout.write_all(self.render().as_bytes())?),
        }
    }
}

fn ratio(num: u128, den: u128) -> String {
    if den == 0 {
        return "0/0".into();
    }
    let r = Ratio::new(num, den);
    format!("{}/{}", r.numer(), r.denom())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn bad_input(path: &Path, reason: impl Display) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

fn read_instance(path: &Path) -> Result<LlpInstance, CliError> {
    llp_core::parse_llpb(&read_file(path)?).map_err(|e| bad_input(path, e))
}

fn read_hypothesis(path: &Path) -> Result<Hypothesis, CliError> {
    llp_core::parse_hypothesis(&read_file(path)?).map_err(|e| bad_input(path, e))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Parses `args` (including the program name) and runs the command, writing
/// reports to `stdout` and failure reasons to `stderr`. Returns the exit code.
pub fn run_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli, stdout) {
        Ok(Outcome::Pass) => EXIT_OK,
        Ok(Outcome::Fail(reason)) => {
            let _ = writeln!(stderr, "check failed: {reason}");
            EXIT_CHECK_FAILED
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gen(GenCommand::PlantedParity(a)) => gen_planted_parity(a),
        Command::Gen(GenCommand::Labelcover(a)) => gen_labelcover(a),
        Command::Reduce(a) => reduce(a),
        Command::Solve(SolveCommand::Parity(a)) => solve_parity(a, stdout),
        Command::Solve(SolveCommand::Brute(a)) => solve_brute(a, stdout),
        Command::Eval(a) => eval(a, stdout),
        Command::Verify(VerifyCommand::Dict(a)) => verify_dict(a, stdout),
        Command::Verify(VerifyCommand::ParityApprox(a)) => verify_parity_approx(a, stdout),
        Command::Verify(VerifyCommand::Reduction(a)) => verify_reduction(a, stdout),
    }
}

fn gen_planted_parity(a: &GenParityArgs) -> Result<Outcome, CliError> {
    if a.dim == 0 || a.bags == 0 || a.q == 0 {
        return Err(usage("--dim, --q and --bags must be positive"));
    }
    let (inst, hidden) = parity_solver::planted_parity_instance(a.dim, a.q, a.bags, a.seed);
    write_file(&a.out, &llp_core::to_llpb_string(&inst))?;
    if let Some(w) = &a.witness {
        write_file(w, &llp_core::format_hypothesis(&hidden.into()))?;
    }
    Ok(Outcome::Pass)
}

fn gen_labelcover(a: &GenLabelCoverArgs) -> Result<Outcome, CliError> {
    let labeling_path = a.labeling.clone().unwrap_or_else(|| with_suffix(&a.out, ".labels"));
    let (instance, labeling) = match a.kind {
        LabelCoverKind::Bipartite => {
            if a.replicate == 0 {
                return Err(usage("--replicate must be at least 1"));
            }
            let u = a.u.unwrap_or(a.v);
            let (lc, rho) =
                labelcover::planted_bipartite(u, a.v, a.deg, a.n_labels, a.m_labels, a.seed).map_err(usage)?;
            let (lc, rho) = if a.replicate > 1 { lc.replicate(a.replicate, &rho) } else { (lc, rho) };
            (labelcover::format_bipartite(&lc), labelcover::format_bipartite_labeling(&rho))
        }
        LabelCoverKind::Smooth => {
            if a.u.is_some() || a.replicate != 1 {
                return Err(usage("--u and --replicate apply to bipartite instances only"));
            }
            let (slc, rho) = labelcover::planted_smooth(a.v, a.deg, a.n_labels, a.m_labels, a.seed).map_err(usage)?;
            (labelcover::format_smooth(&slc), labelcover::format_vertex_labeling(&rho))
        }
    };
    write_file(&a.out, &instance)?;
    write_file(&labeling_path, &labeling)?;
    Ok(Outcome::Pass)
}

/// A sampled reduction: the LLP instance plus its canonical hypothesis and,
/// for the parity case, the folding data.
struct Sampled {
    instance: LlpInstance,
    canonical: Hypothesis,
    folded: Option<(reductions::FoldedReduction, BitVector)>,
}

fn sample_reduction(input: &ReductionInput) -> Result<Sampled, CliError> {
    let lc = labelcover::parse_label_cover(&read_file(&input.lc)?).map_err(|e| bad_input(&input.lc, e))?;
    let labels_text = read_file(&input.labeling)?;
    match (input.kind, lc) {
        (ReductionKind::OrCnf | ReductionKind::OrDnf, LabelCoverInstance::Bipartite(lc)) => {
            let rho = labelcover::parse_labeling(&labels_text, lc.u_count(), lc.v_count())
                .map_err(|e| bad_input(&input.labeling, e))?;
            let t = input.t.ok_or_else(|| usage("--T is required for or-cnf and or-dnf"))?;
            let instance = if input.kind == ReductionKind::OrCnf {
                let exp = u32::try_from(t).map_err(|_| usage("--T out of range"))?;
                let scales = ScaleSet::new(exp).map_err(usage)?;
                reductions::or_cnf_instance(&lc, &scales, input.bags, input.seed)
            } else {
                if t == 0 {
                    return Err(usage("--T must be positive"));
                }
                reductions::or_dnf_instance(&lc, t, input.bags, input.seed)
            }
            .map_err(usage)?;
            let canonical = reductions::canonical_or(&lc, &rho.right).map_err(usage)?.into();
            Ok(Sampled {
                instance,
                canonical,
                folded: None,
            })
        }
        (ReductionKind::Parity, LabelCoverInstance::Smooth(slc)) => {
            let rho = labelcover::parse_labeling(&labels_text, 0, slc.v_count())
                .map_err(|e| bad_input(&input.labeling, e))?
                .right;
            let q = input.q.ok_or_else(|| usage("--q is required for parity"))?;
            let fr = reductions::build_folded_reduction(&slc, q).map_err(usage)?;
            let cstar = reductions::canonical_parity(&slc, &rho).map_err(usage)?;
            let instance = reductions::parity_instance(&fr, input.bags, input.seed).map_err(usage)?;
            let canonical = match reductions::fold_parity(&fr, false, &cstar) {
                Ok(h) => h.into(),
                // c* outside H: report it through the checks, keep a zero parity on disk.
                Err(_) => ParityHypothesis::new(false, BitVector::zeros(fr.folded_dim())).into(),
            };
            Ok(Sampled {
                instance,
                canonical,
                folded: Some((fr, cstar)),
            })
        }
        (ReductionKind::Parity, _) => Err(bad_input(&input.lc, "parity reduction needs a smooth instance")),
        (_, _) => Err(bad_input(&input.lc, "or-cnf and or-dnf need a bipartite instance")),
    }
}

fn reduce(a: &ReduceArgs) -> Result<Outcome, CliError> {
    let sampled = sample_reduction(&a.input)?;
    write_file(&a.out, &llp_core::to_llpb_string(&sampled.instance))?;
    let hyp_path = a.hypothesis.clone().unwrap_or_else(|| with_suffix(&a.out, ".hyp"));
    write_file(&hyp_path, &llp_core::format_hypothesis(&sampled.canonical))?;
    Ok(Outcome::Pass)
}

fn solve_parity(a: &SolveParityArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let inst = read_instance(&a.input)?;
    let reduction = if a.best_effort {
        parity_solver::reduce_best_effort(&inst)
    } else {
        parity_solver::reduce(&inst)
    }
    .map_err(|e| bad_input(&a.input, e))?;
    let (h, rep) = parity_solver::solve_from_reduction(&inst, &reduction, a.seed, a.restarts).map_err(usage)?;
    let mut r = Report::default();
    r.add("solver", "random-parity")
        .add("seed", a.seed)
        .add("restarts", rep.restarts_used)
        .add("best_effort", a.best_effort)
        .add("dropped_rows", reduction.dropped.len())
        .add("rank", rep.rank)
        .add("free", rep.free_count)
        .add("bags", rep.total)
        .add("satisfied", rep.satisfied)
        .add("fraction", ratio(rep.satisfied as u128, rep.total as u128));
    if let Some(p) = &a.hypothesis_out {
        write_file(p, &llp_core::format_hypothesis(&h.into()))?;
    }
    r.emit(a.report.as_deref(), stdout)?;
    Ok(Outcome::Pass)
}

fn solve_brute(a: &SolveBruteArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let inst = read_instance(&a.input)?;
    let budget = SearchBudget {
        max_dim: a.max_dim,
        max_clauses: a.max_terms,
        max_literals: a.max_width,
        candidates: None,
        allow_negations: a.negations,
        max_enumeration: a.max_enumeration,
    };
    let (h, satisfied, family): (Hypothesis, usize, u128) = match a.class {
        SearchClass::Or => {
            let r = hypothesis_search::best_monotone_or(&inst, &budget).map_err(usage)?;
            (r.hypothesis.into(), r.satisfied, r.family_size)
        }
        SearchClass::Cnf => {
            let r = hypothesis_search::best_cnf(&inst, a.l, &budget).map_err(usage)?;
            (r.hypothesis.into(), r.satisfied, r.family_size)
        }
        SearchClass::Dnf => {
            let r = hypothesis_search::best_dnf(&inst, a.l, &budget).map_err(usage)?;
            (r.hypothesis.into(), r.satisfied, r.family_size)
        }
        SearchClass::Parity => {
            let r = hypothesis_search::best_parity(&inst).map_err(usage)?;
            (r.hypothesis.into(), r.satisfied, r.family_size)
        }
    };
    let class = a.class.to_possible_value().expect("no skipped variants");
    let mut r = Report::default();
    r.add("class", class.get_name())
        .add("l", a.l)
        .add("family_size", family)
        .add("bags", inst.len())
        .add("satisfied", satisfied)
        .add("fraction", ratio(satisfied as u128, inst.len() as u128));
    if let Some(p) = &a.hypothesis_out {
        write_file(p, &llp_core::format_hypothesis(&h))?;
    }
    r.emit(a.report.as_deref(), stdout)?;
    Ok(Outcome::Pass)
}

fn eval(a: &EvalArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let inst = read_instance(&a.input)?;
    let h = read_hypothesis(&a.hypothesis)?;
    let frac = llp_core::satisfied_fraction(&inst, &h).map_err(|e| bad_input(&a.hypothesis, e))?;
    let mut r = Report::default();
    r.add("bags", frac.total)
        .add("satisfied", frac.count)
        .add("fraction", ratio(frac.count as u128, frac.total as u128));
    r.emit(a.report.as_deref(), stdout)?;
    if a.require_all && !frac.is_complete() {
        return Ok(Outcome::Fail(format!("{} of {} bags satisfied", frac.count, frac.total)));
    }
    Ok(Outcome::Pass)
}

fn verify_dict(a: &VerifyDictArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    if a.q_min < 2 || a.q_min > a.q_max || a.q_max > dictator_test::MAX_DP_BAG_SIZE {
        return Err(usage(format!(
            "need 2 <= q-min <= q-max <= {}",
            dictator_test::MAX_DP_BAG_SIZE
        )));
    }
    let mut failures = Vec::new();

    // Completeness: every dictator satisfies every sampled bag.
    let mut completeness = Vec::new();
    for q in a.q_min..=a.q_max {
        let params = DictParams::new(a.m, q).map_err(usage)?;
        let satisfied: u64 = (0..a.samples)
            .into_par_iter()
            .map(|i| {
                let bag = dictator_test::sample_dict_bag(&params, &mut seeding::derived_rng(a.seed, ((q as u64) << 40) | i));
                let all = (0..a.m).all(|c| {
                    let h: Hypothesis = ParityHypothesis::dictator(a.m, c).into();
                    llp_core::satisfies(&bag, &h).expect("dimensions agree")
                });
                u64::from(all)
            })
            .sum();
        if satisfied != a.samples {
            failures.push(format!("completeness q={q}: {satisfied}/{}", a.samples));
        }
        completeness.push(format!("{q}:{satisfied}/{}", a.samples));
    }

    // Soundness and XOR bias over the exact label distribution.
    let mut csv = String::from("q,K,c0,prob,bound,ok\n");
    let mut sound_ok = 0usize;
    let mut sound_total = 0usize;
    let mut xor_ok = true;
    let half = BigRational::new(1.into(), 2.into());
    let two = BigRational::from_integer(2.into());
    for q in a.q_min..=a.q_max {
        for k in 1..=a.k_max {
            for c0 in [false, true] {
                let dist = dictator_test::exact_label_distribution(q, k, c0).map_err(usage)?;
                let prob = dist.mass_where(|m| m.count_ones() == 1);
                let bound = dictator_test::soundness_bound(q, k);
                let ok = dictator_test::within_soundness_bound(&prob, q, k);
                sound_total += 1;
                sound_ok += usize::from(ok);
                if !ok {
                    failures.push(format!("soundness q={q} K={k} c0={}", u8::from(c0)));
                }
                csv.push_str(&format!("{q},{k},{},{},{bound:e},{ok}\n", u8::from(c0), prob));
                let xor_bound = (-2.0 * k as f64 / q as f64).exp();
                for mask in 1..(1usize << q) - 1 {
                    let subset: Vec<usize> = (0..q).filter(|j| mask >> j & 1 == 1).collect();
                    let bias = dictator_test::xor_bias_from(&dist, &subset).map_err(usage)?;
                    let dev = (bias - &half).abs() * &two;
                    if !(dev.is_zero() || dictator_test::rational_le_real(&dev, xor_bound)) {
                        xor_ok = false;
                        failures.push(format!("xor bias q={q} K={k} S={subset:?}"));
                    }
                }
            }
        }
    }

    let limit = dictator_test::satisfaction_probability(3, 200, true)
        .map_err(usage)?
        .to_f64()
        .unwrap_or(f64::NAN);
    let limit_ok = (limit - 0.75).abs() <= 1e-6;
    if !limit_ok {
        failures.push(format!("limit q=3 K=200: {limit}"));
    }

    if let Some(p) = &a.csv {
        write_file(p, &csv)?;
    }
    let mut r = Report::default();
    r.add("seed", a.seed)
        .add("m", a.m)
        .add("q_range", format!("{}..{}", a.q_min, a.q_max))
        .add("k_max", a.k_max)
        .add("completeness", completeness.join(","))
        .add("soundness", format!("{sound_ok}/{sound_total}"))
        .add("xor_bias_ok", xor_ok)
        .add("limit_q3_k200", format!("{limit:.9}"))
        .add("pass", failures.is_empty());
    r.emit(a.report.as_deref(), stdout)?;
    Ok(match failures.into_iter().next() {
        None => Outcome::Pass,
        Some(first) => Outcome::Fail(first),
    })
}

/// Satisfied-bag count of one single-draw solve per planted trial instance.
pub fn parity_approx_trials(q: usize, dim: usize, bags: usize, trials: u64, seed: u64) -> Vec<usize> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let (inst, _) = parity_solver::planted_parity_instance(dim, q, bags, seeding::derived_seed(seed, i));
            let (_, report) = parity_solver::random_parity_solve(&inst, seeding::derived_seed(seed ^ 0x5eed, i), 1)
                .expect("planted instances are consistent");
            report.satisfied
        })
        .collect()
}

fn verify_parity_approx(a: &VerifyParityArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    if a.q < 2 || a.dim == 0 || a.bags == 0 || a.trials < 2 {
        return Err(usage("need q >= 2, dim >= 1, bags >= 1, trials >= 2"));
    }
    let counts = parity_approx_trials(a.q, a.dim, a.bags, a.trials, a.seed);
    let sum: u128 = counts.iter().map(|&c| c as u128).sum();
    let sum_sq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
    let n = a.trials as f64;
    let b = a.bags as f64;
    let mean = sum as f64 / (n * b);
    // Sample variance of per-trial fractions from integer moments.
    let var = (sum_sq as f64 - (sum as f64).powi(2) / n) / (n - 1.0) / (b * b);
    let stderr = (var.max(0.0) / n).sqrt();
    let bound = 1.0 / 2f64.powi(a.q as i32 - 2);
    let threshold = bound - 3.0 * stderr;
    let complete = counts.iter().filter(|&&c| c == a.bags).count();
    let pass = mean >= threshold && (a.q != 2 || complete as u64 == a.trials);
    let mut r = Report::default();
    r.add("q", a.q)
        .add("dim", a.dim)
        .add("bags", a.bags)
        .add("trials", a.trials)
        .add("seed", a.seed)
        .add("mean", ratio(sum, a.trials as u128 * a.bags as u128))
        .add("mean_f64", format!("{mean:.9}"))
        .add("stderr", format!("{stderr:.9}"))
        .add("bound", ratio(1, 1u128 << (a.q - 2)))
        .add("threshold", format!("{threshold:.9}"))
        .add("complete_trials", complete)
        .add("pass", pass);
    r.emit(a.report.as_deref(), stdout)?;
    Ok(if pass {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("mean {mean:.6} below threshold {threshold:.6}"))
    })
}

fn verify_reduction(a: &VerifyReductionArgs, stdout: &mut dyn Write) -> Result<Outcome, CliError> {
    let sampled = sample_reduction(&a.input)?;
    let frac = llp_core::satisfied_fraction(&sampled.instance, &sampled.canonical).map_err(usage)?;
    let mut failures = Vec::new();
    if !frac.is_complete() {
        failures.push(format!("canonical hypothesis satisfies {frac} bags"));
    }
    let mut r = Report::default();
    let kind = a.input.kind.to_possible_value().expect("no skipped variants");
    r.add("kind", kind.get_name())
        .add("seed", a.input.seed)
        .add("bags", frac.total)
        .add("satisfied", frac.count)
        .add("fraction", ratio(frac.count as u128, frac.total as u128));
    if let Some((fr, cstar)) = &sampled.folded {
        let in_h = fr.contains(cstar).map_err(usage)?;
        if !in_h {
            failures.push("canonical parity is outside H".into());
        }
        let identity_ok = (0..a.pairs)
            .into_par_iter()
            .filter(|&i| {
                let mut rng = seeding::derived_rng(a.input.seed ^ 0xf01d, i);
                let cbar = BitVector::random(fr.folded_dim(), &mut rng);
                let x = BitVector::random(fr.unfolded_dim(), &mut rng);
                let mut c = BitVector::zeros(fr.unfolded_dim());
                for k in cbar.ones_iter() {
                    c.xor_assign(&fr.h_basis()[k]);
                }
                let xbar = reductions::fold_point(fr, &x).expect("unfolded length");
                cbar.dot(&xbar) == c.dot(&x)
            })
            .count() as u64;
        if identity_ok != a.pairs {
            failures.push(format!("folding identity holds on {identity_ok}/{} pairs", a.pairs));
        }
        r.add("folded_dim", fr.folded_dim())
            .add("unfolded_dim", fr.unfolded_dim())
            .add("canonical_in_h", in_h)
            .add("folding_identity", format!("{identity_ok}/{}", a.pairs));
    }
    r.add("pass", failures.is_empty());
    r.emit(a.report.as_deref(), stdout)?;
    Ok(match failures.into_iter().next() {
        None => Outcome::Pass,
        Some(first) => Outcome::Fail(first),
    })
}
