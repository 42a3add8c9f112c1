//! Command-line front end.
//!
//! Every subcommand prints a flat report: `key = value` lines by default, or
//! with `--machine` a single JSON document holding the command, the
//! canonical argument list, every input and every output. Feeding the
//! `argv` of a machine report back to the binary reproduces the report.
//!
//! Exit status is 0 on success, 2 on a usage or validation error and 3 when
//! the rate solver finds no solution.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::attacks::{
    ciphertext_only_attack, kpa_next_bits, otp_encrypt, spike_distribution, toeplitz_hash,
    AttackReport,
};
use crate::bits::BitString;
use crate::bounds::{
    epsilon_for_security_rate, extractable_key_length, leakage_profile_log,
    markov_individual_bound, pipeline_efficiency, required_epsilon, yuen_upper_bound,
    FiniteKeyParams,
};
use crate::coupling::{
    contradiction_report, independent_coupling, maximal_coupling, min_mismatch_oracle,
    mismatch_probability, MAX_ORACLE_SUPPORT,
};
use crate::error::{Error, Result};
use crate::logprob::LogProb;
use crate::probdist::{
    guessing_probability, min_entropy, statistical_distance, ConditionalChannel, Distribution,
};
use crate::quantum::{
    helstrom_min_error, measured_distance, outcome_probabilities, overlap, trace_distance_q,
    DensityMatrix, Povm,
};
use crate::rngtest::{
    model_distance_to_uniform, sample_blocks, uniformity_failure_report, SourceModel,
};

/// Probabilities below this are reported through their exponents only.
pub const SMALLEST_PRINTED_PROBABILITY_LOG10: f64 = -300.0;

#[derive(Debug, Parser)]
#[command(
    name = "qkdsec",
    version,
    about = "Security calculators for distilled keys"
)]
struct Cli {
    /// Emit one JSON document instead of key = value lines.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Guessing-probability bounds and leakage for a key of given length.
    Bounds(BoundsArgs),
    /// Finite-key length and the security-rate solver.
    Rate(RateArgs),
    /// Statistical distance and couplings of distribution files.
    Coupling(CouplingArgs),
    /// Discrimination of two density matrices.
    Detect(DetectArgs),
    /// One-time-pad attacks and Toeplitz hashing.
    #[command(subcommand)]
    Attack(AttackCommand),
    /// Simulated biased bit source against exact uniformity.
    Rngtest(RngArgs),
    /// Every worked number in one table.
    PaperFigures,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Averaged trace distance ε̄.
    #[arg(long)]
    eps_bar: f64,
    /// Key length in bits.
    #[arg(long)]
    key_len: u64,
    /// Raw transmission rate in bit/s (with --key-rate).
    #[arg(long, requires = "key_rate")]
    raw_rate: Option<f64>,
    /// Final key rate in bit/s (with --raw-rate).
    #[arg(long, requires = "raw_rate")]
    key_rate: Option<f64>,
}

#[derive(Debug, Args)]
struct RateArgs {
    /// Block length of the reconciled key.
    #[arg(long)]
    n: u64,
    /// Target ε̄ / l; solves for ε̄.
    #[arg(long, conflicts_with = "eps_bar", required_unless_present = "eps_bar")]
    s_target: Option<f64>,
    /// Fixed ε̄; evaluates the key length directly.
    #[arg(long)]
    eps_bar: Option<f64>,
    #[arg(long, default_value_t = 0.02)]
    qber: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Error-correction leakage in bits [default: 1.1·n·h(Q)].
    #[arg(long)]
    leak_ec: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    p_fail: f64,
    #[arg(long, default_value_t = 1e-15)]
    eps_cor: f64,
}

#[derive(Debug, Args)]
struct CouplingArgs {
    /// Distribution file.
    #[arg(long)]
    p: PathBuf,
    /// Second distribution file; without it `p` is compared with uniform.
    #[arg(long)]
    q: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    /// Matrix file for the first state.
    #[arg(long)]
    rho: PathBuf,
    /// Matrix file for the second state.
    #[arg(long)]
    sigma: PathBuf,
    /// Prior probability of the first state.
    #[arg(long, default_value_t = 0.5)]
    prior: f64,
    /// Matrix file holding the POVM elements.
    #[arg(long)]
    povm: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum AttackCommand {
    /// c = x XOR k.
    Otp {
        #[arg(long)]
        x: BitString,
        #[arg(long)]
        k: BitString,
    },
    /// MAP key estimate from a ciphertext.
    Cipher {
        #[arg(long)]
        c: BitString,
        /// Plaintext distribution file.
        #[arg(long)]
        px: PathBuf,
        /// Key distribution file.
        #[arg(long)]
        pk: PathBuf,
    },
    /// Remaining key bits given a known prefix.
    Kpa {
        /// Key distribution file.
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        prefix: BitString,
    },
    /// Spike key distribution as a distribution file.
    Spike {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        k_star: BitString,
    },
    /// Toeplitz hash of a key.
    Toeplitz {
        #[arg(long)]
        k: BitString,
        #[arg(long)]
        seed: BitString,
        #[arg(long)]
        out_len: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Iid,
    Markov,
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            Self::Iid => "iid",
            Self::Markov => "markov",
        }
    }
}

#[derive(Debug, Args)]
struct RngArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Iid)]
    model: ModelKind,
    /// Pr[1] - 1/2 for the iid source.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    bias: f64,
    /// Markov source: Pr[next = 1 | previous = 0].
    #[arg(long, default_value_t = 0.5)]
    p01: f64,
    /// Markov source: Pr[next = 0 | previous = 1].
    #[arg(long, default_value_t = 0.5)]
    p10: f64,
    /// Markov source: Pr[first bit = 1].
    #[arg(long, default_value_t = 0.5)]
    initial_one: f64,
    #[arg(long, default_value_t = 8)]
    block_len: usize,
    #[arg(long, default_value_t = 1_000_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Ordered inputs and outputs of one run.
#[derive(Debug, Default)]
struct Report {
    command: Vec<&'static str>,
    inputs: Vec<(&'static str, Value)>,
    outputs: Map<String, Value>,
}

impl Report {
    fn new(command: &[&'static str]) -> Self {
        Self {
            command: command.to_vec(),
            ..Self::default()
        }
    }

    fn input(&mut self, flag: &'static str, v: impl Into<Value>) {
        self.inputs.push((flag, v.into()));
    }

    fn out(&mut self, key: impl Into<String>, v: impl Into<Value>) {
        self.outputs.insert(key.into(), v.into());
    }

    /// A probability with its log10 and log2 forms. The plain value is left
    /// out when it is too small to print as a decimal.
    fn prob(&mut self, key: &str, p: &LogProb) {
        if p.log2() == f64::NEG_INFINITY || p.log10() >= SMALLEST_PRINTED_PROBABILITY_LOG10 {
            self.out(key, p.value());
        }
        self.out(format!("{key}_log10"), finite(p.log10()));
        self.out(format!("{key}_log2"), finite(p.log2()));
    }

    fn prob_value(&mut self, key: &str, p: f64) {
        if p == 0.0 || p.log10() >= SMALLEST_PRINTED_PROBABILITY_LOG10 {
            self.out(key, p);
        }
        if let Ok(lp) = LogProb::from_prob(p.clamp(0.0, 1.0)) {
            self.out(format!("{key}_log10"), finite(lp.log10()));
            self.out(format!("{key}_log2"), finite(lp.log2()));
        }
    }

    fn argv(&self) -> Vec<String> {
        let mut args: Vec<String> = self.command.iter().map(|s| s.to_string()).collect();
        for (flag, v) in &self.inputs {
            args.push(format!("--{flag}"));
            args.push(match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            });
        }
        args
    }

    fn to_machine(&self) -> Value {
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        json!({
            "command": self.command.join(" "),
            "argv": self.argv(),
            "inputs": inputs,
            "outputs": self.outputs,
        })
    }

    fn to_text(&self) -> String {
        let mut s = format!("command = {}\n", self.command.join(" "));
        for (k, v) in &self.inputs {
            s.push_str(&format!("input.{} = {}\n", k.replace('-', "_"), plain(v)));
        }
        for (k, v) in &self.outputs {
            s.push_str(&format!("{k} = {}\n", plain(v)));
        }
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// JSON has no infinities; they become null.
fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn path_value(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn read_file(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Io(format!("cannot read {}: {e}", p.display())))
}

fn read_distribution(p: &Path) -> Result<Distribution> {
    Distribution::from_document(&read_file(p)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
}

fn read_state(p: &Path) -> Result<DensityMatrix> {
    DensityMatrix::from_document(&read_file(p)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
}

fn bounds(a: &BoundsArgs) -> Result<Report> {
    let mut r = Report::new(&["bounds"]);
    r.input("eps-bar", a.eps_bar);
    r.input("key-len", a.key_len);
    let yuen = yuen_upper_bound(a.eps_bar, a.key_len)?;
    let markov = markov_individual_bound(a.eps_bar, a.key_len)?;
    r.prob("yuen_bound", &yuen);
    r.prob("markov_bound", &markov);
    r.prob("uniform_guessing", &required_epsilon(a.key_len)?);
    match leakage_profile_log(a.key_len, &markov) {
        Ok(lp) => {
            r.out("leakage_f", lp.f);
            r.out("leaked_bits", lp.leaked_bits);
            r.out(
                "leaked_bits_alt_denominator",
                lp.alternative_denominator_value,
            );
        }
        // a bound of one leaves nothing to protect
        Err(_) => {
            r.out("leakage_f", 0.0);
            r.out("leaked_bits", a.key_len);
        }
    }
    r.out("leakage_formula", "l / log2(1/eps)");
    if let (Some(raw), Some(key)) = (a.raw_rate, a.key_rate) {
        r.input("raw-rate", raw);
        r.input("key-rate", key);
        let pe = pipeline_efficiency(raw, key)?;
        r.out("pipeline_efficiency", pe.ratio);
        r.out("key_exceeds_raw", pe.key_exceeds_raw);
    }
    Ok(r)
}

fn rate(a: &RateArgs) -> Result<Report> {
    let mut r = Report::new(&["rate"]);
    r.input("n", a.n);
    if let Some(s) = a.s_target {
        r.input("s-target", s);
    }
    if let Some(e) = a.eps_bar {
        r.input("eps-bar", e);
    }
    r.input("qber", a.qber);
    r.input("mu", a.mu);
    if let Some(l) = a.leak_ec {
        r.input("leak-ec", l);
    }
    r.input("p-fail", a.p_fail);
    r.input("eps-cor", a.eps_cor);

    let mut params =
        FiniteKeyParams::new(a.n, a.qber, a.p_fail, a.eps_bar.unwrap_or(0.5), a.eps_cor);
    params.mu = a.mu;
    params.leak_ec = a.leak_ec;
    params.validate()?;
    r.out("leak_ec_bits", params.leak_ec_bits()?);

    let (eps_bar, key_len) = match a.s_target {
        Some(s) => {
            let sol = epsilon_for_security_rate(s, &params)?;
            r.out("iterations", sol.iterations);
            (sol.eps_bar, sol.key_len)
        }
        None => (params.eps_bar, extractable_key_length(&params)?),
    };
    let solved = params.with_eps_bar(eps_bar);
    r.prob("eps_bar", &LogProb::from_prob(eps_bar)?);
    r.out("security_cost_bits", solved.security_cost_bits());
    r.out("key_len", key_len);
    r.out("rate", key_len as f64 / a.n as f64);
    if key_len > 0 {
        r.prob_value("security_rate", eps_bar / key_len as f64);
    }
    Ok(r)
}

fn coupling(a: &CouplingArgs) -> Result<Report> {
    let mut r = Report::new(&["coupling"]);
    r.input("p", path_value(&a.p));
    let p = read_distribution(&a.p)?;
    r.prob_value("p_guessing", guessing_probability(&p));
    r.out("p_min_entropy", min_entropy(&p));
    match &a.q {
        Some(qpath) => {
            r.input("q", path_value(qpath));
            let q = read_distribution(qpath)?;
            r.prob_value("delta", statistical_distance(&p, &q)?);
            if p.is_dense_representable() && q.is_dense_representable() {
                r.prob_value(
                    "maximal_mismatch",
                    mismatch_probability(&maximal_coupling(&p, &q)?),
                );
                r.prob_value(
                    "independent_mismatch",
                    mismatch_probability(&independent_coupling(&p, &q)?),
                );
            }
            match min_mismatch_oracle(&p, &q) {
                Ok(v) => r.prob_value("oracle_min_mismatch", v),
                Err(Error::Scale(_)) => r.out(
                    "oracle_min_mismatch",
                    format!("skipped: support above {MAX_ORACLE_SUPPORT}"),
                ),
                Err(e) => return Err(e),
            }
        }
        None => {
            let c = contradiction_report(&p)?;
            r.prob_value("delta_to_uniform", c.delta);
            r.prob_value("maximal_mismatch", c.maximal_mismatch);
            r.prob("independent_failure", &c.independent_failure);
            r.out(
                "independent_failure_complement_log2",
                finite(c.independent_failure.complement_log2()),
            );
        }
    }
    Ok(r)
}

fn detect(a: &DetectArgs) -> Result<Report> {
    let mut r = Report::new(&["detect"]);
    r.input("rho", path_value(&a.rho));
    r.input("sigma", path_value(&a.sigma));
    r.input("prior", a.prior);
    let rho = read_state(&a.rho)?;
    let sigma = read_state(&a.sigma)?;
    r.out("dim", rho.dim());
    r.prob_value("trace_distance", trace_distance_q(&rho, &sigma)?);
    r.prob_value("helstrom_error", helstrom_min_error(&rho, &sigma, a.prior)?);
    r.out("overlap", overlap(&rho, &sigma)?);
    if let Some(path) = &a.povm {
        r.input("povm", path_value(path));
        let m = Povm::from_document(&read_file(path)?)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        r.out("povm_outcomes", m.elements().len());
        r.prob_value("measured_distance", measured_distance(&rho, &sigma, &m)?);
        r.out("rho_outcome_probs", outcome_probabilities(&rho, &m)?);
        r.out("sigma_outcome_probs", outcome_probabilities(&sigma, &m)?);
    }
    Ok(r)
}

fn attack_fields(r: &mut Report, a: &AttackReport) {
    r.out("map_guess", a.map_guess.to_string());
    r.prob_value("map_posterior", a.map_posterior);
    r.prob_value("avg_success", a.avg_success);
}

fn attack(c: &AttackCommand) -> Result<Report> {
    match c {
        AttackCommand::Otp { x, k } => {
            let mut r = Report::new(&["attack", "otp"]);
            r.input("x", x.to_string());
            r.input("k", k.to_string());
            r.out("c", otp_encrypt(x, k)?.to_string());
            Ok(r)
        }
        AttackCommand::Cipher { c, px, pk } => {
            let mut r = Report::new(&["attack", "cipher"]);
            r.input("c", c.to_string());
            r.input("px", path_value(px));
            r.input("pk", path_value(pk));
            let rep = ciphertext_only_attack(c, &read_distribution(px)?, &read_distribution(pk)?)?;
            attack_fields(&mut r, &rep);
            Ok(r)
        }
        AttackCommand::Kpa { pk, prefix } => {
            let mut r = Report::new(&["attack", "kpa"]);
            r.input("pk", path_value(pk));
            r.input("prefix", prefix.to_string());
            let rep = kpa_next_bits(&read_distribution(pk)?, prefix)?;
            attack_fields(&mut r, &rep);
            Ok(r)
        }
        AttackCommand::Spike { eps, k_star } => {
            let mut r = Report::new(&["attack", "spike"]);
            r.input("eps", *eps);
            r.input("k-star", k_star.to_string());
            let d = spike_distribution(k_star.len(), *eps, k_star)?;
            let delta = statistical_distance(&d, &Distribution::uniform(k_star.len())?)?;
            r.prob_value("delta_to_uniform", delta);
            r.prob_value("guessing", guessing_probability(&d));
            let doc: Value =
                serde_json::from_str(&d.to_document()).map_err(|e| Error::Parse(e.to_string()))?;
            r.out("distribution", doc);
            Ok(r)
        }
        AttackCommand::Toeplitz { k, seed, out_len } => {
            let mut r = Report::new(&["attack", "toeplitz"]);
            r.input("k", k.to_string());
            r.input("seed", seed.to_string());
            r.input("out-len", *out_len);
            r.out("hash", toeplitz_hash(k, seed, *out_len)?.to_string());
            Ok(r)
        }
    }
}

fn rngtest(a: &RngArgs) -> Result<Report> {
    let mut r = Report::new(&["rngtest"]);
    r.input("model", a.model.name());
    let model = match a.model {
        ModelKind::Iid => {
            r.input("bias", a.bias);
            SourceModel::iid(a.bias)?
        }
        ModelKind::Markov => {
            r.input("p01", a.p01);
            r.input("p10", a.p10);
            r.input("initial-one", a.initial_one);
            let transition = ConditionalChannel::new(
                1,
                1,
                vec![vec![1.0 - a.p01, a.p01], vec![a.p10, 1.0 - a.p10]],
            )?;
            let initial = Distribution::dense(1, vec![1.0 - a.initial_one, a.initial_one])?;
            SourceModel::markov(transition, initial)?
        }
    };
    r.input("block-len", a.block_len);
    r.input("count", a.count);
    r.input("seed", a.seed);
    let samples = sample_blocks(&model, a.block_len, a.count, a.seed)?;
    let rep = uniformity_failure_report(&samples)?;
    r.prob_value(
        "model_delta",
        model_distance_to_uniform(&model, a.block_len)?,
    );
    r.prob_value("empirical_delta", rep.empirical_delta);
    r.out("exactly_uniform", rep.exactly_uniform);
    r.prob("independent_failure", &rep.independent_failure);
    r.out(
        "independent_failure_complement_log2",
        finite(rep.independent_failure.complement_log2()),
    );
    Ok(r)
}

fn paper_figures() -> Result<Report> {
    let mut r = Report::new(&["paper-figures"]);
    let (eps_bar, l) = (1e-6, 10_000);
    r.prob("averaged_bound", &yuen_upper_bound(eps_bar, l)?);
    r.prob("uniform_key_guessing", &required_epsilon(l)?);
    let markov = markov_individual_bound(eps_bar, l)?;
    r.prob("individual_bound", &markov);
    let lp = leakage_profile_log(l, &markov)?;
    r.out("leakage_f", lp.f);
    r.out("leaked_bits_per_10000", lp.leaked_bits);
    r.out(
        "leaked_bits_alt_denominator",
        lp.alternative_denominator_value,
    );

    let mut table = Vec::new();
    for exp in 4..=7 {
        let n = 10u64.pow(exp);
        let row = match epsilon_for_security_rate(1e-14, &FiniteKeyParams::reference(n)) {
            Ok(sol) => json!({"n": n, "eps_bar": sol.eps_bar,
                "eps_bar_log10": sol.eps_bar.log10(), "key_len": sol.key_len, "rate": sol.rate}),
            Err(Error::NoSolution(_)) => json!({"n": n, "no_solution": true}),
            Err(e) => return Err(e),
        };
        table.push(row);
    }
    r.out("rate_table_s_target", 1e-14);
    r.out("rate_table", table);

    let pe = pipeline_efficiency(50e9, 300e3)?;
    r.out("pipeline_efficiency", pe.ratio);
    Ok(r)
}

fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Bounds(a) => bounds(a),
        Command::Rate(a) => rate(a),
        Command::Coupling(a) => coupling(a),
        Command::Detect(a) => detect(a),
        Command::Attack(c) => attack(c),
        Command::Rngtest(a) => rngtest(a),
        Command::PaperFigures => paper_figures(),
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoSolution(_) => 3,
        _ => 2,
    }
}

/// Runs the command line and returns the exit status. The first item is the
/// program name.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            if cli.machine {
                println!("{}", report.to_machine());
            } else {
                print!("{}", report.to_text());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
