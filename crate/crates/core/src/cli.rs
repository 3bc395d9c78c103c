//! Command-line front end. Reports are JSON (pretty-printed, field order
//! fixed by the structs), sweeps are CSV.
//!
//! Exit codes: 0 success, 1 internal numeric failure, 2 input error,
//! 3 I/O error, 4 non-physical data.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::blochlab::{
    assemble_state, concurrence_bounds, m_matrix, negativity_closed_form, parse_correlation_csv,
    realignment_closed_form, ConcurrenceBounds, MSpectrum, NegativityComparison, RealignmentComparison,
    MIXED_MARGINAL_TOL,
};
use crate::error::{Error, Result};
use crate::measures::{bipartite, bipartite_pure, negativity, realignment_measure, Measure, PartitionSpec};
use crate::monogamy::{
    classify_slocc, conjecture_campaign, monogamy_block_with, monogamy_qubitwise_with, class_table, tau_sweep,
    unit_grid, BlockPartition, CampaignConfig, MonogamyReport, SloccReport, ClassRow, Tolerances, HOLD_TOL,
};
use crate::states::{read_state_file, AnyState, CorrelationDecomposition};

#[derive(Debug, Parser)]
#[command(name = "entshare", version, about = "Entanglement measures and monogamy checks for qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Base seed for random sampling.
    #[arg(long, global = true, env = "ENTSHARE_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Slack below `-tolerance` counts as a violation.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence, negativity and realignment across cuts of a state file.
    Measure {
        #[arg(long)]
        input: PathBuf,
        /// Cut such as `0:12`; repeatable. Defaults to every single-subsystem cut.
        #[arg(long)]
        cut: Vec<String>,
        /// Block partition such as `0|1|2,3` for pure qubit states; repeatable.
        #[arg(long)]
        blocks: Vec<String>,
    },
    /// Three-tangle and negativity residual for each three-qubit class.
    Table1,
    /// `p,tau_N,tau_R` over the W/GHZ mixture family.
    Sweep {
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Random search for non-strict or violated block inequalities.
    Conjecture {
        #[arg(long, default_value_t = 4)]
        qubits: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Also evaluate partitions with several multi-qubit groups.
        #[arg(long)]
        multi_blocks: bool,
    },
    /// Bounds and closed forms from a two-qubit correlation CSV.
    Bloch {
        #[arg(long)]
        input: PathBuf,
    },
    /// Class of a pure three-qubit state.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Validated settings shared by all commands.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_args(common: &CommonArgs) -> Result<Self> {
        let mut tolerances = Tolerances::default();
        if let Some(t) = common.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::arg(format!("tolerance {t} must be a nonnegative number")));
            }
            tolerances.hold = t;
        }
        Ok(Self { seed: common.seed, output_path: common.out.clone(), tolerances })
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 3,
        Error::NonPhysical(_) => 4,
        Error::NumericFailure(_) => 1,
        _ => 2,
    }
}

/// `%.12g`: twelve significant digits, trailing zeros dropped, exponent form
/// outside `1e-5 ..< 1e12`.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-5..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant), exp.abs())
    } else {
        trim(&format!("{x:.*}", (11 - exp) as usize))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::NumericFailure(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct CutReport {
    pub cut: String,
    /// Present for pure states with a one-qubit left block, or two-qubit states.
    pub concurrence: Option<f64>,
    pub negativity: f64,
    pub realignment: f64,
}

#[derive(Debug, Serialize)]
pub struct MeasureReport {
    pub dims: Vec<usize>,
    pub kind: &'static str,
    pub cuts: Vec<CutReport>,
    pub monogamy: Vec<MonogamyReport>,
}

fn cut_report(state: &AnyState, cut: &PartitionSpec) -> Result<CutReport> {
    let (concurrence, negativity, realignment) = match state {
        AnyState::Pure(psi) => {
            let conc = if cut.left().len() == 1 && psi.dims().as_slice()[cut.left()[0]] == 2 {
                Some(bipartite_pure(Measure::Concurrence, psi, cut)?)
            } else {
                None
            };
            (
                conc,
                bipartite_pure(Measure::Negativity, psi, cut)?,
                bipartite_pure(Measure::Realignment, psi, cut)?,
            )
        }
        AnyState::Mixed(rho) => {
            let conc = if rho.dims().as_slice() == [2, 2] {
                Some(bipartite(Measure::Concurrence, rho, cut)?)
            } else {
                None
            };
            (conc, negativity(rho, cut)?, realignment_measure(rho, cut)?)
        }
    };
    Ok(CutReport { cut: cut.to_string(), concurrence, negativity, realignment })
}

pub fn cmd_measure(state: &AnyState, cuts: &[String], blocks: &[String], cfg: &RunConfig) -> Result<MeasureReport> {
    let n = state.dims().len();
    if n < 2 {
        return Err(Error::arg("a state with one subsystem has no cut"));
    }
    let specs: Vec<PartitionSpec> = if cuts.is_empty() {
        (0..n).map(|k| PartitionSpec::single(k, n)).collect::<Result<_>>()?
    } else {
        cuts.iter().map(|t| PartitionSpec::parse(t, n)).collect::<Result<_>>()?
    };
    let cuts = specs.iter().map(|c| cut_report(state, c)).collect::<Result<Vec<_>>>()?;
    let mut monogamy = Vec::new();
    let partitions = blocks.iter().map(|t| BlockPartition::parse(t, n)).collect::<Result<Vec<_>>>()?;
    match state {
        AnyState::Pure(psi) if psi.dims().is_qubits() && n >= 3 => {
            for focus in 0..n {
                for m in [Measure::Concurrence, Measure::Negativity, Measure::Realignment] {
                    monogamy.push(monogamy_qubitwise_with(psi, focus, m, &cfg.tolerances)?);
                }
            }
            for p in &partitions {
                for m in [Measure::Negativity, Measure::Realignment] {
                    monogamy.push(monogamy_block_with(psi, p, m, &cfg.tolerances)?);
                }
            }
        }
        _ if !partitions.is_empty() => {
            return Err(Error::arg("block inequalities need a pure state of at least three qubits"));
        }
        _ => {}
    }
    Ok(MeasureReport {
        dims: state.dims().as_slice().to_vec(),
        kind: match state {
            AnyState::Pure(_) => "pure",
            AnyState::Mixed(_) => "mixed",
        },
        cuts,
        monogamy,
    })
}

pub fn format_class_table(rows: &[ClassRow]) -> String {
    let mark = |x: f64, pos: bool| if pos { format!(">0 ({})", fmt_g12(x)) } else { "0".to_string() };
    let mut s = format!("{:<8}{:<28}{:<28}\n", "class", "tau_ABC", "pi_ABC");
    for r in rows {
        s += &format!(
            "{:<8}{:<28}{:<28}\n",
            r.class.to_string(),
            mark(r.tau_abc, r.tau_positive),
            mark(r.pi_abc, r.pi_positive)
        );
    }
    s
}

pub fn cmd_sweep(step: f64) -> Result<String> {
    let rows = tau_sweep(&unit_grid(step)?)?;
    let mut s = String::from("p,tau_N,tau_R\n");
    for r in rows {
        s += &format!("{},{},{}\n", fmt_g12(r.p), fmt_g12(r.tau_n), fmt_g12(r.tau_r));
    }
    Ok(s)
}

#[derive(Debug, Serialize)]
pub struct BlochReport {
    pub decomposition: CorrelationDecomposition,
    pub min_eigenvalue: f64,
    pub separable: bool,
    pub concurrence: f64,
    pub negativity: f64,
    pub realignment: f64,
    pub spectrum: MSpectrum,
    pub bounds: ConcurrenceBounds,
    pub mixed_marginals: bool,
    pub realignment_closed_form: Option<RealignmentComparison>,
    pub negativity_closed_form: Option<NegativityComparison>,
}

pub fn cmd_bloch(d: &CorrelationDecomposition) -> Result<BlochReport> {
    let rho = assemble_state(d)?;
    let cut = PartitionSpec::single(0, 2)?;
    let neg = negativity(&rho, &cut)?;
    let (_, spectrum) = m_matrix(&rho)?;
    let mixed = d.has_mixed_marginals(MIXED_MARGINAL_TOL);
    Ok(BlochReport {
        decomposition: d.clone(),
        min_eigenvalue: rho.eigenvalues()?.last().copied().unwrap_or(0.0),
        // positive partial transpose is sufficient for two qubits
        separable: neg <= HOLD_TOL,
        concurrence: spectrum.concurrence(),
        negativity: neg,
        realignment: realignment_measure(&rho, &cut)?,
        spectrum,
        bounds: concurrence_bounds(&rho)?,
        mixed_marginals: mixed,
        realignment_closed_form: if mixed { Some(realignment_closed_form(d)?) } else { None },
        negativity_closed_form: if mixed { Some(negativity_closed_form(d)?) } else { None },
    })
}

pub fn cmd_classify(state: &AnyState) -> Result<SloccReport> {
    match state {
        AnyState::Pure(psi) => classify_slocc(psi),
        AnyState::Mixed(_) => Err(Error::arg("classification needs a pure state")),
    }
}

/// Runs one parsed invocation; text output goes to `stdout` unless `--out` is set.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let cfg = RunConfig::from_args(&cli.common)?;
    let out = cfg.output_path.as_deref();
    match &cli.command {
        Command::Measure { input, cut, blocks } => {
            let state = read_state_file(input)?;
            emit(out, &to_json(&cmd_measure(&state, cut, blocks, &cfg)?)?, stdout)
        }
        Command::Table1 => {
            let rows = class_table()?;
            stdout.write_all(format_class_table(&rows).as_bytes())?;
            if let Some(p) = out {
                std::fs::write(p, to_json(&rows)?)?;
            }
            Ok(())
        }
        Command::Sweep { step } => emit(out, &cmd_sweep(*step)?, stdout),
        Command::Conjecture { qubits, samples, multi_blocks } => {
            let mut config = CampaignConfig::new(*qubits, *samples, cfg.seed);
            config.include_multi_blocks = *multi_blocks;
            config.tolerances = cfg.tolerances;
            emit(out, &to_json(&conjecture_campaign(&config)?)?, stdout)
        }
        Command::Bloch { input } => {
            let text = std::fs::read_to_string(input)?;
            emit(out, &to_json(&cmd_bloch(&parse_correlation_csv(&text)?)?)?, stdout)
        }
        Command::Classify { input } => emit(out, &to_json(&cmd_classify(&read_state_file(input)?)?)?, stdout),
    }
}

/// Parses `args`, runs, prints any error to stderr, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cli, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("entshare: {e}");
            exit_code(&e)
        }
    }
}
