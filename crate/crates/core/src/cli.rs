//! The `causal-expl` command line.
//!
//! Exit statuses: 0 success, 1 bad flags or bindings, 2 unreadable or
//! invalid network, 3 impossible conditioning, 4 oracle disagreement.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::causal::InterventionSet;
use crate::error::Error;
use crate::explain::{
    bayes_factor_search_with, causal_explanation_tree_with, explanation_tree_with,
    BayesFactorForm, ExplainerConfig, ExplanationTree, RankedEntry, RankedExplanations, ScoreKind,
};
use crate::format::parse_network;
use crate::inference::Engine;
use crate::network::{Assignment, Network, VarId};
use crate::oracle::{CrossCheck, Oracle, DEFAULT_STATE_SPACE_CAP};
use crate::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NETWORK: i32 = 2;
pub const EXIT_IMPOSSIBLE: i32 = 3;
pub const EXIT_DIVERGENCE: i32 = 4;

const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "causal-expl",
    version,
    about = "Explain observations in discrete causal Bayesian networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Causal explanation tree
    Cet(CetArgs),
    /// Noncausal explanation tree (mutual information)
    Et(EtArgs),
    /// Most probable explanation
    Mpe(MpeArgs),
    /// Bayes' factor ranking of partial assignments
    Bf(BfArgs),
    /// A single probability, optionally under intervention
    Query(QueryArgs),
    /// Parse and check a network file
    Validate(NetworkArg),
}

#[derive(Debug, Args)]
struct NetworkArg {
    /// Network file (JSON)
    #[arg(long, value_name = "PATH")]
    network: PathBuf,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    net: NetworkArg,
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    /// Recompute every probability by enumeration; exit 4 on disagreement
    #[arg(long)]
    oracle_check: bool,
}

#[derive(Debug, Args)]
struct HypothesisArgs {
    /// Explanatory variables (default: every variable outside the explanandum)
    #[arg(long, value_name = "VARS", value_delimiter = ',')]
    hypothesis: Vec<String>,
    /// Variables to drop from the hypothesis set
    #[arg(long, value_name = "VARS", value_delimiter = ',')]
    exclude: Vec<String>,
}

#[derive(Debug, Args)]
struct CetArgs {
    #[command(flatten)]
    common: Common,
    /// What to explain, e.g. `Recovery=rec`
    #[arg(long, value_name = "BINDINGS", required = true)]
    explanandum: Vec<String>,
    /// Other known states
    #[arg(long, value_name = "BINDINGS")]
    observe: Vec<String>,
    #[command(flatten)]
    hyp: HypothesisArgs,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Keep candidates without a directed path to the explanandum
    #[arg(long)]
    no_prune: bool,
}

#[derive(Debug, Args)]
struct EtArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_name = "BINDINGS", required = true)]
    explanandum: Vec<String>,
    #[command(flatten)]
    hyp: HypothesisArgs,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

#[derive(Debug, Args)]
struct MpeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_name = "BINDINGS", required = true)]
    evidence: Vec<String>,
}

#[derive(Debug, Args)]
struct BfArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_name = "BINDINGS", required = true)]
    explanandum: Vec<String>,
    #[command(flatten)]
    hyp: HypothesisArgs,
    #[arg(long, default_value_t = 2)]
    max_subset_size: usize,
    #[arg(long, default_value_t = 3)]
    top_k: usize,
    /// Rank by posterior odds instead of the prior-normalized factor
    #[arg(long)]
    raw_odds: bool,
}

#[derive(Debug, Args)]
struct QueryArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_name = "BINDINGS", required = true)]
    event: Vec<String>,
    #[arg(long, value_name = "BINDINGS")]
    given: Vec<String>,
    #[arg(long = "do", value_name = "BINDINGS")]
    do_: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Json,
    Dot,
}

/// A failed run: exit status plus message for stderr.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::ImpossibleConditioning(_) => EXIT_IMPOSSIBLE,
            Error::Syntax { .. }
            | Error::InvalidNetwork(_)
            | Error::CptShape { .. }
            | Error::RowSum { .. }
            | Error::Cycle(_) => EXIT_NETWORK,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(path: &PathBuf) -> Result<Network, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_NETWORK,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_network(&text).map_err(|e| Failure {
        code: EXIT_NETWORK,
        message: format!("{}: {e}", path.display()),
    })
}

fn bindings(net: &Network, tokens: &[String]) -> Result<Assignment, Failure> {
    let mut acc = Assignment::new();
    for token in tokens {
        let a = net.parse_assignment(token).map_err(|e| Failure::usage(e.to_string()))?;
        acc = acc.union(&a).map_err(|v| {
            Failure::usage(format!(
                "conflicting bindings for `{}`",
                net.variable(v).name()
            ))
        })?;
    }
    Ok(acc)
}

fn hypotheses(net: &Network, args: &HypothesisArgs, e: &Assignment) -> Result<Vec<VarId>, Failure> {
    let lookup = |names: &[String]| -> Result<Vec<VarId>, Failure> {
        names
            .iter()
            .map(|n| n.trim())
            .filter(|n| !n.is_empty())
            .map(|n| net.var_id(n).map_err(|e| Failure::usage(e.to_string())))
            .collect()
    };
    let excluded = lookup(&args.exclude)?;
    let base = if args.hypothesis.is_empty() {
        net.ids().filter(|v| !e.contains(*v)).collect()
    } else {
        lookup(&args.hypothesis)?
    };
    Ok(base.into_iter().filter(|v| !excluded.contains(v)).collect())
}

fn engine<'n>(net: &'n Network, common: &Common) -> Result<Engine<'n>, Failure> {
    if !common.oracle_check {
        return Ok(Engine::new(net));
    }
    let size = net.state_space_size();
    if size > DEFAULT_STATE_SPACE_CAP {
        return Err(Failure::usage(format!(
            "--oracle-check needs a joint of at most {DEFAULT_STATE_SPACE_CAP} states, network has {size}"
        )));
    }
    Ok(Engine::with_cross_check(
        net,
        CrossCheck::new(Oracle::new(net), ORACLE_TOLERANCE),
    ))
}

/// After output is written: report the oracle comparison, if any.
fn finish(engine: &Engine<'_>, err: &mut dyn Write) -> Result<(), Failure> {
    let Some(check) = engine.cross_check() else {
        return Ok(());
    };
    let divergences = check.divergences();
    if divergences.is_empty() {
        let _ = writeln!(err, "oracle check: {} values agree", check.checked());
        return Ok(());
    }
    for d in &divergences {
        let _ = writeln!(err, "oracle divergence: {} engine={} oracle={}", d.what, d.engine, d.oracle);
    }
    Err(Failure {
        code: EXIT_DIVERGENCE,
        message: format!(
            "{} of {} values disagree with the oracle",
            divergences.len(),
            check.checked()
        ),
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::usage(format!("write failed: {e}")))
}

fn tree_output(tree: &ExplanationTree, format: Format) -> String {
    match format {
        Format::Ascii => render::tree_ascii(tree),
        Format::Json => render::tree_json(tree),
        Format::Dot => render::tree_dot(tree),
    }
}

fn no_dot(format: Format) -> Result<(), Failure> {
    if format == Format::Dot {
        Err(Failure::usage("--format dot is only available for trees"))
    } else {
        Ok(())
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Validate(args) => {
            let net = load(&args.network)?;
            emit(
                out,
                &format!(
                    "ok: network `{}` with {} variables and {} edges\n",
                    net.name(),
                    net.len(),
                    net.edges().len()
                ),
            )
        }
        Command::Cet(args) => {
            let net = load(&args.common.net.network)?;
            let e = bindings(&net, &args.explanandum)?;
            let o = bindings(&net, &args.observe)?;
            let h = hypotheses(&net, &args.hyp, &e)?;
            let config = ExplainerConfig {
                alpha: args.alpha,
                prune_unreachable: !args.no_prune,
                ..ExplainerConfig::default()
            };
            let engine = engine(&net, &args.common)?;
            let (tree, _) = causal_explanation_tree_with(&engine, &h, &o, &e, &config)?;
            emit(out, &tree_output(&tree, args.common.format))?;
            finish(&engine, err)
        }
        Command::Et(args) => {
            let net = load(&args.common.net.network)?;
            let e = bindings(&net, &args.explanandum)?;
            let h = hypotheses(&net, &args.hyp, &e)?;
            let config = ExplainerConfig {
                alpha: args.alpha,
                beta: args.beta,
                ..ExplainerConfig::default()
            };
            let engine = engine(&net, &args.common)?;
            let (tree, _) = explanation_tree_with(&engine, &h, &e, &config)?;
            emit(out, &tree_output(&tree, args.common.format))?;
            finish(&engine, err)
        }
        Command::Mpe(args) => {
            no_dot(args.common.format)?;
            let net = load(&args.common.net.network)?;
            let evidence = bindings(&net, &args.evidence)?;
            let engine = engine(&net, &args.common)?;
            let (assignment, score) = engine.mpe(&evidence)?;
            let ranked = RankedExplanations {
                entries: vec![RankedEntry {
                    assignment,
                    score,
                    kind: ScoreKind::PosteriorProbability,
                }],
                considered: 1,
                skipped_degenerate: 0,
            };
            let text = match args.common.format {
                Format::Json => render::ranking_json(&net, &evidence, &ranked),
                _ => render::ranking_ascii(
                    &net,
                    &format!("most probable explanation for {}", evidence.display(&net)),
                    &ranked,
                ),
            };
            emit(out, &text)?;
            finish(&engine, err)
        }
        Command::Bf(args) => {
            no_dot(args.common.format)?;
            let net = load(&args.common.net.network)?;
            let e = bindings(&net, &args.explanandum)?;
            let h = hypotheses(&net, &args.hyp, &e)?;
            let config = ExplainerConfig {
                max_subset_size: args.max_subset_size,
                top_k: args.top_k,
                bayes_factor: if args.raw_odds {
                    BayesFactorForm::PosteriorOdds
                } else {
                    BayesFactorForm::PriorNormalized
                },
                ..ExplainerConfig::default()
            };
            let engine = engine(&net, &args.common)?;
            let ranked = bayes_factor_search_with(&engine, &h, &e, &config)?;
            let form = if args.raw_odds { "posterior odds" } else { "prior-normalized" };
            let text = match args.common.format {
                Format::Json => render::ranking_json(&net, &e, &ranked),
                _ => render::ranking_ascii(
                    &net,
                    &format!("Bayes' factor ranking for {} ({form})", e.display(&net)),
                    &ranked,
                ),
            };
            emit(out, &text)?;
            finish(&engine, err)
        }
        Command::Query(args) => {
            no_dot(args.common.format)?;
            let net = load(&args.common.net.network)?;
            let event = bindings(&net, &args.event)?;
            let given = bindings(&net, &args.given)?;
            let do_set = InterventionSet::from(bindings(&net, &args.do_)?);
            let engine = engine(&net, &args.common)?;
            let p = engine.interventional_probability(&event, &given, &do_set)?;
            let text = match args.common.format {
                Format::Json => {
                    let doc = json!({
                        "event": event.display(&net).to_string(),
                        "given": given.display(&net).to_string(),
                        "do": do_set.bindings().display(&net).to_string(),
                        "probability": p,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
                }
                _ => format!("{}\n", render::format_probability(p)),
            };
            emit(out, &text)?;
            finish(&engine, err)
        }
    }
}
