//! `epicheck`: trace documents in, verdicts out.
//!
//! Exit status is the machine-readable result: 0 consistent (or true,
//! valid, agreeing), 1 inconsistent (false, invalid, disagreeing), 2 the
//! search budget ran out, 3 usage or input error.

pub mod document;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use epistemic_consistency::check::{
    check_ec_axiomatic, check_ec_epistemic, check_lin, check_sc, validate_certificate,
    CheckOptions, Verdict,
};
use epistemic_consistency::gen;
use epistemic_consistency::logic::{parse_formula, AtomBinding, Evaluator, Semantics};
use epistemic_consistency::spec::{correct_evc, spec_member, AcceptAll};
use epistemic_consistency::theorems::Suite;
use epistemic_consistency::{Budget, CheckError, EvalError, RegisterSpec, Trace};

use document::{parse_trace, SpecName, TraceDocument};

pub const EXIT_TRUE: u8 = 0;
pub const EXIT_FALSE: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "epicheck",
    version,
    about = "Consistency checking for concurrent traces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Give up after expanding this many search nodes.
    #[arg(long, global = true, value_name = "N")]
    pub budget_nodes: Option<u64>,
    /// Give up after this many milliseconds.
    #[arg(long, global = true, value_name = "N")]
    pub budget_ms: Option<u64>,
    /// Worker threads for the exhaustive suites.
    #[arg(long, global = true, value_name = "N", default_value_t = 1)]
    pub jobs: usize,
    /// Reading of the until operator.
    #[arg(long, global = true, value_enum, default_value_t = SemanticsArg::FutureU)]
    pub semantics: SemanticsArg,
    /// Size bound for `theorems` and `generate`.
    #[arg(long, global = true, value_name = "N", default_value_t = 4)]
    pub max_events: usize,
    /// Treat the input as a claimed witness or certificate and only re-check it.
    #[arg(long, global = true)]
    pub validate_only: bool,
    /// Specification; defaults to the one named in the document header.
    #[arg(long, global = true, value_enum)]
    pub spec: Option<SpecArg>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Literal,
    FutureU,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpecArg {
    Register,
    None,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Axiomatic,
    Epistemic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Sc,
    Lin,
    Ec,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Combined `ld`/`st` register events.
    Register,
    /// Split register events; random mode yields well-formed histories.
    Split,
    /// Store traces on one variable.
    Store,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sequential consistency; prints a witness.
    CheckSc { input: Option<PathBuf> },
    /// Linearizability; prints a witness.
    CheckLin { input: Option<PathBuf> },
    /// Eventual consistency of a store trace.
    CheckEc {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Axiomatic)]
        method: Method,
    },
    /// Truth value of a closed formula at the end of the trace.
    Eval {
        input: Option<PathBuf>,
        #[arg(long)]
        formula: String,
        /// Position to evaluate at (default: the trace length).
        #[arg(long)]
        at: Option<usize>,
    },
    /// Exhaustive agreement of each checker with an independent decider.
    Theorems {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Emits a corpus of trace documents.
    Generate {
        #[arg(long, value_enum, default_value_t = Kind::Split)]
        kind: Kind,
        /// Every trace up to the size bound instead of random ones.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        threads: usize,
    },
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_TRUE
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdin, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            match e.downcast_ref::<CheckError>() {
                Some(CheckError::Budget(_)) => EXIT_BUDGET,
                _ => match e.downcast_ref::<EvalError>() {
                    Some(EvalError::Budget(_)) => EXIT_BUDGET,
                    _ => EXIT_USAGE,
                },
            }
        }
    }
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> anyhow::Result<(String, String)> {
    let mut text = String::new();
    let name = match path {
        Some(p) if p.as_os_str() != "-" => {
            text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            p.display().to_string()
        }
        _ => {
            stdin
                .read_to_string(&mut text)
                .context("reading standard input")?;
            "<stdin>".to_string()
        }
    };
    Ok((name, text))
}

fn load(path: &Option<PathBuf>, stdin: &mut dyn Read) -> anyhow::Result<(TraceDocument, String)> {
    let (name, text) = read_input(path, stdin)?;
    let doc = parse_trace(&text).map_err(|e| anyhow!("{name}:{e}"))?;
    Ok((doc, text))
}

fn budget(common: &Common) -> Budget {
    Budget {
        max_nodes: common.budget_nodes,
        max_time: common.budget_ms.map(std::time::Duration::from_millis),
    }
}

fn spec_of(common: &Common, doc: &TraceDocument) -> SpecName {
    match common.spec {
        Some(SpecArg::Register) => SpecName::Register,
        Some(SpecArg::None) => SpecName::None,
        None => doc.spec,
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> anyhow::Result<u8> {
    let common = &cli.common;
    let options = CheckOptions::with_budget(budget(common));
    match &cli.command {
        Command::CheckSc { input } | Command::CheckLin { input } => {
            let lin = matches!(cli.command, Command::CheckLin { .. });
            let (doc, _) = load(input, stdin)?;
            let spec = spec_of(common, &doc);
            if common.validate_only {
                let ok = match spec {
                    SpecName::Register => spec_member(&RegisterSpec, &doc.trace.expand_calls()),
                    SpecName::None => true,
                };
                return report_validity(
                    out,
                    ok.then_some(())
                        .ok_or("not a member of the specification".into()),
                );
            }
            let verdict = match (lin, spec) {
                (false, SpecName::Register) => check_sc(&doc.trace, &RegisterSpec, &options),
                (false, SpecName::None) => check_sc(&doc.trace, &AcceptAll, &options),
                (true, SpecName::Register) => check_lin(&doc.trace, &RegisterSpec, &options),
                (true, SpecName::None) => check_lin(&doc.trace, &AcceptAll, &options),
            };
            report_verdict(out, verdict?, &doc, spec)
        }
        Command::CheckEc { input, method } => {
            let (doc, text) = load(input, stdin)?;
            if common.validate_only {
                let result = match document::parse_certificate(&text).map_err(|e| anyhow!("{e}"))? {
                    Some(cert) => validate_certificate(&doc.trace, &cert),
                    None if correct_evc(&doc.trace) => Ok(()),
                    None => Err("trace does not satisfy correctEVC".to_string()),
                };
                return report_validity(out, result);
            }
            let verdict = match method {
                Method::Axiomatic => check_ec_axiomatic(&doc.trace, &options),
                Method::Epistemic => check_ec_epistemic(&doc.trace, &options),
            }?;
            report_verdict(out, verdict, &doc, doc.spec)
        }
        Command::Eval { input, formula, at } => {
            let (doc, _) = load(input, stdin)?;
            let atoms = match spec_of(common, &doc) {
                SpecName::Register => AtomBinding::standard().with_spec(RegisterSpec),
                SpecName::None => AtomBinding::standard().with_spec(AcceptAll),
            };
            let f =
                parse_formula(formula, &atoms, &doc.threads).map_err(|e| anyhow!("formula:{e}"))?;
            let semantics = match common.semantics {
                SemanticsArg::Literal => Semantics::Literal,
                SemanticsArg::FutureU => Semantics::FutureU,
            };
            let i = at.unwrap_or(doc.trace.len());
            if i > doc.trace.len() {
                bail!(
                    "position {i} is beyond the trace length {}",
                    doc.trace.len()
                );
            }
            let value = Evaluator::new(&atoms)
                .with_semantics(semantics)
                .with_budget(budget(common))
                .eval(&doc.trace, i, &f)?;
            writeln!(out, "{value}")?;
            Ok(if value { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Theorems { suite } => {
            let suites: &[Suite] = match suite {
                SuiteArg::Sc => &[Suite::SequentialConsistency],
                SuiteArg::Lin => &[Suite::Linearizability],
                SuiteArg::Ec => &[Suite::EventualConsistency],
                SuiteArg::All => &[
                    Suite::SequentialConsistency,
                    Suite::Linearizability,
                    Suite::EventualConsistency,
                ],
            };
            let mut all = true;
            for s in suites {
                let start = Instant::now();
                let r = s.run(common.max_events, common.jobs)?;
                writeln!(
                    out,
                    "{}: {} traces, {} consistent, {} mismatches ({:.1}s)",
                    s.name(),
                    r.instances,
                    r.consistent,
                    r.mismatch_count,
                    start.elapsed().as_secs_f64()
                )?;
                for m in &r.mismatches {
                    writeln!(out, "# mismatch")?;
                    write!(
                        out,
                        "{}",
                        TraceDocument::from_trace(m.clone(), SpecName::Register)
                    )?;
                }
                all &= r.all_agree();
            }
            Ok(if all { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Generate {
            kind,
            exhaustive,
            count,
            seed,
            threads,
        } => {
            if *threads == 0 {
                bail!("--threads must be at least 1");
            }
            let names: Vec<String> = (1..=*threads).map(|k| format!("t{k}")).collect();
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            let values = [0, 1];
            let max = common.max_events;
            let emit = |out: &mut dyn Write, t: Trace| -> anyhow::Result<()> {
                write!(
                    out,
                    "{}",
                    TraceDocument::from_trace(t.expand_calls(), SpecName::Register)
                )?;
                Ok(())
            };
            if *exhaustive {
                let corpus: Box<dyn Iterator<Item = Trace>> = match kind {
                    Kind::Register => Box::new(gen::all_sequences(
                        gen::combined_alphabet(&names, &values),
                        max,
                    )),
                    Kind::Split => Box::new(
                        gen::all_sequences(gen::split_alphabet(&names, &values), max)
                            .filter(Trace::is_unique),
                    ),
                    Kind::Store => Box::new(gen::all_store_traces(&names, &values, max)),
                };
                for t in corpus {
                    emit(out, t)?;
                }
            } else {
                let mut rng = StdRng::seed_from_u64(*seed);
                let alphabet = gen::combined_alphabet(&names, &values);
                for _ in 0..*count {
                    let t = match kind {
                        Kind::Register => {
                            use rand::Rng;
                            let n = rng.gen_range(0..=max);
                            (0..n)
                                .map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone())
                                .collect()
                        }
                        Kind::Split => gen::random_register_history(&mut rng, &names, &values, max),
                        Kind::Store => gen::random_store_trace(&mut rng, &names, &values, max),
                    };
                    emit(out, t)?;
                }
            }
            Ok(EXIT_TRUE)
        }
    }
}

fn report_validity(out: &mut dyn Write, result: Result<(), String>) -> anyhow::Result<u8> {
    Ok(match result {
        Ok(()) => {
            writeln!(out, "# verdict: valid")?;
            EXIT_TRUE
        }
        Err(reason) => {
            writeln!(out, "# verdict: invalid: {reason}")?;
            EXIT_FALSE
        }
    })
}

fn report_verdict(
    out: &mut dyn Write,
    verdict: Verdict,
    input: &TraceDocument,
    spec: SpecName,
) -> anyhow::Result<u8> {
    let word = if verdict.consistent {
        "consistent"
    } else {
        "inconsistent"
    };
    writeln!(out, "# verdict: {word}")?;
    writeln!(
        out,
        "# nodes: {} candidates: {}",
        verdict.stats.nodes, verdict.stats.witnesses
    )?;
    if let Some(w) = verdict.witness {
        writeln!(out, "# witness:")?;
        let mut doc = TraceDocument::from_trace(w, spec);
        // The input's declaration order, plus anything the witness adds.
        let extra: Vec<_> = doc
            .threads
            .drain(..)
            .filter(|t| !input.threads.contains(t))
            .collect();
        doc.threads = input.threads.iter().cloned().chain(extra).collect();
        write!(out, "{doc}")?;
    }
    if let Some(cert) = verdict.certificate {
        write!(out, "{}", document::print_certificate(&cert))?;
        write!(out, "{input}")?;
    }
    Ok(if verdict.consistent {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    })
}
