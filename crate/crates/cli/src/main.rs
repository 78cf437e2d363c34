use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use treeaut::analysis::{
    check_theorem2, classify, equivalent, essential_chain, essential_inputs_by_pairs, AnalysisError,
};
use treeaut::automaton::{
    parse_automaton, Assignment, AssignmentParseError, Automaton, AutomatonError, CapExceeded,
    RunError, DEFAULT_CAP,
};
use treeaut::campaign::{check_instance, run_campaign, CampaignConfig, CaseOutcome, Property};
use treeaut::genrand::{GenConfig, GenConfigError};
use treeaut::parse::ParseError;
use treeaut::reduce::{minimize, ReduceOptions, ScanOrder};
use treeaut::terms::{parse_term, Term, Var};

/// Tree automata over ranked signatures: runs, essential inputs and tree
/// minimization.
#[derive(Parser)]
#[command(name = "treeaut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the automaton on a term under an assignment.
    Run {
        #[command(flatten)]
        input: Input,
        /// Variable bindings, e.g. `x1=0,x2=1`.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Decide whether some assignment makes the automaton accept the term.
    Accepts {
        #[command(flatten)]
        input: Input,
    },
    /// Report essential, fictive and strongly essential inputs.
    Ess {
        #[command(flatten)]
        input: Input,
    },
    /// Reduce a term to a minimal equivalent one.
    Minimize {
        #[command(flatten)]
        input: Input,
        /// Print every reduction step.
        #[arg(long)]
        trace: bool,
        /// Only replace a subterm by one of its proper subterms.
        #[arg(long)]
        strict_subterm: bool,
        /// Scan candidate reductions in a seeded random order.
        #[arg(long, value_name = "SEED")]
        shuffle: Option<u64>,
    },
    /// Decide whether two terms compute the same state function.
    Equiv {
        #[command(flatten)]
        input: Input,
        /// The term to compare against.
        #[arg(long, value_name = "FILE")]
        other: PathBuf,
    },
    /// Check a property on random instances, or on one given instance.
    Check(CheckArgs),
}

#[derive(Args)]
struct Input {
    #[arg(long, value_name = "FILE")]
    automaton: PathBuf,
    #[arg(long, value_name = "FILE")]
    term: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Largest number of assignments an analysis may enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Route missing transitions to a fresh non-final sink state.
    #[arg(long)]
    complete_with_sink: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// theorem1, theorem2, corollary1, prop1 or oracle-ess.
    property: Property,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    max_states: usize,
    #[arg(long, default_value_t = 2)]
    num_constants: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,2")]
    operator_arities: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    #[arg(long, default_value_t = 3)]
    max_vars: usize,
    #[arg(long, default_value_t = 0.5)]
    final_prob: f64,
    /// Where failing instances are written.
    #[arg(long, value_name = "DIR", default_value = "counterexamples")]
    out_dir: PathBuf,
    /// Check this automaton instead of generating instances.
    #[arg(long, value_name = "FILE", requires = "term")]
    automaton: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "automaton")]
    term: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Automaton {
        path: PathBuf,
        source: AutomatonError,
    },
    #[error("--assign: {0}")]
    Assignment(#[from] AssignmentParseError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Gen(#[from] GenConfigError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Analysis(AnalysisError),
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::CapExceeded(c) => CliError::Cap(c),
            e => CliError::Analysis(e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Cap(_) => 3,
            CliError::Analysis(AnalysisError::TheoremViolation(_)) => 1,
            _ => 2,
        }
    }
}

/// Text printed on stdout and the exit status that goes with it.
struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            failed: false,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn load_automaton(path: &Path, common: &Common) -> Result<Automaton, CliError> {
    let mut def = parse_automaton(&read(path)?).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })?;
    if common.complete_with_sink {
        if let Some(sink) = def.complete_with_sink() {
            eprintln!("note: missing transitions routed to new state `{sink}`");
        }
    }
    def.validate().map_err(|source| CliError::Automaton {
        path: path.into(),
        source,
    })
}

fn load_term(path: &Path, a: &Automaton) -> Result<Term, CliError> {
    parse_term(a.signature(), &read(path)?).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })
}

fn load(input: &Input) -> Result<(Automaton, Term), CliError> {
    let a = load_automaton(&input.automaton, &input.common)?;
    let t = load_term(&input.term, &a)?;
    Ok((a, t))
}

fn list(vars: &[Var]) -> String {
    vars.iter().map(|x| format!(" {x}")).collect()
}

fn verdict(holds: Option<bool>) -> &'static str {
    match holds {
        None => "not applicable",
        Some(true) => "holds",
        Some(false) => "fails",
    }
}

fn cmd_run(input: &Input, assign: &str) -> Result<Output, CliError> {
    let (a, t) = load(input)?;
    let gamma = Assignment::parse(a.signature(), assign)?;
    let q = a.run(&t, &gamma)?;
    let status = if a.is_final(q) { "ACCEPT" } else { "REJECT" };
    Ok(Output::ok(format!("{} {status}\n", a.state_name(q))))
}

fn cmd_accepts(input: &Input) -> Result<Output, CliError> {
    let (a, t) = load(input)?;
    let acc = a.accepts(&t, input.common.cap)?;
    let mut text = String::from(if acc.accepted { "ACCEPT\n" } else { "REJECT\n" });
    if let Some(w) = acc.witness {
        writeln!(text, "witness: {}", w.display(a.signature())).unwrap();
    }
    Ok(Output::ok(text))
}

fn cmd_ess(input: &Input) -> Result<Output, CliError> {
    let (a, t) = load(input)?;
    let cap = input.common.cap;
    let sig = a.signature();
    let split = classify(&a, &t, cap)?;
    let mut text = String::new();
    writeln!(text, "essential:{}", list(&split.essential)).unwrap();
    writeln!(text, "fictive:{}", list(&split.fictive)).unwrap();
    let report = check_theorem2(&a, &t, cap)?;
    if let Some(witnesses) = &report.witnesses {
        writeln!(
            text,
            "strongly-essential:{}",
            list(&report.strongly_essential())
        )
        .unwrap();
        for (x, w) in witnesses {
            match w {
                Some(c) => writeln!(text, "witness {x}: {x} := {}", sig.const_name(*c)).unwrap(),
                None => writeln!(text, "witness {x}: none").unwrap(),
            }
        }
    }
    writeln!(text, "theorem2: {}", verdict(report.theorem2_holds())).unwrap();
    writeln!(text, "corollary1: {}", verdict(report.corollary1_holds())).unwrap();
    for &x in &split.essential {
        let cert = essential_chain(&a, &t, x, cap)?;
        writeln!(text, "chain {x}: {}", cert.display(sig)).unwrap();
    }
    let agree = essential_inputs_by_pairs(&a, &t, cap)? == split.essential;
    writeln!(text, "oracle: {}", if agree { "agree" } else { "disagree" }).unwrap();
    let failed = !agree || report.theorem2_holds() == Some(false);
    Ok(Output { text, failed })
}

fn cmd_minimize(
    input: &Input,
    trace: bool,
    strict_subterm: bool,
    shuffle: Option<u64>,
) -> Result<Output, CliError> {
    let (a, t) = load(input)?;
    let opts = ReduceOptions {
        strict_subterm,
        order: shuffle.map_or(ScanOrder::Canonical, ScanOrder::Shuffled),
    };
    let result = minimize(&a, &t, &opts, input.common.cap)?;
    let sig = a.signature();
    let mut text = String::new();
    if trace {
        writeln!(text, "INITIAL\n{}", result.initial.display(sig)).unwrap();
        text.push_str(&result.to_text(sig));
        text.push_str("FINAL\n");
    }
    writeln!(text, "{}", result.final_term.display(sig)).unwrap();
    Ok(Output::ok(text))
}

fn cmd_equiv(input: &Input, other: &Path) -> Result<Output, CliError> {
    let (a, t) = load(input)?;
    let u = load_term(other, &a)?;
    let same = equivalent(&a, &t, &u, input.common.cap)?;
    Ok(Output::ok(format!(
        "{}\n",
        if same { "equivalent" } else { "not equivalent" }
    )))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn cmd_check(args: &CheckArgs) -> Result<Output, CliError> {
    let cap = args.common.cap;
    if let (Some(aut), Some(term)) = (&args.automaton, &args.term) {
        let a = load_automaton(aut, &args.common)?;
        let t = load_term(term, &a)?;
        let outcome = check_instance(args.property, &a, &t, cap)?;
        let (text, failed) = match outcome {
            CaseOutcome::Skipped => ("skipped".to_string(), false),
            CaseOutcome::Pass => ("pass".to_string(), false),
            CaseOutcome::Fail(detail) => (format!("fail: {detail}"), true),
        };
        return Ok(Output {
            text: format!("{}: {text}\n", args.property),
            failed,
        });
    }
    let gen = GenConfig {
        seed: args.seed,
        max_states: args.max_states,
        num_constants: args.num_constants,
        operator_arities: args.operator_arities.clone(),
        max_depth: args.max_depth,
        max_vars: args.max_vars,
        final_state_probability: args.final_prob,
    };
    gen.validate()?;
    let report = run_campaign(&CampaignConfig {
        property: args.property,
        gen,
        cases: args.cases,
        cap,
    })?;
    let mut text = report.to_text();
    if !report.failures.is_empty() {
        let dir = &args.out_dir;
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        for cx in &report.failures {
            let aut = dir.join(format!("{}.aut", cx.file_stem()));
            let term = dir.join(format!("{}.term", cx.file_stem()));
            write_file(&aut, &cx.automaton_text())?;
            write_file(&term, &cx.term_text())?;
            writeln!(
                text,
                "counterexample: {} {} ({})",
                aut.display(),
                term.display(),
                cx.detail
            )
            .unwrap();
        }
    }
    Ok(Output {
        text,
        failed: !report.failures.is_empty(),
    })
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Run { input, assign } => cmd_run(input, assign),
        Command::Accepts { input } => cmd_accepts(input),
        Command::Ess { input } => cmd_ess(input),
        Command::Minimize {
            input,
            trace,
            strict_subterm,
            shuffle,
        } => cmd_minimize(input, *trace, *strict_subterm, *shuffle),
        Command::Equiv { input, other } => cmd_equiv(input, other),
        Command::Check(args) => cmd_check(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(u8::from(out.failed))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
