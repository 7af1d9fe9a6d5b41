//! `brs`: validate, encode, decode and run bigraphical reactive systems.
//!
//! Exit status: 0 on success or a valid encoding, 1 when the encoding is
//! invalid, 2 on usage or parse errors.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use brs_core::bigraph::{to_dot, Bigraph, Signature};
use brs_core::brsfile::{bigraph_to_literal, parse_spec, BrsSpec};
use brs_core::ccs::{ccs_signature, ccs_to_bigraph, parse_ccs};
use brs_core::mset::text::{multiset_to_text, parse_multiset};
use brs_core::par::Execution;
use brs_core::reaction::{run_brs, Brs, BrsTrace, ExploreStrategy, Successor, Via};
use brs_core::relational::{check_valid, encode, encoding_size, interpret, DEFAULT_GRAPH};

#[derive(Parser)]
#[command(name = "brs", version, about = "Bigraphical reactive systems as multiset rewriting")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode the agent and run the validity rewrite system on it.
    Validate {
        file: PathBuf,
        /// Print every rewrite step.
        #[arg(long)]
        verbose: bool,
    },
    /// Run the reaction rules on the agent.
    React {
        file: PathBuf,
        /// Step bound; defaults to the file's `steps` option, then 10.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
        /// Seed for `--strategy random`; defaults to the file's `seed` option.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ViaArg::Direct)]
        via: ViaArg,
        /// State bound for `--strategy all`.
        #[arg(long)]
        max_states: Option<usize>,
        /// Explore the frontier on one thread.
        #[arg(long)]
        sequential: bool,
        /// Write the state graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the run as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print every reached state as a bigraph literal.
        #[arg(long)]
        show: bool,
    },
    /// Export the agent.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Read a multiset back as a bigraph literal.
    Decode {
        /// Multiset text, one atom per line.
        file: PathBuf,
        /// Controls as `name:arity,...`; defaults to the CCS signature.
        #[arg(long)]
        signature: Option<String>,
    },
    /// Compile a CCS term.
    Ccs {
        term: String,
        #[arg(long, value_enum, default_value_t = CcsFormat::Literal)]
        format: CcsFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    First,
    Random,
    All,
    Interactive,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViaArg {
    Direct,
    Kernel,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Atoms,
    TraceJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum CcsFormat {
    Literal,
    Dot,
    Atoms,
}

/// Failure of a command, split by exit status.
enum Failure {
    Invalid,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn load(path: &Path) -> Result<BrsSpec> {
    let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_spec(&src).map_err(|e| anyhow!("{}:{e}", path.display()))
}

fn agent(spec: &BrsSpec) -> Result<&Bigraph, Failure> {
    match &spec.agent {
        Some(b) => Ok(b),
        None => {
            eprintln!("the agent atoms are not a valid encoding; run `brs validate` for details");
            Err(Failure::Invalid)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_signature(s: &str) -> Result<Signature> {
    let mut sig = Signature::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (c, a) = part
            .split_once(':')
            .ok_or_else(|| anyhow!("expected `control:arity`, got `{part}`"))?;
        let a: u32 = a.trim().parse().with_context(|| format!("arity of `{c}`"))?;
        sig.add(c.trim(), a);
    }
    Ok(sig)
}

fn validate(file: &Path, verbose: bool) -> Result<(), Failure> {
    let spec = load(file)?;
    let report = check_valid(&spec.atoms, &spec.signature);
    println!("atoms: {}", spec.atoms.len());
    if let Some(b) = &spec.agent {
        println!("expected size: {}", encoding_size(b));
    }
    println!("steps: {}", report.trace.len());
    if verbose {
        for s in &report.trace.steps {
            println!("  {}", s.label);
        }
    }
    println!("normal form: {} atoms", report.normal_form.len());
    if report.valid {
        println!("valid");
        Ok(())
    } else {
        println!("invalid");
        for r in &report.reasons {
            println!("  {r}");
        }
        Err(Failure::Invalid)
    }
}

fn choose_interactively(current: &Bigraph, succs: &[Successor]) -> Option<usize> {
    println!(
        "state with {} nodes, {} successors:",
        current.nodes().len(),
        succs.len()
    );
    for (i, s) in succs.iter().enumerate() {
        println!("  [{i}] {} -> {} nodes", s.rule, s.state.nodes().len());
    }
    let stdin = io::stdin();
    loop {
        print!("select (q to stop): ");
        let _ = io::stdout().flush();
        let mut line = String::new();
        if stdin.lock().read_line(&mut line).ok()? == 0 {
            return None;
        }
        let line = line.trim();
        if line == "q" {
            return None;
        }
        match line.parse::<usize>() {
            Ok(k) if k < succs.len() => return Some(k),
            _ => println!("enter an index below {}", succs.len()),
        }
    }
}

fn trace_json(trace: &BrsTrace) -> serde_json::Value {
    let states: Vec<serde_json::Value> = trace
        .states
        .iter()
        .enumerate()
        .map(|(i, b)| {
            serde_json::json!({
                "index": i,
                "nodes": b.nodes().len(),
                "literal": bigraph_to_literal(b),
            })
        })
        .collect();
    serde_json::json!({
        "format": "brs-run 1",
        "via": trace.via,
        "outcome": trace.outcome,
        "states": states,
        "transitions": trace.transitions,
    })
}

#[allow(clippy::too_many_arguments)]
fn react(
    file: &Path,
    steps: Option<usize>,
    strategy: StrategyArg,
    seed: Option<u64>,
    via: ViaArg,
    max_states: Option<usize>,
    sequential: bool,
    dot: Option<&Path>,
    json: Option<&Path>,
    show: bool,
) -> Result<(), Failure> {
    let spec = load(file)?;
    let start = agent(&spec)?;
    let via = match via {
        ViaArg::Direct => Via::Direct,
        ViaArg::Kernel => Via::Kernel,
    };
    let steps = steps.or(spec.options.steps).unwrap_or(10);
    let strategy = match strategy {
        StrategyArg::First => ExploreStrategy::First,
        StrategyArg::Random => ExploreStrategy::Random(seed.or(spec.options.seed).unwrap_or(0)),
        StrategyArg::All => ExploreStrategy::All {
            max_states: max_states.or(spec.options.max_states).unwrap_or(10_000),
        },
        StrategyArg::Interactive => ExploreStrategy::Interactive(Box::new(choose_interactively)),
    };
    let exec = if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let brs = Brs::new(spec.rules.clone(), via);
    let trace = run_brs(start, &brs, strategy, steps, exec).map_err(|e| anyhow!(e))?;
    println!("states: {}", trace.states.len());
    println!("transitions: {}", trace.transitions.len());
    for t in &trace.transitions {
        println!("  {} -[{}]-> {}", t.from, t.rule, t.to);
    }
    if trace.transitions.is_empty() && !brs.enabled(start) {
        println!("no rule matches the agent");
    }
    println!("outcome: {}", serde_json::to_value(trace.outcome).map_err(|e| anyhow!(e))?);
    if show {
        for (i, b) in trace.states.iter().enumerate() {
            println!("state {i}:\n{}", bigraph_to_literal(b));
        }
    }
    if let Some(p) = dot {
        emit(Some(p), &trace.to_dot())?;
    }
    if let Some(p) = json {
        let text = serde_json::to_string_pretty(&trace_json(&trace)).map_err(|e| anyhow!(e))?;
        emit(Some(p), &(text + "\n"))?;
    }
    Ok(())
}

fn export(file: &Path, format: ExportFormat, out: Option<&Path>) -> Result<(), Failure> {
    let spec = load(file)?;
    match format {
        ExportFormat::Dot => emit(out, &to_dot(agent(&spec)?))?,
        ExportFormat::Atoms => emit(out, &multiset_to_text(&spec.atoms))?,
        ExportFormat::TraceJson => {
            let report = check_valid(&spec.atoms, &spec.signature);
            emit(out, &report.trace.to_json_lines())?;
            if !report.valid {
                return Err(Failure::Invalid);
            }
        }
    }
    Ok(())
}

fn decode(file: &Path, signature: Option<&str>) -> Result<(), Failure> {
    let sig = match signature {
        Some(s) => Arc::new(parse_signature(s)?),
        None => ccs_signature(),
    };
    let src = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let m = parse_multiset(&src).map_err(|e| anyhow!("{}: {e}", file.display()))?;
    match interpret(&m, &sig) {
        Ok(b) => {
            print!("{}", bigraph_to_literal(&b));
            Ok(())
        }
        Err(e) => {
            eprintln!("{e}");
            Err(Failure::Invalid)
        }
    }
}

fn ccs(term: &str, format: CcsFormat) -> Result<(), Failure> {
    let t = parse_ccs(term).map_err(|e| anyhow!("column {}: {}", e.col, e.msg))?;
    let b = ccs_to_bigraph(&t);
    let text = match format {
        CcsFormat::Literal => bigraph_to_literal(&b),
        CcsFormat::Dot => to_dot(&b),
        CcsFormat::Atoms => multiset_to_text(&encode(&b, DEFAULT_GRAPH).map_err(|e| anyhow!(e))?),
    };
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Validate { file, verbose } => validate(&file, verbose),
        Cmd::React {
            file,
            steps,
            strategy,
            seed,
            via,
            max_states,
            sequential,
            dot,
            json,
            show,
        } => react(
            &file,
            steps,
            strategy,
            seed,
            via,
            max_states,
            sequential,
            dot.as_deref(),
            json.as_deref(),
            show,
        ),
        Cmd::Export { file, format, out } => export(&file, format, out.as_deref()),
        Cmd::Decode { file, signature } => decode(&file, signature.as_deref()),
        Cmd::Ccs { term, format } => ccs(&term, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_argument() {
        let s = parse_signature("get:1, send:1,sum:0").unwrap();
        assert_eq!(s.arity("sum"), Some(0));
        assert!(parse_signature("get").is_err());
    }

    #[test]
    fn exit_code_for_bad_usage() {
        assert!(Cli::try_parse_from(["brs", "react"]).is_err());
    }
}
