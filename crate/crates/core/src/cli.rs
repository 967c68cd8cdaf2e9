//! Command-line front end.
//!
//! Exit codes: 0 success or property holds, 1 property fails, 2 usage error,
//! 3 malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::attack::{run_attack, run_trials};
use crate::bounds::BoundReport;
use crate::characterization::{
    from_graph, from_packing, is_mippc3_by_graph, is_mippc3_by_packing, mippc3_violation,
    separable2_violation, to_graph_with, to_packing, BipartiteGraph, CharacterizationError,
    GeneralizedPacking, PackingError,
};
use crate::code::{
    is_mippc_with, to_binary, trace, Code, CodeError, DescendantSet, Limits, TraceOutcome,
};
use crate::construction::{
    code_from_gq, truncate_a111, truncate_a222, truncate_a333, ConstructionError,
};
use crate::quadrangle::{gq_to_packing, Family, GeneralizedQuadrangle, GqError};

#[derive(Debug, Parser)]
#[command(
    name = "mippc",
    version,
    about = "Construct, verify and trace multimedia IPP codes"
)]
pub struct Cli {
    /// Emit reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the exhaustive kernels.
    #[arg(long, global = true, env = "MIPPC_JOBS")]
    jobs: Option<usize>,
    /// Maximum number of subsets a brute-force check may enumerate.
    #[arg(long, global = true)]
    cap: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a code or quadrangle.
    #[command(subcommand)]
    Construct(Construct),
    /// Check the t-MIPP property of a code.
    Verify {
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        file: PathBuf,
    },
    /// Identify colluders from a descendant set.
    Trace {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        code: PathBuf,
        /// Coordinate sets separated by `;`, symbols by `,`, e.g. "0,1;2".
        #[arg(long, allow_hyphen_values = true)]
        evidence: String,
    },
    /// Simulate the averaging attack on a binary code.
    Attack(AttackArgs),
    /// Size bound for 3-MIPP codes of length 2.
    Bound {
        /// Alphabet size; defaults to that of --code.
        #[arg(long, required_unless_present = "code")]
        q: Option<u64>,
        #[arg(long)]
        code: Option<PathBuf>,
    },
    /// Convert between codes, bipartite graphs and packings.
    Convert {
        #[arg(long, value_enum)]
        to: Format,
        #[arg(long, value_enum, default_value_t = Format::Code)]
        from: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
        file: PathBuf,
    },
    /// Generalized quadrangle utilities.
    #[command(subcommand)]
    Gq(GqCommand),
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// Code (or quadrangle) from a classical generalized quadrangle.
    Gq {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Emit::Code)]
        emit: Emit,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Code from a truncated quadrangle.
    Truncate {
        #[arg(long, value_enum)]
        theorem: Truncation,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Emit::Code)]
        emit: Emit,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum GqCommand {
    /// Check the quadrangle axioms.
    Verify { file: PathBuf },
}

#[derive(Debug, Args)]
struct AttackArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    t: usize,
    /// Comma-separated codeword indices.
    #[arg(long, conflicts_with_all = ["trials", "seed"], value_delimiter = ',')]
    coalition: Option<Vec<usize>>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Fast,
    Graph,
    Packing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    W3,
    T2star,
    Asq,
    DualT2star,
    DualAsq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Truncation {
    A111,
    A222,
    A333,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Code,
    Gq,
    Packing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Code,
    Binary,
    Graph,
    Packing,
}

enum Failure {
    /// Exit 1, message already reported on stdout.
    Property,
    Usage(String),
    Input(String),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Property | Failure::Internal(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
        }
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::SubsetBudget { .. }
            | CodeError::ZeroT
            | CodeError::IndexOutOfRange { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<CharacterizationError> for Failure {
    fn from(e: CharacterizationError) -> Self {
        match e {
            CharacterizationError::Code(e) => e.into(),
            CharacterizationError::PartTooLarge { .. } | CharacterizationError::NotLengthTwo(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<GqError> for Failure {
    fn from(e: GqError) -> Self {
        match e {
            GqError::Verification(_) | GqError::Field(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Gq(e) => e.into(),
            ConstructionError::OutOfRange { .. }
            | ConstructionError::FewerLinesThanPoints { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Context {
    json: bool,
    limits: Limits,
}

impl Context {
    fn report(&self, text: &str, value: Value) {
        if self.json {
            println!("{value}");
        } else {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    ExitCode::from(run(cli))
}

pub fn run(cli: Cli) -> u8 {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return 2;
        }
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let mut limits = Limits::default();
    if let Some(cap) = cli.cap {
        limits.max_subsets = cap;
    }
    let ctx = Context {
        json: cli.json,
        limits,
    };
    let result = match cli.command {
        Command::Construct(c) => construct(c),
        Command::Verify { t, method, file } => verify(&ctx, t, method, &file),
        Command::Trace { t, code, evidence } => trace_cmd(&ctx, t, &code, &evidence),
        Command::Attack(args) => attack(&ctx, args),
        Command::Bound { q, code } => bound(&ctx, q, code.as_deref()),
        Command::Convert {
            to,
            from,
            output,
            file,
        } => convert(to, from, output.as_deref(), &file),
        Command::Gq(GqCommand::Verify { file }) => gq_verify(&ctx, &file),
    };
    match result {
        Ok(()) => 0,
        Err(failure) => {
            match &failure {
                Failure::Property => {}
                Failure::Usage(m) | Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Internal(m) => eprintln!("internal error: {m}"),
            }
            failure.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_code(path: &Path) -> Result<Code, Failure> {
    Code::parse(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::Internal(format!("stdout: {e}")))
        }
    }
}

fn construct(c: Construct) -> Outcome {
    match c {
        Construct::Gq {
            family,
            k,
            emit: what,
            output,
        } => {
            let family = match family {
                FamilyArg::W3 => Family::W3,
                FamilyArg::T2star => Family::T2Star,
                FamilyArg::Asq => Family::As,
                FamilyArg::DualT2star => Family::DualT2Star,
                FamilyArg::DualAsq => Family::DualAs,
            };
            let gq = family.build(k)?;
            let text = match what {
                Emit::Gq => gq.to_string(),
                Emit::Packing => gq_to_packing(&gq)
                    .map_err(|e| Failure::Internal(e.to_string()))?
                    .to_string(),
                Emit::Code => code_from_gq(&gq)?.to_text(),
            };
            emit(output.as_deref(), &text)
        }
        Construct::Truncate {
            theorem,
            k,
            s,
            emit: what,
            output,
        } => {
            let built = match theorem {
                Truncation::A111 => truncate_a111(k, s),
                Truncation::A222 => truncate_a222(k, s),
                Truncation::A333 => truncate_a333(k, s),
            }?;
            let text = match what {
                Emit::Code => built.to_text(),
                Emit::Packing => built.packing.to_string(),
                Emit::Gq => {
                    return Err(Failure::Usage(
                        "a truncation is not a quadrangle; use --emit code or packing".into(),
                    ))
                }
            };
            emit(output.as_deref(), &text)
        }
    }
}

fn verify(ctx: &Context, t: usize, method: Method, file: &Path) -> Outcome {
    let code = read_code(file)?;
    if t == 0 {
        return Err(Failure::Usage("t must be at least 1".into()));
    }
    let method = match method {
        Method::Auto if code.n() == 2 && (t == 2 || t == 3) => Method::Fast,
        Method::Auto => Method::Brute,
        m => m,
    };
    let needs_mippc3 = |name: &str| {
        if code.n() != 2 || t != 3 {
            Err(Failure::Usage(format!(
                "method {name} applies to n = 2, t = 3 only"
            )))
        } else {
            Ok(())
        }
    };
    let mut violation = None;
    let (holds, name) = match method {
        Method::Brute => (is_mippc_with(&code, t, &ctx.limits)?, "brute"),
        Method::Fast => {
            if code.n() != 2 || !(t == 2 || t == 3) {
                return Err(Failure::Usage(
                    "method fast applies to n = 2, t in {2, 3} only".into(),
                ));
            }
            // 2-MIPP coincides with 2-separability.
            violation = if t == 3 {
                mippc3_violation(&code)?
            } else {
                separable2_violation(&code)?
            };
            (violation.is_none(), "fast")
        }
        Method::Graph => {
            needs_mippc3("graph")?;
            (is_mippc3_by_graph(&code)?, "graph")
        }
        Method::Packing => {
            needs_mippc3("packing")?;
            (is_mippc3_by_packing(&code)?, "packing")
        }
        Method::Auto => unreachable!("resolved above"),
    };
    let mut text = format!("{t}-MIPPC: {holds} (method={name})\n");
    if let Some(v) = &violation {
        text.push_str(&format!("violation: {v}\n"));
    }
    ctx.report(
        &text,
        json!({
            "t": t,
            "n": code.n(),
            "M": code.len(),
            "q": code.q(),
            "holds": holds,
            "method": name,
            "violation": violation.map(|v| v.to_string()),
        }),
    );
    if holds {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn trace_cmd(ctx: &Context, t: usize, code: &Path, evidence: &str) -> Outcome {
    let code = read_code(code)?;
    let evidence =
        DescendantSet::parse(evidence).map_err(|e| Failure::Input(format!("evidence: {e}")))?;
    let outcome = match trace(&code, &evidence, t) {
        Ok(o) => o,
        Err(e @ CodeError::NoParentSet { .. }) => return Err(Failure::Input(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    match outcome {
        TraceOutcome::Identified(ids) => {
            let words: Vec<String> = ids
                .iter()
                .map(|&i| {
                    let w: Vec<String> = code.word(i).iter().map(u32::to_string).collect();
                    format!("{i}: {}", w.join(" "))
                })
                .collect();
            let text = if ids.is_empty() {
                "identified: none\n".to_string()
            } else {
                format!("identified:\n{}\n", words.join("\n"))
            };
            ctx.report(&text, json!({ "outcome": "identified", "identified": ids }));
            if ids.is_empty() {
                Err(Failure::Property)
            } else {
                Ok(())
            }
        }
        TraceOutcome::Overflow => {
            ctx.report(
                &format!("overflow: coalition larger than {t}\n"),
                json!({ "outcome": "overflow" }),
            );
            Err(Failure::Property)
        }
    }
}

fn attack(ctx: &Context, args: AttackArgs) -> Outcome {
    let code = read_code(&args.code)?;
    if code.q() != 2 {
        return Err(Failure::Input(format!(
            "attack needs a binary code (alphabet {}); use `convert --to binary` first",
            code.q()
        )));
    }
    if args.t == 0 {
        return Err(Failure::Usage("t must be at least 1".into()));
    }
    let all_succeeded = match args.coalition {
        Some(coalition) => {
            let r = run_attack(&code, &coalition, args.t)?;
            ctx.report(&r.to_string(), r.to_json());
            r.success
        }
        None => {
            let batch = run_trials(&code, args.t, args.trials, args.seed)?;
            ctx.report(&batch.to_string(), batch.to_json());
            batch.successes() == batch.trials.len()
        }
    };
    if all_succeeded {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn bound(ctx: &Context, q: Option<u64>, code: Option<&Path>) -> Outcome {
    let code = code.map(read_code).transpose()?;
    let q = match (q, &code) {
        (Some(q), Some(c)) if q != u64::from(c.q()) => {
            return Err(Failure::Usage(format!(
                "--q {q} differs from the code's alphabet size {}",
                c.q()
            )));
        }
        (Some(q), _) => q,
        (None, Some(c)) => u64::from(c.q()),
        (None, None) => unreachable!("clap requires --q or --code"),
    };
    if q < 2 {
        return Err(Failure::Usage("q must be at least 2".into()));
    }
    if let Some(c) = &code {
        if c.n() != 2 {
            return Err(Failure::Usage(format!(
                "the bound applies to length 2, code has length {}",
                c.n()
            )));
        }
    }
    let report = BoundReport::new(q, code.as_ref());
    ctx.report(
        &report.to_string(),
        serde_json::to_value(&report).expect("plain data"),
    );
    if report.within_bound == Some(false) {
        return Err(Failure::Property);
    }
    Ok(())
}

fn convert(to: Format, from: Format, output: Option<&Path>, file: &Path) -> Outcome {
    let text = read(file)?;
    let input = |e: String| Failure::Input(format!("{}: {e}", file.display()));
    let code = match from {
        Format::Code => Code::parse(&text).map_err(|e| input(e.to_string()))?,
        Format::Graph => {
            from_graph(&BipartiteGraph::parse(&text).map_err(|e| input(e.to_string()))?)?
        }
        Format::Packing => {
            from_packing(&GeneralizedPacking::parse(&text).map_err(|e| input(e.to_string()))?)?
        }
        Format::Binary => {
            return Err(Failure::Usage(
                "binary codes are read with --from code".into(),
            ))
        }
    };
    let out = match to {
        Format::Code => code.to_string(),
        Format::Binary => to_binary(&code).to_string(),
        Format::Graph => to_graph_with(&code, &Limits::default())?.to_string(),
        Format::Packing => match to_packing(&code) {
            Ok(p) => p.to_string(),
            Err(CharacterizationError::Packing(e @ PackingError::PairCoveredTwice(..))) => {
                return Err(Failure::Input(format!(
                    "profile sets do not form a packing: {e}"
                )));
            }
            Err(e) => return Err(e.into()),
        },
    };
    emit(output, &out)
}

fn gq_verify(ctx: &Context, file: &Path) -> Outcome {
    let gq = GeneralizedQuadrangle::parse(&read(file)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let (s, t) = gq.order();
    let result = gq.verify();
    let text = match &result {
        Ok(()) => format!(
            "GQ({s},{t}): valid ({} points, {} lines)\n",
            gq.point_count(),
            gq.line_count()
        ),
        Err(v) => format!("GQ({s},{t}): invalid, axiom {}: {v}\n", v.axiom()),
    };
    ctx.report(
        &text,
        json!({
            "s": s,
            "t": t,
            "points": gq.point_count(),
            "lines": gq.line_count(),
            "valid": result.is_ok(),
            "axiom": result.as_ref().err().map(|v| v.axiom()),
            "violation": result.as_ref().err().map(|v| v.to_string()),
        }),
    );
    result.map_err(|_| Failure::Property)
}
