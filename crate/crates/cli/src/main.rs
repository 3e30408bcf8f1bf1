//! `tplkit`: command-line front end for templates, edge shifts and
//! filtrating-neighborhood bookkeeping.

mod selftest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tplkit_core::filtrating::{
    assemble_boundary, enumerate_patterns, euler_feasible, first_violation, model_of_germ,
    realization_accounting, AttachmentPattern, BoundaryLedger, ManifoldContext, PermutationGroup,
};
use tplkit_core::invariants::{
    bowen_franks, flow_equivalence_certificate, parry_sullivan, periodic_certificate,
    smith_normal_form, InvariantVerdict,
};
use tplkit_core::search::{
    conjugacy_search, flow_equiv_search, germ_equiv_search, SearchBudget, SearchResult, Verdict,
};
use tplkit_core::shift::{
    canonical_form, edge_graph_of, AdjacencyMatrix, Direction, EdgeGraph, VertexGraph,
};
use tplkit_core::template::{slide_move, split_inverse, split_move, thicken, Template};
use tplkit_core::trace::{graph_moves, template_moves, GraphCalculus, MoveTrace};

const BOUNDS_ONLY: &str =
    "bounds-only: patterns satisfy the genus and curve-count bounds; geometric realizability is not checked";

#[derive(Parser)]
#[command(
    name = "tplkit",
    version,
    about = "Templates, edge shifts and filtrating neighborhoods"
)]
struct Cli {
    /// Output format; not every command supports every format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check a TPL v1 template and list every violated invariant.
    Validate { template: PathBuf },
    /// Crush a template to its edge graph.
    Crush { template: PathBuf },
    /// Handlebody genus of a template.
    Genus { template: PathBuf },
    /// Boundary of the thickened template: entrance, exit and dividing curves.
    Thicken { template: PathBuf },
    /// Periodic words of the crushed graph up to a period.
    Orbits {
        template: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=16))]
        period: u64,
    },
    /// Flow-equivalence and conjugacy invariants of MAT v1 matrices.
    #[command(subcommand)]
    Invariants(InvariantsCommand),
    /// Williams surgeries on a 0/1 transition matrix.
    #[command(subcommand)]
    Surgery(SurgeryCommand),
    /// Template moves.
    #[command(subcommand)]
    Moves(MovesCommand),
    /// Attachment patterns allowed by the genus and curve-count bounds.
    Enumerate(EnumerateArgs),
    /// Closed boundary surfaces after attaching a pattern to a template.
    Assemble(AssembleArgs),
    /// Entrance/exit Euler balance of a boundary ledger.
    Euler(LedgerArgs),
    /// The common value r and the symbolic count n for a feasible ledger.
    Account(LedgerArgs),
    /// Bounded search for a move sequence, or an invariant that refutes one.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Edge graph of the vertex graph with the given multiplicity matrix.
    Export {
        matrix: PathBuf,
        /// Relabel to the canonical form.
        #[arg(long)]
        canonical: bool,
    },
    /// Seeded randomized property checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
    },
}

#[derive(Subcommand)]
enum InvariantsCommand {
    /// Parry-Sullivan number det(I - A).
    Ps { matrix: PathBuf },
    /// Bowen-Franks group coker(I - A).
    Bf { matrix: PathBuf },
    /// Smith normal form of I - A.
    Snf { matrix: PathBuf },
    /// Periodic-point counts for periods 1..=max.
    Periodic {
        matrix: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=64))]
        max: u64,
    },
    /// Whether the graph is strongly connected.
    Irreducible { matrix: PathBuf },
    /// Look for an invariant telling two matrices apart.
    Compare {
        first: PathBuf,
        second: PathBuf,
        /// Also compare periodic-point counts up to this period.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=64))]
        max_period: u64,
    },
}

#[derive(Subcommand)]
enum SurgeryCommand {
    /// Out-split a vertex; `--block` lists the successors kept by the first copy.
    OutSplit {
        matrix: PathBuf,
        vertex: String,
        #[arg(long, value_delimiter = ',', required = true)]
        block: Vec<String>,
    },
    /// In-split a vertex; `--block` lists the predecessors kept by the first copy.
    InSplit {
        matrix: PathBuf,
        vertex: String,
        #[arg(long, value_delimiter = ',', required = true)]
        block: Vec<String>,
    },
    /// Merge two vertices produced by a split.
    Amalgamate {
        matrix: PathBuf,
        first: String,
        second: String,
        #[arg(long, value_enum)]
        direction: DirectionArg,
    },
    /// Subdivide an edge by a new vertex.
    Expand {
        matrix: PathBuf,
        from: String,
        to: String,
    },
    /// Remove a vertex with one predecessor and one successor.
    Contract { matrix: PathBuf, vertex: String },
    /// Every applicable move.
    List {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = CalculusArg::Flow)]
        calculus: CalculusArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Out,
    In,
}

#[derive(Clone, Copy, ValueEnum)]
enum CalculusArg {
    Conj,
    Flow,
}

#[derive(Subcommand)]
enum MovesCommand {
    /// Half-turn a branch line with two incoming strips.
    Slide {
        template: PathBuf,
        line: String,
        #[arg(long, default_value_t = 0)]
        slot: usize,
    },
    /// Split a branch line between outgoing slots `cut - 1` and `cut`.
    Split {
        template: PathBuf,
        line: String,
        #[arg(long)]
        cut: usize,
    },
    /// Undo a split, merging two branch lines.
    SplitInverse {
        template: PathBuf,
        first: String,
        second: String,
    },
    /// Canonical relabeling of a template.
    Canonical { template: PathBuf },
    /// Every applicable move.
    List { template: PathBuf },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct EnumerateArgs {
    /// Number of labeled curves, numbered 0..n-1.
    #[arg(long, group = "source", value_parser = clap::value_parser!(u64).range(0..=10))]
    curves: Option<u64>,
    /// Take the curves from a thickened template.
    #[arg(long, group = "source")]
    template: Option<PathBuf>,
    /// Number of S^1 x S^2 summands of the ambient manifold.
    #[arg(long)]
    m: usize,
    /// Permutation group file; one pattern per orbit is listed.
    #[arg(long)]
    mod_symmetry: Option<PathBuf>,
    #[arg(long)]
    count_only: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("which").required(true))]
struct AssembleArgs {
    template: PathBuf,
    /// Pattern as `curves:genus` blocks, e.g. `0,1:0 2:0`.
    #[arg(long, group = "which")]
    pattern: Option<String>,
    /// Use the model pattern: a 2-handle on every curve.
    #[arg(long, group = "which")]
    model: bool,
    /// Report Theorem 4.5 bounds for this m.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args)]
struct LedgerArgs {
    /// Genera of the entrance components.
    #[arg(long, value_delimiter = ',', required = true)]
    entrance: Vec<usize>,
    /// Genera of the exit components.
    #[arg(long, value_delimiter = ',', required = true)]
    exit: Vec<usize>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    states: u64,
    /// Seconds.
    #[arg(long, default_value_t = 30.0, value_parser = positive_seconds)]
    time: f64,
    /// Also write the trace as JSON to this file.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Conjugacy of two edge shifts (splits and amalgamations).
    Conj {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Flow equivalence (adds expansions and contractions).
    Floweq {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Germ equality of two templates (slides, splits and converses).
    Germ {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Replay a JSON trace on a `.mat` or `.tpl` source.
    Replay { source: PathBuf, trace: PathBuf },
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number of seconds")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("TPLKIT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: TPLKIT_THREADS must be a positive integer, found `{threads}`");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Exits with a usage error naming `--format`.
fn unsupported(format: Format) -> ! {
    let name = match format {
        Format::Text => "text",
        Format::Json => "json",
        Format::Dot => "dot",
    };
    Cli::command()
        .error(
            ErrorKind::InvalidValue,
            format!("--format {name} is not supported by this command"),
        )
        .exit()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_template(path: &Path) -> Result<Template> {
    let t =
        Template::parse_tpl(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    t.ensure_valid()
        .with_context(|| format!("{} is not a valid template", path.display()))?;
    Ok(t)
}

fn load_matrix(path: &Path) -> Result<AdjacencyMatrix> {
    AdjacencyMatrix::parse_mat(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Edge graph on vertices `1..=n` from a 0/1 transition matrix.
fn load_graph(path: &Path) -> Result<EdgeGraph> {
    EdgeGraph::from_transition(&load_matrix(path)?).with_context(|| {
        format!(
            "{} is not a 0/1 transition matrix; `tplkit export` converts multiplicity matrices",
            path.display()
        )
    })
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

/// JSON number when it fits in 64 bits, otherwise a string.
fn number(x: impl ToString) -> Value {
    let text = x.to_string();
    text.parse::<i64>().map_or(Value::String(text), Value::from)
}

fn graph_output(g: &EdgeGraph, format: Format, name: &str) -> String {
    match format {
        Format::Text => g.transition_matrix().to_mat(),
        Format::Json => pretty(&g.to_json()),
        Format::Dot => g.to_dot(name),
    }
}

fn template_output(t: &Template, format: Format) -> String {
    match format {
        Format::Text => t.to_tpl(),
        _ => unsupported(format),
    }
}

fn text_or_json(format: Format, text: String, value: Value) -> String {
    match format {
        Format::Text => text,
        Format::Json => pretty(&value),
        Format::Dot => unsupported(format),
    }
}

fn run(cli: &Cli) -> Result<(String, u8)> {
    let format = cli.format;
    let out = match &cli.command {
        Command::Validate { template } => {
            let t = Template::parse_tpl(&read(template)?)
                .with_context(|| format!("parsing {}", template.display()))?;
            let issues = t.validate();
            let text = if issues.is_empty() {
                "valid\n".to_string()
            } else {
                issues.iter().map(|i| format!("{i}\n")).collect()
            };
            let out = text_or_json(
                format,
                text,
                json!({ "valid": issues.is_empty(), "issues": issues }),
            );
            return Ok((out, if issues.is_empty() { 0 } else { 1 }));
        }
        Command::Crush { template } => {
            graph_output(&load_template(template)?.crush()?, format, "crush")
        }
        Command::Genus { template } => {
            let g = load_template(template)?.genus()?;
            text_or_json(format, format!("{g}\n"), json!({ "genus": g }))
        }
        Command::Thicken { template } => {
            let b = thicken(&load_template(template)?)?;
            match format {
                Format::Json => pretty(&b),
                Format::Text => {
                    let mut s =
                        format!("genus {}\ndividing curves {}\n", b.genus, b.dividing_curves);
                    for (side, chi, comps) in [
                        ("entrance", b.euler_entrance, &b.entrance_components),
                        ("exit", b.euler_exit, &b.exit_components),
                    ] {
                        s.push_str(&format!("{side} euler {chi}\n"));
                        for (i, c) in comps.iter().enumerate() {
                            s.push_str(&format!(
                                "  {side} {i}: genus {} punctures {}\n",
                                c.genus, c.punctures
                            ));
                        }
                    }
                    for c in &b.curves {
                        s.push_str(&format!(
                            "curve {}: entrance {} exit {} strip arcs {}\n",
                            c.id, c.entrance, c.exit, c.strip_arcs
                        ));
                    }
                    s
                }
                Format::Dot => unsupported(format),
            }
        }
        Command::Orbits { template, period } => {
            let words = load_template(template)?.symbolic_orbits(*period as usize)?;
            let text = words
                .iter()
                .map(|w| format!("{} {w}\n", w.period()))
                .collect();
            let value = words
                .iter()
                .map(|w| json!({ "period": w.period(), "word": w.symbols() }))
                .collect();
            text_or_json(format, text, Value::Array(value))
        }
        Command::Invariants(cmd) => invariants(cmd, format)?,
        Command::Surgery(cmd) => surgery(cmd, format)?,
        Command::Moves(cmd) => moves(cmd, format)?,
        Command::Enumerate(args) => enumerate(args, format)?,
        Command::Assemble(args) => {
            let b = thicken(&load_template(&args.template)?)?;
            let p = match &args.pattern {
                Some(text) => text.parse::<AttachmentPattern>()?,
                None => model_of_germ(&b),
            };
            let ledger = assemble_boundary(&b, &p)?;
            let feasible = euler_feasible(&ledger);
            let violation = args
                .m
                .and_then(|m| first_violation(&p, ManifoldContext { m }));
            let mut text = format!(
                "pattern {p}\nentrance genera {}\nexit genera {}\neuler feasible {feasible}\n",
                list(&ledger.entrance),
                list(&ledger.exit)
            );
            let mut value = json!({
                "pattern": p.blocks(),
                "entrance": ledger.entrance,
                "exit": ledger.exit,
                "euler_feasible": feasible,
            });
            if let Some(m) = args.m {
                let verdict = violation
                    .as_ref()
                    .map_or("ok".to_string(), ToString::to_string);
                text.push_str(&format!("bounds (m = {m}) {verdict}\n"));
                value["m"] = json!(m);
                value["bounds_ok"] = json!(violation.is_none());
            }
            text_or_json(format, text, value)
        }
        Command::Euler(args) => {
            let l = BoundaryLedger::new(args.entrance.clone(), args.exit.clone());
            let ok = euler_feasible(&l);
            text_or_json(
                format,
                format!("{ok}\n"),
                json!({
                    "euler_feasible": ok,
                    "euler_entrance": l.euler_entrance(),
                    "euler_exit": l.euler_exit(),
                }),
            )
        }
        Command::Account(args) => {
            let l = BoundaryLedger::new(args.entrance.clone(), args.exit.clone());
            let acc = realization_accounting(&l)?;
            text_or_json(
                format,
                format!("r = {}\n{}\n", acc.r_entrance, acc.n),
                json!({
                    "r_entrance": acc.r_entrance,
                    "r_exit": acc.r_exit,
                    "n_formula": acc.n.to_string(),
                    "entrance_terms": acc.n.entrance_terms,
                    "exit_terms": acc.n.exit_terms,
                }),
            )
        }
        Command::Search(cmd) => return search(cmd, format),
        Command::Export { matrix, canonical } => {
            let g = edge_graph_of(&VertexGraph::from_matrix(&load_matrix(matrix)?));
            let g = if *canonical { canonical_form(&g) } else { g };
            graph_output(&g, format, "export")
        }
        Command::Selftest { seed, cases } => {
            let report = selftest::run(*seed, *cases as usize);
            let failed = report.iter().any(|r| r.failure.is_some());
            let text = report.iter().map(|r| format!("{r}\n")).collect();
            let value = report
                .iter()
                .map(|r| json!({ "check": r.name, "cases": r.cases, "failure": r.failure }))
                .collect();
            let out = text_or_json(format, text, Value::Array(value));
            return Ok((out, if failed { 1 } else { 0 }));
        }
    };
    Ok((out, 0))
}

fn list(v: &[usize]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn invariants(cmd: &InvariantsCommand, format: Format) -> Result<String> {
    Ok(match cmd {
        InvariantsCommand::Ps { matrix } => {
            let ps = parry_sullivan(&load_matrix(matrix)?);
            text_or_json(format, format!("{ps}\n"), json!({ "ps": number(&ps) }))
        }
        InvariantsCommand::Bf { matrix } => {
            let bf = bowen_franks(&load_matrix(matrix)?);
            text_or_json(format, format!("{bf}\n"), json!({ "bf": bf.to_json() }))
        }
        InvariantsCommand::Snf { matrix } => {
            let form = smith_normal_form(&load_matrix(matrix)?.identity_minus());
            let diagonal: Vec<String> = form.diagonal.iter().map(ToString::to_string).collect();
            text_or_json(
                format,
                format!(
                    "diagonal {}\nrank {}\ncokernel {}\n",
                    diagonal.join(" "),
                    form.rank,
                    form.cokernel()
                ),
                json!({
                    "diagonal": form.diagonal.iter().map(number).collect::<Vec<_>>(),
                    "rank": form.rank,
                    "cokernel": form.cokernel().to_json(),
                }),
            )
        }
        InvariantsCommand::Periodic { matrix, max } => {
            let a = load_matrix(matrix)?;
            let counts: Vec<_> = (1..=*max as usize)
                .map(|k| a.periodic_point_count(k))
                .collect();
            text_or_json(
                format,
                counts
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{} {c}\n", i + 1))
                    .collect(),
                json!({ "counts": counts.iter().map(number).collect::<Vec<_>>() }),
            )
        }
        InvariantsCommand::Irreducible { matrix } => {
            let irreducible = EdgeGraph::presenting(&load_matrix(matrix)?).is_irreducible();
            text_or_json(
                format,
                format!("{irreducible}\n"),
                json!({ "irreducible": irreducible }),
            )
        }
        InvariantsCommand::Compare {
            first,
            second,
            max_period,
        } => {
            let (a, b) = (load_matrix(first)?, load_matrix(second)?);
            let verdicts = [
                flow_equivalence_certificate(&a, &b),
                periodic_certificate(&a, &b, *max_period as usize),
            ];
            let found = verdicts.into_iter().find_map(|v| match v {
                InvariantVerdict::Distinguished(c) => Some(c),
                InvariantVerdict::Inconclusive => None,
            });
            match found {
                Some(c) => text_or_json(
                    format,
                    format!("distinguished {c}\n"),
                    json!({ "verdict": "distinguished", "certificate": c }),
                ),
                None => text_or_json(
                    format,
                    "inconclusive\n".into(),
                    json!({ "verdict": "inconclusive" }),
                ),
            }
        }
    })
}

fn surgery(cmd: &SurgeryCommand, format: Format) -> Result<String> {
    let g = match cmd {
        SurgeryCommand::OutSplit {
            matrix,
            vertex,
            block,
        } => load_graph(matrix)?.out_split(vertex, block)?,
        SurgeryCommand::InSplit {
            matrix,
            vertex,
            block,
        } => load_graph(matrix)?.in_split(vertex, block)?,
        SurgeryCommand::Amalgamate {
            matrix,
            first,
            second,
            direction,
        } => {
            let direction = match direction {
                DirectionArg::Out => Direction::Out,
                DirectionArg::In => Direction::In,
            };
            load_graph(matrix)?.amalgamate(first, second, direction)?
        }
        SurgeryCommand::Expand { matrix, from, to } => load_graph(matrix)?.expand(from, to)?,
        SurgeryCommand::Contract { matrix, vertex } => load_graph(matrix)?.contract(vertex)?,
        SurgeryCommand::List { matrix, calculus } => {
            let calculus = match calculus {
                CalculusArg::Conj => GraphCalculus::Conjugacy,
                CalculusArg::Flow => GraphCalculus::FlowEquivalence,
            };
            let moves = graph_moves(&load_graph(matrix)?, calculus);
            let steps: Vec<_> = moves.iter().map(|(m, _)| m).collect();
            return Ok(text_or_json(
                format,
                steps
                    .iter()
                    .map(|m| format!("{}\n", step_line(m)))
                    .collect(),
                json!(steps),
            ));
        }
    };
    Ok(graph_output(&g, format, "surgery"))
}

fn step_line(step: &impl serde::Serialize) -> String {
    serde_json::to_string(step).expect("plain data")
}

fn moves(cmd: &MovesCommand, format: Format) -> Result<String> {
    let t = match cmd {
        MovesCommand::Slide {
            template,
            line,
            slot,
        } => slide_move(&load_template(template)?, line, *slot)?,
        MovesCommand::Split {
            template,
            line,
            cut,
        } => split_move(&load_template(template)?, line, *cut)?,
        MovesCommand::SplitInverse {
            template,
            first,
            second,
        } => split_inverse(&load_template(template)?, first, second)?,
        MovesCommand::Canonical { template } => load_template(template)?.canonical_form(),
        MovesCommand::List { template } => {
            let moves = template_moves(&load_template(template)?);
            let steps: Vec<_> = moves.iter().map(|(m, _)| m).collect();
            return Ok(text_or_json(
                format,
                steps
                    .iter()
                    .map(|m| format!("{}\n", step_line(m)))
                    .collect(),
                json!(steps),
            ));
        }
    };
    Ok(template_output(&t, format))
}

fn enumerate(args: &EnumerateArgs, format: Format) -> Result<String> {
    let curves: Vec<usize> = match (&args.curves, &args.template) {
        (Some(n), _) => (0..*n as usize).collect(),
        (None, Some(path)) => thicken(&load_template(path)?)?.curve_ids(),
        (None, None) => unreachable!("clap requires one source"),
    };
    let group = match &args.mod_symmetry {
        Some(path) => {
            let degree = curves.iter().max().map_or(0, |&c| c + 1);
            Some(
                PermutationGroup::parse(&read(path)?, degree)
                    .with_context(|| format!("parsing {}", path.display()))?,
            )
        }
        None => None,
    };
    let ctx = ManifoldContext { m: args.m };
    let patterns = enumerate_patterns(&curves, ctx, group.as_ref())?;
    if args.count_only {
        return Ok(text_or_json(
            format,
            format!("{}\n", patterns.len()),
            json!({ "count": patterns.len(), "m": args.m, "note": BOUNDS_ONLY }),
        ));
    }
    Ok(text_or_json(
        format,
        patterns.iter().map(|p| format!("{p}\n")).collect(),
        json!({
            "note": BOUNDS_ONLY,
            "count": patterns.len(),
            "patterns": patterns.iter().map(|p| p.to_json(ctx)).collect::<Vec<_>>(),
        }),
    ))
}

fn budget(args: &BudgetArgs) -> Result<SearchBudget> {
    Ok(SearchBudget::new(
        args.depth as usize,
        args.states as usize,
        Duration::from_secs_f64(args.time),
    )?)
}

fn search(cmd: &SearchCommand, format: Format) -> Result<(String, u8)> {
    let (result, args) = match cmd {
        SearchCommand::Conj {
            first,
            second,
            budget: b,
        } => (
            conjugacy_search(&load_graph(first)?, &load_graph(second)?, budget(b)?),
            b,
        ),
        SearchCommand::Floweq {
            first,
            second,
            budget: b,
        } => (
            flow_equiv_search(&load_graph(first)?, &load_graph(second)?, budget(b)?),
            b,
        ),
        SearchCommand::Germ {
            first,
            second,
            budget: b,
        } => (
            germ_equiv_search(&load_template(first)?, &load_template(second)?, budget(b)?)?,
            b,
        ),
        SearchCommand::Replay { source, trace } => {
            let trace = MoveTrace::from_json(&read(trace)?)?;
            let out = if source.extension().is_some_and(|e| e == "tpl") {
                template_output(&trace.replay_template(&load_template(source)?)?, format)
            } else {
                graph_output(&trace.replay_graph(&load_graph(source)?)?, format, "replay")
            };
            return Ok((out, 0));
        }
    };
    if let (Some(path), Some(trace)) = (&args.trace_out, result.trace()) {
        fs::write(path, trace.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok((search_output(&result, format), 0))
}

fn search_output(result: &SearchResult, format: Format) -> String {
    let text = match &result.verdict {
        Verdict::Equivalent { trace } => {
            let mut s = format!(
                "EQUIVALENT in {} moves ({} states)\n",
                trace.len(),
                result.states
            );
            for step in &trace.steps {
                s.push_str(&format!("{}\n", step_line(step)));
            }
            s
        }
        Verdict::Distinguished { certificate } => format!("DISTINGUISHED {certificate}\n"),
        Verdict::Unknown { reason } => format!("UNKNOWN {reason} ({} states)\n", result.states),
    };
    match format {
        Format::Text => text,
        Format::Json => pretty(result),
        Format::Dot => unsupported(format),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn seconds_must_be_positive() {
        assert!(positive_seconds("0").is_err());
        assert!(positive_seconds("nan").is_err());
        assert_eq!(positive_seconds("1.5"), Ok(1.5));
    }
}
