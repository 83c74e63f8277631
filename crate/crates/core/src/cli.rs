//! The `lexord` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::automata::build_muv;
use crate::error::Error;
use crate::grammar::{normalize, Grammar};
use crate::omega_decision::OmegaDecider;
use crate::omega_word::RegularOmegaWord;
use crate::oracle::{enumerate, load_grammar, predecessor_probe, run_corpus};
use crate::ordertype::{compute_order_type, Budget, OrderType};
use crate::scatteredness::{is_wellordered, Obstruction, WellOrderReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_WELL_ORDERED: i32 = 2;
pub const EXIT_BOUND_EXCEEDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lexord", version, about = "Order types of context-free languages under the lexicographic order")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Show the decision path.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BudgetArgs {
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_depth: u32,
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_iterations: u32,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget {
            max_depth: self.max_depth as usize,
            max_step5_iterations: self.max_iterations as usize,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the normalized grammar.
    Normalize { file: PathBuf },
    /// Scatteredness and well-orderedness.
    Check {
        file: PathBuf,
        /// Write the comparison automaton of every recursive nonterminal into this directory.
        #[arg(long, value_name = "DIR")]
        emit_dot: Option<PathBuf>,
    },
    /// Whether each nonterminal's language has order type omega.
    Omega { file: PathBuf },
    /// Order type of the language.
    Type {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// List the words up to a length, in lexicographic order.
    Enumerate {
        file: PathBuf,
        #[arg(long, short = 'n', default_value_t = 6)]
        length: usize,
        /// Predecessor counts at these ascending cutoffs, e.g. 4,6,8.
        #[arg(long, value_delimiter = ',')]
        probe: Option<Vec<usize>>,
    },
    /// Run a known-answer manifest.
    Corpus {
        manifest: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn at(path: &Path, e: Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("{}: {e}", path.display()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: e.to_string(),
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Normalize { file } => cmd_normalize(cli, file, out),
        Command::Check { file, emit_dot } => cmd_check(cli, file, emit_dot.as_deref(), out),
        Command::Omega { file } => cmd_omega(cli, file, out),
        Command::Type { file, budget } => cmd_type(cli, file, budget.budget(), out),
        Command::Enumerate { file, length, probe } => cmd_enumerate(cli, file, *length, probe.as_deref(), out),
        Command::Corpus { manifest, budget, jobs } => cmd_corpus(cli, manifest, budget.budget(), *jobs, out),
    }
}

fn read(path: &Path) -> Result<Grammar, Failure> {
    load_grammar(path).map_err(|e| Failure::at(path, e))
}

/// The normalized grammar, or `None` with the ε flag when nothing but
/// possibly the empty word remains.
fn normalized(path: &Path) -> Result<Result<Grammar, bool>, Failure> {
    match normalize(&read(path)?) {
        Ok(g) => Ok(Ok(g)),
        Err(Error::EmptyLanguage { epsilon }) => Ok(Err(epsilon)),
        Err(e) => Err(Failure::at(path, e)),
    }
}

fn trivial_language(epsilon: bool) -> &'static str {
    if epsilon {
        "{eps}"
    } else {
        "{}"
    }
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string(value).expect("report serializes");
    writeln!(out, "{text}").map_err(io)
}

fn cmd_normalize(cli: &Cli, file: &Path, out: &mut dyn Write) -> CmdResult {
    match normalized(file)? {
        Ok(g) => {
            if cli.json {
                emit_json(
                    out,
                    &json!({
                        "epsilon": g.epsilon_in_language(),
                        "nonterminals": g.nonterminal_count(),
                        "productions": g.productions().len(),
                        "grammar": g.to_string(),
                    }),
                )?;
            } else {
                if g.epsilon_in_language() {
                    writeln!(out, "# the empty word was removed from the language").map_err(io)?;
                }
                write!(out, "{g}").map_err(io)?;
            }
        }
        Err(epsilon) => {
            if cli.json {
                emit_json(out, &json!({"epsilon": epsilon, "nonterminals": 0, "productions": 0, "grammar": null}))?;
            } else {
                writeln!(out, "# language is {}", trivial_language(epsilon)).map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PairReport {
    to: String,
    residue: String,
}

#[derive(Serialize)]
struct ClassReport {
    repr: String,
    members: Vec<String>,
    u_x: String,
    pairs: Vec<PairReport>,
}

#[derive(Serialize)]
struct CheckReport {
    scattered: bool,
    well_ordered: bool,
    classes: Vec<ClassReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstruction: Option<String>,
}

fn describe_obstruction(g: &Grammar, report: &WellOrderReport) -> Option<String> {
    let scatter = report.scatter.obstruction.as_ref();
    let name = |x| g.name(x).to_string();
    scatter.or(report.obstruction.as_ref()).map(|o| match o {
        Obstruction::CycleWords { x } => format!("cycle words of {} are not powers of one word", name(*x)),
        Obstruction::Residue { x, to } => {
            format!("left contexts from {} to {} have no common residue", name(*x), name(*to))
        }
        Obstruction::AboveSupremum { x, word } => format!(
            "{} derives {}, above its period limit",
            name(*x),
            g.render_word(word)
        ),
        Obstruction::DescendingContext { x, follower } => format!(
            "{} converges to its period limit and is followed by {}, which jumps above it",
            name(*x),
            g.render_word(follower)
        ),
    })
}

fn check_report(g: &Grammar, report: &WellOrderReport) -> CheckReport {
    let classes = report
        .scatter
        .signatures
        .iter()
        .map(|c| {
            let repr = &c.members[0];
            ClassReport {
                repr: g.name(repr.x).to_string(),
                members: c.members.iter().map(|m| g.name(m.x).to_string()).collect(),
                u_x: g.render_word(&repr.u),
                pairs: repr
                    .residues
                    .iter()
                    .map(|(to, r)| PairReport {
                        to: g.name(*to).to_string(),
                        residue: g.render_word(r),
                    })
                    .collect(),
            }
        })
        .collect();
    CheckReport {
        scattered: report.scattered(),
        well_ordered: report.well_ordered(),
        classes,
        obstruction: describe_obstruction(g, report),
    }
}

fn dot_file_name(name: &str) -> String {
    let clean: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("{clean}.dot")
}

fn cmd_check(cli: &Cli, file: &Path, emit_dot: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let g = match normalized(file)? {
        Ok(g) => g,
        Err(_) => {
            let empty = CheckReport {
                scattered: true,
                well_ordered: true,
                classes: Vec::new(),
                obstruction: None,
            };
            if cli.json {
                emit_json(out, &empty)?;
            } else {
                writeln!(out, "scattered: true\nwell-ordered: true").map_err(io)?;
            }
            return Ok(EXIT_OK);
        }
    };
    let report = is_wellordered(&g).map_err(|e| Failure::at(file, e))?;
    let summary = check_report(&g, &report);
    if let Some(dir) = emit_dot {
        std::fs::create_dir_all(dir).map_err(io)?;
        for m in report.scatter.signatures.iter().flat_map(|c| c.members.iter()) {
            let name = g.name(m.x);
            let dfa = build_muv(&RegularOmegaWord::periodic(&m.u), g.alphabet().len());
            std::fs::write(dir.join(dot_file_name(name)), dfa.to_dot(name, g.alphabet())).map_err(io)?;
        }
    }
    if cli.json {
        emit_json(out, &summary)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "scattered: {}", summary.scattered).map_err(io)?;
    writeln!(out, "well-ordered: {}", summary.well_ordered).map_err(io)?;
    for c in &summary.classes {
        let pairs: Vec<String> = c
            .pairs
            .iter()
            .map(|p| format!("{}:{}", p.to, p.residue))
            .collect();
        writeln!(out, "  class {{{}}}: u = {}, residues from {}: {}", c.members.join(", "), c.u_x, c.repr, pairs.join(" "))
            .map_err(io)?;
    }
    if let Some(o) = &summary.obstruction {
        writeln!(out, "reason: {o}").map_err(io)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct OmegaRow {
    nonterminal: String,
    value: crate::omega_decision::OmegaValue,
    witness: Option<String>,
}

fn cmd_omega(cli: &Cli, file: &Path, out: &mut dyn Write) -> CmdResult {
    let g = match normalized(file)? {
        Ok(g) => g,
        Err(epsilon) => {
            if cli.json {
                emit_json(out, &Vec::<OmegaRow>::new())?;
            } else {
                writeln!(out, "language is {}: finite", trivial_language(epsilon)).map_err(io)?;
            }
            return Ok(EXIT_OK);
        }
    };
    let mut decider = OmegaDecider::new(&g);
    let mut rows = Vec::new();
    for x in g.nonterminals() {
        let v = decider.nonterminal_omega(x).map_err(|e| Failure::at(file, e))?;
        rows.push(OmegaRow {
            nonterminal: g.name(x).to_string(),
            value: v.value,
            witness: v.witness,
        });
    }
    if cli.json {
        emit_json(out, &rows)?;
        return Ok(EXIT_OK);
    }
    let width = rows.iter().map(|r| r.nonterminal.len()).max().unwrap_or(0);
    for r in &rows {
        let value = r.value.to_string();
        match (&r.witness, cli.verbose) {
            (Some(w), true) => writeln!(out, "{:width$}  {value:<20}  {w}", r.nonterminal),
            _ => writeln!(out, "{:width$}  {value}", r.nonterminal),
        }
        .map_err(io)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct TypeReport<'a> {
    #[serde(flatten)]
    result: &'a OrderType,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a [String]>,
}

fn cmd_type(cli: &Cli, file: &Path, budget: Budget, out: &mut dyn Write) -> CmdResult {
    let g = read(file)?;
    let report = compute_order_type(&g, budget).map_err(|e| Failure::at(file, e))?;
    if cli.json {
        emit_json(
            out,
            &TypeReport {
                result: &report.result,
                trace: cli.verbose.then_some(report.trace.as_slice()),
            },
        )?;
    } else {
        if cli.verbose {
            for line in &report.trace {
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        match report.result {
            OrderType::BoundExceeded { .. } => writeln!(out, "bound exceeded").map_err(io)?,
            ref o => writeln!(out, "{o}").map_err(io)?,
        }
    }
    Ok(match report.result {
        OrderType::NotWellOrdered { .. } => EXIT_NOT_WELL_ORDERED,
        OrderType::BoundExceeded { .. } => EXIT_BOUND_EXCEEDED,
        _ => EXIT_OK,
    })
}

fn cmd_enumerate(cli: &Cli, file: &Path, length: usize, probe: Option<&[usize]>, out: &mut dyn Write) -> CmdResult {
    let g = read(file)?;
    if let Some(cutoffs) = probe {
        if cutoffs.is_empty() || !cutoffs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "probe cutoffs must be ascending".into(),
            });
        }
        let report = predecessor_probe(&g, cutoffs).map_err(|e| Failure::at(file, e))?;
        if cli.json {
            return emit_json(out, &report).map(|_| EXIT_OK);
        }
        for row in &report.rows {
            let counts: Vec<String> = row.counts.iter().map(|c| c.to_string()).collect();
            let mark = if row.stabilized { "" } else { "  growing" };
            writeln!(out, "{}  {}{mark}", row.word, counts.join(" ")).map_err(io)?;
        }
        return Ok(EXIT_OK);
    }
    let report = enumerate(&g, length).map_err(|e| Failure::at(file, e))?;
    let words: Vec<String> = report.words.iter().map(|w| g.render_word(w)).collect();
    if cli.json {
        emit_json(out, &json!({"cutoff": length, "words": words}))?;
    } else {
        for w in &words {
            writeln!(out, "{w}").map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_corpus(cli: &Cli, manifest: &Path, budget: Budget, jobs: usize, out: &mut dyn Write) -> CmdResult {
    let report = run_corpus(manifest, budget, jobs).map_err(|e| Failure::at(manifest, e))?;
    if cli.json {
        emit_json(out, &report)?;
    } else {
        for o in &report.outcomes {
            let actual = match (&o.actual, &o.error) {
                (Some(a), _) => a.to_string(),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "?".into(),
            };
            let status = if o.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{status} {:<28} expected {}, got {actual} ({} ms)", o.name, o.expected, o.millis)
                .map_err(io)?;
        }
        writeln!(out, "{}/{} passed", report.passed(), report.outcomes.len()).map_err(io)?;
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_USAGE })
}
