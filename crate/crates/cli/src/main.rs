//! Command-line front end: proving, translating, solving, checking, and the
//! bound ladder, over the text formats of the core library.
//!
//! Exit codes: 0 for a positive outcome (provable, witness found, valid,
//! agreement), 1 for a negative outcome, 2 for usage, parse, or shape
//! errors, 3 for exhausted budgets or exploding translations.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relog_core::bounds::{cap_meets, completeness_bounds};
use relog_core::formula::{parse_formula, render_formula, Formula};
use relog_core::fr::{
    check_fr_proof, fr_prove_with_budget, validate_fr_proof, FocusSequent, DEFAULT_FR_BUDGET,
};
use relog_core::lr::{
    check_lr_proof, lr_prove_with_budget, validate_lr_proof, Sequent, DEFAULT_LR_BUDGET,
};
use relog_core::bvass::{
    validate_bvas_cover_witness, validate_cover_witness, validate_reach_witness,
};
use relog_core::reductions::{
    bvas_to_bvass, bvass_to_bvas, comprehensive_to_formula, coverability_to_comprehensive,
    expansive_to_coverability, formula_to_bvass, to_ordinary, SideMap,
};
use relog_core::solvers::{solve_coverability, solve_reachability, DEFAULT_SOLVER_BUDGET};
use relog_core::textio::{
    parse_bvas_instance, parse_bvas_tree, parse_cover_instance, parse_deduction_tree,
    parse_fr_proof, parse_lr_proof, parse_reach_instance, parse_sequent, render_bvas_instance,
    render_cover_instance, render_deduction_tree, render_fr_proof, render_lr_proof,
    render_reach_instance, render_side_map,
};
use relog_core::{CheckFailure, Error};

#[derive(Parser)]
#[command(name = "relog", version, about = "Prover and counter-system toolkit for implicational relevance logic")]
struct Cli {
    /// Output format for result lines.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Calculus {
    /// Unfocused sequent search.
    Lr,
    /// Focused search; decides the same judgements.
    Fr,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TranslateKind {
    /// Formula file to an expansive reachability instance.
    FormulaToBvass,
    /// Ordinary expansive reachability to plain coverability.
    ExpToCov,
    /// Ordinary coverability to comprehensive reachability.
    CovToCompr,
    /// Ordinary comprehensive reachability to a formula.
    ComprToFormula,
    /// Stateful coverability to a stateless instance.
    BvassToBvas,
    /// Stateless instance back to stateful coverability.
    BvasToBvass,
    /// Normalize unary rules to unit vectors, keeping root, leaf, and mode.
    ToOrdinary,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveKind {
    /// Some vector at the root state, plain reading.
    Cover,
    /// Exactly zero at the root state, under the instance's mode.
    Reach,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    /// A sequent proof file.
    LrProof,
    /// A focused proof file.
    FrProof,
    /// A deduction tree against a coverability instance.
    Cover,
    /// A deduction tree against a reachability instance.
    Reach,
    /// A stateless tree against a stateless instance.
    Bvas,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a formula or sequent (text with `|-` is read as a sequent).
    Prove(ProveArgs),
    /// Apply one of the instance translations; writes the output file and a
    /// `<output>.map` sidecar explaining introduced names.
    Translate {
        kind: TranslateKind,
        input: PathBuf,
        output: PathBuf,
    },
    /// Search for a witness within a coordinate cap.
    Solve {
        kind: SolveKind,
        input: PathBuf,
        /// Largest coordinate value allowed anywhere in the witness.
        #[arg(long)]
        cap: u64,
        #[arg(long)]
        budget: Option<u64>,
        /// Print the witness tree after the verdict line.
        #[arg(long)]
        emit_witness: bool,
        /// Write the witness tree to a file instead.
        #[arg(long, value_name = "FILE")]
        witness_out: Option<PathBuf>,
    },
    /// Validate a proof or witness file.
    Check {
        kind: CheckKind,
        file: PathBuf,
        /// Instance file the witness is checked against (witness kinds only).
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Print the completeness bound ladder L, H, B for a stateless instance.
    Bounds {
        input: PathBuf,
        /// Also report whether this cap reaches the conclusive bound B.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Cross-check a formula: focused proving against the coverability
    /// pipeline at a cap.
    Roundtrip {
        input: PathBuf,
        #[arg(long)]
        cap: u64,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Args)]
struct ProveArgs {
    /// Formula or sequent text; with --file, a path to read instead.
    input: String,
    #[arg(long, value_enum, default_value_t = Calculus::Lr)]
    calculus: Calculus,
    /// Treat the input as a file path.
    #[arg(long)]
    file: bool,
    /// Print the proof after the verdict line.
    #[arg(long)]
    emit_proof: bool,
    /// Write the proof to a file instead.
    #[arg(long, value_name = "FILE")]
    proof_out: Option<PathBuf>,
    /// Search budget in visited nodes.
    #[arg(long)]
    budget: Option<u64>,
}

const EXIT_POSITIVE: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.format, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ResourceLimit(_) | Error::CapOverflow(_) | Error::StateExplosion(_) => {
                EXIT_RESOURCE
            }
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

/// First content line of a formula file: blank lines and `#` comments skip.
fn parse_formula_file(text: &str) -> Result<Formula, Error> {
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        return parse_formula(trimmed);
    }
    Err(Error::Syntax { position: 0, expected: "a formula line".to_string() })
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn run(format: Format, command: Command) -> Result<u8, Failure> {
    match command {
        Command::Prove(args) => prove(format, args),
        Command::Translate { kind, input, output } => translate(format, kind, &input, &output),
        Command::Solve { kind, input, cap, budget, emit_witness, witness_out } => {
            solve(format, kind, &input, cap, budget, emit_witness, witness_out.as_deref())
        }
        Command::Check { kind, file, instance } => check(format, kind, &file, instance.as_deref()),
        Command::Bounds { input, cap } => bounds(format, &input, cap),
        Command::Roundtrip { input, cap, budget } => roundtrip(format, &input, cap, budget),
    }
}

fn prove(format: Format, args: ProveArgs) -> Result<u8, Failure> {
    let text = if args.file {
        read_text(Path::new(&args.input))?
    } else {
        args.input.clone()
    };
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    let sequent = if line.contains("|-") {
        parse_sequent(line)?
    } else {
        Sequent::goal(parse_formula(line)?)
    };

    enum AnyProof {
        Lr(relog_core::lr::LrProof),
        Fr(relog_core::fr::FrProof),
    }

    let (provable, proof) = match args.calculus {
        Calculus::Lr => {
            let budget = args.budget.unwrap_or(DEFAULT_LR_BUDGET);
            let outcome = lr_prove_with_budget(&sequent, budget)?;
            match outcome.into_proof() {
                Some(p) => (true, Some(AnyProof::Lr(p))),
                None => (false, None),
            }
        }
        Calculus::Fr => {
            let budget = args.budget.unwrap_or(DEFAULT_FR_BUDGET);
            let goal = FocusSequent::unfocused(sequent.antecedent, sequent.succedent);
            let outcome = fr_prove_with_budget(&goal, budget)?;
            match outcome.into_proof() {
                Some(p) => (true, Some(AnyProof::Fr(p))),
                None => (false, None),
            }
        }
    };

    let nodes = match &proof {
        Some(AnyProof::Lr(p)) => Some(p.node_count()),
        Some(AnyProof::Fr(p)) => Some(p.node_count()),
        None => None,
    };
    match format {
        Format::Text => match nodes {
            Some(n) => println!("PROVABLE ({n} nodes)"),
            None => println!("NOT_PROVABLE"),
        },
        Format::Json => match nodes {
            Some(n) => println!("{{\"verdict\":\"PROVABLE\",\"nodes\":{n}}}"),
            None => println!("{{\"verdict\":\"NOT_PROVABLE\"}}"),
        },
    }
    if let Some(p) = proof {
        let rendered = match &p {
            AnyProof::Lr(p) => render_lr_proof(p),
            AnyProof::Fr(p) => render_fr_proof(p),
        };
        if let Some(path) = &args.proof_out {
            write_text(path, &rendered)?;
        } else if args.emit_proof {
            print!("{rendered}");
        }
    } else if args.emit_proof || args.proof_out.is_some() {
        eprintln!("note: nothing to emit for an unprovable goal");
    }
    Ok(if provable { EXIT_POSITIVE } else { EXIT_NEGATIVE })
}

fn write_with_map(output: &Path, body: &str, map: &SideMap) -> Result<(), Failure> {
    write_text(output, body)?;
    let mut map_path = output.as_os_str().to_owned();
    map_path.push(".map");
    write_text(Path::new(&map_path), &render_side_map(map))
}

fn translate(
    format: Format,
    kind: TranslateKind,
    input: &Path,
    output: &Path,
) -> Result<u8, Failure> {
    let text = read_text(input)?;
    match kind {
        TranslateKind::FormulaToBvass => {
            let f = parse_formula_file(&text)?;
            let (inst, map) = formula_to_bvass(&f)?;
            write_with_map(output, &render_reach_instance(&inst), &map)?;
        }
        TranslateKind::ExpToCov => {
            let inst = parse_reach_instance(&text)?;
            let (cover, map) = expansive_to_coverability(&inst)?;
            write_with_map(output, &render_cover_instance(&cover), &map)?;
        }
        TranslateKind::CovToCompr => {
            let inst = parse_cover_instance(&text)?;
            let (reach, map) = coverability_to_comprehensive(&inst)?;
            write_with_map(output, &render_reach_instance(&reach), &map)?;
        }
        TranslateKind::ComprToFormula => {
            let inst = parse_reach_instance(&text)?;
            let (f, map) = comprehensive_to_formula(&inst)?;
            write_with_map(output, &format!("{}\n", render_formula(&f)), &map)?;
        }
        TranslateKind::BvassToBvas => {
            let inst = parse_cover_instance(&text)?;
            let (stateless, map) = bvass_to_bvas(&inst)?;
            write_with_map(output, &render_bvas_instance(&stateless), &map)?;
        }
        TranslateKind::BvasToBvass => {
            let inst = parse_bvas_instance(&text)?;
            let (cover, map) = bvas_to_bvass(&inst.system, &inst.root, &inst.leaf)?;
            write_with_map(output, &render_cover_instance(&cover), &map)?;
        }
        TranslateKind::ToOrdinary => {
            let inst = parse_reach_instance(&text)?;
            let (system, map) = to_ordinary(&inst.system)?;
            let out = relog_core::bvass::ReachInstance {
                system,
                root_state: inst.root_state,
                leaf_state: inst.leaf_state,
                mode: inst.mode,
            };
            write_with_map(output, &render_reach_instance(&out), &map)?;
        }
    }
    match format {
        Format::Text => println!("wrote {} and {}.map", output.display(), output.display()),
        Format::Json => println!(
            "{{\"status\":\"ok\",\"output\":{},\"map\":{}}}",
            json_str(&output.display().to_string()),
            json_str(&format!("{}.map", output.display())),
        ),
    }
    Ok(EXIT_POSITIVE)
}

fn solve(
    format: Format,
    kind: SolveKind,
    input: &Path,
    cap: u64,
    budget: Option<u64>,
    emit_witness: bool,
    witness_out: Option<&Path>,
) -> Result<u8, Failure> {
    let text = read_text(input)?;
    let budget = budget.unwrap_or(DEFAULT_SOLVER_BUDGET);
    let (system, solved) = match kind {
        SolveKind::Cover => {
            let inst = parse_cover_instance(&text)?;
            let solved = solve_coverability(&inst, cap, budget)?;
            (inst.system, solved)
        }
        SolveKind::Reach => {
            let inst = parse_reach_instance(&text)?;
            let solved = solve_reachability(&inst, cap, budget)?;
            (inst.system, solved)
        }
    };
    match solved.witness() {
        Some(tree) => {
            match format {
                Format::Text => println!("WITNESS ({} nodes)", tree.node_count()),
                Format::Json => println!(
                    "{{\"verdict\":\"WITNESS\",\"nodes\":{}}}",
                    tree.node_count()
                ),
            }
            let rendered = render_deduction_tree(&system, tree);
            if let Some(path) = witness_out {
                write_text(path, &rendered)?;
            } else if emit_witness {
                print!("{rendered}");
            }
            Ok(EXIT_POSITIVE)
        }
        None => {
            match format {
                Format::Text => println!("NO_WITNESS_WITHIN_CAP"),
                Format::Json => println!("{{\"verdict\":\"NO_WITNESS_WITHIN_CAP\"}}"),
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn report_check(format: Format, outcome: Result<(), CheckFailure>) -> u8 {
    match outcome {
        Ok(()) => {
            match format {
                Format::Text => println!("VALID"),
                Format::Json => println!("{{\"verdict\":\"VALID\"}}"),
            }
            EXIT_POSITIVE
        }
        Err(fail) => {
            match format {
                Format::Text => println!("INVALID at {:?}: {}", fail.path, fail.reason),
                Format::Json => println!(
                    "{{\"verdict\":\"INVALID\",\"path\":{:?},\"reason\":{}}}",
                    fail.path,
                    json_str(&fail.reason)
                ),
            }
            EXIT_NEGATIVE
        }
    }
}

fn check(
    format: Format,
    kind: CheckKind,
    file: &Path,
    instance: Option<&Path>,
) -> Result<u8, Failure> {
    let text = read_text(file)?;
    let need_instance = || {
        instance.ok_or_else(|| Failure::usage("this kind needs --instance <FILE>"))
    };
    let code = match kind {
        CheckKind::LrProof => {
            let proof = parse_lr_proof(&text)?;
            debug_assert_eq!(check_lr_proof(&proof), validate_lr_proof(&proof).is_ok());
            report_check(format, validate_lr_proof(&proof))
        }
        CheckKind::FrProof => {
            let proof = parse_fr_proof(&text)?;
            debug_assert_eq!(check_fr_proof(&proof), validate_fr_proof(&proof).is_ok());
            report_check(format, validate_fr_proof(&proof))
        }
        CheckKind::Cover => {
            let inst = parse_cover_instance(&read_text(need_instance()?)?)?;
            let tree = parse_deduction_tree(&inst.system, &text)?;
            report_check(format, validate_cover_witness(&inst, &tree))
        }
        CheckKind::Reach => {
            let inst = parse_reach_instance(&read_text(need_instance()?)?)?;
            let tree = parse_deduction_tree(&inst.system, &text)?;
            report_check(format, validate_reach_witness(&inst, &tree))
        }
        CheckKind::Bvas => {
            let inst = parse_bvas_instance(&read_text(need_instance()?)?)?;
            let tree = parse_bvas_tree(&text)?;
            report_check(format, validate_bvas_cover_witness(&inst, &tree))
        }
    };
    Ok(code)
}

fn bounds(format: Format, input: &Path, cap: Option<u64>) -> Result<u8, Failure> {
    let inst = parse_bvas_instance(&read_text(input)?)?;
    let triple = completeness_bounds(&inst.system, &inst.root);
    let meets = cap.map(|c| cap_meets(&c.into(), &triple.b));
    match format {
        Format::Text => {
            println!("L = {}", triple.l);
            println!("H = {}", triple.h);
            println!("B = {}", triple.b);
            if let Some(m) = meets {
                println!("cap {} the conclusive bound", if m { "meets" } else { "is below" });
            }
        }
        Format::Json => {
            let tail = match meets {
                Some(m) => format!(",\"cap_meets\":{m}"),
                None => String::new(),
            };
            println!(
                "{{\"l\":{},\"h\":{},\"b\":{}{tail}}}",
                json_str(&triple.l.to_string()),
                json_str(&triple.h.to_string()),
                json_str(&triple.b.to_string()),
            );
        }
    }
    Ok(EXIT_POSITIVE)
}

fn roundtrip(format: Format, input: &Path, cap: u64, budget: Option<u64>) -> Result<u8, Failure> {
    let f = parse_formula_file(&read_text(input)?)?;
    let provable = fr_prove_with_budget(
        &FocusSequent::goal(f.clone()),
        budget.unwrap_or(DEFAULT_FR_BUDGET),
    )?
    .is_provable();
    let (reach, _) = formula_to_bvass(&f)?;
    let (cover, _) = expansive_to_coverability(&reach)?;
    let covered = solve_coverability(&cover, cap, budget.unwrap_or(DEFAULT_SOLVER_BUDGET))?
        .is_witness();
    let agree = provable == covered;
    let cover_word = if covered { "YES" } else { "NO" };
    let formula_word = if provable { "PROVABLE" } else { "NOT_PROVABLE" };
    match format {
        Format::Text => println!(
            "{} cover={} formula={}",
            if agree { "AGREE" } else { "DISAGREE" },
            cover_word,
            formula_word
        ),
        Format::Json => println!(
            "{{\"agree\":{agree},\"cover\":{},\"formula\":{}}}",
            json_str(cover_word),
            json_str(formula_word)
        ),
    }
    Ok(if agree { EXIT_POSITIVE } else { EXIT_NEGATIVE })
}
