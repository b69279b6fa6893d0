//! `dflag`: complexity of double flag varieties, classification regressions,
//! and tensor product decompositions.
//!
//! Exit status: 0 success, 1 usage or input error, 2 verification diff,
//! 3 internal invariant violation.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use dflag_core::block_model::generic_orbit_complexity;
use dflag_core::char_oracle::CharOracle;
use dflag_core::classifier::{classify_with, diff_report, enumerate_pairs, expected_table, ClassifyOptions, Group};
use dflag_core::complexity::complexity_of_masks;
use dflag_core::parabolic::{
    parse_composition, parse_removed_nodes, ClassicalFamily, ParabolicPair, ParabolicSpec,
};
use dflag_core::rootsys::{Family, RootSystem, RootSystemId, TieBreak};
use dflag_core::tensor_decomp::{
    decompose_example1, decompose_example2, decompose_example2_engine, example1_closed_form, Example2Params,
};
use dflag_core::weights::{DecompositionTerm, Weight};
use dflag_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_DIFF: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "dflag", version, about = "Double flag variety complexity toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complexity of one pair of parabolics.
    Complexity(ComplexityArgs),
    /// All pairs with complexity at most `--cmax`.
    Classify(ClassifyArgs),
    /// Compare classification against the bundled tables.
    VerifyTables(VerifyArgs),
    /// Decompose a bundled tensor product.
    #[command(subcommand)]
    Decompose(DecomposeCommand),
    /// Tensor product by characters.
    Oracle(OracleArgs),
    /// Compare the stripping engine against the matrix orbit oracle.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// SL, SO, Sp, E6, E7, E8, F4 or G2.
    #[arg(long)]
    family: String,
    /// Matrix size for classical families.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Tie {
    Greatest,
    Least,
}

#[derive(Args, Debug)]
struct ComplexityArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Block sizes (`2,2`, `2,2'` for a stroke) or removed simple roots (`a1,a5`).
    #[arg(long)]
    p: String,
    #[arg(long)]
    q: String,
    /// Tie-break between minimal roots of equal height.
    #[arg(long, value_enum, default_value_t = Tie::Greatest)]
    tie: Tie,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, default_value_t = 1)]
    cmax: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    family: String,
    /// A size or an inclusive range `lo..hi`; sizes the family does not admit are skipped.
    #[arg(long)]
    n: Option<String>,
}

#[derive(Subcommand, Debug)]
enum DecomposeCommand {
    /// `V_{pω_1} ⊗ V_{qω_l}` for `Sp_{2l}`.
    Example1 {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long, value_enum, default_value_t = Method::Engine)]
        method: Method,
    },
    /// `V_{m1ω_3} ⊗ V_{m2ω_{q1} + m3ω_{q1+q2}}` for `SL_{q1+q2+q3}`.
    Example2 {
        #[arg(long)]
        q1: usize,
        #[arg(long)]
        q2: usize,
        #[arg(long)]
        q3: usize,
        /// `m1,m2,m3`.
        #[arg(long)]
        m: String,
        #[arg(long, value_enum, default_value_t = Method::Engine)]
        method: Method,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// General divisor-data engine.
    Engine,
    /// Closed-form summation.
    ClosedForm,
    /// Both; a disagreement is an invariant violation.
    Both,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Group as `SL_9`, `Sp_4`, `SO_7` or a root system such as `C2`, `E6`.
    #[arg(long)]
    group: String,
    /// Dynkin labels, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    mu: String,
}

#[derive(Args, Debug)]
struct OracleCheckArgs {
    /// One classical family; all three when omitted.
    #[arg(long)]
    family: Option<String>,
    /// Check a single size.
    #[arg(long)]
    n: Option<usize>,
    /// Largest size when `--n` is absent.
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    /// Number of seeds per pair.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Invariant(_)) {
            EXIT_INVARIANT
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_INVARIANT,
            message: format!("write failed: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CliResult {
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Complexity(args) => cmd_complexity(args, cli.format, &mut out),
        Command::Classify(args) => cmd_classify(args, cli.format, &mut out),
        Command::VerifyTables(args) => cmd_verify(args, cli.format, &mut out),
        Command::Decompose(args) => cmd_decompose(args, cli.format, &mut out),
        Command::Oracle(args) => cmd_oracle(args, cli.format, &mut out),
        Command::OracleCheck(args) => cmd_oracle_check(args, cli.format, &mut out),
    }
}

fn parse_family(name: &str) -> Result<Result<ClassicalFamily, Family>, Failure> {
    if let Ok(f) = name.parse::<ClassicalFamily>() {
        return Ok(Ok(f));
    }
    let id: RootSystemId = name
        .parse()
        .map_err(|_| usage(format!("unknown family '{name}'")))?;
    if !id.family().is_exceptional() {
        return Err(usage(format!(
            "'{name}': use SL, SO or Sp with --n for classical groups"
        )));
    }
    Ok(Err(id.family()))
}

fn resolve_group(args: &GroupArgs) -> Result<Group, Failure> {
    match (parse_family(&args.family)?, args.n) {
        (Ok(f), Some(n)) => Ok(Group::classical(f, n)?),
        (Ok(_), None) => Err(usage("classical families need --n")),
        (Err(f), None) => Ok(Group::exceptional(f)?),
        (Err(_), Some(_)) => Err(usage("--n applies only to classical families")),
    }
}

fn parse_parabolic(group: Group, text: &str) -> Result<ParabolicSpec, Failure> {
    let t = text.trim();
    let removed = t.is_empty() || t.starts_with(['a', 'α', '{']);
    match group {
        Group::Classical { family, n } if !removed => {
            let c = parse_composition(family, t)?;
            if c.n() != n {
                return Err(usage(format!("'{t}' has size {}, expected {n}", c.n())));
            }
            Ok(c.into())
        }
        _ => Ok(parse_removed_nodes(group.root_system(), t)?.into()),
    }
}

fn emit_table(out: &mut impl Write, format: Format, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    match format {
        Format::Json => {
            for row in rows {
                let obj: serde_json::Map<String, serde_json::Value> = header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| {
                        let val = v.parse::<i64>().map_or_else(|_| json!(v), |n| json!(n));
                        (k.to_string(), val)
                    })
                    .collect();
                writeln!(out, "{}", serde_json::Value::Object(obj))?;
            }
        }
        Format::Tsv => {
            writeln!(out, "{}", header.join("\t"))?;
            for row in rows {
                writeln!(out, "{}", row.join("\t"))?;
            }
        }
        Format::Pretty => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(header.to_vec()))?;
            for row in rows {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
        }
    }
    Ok(())
}

fn cmd_complexity(args: &ComplexityArgs, format: Format, out: &mut impl Write) -> CliResult {
    let group = resolve_group(&args.group)?;
    let p = parse_parabolic(group, &args.p)?;
    let q = parse_parabolic(group, &args.q)?;
    let tie = match args.tie {
        Tie::Greatest => TieBreak::LexGreatest,
        Tie::Least => TieBreak::LexLeast,
    };
    let system = RootSystem::new(group.root_system());
    let c = complexity_of_masks(&system, p.to_subset().mask(), q.to_subset().mask(), tie);
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({"group": group.to_string(), "p": p.to_string(), "q": q.to_string(), "complexity": c})
        )?,
        _ => writeln!(out, "{c}")?,
    }
    Ok(0)
}

fn pair_cells(pair: &ParabolicPair) -> [String; 2] {
    [pair.p().to_string(), pair.q().to_string()]
}

fn cmd_classify(args: &ClassifyArgs, format: Format, out: &mut impl Write) -> CliResult {
    let group = resolve_group(&args.group)?;
    let rows = classify_with(group, args.cmax, ClassifyOptions::default())?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let [p, q] = pair_cells(&r.pair);
            vec![group.to_string(), p, q, r.complexity.to_string()]
        })
        .collect();
    emit_table(out, format, &["group", "p", "q", "complexity"], &table)?;
    Ok(0)
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("bad size range '{text}'"));
    match text.split_once("..") {
        Some((a, b)) => {
            let lo = a.trim().parse().map_err(|_| bad())?;
            let hi = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo, hi))
        }
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

fn verify_groups(args: &VerifyArgs) -> Result<Vec<Group>, Failure> {
    match (parse_family(&args.family)?, &args.n) {
        (Err(f), None) => Ok(vec![Group::exceptional(f)?]),
        (Err(_), Some(_)) => Err(usage("--n applies only to classical families")),
        (Ok(_), None) => Err(usage("classical families need --n")),
        (Ok(f), Some(range)) => {
            let (lo, hi) = parse_range(range)?;
            let groups: Vec<Group> = (lo..=hi).filter_map(|n| Group::classical(f, n).ok()).collect();
            if groups.is_empty() {
                return Err(usage(format!("no valid {f} sizes in {range}")));
            }
            Ok(groups)
        }
    }
}

fn cmd_verify(args: &VerifyArgs, format: Format, out: &mut impl Write) -> CliResult {
    let groups = verify_groups(args)?;
    let reports: Vec<_> = groups
        .par_iter()
        .map(|&g| -> Result<_, Error> {
            let actual = classify_with(g, 1, ClassifyOptions::default())?;
            let expected = expected_table(g)?;
            Ok((g, actual.len(), expected.rows.len(), diff_report(&actual, &expected)))
        })
        .collect::<Result<_, _>>()?;
    let mut any_diff = false;
    let mut table = Vec::new();
    for (g, computed, expected, report) in &reports {
        any_diff |= !report.is_empty();
        let push = |table: &mut Vec<Vec<String>>, kind: &str, pair: String, c: String, e: String, l: String| {
            table.push(vec![g.to_string(), kind.to_string(), pair, c, e, l]);
        };
        for (kind, lines) in [
            ("missing", &report.missing),
            ("unexpected", &report.unexpected),
            ("mismatch", &report.mismatched),
        ] {
            for l in lines {
                let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
                push(&mut table, kind, l.pair.to_string(), show(l.actual), show(l.expected), l.labels.join("; "));
            }
        }
        for c in &report.conflicts {
            push(&mut table, "conflict", String::new(), "-".into(), "-".into(), c.clone());
        }
        push(
            &mut table,
            if report.is_empty() { "ok" } else { "diff" },
            String::new(),
            computed.to_string(),
            expected.to_string(),
            String::new(),
        );
    }
    emit_table(out, format, &["group", "kind", "pair", "computed", "expected", "labels"], &table)?;
    Ok(if any_diff { EXIT_DIFF } else { 0 })
}

fn emit_terms(out: &mut impl Write, format: Format, terms: &[DecompositionTerm]) -> io::Result<()> {
    match format {
        Format::Json => {
            for t in terms {
                writeln!(
                    out,
                    "{}",
                    json!({"weight": t.highest_weight.labels(), "multiplicity": t.multiplicity})
                )?;
            }
        }
        Format::Tsv => {
            writeln!(out, "weight\tmultiplicity")?;
            for t in terms {
                writeln!(out, "{}\t{}", t.highest_weight, t.multiplicity)?;
            }
        }
        Format::Pretty => {
            for t in terms {
                writeln!(out, "{} x{}", t.highest_weight, t.multiplicity)?;
            }
        }
    }
    Ok(())
}

fn by_method(
    method: Method,
    engine: impl FnOnce() -> dflag_core::Result<Vec<DecompositionTerm>>,
    closed: impl FnOnce() -> dflag_core::Result<Vec<DecompositionTerm>>,
) -> Result<Vec<DecompositionTerm>, Failure> {
    Ok(match method {
        Method::Engine => engine()?,
        Method::ClosedForm => closed()?,
        Method::Both => {
            let (a, b) = (engine()?, closed()?);
            if a != b {
                return Err(Error::Invariant("engine and closed form disagree".into()).into());
            }
            a
        }
    })
}

fn cmd_decompose(args: &DecomposeCommand, format: Format, out: &mut impl Write) -> CliResult {
    let terms = match args {
        DecomposeCommand::Example1 { l, p, q, method } => by_method(
            *method,
            || decompose_example1(*l, *p, *q),
            || example1_closed_form(*l, *p, *q),
        )?,
        DecomposeCommand::Example2 { q1, q2, q3, m, method } => {
            let ms: Vec<i64> = m
                .split(',')
                .map(|x| x.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| usage(format!("--m expects m1,m2,m3, got '{m}'")))?;
            let ms: [i64; 3] = ms
                .try_into()
                .map_err(|_| usage(format!("--m expects three values, got '{m}'")))?;
            let params = Example2Params::new([*q1, *q2, *q3], ms)?;
            by_method(
                *method,
                || decompose_example2_engine(params),
                || decompose_example2(params),
            )?
        }
    };
    emit_terms(out, format, &terms)?;
    Ok(0)
}

fn oracle_system(text: &str) -> Result<RootSystemId, Failure> {
    if let Ok(g) = text.parse::<Group>() {
        return Ok(g.root_system());
    }
    text.parse::<RootSystemId>()
        .map_err(|_| usage(format!("unknown group '{text}'")))
}

fn cmd_oracle(args: &OracleArgs, format: Format, out: &mut impl Write) -> CliResult {
    let id = oracle_system(&args.group)?;
    let lambda: Weight = args.lambda.parse()?;
    let mu: Weight = args.mu.parse()?;
    let oracle = CharOracle::new(id)?;
    oracle.lattice().check_dominant(&lambda)?;
    oracle.lattice().check_dominant(&mu)?;
    let terms = oracle.tensor(&lambda, &mu)?;
    emit_terms(out, format, &terms)?;
    Ok(0)
}

fn cmd_oracle_check(args: &OracleCheckArgs, format: Format, out: &mut impl Write) -> CliResult {
    let families: Vec<ClassicalFamily> = match &args.family {
        Some(name) => match parse_family(name)? {
            Ok(f) => vec![f],
            Err(_) => return Err(usage("the matrix oracle covers SL, SO and Sp only")),
        },
        None => vec![ClassicalFamily::SL, ClassicalFamily::SO, ClassicalFamily::Sp],
    };
    if args.seeds == 0 {
        return Err(usage("--seeds must be positive"));
    }
    let sizes: Vec<usize> = match args.n {
        Some(n) => vec![n],
        None => (2..=args.max_n).collect(),
    };
    let groups: Vec<Group> = families
        .iter()
        .flat_map(|&f| sizes.iter().filter_map(move |&n| Group::classical(f, n).ok()))
        .collect();
    if groups.is_empty() {
        return Err(usage("no valid group for the given sizes"));
    }
    let mut table = Vec::new();
    let mut disagreements = 0usize;
    for g in groups {
        let system = RootSystem::new(g.root_system());
        let pairs = enumerate_pairs(g)?;
        let results: Vec<(ParabolicPair, usize, Vec<usize>)> = pairs
            .into_par_iter()
            .map(|pair| -> Result<_, Error> {
                let engine = complexity_of_masks(
                    &system,
                    pair.p().to_subset().mask(),
                    pair.q().to_subset().mask(),
                    TieBreak::default(),
                );
                let (ParabolicSpec::Blocks(p), ParabolicSpec::Blocks(q)) = (pair.p(), pair.q()) else {
                    return Err(Error::Invariant(format!("{pair} is not in block form")));
                };
                let oracle = (0..args.seeds)
                    .map(|s| generic_orbit_complexity(p, q, args.seed + s))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((pair, engine, oracle))
            })
            .collect::<Result<_, _>>()?;
        let bad: Vec<_> = results.iter().filter(|(_, e, o)| o.iter().any(|x| x != e)).collect();
        disagreements += bad.len();
        for (pair, e, o) in &bad {
            let [p, q] = pair_cells(pair);
            let seen: Vec<String> = o.iter().map(usize::to_string).collect();
            table.push(vec![g.to_string(), "disagree".into(), p, q, e.to_string(), seen.join(",")]);
        }
        table.push(vec![
            g.to_string(),
            if bad.is_empty() { "ok" } else { "diff" }.into(),
            String::new(),
            String::new(),
            results.len().to_string(),
            String::new(),
        ]);
    }
    emit_table(out, format, &["group", "kind", "p", "q", "engine", "oracle"], &table)?;
    Ok(if disagreements > 0 { EXIT_DIFF } else { 0 })
}
