//! Exhaustive classification of parabolic pairs and regression against the
//! bundled complexity 0 and 1 tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexity::{complexity_of_masks, dimension_lower_bound_masks};
use crate::error::{Error, Result};
use crate::parabolic::{
    all_compositions, BlockComposition, ClassicalFamily, ParabolicPair, ParabolicSpec,
    SimpleRootSubset,
};
use crate::rootsys::{Family, RootSystem, RootSystemId, TieBreak};

const CLASSICAL_TABLES: &str = include_str!("../data/classical_tables.toml");
const EXCEPTIONAL_TABLES: &str = include_str!("../data/exceptional_tables.toml");

/// A simple group: a classical matrix group of size `n` or an exceptional type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    Classical { family: ClassicalFamily, n: usize },
    Exceptional(RootSystemId),
}

impl Group {
    pub fn classical(family: ClassicalFamily, n: usize) -> Result<Self> {
        family.root_system(n)?;
        Ok(Group::Classical { family, n })
    }

    pub fn exceptional(family: Family) -> Result<Self> {
        Ok(Group::Exceptional(RootSystemId::exceptional(family)?))
    }

    pub fn root_system(&self) -> RootSystemId {
        match *self {
            Group::Classical { family, n } => family.root_system(n).expect("validated"),
            Group::Exceptional(id) => id,
        }
    }

    /// All parabolics containing the Borel, in this group's encoding.
    pub fn parabolics(&self) -> Result<Vec<ParabolicSpec>> {
        match *self {
            Group::Classical { family, n } => Ok(all_compositions(family, n)?
                .into_iter()
                .map(ParabolicSpec::Blocks)
                .collect()),
            Group::Exceptional(id) => (0..1u64 << id.rank())
                .map(|m| SimpleRootSubset::new(id, m).map(ParabolicSpec::Subset))
                .collect(),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Classical { family, n } => write!(f, "{family}_{n}"),
            Group::Exceptional(id) => write!(f, "{id}"),
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    /// `SL_8`, `SO10`, `Sp_6`, `E6`, `G2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_digit() || c == '_').unwrap_or(s.len());
        let (head, tail) = s.split_at(split);
        let tail = tail.trim_start_matches('_');
        if let Ok(family) = head.parse::<ClassicalFamily>() {
            let n = tail
                .parse()
                .map_err(|_| Error::Parse(format!("missing matrix size in '{s}'")))?;
            return Group::classical(family, n);
        }
        let id: RootSystemId = format!("{head}{tail}").parse()?;
        if !id.family().is_exceptional() {
            return Err(Error::Parse(format!(
                "'{s}': give classical groups as SL_n, SO_n or Sp_n"
            )));
        }
        Ok(Group::Exceptional(id))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub pair: ParabolicPair,
    pub complexity: usize,
}

fn is_whole_group(spec: &ParabolicSpec) -> bool {
    let id = spec.root_system();
    spec.to_subset().removed().is_empty() && id.rank() > 0
}

/// Every symmetry orbit of pairs, once, as sorted canonical representatives.
pub fn enumerate_pairs(group: Group) -> Result<Vec<ParabolicPair>> {
    let specs = group.parabolics()?;
    let mut set = BTreeSet::new();
    for (a, p) in specs.iter().enumerate() {
        for q in &specs[a..] {
            set.insert(ParabolicPair::new(p.clone(), q.clone())?.canonical());
        }
    }
    Ok(set.into_iter().collect())
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub tie: TieBreak,
    /// Skip pairs whose dimension estimate already exceeds `cmax`.
    pub prune_by_estimate: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tie: TieBreak::default(),
            prune_by_estimate: true,
        }
    }
}

/// All pairs with `P, Q ≠ G` and complexity at most `cmax`.
pub fn classify(group: Group, cmax: usize) -> Result<Vec<ClassificationRow>> {
    classify_with(group, cmax, ClassifyOptions::default())
}

pub fn classify_with(group: Group, cmax: usize, opts: ClassifyOptions) -> Result<Vec<ClassificationRow>> {
    let system = RootSystem::new(group.root_system());
    let pairs = enumerate_pairs(group)?;
    let limit = Ratio::from_integer(cmax as i64);
    let mut rows: Vec<ClassificationRow> = pairs
        .into_par_iter()
        .filter(|pair| !is_whole_group(pair.p()) && !is_whole_group(pair.q()))
        .filter_map(|pair| {
            let (i, j) = (pair.p().to_subset().mask(), pair.q().to_subset().mask());
            if opts.prune_by_estimate && dimension_lower_bound_masks(&system, i, j) > limit {
                return None;
            }
            let c = complexity_of_masks(&system, i, j, opts.tie);
            (c <= cmax).then_some(ClassificationRow { pair, complexity: c })
        })
        .collect();
    rows.sort();
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Fixed(usize),
    Param(String),
    AnyComposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Constraint {
    param: String,
    rel: Relation,
    bound: usize,
}

impl Constraint {
    fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad constraint '{text}'"));
        for (sym, rel) in [
            (">=", Relation::Ge),
            ("<=", Relation::Le),
            ("==", Relation::Eq),
            (">", Relation::Gt),
            ("<", Relation::Lt),
        ] {
            if let Some((l, r)) = text.split_once(sym) {
                return Ok(Constraint {
                    param: l.trim().to_string(),
                    rel,
                    bound: r.trim().parse().map_err(|_| bad())?,
                });
            }
        }
        Err(bad())
    }

    fn holds(&self, v: usize) -> bool {
        match self.rel {
            Relation::Ge => v >= self.bound,
            Relation::Gt => v > self.bound,
            Relation::Le => v <= self.bound,
            Relation::Lt => v < self.bound,
            Relation::Eq => v == self.bound,
        }
    }
}

#[derive(Deserialize)]
struct RawRow {
    group: String,
    blocks: String,
    complexity: usize,
    p: Vec<String>,
    q: Vec<String>,
    #[serde(default)]
    constraints: Vec<String>,
    #[serde(default)]
    p_stroke: bool,
    #[serde(default)]
    q_stroke: bool,
}

#[derive(Deserialize)]
struct RawClassical {
    row: Vec<RawRow>,
}

/// One printed row of a classical table as a pattern generator.
#[derive(Clone, Debug)]
pub struct TableRow {
    pub family: ClassicalFamily,
    pub label: String,
    pub complexity: usize,
    p: Vec<Token>,
    q: Vec<Token>,
    p_stroke: bool,
    q_stroke: bool,
    constraints: Vec<Constraint>,
}

fn parse_tokens(tokens: &[String]) -> Result<Vec<Token>> {
    tokens
        .iter()
        .map(|t| {
            let t = t.trim();
            if t == "*" {
                Ok(Token::AnyComposition)
            } else if let Ok(k) = t.parse() {
                Ok(Token::Fixed(k))
            } else if t.chars().all(|c| c.is_ascii_alphanumeric()) && !t.is_empty() {
                Ok(Token::Param(t.to_string()))
            } else {
                Err(Error::Parse(format!("bad pattern token '{t}'")))
            }
        })
        .collect()
}

fn render(tokens: &[String], stroke: bool) -> String {
    format!("({}){}", tokens.join(","), if stroke { "'" } else { "" })
}

impl TableRow {
    fn params(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for t in self.p.iter().chain(&self.q) {
            if let Token::Param(s) = t {
                if !names.contains(s) {
                    names.push(s.clone());
                }
            }
        }
        names
    }

    /// All compositions of size `n` this row stands for.
    pub fn instantiate(&self, n: usize) -> Result<Vec<(BlockComposition, BlockComposition)>> {
        let names = self.params();
        let mut out = Vec::new();
        let mut values = vec![1usize; names.len()];
        loop {
            let ok = self.constraints.iter().all(|c| {
                names
                    .iter()
                    .position(|x| *x == c.param)
                    .is_some_and(|k| c.holds(values[k]))
            });
            if ok {
                let ps = self.expand(&self.p, &names, &values, n, self.p_stroke);
                let qs = self.expand(&self.q, &names, &values, n, self.q_stroke);
                for p in &ps {
                    for q in &qs {
                        out.push((p.clone(), q.clone()));
                    }
                }
            }
            // Odometer over parameter values 1..=n.
            let mut k = 0;
            loop {
                if k == values.len() {
                    return Ok(out);
                }
                values[k] += 1;
                if values[k] <= n {
                    break;
                }
                values[k] = 1;
                k += 1;
            }
        }
    }

    fn expand(
        &self,
        tokens: &[Token],
        names: &[String],
        values: &[usize],
        n: usize,
        stroke: bool,
    ) -> Vec<BlockComposition> {
        if tokens == [Token::AnyComposition] {
            return all_compositions(self.family, n)
                .unwrap_or_default()
                .into_iter()
                .filter(|c| c.stroke() == stroke)
                .collect();
        }
        let sizes: Vec<usize> = tokens
            .iter()
            .map(|t| match t {
                Token::Fixed(k) => *k,
                Token::Param(s) => values[names.iter().position(|x| x == s).expect("collected")],
                Token::AnyComposition => 0,
            })
            .collect();
        if sizes.iter().sum::<usize>() != n {
            return Vec::new();
        }
        BlockComposition::new(self.family, sizes, stroke)
            .map(|c| vec![c])
            .unwrap_or_default()
    }
}

pub fn classical_rows() -> Result<Vec<TableRow>> {
    let raw: RawClassical =
        toml::from_str(CLASSICAL_TABLES).map_err(|e| Error::Parse(format!("classical tables: {e}")))?;
    raw.row
        .into_iter()
        .map(|r| {
            let family: ClassicalFamily = r.group.parse()?;
            let label = format!(
                "{family} row {} c={}: {} x {}{}",
                r.blocks,
                r.complexity,
                render(&r.p, r.p_stroke),
                render(&r.q, r.q_stroke),
                if r.constraints.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", r.constraints.join(", "))
                }
            );
            let p = parse_tokens(&r.p)?;
            let q = parse_tokens(&r.q)?;
            if p.contains(&Token::AnyComposition) && p.len() > 1
                || q.contains(&Token::AnyComposition) && q.len() > 1
            {
                return Err(Error::Parse(format!("{label}: '*' must stand alone")));
            }
            Ok(TableRow {
                family,
                label,
                complexity: r.complexity,
                p,
                q,
                p_stroke: r.p_stroke,
                q_stroke: r.q_stroke,
                constraints: r
                    .constraints
                    .iter()
                    .map(|c| Constraint::parse(c))
                    .collect::<Result<_>>()?,
            })
        })
        .collect()
}

#[derive(Deserialize)]
struct RawClass {
    group: String,
    complexity: usize,
    pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Deserialize)]
struct RawEstimate {
    group: String,
    rows: Vec<(Vec<usize>, Vec<usize>, usize)>,
}

#[derive(Deserialize)]
struct RawExceptional {
    class: Vec<RawClass>,
    estimate: Vec<RawEstimate>,
}

fn exceptional_raw() -> Result<RawExceptional> {
    toml::from_str(EXCEPTIONAL_TABLES).map_err(|e| Error::Parse(format!("exceptional tables: {e}")))
}

fn subset_pair(id: RootSystemId, p: &[usize], q: &[usize]) -> Result<ParabolicPair> {
    ParabolicPair::new(
        SimpleRootSubset::from_removed(id, p)?,
        SimpleRootSubset::from_removed(id, q)?,
    )
}

/// A pair whose dimension estimate allows complexity ≤ 1, with its exact value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateRow {
    pub pair: ParabolicPair,
    pub complexity: usize,
}

/// Bundled exact values for the exceptional pairs passing the dimension estimate.
pub fn estimate_rows(id: RootSystemId) -> Result<Vec<EstimateRow>> {
    let raw = exceptional_raw()?;
    let mut out = Vec::new();
    for block in raw.estimate {
        if block.group.parse::<RootSystemId>()? != id {
            continue;
        }
        for (p, q, c) in block.rows {
            out.push(EstimateRow {
                pair: subset_pair(id, &p, &q)?,
                complexity: c,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedEntry {
    pub complexity: usize,
    pub labels: Vec<String>,
}

/// Fully instantiated expected rows for one group.
#[derive(Clone, Debug)]
pub struct ExpectedTable {
    pub group: Group,
    pub rows: BTreeMap<ParabolicPair, ExpectedEntry>,
    /// Pairs produced by rows that disagree on the complexity.
    pub conflicts: Vec<String>,
}

pub fn expected_table(group: Group) -> Result<ExpectedTable> {
    let mut rows: BTreeMap<ParabolicPair, ExpectedEntry> = BTreeMap::new();
    let mut conflicts = Vec::new();
    let mut add = |pair: ParabolicPair, complexity: usize, label: &str| {
        if is_whole_group(pair.p()) || is_whole_group(pair.q()) {
            return;
        }
        let entry = rows.entry(pair.canonical()).or_insert(ExpectedEntry {
            complexity,
            labels: Vec::new(),
        });
        if entry.complexity != complexity {
            conflicts.push(format!(
                "{}: '{label}' says {complexity}, {:?} say {}",
                pair.canonical(),
                entry.labels,
                entry.complexity
            ));
        }
        if !entry.labels.iter().any(|l| l == label) {
            entry.labels.push(label.to_string());
        }
    };
    match group {
        Group::Classical { family, n } => {
            for row in classical_rows()?.into_iter().filter(|r| r.family == family) {
                for (p, q) in row.instantiate(n)? {
                    add(ParabolicPair::new(p, q)?, row.complexity, &row.label);
                }
            }
        }
        Group::Exceptional(id) => {
            for block in exceptional_raw()?.class {
                if block.group.parse::<RootSystemId>()? != id {
                    continue;
                }
                for (p, q) in &block.pairs {
                    let label = format!("{id} c={}: {:?} x {:?}", block.complexity, p, q);
                    add(subset_pair(id, p, q)?, block.complexity, &label);
                }
            }
        }
    }
    Ok(ExpectedTable {
        group,
        rows,
        conflicts,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffLine {
    pub pair: ParabolicPair,
    pub actual: Option<usize>,
    pub expected: Option<usize>,
    pub labels: Vec<String>,
}

impl fmt::Display for DiffLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: Option<usize>| c.map_or("-".to_string(), |c| c.to_string());
        write!(
            f,
            "{}: computed {}, expected {}",
            self.pair,
            show(self.actual),
            show(self.expected)
        )?;
        if !self.labels.is_empty() {
            write!(f, " (from {})", self.labels.join("; "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub missing: Vec<DiffLine>,
    pub unexpected: Vec<DiffLine>,
    pub mismatched: Vec<DiffLine>,
    pub conflicts: Vec<String>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty()
            && self.unexpected.is_empty()
            && self.mismatched.is_empty()
            && self.conflicts.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.missing.iter().map(|l| format!("missing: {l}")));
        out.extend(self.unexpected.iter().map(|l| format!("unexpected: {l}")));
        out.extend(self.mismatched.iter().map(|l| format!("mismatch: {l}")));
        out.extend(self.conflicts.iter().map(|c| format!("table conflict: {c}")));
        out
    }
}

/// Symmetric difference between computed rows and an expected table.
pub fn diff_report(actual: &[ClassificationRow], expected: &ExpectedTable) -> DiffReport {
    let mut report = DiffReport {
        conflicts: expected.conflicts.clone(),
        ..DiffReport::default()
    };
    let computed: BTreeMap<ParabolicPair, usize> = actual
        .iter()
        .map(|r| (r.pair.canonical(), r.complexity))
        .collect();
    for (pair, entry) in &expected.rows {
        match computed.get(pair) {
            None => report.missing.push(DiffLine {
                pair: pair.clone(),
                actual: None,
                expected: Some(entry.complexity),
                labels: entry.labels.clone(),
            }),
            Some(&c) if c != entry.complexity => report.mismatched.push(DiffLine {
                pair: pair.clone(),
                actual: Some(c),
                expected: Some(entry.complexity),
                labels: entry.labels.clone(),
            }),
            Some(_) => {}
        }
    }
    for (pair, &c) in &computed {
        if !expected.rows.contains_key(pair) {
            report.unexpected.push(DiffLine {
                pair: pair.clone(),
                actual: Some(c),
                expected: None,
                labels: Vec::new(),
            });
        }
    }
    report
}

/// Classify and diff in one step (complexity ≤ 1).
pub fn verify_group(group: Group) -> Result<DiffReport> {
    let actual = classify(group, 1)?;
    Ok(diff_report(&actual, &expected_table(group)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::parse_composition;

    fn comp(f: ClassicalFamily, s: &str) -> BlockComposition {
        parse_composition(f, s).unwrap()
    }

    fn pair(f: ClassicalFamily, a: &str, b: &str) -> ParabolicPair {
        ParabolicPair::new(comp(f, a), comp(f, b)).unwrap().canonical()
    }

    #[test]
    fn group_parsing() {
        assert_eq!("SL_8".parse::<Group>().unwrap().to_string(), "SL_8");
        assert_eq!("so10".parse::<Group>().unwrap().to_string(), "SO_10");
        assert_eq!("E6".parse::<Group>().unwrap().to_string(), "E6");
        assert!("A3".parse::<Group>().is_err());
        assert!("SO_4".parse::<Group>().is_err());
    }

    #[test]
    fn orbit_counts() {
        let sl3 = Group::classical(ClassicalFamily::SL, 3).unwrap();
        assert_eq!(enumerate_pairs(sl3).unwrap().len(), 7);
        let g2 = Group::exceptional(Family::G2).unwrap();
        assert_eq!(enumerate_pairs(g2).unwrap().len(), 10);
    }

    #[test]
    fn so8_strokes_enumerated() {
        let so8 = Group::classical(ClassicalFamily::SO, 8).unwrap();
        let pairs = enumerate_pairs(so8).unwrap();
        let strokes: BTreeSet<_> = pairs
            .iter()
            .flat_map(|p| [p.p(), p.q()])
            .filter_map(|s| match s {
                ParabolicSpec::Blocks(b) if b.stroke() => Some(b.clone()),
                _ => None,
            })
            .collect();
        for s in &strokes {
            assert!(!s.has_central_block());
        }
        assert!(strokes.contains(&comp(ClassicalFamily::SO, "4,4'")));
    }

    #[test]
    fn expected_examples() {
        use ClassicalFamily::{Sp, SL, SO};
        let sl5 = expected_table(Group::classical(SL, 5).unwrap()).unwrap();
        assert_eq!(sl5.rows[&pair(SL, "1,4", "1,1,1,1,1")].complexity, 0);
        let sp8 = expected_table(Group::classical(Sp, 8).unwrap()).unwrap();
        assert_eq!(sp8.rows[&pair(Sp, "4,4", "1,6,1")].complexity, 0);
        assert_eq!(sp8.rows[&pair(Sp, "4,4", "2,4,2")].complexity, 1);
        let so12 = expected_table(Group::classical(SO, 12).unwrap()).unwrap();
        assert_eq!(so12.rows[&pair(SO, "6,6", "1,1,8,1,1")].complexity, 0);
    }

    #[test]
    fn constraint_thresholds() {
        use ClassicalFamily::SO;
        let so14 = expected_table(Group::classical(SO, 14).unwrap()).unwrap();
        assert_eq!(so14.rows[&pair(SO, "7,7", "3,8,3")].complexity, 0);
        assert!(!so14.rows.contains_key(&pair(SO, "7,7", "4,6,4")));
    }

    #[test]
    fn diff_of_identical_is_empty() {
        let g = Group::exceptional(Family::E7).unwrap();
        let expected = expected_table(g).unwrap();
        let actual: Vec<ClassificationRow> = expected
            .rows
            .iter()
            .map(|(p, e)| ClassificationRow {
                pair: p.clone(),
                complexity: e.complexity,
            })
            .collect();
        assert!(diff_report(&actual, &expected).is_empty());
        let dropped = &actual[1..];
        let report = diff_report(dropped, &expected);
        assert_eq!(report.missing.len(), 1);
        assert_eq!(report.missing[0].pair, actual[0].pair);
        assert!(report.lines()[0].contains("missing"));
    }

    #[test]
    fn small_exceptional_groups_are_empty() {
        for f in [Family::G2, Family::F4] {
            let g = Group::exceptional(f).unwrap();
            assert!(classify(g, 1).unwrap().is_empty());
            assert!(verify_group(g).unwrap().is_empty());
        }
    }
}
