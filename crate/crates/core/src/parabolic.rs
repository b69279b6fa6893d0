//! Parabolic subgroups containing the fixed Borel, in two encodings: block
//! compositions of classical matrix groups and simple-root subsets.
//!
//! A [`SimpleRootSubset`] stores `I`, the simple roots of the Levi factor.
//! Textual subsets (`a1,a5`) list the removed nodes `Π \ I`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Family, RootSystemId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassicalFamily {
    SL,
    SO,
    Sp,
}

impl ClassicalFamily {
    /// Root system of the matrix group of size `n`.
    pub fn root_system(self, n: usize) -> Result<RootSystemId> {
        let bad = |reason| Error::InvalidParabolic(format!("{self}_{n}: {reason}"));
        match self {
            ClassicalFamily::SL => {
                if n < 2 {
                    return Err(bad("SL needs n >= 2"));
                }
                RootSystemId::new(Family::A, n - 1)
            }
            ClassicalFamily::Sp => {
                if n % 2 == 1 {
                    return Err(bad("Sp needs even n"));
                }
                RootSystemId::new(Family::C, n / 2)
            }
            ClassicalFamily::SO if n % 2 == 1 => RootSystemId::new(Family::B, n / 2),
            ClassicalFamily::SO => RootSystemId::new(Family::D, n / 2),
        }
    }

    /// Matrix group and size realizing a classical root system.
    pub fn of_system(id: RootSystemId) -> Result<(ClassicalFamily, usize)> {
        let r = id.rank();
        match id.family() {
            Family::A => Ok((ClassicalFamily::SL, r + 1)),
            Family::B => Ok((ClassicalFamily::SO, 2 * r + 1)),
            Family::C => Ok((ClassicalFamily::Sp, 2 * r)),
            Family::D => Ok((ClassicalFamily::SO, 2 * r)),
            _ => Err(Error::InvalidParabolic(format!(
                "{id} is not a classical matrix group"
            ))),
        }
    }

    pub fn is_symmetric(self) -> bool {
        self != ClassicalFamily::SL
    }
}

impl fmt::Display for ClassicalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassicalFamily::SL => "SL",
            ClassicalFamily::SO => "SO",
            ClassicalFamily::Sp => "Sp",
        })
    }
}

impl FromStr for ClassicalFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SL" => Ok(ClassicalFamily::SL),
            "SO" => Ok(ClassicalFamily::SO),
            "SP" => Ok(ClassicalFamily::Sp),
            _ => Err(Error::Parse(format!("unknown classical family '{s}'"))),
        }
    }
}

/// Sizes of the diagonal blocks of a block-triangular parabolic.
///
/// Stored canonically: for SO a middle pair `(1, 1)` becomes one block of
/// size 2. `stroke` marks the special parabolics of SO with even `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockComposition {
    family: ClassicalFamily,
    n: usize,
    sizes: Vec<usize>,
    stroke: bool,
}

impl BlockComposition {
    pub fn new(family: ClassicalFamily, sizes: Vec<usize>, stroke: bool) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParabolic(format!("{family} {sizes:?}: {msg}"));
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(bad("block sizes must be positive"));
        }
        let n: usize = sizes.iter().sum();
        family.root_system(n)?;
        if family.is_symmetric() && sizes.iter().ne(sizes.iter().rev()) {
            return Err(bad("orthogonal and symplectic compositions must be symmetric"));
        }
        if stroke {
            if family != ClassicalFamily::SO || n % 2 == 1 {
                return Err(bad("stroke requires SO with even n"));
            }
            if sizes.len() % 2 == 1 {
                return Err(bad("stroke requires a composition without central block"));
            }
        }
        let mut sizes = sizes;
        let mut stroke = stroke;
        let r = sizes.len();
        if family == ClassicalFamily::SO && r % 2 == 0 && sizes[r / 2] == 1 {
            // (.., 1, 1, ..) and (.., 2, ..) define the same subgroup, which the
            // middle transposition fixes.
            sizes.splice(r / 2 - 1..r / 2 + 1, [2]);
            stroke = false;
        }
        Ok(Self {
            family,
            n,
            sizes,
            stroke,
        })
    }

    pub fn family(&self) -> ClassicalFamily {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn stroke(&self) -> bool {
        self.stroke
    }

    pub fn root_system(&self) -> RootSystemId {
        self.family
            .root_system(self.n)
            .expect("validated at construction")
    }

    /// Whether a central block exists (odd number of blocks).
    pub fn has_central_block(&self) -> bool {
        self.family.is_symmetric() && self.sizes.len() % 2 == 1
    }

    /// Partial sums of the first half (all block boundaries for SL).
    pub fn boundaries(&self) -> Vec<usize> {
        let count = if self.family.is_symmetric() {
            self.sizes.len() / 2
        } else {
            self.sizes.len() - 1
        };
        self.sizes[..count]
            .iter()
            .scan(0, |acc, k| {
                *acc += k;
                Some(*acc)
            })
            .collect()
    }

    /// Image under reversal with respect to the secondary diagonal.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.sizes.reverse();
        out
    }

    /// Image under the diagram automorphism of SO with even `n`.
    pub fn diagram_flip(&self) -> Self {
        let mut out = self.clone();
        if self.family == ClassicalFamily::SO && self.n % 2 == 0 && !self.has_central_block() {
            out.stroke = !out.stroke;
        }
        out
    }

    /// `I`: the simple roots of the Levi factor.
    pub fn to_subset(&self) -> SimpleRootSubset {
        let id = self.root_system();
        let rank = id.rank();
        let mut removed: Vec<usize> = Vec::new();
        let bounds = self.boundaries();
        match id.family() {
            Family::A | Family::B | Family::C => removed.extend(bounds.iter().copied()),
            Family::D => {
                for &b in &bounds {
                    if b == rank - 1 {
                        removed.extend([rank - 1, rank]);
                    } else if b == rank {
                        removed.push(if self.stroke { rank - 1 } else { rank });
                    } else {
                        removed.push(b);
                    }
                }
            }
            _ => unreachable!("classical families only"),
        }
        SimpleRootSubset::from_removed(id, &removed).expect("boundaries lie in 1..=rank")
    }
}

impl fmt::Display for BlockComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))?;
        if self.stroke {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// Parse `2,2,2,2'` (trailing apostrophe marks a stroke).
pub fn parse_composition(family: ClassicalFamily, text: &str) -> Result<BlockComposition> {
    let t = text.trim().trim_start_matches('(');
    let (body, stroke) = match t.strip_suffix('\'') {
        Some(b) => (b, true),
        None => (t, false),
    };
    let body = body.trim_end_matches(')');
    let sizes = body
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad block size '{s}' in '{text}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    BlockComposition::new(family, sizes, stroke)
}

/// A subset `I ⊆ Π` of simple roots, stored as a bit mask (bit `i` = node `i+1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleRootSubset {
    system: RootSystemId,
    mask: u64,
}

impl SimpleRootSubset {
    pub fn new(system: RootSystemId, mask: u64) -> Result<Self> {
        if mask & !full_mask(system.rank()) != 0 {
            return Err(Error::InvalidParabolic(format!(
                "subset mask {mask:#b} exceeds rank of {system}"
            )));
        }
        Ok(Self { system, mask })
    }

    /// Subset whose complement is the given 1-based node list.
    pub fn from_removed(system: RootSystemId, removed: &[usize]) -> Result<Self> {
        let mut cut = 0u64;
        for &k in removed {
            if k == 0 || k > system.rank() {
                return Err(Error::InvalidParabolic(format!(
                    "node a{k} does not exist in {system}"
                )));
            }
            cut |= 1 << (k - 1);
        }
        Self::new(system, full_mask(system.rank()) & !cut)
    }

    pub fn system(&self) -> RootSystemId {
        self.system
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// 1-based nodes of `I`.
    pub fn kept(&self) -> Vec<usize> {
        (0..self.system.rank())
            .filter(|i| self.mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect()
    }

    /// 1-based nodes of `Π \ I`.
    pub fn removed(&self) -> Vec<usize> {
        (0..self.system.rank())
            .filter(|i| self.mask >> i & 1 == 0)
            .map(|i| i + 1)
            .collect()
    }

    /// Inverse of [`BlockComposition::to_subset`] for classical systems.
    pub fn to_composition(&self) -> Result<BlockComposition> {
        let (family, n) = ClassicalFamily::of_system(self.system)?;
        let rank = self.system.rank();
        let removed = self.removed();
        let mut stroke = false;
        let mut bounds: Vec<usize> = match self.system.family() {
            Family::D => {
                let has = |k| removed.contains(&k);
                let mut b: Vec<usize> = removed.iter().copied().filter(|&k| k + 1 < rank).collect();
                match (has(rank - 1), has(rank)) {
                    (true, true) => b.push(rank - 1),
                    (false, true) => b.push(rank),
                    (true, false) => {
                        b.push(rank);
                        stroke = true;
                    }
                    (false, false) => {}
                }
                b
            }
            _ => removed,
        };
        bounds.sort_unstable();
        let mut sizes: Vec<usize> = Vec::new();
        let mut prev = 0;
        for &b in &bounds {
            sizes.push(b - prev);
            prev = b;
        }
        if family.is_symmetric() {
            let central = n - 2 * prev;
            let mirror: Vec<usize> = sizes.iter().rev().copied().collect();
            if central > 0 {
                sizes.push(central);
            }
            sizes.extend(mirror);
        } else {
            sizes.push(n - prev);
        }
        BlockComposition::new(family, sizes, stroke)
    }
}

impl fmt::Display for SimpleRootSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nodes: Vec<String> = self.removed().iter().map(|k| format!("a{k}")).collect();
        write!(f, "{{{}}}", nodes.join(","))
    }
}

/// Parse removed nodes such as `a1,a5` (also `1,5`; an empty string is `P = G`).
pub fn parse_removed_nodes(system: RootSystemId, text: &str) -> Result<SimpleRootSubset> {
    let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut nodes = Vec::new();
    for part in trimmed.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let digits = part.trim_start_matches(['a', 'A', 'α']);
        let k = digits
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad node '{part}'")))?;
        nodes.push(k);
    }
    SimpleRootSubset::from_removed(system, &nodes)
}

fn full_mask(rank: usize) -> u64 {
    if rank == 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParabolicSpec {
    Blocks(BlockComposition),
    Subset(SimpleRootSubset),
}

impl ParabolicSpec {
    pub fn root_system(&self) -> RootSystemId {
        match self {
            ParabolicSpec::Blocks(b) => b.root_system(),
            ParabolicSpec::Subset(s) => s.system(),
        }
    }

    pub fn to_subset(&self) -> SimpleRootSubset {
        match self {
            ParabolicSpec::Blocks(b) => b.to_subset(),
            ParabolicSpec::Subset(s) => *s,
        }
    }

    fn sort_key(&self) -> (Vec<usize>, bool) {
        match self {
            ParabolicSpec::Blocks(b) => (b.sizes.clone(), b.stroke),
            ParabolicSpec::Subset(s) => (s.removed(), false),
        }
    }
}

impl PartialOrd for ParabolicSpec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ParabolicSpec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for ParabolicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParabolicSpec::Blocks(b) => b.fmt(f),
            ParabolicSpec::Subset(s) => s.fmt(f),
        }
    }
}

impl From<BlockComposition> for ParabolicSpec {
    fn from(b: BlockComposition) -> Self {
        ParabolicSpec::Blocks(b)
    }
}

impl From<SimpleRootSubset> for ParabolicSpec {
    fn from(s: SimpleRootSubset) -> Self {
        ParabolicSpec::Subset(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParabolicPair {
    p: ParabolicSpec,
    q: ParabolicSpec,
}

impl ParabolicPair {
    pub fn new(p: impl Into<ParabolicSpec>, q: impl Into<ParabolicSpec>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        let (gp, gq) = (p.root_system(), q.root_system());
        if gp != gq {
            return Err(Error::GroupMismatch(gp.to_string(), gq.to_string()));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> &ParabolicSpec {
        &self.p
    }

    pub fn q(&self) -> &ParabolicSpec {
        &self.q
    }

    pub fn root_system(&self) -> RootSystemId {
        self.p.root_system()
    }

    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// Every pair related to this one by the symmetries of the classification.
    pub fn orbit(&self) -> Vec<ParabolicPair> {
        let mut out = vec![self.clone()];
        if let (ParabolicSpec::Blocks(a), ParabolicSpec::Blocks(b)) = (&self.p, &self.q) {
            let map = |f: &dyn Fn(&BlockComposition) -> BlockComposition| ParabolicPair {
                p: ParabolicSpec::Blocks(f(a)),
                q: ParabolicSpec::Blocks(f(b)),
            };
            match a.family {
                ClassicalFamily::SL => out.push(map(&BlockComposition::reversed)),
                ClassicalFamily::SO if a.n % 2 == 0 => {
                    out.push(map(&BlockComposition::diagram_flip))
                }
                _ => {}
            }
        }
        let swapped: Vec<_> = out.iter().map(ParabolicPair::swapped).collect();
        out.extend(swapped);
        out.sort();
        out.dedup();
        out
    }

    /// Lexicographically least element of the orbit.
    ///
    /// Classical subset specs are first rewritten as block compositions.
    pub fn canonical(&self) -> ParabolicPair {
        let as_blocks = |s: &ParabolicSpec| match s {
            ParabolicSpec::Subset(sub) => sub
                .to_composition()
                .map_or_else(|_| s.clone(), ParabolicSpec::Blocks),
            other => other.clone(),
        };
        let base = ParabolicPair {
            p: as_blocks(&self.p),
            q: as_blocks(&self.q),
        };
        base.orbit()
            .into_iter()
            .min()
            .expect("orbit contains the pair itself")
    }
}

impl fmt::Display for ParabolicPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.p, self.q)
    }
}

pub fn composition_to_subset(b: &BlockComposition) -> SimpleRootSubset {
    b.to_subset()
}

pub fn subset_to_composition(s: &SimpleRootSubset) -> Result<BlockComposition> {
    s.to_composition()
}

pub fn canonical_pair(pair: &ParabolicPair) -> ParabolicPair {
    pair.canonical()
}

/// All valid compositions of `n` for the family, with stroke variants.
pub fn all_compositions(family: ClassicalFamily, n: usize) -> Result<Vec<BlockComposition>> {
    let id = family.root_system(n)?;
    let rank = id.rank();
    let mut out = Vec::new();
    for mask in 0..(1u64 << rank) {
        let s = SimpleRootSubset::new(id, mask)?;
        out.push(s.to_composition()?);
    }
    out.sort();
    Ok(out)
}
