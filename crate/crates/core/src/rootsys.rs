//! Root systems of the simple types A–G in simple-root coordinates.
//!
//! Simple roots follow the Onishchik–Vinberg numbering. For the classical
//! types and F4, G2 this coincides with Bourbaki. For E6, E7, E8 the long
//! chain is numbered first and the branch node last:
//!
//! ```text
//! E6:  1 - 2 - 3 - 4 - 5        E7:  1 - 2 - 3 - 4 - 5 - 6
//!              |                                 |
//!              6                                 7
//!
//! E8:  1 - 2 - 3 - 4 - 5 - 6 - 7
//!                      |
//!                      8
//! ```
//!
//! In Bourbaki labels this is E6 `[1,3,4,5,6,2]`, E7 `[7,6,5,4,3,1,2]` and
//! E8 `[8,7,6,5,4,3,1,2]`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    pub fn is_exceptional(self) -> bool {
        matches!(
            self,
            Family::E6 | Family::E7 | Family::E8 | Family::F4 | Family::G2
        )
    }

    fn fixed_rank(self) -> Option<usize> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }

    fn letter(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 | Family::E7 | Family::E8 => "E",
            Family::F4 => "F",
            Family::G2 => "G",
        }
    }
}

/// A simple type together with its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSystemId {
    family: Family,
    rank: usize,
}

impl RootSystemId {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let reject = |reason| {
            Err(Error::InvalidRootSystem {
                family: family.letter().to_string(),
                rank,
                reason,
            })
        };
        if let Some(fixed) = family.fixed_rank() {
            if rank != fixed {
                return reject("exceptional families have a fixed rank");
            }
        }
        match family {
            Family::A if rank < 1 => return reject("A requires rank >= 1"),
            Family::B if rank < 2 => return reject("B requires rank >= 2"),
            Family::C if rank < 2 => return reject("C requires rank >= 2"),
            Family::D if rank < 3 => return reject("D requires rank >= 3"),
            _ => {}
        }
        if rank > 64 {
            return reject("rank above 64 is not supported");
        }
        Ok(Self { family, rank })
    }

    /// The exceptional type with its fixed rank.
    pub fn exceptional(family: Family) -> Result<Self> {
        match family.fixed_rank() {
            Some(rank) => Self::new(family, rank),
            None => Err(Error::InvalidRootSystem {
                family: family.letter().to_string(),
                rank: 0,
                reason: "not an exceptional family",
            }),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for RootSystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for RootSystemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unrecognized root system '{s}'"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let family = match (letter, rank) {
            ('A', _) => Family::A,
            ('B', _) => Family::B,
            ('C', _) => Family::C,
            ('D', _) => Family::D,
            ('E', 6) => Family::E6,
            ('E', 7) => Family::E7,
            ('E', 8) => Family::E8,
            ('F', 4) => Family::F4,
            ('G', 2) => Family::G2,
            _ => return Err(bad()),
        };
        Self::new(family, rank)
    }
}

/// A root written in the basis of simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(Vec<i32>);

impl Root {
    pub fn new(coords: Vec<i32>) -> Self {
        Root(coords)
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[i] = 1;
        Root(c)
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    /// Bit `i` is set iff the coefficient of the `i`-th simple root is nonzero.
    pub fn support(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// True iff `root` lies in the integer span of the simple roots in `subset`.
///
/// Simple roots are linearly independent, so this is a support test.
pub fn in_integer_span(root: &Root, subset: u64) -> bool {
    root.support() & !subset == 0
}

/// Tie-break among roots of equal height when picking a minimal root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Lexicographically greatest coordinate vector wins (`α1` before `α2`).
    #[default]
    LexGreatest,
    /// Lexicographically least coordinate vector wins.
    LexLeast,
}

impl TieBreak {
    /// `true` iff `a` is preferred over `b`.
    pub fn prefers(self, a: &Root, b: &Root) -> bool {
        let (ha, hb) = (a.height(), b.height());
        if ha != hb {
            return ha < hb;
        }
        match self {
            TieBreak::LexGreatest => a.coords() > b.coords(),
            TieBreak::LexLeast => a.coords() < b.coords(),
        }
    }
}

/// Minimal element of `roots` by height, ties broken lexicographically.
pub fn minimal_root<'a, I>(roots: I) -> Result<&'a Root>
where
    I: IntoIterator<Item = &'a Root>,
{
    minimal_root_by(roots, TieBreak::default())
}

pub fn minimal_root_by<'a, I>(roots: I, tie: TieBreak) -> Result<&'a Root>
where
    I: IntoIterator<Item = &'a Root>,
{
    roots
        .into_iter()
        .reduce(|best, r| if tie.prefers(r, best) { r } else { best })
        .ok_or(Error::EmptyRootSet)
}

/// Realization of the simple roots in an ambient coordinate space.
///
/// `metric` is the Gram matrix of the ambient basis; `relation`, when present,
/// spans the kernel of the metric (E6 uses formal ε-symbols with Σ εᵢ = 0).
#[derive(Clone, Debug)]
pub struct Ambient {
    pub simple: Vec<Vec<Rational>>,
    pub metric: Vec<Vec<Rational>>,
    pub relation: Option<Vec<Rational>>,
}

impl Ambient {
    pub fn dim(&self) -> usize {
        self.metric.len()
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += *xi * self.metric[i][j] * *yj;
            }
        }
        acc
    }

    /// Ambient image of a vector given in simple-root coordinates.
    pub fn image(&self, coords: &[i32]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (c, row) in coords.iter().zip(&self.simple) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += *x * Rational::from_integer(*c as i64);
            }
        }
        out
    }

    /// Equality of ambient vectors modulo the relation vector, if any.
    pub fn same_point(&self, x: &[Rational], y: &[Rational]) -> bool {
        let diff: Vec<Rational> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        match &self.relation {
            None => diff.iter().all(Zero::is_zero),
            Some(rel) => {
                let Some(k) = rel.iter().position(|r| !r.is_zero()) else {
                    return diff.iter().all(Zero::is_zero);
                };
                let t = diff[k] / rel[k];
                diff.iter().zip(rel).all(|(d, r)| *d == t * r)
            }
        }
    }
}

const NO_ROOT: u16 = u16::MAX;

#[derive(Clone, Debug)]
pub struct RootSystem {
    id: RootSystemId,
    /// Symmetric Gram matrix of the simple roots, scaled to integers.
    gram: Vec<Vec<i64>>,
    /// `cartan[i][j] = <α_i, α_j^∨>`.
    cartan: Vec<Vec<i64>>,
    /// Positive roots first (ascending height), then their negatives in the same order.
    roots: Vec<Root>,
    n_positive: usize,
    index: HashMap<Root, usize>,
    heights: Vec<i32>,
    supports: Vec<u64>,
    sum_table: Vec<u16>,
    ambient: Ambient,
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn half(n: i64) -> Rational {
    Rational::new(n, 2)
}

fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::one();
    v
}

fn diff(dim: usize, i: usize, j: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = q(1);
    v[j] = q(-1);
    v
}

fn identity_metric(dim: usize) -> Vec<Vec<Rational>> {
    (0..dim).map(|i| unit(dim, i)).collect()
}

/// Bourbaki E8 simple roots in R^8 (Bourbaki labels 1..8).
fn bourbaki_e8() -> Vec<Vec<Rational>> {
    let mut b1 = vec![half(-1); 8];
    b1[0] = half(1);
    b1[7] = half(1);
    let mut b2 = vec![q(0); 8];
    b2[0] = q(1);
    b2[1] = q(1);
    let mut out = vec![b1, b2, diff(8, 1, 0)];
    for k in 2..7 {
        out.push(diff(8, k, k - 1));
    }
    out
}

fn build_ambient(id: RootSystemId) -> Ambient {
    let r = id.rank;
    match id.family {
        Family::A => Ambient {
            simple: (0..r).map(|i| diff(r + 1, i, i + 1)).collect(),
            metric: identity_metric(r + 1),
            relation: None,
        },
        Family::B | Family::C | Family::D => {
            let mut simple: Vec<Vec<Rational>> = (0..r - 1).map(|i| diff(r, i, i + 1)).collect();
            let last = match id.family {
                Family::B => unit(r, r - 1),
                Family::C => {
                    let mut v = unit(r, r - 1);
                    v[r - 1] = q(2);
                    v
                }
                _ => {
                    let mut v = unit(r, r - 1);
                    v[r - 2] = q(1);
                    v
                }
            };
            simple.push(last);
            Ambient {
                simple,
                metric: identity_metric(r),
                relation: None,
            }
        }
        Family::E6 => {
            // ε₁..ε₆ (with Σ εᵢ = 0) and ε; α₆ = ε₄ + ε₅ + ε₆ + ε.
            let mut simple: Vec<Vec<Rational>> = (0..5).map(|i| diff(7, i, i + 1)).collect();
            let mut a6 = vec![q(0); 7];
            for k in 3..7 {
                a6[k] = q(1);
            }
            simple.push(a6);
            let mut metric = vec![vec![q(0); 7]; 7];
            for (i, row) in metric.iter_mut().enumerate().take(6) {
                for (j, m) in row.iter_mut().enumerate().take(6) {
                    *m = if i == j { Rational::new(5, 6) } else { Rational::new(-1, 6) };
                }
            }
            metric[6][6] = half(1);
            let mut rel = vec![q(1); 7];
            rel[6] = q(0);
            Ambient {
                simple,
                metric,
                relation: Some(rel),
            }
        }
        Family::E7 | Family::E8 => {
            let b = bourbaki_e8();
            let order: &[usize] = if id.family == Family::E7 {
                &[7, 6, 5, 4, 3, 1, 2]
            } else {
                &[8, 7, 6, 5, 4, 3, 1, 2]
            };
            Ambient {
                simple: order.iter().map(|&k| b[k - 1].clone()).collect(),
                metric: identity_metric(8),
                relation: None,
            }
        }
        Family::F4 => {
            let mut a4 = vec![half(-1); 4];
            a4[0] = half(1);
            Ambient {
                simple: vec![diff(4, 1, 2), diff(4, 2, 3), unit(4, 3), a4],
                metric: identity_metric(4),
                relation: None,
            }
        }
        Family::G2 => Ambient {
            simple: vec![diff(3, 0, 1), vec![q(-2), q(1), q(1)]],
            metric: identity_metric(3),
            relation: None,
        },
    }
}

impl RootSystem {
    pub fn new(id: RootSystemId) -> Self {
        let ambient = build_ambient(id);
        let r = id.rank;
        let rat_gram: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| ambient.inner(&ambient.simple[i], &ambient.simple[j]))
                    .collect()
            })
            .collect();
        let denom = rat_gram
            .iter()
            .flatten()
            .fold(1i64, |acc, x| acc.lcm(x.denom()));
        let gram: Vec<Vec<i64>> = rat_gram
            .iter()
            .map(|row| row.iter().map(|x| (x * denom).to_integer()).collect())
            .collect();
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();

        let mut positive = Vec::new();
        let mut seen: HashMap<Root, ()> = HashMap::new();
        let mut queue: VecDeque<Root> = (0..r).map(|i| Root::simple(r, i)).collect();
        for s in &queue {
            seen.insert(s.clone(), ());
        }
        while let Some(beta) = queue.pop_front() {
            if beta.is_positive() {
                positive.push(beta.clone());
            }
            for j in 0..r {
                let pairing: i64 = (0..r).map(|i| beta.0[i] as i64 * cartan[i][j]).sum();
                if pairing == 0 {
                    continue;
                }
                let mut img = beta.0.clone();
                img[j] -= pairing as i32;
                let img = Root(img);
                if !seen.contains_key(&img) {
                    seen.insert(img.clone(), ());
                    queue.push_back(img);
                }
            }
        }
        positive.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.0.cmp(&a.0)));
        let n_positive = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(Root::neg));
        assert_eq!(roots.len(), seen.len(), "reflection closure lost a root");

        let index: HashMap<Root, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let heights = roots.iter().map(Root::height).collect();
        let supports = roots.iter().map(Root::support).collect();
        let n = roots.len();
        let mut sum_table = vec![NO_ROOT; n * n];
        for a in 0..n {
            for b in 0..n {
                if let Some(&k) = index.get(&roots[a].add(&roots[b])) {
                    sum_table[a * n + b] = k as u16;
                }
            }
        }
        Self {
            id,
            gram,
            cartan,
            roots,
            n_positive,
            index,
            heights,
            supports,
            sum_table,
            ambient,
        }
    }

    pub fn id(&self) -> RootSystemId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.id.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.n_positive]
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank()).map(|i| Root::simple(self.rank(), i)).collect()
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.n_positive
    }

    /// Dimension of the simple Lie algebra.
    pub fn dimension(&self) -> usize {
        self.rank() + self.roots.len()
    }

    pub fn index_of(&self, root: &Root) -> Option<usize> {
        self.index.get(root).copied()
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.roots[idx]
    }

    pub fn height(&self, idx: usize) -> i32 {
        self.heights[idx]
    }

    pub fn support(&self, idx: usize) -> u64 {
        self.supports[idx]
    }

    pub fn is_positive_index(&self, idx: usize) -> bool {
        idx < self.n_positive
    }

    /// Index of `roots[a] + roots[b]` if that sum is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let k = self.sum_table[a * self.roots.len() + b];
        (k != NO_ROOT).then_some(k as usize)
    }

    /// `<β, α^∨>` for arbitrary vectors in simple-root coordinates.
    pub fn pairing(&self, beta: &[i32], alpha: &[i32]) -> i64 {
        let r = self.rank();
        let inner = |x: &[i32], y: &[i32]| -> i64 {
            let mut s = 0;
            for i in 0..r {
                for j in 0..r {
                    s += x[i] as i64 * self.gram[i][j] * y[j] as i64;
                }
            }
            s
        };
        2 * inner(beta, alpha) / inner(alpha, alpha)
    }

    pub fn reflect(&self, beta: &Root, i: usize) -> Root {
        let p = self.pairing(beta.coords(), Root::simple(self.rank(), i).coords());
        let mut c = beta.0.clone();
        c[i] -= p as i32;
        Root(c)
    }

    /// Number of roots (both signs) in the Levi subalgebra for the simple-root subset.
    pub fn levi_root_count(&self, subset: u64) -> usize {
        self.supports.iter().filter(|&&s| s & !subset == 0).count()
    }
}

/// Convenience: build the root system for `id`.
pub fn build_root_system(id: RootSystemId) -> RootSystem {
    RootSystem::new(id)
}
