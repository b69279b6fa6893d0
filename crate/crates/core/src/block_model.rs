//! Matrix picture of `p_u ∩ q_u` for the classical groups.
//!
//! SO_n preserves the form with ones on the secondary diagonal; Sp_n the skew
//! form `Ω` with `Ω[i][n-1-i] = 1` for `i < n/2` and `-1` otherwise. The Borel
//! subgroup is upper triangular. Special (stroke) parabolics are conjugates by
//! the transposition of the two middle basis vectors.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complexity::complexity_of_masks;
use crate::error::{Error, Result};
use crate::linalg::integer_rank;
use crate::parabolic::{BlockComposition, ClassicalFamily};
use crate::rootsys::{RootSystem, TieBreak};

/// Active blocks `X_ij` of `p_u ∩ q_u` over the common refinement.
///
/// Every active cell is stored, including mirror images under the secondary
/// diagonal; `antidiag` lists active cells with `i + j = r - 1` (SO only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGrid {
    pub family: ClassicalFamily,
    pub refined_sizes: Vec<usize>,
    pub active: BTreeSet<(usize, usize)>,
    pub antidiag: BTreeSet<(usize, usize)>,
    /// The grid was built for a conjugate or enlarged pair without strokes.
    pub enlarged: bool,
}

fn block_index(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &k)| std::iter::repeat_n(b, k))
        .collect()
}

/// Remove strokes: simultaneous conjugation when it clears both, otherwise
/// replace the stroke parabolic by the larger one with merged middle blocks.
fn unstroked_pair(p: &BlockComposition, q: &BlockComposition) -> (BlockComposition, BlockComposition, bool) {
    let (mut p, mut q) = (p.clone(), q.clone());
    let flip_clears = |a: &BlockComposition, b: &BlockComposition| {
        a.stroke() && (b.stroke() || b.has_central_block())
    };
    if flip_clears(&p, &q) || flip_clears(&q, &p) {
        p = p.diagram_flip();
        q = q.diagram_flip();
    }
    let mut enlarged = false;
    for c in [&mut p, &mut q] {
        if c.stroke() {
            let s = c.sizes();
            let r = s.len();
            let mut merged = s[..r / 2 - 1].to_vec();
            merged.push(s[r / 2 - 1] + s[r / 2]);
            merged.extend_from_slice(&s[r / 2 + 1..]);
            *c = BlockComposition::new(c.family(), merged, false).expect("merge keeps symmetry");
            enlarged = true;
        }
    }
    (p, q, enlarged)
}

fn check_same_group(p: &BlockComposition, q: &BlockComposition) -> Result<()> {
    if p.family() != q.family() || p.n() != q.n() {
        return Err(Error::GroupMismatch(
            format!("{}_{}", p.family(), p.n()),
            format!("{}_{}", q.family(), q.n()),
        ));
    }
    Ok(())
}

pub fn build_block_grid(p: &BlockComposition, q: &BlockComposition) -> Result<BlockGrid> {
    check_same_group(p, q)?;
    let (p, q, enlarged) = unstroked_pair(p, q);
    let (bp, bq) = (block_index(p.sizes()), block_index(q.sizes()));
    let n = p.n();
    let mut refined_sizes = Vec::new();
    let mut starts = Vec::new();
    for i in 0..n {
        if i == 0 || bp[i] != bp[i - 1] || bq[i] != bq[i - 1] {
            starts.push(i);
            refined_sizes.push(0);
        }
        *refined_sizes.last_mut().expect("pushed above") += 1;
    }
    let r = refined_sizes.len();
    let mut active = BTreeSet::new();
    let mut antidiag = BTreeSet::new();
    for i in 0..r {
        for j in i + 1..r {
            let (a, b) = (starts[i], starts[j]);
            if bp[a] < bp[b] && bq[a] < bq[b] {
                active.insert((i, j));
                if p.family() == ClassicalFamily::SO && i + j == r - 1 {
                    antidiag.insert((i, j));
                }
            }
        }
    }
    Ok(BlockGrid {
        family: p.family(),
        refined_sizes,
        active,
        antidiag,
        enlarged,
    })
}

/// One matrix entry, normalized to a representative of its mirror class.
type Var = (usize, usize);

impl BlockGrid {
    fn starts(&self) -> Vec<usize> {
        self.refined_sizes
            .iter()
            .scan(0, |acc, k| {
                let s = *acc;
                *acc += k;
                Some(s)
            })
            .collect()
    }

    fn n(&self) -> usize {
        self.refined_sizes.iter().sum()
    }

    fn var(&self, a: usize, b: usize) -> Var {
        if self.family == ClassicalFamily::SL {
            return (a, b);
        }
        let n = self.n();
        (a, b).min((n - 1 - b, n - 1 - a))
    }

    fn usable(&self, cell: (usize, usize)) -> bool {
        self.active.contains(&cell) && !self.antidiag.contains(&cell)
    }

    /// Variables of each square invariant: lower-left entries of the four blocks.
    fn square_candidates(&self) -> Vec<BTreeSet<Var>> {
        let starts = self.starts();
        let last_row = |i: usize| starts[i] + self.refined_sizes[i] - 1;
        let mut out = Vec::new();
        let cells: Vec<_> = self.active.iter().copied().filter(|&c| self.usable(c)).collect();
        for &(i, j) in &cells {
            for &(k, l) in &cells {
                if k <= i || l <= j {
                    continue;
                }
                if !self.usable((i, l)) || !self.usable((k, j)) {
                    continue;
                }
                let vars: BTreeSet<Var> = [(i, j), (i, l), (k, j), (k, l)]
                    .iter()
                    .map(|&(x, y)| self.var(last_row(x), starts[y]))
                    .collect();
                if vars.len() == 4 {
                    out.push(vars);
                }
            }
        }
        out
    }

    /// Variables of each triangle invariant: bottom row of `X_ij`, lower-left
    /// entry of `X_ik`, left column of `X_jk`.
    fn triangle_candidates(&self) -> Vec<BTreeSet<Var>> {
        let starts = self.starts();
        let rows = |i: usize| starts[i]..starts[i] + self.refined_sizes[i];
        let last_row = |i: usize| starts[i] + self.refined_sizes[i] - 1;
        let mut out = Vec::new();
        for &(i, j) in self.active.iter().filter(|&&c| self.usable(c)) {
            for k in j + 1..self.refined_sizes.len() {
                if !self.usable((i, k)) || !self.usable((j, k)) {
                    continue;
                }
                let row: BTreeSet<Var> = rows(j).map(|b| self.var(last_row(i), b)).collect();
                let col: BTreeSet<Var> = rows(j).map(|a| self.var(a, starts[k])).collect();
                let corner = self.var(last_row(i), starts[k]);
                if !row.is_disjoint(&col) || row.contains(&corner) || col.contains(&corner) {
                    continue;
                }
                let mut vars: BTreeSet<Var> = row.union(&col).copied().collect();
                vars.insert(corner);
                out.push(vars);
            }
        }
        out
    }

    /// Greedy count of invariants, each using a variable unseen by earlier ones.
    pub fn independent_invariants(&self) -> usize {
        let mut seen: BTreeSet<Var> = BTreeSet::new();
        let mut count = 0;
        for vars in self.square_candidates().into_iter().chain(self.triangle_candidates()) {
            if !vars.is_subset(&seen) {
                count += 1;
                seen.extend(vars);
            }
        }
        count
    }

    /// Bound from rows carrying at least three blocks of height ≥ 2.
    pub fn wide_row_bound(&self) -> usize {
        (0..self.refined_sizes.len())
            .filter(|&i| self.refined_sizes[i] >= 2)
            .map(|i| {
                let blocks = self
                    .active
                    .iter()
                    .filter(|&&(a, b)| a == i && self.usable((a, b)))
                    .count();
                match blocks {
                    0..=2 => 0,
                    3 => 1,
                    _ => 2,
                }
            })
            .max()
            .unwrap_or(0)
    }
}

pub fn pattern_lower_bound(grid: &BlockGrid) -> usize {
    grid.independent_invariants().max(grid.wide_row_bound())
}

/// Dense `n × n` integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<i64>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn bracket(&self, other: &Matrix) -> Matrix {
        let mut ab = self.mul(other);
        let ba = other.mul(self);
        for (x, y) in ab.data.iter_mut().zip(&ba.data) {
            *x -= y;
        }
        ab
    }
}

/// The invariant form of SO_n or Sp_n in the chosen basis.
pub fn invariant_form(family: ClassicalFamily, n: usize) -> Option<Matrix> {
    let mut f = Matrix::zero(n);
    for i in 0..n {
        let s = match family {
            ClassicalFamily::SL => return None,
            ClassicalFamily::SO => 1,
            ClassicalFamily::Sp if i < n / 2 => 1,
            ClassicalFamily::Sp => -1,
        };
        f.add_to(i, n - 1 - i, s);
    }
    Some(f)
}

/// Bases of `Lie(B ∩ L ∩ M)` and `p_u ∩ q_u` as explicit matrices.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub family: ClassicalFamily,
    pub n: usize,
    pub borel: Vec<Matrix>,
    pub nilradical: Vec<Matrix>,
    /// Matrix positions read off as coordinates on `p_u ∩ q_u`, one per basis element.
    coordinates: Vec<(usize, usize)>,
    /// Positions where elements of `p_u ∩ q_u` may be nonzero.
    support: Vec<bool>,
}

/// Largest matrix size accepted by the oracle by default.
pub const DEFAULT_ORACLE_MAX_N: usize = 14;

impl MatrixModel {
    pub fn new(p: &BlockComposition, q: &BlockComposition) -> Result<Self> {
        Self::with_cap(p, q, DEFAULT_ORACLE_MAX_N)
    }

    pub fn with_cap(p: &BlockComposition, q: &BlockComposition, max_n: usize) -> Result<Self> {
        check_same_group(p, q)?;
        let (family, n) = (p.family(), p.n());
        if n > max_n {
            return Err(Error::CapExceeded(format!("matrix oracle size {n} > {max_n}")));
        }
        let conj = |c: &BlockComposition| {
            let mut idx = block_index(c.sizes());
            if c.stroke() {
                idx.swap(n / 2 - 1, n / 2);
            }
            idx
        };
        let (bp, bq) = (conj(p), conj(q));
        let sign = |i: usize| -> i64 {
            if family == ClassicalFamily::Sp && i >= n / 2 {
                -1
            } else {
                1
            }
        };
        let mirror = |i: usize| n - 1 - i;
        // Basis element with a one at (a, b), completed to the Lie algebra.
        let element = |a: usize, b: usize| -> Option<Matrix> {
            let mut m = Matrix::zero(n);
            m.add_to(a, b, 1);
            if family != ClassicalFamily::SL {
                let (a2, b2) = (mirror(b), mirror(a));
                m.add_to(a2, b2, -sign(mirror(a)) * sign(mirror(b)));
            }
            (!m.is_zero()).then_some(m)
        };
        let representative = |a: usize, b: usize| {
            family == ClassicalFamily::SL || (a, b) <= (mirror(b), mirror(a))
        };
        let mut borel = Vec::new();
        let mut nilradical = Vec::new();
        let mut coordinates = Vec::new();
        let mut support = vec![false; n * n];
        for a in 0..n {
            for b in a..n {
                if !representative(a, b) {
                    continue;
                }
                let in_levis = bp[a] == bp[b] && bq[a] == bq[b];
                let in_radicals = bp[a] < bp[b] && bq[a] < bq[b];
                if in_levis {
                    if let Some(m) = element(a, b) {
                        borel.push(m);
                    }
                } else if in_radicals {
                    if let Some(m) = element(a, b) {
                        for (k, &x) in m.data.iter().enumerate() {
                            if x != 0 {
                                support[k] = true;
                            }
                        }
                        nilradical.push(m);
                        coordinates.push((a, b));
                    }
                }
            }
        }
        Ok(Self {
            family,
            n,
            borel,
            nilradical,
            coordinates,
            support,
        })
    }

    pub fn dim_nilradical(&self) -> usize {
        self.nilradical.len()
    }

    /// A point of `p_u ∩ q_u` with independent uniform coefficients.
    pub fn random_point(&self, rng: &mut impl Rng, range: i64) -> Matrix {
        let mut v = Matrix::zero(self.n);
        for basis in &self.nilradical {
            let c: i64 = rng.gen_range(-range..=range);
            for (x, y) in v.data.iter_mut().zip(&basis.data) {
                *x += c * y;
            }
        }
        v
    }

    /// Coordinates of an element of `p_u ∩ q_u`; fails if it leaves the space.
    pub fn coordinates_of(&self, m: &Matrix) -> Result<Vec<i64>> {
        for (k, &x) in m.data.iter().enumerate() {
            if x != 0 && !self.support[k] {
                return Err(Error::Invariant(format!(
                    "bracket leaves p_u ∩ q_u at ({}, {})",
                    k / self.n,
                    k % self.n
                )));
            }
        }
        Ok(self.coordinates.iter().map(|&(a, b)| m.get(a, b)).collect())
    }

    /// Dimension of the orbit tangent space `[Lie(B ∩ L ∩ M), v]`.
    pub fn orbit_rank(&self, v: &Matrix) -> Result<usize> {
        let rows = self
            .borel
            .iter()
            .map(|xi| self.coordinates_of(&xi.bracket(v)))
            .filter(|r| !matches!(r, Ok(c) if c.iter().all(|&x| x == 0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(integer_rank(&rows))
    }

    /// Orbit ranks at `samples` seeded random points.
    pub fn sample_ranks(&self, seed: u64, samples: usize, range: i64) -> Result<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let v = self.random_point(&mut rng, range);
                self.orbit_rank(&v)
            })
            .collect()
    }
}

/// Sampling parameters of the generic-orbit oracle.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub samples: usize,
    pub range: i64,
    pub max_n: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            samples: 3,
            range: 1_000_000,
            max_n: DEFAULT_ORACLE_MAX_N,
        }
    }
}

/// `dim(p_u ∩ q_u)` minus the largest sampled orbit dimension.
pub fn generic_orbit_complexity(p: &BlockComposition, q: &BlockComposition, seed: u64) -> Result<usize> {
    generic_orbit_complexity_with(p, q, seed, OracleConfig::default())
}

pub fn generic_orbit_complexity_with(
    p: &BlockComposition,
    q: &BlockComposition,
    seed: u64,
    cfg: OracleConfig,
) -> Result<usize> {
    let model = MatrixModel::with_cap(p, q, cfg.max_n)?;
    let ranks = model.sample_ranks(seed, cfg.samples.max(1), cfg.range)?;
    let best = ranks.into_iter().max().unwrap_or(0);
    Ok(model.dim_nilradical() - best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainVariant {
    /// `r = m + 1` diagonal blocks.
    A,
    /// `r = m + 2` diagonal blocks.
    B,
}

/// Smallest `m` covered by the recursion, whose values are fixtures.
pub fn chain_base(family: ClassicalFamily) -> Result<usize> {
    match family {
        ClassicalFamily::SO => Ok(3),
        ClassicalFamily::Sp => Ok(2),
        ClassicalFamily::SL => Err(Error::InvalidParabolic(
            "chain recursion is defined for SO and Sp only".into(),
        )),
    }
}

/// Base values `(c_{m0,a}, c_{m0,b})`, frozen from engine output on
/// [`chain_realization`] at the base `m0`.
const SO_CHAIN_BASE: (usize, usize) = (0, 0);
const SP_CHAIN_BASE: (usize, usize) = (0, 0);

/// `c_{m,variant}` from the recursion `c_{m,a} = c_{m-1,b} + 1`, `c_{m,b} = c_{m-1,a}`.
pub fn chain_complexity(m: usize, variant: ChainVariant, family: ClassicalFamily) -> Result<usize> {
    let base = chain_base(family)?;
    if m < base {
        return Err(Error::BelowRange(format!("m = {m} < {base} for {family}")));
    }
    let (mut a, mut b) = match family {
        ClassicalFamily::SO => SO_CHAIN_BASE,
        _ => SP_CHAIN_BASE,
    };
    for _ in base..m {
        (a, b) = (b + 1, a);
    }
    Ok(match variant {
        ChainVariant::A => a,
        ChainVariant::B => b,
    })
}

/// The pair `P = (1, n-2, 1)` and `Q` whose nonzero blocks fill only the first
/// row and last column, with `m` blocks in the first row.
///
/// Variant A: `Q = (1, w, ..., w, 1)` with `m + 1` blocks. Variant B:
/// `Q = (u, w, ..., w, u)` with `m` blocks, `u ≥ 2`.
pub fn chain_realization(
    family: ClassicalFamily,
    m: usize,
    variant: ChainVariant,
    inner_width: usize,
    outer_width: usize,
) -> Result<(BlockComposition, BlockComposition)> {
    let (outer, inner_count) = match variant {
        ChainVariant::A => (1, m.checked_sub(1)),
        ChainVariant::B => (outer_width, m.checked_sub(2)),
    };
    let inner_count = inner_count.ok_or_else(|| Error::BelowRange(format!("m = {m}")))?;
    if variant == ChainVariant::B && outer_width < 2 {
        return Err(Error::InvalidParabolic("variant B needs outer width >= 2".into()));
    }
    let mut q = vec![outer];
    q.extend(std::iter::repeat_n(inner_width, inner_count));
    q.push(outer);
    let n: usize = q.iter().sum();
    let blocks = q.len();
    let p = BlockComposition::new(family, vec![1, n - 2, 1], false)?;
    let q = BlockComposition::new(family, q, false)?;
    if q.sizes().len() != blocks {
        return Err(Error::InvalidParabolic(format!(
            "chain realization {q} merges its middle blocks"
        )));
    }
    Ok((p, q))
}

/// Engine complexity of a chain realization.
pub fn chain_engine_value(p: &BlockComposition, q: &BlockComposition) -> usize {
    let sys = RootSystem::new(p.root_system());
    complexity_of_masks(&sys, p.to_subset().mask(), q.to_subset().mask(), TieBreak::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::parse_composition;
    use ClassicalFamily::{Sp, SL, SO};

    fn comp(f: ClassicalFamily, s: &str) -> BlockComposition {
        parse_composition(f, s).unwrap()
    }

    fn grid_from_cells(family: ClassicalFamily, sizes: Vec<usize>, cells: &[(usize, usize)]) -> BlockGrid {
        BlockGrid {
            family,
            refined_sizes: sizes,
            active: cells.iter().copied().collect(),
            antidiag: BTreeSet::new(),
            enlarged: false,
        }
    }

    #[test]
    fn sl_grid_example() {
        let g = build_block_grid(&comp(SL, "2,2"), &comp(SL, "1,2,1")).unwrap();
        assert_eq!(g.refined_sizes, vec![1, 1, 1, 1]);
        let expected: BTreeSet<_> = [(0, 2), (0, 3), (1, 3)].into_iter().collect();
        assert_eq!(g.active, expected);
        let g = build_block_grid(&comp(SL, "5"), &comp(SL, "1,2,2")).unwrap();
        assert!(g.active.is_empty());
    }

    #[test]
    fn sp6_grid() {
        let g = build_block_grid(&comp(Sp, "1,4,1"), &comp(Sp, "3,3")).unwrap();
        assert_eq!(g.refined_sizes, vec![1, 2, 2, 1]);
        let expected: BTreeSet<_> = [(0, 2), (0, 3), (1, 3)].into_iter().collect();
        assert_eq!(g.active, expected);
        assert_eq!(pattern_lower_bound(&g), 0);
    }

    #[test]
    fn pattern_examples() {
        let sq = grid_from_cells(SL, vec![2, 2, 2, 2], &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(pattern_lower_bound(&sq) >= 1);
        let tri = grid_from_cells(SL, vec![1, 1, 1], &[(0, 1), (0, 2), (1, 2)]);
        assert!(pattern_lower_bound(&tri) >= 1);
        let empty = grid_from_cells(SL, vec![3], &[]);
        assert_eq!(pattern_lower_bound(&empty), 0);
        let row = grid_from_cells(SL, vec![2, 1, 1, 1, 1], &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(row.wide_row_bound(), 2);
    }

    #[test]
    fn forms_are_preserved() {
        for (f, s, t) in [
            (SO, "2,3,2", "1,5,1"),
            (SO, "2,2,2,2'", "4,4"),
            (SO, "1,3,1", "2,1,2"),
            (Sp, "1,2,2,1", "3,3"),
            (Sp, "1,1,1,1,1,1", "2,2,2"),
        ] {
            let (p, q) = (comp(f, s), comp(f, t));
            let model = MatrixModel::new(&p, &q).unwrap();
            let form = invariant_form(f, p.n()).unwrap();
            for x in model.borel.iter().chain(&model.nilradical) {
                let lhs = x.transpose().mul(&form);
                let rhs = form.mul(x);
                assert!(lhs.data.iter().zip(&rhs.data).all(|(a, b)| a + b == 0));
                for i in 0..x.n {
                    for j in 0..i {
                        assert_eq!(x.get(i, j), 0, "not upper triangular");
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(generic_orbit_complexity(&comp(SL, "2,2"), &comp(SL, "2,2"), 1).unwrap(), 0);
        assert_eq!(generic_orbit_complexity(&comp(Sp, "1,4,1"), &comp(Sp, "3,3"), 1).unwrap(), 0);
        assert_eq!(generic_orbit_complexity(&comp(SL, "3,6"), &comp(SL, "3,3,3"), 1).unwrap(), 1);
        let big = comp(SL, "8,8");
        assert!(matches!(
            generic_orbit_complexity(&big, &big, 1),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn chain_recursion_steps() {
        assert_eq!(chain_complexity(4, ChainVariant::A, SO).unwrap(), chain_complexity(3, ChainVariant::B, SO).unwrap() + 1);
        assert_eq!(chain_complexity(4, ChainVariant::B, Sp).unwrap(), chain_complexity(3, ChainVariant::A, Sp).unwrap());
        assert!(matches!(chain_complexity(2, ChainVariant::A, SO), Err(Error::BelowRange(_))));
        assert!(chain_complexity(3, ChainVariant::A, SL).is_err());
    }
}
