//! Complexity of `G/P × G/Q` as the complexity of `L ∩ M` acting on
//! `p_u ∩ q_u`, computed by stripping weights off the root sets.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::integer_rank;
use crate::parabolic::{ParabolicSpec, SimpleRootSubset};
use crate::rootsys::{Root, RootSystem, RootSystemId, TieBreak};

/// A set of root indices of one [`RootSystem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    words: Vec<u64>,
}

impl RootSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * 64 + bit
                })
            })
        })
    }
}

/// Nonzero weights of `l ∩ m` (`e`) and the weights of `p_u ∩ q_u` (`f`).
#[derive(Clone, Debug)]
pub struct WeightSetPair<'a> {
    system: &'a RootSystem,
    e: RootSet,
    f: RootSet,
}

impl<'a> WeightSetPair<'a> {
    /// Build from explicit index sets; `f` must be positive and disjoint from `e`.
    pub fn new(system: &'a RootSystem, e: RootSet, f: RootSet) -> Result<Self> {
        for i in f.iter() {
            if !system.is_positive_index(i) || e.contains(i) {
                return Err(Error::Invariant(format!(
                    "weight {:?} cannot lie in p_u ∩ q_u",
                    system.root(i)
                )));
            }
        }
        Ok(Self { system, e, f })
    }

    pub fn system(&self) -> &RootSystem {
        self.system
    }

    pub fn e_set(&self) -> &RootSet {
        &self.e
    }

    pub fn f_set(&self) -> &RootSet {
        &self.f
    }

    pub fn e_roots(&self) -> Vec<&Root> {
        self.e.iter().map(|i| self.system.root(i)).collect()
    }

    pub fn f_roots(&self) -> Vec<&Root> {
        self.f.iter().map(|i| self.system.root(i)).collect()
    }
}

/// Weight sets for the standard parabolics with Levi roots `i_mask` and `j_mask`.
pub fn intersection_weight_sets(system: &RootSystem, i_mask: u64, j_mask: u64) -> WeightSetPair<'_> {
    let n = system.num_roots();
    let common = i_mask & j_mask;
    let mut e = RootSet::empty(n);
    let mut f = RootSet::empty(n);
    for idx in 0..n {
        let s = system.support(idx);
        if s & !common == 0 {
            e.insert(idx);
        } else if system.is_positive_index(idx) && s & !i_mask != 0 && s & !j_mask != 0 {
            f.insert(idx);
        }
    }
    WeightSetPair { system, e, f }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrippingResult {
    pub mus: Vec<Root>,
    pub n_weights: usize,
    pub rank: usize,
    pub complexity: usize,
}

pub fn strip(pair: &WeightSetPair<'_>) -> StrippingResult {
    strip_with(pair, TieBreak::default())
}

pub fn strip_with(pair: &WeightSetPair<'_>, tie: TieBreak) -> StrippingResult {
    let sys = pair.system;
    let mut e = pair.e.clone();
    let mut f = pair.f.clone();
    let mut mus: Vec<usize> = Vec::new();
    while !f.is_empty() {
        let before = f.len();
        let mu = f
            .iter()
            .reduce(|best, c| if tie.prefers(sys.root(c), sys.root(best)) { c } else { best })
            .expect("f is nonempty");
        let moved: Vec<(usize, usize)> = e
            .iter()
            .filter_map(|a| sys.sum_index(a, mu).filter(|&s| f.contains(s)).map(|s| (a, s)))
            .collect();
        for (a, s) in moved {
            e.remove(a);
            f.remove(s);
        }
        f.remove(mu);
        mus.push(mu);
        assert!(f.len() < before, "stripping failed to shrink F");
    }
    let vectors: Vec<Vec<i64>> = mus
        .iter()
        .map(|&i| sys.root(i).coords().iter().map(|&c| c as i64).collect())
        .collect();
    let rank = integer_rank(&vectors);
    StrippingResult {
        n_weights: mus.len(),
        rank,
        complexity: mus.len() - rank,
        mus: mus.iter().map(|&i| sys.root(i).clone()).collect(),
    }
}

/// Complexity for Levi subsets `I`, `J` of an already built system.
pub fn complexity_of_masks(system: &RootSystem, i_mask: u64, j_mask: u64, tie: TieBreak) -> usize {
    strip_with(&intersection_weight_sets(system, i_mask, j_mask), tie).complexity
}

fn masks(group: RootSystemId, p: &ParabolicSpec, q: &ParabolicSpec) -> Result<(u64, u64)> {
    for spec in [p, q] {
        if spec.root_system() != group {
            return Err(Error::GroupMismatch(
                group.to_string(),
                spec.root_system().to_string(),
            ));
        }
    }
    Ok((p.to_subset().mask(), q.to_subset().mask()))
}

pub fn complexity(group: RootSystemId, p: &ParabolicSpec, q: &ParabolicSpec) -> Result<usize> {
    let (i, j) = masks(group, p, q)?;
    let system = RootSystem::new(group);
    Ok(complexity_of_masks(&system, i, j, TieBreak::default()))
}

/// `½(dim G − dim L − dim M − dim T)`.
pub fn dimension_lower_bound_masks(system: &RootSystem, i_mask: u64, j_mask: u64) -> Ratio<i64> {
    let r = system.rank() as i64;
    let dim_g = system.dimension() as i64;
    let dim_l = r + system.levi_root_count(i_mask) as i64;
    let dim_m = r + system.levi_root_count(j_mask) as i64;
    Ratio::new(dim_g - dim_l - dim_m - r, 2)
}

pub fn dimension_lower_bound(
    group: RootSystemId,
    p: &ParabolicSpec,
    q: &ParabolicSpec,
) -> Result<Ratio<i64>> {
    let (i, j) = masks(group, p, q)?;
    Ok(dimension_lower_bound_masks(&RootSystem::new(group), i, j))
}

/// Shorthand used by tests and the CLI: complexity for removed-node lists.
pub fn complexity_removed(system: &RootSystem, p_removed: &[usize], q_removed: &[usize]) -> Result<usize> {
    let p = SimpleRootSubset::from_removed(system.id(), p_removed)?;
    let q = SimpleRootSubset::from_removed(system.id(), q_removed)?;
    Ok(complexity_of_masks(system, p.mask(), q.mask(), TieBreak::default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::{parse_composition, ClassicalFamily};
    use crate::rootsys::Family;
    use proptest::prelude::*;

    fn system(f: Family) -> RootSystem {
        RootSystem::new(RootSystemId::exceptional(f).unwrap())
    }

    #[test]
    fn trivial_weight_sets() {
        let s = system(Family::G2);
        let full = 0b11;
        let w = intersection_weight_sets(&s, full, full);
        assert!(w.f_set().is_empty());
        assert_eq!(w.e_set().len(), 12);
        let w = intersection_weight_sets(&s, 0, 0);
        assert!(w.e_set().is_empty());
        assert_eq!(w.f_set().len(), 6);
        let r = strip(&w);
        assert_eq!(r.n_weights, 6);
        let mut expected: Vec<Root> = s.positive_roots().to_vec();
        expected.sort_by_key(|r| r.height());
        assert_eq!(
            r.mus.iter().map(Root::height).collect::<Vec<_>>(),
            expected.iter().map(Root::height).collect::<Vec<_>>()
        );
        let empty = WeightSetPair::new(&s, RootSet::empty(12), RootSet::empty(12)).unwrap();
        assert_eq!(strip(&empty).complexity, 0);
        assert!(strip(&empty).mus.is_empty());
    }

    #[test]
    fn e6_worked_example() {
        let s = system(Family::E6);
        let p = SimpleRootSubset::from_removed(s.id(), &[1]).unwrap();
        let q = SimpleRootSubset::from_removed(s.id(), &[5]).unwrap();
        let w = intersection_weight_sets(&s, p.mask(), q.mask());
        // F: ε1 − ε6, six roots ε1 + εi + εj + ε, and 2ε.
        assert_eq!(w.f_set().len(), 8);
        let r = strip(&w);
        assert_eq!(r.complexity, 0);
        assert_eq!(r.n_weights, 2);
        let amb = s.ambient();
        let img = |root: &Root| amb.image(root.coords());
        let q = |n| num_rational::Ratio::from_integer(n);
        let mut eps16 = vec![q(0); 7];
        eps16[0] = q(1);
        eps16[5] = q(-1);
        let mut two_eps = vec![q(0); 7];
        two_eps[6] = q(2);
        assert!(amb.same_point(&img(&r.mus[0]), &eps16));
        assert!(amb.same_point(&img(&r.mus[1]), &two_eps));
    }

    #[test]
    fn headline_values() {
        assert_eq!(complexity_removed(&system(Family::E7), &[1], &[2]).unwrap(), 1);
        assert_eq!(complexity_removed(&system(Family::E8), &[1], &[1]).unwrap(), 2);
        let e8 = system(Family::E8);
        let b = dimension_lower_bound_masks(&e8, 0xFE, 0xFE);
        assert_eq!(b, Ratio::from_integer(-14));
    }

    #[test]
    fn dimension_bound_examples() {
        let a3 = RootSystem::new(RootSystemId::new(Family::A, 3).unwrap());
        assert_eq!(dimension_lower_bound_masks(&a3, 0, 0), Ratio::from_integer(3));
        assert!(dimension_lower_bound_masks(&a3, 0b111, 0b111) < Ratio::from_integer(0));
    }

    #[test]
    fn two_block_sl_pairs_are_spherical() {
        for n in 2..=9 {
            for p1 in 1..n {
                for q1 in 1..n {
                    let p = parse_composition(ClassicalFamily::SL, &format!("{p1},{}", n - p1)).unwrap();
                    let q = parse_composition(ClassicalFamily::SL, &format!("{q1},{}", n - q1)).unwrap();
                    let id = p.root_system();
                    assert_eq!(complexity(id, &p.into(), &q.into()).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn rejects_mixed_groups() {
        let e6 = RootSystemId::exceptional(Family::E6).unwrap();
        let e7 = RootSystemId::exceptional(Family::E7).unwrap();
        let p: ParabolicSpec = SimpleRootSubset::from_removed(e6, &[1]).unwrap().into();
        let q: ParabolicSpec = SimpleRootSubset::from_removed(e7, &[1]).unwrap().into();
        assert!(matches!(complexity(e6, &p, &q), Err(Error::GroupMismatch(..))));
    }

    fn systems() -> Vec<RootSystem> {
        ["A4", "B3", "C3", "D4", "G2", "F4", "E6"]
            .iter()
            .map(|s| RootSystem::new(s.parse().unwrap()))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn swap_symmetry(k in 0usize..7, a in any::<u64>(), b in any::<u64>()) {
            let sys = &systems()[k];
            let m = (1u64 << sys.rank()) - 1;
            let (i, j) = (a & m, b & m);
            prop_assert_eq!(
                complexity_of_masks(sys, i, j, TieBreak::default()),
                complexity_of_masks(sys, j, i, TieBreak::default())
            );
        }

        #[test]
        fn stripping_result_invariants(k in 0usize..7, a in any::<u64>(), b in any::<u64>()) {
            let sys = &systems()[k];
            let m = (1u64 << sys.rank()) - 1;
            let w = intersection_weight_sets(sys, a & m, b & m);
            let r = strip(&w);
            prop_assert!(r.rank <= r.n_weights.min(sys.rank()));
            let mut seen = std::collections::HashSet::new();
            for mu in &r.mus {
                let idx = sys.index_of(mu).unwrap();
                prop_assert!(w.f_set().contains(idx));
                prop_assert!(seen.insert(idx));
            }
            prop_assert!(dimension_lower_bound_masks(sys, a & m, b & m) <= Ratio::from_integer(r.complexity as i64));
        }
    }
}
