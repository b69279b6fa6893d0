//! Brute-force tensor product decomposition: Freudenthal multiplicities, the
//! product of characters, and peeling of maximal dominant weights. Type A also
//! has a Littlewood–Richardson tableau counter as a second, unrelated method.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::rootsys::{Family, RootSystem, RootSystemId};
use crate::weights::{normalize_terms, DecompositionTerm, Weight, WeightLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    pub max_rank: usize,
    /// Largest module whose full character (all weights) is materialized.
    pub max_dim: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_rank: 8,
            max_dim: 20_000,
        }
    }
}

/// Multiplicity of every weight of a module.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightCharacter {
    pub weights: BTreeMap<Weight, u64>,
}

impl WeightCharacter {
    pub fn dimension(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.weights.get(w).copied().unwrap_or(0)
    }
}

/// Multiplicities on dominant weights only; the rest follow by Weyl invariance.
pub type DominantCharacter = BTreeMap<Weight, u64>;

pub struct CharOracle {
    lattice: WeightLattice,
    caps: OracleCaps,
    cache: RwLock<HashMap<Weight, Arc<DominantCharacter>>>,
}

impl CharOracle {
    pub fn new(id: RootSystemId) -> Result<Self> {
        Self::with_caps(id, OracleCaps::default())
    }

    pub fn with_caps(id: RootSystemId, caps: OracleCaps) -> Result<Self> {
        if id.rank() > caps.max_rank {
            return Err(Error::CapExceeded(format!(
                "{id} has rank {} > {}",
                id.rank(),
                caps.max_rank
            )));
        }
        Ok(Self {
            lattice: WeightLattice::new(&RootSystem::new(id)),
            caps,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> &WeightLattice {
        &self.lattice
    }

    /// Freudenthal's recursion over the dominant weights of `V_λ`.
    pub fn dominant_character(&self, lambda: &Weight) -> Result<Arc<DominantCharacter>> {
        self.lattice.check_dominant(lambda)?;
        if let Some(hit) = self.cache.read().expect("cache lock").get(lambda) {
            return Ok(hit.clone());
        }
        let lat = &self.lattice;
        let dominant = dominant_weights_below(lat, lambda);
        let rho = lat.rho();
        let top = lambda.add(&rho);
        let top_norm = lat.inner(&top, &top);
        let roots: Vec<&Weight> = lat.positive_roots().collect();

        let mut mult: DominantCharacter = BTreeMap::new();
        for mu in &dominant {
            if mu == lambda {
                mult.insert(mu.clone(), 1);
                continue;
            }
            let shifted = mu.add(&rho);
            let den = top_norm - lat.inner(&shifted, &shifted);
            let mut num: i64 = 0;
            for alpha in &roots {
                let mut cur = mu.add(alpha);
                loop {
                    // Weight strings are unbroken, so the first gap ends the string.
                    let m = match mult.get(&lat.dominant_rep(&cur)) {
                        Some(&m) => m as i64,
                        None => break,
                    };
                    num += m * lat.inner(&cur, alpha);
                    cur = cur.add(alpha);
                }
            }
            num *= 2;
            if den <= 0 || num % den != 0 || num < 0 {
                return Err(Error::Invariant(format!(
                    "Freudenthal step at {mu} in V_{lambda} gave {num}/{den}"
                )));
            }
            if num > 0 {
                mult.insert(mu.clone(), (num / den) as u64);
            }
        }
        let arc = Arc::new(mult);
        self.cache
            .write()
            .expect("cache lock")
            .entry(lambda.clone())
            .or_insert_with(|| arc.clone());
        Ok(arc)
    }

    /// All weights of `V_λ` with multiplicities.
    pub fn character(&self, lambda: &Weight) -> Result<WeightCharacter> {
        self.lattice.check_dominant(lambda)?;
        let dim = self.lattice.dimension_u64(lambda)?;
        if dim.is_none_or(|d| d > self.caps.max_dim) {
            return Err(Error::CapExceeded(format!(
                "dim V_{lambda} = {} exceeds the cap {}",
                self.lattice.dimension(lambda)?,
                self.caps.max_dim
            )));
        }
        let dominant = self.dominant_character(lambda)?;
        let mut weights = BTreeMap::new();
        for (mu, &m) in dominant.iter() {
            for w in self.lattice.orbit(mu) {
                weights.insert(w, m);
            }
        }
        let ch = WeightCharacter { weights };
        if Some(ch.dimension()) != dim {
            return Err(Error::Invariant(format!(
                "character of V_{lambda} has total mass {} but dimension {dim:?}",
                ch.dimension()
            )));
        }
        Ok(ch)
    }

    fn multiplicity_in(&self, ch: &DominantCharacter, w: &Weight) -> u64 {
        ch.get(&self.lattice.dominant_rep(w)).copied().unwrap_or(0)
    }

    /// `V_λ ⊗ V_μ` by multiplying characters and peeling off irreducibles.
    pub fn tensor(&self, lambda: &Weight, mu: &Weight) -> Result<Vec<DecompositionTerm>> {
        let lat = &self.lattice;
        lat.check_dominant(lambda)?;
        lat.check_dominant(mu)?;
        // Materialize the smaller factor; the larger is only queried on dominant reps.
        let (small, large) = if lat.dimension(lambda)? <= lat.dimension(mu)? {
            (lambda, mu)
        } else {
            (mu, lambda)
        };
        let small_ch = self.character(small)?;
        let large_ch = self.dominant_character(large)?;
        let top = lambda.add(mu);

        let mut product: BTreeMap<Weight, i64> = BTreeMap::new();
        for nu in dominant_weights_below(lat, &top) {
            let m: u64 = small_ch
                .weights
                .iter()
                .map(|(w, &m)| m * self.multiplicity_in(&large_ch, &nu.sub(w)))
                .sum();
            if m > 0 {
                product.insert(nu, m as i64);
            }
        }

        let mut terms = Vec::new();
        loop {
            let Some(peak) = self.peak(&product) else { break };
            let count = product[&peak];
            let summand = self.dominant_character(&peak)?;
            for (w, &m) in summand.iter() {
                let e = product.entry(w.clone()).or_insert(0);
                *e -= count * m as i64;
                if *e < 0 {
                    return Err(Error::Invariant(format!(
                        "peeling V_{peak} from V_{lambda} ⊗ V_{mu} left weight {w} at {e}"
                    )));
                }
            }
            product.retain(|_, m| *m != 0);
            terms.push(DecompositionTerm {
                highest_weight: peak,
                multiplicity: count as u64,
            });
        }
        Ok(normalize_terms(terms))
    }

    /// Highest remaining dominant weight: greatest height, then lexicographically greatest.
    fn peak(&self, product: &BTreeMap<Weight, i64>) -> Option<Weight> {
        product
            .keys()
            .max_by(|a, b| {
                self.lattice
                    .height(a)
                    .cmp(&self.lattice.height(b))
                    .then_with(|| a.cmp(b))
            })
            .cloned()
    }
}

/// Dominant weights `μ ≤ λ`, sorted by decreasing height.
///
/// Any dominant `μ < ν` admits a positive root `α` with `ν − α` dominant and
/// still `≥ μ`, so subtracting positive roots from `λ` reaches them all.
pub fn dominant_weights_below(lat: &WeightLattice, lambda: &Weight) -> Vec<Weight> {
    let roots: Vec<&Weight> = lat.positive_roots().collect();
    let mut seen = std::collections::HashSet::new();
    seen.insert(lambda.clone());
    let mut stack = vec![lambda.clone()];
    while let Some(cur) = stack.pop() {
        for alpha in &roots {
            let next = cur.sub(alpha);
            if next.is_dominant() && seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    let mut out: Vec<Weight> = seen.into_iter().collect();
    out.sort_by(|a, b| lat.height(b).cmp(&lat.height(a)).then_with(|| b.cmp(a)));
    out
}

/// Partition with at most `n` rows for an `SL_n` weight.
pub fn partition_of(labels: &[i64]) -> Result<Vec<usize>> {
    if labels.iter().any(|&l| l < 0) {
        return Err(Error::InvalidWeight(format!("{labels:?} is not dominant")));
    }
    let mut rows = vec![0usize; labels.len() + 1];
    for i in (0..labels.len()).rev() {
        rows[i] = rows[i + 1] + labels[i] as usize;
    }
    while rows.last() == Some(&0) {
        rows.pop();
    }
    Ok(rows)
}

/// `SL_n` labels of a partition; full columns drop out, `None` past `n` rows.
pub fn labels_of(partition: &[usize], n: usize) -> Option<Weight> {
    if partition.len() > n {
        return None;
    }
    let row = |i: usize| partition.get(i).copied().unwrap_or(0) as i64;
    Some(Weight::new((0..n - 1).map(|i| row(i) - row(i + 1)).collect()))
}

/// Littlewood–Richardson coefficients `c^ν_{λμ}` restricted to at most
/// `max_rows` rows.
pub fn littlewood_richardson(
    lambda: &[usize],
    mu: &[usize],
    max_rows: usize,
) -> BTreeMap<Vec<usize>, u64> {
    let mut shape: Vec<usize> = lambda.to_vec();
    shape.resize(max_rows, 0);
    let labels = mu.iter().filter(|&&m| m > 0).count();
    // counts[row][label]: boxes carrying `label` in `row`.
    let mut counts = vec![vec![0usize; labels]; max_rows];
    let mut out = BTreeMap::new();
    if lambda.len() > max_rows {
        return out;
    }
    add_strips(&mut shape, &mut counts, mu, 0, &mut out);
    out
}

fn add_strips(
    shape: &mut Vec<usize>,
    counts: &mut Vec<Vec<usize>>,
    mu: &[usize],
    label: usize,
    out: &mut BTreeMap<Vec<usize>, u64>,
) {
    if label == mu.len() || mu[label] == 0 {
        let mut key = shape.clone();
        while key.last() == Some(&0) {
            key.pop();
        }
        *out.entry(key).or_insert(0) += 1;
        return;
    }
    let old = shape.clone();
    place_row(shape, counts, &old, mu, label, 0, mu[label], out);
}

/// Distributes the remaining boxes of `label` over rows `row..` as a
/// horizontal strip, checking the lattice-word condition row by row.
#[allow(clippy::too_many_arguments)]
fn place_row(
    shape: &mut Vec<usize>,
    counts: &mut Vec<Vec<usize>>,
    old: &[usize],
    mu: &[usize],
    label: usize,
    row: usize,
    remaining: usize,
    out: &mut BTreeMap<Vec<usize>, u64>,
) {
    if remaining == 0 {
        add_strips(shape, counts, mu, label + 1, out);
        return;
    }
    if row == shape.len() {
        return;
    }
    // A horizontal strip never overhangs the previous row's old length.
    let cap = if row == 0 { remaining } else { (old[row - 1] - old[row]).min(remaining) };
    for take in (0..=cap).rev() {
        if label > 0 && take > 0 {
            let above: usize = (0..row).map(|r| counts[r][label - 1]).sum();
            let mine: usize = (0..=row).map(|r| counts[r][label]).sum::<usize>() + take;
            if mine > above {
                continue;
            }
        }
        shape[row] = old[row] + take;
        counts[row][label] += take;
        place_row(shape, counts, old, mu, label, row + 1, remaining - take, out);
        counts[row][label] -= take;
        shape[row] = old[row];
    }
}

/// `V_λ ⊗ V_μ` for `SL_n` via Littlewood–Richardson.
pub fn lr_tensor(n: usize, lambda: &Weight, mu: &Weight) -> Result<Vec<DecompositionTerm>> {
    if n < 2 || lambda.rank() != n - 1 || mu.rank() != n - 1 {
        return Err(Error::InvalidWeight(format!(
            "SL_{n} needs {} labels, got {lambda} and {mu}",
            n.saturating_sub(1)
        )));
    }
    let (pl, pm) = (partition_of(lambda.labels())?, partition_of(mu.labels())?);
    let terms = littlewood_richardson(&pl, &pm, n)
        .into_iter()
        .filter_map(|(nu, c)| {
            labels_of(&nu, n).map(|w| DecompositionTerm {
                highest_weight: w,
                multiplicity: c,
            })
        })
        .collect();
    Ok(normalize_terms(terms))
}

/// Convenience wrapper for a one-off decomposition.
pub fn tensor_oracle(id: RootSystemId, lambda: &Weight, mu: &Weight) -> Result<Vec<DecompositionTerm>> {
    CharOracle::new(id)?.tensor(lambda, mu)
}

/// Whether the type A tableau counter applies.
pub fn has_lr(id: RootSystemId) -> bool {
    id.family() == Family::A
}
