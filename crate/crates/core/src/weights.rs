//! Integral weights in fundamental-weight (Dynkin label) coordinates and the
//! Weyl-group data needed by the character oracle and the decomposition engines.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{Rational, RootSystem, RootSystemId};

/// Weight `Σ labels[i] ω_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(labels: Vec<i64>) -> Self {
        Self(labels)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    /// `ω_i`, 1-based.
    pub fn fundamental(rank: usize, i: usize) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::InvalidWeight(format!("ω_{i} outside rank {rank}")));
        }
        let mut w = Self::zero(rank);
        w.0[i - 1] = 1;
        Ok(w)
    }

    pub fn labels(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Comma-separated labels, optionally bracketed: `1,0,2` or `[1,0,2]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        if inner.trim().is_empty() {
            return Ok(Weight(Vec::new()));
        }
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad weight label '{t}' in '{s}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

/// One irreducible summand `multiplicity · V_{highest_weight}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub highest_weight: Weight,
    pub multiplicity: u64,
}

impl fmt::Display for DecompositionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.highest_weight, self.multiplicity)
    }
}

/// Sorts by weight and merges equal weights.
pub fn normalize_terms(mut terms: Vec<DecompositionTerm>) -> Vec<DecompositionTerm> {
    terms.sort();
    let mut out: Vec<DecompositionTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.highest_weight == t.highest_weight => last.multiplicity += t.multiplicity,
            _ => out.push(t),
        }
    }
    out.retain(|t| t.multiplicity > 0);
    out
}

/// Weight lattice of one root system.
///
/// Inner products are returned scaled by a fixed positive integer so that all
/// values stay integral; only ratios of them are ever meaningful.
#[derive(Clone, Debug)]
pub struct WeightLattice {
    id: RootSystemId,
    /// `form[i][j] = scale · (ω_i, ω_j)`.
    form: Vec<Vec<i64>>,
    /// Simple root `α_j` in labels: `simple[j][i] = <α_j, α_i^∨>`.
    simple: Vec<Weight>,
    /// Positive roots in labels, paired with their simple-root coordinates.
    positive: Vec<(Weight, Vec<i64>)>,
    /// `(α_k, α_k)` for the simple roots, integral.
    simple_norms: Vec<i64>,
    /// `ω_i = Σ_k to_roots[i][k] α_k`.
    to_roots: Vec<Vec<Rational>>,
}

impl WeightLattice {
    pub fn new(system: &RootSystem) -> Self {
        let r = system.rank();
        let gram = system.gram();
        let cartan = system.cartan();
        let simple_norms: Vec<i64> = (0..r).map(|k| gram[k][k]).collect();
        let simple: Vec<Weight> = (0..r).map(|j| Weight((0..r).map(|i| cartan[j][i]).collect())).collect();
        let positive = system
            .positive_roots()
            .iter()
            .map(|root| {
                let coords: Vec<i64> = root.coords().iter().map(|&c| c as i64).collect();
                let mut labels = vec![0i64; r];
                for (j, &c) in coords.iter().enumerate() {
                    for (l, s) in labels.iter_mut().zip(simple[j].labels()) {
                        *l += c * s;
                    }
                }
                (Weight(labels), coords)
            })
            .collect();

        // (ω_i, α_j) = δ_ij (α_j, α_j)/2, so ω_i = Σ_k M_ik α_k with M = Δ B⁻¹.
        let b: Vec<Vec<Rational>> = gram
            .iter()
            .map(|row| row.iter().map(|&x| Ratio::from_integer(x)).collect())
            .collect();
        let b_inv = rational_inverse(&b).expect("Gram matrix of simple roots is nonsingular");
        let half_norm = |k: usize| Ratio::new(simple_norms[k], 2);
        let to_roots: Vec<Vec<Rational>> = (0..r)
            .map(|i| (0..r).map(|k| half_norm(i) * b_inv[i][k]).collect())
            .collect();
        let rat_form: Vec<Vec<Rational>> = (0..r)
            .map(|i| (0..r).map(|j| half_norm(i) * b_inv[i][j] * half_norm(j)).collect())
            .collect();
        let scale = rat_form.iter().flatten().fold(1i64, |acc, x| acc.lcm(x.denom()));
        let form = rat_form
            .iter()
            .map(|row| row.iter().map(|x| (x * scale).to_integer()).collect())
            .collect();
        Self {
            id: system.id(),
            form,
            simple,
            positive,
            simple_norms,
            to_roots,
        }
    }

    pub fn id(&self) -> RootSystemId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn check(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::InvalidWeight(format!(
                "{w} has {} labels, {} expects {}",
                w.rank(),
                self.id,
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn check_dominant(&self, w: &Weight) -> Result<()> {
        self.check(w)?;
        if !w.is_dominant() {
            return Err(Error::InvalidWeight(format!("{w} is not dominant for {}", self.id)));
        }
        Ok(())
    }

    /// Scaled inner product.
    pub fn inner(&self, x: &Weight, y: &Weight) -> i64 {
        let mut acc = 0;
        for (i, &xi) in x.0.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.0.iter().enumerate() {
                acc += xi * self.form[i][j] * yj;
            }
        }
        acc
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    pub fn simple_root(&self, j: usize) -> &Weight {
        &self.simple[j]
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Weight> {
        self.positive.iter().map(|(w, _)| w)
    }

    /// Height of the weight in simple-root coordinates.
    pub fn height(&self, w: &Weight) -> Rational {
        let mut h = Rational::zero();
        for (l, row) in w.0.iter().zip(&self.to_roots) {
            for x in row {
                h += *x * Ratio::from_integer(*l);
            }
        }
        h
    }

    pub fn reflect(&self, w: &Weight, j: usize) -> Weight {
        let k = w.0[j];
        if k == 0 {
            return w.clone();
        }
        w.sub(&self.simple[j].scaled(k))
    }

    /// The unique dominant weight in the Weyl orbit.
    pub fn dominant_rep(&self, w: &Weight) -> Weight {
        let mut cur = w.clone();
        while let Some(j) = cur.0.iter().position(|&x| x < 0) {
            cur = self.reflect(&cur, j);
        }
        cur
    }

    /// Full Weyl orbit, sorted.
    pub fn orbit(&self, w: &Weight) -> Vec<Weight> {
        let start = self.dominant_rep(w);
        let mut seen = std::collections::HashSet::new();
        seen.insert(start.clone());
        let mut stack = vec![start];
        let mut out = Vec::new();
        while let Some(cur) = stack.pop() {
            for j in 0..self.rank() {
                // Reflect downwards only; every orbit element is reached from
                // the dominant one by such steps.
                if cur.0[j] > 0 {
                    let next = self.reflect(&cur, j);
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
            out.push(cur);
        }
        out.sort();
        out
    }

    /// Weyl dimension formula.
    pub fn dimension(&self, w: &Weight) -> Result<BigUint> {
        self.check_dominant(w)?;
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (_, coords) in &self.positive {
            // <λ+ρ, α^∨> / <ρ, α^∨> with α^∨ expanded over the simple coroots.
            let mut top = 0i64;
            let mut bottom = 0i64;
            for (k, &c) in coords.iter().enumerate() {
                top += c * (w.0[k] + 1) * self.simple_norms[k];
                bottom += c * self.simple_norms[k];
            }
            num *= top as u64;
            den *= bottom as u64;
        }
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() {
            return Err(Error::Invariant(format!("Weyl dimension of {w} is not integral")));
        }
        Ok(q)
    }

    /// `dimension` as a machine integer, or `None` past `u64`.
    pub fn dimension_u64(&self, w: &Weight) -> Result<Option<u64>> {
        Ok(u64::try_from(self.dimension(w)?).ok())
    }

    /// Labels of an ambient vector: `<x, α_i^∨>` for each simple root.
    pub fn from_ambient(&self, system: &RootSystem, x: &[Rational]) -> Result<Weight> {
        let amb = system.ambient();
        if x.len() != amb.dim() {
            return Err(Error::InvalidWeight(format!(
                "ambient vector of length {} for {} (expects {})",
                x.len(),
                self.id,
                amb.dim()
            )));
        }
        let mut labels = Vec::with_capacity(self.rank());
        for s in &amb.simple {
            let val = amb.inner(x, s) * Ratio::from_integer(2) / amb.inner(s, s);
            if !val.is_integer() {
                return Err(Error::InvalidWeight(format!(
                    "ambient vector is not an integral weight of {}",
                    self.id
                )));
            }
            labels.push(val.to_integer());
        }
        Ok(Weight(labels))
    }
}

/// Gauss–Jordan inverse over the rationals.
pub fn rational_inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f * *y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
