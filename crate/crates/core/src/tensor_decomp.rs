//! Spaces of sections on double flag varieties of complexity 0 and 1 from
//! B-stable divisor data, with the two bundled worked instances.
//!
//! A divisor contributes `⟨v, λ⟩ + m` to the order of `f_λ s_δ`. For
//! complexity 0 the sections are indexed by lattice points of
//! `{λ : ⟨v_i, λ⟩ ≥ −m_i}`. For complexity 1 only divisors with `h = 0` cut
//! out the region, and the others enter the multiplicity through one minimum
//! per center on the projective line.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::integer_rank;
use crate::polytope::{Inequality, Polytope};
use crate::rootsys::{Family, Rational, RootSystem, RootSystemId};
use crate::weights::{normalize_terms, DecompositionTerm, Weight, WeightLattice};

/// Center of a valuation on the quotient line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Center {
    Zero,
    One,
    Infinity,
    /// The family `D(z)` over all remaining points.
    Generic,
    /// No center (`h = 0`).
    None,
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Center::Zero => "0",
            Center::One => "1",
            Center::Infinity => "inf",
            Center::Generic => "generic",
            Center::None => "-",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorDatum {
    name: String,
    v: Vec<i64>,
    m: i64,
    h: u32,
    z: Center,
}

impl DivisorDatum {
    pub fn new(name: impl Into<String>, v: Vec<i64>, m: i64, h: u32, z: Center) -> Result<Self> {
        let name = name.into();
        if (h == 0) != (z == Center::None) {
            return Err(Error::InvalidDivisorData(format!(
                "{name}: order {h} with center {z}"
            )));
        }
        if z == Center::Generic && (h != 1 || m != 0 || v.iter().any(|&x| x != 0)) {
            return Err(Error::InvalidDivisorData(format!(
                "{name}: the generic family has v = 0, h = 1 and no coefficient"
            )));
        }
        Ok(Self { name, v, m, h, z })
    }

    /// Divisor with `h = 0`.
    pub fn boundary(name: impl Into<String>, v: Vec<i64>, m: i64) -> Result<Self> {
        Self::new(name, v, m, 0, Center::None)
    }

    pub fn generic_family(dim: usize) -> Self {
        Self {
            name: "D(z)".into(),
            v: vec![0; dim],
            m: 0,
            h: 1,
            z: Center::Generic,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn v(&self) -> &[i64] {
        &self.v
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn center(&self) -> Center {
        self.z
    }

    /// Copy with a different center (order 1 unless moved to `None`).
    pub fn with_center(&self, z: Center) -> Result<Self> {
        let h = if z == Center::None { 0 } else { self.h.max(1) };
        Self::new(self.name.clone(), self.v.clone(), self.m, h, z)
    }

    /// `⟨v, λ⟩ + m`.
    pub fn order(&self, point: &[i64]) -> i64 {
        self.v.iter().zip(point).map(|(a, b)| a * b).sum::<i64>() + self.m
    }
}

/// The weight lattice `Λ` of B-eigenfunctions with the shift `π(δ)`.
#[derive(Clone, Debug)]
pub struct LatticeModel {
    group: RootSystemId,
    /// Basis of `Λ` in ambient ε-coordinates.
    basis_weights: Vec<Vec<Rational>>,
    /// Shift weight in fundamental-weight coordinates.
    pi_delta: Weight,
    basis_labels: Vec<Weight>,
    lattice: WeightLattice,
}

impl LatticeModel {
    pub fn new(group: RootSystemId, basis_weights: Vec<Vec<Rational>>, pi_delta: Weight) -> Result<Self> {
        let system = RootSystem::new(group);
        let lattice = WeightLattice::new(&system);
        lattice.check_dominant(&pi_delta)?;
        let basis_labels = basis_weights
            .iter()
            .map(|b| lattice.from_ambient(&system, b))
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<i64>> = basis_labels.iter().map(|w| w.labels().to_vec()).collect();
        if integer_rank(&rows) != rows.len() {
            return Err(Error::InvalidDivisorData(
                "lattice basis weights are linearly dependent".into(),
            ));
        }
        Ok(Self {
            group,
            basis_weights,
            pi_delta,
            basis_labels,
            lattice,
        })
    }

    pub fn group(&self) -> RootSystemId {
        self.group
    }

    pub fn rank(&self) -> usize {
        self.basis_weights.len()
    }

    pub fn basis_weights(&self) -> &[Vec<Rational>] {
        &self.basis_weights
    }

    pub fn pi_delta(&self) -> &Weight {
        &self.pi_delta
    }

    pub fn weight_lattice(&self) -> &WeightLattice {
        &self.lattice
    }

    /// `λ + π(δ)` for `λ` with the given coordinates.
    pub fn shifted_weight(&self, coords: &[i64]) -> Weight {
        coords
            .iter()
            .zip(&self.basis_labels)
            .fold(self.pi_delta.clone(), |acc, (&c, b)| acc.add(&b.scaled(c)))
    }
}

fn check_dims(divisors: &[DivisorDatum], lat: &LatticeModel) -> Result<()> {
    for d in divisors {
        if d.v.len() != lat.rank() {
            return Err(Error::InvalidDivisorData(format!(
                "{}: vector of length {} for a lattice of rank {}",
                d.name,
                d.v.len(),
                lat.rank()
            )));
        }
    }
    Ok(())
}

/// The inequalities `⟨v_i, λ⟩ ≥ −m_i` of the divisors with `h = 0`, deduplicated.
pub fn region_inequalities(divisors: &[DivisorDatum]) -> Vec<Inequality> {
    let mut rows: Vec<Inequality> = divisors
        .iter()
        .filter(|d| d.h == 0)
        .map(|d| Inequality::new(d.v.clone(), -d.m))
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

/// Lattice points of the region cut out by the `h = 0` divisors.
pub fn polytope_lattice_points(divisors: &[DivisorDatum], lat: &LatticeModel) -> Result<Vec<Vec<i64>>> {
    check_dims(divisors, lat)?;
    let mut poly = Polytope::new(lat.rank());
    for row in region_inequalities(divisors) {
        poly.push(row)?;
    }
    poly.lattice_points()
}

fn dominant_term(lat: &LatticeModel, coords: &[i64], multiplicity: u64) -> Result<DecompositionTerm> {
    let w = lat.shifted_weight(coords);
    if !w.is_dominant() {
        return Err(Error::Invariant(format!(
            "λ + π(δ) = {w} at {coords:?} is not dominant; the divisor data is wrong"
        )));
    }
    Ok(DecompositionTerm {
        highest_weight: w,
        multiplicity,
    })
}

/// Complexity 0: one multiplicity-free summand per lattice point.
pub fn decompose_spherical(divisors: &[DivisorDatum], lat: &LatticeModel) -> Result<Vec<DecompositionTerm>> {
    if let Some(d) = divisors.iter().find(|d| d.h != 0) {
        return Err(Error::InvalidDivisorData(format!(
            "{} has order {}; spherical data has no centers",
            d.name, d.h
        )));
    }
    let terms = polytope_lattice_points(divisors, lat)?
        .iter()
        .map(|p| dominant_term(lat, p, 1))
        .collect::<Result<Vec<_>>>()?;
    let n = terms.len();
    let merged = normalize_terms(terms);
    if merged.len() != n {
        return Err(Error::Invariant("two lattice points gave the same highest weight".into()));
    }
    Ok(merged)
}

/// Divisors with `h ≠ 0` grouped by center, generic family excluded.
pub fn centers(divisors: &[DivisorDatum]) -> BTreeMap<Center, Vec<&DivisorDatum>> {
    let mut out: BTreeMap<Center, Vec<&DivisorDatum>> = BTreeMap::new();
    for d in divisors.iter().filter(|d| d.h != 0 && d.z != Center::Generic) {
        out.entry(d.z).or_default().push(d);
    }
    out
}

/// `max(1 + Σ_z m_z, 0)` with `m_z = min ⌈(⟨v_i, λ⟩ + m_i) / h_i⌉` over the
/// divisors centered at `z`; other points of the line contribute 0.
pub fn section_multiplicity(divisors: &[DivisorDatum], point: &[i64]) -> u64 {
    let total: i64 = centers(divisors)
        .values()
        .map(|group| {
            group
                .iter()
                .map(|d| Integer::div_ceil(&d.order(point), &(d.h as i64)))
                .min()
                .expect("groups are nonempty")
        })
        .sum();
    (1 + total).max(0) as u64
}

/// Largest number of choice inequalities generated for the support region.
const MAX_CHOICE_ROWS: usize = 1 << 14;

/// Linear relaxation of `{λ : m(δ, λ) > 0}`. Positive multiplicity means
/// `Σ_z m_z ≥ 0`, and `⌈x/h⌉ ≤ (x + h − 1)/h` for integral `x`, so each choice of
/// one divisor per center satisfies `Σ_z (L/h_z)(⟨v_z, λ⟩ + m_z + h_z − 1) ≥ 0`
/// with `L` the lcm of the orders. Exact when every order is 1.
pub fn support_inequalities(divisors: &[DivisorDatum], dim: usize) -> Result<Vec<Inequality>> {
    let groups: Vec<Vec<&DivisorDatum>> = centers(divisors).into_values().collect();
    if groups.is_empty() {
        return Ok(Vec::new());
    }
    let count = groups.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.len()));
    if count.is_none_or(|c| c > MAX_CHOICE_ROWS) {
        return Err(Error::CapExceeded("too many center combinations".into()));
    }
    let lcm = divisors.iter().filter(|d| d.h != 0).fold(1i64, |a, d| a.lcm(&(d.h as i64)));
    let mut rows = Vec::new();
    let mut pick = vec![0usize; groups.len()];
    loop {
        let mut coeffs = vec![0i64; dim];
        let mut constant = 0i64;
        for (g, &k) in groups.iter().zip(&pick) {
            let d = g[k];
            let scale = lcm / d.h as i64;
            for (c, x) in coeffs.iter_mut().zip(&d.v) {
                *c += scale * x;
            }
            constant += scale * (d.m + d.h as i64 - 1);
        }
        rows.push(Inequality::new(coeffs, -constant));
        let mut i = 0;
        loop {
            if i == pick.len() {
                rows.sort();
                rows.dedup();
                return Ok(rows);
            }
            pick[i] += 1;
            if pick[i] < groups[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Complexity 1: summands over the lattice points of positive multiplicity.
pub fn decompose_complexity_one(divisors: &[DivisorDatum], lat: &LatticeModel) -> Result<Vec<DecompositionTerm>> {
    check_dims(divisors, lat)?;
    let mut poly = Polytope::new(lat.rank());
    for row in region_inequalities(divisors) {
        poly.push(row)?;
    }
    for row in support_inequalities(divisors, lat.rank())? {
        poly.push(row)?;
    }
    let mut terms = Vec::new();
    for p in poly.lattice_points()? {
        let mult = section_multiplicity(divisors, &p);
        if mult > 0 {
            terms.push(dominant_term(lat, &p, mult)?);
        }
    }
    Ok(normalize_terms(terms))
}

/// `Σ multiplicity · dim V_weight`.
pub fn total_dimension(lat: &WeightLattice, terms: &[DecompositionTerm]) -> Result<BigUint> {
    let mut total = BigUint::default();
    for t in terms {
        total += lat.dimension(&t.highest_weight)? * t.multiplicity;
    }
    Ok(total)
}

fn int(x: i64) -> Rational {
    Ratio::from_integer(x)
}

fn epsilon_diff(dim: usize, plus: Option<usize>, sign_minus: i64, minus: usize) -> Vec<Rational> {
    let mut v = vec![int(0); dim];
    if let Some(p) = plus {
        v[p] += int(1);
    }
    v[minus] += int(sign_minus);
    v
}

/// First worked instance: `Sp_{2l}` with parabolics `(1, 2l−2, 1)` and `(l, l)`,
/// `δ = pD_1 + qD_2`, decomposing `V_{pω_1} ⊗ V_{qω_l}`.
pub fn example1_divisor_data(l: usize, p: i64, q: i64) -> Result<(Vec<DivisorDatum>, LatticeModel)> {
    if l < 2 {
        return Err(Error::InvalidDivisorData(format!("needs l ≥ 2, got {l}")));
    }
    if p < 0 || q < 0 {
        return Err(Error::InvalidDivisorData("coefficients must be nonnegative".into()));
    }
    let group = RootSystemId::new(Family::C, l)?;
    // Λ = ⟨ε₁ − ε_l, ε₁ + ε_l⟩.
    let basis = vec![
        epsilon_diff(l, Some(0), -1, l - 1),
        epsilon_diff(l, Some(0), 1, l - 1),
    ];
    let mut pi = Weight::fundamental(l, 1)?.scaled(p);
    pi = pi.add(&Weight::fundamental(l, l)?.scaled(q));
    let lat = LatticeModel::new(group, basis, pi)?;
    let divisors = vec![
        DivisorDatum::boundary("D1", vec![1, 1], p)?,
        DivisorDatum::boundary("D2", vec![0, 1], q)?,
        DivisorDatum::boundary("D3", vec![1, -1], 0)?,
        DivisorDatum::boundary("D4", vec![-1, 0], 0)?,
    ];
    Ok((divisors, lat))
}

pub fn decompose_example1(l: usize, p: i64, q: i64) -> Result<Vec<DecompositionTerm>> {
    let (divisors, lat) = example1_divisor_data(l, p, q)?;
    decompose_spherical(&divisors, &lat)
}

/// The summation over `0 ≤ b ≤ a ≤ p, a + b ≤ 2q, a ≡ b (mod 2)` of
/// `V_{(p+q−a)ε₁ + qε₂ + … + qε_{l−1} + (q−b)ε_l}`.
pub fn example1_closed_form(l: usize, p: i64, q: i64) -> Result<Vec<DecompositionTerm>> {
    let (_, lat) = example1_divisor_data(l, p, q)?;
    let system = RootSystem::new(lat.group());
    let mut terms = Vec::new();
    for a in 0..=p {
        for b in 0..=a {
            if a + b > 2 * q || (a - b) % 2 != 0 {
                continue;
            }
            let mut eps = vec![int(q); l];
            eps[0] = int(p + q - a);
            eps[l - 1] = int(q - b);
            terms.push(DecompositionTerm {
                highest_weight: lat.weight_lattice().from_ambient(&system, &eps)?,
                multiplicity: 1,
            });
        }
    }
    Ok(normalize_terms(terms))
}

/// Second worked instance on `SL_n`, `n = q1 + q2 + q3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Example2Params {
    pub q: [usize; 3],
    pub m: [i64; 3],
}

impl Example2Params {
    pub fn new(q: [usize; 3], m: [i64; 3]) -> Result<Self> {
        if q.iter().any(|&x| x < 3) {
            return Err(Error::InvalidDivisorData(format!(
                "all of q1, q2, q3 must be at least 3, got {q:?}"
            )));
        }
        if m.iter().any(|&x| x < 0) {
            return Err(Error::InvalidDivisorData("coefficients must be nonnegative".into()));
        }
        Ok(Self { q, m })
    }

    pub fn n(&self) -> usize {
        self.q.iter().sum()
    }

    /// 1-based indices `j` of the lattice basis `ε_j − ε_1`.
    pub fn basis_indices(&self) -> [usize; 8] {
        let (s1, s2) = (self.q[0], self.q[0] + self.q[1]);
        [2, 3, s1 + 1, s1 + 2, s1 + 3, s2 + 1, s2 + 2, s2 + 3]
    }

    /// Fundamental weight indices carrying `m1, m2, m3` in `π(δ)`.
    pub fn pi_indices(&self) -> [usize; 3] {
        [3, self.q[0], self.q[0] + self.q[1]]
    }

    /// The two tensor factors `m1ω_3` and `m2ω_{q1} + m3ω_{q1+q2}`.
    pub fn factors(&self) -> Result<(Weight, Weight)> {
        let r = self.n() - 1;
        let [i1, i2, i3] = self.pi_indices();
        let left = Weight::fundamental(r, i1)?.scaled(self.m[0]);
        let right = Weight::fundamental(r, i2)?
            .scaled(self.m[1])
            .add(&Weight::fundamental(r, i3)?.scaled(self.m[2]));
        Ok((left, right))
    }
}

const E2_DIM: usize = 8;

fn e2_vec(entries: &[(usize, i64)]) -> Vec<i64> {
    let mut v = vec![0; E2_DIM];
    for &(k, x) in entries {
        v[k - 1] = x;
    }
    v
}

pub fn example2_divisor_data(params: Example2Params) -> Result<(Vec<DivisorDatum>, LatticeModel)> {
    let n = params.n();
    let group = RootSystemId::new(Family::A, n - 1)?;
    let basis = params
        .basis_indices()
        .iter()
        .map(|&j| epsilon_diff(n, Some(j - 1), -1, 0))
        .collect();
    let (left, right) = params.factors()?;
    let lat = LatticeModel::new(group, basis, left.add(&right))?;
    let [m1, m2, m3] = params.m;
    let b = DivisorDatum::boundary;
    let c = |name: &str, v: Vec<i64>, z: Center| DivisorDatum::new(name, v, 0, 1, z);
    // Exponent of F_i in the basis functions, per basis function.
    let divisors = vec![
        b("D1", e2_vec(&[(2, 1)]), m1)?,
        b("D2", e2_vec(&[(3, -1)]), m2)?,
        b("D3", e2_vec(&[(6, -1)]), m3)?,
        c("D4", e2_vec(&[(1, 1)]), Center::Zero)?,
        c("D5", e2_vec(&[(1, -1), (2, -1), (5, -1), (6, -1)]), Center::Infinity)?,
        b("D6", e2_vec(&[(5, 1)]), 0)?,
        c("D7", e2_vec(&[(2, -1)]), Center::Infinity)?,
        c("D8", e2_vec(&[(3, -1), (8, -1)]), Center::Zero)?,
        b("D9", e2_vec(&[(8, 1)]), 0)?,
        c("D10", e2_vec(&[(1, -1), (4, -1), (7, -1)]), Center::One)?,
        c("D11", e2_vec(&[(1, 1), (2, 1), (4, 1), (6, 1)]), Center::Zero)?,
        c("D12", e2_vec(&[(3, 1), (7, 1)]), Center::Infinity)?,
        c("D13", vec![0; E2_DIM], Center::One)?,
        DivisorDatum::generic_family(E2_DIM),
    ];
    Ok((divisors, lat))
}

pub fn decompose_example2_engine(params: Example2Params) -> Result<Vec<DecompositionTerm>> {
    let (divisors, lat) = example2_divisor_data(params)?;
    decompose_complexity_one(&divisors, &lat)
}

/// An affine form `coeffs · a + constant` in the eight lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineForm {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

/// The printed region: `a2 ≥ −m1, a3 ≤ m2, a6 ≤ m3, a5 ≥ 0, a8 ≥ 0`.
pub fn example2_printed_inequalities(params: Example2Params) -> Vec<Inequality> {
    let [m1, m2, m3] = params.m;
    let mut rows = vec![
        Inequality::new(e2_vec(&[(2, 1)]), -m1),
        Inequality::new(e2_vec(&[(3, -1)]), -m2),
        Inequality::new(e2_vec(&[(6, -1)]), -m3),
        Inequality::new(e2_vec(&[(5, 1)]), 0),
        Inequality::new(e2_vec(&[(8, 1)]), 0),
    ];
    rows.sort();
    rows
}

/// The three minima of the printed multiplicity, each as a sorted set of forms.
pub fn example2_printed_minima() -> Vec<Vec<AffineForm>> {
    let f = |entries: &[(usize, i64)]| AffineForm {
        coeffs: e2_vec(entries),
        constant: 0,
    };
    let mut groups = vec![
        vec![f(&[(1, -1), (2, -1), (5, -1), (6, -1)]), f(&[(2, -1)]), f(&[(3, 1), (7, 1)])],
        vec![f(&[(1, 1)]), f(&[(3, -1), (8, -1)]), f(&[(1, 1), (2, 1), (4, 1), (6, 1)])],
        vec![f(&[(1, -1), (4, -1), (7, -1)]), f(&[])],
    ];
    for g in groups.iter_mut() {
        g.sort();
    }
    groups.sort();
    groups
}

/// The minima the engine evaluates, in the same normal form as the printed ones.
pub fn engine_minima(divisors: &[DivisorDatum]) -> Result<Vec<Vec<AffineForm>>> {
    let mut groups = Vec::new();
    for group in centers(divisors).values() {
        let mut forms = Vec::new();
        for d in group {
            if d.h != 1 {
                return Err(Error::InvalidDivisorData(format!(
                    "{} has order {}; an affine normal form needs order 1",
                    d.name, d.h
                )));
            }
            forms.push(AffineForm {
                coeffs: d.v.clone(),
                constant: d.m,
            });
        }
        forms.sort();
        groups.push(forms);
    }
    groups.sort();
    Ok(groups)
}

/// The printed `m(ā)`.
pub fn example2_printed_multiplicity(a: &[i64]) -> u64 {
    let [a1, a2, a3, a4, a5, a6, a7, a8] = [a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]];
    let total = 1
        + (-a1 - a2 - a5 - a6).min(-a2).min(a3 + a7)
        + a1.min(-a3 - a8).min(a1 + a2 + a4 + a6)
        + (-a1 - a4 - a7).min(0);
    total.max(0) as u64
}

/// `λ(ā, m̄) = m1ω_3 + m2ω_{q1} + m3ω_{q1+q2} − (Σ a)ε_1 + a_1ε_2 + …` in labels.
pub fn example2_printed_weight(params: Example2Params, a: &[i64]) -> Result<Weight> {
    let n = params.n();
    let mut eps = vec![0i64; n];
    let [i1, i2, i3] = params.pi_indices();
    for (idx, m) in [i1, i2, i3].into_iter().zip(params.m) {
        for e in eps.iter_mut().take(idx) {
            *e += m;
        }
    }
    eps[0] -= a.iter().sum::<i64>();
    for (&j, &x) in params.basis_indices().iter().zip(a) {
        eps[j - 1] += x;
    }
    Ok(Weight::new((0..n - 1).map(|i| eps[i] - eps[i + 1]).collect()))
}

/// Closed form evaluated over the lattice points where the printed formula is positive.
pub fn decompose_example2(params: Example2Params) -> Result<Vec<DecompositionTerm>> {
    let mut poly = Polytope::new(E2_DIM);
    for row in example2_printed_inequalities(params) {
        poly.push(row)?;
    }
    // Positive multiplicity means the three minima sum to at least 0, which
    // holds iff every choice of one form per minimum does.
    let minima = example2_printed_minima();
    for x in &minima[0] {
        for y in &minima[1] {
            for z in &minima[2] {
                let coeffs = (0..E2_DIM).map(|k| x.coeffs[k] + y.coeffs[k] + z.coeffs[k]).collect();
                poly.push(Inequality::new(coeffs, 0))?;
            }
        }
    }
    let mut terms = Vec::new();
    for a in poly.lattice_points()? {
        let mult = example2_printed_multiplicity(&a);
        if mult > 0 {
            let w = example2_printed_weight(params, &a)?;
            if !w.is_dominant() {
                return Err(Error::Invariant(format!("λ(ā, m̄) = {w} at {a:?} is not dominant")));
            }
            terms.push(DecompositionTerm {
                highest_weight: w,
                multiplicity: mult,
            });
        }
    }
    Ok(normalize_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64], m: u64) -> DecompositionTerm {
        DecompositionTerm {
            highest_weight: Weight::new(v.to_vec()),
            multiplicity: m,
        }
    }

    #[test]
    fn example1_smallest() {
        let (div, lat) = example1_divisor_data(2, 1, 1).unwrap();
        let pts = polytope_lattice_points(&div, &lat).unwrap();
        // (c1, c2) = (0, 0) and (0, −1), i.e. (a, b) = (0, 0) and (1, 1).
        assert_eq!(pts, vec![vec![0, -1], vec![0, 0]]);
        let terms = decompose_example1(2, 1, 1).unwrap();
        assert_eq!(terms, vec![t(&[1, 0], 1), t(&[1, 1], 1)]);
        let dim = total_dimension(lat.weight_lattice(), &terms).unwrap();
        assert_eq!(dim, BigUint::from(20u32));
    }

    #[test]
    fn example1_trivial_cases() {
        let (div, lat) = example1_divisor_data(3, 0, 0).unwrap();
        assert_eq!(polytope_lattice_points(&div, &lat).unwrap(), vec![vec![0, 0]]);
        assert_eq!(decompose_example1(3, 0, 2).unwrap(), vec![t(&[0, 0, 2], 1)]);
    }

    #[test]
    fn example1_engine_matches_closed_form() {
        for l in 2..=4 {
            for p in 0..=3 {
                for q in 0..=3 {
                    assert_eq!(
                        decompose_example1(l, p, q).unwrap(),
                        example1_closed_form(l, p, q).unwrap(),
                        "l={l} p={p} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn example2_data_shape() {
        let params = Example2Params::new([3, 4, 5], [1, 2, 0]).unwrap();
        let (div, _) = example2_divisor_data(params).unwrap();
        assert_eq!(div.len(), 14);
        let d6 = div.iter().find(|d| d.name() == "D6").unwrap();
        assert_eq!(d6.v(), e2_vec(&[(5, 1)]).as_slice());
        let generic = div.last().unwrap();
        assert_eq!((generic.v().iter().all(|&x| x == 0), generic.h()), (true, 1));
        let grouped = centers(&div);
        let names = |z| grouped[&z].iter().map(|d| d.name().to_string()).collect::<Vec<_>>();
        assert_eq!(names(Center::Zero), ["D4", "D8", "D11"]);
        assert_eq!(names(Center::Infinity), ["D5", "D7", "D12"]);
        assert_eq!(names(Center::One), ["D10", "D13"]);
        assert!(div.iter().filter(|d| d.m() != 0).all(|d| ["D1", "D2", "D3"].contains(&d.name())));
        assert!(Example2Params::new([2, 3, 3], [0, 0, 0]).is_err());
    }

    #[test]
    fn example2_symbolic_agreement() {
        let params = Example2Params::new([3, 3, 3], [2, 1, 2]).unwrap();
        let (div, _) = example2_divisor_data(params).unwrap();
        assert_eq!(region_inequalities(&div), example2_printed_inequalities(params));
        assert_eq!(engine_minima(&div).unwrap(), example2_printed_minima());
    }

    #[test]
    fn example2_unbounded_without_support() {
        let params = Example2Params::new([3, 3, 3], [1, 1, 0]).unwrap();
        let (div, lat) = example2_divisor_data(params).unwrap();
        assert!(matches!(
            polytope_lattice_points(&div, &lat),
            Err(Error::Unbounded { .. })
        ));
    }

    #[test]
    fn example2_trivial() {
        let params = Example2Params::new([3, 3, 3], [0, 0, 0]).unwrap();
        assert_eq!(decompose_example2(params).unwrap(), vec![t(&[0; 8], 1)]);
        assert_eq!(decompose_example2_engine(params).unwrap(), vec![t(&[0; 8], 1)]);
    }

    #[test]
    fn multiplicity_clamp_and_trivial() {
        let params = Example2Params::new([3, 3, 3], [0, 0, 0]).unwrap();
        let (div, _) = example2_divisor_data(params).unwrap();
        assert_eq!(section_multiplicity(&div, &[0; 8]), 1);
        let far = e2_vec(&[(2, 5)]);
        assert_eq!(section_multiplicity(&div, &far), 0);
        assert_eq!(example2_printed_multiplicity(&far), 0);
    }

    #[test]
    fn divisor_validation() {
        assert!(DivisorDatum::new("x", vec![1], 0, 0, Center::Zero).is_err());
        assert!(DivisorDatum::new("x", vec![1], 0, 1, Center::None).is_err());
        assert!(DivisorDatum::new("x", vec![1], 0, 1, Center::Generic).is_err());
        let d = DivisorDatum::boundary("x", vec![1, 2], 3).unwrap();
        assert_eq!(d.order(&[1, 1]), 6);
    }

    #[test]
    fn non_dominant_output_fails() {
        let (mut div, lat) = example1_divisor_data(2, 1, 1).unwrap();
        // Dropping D4 admits points with b > a.
        div.pop();
        div.push(DivisorDatum::boundary("D4", vec![-1, 0], 5).unwrap());
        assert!(matches!(decompose_spherical(&div, &lat), Err(Error::Invariant(_))));
    }

    #[test]
    fn dependent_basis_rejected() {
        let group = RootSystemId::new(Family::C, 2).unwrap();
        let b = vec![vec![int(1), int(0)], vec![int(2), int(0)]];
        assert!(LatticeModel::new(group, b, Weight::zero(2)).is_err());
    }
}
