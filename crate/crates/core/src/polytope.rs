//! Integer points of rational polyhedra `{x : A x ≥ b}`.
//!
//! Every coordinate range comes from an exact simplex run over the rationals,
//! conditioned on the coordinates already fixed, so the scan visits only
//! prefixes that extend to a rational point of the region.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `coeffs · x ≥ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<i64>,
    pub bound: i64,
}

impl Inequality {
    pub fn new(coeffs: Vec<i64>, bound: i64) -> Self {
        Self { coeffs, bound }
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let lhs: i128 = self.coeffs.iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum();
        lhs >= self.bound as i128
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(BigRational),
    Unbounded,
    Infeasible,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Dense tableau for `max c·y, M y = rhs, y ≥ 0` with `rhs ≥ 0`.
struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        self.rhs[r] /= &p;
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, y) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Reduced costs for `cost` under the current basis.
    fn reduced(&self, cost: &[BigRational]) -> Vec<BigRational> {
        let mut red = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (x, y) in red.iter_mut().zip(&self.rows[r]) {
                *x -= &cost[b] * y;
            }
        }
        red
    }

    /// Bland's rule; columns `>= allowed` never enter.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            let red = self.reduced(cost);
            let Some(c) = (0..allowed).find(|&j| red[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][c].is_positive() {
                    let ratio = &self.rhs[r] / &self.rows[r][c];
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn value(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &cost[b] * v)
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Maximizes `objective · x` over `{x : A x ≥ b}` with `x` free.
pub fn maximize(rows: &[Inequality], objective: &[i64]) -> LpOutcome {
    let dim = objective.len();
    let m = rows.len();
    // y = (u, v, s, art): x = u − v and A(u − v) − s = b. Rows with b ≤ 0 are
    // negated so their slack starts basic; the others get an artificial.
    let needs_art: Vec<usize> = (0..m).filter(|&i| rows[i].bound > 0).collect();
    let n_struct = 2 * dim + m;
    let n = n_struct + needs_art.len();
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
    };
    for (i, ineq) in rows.iter().enumerate() {
        let sign = if ineq.bound > 0 { 1 } else { -1 };
        let mut row = vec![BigRational::zero(); n];
        for (k, &a) in ineq.coeffs.iter().enumerate() {
            if a != 0 {
                row[k] = rat(sign * a);
                row[dim + k] = rat(-sign * a);
            }
        }
        row[2 * dim + i] = rat(-sign);
        match needs_art.iter().position(|&j| j == i) {
            Some(a) => {
                row[n_struct + a] = BigRational::one();
                t.basis.push(n_struct + a);
            }
            None => t.basis.push(2 * dim + i),
        }
        t.rows.push(row);
        t.rhs.push(rat(sign * ineq.bound));
    }
    let mut phase1 = vec![BigRational::zero(); n];
    for c in phase1.iter_mut().skip(n_struct) {
        *c = -BigRational::one();
    }
    if !needs_art.is_empty() {
        t.optimize(&phase1, n_struct);
        if !t.value(&phase1).is_zero() {
            return LpOutcome::Infeasible;
        }
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n_struct {
            match (0..n_struct).find(|&j| !t.rows[r][j].is_zero()) {
                Some(c) => t.pivot(r, c),
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    let mut cost = vec![BigRational::zero(); n];
    for (k, &c) in objective.iter().enumerate() {
        cost[k] = rat(c);
        cost[dim + k] = rat(-c);
    }
    if t.optimize(&cost, n_struct) {
        LpOutcome::Optimal(t.value(&cost))
    } else {
        LpOutcome::Unbounded
    }
}

/// Integer range of coordinate `k` under rows `c·x ≥ b` in that coordinate alone.
fn single_variable_range(rows: &[Inequality], k: usize) -> Result<Option<(i64, i64)>> {
    let (mut lo, mut hi) = (None::<i64>, None::<i64>);
    for r in rows {
        let (c, b) = (r.coeffs[0], r.bound);
        if c > 0 {
            let v = num_integer::Integer::div_ceil(&b, &c);
            lo = Some(lo.map_or(v, |x| x.max(v)));
        } else {
            let v = num_integer::Integer::div_floor(&b, &c);
            hi = Some(hi.map_or(v, |x| x.min(v)));
        }
    }
    match (lo, hi) {
        (None, _) => Err(Error::Unbounded { coordinate: k, direction: "below" }),
        (_, None) => Err(Error::Unbounded { coordinate: k, direction: "above" }),
        (Some(lo), Some(hi)) => Ok((lo <= hi).then_some((lo, hi))),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    rows: Vec<Inequality>,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn push(&mut self, ineq: Inequality) -> Result<()> {
        if ineq.coeffs.len() != self.dim {
            return Err(Error::InvalidDivisorData(format!(
                "inequality of length {} in dimension {}",
                ineq.coeffs.len(),
                self.dim
            )));
        }
        self.rows.push(ineq);
        Ok(())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.rows.iter().all(|r| r.holds(x))
    }

    /// Integer range of coordinate `k` once `prefix` fixes coordinates `0..k`.
    fn range(&self, prefix: &[i64]) -> Result<Option<(i64, i64)>> {
        let k = prefix.len();
        let free = self.dim - k;
        let mut rows: Vec<Inequality> = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let fixed: i64 = r.coeffs[..k].iter().zip(prefix).map(|(a, b)| a * b).sum();
            let rest = Inequality::new(r.coeffs[k..].to_vec(), r.bound - fixed);
            if rest.coeffs.iter().all(|&c| c == 0) {
                if rest.bound > 0 {
                    return Ok(None);
                }
            } else {
                rows.push(rest);
            }
        }
        if free == 1 {
            return single_variable_range(&rows, k);
        }
        let mut objective = vec![0; free];
        objective[0] = 1;
        let hi = match maximize(&rows, &objective) {
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => {
                return Err(Error::Unbounded {
                    coordinate: k,
                    direction: "above",
                })
            }
            LpOutcome::Optimal(v) => v.floor(),
        };
        objective[0] = -1;
        let lo = match maximize(&rows, &objective) {
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => {
                return Err(Error::Unbounded {
                    coordinate: k,
                    direction: "below",
                })
            }
            LpOutcome::Optimal(v) => (-v).ceil(),
        };
        let to_i64 = |x: BigRational| {
            x.to_integer()
                .to_i64()
                .ok_or_else(|| Error::CapExceeded("coordinate bound beyond i64".into()))
        };
        Ok(Some((to_i64(lo)?, to_i64(hi)?)))
    }

    /// Checks that every coordinate is bounded in both directions.
    pub fn check_bounded(&self) -> Result<bool> {
        for k in 0..self.dim {
            let mut objective = vec![0; self.dim];
            for (sign, direction) in [(1, "above"), (-1, "below")] {
                objective[k] = sign;
                match maximize(&self.rows, &objective) {
                    LpOutcome::Infeasible => return Ok(false),
                    LpOutcome::Unbounded => {
                        return Err(Error::Unbounded {
                            coordinate: k,
                            direction,
                        })
                    }
                    LpOutcome::Optimal(_) => {}
                }
            }
        }
        Ok(true)
    }

    /// All integer points in lexicographic order.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>> {
        if self.dim == 0 {
            return Ok(if self.contains(&[]) { vec![Vec::new()] } else { Vec::new() });
        }
        if !self.check_bounded()? {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.dim);
        self.scan(&mut prefix, &mut out)?;
        Ok(out)
    }

    fn scan(&self, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) -> Result<()> {
        if prefix.len() == self.dim {
            if self.contains(prefix) {
                out.push(prefix.clone());
            }
            return Ok(());
        }
        let Some((lo, hi)) = self.range(prefix)? else {
            return Ok(());
        };
        for v in lo..=hi {
            prefix.push(v);
            self.scan(prefix, out)?;
            prefix.pop();
        }
        Ok(())
    }
}
