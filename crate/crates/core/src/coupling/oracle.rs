//! Exact minimum of `Pr[X != Y]` over all couplings, by linear programming.
//!
//! The feasible set is the transportation polytope
//! `{J >= 0 : Σ_y J(x,y) = p(x), Σ_x J(x,y) = q(y)}` restricted to
//! `supp(p) × supp(q)`. Maximizing the diagonal mass over it with a two-phase
//! simplex in exact rational arithmetic (Bland's rule, so no cycling) gives
//! the minimum mismatch without reference to any particular coupling
//! construction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::probdist::Distribution;

/// Largest support the oracle accepts on either side.
pub const MAX_ORACLE_SUPPORT: usize = 6;

type Q = BigRational;

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = &*v - &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost·x` from the current basic feasible solution, letting
    /// only columns with `allowed[j]` enter the basis.
    fn maximize(&mut self, cost: &[Q], allowed: &[bool]) -> Q {
        loop {
            let entering = (0..self.width).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        reduced -= &cost[b] * &self.rows[i][j];
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else { break };

            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // The objective is bounded by the total mass, so a leaving row exists.
            let (row, _) = leave.expect("bounded linear program");
            self.pivot(row, col);
        }
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| &cost[b] * self.rhs(i))
            .fold(Q::zero(), |acc, v| acc + v)
    }
}

fn exact(x: f64) -> Q {
    Q::from_float(x).expect("finite probability")
}

fn support(d: &Distribution) -> Result<Vec<(usize, Q)>> {
    let masses = d.masses()?;
    let s: Vec<(usize, Q)> = masses
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > 0.0)
        .map(|(i, &m)| (i, exact(m)))
        .collect();
    if s.len() > MAX_ORACLE_SUPPORT {
        return Err(Error::Scale(format!(
            "coupling oracle supports at most {MAX_ORACLE_SUPPORT} outcomes per side, got {}",
            s.len()
        )));
    }
    let total = s.iter().fold(Q::zero(), |acc, (_, m)| acc + m);
    Ok(s.into_iter().map(|(i, m)| (i, m / &total)).collect())
}

/// Minimum of `Pr[X != Y]` over every coupling of `p` and `q`.
pub fn min_mismatch_oracle(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.outcome_bits() != q.outcome_bits() {
        return Err(Error::Dimension(format!(
            "distributions over {} and {} bits",
            p.outcome_bits(),
            q.outcome_bits()
        )));
    }
    let sp = support(p)?;
    let sq = support(q)?;
    let (m, n) = (sp.len(), sq.len());
    let nvars = m * n;

    // Row constraints for every x, column constraints for all y but the last
    // (the dropped one is implied because both sides sum to exactly one).
    let ncons = m + n - 1;
    let width = nvars + ncons;
    let mut rows = Vec::with_capacity(ncons);
    for (i, (_, px)) in sp.iter().enumerate() {
        let mut r = vec![Q::zero(); width + 1];
        for j in 0..n {
            r[i * n + j] = Q::one();
        }
        r[width] = px.clone();
        rows.push(r);
    }
    for (j, (_, qy)) in sq.iter().enumerate().take(n - 1) {
        let mut r = vec![Q::zero(); width + 1];
        for i in 0..m {
            r[i * n + j] = Q::one();
        }
        r[width] = qy.clone();
        rows.push(r);
    }
    for (k, r) in rows.iter_mut().enumerate() {
        r[nvars + k] = Q::one();
    }
    let mut t = Tableau {
        rows,
        basis: (nvars..width).collect(),
        width,
    };

    // Phase one: drive the artificial variables to zero.
    let mut phase1 = vec![Q::zero(); width];
    for c in phase1.iter_mut().skip(nvars) {
        *c = -Q::one();
    }
    let all = vec![true; width];
    let infeasibility = t.maximize(&phase1, &all);
    debug_assert!(infeasibility.is_zero());

    // Pivot degenerate artificials out of the basis where possible.
    for r in 0..t.rows.len() {
        if t.basis[r] >= nvars {
            if let Some(c) = (0..nvars).find(|&c| !t.rows[r][c].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    // Phase two: maximize the diagonal mass.
    let mut diag = vec![Q::zero(); width];
    for (i, (xi, _)) in sp.iter().enumerate() {
        for (j, (yj, _)) in sq.iter().enumerate() {
            if xi == yj {
                diag[i * n + j] = Q::one();
            }
        }
    }
    let structural: Vec<bool> = (0..width).map(|c| c < nvars).collect();
    let best_diagonal = t.maximize(&diag, &structural);
    let mismatch = Q::one() - best_diagonal;
    Ok(mismatch
        .to_f64()
        .unwrap_or_else(|| ratio_to_f64(mismatch.numer(), mismatch.denom())))
}

fn ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
}
