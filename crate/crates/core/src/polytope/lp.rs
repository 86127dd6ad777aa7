//! Exact rational two-phase simplex with Bland's rule.
//!
//! Every variable is non-negative. Optimal solutions come with dual values
//! (one per constraint, in the orientation the constraint was written),
//! infeasible systems with a Farkas certificate and unbounded ones with a
//! recession ray.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, Rational)>,
    pub sense: Sense,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// Dual multipliers: `>= 0` on `Le` rows and `<= 0` on `Ge` rows for a
    /// maximization (signs flip for minimization); `b . y` equals `value`.
    pub duals: Vec<Rational>,
}

/// Multipliers `y` with `y^T A >= 0` on every column, `y_r >= 0` on `Le`
/// rows, `y_r <= 0` on `Ge` rows and `y^T b < 0`. No `x >= 0` can then
/// satisfy the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible(FarkasCertificate),
    /// A direction `d >= 0` that keeps every constraint satisfied and
    /// strictly improves the objective.
    Unbounded(Vec<Rational>),
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible(_))
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        Self { num_vars, constraints: Vec::new(), objective: Vec::new(), sense }
    }

    /// A pure feasibility problem (zero objective).
    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(num_vars, Sense::Maximize)
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, Rational)>) {
        self.objective = coeffs;
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        lp_solve(self)
    }

    fn dense_row(&self, coeffs: &[(usize, Rational)]) -> Result<Vec<Rational>> {
        let mut row = vec![Rational::zero(); self.num_vars];
        for (j, v) in coeffs {
            *row.get_mut(*j).ok_or_else(|| Error::Lp(format!("variable {j} out of range")))? += v;
        }
        Ok(row)
    }

    /// Checks a candidate point against every constraint.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().map(|(j, c)| c * &x[*j]).sum()
    }

    /// Verifies a Farkas certificate against this program.
    pub fn certifies_infeasible(&self, cert: &FarkasCertificate) -> bool {
        let y = &cert.multipliers;
        if y.len() != self.constraints.len() {
            return false;
        }
        let mut col = vec![Rational::zero(); self.num_vars];
        let mut yb = Rational::zero();
        for (c, yr) in self.constraints.iter().zip(y) {
            let sign_ok = match c.relation {
                Relation::Le => !yr.is_negative(),
                Relation::Ge => !yr.is_positive(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return false;
            }
            for (j, a) in &c.coeffs {
                col[*j] += a * yr;
            }
            yb += &c.rhs * yr;
        }
        col.iter().all(|v| !v.is_negative()) && yb.is_negative()
    }

    /// Verifies an unbounded ray against this program.
    pub fn certifies_unbounded(&self, ray: &[Rational]) -> bool {
        if ray.len() != self.num_vars || ray.iter().any(|v| v.is_negative()) {
            return false;
        }
        let ok = self.constraints.iter().all(|c| {
            let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * &ray[*j]).sum();
            match c.relation {
                Relation::Le => !lhs.is_positive(),
                Relation::Ge => !lhs.is_negative(),
                Relation::Eq => lhs.is_zero(),
            }
        });
        let gain = self.objective_at(ray);
        ok && match self.sense {
            Sense::Maximize => gain.is_positive(),
            Sense::Minimize => gain.is_negative(),
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs `c_j - c_B B^-1 A_j` of the current phase.
    reduced: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut().filter(|v| !v.is_zero()) {
                *v /= &p;
            }
            self.rhs[r] /= &p;
        }
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&k| !self.rows[r][k].is_zero()).collect();
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for k in 0..self.rows.len() {
            if k == r || self.rows[k][j].is_zero() {
                continue;
            }
            let f = self.rows[k][j].clone();
            for &c in &nz {
                let delta = &f * &pivot_row[c];
                self.rows[k][c] -= delta;
            }
            self.rhs[k] -= &f * &pivot_rhs;
        }
        if !self.reduced[j].is_zero() {
            let f = self.reduced[j].clone();
            for &c in &nz {
                let delta = &f * &pivot_row[c];
                self.reduced[c] -= delta;
            }
            self.value += &f * &pivot_rhs;
        }
        self.basis[r] = j;
    }

    fn load_costs(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (d, a) in self.reduced.iter_mut().zip(&self.rows[r]) {
                if !a.is_zero() {
                    *d -= cb * a;
                }
            }
            self.value += cb * &self.rhs[r];
        }
    }

    /// Maximizes the loaded costs. Returns the entering column if unbounded.
    fn run(&mut self, allowed: &[bool]) -> Option<usize> {
        loop {
            let j = (0..self.reduced.len()).find(|&j| allowed[j] && self.reduced[j].is_positive())?;
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Some(j),
                Some((r, _)) => self.pivot(r, j),
            }
        }
    }
}

/// Solves `lp` exactly.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let nv = lp.num_vars;
    let m = lp.constraints.len();
    let mut signs = Vec::with_capacity(m);
    let mut dense = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut rels = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut row = lp.dense_row(&c.coeffs)?;
        let mut b = c.rhs.clone();
        let mut rel = c.relation;
        let mut sign = Rational::one();
        if b.is_negative() {
            row.iter_mut().for_each(|v| *v = -v.clone());
            b = -b;
            sign = -sign;
            rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        signs.push(sign);
        dense.push(row);
        rhs.push(b);
        rels.push(rel);
    }

    // Column layout: structural | one slack or surplus per inequality | one
    // artificial per Ge/Eq row.
    let mut ncols = nv;
    let mut slack_of = vec![None; m];
    for (r, rel) in rels.iter().enumerate() {
        if *rel != Relation::Eq {
            slack_of[r] = Some(ncols);
            ncols += 1;
        }
    }
    let mut unit_of = vec![0; m];
    let mut artificial = vec![false; ncols];
    for (r, rel) in rels.iter().enumerate() {
        if *rel == Relation::Le {
            unit_of[r] = slack_of[r].expect("Le rows have a slack");
        } else {
            unit_of[r] = ncols;
            ncols += 1;
            artificial.push(true);
        }
    }
    let mut rows = vec![vec![Rational::zero(); ncols]; m];
    for r in 0..m {
        rows[r][..nv].clone_from_slice(&dense[r]);
        if let Some(s) = slack_of[r] {
            rows[r][s] = if rels[r] == Relation::Ge { -Rational::one() } else { Rational::one() };
        }
        rows[r][unit_of[r]] = Rational::one();
    }
    let mut tab = Tableau { rows, rhs, basis: unit_of.clone(), reduced: Vec::new(), value: Rational::zero() };

    // Phase 1: maximize -(sum of artificials).
    let phase1: Vec<Rational> =
        artificial.iter().map(|&a| if a { -Rational::one() } else { Rational::zero() }).collect();
    tab.load_costs(&phase1);
    let everything = vec![true; ncols];
    tab.run(&everything);
    if tab.value.is_negative() {
        let multipliers = (0..m)
            .map(|r| {
                let u = unit_of[r];
                (&phase1[u] - &tab.reduced[u]) * &signs[r]
            })
            .collect();
        return Ok(LpOutcome::Infeasible(FarkasCertificate { multipliers }));
    }
    for r in 0..m {
        if artificial[tab.basis[r]] {
            if let Some(j) = (0..ncols).find(|&j| !artificial[j] && !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    // Phase 2.
    let flip = lp.sense == Sense::Minimize;
    let mut costs = vec![Rational::zero(); ncols];
    for (j, c) in &lp.objective {
        if *j >= nv {
            return Err(Error::Lp(format!("objective variable {j} out of range")));
        }
        costs[*j] += if flip { -c.clone() } else { c.clone() };
    }
    tab.load_costs(&costs);
    let structural: Vec<bool> = artificial.iter().map(|a| !a).collect();
    if let Some(j) = tab.run(&structural) {
        let mut ray = vec![Rational::zero(); ncols];
        ray[j] = Rational::one();
        for r in 0..m {
            let a = &tab.rows[r][j];
            if !a.is_zero() {
                ray[tab.basis[r]] = -a.clone();
            }
        }
        ray.truncate(nv);
        return Ok(LpOutcome::Unbounded(ray));
    }
    let mut x = vec![Rational::zero(); nv];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < nv {
            x[b] = tab.rhs[r].clone();
        }
    }
    let duals = (0..m)
        .map(|r| {
            let u = unit_of[r];
            let y = (&costs[u] - &tab.reduced[u]) * &signs[r];
            if flip {
                -y
            } else {
                y
            }
        })
        .collect();
    let value = if flip { -tab.value.clone() } else { tab.value.clone() };
    Ok(LpOutcome::Optimal(LpSolution { value, x, duals }))
}
