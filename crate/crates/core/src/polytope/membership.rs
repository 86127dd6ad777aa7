//! Two independent exact membership tests for the achievable polytope: a
//! fractional arc-flow system and a convex-hull system over the corners.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::corners::corners;
use super::digraph::{graph_vector, sigma_to_digraph};
use super::lp::{FarkasCertificate, LinearProgram, LpOutcome, Relation, Sense};
use crate::error::{Error, Result};
use crate::matrix::WinVector;
use crate::rational::{half, Rational};

/// Lower-triangular matrix `m` with rows summing to 1, `m_ij = 0` above the
/// diagonal and `m_ij <= 1/2` unless `j` is vertex 0 or `i` itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcFlow {
    pub n: usize,
    #[serde(serialize_with = "serialize_matrix")]
    pub m: Vec<Vec<Rational>>,
}

fn serialize_matrix<S: serde::Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&row.iter().map(crate::rational::format_rational).collect::<Vec<_>>())?;
    }
    seq.end()
}

impl ArcFlow {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            let total: Rational = self.m[i].iter().sum();
            if !total.is_one() {
                return Err(Error::InvalidArgument(format!("row {} sums to {total}", i + 1)));
            }
            for j in 0..n {
                let v = &self.m[i][j];
                let bad = v.is_negative() || (j > i && !v.is_zero()) || (j != 0 && j != i && *v > half());
                if bad {
                    return Err(Error::InvalidArgument(format!("entry ({}, {}) = {v} breaks the flow rules", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// `v_j = (1/n) sum_i m_ij`.
    pub fn vector(&self) -> Result<WinVector> {
        let n = Rational::from_integer(self.n.into());
        WinVector::new((0..self.n).map(|j| self.m.iter().map(|r| &r[j]).sum::<Rational>() / &n).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership<W> {
    Member(W),
    NonMember(FarkasCertificate),
}

impl<W> Membership<W> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Variable index of `m_ij` (`j <= i`) in row-major lower-triangular order.
fn flow_var(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

fn arc_flow_program(n: usize) -> LinearProgram {
    let nv = n * (n + 1) / 2;
    let mut lp = LinearProgram::feasibility(nv);
    for i in 0..n {
        lp.add((0..=i).map(|j| (flow_var(i, j), Rational::one())).collect(), Relation::Eq, Rational::one());
        for j in 1..i {
            lp.add(vec![(flow_var(i, j), Rational::one())], Relation::Le, half());
        }
    }
    lp
}

fn read_flow(n: usize, x: &[Rational]) -> ArcFlow {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            m[i][j] = x[flow_var(i, j)].clone();
        }
    }
    ArcFlow { n, m }
}

/// Is `x` the vector of some fractional arc flow?
pub fn arc_flow_membership(x: &WinVector) -> Result<Membership<ArcFlow>> {
    let n = x.n();
    let mut lp = arc_flow_program(n);
    let inv_n = Rational::new(1.into(), n.into());
    for j in 0..n {
        lp.add((j..n).map(|i| (flow_var(i, j), inv_n.clone())).collect(), Relation::Eq, x.get(j).clone());
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal(s) => {
            let flow = read_flow(n, &s.x);
            flow.validate()?;
            Membership::Member(flow)
        }
        LpOutcome::Infeasible(cert) => Membership::NonMember(cert),
        LpOutcome::Unbounded(_) => return Err(Error::Lp("feasibility problem reported unbounded".into())),
    })
}

/// Convex coefficients over the corners, listed with their corners.
pub type HullWitness = Vec<(WinVector, Rational)>;

/// Is `x` a convex combination of the corners on `x.n()` players?
pub fn hull_membership(x: &WinVector) -> Result<Membership<HullWitness>> {
    let n = x.n();
    let cs = corners(n)?;
    let mut lp = LinearProgram::feasibility(cs.len());
    lp.add((0..cs.len()).map(|k| (k, Rational::one())).collect(), Relation::Eq, Rational::one());
    for j in 0..n {
        let row = cs.iter().enumerate().filter(|(_, c)| !c.get(j).is_zero()).map(|(k, c)| (k, c.get(j).clone()));
        lp.add(row.collect(), Relation::Eq, x.get(j).clone());
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal(s) => Membership::Member(
            cs.into_iter().zip(s.x).filter(|(_, l)| !l.is_zero()).collect(),
        ),
        LpOutcome::Infeasible(cert) => Membership::NonMember(cert),
        LpOutcome::Unbounded(_) => return Err(Error::Lp("feasibility problem reported unbounded".into())),
    })
}

/// Smallest `t` with some hull point within `t` of `x` in every coordinate.
/// `x` need not be a distribution.
pub fn hull_distance_linf(x: &[Rational]) -> Result<Rational> {
    let n = x.len();
    let cs = corners(n)?;
    let t = cs.len();
    let mut lp = LinearProgram::new(t + 1, Sense::Minimize);
    lp.add((0..t).map(|k| (k, Rational::one())).collect(), Relation::Eq, Rational::one());
    for j in 0..n {
        let coords: Vec<(usize, Rational)> = cs.iter().enumerate().map(|(k, c)| (k, c.get(j).clone())).collect();
        // sum_k l_k c_kj - x_j <= t  and  x_j - sum_k l_k c_kj <= t
        let mut upper = coords.clone();
        upper.push((t, -Rational::one()));
        lp.add(upper, Relation::Le, x[j].clone());
        let mut lower = coords;
        lower.push((t, Rational::one()));
        lp.add(lower, Relation::Ge, x[j].clone());
    }
    lp.set_objective(vec![(t, Rational::one())]);
    lp.solve()?.optimal().map(|s| s.value).ok_or_else(|| Error::Lp("distance program has no optimum".into()))
}

/// Maximizes `u . v` over the polytope by the greedy arc-routing rule:
/// targets in order of decreasing weight, ties broken by lower index.
pub fn greedy_max(u: &[Rational]) -> Result<(Rational, WinVector)> {
    let n = u.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| u[b].cmp(&u[a]).then(a.cmp(&b)));
    let v = graph_vector(&sigma_to_digraph(n, &order)?)?;
    let value = u.iter().zip(v.components()).map(|(a, b)| a * b).sum();
    Ok((value, v))
}

/// Maximizes `u . v(M)` over fractional arc flows with the LP solver.
pub fn arc_flow_max(u: &[Rational]) -> Result<Rational> {
    let n = u.len();
    let mut lp = arc_flow_program(n);
    let inv_n = Rational::new(1.into(), n.into());
    lp.set_objective(
        (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).map(|(i, j)| (flow_var(i, j), &u[j] * &inv_n)).collect(),
    );
    lp.solve()?.optimal().map(|s| s.value).ok_or_else(|| Error::Lp("arc-flow program has no optimum".into()))
}
