//! The digraph family whose graph vectors generate the achievable polytope:
//! every vertex has exactly two out-arcs, arcs never point to a higher
//! label, and a vertex may send both arcs to one target only if that target
//! is vertex 1 or itself.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::WinVector;
use crate::rational::Rational;

/// Largest `n` that [`enumerate_digraphs`] accepts by default.
pub const MAX_ENUMERATE_N: usize = 7;

/// Multigraph on vertices `0..n`; `count(i, j)` is the number of arcs
/// `i -> j` (loops included).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph {
    n: usize,
    counts: Vec<u8>,
}

impl Digraph {
    /// Builds and validates from `(from, to, multiplicity)` triples.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize, u8)]) -> Result<Self> {
        let mut counts = vec![0u8; n * n];
        for &(i, j, m) in arcs {
            if i >= n || j >= n {
                return Err(Error::InvalidDigraph(format!("arc {} -> {} outside 1..={n}", i + 1, j + 1)));
            }
            counts[i * n + j] = counts[i * n + j].saturating_add(m);
        }
        let g = Self { n, counts };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidDigraph("no vertices".into()));
        }
        for i in 0..n {
            let out: u32 = (0..n).map(|j| self.count(i, j) as u32).sum();
            if out != 2 {
                return Err(Error::InvalidDigraph(format!("vertex {} has out-degree {out}", i + 1)));
            }
            for j in 0..n {
                let c = self.count(i, j);
                if c > 0 && j > i {
                    return Err(Error::InvalidDigraph(format!("arc {} -> {} points upward", i + 1, j + 1)));
                }
                if c == 2 && j != 0 && j != i {
                    return Err(Error::InvalidDigraph(format!(
                        "vertex {} sends both arcs to {}, which is neither 1 nor itself",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, from: usize, to: usize) -> u8 {
        self.counts[from * self.n + to]
    }

    pub fn indegree(&self, v: usize) -> u32 {
        (0..self.n).map(|i| self.count(i, v) as u32).sum()
    }

    pub fn outdegree(&self, v: usize) -> u32 {
        (0..self.n).map(|j| self.count(v, j) as u32).sum()
    }

    /// `(from, to, multiplicity)` for every arc class, sorted.
    pub fn arcs(&self) -> Vec<(usize, usize, u8)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let c = self.count(i, j);
                (c > 0).then_some((i, j, c))
            })
            .collect()
    }

    /// Two loops on every vertex.
    pub fn all_loops(n: usize) -> Self {
        let mut counts = vec![0u8; n * n];
        for i in 0..n {
            counts[i * n + i] = 2;
        }
        Self { n, counts }
    }

    pub fn to_json(&self) -> DigraphJson {
        DigraphJson { n: self.n, arcs: self.arcs().into_iter().map(|(i, j, m)| [i + 1, j + 1, m as usize]).collect() }
    }

    pub fn from_json(json: &DigraphJson) -> Result<Self> {
        let arcs = json
            .arcs
            .iter()
            .map(|&[i, j, m]| {
                if i == 0 || j == 0 || m > 2 {
                    return Err(Error::InvalidDigraph(format!("bad arc entry [{i}, {j}, {m}]")));
                }
                Ok((i - 1, j - 1, m as u8))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_arcs(json.n, &arcs)
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.arcs().into_iter().map(|(i, j, m)| {
            if m == 1 {
                format!("{}->{}", i + 1, j + 1)
            } else {
                format!("{}->{}x{m}", i + 1, j + 1)
            }
        });
        write!(f, "G{}[{}]", self.n, parts.format(" "))
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Wire form: `{"n": 3, "arcs": [[from, to, multiplicity], ...]}`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub n: usize,
    pub arcs: Vec<[usize; 3]>,
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Self::from_json(&DigraphJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `|family(n)| = prod_{i=2..n} (2 + C(i, 2))`.
pub fn family_size(n: usize) -> u128 {
    (2..=n as u128).map(|i| 2 + i * (i - 1) / 2).product()
}

/// Allowed out-arc choices of vertex `i` as target multisets.
fn out_choices(i: usize) -> Vec<Vec<(usize, u8)>> {
    let mut choices = vec![vec![(0, 2)]];
    if i > 0 {
        choices.push(vec![(i, 2)]);
    }
    for (a, b) in (0..=i).tuple_combinations() {
        choices.push(vec![(a, 1), (b, 1)]);
    }
    choices
}

/// Every member of the family on `n` vertices.
pub fn enumerate_digraphs(n: usize) -> Result<Vec<Digraph>> {
    enumerate_digraphs_up_to(n, MAX_ENUMERATE_N)
}

/// As [`enumerate_digraphs`] with a caller-chosen size guard.
pub fn enumerate_digraphs_up_to(n: usize, max_n: usize) -> Result<Vec<Digraph>> {
    if n == 0 || n > max_n {
        return Err(Error::Guard(format!("digraph enumeration supports 1 <= n <= {max_n}, got {n}")));
    }
    let per_vertex: Vec<_> = (0..n).map(out_choices).collect();
    let graphs = per_vertex
        .iter()
        .multi_cartesian_product()
        .map(|pick| {
            let mut counts = vec![0u8; n * n];
            for (i, arcs) in pick.iter().enumerate() {
                for &(j, m) in arcs.iter() {
                    counts[i * n + j] += m;
                }
            }
            Digraph { n, counts }
        })
        .collect();
    Ok(graphs)
}

/// `v_i = indeg(i) / 2n`.
pub fn graph_vector(g: &Digraph) -> Result<WinVector> {
    g.validate()?;
    let two_n = Rational::from_integer((2 * g.n).into());
    let v: Vec<Rational> = (0..g.n).map(|i| Rational::from_integer(g.indegree(i).into()) / &two_n).collect();
    let balance = graph_vector_by_balance(g);
    if v != balance {
        return Err(Error::InvalidDigraph(format!("degree identities disagree on {g}")));
    }
    WinVector::new(v)
}

/// The same vector written as `1/n + (indeg - outdeg) / 2n`.
pub fn graph_vector_by_balance(g: &Digraph) -> Vec<Rational> {
    let n = Rational::from_integer(g.n.into());
    let two_n = &n + &n;
    (0..g.n)
        .map(|i| {
            let net = g.indegree(i) as i64 - g.outdegree(i) as i64;
            n.recip() + Rational::from_integer(net.into()) / &two_n
        })
        .collect()
}

/// Greedy digraph for a target order: route as many arcs as possible to
/// `order[0]`, then `order[1]`, and so on. `order` lists 0-based vertices and
/// may be a corner sequence (any order ending in vertex 0).
pub fn sigma_to_digraph(n: usize, order: &[usize]) -> Result<Digraph> {
    let mut seen = vec![false; n];
    for &t in order {
        if t >= n || seen[t] {
            return Err(Error::InvalidArgument(format!("{order:?} is not a sequence of distinct vertices")));
        }
        seen[t] = true;
    }
    let mut remaining = vec![2u8; n];
    let mut counts = vec![0u8; n * n];
    for &t in order {
        for i in t..n {
            let cap = if t == 0 || t == i { 2 } else { 1 };
            let send = remaining[i].min(cap);
            counts[i * n + t] += send;
            remaining[i] -= send;
        }
    }
    if let Some(i) = remaining.iter().position(|&r| r > 0) {
        return Err(Error::InvalidArgument(format!("order {order:?} leaves vertex {} with unassigned arcs", i + 1)));
    }
    let g = Digraph { n, counts };
    g.validate()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn counts_match_product_formula() {
        assert_eq!(enumerate_digraphs(1).unwrap().len(), 1);
        assert_eq!(enumerate_digraphs(2).unwrap().len(), 3);
        assert_eq!(enumerate_digraphs(4).unwrap().len(), 120);
        for n in 1..=5 {
            assert_eq!(enumerate_digraphs(n).unwrap().len() as u128, family_size(n));
        }
        assert!(enumerate_digraphs(0).is_err());
        assert!(enumerate_digraphs(8).is_err());
    }

    #[test]
    fn enumerated_graphs_are_valid_and_distinct() {
        let all = enumerate_digraphs(4).unwrap();
        for g in &all {
            g.validate().unwrap();
            assert_eq!(graph_vector(g).unwrap().components(), graph_vector_by_balance(g).as_slice());
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn rule_violations_are_rejected() {
        assert!(Digraph::from_arcs(2, &[(0, 0, 2), (1, 1, 1)]).is_err());
        assert!(Digraph::from_arcs(2, &[(0, 0, 1), (0, 1, 1), (1, 1, 2)]).is_err());
        assert!(Digraph::from_arcs(3, &[(0, 0, 2), (1, 1, 2), (2, 1, 2)]).is_err());
        assert!(Digraph::from_arcs(3, &[(0, 0, 2), (1, 0, 2), (2, 0, 2)]).is_ok());
    }

    #[test]
    fn greedy_digraph_examples() {
        let g = sigma_to_digraph(2, &[0, 1]).unwrap();
        assert_eq!(graph_vector(&g).unwrap().components(), &[rat(1, 1), rat(0, 1)]);
        let g = sigma_to_digraph(3, &[1, 0, 2]).unwrap();
        assert_eq!(graph_vector(&g).unwrap().components(), &[rat(1, 2), rat(1, 2), rat(0, 1)]);
        let g = sigma_to_digraph(3, &[1, 2, 0]).unwrap();
        assert_eq!(graph_vector(&g).unwrap().components(), &[rat(1, 3), rat(1, 2), rat(1, 6)]);
        let g = sigma_to_digraph(3, &[2, 0, 1]).unwrap();
        assert_eq!(graph_vector(&g).unwrap().components(), &[rat(2, 3), rat(0, 1), rat(1, 3)]);
        assert_eq!(sigma_to_digraph(3, &[0, 1, 2]).unwrap(), sigma_to_digraph(3, &[0, 2, 1]).unwrap());
        assert_eq!(graph_vector(&Digraph::all_loops(4)).unwrap(), WinVector::uniform(4));
        assert!(sigma_to_digraph(3, &[2, 1]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = sigma_to_digraph(3, &[1, 2, 0]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":3,"arcs":[[1,1,2],[2,2,2],[3,2,1],[3,3,1]]}"#);
        let back: Digraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }
}
