//! Corners of the achievable polytope, enumerated through the subsequences
//! of target orders that actually receive arcs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;

use super::digraph::{graph_vector, sigma_to_digraph, Digraph};
use crate::error::{Error, Result};
use crate::matrix::WinVector;
use crate::rational::format_rational;

pub const MAX_CORNER_N: usize = 12;
pub const MAX_PERMUTATION_N: usize = 8;

/// A sequence of distinct 0-based vertices that ends in vertex 0 and in
/// which every entry has at most one smaller entry before it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CornerSequence {
    pub n: usize,
    pub seq: Vec<usize>,
}

impl CornerSequence {
    pub fn new(n: usize, seq: Vec<usize>) -> Result<Self> {
        if !is_corner_sequence(n, &seq) {
            return Err(Error::InvalidArgument(format!("{seq:?} is not a corner sequence on {n} vertices")));
        }
        Ok(Self { n, seq })
    }

    pub fn digraph(&self) -> Digraph {
        sigma_to_digraph(self.n, &self.seq).expect("corner sequences end in vertex 0")
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.seq.iter().map(|v| v + 1).collect()
    }
}

pub fn is_corner_sequence(n: usize, seq: &[usize]) -> bool {
    if seq.last() != Some(&0) || seq.iter().any(|&v| v >= n) || !seq.iter().all_unique() {
        return false;
    }
    seq.iter().enumerate().all(|(k, v)| seq[..k].iter().filter(|&&u| u < *v).count() <= 1)
}

/// `(3^(n-1) + 1) / 2`.
pub fn corner_count(n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    3u128.pow(n as u32 - 1).div_ceil(2)
}

pub fn corner_sequences(n: usize) -> Result<Vec<CornerSequence>> {
    if n == 0 || n > MAX_CORNER_N {
        return Err(Error::Guard(format!("corner enumeration supports 1 <= n <= {MAX_CORNER_N}, got {n}")));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(n, &mut prefix, &mut used, &mut out);
    Ok(out)
}

fn extend(n: usize, prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<CornerSequence>) {
    for v in 0..n {
        if used[v] || prefix.iter().filter(|&&u| u < v).count() > 1 {
            continue;
        }
        prefix.push(v);
        if v == 0 {
            out.push(CornerSequence { n, seq: prefix.clone() });
        } else {
            used[v] = true;
            extend(n, prefix, used, out);
            used[v] = false;
        }
        prefix.pop();
    }
}

/// Distinct corner vectors, one per corner sequence.
pub fn corners(n: usize) -> Result<Vec<WinVector>> {
    corner_sequences(n)?.iter().map(|s| graph_vector(&s.digraph())).collect()
}

/// One row per distinct greedy digraph: every permutation producing it, the
/// digraph and its graph vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationClass {
    pub sigmas: Vec<Vec<usize>>,
    pub digraph: Digraph,
    pub vector: WinVector,
}

/// Groups all of `S_n` by greedy digraph, ordered by the first permutation
/// of each class in lexicographic order. Permutations are 1-based.
pub fn permutation_classes(n: usize) -> Result<Vec<PermutationClass>> {
    if n == 0 || n > MAX_PERMUTATION_N {
        return Err(Error::Guard(format!("permutation table supports 1 <= n <= {MAX_PERMUTATION_N}, got {n}")));
    }
    let mut order: Vec<Digraph> = Vec::new();
    let mut groups: BTreeMap<Digraph, Vec<Vec<usize>>> = BTreeMap::new();
    for sigma in (0..n).permutations(n) {
        let g = sigma_to_digraph(n, &sigma)?;
        let one_based = sigma.iter().map(|v| v + 1).collect();
        groups
            .entry(g.clone())
            .or_insert_with(|| {
                order.push(g);
                Vec::new()
            })
            .push(one_based);
    }
    order
        .into_iter()
        .map(|g| {
            let sigmas = groups.remove(&g).unwrap_or_default();
            Ok(PermutationClass { vector: graph_vector(&g)?, digraph: g, sigmas })
        })
        .collect()
}

/// CSV with columns `sigma,arcs,vector`; alternatives in a class are
/// separated by `|`, arcs are `from>to` with multiplicity, vector entries by
/// spaces.
pub fn classes_csv(classes: &[PermutationClass]) -> String {
    let mut out = String::from("sigma,arcs,vector\n");
    for c in classes {
        let sigma = c.sigmas.iter().map(|s| format!("({})", s.iter().join(" "))).join(" | ");
        let arcs = c.digraph.arcs().into_iter().map(|(i, j, m)| format!("{}>{}x{m}", i + 1, j + 1)).join(" ");
        let vector = c.vector.components().iter().map(format_rational).join(" ");
        let _ = writeln!(out, "\"{sigma}\",\"{arcs}\",\"{vector}\"");
    }
    out
}

/// CSV of corner vectors, one per line, with the generating sequence.
pub fn corners_csv(n: usize) -> Result<String> {
    let mut out = String::from("sequence,vector\n");
    for s in corner_sequences(n)? {
        let v = graph_vector(&s.digraph())?;
        let _ = writeln!(
            out,
            "\"({})\",\"{}\"",
            s.one_based().iter().join(" "),
            v.components().iter().map(format_rational).join(" ")
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn brute_force_count(n: usize) -> usize {
        (1..=n)
            .flat_map(|k| (0..n).permutations(k))
            .filter(|s| is_corner_sequence(n, s))
            .count()
    }

    #[test]
    fn small_counts() {
        assert_eq!(corner_sequences(1).unwrap().len(), 1);
        let two = corner_sequences(2).unwrap();
        assert_eq!(two.iter().map(|s| s.one_based()).collect::<Vec<_>>(), vec![vec![1], vec![2, 1]]);
        assert_eq!(corner_sequences(4).unwrap().len(), 14);
        for n in 1..=6 {
            assert_eq!(corner_sequences(n).unwrap().len(), brute_force_count(n));
            assert_eq!(corner_sequences(n).unwrap().len() as u128, corner_count(n));
        }
    }

    #[test]
    fn recurrence_holds() {
        for n in 2..=9 {
            assert_eq!(corner_count(n), 3 * corner_count(n - 1) - 1);
        }
    }

    #[test]
    fn three_player_corners_are_the_pentagon() {
        let mut got = corners(3).unwrap();
        got.sort_by(|a, b| a.components().cmp(b.components()));
        let mut want: Vec<WinVector> = [
            [rat(1, 3), rat(1, 2), rat(1, 6)],
            [rat(2, 3), rat(0, 1), rat(1, 3)],
            [rat(1, 1), rat(0, 1), rat(0, 1)],
            [rat(1, 2), rat(1, 2), rat(0, 1)],
            [rat(1, 3), rat(1, 3), rat(1, 3)],
        ]
        .into_iter()
        .map(|v| WinVector::new(v.to_vec()).unwrap())
        .collect();
        want.sort_by(|a, b| a.components().cmp(b.components()));
        assert_eq!(got, want);
    }

    #[test]
    fn permutation_classes_for_three() {
        let classes = permutation_classes(3).unwrap();
        assert_eq!(classes.len(), 5);
        assert_eq!(classes[0].sigmas, vec![vec![1, 2, 3], vec![1, 3, 2]]);
        let csv = classes_csv(&classes);
        assert!(csv.contains("\"(2 3 1)\",\"1>1x2 2>2x2 3>2x1 3>3x1\",\"1/3 1/2 1/6\""), "{csv}");
    }

    #[test]
    fn guards() {
        assert!(corner_sequences(0).is_err());
        assert!(corner_sequences(13).is_err());
        assert!(permutation_classes(9).is_err());
    }
}
