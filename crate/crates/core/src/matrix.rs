//! Match matrices, win vectors and player permutations.
//!
//! Players are indexed from 0 inside the library. Text and JSON boundaries
//! (error messages, reports, the CLI) use 1-based player numbers.

use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{abs_diff, format_rational, half, parse_rational, Rational};

/// A matrix `P` with `p_ii = 1/2` and `p_ij + p_ji = 1`, entries in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatchMatrix {
    n: usize,
    entries: Vec<Rational>,
    interior: bool,
}

impl MatchMatrix {
    /// Validates a raw square array. The first violated cell (row-major) is
    /// reported on failure.
    pub fn new(raw: Vec<Vec<Rational>>) -> Result<Self> {
        let n = raw.len();
        if n == 0 {
            return Err(Error::Shape("matrix has no rows".into()));
        }
        if let Some((r, row)) = raw.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(Error::Shape(format!("row {} has {} entries, expected {n}", r + 1, row.len())));
        }
        let zero = Rational::zero();
        let one = Rational::one();
        for i in 0..n {
            for j in 0..n {
                let v = &raw[i][j];
                if *v < zero || *v > one {
                    return Err(Error::InvalidMatrix { row: i, col: j, reason: format!("entry {v} outside [0, 1]") });
                }
                if i == j && *v != half() {
                    return Err(Error::InvalidMatrix { row: i, col: j, reason: format!("diagonal entry {v} != 1/2") });
                }
                let sum = v + &raw[j][i];
                if sum != one {
                    return Err(Error::InvalidMatrix {
                        row: i,
                        col: j,
                        reason: format!("p_ij + p_ji = {v} + {} = {sum} != 1", raw[j][i]),
                    });
                }
            }
        }
        let entries: Vec<Rational> = raw.into_iter().flatten().collect();
        Ok(Self::from_entries_unchecked(n, entries))
    }

    fn from_entries_unchecked(n: usize, entries: Vec<Rational>) -> Self {
        let interior = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .all(|(i, j)| {
                let v = &entries[i * n + j];
                !v.is_zero() && !v.is_one()
            });
        Self { n, entries, interior }
    }

    /// Builds a matrix from its strict upper triangle `p_ij`, `i < j`.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        let mut raw = vec![vec![half(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = upper(i, j);
                raw[j][i] = Rational::one() - &v;
                raw[i][j] = v;
            }
        }
        Self::new(raw)
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_entries_unchecked(n, vec![half(); n * n])
    }

    /// The 3-player matrix with `p_12 = p_23 = 1/2`, `p_13 = 1`.
    pub fn pstar() -> Self {
        Self::from_upper(3, |i, j| if (i, j) == (0, 2) { Rational::one() } else { half() })
            .expect("static matrix is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n).map(<[Rational]>::to_vec).collect()
    }

    /// True iff no off-diagonal entry is 0 or 1.
    pub fn is_interior(&self) -> bool {
        self.interior
    }

    /// Rows non-decreasing left to right, columns non-increasing top to bottom.
    pub fn is_doubly_monotonic(&self) -> bool {
        self.monotonic_violation(false).is_none()
    }

    /// Strict version of [`Self::is_doubly_monotonic`].
    pub fn is_strictly_doubly_monotonic(&self) -> bool {
        self.monotonic_violation(true).is_none()
    }

    fn monotonic_violation(&self, strict: bool) -> Option<String> {
        let n = self.n;
        let bad = |a: &Rational, b: &Rational| if strict { a >= b } else { a > b };
        for i in 0..n {
            for j in 0..n.saturating_sub(1) {
                if bad(self.get(i, j), self.get(i, j + 1)) {
                    return Some(format!("row {} decreases between columns {} and {}", i + 1, j + 1, j + 2));
                }
                if bad(self.get(j + 1, i), self.get(j, i)) {
                    return Some(format!("column {} increases between rows {} and {}", i + 1, j + 1, j + 2));
                }
            }
        }
        None
    }

    /// Renames player `i` to `sigma(i)`: `q_{sigma(i) sigma(j)} = p_ij`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, actual: sigma.len() });
        }
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[sigma.apply(i) * n + sigma.apply(j)] = self.get(i, j).clone();
            }
        }
        Ok(Self::from_entries_unchecked(n, entries))
    }

    /// Buffs (or nerfs) player `i` until it is a clone of player `j`.
    pub fn buff_to(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.n;
        if i >= n || j >= n {
            return Err(Error::InvalidArgument(format!("players {} and {} out of range 1..={n}", i + 1, j + 1)));
        }
        if i == j {
            return Err(Error::InvalidArgument(format!("cannot buff player {} to itself", i + 1)));
        }
        let mut raw = self.rows();
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            raw[i][k] = self.get(j, k).clone();
            raw[k][i] = Rational::one() - self.get(j, k);
        }
        raw[i][j] = half();
        raw[j][i] = half();
        Self::new(raw)
    }

    /// Returns `p_kl` raised by `delta` (and `p_lk` lowered), clamped to
    /// `[0, 1]`.
    pub fn with_raised(&self, k: usize, l: usize, delta: &Rational) -> Result<Self> {
        if k == l {
            return Err(Error::InvalidArgument("cannot raise a diagonal entry".into()));
        }
        let mut raw = self.rows();
        let mut v = &raw[k][l] + delta;
        if v > Rational::one() {
            v = Rational::one();
        }
        if v.is_negative() {
            v = Rational::zero();
        }
        raw[l][k] = Rational::one() - &v;
        raw[k][l] = v;
        Self::new(raw)
    }

    /// Half the minimum gap between distinct values of the matrix:
    /// `min(min |p_ij - 1/2|, min |p_ij - p_kl|) / 2` over off-diagonal
    /// entries with `{i,j} != {k,l}`. Errors if any of those gaps is zero.
    pub fn epsilon(&self) -> Result<Rational> {
        let n = self.n;
        let cells: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).filter(|(i, j)| i != j).collect();
        if cells.is_empty() {
            return Err(Error::Distinctness("matrix has no off-diagonal entries".into()));
        }
        let mut best: Option<Rational> = None;
        for &(i, j) in &cells {
            let d = abs_diff(self.get(i, j), &half());
            if d.is_zero() {
                return Err(Error::Distinctness(format!("p_{}{} equals 1/2", i + 1, j + 1)));
            }
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
        for (a, &(i, j)) in cells.iter().enumerate() {
            for &(k, l) in &cells[a + 1..] {
                if (i == k && j == l) || (i == l && j == k) {
                    continue;
                }
                let d = abs_diff(self.get(i, j), self.get(k, l));
                if d.is_zero() {
                    return Err(Error::Distinctness(format!(
                        "p_{}{} = p_{}{} = {}",
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1,
                        self.get(i, j)
                    )));
                }
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
        Ok(best.expect("at least one gap") / Rational::from_integer(2.into()))
    }

    /// All distinct entries (diagonal included), ascending.
    pub fn value_set(&self) -> Vec<Rational> {
        let mut vals = self.entries.clone();
        vals.sort();
        vals.dedup();
        vals
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson { n: self.n, p: self.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect() }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        if json.p.len() != json.n {
            return Err(Error::Shape(format!("declared n = {} but {} rows given", json.n, json.p.len())));
        }
        let raw = json
            .p
            .iter()
            .map(|row| row.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_json(&json)
    }
}

impl fmt::Debug for MatchMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatchMatrix[")?;
        for (r, row) in self.entries.chunks(self.n).enumerate() {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", row.iter().map(format_rational).join(" "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for MatchMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatchMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = MatrixJson::deserialize(d)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Wire form of a match matrix: `{"n": 3, "p": [["1/2", ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub p: Vec<Vec<String>>,
}

/// A match matrix that has been checked to be doubly monotonic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublyMonotonic(MatchMatrix);

impl DoublyMonotonic {
    pub fn new(matrix: MatchMatrix) -> Result<Self> {
        match matrix.monotonic_violation(false) {
            None => Ok(Self(matrix)),
            Some(why) => Err(Error::NotDoublyMonotonic(why)),
        }
    }

    pub fn matrix(&self) -> &MatchMatrix {
        &self.0
    }

    pub fn into_inner(self) -> MatchMatrix {
        self.0
    }
}

/// A probability vector over players.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WinVector(
    #[serde(serialize_with = "crate::rational::serialize_rational_vec", deserialize_with = "crate::rational::deserialize_rational_vec")]
    Vec<Rational>,
);

impl WinVector {
    pub fn new(components: Vec<Rational>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::NotDistribution("empty vector".into()));
        }
        if let Some((k, v)) = components.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::NotDistribution(format!("component {} is negative ({v})", k + 1)));
        }
        let sum: Rational = components.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotDistribution(format!("components sum to {sum}")));
        }
        Ok(Self(components))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![Rational::new(1.into(), n.into()); n])
    }

    pub fn point(n: usize, k: usize) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[k] = Rational::one();
        Self(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, k: usize) -> &Rational {
        &self.0[k]
    }

    pub fn into_components(self) -> Vec<Rational> {
        self.0
    }

    /// `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: &Rational) -> Self {
        let rest = Rational::one() - w;
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a * w + b * &rest).collect())
    }

    pub fn linf_distance(&self, other: &Self) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| abs_diff(a, b)).max().unwrap_or_else(Rational::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }

    /// Parses a comma-separated list such as `"1/3,1/2,1/6"`.
    pub fn parse_list(text: &str) -> Result<Self> {
        let parts = text.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

impl fmt::Debug for WinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(format_rational).join(", "))
    }
}

impl fmt::Display for WinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A bijection on `{0, ..., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &x in &map {
            if x >= n || seen[x] {
                return Err(Error::InvalidArgument(format!("{map:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Self(map))
    }

    /// From 1-based images, e.g. `[3, 2, 1]` swaps players 1 and 3.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidArgument("player numbers start at 1".into()));
        }
        Self::new(images.iter().map(|x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut m: Vec<usize> = (0..n).collect();
        m.swap(a, b);
        Self(m)
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(Permutation)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Self(inv)
    }
}
