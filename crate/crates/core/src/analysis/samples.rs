//! The standard sample matrices that property checks run against.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{DoublyMonotonic, MatchMatrix, MatrixJson};
use crate::rational::{half, Rational};

/// Seed of the shipped sample set.
pub const STANDARD_SEED: u64 = 0x7a11_0001;

/// Grid denominator for random entries.
const GRID: i64 = 24;

const RANDOM_SAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub label: String,
    pub matrix: MatchMatrix,
}

impl Sample {
    pub fn new(label: impl Into<String>, matrix: MatchMatrix) -> Self {
        Self { label: label.into(), matrix }
    }
}

#[derive(Serialize)]
struct SampleJson<'a> {
    label: &'a str,
    matrix: MatrixJson,
}

impl Serialize for Sample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SampleJson { label: &self.label, matrix: self.matrix.to_json() }.serialize(s)
    }
}

fn grid(k: i64) -> Rational {
    Rational::new(k.into(), GRID.into())
}

/// Upper entries drawn from `{1/24, ..., 23/24}`, so no entry is 0 or 1.
pub fn random_interior(n: usize, rng: &mut impl Rng) -> MatchMatrix {
    MatchMatrix::from_upper(n, |_, _| grid(rng.random_range(1..GRID))).expect("grid entries are valid")
}

/// A doubly monotonic matrix: sorted upper entries from `{1/2, ..., 1}`
/// (ties allowed) laid out along a random linear extension of the order
/// "further from the diagonal towards the top right is larger".
pub fn random_doubly_monotonic(n: usize, rng: &mut impl Rng) -> DoublyMonotonic {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut values: Vec<i64> = (0..pairs.len()).map(|_| rng.random_range(GRID / 2..=GRID)).collect();
    values.sort_unstable();
    let mut upper = vec![vec![half(); n]; n];
    for v in values {
        let minimal: Vec<usize> = (0..pairs.len())
            .filter(|&a| {
                let (i, j) = pairs[a];
                !pairs.iter().any(|&(k, l)| (k, l) != (i, j) && k >= i && l <= j)
            })
            .collect();
        let (i, j) = pairs.remove(*minimal.choose(rng).expect("a minimal pair exists"));
        upper[i][j] = grid(v);
    }
    let m = MatchMatrix::from_upper(n, |i, j| upper[i][j].clone()).expect("grid entries are valid");
    DoublyMonotonic::new(m).expect("linear extensions are monotone")
}

/// Every doubly monotonic matrix with entries in `{0, 1/2, 1}`.
pub fn deterministic_monotonic(n: usize) -> Vec<DoublyMonotonic> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for bits in 0u32..(1 << pairs.len()) {
        let mut upper = vec![vec![half(); n]; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if bits >> k & 1 == 1 {
                upper[i][j] = Rational::from_integer(1.into());
            }
        }
        let m = MatchMatrix::from_upper(n, |i, j| upper[i][j].clone()).expect("entries are valid");
        if let Ok(d) = DoublyMonotonic::new(m) {
            out.push(d);
        }
    }
    out
}

/// The uniform matrix, `P*` (three players), 10 random interior matrices,
/// 10 random doubly monotonic matrices and, for `n <= 3`, every
/// `{0, 1/2, 1}` doubly monotonic matrix.
pub fn standard_samples(n: usize, seed: u64) -> Result<Vec<Sample>> {
    if n == 0 {
        return Err(Error::InvalidArgument("samples need at least one player".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Sample::new("uniform", MatchMatrix::uniform(n))];
    if n == 3 {
        out.push(Sample::new("pstar", MatchMatrix::pstar()));
    }
    for k in 0..RANDOM_SAMPLES {
        out.push(Sample::new(format!("interior-{k}"), random_interior(n, &mut rng)));
    }
    for k in 0..RANDOM_SAMPLES {
        out.push(Sample::new(format!("monotonic-{k}"), random_doubly_monotonic(n, &mut rng).into_inner()));
    }
    if n <= 3 {
        for (k, d) in deterministic_monotonic(n).into_iter().enumerate() {
            out.push(Sample::new(format!("deterministic-{k}"), d.into_inner()));
        }
    }
    Ok(out)
}

/// The doubly monotonic part of the standard set.
pub fn monotonic_samples(n: usize, seed: u64) -> Result<Vec<DoublyMonotonic>> {
    Ok(standard_samples(n, seed)?
        .into_iter()
        .filter_map(|s| DoublyMonotonic::new(s.matrix).ok())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_set_shape() {
        let s3 = standard_samples(3, STANDARD_SEED).unwrap();
        // {0, 1/2, 1} monotone for three players: p13 >= max(p12, p23), all upper >= 1/2
        assert_eq!(deterministic_monotonic(3).len(), 5);
        assert_eq!(s3.len(), 2 + 20 + 5);
        assert!(s3[2..12].iter().all(|s| s.matrix.is_interior()));
        assert!(s3[12..].iter().all(|s| s.matrix.is_doubly_monotonic()));
        assert_eq!(standard_samples(3, STANDARD_SEED).unwrap(), s3);
        assert_eq!(standard_samples(5, 1).unwrap().len(), 21);
    }
}
