//! Matrix isomorphism, maps defined only on a finite grid of matrices, and
//! the LP whose feasible points are the symmetric honest grid maps.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{MatchMatrix, Permutation, WinVector};
use crate::polytope::{LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{format_rational, Rational};

/// Upper bound on the number of grid matrices a polytope may range over.
pub const MAX_GRID_MATRICES: usize = 10_000;

/// Increasing piecewise-linear map on `[0, 1]` through `breakpoints`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiecewiseLinear {
    #[serde(serialize_with = "serialize_pairs")]
    pub breakpoints: Vec<(Rational, Rational)>,
}

fn serialize_pairs<S: serde::Serializer>(v: &[(Rational, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (x, y) in v {
        seq.serialize_element(&[format_rational(x), format_rational(y)])?;
    }
    seq.end()
}

impl PiecewiseLinear {
    pub fn apply(&self, x: &Rational) -> Rational {
        let k = self.breakpoints.partition_point(|(b, _)| b < x);
        if k < self.breakpoints.len() && self.breakpoints[k].0 == *x {
            return self.breakpoints[k].1.clone();
        }
        let (x0, y0) = &self.breakpoints[k - 1];
        let (x1, y1) = &self.breakpoints[k];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn apply_matrix(&self, p: &MatchMatrix) -> Result<MatchMatrix> {
        MatchMatrix::new(p.rows().iter().map(|row| row.iter().map(|x| self.apply(x)).collect()).collect())
    }
}

/// Two cells ordered differently in the two matrices. `None` for a cell
/// stands for the pinned endpoint 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderViolation {
    pub first: (usize, usize),
    pub second: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Isomorphism {
    Map(PiecewiseLinear),
    NotIsomorphic(OrderViolation),
}

/// The piecewise-linear `phi` with `phi(0) = 0`, `phi(1) = 1` and
/// `phi(p_ij) = q_ij`, if the entries of `p` and `q` are ordered alike.
pub fn isomorphism_phi(p: &MatchMatrix, q: &MatchMatrix) -> Result<Isomorphism> {
    let n = p.n();
    if q.n() != n {
        return Err(Error::SizeMismatch { expected: n, actual: q.n() });
    }
    let cells: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).collect();
    for (a, &(i, j)) in cells.iter().enumerate() {
        for &(k, l) in &cells[a + 1..] {
            let po = p.get(i, j).cmp(p.get(k, l));
            let qo = q.get(i, j).cmp(q.get(k, l));
            if po != qo {
                return Ok(Isomorphism::NotIsomorphic(OrderViolation {
                    first: (i, j),
                    second: Some((k, l)),
                    detail: format!(
                        "p_{}{} vs p_{}{} is {:?} but q_{}{} vs q_{}{} is {:?}",
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1,
                        po,
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1,
                        qo
                    ),
                }));
            }
        }
    }
    let mut breakpoints: BTreeMap<Rational, Rational> = BTreeMap::new();
    for &(i, j) in &cells {
        breakpoints.insert(p.get(i, j).clone(), q.get(i, j).clone());
    }
    for end in [Rational::zero(), Rational::one()] {
        match breakpoints.get(&end) {
            Some(image) if *image != end => {
                let (i, j) = cells.iter().copied().find(|&(i, j)| *p.get(i, j) == end).expect("value came from a cell");
                return Ok(Isomorphism::NotIsomorphic(OrderViolation {
                    first: (i, j),
                    second: None,
                    detail: format!("p_{}{} = {end} must map to itself, but q_{}{} = {image}", i + 1, j + 1, i + 1, j + 1),
                }));
            }
            Some(_) => {}
            None => {
                breakpoints.insert(end.clone(), end);
            }
        }
    }
    Ok(Isomorphism::Map(PiecewiseLinear { breakpoints: breakpoints.into_iter().collect() }))
}

/// `B_P`: the entries of `p` together with 0 and 1, ascending. The set is
/// closed under `x -> 1 - x`, so level `k` and level `len - 1 - k` are
/// complements.
pub fn levels(p: &MatchMatrix) -> Vec<Rational> {
    let mut set: BTreeSet<Rational> = p.value_set().into_iter().collect();
    set.insert(Rational::zero());
    set.insert(Rational::one());
    set.into_iter().collect()
}

/// Grid coordinates: a level index per pair `i < j` in lexicographic order.
type GridKey = Vec<usize>;

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

struct Grid {
    n: usize,
    levels: Vec<Rational>,
    pairs: Vec<(usize, usize)>,
    pair_index: HashMap<(usize, usize), usize>,
}

impl Grid {
    fn new(base: &MatchMatrix) -> Self {
        let n = base.n();
        let pairs = upper_pairs(n);
        let pair_index = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        Self { n, levels: levels(base), pairs, pair_index }
    }

    fn size(&self) -> Option<usize> {
        u32::try_from(self.pairs.len()).ok().and_then(|m| self.levels.len().checked_pow(m))
    }

    fn level_of(&self, x: &Rational) -> Option<usize> {
        self.levels.binary_search(x).ok()
    }

    fn key_of(&self, m: &MatchMatrix) -> Option<GridKey> {
        self.pairs.iter().map(|&(i, j)| self.level_of(m.get(i, j))).collect()
    }

    fn matrix(&self, key: &[usize]) -> MatchMatrix {
        MatchMatrix::from_upper(self.n, |i, j| self.levels[key[self.pair_index[&(i, j)]]].clone())
            .expect("grid levels are closed under complement")
    }

    fn keys(&self) -> impl Iterator<Item = GridKey> + '_ {
        self.pairs.iter().map(|_| 0..self.levels.len()).multi_cartesian_product()
    }

    /// Level of `q_ab` for any ordered pair `a != b`.
    fn entry(&self, key: &[usize], a: usize, b: usize) -> usize {
        if a < b {
            key[self.pair_index[&(a, b)]]
        } else {
            self.levels.len() - 1 - key[self.pair_index[&(b, a)]]
        }
    }

    /// Key of `sigma Q`, where `(sigma Q)_{sigma(a) sigma(b)} = q_ab`.
    fn permuted(&self, key: &[usize], sigma: &Permutation) -> GridKey {
        let inv = sigma.inverse();
        self.pairs.iter().map(|&(a, b)| self.entry(key, inv.apply(a), inv.apply(b))).collect()
    }

    /// Key with `q_ij` raised one level, if it is not already 1.
    fn raised(&self, key: &[usize], i: usize, j: usize) -> Option<GridKey> {
        let mut out = key.to_vec();
        if i < j {
            let k = self.pair_index[&(i, j)];
            (out[k] + 1 < self.levels.len()).then(|| {
                out[k] += 1;
                out
            })
        } else {
            let k = self.pair_index[&(j, i)];
            (out[k] > 0).then(|| {
                out[k] -= 1;
                out
            })
        }
    }
}

/// A map from the grid `M_n(P)` to win vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMap {
    base: MatchMatrix,
    table: BTreeMap<GridKey, WinVector>,
}

impl DiscreteMap {
    /// Tabulates `f` on every grid matrix of `base`.
    pub fn from_fn(base: &MatchMatrix, mut f: impl FnMut(&MatchMatrix) -> Result<WinVector>) -> Result<Self> {
        let grid = Grid::new(base);
        check_grid(&grid)?;
        let mut table = BTreeMap::new();
        for key in grid.keys() {
            let v = f(&grid.matrix(&key))?;
            if v.n() != base.n() {
                return Err(Error::SizeMismatch { expected: base.n(), actual: v.n() });
            }
            table.insert(key, v);
        }
        Ok(Self { base: base.clone(), table })
    }

    pub fn base(&self) -> &MatchMatrix {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Value at a grid matrix.
    pub fn get(&self, q: &MatchMatrix) -> Option<&WinVector> {
        Grid::new(&self.base).key_of(q).and_then(|k| self.table.get(&k))
    }
}

fn check_grid(grid: &Grid) -> Result<usize> {
    match grid.size() {
        Some(size) if size <= MAX_GRID_MATRICES => Ok(size),
        _ => Err(Error::Guard(format!(
            "grid of {} levels over {} pairs exceeds {MAX_GRID_MATRICES} matrices",
            grid.levels.len(),
            grid.pairs.len()
        ))),
    }
}

/// `g(Q) = E f(R)`, where each `q_ij` off the grid is rounded independently
/// to one of its two neighbouring levels with the probabilities that keep
/// its mean.
pub fn extend_discrete_map(f: &DiscreteMap, q: &MatchMatrix) -> Result<WinVector> {
    let grid = Grid::new(&f.base);
    if q.n() != grid.n {
        return Err(Error::SizeMismatch { expected: grid.n, actual: q.n() });
    }
    let choices: Vec<Vec<(usize, Rational)>> = grid
        .pairs
        .iter()
        .map(|&(i, j)| {
            let x = q.get(i, j);
            let k = grid.levels.partition_point(|l| l < x);
            if grid.levels[k] == *x {
                return vec![(k, Rational::one())];
            }
            let (lo, hi) = (&grid.levels[k - 1], &grid.levels[k]);
            let p = (hi - x) / (hi - lo);
            let rest = Rational::one() - &p;
            vec![(k - 1, p), (k, rest)]
        })
        .collect();
    let mut acc = vec![Rational::zero(); grid.n];
    for combo in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
        let weight: Rational = combo.iter().map(|(_, w)| w).product();
        let key: GridKey = combo.iter().map(|(k, _)| *k).collect();
        let v = f.table.get(&key).ok_or_else(|| Error::InvalidArgument("map is missing a grid matrix".into()))?;
        for (a, x) in acc.iter_mut().zip(v.components()) {
            *a += &weight * x;
        }
    }
    WinVector::new(acc)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut cur = x;
        while self.0[cur] != root {
            let next = self.0[cur];
            self.0[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The symmetric, honest maps on the grid of `P`, as an LP over one variable
/// per symmetry orbit of coordinates `f_i(Q)`.
pub struct DiscreteMapPolytope {
    grid: Grid,
    base: MatchMatrix,
    keys: Vec<GridKey>,
    index: HashMap<GridKey, usize>,
    /// LP variable of coordinate `f_i(Q)` at `q * n + i`.
    var: Vec<usize>,
    num_vars: usize,
    lp: LinearProgram,
}

/// An optimum over the polytope, with one optimal map.
#[derive(Clone, Debug)]
pub struct MapOptimum {
    pub value: Rational,
    pub at_base: WinVector,
    pub map: DiscreteMap,
}

pub fn discrete_map_polytope(p: &MatchMatrix) -> Result<DiscreteMapPolytope> {
    let grid = Grid::new(p);
    check_grid(&grid)?;
    let n = grid.n;
    let keys: Vec<GridKey> = grid.keys().collect();
    let index: HashMap<GridKey, usize> = keys.iter().cloned().enumerate().map(|(k, key)| (key, k)).collect();

    // f_i(Q) = f_{sigma(i)}(sigma Q); two generators of S_n give every orbit
    let mut uf = UnionFind((0..keys.len() * n).collect());
    let mut generators = Vec::new();
    if n >= 2 {
        generators.push(Permutation::transposition(n, 0, 1));
        generators.push(Permutation::new((1..n).chain([0]).collect()).expect("a cycle is a permutation"));
    }
    for (q, key) in keys.iter().enumerate() {
        for sigma in &generators {
            let image = index[&grid.permuted(key, sigma)];
            for i in 0..n {
                uf.union(q * n + i, image * n + sigma.apply(i));
            }
        }
    }
    let mut class_ids: HashMap<usize, usize> = HashMap::new();
    let var: Vec<usize> = (0..keys.len() * n)
        .map(|c| {
            let root = uf.find(c);
            let next = class_ids.len();
            *class_ids.entry(root).or_insert(next)
        })
        .collect();
    let num_vars = class_ids.len();

    let mut lp = LinearProgram::feasibility(num_vars);
    let mut seen: BTreeSet<Vec<(usize, Rational)>> = BTreeSet::new();
    for q in 0..keys.len() {
        let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
        for i in 0..n {
            *row.entry(var[q * n + i]).or_insert_with(Rational::zero) += Rational::one();
        }
        let row: Vec<(usize, Rational)> = row.into_iter().collect();
        if seen.insert(row.clone()) {
            lp.add(row, Relation::Eq, Rational::one());
        }
    }
    // f_i(Q') >= f_i(Q) when Q' raises q_ij by one level
    for (q, key) in keys.iter().enumerate() {
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let Some(up) = grid.raised(key, i, j) else { continue };
                let (hi, lo) = (var[index[&up] * n + i], var[q * n + i]);
                if hi == lo {
                    continue;
                }
                let row = vec![(hi, Rational::one()), (lo, -Rational::one())];
                if seen.insert(row.clone()) {
                    lp.add(row, Relation::Ge, Rational::zero());
                }
            }
        }
    }
    Ok(DiscreteMapPolytope { grid, base: p.clone(), keys, index, var, num_vars, lp })
}

impl DiscreteMapPolytope {
    pub fn grid_size(&self) -> usize {
        self.keys.len()
    }

    /// Number of LP variables after merging symmetry orbits.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.lp.constraints.len()
    }

    fn base_vars(&self) -> Vec<usize> {
        let q = self.index[&self.grid.key_of(&self.base).expect("the base lies on its own grid")];
        (0..self.grid.n).map(|i| self.var[q * self.grid.n + i]).collect()
    }

    /// Optimizes `weights . f(P)` over all symmetric honest grid maps.
    pub fn optimize(&self, weights: &[Rational], sense: Sense) -> Result<MapOptimum> {
        let n = self.grid.n;
        if weights.len() != n {
            return Err(Error::SizeMismatch { expected: n, actual: weights.len() });
        }
        let mut objective: BTreeMap<usize, Rational> = BTreeMap::new();
        for (v, w) in self.base_vars().into_iter().zip(weights) {
            *objective.entry(v).or_insert_with(Rational::zero) += w;
        }
        let mut lp = self.lp.clone();
        lp.sense = sense;
        lp.set_objective(objective.into_iter().collect());
        let solution = match lp.solve()? {
            LpOutcome::Optimal(s) => s,
            LpOutcome::Infeasible(_) => return Err(Error::Lp("no symmetric honest grid map exists".into())),
            LpOutcome::Unbounded(_) => return Err(Error::Lp("grid map program is unbounded".into())),
        };
        let mut table = BTreeMap::new();
        for (q, key) in self.keys.iter().enumerate() {
            let v = WinVector::new((0..n).map(|i| solution.x[self.var[q * n + i]].clone()).collect())?;
            table.insert(key.clone(), v);
        }
        let map = DiscreteMap { base: self.base.clone(), table };
        let at_base = map.get(&self.base).expect("the base lies on its own grid").clone();
        Ok(MapOptimum { value: solution.value, at_base, map })
    }

    /// Does `f` satisfy every symmetry, honesty and distribution constraint?
    pub fn contains(&self, f: &DiscreteMap) -> bool {
        let n = self.grid.n;
        if f.base != self.base || f.table.len() != self.keys.len() {
            return false;
        }
        let mut x: Vec<Option<Rational>> = vec![None; self.num_vars];
        for (q, key) in self.keys.iter().enumerate() {
            let Some(v) = f.table.get(key) else { return false };
            for i in 0..n {
                let slot = &mut x[self.var[q * n + i]];
                match slot {
                    Some(existing) if existing != v.get(i) => return false,
                    Some(_) => {}
                    None => *slot = Some(v.get(i).clone()),
                }
            }
        }
        let x: Vec<Rational> = x.into_iter().map(|v| v.unwrap_or_else(Rational::zero)).collect();
        self.lp.is_feasible_point(&x)
    }
}
