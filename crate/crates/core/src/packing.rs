//! Separated point sets in the discrete simplex `Δ(m-1, r) = { s ∈ Z_{≥0}^m : |s|_1 = r }`.
//!
//! A set is `2d`-separated when distinct points are at ℓ1-distance greater than
//! `2d`. The largest such sets in `Δ(m-1, 2d+1)` consist of the `m` corner points
//! plus a maximum independent set of the graph `G(m, d)` on the interior
//! candidates (points with every coordinate at most `d`).

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mis::{max_independent_set, Graph, MisOptions};
use crate::poly::compositions;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("points have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("point {index} is not in the simplex of length {length}")]
    NotInSimplex { index: usize, length: u64 },
    #[error("points {0} and {1} are at distance {2}, not separated")]
    NotSeparated(usize, usize, u64),
    #[error("NonUniqueConflict: corner {corner} is within 2d of several points")]
    NonUniqueConflict { corner: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("set of size {0} is too small (need at least 3 points)")]
    SetTooSmall(usize),
}

/// A point of `Z_{≥0}^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<u32>);

impl LatticePoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn norm(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn l1_distance(&self, other: &LatticePoint) -> u64 {
        self.0.iter().zip(&other.0).map(|(&a, &b)| (a as i64 - b as i64).unsigned_abs()).sum()
    }

    /// The corner `(0, .., 2d+1, .., 0)` with the mass at position `i`.
    pub fn corner(m: usize, d: u32, i: usize) -> Self {
        let mut c = vec![0; m];
        c[i] = 2 * d + 1;
        LatticePoint(c)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `Δ(m-1, r)`: points of `Z_{≥0}^m` with coordinate sum `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplexSpec {
    pub m: usize,
    pub r: u32,
}

impl SimplexSpec {
    pub fn contains(&self, s: &LatticePoint) -> bool {
        s.dim() == self.m && s.norm() == self.r as u64
    }
}

/// All points of the simplex, in decreasing lexicographic order.
pub fn simplex_points(spec: SimplexSpec) -> Vec<LatticePoint> {
    compositions(spec.r, spec.m).into_iter().map(LatticePoint).collect()
}

/// Outcome of a separation check; `violation` is the first offending pair `(i, j, distance)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationCheck {
    pub separated: bool,
    pub violation: Option<(usize, usize, u64)>,
}

/// Whether all distinct pairs are at ℓ1-distance strictly greater than `d`.
pub fn is_d_separated(points: &[LatticePoint], d: u64) -> Result<SeparationCheck, PackingError> {
    if let Some(first) = points.first() {
        if let Some(p) = points.iter().find(|p| p.dim() != first.dim()) {
            return Err(PackingError::DimensionMismatch(first.dim(), p.dim()));
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dist = points[i].l1_distance(&points[j]);
            if dist <= d {
                return Ok(SeparationCheck { separated: false, violation: Some((i, j, dist)) });
            }
        }
    }
    Ok(SeparationCheck { separated: true, violation: None })
}

/// A `2d`-separated subset of `Δ(m-1, 2d+1)`, in a recorded order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatedSet {
    m: usize,
    d: u32,
    points: Vec<LatticePoint>,
}

impl SeparatedSet {
    pub fn new(m: usize, d: u32, points: Vec<LatticePoint>) -> Result<Self, PackingError> {
        let simplex = SimplexSpec { m, r: 2 * d + 1 };
        for (index, p) in points.iter().enumerate() {
            if p.dim() != m {
                return Err(PackingError::DimensionMismatch(m, p.dim()));
            }
            if !simplex.contains(p) {
                return Err(PackingError::NotInSimplex { index, length: simplex.r as u64 });
            }
        }
        let check = is_d_separated(&points, 2 * d as u64)?;
        if let Some((i, j, dist)) = check.violation {
            return Err(PackingError::NotSeparated(i, j, dist));
        }
        Ok(SeparatedSet { m, d, points })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<LatticePoint> {
        self.points
    }
}

/// Returns a set containing every corner point and at least as many points as `set`.
///
/// Corners are handled in index order. A missing corner is added when it is far
/// from every current point; otherwise it replaces the one point within `2d` of it.
/// The output lists the corners first, then the surviving original points in order.
pub fn normalize_with_corners(set: &SeparatedSet) -> Result<SeparatedSet, PackingError> {
    let (m, d) = (set.m, set.d);
    let mut others: Vec<LatticePoint> = set.points.clone();
    let mut corners = Vec::with_capacity(m);
    for i in 0..m {
        let corner = LatticePoint::corner(m, d, i);
        if let Some(pos) = others.iter().position(|p| *p == corner) {
            others.remove(pos);
            corners.push(corner);
            continue;
        }
        let close: Vec<usize> = others
            .iter()
            .enumerate()
            .filter(|(_, p)| p.l1_distance(&corner) <= 2 * d as u64)
            .map(|(k, _)| k)
            .collect();
        match close.as_slice() {
            [] => {}
            [k] => {
                others.remove(*k);
            }
            _ => return Err(PackingError::NonUniqueConflict { corner: i }),
        }
        corners.push(corner);
    }
    corners.extend(others);
    SeparatedSet::new(m, d, corners)
}

/// Points of `Δ(m-1, 2d+1)` with every coordinate at most `d`: exactly the points
/// `2d`-separated from all corners.
pub fn interior_candidates(m: usize, d: u32) -> Vec<LatticePoint> {
    simplex_points(SimplexSpec { m, r: 2 * d + 1 })
        .into_iter()
        .filter(|p| p.0.iter().all(|&c| c <= d))
        .collect()
}

/// Number of interior candidates, by inclusion-exclusion over coordinates exceeding `d`.
pub fn candidate_count(m: usize, d: u32) -> u128 {
    let choose = |n: u128, k: u128| -> u128 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
    };
    let r = 2 * d as i64 + 1;
    let mut total: i128 = 0;
    for k in 0..=m {
        let rest = r - k as i64 * (d as i64 + 1);
        if rest < 0 {
            break;
        }
        let term = (choose(m as u128, k as u128) * choose(rest as u128 + m as u128 - 1, m as u128 - 1)) as i128;
        total += if k % 2 == 0 { term } else { -term };
    }
    total as u128
}

/// The graph `G(m, d)`: interior candidates, joined when at distance at most `2d`.
#[derive(Clone, Debug)]
pub struct SepGraph {
    pub m: usize,
    pub d: u32,
    pub vertices: Vec<LatticePoint>,
    pub graph: Graph,
}

pub fn build_graph(m: usize, d: u32) -> SepGraph {
    let vertices = interior_candidates(m, d);
    let mut graph = Graph::new(vertices.len());
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i].l1_distance(&vertices[j]) <= 2 * d as u64 {
                graph.add_edge(i, j);
            }
        }
    }
    SepGraph { m, d, vertices, graph }
}

/// A separated set together with whether its size is proven maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackResult {
    pub set: SeparatedSet,
    pub optimal: bool,
}

/// Corners plus a maximum independent set of `G(m, d)`.
pub fn best_separated_set(m: usize, d: u32, budget: Option<Duration>, workers: usize) -> Result<PackResult, PackingError> {
    if m == 0 {
        return Err(PackingError::PreconditionViolated("m must be at least 1".into()));
    }
    let g = build_graph(m, d);
    let mis = max_independent_set(&g.graph, &MisOptions { budget, workers });
    let points = (0..m)
        .map(|i| LatticePoint::corner(m, d, i))
        .chain(mis.vertices.iter().map(|&v| g.vertices[v].clone()))
        .collect();
    Ok(PackResult { set: SeparatedSet::new(m, d, points)?, optimal: mis.optimal })
}

fn two_adic_valuation(j: usize) -> u32 {
    j.trailing_zeros()
}

/// The explicit construction for `d ≥ m - 1`: corners plus, for `1 ≤ j ≤ m/2` and
/// `1 ≤ k ≤ m - 2j` with `r = ord_2(j)`, the point with `d - r - k` at position `k`,
/// `d` at position `k + j` and `r + k + 1` at position `k + 2j` (1-based).
pub fn quadratic_construction(m: usize, d: u32) -> Result<SeparatedSet, PackingError> {
    if m == 0 || (d as usize) + 1 < m {
        return Err(PackingError::PreconditionViolated(format!("need m >= 1 and d >= m - 1, got m = {m}, d = {d}")));
    }
    let mut points: Vec<LatticePoint> = (0..m).map(|i| LatticePoint::corner(m, d, i)).collect();
    for j in 1..=m / 2 {
        let r = two_adic_valuation(j);
        for k in 1..=m - 2 * j {
            let mut c = vec![0u32; m];
            c[k - 1] = d - r - k as u32;
            c[k + j - 1] = d;
            c[k + 2 * j - 1] = r + k as u32 + 1;
            points.push(LatticePoint(c));
        }
    }
    SeparatedSet::new(m, d, points)
}

/// Size of the explicit construction: `m(m+2)/4` for even `m`, `(m+1)^2/4` for odd `m`.
pub fn quadratic_size(m: usize) -> usize {
    if m.is_multiple_of(2) { m * (m + 2) / 4 } else { (m + 1) * (m + 1) / 4 }
}

/// `A(m, 4, 3)`, the maximum number of weight-3 binary words of length `m` at
/// pairwise Hamming distance at least 4 (`m ≥ 3`).
pub fn constant_weight_bound(m: usize) -> usize {
    let base = m * ((m - 1) / 2) / 3;
    if m % 6 == 5 { base - 1 } else { base }
}

/// Closed-form bounds: separated sets have at most `4^{m-1}` points, and the
/// resulting non-commutators have size at most `2^{2m-3}` (the latter for `m ≥ 3`).
pub fn upper_bounds(m: usize) -> (u128, Option<u128>) {
    let set = 4u128.checked_pow(m.saturating_sub(1) as u32).unwrap_or(u128::MAX);
    let matrix = (m >= 3).then(|| 2u128.checked_pow(2 * m as u32 - 3).unwrap_or(u128::MAX));
    (set, matrix)
}

/// Largest `n` with `2n - 1 ≤ #S`.
pub fn matrix_size_from_set(size: usize) -> Result<usize, PackingError> {
    if size < 3 {
        return Err(PackingError::SetTooSmall(size));
    }
    Ok(size.div_ceil(2))
}
