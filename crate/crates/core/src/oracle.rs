//! Brute-force commutator searches over finite rings, and an explicit
//! decomposition of the quadric matrix modulo `x^2 + y^2 + z^2 - 1`.
//!
//! Ring elements are replaced by their enumeration indices, with addition and
//! multiplication tabulated once. Matrices `B`, `C` are enumerated with
//! `b_nn = c_nn = 0` (the diagonal shift `B -> B - b_nn I` leaves `[B, C]`
//! unchanged), entries row-major, first entry most significant.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{validate_certificate, Certificate};
use crate::error::{MatrixError, RingError};
use crate::field::FieldSpec;
use crate::matrix::{commutator, Matrix};
use crate::poly::{reduce_by_divisor, MonomialOrder, Polynomial, RingCtx};

pub const DEFAULT_PAIR_BUDGET: u128 = 1 << 34;
const CHECKPOINT_PAIRS: u128 = 1 << 20;
const MAX_TABLE_ELEMENTS: u128 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search needs {required} pairs, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("ring is infinite")]
    InfiniteRing,
    #[error("{0} has no square root of -1 modulo {1}")]
    NoSquareRootOfMinusOne(u64, u32),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub budget: u128,
    pub workers: usize,
    /// Progress file; an existing file for the same problem resumes the search.
    pub checkpoint: Option<PathBuf>,
    /// Fix `b_nn = c_nn = 0`.
    pub normalize: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { budget: DEFAULT_PAIR_BUDGET, workers: 1, checkpoint: None, normalize: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    NoWitness { pairs: u128 },
    FoundWitness { b: Matrix, c: Matrix },
}

/// A finite matrix ring with tabulated arithmetic, and the enumeration of the
/// matrices searched.
pub struct SearchSpace {
    ctx: RingCtx,
    n: usize,
    size: usize,
    elements: Vec<Polynomial>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    free: Vec<usize>,
}

impl SearchSpace {
    pub fn new(ctx: RingCtx, n: usize, normalize: bool) -> Result<Self, OracleError> {
        if !ctx.is_finite() {
            return Err(OracleError::InfiniteRing);
        }
        let card = ctx.cardinality()?;
        let free: Vec<usize> = (0..n * n).filter(|&k| !(normalize && k == n * n - 1)).collect();
        if card > MAX_TABLE_ELEMENTS {
            let required = card.checked_pow(2 * free.len() as u32).unwrap_or(u128::MAX);
            return Err(OracleError::BudgetExceeded { required, budget: DEFAULT_PAIR_BUDGET });
        }
        let ring = ctx.enumerate()?;
        let basis = ring.basis().to_vec();
        let size = card as usize;
        let elements: Vec<Polynomial> = ring.collect();
        let index = |p: &Polynomial| ctx.element_index(&basis, p).map(|k| k as u32);
        let mut add = vec![0; elements.len() * elements.len()];
        let mut mul = vec![0; elements.len() * elements.len()];
        let mut neg = vec![0; elements.len()];
        for (i, a) in elements.iter().enumerate() {
            neg[i] = index(&a.neg())?;
            for (j, b) in elements.iter().enumerate() {
                add[i * size + j] = index(&ctx.add(a, b)?)?;
                mul[i * size + j] = index(&ctx.mul(a, b)?)?;
            }
        }
        Ok(SearchSpace { ctx, n, size, elements, add, mul, neg, free })
    }

    pub fn ring_size(&self) -> usize {
        self.size
    }

    /// Number of candidate matrices for each of `B` and `C`.
    pub fn side(&self) -> u128 {
        (self.size as u128).checked_pow(self.free.len() as u32).unwrap_or(u128::MAX)
    }

    /// Number of `(B, C)` pairs, saturating.
    pub fn pairs(&self) -> u128 {
        self.side().saturating_mul(self.side())
    }

    /// Entry indices of the `k`-th matrix.
    pub fn matrix_at(&self, mut k: u128) -> Vec<u32> {
        let mut out = vec![0u32; self.n * self.n];
        for &pos in self.free.iter().rev() {
            out[pos] = (k % self.size as u128) as u32;
            k /= self.size as u128;
        }
        out
    }

    pub fn index_of_matrix(&self, m: &Matrix) -> Result<Vec<u32>, OracleError> {
        let basis = self.ctx.basis_monomials()?;
        let mut out = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let p = self.ctx.reduce(m.get(i, j))?;
                out.push(self.ctx.element_index(&basis, &p)? as u32);
            }
        }
        Ok(out)
    }

    pub fn to_matrix(&self, entries: &[u32]) -> Matrix {
        Matrix::from_fn(self.ctx, self.n, |i, j| self.elements[entries[i * self.n + j] as usize].clone())
            .expect("enumerated elements lie in the search ring")
    }

    #[inline]
    fn entry(&self, b: &[u32], c: &[u32], i: usize, j: usize) -> u32 {
        let (n, s) = (self.n, self.size);
        let mut acc = 0u32;
        for k in 0..n {
            let bc = self.mul[b[i * n + k] as usize * s + c[k * n + j] as usize];
            let cb = self.mul[c[i * n + k] as usize * s + b[k * n + j] as usize];
            acc = self.add[acc as usize * s + bc as usize];
            acc = self.add[acc as usize * s + self.neg[cb as usize] as usize];
        }
        acc
    }

    /// Whether `[B, C] = A`, checking entry `(1, 1)` first.
    pub fn is_decomposition(&self, a: &[u32], b: &[u32], c: &[u32]) -> bool {
        if self.entry(b, c, 0, 0) != a[0] {
            return false;
        }
        (0..self.n).all(|i| (0..self.n).all(|j| (i == 0 && j == 0) || self.entry(b, c, i, j) == a[i * self.n + j]))
    }

    fn advance(&self, m: &mut [u32]) {
        for &pos in self.free.iter().rev() {
            m[pos] += 1;
            if (m[pos] as usize) < self.size {
                return;
            }
            m[pos] = 0;
        }
    }

    /// First `C` (in enumeration order) with `[B, C] = A` for the given `B`.
    fn scan(&self, a: &[u32], b: &[u32]) -> Option<u128> {
        let mut c = vec![0u32; self.n * self.n];
        let side = self.side();
        for k in 0..side {
            if self.is_decomposition(a, b, &c) {
                return Some(k);
            }
            self.advance(&mut c);
        }
        None
    }
}

#[derive(Serialize, Deserialize)]
struct Progress {
    problem: String,
    next: String,
    pairs: String,
}

fn read_progress(path: &Path, problem: &str) -> Result<u128, OracleError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(OracleError::Checkpoint(e.to_string())),
    };
    let p: Progress = serde_json::from_str(&text).map_err(|e| OracleError::Checkpoint(e.to_string()))?;
    if p.problem != problem {
        return Err(OracleError::Checkpoint("progress file belongs to a different search".into()));
    }
    p.next.parse().map_err(|_| OracleError::Checkpoint(format!("bad position {}", p.next)))
}

fn write_progress(path: &Path, problem: &str, next: u128, pairs: u128) -> Result<(), OracleError> {
    let p = Progress { problem: problem.to_string(), next: next.to_string(), pairs: pairs.to_string() };
    let tmp = path.with_extension("tmp");
    let text = serde_json::to_string(&p).map_err(|e| OracleError::Checkpoint(e.to_string()))?;
    fs::write(&tmp, text).and_then(|_| fs::rename(&tmp, path)).map_err(|e| OracleError::Checkpoint(e.to_string()))
}

/// First `(B, C)` in enumeration order with `[B, C] = A`, over the finite ring of `A`.
pub fn exhaustive_commutator_search(a: &Matrix, opts: &OracleOptions) -> Result<OracleOutcome, OracleError> {
    let space = SearchSpace::new(*a.ctx(), a.size(), opts.normalize)?;
    let required = space.pairs();
    if required > opts.budget {
        return Err(OracleError::BudgetExceeded { required, budget: opts.budget });
    }
    let target = space.index_of_matrix(a)?;
    let problem = format!("{}|{}", serde_json::to_string(a).unwrap_or_default(), opts.normalize);
    let side = space.side();
    let mut start = match &opts.checkpoint {
        Some(path) => read_progress(path, &problem)?,
        None => 0,
    };
    let block = (CHECKPOINT_PAIRS / side).max(1);
    let run = |lo: u128, hi: u128| -> Option<(u128, u128)> {
        let search = |bi: u128| {
            let b = space.matrix_at(bi);
            space.scan(&target, &b).map(|ci| (bi, ci))
        };
        if opts.workers > 1 {
            (lo..hi).collect::<Vec<_>>().into_par_iter().find_map_first(search)
        } else {
            (lo..hi).find_map(search)
        }
    };
    let pool = (opts.workers > 1)
        .then(|| rayon::ThreadPoolBuilder::new().num_threads(opts.workers).build().ok())
        .flatten();
    while start < side {
        let end = (start + block).min(side);
        let hit = match &pool {
            Some(p) => p.install(|| run(start, end)),
            None => run(start, end),
        };
        if let Some((bi, ci)) = hit {
            let b = space.to_matrix(&space.matrix_at(bi));
            let c = space.to_matrix(&space.matrix_at(ci));
            debug_assert_eq!(commutator(&b, &c).ok().as_ref(), Some(&space.to_matrix(&target)));
            return Ok(OracleOutcome::FoundWitness { b, c });
        }
        start = end;
        if let Some(path) = &opts.checkpoint {
            write_progress(path, &problem, start, start.saturating_mul(side))?;
        }
    }
    Ok(OracleOutcome::NoWitness { pairs: required })
}

/// The truncation `k[x]/m^{3d+2}` in which a certificate's matrix is searched.
pub fn certificate_search_ring(c: &Certificate, p: u64) -> Result<RingCtx, OracleError> {
    let field = FieldSpec::prime(p)?;
    Ok(RingCtx::truncated(field, c.m, 3 * c.d + 2)?)
}

/// The certificate's matrix, read in `F_p[x]/m^{3d+2}`.
pub fn certificate_matrix_mod_p(c: &Certificate, p: u64) -> Result<Matrix, OracleError> {
    let ctx = certificate_search_ring(c, p)?;
    let field = ctx.field;
    let mut entries = Vec::with_capacity(c.n * c.n);
    for i in 0..c.n {
        for j in 0..c.n {
            let terms = c
                .x
                .get(i, j)
                .terms()
                .map(|(mono, coeff)| Ok((mono.exps().to_vec(), field.parse_elem(&coeff.to_string())?)))
                .collect::<Result<Vec<_>, RingError>>()?;
            let poly = Polynomial::from_terms(c.m, field, terms)?;
            entries.push(ctx.reduce(&poly)?);
        }
    }
    Ok(Matrix::from_fn(ctx, c.n, |i, j| entries[i * c.n + j].clone())?)
}

/// Searches for `B, C` with `[B, C] = X` over `F_p[x]/m^{3d+2}`. `NoWitness`
/// shows `X` is not a commutator over any polynomial ring in characteristic `p`.
pub fn exhaustive_noncommutator_check(c: &Certificate, p: u64, opts: &OracleOptions) -> Result<OracleOutcome, OracleError> {
    let report = validate_certificate(c);
    if !report.passed() {
        return Err(OracleError::InvalidCertificate(report.failures()));
    }
    let x = certificate_matrix_mod_p(c, p)?;
    exhaustive_commutator_search(&x, opts)
}

/// The explicit pair `B, C` with `[B, C] = [[x, y], [z, -x]]` modulo
/// `x^2 + y^2 + z^2 - 1`, where `i^2 = -1` in `F_p`. Returns whether every entry
/// of `[B, C] - A` reduces to zero.
pub fn quadric_decomposition_check(p: u64, i: u64) -> Result<bool, OracleError> {
    let field = FieldSpec::prime(p)?;
    let fp = p as u32;
    if (i % p) * (i % p) % p != p - 1 {
        return Err(OracleError::NoSquareRootOfMinusOne(i, fp));
    }
    let ctx = RingCtx::polynomial(field, 3);
    let iu = i.to_string();
    let parse = |s: String| ctx.parse(&s);
    let ix_minus_y = parse(format!("{iu}*x1 - x2"))?;
    let x = ctx.var(0);
    let x_ixy = ctx.mul(&x, &ix_minus_y)?;
    let b11 = ctx.add(&ctx.one(), &ctx.mul(&parse(format!("{iu}*x1"))?, &ix_minus_y)?)?;
    let a = Matrix::parse(ctx, &[&["x1", "x2"], &["x3", "-x1"]])?;
    let b = Matrix::from_rows(
        ctx,
        vec![vec![b11, parse("-x1*x3".into())?], vec![x_ixy, ctx.zero()]],
    )?;
    let c = Matrix::from_rows(
        ctx,
        vec![
            vec![parse(format!("-{iu}*x3"))?, parse(format!("{iu}*x1 + x2"))?],
            vec![parse("-x3".into())?, ctx.zero()],
        ],
    )?;
    let diff = commutator(&b, &c)?.sub(&a)?;
    let quadric = parse("x1^2 + x2^2 + x3^2 - 1".into())?;
    for r in 0..2 {
        for s in 0..2 {
            if !reduce_by_divisor(diff.get(r, s), &quadric, MonomialOrder::GradedLex)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
