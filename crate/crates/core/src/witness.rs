//! Constructive commutator decompositions `A = [X, B]`.
//!
//! Every decomposition is returned as a [`WitnessPair`], which can only be built
//! after the identity has been checked by recomputing the commutator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{MatrixError, RingError};
use crate::field::FieldElem;
use crate::matrix::{commutator, conjugate, nilpotent_flag, trace, Matrix};
use crate::poly::{Polynomial, RingCtx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("NotUpperTriangular: entry ({0},{1}) below the diagonal is nonzero")]
    NotUpperTriangular(usize, usize),
    #[error("NonzeroTrace: trace is {0}")]
    NonzeroTrace(String),
    #[error("NotHollow: diagonal entry {0} is nonzero")]
    NotHollow(usize),
    #[error("CliqueTooSmall: need {needed} elements, clique has {got}")]
    CliqueTooSmall { needed: usize, got: usize },
    #[error("NonInvertibleDifference: r_{0} - r_{1} is not a unit")]
    NonInvertibleDifference(usize, usize),
    #[error("NotAUnit: clique element {0} is not a unit")]
    NotAUnit(usize),
    #[error("DifferenceNotAUnit: elements {0} and {1} differ by a non-unit")]
    DifferenceNotAUnit(usize, usize),
    #[error("NotNilpotent: A^n is nonzero")]
    NotNilpotent,
    #[error("verification failed: [X, B] differs from the target")]
    VerificationFailed,
    #[error(transparent)]
    Matrix(MatrixError),
}

impl From<MatrixError> for WitnessError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::NotNilpotent => WitnessError::NotNilpotent,
            other => WitnessError::Matrix(other),
        }
    }
}

impl From<RingError> for WitnessError {
    fn from(e: RingError) -> Self {
        WitnessError::Matrix(MatrixError::Ring(e))
    }
}

/// Units `r_1, ..., r_n` of a ring whose pairwise differences are also units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clique {
    ctx: RingCtx,
    elements: Vec<Polynomial>,
}

impl Clique {
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Checks that every element and every pairwise difference is a unit of `ctx`.
/// Indices in errors are zero-based positions in `elements`.
pub fn verify_clique(elements: Vec<Polynomial>, ctx: &RingCtx) -> Result<Clique, WitnessError> {
    for (i, r) in elements.iter().enumerate() {
        ctx.check(r)?;
        if !ctx.is_unit(r) {
            return Err(WitnessError::NotAUnit(i));
        }
    }
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if !ctx.is_unit(&elements[i].sub(&elements[j])?) {
                return Err(WitnessError::DifferenceNotAUnit(i, j));
            }
        }
    }
    Ok(Clique { ctx: *ctx, elements })
}

/// [`verify_clique`] for scalars of the coefficient field.
pub fn verify_scalar_clique(elements: &[FieldElem], ctx: &RingCtx) -> Result<Clique, WitnessError> {
    verify_clique(elements.iter().map(|c| ctx.constant(c.clone())).collect(), ctx)
}

/// A pair `(X, B)` together with the matrix `[X, B]` it decomposes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WitnessJson", into = "WitnessJson")]
pub struct WitnessPair {
    x: Matrix,
    b: Matrix,
    target: Matrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessJson {
    target: Matrix,
    #[serde(rename = "X")]
    x: Matrix,
    #[serde(rename = "B")]
    b: Matrix,
}

impl TryFrom<WitnessJson> for WitnessPair {
    type Error = WitnessError;

    fn try_from(json: WitnessJson) -> Result<Self, Self::Error> {
        WitnessPair::new(json.x, json.b, json.target)
    }
}

impl From<WitnessPair> for WitnessJson {
    fn from(w: WitnessPair) -> Self {
        WitnessJson { target: w.target, x: w.x, b: w.b }
    }
}

impl WitnessPair {
    /// Accepts the pair only if `[X, B] = target` exactly.
    pub fn new(x: Matrix, b: Matrix, target: Matrix) -> Result<Self, WitnessError> {
        if commutator(&x, &b)? != target {
            return Err(WitnessError::VerificationFailed);
        }
        Ok(WitnessPair { x, b, target })
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn target(&self) -> &Matrix {
        &self.target
    }
}

/// The superdiagonal shift: ones at `(i, i+1)`.
pub fn shift_matrix(ctx: RingCtx, n: usize) -> Matrix {
    Matrix::from_fn(ctx, n, |i, j| if j == i + 1 { ctx.one() } else { ctx.zero() })
        .expect("constants belong to every context")
}

/// Decomposes an upper triangular trace-zero matrix over any ring context, without division.
///
/// `X` is the superdiagonal shift and `B` is filled top to bottom:
/// row 1 is zero, row 2 is row 1 of `A`, and `b_ij = a_{i-1,j} + b_{i-1,j-1}` below,
/// with `b_{i,0} = 0`.
pub fn triangular_witness(a: &Matrix) -> Result<WitnessPair, WitnessError> {
    let n = a.size();
    let ctx = *a.ctx();
    if let Some((i, j)) = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).find(|&(i, j)| !a.get(i, j).is_zero()) {
        return Err(WitnessError::NotUpperTriangular(i, j));
    }
    let tr = trace(a);
    if !tr.is_zero() {
        return Err(WitnessError::NonzeroTrace(tr.to_string()));
    }
    let mut b = Matrix::zero(ctx, n);
    for i in 1..n {
        for j in 0..n {
            let mut entry = a.get(i - 1, j).clone();
            if j > 0 {
                entry = entry.add(b.get(i - 1, j - 1))?;
            }
            b.set(i, j, entry)?;
        }
    }
    WitnessPair::new(shift_matrix(ctx, n), b, a.clone())
}

/// Decomposes a hollow `(n+1) × (n+1)` matrix using a clique of size at least `n`.
///
/// `X = diag(0, r_1, ..., r_n)` and `b_ij = (r_i - r_j)^{-1} a_ij` off the diagonal,
/// consuming the clique in order.
pub fn hollow_witness(a: &Matrix, clique: &Clique) -> Result<WitnessPair, WitnessError> {
    let size = a.size();
    let ctx = *a.ctx();
    if let Some(i) = (0..size).find(|&i| !a.get(i, i).is_zero()) {
        return Err(WitnessError::NotHollow(i));
    }
    let needed = size.saturating_sub(1);
    if clique.len() < needed {
        return Err(WitnessError::CliqueTooSmall { needed, got: clique.len() });
    }
    if clique.ctx != ctx {
        return Err(RingError::ContextMismatch("clique belongs to a different ring".into()).into());
    }
    let diag: Vec<Polynomial> = std::iter::once(ctx.zero())
        .chain(clique.elements.iter().take(needed).cloned())
        .collect();
    let x = Matrix::from_fn(ctx, size, |i, j| if i == j { diag[i].clone() } else { ctx.zero() })?;
    let mut b = Matrix::zero(ctx, size);
    for i in 0..size {
        for j in 0..size {
            if i == j || a.get(i, j).is_zero() {
                continue;
            }
            let diff = diag[i].sub(&diag[j])?;
            let inv = ctx.inverse(&diff)?.ok_or(WitnessError::NonInvertibleDifference(i, j))?;
            b.set(i, j, ctx.mul(&inv, a.get(i, j))?)?;
        }
    }
    WitnessPair::new(x, b, a.clone())
}

/// Decomposes a nilpotent matrix over a field: triangularize with a flag `g`,
/// decompose `g A g^{-1}` with [`triangular_witness`], and conjugate back.
pub fn nilpotent_witness(a: &Matrix) -> Result<WitnessPair, WitnessError> {
    let g = nilpotent_flag(a)?;
    let tr = trace(a);
    if !tr.is_zero() {
        return Err(WitnessError::NonzeroTrace(tr.to_string()));
    }
    let t = conjugate(&g, a)?;
    let inner = triangular_witness(&t)?;
    let back = g.inverted();
    let x = conjugate(&back, inner.x())?;
    let b = conjugate(&back, inner.b())?;
    WitnessPair::new(x, b, a.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn mat(ctx: RingCtx, rows: &[&[&str]]) -> Matrix {
        Matrix::parse(ctx, rows).unwrap()
    }

    #[test]
    fn triangular_two_by_two() {
        let q = RingCtx::scalars(FieldSpec::Rationals);
        let a = mat(q, &[&["1", "5"], &["0", "-1"]]);
        let w = triangular_witness(&a).unwrap();
        assert_eq!(w.x(), &mat(q, &[&["0", "1"], &["0", "0"]]));
        assert_eq!(w.b(), &mat(q, &[&["0", "0"], &["1", "5"]]));
    }

    #[test]
    fn triangular_zero_and_symbolic() {
        let q = RingCtx::scalars(FieldSpec::Rationals);
        let w = triangular_witness(&Matrix::zero(q, 4)).unwrap();
        assert!(w.b().is_zero());

        let r = RingCtx::polynomial(FieldSpec::Rationals, 5);
        let a = mat(r, &[&["x1", "x2", "x3"], &["0", "x4", "x5"], &["0", "0", "-x1 - x4"]]);
        let w = triangular_witness(&a).unwrap();
        assert_eq!(commutator(w.x(), w.b()).unwrap(), a);
    }

    #[test]
    fn triangular_preconditions() {
        let q = RingCtx::scalars(FieldSpec::Rationals);
        let lower = mat(q, &[&["0", "0"], &["1", "0"]]);
        assert_eq!(triangular_witness(&lower), Err(WitnessError::NotUpperTriangular(1, 0)));
        let tr = mat(q, &[&["1", "0"], &["0", "0"]]);
        assert!(matches!(triangular_witness(&tr), Err(WitnessError::NonzeroTrace(_))));
    }

    #[test]
    fn triangular_over_truncated_ring() {
        let f3 = FieldSpec::prime(3).unwrap();
        let r = RingCtx::truncated(f3, 2, 3).unwrap();
        let a = mat(r, &[&["x1", "1 + x2", "x1*x2"], &["0", "x2^2", "2"], &["0", "0", "2*x1 + 2*x2^2"]]);
        let w = triangular_witness(&a).unwrap();
        assert_eq!(w.target(), &a);
    }

    #[test]
    fn hollow_over_f5() {
        let f5 = FieldSpec::prime(5).unwrap();
        let r = RingCtx::scalars(f5);
        let a = mat(r, &[&["0", "2"], &["3", "0"]]);
        let clique = verify_scalar_clique(&[f5.one()], &r).unwrap();
        let w = hollow_witness(&a, &clique).unwrap();
        assert_eq!(w.x(), &mat(r, &[&["0", "0"], &["0", "1"]]));
        assert_eq!(w.b(), &mat(r, &[&["0", "3"], &["3", "0"]]));
        let z = hollow_witness(&Matrix::zero(r, 2), &clique).unwrap();
        assert!(z.b().is_zero());
    }

    #[test]
    fn hollow_preconditions() {
        let q = RingCtx::scalars(FieldSpec::Rationals);
        let f = FieldSpec::Rationals;
        let clique = verify_scalar_clique(&[f.one()], &q).unwrap();
        let a = mat(q, &[&["0", "1", "2"], &["3", "0", "4"], &["5", "6", "0"]]);
        assert_eq!(hollow_witness(&a, &clique), Err(WitnessError::CliqueTooSmall { needed: 2, got: 1 }));
        let not_hollow = mat(q, &[&["1", "0"], &["0", "-1"]]);
        assert_eq!(hollow_witness(&not_hollow, &clique), Err(WitnessError::NotHollow(0)));
    }

    #[test]
    fn hollow_with_nonconstant_units() {
        // truncated rings are local: 1 + x1 and 2 are units, and so is their difference
        let f5 = FieldSpec::prime(5).unwrap();
        let r = RingCtx::truncated(f5, 1, 3).unwrap();
        let clique = verify_clique(vec![r.parse("1 + x1").unwrap(), r.parse("3").unwrap()], &r).unwrap();
        let a = mat(r, &[&["0", "x1", "1"], &["x1^2", "0", "2"], &["3", "4*x1", "0"]]);
        let w = hollow_witness(&a, &clique).unwrap();
        assert_eq!(w.target(), &a);
    }

    #[test]
    fn clique_checks() {
        let q = RingCtx::scalars(FieldSpec::Rationals);
        let f = FieldSpec::Rationals;
        assert!(verify_scalar_clique(&[f.from_i64(1), f.from_i64(2), f.from_i64(3)], &q).is_ok());
        let f2 = FieldSpec::prime(2).unwrap();
        let r2 = RingCtx::scalars(f2);
        assert_eq!(verify_scalar_clique(&[f2.from_i64(1), f2.from_i64(2)], &r2), Err(WitnessError::NotAUnit(1)));
        assert_eq!(
            verify_scalar_clique(&[f.from_i64(1), f.from_i64(1)], &q),
            Err(WitnessError::DifferenceNotAUnit(0, 1))
        );
        let f5 = FieldSpec::prime(5).unwrap();
        let els: Vec<_> = (1..=4).map(|v| f5.from_i64(v)).collect();
        // exhaustive difference check, independent of verify_clique
        for a in 1..=4i64 {
            for b in 1..=4i64 {
                assert!(a == b || (a - b).rem_euclid(5) != 0);
            }
        }
        assert!(verify_scalar_clique(&els, &RingCtx::scalars(f5)).is_ok());
    }

    #[test]
    fn nilpotent_examples() {
        let q = RingCtx::scalars(FieldSpec::Rationals);
        let a = mat(q, &[&["1", "-1"], &["1", "-1"]]);
        let w = nilpotent_witness(&a).unwrap();
        assert_eq!(commutator(w.x(), w.b()).unwrap(), a);
        let strict = mat(q, &[&["0", "2", "7"], &["0", "0", "1"], &["0", "0", "0"]]);
        assert!(nilpotent_witness(&strict).is_ok());
        assert_eq!(nilpotent_witness(&mat(q, &[&["1", "0"], &["0", "-1"]])), Err(WitnessError::NotNilpotent));
    }

    #[test]
    fn forged_pairs_are_rejected() {
        let q = RingCtx::scalars(FieldSpec::Rationals);
        let x = mat(q, &[&["0", "1"], &["0", "0"]]);
        let b = mat(q, &[&["0", "0"], &["1", "5"]]);
        let wrong = mat(q, &[&["1", "4"], &["0", "-1"]]);
        assert_eq!(WitnessPair::new(x.clone(), b.clone(), wrong.clone()), Err(WitnessError::VerificationFailed));
        let json = serde_json::to_string(&WitnessPair::new(x, b, mat(q, &[&["1", "5"], &["0", "-1"]])).unwrap())
            .unwrap();
        assert!(json.starts_with(r#"{"target":"#));
        let back: WitnessPair = serde_json::from_str(&json).unwrap();
        assert_eq!(back.target(), &mat(q, &[&["1", "5"], &["0", "-1"]]));
        let tampered = json.replacen(r#"{"coeff":"5","exps":[]}"#, r#"{"coeff":"4","exps":[]}"#, 1);
        assert!(serde_json::from_str::<WitnessPair>(&tampered).is_err());
    }
}
