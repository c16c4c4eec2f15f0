//! Trace-zero non-commutators built from separated sets, with a checkable JSON form.
//!
//! Given `S = (s_1, .., s_{2n-1})`, a `2d`-separated subset of `Δ(m-1, 2d+1)`,
//! the matrix
//!
//! ```text
//! x^{s_1}      x^{s_2}  ..  x^{s_n}
//! x^{s_{n+1}}  0        ..  0
//! ..
//! x^{s_{2n-1}} 0        ..  -x^{s_1}
//! ```
//!
//! over `k[x_1, .., x_m]` has trace zero and is not a commutator.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{trace, Matrix};
use crate::packing::{upper_bounds, LatticePoint, SimplexSpec};
use crate::poly::RingCtx;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("points {0} and {1} are at distance {2}, too close")]
    NotSeparated(usize, usize, u64),
    #[error("point {0} is not in the simplex of length {1}")]
    WrongSimplex(usize, u32),
    #[error("need {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("bad dimensions: m = {m}, n = {n} (need m >= 3, n >= 2)")]
    BadDimensions { m: usize, n: usize },
    #[error("malformed certificate: {0}")]
    MalformedInput(String),
    #[error("certificate failed validation: {0}")]
    ValidationFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub m: usize,
    pub d: u32,
    pub n: usize,
    pub field: FieldSpec,
    #[serde(rename = "S")]
    pub s: Vec<LatticePoint>,
    #[serde(rename = "X")]
    pub x: Matrix,
}

/// The matrix shape above, for the first `2n - 1` points of `s`.
pub fn noncommutator_matrix(ctx: RingCtx, s: &[LatticePoint], n: usize) -> Result<Matrix, CertificateError> {
    let mono = |k: usize| {
        ctx.monomial_of_point(s[k].coords())
            .map_err(|e| CertificateError::MalformedInput(e.to_string()))
    };
    let mut x = Matrix::zero(ctx, n);
    let set = |x: &mut Matrix, i, j, p| x.set(i, j, p).map_err(|e| CertificateError::MalformedInput(e.to_string()));
    for j in 0..n {
        set(&mut x, 0, j, mono(j)?)?;
    }
    for i in 1..n {
        set(&mut x, i, 0, mono(n + i - 1)?)?;
    }
    let corner = mono(0)?.neg();
    if n == 1 {
        let sum = x.get(0, 0).add(&corner).map_err(|e| CertificateError::MalformedInput(e.to_string()))?;
        set(&mut x, 0, 0, sum)?;
    } else {
        set(&mut x, n - 1, n - 1, corner)?;
    }
    Ok(x)
}

/// Builds the certificate from the first `2n - 1` points of `s`, in the given order.
pub fn build_noncommutator(
    m: usize,
    d: u32,
    s: &[LatticePoint],
    n: usize,
    field: FieldSpec,
) -> Result<Certificate, CertificateError> {
    if m < 3 || n < 2 {
        return Err(CertificateError::BadDimensions { m, n });
    }
    let needed = 2 * n - 1;
    if s.len() < needed {
        return Err(CertificateError::TooFewPoints { needed, got: s.len() });
    }
    let s = s[..needed].to_vec();
    check_points(m, d, &s)?;
    let x = noncommutator_matrix(RingCtx::polynomial(field, m), &s, n)?;
    let cert = Certificate { m, d, n, field, s, x };
    let report = validate_certificate(&cert);
    if !report.passed() {
        return Err(CertificateError::ValidationFailed(report.failures()));
    }
    Ok(cert)
}

fn check_points(m: usize, d: u32, s: &[LatticePoint]) -> Result<(), CertificateError> {
    let simplex = SimplexSpec { m, r: 2 * d + 1 };
    if let Some(i) = s.iter().position(|p| !simplex.contains(p)) {
        return Err(CertificateError::WrongSimplex(i, simplex.r));
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let dist = s[i].l1_distance(&s[j]);
            if dist < 2 * d as u64 + 2 {
                return Err(CertificateError::NotSeparated(i, j, dist));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Re-checks every hypothesis of a certificate, independently of how it was built.
pub fn validate_certificate(c: &Certificate) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| checks.push(Check { name, passed, detail });

    let dims_ok = c.m >= 3 && c.n >= 2;
    push("dimensions", dims_ok, format!("m = {}, n = {}", c.m, c.n));

    let count_ok = c.n >= 1 && c.s.len() == 2 * c.n - 1;
    push("point_count", count_ok, format!("{} points for n = {}", c.s.len(), c.n));

    let r = 2 * c.d as u64 + 1;
    let bad_point = c.s.iter().position(|p| p.dim() != c.m || p.norm() != r);
    push(
        "simplex",
        bad_point.is_none(),
        bad_point.map_or(format!("all points have {} coordinates summing to {r}", c.m), |i| {
            format!("point {i} = {} is not in the simplex", c.s[i])
        }),
    );

    // distances within a simplex are even, so "greater than 2d" means "at least 2d + 2"
    let mut close = None;
    'outer: for i in 0..c.s.len() {
        for j in i + 1..c.s.len() {
            let dist = c.s[i].l1_distance(&c.s[j]);
            if dist < 2 * c.d as u64 + 2 {
                close = Some((i, j, dist));
                break 'outer;
            }
        }
    }
    push(
        "separation",
        close.is_none(),
        close.map_or(format!("pairwise distances at least {}", 2 * c.d + 2), |(i, j, dist)| {
            format!("points {i} and {j} at distance {dist}")
        }),
    );

    let expected_ctx = RingCtx::polynomial(c.field, c.m);
    let ctx_ok = *c.x.ctx() == expected_ctx && c.x.size() == c.n;
    push("ring", ctx_ok, format!("X is {}x{} over {:?}", c.x.size(), c.x.size(), c.x.ctx()));

    let shape_ok = ctx_ok
        && count_ok
        && bad_point.is_none()
        && noncommutator_matrix(expected_ctx, &c.s, c.n).is_ok_and(|x| x == c.x);
    push("shape", shape_ok, "X matches the matrix determined by S".to_string());

    let tr = trace(&c.x);
    push("trace", tr.is_zero(), format!("trace(X) = {tr}"));

    let bound_ok = c.m >= 3 && upper_bounds(c.m).1.is_some_and(|b| c.n as u128 <= b);
    push("size_bound", bound_ok, format!("n = {} against 2^(2m-3)", c.n));

    ValidationReport { checks }
}

impl Certificate {
    /// Canonical compact JSON; stable under a read/write round trip.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, CertificateError> {
        let cert: Certificate = serde_json::from_str(s).map_err(|e| CertificateError::MalformedInput(e.to_string()))?;
        let report = validate_certificate(&cert);
        if !report.passed() {
            return Err(CertificateError::ValidationFailed(report.failures()));
        }
        Ok(cert)
    }
}
