//! Dense square matrices over a ring context, plus exact linear algebra over the
//! coefficient field (kernels, inverses, flags adapted to a nilpotent matrix).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MatrixError, RingError};
use crate::field::{FieldElem, FieldSpec};
use crate::poly::{PolyJson, Polynomial, RingCtx};

/// Row-major `n × n` matrix whose entries all belong to `ctx`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    n: usize,
    ctx: RingCtx,
    entries: Vec<Polynomial>,
}

/// Wire form `{"n":2,"ctx":{...},"entries":[[poly,...],...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    pub ctx: RingCtx,
    pub entries: Vec<Vec<PolyJson>>,
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson {
            n: m.n,
            ctx: m.ctx,
            entries: (0..m.n)
                .map(|i| (0..m.n).map(|j| PolyJson::from(m.get(i, j))).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = MatrixError;

    fn try_from(json: MatrixJson) -> Result<Self, Self::Error> {
        let field = json.ctx.field;
        let rows = json
            .entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|p| p.into_polynomial(field))
                    .collect::<Result<Vec<_>, RingError>>()
            })
            .collect::<Result<Vec<_>, RingError>>()?;
        if rows.len() != json.n {
            return Err(MatrixError::Malformed(format!("declared n = {} but {} rows", json.n, rows.len())));
        }
        Matrix::from_rows(json.ctx, rows)
    }
}

impl Matrix {
    pub fn zero(ctx: RingCtx, n: usize) -> Self {
        Matrix { n, ctx, entries: vec![ctx.zero(); n * n] }
    }

    pub fn identity(ctx: RingCtx, n: usize) -> Self {
        let mut m = Self::zero(ctx, n);
        for i in 0..n {
            m.entries[i * n + i] = ctx.one();
        }
        m
    }

    pub fn from_rows(ctx: RingCtx, rows: Vec<Vec<Polynomial>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::Malformed(format!("row of length {} in a {n}x{n} matrix", row.len())));
            }
            for p in row {
                ctx.check(&p)?;
                entries.push(p);
            }
        }
        Ok(Matrix { n, ctx, entries })
    }

    /// Builds a matrix entry by entry; entries are checked against `ctx`.
    pub fn from_fn<F>(ctx: RingCtx, n: usize, mut f: F) -> Result<Self, MatrixError>
    where
        F: FnMut(usize, usize) -> Polynomial,
    {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::from_rows(ctx, rows)
    }

    /// Parses rows of text polynomials, e.g. `[["x1","x2"],["x3","-x1"]]`.
    pub fn parse(ctx: RingCtx, rows: &[&[&str]]) -> Result<Self, MatrixError> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(ctx, rows)
    }

    pub fn from_scalars(ctx: RingCtx, rows: &[Vec<FieldElem>]) -> Result<Self, MatrixError> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|c| ctx.constant(c.clone())).collect())
            .collect();
        Self::from_rows(ctx, rows)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn ctx(&self) -> &RingCtx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) -> Result<(), MatrixError> {
        self.ctx.check(&p)?;
        self.entries[i * self.n + j] = p;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_hollow(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_zero())
    }

    fn check_same(&self, other: &Matrix) -> Result<(), MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::ShapeMismatch(self.n, other.n));
        }
        if self.ctx != other.ctx {
            return Err(RingError::ContextMismatch(format!("{:?} vs {:?}", self.ctx, other.ctx)).into());
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_same(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { n: self.n, ctx: self.ctx, entries })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_same(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_, _>>()?;
        Ok(Matrix { n: self.n, ctx: self.ctx, entries })
    }

    pub fn neg(&self) -> Matrix {
        Matrix { n: self.n, ctx: self.ctx, entries: self.entries.iter().map(Polynomial::neg).collect() }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.check_same(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.ctx.zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.ctx.mul(a, b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Matrix { n, ctx: self.ctx, entries })
    }

    /// `A^(2^k)` for the least `k` with `2^k >= n`; zero iff `A` is nilpotent.
    pub fn nilpotency_probe(&self) -> Result<Matrix, MatrixError> {
        let mut power = self.clone();
        let mut exp = 1;
        while exp < self.n {
            power = power.mul(&power)?;
            exp *= 2;
        }
        Ok(power)
    }

    pub fn is_nilpotent(&self) -> Result<bool, MatrixError> {
        Ok(self.nilpotency_probe()?.is_zero())
    }

    /// Entries as field scalars; fails unless every entry is constant.
    pub fn to_scalars(&self) -> Result<Vec<Vec<FieldElem>>, MatrixError> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).as_constant().ok_or(MatrixError::NonConstantEntries))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix, MatrixError> {
    a.mul(b)?.sub(&b.mul(a)?)
}

pub fn trace(a: &Matrix) -> Polynomial {
    (0..a.n).fold(a.ctx.zero(), |acc, i| acc.add(a.get(i, i)).expect("entries share the context"))
}

// ---------------------------------------------------------------------------
// Linear algebra over the coefficient field.

pub type ScalarMatrix = Vec<Vec<FieldElem>>;

/// Reduced row echelon form in place; returns the pivot columns.
/// Pivots are chosen as the first nonzero entry scanning columns left to right.
pub(crate) fn rref(m: &mut ScalarMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = x.mul_same(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub_same(&p.mul_same(&factor));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of a scalar matrix, one vector per free column.
pub fn scalar_kernel(a: &ScalarMatrix, field: FieldSpec) -> Vec<Vec<FieldElem>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

pub fn scalar_mul(a: &ScalarMatrix, b: &ScalarMatrix, field: FieldSpec) -> ScalarMatrix {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    (0..b.len()).fold(field.zero(), |acc, k| acc.add_same(&a[i][k].mul_same(&b[k][j])))
                })
                .collect()
        })
        .collect()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn scalar_inverse(a: &ScalarMatrix, field: FieldSpec) -> Option<ScalarMatrix> {
    let n = a.len();
    let mut aug: ScalarMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn scalar_rank(vectors: &[Vec<FieldElem>]) -> usize {
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// Right kernel of a matrix with constant entries.
pub fn kernel_basis(a: &Matrix) -> Result<Vec<Vec<FieldElem>>, MatrixError> {
    Ok(scalar_kernel(&a.to_scalars()?, a.ctx.field))
}

/// An invertible change of basis `g` over a field, stored with its inverse.
/// The columns of `g^{-1}` are the adapted basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagBasis {
    field: FieldSpec,
    g: ScalarMatrix,
    g_inv: ScalarMatrix,
}

impl FlagBasis {
    pub fn new(field: FieldSpec, g: ScalarMatrix) -> Result<Self, MatrixError> {
        let n = g.len();
        if g.iter().any(|row| row.len() != n) {
            return Err(MatrixError::Malformed("change of basis must be square".into()));
        }
        if g.iter().flatten().any(|c| c.field() != field) {
            return Err(RingError::FieldMismatch(field, g[0][0].field()).into());
        }
        let g_inv = scalar_inverse(&g, field).ok_or(MatrixError::SingularBasis)?;
        Ok(FlagBasis { field, g, g_inv })
    }

    /// The basis whose vectors (in order) are the columns of the returned `g^{-1}`.
    pub fn from_vectors(field: FieldSpec, vectors: &[Vec<FieldElem>]) -> Result<Self, MatrixError> {
        let n = vectors.len();
        let p: ScalarMatrix = (0..n).map(|i| vectors.iter().map(|v| v[i].clone()).collect()).collect();
        let g = scalar_inverse(&p, field).ok_or(MatrixError::SingularBasis)?;
        Ok(FlagBasis { field, g, g_inv: p })
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let id: ScalarMatrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        FlagBasis { field, g: id.clone(), g_inv: id }
    }

    pub fn size(&self) -> usize {
        self.g.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.g
    }

    pub fn inverse(&self) -> &ScalarMatrix {
        &self.g_inv
    }

    pub fn vectors(&self) -> Vec<Vec<FieldElem>> {
        let n = self.size();
        (0..n).map(|j| (0..n).map(|i| self.g_inv[i][j].clone()).collect()).collect()
    }

    /// The flag with `g` and `g^{-1}` swapped.
    pub fn inverted(&self) -> FlagBasis {
        FlagBasis { field: self.field, g: self.g_inv.clone(), g_inv: self.g.clone() }
    }
}

/// `g A g^{-1}`. `A` may have polynomial entries; `g` must be over the same field.
pub fn conjugate(g: &FlagBasis, a: &Matrix) -> Result<Matrix, MatrixError> {
    if g.size() != a.n {
        return Err(MatrixError::ShapeMismatch(g.size(), a.n));
    }
    if g.field != a.ctx.field {
        return Err(RingError::FieldMismatch(g.field, a.ctx.field).into());
    }
    let gm = Matrix::from_scalars(a.ctx, &g.g)?;
    let gi = Matrix::from_scalars(a.ctx, &g.g_inv)?;
    gm.mul(a)?.mul(&gi)
}

/// A change of basis `g` with `g A g^{-1}` strictly upper triangular, for nilpotent `A`
/// over a field. The basis refines `ker A ⊂ ker A^2 ⊂ ...`, each layer extended
/// greedily from the kernel vectors of the next power.
pub fn nilpotent_flag(a: &Matrix) -> Result<FlagBasis, MatrixError> {
    let field = a.ctx.field;
    let s = a.to_scalars()?;
    let n = a.n;
    if !a.is_nilpotent()? {
        return Err(MatrixError::NotNilpotent);
    }
    let mut basis: Vec<Vec<FieldElem>> = Vec::with_capacity(n);
    let mut power = s.clone();
    while basis.len() < n {
        for v in scalar_kernel(&power, field) {
            let mut trial = basis.clone();
            trial.push(v.clone());
            if scalar_rank(&trial) == trial.len() {
                basis.push(v);
            }
        }
        power = scalar_mul(&power, &s, field);
    }
    FlagBasis::from_vectors(field, &basis)
}
