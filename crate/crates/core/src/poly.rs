//! Sparse multivariate polynomials over an exact field, ring contexts
//! (`k[x_1..x_m]` or the truncation `k[x_1..x_m]/(x_1..x_m)^N`) and
//! reduction by a single divisor.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::RingError;
use crate::field::{FieldElem, FieldSpec};

/// Exponent vector with its cached total degree.
///
/// The derived ordering compares total degree first and then exponents
/// lexicographically with `x1 > x2 > ... > xm`, i.e. graded lex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u64,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().map(|&e| e as u64).sum();
        Monomial { degree, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { degree: 0, exps: vec![0; nvars] }
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { degree: 1, exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: self.degree + other.degree,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            degree: other.degree - self.degree,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Monomial orders available for division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    GradedLex,
    Lex,
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GradedLex => a.cmp(b),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
        }
    }
}

/// Sparse polynomial: monomial → nonzero coefficient, stored in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: FieldSpec) -> Self {
        Polynomial { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElem) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(mono: Monomial, c: FieldElem) -> Self {
        let mut p = Polynomial::zero(mono.nvars(), c.field());
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, combining
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(nvars: usize, field: FieldSpec, terms: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = (Vec<u32>, FieldElem)>,
    {
        let mut p = Polynomial::zero(nvars, field);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(RingError::ContextMismatch(format!(
                    "monomial has {} exponents, expected {nvars}",
                    exps.len()
                )));
            }
            if c.field() != field {
                return Err(RingError::FieldMismatch(c.field(), field));
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, mono: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                let sum = existing.add_same(&c);
                if sum.is_zero() {
                    self.terms.remove(&mono);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> FieldElem {
        self.terms.get(mono).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |m| m.degree as i64)
    }

    /// Smallest total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree).min()
    }

    /// The constant term's coefficient, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &FieldElem)> {
        match order {
            MonomialOrder::GradedLex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), RingError> {
        if self.field != other.field {
            return Err(RingError::FieldMismatch(self.field, other.field));
        }
        if self.nvars != other.nvars {
            return Err(RingError::ContextMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Result<Polynomial, RingError> {
        if c.field() != self.field {
            return Err(RingError::FieldMismatch(c.field(), self.field));
        }
        if c.is_zero() {
            return Ok(Polynomial::zero(self.nvars, self.field));
        }
        Ok(Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul_same(c))).collect(),
        })
    }

    /// Product, discarding every term of total degree `>= bound` when a bound is given.
    pub fn mul_truncated(&self, other: &Polynomial, bound: Option<u32>) -> Result<Polynomial, RingError> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.nvars, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(n) = bound {
                    if ma.degree + mb.degree >= n as u64 {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca.mul_same(cb));
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.mul_truncated(other, None)
    }

    /// Drops all terms of total degree `>= n`.
    pub fn truncate(&self, n: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree < n as u64)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    /// Text form `c*x1^e1*...*xm^em + ...`, leading term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (negative, mag) = if c.is_negative() { (true, c.neg()) } else { (false, c.clone()) };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Parses the text form produced by `Display` (and hand-written variants such as
/// `x1^2 + 3/4*x2*x3 - 1`). Variables are `x1..xm`.
pub fn parse_polynomial(s: &str, nvars: usize, field: FieldSpec) -> Result<Polynomial, RingError> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(RingError::Parse("empty polynomial".into()));
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let mut negative = false;
        while i < chars.len() && matches!(chars[i], '+' | '-') {
            negative ^= chars[i] == '-';
            i += 1;
        }
        let start = i;
        while i < chars.len() {
            let c = chars[i];
            if matches!(c, '+' | '-') && i > start && !matches!(chars[i - 1], '*' | '/' | '^') {
                break;
            }
            i += 1;
        }
        if start == i {
            return Err(RingError::Parse(format!("dangling sign in `{s}`")));
        }
        pieces.push((negative, chars[start..i].iter().collect()));
    }

    let mut poly = Polynomial::zero(nvars, field);
    for (term_negative, body) in &pieces {
        let mut coeff = field.one();
        let mut exps = vec![0u32; nvars];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(RingError::Parse(format!("empty factor in `{body}`")));
            }
            if let Some(rest) = factor.strip_prefix('x') {
                let (idx, exp) = match rest.split_once('^') {
                    Some((i, e)) => (i, e.parse::<u32>().map_err(|_| RingError::Parse(format!("bad exponent in `{factor}`")))?),
                    None => (rest, 1),
                };
                let var: usize = idx
                    .parse()
                    .map_err(|_| RingError::Parse(format!("bad variable `{factor}`")))?;
                if var == 0 || var > nvars {
                    return Err(RingError::Parse(format!("variable x{var} outside x1..x{nvars}")));
                }
                exps[var - 1] += exp;
            } else {
                coeff = coeff.mul_same(&field.parse_elem(factor)?);
            }
        }
        if *term_negative {
            coeff = coeff.neg();
        }
        poly.add_term(Monomial::new(exps), coeff);
    }
    Ok(poly)
}

/// JSON term `{"coeff":"5/6","exps":[1,0,2]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub exps: Vec<u32>,
}

/// JSON polynomial `{"nvars":m,"terms":[...]}`, terms in descending graded-lex order.
/// The coefficient field is supplied by the enclosing document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl From<&Polynomial> for PolyJson {
    fn from(p: &Polynomial) -> Self {
        PolyJson {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson { coeff: c.to_string(), exps: m.exps.clone() })
                .collect(),
        }
    }
}

impl PolyJson {
    pub fn into_polynomial(self, field: FieldSpec) -> Result<Polynomial, RingError> {
        let nvars = self.nvars;
        let terms = self
            .terms
            .into_iter()
            .map(|t| Ok((t.exps, field.parse_elem(&t.coeff)?)))
            .collect::<Result<Vec<_>, RingError>>()?;
        Polynomial::from_terms(nvars, field, terms)
    }
}

/// A ring `k[x_1..x_m]`, optionally truncated to `k[x_1..x_m]/(x_1..x_m)^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingCtx {
    pub field: FieldSpec,
    pub nvars: usize,
    #[serde(default)]
    pub truncation: Option<u32>,
}

impl RingCtx {
    pub fn polynomial(field: FieldSpec, nvars: usize) -> Self {
        RingCtx { field, nvars, truncation: None }
    }

    /// `k[x_1..x_m]/(x_1..x_m)^n`; `n` must be at least 1.
    pub fn truncated(field: FieldSpec, nvars: usize, n: u32) -> Result<Self, RingError> {
        if n == 0 {
            return Err(RingError::ContextMismatch("truncation level must be at least 1".into()));
        }
        Ok(RingCtx { field, nvars, truncation: Some(n) })
    }

    /// The coefficient field viewed as a ring with no variables.
    pub fn scalars(field: FieldSpec) -> Self {
        RingCtx { field, nvars: 0, truncation: None }
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.check(p).is_ok()
    }

    pub fn check(&self, p: &Polynomial) -> Result<(), RingError> {
        if p.field != self.field {
            return Err(RingError::FieldMismatch(p.field, self.field));
        }
        if p.nvars != self.nvars {
            return Err(RingError::ContextMismatch(format!(
                "polynomial in {} variables, ring has {}",
                p.nvars, self.nvars
            )));
        }
        if let Some(n) = self.truncation {
            if p.degree() >= n as i64 {
                return Err(RingError::TruncationOverflow { degree: p.degree() as u64, truncation: n });
            }
        }
        Ok(())
    }

    /// Maps an arbitrary polynomial of matching shape into this ring (truncating if needed).
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial, RingError> {
        if p.field != self.field || p.nvars != self.nvars {
            self.check(p)?;
        }
        Ok(match self.truncation {
            Some(n) => p.truncate(n),
            None => p.clone(),
        })
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars, self.field)
    }

    pub fn one(&self) -> Polynomial {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: FieldElem) -> Polynomial {
        let p = Polynomial::constant(self.nvars, c);
        if self.truncation.is_some() { self.reduce(&p).unwrap_or(p) } else { p }
    }

    pub fn from_i64(&self, v: i64) -> Polynomial {
        self.constant(self.field.from_i64(v))
    }

    /// The variable `x_{i+1}`; zero in a ring truncated at level 1.
    pub fn var(&self, i: usize) -> Polynomial {
        let p = Polynomial::term(Monomial::var(self.nvars, i), self.field.one());
        match self.truncation {
            Some(n) => p.truncate(n),
            None => p,
        }
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial, RingError> {
        let p = parse_polynomial(s, self.nvars, self.field)?;
        self.check(&p)?;
        Ok(p)
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, RingError> {
        self.check(a)?;
        self.check(b)?;
        a.add(b)
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, RingError> {
        self.check(a)?;
        self.check(b)?;
        a.sub(b)
    }

    /// Product in this ring; with a truncation `N`, terms of degree `>= N` are discarded eagerly.
    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial, RingError> {
        self.check(a)?;
        self.check(b)?;
        a.mul_truncated(b, self.truncation)
    }

    /// The monomial `x^s`; `x^0 = 1`.
    pub fn monomial_of_point(&self, s: &[u32]) -> Result<Polynomial, RingError> {
        if s.len() != self.nvars {
            return Err(RingError::ContextMismatch(format!(
                "point has {} coordinates, ring has {} variables",
                s.len(),
                self.nvars
            )));
        }
        let mono = Monomial::new(s.to_vec());
        if let Some(n) = self.truncation {
            if mono.degree >= n as u64 {
                return Err(RingError::TruncationOverflow { degree: mono.degree, truncation: n });
            }
        }
        Ok(Polynomial::term(mono, self.field.one()))
    }

    /// Whether `u` is a unit. Polynomial rings over a field have only the nonzero
    /// constants as units; truncated rings are local, so any element with a nonzero
    /// constant term is a unit.
    pub fn is_unit(&self, u: &Polynomial) -> bool {
        match self.truncation {
            Some(_) => !u.constant_term().is_zero(),
            None => u.as_constant().is_some_and(|c| !c.is_zero()),
        }
    }

    /// Multiplicative inverse, if `u` is a unit.
    pub fn inverse(&self, u: &Polynomial) -> Result<Option<Polynomial>, RingError> {
        self.check(u)?;
        if !self.is_unit(u) {
            return Ok(None);
        }
        let c_inv = u.constant_term().inv()?;
        let Some(n) = self.truncation else {
            return Ok(Some(self.constant(c_inv)));
        };
        // u = c(1 - t) with t nilpotent: u^{-1} = c^{-1} (1 + t + ... + t^{N-1}).
        let normalized = u.scale(&c_inv)?;
        let t = self.one().sub(&normalized)?;
        let mut sum = self.one();
        let mut power = self.one();
        for _ in 1..n {
            power = self.mul(&power, &t)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(Some(sum.scale(&c_inv)?))
    }

    /// True when the ring has finitely many elements.
    pub fn is_finite(&self) -> bool {
        matches!(self.field, FieldSpec::PrimeField(_)) && (self.truncation.is_some() || self.nvars == 0)
    }

    /// Monomials that survive truncation, ascending graded lex. Errors for infinite rings.
    pub fn basis_monomials(&self) -> Result<Vec<Monomial>, RingError> {
        if !self.is_finite() {
            return Err(RingError::InfiniteRing);
        }
        let top = self.truncation.map_or(0, |n| n as u64 - 1);
        let mut out = Vec::new();
        for deg in 0..=top {
            let mut batch: Vec<Monomial> = compositions(deg as u32, self.nvars)
                .into_iter()
                .map(Monomial::new)
                .collect();
            batch.sort();
            out.extend(batch);
        }
        if self.nvars == 0 {
            out.truncate(1);
        }
        Ok(out)
    }

    /// Number of elements, saturating at `u128::MAX`.
    pub fn cardinality(&self) -> Result<u128, RingError> {
        let b = self.basis_monomials()?.len() as u32;
        let p = self.field.order().unwrap() as u128;
        Ok(p.checked_pow(b).unwrap_or(u128::MAX))
    }

    /// Every element of a finite ring, in a fixed order: element `k` has as its
    /// coefficient vector (indexed by ascending graded-lex monomials) the base-`p`
    /// digits of `k`, least significant first.
    pub fn enumerate(&self) -> Result<RingElements, RingError> {
        let basis = self.basis_monomials()?;
        let total = self.cardinality()?;
        Ok(RingElements { ctx: *self, basis, next: 0, total })
    }

    /// The inverse of the enumeration order: position of `p` in [`RingCtx::enumerate`].
    pub fn element_index(&self, basis: &[Monomial], p: &Polynomial) -> Result<u128, RingError> {
        self.check(p)?;
        let q = self.field.order().ok_or(RingError::InfiniteRing)? as u128;
        let mut idx = 0u128;
        for mono in basis.iter().rev() {
            let digit = p.coeff(mono).residue().unwrap_or(0) as u128;
            idx = idx * q + digit;
        }
        Ok(idx)
    }
}

/// All `parts`-tuples of nonnegative integers summing to `total`, in descending lex order.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(remaining - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Stream over the elements of a finite ring; see [`RingCtx::enumerate`].
#[derive(Clone, Debug)]
pub struct RingElements {
    ctx: RingCtx,
    basis: Vec<Monomial>,
    next: u128,
    total: u128,
}

impl RingElements {
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn element_at(&self, mut k: u128) -> Polynomial {
        let q = self.ctx.field.order().unwrap() as u128;
        let mut p = self.ctx.zero();
        for mono in &self.basis {
            let digit = (k % q) as u64;
            k /= q;
            if digit != 0 {
                p.terms.insert(mono.clone(), self.ctx.field.from_u64(digit));
            }
        }
        p
    }
}

impl Iterator for RingElements {
    type Item = Polynomial;

    fn next(&mut self) -> Option<Polynomial> {
        if self.next >= self.total {
            return None;
        }
        let p = self.element_at(self.next);
        self.next += 1;
        Some(p)
    }
}

/// Remainder of `p` on division by the single polynomial `g` under `order`:
/// no term of the result is divisible by the leading monomial of `g`.
pub fn reduce_by_divisor(p: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Result<Polynomial, RingError> {
    p.check_compatible(g)?;
    let (lm, lc) = g.leading_term(order).ok_or(RingError::DivisionByZero)?;
    let lc_inv = lc.inv().map_err(|_| RingError::NonInvertibleLeadingCoefficient)?;
    let (lm, lc_inv) = (lm.clone(), lc_inv);
    let mut rest = p.clone();
    let mut remainder = Polynomial::zero(p.nvars, p.field);
    while let Some((m, c)) = rest.leading_term(order).map(|(m, c)| (m.clone(), c.clone())) {
        if lm.divides(&m) {
            let factor = c.mul_same(&lc_inv);
            let shift = lm.quotient_of(&m);
            for (gm, gc) in &g.terms {
                rest.add_term(gm.mul(&shift), gc.mul_same(&factor).neg());
            }
        } else {
            rest.terms.remove(&m);
            remainder.add_term(m, c);
        }
    }
    Ok(remainder)
}
