#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tracezero::{FieldElem, FieldSpec, Matrix, Polynomial, RingCtx};

pub fn f(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> FieldElem {
    match field {
        FieldSpec::Rationals => {
            let num: i64 = rng.gen_range(-9..=9);
            let den: i64 = rng.gen_range(1..=4);
            field.parse_elem(&format!("{num}/{den}")).unwrap()
        }
        FieldSpec::PrimeField(p) => field.from_u64(rng.gen_range(0..p as u64)),
    }
}

pub fn nonzero_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> FieldElem {
    loop {
        let c = scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A random element with up to `terms` terms of degree at most `max_deg`.
pub fn poly(rng: &mut ChaCha8Rng, ctx: &RingCtx, terms: usize, max_deg: u32) -> Polynomial {
    let k = rng.gen_range(0..=terms);
    let raw: Vec<(Vec<u32>, FieldElem)> = (0..k)
        .map(|_| {
            let mut exps = vec![0u32; ctx.nvars];
            let mut budget = rng.gen_range(0..=max_deg);
            for e in exps.iter_mut() {
                let take = rng.gen_range(0..=budget);
                *e = take;
                budget -= take;
            }
            (exps, scalar(rng, ctx.field))
        })
        .collect();
    ctx.reduce(&Polynomial::from_terms(ctx.nvars, ctx.field, raw).unwrap()).unwrap()
}

pub fn matrix(rng: &mut ChaCha8Rng, ctx: &RingCtx, n: usize, terms: usize, max_deg: u32) -> Matrix {
    Matrix::from_fn(*ctx, n, |_, _| poly(rng, ctx, terms, max_deg)).unwrap()
}

/// Upper triangular with the last diagonal entry chosen to make the trace zero.
pub fn upper_trace_zero(rng: &mut ChaCha8Rng, ctx: &RingCtx, n: usize) -> Matrix {
    let mut a = Matrix::zero(*ctx, n);
    for i in 0..n {
        for j in i..n {
            a.set(i, j, poly(rng, ctx, 3, 2)).unwrap();
        }
    }
    let mut rest = ctx.zero();
    for i in 0..n - 1 {
        rest = ctx.add(&rest, a.get(i, i)).unwrap();
    }
    a.set(n - 1, n - 1, rest.neg()).unwrap();
    a
}

pub fn hollow(rng: &mut ChaCha8Rng, ctx: &RingCtx, n: usize) -> Matrix {
    let mut a = matrix(rng, ctx, n, 3, 2);
    for i in 0..n {
        a.set(i, i, ctx.zero()).unwrap();
    }
    a
}

/// `k` units with unit differences: distinct nonzero constants, plus a nilpotent
/// perturbation when the ring is truncated.
pub fn clique(rng: &mut ChaCha8Rng, ctx: &RingCtx, k: usize) -> Vec<Polynomial> {
    let mut constants: Vec<FieldElem> = Vec::new();
    while constants.len() < k {
        let c = nonzero_scalar(rng, ctx.field);
        if !constants.contains(&c) {
            constants.push(c);
        }
    }
    constants
        .into_iter()
        .map(|c| {
            let base = ctx.constant(c);
            if ctx.truncation.is_some() && ctx.nvars > 0 {
                let t = ctx.mul(&ctx.var(0), &poly(rng, ctx, 2, 1)).unwrap();
                ctx.add(&base, &t).unwrap()
            } else {
                base
            }
        })
        .collect()
}

pub fn strictly_upper(rng: &mut ChaCha8Rng, ctx: &RingCtx, n: usize) -> Matrix {
    Matrix::from_fn(*ctx, n, |i, j| if j > i { ctx.constant(scalar(rng, ctx.field)) } else { ctx.zero() }).unwrap()
}

pub fn invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Vec<Vec<FieldElem>> {
    loop {
        let g: Vec<Vec<FieldElem>> = (0..n).map(|_| (0..n).map(|_| scalar(rng, field)).collect()).collect();
        if tracezero::matrix::scalar_inverse(&g, field).is_some() {
            return g;
        }
    }
}
