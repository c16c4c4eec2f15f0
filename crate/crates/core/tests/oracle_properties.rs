mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tracezero::certificate::build_noncommutator;
use tracezero::oracle::{
    certificate_matrix_mod_p, exhaustive_commutator_search, OracleOptions, OracleOutcome, SearchSpace,
};
use tracezero::packing::LatticePoint;
use tracezero::witness::triangular_witness;
use tracezero::{commutator, Matrix, RingCtx};

use common::*;

fn full(a: &Matrix) -> OracleOutcome {
    exhaustive_commutator_search(a, &OracleOptions { normalize: false, ..Default::default() }).unwrap()
}

fn normalized(a: &Matrix) -> OracleOutcome {
    exhaustive_commutator_search(a, &OracleOptions::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn normalization_keeps_existence(seed in any::<u64>(), p in prop_oneof![Just(2u64), Just(3u64)]) {
        let ctx = RingCtx::scalars(f(p));
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = matrix(&mut r, &ctx, 2, 1, 0);
        let with = normalized(&a);
        let without = full(&a);
        prop_assert_eq!(
            matches!(with, OracleOutcome::FoundWitness { .. }),
            matches!(without, OracleOutcome::FoundWitness { .. })
        );
        for out in [with, without] {
            if let OracleOutcome::FoundWitness { b, c } = out {
                prop_assert_eq!(commutator(&b, &c).unwrap(), a.clone());
            }
        }
    }

    #[test]
    fn triangular_inputs_are_found(seed in any::<u64>()) {
        let ctx = RingCtx::truncated(f(2), 1, 2).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = upper_trace_zero(&mut r, &ctx, 2);
        prop_assert!(triangular_witness(&a).is_ok());
        match normalized(&a) {
            OracleOutcome::FoundWitness { b, c } => prop_assert_eq!(commutator(&b, &c).unwrap(), a),
            other => prop_assert!(false, "no witness found: {:?}", other),
        }
    }
}

#[test]
fn pair_count_accounting() {
    for (ctx, n) in [
        (RingCtx::scalars(f(2)), 2),
        (RingCtx::scalars(f(3)), 2),
        (RingCtx::truncated(f(2), 1, 2).unwrap(), 2),
        (RingCtx::scalars(f(2)), 3),
    ] {
        let card = ctx.cardinality().unwrap();
        let space = SearchSpace::new(ctx, n, true).unwrap();
        assert_eq!(space.pairs(), card.pow(2 * (n as u32 * n as u32 - 1)));
        let a = Matrix::zero(ctx, n);
        let unnormalized = SearchSpace::new(ctx, n, false).unwrap();
        assert_eq!(unnormalized.pairs(), card.pow(2 * n as u32 * n as u32));
        assert!(matches!(normalized(&a), OracleOutcome::FoundWitness { .. }));
    }
}

#[test]
fn nonzero_trace_has_no_witness() {
    let ctx = RingCtx::scalars(f(2));
    let a = Matrix::parse(ctx, &[&["1", "0"], &["0", "0"]]).unwrap();
    assert_eq!(normalized(&a), OracleOutcome::NoWitness { pairs: 64 });
    assert_eq!(full(&a), OracleOutcome::NoWitness { pairs: 256 });
}

#[test]
fn sampled_search_agrees_with_full_search() {
    let e: Vec<LatticePoint> = (0..3).map(|i| LatticePoint::corner(3, 0, i)).collect();
    let cert = build_noncommutator(3, 0, &e, 2, f(2)).unwrap();
    let x = certificate_matrix_mod_p(&cert, 2).unwrap();
    let space = SearchSpace::new(*x.ctx(), 2, true).unwrap();
    let target = space.index_of_matrix(&x).unwrap();
    let side = space.side();
    let mut r = ChaCha8Rng::seed_from_u64(17);
    let samples = space.pairs() / 100;
    for _ in 0..samples {
        let b = space.matrix_at(r.gen_range(0..side));
        let c = space.matrix_at(r.gen_range(0..side));
        assert!(!space.is_decomposition(&target, &b, &c));
    }
}

#[test]
fn workers_and_checkpoints_do_not_change_results() {
    let ctx = RingCtx::truncated(f(2), 3, 2).unwrap();
    let control = Matrix::parse(ctx, &[&["0", "x1"], &["x2", "0"]]).unwrap();
    let one = normalized(&control);
    let dir = tempfile::tempdir().unwrap();
    let opts = OracleOptions { workers: 3, checkpoint: Some(dir.path().join("p.json")), ..Default::default() };
    assert_eq!(exhaustive_commutator_search(&control, &opts).unwrap(), one);
    let zero = Matrix::zero(ctx, 2);
    assert_eq!(normalized(&zero), OracleOutcome::FoundWitness { b: zero.clone(), c: zero.clone() });
}

#[test]
fn certificate_reduction_mod_p() {
    let e: Vec<LatticePoint> = (0..3).map(|i| LatticePoint::corner(3, 0, i)).collect();
    let cert = build_noncommutator(3, 0, &e, 2, tracezero::FieldSpec::Rationals).unwrap();
    let x = certificate_matrix_mod_p(&cert, 3).unwrap();
    let ctx = RingCtx::truncated(f(3), 3, 2).unwrap();
    assert_eq!(x, Matrix::parse(ctx, &[&["x1", "x2"], &["x3", "2*x1"]]).unwrap());
}
