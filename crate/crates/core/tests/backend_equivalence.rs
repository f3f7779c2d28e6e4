//! Generic, Blocked and Parallel backends must agree bitwise on
//! elementwise kernels and matrix-vector products, and stay close to a
//! compensated oracle on reductions.

use hpla_core::linalg::{self, BinaryOp};
use hpla_core::oracle::compensated_dot;
use hpla_core::{containers::q1_offsets, Backend, BackendTag, BandLayout, BandedMatrix, DenseVector, RuntimeConfig};
use proptest::prelude::*;

fn backends(workers: usize, block_size: usize) -> Vec<Backend> {
    let cfg = RuntimeConfig::default().with_workers(workers).with_block_size(block_size);
    BackendTag::ALL.iter().map(|&t| Backend::new(t, &cfg)).collect()
}

fn dv(v: &[f64]) -> DenseVector<f64> {
    DenseVector::from_vec(v.to_vec()).unwrap()
}

fn setup() -> impl Strategy<Value = (usize, usize)> {
    (1usize..9, (4u32..11).prop_map(|e| 1usize << e))
}

fn vectors(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..max).prop_flat_map(|n| {
        (
            prop::collection::vec(-1e3f64..1e3, n),
            prop::collection::vec(-1e3f64..1e3, n),
        )
    })
}

fn bits(v: &DenseVector<f64>) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn axpy_and_scaled_sum_bitwise((workers, bs) in setup(), (x, y) in vectors(3000), alpha in -10.0f64..10.0) {
        let mut outs = Vec::new();
        for be in backends(workers, bs) {
            let mut yy = dv(&y);
            linalg::axpy(&be, &mut yy, alpha, &dv(&x)).unwrap();
            let mut r = DenseVector::zeros(x.len()).unwrap();
            linalg::scaled_sum(&be, &mut r, &dv(&x), &dv(&y), alpha, 0.5).unwrap();
            outs.push((bits(&yy), bits(&r)));
        }
        prop_assert_eq!(&outs[0], &outs[1]);
        prop_assert_eq!(&outs[0], &outs[2]);
    }

    #[test]
    fn elementwise_and_scale_bitwise((workers, bs) in setup(), (x, y) in vectors(3000), op in 0usize..3) {
        let op = [BinaryOp::Sum, BinaryOp::Difference, BinaryOp::Product][op];
        let mut outs = Vec::new();
        for be in backends(workers, bs) {
            let mut out = DenseVector::zeros(x.len()).unwrap();
            linalg::elementwise(&be, op, &mut out, &dv(&x), &dv(&y)).unwrap();
            linalg::scale(&be, &mut out, 0.37);
            outs.push(bits(&out));
        }
        prop_assert_eq!(&outs[0], &outs[1]);
        prop_assert_eq!(&outs[0], &outs[2]);
    }

    #[test]
    fn banded_matvec_bitwise(
        (workers, bs) in setup(),
        n in 2usize..400,
        seeds in prop::collection::vec((any::<i16>(), -5.0f64..5.0), 1..8),
        x in prop::collection::vec(-10.0f64..10.0, 400),
    ) {
        let mut a = BandedMatrix::new(n, BandLayout::Arbitrary).unwrap();
        for (k, (off, val)) in seeds.iter().enumerate() {
            let offset = i64::from(*off) % n as i64;
            let band: Vec<f64> = (0..n).map(|i| val + (i * (k + 1)) as f64 * 1e-3).collect();
            a.insert_band(offset as isize, band).unwrap();
        }
        let x = dv(&x[..n]);
        let outs: Vec<Vec<u64>> = backends(workers, bs)
            .iter()
            .map(|be| bits(&linalg::banded_matvec(be, &a, &x).unwrap()))
            .collect();
        prop_assert_eq!(&outs[0], &outs[1]);
        prop_assert_eq!(&outs[0], &outs[2]);
    }

    #[test]
    fn q1_matvec_bitwise((workers, bs) in setup(), m in 3usize..40, seed in any::<u64>()) {
        let n = m * m;
        let mut a = BandedMatrix::new(n, BandLayout::Q1Fixed).unwrap();
        let mut arb = BandedMatrix::new(n, BandLayout::Arbitrary).unwrap();
        let mut s = seed | 1;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for off in q1_offsets(m) {
            let band: Vec<f64> = (0..n).map(|_| next()).collect();
            a.insert_band(off, band.clone()).unwrap();
            arb.insert_band(off, band).unwrap();
        }
        let x = DenseVector::from_fn(n, |_| next()).unwrap();
        let mut outs: Vec<Vec<u64>> = backends(workers, bs)
            .iter()
            .map(|be| bits(&linalg::banded_matvec(be, &a, &x).unwrap()))
            .collect();
        outs.push(bits(&linalg::banded_matvec(&Backend::generic(), &arb, &x).unwrap()));
        for o in &outs[1..] {
            prop_assert_eq!(&outs[0], o);
        }
    }

    #[test]
    fn reductions_match_compensated_oracle(
        (workers, bs) in setup(),
        (x, y) in (1usize..20_000).prop_flat_map(|n| (
            prop::collection::vec(0.0f64..1.0, n),
            prop::collection::vec(0.0f64..1.0, n),
        )),
    ) {
        let exact_dot = compensated_dot(&x, &y);
        let exact_sq = compensated_dot(&x, &x);
        for be in backends(workers, bs) {
            let d = linalg::dot(&be, &dv(&x), &dv(&y)).unwrap();
            prop_assert!((d - exact_dot).abs() <= 1e-13 * exact_dot.abs().max(f64::MIN_POSITIVE), "{:?}: {} vs {}", be.tag(), d, exact_dot);
            let sq = linalg::norm_l2(&be, &dv(&x), true);
            prop_assert!((sq - exact_sq).abs() <= 1e-13 * exact_sq.max(f64::MIN_POSITIVE));
        }
    }
}

#[test]
fn single_precision_kernels_bitwise_across_backends() {
    let n = 100_003;
    let x = DenseVector::from_fn(n, |i| ((i * 7919) % 1000) as f32 * 1e-3 - 0.5).unwrap();
    let mut outs = Vec::new();
    for be in backends(4, 1024) {
        let mut y = DenseVector::new(n, 0.25f32).unwrap();
        linalg::axpy(&be, &mut y, 1.5, &x).unwrap();
        outs.push(y.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);
}

#[test]
fn residual_norm_equals_its_composition() {
    let m = 17;
    let n = m * m;
    let mut a = BandedMatrix::new(n, BandLayout::Q1Fixed).unwrap();
    for (k, off) in q1_offsets(m).into_iter().enumerate() {
        a.insert_band(off, (0..n).map(|i| ((i + k) % 5) as f64 - 1.5).collect()).unwrap();
    }
    let x = DenseVector::from_fn(n, |i| (i as f64 * 0.1).sin()).unwrap();
    let y = DenseVector::from_fn(n, |i| (i as f64 * 0.3).cos()).unwrap();
    for be in backends(3, 64) {
        let fused = linalg::residual_norm(&be, 2.0, &y, -0.5, &a, &x).unwrap();
        let ax = linalg::banded_matvec(&be, &a, &x).unwrap();
        let mut r = DenseVector::zeros(n).unwrap();
        linalg::scaled_sum(&be, &mut r, &y, &ax, 2.0, -0.5).unwrap();
        let composed = linalg::norm_l2(&be, &r, false);
        assert!((fused - composed).abs() <= 1e-13 * composed);
    }
}
