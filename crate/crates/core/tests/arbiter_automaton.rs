//! The arbiter is replayed against an explicit transition table of the
//! residency automaton.

use hpla_core::linalg;
use hpla_core::{AccessMode, Backend, BackendTag, BlockId, DenseVector, Location, MemoryArbiter, RuntimeConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Valid copies and dirty marker of one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum S {
    Host,
    Accel,
    Both,
    HostDirty,
    AccelDirty,
}

/// `(state, location, mode) -> (next state, transfers)`, written out case by case.
fn step(s: S, loc: Location, mode: AccessMode) -> (S, u64) {
    use AccessMode::{Read, Write};
    use Location::{Accel, Host};
    match (s, loc, mode) {
        (S::Host | S::HostDirty, Host, Read) => (S::Host, 0),
        (S::Host | S::HostDirty, Accel, Read) => (S::Both, 1),
        (S::Host | S::HostDirty, Host, Write) => (S::HostDirty, 0),
        (S::Host | S::HostDirty, Accel, Write) => (S::AccelDirty, 1),
        (S::Accel | S::AccelDirty, Accel, Read) => (S::Accel, 0),
        (S::Accel | S::AccelDirty, Host, Read) => (S::Both, 1),
        (S::Accel | S::AccelDirty, Accel, Write) => (S::AccelDirty, 0),
        (S::Accel | S::AccelDirty, Host, Write) => (S::HostDirty, 1),
        (S::Both, _, Read) => (S::Both, 0),
        (S::Both, Host, Write) => (S::HostDirty, 0),
        (S::Both, Accel, Write) => (S::AccelDirty, 0),
    }
}

fn observed(arb: &MemoryArbiter, block: BlockId) -> S {
    let r = arb.residency(block).unwrap();
    match (r.is_valid_at(Location::Host), r.is_valid_at(Location::Accel), r.dirty) {
        (true, false, None) => S::Host,
        (false, true, None) => S::Accel,
        (true, true, None) => S::Both,
        (true, false, Some(Location::Host)) => S::HostDirty,
        (false, true, Some(Location::Accel)) => S::AccelDirty,
        other => panic!("residency outside the automaton: {other:?}"),
    }
}

#[test]
fn ten_thousand_random_sequences_match_the_automaton() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10_000 {
        let arb = MemoryArbiter::new();
        let blocks: Vec<BlockId> = (0..rng.gen_range(1..5)).map(|_| BlockId::fresh()).collect();
        let mut model = vec![S::Host; blocks.len()];
        let mut expected_count = 0;
        let mut expected_bytes = 0;
        for _ in 0..rng.gen_range(1..40) {
            let b = rng.gen_range(0..blocks.len());
            let loc = if rng.gen() { Location::Host } else { Location::Accel };
            let mode = if rng.gen() { AccessMode::Read } else { AccessMode::Write };
            let bytes = rng.gen_range(1..1 << 20);
            let (next, t) = step(model[b], loc, mode);
            model[b] = next;
            expected_count += t;
            expected_bytes += t * bytes as u64;
            assert_eq!(arb.acquire(blocks[b], bytes, loc, mode), t);
            assert_eq!(observed(&arb, blocks[b]), next);
        }
        assert_eq!(arb.transfer_count(), expected_count);
        assert_eq!(arb.transfer_bytes(), expected_bytes);
    }
}

#[test]
fn double_read_elision() {
    let arb = MemoryArbiter::new();
    let b = BlockId::fresh();
    assert_eq!(arb.acquire(b, 8, Location::Accel, AccessMode::Read), 1);
    assert_eq!(arb.acquire(b, 8, Location::Accel, AccessMode::Read), 0);
    let c = BlockId::fresh();
    assert_eq!(arb.acquire(c, 8, Location::Host, AccessMode::Read), 0);
    assert_eq!(arb.acquire(c, 8, Location::Host, AccessMode::Read), 0);
}

#[test]
fn kernel_sequences_drive_the_same_automaton() {
    let arb = Arc::new(MemoryArbiter::new());
    let cfg = RuntimeConfig::default().with_workers(2);
    let host = Backend::with_arbiter(BackendTag::Generic, &cfg, arb.clone());
    let accel = Backend::with_arbiter(BackendTag::Parallel, &cfg, arb.clone());
    let mut x = DenseVector::new(64, 1.0f64).unwrap();
    let mut y = DenseVector::new(64, 2.0f64).unwrap();
    let mut states = [S::Host, S::Host];
    let mut expected = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let be = if rng.gen() { &host } else { &accel };
        let loc = be.location();
        let swap = rng.gen::<bool>();
        let (out, inp, so, si) = if swap { (&mut x, &y, 0, 1) } else { (&mut y, &x, 1, 0) };
        // axpy reads its input, then writes its output.
        let (ns, t1) = step(states[si], loc, AccessMode::Read);
        states[si] = ns;
        let (ns, t2) = step(states[so], loc, AccessMode::Write);
        states[so] = ns;
        expected += t1 + t2;
        linalg::axpy(be, out, 1e-3, inp).unwrap();
        assert_eq!(arb.transfer_count(), expected);
    }
    assert_eq!(observed(&arb, x.block_id()), states[0]);
    assert_eq!(observed(&arb, y.block_id()), states[1]);
}
