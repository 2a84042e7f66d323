#![allow(dead_code)]

use std::path::PathBuf;

use accordiatron::TraceRecord;
use accordiatron_core::GestureState;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random-walk gesture trace. Record spacing is drawn from `step_ms`.
/// Buttons and mode flip with probability `flip` per record.
pub fn random_trace(
    rng: &mut StdRng,
    len: usize,
    step_ms: std::ops::RangeInclusive<u64>,
    flip: f64,
) -> Vec<TraceRecord> {
    let mut t_ms = 0;
    let mut g = GestureState::default();
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        if k > 0 {
            t_ms += rng.random_range(step_ms.clone());
        }
        for axis in [&mut g.squeeze, &mut g.left_rot, &mut g.right_rot] {
            if rng.random_bool(0.7) {
                let step: f64 = rng.random_range(-0.08..=0.08);
                *axis = (*axis + step).clamp(0.0, 1.0);
            }
        }
        for b in &mut g.buttons {
            if rng.random_bool(flip) {
                *b = !*b;
            }
        }
        if rng.random_bool(flip / 2.0) {
            g.mode = !g.mode;
        }
        out.push(TraceRecord { t_ms, gesture: g });
    }
    out
}
