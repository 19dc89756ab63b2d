//! Deterministic batch execution.
//!
//! Every random workload is cut into fixed-size batches and each batch draws
//! from its own ChaCha stream, selected by `(seed, domain, batch index)`.
//! Results are gathered in batch order, so a parallel run reproduces the
//! sequential one bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Shots or attempts per RNG stream.
pub const BATCH_SIZE: u64 = 4096;

/// Stream domains keep independent workloads off each other's streams.
pub mod domain {
    pub const DQC1_X: u64 = 1;
    pub const DQC1_Y: u64 = 2;
    pub const BB_DQC1: u64 = 3;
    pub const ATTEMPTS: u64 = 4;
    pub const FAITHFUL: u64 = 5;
    pub const IPE: u64 = 6;
    pub const RANDOM_INSTANCES: u64 = 7;
    pub const DRIVER: u64 = 8;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, otherwise runs sequentially.
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub fn stream_rng(seed: u64, domain: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(stream);
    rng
}

/// Runs `f(rng, start, len)` over `total` items split into [`BATCH_SIZE`]
/// batches and returns the per-batch results in batch order.
pub fn map_batches<T, F>(exec: Exec, seed: u64, domain: u64, total: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64, u64) -> T + Sync + Send,
{
    let batches = total.div_ceil(BATCH_SIZE);
    let run = |b: u64| {
        let start = b * BATCH_SIZE;
        let len = BATCH_SIZE.min(total - start);
        let mut rng = stream_rng(seed, domain, b);
        f(&mut rng, start, len)
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..batches).into_par_iter().map(run).collect();
    }
    let _ = exec;
    (0..batches).map(run).collect()
}

/// Maps `f` over `items` (no randomness), preserving order.
pub fn map_items<I, T, F>(exec: Exec, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}
