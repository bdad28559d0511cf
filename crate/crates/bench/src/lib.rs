//! Fixed inputs for the benchmarks in `benches/`.

use tenspec_core::{random, PSTensor, SymForm};

pub const SEED: u64 = 0xbe_0c4;

/// A random symmetric tensor of shape `(n, d)`, the same on every run.
pub fn sym(n: usize, d: usize) -> SymForm {
    random::sym_form(&mut random::rng(SEED ^ ((n as u64) << 8 | d as u64)), n, d)
}

pub fn unit(n: usize, d: usize) -> PSTensor {
    PSTensor::unit(n, d)
}
