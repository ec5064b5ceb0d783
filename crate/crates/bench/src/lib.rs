//! Seeded inputs shared by the benchmarks.

use hkcpn::sampling::Sampler;
use hkcpn::{c, ChartPoint, ModelParams, C64};

/// Model with twist `s = 1` and `count` random points.
pub fn points(n: usize, count: usize, seed: u64) -> (ModelParams, Vec<ChartPoint>) {
    let params = ModelParams::new(n, c(1.0, 0.0)).expect("valid model");
    let mut sampler = Sampler::new(seed);
    let pts = (0..count).map(|_| sampler.point(&params)).collect();
    (params, pts)
}

/// Four random vectors of length `m` for the rank-two lemma.
pub fn rank2_vectors(m: usize, seed: u64) -> [Vec<C64>; 4] {
    let mut sampler = Sampler::new(seed);
    std::array::from_fn(|_| sampler.complex_vec(m))
}
