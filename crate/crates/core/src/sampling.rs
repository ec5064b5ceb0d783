//! Seeded sampling of chart points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::group::{ChartPoint, ModelParams};
use crate::moment::tau_local;
use crate::C64;

/// Deterministic source of complex Gaussians (`E|w|² = 1`) and chart points.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    normal: Normal<f64>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            normal: Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid sigma"),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn real(&mut self) -> f64 {
        self.normal.sample(&mut self.rng) * std::f64::consts::SQRT_2
    }

    pub fn complex(&mut self) -> C64 {
        C64::new(self.normal.sample(&mut self.rng), self.normal.sample(&mut self.rng))
    }

    pub fn complex_vec(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex()).collect()
    }

    pub fn chart(&mut self, n: usize) -> usize {
        self.rng.random_range(0..=n)
    }

    pub fn point_in_chart(&mut self, alpha: usize, params: &ModelParams) -> ChartPoint {
        let z = self.complex_vec(params.n);
        let xi = self.complex_vec(params.n);
        ChartPoint { alpha, z, xi }
    }

    /// Point in a uniformly chosen chart.
    pub fn point(&mut self, params: &ModelParams) -> ChartPoint {
        let alpha = self.chart(params.n);
        self.point_in_chart(alpha, params)
    }

    /// Rejection-samples a point with `τ − τ₀ ≥ rel · τ₀`.
    pub fn point_away_from_lagrangian(&mut self, params: &ModelParams, rel: f64) -> ChartPoint {
        loop {
            let p = self.point(params);
            if tau_local(&p, params) - params.tau0 >= rel * params.tau0 {
                return p;
            }
        }
    }
}
