#![allow(dead_code)]

pub mod oracle;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resonant_cp::types::{Geometry, MaterialResponse};

/// One randomized half-space case.
#[derive(Debug, Clone, Copy)]
pub struct RandomCase {
    pub material: MaterialResponse,
    pub z: f64,
}

impl RandomCase {
    pub fn geometry(&self) -> Geometry {
        Geometry::half_space(self.material)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Seeded suite: Re ε, Re μ uniform in [−3, 3], Im ε, Im μ log-uniform in
/// [10⁻⁴, 1] and z ω/c log-uniform in [10⁻², 10²].
pub fn random_cases(n: usize, seed: u64) -> Vec<RandomCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let eps_re = rng.random_range(-3.0..3.0);
            let eps_im = log_uniform(&mut rng, 1e-4, 1.0);
            let mu_re = rng.random_range(-3.0..3.0);
            let mu_im = log_uniform(&mut rng, 1e-4, 1.0);
            let z = log_uniform(&mut rng, 1e-2, 1e2);
            RandomCase {
                material: MaterialResponse::from_parts(eps_re, eps_im, mu_re, mu_im).unwrap(),
                z,
            }
        })
        .collect()
}

pub const SUITE_SEED: u64 = 0x5eed_c0de;
pub const SUITE_SIZE: usize = 50;
