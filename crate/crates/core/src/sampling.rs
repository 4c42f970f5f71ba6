//! Deterministic point sets: Halton sequences, sphere directions and
//! seeded pseudo-random generators.

use std::f64::consts::TAU;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Radical inverse of `index` in base `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

/// The `index`-th Halton point in `[0,1)^dim` (dim <= 8), skipping index 0.
pub fn halton(index: usize, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|k| radical_inverse(index as u64 + 1, PRIMES[k]))
        .collect()
}

/// Maps `params` in `[0,1)^{d-1}` to a unit vector of `R^d` (d <= 3).
pub fn direction_from_params(d: usize, params: &[f64]) -> DVector<f64> {
    match d {
        1 => DVector::from_vec(vec![if params.first().copied().unwrap_or(0.0) < 0.5 {
            1.0
        } else {
            -1.0
        }]),
        2 => {
            let t = TAU * params[0];
            DVector::from_vec(vec![t.cos(), t.sin()])
        }
        _ => {
            let z = 2.0 * params[0] - 1.0;
            let phi = TAU * params[1];
            let rho = (1.0 - z * z).max(0.0).sqrt();
            DVector::from_vec(vec![rho * phi.cos(), rho * phi.sin(), z])
        }
    }
}

/// `n` well-spread unit directions of `R^d`: both signs for d = 1,
/// equally spaced angles for d = 2, a Fibonacci lattice for d = 3.
pub fn sphere_directions(d: usize, n: usize) -> Vec<DVector<f64>> {
    match d {
        1 => vec![DVector::from_vec(vec![1.0]), DVector::from_vec(vec![-1.0])],
        2 => (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                DVector::from_vec(vec![t.cos(), t.sin()])
            })
            .collect(),
        _ => {
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            (0..n)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
                    let phi = TAU * k as f64 / golden;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    DVector::from_vec(vec![rho * phi.cos(), rho * phi.sin(), z])
                })
                .collect()
        }
    }
}

/// Seeded generator used for every randomized routine in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random unit vector of `R^d`.
pub fn random_direction<R: Rng>(rng: &mut R, d: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}
