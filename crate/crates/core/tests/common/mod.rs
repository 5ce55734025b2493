#![allow(dead_code)]

//! Shared generators for the integration suites.

use bigclust::model::{BipartiteWeights, CenterMixing, DualVariable, MemberData};
use bigclust::simplex::project_rows_simplex;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

pub fn random_weights(rng: &mut ChaCha20Rng, r: usize, k: usize) -> BipartiteWeights<f64> {
    let raw = DMatrix::from_fn(r, k, |_, _| rng.random_range(-1.0..2.0));
    BipartiteWeights::new(project_rows_simplex(&raw).unwrap()).unwrap()
}

/// Uniform-on-simplex rows (every entry strictly positive).
pub fn random_dense_weights(rng: &mut ChaCha20Rng, r: usize, k: usize) -> BipartiteWeights<f64> {
    let mut b = DMatrix::from_fn(r, k, |_, _| -rng.random_range(0.0f64..1.0).max(1e-12).ln());
    for i in 0..r {
        let sum: f64 = b.row(i).iter().sum();
        for j in 0..k {
            b[(i, j)] /= sum;
        }
    }
    BipartiteWeights::new(b).unwrap()
}

pub fn random_full_mixing(rng: &mut ChaCha20Rng, r: usize, k: usize) -> CenterMixing<f64> {
    let mut a = DMatrix::from_fn(r, k, |_, _| rng.random_range(0.0..1.0));
    for j in 0..k {
        let sum: f64 = a.column(j).iter().sum();
        for i in 0..r {
            a[(i, j)] /= sum;
        }
    }
    CenterMixing::full_support(a).unwrap()
}

/// Column-stochastic mixing restricted to the exact support of `b`.
pub fn random_supported_mixing(
    rng: &mut ChaCha20Rng,
    b: &BipartiteWeights<f64>,
) -> CenterMixing<f64> {
    let support = b.support();
    let (r, k) = (b.r(), b.k());
    let mut a = DMatrix::zeros(r, k);
    for j in 0..k {
        let mut sum = 0.0;
        for i in 0..r {
            if support[(i, j)] {
                let v = rng.random_range(0.01..1.0);
                a[(i, j)] = v;
                sum += v;
            }
        }
        for i in 0..r {
            a[(i, j)] /= sum;
        }
    }
    CenterMixing::new(a, support).unwrap()
}

pub fn random_data(rng: &mut ChaCha20Rng, r: usize, n: usize) -> MemberData<f64> {
    MemberData::new(DMatrix::from_fn(r, n, |_, _| rng.random_range(-1.5..1.5))).unwrap()
}

pub fn random_dual(rng: &mut ChaCha20Rng, p: usize, scale: f64) -> DualVariable<f64> {
    let m = DMatrix::from_fn(p, p, |_, _| rng.random_range(-scale..scale));
    DualVariable::new((&m + m.transpose()) * 0.5).unwrap()
}
