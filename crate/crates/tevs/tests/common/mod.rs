//! Shared generators and independent oracles for the integration suites.
//!
//! The oracles here deliberately avoid the library's dynamic program: the
//! inner product is recomputed as an explicit double sum, the Euclidean limit
//! as an aligned dot product, and text kernels as bag-of-words sums over
//! sorted term maps.

#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use tevs::textsim::TokenSeries;
use tevs::{Sample, TimeSeries};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn s1(pairs: &[(f64, f64)]) -> TimeSeries {
    TimeSeries::from_scalar_pairs(pairs).unwrap()
}

/// Nonzero integer in [-5, 5].
pub fn nonzero_int(rng: &mut ChaCha8Rng) -> f64 {
    let v = rng.gen_range(1..=5) as f64;
    if rng.gen_bool(0.5) {
        -v
    } else {
        v
    }
}

/// Series with integer values and distinct random timestamps in [0, 1].
pub fn random_series(rng: &mut ChaCha8Rng, len: usize, dim: usize) -> TimeSeries {
    let mut ticks = rand::seq::index::sample(rng, 10_000, len).into_vec();
    ticks.sort_unstable();
    let samples = ticks
        .into_iter()
        .map(|tick| {
            let value = (0..dim).map(|_| nonzero_int(rng)).collect();
            Sample::new(value, tick as f64 / 10_000.0)
        })
        .collect();
    TimeSeries::validate(samples).unwrap()
}

/// Integer-valued series on the shared dyadic grid t = k/4, k in 0..32, so
/// that merges collide and all algebra stays exact.
pub fn random_grid_series(rng: &mut ChaCha8Rng, max_len: usize, dim: usize) -> TimeSeries {
    let len = rng.gen_range(0..=max_len);
    let mut slots = rand::seq::index::sample(rng, 32, len).into_vec();
    slots.sort_unstable();
    let samples = slots
        .into_iter()
        .map(|slot| {
            let value = (0..dim).map(|_| nonzero_int(rng)).collect();
            Sample::new(value, slot as f64 / 4.0)
        })
        .collect();
    TimeSeries::validate(samples).unwrap()
}

/// Uniform unit-spaced series of the given length: t = 0, 1, 2, ...
pub fn random_uniform_series(rng: &mut ChaCha8Rng, len: usize, dim: usize) -> TimeSeries {
    let samples = (0..len)
        .map(|i| {
            let value = (0..dim).map(|_| nonzero_int(rng)).collect();
            Sample::new(value, i as f64)
        })
        .collect();
    TimeSeries::validate(samples).unwrap()
}

/// Independent double-sum oracle for the elastic inner product.
pub fn teip_double_sum(a: &TimeSeries, b: &TimeSeries, nu: f64) -> f64 {
    let mut acc = 0.0;
    for x in a.samples() {
        for y in b.samples() {
            let f: f64 = x.value.iter().zip(&y.value).map(|(&u, &v)| u * v).sum();
            acc += f * (-nu * (x.timestamp - y.timestamp).abs()).exp();
        }
    }
    acc
}

/// Euclidean-limit oracle: dot product of position-aligned samples.
pub fn aligned_dot(a: &TimeSeries, b: &TimeSeries) -> f64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| x.value.iter().zip(&y.value).map(|(&u, &v)| u * v).sum::<f64>())
        .sum()
}

/// Guarded relative closeness: |x - y| <= tol * max(1, |x|, |y|).
pub fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

/// Term frequencies in deterministic (sorted) order.
pub fn sorted_tf(doc: &TokenSeries) -> BTreeMap<String, usize> {
    let mut tf = BTreeMap::new();
    for t in doc.tokens() {
        *tf.entry(t.clone()).or_default() += 1;
    }
    tf
}

/// Bag-of-words product with per-token weights (1.0 for binary).
pub fn bag_product(a: &TokenSeries, b: &TokenSeries, weight: impl Fn(&str) -> f64) -> f64 {
    let (tfa, tfb) = (sorted_tf(a), sorted_tf(b));
    let mut acc = 0.0;
    for (token, &ca) in &tfa {
        if let Some(&cb) = tfb.get(token) {
            acc += (ca * cb) as f64 * weight(token);
        }
    }
    acc
}

/// Random token sequence over the vocabulary w0..w{vocab-1}.
pub fn random_tokens(rng: &mut ChaCha8Rng, len: usize, vocab: usize) -> TokenSeries {
    TokenSeries::new((0..len).map(|_| format!("w{}", rng.gen_range(0..vocab))).collect())
}
