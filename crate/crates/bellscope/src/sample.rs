//! Seeded random behavior generation for property suites.
//!
//! Sampling stays exact: floating-point draws are rounded to rationals with
//! denominator 2^32 and then renormalised exactly, so all downstream
//! constraint checks remain zero-tolerance.

use crate::behavior::{Behavior, NumericMode};
use crate::rational::{rat_int, Rational};
use crate::scenario::Scenario;
use crate::vertices::VertexSet;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Deterministic RNG for reproducible sampling runs.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

const DENOMINATOR_BITS: u32 = 32;

/// Draws a positive rational with denominator 2^32 from a uniform float.
fn draw_weight(rng: &mut impl Rng) -> Rational {
    let scale = BigInt::from(1u64 << DENOMINATOR_BITS);
    let x: f64 = rng.gen_range(0.0..1.0);
    let numer = BigInt::from((x * (1u64 << DENOMINATOR_BITS) as f64) as u64 + 1);
    Rational::new(numer, scale)
}

/// Normalises a list of positive rationals to sum exactly to 1.
fn normalize(weights: &mut [Rational]) {
    let total: Rational = weights.iter().cloned().sum();
    debug_assert!(!total.is_zero());
    for w in weights.iter_mut() {
        *w /= &total;
    }
}

/// A random valid behavior of the canonical scenario, signaling allowed:
/// per setting pair, four independent positive draws normalised exactly.
pub fn random_behavior(rng: &mut impl Rng) -> Behavior {
    let scenario = Scenario::canonical();
    let mut p = Vec::with_capacity(16);
    for _ in 0..4 {
        let mut block: Vec<Rational> = (0..4).map(|_| draw_weight(rng)).collect();
        normalize(&mut block);
        p.extend(block);
    }
    Behavior::new(scenario, NumericMode::Exact, p).expect("table shape by construction")
}

/// A random exact convex combination of the vertices in `set`; membership in
/// the corresponding polytope holds by construction.
pub fn random_mixture(rng: &mut impl Rng, set: &VertexSet) -> Behavior {
    let mut weights: Vec<Rational> = (0..set.len()).map(|_| draw_weight(rng)).collect();
    normalize(&mut weights);
    let parts: Vec<(Rational, &Behavior)> = weights
        .into_iter()
        .zip(set.vertices.iter().map(|v| &v.behavior))
        .collect();
    Behavior::mix(&parts).expect("weights normalised")
}

/// A random exact convex weight in (0, 1) with denominator 2^32.
pub fn random_unit_weight(rng: &mut impl Rng) -> Rational {
    let scale = 1u64 << DENOMINATOR_BITS;
    let numer = rng.gen_range(1..scale);
    Rational::new(BigInt::from(numer), BigInt::from(scale))
}

/// A random convex combination of two behaviors.
pub fn random_pair_mixture(
    rng: &mut impl Rng,
    x: &Behavior,
    y: &Behavior,
) -> (Rational, Behavior) {
    let lambda = random_unit_weight(rng);
    let mixed = Behavior::mix(&[(lambda.clone(), x), (rat_int(1) - &lambda, y)])
        .expect("convex combination");
    (lambda, mixed)
}
