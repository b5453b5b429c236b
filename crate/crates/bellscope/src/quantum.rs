//! Singlet-state behaviors for planar spin measurements.
//!
//! These are the only floating-point sources in the crate: measurement
//! angles come in as `f64`, the resulting table entries are converted to
//! exact rationals immediately, and `rationalize` bridges the gap to the
//! exact-mode polytope machinery.

use crate::behavior::{Behavior, NumericMode};
use crate::rational::{limit_denominator, rat_int, rational_from_f64, Rational};
use crate::scenario::OutcomeLabeling;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Planar measurement directions, one angle per setting.
///
/// The singlet correlation depends only on angle differences, so a single
/// equatorial angle per setting covers every configuration used here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAngles {
    pub theta_a: f64,
    pub theta_a_prime: f64,
    pub theta_b: f64,
    pub theta_b_prime: f64,
}

impl MeasurementAngles {
    pub fn new(theta_a: f64, theta_a_prime: f64, theta_b: f64, theta_b_prime: f64) -> Self {
        MeasurementAngles { theta_a, theta_a_prime, theta_b, theta_b_prime }
    }

    pub fn from_degrees(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        Self::new(
            a.to_radians(),
            a_prime.to_radians(),
            b.to_radians(),
            b_prime.to_radians(),
        )
    }

    pub fn party1(&self, setting: usize) -> f64 {
        match setting {
            0 => self.theta_a,
            _ => self.theta_a_prime,
        }
    }

    pub fn party2(&self, setting: usize) -> f64 {
        match setting {
            0 => self.theta_b,
            _ => self.theta_b_prime,
        }
    }

    /// Angles reduced to `[0, 2π)` for reporting.
    pub fn reduced(&self) -> [f64; 4] {
        let tau = std::f64::consts::TAU;
        [self.theta_a, self.theta_a_prime, self.theta_b, self.theta_b_prime]
            .map(|t| t.rem_euclid(tau))
    }
}

/// The quantum maximum of the CHSH expression.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Angles at which the standard CHSH polynomial reaches the Tsirelson bound
/// on the singlet behavior.
pub fn chsh_optimal_angles() -> MeasurementAngles {
    use std::f64::consts::PI;
    MeasurementAngles::new(0.0, 1.5 * PI, 0.75 * PI, 1.25 * PI)
}

/// The singlet behavior for the given measurement angles:
/// `P(A,B|x,y) = (1 - A·B·cos(θx - θy))/4`, in approximate mode.
///
/// Marginals are uniform by construction; normalisation and no-signaling
/// hold to floating-point accuracy and are certified only within the mode's
/// tolerance.
pub fn singlet_behavior(m: &MeasurementAngles) -> Behavior {
    singlet_behavior_with_tolerance(m, NumericMode::default_tolerance())
}

pub fn singlet_behavior_with_tolerance(m: &MeasurementAngles, tolerance: Rational) -> Behavior {
    Behavior::from_fn_canonical(NumericMode::Approx { tolerance }, |x, y, oa, ob| {
        let cos = (m.party1(x) - m.party2(y)).cos();
        let sign = (OutcomeLabeling::value(oa) * OutcomeLabeling::value(ob)) as f64;
        let entry = (1.0 - sign * cos) / 4.0;
        rational_from_f64(entry).expect("finite probability entry")
    })
}

/// The standard CHSH value of the singlet correlation at the given angles:
/// `-cos(θa-θb) - cos(θa-θb') - cos(θa'-θb) + cos(θa'-θb')`.
pub fn chsh_value(m: &MeasurementAngles) -> f64 {
    -(m.theta_a - m.theta_b).cos() - (m.theta_a - m.theta_b_prime).cos()
        - (m.theta_a_prime - m.theta_b).cos()
        + (m.theta_a_prime - m.theta_b_prime).cos()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RationalizeError {
    #[error("rationalization requires the canonical scenario")]
    NotCanonical,
    #[error("a setting-pair block summed to zero after rounding")]
    DegenerateBlock,
    #[error("re-normalisation produced a negative entry at p[{a}][{b}][{oa}][{ob}] = {value}; raise max_denominator")]
    NegativeEntry { a: usize, b: usize, oa: usize, ob: usize, value: Rational },
}

/// Result of [`rationalize`]: the exact behavior and the largest entry-wise
/// perturbation introduced.
#[derive(Debug, Clone)]
pub struct Rationalized {
    pub behavior: Behavior,
    pub max_perturbation: Rational,
}

/// Rounds every entry to the nearest rational with denominator at most
/// `max_denominator`, renormalises each setting-pair block exactly, and then
/// rebuilds each block from tag-averaged marginals so the result is exactly
/// no-signaling. Entries near zero can be pushed negative by the
/// renormalisation; that is reported so the caller can raise the
/// denominator cap.
pub fn rationalize(behavior: &Behavior, max_denominator: u64) -> Result<Rationalized, RationalizeError> {
    let original = behavior.flat16().map_err(|_| RationalizeError::NotCanonical)?.to_vec();
    let cap = BigInt::from(max_denominator);

    // Round and renormalise per block.
    let mut rounded: Vec<Rational> = original.iter().map(|p| limit_denominator(p, &cap)).collect();
    for block in 0..4 {
        let total: Rational = rounded[block * 4..(block + 1) * 4].iter().cloned().sum();
        if total.is_zero() {
            return Err(RationalizeError::DegenerateBlock);
        }
        for slot in &mut rounded[block * 4..(block + 1) * 4] {
            *slot /= &total;
        }
    }
    let value = |x: usize, y: usize, oa: usize, ob: usize| -> &Rational {
        &rounded[((x * 2 + y) * 2 + oa) * 2 + ob]
    };

    // Tag-averaged marginal expectations and per-pair product expectations.
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let mut m1 = [Rational::zero(), Rational::zero()];
    let mut m2 = [Rational::zero(), Rational::zero()];
    let mut products = vec![Rational::zero(); 4];
    for s in 0..2 {
        let mut e1 = Rational::zero();
        let mut e2 = Rational::zero();
        for far in 0..2 {
            for oa in 0..2 {
                for ob in 0..2 {
                    let sign_a = rat_int(OutcomeLabeling::value(oa));
                    let sign_b = rat_int(OutcomeLabeling::value(ob));
                    e1 += value(s, far, oa, ob) * &sign_a;
                    e2 += value(far, s, oa, ob) * &sign_b;
                }
            }
        }
        m1[s] = e1 * &half;
        m2[s] = e2 * &half;
    }
    for x in 0..2 {
        for y in 0..2 {
            let mut t = Rational::zero();
            for oa in 0..2 {
                for ob in 0..2 {
                    let sign = OutcomeLabeling::value(oa) * OutcomeLabeling::value(ob);
                    t += value(x, y, oa, ob) * rat_int(sign);
                }
            }
            products[x * 2 + y] = t;
        }
    }

    // Rebuild every block from (m1, m2, product); the block marginals then
    // depend only on the local setting, so no-signaling holds exactly.
    let quarter = Rational::new(BigInt::from(1), BigInt::from(4));
    let mut table = Vec::with_capacity(16);
    for x in 0..2 {
        for y in 0..2 {
            for oa in 0..2 {
                for ob in 0..2 {
                    let va = rat_int(OutcomeLabeling::value(oa));
                    let vb = rat_int(OutcomeLabeling::value(ob));
                    let entry = (rat_int(1)
                        + &va * &m1[x]
                        + &vb * &m2[y]
                        + &va * &vb * &products[x * 2 + y])
                        * &quarter;
                    if entry.is_negative() {
                        return Err(RationalizeError::NegativeEntry {
                            a: x,
                            b: y,
                            oa,
                            ob,
                            value: entry,
                        });
                    }
                    table.push(entry);
                }
            }
        }
    }

    let max_perturbation = original
        .iter()
        .zip(&table)
        .map(|(p, q)| (p - q).abs())
        .max()
        .expect("sixteen entries");
    let behavior = Behavior::new(
        *behavior.scenario(),
        NumericMode::Exact,
        table,
    )
    .expect("canonical table");
    Ok(Rationalized { behavior, max_perturbation })
}

/// Convenience: a rational's `f64` value (for tolerance comparisons in
/// tests and reports).
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Catalog, CHSH_CANONICAL_VARIANT};
    use crate::rational::rat;
    use crate::vertices::pr_box_canonical;
    use std::f64::consts::PI;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y} (tol {tol})");
    }

    #[test]
    fn equal_angles_give_perfect_anticorrelation() {
        let m = MeasurementAngles::new(0.3, 0.3, 0.3, 0.3);
        let b = singlet_behavior(&m);
        for x in 0..2 {
            for y in 0..2 {
                let e = to_f64(&b.product_expectation(x, y).unwrap());
                assert_close(e, -1.0, 1e-12);
            }
        }
    }

    #[test]
    fn opposite_angles_give_perfect_correlation() {
        let m = MeasurementAngles::new(0.0, 0.0, PI, PI);
        let b = singlet_behavior(&m);
        assert_close(to_f64(&b.product_expectation(0, 0).unwrap()), 1.0, 1e-12);
    }

    #[test]
    fn chsh_value_special_angles() {
        let optimal = chsh_optimal_angles();
        assert_close(chsh_value(&optimal), TSIRELSON_BOUND, 1e-9);
        let equal = MeasurementAngles::new(1.0, 1.0, 1.0, 1.0);
        assert_close(chsh_value(&equal), -2.0, 1e-12);
        let orthogonal = MeasurementAngles::new(0.0, 0.0, PI / 2.0, PI / 2.0);
        assert_close(chsh_value(&orthogonal), 0.0, 1e-12);
    }

    #[test]
    fn chsh_value_agrees_with_catalog_evaluation() {
        let catalog = Catalog::shared();
        let chsh = &catalog.chsh[CHSH_CANONICAL_VARIANT];
        for m in [
            chsh_optimal_angles(),
            MeasurementAngles::new(0.1, 0.9, 2.0, -0.4),
            MeasurementAngles::new(0.0, PI / 2.0, 0.75 * PI, 0.25 * PI),
        ] {
            let b = singlet_behavior(&m);
            let from_table = to_f64(&chsh.evaluate(&b).unwrap().value);
            assert_close(from_table, chsh_value(&m), 1e-9);
        }
    }

    #[test]
    fn singlet_is_normalised_and_uniform_to_float_accuracy() {
        let m = MeasurementAngles::new(0.0, PI / 2.0, 0.75 * PI, 0.25 * PI);
        let b = singlet_behavior(&m);
        let tol = rat(1, 1_000_000_000_000);
        for x in 0..2 {
            for y in 0..2 {
                let total: Rational =
                    (0..2).flat_map(|oa| (0..2).map(move |ob| (oa, ob)))
                        .map(|(oa, ob)| b.entry(x, y, oa, ob).clone())
                        .sum();
                assert!((total - rat_int(1)).abs() <= tol);
            }
        }
        for party in [crate::scenario::Party::One, crate::scenario::Party::Two] {
            for s in 0..2 {
                for far in 0..2 {
                    for v in b.marginal(party, s, far).unwrap() {
                        assert!((v - rat(1, 2)).abs() <= tol);
                    }
                }
            }
        }
        assert!(b.validate().ok());
        assert!(b.is_no_signaling());
    }

    #[test]
    fn rationalize_fixes_points_already_exact() {
        let pr = pr_box_canonical();
        let out = rationalize(&pr, 1_000_000).unwrap();
        assert_eq!(out.behavior, pr);
        assert!(out.max_perturbation.is_zero());
        let uniform = crate::behavior::Behavior::uniform();
        let out = rationalize(&uniform, 1_000_000).unwrap();
        assert_eq!(out.behavior.table(), uniform.table());
    }

    #[test]
    fn rationalized_singlet_is_exactly_no_signaling_with_small_perturbation() {
        let b = singlet_behavior(&chsh_optimal_angles());
        let out = rationalize(&b, 1_000_000).unwrap();
        assert!(out.behavior.validate().ok());
        assert!(out.behavior.is_no_signaling());
        assert_eq!(*out.behavior.mode(), NumericMode::Exact);
        assert!(out.max_perturbation <= rat(2, 1_000_000));
        // CHSH still exceeds the local bound after the perturbation.
        let catalog = Catalog::shared();
        let chsh = &catalog.chsh[CHSH_CANONICAL_VARIANT];
        let value = chsh.evaluate(&out.behavior).unwrap().value;
        assert!(value > rat_int(2));
    }

    #[test]
    fn chsh_never_exceeds_tsirelson_on_sampled_angles() {
        // Sampled numeric check, not a proof.
        let mut rng = crate::sample::rng_from_seed(23);
        use rand::Rng;
        for _ in 0..10_000 {
            let m = MeasurementAngles::new(
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            assert!(chsh_value(&m) <= TSIRELSON_BOUND + 1e-9);
        }
    }
}
