//! Property suites: exactness invariants on random behaviors, cross-oracle
//! checks between the simplex and direct vertex maximisation, and the
//! polytope consistency guarantees.

use bellscope::behavior::{Behavior, NumericMode};
use bellscope::catalog::{max_over, Catalog};
use bellscope::lp::{
    affine_rank, hull_membership, maximize_over_vertices, simplex_solve_with_stats, Constraint,
    HullMembership, LpProblem, LpResult, Relation, Sense, VarBounds,
};
use bellscope::rational::{rat, rat_int, Rational};
use bellscope::sample;
use bellscope::scenario::{Party, Scenario};
use bellscope::vertices::{VertexKind, VertexSets, LOCAL_PROJECTION_ROWS, PR_PROJECTION_ROWS};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn exact_behavior(numerators: &[u64; 16]) -> Behavior {
    let mut table = Vec::with_capacity(16);
    for block in 0..4 {
        let slice = &numerators[block * 4..(block + 1) * 4];
        let total: u64 = slice.iter().sum();
        for &n in slice {
            table.push(Rational::new(BigInt::from(n), BigInt::from(total)));
        }
    }
    Behavior::new(Scenario::canonical(), NumericMode::Exact, table).expect("shape")
}

fn behavior_strategy() -> impl Strategy<Value = Behavior> {
    prop::array::uniform16(1u64..=u32::MAX as u64).prop_map(|nums| exact_behavior(&nums))
}

fn weight_strategy() -> impl Strategy<Value = Rational> {
    (1u64..u32::MAX as u64).prop_map(|n| Rational::new(BigInt::from(n), BigInt::from(u32::MAX)))
}

proptest! {
    #[test]
    fn expectation_components_lie_in_unit_interval(b in behavior_strategy()) {
        let s = b.project_expectations().unwrap();
        for component in s
            .products
            .iter()
            .chain(&s.marginals_party1)
            .chain(&s.marginals_party2)
        {
            prop_assert!(component.abs() <= rat_int(1));
        }
    }

    /// The marginal-product inequalities hold for every behavior, signaling
    /// or not, exactly: both the expanded linear family and the two-sided
    /// absolute-value phrasing.
    #[test]
    fn marginal_product_inequalities_hold_universally(b in behavior_strategy()) {
        let catalog = Catalog::shared();
        for ineq in catalog.roy_singh.iter().chain(&catalog.leggett_form) {
            prop_assert!(ineq.evaluate(&b).unwrap().satisfied, "{}", ineq.variant_id);
        }
        let s = b.project_expectations().unwrap();
        for x in 0..2 {
            for y in 0..2 {
                let product = s.product(x, y);
                let m1 = s.marginal(Party::One, x, y);
                let m2 = s.marginal(Party::Two, y, x);
                prop_assert!(rat_int(-1) + (m1 + m2).abs() <= *product);
                prop_assert!(*product <= rat_int(1) - (m1 - m2).abs());
            }
        }
    }

    /// Projection commutes with convex combination, exactly.
    #[test]
    fn projection_is_linear(x in behavior_strategy(), y in behavior_strategy(), w in weight_strategy()) {
        let mixed = Behavior::mix(&[(w.clone(), &x), (rat_int(1) - &w, &y)]).unwrap();
        let sm = mixed.project_expectations().unwrap();
        let sx = x.project_expectations().unwrap();
        let sy = y.project_expectations().unwrap();
        let co = rat_int(1) - &w;
        for i in 0..4 {
            prop_assert_eq!(&sm.products[i], &(&w * &sx.products[i] + &co * &sy.products[i]));
            prop_assert_eq!(
                &sm.marginals_party1[i],
                &(&w * &sx.marginals_party1[i] + &co * &sy.marginals_party1[i])
            );
            prop_assert_eq!(
                &sm.marginals_party2[i],
                &(&w * &sx.marginals_party2[i] + &co * &sy.marginals_party2[i])
            );
        }
    }

    /// Both representations of every catalog inequality agree on random
    /// behaviors, not just on vertices.
    #[test]
    fn dual_forms_agree_on_random_behaviors(b in behavior_strategy()) {
        for ineq in Catalog::shared().all() {
            let form = ineq.expectation_form.evaluate(&b).unwrap();
            let coeffs = ineq.value(&b).unwrap();
            prop_assert_eq!(form, coeffs, "{}", ineq.variant_id.clone());
        }
    }

    #[test]
    fn no_signaling_means_tag_independent_marginals(ws in prop::collection::vec(1u64..=u32::MAX as u64, 24)) {
        let ns = &VertexSets::shared().no_signaling;
        let total: u64 = ws.iter().sum();
        let parts: Vec<(Rational, &Behavior)> = ws
            .iter()
            .zip(ns.vertices.iter())
            .map(|(w, v)| (Rational::new(BigInt::from(*w), BigInt::from(total)), &v.behavior))
            .collect();
        let b = Behavior::mix(&parts).unwrap();
        prop_assert!(b.is_no_signaling());
        for party in [Party::One, Party::Two] {
            for setting in 0..2 {
                prop_assert_eq!(
                    b.marginal(party, setting, 0).unwrap(),
                    b.marginal(party, setting, 1).unwrap()
                );
            }
        }
        prop_assert!(b.signaling_gap().is_zero());
    }

    /// Affine rank is invariant under permutations and common translations.
    #[test]
    fn affine_rank_invariances(
        vectors in prop::collection::vec(prop::collection::vec(-20i64..20, 4), 1..7),
        shift in prop::collection::vec(-20i64..20, 4),
        seed in any::<u64>(),
    ) {
        let points: Vec<Vec<Rational>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| rat(x, 3)).collect())
            .collect();
        let rank = affine_rank(&points);
        // Permutation invariance (deterministic shuffle from the seed).
        let mut permuted = points.clone();
        let mut state = seed;
        for i in (1..permuted.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            permuted.swap(i, (state % (i as u64 + 1)) as usize);
        }
        prop_assert_eq!(affine_rank(&permuted), rank);
        // Translation invariance.
        let translated: Vec<Vec<Rational>> = points
            .iter()
            .map(|p| p.iter().zip(&shift).map(|(x, &s)| x + rat(s, 7)).collect())
            .collect();
        prop_assert_eq!(affine_rank(&translated), rank);
    }
}

/// The simplex agrees with direct vertex maximisation on the local and
/// no-signaling polytopes for many random objectives (the hull formulation
/// of the maximisation).
#[test]
fn simplex_cross_oracle_on_vertex_hulls() {
    let sets = VertexSets::shared();
    let mut rng = sample::rng_from_seed(0x51A7);
    use rand::Rng;
    for kind in [VertexKind::Local, VertexKind::NoSignaling] {
        let points = sets.get(kind).points();
        let k = points.len();
        for _ in 0..30 {
            let objective: Vec<Rational> =
                (0..16).map(|_| rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4))).collect();
            let (scan_max, _) = maximize_over_vertices(&objective, &points).unwrap();

            // max c·x over x in conv(points): variables are x (free) and the
            // hull weights.
            let num_vars = 16 + k;
            let mut full_objective = objective.clone();
            full_objective.extend(std::iter::repeat_n(Rational::zero(), k));
            let mut constraints = Vec::new();
            for d in 0..16 {
                let mut coeffs = vec![Rational::zero(); num_vars];
                coeffs[d] = rat_int(1);
                for (i, p) in points.iter().enumerate() {
                    coeffs[16 + i] = -p[d].clone();
                }
                constraints.push(Constraint::new(coeffs, Relation::Eq, rat_int(0)));
            }
            let mut sum_row = vec![Rational::zero(); num_vars];
            for slot in sum_row.iter_mut().skip(16) {
                *slot = rat_int(1);
            }
            constraints.push(Constraint::new(sum_row, Relation::Eq, rat_int(1)));
            let mut bounds = vec![VarBounds::free(); 16];
            bounds.extend(std::iter::repeat_n(VarBounds::nonnegative(), k));
            let problem = LpProblem {
                sense: Sense::Maximize,
                objective: full_objective,
                constraints,
                bounds,
            };
            let (result, stats) = simplex_solve_with_stats(&problem).unwrap();
            match result {
                LpResult::Optimal { optimum, .. } => {
                    assert_eq!(optimum, scan_max, "{kind:?}");
                }
                other => panic!("expected optimal, got {other:?}"),
            }
            assert!(stats.pivots < 10_000, "pivot ceiling: {}", stats.pivots);
        }
    }
}

/// Membership weights reconstruct the query point exactly, and the equality
/// and hull views of no-signaling membership agree on random behaviors of
/// both kinds.
#[test]
fn ns_membership_consistency() {
    let sets = VertexSets::shared();
    let ns_points = sets.no_signaling.points();
    let mut rng = sample::rng_from_seed(0xC0);
    for i in 0..500 {
        let (b, expect_member) = if i % 2 == 0 {
            (sample::random_mixture(&mut rng, &sets.no_signaling), true)
        } else {
            let b = sample::random_behavior(&mut rng);
            let member = b.is_no_signaling();
            (b, member)
        };
        let point = b.flat16().unwrap().to_vec();
        match hull_membership(&point, &ns_points).unwrap() {
            HullMembership::Member { weights } => {
                assert!(expect_member, "hull says member, equalities disagree");
                let mut reconstructed = vec![Rational::zero(); 16];
                for (w, v) in weights.iter().zip(&ns_points) {
                    for (slot, x) in reconstructed.iter_mut().zip(v) {
                        *slot += w * x;
                    }
                }
                assert_eq!(reconstructed, point);
                assert!(weights.iter().all(|w| !w.is_negative()));
                assert!(weights.iter().cloned().sum::<Rational>().is_one());
            }
            HullMembership::NonMember { separating } => {
                assert!(!expect_member, "hull says non-member, equalities disagree");
                assert!(separating.point_value > separating.vertex_max);
            }
        }
    }
}

/// In product-expectation space the no-signaling polytope is the whole unit
/// cube: every signed product functional peaks at 1 over the 24 vertices,
/// and the vertex projections are exactly the sixteen printed sign vectors.
#[test]
fn product_projection_unit_cube() {
    let sets = VertexSets::shared();
    let projections: Vec<Vec<Rational>> = sets
        .no_signaling
        .vertices
        .iter()
        .map(|v| v.behavior.product_projection().unwrap().to_vec())
        .collect();
    for axis in 0..4 {
        for sign in [1i64, -1] {
            let mut objective = vec![Rational::zero(); 4];
            objective[axis] = rat_int(sign);
            let (max, _) = maximize_over_vertices(&objective, &projections).unwrap();
            assert_eq!(max, rat_int(1));
        }
    }
    let mut distinct: Vec<Vec<Rational>> = Vec::new();
    for p in &projections {
        if !distinct.contains(p) {
            distinct.push(p.clone());
        }
    }
    assert_eq!(distinct.len(), 16);
    for row in LOCAL_PROJECTION_ROWS.iter().chain(&PR_PROJECTION_ROWS) {
        let expected: Vec<Rational> = row.iter().map(|&s| rat_int(s)).collect();
        assert!(distinct.contains(&expected), "missing projection {row:?}");
    }
}

/// Each CHSH facet is topped by exactly one PR-type vertex at value 4.
#[test]
fn one_pr_vertex_tops_each_chsh_facet() {
    let catalog = Catalog::shared();
    for (k, ineq) in catalog.chsh.iter().enumerate() {
        let (max, argmax) = max_over(ineq, VertexKind::NoSignaling);
        assert_eq!(max, rat_int(4));
        assert_eq!(argmax, vec![format!("pr[{k}]")]);
    }
}

/// The randomness and membership LPs all terminate far below the pivot
/// ceiling (Bland's rule at these sizes).
#[test]
fn catalog_lps_stay_under_pivot_ceiling() {
    use bellscope::verify::{
        build_randomness_lp, MarginalTerm, PerfectCorrelationConstraints,
    };
    let constraints = PerfectCorrelationConstraints::standard(true);
    let objective = [MarginalTerm::unit(Party::One, 0, 0)];
    for sense in [Sense::Maximize, Sense::Minimize] {
        let lp = build_randomness_lp(&constraints, &objective, sense);
        let (_, stats) = simplex_solve_with_stats(&lp).unwrap();
        assert!(stats.pivots < 10_000);
    }
}
