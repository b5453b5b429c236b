//! Extreme points of the general, local and no-signaling polytopes of the
//! canonical two-setting, two-outcome scenario, plus membership tests.

use crate::behavior::{Behavior, NumericMode};
use crate::catalog::LinearInequality;
use crate::lp::{affine_rank, hull_membership, HullMembership, LpError, SeparatingFunctional};
use crate::rational::{rat, rat_int, Rational};
use crate::scenario::OutcomeLabeling;
use num_traits::Zero;
use std::sync::OnceLock;

/// Which polytope a vertex set enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    General,
    Local,
    NoSignaling,
}

/// A vertex together with its symbolic description.
#[derive(Debug, Clone)]
pub struct LabeledVertex {
    pub behavior: Behavior,
    pub label: String,
}

/// A finite list of extreme-point behaviors.
#[derive(Debug, Clone)]
pub struct VertexSet {
    pub kind: VertexKind,
    pub vertices: Vec<LabeledVertex>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The 16-dim probability vectors of all vertices, in order.
    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.vertices
            .iter()
            .map(|v| v.behavior.flat16().expect("canonical vertex").to_vec())
            .collect()
    }
}

/// All three canonical vertex sets, built once and shared.
#[derive(Debug)]
pub struct VertexSets {
    pub general: VertexSet,
    pub local: VertexSet,
    pub no_signaling: VertexSet,
}

impl VertexSets {
    pub fn build() -> Self {
        VertexSets {
            general: general_vertices(),
            local: local_vertices(),
            no_signaling: ns_vertices(),
        }
    }

    pub fn shared() -> &'static VertexSets {
        static SETS: OnceLock<VertexSets> = OnceLock::new();
        SETS.get_or_init(VertexSets::build)
    }

    pub fn get(&self, kind: VertexKind) -> &VertexSet {
        match kind {
            VertexKind::General => &self.general,
            VertexKind::Local => &self.local,
            VertexKind::NoSignaling => &self.no_signaling,
        }
    }
}

fn pair_symbol(x: usize, y: usize) -> String {
    format!(
        "{}{}",
        OutcomeLabeling::setting_symbol(crate::scenario::Party::One, x),
        OutcomeLabeling::setting_symbol(crate::scenario::Party::Two, y)
    )
}

/// Deterministic general vertex: one fixed outcome pair per setting pair.
///
/// `codes[x*2+y] = (A, B)` gives the outcome labels for settings `(x, y)`.
pub fn general_vertex(codes: [(usize, usize); 4]) -> Behavior {
    Behavior::from_fn_canonical(NumericMode::Exact, |a, b, oa, ob| {
        let (ca, cb) = codes[a * 2 + b];
        if oa == ca && ob == cb {
            rat_int(1)
        } else {
            rat_int(0)
        }
    })
}

/// Local deterministic vertex from the four outcome bits
/// `(A[a], A[a'], B[b], B[b'])`.
pub fn local_vertex(bits: [usize; 4]) -> Behavior {
    Behavior::from_fn_canonical(NumericMode::Exact, |a, b, oa, ob| {
        if oa == bits[a] && ob == bits[2 + b] {
            rat_int(1)
        } else {
            rat_int(0)
        }
    })
}

/// The product-expectation sign patterns of the eight PR-type vertices, in
/// the fixed catalog order. Component `j` of row `k` is the sign of the
/// product expectation for setting pair `(j/2, j%2)`.
///
/// Each row has an odd number of -1 components; the complementary even
/// patterns are exactly the local-vertex projections.
pub const PR_PROJECTION_ROWS: [[i64; 4]; 8] = [
    [-1, 1, 1, 1],
    [1, -1, -1, -1],
    [1, -1, 1, 1],
    [-1, 1, -1, -1],
    [1, 1, -1, 1],
    [-1, -1, 1, -1],
    [1, 1, 1, -1],
    [-1, -1, -1, 1],
];

/// The eight distinct local product projections (even sign patterns), each
/// realised by exactly two local vertices.
pub const LOCAL_PROJECTION_ROWS: [[i64; 4]; 8] = [
    [1, 1, 1, 1],
    [-1, -1, -1, -1],
    [1, 1, -1, -1],
    [-1, -1, 1, 1],
    [1, -1, 1, -1],
    [-1, 1, -1, 1],
    [1, -1, -1, 1],
    [-1, 1, 1, -1],
];

/// PR-type behavior whose product projection is `PR_PROJECTION_ROWS[variant]`.
///
/// Entries are 1/2 where `A + B = x·y + α·x + β·y + γ (mod 2)` and 0
/// elsewhere; `(α, β, γ)` are recovered from the projection row.
pub fn pr_box(variant: usize) -> Result<Behavior, VertexError> {
    if variant >= 8 {
        return Err(VertexError::VariantOutOfRange { variant, max: 7 });
    }
    let row = PR_PROJECTION_ROWS[variant];
    let bit = |s: i64| usize::from(s < 0);
    // row[0] = (-1)^γ, row[1] = (-1)^{β+γ}, row[2] = (-1)^{α+γ}.
    let gamma = bit(row[0]);
    let beta = bit(row[1]) ^ gamma;
    let alpha = bit(row[2]) ^ gamma;
    Ok(Behavior::from_fn_canonical(NumericMode::Exact, |x, y, oa, ob| {
        let parity = (x * y + alpha * x + beta * y + gamma) % 2;
        if (oa + ob) % 2 == parity {
            rat(1, 2)
        } else {
            rat_int(0)
        }
    }))
}

/// The PR box in its standard form (projection `(1, 1, 1, -1)`).
pub fn pr_box_canonical() -> Behavior {
    pr_box(6).expect("variant in range")
}

/// The deterministic one-way signaling protocol violating the four-term
/// no-signaling inequalities at value 4: outcomes (+1,+1) when `(a,b)` is
/// measured and (-1,-1) when `(a',b)` is measured. Party 1's remaining
/// outcomes repeat its setting-wise choices so only party 2 signals.
pub fn signaling_protocol_4() -> Behavior {
    general_vertex([(0, 0), (0, 0), (1, 1), (1, 0)])
}

/// The deterministic signaling protocol violating the six-term no-signaling
/// inequality at value 6: party 1 outputs -1 on `(a,b)` and `(a',b')`,
/// both parties output +1 in every other slot.
pub fn signaling_protocol_6() -> Behavior {
    general_vertex([(1, 0), (0, 0), (0, 0), (1, 0)])
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VertexError {
    #[error("variant {variant} out of range (max {max})")]
    VariantOutOfRange { variant: usize, max: usize },
}

/// All 256 deterministic vertices of the general polytope, one fixed outcome
/// pair per setting pair, signaling ones included.
pub fn general_vertices() -> VertexSet {
    let mut vertices = Vec::with_capacity(256);
    for idx in 0..256usize {
        let mut codes = [(0usize, 0usize); 4];
        for (slot, code) in codes.iter_mut().enumerate() {
            let c = (idx >> (2 * (3 - slot))) & 0b11;
            *code = (c >> 1, c & 1);
        }
        let label = (0..4)
            .map(|slot| {
                let (ca, cb) = codes[slot];
                format!(
                    "{}->{}{}",
                    pair_symbol(slot / 2, slot % 2),
                    OutcomeLabeling::outcome_symbol(ca),
                    OutcomeLabeling::outcome_symbol(cb)
                )
            })
            .collect::<Vec<_>>()
            .join(";");
        vertices.push(LabeledVertex { behavior: general_vertex(codes), label });
    }
    VertexSet { kind: VertexKind::General, vertices }
}

/// All 16 local deterministic vertices, indexed by the outcome bits
/// `(A[a], A[a'], B[b], B[b'])`.
pub fn local_vertices() -> VertexSet {
    let mut vertices = Vec::with_capacity(16);
    for idx in 0..16usize {
        let bits = [(idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
        let label = format!(
            "A[a]={}A[a']={}B[b]={}B[b']={}",
            OutcomeLabeling::outcome_symbol(bits[0]),
            OutcomeLabeling::outcome_symbol(bits[1]),
            OutcomeLabeling::outcome_symbol(bits[2]),
            OutcomeLabeling::outcome_symbol(bits[3]),
        );
        vertices.push(LabeledVertex { behavior: local_vertex(bits), label });
    }
    VertexSet { kind: VertexKind::Local, vertices }
}

/// The 24 no-signaling vertices: the 16 local ones followed by the 8 PR-type
/// boxes in variant order.
pub fn ns_vertices() -> VertexSet {
    let mut vertices = local_vertices().vertices;
    for variant in 0..8 {
        vertices.push(LabeledVertex {
            behavior: pr_box(variant).expect("variant in range"),
            label: format!("pr[{variant}]"),
        });
    }
    VertexSet { kind: VertexKind::NoSignaling, vertices }
}

/// Result of a local-polytope membership test.
#[derive(Debug, Clone)]
pub enum LocalMembership {
    /// A constructive local hidden-variable model: weights over the 16 local
    /// deterministic vertices reproducing the behavior exactly.
    Member { weights: Vec<(String, Rational)> },
    /// A functional separating the behavior from every local vertex.
    NonMember { separating: SeparatingFunctional },
}

/// Decides membership in the local polytope by an exact feasibility LP over
/// vertex weights. A member comes back with its explicit decomposition; a
/// non-member with a verified separating functional.
pub fn local_membership(behavior: &Behavior) -> Result<LocalMembership, LpError> {
    let point = behavior
        .flat16()
        .map_err(|_| LpError::DimensionMismatch {
            what: "local membership requires a canonical behavior".into(),
        })?
        .to_vec();
    let local = VertexSets::shared();
    let verts = &local.local;
    match hull_membership(&point, &verts.points())? {
        HullMembership::Member { weights } => {
            let weights = weights
                .into_iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(i, w)| (verts.vertices[i].label.clone(), w))
                .collect();
            Ok(LocalMembership::Member { weights })
        }
        HullMembership::NonMember { separating } => Ok(LocalMembership::NonMember { separating }),
    }
}

/// No-signaling membership decided by the marginal equalities; agrees with
/// the convex-hull test against the 24 no-signaling vertices on every valid
/// behavior (asserted in tests).
pub fn ns_membership(behavior: &Behavior) -> crate::behavior::NsReport {
    behavior.check_no_signaling()
}

/// Dimension of the local and no-signaling polytopes in the 16-dim
/// probability space.
pub const POLYTOPE_DIM: usize = 8;

/// Saturation analysis of an inequality against a vertex set.
#[derive(Debug, Clone)]
pub enum FacetStatus {
    /// Some vertex exceeds the bound: the inequality is not valid for this
    /// polytope (reported, not an error).
    NotValidForPolytope { violator: String, value: Rational },
    Valid {
        saturating_count: usize,
        saturating_labels: Vec<String>,
        affine_rank: usize,
        /// Whether the saturating vertices span a facet of the 8-dimensional
        /// local/no-signaling polytopes.
        is_facet_of_dim8: bool,
    },
}

/// Lists the vertices achieving the bound exactly, computes their affine
/// rank, and reports facet status against polytope dimension 8.
pub fn facet_saturation_rank(ineq: &LinearInequality, set: &VertexSet) -> FacetStatus {
    let mut saturating = Vec::new();
    let mut labels = Vec::new();
    for v in &set.vertices {
        let value = ineq.evaluate(&v.behavior).expect("canonical vertex").value;
        if value > ineq.bound {
            return FacetStatus::NotValidForPolytope { violator: v.label.clone(), value };
        }
        if value == ineq.bound {
            saturating.push(v.behavior.flat16().expect("canonical").to_vec());
            labels.push(v.label.clone());
        }
    }
    let rank = if saturating.is_empty() { 0 } else { affine_rank(&saturating) };
    FacetStatus::Valid {
        saturating_count: labels.len(),
        saturating_labels: labels,
        affine_rank: rank,
        is_facet_of_dim8: rank == POLYTOPE_DIM,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Party;
    use std::collections::BTreeSet;

    #[test]
    fn vertex_counts() {
        let sets = VertexSets::build();
        assert_eq!(sets.general.len(), 256);
        assert_eq!(sets.local.len(), 16);
        assert_eq!(sets.no_signaling.len(), 24);
    }

    #[test]
    fn no_duplicate_vertices() {
        for set in [general_vertices(), local_vertices(), ns_vertices()] {
            let seen: BTreeSet<Vec<String>> = set
                .vertices
                .iter()
                .map(|v| {
                    v.behavior
                        .flat16()
                        .unwrap()
                        .iter()
                        .map(crate::rational::format_rational)
                        .collect()
                })
                .collect();
            assert_eq!(seen.len(), set.len(), "{:?} has duplicates", set.kind);
        }
    }

    #[test]
    fn all_vertices_are_valid_behaviors() {
        for set in [general_vertices(), local_vertices(), ns_vertices()] {
            for v in &set.vertices {
                assert!(v.behavior.validate().ok(), "{} invalid", v.label);
            }
        }
    }

    #[test]
    fn no_signaling_general_vertices_are_exactly_the_local_ones() {
        let general = general_vertices();
        let local = local_vertices();
        let ns_points: Vec<_> = general
            .vertices
            .iter()
            .filter(|v| v.behavior.is_no_signaling())
            .map(|v| v.behavior.clone())
            .collect();
        assert_eq!(ns_points.len(), 16);
        for lv in &local.vertices {
            assert!(ns_points.contains(&lv.behavior));
        }
    }

    #[test]
    fn footnote_protocols_appear_among_general_vertices() {
        let general = general_vertices();
        for protocol in [signaling_protocol_4(), signaling_protocol_6()] {
            assert!(general.vertices.iter().any(|v| v.behavior == protocol));
        }
    }

    #[test]
    fn local_projections_realise_each_even_pattern_twice() {
        let local = local_vertices();
        let mut counts = std::collections::BTreeMap::new();
        for v in &local.vertices {
            let proj = v.behavior.product_projection().unwrap();
            let signs: Vec<i64> = proj
                .iter()
                .map(|p| if p == &rat_int(1) { 1 } else { -1 })
                .collect();
            *counts.entry(signs).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 8);
        for row in LOCAL_PROJECTION_ROWS {
            assert_eq!(counts.get(&row.to_vec()), Some(&2), "pattern {row:?}");
        }
    }

    #[test]
    fn pr_boxes_have_the_printed_projections_and_uniform_marginals() {
        for (variant, row) in PR_PROJECTION_ROWS.iter().enumerate() {
            let b = pr_box(variant).unwrap();
            let proj = b.product_projection().unwrap();
            for (component, sign) in proj.iter().zip(row) {
                assert_eq!(component, &rat_int(*sign));
            }
            for party in [Party::One, Party::Two] {
                for setting in 0..2 {
                    for far in 0..2 {
                        assert_eq!(
                            b.marginal(party, setting, far).unwrap(),
                            vec![rat(1, 2); 2]
                        );
                    }
                }
            }
            assert!(b.is_no_signaling());
        }
        assert!(pr_box(8).is_err());
    }

    #[test]
    fn canonical_pr_box_matches_parity_form() {
        // The standard box: 1/2 where A+B = a·b (mod 2).
        let b = pr_box_canonical();
        for a in 0..2 {
            for bb in 0..2 {
                for oa in 0..2 {
                    for ob in 0..2 {
                        let expected =
                            if (oa + ob) % 2 == (a * bb) % 2 { rat(1, 2) } else { rat_int(0) };
                        assert_eq!(*b.entry(a, bb, oa, ob), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn every_ns_vertex_is_deterministic_local_or_uniform_marginal() {
        for v in &ns_vertices().vertices {
            let deterministic = v
                .behavior
                .flat16()
                .unwrap()
                .iter()
                .all(|p| p.is_zero() || p == &rat_int(1));
            if deterministic {
                assert!(v.behavior.is_no_signaling());
            } else {
                for party in [Party::One, Party::Two] {
                    for setting in 0..2 {
                        for far in 0..2 {
                            assert_eq!(
                                v.behavior.marginal(party, setting, far).unwrap(),
                                vec![rat(1, 2); 2]
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn polytope_dimension_self_check() {
        // The local and no-signaling polytopes both span an 8-dimensional
        // affine set in the 16-dim probability space; the general polytope
        // spans the full 12-dimensional normalisation slice.
        let sets = VertexSets::shared();
        assert_eq!(affine_rank(&sets.local.points()) - 1, POLYTOPE_DIM);
        assert_eq!(affine_rank(&sets.no_signaling.points()) - 1, POLYTOPE_DIM);
        assert_eq!(affine_rank(&sets.general.points()) - 1, 12);
    }
}
