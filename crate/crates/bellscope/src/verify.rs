//! Machine-checked certificates for the headline polytope claims: the
//! triviality of the marginal-product inequalities, the bounds and non-facet
//! status of the no-signaling families, the facet status of the CHSH
//! variants, and the perfect-correlation randomness theorem with its
//! outcome-flip variant.
//!
//! Every LP sub-result is double-checked before it is reported: optimal
//! witnesses are substituted back into all constraints exactly, and
//! infeasibility certificates are re-multiplied inside the LP layer.

use crate::behavior::{Behavior, NumericMode};
use crate::catalog::{
    max_over, Catalog, ExpectationForm, Term, NS4_PRINTED_EXAMPLE, NS6_SEED,
};
use crate::json::{rational_string, rational_vec_opt};
use crate::lp::{
    check_witness, simplex_solve, Constraint, LpProblem, LpResult, Relation, Sense,
};
use crate::rational::{rat_int, Rational};
use crate::scenario::{Party, Scenario};
use crate::vertices::{
    facet_saturation_rank, local_vertex, signaling_protocol_4, signaling_protocol_6, FacetStatus,
    VertexKind, VertexSets, POLYTOPE_DIM,
};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::time::{Duration, Instant};

// ---------------------------------------------------------------------------
// Certificate types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    RoySinghTrivial,
    NsFamiliesBound,
    NsFamiliesNotFacets,
    ChshAreFacets,
    RandomnessTheorem,
    GisinVariant,
}

impl ClaimId {
    pub fn name(&self) -> &'static str {
        match self {
            ClaimId::RoySinghTrivial => "roy_singh_trivial",
            ClaimId::NsFamiliesBound => "ns_families_bound",
            ClaimId::NsFamiliesNotFacets => "ns_families_not_facets",
            ClaimId::ChshAreFacets => "chsh_are_facets",
            ClaimId::RandomnessTheorem => "randomness_theorem",
            ClaimId::GisinVariant => "gisin_variant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confirmed,
    Refuted { witness: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct LpReport {
    pub sense: &'static str,
    #[serde(with = "rational_string")]
    pub optimum: Rational,
    #[serde(with = "rational_string")]
    pub expected: Rational,
    #[serde(
        serialize_with = "rational_vec_opt::serialize",
        skip_serializing_if = "Option::is_none"
    )]
    pub witness: Option<Vec<Rational>>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub variant_id: String,
    pub polytope: &'static str,
    #[serde(with = "rational_string")]
    pub optimum: Rational,
    #[serde(with = "rational_string")]
    pub expected: Rational,
    pub argmax_count: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub variant_id: String,
    pub polytope: &'static str,
    pub saturating_count: usize,
    pub affine_rank: usize,
    pub expected_rank: usize,
    pub is_facet_of_dim8: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueReport {
    #[serde(with = "rational_string")]
    pub value: Rational,
    #[serde(with = "rational_string")]
    pub expected: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampledReport {
    pub count: usize,
    pub seed: u64,
    pub violations: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubOutcome {
    Lp(LpReport),
    Bound(BoundReport),
    Rank(RankReport),
    Value(ValueReport),
    Sampled(SampledReport),
    Check(CheckReport),
}

impl SubOutcome {
    fn pass(&self) -> bool {
        match self {
            SubOutcome::Lp(r) => r.pass,
            SubOutcome::Bound(r) => r.pass,
            SubOutcome::Rank(r) => r.pass,
            SubOutcome::Value(r) => r.pass,
            SubOutcome::Sampled(r) => r.pass,
            SubOutcome::Check(r) => r.pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubResult {
    pub description: String,
    #[serde(flatten)]
    pub outcome: SubOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCertificate {
    pub claim_id: ClaimId,
    pub sub_results: Vec<SubResult>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl TheoremCertificate {
    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialises")
    }
}

struct CertBuilder {
    claim_id: ClaimId,
    sub_results: Vec<SubResult>,
    first_failure: Option<String>,
    started: Instant,
}

impl CertBuilder {
    fn new(claim_id: ClaimId) -> Self {
        CertBuilder { claim_id, sub_results: Vec::new(), first_failure: None, started: Instant::now() }
    }

    fn push(&mut self, description: impl Into<String>, outcome: SubOutcome) {
        let description = description.into();
        if !outcome.pass() && self.first_failure.is_none() {
            self.first_failure = Some(description.clone());
        }
        self.sub_results.push(SubResult { description, outcome });
    }

    fn finish(self) -> TheoremCertificate {
        let verdict = match self.first_failure {
            None => Verdict::Confirmed,
            Some(witness) => Verdict::Refuted { witness },
        };
        TheoremCertificate {
            claim_id: self.claim_id,
            sub_results: self.sub_results,
            verdict,
            wall_time: self.started.elapsed(),
        }
    }
}

// ---------------------------------------------------------------------------
// Sampling configuration
// ---------------------------------------------------------------------------

/// Sampled-check configuration for the verifiers that draw random behaviors.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { count: 10_000, seed: 0xBE11 }
    }
}

// ---------------------------------------------------------------------------
// Perfect-correlation constraint model and LP construction
// ---------------------------------------------------------------------------

/// A measurement direction tag from the antipodal pair `{u, -u}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionTag {
    U,
    MinusU,
}

impl DirectionTag {
    pub fn negated(self) -> Self {
        match self {
            DirectionTag::U => DirectionTag::MinusU,
            DirectionTag::MinusU => DirectionTag::U,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TagError {
    #[error("each party must map its two settings onto u and -u")]
    MissingDirection,
    #[error("pair ({0},{1}) is listed as anticorrelated but its tags differ")]
    BadAnticorrelated(usize, usize),
    #[error("pair ({0},{1}) is listed as correlated but its tags are not opposite")]
    BadCorrelated(usize, usize),
}

/// Direction assignment plus the perfect-correlation constraint lists: a
/// setting pair is anticorrelated exactly when its tags are equal and
/// correlated exactly when they are opposite.
#[derive(Debug, Clone)]
pub struct PerfectCorrelationConstraints {
    pub party1_directions: [DirectionTag; 2],
    pub party2_directions: [DirectionTag; 2],
    pub anticorrelated_pairs: Vec<(usize, usize)>,
    pub correlated_pairs: Vec<(usize, usize)>,
    pub symmetry_enabled: bool,
}

impl PerfectCorrelationConstraints {
    pub fn new(
        party1_directions: [DirectionTag; 2],
        party2_directions: [DirectionTag; 2],
        anticorrelated_pairs: Vec<(usize, usize)>,
        correlated_pairs: Vec<(usize, usize)>,
        symmetry_enabled: bool,
    ) -> Result<Self, TagError> {
        for dirs in [&party1_directions, &party2_directions] {
            if dirs[0] == dirs[1] {
                return Err(TagError::MissingDirection);
            }
        }
        for &(x, y) in &anticorrelated_pairs {
            if party1_directions[x] != party2_directions[y] {
                return Err(TagError::BadAnticorrelated(x, y));
            }
        }
        for &(x, y) in &correlated_pairs {
            if party1_directions[x] != party2_directions[y].negated() {
                return Err(TagError::BadCorrelated(x, y));
            }
        }
        Ok(PerfectCorrelationConstraints {
            party1_directions,
            party2_directions,
            anticorrelated_pairs,
            correlated_pairs,
            symmetry_enabled,
        })
    }

    /// The standard assignment: both parties map setting 0 to `u` and
    /// setting 1 to `-u`, every pair constrained as its tags dictate.
    pub fn standard(symmetry_enabled: bool) -> Self {
        Self::with_directions(
            [DirectionTag::U, DirectionTag::MinusU],
            [DirectionTag::U, DirectionTag::MinusU],
            symmetry_enabled,
        )
        .expect("standard tags are consistent")
    }

    /// Derives the anticorrelated/correlated pair lists from the tags.
    pub fn with_directions(
        party1_directions: [DirectionTag; 2],
        party2_directions: [DirectionTag; 2],
        symmetry_enabled: bool,
    ) -> Result<Self, TagError> {
        let mut anti = Vec::new();
        let mut corr = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                if party1_directions[x] == party2_directions[y] {
                    anti.push((x, y));
                } else {
                    corr.push((x, y));
                }
            }
        }
        Self::new(party1_directions, party2_directions, anti, corr, symmetry_enabled)
    }

    /// The party-1 setting measuring the given direction.
    pub fn party1_setting(&self, tag: DirectionTag) -> usize {
        if self.party1_directions[0] == tag {
            0
        } else {
            1
        }
    }

    pub fn party2_setting(&self, tag: DirectionTag) -> usize {
        if self.party2_directions[0] == tag {
            0
        } else {
            1
        }
    }
}

/// Which constraint groups enter a randomness LP. The theorem uses the
/// default (everything but the outcome flip); the variants probe which
/// assumptions carry which part of the conclusion.
#[derive(Debug, Clone, Copy)]
pub struct LpIngredients {
    pub no_signaling: bool,
    pub anticorrelation: bool,
    pub correlation: bool,
    pub outcome_flip: bool,
    pub symmetry: bool,
}

/// One marginal-expectation term of an LP objective.
#[derive(Debug, Clone)]
pub struct MarginalTerm {
    pub party: Party,
    pub setting: usize,
    pub far: usize,
    pub coeff: Rational,
}

impl MarginalTerm {
    pub fn unit(party: Party, setting: usize, far: usize) -> Self {
        MarginalTerm { party, setting, far, coeff: rat_int(1) }
    }
}

fn expectation_objective(terms: &[MarginalTerm]) -> Vec<Rational> {
    let form = ExpectationForm::new(
        terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone(),
                kind: crate::catalog::TermKind::Marginal {
                    party: t.party,
                    setting: t.setting,
                    far: t.far,
                },
            })
            .collect(),
    );
    form.prob_coeffs()
}

/// Indicator coefficients of the marginal probability
/// `P(outcome | setting)^far` for one party.
fn marginal_probability_coeffs(
    party: Party,
    setting: usize,
    far: usize,
    outcome: usize,
) -> Vec<Rational> {
    let sc = Scenario::canonical();
    let mut coeffs = vec![Rational::zero(); 16];
    for other in 0..2 {
        let idx = match party {
            Party::One => sc.index(setting, far, outcome, other),
            Party::Two => sc.index(far, setting, other, outcome),
        };
        coeffs[idx] = rat_int(1);
    }
    coeffs
}

fn product_coeffs(x: usize, y: usize) -> Vec<Rational> {
    ExpectationForm::new(vec![Term::product(1, x, y)]).prob_coeffs()
}

fn sub(lhs: &[Rational], rhs: &[Rational]) -> Vec<Rational> {
    lhs.iter().zip(rhs).map(|(a, b)| a - b).collect()
}

/// Builds the exact LP over the 16 behavior entries for a perfect-correlation
/// configuration: non-negativity, per-pair normalisation, the eight
/// no-signaling equalities, the perfect (anti-)correlation constraints, and
/// (if enabled) the identical-devices symmetry.
pub fn build_randomness_lp(
    c: &PerfectCorrelationConstraints,
    objective: &[MarginalTerm],
    sense: Sense,
) -> LpProblem {
    build_randomness_lp_variant(
        c,
        objective,
        sense,
        LpIngredients {
            no_signaling: true,
            anticorrelation: true,
            correlation: true,
            outcome_flip: false,
            symmetry: c.symmetry_enabled,
        },
    )
}

/// [`build_randomness_lp`] with explicit control over which constraint
/// groups are included.
pub fn build_randomness_lp_variant(
    c: &PerfectCorrelationConstraints,
    objective: &[MarginalTerm],
    sense: Sense,
    ingredients: LpIngredients,
) -> LpProblem {
    let sc = Scenario::canonical();
    let mut constraints = Vec::new();
    // Normalisation per setting pair.
    for x in 0..2 {
        for y in 0..2 {
            let mut coeffs = vec![Rational::zero(); 16];
            for oa in 0..2 {
                for ob in 0..2 {
                    coeffs[sc.index(x, y, oa, ob)] = rat_int(1);
                }
            }
            constraints.push(Constraint::new(coeffs, Relation::Eq, rat_int(1)));
        }
    }
    if ingredients.no_signaling {
        for party in [Party::One, Party::Two] {
            for setting in 0..2 {
                for outcome in 0..2 {
                    let lhs = marginal_probability_coeffs(party, setting, 0, outcome);
                    let rhs = marginal_probability_coeffs(party, setting, 1, outcome);
                    constraints.push(Constraint::new(sub(&lhs, &rhs), Relation::Eq, rat_int(0)));
                }
            }
        }
    }
    if ingredients.anticorrelation {
        for &(x, y) in &c.anticorrelated_pairs {
            constraints.push(Constraint::new(product_coeffs(x, y), Relation::Eq, rat_int(-1)));
        }
    }
    if ingredients.correlation {
        for &(x, y) in &c.correlated_pairs {
            constraints.push(Constraint::new(product_coeffs(x, y), Relation::Eq, rat_int(1)));
        }
    }
    if ingredients.outcome_flip {
        // Measuring -u is measuring u with outcomes swapped:
        // P(-|u) = P(+|-u) per party (the complementary identity follows
        // from normalisation but is included for symmetry of the system).
        for party in [Party::One, Party::Two] {
            let (su, sm) = match party {
                Party::One => (c.party1_setting(DirectionTag::U), c.party1_setting(DirectionTag::MinusU)),
                Party::Two => (c.party2_setting(DirectionTag::U), c.party2_setting(DirectionTag::MinusU)),
            };
            for (o_u, o_m) in [(1usize, 0usize), (0, 1)] {
                let lhs = marginal_probability_coeffs(party, su, 0, o_u);
                let rhs = marginal_probability_coeffs(party, sm, 0, o_m);
                constraints.push(Constraint::new(sub(&lhs, &rhs), Relation::Eq, rat_int(0)));
            }
        }
    }
    if ingredients.symmetry {
        // Identical devices: P(A=+|t) = P(B=+|t) for both direction tags.
        for tag in [DirectionTag::U, DirectionTag::MinusU] {
            let s1 = c.party1_setting(tag);
            let s2 = c.party2_setting(tag);
            let lhs = marginal_probability_coeffs(Party::One, s1, 0, 0);
            let rhs = marginal_probability_coeffs(Party::Two, s2, 0, 0);
            constraints.push(Constraint::new(sub(&lhs, &rhs), Relation::Eq, rat_int(0)));
        }
    }
    LpProblem::new(sense, expectation_objective(objective), constraints)
}

// ---------------------------------------------------------------------------
// LP sub-result runner
// ---------------------------------------------------------------------------

fn run_lp(
    builder: &mut CertBuilder,
    description: impl Into<String>,
    problem: &LpProblem,
    sense_label: &'static str,
    expected: Rational,
    witnesses: &mut Vec<Vec<Rational>>,
) {
    match simplex_solve(problem) {
        Ok(LpResult::Optimal { optimum, witness }) => {
            let feasible = check_witness(problem, &witness);
            let recomputed: Rational =
                problem.objective.iter().zip(&witness).map(|(c, x)| c * x).sum();
            let pass = feasible && recomputed == optimum && optimum == expected;
            witnesses.push(witness.clone());
            builder.push(
                description,
                SubOutcome::Lp(LpReport {
                    sense: sense_label,
                    optimum,
                    expected,
                    witness: Some(witness),
                    pass,
                }),
            );
        }
        Ok(other) => {
            builder.push(
                format!("{} (solver returned {:?})", description.into(), kind_of(&other)),
                SubOutcome::Check(CheckReport {
                    detail: "expected an optimal solution".into(),
                    pass: false,
                }),
            );
        }
        Err(e) => {
            builder.push(
                description,
                SubOutcome::Check(CheckReport { detail: format!("LP error: {e}"), pass: false }),
            );
        }
    }
}

fn kind_of(result: &LpResult) -> &'static str {
    match result {
        LpResult::Optimal { .. } => "optimal",
        LpResult::Infeasible { .. } => "infeasible",
        LpResult::Unbounded => "unbounded",
    }
}

fn behavior_from_witness(witness: &[Rational]) -> Behavior {
    Behavior::new(Scenario::canonical(), NumericMode::Exact, witness.to_vec())
        .expect("witness has 16 entries")
}

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

/// The marginal-product inequalities bind nothing: every one of them reaches
/// its bound on the 256 deterministic vertices without ever exceeding it,
/// and sampled behaviors (signaling included) never violate them.
pub fn verify_roy_singh_trivial(sample: &SampleConfig) -> TheoremCertificate {
    let catalog = Catalog::shared();
    let mut builder = CertBuilder::new(ClaimId::RoySinghTrivial);
    for ineq in &catalog.roy_singh {
        let (optimum, argmax) = max_over(ineq, VertexKind::General);
        let pass = optimum == ineq.bound && !argmax.is_empty();
        builder.push(
            format!("{}: maximum over all 256 deterministic vertices equals the bound and is attained", ineq.variant_id),
            SubOutcome::Bound(BoundReport {
                variant_id: ineq.variant_id.clone(),
                polytope: "general",
                optimum,
                expected: ineq.bound.clone(),
                argmax_count: argmax.len(),
                pass,
            }),
        );
    }
    // Spot check: the all-plus vertex saturates <ab> + <a>^b - <b>^a <= 1.
    let spot = catalog.find(crate::catalog::Family::RoySingh, "rs:ab:0").expect("catalog entry");
    let value = spot.evaluate(&local_vertex([0, 0, 0, 0])).expect("canonical").value;
    builder.push(
        "rs:ab:0 saturates on the all-plus deterministic vertex",
        SubOutcome::Value(ValueReport { pass: value == spot.bound, value, expected: spot.bound.clone() }),
    );
    // Sampled universality, signaling allowed.
    let mut rng = crate::sample::rng_from_seed(sample.seed);
    let mut violations = 0usize;
    for _ in 0..sample.count {
        let b = crate::sample::random_behavior(&mut rng);
        for ineq in &catalog.roy_singh {
            if !ineq.evaluate(&b).expect("canonical").satisfied {
                violations += 1;
            }
        }
    }
    builder.push(
        format!("{} random behaviors (signaling allowed) never violate the family", sample.count),
        SubOutcome::Sampled(SampledReport {
            count: sample.count,
            seed: sample.seed,
            violations,
            pass: violations == 0,
        }),
    );
    builder.finish()
}

/// The four- and six-term no-signaling families are bounded by exactly 2 on
/// the 24 no-signaling vertices, while signaling vertices reach 4 and 6,
/// the printed protocols among them.
pub fn verify_ns_families() -> TheoremCertificate {
    let catalog = Catalog::shared();
    let mut builder = CertBuilder::new(ClaimId::NsFamiliesBound);
    for (family, general_expected) in
        [(&catalog.ns4, rat_int(4)), (&catalog.ns6, rat_int(6))]
    {
        for ineq in family.iter() {
            let (ns_max, ns_argmax) = max_over(ineq, VertexKind::NoSignaling);
            builder.push(
                format!("{}: maximum over the 24 no-signaling vertices is 2", ineq.variant_id),
                SubOutcome::Bound(BoundReport {
                    variant_id: ineq.variant_id.clone(),
                    polytope: "no_signaling",
                    pass: ns_max == rat_int(2),
                    optimum: ns_max,
                    expected: rat_int(2),
                    argmax_count: ns_argmax.len(),
                }),
            );
            let (gen_max, gen_argmax) = max_over(ineq, VertexKind::General);
            builder.push(
                format!("{}: maximum over the 256 general vertices", ineq.variant_id),
                SubOutcome::Bound(BoundReport {
                    variant_id: ineq.variant_id.clone(),
                    polytope: "general",
                    pass: gen_max == general_expected,
                    optimum: gen_max,
                    expected: general_expected.clone(),
                    argmax_count: gen_argmax.len(),
                }),
            );
        }
    }
    let ns4_example = catalog.find(crate::catalog::Family::Ns4, NS4_PRINTED_EXAMPLE).expect("entry");
    let value = ns4_example.evaluate(&signaling_protocol_4()).expect("canonical").value;
    builder.push(
        "the one-way signaling protocol reaches 4 on the printed four-term inequality",
        SubOutcome::Value(ValueReport { pass: value == rat_int(4), value, expected: rat_int(4) }),
    );
    let ns6_seed = catalog.find(crate::catalog::Family::Ns6, NS6_SEED).expect("entry");
    let value = ns6_seed.evaluate(&signaling_protocol_6()).expect("canonical").value;
    builder.push(
        "the two-sided signaling protocol reaches 6 on the printed six-term inequality",
        SubOutcome::Value(ValueReport { pass: value == rat_int(6), value, expected: rat_int(6) }),
    );
    builder.finish()
}

/// Facet analysis: every CHSH variant is saturated by 8 affinely independent
/// local vertices (a facet of the 8-dimensional polytope); the trivial
/// bounds are valid for every deterministic vertex.
pub fn verify_chsh_facets() -> TheoremCertificate {
    let catalog = Catalog::shared();
    let sets = VertexSets::shared();
    let mut builder = CertBuilder::new(ClaimId::ChshAreFacets);
    for ineq in &catalog.chsh {
        match facet_saturation_rank(ineq, &sets.local) {
            FacetStatus::Valid { saturating_count, affine_rank, is_facet_of_dim8, .. } => {
                let pass = saturating_count == 8 && affine_rank == POLYTOPE_DIM && is_facet_of_dim8;
                builder.push(
                    format!("{}: saturation affine rank over the local vertices", ineq.variant_id),
                    SubOutcome::Rank(RankReport {
                        variant_id: ineq.variant_id.clone(),
                        polytope: "local",
                        saturating_count,
                        affine_rank,
                        expected_rank: POLYTOPE_DIM,
                        is_facet_of_dim8,
                        pass,
                    }),
                );
            }
            FacetStatus::NotValidForPolytope { violator, value } => {
                builder.push(
                    format!("{}: exceeded by local vertex {violator}", ineq.variant_id),
                    SubOutcome::Value(ValueReport {
                        pass: false,
                        value,
                        expected: ineq.bound.clone(),
                    }),
                );
            }
        }
    }
    for ineq in &catalog.trivial {
        let (optimum, argmax) = max_over(ineq, VertexKind::General);
        builder.push(
            format!("{}: valid for every deterministic vertex", ineq.variant_id),
            SubOutcome::Bound(BoundReport {
                variant_id: ineq.variant_id.clone(),
                polytope: "general",
                pass: optimum <= ineq.bound,
                optimum,
                expected: ineq.bound.clone(),
                argmax_count: argmax.len(),
            }),
        );
    }
    builder.finish()
}

/// The no-signaling families are not facets: each inequality is saturated by
/// only 7 affinely independent no-signaling vertices.
pub fn verify_ns_not_facets() -> TheoremCertificate {
    let catalog = Catalog::shared();
    let sets = VertexSets::shared();
    let mut builder = CertBuilder::new(ClaimId::NsFamiliesNotFacets);
    for ineq in catalog.ns4.iter().chain(&catalog.ns6) {
        match facet_saturation_rank(ineq, &sets.no_signaling) {
            FacetStatus::Valid { saturating_count, affine_rank, is_facet_of_dim8, .. } => {
                let pass = affine_rank == 7 && !is_facet_of_dim8;
                builder.push(
                    format!("{}: saturation affine rank over the no-signaling vertices", ineq.variant_id),
                    SubOutcome::Rank(RankReport {
                        variant_id: ineq.variant_id.clone(),
                        polytope: "no_signaling",
                        saturating_count,
                        affine_rank,
                        expected_rank: 7,
                        is_facet_of_dim8,
                        pass,
                    }),
                );
            }
            FacetStatus::NotValidForPolytope { violator, value } => {
                builder.push(
                    format!("{}: exceeded by no-signaling vertex {violator}", ineq.variant_id),
                    SubOutcome::Value(ValueReport {
                        pass: false,
                        value,
                        expected: ineq.bound.clone(),
                    }),
                );
            }
        }
    }
    builder.finish()
}

/// Both facet certificates: the CHSH variants are facets, the no-signaling
/// families are not.
pub fn verify_facet_ranks() -> Vec<TheoremCertificate> {
    vec![verify_chsh_facets(), verify_ns_not_facets()]
}

fn result2_combination_holds(witness: &[Rational]) -> bool {
    // The rearranged non-negativity combination
    // <ab> + <a'b'> + <a>^b + <b>^a + <a'>^b' + <b'>^a' + 2 >= 0,
    // which is four times the sum of two joint probabilities.
    let b = behavior_from_witness(witness);
    let form = ExpectationForm::new(vec![
        Term::product(1, 0, 0),
        Term::product(1, 1, 1),
        Term::marginal(1, Party::One, 0, 0),
        Term::marginal(1, Party::Two, 0, 0),
        Term::marginal(1, Party::One, 1, 1),
        Term::marginal(1, Party::Two, 1, 1),
        Term::constant(rat_int(2)),
    ]);
    !form.evaluate(&b).expect("canonical").is_negative()
}

/// The randomness theorem: perfect (anti-)correlations plus no-signaling
/// force same-direction marginals to cancel and each party's marginals to be
/// odd in the direction; adding the identical-devices symmetry pins every
/// marginal probability to exactly 1/2. Without the symmetry a maximally
/// biased witness exists, and the same-pair cancellation survives even
/// without the no-signaling equalities (it only needs anticorrelation).
pub fn verify_randomness_theorem() -> TheoremCertificate {
    let mut builder = CertBuilder::new(ClaimId::RandomnessTheorem);
    let mut witnesses: Vec<Vec<Rational>> = Vec::new();
    let free = PerfectCorrelationConstraints::standard(false);
    let symmetric = PerfectCorrelationConstraints::standard(true);

    let u1 = MarginalTerm::unit(Party::One, 0, 0);
    let u2 = MarginalTerm::unit(Party::Two, 0, 0);
    let minus_u1 = MarginalTerm::unit(Party::One, 1, 0);

    // (i) Same-direction marginals cancel: <u>_I + <u>_II = 0.
    let sum_obj = [u1.clone(), u2.clone()];
    for (sense, label) in [(Sense::Maximize, "max"), (Sense::Minimize, "min")] {
        let lp = build_randomness_lp(&free, &sum_obj, sense);
        run_lp(
            &mut builder,
            format!("{label} <u>_I + <u>_II under no-signaling and perfect correlations"),
            &lp,
            label,
            rat_int(0),
            &mut witnesses,
        );
    }
    // (ii) Oddness: <u>_I + <-u>_I = 0.
    let odd_obj = [u1.clone(), minus_u1.clone()];
    for (sense, label) in [(Sense::Maximize, "max"), (Sense::Minimize, "min")] {
        let lp = build_randomness_lp(&free, &odd_obj, sense);
        run_lp(
            &mut builder,
            format!("{label} <u>_I + <-u>_I under no-signaling and perfect correlations"),
            &lp,
            label,
            rat_int(0),
            &mut witnesses,
        );
    }
    // (iv) With identical devices every marginal expectation is pinned to 0.
    let marginals = [
        ("<u>_I", MarginalTerm::unit(Party::One, 0, 0)),
        ("<-u>_I", MarginalTerm::unit(Party::One, 1, 0)),
        ("<u>_II", MarginalTerm::unit(Party::Two, 0, 0)),
        ("<-u>_II", MarginalTerm::unit(Party::Two, 1, 0)),
    ];
    let mut symmetric_witnesses: Vec<Vec<Rational>> = Vec::new();
    for (name, term) in &marginals {
        for (sense, label) in [(Sense::Maximize, "max"), (Sense::Minimize, "min")] {
            let lp = build_randomness_lp(&symmetric, std::slice::from_ref(term), sense);
            let before = witnesses.len();
            run_lp(
                &mut builder,
                format!("{label} {name} with identical devices"),
                &lp,
                label,
                rat_int(0),
                &mut witnesses,
            );
            symmetric_witnesses.extend(witnesses[before..].iter().cloned());
        }
    }
    // Witness marginal probabilities are uniform.
    if let Some(w) = symmetric_witnesses.first() {
        let b = behavior_from_witness(w);
        let uniform = (0..2).all(|s| {
            [Party::One, Party::Two].into_iter().all(|party| {
                b.marginal(party, s, 0).expect("canonical")
                    == vec![Rational::new(1.into(), 2.into()); 2]
            })
        });
        builder.push(
            "identical-devices witness has every marginal probability equal to 1/2",
            SubOutcome::Check(CheckReport {
                detail: "P(+|t) = P(-|t) = 1/2 for all settings of both parties".into(),
                pass: uniform,
            }),
        );
    }
    // Without the symmetry the marginals are unconstrained: a witness with
    // expectation 1 exists.
    let lp = build_randomness_lp(&free, std::slice::from_ref(&u1), Sense::Maximize);
    run_lp(
        &mut builder,
        "max <u>_I without the identical-devices symmetry",
        &lp,
        "max",
        rat_int(1),
        &mut witnesses,
    );
    // Attribution: dropping the no-signaling equalities (keeping perfect
    // correlations) still cancels the same-pair tagged marginals; that part
    // is a consequence of perfect anticorrelation alone.
    let same_pair_obj = [u1.clone(), u2.clone()];
    for (sense, label) in [(Sense::Maximize, "max"), (Sense::Minimize, "min")] {
        let lp = build_randomness_lp_variant(
            &free,
            &same_pair_obj,
            sense,
            LpIngredients {
                no_signaling: false,
                anticorrelation: true,
                correlation: true,
                outcome_flip: false,
                symmetry: false,
            },
        );
        run_lp(
            &mut builder,
            format!("{label} <u>_I + <u>_II with the no-signaling equalities dropped (anticorrelation alone)"),
            &lp,
            label,
            rat_int(0),
            &mut witnesses,
        );
    }
    // (iii) The non-negativity combination holds at every returned point.
    let all_hold = witnesses.iter().all(|w| result2_combination_holds(w));
    builder.push(
        "the non-negativity combination stays nonnegative at every returned witness",
        SubOutcome::Check(CheckReport {
            detail: format!("checked {} witnesses", witnesses.len()),
            pass: all_hold,
        }),
    );
    builder.finish()
}

/// The outcome-flip variant: identifying measuring `-u` with measuring `u`
/// under swapped outcomes, perfect correlation at opposite directions alone
/// (no anticorrelation constraint) still forces uniform marginals under the
/// identical-devices symmetry.
pub fn verify_gisin_variant() -> TheoremCertificate {
    let mut builder = CertBuilder::new(ClaimId::GisinVariant);
    let mut witnesses: Vec<Vec<Rational>> = Vec::new();
    let symmetric = PerfectCorrelationConstraints::standard(true);
    let free = PerfectCorrelationConstraints::standard(false);

    let flip_ingredients = LpIngredients {
        no_signaling: true,
        anticorrelation: false,
        correlation: true,
        outcome_flip: true,
        symmetry: true,
    };
    let marginals = [
        ("<u>_I", MarginalTerm::unit(Party::One, 0, 0)),
        ("<-u>_I", MarginalTerm::unit(Party::One, 1, 0)),
        ("<u>_II", MarginalTerm::unit(Party::Two, 0, 0)),
        ("<-u>_II", MarginalTerm::unit(Party::Two, 1, 0)),
    ];
    for (name, term) in &marginals {
        for (sense, label) in [(Sense::Maximize, "max"), (Sense::Minimize, "min")] {
            let lp = build_randomness_lp_variant(
                &symmetric,
                std::slice::from_ref(term),
                sense,
                flip_ingredients,
            );
            run_lp(
                &mut builder,
                format!("{label} {name} with the outcome-flip identification and opposite-direction correlation"),
                &lp,
                label,
                rat_int(0),
                &mut witnesses,
            );
        }
    }
    // Without the flip identification (and still without anticorrelation)
    // the conclusion fails: a maximally biased witness exists.
    let no_flip = LpIngredients {
        no_signaling: true,
        anticorrelation: false,
        correlation: true,
        outcome_flip: false,
        symmetry: true,
    };
    let u1 = MarginalTerm::unit(Party::One, 0, 0);
    let lp = build_randomness_lp_variant(&symmetric, std::slice::from_ref(&u1), Sense::Maximize, no_flip);
    run_lp(
        &mut builder,
        "max <u>_I without the flip identification and without anticorrelation (conclusion fails, as expected)",
        &lp,
        "max",
        rat_int(1),
        &mut witnesses,
    );
    // The flip identification alone already makes each party's marginal odd.
    let flip_only = LpIngredients {
        no_signaling: false,
        anticorrelation: false,
        correlation: false,
        outcome_flip: true,
        symmetry: false,
    };
    let odd_obj = [MarginalTerm::unit(Party::One, 0, 0), MarginalTerm::unit(Party::One, 1, 0)];
    for (sense, label) in [(Sense::Maximize, "max"), (Sense::Minimize, "min")] {
        let lp = build_randomness_lp_variant(&free, &odd_obj, sense, flip_only);
        run_lp(
            &mut builder,
            format!("{label} <u>_I + <-u>_I under the flip identification alone"),
            &lp,
            label,
            rat_int(0),
            &mut witnesses,
        );
    }
    builder.finish()
}

/// Runs every verifier; the order is fixed for reproducible output.
pub fn verify_all(sample: &SampleConfig) -> Vec<TheoremCertificate> {
    let mut certificates = vec![verify_roy_singh_trivial(sample), verify_ns_families()];
    certificates.extend(verify_facet_ranks());
    certificates.push(verify_randomness_theorem());
    certificates.push(verify_gisin_variant());
    certificates
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_sample() -> SampleConfig {
        SampleConfig { count: 300, seed: 0xBE11 }
    }

    #[test]
    fn roy_singh_confirmed() {
        let cert = verify_roy_singh_trivial(&small_sample());
        assert!(cert.confirmed(), "{:?}", cert.verdict);
        assert_eq!(cert.claim_id, ClaimId::RoySinghTrivial);
        // 16 per-inequality bounds + spot check + sampling.
        assert_eq!(cert.sub_results.len(), 18);
    }

    #[test]
    fn ns_families_confirmed() {
        let cert = verify_ns_families();
        assert!(cert.confirmed(), "{:?}", cert.verdict);
        // 46 inequalities, two bounds each, plus two protocol values.
        assert_eq!(cert.sub_results.len(), 46 * 2 + 2);
    }

    #[test]
    fn facet_ranks_confirmed() {
        let certs = verify_facet_ranks();
        assert_eq!(certs.len(), 2);
        assert_eq!(certs[0].claim_id, ClaimId::ChshAreFacets);
        assert_eq!(certs[1].claim_id, ClaimId::NsFamiliesNotFacets);
        for cert in &certs {
            assert!(cert.confirmed(), "{:?}: {:?}", cert.claim_id, cert.verdict);
        }
        assert_eq!(certs[1].sub_results.len(), 46);
    }

    #[test]
    fn randomness_theorem_confirmed() {
        let cert = verify_randomness_theorem();
        assert!(cert.confirmed(), "{:?}", cert.verdict);
    }

    #[test]
    fn gisin_variant_confirmed() {
        let cert = verify_gisin_variant();
        assert!(cert.confirmed(), "{:?}", cert.verdict);
    }

    #[test]
    fn randomness_results_stable_under_direction_relabeling() {
        // Swap which setting measures u on both sides; the optima must not
        // change.
        let swapped = PerfectCorrelationConstraints::with_directions(
            [DirectionTag::MinusU, DirectionTag::U],
            [DirectionTag::MinusU, DirectionTag::U],
            false,
        )
        .unwrap();
        // <u>_I is now setting 1 of party 1.
        let u1 = MarginalTerm::unit(Party::One, swapped.party1_setting(DirectionTag::U), 0);
        let u2 = MarginalTerm::unit(Party::Two, swapped.party2_setting(DirectionTag::U), 0);
        for sense in [Sense::Maximize, Sense::Minimize] {
            let lp = build_randomness_lp(&swapped, &[u1.clone(), u2.clone()], sense);
            match simplex_solve(&lp).unwrap() {
                LpResult::Optimal { optimum, .. } => assert_eq!(optimum, rat_int(0)),
                other => panic!("expected optimal, got {other:?}"),
            }
        }
    }

    #[test]
    fn inconsistent_tags_are_rejected() {
        assert!(matches!(
            PerfectCorrelationConstraints::new(
                [DirectionTag::U, DirectionTag::U],
                [DirectionTag::U, DirectionTag::MinusU],
                vec![],
                vec![],
                false,
            ),
            Err(TagError::MissingDirection)
        ));
        assert!(matches!(
            PerfectCorrelationConstraints::new(
                [DirectionTag::U, DirectionTag::MinusU],
                [DirectionTag::U, DirectionTag::MinusU],
                vec![(0, 1)],
                vec![],
                false,
            ),
            Err(TagError::BadAnticorrelated(0, 1))
        ));
    }

    #[test]
    fn certificate_json_is_deterministic_and_skips_wall_time() {
        let cert = verify_gisin_variant();
        let one = cert.to_json();
        let again = verify_gisin_variant().to_json();
        assert_eq!(one, again);
        assert!(!one.contains("wall_time"));
        assert!(one.contains("\"claim_id\":\"gisin_variant\""));
    }
}
