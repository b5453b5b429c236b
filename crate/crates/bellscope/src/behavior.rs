//! Behaviors: joint conditional probability tables and their expectations.

use crate::rational::{rat, rat_int, Rational, RationalSum};
use crate::scenario::{OutcomeLabeling, Party, Scenario};
use num_traits::{One, Signed, Zero};

/// Numeric regime for constraint checks.
///
/// Exact mode is the default and the only mode the polytope and LP machinery
/// accepts; approximate mode exists for behaviors sourced from floating-point
/// quantum values, where normalisation and no-signaling hold only up to a
/// tolerance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericMode {
    Exact,
    Approx { tolerance: Rational },
}

impl NumericMode {
    /// Default tolerance for approximate mode: 1/10^9.
    pub fn default_tolerance() -> Rational {
        rat(1, 1_000_000_000)
    }

    pub fn approx_default() -> Self {
        NumericMode::Approx { tolerance: Self::default_tolerance() }
    }

    fn tolerance(&self) -> Rational {
        match self {
            NumericMode::Exact => Rational::zero(),
            NumericMode::Approx { tolerance } => tolerance.clone(),
        }
    }
}

/// A behavior: one joint probability distribution `p[a][b][A][B]` per pair of
/// settings, with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    mode: NumericMode,
    p: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BehaviorError {
    #[error("table has {got} entries but the scenario requires {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },
    #[error("operation requires the canonical (2,2;2,2) scenario")]
    NotCanonical,
    #[error("operation requires dichotomic outcomes")]
    NotDichotomic,
    #[error("mixture weights must be a convex combination (nonnegative, summing to 1)")]
    BadMixture,
    #[error("behaviors in a mixture must share scenario and mode")]
    MixedScenarios,
}

/// A single constraint violation found by [`Behavior::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintViolation {
    /// `p[a][b][oa][ob]` is negative.
    NegativeEntry { a: usize, b: usize, oa: usize, ob: usize, value: Rational },
    /// The block for settings `(a, b)` does not sum to 1.
    Normalization { a: usize, b: usize, total: Rational },
}

impl std::fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstraintViolation::NegativeEntry { a, b, oa, ob, value } => {
                write!(f, "negative entry p[{a}][{b}][{oa}][{ob}] = {value}")
            }
            ConstraintViolation::Normalization { a, b, total } => {
                write!(f, "block ({a},{b}) sums to {total}, expected 1")
            }
        }
    }
}

/// Outcome of [`Behavior::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<ConstraintViolation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One violated no-signaling equality: the marginal of `party`'s `setting`
/// for `outcome` differs between far settings `far_low` and `far_high`.
#[derive(Debug, Clone, PartialEq)]
pub struct NsViolation {
    pub party: Party,
    pub setting: usize,
    pub outcome: usize,
    pub far_low: usize,
    pub far_high: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl std::fmt::Display for NsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (sym, far_party) = match self.party {
            Party::One => ("A", Party::Two),
            Party::Two => ("B", Party::One),
        };
        write!(
            f,
            "P({sym}={o}|{s})^{f1} = {lhs} differs from P({sym}={o}|{s})^{f2} = {rhs}",
            o = OutcomeLabeling::outcome_symbol(self.outcome),
            s = OutcomeLabeling::setting_symbol(self.party, self.setting),
            f1 = OutcomeLabeling::setting_symbol(far_party, self.far_low),
            f2 = OutcomeLabeling::setting_symbol(far_party, self.far_high),
            lhs = self.lhs,
            rhs = self.rhs,
        )
    }
}

/// Outcome of [`Behavior::check_no_signaling`].
#[derive(Debug, Clone, PartialEq)]
pub struct NsReport {
    pub violations: Vec<NsViolation>,
}

impl NsReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The 12-component expectation projection of a canonical behavior: the four
/// product expectations and the eight far-setting-tagged marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationSummary {
    /// `<ab>, <ab'>, <a'b>, <a'b'>` (party-1 setting major).
    pub products: [Rational; 4],
    /// `<a>^b, <a>^b', <a'>^b, <a'>^b'` (setting major, far setting minor).
    pub marginals_party1: [Rational; 4],
    /// `<b>^a, <b>^a', <b'>^a, <b'>^a'` (setting major, far setting minor).
    pub marginals_party2: [Rational; 4],
}

impl ExpectationSummary {
    pub fn product(&self, x: usize, y: usize) -> &Rational {
        &self.products[x * 2 + y]
    }

    pub fn marginal(&self, party: Party, setting: usize, far: usize) -> &Rational {
        match party {
            Party::One => &self.marginals_party1[setting * 2 + far],
            Party::Two => &self.marginals_party2[setting * 2 + far],
        }
    }
}

impl Behavior {
    /// Builds a behavior from a flat table in `[a][b][A][B]` order.
    ///
    /// Only the table shape is enforced here; probabilistic constraints are
    /// reported by [`Behavior::validate`] so that callers can distinguish
    /// structural errors from constraint violations.
    pub fn new(
        scenario: Scenario,
        mode: NumericMode,
        p: Vec<Rational>,
    ) -> Result<Self, BehaviorError> {
        let expected = scenario.table_len();
        if p.len() != expected {
            return Err(BehaviorError::DimensionMismatch { expected, got: p.len() });
        }
        Ok(Behavior { scenario, mode, p })
    }

    /// Canonical-scenario behavior from an entry function `(a, b, A, B)`.
    pub fn from_fn_canonical(
        mode: NumericMode,
        f: impl Fn(usize, usize, usize, usize) -> Rational,
    ) -> Self {
        let scenario = Scenario::canonical();
        let mut p = Vec::with_capacity(16);
        for a in 0..2 {
            for b in 0..2 {
                for oa in 0..2 {
                    for ob in 0..2 {
                        p.push(f(a, b, oa, ob));
                    }
                }
            }
        }
        Behavior { scenario, mode, p }
    }

    /// The uniform behavior: every entry 1/4 (canonical scenario).
    pub fn uniform() -> Self {
        Behavior::from_fn_canonical(NumericMode::Exact, |_, _, _, _| rat(1, 4))
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn mode(&self) -> &NumericMode {
        &self.mode
    }

    pub fn table(&self) -> &[Rational] {
        &self.p
    }

    /// The 16-entry table of a canonical behavior.
    pub fn flat16(&self) -> Result<&[Rational], BehaviorError> {
        if !self.scenario.is_canonical() {
            return Err(BehaviorError::NotCanonical);
        }
        Ok(&self.p)
    }

    pub fn entry(&self, a: usize, b: usize, oa: usize, ob: usize) -> &Rational {
        &self.p[self.scenario.index(a, b, oa, ob)]
    }

    /// Reinterprets the table under a different numeric mode.
    pub fn with_mode(mut self, mode: NumericMode) -> Self {
        self.mode = mode;
        self
    }

    fn check_setting(&self, party: Party, idx: usize) -> Result<(), BehaviorError> {
        let max = match party {
            Party::One => self.scenario.settings.0,
            Party::Two => self.scenario.settings.1,
        };
        if idx >= max {
            return Err(BehaviorError::IndexOutOfRange {
                what: format!("setting {idx} for {party:?} (max {max})"),
            });
        }
        Ok(())
    }

    /// Checks non-negativity and per-block normalisation, reporting every
    /// violation (exactly in exact mode, within tolerance otherwise).
    pub fn validate(&self) -> ValidationReport {
        let tol = self.mode.tolerance();
        let mut violations = Vec::new();
        let (sa, sb) = self.scenario.settings;
        let (oa_n, ob_n) = self.scenario.outcomes;
        for a in 0..sa {
            for b in 0..sb {
                let mut total = Rational::zero();
                for oa in 0..oa_n {
                    for ob in 0..ob_n {
                        let v = self.entry(a, b, oa, ob);
                        if *v < -tol.clone() {
                            violations.push(ConstraintViolation::NegativeEntry {
                                a,
                                b,
                                oa,
                                ob,
                                value: v.clone(),
                            });
                        }
                        total += v;
                    }
                }
                if (total.clone() - Rational::one()).abs() > tol {
                    violations.push(ConstraintViolation::Normalization { a, b, total });
                }
            }
        }
        ValidationReport { violations }
    }

    /// The outcome distribution `P(.|setting)^far` of one party given its
    /// setting, tagged by the other party's setting.
    pub fn marginal(
        &self,
        party: Party,
        setting: usize,
        far_setting: usize,
    ) -> Result<Vec<Rational>, BehaviorError> {
        self.check_setting(party, setting)?;
        self.check_setting(
            match party {
                Party::One => Party::Two,
                Party::Two => Party::One,
            },
            far_setting,
        )?;
        let (oa_n, ob_n) = self.scenario.outcomes;
        match party {
            Party::One => {
                let mut out = vec![Rational::zero(); oa_n];
                for (oa, slot) in out.iter_mut().enumerate() {
                    for ob in 0..ob_n {
                        *slot += self.entry(setting, far_setting, oa, ob);
                    }
                }
                Ok(out)
            }
            Party::Two => {
                let mut out = vec![Rational::zero(); ob_n];
                for (ob, slot) in out.iter_mut().enumerate() {
                    for oa in 0..oa_n {
                        *slot += self.entry(far_setting, setting, oa, ob);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Product expectation `<xy> = sum_{A,B} A·B·P(A,B|x,y)` for one pair of
    /// settings. Requires dichotomic outcomes.
    pub fn product_expectation(
        &self,
        a_setting: usize,
        b_setting: usize,
    ) -> Result<Rational, BehaviorError> {
        if self.scenario.outcomes != (2, 2) {
            return Err(BehaviorError::NotDichotomic);
        }
        self.check_setting(Party::One, a_setting)?;
        self.check_setting(Party::Two, b_setting)?;
        let mut sum = RationalSum::new();
        for oa in 0..2 {
            for ob in 0..2 {
                let sign = OutcomeLabeling::value(oa) * OutcomeLabeling::value(ob);
                sum.add_signed(sign, self.entry(a_setting, b_setting, oa, ob));
            }
        }
        Ok(sum.finish())
    }

    /// Tagged marginal expectation `<x>^y = sum_A A·P(A|x)^y` (or the party-2
    /// analogue). Requires dichotomic outcomes.
    pub fn marginal_expectation(
        &self,
        party: Party,
        setting: usize,
        far_setting: usize,
    ) -> Result<Rational, BehaviorError> {
        if self.scenario.outcomes != (2, 2) {
            return Err(BehaviorError::NotDichotomic);
        }
        self.check_setting(party, setting)?;
        let far_party = match party {
            Party::One => Party::Two,
            Party::Two => Party::One,
        };
        self.check_setting(far_party, far_setting)?;
        let mut sum = RationalSum::new();
        for own in 0..2 {
            for other in 0..2 {
                let (oa, ob) = match party {
                    Party::One => (own, other),
                    Party::Two => (other, own),
                };
                let (a, b) = match party {
                    Party::One => (setting, far_setting),
                    Party::Two => (far_setting, setting),
                };
                sum.add_signed(OutcomeLabeling::value(own), self.entry(a, b, oa, ob));
            }
        }
        Ok(sum.finish())
    }

    /// Projects a canonical behavior onto its 12 expectation components.
    pub fn project_expectations(&self) -> Result<ExpectationSummary, BehaviorError> {
        if !self.scenario.is_canonical() {
            return Err(BehaviorError::NotCanonical);
        }
        let mut products = [(); 4].map(|_| Rational::zero());
        let mut m1 = [(); 4].map(|_| Rational::zero());
        let mut m2 = [(); 4].map(|_| Rational::zero());
        for x in 0..2 {
            for y in 0..2 {
                products[x * 2 + y] = self.product_expectation(x, y)?;
            }
        }
        for s in 0..2 {
            for far in 0..2 {
                m1[s * 2 + far] = self.marginal_expectation(Party::One, s, far)?;
                m2[s * 2 + far] = self.marginal_expectation(Party::Two, s, far)?;
            }
        }
        Ok(ExpectationSummary { products, marginals_party1: m1, marginals_party2: m2 })
    }

    /// The 4-vector `(<ab>, <ab'>, <a'b>, <a'b'>)` of product expectations.
    pub fn product_projection(&self) -> Result<[Rational; 4], BehaviorError> {
        Ok(self.project_expectations()?.products)
    }

    /// Checks the no-signaling marginal equalities, listing every violated
    /// one. In the canonical scenario this is the standard set of eight
    /// equalities (two settings times two outcomes per party).
    pub fn check_no_signaling(&self) -> NsReport {
        let tol = self.mode.tolerance();
        let mut violations = Vec::new();
        let (sa, sb) = self.scenario.settings;
        let parties = [(Party::One, sa, sb), (Party::Two, sb, sa)];
        for (party, own_settings, far_settings) in parties {
            for setting in 0..own_settings {
                // Compare every far setting against far setting 0.
                let base = self.marginal(party, setting, 0).expect("indices in range");
                for far in 1..far_settings {
                    let other = self.marginal(party, setting, far).expect("indices in range");
                    for (outcome, (lhs, rhs)) in base.iter().zip(&other).enumerate() {
                        if (lhs - rhs).abs() > tol {
                            violations.push(NsViolation {
                                party,
                                setting,
                                outcome,
                                far_low: 0,
                                far_high: far,
                                lhs: lhs.clone(),
                                rhs: rhs.clone(),
                            });
                        }
                    }
                }
            }
        }
        NsReport { violations }
    }

    pub fn is_no_signaling(&self) -> bool {
        self.check_no_signaling().ok()
    }

    /// Largest absolute difference between any two marginals that
    /// no-signaling requires to be equal; zero iff no-signaling holds.
    pub fn signaling_gap(&self) -> Rational {
        let mut gap = Rational::zero();
        let (sa, sb) = self.scenario.settings;
        let parties = [(Party::One, sa, sb), (Party::Two, sb, sa)];
        for (party, own_settings, far_settings) in parties {
            for setting in 0..own_settings {
                for far_low in 0..far_settings {
                    let low = self.marginal(party, setting, far_low).expect("in range");
                    for far_high in (far_low + 1)..far_settings {
                        let high = self.marginal(party, setting, far_high).expect("in range");
                        for (l, h) in low.iter().zip(&high) {
                            let d = (l - h).abs();
                            if d > gap {
                                gap = d;
                            }
                        }
                    }
                }
            }
        }
        gap
    }

    /// Exact convex combination of behaviors sharing a scenario and mode.
    pub fn mix(parts: &[(Rational, &Behavior)]) -> Result<Behavior, BehaviorError> {
        let (_, first) = parts.first().ok_or(BehaviorError::BadMixture)?;
        let mut total = Rational::zero();
        let mut sums: Vec<RationalSum> = vec![RationalSum::new(); first.p.len()];
        for (w, beh) in parts {
            if beh.scenario != first.scenario || beh.mode != first.mode {
                return Err(BehaviorError::MixedScenarios);
            }
            if w.is_negative() {
                return Err(BehaviorError::BadMixture);
            }
            total += w;
            for (slot, v) in sums.iter_mut().zip(&beh.p) {
                slot.add_mul(w, v);
            }
        }
        if !total.is_one() {
            return Err(BehaviorError::BadMixture);
        }
        let table = sums.into_iter().map(RationalSum::finish).collect();
        Ok(Behavior { scenario: first.scenario, mode: first.mode.clone(), p: table })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertices;

    fn pr_box() -> Behavior {
        vertices::pr_box_canonical()
    }

    #[test]
    fn pr_box_is_valid() {
        assert!(pr_box().validate().ok());
    }

    #[test]
    fn uniform_is_valid() {
        assert!(Behavior::uniform().validate().ok());
    }

    #[test]
    fn negative_entry_is_reported_at_its_index() {
        // One entry -1/4, same block adjusted to keep the sum at 1.
        let b = Behavior::from_fn_canonical(NumericMode::Exact, |a, bb, oa, ob| {
            if (a, bb) == (0, 0) {
                match (oa, ob) {
                    (0, 0) => rat(-1, 4),
                    (0, 1) => rat(3, 4),
                    _ => rat(1, 4),
                }
            } else {
                rat(1, 4)
            }
        });
        let report = b.validate();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(
            report.violations[0],
            ConstraintViolation::NegativeEntry { a: 0, b: 0, oa: 0, ob: 0, value: rat(-1, 4) }
        );
    }

    #[test]
    fn dimension_mismatch_is_a_structural_error() {
        let err = Behavior::new(Scenario::canonical(), NumericMode::Exact, vec![rat(1, 4); 15])
            .unwrap_err();
        assert_eq!(err, BehaviorError::DimensionMismatch { expected: 16, got: 15 });
    }

    #[test]
    fn pr_box_marginals_are_uniform() {
        let b = pr_box();
        for setting in 0..2 {
            for far in 0..2 {
                assert_eq!(b.marginal(Party::One, setting, far).unwrap(), vec![rat(1, 2); 2]);
                assert_eq!(b.marginal(Party::Two, setting, far).unwrap(), vec![rat(1, 2); 2]);
            }
        }
    }

    #[test]
    fn deterministic_vertex_marginal_is_a_point_mass() {
        // A[a] = +1 always, B[b] = +1 always.
        let b = vertices::local_vertex([0, 0, 0, 0]);
        assert_eq!(b.marginal(Party::One, 0, 0).unwrap(), vec![rat_int(1), rat_int(0)]);
    }

    #[test]
    fn one_way_signaling_marginal_depends_on_far_setting() {
        let b = vertices::signaling_protocol_4();
        // Party 2, setting b: B = +1 when measured with a, -1 with a'.
        assert_eq!(b.marginal(Party::Two, 0, 0).unwrap(), vec![rat_int(1), rat_int(0)]);
        assert_eq!(b.marginal(Party::Two, 0, 1).unwrap(), vec![rat_int(0), rat_int(1)]);
    }

    #[test]
    fn pr_box_product_expectations() {
        let b = pr_box();
        assert_eq!(b.product_expectation(0, 0).unwrap(), rat_int(1));
        assert_eq!(b.product_expectation(0, 1).unwrap(), rat_int(1));
        assert_eq!(b.product_expectation(1, 0).unwrap(), rat_int(1));
        assert_eq!(b.product_expectation(1, 1).unwrap(), rat_int(-1));
    }

    #[test]
    fn uniform_product_expectation_is_zero() {
        assert_eq!(Behavior::uniform().product_expectation(0, 0).unwrap(), rat_int(0));
    }

    #[test]
    fn pr_box_projection() {
        let s = pr_box().project_expectations().unwrap();
        assert_eq!(s.products, [rat_int(1), rat_int(1), rat_int(1), rat_int(-1)]);
        assert!(s.marginals_party1.iter().all(|m| m.is_zero()));
        assert!(s.marginals_party2.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn all_plus_vertex_projection() {
        let b = vertices::local_vertex([0, 0, 0, 0]);
        let s = b.project_expectations().unwrap();
        assert!(s.products.iter().all(|p| p.is_one()));
        assert!(s.marginals_party1.iter().all(|m| m.is_one()));
        assert!(s.marginals_party2.iter().all(|m| m.is_one()));
    }

    #[test]
    fn mixture_of_opposite_vertices_has_unit_products_and_zero_marginals() {
        let plus = vertices::local_vertex([0, 0, 0, 0]);
        let minus = vertices::local_vertex([1, 1, 1, 1]);
        let mixed = Behavior::mix(&[(rat(1, 2), &plus), (rat(1, 2), &minus)]).unwrap();
        let s = mixed.project_expectations().unwrap();
        assert!(s.products.iter().all(|p| p.is_one()));
        assert!(s.marginals_party1.iter().all(|m| m.is_zero()));
        assert!(s.marginals_party2.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn no_signaling_checks() {
        assert!(pr_box().is_no_signaling());
        assert!(vertices::local_vertex([0, 1, 1, 0]).is_no_signaling());
        let report = vertices::signaling_protocol_4().check_no_signaling();
        assert!(!report.ok());
        // The violated equalities are exactly the two party-2 marginals for
        // setting b (outcomes + and -).
        assert_eq!(report.violations.len(), 2);
        for v in &report.violations {
            assert_eq!(v.party, Party::Two);
            assert_eq!(v.setting, 0);
        }
    }

    #[test]
    fn signaling_gap_values() {
        assert_eq!(pr_box().signaling_gap(), rat_int(0));
        assert_eq!(vertices::signaling_protocol_4().signaling_gap(), rat_int(1));
        let mixed = Behavior::mix(&[
            (rat(1, 2), &vertices::signaling_protocol_4()),
            (rat(1, 2), &Behavior::uniform()),
        ])
        .unwrap();
        assert_eq!(mixed.signaling_gap(), rat(1, 2));
    }

    #[test]
    fn outcome_identity_holds_exhaustively() {
        // -1 + |A + B| = A·B = 1 - |A - B| on all four sign pairs.
        for a in [1i64, -1] {
            for b in [1i64, -1] {
                assert_eq!(-1 + (a + b).abs(), a * b);
                assert_eq!(a * b, 1 - (a - b).abs());
            }
        }
    }
}
