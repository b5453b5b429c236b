//! Measurement scenarios and the fixed outcome/setting labeling.

use serde::{Deserialize, Serialize};

/// A bipartite measurement scenario: how many settings each party can choose
/// and how many outcomes each measurement has.
///
/// Everything polytope- or inequality-related in this crate works in the
/// canonical scenario of two settings and two outcomes per party; validation
/// and marginals are implemented for arbitrary finite scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    /// Number of settings for party 1 and party 2.
    pub settings: (usize, usize),
    /// Number of outcomes per setting for party 1 and party 2.
    pub outcomes: (usize, usize),
}

impl Scenario {
    pub fn new(settings: (usize, usize), outcomes: (usize, usize)) -> Result<Self, ScenarioError> {
        if settings.0 == 0 || settings.1 == 0 || outcomes.0 == 0 || outcomes.1 == 0 {
            return Err(ScenarioError::ZeroCount);
        }
        Ok(Scenario { settings, outcomes })
    }

    /// The canonical two-setting, two-outcome scenario used by the polytope,
    /// catalog and verifier modules.
    pub fn canonical() -> Self {
        Scenario { settings: (2, 2), outcomes: (2, 2) }
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::canonical()
    }

    /// Total number of joint probabilities in the table.
    pub fn table_len(&self) -> usize {
        self.settings.0 * self.settings.1 * self.outcomes.0 * self.outcomes.1
    }

    /// Flat index of `p[a][b][A][B]`, lexicographic with `B` fastest.
    ///
    /// In the canonical scenario this is `((a*2 + b)*2 + A)*2 + B`.
    pub fn index(&self, a: usize, b: usize, oa: usize, ob: usize) -> usize {
        debug_assert!(a < self.settings.0 && b < self.settings.1);
        debug_assert!(oa < self.outcomes.0 && ob < self.outcomes.1);
        ((a * self.settings.1 + b) * self.outcomes.0 + oa) * self.outcomes.1 + ob
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("scenario requires at least one setting and one outcome per party")]
    ZeroCount,
}

/// One of the two parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    One,
    Two,
}

/// The fixed labeling convention for dichotomic observables: outcome index 0
/// is the value +1, index 1 is the value -1; setting index 0 is the unprimed
/// observable, index 1 the primed one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomeLabeling;

impl OutcomeLabeling {
    /// Numeric value of a dichotomic outcome index.
    pub fn value(index: usize) -> i64 {
        match index {
            0 => 1,
            1 => -1,
            _ => panic!("dichotomic outcome index out of range: {index}"),
        }
    }

    /// Outcome index of a numeric value (+1 or -1).
    pub fn index_of(value: i64) -> usize {
        match value {
            1 => 0,
            -1 => 1,
            _ => panic!("dichotomic outcome value must be +1 or -1, got {value}"),
        }
    }

    pub fn outcome_symbol(index: usize) -> char {
        match index {
            0 => '+',
            1 => '-',
            _ => panic!("dichotomic outcome index out of range: {index}"),
        }
    }

    /// Display name of a setting: `a`/`a'` for party 1, `b`/`b'` for party 2.
    pub fn setting_symbol(party: Party, index: usize) -> &'static str {
        match (party, index) {
            (Party::One, 0) => "a",
            (Party::One, 1) => "a'",
            (Party::Two, 0) => "b",
            (Party::Two, 1) => "b'",
            _ => panic!("canonical setting index out of range: {index}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_dimensions() {
        let s = Scenario::canonical();
        assert_eq!(s.table_len(), 16);
        assert_eq!(s.index(0, 0, 0, 0), 0);
        assert_eq!(s.index(1, 1, 1, 1), 15);
        assert_eq!(s.index(1, 0, 1, 0), 10);
    }

    #[test]
    fn rejects_zero_counts() {
        assert!(Scenario::new((0, 2), (2, 2)).is_err());
        assert!(Scenario::new((2, 2), (2, 0)).is_err());
    }

    #[test]
    fn labeling_is_the_fixed_convention() {
        assert_eq!(OutcomeLabeling::value(0), 1);
        assert_eq!(OutcomeLabeling::value(1), -1);
        assert_eq!(OutcomeLabeling::index_of(1), 0);
        assert_eq!(OutcomeLabeling::index_of(-1), 1);
        assert_eq!(OutcomeLabeling::setting_symbol(Party::One, 1), "a'");
        assert_eq!(OutcomeLabeling::setting_symbol(Party::Two, 0), "b");
    }
}
