//! bellscope: exact-arithmetic tools for bipartite dichotomic correlations.
//!
//! The crate models behaviors (families of joint conditional probability
//! tables) over the two-setting, two-outcome scenario with arbitrary-
//! precision rationals, enumerates the general, local and no-signaling
//! polytopes, carries a catalog of Bell-type inequalities including the
//! four- and six-term no-signaling families, and produces machine-checked
//! certificates for the bound, facet-rank and local-randomness claims about
//! them. An exact two-phase simplex with verified Farkas certificates backs
//! all membership and extremization questions.

pub mod behavior;
pub mod catalog;
pub mod json;
pub mod lp;
pub mod quantum;
pub mod rational;
pub mod sample;
pub mod scenario;
pub mod verify;
pub mod vertices;

pub use behavior::{Behavior, ExpectationSummary, NumericMode};
pub use catalog::{Catalog, Family, LinearInequality};
pub use rational::Rational;
pub use scenario::{OutcomeLabeling, Party, Scenario};
pub use vertices::{VertexKind, VertexSet, VertexSets};
