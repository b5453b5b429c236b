//! The full inequality catalog: trivial facets, the CHSH family (expectation
//! and probability forms), the Roy-Singh family and its Leggett rewriting,
//! and the four-term and six-term no-signaling families.
//!
//! Every inequality carries both a symbolic expectation form and an explicit
//! 16-vector of probability-space coefficients; the two representations are
//! checked against each other on all 256 deterministic vertices when the
//! catalog is built.

use crate::behavior::{Behavior, BehaviorError};
use crate::rational::{format_rational, rat_int, Rational, RationalSum};
use crate::scenario::{OutcomeLabeling, Party, Scenario};
use crate::vertices::{VertexKind, VertexSets, PR_PROJECTION_ROWS};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Trivial,
    Chsh,
    ChshProbForm,
    RoySingh,
    LeggettForm,
    Ns4,
    Ns6,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Trivial,
        Family::Chsh,
        Family::ChshProbForm,
        Family::RoySingh,
        Family::LeggettForm,
        Family::Ns4,
        Family::Ns6,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Trivial => "trivial",
            Family::Chsh => "chsh",
            Family::ChshProbForm => "chsh_prob_form",
            Family::RoySingh => "roy_singh",
            Family::LeggettForm => "leggett_form",
            Family::Ns4 => "ns4",
            Family::Ns6 => "ns6",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "trivial" => Some(Family::Trivial),
            "chsh" => Some(Family::Chsh),
            "chsh_prob_form" | "chsh-prob-form" => Some(Family::ChshProbForm),
            "roy_singh" | "roy-singh" => Some(Family::RoySingh),
            "leggett_form" | "leggett-form" | "leggett" => Some(Family::LeggettForm),
            "ns4" => Some(Family::Ns4),
            "ns6" => Some(Family::Ns6),
            _ => None,
        }
    }
}

/// One symbolic term of an inequality's expectation form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermKind {
    /// Product expectation `<xy>` for party-1 setting `x`, party-2 setting `y`.
    Product { x: usize, y: usize },
    /// Tagged marginal expectation `<x>^far` of one party.
    Marginal { party: Party, setting: usize, far: usize },
    /// A constant offset (embedded via a normalisation block).
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Rational,
    pub kind: TermKind,
}

impl Term {
    pub fn product(sign: i64, x: usize, y: usize) -> Term {
        Term { coeff: rat_int(sign), kind: TermKind::Product { x, y } }
    }

    pub fn marginal(sign: i64, party: Party, setting: usize, far: usize) -> Term {
        Term { coeff: rat_int(sign), kind: TermKind::Marginal { party, setting, far } }
    }

    pub fn constant(value: Rational) -> Term {
        Term { coeff: value, kind: TermKind::Constant }
    }

    fn symbol(&self) -> String {
        let sign = if self.coeff.is_negative() { '-' } else { '+' };
        let mag = self.coeff.abs();
        let coeff_str = if mag.is_one() && self.kind != TermKind::Constant {
            String::new()
        } else {
            format_rational(&mag)
        };
        let body = match &self.kind {
            TermKind::Product { x, y } => format!(
                "<{}{}>",
                OutcomeLabeling::setting_symbol(Party::One, *x),
                OutcomeLabeling::setting_symbol(Party::Two, *y)
            ),
            TermKind::Marginal { party, setting, far } => {
                let other = match party {
                    Party::One => Party::Two,
                    Party::Two => Party::One,
                };
                format!(
                    "<{}>^{}",
                    OutcomeLabeling::setting_symbol(*party, *setting),
                    OutcomeLabeling::setting_symbol(other, *far)
                )
            }
            TermKind::Constant => String::new(),
        };
        format!("{sign}{coeff_str}{body}")
    }
}

/// A signed sum of products, tagged marginals and constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationForm {
    pub terms: Vec<Term>,
}

impl ExpectationForm {
    pub fn new(terms: Vec<Term>) -> Self {
        ExpectationForm { terms }
    }

    /// Symbolic string in the fixed grammar, e.g. `+<ab>-<a'>^b`.
    pub fn symbol(&self) -> String {
        self.terms.iter().map(Term::symbol).collect()
    }

    /// Direct evaluation through the behavior's expectation operations.
    pub fn evaluate(&self, b: &Behavior) -> Result<Rational, BehaviorError> {
        let mut total = RationalSum::new();
        for t in &self.terms {
            let v = match &t.kind {
                TermKind::Product { x, y } => b.product_expectation(*x, *y)?,
                TermKind::Marginal { party, setting, far } => {
                    b.marginal_expectation(*party, *setting, *far)?
                }
                TermKind::Constant => Rational::one(),
            };
            total.add_mul(&t.coeff, &v);
        }
        Ok(total.finish())
    }

    /// Evaluation against an already-computed expectation projection of a
    /// canonical behavior. Agrees with [`ExpectationForm::evaluate`].
    pub fn evaluate_summary(&self, s: &crate::behavior::ExpectationSummary) -> Rational {
        let one = Rational::one();
        let mut total = RationalSum::new();
        for t in &self.terms {
            let v = match &t.kind {
                TermKind::Product { x, y } => s.product(*x, *y),
                TermKind::Marginal { party, setting, far } => s.marginal(*party, *setting, *far),
                TermKind::Constant => &one,
            };
            total.add_mul(&t.coeff, v);
        }
        total.finish()
    }

    /// The exact linear image of this form in the 16-dim probability space.
    /// Constants are embedded on the `(a,b)` normalisation block.
    pub fn prob_coeffs(&self) -> Vec<Rational> {
        let scenario = Scenario::canonical();
        let mut coeffs = vec![Rational::zero(); 16];
        for t in &self.terms {
            match &t.kind {
                TermKind::Product { x, y } => {
                    for oa in 0..2 {
                        for ob in 0..2 {
                            let sign = OutcomeLabeling::value(oa) * OutcomeLabeling::value(ob);
                            coeffs[scenario.index(*x, *y, oa, ob)] += &t.coeff * rat_int(sign);
                        }
                    }
                }
                TermKind::Marginal { party: Party::One, setting, far } => {
                    for oa in 0..2 {
                        for ob in 0..2 {
                            let sign = OutcomeLabeling::value(oa);
                            coeffs[scenario.index(*setting, *far, oa, ob)] +=
                                &t.coeff * rat_int(sign);
                        }
                    }
                }
                TermKind::Marginal { party: Party::Two, setting, far } => {
                    for oa in 0..2 {
                        for ob in 0..2 {
                            let sign = OutcomeLabeling::value(ob);
                            coeffs[scenario.index(*far, *setting, oa, ob)] +=
                                &t.coeff * rat_int(sign);
                        }
                    }
                }
                TermKind::Constant => {
                    for oa in 0..2 {
                        for ob in 0..2 {
                            coeffs[scenario.index(0, 0, oa, ob)] += &t.coeff;
                        }
                    }
                }
            }
        }
        coeffs
    }
}

/// Result of evaluating an inequality on a behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: Rational,
    pub satisfied: bool,
    pub slack: Rational,
}

/// A linear inequality `prob_coeffs · p <= bound` over the 16-dim
/// probability space, with its symbolic expectation-form description.
#[derive(Debug, Clone)]
pub struct LinearInequality {
    pub family: Family,
    pub variant_id: String,
    /// The printed-form index within the family, before absolute values are
    /// expanded into linear branches.
    pub paper_id: String,
    /// The relabeling bits of the family's parameterisation, if any.
    pub parameters: Option<Vec<u8>>,
    pub expectation_form: ExpectationForm,
    pub prob_coeffs: Vec<Rational>,
    pub bound: Rational,
}

impl LinearInequality {
    fn from_form(
        family: Family,
        variant_id: impl Into<String>,
        paper_id: impl Into<String>,
        parameters: Option<Vec<u8>>,
        form: ExpectationForm,
        bound: Rational,
    ) -> Self {
        let prob_coeffs = form.prob_coeffs();
        LinearInequality {
            family,
            variant_id: variant_id.into(),
            paper_id: paper_id.into(),
            parameters,
            expectation_form: form,
            prob_coeffs,
            bound,
        }
    }

    /// Value of the probability-space functional on a canonical behavior.
    pub fn value(&self, b: &Behavior) -> Result<Rational, BehaviorError> {
        let table = b.flat16()?;
        let mut total = RationalSum::new();
        for (c, p) in self.prob_coeffs.iter().zip(table) {
            total.add_mul(c, p);
        }
        Ok(total.finish())
    }

    pub fn evaluate(&self, b: &Behavior) -> Result<EvalResult, BehaviorError> {
        let value = self.value(b)?;
        let slack = &self.bound - &value;
        Ok(EvalResult { value, satisfied: !slack.is_negative(), slack })
    }

    /// Display form like `+<ab>+<ab'>+<a'b>-<a'b'> <= 2/1`.
    pub fn display(&self) -> String {
        format!("{} <= {}", self.expectation_form.symbol(), format_rational(&self.bound))
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CatalogError {
    #[error("family {family:?} has {got} members, expected {expected}")]
    WrongFamilySize { family: Family, expected: usize, got: usize },
    #[error("family {family:?} contains duplicate coefficient vectors")]
    DuplicateMembers { family: Family },
    #[error("dual-form mismatch for {variant}: expectation form gives {form_value} but probability coefficients give {coeff_value} on vertex {vertex}")]
    DualFormMismatch { variant: String, vertex: String, form_value: String, coeff_value: String },
    #[error("construction self-check failed: {what}")]
    SelfCheck { what: String },
    #[error("generated six-term family does not match the printed parameterisation:\n{diff}")]
    Ns6Mismatch { diff: String },
}

/// The complete catalog, constructed once and immutable afterwards.
#[derive(Debug)]
pub struct Catalog {
    pub trivial: Vec<LinearInequality>,
    pub chsh: Vec<LinearInequality>,
    pub chsh_prob_form: Vec<LinearInequality>,
    pub roy_singh: Vec<LinearInequality>,
    pub leggett_form: Vec<LinearInequality>,
    pub ns4: Vec<LinearInequality>,
    pub ns6: Vec<LinearInequality>,
}

fn pair_name(x: usize, y: usize) -> String {
    format!(
        "{}{}",
        OutcomeLabeling::setting_symbol(Party::One, x),
        OutcomeLabeling::setting_symbol(Party::Two, y)
    )
}

fn sign_of_bit(bit: usize) -> i64 {
    if bit % 2 == 0 {
        1
    } else {
        -1
    }
}

fn sign_pow(exponent: i64) -> i64 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// Family constructors
// ---------------------------------------------------------------------------

/// The 8 trivial facets `±<xy> <= 1`, pair-major with the positive form first.
pub fn trivial_family() -> Vec<LinearInequality> {
    let mut out = Vec::with_capacity(8);
    for x in 0..2 {
        for y in 0..2 {
            for sign in [1i64, -1] {
                let id = format!("triv:{}:{}", pair_name(x, y), if sign > 0 { '+' } else { '-' });
                out.push(LinearInequality::from_form(
                    Family::Trivial,
                    id.clone(),
                    id,
                    None,
                    ExpectationForm::new(vec![Term::product(sign, x, y)]),
                    rat_int(1),
                ));
            }
        }
    }
    out
}

/// The 8 sign-variants of the CHSH inequality, bound 2. Variant `k` uses the
/// sign pattern `PR_PROJECTION_ROWS[k]`, so variant `k` is the facet the
/// PR-type vertex `k` violates maximally.
pub fn chsh_family() -> Vec<LinearInequality> {
    let mut out = Vec::with_capacity(8);
    for (k, row) in PR_PROJECTION_ROWS.iter().enumerate() {
        let bit = |s: i64| u8::from(s < 0);
        let gamma = bit(row[0]);
        let beta = bit(row[1]) ^ gamma;
        let alpha = bit(row[2]) ^ gamma;
        debug_assert_eq!(sign_of_bit((alpha + beta + gamma + 1) as usize), row[3]);
        let terms = vec![
            Term::product(row[0], 0, 0),
            Term::product(row[1], 0, 1),
            Term::product(row[2], 1, 0),
            Term::product(row[3], 1, 1),
        ];
        let id = format!("chsh:{k}");
        out.push(LinearInequality::from_form(
            Family::Chsh,
            id.clone(),
            id,
            Some(vec![alpha, beta, gamma]),
            ExpectationForm::new(terms),
            rat_int(2),
        ));
    }
    out
}

/// Index of the standard CHSH polynomial `<ab>+<ab'>+<a'b>-<a'b'>` within
/// [`chsh_family`].
pub const CHSH_CANONICAL_VARIANT: usize = 6;

/// The probability-space form of CHSH: the coincidence-probability sum is
/// bounded between 1 and 3 for local behaviors. Returns (lower, upper) as
/// `<=`-inequalities; the lower bound is stored negated.
pub fn chsh_prob_form() -> Vec<LinearInequality> {
    let scenario = Scenario::canonical();
    // +1 on equal outcomes for (a,b), (a,b'), (a',b); +1 on unequal
    // outcomes for (a',b').
    let mut sum_coeffs = vec![Rational::zero(); 16];
    for (x, y) in [(0, 0), (0, 1), (1, 0)] {
        sum_coeffs[scenario.index(x, y, 0, 0)] = rat_int(1);
        sum_coeffs[scenario.index(x, y, 1, 1)] = rat_int(1);
    }
    sum_coeffs[scenario.index(1, 1, 0, 1)] = rat_int(1);
    sum_coeffs[scenario.index(1, 1, 1, 0)] = rat_int(1);

    let half = |sign: i64| Rational::new(rat_int(sign).numer().clone(), 2.into());
    let upper_form = ExpectationForm::new(vec![
        Term { coeff: half(1), kind: TermKind::Product { x: 0, y: 0 } },
        Term { coeff: half(1), kind: TermKind::Product { x: 0, y: 1 } },
        Term { coeff: half(1), kind: TermKind::Product { x: 1, y: 0 } },
        Term { coeff: half(-1), kind: TermKind::Product { x: 1, y: 1 } },
        Term::constant(rat_int(2)),
    ]);
    let lower_form = ExpectationForm::new(
        upper_form.terms.iter().map(|t| Term { coeff: -t.coeff.clone(), kind: t.kind.clone() }).collect(),
    );
    let upper = LinearInequality {
        family: Family::ChshProbForm,
        variant_id: "chsh-prob:upper".into(),
        paper_id: "chsh-prob:upper".into(),
        parameters: None,
        expectation_form: upper_form,
        prob_coeffs: sum_coeffs.clone(),
        bound: rat_int(3),
    };
    let lower = LinearInequality {
        family: Family::ChshProbForm,
        variant_id: "chsh-prob:lower".into(),
        paper_id: "chsh-prob:lower".into(),
        parameters: None,
        expectation_form: lower_form,
        prob_coeffs: sum_coeffs.iter().map(|c| -c.clone()).collect(),
        bound: rat_int(-1),
    };
    vec![lower, upper]
}

/// The four sign patterns `(s0, s1, s2)` with `s0·s1·s2 = -1` of the
/// marginal-product inequalities `s0<xy> + s1<x>^y + s2<y>^x <= 1`. Each is
/// the non-negativity of one joint probability rewritten in expectation
/// coordinates, which is why the whole family holds for every behavior.
const RS_PATTERNS: [[i64; 3]; 4] = [[1, 1, -1], [1, -1, 1], [-1, 1, 1], [-1, -1, -1]];

fn rs_form(x: usize, y: usize, pattern: [i64; 3]) -> ExpectationForm {
    ExpectationForm::new(vec![
        Term::product(pattern[0], x, y),
        Term::marginal(pattern[1], Party::One, x, y),
        Term::marginal(pattern[2], Party::Two, y, x),
    ])
}

/// The 16 Roy-Singh inequalities in expanded linear form: for each setting
/// pair, the four absolute-value inequalities `|<xy> ± <x>^y| <= 1 ± <y>^x`
/// and `|<xy> ± <y>^x| <= 1 ± <x>^y` expand to exactly the four linear sign
/// patterns of [`RS_PATTERNS`].
pub fn roy_singh_family() -> Vec<LinearInequality> {
    let mut out = Vec::with_capacity(16);
    for x in 0..2 {
        for y in 0..2 {
            for (i, pattern) in RS_PATTERNS.iter().enumerate() {
                let id = format!("rs:{}:{}", pair_name(x, y), i);
                out.push(LinearInequality::from_form(
                    Family::RoySingh,
                    id.clone(),
                    id,
                    Some(pattern.iter().map(|s| u8::from(*s < 0)).collect()),
                    rs_form(x, y, *pattern),
                    rat_int(1),
                ));
            }
        }
    }
    out
}

/// The Leggett rewriting `-1 + |<x>^y + <y>^x| <= <xy> <= 1 - |<x>^y - <y>^x|`
/// with both absolute values expanded: two linear branches per side per
/// setting pair (16 entries, 8 printed inequalities).
pub fn leggett_form() -> Vec<LinearInequality> {
    let mut out = Vec::with_capacity(16);
    for x in 0..2 {
        for y in 0..2 {
            let pair = pair_name(x, y);
            // Upper side: <xy> + |<x>^y - <y>^x| <= 1.
            for (branch, pattern) in [[1, 1, -1], [1, -1, 1]].iter().enumerate() {
                out.push(LinearInequality::from_form(
                    Family::LeggettForm,
                    format!("leg:{pair}:hi:{branch}"),
                    format!("leg:{pair}:hi"),
                    None,
                    rs_form(x, y, *pattern),
                    rat_int(1),
                ));
            }
            // Lower side: |<x>^y + <y>^x| - <xy> <= 1.
            for (branch, pattern) in [[-1, 1, 1], [-1, -1, -1]].iter().enumerate() {
                out.push(LinearInequality::from_form(
                    Family::LeggettForm,
                    format!("leg:{pair}:lo:{branch}"),
                    format!("leg:{pair}:lo"),
                    None,
                    rs_form(x, y, *pattern),
                    rat_int(1),
                ));
            }
        }
    }
    out
}

/// The 32 four-term no-signaling inequalities: four sub-families over the
/// relabeling bits `(α, β, γ)`, each mixing two product expectations that
/// share a setting with two marginals of the shared-setting party's partner,
/// bound 2. Sub-family `a` with `(0,0,0)` is the printed four-term example
/// `<ab> + <a'b> + <a>^b - <a'>^b <= 2`.
pub fn ns4_family() -> Vec<LinearInequality> {
    struct SubFamily {
        name: char,
        products: [(usize, usize); 2],
        marginals: [(Party, usize, usize); 2],
    }
    let subs = [
        SubFamily {
            name: 'a',
            products: [(0, 0), (1, 0)],
            marginals: [(Party::One, 0, 0), (Party::One, 1, 0)],
        },
        SubFamily {
            name: 'b',
            products: [(0, 0), (0, 1)],
            marginals: [(Party::Two, 0, 0), (Party::Two, 1, 0)],
        },
        SubFamily {
            name: 'c',
            products: [(1, 1), (1, 0)],
            marginals: [(Party::Two, 0, 1), (Party::Two, 1, 1)],
        },
        SubFamily {
            name: 'd',
            products: [(1, 1), (0, 1)],
            marginals: [(Party::One, 0, 1), (Party::One, 1, 1)],
        },
    ];
    let mut out = Vec::with_capacity(32);
    for sub in &subs {
        for alpha in 0..2usize {
            for beta in 0..2usize {
                for gamma in 0..2usize {
                    let signs = [
                        sign_of_bit(gamma),
                        sign_of_bit(beta + gamma),
                        sign_of_bit(alpha + gamma),
                        sign_of_bit(alpha + beta + gamma + 1),
                    ];
                    let (p0, p1) = (sub.products[0], sub.products[1]);
                    let (m0, m1) = (sub.marginals[0], sub.marginals[1]);
                    let terms = vec![
                        Term::product(signs[0], p0.0, p0.1),
                        Term::product(signs[1], p1.0, p1.1),
                        Term::marginal(signs[2], m0.0, m0.1, m0.2),
                        Term::marginal(signs[3], m1.0, m1.1, m1.2),
                    ];
                    let id = format!("ns4:{}:{}{}{}", sub.name, alpha, beta, gamma);
                    out.push(LinearInequality::from_form(
                        Family::Ns4,
                        id.clone(),
                        id,
                        Some(vec![alpha as u8, beta as u8, gamma as u8]),
                        ExpectationForm::new(terms),
                        rat_int(2),
                    ));
                }
            }
        }
    }
    out
}

/// Variant id of the printed four-term example inequality.
pub const NS4_PRINTED_EXAMPLE: &str = "ns4:a:000";

/// Variant id of the printed six-term seed inequality.
pub const NS6_SEED: &str = "ns6:a:11";

// Six-term family -----------------------------------------------------------

/// Swaps party-1 settings everywhere in a form (products, marginal settings
/// and far-setting tags).
fn exchange_party1_settings(form: &ExpectationForm) -> ExpectationForm {
    ExpectationForm::new(
        form.terms
            .iter()
            .map(|t| {
                let kind = match &t.kind {
                    TermKind::Product { x, y } => TermKind::Product { x: 1 - x, y: *y },
                    TermKind::Marginal { party: Party::One, setting, far } => {
                        TermKind::Marginal { party: Party::One, setting: 1 - setting, far: *far }
                    }
                    TermKind::Marginal { party: Party::Two, setting, far } => {
                        TermKind::Marginal { party: Party::Two, setting: *setting, far: 1 - far }
                    }
                    TermKind::Constant => TermKind::Constant,
                };
                Term { coeff: t.coeff.clone(), kind }
            })
            .collect(),
    )
}

fn ns6_a_form(alpha: usize, beta: usize) -> ExpectationForm {
    let sa = -sign_of_bit(alpha);
    let sb = -sign_of_bit(beta);
    ExpectationForm::new(vec![
        Term::product(-1, 0, 0),
        Term::product(-1, 1, 1),
        Term::marginal(sa, Party::One, 0, 1),
        Term::marginal(sa, Party::Two, 0, 1),
        Term::marginal(sb, Party::One, 1, 0),
        Term::marginal(sb, Party::Two, 1, 0),
    ])
}

fn ns6_b_form(gamma: i64, delta: i64) -> ExpectationForm {
    ExpectationForm::new(vec![
        Term::product(sign_pow(1 + gamma), 0, 0),
        Term::product(sign_pow(gamma), 1, 1),
        Term::marginal(sign_pow(gamma * delta), Party::One, 0, 1),
        Term::marginal(sign_pow(gamma * (delta + 1)), Party::Two, 0, 1),
        Term::marginal(sign_pow((delta + 1) * (1 - gamma)), Party::One, 1, 0),
        Term::marginal(sign_pow(delta * (1 - gamma)), Party::Two, 1, 0),
    ])
}

/// The 14 six-term no-signaling inequalities in their printed
/// parameterisation: three `a`-type and four `b`-type variants on the
/// `(ab),(a'b')` products, plus the images of all seven under the exchange
/// of party 1's settings.
pub fn ns6_family() -> Vec<LinearInequality> {
    let mut seeds: Vec<(String, Vec<u8>, ExpectationForm)> = Vec::new();
    for (alpha, beta) in [(0usize, 1usize), (1, 0), (1, 1)] {
        seeds.push((
            format!("ns6:a:{alpha}{beta}"),
            vec![alpha as u8, beta as u8],
            ns6_a_form(alpha, beta),
        ));
    }
    for gamma in 0..2i64 {
        for delta in 0..2i64 {
            seeds.push((
                format!("ns6:b:{gamma}{delta}"),
                vec![gamma as u8, delta as u8],
                ns6_b_form(gamma, delta),
            ));
        }
    }
    let mut out = Vec::with_capacity(14);
    for (id, params, form) in &seeds {
        out.push(LinearInequality::from_form(
            Family::Ns6,
            id.clone(),
            id.clone(),
            Some(params.clone()),
            form.clone(),
            rat_int(2),
        ));
    }
    for (id, params, form) in &seeds {
        out.push(LinearInequality::from_form(
            Family::Ns6,
            format!("{id}:x"),
            format!("{id}:x"),
            Some(params.clone()),
            exchange_party1_settings(form),
            rat_int(2),
        ));
    }
    out
}

/// One element of the scenario relabeling group: outcome flips per party and
/// setting, composed with setting swaps per party.
#[derive(Debug, Clone, Copy)]
struct Relabeling {
    flip_p1: [bool; 2],
    flip_p2: [bool; 2],
    swap_p1: bool,
    swap_p2: bool,
}

impl Relabeling {
    fn apply(&self, form: &ExpectationForm) -> ExpectationForm {
        let swap = |s: usize, do_swap: bool| if do_swap { 1 - s } else { s };
        ExpectationForm::new(
            form.terms
                .iter()
                .map(|t| {
                    // Settings swap first, outcome flips act on the swapped
                    // labels; enumerating all flip/swap combinations in this
                    // fixed factorisation covers the whole group.
                    let (kind, coeff) = match &t.kind {
                        TermKind::Product { x, y } => {
                            let x2 = swap(*x, self.swap_p1);
                            let y2 = swap(*y, self.swap_p2);
                            let mut c = t.coeff.clone();
                            if self.flip_p1[x2] {
                                c = -c;
                            }
                            if self.flip_p2[y2] {
                                c = -c;
                            }
                            (TermKind::Product { x: x2, y: y2 }, c)
                        }
                        TermKind::Marginal { party: Party::One, setting, far } => {
                            let s2 = swap(*setting, self.swap_p1);
                            let f2 = swap(*far, self.swap_p2);
                            let mut c = t.coeff.clone();
                            if self.flip_p1[s2] {
                                c = -c;
                            }
                            (TermKind::Marginal { party: Party::One, setting: s2, far: f2 }, c)
                        }
                        TermKind::Marginal { party: Party::Two, setting, far } => {
                            let s2 = swap(*setting, self.swap_p2);
                            let f2 = swap(*far, self.swap_p1);
                            let mut c = t.coeff.clone();
                            if self.flip_p2[s2] {
                                c = -c;
                            }
                            (TermKind::Marginal { party: Party::Two, setting: s2, far: f2 }, c)
                        }
                        TermKind::Constant => (TermKind::Constant, t.coeff.clone()),
                    };
                    Term { coeff, kind }
                })
                .collect(),
        )
    }
}

/// Closure of the printed six-term seed under the relabeling group (outcome
/// flips per party and setting, setting swaps per party), deduplicated on
/// exact probability-space coefficient vectors.
///
/// The closure has 32 members. The published family keeps the 14 of them
/// that retain at least one anticorrelation branch (a product with
/// coefficient -1 whose pair's two marginals both carry +1); the remaining
/// 18 repeat plain positivity content under marginal retagging, the
/// all-negative-marginal pair being literally the rearranged non-negativity
/// combination. [`ns6_family`] is checked against this closure when the
/// catalog is built.
pub fn ns6_closure() -> Vec<ExpectationForm> {
    let seed = ns6_a_form(1, 1);
    let mut seen: BTreeMap<String, ExpectationForm> = BTreeMap::new();
    for mask in 0..64u32 {
        let r = Relabeling {
            flip_p1: [mask & 1 != 0, mask & 2 != 0],
            flip_p2: [mask & 4 != 0, mask & 8 != 0],
            swap_p1: mask & 16 != 0,
            swap_p2: mask & 32 != 0,
        };
        let form = r.apply(&seed);
        let key = coeff_key(&form.prob_coeffs());
        seen.entry(key).or_insert(form);
    }
    seen.into_values().collect()
}

/// Whether a six-term form keeps an anticorrelation branch on the setting
/// pair `(x, y)`: product coefficient -1 with both of the pair's marginals
/// (party 1 at `x`, party 2 at `y`) carrying +1.
fn has_anchor(form: &ExpectationForm, x: usize, y: usize) -> bool {
    let mut product_neg = false;
    let mut m1_pos = false;
    let mut m2_pos = false;
    for t in &form.terms {
        match &t.kind {
            TermKind::Product { x: px, y: py } if (*px, *py) == (x, y) => {
                product_neg = t.coeff == rat_int(-1);
            }
            TermKind::Marginal { party: Party::One, setting, .. } if *setting == x => {
                m1_pos = t.coeff == rat_int(1);
            }
            TermKind::Marginal { party: Party::Two, setting, .. } if *setting == y => {
                m2_pos = t.coeff == rat_int(1);
            }
            _ => {}
        }
    }
    product_neg && m1_pos && m2_pos
}

fn ns6_closure_kept() -> Vec<ExpectationForm> {
    ns6_closure()
        .into_iter()
        .filter(|form| {
            let pairs: Vec<(usize, usize)> = form
                .terms
                .iter()
                .filter_map(|t| match &t.kind {
                    TermKind::Product { x, y } => Some((*x, *y)),
                    _ => None,
                })
                .collect();
            pairs.iter().any(|(x, y)| has_anchor(form, *x, *y))
        })
        .collect()
}

fn coeff_key(coeffs: &[Rational]) -> String {
    coeffs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------------------
// Catalog construction and its self-checks
// ---------------------------------------------------------------------------

impl Catalog {
    pub fn build() -> Result<Catalog, CatalogError> {
        let catalog = Catalog {
            trivial: trivial_family(),
            chsh: chsh_family(),
            chsh_prob_form: chsh_prob_form(),
            roy_singh: roy_singh_family(),
            leggett_form: leggett_form(),
            ns4: ns4_family(),
            ns6: ns6_family(),
        };
        catalog.check_family_sizes()?;
        catalog.check_dual_forms()?;
        catalog.check_prob_form_identity()?;
        catalog.check_leggett_equivalence()?;
        catalog.check_ns4_structural_similarity()?;
        catalog.check_ns6_closure()?;
        Ok(catalog)
    }

    pub fn shared() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::build().expect("catalog construction self-checks"))
    }

    pub fn family(&self, family: Family) -> &[LinearInequality] {
        match family {
            Family::Trivial => &self.trivial,
            Family::Chsh => &self.chsh,
            Family::ChshProbForm => &self.chsh_prob_form,
            Family::RoySingh => &self.roy_singh,
            Family::LeggettForm => &self.leggett_form,
            Family::Ns4 => &self.ns4,
            Family::Ns6 => &self.ns6,
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &LinearInequality> {
        Family::ALL.iter().flat_map(|f| self.family(*f).iter())
    }

    pub fn find(&self, family: Family, variant_id: &str) -> Option<&LinearInequality> {
        self.family(family).iter().find(|i| i.variant_id == variant_id)
    }

    /// Printed-family sizes: distinct `paper_id`s per family.
    pub fn paper_count(&self, family: Family) -> usize {
        self.family(family)
            .iter()
            .map(|i| i.paper_id.as_str())
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn check_family_sizes(&self) -> Result<(), CatalogError> {
        let expectations = [
            (Family::Trivial, 8usize, 8usize),
            (Family::Chsh, 8, 8),
            (Family::ChshProbForm, 2, 2),
            (Family::RoySingh, 16, 16),
            (Family::LeggettForm, 16, 8),
            (Family::Ns4, 32, 32),
            (Family::Ns6, 14, 14),
        ];
        for (family, entries, paper) in expectations {
            let got = self.family(family).len();
            if got != entries {
                return Err(CatalogError::WrongFamilySize { family, expected: entries, got });
            }
            let got_paper = self.paper_count(family);
            if got_paper != paper {
                return Err(CatalogError::WrongFamilySize {
                    family,
                    expected: paper,
                    got: got_paper,
                });
            }
            let distinct: BTreeSet<String> =
                self.family(family).iter().map(|i| coeff_key(&i.prob_coeffs)).collect();
            if distinct.len() != entries {
                return Err(CatalogError::DuplicateMembers { family });
            }
        }
        Ok(())
    }

    /// Evaluates the symbolic expectation form and the probability-space
    /// coefficients on all 256 deterministic vertices and requires exact
    /// agreement.
    fn check_dual_forms(&self) -> Result<(), CatalogError> {
        let general = &VertexSets::shared().general;
        for ineq in self.all() {
            for v in &general.vertices {
                let form_value =
                    ineq.expectation_form.evaluate(&v.behavior).expect("canonical vertex");
                let coeff_value = ineq.value(&v.behavior).expect("canonical vertex");
                if form_value != coeff_value {
                    return Err(CatalogError::DualFormMismatch {
                        variant: ineq.variant_id.clone(),
                        vertex: v.label.clone(),
                        form_value: format_rational(&form_value),
                        coeff_value: format_rational(&coeff_value),
                    });
                }
            }
        }
        Ok(())
    }

    /// The coincidence sum equals `(4 + S)/2` with `S` the standard CHSH
    /// value, on every deterministic vertex.
    fn check_prob_form_identity(&self) -> Result<(), CatalogError> {
        let general = &VertexSets::shared().general;
        let upper = &self.chsh_prob_form[1];
        let chsh = &self.chsh[CHSH_CANONICAL_VARIANT];
        for v in &general.vertices {
            let sum = upper.value(&v.behavior).expect("canonical");
            let s = chsh.value(&v.behavior).expect("canonical");
            if sum * rat_int(2) != s + rat_int(4) {
                return Err(CatalogError::SelfCheck {
                    what: format!("coincidence-sum identity fails on vertex {}", v.label),
                });
            }
        }
        Ok(())
    }

    /// The expanded Roy-Singh and Leggett forms are the same set of linear
    /// inequalities, and they produce identical satisfied/saturated patterns
    /// on all 256 deterministic vertices.
    fn check_leggett_equivalence(&self) -> Result<(), CatalogError> {
        let rs_set: BTreeSet<(String, String)> = self
            .roy_singh
            .iter()
            .map(|i| (coeff_key(&i.prob_coeffs), format_rational(&i.bound)))
            .collect();
        let leg_set: BTreeSet<(String, String)> = self
            .leggett_form
            .iter()
            .map(|i| (coeff_key(&i.prob_coeffs), format_rational(&i.bound)))
            .collect();
        if rs_set != leg_set {
            return Err(CatalogError::SelfCheck {
                what: "Roy-Singh and Leggett expansions differ as inequality sets".into(),
            });
        }
        let general = &VertexSets::shared().general;
        for v in &general.vertices {
            let pattern = |ineqs: &[LinearInequality]| -> BTreeSet<(String, bool, bool)> {
                ineqs
                    .iter()
                    .map(|i| {
                        let e = i.evaluate(&v.behavior).expect("canonical");
                        (coeff_key(&i.prob_coeffs), e.satisfied, e.slack.is_zero())
                    })
                    .collect()
            };
            if pattern(&self.roy_singh) != pattern(&self.leggett_form) {
                return Err(CatalogError::SelfCheck {
                    what: format!("satisfaction pattern differs on vertex {}", v.label),
                });
            }
        }
        Ok(())
    }

    /// Every four-term no-signaling inequality matches some CHSH variant
    /// after replacing exactly two of its product terms by the two marginal
    /// terms, signs preserved.
    fn check_ns4_structural_similarity(&self) -> Result<(), CatalogError> {
        for ineq in &self.ns4 {
            let mut products: Vec<((usize, usize), Rational)> = Vec::new();
            let mut marginal_signs: Vec<Rational> = Vec::new();
            for t in &ineq.expectation_form.terms {
                match &t.kind {
                    TermKind::Product { x, y } => products.push(((*x, *y), t.coeff.clone())),
                    TermKind::Marginal { .. } => marginal_signs.push(t.coeff.clone()),
                    TermKind::Constant => {}
                }
            }
            marginal_signs.sort();
            let matched = self.chsh.iter().any(|c| {
                let mut remaining: Vec<Rational> = Vec::new();
                let mut shared = 0usize;
                for t in &c.expectation_form.terms {
                    if let TermKind::Product { x, y } = &t.kind {
                        match products.iter().find(|(p, _)| *p == (*x, *y)) {
                            Some((_, sign)) if *sign == t.coeff => shared += 1,
                            Some(_) => return false,
                            None => remaining.push(t.coeff.clone()),
                        }
                    }
                }
                remaining.sort();
                shared == 2 && remaining == marginal_signs
            });
            if !matched {
                return Err(CatalogError::SelfCheck {
                    what: format!(
                        "{} is not a two-term marginal substitution of any CHSH variant",
                        ineq.variant_id
                    ),
                });
            }
        }
        Ok(())
    }

    /// The relabeling closure of the six-term seed, filtered to the members
    /// that keep an anticorrelation branch, reproduces the printed
    /// parameterisation exactly.
    fn check_ns6_closure(&self) -> Result<(), CatalogError> {
        let closure = ns6_closure();
        if closure.len() != 32 {
            return Err(CatalogError::SelfCheck {
                what: format!("six-term closure has {} members, expected 32", closure.len()),
            });
        }
        let kept = ns6_closure_kept();
        let generated: BTreeMap<String, String> =
            kept.iter().map(|f| (coeff_key(&f.prob_coeffs()), f.symbol())).collect();
        let printed: BTreeMap<String, String> = self
            .ns6
            .iter()
            .map(|i| (coeff_key(&i.prob_coeffs), i.expectation_form.symbol()))
            .collect();
        if generated.len() != 14 || printed.len() != 14 || generated.keys().ne(printed.keys()) {
            let mut diff = String::new();
            diff.push_str(&format!(
                "generated {} members, printed {}\n",
                generated.len(),
                printed.len()
            ));
            for (k, sym) in &generated {
                if !printed.contains_key(k) {
                    diff.push_str(&format!("only generated: {sym}\n"));
                }
            }
            for (k, sym) in &printed {
                if !generated.contains_key(k) {
                    diff.push_str(&format!("only printed:   {sym}\n"));
                }
            }
            return Err(CatalogError::Ns6Mismatch { diff });
        }
        // The seed's all-negative relabeling (the rearranged non-negativity
        // combination) must be in the closure but not among the kept forms.
        let trivial_form = ExpectationForm::new(vec![
            Term::product(-1, 0, 0),
            Term::product(-1, 1, 1),
            Term::marginal(-1, Party::One, 0, 1),
            Term::marginal(-1, Party::Two, 0, 1),
            Term::marginal(-1, Party::One, 1, 0),
            Term::marginal(-1, Party::Two, 1, 0),
        ]);
        let key = coeff_key(&trivial_form.prob_coeffs());
        let in_closure = closure.iter().any(|f| coeff_key(&f.prob_coeffs()) == key);
        if !in_closure || generated.contains_key(&key) {
            return Err(CatalogError::SelfCheck {
                what: "non-negativity relabeling misclassified in the six-term closure".into(),
            });
        }
        Ok(())
    }
}

/// Exact maximum of an inequality's functional over a vertex set, with the
/// labels of every maximizer.
pub fn max_over(
    ineq: &LinearInequality,
    kind: VertexKind,
) -> (Rational, Vec<String>) {
    let set = VertexSets::shared().get(kind);
    let points = set.points();
    let (optimum, argmax) = crate::lp::maximize_over_vertices(&ineq.prob_coeffs, &points)
        .expect("vertex sets are nonempty and consistent");
    let labels = argmax.into_iter().map(|i| set.vertices[i].label.clone()).collect();
    (optimum, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::Behavior;
    use crate::rational::rat;
    use crate::vertices::{
        local_vertex, pr_box, pr_box_canonical, signaling_protocol_4, signaling_protocol_6,
    };

    #[test]
    fn catalog_builds_with_all_self_checks() {
        let catalog = Catalog::build().expect("self-checks");
        assert_eq!(catalog.trivial.len(), 8);
        assert_eq!(catalog.chsh.len(), 8);
        assert_eq!(catalog.chsh_prob_form.len(), 2);
        assert_eq!(catalog.roy_singh.len(), 16);
        assert_eq!(catalog.leggett_form.len(), 16);
        assert_eq!(catalog.paper_count(Family::LeggettForm), 8);
        assert_eq!(catalog.ns4.len(), 32);
        assert_eq!(catalog.ns6.len(), 14);
    }

    #[test]
    fn canonical_chsh_on_pr_box_is_four() {
        let catalog = Catalog::shared();
        let chsh = &catalog.chsh[CHSH_CANONICAL_VARIANT];
        assert_eq!(chsh.expectation_form.symbol(), "+<ab>+<ab'>+<a'b>-<a'b'>");
        let result = chsh.evaluate(&pr_box_canonical()).unwrap();
        assert_eq!(result.value, rat_int(4));
        assert!(!result.satisfied);
        assert_eq!(result.slack, rat_int(-2));
    }

    #[test]
    fn chsh_variant_k_is_maximised_by_pr_variant_k() {
        let catalog = Catalog::shared();
        for (k, ineq) in catalog.chsh.iter().enumerate() {
            for variant in 0..8 {
                let value = ineq.evaluate(&pr_box(variant).unwrap()).unwrap().value;
                if variant == k {
                    assert_eq!(value, rat_int(4));
                } else {
                    assert!(value < rat_int(4));
                }
            }
        }
    }

    #[test]
    fn chsh_max_over_vertex_sets() {
        let catalog = Catalog::shared();
        for ineq in &catalog.chsh {
            let (local_max, local_argmax) = max_over(ineq, VertexKind::Local);
            assert_eq!(local_max, rat_int(2));
            assert_eq!(local_argmax.len(), 8);
            let (ns_max, ns_argmax) = max_over(ineq, VertexKind::NoSignaling);
            assert_eq!(ns_max, rat_int(4));
            assert_eq!(ns_argmax.len(), 1, "one PR-type vertex per CHSH facet");
            let (gen_max, _) = max_over(ineq, VertexKind::General);
            assert_eq!(gen_max, rat_int(4));
        }
    }

    #[test]
    fn trivial_family_values() {
        let catalog = Catalog::shared();
        for ineq in &catalog.trivial {
            let (ns_max, _) = max_over(ineq, VertexKind::NoSignaling);
            assert_eq!(ns_max, rat_int(1));
            let e = ineq.evaluate(&Behavior::uniform()).unwrap();
            assert_eq!(e.value, rat_int(0));
            assert!(e.satisfied);
        }
    }

    #[test]
    fn prob_form_values() {
        let catalog = Catalog::shared();
        let lower = &catalog.chsh_prob_form[0];
        let upper = &catalog.chsh_prob_form[1];
        // PR box: the sum reaches 4, violating the upper bound.
        let pr = pr_box_canonical();
        let e = upper.evaluate(&pr).unwrap();
        assert_eq!(e.value, rat_int(4));
        assert!(!e.satisfied);
        assert!(lower.evaluate(&pr).unwrap().satisfied);
        // Uniform behavior sits at 2, inside both bounds.
        let u = Behavior::uniform();
        assert_eq!(upper.evaluate(&u).unwrap().value, rat_int(2));
        assert!(upper.evaluate(&u).unwrap().satisfied);
        assert!(lower.evaluate(&u).unwrap().satisfied);
        // The all-plus local vertex saturates the upper bound at 3.
        let v = local_vertex([0, 0, 0, 0]);
        let e = upper.evaluate(&v).unwrap();
        assert_eq!(e.value, rat_int(3));
        assert!(e.slack.is_zero());
    }

    #[test]
    fn roy_singh_universality_on_vertices() {
        let catalog = Catalog::shared();
        for ineq in &catalog.roy_singh {
            let (max, argmax) = max_over(ineq, VertexKind::General);
            assert_eq!(max, rat_int(1), "{}", ineq.variant_id);
            assert!(!argmax.is_empty());
            assert!(ineq.evaluate(&pr_box_canonical()).unwrap().satisfied);
        }
    }

    #[test]
    fn roy_singh_spot_check_saturation() {
        // <ab> + <a>^b - <b>^a <= 1 on the all-plus vertex: 1 + 1 - 1 = 1.
        let catalog = Catalog::shared();
        let ineq = catalog.find(Family::RoySingh, "rs:ab:0").unwrap();
        let e = ineq.evaluate(&local_vertex([0, 0, 0, 0])).unwrap();
        assert!(e.slack.is_zero());
    }

    #[test]
    fn leggett_uniform_has_unit_slack() {
        let catalog = Catalog::shared();
        let u = Behavior::uniform();
        for ineq in &catalog.leggett_form {
            assert_eq!(ineq.evaluate(&u).unwrap().slack, rat_int(1));
        }
    }

    #[test]
    fn leggett_upper_branch_saturated_by_equal_outcomes() {
        let catalog = Catalog::shared();
        let v = local_vertex([0, 0, 0, 0]);
        for branch in 0..2 {
            let ineq = catalog.find(Family::LeggettForm, &format!("leg:ab:hi:{branch}")).unwrap();
            assert!(ineq.evaluate(&v).unwrap().slack.is_zero());
        }
    }

    #[test]
    fn ns4_printed_example_and_bounds() {
        let catalog = Catalog::shared();
        let printed = catalog.find(Family::Ns4, NS4_PRINTED_EXAMPLE).unwrap();
        assert_eq!(printed.expectation_form.symbol(), "+<ab>+<a'b>+<a>^b-<a'>^b");
        let e = printed.evaluate(&signaling_protocol_4()).unwrap();
        assert_eq!(e.value, rat_int(4));
        assert!(!e.satisfied);
        for ineq in &catalog.ns4 {
            let (ns_max, _) = max_over(ineq, VertexKind::NoSignaling);
            assert_eq!(ns_max, rat_int(2), "{}", ineq.variant_id);
            let (gen_max, _) = max_over(ineq, VertexKind::General);
            assert_eq!(gen_max, rat_int(4), "{}", ineq.variant_id);
        }
    }

    #[test]
    fn ns6_printed_seed_and_bounds() {
        let catalog = Catalog::shared();
        let seed = catalog.find(Family::Ns6, NS6_SEED).unwrap();
        assert_eq!(
            seed.expectation_form.symbol(),
            "-<ab>-<a'b'>+<a>^b'+<b>^a'+<a'>^b+<b'>^a"
        );
        let e = seed.evaluate(&signaling_protocol_6()).unwrap();
        assert_eq!(e.value, rat_int(6));
        assert!(!e.satisfied);
        for ineq in &catalog.ns6 {
            let (ns_max, _) = max_over(ineq, VertexKind::NoSignaling);
            assert_eq!(ns_max, rat_int(2), "{}", ineq.variant_id);
            let (gen_max, _) = max_over(ineq, VertexKind::General);
            assert_eq!(gen_max, rat_int(6), "{}", ineq.variant_id);
        }
    }

    #[test]
    fn eval_uniform_chsh_slack() {
        let catalog = Catalog::shared();
        let chsh = &catalog.chsh[CHSH_CANONICAL_VARIANT];
        let e = chsh.evaluate(&Behavior::uniform()).unwrap();
        assert_eq!(e.value, rat_int(0));
        assert_eq!(e.slack, rat_int(2));
    }

    #[test]
    fn prob_form_half_coefficient_grammar() {
        let catalog = Catalog::shared();
        let upper = &catalog.chsh_prob_form[1];
        assert_eq!(
            upper.expectation_form.symbol(),
            "+1/2<ab>+1/2<ab'>+1/2<a'b>-1/2<a'b'>+2/1"
        );
    }

    #[test]
    fn term_symbols() {
        assert_eq!(Term::product(1, 0, 0).symbol(), "+<ab>");
        assert_eq!(Term::marginal(-1, Party::One, 1, 0).symbol(), "-<a'>^b");
        assert_eq!(Term::marginal(1, Party::Two, 0, 1).symbol(), "+<b>^a'");
        assert_eq!(Term::constant(rat(1, 2)).symbol(), "+1/2");
    }
}
