//! JSON wire formats: behaviors, expectation summaries and the catalog.
//!
//! Rationals are serialised as decimal strings `"n/d"` so that exact values
//! survive round-trips byte-for-byte. Behavior input additionally accepts
//! plain JSON numbers (integers exactly, floats by their binary expansion),
//! since approximate-mode tables often originate from floating point.

use crate::behavior::{Behavior, ExpectationSummary, NumericMode};
use crate::catalog::{Catalog, Family, LinearInequality};
use crate::rational::{format_rational, parse_rational, rational_from_f64, Rational};
use crate::scenario::Scenario;
use serde::{Deserialize, Serialize};

/// Serde helpers for rationals in the `"n/d"` wire format.
pub mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde helper for `Vec<Rational>` in the `"n/d"` format.
pub mod rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }
}

/// Serde helper for `Option<Vec<Rational>>`.
pub mod rational_vec_opt {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => rational_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    /// Malformed JSON, with the position the parser stopped at.
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    /// Well-formed JSON with the wrong structure or content.
    #[error("invalid behavior document: {0}")]
    Structure(String),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_syntax() || e.is_eof() {
            JsonError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
        } else {
            JsonError::Structure(e.to_string())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BehaviorDoc {
    scenario: Scenario,
    mode: String,
    p: Vec<Vec<Vec<Vec<Entry>>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Number(serde_json::Number),
}

impl Entry {
    fn to_rational(&self) -> Result<Rational, JsonError> {
        match self {
            Entry::Text(s) => {
                parse_rational(s).map_err(|e| JsonError::Structure(format!("bad rational {s:?}: {e}")))
            }
            Entry::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_integer(i.into()))
                } else if let Some(u) = n.as_u64() {
                    Ok(Rational::from_integer(u.into()))
                } else {
                    let f = n
                        .as_f64()
                        .ok_or_else(|| JsonError::Structure(format!("unreadable number {n}")))?;
                    rational_from_f64(f)
                        .ok_or_else(|| JsonError::Structure(format!("non-finite number {n}")))
                }
            }
        }
    }
}

/// Serialises a behavior in the standard wire format. Every entry is written
/// as `"n/d"`, in `[a][b][A][B]` nesting order; exact-mode round-trips are
/// byte-exact.
pub fn behavior_to_json(b: &Behavior) -> String {
    let scenario = *b.scenario();
    let mode = match b.mode() {
        NumericMode::Exact => "exact",
        NumericMode::Approx { .. } => "approx",
    };
    let (sa, sb) = scenario.settings;
    let (oa_n, ob_n) = scenario.outcomes;
    let mut p = Vec::with_capacity(sa);
    for a in 0..sa {
        let mut level_b = Vec::with_capacity(sb);
        for bb in 0..sb {
            let mut level_oa = Vec::with_capacity(oa_n);
            for oa in 0..oa_n {
                let mut level_ob = Vec::with_capacity(ob_n);
                for ob in 0..ob_n {
                    level_ob.push(Entry::Text(format_rational(b.entry(a, bb, oa, ob))));
                }
                level_oa.push(level_ob);
            }
            level_b.push(level_oa);
        }
        p.push(level_b);
    }
    let doc = BehaviorDoc { scenario, mode: mode.to_owned(), p };
    serde_json::to_string(&doc).expect("behavior document serialises")
}

/// Parses a behavior from the wire format. `approx_tolerance` supplies the
/// tolerance attached to `"approx"`-mode documents (the format itself does
/// not carry one); `None` uses the default of 1/10^9.
pub fn behavior_from_json(
    input: &str,
    approx_tolerance: Option<Rational>,
) -> Result<Behavior, JsonError> {
    let doc: BehaviorDoc = serde_json::from_str(input)?;
    let scenario = Scenario::new(doc.scenario.settings, doc.scenario.outcomes)
        .map_err(|e| JsonError::Structure(e.to_string()))?;
    let mode = match doc.mode.as_str() {
        "exact" => NumericMode::Exact,
        "approx" => NumericMode::Approx {
            tolerance: approx_tolerance.unwrap_or_else(NumericMode::default_tolerance),
        },
        other => {
            return Err(JsonError::Structure(format!(
                "mode must be \"exact\" or \"approx\", got {other:?}"
            )))
        }
    };
    let (sa, sb) = scenario.settings;
    let (oa_n, ob_n) = scenario.outcomes;
    if doc.p.len() != sa {
        return Err(JsonError::Structure(format!(
            "p has {} outer entries, scenario has {sa} party-1 settings",
            doc.p.len()
        )));
    }
    let mut table = Vec::with_capacity(scenario.table_len());
    for (a, level_b) in doc.p.iter().enumerate() {
        if level_b.len() != sb {
            return Err(JsonError::Structure(format!(
                "p[{a}] has {} entries, scenario has {sb} party-2 settings",
                level_b.len()
            )));
        }
        for (bb, level_oa) in level_b.iter().enumerate() {
            if level_oa.len() != oa_n {
                return Err(JsonError::Structure(format!(
                    "p[{a}][{bb}] has {} entries, scenario has {oa_n} party-1 outcomes",
                    level_oa.len()
                )));
            }
            for (oa, level_ob) in level_oa.iter().enumerate() {
                if level_ob.len() != ob_n {
                    return Err(JsonError::Structure(format!(
                        "p[{a}][{bb}][{oa}] has {} entries, scenario has {ob_n} party-2 outcomes",
                        level_ob.len()
                    )));
                }
                for entry in level_ob {
                    table.push(entry.to_rational()?);
                }
            }
        }
    }
    Behavior::new(scenario, mode, table).map_err(|e| JsonError::Structure(e.to_string()))
}

/// Fixed-key-order JSON form of an expectation summary.
#[derive(Serialize)]
pub struct ExpectationSummaryJson {
    pub products: ProductsJson,
    pub marginals_party1: Party1MarginalsJson,
    pub marginals_party2: Party2MarginalsJson,
}

#[derive(Serialize)]
pub struct ProductsJson {
    #[serde(rename = "ab")]
    pub ab: String,
    #[serde(rename = "ab'")]
    pub ab_prime: String,
    #[serde(rename = "a'b")]
    pub a_prime_b: String,
    #[serde(rename = "a'b'")]
    pub a_prime_b_prime: String,
}

#[derive(Serialize)]
pub struct Party1MarginalsJson {
    #[serde(rename = "a^b")]
    pub a_b: String,
    #[serde(rename = "a^b'")]
    pub a_b_prime: String,
    #[serde(rename = "a'^b")]
    pub a_prime_b: String,
    #[serde(rename = "a'^b'")]
    pub a_prime_b_prime: String,
}

#[derive(Serialize)]
pub struct Party2MarginalsJson {
    #[serde(rename = "b^a")]
    pub b_a: String,
    #[serde(rename = "b^a'")]
    pub b_a_prime: String,
    #[serde(rename = "b'^a")]
    pub b_prime_a: String,
    #[serde(rename = "b'^a'")]
    pub b_prime_a_prime: String,
}

impl From<&ExpectationSummary> for ExpectationSummaryJson {
    fn from(s: &ExpectationSummary) -> Self {
        let f = format_rational;
        ExpectationSummaryJson {
            products: ProductsJson {
                ab: f(&s.products[0]),
                ab_prime: f(&s.products[1]),
                a_prime_b: f(&s.products[2]),
                a_prime_b_prime: f(&s.products[3]),
            },
            marginals_party1: Party1MarginalsJson {
                a_b: f(&s.marginals_party1[0]),
                a_b_prime: f(&s.marginals_party1[1]),
                a_prime_b: f(&s.marginals_party1[2]),
                a_prime_b_prime: f(&s.marginals_party1[3]),
            },
            marginals_party2: Party2MarginalsJson {
                b_a: f(&s.marginals_party2[0]),
                b_a_prime: f(&s.marginals_party2[1]),
                b_prime_a: f(&s.marginals_party2[2]),
                b_prime_a_prime: f(&s.marginals_party2[3]),
            },
        }
    }
}

/// One catalog entry in the export format.
#[derive(Serialize)]
pub struct InequalityJson {
    pub family: Family,
    pub variant_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Vec<u8>>,
    pub expectation_form: String,
    pub prob_coeffs: Vec<String>,
    pub bound: String,
}

impl From<&LinearInequality> for InequalityJson {
    fn from(i: &LinearInequality) -> Self {
        InequalityJson {
            family: i.family,
            variant_id: i.variant_id.clone(),
            parameters: i.parameters.clone(),
            expectation_form: i.expectation_form.symbol(),
            prob_coeffs: i.prob_coeffs.iter().map(format_rational).collect(),
            bound: format_rational(&i.bound),
        }
    }
}

/// Exports the catalog (optionally restricted to one family) as a JSON list.
pub fn catalog_to_json(catalog: &Catalog, family: Option<Family>) -> String {
    let entries: Vec<InequalityJson> = match family {
        Some(f) => catalog.family(f).iter().map(InequalityJson::from).collect(),
        None => catalog.all().map(InequalityJson::from).collect(),
    };
    serde_json::to_string(&entries).expect("catalog serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::vertices::pr_box_canonical;

    #[test]
    fn behavior_roundtrip_is_byte_exact() {
        let pr = pr_box_canonical();
        let json = behavior_to_json(&pr);
        let back = behavior_from_json(&json, None).unwrap();
        assert_eq!(back, pr);
        assert_eq!(behavior_to_json(&back), json);
    }

    #[test]
    fn accepts_numbers_and_fraction_strings() {
        let json = r#"{"scenario":{"settings":[2,2],"outcomes":[2,2]},"mode":"exact","p":[[[[0.25,"1/4"],[0.25,0.25]],[["1/4","1/4"],["1/4","1/4"]]],[[["1/4","1/4"],["1/4","1/4"]],[["1/4","1/4"],["1/4","1/4"]]]]}"#;
        let b = behavior_from_json(json, None).unwrap();
        assert_eq!(b, Behavior::uniform());
    }

    #[test]
    fn syntax_errors_carry_their_position() {
        let err = behavior_from_json("{\"scenario\": ", None).unwrap_err();
        match err {
            JsonError::Syntax { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column >= 13);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn structural_errors_are_reported() {
        // Wrong dimensions.
        let json = r#"{"scenario":{"settings":[2,2],"outcomes":[2,2]},"mode":"exact","p":[[[["1/4"]]]]}"#;
        assert!(matches!(behavior_from_json(json, None), Err(JsonError::Structure(_))));
        // Unknown mode.
        let json = r#"{"scenario":{"settings":[2,2],"outcomes":[2,2]},"mode":"fuzzy","p":[]}"#;
        assert!(matches!(behavior_from_json(json, None), Err(JsonError::Structure(_))));
        // Zero denominator.
        let bad = behavior_to_json(&Behavior::uniform()).replace("1/4", "1/0");
        assert!(matches!(behavior_from_json(&bad, None), Err(JsonError::Structure(_))));
    }

    #[test]
    fn approx_tolerance_is_attached() {
        let json = behavior_to_json(&Behavior::uniform()).replace("exact", "approx");
        let b = behavior_from_json(&json, Some(rat(1, 100))).unwrap();
        match b.mode() {
            NumericMode::Approx { tolerance } => assert_eq!(*tolerance, rat(1, 100)),
            other => panic!("expected approx mode, got {other:?}"),
        }
    }

    #[test]
    fn catalog_export_contains_all_families() {
        let json = catalog_to_json(Catalog::shared(), None);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let entries = parsed.as_array().unwrap();
        assert_eq!(entries.len(), 8 + 8 + 2 + 16 + 16 + 32 + 14);
        assert!(json.contains("\"+<ab>+<a'b>+<a>^b-<a'>^b\""));
    }
}
