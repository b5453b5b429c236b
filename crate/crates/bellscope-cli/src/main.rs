//! `bellscope`: generation, checking, evaluation, optimization and theorem
//! verification for bipartite dichotomic behaviors, with JSON on stdin and
//! stdout so the verbs compose in pipelines.
//!
//! Exit codes: 0 for success and confirmed verdicts, 1 for violated
//! inequalities, non-membership or refuted claims, 2 for input errors.

use bellscope::behavior::{Behavior, NumericMode};
use bellscope::catalog::{max_over, Catalog, Family, LinearInequality};
use bellscope::json::{
    behavior_from_json, behavior_to_json, catalog_to_json, ExpectationSummaryJson, JsonError,
};
use bellscope::lp::HullMembership;
use bellscope::quantum::{singlet_behavior_with_tolerance, MeasurementAngles};
use bellscope::rational::{format_rational, parse_rational, rational_from_f64, Rational, Signed};
use bellscope::vertices::{
    self, facet_saturation_rank, local_membership, FacetStatus, LocalMembership, VertexKind,
    VertexSets,
};
use bellscope::verify::{self, SampleConfig, TheoremCertificate};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "bellscope", version, about = "Exact toolkit for bipartite dichotomic correlation polytopes and no-signaling certificates")]
struct Cli {
    /// Read behavior JSON from this file instead of stdin.
    #[arg(long, short = 'i', global = true)]
    input: Option<PathBuf>,
    /// Write output to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Tolerance for approx-mode behaviors, as "n/d" or a float
    /// (overrides the BELLSCOPE_TOLERANCE environment variable).
    #[arg(long, global = true)]
    tolerance: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a behavior in the standard JSON format.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Validate a behavior and check the no-signaling equalities.
    Check,
    /// Project a behavior onto its 12 expectation components.
    Project,
    /// Evaluate catalog inequalities on a behavior.
    Eval {
        #[arg(long)]
        family: String,
        /// Variant index or id; evaluates the whole family when omitted.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Maximize catalog inequalities over a polytope's vertices.
    Maximize {
        #[arg(long)]
        family: String,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        polytope: String,
    },
    /// Decide polytope membership for a behavior.
    Member {
        /// `local` (LHV decomposition or separating functional) or `ns`.
        #[arg(long)]
        polytope: String,
    },
    /// Saturation count, affine rank and facet status of an inequality.
    FacetRank {
        #[arg(long)]
        family: String,
        #[arg(long)]
        variant: String,
        #[arg(long)]
        polytope: String,
    },
    /// Produce machine-checked certificates for the headline claims.
    Verify {
        #[arg(value_enum)]
        claim: VerifyTarget,
        /// Seed for the sampled checks.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of sampled behaviors for the sampled checks.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Dump the inequality catalog.
    Catalog {
        #[arg(long)]
        family: Option<String>,
    },
}

#[derive(Subcommand)]
enum GenWhat {
    /// A PR-type extremal no-signaling box.
    Pr {
        #[arg(long)]
        variant: usize,
    },
    /// A local deterministic vertex from four outcome bits A[a]A[a']B[b]B[b'].
    Local {
        #[arg(long)]
        bits: String,
    },
    /// The singlet behavior at planar angles "a,a',b,b'" (radians).
    Singlet {
        #[arg(long)]
        angles: String,
        #[arg(long)]
        degrees: bool,
    },
    /// The uniform behavior (every entry 1/4).
    Uniform,
    /// The one-way signaling protocol that reaches 4 on the four-term family.
    #[command(name = "signaling-4")]
    Signaling4,
    /// The signaling protocol that reaches 6 on the six-term inequality.
    #[command(name = "signaling-6")]
    Signaling6,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    #[value(name = "roy-singh")]
    RoySingh,
    #[value(name = "ns-bounds")]
    NsBounds,
    #[value(name = "facet-ranks")]
    FacetRanks,
    Randomness,
    Gisin,
    All,
}

/// Errors that map to exit code 2.
struct InputError(String);

impl From<JsonError> for InputError {
    fn from(e: JsonError) -> Self {
        InputError(e.to_string())
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        InputError(format!("i/o error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(InputError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Result<u8, InputError> {
    let tolerance = resolve_tolerance(cli.tolerance.as_deref())?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let read_behavior = |tol: &Option<Rational>| -> Result<Behavior, InputError> {
        let mut raw = String::new();
        match &cli.input {
            Some(path) => {
                raw = std::fs::read_to_string(path)?;
            }
            None => {
                std::io::stdin().lock().read_to_string(&mut raw)?;
            }
        }
        Ok(behavior_from_json(&raw, tol.clone())?)
    };

    let code = match cli.command {
        Command::Gen { what } => {
            let behavior = generate(what, &tolerance)?;
            writeln!(out, "{}", behavior_to_json(&behavior))?;
            EXIT_OK
        }
        Command::Check => {
            let behavior = read_behavior(&tolerance)?;
            let report = check_report(&behavior);
            let ok = report.valid && report.no_signaling;
            writeln!(out, "{}", to_json(&report))?;
            if ok {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            }
        }
        Command::Project => {
            let behavior = read_behavior(&tolerance)?;
            let summary = behavior
                .project_expectations()
                .map_err(|e| InputError(e.to_string()))?;
            writeln!(out, "{}", to_json(&ExpectationSummaryJson::from(&summary)))?;
            EXIT_OK
        }
        Command::Eval { family, variant } => {
            let behavior = read_behavior(&tolerance)?;
            let family = parse_family(&family)?;
            let ineqs = select_variants(family, variant.as_deref())?;
            let mut results = Vec::new();
            let mut all_satisfied = true;
            for ineq in ineqs {
                let e = ineq.evaluate(&behavior).map_err(|e| InputError(e.to_string()))?;
                all_satisfied &= e.satisfied;
                results.push(EvalJson {
                    variant_id: ineq.variant_id.clone(),
                    inequality: ineq.display(),
                    value: format_rational(&e.value),
                    satisfied: e.satisfied,
                    slack: format_rational(&e.slack),
                });
            }
            writeln!(out, "{}", to_json(&EvalOutput { family: family.name(), results }))?;
            if all_satisfied {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            }
        }
        Command::Maximize { family, variant, polytope } => {
            let family = parse_family(&family)?;
            let kind = parse_polytope(&polytope)?;
            let ineqs = select_variants(family, variant.as_deref())?;
            let results: Vec<MaximizeJson> = ineqs
                .iter()
                .map(|ineq| {
                    let (optimum, argmax) = max_over(ineq, kind);
                    MaximizeJson {
                        variant_id: ineq.variant_id.clone(),
                        optimum: format_rational(&optimum),
                        argmax,
                    }
                })
                .collect();
            writeln!(
                out,
                "{}",
                to_json(&MaximizeOutput {
                    family: family.name(),
                    polytope: polytope_name(kind),
                    results,
                })
            )?;
            EXIT_OK
        }
        Command::Member { polytope } => {
            let behavior = read_behavior(&tolerance)?;
            match polytope.as_str() {
                "local" => {
                    let outcome =
                        local_membership(&behavior).map_err(|e| InputError(e.to_string()))?;
                    let (json, member) = match outcome {
                        LocalMembership::Member { weights } => (
                            MemberOutput {
                                polytope: "local",
                                member: true,
                                weights: Some(
                                    weights
                                        .into_iter()
                                        .map(|(label, w)| (label, format_rational(&w)))
                                        .collect(),
                                ),
                                separating: None,
                            },
                            true,
                        ),
                        LocalMembership::NonMember { separating } => (
                            MemberOutput {
                                polytope: "local",
                                member: false,
                                weights: None,
                                separating: Some(SeparatingJson {
                                    coeffs: separating
                                        .coeffs
                                        .iter()
                                        .map(format_rational)
                                        .collect(),
                                    vertex_max: format_rational(&separating.vertex_max),
                                    point_value: format_rational(&separating.point_value),
                                    normalized_point_value: format_rational(
                                        &separating.normalized_point_value(),
                                    ),
                                }),
                            },
                            false,
                        ),
                    };
                    writeln!(out, "{}", to_json(&json))?;
                    if member {
                        EXIT_OK
                    } else {
                        EXIT_VIOLATED
                    }
                }
                "ns" | "no-signaling" | "no_signaling" => {
                    let report = vertices::ns_membership(&behavior);
                    let exact = *behavior.mode() == NumericMode::Exact;
                    let hull = if exact {
                        let point = behavior
                            .flat16()
                            .map_err(|e| InputError(e.to_string()))?
                            .to_vec();
                        let verts = VertexSets::shared().no_signaling.points();
                        let result = bellscope::lp::hull_membership(&point, &verts)
                            .map_err(|e| InputError(e.to_string()))?;
                        Some(matches!(result, HullMembership::Member { .. }))
                    } else {
                        None
                    };
                    let json = NsMemberOutput {
                        polytope: "no_signaling",
                        no_signaling: report.ok(),
                        violated_equalities: report
                            .violations
                            .iter()
                            .map(|v| v.to_string())
                            .collect(),
                        hull_membership: hull,
                        consistent: hull.map(|h| h == report.ok()),
                    };
                    let ok = report.ok() && json.consistent != Some(false);
                    writeln!(out, "{}", to_json(&json))?;
                    if ok {
                        EXIT_OK
                    } else {
                        EXIT_VIOLATED
                    }
                }
                other => return Err(InputError(format!("unknown polytope {other:?}"))),
            }
        }
        Command::FacetRank { family, variant, polytope } => {
            let family = parse_family(&family)?;
            let kind = parse_polytope(&polytope)?;
            let ineq = find_variant(family, &variant)?;
            let set = VertexSets::shared().get(kind);
            let json = match facet_saturation_rank(ineq, set) {
                FacetStatus::Valid {
                    saturating_count,
                    affine_rank,
                    is_facet_of_dim8,
                    ..
                } => FacetRankOutput {
                    family: family.name(),
                    variant_id: ineq.variant_id.clone(),
                    polytope: polytope_name(kind),
                    status: "valid",
                    saturating_count: Some(saturating_count),
                    affine_rank: Some(affine_rank),
                    is_facet_of_dim8: Some(is_facet_of_dim8),
                    violator: None,
                    value: None,
                },
                FacetStatus::NotValidForPolytope { violator, value } => FacetRankOutput {
                    family: family.name(),
                    variant_id: ineq.variant_id.clone(),
                    polytope: polytope_name(kind),
                    status: "not_valid_for_polytope",
                    saturating_count: None,
                    affine_rank: None,
                    is_facet_of_dim8: None,
                    violator: Some(violator),
                    value: Some(format_rational(&value)),
                },
            };
            writeln!(out, "{}", to_json(&json))?;
            EXIT_OK
        }
        Command::Verify { claim, seed, samples } => {
            let mut sample = SampleConfig::default();
            if let Some(seed) = seed {
                sample.seed = seed;
            }
            if let Some(count) = samples {
                sample.count = count;
            }
            let certificates: Vec<TheoremCertificate> = match claim {
                VerifyTarget::RoySingh => vec![verify::verify_roy_singh_trivial(&sample)],
                VerifyTarget::NsBounds => vec![verify::verify_ns_families()],
                VerifyTarget::FacetRanks => verify::verify_facet_ranks(),
                VerifyTarget::Randomness => vec![verify::verify_randomness_theorem()],
                VerifyTarget::Gisin => vec![verify::verify_gisin_variant()],
                VerifyTarget::All => verify::verify_all(&sample),
            };
            let all_confirmed = certificates.iter().all(|c| c.confirmed());
            if certificates.len() == 1 {
                writeln!(out, "{}", certificates[0].to_json())?;
            } else {
                writeln!(out, "{}", to_json(&certificates))?;
            }
            if all_confirmed {
                EXIT_OK
            } else {
                EXIT_VIOLATED
            }
        }
        Command::Catalog { family } => {
            let family = match family {
                Some(name) => Some(parse_family(&name)?),
                None => None,
            };
            writeln!(out, "{}", catalog_to_json(Catalog::shared(), family))?;
            EXIT_OK
        }
    };
    Ok(code)
}

fn resolve_tolerance(flag: Option<&str>) -> Result<Option<Rational>, InputError> {
    let source = match flag {
        Some(s) => Some(s.to_owned()),
        None => std::env::var("BELLSCOPE_TOLERANCE").ok(),
    };
    let Some(raw) = source else {
        return Ok(None);
    };
    let parsed = match parse_rational(&raw) {
        Ok(r) => Some(r),
        Err(_) => raw.parse::<f64>().ok().and_then(rational_from_f64),
    };
    match parsed {
        Some(r) if !r.is_negative() => Ok(Some(r)),
        _ => Err(InputError(format!("tolerance {raw:?} is not a finite nonnegative number"))),
    }
}

fn generate(what: GenWhat, tolerance: &Option<Rational>) -> Result<Behavior, InputError> {
    match what {
        GenWhat::Pr { variant } => {
            vertices::pr_box(variant).map_err(|e| InputError(e.to_string()))
        }
        GenWhat::Local { bits } => {
            let parsed: Vec<usize> = bits
                .chars()
                .map(|c| match c {
                    '0' | '+' => Ok(0usize),
                    '1' | '-' => Ok(1usize),
                    other => Err(InputError(format!("bad outcome bit {other:?} in --bits"))),
                })
                .collect::<Result<_, _>>()?;
            let bits: [usize; 4] = parsed
                .try_into()
                .map_err(|_| InputError("--bits needs exactly four entries (A[a]A[a']B[b]B[b'])".into()))?;
            Ok(vertices::local_vertex(bits))
        }
        GenWhat::Singlet { angles, degrees } => {
            let parts: Vec<f64> = angles
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| InputError(format!("cannot parse --angles: {e}")))?;
            let [a, ap, b, bp]: [f64; 4] = parts
                .try_into()
                .map_err(|_| InputError("--angles needs exactly four values a,a',b,b'".into()))?;
            let m = if degrees {
                MeasurementAngles::from_degrees(a, ap, b, bp)
            } else {
                MeasurementAngles::new(a, ap, b, bp)
            };
            let tol = tolerance.clone().unwrap_or_else(NumericMode::default_tolerance);
            Ok(singlet_behavior_with_tolerance(&m, tol))
        }
        GenWhat::Uniform => Ok(Behavior::uniform()),
        GenWhat::Signaling4 => Ok(vertices::signaling_protocol_4()),
        GenWhat::Signaling6 => Ok(vertices::signaling_protocol_6()),
    }
}

fn check_report(behavior: &Behavior) -> CheckOutput {
    let validation = behavior.validate();
    let ns = behavior.check_no_signaling();
    CheckOutput {
        valid: validation.ok(),
        violations: validation.violations.iter().map(|v| v.to_string()).collect(),
        no_signaling: ns.ok(),
        violated_equalities: ns.violations.iter().map(|v| v.to_string()).collect(),
        signaling_gap: format_rational(&behavior.signaling_gap()),
    }
}

fn parse_family(name: &str) -> Result<Family, InputError> {
    Family::parse(name).ok_or_else(|| {
        InputError(format!(
            "unknown family {name:?}; one of trivial, chsh, chsh_prob_form, roy_singh, leggett_form, ns4, ns6"
        ))
    })
}

fn parse_polytope(name: &str) -> Result<VertexKind, InputError> {
    match name {
        "general" => Ok(VertexKind::General),
        "local" => Ok(VertexKind::Local),
        "ns" | "no-signaling" | "no_signaling" => Ok(VertexKind::NoSignaling),
        other => Err(InputError(format!(
            "unknown polytope {other:?}; one of general, local, ns"
        ))),
    }
}

fn polytope_name(kind: VertexKind) -> &'static str {
    match kind {
        VertexKind::General => "general",
        VertexKind::Local => "local",
        VertexKind::NoSignaling => "no_signaling",
    }
}

fn select_variants(
    family: Family,
    variant: Option<&str>,
) -> Result<Vec<&'static LinearInequality>, InputError> {
    match variant {
        None => Ok(Catalog::shared().family(family).iter().collect()),
        Some(v) => Ok(vec![find_variant(family, v)?]),
    }
}

/// A variant is addressed either by its position in the family or by its id.
fn find_variant(family: Family, variant: &str) -> Result<&'static LinearInequality, InputError> {
    let members = Catalog::shared().family(family);
    if let Ok(index) = variant.parse::<usize>() {
        return members.get(index).ok_or_else(|| {
            InputError(format!(
                "variant index {index} out of range for {} ({} members)",
                family.name(),
                members.len()
            ))
        });
    }
    members
        .iter()
        .find(|i| i.variant_id == variant)
        .ok_or_else(|| InputError(format!("no variant {variant:?} in family {}", family.name())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serialises")
}

#[derive(Serialize)]
struct CheckOutput {
    valid: bool,
    violations: Vec<String>,
    no_signaling: bool,
    violated_equalities: Vec<String>,
    signaling_gap: String,
}

#[derive(Serialize)]
struct EvalOutput {
    family: &'static str,
    results: Vec<EvalJson>,
}

#[derive(Serialize)]
struct EvalJson {
    variant_id: String,
    inequality: String,
    value: String,
    satisfied: bool,
    slack: String,
}

#[derive(Serialize)]
struct MaximizeOutput {
    family: &'static str,
    polytope: &'static str,
    results: Vec<MaximizeJson>,
}

#[derive(Serialize)]
struct MaximizeJson {
    variant_id: String,
    optimum: String,
    argmax: Vec<String>,
}

#[derive(Serialize)]
struct MemberOutput {
    polytope: &'static str,
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    separating: Option<SeparatingJson>,
}

#[derive(Serialize)]
struct SeparatingJson {
    coeffs: Vec<String>,
    vertex_max: String,
    point_value: String,
    normalized_point_value: String,
}

#[derive(Serialize)]
struct NsMemberOutput {
    polytope: &'static str,
    no_signaling: bool,
    violated_equalities: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hull_membership: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistent: Option<bool>,
}

#[derive(Serialize)]
struct FacetRankOutput {
    family: &'static str,
    variant_id: String,
    polytope: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    saturating_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    affine_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    is_facet_of_dim8: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}
