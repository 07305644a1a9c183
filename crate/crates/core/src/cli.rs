//! Command-line front end: argument parsing, dispatch and report rendering.
//!
//! Every command produces a [`Report`]; JSON is the machine contract, LaTeX
//! and text are renderings of the same data.  Exit codes: `0` pass, `1`
//! mathematical failure, `2` usage or parse error.

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::covers::{self, FamilySpec};
use crate::enveloping::{self, NCPresentation, PresentationJson};
use crate::error::{Error, Result};
use crate::homlie::{HomLieAlgebra, HomLieJson};
use crate::zeta::{self, Budgets, ZetaConfig, ZetaElement, ZetaSeries};

/// Version tag of every emitted report.
pub const REPORT_FORMAT: &str = "homlie-report/1";

/// Exit code for a passing verdict.
pub const EXIT_PASS: i32 = 0;
/// Exit code for a mathematical failure.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage, parse and construction errors.
pub const EXIT_USAGE: i32 = 2;

/// Top-level command line.
#[derive(Debug, Parser)]
#[command(name = "homlie", version, about = "Hom-Lie algebras, enveloping algebras and zeta elements")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Seed for randomized checks (echoed in the report).
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Write the report to a file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Include wall-clock timing in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
    /// The command.
    #[command(subcommand)]
    pub command: Command,
}

/// Output formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON.
    Json,
    /// LaTeX fragment.
    Latex,
    /// Plain text summary.
    Text,
}

/// Family names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    /// Kummer–Witt algebras.
    KummerWitt,
    /// Jackson subalgebras.
    Jackson,
    /// Artin–Schreier algebras.
    ArtinSchreier,
    /// The Jackson 𝔰𝔩₂.
    JacksonSl2,
}

/// Family parameters.
#[derive(Clone, Debug, Default, Args)]
pub struct FamilyParams {
    /// Degree `n` of the cover.
    #[arg(long)]
    pub n: Option<usize>,
    /// Twist exponent `r`.
    #[arg(long)]
    pub r: Option<usize>,
    /// `b`: `sym` or an integer.
    #[arg(long)]
    pub b: Option<String>,
    /// Characteristic `p` (Artin–Schreier).
    #[arg(long)]
    pub p: Option<usize>,
    /// `ν`: `sym` or an integer (Artin–Schreier).
    #[arg(long)]
    pub nu: Option<String>,
    /// `s₀` expression (Jackson 𝔰𝔩₂).
    #[arg(long)]
    pub s0: Option<String>,
    /// `s₁` expression (Jackson 𝔰𝔩₂).
    #[arg(long)]
    pub s1: Option<String>,
    /// Full family descriptor as JSON (overrides the flags).
    #[arg(long)]
    pub spec: Option<String>,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the structure constants of a family.
    Gen {
        /// Family.
        #[arg(value_enum)]
        family: FamilyName,
        /// Parameters.
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Verify the axioms of a structure-constant document (`-` for stdin).
    Check {
        /// Input file: an algebra document or a `gen` report.
        input: String,
    },
    /// Structural analysis of a family.
    Analyze {
        /// What to compute.
        #[arg(value_enum)]
        what: AnalyzeWhat,
        /// Family.
        #[arg(long, value_enum)]
        family: FamilyName,
        /// Parameters.
        #[command(flatten)]
        params: FamilyParams,
    },
    /// Enveloping-algebra computations.
    Env {
        /// What to compute.
        #[arg(value_enum)]
        what: EnvWhat,
        /// Presentation family (ignored with `--input`).
        #[arg(long, value_enum, default_value_t = EnvFamily::Jackson)]
        family: EnvFamily,
        /// `n` for the Jackson and Kummer–Witt presentations.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// `b`: `sym` or an integer (Jackson).
        #[arg(long, default_value = "sym")]
        b: String,
        /// Presentation JSON file instead of a family.
        #[arg(long)]
        input: Option<String>,
        /// Element to normalise (`nf`) or test (`center`).
        #[arg(long)]
        element: Option<String>,
        /// Degree bound (confluence, centre scan).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Zeta element of a fibre over a finite field.
    Zeta {
        /// Family (only `jackson`).
        #[arg(long, value_enum, default_value_t = ZetaFamily::Jackson)]
        family: ZetaFamily,
        /// Order of `ξ`.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// The prime `q`.
        #[arg(long)]
        q: u64,
        /// `ξ` as a residue (default: the smallest of order `n`).
        #[arg(long)]
        xi: Option<u64>,
        /// `b` as an integer.
        #[arg(long, default_value_t = 1)]
        b: i64,
        /// Truncation degree.
        #[arg(long, default_value_t = 3)]
        terms: usize,
        /// Largest module dimension searched.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// PI degree (default `n`).
        #[arg(long)]
        pi_degree: Option<usize>,
    },
}

/// `analyze` targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalyzeWhat {
    /// Derived series over the fraction field.
    Solvability,
    /// Coordinate subalgebras.
    Subalgebras,
    /// Pairs of basis vectors with vanishing bracket.
    ZeroBrackets,
}

/// `env` targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnvWhat {
    /// The presentation itself (and comparisons with printed relations).
    Presentation,
    /// Normal form of `--element`.
    Nf,
    /// Overlap resolution up to `--degree`.
    Confluence,
    /// Centre verdicts.
    Center,
    /// Normal elements on the standard support.
    NormalElt,
    /// Down-up relations.
    Downup,
}

/// Presentation families for `env`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnvFamily {
    /// The simplified Jackson presentation.
    Jackson,
    /// The Jackson presentation derived from bracket data.
    JacksonBrackets,
    /// The full Kummer–Witt presentation.
    KummerWitt,
    /// The Jackson 𝔰𝔩₂.
    Sl2,
    /// Its `q`-specialisation.
    Sl2q,
}

/// Families for `zeta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ZetaFamily {
    /// Jackson fibres.
    Jackson,
}

/// A command report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    /// Report format version.
    pub format: &'static str,
    /// Tool name and version.
    pub tool: String,
    /// Command name.
    pub command: String,
    /// Echo of the effective parameters.
    pub config: Value,
    /// Seed.
    pub seed: u64,
    /// `pass` or `fail`.
    pub verdict: String,
    /// Command-specific result.
    pub result: Value,
    /// Witness of a failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    /// Disagreements with printed reference tables.
    pub discrepancies: Vec<String>,
    /// Other remarks (budgets, lower bounds).
    pub notes: Vec<String>,
    /// Wall-clock time, only with `--timing`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
    /// LaTeX rendering (not serialised).
    #[serde(skip)]
    pub latex: String,
    /// Text rendering (not serialised).
    #[serde(skip)]
    pub text: String,
}

impl Report {
    fn new(command: &str, config: Value, seed: u64) -> Self {
        Report {
            format: REPORT_FORMAT,
            tool: format!("homlie {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            config,
            seed,
            verdict: "pass".into(),
            result: Value::Null,
            witness: None,
            discrepancies: Vec::new(),
            notes: Vec::new(),
            timing_ms: None,
            latex: String::new(),
            text: String::new(),
        }
    }

    fn fail_if(&mut self, failed: bool) {
        if failed {
            self.verdict = "fail".into();
        }
    }

    /// Whether the verdict is a pass.
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    /// Render in a format.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
                s.push('\n');
                s
            }
            Format::Latex => ensure_newline(&self.latex),
            Format::Text => {
                let mut s = format!("{} {}: {}\n", self.tool, self.command, self.verdict);
                s.push_str(&ensure_newline(&self.text));
                for d in &self.discrepancies {
                    s.push_str(&format!("discrepancy: {d}\n"));
                }
                for n in &self.notes {
                    s.push_str(&format!("note: {n}\n"));
                }
                s
            }
        }
    }
}

fn ensure_newline(s: &str) -> String {
    if s.is_empty() || s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

/// Build a [`FamilySpec`] from a name and flags, validating through the
/// same schema as JSON descriptors (unknown fields rejected).
pub fn family_spec(name: FamilyName, params: &FamilyParams) -> Result<FamilySpec> {
    if let Some(spec) = &params.spec {
        return FamilySpec::from_json(spec);
    }
    let mut obj = serde_json::Map::new();
    let tag = match name {
        FamilyName::KummerWitt => "kummer-witt",
        FamilyName::Jackson => "jackson",
        FamilyName::ArtinSchreier => "artin-schreier",
        FamilyName::JacksonSl2 => "jackson-sl2",
    };
    obj.insert("family".into(), json!(tag));
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            obj.insert(k.into(), v);
        }
    };
    put("n", params.n.map(|x| json!(x)));
    put("r", params.r.map(|x| json!(x)));
    put("b", params.b.clone().map(Value::String));
    put("p", params.p.map(|x| json!(x)));
    put("nu", params.nu.clone().map(Value::String));
    put("s0", params.s0.clone().map(Value::String));
    put("s1", params.s1.clone().map(Value::String));
    FamilySpec::from_json(&Value::Object(obj).to_string())
}

fn reference_comparison(spec: &FamilySpec, l: &HomLieAlgebra) -> Result<Option<covers::TableComparison>> {
    let table = match spec {
        FamilySpec::KummerWitt { n, r, b } if b == "sym" => covers::kummer_reference_table(*n, *r),
        FamilySpec::ArtinSchreier { p, nu, b } if nu == "sym" && b == "sym" => covers::artin_schreier_reference_table(*p),
        _ => None,
    };
    table.map(|t| covers::compare_with_reference(l, &t)).transpose()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable")
}

fn cmd_gen(family: FamilyName, params: &FamilyParams, seed: u64) -> Result<Report> {
    let spec = family_spec(family, params)?;
    let l = spec.build()?;
    let axioms = l.check_axioms();
    let comparison = reference_comparison(&spec, &l)?;
    let mut report = Report::new("gen", to_value(&spec), seed);
    report.fail_if(!axioms.passed());
    if let Some(c) = &comparison {
        report.discrepancies = c.discrepancies.clone();
    }
    report.result = json!({
        "algebra": to_value(&l.to_json()),
        "axioms": to_value(&axioms),
        "comparison": comparison.as_ref().map(to_value),
    });
    report.latex = l.to_latex();
    report.text = format!("{l}");
    Ok(report)
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    Ok(s)
}

/// Parse an algebra document, accepting either a bare structure-constant
/// document or a `gen` report containing one.
pub fn parse_algebra_document(text: &str) -> Result<HomLieAlgebra> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("JSON: {e}")))?;
    let doc = match v.get("result").and_then(|r| r.get("algebra")) {
        Some(inner) if v.get("format").is_some() => inner.clone(),
        _ => v,
    };
    let doc: HomLieJson = serde_json::from_value(doc).map_err(|e| Error::Parse(format!("algebra document: {e}")))?;
    HomLieAlgebra::from_json(&doc)
}

fn cmd_check(input: &str, seed: u64) -> Result<Report> {
    let l = parse_algebra_document(&read_input(input)?)?;
    let axioms = l.check_axioms();
    let mut report = Report::new("check", json!({ "input": input }), seed);
    report.fail_if(!axioms.passed());
    if let Some((i, j)) = axioms.alternating_witness {
        report.witness = Some(json!({ "axiom": "alternating", "pair": [i, j] }));
    } else if let Some((i, j, k)) = axioms.jacobi_witness {
        let ring = l.ring();
        let unit = |t: usize| -> Vec<_> { (0..l.rank()).map(|s| ring.int(i64::from(s == t))).collect() };
        let residual = l.jacobi_residual(&unit(i), &unit(j), &unit(k));
        report.witness = Some(json!({
            "axiom": "jacobi",
            "triple": [i, j, k],
            "residual": HomLieAlgebra::format_vector(&residual),
        }));
    }
    report.result = json!({ "rank": l.rank(), "q": l.q().to_string(), "axioms": to_value(&axioms) });
    report.text = format!(
        "rank {}, q = {}, alternating: {}, Jacobi: {}",
        l.rank(),
        l.q(),
        axioms.alternating,
        axioms.jacobi
    );
    report.latex = l.to_latex();
    Ok(report)
}

fn cmd_analyze(what: AnalyzeWhat, family: FamilyName, params: &FamilyParams, seed: u64) -> Result<Report> {
    let spec = family_spec(family, params)?;
    let l = spec.build()?;
    let mut report = Report::new("analyze", json!({ "what": format!("{what:?}").to_lowercase(), "family": to_value(&spec) }), seed);
    match what {
        AnalyzeWhat::Solvability => {
            let ds = l.derived_series(true)?;
            report.result = json!({ "dims": ds.dims, "solvable": ds.solvable });
            report.text = format!("derived series dimensions {:?}; solvable: {}", ds.dims, ds.solvable);
            report.latex = format!("\\dim L^{{(i)}} = {:?},\\quad \\text{{{}}}", ds.dims, if ds.solvable { "solvable" } else { "not solvable" });
        }
        AnalyzeWhat::Subalgebras => {
            let subs = l.subalgebra_scan()?;
            report.text = format!("{} coordinate subalgebras: {:?}", subs.len(), subs);
            report.latex = subs
                .iter()
                .map(|s| format!("\\langle {} \\rangle", s.iter().map(|i| format!("\\varepsilon_{{{i}}}")).collect::<Vec<_>>().join(", ")))
                .collect::<Vec<_>>()
                .join("\\\\\n");
            report.result = json!({ "subalgebras": subs });
        }
        AnalyzeWhat::ZeroBrackets => {
            let zeros = l.zero_pairs();
            report.text = format!("vanishing brackets: {zeros:?}");
            report.latex = zeros
                .iter()
                .map(|(i, j)| format!("\\langle\\varepsilon_{{{i}}},\\varepsilon_{{{j}}}\\rangle = 0"))
                .collect::<Vec<_>>()
                .join("\\\\\n");
            report.result = json!({ "zeroPairs": zeros });
        }
    }
    Ok(report)
}

fn env_presentation(family: EnvFamily, n: usize, b: &str, input: Option<&str>) -> Result<NCPresentation> {
    if let Some(path) = input {
        let doc: PresentationJson =
            serde_json::from_str(&read_input(path)?).map_err(|e| Error::Parse(format!("presentation document: {e}")))?;
        return NCPresentation::from_json(&doc);
    }
    let parse_b = || -> Result<i64> { b.parse().map_err(|_| Error::Parse(format!("b must be \"sym\" or an integer, got {b}"))) };
    match family {
        EnvFamily::Jackson => {
            let p = enveloping::jackson_symbolic(n)?;
            if b == "sym" {
                Ok(p)
            } else {
                enveloping::jackson_specialise_b(&p, parse_b()?)
            }
        }
        EnvFamily::JacksonBrackets => enveloping::jackson_from_homlie(n),
        EnvFamily::KummerWitt => enveloping::kummer_witt_presentation(n),
        EnvFamily::Sl2 => Err(Error::Unsupported(
            "the Jackson sl2 relations have non-unit leading coefficients over Z[s0, s1]; only `env presentation` is available".into(),
        )),
        EnvFamily::Sl2q => {
            let (ring, rels) = enveloping::sl2q_relations()?;
            NCPresentation::from_relations(&ring, enveloping::sl2_labels(), &rels)
        }
    }
}

fn latex_rules(p: &NCPresentation) -> String {
    let mut s = String::from("\\begin{align*}\n");
    let lines: Vec<String> = p
        .rules()
        .iter()
        .map(|r| format!("{} &= {}", crate::homlie::latex_value(&r.lhs.format(p.labels())), crate::homlie::latex_value(&r.rhs.format(p.labels()))))
        .collect();
    s.push_str(&lines.join(",\\\\\n"));
    s.push_str("\n\\end{align*}");
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_env(
    what: EnvWhat,
    family: EnvFamily,
    n: usize,
    b: &str,
    input: Option<&str>,
    element: Option<&str>,
    degree: Option<usize>,
    seed: u64,
) -> Result<Report> {
    let config = json!({
        "what": format!("{what:?}").to_lowercase(),
        "family": if input.is_some() { Value::Null } else { json!(format!("{family:?}").to_lowercase()) },
        "n": n,
        "b": b,
        "input": input,
        "element": element,
        "degree": degree,
    });
    let mut report = Report::new("env", config, seed);
    if input.is_none() && family == EnvFamily::Sl2 && what == EnvWhat::Presentation {
        let l = covers::jackson_sl2("s0", "s1")?;
        let labels = enveloping::sl2_labels();
        let computed: Vec<_> = enveloping::enveloping_relations(&l).into_iter().map(|(_, r)| r).collect();
        let direct = enveloping::compare_relations(&computed, &enveloping::sl2_reference_relations(l.ring())?, &labels);
        let quotient = enveloping::compare_relations(&computed, &enveloping::sl2_reference_quotient(l.ring())?, &labels);
        report.fail_if(!direct.exact_match);
        report.discrepancies.extend(direct.discrepancies.iter().cloned());
        report.discrepancies.extend(quotient.discrepancies.iter().map(|d| format!("quotient: {d}")));
        let shown: Vec<String> = computed.iter().map(|r| r.format(&labels)).collect();
        report.text = shown.iter().map(|r| format!("{r} = 0")).collect::<Vec<_>>().join("\n");
        report.latex = shown.iter().map(|r| format!("{} = 0", crate::homlie::latex_value(r))).collect::<Vec<_>>().join(",\\\\\n");
        report.result = json!({ "relations": shown, "comparison": to_value(&direct), "quotientComparison": to_value(&quotient) });
        return Ok(report);
    }
    let p = env_presentation(family, n, b, input)?;
    let jackson_family = input.is_none() && family == EnvFamily::Jackson;
    match what {
        EnvWhat::Presentation => {
            let mut result = json!({ "presentation": to_value(&p.to_json()?), "rules": p.format_rules() });
            if input.is_none() {
                match family {
                    EnvFamily::JacksonBrackets | EnvFamily::Jackson if b == "sym" => {
                        let shift = enveloping::jackson_shift_report(n)?;
                        report.fail_if(!shift.matches_simplified || !shift.round_trip);
                        result["shift"] = to_value(&shift);
                    }
                    EnvFamily::Sl2q => {
                        let labels = enveloping::sl2_labels();
                        let cmp = enveloping::compare_relations(&p.relations(), &enveloping::sl2q_reference_relations(p.ring())?, &labels);
                        report.discrepancies.extend(cmp.discrepancies.iter().cloned());
                        result["comparison"] = to_value(&cmp);
                    }
                    _ => {}
                }
            }
            report.text = format!("{p}");
            report.latex = latex_rules(&p);
            report.result = result;
        }
        EnvWhat::Nf => {
            let text = element.ok_or_else(|| Error::Parse("env nf needs --element".into()))?;
            let x = p.parse_element(text)?;
            let nf = p.normal_form(&x)?;
            let shown = nf.format(p.labels());
            report.result = json!({ "element": x.format(p.labels()), "normalForm": shown });
            report.text = format!("{} = {}", x.format(p.labels()), shown);
            report.latex = format!("{} = {}", crate::homlie::latex_value(&x.format(p.labels())), crate::homlie::latex_value(&shown));
        }
        EnvWhat::Confluence => {
            let d = degree.unwrap_or(6);
            let cap = d.max(p.rules().iter().map(|r| r.lhs.len()).max().unwrap_or(0)) + 2;
            let c = p.with_degree_cap(cap).confluence_check(d)?;
            report.fail_if(!c.confluent);
            if let Some(f) = c.failures.first() {
                report.witness = Some(to_value(f));
            }
            report.text = format!(
                "{} overlaps up to degree {d}; confluent: {}; irreducible words per degree {:?}",
                c.overlaps_checked, c.confluent, c.irreducible_counts
            );
            report.latex = format!("\\text{{confluent to degree {d}: {}}}", c.confluent);
            report.result = to_value(&c);
        }
        EnvWhat::Center => {
            let mut result = serde_json::Map::new();
            let mut lines = Vec::new();
            if let Some(text) = element {
                let x = p.parse_element(text)?;
                let central = p.is_central(&x)?;
                report.fail_if(!central);
                if !central {
                    let comm: Vec<String> = p.commutators(&x)?.iter().map(|c| c.format(p.labels())).collect();
                    report.witness = Some(json!({ "commutators": comm }));
                }
                lines.push(format!("{text}: central = {central}"));
                result.insert("element".into(), json!(text));
                result.insert("central".into(), json!(central));
            } else if jackson_family {
                let c = enveloping::centre_report(&p, n)?;
                report.fail_if(!c.nth_powers_central.iter().all(|&x| x));
                lines.push(format!("e0^{n}, e1^{n}, e2^{n} central: {:?}", c.nth_powers_central));
                result.insert("report".into(), to_value(&c));
            }
            if let Some(d) = degree {
                let basis = p.centre_scan(d)?;
                let shown: Vec<String> = basis.iter().map(|c| c.format(p.labels())).collect();
                lines.push(format!("central elements of degree <= {d}: {}", shown.join(", ")));
                result.insert("scanDegree".into(), json!(d));
                result.insert("centralBasis".into(), json!(shown));
            }
            if result.is_empty() {
                return Err(Error::Parse("env center needs --element, --degree or the jackson family".into()));
            }
            report.text = lines.join("\n");
            report.latex = lines.iter().map(|l| format!("\\text{{{l}}}")).collect::<Vec<_>>().join("\\\\\n");
            report.result = Value::Object(result);
        }
        EnvWhat::NormalElt => {
            if !jackson_family || b != "sym" {
                return Err(Error::Unsupported("env normal-elt is defined for the symbolic Jackson presentation".into()));
            }
            let o = enveloping::omega_report(n)?;
            report.fail_if(!o.solutions_verified || o.solution_dimension == 0);
            for cmp in &o.printed {
                for c in cmp.coefficients.iter().filter(|c| !c.agrees) {
                    report.discrepancies.push(format!(
                        "normal element p = ({}): coefficient of {} printed {} but solved {}",
                        cmp.p.join(", "),
                        c.word,
                        c.printed,
                        c.solved.clone().unwrap_or_else(|| "none".into())
                    ));
                }
            }
            report.text = format!("solution space dimension {}; elements: {}", o.solution_dimension, o.elements.join("; "));
            report.latex = o.elements.iter().map(|e| crate::homlie::latex_value(e)).collect::<Vec<_>>().join(",\\\\\n");
            report.result = to_value(&o);
        }
        EnvWhat::Downup => {
            if !jackson_family || b != "sym" {
                return Err(Error::Unsupported("env downup is defined for the symbolic Jackson presentation".into()));
            }
            let d = enveloping::jackson_downup(n)?;
            report.fail_if(!d.holds);
            if !d.holds {
                report.witness = Some(json!({ "first": d.first_residual, "second": d.second_residual }));
            }
            report.text = format!("down-up relations with a = b hold: {}", d.holds);
            report.latex = format!("\\text{{down-up relations hold: {}}}", d.holds);
            report.result = to_value(&d);
        }
    }
    Ok(report)
}

/// JSON for a series: exact coefficient strings.
fn series_json(s: &ZetaSeries) -> Value {
    json!(s.coefficient_strings())
}

/// The zeta report body.
pub fn zeta_json(z: &ZetaElement) -> Value {
    let per_k: Vec<Value> = z
        .levels
        .iter()
        .map(|l| {
            json!({
                "k": l.k,
                "fieldSize": l.field_size,
                "onePoints": l.one_dim_points,
                "simplesByDim": l.simples_by_dim,
                "centralPoints": l.central_points,
                "ramPoints": l.ram_points,
                "azuPoints": l.azumaya_points,
                "ramCount": l.ram_count,
                "extClasses": l.ext_classes.iter().map(|(c, m)| json!({ "class": c.0, "multiplicity": m })).collect::<Vec<_>>(),
                "trace": l.trace,
                "complete": l.complete,
            })
        })
        .collect();
    json!({
        "q": z.q,
        "piDegree": z.pi_degree,
        "centralElements": z.central_elements,
        "perK": per_k,
        "zetaRam": series_json(&z.zeta_ram),
        "zetaAzu": series_json(&z.zeta_azu),
        "zetaTangent": series_json(&z.zeta_tangent),
        "logTangent": z.log_tangent().iter().map(|(k, w, cls)| json!({
            "k": k,
            "weight": w.to_string(),
            "classes": cls.iter().map(|(c, m)| json!({ "class": c.0, "multiplicity": m })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "roundTrip": z.zeta_ram.round_trip_ok() && z.zeta_azu.round_trip_ok() && z.zeta_tangent.round_trip_ok(),
    })
}

fn latex_series(name: &str, s: &ZetaSeries) -> String {
    let terms: Vec<String> = s
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| {
            let c = crate::homlie::latex_value(&c.to_string());
            match i {
                0 => c,
                1 => format!("{c}\\,t"),
                _ => format!("{c}\\,t^{{{i}}}"),
            }
        })
        .collect();
    format!("{name}(t) &= {} + O(t^{{{}}})", terms.join(" + "), s.coefficients.len())
}

#[allow(clippy::too_many_arguments)]
fn cmd_zeta(n: usize, q: u64, xi: Option<u64>, b: i64, terms: usize, max_dim: usize, pi_degree: Option<usize>, seed: u64) -> Result<Report> {
    let budgets = Budgets::from_env();
    let config = json!({ "family": "jackson", "n": n, "q": q, "xi": xi, "b": b, "terms": terms, "maxDim": max_dim, "piDegree": pi_degree, "budgets": to_value(&budgets) });
    let mut report = Report::new("zeta", config, seed);
    let p = zeta::jackson_fiber(n, q, xi, b)?;
    let z = zeta::zeta_element(
        &p,
        &ZetaConfig { terms, max_dim, pi_degree: Some(pi_degree.unwrap_or(n)), centre_degree: n, budgets },
    )?;
    for l in z.levels.iter().filter(|l| !l.complete) {
        report.notes.push(format!(
            "k = {}: the matrix search exceeded its budget over a field of size {}; only one-dimensional simples were used, so the counts are lower bounds",
            l.k, l.field_size
        ));
    }
    let body = zeta_json(&z);
    report.fail_if(body["roundTrip"] != json!(true));
    report.text = format!(
        "zeta_ram: {}\nzeta_azu: {}\nzeta_tangent: {}",
        z.zeta_ram.coefficient_strings().join(", "),
        z.zeta_azu.coefficient_strings().join(", "),
        z.zeta_tangent.coefficient_strings().join(", ")
    );
    report.latex = format!(
        "\\begin{{align*}}\n{},\\\\\n{},\\\\\n{}\n\\end{{align*}}",
        latex_series("\\zeta_{\\mathrm{ram}}", &z.zeta_ram),
        latex_series("\\zeta_{\\mathrm{azu}}", &z.zeta_azu),
        latex_series("\\zeta_{\\nearrow}", &z.zeta_tangent)
    );
    report.result = body;
    Ok(report)
}

/// Run a parsed command line, producing a report.
pub fn execute(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let seed = cli.seed;
    let mut report = match &cli.command {
        Command::Gen { family, params } => cmd_gen(*family, params, seed)?,
        Command::Check { input } => cmd_check(input, seed)?,
        Command::Analyze { what, family, params } => cmd_analyze(*what, *family, params, seed)?,
        Command::Env { what, family, n, b, input, element, degree } => {
            cmd_env(*what, *family, *n, b, input.as_deref(), element.as_deref(), *degree, seed)?
        }
        Command::Zeta { family: ZetaFamily::Jackson, n, q, xi, b, terms, max_dim, pi_degree } => {
            cmd_zeta(*n, *q, *xi, *b, *terms, *max_dim, *pi_degree, seed)?
        }
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn write_atomically(path: &PathBuf, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.clone().into_os_string();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

/// Full entry point: parse arguments, execute, print, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let out = report.render(cli.format);
            let written = match &cli.output {
                Some(path) => write_atomically(path, &out),
                None => {
                    print!("{out}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("{}", json!({ "error": format!("output: {e}") }));
                return EXIT_USAGE;
            }
            if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            EXIT_USAGE
        }
    }
}
