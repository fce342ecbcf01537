//! Manifest-driven batch runs: a JSON list of jobs, each an operation with
//! parameters and an optional expected verdict, executed under one thread
//! budget with deterministic output ordering.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use skewhad::construct::{
    build_j_cosets, family_construct_with, index4_screen, lift_j_set, partition_construct_with,
    JSet,
};
use skewhad::error::Error;
use skewhad::field::build_field;
use skewhad::sw::{classify_case, CaseKind};
use skewhad::verify::{
    field_info, verify_paley_pds_with, verify_skew_hadamard_with, Certificate, SetSpec,
    VerifyMethod, VerifyOptions, CERTIFICATE_SCHEMA_VERSION,
};

/// Manifest schema revision accepted by this binary.
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Failures that should stop the whole run (process exit code 2), as
/// opposed to verdict mismatches (exit code 1).
#[derive(Debug)]
pub enum RunError {
    ManifestParse(String),
    UnknownOp(String),
    Lib(Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::ManifestParse(msg) => write!(f, "manifest parse error: {msg}"),
            RunError::UnknownOp(op) => write!(f, "unknown op {op:?}"),
            RunError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Lib(e)
    }
}

/// Global settings block; every field optional, CLI flags override.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub threads: Option<usize>,
    pub tolerance: Option<f64>,
    pub exact_ceiling: Option<u64>,
    pub float_ceiling: Option<u64>,
    pub output_path: Option<String>,
}

impl Settings {
    /// Fold command-line overrides over the manifest's own settings.
    pub fn with_overrides(mut self, overrides: &Settings) -> Settings {
        if overrides.threads.is_some() {
            self.threads = overrides.threads;
        }
        if overrides.tolerance.is_some() {
            self.tolerance = overrides.tolerance;
        }
        if overrides.exact_ceiling.is_some() {
            self.exact_ceiling = overrides.exact_ceiling;
        }
        if overrides.float_ceiling.is_some() {
            self.float_ceiling = overrides.float_ceiling;
        }
        if overrides.output_path.is_some() {
            self.output_path = overrides.output_path.clone();
        }
        self
    }

    fn verify_options(&self) -> VerifyOptions {
        let mut opts = VerifyOptions::default();
        if self.tolerance.is_some() {
            opts.tolerance = self.tolerance;
        }
        if let Some(c) = self.exact_ceiling {
            opts.exact_ceiling = c;
        }
        if let Some(c) = self.float_ceiling {
            opts.float_ceiling = c;
        }
        opts
    }
}

/// Expected verdict for a job; `note` matches the "unverified" verdict of
/// structural feasibility certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
    Note,
}

impl Expect {
    fn verdict(self) -> &'static str {
        match self {
            Expect::Pass => "pass",
            Expect::Fail => "fail",
            Expect::Note => "unverified",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub op: String,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default = "empty_params")]
    pub params: Value,
    #[serde(default)]
    pub expect: Option<Expect>,
}

fn empty_params() -> Value {
    Value::Object(serde_json::Map::new())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    #[serde(default)]
    pub settings: Settings,
    #[serde(default)]
    pub jobs: Vec<Job>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, RunError> {
        let m: Manifest =
            serde_json::from_str(text).map_err(|e| RunError::ManifestParse(e.to_string()))?;
        if m.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(RunError::ManifestParse(format!(
                "schema_version {} not supported (expected {MANIFEST_SCHEMA_VERSION})",
                m.schema_version
            )));
        }
        if m.settings.exact_ceiling == Some(0) || m.settings.float_ceiling == Some(0) {
            return Err(RunError::ManifestParse("ceilings must be positive".to_string()));
        }
        Ok(m)
    }
}

/// One job's outcome in the report: the certificate plus the expectation
/// bookkeeping that decides the process exit code.
#[derive(Debug, Serialize)]
pub struct JobReport {
    pub index: usize,
    pub op: String,
    pub label: Option<String>,
    pub expect: Option<Expect>,
    pub verdict: String,
    pub matched: bool,
    pub certificate: Certificate,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub jobs: usize,
    pub matched: usize,
    pub mismatched: usize,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub settings: Settings,
    pub jobs: Vec<JobReport>,
    pub summary: Summary,
    pub total_runtime_ms: u64,
}

impl RunReport {
    pub fn all_matched(&self) -> bool {
        self.summary.mismatched == 0
    }

    /// Fixed-width table for people; one row per job, in manifest order.
    pub fn table(&self) -> String {
        let mut out = String::from("idx  op                   expect  verdict     match  label\n");
        for j in &self.jobs {
            let expect = j.expect.map(|e| e.verdict()).unwrap_or("-");
            out.push_str(&format!(
                "{:<4} {:<20} {:<7} {:<11} {:<6} {}\n",
                j.index,
                j.op,
                expect,
                j.verdict,
                if j.matched { "yes" } else { "NO" },
                j.label.as_deref().unwrap_or(""),
            ));
        }
        out.push_str(&format!(
            "{} jobs, {} matched, {} mismatched ({} ms)",
            self.summary.jobs, self.summary.matched, self.summary.mismatched, self.total_runtime_ms
        ));
        out
    }
}

/// Execute every job (in parallel under the shared rayon pool) and
/// assemble the report in manifest order.
pub fn run_manifest(manifest: &Manifest, settings: &Settings) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let opts = settings.verify_options();
    let outcomes: Vec<Result<Certificate, RunError>> = manifest
        .jobs
        .par_iter()
        .map(|job| run_job(job, &opts))
        .collect();
    let mut jobs = Vec::with_capacity(outcomes.len());
    for (index, (job, outcome)) in manifest.jobs.iter().zip(outcomes).enumerate() {
        let certificate = outcome?;
        let verdict = certificate.verdict.clone();
        let matched = job.expect.map(|e| e.verdict() == verdict).unwrap_or(true);
        jobs.push(JobReport {
            index,
            op: job.op.clone(),
            label: job.label.clone(),
            expect: job.expect,
            verdict,
            matched,
            certificate,
        });
    }
    let matched = jobs.iter().filter(|j| j.matched).count();
    let summary = Summary {
        jobs: jobs.len(),
        matched,
        mismatched: jobs.len() - matched,
    };
    Ok(RunReport {
        schema_version: MANIFEST_SCHEMA_VERSION,
        settings: settings.clone(),
        jobs,
        summary,
        total_runtime_ms: start.elapsed().as_millis() as u64,
    })
}

fn bad_params(op: &str, e: serde_json::Error) -> RunError {
    RunError::ManifestParse(format!("bad params for op {op:?}: {e}"))
}

/// Which family verdict a constructed set should be checked against.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindParam {
    /// Decide by q mod 4: 3 → skew Hadamard, 1 → Paley-type PDS.
    #[default]
    Auto,
    Skew,
    Pds,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum MethodParam {
    #[default]
    Exact,
    Spectral,
    Float,
}

impl MethodParam {
    fn method(self) -> VerifyMethod {
        match self {
            MethodParam::Exact => VerifyMethod::Exact,
            MethodParam::Spectral => VerifyMethod::Spectral,
            MethodParam::Float => VerifyMethod::Float,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldParams {
    p: u64,
    f: u32,
}

fn verify_in_field(
    target: &FieldParams,
    spec: &SetSpec,
    kind: KindParam,
    method: VerifyMethod,
    opts: &VerifyOptions,
) -> Result<Certificate, RunError> {
    let field = build_field(target.p, target.f)?;
    let skew = match kind {
        KindParam::Skew => true,
        KindParam::Pds => false,
        KindParam::Auto => field.q() % 4 == 3,
    };
    let cert = if skew {
        verify_skew_hadamard_with(&field, spec, method, opts)?
    } else {
        verify_paley_pds_with(&field, spec, method, opts)?
    };
    Ok(cert)
}

/// A synthetic certificate for ops that report structure rather than a
/// set-family verdict (classification, screening, bare constructions).
fn structural_certificate(
    kind: &str,
    k: Option<u64>,
    indices: Option<Vec<u64>>,
    verdict: &str,
    witness: Value,
    started: Instant,
) -> Certificate {
    Certificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        kind: kind.to_string(),
        field: None,
        k,
        indices,
        method: kind.to_string(),
        verdict: verdict.to_string(),
        witness,
        tolerance: None,
        float_evidence: None,
        deviations: Vec::new(),
        runtime_ms: started.elapsed().as_millis() as u64,
    }
}

fn run_job(job: &Job, opts: &VerifyOptions) -> Result<Certificate, RunError> {
    let started = Instant::now();
    let params = job.params.clone();
    match job.op.as_str() {
        "verify" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                p: u64,
                f: u32,
                k: u64,
                indices: Vec<u64>,
                #[serde(default)]
                kind: KindParam,
                #[serde(default)]
                method: MethodParam,
            }
            let p: P = serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let target = FieldParams { p: p.p, f: p.f };
            let spec = SetSpec::Classes { k: p.k, indices: p.indices };
            verify_in_field(&target, &spec, p.kind, p.method.method(), opts)
        }
        "classify" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                k: u64,
                p: u64,
                f: u32,
                #[serde(default)]
                expect_kind: Option<CaseKind>,
            }
            let p: P = serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let c = classify_case(p.k, p.p, p.f)?;
            let verdict = match p.expect_kind {
                Some(want) if want != c.verdict => "fail",
                _ => "pass",
            };
            let witness = serde_json::to_value(&c).expect("classification serializes");
            Ok(structural_certificate("classification", Some(p.k), None, verdict, witness, started))
        }
        "partition-construct" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                p: u64,
                f: u32,
                k: u64,
                #[serde(default)]
                method: MethodParam,
            }
            let p: P = serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let field = build_field(p.p, p.f)?;
            let (_, cert) = partition_construct_with(&field, p.k, p.method.method(), opts)?;
            Ok(cert)
        }
        "family" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                p1: u64,
                m: u32,
                p: u64,
                #[serde(default)]
                method: MethodParam,
            }
            let p: P = serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let (_, cert) = family_construct_with(p.p1, p.m, p.p, p.method.method(), opts)?;
            Ok(cert)
        }
        "lift" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                modulus: u64,
                indices: Vec<u64>,
                m: u32,
                p: u64,
                #[serde(default)]
                verify: Option<FieldParams>,
                #[serde(default)]
                kind: KindParam,
                #[serde(default)]
                method: MethodParam,
            }
            let p: P = serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let j = JSet::new(p.modulus, p.indices, "explicit")?;
            let lifted = lift_j_set(&j, p.m, p.p)?;
            match p.verify {
                Some(target) => {
                    verify_in_field(&target, &lifted.spec(), p.kind, p.method.method(), opts)
                }
                None => {
                    let witness = serde_json::to_value(&lifted).expect("index sets serialize");
                    Ok(structural_certificate(
                        "construction",
                        Some(lifted.modulus),
                        Some(lifted.indices.clone()),
                        "unverified",
                        witness,
                        started,
                    ))
                }
            }
        }
        "coset-j" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                modulus: u64,
                p: u64,
                g: i64,
                s: u64,
                i_set: Vec<u64>,
                #[serde(default)]
                base: u64,
                #[serde(default)]
                verify: Option<FieldParams>,
                #[serde(default)]
                kind: KindParam,
                #[serde(default)]
                method: MethodParam,
            }
            let p: P = serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let j = build_j_cosets(p.modulus, p.p, p.g, p.s, &p.i_set, p.base)?;
            match p.verify {
                Some(target) => {
                    verify_in_field(&target, &j.spec(), p.kind, p.method.method(), opts)
                }
                None => {
                    let witness = serde_json::to_value(&j).expect("index sets serialize");
                    Ok(structural_certificate(
                        "construction",
                        Some(j.modulus),
                        Some(j.indices.clone()),
                        "unverified",
                        witness,
                        started,
                    ))
                }
            }
        }
        "index4" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                p1: u64,
                p: u64,
                #[serde(default)]
                expect_b: Option<u64>,
            }
            let p: P = serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let report = index4_screen(p.p1, p.p)?;
            let b_ok = p.expect_b.is_none() || report.b == p.expect_b;
            let verdict = if report.passes && b_ok { "pass" } else { "fail" };
            let witness = serde_json::to_value(&report).expect("screen reports serialize");
            Ok(structural_certificate("index4_screen", Some(p.p1), None, verdict, witness, started))
        }
        "field" => {
            let p: FieldParams =
                serde_json::from_value(params).map_err(|e| bad_params(&job.op, e))?;
            let field = build_field(p.p, p.f)?;
            let witness = serde_json::to_value(field_info(&field)).expect("field info serializes");
            Ok(structural_certificate("field", None, None, "pass", witness, started))
        }
        other => Err(RunError::UnknownOp(other.to_string())),
    }
}
