//! Command-line driver: construct and verify difference sets from
//! cyclotomic classes, one subcommand per library operation, plus a
//! manifest runner for batch sweeps.
//!
//! Exit codes: 0 success (all verdicts as expected), 1 verdict mismatch
//! or failed verification, 2 infrastructure errors (bad input, unknown
//! op, unparseable manifest).

mod emit;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use emit::{emit_certificate, Format};
use manifest::{run_manifest, Manifest, RunError, Settings};
use skewhad::charsum::{class_count_table, davenport_hasse_check};
use skewhad::construct::{
    build_j_cosets, family_construct_with, index4_screen, lift_j_set, partition_construct_with,
    JSet,
};
use skewhad::field::build_field;
use skewhad::sw::{classify_case, find_partition};
use skewhad::verify::{
    field_info, verify_paley_pds_with, verify_skew_hadamard_with, Certificate, SetSpec,
    VerifyMethod, VerifyOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Spectral,
    Float,
}

impl MethodArg {
    fn method(self) -> VerifyMethod {
        match self {
            MethodArg::Exact => VerifyMethod::Exact,
            MethodArg::Spectral => VerifyMethod::Spectral,
            MethodArg::Float => VerifyMethod::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    /// Decide by q mod 4: 3 → skew Hadamard, 1 → Paley-type PDS.
    Auto,
    Skew,
    Pds,
}

/// Verification tunables accepted by every verifying subcommand.
#[derive(Debug, clap::Args)]
struct VerifyFlags {
    /// Verification route.
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,
    /// Absolute float-comparison tolerance (default: derived from the
    /// computed error bound).
    #[arg(long)]
    tolerance: Option<f64>,
    /// q ceiling for quadratic counting and exact element spectra.
    #[arg(long)]
    exact_ceiling: Option<u64>,
    /// q ceiling for the float transform.
    #[arg(long)]
    float_ceiling: Option<u64>,
}

impl VerifyFlags {
    fn options(&self) -> VerifyOptions {
        let mut opts = VerifyOptions::default();
        opts.tolerance = self.tolerance;
        if let Some(c) = self.exact_ceiling {
            opts.exact_ceiling = c;
        }
        if let Some(c) = self.float_ceiling {
            opts.float_ceiling = c;
        }
        opts
    }
}

#[derive(Parser)]
#[command(
    name = "skewhad",
    version,
    about = "Construct and verify skew Hadamard difference sets and Paley-type \
             partial difference sets from cyclotomic classes"
)]
struct Cli {
    /// Thread budget for this process (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe the finite field F_{p^f}: modulus polynomial and generator.
    Field {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
    },
    /// Exact Gauss sum G_f(chi^j) for the order-k character of F_{p^f}.
    Gauss {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
        #[arg(long)]
        k: u64,
        /// Character exponent.
        #[arg(long, default_value_t = 1)]
        j: u64,
    },
    /// Degree-lift (Davenport–Hasse) product identity check for each
    /// nontrivial character of order dividing k.
    DhCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
        #[arg(long)]
        k: u64,
        /// Lift degree.
        #[arg(long)]
        ell: u64,
    },
    /// Classify (k, p, f) into subfield / semi-primitive / sporadic.
    Classify {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
    },
    /// Compute the coset partition of Z_k with its exact sign identity.
    Partition {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
        #[arg(long)]
        k: u64,
    },
    /// Verify a union of cyclotomic classes as a skew Hadamard difference
    /// set or a Paley-type partial difference set.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
        #[arg(long)]
        k: u64,
        /// Comma-separated class indices, e.g. 0,1,9.
        #[arg(long, value_delimiter = ',')]
        indices: Vec<u64>,
        #[arg(long, value_enum, default_value_t = KindArg::Auto)]
        kind: KindArg,
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Build the index set from the field's coset partition and verify
    /// the resulting class union.
    PartitionConstruct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        f: u32,
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Lift an index set mod 2k to mod 2kp^{m-1} and optionally verify it
    /// over a field.
    Lift {
        /// Index-set modulus 2k (k an odd prime).
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_delimiter = ',')]
        indices: Vec<u64>,
        /// Tower level: target modulus is 2k·p^{m-1} where k is prime.
        #[arg(long)]
        m: u32,
        /// Field characteristic.
        #[arg(long)]
        p: u64,
        /// Verify over F_{p^vf} (requires --verify-f).
        #[arg(long)]
        verify_f: Option<u32>,
        #[arg(long, value_enum, default_value_t = KindArg::Auto)]
        kind: KindArg,
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Construct the (p1, m, p) family member end to end: partition the
    /// base field, lift, verify (or report structure past the ceiling).
    Family {
        #[arg(long)]
        p1: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Run the index-4 screen on (p1, p) and list candidate index sets.
    Index4 {
        #[arg(long)]
        p1: u64,
        #[arg(long)]
        p: u64,
    },
    /// Build an index set as a union of multiplicative power cosets
    /// mod 2p1.
    CosetJ {
        /// Modulus 2p1.
        #[arg(long)]
        modulus: u64,
        /// Generator of the cosets (the field characteristic).
        #[arg(long)]
        p: u64,
        /// Representative of the quotient group, possibly negative.
        #[arg(long, allow_hyphen_values = true)]
        g: i64,
        /// Shift applied to the doubled cosets.
        #[arg(long, default_value_t = 0)]
        s: u64,
        /// Comma-separated quotient exponents kept undoubled.
        #[arg(long, value_delimiter = ',')]
        i_set: Vec<u64>,
        /// Extra element: 0 or p1.
        #[arg(long, default_value_t = 0)]
        base: u64,
    },
    /// Execute a manifest of jobs with expected verdicts.
    Run {
        manifest: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        exact_ceiling: Option<u64>,
        #[arg(long)]
        float_ceiling: Option<u64>,
        /// Write the JSON report here as well as to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            emit_err(&format!("error: {msg}"));
            ExitCode::from(2)
        }
    }
}

/// Exit code from a certificate verdict: pass → 0, anything else → 1.
fn verdict_code(cert: &Certificate) -> ExitCode {
    if cert.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// Print to stdout, tolerating a closed pipe: the verdict still decides
/// the exit code even when the consumer stopped reading.
fn emit_line(s: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{s}");
}

/// Same for stderr.
fn emit_err(s: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{s}");
}

fn print_cert(cert: &Certificate, format: Format) -> ExitCode {
    emit_line(&emit_certificate(cert, format));
    verdict_code(cert)
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let format = cli.format;
    match cli.command {
        Command::Field { p, f } => {
            let field = build_field(p, f).map_err(|e| e.to_string())?;
            let info = field_info(&field);
            emit_line(&serde_json::to_string_pretty(&info).expect("field info serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Gauss { p, f, k, j } => {
            let field = build_field(p, f).map_err(|e| e.to_string())?;
            let table = class_count_table(&field, k).map_err(|e| e.to_string())?;
            let g = table.gauss_sum(j);
            let out = serde_json::json!({
                "p": p, "f": f, "k": k, "j": j,
                "conductor": g.conductor(),
                "gauss_sum": g,
                "abs_squared": (g.try_mul(&g.conj()).map_err(|e| e.to_string())?),
            });
            emit_line(&serde_json::to_string_pretty(&out).expect("serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::DhCheck { p, f, k, ell } => {
            let field = build_field(p, f).map_err(|e| e.to_string())?;
            let table = class_count_table(&field, k).map_err(|e| e.to_string())?;
            let mut failures = Vec::new();
            let mut checked = 0u64;
            // Skip characters inside the order-ℓ subgroup: the product
            // identity degenerates when χ^ℓ is trivial.
            for j in (1..k).filter(|j| j * ell % k != 0) {
                checked += 1;
                if !davenport_hasse_check(&table, j, ell).map_err(|e| e.to_string())? {
                    failures.push(j);
                }
            }
            let passed = failures.is_empty();
            let out = serde_json::json!({
                "p": p, "f": f, "k": k, "ell": ell,
                "characters_checked": checked,
                "characters_skipped": (k - 1) - checked,
                "failures": failures,
                "passed": passed,
            });
            emit_line(&serde_json::to_string_pretty(&out).expect("serializes"));
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Classify { k, p, f } => {
            let c = classify_case(k, p, f).map_err(|e| e.to_string())?;
            emit_line(&serde_json::to_string_pretty(&c).expect("serializes"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Partition { p, f, k } => {
            let field = build_field(p, f).map_err(|e| e.to_string())?;
            let part = find_partition(&field, k).map_err(|e| e.to_string())?;
            emit_line(&serde_json::to_string_pretty(&part).expect("serializes"));
            Ok(if part.verified_identity { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify { p, f, k, indices, kind, flags } => {
            let field = build_field(p, f).map_err(|e| e.to_string())?;
            let spec = SetSpec::Classes { k, indices };
            let opts = flags.options();
            let skew = match kind {
                KindArg::Skew => true,
                KindArg::Pds => false,
                KindArg::Auto => field.q() % 4 == 3,
            };
            let cert = if skew {
                verify_skew_hadamard_with(&field, &spec, flags.method.method(), &opts)
            } else {
                verify_paley_pds_with(&field, &spec, flags.method.method(), &opts)
            }
            .map_err(|e| e.to_string())?;
            Ok(print_cert(&cert, format))
        }
        Command::PartitionConstruct { p, f, k, flags } => {
            let field = build_field(p, f).map_err(|e| e.to_string())?;
            let (_, cert) =
                partition_construct_with(&field, k, flags.method.method(), &flags.options())
                    .map_err(|e| e.to_string())?;
            Ok(print_cert(&cert, format))
        }
        Command::Lift { modulus, indices, m, p, verify_f, kind, flags } => {
            let j = JSet::new(modulus, indices, "explicit").map_err(|e| e.to_string())?;
            let lifted = lift_j_set(&j, m, p).map_err(|e| e.to_string())?;
            match verify_f {
                None => {
                    emit_line(&serde_json::to_string_pretty(&lifted).expect("index sets serialize"));
                    Ok(ExitCode::SUCCESS)
                }
                Some(f) => {
                    let field = build_field(p, f).map_err(|e| e.to_string())?;
                    let opts = flags.options();
                    let skew = match kind {
                        KindArg::Skew => true,
                        KindArg::Pds => false,
                        KindArg::Auto => field.q() % 4 == 3,
                    };
                    let cert = if skew {
                        verify_skew_hadamard_with(&field, &lifted.spec(), flags.method.method(), &opts)
                    } else {
                        verify_paley_pds_with(&field, &lifted.spec(), flags.method.method(), &opts)
                    }
                    .map_err(|e| e.to_string())?;
                    Ok(print_cert(&cert, format))
                }
            }
        }
        Command::Family { p1, m, p, flags } => {
            let (_, cert) = family_construct_with(p1, m, p, flags.method.method(), &flags.options())
                .map_err(|e| e.to_string())?;
            Ok(print_cert(&cert, format))
        }
        Command::Index4 { p1, p } => {
            let report = index4_screen(p1, p).map_err(|e| e.to_string())?;
            emit_line(&serde_json::to_string_pretty(&report).expect("serializes"));
            Ok(if report.passes { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::CosetJ { modulus, p, g, s, i_set, base } => {
            let j = build_j_cosets(modulus, p, g, s, &i_set, base).map_err(|e| e.to_string())?;
            emit_line(&serde_json::to_string_pretty(&j).expect("index sets serialize"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { manifest, tolerance, exact_ceiling, float_ceiling, output } => {
            let text = std::fs::read_to_string(&manifest)
                .map_err(|e| format!("cannot read {}: {e}", manifest.display()))?;
            let parsed = Manifest::parse(&text).map_err(|e| e.to_string())?;
            let overrides = Settings {
                threads: cli.threads,
                tolerance,
                exact_ceiling,
                float_ceiling,
                output_path: output.map(|p| p.display().to_string()),
            };
            let settings = parsed.settings.clone().with_overrides(&overrides);
            // The global pool was already sized from --threads if given;
            // otherwise size it from the manifest settings.
            if cli.threads.is_none() {
                if let Some(n) = settings.threads {
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global()
                        .map_err(|e| e.to_string())?;
                }
            }
            let report = match run_manifest(&parsed, &settings) {
                Ok(r) => r,
                Err(e @ (RunError::ManifestParse(_) | RunError::UnknownOp(_) | RunError::Lib(_))) => {
                    return Err(e.to_string());
                }
            };
            emit_err(&report.table());
            let json = serde_json::to_string_pretty(&report).expect("reports serialize");
            emit_line(&json);
            if let Some(path) = &settings.output_path {
                std::fs::write(path, &json).map_err(|e| format!("cannot write {path}: {e}"))?;
            }
            Ok(if report.all_matched() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
