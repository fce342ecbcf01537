//! Certificate rendering: JSON for machines, a one-line summary (plus
//! witness details on failure) for people.

use clap::ValueEnum;
use skewhad::verify::Certificate;

/// Output format selector shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Serialize a certificate in the requested format.
pub fn emit_certificate(cert: &Certificate, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(cert).expect("certificates serialize"),
        Format::Text => {
            let field = cert
                .field
                .as_ref()
                .map(|f| format!("q={}^{}", f.p, f.f))
                .or_else(|| cert.k.map(|v| format!("v={v}")))
                .unwrap_or_else(|| "-".to_string());
            let k = cert.k.map(|k| k.to_string()).unwrap_or_else(|| "-".to_string());
            let mut out = format!(
                "{kind} {field} k={k} method={method} verdict={verdict} ({ms} ms)",
                kind = cert.kind,
                method = cert.method,
                verdict = cert.verdict,
                ms = cert.runtime_ms,
            );
            if cert.verdict != "pass" {
                out.push_str(&format!(
                    "\nwitness: {}",
                    serde_json::to_string_pretty(&cert.witness).expect("witness serializes")
                ));
            }
            for d in &cert.deviations {
                out.push_str(&format!("\nnote: {d}"));
            }
            out
        }
    }
}
