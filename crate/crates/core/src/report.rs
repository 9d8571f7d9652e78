//! Structured check results and their deterministic JSON encoding.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::curvature::{curvature_to_json, CurvatureOperator};
use crate::numerics::Matrix;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pretty JSON with every float printed to 17 significant digits, so that
/// doubles round-trip exactly. Non-finite floats become `null`.
struct Exact<'a>(PrettyFormatter<'a>);

impl Formatter for Exact<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes with the exact-float pretty formatter and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Exact(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types always serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Lowercase hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn curvature_digest(r: &CurvatureOperator) -> String {
    digest(curvature_to_json(r).as_bytes())
}

/// Digest of a matrix's entries (real and imaginary parts, row-major,
/// little-endian bytes).
pub fn matrix_digest(m: &Matrix) -> String {
    let mut bytes = Vec::with_capacity(16 * m.as_slice().len() + 16);
    bytes.extend_from_slice(&(m.rows() as u64).to_le_bytes());
    bytes.extend_from_slice(&(m.cols() as u64).to_le_bytes());
    for z in m.as_slice() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    digest(&bytes)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub digests: BTreeMap<String, String>,
    pub seeds: Vec<u64>,
}

impl Inputs {
    pub fn with_digest(mut self, key: &str, value: String) -> Self {
        self.digests.insert(key.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seeds.push(seed);
        self
    }
}

/// Result of one verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: Inputs,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Diagnostic checks are reported but never count as failures.
    pub diagnostic: bool,
    pub spectrum: Vec<f64>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl CheckReport {
    /// A gating check that passes iff `residual ≤ tolerance`.
    pub fn residual_check(check: impl Into<String>, inputs: Inputs, residual: f64, tolerance: f64) -> Self {
        CheckReport {
            check: check.into(),
            inputs,
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            diagnostic: false,
            spectrum: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    pub fn with_spectrum(mut self, spectrum: Vec<f64>) -> Self {
        self.spectrum = spectrum;
        self
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = details;
        self
    }

    pub fn as_diagnostic(mut self) -> Self {
        self.diagnostic = true;
        self
    }

    /// Whether this entry makes the run fail.
    pub fn fails(&self) -> bool {
        !self.pass && !self.diagnostic
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub diagnostic: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut s = Summary {
            total: reports.len(),
            ..Summary::default()
        };
        for r in reports {
            if r.diagnostic {
                s.diagnostic += 1;
            } else if r.pass {
                s.passed += 1;
            } else {
                s.failed += 1;
            }
        }
        s
    }
}

/// Top-level document emitted by the command-line tool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        config: serde_json::Value,
        tolerances: BTreeMap<String, f64>,
        seed: Option<u64>,
        reports: Vec<CheckReport>,
    ) -> Self {
        let summary = Summary::of(&reports);
        RunReport {
            tool: "weitz".into(),
            version: VERSION.into(),
            command: command.into(),
            config,
            tolerances,
            seed,
            reports,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    /// One line per check: name, residual, tolerance, status.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,residual,tolerance,pass,diagnostic\n");
        for r in &self.reports {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{},{}\n",
                r.check, r.residual, r.tolerance, r.pass, r.diagnostic
            ));
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let mut out = format!("{} {} {}\n", self.tool, self.version, self.command);
        for r in &self.reports {
            let status = match (r.diagnostic, r.pass) {
                (true, _) => "DIAGNOSTIC",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            out.push_str(&format!(
                "{status:<10} {:<40} residual {:.3e} (tol {:.1e})\n",
                r.check, r.residual, r.tolerance
            ));
        }
        out.push_str(&format!(
            "{} checks: {} passed, {} failed, {} diagnostic\n",
            self.summary.total, self.summary.passed, self.summary.failed, self.summary.diagnostic
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let values = vec![0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, f64::MIN_POSITIVE, f64::MAX];
        let text = to_json_string(&values);
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, values);
        assert!(text.contains("3.3333333333333331e-1"));
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(to_json_string(&[f64::NAN]).replace(char::is_whitespace, ""), "[null]");
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn summary_ignores_diagnostics() {
        let ok = CheckReport::residual_check("a", Inputs::default(), 0.0, 1.0);
        let bad = CheckReport::residual_check("b", Inputs::default(), 2.0, 1.0);
        let diag = bad.clone().as_diagnostic();
        let run = RunReport::new("x", serde_json::Value::Null, BTreeMap::new(), None, vec![ok, diag.clone()]);
        assert!(run.all_pass());
        assert_eq!(run.summary.diagnostic, 1);
        let run = RunReport::new("x", serde_json::Value::Null, BTreeMap::new(), None, vec![bad, diag]);
        assert!(!run.all_pass());
        assert!(run.to_csv().starts_with("check,"));
    }

    #[test]
    fn nan_residual_fails() {
        assert!(!CheckReport::residual_check("a", Inputs::default(), f64::NAN, 1.0).pass);
    }
}
