//! JSON report types shared by the CLI and the golden-file tests.
//!
//! Every report carries a top-level `schema` field (currently 1) so golden
//! files stay comparable across releases. Serialization uses only structs
//! and vectors — no maps — so field order, and therefore the emitted
//! bytes, are deterministic.

use serde::{Deserialize, Serialize};

/// Current report schema version.
pub const SCHEMA: u32 = 1;

/// Outcome counters for one named check inside a verify suite.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    /// Serialized first counterexample, when any sample failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    /// Records one sample outcome; `detail` is kept for the first failure.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// `field` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldReport {
    pub schema: u32,
    pub command: String,
    pub d: i64,
    pub disc: i64,
    pub omega: String,
    pub torsion_order: u32,
    pub torsion_units: Vec<String>,
}

/// `factor` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorReport {
    pub schema: u32,
    pub command: String,
    pub spec: String,
    pub element: String,
    pub factorization: String,
    pub norm: String,
}

/// `sunits` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SunitsReport {
    pub schema: u32,
    pub command: String,
    pub spec: String,
    pub class_number: u64,
    pub class_orders: Vec<u64>,
    pub u_k: u32,
    pub torsion_generator: String,
    pub pi_generators: Vec<String>,
}

/// `lenstra` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LenstraReport {
    pub schema: u32,
    pub command: String,
    pub spec: String,
    pub p: u64,
    pub b: u64,
    pub certifying_prime: String,
    pub image_index: u64,
}

/// `constants` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConstantsReport {
    pub schema: u32,
    pub command: String,
    pub spec: String,
    pub lenstra_p: u64,
    pub lenstra_b: u64,
    pub certifying_prime: String,
    pub c_sq: String,
    pub q: u64,
    pub q_list: Vec<u64>,
    pub i_size: usize,
    pub j_size: usize,
}

/// `build` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BuildReport {
    pub schema: u32,
    pub command: String,
    pub spec: String,
    pub which: String,
    pub atoms: usize,
    pub formula: String,
}

/// `verify` subcommand output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub command: String,
    pub spec: String,
    pub suite: String,
    pub seed: u64,
    pub samples: u32,
    pub bound: i64,
    pub scan_bound: u64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// Canonical serialization: pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}
