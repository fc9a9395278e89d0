//! Verification suites: module-family generators, bounded-Betti
//! certification and divisibility/limit assertions with machine-readable
//! reports.

mod family;
mod suites;

pub use family::{random_control, run_family, ResolvedMember};
pub use suites::{
    report_to_csv, verify_ci4, verify_curv, verify_flat, verify_limits, verify_monomial_ci,
    verify_short_nonci,
};

use serde::{Deserialize, Serialize};

use crate::algebra::{Classification, LocalAlgebra};
use crate::modules::{PeriodicCert, ResolveOptions};

/// Configuration of one suite run; embedded verbatim in the report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Extension-closure sample count.
    pub module_count: usize,
    /// Random control presentations (expected unbounded).
    pub controls: usize,
    pub stages: usize,
    pub trials: u64,
    pub window: usize,
    pub matrix_cap: usize,
    pub iso_length_cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            module_count: 24,
            controls: 10,
            stages: 12,
            trials: 64,
            window: 4,
            matrix_cap: 16384,
            iso_length_cap: 64,
        }
    }
}

impl SuiteConfig {
    pub fn resolve_options(&self) -> ResolveOptions {
        ResolveOptions {
            stages: self.stages,
            matrix_cap: self.matrix_cap,
            window: self.window,
            iso_detect: true,
            iso_length_cap: self.iso_length_cap,
            trials: self.trials,
            seed: self.seed,
            keep_matrix_mb: 128,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo {
            name: "artinres",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RingSummary {
    pub name: String,
    pub dim: usize,
    pub hilbert: Vec<usize>,
    pub embdim: usize,
    pub socle_dim: usize,
    pub classification: Classification,
}

impl RingSummary {
    pub fn of(a: &LocalAlgebra) -> Self {
        let hd = a.hilbert();
        RingSummary {
            name: a.name().to_string(),
            dim: a.dim(),
            hilbert: hd.h,
            embdim: hd.embdim,
            socle_dim: hd.socle_dim,
            classification: a.classify(),
        }
    }
}

/// One named check with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Per-module record in a suite report.
#[derive(Debug, Clone, Serialize)]
pub struct ModuleRecord {
    pub id: usize,
    pub source: String,
    pub length: u64,
    pub betti: Vec<u64>,
    pub syzygy_lengths: Vec<u64>,
    pub bounded_flag: bool,
    pub periodic: Option<PeriodicCert>,
    pub truncated: bool,
    pub certified_bounded: bool,
    pub free: bool,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregates {
    pub module_total: usize,
    pub certified_count: usize,
    pub certified_nonfree_count: usize,
    /// gcd of the lengths of certified-bounded modules; 0 when none.
    pub gcd_certified_lengths: u64,
    pub identity_checks: usize,
    pub msq_checks: usize,
    /// True when no certified-bounded non-free module was found.
    pub vacuous: bool,
}

/// A full machine-readable suite report. Serialization order is the struct
/// order, so identical runs produce byte-identical JSON.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub tool: ToolInfo,
    pub suite: String,
    pub config: SuiteConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring2: Option<RingSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tensor_ring: Option<RingSummary>,
    pub modules: Vec<ModuleRecord>,
    /// Checks that gate the overall pass flag.
    pub assertions: Vec<Verdict>,
    /// Reported, non-gating observations.
    pub observations: Vec<Verdict>,
    pub aggregates: Aggregates,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
