//! Seeded verification suite.
//!
//! [`run_suite`] evaluates every check in the [`CheckId`] registry over the
//! cases `n × a` of a [`SuiteConfig`] and collects one [`CheckRecord`] per
//! check, case and sample. Failures are records, never errors. Samples run in
//! parallel; each owns the derived seed `seed ^ sample` and records are
//! assembled in sample order, so the report body depends only on the config.

mod checks;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{tol, C64};

/// Version tag written into every report.
pub const SCHEMA_VERSION: &str = "hkcpn-report/1";

/// Column order of the CSV export.
pub const CSV_HEADER: &str = "check_id,n,a,seed,sample,value,threshold,pass";

macro_rules! registry {
    ($($variant:ident => $name:literal, $scope:ident;)*) => {
        /// Every check the suite can run.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum CheckId {
            $($variant,)*
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)*
                }
            }

            pub fn scope(self) -> Scope {
                match self {
                    $(CheckId::$variant => Scope::$scope,)*
                }
            }
        }
    };
}

/// Whether a check runs once per sample or once per `(n, a)` case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Sample,
    Case,
}

registry! {
    LemmaRank2Det => "lemma_rank2_det", Sample;
    LemmaRank2Inverse => "lemma_rank2_inverse", Sample;
    GaussRoundtrip => "gauss_roundtrip", Sample;
    TransitionRoundtrip => "transition_roundtrip", Sample;
    TransitionCocycle => "transition_cocycle", Sample;
    TransitionTau => "transition_tau", Sample;
    GluingSymplectic => "gluing_symplectic", Sample;
    GluingPath => "gluing_path", Sample;
    TauGlobalLocal => "tau_global_local", Sample;
    TauLagrangian => "tau_lagrangian", Sample;
    TauSuInvariance => "tau_su_invariance", Sample;
    MomentAntiHermitian => "moment_anti_hermitian", Sample;
    MomentSpectrum => "moment_spectrum", Sample;
    MomentEquivariance => "moment_equivariance", Sample;
    JetGradFd => "jet_grad_fd", Sample;
    JetHessFd => "jet_hess_fd", Sample;
    HessianDet => "hessian_det", Sample;
    GradQuadraticCramer => "grad_quadratic_cramer", Sample;
    GradQuadraticColumns => "grad_quadratic_columns", Sample;
    DetUnit => "det_unit", Sample;
    RicciFd => "ricci_fd", Sample;
    MinEigenvalue => "min_eigenvalue", Sample;
    SymplecticDefect => "symplectic_defect", Sample;
    SymplecticEquivalence => "symplectic_equivalence", Sample;
    Quaternion => "quaternion", Sample;
    HermiticityI => "hermiticity_i", Sample;
    HermiticityJ => "hermiticity_j", Sample;
    HermiticityK => "hermiticity_k", Sample;
    BlockwiseOracle => "blockwise_oracle", Sample;
    KahlerPotential => "kahler_potential", Sample;
    NegativeControlDet => "negative_control_det", Sample;
    BasePointMetric => "base_point_metric", Case;
    OdeResidual => "ode_residual", Case;
    NegativeControlOde => "negative_control_ode", Case;
    SymplecticWitness => "symplectic_witness", Case;
}

impl std::fmt::Display for CheckId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Named thresholds that a config may override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative agreement of first derivatives with finite differences.
    pub fd_first: f64,
    /// Relative agreement of second derivatives with finite differences.
    pub fd_second: f64,
    /// Identities expected to hold to roundoff.
    pub identity: f64,
    /// Lower bound on the symplectic defect at the witness point.
    pub defect_negative: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fd_first: tol::GRAD_FD_REL,
            fd_second: tol::HESS_FD_REL,
            identity: tol::DET_UNIT_REL,
            defect_negative: tol::DEFECT_NEGATIVE_MIN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n_values: Vec<usize>,
    pub s: C64,
    pub a_values: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Relative exclusion radius around the Lagrangian locus for `a > 0`.
    pub exclusion: f64,
    /// Multiplies the profile by `1 + δ`; a negative-control switch.
    pub perturbation: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n_values: vec![1, 2],
            s: C64::new(1.0, 0.0),
            a_values: vec![0.0, 1.0],
            samples: 50,
            seed: 42,
            tolerances: Tolerances::default(),
            exclusion: tol::LAGRANGIAN_EXCLUSION,
            perturbation: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.s.norm() == 0.0 || !self.s.re.is_finite() || !self.s.im.is_finite() {
            return bad("s must be nonzero".into());
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return bad("n values must be a non-empty list of positive integers".into());
        }
        if self.a_values.is_empty() || self.a_values.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
            return bad("a values must be a non-empty list of non-negative numbers".into());
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("fd_first", t.fd_first),
            ("fd_second", t.fd_second),
            ("identity", t.identity),
            ("defect_negative", t.defect_negative),
            ("exclusion", self.exclusion),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("tolerance {name} must be positive"));
            }
        }
        if let Some(d) = self.perturbation {
            if !d.is_finite() || d <= -1.0 {
                return bad(format!("perturbation {d} must be finite and > -1"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Precondition not met; nothing asserted.
    Skipped,
    /// Value recorded without a threshold.
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: CheckId,
    pub n: usize,
    pub a: f64,
    pub seed: u64,
    pub sample: usize,
    pub point_digest: Option<String>,
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub status: Status,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub info: usize,
}

impl Summary {
    fn tally(records: &[CheckRecord]) -> Self {
        let mut s = Summary { total: records.len(), ..Default::default() };
        for r in records {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Skipped => s.skipped += 1,
                Status::Info => s.info += 1,
            }
        }
        s
    }
}

/// The reproducible part of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBody {
    pub schema: String,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    /// Seconds since the Unix epoch at assembly time.
    pub generated_at: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub header: ReportHeader,
    pub body: ReportBody,
}

impl VerificationReport {
    fn assemble(config: SuiteConfig, records: Vec<CheckRecord>) -> Self {
        let generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let summary = Summary::tally(&records);
        Self {
            header: ReportHeader { generated_at },
            body: ReportBody { schema: SCHEMA_VERSION.into(), config, summary, records },
        }
    }

    pub fn records(&self) -> &[CheckRecord] {
        &self.body.records
    }

    pub fn summary(&self) -> Summary {
        self.body.summary
    }

    pub fn all_passed(&self) -> bool {
        self.body.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.body.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn records_for(&self, id: CheckId) -> impl Iterator<Item = &CheckRecord> {
        self.body.records.iter().filter(move |r| r.check_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("malformed report: {e}")))
    }

    /// One row per record; numbers in `{:.16e}`, missing values empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.body.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        let num = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.16e}"));
        for r in &self.body.records {
            let pass = match r.status {
                Status::Pass | Status::Fail => if r.pass { "true" } else { "false" },
                other => other.as_str(),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.check_id,
                r.n,
                num(Some(r.a)),
                r.seed,
                r.sample,
                num(r.value),
                num(r.threshold),
                pass
            );
        }
        out
    }
}

/// Runs the full registry. Invalid configs are reported as an error before
/// anything runs; check failures land in the report.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut records = Vec::new();
    for &n in &config.n_values {
        for &a in &config.a_values {
            records.extend(checks::run_case(config, n, a)?);
        }
    }
    Ok(VerificationReport::assemble(config.clone(), records))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { samples: 3, ..SuiteConfig::default() }
    }

    #[test]
    fn registry_names_unique() {
        let mut names: Vec<_> = CheckId::ALL.iter().map(|c| c.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), CheckId::ALL.len());
        for id in CheckId::ALL {
            let json = serde_json::to_string(id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let zero_s = SuiteConfig { s: C64::new(0.0, 0.0), ..SuiteConfig::default() };
        assert!(zero_s.validate().unwrap_err().to_string().contains("s must be nonzero"));
        assert!(SuiteConfig { samples: 0, ..SuiteConfig::default() }.validate().is_err());
        assert!(SuiteConfig { n_values: vec![0], ..SuiteConfig::default() }.validate().is_err());
        assert!(SuiteConfig { a_values: vec![-1.0], ..SuiteConfig::default() }.validate().is_err());
        let mut t = SuiteConfig::default();
        t.tolerances.identity = 0.0;
        assert!(t.validate().is_err());
    }

    #[test]
    fn summary_matches_records() {
        let r = run_suite(&small()).unwrap();
        assert_eq!(Summary::tally(r.records()), r.summary());
        assert_eq!(r.summary().total, r.records().len());
    }

    #[test]
    fn one_record_per_check_and_case() {
        let config = SuiteConfig { samples: 1, ..SuiteConfig::default() };
        let r = run_suite(&config).unwrap();
        let cases = config.n_values.len() * config.a_values.len();
        assert_eq!(r.records().len(), cases * CheckId::ALL.len());
        for id in CheckId::ALL {
            assert_eq!(r.records_for(*id).count(), cases, "{id}");
        }
    }

    #[test]
    fn csv_layout() {
        let r = run_suite(&SuiteConfig { samples: 1, n_values: vec![1], a_values: vec![0.0], ..SuiteConfig::default() })
            .unwrap();
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<_> = lines.collect();
        assert_eq!(rows.len(), r.records().len());
        assert!(rows.iter().all(|row| row.split(',').count() == 8));
    }

    #[test]
    fn json_round_trip() {
        let r = run_suite(&small()).unwrap();
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back.body_json(), r.body_json());
    }
}
