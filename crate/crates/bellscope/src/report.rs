//! Machine-readable run reports: one JSON document per invocation, with the
//! effective configuration echoed so any run can be reproduced from its own
//! output. `wallTimeMs` is the only field excluded from reproducibility
//! comparisons.

use serde::Serialize;

use crate::bell::CommutationRegime;
use crate::boole::BoundsInterval;
use crate::lhv::{ChshEstimate, CorrelationEstimate};
use crate::observable::SpectrumClass;
use crate::quantum::{CoincidenceTable, ScanPoint, StateKind};
use crate::settings::MeasurementSettings;

/// Crate version stamped into every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Envelope shared by every subcommand.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport<T: Serialize> {
    pub tool_version: String,
    pub command: String,
    pub config_echo: serde_json::Value,
    pub seed: u64,
    pub results: T,
    pub wall_time_ms: u128,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(
        command: &str,
        config_echo: serde_json::Value,
        seed: u64,
        results: T,
        wall_time_ms: u128,
    ) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config_echo,
            seed,
            results,
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `bounds` subcommand payload.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsPayload {
    pub regime: CommutationRegime,
    pub spectrum_class: SpectrumClass,
    pub dim: usize,
    pub best_value: f64,
    pub ceiling: f64,
    /// verify_ceiling verdict; false is a scientific falsification.
    pub ceiling_respected: bool,
    pub per_restart_values: Vec<f64>,
    pub iterations: usize,
    /// Largest lambda_max(B'B) observed on any evaluated iterate (<= 16).
    pub max_bstarb: f64,
}

/// Derivation-audit block shared by `audit` and `lhv --audit`.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditPayload {
    /// Quadrature residue of the identically-zero reordering expression.
    pub zero_expression_residue: f64,
    /// |P(alpha1, beta1) - P(alpha1, beta2)|.
    pub interchange_gap: f64,
    pub difference_lhs: f64,
    pub difference_rhs: f64,
    pub difference_mismatch: f64,
}

/// `lhv` subcommand payload.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LhvPayload {
    pub model: String,
    pub settings: MeasurementSettings,
    pub chsh: f64,
    pub pairs: [CorrelationEstimate; 4],
    pub aggregate_stderr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditPayload>,
}

impl LhvPayload {
    pub fn from_estimate(
        model: &str,
        settings: MeasurementSettings,
        estimate: ChshEstimate,
        audit: Option<AuditPayload>,
    ) -> Self {
        Self {
            model: model.to_string(),
            settings,
            chsh: estimate.value,
            pairs: estimate.pairs,
            aggregate_stderr: estimate.aggregate_stderr,
            audit,
        }
    }
}

/// Scan block of the `quantum` payload.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanPayload {
    pub points: Vec<ScanPoint>,
    pub max_chsh: f64,
    pub offset_at_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
}

/// `quantum` subcommand payload.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QuantumPayload {
    pub state: StateKind,
    pub settings: MeasurementSettings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chsh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidences: Option<CoincidenceTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanPayload>,
}

/// One witness distribution in the `boole` payload.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessPayload {
    pub target: String,
    /// Union or intersection probability attained by the witness.
    pub value: f64,
    /// Atom weights, included only for small systems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<String>,
}

/// Oracle block of the `boole` payload.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OraclePayload {
    pub grid_resolution: usize,
    pub union: BoundsInterval,
    pub intersection: BoundsInterval,
}

/// `boole` subcommand payload.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoolePayload {
    pub probs: Vec<f64>,
    pub union: BoundsInterval,
    pub intersection: BoundsInterval,
    pub witnesses: Vec<WitnessPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OraclePayload>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_serializes_with_stable_field_order() {
        let report = RunReport::new(
            "bounds",
            serde_json::json!({"regime": "classical"}),
            42,
            BoundsPayload {
                regime: CommutationRegime::Classical,
                spectrum_class: SpectrumClass::Dichotomic,
                dim: 2,
                best_value: 2.0,
                ceiling: 2.0,
                ceiling_respected: true,
                per_restart_values: vec![2.0],
                iterations: 16,
                max_bstarb: 4.0,
            },
            7,
        );
        let json = report.to_json();
        let tool_pos = json.find("toolVersion").unwrap();
        let cmd_pos = json.find("\"command\"").unwrap();
        let wall_pos = json.find("wallTimeMs").unwrap();
        assert!(tool_pos < cmd_pos && cmd_pos < wall_pos);
        assert!(json.contains("\"seed\": 42"));
    }
}
