//! Analyzer-orientation quadruples and scan descriptors shared by the
//! hidden-variable and quantum modules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four polarizer orientations (radians) entering the Bell combination
/// `P(alpha1,beta1) + P(alpha1,beta2) + P(alpha2,beta1) - P(alpha2,beta2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MeasurementSettings {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl MeasurementSettings {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        let s = Self {
            alpha1,
            alpha2,
            beta1,
            beta2,
        };
        if [alpha1, alpha2, beta1, beta2].iter().all(|a| a.is_finite()) {
            Ok(s)
        } else {
            Err(Error::NonFinite("measurement settings"))
        }
    }

    /// Shift both b-side orientations by `offset` (used by angle scans).
    pub fn with_beta_offset(self, offset: f64) -> Self {
        Self {
            beta1: self.beta1 + offset,
            beta2: self.beta2 + offset,
            ..self
        }
    }
}

/// Quadruple maximizing the spin-singlet CHSH magnitude under this crate's
/// sign convention (minus on the (alpha2, beta2) term): value -2*sqrt(2).
pub fn canonical_singlet_settings() -> MeasurementSettings {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
    MeasurementSettings {
        alpha1: FRAC_PI_2,
        alpha2: 0.0,
        beta1: FRAC_PI_4,
        beta2: 3.0 * PI / 4.0,
    }
}

/// Quadruple maximizing the photon-pair CHSH under this crate's sign
/// convention: value +2*sqrt(2).
pub fn canonical_photon_settings() -> MeasurementSettings {
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
    MeasurementSettings {
        alpha1: FRAC_PI_4,
        alpha2: 0.0,
        beta1: FRAC_PI_8,
        beta2: 3.0 * PI / 8.0,
    }
}

/// Quadruple where the deterministic sign-response model attains the
/// classical maximum +2 exactly.
pub fn saturating_lhv_settings() -> MeasurementSettings {
    use std::f64::consts::{FRAC_PI_2, PI};
    MeasurementSettings {
        alpha1: 0.0,
        alpha2: FRAC_PI_2,
        beta1: PI,
        beta2: FRAC_PI_2,
    }
}

/// Inclusive offset range stepped from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanDescriptor {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl ScanDescriptor {
    pub fn offsets(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0 && self.step.is_finite())
            || !self.start.is_finite()
            || !self.stop.is_finite()
            || self.stop < self.start
        {
            return Err(Error::EmptyScan(format!(
                "start {}, stop {}, step {}",
                self.start, self.stop, self.step
            )));
        }
        // Half-step slack keeps the endpoint inclusive under fp accumulation.
        let count = ((self.stop - self.start) / self.step + 0.5).floor() as usize + 1;
        Ok((0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect())
    }
}
