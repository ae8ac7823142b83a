//! Validated Hermitian observables with a declared spectrum class.

use serde::{Deserialize, Serialize};

use crate::eigen::{hermitian_eigenvalues, spectral_norm};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HERMITIAN_TOL};

/// Tolerance for spectrum-class checks (eigenvalues within this of the
/// declared set).
pub const SPECTRUM_TOL: f64 = 1e-9;

/// Declared spectrum of a measurement operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumClass {
    /// Every eigenvalue is +1 or -1 (equivalently M^2 = I).
    Dichotomic,
    /// Spectral norm at most one (spectrum inside [-1, 1]).
    Contraction,
}

impl SpectrumClass {
    pub fn name(self) -> &'static str {
        match self {
            SpectrumClass::Dichotomic => "dichotomic",
            SpectrumClass::Contraction => "contraction",
        }
    }
}

/// A Hermitian matrix validated against its declared spectrum class.
///
/// Hermiticity is checked, never silently repaired: a failed check is a
/// construction bug at the call site.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
    spectrum_class: SpectrumClass,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix, spectrum_class: SpectrumClass) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: HERMITIAN_TOL,
            });
        }
        match spectrum_class {
            SpectrumClass::Dichotomic => {
                let vals = hermitian_eigenvalues(&matrix)?;
                for &l in &vals {
                    if (l.abs() - 1.0).abs() > SPECTRUM_TOL {
                        return Err(Error::SpectrumViolation {
                            class: "dichotomic",
                            detail: format!(
                                "eigenvalue {l} is not within {SPECTRUM_TOL:.0e} of +/-1"
                            ),
                        });
                    }
                }
            }
            SpectrumClass::Contraction => {
                let norm = spectral_norm(&matrix)?;
                if norm > 1.0 + SPECTRUM_TOL {
                    return Err(Error::SpectrumViolation {
                        class: "contraction",
                        detail: format!("spectral norm {norm} exceeds 1 + {SPECTRUM_TOL:.0e}"),
                    });
                }
            }
        }
        Ok(Self {
            matrix,
            spectrum_class,
        })
    }

    /// Dichotomic observable from a matrix already known to square to the
    /// identity (still validated).
    pub fn dichotomic(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, SpectrumClass::Dichotomic)
    }

    pub fn contraction(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(matrix, SpectrumClass::Contraction)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum_class(&self) -> SpectrumClass {
        self.spectrum_class
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}
