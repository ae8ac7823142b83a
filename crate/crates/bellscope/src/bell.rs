//! The Bell coincidence combination as an operator, under each commutation
//! regime, with regime classification and expectation evaluation.
//!
//! The combination is always
//! `B = a1 o b1 + a1 o b2 + a2 o b1 - a2 o b2`
//! where `o` is the Kronecker product when the two sides live on separate
//! tensor factors, and the symmetrized product `(xy + yx)/2` when all four
//! operators share one space (keeping `B` Hermitian even for non-commuting
//! inputs).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::{hermitian_eigen, hermitian_eigenvalues, spectral_norm};
use crate::error::{Error, Result};
use crate::matrix::{commutator, inner, symmetrized_product, tensor, vector_norm, ComplexMatrix};
use crate::observable::Observable;

/// Spectral-norm threshold below which a commutator counts as zero.
pub const COMMUTING_TOL: f64 = 1e-10;

/// Mutual commutation structure of the four measurement operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CommutationRegime {
    /// All six pairs commute.
    #[serde(rename = "classical")]
    Classical,
    /// Operators on different tensor factors commute; same-side pairs need not.
    #[serde(rename = "tensor")]
    LocalTensor,
    /// No commutation structure assumed.
    #[serde(rename = "global")]
    Global,
}

impl CommutationRegime {
    pub fn name(self) -> &'static str {
        match self {
            CommutationRegime::Classical => "classical",
            CommutationRegime::LocalTensor => "tensor",
            CommutationRegime::Global => "global",
        }
    }
}

/// How a [`BellEvaluation`] value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EvaluationMode {
    StateExpectation,
    MaxEigenvalue,
}

/// A Bell-combination value together with its provenance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BellEvaluation {
    pub value: f64,
    pub mode: EvaluationMode,
    pub regime: CommutationRegime,
}

/// Four observables assembled into the composite Bell operator.
#[derive(Debug, Clone)]
pub struct BellOperatorInstance {
    pub a1: Observable,
    pub a2: Observable,
    pub b1: Observable,
    pub b2: Observable,
    pub regime: CommutationRegime,
    composite: ComplexMatrix,
}

impl BellOperatorInstance {
    /// The assembled Hermitian composite operator.
    pub fn composite(&self) -> &ComplexMatrix {
        &self.composite
    }
}

fn max_pairwise_commutator(pairs: &[(&Observable, &Observable)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in pairs {
        let c = commutator(x.matrix(), y.matrix())?;
        worst = worst.max(spectral_norm(&c)?);
    }
    Ok(worst)
}

/// Assemble the composite Bell operator for the given regime.
///
/// `LocalTensor` expects the a's on one factor and the b's on another (their
/// own dimensions); `Global`/`Classical` expect all four on one shared space.
/// Requesting `Classical` with non-commuting inputs is a regime violation.
pub fn build_bell(
    a1: &Observable,
    a2: &Observable,
    b1: &Observable,
    b2: &Observable,
    regime: CommutationRegime,
) -> Result<BellOperatorInstance> {
    if a1.dim() != a2.dim() {
        return Err(Error::ShapeMismatch {
            left: a1.dim(),
            right: a2.dim(),
            context: "a-side observables",
        });
    }
    if b1.dim() != b2.dim() {
        return Err(Error::ShapeMismatch {
            left: b1.dim(),
            right: b2.dim(),
            context: "b-side observables",
        });
    }

    let composite = match regime {
        CommutationRegime::LocalTensor => {
            let sum = b1.matrix().add(b2.matrix())?;
            let diff = b1.matrix().sub(b2.matrix())?;
            tensor(a1.matrix(), &sum)?.add(&tensor(a2.matrix(), &diff)?)?
        }
        CommutationRegime::Classical | CommutationRegime::Global => {
            if a1.dim() != b1.dim() {
                return Err(Error::ShapeMismatch {
                    left: a1.dim(),
                    right: b1.dim(),
                    context: "shared-space observables",
                });
            }
            if regime == CommutationRegime::Classical {
                let worst = max_pairwise_commutator(&[
                    (a1, a2),
                    (b1, b2),
                    (a1, b1),
                    (a1, b2),
                    (a2, b1),
                    (a2, b2),
                ])?;
                if worst >= COMMUTING_TOL {
                    return Err(Error::RegimeViolation {
                        regime: "classical",
                        detail: format!(
                            "largest pairwise commutator norm {worst:.3e} >= {COMMUTING_TOL:.0e}"
                        ),
                    });
                }
            }
            let sum = b1.matrix().add(b2.matrix())?;
            let diff = b1.matrix().sub(b2.matrix())?;
            symmetrized_product(a1.matrix(), &sum)?
                .add(&symmetrized_product(a2.matrix(), &diff)?)?
        }
    };

    debug_assert!(composite.hermitian_deviation() <= 1e-12);
    debug_assert!(spectral_norm(&composite).unwrap_or(f64::INFINITY) <= 4.0 + 1e-9);

    Ok(BellOperatorInstance {
        a1: a1.clone(),
        a2: a2.clone(),
        b1: b1.clone(),
        b2: b2.clone(),
        regime,
        composite,
    })
}

/// Classify a quadruple by its mutual commutation relations.
///
/// With `same_space = false` the a's and b's are taken as living on their own
/// tensor factors and are lifted with identities before the commutator check
/// (cross pairs then commute identically). With `same_space = true` all four
/// operators are compared directly on the shared space.
pub fn classify_regime(
    a1: &Observable,
    a2: &Observable,
    b1: &Observable,
    b2: &Observable,
    same_space: bool,
) -> Result<CommutationRegime> {
    if a1.dim() != a2.dim() || b1.dim() != b2.dim() {
        return Err(Error::ShapeMismatch {
            left: a1.dim().min(b1.dim()),
            right: a2.dim().max(b2.dim()),
            context: "regime classification",
        });
    }

    let (cross_max, a_side, b_side) = if same_space {
        if a1.dim() != b1.dim() {
            return Err(Error::ShapeMismatch {
                left: a1.dim(),
                right: b1.dim(),
                context: "regime classification (shared space)",
            });
        }
        let cross = max_pairwise_commutator(&[(a1, b1), (a1, b2), (a2, b1), (a2, b2)])?;
        let a_side = spectral_norm(&commutator(a1.matrix(), a2.matrix())?)?;
        let b_side = spectral_norm(&commutator(b1.matrix(), b2.matrix())?)?;
        (cross, a_side, b_side)
    } else {
        // Lifted cross commutators vanish identically on the tensor space.
        let a_side = spectral_norm(&commutator(a1.matrix(), a2.matrix())?)?;
        let b_side = spectral_norm(&commutator(b1.matrix(), b2.matrix())?)?;
        (0.0, a_side, b_side)
    };

    if cross_max < COMMUTING_TOL && a_side < COMMUTING_TOL && b_side < COMMUTING_TOL {
        Ok(CommutationRegime::Classical)
    } else if cross_max < COMMUTING_TOL {
        Ok(CommutationRegime::LocalTensor)
    } else {
        Ok(CommutationRegime::Global)
    }
}

/// Expectation value of the composite in a unit state.
pub fn expectation(inst: &BellOperatorInstance, state: &[Complex64]) -> Result<BellEvaluation> {
    let dim = inst.composite.dim();
    if state.len() != dim {
        return Err(Error::ShapeMismatch {
            left: dim,
            right: state.len(),
            context: "expectation state",
        });
    }
    let norm = vector_norm(state);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitNorm { norm });
    }
    let applied = inst.composite.matvec(state)?;
    let value = inner(state, &applied);
    assert!(
        value.im.abs() < 1e-10,
        "Hermitian composite produced imaginary expectation {}",
        value.im
    );
    debug_assert!(value.re.abs() <= 4.0 + 1e-9);
    Ok(BellEvaluation {
        value: value.re,
        mode: EvaluationMode::StateExpectation,
        regime: inst.regime,
    })
}

/// Largest eigenvalue of the composite.
pub fn max_expectation(inst: &BellOperatorInstance) -> Result<BellEvaluation> {
    let vals = hermitian_eigenvalues(&inst.composite)?;
    let value = *vals.last().expect("dim >= 1");
    debug_assert!(value.abs() <= 4.0 + 1e-9);
    Ok(BellEvaluation {
        value,
        mode: EvaluationMode::MaxEigenvalue,
        regime: inst.regime,
    })
}

/// Unit eigenvector for the composite's largest eigenvalue.
pub fn max_eigenvector(inst: &BellOperatorInstance) -> Result<Vec<Complex64>> {
    let decomp = hermitian_eigen(&inst.composite)?;
    Ok(decomp.eigenvector(decomp.eigenvalues.len() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DIM_CAP;

    fn sigma_x() -> Observable {
        Observable::dichotomic(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    fn sigma_z() -> Observable {
        Observable::dichotomic(ComplexMatrix::diagonal(&[1.0, -1.0])).unwrap()
    }

    fn identity_obs(dim: usize) -> Observable {
        Observable::dichotomic(ComplexMatrix::identity(dim)).unwrap()
    }

    /// b-side settings (sigma_z +/- sigma_x)/sqrt(2) of the standard
    /// maximal-violation configuration.
    fn tsirelson_b(sign: f64) -> Observable {
        let s = 1.0 / 2.0_f64.sqrt();
        Observable::dichotomic(ComplexMatrix::from_real(2, &[s, sign * s, sign * s, -s]).unwrap())
            .unwrap()
    }

    fn canonical_tensor_instance() -> BellOperatorInstance {
        build_bell(
            &sigma_z(),
            &sigma_x(),
            &tsirelson_b(1.0),
            &tsirelson_b(-1.0),
            CommutationRegime::LocalTensor,
        )
        .unwrap()
    }

    #[test]
    fn classical_identity_quadruple() {
        let i = identity_obs(2);
        let inst = build_bell(&i, &i, &i, &i, CommutationRegime::Classical).unwrap();
        let expect = ComplexMatrix::identity(2).scale_real(2.0);
        assert!(inst.composite().max_abs_diff(&expect) < 1e-14);
        assert!((max_expectation(&inst).unwrap().value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_aligned_z_settings() {
        // a1 = a2 = b1 = b2 = sigma_z gives 2 sigma_z (x) sigma_z.
        let z = sigma_z();
        let inst = build_bell(&z, &z, &z, &z, CommutationRegime::LocalTensor).unwrap();
        let zz = tensor(z.matrix(), z.matrix()).unwrap().scale_real(2.0);
        assert!(inst.composite().max_abs_diff(&zz) < 1e-14);
        assert!((max_expectation(&inst).unwrap().value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn tensor_canonical_reaches_tsirelson() {
        let inst = canonical_tensor_instance();
        let lmax = max_expectation(&inst).unwrap().value;
        assert!((lmax - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn classical_regime_rejects_noncommuting_inputs() {
        let err = build_bell(
            &sigma_z(),
            &sigma_x(),
            &sigma_z(),
            &sigma_x(),
            CommutationRegime::Classical,
        );
        assert!(matches!(err, Err(Error::RegimeViolation { .. })));
    }

    #[test]
    fn classify_diagonal_quadruple_as_classical() {
        let d1 = Observable::dichotomic(ComplexMatrix::diagonal(&[1.0, -1.0])).unwrap();
        let d2 = Observable::dichotomic(ComplexMatrix::diagonal(&[-1.0, 1.0])).unwrap();
        let r = classify_regime(&d1, &d2, &d1, &d2, true).unwrap();
        assert_eq!(r, CommutationRegime::Classical);
    }

    #[test]
    fn classify_factor_settings_as_local_tensor() {
        let r = classify_regime(&sigma_z(), &sigma_x(), &sigma_z(), &sigma_x(), false).unwrap();
        assert_eq!(r, CommutationRegime::LocalTensor);
    }

    #[test]
    fn classify_shared_space_noncommuting_as_global() {
        // Random-ish non-commuting dichotomic quadruple on C^4: lifted Paulis
        // mixed across both factors so every cross pair fails to commute.
        let i2 = ComplexMatrix::identity(2);
        let sx = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let sz = ComplexMatrix::diagonal(&[1.0, -1.0]);
        let sy = {
            let mut m = ComplexMatrix::zeros(2);
            m.set(0, 1, Complex64::new(0.0, -1.0));
            m.set(1, 0, Complex64::new(0.0, 1.0));
            m
        };
        let mk = |m: ComplexMatrix| Observable::dichotomic(m).unwrap();
        let a1 = mk(tensor(&sx, &sx).unwrap());
        let a2 = mk(tensor(&sz, &sz).unwrap());
        let b1 = mk(tensor(&sy, &i2).unwrap());
        let b2 = mk(tensor(&sx, &sz).unwrap());
        // Verify the premise: all cross commutators are genuinely large.
        for (x, y) in [(&a1, &b1), (&a1, &b2), (&a2, &b1), (&a2, &b2)] {
            let c = commutator(x.matrix(), y.matrix()).unwrap();
            assert!(spectral_norm(&c).unwrap() > 0.5);
        }
        let r = classify_regime(&a1, &a2, &b1, &b2, true).unwrap();
        assert_eq!(r, CommutationRegime::Global);
    }

    #[test]
    fn expectation_of_doubled_identity() {
        let i = identity_obs(2);
        let inst = build_bell(&i, &i, &i, &i, CommutationRegime::Classical).unwrap();
        let state = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let e = expectation(&inst, &state).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn singlet_expectation_of_canonical_composite() {
        let inst = canonical_tensor_instance();
        let s = 1.0 / 2.0_f64.sqrt();
        let singlet = [
            Complex64::ZERO,
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::ZERO,
        ];
        let e = expectation(&inst, &singlet).unwrap();
        assert!((e.value + 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((e.value.abs() - 2.0 * 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn top_eigenvector_expectation_matches_lambda_max() {
        let inst = canonical_tensor_instance();
        let top = max_eigenvector(&inst).unwrap();
        let e = expectation(&inst, &top).unwrap();
        let lmax = max_expectation(&inst).unwrap().value;
        assert!((e.value - lmax).abs() < 1e-9);
    }

    #[test]
    fn expectation_rejects_non_unit_state() {
        let i = identity_obs(2);
        let inst = build_bell(&i, &i, &i, &i, CommutationRegime::Classical).unwrap();
        let state = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            expectation(&inst, &state),
            Err(Error::NotUnitNorm { .. })
        ));
    }

    #[test]
    fn tensor_build_respects_dimension_cap() {
        let big = identity_obs(8);
        let nine = identity_obs(9);
        let r = build_bell(&nine, &nine, &big, &big, CommutationRegime::LocalTensor);
        assert!(matches!(r, Err(Error::DimensionCap { cap: DIM_CAP, .. })));
    }
}
