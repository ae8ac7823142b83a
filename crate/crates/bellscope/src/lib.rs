//! Numerical laboratory for the Bell/CHSH coincidence combination
//! `B = E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)`.
//!
//! The crate builds `B` as an operator under three commutation regimes and
//! maximizes it within each (reproducing the classical bound 2 and the
//! Tsirelson value 2*sqrt(2), and certifying the 2*sqrt(3) ceiling of the
//! fully non-commuting case), simulates local-hidden-variable coincidence
//! experiments against the same combination, evaluates the exact two-qubit
//! quantum side, and checks Boole's best-possible probability bounds with
//! constructive witnesses.
//!
//! Modules map one-to-one onto those concerns:
//!
//! - [`matrix`] / [`eigen`] / [`observable`]: dense complex operator algebra
//!   with a cyclic-Jacobi Hermitian eigensolver.
//! - [`bell`]: the composite Bell operator, regime classification,
//!   expectations.
//! - [`bounds`]: brute-force classical maximum and deterministic multi-start
//!   projected ascent per regime.
//! - [`lhv`]: the hidden-variable coincidence integral, Monte Carlo and
//!   quadrature estimators, and derivation audits.
//! - [`quantum`]: singlet / photon-pair states, coincidence tables, angle
//!   scans.
//! - [`boole`]: union/intersection probability bounds, attaining witnesses,
//!   and a brute-force tightness oracle.
//! - [`report`]: JSON run reports for the `bellscope` binary.

pub mod bell;
pub mod boole;
pub mod bounds;
pub mod eigen;
pub mod error;
pub mod lhv;
pub mod matrix;
pub mod observable;
pub mod quantum;
pub mod report;
pub mod settings;

pub use bell::{
    build_bell, classify_regime, expectation, max_expectation, BellEvaluation,
    BellOperatorInstance, CommutationRegime, EvaluationMode,
};
pub use boole::{
    intersection_bounds, oracle_extremes, union_bounds, witness, BooleSystem, BoundTarget,
    BoundsInterval,
};
pub use bounds::{
    classical_max, optimize_bound, regime_ceiling, verify_ceiling, BoundResult, OptimizerConfig,
};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, spectral_norm, EigenDecomposition};
pub use error::{Error, Result};
pub use lhv::{
    bell_difference_decomposition, chsh_value as lhv_chsh_value, correlation as lhv_correlation,
    interchange_gap, zero_expression_audit, CorrelationEstimate, EstimationMethod,
    HiddenVariableModel, ResponseTable,
};
pub use matrix::{commutator, symmetrized_product, tensor, ComplexMatrix};
pub use observable::{Observable, SpectrumClass};
pub use quantum::{
    angle_scan, chsh_value as quantum_chsh_value, coincidence_table,
    correlation as quantum_correlation, spin_observable, CoincidenceTable, StateKind,
    TwoParticleState,
};
pub use settings::{
    canonical_photon_settings, canonical_singlet_settings, saturating_lhv_settings,
    MeasurementSettings, ScanDescriptor,
};
