//! Exact quantum side: the two built-in entangled pair states, analyzer
//! observables, coincidence probability tables, and CHSH angle scans.
//!
//! Everything is computed by matrix contraction through the operator-algebra
//! layer; the textbook closed forms (`-cos(alpha-beta)` for the singlet,
//! `cos 2(alpha-beta)` for the photon pair) are used only as test oracles.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{inner, tensor, vector_norm, ComplexMatrix};
use crate::observable::Observable;
use crate::settings::{MeasurementSettings, ScanDescriptor};

/// Which entangled pair a state carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum StateKind {
    /// `(|01> - |10>)/sqrt(2)`; spin analyzers use the plain angle.
    SpinSinglet,
    /// `(|HH> + |VV>)/sqrt(2)`; polarization analyzers use doubled angles.
    PhotonCascade,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::SpinSinglet => "singlet",
            StateKind::PhotonCascade => "photon",
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "singlet" => Ok(StateKind::SpinSinglet),
            "photon" => Ok(StateKind::PhotonCascade),
            other => Err(Error::UnknownName {
                kind: "two-particle state",
                name: other.to_string(),
            }),
        }
    }
}

/// A unit vector on the 4-dimensional two-particle space, basis order
/// `|00>, |01>, |10>, |11>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    vector: [Complex64; 4],
    kind: StateKind,
}

impl TwoParticleState {
    pub fn new(kind: StateKind) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let vector = match kind {
            StateKind::SpinSinglet => [
                Complex64::ZERO,
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::ZERO,
            ],
            StateKind::PhotonCascade => [
                Complex64::new(s, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(s, 0.0),
            ],
        };
        debug_assert!((vector_norm(&vector) - 1.0).abs() < 1e-12);
        Self { vector, kind }
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn vector(&self) -> &[Complex64; 4] {
        &self.vector
    }
}

/// Polarizer/Stern-Gerlach observable at the given orientation:
/// `cos(angle) sigma_z + sin(angle) sigma_x` — dichotomic for every angle.
pub fn spin_observable(angle: f64) -> Result<Observable> {
    if !angle.is_finite() {
        return Err(Error::NonFinite("analyzer angle"));
    }
    let (s, c) = angle.sin_cos();
    Observable::dichotomic(ComplexMatrix::from_real(2, &[c, s, s, -c])?)
}

/// Analyzer observable for a state kind; photon analyzers apply the
/// doubled-angle convention internally.
pub fn analyzer_observable(kind: StateKind, angle: f64) -> Result<Observable> {
    match kind {
        StateKind::SpinSinglet => spin_observable(angle),
        StateKind::PhotonCascade => spin_observable(2.0 * angle),
    }
}

fn pair_expectation(state: &TwoParticleState, joint: &ComplexMatrix) -> f64 {
    let applied = joint.matvec(state.vector()).expect("4x4 times 4-vector");
    let value = inner(state.vector(), &applied);
    debug_assert!(value.im.abs() < 1e-12);
    value.re
}

/// The correlator `E(alpha, beta) = <state| A(alpha) (x) B(beta) |state>`.
pub fn correlation(state: &TwoParticleState, alpha: f64, beta: f64) -> Result<f64> {
    let a = analyzer_observable(state.kind(), alpha)?;
    let b = analyzer_observable(state.kind(), beta)?;
    let joint = tensor(a.matrix(), b.matrix())?;
    Ok(pair_expectation(state, &joint))
}

/// Outcome probabilities for one settings pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairProbabilities {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl PairProbabilities {
    /// The correlator `E = p++ - p+- - p-+ + p--`.
    pub fn correlator(&self) -> f64 {
        self.pp - self.pm - self.mp + self.mm
    }

    pub fn sum(&self) -> f64 {
        self.pp + self.pm + self.mp + self.mm
    }

    /// Marginal probability of +1 on the a side (resp. b side).
    pub fn marginal_a_plus(&self) -> f64 {
        self.pp + self.pm
    }

    pub fn marginal_b_plus(&self) -> f64 {
        self.pp + self.mp
    }
}

/// Coincidence probabilities for all four settings pairs; `pairs[i][j]`
/// corresponds to `(alpha_{i+1}, beta_{j+1})`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoincidenceTable {
    pub pairs: [[PairProbabilities; 2]; 2],
}

fn projectors(obs: &Observable) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = obs.dim();
    let identity = ComplexMatrix::identity(n);
    let plus = identity.add(obs.matrix())?.scale_real(0.5);
    let minus = identity.sub(obs.matrix())?.scale_real(0.5);
    Ok((plus, minus))
}

/// Outcome probabilities from projector expectations per settings pair.
pub fn coincidence_table(
    state: &TwoParticleState,
    settings: &MeasurementSettings,
) -> Result<CoincidenceTable> {
    let alphas = [settings.alpha1, settings.alpha2];
    let betas = [settings.beta1, settings.beta2];
    let mut pairs = [[PairProbabilities {
        pp: 0.0,
        pm: 0.0,
        mp: 0.0,
        mm: 0.0,
    }; 2]; 2];
    for (i, &alpha) in alphas.iter().enumerate() {
        let a = analyzer_observable(state.kind(), alpha)?;
        let (a_plus, a_minus) = projectors(&a)?;
        for (j, &beta) in betas.iter().enumerate() {
            let b = analyzer_observable(state.kind(), beta)?;
            let (b_plus, b_minus) = projectors(&b)?;
            pairs[i][j] = PairProbabilities {
                pp: pair_expectation(state, &tensor(&a_plus, &b_plus)?),
                pm: pair_expectation(state, &tensor(&a_plus, &b_minus)?),
                mp: pair_expectation(state, &tensor(&a_minus, &b_plus)?),
                mm: pair_expectation(state, &tensor(&a_minus, &b_minus)?),
            };
        }
    }
    Ok(CoincidenceTable { pairs })
}

/// The Bell combination
/// `E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)` from direct expectations.
pub fn chsh_value(state: &TwoParticleState, settings: &MeasurementSettings) -> Result<f64> {
    Ok(correlation(state, settings.alpha1, settings.beta1)?
        + correlation(state, settings.alpha1, settings.beta2)?
        + correlation(state, settings.alpha2, settings.beta1)?
        - correlation(state, settings.alpha2, settings.beta2)?)
}

/// One row of an angle scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanPoint {
    pub offset_radians: f64,
    pub chsh_value: f64,
}

/// CHSH values over b-side offsets applied to a base settings pattern.
pub fn angle_scan(
    state: &TwoParticleState,
    base: &MeasurementSettings,
    scan: &ScanDescriptor,
) -> Result<Vec<ScanPoint>> {
    let offsets = scan.offsets()?;
    offsets
        .par_iter()
        .map(|&offset| {
            let settings = base.with_beta_offset(offset);
            Ok(ScanPoint {
                offset_radians: offset,
                chsh_value: chsh_value(state, &settings)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::settings::{canonical_photon_settings, canonical_singlet_settings};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    const SQRT8: f64 = 2.8284271247461903;

    #[test]
    fn spin_observable_axes() {
        let z = spin_observable(0.0).unwrap();
        assert!(
            z.matrix()
                .max_abs_diff(&ComplexMatrix::diagonal(&[1.0, -1.0]))
                < 1e-15
        );
        let x = spin_observable(FRAC_PI_2).unwrap();
        let sx = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(x.matrix().max_abs_diff(&sx) < 1e-15);
    }

    #[test]
    fn singlet_perfect_anticorrelation() {
        let s = TwoParticleState::new(StateKind::SpinSinglet);
        for a in [0.0, 0.4, 2.0] {
            assert!((correlation(&s, a, a).unwrap() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn photon_perfect_correlation() {
        let s = TwoParticleState::new(StateKind::PhotonCascade);
        for a in [0.0, 0.7, 1.9] {
            assert!((correlation(&s, a, a).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singlet_closed_form_at_sixty_degrees() {
        let s = TwoParticleState::new(StateKind::SpinSinglet);
        let e = correlation(&s, FRAC_PI_3, 0.0).unwrap();
        assert!((e + 0.5).abs() < 1e-12, "-cos(pi/3) = -0.5, got {e}");
    }

    #[test]
    fn correlators_match_closed_forms_on_a_grid() {
        let singlet = TwoParticleState::new(StateKind::SpinSinglet);
        let photon = TwoParticleState::new(StateKind::PhotonCascade);
        for k in 0..24 {
            let a = k as f64 * 0.41;
            let b = (k as f64).mul_add(-0.23, 0.9);
            let es = correlation(&singlet, a, b).unwrap();
            assert!((es + (a - b).cos()).abs() < 1e-12);
            let ep = correlation(&photon, a, b).unwrap();
            assert!((ep - (2.0 * (a - b)).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn photon_aligned_table() {
        let s = TwoParticleState::new(StateKind::PhotonCascade);
        let settings = MeasurementSettings::new(0.0, 0.3, 0.0, 0.9).unwrap();
        let t = coincidence_table(&s, &settings).unwrap();
        let p = t.pairs[0][0];
        assert!((p.pp - 0.5).abs() < 1e-12);
        assert!((p.mm - 0.5).abs() < 1e-12);
        assert!(p.pm.abs() < 1e-12);
        assert!(p.mp.abs() < 1e-12);
    }

    #[test]
    fn singlet_aligned_table_anticorrelates() {
        let s = TwoParticleState::new(StateKind::SpinSinglet);
        let settings = MeasurementSettings::new(1.1, 0.0, 1.1, 0.0).unwrap();
        let t = coincidence_table(&s, &settings).unwrap();
        let p = t.pairs[0][0];
        assert!(p.pp.abs() < 1e-12);
        assert!(p.mm.abs() < 1e-12);
    }

    #[test]
    fn tables_normalize_and_match_direct_correlators() {
        let s = TwoParticleState::new(StateKind::PhotonCascade);
        let settings = MeasurementSettings::new(0.2, 1.4, 0.6, 2.3).unwrap();
        let t = coincidence_table(&s, &settings).unwrap();
        let alphas = [settings.alpha1, settings.alpha2];
        let betas = [settings.beta1, settings.beta2];
        for (i, &alpha) in alphas.iter().enumerate() {
            for (j, &beta) in betas.iter().enumerate() {
                let p = t.pairs[i][j];
                assert!((p.sum() - 1.0).abs() < 1e-12);
                let e = correlation(&s, alpha, beta).unwrap();
                assert!((p.correlator() - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn photon_canonical_settings_reach_tsirelson() {
        let s = TwoParticleState::new(StateKind::PhotonCascade);
        let v = chsh_value(&s, &canonical_photon_settings()).unwrap();
        assert!((v - SQRT8).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn singlet_canonical_settings_reach_tsirelson_magnitude() {
        let s = TwoParticleState::new(StateKind::SpinSinglet);
        let v = chsh_value(&s, &canonical_singlet_settings()).unwrap();
        assert!((v + SQRT8).abs() < 1e-9, "got {v}");
        assert!((v.abs() - SQRT8).abs() < 1e-9);
    }

    #[test]
    fn aligned_settings_give_minus_two_for_singlet() {
        // All four angles equal: E = -1 everywhere, B = -1-1-1+1 = -2.
        let s = TwoParticleState::new(StateKind::SpinSinglet);
        let settings = MeasurementSettings::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let v = chsh_value(&s, &settings).unwrap();
        assert!((v + 2.0).abs() < 1e-12);
    }

    #[test]
    fn scan_peaks_at_zero_offset() {
        let s = TwoParticleState::new(StateKind::PhotonCascade);
        let base = canonical_photon_settings();
        let scan = ScanDescriptor {
            start: -0.3,
            stop: 0.3,
            step: 0.01,
        };
        let points = angle_scan(&s, &base, &scan).unwrap();
        assert_eq!(points.len(), 61);
        let max = points
            .iter()
            .map(|p| p.chsh_value)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((max - SQRT8).abs() < 1e-6, "scan max {max}");
        // Offset pi/8 collapses the geometry to classical gaps (0, pi/2, pi).
        let collapsed = chsh_value(&s, &base.with_beta_offset(PI / 8.0)).unwrap();
        assert!((collapsed - 2.0).abs() < 1e-12, "got {collapsed}");
    }

    #[test]
    fn empty_scan_rejected() {
        let s = TwoParticleState::new(StateKind::PhotonCascade);
        let scan = ScanDescriptor {
            start: 0.4,
            stop: 0.1,
            step: 0.05,
        };
        assert!(angle_scan(&s, &canonical_photon_settings(), &scan).is_err());
    }

    #[test]
    fn analyzer_eigenvalues_dichotomic_at_random_angles() {
        for k in 0..16 {
            let angle = k as f64 * 0.37 - 2.0;
            let o = spin_observable(angle).unwrap();
            let vals = crate::eigen::hermitian_eigenvalues(o.matrix()).unwrap();
            assert!((vals[0] + 1.0).abs() < 1e-12);
            assert!((vals[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unknown_state_name_rejected() {
        assert!(StateKind::by_name("werner").is_err());
    }
}
