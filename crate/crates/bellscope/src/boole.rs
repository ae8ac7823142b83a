//! Boole's 1854 bounds for union and intersection probabilities, explicit
//! witness distributions attaining each bound, and a brute-force tightness
//! oracle over the marginal-constrained joint-distribution polytope.
//!
//! Atom indexing convention (fixed, also used in CSV files): bit `i` of the
//! atom bitmask means membership in event `A_i`, so a joint distribution over
//! `n` events is an array of `2^n` nonnegative atom weights summing to one.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest event count for explicit joint distributions (2^20 atoms).
pub const JOINT_EVENT_CAP: usize = 20;

/// The exhaustive oracle is exponential; it stops here.
pub const ORACLE_EVENT_CAP: usize = 3;

/// Closed interval of admissible probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Which bound a witness distribution should attain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BoundTarget {
    UnionLo,
    UnionHi,
    InterLo,
    InterHi,
}

impl BoundTarget {
    pub const ALL: [BoundTarget; 4] = [
        BoundTarget::UnionLo,
        BoundTarget::UnionHi,
        BoundTarget::InterLo,
        BoundTarget::InterHi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundTarget::UnionLo => "union-lo",
            BoundTarget::UnionHi => "union-hi",
            BoundTarget::InterLo => "inter-lo",
            BoundTarget::InterHi => "inter-hi",
        }
    }
}

fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidProbability(
            "at least one event probability is required".into(),
        ));
    }
    for &p in probs {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::InvalidProbability(format!(
                "probability {p} is outside [0, 1]"
            )));
        }
    }
    Ok(())
}

/// `max p_i <= P(union) <= min(1, sum p_i)`.
pub fn union_bounds(probs: &[f64]) -> Result<BoundsInterval> {
    validate_probs(probs)?;
    let lo = probs.iter().cloned().fold(0.0_f64, f64::max);
    let hi = probs.iter().sum::<f64>().min(1.0);
    Ok(BoundsInterval { lo, hi })
}

/// `max(0, sum p_i - n + 1) <= P(intersection) <= min p_i`.
pub fn intersection_bounds(probs: &[f64]) -> Result<BoundsInterval> {
    validate_probs(probs)?;
    let hi = probs.iter().cloned().fold(1.0_f64, f64::min);
    // Subtracting (n-1) in one step keeps n = 1 exact; the final clamp
    // repairs the at-most-one-ulp case where summation rounding lifts the
    // lower bound past min p (the exact value always satisfies lo <= hi).
    let lo = (probs.iter().sum::<f64>() - (probs.len() - 1) as f64)
        .max(0.0)
        .min(hi);
    Ok(BoundsInterval { lo, hi })
}

/// Individual probabilities with an optional explicit joint distribution.
#[derive(Debug, Clone)]
pub struct BooleSystem {
    probs: Vec<f64>,
    joint: Option<Vec<f64>>,
}

impl BooleSystem {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_probs(&probs)?;
        Ok(Self { probs, joint: None })
    }

    /// Attach an explicit joint distribution; it must sum to one and
    /// reproduce every marginal within 1e-12.
    pub fn with_joint(probs: Vec<f64>, joint: Vec<f64>) -> Result<Self> {
        validate_probs(&probs)?;
        let n = probs.len();
        if n > JOINT_EVENT_CAP {
            return Err(Error::TooManyEvents {
                n,
                cap: JOINT_EVENT_CAP,
            });
        }
        if joint.len() != 1 << n {
            return Err(Error::InvalidProbability(format!(
                "joint has {} atoms, expected 2^{n}",
                joint.len()
            )));
        }
        let mut total = 0.0;
        for &w in &joint {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidProbability(format!(
                    "atom weight {w} is negative or non-finite"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!(
                "joint sums to {total}, not 1"
            )));
        }
        for (i, &p) in probs.iter().enumerate() {
            let m = marginal(&joint, i);
            if (m - p).abs() > 1e-12 {
                return Err(Error::InvalidProbability(format!(
                    "joint reproduces marginal {i} as {m}, expected {p}"
                )));
            }
        }
        Ok(Self {
            probs,
            joint: Some(joint),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn joint(&self) -> Option<&[f64]> {
        self.joint.as_deref()
    }

    pub fn union_probability(&self) -> Option<f64> {
        self.joint.as_deref().map(union_probability)
    }

    pub fn intersection_probability(&self) -> Option<f64> {
        self.joint.as_deref().map(intersection_probability)
    }
}

/// Marginal `P(A_i)` of an atom-weight array.
pub fn marginal(joint: &[f64], event: usize) -> f64 {
    joint
        .iter()
        .enumerate()
        .filter(|(mask, _)| mask & (1 << event) != 0)
        .map(|(_, &w)| w)
        .sum()
}

/// `P(A_1 u ... u A_n)` of an atom-weight array (all atoms but the empty one).
pub fn union_probability(joint: &[f64]) -> f64 {
    joint.iter().skip(1).sum()
}

/// `P(A_1 n ... n A_n)` of an atom-weight array (the all-ones atom).
pub fn intersection_probability(joint: &[f64]) -> f64 {
    *joint.last().expect("non-empty joint")
}

/// Events as unions of half-open subintervals of [0, 1).
type Segments = Vec<Vec<(f64, f64)>>;

/// Comonotone layering: event `i` occupies `[0, p_i)`. Nested events give
/// `P(union) = max p` and `P(intersection) = min p` simultaneously.
fn layered_segments(probs: &[f64]) -> Segments {
    probs.iter().map(|&p| vec![(0.0, p)]).collect()
}

/// Maximally spread layering: event `i` occupies an arc of length `p_i`
/// starting at the running prefix sum, wrapped around the unit circle.
/// Consecutive arcs tile without gaps, so `P(union) = min(1, sum p)`.
fn shifted_segments(probs: &[f64]) -> Segments {
    let mut start = 0.0_f64;
    let mut events = Vec::with_capacity(probs.len());
    for &p in probs {
        let s = start.rem_euclid(1.0);
        let segs = if p <= 0.0 {
            vec![]
        } else if s + p <= 1.0 {
            vec![(s, s + p)]
        } else {
            vec![(s, 1.0), (0.0, s + p - 1.0)]
        };
        events.push(segs);
        start += p;
    }
    events
}

/// Convert an interval construction into atom weights by slicing [0, 1) at
/// every segment endpoint and classifying each elementary slice by midpoint
/// membership.
fn atoms_from_segments(events: &Segments) -> Vec<f64> {
    let n = events.len();
    let mut cuts: Vec<f64> = vec![0.0, 1.0];
    for segs in events {
        for &(lo, hi) in segs {
            cuts.push(lo);
            cuts.push(hi);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut weights = vec![0.0; 1 << n];
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let mut mask = 0usize;
        for (i, segs) in events.iter().enumerate() {
            if segs.iter().any(|&(a, b)| mid >= a && mid < b) {
                mask |= 1 << i;
            }
        }
        weights[mask] += hi - lo;
    }
    weights
}

/// Explicit joint distribution whose marginals are `probs` and whose union
/// (resp. intersection) probability attains the requested Boole bound.
pub fn witness(probs: &[f64], target: BoundTarget) -> Result<Vec<f64>> {
    validate_probs(probs)?;
    let n = probs.len();
    if n > JOINT_EVENT_CAP {
        return Err(Error::TooManyEvents {
            n,
            cap: JOINT_EVENT_CAP,
        });
    }
    let weights = match target {
        BoundTarget::UnionLo | BoundTarget::InterHi => {
            atoms_from_segments(&layered_segments(probs))
        }
        BoundTarget::UnionHi => atoms_from_segments(&shifted_segments(probs)),
        BoundTarget::InterLo => {
            // De Morgan: spread the complements, then flip every atom.
            let complements: Vec<f64> = probs.iter().map(|&p| 1.0 - p).collect();
            let spread = atoms_from_segments(&shifted_segments(&complements));
            let full = (1 << n) - 1;
            let mut flipped = vec![0.0; 1 << n];
            for (mask, &w) in spread.iter().enumerate() {
                flipped[full ^ mask] = w;
            }
            flipped
        }
    };
    Ok(weights)
}

/// Observed extremes of union and intersection probabilities.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleExtremes {
    pub union: BoundsInterval,
    pub intersection: BoundsInterval,
}

/// Brute-force corroboration of tightness: enumerate every joint whose atom
/// weights are multiples of `1/grid_resolution`, keep those reproducing the
/// marginals within half a grid cell, and fold in the analytic witnesses.
///
/// Limited to `n <= 3` events (the enumeration is exponential).
pub fn oracle_extremes(probs: &[f64], grid_resolution: usize) -> Result<OracleExtremes> {
    validate_probs(probs)?;
    let n = probs.len();
    if n > ORACLE_EVENT_CAP {
        return Err(Error::TooManyEvents {
            n,
            cap: ORACLE_EVENT_CAP,
        });
    }
    if grid_resolution < 10 {
        return Err(Error::InvalidConfig(
            "gridResolution must be at least 10".into(),
        ));
    }

    let atoms = 1 << n;
    let g = grid_resolution;
    let cell = 1.0 / g as f64;
    let marginal_tol = 0.5 * cell + 1e-9;

    let mut union_min = f64::INFINITY;
    let mut union_max = f64::NEG_INFINITY;
    let mut inter_min = f64::INFINITY;
    let mut inter_max = f64::NEG_INFINITY;

    // Depth-first enumeration of weight compositions of `g` into `atoms`
    // parts, tracking integer marginal accumulators.
    let mut counts = vec![0usize; atoms];
    let mut stack_marginals = vec![0usize; n];
    enumerate_compositions(
        g,
        0,
        atoms,
        &mut counts,
        &mut stack_marginals,
        &mut |counts, marginals| {
            for (i, &p) in probs.iter().enumerate() {
                if (marginals[i] as f64 * cell - p).abs() > marginal_tol {
                    return;
                }
            }
            let union = (g - counts[0]) as f64 * cell;
            let inter = counts[atoms - 1] as f64 * cell;
            union_min = union_min.min(union);
            union_max = union_max.max(union);
            inter_min = inter_min.min(inter);
            inter_max = inter_max.max(inter);
        },
    );

    // Analytic witnesses certify exact attainment regardless of the grid.
    for target in BoundTarget::ALL {
        let w = witness(probs, target)?;
        let u = union_probability(&w);
        let i = intersection_probability(&w);
        union_min = union_min.min(u);
        union_max = union_max.max(u);
        inter_min = inter_min.min(i);
        inter_max = inter_max.max(i);
    }

    Ok(OracleExtremes {
        union: BoundsInterval {
            lo: union_min,
            hi: union_max,
        },
        intersection: BoundsInterval {
            lo: inter_min,
            hi: inter_max,
        },
    })
}

fn enumerate_compositions(
    remaining: usize,
    atom: usize,
    atoms: usize,
    counts: &mut Vec<usize>,
    marginals: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize], &[usize]),
) {
    if atom == atoms - 1 {
        counts[atom] = remaining;
        for (i, m) in marginals.iter_mut().enumerate() {
            if atom & (1 << i) != 0 {
                *m += remaining;
            }
        }
        visit(counts, marginals);
        for (i, m) in marginals.iter_mut().enumerate() {
            if atom & (1 << i) != 0 {
                *m -= remaining;
            }
        }
        return;
    }
    for w in 0..=remaining {
        counts[atom] = w;
        for (i, m) in marginals.iter_mut().enumerate() {
            if atom & (1 << i) != 0 {
                *m += w;
            }
        }
        enumerate_compositions(remaining - w, atom + 1, atoms, counts, marginals, visit);
        for (i, m) in marginals.iter_mut().enumerate() {
            if atom & (1 << i) != 0 {
                *m -= w;
            }
        }
    }
    counts[atom] = 0;
}

/// Serialize a joint distribution as CSV with columns `atom_bitmask,weight`.
pub fn joint_to_csv(joint: &[f64]) -> String {
    let mut out = String::from("atom_bitmask,weight\n");
    for (mask, &w) in joint.iter().enumerate() {
        out.push_str(&format!("{mask},{w}\n"));
    }
    out
}

/// Parse a joint distribution from the CSV schema written by
/// [`joint_to_csv`]. Missing atoms default to weight zero; the event count is
/// the smallest `n` covering every listed bitmask.
pub fn joint_from_csv(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let display = path.display().to_string();
    let mut rows: Vec<(usize, f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 && line.to_ascii_lowercase().starts_with("atom_bitmask") {
            continue;
        }
        let mut parts = line.split(',');
        let mask: usize = parts
            .next()
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::CsvFormat {
                path: display.clone(),
                detail: format!("line {}: expected `atom_bitmask,weight`", idx + 1),
            })?;
        let weight: f64 = parts
            .next()
            .map(str::trim)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::CsvFormat {
                path: display.clone(),
                detail: format!("line {}: expected `atom_bitmask,weight`", idx + 1),
            })?;
        rows.push((mask, weight));
    }
    if rows.is_empty() {
        return Err(Error::CsvFormat {
            path: display,
            detail: "no atom rows".into(),
        });
    }
    let max_mask = rows.iter().map(|&(m, _)| m).max().expect("non-empty");
    let n = (usize::BITS - max_mask.leading_zeros()).max(1) as usize;
    if n > JOINT_EVENT_CAP {
        return Err(Error::TooManyEvents {
            n,
            cap: JOINT_EVENT_CAP,
        });
    }
    let mut joint = vec![0.0; 1 << n];
    for (mask, weight) in rows {
        joint[mask] = weight;
    }
    Ok(joint)
}
