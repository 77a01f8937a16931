//! Exhaustive enumeration of small spaces and maps, the verification
//! campaign over them, and searches for counterexamples and extremal maps.

mod campaign;
mod enumerate;
mod patterns;
mod report;

use thiserror::Error;

pub use campaign::{map_checks, sample_map, verify_suite, COMPOSITION_CHECKS, MAP_CHECKS, PRNG_NAME};
pub use enumerate::{enumerate_maps, enumerate_spaces, SpaceEnumeration, ISO_COUNTS, LABELED_COUNTS};
pub use patterns::{mine, MineBounds, Pattern};
pub use report::{Finding, FindingKind, Instance, MinerReport, Tally};

use crate::finspace::SpaceError;
use crate::mapcalc::{check_composition_bounds, sc_bruteforce, wd_bruteforce, CheckOutcome, MapError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MinerError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("cannot start worker threads: {0}")]
    ThreadPool(String),
}

impl MinerError {
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            MinerError::Space(SpaceError::SizeGuardExceeded { .. })
                | MinerError::Map(MapError::Space(SpaceError::SizeGuardExceeded { .. }))
        )
    }
}

/// Randomized instances beyond the exhaustive bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampler {
    pub seed: u64,
    pub count: usize,
    /// Largest space drawn, at most the all-subsets guard.
    pub max_points: usize,
}

/// Bounds of a verification run. Spaces of every size from 1 up to the
/// bound are visited; `max_z = 0` skips composable pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationTask {
    pub max_x: usize,
    pub max_y: usize,
    pub max_z: usize,
    pub up_to_iso: bool,
    pub sampler: Option<Sampler>,
}

impl EnumerationTask {
    /// Exhaustive labeled run with triples up to `max_y`.
    pub fn exhaustive(max_x: usize, max_y: usize) -> Self {
        EnumerationTask { max_x, max_y, max_z: max_y, up_to_iso: false, sampler: None }
    }
}

/// Re-derive a finding from its instance alone, through the brute-force
/// subset scans where a pattern allows it.
pub fn reverify(finding: &Finding) -> Result<bool, MinerError> {
    let check = finding.check.as_str();
    match (&finding.instance, finding.kind) {
        (Instance::Map(f), FindingKind::Violation) => {
            let ctx = campaign::PairContext::of(f.dom(), f.cod());
            let eval = campaign::evaluate_map(f, &ctx)?;
            Ok(eval.checks.iter().any(|c| c.id == check && c.outcome == CheckOutcome::Violated))
        }
        (Instance::Composable(f, g), FindingKind::Violation) => {
            let r = check_composition_bounds(f, g)?;
            let found = r.violations().any(|c| c.id == check);
            Ok(found)
        }
        (Instance::Map(f), _) if check == "sc-not-wd" || check == "sc-implies-wd-regular-codomain" => {
            let gated = finding.kind != FindingKind::HypothesisGated || !f.cod().properties().regular;
            Ok(gated && sc_bruteforce(f)? && !wd_bruteforce(f)?)
        }
        (Instance::Map(f), FindingKind::HypothesisGated) if check == "scattered-iff-bijections-sc" => {
            let (x, y) = (f.dom(), f.cod());
            Ok(f.is_bijective() && y.is_scattered() && !x.is_scattered() && !x.is_t0() && sc_bruteforce(f)?)
        }
        (Instance::Map(f), _) if check == "sc-lt-wd" => {
            let sc = crate::mapcalc::min_vanishing_length(f, false)?;
            let wd = crate::mapcalc::min_vanishing_length(f, true)?;
            Ok(matches!((sc, wd), (Some(a), Some(b)) if a < b))
        }
        (Instance::Map(f), _) if check == "max-sc-index" => {
            let claimed = finding
                .certificate
                .split(',')
                .find_map(|kv| kv.strip_prefix("sc="))
                .and_then(|v| v.parse::<usize>().ok());
            Ok(claimed.is_some() && crate::mapcalc::min_vanishing_length(f, false)? == claimed)
        }
        (Instance::Composable(f, g), _) if check == "sc-comp-not-sc" || check == "comp-sc-sc-regular-middle" => {
            let h = f.then(g)?;
            let gated = finding.kind != FindingKind::HypothesisGated || !f.cod().properties().regular;
            Ok(gated && sc_bruteforce(f)? && sc_bruteforce(g)? && !sc_bruteforce(&h)?)
        }
        _ => Ok(false),
    }
}
