//! Composition inequalities and decomposition bounds, evaluated on concrete
//! instances.

use std::fmt;

use super::{dec_closed, sc_series, wd_series, Cardinality, FiniteMap, MapError};
use crate::finspace::FiniteSpace;

/// Ordinal multiplication by the recursion `a·0 = 0`, `a·(b+1) = a·b + a`.
pub fn ordinal_product(a: usize, b: usize) -> usize {
    if b == 0 {
        0
    } else {
        ordinal_product(a, b - 1) + a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckOutcome {
    Holds,
    Violated,
    /// The premises of the implication are false on this instance.
    NotApplicable,
    /// A space in the instance lacks a required property (regularity, or a
    /// partition topology for the pseudocharacter bounds).
    HypothesisNotMet,
}

impl CheckOutcome {
    pub fn name(self) -> &'static str {
        match self {
            CheckOutcome::Holds => "holds",
            CheckOutcome::Violated => "violated",
            CheckOutcome::NotApplicable => "not-applicable",
            CheckOutcome::HypothesisNotMet => "hypothesis-not-met",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckOutcome::Holds
        } else {
            CheckOutcome::Violated
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CheckResult {
    pub id: &'static str,
    pub outcome: CheckOutcome,
}

/// Indices and closed decomposition number of one map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MapSummary {
    pub sc: Option<usize>,
    pub wd: Option<usize>,
    pub continuous: bool,
    pub decc: Cardinality,
}

impl MapSummary {
    pub fn of(f: &FiniteMap) -> Result<Self, MapError> {
        Ok(MapSummary {
            sc: sc_series(f).index(),
            wd: wd_series(f).index(),
            continuous: f.is_continuous(),
            decc: dec_closed(f)?.cardinality,
        })
    }
}

/// Evaluate every composition statement for `h = g ∘ f`, where `f: X → Y`,
/// `g: Y → Z` and `middle_regular` says whether `Y` is regular.
pub fn composition_checks(
    f: &MapSummary,
    g: &MapSummary,
    h: &MapSummary,
    middle_regular: bool,
) -> Vec<CheckResult> {
    use CheckOutcome::*;
    let implication = |premise: bool, conclusion: bool| {
        if premise {
            CheckOutcome::from_bool(conclusion)
        } else {
            NotApplicable
        }
    };
    let mut out = Vec::with_capacity(6);
    out.push(CheckResult {
        id: "comp-wd-wd",
        outcome: implication(f.wd.is_some() && g.wd.is_some(), h.wd.is_some()),
    });
    out.push(CheckResult {
        id: "comp-wd-sc",
        outcome: implication(f.wd.is_some() && g.sc.is_some(), h.sc.is_some()),
    });
    out.push(CheckResult {
        id: "comp-sc-sc-regular-middle",
        outcome: match (f.sc.is_some() && g.sc.is_some(), middle_regular) {
            (false, _) => NotApplicable,
            (true, false) => HypothesisNotMet,
            (true, true) => CheckOutcome::from_bool(h.sc.is_some()),
        },
    });
    out.push(CheckResult {
        id: "comp-sc-index-bound",
        outcome: match (f.wd, g.sc) {
            (Some(wf), Some(sg)) => {
                CheckOutcome::from_bool(h.sc.is_some_and(|sh| sh <= ordinal_product(sg, wf)))
            }
            _ => NotApplicable,
        },
    });
    out.push(CheckResult {
        id: "comp-wd-index-bound",
        outcome: match (f.wd, g.wd) {
            (Some(wf), Some(wg)) => {
                CheckOutcome::from_bool(h.wd.is_some_and(|wh| wh <= ordinal_product(wg, wf)))
            }
            _ => NotApplicable,
        },
    });
    out.push(CheckResult {
        id: "comp-decc-bound",
        outcome: if [f.decc, g.decc, h.decc].contains(&Cardinality::None) {
            NotApplicable
        } else {
            CheckOutcome::from_bool(h.decc <= f.decc.max(g.decc))
        },
    });
    out
}

/// The pseudocharacter bounds on `dec_c` for a weakly discontinuous map.
/// On a finite space `par(X) = 1`, and `Ψ(X) = 1` exactly when every closed
/// set is open; otherwise `Ψ` is undefined and the checks report
/// [`CheckOutcome::HypothesisNotMet`]. The hereditary Lindelöf number is
/// replaced by the longest chain of closed sets.
pub fn decomposition_bound_checks(f: &MapSummary, x: &FiniteSpace) -> Vec<CheckResult> {
    let ids = ["decc-wd-pseudochar-bound", "decc-par-pseudochar-bound", "decc-chain-length-bound"];
    let Some(wd) = f.wd else {
        return ids
            .iter()
            .map(|&id| CheckResult { id, outcome: CheckOutcome::NotApplicable })
            .collect();
    };
    if !x.is_partition() {
        return ids
            .iter()
            .map(|&id| CheckResult { id, outcome: CheckOutcome::HypothesisNotMet })
            .collect();
    }
    let (psi, par) = (1, 1);
    let bounds = [wd.max(psi), par.max(psi), x.closed_chain_length()];
    ids.iter()
        .zip(bounds)
        .map(|(&id, b)| CheckResult {
            id,
            outcome: CheckOutcome::from_bool(f.decc <= Cardinality::Finite(b)),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    pub composite: FiniteMap,
    pub f: MapSummary,
    pub g: MapSummary,
    pub h: MapSummary,
    pub middle_regular: bool,
    pub checks: Vec<CheckResult>,
}

impl CompositionReport {
    pub fn violations(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.outcome == CheckOutcome::Violated)
    }
}

pub fn check_composition_bounds(f: &FiniteMap, g: &FiniteMap) -> Result<CompositionReport, MapError> {
    let composite = f.then(g)?;
    let (sf, sg, sh) = (MapSummary::of(f)?, MapSummary::of(g)?, MapSummary::of(&composite)?);
    let middle_regular = f.cod().properties().regular;
    Ok(CompositionReport {
        checks: composition_checks(&sf, &sg, &sh, middle_regular),
        composite,
        f: sf,
        g: sg,
        h: sh,
        middle_regular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapcalc::fixtures::*;
    use crate::testutil::all_preorders;

    #[test]
    fn ordinal_product_examples() {
        assert_eq!(ordinal_product(3, 0), 0);
        assert_eq!(ordinal_product(2, 3), 6);
        for k in 0..10 {
            assert_eq!(ordinal_product(1, k), k);
            assert_eq!(ordinal_product(k, 4), 4 * k);
        }
    }

    #[test]
    fn continuous_pair_holds_with_index_one() {
        let f = FiniteMap::identity(FiniteSpace::chain(3));
        let r = check_composition_bounds(&f, &f).unwrap();
        assert_eq!(r.h.sc, Some(1));
        assert_eq!(r.h.wd, Some(1));
        assert!(r
            .checks
            .iter()
            .all(|c| c.outcome == CheckOutcome::Holds || c.id == "comp-sc-sc-regular-middle"));
        assert_eq!(r.violations().count(), 0);
    }

    #[test]
    fn index_bound_on_swap() {
        // wd(swap) = 2 and sc(swap) = 2, so sc(swap ∘ swap) ≤ 4
        let r = check_composition_bounds(&swap(), &swap()).unwrap();
        assert_eq!((r.f.wd, r.g.sc), (Some(2), Some(2)));
        let bound = r.checks.iter().find(|c| c.id == "comp-sc-index-bound").unwrap();
        assert_eq!(bound.outcome, CheckOutcome::Holds);
        assert!(r.h.sc.unwrap() <= 4);
    }

    #[test]
    fn non_regular_middle_is_gated() {
        let f = indiscrete_to_sierpinski();
        let g = FiniteMap::new(FiniteSpace::sierpinski(), FiniteSpace::discrete(2), vec![1, 0]).unwrap();
        let r = check_composition_bounds(&f, &g).unwrap();
        assert!(!r.middle_regular);
        let gated = r.checks.iter().find(|c| c.id == "comp-sc-sc-regular-middle").unwrap();
        assert_eq!(gated.outcome, CheckOutcome::HypothesisNotMet);
        assert_eq!(r.violations().count(), 0);
    }

    #[test]
    fn space_mismatch() {
        let d = FiniteMap::identity(FiniteSpace::discrete(2));
        assert!(matches!(check_composition_bounds(&swap(), &d), Err(MapError::SpaceMismatch)));
    }

    #[test]
    fn no_violations_on_small_triples() {
        let spaces: Vec<FiniteSpace> = (1..=2).flat_map(all_preorders).collect();
        for x in &spaces {
            for y in &spaces {
                for z in &spaces {
                    for f in all_maps(x, y) {
                        for g in all_maps(y, z) {
                            let r = check_composition_bounds(&f, &g).unwrap();
                            assert_eq!(r.violations().count(), 0, "{f} then {g}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pseudochar_bounds_on_partition_domains() {
        for f in maps_up_to(3, 3) {
            let s = MapSummary::of(&f).unwrap();
            for c in decomposition_bound_checks(&s, f.dom()) {
                assert_ne!(c.outcome, CheckOutcome::Violated, "{f} {}", c.id);
                if s.wd.is_some() && !f.dom().is_partition() {
                    assert_eq!(c.outcome, CheckOutcome::HypothesisNotMet);
                }
            }
        }
    }
}
