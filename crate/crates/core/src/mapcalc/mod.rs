//! Maps between finite spaces: discontinuity sets, the discontinuity and
//! weak-discontinuity series with their indices, well-order witnesses,
//! decomposition numbers and the composition inequalities.

mod bounds;
mod cover;
mod map;
mod measure;
mod series;
mod witness;

pub use bounds::{
    check_composition_bounds, composition_checks, decomposition_bound_checks, ordinal_product,
    CheckOutcome, CheckResult, CompositionReport, MapSummary,
};
pub use cover::{dec_arbitrary, dec_closed, min_set_cover, Cardinality, CoverMode, CoverResult};
pub use map::{compose, FiniteMap};
pub(crate) use map::write_table;
pub use measure::{ac_qc_sets, gdelta_measurable, GdeltaReport};
pub use series::{
    iterate_series, min_vanishing_length, sc_bruteforce, sc_series, verify_report,
    verify_vanishing_series, wd_bruteforce, wd_series, SeriesKind, SeriesReport, VanishingCheck,
    Verdict,
};
pub use witness::{well_order_witness, WellOrderWitness};

use thiserror::Error;

use crate::finspace::{PointSet, SpaceError};
use crate::guards::Guards;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("set {set} is not contained in the {n}-point domain")]
    DomainMismatch { set: PointSet, n: usize },
    #[error("value table has {got} entries, domain has {expected} points")]
    PartialTable { expected: usize, got: usize },
    #[error("point {point} maps to {value}, outside a {codomain_size}-point codomain")]
    RangeError {
        point: usize,
        value: usize,
        codomain_size: usize,
    },
    #[error("codomain of the first map differs from the domain of the second")]
    SpaceMismatch,
    #[error("malformed series: {0}")]
    MalformedSeries(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

pub(crate) fn subset_guard(n: usize) -> Result<(), MapError> {
    let limit = Guards::current().subset_scan;
    if n > limit {
        return Err(SpaceError::SizeGuardExceeded {
            what: "all-subsets scan",
            size: n as u64,
            limit: limit as u64,
        }
        .into());
    }
    Ok(())
}


#[cfg(test)]
mod laws {
    use super::*;
    use crate::finspace::FiniteSpace;
    use proptest::prelude::*;

    fn random_space(max: usize) -> impl Strategy<Value = FiniteSpace> {
        (1usize..=max).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..2 * n)
                .prop_map(move |pairs| FiniteSpace::from_relation_closure(n, pairs).unwrap())
        })
    }

    fn random_map(max: usize) -> impl Strategy<Value = FiniteMap> {
        (random_space(max), random_space(4)).prop_flat_map(|(x, y)| {
            let m = y.n();
            proptest::collection::vec(0..m, x.n())
                .prop_map(move |table| FiniteMap::new(x.clone(), y.clone(), table).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn series_match_bruteforce(f in random_map(8)) {
            prop_assert_eq!(sc_series(&f).holds(), sc_bruteforce(&f).unwrap());
            prop_assert_eq!(wd_series(&f).holds(), wd_bruteforce(&f).unwrap());
        }

        #[test]
        fn index_relations(f in random_map(8)) {
            let sc = sc_series(&f);
            let wd = wd_series(&f);
            if let Some(w) = wd.index() {
                let s = sc.index();
                prop_assert!(s.is_some_and(|s| s <= w));
                prop_assert!(w <= f.dom().closed_chain_length());
            }
            if f.cod().properties().regular {
                prop_assert_eq!(sc.holds(), wd.holds());
            }
        }

        #[test]
        fn restriction_does_not_raise_indices(f in random_map(7), bits in any::<u64>()) {
            let z = PointSet::from_bits(bits) & f.dom().full();
            let r = f.restrict(z).unwrap();
            if let Some(s) = sc_series(&f).index() {
                prop_assert!(sc_series(&r).index().is_some_and(|t| t <= s));
            }
            if let Some(w) = wd_series(&f).index() {
                prop_assert!(wd_series(&r).index().is_some_and(|t| t <= w));
            }
        }

        #[test]
        fn ac_qc_nesting(f in random_map(8)) {
            let (ac, qc) = ac_qc_sets(&f);
            let continuity = f.dom().full() - f.disc(f.dom().full());
            prop_assert!(qc.is_subset(ac));
            prop_assert!(continuity.is_subset(qc));
        }

        #[test]
        fn covers_verify(f in random_map(6)) {
            let a = dec_arbitrary(&f).unwrap();
            let c = dec_closed(&f).unwrap();
            prop_assert!(a.verify(&f));
            prop_assert!(c.verify(&f));
            prop_assert!(a.greedy_bound.unwrap() >= a.pieces.len());
            prop_assert_eq!(gdelta_measurable(&f).measurable, f.is_continuous());
        }

        #[test]
        fn witness_iff_sc(f in random_map(8)) {
            match well_order_witness(&f) {
                Some(w) => prop_assert!(w.verify_tails(&f)),
                None => prop_assert!(!sc_bruteforce(&f).unwrap()),
            }
        }
    }
}
