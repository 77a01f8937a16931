//! Finite topological spaces encoded by their specialization preorders.

mod canon;
mod pointset;
mod props;
mod space;

pub use canon::CanonicalForm;
pub use pointset::{PointSet, Points, Subsets, WORD_BITS};
pub use props::{CantorBendixson, SpaceProperties, SEPARATION_SEARCH_LIMIT};
pub use space::FiniteSpace;
pub(crate) use space::subspace_index;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("open family is not closed under union/intersection: {a} and {b} need {missing}")]
    NotATopology {
        a: PointSet,
        b: PointSet,
        missing: PointSet,
    },
    #[error("open family must contain the empty set and the whole space")]
    MissingExtremes,
    #[error("point {point} out of range for a {n}-point space")]
    IndexOutOfRange { point: usize, n: usize },
    #[error("relation is not transitive: {x}≤{y} and {y}≤{z} but not {x}≤{z}")]
    NotTransitive { x: usize, y: usize, z: usize },
    #[error("{n} points exceeds the limit of {max}")]
    TooManyPoints { n: usize, max: usize },
    #[error("size guard exceeded for {what}: {size} > {limit}")]
    SizeGuardExceeded {
        what: &'static str,
        size: u64,
        limit: u64,
    },
}

#[cfg(test)]
mod laws {
    //! Closure-operator laws, checked exhaustively on every preorder with at
    //! most four points and by proptest on random preorders up to ten.

    use super::*;
    use crate::testutil::all_preorders;
    use proptest::prelude::*;

    fn random_space() -> impl Strategy<Value = FiniteSpace> {
        (1usize..=10).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..2 * n)
                .prop_map(move |pairs| FiniteSpace::from_relation_closure(n, pairs).unwrap())
        })
    }

    fn check_laws(s: &FiniteSpace, a: PointSet, b: PointSet) {
        let cl = |x| s.closure(x);
        assert_eq!(cl(cl(a)), cl(a));
        assert!(a.is_subset(cl(a)));
        assert_eq!(cl(a | b), cl(a) | cl(b));
        if a.is_subset(b) {
            assert!(cl(a).is_subset(cl(b)));
        }
        assert_eq!(s.interior(a), s.complement(cl(s.complement(a))));
    }

    #[test]
    fn labeled_counts_match_known_sequence() {
        let counts: Vec<usize> = (0..=4).map(|n| all_preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn closure_laws_exhaustive_up_to_three() {
        for n in 0..=3 {
            for s in all_preorders(n) {
                for a in s.full().subsets() {
                    for b in s.full().subsets() {
                        check_laws(&s, a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn scattered_iff_every_subset_has_isolated_point() {
        for n in 0..=4 {
            for s in all_preorders(n) {
                let by_subsets = s
                    .full()
                    .subsets()
                    .filter(|a| !a.is_empty())
                    .all(|a| !s.isolated_points(a).is_empty());
                assert_eq!(s.is_scattered(), by_subsets, "{s}");
            }
        }
    }

    #[test]
    fn property_cross_checks_exhaustive() {
        for n in 0..=4 {
            for s in all_preorders(n) {
                let p = s.properties();
                let identity = (0..n).all(|x| s.min_open(x) == PointSet::singleton(x));
                assert_eq!(p.t1, identity);
                assert_eq!(p.t2, p.t1);
                assert!(!p.partition || p.regular);
                // on finite spaces the converse holds as well
                assert_eq!(p.regular, p.partition);
                assert_eq!(s.is_regular_by_search(), s.is_regular_by_neighborhoods());
                assert_eq!(s.is_t2_by_search(), s.is_t2_by_neighborhoods());
            }
        }
    }

    #[test]
    fn open_family_round_trip_exhaustive() {
        for n in 0..=4 {
            for s in all_preorders(n) {
                let rebuilt = FiniteSpace::from_open_family(n, &s.open_sets()).unwrap();
                assert_eq!(rebuilt, s);
            }
        }
    }

    #[test]
    fn min_open_is_intersection_of_opens() {
        for s in all_preorders(3) {
            let opens = s.open_sets();
            for x in 0..3 {
                let meet = opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(s.full(), |acc, o| acc & *o);
                assert_eq!(meet, s.min_open(x));
                assert!(s.is_open(meet));
            }
        }
    }

    #[test]
    fn closed_chain_length_matches_chain_search() {
        // oracle: longest chain of non-empty closed sets by dynamic programming
        fn longest(from: PointSet, closed: &[PointSet]) -> usize {
            closed
                .iter()
                .filter(|c| !c.is_empty() && c.is_subset(from) && **c != from)
                .map(|c| 1 + longest(*c, closed))
                .max()
                .unwrap_or(0)
        }
        for n in 0..=4 {
            for s in all_preorders(n) {
                let closed = s.closed_sets();
                let expected = if n == 0 { 0 } else { 1 + longest(s.full(), &closed) };
                assert_eq!(s.closed_chain_length(), expected, "{s}");
            }
        }
    }

    #[test]
    fn canonical_digest_classes_match_known_sequence() {
        for (n, expected) in [(0, 1), (1, 1), (2, 3), (3, 9), (4, 33)] {
            let mut digests: Vec<String> = all_preorders(n)
                .iter()
                .map(|s| s.canonical_form().unwrap().digest())
                .collect();
            digests.sort();
            digests.dedup();
            assert_eq!(digests.len(), expected, "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn closure_laws_random(s in random_space(), a in any::<u64>(), b in any::<u64>()) {
            let a = PointSet::from_bits(a) & s.full();
            let b = PointSet::from_bits(b) & s.full();
            check_laws(&s, a, b);
        }

        #[test]
        fn canonical_digest_is_label_invariant(s in random_space(), seed in any::<u64>()) {
            let n = s.n();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut state = seed;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (state >> 33) as usize % (i + 1));
            }
            let t = s.relabel(&perm);
            prop_assert_eq!(s.canonical_form().unwrap().digest(), t.canonical_form().unwrap().digest());
        }

        #[test]
        fn open_sets_regenerate_relation(s in random_space()) {
            let rebuilt = FiniteSpace::from_open_family(s.n(), &s.open_sets()).unwrap();
            prop_assert_eq!(rebuilt, s);
        }
    }
}
