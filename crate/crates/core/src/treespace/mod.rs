//! The tree space `ω^{≤k}` of finite sequences of naturals of length at most
//! `k`. The open sets are generated by `B_m(s) = {s} ∪ {t ⊋ s : t_{|s|} ≥ m}`,
//! so `s` is a limit of the points `s⌢j` as `j → ∞`; leaves (length `k`) are
//! isolated.
//!
//! Maps considered here depend only on the shape of a point at a threshold
//! `N`: each coordinate is kept when below `N` and collapsed to `⋆`
//! otherwise. Everything is computed on the finitely many shapes, and
//! [`TruncatedModel`] re-checks results on a finite window of actual points.

mod decompose;
mod map;
mod measure;
mod model;
mod set;
mod shape;
mod stable;

use thiserror::Error;

pub use decompose::{tree_dec_closed, tree_decomposition, PigeonholeCertificate, TreeCover, TreeDecClosed, TreePiece};
pub use map::{tree_closure, tree_discontinuity_set, tree_interior, tree_series, ThresholdMap};
pub use measure::{tree_measurability_certificate, FsigmaPart, MeasurabilityCertificate};
pub use model::{TruncatedModel, MODEL_LIMIT};
pub use set::ShapeSet;
pub use shape::{Coord, Shape, ShapeSpace, SHAPE_LIMIT};
pub use stable::{stable_sequence_cover, PhaseRule, StableCover, StableSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("height {k} exceeds the limit {max}")]
    HeightExceeded { k: usize, max: usize },
    #[error("too many shapes for height {k} at threshold {threshold}")]
    TooManyShapes { k: usize, threshold: usize },
    #[error("truncated model of height {k} and depth {depth} is too large")]
    ModelTooLarge { k: usize, depth: usize },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("value {value} at shape {shape} is outside a codomain of {codomain_size} points")]
    ValueOutOfRange { shape: Shape, value: usize, codomain_size: usize },
    #[error("maps have different codomains")]
    CodomainMismatch,
    #[error("maps live on different shape spaces")]
    ShapeSpaceMismatch,
    #[error("a sequence rule needs at least one phase")]
    EmptyRule,
    #[error("sequence does not converge stably at shape {shape}")]
    NotStablyConvergent { shape: Shape },
    #[error("member {index} is discontinuous at shape {shape}")]
    MemberDiscontinuous { index: usize, shape: Shape },
}

#[cfg(test)]
mod laws {
    use super::*;
    use crate::finspace::FiniteSpace;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn codomain(which: u8) -> Arc<FiniteSpace> {
        Arc::new(match which % 4 {
            0 => FiniteSpace::discrete(3),
            1 => FiniteSpace::sierpinski(),
            2 => FiniteSpace::chain(3),
            _ => FiniteSpace::indiscrete(2),
        })
    }

    fn space_and_bits() -> impl Strategy<Value = (ShapeSpace, Vec<u8>, u8)> {
        (1usize..=2, 1usize..=3)
            .prop_flat_map(|(k, n)| {
                let space = ShapeSpace::new(k, n).unwrap();
                (Just(space), prop::collection::vec(any::<u8>(), space.len()), any::<u8>())
            })
    }

    fn set_of(space: ShapeSpace, bits: &[u8]) -> ShapeSet {
        ShapeSet::from_fn(space, |i| bits[i] & 1 == 1)
    }

    fn map_of(space: ShapeSpace, bits: &[u8], which: u8) -> ThresholdMap {
        let y = codomain(which);
        let n = y.n();
        ThresholdMap::new(space, y, bits.iter().map(|&b| (b as usize >> 1) % n).collect()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn closure_interior_duality((space, bits, _) in space_and_bits()) {
            let a = set_of(space, &bits);
            let cl = a.closure();
            prop_assert_eq!(cl.closure(), cl.clone());
            prop_assert!(a.is_subset(&cl));
            prop_assert_eq!(a.interior(), a.complement().closure().complement());
            prop_assert_eq!(a.interior().interior(), a.interior());
            prop_assert!(a.interior().is_subset(&a));
        }

        #[test]
        fn symbolic_operators_match_model((space, bits, which) in space_and_bits()) {
            let a = set_of(space, &bits);
            let f = map_of(space, &bits, which);
            for depth in [space.threshold() + 1, space.threshold() + 5] {
                let m = TruncatedModel::new(space.k(), depth).unwrap();
                let am = m.restrict(&a);
                prop_assert_eq!(m.closure(&am), m.restrict(&a.closure()));
                let comp: Vec<bool> = am.iter().map(|&b| !b).collect();
                let interior: Vec<bool> = m.closure(&comp).iter().map(|&b| !b).collect();
                prop_assert_eq!(interior, m.restrict(&a.interior()));
                prop_assert_eq!(m.discontinuity(&f, &am), m.restrict(&f.discontinuity_set(&a)));
            }
        }

        #[test]
        fn series_survive_refinement((space, bits, which) in space_and_bits(), extra in 1usize..3) {
            let f = map_of(space, &bits, which);
            let g = f.refine(space.threshold() + extra).unwrap();
            let (p, c) = tree_series(&f);
            let (q, d) = tree_series(&g);
            prop_assert_eq!(p.index(), q.index());
            prop_assert_eq!(c.index(), d.index());
            for (x, y) in p.sets.iter().zip(&q.sets) {
                prop_assert!(x.same_points(y));
            }
            let (sc, wd) = (p.index().unwrap(), c.index().unwrap());
            prop_assert!(sc <= wd && wd <= space.k() + 1);
        }

        #[test]
        fn decomposition_verifies((space, bits, which) in space_and_bits()) {
            let f = map_of(space, &bits, which);
            let c = tree_decomposition(&f).unwrap();
            prop_assert!(c.verify_symbolic(&f).unwrap());
            prop_assert!(c.verify_truncated(&f, space.threshold() + 2).unwrap());
            let d = tree_dec_closed(&f).unwrap();
            prop_assert_eq!(d.cardinality == crate::mapcalc::Cardinality::Finite(1), f.is_continuous());
            prop_assert!(d.verify_truncated(&f, space.threshold() + 2).unwrap());
        }

        #[test]
        fn measurability_certificates_verify((space, bits, _) in space_and_bits()) {
            let c = tree_measurability_certificate(&set_of(space, &bits));
            prop_assert!(c.verify_symbolic().unwrap());
            prop_assert!(c.verify_truncated(space.threshold() + 2).unwrap());
        }
    }
}
