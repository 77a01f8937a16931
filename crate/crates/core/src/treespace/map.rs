use std::sync::Arc;

use super::set::align;
use super::{Shape, ShapeSet, ShapeSpace, TreeError};
use crate::finspace::{FiniteSpace, PointSet};
use crate::mapcalc::{iterate_series, SeriesKind, SeriesReport};

/// A map from the tree space into a finite space whose value depends only on
/// the shape of a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThresholdMap {
    space: ShapeSpace,
    codomain: Arc<FiniteSpace>,
    values: Vec<usize>,
}

impl ThresholdMap {
    pub fn new(space: ShapeSpace, codomain: impl Into<Arc<FiniteSpace>>, values: Vec<usize>) -> Result<Self, TreeError> {
        let codomain = codomain.into();
        if values.len() != space.len() {
            return Err(TreeError::TableSize { expected: space.len(), got: values.len() });
        }
        if let Some((i, &v)) = values.iter().enumerate().find(|(_, &v)| v >= codomain.n()) {
            return Err(TreeError::ValueOutOfRange {
                shape: space.shape(i),
                value: v,
                codomain_size: codomain.n(),
            });
        }
        Ok(ThresholdMap { space, codomain, values })
    }

    pub fn from_fn(
        space: ShapeSpace,
        codomain: impl Into<Arc<FiniteSpace>>,
        f: impl Fn(&Shape) -> usize,
    ) -> Result<Self, TreeError> {
        let values = (0..space.len()).map(|i| f(&space.shape(i))).collect();
        Self::new(space, codomain, values)
    }

    pub fn constant(space: ShapeSpace, codomain: impl Into<Arc<FiniteSpace>>, value: usize) -> Result<Self, TreeError> {
        Self::new(space, codomain, vec![value; space.len()])
    }

    pub fn space(&self) -> ShapeSpace {
        self.space
    }

    pub fn codomain(&self) -> &FiniteSpace {
        &self.codomain
    }

    pub fn codomain_arc(&self) -> &Arc<FiniteSpace> {
        &self.codomain
    }

    pub fn value(&self, idx: usize) -> usize {
        self.values[idx]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn eval(&self, point: &[usize]) -> usize {
        self.values[self.space.classify(point)]
    }

    pub fn refine(&self, threshold: usize) -> Result<ThresholdMap, TreeError> {
        assert!(threshold >= self.space.threshold(), "refinement cannot lower the threshold");
        let fine = self.space.with_threshold(threshold)?;
        let values = (0..fine.len())
            .map(|i| self.values[self.space.coarsen_from(fine, i)])
            .collect();
        Ok(ThresholdMap { space: fine, codomain: self.codomain.clone(), values })
    }

    /// Map and set brought to a common threshold.
    fn with_set(&self, a: &ShapeSet) -> (ThresholdMap, ShapeSet) {
        let t = self.space.threshold().max(a.space().threshold());
        let f = if t == self.space.threshold() { self.clone() } else { self.refine(t).expect("guarded") };
        let (a, _) = align(a, &ShapeSet::empty(f.space));
        (f, a)
    }

    /// `vals[τ]`: values taken on `A` inside the subtree of `τ`.
    fn subtree_values(&self, a: &ShapeSet) -> Vec<PointSet> {
        let lv = self.space.levels();
        let mut vals: Vec<PointSet> = (0..self.space.len())
            .map(|i| if a.contains(i) { PointSet::singleton(self.values[i]) } else { PointSet::EMPTY })
            .collect();
        for l in (0..lv.k).rev() {
            for idx in lv.level(l) {
                let below = (0..lv.base).fold(PointSet::EMPTY, |acc, c| acc | vals[lv.child(idx, l, c)]);
                vals[idx] = vals[idx] | below;
            }
        }
        vals
    }

    /// `D(f|A)`: members of `A` whose `⋆` subtrees contain a point of `A`
    /// with value outside `U(f(s))`. Leaves are isolated and never belong.
    pub fn discontinuity_set(&self, a: &ShapeSet) -> ShapeSet {
        let (f, a) = self.with_set(a);
        let lv = f.space.levels();
        let vals = f.subtree_values(&a);
        let star = f.space.star();
        ShapeSet::from_fn(f.space, |idx| {
            let l = f.space.level_of(idx);
            a.contains(idx)
                && l < lv.k
                && !vals[lv.child(idx, l, star)].is_subset(f.codomain.min_open(f.values[idx]))
        })
    }

    pub fn is_continuous(&self) -> bool {
        self.discontinuity_set(&ShapeSet::full(self.space)).is_empty()
    }

    pub fn is_continuous_on(&self, a: &ShapeSet) -> bool {
        self.discontinuity_set(a).is_empty()
    }

    /// A discontinuity point `σ` of `f|A` together with a shape `τ ∈ A`
    /// extending `σ⌢⋆` whose value leaves `U(f(σ))`.
    pub fn discontinuity_witness(&self, a: &ShapeSet) -> Option<(Shape, Shape)> {
        let (f, a) = self.with_set(a);
        let d = f.discontinuity_set(&a);
        let sigma = d.indices().next()?;
        let target = f.codomain.min_open(f.values[sigma]);
        let prefix = f.space.shape(sigma);
        let tau = a.indices().find(|&t| {
            let sh = f.space.shape(t);
            sh.len() > prefix.len()
                && sh.0[..prefix.len()] == prefix.0[..]
                && sh.0[prefix.len()] == super::Coord::Star
                && !target.contains(f.values[t])
        })?;
        Some((prefix, f.space.shape(tau)))
    }
}

pub fn tree_discontinuity_set(f: &ThresholdMap) -> ShapeSet {
    f.discontinuity_set(&ShapeSet::full(f.space()))
}

pub fn tree_closure(a: &ShapeSet) -> ShapeSet {
    a.closure()
}

pub fn tree_interior(a: &ShapeSet) -> ShapeSet {
    a.interior()
}

/// Both series of a threshold map. The domain is scattered, so both always
/// reach `∅`.
pub fn tree_series(f: &ThresholdMap) -> (SeriesReport<ShapeSet>, SeriesReport<ShapeSet>) {
    let full = ShapeSet::full(f.space());
    let plain = iterate_series(SeriesKind::Plain, full.clone(), ShapeSet::is_empty, |s| f.discontinuity_set(s));
    let closed = iterate_series(SeriesKind::Closed, full, ShapeSet::is_empty, |s| f.discontinuity_set(s).closure());
    (plain, closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(k: usize, n: usize) -> ShapeSpace {
        ShapeSpace::new(k, n).unwrap()
    }

    pub(crate) fn root_indicator(k: usize, n: usize) -> ThresholdMap {
        ThresholdMap::from_fn(sp(k, n), FiniteSpace::discrete(2), |s| usize::from(s.is_empty())).unwrap()
    }

    #[test]
    fn discontinuity_examples() {
        let f = root_indicator(1, 2);
        assert_eq!(tree_discontinuity_set(&f).shapes(), vec![Shape::root()]);
        let c = ThresholdMap::constant(sp(2, 2), FiniteSpace::discrete(2), 1).unwrap();
        assert!(tree_discontinuity_set(&c).is_empty());
        let g = ThresholdMap::from_fn(sp(2, 2), FiniteSpace::discrete(2), |s| usize::from(s.len() <= 1)).unwrap();
        assert_eq!(tree_discontinuity_set(&g), ShapeSet::of_lengths(sp(2, 2), |l| l <= 1));
    }

    #[test]
    fn series_examples() {
        let (plain, closed) = tree_series(&root_indicator(1, 2));
        assert_eq!((plain.index(), closed.index()), (Some(2), Some(2)));

        let s = sp(2, 2);
        let parity = ThresholdMap::from_fn(s, FiniteSpace::discrete(3), |sh| sh.len() % 2).unwrap();
        let (plain, closed) = tree_series(&parity);
        assert_eq!(plain.index(), Some(3));
        assert_eq!(
            plain.sets,
            vec![
                ShapeSet::full(s),
                ShapeSet::of_lengths(s, |l| l <= 1),
                ShapeSet::of_lengths(s, |l| l == 0),
                ShapeSet::empty(s),
            ]
        );
        assert_eq!(closed.index(), Some(3));

        let c = ThresholdMap::constant(s, FiniteSpace::discrete(3), 0).unwrap();
        let (plain, closed) = tree_series(&c);
        assert_eq!((plain.index(), closed.index()), (Some(1), Some(1)));
    }

    #[test]
    fn continuity_into_non_discrete_codomain() {
        // point 1 of Sierpiński space is open, point 0 is in its closure
        let y = FiniteSpace::sierpinski();
        let f = ThresholdMap::from_fn(sp(1, 2), y, |s| usize::from(s.is_empty())).unwrap();
        assert!(!f.is_continuous());
        let g = ThresholdMap::from_fn(sp(1, 2), FiniteSpace::sierpinski(), |s| usize::from(!s.is_empty())).unwrap();
        assert!(g.is_continuous());
    }

    #[test]
    fn witness_points_into_star_subtree() {
        let f = root_indicator(2, 1);
        let (sigma, tau) = f.discontinuity_witness(&ShapeSet::full(f.space())).unwrap();
        assert_eq!(sigma, Shape::root());
        assert_eq!(tau.0[0], super::super::Coord::Star);
    }
}
