//! A finite window onto the tree space: all points of height at most `k`
//! with coordinates below a depth `T`. Topological notions are evaluated
//! from their definitions, quantifying over `m < T` for the basic
//! neighbourhoods `B_m(s)`. With `T > N` the window contains points of every
//! shape, so it serves as an independent check of the symbolic operators.

use super::shape::Levels;
use super::{ShapeSet, ThresholdMap, TreeError};
use crate::finspace::PointSet;

/// Largest number of points a model may hold.
pub const MODEL_LIMIT: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedModel {
    levels: Levels,
}

impl TruncatedModel {
    pub fn new(k: usize, depth: usize) -> Result<Self, TreeError> {
        let levels = Levels { k, base: depth };
        match levels.checked_len() {
            Some(n) if n <= MODEL_LIMIT && depth > 0 => Ok(TruncatedModel { levels }),
            _ => Err(TreeError::ModelTooLarge { k, depth }),
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.base
    }

    pub fn k(&self) -> usize {
        self.levels.k
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, idx: usize) -> Vec<usize> {
        self.levels.digits(idx)
    }

    pub fn index(&self, point: &[usize]) -> usize {
        self.levels.index(point)
    }

    /// Whether a point uses the top digit `T - 1`. Such a point lies in
    /// every window neighbourhood `B_m(parent)` and so stands in for the
    /// limit behaviour of its parent; its own singleton is not closed in the
    /// window.
    pub fn is_limit_proxy(&self, point: &[usize]) -> bool {
        point.iter().any(|&c| c + 1 == self.levels.base)
    }

    /// Membership of every window point in a shape set.
    pub fn restrict(&self, a: &ShapeSet) -> Vec<bool> {
        (0..self.len()).map(|i| a.contains_point(&self.point(i))).collect()
    }

    /// `sub[p]`: the subtree of `p` meets `a`, via the children of `p`.
    fn subtree_or<T: Copy>(&self, init: Vec<T>, join: impl Fn(T, T) -> T) -> Vec<T> {
        let lv = self.levels;
        let mut acc = init;
        for l in (0..lv.k).rev() {
            for idx in lv.level(l) {
                for c in 0..lv.base {
                    acc[idx] = join(acc[idx], acc[lv.child(idx, l, c)]);
                }
            }
        }
        acc
    }

    /// For every `m < T` some child `j ∈ [m, T)` satisfies `pred`.
    fn cofinal(&self, idx: usize, l: usize, pred: impl Fn(usize) -> bool) -> bool {
        let lv = self.levels;
        // scan m downwards, tracking whether some j ≥ m qualifies
        let mut exists = false;
        let mut all = true;
        for m in (0..lv.base).rev() {
            exists = exists || pred(lv.child(idx, l, m));
            all = all && exists;
        }
        all
    }

    /// `s ∈ cl A` iff `s ∈ A` or every `B_m(s)` meets `A ∖ {s}`.
    pub fn closure(&self, a: &[bool]) -> Vec<bool> {
        let lv = self.levels;
        let meets = self.subtree_or(a.to_vec(), |x, y| x || y);
        (0..self.len())
            .map(|idx| {
                let l = lv.level_of(idx);
                a[idx] || (l < lv.k && self.cofinal(idx, l, |c| meets[c]))
            })
            .collect()
    }

    pub fn is_closed(&self, a: &[bool]) -> bool {
        self.closure(a) == a
    }

    /// `s ∈ D(f|A)` iff `s ∈ A` and every `B_m(s)` holds a point of `A`
    /// whose value leaves `U(f(s))`.
    pub fn discontinuity(&self, f: &ThresholdMap, a: &[bool]) -> Vec<bool> {
        let lv = self.levels;
        let value: Vec<usize> = (0..self.len()).map(|i| f.eval(&self.point(i))).collect();
        let init = (0..self.len())
            .map(|i| if a[i] { PointSet::singleton(value[i]) } else { PointSet::EMPTY })
            .collect();
        let vals = self.subtree_or(init, |x, y| x | y);
        (0..self.len())
            .map(|idx| {
                let l = lv.level_of(idx);
                let target = f.codomain().min_open(value[idx]);
                a[idx] && l < lv.k && self.cofinal(idx, l, |c| !vals[c].is_subset(target))
            })
            .collect()
    }

    /// Points of `B_m(s)`: `s` and the subtrees of its children `j ≥ m`.
    pub fn neighbourhood(&self, s: &[usize], m: usize) -> Vec<bool> {
        (0..self.len())
            .map(|i| {
                let p = self.point(i);
                p.len() >= s.len() && p[..s.len()] == *s && (p.len() == s.len() || p[s.len()] >= m)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FiniteSpace;
    use crate::treespace::ShapeSpace;

    #[test]
    fn closure_of_leaves() {
        let m = TruncatedModel::new(1, 6).unwrap();
        let leaves: Vec<bool> = (0..m.len()).map(|i| i > 0).collect();
        assert!(m.closure(&leaves).iter().all(|&b| b));
        let finitely_many: Vec<bool> = (0..m.len()).map(|i| i == 1 || i == 3).collect();
        assert!(m.is_closed(&finitely_many));
    }

    #[test]
    fn model_matches_symbolic_operators() {
        let space = ShapeSpace::new(2, 2).unwrap();
        let f = ThresholdMap::from_fn(space, FiniteSpace::sierpinski(), |s| {
            usize::from(s.len() == 1 || s.0.first() == Some(&crate::treespace::Coord::Val(0)))
        })
        .unwrap();
        for depth in [space.threshold() + 1, space.threshold() + 5] {
            let m = TruncatedModel::new(2, depth).unwrap();
            for bits in 0u32..64 {
                let a = ShapeSet::from_fn(space, |i| bits >> (i % 6) & 1 == 1 && i % 3 != 1);
                let am = m.restrict(&a);
                assert_eq!(m.closure(&am), m.restrict(&a.closure()));
                assert_eq!(m.discontinuity(&f, &am), m.restrict(&f.discontinuity_set(&a)));
            }
        }
    }

    #[test]
    fn too_large() {
        assert!(matches!(TruncatedModel::new(3, 1000), Err(TreeError::ModelTooLarge { .. })));
    }
}
