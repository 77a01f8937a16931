use std::fmt;

use super::{Shape, ShapeSpace, TreeError};

/// A subset of the tree space whose membership depends only on the shape of
/// a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShapeSet {
    space: ShapeSpace,
    members: Vec<bool>,
}

impl ShapeSet {
    pub fn empty(space: ShapeSpace) -> Self {
        ShapeSet { space, members: vec![false; space.len()] }
    }

    pub fn full(space: ShapeSpace) -> Self {
        ShapeSet { space, members: vec![true; space.len()] }
    }

    pub fn from_fn(space: ShapeSpace, mut f: impl FnMut(usize) -> bool) -> Self {
        ShapeSet { space, members: (0..space.len()).map(&mut f).collect() }
    }

    pub fn from_shapes<'a, I>(space: ShapeSpace, shapes: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = &'a Shape>,
    {
        let mut set = ShapeSet::empty(space);
        for s in shapes {
            set.members[space.index_of(s)?] = true;
        }
        Ok(set)
    }

    /// All shapes of the given lengths.
    pub fn of_lengths(space: ShapeSpace, keep: impl Fn(usize) -> bool) -> Self {
        ShapeSet::from_fn(space, |i| keep(space.level_of(i)))
    }

    pub fn space(&self) -> ShapeSpace {
        self.space
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members[idx]
    }

    pub fn contains_point(&self, point: &[usize]) -> bool {
        self.members[self.space.classify(point)]
    }

    pub fn is_empty(&self) -> bool {
        !self.members.contains(&true)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn shapes(&self) -> Vec<Shape> {
        self.indices().map(|i| self.space.shape(i)).collect()
    }

    /// The same set described at a larger threshold.
    ///
    /// # Panics
    /// If `threshold` is below the current one.
    pub fn refine(&self, threshold: usize) -> Result<ShapeSet, TreeError> {
        assert!(threshold >= self.space.threshold(), "refinement cannot lower the threshold");
        let fine = self.space.with_threshold(threshold)?;
        Ok(ShapeSet::from_fn(fine, |i| self.members[self.space.coarsen_from(fine, i)]))
    }

    fn zip(&self, other: &ShapeSet, op: impl Fn(bool, bool) -> bool) -> ShapeSet {
        let (a, b) = align(self, other);
        ShapeSet {
            space: a.space,
            members: a.members.iter().zip(&b.members).map(|(&x, &y)| op(x, y)).collect(),
        }
    }

    pub fn union(&self, other: &ShapeSet) -> ShapeSet {
        self.zip(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &ShapeSet) -> ShapeSet {
        self.zip(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &ShapeSet) -> ShapeSet {
        self.zip(other, |x, y| x && !y)
    }

    pub fn complement(&self) -> ShapeSet {
        ShapeSet {
            space: self.space,
            members: self.members.iter().map(|&b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &ShapeSet) -> bool {
        let (a, b) = align(self, other);
        a.members.iter().zip(&b.members).all(|(&x, &y)| !x || y)
    }

    /// Same points, possibly at different thresholds.
    pub fn same_points(&self, other: &ShapeSet) -> bool {
        let (a, b) = align(self, other);
        a.members == b.members
    }

    /// `meets[τ]`: the set contains a shape extending `τ`.
    pub(crate) fn subtree_meets(&self) -> Vec<bool> {
        let lv = self.space.levels();
        let mut meets = self.members.clone();
        for l in (0..lv.k).rev() {
            for idx in lv.level(l) {
                if !meets[idx] {
                    meets[idx] = (0..lv.base).any(|c| meets[lv.child(idx, l, c)]);
                }
            }
        }
        meets
    }

    /// A point lies in the closure iff it is a member or the subtrees of its
    /// `⋆` children meet the set.
    pub fn closure(&self) -> ShapeSet {
        let lv = self.space.levels();
        let meets = self.subtree_meets();
        let star = self.space.star();
        let mut out = self.members.clone();
        for l in 0..lv.k {
            for idx in lv.level(l) {
                out[idx] = out[idx] || meets[lv.child(idx, l, star)];
            }
        }
        ShapeSet { space: self.space, members: out }
    }

    pub fn interior(&self) -> ShapeSet {
        self.complement().closure().complement()
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn is_open(&self) -> bool {
        self.interior() == *self
    }

    /// The basic clopen neighbourhood `B_N(s)` of the representative point of
    /// shape `idx`, at threshold `N + 1`: the point itself and the subtrees of
    /// its children `j ≥ N`.
    pub fn cone(space: ShapeSpace, idx: usize) -> Result<ShapeSet, TreeError> {
        let n = space.threshold();
        let fine = space.with_threshold(n + 1)?;
        let rep = space.shape(idx).representative(n);
        Ok(ShapeSet::from_fn(fine, |i| {
            let digits = fine.levels().digits(i);
            digits.len() >= rep.len()
                && digits[..rep.len()] == rep[..]
                && (digits.len() == rep.len() || digits[rep.len()] >= n)
        }))
    }
}

/// Bring two sets to a common threshold.
///
/// # Panics
/// If the heights differ.
pub(crate) fn align(a: &ShapeSet, b: &ShapeSet) -> (ShapeSet, ShapeSet) {
    assert_eq!(a.space.k(), b.space.k(), "shape sets of different heights");
    let t = a.space.threshold().max(b.space.threshold());
    let lift = |s: &ShapeSet| {
        if s.space.threshold() == t {
            s.clone()
        } else {
            s.refine(t).expect("common threshold fits the guard")
        }
    };
    (lift(a), lift(b))
}

/// `{shape, shape, ..}`
impl fmt::Display for ShapeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.shapes().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(k: usize, n: usize) -> ShapeSpace {
        ShapeSpace::new(k, n).unwrap()
    }

    #[test]
    fn closure_examples() {
        let s = sp(1, 2);
        let leaves = ShapeSet::of_lengths(s, |l| l == 1);
        assert!(leaves.closure().is_full());
        let root = ShapeSet::of_lengths(s, |l| l == 0);
        assert_eq!(root.closure(), root);

        let t = sp(2, 2);
        let upper = ShapeSet::of_lengths(t, |l| l <= 1);
        assert_eq!(upper.closure(), upper);
        assert!(ShapeSet::of_lengths(t, |l| l == 2).is_open());
    }

    #[test]
    fn finitely_many_leaves_are_closed() {
        let s = sp(1, 3);
        let few = ShapeSet::from_shapes(s, &["(0)".parse().unwrap(), "(2)".parse().unwrap()]).unwrap();
        assert!(few.is_closed());
        let tail = ShapeSet::from_shapes(s, &["(*)".parse().unwrap()]).unwrap();
        assert!(!tail.is_closed());
        assert!(tail.closure().contains(0));
    }

    #[test]
    fn refinement_preserves_operators() {
        let s = sp(2, 2);
        let a = ShapeSet::from_shapes(s, &["(*,1)".parse().unwrap(), "(0)".parse().unwrap()]).unwrap();
        let r = a.refine(4).unwrap();
        assert!(a.same_points(&r));
        assert_eq!(a.closure().refine(4).unwrap(), r.closure());
        assert_eq!(a.interior().refine(4).unwrap(), r.interior());
    }

    #[test]
    fn cone_is_clopen() {
        let s = sp(2, 2);
        for idx in 0..s.len() {
            let c = ShapeSet::cone(s, idx).unwrap();
            assert!(c.is_closed() && c.is_open(), "{}", s.shape(idx));
        }
    }
}
