use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{PointSet, SpaceError, WORD_BITS};
use crate::guards::Guards;

/// A finite topological space, stored as its specialization preorder.
///
/// `le(x, y)` holds when `x` lies in the closure of `{y}`. Open sets are the
/// up-sets of this relation and closed sets the down-sets; `min_open(x)` is
/// the smallest open set containing `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    n: usize,
    up: Vec<PointSet>,
    down: Vec<PointSet>,
}

impl FiniteSpace {
    fn check_size(n: usize) -> Result<(), SpaceError> {
        let max = Guards::current().max_points.min(WORD_BITS);
        if n > max {
            return Err(SpaceError::TooManyPoints { n, max });
        }
        Ok(())
    }

    /// Build from the minimal neighbourhoods `up[x] = U(x)`. The caller
    /// guarantees reflexivity and transitivity.
    pub(crate) fn from_up_unchecked(up: Vec<PointSet>) -> Self {
        let n = up.len();
        let mut down = vec![PointSet::EMPTY; n];
        for (x, ux) in up.iter().enumerate() {
            for y in ux.iter() {
                down[y].insert(x);
            }
        }
        FiniteSpace { n, up, down }
    }

    /// The empty space.
    pub fn empty() -> Self {
        Self::from_up_unchecked(Vec::new())
    }

    pub fn discrete(n: usize) -> Self {
        assert!(n <= WORD_BITS);
        Self::from_up_unchecked((0..n).map(PointSet::singleton).collect())
    }

    pub fn indiscrete(n: usize) -> Self {
        assert!(n <= WORD_BITS);
        Self::from_up_unchecked(vec![PointSet::full(n); n])
    }

    /// Two points, `{1}` open: `0` lies in the closure of `1`.
    pub fn sierpinski() -> Self {
        Self::from_up_unchecked(vec![PointSet::from_points([0, 1]), PointSet::singleton(1)])
    }

    /// The chain `0 ≤ 1 ≤ .. ≤ n-1`; open sets are the final segments.
    pub fn chain(n: usize) -> Self {
        assert!(n <= WORD_BITS);
        Self::from_up_unchecked((0..n).map(|x| PointSet::full(n) - PointSet::full(x)).collect())
    }

    /// Build the space whose open sets are exactly `opens`.
    ///
    /// The family must contain `∅` and the whole set and be closed under
    /// pairwise unions and intersections.
    pub fn from_open_family(n: usize, opens: &[PointSet]) -> Result<Self, SpaceError> {
        Self::check_size(n)?;
        let full = PointSet::full(n);
        for o in opens {
            if !o.is_subset(full) {
                let point = (*o - full).first().unwrap_or(n);
                return Err(SpaceError::IndexOutOfRange { point, n });
            }
        }
        let family: HashSet<PointSet> = opens.iter().copied().collect();
        if !family.contains(&PointSet::EMPTY) || !family.contains(&full) {
            return Err(SpaceError::MissingExtremes);
        }
        let sorted: BTreeSet<PointSet> = family.iter().copied().collect();
        for a in &sorted {
            for b in sorted.range(*a..) {
                if !family.contains(&(*a | *b)) {
                    return Err(SpaceError::NotATopology { a: *a, b: *b, missing: *a | *b });
                }
                if !family.contains(&(*a & *b)) {
                    return Err(SpaceError::NotATopology { a: *a, b: *b, missing: *a & *b });
                }
            }
        }
        let up = (0..n)
            .map(|x| {
                sorted
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(full, |acc, o| acc & *o)
            })
            .collect();
        Ok(Self::from_up_unchecked(up))
    }

    /// Build from the strict part of the preorder; reflexive pairs are implied.
    /// Transitivity is validated, not computed.
    pub fn from_preorder<I>(n: usize, pairs: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let up = Self::relation_rows(n, pairs)?;
        for x in 0..n {
            for y in up[x].iter() {
                for z in up[y].iter() {
                    if !up[x].contains(z) {
                        return Err(SpaceError::NotTransitive { x, y, z });
                    }
                }
            }
        }
        Ok(Self::from_up_unchecked(up))
    }

    /// Build from an arbitrary relation by taking its reflexive-transitive closure.
    pub fn from_relation_closure<I>(n: usize, pairs: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut up = Self::relation_rows(n, pairs)?;
        // Warshall over bit rows.
        for k in 0..n {
            for x in 0..n {
                if up[x].contains(k) {
                    up[x] = up[x] | up[k];
                }
            }
        }
        Ok(Self::from_up_unchecked(up))
    }

    fn relation_rows<I>(n: usize, pairs: I) -> Result<Vec<PointSet>, SpaceError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::check_size(n)?;
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for (x, y) in pairs {
            for p in [x, y] {
                if p >= n {
                    return Err(SpaceError::IndexOutOfRange { point: p, n });
                }
            }
            up[x].insert(y);
        }
        Ok(up)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.n)
    }

    /// `x` lies in the closure of `{y}`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// The minimal open neighbourhood `U(x)`.
    pub fn min_open(&self, x: usize) -> PointSet {
        self.up[x]
    }

    /// `cl{x}`.
    pub fn point_closure(&self, x: usize) -> PointSet {
        self.down[x]
    }

    /// Non-reflexive pairs of the preorder, lexicographically ordered.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| self.up[x].without(x).iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn contains_set(&self, a: PointSet) -> bool {
        a.is_subset(self.full())
    }

    pub fn complement(&self, a: PointSet) -> PointSet {
        self.full() - a
    }

    /// Down-closure.
    pub fn closure(&self, a: PointSet) -> PointSet {
        a.iter().fold(PointSet::EMPTY, |acc, x| acc | self.down[x])
    }

    /// Up-closure: the smallest open set containing `a`.
    pub fn up_closure(&self, a: PointSet) -> PointSet {
        a.iter().fold(PointSet::EMPTY, |acc, x| acc | self.up[x])
    }

    /// The largest open set inside `a`.
    pub fn interior(&self, a: PointSet) -> PointSet {
        a.iter().filter(|&x| self.up[x].is_subset(a)).collect()
    }

    pub fn is_open(&self, a: PointSet) -> bool {
        self.up_closure(a) == a
    }

    pub fn is_closed(&self, a: PointSet) -> bool {
        self.closure(a) == a
    }

    /// Closure of `b` relative to the subspace `z` (`b ⊆ z`).
    pub fn closure_in(&self, z: PointSet, b: PointSet) -> PointSet {
        self.closure(b) & z
    }

    /// Interior of `b` relative to the subspace `z` (`b ⊆ z`).
    pub fn interior_in(&self, z: PointSet, b: PointSet) -> PointSet {
        b.iter().filter(|&x| (self.up[x] & z).is_subset(b)).collect()
    }

    /// Points of `a` isolated in the subspace `a`: `U(x) ∩ A = {x}`.
    pub fn isolated_points(&self, a: PointSet) -> PointSet {
        a.iter()
            .filter(|&x| self.up[x] & a == PointSet::singleton(x))
            .collect()
    }

    /// All open sets, sorted. Generated as unions of minimal neighbourhoods,
    /// so the cost is proportional to the size of the topology.
    pub fn open_sets(&self) -> Vec<PointSet> {
        let mut opens: BTreeSet<PointSet> = BTreeSet::from([PointSet::EMPTY]);
        for x in 0..self.n {
            let ux = self.up[x];
            let grown: Vec<PointSet> = opens.iter().map(|o| *o | ux).collect();
            opens.extend(grown);
        }
        opens.into_iter().collect()
    }

    pub fn closed_sets(&self) -> Vec<PointSet> {
        let mut closed: Vec<PointSet> = self.open_sets().into_iter().map(|o| self.complement(o)).collect();
        closed.sort();
        closed
    }

    /// Subspace on the members of `a`, re-indexed in increasing order.
    pub fn subspace(&self, a: PointSet) -> Result<FiniteSpace, SpaceError> {
        if !self.contains_set(a) {
            let point = (a - self.full()).first().unwrap_or(self.n);
            return Err(SpaceError::IndexOutOfRange { point, n: self.n });
        }
        let index = subspace_index(a, self.n);
        let up = a.iter().map(|x| (self.up[x] & a).map_points(&index)).collect();
        Ok(Self::from_up_unchecked(up))
    }

    /// Disjoint union; the points of `other` follow those of `self`.
    pub fn sum(&self, other: &FiniteSpace) -> Result<FiniteSpace, SpaceError> {
        let n = self.n + other.n;
        Self::check_size(n)?;
        let shift = |s: PointSet| PointSet::from_bits(s.bits() << self.n);
        let up = self
            .up
            .iter()
            .copied()
            .chain(other.up.iter().map(|&s| shift(s)))
            .collect();
        Ok(Self::from_up_unchecked(up))
    }

    /// Product; point `(i, j)` has index `i * other.n() + j`.
    pub fn product(&self, other: &FiniteSpace) -> Result<FiniteSpace, SpaceError> {
        let n = self.n * other.n;
        Self::check_size(n)?;
        let m = other.n;
        let mut up = Vec::with_capacity(n);
        for i in 0..self.n {
            for j in 0..m {
                let cell = self.up[i]
                    .iter()
                    .flat_map(|a| other.up[j].iter().map(move |b| a * m + b))
                    .collect();
                up.push(cell);
            }
        }
        Ok(Self::from_up_unchecked(up))
    }

    /// Relabel points: `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> FiniteSpace {
        assert_eq!(perm.len(), self.n);
        let mut up = vec![PointSet::EMPTY; self.n];
        for x in 0..self.n {
            up[perm[x]] = self.up[x].map_points(perm);
        }
        Self::from_up_unchecked(up)
    }

    /// Equivalence classes of the preorder, each as a set, ordered by least member.
    pub fn equivalence_classes(&self) -> Vec<PointSet> {
        let mut seen = PointSet::EMPTY;
        let mut classes = Vec::new();
        for x in 0..self.n {
            if seen.contains(x) {
                continue;
            }
            let class = self.up[x] & self.down[x];
            seen = seen | class;
            classes.push(class);
        }
        classes
    }

    /// Length of the longest strictly decreasing chain of non-empty closed sets.
    ///
    /// Every step of such a chain removes at least one equivalence class, and
    /// removing one maximal class at a time (a linear extension of the
    /// quotient order) attains that bound, so the answer is the number of
    /// classes.
    pub fn closed_chain_length(&self) -> usize {
        self.equivalence_classes().len()
    }
}

/// `index[x]` = position of `x` among the members of `a`.
pub(crate) fn subspace_index(a: PointSet, n: usize) -> Vec<usize> {
    let mut index = vec![usize::MAX; n.max(a.span())];
    for (i, x) in a.iter().enumerate() {
        index[x] = i;
    }
    index
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSpace({self})")
    }
}

/// Compact form `n:i<j,...` listing the strict pairs of the preorder.
impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for (i, (x, y)) in self.strict_pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}<{y}")?;
        }
        Ok(())
    }
}
