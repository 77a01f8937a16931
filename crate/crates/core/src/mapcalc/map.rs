use std::fmt;
use std::sync::Arc;

use super::MapError;
use crate::finspace::{subspace_index, FiniteSpace, PointSet};

/// A total map between finite spaces, given by its value table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteMap {
    dom: Arc<FiniteSpace>,
    cod: Arc<FiniteSpace>,
    table: Vec<usize>,
    /// `escape[x]`: points whose image leaves `U(f(x))`.
    escape: Vec<PointSet>,
}

impl FiniteMap {
    pub fn new(
        dom: impl Into<Arc<FiniteSpace>>,
        cod: impl Into<Arc<FiniteSpace>>,
        table: Vec<usize>,
    ) -> Result<Self, MapError> {
        let dom = dom.into();
        let cod = cod.into();
        if table.len() != dom.n() {
            return Err(MapError::PartialTable {
                expected: dom.n(),
                got: table.len(),
            });
        }
        if let Some((point, &value)) = table.iter().enumerate().find(|(_, &v)| v >= cod.n()) {
            return Err(MapError::RangeError {
                point,
                value,
                codomain_size: cod.n(),
            });
        }
        Ok(Self::from_parts(dom, cod, table))
    }

    pub(crate) fn from_parts(dom: Arc<FiniteSpace>, cod: Arc<FiniteSpace>, table: Vec<usize>) -> Self {
        let escape = (0..dom.n())
            .map(|x| {
                let target = cod.min_open(table[x]);
                (0..dom.n())
                    .filter(|&z| !target.contains(table[z]))
                    .collect()
            })
            .collect();
        FiniteMap { dom, cod, table, escape }
    }

    pub fn identity(space: impl Into<Arc<FiniteSpace>>) -> Self {
        let space = space.into();
        let table = (0..space.n()).collect();
        Self::from_parts(space.clone(), space, table)
    }

    /// Identity table between two spaces on the same number of points.
    pub fn identity_between(
        dom: impl Into<Arc<FiniteSpace>>,
        cod: impl Into<Arc<FiniteSpace>>,
    ) -> Result<Self, MapError> {
        let dom = dom.into();
        let table = (0..dom.n()).collect();
        Self::new(dom, cod, table)
    }

    pub fn constant(
        dom: impl Into<Arc<FiniteSpace>>,
        cod: impl Into<Arc<FiniteSpace>>,
        value: usize,
    ) -> Result<Self, MapError> {
        let dom = dom.into();
        let table = vec![value; dom.n()];
        Self::new(dom, cod, table)
    }

    pub fn dom(&self) -> &FiniteSpace {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteSpace {
        &self.cod
    }

    pub fn dom_arc(&self) -> &Arc<FiniteSpace> {
        &self.dom
    }

    pub fn cod_arc(&self) -> &Arc<FiniteSpace> {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self, a: PointSet) -> PointSet {
        a.iter().map(|x| self.table[x]).collect()
    }

    pub fn preimage(&self, b: PointSet) -> PointSet {
        (0..self.dom.n()).filter(|&x| b.contains(self.table[x])).collect()
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.n() == self.cod.n() && self.image(self.dom.full()) == self.cod.full()
    }

    fn check_subset(&self, a: PointSet) -> Result<(), MapError> {
        if self.dom.contains_set(a) {
            Ok(())
        } else {
            Err(MapError::DomainMismatch {
                set: a,
                n: self.dom.n(),
            })
        }
    }

    /// `D(f|A)` without the range check on `a`.
    pub(crate) fn disc(&self, a: PointSet) -> PointSet {
        a.iter()
            .filter(|&x| !(self.dom.min_open(x) & a & self.escape[x]).is_empty())
            .collect()
    }

    /// Discontinuity points of the restriction `f|A`: those `x ∈ A` with
    /// `f(U(x) ∩ A) ⊄ U(f(x))`.
    pub fn discontinuity_set(&self, a: PointSet) -> Result<PointSet, MapError> {
        self.check_subset(a)?;
        Ok(self.disc(a))
    }

    /// `C(f|A) = A ∖ D(f|A)`.
    pub fn continuity_set(&self, a: PointSet) -> Result<PointSet, MapError> {
        Ok(a - self.discontinuity_set(a)?)
    }

    pub fn is_continuous(&self) -> bool {
        self.disc(self.dom.full()).is_empty()
    }

    pub fn is_continuous_on(&self, a: PointSet) -> bool {
        self.disc(a).is_empty()
    }

    /// A specialization pair `x ⊑ y` with `f(x) ⋢ f(y)`, if any. Such a pair
    /// exists exactly when `f` is discontinuous.
    pub fn non_monotone_pair(&self) -> Option<(usize, usize)> {
        (0..self.dom.n()).find_map(|y| {
            self.dom
                .point_closure(y)
                .iter()
                .find(|&x| !self.cod.le(self.table[x], self.table[y]))
                .map(|x| (x, y))
        })
    }

    /// Restriction onto the subspace `a`, points re-indexed in increasing order.
    pub fn restrict(&self, a: PointSet) -> Result<FiniteMap, MapError> {
        self.check_subset(a)?;
        let sub = self.dom.subspace(a)?;
        let table = a.iter().map(|x| self.table[x]).collect();
        Ok(Self::from_parts(Arc::new(sub), self.cod.clone(), table))
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &FiniteMap) -> Result<FiniteMap, MapError> {
        if *self.cod != *g.dom {
            return Err(MapError::SpaceMismatch);
        }
        let table = self.table.iter().map(|&y| g.table[y]).collect();
        Ok(Self::from_parts(self.dom.clone(), g.cod.clone(), table))
    }

    /// Re-express a subset of the restricted domain in the original indexing.
    pub fn lift_from_restriction(a: PointSet, sub: PointSet) -> PointSet {
        let members: Vec<usize> = a.iter().collect();
        sub.iter().map(|i| members[i]).collect()
    }

    /// Re-express a subset of `a` in the restricted indexing.
    pub fn lower_to_restriction(a: PointSet, b: PointSet) -> PointSet {
        b.map_points(&subspace_index(a, a.span()))
    }
}

/// `g ∘ f`.
pub fn compose(f: &FiniteMap, g: &FiniteMap) -> Result<FiniteMap, MapError> {
    f.then(g)
}

impl fmt::Debug for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMap({self})")
    }
}

/// `X=<space>;Y=<space>;f=<v0>,<v1>,..`
impl fmt::Display for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X={};Y={};f=", self.dom, self.cod)?;
        write_table(f, &self.table)
    }
}

pub(crate) fn write_table(f: &mut impl fmt::Write, table: &[usize]) -> fmt::Result {
    for (i, v) in table.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapcalc::fixtures::*;

    fn ps(points: &[usize]) -> PointSet {
        PointSet::from_points(points.iter().copied())
    }

    /// Literal definition: `f|A` is continuous at `x` iff every open `V ∋ f(x)`
    /// has an open `W ∋ x` with `f(W ∩ A) ⊆ V`.
    fn discontinuity_by_open_sets(f: &FiniteMap, a: PointSet) -> PointSet {
        let x_opens = f.dom().open_sets();
        let y_opens = f.cod().open_sets();
        a.iter()
            .filter(|&x| {
                !y_opens.iter().filter(|v| v.contains(f.apply(x))).all(|v| {
                    x_opens
                        .iter()
                        .any(|w| w.contains(x) && f.image(*w & a).is_subset(*v))
                })
            })
            .collect()
    }

    #[test]
    fn discontinuity_examples() {
        assert_eq!(swap().discontinuity_set(ps(&[0, 1])).unwrap(), ps(&[0]));
        let c = FiniteMap::constant(FiniteSpace::chain(3), FiniteSpace::sierpinski(), 1).unwrap();
        assert_eq!(c.discontinuity_set(c.dom().full()).unwrap(), PointSet::EMPTY);
        assert_eq!(indiscrete_to_sierpinski().discontinuity_set(ps(&[0, 1])).unwrap(), ps(&[1]));
        assert!(matches!(
            swap().discontinuity_set(ps(&[2])),
            Err(MapError::DomainMismatch { .. })
        ));
    }

    #[test]
    fn discontinuity_matches_open_set_definition() {
        for f in small_maps() {
            for a in f.dom().full().subsets() {
                assert_eq!(f.disc(a), discontinuity_by_open_sets(&f, a), "{f} on {a}");
            }
        }
    }

    #[test]
    fn continuity_iff_monotone() {
        for f in small_maps() {
            assert_eq!(f.is_continuous(), f.non_monotone_pair().is_none(), "{f}");
        }
    }

    #[test]
    fn table_validation() {
        assert!(matches!(
            FiniteMap::new(FiniteSpace::discrete(2), FiniteSpace::discrete(2), vec![0]),
            Err(MapError::PartialTable { expected: 2, got: 1 })
        ));
        assert!(matches!(
            FiniteMap::new(FiniteSpace::discrete(2), FiniteSpace::discrete(2), vec![0, 2]),
            Err(MapError::RangeError { point: 1, value: 2, .. })
        ));
    }

    #[test]
    fn restriction_and_composition() {
        let f = swap();
        let r = f.restrict(ps(&[1])).unwrap();
        assert!(r.is_continuous());
        assert_eq!(f.restrict(f.dom().full()).unwrap(), f);
        let g = indiscrete_to_sierpinski().restrict(ps(&[1])).unwrap();
        assert!(g.is_continuous());

        let ff = compose(&f, &f).unwrap();
        assert_eq!(ff.table(), &[0, 1]);
        let d = FiniteMap::identity(FiniteSpace::discrete(2));
        assert!(matches!(compose(&f, &d), Err(MapError::SpaceMismatch)));
    }

    #[test]
    fn restriction_index_helpers() {
        let a = ps(&[1, 3, 4]);
        assert_eq!(FiniteMap::lift_from_restriction(a, ps(&[0, 2])), ps(&[1, 4]));
        assert_eq!(FiniteMap::lower_to_restriction(a, ps(&[3, 4])), ps(&[1, 2]));
    }
}
