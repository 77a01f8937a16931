use super::{FiniteSpace, PointSet};

/// Result of iterated removal of isolated points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorBendixson {
    /// `levels[0]` is the whole space; each next level drops the isolated
    /// points of the previous one. The last level is `∅` or the perfect kernel.
    pub levels: Vec<PointSet>,
    pub kernel: PointSet,
    pub scattered: bool,
    /// Number of strict removal steps.
    pub height: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceProperties {
    pub t0: bool,
    pub t1: bool,
    pub t2: bool,
    pub regular: bool,
    pub scattered: bool,
    /// Every closed set is open.
    pub partition: bool,
}

/// Spaces up to this size get their separation axioms by explicit search
/// over pairs of open sets.
pub const SEPARATION_SEARCH_LIMIT: usize = 5;

impl FiniteSpace {
    pub fn cantor_bendixson(&self) -> CantorBendixson {
        let mut levels = vec![self.full()];
        loop {
            let cur = *levels.last().unwrap();
            if cur.is_empty() {
                break;
            }
            let next = cur - self.isolated_points(cur);
            if next == cur {
                break;
            }
            levels.push(next);
        }
        let kernel = *levels.last().unwrap();
        CantorBendixson {
            height: levels.len() - 1,
            scattered: kernel.is_empty(),
            kernel,
            levels,
        }
    }

    pub fn is_scattered(&self) -> bool {
        self.cantor_bendixson().scattered
    }

    pub fn is_t0(&self) -> bool {
        (0..self.n()).all(|x| (self.min_open(x) & self.point_closure(x)) == PointSet::singleton(x))
    }

    pub fn is_t1(&self) -> bool {
        (0..self.n()).all(|x| self.min_open(x) == PointSet::singleton(x))
    }

    pub fn is_partition(&self) -> bool {
        (0..self.n()).all(|x| self.min_open(x) == self.point_closure(x))
    }

    /// Hausdorff via minimal neighbourhoods: distinct points have disjoint `U(x)`.
    pub fn is_t2_by_neighborhoods(&self) -> bool {
        (0..self.n()).all(|x| {
            (x + 1..self.n()).all(|y| self.min_open(x).is_disjoint(self.min_open(y)))
        })
    }

    /// Regularity via minimal neighbourhoods: for `x ∉ cl{y}` the sets `U(x)`
    /// and `U(cl{y})` are disjoint. Taking unions over `y ∈ F` covers every
    /// closed `F` missing `x`.
    pub fn is_regular_by_neighborhoods(&self) -> bool {
        (0..self.n()).all(|x| {
            (0..self.n())
                .filter(|&y| !self.le(x, y))
                .all(|y| self.min_open(x).is_disjoint(self.up_closure(self.point_closure(y))))
        })
    }

    /// Hausdorff by searching for disjoint separating open sets.
    pub fn is_t2_by_search(&self) -> bool {
        let opens = self.open_sets();
        (0..self.n()).all(|x| {
            (x + 1..self.n()).all(|y| {
                opens.iter().filter(|u| u.contains(x)).any(|u| {
                    opens
                        .iter()
                        .any(|v| v.contains(y) && u.is_disjoint(*v))
                })
            })
        })
    }

    /// Regularity by searching, for every closed `F` and `x ∉ F`, for disjoint
    /// open `U ∋ x` and `V ⊇ F`.
    pub fn is_regular_by_search(&self) -> bool {
        let opens = self.open_sets();
        opens.iter().all(|o| {
            let f = self.complement(*o);
            o.iter().all(|x| {
                opens.iter().filter(|u| u.contains(x)).any(|u| {
                    opens
                        .iter()
                        .any(|v| f.is_subset(*v) && u.is_disjoint(*v))
                })
            })
        })
    }

    /// All predicates. Separation axioms use the open-set search for small
    /// spaces and the minimal-neighbourhood criterion beyond
    /// [`SEPARATION_SEARCH_LIMIT`]; the two agree (see tests).
    pub fn properties(&self) -> SpaceProperties {
        let search = self.n() <= SEPARATION_SEARCH_LIMIT;
        SpaceProperties {
            t0: self.is_t0(),
            t1: self.is_t1(),
            t2: if search { self.is_t2_by_search() } else { self.is_t2_by_neighborhoods() },
            regular: if search {
                self.is_regular_by_search()
            } else {
                self.is_regular_by_neighborhoods()
            },
            scattered: self.is_scattered(),
            partition: self.is_partition(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_bendixson_examples() {
        let d = FiniteSpace::discrete(4).cantor_bendixson();
        assert!(d.scattered);
        assert_eq!(d.height, 1);

        let i = FiniteSpace::indiscrete(2).cantor_bendixson();
        assert!(!i.scattered);
        assert_eq!(i.kernel, PointSet::full(2));

        let s = FiniteSpace::sierpinski().cantor_bendixson();
        assert!(s.scattered);
        assert_eq!(s.height, 2);
        assert_eq!(
            s.levels,
            vec![PointSet::full(2), PointSet::singleton(0), PointSet::EMPTY]
        );

        let e = FiniteSpace::empty().cantor_bendixson();
        assert!(e.scattered);
        assert_eq!(e.height, 0);
    }

    #[test]
    fn property_examples() {
        let s = FiniteSpace::sierpinski().properties();
        assert!(s.t0 && !s.t1 && !s.t2 && !s.regular && s.scattered && !s.partition);

        let i = FiniteSpace::indiscrete(2).properties();
        assert!(i.regular && !i.t0 && i.partition && !i.scattered);

        let d = FiniteSpace::discrete(3).properties();
        assert!(d.t0 && d.t1 && d.t2 && d.regular && d.scattered && d.partition);
    }

    #[test]
    fn search_matches_neighbourhoods_on_larger_spaces() {
        let spaces = [
            FiniteSpace::chain(6),
            FiniteSpace::discrete(6),
            FiniteSpace::indiscrete(3).sum(&FiniteSpace::indiscrete(3)).unwrap(),
            FiniteSpace::sierpinski().product(&FiniteSpace::indiscrete(3)).unwrap(),
        ];
        for s in &spaces {
            assert_eq!(s.is_regular_by_search(), s.is_regular_by_neighborhoods(), "{s}");
            assert_eq!(s.is_t2_by_search(), s.is_t2_by_neighborhoods(), "{s}");
        }
    }
}
