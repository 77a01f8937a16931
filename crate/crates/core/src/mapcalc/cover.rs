use std::fmt;

use super::{subset_guard, FiniteMap, MapError};
use crate::finspace::PointSet;

/// Size class of a decomposition, ordered
/// `Finite(0) < Finite(1) < … < CountablyInfinite < None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinality {
    Finite(usize),
    CountablyInfinite,
    /// No cover of the required kind exists.
    None,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::CountablyInfinite => f.write_str("omega"),
            Cardinality::None => f.write_str("none"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverMode {
    Arbitrary,
    Closed,
}

impl CoverMode {
    pub fn name(self) -> &'static str {
        match self {
            CoverMode::Arbitrary => "arbitrary",
            CoverMode::Closed => "closed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResult {
    pub mode: CoverMode,
    pub pieces: Vec<PointSet>,
    pub cardinality: Cardinality,
    /// Per piece: the restriction is continuous (and the piece closed, in
    /// closed mode).
    pub certificates: Vec<bool>,
    /// A pair `x ⊑ y` with `f(x) ⋢ f(y)`; every closed piece containing `y`
    /// contains `x` and so breaks continuity at `y`.
    pub impossibility: Option<(usize, usize)>,
    /// Size of the greedy cover, an upper bound on the exact answer.
    pub greedy_bound: Option<usize>,
}

impl CoverResult {
    /// Re-check the result against `f` from scratch.
    pub fn verify(&self, f: &FiniteMap) -> bool {
        let x = f.dom();
        match self.cardinality {
            Cardinality::Finite(n) => {
                let union = self.pieces.iter().fold(PointSet::EMPTY, |acc, &p| acc | p);
                n == self.pieces.len()
                    && union == x.full()
                    && self.certificates.len() == n
                    && self.pieces.iter().all(|&p| {
                        f.is_continuous_on(p) && (self.mode == CoverMode::Arbitrary || x.is_closed(p))
                    })
            }
            Cardinality::CountablyInfinite => false,
            Cardinality::None => match self.impossibility {
                Some((lo, hi)) => {
                    self.mode == CoverMode::Closed
                        && lo < x.n()
                        && hi < x.n()
                        && x.le(lo, hi)
                        && !f.cod().le(f.apply(lo), f.apply(hi))
                }
                None => false,
            },
        }
    }
}

fn greedy_cover(universe: PointSet, candidates: &[PointSet]) -> Option<Vec<PointSet>> {
    let mut uncovered = universe;
    let mut out = Vec::new();
    while !uncovered.is_empty() {
        let best = candidates
            .iter()
            .copied()
            .max_by_key(|c| (*c & uncovered).len())
            .filter(|c| !(*c & uncovered).is_empty())?;
        out.push(best);
        uncovered = uncovered - best;
    }
    Some(out)
}

fn cover_search(uncovered: PointSet, candidates: &[PointSet], chosen: &mut Vec<PointSet>, best: &mut Vec<PointSet>) {
    if uncovered.is_empty() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    let widest = candidates.iter().map(|c| (*c & uncovered).len()).max().unwrap_or(0);
    if widest == 0 || chosen.len() + uncovered.len().div_ceil(widest) >= best.len() {
        return;
    }
    // branch on the point with the fewest candidates
    let point = uncovered
        .iter()
        .min_by_key(|&p| candidates.iter().filter(|c| c.contains(p)).count())
        .unwrap();
    let mut options: Vec<PointSet> = candidates.iter().copied().filter(|c| c.contains(point)).collect();
    options.sort_by_key(|c| std::cmp::Reverse((*c & uncovered).len()));
    for c in options {
        chosen.push(c);
        cover_search(uncovered - c, candidates, chosen, best);
        chosen.pop();
    }
}

/// Exact minimum set cover by branch and bound, seeded with the greedy cover.
/// Returns `(exact, greedy)`, or `None` when the candidates miss a point.
pub fn min_set_cover(universe: PointSet, candidates: &[PointSet]) -> Option<(Vec<PointSet>, Vec<PointSet>)> {
    let greedy = greedy_cover(universe, candidates)?;
    let mut best = greedy.clone();
    cover_search(universe, candidates, &mut Vec::new(), &mut best);
    Some((best, greedy))
}

/// Inclusion-maximal members of a family closed under subsets, given as a
/// membership table indexed by bit pattern.
fn maximal_members(n: usize, member: &[bool]) -> Vec<PointSet> {
    PointSet::full(n)
        .subsets()
        .filter(|a| member[a.bits() as usize])
        .filter(|a| (PointSet::full(n) - *a).iter().all(|x| !member[a.with(x).bits() as usize]))
        .collect()
}

fn empty_domain(mode: CoverMode) -> CoverResult {
    CoverResult {
        mode,
        pieces: Vec::new(),
        cardinality: Cardinality::Finite(0),
        certificates: Vec::new(),
        impossibility: None,
        greedy_bound: Some(0),
    }
}

/// Smallest number of pieces in a cover of the domain by sets on which `f`
/// is continuous. Pieces are returned pairwise disjoint.
pub fn dec_arbitrary(f: &FiniteMap) -> Result<CoverResult, MapError> {
    let n = f.dom().n();
    subset_guard(n)?;
    if n == 0 {
        return Ok(empty_domain(CoverMode::Arbitrary));
    }
    let member: Vec<bool> = (0..1u64 << n)
        .map(|bits| f.is_continuous_on(PointSet::from_bits(bits)))
        .collect();
    let candidates = maximal_members(n, &member);
    // singletons are always continuous, so a cover exists
    let (exact, greedy) = min_set_cover(f.dom().full(), &candidates).expect("singletons cover");
    let mut seen = PointSet::EMPTY;
    let pieces: Vec<PointSet> = exact
        .into_iter()
        .map(|p| {
            let own = p - seen;
            seen = seen | p;
            own
        })
        .collect();
    let certificates = pieces.iter().map(|&p| f.is_continuous_on(p)).collect();
    Ok(CoverResult {
        mode: CoverMode::Arbitrary,
        cardinality: Cardinality::Finite(pieces.len()),
        pieces,
        certificates,
        impossibility: None,
        greedy_bound: Some(greedy.len()),
    })
}

/// Smallest number of closed pieces with continuous restrictions, by exact
/// search over all closed sets. When no such cover exists the result carries
/// a non-monotone pair whose upper point no admissible piece can contain.
pub fn dec_closed(f: &FiniteMap) -> Result<CoverResult, MapError> {
    let x = f.dom();
    subset_guard(x.n())?;
    if x.n() == 0 {
        return Ok(empty_domain(CoverMode::Closed));
    }
    let admissible: Vec<PointSet> = x
        .closed_sets()
        .into_iter()
        .filter(|&c| !c.is_empty() && f.is_continuous_on(c))
        .collect();
    let candidates: Vec<PointSet> = admissible
        .iter()
        .copied()
        .filter(|&c| !admissible.iter().any(|&d| d != c && c.is_subset(d)))
        .collect();
    match min_set_cover(x.full(), &candidates) {
        Some((exact, greedy)) => Ok(CoverResult {
            mode: CoverMode::Closed,
            cardinality: Cardinality::Finite(exact.len()),
            certificates: exact.iter().map(|&p| f.is_continuous_on(p) && x.is_closed(p)).collect(),
            pieces: exact,
            impossibility: None,
            greedy_bound: Some(greedy.len()),
        }),
        None => {
            let covered = candidates.iter().fold(PointSet::EMPTY, |acc, &c| acc | c);
            let stuck = x.full() - covered;
            let witness = stuck
                .iter()
                .find_map(|y| {
                    x.point_closure(y)
                        .iter()
                        .find(|&lo| !f.cod().le(f.apply(lo), f.apply(y)))
                        .map(|lo| (lo, y))
                })
                .or_else(|| f.non_monotone_pair());
            Ok(CoverResult {
                mode: CoverMode::Closed,
                pieces: Vec::new(),
                cardinality: Cardinality::None,
                certificates: Vec::new(),
                impossibility: witness,
                greedy_bound: None,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FiniteSpace;
    use crate::mapcalc::fixtures::*;

    fn ps(points: &[usize]) -> PointSet {
        PointSet::from_points(points.iter().copied())
    }

    /// Smallest `k` such that some `k` subsets with continuous restrictions
    /// (closed ones, if asked) cover the domain, by trying all `k`-tuples.
    fn dec_by_tuples(f: &FiniteMap, closed: bool) -> Cardinality {
        let x = f.dom();
        let ok: Vec<PointSet> = x
            .full()
            .subsets()
            .filter(|&a| f.is_continuous_on(a) && (!closed || x.is_closed(a)))
            .collect();
        fn covers(ok: &[PointSet], k: usize, need: PointSet) -> bool {
            if need.is_empty() {
                return true;
            }
            k > 0 && ok.iter().any(|&c| c.contains(need.first().unwrap()) && covers(ok, k - 1, need - c))
        }
        (0..=x.n())
            .find(|&k| covers(&ok, k, x.full()))
            .map_or(Cardinality::None, Cardinality::Finite)
    }

    #[test]
    fn arbitrary_examples() {
        let c = FiniteMap::identity(FiniteSpace::chain(3));
        assert_eq!(dec_arbitrary(&c).unwrap().cardinality, Cardinality::Finite(1));

        let s = dec_arbitrary(&swap()).unwrap();
        assert_eq!(s.cardinality, Cardinality::Finite(2));
        let mut pieces = s.pieces.clone();
        pieces.sort();
        assert_eq!(pieces, vec![ps(&[0]), ps(&[1])]);
        assert!(s.verify(&swap()));

        let d = dec_arbitrary(&indiscrete_to_discrete()).unwrap();
        assert_eq!(d.cardinality, Cardinality::Finite(2));
    }

    #[test]
    fn closed_examples() {
        let c = FiniteMap::identity(FiniteSpace::chain(3));
        assert_eq!(dec_closed(&c).unwrap().cardinality, Cardinality::Finite(1));

        let s = dec_closed(&swap()).unwrap();
        assert_eq!(s.cardinality, Cardinality::None);
        assert_eq!(s.impossibility, Some((0, 1)));
        assert!(s.verify(&swap()));

        let h = dec_closed(&sierpinski_to_discrete()).unwrap();
        assert_eq!(h.cardinality, Cardinality::None);
        assert_eq!(h.impossibility, Some((0, 1)));
    }

    #[test]
    fn exact_covers_match_tuple_search() {
        for f in maps_up_to(3, 3) {
            let a = dec_arbitrary(&f).unwrap();
            let c = dec_closed(&f).unwrap();
            assert_eq!(a.cardinality, dec_by_tuples(&f, false), "{f}");
            assert_eq!(c.cardinality, dec_by_tuples(&f, true), "{f}");
            assert!(a.verify(&f) && c.verify(&f), "{f}");
            assert!(a.cardinality <= c.cardinality);
        }
    }

    #[test]
    fn closed_dichotomy() {
        for f in maps_up_to(3, 3) {
            let c = dec_closed(&f).unwrap().cardinality;
            if f.dom().n() == 0 {
                assert_eq!(c, Cardinality::Finite(0));
            } else if f.is_continuous() {
                assert_eq!(c, Cardinality::Finite(1), "{f}");
            } else {
                assert_eq!(c, Cardinality::None, "{f}");
            }
        }
    }

    #[test]
    fn set_cover_branch_and_bound_beats_greedy() {
        // greedy takes the wide middle set first and needs three
        let universe = PointSet::full(6);
        let candidates = [ps(&[0, 1, 2]), ps(&[3, 4, 5]), ps(&[1, 2, 3, 4])];
        let (exact, greedy) = min_set_cover(universe, &candidates).unwrap();
        assert_eq!(greedy.len(), 3);
        assert_eq!(exact.len(), 2);
        assert!(min_set_cover(universe, &[ps(&[0])]).is_none());
    }

    #[test]
    fn cardinality_order() {
        assert!(Cardinality::Finite(1) < Cardinality::Finite(2));
        assert!(Cardinality::Finite(99) < Cardinality::CountablyInfinite);
        assert!(Cardinality::CountablyInfinite < Cardinality::None);
    }
}
