use super::{sc_series, subset_guard, FiniteMap, MapError};
use crate::finspace::PointSet;

/// A linear order on the domain in which every point is a continuity point
/// of `f` restricted to the tail starting at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellOrderWitness {
    pub order: Vec<usize>,
}

impl WellOrderWitness {
    fn is_permutation(&self, n: usize) -> bool {
        self.order.len() == n
            && PointSet::from_points(self.order.iter().copied()) == PointSet::full(n)
            && self.order.iter().all(|&x| x < n)
    }

    /// Tail criterion: `f|{y : y ⪰ x}` is continuous at `x` for every `x`.
    pub fn verify_tails(&self, f: &FiniteMap) -> bool {
        if !self.is_permutation(f.dom().n()) {
            return false;
        }
        let mut tail = f.dom().full();
        for &x in &self.order {
            if f.disc(tail).contains(x) {
                return false;
            }
            tail.remove(x);
        }
        true
    }

    /// The literal condition: for every non-empty `A`, `f|A` is continuous at
    /// the first point of `A` in the order.
    pub fn verify_all_subsets(&self, f: &FiniteMap) -> Result<bool, MapError> {
        subset_guard(f.dom().n())?;
        if !self.is_permutation(f.dom().n()) {
            return Ok(false);
        }
        let mut rank = vec![0; self.order.len()];
        for (i, &x) in self.order.iter().enumerate() {
            rank[x] = i;
        }
        Ok(f.dom().full().subsets().all(|a| {
            match a.iter().min_by_key(|&x| rank[x]) {
                Some(m) => !f.disc(a).contains(m),
                None => true,
            }
        }))
    }
}

/// Order points by the level of the discontinuity series they leave at:
/// points of `D_α ∖ D_{α+1}` come before those of `D_{α+1}`. `None` when `f`
/// is not scatteredly continuous.
pub fn well_order_witness(f: &FiniteMap) -> Option<WellOrderWitness> {
    let series = sc_series(f);
    if !series.holds() {
        return None;
    }
    let order = series
        .sets
        .windows(2)
        .flat_map(|w| (w[0] - w[1]).iter())
        .collect();
    Some(WellOrderWitness { order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FiniteSpace;
    use crate::mapcalc::fixtures::*;
    use crate::mapcalc::sc_bruteforce;

    #[test]
    fn witness_examples() {
        let w = well_order_witness(&swap()).unwrap();
        assert_eq!(w.order, vec![1, 0]);
        assert!(w.verify_tails(&swap()));
        assert!(w.verify_all_subsets(&swap()).unwrap());
        assert!(!WellOrderWitness { order: vec![0, 1] }.verify_tails(&swap()));

        let c = FiniteMap::identity(FiniteSpace::chain(3));
        for order in [vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]] {
            assert!(WellOrderWitness { order }.verify_tails(&c));
        }
        assert_eq!(well_order_witness(&indiscrete_to_discrete()), None);
    }

    #[test]
    fn tail_criterion_matches_subset_minimum_condition() {
        for f in maps_up_to(3, 3) {
            let sc = sc_bruteforce(&f).unwrap();
            match well_order_witness(&f) {
                Some(w) => {
                    assert!(sc, "{f}");
                    assert!(w.verify_tails(&f), "{f}");
                    assert!(w.verify_all_subsets(&f).unwrap(), "{f}");
                }
                None => assert!(!sc, "{f}"),
            }
        }
    }

    #[test]
    fn no_order_verifies_for_non_sc_maps() {
        let f = indiscrete_to_discrete();
        for order in [vec![0, 1], vec![1, 0]] {
            let w = WellOrderWitness { order };
            assert!(!w.verify_tails(&f));
            assert!(!w.verify_all_subsets(&f).unwrap());
        }
    }
}
