//! Stably convergent sequences of continuous threshold maps and the closed
//! cover `X_n = {x : f_m(x) = f_n(x) for all m ≥ n}` on which the limit is
//! continuous.
//!
//! A sequence is given by explicit members `f_0 … f_{M-1}` and, for
//! `j ≥ M`, a periodic rule: with `p` phases, `f_j(x)` is read from phase
//! `j mod p`, from its `below` table when `x` is the root or `x_0 < j`, and
//! from its `above` table otherwise. Every point eventually falls below, so
//! the sequence converges stably iff all phases agree on their `below`
//! tables; the limit is that common table.

use std::sync::Arc;

use super::{ShapeSet, ShapeSpace, ThresholdMap, TreeError, TruncatedModel};
use crate::finspace::FiniteSpace;
use crate::mapcalc::Cardinality;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseRule {
    pub below: ThresholdMap,
    pub above: ThresholdMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableSequence {
    explicit: Vec<ThresholdMap>,
    phases: Vec<PhaseRule>,
}

impl StableSequence {
    /// All tables must share the height and codomain; the phase tables must
    /// share one threshold.
    pub fn new(explicit: Vec<ThresholdMap>, phases: Vec<PhaseRule>) -> Result<Self, TreeError> {
        let first = &phases.first().ok_or(TreeError::EmptyRule)?.below;
        let (space, cod) = (first.space(), first.codomain());
        for p in &phases {
            for t in [&p.below, &p.above] {
                if t.space() != space {
                    return Err(TreeError::ShapeSpaceMismatch);
                }
                if t.codomain() != cod {
                    return Err(TreeError::CodomainMismatch);
                }
            }
        }
        for e in &explicit {
            if e.space().k() != space.k() {
                return Err(TreeError::ShapeSpaceMismatch);
            }
            if e.codomain() != cod {
                return Err(TreeError::CodomainMismatch);
            }
        }
        Ok(StableSequence { explicit, phases })
    }

    /// The same map at every index.
    pub fn constant(f: ThresholdMap) -> Self {
        StableSequence { explicit: Vec::new(), phases: vec![PhaseRule { below: f.clone(), above: f }] }
    }

    pub fn explicit(&self) -> &[ThresholdMap] {
        &self.explicit
    }

    pub fn phases(&self) -> &[PhaseRule] {
        &self.phases
    }

    pub fn space(&self) -> ShapeSpace {
        self.phases[0].below.space()
    }

    pub fn codomain(&self) -> &Arc<FiniteSpace> {
        self.phases[0].below.codomain_arc()
    }

    fn period(&self) -> usize {
        self.phases.len()
    }

    /// Largest threshold among all tables.
    fn max_threshold(&self) -> usize {
        self.explicit
            .iter()
            .map(|e| e.space().threshold())
            .chain([self.space().threshold()])
            .max()
            .unwrap()
    }

    pub fn value(&self, j: usize, point: &[usize]) -> usize {
        if let Some(e) = self.explicit.get(j) {
            return e.eval(point);
        }
        let phase = &self.phases[j % self.period()];
        let below = point.first().is_none_or(|&x0| x0 < j);
        if below {
            phase.below.eval(point)
        } else {
            phase.above.eval(point)
        }
    }

    /// Member `f_j` as a threshold map.
    pub fn member(&self, j: usize) -> Result<ThresholdMap, TreeError> {
        if let Some(e) = self.explicit.get(j) {
            return Ok(e.clone());
        }
        let space = self.space().with_threshold(self.space().threshold().max(j))?;
        ThresholdMap::from_fn(space, self.codomain().clone(), |s| {
            self.value(j, &s.representative(space.threshold()))
        })
    }

    /// The stable limit, or the first shape on which the phases disagree.
    pub fn limit(&self) -> Result<ThresholdMap, TreeError> {
        let base = &self.phases[0].below;
        for p in &self.phases[1..] {
            if let Some(i) = (0..base.space().len()).find(|&i| p.below.value(i) != base.value(i)) {
                return Err(TreeError::NotStablyConvergent { shape: base.space().shape(i) });
            }
        }
        Ok(base.clone())
    }

    /// Index from which `f_m(x)` equals the limit for every `m`.
    fn settle_index(&self, point: &[usize]) -> usize {
        self.explicit.len().max(point.first().map_or(0, |&x0| x0 + 1))
    }

    /// Whether `x ∈ X_n`. From `settle_index(x)` on the values cycle through
    /// the `below` tables, which agree with the limit, so checking one more
    /// period past it decides the universal quantifier.
    pub fn stays_from(&self, n: usize, point: &[usize]) -> bool {
        let v = self.value(n, point);
        let end = n.max(self.settle_index(point)) + self.period();
        (n..end).all(|m| self.value(m, point) == v)
    }

    /// `X_n` as a shape set. Beyond the threshold `max(n, M) + p` every
    /// value of `x_0` sees a full period of `above` phases, so membership
    /// depends on the shape only.
    pub fn stable_set(&self, n: usize) -> Result<ShapeSet, TreeError> {
        let t = self.max_threshold().max(n.max(self.explicit.len()) + self.period());
        let space = self.space().with_threshold(t)?;
        Ok(ShapeSet::from_fn(space, |i| self.stays_from(n, &space.shape(i).representative(t))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableCover {
    pub limit: ThresholdMap,
    /// `X_0, X_1, …, X_{n_max}`; each point `x` lies in `X_n` for
    /// `n = max(M, x_0 + 1)`.
    pub sets: Vec<ShapeSet>,
    pub closed: Vec<bool>,
    pub continuous: Vec<bool>,
    pub increasing: bool,
    /// Members `f_0 … f_{members_checked - 1}` were checked for continuity;
    /// past `max(M, N + 1)` members repeat with the period up to a shift.
    pub members_checked: usize,
    pub cardinality: Cardinality,
}

impl StableCover {
    pub fn valid(&self) -> bool {
        self.increasing && self.closed.iter().all(|&b| b) && self.continuous.iter().all(|&b| b)
    }

    /// Recompute the cover on a truncated model: every window point lies in
    /// its `X_{n(x)}`, the listed sets are closed and increasing there, the
    /// limit is continuous on them, and the limit agrees with the members
    /// once they settle.
    pub fn verify_truncated(&self, seq: &StableSequence, depth: usize) -> Result<bool, TreeError> {
        let model = TruncatedModel::new(seq.space().k(), depth)?;
        let restricted: Vec<Vec<bool>> = self.sets.iter().map(|s| model.restrict(s)).collect();
        for (i, xs) in restricted.iter().enumerate() {
            if !model.is_closed(xs) || model.discontinuity(&self.limit, xs).contains(&true) {
                return Ok(false);
            }
            if i > 0 && restricted[i - 1].iter().zip(xs).any(|(&a, &b)| a && !b) {
                return Ok(false);
            }
        }
        for i in 0..model.len() {
            let x = model.point(i);
            let n = seq.settle_index(&x);
            if !seq.stays_from(n, &x) {
                return Ok(false);
            }
            if let Some(xs) = restricted.get(n) {
                if !xs[i] {
                    return Ok(false);
                }
            }
            let settled = (n..n + seq.period()).all(|m| seq.value(m, &x) == self.limit.eval(&x));
            if !settled {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Build the closed cover of a stably convergent sequence of continuous
/// maps, listing `X_n` up to `n_max` (default `max(M, N + 1) + p`).
pub fn stable_sequence_cover(seq: &StableSequence, n_max: Option<usize>) -> Result<StableCover, TreeError> {
    let limit = seq.limit()?;
    let n = seq.space().threshold();
    let members_checked = seq.explicit.len().max(n + 1) + seq.period();
    for j in 0..members_checked {
        let f = seq.member(j)?;
        if let Some((shape, _)) = f.discontinuity_witness(&ShapeSet::full(f.space())) {
            return Err(TreeError::MemberDiscontinuous { index: j, shape });
        }
    }
    let n_max = n_max.unwrap_or(members_checked);
    let sets = (0..=n_max).map(|i| seq.stable_set(i)).collect::<Result<Vec<_>, _>>()?;
    let closed = sets.iter().map(ShapeSet::is_closed).collect();
    let continuous = sets.iter().map(|s| limit.is_continuous_on(s)).collect();
    let increasing = sets.windows(2).all(|w| w[0].is_subset(&w[1]));
    let cardinality = if sets.iter().any(ShapeSet::is_full) {
        Cardinality::Finite(1)
    } else {
        Cardinality::CountablyInfinite
    };
    Ok(StableCover { limit, sets, closed, continuous, increasing, members_checked, cardinality })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(k: usize, n: usize) -> ShapeSpace {
        ShapeSpace::new(k, n).unwrap()
    }

    fn by_level(space: ShapeSpace, y: &Arc<FiniteSpace>, root: usize, rest: usize) -> ThresholdMap {
        ThresholdMap::from_fn(space, y.clone(), |s| if s.is_empty() { root } else { rest }).unwrap()
    }

    #[test]
    fn constant_sequence() {
        let f = ThresholdMap::constant(sp(2, 1), FiniteSpace::discrete(2), 1).unwrap();
        let c = stable_sequence_cover(&StableSequence::constant(f.clone()), None).unwrap();
        assert_eq!(c.limit, f);
        assert!(c.sets[0].is_full());
        assert_eq!(c.cardinality, Cardinality::Finite(1));
        assert!(c.valid());
    }

    /// `f_j(root) = 1`, `f_j(leaf n) = 0` for `n < j` and `1` otherwise,
    /// into the discrete two-point space.
    fn to_root_indicator() -> StableSequence {
        let y = Arc::new(FiniteSpace::discrete(2));
        let space = sp(1, 1);
        let phase = PhaseRule { below: by_level(space, &y, 1, 0), above: by_level(space, &y, 1, 1) };
        StableSequence::new(Vec::new(), vec![phase]).unwrap()
    }

    #[test]
    fn convergence_to_a_discontinuous_limit() {
        let seq = to_root_indicator();
        for j in 0..6 {
            assert!(seq.member(j).unwrap().is_continuous());
        }
        let c = stable_sequence_cover(&seq, Some(5)).unwrap();
        assert!(!c.limit.is_continuous());
        assert!(c.valid());
        assert_eq!(c.cardinality, Cardinality::CountablyInfinite);
        for (n, xs) in c.sets.iter().enumerate() {
            // X_n = {root} ∪ {leaves < n}
            for leaf in 0..12 {
                assert_eq!(xs.contains_point(&[leaf]), leaf < n, "X_{n} at leaf {leaf}");
            }
            assert!(xs.contains_point(&[]));
        }
        assert!(c.verify_truncated(&seq, 6).unwrap());
        assert!(c.verify_truncated(&seq, 100).unwrap());
    }

    #[test]
    fn convergence_to_a_constant_through_sierpinski() {
        // {0} open: point 1 lies in the closure of point 0
        let y = Arc::new(FiniteSpace::sierpinski().relabel(&[1, 0]));
        let space = sp(1, 1);
        let phase = PhaseRule { below: by_level(space, &y, 1, 1), above: by_level(space, &y, 1, 0) };
        let seq = StableSequence::new(Vec::new(), vec![phase]).unwrap();
        let c = stable_sequence_cover(&seq, Some(4)).unwrap();
        assert!(c.limit.values().iter().all(|&v| v == 1));
        assert!(c.valid());
        for (n, xs) in c.sets.iter().enumerate() {
            for leaf in 0..10 {
                assert_eq!(xs.contains_point(&[leaf]), leaf < n);
            }
        }
        assert!(c.verify_truncated(&seq, 100).unwrap());
    }

    #[test]
    fn discontinuous_member_is_rejected() {
        let y = Arc::new(FiniteSpace::discrete(2));
        let space = sp(1, 1);
        let phase = PhaseRule { below: by_level(space, &y, 1, 1), above: by_level(space, &y, 1, 0) };
        let seq = StableSequence::new(Vec::new(), vec![phase]).unwrap();
        assert!(matches!(
            stable_sequence_cover(&seq, None),
            Err(TreeError::MemberDiscontinuous { index: 0, .. })
        ));
    }

    #[test]
    fn disagreeing_phases_do_not_converge() {
        let y = Arc::new(FiniteSpace::discrete(2));
        let space = sp(1, 1);
        let p0 = PhaseRule { below: by_level(space, &y, 0, 0), above: by_level(space, &y, 0, 0) };
        let p1 = PhaseRule { below: by_level(space, &y, 1, 1), above: by_level(space, &y, 1, 1) };
        let seq = StableSequence::new(Vec::new(), vec![p0, p1]).unwrap();
        assert!(matches!(
            stable_sequence_cover(&seq, None),
            Err(TreeError::NotStablyConvergent { .. })
        ));
    }

    #[test]
    fn explicit_prefix_and_period_two() {
        let y = Arc::new(FiniteSpace::indiscrete(3));
        let space = sp(1, 1);
        let first = by_level(sp(1, 3), &y, 2, 2);
        let p0 = PhaseRule { below: by_level(space, &y, 1, 0), above: by_level(space, &y, 1, 1) };
        let p1 = PhaseRule { below: by_level(space, &y, 1, 0), above: by_level(space, &y, 1, 2) };
        let seq = StableSequence::new(vec![first], vec![p0, p1]).unwrap();
        let c = stable_sequence_cover(&seq, Some(6)).unwrap();
        assert!(c.valid());
        assert!(!c.sets[0].contains_point(&[]));
        assert!(c.sets[1].contains_point(&[]));
        assert!(c.verify_truncated(&seq, 9).unwrap());
    }
}
