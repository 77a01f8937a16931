//! Closed covers of the tree space on whose pieces a threshold map is
//! continuous.
//!
//! The cover walks the weak-discontinuity series. On each level
//! `L_α = D̃_α ∖ D̃_{α+1}` the map restricted to `D̃_α` is continuous. If
//! `L_α` is closed it becomes one piece; otherwise every point `s ∈ L_α`
//! contributes the piece `B_N(s) ∩ D̃_α`, which is closed (`B_N(s)` is
//! clopen), misses `D̃_{α+1}`, and so carries a continuous restriction.
//! Points of one shape give one uniformly described family.

use super::{tree_series, Shape, ShapeSet, ThresholdMap, TreeError, TruncatedModel};
use crate::mapcalc::Cardinality;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreePiece {
    Closed(ShapeSet),
    /// The family `{B_N(s) ∩ within : s has this shape}`, one piece per point.
    Cones { shape: Shape, within: ShapeSet },
}

impl TreePiece {
    /// Number of pieces this entry stands for.
    pub fn count(&self) -> Cardinality {
        match self {
            TreePiece::Cones { shape, .. } if shape.has_star() => Cardinality::CountablyInfinite,
            _ => Cardinality::Finite(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCover {
    pub pieces: Vec<TreePiece>,
    pub cardinality: Cardinality,
    /// Per piece: closed, and the restriction is continuous.
    pub certificates: Vec<bool>,
}

fn sum_counts(pieces: &[TreePiece]) -> Cardinality {
    pieces.iter().fold(Cardinality::Finite(0), |acc, p| match (acc, p.count()) {
        (Cardinality::Finite(a), Cardinality::Finite(b)) => Cardinality::Finite(a + b),
        _ => Cardinality::CountablyInfinite,
    })
}

/// The representative cone of a family, at threshold `N + 1`.
fn cone_piece(f: &ThresholdMap, shape: &Shape, within: &ShapeSet) -> Result<ShapeSet, TreeError> {
    let space = f.space();
    let cone = ShapeSet::cone(space, space.index_of(shape)?)?;
    Ok(cone.intersection(within))
}

fn certify(f: &ThresholdMap, piece: &TreePiece) -> Result<bool, TreeError> {
    Ok(match piece {
        TreePiece::Closed(p) => p.is_closed() && f.is_continuous_on(p),
        TreePiece::Cones { shape, within } => {
            let p = cone_piece(f, shape, within)?;
            let rep = shape.representative(f.space().threshold());
            p.contains_point(&rep) && p.is_closed() && f.is_continuous_on(&p)
        }
    })
}

pub fn tree_decomposition(f: &ThresholdMap) -> Result<TreeCover, TreeError> {
    let (_, closed) = tree_series(f);
    let space = f.space();
    let mut pieces = Vec::new();
    if f.is_continuous() {
        pieces.push(TreePiece::Closed(ShapeSet::full(space)));
    } else {
        for w in closed.sets.windows(2) {
            let level = w[0].difference(&w[1]);
            if level.is_closed() {
                pieces.push(TreePiece::Closed(level));
            } else {
                for shape in level.shapes() {
                    pieces.push(TreePiece::Cones { shape, within: w[0].clone() });
                }
            }
        }
    }
    let certificates = pieces.iter().map(|p| certify(f, p)).collect::<Result<_, _>>()?;
    Ok(TreeCover { cardinality: sum_counts(&pieces), pieces, certificates })
}

impl TreeCover {
    /// Recheck every piece and that the pieces cover every shape.
    pub fn verify_symbolic(&self, f: &ThresholdMap) -> Result<bool, TreeError> {
        let space = f.space();
        let mut covered = ShapeSet::empty(space);
        for piece in &self.pieces {
            if !certify(f, piece)? {
                return Ok(false);
            }
            covered = match piece {
                TreePiece::Closed(p) => covered.union(p),
                TreePiece::Cones { shape, .. } => {
                    covered.union(&ShapeSet::from_shapes(space, std::slice::from_ref(shape))?)
                }
            };
        }
        Ok(covered.is_full() && sum_counts(&self.pieces) == self.cardinality)
    }

    /// Check the cover on every point of a truncated model: each piece
    /// (one per window point for a family) is closed, carries a continuous
    /// restriction, and together the pieces cover the window. Family members
    /// at limit-proxy points are only counted towards coverage.
    pub fn verify_truncated(&self, f: &ThresholdMap, depth: usize) -> Result<bool, TreeError> {
        let model = TruncatedModel::new(f.space().k(), depth)?;
        let n = f.space().threshold();
        let full = vec![true; model.len()];
        let mut covered = vec![false; model.len()];
        let check = |piece: &[bool], covered: &mut Vec<bool>| {
            for (c, &p) in covered.iter_mut().zip(piece) {
                *c = *c || p;
            }
            model.is_closed(piece) && !model.discontinuity(f, piece).contains(&true)
        };
        for piece in &self.pieces {
            match piece {
                TreePiece::Closed(p) => {
                    if !check(&model.restrict(p), &mut covered) {
                        return Ok(false);
                    }
                }
                TreePiece::Cones { shape, within } => {
                    let idx = f.space().index_of(shape)?;
                    let within_m = model.restrict(within);
                    for i in 0..model.len() {
                        let s = model.point(i);
                        if f.space().classify(&s) != idx {
                            continue;
                        }
                        let cone = model.neighbourhood(&s, n);
                        let piece: Vec<bool> = cone.iter().zip(&within_m).map(|(&a, &b)| a && b).collect();
                        if model.is_limit_proxy(&s) {
                            covered[i] = true;
                        } else if !check(&piece, &mut covered) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(covered == full)
    }
}

/// A discontinuity point together with a convergent sequence of points whose
/// values leave `U(f(limit))`. Any finite closed cover puts infinitely many
/// terms of the sequence into one piece; being closed, that piece contains
/// the limit, and the restriction to it is discontinuous there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PigeonholeCertificate {
    /// Shape of the limit point `s`.
    pub limit: Shape,
    /// A shape extending `limit⌢⋆`; for each `j ≥ N` the subtree of `s⌢j`
    /// holds a point of this shape.
    pub witness: Shape,
    pub limit_value: usize,
    pub witness_value: usize,
}

impl PigeonholeCertificate {
    /// Replay the argument in a truncated model: the sequence
    /// `y_j = s⌢j⌢…` for `N ≤ j < T` has the witness shape, enters every
    /// `B_m(s)`, and takes values outside `U(f(s))`.
    pub fn verify_truncated(&self, f: &ThresholdMap, depth: usize) -> Result<bool, TreeError> {
        let n = f.space().threshold();
        if depth <= n {
            return Ok(false);
        }
        let model = TruncatedModel::new(f.space().k(), depth)?;
        let s = self.limit.representative(n);
        let witness_idx = f.space().index_of(&self.witness)?;
        let target = f.codomain().min_open(f.eval(&s));
        let tail = self.witness.representative(n);
        if tail.len() <= s.len() || tail[..s.len()] != s[..] {
            return Ok(false);
        }
        let sequence: Vec<Vec<usize>> = (n..depth)
            .map(|j| {
                let mut y = tail.clone();
                y[s.len()] = j;
                y
            })
            .collect();
        let values_escape = sequence.iter().all(|y| {
            f.space().classify(y) == witness_idx && !target.contains(f.eval(y)) && f.eval(y) == self.witness_value
        });
        let converges = (0..depth).all(|m| {
            let nb = model.neighbourhood(&s, m);
            sequence.iter().any(|y| nb[model.index(y)])
        });
        Ok(values_escape && converges && f.eval(&s) == self.limit_value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecClosed {
    pub cardinality: Cardinality,
    /// Lower bound for the infinite case.
    pub pigeonhole: Option<PigeonholeCertificate>,
    /// Upper bound: a cover realizing the cardinality.
    pub cover: TreeCover,
}

/// Exact closed decomposition number for heights up to 2: one piece for a
/// continuous map, countably many otherwise.
pub fn tree_dec_closed(f: &ThresholdMap) -> Result<TreeDecClosed, TreeError> {
    let k = f.space().k();
    if k > 2 {
        return Err(TreeError::HeightExceeded { k, max: 2 });
    }
    let cover = tree_decomposition(f)?;
    let full = ShapeSet::full(f.space());
    match f.discontinuity_witness(&full) {
        None => Ok(TreeDecClosed { cardinality: Cardinality::Finite(1), pigeonhole: None, cover }),
        Some((limit, witness)) => {
            let space = f.space();
            let pigeonhole = PigeonholeCertificate {
                limit_value: f.value(space.index_of(&limit)?),
                witness_value: f.value(space.index_of(&witness)?),
                limit,
                witness,
            };
            Ok(TreeDecClosed { cardinality: Cardinality::CountablyInfinite, pigeonhole: Some(pigeonhole), cover })
        }
    }
}

impl TreeDecClosed {
    pub fn verify_truncated(&self, f: &ThresholdMap, depth: usize) -> Result<bool, TreeError> {
        let model = TruncatedModel::new(f.space().k(), depth)?;
        let cover_ok = self.cover.verify_truncated(f, depth)?;
        Ok(match (&self.cardinality, &self.pigeonhole) {
            (Cardinality::Finite(1), None) => {
                cover_ok && !model.discontinuity(f, &vec![true; model.len()]).contains(&true)
            }
            (Cardinality::CountablyInfinite, Some(p)) => {
                cover_ok && self.cover.cardinality == Cardinality::CountablyInfinite && p.verify_truncated(f, depth)?
            }
            _ => false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::FiniteSpace;
    use crate::treespace::ShapeSpace;

    fn sp(k: usize, n: usize) -> ShapeSpace {
        ShapeSpace::new(k, n).unwrap()
    }

    fn root_indicator(k: usize, n: usize) -> ThresholdMap {
        ThresholdMap::from_fn(sp(k, n), FiniteSpace::discrete(2), |s| usize::from(s.is_empty())).unwrap()
    }

    #[test]
    fn continuous_map_is_one_piece() {
        let f = ThresholdMap::constant(sp(2, 2), FiniteSpace::discrete(2), 0).unwrap();
        let c = tree_decomposition(&f).unwrap();
        assert_eq!(c.pieces, vec![TreePiece::Closed(ShapeSet::full(f.space()))]);
        assert_eq!(c.cardinality, Cardinality::Finite(1));
        assert!(c.verify_symbolic(&f).unwrap());
        let d = tree_dec_closed(&f).unwrap();
        assert_eq!(d.cardinality, Cardinality::Finite(1));
        assert!(d.verify_truncated(&f, 7).unwrap());
    }

    #[test]
    fn root_indicator_needs_leaf_singletons() {
        let f = root_indicator(1, 2);
        let c = tree_decomposition(&f).unwrap();
        assert_eq!(c.cardinality, Cardinality::CountablyInfinite);
        assert!(c.pieces.contains(&TreePiece::Closed(ShapeSet::of_lengths(f.space(), |l| l == 0))));
        assert!(c.pieces.iter().any(|p| matches!(p, TreePiece::Cones { shape, .. } if shape.has_star())));
        assert!(c.certificates.iter().all(|&b| b));
        assert!(c.verify_symbolic(&f).unwrap());
        for depth in [3, 7] {
            assert!(c.verify_truncated(&f, depth).unwrap());
        }
        let d = tree_dec_closed(&f).unwrap();
        assert_eq!(d.cardinality, Cardinality::CountablyInfinite);
        assert!(d.verify_truncated(&f, 7).unwrap());
    }

    #[test]
    fn upper_levels_indicator() {
        let f = ThresholdMap::from_fn(sp(2, 2), FiniteSpace::discrete(2), |s| usize::from(s.len() <= 1)).unwrap();
        let c = tree_decomposition(&f).unwrap();
        assert_eq!(c.cardinality, Cardinality::CountablyInfinite);
        assert!(c.pieces.contains(&TreePiece::Closed(ShapeSet::of_lengths(f.space(), |l| l <= 1))));
        assert!(c.verify_symbolic(&f).unwrap());
        assert!(c.verify_truncated(&f, 7).unwrap());
        let d = tree_dec_closed(&f).unwrap();
        assert_eq!(d.cardinality, Cardinality::CountablyInfinite);
        assert!(d.verify_truncated(&f, 7).unwrap());
    }

    #[test]
    fn height_three_only_bounds() {
        let f = root_indicator(3, 1);
        assert!(matches!(tree_dec_closed(&f), Err(TreeError::HeightExceeded { k: 3, max: 2 })));
        let c = tree_decomposition(&f).unwrap();
        assert!(c.verify_symbolic(&f).unwrap());
        assert!(c.verify_truncated(&f, 4).unwrap());
    }

    #[test]
    fn forged_certificate_fails() {
        let f = root_indicator(1, 2);
        let mut d = tree_dec_closed(&f).unwrap();
        d.pigeonhole.as_mut().unwrap().witness = "(0)".parse().unwrap();
        assert!(!d.verify_truncated(&f, 7).unwrap());
    }
}
