//! `F_σ` and `G_δ` witnesses for shape sets. The tree space is countable and
//! every singleton is closed, so every subset is `F_σ` (a union of
//! singletons) and, by complement, `G_δ`. In particular every threshold map
//! is `G_δ`-measurable.

use super::{Shape, ShapeSet, TreeError, TruncatedModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FsigmaPart {
    Closed(ShapeSet),
    /// `{{s} : s has this shape}`
    Singletons(Shape),
}

fn fsigma_parts(a: &ShapeSet) -> Vec<FsigmaPart> {
    if a.is_closed() {
        vec![FsigmaPart::Closed(a.clone())]
    } else {
        a.shapes().into_iter().map(FsigmaPart::Singletons).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurabilityCertificate {
    pub set: ShapeSet,
    /// `A` as a countable union of closed sets.
    pub fsigma: Vec<FsigmaPart>,
    /// The complement as a countable union of closed sets `C_i`; then
    /// `A = ⋂ (X ∖ C_i)` is a countable intersection of open sets.
    pub gdelta_complement: Vec<FsigmaPart>,
}

pub fn tree_measurability_certificate(a: &ShapeSet) -> MeasurabilityCertificate {
    MeasurabilityCertificate {
        set: a.clone(),
        fsigma: fsigma_parts(a),
        gdelta_complement: fsigma_parts(&a.complement()),
    }
}

fn union_of(parts: &[FsigmaPart], like: &ShapeSet) -> Result<ShapeSet, TreeError> {
    let mut out = ShapeSet::empty(like.space());
    for p in parts {
        out = match p {
            FsigmaPart::Closed(c) => out.union(c),
            FsigmaPart::Singletons(s) => out.union(&ShapeSet::from_shapes(like.space(), std::slice::from_ref(s))?),
        };
    }
    Ok(out)
}

impl MeasurabilityCertificate {
    pub fn verify_symbolic(&self) -> Result<bool, TreeError> {
        let parts_closed = self
            .fsigma
            .iter()
            .chain(&self.gdelta_complement)
            .all(|p| match p {
                FsigmaPart::Closed(c) => c.is_closed(),
                FsigmaPart::Singletons(_) => true,
            });
        let union = union_of(&self.fsigma, &self.set)?;
        let removed = union_of(&self.gdelta_complement, &self.set)?;
        Ok(parts_closed && union.same_points(&self.set) && removed.complement().same_points(&self.set))
    }

    /// Evaluate both witnesses on a truncated model: the closed parts (each
    /// singleton separately, except at limit proxies) are closed, their union is `A`, and the
    /// intersection of the complements of the `G_δ` parts is `A`.
    pub fn verify_truncated(&self, depth: usize) -> Result<bool, TreeError> {
        let space = self.set.space();
        let model = TruncatedModel::new(space.k(), depth)?;
        let target = model.restrict(&self.set);
        let realize = |parts: &[FsigmaPart]| -> Result<Option<Vec<bool>>, TreeError> {
            let mut union = vec![false; model.len()];
            for p in parts {
                match p {
                    FsigmaPart::Closed(c) => {
                        let cm = model.restrict(c);
                        if !model.is_closed(&cm) {
                            return Ok(None);
                        }
                        union.iter_mut().zip(&cm).for_each(|(u, &b)| *u = *u || b);
                    }
                    FsigmaPart::Singletons(s) => {
                        let idx = space.index_of(s)?;
                        for i in 0..model.len() {
                            if space.classify(&model.point(i)) == idx {
                                let mut single = vec![false; model.len()];
                                single[i] = true;
                                if !model.is_limit_proxy(&model.point(i)) && !model.is_closed(&single) {
                                    return Ok(None);
                                }
                                union[i] = true;
                            }
                        }
                    }
                }
            }
            Ok(Some(union))
        };
        let Some(fs) = realize(&self.fsigma)? else { return Ok(false) };
        let Some(removed) = realize(&self.gdelta_complement)? else { return Ok(false) };
        let gdelta: Vec<bool> = removed.iter().map(|&b| !b).collect();
        Ok(fs == target && gdelta == target)
    }
}
