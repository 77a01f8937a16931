use std::collections::BTreeMap;
use std::sync::Arc;

use super::MinerError;
use crate::finspace::{FiniteSpace, PointSet, SpaceError};
use crate::guards::Guards;
use crate::mapcalc::FiniteMap;

/// Number of labeled topologies on `n` points, `n = 0..=6`.
pub const LABELED_COUNTS: [usize; 7] = [1, 1, 4, 29, 355, 6942, 209_527];
/// Number of topologies on `n` points up to homeomorphism, `n = 0..=6`.
pub const ISO_COUNTS: [usize; 7] = [1, 1, 3, 9, 33, 139, 718];

#[derive(Clone, Debug)]
pub struct SpaceEnumeration {
    pub n: usize,
    pub up_to_iso: bool,
    pub spaces: Vec<Arc<FiniteSpace>>,
    /// Labeled topologies visited, whether or not they were reduced.
    pub labeled_count: usize,
}

/// Every preorder on `n` points, built one point at a time. A preorder on
/// `0..=m` is a preorder on `0..m` together with the down-set `D` and up-set
/// `U` of the new point, subject to `d ≤ u` for all `d ∈ D`, `u ∈ U`; each
/// labeled preorder arises exactly once.
fn labeled_preorders(n: usize) -> Vec<Vec<PointSet>> {
    let mut layer: Vec<Vec<PointSet>> = vec![Vec::new()];
    for m in 0..n {
        let old = PointSet::full(m);
        let mut next = Vec::new();
        for up in &layer {
            let down_of = |x: usize| (0..m).filter(|&w| up[w].contains(x)).collect::<PointSet>();
            let is_down = |d: PointSet| d.iter().all(|x| down_of(x).is_subset(d));
            let is_up = |u: PointSet| u.iter().all(|x| up[x].is_subset(u));
            for d in old.subsets().filter(|&d| is_down(d)) {
                for u in old.subsets().filter(|&u| is_up(u)) {
                    if !d.iter().all(|x| u.is_subset(up[x])) {
                        continue;
                    }
                    let mut grown = up.clone();
                    for x in d.iter() {
                        grown[x].insert(m);
                    }
                    grown.push(u.with(m));
                    next.push(grown);
                }
            }
        }
        layer = next;
    }
    layer
}

pub fn enumerate_spaces(n: usize, up_to_iso: bool) -> Result<SpaceEnumeration, MinerError> {
    let limit = Guards::current().enumerate_points;
    if n > limit {
        return Err(SpaceError::SizeGuardExceeded {
            what: "exhaustive space enumeration",
            size: n as u64,
            limit: limit as u64,
        }
        .into());
    }
    let labeled: Vec<FiniteSpace> = labeled_preorders(n).into_iter().map(FiniteSpace::from_up_unchecked).collect();
    let labeled_count = labeled.len();
    let spaces = if up_to_iso {
        let mut classes = BTreeMap::new();
        for s in &labeled {
            let cf = s.canonical_form()?;
            classes.entry(cf.digest()).or_insert_with(|| s.relabel(&cf.permutation()));
        }
        classes.into_values().map(Arc::new).collect()
    } else {
        labeled.into_iter().map(Arc::new).collect()
    };
    Ok(SpaceEnumeration { n, up_to_iso, spaces, labeled_count })
}

/// All spaces with between 1 and `max` points.
pub(crate) fn spaces_up_to(max: usize, up_to_iso: bool) -> Result<Vec<Arc<FiniteSpace>>, MinerError> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(enumerate_spaces(n, up_to_iso)?.spaces);
    }
    Ok(out)
}

/// `|Y|^|X|`, or `None` on overflow.
pub(crate) fn map_count(x: usize, y: usize) -> Option<u64> {
    (y as u64).checked_pow(x as u32)
}

pub(crate) fn map_guard(x: usize, y: usize) -> Result<u64, MinerError> {
    let limit = Guards::current().map_count;
    match map_count(x, y) {
        Some(c) if c <= limit => Ok(c),
        other => Err(SpaceError::SizeGuardExceeded {
            what: "map enumeration",
            size: other.unwrap_or(u64::MAX),
            limit,
        }
        .into()),
    }
}

/// Table number `idx` in base `|Y|`, most significant digit first.
pub(crate) fn table_of(idx: u64, nx: usize, ny: usize) -> Vec<usize> {
    let mut table = vec![0; nx];
    let mut rest = idx;
    for slot in table.iter_mut().rev() {
        *slot = (rest % ny as u64) as usize;
        rest /= ny as u64;
    }
    table
}

pub(crate) fn index_of_table(table: &[usize], ny: usize) -> u64 {
    table.iter().fold(0, |acc, &v| acc * ny as u64 + v as u64)
}

/// Every total map `X → Y` in lexicographic order of tables, optionally only
/// the bijections.
pub fn enumerate_maps(
    x: &Arc<FiniteSpace>,
    y: &Arc<FiniteSpace>,
    bijective_only: bool,
) -> Result<Vec<FiniteMap>, MinerError> {
    let count = map_guard(x.n(), y.n())?;
    if bijective_only && x.n() != y.n() {
        return Ok(Vec::new());
    }
    Ok((0..count)
        .map(|i| FiniteMap::from_parts(x.clone(), y.clone(), table_of(i, x.n(), y.n())))
        .filter(|f| !bijective_only || f.is_bijective())
        .collect())
}

/// Lexicographically least table in the orbit of `table` under
/// `f ↦ β ∘ f ∘ α⁻¹` for automorphisms `α` of the domain and `β` of the
/// codomain (as `perm[old] = new`).
pub(crate) fn canonical_table(table: &[usize], dom_auts: &[Vec<usize>], cod_auts: &[Vec<usize>]) -> Vec<usize> {
    let mut best = table.to_vec();
    let mut cand = vec![0; table.len()];
    for a in dom_auts {
        for b in cod_auts {
            for (x, &v) in table.iter().enumerate() {
                cand[a[x]] = b[v];
            }
            if cand < best {
                best.clone_from(&cand);
            }
        }
    }
    best
}
