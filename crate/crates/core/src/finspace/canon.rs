//! Canonical labelings of finite spaces, for isomorph rejection.
//!
//! Points are first split into cells by iterated colour refinement on the
//! preorder. Points whose transposition is an automorphism are
//! interchangeable, so inside a cell only the distinct arrangements of
//! interchangeable classes are tried. The canonical code is the smallest
//! relation matrix over all remaining labelings.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{FiniteSpace, PointSet, SpaceError};
use crate::guards::Guards;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    /// `order[i]` is the original point placed at canonical position `i`.
    pub order: Vec<usize>,
    /// Row `i` holds the canonical positions `j` with `le(order[i], order[j])`.
    pub code: Vec<u64>,
}

impl CanonicalForm {
    /// Isomorphism-invariant digest: point count and the relation rows in hex.
    pub fn digest(&self) -> String {
        let mut s = format!("{}", self.code.len());
        for row in &self.code {
            write!(s, ":{row:x}").unwrap();
        }
        s
    }

    /// `perm[old] = new`, suitable for [`FiniteSpace::relabel`].
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm = vec![0; self.order.len()];
        for (pos, &x) in self.order.iter().enumerate() {
            perm[x] = pos;
        }
        perm
    }
}

impl FiniteSpace {
    /// Iterated colour refinement; returns a dense colour per point. Colours
    /// are ranks of sorted invariant keys, so they do not depend on labels.
    pub fn refined_colours(&self) -> Vec<usize> {
        let n = self.n();
        let mut colour: Vec<usize> = {
            let keys: Vec<(usize, usize)> = (0..n)
                .map(|x| (self.min_open(x).len(), self.point_closure(x).len()))
                .collect();
            rank(&keys)
        };
        let mut classes = distinct(&colour);
        loop {
            let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
                .map(|x| {
                    let mut ups: Vec<usize> =
                        self.min_open(x).without(x).iter().map(|y| colour[y]).collect();
                    let mut downs: Vec<usize> =
                        self.point_closure(x).without(x).iter().map(|y| colour[y]).collect();
                    ups.sort_unstable();
                    downs.sort_unstable();
                    (colour[x], ups, downs)
                })
                .collect();
            let next = rank(&keys);
            let next_classes = distinct(&next);
            colour = next;
            if next_classes == classes {
                return colour;
            }
            classes = next_classes;
        }
    }

    fn swap_is_automorphism(&self, x: usize, y: usize) -> bool {
        let mut perm: Vec<usize> = (0..self.n()).collect();
        perm.swap(x, y);
        self.relabel(&perm) == *self
    }

    /// Canonical labeling. Fails only when the number of labelings left after
    /// refinement exceeds the configured guard.
    pub fn canonical_form(&self) -> Result<CanonicalForm, SpaceError> {
        let n = self.n();
        let colour = self.refined_colours();

        // cells in colour order
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            cells.entry(colour[x]).or_default().push(x);
        }

        // interchangeable classes inside each cell, members in increasing order
        let mut cell_classes: Vec<Vec<Vec<usize>>> = Vec::new();
        for members in cells.values() {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for &x in members {
                match classes
                    .iter_mut()
                    .find(|c| self.swap_is_automorphism(c[0], x))
                {
                    Some(c) => c.push(x),
                    None => classes.push(vec![x]),
                }
            }
            cell_classes.push(classes);
        }

        let total = cell_classes
            .iter()
            .map(|classes| multinomial(classes.iter().map(Vec::len)))
            .try_fold(1u64, |acc, m| m.and_then(|m| acc.checked_mul(m)));
        let limit = Guards::current().canonical_labelings;
        match total {
            Some(t) if t <= limit => {}
            _ => {
                return Err(SpaceError::SizeGuardExceeded {
                    what: "canonical labelings",
                    size: total.unwrap_or(u64::MAX),
                    limit,
                })
            }
        }

        // one multiset arrangement per cell, iterated as an odometer
        let mut arrangements: Vec<Vec<usize>> = cell_classes
            .iter()
            .map(|classes| {
                classes
                    .iter()
                    .enumerate()
                    .flat_map(|(i, c)| std::iter::repeat_n(i, c.len()))
                    .collect()
            })
            .collect();

        let mut best: Option<CanonicalForm> = None;
        loop {
            let mut order = Vec::with_capacity(n);
            for (arr, classes) in arrangements.iter().zip(&cell_classes) {
                let mut used = vec![0usize; classes.len()];
                for &c in arr {
                    order.push(classes[c][used[c]]);
                    used[c] += 1;
                }
            }
            let code = self.code_for(&order);
            if best.as_ref().is_none_or(|b| code < b.code) {
                best = Some(CanonicalForm { order, code });
            }
            // advance odometer
            let mut advanced = false;
            for arr in arrangements.iter_mut().rev() {
                if next_permutation(arr) {
                    advanced = true;
                    break;
                }
                // next_permutation wrapped it back to sorted order
            }
            if !advanced {
                break;
            }
        }
        Ok(best.unwrap_or(CanonicalForm { order: Vec::new(), code: Vec::new() }))
    }

    fn code_for(&self, order: &[usize]) -> Vec<u64> {
        let mut pos = vec![0usize; self.n()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        order
            .iter()
            .map(|&x| self.min_open(x).map_points(&pos).bits())
            .collect()
    }

    /// The canonically relabeled copy of this space.
    pub fn canonical_space(&self) -> Result<FiniteSpace, SpaceError> {
        let cf = self.canonical_form()?;
        Ok(self.relabel(&cf.permutation()))
    }

    /// All automorphisms as permutations `perm[old] = new`, in lexicographic order.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let colour = self.refined_colours();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = PointSet::EMPTY;
        self.extend_automorphism(0, &colour, &mut perm, &mut used, &mut out);
        out
    }

    fn extend_automorphism(
        &self,
        x: usize,
        colour: &[usize],
        perm: &mut Vec<usize>,
        used: &mut PointSet,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.n();
        if x == n {
            out.push(perm.clone());
            return;
        }
        for img in 0..n {
            if used.contains(img) || colour[img] != colour[x] {
                continue;
            }
            // relation with already-mapped points must be preserved
            let consistent = (0..x).all(|y| {
                self.le(x, y) == self.le(img, perm[y]) && self.le(y, x) == self.le(perm[y], img)
            }) && self.le(x, x) == self.le(img, img);
            if !consistent {
                continue;
            }
            perm[x] = img;
            used.insert(img);
            self.extend_automorphism(x + 1, colour, perm, used, out);
            used.remove(img);
            perm[x] = usize::MAX;
        }
    }
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

fn distinct(colour: &[usize]) -> usize {
    let mut c = colour.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn multinomial<I: Iterator<Item = usize>>(parts: I) -> Option<u64> {
    let mut total = 0u64;
    let mut acc = 1u64;
    for p in parts {
        for i in 1..=p as u64 {
            total += 1;
            acc = acc.checked_mul(total)? / i;
        }
    }
    Some(acc)
}

/// Lexicographic successor; on the last arrangement, resets to sorted order
/// and returns `false`.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
