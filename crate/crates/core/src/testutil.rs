//! Brute-force generators shared by unit tests.

use crate::finspace::FiniteSpace;

/// Every labeled topology on `n` points, by filtering all relations for
/// transitivity.
pub fn all_preorders(n: usize) -> Vec<FiniteSpace> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let chosen = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p);
        if let Ok(s) = FiniteSpace::from_preorder(n, chosen) {
            out.push(s);
        }
    }
    out
}
