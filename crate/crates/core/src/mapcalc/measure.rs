use super::FiniteMap;
use crate::finspace::PointSet;

/// Almost-continuity and quasi-continuity points:
/// `x ∈ AC` iff `U(x) ⊆ cl f⁻¹(U(f(x)))`, and
/// `x ∈ QC` iff `U(x) ⊆ cl int f⁻¹(U(f(x)))`.
pub fn ac_qc_sets(f: &FiniteMap) -> (PointSet, PointSet) {
    let x = f.dom();
    let mut ac = PointSet::EMPTY;
    let mut qc = PointSet::EMPTY;
    for p in 0..x.n() {
        let pre = f.preimage(f.cod().min_open(f.apply(p)));
        if x.min_open(p).is_subset(x.closure(pre)) {
            ac.insert(p);
        }
        if x.min_open(p).is_subset(x.closure(x.interior(pre))) {
            qc.insert(p);
        }
    }
    (ac, qc)
}

/// Outcome of the `G_δ`-measurability test. A finite space has finitely
/// many open sets, so its `G_δ` sets are just the open sets and the test
/// reduces to continuity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GdeltaReport {
    pub measurable: bool,
    /// An open `V ⊆ Y` whose preimage is not open.
    pub failing_open: Option<PointSet>,
    pub opens_checked: usize,
}

pub fn gdelta_measurable(f: &FiniteMap) -> GdeltaReport {
    let opens = f.cod().open_sets();
    let failing_open = opens.iter().copied().find(|&v| !f.dom().is_open(f.preimage(v)));
    GdeltaReport {
        measurable: failing_open.is_none(),
        failing_open,
        opens_checked: opens.len(),
    }
}
