use std::collections::VecDeque;

use super::{subset_guard, FiniteMap, MapError};
use crate::finspace::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    /// `D_{α+1} = D(f|D_α)`
    Plain,
    /// `D̃_{α+1} = cl(D(f|D̃_α))`
    Closed,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Plain => "plain",
            SeriesKind::Closed => "closed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<S> {
    /// The series reaches `∅` at position `index`.
    Holds { index: usize },
    /// The series stabilizes at a non-empty `kernel`.
    Fails { kernel: S },
}

/// A discontinuity series. `sets` starts at the whole domain and strictly
/// decreases; it ends at `∅` or at the stabilized kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport<S = PointSet> {
    pub kind: SeriesKind,
    pub sets: Vec<S>,
    pub verdict: Verdict<S>,
}

impl<S> SeriesReport<S> {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Holds { .. })
    }

    pub fn index(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Holds { index } => Some(index),
            Verdict::Fails { .. } => None,
        }
    }

    pub fn kernel(&self) -> Option<&S> {
        match &self.verdict {
            Verdict::Holds { .. } => None,
            Verdict::Fails { kernel } => Some(kernel),
        }
    }
}

/// Run `step` from `start` until the set is empty or stops changing.
pub fn iterate_series<S, E, F>(kind: SeriesKind, start: S, is_empty: E, mut step: F) -> SeriesReport<S>
where
    S: Clone + PartialEq,
    E: Fn(&S) -> bool,
    F: FnMut(&S) -> S,
{
    let mut sets = vec![start];
    loop {
        let cur = sets.last().unwrap();
        if is_empty(cur) {
            let index = sets.len() - 1;
            return SeriesReport { kind, sets, verdict: Verdict::Holds { index } };
        }
        let next = step(cur);
        if next == *cur {
            let kernel = next;
            return SeriesReport { kind, sets, verdict: Verdict::Fails { kernel } };
        }
        sets.push(next);
    }
}

pub fn sc_series(f: &FiniteMap) -> SeriesReport {
    iterate_series(SeriesKind::Plain, f.dom().full(), |s| s.is_empty(), |&s| f.disc(s))
}

pub fn wd_series(f: &FiniteMap) -> SeriesReport {
    iterate_series(SeriesKind::Closed, f.dom().full(), |s| s.is_empty(), |&s| {
        f.dom().closure(f.disc(s))
    })
}

/// Recompute every step of a report and check its certificate: a holding
/// series must end at `∅`; a failing one must end at a non-empty kernel `S`
/// with `D(f|S) = S` (plain) or `S` closed and `cl D(f|S) = S` (closed).
pub fn verify_report(f: &FiniteMap, report: &SeriesReport) -> bool {
    let step = |s: PointSet| match report.kind {
        SeriesKind::Plain => f.disc(s),
        SeriesKind::Closed => f.dom().closure(f.disc(s)),
    };
    if report.sets.first() != Some(&f.dom().full()) {
        return false;
    }
    if !report.sets.windows(2).all(|w| step(w[0]) == w[1] && w[1] != w[0]) {
        return false;
    }
    let last = *report.sets.last().unwrap();
    match report.verdict {
        Verdict::Holds { index } => last.is_empty() && index + 1 == report.sets.len(),
        Verdict::Fails { kernel } => {
            let closed_ok = report.kind == SeriesKind::Plain || f.dom().is_closed(kernel);
            kernel == last && !kernel.is_empty() && closed_ok && step(kernel) == kernel
        }
    }
}

/// Every non-empty subset of the domain has a continuity point of the
/// restriction.
pub fn sc_bruteforce(f: &FiniteMap) -> Result<bool, MapError> {
    subset_guard(f.dom().n())?;
    Ok(f.dom()
        .full()
        .subsets()
        .all(|a| a.is_empty() || f.disc(a) != a))
}

/// For every subspace `Z`, `D(f|Z)` is nowhere dense in `Z`.
pub fn wd_bruteforce(f: &FiniteMap) -> Result<bool, MapError> {
    subset_guard(f.dom().n())?;
    let x = f.dom();
    Ok(x.full().subsets().all(|z| {
        let dense_part = x.closure_in(z, f.disc(z));
        x.interior_in(z, dense_part).is_empty()
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VanishingCheck {
    /// Every step satisfies `X_{α+1} ⊇ D(f|X_α)`, with closed terms if required.
    pub valid: bool,
    pub length: usize,
    /// `sc(f)` or `wd(f)` from the series.
    pub index: Option<usize>,
    /// Shortest valid series by exhaustive search, when the domain is small
    /// enough.
    pub minimal_length: Option<usize>,
    /// The shortest valid length agrees with the index; `None` when the
    /// search was skipped.
    pub index_is_minimal: Option<bool>,
}

/// Check a candidate vanishing series `X_0 = X ⊋ X_1 ⊋ … ⊋ X_β = ∅`.
/// Structural defects are errors; failing the containment or closedness
/// conditions just makes the series invalid.
pub fn verify_vanishing_series(
    f: &FiniteMap,
    sets: &[PointSet],
    closed_required: bool,
) -> Result<VanishingCheck, MapError> {
    let x = f.dom();
    let Some((&first, _)) = sets.split_first() else {
        return Err(MapError::MalformedSeries("no terms".into()));
    };
    if first != x.full() {
        return Err(MapError::MalformedSeries(format!("first term {first} is not the whole domain")));
    }
    if !sets.last().unwrap().is_empty() {
        return Err(MapError::MalformedSeries("last term is not empty".into()));
    }
    for (i, w) in sets.windows(2).enumerate() {
        if !w[1].is_subset(w[0]) || w[1] == w[0] {
            return Err(MapError::MalformedSeries(format!(
                "term {} = {} does not strictly shrink {}",
                i + 1,
                w[1],
                w[0]
            )));
        }
    }
    let valid = sets.windows(2).all(|w| f.disc(w[0]).is_subset(w[1]))
        && (!closed_required || sets.iter().all(|&s| x.is_closed(s)));
    let index = if closed_required { wd_series(f) } else { sc_series(f) }.index();
    let (minimal_length, index_is_minimal) = match subset_guard(x.n()) {
        Ok(()) => {
            let m = min_vanishing_length(f, closed_required)?;
            (m, Some(m == index))
        }
        Err(_) => (None, None),
    };
    Ok(VanishingCheck {
        valid,
        length: sets.len() - 1,
        index,
        minimal_length,
        index_is_minimal,
    })
}

/// Length of the shortest valid vanishing series, by breadth-first search
/// over subsets. `None` when no valid series exists.
pub fn min_vanishing_length(f: &FiniteMap, closed_required: bool) -> Result<Option<usize>, MapError> {
    let x = f.dom();
    subset_guard(x.n())?;
    let mut dist = vec![u32::MAX; 1usize << x.n()];
    let start = x.full();
    dist[start.bits() as usize] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let d = dist[s.bits() as usize];
        if s.is_empty() {
            return Ok(Some(d as usize));
        }
        let forced = f.disc(s);
        for extra in (s - forced).subsets() {
            let t = forced | extra;
            if t == s || (closed_required && !x.is_closed(t)) {
                continue;
            }
            let slot = &mut dist[t.bits() as usize];
            if *slot == u32::MAX {
                *slot = d + 1;
                queue.push_back(t);
            }
        }
    }
    Ok(None)
}
