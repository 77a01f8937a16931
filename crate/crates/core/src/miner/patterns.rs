//! Searches for counterexamples and extremal instances among maps between
//! small spaces, one representative per isomorphism class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::campaign::{index_text, series_text, thread_pool};
use super::enumerate::{canonical_table, index_of_table, map_guard, spaces_up_to, table_of};
use super::{Finding, FindingKind, Instance, MinerError, MinerReport};
use crate::finspace::FiniteSpace;
use crate::mapcalc::{sc_series, wd_series, FiniteMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    /// Scatteredly continuous but not weakly discontinuous.
    ScNotWd,
    /// Two scatteredly continuous maps whose composite is not.
    ScCompositeNotSc,
    /// Both indices defined and `sc < wd`.
    ScLtWd,
    /// Largest `sc` index for each domain size.
    MaxScIndex,
}

impl Pattern {
    pub const ALL: [Pattern; 4] = [Pattern::ScNotWd, Pattern::ScCompositeNotSc, Pattern::ScLtWd, Pattern::MaxScIndex];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::ScNotWd => "sc-not-wd",
            Pattern::ScCompositeNotSc => "sc-comp-not-sc",
            Pattern::ScLtWd => "sc-lt-wd",
            Pattern::MaxScIndex => "max-sc-index",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern {
    type Err = MinerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pattern::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| MinerError::UnknownPattern(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MineBounds {
    pub max_x: usize,
    pub max_y: usize,
    /// Codomain size of the second map, for composition patterns.
    pub max_z: usize,
    /// Restrict composition patterns to regular middle spaces.
    pub regular_middle_only: bool,
}

struct SpaceInfo {
    space: Arc<FiniteSpace>,
    auts: Vec<Vec<usize>>,
}

fn spaces(max: usize) -> Result<Vec<SpaceInfo>, MinerError> {
    Ok(spaces_up_to(max, true)?
        .into_iter()
        .map(|space| SpaceInfo { auts: space.automorphisms(), space })
        .collect())
}

/// Tables of maps `X → Y`, one per orbit under the automorphisms of both
/// spaces, in increasing order.
fn canonical_maps(x: &SpaceInfo, y: &SpaceInfo) -> Result<Vec<Vec<usize>>, MinerError> {
    let count = map_guard(x.space.n(), y.space.n())?;
    Ok((0..count)
        .map(|i| table_of(i, x.space.n(), y.space.n()))
        .filter(|t| canonical_table(t, &x.auts, &y.auts) == *t)
        .collect())
}

fn map_of(x: &SpaceInfo, y: &SpaceInfo, table: Vec<usize>) -> FiniteMap {
    FiniteMap::from_parts(x.space.clone(), y.space.clone(), table)
}

fn map_finding(kind: FindingKind, pattern: Pattern, f: FiniteMap, extra: &str) -> Finding {
    let (sc, wd) = (sc_series(&f), wd_series(&f));
    let mut certificate = format!(
        "sc={},wd={},sc-series={},wd-series={}",
        index_text(sc.index()),
        index_text(wd.index()),
        series_text(&sc),
        series_text(&wd)
    );
    if !extra.is_empty() {
        certificate = format!("{extra},{certificate}");
    }
    Finding { kind, check: pattern.name().to_string(), instance: Instance::Map(f), certificate }
}

/// Least table in the orbit of the pair `(f, g)` under automorphisms of
/// all three spaces.
fn canonical_pair(f: &[usize], g: &[usize], x: &SpaceInfo, y: &SpaceInfo, z: &SpaceInfo) -> (Vec<usize>, Vec<usize>) {
    let mut best = (f.to_vec(), g.to_vec());
    let (mut cf, mut cg) = (vec![0; f.len()], vec![0; g.len()]);
    for a in &x.auts {
        for b in &y.auts {
            for c in &z.auts {
                for (p, &v) in f.iter().enumerate() {
                    cf[a[p]] = b[v];
                }
                for (p, &v) in g.iter().enumerate() {
                    cg[b[p]] = c[v];
                }
                if (&cf, &cg) < (&best.0, &best.1) {
                    best = (cf.clone(), cg.clone());
                }
            }
        }
    }
    best
}

fn mine_maps(
    pattern: Pattern,
    bounds: &MineBounds,
    pool: &rayon::ThreadPool,
    report: &mut MinerReport,
) -> Result<(), MinerError> {
    let xs = spaces(bounds.max_x)?;
    let ys = spaces(bounds.max_y)?;
    let pairs: Vec<(usize, usize)> = (0..xs.len()).flat_map(|i| (0..ys.len()).map(move |j| (i, j))).collect();
    let per_pair: Vec<(u64, Vec<(FiniteMap, Option<usize>)>)> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let tables = canonical_maps(&xs[i], &ys[j])?;
                let visited = tables.len() as u64;
                let mut hits = Vec::new();
                for t in tables {
                    let f = map_of(&xs[i], &ys[j], t);
                    let (sc, wd) = (sc_series(&f).index(), wd_series(&f).index());
                    let keep = match pattern {
                        Pattern::ScNotWd => sc.is_some() && wd.is_none(),
                        Pattern::ScLtWd => matches!((sc, wd), (Some(a), Some(b)) if a < b),
                        _ => sc.is_some(),
                    };
                    if keep {
                        hits.push((f, sc));
                    }
                }
                Ok((visited, hits))
            })
            .collect::<Result<_, MinerError>>()
    })?;
    report.counts.insert("space-pairs".into(), pairs.len() as u64);
    report.counts.insert("maps".into(), per_pair.iter().map(|p| p.0).sum());
    let hits: Vec<(FiniteMap, Option<usize>)> = per_pair.into_iter().flat_map(|p| p.1).collect();
    match pattern {
        Pattern::MaxScIndex => {
            let mut best: BTreeMap<usize, (usize, String, FiniteMap)> = BTreeMap::new();
            for (f, sc) in hits {
                let sc = sc.expect("filtered");
                let key = f.to_string();
                let n = f.dom().n();
                let better = match best.get(&n) {
                    None => true,
                    Some((b, k, _)) => sc > *b || (sc == *b && key < *k),
                };
                if better {
                    best.insert(n, (sc, key, f));
                }
            }
            for (n, (sc, _, f)) in best {
                report.notes.insert(format!("max-sc-index:{n}"), sc.to_string());
                report.findings.push(map_finding(FindingKind::Extremal, pattern, f, &format!("size={n}")));
            }
        }
        _ => {
            for (f, _) in hits {
                let kind = match pattern {
                    Pattern::ScNotWd => FindingKind::Counterexample,
                    _ => FindingKind::Extremal,
                };
                let regular = format!("codomain-regular={}", f.cod().properties().regular);
                report.findings.push(map_finding(kind, pattern, f, &regular));
            }
        }
    }
    Ok(())
}

fn mine_compositions(bounds: &MineBounds, pool: &rayon::ThreadPool, report: &mut MinerReport) -> Result<(), MinerError> {
    let top = bounds.max_x.max(bounds.max_y).max(bounds.max_z);
    let all = spaces(top)?;
    let size = |i: usize| all[i].space.n();
    let within = |m: usize| (0..all.len()).filter(|&i| size(i) <= m).collect::<Vec<_>>();
    let (xs, ys, zs) = (within(bounds.max_x), within(bounds.max_y), within(bounds.max_z));
    let ys: Vec<usize> = ys
        .into_iter()
        .filter(|&j| !bounds.regular_middle_only || all[j].space.properties().regular)
        .collect();
    let (ys, zs) = (&ys, &zs);
    let triples: Vec<(usize, usize, usize)> = xs
        .iter()
        .flat_map(|&i| ys.iter().flat_map(move |&j| zs.iter().map(move |&k| (i, j, k))))
        .collect();
    let per_triple: Vec<(u64, Vec<Finding>)> = pool.install(|| {
        triples
            .par_iter()
            .map(|&(i, j, k)| {
                let (x, y, z) = (&all[i], &all[j], &all[k]);
                let fs: Vec<(Vec<usize>, bool)> = (0..map_guard(x.space.n(), y.space.n())?)
                    .map(|a| {
                        let t = table_of(a, x.space.n(), y.space.n());
                        let sc = sc_series(&map_of(x, y, t.clone())).holds();
                        (t, sc)
                    })
                    .collect();
                let gs: Vec<(Vec<usize>, bool)> = (0..map_guard(y.space.n(), z.space.n())?)
                    .map(|b| {
                        let t = table_of(b, y.space.n(), z.space.n());
                        let sc = sc_series(&map_of(y, z, t.clone())).holds();
                        (t, sc)
                    })
                    .collect();
                let hs: Vec<bool> = (0..map_guard(x.space.n(), z.space.n())?)
                    .map(|c| sc_series(&map_of(x, z, table_of(c, x.space.n(), z.space.n()))).holds())
                    .collect();
                let mut seen = BTreeSet::new();
                let mut visited = 0;
                let mut out = Vec::new();
                for (ft, _) in fs.iter().filter(|p| p.1) {
                    for (gt, _) in gs.iter().filter(|p| p.1) {
                        visited += 1;
                        let h: Vec<usize> = ft.iter().map(|&v| gt[v]).collect();
                        if hs[index_of_table(&h, z.space.n()) as usize] {
                            continue;
                        }
                        let canon = canonical_pair(ft, gt, x, y, z);
                        if !seen.insert(canon.clone()) {
                            continue;
                        }
                        let f = map_of(x, y, canon.0);
                        let g = map_of(y, z, canon.1);
                        let h = f.then(&g)?;
                        out.push(Finding {
                            kind: FindingKind::Counterexample,
                            check: Pattern::ScCompositeNotSc.name().to_string(),
                            certificate: format!(
                                "middle-regular={},f-sc={},g-sc={},h-sc-kernel={}",
                                y.space.properties().regular,
                                index_text(sc_series(&f).index()),
                                index_text(sc_series(&g).index()),
                                sc_series(&h).kernel().map_or_else(String::new, |k| k.to_string())
                            ),
                            instance: Instance::Composable(f, g),
                        });
                    }
                }
                Ok((visited, out))
            })
            .collect::<Result<_, MinerError>>()
    })?;
    report.counts.insert("space-triples".into(), triples.len() as u64);
    report.counts.insert("sc-pairs".into(), per_triple.iter().map(|p| p.0).sum());
    report.findings.extend(per_triple.into_iter().flat_map(|p| p.1));
    Ok(())
}

/// Collect every instance of `pattern` within `bounds`, spaces and maps
/// taken up to isomorphism. An empty result only means none exist within
/// the bounds.
pub fn mine(pattern: Pattern, bounds: &MineBounds, jobs: usize) -> Result<MinerReport, MinerError> {
    let start = Instant::now();
    let pool = thread_pool(jobs)?;
    let mut report = MinerReport { campaign: format!("mine:{pattern}"), ..Default::default() };
    report.bounds.insert("max-x".into(), bounds.max_x.to_string());
    report.bounds.insert("max-y".into(), bounds.max_y.to_string());
    match pattern {
        Pattern::ScCompositeNotSc => {
            report.bounds.insert("max-z".into(), bounds.max_z.to_string());
            report.bounds.insert("regular-middle-only".into(), bounds.regular_middle_only.to_string());
            mine_compositions(bounds, &pool, &mut report)?;
        }
        _ => mine_maps(pattern, bounds, &pool, &mut report)?,
    }
    report.sort_findings();
    report.notes.insert(
        "witnesses".into(),
        if report.findings.is_empty() { "none-within-bounds".into() } else { report.findings.len().to_string() },
    );
    report.elapsed = start.elapsed();
    Ok(report)
}
