//! The verification campaign: every implemented statement, checked on every
//! map between small spaces and on every composable pair of such maps.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::{index_of_table, map_guard, spaces_up_to, table_of};
use super::{EnumerationTask, Finding, FindingKind, Instance, MinerError, MinerReport, Tally};
use crate::finspace::FiniteSpace;
use crate::mapcalc::{
    composition_checks, dec_arbitrary, dec_closed, decomposition_bound_checks, gdelta_measurable, sc_bruteforce,
    sc_series, verify_report, verify_vanishing_series, wd_bruteforce, wd_series, well_order_witness, Cardinality,
    CheckOutcome, CheckResult, FiniteMap, MapSummary, SeriesReport,
};

/// Per-map checks, in evaluation order.
pub const MAP_CHECKS: [&str; 17] = [
    "oracle-sc-series",
    "oracle-wd-series",
    "wd-implies-sc",
    "sc-implies-wd-regular-codomain",
    "sc-index-le-wd-index",
    "wd-index-le-closed-chain-length",
    "well-order-witness",
    "vanishing-series-minimal-sc",
    "vanishing-series-minimal-wd",
    "scattered-iff-bijections-sc",
    "gdelta-iff-continuous",
    "piecewise-implies-gdelta",
    "decc-dichotomy",
    "dec-cover-verifies",
    "decc-wd-pseudochar-bound",
    "decc-par-pseudochar-bound",
    "decc-chain-length-bound",
];

/// Per-pair checks on `g ∘ f`, in the order of [`composition_checks`].
pub const COMPOSITION_CHECKS: [&str; 6] = [
    "comp-wd-wd",
    "comp-wd-sc",
    "comp-sc-sc-regular-middle",
    "comp-sc-index-bound",
    "comp-wd-index-bound",
    "comp-decc-bound",
];

/// Name of the generator behind sampled instances.
pub const PRNG_NAME: &str = "ChaCha8";

/// What the per-map checks need to know about the two spaces.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PairContext {
    x_scattered: bool,
    x_t0: bool,
    y_scattered: bool,
    y_regular: bool,
    chain: usize,
}

impl PairContext {
    pub(crate) fn of(x: &FiniteSpace, y: &FiniteSpace) -> Self {
        PairContext {
            x_scattered: x.is_scattered(),
            x_t0: x.is_t0(),
            y_scattered: y.is_scattered(),
            y_regular: y.properties().regular,
            chain: x.closed_chain_length(),
        }
    }
}

pub(crate) struct MapEval {
    pub checks: Vec<CheckResult>,
    pub summary: MapSummary,
    pub sc: SeriesReport,
    pub wd: SeriesReport,
}

fn from_bool(ok: bool) -> CheckOutcome {
    if ok {
        CheckOutcome::Holds
    } else {
        CheckOutcome::Violated
    }
}

fn implication(premise: bool, conclusion: bool) -> CheckOutcome {
    if premise {
        from_bool(conclusion)
    } else {
        CheckOutcome::NotApplicable
    }
}

/// A valid series of minimal length equal to the index, or no valid series
/// at all when the index is undefined.
fn vanishing_ok(f: &FiniteMap, report: &SeriesReport, closed: bool) -> Result<bool, MinerError> {
    if !report.holds() {
        return Ok(crate::mapcalc::min_vanishing_length(f, closed)?.is_none());
    }
    let v = verify_vanishing_series(f, &report.sets, closed)?;
    Ok(v.valid && Some(v.length) == v.index && v.index_is_minimal != Some(false))
}

pub(crate) fn evaluate_map(f: &FiniteMap, ctx: &PairContext) -> Result<MapEval, MinerError> {
    use CheckOutcome::*;
    let x = f.dom();
    let sc = sc_series(f);
    let wd = wd_series(f);
    let (sc_ok, wd_ok) = (sc.holds(), wd.holds());
    let decc = dec_closed(f)?;
    let continuous = f.is_continuous();
    let summary = MapSummary { sc: sc.index(), wd: wd.index(), continuous, decc: decc.cardinality };
    let gdelta = gdelta_measurable(f);
    let dec = dec_arbitrary(f)?;

    let witness = well_order_witness(f);
    let witness_ok = match &witness {
        Some(w) => sc_ok && w.verify_tails(f) && w.verify_all_subsets(f)?,
        None => !sc_ok,
    };
    let dichotomy = match decc.cardinality {
        Cardinality::Finite(1) => continuous && decc.verify(f),
        Cardinality::None => !continuous && decc.verify(f),
        _ => false,
    };
    let mut outcomes = vec![
        from_bool(sc_ok == sc_bruteforce(f)? && verify_report(f, &sc)),
        from_bool(wd_ok == wd_bruteforce(f)? && verify_report(f, &wd)),
        implication(wd_ok, sc_ok),
        match (sc_ok, ctx.y_regular) {
            (false, _) => NotApplicable,
            (true, false) => HypothesisNotMet,
            (true, true) => from_bool(wd_ok),
        },
        implication(wd_ok, sc.index() <= wd.index()),
        implication(wd_ok, wd.index().is_some_and(|w| w <= ctx.chain)),
        from_bool(witness_ok),
        from_bool(vanishing_ok(f, &sc, false)?),
        from_bool(vanishing_ok(f, &wd, true)?),
        match (f.is_bijective() && ctx.y_scattered, ctx.x_scattered, ctx.x_t0) {
            (false, _, _) => NotApplicable,
            (true, true, _) => from_bool(sc_ok),
            // an sc bijection need not come from a scattered domain without T0
            (true, false, false) => HypothesisNotMet,
            (true, false, true) => from_bool(!sc_ok),
        },
        from_bool(gdelta.measurable == continuous),
        implication(decc.cardinality != Cardinality::None, gdelta.measurable),
        from_bool(dichotomy),
        from_bool(dec.verify(f) && dec.cardinality <= decc.cardinality),
    ];
    outcomes.extend(decomposition_bound_checks(&summary, x).into_iter().map(|c| c.outcome));
    let checks = MAP_CHECKS
        .iter()
        .zip(outcomes)
        .map(|(&id, outcome)| CheckResult { id, outcome })
        .collect();
    Ok(MapEval { checks, summary, sc, wd })
}

/// Every map-level check on one map, in the order of [`MAP_CHECKS`].
pub fn map_checks(f: &FiniteMap) -> Result<Vec<CheckResult>, MinerError> {
    Ok(evaluate_map(f, &PairContext::of(f.dom(), f.cod()))?.checks)
}

/// Deterministic accumulator for one shard of work.
#[derive(Default)]
struct Shard {
    tallies: Vec<Tally>,
    violations: Vec<Finding>,
    /// Per check: number of gated instances and the least one by position.
    gated: BTreeMap<&'static str, (u64, (Vec<usize>, Instance))>,
    instances: u64,
}

impl Shard {
    fn new(checks: usize) -> Self {
        Shard { tallies: vec![Tally::default(); checks], ..Default::default() }
    }

    fn gate(&mut self, id: &'static str, key: Vec<usize>, instance: impl FnOnce() -> Instance) {
        match self.gated.get_mut(id) {
            Some(slot) => {
                slot.0 += 1;
                if key < slot.1 .0 {
                    slot.1 = (key, instance());
                }
            }
            None => {
                self.gated.insert(id, (1, (key, instance())));
            }
        }
    }

    fn merge(mut self, other: Shard) -> Shard {
        if self.tallies.is_empty() {
            return other;
        }
        for (a, b) in self.tallies.iter_mut().zip(&other.tallies) {
            a.merge(b);
        }
        self.violations.extend(other.violations);
        for (id, (count, best)) in other.gated {
            match self.gated.get_mut(id) {
                Some(slot) => {
                    slot.0 += count;
                    if best.0 < slot.1 .0 {
                        slot.1 = best;
                    }
                }
                None => {
                    self.gated.insert(id, (count, best));
                }
            }
        }
        self.instances += other.instances;
        self
    }
}

fn map_certificate(eval: &MapEval) -> String {
    format!(
        "sc={},wd={},decc={},sc-series={},wd-series={}",
        index_text(eval.summary.sc),
        index_text(eval.summary.wd),
        eval.summary.decc,
        series_text(&eval.sc),
        series_text(&eval.wd)
    )
}

pub(crate) fn index_text(i: Option<usize>) -> String {
    i.map_or_else(|| "none".into(), |v| v.to_string())
}

pub(crate) fn series_text(r: &SeriesReport) -> String {
    r.sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(">")
}

/// Evaluate every map `X → Y` into a shard; `key` locates the pair.
fn map_shard(x: &Arc<FiniteSpace>, y: &Arc<FiniteSpace>, key: &[usize]) -> Result<(Shard, Vec<MapSummary>), MinerError> {
    let count = map_guard(x.n(), y.n())?;
    let ctx = PairContext::of(x, y);
    let mut shard = Shard::new(MAP_CHECKS.len());
    let mut summaries = Vec::with_capacity(count as usize);
    for i in 0..count {
        let f = FiniteMap::from_parts(x.clone(), y.clone(), table_of(i, x.n(), y.n()));
        let eval = evaluate_map(&f, &ctx)?;
        for (t, c) in shard.tallies.iter_mut().zip(&eval.checks) {
            t.add(c.outcome);
            if c.outcome == CheckOutcome::Violated {
                shard.violations.push(Finding {
                    kind: FindingKind::Violation,
                    check: c.id.to_string(),
                    instance: Instance::Map(f.clone()),
                    certificate: map_certificate(&eval),
                });
            }
        }
        let mut k = key.to_vec();
        k.push(i as usize);
        if eval.summary.sc.is_some() && eval.summary.wd.is_none() && !ctx.y_regular {
            shard.gate("sc-implies-wd-regular-codomain", k.clone(), || Instance::Map(f.clone()));
        }
        let bijection_gated = eval
            .checks
            .iter()
            .any(|c| c.id == "scattered-iff-bijections-sc" && c.outcome == CheckOutcome::HypothesisNotMet);
        if eval.summary.sc.is_some() && bijection_gated {
            shard.gate("scattered-iff-bijections-sc", k, || Instance::Map(f.clone()));
        }
        shard.instances += 1;
        summaries.push(eval.summary);
    }
    Ok((shard, summaries))
}

fn summaries_only(x: &Arc<FiniteSpace>, y: &Arc<FiniteSpace>) -> Result<Vec<MapSummary>, MinerError> {
    let count = map_guard(x.n(), y.n())?;
    (0..count)
        .map(|i| Ok(MapSummary::of(&FiniteMap::from_parts(x.clone(), y.clone(), table_of(i, x.n(), y.n())))?))
        .collect()
}

/// Summaries of all maps between each pair of spaces, indexed by table.
struct SummaryTable {
    n: usize,
    cells: Vec<Option<Vec<MapSummary>>>,
}

impl SummaryTable {
    fn get(&self, a: usize, b: usize) -> &[MapSummary] {
        self.cells[a * self.n + b].as_deref().expect("summaries computed")
    }

    fn has(&self, a: usize, b: usize) -> bool {
        self.cells[a * self.n + b].is_some()
    }

    fn set(&mut self, a: usize, b: usize, s: Vec<MapSummary>) {
        self.cells[a * self.n + b] = Some(s);
    }
}

fn triple_shard(spaces: &[Arc<FiniteSpace>], (i, j, k): (usize, usize, usize), table: &SummaryTable) -> Shard {
    let (x, y, z) = (&spaces[i], &spaces[j], &spaces[k]);
    let (sf, sg, sh) = (table.get(i, j), table.get(j, k), table.get(i, k));
    let middle_regular = y.properties().regular;
    let mut shard = Shard::new(COMPOSITION_CHECKS.len());
    let f_tables: Vec<Vec<usize>> = (0..sf.len() as u64).map(|a| table_of(a, x.n(), y.n())).collect();
    let g_tables: Vec<Vec<usize>> = (0..sg.len() as u64).map(|b| table_of(b, y.n(), z.n())).collect();
    let mut h = vec![0; x.n()];
    for (a, ft) in f_tables.iter().enumerate() {
        for (b, gt) in g_tables.iter().enumerate() {
            for (slot, &v) in h.iter_mut().zip(ft) {
                *slot = gt[v];
            }
            let c = index_of_table(&h, z.n()) as usize;
            let checks = composition_checks(&sf[a], &sg[b], &sh[c], middle_regular);
            let pair = || {
                Instance::Composable(
                    FiniteMap::from_parts(x.clone(), y.clone(), ft.clone()),
                    FiniteMap::from_parts(y.clone(), z.clone(), gt.clone()),
                )
            };
            for (t, check) in shard.tallies.iter_mut().zip(&checks) {
                t.add(check.outcome);
                if check.outcome == CheckOutcome::Violated {
                    shard.violations.push(Finding {
                        kind: FindingKind::Violation,
                        check: check.id.to_string(),
                        instance: pair(),
                        certificate: format!(
                            "sc={}/{}/{},wd={}/{}/{},decc={}/{}/{}",
                            index_text(sf[a].sc),
                            index_text(sg[b].sc),
                            index_text(sh[c].sc),
                            index_text(sf[a].wd),
                            index_text(sg[b].wd),
                            index_text(sh[c].wd),
                            sf[a].decc,
                            sg[b].decc,
                            sh[c].decc
                        ),
                    });
                }
            }
            if checks[2].outcome == CheckOutcome::HypothesisNotMet && sh[c].sc.is_none() {
                shard.gate("comp-sc-sc-regular-middle", vec![i, j, k, a, b], pair);
            }
            shard.instances += 1;
        }
    }
    shard
}

fn random_space(rng: &mut ChaCha8Rng, max_points: usize) -> Result<FiniteSpace, MinerError> {
    let n = rng.gen_range(1..=max_points);
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(0.25) {
                pairs.push((a, b));
            }
        }
    }
    Ok(FiniteSpace::from_relation_closure(n, pairs)?)
}

/// Sample number `i` of the stream for `seed`: a random pair of spaces and a
/// random map between them. Streams are independent of scheduling.
pub fn sample_map(seed: u64, i: u64, max_points: usize) -> Result<FiniteMap, MinerError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    let x = random_space(&mut rng, max_points)?;
    let y = random_space(&mut rng, max_points)?;
    let table = (0..x.n()).map(|_| rng.gen_range(0..y.n())).collect();
    Ok(FiniteMap::new(x, y, table)?)
}

fn sample_shard(seed: u64, i: u64, max_points: usize) -> Result<Shard, MinerError> {
    let f = sample_map(seed, i, max_points)?;
    let ctx = PairContext::of(f.dom(), f.cod());
    let eval = evaluate_map(&f, &ctx)?;
    let mut shard = Shard::new(MAP_CHECKS.len());
    for (t, c) in shard.tallies.iter_mut().zip(&eval.checks) {
        t.add(c.outcome);
        if c.outcome == CheckOutcome::Violated {
            shard.violations.push(Finding {
                kind: FindingKind::Violation,
                check: c.id.to_string(),
                instance: Instance::Map(f.clone()),
                certificate: map_certificate(&eval),
            });
        }
    }
    shard.instances = 1;
    Ok(shard)
}

pub(crate) fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, MinerError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| MinerError::ThreadPool(e.to_string()))
}

fn reduce(shards: Vec<Shard>) -> Shard {
    shards.into_iter().fold(Shard::default(), Shard::merge)
}

fn record(report: &mut MinerReport, ids: &[&'static str], shard: Shard, count_key: &str) {
    for (id, t) in ids.iter().zip(&shard.tallies) {
        report.tallies.entry((*id).to_string()).or_default().merge(t);
    }
    *report.counts.entry(count_key.to_string()).or_default() += shard.instances;
    report.findings.extend(shard.violations);
    for (id, (count, (_, instance))) in shard.gated {
        *report.counts.entry(format!("gated:{id}")).or_default() += count;
        report.findings.push(Finding {
            kind: FindingKind::HypothesisGated,
            check: id.to_string(),
            certificate: gated_certificate(id, &instance),
            instance,
        });
    }
}

fn gated_certificate(id: &str, instance: &Instance) -> String {
    match instance {
        Instance::Map(f) if id == "scattered-iff-bijections-sc" => format!(
            "sc-series={},domain-kernel={},domain-t0=false",
            series_text(&sc_series(f)),
            f.dom().cantor_bendixson().kernel
        ),
        Instance::Map(f) => format!(
            "sc-series={},wd-kernel={},codomain-regular=false",
            series_text(&sc_series(f)),
            wd_series(f).kernel().map_or_else(String::new, |k| k.to_string())
        ),
        Instance::Composable(f, g) => {
            let h = f.then(g).expect("composable");
            format!(
                "{id}:f-sc={},g-sc={},h-kernel={},middle-regular=false",
                index_text(sc_series(f).index()),
                index_text(sc_series(g).index()),
                sc_series(&h).kernel().map_or_else(String::new, |k| k.to_string())
            )
        }
    }
}

/// Run every campaign within the task's bounds on `jobs` worker threads.
/// The report does not depend on `jobs`.
pub fn verify_suite(task: &EnumerationTask, jobs: usize) -> Result<MinerReport, MinerError> {
    let start = Instant::now();
    let mut report = MinerReport { campaign: "verify".into(), ..Default::default() };
    for (k, v) in [("max-x", task.max_x), ("max-y", task.max_y), ("max-z", task.max_z)] {
        report.bounds.insert(k.into(), v.to_string());
    }
    report.bounds.insert("up-to-iso".into(), task.up_to_iso.to_string());
    let pool = thread_pool(jobs)?;

    let top = task.max_x.max(task.max_y).max(task.max_z);
    let spaces = spaces_up_to(top, task.up_to_iso)?;
    let sizes: Vec<usize> = spaces.iter().map(|s| s.n()).collect();
    let within = |limit: usize| -> Vec<usize> { (0..spaces.len()).filter(|&i| sizes[i] <= limit).collect() };
    let (xs, ys, zs) = (within(task.max_x), within(task.max_y), within(task.max_z));
    for (key, list) in [("spaces-x", &xs), ("spaces-y", &ys), ("spaces-z", &zs)] {
        report.counts.insert(key.into(), list.len() as u64);
    }
    let pairs: Vec<(usize, usize)> = xs.iter().flat_map(|&i| ys.iter().map(move |&j| (i, j))).collect();
    report.counts.insert("space-pairs".into(), pairs.len() as u64);
    let results: Vec<(Shard, Vec<MapSummary>)> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| map_shard(&spaces[i], &spaces[j], &[i, j]))
            .collect::<Result<_, _>>()
    })?;

    let triples: Vec<(usize, usize, usize)> = if task.max_z == 0 {
        Vec::new()
    } else {
        let (ys, zs) = (&ys, &zs);
        xs.iter()
            .flat_map(|&i| ys.iter().flat_map(move |&j| zs.iter().map(move |&k| (i, j, k))))
            .collect()
    };
    let mut table = SummaryTable { n: spaces.len(), cells: vec![None; spaces.len() * spaces.len()] };
    let mut pair_shards = Vec::with_capacity(results.len());
    for (&(i, j), (shard, summaries)) in pairs.iter().zip(results) {
        table.set(i, j, summaries);
        pair_shards.push(shard);
    }
    record(&mut report, &MAP_CHECKS, reduce(pair_shards), "maps");

    if !triples.is_empty() {
        let mut needed: Vec<(usize, usize)> = triples
            .iter()
            .flat_map(|&(i, j, k)| [(j, k), (i, k)])
            .filter(|&(a, b)| !table.has(a, b))
            .collect();
        needed.sort_unstable();
        needed.dedup();
        let extra: Vec<Vec<MapSummary>> = pool.install(|| {
            needed
                .par_iter()
                .map(|&(a, b)| summaries_only(&spaces[a], &spaces[b]))
                .collect::<Result<_, _>>()
        })?;
        for (&(a, b), s) in needed.iter().zip(extra) {
            table.set(a, b, s);
        }
        report.counts.insert("space-triples".into(), triples.len() as u64);
        let shards: Vec<Shard> =
            pool.install(|| triples.par_iter().map(|&t| triple_shard(&spaces, t, &table)).collect());
        record(&mut report, &COMPOSITION_CHECKS, reduce(shards), "composable-pairs");
    }

    if let Some(s) = task.sampler {
        report.seed = Some(s.seed);
        report.prng = Some(PRNG_NAME);
        report.bounds.insert("sample-max-points".into(), s.max_points.to_string());
        let shards: Vec<Shard> = pool.install(|| {
            (0..s.count as u64)
                .into_par_iter()
                .map(|i| sample_shard(s.seed, i, s.max_points))
                .collect::<Result<_, _>>()
        })?;
        record(&mut report, &MAP_CHECKS, reduce(shards), "sampled-maps");
    }

    report.sort_findings();
    report.elapsed = start.elapsed();
    Ok(report)
}
