//! Record sets for the `space`, `map` and `tree` reports. Each builder also
//! says whether every certificate it produced re-verified and every check
//! held.

use std::fmt::Write;

use super::{Block, Document, RecordSet};
use crate::finspace::{FiniteSpace, PointSet};
use crate::mapcalc::{
    ac_qc_sets, check_composition_bounds, dec_arbitrary, dec_closed, gdelta_measurable, sc_series,
    verify_report, verify_vanishing_series, well_order_witness, wd_series, CheckOutcome, CoverMode, FiniteMap,
    MapSummary, SeriesKind, SeriesReport, Verdict,
};
use crate::miner::map_checks;
use crate::treespace::{
    stable_sequence_cover, tree_dec_closed, tree_decomposition, tree_measurability_certificate, tree_series,
    ShapeSet, StableSequence, ThresholdMap, TruncatedModel,
};
use crate::Error;

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "failed"
    }
}

fn index_text(i: Option<usize>) -> String {
    i.map_or("none".to_string(), |i| i.to_string())
}

fn sets_text(sets: &[PointSet]) -> String {
    sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";")
}

fn shapes_text(s: &ShapeSet) -> String {
    let shapes: Vec<String> = s.shapes().iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", shapes.join(","))
}

pub fn space_records(name: &str, x: &FiniteSpace) -> RecordSet {
    let mut rs = RecordSet::default();
    let p = x.properties();
    let cb = x.cantor_bendixson();
    let pairs: Vec<String> = x.strict_pairs().iter().map(|(a, b)| format!("{a}<{b}")).collect();
    rs.push(
        "space",
        [
            ("name", name.to_string()),
            ("points", x.n().to_string()),
            ("strict", if pairs.is_empty() { "-".to_string() } else { pairs.join(",") }),
            ("opens", x.open_sets().len().to_string()),
        ],
    );
    rs.push(
        "axioms",
        [
            ("name", name),
            ("t0", yes(p.t0)),
            ("t1", yes(p.t1)),
            ("t2", yes(p.t2)),
            ("regular", yes(p.regular)),
            ("partition", yes(p.partition)),
        ],
    );
    rs.push(
        "scattered",
        [
            ("name", name.to_string()),
            ("scattered", yes(cb.scattered).to_string()),
            ("cb-height", cb.height.to_string()),
            ("kernel", cb.kernel.to_string()),
            ("closed-chain", x.closed_chain_length().to_string()),
        ],
    );
    rs
}

fn series_record(rs: &mut RecordSet, name: &str, label: &str, r: &SeriesReport, valid: bool) {
    let (index, kernel) = match &r.verdict {
        Verdict::Holds { index } => (index.to_string(), "-".to_string()),
        Verdict::Fails { kernel } => ("none".to_string(), kernel.to_string()),
    };
    rs.push(
        "series",
        [
            ("map", name.to_string()),
            ("kind", label.to_string()),
            ("index", index),
            ("kernel", kernel),
            ("terms", sets_text(&r.sets)),
            ("certificate", ok(valid).to_string()),
        ],
    );
}

/// Everything computed about one finite map, plus the series and covers
/// given for it in the same document.
pub fn map_records(doc: &Document, name: &str, f: &FiniteMap) -> Result<(RecordSet, bool), Error> {
    let mut rs = RecordSet::default();
    let mut good = true;
    let table = f.table().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
    rs.push(
        "map",
        [
            ("name", name.to_string()),
            ("X", f.dom().to_string()),
            ("Y", f.cod().to_string()),
            ("table", table),
            ("continuous", yes(f.is_continuous()).to_string()),
        ],
    );
    let full = f.dom().full();
    let (ac, qc) = ac_qc_sets(f);
    rs.push(
        "points",
        [
            ("map", name.to_string()),
            ("continuity", f.continuity_set(full)?.to_string()),
            ("discontinuity", f.discontinuity_set(full)?.to_string()),
            ("almost-continuity", ac.to_string()),
            ("quasi-continuity", qc.to_string()),
        ],
    );
    for (label, r) in [("sc", sc_series(f)), ("wd", wd_series(f))] {
        let valid = verify_report(f, &r);
        good &= valid;
        series_record(&mut rs, name, label, &r, valid);
    }
    let dec = dec_arbitrary(f)?;
    let decc = dec_closed(f)?;
    for (label, c) in [("dec", &dec), ("dec-closed", &decc)] {
        let valid = c.verify(f);
        good &= valid;
        let witness = c.impossibility.map_or("-".to_string(), |(a, b)| format!("{a}<{b}"));
        rs.push(
            "decomposition",
            [
                ("map", name.to_string()),
                ("kind", label.to_string()),
                ("value", c.cardinality.to_string()),
                ("pieces", if c.pieces.is_empty() { "-".to_string() } else { sets_text(&c.pieces) }),
                ("non-monotone-pair", witness),
                ("certificate", ok(valid).to_string()),
            ],
        );
    }
    let g = gdelta_measurable(f);
    rs.push(
        "gdelta",
        [
            ("map", name.to_string()),
            ("measurable", yes(g.measurable).to_string()),
            ("failing-open", g.failing_open.map_or("-".to_string(), |v| v.to_string())),
            ("opens-checked", g.opens_checked.to_string()),
        ],
    );
    match well_order_witness(f) {
        Some(w) => {
            let valid = w.verify_tails(f);
            good &= valid;
            let order = w.order.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            rs.push("witness", [("map", name), ("order", &order), ("certificate", ok(valid))]);
        }
        None => rs.push("witness", [("map", name), ("order", "none"), ("certificate", "-")]),
    }
    for (i, c) in map_checks(f)?.iter().enumerate() {
        good &= c.outcome != CheckOutcome::Violated;
        rs.push(
            "check",
            [("map", name.to_string()), ("n", format!("{i:02}")), ("id", c.id.to_string()), ("outcome", c.outcome.name().to_string())],
        );
    }
    for (i, block) in doc.blocks.iter().enumerate() {
        match block {
            Block::Series { map, kind, terms } if map == name => {
                let v = verify_vanishing_series(f, terms, *kind == SeriesKind::Closed)?;
                good &= v.valid;
                rs.push(
                    "given-series",
                    [
                        ("map", name.to_string()),
                        ("block", i.to_string()),
                        ("kind", kind.name().to_string()),
                        ("length", v.length.to_string()),
                        ("valid", yes(v.valid).to_string()),
                        ("minimal", v.index_is_minimal.map_or("-", yes).to_string()),
                    ],
                );
            }
            Block::Cover { map, mode, pieces } if map == name => {
                let union = pieces.iter().fold(PointSet::EMPTY, |a, &p| a | p);
                let valid = union == full
                    && pieces.iter().all(|&p| {
                        f.is_continuous_on(p) && (*mode == CoverMode::Arbitrary || f.dom().is_closed(p))
                    });
                good &= valid;
                rs.push(
                    "given-cover",
                    [
                        ("map", name.to_string()),
                        ("block", i.to_string()),
                        ("mode", mode.name().to_string()),
                        ("pieces", pieces.len().to_string()),
                        ("valid", yes(valid).to_string()),
                    ],
                );
            }
            _ => {}
        }
    }
    Ok((rs, good))
}

fn summary_fields(label: &str, s: &MapSummary) -> [(String, String); 5] {
    [
        ("map".to_string(), label.to_string()),
        ("sc".to_string(), index_text(s.sc)),
        ("wd".to_string(), index_text(s.wd)),
        ("continuous".to_string(), yes(s.continuous).to_string()),
        ("dec-closed".to_string(), s.decc.to_string()),
    ]
}

/// Indices of `f`, `g` and `g ∘ f` and the composition checks on them.
pub fn compose_records(f: &FiniteMap, g: &FiniteMap) -> Result<(RecordSet, bool), Error> {
    let report = check_composition_bounds(f, g)?;
    let mut rs = RecordSet::default();
    let mut table = String::new();
    for (i, v) in report.composite.table().iter().enumerate() {
        if i > 0 {
            table.push(',');
        }
        write!(table, "{v}").unwrap();
    }
    rs.push(
        "composite",
        [
            ("X", f.dom().to_string()),
            ("Y", f.cod().to_string()),
            ("Z", g.cod().to_string()),
            ("table", table),
            ("middle-regular", yes(report.middle_regular).to_string()),
        ],
    );
    for (label, s) in [("f", &report.f), ("g", &report.g), ("g.f", &report.h)] {
        rs.push("summary", summary_fields(label, s));
    }
    for (i, c) in report.checks.iter().enumerate() {
        rs.push("check", [("n", format!("{i:02}")), ("id", c.id.to_string()), ("outcome", c.outcome.name().to_string())]);
    }
    let clean = report.violations().next().is_none();
    Ok((rs, clean))
}

fn tree_map_records(rs: &mut RecordSet, name: &str, f: &ThresholdMap, depth: usize) -> Result<bool, Error> {
    let space = f.space();
    let mut good = true;
    let full = ShapeSet::full(space);
    let disc = f.discontinuity_set(&full);
    rs.push(
        "treemap",
        [
            ("name", name.to_string()),
            ("k", space.k().to_string()),
            ("N", space.threshold().to_string()),
            ("Y", f.codomain().to_string()),
            ("shapes", space.len().to_string()),
            ("continuous", yes(f.is_continuous()).to_string()),
            ("discontinuity", shapes_text(&disc)),
        ],
    );

    let model = TruncatedModel::new(space.k(), depth)?;
    let (plain, closed) = tree_series(f);
    let mut agree = model.discontinuity(f, &vec![true; model.len()]) == model.restrict(&disc)
        && model.closure(&model.restrict(&disc)) == model.restrict(&disc.closure());
    for (label, r) in [("sc", &plain), ("wd", &closed)] {
        for w in r.sets.windows(2) {
            let mut step = model.discontinuity(f, &model.restrict(&w[0]));
            if r.kind == SeriesKind::Closed {
                step = model.closure(&step);
            }
            agree &= step == model.restrict(&w[1]);
        }
        let terms: Vec<String> = r.sets.iter().map(shapes_text).collect();
        rs.push(
            "tree-series",
            [
                ("map", name.to_string()),
                ("kind", label.to_string()),
                ("index", index_text(r.index())),
                ("terms", terms.join(";")),
            ],
        );
    }
    good &= agree;
    rs.push("model", [("map", name.to_string()), ("depth", depth.to_string()), ("agrees", ok(agree).to_string())]);

    let cover = tree_decomposition(f)?;
    let cover_ok = cover.verify_symbolic(f)? && cover.verify_truncated(f, depth)?;
    good &= cover_ok;
    rs.push(
        "tree-cover",
        [
            ("map", name.to_string()),
            ("entries", cover.pieces.len().to_string()),
            ("pieces", cover.cardinality.to_string()),
            ("certificate", ok(cover_ok).to_string()),
        ],
    );
    if space.k() <= 2 {
        let dc = tree_dec_closed(f)?;
        let dc_ok = dc.verify_truncated(f, depth)?;
        good &= dc_ok;
        let pigeonhole = dc.pigeonhole.as_ref().map_or("-".to_string(), |p| format!("{}<-{}", p.limit, p.witness));
        rs.push(
            "tree-dec-closed",
            [
                ("map", name.to_string()),
                ("value", dc.cardinality.to_string()),
                ("pigeonhole", pigeonhole),
                ("certificate", ok(dc_ok).to_string()),
            ],
        );
    } else {
        rs.push("tree-dec-closed", [("map", name), ("value", "unsupported-height"), ("certificate", "-")]);
    }

    let mut measurable = true;
    for y in 0..f.codomain().n() {
        let target = f.codomain().min_open(y);
        let pre = ShapeSet::from_fn(space, |i| target.contains(f.value(i)));
        let cert = tree_measurability_certificate(&pre);
        measurable &= cert.verify_symbolic()? && cert.verify_truncated(depth)?;
    }
    good &= measurable;
    rs.push("tree-gdelta", [("map", name), ("measurable", "yes"), ("certificate", ok(measurable))]);
    Ok(good)
}

fn sequence_records(rs: &mut RecordSet, name: &str, seq: &StableSequence, depth: usize) -> Result<bool, Error> {
    let cover = stable_sequence_cover(seq, None)?;
    let truncated = cover.verify_truncated(seq, depth)?;
    for (n, s) in cover.sets.iter().enumerate() {
        rs.push(
            "stable-set",
            [
                ("sequence", name.to_string()),
                ("n", format!("{n:03}")),
                ("closed", yes(cover.closed[n]).to_string()),
                ("continuous", yes(cover.continuous[n]).to_string()),
                ("shapes", shapes_text(s)),
            ],
        );
    }
    rs.push(
        "stable-cover",
        [
            ("sequence", name.to_string()),
            ("increasing", yes(cover.increasing).to_string()),
            ("members-checked", cover.members_checked.to_string()),
            ("pieces", cover.cardinality.to_string()),
            ("depth", depth.to_string()),
            ("certificate", ok(cover.valid() && truncated).to_string()),
        ],
    );
    Ok(cover.valid() && truncated)
}

/// Every tree map and sequence of a document. The truncation depth defaults
/// to five past each object's threshold.
pub fn tree_records(doc: &Document, depth: Option<usize>) -> Result<(RecordSet, bool), Error> {
    let mut rs = RecordSet::default();
    let mut good = true;
    for (name, f) in doc.treemaps() {
        let t = depth.unwrap_or(f.space().threshold() + 5);
        good &= tree_map_records(&mut rs, &name, f, t)?;
    }
    for (name, seq) in doc.sequences() {
        let t = depth.unwrap_or(seq.space().threshold() + 5);
        good &= sequence_records(&mut rs, name, seq, t)?;
    }
    Ok((rs, good))
}
