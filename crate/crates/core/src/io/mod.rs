//! The line-oriented document format and report rendering.
//!
//! A document is a sequence of blocks. Each block starts with a header line
//! and runs until the next header; blank lines and `#` comments are ignored.
//!
//! ```text
//! space S            # finite space on `points` points
//! points 2
//! le 0 1             # 0 lies in the closure of 1
//!
//! map f : S -> S     # value table, one line per point
//! val 0 1
//! val 1 0
//!
//! treemap g k=1 N=1 -> S
//! shape () 1         # `*` matches any coordinate; the most specific
//! shape * 0          # matching line wins
//!
//! sequence q -> S    # explicit members, then periodic phases
//! member g
//! phase g g
//!
//! series f plain     # a candidate series of subsets
//! term {0,1}
//! term {}
//!
//! cover f closed
//! piece {0,1}
//!
//! report verify
//! field maps 24
//! ```
//!
//! Missing transitivity in `le` lines is an error unless closure is
//! requested. Serialization emits one canonical form per document, so
//! parsing it back gives the same document.

mod parse;
mod render;
mod reports;

use std::fmt::Write;
use std::sync::Arc;

use thiserror::Error;

pub use parse::{parse, parse_with, ParseOptions};
pub use render::{report_human, report_records, Format, Record, RecordSet};
pub use reports::{compose_records, map_records, space_records, tree_records};

use crate::finspace::{FiniteSpace, PointSet};
use crate::mapcalc::{CoverMode, FiniteMap, SeriesKind};
use crate::treespace::{StableSequence, ThresholdMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: relation is not transitive: {x} <= {y} and {y} <= {z} but not {x} <= {z}")]
    NotTransitive { line: usize, x: usize, y: usize, z: usize },
    #[error("line {line}: {block} has no value for {missing}")]
    PartialTable { line: usize, block: String, missing: String },
    #[error("line {line}: value {value} is out of range for {size} points")]
    RangeError { line: usize, value: usize, size: usize },
    #[error("line {line}: unknown reference `{name}`")]
    UnknownSpaceRef { line: usize, name: String },
    #[error("line {line}: `{name}` is defined twice")]
    DuplicateName { line: usize, name: String },
    /// A size limit or guard was exceeded.
    #[error("line {line}: {message}")]
    Limit { line: usize, message: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::NotTransitive { line, .. }
            | ParseError::PartialTable { line, .. }
            | ParseError::RangeError { line, .. }
            | ParseError::UnknownSpaceRef { line, .. }
            | ParseError::DuplicateName { line, .. }
            | ParseError::Limit { line, .. } => *line,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Space { name: String, space: Arc<FiniteSpace> },
    Map { name: String, dom: String, cod: String, map: FiniteMap },
    TreeMap { name: Option<String>, cod: String, map: ThresholdMap },
    Sequence { name: String, cod: String, members: Vec<String>, phases: Vec<(String, String)>, sequence: StableSequence },
    Series { map: String, kind: SeriesKind, terms: Vec<PointSet> },
    Cover { map: String, mode: CoverMode, pieces: Vec<PointSet> },
    Report { name: String, fields: Vec<(String, String)> },
}

impl Block {
    pub fn kind(&self) -> &'static str {
        match self {
            Block::Space { .. } => "space",
            Block::Map { .. } => "map",
            Block::TreeMap { .. } => "treemap",
            Block::Sequence { .. } => "sequence",
            Block::Series { .. } => "series",
            Block::Cover { .. } => "cover",
            Block::Report { .. } => "report",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub blocks: Vec<Block>,
}

impl Document {
    pub fn space(&self, name: &str) -> Option<&Arc<FiniteSpace>> {
        self.blocks.iter().find_map(|b| match b {
            Block::Space { name: n, space } if n == name => Some(space),
            _ => None,
        })
    }

    pub fn map(&self, name: &str) -> Option<&FiniteMap> {
        self.maps().find(|(n, _)| *n == name).map(|(_, m)| m)
    }

    pub fn spaces(&self) -> impl Iterator<Item = (&str, &Arc<FiniteSpace>)> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Space { name, space } => Some((name.as_str(), space)),
            _ => None,
        })
    }

    pub fn maps(&self) -> impl Iterator<Item = (&str, &FiniteMap)> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Map { name, map, .. } => Some((name.as_str(), map)),
            _ => None,
        })
    }

    /// Tree maps with their names, or `treemap<i>` for unnamed ones.
    pub fn treemaps(&self) -> impl Iterator<Item = (String, &ThresholdMap)> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                Block::TreeMap { name, map, .. } => Some((name.clone(), map)),
                _ => None,
            })
            .enumerate()
            .map(|(i, (name, map))| (name.unwrap_or_else(|| format!("treemap{i}")), map))
    }

    pub fn sequences(&self) -> impl Iterator<Item = (&str, &StableSequence)> {
        self.blocks.iter().filter_map(|b| match b {
            Block::Sequence { name, sequence, .. } => Some((name.as_str(), sequence)),
            _ => None,
        })
    }
}

pub(crate) fn write_set(out: &mut String, s: PointSet) {
    write!(out, "{s}").unwrap();
}

/// Canonical text of a document.
pub fn serialize(doc: &Document) -> String {
    let mut out = String::new();
    for (i, block) in doc.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match block {
            Block::Space { name, space } => {
                writeln!(out, "space {name}\npoints {}", space.n()).unwrap();
                for (x, y) in space.strict_pairs() {
                    writeln!(out, "le {x} {y}").unwrap();
                }
            }
            Block::Map { name, dom, cod, map } => {
                writeln!(out, "map {name} : {dom} -> {cod}").unwrap();
                for (x, v) in map.table().iter().enumerate() {
                    writeln!(out, "val {x} {v}").unwrap();
                }
            }
            Block::TreeMap { name, cod, map } => {
                let space = map.space();
                out.push_str("treemap");
                if let Some(n) = name {
                    write!(out, " {n}").unwrap();
                }
                writeln!(out, " k={} N={} -> {cod}", space.k(), space.threshold()).unwrap();
                for (i, v) in map.values().iter().enumerate() {
                    writeln!(out, "shape {} {v}", space.shape(i)).unwrap();
                }
            }
            Block::Sequence { name, cod, members, phases, .. } => {
                writeln!(out, "sequence {name} -> {cod}").unwrap();
                for m in members {
                    writeln!(out, "member {m}").unwrap();
                }
                for (below, above) in phases {
                    writeln!(out, "phase {below} {above}").unwrap();
                }
            }
            Block::Series { map, kind, terms } => {
                writeln!(out, "series {map} {}", kind.name()).unwrap();
                for t in terms {
                    out.push_str("term ");
                    write_set(&mut out, *t);
                    out.push('\n');
                }
            }
            Block::Cover { map, mode, pieces } => {
                writeln!(out, "cover {map} {}", mode.name()).unwrap();
                for p in pieces {
                    out.push_str("piece ");
                    write_set(&mut out, *p);
                    out.push('\n');
                }
            }
            Block::Report { name, fields } => {
                writeln!(out, "report {name}").unwrap();
                for (k, v) in fields {
                    writeln!(out, "field {k} {v}").unwrap();
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treespace::{ShapeSpace, TruncatedModel};
    use proptest::prelude::*;

    const SIERPINSKI: &str = "space S\npoints 2\nle 0 1\n";

    #[test]
    fn sierpinski_file() {
        let doc = parse(SIERPINSKI).unwrap();
        let s = doc.space("S").unwrap();
        let pairs = (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).filter(|&(x, y)| s.le(x, y)).count();
        assert_eq!(pairs, 3);
        assert_eq!(**s, FiniteSpace::sierpinski());
        assert_eq!(serialize(&doc), SIERPINSKI);
    }

    #[test]
    fn table_errors() {
        let out_of_range = format!("{SIERPINSKI}map f : S -> S\nval 0 2\nval 1 0\n");
        assert_eq!(parse(&out_of_range), Err(ParseError::RangeError { line: 5, value: 2, size: 2 }));
        let partial = format!("{SIERPINSKI}map f : S -> S\nval 0 1\n");
        assert!(matches!(parse(&partial), Err(ParseError::PartialTable { line: 4, .. })));
        let twice = format!("{SIERPINSKI}map f : S -> S\nval 0 1\nval 0 0\n");
        assert!(matches!(parse(&twice), Err(ParseError::Syntax { line: 6, .. })));
    }

    #[test]
    fn transitivity_must_be_explicit() {
        let text = "space C\npoints 3\nle 0 1\nle 1 2\n";
        assert_eq!(parse(text), Err(ParseError::NotTransitive { line: 1, x: 0, y: 1, z: 2 }));
        let closed = parse_with(text, ParseOptions { close: true }).unwrap();
        assert_eq!(**closed.space("C").unwrap(), FiniteSpace::chain(3));
    }

    #[test]
    fn references_and_names() {
        assert_eq!(
            parse("map f : S -> S\n"),
            Err(ParseError::UnknownSpaceRef { line: 1, name: "S".into() })
        );
        assert_eq!(
            parse(&format!("{SIERPINSKI}space S\npoints 1\n")),
            Err(ParseError::DuplicateName { line: 4, name: "S".into() })
        );
        assert!(matches!(parse("points 2\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse(&format!("{SIERPINSKI}val 0 1\n")), Err(ParseError::Syntax { line: 4, .. })));
        assert!(matches!(parse("space S\n"), Err(ParseError::Syntax { line: 1, .. })));
    }

    #[test]
    fn root_indicator_treemap() {
        let text = "space D\npoints 2\n\ntreemap k=1 N=1 -> D\nshape * 0\nshape () 1\n";
        let doc = parse(text).unwrap();
        let (name, f) = doc.treemaps().next().unwrap();
        assert_eq!(name, "treemap0");
        let model = TruncatedModel::new(1, 8).unwrap();
        for i in 0..model.len() {
            let p = model.point(i);
            assert_eq!(f.eval(&p), usize::from(p.is_empty()), "{p:?}");
        }
    }

    #[test]
    fn pattern_precedence() {
        let base = "space D\npoints 2\n\ntreemap t k=2 N=2 -> D\n";
        let doc = parse(&format!("{base}default 0\nshape (1,*) 1\nshape (1,0) 0\n")).unwrap();
        let (_, f) = doc.treemaps().next().unwrap();
        assert_eq!(f.eval(&[1, 0]), 0);
        assert_eq!(f.eval(&[1, 7]), 1);
        assert_eq!(f.eval(&[0, 7]), 0);
        let clash = parse(&format!("{base}default 0\nshape (1,*) 1\nshape (*,0) 0\n"));
        assert!(matches!(clash, Err(ParseError::Syntax { line: 7, .. })), "{clash:?}");
        let partial = parse(&format!("{base}shape () 1\n"));
        assert!(matches!(partial, Err(ParseError::PartialTable { line: 4, .. })));
        let digit = parse(&format!("{base}shape (2) 1\n"));
        assert!(matches!(digit, Err(ParseError::Syntax { line: 5, .. })));
        let limit = parse("space D\npoints 2\ntreemap k=9 N=1 -> D\n");
        assert!(matches!(limit, Err(ParseError::Limit { line: 3, .. })));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# leading\nspace S # trailing\n\npoints 2\n  le 0 1\n";
        assert_eq!(serialize(&parse(text).unwrap()), SIERPINSKI);
    }

    fn arb_space() -> impl Strategy<Value = FiniteSpace> {
        (1usize..5, proptest::collection::vec((0usize..5, 0usize..5), 0..8)).prop_map(|(n, pairs)| {
            let pairs = pairs.into_iter().filter(|&(a, b)| a < n && b < n);
            FiniteSpace::from_relation_closure(n, pairs).unwrap()
        })
    }

    fn arb_document() -> impl Strategy<Value = Document> {
        (arb_space(), arb_space(), any::<u64>(), 1usize..3, 1usize..3).prop_map(|(x, y, bits, k, n)| {
            let (x, y) = (Arc::new(x), Arc::new(y));
            let table = (0..x.n()).map(|i| (bits >> (2 * i)) as usize % y.n()).collect();
            let map = FiniteMap::new(x.clone(), y.clone(), table).unwrap();
            let space = ShapeSpace::new(k, n).unwrap();
            let tree = ThresholdMap::from_fn(space, y.clone(), |s| (bits as usize >> s.len()) % y.n()).unwrap();
            let full = x.full();
            Document {
                blocks: vec![
                    Block::Space { name: "X".into(), space: x },
                    Block::Space { name: "Y".into(), space: y },
                    Block::Map { name: "f".into(), dom: "X".into(), cod: "Y".into(), map },
                    Block::TreeMap { name: Some("t".into()), cod: "Y".into(), map: tree.clone() },
                    Block::TreeMap { name: None, cod: "Y".into(), map: tree.clone() },
                    Block::Sequence {
                        name: "q".into(),
                        cod: "Y".into(),
                        members: vec!["t".into()],
                        phases: vec![("t".into(), "t".into())],
                        sequence: StableSequence::new(
                            vec![tree.clone()],
                            vec![crate::treespace::PhaseRule { below: tree.clone(), above: tree }],
                        )
                        .unwrap(),
                    },
                    Block::Series { map: "f".into(), kind: SeriesKind::Closed, terms: vec![full, PointSet::EMPTY] },
                    Block::Cover { map: "f".into(), mode: CoverMode::Arbitrary, pieces: vec![full] },
                    Block::Report { name: "r".into(), fields: vec![("bits".into(), bits.to_string())] },
                ],
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn round_trip(doc in arb_document()) {
            let text = serialize(&doc);
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(serialize(&back), text);
        }
    }
}
