use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use super::{Block, Document, ParseError};
use crate::finspace::{FiniteSpace, PointSet, SpaceError};
use crate::mapcalc::{CoverMode, FiniteMap, SeriesKind};
use crate::treespace::{Coord, PhaseRule, Shape, ShapeSpace, StableSequence, ThresholdMap};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Take the transitive closure of `le` lines instead of rejecting
    /// relations that are not transitive.
    pub close: bool,
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    parse_with(text, ParseOptions::default())
}

pub fn parse_with(text: &str, options: ParseOptions) -> Result<Document, ParseError> {
    let mut p = Parser { options, doc: Document::default(), names: HashSet::new(), open: None };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (word, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        p.line(line, word, rest.trim())?;
    }
    p.finish()?;
    Ok(p.doc)
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

fn number(line: usize, s: &str) -> Result<usize, ParseError> {
    s.parse().map_err(|_| syntax(line, format!("expected a number, found `{s}`")))
}

fn set(line: usize, s: &str, n: usize) -> Result<PointSet, ParseError> {
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| syntax(line, format!("expected a set like {{0,2}}, found `{s}`")))?
        .trim();
    let mut out = PointSet::EMPTY;
    if inner.is_empty() {
        return Ok(out);
    }
    for part in inner.split(',') {
        let x = number(line, part.trim())?;
        if x >= n {
            return Err(ParseError::RangeError { line, value: x, size: n });
        }
        out.insert(x);
    }
    Ok(out)
}

fn words<const K: usize>(line: usize, rest: &str, usage: &str) -> Result<[String; K], ParseError> {
    let parts: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    parts.try_into().map_err(|_| syntax(line, format!("expected `{usage}`")))
}

enum Open {
    Space { line: usize, name: String, points: Option<usize>, pairs: Vec<(usize, usize)> },
    Map { line: usize, name: String, dom: (String, Arc<FiniteSpace>), cod: (String, Arc<FiniteSpace>), vals: Vec<Option<usize>> },
    TreeMap {
        line: usize,
        name: Option<String>,
        space: ShapeSpace,
        cod: (String, Arc<FiniteSpace>),
        patterns: BTreeMap<Shape, (usize, usize)>,
        default: Option<usize>,
    },
    Sequence { line: usize, name: String, cod: (String, Arc<FiniteSpace>), members: Vec<String>, phases: Vec<(String, String)> },
    Series { map: String, kind: SeriesKind, n: usize, terms: Vec<PointSet> },
    Cover { map: String, mode: CoverMode, n: usize, pieces: Vec<PointSet> },
    Report { name: String, fields: Vec<(String, String)> },
}

struct Parser {
    options: ParseOptions,
    doc: Document,
    names: HashSet<String>,
    open: Option<Open>,
}

impl Parser {
    fn claim(&mut self, line: usize, name: &str) -> Result<(), ParseError> {
        if !self.names.insert(name.to_string()) {
            return Err(ParseError::DuplicateName { line, name: name.to_string() });
        }
        Ok(())
    }

    fn space_ref(&self, line: usize, name: &str) -> Result<(String, Arc<FiniteSpace>), ParseError> {
        self.doc
            .space(name)
            .map(|s| (name.to_string(), s.clone()))
            .ok_or_else(|| ParseError::UnknownSpaceRef { line, name: name.to_string() })
    }

    fn map_ref(&self, line: usize, name: &str) -> Result<usize, ParseError> {
        self.doc
            .map(name)
            .map(|m| m.dom().n())
            .ok_or_else(|| ParseError::UnknownSpaceRef { line, name: name.to_string() })
    }

    fn treemap_ref(&self, line: usize, name: &str) -> Result<ThresholdMap, ParseError> {
        self.doc
            .blocks
            .iter()
            .find_map(|b| match b {
                Block::TreeMap { name: Some(n), map, .. } if n == name => Some(map.clone()),
                _ => None,
            })
            .ok_or_else(|| ParseError::UnknownSpaceRef { line, name: name.to_string() })
    }

    fn line(&mut self, line: usize, word: &str, rest: &str) -> Result<(), ParseError> {
        match word {
            "space" | "map" | "treemap" | "sequence" | "series" | "cover" | "report" => {
                self.finish()?;
                self.open = Some(self.header(line, word, rest)?);
                Ok(())
            }
            _ => self.body(line, word, rest),
        }
    }

    fn header(&mut self, line: usize, word: &str, rest: &str) -> Result<Open, ParseError> {
        match word {
            "space" => {
                let [name] = words(line, rest, "space <name>")?;
                self.claim(line, &name)?;
                Ok(Open::Space { line, name, points: None, pairs: Vec::new() })
            }
            "map" => {
                let [name, colon, dom, arrow, cod] = words(line, rest, "map <name> : <space> -> <space>")?;
                if colon != ":" || arrow != "->" {
                    return Err(syntax(line, "expected `map <name> : <space> -> <space>`"));
                }
                let dom = self.space_ref(line, &dom)?;
                let cod = self.space_ref(line, &cod)?;
                self.claim(line, &name)?;
                let vals = vec![None; dom.1.n()];
                Ok(Open::Map { line, name, dom, cod, vals })
            }
            "treemap" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let (name, parts) = match parts.first() {
                    Some(p) if !p.starts_with("k=") => (Some(p.to_string()), &parts[1..]),
                    _ => (None, &parts[..]),
                };
                let usage = "treemap [name] k=<k> N=<n> -> <space>";
                let [k, n, arrow, cod] = parts else {
                    return Err(syntax(line, format!("expected `{usage}`")));
                };
                let (Some(k), Some(n), "->") = (k.strip_prefix("k="), n.strip_prefix("N="), *arrow) else {
                    return Err(syntax(line, format!("expected `{usage}`")));
                };
                let space = ShapeSpace::new(number(line, k)?, number(line, n)?)
                    .map_err(|e| ParseError::Limit { line, message: e.to_string() })?;
                let cod = self.space_ref(line, cod)?;
                if let Some(name) = &name {
                    self.claim(line, name)?;
                }
                Ok(Open::TreeMap { line, name, space, cod, patterns: BTreeMap::new(), default: None })
            }
            "sequence" => {
                let [name, arrow, cod] = words(line, rest, "sequence <name> -> <space>")?;
                if arrow != "->" {
                    return Err(syntax(line, "expected `sequence <name> -> <space>`"));
                }
                let cod = self.space_ref(line, &cod)?;
                self.claim(line, &name)?;
                Ok(Open::Sequence { line, name, cod, members: Vec::new(), phases: Vec::new() })
            }
            "series" => {
                let [map, kind] = words(line, rest, "series <map> plain|closed")?;
                let kind = match kind.as_str() {
                    "plain" => SeriesKind::Plain,
                    "closed" => SeriesKind::Closed,
                    k => return Err(syntax(line, format!("unknown series kind `{k}`"))),
                };
                let n = self.map_ref(line, &map)?;
                Ok(Open::Series { map, kind, n, terms: Vec::new() })
            }
            "cover" => {
                let [map, mode] = words(line, rest, "cover <map> arbitrary|closed")?;
                let mode = match mode.as_str() {
                    "arbitrary" => CoverMode::Arbitrary,
                    "closed" => CoverMode::Closed,
                    m => return Err(syntax(line, format!("unknown cover mode `{m}`"))),
                };
                let n = self.map_ref(line, &map)?;
                Ok(Open::Cover { map, mode, n, pieces: Vec::new() })
            }
            _ => {
                let [name] = words(line, rest, "report <name>")?;
                Ok(Open::Report { name, fields: Vec::new() })
            }
        }
    }

    fn body(&mut self, line: usize, word: &str, rest: &str) -> Result<(), ParseError> {
        let open = self.open.as_mut().ok_or_else(|| syntax(line, format!("`{word}` outside a block")))?;
        match (open, word) {
            (Open::Space { points, .. }, "points") => {
                if points.is_some() {
                    return Err(syntax(line, "`points` given twice"));
                }
                let [n] = words(line, rest, "points <n>")?;
                *points = Some(number(line, &n)?);
            }
            (Open::Space { points, pairs, .. }, "le") => {
                let n = points.ok_or_else(|| syntax(line, "`le` before `points`"))?;
                let [a, b] = words(line, rest, "le <i> <j>")?;
                let (a, b) = (number(line, &a)?, number(line, &b)?);
                for v in [a, b] {
                    if v >= n {
                        return Err(ParseError::RangeError { line, value: v, size: n });
                    }
                }
                pairs.push((a, b));
            }
            (Open::Map { vals, cod, .. }, "val") => {
                let [x, v] = words(line, rest, "val <i> <j>")?;
                let (x, v) = (number(line, &x)?, number(line, &v)?);
                if x >= vals.len() {
                    return Err(ParseError::RangeError { line, value: x, size: vals.len() });
                }
                if v >= cod.1.n() {
                    return Err(ParseError::RangeError { line, value: v, size: cod.1.n() });
                }
                if vals[x].replace(v).is_some() {
                    return Err(syntax(line, format!("point {x} has two values")));
                }
            }
            (Open::TreeMap { space, cod, patterns, .. }, "shape") => {
                let [pattern, v] = words(line, rest, "shape <pattern> <value>")?;
                let shape: Shape = pattern.parse().map_err(|e: crate::treespace::TreeError| syntax(line, e.to_string()))?;
                if shape.len() > space.k() {
                    return Err(syntax(line, format!("pattern {shape} is longer than height {}", space.k())));
                }
                if let Some(&Coord::Val(c)) = shape.0.iter().find(|c| matches!(c, Coord::Val(c) if *c >= space.threshold())) {
                    return Err(syntax(line, format!("coordinate {c} is not below N={}", space.threshold())));
                }
                let v = number(line, &v)?;
                if v >= cod.1.n() {
                    return Err(ParseError::RangeError { line, value: v, size: cod.1.n() });
                }
                if patterns.insert(shape.clone(), (v, line)).is_some() {
                    return Err(syntax(line, format!("pattern {shape} given twice")));
                }
            }
            (Open::TreeMap { cod, default, .. }, "default") => {
                let [v] = words(line, rest, "default <value>")?;
                let v = number(line, &v)?;
                if v >= cod.1.n() {
                    return Err(ParseError::RangeError { line, value: v, size: cod.1.n() });
                }
                if default.replace(v).is_some() {
                    return Err(syntax(line, "`default` given twice"));
                }
            }
            (Open::Sequence { members, .. }, "member") => {
                let [m] = words(line, rest, "member <treemap>")?;
                members.push(m);
            }
            (Open::Sequence { phases, .. }, "phase") => {
                let [below, above] = words(line, rest, "phase <treemap> <treemap>")?;
                phases.push((below, above));
            }
            (Open::Series { n, terms, .. }, "term") => terms.push(set(line, rest, *n)?),
            (Open::Cover { n, pieces, .. }, "piece") => pieces.push(set(line, rest, *n)?),
            (Open::Report { fields, .. }, "field") => {
                let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if key.is_empty() {
                    return Err(syntax(line, "expected `field <key> <value>`"));
                }
                fields.push((key.to_string(), value.trim().to_string()));
            }
            (_, w) => return Err(syntax(line, format!("unexpected `{w}` in this block"))),
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        let Some(open) = self.open.take() else {
            return Ok(());
        };
        let block = match open {
            Open::Space { line, name, points, pairs } => {
                let n = points.ok_or_else(|| syntax(line, format!("space {name} has no `points` line")))?;
                let built = if self.options.close {
                    FiniteSpace::from_relation_closure(n, pairs)
                } else {
                    FiniteSpace::from_preorder(n, pairs)
                };
                let space = built.map_err(|e| match e {
                    SpaceError::NotTransitive { x, y, z } => ParseError::NotTransitive { line, x, y, z },
                    e => ParseError::Limit { line, message: e.to_string() },
                })?;
                Block::Space { name, space: Arc::new(space) }
            }
            Open::Map { line, name, dom, cod, vals } => {
                let table = vals
                    .iter()
                    .enumerate()
                    .map(|(x, v)| {
                        v.ok_or_else(|| ParseError::PartialTable {
                            line,
                            block: format!("map {name}"),
                            missing: format!("point {x}"),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let map = FiniteMap::new(dom.1, cod.1, table).map_err(|e| syntax(line, e.to_string()))?;
                Block::Map { name, dom: dom.0, cod: cod.0, map }
            }
            Open::TreeMap { line, name, space, cod, patterns, default } => {
                let label = name.as_deref().map_or("treemap".to_string(), |n| format!("treemap {n}"));
                let values = (0..space.len())
                    .map(|i| {
                        let shape = space.shape(i);
                        match best_pattern(&shape, &patterns) {
                            Ok(Some(v)) => Ok(v),
                            Ok(None) => default.ok_or_else(|| ParseError::PartialTable {
                                line,
                                block: label.clone(),
                                missing: format!("shape {shape}"),
                            }),
                            Err((a, b)) => Err(syntax(
                                b.max(a),
                                format!("patterns on lines {} and {} give different values for {shape}", a.min(b), a.max(b)),
                            )),
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let map = ThresholdMap::new(space, cod.1, values).map_err(|e| syntax(line, e.to_string()))?;
                Block::TreeMap { name, cod: cod.0, map }
            }
            Open::Sequence { line, name, cod, members, phases } => {
                let lookup = |n: &String| -> Result<ThresholdMap, ParseError> {
                    let m = self.treemap_ref(line, n)?;
                    if **m.codomain_arc() != *cod.1 {
                        return Err(syntax(line, format!("treemap {n} does not map into {}", cod.0)));
                    }
                    Ok(m)
                };
                let explicit = members.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
                let rules = phases
                    .iter()
                    .map(|(b, a)| Ok(PhaseRule { below: lookup(b)?, above: lookup(a)? }))
                    .collect::<Result<Vec<_>, ParseError>>()?;
                let sequence = StableSequence::new(explicit, rules).map_err(|e| syntax(line, e.to_string()))?;
                Block::Sequence { name, cod: cod.0, members, phases, sequence }
            }
            Open::Series { map, kind, terms, .. } => Block::Series { map, kind, terms },
            Open::Cover { map, mode, pieces, .. } => Block::Cover { map, mode, pieces },
            Open::Report { name, fields } => Block::Report { name, fields },
        };
        self.doc.blocks.push(block);
        Ok(())
    }
}

/// Value of the most specific pattern matching `shape`: a digit matches
/// itself, `*` matches anything. Equally specific matches must agree, else
/// the lines of the two conflicting patterns are returned.
fn best_pattern(
    shape: &Shape,
    patterns: &BTreeMap<Shape, (usize, usize)>,
) -> Result<Option<usize>, (usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (p, &(value, line)) in patterns {
        if p.len() != shape.len() || !p.0.iter().zip(&shape.0).all(|(a, b)| a == b || *a == Coord::Star) {
            continue;
        }
        let stars = p.0.iter().filter(|c| **c == Coord::Star).count();
        match best {
            Some((s, _, _)) if s < stars => {}
            Some((s, v, l)) if s == stars && v != value => return Err((l, line)),
            Some((s, _, _)) if s == stars => {}
            _ => best = Some((stars, value, line)),
        }
    }
    Ok(best.map(|(_, v, _)| v))
}
