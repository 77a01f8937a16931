use std::fmt;
use std::str::FromStr;

use super::TreeError;
use crate::guards::Guards;

/// Upper limit on the number of shapes in one shape space.
pub const SHAPE_LIMIT: usize = 4_000_000;

/// Index arithmetic for a complete tree of height `k` and branching `base`:
/// nodes are numbered level by level, lexicographically inside a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Levels {
    pub k: usize,
    pub base: usize,
}

impl Levels {
    pub fn level_size(self, l: usize) -> usize {
        self.base.pow(l as u32)
    }

    pub fn offset(self, l: usize) -> usize {
        (0..l).map(|i| self.level_size(i)).sum()
    }

    pub fn len(self) -> usize {
        self.offset(self.k + 1)
    }

    /// Checked size, `None` on overflow or when it exceeds [`SHAPE_LIMIT`].
    pub fn checked_len(self) -> Option<usize> {
        let mut total = 0usize;
        let mut size = 1usize;
        for _ in 0..=self.k {
            total = total.checked_add(size)?;
            size = size.checked_mul(self.base)?;
        }
        (total <= SHAPE_LIMIT).then_some(total)
    }

    pub fn level_of(self, idx: usize) -> usize {
        let mut l = 0;
        let mut end = 1;
        while idx >= end {
            l += 1;
            end += self.level_size(l);
        }
        l
    }

    pub fn digits(self, idx: usize) -> Vec<usize> {
        let l = self.level_of(idx);
        let mut local = idx - self.offset(l);
        let mut out = vec![0; l];
        for slot in out.iter_mut().rev() {
            *slot = local % self.base;
            local /= self.base;
        }
        out
    }

    pub fn index(self, digits: &[usize]) -> usize {
        self.offset(digits.len()) + digits.iter().fold(0, |acc, &d| acc * self.base + d)
    }

    /// Child with digit `c` of the node `idx` sitting at level `l < k`.
    pub fn child(self, idx: usize, l: usize, c: usize) -> usize {
        let local = idx - self.offset(l);
        self.offset(l + 1) + local * self.base + c
    }

    /// Nodes of level `l` as an index range.
    pub fn level(self, l: usize) -> std::ops::Range<usize> {
        let start = self.offset(l);
        start..start + self.level_size(l)
    }
}

/// One coordinate of a shape: an explicit value below the threshold, or `⋆`
/// for every value at or above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Val(usize),
    Star,
}

/// A finite sequence of coordinates; the root is the empty shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Shape(pub Vec<Coord>);

impl Shape {
    pub fn root() -> Self {
        Shape(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// A concrete point carrying this shape: `⋆` becomes the threshold value.
    pub fn representative(&self, threshold: usize) -> Vec<usize> {
        self.0
            .iter()
            .map(|c| match *c {
                Coord::Val(v) => v,
                Coord::Star => threshold,
            })
            .collect()
    }

    pub fn has_star(&self) -> bool {
        self.0.contains(&Coord::Star)
    }
}

/// `()` for the root, otherwise `(c0,c1,..)` with `*` for `⋆`.
impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match c {
                Coord::Val(v) => write!(f, "{v}")?,
                Coord::Star => f.write_str("*")?,
            }
        }
        f.write_str(")")
    }
}

impl FromStr for Shape {
    type Err = TreeError;

    /// Accepts `()`, `(1,*)` and the bare form `1,*`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t).trim();
        if inner.is_empty() {
            return Ok(Shape::root());
        }
        inner
            .split(',')
            .map(|part| match part.trim() {
                "*" => Ok(Coord::Star),
                p => p
                    .parse()
                    .map(Coord::Val)
                    .map_err(|_| TreeError::BadShape(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Shape)
    }
}

/// Shapes of height at most `k` under threshold `N`: each coordinate is
/// one of `0..N` or `⋆`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShapeSpace {
    k: usize,
    threshold: usize,
}

impl ShapeSpace {
    pub fn new(k: usize, threshold: usize) -> Result<Self, TreeError> {
        let max = Guards::current().tree_height;
        if k > max {
            return Err(TreeError::HeightExceeded { k, max });
        }
        let levels = Levels { k, base: threshold + 1 };
        if levels.checked_len().is_none() {
            return Err(TreeError::TooManyShapes { k, threshold });
        }
        Ok(ShapeSpace { k, threshold })
    }

    pub fn k(self) -> usize {
        self.k
    }

    pub fn threshold(self) -> usize {
        self.threshold
    }

    pub(crate) fn levels(self) -> Levels {
        Levels { k: self.k, base: self.threshold + 1 }
    }

    pub fn len(self) -> usize {
        self.levels().len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn star(self) -> usize {
        self.threshold
    }

    pub fn shape(self, idx: usize) -> Shape {
        Shape(
            self.levels()
                .digits(idx)
                .into_iter()
                .map(|d| if d == self.threshold { Coord::Star } else { Coord::Val(d) })
                .collect(),
        )
    }

    pub fn index_of(self, shape: &Shape) -> Result<usize, TreeError> {
        if shape.len() > self.k {
            return Err(TreeError::BadShape(format!("{shape} is longer than height {}", self.k)));
        }
        let digits = shape
            .0
            .iter()
            .map(|c| match *c {
                Coord::Star => Ok(self.threshold),
                Coord::Val(v) if v < self.threshold => Ok(v),
                Coord::Val(v) => Err(TreeError::BadShape(format!(
                    "{shape}: coordinate {v} is not below the threshold {}",
                    self.threshold
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.levels().index(&digits))
    }

    /// Shape index of a concrete point.
    pub fn classify(self, point: &[usize]) -> usize {
        let digits: Vec<usize> = point.iter().map(|&c| c.min(self.threshold)).collect();
        self.levels().index(&digits)
    }

    /// The shape at threshold `self` containing shape `idx` of the finer
    /// space `fine`.
    pub(crate) fn coarsen_from(self, fine: ShapeSpace, idx: usize) -> usize {
        let digits: Vec<usize> = fine
            .levels()
            .digits(idx)
            .into_iter()
            .map(|d| d.min(self.threshold))
            .collect();
        self.levels().index(&digits)
    }

    pub fn level_of(self, idx: usize) -> usize {
        self.levels().level_of(idx)
    }

    pub fn with_threshold(self, threshold: usize) -> Result<Self, TreeError> {
        ShapeSpace::new(self.k, threshold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let s = ShapeSpace::new(3, 2).unwrap();
        assert_eq!(s.len(), 1 + 3 + 9 + 27);
        for idx in 0..s.len() {
            assert_eq!(s.index_of(&s.shape(idx)).unwrap(), idx);
        }
        let l = s.levels();
        assert_eq!(l.child(0, 0, 2), 3);
        assert_eq!(l.child(1, 1, 0), 4);
        assert_eq!(s.classify(&[7, 1]), s.index_of(&"(*,1)".parse().unwrap()).unwrap());
    }

    #[test]
    fn shape_text() {
        let sh: Shape = "(1,*)".parse().unwrap();
        assert_eq!(sh, Shape(vec![Coord::Val(1), Coord::Star]));
        assert_eq!(sh.to_string(), "(1,*)");
        assert_eq!("()".parse::<Shape>().unwrap(), Shape::root());
        assert_eq!("0, *".parse::<Shape>().unwrap().to_string(), "(0,*)");
        assert!("(x)".parse::<Shape>().is_err());
    }

    #[test]
    fn guards() {
        assert!(matches!(ShapeSpace::new(9, 1), Err(TreeError::HeightExceeded { .. })));
        assert!(matches!(ShapeSpace::new(3, 5000), Err(TreeError::TooManyShapes { .. })));
        let s = ShapeSpace::new(1, 3).unwrap();
        assert!(s.index_of(&"(5)".parse().unwrap()).is_err());
    }
}
