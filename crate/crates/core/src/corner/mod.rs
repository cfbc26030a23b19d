//! Corner trees: rooted trees whose non-root vertices carry a compass label
//! saying in which quadrant around its parent the vertex must land.

mod count;
mod enumerate;

pub use count::{count_corner_tree, count_corner_tree_as};
pub use enumerate::{enumerate_corner_trees, trees_up_to};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::D4Element;

/// Vertex label. `Root` marks the root and nothing else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CornerLabel {
    Root,
    SW,
    SE,
    NW,
    NE,
}

impl CornerLabel {
    const COMPASS: [CornerLabel; 4] = [CornerLabel::SW, CornerLabel::SE, CornerLabel::NW, CornerLabel::NE];

    /// The four non-root labels.
    pub fn compass() -> [CornerLabel; 4] {
        Self::COMPASS
    }

    fn from_sides(west: bool, south: bool) -> Self {
        match (west, south) {
            (true, true) => CornerLabel::SW,
            (false, true) => CornerLabel::SE,
            (true, false) => CornerLabel::NW,
            (false, false) => CornerLabel::NE,
        }
    }

    /// `*W`: the vertex sits at a smaller position than its parent.
    pub fn is_west(self) -> bool {
        matches!(self, CornerLabel::SW | CornerLabel::NW)
    }

    /// `S*`: the vertex has a smaller value than its parent.
    pub fn is_south(self) -> bool {
        matches!(self, CornerLabel::SW | CornerLabel::SE)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CornerLabel::Root => "R",
            CornerLabel::SW => "SW",
            CornerLabel::SE => "SE",
            CornerLabel::NW => "NW",
            CornerLabel::NE => "NE",
        }
    }

    fn code(self) -> u8 {
        self as u8
    }

    /// Relabeling induced by a symmetry of the plane; the root is fixed.
    pub fn transform(self, g: D4Element) -> Self {
        if self == CornerLabel::Root {
            return self;
        }
        let (mut west, mut south) = (self.is_west(), self.is_south());
        if g.swaps_axes() {
            std::mem::swap(&mut west, &mut south);
        }
        let (fx, fy) = g.flips();
        Self::from_sides(west ^ fx, south ^ fy)
    }
}

impl fmt::Display for CornerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rooted tree with compass-labeled vertices.
///
/// Children are semantically unordered; the stored order is whatever the
/// tree was built or parsed with, so notation round-trips exactly.
/// [`canonical`](CornerTree::canonical) sorts them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CornerTree {
    label: CornerLabel,
    children: Vec<CornerTree>,
}

impl CornerTree {
    /// A tree whose root has the given child subtrees.
    pub fn root(children: Vec<CornerTree>) -> Self {
        Self {
            label: CornerLabel::Root,
            children,
        }
    }

    /// A non-root subtree.
    ///
    /// # Panics
    /// If `label` is `Root`.
    pub fn node(label: CornerLabel, children: Vec<CornerTree>) -> Self {
        assert_ne!(label, CornerLabel::Root, "only the root may carry the root label");
        Self { label, children }
    }

    pub fn leaf(label: CornerLabel) -> Self {
        Self::node(label, Vec::new())
    }

    /// A root with a single descending chain of the given labels.
    pub fn chain(labels: &[CornerLabel]) -> Self {
        let mut sub: Option<CornerTree> = None;
        for &l in labels.iter().rev() {
            sub = Some(Self::node(l, sub.into_iter().collect()));
        }
        Self::root(sub.into_iter().collect())
    }

    pub fn label(&self) -> CornerLabel {
        self.label
    }

    pub fn children(&self) -> &[CornerTree] {
        &self.children
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(CornerTree::size).sum::<usize>()
    }

    /// The same tree with children recursively sorted.
    pub fn canonical(&self) -> Self {
        let mut children: Vec<_> = self.children.iter().map(CornerTree::canonical).collect();
        children.sort();
        Self {
            label: self.label,
            children,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.children.windows(2).all(|w| w[0] <= w[1]) && self.children.iter().all(CornerTree::is_canonical)
    }

    /// Byte encoding independent of child order.
    ///
    /// Each vertex contributes one byte, `label | degree << 3`, followed by
    /// its children's encodings in sorted order. Degrees of 31 or more store
    /// 31 in the byte and the true degree as a LEB128 varint after it.
    pub fn canonical_encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size());
        self.encode_into(&mut out);
        out
    }

    fn encode_into(&self, out: &mut Vec<u8>) {
        let degree = self.children.len();
        out.push(self.label.code() | (degree.min(31) as u8) << 3);
        if degree >= 31 {
            let mut d = degree;
            loop {
                let byte = (d & 0x7f) as u8;
                d >>= 7;
                if d == 0 {
                    out.push(byte);
                    break;
                }
                out.push(byte | 0x80);
            }
        }
        let mut encoded: Vec<Vec<u8>> = self.children.iter().map(CornerTree::canonical_encode).collect();
        encoded.sort();
        for e in encoded {
            out.extend_from_slice(&e);
        }
    }

    /// The tree with every label moved by `g`.
    pub fn transform(&self, g: D4Element) -> Self {
        Self {
            label: self.label.transform(g),
            children: self.children.iter().map(|c| c.transform(g)).collect(),
        }
    }

    fn write_notation(&self, out: &mut String) {
        out.push_str(self.label.as_str());
        if !self.children.is_empty() {
            out.push('(');
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                c.write_notation(out);
            }
            out.push(')');
        }
    }
}

impl fmt::Display for CornerTree {
    /// Nested-parentheses notation, e.g. `R(NE(SW),SE)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_notation(&mut s);
        f.write_str(&s)
    }
}

impl FromStr for CornerTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut parser = NotationParser { src: &compact, pos: 0 };
        let tree = parser.vertex(true)?;
        if parser.pos != compact.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(tree)
    }
}

struct NotationParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl NotationParser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::TreeSyntax(format!("{what} at offset {}", self.pos))
    }

    fn vertex(&mut self, is_root: bool) -> Result<CornerTree> {
        let rest = &self.src[self.pos..];
        let (label, width) = if rest.starts_with(b"SW") {
            (CornerLabel::SW, 2)
        } else if rest.starts_with(b"SE") {
            (CornerLabel::SE, 2)
        } else if rest.starts_with(b"NW") {
            (CornerLabel::NW, 2)
        } else if rest.starts_with(b"NE") {
            (CornerLabel::NE, 2)
        } else if rest.starts_with(b"R") {
            (CornerLabel::Root, 1)
        } else {
            return Err(self.error("expected a label"));
        };
        if is_root != (label == CornerLabel::Root) {
            return Err(self.error(if is_root {
                "tree must start with R"
            } else {
                "R may only label the root"
            }));
        }
        self.pos += width;
        let mut children = Vec::new();
        if self.src.get(self.pos) == Some(&b'(') {
            self.pos += 1;
            loop {
                children.push(self.vertex(false)?);
                match self.src.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
        }
        Ok(CornerTree { label, children })
    }
}
