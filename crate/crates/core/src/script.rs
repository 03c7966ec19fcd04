//! Operation scripts: the text format and seeded random generators.
//!
//! One operation per line: `I <parent> <char>` inserts a leaf, `D <id>`
//! deletes one. Node ids are decimal, the root is `0`, and inserted nodes
//! are numbered 1, 2, ... in file order. `<char>` is one character or a
//! `\uXXXX` escape. Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::Label;
use crate::trie::{NodeId, Trie};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Op {
    Insert { parent: NodeId, label: Label },
    Delete { id: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<NodeId, ParseError> {
    let tok = tok.ok_or_else(|| ParseError {
        line,
        msg: "missing node id".into(),
    })?;
    tok.parse::<u32>().map(NodeId).map_err(|_| ParseError {
        line,
        msg: format!("bad node id {tok:?}"),
    })
}

fn parse_char(tok: &str, line: usize) -> Result<Label, ParseError> {
    let err = |msg: String| ParseError { line, msg };
    let c = if let Some(hex) = tok.strip_prefix("\\u") {
        let hex = hex
            .strip_prefix('{')
            .and_then(|h| h.strip_suffix('}'))
            .unwrap_or(hex);
        let code = u32::from_str_radix(hex, 16).map_err(|_| err(format!("bad escape {tok:?}")))?;
        char::from_u32(code).ok_or_else(|| err(format!("escape {tok:?} is not a scalar value")))?
    } else {
        let mut it = tok.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => c,
            _ => return Err(err(format!("expected one character, got {tok:?}"))),
        }
    };
    if c == '\0' {
        return Err(err("NUL is reserved".into()));
    }
    Ok(Label::new(c))
}

/// Parses a script.
pub fn parse(text: &str) -> Result<Vec<Op>, ParseError> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim_start();
        if body.trim().is_empty() || body.starts_with('#') {
            continue;
        }
        let mut parts = body.splitn(3, ' ');
        match parts.next() {
            Some("I") => {
                let parent = parse_id(parts.next(), line)?;
                let rest = parts.next().ok_or_else(|| ParseError {
                    line,
                    msg: "missing character".into(),
                })?;
                // a lone whitespace character is a valid label
                let tok = if rest.trim().is_empty() {
                    rest
                } else {
                    rest.trim()
                };
                ops.push(Op::Insert {
                    parent,
                    label: parse_char(tok, line)?,
                });
            }
            Some("D") => {
                let id = parse_id(parts.next().map(str::trim), line)?;
                if parts.next().is_some_and(|r| !r.trim().is_empty()) {
                    return Err(ParseError {
                        line,
                        msg: "trailing input".into(),
                    });
                }
                ops.push(Op::Delete { id });
            }
            Some(other) => {
                return Err(ParseError {
                    line,
                    msg: format!("unknown operation {other:?}"),
                })
            }
            None => unreachable!("non-empty line"),
        }
    }
    Ok(ops)
}

fn escape(c: char) -> String {
    if c.is_whitespace() || c.is_control() || c == '\\' || c == '#' {
        if (c as u32) <= 0xFFFF {
            format!("\\u{:04x}", c as u32)
        } else {
            format!("\\u{{{:x}}}", c as u32)
        }
    } else {
        c.to_string()
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Insert { parent, label } => write!(f, "I {} {}", parent.0, escape(label.as_char())),
            Op::Delete { id } => write!(f, "D {}", id.0),
        }
    }
}

/// Formats a script so that [`parse`] reads it back unchanged.
pub fn format(ops: &[Op]) -> String {
    ops.iter().map(|op| format!("{op}\n")).collect()
}

/// Shape of generated tries.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub enum Shape {
    /// a single root-to-leaf path
    Path,
    /// shallow and bushy: parents are the root or its children
    Star,
    /// a spine with single leaves hanging off it
    Caterpillar,
    /// parents drawn uniformly from all nodes
    Uniform,
    /// `a^m` followed by `m` children of the deepest node, all with fresh
    /// labels
    Adversarial,
}

impl Shape {
    pub const ALL: [Shape; 5] = [
        Shape::Path,
        Shape::Star,
        Shape::Caterpillar,
        Shape::Uniform,
        Shape::Adversarial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Path => "path",
            Shape::Star => "star",
            Shape::Caterpillar => "caterpillar",
            Shape::Uniform => "uniform",
            Shape::Adversarial => "adversarial",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Shape::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown shape {s:?} (expected path, star, caterpillar, uniform or adversarial)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub ops: usize,
    pub sigma: u32,
    pub shape: Shape,
    /// probability that an operation deletes a random leaf
    pub delete_ratio: f64,
}

impl GenConfig {
    pub fn new(seed: u64, ops: usize, sigma: u32, shape: Shape) -> Self {
        GenConfig {
            seed,
            ops,
            sigma,
            shape,
            delete_ratio: 0.0,
        }
    }

    pub fn with_deletes(mut self, ratio: f64) -> Self {
        self.delete_ratio = ratio;
        self
    }
}

struct Gen {
    rng: ChaCha8Rng,
    trie: Trie,
    sigma: u32,
    /// lazily pruned candidate lists
    open: Vec<NodeId>,
    leaves: Vec<NodeId>,
    spine: Vec<NodeId>,
    ops: Vec<Op>,
}

impl Gen {
    fn free_label(&mut self, v: NodeId) -> Option<Label> {
        let used = self.trie.children(v).ok()?.count() as u32;
        if used >= self.sigma {
            return None;
        }
        let start = self.rng.gen_range(0..self.sigma);
        (0..self.sigma)
            .map(|k| Label::nth((start + k) % self.sigma))
            .find(|&l| self.trie.child(v, l).ok().flatten().is_none())
    }

    fn insert(&mut self, parent: NodeId, label: Label) -> NodeId {
        let v = self
            .trie
            .insert_leaf(parent, label)
            .expect("generator keeps scripts valid");
        self.ops.push(Op::Insert { parent, label });
        self.open.push(v);
        self.leaves.push(v);
        v
    }

    fn try_insert_under(&mut self, parent: NodeId) -> Option<NodeId> {
        let label = self.free_label(parent)?;
        Some(self.insert(parent, label))
    }

    fn insert_anywhere(&mut self) -> Option<NodeId> {
        while !self.open.is_empty() {
            let i = self.rng.gen_range(0..self.open.len());
            let v = self.open[i];
            if self.trie.contains(v) {
                if let Some(w) = self.try_insert_under(v) {
                    return Some(w);
                }
            }
            self.open.swap_remove(i);
        }
        None
    }

    fn delete_random_leaf(&mut self) -> bool {
        while !self.leaves.is_empty() {
            let i = self.rng.gen_range(0..self.leaves.len());
            let v = self.leaves[i];
            if v != NodeId::ROOT && self.trie.contains(v) && self.trie.is_leaf(v).unwrap() {
                let p = self.trie.parent(v).unwrap().unwrap();
                self.trie.delete_leaf(v).unwrap();
                self.ops.push(Op::Delete { id: v });
                self.leaves.swap_remove(i);
                self.open.push(p);
                if self.trie.is_leaf(p).unwrap() {
                    self.leaves.push(p);
                }
                while self.spine.last().is_some_and(|&s| !self.trie.contains(s)) {
                    self.spine.pop();
                }
                return true;
            }
            self.leaves.swap_remove(i);
        }
        false
    }

    fn deepest(&self) -> NodeId {
        self.spine.last().copied().unwrap_or(NodeId::ROOT)
    }

    fn step(&mut self, shape: Shape) {
        let done = match shape {
            Shape::Path => {
                let d = self.deepest();
                let v = self.try_insert_under(d);
                if let Some(v) = v {
                    self.spine.push(v);
                }
                v.is_some()
            }
            Shape::Star => {
                let root_first = self.rng.gen_bool(0.5);
                let mut v = if root_first {
                    self.try_insert_under(NodeId::ROOT)
                } else {
                    None
                };
                if v.is_none() {
                    let kids: Vec<NodeId> = self
                        .trie
                        .children(NodeId::ROOT)
                        .unwrap()
                        .map(|(_, c)| c)
                        .collect();
                    if !kids.is_empty() {
                        let k = kids[self.rng.gen_range(0..kids.len())];
                        v = self.try_insert_under(k);
                    }
                }
                v.or_else(|| self.try_insert_under(NodeId::ROOT)).is_some()
            }
            Shape::Caterpillar => {
                if self.spine.is_empty() || self.rng.gen_bool(0.5) {
                    let d = self.deepest();
                    match self.try_insert_under(d) {
                        Some(v) => {
                            self.spine.push(v);
                            true
                        }
                        None => false,
                    }
                } else {
                    let s = self.spine[self.rng.gen_range(0..self.spine.len())];
                    self.try_insert_under(s).is_some()
                }
            }
            Shape::Uniform => false,
            Shape::Adversarial => unreachable!("generated separately"),
        };
        if !done {
            self.insert_anywhere();
        }
    }
}

/// A random valid script.
pub fn generate(cfg: &GenConfig) -> Vec<Op> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        trie: Trie::new(),
        sigma: cfg.sigma.max(1),
        open: vec![NodeId::ROOT],
        leaves: Vec::new(),
        spine: Vec::new(),
        ops: Vec::with_capacity(cfg.ops),
    };
    if cfg.shape == Shape::Adversarial {
        return adversarial(cfg.ops / 2, cfg.ops - cfg.ops / 2);
    }
    while g.ops.len() < cfg.ops {
        let del =
            cfg.delete_ratio > 0.0 && g.trie.stats().edges > 0 && g.rng.gen_bool(cfg.delete_ratio);
        if !(del && g.delete_random_leaf()) {
            g.step(cfg.shape);
        }
    }
    g.ops
}

/// The path `a^m`, then `k` children of its deepest node with labels that
/// occur nowhere else.
pub fn adversarial(m: usize, k: usize) -> Vec<Op> {
    let mut ops = Vec::with_capacity(m + k);
    for i in 0..m {
        ops.push(Op::Insert {
            parent: NodeId(i as u32),
            label: Label::nth(0),
        });
    }
    for j in 0..k {
        ops.push(Op::Insert {
            parent: NodeId(m as u32),
            label: Label::nth(1 + j as u32),
        });
    }
    ops
}

/// Checks a script against a plain trie, returning the index and message
/// of the first invalid operation.
pub fn validate(ops: &[Op]) -> Result<(), (usize, crate::Error)> {
    let mut t = Trie::new();
    for (i, op) in ops.iter().enumerate() {
        let r = match *op {
            Op::Insert { parent, label } => t.insert_leaf(parent, label).map(|_| ()),
            Op::Delete { id } => t.delete_leaf(id),
        };
        r.map_err(|e| (i, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let text = "# demo\nI 0 a\n\nI 1 \\u0062\nI 2  \nD 3\n";
        let ops = parse(text).unwrap();
        assert_eq!(
            ops,
            vec![
                Op::Insert {
                    parent: NodeId(0),
                    label: Label::new('a')
                },
                Op::Insert {
                    parent: NodeId(1),
                    label: Label::new('b')
                },
                Op::Insert {
                    parent: NodeId(2),
                    label: Label::new(' ')
                },
                Op::Delete { id: NodeId(3) },
            ]
        );
        assert_eq!(parse(&format(&ops)).unwrap(), ops);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(parse("I 0 a\nX 1\n").unwrap_err().line, 2);
        assert_eq!(parse("I 0 ab").unwrap_err().line, 1);
        assert_eq!(parse("I 0 \\u0000").unwrap_err().line, 1);
        assert_eq!(parse("\n\nD x").unwrap_err().line, 3);
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn generated_scripts_are_valid_and_seeded() {
        for shape in Shape::ALL {
            for sigma in [1, 2, 3, 26] {
                let cfg = GenConfig::new(7, 150, sigma, shape).with_deletes(0.2);
                let ops = generate(&cfg);
                assert_eq!(ops.len(), 150);
                validate(&ops).unwrap();
                assert_eq!(ops, generate(&cfg));
            }
        }
    }

    #[test]
    fn path_shape_is_a_path() {
        let ops = generate(&GenConfig::new(3, 50, 2, Shape::Path));
        let mut t = Trie::new();
        for op in ops {
            if let Op::Insert { parent, label } = op {
                t.insert_leaf(parent, label).unwrap();
            }
        }
        assert_eq!(t.stats().leaves, 1);
        assert_eq!(t.stats().height, 50);
    }
}
