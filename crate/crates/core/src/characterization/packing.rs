//! Generalized `(v, b, K, 1)` packings: block systems in which every pair of
//! points lies in at most one block.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::text::{content_lines, header, parse_numbers, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("block {block} contains point {point} outside [0, {v})")]
    PointOutOfRange {
        block: usize,
        point: usize,
        v: usize,
    },
    #[error("block {block} repeats point {point}")]
    RepeatedPoint { block: usize, point: usize },
    #[error("points {0} and {1} occur together in blocks {2} and {3}")]
    PairCoveredTwice(usize, usize, usize, usize),
}

/// Blocks keep their input order: block `i` is meaningful as an index (it
/// becomes the first symbol of the codewords it generates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedPacking {
    v: usize,
    blocks: Vec<Vec<usize>>,
}

impl GeneralizedPacking {
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PackingError> {
        let mut blocks = blocks;
        for (block, b) in blocks.iter_mut().enumerate() {
            if let Some(&point) = b.iter().find(|&&p| p >= v) {
                return Err(PackingError::PointOutOfRange { block, point, v });
            }
            b.sort_unstable();
            if let Some(w) = b.windows(2).find(|w| w[0] == w[1]) {
                return Err(PackingError::RepeatedPoint { block, point: w[0] });
            }
        }
        let packing = GeneralizedPacking { v, blocks };
        packing.pair_index()?;
        Ok(packing)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Number of blocks `b`.
    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// The set `K` of block sizes that occur.
    pub fn block_sizes(&self) -> BTreeSet<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Number of blocks of each size.
    pub fn size_distribution(&self) -> BTreeMap<usize, usize> {
        let mut dist = BTreeMap::new();
        for b in &self.blocks {
            *dist.entry(b.len()).or_insert(0) += 1;
        }
        dist
    }

    /// Total number of incidences, the `M` of the associated code.
    pub fn incidences(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Maps each covered point pair `(p, p')`, `p < p'`, to its block.
    fn pair_index(&self) -> Result<HashMap<(usize, usize), usize>, PackingError> {
        let mut pairs = HashMap::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for (j, &p) in b.iter().enumerate() {
                for &r in &b[j + 1..] {
                    if let Some(prev) = pairs.insert((p, r), i) {
                        return Err(PackingError::PairCoveredTwice(p, r, prev, i));
                    }
                }
            }
        }
        Ok(pairs)
    }

    /// Three distinct points pairwise covered by three blocks, if any. Walks
    /// pairs of blocks through a common point and looks the closing pair up
    /// in the pair index.
    pub fn triangle(&self) -> Option<[usize; 3]> {
        let pairs = self.pair_index().expect("validated on construction");
        let mut through: Vec<Vec<usize>> = vec![Vec::new(); self.v];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                through[p].push(i);
            }
        }
        for (p1, blocks) in through.iter().enumerate() {
            for (j, &b1) in blocks.iter().enumerate() {
                for &b2 in &blocks[j + 1..] {
                    for &p2 in self.blocks[b1].iter().filter(|&&p| p != p1) {
                        for &p3 in self.blocks[b2].iter().filter(|&&p| p != p1) {
                            if pairs.contains_key(&(p2.min(p3), p2.max(p3))) {
                                return Some([p1, p2, p3]);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_delta_free(&self) -> bool {
        self.triangle().is_none()
    }

    /// Parses `v b` followed by exactly `b` block lines; an empty line is an
    /// empty block.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let lines = content_lines(text, true);
        let start = lines
            .iter()
            .position(|(_, l)| !l.is_empty())
            .ok_or_else(|| ParseError::new(0, "missing packing header"))?;
        let lines = &lines[start..];
        let [v, b] = header::<2>(lines, "packing")?;
        let body = &lines[1..];
        if body.len() < b || body[b..].iter().any(|(_, l)| !l.is_empty()) {
            return Err(ParseError::new(
                lines[0].0,
                format!("header declares {b} blocks, found {}", body.len()),
            ));
        }
        let mut blocks = Vec::with_capacity(b);
        for &(line, text) in &body[..b] {
            blocks.push(parse_numbers(line, text)?);
        }
        GeneralizedPacking::new(v, blocks).map_err(|e| ParseError::new(lines[0].0, e.to_string()))
    }
}

impl fmt::Display for GeneralizedPacking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.v, self.blocks.len())?;
        for b in &self.blocks {
            let parts: Vec<String> = b.iter().map(|p| p.to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}
