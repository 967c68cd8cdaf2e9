//! Coordinate profiles, the fast characterizations of length-2 codes, and
//! the equivalences with girth-8 bipartite graphs and triangle-free packings.
//!
//! For a code `C` and coordinate `j`, the profile set `A_i^j` collects the
//! codewords with symbol `i` at position `j`, with that position deleted.
//! Length-2 codes are characterized through the profile of coordinate 0:
//!
//! * `C` is 2-separable iff any two profile sets share at most one symbol.
//! * `C` is 3-MIPP iff additionally no three profile sets close a triangle
//!   `b1,b2 ∈ A_a1`, `b2,b3 ∈ A_a2`, `b1,b3 ∈ A_a3`.
//!
//! Equivalently the bipartite graph with one edge per codeword has girth at
//! least 8, or the profile sets form a triangle-free packing on the alphabet.

pub mod graph;
pub mod packing;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::code::{Code, CodeError, Limits, Symbol};
pub use graph::{BipartiteGraph, GraphError, Vertex};
pub use packing::{GeneralizedPacking, PackingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterizationError {
    #[error("this check needs a code of length 2, got length {0}")]
    NotLengthTwo(usize),
    #[error("coordinate {coord} out of range for length {n}")]
    CoordinateOutOfRange { coord: usize, n: usize },
    #[error("graph vertex class of size {size} exceeds the cap {cap}")]
    PartTooLarge { size: u128, cap: usize },
    #[error("graph classes must have equal size, got {x} and {y}")]
    NotSquare { x: usize, y: usize },
    #[error("packing has {b} blocks on {v} points; a code needs b = v")]
    BlockCountMismatch { v: usize, b: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The sets `A_i^j` for one coordinate `j` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateProfile {
    coord: usize,
    sets: Vec<Vec<Vec<Symbol>>>,
}

impl CoordinateProfile {
    pub fn coord(&self) -> usize {
        self.coord
    }

    /// `A_i^j`: punctured codewords, sorted.
    pub fn set(&self, symbol: Symbol) -> &[Vec<Symbol>] {
        &self.sets[symbol as usize]
    }

    pub fn sets(&self) -> &[Vec<Vec<Symbol>>] {
        &self.sets
    }

    /// Restores the codeword a punctured vector of `A_symbol` came from.
    pub fn extend(&self, symbol: Symbol, punctured: &[Symbol]) -> Vec<Symbol> {
        let mut w = punctured.to_vec();
        w.insert(self.coord, symbol);
        w
    }
}

pub fn profile(code: &Code, coord: usize) -> Result<CoordinateProfile, CharacterizationError> {
    if coord >= code.n() {
        return Err(CharacterizationError::CoordinateOutOfRange { coord, n: code.n() });
    }
    let mut sets = vec![Vec::new(); code.q() as usize];
    for w in code.words() {
        let mut punctured = w.to_vec();
        let symbol = punctured.remove(coord);
        sets[symbol as usize].push(punctured);
    }
    for s in &mut sets {
        s.sort();
    }
    Ok(CoordinateProfile { coord, sets })
}

/// Why a length-2 code fails the fast characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `b[0], b[1]` both lie in `A_a[0]` and `A_a[1]`.
    SharedPair { a: [Symbol; 2], b: [Symbol; 2] },
    /// `b1,b2 ∈ A_a1`, `b2,b3 ∈ A_a2`, `b1,b3 ∈ A_a3`.
    Triangle { a: [Symbol; 3], b: [Symbol; 3] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SharedPair { a, b } => write!(
                f,
                "profile sets A_{} and A_{} share symbols {} and {}",
                a[0], a[1], b[0], b[1]
            ),
            Violation::Triangle { a, b } => write!(
                f,
                "triangle: {},{} in A_{}; {},{} in A_{}; {},{} in A_{}",
                b[0], b[1], a[0], b[1], b[2], a[1], b[0], b[2], a[2]
            ),
        }
    }
}

/// Blocks `A_a` (second symbols, sorted) indexed by first symbol.
fn length_two_blocks(code: &Code) -> Result<Vec<Vec<Symbol>>, CharacterizationError> {
    if code.n() != 2 {
        return Err(CharacterizationError::NotLengthTwo(code.n()));
    }
    let mut blocks = vec![Vec::new(); code.q() as usize];
    for w in code.words() {
        blocks[w[0] as usize].push(w[1]);
    }
    Ok(blocks)
}

/// Inverse incidence: for each second symbol, the first symbols it pairs with.
fn columns(blocks: &[Vec<Symbol>]) -> Vec<Vec<Symbol>> {
    let mut cols = vec![Vec::new(); blocks.len()];
    for (a, block) in blocks.iter().enumerate() {
        for &b in block {
            cols[b as usize].push(a as Symbol);
        }
    }
    cols
}

/// Condition (I); on success returns the index from covered pairs
/// `(b, b')`, `b < b'`, to the unique first symbol covering them.
fn shared_pair(blocks: &[Vec<Symbol>]) -> Result<HashMap<(Symbol, Symbol), Symbol>, Violation> {
    let mut pairs: HashMap<(Symbol, Symbol), Symbol> = HashMap::new();
    for (a, block) in blocks.iter().enumerate() {
        for (i, &b1) in block.iter().enumerate() {
            for &b2 in &block[i + 1..] {
                if let Some(prev) = pairs.insert((b1, b2), a as Symbol) {
                    return Err(Violation::SharedPair {
                        a: [prev, a as Symbol],
                        b: [b1, b2],
                    });
                }
            }
        }
    }
    Ok(pairs)
}

pub fn separable2_violation(code: &Code) -> Result<Option<Violation>, CharacterizationError> {
    let blocks = length_two_blocks(code)?;
    Ok(shared_pair(&blocks).err())
}

/// Fast 2-separability test for length-2 codes.
pub fn is_separable2_fast(code: &Code) -> Result<bool, CharacterizationError> {
    Ok(separable2_violation(code)?.is_none())
}

pub fn mippc3_violation(code: &Code) -> Result<Option<Violation>, CharacterizationError> {
    let blocks = length_two_blocks(code)?;
    let pairs = match shared_pair(&blocks) {
        Ok(p) => p,
        Err(v) => return Ok(Some(v)),
    };
    // With (I) in force, two blocks through b2 meet only in b2, so any pair
    // (b1, b3) drawn from them is distinct and covered by a third block.
    for (b2, through) in columns(&blocks).iter().enumerate() {
        let b2 = b2 as Symbol;
        for (i, &a1) in through.iter().enumerate() {
            for &a2 in &through[i + 1..] {
                for &b1 in blocks[a1 as usize].iter().filter(|&&b| b != b2) {
                    for &b3 in blocks[a2 as usize].iter().filter(|&&b| b != b2) {
                        if let Some(&a3) = pairs.get(&(b1.min(b3), b1.max(b3))) {
                            return Ok(Some(Violation::Triangle {
                                a: [a1, a2, a3],
                                b: [b1, b2, b3],
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Fast 3-MIPP test for length-2 codes.
pub fn is_mippc3_fast(code: &Code) -> Result<bool, CharacterizationError> {
    Ok(mippc3_violation(code)?.is_none())
}

fn checked_part(q: u32, len: usize, cap: usize) -> Result<usize, CharacterizationError> {
    let size = (q as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(CharacterizationError::PartTooLarge { size, cap });
    }
    Ok(size as usize)
}

fn encode(symbols: &[Symbol], q: u32) -> usize {
    symbols
        .iter()
        .fold(0usize, |acc, &s| acc * q as usize + s as usize)
}

/// Splits each codeword into a prefix of `ceil(n/2)` and a suffix of
/// `floor(n/2)` symbols, and joins them by an edge of `G(q^ceil, q^floor)`.
/// Vertices are numbered by the base-q value of their half.
pub fn to_graph(code: &Code) -> Result<BipartiteGraph, CharacterizationError> {
    to_graph_with(code, &Limits::default())
}

pub fn to_graph_with(
    code: &Code,
    limits: &Limits,
) -> Result<BipartiteGraph, CharacterizationError> {
    let split = code.n().div_ceil(2);
    let x_size = checked_part(code.q(), split, limits.max_part_size)?;
    let y_size = checked_part(code.q(), code.n() - split, limits.max_part_size)?;
    let edges = code
        .words()
        .map(|w| (encode(&w[..split], code.q()), encode(&w[split..], code.q())))
        .collect();
    Ok(BipartiteGraph::new(x_size, y_size, edges)?)
}

/// The code with one codeword `(x, y)` per edge of a square bipartite graph.
pub fn from_graph(graph: &BipartiteGraph) -> Result<Code, CharacterizationError> {
    if graph.x_size() != graph.y_size() {
        return Err(CharacterizationError::NotSquare {
            x: graph.x_size(),
            y: graph.y_size(),
        });
    }
    let words = graph
        .edges()
        .iter()
        .map(|&(x, y)| vec![x as Symbol, y as Symbol])
        .collect();
    Ok(Code::new(2, graph.x_size() as u32, words)?)
}

/// The profile sets `A_0, .., A_(q-1)` of coordinate 0 as a packing on the
/// alphabet. Fails when two profile sets share two symbols.
pub fn to_packing(code: &Code) -> Result<GeneralizedPacking, CharacterizationError> {
    let blocks = length_two_blocks(code)?
        .into_iter()
        .map(|b| b.into_iter().map(|s| s as usize).collect())
        .collect();
    Ok(GeneralizedPacking::new(code.q() as usize, blocks)?)
}

/// The code `{(i, p) : p ∈ B_i}` of a packing with as many blocks as points.
pub fn from_packing(packing: &GeneralizedPacking) -> Result<Code, CharacterizationError> {
    if packing.b() != packing.v() {
        return Err(CharacterizationError::BlockCountMismatch {
            v: packing.v(),
            b: packing.b(),
        });
    }
    let words = packing
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().map(move |&p| vec![i as Symbol, p as Symbol]))
        .collect();
    Ok(Code::new(2, packing.v() as u32, words)?)
}

pub fn is_delta_free(packing: &GeneralizedPacking) -> bool {
    packing.is_delta_free()
}

/// The graph route: girth of the induced `G(q, q)` is at least 8.
pub fn is_mippc3_by_graph(code: &Code) -> Result<bool, CharacterizationError> {
    if code.n() != 2 {
        return Err(CharacterizationError::NotLengthTwo(code.n()));
    }
    Ok(to_graph(code)?.girth().is_none_or(|g| g >= 8))
}

/// The design route: the profile sets form a triangle-free packing.
pub fn is_mippc3_by_packing(code: &Code) -> Result<bool, CharacterizationError> {
    match to_packing(code) {
        Ok(p) => Ok(p.is_delta_free()),
        Err(CharacterizationError::Packing(PackingError::PairCoveredTwice(..))) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(q: u32, words: &[&[Symbol]]) -> Code {
        Code::new(
            words[0].len(),
            q,
            words.iter().map(|w| w.to_vec()).collect(),
        )
        .unwrap()
    }

    fn square() -> Code {
        code(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])
    }

    fn triangle() -> Code {
        code(3, &[&[0, 0], &[0, 1], &[1, 1], &[1, 2], &[2, 0], &[2, 2]])
    }

    #[test]
    fn profile_examples() {
        let c = code(2, &[&[0, 0], &[0, 1], &[1, 0]]);
        let p = profile(&c, 0).unwrap();
        assert_eq!(p.set(0), &[vec![0], vec![1]]);
        assert_eq!(p.set(1), &[vec![0]]);
        let p2 = profile(&c, 1).unwrap();
        assert_eq!(p2.set(0), &[vec![0], vec![1]]);
        assert_eq!(p2.set(1), &[vec![0]]);
        assert_eq!(p2.extend(1, &[0]), vec![0, 1]);
        assert!(matches!(
            profile(&c, 2),
            Err(CharacterizationError::CoordinateOutOfRange { coord: 2, n: 2 })
        ));
        let sizes: usize = p.sets().iter().map(Vec::len).sum();
        assert_eq!(sizes, c.len());
    }

    #[test]
    fn fast_checks_on_small_examples() {
        assert!(!is_separable2_fast(&square()).unwrap());
        assert_eq!(
            separable2_violation(&square()).unwrap(),
            Some(Violation::SharedPair {
                a: [0, 1],
                b: [0, 1]
            })
        );
        assert!(is_separable2_fast(&code(2, &[&[0, 0], &[1, 1]])).unwrap());

        assert!(!is_mippc3_fast(&square()).unwrap());
        assert!(is_separable2_fast(&triangle()).unwrap());
        match mippc3_violation(&triangle()).unwrap() {
            Some(Violation::Triangle { mut a, mut b }) => {
                a.sort();
                b.sort();
                assert_eq!((a, b), ([0, 1, 2], [0, 1, 2]));
            }
            other => panic!("expected a triangle, got {other:?}"),
        }
        let three = code(3, &[&[0, 0, 0], &[1, 1, 1]]);
        assert_eq!(
            is_mippc3_fast(&three),
            Err(CharacterizationError::NotLengthTwo(3))
        );
    }

    #[test]
    fn graph_conversion() {
        let g = to_graph(&code(2, &[&[0, 0], &[1, 1]])).unwrap();
        assert_eq!(g.edges(), &[(0, 0), (1, 1)]);
        assert_eq!((g.x_size(), g.y_size()), (2, 2));

        let c4 = code(2, &[&[0, 1, 1, 0]]);
        let g4 = to_graph(&c4).unwrap();
        // x = (0,1) -> 1, y = (1,0) -> 2 in base 2
        assert_eq!(g4.edges(), &[(1, 2)]);
        assert_eq!((g4.x_size(), g4.y_size()), (4, 4));

        let c3 = code(3, &[&[2, 1, 0]]);
        let g3 = to_graph(&c3).unwrap();
        assert_eq!((g3.x_size(), g3.y_size()), (9, 3));
        assert_eq!(g3.edges(), &[(7, 0)]);

        let tiny = Limits {
            max_part_size: 3,
            ..Limits::default()
        };
        assert!(matches!(
            to_graph_with(&c4, &tiny),
            Err(CharacterizationError::PartTooLarge { size: 4, cap: 3 })
        ));

        assert_eq!(from_graph(&g).unwrap(), code(2, &[&[0, 0], &[1, 1]]));
        let single = BipartiteGraph::new(2, 2, vec![(0, 0)]).unwrap();
        assert_eq!(from_graph(&single).unwrap(), code(2, &[&[0, 0]]));
        let lopsided = BipartiteGraph::new(2, 3, vec![(0, 0)]).unwrap();
        assert!(matches!(
            from_graph(&lopsided),
            Err(CharacterizationError::NotSquare { .. })
        ));
        assert_eq!(to_graph(&square()).unwrap().girth(), Some(4));
        assert_eq!(to_graph(&triangle()).unwrap().girth(), Some(6));
    }

    #[test]
    fn packing_conversion() {
        let c = code(3, &[&[0, 0], &[0, 1], &[1, 2]]);
        let p = to_packing(&c).unwrap();
        assert_eq!(p.v(), 3);
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2], vec![]]);
        assert_eq!(from_packing(&p).unwrap(), c);
        assert!(matches!(
            to_packing(&square()),
            Err(CharacterizationError::Packing(
                PackingError::PairCoveredTwice(..)
            ))
        ));
        let short = GeneralizedPacking::new(3, vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            from_packing(&short),
            Err(CharacterizationError::BlockCountMismatch { v: 3, b: 1 })
        ));
        assert!(!is_mippc3_by_packing(&square()).unwrap());
        assert!(!is_mippc3_by_packing(&triangle()).unwrap());
        assert!(!is_mippc3_by_graph(&triangle()).unwrap());
        assert!(is_mippc3_by_graph(&c).unwrap());
    }
}
