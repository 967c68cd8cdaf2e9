//! `(n, M, q)` codes, descendant sets, exhaustive verification of the
//! multimedia identifiable parent property and of separability, the tracing
//! algorithm, and the q-ary to binary composition.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::text::{content_lines, header, parse_numbers, ParseError};

pub type Symbol = u32;

/// Default budget for the number of subsets brute-force verification may
/// enumerate.
pub const DEFAULT_MAX_SUBSETS: u128 = 10_000_000;

/// Default cap on the size of each vertex class of an induced bipartite graph.
pub const DEFAULT_MAX_PART_SIZE: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code length must be at least 2, got {0}")]
    LengthTooShort(usize),
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
    #[error("a code needs at least one codeword")]
    Empty,
    #[error("codeword {index} has length {len}, expected {n}")]
    WrongLength { index: usize, len: usize, n: usize },
    #[error("codeword {index} contains symbol {symbol} outside [0, {q})")]
    SymbolOutOfRange {
        index: usize,
        symbol: Symbol,
        q: u32,
    },
    #[error("duplicate codeword {0:?}")]
    Duplicate(Vec<Symbol>),
    #[error("subset of codewords must be nonempty")]
    EmptySubset,
    #[error("codeword index {index} out of range for a code of size {m}")]
    IndexOutOfRange { index: usize, m: usize },
    #[error("coalition size bound t must be at least 1")]
    ZeroT,
    #[error("descendant set has {got} coordinates, code length is {n}")]
    EvidenceLength { got: usize, n: usize },
    #[error("descendant set coordinate {0} is empty")]
    EmptyCoordinate(usize),
    #[error("descendant set has no parent set of size at most {t}")]
    NoParentSet { t: usize },
    #[error("{subsets} subsets of size at most {t} exceed the brute-force budget of {cap}")]
    SubsetBudget { subsets: u128, t: usize, cap: u128 },
    #[error("expected a binary code, alphabet size is {0}")]
    NotBinary(u32),
}

/// Resource limits for the exhaustive kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_subsets: u128,
    pub max_part_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_subsets: DEFAULT_MAX_SUBSETS,
            max_part_size: DEFAULT_MAX_PART_SIZE,
        }
    }
}

/// A q-ary code of length `n` with `M` distinct codewords, stored in
/// lexicographic order. Codeword indices always refer to this order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Code {
    n: usize,
    q: u32,
    symbols: Vec<Symbol>,
}

impl Code {
    pub fn new(n: usize, q: u32, words: Vec<Vec<Symbol>>) -> Result<Self, CodeError> {
        if n < 2 {
            return Err(CodeError::LengthTooShort(n));
        }
        if q < 2 {
            return Err(CodeError::AlphabetTooSmall(q));
        }
        if words.is_empty() {
            return Err(CodeError::Empty);
        }
        for (index, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(CodeError::WrongLength {
                    index,
                    len: w.len(),
                    n,
                });
            }
            if let Some(&symbol) = w.iter().find(|&&s| s >= q) {
                return Err(CodeError::SymbolOutOfRange { index, symbol, q });
            }
        }
        let mut words = words;
        words.sort_unstable();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(CodeError::Duplicate(pair[0].clone()));
        }
        Ok(Code {
            n,
            q,
            symbols: words.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of codewords `M`.
    pub fn len(&self) -> usize {
        self.symbols.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn word(&self, index: usize) -> &[Symbol] {
        &self.symbols[index * self.n..(index + 1) * self.n]
    }

    pub fn words(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.symbols.chunks_exact(self.n)
    }

    pub fn index_of(&self, word: &[Symbol]) -> Option<usize> {
        let m = self.len();
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.word(mid).cmp(word) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Parses the `n q M` text format. Codewords are canonicalized.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let lines = content_lines(text, false);
        let [n, q, m] = header::<3>(&lines, "code")?;
        let body = &lines[1..];
        if body.len() != m {
            let line = body.last().map_or(lines[0].0, |l| l.0);
            return Err(ParseError::new(
                line,
                format!("header declares {m} codewords, found {}", body.len()),
            ));
        }
        let mut words = Vec::with_capacity(m);
        for &(line, text) in body {
            let word: Vec<Symbol> = parse_numbers(line, text)?;
            if word.len() != n {
                return Err(ParseError::new(
                    line,
                    format!("expected {n} symbols, found {}", word.len()),
                ));
            }
            words.push(word);
        }
        let q =
            u32::try_from(q).map_err(|_| ParseError::new(lines[0].0, "alphabet size too large"))?;
        Code::new(n, q, words).map_err(|e| ParseError::new(lines[0].0, e.to_string()))
    }

    /// Serializes with each entry of `comments` written as a leading `#` line.
    pub fn to_text_with_comments(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.to_string());
        out
    }

    fn check_indices(&self, subset: &[usize]) -> Result<(), CodeError> {
        if subset.is_empty() {
            return Err(CodeError::EmptySubset);
        }
        let m = self.len();
        match subset.iter().find(|&&i| i >= m) {
            Some(&index) => Err(CodeError::IndexOutOfRange { index, m }),
            None => Ok(()),
        }
    }

    fn check_evidence(&self, s: &DescendantSet) -> Result<(), CodeError> {
        if s.len() != self.n {
            return Err(CodeError::EvidenceLength {
                got: s.len(),
                n: self.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n, self.q, self.len())?;
        for w in self.words() {
            writeln!(f, "{}", join(w, " "))?;
        }
        Ok(())
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// A product set `S(1) x ... x S(n)` given by its nonempty coordinate sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescendantSet {
    sets: Vec<Vec<Symbol>>,
}

impl DescendantSet {
    pub fn new(sets: Vec<Vec<Symbol>>) -> Result<Self, CodeError> {
        let mut sets = sets;
        for (i, s) in sets.iter_mut().enumerate() {
            if s.is_empty() {
                return Err(CodeError::EmptyCoordinate(i));
            }
            s.sort_unstable();
            s.dedup();
        }
        Ok(DescendantSet { sets })
    }

    /// Parses `0,1;2;1,3`: coordinates split by `;`, symbols by `,`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut sets = Vec::new();
        for (i, part) in text.trim().split(';').enumerate() {
            let set: Result<Vec<Symbol>, _> = part
                .split(',')
                .map(|tok| tok.trim())
                .filter(|tok| !tok.is_empty())
                .map(|tok| tok.parse::<Symbol>())
                .collect();
            let set =
                set.map_err(|_| ParseError::new(1, format!("bad symbol in coordinate {}", i + 1)))?;
            sets.push(set);
        }
        DescendantSet::new(sets).map_err(|e| ParseError::new(1, e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn coordinate(&self, i: usize) -> &[Symbol] {
        &self.sets[i]
    }

    pub fn coordinates(&self) -> &[Vec<Symbol>] {
        &self.sets
    }

    /// Whether `word` lies in the product set.
    pub fn contains(&self, word: &[Symbol]) -> bool {
        word.len() == self.sets.len()
            && word
                .iter()
                .zip(&self.sets)
                .all(|(s, set)| set.binary_search(s).is_ok())
    }

    /// Number of words in the product set, saturating.
    pub fn size(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }
}

impl fmt::Display for DescendantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sets.iter().map(|s| join(s, ",")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Result of the tracing algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOutcome {
    /// Codeword indices common to every parent set.
    Identified(Vec<usize>),
    /// The coalition must have at least `t + 1` members. Unreachable from
    /// [`trace`], whose intersection is bounded by its smallest parent set.
    Overflow,
}

pub fn desc(code: &Code, subset: &[usize]) -> Result<DescendantSet, CodeError> {
    code.check_indices(subset)?;
    let sets = (0..code.n)
        .map(|i| subset.iter().map(|&w| code.word(w)[i]).collect())
        .collect();
    DescendantSet::new(sets)
}

/// Number of nonempty subsets of size at most `t` of an `m`-set, saturating.
pub fn subset_count(m: usize, t: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 1..=t.min(m) {
        binom = binom.saturating_mul((m - k + 1) as u128) / k as u128;
        total = total.saturating_add(binom);
    }
    total
}

/// Calls `f` on every subset of `pool` of size `1..=t` whose smallest element
/// is `pool[first]`, in lexicographic order.
fn for_each_subset_from(pool: &[usize], first: usize, t: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(
        pool: &[usize],
        start: usize,
        t: usize,
        cur: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        f(cur);
        if cur.len() == t {
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            rec(pool, i + 1, t, cur, f);
            cur.pop();
        }
    }
    if t == 0 {
        return;
    }
    let mut cur = vec![pool[first]];
    rec(pool, first + 1, t, &mut cur, f);
}

/// Canonical grouping key of `desc(subset)`: sorted coordinate sets
/// separated by `Symbol::MAX`.
fn descendant_key(code: &Code, subset: &[usize], key: &mut Vec<Symbol>, scratch: &mut Vec<Symbol>) {
    key.clear();
    for i in 0..code.n {
        scratch.clear();
        scratch.extend(subset.iter().map(|&w| code.word(w)[i]));
        scratch.sort_unstable();
        scratch.dedup();
        key.extend_from_slice(scratch);
        key.push(Symbol::MAX);
    }
}

#[derive(Debug, Clone)]
struct Group {
    members: u64,
    common: Vec<usize>,
}

impl Group {
    fn merge(&mut self, other: &Group) {
        self.members += other.members;
        self.common
            .retain(|x| other.common.binary_search(x).is_ok());
    }
}

/// Groups every subset of size `<= t` by its descendant set. Work is split
/// by smallest element; merging is commutative so the result does not depend
/// on scheduling.
fn descendant_groups(
    code: &Code,
    t: usize,
    limits: &Limits,
) -> Result<HashMap<Vec<Symbol>, Group>, CodeError> {
    if t == 0 {
        return Err(CodeError::ZeroT);
    }
    let m = code.len();
    let subsets = subset_count(m, t);
    if subsets > limits.max_subsets {
        return Err(CodeError::SubsetBudget {
            subsets,
            t,
            cap: limits.max_subsets,
        });
    }
    let pool: Vec<usize> = (0..m).collect();
    let merge = |a: HashMap<Vec<Symbol>, Group>, b: HashMap<Vec<Symbol>, Group>| {
        let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        for (k, g) in small {
            match big.get_mut(&k) {
                Some(existing) => existing.merge(&g),
                None => {
                    big.insert(k, g);
                }
            }
        }
        big
    };
    let groups = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut map: HashMap<Vec<Symbol>, Group> = HashMap::new();
            let mut key = Vec::new();
            let mut scratch = Vec::new();
            for_each_subset_from(&pool, first, t, &mut |subset| {
                descendant_key(code, subset, &mut key, &mut scratch);
                match map.get_mut(key.as_slice()) {
                    Some(g) => g.merge(&Group {
                        members: 1,
                        common: subset.to_vec(),
                    }),
                    None => {
                        map.insert(
                            key.clone(),
                            Group {
                                members: 1,
                                common: subset.to_vec(),
                            },
                        );
                    }
                }
            });
            map
        })
        .reduce(HashMap::new, merge);
    Ok(groups)
}

/// Whether distinct subcodes of size `<= t` always have distinct descendant
/// sets.
pub fn is_separable(code: &Code, t: usize) -> Result<bool, CodeError> {
    is_separable_with(code, t, &Limits::default())
}

pub fn is_separable_with(code: &Code, t: usize, limits: &Limits) -> Result<bool, CodeError> {
    let groups = descendant_groups(code, t, limits)?;
    Ok(groups.values().all(|g| g.members == 1))
}

/// Exhaustive check of the multimedia identifiable parent property: every
/// descendant set reachable by subcodes of size `<= t` has a codeword common
/// to all of them.
pub fn is_mippc(code: &Code, t: usize) -> Result<bool, CodeError> {
    is_mippc_with(code, t, &Limits::default())
}

pub fn is_mippc_with(code: &Code, t: usize, limits: &Limits) -> Result<bool, CodeError> {
    let groups = descendant_groups(code, t, limits)?;
    Ok(groups.values().all(|g| !g.common.is_empty()))
}

/// All subcodes of size `<= t` whose descendant set is exactly `s`, ordered
/// by size and then lexicographically.
pub fn parent_sets(code: &Code, s: &DescendantSet, t: usize) -> Result<Vec<Vec<usize>>, CodeError> {
    if t == 0 {
        return Err(CodeError::ZeroT);
    }
    code.check_evidence(s)?;
    // Only codewords inside the product set can be parents.
    let candidates: Vec<usize> = (0..code.len())
        .filter(|&i| s.contains(code.word(i)))
        .collect();
    let mut target = Vec::new();
    let mut scratch = Vec::new();
    for set in s.coordinates() {
        target.extend_from_slice(set);
        target.push(Symbol::MAX);
    }
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); t];
    let mut key = Vec::new();
    for first in 0..candidates.len() {
        for_each_subset_from(&candidates, first, t, &mut |subset| {
            descendant_key(code, subset, &mut key, &mut scratch);
            if key == target {
                by_size[subset.len() - 1].push(subset.to_vec());
            }
        });
    }
    Ok(by_size
        .into_iter()
        .flat_map(|mut v| {
            v.sort();
            v
        })
        .collect())
}

/// The tracing algorithm: intersect all parent sets of the evidence.
///
/// Evidence without any parent set of size `<= t` cannot come from a
/// coalition of at most `t` users and is rejected.
pub fn trace(code: &Code, s: &DescendantSet, t: usize) -> Result<TraceOutcome, CodeError> {
    let parents = parent_sets(code, s, t)?;
    let (first, rest) = parents.split_first().ok_or(CodeError::NoParentSet { t })?;
    let mut common = first.clone();
    for p in rest {
        common.retain(|x| p.binary_search(x).is_ok());
    }
    // Always true while a parent set exists; kept as the algorithm's guard.
    if common.len() <= t {
        Ok(TraceOutcome::Identified(common))
    } else {
        Ok(TraceOutcome::Overflow)
    }
}

/// Replaces every symbol `i` by the unit vector `e_(i+1)` of length `q`,
/// giving an `(nq, M, 2)` code.
pub fn to_binary(code: &Code) -> Code {
    let q = code.q as usize;
    let words: Vec<Vec<Symbol>> = code
        .words()
        .map(|w| {
            let mut out = vec![0; code.n * q];
            for (i, &s) in w.iter().enumerate() {
                out[i * q + s as usize] = 1;
            }
            out
        })
        .collect();
    Code::new(code.n * q, 2, words)
        .expect("distinct codewords stay distinct under a bijective symbol map")
}
