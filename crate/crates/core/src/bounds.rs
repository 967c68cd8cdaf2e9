//! Exact size bounds for 3-MIPP codes of length 2.
//!
//! A 3-MIPPC`(2, M, q)` satisfies `f(M) <= 0` with
//! `f(M) = M^3 - 2qM^2 + 2q^2M - q^4`, and `f` is strictly increasing, so the
//! bound is the largest integer root-floor of `f`. All evaluations use `i128`.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::characterization::{to_graph_with, BipartiteGraph, CharacterizationError, Vertex};
use crate::code::{Code, Limits};

/// `f(M) = M^3 - 2qM^2 + 2q^2M - q^4`.
pub fn f(q: u64, m: u64) -> i128 {
    let (q, m) = (i128::from(q), i128::from(m));
    m * m * m - 2 * q * m * m + 2 * q * q * m - q * q * q * q
}

/// Largest `M` with `f(M) <= 0`, by bisection on `[0, q^2]`. `f(0) < 0` and
/// `f(q^2) > 0` for `q >= 2`.
pub fn cubic_max_m(q: u64) -> u64 {
    assert!(q >= 2, "alphabet size must be at least 2");
    // invariant: f(lo) <= 0 < f(hi)
    let (mut lo, mut hi) = (0u64, q * q);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if f(q, mid) <= 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `(a, d)` with `q = ad` and `a = d^2 - 2d + 2`, in which case
/// `f(ad^2) = 0` and the bound is met by `M = ad^2`.
pub fn ad2_witness(q: u64) -> Option<(u64, u64)> {
    (2u64..)
        .map(|d| (d * d - 2 * d + 2, d))
        .take_while(|&(a, _)| a <= q)
        .find(|&(a, d)| a * d == q)
}

/// Discriminant of `f` as a cubic in `M`, from the general formula
/// `18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2`.
pub fn discriminant(q: u64) -> i128 {
    let q = i128::from(q);
    let (a, b, c, d) = (1i128, -2 * q, 2 * q * q, -q * q * q * q);
    18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d
}

/// The closed form `q^6 (40q - 16 - 27q^2)` of [`discriminant`].
pub fn discriminant_closed(q: u64) -> i128 {
    let q = i128::from(q);
    q.pow(6) * (40 * q - 16 - 27 * q * q)
}

/// The unique real root `M0` of `f` by Cardano's formula. Only a cross-check
/// for [`cubic_max_m`]; it is floating point.
pub fn cardano_root(q: u64) -> f64 {
    let q = q as f64;
    // M = y + 2q/3 gives y^3 + p y + r = 0
    let p = 2.0 * q * q / 3.0;
    let r = 20.0 * q.powi(3) / 27.0 - q.powi(4);
    let s = (r * r / 4.0 + p.powi(3) / 27.0).sqrt();
    let u = (-r / 2.0 + s).cbrt();
    // the two cube roots multiply to -p/3; avoids cancellation in the second
    u - p / (3.0 * u) + 2.0 * q / 3.0
}

/// True when `floor(M0)` agrees with the integer bound up to a relative
/// tolerance of `1e-6`.
pub fn cardano_agrees(q: u64) -> bool {
    let root = cardano_root(q);
    let max = cubic_max_m(q) as f64;
    let tol = 1e-6 * root;
    max <= root + tol && root < max + 1.0 + tol
}

/// `M / cubic_max_m(q)` for a code of length 2.
pub fn asymptotic_ratio(code: &Code) -> Ratio<u64> {
    assert_eq!(code.n(), 2, "ratio is defined for length-2 codes");
    Ratio::new(code.len() as u64, cubic_max_m(u64::from(code.q())))
}

/// Result of [`cycle_free_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCheck {
    pub girth: Option<usize>,
    /// A shortest cycle when one of length `<= 2t` exists.
    pub witness: Option<Vec<Vertex>>,
}

impl CycleCheck {
    pub fn is_free(&self) -> bool {
        self.witness.is_none()
    }
}

/// Whether the prefix/suffix graph of `code` has no cycle of length at most
/// `2t`. A necessary condition for `t`-MIPP.
pub fn cycle_free_check(
    code: &Code,
    t: usize,
    limits: &Limits,
) -> Result<CycleCheck, CharacterizationError> {
    let graph = to_graph_with(code, limits)?;
    let girth = graph.girth();
    let witness = match girth {
        Some(g) if g <= 2 * t => graph.shortest_cycle(),
        _ => None,
    };
    Ok(CycleCheck { girth, witness })
}

/// For a graph of girth at least 8 with parts `u`, `v` and `e` edges,
/// `e^3 - (u+v)e^2 + 2uve - u^2v^2 <= 0`. Graphs with shorter cycles pass
/// vacuously.
pub fn graph_size_bound_check(graph: &BipartiteGraph) -> bool {
    if graph.girth().is_some_and(|g| g < 8) {
        return true;
    }
    graph_size_polynomial(graph) <= 0
}

pub fn graph_size_polynomial(graph: &BipartiteGraph) -> i128 {
    let u = graph.x_size() as i128;
    let v = graph.y_size() as i128;
    let e = graph.edge_count() as i128;
    e * e * e - (u + v) * e * e + 2 * u * v * e - u * u * v * v
}

/// Bound summary for an alphabet size and optionally a code.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub max_m_cubic: u64,
    pub f_at_max: String,
    pub ad2_witness: Option<(u64, u64)>,
    pub cardano_root_approx: f64,
    pub code_size: Option<u64>,
    /// Exact `M / max_m_cubic` as `num/den`.
    pub ratio: Option<String>,
    pub ratio_approx: Option<f64>,
    pub within_bound: Option<bool>,
}

impl BoundReport {
    /// `code` must have length 2 and alphabet `q`.
    pub fn new(q: u64, code: Option<&Code>) -> Self {
        let max = cubic_max_m(q);
        let ratio = code.map(|c| Ratio::new(c.len() as u64, max));
        BoundReport {
            q,
            max_m_cubic: max,
            f_at_max: f(q, max).to_string(),
            ad2_witness: ad2_witness(q),
            cardano_root_approx: cardano_root(q),
            code_size: code.map(|c| c.len() as u64),
            ratio: ratio.map(|r| format!("{}/{}", r.numer(), r.denom())),
            ratio_approx: ratio.map(|r| *r.numer() as f64 / *r.denom() as f64),
            within_bound: code.map(|c| c.len() as u64 <= max),
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={}", self.q)?;
        writeln!(f, "max_m_cubic={}", self.max_m_cubic)?;
        writeln!(f, "f(max_m_cubic)={}", self.f_at_max)?;
        match self.ad2_witness {
            Some((a, d)) => writeln!(f, "ad2_witness=({a},{d})")?,
            None => writeln!(f, "ad2_witness=none")?,
        }
        writeln!(f, "cardano_root approx={:.6}", self.cardano_root_approx)?;
        if let (Some(m), Some(r), Some(x), Some(w)) = (
            self.code_size,
            &self.ratio,
            self.ratio_approx,
            self.within_bound,
        ) {
            writeln!(f, "code_size={m}")?;
            writeln!(f, "ratio={r} approx={x:.6}")?;
            writeln!(f, "within_bound={w}")?;
        }
        Ok(())
    }
}
