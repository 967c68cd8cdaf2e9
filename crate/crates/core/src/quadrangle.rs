//! Finite generalized quadrangles: axiom checking, the classical
//! constructions of orders `(k, k)` and `(k - 1, k + 1)`, and point-line
//! duality.
//!
//! A GQ of order `(s, t)` has lines of `1 + s` points, `1 + t` lines through
//! every point, at most one line through two points, and for every point `x`
//! off a line `L` exactly one point of `L` collinear with `x`. Such a
//! geometry has `(1 + s)(1 + st)` points and `(1 + t)(1 + st)` lines.
//!
//! Orders `(k, k^2)` and `(k^2, k^3)` also exist for every prime power `k`
//! (elliptic quadric and Hermitian quadrangles) but are not constructed here.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::characterization::{GeneralizedPacking, PackingError};
use crate::field::{
    pg3_points, point_index, prime_power, FieldError, FiniteField, ProjectivePoint,
};
use crate::text::{content_lines, header, parse_numbers, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GqError {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("this construction needs {expected} k, got {k}")]
    WrongParity { k: usize, expected: &'static str },
    #[error("line {line} contains point {point} outside [0, {points})")]
    PointOutOfRange {
        line: usize,
        point: usize,
        points: usize,
    },
    #[error("line {line} repeats point {point}")]
    RepeatedPoint { line: usize, point: usize },
    #[error("order parameters must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("not a generalized quadrangle: {0}")]
    Verification(GqViolation),
}

/// The first axiom violation found by [`GeneralizedQuadrangle::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GqViolation {
    PointDegree {
        point: usize,
        degree: usize,
        expected: usize,
    },
    PointsOnTwoLines {
        points: [usize; 2],
        lines: [usize; 2],
    },
    LineSize {
        line: usize,
        size: usize,
        expected: usize,
    },
    Perpendicular {
        point: usize,
        line: usize,
        collinear: usize,
    },
    Counts {
        points: usize,
        lines: usize,
        expected_points: usize,
        expected_lines: usize,
    },
}

impl GqViolation {
    /// Number of the violated axiom; 0 for a parameter-count mismatch.
    pub fn axiom(&self) -> u8 {
        match self {
            GqViolation::PointDegree { .. } | GqViolation::PointsOnTwoLines { .. } => 1,
            GqViolation::LineSize { .. } => 2,
            GqViolation::Perpendicular { .. } => 3,
            GqViolation::Counts { .. } => 0,
        }
    }
}

impl fmt::Display for GqViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom ({}): ", self.axiom())?;
        match self {
            GqViolation::PointDegree {
                point,
                degree,
                expected,
            } => {
                write!(f, "point {point} is on {degree} lines, expected {expected}")
            }
            GqViolation::PointsOnTwoLines { points, lines } => write!(
                f,
                "points {} and {} share lines {} and {}",
                points[0], points[1], lines[0], lines[1]
            ),
            GqViolation::LineSize {
                line,
                size,
                expected,
            } => {
                write!(f, "line {line} has {size} points, expected {expected}")
            }
            GqViolation::Perpendicular {
                point,
                line,
                collinear,
            } => write!(
                f,
                "point {point} is collinear with {collinear} points of line {line}, expected 1"
            ),
            GqViolation::Counts {
                points,
                lines,
                expected_points,
                expected_lines,
            } => write!(
                f,
                "{points} points and {lines} lines, expected {expected_points} and {expected_lines}"
            ),
        }
    }
}

/// Points `0..v` and lines as sorted point sets, lines in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedQuadrangle {
    points: usize,
    lines: Vec<Vec<usize>>,
    s: usize,
    t: usize,
}

impl GeneralizedQuadrangle {
    /// Canonicalizes an incidence structure with claimed order `(s, t)`.
    /// The axioms are not checked here; see [`verify`](Self::verify).
    pub fn new(points: usize, lines: Vec<Vec<usize>>, s: usize, t: usize) -> Result<Self, GqError> {
        if s == 0 || t == 0 {
            return Err(GqError::ZeroOrder);
        }
        let mut lines = lines;
        for (line, l) in lines.iter_mut().enumerate() {
            if let Some(&point) = l.iter().find(|&&p| p >= points) {
                return Err(GqError::PointOutOfRange {
                    line,
                    point,
                    points,
                });
            }
            l.sort_unstable();
            if let Some(w) = l.windows(2).find(|w| w[0] == w[1]) {
                return Err(GqError::RepeatedPoint { line, point: w[0] });
            }
        }
        lines.sort();
        Ok(GeneralizedQuadrangle {
            points,
            lines,
            s,
            t,
        })
    }

    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Vec<usize>] {
        &self.lines
    }

    /// Claimed order `(s, t)`.
    pub fn order(&self) -> (usize, usize) {
        (self.s, self.t)
    }

    /// For each point, the indices of the lines through it, ascending.
    pub fn pencils(&self) -> Vec<Vec<usize>> {
        let mut pencils = vec![Vec::new(); self.points];
        for (i, l) in self.lines.iter().enumerate() {
            for &p in l {
                pencils[p].push(i);
            }
        }
        pencils
    }

    /// Exhaustive axiom check against the claimed order.
    pub fn verify(&self) -> Result<(), GqViolation> {
        let (s, t) = (self.s, self.t);
        let pencils = self.pencils();
        if let Some((point, p)) = pencils.iter().enumerate().find(|(_, p)| p.len() != t + 1) {
            return Err(GqViolation::PointDegree {
                point,
                degree: p.len(),
                expected: t + 1,
            });
        }
        // joining[x * v + y] = 1 + index of the line through x and y.
        let v = self.points;
        let mut joining = vec![0usize; v * v];
        for (i, l) in self.lines.iter().enumerate() {
            for &x in l {
                for &y in l {
                    if x == y {
                        continue;
                    }
                    let slot = &mut joining[x * v + y];
                    if *slot != 0 {
                        return Err(GqViolation::PointsOnTwoLines {
                            points: [x.min(y), x.max(y)],
                            lines: [*slot - 1, i],
                        });
                    }
                    *slot = i + 1;
                }
            }
        }
        if let Some((line, l)) = self
            .lines
            .iter()
            .enumerate()
            .find(|(_, l)| l.len() != s + 1)
        {
            return Err(GqViolation::LineSize {
                line,
                size: l.len(),
                expected: s + 1,
            });
        }
        for x in 0..v {
            let row = &joining[x * v..(x + 1) * v];
            for (i, l) in self.lines.iter().enumerate() {
                if l.binary_search(&x).is_ok() {
                    continue;
                }
                let collinear = l.iter().filter(|&&y| row[y] != 0).count();
                if collinear != 1 {
                    return Err(GqViolation::Perpendicular {
                        point: x,
                        line: i,
                        collinear,
                    });
                }
            }
        }
        let expected_points = (1 + s) * (1 + s * t);
        let expected_lines = (1 + t) * (1 + s * t);
        if v != expected_points || self.lines.len() != expected_lines {
            return Err(GqViolation::Counts {
                points: v,
                lines: self.lines.len(),
                expected_points,
                expected_lines,
            });
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let lines = content_lines(text, false);
        let [v, b, s, t] = header::<4>(&lines, "quadrangle")?;
        let body = &lines[1..];
        if body.len() != b {
            return Err(ParseError::new(
                lines[0].0,
                format!("header declares {b} lines, found {}", body.len()),
            ));
        }
        let mut point_sets = Vec::with_capacity(b);
        for &(line, text) in body {
            point_sets.push(parse_numbers(line, text)?);
        }
        GeneralizedQuadrangle::new(v, point_sets, s, t)
            .map_err(|e| ParseError::new(lines[0].0, e.to_string()))
    }
}

impl fmt::Display for GeneralizedQuadrangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {} {}",
            self.points,
            self.lines.len(),
            self.s,
            self.t
        )?;
        for l in &self.lines {
            let parts: Vec<String> = l.iter().map(|p| p.to_string()).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

pub fn verify_gq(gq: &GeneralizedQuadrangle) -> Result<(), GqViolation> {
    gq.verify()
}

fn checked(gq: GeneralizedQuadrangle) -> Result<GeneralizedQuadrangle, GqError> {
    if cfg!(debug_assertions) {
        gq.verify().map_err(GqError::Verification)?;
    }
    Ok(gq)
}

fn field_for(k: usize) -> Result<FiniteField, GqError> {
    let k32 = u32::try_from(k).map_err(|_| GqError::NotPrimePower(k))?;
    prime_power(k32).ok_or(GqError::NotPrimePower(k))?;
    Ok(FiniteField::of_order(k32)?)
}

/// The symplectic quadrangle W(3, k) of order `(k, k)`: all points of
/// PG(3, k) and the lines totally isotropic for
/// `x0 y1 - x1 y0 + x2 y3 - x3 y2`.
pub fn w3(k: usize) -> Result<GeneralizedQuadrangle, GqError> {
    let f = field_for(k)?;
    let pts = pg3_points(&f);
    let index = point_index(&pts);
    let form = |x: [u32; 4], y: [u32; 4]| {
        let a = f.sub(f.mul(x[0], y[1]), f.mul(x[1], y[0]));
        let b = f.sub(f.mul(x[2], y[3]), f.mul(x[3], y[2]));
        f.add(a, b)
    };
    let mut lines = BTreeSet::new();
    for (i, p) in pts.iter().enumerate() {
        for r in &pts[i + 1..] {
            if form(p.coords(), r.coords()) != 0 {
                continue;
            }
            let mut line = vec![i];
            for a in f.elements() {
                let mut c = [0u32; 4];
                for (slot, (&x, &y)) in c.iter_mut().zip(p.coords().iter().zip(r.coords().iter())) {
                    *slot = f.add(f.mul(a, x), y);
                }
                let n = ProjectivePoint::normalize(&f, c).expect("independent points span a line");
                line.push(index[&n]);
            }
            line.sort_unstable();
            lines.insert(line);
        }
    }
    checked(GeneralizedQuadrangle::new(
        pts.len(),
        lines.into_iter().collect(),
        k,
        k,
    )?)
}

/// Index of the affine point `(x, y, z)` over GF(k).
fn affine_index(k: usize, p: [u32; 3]) -> usize {
    (p[0] as usize * k + p[1] as usize) * k + p[2] as usize
}

fn affine_point(k: usize, index: usize) -> [u32; 3] {
    [
        (index / (k * k)) as u32,
        (index / k % k) as u32,
        (index % k) as u32,
    ]
}

/// T2*(O) of order `(k - 1, k + 1)` for `k` a power of 2. Points are the
/// affine points of AG(3, k); lines are the affine lines whose direction lies
/// on the hyperoval `{(1, t, t^2)} ∪ {(0, 1, 0), (0, 0, 1)}` of the plane at
/// infinity.
pub fn t2_star(k: usize) -> Result<GeneralizedQuadrangle, GqError> {
    let f = field_for(k)?;
    if f.characteristic() != 2 {
        return Err(GqError::WrongParity {
            k,
            expected: "a power of 2 for",
        });
    }
    let mut directions: Vec<[u32; 3]> = f.elements().map(|t| [1, t, f.mul(t, t)]).collect();
    directions.push([0, 1, 0]);
    directions.push([0, 0, 1]);

    let v = k * k * k;
    let mut lines = Vec::with_capacity(directions.len() * k * k);
    for d in &directions {
        let mut seen = vec![false; v];
        for start in 0..v {
            if seen[start] {
                continue;
            }
            let p = affine_point(k, start);
            let line: Vec<usize> = f
                .elements()
                .map(|lambda| {
                    let q = [0, 1, 2].map(|i| f.add(p[i], f.mul(lambda, d[i])));
                    affine_index(k, q)
                })
                .collect();
            for &x in &line {
                seen[x] = true;
            }
            lines.push(line);
        }
    }
    checked(GeneralizedQuadrangle::new(v, lines, k - 1, k + 1)?)
}

/// The Ahrens–Szekeres quadrangle AS(k) of order `(k - 1, k + 1)` for odd
/// `k`, on the points of AG(3, k) with the curves
/// `(σ, a, b)`, `(a, σ, b)` and `(cσ² - bσ + a, -2cσ + b, σ)`.
pub fn as_q(k: usize) -> Result<GeneralizedQuadrangle, GqError> {
    let f = field_for(k)?;
    if f.characteristic() == 2 {
        return Err(GqError::WrongParity { k, expected: "odd" });
    }
    let two = f.add(1, 1);
    let mut lines = Vec::with_capacity(k * k * (k + 2));
    for a in f.elements() {
        for b in f.elements() {
            lines.push(f.elements().map(|x| affine_index(k, [x, a, b])).collect());
            lines.push(f.elements().map(|y| affine_index(k, [a, y, b])).collect());
            for c in f.elements() {
                let line = f
                    .elements()
                    .map(|sigma| {
                        let x = f.add(f.sub(f.mul(c, f.mul(sigma, sigma)), f.mul(b, sigma)), a);
                        let y = f.add(f.neg(f.mul(two, f.mul(c, sigma))), b);
                        affine_index(k, [x, y, sigma])
                    })
                    .collect();
                lines.push(line);
            }
        }
    }
    checked(GeneralizedQuadrangle::new(k * k * k, lines, k - 1, k + 1)?)
}

/// Swaps points and lines: the new points are the old lines, and every old
/// point becomes the line of old lines through it.
pub fn dualize(gq: &GeneralizedQuadrangle) -> Result<GeneralizedQuadrangle, GqError> {
    gq.verify().map_err(GqError::Verification)?;
    let (s, t) = gq.order();
    checked(GeneralizedQuadrangle::new(
        gq.line_count(),
        gq.pencils(),
        t,
        s,
    )?)
}

/// Lines as blocks on the point set.
pub fn gq_to_packing(gq: &GeneralizedQuadrangle) -> Result<GeneralizedPacking, PackingError> {
    GeneralizedPacking::new(gq.point_count(), gq.lines().to_vec())
}

/// The GQ families this crate constructs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// W(3, k), order `(k, k)`.
    W3,
    /// T2*(O), order `(k - 1, k + 1)`, `k` even.
    T2Star,
    /// AS(k), order `(k - 1, k + 1)`, `k` odd.
    As,
    /// Dual of T2*(O), order `(k + 1, k - 1)`.
    DualT2Star,
    /// Dual of AS(k), order `(k + 1, k - 1)`.
    DualAs,
}

impl Family {
    pub fn build(self, k: usize) -> Result<GeneralizedQuadrangle, GqError> {
        match self {
            Family::W3 => w3(k),
            Family::T2Star => t2_star(k),
            Family::As => as_q(k),
            Family::DualT2Star => dualize(&t2_star(k)?),
            Family::DualAs => dualize(&as_q(k)?),
        }
    }
}

/// A GQ of order `(k - 1, k + 1)`: T2*(O) for even `k`, AS(k) for odd `k`.
pub fn order_k_minus_1(k: usize) -> Result<GeneralizedQuadrangle, GqError> {
    if k.is_multiple_of(2) {
        t2_star(k)
    } else {
        as_q(k)
    }
}
