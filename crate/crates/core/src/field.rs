//! Finite fields GF(p^m) with table-driven multiplication, and the points of
//! the projective space PG(3, q) over them.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! code are the polynomial coefficients, least significant digit first. So in
//! GF(4) built on `x^2 + x + 1`, the code `2` is `x` and `3` is `x + 1`.

use std::collections::HashMap;

use thiserror::Error;

/// Largest field order accepted by [`FiniteField::new`] unless a different cap
/// is passed to [`FiniteField::with_cap`].
pub const DEFAULT_ORDER_CAP: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the cap {cap}")]
    TooLarge { p: u32, m: u32, cap: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// A finite field of order `q = p^m`.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// Coefficients `c_0..=c_m` of the monic modulus, low degree first.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u32, m: u32) -> Result<Self, FieldError> {
        Self::with_cap(p, m, DEFAULT_ORDER_CAP)
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn of_order(q: u32) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, m)
    }

    pub fn with_cap(p: u32, m: u32, cap: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= cap as u64);
        let q = q.ok_or(FieldError::TooLarge { p, m, cap })? as u32;

        let modulus = smallest_irreducible(p, m as usize);
        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_log_tables();
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; the last entry is always 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.m == 1 {
            return (a + b) % self.p;
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] + self.log[b as usize];
        self.exp[(e % (self.q - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::InverseOfZero);
        }
        let l = self.log[a as usize];
        Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * e;
        self.exp[(l % (self.q as u64 - 1)) as usize]
    }

    fn build_log_tables(&mut self) {
        let order = (self.q - 1) as usize;
        // Any element whose powers reach all q-1 units generates the group.
        for g in 1..self.q {
            let mut exp = Vec::with_capacity(order);
            let mut x = 1;
            for _ in 0..order {
                exp.push(x);
                x = self.mul_slow(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() == order {
                let mut log = vec![0; self.q as usize];
                for (i, &v) in exp.iter().enumerate() {
                    log[v as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let pa = digits(a, self.p, self.m as usize);
        let pb = digits(b, self.p, self.m as usize);
        let prod = poly_mul(&pa, &pb, self.p);
        let r = poly_rem(&prod, &self.modulus, self.p);
        undigits(&r, self.p)
    }
}

fn digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(a % p);
        a /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * c) % p;
            }
        }
        r.pop();
    }
    r.resize(dm, 0);
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest monic irreducible polynomial of degree `m`,
/// comparing coefficients from the highest degree down.
fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    (0..p.pow(m as u32))
        .map(|low| {
            let mut poly = digits(low, p, m);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("irreducible polynomials exist in every degree")
}

/// A point of PG(3, q) as a homogeneous 4-tuple whose first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint(pub [u32; 4]);

impl ProjectivePoint {
    /// Scales a nonzero vector so its first nonzero coordinate is 1.
    /// Returns `None` for the zero vector.
    pub fn normalize(field: &FiniteField, coords: [u32; 4]) -> Option<Self> {
        let lead = coords.iter().copied().find(|&c| c != 0)?;
        let s = field.inv(lead).ok()?;
        Some(ProjectivePoint(coords.map(|c| field.mul(c, s))))
    }

    pub fn coords(&self) -> [u32; 4] {
        self.0
    }
}

/// All `q^3 + q^2 + q + 1` points of PG(3, q), sorted by coordinates.
pub fn pg3_points(field: &FiniteField) -> Vec<ProjectivePoint> {
    let q = field.order();
    let mut points = Vec::with_capacity(((q as usize).pow(4) - 1) / (q as usize - 1));
    for lead in 0..4 {
        let free = 3 - lead;
        for code in 0..q.pow(free as u32) {
            let mut coords = [0u32; 4];
            coords[lead] = 1;
            let mut c = code;
            for slot in (lead + 1..4).rev() {
                coords[slot] = c % q;
                c /= q;
            }
            points.push(ProjectivePoint(coords));
        }
    }
    points.sort();
    points
}

/// Index of each point in a point list, keyed by normal form.
pub fn point_index(points: &[ProjectivePoint]) -> HashMap<ProjectivePoint, usize> {
    points.iter().enumerate().map(|(i, &p)| (p, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields_use_modulus_x() {
        let f = FiniteField::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f3.mul(2, 2), 1);
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
    }

    #[test]
    fn gf4_modulus_is_only_irreducible_quadratic() {
        // Brute force: the monic quadratics over GF(2) are x^2, x^2+1,
        // x^2+x, x^2+x+1; only the last has no root in GF(2).
        let rooted = |c0: u32, c1: u32| (0..2).any(|x| (x * x + c1 * x + c0).is_multiple_of(2));
        let irreducible: Vec<_> = (0..4)
            .map(|low| (low % 2, low / 2))
            .filter(|&(c0, c1)| !rooted(c0, c1))
            .collect();
        assert_eq!(irreducible, vec![(1, 1)]);

        let f = FiniteField::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x * x = x + 1
        assert_eq!(f.mul(2, 2), 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FiniteField::new(2, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(
            FiniteField::new(2, 13).unwrap_err(),
            FieldError::TooLarge { .. }
        ));
        assert!(FiniteField::with_cap(2, 13, 1 << 13).is_ok());
        assert_eq!(
            FiniteField::of_order(6).unwrap_err(),
            FieldError::NotPrimePower(6)
        );
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = FiniteField::new(7, 1).unwrap();
        assert_eq!(f.inv(0), Err(FieldError::InverseOfZero));
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = FiniteField::new(p, m).unwrap();
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "GF({q}) inverse of {a}");
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn moduli_are_irreducible() {
        for (p, m) in [(2, 4), (3, 3), (5, 2), (2, 6), (7, 2)] {
            let f = FiniteField::new(p, m).unwrap();
            assert!(is_irreducible(f.modulus(), p));
            assert_eq!(f.modulus().len(), m as usize + 1);
        }
        // x^2 + 1 = (x + 1)^2 over GF(2)
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn pg3_point_counts() {
        for (q, expected) in [(2u32, 15usize), (3, 40), (4, 85)] {
            let f = FiniteField::of_order(q).unwrap();
            let pts = pg3_points(&f);
            assert_eq!(pts.len(), expected);
            assert_eq!(point_index(&pts).len(), expected);
            for p in &pts {
                assert_eq!(ProjectivePoint::normalize(&f, p.coords()), Some(*p));
            }
        }
    }

    #[test]
    fn normalization_is_canonical() {
        let f = FiniteField::new(5, 1).unwrap();
        let a = ProjectivePoint::normalize(&f, [0, 2, 4, 1]).unwrap();
        let b = ProjectivePoint::normalize(&f, [0, 3, 1, 4]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coords(), [0, 1, 2, 3]);
        assert_eq!(ProjectivePoint::normalize(&f, [0; 4]), None);
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
