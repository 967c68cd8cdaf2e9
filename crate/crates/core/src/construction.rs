//! 3-MIPP codes of length 2 from generalized quadrangles.
//!
//! The lines of a GQ of order `(s, t)` with `s <= t` form a triangle-free
//! packing with at least as many blocks as points; keeping as many blocks as
//! points and reading block `i` as the profile set `A_i` yields a code. The
//! three truncations delete points and lines from GQs of order `(k, k)`,
//! `(k - 1, k + 1)` and `(k + 1, k - 1)` to reach other alphabet sizes.
//!
//! Every construction re-checks its bookkeeping (block counts and size
//! distributions) and verifies the final code with the fast characterization.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::characterization::{
    from_packing, mippc3_violation, CharacterizationError, GeneralizedPacking, PackingError,
    Violation,
};
use crate::code::Code;
use crate::quadrangle::{
    dualize, gq_to_packing, order_k_minus_1, w3, GeneralizedQuadrangle, GqError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("GQ of order ({s}, {t}) has fewer lines than points; dualize it first")]
    FewerLinesThanPoints { s: usize, t: usize },
    #[error("parameter {name} = {value} outside {lo}..={hi}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },
    #[error("elimination bookkeeping mismatch: {0}")]
    Bookkeeping(String),
    #[error("constructed code is not 3-MIPP: {0}")]
    NotMippc(Violation),
    #[error(transparent)]
    Gq(#[from] GqError),
    #[error(transparent)]
    Characterization(#[from] CharacterizationError),
    #[error(transparent)]
    Packing(#[from] PackingError),
}

/// A constructed code with the packing it was read from.
#[derive(Debug, Clone)]
pub struct Construction {
    pub code: Code,
    pub packing: GeneralizedPacking,
    /// Human-readable provenance, written as `#` comments on output.
    pub provenance: Vec<String>,
}

impl Construction {
    pub fn to_text(&self) -> String {
        self.code.to_text_with_comments(&self.provenance)
    }
}

fn finish(
    packing: GeneralizedPacking,
    provenance: Vec<String>,
) -> Result<Construction, ConstructionError> {
    let code = from_packing(&packing)?;
    if let Some(v) = mippc3_violation(&code)? {
        return Err(ConstructionError::NotMippc(v));
    }
    let mut provenance = provenance;
    provenance.push(format!("(n, M, q) = (2, {}, {})", code.len(), code.q()));
    Ok(Construction {
        code,
        packing,
        provenance,
    })
}

fn check_range(
    name: &'static str,
    value: usize,
    lo: usize,
    hi: usize,
) -> Result<(), ConstructionError> {
    if value < lo || value > hi {
        return Err(ConstructionError::OutOfRange {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(
    what: &str,
    got: T,
    want: T,
) -> Result<(), ConstructionError> {
    if got != want {
        return Err(ConstructionError::Bookkeeping(format!(
            "{what}: got {got:?}, expected {want:?}"
        )));
    }
    Ok(())
}

/// Removes points and lines, relabels the surviving points `0..` in order,
/// and returns the surviving lines restricted to surviving points. Lines
/// left empty are dropped.
fn eliminate(
    gq: &GeneralizedQuadrangle,
    points: &BTreeSet<usize>,
    lines: &BTreeSet<usize>,
) -> (usize, Vec<Vec<usize>>) {
    let mut relabel = vec![usize::MAX; gq.point_count()];
    let mut next = 0;
    for (p, slot) in relabel.iter_mut().enumerate() {
        if !points.contains(&p) {
            *slot = next;
            next += 1;
        }
    }
    let blocks = gq
        .lines()
        .iter()
        .enumerate()
        .filter(|(i, _)| !lines.contains(i))
        .map(|(_, l)| {
            l.iter()
                .filter(|p| !points.contains(p))
                .map(|&p| relabel[p])
                .collect::<Vec<_>>()
        })
        .filter(|b| !b.is_empty())
        .collect();
    (next, blocks)
}

fn distribution(entries: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    let mut d = BTreeMap::new();
    for &(size, count) in entries {
        if count > 0 {
            *d.entry(size).or_insert(0) += count;
        }
    }
    d
}

/// Code of a GQ with `s <= t`: lines as blocks, the lexicographically last
/// `b - v` lines dropped. Gives a 3-MIPPC`(2, v(1 + s), v)`.
pub fn code_from_gq(gq: &GeneralizedQuadrangle) -> Result<Construction, ConstructionError> {
    let (s, t) = gq.order();
    if s > t {
        return Err(ConstructionError::FewerLinesThanPoints { s, t });
    }
    let full = gq_to_packing(gq)?;
    let v = full.v();
    let packing = GeneralizedPacking::new(v, full.blocks()[..v].to_vec())?;
    finish(
        packing,
        vec![format!(
            "generalized quadrangle of order ({s}, {t}); {} of {} lines kept",
            v,
            full.b()
        )],
    )
}

/// `(M, q)` promised for the `(k, k)` truncation.
pub fn a111_size(k: usize, s: usize) -> (usize, usize) {
    (
        k.pow(4) + 2 * k.pow(3) + 2 * k * k + 2 * k - 2 * s * k,
        k.pow(3) + k * k + k + 1 - s,
    )
}

/// `(M, q)` promised for the `(k - 1, k + 1)` truncation.
pub fn a222_size(k: usize, s: usize) -> (usize, usize) {
    (k.pow(4) - s * k, k.pow(3) - s)
}

/// Code size for the `(k + 1, k - 1)` truncation under the two printed
/// forms: with `+ floor((s-1)/(k+1))` and with `- floor((s-1)/(k+1))`.
pub fn a333_size_forms(k: usize, s: usize) -> (usize, usize) {
    let s1 = (s - 1) / (k + 1);
    let base = k.pow(4) + 2 * k.pow(3) + 2 * k * k - s * k - s;
    (base + s1, base - s1)
}

pub fn a333_alphabet(k: usize, s: usize) -> usize {
    k.pow(3) + 2 * k * k - s
}

/// Truncation of W(3, k), `1 <= s <= k^2 + k + 1`: removes `s` points and
/// `s` lines around a base point. Gives a 3-MIPPC
/// `(2, k^4 + 2k^3 + 2k^2 + 2k - 2sk, k^3 + k^2 + k + 1 - s)`.
///
/// Labels: `x00` is point 0; `L0j`, `j = 0..=k`, are the lines through it in
/// order; `xij`, `i = 1..=k`, are the other points of `L0j` ascending; and
/// `Li1..Lik` are the lines through `xi0` other than `L00`. Points are taken
/// from `x00, x10..xk0, x11..xk1, ..` and lines from `L00..L0k, L11..L1k, ..`,
/// the first `s` of each.
pub fn truncate_a111(k: usize, s: usize) -> Result<Construction, ConstructionError> {
    let gq = w3(k)?;
    check_range("s", s, 1, k * k + k + 1)?;
    let pencils = gq.pencils();
    let base = 0usize;
    let base_lines = &pencils[base];
    expect_eq("lines through the base point", base_lines.len(), k + 1)?;

    // rows[j] = x1j..xkj
    let rows: Vec<Vec<usize>> = base_lines
        .iter()
        .map(|&l| {
            gq.lines()[l]
                .iter()
                .copied()
                .filter(|&p| p != base)
                .collect()
        })
        .collect();

    let mut point_seq = vec![base];
    for row in &rows {
        point_seq.extend_from_slice(row);
    }
    let mut line_seq = base_lines.clone();
    for &x in &rows[0] {
        line_seq.extend(pencils[x].iter().copied().filter(|&l| l != base_lines[0]));
    }
    expect_eq("point sequence length", point_seq.len(), k * k + k + 1)?;
    expect_eq("line sequence length", line_seq.len(), k * k + k + 1)?;

    let points: BTreeSet<usize> = point_seq[..s].iter().copied().collect();
    let lines: BTreeSet<usize> = line_seq[..s].iter().copied().collect();
    let (v, blocks) = eliminate(&gq, &points, &lines);
    let (m, q) = a111_size(k, s);
    expect_eq("points left", v, q)?;
    expect_eq("blocks left", blocks.len(), q)?;
    let packing = GeneralizedPacking::new(v, blocks)?;
    expect_eq(
        "block sizes",
        packing.size_distribution(),
        distribution(&[(k + 1, k.pow(3) + k * k + k - s * k), (k, s * k - s + 1)]),
    )?;
    expect_eq("M", packing.incidences(), m)?;
    finish(
        packing,
        vec![format!("truncation of W(3,{k}) with s = {s}")],
    )
}

/// Truncation of a GQ of order `(k - 1, k + 1)`, `0 <= s <= 2k - 1`:
/// removes a point `x0`, `s - 1` points collinear with it and every line
/// through them, then drops surplus blocks. Gives a 3-MIPPC
/// `(2, k^4 - sk, k^3 - s)`.
pub fn truncate_a222(k: usize, s: usize) -> Result<Construction, ConstructionError> {
    let gq = order_k_minus_1(k)?;
    check_range("s", s, 0, 2 * k - 1)?;
    let pencils = gq.pencils();
    let base = 0usize;
    let collinear: BTreeSet<usize> = pencils[base]
        .iter()
        .flat_map(|&l| gq.lines()[l].iter().copied())
        .filter(|&p| p != base)
        .collect();
    expect_eq("points collinear with x0", collinear.len(), k * k + k - 2)?;

    let removed: BTreeSet<usize> = std::iter::once(base).chain(collinear).take(s).collect();
    let lines: BTreeSet<usize> = removed
        .iter()
        .flat_map(|&p| pencils[p].iter().copied())
        .collect();
    expect_eq(
        "lines through removed points",
        lines.len(),
        if s == 0 { 0 } else { s + s * k + 1 },
    )?;

    let (v, blocks) = eliminate(&gq, &removed, &lines);
    let (m, q) = a222_size(k, s);
    expect_eq("points left", v, q)?;
    expect_eq(
        "blocks left",
        blocks.len(),
        k.pow(3) - s + (2 * k * k - s * k - 1 + usize::from(s == 0)),
    )?;
    if blocks.iter().any(|b| b.len() != k) {
        return Err(ConstructionError::Bookkeeping(format!(
            "a surviving line lost points; all should have {k}"
        )));
    }
    let surplus = blocks.len() - v;
    let packing = GeneralizedPacking::new(v, blocks[..v].to_vec())?;
    expect_eq("M", packing.incidences(), m)?;
    finish(
        packing,
        vec![format!(
            "truncation of a GQ of order ({}, {}) with s = {s}; {surplus} surplus blocks dropped",
            k - 1,
            k + 1
        )],
    )
}

/// Truncation of a GQ of order `(k + 1, k - 1)` (the dual of one of order
/// `(k - 1, k + 1)`), `1 <= s <= k^2 + k + 1`: removes a point `x`, the
/// points of the first `s1` lines through it and `s2` more points of the
/// next line, then pads with singleton blocks.
///
/// The resulting size is `k^4 + 2k^3 + 2k^2 - sk - s + floor((s-1)/(k+1))`;
/// the provenance records which of the two printed forms it matches.
pub fn truncate_a333(k: usize, s: usize) -> Result<Construction, ConstructionError> {
    let gq = dualize(&order_k_minus_1(k)?)?;
    check_range("s", s, 1, k * k + k + 1)?;
    let pencils = gq.pencils();
    let base = 0usize;
    let through = &pencils[base];
    expect_eq("lines through x", through.len(), k)?;
    // others[i] = x_(i+1),1 .. x_(i+1),(k+1)
    let others: Vec<Vec<usize>> = through
        .iter()
        .map(|&l| {
            gq.lines()[l]
                .iter()
                .copied()
                .filter(|&p| p != base)
                .collect()
        })
        .collect();

    let s1 = (s - 1) / (k + 1);
    let s2 = s - 1 - s1 * (k + 1);
    let h = usize::from(s2 != 0);
    let mut removed = BTreeSet::from([base]);
    for row in &others[..s1] {
        removed.extend(row.iter().copied());
    }
    if s2 > 0 {
        removed.extend(others[s1][..s2].iter().copied());
    }
    expect_eq("removed points", removed.len(), s)?;

    let (v, mut blocks) = eliminate(&gq, &removed, &BTreeSet::new());
    expect_eq("points left", v, a333_alphabet(k, s))?;
    expect_eq("blocks left", blocks.len(), k.pow(3) - s1)?;
    let expected = distribution(&[
        (k + 1, (s - 1) * (k - 1) + k - s1 - h),
        (k + 2, k.pow(3) - k - (s - 1) * (k - 1)),
        (k + 1 - s2, h),
    ]);
    let got = {
        let mut d = BTreeMap::new();
        for b in &blocks {
            *d.entry(b.len()).or_insert(0) += 1;
        }
        d
    };
    expect_eq("block sizes", got, expected)?;

    let pad = v - blocks.len();
    expect_eq("padding blocks", pad, 2 * k * k - s + s1)?;
    blocks.extend((0..pad).map(|p| vec![p]));
    let packing = GeneralizedPacking::new(v, blocks)?;

    let m = packing.incidences();
    let (plus, minus) = a333_size_forms(k, s);
    let matched = match (m == plus, m == minus) {
        (true, true) => "both printed forms (floor term is 0)",
        (true, false) => "the + floor((s-1)/(k+1)) form",
        (false, true) => "the - floor((s-1)/(k+1)) form",
        (false, false) => "neither printed form",
    };
    finish(
        packing,
        vec![
            format!(
                "truncation of a GQ of order ({}, {}) with s = {s}",
                k + 1,
                k - 1
            ),
            format!(
                "realized M = {m}; + form gives {plus}, - form gives {minus}; matches {matched}"
            ),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::is_mippc;
    use crate::quadrangle::t2_star;

    #[test]
    fn optimal_family_small() {
        let c = code_from_gq(&w3(2).unwrap()).unwrap();
        assert_eq!((c.code.len(), c.code.q()), (45, 15));
        let c = code_from_gq(&t2_star(2).unwrap()).unwrap();
        assert_eq!((c.code.len(), c.code.q()), (16, 8));
        let dual = dualize(&t2_star(2).unwrap()).unwrap();
        assert!(matches!(
            code_from_gq(&dual),
            Err(ConstructionError::FewerLinesThanPoints { s: 3, t: 1 })
        ));
    }

    #[test]
    fn size_formulas() {
        assert_eq!(a111_size(2, 1), (40, 14));
        assert_eq!(a111_size(2, 7), (16, 8));
        assert_eq!(a111_size(3, 1), (153, 39));
        assert_eq!(a222_size(2, 0), (16, 8));
        assert_eq!(a222_size(2, 3), (10, 5));
        assert_eq!(a222_size(3, 2), (75, 25));
        assert_eq!(a333_size_forms(2, 1), (37, 37));
        assert_eq!(a333_alphabet(2, 1), 15);
        assert_eq!(a333_size_forms(2, 7), (21, 17));
        assert_eq!(a333_alphabet(2, 7), 9);
        assert_eq!(a333_size_forms(3, 1).0, 149);
        assert_eq!(a333_alphabet(3, 1), 44);
    }

    #[test]
    fn truncations_k2() {
        for s in 1..=7 {
            let c = truncate_a111(2, s).unwrap();
            assert_eq!((c.code.len(), c.code.q() as usize), a111_size(2, s));
        }
        for s in 0..=3 {
            let c = truncate_a222(2, s).unwrap();
            assert_eq!((c.code.len(), c.code.q() as usize), a222_size(2, s));
            assert!(c.packing.is_delta_free());
        }
        for s in 1..=7 {
            let c = truncate_a333(2, s).unwrap();
            assert_eq!(c.code.len(), a333_size_forms(2, s).0);
            assert_eq!(c.code.q() as usize, a333_alphabet(2, s));
        }
    }

    #[test]
    fn truncations_k3_k4() {
        for k in [3, 4] {
            for s in 1..=k * k + k + 1 {
                let c = truncate_a111(k, s).unwrap();
                assert_eq!((c.code.len(), c.code.q() as usize), a111_size(k, s));
                assert!(c.packing.is_delta_free());
                let c = truncate_a333(k, s).unwrap();
                assert_eq!(c.code.len(), a333_size_forms(k, s).0);
                assert!(c.packing.is_delta_free());
            }
            for s in 0..2 * k {
                let c = truncate_a222(k, s).unwrap();
                assert_eq!((c.code.len(), c.code.q() as usize), a222_size(k, s));
                assert!(c.packing.is_delta_free());
            }
        }
    }

    #[test]
    fn small_outputs_agree_with_brute_force() {
        let c = truncate_a222(2, 3).unwrap();
        assert!(c.code.len() <= 12);
        assert!(is_mippc(&c.code, 3).unwrap());
        // Larger outputs are still cheap enough to enumerate.
        for c in [truncate_a222(2, 0).unwrap(), truncate_a111(2, 7).unwrap(), truncate_a333(2, 7).unwrap()] {
            assert!(is_mippc(&c.code, 3).unwrap());
        }
    }

    #[test]
    fn parameter_ranges() {
        assert!(matches!(
            truncate_a111(2, 0),
            Err(ConstructionError::OutOfRange { .. })
        ));
        assert!(matches!(
            truncate_a111(2, 8),
            Err(ConstructionError::OutOfRange { .. })
        ));
        assert!(matches!(
            truncate_a222(2, 4),
            Err(ConstructionError::OutOfRange { .. })
        ));
        assert!(matches!(
            truncate_a333(2, 0),
            Err(ConstructionError::OutOfRange { .. })
        ));
        assert!(matches!(
            truncate_a111(6, 1),
            Err(ConstructionError::Gq(GqError::NotPrimePower(6)))
        ));
    }

    #[test]
    fn a333_reports_the_realized_form() {
        let c = truncate_a333(2, 7).unwrap();
        assert_eq!(c.code.len(), 21);
        assert!(c
            .provenance
            .iter()
            .any(|l| l.contains("matches the + floor")));
    }
}
