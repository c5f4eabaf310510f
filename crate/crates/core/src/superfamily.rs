//! Generalized hypercube tableau: cells `G_a^m` on `{1..a}^m` with Hamming
//! distance one edges, and the slices (rows, columns, diagonals, iso-s
//! curves) that form graph families.

use crate::advantage::{verdict, AdvantageVerdict, Solver};
use crate::error::{Error, Result};
use crate::families::undirected::generalized_hypercube;
use crate::graph::laplacian;
use crate::growth::{ratio, GrowthClass};
use crate::spectral::{self, DEFAULT_CUTOFF};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::ops::RangeInclusive;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableauCell {
    pub a: usize,
    pub m: usize,
    pub n_vertices: usize,
    pub kappa_predicted: usize,
    pub sparsity_predicted: usize,
    /// `None` when the cell is over the dense limit and was not measured.
    pub kappa_measured: Option<f64>,
    pub sparsity_measured: Option<usize>,
}

impl TableauCell {
    /// Measured values agree with the predictions (unmeasured cells pass).
    pub fn matches_prediction(&self) -> bool {
        let k = self.kappa_measured.is_none_or(|k| (k - self.kappa_predicted as f64).abs() <= 1e-8 * k.max(1.0));
        let s = self.sparsity_measured.is_none_or(|s| s == self.sparsity_predicted);
        k && s
    }
}

pub fn predicted(a: usize, m: usize) -> (usize, usize) {
    (m, a * m - m + 1)
}

fn checked_size(a: usize, m: usize) -> Result<usize> {
    if a < 2 || m < 1 {
        return Err(Error::InvalidParam(format!("tableau cell needs a >= 2 and m >= 1 (a={a}, m={m})")));
    }
    u32::try_from(m)
        .ok()
        .and_then(|m| a.checked_pow(m))
        .ok_or_else(|| Error::InvalidParam(format!("{a}^{m} overflows")))
}

/// Builds `G_a^m` and measures kappa and s of its Laplacian with a dense
/// eigensolve. Cells over `dense_limit` keep only the predictions.
pub fn cell_measurements(a: usize, m: usize, dense_limit: usize) -> Result<TableauCell> {
    let n_vertices = checked_size(a, m)?;
    let (kappa_predicted, sparsity_predicted) = predicted(a, m);
    let mut cell = TableauCell {
        a,
        m,
        n_vertices,
        kappa_predicted,
        sparsity_predicted,
        kappa_measured: None,
        sparsity_measured: None,
    };
    if n_vertices > dense_limit {
        log::warn!("G_{a}^{m} has {n_vertices} vertices, over the dense limit; not measured");
        return Ok(cell);
    }
    let l = laplacian(&generalized_hypercube(a, m)?)?;
    let (lo, hi) = spectral::extremes_of(&spectral::full_spectrum(&l), DEFAULT_CUTOFF)?;
    cell.kappa_measured = Some(hi / lo);
    cell.sparsity_measured = Some(spectral::sparsity(&l));
    Ok(cell)
}

/// All cells with `a <= a_max`, `m <= m_max` and `a^m <= size_cap`, in
/// row-major order.
pub fn tableau(a_max: usize, m_max: usize, size_cap: usize, dense_limit: usize) -> Result<Vec<TableauCell>> {
    let coords: Vec<(usize, usize)> = (1..=m_max)
        .flat_map(|m| (2..=a_max).map(move |a| (a, m)))
        .filter(|&(a, m)| checked_size(a, m).is_ok_and(|n| n <= size_cap))
        .collect();
    coords.par_iter().map(|&(a, m)| cell_measurements(a, m, dense_limit)).collect()
}

pub fn write_tableau_csv<W: Write>(cells: &[TableauCell], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["a", "m", "N", "kappa_pred", "kappa_meas", "s_pred", "s_meas"])?;
    for c in cells {
        out.write_record([
            c.a.to_string(),
            c.m.to_string(),
            c.n_vertices.to_string(),
            c.kappa_predicted.to_string(),
            c.kappa_measured.map(|k| format!("{k:.12}")).unwrap_or_default(),
            c.sparsity_predicted.to_string(),
            c.sparsity_measured.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum SliceKind {
    /// Fixed `m`, varying `a`.
    Row(usize),
    /// Fixed `a`, varying `m`.
    Column(usize),
    MainDiagonal,
    /// Cells `(a, a - D)`.
    SuperDiagonal(usize),
    /// Cells `(a, a + D)`.
    SubDiagonal(usize),
    /// All nontrivial `(a, m)` with `a m - m + 1 = s`.
    IsoS(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableauSlice {
    pub kind: SliceKind,
    /// `(a, m)` pairs ordered by the slice parameter.
    pub cells: Vec<(usize, usize)>,
    pub note: Option<String>,
}

/// Solutions `a = d + 1`, `m = (s - 1)/d` over divisors `d` of `s - 1`
/// with `d / ln(d + 1) < s - 1`.
pub fn iso_s_cells(s: usize) -> Vec<(usize, usize)> {
    if s < 2 {
        return Vec::new();
    }
    let t = s - 1;
    (1..=t)
        .filter(|d| t.is_multiple_of(*d) && (*d as f64) / ((*d + 1) as f64).ln() < t as f64)
        .map(|d| (d + 1, t / d))
        .collect()
}

/// Builds a slice over the parameter range `range` (`a` for rows and
/// diagonals, `m` for columns; ignored for iso-s). Diagonals with
/// `D > a` anywhere in the range are rejected.
pub fn build_slice(kind: SliceKind, range: RangeInclusive<usize>) -> Result<TableauSlice> {
    let (lo, hi) = (*range.start(), *range.end());
    let bad = |msg: String| Err(Error::InvalidParam(msg));
    let mut note = None;
    let cells: Vec<(usize, usize)> = match kind {
        SliceKind::Row(m) => {
            if m == 0 || lo < 2 {
                return bad(format!("row needs m >= 1 and a >= 2 (m={m}, a from {lo})"));
            }
            if m == 1 {
                note = Some("m = 1 is the complete-graph row, excluded from the better rows".into());
            }
            range.map(|a| (a, m)).collect()
        }
        SliceKind::Column(a) => {
            if a < 2 || lo < 1 {
                return bad(format!("column needs a >= 2 and m >= 1 (a={a}, m from {lo})"));
            }
            range.map(|m| (a, m)).collect()
        }
        SliceKind::MainDiagonal => {
            if lo < 2 {
                return bad(format!("main diagonal needs a >= 2 (from {lo})"));
            }
            range.map(|a| (a, a)).collect()
        }
        SliceKind::SuperDiagonal(d) | SliceKind::SubDiagonal(d) => {
            if d == 0 {
                return bad("diagonal offset must be positive; use the main diagonal".into());
            }
            let is_super = matches!(kind, SliceKind::SuperDiagonal(_));
            // Super-diagonal cells need m = a - D >= 1, i.e. a > D.
            if lo < d || (is_super && lo == d) || lo < 2 {
                return bad(format!("diagonal offset D={d} exceeds a={lo}"));
            }
            range.map(|a| if is_super { (a, a - d) } else { (a, a + d) }).collect()
        }
        SliceKind::IsoS(s) => {
            if s < 2 {
                return bad(format!("iso-s needs s >= 2 (s = 1 is trivial), got {s}"));
            }
            iso_s_cells(s)
        }
    };
    if cells.is_empty() || (lo > hi && !matches!(kind, SliceKind::IsoS(_))) {
        return bad(format!("slice {kind:?} over {lo}..={hi} is empty"));
    }
    Ok(TableauSlice { kind, cells, note })
}

/// Growths of `(N, kappa, s)` in the slice parameter.
pub fn slice_growths(kind: SliceKind) -> Result<(GrowthClass, GrowthClass, GrowthClass)> {
    let lin = GrowthClass::poly(ratio(1, 1));
    let quad = GrowthClass::poly(ratio(2, 1));
    let c = GrowthClass::constant();
    let aa = GrowthClass::super_exp(1.0, ratio(1, 1));
    let shift = |d: i64| GrowthClass::poly(ratio(d, 1));
    Ok(match kind {
        SliceKind::Row(m) => (GrowthClass::poly(ratio(m as i64, 1)), c, lin),
        SliceKind::Column(a) => (GrowthClass::exp_base(a as f64), lin, if a >= 2 { lin } else { c }),
        SliceKind::MainDiagonal => (aa, lin, quad),
        SliceKind::SuperDiagonal(d) => (aa.mul(&shift(-(d as i64))), lin, quad),
        SliceKind::SubDiagonal(d) => (aa.mul(&shift(d as i64)), lin, quad),
        // Finitely many cells: every quantity is bounded.
        SliceKind::IsoS(_) => (c, c, c),
    })
}

pub fn slice_verdict(slice: &TableauSlice, solver: Solver) -> Result<AdvantageVerdict> {
    if slice.cells.is_empty() {
        return Err(Error::InvalidParam("empty slice".into()));
    }
    let (size, kappa, s) = slice_growths(slice.kind)?;
    Ok(verdict(solver, &size, &kappa, &s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iso_s_seven() {
        assert_eq!(iso_s_cells(7), vec![(2, 6), (3, 3), (4, 2), (7, 1)]);
        for (a, m) in iso_s_cells(7) {
            assert_eq!(predicted(a, m).1, 7);
        }
    }

    #[test]
    fn diagonal_rejection() {
        assert!(build_slice(SliceKind::SuperDiagonal(3), 3..=8).is_err());
        assert!(build_slice(SliceKind::SuperDiagonal(3), 4..=8).is_ok());
        assert!(build_slice(SliceKind::SubDiagonal(3), 2..=8).is_err());
        assert!(build_slice(SliceKind::SubDiagonal(3), 3..=8).is_ok());
    }

    #[test]
    fn small_cells() {
        let c = cell_measurements(3, 2, 3000).unwrap();
        assert_eq!((c.n_vertices, c.sparsity_measured), (9, Some(5)));
        assert!((c.kappa_measured.unwrap() - 2.0).abs() < 1e-10);
        let k = cell_measurements(5, 1, 3000).unwrap();
        assert!((k.kappa_measured.unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(k.sparsity_measured, Some(5));
    }
}
