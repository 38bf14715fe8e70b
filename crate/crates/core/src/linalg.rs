//! Exact linear algebra over the Gaussian rationals.
//!
//! Everything here is rank bookkeeping for span and surjectivity checks:
//! Gaussian elimination over the field ℚ(i), never floating point, so a
//! reported rank is a theorem about the input matrix rather than an estimate.

use crate::exec;
use crate::multi_index::MultiIndex;
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Row threshold below which elimination steps stay sequential; fanning out
/// tiny row updates costs more than it saves.
const PAR_ROW_THRESHOLD: usize = 64;

/// Exact rank of a dense matrix over ℚ(i). Consumes the rows.
pub fn rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    debug_assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        let (pivot_rows, below) = m.split_at_mut(r + 1);
        let pivot = &pivot_rows[r];
        let eliminate = |row: &Vec<Scalar>| -> Vec<Scalar> {
            if row[c].is_zero() {
                return row.clone();
            }
            let factor = row[c].clone();
            let mut out = row.clone();
            for j in c..cols {
                out[j] = &out[j] - &(&factor * &pivot[j]);
            }
            out
        };
        let updated = if below.len() >= PAR_ROW_THRESHOLD {
            exec::map(below, eliminate)
        } else {
            exec::map_seq(below, eliminate)
        };
        below.clone_from_slice(&updated);
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Coefficient row of `f` over an explicit monomial basis; monomials of `f`
/// outside the basis are an error in the caller's bookkeeping.
pub fn coeff_row(f: &Poly, basis: &[MultiIndex]) -> Vec<Scalar> {
    let mut row: Vec<Scalar> = basis.iter().map(|m| f.coeff(m)).collect();
    let covered: u32 = row.iter().filter(|c| !c.is_zero()).count() as u32;
    debug_assert_eq!(
        covered as usize,
        f.num_terms(),
        "polynomial has monomials outside the supplied basis"
    );
    row.shrink_to_fit();
    row
}

/// Rank of the span of a family of polynomials, over the union of the
/// monomials they touch.
pub fn poly_span_rank(polys: &[Poly]) -> usize {
    let mut support: Vec<MultiIndex> = Vec::new();
    {
        let mut seen = std::collections::BTreeSet::new();
        for f in polys {
            for (m, _) in f.terms() {
                if seen.insert(m.clone()) {
                    support.push(m.clone());
                }
            }
        }
    }
    if support.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Scalar>> = polys
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| support.iter().map(|m| f.coeff(m)).collect())
        .collect();
    rank(rows)
}
