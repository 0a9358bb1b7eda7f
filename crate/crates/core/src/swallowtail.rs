//! The open-swallowtail presentation matrix
//!
//! ```text
//! [ ∂₂  D₁       ]
//! [ 0   A_(y^(n-2)) ]
//! ```
//!
//! and its reduction to a minimal presentation by eliminating unit
//! (nonzero constant) entries.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cech::{d0_kernel_label, d1_matrix, partial2_matrix};
use crate::error::{Error, Result};
use crate::exact::{Label, PolyMatrix, Rational, Var};
use crate::formulas::{bezout_row, DetRelation};
use crate::verify::{verify_matrix_det, VerifyMode};

/// The square `(3n-5)`-matrix `[[∂₂, D₁], [0, A_(y^(n-2))]]`.
pub fn assemble(n: usize) -> Result<PolyMatrix> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { min: 3, got: n });
    }
    let p2 = partial2_matrix(n)?;
    let d1 = d1_matrix(n)?;
    let a_row = bezout_row(n, d0_kernel_label(n))?
        .with_labels(vec![Label::Block("A".into(), d0_kernel_label(n))], d1.col_labels().to_vec())?;
    let zero = PolyMatrix::zeros(1, p2.cols(), n + 1)
        .with_labels(a_row.row_labels().to_vec(), p2.col_labels().to_vec())?;
    PolyMatrix::from_blocks(&[vec![&p2, &d1], vec![&zero, &a_row]])
}

/// One elimination step: the pivot's position in the matrix at that
/// stage, its value and the labels of the deleted row and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotRecord {
    pub row: usize,
    pub col: usize,
    pub value: Rational,
    pub row_label: Label,
    pub col_label: Label,
}

impl PivotRecord {
    /// `(-1)^(row+col) * value`; the factor this step contributes to the
    /// determinant.
    pub fn det_factor(&self) -> Rational {
        if (self.row + self.col).is_multiple_of(2) {
            self.value.clone()
        } else {
            -self.value.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub matrix: PolyMatrix,
    pub log: Vec<PivotRecord>,
}

impl Reduction {
    /// `det(original) = det_factor() * det(matrix)`.
    pub fn det_factor(&self) -> Rational {
        self.log
            .iter()
            .fold(Rational::one(), |acc, p| acc * p.det_factor())
    }
}

/// Eliminates constant entries one at a time. The pivot is the first
/// nonzero constant in row-major order; its row and column are cleared by
/// exact row operations and deleted. Stops when no entry is a nonzero
/// constant.
pub fn minimize(m: &PolyMatrix, substitutions: Option<&BTreeMap<Var, Rational>>) -> Result<Reduction> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let mut cur = match substitutions {
        Some(s) => m.specialize(s)?,
        None => m.clone(),
    };
    let mut log = Vec::new();
    loop {
        let pivot = (0..cur.rows())
            .flat_map(|r| (0..cur.cols()).map(move |c| (r, c)))
            .find_map(|(r, c)| {
                let v = cur.get(r, c).as_constant()?;
                (!v.is_zero()).then_some((r, c, v))
            });
        let Some((r, c, p)) = pivot else { break };
        let inv = p.recip();
        let keep_rows: Vec<usize> = (0..cur.rows()).filter(|&i| i != r).collect();
        let keep_cols: Vec<usize> = (0..cur.cols()).filter(|&j| j != c).collect();
        let mut next = cur.submatrix(&keep_rows, &keep_cols);
        for (ni, &i) in keep_rows.iter().enumerate() {
            let factor = cur.get(i, c);
            if factor.is_zero() {
                continue;
            }
            let factor = factor.scale(&inv);
            for (nj, &j) in keep_cols.iter().enumerate() {
                let pivot_row = cur.get(r, j);
                if pivot_row.is_zero() {
                    continue;
                }
                let v = next.get(ni, nj) - &(&factor * pivot_row);
                next.set(ni, nj, v);
            }
        }
        log.push(PivotRecord {
            row: r,
            col: c,
            value: p,
            row_label: cur.row_labels()[r].clone(),
            col_label: cur.col_labels()[c].clone(),
        });
        cur = next;
    }
    Ok(Reduction { matrix: cur, log })
}

/// The assembled matrix and its two reductions.
#[derive(Clone, Debug)]
pub struct SwallowtailPresentation {
    pub n: usize,
    pub full: PolyMatrix,
    /// `(2n-4)`-square, `a0` symbolic.
    pub reduced: PolyMatrix,
    /// `(n-2)`-square, `a0 = 1`.
    pub monic_minimal: PolyMatrix,
    pub reduction_log: Vec<PivotRecord>,
    pub monic_log: Vec<PivotRecord>,
}

impl SwallowtailPresentation {
    /// `det(full) = full_to_reduced_factor * det(reduced)`.
    pub fn full_to_reduced_factor(&self) -> Rational {
        Reduction {
            matrix: self.reduced.clone(),
            log: self.reduction_log.clone(),
        }
        .det_factor()
    }

    /// `det(reduced)|_(a0=1) = reduced_to_monic_factor * det(monic_minimal)`.
    pub fn reduced_to_monic_factor(&self) -> Rational {
        Reduction {
            matrix: self.monic_minimal.clone(),
            log: self.monic_log.clone(),
        }
        .det_factor()
    }
}

pub fn monic_substitution() -> BTreeMap<Var, Rational> {
    BTreeMap::from([(Var::A(0), Rational::one())])
}

pub fn presentation(n: usize) -> Result<SwallowtailPresentation> {
    let full = assemble(n)?;
    let first = minimize(&full, None)?;
    let second = minimize(&first.matrix, Some(&monic_substitution()))?;
    Ok(SwallowtailPresentation {
        n,
        full,
        reduced: first.matrix,
        monic_minimal: second.matrix,
        reduction_log: first.log,
        monic_log: second.log,
    })
}

/// `(c, e)` with `det(assemble(n)) = c * a0^e * D_n`.
pub fn verify_det(n: usize, mode: VerifyMode) -> Result<DetRelation> {
    verify_matrix_det(&assemble(n)?, n, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::exact::MultiPoly;

    #[test]
    fn identity_reduces_to_empty() {
        let r = minimize(&PolyMatrix::identity(3, 2), None).unwrap();
        assert_eq!((r.matrix.rows(), r.matrix.cols()), (0, 0));
        assert_eq!(r.log.len(), 3);
        assert_eq!(r.det_factor(), int(1));
    }

    #[test]
    fn no_constants_is_unchanged() {
        let m = PolyMatrix::from_rows(
            2,
            vec![
                vec![MultiPoly::parse("a0", 2, 0).unwrap(), MultiPoly::parse("a1", 2, 0).unwrap()],
                vec![MultiPoly::parse("a1^2", 2, 0).unwrap(), MultiPoly::zero(2, 0)],
            ],
        )
        .unwrap();
        let r = minimize(&m, None).unwrap();
        assert_eq!(r.matrix, m);
        assert!(r.log.is_empty());
    }

    #[test]
    fn determinant_is_preserved_by_logged_pivots() {
        let m = PolyMatrix::from_rows(
            2,
            vec![
                vec![MultiPoly::parse("a0", 2, 0).unwrap(), MultiPoly::parse("3", 2, 0).unwrap()],
                vec![MultiPoly::parse("a1", 2, 0).unwrap(), MultiPoly::parse("a0", 2, 0).unwrap()],
            ],
        )
        .unwrap();
        let r = minimize(&m, None).unwrap();
        assert_eq!(r.log.len(), 1);
        let lhs = m.det_fraction_free().unwrap();
        let rhs = r.matrix.det_fraction_free().unwrap().scale(&r.det_factor());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sizes_small_degrees() {
        for n in 3..=5 {
            let p = presentation(n).unwrap();
            assert_eq!(p.full.rows(), 3 * n - 5);
            assert_eq!(p.reduced.rows(), 2 * n - 4);
            assert_eq!(p.monic_minimal.rows(), n - 2);
            assert_eq!(p.reduction_log.len(), n - 1);
            assert_eq!(p.monic_log.len(), n - 2);
        }
        assert!(assemble(2).is_err());
    }
}
