//! Labeled polynomial matrices and rational matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::label::Label;
use super::poly::{MultiPoly, Var};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense row-major matrix of polynomials, all in the same ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    a_vars: usize,
    entries: Vec<MultiPoly>,
    row_labels: Vec<Label>,
    col_labels: Vec<Label>,
}

impl PolyMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        a_vars: usize,
        entries: Vec<MultiPoly>,
        row_labels: Vec<Label>,
        col_labels: Vec<Label>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if row_labels.len() != rows || col_labels.len() != cols {
            return Err(Error::InvalidMatrix("label count mismatch".into()));
        }
        if let Some(e) = entries.iter().find(|e| e.shape() != (a_vars, 0)) {
            return Err(Error::VarCountMismatch {
                left: (a_vars, 0),
                right: e.shape(),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            a_vars,
            entries,
            row_labels,
            col_labels,
        })
    }

    /// Matrix with `#i` labels.
    pub fn from_rows(a_vars: usize, rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let entries = rows.into_iter().flatten().collect();
        Self::new(r, c, a_vars, entries, index_labels(r), index_labels(c))
    }

    pub fn zeros(rows: usize, cols: usize, a_vars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            a_vars,
            entries: vec![MultiPoly::zero(a_vars, 0); rows * cols],
            row_labels: index_labels(rows),
            col_labels: index_labels(cols),
        }
    }

    pub fn identity(k: usize, a_vars: usize) -> Self {
        let mut m = Self::zeros(k, k, a_vars);
        for i in 0..k {
            m.entries[i * k + i] = MultiPoly::one(a_vars, 0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn a_vars(&self) -> usize {
        self.a_vars
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: MultiPoly) {
        assert_eq!(v.shape(), (self.a_vars, 0));
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[MultiPoly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.col_labels
    }

    pub fn with_labels(mut self, row_labels: Vec<Label>, col_labels: Vec<Label>) -> Result<Self> {
        if row_labels.len() != self.rows || col_labels.len() != self.cols {
            return Err(Error::InvalidMatrix("label count mismatch".into()));
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn row_index(&self, label: &Label) -> Option<usize> {
        self.row_labels.iter().position(|l| l == label)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        PolyMatrix {
            rows: rows.len(),
            cols: cols.len(),
            a_vars: self.a_vars,
            entries,
            row_labels: rows.iter().map(|&r| self.row_labels[r].clone()).collect(),
            col_labels: cols.iter().map(|&c| self.col_labels[c].clone()).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let entries = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| self.get(r, c).clone()))
            .collect();
        PolyMatrix {
            rows: self.cols,
            cols: self.rows,
            a_vars: self.a_vars,
            entries,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Assembles a block matrix. Blocks in a block-row share a row count and
    /// blocks in a block-column share a column count. Row labels come from
    /// the first block of each block-row, column labels from the first
    /// block-row.
    pub fn from_blocks(blocks: &[Vec<&PolyMatrix>]) -> Result<PolyMatrix> {
        let first = blocks
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::InvalidMatrix("empty block layout".into()))?;
        let a_vars = first.a_vars;
        let ncol_blocks = blocks[0].len();
        let col_widths: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let mut row_labels = Vec::new();
        let mut entries = Vec::new();
        for brow in blocks {
            if brow.len() != ncol_blocks {
                return Err(Error::InvalidMatrix("ragged block rows".into()));
            }
            let h = brow[0].rows;
            for (b, &w) in brow.iter().zip(&col_widths) {
                if b.rows != h || b.cols != w || b.a_vars != a_vars {
                    return Err(Error::InvalidMatrix("incompatible block sizes".into()));
                }
            }
            for r in 0..h {
                for b in brow {
                    entries.extend_from_slice(b.row(r));
                }
            }
            row_labels.extend(brow[0].row_labels.iter().cloned());
        }
        let col_labels = blocks[0]
            .iter()
            .flat_map(|b| b.col_labels.iter().cloned())
            .collect::<Vec<_>>();
        let rows = row_labels.len();
        let cols = col_labels.len();
        PolyMatrix::new(rows, cols, a_vars, entries, row_labels, col_labels)
    }

    pub fn map_entries(&self, f: impl Fn(&MultiPoly) -> Result<MultiPoly>) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(
            self.rows,
            self.cols,
            self.a_vars,
            entries,
            self.row_labels.clone(),
            self.col_labels.clone(),
        )
    }

    pub fn specialize(&self, assignment: &BTreeMap<Var, Rational>) -> Result<PolyMatrix> {
        self.map_entries(|e| e.specialize(assignment))
    }

    /// Evaluates every entry at `a = point`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<QMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.evaluate(point))
            .collect::<Result<Vec<_>>>()?;
        Ok(QMatrix::new(self.rows, self.cols, entries))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Pivoting is deterministic: when the diagonal entry vanishes, the
    /// first row below with a nonzero entry in that column is swapped in.
    pub fn det_fraction_free(&self) -> Result<MultiPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(MultiPoly::one(self.a_vars, 0));
        }
        let mut m: Vec<Vec<MultiPoly>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut negate = false;
        let mut prev = MultiPoly::one(self.a_vars, 0);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(MultiPoly::zero(self.a_vars, 0)),
                }
            }
            let prev_const = prev.as_constant();
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = match &prev_const {
                        Some(c) => num.scale(&c.recip()),
                        None => num.exact_div(&prev)?,
                    };
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -&det } else { det })
    }

    /// Exact determinant by column-wise Laplace expansion with the partial
    /// sums memoized on the set of rows used so far. Division-free; fast for
    /// sparse matrices whose entries have few terms, such as Sylvester
    /// matrices. At most 64 rows.
    pub fn det_minor_expansion(&self) -> Result<MultiPoly> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n > 64 {
            return Err(Error::InvalidMatrix("minor expansion supports at most 64 rows".into()));
        }
        let mut partial: HashMap<u64, MultiPoly> = HashMap::new();
        partial.insert(0, MultiPoly::one(self.a_vars, 0));
        for j in 0..n {
            let mut next: HashMap<u64, MultiPoly> = HashMap::new();
            for (mask, acc) in &partial {
                for r in 0..n {
                    let bit = 1u64 << r;
                    let e = self.get(r, j);
                    if mask & bit != 0 || e.is_zero() {
                        continue;
                    }
                    // inversions added by placing row r after the rows in mask
                    let above = (mask >> r).count_ones() % 2 == 1;
                    let mut t = acc * e;
                    if above {
                        t = -&t;
                    }
                    let slot = next.entry(mask | bit).or_insert_with(|| MultiPoly::zero(self.a_vars, 0));
                    *slot = &*slot + &t;
                }
            }
            next.retain(|_, p| !p.is_zero());
            partial = next;
        }
        Ok(partial
            .into_values()
            .next()
            .unwrap_or_else(|| MultiPoly::zero(self.a_vars, 0)))
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn index_labels(k: usize) -> Vec<Label> {
    (0..k).map(Label::Index).collect()
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        QMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.entries[i * k + i] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.cols.max(1)).map(<[_]>::to_vec).collect()
    }

    /// `(rank, nullity)` over Q, nullity being `cols - rank`.
    pub fn rank_exact(&self) -> (usize, usize) {
        if self.rows == 0 || self.cols == 0 {
            return (0, self.cols);
        }
        let mut m = self.to_rows();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][c].recip();
            for r in rank + 1..self.rows {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] * &inv;
                for j in c..self.cols {
                    let d = &f * &m[rank][j];
                    m[r][j] -= d;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank, self.cols - rank)
    }

    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.to_rows();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap(c, p);
                det = -det;
            }
            let inv = m[c][c].recip();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] * &inv;
                for j in c..n {
                    let d = &f * &m[c][j];
                    m[r][j] -= d;
                }
            }
            det *= &m[c][c];
        }
        Ok(det)
    }
}
