//! Dense matrices over the polynomial ring, used for presentation matrices,
//! complex differentials, and block-system assembly.
//!
//! Degenerate shapes (`0 x n`, `n x 0`) are first-class: complexes routinely
//! produce zero modules at the ends and every operation must stay total there.

use crate::error::{Error, Result};
use crate::ring::{frobenius_power, Polynomial, RingSpec};

/// A `rows x cols` matrix of polynomials in row-major storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    /// Number of rows.
    pub rows: usize,
    /// Number of columns.
    pub cols: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    /// All-zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            data: vec![Polynomial::zero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(ring: &RingSpec, n: usize) -> Self {
        let mut m = PolyMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ring.one();
        }
        m
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(entries: Vec<Polynomial>) -> Self {
        let n = entries.len();
        let mut m = PolyMatrix::zero(n, n);
        for (i, p) in entries.into_iter().enumerate() {
            *m.at_mut(i, i) = p;
        }
        m
    }

    /// Builds a matrix from rows; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Validation(
                "ragged rows in matrix constructor".into(),
            ));
        }
        Ok(PolyMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from columns; all columns must share a length.
    pub fn from_cols(cols: Vec<Vec<Polynomial>>) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map(|c| c.len()).unwrap_or(0);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(Error::Validation(
                "ragged columns in matrix constructor".into(),
            ));
        }
        let mut m = PolyMatrix::zero(nrows, ncols);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, p) in col.into_iter().enumerate() {
                *m.at_mut(i, j) = p;
            }
        }
        Ok(m)
    }

    /// Builds a matrix from columns inside an ambient of known rank; unlike
    /// [`PolyMatrix::from_cols`] this accepts an empty column list (which
    /// carries no row count of its own).
    pub fn from_cols_in(rows: usize, cols: Vec<Vec<Polynomial>>) -> Result<Self> {
        if cols.is_empty() {
            return Ok(PolyMatrix::zero(rows, 0));
        }
        let m = PolyMatrix::from_cols(cols)?;
        if m.rows != rows {
            return Err(Error::Validation(format!(
                "columns have {} components, expected {rows}",
                m.rows
            )));
        }
        Ok(m)
    }

    /// Entry reference.
    pub fn at(&self, r: usize, c: usize) -> &Polynomial {
        &self.data[r * self.cols + c]
    }

    /// Mutable entry reference.
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Polynomial {
        &mut self.data[r * self.cols + c]
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    /// All columns.
    pub fn columns(&self) -> Vec<Vec<Polynomial>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    /// True when every entry is zero (including degenerate shapes).
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, ring: &RingSpec, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Validation(format!(
                "matrix product shape mismatch: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = ring.mul(a, b)?;
                    *out.at_mut(i, j) = ring.add(out.at(i, j), &prod);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, ring: &RingSpec, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if self.cols != v.len() {
            return Err(Error::Validation(format!(
                "matrix-vector shape mismatch: {}x{} * {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Polynomial::zero(); self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() || v[k].is_zero() {
                    continue;
                }
                out[i] = ring.add(&out[i], &ring.mul(a, &v[k])?);
            }
        }
        Ok(out)
    }

    /// Entrywise scale by a polynomial.
    pub fn scale(&self, ring: &RingSpec, f: &Polynomial) -> Result<PolyMatrix> {
        let data = self
            .data
            .iter()
            .map(|p| ring.mul(p, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise additive inverse.
    pub fn neg(&self, ring: &RingSpec) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|p| ring.neg(p)).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != other.rows {
            return Err(Error::Validation(format!(
                "hstack row mismatch: {} vs {}",
                self.rows, other.rows
            )));
        }
        let mut out = PolyMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(i, j) = self.at(i, j).clone();
            }
            for j in 0..other.cols {
                *out.at_mut(i, self.cols + j) = other.at(i, j).clone();
            }
        }
        Ok(out)
    }

    /// Vertical concatenation (`self` on top).
    pub fn vstack(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.cols {
            return Err(Error::Validation(format!(
                "vstack column mismatch: {} vs {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(PolyMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Assembles a block matrix from a grid of blocks. Row heights and column
    /// widths must be consistent across the grid.
    pub fn block(grid: &[Vec<&PolyMatrix>]) -> Result<PolyMatrix> {
        if grid.is_empty() {
            return Ok(PolyMatrix::zero(0, 0));
        }
        let ncols_blocks = grid[0].len();
        if grid.iter().any(|row| row.len() != ncols_blocks) {
            return Err(Error::Validation("ragged block grid".into()));
        }
        let row_heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let col_widths: Vec<usize> = (0..ncols_blocks).map(|j| grid[0][j].cols).collect();
        for (bi, row) in grid.iter().enumerate() {
            for (bj, blk) in row.iter().enumerate() {
                if blk.rows != row_heights[bi] || blk.cols != col_widths[bj] {
                    return Err(Error::Validation(format!(
                        "block ({bi},{bj}) has shape {}x{}, expected {}x{}",
                        blk.rows, blk.cols, row_heights[bi], col_widths[bj]
                    )));
                }
            }
        }
        let total_rows: usize = row_heights.iter().sum();
        let total_cols: usize = col_widths.iter().sum();
        let mut out = PolyMatrix::zero(total_rows, total_cols);
        let mut roff = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut coff = 0;
            for blk in row.iter() {
                for i in 0..blk.rows {
                    for j in 0..blk.cols {
                        *out.at_mut(roff + i, coff + j) = blk.at(i, j).clone();
                    }
                }
                coff += blk.cols;
            }
            roff += row_heights[bi];
        }
        Ok(out)
    }
}

/// Entrywise `p^e`-th power (Frobenius applied to every entry).
pub fn bracket_power(ring: &RingSpec, m: &PolyMatrix, e: u32) -> Result<PolyMatrix> {
    let mut out = PolyMatrix::zero(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            *out.at_mut(i, j) = frobenius_power(ring, m.at(i, j), e)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, MonomialOrder};

    fn ring() -> RingSpec {
        RingSpec::new(2, &["x", "y"], MonomialOrder::GrevLex).unwrap()
    }

    fn pp(r: &RingSpec, s: &str) -> Polynomial {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn product_and_identity() {
        let r = ring();
        let m = PolyMatrix::from_rows(vec![
            vec![pp(&r, "x"), pp(&r, "y")],
            vec![pp(&r, "0"), pp(&r, "x*y")],
        ])
        .unwrap();
        let id = PolyMatrix::identity(&r, 2);
        assert_eq!(m.mul(&r, &id).unwrap(), m);
        assert_eq!(id.mul(&r, &m).unwrap(), m);
    }

    #[test]
    fn bracket_power_is_entrywise_frobenius() {
        let r = ring();
        let m = PolyMatrix::from_rows(vec![vec![pp(&r, "x + y"), pp(&r, "1")]]).unwrap();
        let b = bracket_power(&r, &m, 1).unwrap();
        assert_eq!(*b.at(0, 0), pp(&r, "x^2 + y^2"));
        assert_eq!(*b.at(0, 1), pp(&r, "1"));
    }

    #[test]
    fn bracket_power_multiplicative_in_levels() {
        let r = ring();
        let m = PolyMatrix::from_rows(vec![vec![pp(&r, "x*y + x"), pp(&r, "y^3")]]).unwrap();
        let two_steps = bracket_power(&r, &bracket_power(&r, &m, 1).unwrap(), 2).unwrap();
        let direct = bracket_power(&r, &m, 3).unwrap();
        assert_eq!(two_steps, direct);
    }

    #[test]
    fn degenerate_shapes() {
        let r = ring();
        let z03 = PolyMatrix::zero(0, 3);
        let z30 = PolyMatrix::zero(3, 0);
        let prod = z03.mul(&r, &z30).unwrap();
        assert_eq!((prod.rows, prod.cols), (0, 0));
        let prod2 = z30.mul(&r, &z03).unwrap();
        assert_eq!((prod2.rows, prod2.cols), (3, 3));
        assert!(prod2.is_zero());
        assert!(bracket_power(&r, &z03, 5).unwrap().is_zero());
    }

    #[test]
    fn block_assembly() {
        let r = ring();
        let a = PolyMatrix::identity(&r, 2);
        let b = PolyMatrix::zero(2, 1);
        let c = PolyMatrix::zero(1, 2);
        let d = PolyMatrix::from_rows(vec![vec![pp(&r, "x")]]).unwrap();
        let m = PolyMatrix::block(&[vec![&a, &b], vec![&c, &d]]).unwrap();
        assert_eq!((m.rows, m.cols), (3, 3));
        assert_eq!(*m.at(2, 2), pp(&r, "x"));
        assert_eq!(*m.at(0, 0), pp(&r, "1"));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let r = ring();
        let a = PolyMatrix::zero(2, 2);
        let b = PolyMatrix::zero(3, 3);
        assert!(a.mul(&r, &b).is_err());
        assert!(a.hstack(&b).is_err());
        assert!(a.vstack(&b).is_err());
    }
}
