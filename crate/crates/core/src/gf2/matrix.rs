use std::fmt;

use super::bitvec::BitVec;

/// Dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Reduced matrix, same shape as the input; zero rows at the bottom.
    pub matrix: BitMatrix,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    /// An empty (0-row) matrix with the given column count.
    pub fn empty(cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length must equal column count");
        }
        BitMatrix { cols, rows }
    }

    /// Parses rows written as `0`/`1` strings. All rows must share one length.
    pub fn parse_rows(rows: &[&str]) -> Option<Self> {
        let parsed: Option<Vec<BitVec>> = rows.iter().map(|r| BitVec::parse01(r)).collect();
        let parsed = parsed?;
        let cols = parsed.first().map_or(0, BitVec::len);
        if parsed.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(BitMatrix { cols, rows: parsed })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length must equal column count");
        self.rows.push(row);
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows(), "inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(other.cols);
                for k in row.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix {
            cols: other.cols,
            rows,
        }
    }

    /// `v * self` for a row vector `v`.
    pub fn left_mul(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows.len(), "dimension mismatch");
        let mut acc = BitVec::zeros(self.cols);
        for k in v.iter_ones() {
            acc.xor_assign(&self.rows[k]);
        }
        acc
    }

    /// `self * v^T`, returned as a vector indexed by row.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let bits: Vec<bool> = self.rows.iter().map(|r| r.dot(v)).collect();
        BitVec::from_bools(&bits)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: cols.len(),
            rows: self.rows.iter().map(|r| r.select(cols)).collect(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows(), other.rows(), "row counts differ");
        BitMatrix {
            cols: self.cols + other.cols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.concat(b))
                .collect(),
        }
    }

    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Rref {
            matrix: BitMatrix {
                cols: self.cols,
                rows,
            },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : self * x^T = 0}`, one vector per row.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let Rref {
            matrix,
            rank,
            pivots,
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = BitMatrix::empty(self.cols);
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(f, true);
            for (r, &p) in pivots.iter().enumerate().take(rank) {
                if matrix.get(r, f) {
                    v.set(p, true);
                }
            }
            basis.push_row(v);
        }
        basis
    }

    /// Nonzero rows of the reduced form: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> BitMatrix {
        let r = self.rref();
        BitMatrix {
            cols: self.cols,
            rows: r.matrix.rows.into_iter().take(r.rank).collect(),
        }
    }

    pub fn row_space_contains(&self, v: &BitVec) -> bool {
        let mut m = self.clone();
        let before = m.rank();
        m.push_row(v.clone());
        m.rank() == before
    }

    /// Row-space equality via mutual rank tests.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let a = self.rank();
        let b = other.rank();
        a == b && self.vstack(other).rank() == a
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {}", r)?;
        }
        write!(f, "]")
    }
}
