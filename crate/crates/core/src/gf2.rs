//! Dense matrices over GF(2) with rows packed into `u64` words.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// A dense binary matrix. Row `i` occupies `row_words` consecutive words,
/// bit `j` of the row lives in word `j / 64` at position `j % 64`.
///
/// Zero-sized matrices (no rows or no columns) are allowed; chain complexes
/// with an empty chain group need them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    row_words: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let row_words = words_for(cols);
        BinaryMatrix {
            rows,
            cols,
            row_words,
            data: vec![0; rows * row_words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from a function of `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            for (j, &v) in r.iter().enumerate() {
                if v & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix whose row `i` has ones exactly at `support[i]`.
    pub fn from_supports(cols: usize, support: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(support.len(), cols);
        for (i, s) in support.iter().enumerate() {
            for &j in s {
                m.flip(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.row_words + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.row_words + j / WORD];
        let mask = 1u64 << (j % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.row_words + j / WORD] ^= 1u64 << (j % WORD);
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.row_words..(i + 1) * self.row_words]
    }

    /// Column indices of the ones in row `i`, ascending.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &w) in self.row(i).iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(k * WORD + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Index of the first nonzero column, if any.
    pub fn first_nonzero_col(&self) -> Option<usize> {
        (0..self.cols).find(|&j| (0..self.rows).any(|i| self.get(i, j)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_support(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix product `self * rhs` over GF(2).
    pub fn mul(&self, rhs: &BinaryMatrix) -> Result<BinaryMatrix, ShapeError> {
        if self.cols != rhs.rows {
            return Err(ShapeError {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        let rw = out.row_words;
        for i in 0..self.rows {
            for k in self.row_support(i) {
                let src = rhs.row(k);
                let dst = &mut out.data[i * rw..(i + 1) * rw];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a column vector given as a bool slice.
    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row_support(i).iter().filter(|&&j| v[j]).count() % 2 == 1)
            .collect()
    }

    /// Rank by Gaussian elimination on a copy of the rows.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / WORD, 1u64 << (col % WORD));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for (x, y) in row[w..].iter_mut().zip(&pivot[w..]) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// A basis of the right kernel `{x : M x = 0}`, one vector per row of the result.
    pub fn kernel(&self) -> BinaryMatrix {
        // Reduced row echelon form, then read off one kernel vector per free column.
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / WORD, 1u64 << (col % WORD));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Self::zeros(free.len(), self.cols);
        for (t, &f) in free.iter().enumerate() {
            k.set(t, f, true);
            for (r, &pc) in pivots.iter().enumerate() {
                if (rows[r][f / WORD] >> (f % WORD)) & 1 == 1 {
                    k.set(t, pc, true);
                }
            }
        }
        k
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`,
    /// adding (XOR) onto existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &BinaryMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in block.row_support(i) {
                self.flip(r0 + i, c0 + j);
            }
        }
    }

    /// Row-major 0/1 listing, mostly for tests and debugging.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    /// Packs the matrix as bytes: each row padded to a byte boundary,
    /// bit `j` of a row stored in byte `j / 8` at position `7 - j % 8`.
    pub fn to_packed_bytes(&self) -> Vec<u8> {
        let rb = self.cols.div_ceil(8);
        let mut out = vec![0u8; self.rows * rb];
        for i in 0..self.rows {
            for j in self.row_support(i) {
                out[i * rb + j / 8] |= 0x80 >> (j % 8);
            }
        }
        out
    }

    /// Inverse of [`to_packed_bytes`](Self::to_packed_bytes). Padding bits must be zero.
    pub fn from_packed_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self, PackError> {
        let rb = cols.div_ceil(8);
        if bytes.len() != rows * rb {
            return Err(PackError::Length {
                expected: rows * rb,
                found: bytes.len(),
            });
        }
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for k in 0..rb {
                let byte = bytes[i * rb + k];
                for b in 0..8 {
                    if byte & (0x80 >> b) != 0 {
                        let j = k * 8 + b;
                        if j >= cols {
                            return Err(PackError::Padding { row: i });
                        }
                        m.set(i, j, true);
                    }
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(32) {
            let s: String = (0..self.cols.min(96))
                .map(|j| if self.get(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot multiply {}x{} by {}x{}", left.0, left.1, right.0, right.1)]
pub struct ShapeError {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PackError {
    #[error("packed matrix has {found} bytes, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("nonzero padding bit in row {row}")]
    Padding { row: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    // Rank over GF(2) by brute force: the number of distinct vectors in the
    // row span is 2^rank.
    fn span_rank(m: &BinaryMatrix) -> usize {
        let rows: Vec<u128> = (0..m.rows())
            .map(|i| m.row_support(i).iter().map(|&j| 1u128 << j).sum())
            .collect();
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut v = 0u128;
            for (k, r) in rows.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v ^= r;
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    fn lcg_matrix(seed: u64, rows: usize, cols: usize) -> BinaryMatrix {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        BinaryMatrix::from_fn(rows, cols, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) % 3 == 0
        })
    }

    #[test]
    fn rank_matches_span_count() {
        for seed in 0..60 {
            let r = 1 + (seed as usize % 9);
            let c = 1 + (seed as usize * 7 % 80);
            let m = lcg_matrix(seed, r, c);
            assert_eq!(m.rank(), span_rank(&m), "seed {seed}");
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated_and_independent() {
        for seed in 0..40 {
            let m = lcg_matrix(seed, 5 + seed as usize % 7, 3 + seed as usize % 70);
            let k = m.kernel();
            assert_eq!(k.rows(), m.cols() - m.rank());
            assert_eq!(k.rank(), k.rows());
            assert!(m.mul(&k.transpose()).unwrap().is_zero());
        }
    }

    #[test]
    fn identity_and_transpose() {
        let m = lcg_matrix(3, 7, 130);
        assert_eq!(BinaryMatrix::identity(7).mul(&m).unwrap(), m);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn product_matches_naive() {
        let a = lcg_matrix(11, 6, 70);
        let b = lcg_matrix(12, 70, 9);
        let p = a.mul(&b).unwrap();
        for i in 0..6 {
            for j in 0..9 {
                let naive = (0..70).filter(|&k| a.get(i, k) && b.get(k, j)).count() % 2 == 1;
                assert_eq!(p.get(i, j), naive);
            }
        }
        assert!(b.mul(&b).is_err());
    }

    #[test]
    fn packed_bytes_roundtrip() {
        let m = lcg_matrix(5, 4, 13);
        let bytes = m.to_packed_bytes();
        assert_eq!(bytes.len(), 8);
        assert_eq!(BinaryMatrix::from_packed_bytes(4, 13, &bytes).unwrap(), m);
        let mut bad = bytes.clone();
        bad[1] |= 1;
        assert_eq!(
            BinaryMatrix::from_packed_bytes(4, 13, &bad),
            Err(PackError::Padding { row: 0 })
        );
    }

    #[test]
    fn empty_shapes() {
        let a = BinaryMatrix::zeros(3, 0);
        let b = BinaryMatrix::zeros(0, 4);
        assert_eq!(a.rank(), 0);
        assert_eq!(a.mul(&b).unwrap(), BinaryMatrix::zeros(3, 4));
        assert_eq!(b.kernel().rows(), 4);
    }
}
