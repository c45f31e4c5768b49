//! Bit-packed GF(2) vectors and matrices.
//!
//! Everything here stores 64 bits per `u64` word, least significant bit
//! first. Bits past the logical length are always zero, so word-level
//! comparisons and popcounts need no masking.

use std::fmt;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn split(index: usize) -> (usize, u64) {
    (index / 64, 1u64 << (index % 64))
}

/// A fixed-length packed bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in ones {
            row.set(i, true);
        }
        row
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let (w, m) = split(index);
        self.words[w] & m != 0
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let (w, m) = split(index);
        if value {
            self.words[w] |= m;
        } else {
            self.words[w] &= !m;
        }
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    pub fn dot(&self, other: &BitRow) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitRow({s})")
    }
}

/// Dense row-major bit matrix with each row padded to whole words.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[BitRow]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            m.row_mut(i).copy_from_slice(row.words());
        }
        m
    }

    /// Builds a matrix by copying whole word-rows out of other matrices.
    pub(crate) fn with_capacity_rows(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows: 0,
            cols,
            stride,
            data: Vec::with_capacity(rows * stride),
        }
    }

    pub(crate) fn push_words(&mut self, words: &[u64]) {
        debug_assert_eq!(words.len(), self.stride);
        self.data.extend_from_slice(words);
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_bits(&self, r: usize) -> BitRow {
        BitRow {
            len: self.cols,
            words: self.row(r).to_vec(),
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let (w, m) = split(c);
        self.data[r * self.stride + w] & m != 0
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let (w, m) = split(c);
        let word = &mut self.data[r * self.stride + w];
        if value {
            *word |= m;
        } else {
            *word &= !m;
        }
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn xor_row(&mut self, src: usize, dst: usize) {
        self.xor_row_from(src, dst, 0);
    }

    #[inline]
    fn xor_row_from(&mut self, src: usize, dst: usize, first_word: usize) {
        if src == dst {
            self.row_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..src * s + s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..dst * s + s])
        };
        for (d, x) in b[first_word..].iter_mut().zip(&a[first_word..]) {
            *d ^= x;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = (a.min(b), a.max(b));
        let (first, second) = self.data.split_at_mut(hi * s);
        first[lo * s..lo * s + s].swap_with_slice(&mut second[..s]);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_bits(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Row-reduces in place and returns the rank.
    ///
    /// Each row is reduced against earlier pivot rows keyed by their lowest
    /// set column, so afterwards every nonzero row has a distinct leading
    /// (lowest) column and the nonzero rows form a basis of the row space.
    /// Row order is not changed.
    pub fn rank_in_place(&mut self) -> usize {
        const NONE: usize = usize::MAX;
        let s = self.stride;
        let mut pivot_of_col = vec![NONE; self.cols];
        let mut rank = 0;
        for r in 0..self.rows {
            let mut w = 0;
            loop {
                while w < s && self.data[r * s + w] == 0 {
                    w += 1;
                }
                if w == s {
                    break;
                }
                let col = w * 64 + self.data[r * s + w].trailing_zeros() as usize;
                match pivot_of_col[col] {
                    NONE => {
                        pivot_of_col[col] = r;
                        rank += 1;
                        break;
                    }
                    p => self.xor_row_from(p, r, w),
                }
            }
        }
        rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Rank over GF(2). Works on a scratch copy; the input is untouched.
pub fn gf2_rank(matrix: &BitMatrix) -> usize {
    matrix.clone().rank_in_place()
}
