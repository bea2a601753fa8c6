//! Dense GF(2) linear algebra on bit-packed rows.
//!
//! Every matrix stores its rows as contiguous `u64` words, so row
//! elimination is word-wise XOR. Padding bits past `cols` are kept zero.

pub const WORD_BITS: usize = 64;

/// Number of `u64` words needed to hold `bits` bits.
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Index of the lowest set bit in a word slice, if any.
pub fn first_one(words: &[u64]) -> Option<usize> {
    for (w, &word) in words.iter().enumerate() {
        if word != 0 {
            return Some(w * WORD_BITS + word.trailing_zeros() as usize);
        }
    }
    None
}

/// Index of the highest set bit in a word slice, if any.
pub fn last_one(words: &[u64]) -> Option<usize> {
    for (w, &word) in words.iter().enumerate().rev() {
        if word != 0 {
            return Some(w * WORD_BITS + 63 - word.leading_zeros() as usize);
        }
    }
    None
}

/// Iterator over the indices of set bits in a word slice.
pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rem = word;
        std::iter::from_fn(move || {
            if rem == 0 {
                return None;
            }
            let b = rem.trailing_zeros() as usize;
            rem &= rem - 1;
            Some(w * WORD_BITS + b)
        })
    })
}

pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub fn and_into(dst: &mut [u64], src: &[u64]) {
    debug_assert_eq!(dst.len(), src.len());
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= s;
    }
}

/// A fixed-length bit vector backed by `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        xor_into(&mut self.words, &other.words);
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        and_into(&mut self.words, &other.words);
    }

    /// Complement within `len`, keeping padding bits zero.
    pub fn not_assign(&mut self) {
        for w in self.words.iter_mut() {
            *w = !*w;
        }
        self.clear_padding();
    }

    fn clear_padding(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Dense GF(2) matrix with row-major bit-packed storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from a closure; convenient in tests and generators.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Build from rows of `'0'`/`'1'` characters.
    pub fn from_bit_strings(rows: &[&str]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_fn(nrows, ncols, |r, c| {
            rows[r].as_bytes()[c] == b'1'
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words_per_row + c / WORD_BITS;
        (self.bits[w] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) out of range");
        let w = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.bits[w] |= mask;
        } else {
            self.bits[w] &= !mask;
        }
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// XOR an external word slice into row `r`.
    pub fn xor_row_words(&mut self, r: usize, words: &[u64]) {
        xor_into(self.row_mut(r), words);
    }

    /// XOR row `src` into row `dst` (`dst != src`).
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        assert_ne!(dst, src);
        let wpr = self.words_per_row;
        let (a, b) = if dst < src {
            let (lo, hi) = self.bits.split_at_mut(src * wpr);
            (&mut lo[dst * wpr..(dst + 1) * wpr], &hi[..wpr])
        } else {
            let (lo, hi) = self.bits.split_at_mut(dst * wpr);
            (&mut hi[..wpr], &lo[src * wpr..(src + 1) * wpr])
        };
        for (d, s) in a.iter_mut().zip(b) {
            *d ^= s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let wpr = self.words_per_row;
        for w in 0..wpr {
            self.bits.swap(a * wpr + w, b * wpr + w);
        }
    }

    pub fn clear_row(&mut self, r: usize) {
        self.row_mut(r).fill(0);
    }

    pub fn copy_row_from(&mut self, r: usize, words: &[u64]) {
        self.row_mut(r).copy_from_slice(words);
    }

    pub fn row_bitvec(&self, r: usize) -> BitVec {
        BitVec {
            len: self.cols,
            words: self.row(r).to_vec(),
        }
    }

    /// GF(2) rank via Gauss-Jordan elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for c in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(p) = (pivot_row..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(pivot_row, p);
            for r in 0..m.rows {
                if r != pivot_row && m.get(r, c) {
                    m.xor_rows(r, pivot_row);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    /// Matrix product over GF(2) (XOR-accumulate).
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in ones(self.row(r)) {
                out.xor_row_words(r, other.row(k));
            }
        }
        out
    }

    /// Inverse over GF(2), or `None` if the matrix is singular or non-square.
    pub fn invert(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = BitMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| work.get(r, c))?;
            work.swap_rows(c, p);
            inv.swap_rows(c, p);
            for r in 0..n {
                if r != c && work.get(r, c) {
                    work.xor_rows(r, c);
                    inv.xor_rows(r, c);
                }
            }
        }
        Some(inv)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in ones(self.row(r)) {
                out.set(c, r, true);
            }
        }
        out
    }

    /// Submatrix in the caller-given index order. Indices must be in range
    /// and duplicate-free; basis bookkeeping relies on the positional
    /// correspondence being stable.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> BitMatrix {
        let mut seen = BitVec::zeros(self.rows);
        for &r in row_idx {
            assert!(r < self.rows, "row index {r} out of range");
            assert!(!seen.get(r), "duplicate row index {r}");
            seen.set(r, true);
        }
        let mut seen = BitVec::zeros(self.cols);
        for &c in col_idx {
            assert!(c < self.cols, "column index {c} out of range");
            assert!(!seen.get(c), "duplicate column index {c}");
            seen.set(c, true);
        }
        BitMatrix::from_fn(row_idx.len(), col_idx.len(), |r, c| {
            self.get(row_idx[r], col_idx[c])
        })
    }

    /// Decompose into exactly `rank` rank-one terms: `self = Σ uᵢ·vᵢᵀ`.
    ///
    /// Gaussian elimination with partial pivoting; at each pivot the current
    /// pivot column and pivot row of the working matrix are emitted, then
    /// eliminated. Deterministic given the matrix.
    pub fn rank_one_decompose(&self) -> Vec<(BitVec, BitVec)> {
        let mut work = self.clone();
        let mut terms = Vec::new();
        while let Some((pr, pc)) =
            (0..work.rows).find_map(|r| first_one(work.row(r)).map(|c| (r, c)))
        {
            let u = BitVec {
                len: work.rows,
                words: {
                    let mut v = BitVec::zeros(work.rows);
                    for r in 0..work.rows {
                        if work.get(r, pc) {
                            v.set(r, true);
                        }
                    }
                    v.words
                },
            };
            let v = work.row_bitvec(pr);
            for r in u.ones() {
                if r != pr {
                    work.xor_rows(r, pr);
                }
            }
            work.clear_row(pr);
            terms.push((u, v));
        }
        terms
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '0' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
