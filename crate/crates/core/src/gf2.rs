//! Linear algebra over GF(2).
//!
//! Two representations live here. Short vectors (at most [`MAX_DIM`] bits)
//! are plain machine words, bit `i` being coordinate `x_i`; they are what the
//! function tables store. Long vectors and matrices, needed for the `n^2`
//! unknown systems of the extension machinery, are packed into `u64` words.

use crate::error::{Error, Result};

/// Largest supported input/output dimension.
pub const MAX_DIM: usize = 16;

/// Standard inner product on word-encoded vectors.
#[inline]
pub fn dot(x: u32, y: u32) -> bool {
    (x & y).count_ones() & 1 == 1
}

/// A width-checked short vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    width: u8,
    bits: u32,
}

impl BitVec {
    pub fn new(width: usize, bits: u32) -> Result<Self> {
        if width == 0 || width > MAX_DIM {
            return Err(Error::UnsupportedDimension(width));
        }
        if u64::from(bits) >> width != 0 {
            return Err(Error::ValueOutOfRange { value: bits.into(), width });
        }
        Ok(BitVec { width: width as u8, bits })
    }

    pub fn zero(width: usize) -> Result<Self> {
        Self::new(width, 0)
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn inner_product(self, other: BitVec) -> Result<bool> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                left: self.width(),
                right: other.width(),
            });
        }
        Ok(dot(self.bits, other.bits))
    }
}

/// Fully reduced row echelon form of a list of word vectors. Pivot of each row
/// is its lowest set bit; every pivot column is clear in all other rows.
fn reduce_words(vectors: &[u32]) -> Vec<u32> {
    let mut rows: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &r in &rows {
            let p = r.trailing_zeros();
            if (v >> p) & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            let p = v.trailing_zeros();
            for r in rows.iter_mut() {
                if (*r >> p) & 1 == 1 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    rows.sort_by_key(|r| r.trailing_zeros());
    rows
}

/// Rank of a set of word vectors.
pub fn word_rank(vectors: &[u32]) -> usize {
    reduce_words(vectors).len()
}

/// Basis of `{w : <w, v> = 0 for every v in vectors}` inside `F_2^width`.
pub fn orthogonal_complement(vectors: &[u32], width: usize) -> Vec<u32> {
    let rows = reduce_words(vectors);
    let pivot_mask = rows.iter().fold(0u32, |acc, r| acc | r & r.wrapping_neg());
    (0..width)
        .filter(|&f| (pivot_mask >> f) & 1 == 0)
        .map(|f| {
            let mut w = 1u32 << f;
            for r in &rows {
                if (r >> f) & 1 == 1 {
                    w |= 1 << r.trailing_zeros();
                }
            }
            w
        })
        .collect()
}

/// Incrementally built basis of a subspace of word vectors.
#[derive(Debug, Clone, Default)]
pub struct WordBasis {
    rows: Vec<u32>,
}

impl WordBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reduce(&self, mut v: u32) -> u32 {
        for &r in &self.rows {
            let p = r.trailing_zeros();
            if (v >> p) & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    /// Returns `true` when `v` was independent of the current span.
    pub fn insert(&mut self, v: u32) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        self.rows.push(v);
        true
    }

    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn vectors(&self) -> &[u32] {
        &self.rows
    }
}

/// Arbitrary-length packed vector over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Vector {
    len: usize,
    words: Vec<u64>,
}

impl GF2Vector {
    pub fn zero(len: usize) -> Self {
        GF2Vector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(len: usize, bits: I) -> Self {
        let mut v = Self::zero(len);
        for (i, b) in bits.into_iter().enumerate().take(len) {
            v.set(i, b);
        }
        v
    }

    /// Builds a vector of length `len <= 64` from the low bits of `word`.
    pub fn from_word(len: usize, word: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zero(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = word & mask;
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
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        let w = &mut self.words[i / 64];
        if b {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &GF2Vector) {
        debug_assert_eq!(self.len, other.len);
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

    pub fn dot(&self, other: &GF2Vector) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

/// Basis of a subspace of long vectors, reduced in insertion order.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    len: usize,
    rows: Vec<(usize, GF2Vector)>,
}

impl SpanBasis {
    pub fn new(len: usize) -> Self {
        SpanBasis { len, rows: Vec::new() }
    }

    pub fn reduce(&self, v: &GF2Vector) -> GF2Vector {
        let mut v = v.clone();
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.xor_assign(r);
            }
        }
        v
    }

    pub fn insert(&mut self, v: &GF2Vector) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let v = self.reduce(v);
        match v.first_one() {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &GF2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Dense bit-packed matrix over GF(2), stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`GF2Matrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub echelon: GF2Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl GF2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        GF2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[GF2Vector]) -> Result<Self> {
        let mut m = Self::zero(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::WidthMismatch { left: cols, right: v.len() });
            }
            let words = v.words();
            m.row_words_mut(r)[..words.len()].copy_from_slice(words);
        }
        Ok(m)
    }

    /// Matrix whose `j`-th column is the word `columns[j]` (bit `i` = row `i`).
    pub fn from_columns(rows: usize, columns: &[u32]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (j, &c) in columns.iter().enumerate() {
            for i in 0..rows {
                if (c >> i) & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        let w = &mut self.data[r * self.stride + c / 64];
        if b {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> GF2Vector {
        let mut v = GF2Vector::zero(self.cols);
        let n = v.words.len();
        v.words.copy_from_slice(&self.row_words(r)[..n]);
        v
    }

    pub fn column_word(&self, c: usize) -> u32 {
        debug_assert!(self.rows <= 32);
        (0..self.rows).fold(0, |acc, r| acc | (u32::from(self.get(r, c)) << r))
    }

    pub fn columns_words(&self) -> Vec<u32> {
        (0..self.cols).map(|c| self.column_word(c)).collect()
    }

    /// `M x` for a word-encoded `x`; requires at most 32 rows and columns.
    pub fn apply_word(&self, x: u32) -> u32 {
        debug_assert!(self.rows <= 32 && self.cols <= 32);
        (0..self.rows).fold(0, |acc, r| {
            let bit = (self.data[r * self.stride] & u64::from(x)).count_ones() & 1;
            acc | (bit << r)
        })
    }

    pub fn mul_vector(&self, x: &GF2Vector) -> Result<GF2Vector> {
        if x.len() != self.cols {
            return Err(Error::WidthMismatch { left: self.cols, right: x.len() });
        }
        Ok(GF2Vector::from_bits(
            self.rows,
            (0..self.rows).map(|r| {
                self.row_words(r)
                    .iter()
                    .zip(x.words())
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    & 1
                    == 1
            }),
        ))
    }

    pub fn add(&self, other: &GF2Matrix) -> Result<GF2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::WidthMismatch { left: self.cols, right: other.cols });
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Row-major flattening `(i, j) -> i * cols + j`.
    pub fn to_vector(&self) -> GF2Vector {
        GF2Vector::from_bits(
            self.rows * self.cols,
            (0..self.rows).flat_map(|r| (0..self.cols).map(move |c| (r, c))).map(|(r, c)| self.get(r, c)),
        )
    }

    pub fn from_vector(rows: usize, cols: usize, v: &GF2Vector) -> Result<GF2Matrix> {
        if v.len() != rows * cols {
            return Err(Error::WidthMismatch { left: rows * cols, right: v.len() });
        }
        let mut m = GF2Matrix::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if v.get(r * cols + c) {
                    m.set(r, c, true);
                }
            }
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for k in 0..self.stride {
            let s = self.data[src * self.stride + k];
            self.data[dst * self.stride + k] ^= s;
        }
    }

    /// Reduced row echelon form. Columns are scanned left to right and the
    /// first row holding a one becomes the pivot row, so the output is a pure
    /// function of the input.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Rref { echelon: m, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> Vec<GF2Vector> {
        let Rref { echelon, pivots, .. } = self.rref();
        kernel_from_echelon(&echelon, &pivots, self.cols)
    }

    /// Complete solution set of `M x = v`.
    pub fn solve_affine(&self, v: &GF2Vector) -> Result<AffineSolutionSpace> {
        if v.len() != self.rows {
            return Err(Error::WidthMismatch { left: self.rows, right: v.len() });
        }
        let mut aug = GF2Matrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, self.cols, v.get(r));
        }
        let Rref { echelon, pivots, rank } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(AffineSolutionSpace::empty(self.cols));
        }
        let mut particular = GF2Vector::zero(self.cols);
        for (r, &p) in pivots.iter().enumerate().take(rank) {
            particular.set(p, echelon.get(r, self.cols));
        }
        let kernel = kernel_from_echelon(&echelon, &pivots, self.cols);
        Ok(AffineSolutionSpace {
            dim: self.cols,
            particular: Some(particular),
            kernel,
        })
    }
}

fn kernel_from_echelon(echelon: &GF2Matrix, pivots: &[usize], cols: usize) -> Vec<GF2Vector> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        if p < cols {
            is_pivot[p] = true;
        }
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = GF2Vector::zero(cols);
            v.set(f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if p < cols && echelon.get(r, f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

/// Solution set of an inhomogeneous linear system: either empty or
/// `particular + span(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutionSpace {
    dim: usize,
    particular: Option<GF2Vector>,
    kernel: Vec<GF2Vector>,
}

impl AffineSolutionSpace {
    pub fn empty(dim: usize) -> Self {
        AffineSolutionSpace {
            dim,
            particular: None,
            kernel: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    pub fn particular(&self) -> Option<&GF2Vector> {
        self.particular.as_ref()
    }

    pub fn kernel(&self) -> &[GF2Vector] {
        &self.kernel
    }

    /// `log2` of the number of solutions, `None` when empty.
    pub fn kernel_dim(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.kernel.len())
    }

    pub fn contains(&self, x: &GF2Vector) -> bool {
        let Some(p) = &self.particular else {
            return false;
        };
        if x.len() != self.dim {
            return false;
        }
        let mut basis = SpanBasis::new(self.dim);
        for k in &self.kernel {
            basis.insert(k);
        }
        let mut d = x.clone();
        d.xor_assign(p);
        basis.contains(&d)
    }

    /// Enumerates every member. Only sensible for small kernels.
    pub fn members(&self) -> impl Iterator<Item = GF2Vector> + '_ {
        let count: u64 = match &self.particular {
            Some(_) => {
                assert!(self.kernel.len() < 40, "solution space too large to enumerate");
                1 << self.kernel.len()
            }
            None => 0,
        };
        (0..count).map(move |mask| {
            let mut v = self.particular.clone().expect("nonempty");
            for (i, k) in self.kernel.iter().enumerate() {
                if (mask >> i) & 1 == 1 {
                    v.xor_assign(k);
                }
            }
            v
        })
    }
}
