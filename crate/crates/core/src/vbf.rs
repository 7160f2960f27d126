//! Vectorial Boolean functions stored as lookup tables, with the usual
//! cryptographic measurements: ANF and degree, Walsh transform, DDT,
//! linearity and the APN property.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::gf2::{dot, WordBasis, MAX_DIM};

/// Dense tables above this many entries are refused; the streaming
/// measurements still work.
const DENSE_LIMIT: u64 = 1 << 26;

/// A function `F_2^n -> F_2^m` as a table of `2^n` words of `m` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vbf {
    n: usize,
    m: usize,
    table: Vec<u32>,
}

/// A multiset of integers as ascending `(value, count)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spectrum(Vec<(u64, u64)>);

impl Spectrum {
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        let mut v: Vec<(u64, u64)> = pairs.into_iter().filter(|&(_, c)| c != 0).collect();
        v.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(v.len());
        for (value, count) in v {
            match merged.last_mut() {
                Some(last) if last.0 == value => last.1 += count,
                _ => merged.push((value, count)),
            }
        }
        Spectrum(merged)
    }

    /// Builds a spectrum from a histogram indexed by value.
    pub fn from_histogram(hist: &[u64]) -> Self {
        Spectrum(
            hist.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(v, &c)| (v as u64, c))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&(_, c)| c).sum()
    }

    pub fn max_value(&self) -> Option<u64> {
        self.0.last().map(|&(v, _)| v)
    }

    pub fn count_of(&self, value: u64) -> u64 {
        self.0
            .binary_search_by_key(&value, |&(v, _)| v)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (v, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({v},{c})")?;
        }
        f.write_str("]")
    }
}

/// Full Walsh table, rows indexed by `β = 1..2^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshTable {
    n: usize,
    m: usize,
    values: Vec<i32>,
}

impl WalshTable {
    pub fn get(&self, beta: u32, alpha: u32) -> i32 {
        assert!(beta != 0, "Walsh rows start at beta = 1");
        self.values[((beta as usize - 1) << self.n) | alpha as usize]
    }

    pub fn row(&self, beta: u32) -> &[i32] {
        assert!(beta != 0, "Walsh rows start at beta = 1");
        let start = (beta as usize - 1) << self.n;
        &self.values[start..start + (1 << self.n)]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Dense difference distribution table, rows `a = 1..2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdTable {
    n: usize,
    m: usize,
    counts: Vec<u16>,
}

impl DdTable {
    pub fn get(&self, a: u32, b: u32) -> u32 {
        assert!(a != 0, "DDT rows start at a = 1");
        u32::from(self.counts[((a as usize - 1) << self.m) | b as usize])
    }

    pub fn row(&self, a: u32) -> &[u16] {
        assert!(a != 0, "DDT rows start at a = 1");
        let start = (a as usize - 1) << self.m;
        &self.counts[start..start + (1 << self.m)]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `B_α(x) = G(x) + G(x+α) + G(α) + G(0)`, linear when `G` has degree at
/// most two.
#[derive(Debug, Clone)]
pub struct DerivativeMap {
    pub map: Vbf,
    pub linear: bool,
}

impl DerivativeMap {
    /// A basis of the set of values (its span, if the map is not linear).
    pub fn image_basis(&self) -> Vec<u32> {
        let mut basis = WordBasis::new();
        for &y in self.map.table() {
            basis.insert(y);
        }
        basis.vectors().to_vec()
    }
}

/// In-place fast Walsh-Hadamard transform.
pub fn fwht(buf: &mut [i32]) {
    let len = buf.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in buf.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// In-place binary Möbius transform on whole words; it is an involution.
pub fn moebius(buf: &mut [u32]) {
    let len = buf.len();
    let mut h = 1;
    while h < len {
        for block in buf.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter().zip(hi.iter_mut()) {
                *b ^= *a;
            }
        }
        h *= 2;
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        Err(Error::UnsupportedDimension(d))
    } else {
        Ok(())
    }
}

impl Vbf {
    pub fn new(n: usize, m: usize, table: Vec<u32>) -> Result<Self> {
        check_dim(n)?;
        check_dim(m)?;
        if table.len() != 1 << n {
            return Err(Error::WidthMismatch { left: table.len(), right: 1 << n });
        }
        if let Some(&bad) = table.iter().find(|&&y| y >> m != 0) {
            return Err(Error::ValueOutOfRange { value: bad.into(), width: m });
        }
        Ok(Vbf { n, m, table })
    }

    /// Table from a closure; output words are masked to `m` bits.
    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(u32) -> u32) -> Result<Self> {
        check_dim(n)?;
        check_dim(m)?;
        let mask = ((1u64 << m) - 1) as u32;
        Ok(Vbf { n, m, table: (0..1u32 << n).map(|x| f(x) & mask).collect() })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |x| x)
    }

    pub fn zero(n: usize, m: usize) -> Result<Self> {
        Self::from_fn(n, m, |_| 0)
    }

    /// `x -> Σ c_i x^{e_i}` in the field.
    pub fn from_univariate(field: &FieldSpec, terms: &[(u32, u64)]) -> Result<Self> {
        let n = field.n();
        let q = 1u64 << n;
        for &(c, e) in terms {
            if e >= q {
                return Err(Error::ExponentOutOfRange { exponent: e, n });
            }
            if u64::from(c) >= q {
                return Err(Error::ValueOutOfRange { value: c.into(), width: n });
            }
        }
        let table = (0..q as u32)
            .map(|x| {
                terms
                    .iter()
                    .fold(0, |acc, &(c, e)| acc ^ field.mul(c, field.pow(x, e)))
            })
            .collect();
        Vbf::new(n, n, table)
    }

    /// Coefficients `c_0..c_{2^n-1}` of the unique univariate polynomial of
    /// degree below `2^n` representing the function.
    pub fn univariate_coefficients(&self, field: &FieldSpec) -> Result<Vec<u32>> {
        let n = self.n;
        if field.n() != n || self.m != n {
            return Err(Error::NotSquare { n, m: self.m });
        }
        let q = 1usize << n;
        if (q as u64) * (q as u64) > DENSE_LIMIT {
            return Err(Error::TooLarge { what: "interpolation", entries: (q * q) as u64 });
        }
        if n == 1 {
            let (a, b) = (self.table[0], self.table[1]);
            return Ok(vec![a, a ^ b]);
        }
        // c_k = Σ_{x≠0} F(x) x^{-k} for 1 <= k <= q-2, with the two ends
        // fixed by F(0) and the sum of all values.
        let mut coeffs = vec![0u32; q];
        coeffs[0] = self.table[0];
        coeffs[q - 1] = self.table.iter().fold(0, |a, &y| a ^ y);
        for x in 1..q as u32 {
            let fx = self.table[x as usize];
            if fx == 0 {
                continue;
            }
            let xinv = field.inv(x);
            let mut p = xinv;
            for c in coeffs.iter_mut().take(q - 1).skip(1) {
                *c ^= field.mul(fx, p);
                p = field.mul(p, xinv);
            }
        }
        Ok(coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u32> {
        self.table
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    fn require_square(&self) -> Result<()> {
        if self.n != self.m {
            Err(Error::NotSquare { n: self.n, m: self.m })
        } else {
            Ok(())
        }
    }

    /// ANF coefficient words indexed by monomial mask: bit `j` of entry `u`
    /// is the coefficient of `x^u` in output coordinate `j`.
    pub fn anf(&self) -> Vec<u32> {
        let mut buf = self.table.clone();
        moebius(&mut buf);
        buf
    }

    /// Algebraic degree; the zero function has degree 0.
    pub fn degree(&self) -> u32 {
        self.anf()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(u, _)| (u as u32).count_ones())
            .max()
            .unwrap_or(0)
    }

    /// Signed Walsh values `Σ_x (-1)^{<α,x> + <β,F(x)>}` for one `β`,
    /// indexed by `α`.
    pub fn walsh_row(&self, beta: u32) -> Vec<i32> {
        let mut buf: Vec<i32> = self
            .table
            .iter()
            .map(|&y| if dot(beta, y) { -1 } else { 1 })
            .collect();
        fwht(&mut buf);
        buf
    }

    pub fn walsh(&self) -> Result<WalshTable> {
        let entries = ((1u64 << self.m) - 1) << self.n;
        if entries > DENSE_LIMIT {
            return Err(Error::TooLarge { what: "Walsh table", entries });
        }
        let mut values = Vec::with_capacity(entries as usize);
        for beta in 1..1u32 << self.m {
            values.extend(self.walsh_row(beta));
        }
        Ok(WalshTable { n: self.n, m: self.m, values })
    }

    /// Visits every Walsh row `β != 0` with a reused buffer.
    fn for_each_walsh_row(&self, mut f: impl FnMut(u32, &[i32])) {
        let mut buf = vec![0i32; 1 << self.n];
        for beta in 1..1u32 << self.m {
            for (w, &y) in buf.iter_mut().zip(&self.table) {
                *w = if dot(beta, y) { -1 } else { 1 };
            }
            fwht(&mut buf);
            f(beta, &buf);
        }
    }

    pub fn linearity(&self) -> u64 {
        let mut best = 0u64;
        self.for_each_walsh_row(|_, row| {
            for &w in row {
                best = best.max(u64::from(w.unsigned_abs()));
            }
        });
        best
    }

    /// Multiset of `|Ŵ_β(α)|` over all `α` and `β != 0`.
    pub fn extended_walsh_spectrum(&self) -> Spectrum {
        let mut hist = vec![0u64; (1 << self.n) + 1];
        self.for_each_walsh_row(|_, row| {
            for &w in row {
                hist[w.unsigned_abs() as usize] += 1;
            }
        });
        Spectrum::from_histogram(&hist)
    }

    /// `Σ_{β≠0} Σ_α Ŵ_β(α)^4`.
    pub fn fourth_moment(&self) -> u128 {
        let mut sum = 0u128;
        self.for_each_walsh_row(|_, row| {
            for &w in row {
                let s = u128::from(w.unsigned_abs()) * u128::from(w.unsigned_abs());
                sum += s * s;
            }
        });
        sum
    }

    /// APN test through the fourth moment of the Walsh transform.
    pub fn apn_by_moments(&self) -> Result<bool> {
        self.require_square()?;
        let n = self.n as u32;
        let target = (1u128 << (4 * n + 1)) - (1u128 << (3 * n + 1));
        Ok(self.fourth_moment() == target)
    }

    /// Row `a` of the DDT: `counts[b] = #{x : F(x) + F(x+a) = b}`.
    pub fn ddt_row(&self, a: u32) -> Vec<u32> {
        let mut counts = vec![0u32; 1 << self.m];
        for (x, &y) in self.table.iter().enumerate() {
            counts[(y ^ self.table[x ^ a as usize]) as usize] += 1;
        }
        counts
    }

    pub fn ddt(&self) -> Result<DdTable> {
        if self.n > 12 || self.m > 12 {
            let entries = ((1u64 << self.n) - 1) << self.m;
            return Err(Error::TooLarge { what: "difference table", entries });
        }
        let mut counts = Vec::with_capacity(((1usize << self.n) - 1) << self.m);
        for a in 1..1u32 << self.n {
            counts.extend(self.ddt_row(a).into_iter().map(|c| c as u16));
        }
        Ok(DdTable { n: self.n, m: self.m, counts })
    }

    /// Multiset of DDT entries over all rows `a != 0`, zeros included.
    pub fn differential_spectrum(&self) -> Spectrum {
        let mut hist = vec![0u64; (1 << self.n) + 1];
        let mut counts = vec![0u32; 1 << self.m];
        for a in 1..1usize << self.n {
            counts.fill(0);
            for (x, &y) in self.table.iter().enumerate() {
                counts[(y ^ self.table[x ^ a]) as usize] += 1;
            }
            for &c in &counts {
                hist[c as usize] += 1;
            }
        }
        Spectrum::from_histogram(&hist)
    }

    pub fn differential_uniformity(&self) -> u64 {
        self.differential_spectrum().max_value().unwrap_or(0)
    }

    /// True iff every DDT entry outside row 0 is at most 2. Stops at the
    /// first collision of three or more.
    pub fn is_apn(&self) -> Result<bool> {
        self.require_square()?;
        Ok(self.is_apn_unchecked())
    }

    pub(crate) fn is_apn_unchecked(&self) -> bool {
        let size = 1usize << self.m;
        let mut stamp = vec![0u32; size];
        let mut seen = vec![0u8; size];
        for a in 1..1usize << self.n {
            for x in 0..1usize << self.n {
                // each unordered pair {x, x^a} contributes twice; look at one
                if x & a.wrapping_neg() & a == 0 {
                    continue;
                }
                let d = (self.table[x] ^ self.table[x ^ a]) as usize;
                if stamp[d] != a as u32 {
                    stamp[d] = a as u32;
                    seen[d] = 0;
                }
                seen[d] += 1;
                if seen[d] > 1 {
                    return false;
                }
            }
        }
        true
    }

    /// `B_α(x) = F(x) + F(x+α) + F(α) + F(0)`.
    pub fn derivative_map(&self, alpha: u32) -> DerivativeMap {
        let t = &self.table;
        let a = alpha as usize;
        let c = t[a] ^ t[0];
        let table: Vec<u32> = (0..t.len()).map(|x| t[x] ^ t[x ^ a] ^ c).collect();
        let linear = (1..table.len()).all(|x| {
            let low = x & x.wrapping_neg();
            table[x] == table[x ^ low] ^ table[low]
        });
        DerivativeMap { map: Vbf { n: self.n, m: self.m, table }, linear }
    }

    /// `x -> F(x) + G(x)`.
    pub fn add(&self, other: &Vbf) -> Result<Vbf> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::WidthMismatch { left: self.n, right: other.n });
        }
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a ^ b).collect();
        Ok(Vbf { n: self.n, m: self.m, table })
    }

    /// `x -> self(inner(x))`.
    pub fn compose(&self, inner: &Vbf) -> Result<Vbf> {
        if inner.m != self.n {
            return Err(Error::WidthMismatch { left: inner.m, right: self.n });
        }
        let table = inner.table.iter().map(|&y| self.table[y as usize]).collect();
        Ok(Vbf { n: inner.n, m: self.m, table })
    }

    pub fn is_permutation(&self) -> bool {
        if self.n != self.m {
            return false;
        }
        let mut seen = vec![false; self.table.len()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }
}
