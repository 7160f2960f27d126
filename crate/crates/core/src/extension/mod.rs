//! One-dimension extensions
//! `T(x, y) = (G(x) + y L(x), r(x) + y <ℓ, x>)` of an `n`-bit function `G`.
//!
//! Input and output words of `T` put `x` (resp. the `G` part) in the low
//! `n` bits and `y` (resp. the extra coordinate) in bit `n`.

pub mod gamma;
pub mod search;

use crate::error::{Error, Result};
use crate::gf2::{dot, GF2Matrix};
use crate::ortho::ortho_derivative_bitwise;
use crate::vbf::Vbf;

pub use gamma::{gamma_space, zero_extensions, GammaScan, GammaSpace, ZeroExtension, ZeroExtensionReport};
pub use search::{r_extension_search, sample_r, RSearch, SearchCheckpoint, SearchConfig, SearchReport};

/// `(G, r, L, ℓ)`; `r` is a Boolean function (`m = 1`) and `ℓ` the vector
/// of the linear form `x -> <ℓ, x>`.
#[derive(Debug, Clone)]
pub struct ExtensionSpec {
    pub g: Vbf,
    pub r: Vbf,
    pub l: GF2Matrix,
    pub ell: u32,
}

impl ExtensionSpec {
    /// Extension with `r = 0`.
    pub fn zero_r(g: Vbf, l: GF2Matrix, ell: u32) -> Result<Self> {
        let r = Vbf::zero(g.n(), 1)?;
        Ok(ExtensionSpec { g, r, l, ell })
    }

    pub fn build(&self) -> Result<Vbf> {
        build_extension(self)
    }
}

/// Matrix of the linear map `f`, from its values on the unit vectors.
pub fn linear_matrix(n: usize, f: impl Fn(u32) -> u32) -> GF2Matrix {
    let columns: Vec<u32> = (0..n).map(|j| f(1 << j)).collect();
    GF2Matrix::from_columns(n, &columns)
}

/// Matrix of `B_μ(x) = G(x) + G(x+μ) + G(μ) + G(0)` (meaningful for
/// `deg G <= 2`).
pub fn derivative_matrix(g: &Vbf, mu: u32) -> GF2Matrix {
    let t = g.table();
    let c = t[mu as usize] ^ t[0];
    linear_matrix(g.n(), |e| t[e as usize] ^ t[(e ^ mu) as usize] ^ c)
}

/// Rank-one matrix `x -> ν <ℓ, x>`.
pub fn rank_one(n: usize, nu: u32, ell: u32) -> GF2Matrix {
    linear_matrix(n, |e| if dot(ell, e) { nu } else { 0 })
}

pub fn build_extension(spec: &ExtensionSpec) -> Result<Vbf> {
    let n = spec.g.n();
    if spec.g.m() != n {
        return Err(Error::NotSquare { n, m: spec.g.m() });
    }
    if spec.r.n() != n || spec.r.m() != 1 {
        return Err(Error::WidthMismatch { left: n, right: spec.r.n() });
    }
    if spec.l.rows() != n || spec.l.cols() != n {
        return Err(Error::WidthMismatch { left: n, right: spec.l.cols() });
    }
    if spec.ell >> n != 0 {
        return Err(Error::ValueOutOfRange { value: spec.ell.into(), width: n });
    }
    let low = (1u32 << n) - 1;
    Vbf::from_fn(n + 1, n + 1, |w| {
        let x = w & low;
        let y = w >> n == 1;
        let mut out = spec.g.eval(x) | (spec.r.eval(x) << n);
        if y {
            out ^= spec.l.apply_word(x) | (u32::from(dot(spec.ell, x)) << n);
        }
        out
    })
}

/// True iff `G` is APN and `<π_G(α), L α> = 1` for every nonzero `α` with
/// `<ℓ, α> = 0`, which is exactly when the extension with `r = 0` is APN.
pub fn zero_ext_apn_test(g: &Vbf, l: &GF2Matrix, ell: u32) -> Result<bool> {
    if ell == 0 {
        return Err(Error::Usage("the linear form of a zero extension must be nonzero".into()));
    }
    if l.rows() != g.n() || l.cols() != g.n() {
        return Err(Error::WidthMismatch { left: g.n(), right: l.cols() });
    }
    let pi = match ortho_derivative_bitwise(g) {
        Ok(pi) => pi,
        Err(Error::NotApn) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok((1..1u32 << g.n())
        .filter(|&a| !dot(ell, a))
        .all(|a| dot(pi.eval(a), l.apply_word(a))))
}

/// Counts of Walsh rows by magnitude profile for a maximum-linearity
/// quadratic APN function on `n + 1` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalshProfile {
    /// Rows with every `|W| = 2^{(n+1)/2}`.
    pub bent: u64,
    /// Rows with `|W|` in `{0, 2^{(n+3)/2}}`.
    pub semibent: u64,
    /// Rows reaching `2^n`.
    pub maxlin: u64,
}

pub fn max_linearity_walsh_profile(t: &Vbf) -> Result<WalshProfile> {
    if t.n() != t.m() || t.n() < 4 {
        return Err(Error::Usage("expected a square function on at least 4 bits".into()));
    }
    let n = t.n() - 1;
    if n.is_multiple_of(2) {
        return Err(Error::Usage("the profile applies to extensions of odd dimension".into()));
    }
    let lin = t.linearity();
    if lin != 1 << n {
        return Err(Error::Usage(format!("linearity is {lin}, expected {}", 1u64 << n)));
    }
    let bent_value = 1u32 << n.div_ceil(2);
    let semi_value = 1u32 << ((n + 3) / 2);
    let maxlin_value = 1u32 << n;
    let mut p = WalshProfile { bent: 0, semibent: 0, maxlin: 0 };
    for beta in 1..1u32 << t.m() {
        let row = t.walsh_row(beta);
        let mags = || row.iter().map(|w| w.unsigned_abs());
        if mags().any(|v| v == maxlin_value) {
            p.maxlin += 1;
        } else if mags().all(|v| v == bent_value) {
            p.bent += 1;
        } else if mags().all(|v| v == 0 || v == semi_value) {
            p.semibent += 1;
        } else {
            return Err(Error::Usage(format!("component {beta:#x} matches no expected Walsh profile")));
        }
    }
    Ok(p)
}

/// Checks that `T` has the form `(G(x) + y x, y <γ, x>)` and that the
/// embedded `G` satisfies `<π_G(α), α> = 1` on `γ^⊥ \ {0}`.
pub fn canonical_form_check(t: &Vbf, gamma: u32) -> Result<bool> {
    if t.n() != t.m() || t.n() < 2 {
        return Err(Error::Usage("expected a square function on at least 2 bits".into()));
    }
    let n = t.n() - 1;
    if gamma == 0 || gamma >> n != 0 {
        return Err(Error::Usage("gamma must be a nonzero vector of the base dimension".into()));
    }
    let low = (1u32 << n) - 1;
    let g = Vbf::from_fn(n, n, |x| t.eval(x) & low)?;
    for x in 0..1u32 << n {
        let expect = g.eval(x) ^ x | (u32::from(dot(gamma, x)) << n);
        if t.eval(x) >> n != 0 || t.eval(x | (1 << n)) != expect {
            return Ok(false);
        }
    }
    if g.degree() > 2 {
        return Ok(false);
    }
    zero_ext_apn_test(&g, &GF2Matrix::identity(n), gamma)
}

/// For each `ν`, the rank of `L + B_μ + ν ℓᵀ`: returns how many `ν` give
/// rank `n`, rank `n - 1`, and anything else.
pub fn rank_counts(g: &Vbf, l: &GF2Matrix, ell: u32, mu: u32) -> Result<(u64, u64, u64)> {
    let n = g.n();
    let base = l.add(&derivative_matrix(g, mu))?;
    let mut counts = (0, 0, 0);
    for nu in 0..1u32 << n {
        match base.add(&rank_one(n, nu, ell))?.rank() {
            r if r == n => counts.0 += 1,
            r if r + 1 == n => counts.1 += 1,
            _ => counts.2 += 1,
        }
    }
    Ok(counts)
}
