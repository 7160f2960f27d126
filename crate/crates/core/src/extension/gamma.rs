//! The solution space `Γ_{G,ℓ}` of linear maps `L` making the zero
//! extension APN, its quotient by the maps that never change the EA class,
//! and the classification of all zero extensions of `G`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::extension::{derivative_matrix, rank_one, ExtensionSpec};
use crate::gf2::{dot, AffineSolutionSpace, GF2Matrix, GF2Vector, SpanBasis};
use crate::ortho::{ortho_derivative_bitwise, InvariantSignature};
use crate::vbf::Vbf;

/// Above this many representatives per `Γ` the quotient is refused.
const MAX_REPRESENTATIVE_BITS: usize = 16;

/// `Γ_{G,ℓ}` with `L` flattened row-major (`L[i][j]` at `i*n + j`).
#[derive(Debug, Clone)]
pub struct GammaSpace {
    pub n: usize,
    pub ell: u32,
    pub system: GF2Matrix,
    pub solutions: AffineSolutionSpace,
    g: Vbf,
}

/// Builds the system with one row per `α != 0`, `<ℓ, α> = 0`: entry
/// `(i, j)` of the row is `π(α)_i α_j`, right-hand side 1.
fn system(pi: &Vbf, ell: u32) -> GF2Matrix {
    let n = pi.n();
    let alphas: Vec<u32> = (1..1u32 << n).filter(|&a| !dot(ell, a)).collect();
    let mut m = GF2Matrix::zero(alphas.len(), n * n);
    for (row, &a) in alphas.iter().enumerate() {
        let p = pi.eval(a);
        for i in 0..n {
            if p >> i & 1 == 0 {
                continue;
            }
            for j in 0..n {
                if a >> j & 1 == 1 {
                    m.set(row, i * n + j, true);
                }
            }
        }
    }
    m
}

fn require_quadratic_apn(g: &Vbf) -> Result<Vbf> {
    ortho_derivative_bitwise(g)
}

fn gamma_from_pi(g: &Vbf, pi: &Vbf, ell: u32) -> Result<GammaSpace> {
    let n = g.n();
    if ell == 0 || ell >> n != 0 {
        return Err(Error::Usage(format!("linear form {ell:#x} must be a nonzero {n}-bit vector")));
    }
    let system = system(pi, ell);
    let ones = GF2Vector::from_bits(system.rows(), std::iter::repeat_n(true, system.rows()));
    let solutions = system.solve_affine(&ones)?;
    Ok(GammaSpace { n, ell, system, solutions, g: g.clone() })
}

/// `Γ_{G,ℓ}` for a quadratic APN `G` and nonzero `ℓ`.
pub fn gamma_space(g: &Vbf, ell: u32) -> Result<GammaSpace> {
    let pi = require_quadratic_apn(g)?;
    gamma_from_pi(g, &pi, ell)
}

impl GammaSpace {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// `log2 |Γ|`, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.solutions.kernel_dim()
    }

    pub fn contains(&self, l: &GF2Matrix) -> bool {
        l.rows() == self.n && l.cols() == self.n && self.solutions.contains(&l.to_vector())
    }

    pub fn members(&self) -> impl Iterator<Item = GF2Matrix> + '_ {
        self.solutions
            .members()
            .map(move |v| GF2Matrix::from_vector(self.n, self.n, &v).expect("n*n vector"))
    }

    /// Basis of the image of `(μ, ν) -> B_μ + ν ℓᵀ`: first the `B_{e_k}`,
    /// then the `e_k ℓᵀ`.
    pub fn j_image_basis(&self) -> Vec<GF2Matrix> {
        let n = self.n;
        (0..n)
            .map(|k| derivative_matrix(&self.g, 1 << k))
            .chain((0..n).map(|k| rank_one(n, 1 << k, self.ell)))
            .collect()
    }

    /// One `L` per coset of `Γ` modulo the image of `J`; every coset
    /// yields EA-equivalent extensions.
    pub fn representatives(&self) -> Result<Vec<GF2Matrix>> {
        let n = self.n;
        if n < 3 {
            return Err(Error::Usage("the quotient of Γ is only defined for n >= 3".into()));
        }
        let Some(particular) = self.solutions.particular() else {
            return Ok(Vec::new());
        };
        let kernel = self.solutions.kernel();
        let mut kernel_span = SpanBasis::new(n * n);
        for v in kernel {
            kernel_span.insert(v);
        }
        let mut span = SpanBasis::new(n * n);
        for m in self.j_image_basis() {
            let v = m.to_vector();
            if !kernel_span.contains(&v) {
                return Err(Error::Invariant(
                    "image of J is not contained in the homogeneous solutions".into(),
                ));
            }
            if !span.insert(&v) {
                return Err(Error::Invariant("J is not injective".into()));
            }
        }
        let complement: Vec<&GF2Vector> = kernel.iter().filter(|v| span.insert(v)).collect();
        if complement.len() > MAX_REPRESENTATIVE_BITS {
            return Err(Error::TooLarge { what: "set of Γ representatives", entries: 1 << complement.len() });
        }
        let mut reps = Vec::with_capacity(1 << complement.len());
        for mask in 0u32..1 << complement.len() {
            let mut v = particular.clone();
            for (k, c) in complement.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v.xor_assign(c);
                }
            }
            reps.push(GF2Matrix::from_vector(n, n, &v)?);
        }
        Ok(reps)
    }
}

/// What the scan found for one linear form `γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaScan {
    pub gamma: u32,
    /// `log2 |Γ|`, `None` when `Γ` is empty.
    pub kernel_dim: Option<usize>,
    pub representatives: usize,
}

#[derive(Debug, Clone)]
pub struct ZeroExtension {
    pub gamma: u32,
    pub l: GF2Matrix,
    pub function: Vbf,
    pub signature: InvariantSignature,
}

#[derive(Debug, Clone)]
pub struct ZeroExtensionReport {
    pub scans: Vec<GammaScan>,
    /// Deduplicated by signature, in order of first `(γ, representative)`.
    pub extensions: Vec<ZeroExtension>,
}

/// All zero extensions of a quadratic APN `G` up to the EA-preserving
/// moves, deduplicated by signature.
pub fn zero_extensions(g: &Vbf, exec: Exec) -> Result<ZeroExtensionReport> {
    let n = g.n();
    let pi = require_quadratic_apn(g)?;
    let gammas: Vec<u32> = (1..1u32 << n).collect();
    let per_gamma = exec.map_slice(&gammas, |&gamma| -> Result<(GammaScan, Vec<ZeroExtension>)> {
        let space = gamma_from_pi(g, &pi, gamma)?;
        let reps = if space.is_empty() { Vec::new() } else { space.representatives()? };
        let scan = GammaScan { gamma, kernel_dim: space.dim(), representatives: reps.len() };
        let mut found = Vec::with_capacity(reps.len());
        for l in reps {
            let t = ExtensionSpec::zero_r(g.clone(), l.clone(), gamma)?.build()?;
            if !t.is_apn()? {
                return Err(Error::Invariant(format!(
                    "extension from a member of Γ for γ={gamma:#x} is not APN"
                )));
            }
            let signature = InvariantSignature::of(&t)?;
            found.push(ZeroExtension { gamma, l, function: t, signature });
        }
        Ok((scan, found))
    });
    let mut scans = Vec::with_capacity(per_gamma.len());
    let mut extensions = Vec::new();
    let mut seen: BTreeMap<InvariantSignature, ()> = BTreeMap::new();
    for item in per_gamma {
        let (scan, found) = item?;
        scans.push(scan);
        for e in found {
            if seen.insert(e.signature.clone(), ()).is_none() {
                extensions.push(e);
            }
        }
    }
    Ok(ZeroExtensionReport { scans, extensions })
}
