//! Trims: restrict `F` to a hyperplane `H` (linear `α^⊥` or its affine
//! complement) and project the output along `β` onto `γ^⊥`, giving a
//! function one dimension smaller.
//!
//! Coordinates on `α^⊥` use the basis `{e_j + <α,e_j> e_i : j != i}` where
//! `i` is the lowest set bit of `α`; `γ^⊥` uses the same rule, so an output
//! word in `γ^⊥` is written in coordinates by deleting bit `i_γ`.

pub mod graph;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gf2::dot;
use crate::ortho::InvariantSignature;
use crate::vbf::Vbf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `H = α^⊥`.
    Linear,
    /// `H` is the complement of `α^⊥`.
    Affine,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Linear => "linear",
            Side::Affine => "affine",
        })
    }
}

/// One trim `(H, β, ε, γ)` of an `n`-bit function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TrimDescriptor {
    pub alpha: u32,
    pub side: Side,
    pub beta: u32,
    pub epsilon: u32,
    pub gamma: u32,
}

impl fmt::Display for TrimDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "side={} alpha={:#x} beta={:#x} epsilon={:#x} gamma={:#x}",
            self.side, self.alpha, self.beta, self.epsilon, self.gamma
        )
    }
}

fn low_bit(x: u32) -> u32 {
    x & x.wrapping_neg()
}

impl TrimDescriptor {
    /// The descriptor with the smallest valid `ε` and `γ`.
    pub fn canonical(side: Side, alpha: u32, beta: u32) -> Self {
        let epsilon = match side {
            Side::Linear => 0,
            Side::Affine => low_bit(alpha),
        };
        TrimDescriptor { alpha, side, beta, epsilon, gamma: low_bit(beta) }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let full = ((1u64 << n) - 1) as u32;
        let bad = |msg: &str| Err(Error::InvalidDescriptor(format!("{msg} ({self})")));
        if n < 2 {
            return bad("trims need at least two input bits");
        }
        if [self.alpha, self.beta, self.epsilon, self.gamma].iter().any(|&w| w & !full != 0) {
            return bad("component wider than the function");
        }
        if self.alpha == 0 || self.beta == 0 {
            return bad("alpha and beta must be nonzero");
        }
        match self.side {
            Side::Linear if self.epsilon != 0 => return bad("epsilon must be 0 on the linear side"),
            Side::Affine if !dot(self.alpha, self.epsilon) => {
                return bad("epsilon must lie outside alpha-perp")
            }
            _ => {}
        }
        if !dot(self.beta, self.gamma) {
            return bad("<beta, gamma> must be 1");
        }
        Ok(())
    }
}

/// `x -> x + β <γ, x>`, the projection onto `γ^⊥` along `β`.
pub fn project(beta: u32, gamma: u32, x: u32) -> Result<u32> {
    if !dot(beta, gamma) {
        return Err(Error::Usage("projection needs <beta, gamma> = 1".into()));
    }
    Ok(x ^ if dot(gamma, x) { beta } else { 0 })
}

/// Inserts a zero at bit position `i`.
fn insert_zero(c: u32, i: u32) -> u32 {
    let low = c & ((1 << i) - 1);
    ((c ^ low) << 1) | low
}

/// Removes bit position `i`.
fn delete_bit(y: u32, i: u32) -> u32 {
    let low = y & ((1 << i) - 1);
    ((y >> (i + 1)) << i) | low
}

/// Embeds `(n-1)`-bit coordinates into `α^⊥`.
pub fn hyperplane_point(alpha: u32, c: u32) -> u32 {
    let i = alpha.trailing_zeros();
    let x = insert_zero(c, i);
    x | (u32::from(dot(alpha, x)) << i)
}

/// `c -> F(x(c) + ε)` for the hyperplane of `d`; independent of `β, γ`.
fn restricted(f: &Vbf, alpha: u32, epsilon: u32) -> Vec<u32> {
    (0..1u32 << (f.n() - 1))
        .map(|c| f.eval(hyperplane_point(alpha, c) ^ epsilon))
        .collect()
}

fn project_restricted(n: usize, restricted: &[u32], beta: u32, gamma: u32) -> Vbf {
    let i = gamma.trailing_zeros();
    let table = restricted
        .iter()
        .map(|&y| delete_bit(y ^ if dot(gamma, y) { beta } else { 0 }, i))
        .collect();
    Vbf::new(n - 1, n - 1, table).expect("projected table is well formed")
}

fn require_trimmable(f: &Vbf) -> Result<()> {
    if f.n() != f.m() {
        return Err(Error::NotSquare { n: f.n(), m: f.m() });
    }
    if f.n() < 2 {
        return Err(Error::Usage("trims need at least two input bits".into()));
    }
    Ok(())
}

/// The trim of `f` along `d`, as an `(n-1)`-bit function.
pub fn trim(f: &Vbf, d: &TrimDescriptor) -> Result<Vbf> {
    require_trimmable(f)?;
    d.validate(f.n())?;
    Ok(project_restricted(f.n(), &restricted(f, d.alpha, d.epsilon), d.beta, d.gamma))
}

/// Hyperplanes `(α, side)` in enumeration order: ascending `α`, linear
/// side first.
fn hyperplanes(n: usize, linear_only: bool) -> Vec<(u32, Side)> {
    let mut out = Vec::new();
    for alpha in 1..1u32 << n {
        out.push((alpha, Side::Linear));
        if !linear_only {
            out.push((alpha, Side::Affine));
        }
    }
    out
}

/// All trims of one hyperplane in ascending `β` order.
fn hyperplane_trims(f: &Vbf, alpha: u32, side: Side) -> impl Iterator<Item = (TrimDescriptor, Vbf)> + '_ {
    let n = f.n();
    let base = TrimDescriptor::canonical(side, alpha, 1);
    let rows = restricted(f, alpha, base.epsilon);
    (1..1u32 << n).map(move |beta| {
        let d = TrimDescriptor::canonical(side, alpha, beta);
        let t = project_restricted(n, &rows, beta, d.gamma);
        (d, t)
    })
}

/// The multiset of signatures of all trims.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrimSpectrum {
    pub n: usize,
    pub quadratic_reduced: bool,
    pub counts: BTreeMap<InvariantSignature, u64>,
}

impl TrimSpectrum {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn apn_signatures(&self) -> impl Iterator<Item = (&InvariantSignature, u64)> {
        self.counts.iter().filter(|(s, _)| s.apn).map(|(s, &c)| (s, c))
    }

    /// Number of distinct signatures whose 64-bit hash is shared with
    /// another distinct signature.
    pub fn hash_collisions(&self) -> usize {
        let mut seen = BTreeMap::new();
        for s in self.counts.keys() {
            *seen.entry(s.hash64()).or_insert(0usize) += 1;
        }
        seen.values().filter(|&&c| c > 1).copied().sum()
    }
}

/// Signatures of all `2(2^n-1)^2` trims (or the `(2^n-1)^2` linear-side
/// trims when `quadratic_reduced`, which needs `deg F <= 2`).
pub fn trim_spectrum(f: &Vbf, quadratic_reduced: bool, exec: Exec) -> Result<TrimSpectrum> {
    require_trimmable(f)?;
    if quadratic_reduced && f.degree() > 2 {
        return Err(Error::Usage(
            "the linear-hyperplane spectrum is only defined for functions of degree at most 2".into(),
        ));
    }
    let planes = hyperplanes(f.n(), quadratic_reduced);
    let per_plane = exec.map_slice(&planes, |&(alpha, side)| {
        let mut local: BTreeMap<InvariantSignature, u64> = BTreeMap::new();
        for (_, t) in hyperplane_trims(f, alpha, side) {
            let sig = InvariantSignature::of(&t).expect("trims are square");
            *local.entry(sig).or_insert(0) += 1;
        }
        local
    });
    let mut counts = BTreeMap::new();
    for local in per_plane {
        for (sig, c) in local {
            *counts.entry(sig).or_insert(0) += c;
        }
    }
    Ok(TrimSpectrum { n: f.n(), quadratic_reduced, counts })
}

/// One APN signature found among the trims, with the first descriptor (in
/// enumeration order) producing it and the number of trims sharing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApnTrim {
    pub witness: TrimDescriptor,
    pub signature: InvariantSignature,
    pub count: u64,
    pub function: Vbf,
}

/// APN trims of `f`, one entry per distinct signature, in order of first
/// appearance.
pub fn apn_trims(f: &Vbf, exec: Exec) -> Result<Vec<ApnTrim>> {
    require_trimmable(f)?;
    let planes = hyperplanes(f.n(), false);
    let per_plane = exec.map_slice(&planes, |&(alpha, side)| {
        hyperplane_trims(f, alpha, side)
            .filter(|(_, t)| t.is_apn_unchecked())
            .collect::<Vec<_>>()
    });
    let mut out: Vec<ApnTrim> = Vec::new();
    let mut index: BTreeMap<InvariantSignature, usize> = BTreeMap::new();
    for (d, t) in per_plane.into_iter().flatten() {
        let sig = InvariantSignature::of(&t)?;
        match index.get(&sig) {
            Some(&k) => out[k].count += 1,
            None => {
                index.insert(sig.clone(), out.len());
                out.push(ApnTrim { witness: d, signature: sig, count: 1, function: t });
            }
        }
    }
    Ok(out)
}

/// One link of a recursive chain: the function and the trim that produced
/// it from the previous link (`None` for the starting function).
#[derive(Debug, Clone)]
pub struct ChainLink {
    pub function: Vbf,
    pub descriptor: Option<TrimDescriptor>,
}

struct WitnessSearch {
    failed: HashSet<(usize, InvariantSignature)>,
}

impl WitnessSearch {
    fn descend(&mut self, f: &Vbf, chain: &mut Vec<ChainLink>) -> bool {
        if f.n() == 2 {
            return true;
        }
        let mut tried: BTreeSet<InvariantSignature> = BTreeSet::new();
        for (alpha, side) in hyperplanes(f.n(), false) {
            for (d, t) in hyperplane_trims(f, alpha, side) {
                if !t.is_apn_unchecked() {
                    continue;
                }
                let sig = InvariantSignature::of(&t).expect("trims are square");
                if self.failed.contains(&(t.n(), sig.clone())) || !tried.insert(sig.clone()) {
                    continue;
                }
                chain.push(ChainLink { function: t.clone(), descriptor: Some(d) });
                if self.descend(&t, chain) {
                    return true;
                }
                chain.pop();
                self.failed.insert((t.n(), sig));
            }
        }
        false
    }
}

/// A chain `F = F_n, F_{n-1}, ..., F_2` of APN functions, each an APN trim
/// of the previous one, found by depth-first search in ascending
/// `(α, side, β)` order; `None` if no chain exists.
pub fn recursive_witness(f: &Vbf) -> Result<Option<Vec<ChainLink>>> {
    require_trimmable(f)?;
    if !f.is_apn()? {
        return Err(Error::Usage("recursive chains start from an APN function".into()));
    }
    let mut chain = vec![ChainLink { function: f.clone(), descriptor: None }];
    let mut search = WitnessSearch { failed: HashSet::new() };
    Ok(search.descend(f, &mut chain).then_some(chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cube(n: usize) -> Vbf {
        Vbf::from_univariate(&FieldSpec::standard(n).unwrap(), &[(1, 3)]).unwrap()
    }

    /// Trim computed straight from the definition: enumerate `H` in
    /// ascending order and read coordinates off an explicit basis.
    fn trim_oracle(f: &Vbf, d: &TrimDescriptor) -> Vec<u32> {
        let n = f.n();
        let i = d.alpha.trailing_zeros();
        let basis: Vec<u32> = (0..n as u32)
            .filter(|&j| j != i)
            .map(|j| (1 << j) | if dot(d.alpha, 1 << j) { 1 << i } else { 0 })
            .collect();
        let gi = d.gamma.trailing_zeros();
        (0..1u32 << (n - 1))
            .map(|c| {
                let x = (0..n - 1).filter(|k| c >> k & 1 == 1).fold(0, |a, k| a ^ basis[k]);
                let y = f.eval(x ^ d.epsilon);
                let p = project(d.beta, d.gamma, y).unwrap();
                assert!(!dot(d.gamma, p));
                // coordinates w.r.t. {e_j + <γ,e_j> e_gi : j != gi}
                (0..n as u32).filter(|&j| j != gi).enumerate().fold(0, |a, (k, j)| {
                    a | ((p >> j & 1) << k)
                })
            })
            .collect()
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(0b01, 0b01, 0b11).unwrap(), 0b10);
        assert_eq!(project(0b101, 0b001, 0b101).unwrap(), 0);
        assert_eq!(project(0b11, 0b01, 0b10).unwrap(), 0b10);
        assert!(project(0b10, 0b01, 1).is_err());
    }

    #[test]
    fn hyperplane_points_cover_alpha_perp() {
        for alpha in 1..32u32 {
            let pts: BTreeSet<u32> = (0..16).map(|c| hyperplane_point(alpha, c)).collect();
            assert_eq!(pts.len(), 16);
            assert!(pts.iter().all(|&x| !dot(alpha, x)));
        }
    }

    #[test]
    fn trim_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Vbf::from_fn(5, 5, |_| rng.gen()).unwrap();
        for alpha in 1..32 {
            for beta in [1u32, 6, 19, 31] {
                for side in [Side::Linear, Side::Affine] {
                    let mut d = TrimDescriptor::canonical(side, alpha, beta);
                    assert_eq!(trim(&f, &d).unwrap().table(), trim_oracle(&f, &d));
                    d.gamma = (0..32).rev().find(|&g| dot(beta, g)).unwrap();
                    assert_eq!(trim(&f, &d).unwrap().table(), trim_oracle(&f, &d));
                }
            }
        }
    }

    #[test]
    fn invalid_descriptors_are_rejected() {
        let f = cube(4);
        let bad = [
            TrimDescriptor { alpha: 0, side: Side::Linear, beta: 1, epsilon: 0, gamma: 1 },
            TrimDescriptor { alpha: 1, side: Side::Linear, beta: 1, epsilon: 1, gamma: 1 },
            TrimDescriptor { alpha: 1, side: Side::Affine, beta: 1, epsilon: 2, gamma: 1 },
            TrimDescriptor { alpha: 1, side: Side::Linear, beta: 1, epsilon: 0, gamma: 2 },
            TrimDescriptor { alpha: 16, side: Side::Linear, beta: 1, epsilon: 0, gamma: 1 },
        ];
        for d in bad {
            assert!(trim(&f, &d).is_err(), "{d}");
        }
    }

    #[test]
    fn trims_of_linear_maps_are_affine_and_degree_does_not_grow() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let lin = Vbf::from_fn(5, 5, |x| x.rotate_left(2) & 31 ^ (x >> 1)).unwrap();
        let quad = cube(5);
        for _ in 0..50 {
            let alpha = rng.gen_range(1..32);
            let beta = rng.gen_range(1..32);
            let side = if rng.gen() { Side::Linear } else { Side::Affine };
            let d = TrimDescriptor::canonical(side, alpha, beta);
            assert!(trim(&lin, &d).unwrap().degree() <= 1);
            assert!(trim(&quad, &d).unwrap().degree() <= 2);
        }
    }

    #[test]
    fn spectrum_totals() {
        let f = cube(4);
        let s = trim_spectrum(&f, false, Exec::Parallel).unwrap();
        assert_eq!(s.total(), 2 * 15 * 15);
        let r = trim_spectrum(&f, true, Exec::Sequential).unwrap();
        assert_eq!(r.total(), 15 * 15);
        let inv = Vbf::from_univariate(&FieldSpec::standard(4).unwrap(), &[(1, 14)]).unwrap();
        assert!(trim_spectrum(&inv, true, Exec::Sequential).is_err());
        assert_eq!(s, trim_spectrum(&f, false, Exec::Sequential).unwrap());
    }

    #[test]
    fn apn_trims_agree_with_brute_force() {
        let f = cube(5);
        let found = apn_trims(&f, Exec::Parallel).unwrap();
        let mut oracle: BTreeMap<InvariantSignature, u64> = BTreeMap::new();
        for alpha in 1..32 {
            for side in [Side::Linear, Side::Affine] {
                for beta in 1..32 {
                    let t = trim(&f, &TrimDescriptor::canonical(side, alpha, beta)).unwrap();
                    if t.is_apn().unwrap() {
                        *oracle.entry(InvariantSignature::of(&t).unwrap()).or_insert(0) += 1;
                    }
                }
            }
        }
        assert_eq!(found.len(), oracle.len());
        for a in &found {
            assert_eq!(oracle[&a.signature], a.count);
            assert_eq!(trim(&f, &a.witness).unwrap(), a.function);
        }
    }

    #[test]
    fn recursive_witness_on_small_inputs() {
        // every APN function on 3 bits: a chain exists iff some trim is APN
        let f = cube(3);
        let chain = recursive_witness(&f).unwrap();
        let brute = !apn_trims(&f, Exec::Sequential).unwrap().is_empty();
        assert_eq!(chain.is_some(), brute);
        if let Some(chain) = chain {
            assert_eq!(chain.len(), 2);
            assert_eq!(chain[1].function.n(), 2);
        }
        assert!(recursive_witness(&Vbf::identity(4).unwrap()).is_err());
    }
}
