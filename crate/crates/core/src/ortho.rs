//! Ortho-derivatives of quadratic APN functions and the invariant signature
//! used as an EA-equivalence fingerprint.

use std::fmt;
use std::hash::Hasher;
use std::str::FromStr;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::gf2::{orthogonal_complement, WordBasis};
use crate::vbf::{Spectrum, Vbf};

/// Which inner product the ortho-derivative is orthogonal with respect to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pairing {
    /// `<x, y>` = parity of `x & y`.
    Bitwise,
    /// `<x, y>` = `Tr(xy)` in the given field.
    Trace(FieldSpec),
}

fn ortho_value(g: &Vbf, alpha: u32) -> Result<u32> {
    let n = g.n();
    let t = g.table();
    let a = alpha as usize;
    let c = t[a] ^ t[0];
    let images: Vec<u32> = (0..n).map(|i| t[1 << i] ^ t[(1 << i) ^ a] ^ c).collect();
    match orthogonal_complement(&images, n).as_slice() {
        [v] => Ok(*v),
        _ => Err(Error::NotApn),
    }
}

/// `π_G` under the bitwise pairing: `π(0) = 0` and, for `α != 0`, the
/// nonzero vector orthogonal to the image of `B_α`.
pub fn ortho_derivative_bitwise(g: &Vbf) -> Result<Vbf> {
    if g.n() != g.m() {
        return Err(Error::NotSquare { n: g.n(), m: g.m() });
    }
    let degree = g.degree();
    if degree > 2 {
        return Err(Error::NotQuadratic(degree));
    }
    let mut table = vec![0u32; 1 << g.n()];
    for alpha in 1..1u32 << g.n() {
        table[alpha as usize] = ortho_value(g, alpha)?;
    }
    Vbf::new(g.n(), g.n(), table)
}

/// `π_G` under the chosen pairing.
pub fn ortho_derivative(g: &Vbf, pairing: &Pairing) -> Result<Vbf> {
    let bitwise = ortho_derivative_bitwise(g)?;
    match pairing {
        Pairing::Bitwise => Ok(bitwise),
        Pairing::Trace(field) => {
            if field.n() != g.n() {
                return Err(Error::WidthMismatch { left: field.n(), right: g.n() });
            }
            // Tr(p y) = <dual(p), y>, so p = dual^{-1}(π_bitwise)
            let mut inverse = vec![0u32; 1 << g.n()];
            for p in 0..1u32 << g.n() {
                inverse[field.trace_dual(p) as usize] = p;
            }
            Vbf::from_fn(g.n(), g.n(), |x| inverse[bitwise.eval(x) as usize])
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Closed form `x -> x^{-(2^i+1)}` of the ortho-derivative of the Gold
/// function `x^{2^i+1}` under the trace pairing.
pub fn gold_ortho(field: &FieldSpec, i: usize) -> Result<Vbf> {
    let n = field.n();
    if n.is_multiple_of(2) || gcd(i, n) != 1 {
        return Err(Error::NotApn);
    }
    let e = (1u64 << i) + 1;
    Vbf::from_fn(n, n, |x| field.pow(field.inv(x), e))
}

/// A value `v` and an `(n-1)`-dimensional subspace `V` with `π = v` on
/// `V \ {0}`, if one exists.
pub fn constant_hyperplane(pi: &Vbf) -> Option<(u32, Vec<u32>)> {
    let n = pi.n();
    if n < 2 {
        return None;
    }
    let mut levels: std::collections::BTreeMap<u32, Vec<u32>> = Default::default();
    for x in 1..1u32 << n {
        levels.entry(pi.eval(x)).or_default().push(x);
    }
    let target = (1usize << (n - 1)) - 1;
    for (value, members) in levels {
        if members.len() < target {
            continue;
        }
        // any (n-1)-dimensional subspace inside the level set is spanned by
        // members; test each candidate hyperplane α^⊥ directly
        for alpha in 1..1u32 << n {
            let inside = members
                .iter()
                .filter(|&&x| !crate::gf2::dot(alpha, x))
                .count();
            if inside == target {
                let mut basis = WordBasis::new();
                for &x in &members {
                    if !crate::gf2::dot(alpha, x) {
                        basis.insert(x);
                    }
                }
                return Some((value, basis.vectors().to_vec()));
            }
        }
    }
    None
}

/// Canonical EA-invariant fingerprint of a square function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InvariantSignature {
    pub degree: u32,
    pub apn: bool,
    pub ds: Spectrum,
    pub ews: Spectrum,
    /// Differential and extended Walsh spectra of the ortho-derivative;
    /// present exactly for quadratic APN functions.
    pub ortho: Option<(Spectrum, Spectrum)>,
}

impl InvariantSignature {
    pub fn of(f: &Vbf) -> Result<Self> {
        if f.n() != f.m() {
            return Err(Error::NotSquare { n: f.n(), m: f.m() });
        }
        let degree = f.degree();
        let ds = f.differential_spectrum();
        let apn = ds.max_value().unwrap_or(0) <= 2;
        let ews = f.extended_walsh_spectrum();
        let ortho = if apn && degree <= 2 {
            let pi = ortho_derivative_bitwise(f)?;
            Some((pi.differential_spectrum(), pi.extended_walsh_spectrum()))
        } else {
            None
        };
        Ok(InvariantSignature { degree, apn, ds, ews, ortho })
    }

    /// 64-bit FNV-1a hash of the canonical text.
    pub fn hash64(&self) -> u64 {
        let mut h = FnvHasher::default();
        h.write(self.to_string().as_bytes());
        h.finish()
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.hash64())
    }
}

impl fmt::Display for InvariantSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sig{{deg={};apn={};ds={};ews={};", self.degree, self.apn, self.ds, self.ews)?;
        match &self.ortho {
            Some((ods, oews)) => write!(f, "ods={ods};oews={oews}}}"),
            None => write!(f, "ods=none;oews=none}}"),
        }
    }
}

fn parse_spectrum(s: &str) -> Option<Spectrum> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    if inner.is_empty() {
        return Some(Spectrum::default());
    }
    let mut pairs = Vec::new();
    for item in inner.split("),(") {
        let item = item.trim_start_matches('(').trim_end_matches(')');
        let (v, c) = item.split_once(',')?;
        pairs.push((v.parse().ok()?, c.parse().ok()?));
    }
    Some(Spectrum::from_pairs(pairs))
}

impl FromStr for InvariantSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("malformed signature text: {s}"));
        let body = s.strip_prefix("sig{").and_then(|b| b.strip_suffix('}')).ok_or_else(bad)?;
        let mut fields = std::collections::HashMap::new();
        for part in body.split(';') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(bad);
        let degree = get("deg")?.parse().map_err(|_| bad())?;
        let apn = get("apn")?.parse().map_err(|_| bad())?;
        let ds = parse_spectrum(get("ds")?).ok_or_else(bad)?;
        let ews = parse_spectrum(get("ews")?).ok_or_else(bad)?;
        let ortho = match (get("ods")?, get("oews")?) {
            ("none", "none") => None,
            (a, b) => Some((
                parse_spectrum(a).ok_or_else(bad)?,
                parse_spectrum(b).ok_or_else(bad)?,
            )),
        };
        let sig = InvariantSignature { degree, apn, ds, ews, ortho };
        if sig.to_string() != s {
            return Err(bad());
        }
        Ok(sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::dot;

    fn gold(n: usize, i: usize) -> (FieldSpec, Vbf) {
        let f = FieldSpec::standard(n).unwrap();
        let g = Vbf::from_univariate(&f, &[(1, (1 << i) + 1)]).unwrap();
        (f, g)
    }

    #[test]
    fn cube_ortho_under_trace_pairing_is_inverse_cube() {
        for n in [3, 5, 7] {
            let (field, g) = gold(n, 1);
            let pi = ortho_derivative(&g, &Pairing::Trace(field.clone())).unwrap();
            assert_eq!(pi.eval(0), 0);
            for x in 1..1u32 << n {
                assert_eq!(pi.eval(x), field.inv(field.pow(x, 3)));
            }
            assert_eq!(pi, gold_ortho(&field, 1).unwrap());
        }
        let (field, _) = gold(3, 1);
        let pi = gold_ortho(&field, 1).unwrap();
        for x in 1..8 {
            assert_eq!(pi.eval(x), field.pow(x, 4));
        }
    }

    #[test]
    fn gold_ortho_values() {
        let field = FieldSpec::standard(7).unwrap();
        let pi = gold_ortho(&field, 1).unwrap();
        assert_eq!(pi.eval(field.generator()), field.gen_pow(124));
        assert_eq!(pi.eval(0), 0);
        assert!(gold_ortho(&FieldSpec::standard(6).unwrap(), 1).is_err());
        assert!(gold_ortho(&FieldSpec::standard(9).unwrap(), 3).is_err());
    }

    #[test]
    fn defining_identity_holds() {
        for (n, i) in [(5, 2), (7, 3), (6, 1)] {
            let (_, g) = gold(n, i);
            let pi = ortho_derivative_bitwise(&g).unwrap();
            for alpha in 1..1u32 << n {
                let pa = pi.eval(alpha);
                assert_ne!(pa, 0);
                let b = g.derivative_map(alpha);
                assert!(b.map.table().iter().all(|&y| !dot(pa, y)));
            }
        }
    }

    #[test]
    fn rejects_non_quadratic_or_non_apn() {
        let field = FieldSpec::standard(5).unwrap();
        let inv = Vbf::from_univariate(&field, &[(1, 30)]).unwrap();
        assert!(matches!(ortho_derivative_bitwise(&inv), Err(Error::NotQuadratic(4))));
        let x5 = Vbf::from_univariate(&field, &[(1, 5)]).unwrap();
        assert!(ortho_derivative_bitwise(&x5).is_ok());
        let x9 = Vbf::from_univariate(&FieldSpec::standard(6).unwrap(), &[(1, 9)]).unwrap();
        assert!(matches!(ortho_derivative_bitwise(&x9), Err(Error::NotApn)));
    }

    #[test]
    fn signatures_separate_linearity_classes_and_round_trip() {
        let (_, x3) = gold(6, 1);
        let t6 = crate::catalog::fixtures::t6().unwrap();
        let s3 = InvariantSignature::of(&x3).unwrap();
        let s6 = InvariantSignature::of(&t6).unwrap();
        assert!(s3.apn && s3.degree == 2 && s3.ortho.is_some());
        assert_ne!(s3, s6);
        // x^3 and x^5 on 5 bits are inequivalent but both almost bent, so
        // every spectrum in the signature agrees.
        assert_eq!(InvariantSignature::of(&gold(5, 1).1).unwrap(), InvariantSignature::of(&gold(5, 2).1).unwrap());
        let text = s3.to_string();
        assert!(text.starts_with("sig{deg=2;apn=true;ds=[(0,"));
        assert_eq!(text.parse::<InvariantSignature>().unwrap(), s3);
        let id = InvariantSignature::of(&Vbf::identity(3).unwrap()).unwrap();
        assert!(id.to_string().ends_with("ods=none;oews=none}"));
        assert_eq!(id.to_string().parse::<InvariantSignature>().unwrap(), id);
        assert!("sig{deg=2}".parse::<InvariantSignature>().is_err());
    }
}
