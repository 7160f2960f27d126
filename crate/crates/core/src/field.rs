//! Binary extension fields `F_{2^n}` for `n <= 16`.
//!
//! Elements are words whose bit `i` is the coefficient of `X^i` in the
//! polynomial basis, so field elements and `F_2^n` vectors share one
//! encoding.

use crate::error::{Error, Result};
use crate::gf2::{dot, MAX_DIM};

/// Primitive polynomials used when a fixture or command does not name one.
const DEFAULT_MODULI: [u32; MAX_DIM + 1] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443,
    0x8003, 0x1100b,
];

/// Carry-less product of two polynomials of degree < 32.
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let mut a = u64::from(a);
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn poly_degree(p: u64) -> Option<u32> {
    (p != 0).then(|| 63 - p.leading_zeros())
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m).expect("nonzero modulus");
    while let Some(da) = poly_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Irreducibility over `F_2` by trial division with every polynomial of
/// degree at most `deg/2`.
pub fn is_irreducible(poly: u32) -> bool {
    let Some(deg) = poly_degree(poly.into()) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for low in 0u64..1 << d {
            let divisor = (1u64 << d) | low;
            if poly_rem(poly.into(), divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// `F_{2^n}` described by its modulus. The distinguished generator is the
/// class of `X`; for a primitive modulus it generates the multiplicative
/// group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    n: usize,
    modulus: u32,
    generator: u32,
}

impl FieldSpec {
    pub fn new(n: usize, modulus: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if poly_degree(modulus.into()) != Some(n as u32) || !is_irreducible(modulus) {
            return Err(Error::InvalidModulus(modulus));
        }
        let generator = poly_rem(2, modulus.into()) as u32;
        Ok(FieldSpec { n, modulus, generator })
    }

    /// Field with the built-in primitive modulus of degree `n`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        Self::new(n, DEFAULT_MODULI[n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn order(&self) -> u64 {
        1 << self.n
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        poly_rem(clmul(a, b), self.modulus.into()) as u32
    }

    pub fn square(&self, a: u32) -> u32 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `0` maps to `0`.
    pub fn inv(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.pow(a, self.order() - 2)
        }
    }

    /// `g^k` for the distinguished generator.
    pub fn gen_pow(&self, k: u64) -> u32 {
        self.pow(self.generator, k)
    }

    /// Absolute trace `x + x^2 + ... + x^(2^(n-1))`.
    pub fn trace(&self, x: u32) -> bool {
        let mut acc = 0;
        let mut t = x;
        for _ in 0..self.n {
            acc ^= t;
            t = self.square(t);
        }
        debug_assert!(acc <= 1);
        acc == 1
    }

    /// The vector `t` with `Tr(x) = <t, x>` for every `x`.
    pub fn trace_vector(&self) -> u32 {
        (0..self.n).fold(0, |acc, j| acc | (u32::from(self.trace(1 << j)) << j))
    }

    /// The vector `w` with `Tr(p * x) = <w, x>` for every `x`. This is the
    /// bijection translating the trace pairing into the bitwise one.
    pub fn trace_dual(&self, p: u32) -> u32 {
        (0..self.n).fold(0, |acc, j| acc | (u32::from(self.trace(self.mul(p, 1 << j))) << j))
    }

    /// The trace pairing `Tr(x * y)`.
    pub fn trace_pairing(&self, x: u32, y: u32) -> bool {
        dot(self.trace_dual(x), y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f8() -> FieldSpec {
        FieldSpec::new(3, 0b1011).unwrap()
    }

    #[test]
    fn identities() {
        let f = FieldSpec::standard(7).unwrap();
        for a in 0..128 {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
        }
    }

    #[test]
    fn cube_of_generator_in_f8() {
        let f = f8();
        let g = f.generator();
        assert_eq!(g, 2);
        assert_eq!(f.mul(g, f.mul(g, g)), 0b011);
        // log-table oracle built by repeated multiplication
        let mut logs = [0u32; 8];
        let mut x = 1;
        for slot in logs.iter_mut().take(7) {
            *slot = x;
            x = f.mul(x, g);
        }
        assert_eq!(logs[3], 0b011);
        assert_eq!(x, 1);
    }

    #[test]
    fn trace_examples() {
        let f = f8();
        assert!(!f.trace(0));
        assert!(f.trace(1));
        for n in 1..=10 {
            let f = FieldSpec::standard(n).unwrap();
            let ones = (0..1u32 << n).filter(|&x| f.trace(x)).count();
            assert_eq!(ones, 1 << (n - 1));
        }
    }

    #[test]
    fn frobenius_invariance_of_trace() {
        for n in 1..=8 {
            let f = FieldSpec::standard(n).unwrap();
            for x in 0..1u32 << n {
                assert_eq!(f.trace(f.square(x)), f.trace(x));
            }
        }
    }

    #[test]
    fn small_fields_are_commutative_rings_with_cyclic_units() {
        for n in 1..=4 {
            let f = FieldSpec::standard(n).unwrap();
            let q = 1u32 << n;
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, f.generator());
            }
            assert_eq!(seen.len() as u32, q - 1);
        }
    }

    #[test]
    fn default_moduli_are_primitive() {
        for n in 2..=16 {
            let f = FieldSpec::standard(n).unwrap();
            let order = (1u64 << n) - 1;
            assert_eq!(f.gen_pow(order), 1);
            // primitive iff g^(order/p) != 1 for each prime p | order
            let mut m = order;
            let mut p = 2;
            while m > 1 {
                if m.is_multiple_of(p) {
                    assert_ne!(f.gen_pow(order / p), 1, "n={n} p={p}");
                    while m.is_multiple_of(p) {
                        m /= p;
                    }
                }
                p += 1;
            }
        }
    }

    #[test]
    fn rejects_reducible_or_wrong_degree_moduli() {
        assert!(FieldSpec::new(3, 0b1001).is_err()); // X^3+1 = (X+1)(X^2+X+1)
        assert!(FieldSpec::new(4, 0b1011).is_err());
        assert!(FieldSpec::new(17, 0x20009).is_err());
        assert!(FieldSpec::new(6, 0x5b).is_ok());
    }

    #[test]
    fn inverse_and_trace_dual() {
        let f = FieldSpec::standard(7).unwrap();
        for x in 1..128 {
            assert_eq!(f.mul(x, f.inv(x)), 1);
            for y in [1u32, 5, 77, 127] {
                assert_eq!(f.trace(f.mul(x, y)), dot(f.trace_dual(x), y));
            }
        }
        let t = f.trace_vector();
        for x in 0..128 {
            assert_eq!(f.trace(x), dot(t, x));
        }
    }
}
