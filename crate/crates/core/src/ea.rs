//! Random EA transformations and random quadratic functions, used to test
//! invariance properties and to drive sampling experiments.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::GF2Matrix;
use crate::vbf::Vbf;

/// Uniformly random invertible `n x n` matrix (rejection sampling).
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GF2Matrix {
    loop {
        let m = random_matrix(n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> GF2Matrix {
    let mask = ((1u64 << rows) - 1) as u32;
    let columns: Vec<u32> = (0..cols).map(|_| rng.gen::<u32>() & mask).collect();
    GF2Matrix::from_columns(rows, &columns)
}

/// `F'(x) = B(F(A x + a)) + b + C x` with `A`, `B` invertible.
#[derive(Debug, Clone)]
pub struct EaTransform {
    pub a: GF2Matrix,
    pub a_shift: u32,
    pub b: GF2Matrix,
    pub b_shift: u32,
    pub c: GF2Matrix,
}

impl EaTransform {
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Self {
        EaTransform {
            a: random_invertible(n, rng),
            a_shift: rng.gen::<u32>() & ((1u64 << n) - 1) as u32,
            b: random_invertible(m, rng),
            b_shift: rng.gen::<u32>() & ((1u64 << m) - 1) as u32,
            c: random_matrix(m, n, rng),
        }
    }

    /// Only the affine-equivalence part (`C = 0`).
    pub fn random_affine<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Self {
        let mut t = Self::random(n, m, rng);
        t.c = GF2Matrix::zero(m, n);
        t
    }

    pub fn apply(&self, f: &Vbf) -> Result<Vbf> {
        if self.a.cols() != f.n() || self.b.cols() != f.m() || self.c.cols() != f.n() {
            return Err(Error::WidthMismatch { left: self.a.cols(), right: f.n() });
        }
        Vbf::from_fn(f.n(), f.m(), |x| {
            let inner = self.a.apply_word(x) ^ self.a_shift;
            self.b.apply_word(f.eval(inner)) ^ self.b_shift ^ self.c.apply_word(x)
        })
    }
}

/// Random function of degree at most two: uniform coefficients on every
/// monomial of weight one and two, plus a random constant.
pub fn random_quadratic<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Vbf> {
    let mask = ((1u64 << m) - 1) as u32;
    let mut anf = vec![0u32; 1 << n];
    anf[0] = rng.gen::<u32>() & mask;
    for i in 0..n {
        anf[1 << i] = rng.gen::<u32>() & mask;
        for j in i + 1..n {
            anf[(1 << i) | (1 << j)] = rng.gen::<u32>() & mask;
        }
    }
    crate::vbf::moebius(&mut anf);
    Vbf::new(n, m, anf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::ortho::InvariantSignature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ea_transforms_preserve_signatures() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let field = FieldSpec::standard(5).unwrap();
        let f = Vbf::from_univariate(&field, &[(1, 3)]).unwrap();
        let sig = InvariantSignature::of(&f).unwrap();
        for _ in 0..10 {
            let t = EaTransform::random(5, 5, &mut rng);
            let g = t.apply(&f).unwrap();
            assert_ne!(g, f);
            assert_eq!(InvariantSignature::of(&g).unwrap(), sig);
        }
    }

    #[test]
    fn random_quadratics_have_degree_at_most_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=8 {
            assert!(random_quadratic(n, n, &mut rng).unwrap().degree() <= 2);
        }
        assert_eq!(random_invertible(7, &mut rng).rank(), 7);
    }
}
