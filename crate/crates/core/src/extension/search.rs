//! Randomized backtracking search for `(L, ℓ)` extending a quadratic APN
//! `G` with a fixed quadratic `r`.
//!
//! Write `Ĝ = (G, r)` and `v(x) = (L(x), <ℓ, x>)`, both into `F_2^{n+1}`.
//! For APN `G` the extension is APN iff `v(w) ∉ Im B̂_w` for every `w != 0`,
//! where `B̂_w` is the (linear) derivative of `Ĝ`. Each image has a
//! two-dimensional orthogonal complement, so the test per `w` is two
//! parities. Values `v(e_k)` are assigned in index order; after level `k`
//! the map is known on `span(e_0..e_k)`, i.e. on all `w < 2^{k+1}`, and the
//! newly determined `w` are checked immediately.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::extension::{linear_matrix, ExtensionSpec};
use crate::gf2::{dot, orthogonal_complement, GF2Matrix, GF2Vector};
use crate::ortho::{ortho_derivative_bitwise, InvariantSignature};
use crate::vbf::Vbf;

/// Index of the monomial `x_i x_j` (`i < j`) in lexicographic order.
fn monomial_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn monomials(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Boolean function `x -> Σ x_i x_j` over the monomials set in `anf`.
pub fn quadratic_form(n: usize, anf: u128) -> Vbf {
    let pairs = monomials(n);
    Vbf::from_fn(n, 1, |x| {
        pairs
            .iter()
            .enumerate()
            .filter(|&(k, &(i, j))| anf >> k & 1 == 1 && x >> i & 1 == 1 && x >> j & 1 == 1)
            .count() as u32
            & 1
    })
    .expect("dimension already validated")
}

/// Unit vectors (as monomial bitmasks) spanning a complement of the
/// homogeneous quadratic parts of the coordinates of `G`.
pub fn quadratic_complement(g: &Vbf) -> Vec<u128> {
    let n = g.n();
    let q = n * (n - 1) / 2;
    let anf = g.anf();
    let rows: Vec<GF2Vector> = (0..g.m())
        .map(|t| {
            let mut v = GF2Vector::zero(q);
            for (i, j) in monomials(n) {
                if anf[(1 << i) | (1 << j)] >> t & 1 == 1 {
                    v.set(monomial_index(n, i, j), true);
                }
            }
            v
        })
        .collect();
    let pivots = GF2Matrix::from_rows(q, &rows).expect("row width q").rref().pivots;
    (0..q).filter(|c| !pivots.contains(c)).map(|c| 1u128 << c).collect()
}

/// Uniform homogeneous quadratic `r` from the complement of the span of
/// `G`'s coordinates, as a monomial bitmask.
pub fn sample_r<R: Rng + ?Sized>(g: &Vbf, rng: &mut R) -> u128 {
    quadratic_complement(g)
        .into_iter()
        .filter(|_| rng.gen::<bool>())
        .fold(0, |acc, m| acc | m)
}

/// Resumable position of an interrupted search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    pub g_id: String,
    /// Monomial bitmask of `r`, hexadecimal.
    pub r: String,
    pub mask: u32,
    /// Next candidate index per assigned level, deepest last.
    pub cursor: Vec<u32>,
    pub nodes_visited: u64,
}

/// Outcome of one bounded search run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// `(L, ℓ)` and the extension, if found.
    pub found: Option<(GF2Matrix, u32, Vbf)>,
    pub nodes: u64,
    /// Set when the budget ran out before the space was exhausted.
    pub checkpoint: Option<Vec<u32>>,
}

/// Precomputed search state for one `(G, r)`.
#[derive(Debug, Clone)]
pub struct RSearch {
    n: usize,
    g: Vbf,
    r: Vbf,
    r_anf: u128,
    /// Two vectors spanning `(Im B̂_w)^⊥` per `w`.
    complements: Vec<[u32; 2]>,
}

impl RSearch {
    pub fn new(g: &Vbf, r_anf: u128) -> Result<Self> {
        let n = g.n();
        ortho_derivative_bitwise(g)?;
        if n < 2 || n * (n - 1) / 2 > 128 {
            return Err(Error::UnsupportedDimension(n));
        }
        if n * (n - 1) / 2 < 128 && r_anf >> (n * (n - 1) / 2) != 0 {
            return Err(Error::Usage("r has monomials outside the quadratic space".into()));
        }
        let r = quadratic_form(n, r_anf);
        let ghat: Vec<u32> = (0..1u32 << n).map(|x| g.eval(x) | (r.eval(x) << n)).collect();
        let mut complements = vec![[0u32; 2]; 1 << n];
        for w in 1..1usize << n {
            let c = ghat[w] ^ ghat[0];
            let images: Vec<u32> = (0..n).map(|i| ghat[1 << i] ^ ghat[(1 << i) ^ w] ^ c).collect();
            match orthogonal_complement(&images, n + 1).as_slice() {
                [a, b] => complements[w] = [*a, *b],
                _ => return Err(Error::Invariant("derivative of (G, r) has unexpected rank".into())),
            }
        }
        Ok(RSearch { n, g: g.clone(), r, r_anf, complements })
    }

    pub fn r_anf(&self) -> u128 {
        self.r_anf
    }

    pub fn r(&self) -> &Vbf {
        &self.r
    }

    #[inline]
    fn violates(&self, w: usize, v: u32) -> bool {
        let [a, b] = self.complements[w];
        !dot(a, v) && !dot(b, v)
    }

    fn assemble(&self, v: &[u32]) -> Result<(GF2Matrix, u32, Vbf)> {
        let n = self.n;
        let low = (1u32 << n) - 1;
        let l = linear_matrix(n, |e| v[e as usize] & low);
        let ell = (0..n).fold(0, |acc, k| acc | ((v[1 << k] >> n) << k));
        let t = ExtensionSpec { g: self.g.clone(), r: self.r.clone(), l: l.clone(), ell }.build()?;
        Ok((l, ell, t))
    }

    /// Depth-first search from `cursor` (empty for a fresh start). With
    /// `count_all` every solution is visited and the count returned in
    /// `nodes` of the second element.
    fn walk(
        &self,
        mask: u32,
        cursor: &[u32],
        budget: u64,
        mut on_solution: impl FnMut(&[u32]) -> bool,
    ) -> (u64, Option<Vec<u32>>, bool) {
        let n = self.n;
        let width = 1u32 << (n + 1);
        let mut idx = vec![0u32; n];
        let mut v = vec![0u32; 1 << n];
        let mut level = 0usize;
        // replay an accepted prefix
        if !cursor.is_empty() {
            level = cursor.len() - 1;
            idx[..cursor.len()].copy_from_slice(cursor);
            for (k, &i) in idx.iter().enumerate().take(level) {
                let cand = i ^ mask;
                let half = 1usize << k;
                for w in half..2 * half {
                    v[w] = cand ^ v[w - half];
                }
            }
        }
        let mut nodes = 0u64;
        loop {
            if level == n {
                if on_solution(&v) {
                    return (nodes, None, true);
                }
                level -= 1;
                idx[level] += 1;
                continue;
            }
            if idx[level] == width {
                if level == 0 {
                    return (nodes, None, false);
                }
                idx[level] = 0;
                level -= 1;
                idx[level] += 1;
                continue;
            }
            if nodes == budget {
                return (nodes, Some(idx[..=level].to_vec()), false);
            }
            nodes += 1;
            let cand = idx[level] ^ mask;
            let half = 1usize << level;
            let mut ok = true;
            for w in half..2 * half {
                let value = cand ^ v[w - half];
                if self.violates(w, value) {
                    ok = false;
                    break;
                }
                v[w] = value;
            }
            if ok {
                level += 1;
                if level < n {
                    idx[level] = 0;
                }
            } else {
                idx[level] += 1;
            }
        }
    }

    /// One bounded run; stops at the first extension found.
    pub fn run(&self, mask: u32, budget: u64, resume: Option<&[u32]>) -> Result<RunOutcome> {
        let mask = mask & ((1u32 << (self.n + 1)) - 1);
        let mut hit = None;
        let (nodes, checkpoint, _) = self.walk(mask, resume.unwrap_or(&[]), budget, |v| {
            hit = Some(v.to_vec());
            true
        });
        let found = match hit {
            Some(v) => Some(self.assemble(&v)?),
            None => None,
        };
        Ok(RunOutcome { found, nodes, checkpoint })
    }

    /// Number of `(L, ℓ)` making the extension APN, by exhaustive search.
    pub fn count_solutions(&self) -> u64 {
        let mut count = 0u64;
        self.walk(0, &[], u64::MAX, |_| {
            count += 1;
            false
        });
        count
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: u64,
    /// Node budget per restart.
    pub budget: u64,
    /// Fixed `r` (monomial bitmask); sampled per restart when `None`.
    pub r: Option<u128>,
}

/// Result of one restart.
#[derive(Debug, Clone)]
pub struct RestartResult {
    pub restart: u64,
    pub r: u128,
    pub mask: u32,
    pub nodes: u64,
    pub found: Option<(GF2Matrix, u32, Vbf)>,
    pub checkpoint: Option<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub struct FoundExtension {
    pub restart: u64,
    pub r: u128,
    pub l: GF2Matrix,
    pub ell: u32,
    pub function: Vbf,
    pub signature: InvariantSignature,
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub restarts: Vec<RestartResult>,
    /// Distinct signatures, ordered by the restart that found them first.
    pub found: Vec<FoundExtension>,
    pub total_nodes: u64,
}

/// Collects extensions from concurrent restarts, keeping per signature the
/// one from the lowest restart index.
#[derive(Default)]
struct ResultSink {
    inner: Mutex<BTreeMap<InvariantSignature, FoundExtension>>,
}

impl ResultSink {
    fn offer(&self, e: FoundExtension) {
        let mut map = self.inner.lock().expect("sink lock");
        match map.get(&e.signature) {
            Some(old) if old.restart <= e.restart => {}
            _ => {
                map.insert(e.signature.clone(), e);
            }
        }
    }

    fn into_sorted(self) -> Vec<FoundExtension> {
        let mut v: Vec<FoundExtension> = self.inner.into_inner().expect("sink lock").into_values().collect();
        v.sort_by_key(|e| e.restart);
        v
    }
}

/// Independent restarts, each with its own `r` (unless fixed) and
/// candidate mask drawn from stream `restart` of the seeded generator.
pub fn r_extension_search(g: &Vbf, config: &SearchConfig, exec: Exec) -> Result<SearchReport> {
    let n = g.n();
    ortho_derivative_bitwise(g)?;
    let sink = ResultSink::default();
    let results = exec.map_range(config.restarts as usize, |k| -> Result<RestartResult> {
        let restart = k as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart);
        let r = match config.r {
            Some(r) => r,
            None => sample_r(g, &mut rng),
        };
        let mask = rng.gen_range(0..1u32 << (n + 1));
        let search = RSearch::new(g, r)?;
        let out = search.run(mask, config.budget, None)?;
        if let Some((l, ell, t)) = &out.found {
            if !t.is_apn()? {
                return Err(Error::Invariant("search returned a non-APN extension".into()));
            }
            sink.offer(FoundExtension {
                restart,
                r,
                l: l.clone(),
                ell: *ell,
                function: t.clone(),
                signature: InvariantSignature::of(t)?,
            });
        }
        Ok(RestartResult { restart, r, mask, nodes: out.nodes, found: out.found, checkpoint: out.checkpoint })
    });
    let restarts = results.into_iter().collect::<Result<Vec<_>>>()?;
    let total_nodes = restarts.iter().map(|r| r.nodes).sum();
    Ok(SearchReport { restarts, found: sink.into_sorted(), total_nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{gamma_space, zero_ext_apn_test};
    use crate::field::FieldSpec;

    fn cube(n: usize) -> Vbf {
        Vbf::from_univariate(&FieldSpec::standard(n).unwrap(), &[(1, 3)]).unwrap()
    }

    #[test]
    fn monomial_indexing_is_lexicographic() {
        let n = 5;
        for (k, (i, j)) in monomials(n).into_iter().enumerate() {
            assert_eq!(monomial_index(n, i, j), k);
        }
    }

    #[test]
    fn complement_dimension() {
        let g = cube(5);
        // the five coordinates of x^3 have independent quadratic parts
        assert_eq!(quadratic_complement(&g).len(), 10 - 5);
    }

    #[test]
    fn zero_r_exhaustive_count_matches_gamma_spaces() {
        let g = cube(4);
        let search = RSearch::new(&g, 0).unwrap();
        let count = search.count_solutions();
        let mut expect = 0u64;
        for ell in 1..16 {
            let space = gamma_space(&g, ell).unwrap();
            expect += space.dim().map_or(0, |d| 1 << d);
        }
        // ℓ = 0 requires <π(α), Lα> = 1 for every α != 0
        let pi = ortho_derivative_bitwise(&g).unwrap();
        let all_rows = (1..16u32).collect::<Vec<_>>();
        let mut zero_count = 0u64;
        for l in 0u32..1 << 16 {
            let m = GF2Matrix::from_vector(4, 4, &GF2Vector::from_word(16, l.into())).unwrap();
            if all_rows.iter().all(|&a| dot(pi.eval(a), m.apply_word(a))) {
                zero_count += 1;
            }
        }
        assert_eq!(count, expect + zero_count);
    }

    #[test]
    fn found_extensions_are_apn_and_agree_with_the_criterion() {
        let g = cube(5);
        let search = RSearch::new(&g, 0).unwrap();
        let out = search.run(0b10_1101, 1_000_000, None).unwrap();
        let (l, ell, t) = out.found.expect("cube on 5 bits has zero extensions");
        assert!(t.is_apn().unwrap());
        if ell != 0 {
            assert!(zero_ext_apn_test(&g, &l, ell).unwrap());
        }
    }

    #[test]
    fn checkpoints_resume_to_the_same_answer() {
        let g = cube(5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = sample_r(&g, &mut rng);
        let search = RSearch::new(&g, r).unwrap();
        let full = search.run(17, u64::MAX, None).unwrap();
        let mut cursor: Option<Vec<u32>> = None;
        let mut nodes = 0;
        let resumed = loop {
            let part = search.run(17, 50, cursor.as_deref()).unwrap();
            nodes += part.nodes;
            if part.checkpoint.is_none() {
                break part;
            }
            cursor = part.checkpoint;
        };
        assert_eq!(nodes, full.nodes);
        assert_eq!(resumed.found.map(|f| f.2), full.found.map(|f| f.2));
    }

    #[test]
    fn restarts_are_deterministic_across_strategies() {
        let g = cube(5);
        let config = SearchConfig { seed: 1, restarts: 4, budget: 20_000, r: None };
        let a = r_extension_search(&g, &config, Exec::Sequential).unwrap();
        let b = r_extension_search(&g, &config, Exec::Parallel).unwrap();
        let sigs = |r: &SearchReport| r.found.iter().map(|f| (f.restart, f.signature.clone())).collect::<Vec<_>>();
        assert_eq!(sigs(&a), sigs(&b));
        assert_eq!(a.total_nodes, b.total_nodes);
    }
}
