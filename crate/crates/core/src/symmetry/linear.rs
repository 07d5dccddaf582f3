//! Permutations of RM coordinates induced by affine maps x ↦ Tx + t of
//! GF(2)^n, using the point enumeration of the RM construction.

use super::Permutation;
use crate::codebook::{rm_point, rm_position};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// An invertible n×n binary matrix stored by the images of the unit vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    n: usize,
    /// `cols[b]` = T e_b as a bitmask.
    cols: Vec<u32>,
}

impl LinearMap {
    pub fn from_matrix(t: &BitMatrix) -> Result<Self> {
        let n = t.rows();
        if t.cols() != n || n == 0 || n > 16 {
            return Err(Error::InvalidArgument(format!(
                "need a square matrix of size 1..=16, got {}x{}",
                t.rows(),
                t.cols()
            )));
        }
        if t.rank() != n {
            return Err(Error::InvalidArgument("matrix is singular".into()));
        }
        let cols = (0..n)
            .map(|b| {
                (0..n)
                    .filter(|&r| t.get(r, b))
                    .fold(0u32, |acc, r| acc | 1 << r)
            })
            .collect();
        Ok(LinearMap { n, cols })
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let rows = (0..self.n)
            .map(|r| {
                BitVec::from_positions(self.n, (0..self.n).filter(|&b| self.cols[b] >> r & 1 == 1))
            })
            .collect();
        BitMatrix::from_rows(self.n, rows)
    }

    pub fn apply(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut rest = x;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc ^= self.cols[b];
        }
        acc
    }

    /// An invertible map with T(u) = w (both nonzero), built by completing
    /// u and w to bases with unit vectors, lowest index first.
    pub fn sending(n: usize, u: u32, w: u32) -> Result<Self> {
        if u == 0 || w == 0 || u >> n != 0 || w >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "need nonzero vectors of {n} bits"
            )));
        }
        let bu = complete_basis(n, u);
        let bw = complete_basis(n, w);
        let cols = (0..n)
            .map(|b| {
                let coords = coordinates(&bu, 1 << b);
                (0..n)
                    .filter(|&t| coords >> t & 1 == 1)
                    .fold(0u32, |acc, t| acc ^ bw[t])
            })
            .collect();
        Ok(LinearMap { n, cols })
    }
}

fn complete_basis(n: usize, first: u32) -> Vec<u32> {
    let mut basis = vec![first];
    for b in 0..n {
        if basis.len() == n {
            break;
        }
        let cand = 1u32 << b;
        let mut trial = basis.clone();
        trial.push(cand);
        if rank_u32(&trial) == trial.len() {
            basis.push(cand);
        }
    }
    basis
}

fn rank_u32(vs: &[u32]) -> usize {
    let mut rows: Vec<u32> = Vec::new();
    for &v in vs {
        let mut x = v;
        for &r in &rows {
            x = x.min(x ^ r);
        }
        if x != 0 {
            rows.push(x);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    rows.len()
}

/// Coefficients (as a bitmask over basis indices) expressing `x` in `basis`.
fn coordinates(basis: &[u32], x: u32) -> u32 {
    let n = basis.len();
    // eliminate on pairs (vector, tag)
    let mut rows: Vec<(u32, u32)> = basis.iter().enumerate().map(|(t, &v)| (v, 1 << t)).collect();
    let mut pivots = Vec::new();
    for col in (0..32).rev() {
        let Some(pos) = (pivots.len()..n).find(|&r| rows[r].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(pivots.len(), pos);
        let p = pivots.len();
        for r in 0..n {
            if r != p && rows[r].0 >> col & 1 == 1 {
                rows[r].0 ^= rows[p].0;
                rows[r].1 ^= rows[p].1;
            }
        }
        pivots.push(col);
    }
    let mut acc = 0;
    let mut rest = x;
    for (p, &col) in pivots.iter().enumerate() {
        if rest >> col & 1 == 1 {
            rest ^= rows[p].0;
            acc ^= rows[p].1;
        }
    }
    debug_assert_eq!(rest, 0, "basis spans the space");
    acc
}

/// Permutation of the length-2^n RM positions under x ↦ T(x + a) + b.
fn affine_rm_perm(n: usize, t: &LinearMap, a: u32, b: u32) -> Permutation {
    let len = 1usize << n;
    Permutation::from_image_unchecked(
        (0..len)
            .map(|p| rm_position(n, t.apply(rm_point(n, p) ^ a) ^ b))
            .collect(),
    )
}

/// The map x ↦ x + e_i + e_j on RM positions, sending i to j.
pub fn rm_translation(n: usize, i: usize, j: usize) -> Result<Permutation> {
    let len = 1usize << n;
    if i >= len || j >= len {
        return Err(Error::InvalidArgument(format!("positions must be below {len}")));
    }
    let id = LinearMap {
        n,
        cols: (0..n).map(|b| 1 << b).collect(),
    };
    let shift = rm_point(n, i) ^ rm_point(n, j);
    Ok(affine_rm_perm(n, &id, shift, 0))
}

/// A permutation fixing `i` and sending `j` to `k` that preserves every
/// RM(v, n): ℓ ↦ ℓ′ with e_ℓ′ = T(e_ℓ + e_i) + e_i and T(e_j + e_i) = e_k + e_i.
pub fn rm_doubly_transitive_witness(n: usize, i: usize, j: usize, k: usize) -> Result<Permutation> {
    rm_witness_with_map(n, i, j, k).map(|(p, _)| p)
}

pub(crate) fn rm_witness_with_map(
    n: usize,
    i: usize,
    j: usize,
    k: usize,
) -> Result<(Permutation, LinearMap)> {
    let len = 1usize << n;
    if i == j || j == k || i == k || i >= len || j >= len || k >= len {
        return Err(Error::InvalidArgument(format!(
            "need distinct positions below {len}, got {i}, {j}, {k}"
        )));
    }
    let (ei, ej, ek) = (rm_point(n, i), rm_point(n, j), rm_point(n, k));
    let t = LinearMap::sending(n, ej ^ ei, ek ^ ei)?;
    Ok((affine_rm_perm(n, &t, ei, ei), t))
}

/// The permutation x ↦ Tx of the N-1 nonzero points, indexed by position.
pub fn gl_action_on_omega(n: usize, t: &BitMatrix) -> Result<Permutation> {
    if t.rows() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix must be {n}x{n}, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    let map = LinearMap::from_matrix(t)?;
    let len = (1usize << n) - 1;
    Ok(Permutation::from_image_unchecked(
        (0..len)
            .map(|p| rm_position(n, map.apply(rm_point(n, p))))
            .collect(),
    ))
}

/// An invertible T with T e_i = e_j for nonzero points at positions i, j.
pub fn gl_transitivity_matrix(n: usize, i: usize, j: usize) -> Result<BitMatrix> {
    let last = (1usize << n) - 1;
    if i >= last || j >= last {
        return Err(Error::InvalidArgument(format!(
            "positions must index nonzero points (below {last})"
        )));
    }
    Ok(LinearMap::sending(n, rm_point(n, i), rm_point(n, j))?.to_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::rm_code;
    use crate::erasure::{CoverageOracle, ErasurePattern};
    use crate::symmetry::apply_perm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> BitMatrix {
        loop {
            let rows = (0..n)
                .map(|_| BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<_>>()))
                .collect();
            let m = BitMatrix::from_rows(n, rows);
            if m.rank() == n {
                return m;
            }
        }
    }

    #[test]
    fn sending_maps_u_to_w() {
        for n in 1..=6 {
            for u in 1u32..1 << n {
                for w in [1u32, (1 << n) - 1, u] {
                    let t = LinearMap::sending(n, u, w).unwrap();
                    assert_eq!(t.apply(u), w);
                    assert_eq!(t.to_matrix().rank(), n);
                    assert_eq!(LinearMap::from_matrix(&t.to_matrix()).unwrap(), t);
                }
            }
        }
        assert!(LinearMap::sending(3, 0, 1).is_err());
    }

    #[test]
    fn rm_witnesses_preserve_codes() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let codes: Vec<_> = (0..3).map(|v| rm_code(v, 3).unwrap()).collect();
        for _ in 0..20 {
            let i = rng.gen_range(0..8);
            let j = (i + rng.gen_range(1..8)) % 8;
            let k = loop {
                let k = rng.gen_range(0..8);
                if k != i && k != j {
                    break k;
                }
            };
            let p = rm_doubly_transitive_witness(3, i, j, k).unwrap();
            assert_eq!((p.apply(i), p.apply(j)), (i, k));
            for c in &codes {
                assert!(apply_perm(&p, c).unwrap());
            }
        }
        // origin fixed: the translation part vanishes
        let p = rm_doubly_transitive_witness(4, 15, 0, 9).unwrap();
        assert_eq!(p.apply(15), 15);
        assert!(rm_doubly_transitive_witness(3, 1, 1, 2).is_err());
    }

    #[test]
    fn translations_are_automorphisms() {
        let c = rm_code(2, 4).unwrap();
        for j in 0..16 {
            let p = rm_translation(4, 3, j).unwrap();
            assert_eq!(p.apply(3), j);
            assert!(apply_perm(&p, &c).unwrap());
        }
    }

    #[test]
    fn gl_action_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let id = gl_action_on_omega(4, &BitMatrix::identity(4)).unwrap();
        assert!(id.is_identity());
        for _ in 0..30 {
            let a = random_invertible(4, &mut rng);
            let b = random_invertible(4, &mut rng);
            let lhs = gl_action_on_omega(4, &a)
                .unwrap()
                .compose(&gl_action_on_omega(4, &b).unwrap());
            assert_eq!(lhs, gl_action_on_omega(4, &a.mul(&b)).unwrap());
        }
        let singular = BitMatrix::parse_rows(&["1100", "1100", "0010", "0001"]).unwrap();
        assert!(gl_action_on_omega(4, &singular).is_err());
    }

    #[test]
    fn gl_action_is_transitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let (i, j) = (rng.gen_range(0..15), rng.gen_range(0..15));
            let t = gl_transitivity_matrix(4, i, j).unwrap();
            assert_eq!(gl_action_on_omega(4, &t).unwrap().apply(i), j);
        }
    }

    #[test]
    fn gl_action_preserves_omega_of_origin() {
        let c = rm_code(1, 4).unwrap();
        let oracle = CoverageOracle::new(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..3 {
            let t = random_invertible(4, &mut rng);
            let pi = gl_action_on_omega(4, &t).unwrap().extend_fixing_last();
            assert!(apply_perm(&pi, &c).unwrap());
            for a in 0u64..1 << 15 {
                let pat = ErasurePattern::from_mask(16, a);
                let img = ErasurePattern::new(pi.apply_set(pat.erased()));
                assert_eq!(
                    oracle.in_omega(&pat, 15).unwrap(),
                    oracle.in_omega(&img, 15).unwrap()
                );
            }
        }
    }
}
