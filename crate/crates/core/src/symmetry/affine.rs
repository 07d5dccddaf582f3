use super::Permutation;
use crate::error::{Error, Result};
use crate::gf2::Gf2mField;

/// The position labelling Θ of a length-2^n code by elements of GF(2^n):
/// position `p < N-1` carries α^p, the last position carries 0.
#[derive(Clone, Debug)]
pub struct AffineSpace {
    field: Gf2mField,
    log: Vec<u32>,
}

impl AffineSpace {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=16).contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "affine maps need 1 <= n <= 16, got {n}"
            )));
        }
        let field = Gf2mField::new(n)?;
        let log = field.log_table();
        Ok(AffineSpace { field, log })
    }

    pub fn field(&self) -> &Gf2mField {
        &self.field
    }

    /// N = 2^n.
    pub fn len(&self) -> usize {
        self.field.size() as usize
    }

    pub fn theta(&self, p: usize) -> u32 {
        if p == self.len() - 1 {
            0
        } else {
            self.field.exp(p as u64)
        }
    }

    pub fn theta_inv(&self, e: u32) -> usize {
        if e == 0 {
            self.len() - 1
        } else {
            self.log[e as usize] as usize
        }
    }

    pub fn map(&self, beta: u32, gamma: u32) -> Result<AffineMap> {
        let size = self.field.size();
        if beta == 0 || beta as u64 >= size || gamma as u64 >= size {
            return Err(Error::InvalidArgument(format!(
                "need nonzero β and field elements, got β = {beta}, γ = {gamma}"
            )));
        }
        Ok(AffineMap {
            space: self.clone(),
            beta,
            gamma,
        })
    }

    /// (β, γ) with π(i) = i and π(j) = k:
    /// β = (Θi - Θk)/(Θi - Θj), γ = Θi·(Θk - Θj)/(Θi - Θj).
    pub fn witness(&self, i: usize, j: usize, k: usize) -> Result<(u32, u32)> {
        let n = self.len();
        if i == j || j == k || i == k || i >= n || j >= n || k >= n {
            return Err(Error::InvalidArgument(format!(
                "need distinct positions below {n}, got {i}, {j}, {k}"
            )));
        }
        let f = &self.field;
        let (ti, tj, tk) = (self.theta(i), self.theta(j), self.theta(k));
        let den = ti ^ tj;
        let beta = f.div(ti ^ tk, den).expect("Θ is injective");
        let gamma = f.mul(ti, f.div(tk ^ tj, den).expect("Θ is injective"));
        Ok((beta, gamma))
    }
}

/// ℓ ↦ Θ⁻¹(βΘ(ℓ) + γ).
#[derive(Clone, Debug)]
pub struct AffineMap {
    space: AffineSpace,
    beta: u32,
    gamma: u32,
}

impl AffineMap {
    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn apply(&self, p: usize) -> usize {
        let s = &self.space;
        s.theta_inv(s.field.mul(self.beta, s.theta(p)) ^ self.gamma)
    }

    /// self ∘ other = (β₁β₂, β₁γ₂ + γ₁).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let f = &self.space.field;
        AffineMap {
            space: self.space.clone(),
            beta: f.mul(self.beta, other.beta),
            gamma: f.mul(self.beta, other.gamma) ^ self.gamma,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let f = &self.space.field;
        let bi = f.inv(self.beta).expect("β is nonzero");
        AffineMap {
            space: self.space.clone(),
            beta: bi,
            gamma: f.mul(bi, self.gamma),
        }
    }
}

/// The permutation of [N] induced by an affine map.
pub fn affine_perm(map: &AffineMap) -> Permutation {
    Permutation::from_image_unchecked((0..map.space.len()).map(|p| map.apply(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::ebch_code;
    use crate::symmetry::apply_perm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_bad_beta() {
        let s = AffineSpace::new(4).unwrap();
        assert!(affine_perm(&s.map(1, 0).unwrap()).is_identity());
        assert!(s.map(0, 3).is_err());
        for p in 0..16 {
            assert_eq!(s.theta_inv(s.theta(p)), p);
        }
    }

    #[test]
    fn composition_law_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=6 {
            let s = AffineSpace::new(n).unwrap();
            let q = 1u32 << n;
            for _ in 0..40 {
                let a = s.map(rng.gen_range(1..q), rng.gen_range(0..q)).unwrap();
                let b = s.map(rng.gen_range(1..q), rng.gen_range(0..q)).unwrap();
                let lhs = affine_perm(&a).compose(&affine_perm(&b));
                assert_eq!(lhs, affine_perm(&a.compose(&b)));
                assert!(affine_perm(&a.compose(&a.inverse())).is_identity());
            }
        }
    }

    #[test]
    fn witnesses_fix_and_move() {
        let s = AffineSpace::new(4).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                for k in 0..16 {
                    if i == j || j == k || i == k {
                        assert!(s.witness(i, j, k).is_err());
                        continue;
                    }
                    let (b, g) = s.witness(i, j, k).unwrap();
                    let m = s.map(b, g).unwrap();
                    assert_eq!(m.apply(i), i);
                    assert_eq!(m.apply(j), k);
                }
            }
        }
        // Θ(i) = 0 makes the translation part vanish
        let (b, g) = s.witness(15, 2, 7).unwrap();
        assert_eq!(g, 0);
        assert_eq!(b, s.field().div(s.theta(7), s.theta(2)).unwrap());
    }

    #[test]
    fn extended_bch_codes_are_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..=5 {
            let s = AffineSpace::new(n).unwrap();
            let q = 1u32 << n;
            let len = (1usize << n) - 1;
            for v in 1..len {
                let Ok(c) = ebch_code(v, n) else { continue };
                for _ in 0..10 {
                    let m = s.map(rng.gen_range(1..q), rng.gen_range(0..q)).unwrap();
                    assert!(apply_perm(&affine_perm(&m), &c).unwrap(), "eBCH({v},{n})");
                }
            }
        }
    }
}
