use super::poly::{prime_factors, Gf2Poly};
use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 31;

/// The field GF(2^m) with a primitive modulus.
///
/// Elements are `u32` values whose bit `i` is the coefficient of `x^i` in the
/// polynomial representation. The class of `x` is the primitive element α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2mField {
    m: usize,
    modulus: Gf2Poly,
    modulus_mask: u64,
}

impl Gf2mField {
    /// GF(2^m) built on the numerically smallest primitive polynomial of degree `m`.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "extension degree must be in 1..={MAX_DEGREE}, got {m}"
            )));
        }
        let lo = (1u64 << m) | 1;
        let hi = 1u64 << (m + 1);
        let modulus = (lo..hi)
            .step_by(2)
            .map(Gf2Poly::from_u64)
            .find(|f| is_primitive(f, m))
            .expect("a primitive polynomial exists for every degree");
        Ok(Gf2mField::with_checked_modulus(m, modulus))
    }

    /// GF(2^m) with a caller-supplied modulus, which must be primitive.
    pub fn with_modulus(modulus: Gf2Poly) -> Result<Self> {
        let m = modulus
            .degree()
            .filter(|&d| (1..=MAX_DEGREE).contains(&d))
            .ok_or_else(|| Error::InvalidArgument(format!("unsupported modulus {modulus}")))?;
        if !is_primitive(&modulus, m) {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus} is not primitive"
            )));
        }
        Ok(Gf2mField::with_checked_modulus(m, modulus))
    }

    fn with_checked_modulus(m: usize, modulus: Gf2Poly) -> Self {
        let modulus_mask = modulus.as_u64();
        Gf2mField {
            m,
            modulus,
            modulus_mask,
        }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    /// Number of field elements, 2^m.
    pub fn size(&self) -> u64 {
        1u64 << self.m
    }

    /// Order of the multiplicative group, 2^m - 1.
    pub fn group_order(&self) -> u64 {
        self.size() - 1
    }

    /// The primitive element α (class of `x`).
    pub fn alpha(&self) -> u32 {
        if self.m == 1 {
            1
        } else {
            2
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let top = 1u64 << self.m;
        let mut a = a as u64;
        let mut b = b as u64;
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus_mask;
            }
        }
        acc as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// α^k.
    pub fn exp(&self, k: u64) -> u32 {
        self.pow(self.alpha(), k % self.group_order())
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.group_order() - 1))
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// Discrete log table: `table[e]` is `k` with α^k = e, for nonzero `e`.
    /// Entry 0 is unused. Intended for small fields.
    pub fn log_table(&self) -> Vec<u32> {
        let mut table = vec![0u32; self.size() as usize];
        let mut e = 1u32;
        for k in 0..self.group_order() {
            table[e as usize] = k as u32;
            e = self.mul(e, self.alpha());
        }
        table
    }
}

/// True when `f` (degree `m`) is irreducible and `x` has order 2^m - 1 modulo `f`.
pub fn is_primitive(f: &Gf2Poly, m: usize) -> bool {
    if f.degree() != Some(m) || !f.coeff(0) {
        return false;
    }
    if !f.is_irreducible() {
        return false;
    }
    let order = (1u128 << m) - 1;
    let x = Gf2Poly::x();
    let one = Gf2Poly::one().rem(f);
    if x.pow_mod(order, f) != one {
        return false;
    }
    prime_factors(order as u64)
        .into_iter()
        .all(|q| x.pow_mod(order / q as u128, f) != one)
}

/// Cyclotomic cosets of 2 modulo 2^n - 1, each sorted, listed by smallest member.
pub fn cyclotomic_cosets(n: usize) -> Vec<Vec<u64>> {
    assert!((1..=MAX_DEGREE).contains(&n), "extension degree out of range");
    let modulus = (1u64 << n) - 1;
    if modulus == 1 {
        return vec![vec![0]];
    }
    let mut seen = vec![false; modulus as usize];
    let mut cosets = Vec::new();
    for start in 0..modulus {
        if seen[start as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut e = start;
        while !seen[e as usize] {
            seen[e as usize] = true;
            coset.push(e);
            e = (2 * e) % modulus;
        }
        coset.sort_unstable();
        cosets.push(coset);
    }
    cosets
}

/// The cyclotomic coset of `i` modulo 2^n - 1.
pub fn coset_of(n: usize, i: u64) -> Vec<u64> {
    let modulus = (1u64 << n) - 1;
    let start = i % modulus;
    let mut coset = vec![start];
    let mut e = (2 * start) % modulus;
    while e != start {
        coset.push(e);
        e = (2 * e) % modulus;
    }
    coset.sort_unstable();
    coset
}

/// Product of `(x - r)` over the given roots, with coefficients in GF(2^m),
/// lowest degree first.
pub(crate) fn product_of_linear_factors(field: &Gf2mField, roots: &[u32]) -> Vec<u32> {
    let mut coeffs = vec![1u32];
    for &r in roots {
        let mut next = vec![0u32; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            // c x^i * (x + r)
            next[i + 1] ^= c;
            next[i] ^= field.mul(c, r);
        }
        coeffs = next;
    }
    coeffs
}

/// Converts field-valued coefficients to a binary polynomial, if they are all 0 or 1.
pub(crate) fn binary_poly(coeffs: &[u32]) -> Option<Gf2Poly> {
    if coeffs.iter().any(|&c| c > 1) {
        return None;
    }
    Some(Gf2Poly::from_coeffs(
        &coeffs.iter().map(|&c| c == 1).collect::<Vec<_>>(),
    ))
}

/// Minimal polynomial of `e` over GF(2).
pub fn minimal_polynomial(field: &Gf2mField, e: u32) -> Gf2Poly {
    if e == 0 {
        return Gf2Poly::x();
    }
    let mut conjugates = vec![e];
    let mut c = field.mul(e, e);
    while c != e {
        conjugates.push(c);
        c = field.mul(c, c);
    }
    binary_poly(&product_of_linear_factors(field, &conjugates))
        .expect("minimal polynomial has binary coefficients")
}
