use std::fmt;

use super::bitvec::BitVec;
use super::field::Gf2mField;

/// Polynomial over GF(2). Bit `i` of the packed words is the coefficient of `x^i`.
///
/// Trailing zero words are trimmed, so equal polynomials compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly::from_u64(1)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Gf2Poly::from_u64(2)
    }

    pub fn from_u64(mask: u64) -> Self {
        let mut p = Gf2Poly { words: vec![mask] };
        p.trim();
        p
    }

    /// Coefficients listed from the constant term upwards.
    pub fn from_coeffs(coeffs: &[bool]) -> Self {
        let mut p = Gf2Poly::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c {
                p.set_coeff(i, true);
            }
        }
        p
    }

    /// `x^e`.
    pub fn monomial(e: usize) -> Self {
        let mut p = Gf2Poly::zero();
        p.set_coeff(e, true);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i >> 6)
            .is_some_and(|w| (w >> (i & 63)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        if self.words.len() <= i >> 6 {
            if !value {
                return;
            }
            self.words.resize((i >> 6) + 1, 0);
        }
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
        self.trim();
    }

    /// Low 64 coefficients as a bitmask.
    pub fn as_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Coefficient vector of length `len` (positions beyond the degree are zero).
    pub fn to_bitvec(&self, len: usize) -> BitVec {
        assert!(
            self.degree().map_or(true, |d| d < len),
            "polynomial does not fit in {len} coefficients"
        );
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            if self.coeff(i) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let n = self.words.len().max(other.words.len());
        let mut words = vec![0u64; n];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    pub fn shl(&self, k: usize) -> Gf2Poly {
        if self.is_zero() {
            return Gf2Poly::zero();
        }
        let (ws, bs) = (k / 64, k % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut acc = Gf2Poly::zero();
        if let Some(d) = other.degree() {
            for i in 0..=d {
                if other.coeff(i) {
                    acc = acc.add(&self.shl(i));
                }
            }
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quo = Gf2Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quo.set_coeff(shift, true);
            rem = rem.add(&divisor.shl(shift));
        }
        (quo, rem)
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        self.divrem(divisor).1
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn lcm(&self, other: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || other.is_zero() {
            return Gf2Poly::zero();
        }
        let g = self.gcd(other);
        self.divrem(&g).0.mul(other)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u128, modulus: &Gf2Poly) -> Gf2Poly {
        let mut base = self.rem(modulus);
        let mut acc = Gf2Poly::one().rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(m) = self.degree() else {
            return false;
        };
        if m == 0 {
            return false;
        }
        let x = Gf2Poly::x();
        // x^(2^k) mod f by repeated squaring
        let frob = |k: usize| {
            let mut t = x.rem(self);
            for _ in 0..k {
                t = t.mul(&t).rem(self);
            }
            t
        };
        if frob(m) != x.rem(self) {
            return false;
        }
        prime_factors(m as u64).into_iter().all(|q| {
            let t = frob(m / q as usize).add(&x);
            self.gcd(&t).degree() == Some(0)
        })
    }

    /// Evaluates at a field element of `field` (coefficients embed as 0 / 1).
    pub fn eval(&self, field: &Gf2mField, e: u32) -> u32 {
        let Some(d) = self.degree() else {
            return 0;
        };
        let mut acc = 0u32;
        for i in (0..=d).rev() {
            acc = field.mul(acc, e);
            if self.coeff(i) {
                acc ^= 1;
            }
        }
        acc
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return f.write_str("0");
        };
        let terms: Vec<String> = (0..=d)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display() {
        assert_eq!(Gf2Poly::from_u64(0b10011).to_string(), "x^4 + x + 1");
        assert_eq!(Gf2Poly::zero().to_string(), "0");
    }

    #[test]
    fn irreducibility() {
        assert!(Gf2Poly::from_u64(0b111).is_irreducible());
        assert!(!Gf2Poly::from_u64(0b101).is_irreducible());
        assert!(Gf2Poly::from_u64(0b10011).is_irreducible());
        assert!(Gf2Poly::from_u64(0b11111).is_irreducible());
        // (x^2+x+1)^2
        assert!(!Gf2Poly::from_u64(0b10101).is_irreducible());
        assert!(Gf2Poly::x().is_irreducible());
    }

    #[test]
    fn x7_minus_1_factors() {
        let x7 = Gf2Poly::from_u64((1 << 7) | 1);
        let a = Gf2Poly::from_u64(0b1011);
        let b = Gf2Poly::from_u64(0b1101);
        let c = Gf2Poly::from_u64(0b11);
        assert_eq!(a.mul(&b).mul(&c), x7);
        assert_eq!(x7.divrem(&a).1, Gf2Poly::zero());
    }

    #[test]
    fn wide_shift() {
        let p = Gf2Poly::one().shl(130);
        assert_eq!(p.degree(), Some(130));
        let q = p.mul(&Gf2Poly::from_u64(0b11));
        assert_eq!(q.degree(), Some(131));
        assert!(q.coeff(130));
    }

    proptest! {
        #[test]
        fn degree_of_product(a in 1u64..(1 << 20), b in 1u64..(1 << 20)) {
            let (pa, pb) = (Gf2Poly::from_u64(a), Gf2Poly::from_u64(b));
            let prod = pa.mul(&pb);
            prop_assert_eq!(prod.degree().unwrap(), pa.degree().unwrap() + pb.degree().unwrap());
            let (q, r) = prod.divrem(&pb);
            prop_assert_eq!(q, pa.clone());
            prop_assert!(r.is_zero());
            let l = pa.lcm(&pb);
            prop_assert!(l.rem(&pa).is_zero() && l.rem(&pb).is_zero());
        }
    }
}
