//! Bit-MAP and block-MAP decoding on the erasure channel, and a direct
//! codeword-coverage oracle for the sets Ω_i.

use crate::codebook::{codewords, LinearCode, DEFAULT_CODEWORD_CAP};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, XorBasis};

/// Positions erased by the channel (1 = erased).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    erased: BitVec,
}

impl ErasurePattern {
    pub fn new(erased: BitVec) -> Self {
        ErasurePattern { erased }
    }

    pub fn none(n: usize) -> Self {
        ErasurePattern::new(BitVec::zeros(n))
    }

    pub fn from_positions(n: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        ErasurePattern::new(BitVec::from_positions(n, positions))
    }

    /// Pattern from the low `n` bits of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        ErasurePattern::new(BitVec::from_u64(n, mask))
    }

    pub fn n(&self) -> usize {
        self.erased.len()
    }

    pub fn erased(&self) -> &BitVec {
        &self.erased
    }

    pub fn is_erased(&self, i: usize) -> bool {
        self.erased.get(i)
    }

    pub fn weight(&self) -> usize {
        self.erased.weight()
    }

    pub fn with(&self, i: usize) -> Self {
        let mut e = self.erased.clone();
        e.set(i, true);
        ErasurePattern::new(e)
    }

    pub fn without(&self, i: usize) -> Self {
        let mut e = self.erased.clone();
        e.set(i, false);
        ErasurePattern::new(e)
    }
}

/// Result of decoding a single bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitStatus {
    Recovered(bool),
    Erased,
}

/// Per-bit decisions. The block is recovered exactly when every bit is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    bits: Vec<BitStatus>,
}

impl DecodeOutcome {
    pub fn bits(&self) -> &[BitStatus] {
        &self.bits
    }

    pub fn bit(&self, i: usize) -> BitStatus {
        self.bits[i]
    }

    pub fn block_recovered(&self) -> bool {
        self.bits.iter().all(|b| matches!(b, BitStatus::Recovered(_)))
    }

    /// Number of bits left erased.
    pub fn failures(&self) -> usize {
        self.bits.iter().filter(|b| **b == BitStatus::Erased).count()
    }

    /// The decoded word when the block is recovered.
    pub fn codeword(&self) -> Option<BitVec> {
        let bools: Option<Vec<bool>> = self
            .bits
            .iter()
            .map(|b| match b {
                BitStatus::Recovered(v) => Some(*v),
                BitStatus::Erased => None,
            })
            .collect();
        bools.map(|b| BitVec::from_bools(&b))
    }
}

/// Whether bit values observed by the channel are used for the bit itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeMode {
    /// Each bit uses its own observation when it is not erased.
    Direct,
    /// Bit `i` is treated as erased whatever the pattern says.
    Indirect(usize),
}

/// Bit-MAP decoding of every position from the unerased part of `received`.
///
/// Values of `received` at erased positions are ignored. Fails with
/// [`Error::Inconsistent`] when no codeword agrees with the observations.
pub fn bit_map_decode(
    code: &LinearCode,
    pattern: &ErasurePattern,
    received: &BitVec,
    mode: DecodeMode,
) -> Result<DecodeOutcome> {
    let n = code.n();
    if pattern.n() != n || received.len() != n {
        return Err(Error::InvalidArgument(format!(
            "pattern and received word must have length {n}"
        )));
    }
    let mut erased = pattern.erased().clone();
    if let DecodeMode::Indirect(i) = mode {
        if i >= n {
            return Err(Error::InvalidArgument(format!("bit {i} outside blocklength {n}")));
        }
        erased.set(i, true);
    }
    let e_pos: Vec<usize> = erased.iter_ones().collect();
    let u_pos: Vec<usize> = erased.not().iter_ones().collect();
    let h = code.parity_check();
    // H_E x_E = H_U y_U
    let h_e = h.select_columns(&e_pos);
    let y_u = received.select(&u_pos);
    let syndrome = h.select_columns(&u_pos).mul_vec(&y_u);
    let aug = BitMatrix::from_rows(
        e_pos.len() + 1,
        h_e.row_vecs()
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut x = row.clone();
                x.push(syndrome.get(r));
                x
            })
            .collect(),
    );
    let rref = aug.rref();
    let mut particular = vec![false; e_pos.len()];
    for (r, &p) in rref.pivots.iter().enumerate() {
        if p == e_pos.len() {
            return Err(Error::Inconsistent);
        }
        particular[p] = rref.matrix.get(r, e_pos.len());
    }
    let mut ambiguous = vec![false; e_pos.len()];
    for v in h_e.nullspace_basis().row_vecs() {
        for k in v.iter_ones() {
            ambiguous[k] = true;
        }
    }
    let mut bits: Vec<BitStatus> = (0..n)
        .map(|p| BitStatus::Recovered(received.get(p)))
        .collect();
    for (k, &p) in e_pos.iter().enumerate() {
        bits[p] = if ambiguous[k] {
            BitStatus::Erased
        } else {
            BitStatus::Recovered(particular[k])
        };
    }
    Ok(DecodeOutcome { bits })
}

/// Positions of `erased` that bit-MAP decoding cannot recover.
///
/// Uses the generator side (test each erased column of G against the span of
/// the unerased ones) or the parity side (dependencies among erased columns
/// of H), whichever works in the smaller space.
pub fn unrecoverable_set(code: &LinearCode, erased: &BitVec) -> BitVec {
    let n = code.n();
    let mut out = BitVec::zeros(n);
    if erased.is_zero() {
        return out;
    }
    if code.k() <= n - code.k() {
        let cols = code.generator_columns();
        let mut basis = XorBasis::new(code.k());
        for u in erased.not().iter_ones() {
            basis.insert(cols.col(u));
            if basis.is_full() {
                return out;
            }
        }
        for e in erased.iter_ones() {
            if !basis.contains(cols.col(e)) {
                out.set(e, true);
            }
        }
    } else {
        let cols = code.parity_columns();
        let e_pos: Vec<usize> = erased.iter_ones().collect();
        let mut basis = XorBasis::with_tags(n - code.k(), e_pos.len());
        for (t, &e) in e_pos.iter().enumerate() {
            if let Some(tags) = basis.insert_tagged(cols.col(e), Some(t)) {
                for k in BitVec::from_words(e_pos.len(), tags).iter_ones() {
                    out.set(e_pos[k], true);
                }
            }
        }
    }
    out
}

/// True when bit `i` cannot be recovered from the positions outside `a ∪ {i}`.
pub fn indirect_failure(code: &LinearCode, a: &BitVec, i: usize) -> bool {
    let cols = code.generator_columns();
    let mut basis = XorBasis::new(code.k());
    for u in 0..code.n() {
        if u != i && !a.get(u) {
            basis.insert(cols.col(u));
            if basis.is_full() {
                return false;
            }
        }
    }
    !basis.contains(cols.col(i))
}

/// Code of length at most 64 with generator and parity columns packed into
/// single words, for pattern sweeps.
#[derive(Clone, Debug)]
pub(crate) struct PackedCode {
    n: usize,
    k: usize,
    g_cols: Vec<u64>,
    h_cols: Vec<u64>,
}

/// Row-reduction basis over at most 64 coordinates, keyed by lowest set bit.
struct SmallBasis {
    rows: [u64; 64],
    tags: [u64; 64],
    present: u64,
}

impl SmallBasis {
    #[inline]
    fn new() -> Self {
        SmallBasis {
            rows: [0; 64],
            tags: [0; 64],
            present: 0,
        }
    }

    /// Reduces `(v, tag)`; inserts and returns `None` when independent,
    /// otherwise returns the accumulated tag of the dependency.
    #[inline]
    fn insert(&mut self, mut v: u64, mut tag: u64) -> Option<u64> {
        while v != 0 {
            let b = v.trailing_zeros() as usize;
            if self.present >> b & 1 == 0 {
                self.rows[b] = v;
                self.tags[b] = tag;
                self.present |= 1 << b;
                return None;
            }
            v ^= self.rows[b];
            tag ^= self.tags[b];
        }
        Some(tag)
    }

    #[inline]
    fn contains(&self, mut v: u64) -> bool {
        while v != 0 {
            let b = v.trailing_zeros() as usize;
            if self.present >> b & 1 == 0 {
                return false;
            }
            v ^= self.rows[b];
        }
        true
    }
}

impl PackedCode {
    pub fn new(code: &LinearCode) -> Option<Self> {
        if code.n() > 64 {
            return None;
        }
        let g = code.generator_columns();
        let h = code.parity_columns();
        Some(PackedCode {
            n: code.n(),
            k: code.k(),
            g_cols: (0..code.n()).map(|c| g.col(c)[0]).collect(),
            h_cols: (0..code.n())
                .map(|c| h.col(c).first().copied().unwrap_or(0))
                .collect(),
        })
    }

    fn all(&self) -> u64 {
        if self.n == 64 {
            !0
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Unrecoverable positions of the erased set `e`.
    #[inline]
    pub fn unrecoverable(&self, e: u64) -> u64 {
        if e == 0 {
            return 0;
        }
        let ne = e.count_ones() as usize;
        let mut basis = SmallBasis::new();
        if ne * (self.n - self.k) < self.n * self.k {
            let mut out = 0;
            let mut rest = e;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if let Some(tag) = basis.insert(self.h_cols[c], 1 << c) {
                    out |= tag;
                }
            }
            out
        } else {
            let full = (1u64 << (self.k - 1) << 1).wrapping_sub(1);
            let mut u = !e & self.all();
            while u != 0 {
                let c = u.trailing_zeros() as usize;
                u &= u - 1;
                basis.insert(self.g_cols[c], 0);
                if basis.present == full {
                    return 0;
                }
            }
            let mut out = 0;
            let mut rest = e;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if !basis.contains(self.g_cols[c]) {
                    out |= 1 << c;
                }
            }
            out
        }
    }

    /// True when bit `i` is lost with erasures `a` (bit `i` itself treated
    /// as erased).
    #[inline]
    pub fn indirect_failure(&self, a: u64, i: usize) -> bool {
        let e = a | 1 << i;
        let ne = e.count_ones() as usize;
        if ne * (self.n - self.k) < self.n * self.k {
            // bit i is lost iff h_i depends on the other erased parity columns
            let mut basis = SmallBasis::new();
            let mut rest = a & !(1 << i);
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                basis.insert(self.h_cols[c], 0);
            }
            basis.contains(self.h_cols[i])
        } else {
            self.unrecoverable(e) >> i & 1 == 1
        }
    }

    /// dim{c ∈ C : supp(c) ⊆ e}, the number of information bits lost.
    pub fn lost_dimension(&self, e: u64) -> usize {
        let mut basis = SmallBasis::new();
        let mut rank = 0;
        let mut u = !e & self.all();
        while u != 0 {
            let c = u.trailing_zeros() as usize;
            u &= u - 1;
            if basis.insert(self.g_cols[c], 0).is_none() {
                rank += 1;
            }
        }
        self.k - rank
    }
}

/// Membership tests for Ω_i and its boundaries by direct codeword enumeration.
#[derive(Clone, Debug)]
pub struct CoverageOracle {
    n: usize,
    nonzero: Vec<BitVec>,
}

impl CoverageOracle {
    pub fn new(code: &LinearCode) -> Result<Self> {
        CoverageOracle::with_cap(code, DEFAULT_CODEWORD_CAP)
    }

    pub fn with_cap(code: &LinearCode, cap: usize) -> Result<Self> {
        let nonzero = codewords(code, cap)?
            .into_iter()
            .filter(|w| !w.is_zero())
            .collect();
        Ok(CoverageOracle {
            n: code.n(),
            nonzero,
        })
    }

    fn check(&self, a: &ErasurePattern, i: usize) -> Result<()> {
        if a.n() != self.n || i >= self.n {
            return Err(Error::InvalidArgument(format!(
                "pattern or position outside blocklength {}",
                self.n
            )));
        }
        if a.is_erased(i) {
            return Err(Error::InvalidArgument(format!(
                "pattern must exclude position {i}"
            )));
        }
        Ok(())
    }

    fn covers(&self, a: &BitVec, i: usize) -> bool {
        let mut with_i = a.clone();
        with_i.set(i, true);
        self.nonzero
            .iter()
            .any(|c| c.get(i) && c.is_subset_of(&with_i))
    }

    /// A ∈ Ω_i: some codeword B ∪ {i} has B ⊆ A.
    pub fn in_omega(&self, a: &ErasurePattern, i: usize) -> Result<bool> {
        self.check(a, i)?;
        Ok(self.covers(a.erased(), i))
    }

    /// A ∈ ∂_jΩ_i: membership flips with the erasure status of `j`.
    pub fn pivotal(&self, a: &ErasurePattern, i: usize, j: usize) -> Result<bool> {
        self.check(a, i)?;
        if j == i || j >= self.n {
            return Err(Error::InvalidArgument(format!(
                "pivot position {j} must differ from {i} and lie in the blocklength"
            )));
        }
        let up = a.with(j);
        let down = a.without(j);
        Ok(self.covers(up.erased(), i) && !self.covers(down.erased(), i))
    }
}

pub fn coverage_oracle(code: &LinearCode, a: &ErasurePattern, i: usize) -> Result<bool> {
    CoverageOracle::new(code)?.in_omega(a, i)
}

pub fn pivotal_oracle(code: &LinearCode, a: &ErasurePattern, i: usize, j: usize) -> Result<bool> {
    CoverageOracle::new(code)?.pivotal(a, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{
        bch_code, puncture, repetition_code, rm_code, single_parity_check_code,
    };
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_erasures() {
        let c = rm_code(1, 3).unwrap();
        let x = c.encode(&BitVec::parse01("1011").unwrap());
        let out = bit_map_decode(&c, &ErasurePattern::none(8), &x, DecodeMode::Direct).unwrap();
        assert!(out.block_recovered());
        assert_eq!(out.codeword().unwrap(), x);
    }

    #[test]
    fn repetition_one_observation() {
        let c = repetition_code(3).unwrap();
        let p = ErasurePattern::from_positions(3, [0, 1]);
        let out = bit_map_decode(&c, &p, &BitVec::parse01("001").unwrap(), DecodeMode::Direct)
            .unwrap();
        assert_eq!(out.codeword().unwrap().to_string01(), "111");
    }

    #[test]
    fn rm13_weight_four_support() {
        let c = rm_code(1, 3).unwrap();
        let oracle = CoverageOracle::new(&c).unwrap();
        let w = c.generator().row(1).clone();
        assert_eq!(w.weight(), 4);
        let p = ErasurePattern::new(w.clone());
        let out = bit_map_decode(&c, &p, &BitVec::zeros(8), DecodeMode::Direct).unwrap();
        for i in 0..8 {
            assert_eq!(out.bit(i) == BitStatus::Erased, w.get(i));
            if w.get(i) {
                assert!(oracle.in_omega(&p.without(i), i).unwrap());
            }
        }
        assert_eq!(unrecoverable_set(&c, &w), w);
    }

    #[test]
    fn inconsistent_word_rejected() {
        let c = repetition_code(3).unwrap();
        let p = ErasurePattern::from_positions(3, [0]);
        let r = bit_map_decode(&c, &p, &BitVec::parse01("001").unwrap(), DecodeMode::Direct);
        assert_eq!(r, Err(Error::Inconsistent));
    }

    #[test]
    fn oracle_examples() {
        let spc = single_parity_check_code(3).unwrap();
        let o = CoverageOracle::new(&spc).unwrap();
        assert!(o.in_omega(&ErasurePattern::from_positions(3, [1]), 0).unwrap());
        assert!(!o.in_omega(&ErasurePattern::none(3), 0).unwrap());
        assert!(o.in_omega(&ErasurePattern::from_positions(3, [1, 2]), 0).unwrap());
        assert!(!o.pivotal(&ErasurePattern::from_positions(3, [2]), 0, 1).unwrap());
        assert!(o.in_omega(&ErasurePattern::from_positions(3, [0]), 0).is_err());

        let rep = repetition_code(3).unwrap();
        let o = CoverageOracle::new(&rep).unwrap();
        assert!(o.pivotal(&ErasurePattern::from_positions(3, [1]), 0, 2).unwrap());
        assert!(!o.pivotal(&ErasurePattern::none(3), 0, 1).unwrap());
    }

    fn family() -> Vec<LinearCode> {
        // puncturing the [15,11] code down to N <= 10 leaves K = N, so the
        // lower-rate members of the same family stand in
        let bch3 = bch_code(3, 4).unwrap();
        let bch5 = bch_code(5, 4).unwrap();
        vec![
            repetition_code(4).unwrap(),
            repetition_code(7).unwrap(),
            single_parity_check_code(5).unwrap(),
            rm_code(1, 3).unwrap(),
            puncture(&bch3, &[10, 11, 12, 13, 14]).unwrap(),
            puncture(&bch5, &[0, 3, 6, 9, 12, 14]).unwrap(),
        ]
    }

    #[test]
    fn decoder_agrees_with_coverage_exhaustively() {
        for c in family() {
            let n = c.n();
            let o = CoverageOracle::new(&c).unwrap();
            for i in 0..n {
                for mask in 0u64..(1 << n) {
                    if mask >> i & 1 == 1 {
                        continue;
                    }
                    let a = ErasurePattern::from_mask(n, mask);
                    let dec = bit_map_decode(&c, &a, &BitVec::zeros(n), DecodeMode::Indirect(i))
                        .unwrap();
                    let fail = dec.bit(i) == BitStatus::Erased;
                    assert_eq!(fail, o.in_omega(&a, i).unwrap(), "{} i={i} A={mask:b}", c.label());
                    assert_eq!(fail, indirect_failure(&c, a.erased(), i));
                    let set = unrecoverable_set(&c, a.with(i).erased());
                    assert_eq!(fail, set.get(i));
                }
            }
        }
    }

    #[test]
    fn omega_is_monotone() {
        for c in family() {
            let n = c.n();
            let o = CoverageOracle::new(&c).unwrap();
            for i in 0..n {
                for mask in 0u64..(1 << n) {
                    if mask >> i & 1 == 1 {
                        continue;
                    }
                    let a = ErasurePattern::from_mask(n, mask);
                    if o.in_omega(&a, i).unwrap() {
                        for j in (0..n).filter(|&j| j != i && mask >> j & 1 == 0) {
                            assert!(o.in_omega(&a.with(j), i).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn status_independent_of_codeword() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in family().into_iter().chain([bch_code(3, 4).unwrap()]) {
            let n = c.n();
            for _ in 0..200 {
                let p = ErasurePattern::new(BitVec::from_bools(
                    &(0..n).map(|_| rng.gen_bool(0.4)).collect::<Vec<_>>(),
                ));
                let msg = BitVec::from_bools(&(0..c.k()).map(|_| rng.gen()).collect::<Vec<_>>());
                let x = c.encode(&msg);
                let zero = bit_map_decode(&c, &p, &BitVec::zeros(n), DecodeMode::Direct).unwrap();
                let out = bit_map_decode(&c, &p, &x, DecodeMode::Direct).unwrap();
                for i in 0..n {
                    assert_eq!(zero.bit(i) == BitStatus::Erased, out.bit(i) == BitStatus::Erased);
                    if let BitStatus::Recovered(v) = out.bit(i) {
                        assert_eq!(v, x.get(i));
                    }
                }
                assert_eq!(out.block_recovered(), out.failures() == 0);
            }
        }
    }

    #[test]
    fn packed_kernel_matches_general() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in [rm_code(2, 5).unwrap(), rm_code(1, 5).unwrap(), bch_code(5, 5).unwrap(), repetition_code(64).unwrap()] {
            let packed = PackedCode::new(&c).unwrap();
            for _ in 0..300 {
                let p = rng.gen_range(0.05..0.95);
                let bools: Vec<bool> = (0..c.n()).map(|_| rng.gen_bool(p)).collect();
                let e = BitVec::from_bools(&bools);
                let mask = e.words()[0];
                let set = unrecoverable_set(&c, &e);
                assert_eq!(packed.unrecoverable(mask), set.words()[0]);
                let i = rng.gen_range(0..c.n());
                assert_eq!(packed.indirect_failure(mask, i), indirect_failure(&c, &e, i));
                assert_eq!(packed.indirect_failure(mask, i), packed.unrecoverable(mask | 1 << i) >> i & 1 == 1);
            }
        }
        assert!(PackedCode::new(&repetition_code(65).unwrap()).is_none());
    }

    proptest! {
        #[test]
        fn both_elimination_sides_agree(mask in any::<u64>(), v in 1usize..=7) {
            let c = bch_code(v, 4).unwrap();
            let erased = BitVec::from_u64(15, mask);
            let set = unrecoverable_set(&c, &erased);
            let dec = bit_map_decode(&c, &ErasurePattern::new(erased.clone()), &BitVec::zeros(15), DecodeMode::Direct).unwrap();
            for i in 0..15 {
                prop_assert_eq!(set.get(i), dec.bit(i) == BitStatus::Erased);
            }
            prop_assert!(set.is_subset_of(&erased));
        }
    }
}
