//! Incremental XOR basis for fast span-membership tests.
//!
//! Each stored row is keyed by its lowest set bit, so reduction walks the
//! candidate's set bits upwards and never revisits a cleared position.

use super::bitvec::words_for;

/// Incremental basis of a subspace of GF(2)^`bits`.
///
/// Optionally each row carries a tag vector (`tag_bits` wide) recording which
/// inserted vectors were combined to produce it. A vector that reduces to zero
/// then exposes the dependency it closes.
#[derive(Clone, Debug)]
pub struct XorBasis {
    words: usize,
    tag_words: usize,
    stride: usize,
    slot_of_pivot: Vec<u32>,
    store: Vec<u64>,
    rank: usize,
    scratch: Vec<u64>,
}

const NO_SLOT: u32 = u32::MAX;

impl XorBasis {
    pub fn new(bits: usize) -> Self {
        XorBasis::with_tags(bits, 0)
    }

    pub fn with_tags(bits: usize, tag_bits: usize) -> Self {
        let words = words_for(bits);
        let tag_words = words_for(tag_bits);
        let stride = words + tag_words;
        XorBasis {
            words,
            tag_words,
            stride,
            slot_of_pivot: vec![NO_SLOT; bits],
            store: Vec::with_capacity(stride * bits.min(64)),
            rank: 0,
            scratch: vec![0; stride],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.slot_of_pivot.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank == self.slot_of_pivot.len()
    }

    pub fn clear(&mut self) {
        for s in self.slot_of_pivot.iter_mut() {
            *s = NO_SLOT;
        }
        self.store.clear();
        self.rank = 0;
    }

    /// Reduces `buf` (vector words followed by tag words) in place. Returns the
    /// pivot the residue would occupy, or `None` when the vector part vanished.
    fn reduce_in_place(&self, buf: &mut [u64]) -> Option<usize> {
        let mut k = 0;
        while k < self.words {
            let w = buf[k];
            if w == 0 {
                k += 1;
                continue;
            }
            let bit = k * 64 + w.trailing_zeros() as usize;
            let slot = self.slot_of_pivot[bit];
            if slot == NO_SLOT {
                return Some(bit);
            }
            let row = &self.store[slot as usize * self.stride..(slot as usize + 1) * self.stride];
            for (b, r) in buf.iter_mut().zip(row) {
                *b ^= *r;
            }
        }
        None
    }

    /// True when `v` lies in the span.
    pub fn contains(&mut self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.words);
        if self.rank == self.slot_of_pivot.len() {
            return true;
        }
        let mut buf = std::mem::take(&mut self.scratch);
        buf[..self.words].copy_from_slice(v);
        buf[self.words..].fill(0);
        let inside = self.reduce_in_place(&mut buf).is_none();
        self.scratch = buf;
        inside
    }

    /// Inserts `v`; returns true when it was independent of the current span.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        self.insert_tagged(v, None).is_none()
    }

    /// Inserts `v` carrying tag bit `tag`. When `v` is dependent, returns the
    /// tag words of the dependency (including `tag` itself).
    pub fn insert_tagged(&mut self, v: &[u64], tag: Option<usize>) -> Option<Vec<u64>> {
        debug_assert_eq!(v.len(), self.words);
        let mut buf = std::mem::take(&mut self.scratch);
        buf[..self.words].copy_from_slice(v);
        buf[self.words..].fill(0);
        if let Some(t) = tag {
            buf[self.words + t / 64] |= 1u64 << (t % 64);
        }
        let out = match self.reduce_in_place(&mut buf) {
            Some(pivot) => {
                self.slot_of_pivot[pivot] = self.rank as u32;
                self.store.extend_from_slice(&buf);
                self.rank += 1;
                None
            }
            None => Some(buf[self.words..].to_vec()),
        };
        self.scratch = buf;
        out
    }

    pub fn tag_words(&self) -> usize {
        self.tag_words
    }
}
