//! Coupled erasure trials.
//!
//! A trial draws one uniform `U_l` per position; at channel parameter `p`
//! the erased set is `{l : U_l < p}`. Sweeping `p` downwards reveals
//! positions in order of decreasing `U`, and the code restricted to vanish on
//! the revealed set shrinks by one dimension per independent column. One
//! elimination pass therefore scores every grid point of the trial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codebook::LinearCode;

/// SplitMix64 finaliser.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `t` under master seed `seed`.
pub(crate) fn trial_seed(seed: u64, t: u64) -> u64 {
    mix(mix(seed) ^ t.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

/// Basis of the subcode vanishing on the revealed positions, stored flat.
#[derive(Clone)]
struct Subcode {
    words: usize,
    dim: usize,
    rows: Vec<u64>,
}

impl Subcode {
    fn new(code: &LinearCode) -> Self {
        let words = code.n().div_ceil(64);
        let mut rows = Vec::with_capacity(code.k() * words);
        for r in code.generator().row_vecs() {
            rows.extend_from_slice(r.words());
        }
        Subcode {
            words,
            dim: code.k(),
            rows,
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.rows[r * self.words..(r + 1) * self.words]
    }

    fn has(&self, r: usize, l: usize) -> bool {
        self.rows[r * self.words + l / 64] >> (l % 64) & 1 == 1
    }

    fn find(&self, l: usize) -> Option<usize> {
        (0..self.dim).find(|&r| self.has(r, l))
    }

    /// Restricts to codewords vanishing at `l`.
    fn reveal(&mut self, l: usize) {
        let Some(piv) = self.find(l) else {
            return;
        };
        let last = self.dim - 1;
        let w = self.words;
        if piv != last {
            for k in 0..w {
                self.rows.swap(piv * w + k, last * w + k);
            }
        }
        for r in 0..last {
            if self.has(r, l) {
                for k in 0..w {
                    self.rows[r * w + k] ^= self.rows[last * w + k];
                }
            }
        }
        self.dim = last;
    }

    fn covers(&self, l: usize) -> bool {
        self.find(l).is_some()
    }

    /// (dimension, support weight) of the subcode after also revealing `l`,
    /// without modifying `self`.
    fn profile_with(&self, extra: Option<usize>) -> (usize, u64) {
        let mut acc = vec![0u64; self.words];
        let piv = extra.and_then(|l| self.find(l).map(|p| (l, p)));
        for r in 0..self.dim {
            match piv {
                Some((_, p)) if p == r => {}
                Some((l, p)) if self.has(r, l) => {
                    for (a, (x, y)) in acc.iter_mut().zip(self.row(r).iter().zip(self.row(p))) {
                        *a |= x ^ y;
                    }
                }
                _ => {
                    for (a, x) in acc.iter_mut().zip(self.row(r)) {
                        *a |= x;
                    }
                }
            }
        }
        let dim = self.dim - usize::from(piv.is_some());
        (dim, acc.iter().map(|w| w.count_ones() as u64).sum())
    }
}

/// Integer tallies for one grid point; merging is exact and order-free.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Tally {
    pub exit_failures: u64,
    pub failed_bits: u64,
    pub failed_bits_sq: u128,
    pub block_failures: u64,
}

impl Tally {
    pub fn merge(&mut self, o: &Tally) {
        self.exit_failures += o.exit_failures;
        self.failed_bits += o.failed_bits;
        self.failed_bits_sq += o.failed_bits_sq;
        self.block_failures += o.block_failures;
    }
}

/// Scores one trial at every grid point (ascending `grid`), adding into `out`.
/// `bit` is the position whose extrinsic recovery is scored.
pub(crate) fn run_trial(code: &LinearCode, grid: &[f64], bit: usize, seed: u64, out: &mut [Tally]) {
    let n = code.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut order: Vec<usize> = (0..n).filter(|&l| l != bit).collect();
    order.sort_unstable_by(|&a, &b| u[b].total_cmp(&u[a]).then(a.cmp(&b)));
    let mut sub = Subcode::new(code);
    let mut next = 0;
    for g in (0..grid.len()).rev() {
        let p = grid[g];
        while next < order.len() && u[order[next]] >= p {
            sub.reveal(order[next]);
            next += 1;
        }
        if sub.dim == 0 {
            break;
        }
        let extra = (u[bit] >= p).then_some(bit);
        let (dim, failed) = sub.profile_with(extra);
        let t = &mut out[g];
        t.exit_failures += u64::from(sub.covers(bit));
        t.failed_bits += failed;
        t.failed_bits_sq += (failed as u128) * (failed as u128);
        t.block_failures += u64::from(dim > 0);
        debug_assert!(dim == 0 || failed >= code.dmin_info().value() as u64);
    }
}
