//! Exact enumeration of Ω_i and ∂_jΩ_i by weight.
//!
//! Short codes are swept over all 2^N erasure patterns once, recording the
//! unrecoverable set of each. Longer codes (up to 64 positions) use a
//! subspace trellis: coordinates are fixed one at a time and the state is the
//! canonical basis of the codewords still compatible with the choices made,
//! projected onto the coordinates not yet fixed.

use std::collections::HashMap;

use rayon::prelude::*;

use super::enumerator::WeightEnumerator;
use crate::codebook::LinearCode;
use crate::erasure::PackedCode;
use crate::error::{Error, Result};

/// Size limits for exact enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    /// Largest N swept pattern by pattern.
    pub sweep_max_n: usize,
    /// Largest N handled by the subspace trellis.
    pub trellis_max_n: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            sweep_max_n: 22,
            trellis_max_n: 64,
        }
    }
}

enum Engine {
    /// `table[E]` is the unrecoverable subset of the erased set `E`.
    Sweep(Vec<u64>),
    Trellis(Vec<u64>),
}

/// Exact Ω-enumerators for one code.
pub struct ExactAnalyzer {
    n: usize,
    engine: Engine,
}

impl ExactAnalyzer {
    pub fn new(code: &LinearCode) -> Result<Self> {
        ExactAnalyzer::with_limits(code, ExactLimits::default())
    }

    pub fn with_limits(code: &LinearCode, limits: ExactLimits) -> Result<Self> {
        let n = code.n();
        let cap = limits.sweep_max_n.max(limits.trellis_max_n).min(64);
        if n > cap {
            return Err(Error::CapacityExceeded {
                what: "blocklength N for exact enumeration",
                value: n,
                cap,
            });
        }
        let packed = PackedCode::new(code).expect("N <= 64");
        let engine = if n <= limits.sweep_max_n.min(26) {
            let table: Vec<u64> = (0..1usize << n)
                .into_par_iter()
                .with_min_len(1 << 12)
                .map(|e| packed.unrecoverable(e as u64))
                .collect();
            Engine::Sweep(table)
        } else {
            let rows = code
                .generator()
                .row_vecs()
                .iter()
                .map(|r| r.words()[0])
                .collect();
            Engine::Trellis(canonical(rows))
        };
        Ok(ExactAnalyzer { n, engine })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::InvalidArgument(format!(
                "position {i} outside blocklength {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Counts of A ⊆ [N] \ {i} in Ω_i, by |A|.
    pub fn omega(&self, i: usize) -> Result<WeightEnumerator> {
        self.check(i)?;
        let m = self.n - 1;
        let mut counts = vec![0u64; m + 1];
        match &self.engine {
            Engine::Sweep(table) => {
                for (e, &lost) in table.iter().enumerate() {
                    if lost >> i & 1 == 1 {
                        counts[(e as u64).count_ones() as usize - 1] += 1;
                    }
                }
            }
            Engine::Trellis(start) => {
                for (state, by_weight) in trellis(start, self.n, &[i]) {
                    if !state.is_empty() {
                        add(&mut counts, &by_weight);
                    }
                }
            }
        }
        Ok(WeightEnumerator::from_counts_unchecked(m, counts))
    }

    /// Counts of A ⊆ [N] \ {i} in ∂_jΩ_i, by |A|. Both the member and the
    /// non-member of each pivotal pair are counted.
    pub fn boundary(&self, i: usize, j: usize) -> Result<WeightEnumerator> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::InvalidArgument(
                "boundary needs distinct positions".into(),
            ));
        }
        let m = self.n - 1;
        let mut counts = vec![0u64; m + 1];
        match &self.engine {
            Engine::Sweep(table) => {
                let (bi, bj) = (1u64 << i, 1u64 << j);
                for a in 0..1u64 << self.n {
                    if a & (bi | bj) != 0 {
                        continue;
                    }
                    let up = table[(a | bi | bj) as usize] & bi != 0;
                    let down = table[(a | bi) as usize] & bi != 0;
                    if up && !down {
                        let w = a.count_ones() as usize;
                        counts[w] += 1;
                        counts[w + 1] += 1;
                    }
                }
            }
            Engine::Trellis(start) => {
                let (bi, bj) = (1u64 << i, 1u64 << j);
                for (state, by_weight) in trellis(start, self.n, &[i, j]) {
                    // j erased: any vector with bit i; j observed: need bit i without bit j
                    let up = span_has(&state, |v| v & bi != 0);
                    let down = span_has(&state, |v| v & bi != 0 && v & bj == 0);
                    if up && !down {
                        for (w, &c) in by_weight.iter().enumerate().take(m) {
                            counts[w] += c;
                            counts[w + 1] += c;
                        }
                    }
                }
            }
        }
        Ok(WeightEnumerator::from_counts_unchecked(m, counts))
    }

    /// Ω-enumerators for every position.
    pub fn all_omega(&self) -> Result<Vec<WeightEnumerator>> {
        match &self.engine {
            Engine::Sweep(table) => {
                let m = self.n - 1;
                let mut counts = vec![vec![0u64; m + 1]; self.n];
                for (e, &lost) in table.iter().enumerate() {
                    let w = (e as u64).count_ones() as usize;
                    let mut rest = lost;
                    while rest != 0 {
                        let i = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        counts[i][w - 1] += 1;
                    }
                }
                Ok(counts
                    .into_iter()
                    .map(|c| WeightEnumerator::from_counts_unchecked(m, c))
                    .collect())
            }
            Engine::Trellis(_) => (0..self.n).into_par_iter().map(|i| self.omega(i)).collect(),
        }
    }
}

fn add(acc: &mut [u64], by_weight: &[u64]) {
    for (a, &c) in acc.iter_mut().zip(by_weight) {
        *a += c;
    }
}

/// Whether a 1- or 2-dimensional coordinate space spanned by `rows` holds a
/// vector satisfying `pred`. States here have at most two rows.
fn span_has(rows: &[u64], pred: impl Fn(u64) -> bool) -> bool {
    let k = rows.len();
    (1u32..1 << k).any(|sel| {
        let v = (0..k)
            .filter(|&r| sel >> r & 1 == 1)
            .fold(0u64, |acc, r| acc ^ rows[r]);
        pred(v)
    })
}

/// Reduced row echelon form with pivots at the highest bit, rows sorted
/// descending. Zero rows are dropped.
fn canonical(rows: Vec<u64>) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(rows.len());
    for mut r in rows {
        for &o in &out {
            let pivot = 1u64 << (63 - o.leading_zeros());
            if r & pivot != 0 {
                r ^= o;
            }
        }
        if r == 0 {
            continue;
        }
        let pivot = 1u64 << (63 - r.leading_zeros());
        for o in out.iter_mut() {
            if *o & pivot != 0 {
                *o ^= r;
            }
        }
        out.push(r);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Runs the subspace trellis over all coordinates except `keep`, returning
/// the final states with erased-count histograms (length N).
fn trellis(start: &[u64], n: usize, keep: &[usize]) -> HashMap<Vec<u64>, Vec<u64>> {
    let m = n - 1;
    let mut layer: HashMap<Vec<u64>, Vec<u64>> = HashMap::new();
    let mut init = vec![0u64; m + 1];
    init[0] = 1;
    layer.insert(start.to_vec(), init);
    for j in (0..n).filter(|j| !keep.contains(j)) {
        let bit = 1u64 << j;
        let mut next: HashMap<Vec<u64>, Vec<u64>> = HashMap::with_capacity(layer.len() * 2);
        for (state, by_weight) in layer {
            // erased: coordinate j is free, project it away
            let erased = canonical(state.iter().map(|&r| r & !bit).collect());
            let slot = next.entry(erased).or_insert_with(|| vec![0; m + 1]);
            for w in 0..m {
                slot[w + 1] += by_weight[w];
            }
            // observed: keep only codewords that vanish at j
            let mut rows = state;
            if let Some(pos) = rows.iter().position(|&r| r & bit != 0) {
                let pivot = rows.swap_remove(pos);
                for r in rows.iter_mut() {
                    if *r & bit != 0 {
                        *r ^= pivot;
                    }
                }
            }
            let observed = canonical(rows);
            let slot = next.entry(observed).or_insert_with(|| vec![0; m + 1]);
            add(slot, &by_weight);
        }
        layer = next;
    }
    layer
}

pub fn omega_enumerator(code: &LinearCode, i: usize) -> Result<WeightEnumerator> {
    ExactAnalyzer::new(code)?.omega(i)
}

pub fn boundary_enumerator(code: &LinearCode, i: usize, j: usize) -> Result<WeightEnumerator> {
    ExactAnalyzer::new(code)?.boundary(i, j)
}
