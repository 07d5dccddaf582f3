//! Monte Carlo estimates of the EXIT function and of bit / block erasure
//! probabilities, transition-width estimation and the rate-1/2 RM sweep.
//!
//! All trials assume the all-zero codeword. Trial `t` is a pure function of
//! `(seed, t)` and scores every grid point at once, so curves are estimated
//! with common random numbers and results do not depend on the thread count.

mod curve;
mod figure;
mod kernel;

use rayon::prelude::*;

pub use curve::{estimate_curve, estimate_width, isotonic_fit, CurveEstimate, CurvePoint, Grid, WidthEstimate};
pub use figure::{figure1_experiment, figure1_order, sig10, Figure1, Figure1Summary, CSV_HEADER, FIGURE1_EPS};

use crate::codebook::LinearCode;
use crate::error::{Error, Result};
use crate::symmetry::{certify_transitive, Verdict};
use kernel::{run_trial, trial_seed, Tally};

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    fn bernoulli(successes: u64, trials: u64, seed: u64) -> Self {
        let mean = successes as f64 / trials as f64;
        McEstimate {
            mean,
            stderr: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
            seed,
        }
    }

    /// Mean of `sum / scale` per trial, with the sample standard error.
    fn scaled(sum: u64, sum_sq: u128, scale: f64, trials: u64, seed: u64) -> Self {
        let t = trials as f64;
        let mean = sum as f64 / scale / t;
        let second = sum_sq as f64 / (scale * scale) / t;
        let var = (second - mean * mean).max(0.0);
        let stderr = if trials > 1 {
            (var * t / (t - 1.0) / t).sqrt()
        } else {
            0.0
        };
        McEstimate {
            mean,
            stderr,
            trials,
            seed,
        }
    }

    /// True when `value` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr + 1e-12
    }
}

/// Bit and block erasure probabilities estimated from one pattern stream.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErasureEstimates {
    pub bit: McEstimate,
    pub block: McEstimate,
}

/// Which bit's EXIT value each trial scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AveragingMode {
    /// Valid when the permutation group is transitive: every h_i is equal.
    SingleBit(usize),
    /// Trial `t` scores bit `t mod N`.
    RoundRobin,
}

impl AveragingMode {
    fn bit(self, t: u64, n: usize) -> usize {
        match self {
            AveragingMode::SingleBit(i) => i,
            AveragingMode::RoundRobin => (t % n as u64) as usize,
        }
    }
}

/// `SingleBit(0)` when transitivity is certified, otherwise round-robin.
pub fn averaging_mode(code: &LinearCode) -> AveragingMode {
    if certify_transitive(code).verdict == Verdict::Certified {
        AveragingMode::SingleBit(0)
    } else {
        AveragingMode::RoundRobin
    }
}

fn check_args(grid: &[f64], trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidArgument("erasure probabilities must lie in [0, 1]".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    Ok(())
}

const CHUNK: u64 = 256;

/// Per-grid-point tallies over `trials` trials.
pub(crate) fn tally_grid(
    code: &LinearCode,
    grid: &[f64],
    trials: u64,
    seed: u64,
    mode: AveragingMode,
) -> Result<Vec<Tally>> {
    check_args(grid, trials)?;
    if let AveragingMode::SingleBit(i) = mode {
        if i >= code.n() {
            return Err(Error::InvalidArgument(format!("bit {i} out of range")));
        }
    }
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<Vec<Tally>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![Tally::default(); grid.len()];
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                run_trial(code, grid, mode.bit(t, code.n()), trial_seed(seed, t), &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![Tally::default(); grid.len()];
    for part in &parts {
        for (a, b) in total.iter_mut().zip(part) {
            a.merge(b);
        }
    }
    Ok(total)
}

fn exit_estimate(t: &Tally, trials: u64, seed: u64) -> McEstimate {
    McEstimate::bernoulli(t.exit_failures, trials, seed)
}

fn erasure_estimates(t: &Tally, n: usize, trials: u64, seed: u64) -> ErasureEstimates {
    ErasureEstimates {
        bit: McEstimate::scaled(t.failed_bits, t.failed_bits_sq, n as f64, trials, seed),
        block: McEstimate::bernoulli(t.block_failures, trials, seed),
    }
}

/// Estimate of the average EXIT function h(p).
pub fn estimate_exit(code: &LinearCode, p: f64, trials: u64, seed: u64) -> Result<McEstimate> {
    estimate_exit_with(code, p, trials, seed, averaging_mode(code))
}

pub fn estimate_exit_with(
    code: &LinearCode,
    p: f64,
    trials: u64,
    seed: u64,
    mode: AveragingMode,
) -> Result<McEstimate> {
    let t = tally_grid(code, &[p], trials, seed, mode)?;
    Ok(exit_estimate(&t[0], trials, seed))
}

/// Estimates of P_b and P_B under bit-MAP / block-MAP decoding.
#[allow(non_snake_case)]
pub fn estimate_pb_pB(code: &LinearCode, p: f64, trials: u64, seed: u64) -> Result<ErasureEstimates> {
    let t = tally_grid(code, &[p], trials, seed, AveragingMode::SingleBit(0))?;
    Ok(erasure_estimates(&t[0], code.n(), trials, seed))
}
