use super::bch::bch_generator_degree;
use super::rm::binomial;
use crate::error::{Error, Result};

/// A target rate strictly between 0 and 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateTarget(f64);

impl RateTarget {
    pub fn new(r: f64) -> Result<Self> {
        if r > 0.0 && r < 1.0 {
            Ok(RateTarget(r))
        } else {
            Err(Error::InvalidArgument(format!(
                "target rate must lie in (0, 1), got {r}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Gaussian tail Q(t) = P(Z > t).
pub fn q_function(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

/// Inverse of [`q_function`] by bisection on [-40, 40] to 1e-10.
pub fn q_inverse(y: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    // Q is decreasing: Q(lo) > y > Q(hi)
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        let q = q_function(mid);
        if q == y {
            return mid;
        }
        if q > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Order chosen for RM(v, n) at a target rate, with the rate it achieves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RmRateChoice {
    pub v: usize,
    pub k: u64,
    pub rate: f64,
}

/// v_n = max{⌊n/2 + (√n/2)·Q⁻¹(1 - r)⌋, 0}, clamped to at most n.
pub fn rm_rate_sequence(target: RateTarget, n: usize) -> RmRateChoice {
    let nf = n as f64;
    let raw = (nf / 2.0 + nf.sqrt() / 2.0 * q_inverse(1.0 - target.value())).floor();
    let v = (raw.max(0.0) as usize).min(n);
    let k: u64 = (0..=v).map(|i| binomial(n, i)).sum();
    RmRateChoice {
        v,
        k,
        rate: k as f64 / (1u64 << n) as f64,
    }
}

/// BCH parameter chosen by the degree window, with the resulting code size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BchRateChoice {
    pub v: usize,
    pub degree: usize,
    pub k: usize,
    pub rate: f64,
}

/// Smallest v with N(1 - r) <= degree(f(n, v)) <= N(1 - r) + n.
pub fn bch_rate_select(target: RateTarget, n: usize) -> Result<BchRateChoice> {
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "BCH extension degree must be in 2..=20, got {n}"
        )));
    }
    let len = (1usize << n) - 1;
    let lo = len as f64 * (1.0 - target.value());
    let hi = lo + n as f64;
    for v in 1..=len {
        let degree = bch_generator_degree(v, n)?;
        let d = degree as f64;
        if d >= lo && d <= hi {
            let k = len - degree;
            return Ok(BchRateChoice {
                v,
                degree,
                k,
                rate: k as f64 / len as f64,
            });
        }
        if d > hi {
            break;
        }
    }
    Err(Error::Unsupported(format!(
        "no BCH({{v}},{n}) generator degree lies in [{lo}, {hi}]"
    )))
}
