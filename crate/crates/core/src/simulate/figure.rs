use std::fmt::Write as _;

use super::curve::{estimate_curve, CurveEstimate, Grid, WidthEstimate};
use super::kernel::mix;
use crate::codebook::{rm_code, rm_rate_sequence, RateTarget};
use crate::error::Result;

pub const CSV_HEADER: &str =
    "n,N,rate,p,h_mean,h_stderr,pb_mean,pb_stderr,pB_mean,pB_stderr,trials,seed";

/// Per-code results of the rate-1/2 sweep.
#[derive(Clone, Debug)]
pub struct Figure1Summary {
    pub n: usize,
    pub len: usize,
    pub v: usize,
    pub rate: f64,
    pub seed: u64,
    pub curve: CurveEstimate,
    pub p_half: Result<f64>,
    pub width: Result<WidthEstimate>,
}

#[derive(Clone, Debug)]
pub struct Figure1 {
    pub trials: u64,
    pub codes: Vec<Figure1Summary>,
}

/// Width level reported per code.
pub const FIGURE1_EPS: f64 = 0.1;

/// Fixed-point rendering with 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (9 - x.abs().log10().floor() as i32).clamp(0, 40) as usize;
    format!("{x:.decimals$}")
}

impl Figure1 {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for s in &self.codes {
            for pt in &s.curve.points {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    s.n,
                    s.len,
                    sig10(s.rate),
                    sig10(pt.p),
                    sig10(pt.exit.mean),
                    sig10(pt.exit.stderr),
                    sig10(pt.erasure.bit.mean),
                    sig10(pt.erasure.bit.stderr),
                    sig10(pt.erasure.block.mean),
                    sig10(pt.erasure.block.stderr),
                    self.trials,
                    s.seed
                );
            }
        }
        out
    }
}

/// RM codes of rate near 1/2: v = (n-1)/2 for odd n, otherwise the
/// order chosen by the rate sequence at r = 1/2.
pub fn figure1_order(n: usize) -> usize {
    if n % 2 == 1 {
        (n - 1) / 2
    } else {
        rm_rate_sequence(RateTarget::new(0.5).expect("valid rate"), n).v
    }
}

pub fn figure1_experiment(ns: &[usize], grid: &Grid, trials: u64, seed: u64) -> Result<Figure1> {
    let pts = grid.points();
    let mut codes = Vec::new();
    for &n in ns {
        let v = figure1_order(n);
        let code = rm_code(v, n)?;
        let code_seed = mix(seed ^ (n as u64).wrapping_mul(0x2545_f491_4f6c_dd1d));
        let curve = estimate_curve(&code, &pts, trials, code_seed)?;
        codes.push(Figure1Summary {
            n,
            len: code.n(),
            v,
            rate: code.rate(),
            seed: code_seed,
            p_half: curve.median(),
            width: curve.width(FIGURE1_EPS),
            curve,
        });
    }
    Ok(Figure1 { trials, codes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig10(0.5), "0.5000000000");
        assert_eq!(sig10(0.0012), "0.001200000000");
        assert_eq!(sig10(0.0), "0");
        assert_eq!(sig10(1.0), "1.000000000");
    }

    #[test]
    fn small_sweep_is_reproducible() {
        let grid = Grid::unit(0.1).unwrap();
        let a = figure1_experiment(&[3, 4], &grid, 200, 7).unwrap();
        let b = figure1_experiment(&[3, 4], &grid, 200, 7).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let csv = a.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 12);
            for f in &fields {
                f.parse::<f64>().unwrap();
            }
        }
        assert_eq!(a.codes[0].v, 1);
        assert_eq!(a.codes[0].rate, 0.5);
    }
}
