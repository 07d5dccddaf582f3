use super::{averaging_mode, erasure_estimates, exit_estimate, tally_grid, ErasureEstimates, McEstimate};
use crate::codebook::LinearCode;
use crate::error::{Error, Result};

/// Evenly spaced erasure probabilities `start, start + step, …, stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(0.0 <= start && start < stop && stop <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "grid needs step > 0 and 0 <= start < stop <= 1, got {start}:{stop}:{step}"
            )));
        }
        Ok(Grid { start, stop, step })
    }

    /// The unit interval with the given step.
    pub fn unit(step: f64) -> Result<Self> {
        Grid::new(0.0, 1.0, step)
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        let mut pts: Vec<f64> = (0..=count)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .map(|p| p.min(self.stop))
            .collect();
        pts.dedup();
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    pub exit: McEstimate,
    pub erasure: ErasureEstimates,
}

/// Estimated h on a grid with its monotone fit.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveEstimate {
    pub points: Vec<CurvePoint>,
    pub fit: Vec<f64>,
}

/// Crossing of a level by the fitted curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub p: f64,
    pub uncertainty: f64,
    /// Index of the first grid point at or above the level.
    cell: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WidthEstimate {
    pub eps: f64,
    pub p_low: f64,
    pub p_high: f64,
    pub width: f64,
    pub uncertainty: f64,
}

/// Pool-adjacent-violators, unweighted: the nondecreasing sequence closest
/// to `values` in squared error.
pub fn isotonic_fit(values: &[f64]) -> Vec<f64> {
    // blocks of (sum, count)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (s2, c2) = blocks[blocks.len() - 1];
            let (s1, c1) = blocks[blocks.len() - 2];
            if s1 / c1 as f64 <= s2 / c2 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().unwrap() = (s1 + s2, c1 + c2);
        }
    }
    blocks
        .iter()
        .flat_map(|&(s, c)| std::iter::repeat(s / c as f64).take(c))
        .collect()
}

impl CurveEstimate {
    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(|pt| pt.p).collect()
    }

    /// Where the fit first reaches `level`, by linear interpolation.
    pub fn crossing(&self, level: f64) -> Result<Crossing> {
        let k = self
            .fit
            .iter()
            .position(|&f| f >= level)
            .filter(|&k| k > 0)
            .ok_or_else(|| {
                Error::OutOfRange(format!("the fitted curve does not cross {level} inside the grid"))
            })?;
        let (p0, p1) = (self.points[k - 1].p, self.points[k].p);
        let (f0, f1) = (self.fit[k - 1], self.fit[k]);
        let step = p1 - p0;
        let p = p0 + (level - f0) / (f1 - f0) * step;
        let se = self.points[k - 1].exit.stderr.max(self.points[k].exit.stderr);
        let slope = (f1 - f0) / step;
        Ok(Crossing {
            p,
            uncertainty: step + 4.0 * se / slope,
            cell: k,
        })
    }

    /// p_{1/2}.
    pub fn median(&self) -> Result<f64> {
        Ok(self.crossing(0.5)?.p)
    }

    pub fn width(&self, eps: f64) -> Result<WidthEstimate> {
        if !(eps > 0.0 && eps < 0.5) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0, 1/2), got {eps}")));
        }
        let lo = self.crossing(eps)?;
        let hi = self.crossing(1.0 - eps)?;
        if lo.cell == hi.cell {
            return Err(Error::OutOfRange(format!(
                "both crossings at eps = {eps} fall between the same pair of grid points; refine the grid"
            )));
        }
        Ok(WidthEstimate {
            eps,
            p_low: lo.p,
            p_high: hi.p,
            width: hi.p - lo.p,
            uncertainty: lo.uncertainty + hi.uncertainty,
        })
    }
}

/// Estimates h, P_b and P_B at every grid point from one coupled trial stream.
pub fn estimate_curve(code: &LinearCode, grid: &[f64], trials: u64, seed: u64) -> Result<CurveEstimate> {
    let tallies = tally_grid(code, grid, trials, seed, averaging_mode(code))?;
    let points: Vec<CurvePoint> = grid
        .iter()
        .zip(&tallies)
        .map(|(&p, t)| CurvePoint {
            p,
            exit: exit_estimate(t, trials, seed),
            erasure: erasure_estimates(t, code.n(), trials, seed),
        })
        .collect();
    let raw: Vec<f64> = points.iter().map(|pt| pt.exit.mean).collect();
    Ok(CurveEstimate {
        fit: isotonic_fit(&raw),
        points,
    })
}

pub fn estimate_width(
    code: &LinearCode,
    eps: f64,
    grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<WidthEstimate> {
    estimate_curve(code, grid, trials, seed)?.width(eps)
}
