use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::enumerator::{binomial_u128, WeightEnumerator};
use crate::error::{Error, Result};

/// h(p) = Σ_w (c_w / D) p^w (1-p)^{M-w} with integer numerators and a common
/// divisor, so averages over positions stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExitPolynomial {
    m: usize,
    numer: Vec<u128>,
    divisor: u128,
}

impl ExitPolynomial {
    pub fn from_enumerator(e: &WeightEnumerator) -> Self {
        ExitPolynomial {
            m: e.m(),
            numer: e.counts().iter().map(|&c| c as u128).collect(),
            divisor: 1,
        }
    }

    /// (1/L) Σ_ℓ h_ℓ over enumerators sharing the same ground-set size.
    pub fn average(es: &[WeightEnumerator]) -> Result<Self> {
        let first = es
            .first()
            .ok_or_else(|| Error::InvalidArgument("nothing to average".into()))?;
        let m = first.m();
        let mut numer = vec![0u128; m + 1];
        for e in es {
            if e.m() != m {
                return Err(Error::InvalidArgument(
                    "enumerators over different ground sets".into(),
                ));
            }
            for (acc, &c) in numer.iter_mut().zip(e.counts()) {
                *acc += c as u128;
            }
        }
        Ok(ExitPolynomial {
            m,
            numer,
            divisor: es.len() as u128,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Coefficient of p^w (1-p)^{M-w}, exactly.
    pub fn coefficient(&self, w: usize) -> BigRational {
        BigRational::new(BigInt::from(self.numer[w]), BigInt::from(self.divisor))
    }

    /// h(p) without range checking.
    pub fn value(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        let d = self.divisor as f64;
        let mut acc = 0.0;
        for (w, &c) in self.numer.iter().enumerate() {
            if c != 0 {
                acc += c as f64 / d * p.powi(w as i32) * q.powi((self.m - w) as i32);
            }
        }
        acc
    }

    /// dh/dp without range checking.
    pub fn slope(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        let d = self.divisor as f64;
        let m = self.m;
        let mut acc = 0.0;
        for (w, &c) in self.numer.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut t = 0.0;
            if w > 0 {
                t += w as f64 * p.powi(w as i32 - 1) * q.powi((m - w) as i32);
            }
            if w < m {
                t -= (m - w) as f64 * p.powi(w as i32) * q.powi((m - w) as i32 - 1);
            }
            acc += c as f64 / d * t;
        }
        acc
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(self.value(p))
    }

    pub fn derivative(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(self.slope(p))
    }

    /// ∫₀¹ h(p) dp as an exact rational, using
    /// ∫ p^w (1-p)^{M-w} dp = 1 / ((M+1) C(M, w)).
    pub fn area(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for (w, &c) in self.numer.iter().enumerate() {
            if c != 0 {
                let den = BigInt::from(self.m as u128 + 1) * BigInt::from(binomial_u128(self.m, w));
                acc += BigRational::new(BigInt::from(c), den);
            }
        }
        acc / BigRational::from_integer(BigInt::from(self.divisor))
    }

    /// inf{p ∈ [0,1] : h(p) >= t} by bisection (200 steps or width 1e-14).
    pub fn inverse(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            if hi - lo < 1e-14 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.value(mid) >= t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// p_{1-ε} - p_ε.
    pub fn width(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "width needs 0 < ε <= 1/2, got {eps}"
            )));
        }
        Ok(self.inverse(1.0 - eps) - self.inverse(eps))
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "erasure probability must lie in [0, 1], got {p}"
        )))
    }
}

pub fn exit_eval(e: &ExitPolynomial, p: f64) -> Result<f64> {
    e.eval(p)
}

pub fn exit_derivative(e: &ExitPolynomial, p: f64) -> Result<f64> {
    e.derivative(p)
}

pub fn inverse_exit(e: &ExitPolynomial, t: f64) -> f64 {
    e.inverse(t)
}

pub fn transition_width(e: &ExitPolynomial, eps: f64) -> Result<f64> {
    e.width(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spc3() -> ExitPolynomial {
        ExitPolynomial::from_enumerator(&WeightEnumerator::new(2, vec![0, 2, 1]).unwrap())
    }

    fn rep3() -> ExitPolynomial {
        ExitPolynomial::from_enumerator(&WeightEnumerator::new(2, vec![0, 0, 1]).unwrap())
    }

    #[test]
    fn closed_forms() {
        assert!((spc3().eval(0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!((rep3().eval(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(spc3().eval(0.0).unwrap(), 0.0);
        assert_eq!(spc3().eval(1.0).unwrap(), 1.0);
        assert!(spc3().eval(1.5).is_err());
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            assert!((spc3().derivative(p).unwrap() - 2.0 * (1.0 - p)).abs() < 1e-14);
            assert!((rep3().derivative(p).unwrap() - 2.0 * p).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_area() {
        assert_eq!(rep3().area(), BigRational::new(1.into(), 3.into()));
        assert_eq!(spc3().area(), BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn inverse_and_width() {
        assert_eq!(rep3().inverse(0.0), 0.0);
        assert_eq!(rep3().inverse(1.0), 1.0);
        assert!((rep3().inverse(0.25) - 0.5).abs() < 1e-13);
        assert!((spc3().inverse(0.75) - 0.5).abs() < 1e-13);
        assert_eq!(rep3().width(0.5).unwrap(), 0.0);
        let expect = 3f64.sqrt() / 2.0 - 0.5;
        assert!((rep3().width(0.25).unwrap() - expect).abs() < 1e-13);
        assert!(rep3().width(0.0).is_err());
        assert!(rep3().width(0.6).is_err());
    }

    #[test]
    fn average_keeps_exact_weights() {
        let a = WeightEnumerator::new(2, vec![0, 0, 1]).unwrap();
        let b = WeightEnumerator::new(2, vec![0, 2, 1]).unwrap();
        let avg = ExitPolynomial::average(&[a, b]).unwrap();
        assert_eq!(avg.coefficient(1), BigRational::new(1.into(), 1.into()));
        assert_eq!(avg.area(), BigRational::new(1.into(), 2.into()));
        assert!((avg.value(0.3) - 0.5 * (0.09 + 1.0 - 0.49)).abs() < 1e-15);
    }
}
