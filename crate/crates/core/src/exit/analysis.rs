use num_bigint::BigInt;
use num_rational::BigRational;

use super::polynomial::ExitPolynomial;
use super::sweep::ExactAnalyzer;
use crate::codebook::{dual, LinearCode};
use crate::erasure::PackedCode;
use crate::error::{Error, Result};

/// Largest N for multivariate EXIT evaluation by direct summation.
pub const VECTOR_EXIT_MAX_N: usize = 12;

/// h(p) = (1/N) Σ_i h_i(p).
pub fn average_exit(code: &LinearCode) -> Result<ExitPolynomial> {
    ExitPolynomial::average(&ExactAnalyzer::new(code)?.all_omega()?)
}

/// ∫₀¹ h(p) dp, exactly.
pub fn area(code: &LinearCode) -> Result<BigRational> {
    Ok(average_exit(code)?.area())
}

/// The code rate K/N as an exact rational.
pub fn rate_rational(code: &LinearCode) -> BigRational {
    BigRational::new(BigInt::from(code.k()), BigInt::from(code.n()))
}

/// |dh_i/dp - Σ_{j≠i} I_j(p)|, where I_j evaluates the ∂_jΩ_i enumerator.
pub fn margulis_russo_check(code: &LinearCode, i: usize, p: f64) -> Result<f64> {
    let an = ExactAnalyzer::new(code)?;
    margulis_russo_residual(&an, i, p)
}

pub(crate) fn margulis_russo_residual(an: &ExactAnalyzer, i: usize, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 < p < 1, got {p}")));
    }
    let h = ExitPolynomial::from_enumerator(&an.omega(i)?);
    let mut total = 0.0;
    for j in (0..an.n()).filter(|&j| j != i) {
        total += ExitPolynomial::from_enumerator(&an.boundary(i, j)?).value(p);
    }
    Ok((h.slope(p) - total).abs())
}

/// |h^⊥(p) - (1 - h(1-p))| for the dual code.
pub fn duality_check(code: &LinearCode, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("need 0 <= p <= 1, got {p}")));
    }
    let h = average_exit(code)?;
    let hd = average_exit(&dual(code)?)?;
    Ok((hd.value(p) - (1.0 - h.value(1.0 - p))).abs())
}

/// Both sides of h(p) <= ((N-ℓ)/N)·ĥ(p) + ℓ/N for a code and a version of it
/// with ℓ positions punctured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PunctureCheck {
    pub h: f64,
    pub h_punctured: f64,
    pub bound: f64,
    pub slack: f64,
}

impl PunctureCheck {
    pub fn holds(&self) -> bool {
        self.slack >= -1e-12
    }
}

pub fn puncture_exit_bound_check(
    code: &LinearCode,
    punctured: &LinearCode,
    ell: usize,
    p: f64,
) -> Result<PunctureCheck> {
    if punctured.n() + ell != code.n() {
        return Err(Error::InvalidArgument(format!(
            "punctured length {} plus {ell} does not match {}",
            punctured.n(),
            code.n()
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("need 0 <= p <= 1, got {p}")));
    }
    let h = average_exit(code)?.value(p);
    let h_punctured = average_exit(punctured)?.value(p);
    let n = code.n() as f64;
    let bound = (n - ell as f64) / n * h_punctured + ell as f64 / n;
    Ok(PunctureCheck {
        h,
        h_punctured,
        bound,
        slack: bound - h,
    })
}

fn check_vector(code: &LinearCode, p: &[f64]) -> Result<PackedCode> {
    if code.n() > VECTOR_EXIT_MAX_N {
        return Err(Error::CapacityExceeded {
            what: "blocklength N for multivariate EXIT",
            value: code.n(),
            cap: VECTOR_EXIT_MAX_N,
        });
    }
    if p.len() != code.n() || p.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::InvalidArgument(format!(
            "need {} erasure probabilities in [0, 1]",
            code.n()
        )));
    }
    Ok(PackedCode::new(code).expect("small code"))
}

fn pattern_measure(p: &[f64], erased: u64, skip: Option<usize>) -> f64 {
    p.iter()
        .enumerate()
        .filter(|(l, _)| Some(*l) != skip)
        .map(|(l, &x)| if erased >> l & 1 == 1 { x } else { 1.0 - x })
        .product()
}

/// h_i at a vector of per-position erasure probabilities.
pub fn vector_exit(code: &LinearCode, i: usize, p: &[f64]) -> Result<f64> {
    let packed = check_vector(code, p)?;
    if i >= code.n() {
        return Err(Error::InvalidArgument(format!("position {i} out of range")));
    }
    let mut acc = 0.0;
    for a in 0u64..1 << code.n() {
        if a >> i & 1 == 0 && packed.indirect_failure(a, i) {
            acc += pattern_measure(p, a, Some(i));
        }
    }
    Ok(acc)
}

/// H(X | Y) in bits for a uniformly chosen codeword sent over BEC(p-vector).
pub fn conditional_entropy(code: &LinearCode, p: &[f64]) -> Result<f64> {
    let packed = check_vector(code, p)?;
    let mut acc = 0.0;
    for e in 0u64..1 << code.n() {
        let lost = packed.lost_dimension(e);
        if lost > 0 {
            acc += lost as f64 * pattern_measure(p, e, None);
        }
    }
    Ok(acc)
}

/// Along the segment from `start` to `end`, the difference between
/// H(X|Y(end)) - H(X|Y(start)) and ∫ Σ_i h_i(p(t)) p_i'(t) dt (Simpson rule).
pub fn path_integral_residual(code: &LinearCode, start: &[f64], end: &[f64]) -> Result<f64> {
    check_vector(code, start)?;
    check_vector(code, end)?;
    let n = code.n();
    let point = |t: f64| -> Vec<f64> {
        start
            .iter()
            .zip(end)
            .map(|(a, b)| a + t * (b - a))
            .collect()
    };
    let integrand = |t: f64| -> Result<f64> {
        let pt = point(t);
        let mut s = 0.0;
        for i in 0..n {
            s += vector_exit(code, i, &pt)? * (end[i] - start[i]);
        }
        Ok(s)
    };
    let steps = 64;
    let h = 1.0 / steps as f64;
    let mut integral = integrand(0.0)? + integrand(1.0)?;
    for k in 1..steps {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        integral += weight * integrand(k as f64 * h)?;
    }
    integral *= h / 3.0;
    let lhs = conditional_entropy(code, end)? - conditional_entropy(code, start)?;
    Ok((lhs - integral).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{
        direct_sum, ebch_code, puncture, repetition_code, rm_code, single_parity_check_code,
    };
    use crate::exit::{omega_enumerator, WeightEnumerator};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn areas_equal_rates() {
        for c in [
            repetition_code(3).unwrap(),
            single_parity_check_code(3).unwrap(),
            rm_code(1, 3).unwrap(),
            rm_code(2, 4).unwrap(),
            ebch_code(3, 4).unwrap(),
        ] {
            assert_eq!(area(&c).unwrap(), rate_rational(&c), "{}", c.label());
        }
        assert_eq!(
            area(&rm_code(1, 3).unwrap()).unwrap(),
            BigRational::new(1.into(), 2.into())
        );
    }

    #[test]
    fn average_of_transitive_code_is_single_bit() {
        let c = rm_code(1, 3).unwrap();
        let avg = average_exit(&c).unwrap();
        let h1 = ExitPolynomial::from_enumerator(&omega_enumerator(&c, 0).unwrap());
        for w in 0..=7 {
            assert_eq!(avg.coefficient(w), h1.coefficient(w));
        }
        let rep = rm_code(0, 2).unwrap();
        assert!((average_exit(&rep).unwrap().value(0.3) - 0.027).abs() < 1e-15);
    }

    #[test]
    fn direct_sum_average() {
        let rep = repetition_code(3).unwrap();
        let spc = single_parity_check_code(3).unwrap();
        let s = direct_sum(&rep, &spc).unwrap();
        let h = average_exit(&s).unwrap();
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let expect = 0.5 * (p * p) + 0.5 * (1.0 - (1.0 - p) * (1.0 - p));
            assert!((h.value(p) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn margulis_russo_small() {
        for p in [0.1, 0.37, 0.5, 0.9] {
            assert!(margulis_russo_check(&single_parity_check_code(3).unwrap(), 0, p).unwrap() < 1e-14);
            assert!(margulis_russo_check(&repetition_code(3).unwrap(), 0, p).unwrap() < 1e-14);
            assert!(margulis_russo_check(&rm_code(1, 3).unwrap(), 5, p).unwrap() < 1e-12);
        }
        assert!(margulis_russo_check(&rm_code(1, 3).unwrap(), 0, 0.0).is_err());
    }

    #[test]
    fn duality_small() {
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            assert!(duality_check(&repetition_code(3).unwrap(), p).unwrap() < 1e-14);
            assert!(duality_check(&rm_code(1, 3).unwrap(), p).unwrap() < 1e-14);
        }
        let h = average_exit(&rm_code(1, 3).unwrap()).unwrap();
        assert!((h.value(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn puncture_bound_small() {
        let rep4 = repetition_code(4).unwrap();
        let rep3 = puncture(&rep4, &[3]).unwrap();
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let chk = puncture_exit_bound_check(&rep4, &rep3, 1, p).unwrap();
            assert!((chk.h - p.powi(3)).abs() < 1e-15);
            assert!((chk.bound - (0.75 * p * p + 0.25)).abs() < 1e-15);
            assert!(chk.holds());
            let same = puncture_exit_bound_check(&rep4, &rep4, 0, p).unwrap();
            assert!(same.slack.abs() < 1e-15);
        }
        assert!(puncture_exit_bound_check(&rep4, &rep3, 2, 0.5).is_err());
    }

    #[test]
    fn vector_exit_reduces_to_scalar() {
        let c = rm_code(1, 3).unwrap();
        let h = ExitPolynomial::from_enumerator(&omega_enumerator(&c, 2).unwrap());
        for p in [0.0, 0.2, 0.5, 0.8] {
            let v = vector_exit(&c, 2, &[p; 8]).unwrap();
            assert!((v - h.value(p)).abs() < 1e-14);
        }
        let e = WeightEnumerator::new(2, vec![0, 2, 1]).unwrap();
        let spc = single_parity_check_code(3).unwrap();
        assert!((vector_exit(&spc, 0, &[0.9, 0.3, 0.6]).unwrap() - (1.0 - 0.7 * 0.4)).abs() < 1e-15);
        assert_eq!(e.m(), 2);
        assert!(vector_exit(&rm_code(1, 4).unwrap(), 0, &[0.5; 16]).is_err());
    }

    #[test]
    fn path_identity_on_segments() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in [rm_code(1, 3).unwrap(), single_parity_check_code(5).unwrap(), ebch_code(1, 3).unwrap()] {
            assert!((conditional_entropy(&c, &vec![1.0; c.n()]).unwrap() - c.k() as f64).abs() < 1e-12);
            assert_eq!(conditional_entropy(&c, &vec![0.0; c.n()]).unwrap(), 0.0);
            for _ in 0..3 {
                let a: Vec<f64> = (0..c.n()).map(|_| rng.gen()).collect();
                let b: Vec<f64> = (0..c.n()).map(|_| rng.gen()).collect();
                assert!(path_integral_residual(&c, &a, &b).unwrap() < 1e-6);
            }
        }
    }

    #[test]
    fn strictly_increasing_with_bounded_influences() {
        for c in [rm_code(1, 3).unwrap(), rm_code(1, 4).unwrap(), ebch_code(3, 4).unwrap()] {
            let an = ExactAnalyzer::new(&c).unwrap();
            let h = average_exit(&c).unwrap();
            assert_eq!(h.value(0.0), 0.0);
            assert_eq!(h.value(1.0), 1.0);
            let infl: Vec<ExitPolynomial> = (1..c.n())
                .map(|j| ExitPolynomial::from_enumerator(&an.boundary(0, j).unwrap()))
                .collect();
            for k in 1..=99 {
                let p = k as f64 / 100.0;
                assert!(h.derivative(p).unwrap() > 0.0, "{} p={p}", c.label());
                for i in &infl {
                    let v = i.value(p);
                    assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }
}
