//! Closed-form bounds: transition widths, erasure probabilities, and the
//! finite-n values of the block-error certificates.

use crate::error::{Error, Result};

fn arg(msg: String) -> Error {
    Error::InvalidArgument(msg)
}

/// 2·ln((1-ε)/ε) / (C·ln M): width bound for EXIT functions of codes whose
/// permutation group is doubly transitive on `M` positions.
pub fn width_bound(m: usize, eps: f64, c: f64) -> Result<f64> {
    if m < 2 {
        return Err(arg(format!("need M >= 2, got {m}")));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(arg(format!("need 0 < ε <= 1/2, got {eps}")));
    }
    if !(c > 0.0) {
        return Err(arg(format!("need C > 0, got {c}")));
    }
    Ok(2.0 * ((1.0 - eps) / eps).ln() / (c * (m as f64).ln()))
}

fn check_window(a: f64, b: f64, w: f64) -> Result<()> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(arg(format!("need 0 <= a < b <= 1, got a = {a}, b = {b}")));
    }
    if !(w > 0.0) {
        return Err(arg(format!("need w > 0, got {w}")));
    }
    Ok(())
}

/// a + (1-b) + (1/w)[ln(ε2/(1-ε2)) + ln((1-ε1)/ε1)]: bound on p_{ε2} - p_{ε1}
/// for a function whose log-derivative is at least `w` on [a, b].
pub fn width_bound_from_window(a: f64, b: f64, w: f64, eps1: f64, eps2: f64) -> Result<f64> {
    check_window(a, b, w)?;
    if !(0.0 < eps1 && eps1 <= eps2 && eps2 < 1.0) {
        return Err(arg(format!(
            "need 0 < ε1 <= ε2 < 1, got ε1 = {eps1}, ε2 = {eps2}"
        )));
    }
    Ok(a + (1.0 - b) + ((eps2 / (1.0 - eps2)).ln() + ((1.0 - eps1) / eps1).ln()) / w)
}

/// exp(-w([p_{1/2} - γ] - [a + 1 - b])): bound on h(γ) below the midpoint.
pub fn tail_bound_from_window(a: f64, b: f64, w: f64, p_half: f64, gamma: f64) -> Result<f64> {
    check_window(a, b, w)?;
    if !(0.0 <= gamma && gamma <= p_half && p_half <= 1.0) {
        return Err(arg(format!(
            "need 0 <= γ <= p_half <= 1, got γ = {gamma}, p_half = {p_half}"
        )));
    }
    Ok((-w * ((p_half - gamma) - (a + 1.0 - b))).exp())
}

/// Bit and block erasure probabilities implied by h(p).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErasureProbBounds {
    /// P_b = p·h(p).
    pub bit: f64,
    /// N·P_b.
    pub block_union: f64,
    /// (N/d_min)·P_b.
    pub block_dmin: f64,
}

pub fn erasure_prob_bounds(
    n: usize,
    k: usize,
    dmin: usize,
    p: f64,
    h_at_p: f64,
) -> Result<ErasureProbBounds> {
    if !(0 < k && k < n) {
        return Err(arg(format!("need 0 < K < N, got N = {n}, K = {k}")));
    }
    if dmin == 0 || dmin > n {
        return Err(arg(format!("need 1 <= d_min <= N, got {dmin}")));
    }
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&h_at_p) {
        return Err(arg(format!("p and h(p) must lie in [0, 1], got {p}, {h_at_p}")));
    }
    let bit = p * h_at_p;
    let out = ErasureProbBounds {
        bit,
        block_union: n as f64 * bit,
        block_dmin: n as f64 / dmin as f64 * bit,
    };
    debug_assert!(out.bit <= out.block_dmin && out.block_dmin <= out.block_union);
    Ok(out)
}

/// Which choice of ε_n a block-error certificate uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateMode {
    /// ε_n = d_min / (N ln N), giving P_B <= (N/d_min)·ε_n = 1/ln N.
    BchStyle,
    /// ε_n = 1/N², giving P_B <= N·ε_n = 1/N.
    RmStyle,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockCertificate {
    pub eps_n: f64,
    pub block_bound: f64,
    /// p_{ε_n}, when an EXIT inverse was supplied.
    pub threshold: Option<f64>,
}

pub fn block_capacity_certificate(
    n: usize,
    dmin: usize,
    inverse: Option<&dyn Fn(f64) -> f64>,
    mode: CertificateMode,
) -> Result<BlockCertificate> {
    if n < 2 {
        return Err(arg(format!("need N >= 2, got {n}")));
    }
    if dmin == 0 || dmin > n {
        return Err(arg(format!("need 1 <= d_min <= N, got {dmin}")));
    }
    let nf = n as f64;
    let (eps_n, block_bound) = match mode {
        CertificateMode::BchStyle => {
            let eps = dmin as f64 / (nf * nf.ln());
            (eps, nf / dmin as f64 * eps)
        }
        CertificateMode::RmStyle => {
            let eps = 1.0 / (nf * nf);
            (eps, nf * eps)
        }
    };
    Ok(BlockCertificate {
        eps_n,
        block_bound,
        threshold: inverse.map(|f| f(eps_n)),
    })
}

/// δ_n = ε/(1-ε) + 2 ln(1/ε) / (r ln(N-1)): gap to capacity for low-rate
/// sequences.
pub fn low_rate_gap(r: f64, n: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(arg(format!("need 0 < ε < 1, got {eps}")));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(arg(format!("need 0 < r <= 1, got {r}")));
    }
    if n < 3 {
        return Err(arg(format!("need N >= 3, got {n}")));
    }
    Ok(eps / (1.0 - eps) + 2.0 * (1.0 / eps).ln() / (r * ((n - 1) as f64).ln()))
}

/// ε_n = 1/ln(r ln N), defined when r ln N > e.
pub fn recommended_low_rate_epsilon(r: f64, n: usize) -> Option<f64> {
    let x = r * (n as f64).ln();
    (x > std::f64::consts::E).then(|| 1.0 / x.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_bound_values() {
        assert_eq!(width_bound(15, 0.5, 1.0).unwrap(), 0.0);
        let b = width_bound(15, 0.1, 1.0).unwrap();
        assert!((b - 2.0 * 9f64.ln() / 15f64.ln()).abs() < 1e-15);
        assert!((b - 1.6227).abs() < 1e-4);
        assert!(width_bound(30, 0.1, 1.0).unwrap() < b);
        assert!(width_bound(1, 0.1, 1.0).is_err());
        assert!(width_bound(15, 0.0, 1.0).is_err());
        assert!(width_bound(15, 0.1, 0.0).is_err());
    }

    #[test]
    fn window_bounds() {
        assert_eq!(width_bound_from_window(0.0, 1.0, 3.0, 0.2, 0.2).unwrap(), 0.0);
        for n in [16usize, 32, 1024] {
            let w = ((n - 1) as f64).ln();
            let a = width_bound_from_window(0.0, 1.0, w, 0.1, 0.9).unwrap();
            let b = width_bound(n - 1, 0.1, 1.0).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(tail_bound_from_window(0.0, 1.0, 5.0, 0.4, 0.4).unwrap(), 1.0);
        assert!(tail_bound_from_window(0.0, 1.0, 5.0, 0.4, 0.2).unwrap() < 1.0);
        assert!(width_bound_from_window(0.5, 0.5, 1.0, 0.1, 0.2).is_err());
        assert!(tail_bound_from_window(0.0, 1.0, 1.0, 0.3, 0.4).is_err());
    }

    #[test]
    fn erasure_probabilities() {
        let z = erasure_prob_bounds(3, 1, 3, 0.0, 0.0).unwrap();
        assert_eq!((z.bit, z.block_union, z.block_dmin), (0.0, 0.0, 0.0));
        let r = erasure_prob_bounds(3, 1, 3, 0.5, 0.25).unwrap();
        assert_eq!(r.bit, 0.125);
        assert_eq!(r.block_dmin, 0.125);
        assert_eq!(r.block_union, 0.375);
        assert!(erasure_prob_bounds(3, 3, 1, 0.5, 0.5).is_err());
    }

    #[test]
    fn certificates() {
        let n = 1024;
        let c = block_capacity_certificate(n, 1 + n / 2 / 10, None, CertificateMode::BchStyle)
            .unwrap();
        assert!((c.block_bound - 1.0 / 1024f64.ln()).abs() < 1e-12);
        assert!((c.block_bound - 0.14427).abs() < 1e-5);
        let r = block_capacity_certificate(512, 2, Some(&|e| e.sqrt()), CertificateMode::RmStyle)
            .unwrap();
        assert_eq!(r.eps_n, 1.0 / (512.0 * 512.0));
        assert_eq!(r.block_bound, 1.0 / 512.0);
        assert_eq!(r.threshold, Some(1.0 / 512.0));
        for mode in [CertificateMode::BchStyle, CertificateMode::RmStyle] {
            let a = block_capacity_certificate(256, 8, None, mode).unwrap();
            let b = block_capacity_certificate(512, 8, None, mode).unwrap();
            assert!(b.block_bound < a.block_bound);
        }
    }

    #[test]
    fn low_rate() {
        let n = 1usize << 20;
        let d = low_rate_gap(0.5, n, 0.05).unwrap();
        let expect = 0.05 / 0.95 + 2.0 * 20f64.ln() / (0.5 * ((n - 1) as f64).ln());
        assert!((d - expect).abs() < 1e-14);
        assert!(low_rate_gap(0.5, 2 * n, 0.05).unwrap() < d);
        assert!(recommended_low_rate_epsilon(0.5, 16).is_none());
        let e = recommended_low_rate_epsilon(0.5, n).unwrap();
        assert!((e - 1.0 / (0.5 * (n as f64).ln()).ln()).abs() < 1e-15);
        assert!(low_rate_gap(0.5, n, 1.0).is_err());
    }
}
