use super::{cyclic_code, extend_parity, CodeFamily, DminInfo, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{binary_poly, product_of_linear_factors, Gf2Poly, Gf2mField, MAX_DEGREE};

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Multiplicative order of 2 modulo `p`.
fn order_of_two(p: usize) -> usize {
    let mut e = 2 % p;
    let mut k = 1;
    while e != 1 {
        e = e * 2 % p;
        k += 1;
    }
    k
}

/// g(x) = ∏_{i ∈ Q} (x - α^i) over the nonzero squares Q mod `prime`, where
/// α = β^((2^m - 1)/prime) for the primitive element β of GF(2^m), m = ord(2).
pub fn qr_generator(prime: usize) -> Result<Gf2Poly> {
    if !is_prime(prime) || prime == 2 {
        return Err(Error::Unsupported(format!(
            "quadratic-residue codes need an odd prime length, got {prime}"
        )));
    }
    if prime % 8 != 1 && prime % 8 != 7 {
        return Err(Error::Unsupported(format!(
            "2 is not a quadratic residue modulo {prime}"
        )));
    }
    let m = order_of_two(prime);
    if m > MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "order of 2 modulo {prime} is {m}, beyond GF(2^{MAX_DEGREE})"
        )));
    }
    let field = Gf2mField::new(m)?;
    let alpha = field.exp(field.group_order() / prime as u64);
    let mut squares: Vec<usize> = (1..prime).map(|i| i * i % prime).collect();
    squares.sort_unstable();
    squares.dedup();
    let roots: Vec<u32> = squares
        .iter()
        .map(|&i| field.pow(alpha, i as u64))
        .collect();
    binary_poly(&product_of_linear_factors(&field, &roots)).ok_or_else(|| {
        Error::Unsupported(format!("QR generator for {prime} has non-binary coefficients"))
    })
}

fn sqrt_bound(prime: usize) -> DminInfo {
    let mut d = 1;
    while d * d < prime {
        d += 1;
    }
    DminInfo::LowerBound {
        value: d,
        source: "square-root bound".into(),
    }
}

/// The binary [N, (N+1)/2] quadratic-residue code.
pub fn qr_code(prime: usize) -> Result<LinearCode> {
    let g = qr_generator(prime)?;
    cyclic_code(
        prime,
        &g,
        format!("QR({prime})"),
        CodeFamily::QuadraticResidue { prime },
        Some(sqrt_bound(prime)),
    )
}

/// The QR code extended by an overall parity bit: length N+1, rate 1/2.
pub fn extended_qr_code(prime: usize) -> Result<LinearCode> {
    let base = qr_code(prime)?;
    let mut e = extend_parity(&base)?
        .with_label(format!("eQR({prime})"))
        .with_family(CodeFamily::ExtendedQuadraticResidue { prime });
    e.set_dmin(sqrt_bound(prime));
    Ok(e)
}
