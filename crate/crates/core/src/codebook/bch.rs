use super::{extend_parity, CodeFamily, DminInfo, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{coset_of, minimal_polynomial, BitMatrix, Gf2Poly, Gf2mField};

fn check_range(v: usize, n: usize) -> Result<u64> {
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "BCH extension degree must be in 2..=20, got {n}"
        )));
    }
    let len = (1u64 << n) - 1;
    if v == 0 || v as u64 > len {
        return Err(Error::InvalidArgument(format!(
            "BCH parameter v must be in 1..={len}, got {v}"
        )));
    }
    Ok(len)
}

/// f(n, v): the lowest-degree binary polynomial with roots α, α², …, α^v,
/// i.e. the product of the distinct minimal polynomials involved.
pub fn bch_generator(v: usize, n: usize) -> Result<Gf2Poly> {
    let len = check_range(v, n)?;
    let field = Gf2mField::new(n)?;
    let mut seen = vec![false; len as usize];
    let mut g = Gf2Poly::one();
    for i in 1..=v as u64 {
        let e = i % len;
        if seen[e as usize] {
            continue;
        }
        for c in coset_of(n, e) {
            seen[c as usize] = true;
        }
        g = g.mul(&minimal_polynomial(&field, field.exp(e)));
    }
    Ok(g)
}

/// degree(f(n, v)), computed from cyclotomic coset sizes.
pub fn bch_generator_degree(v: usize, n: usize) -> Result<usize> {
    let len = check_range(v, n)?;
    let mut seen = vec![false; len as usize];
    let mut degree = 0;
    for i in 1..=v as u64 {
        let e = i % len;
        if seen[e as usize] {
            continue;
        }
        let coset = coset_of(n, e);
        degree += coset.len();
        for c in coset {
            seen[c as usize] = true;
        }
    }
    Ok(degree)
}

/// Cyclic code of length `len` generated by `g`: rows are `x^j g(x)`, with
/// position `ℓ` holding the coefficient of `x^ℓ`.
pub fn cyclic_code(
    len: usize,
    g: &Gf2Poly,
    label: impl Into<String>,
    family: CodeFamily,
    dmin: Option<DminInfo>,
) -> Result<LinearCode> {
    let label = label.into();
    let deg = g
        .degree()
        .ok_or_else(|| Error::InvalidArgument("zero generator polynomial".into()))?;
    let modulus = Gf2Poly::monomial(len).add(&Gf2Poly::one());
    if !modulus.rem(g).is_zero() {
        return Err(Error::InvalidArgument(format!(
            "{g} does not divide x^{len} - 1"
        )));
    }
    if deg >= len {
        return Err(Error::DegenerateCode(format!(
            "{label}: generator degree {deg} leaves dimension 0"
        )));
    }
    let rows = (0..len - deg).map(|j| g.shl(j).to_bitvec(len)).collect();
    LinearCode::new(BitMatrix::from_rows(len, rows), label, family, dmin)
}

/// Primitive narrow-sense BCH code of length 2^n - 1 generated by f(n, v).
pub fn bch_code(v: usize, n: usize) -> Result<LinearCode> {
    let len = check_range(v, n)? as usize;
    let g = bch_generator(v, n)?;
    cyclic_code(
        len,
        &g,
        format!("BCH({v},{n})"),
        CodeFamily::Bch { v, n },
        Some(DminInfo::LowerBound {
            value: v + 1,
            source: "designed distance".into(),
        }),
    )
}

/// BCH(v, n) with an overall parity bit appended as the last position.
pub fn ebch_code(v: usize, n: usize) -> Result<LinearCode> {
    let base = bch_code(v, n)?;
    let mut e = extend_parity(&base)?
        .with_label(format!("eBCH({v},{n})"))
        .with_family(CodeFamily::ExtendedBch { v, n });
    e.set_dmin(DminInfo::LowerBound {
        value: v + 1,
        source: "designed distance".into(),
    });
    Ok(e)
}
