use super::{CodeFamily, DminInfo, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Largest supported number of variables.
pub const MAX_VARIABLES: usize = 16;

/// The evaluation point attached to 0-based position `p` of a length-2^n code:
/// positions `0..N-1` carry the points `1..N-1` (binary expansion, `x_1` is
/// the low bit) and the last position carries the origin.
pub fn rm_point(n: usize, p: usize) -> u32 {
    let last = (1usize << n) - 1;
    assert!(p <= last, "position {p} out of range for n = {n}");
    if p == last {
        0
    } else {
        (p + 1) as u32
    }
}

/// Inverse of [`rm_point`].
pub fn rm_position(n: usize, point: u32) -> usize {
    let last = (1usize << n) - 1;
    if point == 0 {
        last
    } else {
        point as usize - 1
    }
}

/// The Reed-Muller code RM(v, n): evaluations of multilinear polynomials of
/// degree at most `v` in `n` variables. Rows are monomials ordered by degree,
/// then lexicographically by variable set.
pub fn rm_code(v: usize, n: usize) -> Result<LinearCode> {
    if n == 0 || n > MAX_VARIABLES || v > n {
        return Err(Error::InvalidArgument(format!(
            "RM(v, n) needs 0 <= v <= n and 1 <= n <= {MAX_VARIABLES}, got v = {v}, n = {n}"
        )));
    }
    let len = 1usize << n;
    let points: Vec<u32> = (0..len).map(|p| rm_point(n, p)).collect();
    let mut rows = Vec::new();
    for degree in 0..=v {
        for vars in combinations(n, degree) {
            let mask: u32 = vars.iter().map(|&x| 1u32 << x).sum();
            let mut row = BitVec::zeros(len);
            for (p, &pt) in points.iter().enumerate() {
                if pt & mask == mask {
                    row.set(p, true);
                }
            }
            rows.push(row);
        }
    }
    LinearCode::new(
        BitMatrix::from_rows(len, rows),
        format!("RM({v},{n})"),
        CodeFamily::ReedMuller { v, n },
        Some(DminInfo::Exact(1 << (n - v))),
    )
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{dual, min_distance};

    #[test]
    fn dimensions() {
        for n in 1..=6 {
            for v in 0..n {
                let c = rm_code(v, n).unwrap();
                let k: u64 = (0..=v).map(|i| binomial(n, i)).sum();
                assert_eq!(c.k() as u64, k);
                assert_eq!(c.n(), 1 << n);
            }
        }
        assert!(rm_code(3, 3).is_err(), "K = N is rejected");
        assert!(rm_code(4, 3).is_err());
    }

    #[test]
    fn small_examples() {
        let rep = rm_code(0, 3).unwrap();
        assert_eq!((rep.n(), rep.k()), (8, 1));
        assert_eq!(min_distance(&rep, 24), DminInfo::Exact(8));
        let c = rm_code(1, 3).unwrap();
        assert_eq!((c.n(), c.k()), (8, 4));
        assert_eq!(c.label(), "RM(1,3)");
        assert_eq!(c.generator().row(1).to_string01(), "10101010");
        assert_eq!(rm_code(0, 5).unwrap().dmin_info().value(), 32);
    }

    #[test]
    fn family_distance_matches_enumeration() {
        for n in 2..=5 {
            for v in 0..n {
                let c = rm_code(v, n).unwrap();
                if c.k() <= 16 {
                    let exact = super::super::exact_min_distance(&c);
                    assert_eq!(exact, 1 << (n - v), "RM({v},{n})");
                }
            }
        }
    }

    #[test]
    fn duality() {
        for n in 1..=5 {
            for v in 0..n {
                let c = rm_code(v, n).unwrap();
                let d = dual(&c).unwrap();
                if n - v - 1 < n {
                    let expect = rm_code(n - v - 1, n).unwrap();
                    assert!(d.same_code(&expect), "dual of RM({v},{n})");
                }
            }
        }
        let d = dual(&rm_code(2, 4).unwrap()).unwrap();
        assert!(d.same_code(&rm_code(1, 4).unwrap()));
    }

    #[test]
    fn point_enumeration_round_trips() {
        for p in 0..16 {
            assert_eq!(rm_position(4, rm_point(4, p)), p);
        }
        assert_eq!(rm_point(3, 7), 0);
        assert_eq!(rm_point(3, 0), 1);
    }
}
