//! Binary linear codes: construction of the Reed-Muller, BCH and
//! quadratic-residue families, structural transforms, and minimum distance.

mod bch;
mod io;
mod qr;
mod rate;
mod rm;

use std::fmt;
use std::sync::OnceLock;

pub use bch::{bch_code, bch_generator, bch_generator_degree, cyclic_code, ebch_code};
pub use io::{parse_code_file, write_code_file};
pub use qr::{extended_qr_code, qr_code, qr_generator};
pub use rate::{
    bch_rate_select, q_function, q_inverse, rm_rate_sequence, BchRateChoice, RateTarget,
    RmRateChoice,
};
pub use rm::{rm_code, rm_point, rm_position};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Default cap on K for exhaustive codeword enumeration.
pub const DEFAULT_CODEWORD_CAP: usize = 24;

/// Where a code came from. Symmetry certification dispatches on this.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CodeFamily {
    ReedMuller { v: usize, n: usize },
    Bch { v: usize, n: usize },
    ExtendedBch { v: usize, n: usize },
    QuadraticResidue { prime: usize },
    ExtendedQuadraticResidue { prime: usize },
    Repetition,
    SingleParityCheck,
    Generic,
}

/// What is known about the minimum distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DminInfo {
    Exact(usize),
    LowerBound { value: usize, source: String },
}

impl DminInfo {
    /// The exact value, or the best known lower bound.
    pub fn value(&self) -> usize {
        match self {
            DminInfo::Exact(d) => *d,
            DminInfo::LowerBound { value, .. } => *value,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, DminInfo::Exact(_))
    }
}

impl fmt::Display for DminInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DminInfo::Exact(d) => write!(f, "{d} (exact)"),
            DminInfo::LowerBound { value, source } => write!(f, ">= {value} ({source})"),
        }
    }
}

/// Column-major copy of a matrix: column `c` occupies `stride` words.
#[derive(Clone, Debug)]
pub(crate) struct Columns {
    pub stride: usize,
    pub words: Vec<u64>,
}

impl Columns {
    fn of(m: &BitMatrix) -> Self {
        let stride = m.rows().div_ceil(64);
        let mut words = vec![0u64; stride * m.cols()];
        for r in 0..m.rows() {
            for c in m.row(r).iter_ones() {
                words[c * stride + r / 64] |= 1u64 << (r % 64);
            }
        }
        Columns { stride, words }
    }

    #[inline]
    pub fn col(&self, c: usize) -> &[u64] {
        &self.words[c * self.stride..(c + 1) * self.stride]
    }
}

/// A binary linear code with generator and parity-check matrices.
///
/// Invariants checked at construction: `rank(G) = K`, `rank(H) = N - K`,
/// `G Hᵀ = 0`, `0 < K < N`, and no coordinate is zero in every codeword.
#[derive(Clone)]
pub struct LinearCode {
    generator: BitMatrix,
    parity_check: BitMatrix,
    label: String,
    family: CodeFamily,
    dmin: DminInfo,
    g_cols: OnceLock<Columns>,
    h_cols: OnceLock<Columns>,
}

impl LinearCode {
    /// Builds a code from generator rows. Dependent rows are removed by row
    /// reduction; independent rows are kept in the given form.
    pub fn new(
        generator: BitMatrix,
        label: impl Into<String>,
        family: CodeFamily,
        dmin: Option<DminInfo>,
    ) -> Result<Self> {
        let label = label.into();
        let n = generator.cols();
        let rank = generator.rank();
        let generator = if rank == generator.rows() {
            generator
        } else {
            generator.row_space_basis()
        };
        let k = rank;
        if k == 0 || k == n {
            return Err(Error::DegenerateCode(format!(
                "{label}: dimension {k} with blocklength {n} (need 0 < K < N)"
            )));
        }
        let support = generator
            .row_vecs()
            .iter()
            .fold(BitVec::zeros(n), |acc, r| acc.or(r));
        if let Some(zero_col) = support.not().first_one() {
            return Err(Error::DegenerateCode(format!(
                "{label}: position {zero_col} is zero in every codeword"
            )));
        }
        let parity_check = generator.nullspace_basis();
        debug_assert!(generator.mul(&parity_check.transpose()).is_zero());
        debug_assert_eq!(parity_check.rank(), n - k);
        let mut code = LinearCode {
            generator,
            parity_check,
            label,
            family,
            dmin: DminInfo::LowerBound {
                value: 1,
                source: "trivial".into(),
            },
            g_cols: OnceLock::new(),
            h_cols: OnceLock::new(),
        };
        code.dmin = match dmin {
            Some(d) => d,
            None if k <= 16 => DminInfo::Exact(exact_min_distance(&code)),
            None => DminInfo::LowerBound {
                value: 1,
                source: "trivial".into(),
            },
        };
        Ok(code)
    }

    /// Blocklength N.
    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    /// Dimension K.
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> &CodeFamily {
        &self.family
    }

    pub fn dmin_info(&self) -> &DminInfo {
        &self.dmin
    }

    pub(crate) fn generator_columns(&self) -> &Columns {
        self.g_cols.get_or_init(|| Columns::of(&self.generator))
    }

    pub(crate) fn parity_columns(&self) -> &Columns {
        self.h_cols.get_or_init(|| Columns::of(&self.parity_check))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn with_family(mut self, family: CodeFamily) -> Self {
        self.family = family;
        self
    }

    pub(crate) fn set_dmin(&mut self, dmin: DminInfo) {
        self.dmin = dmin;
    }

    /// Encodes a message of K bits.
    pub fn encode(&self, message: &BitVec) -> BitVec {
        self.generator.left_mul(message)
    }

    pub fn is_codeword(&self, word: &BitVec) -> bool {
        self.parity_check.mul_vec(word).is_zero()
    }

    /// Same set of codewords (row-space equality), ignoring labels.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.generator.same_row_space(&other.generator)
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinearCode {{ label: {}, N: {}, K: {}, dmin: {} }}",
            self.label,
            self.n(),
            self.k(),
            self.dmin
        )
    }
}

/// The [N, 1] repetition code.
pub fn repetition_code(n: usize) -> Result<LinearCode> {
    let g = BitMatrix::from_rows(n, vec![BitVec::ones(n)]);
    LinearCode::new(
        g,
        format!("REP({n})"),
        CodeFamily::Repetition,
        Some(DminInfo::Exact(n)),
    )
}

/// The [N, N-1] single-parity-check code.
pub fn single_parity_check_code(n: usize) -> Result<LinearCode> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "single-parity-check code needs N >= 2, got {n}"
        )));
    }
    let rows = (0..n - 1)
        .map(|i| BitVec::from_positions(n, [i, n - 1]))
        .collect();
    LinearCode::new(
        BitMatrix::from_rows(n, rows),
        format!("SPC({n})"),
        CodeFamily::SingleParityCheck,
        Some(DminInfo::Exact(2)),
    )
}

/// Direct sum: codewords `(a, b)` with `a ∈ A`, `b ∈ B`.
pub fn direct_sum(a: &LinearCode, b: &LinearCode) -> Result<LinearCode> {
    let n = a.n() + b.n();
    let mut rows = Vec::with_capacity(a.k() + b.k());
    for r in a.generator.row_vecs() {
        rows.push(r.concat(&BitVec::zeros(b.n())));
    }
    for r in b.generator.row_vecs() {
        rows.push(BitVec::zeros(a.n()).concat(r));
    }
    let dmin = match (&a.dmin, &b.dmin) {
        (DminInfo::Exact(x), DminInfo::Exact(y)) => Some(DminInfo::Exact(*x.min(y))),
        _ => None,
    };
    LinearCode::new(
        BitMatrix::from_rows(n, rows),
        format!("{}+{}", a.label, b.label),
        CodeFamily::Generic,
        dmin,
    )
}

/// The dual code, generated by the parity-check matrix of `c`.
pub fn dual(c: &LinearCode) -> Result<LinearCode> {
    LinearCode::new(
        c.parity_check.clone(),
        format!("dual({})", c.label),
        CodeFamily::Generic,
        None,
    )
}

/// Deletes the listed positions from every codeword.
pub fn puncture(c: &LinearCode, positions: &[usize]) -> Result<LinearCode> {
    let mut drop = vec![false; c.n()];
    for &p in positions {
        if p >= c.n() {
            return Err(Error::InvalidArgument(format!(
                "position {p} outside blocklength {}",
                c.n()
            )));
        }
        drop[p] = true;
    }
    let keep: Vec<usize> = (0..c.n()).filter(|&i| !drop[i]).collect();
    let ell = c.n() - keep.len();
    let g = c.generator.select_columns(&keep);
    let mut sorted: Vec<usize> = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let label = format!(
        "punct({},{{{}}})",
        c.label,
        sorted
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    let dmin = match c.dmin.value().checked_sub(ell) {
        Some(d) if d >= 1 && c.k() > 16 && g.rank() == c.k() => Some(DminInfo::LowerBound {
            value: d,
            source: format!("{} minus {ell} punctured", c.dmin.value()),
        }),
        _ => None,
    };
    LinearCode::new(g, label, CodeFamily::Generic, dmin)
}

/// Appends an overall parity bit so that every codeword has even weight.
pub fn extend_parity(c: &LinearCode) -> Result<LinearCode> {
    let n = c.n();
    let rows = c
        .generator
        .row_vecs()
        .iter()
        .map(|r| {
            let mut e = r.clone();
            e.push(r.weight() % 2 == 1);
            e
        })
        .collect();
    let dmin = match &c.dmin {
        DminInfo::Exact(d) => DminInfo::Exact(d + d % 2),
        bound @ DminInfo::LowerBound { .. } => bound.clone(),
    };
    LinearCode::new(
        BitMatrix::from_rows(n + 1, rows),
        format!("ext({})", c.label),
        CodeFamily::Generic,
        Some(dmin),
    )
}

/// Calls `f` on every codeword, in Gray-code order starting from zero.
pub fn for_each_codeword(c: &LinearCode, mut f: impl FnMut(&BitVec)) {
    let k = c.k();
    let g = c.generator();
    let mut word = BitVec::zeros(c.n());
    f(&word);
    for step in 1u64..(1u64 << k) {
        let row = step.trailing_zeros() as usize;
        word.xor_assign(g.row(row));
        f(&word);
    }
}

/// All codewords, if K does not exceed `cap`.
pub fn codewords(c: &LinearCode, cap: usize) -> Result<Vec<BitVec>> {
    if c.k() > cap {
        return Err(Error::CapacityExceeded {
            what: "dimension K",
            value: c.k(),
            cap,
        });
    }
    let mut out = Vec::with_capacity(1 << c.k());
    for_each_codeword(c, |w| out.push(w.clone()));
    Ok(out)
}

fn exact_min_distance(c: &LinearCode) -> usize {
    let k = c.k();
    let g = c.generator();
    if c.n() <= 64 {
        let rows: Vec<u64> = g.row_vecs().iter().map(BitVec::as_u64).collect();
        let mut word = 0u64;
        let mut best = u32::MAX;
        for step in 1u64..(1u64 << k) {
            word ^= rows[step.trailing_zeros() as usize];
            best = best.min(word.count_ones());
        }
        return best as usize;
    }
    let mut best = usize::MAX;
    let mut word = BitVec::zeros(c.n());
    for step in 1u64..(1u64 << k) {
        word.xor_assign(g.row(step.trailing_zeros() as usize));
        best = best.min(word.weight());
    }
    best
}

/// Minimum distance: exact by enumeration when `K <= cap`, otherwise the
/// family bound recorded at construction.
pub fn min_distance(c: &LinearCode, cap: usize) -> DminInfo {
    if c.dmin.is_exact() {
        return c.dmin.clone();
    }
    if c.k() <= cap {
        DminInfo::Exact(exact_min_distance(c))
    } else {
        c.dmin.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_codes_rejected() {
        let full = BitMatrix::identity(3);
        assert!(matches!(
            LinearCode::new(full, "F", CodeFamily::Generic, None),
            Err(Error::DegenerateCode(_))
        ));
        let zero_col = BitMatrix::parse_rows(&["110"]).unwrap();
        assert!(matches!(
            LinearCode::new(zero_col, "Z", CodeFamily::Generic, None),
            Err(Error::DegenerateCode(_))
        ));
        assert!(LinearCode::new(BitMatrix::empty(4), "E", CodeFamily::Generic, None).is_err());
    }

    #[test]
    fn dependent_rows_are_reduced() {
        let g = BitMatrix::parse_rows(&["1100", "0011", "1111"]).unwrap();
        let c = LinearCode::new(g, "D", CodeFamily::Generic, None).unwrap();
        assert_eq!(c.k(), 2);
        assert_eq!(c.parity_check().rows(), 2);
        assert_eq!(c.dmin_info(), &DminInfo::Exact(2));
    }

    #[test]
    fn repetition_and_spc_are_dual() {
        let rep = repetition_code(5).unwrap();
        let spc = single_parity_check_code(5).unwrap();
        assert!(dual(&rep).unwrap().same_code(&spc));
        assert!(dual(&spc).unwrap().same_code(&rep));
    }

    #[test]
    fn puncture_and_extend() {
        let rep4 = repetition_code(4).unwrap();
        let rep3 = puncture(&rep4, &[3]).unwrap();
        assert!(rep3.same_code(&repetition_code(3).unwrap()));
        let e = extend_parity(&rep3).unwrap();
        assert!(e.same_code(&rep4));
        assert_eq!(e.dmin_info(), &DminInfo::Exact(4));
        // an even-weight code gains an all-zero column
        let spc3 = single_parity_check_code(3).unwrap();
        assert!(matches!(extend_parity(&spc3), Err(Error::DegenerateCode(_))));
        // puncturing everything but one position of a repetition code is degenerate
        assert!(matches!(puncture(&rep4, &[0, 1, 2]), Err(Error::DegenerateCode(_))));
        assert!(puncture(&rep4, &[9]).is_err());
    }

    #[test]
    fn direct_sum_dimensions() {
        let a = repetition_code(3).unwrap();
        let b = single_parity_check_code(3).unwrap();
        let s = direct_sum(&a, &b).unwrap();
        assert_eq!((s.n(), s.k()), (6, 3));
        assert_eq!(s.dmin_info(), &DminInfo::Exact(2));
    }

    #[test]
    fn gray_enumeration_visits_all() {
        let c = single_parity_check_code(4).unwrap();
        let words = codewords(&c, 24).unwrap();
        assert_eq!(words.len(), 8);
        let set: std::collections::HashSet<_> = words.iter().map(|w| w.to_string01()).collect();
        assert_eq!(set.len(), 8);
        assert!(words.iter().all(|w| w.weight() % 2 == 0));
        assert!(codewords(&c, 2).is_err());
    }

    proptest::proptest! {
        #[test]
        fn double_dual_and_orthogonality(rows in proptest::collection::vec(proptest::collection::vec(proptest::bool::ANY, 9), 1..6)) {
            let g = BitMatrix::from_rows(9, rows.iter().map(|r| BitVec::from_bools(r)).collect());
            if let Ok(c) = LinearCode::new(g, "R", CodeFamily::Generic, None) {
                proptest::prop_assert!(c.generator().mul(&c.parity_check().transpose()).is_zero());
                proptest::prop_assert_eq!(c.k() + c.parity_check().rows(), c.n());
                if let Ok(d) = dual(&c) {
                    proptest::prop_assert!(dual(&d).unwrap().same_code(&c));
                }
            }
        }
    }
}
