//! Code permutation groups: invariance tests, affine and linear witnesses,
//! and three-valued transitivity certificates.

mod affine;
mod linear;
mod search;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use affine::{affine_perm, AffineMap, AffineSpace};
pub use linear::{
    gl_action_on_omega, gl_transitivity_matrix, rm_doubly_transitive_witness, rm_translation,
    LinearMap,
};
pub use search::{find_automorphism, SearchOutcome, SEARCH_MAX_N};

use crate::codebook::{CodeFamily, LinearCode};
use crate::error::{Error, Result};
use crate::exit::ExactAnalyzer;
use crate::gf2::{BitMatrix, BitVec};

/// A bijection of {0, …, N-1}; `image[ℓ]` is π(ℓ).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument(
                    "image is not a bijection".into(),
                ));
            }
        }
        Ok(Permutation { image })
    }

    pub(crate) fn from_image_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(image.clone()).is_ok());
        Permutation { image }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    /// (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "size mismatch");
        Permutation {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Permutation { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// The image of a set of positions.
    pub fn apply_set(&self, set: &BitVec) -> BitVec {
        BitVec::from_positions(self.n(), set.iter_ones().map(|x| self.image[x]))
    }

    /// Extends a permutation of N-1 points to N points fixing the last one.
    pub fn extend_fixing_last(&self) -> Permutation {
        let mut image = self.image.clone();
        image.push(self.n());
        Permutation { image }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// True when permuting coordinates by `pi` maps the code onto itself
/// (rank of the stacked generators equals K).
pub fn apply_perm(pi: &Permutation, code: &LinearCode) -> Result<bool> {
    if pi.n() != code.n() {
        return Err(Error::InvalidArgument(format!(
            "permutation on {} points applied to a code of length {}",
            pi.n(),
            code.n()
        )));
    }
    let g = code.generator();
    let permuted = BitMatrix::from_rows(
        code.n(),
        g.row_vecs().iter().map(|r| pi.apply_set(r)).collect(),
    );
    Ok(g.vstack(&permuted).rank() == code.k())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refuted,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
            Verdict::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    Transitive,
    DoublyTransitive,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Transitive => "transitive",
            Property::DoublyTransitive => "doubly-transitive",
        })
    }
}

/// Outcome of a symmetry check, with enough detail to audit it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub label: String,
    pub property: Property,
    pub verdict: Verdict,
    pub method: String,
    /// Number of witnesses constructed and verified.
    pub verified: usize,
    /// A few witnesses, or the evidence behind a refutation.
    pub details: Vec<String>,
}

impl Certificate {
    pub fn dump(&self) -> String {
        let mut out = format!(
            "code: {}\nproperty: {}\nverdict: {}\nmethod: {}\nverified witnesses: {}\n",
            self.label, self.property, self.verdict, self.method, self.verified
        );
        for d in &self.details {
            out.push_str("witness: ");
            out.push_str(d);
            out.push('\n');
        }
        out
    }
}

/// Knobs for certification.
#[derive(Clone, Copy, Debug)]
pub struct SymmetryOptions {
    /// Verify witnesses for every pair / triple up to this length.
    pub exhaustive_max_n: usize,
    /// Sampled pairs / triples above that length.
    pub samples: usize,
    pub seed: u64,
    /// Enumerator-based refutation up to this length.
    pub enumerator_max_n: usize,
    /// Node budget for each automorphism search.
    pub search_budget: u64,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        SymmetryOptions {
            exhaustive_max_n: 32,
            samples: 200,
            seed: 1,
            enumerator_max_n: 22,
            search_budget: 2_000_000,
        }
    }
}

const SHOWN: usize = 4;

/// Pairs (i, j), i ≠ j, exhaustively or sampled.
fn pairs(n: usize, opts: &SymmetryOptions) -> Vec<(usize, usize)> {
    if n <= opts.exhaustive_max_n {
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.samples)
            .map(|_| {
                let i = rng.gen_range(0..n);
                (i, (i + rng.gen_range(1..n)) % n)
            })
            .collect()
    }
}

fn triples(n: usize, opts: &SymmetryOptions) -> Vec<(usize, usize, usize)> {
    if n <= opts.exhaustive_max_n {
        let mut out = Vec::new();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                for k in (0..n).filter(|&k| k != i && k != j) {
                    out.push((i, j, k));
                }
            }
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);
        (0..opts.samples)
            .map(|_| loop {
                let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if i != j && j != k && i != k {
                    break (i, j, k);
                }
            })
            .collect()
    }
}

struct Witnessing {
    verified: usize,
    details: Vec<String>,
    failure: Option<String>,
}

/// Builds and checks one witness per case; stops at the first failure.
fn verify_all<T: Copy>(
    code: &LinearCode,
    cases: &[T],
    mut build: impl FnMut(T) -> Result<(Permutation, String)>,
    moves: impl Fn(T, &Permutation) -> bool,
) -> Witnessing {
    let mut w = Witnessing {
        verified: 0,
        details: Vec::new(),
        failure: None,
    };
    for &case in cases {
        let outcome = build(case).and_then(|(p, desc)| {
            let ok = moves(case, &p) && apply_perm(&p, code)?;
            Ok((ok, desc))
        });
        match outcome {
            Ok((true, desc)) => {
                w.verified += 1;
                if w.details.len() < SHOWN {
                    w.details.push(desc);
                }
            }
            Ok((false, desc)) => {
                w.failure = Some(format!("witness failed verification: {desc}"));
                break;
            }
            Err(e) => {
                w.failure = Some(e.to_string());
                break;
            }
        }
    }
    w
}

fn from_witnessing(code: &LinearCode, property: Property, method: &str, w: Witnessing) -> Certificate {
    let (verdict, details) = match w.failure {
        None => (Verdict::Certified, w.details),
        Some(f) => (Verdict::Unknown, vec![f]),
    };
    Certificate {
        label: code.label().to_string(),
        property,
        verdict,
        method: method.to_string(),
        verified: w.verified,
        details,
    }
}

fn family_n(code: &LinearCode) -> Option<usize> {
    match code.family() {
        CodeFamily::ReedMuller { n, .. } | CodeFamily::ExtendedBch { n, .. } => Some(*n),
        _ => None,
    }
}

pub fn certify_transitive(code: &LinearCode) -> Certificate {
    certify_transitive_with(code, &SymmetryOptions::default())
}

pub fn certify_doubly_transitive(code: &LinearCode) -> Certificate {
    certify_doubly_transitive_with(code, &SymmetryOptions::default())
}

pub fn certify_transitive_with(code: &LinearCode, opts: &SymmetryOptions) -> Certificate {
    let n = code.n();
    let prop = Property::Transitive;
    let moves = |(i, j): (usize, usize), p: &Permutation| p.apply(i) == j;
    match code.family() {
        CodeFamily::ReedMuller { .. } => {
            let m = family_n(code).expect("RM family");
            let w = verify_all(code, &pairs(n, opts), |(i, j)| {
                Ok((rm_translation(m, i, j)?, format!("{i}->{j}: x + e_{i} + e_{j}")))
            }, moves);
            from_witnessing(code, prop, "translations of GF(2)^n", w)
        }
        CodeFamily::ExtendedBch { .. } => {
            let space = match AffineSpace::new(family_n(code).expect("eBCH family")) {
                Ok(s) => s,
                Err(e) => return unknown(code, prop, "affine maps", e.to_string()),
            };
            let w = verify_all(code, &pairs(n, opts), |(i, j)| {
                let gamma = space.theta(i) ^ space.theta(j);
                let map = space.map(1, gamma)?;
                Ok((affine_perm(&map), format!("{i}->{j}: beta=1 gamma={gamma:#x}")))
            }, moves);
            from_witnessing(code, prop, "affine maps of GF(2^n)", w)
        }
        CodeFamily::Bch { .. } | CodeFamily::QuadraticResidue { .. } => {
            let w = verify_all(code, &pairs(n, opts), |(i, j)| {
                let s = (j + n - i) % n;
                let image = (0..n).map(|l| (l + s) % n).collect();
                Ok((Permutation::new(image)?, format!("{i}->{j}: cyclic shift by {s}")))
            }, moves);
            from_witnessing(code, prop, "cyclic shifts", w)
        }
        CodeFamily::Repetition | CodeFamily::SingleParityCheck => {
            let w = verify_all(code, &pairs(n, opts), |(i, j)| {
                Ok((Permutation::transposition(n, i, j), format!("{i}->{j}: swap")))
            }, moves);
            from_witnessing(code, prop, "transpositions", w)
        }
        CodeFamily::ExtendedQuadraticResidue { .. } | CodeFamily::Generic => {
            generic_certificate(code, prop, opts)
        }
    }
}

pub fn certify_doubly_transitive_with(code: &LinearCode, opts: &SymmetryOptions) -> Certificate {
    let n = code.n();
    let prop = Property::DoublyTransitive;
    let moves = |(i, j, k): (usize, usize, usize), p: &Permutation| p.apply(i) == i && p.apply(j) == k;
    match code.family() {
        CodeFamily::ReedMuller { .. } => {
            let m = family_n(code).expect("RM family");
            let w = verify_all(code, &triples(n, opts), |(i, j, k)| {
                let (p, t) = linear::rm_witness_with_map(m, i, j, k)?;
                let rows: Vec<String> = t.to_matrix().row_vecs().iter().map(BitVec::to_string01).collect();
                Ok((p, format!("({i},{j},{k}): T rows {}", rows.join(" "))))
            }, moves);
            from_witnessing(code, prop, "linear maps fixing a point of GF(2)^n", w)
        }
        CodeFamily::ExtendedBch { .. } => {
            let space = match AffineSpace::new(family_n(code).expect("eBCH family")) {
                Ok(s) => s,
                Err(e) => return unknown(code, prop, "affine maps", e.to_string()),
            };
            let w = verify_all(code, &triples(n, opts), |(i, j, k)| {
                let (b, g) = space.witness(i, j, k)?;
                Ok((affine_perm(&space.map(b, g)?), format!("({i},{j},{k}): beta={b:#x} gamma={g:#x}")))
            }, moves);
            from_witnessing(code, prop, "affine maps of GF(2^n)", w)
        }
        CodeFamily::Repetition | CodeFamily::SingleParityCheck => {
            let w = verify_all(code, &triples(n, opts), |(i, j, k)| {
                Ok((Permutation::transposition(n, j, k), format!("({i},{j},{k}): swap {j} {k}")))
            }, moves);
            from_witnessing(code, prop, "transpositions", w)
        }
        CodeFamily::ExtendedQuadraticResidue { .. } if n > SEARCH_MAX_N => unknown(
            code,
            prop,
            "citation only",
            "the PSL(2, N) action is not constructed; double transitivity is not verified".into(),
        ),
        _ => generic_certificate(code, prop, opts),
    }
}

fn unknown(code: &LinearCode, property: Property, method: &str, note: String) -> Certificate {
    Certificate {
        label: code.label().to_string(),
        property,
        verdict: Verdict::Unknown,
        method: method.to_string(),
        verified: 0,
        details: vec![note],
    }
}

/// Enumerator refutation first, then exhaustive search for short codes.
fn generic_certificate(code: &LinearCode, property: Property, opts: &SymmetryOptions) -> Certificate {
    let n = code.n();
    if n <= opts.enumerator_max_n {
        if let Ok(an) = ExactAnalyzer::new(code) {
            if let Some(evidence) = enumerator_refutation(&an, property) {
                return Certificate {
                    label: code.label().to_string(),
                    property,
                    verdict: Verdict::Refuted,
                    method: "unequal weight enumerators".into(),
                    verified: 0,
                    details: vec![evidence],
                };
            }
        }
    }
    if n > SEARCH_MAX_N {
        return unknown(
            code,
            property,
            "none applicable",
            format!("no family construction and N = {n} exceeds the search limit {SEARCH_MAX_N}"),
        );
    }
    let goals: Vec<Vec<(usize, usize)>> = match property {
        Property::Transitive => (1..n).map(|j| vec![(0, j)]).collect(),
        Property::DoublyTransitive => (1..n)
            .map(|j| vec![(0, j)])
            .chain((2..n).map(|k| vec![(0, 0), (1, k)]))
            .collect(),
    };
    let mut verified = 0;
    let mut details = Vec::new();
    for goal in &goals {
        match find_automorphism(code, goal, opts.search_budget) {
            SearchOutcome::Found(p) => {
                let ok = apply_perm(&p, code).unwrap_or(false)
                    && goal.iter().all(|&(x, y)| p.apply(x) == y);
                if !ok {
                    return unknown(code, property, "automorphism search", format!("search result {p} failed verification"));
                }
                verified += 1;
                if details.len() < SHOWN {
                    details.push(format!("{goal:?}: {p}"));
                }
            }
            SearchOutcome::Exhausted => {
                return unknown(
                    code,
                    property,
                    "automorphism search",
                    format!("no automorphism realises {goal:?}"),
                )
            }
            SearchOutcome::BudgetExceeded => {
                return unknown(
                    code,
                    property,
                    "automorphism search",
                    format!("search budget exhausted on {goal:?}"),
                )
            }
        }
    }
    Certificate {
        label: code.label().to_string(),
        property,
        verdict: Verdict::Certified,
        method: "automorphism search (generated group is transitive on the required points)".into(),
        verified,
        details,
    }
}

fn enumerator_refutation(an: &ExactAnalyzer, property: Property) -> Option<String> {
    let n = an.n();
    let omegas = an.all_omega().ok()?;
    if let Some(i) = (1..n).find(|&i| omegas[i] != omegas[0]) {
        return Some(format!(
            "Omega enumerators differ at positions 0 and {i}: {} vs {}",
            omegas[0], omegas[i]
        ));
    }
    if property == Property::DoublyTransitive {
        for i in [0, n - 1] {
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let first = an.boundary(i, others[0]).ok()?;
            for &j in &others[1..] {
                let b = an.boundary(i, j).ok()?;
                if b != first {
                    return Some(format!(
                        "boundary enumerators for bit {i} differ at positions {} and {j}: {first} vs {b}",
                        others[0]
                    ));
                }
            }
        }
    }
    None
}
