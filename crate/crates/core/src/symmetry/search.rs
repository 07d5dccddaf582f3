//! Backtracking search for code automorphisms of short codes.
//!
//! Positions are assigned in a fixed order; a partial map is extended only
//! while the code punctured to the assigned positions matches the code
//! punctured to their images, column for column.

use super::Permutation;
use crate::codebook::LinearCode;

/// Largest N searched exhaustively.
pub const SEARCH_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Permutation),
    /// Every candidate was pruned.
    Exhausted,
    BudgetExceeded,
}

fn rank(vs: impl IntoIterator<Item = u64>) -> usize {
    let mut rows: Vec<u64> = Vec::new();
    for v in vs {
        let mut x = v;
        for &r in &rows {
            x = x.min(x ^ r);
        }
        if x != 0 {
            rows.push(x);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    rows.len()
}

struct Search<'a> {
    rows: &'a [u64],
    order: Vec<usize>,
    image: Vec<usize>,
    used: u64,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Rows restricted to `cols`, packed in the given column order.
    fn project(&self, cols: &[usize]) -> Vec<u64> {
        self.rows
            .iter()
            .map(|&r| {
                cols.iter()
                    .enumerate()
                    .fold(0u64, |acc, (t, &c)| acc | ((r >> c) & 1) << t)
            })
            .collect()
    }

    fn consistent(&self, depth: usize) -> bool {
        let dom: Vec<usize> = self.order[..depth].to_vec();
        let img: Vec<usize> = dom.iter().map(|&d| self.image[d]).collect();
        let a = self.project(&dom);
        let b = self.project(&img);
        let ra = rank(a.iter().copied());
        ra == rank(b.iter().copied()) && ra == rank(a.iter().chain(&b).copied())
    }

    fn run(&mut self, depth: usize, fixed: &[(usize, usize)]) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let n = self.order.len();
        if depth == n {
            return Some(true);
        }
        let d = self.order[depth];
        let candidates: Vec<usize> = match fixed.iter().find(|(x, _)| *x == d) {
            Some(&(_, y)) => vec![y],
            None => (0..n).collect(),
        };
        for y in candidates {
            if self.used >> y & 1 == 1 {
                continue;
            }
            self.image[d] = y;
            self.used |= 1 << y;
            if self.consistent(depth + 1) {
                match self.run(depth + 1, fixed)? {
                    true => return Some(true),
                    false => {}
                }
            }
            self.used &= !(1 << y);
        }
        Some(false)
    }
}

/// Searches for an automorphism extending the `fixed` assignments.
pub fn find_automorphism(code: &LinearCode, fixed: &[(usize, usize)], budget: u64) -> SearchOutcome {
    let n = code.n();
    assert!(n <= SEARCH_MAX_N, "search is limited to short codes");
    let rows: Vec<u64> = code.generator().row_vecs().iter().map(|r| r.as_u64()).collect();
    let mut order: Vec<usize> = fixed.iter().map(|&(x, _)| x).collect();
    order.extend((0..n).filter(|p| !fixed.iter().any(|&(x, _)| x == *p)));
    let mut s = Search {
        rows: &rows,
        order,
        image: vec![usize::MAX; n],
        used: 0,
        nodes: 0,
        budget,
    };
    match s.run(0, fixed) {
        Some(true) => SearchOutcome::Found(Permutation::from_image_unchecked(s.image)),
        Some(false) => SearchOutcome::Exhausted,
        None => SearchOutcome::BudgetExceeded,
    }
}
