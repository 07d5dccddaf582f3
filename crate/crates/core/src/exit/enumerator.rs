use std::fmt;

use crate::error::{Error, Result};

pub(crate) fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Counts of a family of subsets of an `M`-element ground set, by size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    m: usize,
    counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn new(m: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != m + 1 {
            return Err(Error::InvalidArgument(format!(
                "an enumerator over {m} coordinates needs {} counts, got {}",
                m + 1,
                counts.len()
            )));
        }
        for (w, &c) in counts.iter().enumerate() {
            if c as u128 > binomial_u128(m, w) {
                return Err(Error::InvalidArgument(format!(
                    "count {c} at weight {w} exceeds C({m},{w})"
                )));
            }
        }
        Ok(WeightEnumerator { m, counts })
    }

    pub(crate) fn from_counts_unchecked(m: usize, counts: Vec<u64>) -> Self {
        debug_assert_eq!(counts.len(), m + 1);
        WeightEnumerator { m, counts }
    }

    /// Size of the ground set.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `M` on the first line, then the counts on the second.
    pub fn dump(&self) -> String {
        let counts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        format!("{}\n{}\n", self.m, counts.join(" "))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let m: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty enumerator".into()))?
            .parse()
            .map_err(|_| Error::Parse("enumerator size is not an integer".into()))?;
        let counts = tokens
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad count {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        WeightEnumerator::new(m, counts).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        write!(f, "[{}]", counts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trip() {
        let e = WeightEnumerator::new(2, vec![0, 2, 1]).unwrap();
        assert_eq!(e.dump(), "2\n0 2 1\n");
        assert_eq!(WeightEnumerator::parse(&e.dump()).unwrap(), e);
        assert_eq!(e.total(), 3);
    }

    #[test]
    fn validation() {
        assert!(WeightEnumerator::new(2, vec![0, 3, 1]).is_err());
        assert!(WeightEnumerator::new(2, vec![0, 1]).is_err());
        assert!(WeightEnumerator::parse("2\n0 1 x").is_err());
        assert!(WeightEnumerator::parse("").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u128(63, 31), 916_312_070_471_295_267);
        assert_eq!(binomial_u128(5, 7), 0);
    }
}
