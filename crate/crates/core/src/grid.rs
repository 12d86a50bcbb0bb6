//! Rational simplex grids: all ways of splitting `total` units among `parts`
//! cells, in lexicographic order.

/// Iterator over weak compositions of `total` into `parts` nonnegative parts.
///
/// The first composition yielded is `[total, 0, …, 0]`; the sequence is
/// lexicographically decreasing.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(total: u32, parts: usize) -> Self {
        assert!(parts > 0, "at least one part");
        let mut first = vec![0; parts];
        first[0] = total;
        Self {
            current: Some(first),
        }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let parts = out.len();
        // Find the rightmost nonzero entry that is not the last one, move one
        // unit right and gather the tail behind it.
        let mut next = out.clone();
        let pivot = (0..parts.saturating_sub(1)).rev().find(|&i| next[i] > 0);
        if let Some(i) = pivot {
            next[i] -= 1;
            let tail: u32 = next[i + 1..].iter().sum::<u32>() + 1;
            next[i + 1..].iter_mut().for_each(|x| *x = 0);
            next[i + 1] = tail;
            self.current = Some(next);
        }
        Some(out)
    }
}

/// Number of weak compositions, `C(total + parts − 1, parts − 1)`.
pub fn composition_count(total: u32, parts: usize) -> u64 {
    let (n, k) = (total as u64 + parts as u64 - 1, parts as u64 - 1);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
