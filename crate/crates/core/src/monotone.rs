//! Enumeration of all increasing events on `{0,1}^n`.
//!
//! An up-set on `n` coordinates splits into its restrictions to `x_n = 0`
//! (low half of the bit-vector) and `x_n = 1` (high half). Both halves are
//! up-sets on `n - 1` coordinates and the low half is contained in the high
//! half; every such nested pair arises exactly once. Iterating the high half
//! in the outer loop yields the events ascending by bit-vector value.

use std::sync::OnceLock;

use crate::cube::{cube_mask, IncreasingEvent};
use crate::error::{Error, Result};

/// Largest dimension the stream can enumerate (Dedekind number 7,828,354).
pub const MAX_ENUM_DIM: usize = 6;
/// Largest dimension whose events are cached as a list.
pub const MAX_LISTED_DIM: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumConfig {
    pub n: usize,
    pub include_empty: bool,
    pub include_full: bool,
}

impl EnumConfig {
    /// Every increasing event, ∅ and Ω included.
    pub fn all(n: usize) -> EnumConfig {
        EnumConfig { n, include_empty: true, include_full: true }
    }

    /// Nonempty increasing events only.
    pub fn nonempty(n: usize) -> EnumConfig {
        EnumConfig { n, include_empty: false, include_full: true }
    }
}

fn build(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0, 1];
    }
    let prev = increasing_masks(n - 1);
    let half = 1u32 << (n - 1);
    let mut out = Vec::new();
    for &hi in prev {
        for &lo in prev {
            if lo & !hi == 0 {
                out.push(lo | hi << half);
            }
        }
    }
    out
}

/// Membership masks of all increasing events for `n <= 5`, ascending.
pub fn increasing_masks(n: usize) -> &'static [u64] {
    static CACHE: [OnceLock<Vec<u64>>; MAX_LISTED_DIM + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    assert!(n <= MAX_LISTED_DIM, "listed enumeration supports n <= {MAX_LISTED_DIM}");
    CACHE[n].get_or_init(|| build(n))
}

/// Masks of the nonempty increasing events, ascending.
pub fn nonempty_masks(n: usize) -> &'static [u64] {
    &increasing_masks(n)[1..]
}

/// For `n = 6`: `starts[k]` is the position of the first event whose high
/// half is the `k`-th 5-dimensional up-set.
fn six_starts() -> &'static [usize] {
    static STARTS: OnceLock<Vec<usize>> = OnceLock::new();
    STARTS.get_or_init(|| {
        let prev = increasing_masks(5);
        let mut starts = Vec::with_capacity(prev.len() + 1);
        let mut acc = 0;
        starts.push(0);
        for &hi in prev {
            acc += prev.iter().filter(|&&lo| lo & !hi == 0).count();
            starts.push(acc);
        }
        starts
    })
}

fn check_enum_dim(n: usize) -> Result<()> {
    if n > MAX_ENUM_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 0, max: MAX_ENUM_DIM });
    }
    Ok(())
}

/// Dedekind number: the number of increasing events on `n` coordinates,
/// counted as nested pairs of `(n-1)`-dimensional ones.
pub fn count_increasing(n: usize) -> Result<u64> {
    check_enum_dim(n)?;
    if n == 0 {
        return Ok(2);
    }
    let prev = increasing_masks(n - 1);
    let pairs = prev
        .iter()
        .map(|&hi| prev.iter().filter(|&&lo| lo & !hi == 0).count() as u64)
        .sum();
    Ok(pairs)
}

/// An ordered, restartable stream over a contiguous range of the canonical
/// enumeration.
#[derive(Clone, Debug)]
pub struct IncreasingStream {
    n: usize,
    /// Absolute positions in the unfiltered enumeration.
    pos: usize,
    end: usize,
    /// Offset of the first filtered element, so relative indices can be mapped.
    base: usize,
    cursor: Option<(usize, usize)>,
}

pub fn enumerate_increasing(cfg: &EnumConfig) -> Result<IncreasingStream> {
    check_enum_dim(cfg.n)?;
    let total = count_increasing(cfg.n)? as usize;
    let base = usize::from(!cfg.include_empty);
    let end = total - usize::from(!cfg.include_full);
    Ok(IncreasingStream { n: cfg.n, pos: base, end, base, cursor: None })
}

impl IncreasingStream {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Remaining elements.
    pub fn remaining(&self) -> usize {
        self.end - self.pos
    }

    /// The sub-stream `[start, end)` in positions relative to the filtered
    /// enumeration (clamped to what this stream covers).
    pub fn range(&self, start: usize, end: usize) -> IncreasingStream {
        let lo = (self.base + start).clamp(self.pos, self.end);
        let hi = (self.base + end).clamp(lo, self.end);
        IncreasingStream { n: self.n, pos: lo, end: hi, base: self.base, cursor: None }
    }

    /// Splits the remaining elements into `parts` contiguous, near-equal ranges.
    pub fn split(&self, parts: usize) -> Vec<IncreasingStream> {
        let parts = parts.max(1);
        let len = self.remaining();
        let rel0 = self.pos - self.base;
        (0..parts)
            .map(|k| self.range(rel0 + len * k / parts, rel0 + len * (k + 1) / parts))
            .collect()
    }

    pub fn masks(self) -> impl Iterator<Item = u64> {
        let mut s = self;
        std::iter::from_fn(move || s.next_mask())
    }

    fn next_mask(&mut self) -> Option<u64> {
        if self.pos >= self.end {
            return None;
        }
        let mask = if self.n <= MAX_LISTED_DIM {
            increasing_masks(self.n)[self.pos]
        } else {
            self.next_six()
        };
        self.pos += 1;
        Some(mask)
    }

    fn next_six(&mut self) -> u64 {
        let prev = increasing_masks(5);
        let (hi, lo) = match self.cursor {
            Some((hi, lo)) => {
                let mut lo = lo + 1;
                let mut hi = hi;
                loop {
                    if lo == prev.len() {
                        hi += 1;
                        lo = 0;
                    }
                    if prev[lo] & !prev[hi] == 0 {
                        break (hi, lo);
                    }
                    lo += 1;
                }
            }
            None => {
                let starts = six_starts();
                let hi = starts.partition_point(|&s| s <= self.pos) - 1;
                let mut skip = self.pos - starts[hi];
                let lo = prev
                    .iter()
                    .position(|&lo| {
                        if lo & !prev[hi] != 0 {
                            return false;
                        }
                        if skip == 0 {
                            return true;
                        }
                        skip -= 1;
                        false
                    })
                    .expect("position inside the high half's block");
                (hi, lo)
            }
        };
        self.cursor = Some((hi, lo));
        prev[lo] | prev[hi] << 32
    }
}

impl Iterator for IncreasingStream {
    type Item = IncreasingEvent;

    fn next(&mut self) -> Option<IncreasingEvent> {
        let mask = self.next_mask()?;
        debug_assert_eq!(mask & !cube_mask(self.n), 0);
        Some(IncreasingEvent::from_mask(self.n, mask).expect("enumerated masks are up-closed"))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining(), Some(self.remaining()))
    }
}

impl ExactSizeIterator for IncreasingStream {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Event;

    /// All up-closed subsets of the n-cube, by filtering every subset.
    fn brute_force(n: usize) -> Vec<u64> {
        let points = 1u64 << n;
        (0..1u64 << points)
            .filter(|&mask| {
                (0..points).all(|x| {
                    mask >> x & 1 == 0 || (0..n).all(|i| mask >> (x | 1 << i) & 1 == 1)
                })
            })
            .collect()
    }

    #[test]
    fn matches_brute_force_filter() {
        for n in 0..=4 {
            assert_eq!(increasing_masks(n), brute_force(n).as_slice(), "n={n}");
        }
    }

    #[test]
    fn dedekind_counts() {
        let counts: Vec<u64> = (0..=6).map(|n| count_increasing(n).unwrap()).collect();
        assert_eq!(counts, vec![2, 3, 6, 20, 168, 7581, 7_828_354]);
        assert!(matches!(count_increasing(7), Err(Error::DimensionOutOfRange { .. })));
    }

    #[test]
    fn stream_examples() {
        assert_eq!(enumerate_increasing(&EnumConfig::all(1)).unwrap().count(), 3);
        assert_eq!(enumerate_increasing(&EnumConfig::all(3)).unwrap().count(), 20);
        assert_eq!(enumerate_increasing(&EnumConfig::all(5)).unwrap().count(), 7581);
        assert!(enumerate_increasing(&EnumConfig::all(7)).is_err());
    }

    #[test]
    fn flags_filter_the_ends() {
        let none = EnumConfig { n: 2, include_empty: false, include_full: false };
        let evs: Vec<_> = enumerate_increasing(&none).unwrap().collect();
        assert_eq!(evs.len(), 4);
        assert!(evs.iter().all(|e| !e.is_empty() && !e.is_full()));
        let nonempty: Vec<_> = enumerate_increasing(&EnumConfig::nonempty(2)).unwrap().collect();
        assert_eq!(nonempty.len(), 5);
        assert!(nonempty.last().unwrap().is_full());
    }

    #[test]
    fn stream_is_ascending_and_up_closed() {
        for n in 0..=5 {
            let masks: Vec<u64> = enumerate_increasing(&EnumConfig::all(n)).unwrap().masks().collect();
            assert!(masks.windows(2).all(|w| w[0] < w[1]));
            for &m in &masks {
                assert!(IncreasingEvent::try_from(Event::from_mask(n, m).unwrap()).is_ok());
            }
        }
    }

    #[test]
    fn partitions_concatenate_to_the_whole() {
        let cfg = EnumConfig::nonempty(4);
        let whole: Vec<u64> = enumerate_increasing(&cfg).unwrap().masks().collect();
        for parts in [1, 3, 8, 200] {
            let joined: Vec<u64> = enumerate_increasing(&cfg)
                .unwrap()
                .split(parts)
                .into_iter()
                .flat_map(|s| s.masks())
                .collect();
            assert_eq!(joined, whole, "parts={parts}");
        }
    }

    #[test]
    fn six_dimensional_stream_restarts_anywhere() {
        let stream = enumerate_increasing(&EnumConfig::all(6)).unwrap();
        assert_eq!(stream.remaining(), 7_828_354);
        let head: Vec<u64> = stream.range(0, 2000).masks().collect();
        assert!(head.windows(2).all(|w| w[0] < w[1]));
        // restart mid-way and across a block boundary
        for start in [0usize, 1, 17, 999, 1234] {
            let tail: Vec<u64> = stream.range(start, 2000).masks().collect();
            assert_eq!(tail.as_slice(), &head[start..]);
        }
        let last: Vec<u64> = stream.range(7_828_352, 7_828_354).masks().collect();
        assert_eq!(last[1], u64::MAX);
        assert!(last[0] < last[1]);
        for m in head.iter().chain(&last) {
            assert!(IncreasingEvent::from_mask(6, *m).is_ok());
        }
    }
}
