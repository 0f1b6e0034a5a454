//! Static value-range bins with an ordered search inside each bin.
//!
//! The span `[x_1, x_n]` is cut into `n` bins of width `(x_n - x_1) / n`.
//! A bin owns the elements whose value falls in its range and also sees the
//! nearest element below and above that set, so a lookup touches exactly one
//! bin. Bins are contiguous windows of the source array; nothing is copied.

use std::cmp::Ordering;
use std::ops::{Range, RangeInclusive};

use thiserror::Error;

use crate::instance::SortedInstance;
use crate::search::{Cursor, NoopObserver, Outcome, Precheck, SearchObserver, SearchResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("need at least 2 elements, got {0}")]
pub struct BinnedError(pub usize);

/// Largest over smallest gap between adjacent elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoothnessDelta {
    pub max_gap: u64,
    pub min_gap: u64,
}

impl SmoothnessDelta {
    pub fn ratio(&self) -> f64 {
        self.max_gap as f64 / self.min_gap as f64
    }
}

pub fn smoothness_delta(instance: &SortedInstance) -> Result<SmoothnessDelta, BinnedError> {
    let (min_gap, max_gap) = instance
        .gaps()
        .fold(None, |acc: Option<(u64, u64)>, g| match acc {
            None => Some((g, g)),
            Some((lo, hi)) => Some((lo.min(g), hi.max(g))),
        })
        .ok_or(BinnedError(instance.len()))?;
    Ok(SmoothnessDelta { max_gap, min_gap })
}

#[derive(Debug, Clone)]
pub struct BinnedIndex {
    source: SortedInstance,
    /// `x_n - x_1`; bin width is `span / bin_count`.
    span: u128,
    /// Bin `i` owns positions `offsets[i]..offsets[i + 1]`.
    offsets: Vec<usize>,
    delta: SmoothnessDelta,
}

/// One bin: the positions it owns plus the inclusive window searched for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bin {
    pub own: Range<usize>,
    pub window: RangeInclusive<usize>,
}

pub fn build_binned_index(instance: &SortedInstance) -> Result<BinnedIndex, BinnedError> {
    BinnedIndex::new(instance.clone())
}

impl BinnedIndex {
    pub fn new(source: SortedInstance) -> Result<Self, BinnedError> {
        let delta = smoothness_delta(&source)?;
        let n = source.len();
        let span = (source.last() as i128 - source.first() as i128) as u128;
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut pos = 0;
        for bin in 0..n {
            while pos < n && Self::bin_of(source.first(), span, n, source[pos]) == bin {
                pos += 1;
            }
            offsets.push(pos);
        }
        debug_assert_eq!(pos, n);
        Ok(Self {
            source,
            span,
            offsets,
            delta,
        })
    }

    /// `floor((value - x_1) * n / (x_n - x_1))`, clamped to the last bin.
    fn bin_of(first: i64, span: u128, n: usize, value: i64) -> usize {
        let offset = (value as i128 - first as i128) as u128;
        // offset * n < 2^64 * 2^64 only fails for absurd n; saturate anyway
        let bin = offset.checked_mul(n as u128).map_or(u128::MAX, |p| p / span);
        bin.min(n as u128 - 1) as usize
    }

    pub fn bin_index(&self, key: i64) -> usize {
        if key <= self.source.first() {
            return 0;
        }
        Self::bin_of(self.source.first(), self.span, self.bin_count(), key)
    }

    pub fn bin_count(&self) -> usize {
        self.source.len()
    }

    /// Bin width as the exact fraction `(numerator, denominator)`.
    pub fn bin_width(&self) -> (u128, usize) {
        (self.span, self.bin_count())
    }

    pub fn delta(&self) -> SmoothnessDelta {
        self.delta
    }

    pub fn source(&self) -> &SortedInstance {
        &self.source
    }

    pub fn bin(&self, i: usize) -> Bin {
        let own = self.offsets[i]..self.offsets[i + 1];
        let last = self.source.len() - 1;
        let lo = own.start.saturating_sub(1);
        let hi = own.end.min(last);
        Bin { own, window: lo..=hi }
    }

    pub fn search(&self, key: i64) -> SearchResult {
        binned_search_observed(self, key, &mut NoopObserver)
    }
}

pub fn binned_search(index: &BinnedIndex, key: i64) -> SearchResult {
    index.search(key)
}

/// Boundary precheck, bin lookup, then binary search over the bin window.
pub fn binned_search_observed<O: SearchObserver + ?Sized>(
    index: &BinnedIndex,
    key: i64,
    observer: &mut O,
) -> SearchResult {
    let mut cursor = Cursor::new(&index.source, key, observer);
    match cursor.precheck() {
        Precheck::Outside => return cursor.finish(Outcome::Absent),
        Precheck::FoundAtBoundary(i) => return cursor.finish(Outcome::Found(i)),
        Precheck::Inside => {}
    }
    let window = index.bin(index.bin_index(key)).window;
    let (mut bot, mut top) = (*window.start(), *window.end());
    loop {
        cursor.iteration();
        let before = top - bot + 1;
        let mid = bot + (top - bot) / 2;
        let (_, ord) = cursor.compare_at(mid, bot, top);
        match ord {
            Ordering::Equal => return cursor.finish(Outcome::Found(mid)),
            Ordering::Greater if mid < top => bot = mid + 1,
            Ordering::Less if mid > bot => top = mid - 1,
            _ => {
                cursor.shrunk(before, 0);
                return cursor.finish(Outcome::Absent);
            }
        }
        cursor.shrunk(before, top - bot + 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::test_support::{linear_scan, Recorder};

    fn inst(v: &[i64]) -> SortedInstance {
        SortedInstance::new(v.to_vec()).unwrap()
    }

    /// Bin membership by exact rational comparison:
    /// `i * span <= (v - x1) * n < (i + 1) * span`, last bin closed.
    fn brute_force_bins(values: &[i64]) -> Vec<Vec<i64>> {
        let n = values.len() as i128;
        let x1 = values[0] as i128;
        let span = values[values.len() - 1] as i128 - x1;
        (0..n)
            .map(|i| {
                values
                    .iter()
                    .copied()
                    .filter(|&v| {
                        let scaled = (v as i128 - x1) * n;
                        let lower = i * span <= scaled;
                        let upper = scaled < (i + 1) * span || (i == n - 1 && scaled == n * span);
                        lower && upper
                    })
                    .collect()
            })
            .collect()
    }

    fn own_values(index: &BinnedIndex) -> Vec<Vec<i64>> {
        (0..index.bin_count())
            .map(|i| index.source()[index.bin(i).own].to_vec())
            .collect()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(smoothness_delta(&inst(&[10, 20, 30, 40])).unwrap().ratio(), 1.0);
        let d = smoothness_delta(&inst(&[2, 3, 5, 9])).unwrap();
        assert_eq!((d.max_gap, d.min_gap), (4, 1));
        assert_eq!(d.ratio(), 4.0);
        assert_eq!(smoothness_delta(&inst(&[0, 1])).unwrap().ratio(), 1.0);
        assert_eq!(smoothness_delta(&inst(&[5])), Err(BinnedError(1)));
    }

    #[test]
    fn bins_match_brute_force() {
        for values in [
            vec![0, 1, 2, 3],
            vec![1, 2, 3, 100],
            vec![-50, -3, 0, 1, 7, 8, 9, 400, 401],
            (0..40).map(|i| i * i).collect(),
        ] {
            let index = build_binned_index(&inst(&values)).unwrap();
            assert_eq!(own_values(&index), brute_force_bins(&values), "{values:?}");
        }
    }

    #[test]
    fn skewed_bins_carry_neighbours() {
        let index = build_binned_index(&inst(&[1, 2, 3, 100])).unwrap();
        assert_eq!(index.bin_width(), (99, 4));
        assert_eq!(index.bin(0).own, 0..3);
        assert_eq!(index.bin(3).own, 3..4);
        for empty in [1, 2] {
            let bin = index.bin(empty);
            assert!(bin.own.is_empty());
            assert_eq!(index.source()[bin.window].to_vec(), vec![3, 100]);
        }
    }

    #[test]
    fn uniform_gaps_one_element_per_bin() {
        let index = build_binned_index(&inst(&(0..50).map(|i| 7 + 3 * i).collect::<Vec<_>>())).unwrap();
        for i in 0..index.bin_count() {
            assert_eq!(index.bin(i).own.len(), 1);
            assert!(index.bin(i).window.clone().count() <= 3);
        }
    }

    #[test]
    fn uniform_member_lookup_reads_at_most_three_in_bin() {
        let values: Vec<i64> = (0..64).map(|i| 100 + 5 * i).collect();
        let index = build_binned_index(&inst(&values)).unwrap();
        for &key in &values {
            let mut rec = Recorder::default();
            let r = binned_search_observed(&index, key, &mut rec);
            assert!(r.outcome.is_found());
            // everything after the two precheck reads happens inside one bin
            assert!(rec.probes.len().saturating_sub(2) <= 3);
        }
    }

    #[test]
    fn out_of_range_is_constant_cost() {
        let index = build_binned_index(&inst(&[1, 2, 3, 100])).unwrap();
        let r = index.search(-5);
        assert_eq!(r.outcome, Outcome::Absent);
        assert_eq!(r.metrics.accesses, 1);
        assert_eq!(r.metrics.iterations, 0);
    }

    #[test]
    fn finds_in_dense_bin() {
        let index = build_binned_index(&inst(&[1, 2, 3, 100])).unwrap();
        assert_eq!(index.bin_index(2), 0);
        assert_eq!(index.search(2).outcome, Outcome::Found(1));
    }

    #[test]
    fn agrees_with_scan() {
        let values: Vec<i64> = (0..60).map(|i: i64| i * i * i / 9 + 2 * i).collect();
        let index = build_binned_index(&inst(&values)).unwrap();
        let s = inst(&values);
        for key in -3..(values[59] + 3) {
            assert_eq!(index.search(key).outcome, linear_scan(&s, key), "key {key}");
        }
    }

    #[test]
    fn singleton_rejected() {
        assert!(build_binned_index(&inst(&[4])).is_err());
    }
}
