//! Instrumented membership search over a [`SortedInstance`].
//!
//! Every algorithm reads elements exclusively through [`probe`], so the
//! access counter is exact. After the boundary precheck the algorithms keep
//! two *fences* `lo < hi` whose values are already known and satisfy
//! `A[lo] < key < A[hi]`; the live segment is `[lo + 1, hi - 1]`. Fence values
//! come from earlier probes, so moving a fence never costs an extra read.

mod adaptive;
mod binary;
mod ibs;
mod interpolation;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::instance::SortedInstance;

pub use adaptive::{adaptive_search, adaptive_search_observed};
pub use binary::{binary_search, binary_search_observed};
pub use ibs::{ibs_search, ibs_search_observed, IbsConfig};
pub use interpolation::{interpolation_probe_index, interpolation_search, interpolation_search_observed};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ProbeMetrics {
    /// Element reads.
    pub accesses: u64,
    /// Main-loop passes.
    pub iterations: u64,
    /// Three-way key-vs-element comparisons.
    pub comparisons: u64,
}

impl std::ops::AddAssign for ProbeMetrics {
    fn add_assign(&mut self, rhs: Self) {
        self.accesses += rhs.accesses;
        self.iterations += rhs.iterations;
        self.comparisons += rhs.comparisons;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Found(usize),
    Absent,
}

impl Outcome {
    pub fn is_found(self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn index(self) -> Option<usize> {
        match self {
            Outcome::Found(i) => Some(i),
            Outcome::Absent => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub metrics: ProbeMetrics,
}

/// Which choice an adaptive-search iteration made.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdaptiveBranch {
    /// The clipped segment was at most half the live segment.
    Interpolation,
    /// The clipped segment was too large; its median was probed as well.
    Median,
}

/// Hooks for tracing a search. All methods default to no-ops.
pub trait SearchObserver {
    /// `index` is about to be read while the live segment is `[bot, top]`.
    fn on_probe(&mut self, _index: usize, _bot: usize, _top: usize) {}

    /// A main-loop pass finished without finding the key; the live segment
    /// shrank from `len_before` to `len_after` elements.
    fn on_iteration(&mut self, _len_before: usize, _len_after: usize) {}

    fn on_adaptive_branch(&mut self, _branch: AdaptiveBranch) {}
}

#[derive(Debug, Default, Clone, Copy)]
pub struct NoopObserver;

impl SearchObserver for NoopObserver {}

/// Reads `instance[index]` and charges one access.
///
/// # Panics
///
/// If `index` is out of bounds.
#[inline]
pub fn probe(instance: &SortedInstance, index: usize, metrics: &mut ProbeMetrics) -> i64 {
    metrics.accesses += 1;
    instance[index]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precheck {
    Inside,
    Outside,
    FoundAtBoundary(usize),
}

/// Compares `key` against the first and last element.
pub fn range_precheck(instance: &SortedInstance, key: i64, metrics: &mut ProbeMetrics) -> Precheck {
    let mut observer = NoopObserver;
    let mut cursor = Cursor::new(instance, key, &mut observer);
    let verdict = cursor.precheck();
    *metrics += cursor.metrics;
    verdict
}

/// Shared probing state for one query.
pub(crate) struct Cursor<'a, O: SearchObserver + ?Sized> {
    instance: &'a SortedInstance,
    key: i64,
    pub(crate) metrics: ProbeMetrics,
    observer: &'a mut O,
}

impl<'a, O: SearchObserver + ?Sized> Cursor<'a, O> {
    pub(crate) fn new(instance: &'a SortedInstance, key: i64, observer: &'a mut O) -> Self {
        Self {
            instance,
            key,
            metrics: ProbeMetrics::default(),
            observer,
        }
    }

    /// Reads `index` and three-way compares the key against it.
    #[inline]
    pub(crate) fn compare_at(&mut self, index: usize, bot: usize, top: usize) -> (i64, Ordering) {
        debug_assert!(bot <= index && index <= top, "probe {index} outside [{bot}, {top}]");
        self.observer.on_probe(index, bot, top);
        let value = probe(self.instance, index, &mut self.metrics);
        self.metrics.comparisons += 1;
        (value, self.key.cmp(&value))
    }

    pub(crate) fn precheck(&mut self) -> Precheck {
        let last = self.instance.len() - 1;
        match self.compare_at(0, 0, last).1 {
            Ordering::Less => return Precheck::Outside,
            Ordering::Equal => return Precheck::FoundAtBoundary(0),
            Ordering::Greater if last == 0 => return Precheck::Outside,
            Ordering::Greater => {}
        }
        match self.compare_at(last, 0, last).1 {
            Ordering::Greater => Precheck::Outside,
            Ordering::Equal => Precheck::FoundAtBoundary(last),
            Ordering::Less => Precheck::Inside,
        }
    }

    #[inline]
    pub(crate) fn iteration(&mut self) {
        self.metrics.iterations += 1;
    }

    #[inline]
    pub(crate) fn shrunk(&mut self, len_before: usize, len_after: usize) {
        self.observer.on_iteration(len_before, len_after);
    }

    #[inline]
    pub(crate) fn branch(&mut self, branch: AdaptiveBranch) {
        self.observer.on_adaptive_branch(branch);
    }

    pub(crate) fn finish(self, outcome: Outcome) -> SearchResult {
        SearchResult {
            outcome,
            metrics: self.metrics,
        }
    }
}

impl<O: SearchObserver + ?Sized> Cursor<'_, O> {
    /// Runs the precheck and, if the key lies strictly inside the range,
    /// returns the initial fences `(0, n - 1)` with their values.
    pub(crate) fn open(&mut self) -> Result<Fences, Outcome> {
        match self.precheck() {
            Precheck::Outside => Err(Outcome::Absent),
            Precheck::FoundAtBoundary(i) => Err(Outcome::Found(i)),
            Precheck::Inside => {
                let last = self.instance.len() - 1;
                Ok(Fences {
                    lo: 0,
                    hi: last,
                    lo_value: self.instance[0],
                    hi_value: self.instance[last],
                })
            }
        }
    }
}

/// Exclusive bounds of the live segment with their already-read values.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fences {
    pub lo: usize,
    pub hi: usize,
    pub lo_value: i64,
    pub hi_value: i64,
}

impl Fences {
    /// Number of candidates strictly between the fences.
    #[inline]
    pub fn len(&self) -> usize {
        self.hi - self.lo - 1
    }

    #[inline]
    pub fn bot(&self) -> usize {
        self.lo + 1
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.hi - 1
    }

    #[inline]
    pub fn median(&self) -> usize {
        self.bot() + (self.top() - self.bot()) / 2
    }

    /// Narrows to the side of `index` that can still hold the key.
    /// `ord` is `key.cmp(&value)` and must not be `Equal`.
    #[inline]
    pub fn narrow(&mut self, index: usize, value: i64, ord: Ordering) {
        match ord {
            Ordering::Greater => {
                self.lo = index;
                self.lo_value = value;
            }
            Ordering::Less => {
                self.hi = index;
                self.hi_value = value;
            }
            Ordering::Equal => unreachable!("narrow called on a hit"),
        }
    }

    /// Interpolated candidate clamped into the live segment.
    #[inline]
    pub fn interpolate(&self, key: i64) -> usize {
        interpolation_probe_index(self.lo, self.hi, self.lo_value, self.hi_value, key)
            .clamp(self.bot(), self.top())
    }
}

/// The algorithms compared by the benchmark harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Binary,
    Interpolation,
    InterpolationBinary { theta: u32 },
    Adaptive,
    Binned,
}

impl Algorithm {
    /// The four array searches, with the interpolation-binary threshold at 2.
    pub const STANDARD: [Algorithm; 4] = [
        Algorithm::Binary,
        Algorithm::Interpolation,
        Algorithm::InterpolationBinary { theta: 2 },
        Algorithm::Adaptive,
    ];

    /// Runs one query. Panics for [`Algorithm::Binned`], which needs a
    /// prebuilt [`crate::binned::BinnedIndex`].
    pub fn search(self, instance: &SortedInstance, key: i64) -> SearchResult {
        self.search_observed(instance, key, &mut NoopObserver)
    }

    pub fn search_observed<O: SearchObserver + ?Sized>(
        self,
        instance: &SortedInstance,
        key: i64,
        observer: &mut O,
    ) -> SearchResult {
        match self {
            Algorithm::Binary => binary_search_observed(instance, key, observer),
            Algorithm::Interpolation => interpolation_search_observed(instance, key, observer),
            Algorithm::InterpolationBinary { theta } => {
                ibs_search_observed(instance, key, IbsConfig { theta }, observer)
            }
            Algorithm::Adaptive => adaptive_search_observed(instance, key, observer),
            Algorithm::Binned => panic!("binned search runs on a BinnedIndex"),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Binary => f.write_str("BS"),
            Algorithm::Interpolation => f.write_str("IS"),
            Algorithm::InterpolationBinary { theta } => write!(f, "IBS{theta}"),
            Algorithm::Adaptive => f.write_str("AS"),
            Algorithm::Binned => f.write_str("BINNED"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown algorithm {0:?} (expected bs, is, ibs<theta>, as or binned)")]
pub struct ParseAlgorithmError(pub String);

impl FromStr for Algorithm {
    type Err = ParseAlgorithmError;

    /// Accepts `bs`, `is`, `as`, `binned`, `ibs` (theta 2) and `ibs<theta>`,
    /// case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let algo = match lower.as_str() {
            "bs" | "binary" => Algorithm::Binary,
            "is" | "interpolation" => Algorithm::Interpolation,
            "as" | "adaptive" => Algorithm::Adaptive,
            "binned" => Algorithm::Binned,
            "ibs" => Algorithm::InterpolationBinary { theta: 2 },
            other => match other.strip_prefix("ibs").map(str::parse::<u32>) {
                Some(Ok(theta)) if theta >= 1 => Algorithm::InterpolationBinary { theta },
                _ => return Err(ParseAlgorithmError(s.to_string())),
            },
        };
        Ok(algo)
    }
}

/// Ceiling of log2, with `ceil_log2(1) == 0`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}
