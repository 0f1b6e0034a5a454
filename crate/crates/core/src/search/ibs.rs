use std::cmp::Ordering;

use super::{ceil_log2, Cursor, NoopObserver, Outcome, SearchObserver, SearchResult};
use crate::instance::SortedInstance;

/// Threshold knob for interpolation-binary search.
///
/// A live segment shorter than `theta * ceil(log2 n)` is searched with plain
/// binary steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IbsConfig {
    pub theta: u32,
}

impl Default for IbsConfig {
    fn default() -> Self {
        Self { theta: 2 }
    }
}

impl IbsConfig {
    pub fn threshold(&self, n: usize) -> usize {
        self.theta as usize * ceil_log2(n) as usize
    }
}

pub fn ibs_search(instance: &SortedInstance, key: i64, config: IbsConfig) -> SearchResult {
    ibs_search_observed(instance, key, config, &mut NoopObserver)
}

/// Interpolation-binary search. Above the threshold a pass is one
/// interpolation probe followed, unless it hit, by one binary probe on what
/// is left; below it a pass is a single binary probe.
///
/// # Panics
///
/// If `config.theta` is zero.
pub fn ibs_search_observed<O: SearchObserver + ?Sized>(
    instance: &SortedInstance,
    key: i64,
    config: IbsConfig,
    observer: &mut O,
) -> SearchResult {
    assert!(config.theta >= 1, "theta must be at least 1");
    let threshold = config.threshold(instance.len());
    let mut cursor = Cursor::new(instance, key, observer);
    let mut fences = match cursor.open() {
        Ok(f) => f,
        Err(outcome) => return cursor.finish(outcome),
    };
    while fences.len() > 0 {
        cursor.iteration();
        let before = fences.len();
        if before >= threshold {
            let next = fences.interpolate(key);
            let (value, ord) = cursor.compare_at(next, fences.bot(), fences.top());
            if ord == Ordering::Equal {
                return cursor.finish(Outcome::Found(next));
            }
            fences.narrow(next, value, ord);
            if fences.len() == 0 {
                cursor.shrunk(before, 0);
                break;
            }
        }
        let med = fences.median();
        let (value, ord) = cursor.compare_at(med, fences.bot(), fences.top());
        if ord == Ordering::Equal {
            return cursor.finish(Outcome::Found(med));
        }
        fences.narrow(med, value, ord);
        cursor.shrunk(before, fences.len());
    }
    cursor.finish(Outcome::Absent)
}
