use std::cmp::Ordering;

use super::{AdaptiveBranch, Cursor, NoopObserver, Outcome, SearchObserver, SearchResult};
use crate::instance::SortedInstance;

pub fn adaptive_search(instance: &SortedInstance, key: i64) -> SearchResult {
    adaptive_search_observed(instance, key, &mut NoopObserver)
}

/// Adaptive search.
///
/// Each pass probes the interpolation point and clips the live segment to
/// the side that can hold the key. If the clipped segment still holds more
/// than half of the live segment, its median is probed too and the segment
/// is halved again. Every pass therefore at least halves the live segment,
/// reads at most two elements, and behaves exactly like interpolation
/// search whenever interpolation already clips tightly.
pub fn adaptive_search_observed<O: SearchObserver + ?Sized>(
    instance: &SortedInstance,
    key: i64,
    observer: &mut O,
) -> SearchResult {
    let mut cursor = Cursor::new(instance, key, observer);
    let mut fences = match cursor.open() {
        Ok(f) => f,
        Err(outcome) => return cursor.finish(outcome),
    };
    while fences.len() > 0 {
        cursor.iteration();
        let before = fences.len();
        let (bot, top) = (fences.bot(), fences.top());

        let next = fences.interpolate(key);
        let (value, ord) = cursor.compare_at(next, bot, top);
        if ord == Ordering::Equal {
            cursor.branch(AdaptiveBranch::Interpolation);
            return cursor.finish(Outcome::Found(next));
        }
        fences.narrow(next, value, ord);

        if 2 * fences.len() > before {
            cursor.branch(AdaptiveBranch::Median);
            let med = fences.median();
            let (value, ord) = cursor.compare_at(med, fences.bot(), fences.top());
            if ord == Ordering::Equal {
                return cursor.finish(Outcome::Found(med));
            }
            fences.narrow(med, value, ord);
        } else {
            cursor.branch(AdaptiveBranch::Interpolation);
        }
        cursor.shrunk(before, fences.len());
    }
    cursor.finish(Outcome::Absent)
}
