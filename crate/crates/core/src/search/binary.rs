use std::cmp::Ordering;

use super::{Cursor, NoopObserver, Outcome, SearchObserver, SearchResult};
use crate::instance::SortedInstance;

pub fn binary_search(instance: &SortedInstance, key: i64) -> SearchResult {
    binary_search_observed(instance, key, &mut NoopObserver)
}

/// Classic halving search: each pass probes `bot + (top - bot) / 2`.
pub fn binary_search_observed<O: SearchObserver + ?Sized>(
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
