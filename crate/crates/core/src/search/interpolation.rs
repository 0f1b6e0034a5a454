use std::cmp::Ordering;

use super::{Cursor, NoopObserver, Outcome, SearchObserver, SearchResult};
use crate::instance::SortedInstance;

/// `bot + floor((key - a_bot) * (top - bot) / (a_top - a_bot))`, evaluated in
/// exact 128-bit integer arithmetic and clamped to `[bot, top]`.
///
/// Callers must rule out the degenerate segment (`bot == top` or
/// `a_bot == a_top`); in that case `bot` is returned.
pub fn interpolation_probe_index(bot: usize, top: usize, a_bot: i64, a_top: i64, key: i64) -> usize {
    debug_assert!(bot <= top);
    if top <= bot || a_top <= a_bot || key <= a_bot {
        return bot;
    }
    if key >= a_top {
        return top;
    }
    let rise = (key as i128 - a_bot as i128) as u128;
    let run = (a_top as i128 - a_bot as i128) as u128;
    let width = (top - bot) as u128;
    // rise < run, so the quotient is strictly below `width`.
    let offset = rise * width / run;
    bot + offset as usize
}

pub fn interpolation_search(instance: &SortedInstance, key: i64) -> SearchResult {
    interpolation_search_observed(instance, key, &mut NoopObserver)
}

/// Classic interpolation search between the two known fences.
pub fn interpolation_search_observed<O: SearchObserver + ?Sized>(
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
        let next = fences.interpolate(key);
        let (value, ord) = cursor.compare_at(next, fences.bot(), fences.top());
        if ord == Ordering::Equal {
            return cursor.finish(Outcome::Found(next));
        }
        fences.narrow(next, value, ord);
        cursor.shrunk(before, fences.len());
    }
    cursor.finish(Outcome::Absent)
}
