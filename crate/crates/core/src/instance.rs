use std::ops::Deref;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("instance is empty")]
    Empty,
    #[error("not strictly increasing at position {position}: {previous} followed by {value}")]
    NotStrictlyIncreasing {
        position: usize,
        previous: i64,
        value: i64,
    },
}

/// A non-empty, strictly increasing sequence of 64-bit keys.
///
/// All search routines take the instance by shared reference; it is never
/// mutated after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortedInstance {
    values: Vec<i64>,
}

impl SortedInstance {
    pub fn new(values: Vec<i64>) -> Result<Self, InstanceError> {
        if values.is_empty() {
            return Err(InstanceError::Empty);
        }
        if let Some(position) = values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(InstanceError::NotStrictlyIncreasing {
                position: position + 1,
                previous: values[position],
                value: values[position + 1],
            });
        }
        Ok(Self { values })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut values: Vec<i64>) -> Result<Self, InstanceError> {
        values.sort_unstable();
        values.dedup();
        Self::new(values)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn as_slice(&self) -> &[i64] {
        &self.values
    }

    pub fn first(&self) -> i64 {
        self.values[0]
    }

    pub fn last(&self) -> i64 {
        self.values[self.values.len() - 1]
    }

    /// Consecutive differences `values[i+1] - values[i]`, all at least 1.
    pub fn gaps(&self) -> impl ExactSizeIterator<Item = u64> + '_ {
        self.values
            .windows(2)
            .map(|w| (w[1] as i128 - w[0] as i128) as u64)
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.values
    }
}

impl Deref for SortedInstance {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.values
    }
}

impl TryFrom<Vec<i64>> for SortedInstance {
    type Error = InstanceError;

    fn try_from(values: Vec<i64>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}
