use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Finite union of disjoint closed intervals, kept sorted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSet<T> {
    intervals: Vec<[T; 2]>,
}

impl<T: Real> IntervalSet<T> {
    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    /// Normalizes arbitrary intervals; those closer than `merge_gap` are joined.
    pub fn from_intervals(mut raw: Vec<[T; 2]>, merge_gap: T) -> Self {
        raw.retain(|iv| iv[0] <= iv[1]);
        raw.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
        let mut out: Vec<[T; 2]> = Vec::with_capacity(raw.len());
        for iv in raw {
            match out.last_mut() {
                Some(last) if iv[0] - last[1] <= merge_gap => last[1] = last[1].max(iv[1]),
                _ => out.push(iv),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[[T; 2]] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> T {
        self.intervals.iter().fold(T::zero(), |acc, iv| acc + (iv[1] - iv[0]))
    }

    pub fn contains(&self, x: T) -> bool {
        let i = self.intervals.partition_point(|iv| iv[1] < x);
        i < self.intervals.len() && self.intervals[i][0] <= x
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::from_intervals(all, T::zero())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i][0].max(b[j][0]);
            let hi = a[i][1].min(b[j][1]);
            if lo <= hi {
                out.push([lo, hi]);
            }
            if a[i][1] < b[j][1] {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { intervals: out }
    }

    pub fn hull(&self) -> Option<[T; 2]> {
        Some([self.intervals.first()?[0], self.intervals.last()?[1]])
    }
}
