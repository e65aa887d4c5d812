//! Step functions and finite interval unions on the half-open unit interval.
//!
//! Both types keep their breakpoints sorted; binary operations refine two
//! partitions to a common one by merging the breakpoint lists, so the piece
//! count of a result never exceeds the sum of the input piece counts.

use serde::{Deserialize, Serialize};

/// Breakpoints closer than this are identified when refining partitions.
pub const BREAK_EPS: f64 = 1e-13;

/// Tolerance on the sum of piece lengths when a partition is read from lengths.
pub const LENGTH_SUM_TOL: f64 = 1e-9;

/// A piecewise-constant function on `[0, 1)`.
///
/// `breaks` starts at `0`, ends at `1` and strictly increases; piece `i` is
/// `[breaks[i], breaks[i + 1])` and carries `values[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breaks: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn constant(value: f64) -> Self {
        StepFunction {
            breaks: vec![0.0, 1.0],
            values: vec![value],
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// Builds a step function from explicit breakpoints.
    pub fn from_breaks(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self, String> {
        if breaks.len() != values.len() + 1 || values.is_empty() {
            return Err(format!(
                "{} breakpoints cannot carry {} values",
                breaks.len(),
                values.len()
            ));
        }
        if breaks[0] != 0.0 || *breaks.last().unwrap() != 1.0 {
            return Err("breakpoints must start at 0 and end at 1".into());
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err("breakpoints must strictly increase".into());
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(format!("non-finite value {v}"));
        }
        Ok(StepFunction { breaks, values })
    }

    /// Builds a step function from consecutive `(length, value)` pieces.
    ///
    /// Lengths must be non-negative and sum to one within [`LENGTH_SUM_TOL`];
    /// zero-length pieces are dropped and the last breakpoint is pinned to 1.
    pub fn from_lengths(pieces: &[(f64, f64)]) -> Result<Self, String> {
        let mut breaks = vec![0.0];
        let mut values = Vec::with_capacity(pieces.len());
        let mut acc = 0.0;
        for &(len, value) in pieces {
            if !len.is_finite() || len < 0.0 {
                return Err(format!("invalid piece length {len}"));
            }
            if !value.is_finite() {
                return Err(format!("non-finite value {value}"));
            }
            if len == 0.0 {
                continue;
            }
            acc += len;
            breaks.push(acc);
            values.push(value);
        }
        if values.is_empty() || (acc - 1.0).abs() > LENGTH_SUM_TOL {
            return Err(format!("piece lengths sum to {acc}, expected 1"));
        }
        *breaks.last_mut().unwrap() = 1.0;
        // Drop slivers created by pinning the last breakpoint.
        let mut out_b = vec![0.0];
        let mut out_v = Vec::with_capacity(values.len());
        for (i, &v) in values.iter().enumerate() {
            let end = breaks[i + 1];
            if end - out_b.last().unwrap() <= 0.0 {
                continue;
            }
            out_b.push(end);
            out_v.push(v);
        }
        Ok(StepFunction {
            breaks: out_b,
            values: out_v,
        })
    }

    /// Assembles a function from placed pieces `(start, end, value)` that do
    /// not overlap; gaps are filled with zero.
    pub fn from_placed_pieces(mut pieces: Vec<(f64, f64, f64)>) -> Self {
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut breaks = vec![0.0];
        let mut values = Vec::new();
        let push = |end: f64, value: f64, breaks: &mut Vec<f64>, values: &mut Vec<f64>| {
            let end = end.min(1.0);
            let last = *breaks.last().unwrap();
            if end - last < BREAK_EPS {
                return;
            }
            breaks.push(end);
            values.push(value);
        };
        for (start, end, value) in pieces {
            let last = *breaks.last().unwrap();
            if start - last >= BREAK_EPS {
                push(start, 0.0, &mut breaks, &mut values);
            }
            push(end, value, &mut breaks, &mut values);
        }
        let last = *breaks.last().unwrap();
        if 1.0 - last >= BREAK_EPS {
            push(1.0, 0.0, &mut breaks, &mut values);
        }
        if values.is_empty() {
            return Self::zero();
        }
        *breaks.last_mut().unwrap() = 1.0;
        StepFunction { breaks, values }
    }

    /// Indicator function of an interval set.
    pub fn indicator(set: &IntervalSet) -> Self {
        Self::from_placed_pieces(set.parts.iter().map(|&(a, b)| (a, b, 1.0)).collect())
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.values.len()
    }

    /// Iterates `(start, end, value)` over the pieces.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.breaks[i], self.breaks[i + 1], v))
    }

    /// `(length, value)` pairs, the serialized form.
    pub fn lengths(&self) -> Vec<(f64, f64)> {
        self.pieces().map(|(a, b, v)| (b - a, v)).collect()
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let idx = self.breaks.partition_point(|&b| b <= x);
        let idx = idx.clamp(1, self.values.len());
        self.values[idx - 1]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        StepFunction {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination on the common refinement of both partitions.
    pub fn zip_with(&self, other: &StepFunction, f: impl Fn(f64, f64) -> f64) -> Self {
        let breaks = merge_breaks(&self.breaks, &other.breaks);
        let mut values = Vec::with_capacity(breaks.len() - 1);
        let (mut i, mut j) = (0usize, 0usize);
        for w in breaks.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            while i + 1 < self.values.len() && self.breaks[i + 1] <= mid {
                i += 1;
            }
            while j + 1 < other.values.len() && other.breaks[j + 1] <= mid {
                j += 1;
            }
            values.push(f(self.values[i], other.values[j]));
        }
        StepFunction { breaks, values }
    }

    /// `Σ length · g(value)` over the pieces.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.pieces().map(|(a, b, v)| (b - a) * g(v)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &StepFunction) -> f64 {
        self.zip_with(other, |a, b| a - b).max_abs()
    }

    /// Merges adjacent pieces carrying identical values.
    pub fn simplified(&self) -> Self {
        let mut breaks = vec![0.0];
        let mut values: Vec<f64> = Vec::new();
        for (_, end, v) in self.pieces() {
            if values.last() == Some(&v) {
                *breaks.last_mut().unwrap() = end;
            } else {
                breaks.push(end);
                values.push(v);
            }
        }
        StepFunction { breaks, values }
    }

    /// Union of the pieces whose value exceeds `tol` in absolute value.
    pub fn support(&self, tol: f64) -> IntervalSet {
        IntervalSet::normalized(
            self.pieces()
                .filter(|&(_, _, v)| v.abs() > tol)
                .map(|(a, b, _)| (a, b))
                .collect(),
        )
    }

    /// Restricts the function to `[src_start, src_start + src_len)` and maps
    /// that window affinely onto `[dst_start, dst_start + dst_len)`.
    pub fn transport_window(
        &self,
        src_start: f64,
        src_len: f64,
        dst_start: f64,
        dst_len: f64,
    ) -> Vec<(f64, f64, f64)> {
        let src_end = src_start + src_len;
        let scale = dst_len / src_len;
        let map = |x: f64| dst_start + (x - src_start) * scale;
        let mut out = Vec::new();
        for (a, b, v) in self.pieces() {
            let lo = a.max(src_start);
            let hi = b.min(src_end);
            if hi - lo <= 0.0 {
                continue;
            }
            let (ta, tb) = (map(lo), map(hi));
            let tb = if hi == src_end { dst_start + dst_len } else { tb };
            out.push((ta, tb, v));
        }
        out
    }
}

fn merge_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = if j >= b.len() || (i < a.len() && a[i] <= b[j]) {
            i += 1;
            a[i - 1]
        } else {
            j += 1;
            b[j - 1]
        };
        match out.last() {
            Some(&last) if next - last < BREAK_EPS => {}
            _ => out.push(next),
        }
    }
    // The merge may have swallowed 1 into a nearby breakpoint.
    let n = out.len();
    if out[n - 1] != 1.0 {
        if n >= 2 && 1.0 - out[n - 1] < BREAK_EPS {
            out[n - 1] = 1.0;
        } else {
            out.push(1.0);
        }
    }
    out
}

/// A finite union of disjoint half-open subintervals of `[0, 1)`.
///
/// Parts are sorted, non-empty, and separated by gaps of at least
/// [`BREAK_EPS`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct IntervalSet {
    parts: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn full() -> Self {
        IntervalSet {
            parts: vec![(0.0, 1.0)],
        }
    }

    /// Validated constructor: endpoints in `[0, 1]`, `start <= end`, and no
    /// two parts overlap. Touching parts are merged.
    pub fn new(mut parts: Vec<(f64, f64)>) -> Result<Self, String> {
        for &(a, b) in &parts {
            if !(a.is_finite() && b.is_finite()) || a < 0.0 || b > 1.0 || a > b {
                return Err(format!("interval [{a}, {b}) is not a subinterval of [0, 1)"));
            }
        }
        parts.retain(|&(a, b)| b > a);
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in parts.windows(2) {
            if w[1].0 < w[0].1 - BREAK_EPS {
                return Err(format!(
                    "intervals [{}, {}) and [{}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                ));
            }
        }
        Ok(Self::normalized(parts))
    }

    /// Sorts, drops slivers and merges touching parts. Assumes the input is
    /// already disjoint up to [`BREAK_EPS`].
    pub(crate) fn normalized(mut parts: Vec<(f64, f64)>) -> Self {
        parts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            let (a, b) = (a.clamp(0.0, 1.0), b.clamp(0.0, 1.0));
            if b - a < BREAK_EPS {
                continue;
            }
            match out.last_mut() {
                Some(last) if a - last.1 < BREAK_EPS => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        IntervalSet { parts: out }
    }

    pub fn parts(&self) -> &[(f64, f64)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.parts.iter().map(|(a, b)| b - a).sum()
    }

    pub fn is_full(&self) -> bool {
        (self.length() - 1.0).abs() < 1e-12
    }

    pub fn union(&self, other: &IntervalSet) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &IntervalSet) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &IntervalSet) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        IntervalSet::full().difference(self)
    }

    fn combine(&self, other: &IntervalSet, op: impl Fn(bool, bool) -> bool) -> Self {
        let f = StepFunction::indicator(self);
        let g = StepFunction::indicator(other);
        f.zip_with(&g, |x, y| if op(x != 0.0, y != 0.0) { 1.0 } else { 0.0 })
            .support(0.5)
    }

    /// Largest endpoint discrepancy under the symmetric difference, i.e. the
    /// length of the symmetric difference.
    pub fn symmetric_difference_length(&self, other: &IntervalSet) -> f64 {
        self.combine(other, |a, b| a != b).length()
    }

    pub fn approx_eq(&self, other: &IntervalSet, tol: f64) -> bool {
        self.symmetric_difference_length(other) <= tol
    }
}

impl TryFrom<Vec<(f64, f64)>> for IntervalSet {
    type Error = String;

    fn try_from(parts: Vec<(f64, f64)>) -> Result<Self, String> {
        IntervalSet::new(parts)
    }
}

impl From<IntervalSet> for Vec<(f64, f64)> {
    fn from(set: IntervalSet) -> Self {
        set.parts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_lengths_rejects_bad_sum() {
        assert!(StepFunction::from_lengths(&[(0.5, 1.0), (0.4, 2.0)]).is_err());
        assert!(StepFunction::from_lengths(&[(0.5, 1.0), (0.5, f64::NAN)]).is_err());
        assert!(StepFunction::from_lengths(&[]).is_err());
    }

    #[test]
    fn from_lengths_pins_last_breakpoint() {
        let f = StepFunction::from_lengths(&[(0.1, 1.0), (0.2, 2.0), (0.7, 3.0)]).unwrap();
        assert_eq!(*f.breaks().last().unwrap(), 1.0);
        assert_eq!(f.piece_count(), 3);
        assert_eq!(f.value_at(0.05), 1.0);
        assert_eq!(f.value_at(0.2), 2.0);
        assert_eq!(f.value_at(0.99), 3.0);
    }

    #[test]
    fn refinement_is_bounded_by_piece_sum() {
        let f = StepFunction::from_lengths(&[(0.25, 1.0), (0.75, 2.0)]).unwrap();
        let g = StepFunction::from_lengths(&[(0.5, 10.0), (0.5, 20.0)]).unwrap();
        let h = f.zip_with(&g, |a, b| a + b);
        assert_eq!(h.values(), &[11.0, 12.0, 22.0]);
        assert!(h.piece_count() <= f.piece_count() + g.piece_count());
    }

    #[test]
    fn placed_pieces_fill_gaps() {
        let f = StepFunction::from_placed_pieces(vec![(0.5, 0.75, 3.0), (0.1, 0.2, 1.0)]);
        assert_eq!(f.breaks(), &[0.0, 0.1, 0.2, 0.5, 0.75, 1.0]);
        assert_eq!(f.values(), &[0.0, 1.0, 0.0, 3.0, 0.0]);
    }

    #[test]
    fn transport_window_scales_pieces() {
        let f = StepFunction::from_lengths(&[(0.5, 1.0), (0.5, 2.0)]).unwrap();
        let moved = f.transport_window(0.25, 0.5, 0.0, 1.0);
        assert_eq!(moved, vec![(0.0, 0.5, 1.0), (0.5, 1.0, 2.0)]);
    }

    #[test]
    fn interval_set_rejects_overlap_and_range() {
        assert!(IntervalSet::new(vec![(0.0, 0.5), (0.4, 0.6)]).is_err());
        assert!(IntervalSet::new(vec![(0.5, 1.5)]).is_err());
        assert!(IntervalSet::new(vec![(0.6, 0.5)]).is_err());
        let touching = IntervalSet::new(vec![(0.0, 0.5), (0.5, 0.6)]).unwrap();
        assert_eq!(touching.parts(), &[(0.0, 0.6)]);
    }

    #[test]
    fn boolean_laws() {
        let a = IntervalSet::new(vec![(0.1, 0.4), (0.6, 0.9)]).unwrap();
        let b = IntervalSet::new(vec![(0.3, 0.7)]).unwrap();
        assert!(a.intersection(&a.complement()).is_empty());
        assert!(a.union(&a.complement()).is_full());
        let i = a.intersection(&b);
        assert!(i.approx_eq(&IntervalSet::new(vec![(0.3, 0.4), (0.6, 0.7)]).unwrap(), 1e-12));
        assert!((a.union(&b).length() - (a.length() + b.length() - i.length())).abs() < 1e-12);
    }
}
