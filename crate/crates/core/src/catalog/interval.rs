//! Validity intervals for the evolution coordinate.

use crate::error::{Error, Result};
use crate::poly;
use serde::Serialize;

/// Open interval of the fourth coordinate, with a strictly interior sampling window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub sample_lo: f64,
    pub sample_hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        let (sample_lo, sample_hi) = sampling_window(lo, hi);
        Interval { lo, hi, sample_lo, sample_hi }
    }

    pub fn with_window(mut self, sample_lo: f64, sample_hi: f64) -> Self {
        self.sample_lo = sample_lo;
        self.sample_hi = sample_hi;
        self
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }
}

fn sampling_window(lo: f64, hi: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let len = hi - lo;
            (lo + 0.15 * len, hi - 0.15 * len)
        }
        (true, false) => {
            let s = lo.abs().max(1.0);
            (lo + 0.15 * s, lo + 3.0 * s)
        }
        (false, true) => {
            let s = hi.abs().max(1.0);
            (hi - 3.0 * s, hi - 0.15 * s)
        }
        (false, false) => (-2.0, 2.0),
    }
}

/// Real roots of every polynomial (ascending coefficients), deduplicated.
pub fn breakpoints(polys: &[&[f64]]) -> Vec<f64> {
    let mut out: Vec<f64> = polys.iter().flat_map(|c| poly::real_roots(c, 1e-9)).collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    out
}

fn probe(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => a + 1.0 + a.abs(),
        (false, true) => b - 1.0 - b.abs(),
        (false, false) => 0.0,
    }
}

/// Maximal open intervals inside `(hard_lo, hard_hi)` on which `valid` holds,
/// cut at the given breakpoints.
pub fn valid_intervals(valid: &impl Fn(f64) -> bool, cuts: &[f64], hard_lo: f64, hard_hi: f64) -> Vec<(f64, f64)> {
    let mut edges = vec![hard_lo];
    edges.extend(cuts.iter().copied().filter(|c| *c > hard_lo && *c < hard_hi));
    edges.push(hard_hi);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a || !valid(probe(a, b)) {
            continue;
        }
        // Merge across cuts where validity does not actually change.
        if let Some(last) = out.last_mut() {
            if last.1 == a {
                last.1 = b;
                continue;
            }
        }
        out.push((a, b));
    }
    out
}

/// Picks the interval containing `hint`, or else prefers an interval unbounded
/// above, then the longest one reaching positive values.
pub fn select_interval(candidates: &[(f64, f64)], hint: Option<f64>) -> Result<Interval> {
    if candidates.is_empty() {
        return Err(Error::Parameter("no interval where the metric has the required signature".into()));
    }
    if let Some(h) = hint {
        return candidates
            .iter()
            .find(|(a, b)| h > *a && h < *b)
            .map(|(a, b)| Interval::new(*a, *b))
            .ok_or_else(|| Error::Parameter(format!("t0 = {h} is not inside any valid interval {candidates:?}")));
    }
    if let Some((a, b)) = candidates.iter().find(|(_, b)| b.is_infinite() && *b > 0.0) {
        return Ok(Interval::new(*a, *b));
    }
    let positive: Vec<_> = candidates.iter().filter(|(_, b)| *b > 0.0).collect();
    let pool: Vec<&(f64, f64)> = if positive.is_empty() { candidates.iter().collect() } else { positive };
    let best = pool.into_iter().max_by(|x, y| (x.1 - x.0.max(0.0)).total_cmp(&(y.1 - y.0.max(0.0)))).expect("non-empty");
    Ok(Interval::new(best.0, best.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_positivity() {
        // t² − 1 > 0
        let cuts = breakpoints(&[&[-1.0, 0.0, 1.0]]);
        let v = valid_intervals(&|t: f64| t * t > 1.0, &cuts, f64::NEG_INFINITY, f64::INFINITY);
        assert_eq!(v.len(), 2);
        let i = select_interval(&v, None).unwrap();
        assert!((i.lo - 1.0).abs() < 1e-12 && i.hi.is_infinite());
        let j = select_interval(&v, Some(-3.0)).unwrap();
        assert!(j.lo.is_infinite() && (j.hi + 1.0).abs() < 1e-12);
        assert!(j.sample_lo < j.sample_hi && j.sample_hi < -1.0);
    }

    #[test]
    fn hint_outside_fails() {
        let v = vec![(0.0, 1.0)];
        assert!(select_interval(&v, Some(2.0)).is_err());
    }
}
