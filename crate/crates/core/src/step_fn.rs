//! Compactly supported piecewise-constant functions on the real line,
//! together with the exact interval-set and integral arithmetic the rest of
//! the crate is built on.
//!
//! Cells are open intervals between consecutive breakpoints; the value at a
//! breakpoint itself has measure zero and never enters any integral or
//! level-set measure. Functions vanish identically outside the support.

use crate::error::{Error, Result};

/// Exponent pair (p, p') with 1/p + 1/p' = 1 and p > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PNormParams {
    p: f64,
    p_prime: f64,
}

impl PNormParams {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::Domain(format!("p must be finite and > 1, got {p}")));
        }
        let p_prime = p / (p - 1.0);
        debug_assert!((1.0 / p + 1.0 / p_prime - 1.0).abs() <= 1e-14);
        Ok(Self { p, p_prime })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The conjugate exponent p/(p-1).
    pub fn p_prime(&self) -> f64 {
        self.p_prime
    }
}

/// A finite union of disjoint open intervals, kept sorted. Intervals that
/// touch at an endpoint are merged: a single removed point has measure zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    /// Builds a set from arbitrary intervals: degenerate ones are dropped,
    /// the rest are sorted and overlapping or touching ones merged.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Domain(format!("non-finite interval ({a}, {b})")));
            }
        }
        intervals.retain(|&(a, b)| a < b);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(a, b)| b - a).sum()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        IntervalSet::new(all).expect("members are finite")
    }
}

/// A continuous piecewise-linear function given by its node coordinates,
/// extended by constants outside the node range.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.xs.partition_point(|&t| t <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Piecewise-constant function: value `values[k]` on the open cell
/// `(breakpoints[k], breakpoints[k+1])`, zero outside the support.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Domain("need at least two breakpoints".into()));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::Domain(format!(
                "{} breakpoints require {} values, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                values.len()
            )));
        }
        if breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite breakpoint".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite cell value".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("breakpoints must be strictly increasing".into()));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// Value at a point; zero outside the support. At a breakpoint the value
    /// of the cell to the right is reported (the choice has measure zero).
    pub fn value_at(&self, x: f64) -> f64 {
        if x < self.breakpoints[0] || x >= *self.breakpoints.last().unwrap() {
            return 0.0;
        }
        let k = self.breakpoints.partition_point(|&t| t <= x);
        self.values[k - 1]
    }

    /// Total integral over the line.
    pub fn integral(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| v * (w[1] - w[0]))
            .sum()
    }

    /// Exact integral of the function over an interval set: per cell, the
    /// value times the overlap length.
    pub fn integrate_over(&self, set: &IntervalSet) -> f64 {
        let mut total = 0.0;
        let mut si = 0;
        let ivs = set.intervals();
        for (k, w) in self.breakpoints.windows(2).enumerate() {
            let (cl, cr) = (w[0], w[1]);
            while si < ivs.len() && ivs[si].1 <= cl {
                si += 1;
            }
            let mut j = si;
            while j < ivs.len() && ivs[j].0 < cr {
                let overlap = ivs[j].1.min(cr) - ivs[j].0.max(cl);
                if overlap > 0.0 {
                    total += self.values[k] * overlap;
                }
                j += 1;
            }
        }
        total
    }

    /// Sum of |value|^p * cell length, the p-th power of the L^p norm.
    pub fn lp_pow(&self, params: &PNormParams) -> f64 {
        let p = params.p();
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| v.abs().powf(p) * (w[1] - w[0]))
            .sum()
    }

    pub fn lp_norm(&self, params: &PNormParams) -> f64 {
        self.lp_pow(params).powf(1.0 / params.p())
    }

    /// The open set {f > lambda} as a union of cells, adjacent qualifying
    /// cells merged. Comparison is strict, matching the level-set definition.
    pub fn level_set(&self, lambda: f64) -> Result<IntervalSet> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
        }
        Ok(self.upper_level_set_unchecked(lambda))
    }

    /// {f > t} without the t > 0 restriction; used internally by the exact
    /// layer-cake slab decomposition, whose lowest slab starts at t = 0.
    pub(crate) fn upper_level_set_unchecked(&self, t: f64) -> IntervalSet {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (k, w) in self.breakpoints.windows(2).enumerate() {
            if self.values[k] > t {
                match out.last_mut() {
                    Some(last) if last.1 == w[0] => last.1 = w[1],
                    _ => out.push((w[0], w[1])),
                }
            }
        }
        IntervalSet::new(out).expect("breakpoints are finite")
    }

    /// Prefix integral S with S(x_0) = 0 and slope `values[k]` on cell k.
    /// Outside the support S is extended by its boundary values.
    pub fn prefix_integral(&self) -> PiecewiseLinear {
        let mut ys = Vec::with_capacity(self.breakpoints.len());
        ys.push(0.0);
        let mut acc = 0.0;
        for (w, &v) in self.breakpoints.windows(2).zip(&self.values) {
            acc += v * (w[1] - w[0]);
            ys.push(acc);
        }
        PiecewiseLinear { xs: self.breakpoints.clone(), ys }
    }

    /// Mirror image x -> -x. Exact: breakpoints are negated and reversed.
    pub fn reflected(&self) -> StepFunction {
        let breakpoints = self.breakpoints.iter().rev().map(|&x| -x).collect();
        let values = self.values.iter().rev().copied().collect();
        StepFunction { breakpoints, values }
    }

    /// Pointwise scaling c*f.
    pub fn scaled(&self, c: f64) -> Result<StepFunction> {
        StepFunction::new(self.breakpoints.clone(), self.values.iter().map(|&v| c * v).collect())
    }

    /// Coordinate dilation x -> s*x for s > 0.
    pub fn dilated(&self, s: f64) -> Result<StepFunction> {
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::Domain(format!("dilation factor must be > 0, got {s}")));
        }
        StepFunction::new(self.breakpoints.iter().map(|&x| s * x).collect(), self.values.clone())
    }

    /// Splits every cell into `parts` equal subcells; the function is
    /// unchanged pointwise.
    pub fn refined(&self, parts: u32) -> StepFunction {
        assert!(parts >= 1);
        if parts == 1 {
            return self.clone();
        }
        let mut bps = Vec::with_capacity(self.num_cells() * parts as usize + 1);
        let mut vals = Vec::with_capacity(self.num_cells() * parts as usize);
        for (w, &v) in self.breakpoints.windows(2).zip(&self.values) {
            for j in 0..parts {
                bps.push(w[0] + (w[1] - w[0]) * f64::from(j) / f64::from(parts));
                vals.push(v);
            }
        }
        bps.push(*self.breakpoints.last().unwrap());
        StepFunction::new(bps, vals).expect("refinement preserves ordering")
    }

    /// True iff the function is even and non-increasing in |x|, both up to
    /// `tol` (compared as |a - b| <= tol * max(1, |a|, |b|)).
    pub fn is_symmetric_decreasing(&self, tol: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs());
        let mut radii: Vec<f64> = self.breakpoints.iter().map(|&x| x.abs()).collect();
        radii.push(0.0);
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut prev: Option<f64> = None;
        for w in radii.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let (vp, vm) = (self.value_at(mid), self.value_at(-mid));
            if !close(vp, vm) {
                return false;
            }
            if let Some(prev) = prev {
                if vp > prev && !close(vp, prev) {
                    return false;
                }
            }
            prev = Some(vp);
        }
        true
    }

    /// Serializes to the `x,value` CSV schema: row k holds breakpoint x_k and
    /// the value of the cell to its right; the final row's value is empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (i, &x) in self.breakpoints.iter().enumerate() {
            if i < self.values.len() {
                out.push_str(&format!("{},{}\n", crate::fmt::sig15(x), crate::fmt::sig15(self.values[i])));
            } else {
                out.push_str(&format!("{},\n", crate::fmt::sig15(x)));
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<StepFunction> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        if header.trim() != "x,value" {
            return Err(Error::Parse(format!("expected header 'x,value', got '{}'", header.trim())));
        }
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        let rows: Vec<&str> = lines.collect();
        if rows.len() < 2 {
            return Err(Error::Parse("need at least two data rows".into()));
        }
        for (i, line) in rows.iter().enumerate() {
            let mut fields = line.splitn(2, ',');
            let xs = fields.next().unwrap_or("").trim();
            let vs = fields.next().unwrap_or("").trim();
            let x: f64 = xs
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: bad breakpoint '{xs}'", i + 2)))?;
            bps.push(x);
            if i + 1 < rows.len() {
                let v: f64 = vs
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: bad value '{vs}'", i + 2)))?;
                vals.push(v);
            }
        }
        StepFunction::new(bps, vals)
    }
}
