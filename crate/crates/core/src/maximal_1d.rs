//! One-sided and uncentered maximal operators on step functions.
//!
//! The one-sided left maximal function takes, at a point x, the supremum of
//! the averages of f over intervals (a, x). For a step function this
//! supremum, evaluated at a breakpoint, is attained with `a` at a breakpoint
//! as well (see [`left_max`]), which makes an exact evaluation possible. The
//! fast path runs in O(m log m) using the lower convex hull of the prefix
//! sums; an O(m^2) brute-force oracle is kept permanently as a test fixture.
//!
//! The exact level sets {M_L f > lambda} come from the sunrise construction
//! on h(x) = S(x) - lambda*x: a point belongs to the set iff h sits strictly
//! above its own running minimum, and since h is piecewise linear every
//! boundary of the set solves a linear equation — no sampling is involved.

use crate::error::{Error, Result};
use crate::step_fn::{IntervalSet, StepFunction};

/// Which one-sided operator: averages over intervals ending at the point
/// (`Left`) or starting at it (`Right`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A maximal function sampled exactly at the breakpoints of its source,
/// together with a conservative step-function envelope.
///
/// The envelope value on a cell is max(left node, right node, source cell
/// value). Any interval containing an interior point x of a cell either stays
/// inside the closed cell (average = cell value) or contains one of the two
/// endpoints (average bounded by that endpoint's maximal value), so the
/// envelope dominates the true maximal function on every cell. Between
/// breakpoints the maximal function is not piecewise constant; the envelope
/// is the upper-bound surrogate, and grid refinement shrinks the gap.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMaximal {
    source: StepFunction,
    node_values: Vec<f64>,
    envelope: StepFunction,
}

impl SampledMaximal {
    fn from_nodes(source: StepFunction, node_values: Vec<f64>) -> Self {
        let env_values: Vec<f64> = source
            .values()
            .iter()
            .enumerate()
            .map(|(k, &v)| node_values[k].max(node_values[k + 1]).max(v))
            .collect();
        let envelope = StepFunction::new(source.breakpoints().to_vec(), env_values)
            .expect("source grid is valid");
        Self { source, node_values, envelope }
    }

    pub fn source(&self) -> &StepFunction {
        &self.source
    }

    /// Exact maximal-function values at the source breakpoints.
    pub fn node_values(&self) -> &[f64] {
        &self.node_values
    }

    /// Upper-bound step function (see the type-level comment).
    pub fn envelope(&self) -> &StepFunction {
        &self.envelope
    }

    /// Lower step representation: each cell takes the smaller endpoint node
    /// value. Not a pointwise lower bound in general (the maximal function
    /// can dip between two high nodes), but on refined grids the gap is
    /// controlled and for monotone profiles it is a true lower bound.
    pub fn lower_step(&self) -> StepFunction {
        let values: Vec<f64> = self
            .node_values
            .windows(2)
            .map(|w| w[0].min(w[1]))
            .collect();
        StepFunction::new(self.source.breakpoints().to_vec(), values).expect("source grid is valid")
    }

    /// Pointwise maximum of two samplings over the same grid.
    fn max_with(&self, other: &SampledMaximal) -> SampledMaximal {
        debug_assert_eq!(self.source, other.source);
        let nodes = self
            .node_values
            .iter()
            .zip(&other.node_values)
            .map(|(&a, &b)| a.max(b))
            .collect();
        SampledMaximal::from_nodes(self.source.clone(), nodes)
    }
}

fn require_nonnegative(f: &StepFunction) -> Result<()> {
    if !f.is_nonnegative() {
        return Err(Error::Domain("maximal operators require f >= 0".into()));
    }
    Ok(())
}

/// Prefix sums S(x_i) of f over the breakpoint grid.
fn prefix_sums(f: &StepFunction) -> Vec<f64> {
    f.prefix_integral().nodes().1.to_vec()
}

/// Node values of the left maximal function at every breakpoint.
///
/// Correctness of the grid restriction: with S the prefix integral, the
/// average of f over (a, x_i) is (S(x_i) - S(a)) / (x_i - a); as a function
/// of a its derivative is (average - f(a)) / (x_i - a) wherever f is
/// constant, so on each cell the average is monotone (or frozen at the cell
/// value) and its supremum over the closed cell sits at a cell boundary. The
/// limit a -> x_i yields the adjacent cell value, which the boundary choice
/// a = x_{i-1} already realizes exactly. Left of the support f vanishes and
/// moving a further left only dilutes, so a = x_0 dominates there. Hence the
/// supremum over all a < x_i equals the maximum over breakpoints a = x_j,
/// j < i, and that is what both evaluators compute. At x_0 itself no mass
/// lies to the left and the value is 0.
fn left_nodes_hull(f: &StepFunction) -> Vec<f64> {
    let x = f.breakpoints();
    let s = prefix_sums(f);
    let n = x.len();
    let mut out = vec![0.0; n];
    // Lower convex hull of the points (x_j, S_j), j < i. The slope from a
    // query point right of the hull to the hull vertices is unimodal, so the
    // best vertex is found by binary search on adjacent slopes.
    let mut hull: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        if !hull.is_empty() {
            let slope = |h: usize| {
                let j = hull[h];
                (s[i] - s[j]) / (x[i] - x[j])
            };
            let (mut lo, mut hi) = (0, hull.len() - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if slope(mid) < slope(mid + 1) {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            out[i] = slope(lo);
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // pop b unless it lies strictly below the chord a -> i
            if (s[b] - s[a]) * (x[i] - x[b]) >= (s[i] - s[b]) * (x[b] - x[a]) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    out
}

/// One-sided left maximal function, exact at breakpoints, O(m log m).
pub fn left_max(f: &StepFunction) -> Result<SampledMaximal> {
    require_nonnegative(f)?;
    let nodes = left_nodes_hull(f);
    Ok(SampledMaximal::from_nodes(f.clone(), nodes))
}

/// One-sided right maximal function, implemented as the reflection of
/// [`left_max`] so the mirror identity holds bit for bit.
pub fn right_max(f: &StepFunction) -> Result<SampledMaximal> {
    require_nonnegative(f)?;
    let reflected = left_max(&f.reflected())?;
    let mut nodes = reflected.node_values.clone();
    nodes.reverse();
    Ok(SampledMaximal::from_nodes(f.clone(), nodes))
}

/// Uncentered maximal function as the pointwise supremum of the two
/// one-sided operators; exact at breakpoints.
pub fn uncentered_max(f: &StepFunction) -> Result<SampledMaximal> {
    let l = left_max(f)?;
    let r = right_max(f)?;
    Ok(l.max_with(&r))
}

/// Hard cap for the O(m^2) oracle.
pub const BRUTE_FORCE_MAX_CELLS: usize = 5000;

/// O(m^2) reference evaluator over all breakpoint pairs; the permanent test
/// oracle for the hull-based fast path.
pub fn brute_force_one_sided(f: &StepFunction, side: Side) -> Result<SampledMaximal> {
    require_nonnegative(f)?;
    if f.num_cells() > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::SizeLimit(format!(
            "brute-force oracle accepts at most {BRUTE_FORCE_MAX_CELLS} cells, got {}",
            f.num_cells()
        )));
    }
    match side {
        Side::Left => {
            let x = f.breakpoints();
            let s = prefix_sums(f);
            let nodes = (0..x.len())
                .map(|i| {
                    (0..i)
                        .map(|j| (s[i] - s[j]) / (x[i] - x[j]))
                        .fold(0.0_f64, f64::max)
                })
                .collect();
            Ok(SampledMaximal::from_nodes(f.clone(), nodes))
        }
        Side::Right => {
            let reflected = brute_force_one_sided(&f.reflected(), Side::Left)?;
            let mut nodes = reflected.node_values;
            nodes.reverse();
            Ok(SampledMaximal::from_nodes(f.clone(), nodes))
        }
    }
}

/// Exact level set {M_L f > lambda} (resp. {M_R f > lambda}).
///
/// The set may extend past the support: outside it h(x) = S(x) - lambda*x is
/// linear with slope -lambda, and the exterior boundary solves a linear
/// equation like every other one.
pub fn one_sided_level_set(f: &StepFunction, lambda: f64, side: Side) -> Result<IntervalSet> {
    require_nonnegative(f)?;
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    match side {
        Side::Left => Ok(left_level_set(f, lambda)),
        Side::Right => {
            let mirrored = left_level_set(&f.reflected(), lambda);
            let intervals = mirrored
                .intervals()
                .iter()
                .rev()
                .map(|&(a, b)| (-b, -a))
                .collect();
            IntervalSet::new(intervals)
        }
    }
}

/// Sunrise walk: {x : h(x) > min_{a <= x} h(a)} for h(x) = S(x) - lambda*x.
///
/// The running minimum only updates where h descends to a new low, so within
/// a qualifying run it is frozen; every run therefore starts and ends at the
/// same h-level, which is what makes the level-set identity
/// lambda * |C| = integral of f over C exact on each component.
fn left_level_set(f: &StepFunction, lambda: f64) -> IntervalSet {
    let x = f.breakpoints();
    let v = f.values();
    let s = prefix_sums(f);
    let h: Vec<f64> = x.iter().zip(&s).map(|(&xi, &si)| si - lambda * xi).collect();

    // Left of the support h has slope -lambda < 0, so the running minimum at
    // x_0 is h(x_0) itself and nothing qualifies out there.
    let mut run_min = h[0];
    let mut open: Option<f64> = None;
    let mut out: Vec<(f64, f64)> = Vec::new();

    for k in 0..v.len() {
        let slope = v[k] - lambda;
        let (h0, h1) = (h[k], h[k + 1]);
        debug_assert!(h0 >= run_min);
        if h0 > run_min {
            if open.is_none() {
                open = Some(x[k]);
            }
            if slope < 0.0 && h1 < run_min {
                // h descends through the frozen minimum inside this cell
                let xc = (x[k] + (run_min - h0) / slope).clamp(x[k], x[k + 1]);
                out.push((open.take().unwrap(), xc));
            }
        } else {
            // h0 == run_min: qualifies ahead only if h rises immediately
            if slope > 0.0 {
                if open.is_none() {
                    open = Some(x[k]);
                }
            } else if let Some(a) = open.take() {
                out.push((a, x[k]));
            }
        }
        if h1 < run_min {
            run_min = h1;
        }
    }

    // Right of the support h has slope -lambda and decays to the frozen
    // minimum at x* = x_m + (h(x_m) - min)/lambda.
    let hm = *h.last().unwrap();
    let xm = *x.last().unwrap();
    if hm > run_min {
        let xstar = xm + (hm - run_min) / lambda;
        let a = open.take().unwrap_or(xm);
        out.push((a, xstar));
    } else if let Some(a) = open.take() {
        out.push((a, xm));
    }

    IntervalSet::new(out).expect("endpoints are finite")
}
