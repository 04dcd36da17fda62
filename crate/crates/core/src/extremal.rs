//! The truncated power profile |t|^{-1/p} on eps <= |t| <= N, discretized on
//! a mirrored geometric grid, and the operator-norm ratios it produces. As
//! the truncation window widens the ratio climbs toward the sharp constant;
//! the sweep quantifies that convergence.

use crate::best_constant::{solve_cp, BestConstant};
use crate::error::{Error, Result};
use crate::maximal_1d::uncentered_max;
use crate::step_fn::{PNormParams, StepFunction};

/// Parameters of one family member: the truncation window [eps, cutoff] and
/// the grid resolution in cells per factor of ten.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalSpec {
    pub params: PNormParams,
    pub eps: f64,
    pub cutoff: f64,
    pub cells_per_decade: u32,
}

/// Grid resolutions below this are too coarse to say anything.
pub const MIN_CELLS_PER_DECADE: u32 = 8;

impl ExtremalSpec {
    pub fn new(params: PNormParams, eps: f64, cutoff: f64, cells_per_decade: u32) -> Result<Self> {
        if !(eps.is_finite() && cutoff.is_finite()) || eps <= 0.0 || cutoff <= eps {
            return Err(Error::Domain(format!(
                "need 0 < eps < cutoff, got eps = {eps}, cutoff = {cutoff}"
            )));
        }
        if cells_per_decade < MIN_CELLS_PER_DECADE {
            return Err(Error::Domain(format!(
                "cells_per_decade must be >= {MIN_CELLS_PER_DECADE}, got {cells_per_decade}"
            )));
        }
        Ok(Self { params, eps, cutoff, cells_per_decade })
    }
}

/// Builds the even step function supported on eps <= |t| <= cutoff whose cell
/// values are the exact averages of |t|^{-1/p} over each geometric cell:
/// (t2^{1/p'} - t1^{1/p'}) / ((1/p') (t2 - t1)). Exact cell averages keep the
/// integral of the discretization equal to the integral of the profile.
pub fn build_extremal(spec: &ExtremalSpec) -> Result<StepFunction> {
    let decades = (spec.cutoff / spec.eps).log10();
    let cells = ((f64::from(spec.cells_per_decade) * decades).ceil() as usize).max(1);
    let log_ratio = (spec.cutoff / spec.eps).ln();
    let mut grid = Vec::with_capacity(cells + 1);
    grid.push(spec.eps);
    for i in 1..cells {
        grid.push(spec.eps * (log_ratio * i as f64 / cells as f64).exp());
    }
    grid.push(spec.cutoff);
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "grid degenerate: cells_per_decade too large for this window in f64".into(),
        ));
    }

    let a = 1.0 / spec.params.p_prime(); // 1 - 1/p
    let cell_avg = |t1: f64, t2: f64| (t2.powf(a) - t1.powf(a)) / (a * (t2 - t1));
    let positive: Vec<f64> = grid.windows(2).map(|w| cell_avg(w[0], w[1])).collect();

    let mut breakpoints: Vec<f64> = grid.iter().rev().map(|&t| -t).collect();
    breakpoints.extend(grid.iter());
    let mut values: Vec<f64> = positive.iter().rev().copied().collect();
    values.push(0.0); // the gap (-eps, eps)
    values.extend(positive.iter());
    StepFunction::new(breakpoints, values)
}

/// Lower and upper node-sampled estimates of ||M f||_p / ||f||_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    /// From the per-cell minimum of the endpoint node values.
    pub lower: f64,
    /// From the envelope step function.
    pub upper: f64,
}

/// Node-sampled operator-norm ratio of the uncentered maximal function.
/// Returns the lower estimate together with the envelope-based upper one;
/// acceptance logic uses the lower estimate, which cannot spuriously exceed
/// the sharp constant on the profiles the sweep feeds it.
pub fn ratio(f: &StepFunction, params: &PNormParams) -> Result<RatioEstimate> {
    let denom = f.lp_norm(params);
    if denom == 0.0 {
        return Err(Error::Domain("ratio of the zero function is undefined".into()));
    }
    let m = uncentered_max(f)?;
    Ok(RatioEstimate {
        lower: m.lower_step().lp_norm(params) / denom,
        upper: m.envelope().lp_norm(params) / denom,
    })
}

/// One sweep entry: the window, the resolution, both ratio estimates, the
/// target constant and the relative gap of the lower estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioRow {
    pub eps: f64,
    pub cutoff: f64,
    pub cells_per_decade: u32,
    pub ratio_lower: f64,
    pub ratio_upper: f64,
    pub c_p: f64,
    pub relative_gap: f64,
}

/// Evaluates the family ratio over the full (eps, cutoff) grid, in input
/// order. `eps_list` must be strictly decreasing and `cutoff_list` strictly
/// increasing, so the diagonal of the grid is the widening-window limit.
pub fn sweep(
    params: &PNormParams,
    eps_list: &[f64],
    cutoff_list: &[f64],
    cells_per_decade: u32,
) -> Result<Vec<RatioRow>> {
    if eps_list.is_empty() || cutoff_list.is_empty() {
        return Err(Error::Domain("eps and cutoff lists must be nonempty".into()));
    }
    if eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Domain("eps list must be strictly decreasing".into()));
    }
    if cutoff_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("cutoff list must be strictly increasing".into()));
    }
    let constant = solve_cp(params)?;
    let mut rows = Vec::with_capacity(eps_list.len() * cutoff_list.len());
    for &eps in eps_list {
        for &cutoff in cutoff_list {
            rows.push(sweep_row(&constant, eps, cutoff, cells_per_decade)?);
        }
    }
    Ok(rows)
}

fn sweep_row(constant: &BestConstant, eps: f64, cutoff: f64, cpd: u32) -> Result<RatioRow> {
    let spec = ExtremalSpec::new(constant.params, eps, cutoff, cpd)?;
    let f = build_extremal(&spec)?;
    let est = ratio(&f, &constant.params)?;
    Ok(RatioRow {
        eps,
        cutoff,
        cells_per_decade: cpd,
        ratio_lower: est.lower,
        ratio_upper: est.upper,
        c_p: constant.value,
        relative_gap: (constant.value - est.lower) / constant.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> PNormParams {
        PNormParams::new(2.0).unwrap()
    }

    #[test]
    fn exact_cell_averages_preserve_the_integral() {
        let spec = ExtremalSpec::new(p2(), 1.0, 10.0, 8).unwrap();
        let g = build_extremal(&spec).unwrap();
        assert_eq!(g.num_cells(), 8 * 2 + 1);
        // 2 * integral of t^{-1/2} over (1, 10) = 4 (sqrt(10) - 1)
        let expected_total: f64 = 4.0 * (10.0_f64.sqrt() - 1.0);
        assert!((g.integral() - expected_total).abs() <= 1e-12 * expected_total);
    }

    #[test]
    fn single_cell_average_value() {
        // average of t^{-1/2} over (1, 10) is 2(sqrt(10)-1)/9
        let a = 0.5;
        let avg = (10.0_f64.powf(a) - 1.0) / (a * 9.0);
        assert!((avg - 2.0 * (10.0_f64.sqrt() - 1.0) / 9.0).abs() < 1e-15);
    }

    #[test]
    fn family_is_even_and_decreasing_away_from_the_gap() {
        let spec = ExtremalSpec::new(p2(), 0.01, 100.0, 16).unwrap();
        let f = build_extremal(&spec).unwrap();
        // exactly even by mirrored construction
        assert_eq!(f, f.reflected());
        // strictly decreasing on the positive half of the support; the
        // (-eps, eps) cell is zero, so the function is not monotone in |x|
        // through the gap and is_symmetric_decreasing is literally false
        let mid = f.num_cells() / 2;
        assert_eq!(f.values()[mid], 0.0);
        let positive = &f.values()[mid + 1..];
        assert!(positive.windows(2).all(|w| w[0] > w[1]));
        assert!(!f.is_symmetric_decreasing(1e-12));
    }

    #[test]
    fn ratio_of_box_is_one() {
        let f = StepFunction::new(vec![0.0, 1.0], vec![3.0]).unwrap();
        let est = ratio(&f, &p2()).unwrap();
        assert!(est.lower >= 1.0 - 1e-15);
        assert!(est.upper >= est.lower);
    }

    #[test]
    fn ratio_scale_invariant() {
        let spec = ExtremalSpec::new(p2(), 0.1, 10.0, 16).unwrap();
        let f = build_extremal(&spec).unwrap();
        let est = ratio(&f, &p2()).unwrap();
        let est2 = ratio(&f.scaled(2.0).unwrap(), &p2()).unwrap();
        assert_eq!(est.lower, est2.lower);
        let est3 = ratio(&f.scaled(3.0).unwrap(), &p2()).unwrap();
        assert!((est.lower - est3.lower).abs() <= 1e-13 * est.lower);
    }

    #[test]
    fn ratio_rejects_zero_function() {
        let f = StepFunction::new(vec![0.0, 1.0], vec![0.0]).unwrap();
        assert!(matches!(ratio(&f, &p2()), Err(Error::Domain(_))));
    }

    #[test]
    fn spec_rejects_degenerate_window() {
        assert!(ExtremalSpec::new(p2(), 1.0, 1.0, 16).is_err());
        assert!(ExtremalSpec::new(p2(), 0.0, 1.0, 16).is_err());
        assert!(ExtremalSpec::new(p2(), 0.1, 1.0, 4).is_err());
    }

    #[test]
    fn sweep_converges_and_respects_bound() {
        let prm = p2();
        let rows = sweep(&prm, &[0.1, 0.01], &[10.0, 100.0], 32).unwrap();
        assert_eq!(rows.len(), 4);
        let first = &rows[0];
        let last = &rows[3];
        assert!(last.relative_gap < first.relative_gap);
        for row in &rows {
            assert!(row.ratio_lower <= row.c_p + 1e-6, "row {row:?}");
            assert!(row.ratio_lower > 1.0);
            assert!(row.ratio_upper >= row.ratio_lower);
        }
    }

    #[test]
    fn sweep_single_pair() {
        let rows = sweep(&p2(), &[0.1], &[10.0], 16).unwrap();
        assert_eq!(rows.len(), 1);
    }

    #[test]
    fn sweep_validates_list_order() {
        assert!(sweep(&p2(), &[0.01, 0.1], &[10.0], 16).is_err());
        assert!(sweep(&p2(), &[0.1], &[100.0, 10.0], 16).is_err());
        assert!(sweep(&p2(), &[], &[10.0], 16).is_err());
    }

    #[test]
    fn refinement_does_not_lower_the_ratio() {
        let prm = p2();
        let mut prev = 0.0;
        for cpd in [16, 32, 64] {
            let spec = ExtremalSpec::new(prm, 0.1, 10.0, cpd).unwrap();
            let f = build_extremal(&spec).unwrap();
            let est = ratio(&f, &prm).unwrap();
            assert!(est.lower >= prev - 1e-9, "cpd={cpd}");
            prev = est.lower;
        }
    }

    #[test]
    fn spot_value_converges_to_the_constant() {
        // the node value nearest t = 1 approaches c_p * 1^{-1/p} = c_p as the
        // window widens; at 12 decades it is within 2 percent
        let prm = p2();
        let c = solve_cp(&prm).unwrap().value;
        let spec = ExtremalSpec::new(prm, 1e-6, 1e6, 64).unwrap();
        let f = build_extremal(&spec).unwrap();
        let m = uncentered_max(&f).unwrap();
        let idx = f
            .breakpoints()
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (*a - 1.0).abs().total_cmp(&(*b - 1.0).abs()))
            .map(|(i, _)| i)
            .unwrap();
        let x = f.breakpoints()[idx];
        let spot = m.node_values()[idx] * x.powf(1.0 / prm.p());
        assert!((spot - c).abs() <= 0.02 * c, "spot={spot} c={c}");
    }
}
