//! Numeric verification of the level-set identities on step functions: the
//! sunrise equality for the one-sided operators, the sharp combined weak-type
//! inequality for the uncentered operator, and the layer-cake formulas that
//! chain them into the operator-norm bound.
//!
//! Every lambda-integral here is computed by exact slab decomposition over
//! the sorted distinct values of the thresholded function — the set {g > t}
//! is constant between consecutive values, so each slab contributes a closed
//! form and no lambda-quadrature (hence no quadrature tolerance) is involved.

use crate::error::{Error, Result};
use crate::extremal::{ratio, RatioEstimate};
use crate::maximal_1d::{one_sided_level_set, Side};
use crate::step_fn::{IntervalSet, PNormParams, StepFunction};

/// Two sides of a weak-type comparison at one level, with the sets that
/// produced them. `slack = rhs - lhs` is ~0 for the sunrise equality and
/// >= 0 (up to rounding) for the combined inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakTypeReport {
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// The level sets measured on the left-hand side, in lhs order.
    pub sets: Vec<IntervalSet>,
}

fn require_positive_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(())
}

/// Sunrise equality, one report per side: lambda * |{M f > lambda}| equals
/// the integral of f over that set, exactly up to rounding.
pub fn lemma1_check(f: &StepFunction, lambda: f64) -> Result<(WeakTypeReport, WeakTypeReport)> {
    require_positive_lambda(lambda)?;
    let mut reports = [None, None];
    for (slot, side) in [Side::Left, Side::Right].into_iter().enumerate() {
        let set = one_sided_level_set(f, lambda, side)?;
        let lhs = lambda * set.measure();
        let rhs = f.integrate_over(&set);
        reports[slot] = Some(WeakTypeReport { lambda, lhs, rhs, slack: rhs - lhs, sets: vec![set] });
    }
    let [left, right] = reports;
    Ok((left.unwrap(), right.unwrap()))
}

/// Combined weak-type comparison: with A = {M f > lambda} (the union of the
/// two one-sided level sets) and B = {f > lambda},
/// lambda (|A| + |B|) <= integral over A + integral over B,
/// with equality when f is even and symmetrically decreasing.
pub fn lemma2_check(f: &StepFunction, lambda: f64) -> Result<WeakTypeReport> {
    require_positive_lambda(lambda)?;
    let a = one_sided_level_set(f, lambda, Side::Left)?
        .union(&one_sided_level_set(f, lambda, Side::Right)?);
    let b = f.level_set(lambda)?;
    let lhs = lambda * (a.measure() + b.measure());
    let rhs = f.integrate_over(&a) + f.integrate_over(&b);
    Ok(WeakTypeReport { lambda, lhs, rhs, slack: rhs - lhs, sets: vec![a, b] })
}

/// Sorted distinct positive cell values of g; slab boundaries for the exact
/// layer-cake decomposition.
fn slab_levels(g: &StepFunction) -> Vec<f64> {
    let mut vals: Vec<f64> = g.values().iter().copied().filter(|&v| v > 0.0).collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals
}

/// Both sides of the weighted layer-cake identity
/// integral over lambda of lambda^{p-2} (integral of f over {g > lambda})
/// = (1/(p-1)) integral of f g^{p-1}.
/// The left side is assembled slab by slab: on (v_j, v_{j+1}) the set
/// {g > lambda} is frozen, and the lambda factor integrates to
/// (v_{j+1}^{p-1} - v_j^{p-1})/(p-1). The right side is a merged-grid sum.
pub fn lemma3_first(
    f: &StepFunction,
    g: &StepFunction,
    params: &PNormParams,
) -> Result<(f64, f64)> {
    if !f.is_nonnegative() || !g.is_nonnegative() {
        return Err(Error::Domain("layer-cake identities require f, g >= 0".into()));
    }
    let p = params.p();

    let mut lhs = 0.0;
    let mut below = 0.0; // slab floor
    for &level in &slab_levels(g) {
        // {g > t} for any t in [below, level) equals {g > below}
        let set = g.upper_level_set_unchecked(below);
        let weight = (level.powf(p - 1.0) - below.powf(p - 1.0)) / (p - 1.0);
        lhs += weight * f.integrate_over(&set);
        below = level;
    }

    let mut grid: Vec<f64> = f.breakpoints().iter().chain(g.breakpoints()).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut rhs = 0.0;
    for w in grid.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let (fv, gv) = (f.value_at(mid), g.value_at(mid));
        if fv != 0.0 && gv != 0.0 {
            rhs += fv * gv.powf(p - 1.0) * (w[1] - w[0]);
        }
    }
    rhs /= p - 1.0;

    Ok((lhs, rhs))
}

/// Both sides of the layer-cake norm identity
/// integral over lambda of lambda^{p-1} |{g > lambda}| = (1/p) ||g||_p^p,
/// computed by the same exact slab decomposition.
pub fn lemma3_second(g: &StepFunction, params: &PNormParams) -> Result<(f64, f64)> {
    if !g.is_nonnegative() {
        return Err(Error::Domain("layer-cake identities require g >= 0".into()));
    }
    let p = params.p();
    let mut lhs = 0.0;
    let mut below = 0.0;
    for &level in &slab_levels(g) {
        let set = g.upper_level_set_unchecked(below);
        lhs += set.measure() * (level.powf(p) - below.powf(p)) / p;
        below = level;
    }
    let rhs = g.lp_pow(params) / p;
    Ok((lhs, rhs))
}

/// Refinement factor applied before node-sampling the operator-norm ratio in
/// the property checks: splitting every cell into this many parts shrinks the
/// gap between the sampled representation and the true maximal function.
/// Empirically safe; tunable.
pub const RATIO_REFINE_FACTOR: u32 = 8;

/// Node-sampled operator-norm ratio on the refined grid; the quantity the
/// sharp-bound property test compares against the best constant.
pub fn refined_ratio(f: &StepFunction, params: &PNormParams) -> Result<RatioEstimate> {
    ratio(&f.refined(RATIO_REFINE_FACTOR), params)
}
