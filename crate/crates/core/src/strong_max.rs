//! Strong maximal function (averages over axis-aligned boxes) on tensor-grid
//! step functions.
//!
//! For separable nonnegative inputs box averages factor per axis, so the
//! strong maximal function is the product of the 1D uncentered maximal
//! functions of the factors — that separable fast path is the primary route.
//! For general tensors we iterate the 1D operator one axis at a time; the
//! composition dominates the strong maximal function, so the resulting
//! envelope tensor is an upper-bound estimator (never reported as the strong
//! maximal function itself), while the vertex tensor carries the exact
//! values of the composed operator at grid vertices.

use crate::best_constant::solve_cp;
use crate::error::{Error, Result};
use crate::extremal::{build_extremal, ratio, ExtremalSpec};
use crate::maximal_1d::{uncentered_max, SampledMaximal};
use crate::step_fn::StepFunction;

/// Hard cap on dense-tensor cell counts.
pub const MAX_TENSOR_CELLS: usize = 10_000_000;

/// An n-dimensional step function on a tensor product of breakpoint grids,
/// cell values stored row-major by axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorStepFunction {
    axes: Vec<Vec<f64>>,
    values: Vec<f64>,
    separable_factors: Option<Vec<StepFunction>>,
}

impl TensorStepFunction {
    pub fn new(axes: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Domain("need at least one axis".into()));
        }
        let mut cells = 1usize;
        for axis in &axes {
            if axis.len() < 2 || axis.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Domain("each axis needs strictly increasing breakpoints".into()));
            }
            cells = cells.saturating_mul(axis.len() - 1);
        }
        if cells > MAX_TENSOR_CELLS {
            return Err(Error::SizeLimit(format!("{cells} cells exceed {MAX_TENSOR_CELLS}")));
        }
        if values.len() != cells {
            return Err(Error::Domain(format!(
                "grid has {cells} cells but {} values were given",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite cell value".into()));
        }
        Ok(Self { axes, values, separable_factors: None })
    }

    /// Outer product of 1D step functions.
    pub fn from_factors(factors: &[StepFunction]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Domain("need at least one factor".into()));
        }
        let axes: Vec<Vec<f64>> = factors.iter().map(|f| f.breakpoints().to_vec()).collect();
        let extents: Vec<usize> = factors.iter().map(|f| f.num_cells()).collect();
        let cells: usize = extents.iter().product();
        if cells > MAX_TENSOR_CELLS {
            return Err(Error::SizeLimit(format!("{cells} cells exceed {MAX_TENSOR_CELLS}")));
        }
        let mut values = vec![1.0; cells];
        let strides = strides(&extents);
        for (offset, v) in values.iter_mut().enumerate() {
            for (j, f) in factors.iter().enumerate() {
                let idx = offset / strides[j] % extents[j];
                *v *= f.values()[idx];
            }
        }
        let mut t = Self::new(axes, values)?;
        t.separable_factors = Some(factors.to_vec());
        Ok(t)
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_extents(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len() - 1).collect()
    }

    pub fn separable_factors(&self) -> Option<&[StepFunction]> {
        self.separable_factors.as_deref()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }
}

fn strides(extents: &[usize]) -> Vec<usize> {
    let n = extents.len();
    let mut s = vec![1usize; n];
    for j in (0..n.saturating_sub(1)).rev() {
        s[j] = s[j + 1] * extents[j + 1];
    }
    s
}

/// Visits every multi-index over `extents` with coordinate `axis` held at 0.
fn for_each_cross_index(extents: &[usize], axis: usize, mut visit: impl FnMut(&[usize])) {
    let n = extents.len();
    let mut idx = vec![0usize; n];
    'rows: loop {
        visit(&idx);
        let mut j = n;
        loop {
            if j == 0 {
                break 'rows;
            }
            j -= 1;
            if j == axis {
                continue;
            }
            idx[j] += 1;
            if idx[j] < extents[j] {
                continue 'rows;
            }
            idx[j] = 0;
        }
    }
}

/// Applies a 1D row transform along one axis: `apply` maps a row of
/// `in_len` values to `out_len` values. Returns the new tensor data.
fn axis_pass(
    data: &[f64],
    extents: &[usize],
    axis: usize,
    out_len: usize,
    mut apply: impl FnMut(&[f64], &mut [f64]),
) -> (Vec<f64>, Vec<usize>) {
    let in_strides = strides(extents);
    let mut out_extents = extents.to_vec();
    out_extents[axis] = out_len;
    let out_strides = strides(&out_extents);
    let mut out = vec![0.0; out_extents.iter().product()];
    let in_len = extents[axis];
    let mut row_in = vec![0.0; in_len];
    let mut row_out = vec![0.0; out_len];
    for_each_cross_index(extents, axis, |idx| {
        let base_in: usize = idx.iter().zip(&in_strides).map(|(&i, &s)| i * s).sum();
        let base_out: usize = idx.iter().zip(&out_strides).map(|(&i, &s)| i * s).sum();
        for t in 0..in_len {
            row_in[t] = data[base_in + t * in_strides[axis]];
        }
        apply(&row_in, &mut row_out);
        for t in 0..out_len {
            out[base_out + t * out_strides[axis]] = row_out[t];
        }
    });
    (out, out_extents)
}

/// Per-axis 1D maximal functions of separable input; the n-dimensional value
/// at a grid vertex is the product of the per-axis node values.
pub fn strong_max_separable(factors: &[StepFunction]) -> Result<Vec<SampledMaximal>> {
    if factors.is_empty() {
        return Err(Error::Domain("need at least one factor".into()));
    }
    factors.iter().map(uncentered_max).collect()
}

/// Result of iterating the 1D operator over every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct IteratedMax {
    /// Exact values of the composed per-axis operator on the vertex lattice
    /// (row-major, extent = breakpoint count per axis). For separable input
    /// this equals the strong maximal function at the vertices.
    pub vertex_values: Vec<f64>,
    pub vertex_extents: Vec<usize>,
    /// Envelope tensor: per-axis 1D envelopes composed in axis order. An
    /// upper bound for the strong maximal function on every cell.
    pub envelope: TensorStepFunction,
}

/// Iterates the 1D uncentered operator along every axis, in index order.
pub fn strong_max_iterated(input: &TensorStepFunction) -> Result<IteratedMax> {
    let order: Vec<usize> = (0..input.axes.len()).collect();
    strong_max_iterated_in_order(input, &order)
}

/// Same, with an explicit axis order; vertex values of separable inputs are
/// order-independent.
pub fn strong_max_iterated_in_order(
    input: &TensorStepFunction,
    order: &[usize],
) -> Result<IteratedMax> {
    if !input.is_nonnegative() {
        return Err(Error::Domain("strong maximal operator requires F >= 0".into()));
    }
    let n = input.axes.len();
    {
        let mut seen = vec![false; n];
        for &a in order {
            if a >= n || seen[a] {
                return Err(Error::Domain(format!("invalid axis order {order:?}")));
            }
            seen[a] = true;
        }
        if order.len() != n {
            return Err(Error::Domain(format!("axis order must name all {n} axes")));
        }
    }

    // Vertex pass: after handling axis j, coordinate j is vertex-indexed.
    // Each row along a pending axis is still a step function in that
    // variable, so the 1D node values are exact for the composition.
    let mut vertex = input.values.clone();
    let mut vextents = input.cell_extents();
    for &axis in order {
        let grid = &input.axes[axis];
        let out_len = grid.len();
        let (next, next_ext) = axis_pass(&vertex, &vextents, axis, out_len, |row, out| {
            let f = StepFunction::new(grid.clone(), row.to_vec()).expect("axis grid is valid");
            let m = uncentered_max(&f).expect("rows of a nonnegative tensor are nonnegative");
            out.copy_from_slice(m.node_values());
        });
        vertex = next;
        vextents = next_ext;
    }

    // Envelope pass: cells stay cells; each 1D envelope dominates the 1D
    // operator, so the composition dominates the strong maximal function.
    let mut env = input.values.clone();
    let mut eextents = input.cell_extents();
    for &axis in order {
        let grid = &input.axes[axis];
        let out_len = grid.len() - 1;
        let (next, next_ext) = axis_pass(&env, &eextents, axis, out_len, |row, out| {
            let f = StepFunction::new(grid.clone(), row.to_vec()).expect("axis grid is valid");
            let m = uncentered_max(&f).expect("rows of a nonnegative tensor are nonnegative");
            out.copy_from_slice(m.envelope().values());
        });
        env = next;
        eextents = next_ext;
    }
    let envelope = TensorStepFunction::new(input.axes.clone(), env)?;

    Ok(IteratedMax { vertex_values: vertex, vertex_extents: vextents, envelope })
}

/// One row of the strong-operator norm table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongRatioRow {
    pub dim: u32,
    pub p: f64,
    /// Node-sampled lower ratio of the separable family, raised to the
    /// dimension: box averages of a product factor per axis, so the n-D
    /// ratio of a product function is the 1D ratio to the n-th power.
    pub ratio: f64,
    /// Target constant c_p^n.
    pub target: f64,
    pub relative_gap: f64,
}

/// Operator-norm ratio of the n-fold product of the truncated power profile.
pub fn strong_ratio(dim: u32, spec: &ExtremalSpec) -> Result<StrongRatioRow> {
    if dim < 1 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let constant = solve_cp(&spec.params)?;
    let f = build_extremal(spec)?;
    let est = ratio(&f, &spec.params)?;
    let r = est.lower.powi(dim as i32);
    let target = constant.value.powi(dim as i32);
    Ok(StrongRatioRow {
        dim,
        p: spec.params.p(),
        ratio: r,
        target,
        relative_gap: (target - r) / target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_step, rng_for_seed};
    use crate::step_fn::PNormParams;

    fn step(bps: &[f64], vals: &[f64]) -> StepFunction {
        StepFunction::new(bps.to_vec(), vals.to_vec()).unwrap()
    }

    fn outer_nodes(ms: &[SampledMaximal]) -> Vec<f64> {
        let extents: Vec<usize> = ms.iter().map(|m| m.node_values().len()).collect();
        let strides = strides(&extents);
        let total: usize = extents.iter().product();
        (0..total)
            .map(|off| {
                ms.iter()
                    .enumerate()
                    .map(|(j, m)| m.node_values()[off / strides[j] % extents[j]])
                    .product()
            })
            .collect()
    }

    #[test]
    fn separable_indicator_corner() {
        let f = step(&[0.0, 1.0, 2.0], &[1.0, 0.0]);
        let ms = strong_max_separable(&[f.clone(), f]).unwrap();
        // vertex (2, 2): each axis contributes 1/2
        let v = ms[0].node_values()[2] * ms[1].node_values()[2];
        assert_eq!(v, 0.25);
    }

    #[test]
    fn constant_factor_scales_the_other_axis() {
        let c = step(&[0.0, 1.0], &[3.0]);
        let g = step(&[0.0, 1.0, 2.0], &[1.0, 0.0]);
        let ms = strong_max_separable(&[c, g.clone()]).unwrap();
        let alone = uncentered_max(&g).unwrap();
        // inside the constant factor's support every node value is 3, so the
        // product function's values are 3 times the other axis' 1D maximal
        assert_eq!(ms[0].node_values(), &[3.0, 3.0]);
        assert_eq!(ms[1].node_values(), alone.node_values());
    }

    #[test]
    fn one_dimension_reduces_to_uncentered() {
        let f = step(&[0.0, 1.0, 2.0], &[2.0, 1.0]);
        let ms = strong_max_separable(std::slice::from_ref(&f)).unwrap();
        let direct = uncentered_max(&f).unwrap();
        assert_eq!(ms[0].node_values(), direct.node_values());

        let t = TensorStepFunction::from_factors(&[f.clone()]).unwrap();
        let it = strong_max_iterated(&t).unwrap();
        assert_eq!(it.vertex_values, direct.node_values());
        assert_eq!(it.envelope.values(), direct.envelope().values());
    }

    #[test]
    fn iterated_matches_separable_product_at_vertices() {
        let mut rng = rng_for_seed(30);
        for _ in 0..10 {
            let u = random_step(&mut rng, 12);
            let v = random_step(&mut rng, 12);
            let t = TensorStepFunction::from_factors(&[u.clone(), v.clone()]).unwrap();
            let it = strong_max_iterated(&t).unwrap();
            let ms = strong_max_separable(&[u, v]).unwrap();
            let expected = outer_nodes(&ms);
            assert_eq!(it.vertex_values.len(), expected.len());
            for (a, b) in it.vertex_values.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-12 * b.max(1.0), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn iterated_three_axes_factorizes() {
        let mut rng = rng_for_seed(31);
        let fs: Vec<StepFunction> = (0..3).map(|_| random_step(&mut rng, 6)).collect();
        let t = TensorStepFunction::from_factors(&fs).unwrap();
        let it = strong_max_iterated(&t).unwrap();
        let ms = strong_max_separable(&fs).unwrap();
        for (a, b) in it.vertex_values.iter().zip(&outer_nodes(&ms)) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn axis_order_does_not_matter_for_separable_input() {
        let mut rng = rng_for_seed(32);
        let u = random_step(&mut rng, 10);
        let v = random_step(&mut rng, 10);
        let t = TensorStepFunction::from_factors(&[u, v]).unwrap();
        let fwd = strong_max_iterated_in_order(&t, &[0, 1]).unwrap();
        let rev = strong_max_iterated_in_order(&t, &[1, 0]).unwrap();
        for (a, b) in fwd.vertex_values.iter().zip(&rev.vertex_values) {
            assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn envelope_dominates_input_cells() {
        let mut rng = rng_for_seed(33);
        let u = random_step(&mut rng, 10);
        let v = random_step(&mut rng, 10);
        let t = TensorStepFunction::from_factors(&[u, v]).unwrap();
        let it = strong_max_iterated(&t).unwrap();
        for (e, f) in it.envelope.values().iter().zip(t.values()) {
            assert!(e >= f);
        }
    }

    #[test]
    fn constant_tensor_fixed_at_vertices() {
        let axes = vec![vec![0.0, 1.0, 2.0], vec![0.0, 0.5, 1.0]];
        let t = TensorStepFunction::new(axes, vec![2.0; 4]).unwrap();
        let it = strong_max_iterated(&t).unwrap();
        assert!(it.vertex_values.iter().all(|&v| (v - 2.0).abs() < 1e-15));
    }

    #[test]
    fn separability_invariant_of_from_factors() {
        let u = step(&[0.0, 1.0, 2.0], &[2.0, 3.0]);
        let v = step(&[0.0, 1.0], &[5.0]);
        let t = TensorStepFunction::from_factors(&[u, v]).unwrap();
        assert_eq!(t.values(), &[10.0, 15.0]);
        assert!(t.separable_factors().is_some());
    }

    #[test]
    fn strong_ratio_squares_the_1d_ratio() {
        let params = PNormParams::new(2.0).unwrap();
        let spec = ExtremalSpec::new(params, 0.1, 10.0, 16).unwrap();
        let one = strong_ratio(1, &spec).unwrap();
        let two = strong_ratio(2, &spec).unwrap();
        assert_eq!(two.ratio, one.ratio * one.ratio);
        let c = solve_cp(&params).unwrap().value;
        assert!((two.target - c * c).abs() <= 1e-12 * c * c);
        assert!(strong_ratio(0, &spec).is_err());
    }

    #[test]
    fn rejects_bad_tensors() {
        assert!(TensorStepFunction::new(vec![], vec![]).is_err());
        assert!(TensorStepFunction::new(vec![vec![0.0, 1.0]], vec![1.0, 2.0]).is_err());
        assert!(TensorStepFunction::new(vec![vec![1.0, 0.0]], vec![1.0]).is_err());
        let neg = TensorStepFunction::new(vec![vec![0.0, 1.0]], vec![-1.0]).unwrap();
        assert!(strong_max_iterated(&neg).is_err());
    }

    #[test]
    fn tensor_size_cap() {
        let axis: Vec<f64> = (0..=4000).map(f64::from).collect();
        let r = TensorStepFunction::from_factors(&[
            StepFunction::new(axis.clone(), vec![1.0; 4000]).unwrap(),
            StepFunction::new(axis, vec![1.0; 4000]).unwrap(),
        ]);
        assert!(matches!(r, Err(Error::SizeLimit(_))));
    }
}
