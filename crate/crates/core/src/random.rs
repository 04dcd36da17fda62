//! Seeded generators for randomized verification suites. All randomness in
//! the crate flows through a counter-based ChaCha stream so every suite is
//! reproducible from a single u64 seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::step_fn::StepFunction;

pub fn rng_for_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random nonnegative step function: cell count uniform in [2, max_cells],
/// cell widths U[0.1, 2), values U[0, 10), left endpoint U[-10, 10).
pub fn random_step(rng: &mut impl Rng, max_cells: usize) -> StepFunction {
    let m = rng.gen_range(2..=max_cells.max(2));
    let mut bps = Vec::with_capacity(m + 1);
    let mut x = rng.gen_range(-10.0..10.0);
    bps.push(x);
    for _ in 0..m {
        x += rng.gen_range(0.1..2.0);
        bps.push(x);
    }
    let values = (0..m).map(|_| rng.gen_range(0.0..10.0)).collect();
    StepFunction::new(bps, values).expect("generated grid is strictly increasing")
}

/// Random even symmetrically decreasing step function: a center cell
/// (-t_1, t_1) carrying the largest value, mirrored shells outward with
/// non-increasing values.
pub fn random_symmetric_decreasing(rng: &mut impl Rng, max_shells: usize) -> StepFunction {
    let shells = rng.gen_range(1..=max_shells.max(1));
    let mut radii = Vec::with_capacity(shells);
    let mut r = 0.0;
    for _ in 0..shells {
        r += rng.gen_range(0.1..2.0);
        radii.push(r);
    }
    let mut values: Vec<f64> = (0..shells).map(|_| rng.gen_range(0.0..10.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));

    let mut bps: Vec<f64> = radii.iter().rev().map(|&t| -t).collect();
    bps.extend(radii.iter());
    let mut vals: Vec<f64> = values.iter().skip(1).rev().copied().collect();
    vals.extend(values.iter());
    StepFunction::new(bps, vals).expect("mirrored grid is strictly increasing")
}

/// Random level for a given function, spanning from far below to slightly
/// above its essential supremum so both empty and full level sets occur.
pub fn random_lambda(rng: &mut impl Rng, f: &StepFunction) -> f64 {
    let top = f.values().iter().fold(0.0_f64, |a, &b| a.max(b)).max(0.01);
    rng.gen_range(0.001..1.1 * top)
}
