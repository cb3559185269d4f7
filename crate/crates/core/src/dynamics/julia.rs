use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numerics::{eval_map, MapSpec};
use crate::{Error, Result};

/// Samples the Julia set by random inverse iteration.
///
/// Starts from the most repelling finite fixed point, repeatedly replaces
/// the current point by a uniformly chosen preimage, drops the first
/// `transient` points and returns the next `n_points`. Deterministic for a
/// given `seed`.
pub fn julia_sample(map: &MapSpec, n_points: usize, transient: usize, seed: u64) -> Result<Vec<Complex64>> {
    let mut z = most_repelling_fixed_point(map)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n_points);
    for step in 0..transient + n_points {
        let pre = map.preimages(z)?;
        if pre.is_empty() {
            return Err(Error::RootFinding { iterations: step });
        }
        z = pre[rng.gen_range(0..pre.len())];
        if step >= transient {
            out.push(z);
        }
    }
    Ok(out)
}

fn most_repelling_fixed_point(map: &MapSpec) -> Result<Complex64> {
    map.fixed_points()?
        .into_iter()
        .filter_map(|p| eval_map(map, p).ok().map(|(_, d)| (p, d.norm())))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(p, _)| p)
        .ok_or(Error::RootFinding { iterations: 0 })
}
