//! Exact fractional Brownian motion sampling by Cholesky factorisation of
//! the covariance `R(s,t) = ½(s^{2H} + t^{2H} − |s−t|^{2H})`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Path;
use crate::error::{Error, Result};

/// Largest grid the dense O(n³) factorisation accepts.
pub const MAX_FBM_POINTS: usize = 4097;

/// Piecewise-linear interpolation of an fBm sample on the uniform grid of
/// `[0, 1]` with `n_points` samples; coordinates are independent.
pub fn gen_fbm(hurst: f64, n_points: usize, dim: usize, seed: u64) -> Result<Path> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::domain(format!("Hurst parameter {hurst} outside (0, 1)")));
    }
    if n_points < 2 {
        return Err(Error::domain("fBm needs at least two grid points"));
    }
    if dim == 0 {
        return Err(Error::domain("fBm dimension must be at least 1"));
    }
    if n_points > MAX_FBM_POINTS {
        return Err(Error::resource(format!(
            "{n_points} fBm points exceeds the dense limit {MAX_FBM_POINTS}"
        )));
    }
    let steps = n_points - 1;
    let grid: Vec<f64> = (1..=steps).map(|k| k as f64 / steps as f64).collect();
    let two_h = 2.0 * hurst;
    let cov = DMatrix::from_fn(steps, steps, |i, j| {
        let (s, t) = (grid[i], grid[j]);
        0.5 * (s.powf(two_h) + t.powf(two_h) - (s - t).abs().powf(two_h))
    });
    let chol = cov
        .cholesky()
        .ok_or_else(|| Error::Numeric("fBm covariance is not positive definite".into()))?;
    let lower = chol.l();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(dim);
    for _ in 0..dim {
        let z = DVector::from_fn(steps, |_, _| StandardNormal.sample(&mut rng));
        coords.push(&lower * z);
    }

    let mut times = vec![0.0];
    times.extend_from_slice(&grid);
    let mut points = vec![0.0; dim];
    for k in 0..steps {
        points.extend(coords.iter().map(|c| c[k]));
    }
    Path::from_flat(times, points, dim)
}
