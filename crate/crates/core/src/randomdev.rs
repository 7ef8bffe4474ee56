//! Random matrix developments of piecewise-linear paths.
//!
//! With `A_1..A_d` drawn from an `N × N` ensemble, the unitary development
//! solves `dZ = (i/√N) Z Σ_j A_j dγ^j` and the GL development
//! `dZ = (1/√N) Z Σ_j A_j dγ^j`. On a linear segment the generator is
//! constant, so both are exact products of matrix exponentials. As
//! `N → ∞`, `(1/N) E tr Z` of a GUE development tends to the
//! Schwinger-Dyson kernel and `(1/N) E ⟨Z_γ, Z_σ⟩_HS` of a Ginibre GL
//! development tends to the signature kernel.
//!
//! Sample `m`, matrix `j` is drawn from a ChaCha stream keyed by
//! `(seed, m, j)`, so estimates are identical for any worker count.

use matrixmultiply::CGemmOption;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::paths::{piecewise_constant_increments, IncrementSequence, PartitionSpec, Path};
use crate::sum::pairwise_sum;

/// Per-sample working-set budget: `N·N·d` complex entries.
pub const MAX_SAMPLE_ENTRIES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    /// Gaussian unitary ensemble (Hermitian, `E|A(m,l)|² = 1`).
    Gue,
    /// Independent complex Gaussian entries with `E|A(m,l)|² = 1`.
    ComplexGinibre,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleConfig {
    pub kind: EnsembleKind,
    pub dim_n: usize,
    pub samples_m: usize,
    pub seed: u64,
    pub path_dim: usize,
}

impl EnsembleConfig {
    pub fn new(kind: EnsembleKind, dim_n: usize, samples_m: usize, seed: u64, path_dim: usize) -> Result<Self> {
        if dim_n == 0 || samples_m == 0 || path_dim == 0 {
            return Err(Error::domain("N, M and the path dimension must be positive"));
        }
        let entries = dim_n
            .checked_mul(dim_n)
            .and_then(|x| x.checked_mul(path_dim))
            .filter(|&x| x <= MAX_SAMPLE_ENTRIES);
        if entries.is_none() {
            return Err(Error::resource(format!(
                "N={dim_n}, d={path_dim} exceeds {MAX_SAMPLE_ENTRIES} matrix entries per sample"
            )));
        }
        Ok(Self {
            kind,
            dim_n,
            samples_m,
            seed,
            path_dim,
        })
    }
}

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(n, n, f))
    }

    /// Builds from row-major entries.
    pub fn from_rows(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::domain("entry count does not match dimension"));
        }
        Ok(Self(DMatrix::from_row_slice(n, n, entries)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    /// `max |self − other|` entrywise.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i..n).all(|j| (self.0[(i, j)] - self.0[(j, i)].conj()).norm() <= tol))
    }

    /// Maximum column sum of moduli.
    pub fn norm_one(&self) -> f64 {
        self.0
            .column_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `‖Z*Z − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.dim()))
    }

    /// Matrix product through a packed complex GEMM kernel.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim();
        assert_eq!(n, rhs.dim(), "matmul dimension mismatch");
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        let col = n as isize;
        // SAFETY: all three buffers are contiguous column-major n×n matrices
        // (row stride 1, column stride n) and `out` does not alias the inputs.
        // `Complex64` is `repr(C)` with layout `[f64; 2]`.
        unsafe {
            matrixmultiply::zgemm(
                CGemmOption::Standard,
                CGemmOption::Standard,
                n,
                n,
                n,
                [1.0, 0.0],
                self.0.as_ptr() as *const [f64; 2],
                1,
                col,
                rhs.0.as_ptr() as *const [f64; 2],
                1,
                col,
                [0.0, 0.0],
                out.as_mut_ptr() as *mut [f64; 2],
                1,
                col,
            );
        }
        ComplexMatrix(out)
    }

    fn add_scaled(&mut self, other: &ComplexMatrix, c: f64) {
        self.0.zip_apply(&other.0, |a, b| *a += b * c);
    }

    /// `Re tr(self* · other) / N`, summed in a fixed order.
    fn normalized_hs_pairing(&self, other: &ComplexMatrix) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            re += a.re * b.re + a.im * b.im;
            im += a.re * b.im - a.im * b.re;
        }
        let n = self.dim() as f64;
        (re / n, im / n)
    }
}

/// `exp(i·H)` for Hermitian `H` via its eigendecomposition, unitary up to
/// roundoff.
pub fn expm_i_hermitian(h: &ComplexMatrix) -> ComplexMatrix {
    let eig = h.0.clone().symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        let phase = Complex64::from_polar(1.0, eig.eigenvalues[k]);
        col.iter_mut().for_each(|z| *z *= phase);
    }
    ComplexMatrix(scaled).matmul(&ComplexMatrix(eig.eigenvectors.adjoint()))
}

const TAYLOR_DEGREE: usize = 16;

/// `exp(X)` by scaling and squaring: `X/2^s` has 1-norm at most ½, where a
/// degree-16 Taylor polynomial is accurate to below 1e-20 relative.
pub fn expm(x: &ComplexMatrix) -> ComplexMatrix {
    let n = x.dim();
    let norm = x.norm_one();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = x.scale(Complex64::new((-squarings as f64).exp2(), 0.0));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=TAYLOR_DEGREE {
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        result.add_scaled(&term, 1.0);
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

fn stream_rng(seed: u64, sample: u64, matrix: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&sample.to_le_bytes());
    key[16..24].copy_from_slice(&matrix.to_le_bytes());
    key[24..].copy_from_slice(b"sigdevmc");
    ChaCha8Rng::from_seed(key)
}

/// The `d` independent matrices of sample `sample_index`.
pub fn sample_matrices(cfg: &EnsembleConfig, sample_index: usize) -> Result<Vec<ComplexMatrix>> {
    if sample_index >= cfg.samples_m {
        return Err(Error::domain(format!(
            "sample index {sample_index} outside 0..{}",
            cfg.samples_m
        )));
    }
    let n = cfg.dim_n;
    let half = std::f64::consts::FRAC_1_SQRT_2;
    Ok((0..cfg.path_dim)
        .map(|j| {
            let mut rng = stream_rng(cfg.seed, sample_index as u64, j as u64);
            let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            match cfg.kind {
                EnsembleKind::Gue => {
                    for r in 0..n {
                        m[(r, r)] = Complex64::new(normal(), 0.0);
                        for c in r + 1..n {
                            let z = Complex64::new(normal() * half, normal() * half);
                            m[(r, c)] = z;
                            m[(c, r)] = z.conj();
                        }
                    }
                }
                EnsembleKind::ComplexGinibre => {
                    for r in 0..n {
                        for c in 0..n {
                            m[(r, c)] = Complex64::new(normal() * half, normal() * half);
                        }
                    }
                }
            }
            ComplexMatrix(m)
        })
        .collect())
}

fn check_development_inputs(incs: &IncrementSequence, mats: &[ComplexMatrix], n: usize) -> Result<()> {
    if mats.len() != incs.dim() {
        return Err(Error::domain(format!(
            "{} matrices for a {}-dimensional path",
            mats.len(),
            incs.dim()
        )));
    }
    if mats.iter().any(|m| m.dim() != n) {
        return Err(Error::domain(format!("matrices must be {n}×{n}")));
    }
    Ok(())
}

/// `Σ_j A_j δ^j / √N`.
fn generator(mats: &[ComplexMatrix], delta: &[f64], n: usize) -> ComplexMatrix {
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let mut g = ComplexMatrix::zeros(n);
    for (a, &x) in mats.iter().zip(delta) {
        if x != 0.0 {
            g.add_scaled(a, x * inv_sqrt_n);
        }
    }
    g
}

/// `∏_k exp((i/√N) Σ_j A_j Δ_k^j)` for Hermitian `A_j`.
pub fn unitary_development(incs: &IncrementSequence, mats: &[ComplexMatrix], n: usize) -> Result<ComplexMatrix> {
    check_development_inputs(incs, mats, n)?;
    for (j, a) in mats.iter().enumerate() {
        let scale = a.0.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if !a.is_hermitian(1e-12 * scale) {
            return Err(Error::domain(format!("matrix {j} is not Hermitian")));
        }
    }
    let active: Vec<&[f64]> = incs.iter().filter(|d| d.iter().any(|&x| x != 0.0)).collect();
    if active.is_empty() {
        return Ok(ComplexMatrix::identity(n));
    }
    if incs.dim() == 1 {
        // all generators are multiples of A_1 and commute
        let total: f64 = active.iter().map(|d| d[0]).sum();
        return Ok(expm_i_hermitian(&generator(mats, &[total], n)));
    }
    let mut z: Option<ComplexMatrix> = None;
    for delta in active {
        let step = expm_i_hermitian(&generator(mats, delta, n));
        z = Some(match z {
            None => step,
            Some(acc) => acc.matmul(&step),
        });
    }
    Ok(z.expect("at least one active increment"))
}

/// `∏_k exp((1/√N) Σ_j A_j Δ_k^j)` for arbitrary complex `A_j`.
pub fn gl_development(incs: &IncrementSequence, mats: &[ComplexMatrix], n: usize) -> Result<ComplexMatrix> {
    check_development_inputs(incs, mats, n)?;
    let mut z: Option<ComplexMatrix> = None;
    for delta in incs.iter().filter(|d| d.iter().any(|&x| x != 0.0)) {
        let step = expm(&generator(mats, delta, n));
        z = Some(match z {
            None => step,
            Some(acc) => acc.matmul(&step),
        });
    }
    Ok(z.unwrap_or_else(|| ComplexMatrix::identity(n)))
}

/// Monte-Carlo estimate of `K_γ(0, T)` from GUE developments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// Largest `|Im (1/N) tr Z|` over the samples; the limit is real.
    pub imag_diag: f64,
    /// Largest `‖Z*Z − I‖_max` over the samples.
    pub max_unitarity_defect: f64,
}

/// Monte-Carlo estimate of the signature kernel from Ginibre GL developments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub imag_diag: f64,
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = pairwise_sum(values) / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// `(1/M) Σ_m (1/N) tr Z_m` for GUE developments of the path's increments.
pub fn rk_montecarlo(path: &Path, partition: &PartitionSpec, cfg: &EnsembleConfig) -> Result<RkEstimate> {
    if cfg.kind != EnsembleKind::Gue {
        return Err(Error::domain("unitary developments need the GUE ensemble"));
    }
    if cfg.path_dim != path.dim() {
        return Err(Error::domain("ensemble path dimension does not match the path"));
    }
    let incs = piecewise_constant_increments(path, &partition.resolve(path)?)?;
    let n = cfg.dim_n;
    let per_sample: Vec<(f64, f64, f64)> = (0..cfg.samples_m)
        .into_par_iter()
        .map(|m| -> Result<(f64, f64, f64)> {
            let mats = sample_matrices(cfg, m)?;
            let z = unitary_development(&incs, &mats, n)?;
            let tr = z.trace() / n as f64;
            Ok((tr.re, tr.im, z.unitarity_defect()))
        })
        .collect::<Result<_>>()?;
    let re: Vec<f64> = per_sample.iter().map(|s| s.0).collect();
    let (estimate, stderr) = mean_and_stderr(&re);
    Ok(RkEstimate {
        estimate,
        stderr,
        imag_diag: per_sample.iter().map(|s| s.1.abs()).fold(0.0, f64::max),
        max_unitarity_defect: per_sample.iter().map(|s| s.2).fold(0.0, f64::max),
    })
}

/// `(1/M) Σ_m (1/N) ⟨Z_γ, Z_σ⟩_HS` with Ginibre GL developments driven by
/// the same matrices for both paths.
pub fn sigkernel_montecarlo(
    gamma: &Path,
    sigma: &Path,
    partition: &PartitionSpec,
    cfg: &EnsembleConfig,
) -> Result<SigEstimate> {
    if cfg.kind != EnsembleKind::ComplexGinibre {
        return Err(Error::domain("GL developments need the complex Ginibre ensemble"));
    }
    if gamma.dim() != sigma.dim() || cfg.path_dim != gamma.dim() {
        return Err(Error::domain("path and ensemble dimensions must agree"));
    }
    let inc_g = piecewise_constant_increments(gamma, &partition.resolve(gamma)?)?;
    let inc_s = piecewise_constant_increments(sigma, &partition.resolve(sigma)?)?;
    let n = cfg.dim_n;
    let per_sample: Vec<(f64, f64)> = (0..cfg.samples_m)
        .into_par_iter()
        .map(|m| -> Result<(f64, f64)> {
            let mats = sample_matrices(cfg, m)?;
            let zg = gl_development(&inc_g, &mats, n)?;
            let zs = gl_development(&inc_s, &mats, n)?;
            Ok(zg.normalized_hs_pairing(&zs))
        })
        .collect::<Result<_>>()?;
    let re: Vec<f64> = per_sample.iter().map(|s| s.0).collect();
    let (estimate, stderr) = mean_and_stderr(&re);
    Ok(SigEstimate {
        estimate,
        stderr,
        imag_diag: per_sample.iter().map(|s| s.1.abs()).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gue(n: usize, m: usize, seed: u64, d: usize) -> EnsembleConfig {
        EnsembleConfig::new(EnsembleKind::Gue, n, m, seed, d).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(EnsembleConfig::new(EnsembleKind::Gue, 0, 1, 0, 1).is_err());
        assert!(matches!(
            EnsembleConfig::new(EnsembleKind::Gue, 1 << 12, 1, 0, 2),
            Err(Error::Resource(_))
        ));
        let cfg = gue(4, 3, 0, 1);
        assert!(sample_matrices(&cfg, 3).is_err());
    }

    #[test]
    fn gue_is_hermitian_and_deterministic() {
        let cfg = gue(12, 4, 99, 2);
        let a = sample_matrices(&cfg, 2).unwrap();
        assert_eq!(a.len(), 2);
        for m in &a {
            assert!(m.is_hermitian(0.0));
            assert!((0..12).all(|i| m.get(i, i).im == 0.0));
        }
        assert_eq!(a, sample_matrices(&cfg, 2).unwrap());
        assert_ne!(a, sample_matrices(&cfg, 1).unwrap());
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn second_moments_are_one() {
        for kind in [EnsembleKind::Gue, EnsembleKind::ComplexGinibre] {
            let cfg = EnsembleConfig::new(kind, 4, 10_000, 5, 1).unwrap();
            let mut acc = [[0.0; 4]; 4];
            for s in 0..cfg.samples_m {
                let a = &sample_matrices(&cfg, s).unwrap()[0];
                for (i, row) in acc.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v += a.get(i, j).norm_sqr();
                    }
                }
            }
            for row in acc {
                for v in row {
                    let e = v / cfg.samples_m as f64;
                    assert!((0.94..=1.06).contains(&e), "{kind:?}: {e}");
                }
            }
        }
    }

    #[test]
    fn unitary_development_basics() {
        let cfg = gue(5, 1, 1, 2);
        let mats = sample_matrices(&cfg, 0).unwrap();
        let zero = IncrementSequence::new(2, vec![vec![0.0, 0.0]; 3]).unwrap();
        assert_eq!(unitary_development(&zero, &mats, 5).unwrap(), ComplexMatrix::identity(5));

        let a = ComplexMatrix::from_rows(1, &[Complex64::new(0.7, 0.0)]).unwrap();
        let z = unitary_development(&IncrementSequence::scalar(&[1.3]).unwrap(), &[a], 1).unwrap();
        let want = Complex64::from_polar(1.0, 0.7 * 1.3);
        assert!((z.get(0, 0) - want).norm() < 1e-15);
        assert!((z.get(0, 0).norm() - 1.0).abs() < 1e-15);

        let not_hermitian = ComplexMatrix::from_rows(1, &[Complex64::new(0.0, 1.0)]).unwrap();
        let inc = IncrementSequence::scalar(&[1.0]).unwrap();
        assert!(unitary_development(&inc, &[not_hermitian], 1).is_err());
        assert!(unitary_development(&inc, &mats, 5).is_err());
    }

    #[test]
    fn commuting_steps_compose() {
        let cfg = gue(8, 1, 3, 2);
        let mats = sample_matrices(&cfg, 0).unwrap();
        let two = IncrementSequence::new(2, vec![vec![0.3, -0.6], vec![0.2, -0.4]]).unwrap();
        let one = IncrementSequence::new(2, vec![vec![0.5, -1.0]]).unwrap();
        let a = unitary_development(&two, &mats, 8).unwrap();
        let b = unitary_development(&one, &mats, 8).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-10);
    }

    #[test]
    fn unitarity_for_large_steps() {
        let cfg = gue(40, 1, 8, 3);
        let mats = sample_matrices(&cfg, 0).unwrap();
        let inc = IncrementSequence::new(3, vec![vec![10.0, 0.0, 0.0], vec![-4.0, 5.0, 7.0]]).unwrap();
        let z = unitary_development(&inc, &mats, 40).unwrap();
        assert!(z.unitarity_defect() <= 1e-10);
        assert!((z.trace() / 40.0).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn expm_matches_scalar_and_diagonal_cases() {
        let x = ComplexMatrix::from_rows(2, &[
            Complex64::new(3.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-2.0, 0.5),
        ])
        .unwrap();
        let e = expm(&x);
        assert!((e.get(0, 0) - Complex64::new(3.0, 1.0).exp()).norm() < 1e-12 * 20.1);
        assert!((e.get(1, 1) - Complex64::new(-2.0, 0.5).exp()).norm() < 1e-14);
        assert_eq!(e.get(0, 1), Complex64::new(0.0, 0.0));
        // nilpotent: exp(N) = I + N
        let nil = ComplexMatrix::from_rows(2, &[
            Complex64::new(0.0, 0.0),
            Complex64::new(5.0, -1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!((expm(&nil).get(0, 1) - Complex64::new(5.0, -1.0)).norm() < 1e-13);
    }

    #[test]
    fn expm_agrees_with_eigen_route_on_anti_hermitian() {
        let cfg = gue(10, 1, 21, 1);
        let h = sample_matrices(&cfg, 0).unwrap().remove(0).scale(Complex64::new(0.9, 0.0));
        let via_taylor = expm(&h.scale(Complex64::new(0.0, 1.0)));
        let via_eigen = expm_i_hermitian(&h);
        assert!(via_taylor.max_abs_diff(&via_eigen) < 1e-12);
    }

    #[test]
    fn gl_development_basics() {
        let cfg = EnsembleConfig::new(EnsembleKind::ComplexGinibre, 6, 1, 4, 2).unwrap();
        let mats = sample_matrices(&cfg, 0).unwrap();
        let zero = IncrementSequence::new(2, vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(gl_development(&zero, &mats, 6).unwrap(), ComplexMatrix::identity(6));

        let a = ComplexMatrix::from_rows(1, &[Complex64::new(0.4, 0.0)]).unwrap();
        let z = gl_development(&IncrementSequence::scalar(&[2.0]).unwrap(), &[a], 1).unwrap();
        assert!((z.get(0, 0).re - 0.8f64.exp()).abs() < 1e-14);

        // det ∘ exp = exp ∘ tr, step by step
        let inc = IncrementSequence::new(2, vec![vec![0.5, 1.0], vec![-0.3, 0.8], vec![1.1, 0.0]]).unwrap();
        let z = gl_development(&inc, &mats, 6).unwrap();
        let mut log_det = Complex64::new(0.0, 0.0);
        for d in inc.iter() {
            log_det += generator(&mats, d, 6).trace();
        }
        let det = z.inner().clone().determinant();
        let want = log_det.exp();
        assert!((det - want).norm() <= 1e-8 * want.norm());
    }

    #[test]
    fn rk_constant_path_is_exact() {
        let c = Path::constant(&[0.5]).unwrap();
        let est = rk_montecarlo(&c, &PartitionSpec::Knots, &gue(6, 5, 0, 1)).unwrap();
        assert_eq!((est.estimate, est.stderr, est.imag_diag), (1.0, 0.0, 0.0));
    }

    #[test]
    fn rk_is_deterministic_and_reparameterisation_invariant() {
        let p = Path::uniform(vec![vec![0.0, 0.0], vec![0.4, 0.1], vec![0.2, 0.7]]).unwrap();
        let q = Path::new(vec![-3.0, 0.0, 10.0], p.points().map(<[f64]>::to_vec).collect()).unwrap();
        let cfg = gue(12, 16, 42, 2);
        let a = rk_montecarlo(&p, &PartitionSpec::Knots, &cfg).unwrap();
        let b = rk_montecarlo(&p, &PartitionSpec::Knots, &cfg).unwrap();
        let c = rk_montecarlo(&q, &PartitionSpec::Knots, &cfg).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.estimate.to_bits(), c.estimate.to_bits());
        assert!(a.max_unitarity_defect <= 1e-10);
        assert!(rk_montecarlo(&p, &PartitionSpec::Knots, &gue(4, 2, 0, 1)).is_err());
    }

    #[test]
    fn sigkernel_constant_and_symmetry() {
        let cfg = EnsembleConfig::new(EnsembleKind::ComplexGinibre, 8, 6, 17, 2).unwrap();
        let c = Path::constant(&[0.0, 1.0]).unwrap();
        let est = sigkernel_montecarlo(&c, &c, &PartitionSpec::Knots, &cfg).unwrap();
        assert_eq!(est.estimate, 1.0);
        let v = Path::line(&[1.0, 0.0]).unwrap();
        let w = Path::line(&[1.0, 1.0]).unwrap();
        let ab = sigkernel_montecarlo(&v, &w, &PartitionSpec::Knots, &cfg).unwrap();
        let ba = sigkernel_montecarlo(&w, &v, &PartitionSpec::Knots, &cfg).unwrap();
        assert!((ab.estimate - ba.estimate).abs() <= 1e-12);
        let gue_cfg = gue(8, 2, 0, 2);
        assert!(sigkernel_montecarlo(&v, &w, &PartitionSpec::Knots, &gue_cfg).is_err());
    }
}
