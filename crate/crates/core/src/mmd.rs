//! Gram matrices and MMD² between empirical path distributions.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::paths::{PartitionSpec, Path};
use crate::sdkernel::{k_sd, Scheme};
use crate::signature::signature_kernel;
use crate::sum::order_free_mean;

/// A nonempty list of paths of one dimension, weighted uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    paths: Vec<Path>,
}

impl PathSample {
    pub fn new(paths: Vec<Path>) -> Result<Self> {
        let first = paths.first().ok_or_else(|| Error::domain("empty path sample"))?;
        if let Some(p) = paths.iter().find(|p| p.dim() != first.dim()) {
            return Err(Error::domain(format!(
                "mixed dimensions in sample: {} and {}",
                first.dim(),
                p.dim()
            )));
        }
        Ok(Self { paths })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.paths[0].dim()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelChoice {
    SdExplicit,
    SdImplicit,
    SdSeries { tol: f64 },
    SigTruncated { tol: f64 },
}

impl KernelChoice {
    pub fn tag(&self) -> &'static str {
        match self {
            KernelChoice::SdExplicit => "sd_explicit",
            KernelChoice::SdImplicit => "sd_implicit",
            KernelChoice::SdSeries { .. } => "sd_series",
            KernelChoice::SigTruncated { .. } => "sig_truncated",
        }
    }
}

/// Kernel value on one pair. The pair is put in canonical order first so
/// that `k(a, b)` and `k(b, a)` are the same floating-point number.
pub fn kernel_value(a: &Path, b: &Path, kernel: KernelChoice, partition: &PartitionSpec) -> Result<f64> {
    let (a, b) = if a.canonical_cmp(b).is_gt() { (b, a) } else { (a, b) };
    match kernel {
        KernelChoice::SdExplicit => Ok(k_sd(a, b, Scheme::Explicit, partition)?.value),
        KernelChoice::SdImplicit => Ok(k_sd(a, b, Scheme::Implicit, partition)?.value),
        KernelChoice::SdSeries { tol } => Ok(k_sd(a, b, Scheme::Series { tol }, partition)?.value),
        KernelChoice::SigTruncated { tol } => Ok(signature_kernel(a, b, tol)?.value),
    }
}

/// Dense row-major kernel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
    pub kernel_tag: String,
}

impl GramMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    /// Largest `|G(i,j) − G(j,i)|`; `None` when not square.
    pub fn asymmetry(&self) -> Option<f64> {
        (self.rows == self.cols).then(|| {
            (0..self.rows)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| (self.get(i, j) - self.get(j, i)).abs())
                .fold(0.0, f64::max)
        })
    }

    /// Ascending eigenvalues of a square Gram matrix.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.rows != self.cols {
            return Err(Error::domain("eigenvalues need a square Gram matrix"));
        }
        let m = DMatrix::from_row_slice(self.rows, self.cols, &self.values);
        let sym = (&m + m.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

/// `G(i, j) = k(a_i, b_j)`. When both samples are the same list only the
/// upper triangle is evaluated.
pub fn gram(a: &PathSample, b: &PathSample, kernel: KernelChoice, partition: &PartitionSpec) -> Result<GramMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::domain(format!("sample dimensions differ: {} vs {}", a.dim(), b.dim())));
    }
    let (rows, cols) = (a.len(), b.len());
    let same = a == b;
    let tasks: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (if same { i } else { 0 }..cols).map(move |j| (i, j)))
        .collect();
    let computed: Vec<f64> = tasks
        .par_iter()
        .map(|&(i, j)| kernel_value(&a.paths[i], &b.paths[j], kernel, partition))
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; rows * cols];
    for (&(i, j), v) in tasks.iter().zip(computed) {
        values[i * cols + j] = v;
        if same {
            values[j * cols + i] = v;
        }
    }
    Ok(GramMatrix {
        rows,
        cols,
        values,
        kernel_tag: kernel.tag().to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Estimator {
    /// Includes same-index terms; nonnegative for PSD kernels.
    #[default]
    VStatistic,
    /// Drops same-index terms from the within-sample means.
    UStatistic,
}

fn within_mean(g: &GramMatrix, estimator: Estimator) -> Result<f64> {
    match estimator {
        Estimator::VStatistic => Ok(order_free_mean(&g.values)),
        Estimator::UStatistic => {
            if g.rows < 2 {
                return Err(Error::domain("the U-statistic needs at least two paths per sample"));
            }
            let off: Vec<f64> = (0..g.rows)
                .flat_map(|i| (0..g.cols).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| g.get(i, j))
                .collect();
            Ok(order_free_mean(&off))
        }
    }
}

/// `E k(γ,γ′) + E k(σ,σ′) − 2 E k(γ,σ)` over the empirical measures.
pub fn mmd2(
    a: &PathSample,
    b: &PathSample,
    kernel: KernelChoice,
    partition: &PartitionSpec,
    estimator: Estimator,
) -> Result<f64> {
    let gaa = gram(a, a, kernel, partition)?;
    let gbb = if a == b { gaa.clone() } else { gram(b, b, kernel, partition)? };
    let gab = if a == b { gaa.clone() } else { gram(a, b, kernel, partition)? };
    let kaa = within_mean(&gaa, estimator)?;
    let kbb = within_mean(&gbb, estimator)?;
    let kab = order_free_mean(&gab.values);
    Ok(kaa + kbb - 2.0 * kab)
}
