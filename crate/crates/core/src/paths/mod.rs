//! Piecewise-linear paths, partitions of their time axis and increment
//! sequences.
//!
//! A [`Path`] is stored as sample times plus points and is always read as
//! the linear interpolation of its samples. Piecewise-constant
//! approximations never get a type of their own: every grid scheme only
//! consumes the jumps, so they live in an [`IncrementSequence`].

mod fbm;
mod io;

use std::cmp::Ordering;

use crate::error::{Error, Result};

pub use fbm::gen_fbm;
pub use io::{read_csv, read_jsonl, write_csv, write_jsonl, NamedPath};

/// Largest dyadic order a [`PartitionSpec::MaxVariation`] may resolve to.
pub const MAX_DYADIC_ORDER: u32 = 20;

/// A continuous piecewise-linear path in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    times: Vec<f64>,
    points: Vec<f64>,
    dim: usize,
}

impl Path {
    pub fn new(times: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::domain("all points must share one dimension"));
        }
        Self::from_flat(times, points.into_iter().flatten().collect(), dim)
    }

    /// Builds a path from row-major point storage (`times.len() * dim` values).
    pub fn from_flat(times: Vec<f64>, points: Vec<f64>, dim: usize) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::domain("a path needs at least one sample"));
        }
        if dim == 0 {
            return Err(Error::domain("path dimension must be at least 1"));
        }
        if points.len() != times.len() * dim {
            return Err(Error::domain(format!(
                "{} times but {} coordinates for dimension {dim}",
                times.len(),
                points.len()
            )));
        }
        if times.iter().chain(&points).any(|v| !v.is_finite()) {
            return Err(Error::domain("path contains a non-finite value"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("sample times must be strictly increasing"));
        }
        Ok(Self { times, points, dim })
    }

    /// Samples `points` on a uniform grid of `[0, 1]`.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let n = points.len();
        let times = if n == 1 {
            vec![0.0]
        } else {
            (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
        };
        Self::new(times, points)
    }

    /// The straight line `t ↦ t·v` on `[0, 1]`.
    pub fn line(v: &[f64]) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![vec![0.0; v.len()], v.to_vec()])
    }

    /// A single-sample (constant) path at time 0.
    pub fn constant(point: &[f64]) -> Result<Self> {
        Self::new(vec![0.0], vec![point.to_vec()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn start_time(&self) -> f64 {
        self.times[0]
    }

    pub fn end_time(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// `γ_T − γ_0`.
    pub fn displacement(&self) -> Vec<f64> {
        let last = self.point(self.len() - 1);
        last.iter().zip(self.point(0)).map(|(b, a)| b - a).collect()
    }

    /// The path's own sample times as a partition.
    pub fn knots(&self) -> Partition {
        Partition {
            knots: self.times.clone(),
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(self.start_time()..=self.end_time()).contains(&t) {
            return Err(Error::domain(format!(
                "time {t} outside path span [{}, {}]",
                self.start_time(),
                self.end_time()
            )));
        }
        Ok(())
    }

    /// Index `k` of the last sample with `times[k] <= t`.
    fn segment_of(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// Linear interpolation at `t`. Exact at sample times.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        self.check_time(t)?;
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> Vec<f64> {
        let k = self.segment_of(t);
        if self.times[k] == t || k + 1 == self.len() {
            return self.point(k).to_vec();
        }
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        self.point(k)
            .iter()
            .zip(self.point(k + 1))
            .map(|(a, b)| a + w * (b - a))
            .collect()
    }

    /// Euclidean length of segment `k` (samples `k` to `k + 1`).
    pub fn segment_length(&self, k: usize) -> f64 {
        euclidean_distance(self.point(k), self.point(k + 1))
    }

    /// 1-variation over `[s, t]`: the summed length of the clipped segments.
    pub fn one_variation(&self, s: f64, t: f64) -> Result<f64> {
        if s > t {
            return Err(Error::domain(format!("empty interval [{s}, {t}]")));
        }
        self.check_time(s)?;
        self.check_time(t)?;
        if s == t {
            return Ok(0.0);
        }
        Ok(self.restrict_unchecked(s, t).total_variation())
    }

    /// 1-variation over the whole time span.
    pub fn total_variation(&self) -> f64 {
        (0..self.len() - 1).map(|k| self.segment_length(k)).sum()
    }

    /// The sub-path on `[s, t]`, with interpolated end samples.
    pub fn restrict(&self, s: f64, t: f64) -> Result<Path> {
        if s > t {
            return Err(Error::domain(format!("empty interval [{s}, {t}]")));
        }
        self.check_time(s)?;
        self.check_time(t)?;
        Ok(self.restrict_unchecked(s, t))
    }

    fn restrict_unchecked(&self, s: f64, t: f64) -> Path {
        let mut times = vec![s];
        let mut points = self.eval_unchecked(s);
        if t > s {
            for k in 0..self.len() {
                if self.times[k] > s && self.times[k] < t {
                    times.push(self.times[k]);
                    points.extend_from_slice(self.point(k));
                }
            }
            times.push(t);
            points.extend(self.eval_unchecked(t));
        }
        Path {
            times,
            points,
            dim: self.dim,
        }
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Path {
        Path {
            times: self.times.clone(),
            points: self.points.iter().map(|x| x * factor).collect(),
            dim: self.dim,
        }
    }

    /// A total order on paths by their raw data, used to make pairwise
    /// computations independent of argument order.
    pub fn canonical_cmp(&self, other: &Path) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.times.len().cmp(&other.times.len()))
            .then_with(|| cmp_bits(&self.times, &other.times))
            .then_with(|| cmp_bits(&self.points, &other.points))
    }
}

fn cmp_bits(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

pub(crate) fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (y - x) * (y - x))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `γ ∗ ←σ`: `γ` followed by the time reversal of `σ`.
///
/// The reversed `σ` is translated to start where `γ` ends and its time
/// stamps follow `γ`'s contiguously, keeping `σ`'s own spacing. When the
/// raw end points of the two paths differ, the translated start of `←σ` is
/// kept as its own (stationary) sample, so the result has
/// `len(γ) + len(σ)` samples; otherwise the shared point is merged.
pub fn concat_reverse(gamma: &Path, sigma: &Path) -> Result<Path> {
    if gamma.dim != sigma.dim {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            gamma.dim, sigma.dim
        )));
    }
    let dim = gamma.dim;
    let gamma_end = gamma.point(gamma.len() - 1);
    let sigma_end = sigma.point(sigma.len() - 1);
    let shift: Vec<f64> = gamma_end.iter().zip(sigma_end).map(|(g, s)| g - s).collect();
    let merge = gamma_end == sigma_end || sigma.len() == 1;

    let mut times = gamma.times.clone();
    let mut points = gamma.points.clone();
    let t_end = gamma.end_time();
    let sigma_end_time = sigma.end_time();
    let gap = if merge {
        0.0
    } else {
        (sigma_end_time - sigma.start_time()) / (sigma.len() - 1) as f64
    };
    let skip = usize::from(merge);
    for k in (0..sigma.len()).rev().skip(skip) {
        times.push(t_end + gap + (sigma_end_time - sigma.times[k]));
        points.extend(sigma.point(k).iter().zip(&shift).map(|(x, s)| x + s));
    }
    Path::from_flat(times, points, dim)
}

/// Strictly increasing knots `t_1 < … < t_{n+1}` of a time interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::domain("a partition needs at least one knot"));
        }
        if knots.iter().any(|k| !k.is_finite()) {
            return Err(Error::domain("partition contains a non-finite knot"));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("partition knots must be strictly increasing"));
        }
        Ok(Self { knots })
    }

    /// `intervals` equal sub-intervals of `[a, b]`.
    pub fn uniform(a: f64, b: f64, intervals: usize) -> Result<Self> {
        if intervals == 0 {
            return Self::new(vec![a]);
        }
        let h = (b - a) / intervals as f64;
        let mut knots: Vec<f64> = (0..intervals).map(|k| a + h * k as f64).collect();
        knots.push(b);
        Self::new(knots)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of sub-intervals.
    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    /// Longest sub-interval.
    pub fn mesh(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Splits every sub-interval into `2^lambda` equal pieces.
    pub fn dyadic_refine(&self, lambda: u32) -> Partition {
        if lambda == 0 {
            return self.clone();
        }
        let pieces = 1usize << lambda;
        let scale = (-(lambda as f64)).exp2();
        let mut knots = Vec::with_capacity(self.intervals() * pieces + 1);
        for w in self.knots.windows(2) {
            let h = (w[1] - w[0]) * scale;
            knots.extend((0..pieces).map(|j| w[0] + h * j as f64));
        }
        knots.push(self.knots[self.knots.len() - 1]);
        Partition { knots }
    }

    fn check_covers(&self, path: &Path) -> Result<()> {
        let first = self.knots[0];
        let last = self.knots[self.knots.len() - 1];
        if first != path.start_time() || last != path.end_time() {
            return Err(Error::domain(format!(
                "partition [{first}, {last}] does not match path span [{}, {}]",
                path.start_time(),
                path.end_time()
            )));
        }
        Ok(())
    }
}

/// How to discretise a path before a grid solve or a development.
#[derive(Debug, Clone, PartialEq)]
pub enum PartitionSpec {
    /// The path's own sample times.
    Knots,
    /// The path's sample times, dyadically refined to the given order.
    Dyadic(u32),
    /// The smallest dyadic refinement of the path's samples whose
    /// sub-intervals all carry 1-variation at most the given value.
    MaxVariation(f64),
    /// A fixed partition; it must span the path exactly.
    Explicit(Partition),
}

impl PartitionSpec {
    pub fn resolve(&self, path: &Path) -> Result<Partition> {
        match self {
            PartitionSpec::Knots => Ok(path.knots()),
            PartitionSpec::Dyadic(lambda) => Ok(path.knots().dyadic_refine(*lambda)),
            PartitionSpec::MaxVariation(target) => {
                let lambda = dyadic_order_for_variation(path, *target)?;
                Ok(path.knots().dyadic_refine(lambda))
            }
            PartitionSpec::Explicit(p) => {
                p.check_covers(path)?;
                Ok(p.clone())
            }
        }
    }
}

/// Smallest `λ` such that every segment of `path` split into `2^λ` pieces
/// has 1-variation at most `target`.
pub fn dyadic_order_for_variation(path: &Path, target: f64) -> Result<u32> {
    if target.is_nan() || target <= 0.0 {
        return Err(Error::domain("variation target must be positive"));
    }
    let longest = (0..path.len().saturating_sub(1))
        .map(|k| path.segment_length(k))
        .fold(0.0, f64::max);
    (0..=MAX_DYADIC_ORDER)
        .find(|&lambda| longest * (-(lambda as f64)).exp2() <= target)
        .ok_or_else(|| {
            Error::resource(format!(
                "segment variation {longest} needs more than 2^{MAX_DYADIC_ORDER} pieces to reach {target}"
            ))
        })
}

/// Jumps `Δ_k = γ_{t_{k+1}} − γ_{t_k}` of a piecewise-constant approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementSequence {
    dim: usize,
    deltas: Vec<f64>,
}

impl IncrementSequence {
    pub fn new(dim: usize, deltas: Vec<Vec<f64>>) -> Result<Self> {
        if deltas.iter().any(|d| d.len() != dim) {
            return Err(Error::domain("increment dimension mismatch"));
        }
        Self::from_flat(dim, deltas.into_iter().flatten().collect())
    }

    pub fn from_flat(dim: usize, deltas: Vec<f64>) -> Result<Self> {
        if dim == 0 || !deltas.len().is_multiple_of(dim) {
            return Err(Error::domain("increment storage does not match dimension"));
        }
        if deltas.iter().any(|d| !d.is_finite()) {
            return Err(Error::domain("non-finite increment"));
        }
        Ok(Self { dim, deltas })
    }

    /// Increments in `d = 1`.
    pub fn scalar(deltas: &[f64]) -> Result<Self> {
        Self::from_flat(1, deltas.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.deltas.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn get(&self, k: usize) -> &[f64] {
        &self.deltas[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.deltas.chunks_exact(self.dim)
    }

    /// Sum of all increments.
    pub fn total(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim];
        for d in self.iter() {
            acc.iter_mut().zip(d).for_each(|(a, x)| *a += x);
        }
        acc
    }

    /// Returns a copy with a zero increment inserted before position `at`.
    pub fn with_zero_inserted(&self, at: usize) -> Self {
        let mut deltas = self.deltas.clone();
        let pos = at.min(self.len()) * self.dim;
        deltas.splice(pos..pos, std::iter::repeat_n(0.0, self.dim));
        Self {
            dim: self.dim,
            deltas,
        }
    }

    /// `G[i][j] = ⟨Δ_i, Δ_j⟩`, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let n = self.len();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = dot(self.get(i), self.get(j));
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        g
    }
}

/// Jumps of the piecewise-constant approximation of `path` on `partition`;
/// the path is evaluated at the knots by linear interpolation.
pub fn piecewise_constant_increments(
    path: &Path,
    partition: &Partition,
) -> Result<IncrementSequence> {
    partition.check_covers(path)?;
    let samples: Vec<Vec<f64>> = partition
        .knots
        .iter()
        .map(|&t| path.eval_unchecked(t))
        .collect();
    let deltas = samples
        .windows(2)
        .flat_map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect::<Vec<_>>())
        .collect();
    IncrementSequence::from_flat(path.dim, deltas)
}
