//! The Schwinger-Dyson kernel `K_γ(s,t)`, the unique solution of
//!
//! ```text
//! K(s,t) = 1 − ∫_s^t ∫_s^r K(s,u) K(u,r) ⟨dγ_u, dγ_r⟩,   K(s,s) = 1,
//! ```
//!
//! and `K_SD(γ, σ) = K_y(0, T)` for `y = γ ∗ ←σ`.
//!
//! Two grid schemes solve the equation for the piecewise-constant
//! approximation on a partition:
//!
//! * explicit (left-point integrals):
//!   `K[a][b] = K[a][b−1] − Σ_{i=a}^{b−2} K[a][i] K[i+1][b−1] ⟨Δ_i, Δ_{b−1}⟩`,
//! * implicit (right-point integrals):
//!   `K[a][b] (1 + |Δ_{b−1}|²) = K[a][b−1] − Σ_{m=a+1}^{b−1} K[a][m] K[m][b] ⟨Δ_{m−1}, Δ_{b−1}⟩`,
//!
//! with knots indexed from 0 and `Δ_i` the jump between knots `i` and `i+1`.
//! Both fill the grid one anti-diagonal `b − a` at a time; cells of one
//! anti-diagonal only read earlier ones, and every cell sums in ascending
//! index order, so the result does not depend on scheduling.
//!
//! The series `Σ_I i^{|I|} φ(I) S^I(γ)` is the independent oracle, and the
//! straight line has the closed form `J₁(2x)/x`, `x = (t−s)‖v‖`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freeprob::MomentTable;
use crate::paths::{concat_reverse, piecewise_constant_increments, IncrementSequence, PartitionSpec, Path};
use crate::signature::{check_storage, iterated_sums_signature, truncated_signature};

/// Largest grid (number of knots) a scheme will allocate.
pub const MAX_GRID_KNOTS: usize = 6000;

/// Highest signature level the series oracle will use.
pub const MAX_SERIES_LEVEL: usize = 16;

/// Default accuracy of the series oracle.
pub const DEFAULT_SERIES_TOL: f64 = 1e-10;

/// `K(t_i, t_j)` for `i ≤ j` over the knots of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionGrid {
    size: usize,
    values: Vec<f64>,
}

impl SolutionGrid {
    /// Number of knots.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `K(t_i, t_j)`, 0-based, `i <= j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i <= j && j < self.size, "grid index ({i}, {j}) out of range");
        self.values[i * self.size + j]
    }

    /// `K(t_first, t_last)`.
    pub fn final_value(&self) -> f64 {
        self.get(0, self.size - 1)
    }
}

#[derive(Clone, Copy)]
enum Rule {
    LeftPoint,
    RightPoint,
}

fn solve(incs: &IncrementSequence, rule: Rule) -> Result<SolutionGrid> {
    let n = incs.len() + 1;
    if n > MAX_GRID_KNOTS {
        return Err(Error::resource(format!(
            "grid of {n} knots exceeds {MAX_GRID_KNOTS}"
        )));
    }
    let g = incs.gram();
    let stride = n - 1;
    // k[a*n + b] = K[a][b]; kt[b*n + a] = K[a][b] so both factors of each
    // product are read contiguously.
    let mut k = vec![0.0; n * n];
    let mut kt = vec![0.0; n * n];
    for i in 0..n {
        k[i * n + i] = 1.0;
        kt[i * n + i] = 1.0;
    }
    for len in 1..n {
        let cells: Vec<f64> = (0..n - len)
            .into_par_iter()
            .map(|a| {
                let b = a + len;
                let row_a = &k[a * n..(a + 1) * n];
                match rule {
                    Rule::LeftPoint => {
                        let col = &kt[(b - 1) * n..b * n];
                        let gram = &g[(b - 1) * stride..b * stride];
                        let s = (a..b - 1).fold(0.0, |acc, i| acc + row_a[i] * col[i + 1] * gram[i]);
                        row_a[b - 1] - s
                    }
                    Rule::RightPoint => {
                        let col = &kt[b * n..(b + 1) * n];
                        let gram = &g[(b - 1) * stride..b * stride];
                        let s = (a + 1..b)
                            .fold(0.0, |acc, m| acc + row_a[m] * col[m] * gram[m - 1]);
                        (row_a[b - 1] - s) / (1.0 + gram[b - 1])
                    }
                }
            })
            .collect();
        for (a, v) in cells.into_iter().enumerate() {
            let b = a + len;
            k[a * n + b] = v;
            kt[b * n + a] = v;
        }
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("grid solve produced a non-finite value".into()));
    }
    Ok(SolutionGrid { size: n, values: k })
}

/// Left-point scheme on the jumps of a piecewise-constant path.
pub fn solve_explicit(incs: &IncrementSequence) -> Result<SolutionGrid> {
    solve(incs, Rule::LeftPoint)
}

/// Right-point scheme on the jumps of a piecewise-constant path.
pub fn solve_implicit(incs: &IncrementSequence) -> Result<SolutionGrid> {
    solve(incs, Rule::RightPoint)
}

/// `J₁(2x)/x`, with the limit 1 at `x = 0`.
pub fn bessel_j1_ratio(x: f64) -> f64 {
    let x = x.abs();
    if x <= 8.0 {
        // Σ_k (−1)^k x^{2k} / (k!(k+1)!) = Σ_k (−1)^k C_k x^{2k}/(2k)!
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            term *= -x2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 1.0;
            if term.abs() <= 1e-16 * sum.abs().max(1e-300) && k > x {
                break;
            }
        }
        sum
    } else {
        bessel_j1_asymptotic(2.0 * x) / x
    }
}

/// Hankel expansion of `J₁(z)` for large `z`.
fn bessel_j1_asymptotic(z: f64) -> f64 {
    let mu = 4.0;
    let eight_z = 8.0 * z;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_z);
        if term.abs() > last || term.abs() < 1e-17 {
            break;
        }
        last = term.abs();
        // k odd feeds Q with sign (+, −, +, …); k even feeds P with sign (−, +, …)
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let chi = z - 0.75 * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Exact kernel of a straight line with the given speed over `[s, t]`.
pub fn exact_straight_line(speed: f64, s: f64, t: f64) -> Result<f64> {
    if s > t {
        return Err(Error::domain(format!("empty interval [{s}, {t}]")));
    }
    if speed.is_nan() || speed < 0.0 || !speed.is_finite() {
        return Err(Error::domain("speed must be finite and nonnegative"));
    }
    Ok(bessel_j1_ratio((t - s) * speed))
}

/// Exact `K_γ(0, T)` for a one-dimensional path: it only depends on the
/// total increment.
pub fn exact_one_dimensional(path: &Path) -> Result<f64> {
    if path.dim() != 1 {
        return Err(Error::domain("closed form needs a one-dimensional path"));
    }
    Ok(bessel_j1_ratio(path.displacement()[0]))
}

/// `Σ_{m > level, m even} C_{m/2} v^m / m!`: bound on the omitted levels
/// of the series for a path of 1-variation `v`.
pub fn series_tail_bound(v: f64, level: usize) -> f64 {
    // C_k v^{2k}/(2k)! = v^{2k}/(k!(k+1)!)
    let v2 = v * v;
    let first = level / 2 + 1;
    let mut term = 1.0;
    for k in 1..first {
        term *= v2 / (k * (k + 1)) as f64;
    }
    let mut tail = 0.0;
    let mut k = first;
    loop {
        term *= v2 / (k * (k + 1)) as f64;
        tail += term;
        if ((k * (k + 1)) as f64 > 2.0 * v2 && term <= tail * 1e-17) || term == 0.0 {
            break;
        }
        k += 1;
    }
    tail
}

/// A series evaluation and its certified truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub level: usize,
    pub tail_bound: f64,
}

type TableCache = Mutex<HashMap<(usize, usize), Arc<MomentTable>>>;

fn moment_table(dim: usize, level: usize) -> Result<Arc<MomentTable>> {
    static TABLES: OnceLock<TableCache> = OnceLock::new();
    let cache = TABLES.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("moment cache poisoned").get(&(dim, level)) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(MomentTable::new(dim, level)?);
    cache
        .lock()
        .expect("moment cache poisoned")
        .insert((dim, level), Arc::clone(&table));
    Ok(table)
}

/// `Σ_{m even} (−1)^{m/2} Σ_{|I|=m} φ(I) coeff(I)` over the levels of `tensors`.
fn contract(levels: impl Iterator<Item = (usize, Vec<f64>)>, table: &MomentTable) -> f64 {
    let mut total = 0.0;
    for (m, coeffs) in levels {
        if m % 2 == 1 {
            continue;
        }
        let phi = table.level(m);
        let s: f64 = phi
            .iter()
            .zip(&coeffs)
            .filter(|(&p, _)| p != 0)
            .map(|(&p, c)| p as f64 * c)
            .sum();
        total += if (m / 2) % 2 == 0 { s } else { -s };
    }
    total
}

/// `K_γ(s,t)` from the signature contracted against semicircular moments,
/// truncated at the lowest even level whose tail bound is below `tol`.
///
/// The bound uses the 1-variation, except in d = 1 where `S^m = x^m/m!`
/// exactly and the displacement `|x|` gives the sharp value.
pub fn series_oracle(path: &Path, s: f64, t: f64, tol: f64) -> Result<SeriesValue> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    let v = if path.dim() == 1 {
        (path.eval(t)?[0] - path.eval(s)?[0]).abs()
    } else {
        path.one_variation(s, t)?
    };
    let level = (0..=MAX_SERIES_LEVEL)
        .step_by(2)
        .find(|&l| series_tail_bound(v, l) < tol)
        .ok_or_else(|| {
            Error::resource(format!(
                "series tail bound {:.3e} at level {MAX_SERIES_LEVEL} does not reach {tol:e} (variation {v})",
                series_tail_bound(v, MAX_SERIES_LEVEL)
            ))
        })?;
    check_storage(path.dim(), level)?;
    let sig = truncated_signature(path, s, t, level)?;
    let table = moment_table(path.dim(), level)?;
    let value = contract((0..=level).map(|m| (m, sig.tensor(m).to_vec())), &table);
    Ok(SeriesValue {
        value,
        level,
        tail_bound: series_tail_bound(v, level),
    })
}

/// `Σ_k (−1)^k Σ_{|I|=2k} φ(I) ISS^I`, the semicircular contraction of the
/// iterated-sums signature. It is a finite sum: levels above the number of
/// increments vanish.
pub fn iterated_sums_series(incs: &IncrementSequence) -> Result<f64> {
    let level = incs.len() & !1;
    check_storage(incs.dim(), level)?;
    let iss = iterated_sums_signature(incs, level)?;
    let table = moment_table(incs.dim(), level)?;
    Ok(contract((0..=level).map(|m| (m, iss.tensor(m).to_vec())), &table))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Explicit,
    Implicit,
    Series { tol: f64 },
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Explicit => "explicit",
            Scheme::Implicit => "implicit",
            Scheme::Series { .. } => "series",
        }
    }
}

/// A kernel value with the metadata of how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    /// Certified truncation bound (series only).
    pub tail_bound: Option<f64>,
    /// Grid knots used (schemes) or truncation level (series).
    pub resolution: usize,
}

/// `K_γ(0, T)` over the whole path.
pub fn path_kernel(path: &Path, scheme: Scheme, partition: &PartitionSpec) -> Result<KernelValue> {
    match scheme {
        Scheme::Series { tol } => {
            let sv = series_oracle(path, path.start_time(), path.end_time(), tol)?;
            Ok(KernelValue {
                value: sv.value,
                tail_bound: Some(sv.tail_bound),
                resolution: sv.level,
            })
        }
        Scheme::Explicit | Scheme::Implicit => {
            let part = partition.resolve(path)?;
            let incs = piecewise_constant_increments(path, &part)?;
            let grid = if scheme == Scheme::Explicit {
                solve_explicit(&incs)?
            } else {
                solve_implicit(&incs)?
            };
            Ok(KernelValue {
                value: grid.final_value(),
                tail_bound: None,
                resolution: grid.size(),
            })
        }
    }
}

/// `K_SD(γ, σ) = K_y(0, T)` with `y = γ ∗ ←σ`; the partition spec applies to `y`.
pub fn k_sd(gamma: &Path, sigma: &Path, scheme: Scheme, partition: &PartitionSpec) -> Result<KernelValue> {
    let y = concat_reverse(gamma, sigma)?;
    path_kernel(&y, scheme, partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeprob::catalan;
    use crate::paths::{gen_fbm, Partition};

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Direct evaluation of the left-point double sum, independent of the
    /// one-step recursion.
    fn explicit_by_double_sum(incs: &IncrementSequence) -> Vec<Vec<f64>> {
        let n = incs.len() + 1;
        let ip = |i: usize, j: usize| crate::paths::dot(incs.get(i), incs.get(j));
        let mut k = vec![vec![1.0; n]; n];
        for len in 1..n {
            for a in 0..n - len {
                let b = a + len;
                let mut s = 0.0;
                for j in a..b {
                    for i in a..j {
                        s += k[a][i] * k[i + 1][j] * ip(i, j);
                    }
                }
                k[a][b] = 1.0 - s;
            }
        }
        k
    }

    #[test]
    fn zero_increments_give_ones() {
        let z = IncrementSequence::new(2, vec![vec![0.0, 0.0]; 5]).unwrap();
        for grid in [solve_explicit(&z).unwrap(), solve_implicit(&z).unwrap()] {
            for i in 0..6 {
                for j in i..6 {
                    assert_eq!(grid.get(i, j), 1.0);
                }
            }
        }
    }

    #[test]
    fn explicit_small_examples() {
        let g = solve_explicit(&IncrementSequence::scalar(&[0.1, 0.1]).unwrap()).unwrap();
        assert_eq!(g.get(0, 1), 1.0);
        assert!((g.get(0, 2) - 0.99).abs() < 1e-15);

        let h: f64 = 0.1;
        let incs = IncrementSequence::scalar(&[h, h, h]).unwrap();
        let g = solve_explicit(&incs).unwrap();
        let poly = 1.0 - 3.0 * h * h;
        assert!((g.get(0, 3) - poly).abs() < 1e-15);
        assert!((g.get(0, 3) - explicit_by_double_sum(&incs)[0][3]).abs() < 1e-15);
    }

    #[test]
    fn explicit_recursion_matches_double_sum() {
        let path = gen_fbm(0.6, 9, 2, 11).unwrap();
        let incs = piecewise_constant_increments(&path, &path.knots()).unwrap();
        let grid = solve_explicit(&incs).unwrap();
        let oracle = explicit_by_double_sum(&incs);
        for (i, row) in oracle.iter().enumerate() {
            for (j, want) in row.iter().enumerate().skip(i) {
                assert!((grid.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn implicit_single_step() {
        let g = solve_implicit(&IncrementSequence::scalar(&[0.1]).unwrap()).unwrap();
        assert!((g.get(0, 1) - 1.0 / 1.01).abs() < 1e-15);
        assert!((g.get(0, 1) - 0.990_099).abs() < 1e-6);
    }

    #[test]
    fn implicit_two_steps_by_hand() {
        // K(1,2) = K(2,3) = 1/1.25; K(1,3) = (K(1,2) − K(1,2)K(2,3)·0.25)/1.25
        let g = solve_implicit(&IncrementSequence::scalar(&[0.5, 0.5]).unwrap()).unwrap();
        let k12 = 0.8;
        assert!((g.get(0, 2) - (k12 - k12 * k12 * 0.25) / 1.25).abs() < 1e-15);
    }

    #[test]
    fn explicit_and_implicit_agree_to_first_order() {
        let path = Path::uniform(vec![vec![0.0, 0.0], vec![0.4, 0.3], vec![0.1, 0.8]]).unwrap();
        let mut prev = f64::INFINITY;
        for lambda in 2..=7 {
            let spec = PartitionSpec::Dyadic(lambda);
            let e = path_kernel(&path, Scheme::Explicit, &spec).unwrap().value;
            let i = path_kernel(&path, Scheme::Implicit, &spec).unwrap().value;
            let diff = (e - i).abs();
            if lambda == 2 {
                assert!(diff <= 0.5);
            } else {
                assert!(prev / diff >= 1.7, "λ={lambda}: {prev} -> {diff}");
            }
            prev = diff;
        }
    }

    #[test]
    fn grid_guard() {
        let big = IncrementSequence::scalar(&vec![0.0; MAX_GRID_KNOTS]).unwrap();
        assert!(matches!(solve_explicit(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn bessel_values() {
        assert_eq!(exact_straight_line(0.0, 0.0, 1.0).unwrap(), 1.0);
        assert_eq!(exact_straight_line(3.0, 0.5, 0.5).unwrap(), 1.0);
        let j1_2 = 0.576_724_807_756_873_4;
        assert!((exact_straight_line(1.0, 0.0, 1.0).unwrap() - j1_2).abs() < 1e-15);
        assert!(exact_straight_line(1.0, 1.0, 0.0).is_err());
        assert!(exact_straight_line(-1.0, 0.0, 1.0).is_err());
        // J₁(10) = 0.0434727461688614 → J₁(10)/5
        assert!((bessel_j1_ratio(5.0) - 0.043_472_746_168_861_4 / 5.0).abs() < 1e-14);
    }

    #[test]
    fn bessel_matches_catalan_series() {
        for i in 0..=40 {
            let x = i as f64 * 0.05;
            let series: f64 = (0..=20u32)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * catalan(k).unwrap() as f64 * x.powi(2 * k as i32) / factorial(2 * k)
                })
                .sum();
            assert!((bessel_j1_ratio(x) - series).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn bessel_branches_meet() {
        for x in [8.0, 8.5, 9.0] {
            let series = {
                let x2: f64 = x * x;
                let mut term = 1.0;
                let mut sum = 1.0;
                for k in 0..80 {
                    term *= -x2 / ((k as f64 + 1.0) * (k as f64 + 2.0));
                    sum += term;
                }
                sum
            };
            assert!((bessel_j1_asymptotic(2.0 * x) / x - series).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn series_tail_matches_direct_sum() {
        let v: f64 = 1.3;
        let direct: f64 = (4..=30u32)
            .map(|k| catalan(k).unwrap() as f64 * v.powi(2 * k as i32) / factorial(2 * k))
            .sum();
        assert!((series_tail_bound(v, 6) - direct).abs() < 1e-15);
        assert!((series_tail_bound(v, 7) - direct).abs() < 1e-15);
    }

    #[test]
    fn series_examples() {
        let c = Path::constant(&[0.3, 0.1]).unwrap();
        assert_eq!(series_oracle(&c, 0.0, 0.0, 1e-12).unwrap().value, 1.0);

        let line = Path::line(&[1.0]).unwrap();
        let sv = series_oracle(&line, 0.0, 1.0, 1e-12).unwrap();
        assert!(sv.tail_bound < 1e-12);
        assert!((sv.value - exact_straight_line(1.0, 0.0, 1.0).unwrap()).abs() < 1e-12);

        let p = gen_fbm(0.75, 6, 2, 4).unwrap().scaled(0.2);
        let y = concat_reverse(&p, &p).unwrap();
        let sv = series_oracle(&y, y.start_time(), y.end_time(), 1e-10).unwrap();
        assert!((sv.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn series_line_in_two_dimensions_depends_on_speed_only() {
        let v = [0.6, 0.8];
        let sv = series_oracle(&Path::line(&v).unwrap(), 0.0, 1.0, 1e-12).unwrap();
        assert!((sv.value - bessel_j1_ratio(1.0)).abs() < 1e-12);
    }

    #[test]
    fn series_rejects_unreachable_tolerance() {
        let long = Path::line(&[20.0]).unwrap();
        assert!(matches!(series_oracle(&long, 0.0, 1.0, 1e-8), Err(Error::Resource(_))));
        assert!(series_oracle(&long, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn explicit_scheme_equals_iterated_sums_series() {
        for seed in 0..10 {
            let p = gen_fbm(0.5, 7, 2, seed).unwrap().scaled(0.7);
            let incs = piecewise_constant_increments(&p, &p.knots()).unwrap();
            let grid = solve_explicit(&incs).unwrap().final_value();
            assert!((grid - iterated_sums_series(&incs).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_increment_insertion_is_exact() {
        let p = gen_fbm(0.7, 6, 2, 9).unwrap();
        let incs = piecewise_constant_increments(&p, &p.knots()).unwrap();
        for at in 0..=incs.len() {
            let padded = incs.with_zero_inserted(at);
            assert_eq!(
                solve_explicit(&padded).unwrap().final_value(),
                solve_explicit(&incs).unwrap().final_value()
            );
            assert_eq!(
                solve_implicit(&padded).unwrap().final_value(),
                solve_implicit(&incs).unwrap().final_value()
            );
        }
    }

    #[test]
    fn k_sd_examples() {
        let c = Path::constant(&[1.0, 2.0]).unwrap();
        for scheme in [Scheme::Explicit, Scheme::Implicit, Scheme::Series { tol: 1e-10 }] {
            assert_eq!(k_sd(&c, &c, scheme, &PartitionSpec::Dyadic(2)).unwrap().value, 1.0);
        }
        let g = gen_fbm(0.75, 5, 2, 1).unwrap().scaled(0.3);
        let same = k_sd(&g, &g, Scheme::Series { tol: 1e-10 }, &PartitionSpec::Knots).unwrap();
        assert!((same.value - 1.0).abs() < 1e-10);

        let v = Path::line(&[0.5, 0.0]).unwrap();
        let w = Path::line(&[0.0, 0.4]).unwrap();
        let series = k_sd(&v, &w, Scheme::Series { tol: 1e-12 }, &PartitionSpec::Knots).unwrap();
        let fine = k_sd(&v, &w, Scheme::Explicit, &PartitionSpec::Dyadic(9)).unwrap();
        assert!((series.value - fine.value).abs() < 2e-3);
        let bad = Path::line(&[1.0]).unwrap();
        assert!(k_sd(&v, &bad, Scheme::Explicit, &PartitionSpec::Knots).is_err());
    }

    #[test]
    fn explicit_partition_must_span_path() {
        let p = Path::line(&[1.0]).unwrap();
        let spec = PartitionSpec::Explicit(Partition::uniform(0.0, 1.0, 8).unwrap());
        assert_eq!(path_kernel(&p, Scheme::Explicit, &spec).unwrap().resolution, 9);
        let bad = PartitionSpec::Explicit(Partition::uniform(0.0, 0.5, 8).unwrap());
        assert!(path_kernel(&p, Scheme::Explicit, &bad).is_err());
    }
}
