//! Truncated signatures in the tensor algebra of `R^d`.
//!
//! Level `m` is stored densely as `d^m` coefficients; the word
//! `(i_1, …, i_m)` (letters `1..=d`) lives at index
//! `Σ_k (i_k − 1)·d^{m−k}`, so appending a letter multiplies the index by `d`.

use crate::error::{Error, Result};
use crate::paths::{IncrementSequence, Path};

/// Storage guard: `d^L` may not exceed this many coefficients.
pub const MAX_LEVEL_COEFFICIENTS: usize = 10_000_000;

/// Default accuracy for kernel truncation.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-10;

/// Highest level the kernel truncation search will consider.
const MAX_KERNEL_LEVEL: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSignature {
    dim: usize,
    levels: Vec<Vec<f64>>,
}

/// Checks the `d^L` storage guard.
pub(crate) fn check_storage(dim: usize, level: usize) -> Result<()> {
    let mut size: usize = 1;
    for _ in 0..level {
        size = size
            .checked_mul(dim)
            .filter(|&s| s <= MAX_LEVEL_COEFFICIENTS)
            .ok_or_else(|| {
                Error::resource(format!(
                    "level {level} in dimension {dim} exceeds {MAX_LEVEL_COEFFICIENTS} coefficients"
                ))
            })?;
    }
    Ok(())
}

impl TruncatedSignature {
    /// The unit `(1, 0, 0, …)`.
    pub fn identity(dim: usize, level: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("signature dimension must be at least 1"));
        }
        check_storage(dim, level)?;
        let levels = (0..=level)
            .map(|m| {
                let mut v = vec![0.0; dim.pow(m as u32)];
                if m == 0 {
                    v[0] = 1.0;
                }
                v
            })
            .collect();
        Ok(Self { dim, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Coefficients of level `m`.
    pub fn tensor(&self, m: usize) -> &[f64] {
        &self.levels[m]
    }

    /// Hilbert-Schmidt norm of level `m`.
    pub fn level_norm(&self, m: usize) -> f64 {
        self.levels[m].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `S^I` for a word of letters in `1..=d`; `S^∅ = 1`.
    pub fn coefficient(&self, word: &[usize]) -> Result<f64> {
        if word.len() > self.level() {
            return Err(Error::domain(format!(
                "word of length {} exceeds truncation level {}",
                word.len(),
                self.level()
            )));
        }
        let mut index = 0;
        for &letter in word {
            if letter == 0 || letter > self.dim {
                return Err(Error::domain(format!(
                    "letter {letter} outside 1..={}",
                    self.dim
                )));
            }
            index = index * self.dim + (letter - 1);
        }
        Ok(self.levels[word.len()][index])
    }

    /// Right-multiplies by the truncated exponential of `w`, i.e. appends a
    /// linear segment with increment `w` (Horner form per level).
    fn mul_exp(&mut self, w: &[f64]) {
        let d = self.dim;
        for m in (1..=self.level()).rev() {
            let mut acc = vec![self.levels[0][0]];
            for j in 1..=m {
                let scale = 1.0 / (m - j + 1) as f64;
                let lower = &self.levels[j];
                let mut next = Vec::with_capacity(acc.len() * d);
                for a in &acc {
                    let a = a * scale;
                    next.extend(w.iter().map(|x| a * x));
                }
                next.iter_mut().zip(lower).for_each(|(n, l)| *n += l);
                acc = next;
            }
            self.levels[m] = acc;
        }
    }

    /// Appends a single discrete jump: level `m` gains `level_{m−1} ⊗ Δ`.
    fn push_jump(&mut self, delta: &[f64]) {
        let d = self.dim;
        for m in (1..=self.level()).rev() {
            let (lo, hi) = self.levels.split_at_mut(m);
            let prev = &lo[m - 1];
            let cur = &mut hi[0];
            for (i, p) in prev.iter().enumerate() {
                if *p != 0.0 {
                    for (c, x) in delta.iter().enumerate() {
                        cur[i * d + c] += p * x;
                    }
                }
            }
        }
    }

    /// Truncated tensor product (Chen concatenation) `self ⊗ other`.
    pub fn chen(&self, other: &TruncatedSignature) -> Result<TruncatedSignature> {
        if self.dim != other.dim || self.level() != other.level() {
            return Err(Error::domain("Chen product needs matching dimension and level"));
        }
        let mut out = TruncatedSignature::identity(self.dim, self.level())?;
        for m in 1..=self.level() {
            let target = &mut out.levels[m];
            target.iter_mut().for_each(|x| *x = 0.0);
            for k in 0..=m {
                let a = &self.levels[k];
                let b = &other.levels[m - k];
                let stride = b.len();
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        target[i * stride + j] += x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Σ_{m ≤ L} ⟨self^m, other^m⟩_HS`.
    pub fn hs_inner(&self, other: &TruncatedSignature) -> Result<f64> {
        if self.dim != other.dim || self.level() != other.level() {
            return Err(Error::domain("pairing needs matching dimension and level"));
        }
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum())
    }
}

/// Signature of `path` over `[s, t]`, truncated at `level`, built segment
/// by segment with Chen's identity.
pub fn truncated_signature(path: &Path, s: f64, t: f64, level: usize) -> Result<TruncatedSignature> {
    let sub = path.restrict(s, t)?;
    let mut sig = TruncatedSignature::identity(path.dim(), level)?;
    let pts: Vec<&[f64]> = sub.points().collect();
    for w in pts.windows(2) {
        let inc: Vec<f64> = w[1].iter().zip(w[0]).map(|(b, a)| b - a).collect();
        sig.mul_exp(&inc);
    }
    Ok(sig)
}

/// Iterated-sums signature: level `m` is `Σ_{i_1<…<i_m} Δ_{i_1} ⊗ … ⊗ Δ_{i_m}`.
pub fn iterated_sums_signature(incs: &IncrementSequence, level: usize) -> Result<TruncatedSignature> {
    let mut sig = TruncatedSignature::identity(incs.dim(), level)?;
    for delta in incs.iter() {
        sig.push_jump(delta);
    }
    Ok(sig)
}

/// A truncated kernel value with a bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedKernel {
    pub value: f64,
    pub level: usize,
    pub remainder_bound: f64,
}

/// `Σ_{m>L} x^m/(m!)²`.
pub fn kernel_remainder_bound(x: f64, level: usize) -> f64 {
    let mut term = 1.0;
    for m in 1..=level {
        term *= x / (m * m) as f64;
    }
    let mut tail = 0.0;
    let mut m = level + 1;
    loop {
        term *= x / (m * m) as f64;
        tail += term;
        // terms decay geometrically once m² > x
        if (m * m) as f64 > 2.0 * x && term <= tail * 1e-17 || term == 0.0 {
            break;
        }
        m += 1;
    }
    tail
}

/// Classical signature kernel `Σ_{m≤L} ⟨S_{0,s}(γ)^m, S_{0,t}(σ)^m⟩_HS`
/// with the factorial tail bound `Σ_{m>L} (‖γ‖₁‖σ‖₁)^m/(m!)²`.
pub fn signature_kernel_truncated(
    gamma: &Path,
    sigma: &Path,
    s: f64,
    t: f64,
    level: usize,
) -> Result<TruncatedKernel> {
    if gamma.dim() != sigma.dim() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            gamma.dim(),
            sigma.dim()
        )));
    }
    let g0 = gamma.start_time();
    let s0 = sigma.start_time();
    let sg = truncated_signature(gamma, g0, s, level)?;
    let ss = truncated_signature(sigma, s0, t, level)?;
    let x = gamma.one_variation(g0, s)? * sigma.one_variation(s0, t)?;
    Ok(TruncatedKernel {
        value: sg.hs_inner(&ss)?,
        level,
        remainder_bound: kernel_remainder_bound(x, level),
    })
}

/// Signature kernel over the full spans, truncated at the smallest level
/// whose remainder bound is below `tol`.
pub fn signature_kernel(gamma: &Path, sigma: &Path, tol: f64) -> Result<TruncatedKernel> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    let x = gamma.total_variation() * sigma.total_variation();
    let level = (0..=MAX_KERNEL_LEVEL)
        .find(|&l| kernel_remainder_bound(x, l) < tol)
        .ok_or_else(|| Error::resource(format!("kernel tail above {tol} at level {MAX_KERNEL_LEVEL}")))?;
    check_storage(gamma.dim(), level)?;
    signature_kernel_truncated(gamma, sigma, gamma.end_time(), sigma.end_time(), level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{gen_fbm, piecewise_constant_increments};
    use proptest::prelude::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn line_signature_is_tensor_exponential() {
        let v = [0.5, -1.5, 2.0];
        let sig = truncated_signature(&Path::line(&v).unwrap(), 0.0, 1.0, 3).unwrap();
        assert_eq!(sig.tensor(0), &[1.0]);
        for i in 1..=3 {
            assert!((sig.coefficient(&[i]).unwrap() - v[i - 1]).abs() < 1e-15);
            for j in 1..=3 {
                let want = v[i - 1] * v[j - 1] / 2.0;
                assert!((sig.coefficient(&[i, j]).unwrap() - want).abs() < 1e-15);
                for k in 1..=3 {
                    let want = v[i - 1] * v[j - 1] * v[k - 1] / 6.0;
                    assert!((sig.coefficient(&[i, j, k]).unwrap() - want).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn constant_path_has_trivial_signature() {
        let sig = truncated_signature(&Path::constant(&[1.0, 2.0]).unwrap(), 0.0, 0.0, 4).unwrap();
        assert_eq!(sig, TruncatedSignature::identity(2, 4).unwrap());
    }

    #[test]
    fn two_segment_chen_collapse_in_one_dimension() {
        let (a, b) = (0.7, -0.2);
        let p = Path::uniform(vec![vec![0.0], vec![a], vec![a + b]]).unwrap();
        let sig = truncated_signature(&p, 0.0, 1.0, 2).unwrap();
        assert!((sig.tensor(1)[0] - (a + b)).abs() < 1e-15);
        assert!((sig.tensor(2)[0] - (a + b) * (a + b) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn iterated_sums_examples() {
        let single = IncrementSequence::new(2, vec![vec![1.0, 2.0]]).unwrap();
        let s = iterated_sums_signature(&single, 2).unwrap();
        assert_eq!(s.tensor(1), &[1.0, 2.0]);
        assert!(s.tensor(2).iter().all(|&x| x == 0.0));

        let pair = IncrementSequence::scalar(&[0.3, -0.5]).unwrap();
        let s = iterated_sums_signature(&pair, 2).unwrap();
        assert!((s.tensor(1)[0] + 0.2).abs() < 1e-15);
        assert!((s.tensor(2)[0] + 0.15).abs() < 1e-15);

        let empty = IncrementSequence::scalar(&[]).unwrap();
        assert_eq!(
            iterated_sums_signature(&empty, 3).unwrap(),
            TruncatedSignature::identity(1, 3).unwrap()
        );
    }

    #[test]
    fn coefficient_lookup() {
        let sig = truncated_signature(&Path::line(&[1.0, 2.0]).unwrap(), 0.0, 1.0, 2).unwrap();
        assert_eq!(sig.coefficient(&[]).unwrap(), 1.0);
        assert_eq!(sig.coefficient(&[2]).unwrap(), 2.0);
        assert_eq!(sig.coefficient(&[1, 2]).unwrap(), 1.0);
        assert!(sig.coefficient(&[1, 2, 1]).is_err());
        assert!(sig.coefficient(&[3]).is_err());
        assert!(sig.coefficient(&[0]).is_err());
    }

    #[test]
    fn storage_guard() {
        assert!(matches!(TruncatedSignature::identity(10, 8), Err(Error::Resource(_))));
        assert!(TruncatedSignature::identity(10, 7).is_ok());
    }

    #[test]
    fn kernel_examples() {
        let c = Path::constant(&[1.0, 1.0]).unwrap();
        for level in [0, 3, 7] {
            assert_eq!(signature_kernel_truncated(&c, &c, 0.0, 0.0, level).unwrap().value, 1.0);
        }
        let v = Path::line(&[1.0, 0.0]).unwrap();
        let w = Path::line(&[1.0, 1.0]).unwrap();
        let k = signature_kernel_truncated(&v, &w, 1.0, 1.0, 12).unwrap();
        // Σ_{m≤12} 1/(m!)²
        let series: f64 = (0..=12).map(|m| 1.0 / factorial(m).powi(2)).sum();
        assert!((k.value - series).abs() < 1e-13);
        assert!((k.value - 2.279_585_302_3).abs() < 1e-9);
        // ‖v‖‖w‖ = √2 bounds the tail
        assert!(k.remainder_bound > 0.0 && k.remainder_bound < 1e-17);
        assert_eq!(signature_kernel_truncated(&v, &w, 1.0, 1.0, 0).unwrap().value, 1.0);
        let bad = Path::line(&[1.0]).unwrap();
        assert!(signature_kernel_truncated(&v, &bad, 1.0, 1.0, 2).is_err());
    }

    #[test]
    fn kernel_level_selection_meets_tolerance() {
        let v = Path::line(&[1.0, 0.0]).unwrap();
        let w = Path::line(&[1.0, 1.0]).unwrap();
        let k = signature_kernel(&v, &w, 1e-10).unwrap();
        assert!(k.remainder_bound < 1e-10);
        assert!(kernel_remainder_bound(2f64.sqrt(), k.level - 1) >= 1e-10);
    }

    #[test]
    fn remainder_bound_matches_direct_sum() {
        let x: f64 = 3.0;
        let direct: f64 = (5..60).map(|m| x.powi(m as i32) / factorial(m).powi(2)).sum();
        assert!((kernel_remainder_bound(x, 4) - direct).abs() < 1e-15 * direct.max(1.0));
    }

    #[test]
    fn chen_product_matches_segmentwise_signature() {
        let p = gen_fbm(0.6, 6, 2, 5).unwrap();
        let whole = truncated_signature(&p, 0.0, 1.0, 4).unwrap();
        let left = truncated_signature(&p, 0.0, 0.5, 4).unwrap();
        let right = truncated_signature(&p, 0.5, 1.0, 4).unwrap();
        let joined = left.chen(&right).unwrap();
        for m in 0..=4 {
            for (a, b) in whole.tensor(m).iter().zip(joined.tensor(m)) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    fn arb_path() -> impl Strategy<Value = Path> {
        (1usize..4, 2usize..7).prop_flat_map(|(d, n)| {
            proptest::collection::vec(-1.0f64..1.0, n * d).prop_map(move |pts| {
                let times = (0..n).map(|k| k as f64).collect();
                Path::from_flat(times, pts, d).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn chen_consistency(path in arb_path(), frac in 0.05f64..0.95) {
            let (s, t) = (path.start_time(), path.end_time());
            let u = s + (t - s) * frac;
            let whole = truncated_signature(&path, s, t, 4).unwrap();
            let joined = truncated_signature(&path, s, u, 4).unwrap()
                .chen(&truncated_signature(&path, u, t, 4).unwrap()).unwrap();
            for m in 0..=4 {
                for (a, b) in whole.tensor(m).iter().zip(joined.tensor(m)) {
                    prop_assert!((a - b).abs() <= 1e-10);
                }
            }
        }

        #[test]
        fn collinear_midpoint_is_invisible(path in arb_path(), frac in 0.1f64..0.9) {
            let k = 0;
            let t0 = path.times()[k];
            let t1 = path.times()[k + 1];
            let tm = t0 + (t1 - t0) * frac;
            let mut times = path.times().to_vec();
            times.insert(k + 1, tm);
            let mut pts: Vec<Vec<f64>> = path.points().map(<[f64]>::to_vec).collect();
            pts.insert(k + 1, path.eval(tm).unwrap());
            let refined = Path::new(times, pts).unwrap();
            let a = truncated_signature(&path, t0, path.end_time(), 4).unwrap();
            let b = truncated_signature(&refined, t0, path.end_time(), 4).unwrap();
            for m in 0..=4 {
                for (x, y) in a.tensor(m).iter().zip(b.tensor(m)) {
                    prop_assert!((x - y).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn factorial_decay(path in arb_path()) {
            let v = path.total_variation();
            let sig = truncated_signature(&path, path.start_time(), path.end_time(), 5).unwrap();
            prop_assert_eq!(sig.tensor(0)[0], 1.0);
            for m in 1..=5 {
                prop_assert!(sig.level_norm(m) <= v.powi(m as i32) / factorial(m) + 1e-9);
            }
        }

        #[test]
        fn iterated_sums_level_one_is_displacement(xs in proptest::collection::vec(-1.0f64..1.0, 2..8)) {
            let path = Path::uniform(xs.iter().map(|&x| vec![x]).collect()).unwrap();
            let inc = piecewise_constant_increments(&path, &path.knots()).unwrap();
            let iss = iterated_sums_signature(&inc, 1).unwrap();
            let cont = truncated_signature(&path, 0.0, 1.0, 1).unwrap();
            let disp = path.displacement()[0];
            prop_assert!((iss.tensor(1)[0] - disp).abs() < 1e-12);
            prop_assert!((cont.tensor(1)[0] - disp).abs() < 1e-12);
        }

        /// ‖S^m(γ) − S^m(γ^π)‖ ≤ ‖γ‖₁^{m−1}/(m−2)! · max_i ‖γ‖_{1;[t_i,t_{i+1}]}.
        #[test]
        fn discretisation_bound(path in arb_path(), lambda in 0u32..3) {
            let part = path.knots().dyadic_refine(lambda);
            let inc = piecewise_constant_increments(&path, &part).unwrap();
            let iss = iterated_sums_signature(&inc, 4).unwrap();
            let sig = truncated_signature(&path, path.start_time(), path.end_time(), 4).unwrap();
            let v = path.total_variation();
            let max_piece = part.knots().windows(2)
                .map(|w| path.one_variation(w[0], w[1]).unwrap())
                .fold(0.0, f64::max);
            for m in 2..=4 {
                let diff = sig.tensor(m).iter().zip(iss.tensor(m))
                    .map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                let bound = v.powi(m as i32 - 1) / factorial(m - 2) * max_piece;
                prop_assert!(diff <= bound + 1e-12, "m={} diff={} bound={}", m, diff, bound);
            }
        }
    }
}
