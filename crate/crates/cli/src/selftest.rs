use std::process::ExitCode;

use sigdev_core::freeprob::{catalan, generation_lemma_check, nc2_enumerate, schwinger_dyson_check};
use sigdev_core::mmd::{mmd2, Estimator, KernelChoice, PathSample};
use sigdev_core::paths::{gen_fbm, piecewise_constant_increments};
use sigdev_core::randomdev::{rk_montecarlo, EnsembleConfig, EnsembleKind};
use sigdev_core::sdkernel::{
    exact_straight_line, iterated_sums_series, k_sd, path_kernel, solve_explicit, Scheme,
};
use sigdev_core::{PartitionSpec, Path, Result};

use crate::output::{emit, Table};
use crate::CommonArgs;

type Check = fn() -> Result<bool>;

fn catalan_counts() -> Result<bool> {
    for k in 0..=8u32 {
        if nc2_enumerate(2 * k as usize)?.len() as u64 != catalan(k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn generations() -> Result<bool> {
    generation_lemma_check(10)
}

fn schwinger_dyson() -> Result<bool> {
    for d in 1..=3 {
        if !schwinger_dyson_check(8, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn iss_identity() -> Result<bool> {
    for seed in 0..8 {
        let p = gen_fbm(0.6, 7, 2, seed)?.scaled(0.6);
        let incs = piecewise_constant_increments(&p, &p.knots())?;
        if (solve_explicit(&incs)?.final_value() - iterated_sums_series(&incs)?).abs() > 1e-10 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn straight_line_schemes() -> Result<bool> {
    let line = Path::line(&[1.0])?;
    let exact = exact_straight_line(1.0, 0.0, 1.0)?;
    let bound = 16.0 * 4f64.exp() * 2f64.powi(-6);
    for scheme in [Scheme::Explicit, Scheme::Implicit] {
        if (path_kernel(&line, scheme, &PartitionSpec::Dyadic(6))?.value - exact).abs() > bound.min(5e-3) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn schemes_match_series() -> Result<bool> {
    for seed in 0..3 {
        let p = gen_fbm(0.75, 9, 2, seed)?.scaled(0.3);
        let series = path_kernel(&p, Scheme::Series { tol: 1e-10 }, &PartitionSpec::Knots)?.value;
        for scheme in [Scheme::Explicit, Scheme::Implicit] {
            if (path_kernel(&p, scheme, &PartitionSpec::Dyadic(5))?.value - series).abs() > 1e-2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn tree_like_is_one() -> Result<bool> {
    for seed in 0..5 {
        let p = gen_fbm(0.5, 6, 2, seed)?.scaled(0.1);
        if (k_sd(&p, &p, Scheme::Series { tol: 1e-10 }, &PartitionSpec::Knots)?.value - 1.0).abs() > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn unitary_montecarlo() -> Result<bool> {
    let line = Path::line(&[1.0])?;
    let cfg = EnsembleConfig::new(EnsembleKind::Gue, 50, 50, 1, 1)?;
    let est = rk_montecarlo(&line, &PartitionSpec::Knots, &cfg)?;
    let exact = exact_straight_line(1.0, 0.0, 1.0)?;
    Ok((est.estimate - exact).abs() <= (3.0 * est.stderr).max(0.05) && est.max_unitarity_defect <= 1e-10)
}

fn mmd_identity() -> Result<bool> {
    let sample = PathSample::new(
        (0..4)
            .map(|s| Ok(gen_fbm(0.7, 5, 2, s)?.scaled(0.25)))
            .collect::<Result<_>>()?,
    )?;
    let k = KernelChoice::SdSeries { tol: 1e-10 };
    Ok(mmd2(&sample, &sample, k, &PartitionSpec::Knots, Estimator::VStatistic)?.abs() <= 1e-10)
}

const CHECKS: &[(&str, Check)] = &[
    ("nc2 counts are catalan numbers", catalan_counts),
    ("generation lemma up to length 10", generations),
    ("schwinger-dyson identities, d<=3, length<=8", schwinger_dyson),
    ("explicit scheme equals iterated-sums series", iss_identity),
    ("schemes converge to J1(2) on the unit line", straight_line_schemes),
    ("schemes agree with the series oracle", schemes_match_series),
    ("k_sd(g, g) = 1 under the series", tree_like_is_one),
    ("GUE Monte-Carlo near J1(2)", unitary_montecarlo),
    ("mmd2(mu, mu) = 0", mmd_identity),
];

pub fn run(common: &CommonArgs) -> Result<ExitCode> {
    let mut rows = Vec::new();
    let mut failed = 0;
    for (name, check) in CHECKS {
        let status = match check() {
            Ok(true) => "pass".to_string(),
            Ok(false) => {
                failed += 1;
                "FAIL".to_string()
            }
            Err(e) => {
                failed += 1;
                format!("FAIL ({e})")
            }
        };
        rows.push(vec![name.to_string(), status]);
    }
    let table = Table {
        header: vec!["check".into(), "status".into()],
        rows,
    };
    emit(common, &table.render(common.format)?)?;
    if failed > 0 {
        eprintln!("sigdev: {failed} invariant check(s) failed");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
