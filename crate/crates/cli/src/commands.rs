use std::process::ExitCode;

use serde::Serialize;
use sigdev_core::mmd::{self, Estimator, KernelChoice, PathSample};
use sigdev_core::paths::{gen_fbm as sample_fbm, write_csv, write_jsonl, NamedPath};
use sigdev_core::randomdev::{rk_montecarlo, EnsembleConfig, EnsembleKind};
use sigdev_core::sdkernel::{exact_one_dimensional, k_sd, path_kernel, series_oracle, Scheme};
use sigdev_core::signature::signature_kernel;
use sigdev_core::{Error, PartitionSpec, Path, Result};

use crate::output::{emit, fmt_f64, read_paths, read_single_path, to_json, Table};
use crate::{ConvergeArgs, FbmArgs, Format, KernelArgs, MmdArgs, PartitionArgs, SampleArgs, SchemeArg};

fn partition_spec(p: &PartitionArgs) -> Result<PartitionSpec> {
    match p.max_variation {
        Some(v) if v.is_nan() || v <= 0.0 => Err(Error::Parse("--max-variation must be positive".into())),
        Some(v) => Ok(PartitionSpec::MaxVariation(v)),
        None => Ok(PartitionSpec::Dyadic(p.lambda)),
    }
}

fn kernel_choice(scheme: SchemeArg, tol: f64) -> KernelChoice {
    match scheme {
        SchemeArg::Explicit => KernelChoice::SdExplicit,
        SchemeArg::Implicit => KernelChoice::SdImplicit,
        SchemeArg::Series => KernelChoice::SdSeries { tol },
        SchemeArg::Sig => KernelChoice::SigTruncated { tol },
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Parse("--tol must be positive".into()))
    }
}

pub fn kernel(args: &KernelArgs) -> Result<ExitCode> {
    check_tol(args.common.tol)?;
    let gamma = read_single_path(&args.gamma)?;
    let sigma = read_single_path(&args.sigma)?;
    let spec = partition_spec(&args.partition)?;
    let tol = args.common.tol;
    let (name, value, tail, resolution) = match args.partition.scheme {
        SchemeArg::Sig => {
            let k = signature_kernel(&gamma, &sigma, tol)?;
            ("sig", k.value, Some(k.remainder_bound), k.level)
        }
        other => {
            let scheme = match other {
                SchemeArg::Explicit => Scheme::Explicit,
                SchemeArg::Implicit => Scheme::Implicit,
                _ => Scheme::Series { tol },
            };
            let k = k_sd(&gamma, &sigma, scheme, &spec)?;
            (scheme.name(), k.value, k.tail_bound, k.resolution)
        }
    };
    let table = Table {
        header: ["scheme", "value", "tail_bound", "resolution"].map(String::from).to_vec(),
        rows: vec![vec![
            name.to_string(),
            fmt_f64(value),
            tail.map(fmt_f64).unwrap_or_default(),
            resolution.to_string(),
        ]],
    };
    emit(&args.common, &table.render(args.common.format)?)?;
    Ok(ExitCode::SUCCESS)
}

/// Path ids and the sample they form.
type LoadedSample = (Vec<String>, PathSample);

fn load_sample(file: &std::path::Path) -> Result<LoadedSample> {
    let named = read_paths(file)?;
    let ids = named.iter().map(|n| n.id.clone()).collect();
    let sample = PathSample::new(named.into_iter().map(|n| n.path).collect())
        .map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    Ok((ids, sample))
}

fn load_pair(args: &SampleArgs) -> Result<(LoadedSample, LoadedSample)> {
    let a = load_sample(&args.a)?;
    let b = match &args.b {
        Some(f) => load_sample(f)?,
        None => a.clone(),
    };
    Ok((a, b))
}

#[derive(Serialize)]
struct GramJson<'a> {
    kernel: &'a str,
    rows: &'a [String],
    cols: &'a [String],
    values: Vec<&'a [f64]>,
}

pub fn gram(args: &SampleArgs) -> Result<ExitCode> {
    check_tol(args.common.tol)?;
    let ((ida, a), (idb, b)) = load_pair(args)?;
    let spec = partition_spec(&args.partition)?;
    let g = mmd::gram(&a, &b, kernel_choice(args.partition.scheme, args.common.tol), &spec)?;
    let bytes = match args.common.format {
        Format::Csv => {
            let mut header = vec!["id".to_string()];
            header.extend(idb.iter().cloned());
            let rows = (0..g.rows)
                .map(|i| {
                    let mut r = vec![ida[i].clone()];
                    r.extend(g.row(i).iter().map(|&v| fmt_f64(v)));
                    r
                })
                .collect();
            Table { header, rows }.render(Format::Csv)?
        }
        Format::Json => to_json(&GramJson {
            kernel: &g.kernel_tag,
            rows: &ida,
            cols: &idb,
            values: (0..g.rows).map(|i| g.row(i)).collect(),
        })?,
    };
    emit(&args.common, &bytes)?;
    Ok(ExitCode::SUCCESS)
}

pub fn mmd(args: &MmdArgs) -> Result<ExitCode> {
    let s = &args.sample;
    check_tol(s.common.tol)?;
    let ((_, a), (_, b)) = load_pair(s)?;
    let spec = partition_spec(&s.partition)?;
    let choice = kernel_choice(s.partition.scheme, s.common.tol);
    let estimator = if args.u_statistic {
        Estimator::UStatistic
    } else {
        Estimator::VStatistic
    };
    let value = mmd::mmd2(&a, &b, choice, &spec, estimator)?;
    let table = Table {
        header: ["kernel", "estimator", "mmd2"].map(String::from).to_vec(),
        rows: vec![vec![
            choice.tag().to_string(),
            if args.u_statistic { "u" } else { "v" }.to_string(),
            fmt_f64(value),
        ]],
    };
    emit(&s.common, &table.render(s.common.format)?)?;
    Ok(ExitCode::SUCCESS)
}

/// `0..6` (inclusive) or `0,2,4`.
pub fn parse_list<T>(text: &str, what: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    let bad = || Error::Parse(format!("cannot parse {what} list {text:?}"));
    let one = |s: &str| s.trim().parse::<T>().map_err(|_| bad());
    let out: Vec<T> = if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (one(lo)?.into(), one(hi)?.into());
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).map(|v| T::try_from(v).map_err(|_| bad())).collect::<Result<_>>()?
    } else {
        text.split(',').map(one).collect::<Result<_>>()?
    };
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn reference_value(path: &Path, scheme: Scheme, lambdas: &[u32], tol: f64) -> Result<(f64, String)> {
    if path.dim() == 1 {
        return Ok((exact_one_dimensional(path)?, "exact".into()));
    }
    match series_oracle(path, path.start_time(), path.end_time(), tol) {
        Ok(sv) => Ok((sv.value, format!("series level {}", sv.level))),
        Err(Error::Resource(_)) => {
            let top = lambdas.iter().copied().max().unwrap_or(0);
            let fine = path_kernel(path, scheme, &PartitionSpec::Dyadic(top + 1))?.value;
            let coarse = path_kernel(path, scheme, &PartitionSpec::Dyadic(top))?.value;
            Ok((2.0 * fine - coarse, format!("richardson from λ={top},{}", top + 1)))
        }
        Err(e) => Err(e),
    }
}

pub fn converge(args: &ConvergeArgs) -> Result<ExitCode> {
    check_tol(args.common.tol)?;
    let path = match &args.path {
        Some(f) => read_single_path(f)?,
        None => sample_fbm(args.fbm_hurst, args.fbm_points, args.fbm_dim, args.seed)?,
    };
    let scheme = match args.scheme {
        SchemeArg::Explicit => Scheme::Explicit,
        SchemeArg::Implicit => Scheme::Implicit,
        _ => return Err(Error::Parse("converge needs --scheme explicit or implicit".into())),
    };
    let lambdas: Vec<u32> = parse_list(&args.lambda, "lambda")?;
    if lambdas.iter().any(|&l| l > 16) {
        return Err(Error::Parse("dyadic orders above 16 are not supported".into()));
    }
    let dims: Vec<u32> = parse_list(&args.matrix_dim, "matrix-dim")?;
    if args.mc_samples == 0 || dims.contains(&0) {
        return Err(Error::Parse("--mc-samples and --matrix-dim must be positive".into()));
    }
    let (reference, how) = reference_value(&path, scheme, &lambdas, args.common.tol)?;
    eprintln!("reference: {how}");

    let mut rows = Vec::new();
    for &l in &lambdas {
        let v = path_kernel(&path, scheme, &PartitionSpec::Dyadic(l))?.value;
        rows.push(vec![
            scheme.name().to_string(),
            l.to_string(),
            fmt_f64(v),
            fmt_f64(reference),
            fmt_f64((v - reference).abs()),
            String::new(),
        ]);
    }
    for &n in &dims {
        let cfg = EnsembleConfig::new(EnsembleKind::Gue, n as usize, args.mc_samples, args.seed, path.dim())?;
        let est = rk_montecarlo(&path, &PartitionSpec::Knots, &cfg)?;
        rows.push(vec![
            "montecarlo".to_string(),
            n.to_string(),
            fmt_f64(est.estimate),
            fmt_f64(reference),
            fmt_f64((est.estimate - reference).abs()),
            fmt_f64(est.stderr),
        ]);
    }
    let table = Table {
        header: ["kind", "param", "value", "reference", "error", "stderr"].map(String::from).to_vec(),
        rows,
    };
    emit(&args.common, &table.render(args.common.format)?)?;
    Ok(ExitCode::SUCCESS)
}

pub fn gen_fbm(args: &FbmArgs) -> Result<ExitCode> {
    if args.count == 0 {
        return Err(Error::Parse("--count must be positive".into()));
    }
    let paths: Vec<NamedPath> = (0..args.count)
        .map(|k| {
            let seed = args.seed.wrapping_add(k as u64);
            Ok(NamedPath {
                id: format!("fbm{k}"),
                path: sample_fbm(args.hurst, args.points, args.dim, seed)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut buf = Vec::new();
    match args.common.format {
        Format::Csv if paths.len() == 1 => write_csv(&paths[0].path, &mut buf)?,
        Format::Csv => return Err(Error::Parse("several paths need --format json".into())),
        Format::Json => write_jsonl(&paths, &mut buf)?,
    }
    emit(&args.common, &buf)?;
    Ok(ExitCode::SUCCESS)
}
