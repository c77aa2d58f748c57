use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gsk::bench::approximate;
use gsk::gp::{cholesky_jittered, gram_sym};
use gsk::optimize::{restart_rng, train_gp, OptimizerConfig};
use gsk::targets::kernel_section;
use gsk::{
    Dataset, EvalGrid, GpModel, IfbmKernel, Kernel, KernelConfig, Points, RffBasis, VarianceKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::args::{ApproxArgs, GpFitArgs, GpPredictArgs, RffArgs, SamplePriorArgs};
use crate::error::{CliError, CliResult};
use crate::io::{header, read_inputs, read_json, read_training, write_csv, write_json};
use crate::report::{ModelFile, RunReport, TrainingData};

pub const MODEL_SCHEMA_VERSION: u32 = 1;
pub const MAX_PRIOR_POINTS: usize = 2000;
/// section of the fitted kernels written by `approx`
const SECTION_S: f64 = 0.5;

fn load_kernel(path: &Path) -> CliResult<(Kernel, f64)> {
    let config: KernelConfig = read_json(path, "kernel config")?;
    config
        .to_kernel()
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn config_value<A: Serialize>(args: &A, optimizer: Option<&OptimizerConfig>) -> serde_json::Value {
    let mut v = serde_json::json!({ "args": args });
    if let Some(o) = optimizer {
        v["optimizer"] = serde_json::to_value(o).expect("serializable");
    }
    v
}

fn path_string(p: &Path) -> String {
    p.display().to_string()
}

fn optimizer(restarts: usize, seed: u64, max_iters: usize) -> OptimizerConfig {
    OptimizerConfig {
        restarts,
        seed,
        max_iters,
        ..OptimizerConfig::default()
    }
}

pub fn gp_fit(args: &GpFitArgs, command: Vec<String>) -> CliResult<()> {
    let clock = Instant::now();
    let raw = read_training(&args.data)?;
    let (template, _) = load_kernel(&args.kernel)?;
    if template.dim() != raw.dim() {
        return Err(CliError::input(format!(
            "kernel has {} input dimensions but {} has {}",
            template.dim(),
            args.data.display(),
            raw.dim()
        )));
    }
    let (data, y_offset) = if args.center { raw.centered() } else { (raw.clone(), 0.0) };
    let config = optimizer(args.restarts, args.seed, args.max_iters);
    let fit = train_gp(&data, &template, &config)?;
    let (kernel, noise) = fit.unpack(&template)?;

    let model = GpModel::fit(&data, &kernel, noise)?;
    let pred = model.predict(data.x(), VarianceKind::Latent)?;
    let train_rmse = (pred
        .mean
        .iter()
        .zip(data.y())
        .map(|(m, y)| (m - y).powi(2))
        .sum::<f64>()
        / data.len() as f64)
        .sqrt();

    let kernel_config = KernelConfig::from_kernel(&kernel, noise);
    let file = ModelFile {
        schema_version: MODEL_SCHEMA_VERSION,
        kernel: kernel_config.clone(),
        y_offset,
        training: TrainingData {
            x: raw.x().rows().map(<[f64]>::to_vec).collect(),
            y: raw.y().to_vec(),
        },
    };
    write_json(&args.out, &file)?;

    let report_path = args.report.clone().unwrap_or_else(|| args.out.with_extension("report.json"));
    let initial_mll = fit
        .restarts
        .iter()
        .map(|r| -r.initial_objective)
        .fold(f64::NEG_INFINITY, f64::max);
    let metrics = BTreeMap::from([
        ("mll".to_string(), -fit.objective),
        ("initial_mll".to_string(), initial_mll),
        ("train_rmse".to_string(), train_rmse),
        ("noise_variance".to_string(), noise),
        ("n_train".to_string(), data.len() as f64),
    ]);
    let report = RunReport {
        command,
        config: config_value(args, Some(&config)),
        seed: args.seed,
        metrics,
        restarts: fit.restarts,
        kernel: Some(kernel_config),
        wall_time_secs: clock.elapsed().as_secs_f64(),
        outputs: vec![path_string(&args.out), path_string(&report_path)],
    };
    write_json(&report_path, &report)
}

pub fn gp_predict(args: &GpPredictArgs) -> CliResult<()> {
    let file: ModelFile = read_json(&args.model, "model")?;
    if file.schema_version != MODEL_SCHEMA_VERSION {
        return Err(CliError::input(format!(
            "{}: unsupported model schema_version {} (expected {MODEL_SCHEMA_VERSION})",
            args.model.display(),
            file.schema_version
        )));
    }
    let (kernel, noise) = file.kernel.to_kernel()?;
    let x = Points::from_rows(&file.training.x)?;
    if x.dim() != kernel.dim() {
        return Err(CliError::input(format!(
            "{}: training inputs have {} dimensions, kernel has {}",
            args.model.display(),
            x.dim(),
            kernel.dim()
        )));
    }
    let y = file.training.y.iter().map(|v| v - file.y_offset).collect();
    let data = Dataset::new(x, y)?;
    let model = GpModel::fit(&data, &kernel, noise)?;

    let xstar = read_inputs(&args.inputs, kernel.dim())?;
    let kind = if args.latent_variance { VarianceKind::Latent } else { VarianceKind::Observation };
    let pred = model.predict(&xstar, kind)?;
    let mut columns = header(kernel.dim());
    columns.extend(["mean".to_string(), "variance".to_string()]);
    let rows = xstar.rows().enumerate().map(|(i, row)| {
        let mut r = row.to_vec();
        r.push(pred.mean[i] + file.y_offset);
        r.push(pred.variance[i]);
        r
    });
    write_csv(&args.out, &columns, rows)
}

/// Target values on the grid: the IFBM covariance, or for self-fits a random
/// kernel of the fitted family drawn from the optimizer's start distribution.
fn approx_target(args: &ApproxArgs, grid: &EvalGrid, config: &OptimizerConfig) -> CliResult<Target> {
    if args.self_fit {
        let template = args.family.template(args.components, 1)?;
        let roles = template.param_roles();
        let theta = config.init.sample(&roles, &mut restart_rng(args.seed, usize::MAX));
        let (kernel, _) = template.unpack(&theta)?;
        Ok(Target {
            values: grid.kernel_values(&kernel)?,
            section: kernel_section(&kernel, SECTION_S, grid.points())?,
        })
    } else {
        let ifbm = IfbmKernel::new(args.hurst)?;
        Ok(Target {
            values: grid.ifbm_values(&ifbm)?,
            section: grid
                .points()
                .iter()
                .map(|&t| ifbm.eval(t, SECTION_S))
                .collect::<gsk::Result<_>>()?,
        })
    }
}

struct Target {
    values: Vec<f64>,
    section: Vec<f64>,
}

pub fn approx(args: &ApproxArgs, command: Vec<String>) -> CliResult<()> {
    let clock = Instant::now();
    if !(args.hurst > 0.0 && args.hurst < 1.0) {
        return Err(CliError::input(format!("--hurst must lie in (0, 1), got {}", args.hurst)));
    }
    if args.components == 0 {
        return Err(CliError::input("--components must be at least 1"));
    }
    let grid = EvalGrid::ifbm_default();
    let config = optimizer(args.restarts, args.seed, args.max_iters);
    let target = approx_target(args, &grid, &config)?;
    let fit = approximate(args.family, args.components, &grid, &target.values, &config)?;

    let kernel_path = args.out.with_extension("kernel.json");
    let sections_path = args.out.with_extension("sections.csv");
    let kernel_config = KernelConfig::from_kernel(&fit.kernel, 0.0);
    write_json(&kernel_path, &kernel_config)?;
    let fitted = kernel_section(&fit.kernel, SECTION_S, grid.points())?;
    let columns = ["t", "target", "fitted"].map(String::from);
    write_csv(
        &sections_path,
        &columns,
        grid.points()
            .iter()
            .zip(&target.section)
            .zip(&fitted)
            .map(|((&t, &a), &b)| vec![t, a, b]),
    )?;

    let metrics = BTreeMap::from([
        ("normalized_rmse".to_string(), fit.normalized_rmse),
        ("sse".to_string(), fit.report.objective),
    ]);
    let report = RunReport {
        command,
        config: config_value(args, Some(&config)),
        seed: args.seed,
        metrics,
        restarts: fit.report.restarts,
        kernel: Some(kernel_config),
        wall_time_secs: clock.elapsed().as_secs_f64(),
        outputs: vec![
            path_string(&args.out),
            path_string(&kernel_path),
            path_string(&sections_path),
        ],
    };
    write_json(&args.out, &report)
}

fn side_report(out: &Path) -> PathBuf {
    out.with_extension("report.json")
}

pub fn rff(args: &RffArgs, command: Vec<String>) -> CliResult<()> {
    let clock = Instant::now();
    let (kernel, _) = load_kernel(&args.kernel)?;
    let Some(stationary) = kernel.as_stationary() else {
        return Err(CliError::input(format!(
            "{}: random Fourier features need a stationary kernel",
            args.kernel.display()
        )));
    };
    if args.tau_steps == 0 {
        return Err(CliError::input("--tau-steps must be at least 1"));
    }
    if !(args.tau_max >= 0.0 && args.tau_max.is_finite()) {
        return Err(CliError::input(format!("--tau-max must be finite and >= 0, got {}", args.tau_max)));
    }
    let basis = RffBasis::sample(stationary, args.features, args.seed)?;
    let d = stationary.dim();
    let steps = args.tau_steps;
    let mut rows = Vec::with_capacity(steps);
    let (mut max_err, mut sq_err) = (0.0f64, 0.0);
    for i in 0..steps {
        let t = if steps == 1 { 0.0 } else { args.tau_max * i as f64 / (steps - 1) as f64 };
        let mut tau = vec![0.0; d];
        tau[0] = t;
        let exact = stationary.eval(&tau)?;
        let estimate = basis.estimate(&tau)?;
        let err = (estimate - exact).abs();
        max_err = max_err.max(err);
        sq_err += err * err;
        rows.push(vec![t, exact, estimate, err]);
    }
    let columns = ["tau", "exact", "estimate", "abs_error"].map(String::from);
    write_csv(&args.out, &columns, rows)?;

    let report_path = side_report(&args.out);
    let metrics = BTreeMap::from([
        ("max_abs_error".to_string(), max_err),
        ("rms_error".to_string(), (sq_err / steps as f64).sqrt()),
        ("total_variance".to_string(), stationary.total_variance()),
    ]);
    let report = RunReport {
        command,
        config: config_value(args, None),
        seed: args.seed,
        metrics,
        restarts: Vec::new(),
        kernel: None,
        wall_time_secs: clock.elapsed().as_secs_f64(),
        outputs: vec![path_string(&args.out), path_string(&report_path)],
    };
    write_json(&report_path, &report)
}

/// Parses `start:stop:count[,start:stop:count...]` into per-axis points.
pub fn parse_grid_spec(spec: &str) -> CliResult<Vec<Vec<f64>>> {
    spec.split(',')
        .map(|axis| {
            let bad = || CliError::input(format!("--grid-spec: `{axis}` is not start:stop:count"));
            let parts: Vec<&str> = axis.trim().split(':').collect();
            let [a, b, n] = parts[..] else { return Err(bad()) };
            let a: f64 = a.parse().map_err(|_| bad())?;
            let b: f64 = b.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            if !(a.is_finite() && b.is_finite()) || n == 0 {
                return Err(bad());
            }
            Ok(if n == 1 {
                vec![a]
            } else {
                (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
            })
        })
        .collect()
}

/// Cartesian product of the axes, first axis slowest.
fn product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

pub fn sample_prior(args: &SamplePriorArgs, command: Vec<String>) -> CliResult<()> {
    let clock = Instant::now();
    let (kernel, _) = load_kernel(&args.kernel)?;
    let axes = parse_grid_spec(&args.grid_spec)?;
    if axes.len() != kernel.dim() {
        return Err(CliError::input(format!(
            "--grid-spec has {} axes but the kernel has {} input dimensions",
            axes.len(),
            kernel.dim()
        )));
    }
    let count: usize = axes.iter().map(Vec::len).product();
    if count > MAX_PRIOR_POINTS {
        return Err(CliError::input(format!(
            "--grid-spec gives {count} points, at most {MAX_PRIOR_POINTS} are supported"
        )));
    }
    let rows = product(&axes);
    let x = Points::from_rows(&rows)?;
    let k = gram_sym(&kernel, &x)?;
    let (chol, jitter) = cholesky_jittered(&k)?;
    let l = chol.l();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let z: Vec<f64> = (0..count).map(|_| rng.sample(StandardNormal)).collect();
    let f: Vec<f64> = (0..count)
        .map(|i| (0..=i).map(|j| l[(i, j)] * z[j]).sum())
        .collect();

    let mut columns = header(kernel.dim());
    columns.push("f".to_string());
    write_csv(
        &args.out,
        &columns,
        rows.into_iter().zip(&f).map(|(mut r, &v)| {
            r.push(v);
            r
        }),
    )?;

    let report_path = side_report(&args.out);
    let metrics = BTreeMap::from([
        ("jitter".to_string(), jitter),
        ("n_points".to_string(), count as f64),
        ("sample_variance".to_string(), f.iter().map(|v| v * v).sum::<f64>() / count as f64),
    ]);
    let report = RunReport {
        command,
        config: config_value(args, None),
        seed: args.seed,
        metrics,
        restarts: Vec::new(),
        kernel: None,
        wall_time_secs: clock.elapsed().as_secs_f64(),
        outputs: vec![path_string(&args.out), path_string(&report_path)],
    };
    write_json(&report_path, &report)
}
