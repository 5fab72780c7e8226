use std::fs;
use std::path::Path;
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sparse_tone::bench::{quadrature_for, quantile, random_poly, run_suite, BenchParams, Suite, ERR_FT_LIMIT};
use sparse_tone::config::RecoveryConfig;
use sparse_tone::filters::{build_filter_g, build_filter_h, GKnobs, HKnobs};
use sparse_tone::generate::{gen_signal, AmplitudeLaw, SignalGenSpec};
use sparse_tone::io::SignalFile;
use sparse_tone::k_cluster::{cft_k_cluster, FrequencyList, RecoveryReport};
use sparse_tone::model::MixedBasisModel;
use sparse_tone::noise::with_noise;
use sparse_tone::one_cluster::{cft_1cluster, OneClusterParams};
use sparse_tone::poly::{robust_poly_learn, robust_poly_learn_boosted, PolyLearnOptions, Polynomial};
use sparse_tone::signal::{FourierSparseSignal, SignalSource};

use crate::error::{CliError, CliResult};
use crate::noise_arg::NoiseArg;
use crate::output::{csv_writer, emit_plot_data, print_config, read_json, write_json};
use crate::{
    Amplitudes, BenchArgs, Cli, Command, Emit, EvalModelArgs, FilterKind, FiltersArgs, GenArgs, RecoverKArgs,
    RecoverOneArgs, RecoverPolyArgs, SuiteArg,
};

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::RecoverPoly(a) => recover_poly(cli, a),
        Command::RecoverOne(a) => recover_one(cli, a),
        Command::RecoverK(a) => recover_k(cli, a),
        Command::Filters(a) => filters(a),
        Command::Bench(a) => bench(a),
        Command::EvalModel(a) => eval_model(a),
    }
}

fn plot_model(cli: &Cli, model: &MixedBasisModel<f64>) -> CliResult<()> {
    if let Some(dir) = &cli.emit_plot_data {
        let m = model.clone();
        let src = SignalSource::new("model", move |t| m.eval(t));
        emit_plot_data(dir, &src, model.t_len, &model.freqs())?;
    }
    Ok(())
}

/// `||model - truth||_T`, skipped when the band is too wide to integrate.
fn truth_error(model: &MixedBasisModel<f64>, truth: &FourierSparseSignal<f64>, f_max: f64) -> CliResult<Option<f64>> {
    if f_max * model.t_len > ERR_FT_LIMIT {
        log::warn!(
            "err_T not computed: F T = {} exceeds {ERR_FT_LIMIT}",
            f_max * model.t_len
        );
        return Ok(None);
    }
    Ok(Some(
        model.distance_t(|t| truth.eval(t), &quadrature_for(f_max, model.t_len))?,
    ))
}

fn load_signal(path: &Path) -> CliResult<(SignalFile, FourierSparseSignal<f64>)> {
    let file: SignalFile = read_json(path)?;
    if !(file.t_len > 0.0 && file.f_max > 0.0) {
        return Err(CliError::Config(format!(
            "{}: T and F must be positive",
            path.display()
        )));
    }
    let sig = file.to_signal()?;
    Ok((file, sig))
}

fn noisy_source(
    sig: &FourierSparseSignal<f64>,
    noise: &NoiseArg,
    t_len: f64,
    rng: &mut ChaCha8Rng,
) -> SignalSource<f64> {
    let spec = noise.spec(sig.norm_t_closed(t_len));
    with_noise(&SignalSource::from_signal(sig), &spec, t_len, rng)
}

fn gen(cli: &Cli, a: &GenArgs) -> CliResult<()> {
    let law = match a.amplitudes {
        Amplitudes::Unit => AmplitudeLaw::Unit,
        Amplitudes::LogUniform => AmplitudeLaw::LogUniform,
    };
    let spec = SignalGenSpec::new(a.k, a.f_max)
        .with_min_gap(a.min_gap)
        .with_amplitudes(law);
    if !(a.t_len > 0.0) {
        return Err(CliError::Config("T must be positive".into()));
    }
    print_config("gen", &serde_json::json!({"spec": spec, "T": a.t_len, "seed": a.seed}))?;
    let sig = gen_signal(&spec, &mut ChaCha8Rng::seed_from_u64(a.seed))?;
    if let Some(dir) = &cli.emit_plot_data {
        emit_plot_data(dir, &SignalSource::from_signal(&sig), a.t_len, &sig.freqs())?;
    }
    write_json(a.out.as_deref(), &SignalFile::from_signal(&sig, a.t_len, a.f_max))
}

#[derive(Debug, Serialize)]
struct PolyReport {
    #[serde(flatten)]
    poly: Polynomial<f64>,
    n_samples: usize,
    #[serde(rename = "err_T_vs_truth")]
    err_t: f64,
    /// `err_T_vs_truth / ||g||_T`, absent when noiseless.
    #[serde(skip_serializing_if = "Option::is_none")]
    err_ratio: Option<f64>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time: Option<f64>,
}

fn recover_poly(cli: &Cli, a: &RecoverPolyArgs) -> CliResult<()> {
    if !(a.t_len > 0.0) {
        return Err(CliError::Config("T must be positive".into()));
    }
    let opts = a
        .eps
        .map_or_else(PolyLearnOptions::default, |eps| PolyLearnOptions { eps });
    print_config(
        "recover-poly",
        &serde_json::json!({"degree": a.degree, "T": a.t_len, "noise": a.noise, "boost_p": a.boost_p, "eps": opts.eps, "seed": a.seed}),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let truth = random_poly(a.degree, a.t_len, &mut rng);
    let norm = truth.mean_square().sqrt();
    let noise = a.noise.spec(norm);
    let level = noise.level;
    let p = truth.clone();
    let x = with_noise(
        &SignalSource::new("poly", move |t| p.eval(t)),
        &noise,
        a.t_len,
        &mut rng,
    );
    let clock = Instant::now();
    let (poly, n_samples) = match a.boost_p {
        Some(bp) => {
            let fit = robust_poly_learn_boosted(&x, a.degree, a.t_len, bp, &opts, &mut rng)?;
            (fit.poly, fit.n_samples)
        }
        None => {
            let fit = robust_poly_learn(&x, a.degree, a.t_len, &opts, &mut rng)?;
            (fit.poly, fit.n_samples)
        }
    };
    let wall_time = cli.timing.then(|| clock.elapsed().as_secs_f64());
    let err_t = poly.add(&truth.scale((-1.0).into())).mean_square().sqrt();
    if let Some(dir) = &cli.emit_plot_data {
        let q = poly.clone();
        emit_plot_data(dir, &SignalSource::new("poly", move |t| q.eval(t)), a.t_len, &[0.0])?;
    }
    let report = PolyReport {
        poly,
        n_samples,
        err_t,
        err_ratio: (level > 0.0).then(|| err_t / level),
        seed: a.seed,
        wall_time,
    };
    write_json(a.report.as_deref(), &report)
}

fn recover_one(cli: &Cli, a: &RecoverOneArgs) -> CliResult<()> {
    let (file, sig) = load_signal(&a.signal)?;
    let t_len = file.t_len;
    let p = OneClusterParams::new(t_len, file.f_max, a.cluster_width.unwrap_or(2.0 / t_len))?;
    let h = build_filter_h(1, a.delta, t_len, &HKnobs::default())?;
    print_config(
        "recover-1",
        &serde_json::json!({"params": p, "delta": a.delta, "Delta_h": h.delta_h, "noise": a.noise, "seed": a.seed}),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let x = noisy_source(&sig, &a.noise, t_len, &mut rng);
    let clock = Instant::now();
    let fit = cft_1cluster(&x, &h, &p, &mut rng)?;
    let wall_time = cli.timing.then(|| clock.elapsed().as_secs_f64());
    plot_model(cli, &fit.model)?;
    let report = RecoveryReport {
        err_t: truth_error(&fit.model, &sig, file.f_max)?,
        model: fit.model,
        freqs: FrequencyList::new(vec![fit.freq]),
        n_samples: fit.n_samples,
        noise_level: fit.residual,
        seed: a.seed,
        wall_time,
        config: None,
    };
    write_json(a.report.as_deref(), &report)
}

/// Applies the keys of the JSON object at `path` on top of `base`; unknown keys are rejected.
fn overlay_config(base: &RecoveryConfig, path: &Path) -> CliResult<RecoveryConfig> {
    let overrides: Value = read_json(path)?;
    let Value::Object(over) = overrides else {
        return Err(CliError::Config(format!("{}: expected a JSON object", path.display())));
    };
    let mut merged = serde_json::to_value(base)?;
    if let Value::Object(m) = &mut merged {
        m.extend(over);
    }
    serde_json::from_value(merged).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn recover_k(cli: &Cli, a: &RecoverKArgs) -> CliResult<()> {
    let (file, sig) = load_signal(&a.signal)?;
    let mut base = RecoveryConfig::new(file.t_len, file.f_max, a.k.unwrap_or(sig.k()));
    base.seed = a.seed;
    let mut cfg = match &a.config {
        Some(path) => overlay_config(&base, path)?,
        None => base,
    };
    cfg.seed = a.seed;
    let resolved = cfg.resolve()?;
    print_config("recover-k", &serde_json::json!({"config": resolved, "noise": a.noise}))?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let x = noisy_source(&sig, &a.noise, cfg.t_len, &mut rng);
    let mut report = cft_k_cluster(&x, &cfg, &mut rng)?;
    if !cli.timing {
        report.wall_time = None;
    }
    report.err_t = truth_error(&report.model, &sig, cfg.f_max)?;
    plot_model(cli, &report.model)?;
    write_json(a.report.as_deref(), &report)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FilterParams {
    k: usize,
    #[serde(rename = "T")]
    t_len: f64,
    delta: f64,
    bins: usize,
    alpha: f64,
    points: usize,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self {
            k: 1,
            t_len: 1.0,
            delta: 0.01,
            bins: 16,
            alpha: 0.5,
            points: 2001,
        }
    }
}

#[derive(Debug, Serialize)]
struct FilterTables {
    time: Vec<(f64, f64)>,
    freq: Vec<(f64, f64)>,
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

fn filters(a: &FiltersArgs) -> CliResult<()> {
    let params: FilterParams = match &a.params {
        Some(text) => serde_json::from_str(text)?,
        None => FilterParams::default(),
    };
    print_config("filters", &params)?;
    let n = params.points;
    let (name, tables) = match a.inspect {
        FilterKind::H => {
            let h = build_filter_h(params.k, params.delta, params.t_len, &HKnobs::default())?;
            let tables = FilterTables {
                time: grid(0.0, params.t_len, n).map(|t| (t, h.eval_fast(t))).collect(),
                freq: grid(-2.0 * h.delta_h, 2.0 * h.delta_h, n)
                    .map(|f| (f, h.eval_hat(f)))
                    .collect(),
            };
            ("h", tables)
        }
        FilterKind::G => {
            let knobs = GKnobs {
                k: params.k,
                ..GKnobs::default()
            };
            let g = build_filter_g(params.bins, params.delta, params.alpha, &knobs)?;
            let w = g.support_half_width();
            let tables = FilterTables {
                time: grid(-w, w, n).map(|t| (t, g.eval(t))).collect(),
                freq: grid(-0.5, 0.5, n).map(|f| (f, g.eval_hat(f))).collect(),
            };
            ("g", tables)
        }
    };
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    match a.emit {
        Emit::Json => write_json(Some(&a.out.join(format!("{name}.json"))), &tables),
        Emit::Csv => {
            for (suffix, header, rows) in [
                ("time", ["t", "value"], &tables.time),
                ("freq", ["f", "value"], &tables.freq),
            ] {
                let path = a.out.join(format!("{name}_{suffix}.csv"));
                let mut w = csv_writer(Some(&path))?;
                w.write_record(header)?;
                for r in rows {
                    w.serialize(r)?;
                }
                w.flush().map_err(|e| CliError::io(&path, e))?;
            }
            Ok(())
        }
    }
}

fn bench(a: &BenchArgs) -> CliResult<()> {
    let suite = match a.suite {
        SuiteArg::Poly => Suite::Poly,
        SuiteArg::One => Suite::One,
        SuiteArg::K => Suite::K,
    };
    let default_snr = if suite == Suite::Poly { 10.0 } else { 20.0 };
    let params = BenchParams {
        degree: a.degree,
        k: a.k,
        t_len: a.t_len,
        f_max: a.f_max,
        snr_db: (!a.noiseless).then(|| a.snr.unwrap_or(default_snr)),
    };
    print_config(
        "bench",
        &serde_json::json!({"suite": suite, "params": params, "trials": a.trials, "seed": a.seed}),
    )?;
    let rows = run_suite(suite, &params, a.trials, a.seed)?;
    let mut w = csv_writer(a.csv.as_deref())?;
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))?;
    let errs: Vec<f64> = rows.iter().map(|r| r.err_ratio).collect();
    let samples: Vec<f64> = rows.iter().map(|r| r.n_samples as f64).collect();
    eprintln!(
        "bench {:?}: {} trials, err_ratio median {:.3e} p95 {:.3e}, n_samples median {}",
        suite,
        rows.len(),
        quantile(&errs, 0.5),
        quantile(&errs, 0.95),
        quantile(&samples, 0.5)
    );
    Ok(())
}

fn load_model(path: &Path) -> CliResult<MixedBasisModel<f64>> {
    let value: Value = read_json(path)?;
    let inner = match value.get("model") {
        Some(m) => m.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn read_times(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && *l != "t")
        .map(|l| {
            l.parse()
                .map_err(|_| CliError::Config(format!("{}: bad time `{l}`", path.display())))
        })
        .collect()
}

fn eval_model(a: &EvalModelArgs) -> CliResult<()> {
    let model = load_model(&a.model)?;
    let mut times = a.t.clone();
    if let Some(path) = &a.t_file {
        times.extend(read_times(path)?);
    }
    let mut w = csv_writer(a.out.as_deref())?;
    w.write_record(["t", "re", "im"])?;
    for t in times {
        let v = model.eval(t);
        w.serialize((t, v.re, v.im))?;
    }
    w.flush().map_err(|e| CliError::io("<csv>", e))
}
