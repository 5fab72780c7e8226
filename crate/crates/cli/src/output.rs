use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sparse_tone::bench::quadrature_for;
use sparse_tone::quadrature::QuadratureSpec;
use sparse_tone::signal::SignalSource;
use sparse_tone::spectrum::dense_spectrum_oracle;

use crate::error::{CliError, CliResult};

/// Largest quadrature grid used for plot spectra.
const PLOT_QUAD_CAP: usize = 4_000_001;
const PLOT_TIME_POINTS: usize = 1001;
const PLOT_FREQ_POINTS: usize = 2001;

/// Pretty JSON plus a trailing newline, to `path` or stdout.
pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

/// Prints the resolved settings of a run to stderr as one JSON line.
pub fn print_config<T: Serialize>(command: &str, value: &T) -> CliResult<()> {
    eprintln!("config {command}: {}", serde_json::to_string(value)?);
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn csv_writer(path: Option<&Path>) -> CliResult<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| CliError::io(p, e))?),
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

/// Writes `signal.csv` with `(t, re, im)` on `[0, T]` and `spectrum.csv` with
/// `(f, mag)` around `freqs` into `dir`.
pub fn emit_plot_data(dir: &Path, src: &SignalSource<f64>, t_len: f64, freqs: &[f64]) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let x = src.sampler();
    let time_path = dir.join("signal.csv");
    let mut w = csv_writer(Some(&time_path))?;
    w.write_record(["t", "re", "im"])?;
    for i in 0..PLOT_TIME_POINTS {
        let t = t_len * i as f64 / (PLOT_TIME_POINTS - 1) as f64;
        let v = x(t);
        w.serialize((t, v.re, v.im))?;
    }
    w.flush().map_err(|e| CliError::io(&time_path, e))?;

    let spec_path = dir.join("spectrum.csv");
    let mut w = csv_writer(Some(&spec_path))?;
    w.write_record(["f", "mag"])?;
    let margin = 10.0 / t_len;
    let lo = freqs.iter().copied().fold(f64::INFINITY, f64::min) - margin;
    let hi = freqs.iter().copied().fold(f64::NEG_INFINITY, f64::max) + margin;
    let f_abs = lo.abs().max(hi.abs());
    let quad = quadrature_for(f_abs, t_len);
    if lo.is_finite() && quad.points <= PLOT_QUAD_CAP {
        let grid: Vec<f64> = (0..PLOT_FREQ_POINTS)
            .map(|i| lo + (hi - lo) * i as f64 / (PLOT_FREQ_POINTS - 1) as f64)
            .collect();
        for (f, p) in dense_spectrum_oracle(src, None, t_len, &grid, &QuadratureSpec::with_points(quad.points))? {
            w.serialize((f, p.sqrt()))?;
        }
    } else {
        log::warn!("spectrum plot skipped: frequencies up to {f_abs} need too fine a grid");
    }
    w.flush().map_err(|e| CliError::io(&spec_path, e))
}
