use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sparse_tone::noise::NoiseSpec;

/// `--noise` values: `none`, `white:<level>`, `snr:<dB>` or
/// `sparse:<level>:<spikes>:<support>`. Levels are absolute `||g||_T`;
/// `snr` is white noise relative to the clean signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseArg {
    None,
    White { level: f64 },
    Snr { db: f64 },
    Sparse { level: f64, spikes: usize, support: f64 },
}

impl NoiseArg {
    pub fn spec(&self, signal_norm: f64) -> NoiseSpec<f64> {
        match *self {
            NoiseArg::None => NoiseSpec::none(),
            NoiseArg::White { level } => NoiseSpec::white(level),
            NoiseArg::Snr { db } => NoiseSpec::white(NoiseSpec::level_for_snr(signal_norm, db)),
            NoiseArg::Sparse { level, spikes, support } => NoiseSpec::sparse(level, spikes, support),
        }
    }
}

impl fmt::Display for NoiseArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseArg::None => write!(f, "none"),
            NoiseArg::White { level } => write!(f, "white:{level}"),
            NoiseArg::Snr { db } => write!(f, "snr:{db}"),
            NoiseArg::Sparse { level, spikes, support } => write!(f, "sparse:{level}:{spikes}:{support}"),
        }
    }
}

fn num<T: FromStr>(s: &str, what: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("bad {what} `{s}`"))
}

impl FromStr for NoiseArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let arg = match parts.as_slice() {
            ["none"] => NoiseArg::None,
            ["white", l] => NoiseArg::White {
                level: num(l, "level")?,
            },
            ["snr", db] => NoiseArg::Snr { db: num(db, "SNR")? },
            ["sparse", l, n, s] => NoiseArg::Sparse {
                level: num(l, "level")?,
                spikes: num(n, "spike count")?,
                support: num(s, "support")?,
            },
            _ => {
                return Err(format!(
                    "unknown noise `{s}`; use none, white:L, snr:DB or sparse:L:N:FRAC"
                ))
            }
        };
        match arg {
            NoiseArg::White { level } | NoiseArg::Sparse { level, .. } if !(level >= 0.0) => {
                Err("noise level must be non-negative".into())
            }
            NoiseArg::Sparse { spikes, support, .. } if spikes == 0 || !(support > 0.0 && support <= 1.0) => {
                Err("sparse noise needs spikes >= 1 and support in (0, 1]".into())
            }
            _ => Ok(arg),
        }
    }
}
