//! On-disk JSON form of ground-truth signals.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::real::Real;
use crate::signal::{FourierSparseSignal, Tone};

/// One tone as `{"f", "re", "im"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToneRecord {
    pub f: f64,
    pub re: f64,
    pub im: f64,
}

/// A signal file: the tones plus the observation window and band limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalFile {
    pub tones: Vec<ToneRecord>,
    #[serde(rename = "T")]
    pub t_len: f64,
    #[serde(rename = "F")]
    pub f_max: f64,
}

impl SignalFile {
    pub fn from_signal<S: Real>(sig: &FourierSparseSignal<S>, t_len: f64, f_max: f64) -> Self {
        Self {
            tones: sig
                .tones()
                .iter()
                .map(|t| ToneRecord {
                    f: t.freq.as_f64(),
                    re: t.amp.re.as_f64(),
                    im: t.amp.im.as_f64(),
                })
                .collect(),
            t_len,
            f_max,
        }
    }

    pub fn to_signal<S: Real>(&self) -> Result<FourierSparseSignal<S>> {
        FourierSparseSignal::new(
            self.tones
                .iter()
                .map(|t| Tone::new(S::lit(t.f), Complex::new(S::lit(t.re), S::lit(t.im))))
                .collect(),
        )
    }
}
