//! 16-bit PCM mono WAV input/output and the reconstruction round trip.

use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grid::{SampledSignal, UniformGrid};
use crate::inversion::{filter_bank_reconstruct, invert_multiplier, TruncationPair};
use crate::window::Window;

pub const MIN_RATE: u32 = 8000;
pub const MAX_RATE: u32 = 48000;
const FULL_SCALE: f64 = 32768.0;

/// Mono audio samples in `[-1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Audio {
    pub sample_rate: u32,
    pub samples: Vec<f64>,
}

impl Audio {
    /// Samples on the grid `t_k = k / sample_rate`.
    pub fn to_signal(&self) -> Result<SampledSignal> {
        if self.samples.len() < 2 {
            return Err(Error::UnsupportedMedia(format!("need at least 2 samples, found {}", self.samples.len())));
        }
        let grid = UniformGrid::with_origin(0.0, 1.0 / self.sample_rate as f64, self.samples.len())?;
        SampledSignal::from_real(grid, &self.samples)
    }
}

pub fn read_wav(path: &Path) -> Result<Audio> {
    let reader = hound::WavReader::open(path).map_err(|e| match e {
        hound::Error::IoError(io) => Error::Io(format!("{}: {io}", path.display())),
        other => Error::UnsupportedMedia(format!("{}: {other}", path.display())),
    })?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::UnsupportedMedia(format!("{} channels; only mono is supported", spec.channels)));
    }
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(Error::UnsupportedMedia(format!(
            "{}-bit {:?} samples; only 16-bit PCM is supported",
            spec.bits_per_sample, spec.sample_format
        )));
    }
    if !(MIN_RATE..=MAX_RATE).contains(&spec.sample_rate) {
        return Err(Error::UnsupportedMedia(format!(
            "sample rate {} Hz outside {MIN_RATE}..={MAX_RATE}",
            spec.sample_rate
        )));
    }
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| v as f64 / FULL_SCALE))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::UnsupportedMedia(e.to_string()))?;
    Ok(Audio { sample_rate: spec.sample_rate, samples })
}

/// Rounds half to even and clips to the 16-bit range.
pub fn quantize(samples: &[f64]) -> (Vec<i16>, usize) {
    let mut clipped = 0;
    let pcm = samples
        .iter()
        .map(|&v| {
            let q = (v * FULL_SCALE).round_ties_even();
            if q > i16::MAX as f64 || q < i16::MIN as f64 {
                clipped += 1;
            }
            q.clamp(i16::MIN as f64, i16::MAX as f64) as i16
        })
        .collect();
    (pcm, clipped)
}

/// Writes 16-bit mono PCM and returns the number of clipped samples.
pub fn write_wav(path: &Path, sample_rate: u32, samples: &[f64]) -> Result<usize> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let spec = hound::WavSpec { channels: 1, sample_rate, bits_per_sample: 16, sample_format: hound::SampleFormat::Int };
    let io = |e: hound::Error| Error::Io(format!("{}: {e}", path.display()));
    let mut w = hound::WavWriter::create(path, spec).map_err(io)?;
    let (pcm, clipped) = quantize(samples);
    for s in pcm {
        w.write_sample(s).map_err(io)?;
    }
    w.finalize().map_err(io)?;
    Ok(clipped)
}

fn db<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "+inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AudioReport {
    pub sample_rate: u32,
    pub samples: usize,
    pub window: String,
    pub a: f64,
    /// `20 log10(||f||_2 / ||f - f_rec||_2)` before requantisation; `+inf`
    /// when the reconstruction is exact (including digital silence).
    #[serde(serialize_with = "db")]
    pub snr_db: f64,
    /// The same ratio after requantisation to 16 bits.
    #[serde(serialize_with = "db")]
    pub snr_quantized_db: f64,
    pub clipped: usize,
    pub tail_estimate: Option<f64>,
    pub warnings: Vec<String>,
}

pub fn snr_db(reference: &[f64], test: &[f64]) -> f64 {
    let signal: f64 = reference.iter().map(|v| v * v).sum();
    let noise: f64 = reference.iter().zip(test).map(|(a, b)| (a - b) * (a - b)).sum();
    if noise == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (signal / noise).log10()
    }
}

/// Reconstructs the audio through the filter bank at cutoff `a` (the full
/// band `pi * sample_rate` when `None`) and returns the output samples with
/// a report.
pub fn roundtrip(audio: &Audio, g: &Window, a: Option<f64>) -> Result<(Vec<f64>, AudioReport)> {
    g.require_invertible()?;
    let f = audio.to_signal()?;
    let band = f.grid().band_limit();
    let rec = match a {
        None => filter_bank_reconstruct(&f, g)?,
        Some(a) => invert_multiplier(&f, g, TruncationPair::symmetric(a)?)?.normalize(g)?,
    };
    let out: Vec<f64> = rec.signal.values().iter().map(|v| v.re).collect();
    let (pcm, clipped) = quantize(&out);
    let quantized: Vec<f64> = pcm.iter().map(|&q| q as f64 / FULL_SCALE).collect();
    let report = AudioReport {
        sample_rate: audio.sample_rate,
        samples: audio.samples.len(),
        window: g.label(),
        a: a.map_or(band, |a| a.min(band)),
        snr_db: snr_db(&audio.samples, &out),
        snr_quantized_db: snr_db(&audio.samples, &quantized),
        clipped,
        tail_estimate: rec.diagnostics.tail_estimate,
        warnings: rec.diagnostics.warnings,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_rounds_half_to_even_and_counts_clips() {
        let (q, c) = quantize(&[0.5 / FULL_SCALE, 1.5 / FULL_SCALE, -2.5 / FULL_SCALE, 1.0, -1.0, -1.5]);
        assert_eq!(q, vec![0, 2, -2, i16::MAX, i16::MIN, i16::MIN]);
        assert_eq!(c, 2);
    }

    #[test]
    fn snr_of_identical_is_infinite() {
        assert_eq!(snr_db(&[0.0, 0.0], &[0.0, 0.0]), f64::INFINITY);
        assert!((snr_db(&[1.0, 1.0], &[1.1, 0.9]) - 20.0).abs() < 1e-12);
    }
}
